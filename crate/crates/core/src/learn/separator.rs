//! Exact hard-margin linear separation.
//!
//! The max-margin plane between two finite point sets is the perpendicular bisector of the
//! closest pair of points of their convex hulls. That pair's difference `z` is the
//! min-norm point of `conv(G) - conv(B)`, which Wolfe's algorithm finds exactly over the
//! rationals. The sets are strictly separable iff `z != 0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

pub type Q = BigRational;

fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// `weights . x + bias = 0`; points with `good_side * (weights . x + bias) >= 0` are good.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    /// Not all zero; `max |w_i| = 1` and the first nonzero weight is positive.
    pub weights: Vec<Q>,
    pub bias: Q,
    /// `1` or `-1`.
    pub good_side: i8,
}

impl Hyperplane {
    pub fn dims(&self) -> usize {
        self.weights.len()
    }

    /// `weights . x + bias`.
    pub fn eval(&self, point: &[u64]) -> Q {
        debug_assert_eq!(point.len(), self.weights.len());
        self.weights
            .iter()
            .zip(point)
            .fold(self.bias.clone(), |acc, (w, &x)| acc + w * Q::from_integer(BigInt::from(x)))
    }

    pub fn norm_sq(&self) -> Q {
        self.weights.iter().fold(Q::zero(), |acc, w| acc + w * w)
    }

    /// Squared Euclidean distance from `point` to the plane, exactly.
    pub fn distance_sq(&self, point: &[u64]) -> Q {
        let e = self.eval(point);
        &e * &e / self.norm_sq()
    }

    pub fn distance(&self, point: &[u64]) -> f64 {
        self.distance_sq(point).to_f64().unwrap_or(f64::INFINITY).sqrt()
    }

    /// Points on the plane count as good.
    pub fn is_good(&self, point: &[u64]) -> bool {
        let e = self.eval(point);
        if self.good_side > 0 {
            !e.is_negative()
        } else {
            !e.is_positive()
        }
    }
}

impl Serialize for Hyperplane {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            weights: Vec<String>,
            bias: String,
            good_side: i8,
        }
        Repr {
            weights: self.weights.iter().map(ToString::to_string).collect(),
            bias: self.bias.to_string(),
            good_side: self.good_side,
        }
        .serialize(s)
    }
}

/// A max-margin plane and its geometric margin, the distance to the nearest input point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Separation {
    pub plane: Hyperplane,
    pub margin: f64,
}

/// The hard-margin separator of `goods` from `bads`, or `None` when their convex hulls
/// intersect or either set is empty. All points must have the same dimension.
pub fn max_margin_separator(goods: &[Vec<u64>], bads: &[Vec<u64>]) -> Option<Separation> {
    if goods.is_empty() || bads.is_empty() {
        return None;
    }
    let dims = goods[0].len();
    assert!(goods.iter().chain(bads).all(|p| p.len() == dims), "points of mixed dimension");
    if dims == 0 {
        return None;
    }
    let g: Vec<Vec<i64>> = dedup(goods);
    let b: Vec<Vec<i64>> = dedup(bads);
    let z = min_norm_difference(&g, &b);
    if z.iter().all(Zero::is_zero) {
        return None;
    }
    let dot = |p: &[i64]| z.iter().zip(p).fold(Q::zero(), |acc, (zi, &pi)| acc + zi * q(pi));
    let lo_good = g.iter().map(|p| dot(p)).min().unwrap();
    let hi_bad = b.iter().map(|p| dot(p)).max().unwrap();
    // at the optimum lo_good - hi_bad = |z|^2
    let mut bias = -(lo_good + hi_bad) / q(2);
    let norm_sq = z.iter().fold(Q::zero(), |acc, zi| acc + zi * zi);
    let margin = norm_sq.to_f64().unwrap().sqrt() / 2.0;

    let scale = z.iter().map(Signed::abs).max().unwrap();
    let mut weights: Vec<Q> = z.iter().map(|zi| zi / &scale).collect();
    bias /= &scale;
    let mut good_side = 1;
    if weights.iter().find(|w| !w.is_zero()).unwrap().is_negative() {
        weights.iter_mut().for_each(|w| *w = -w.clone());
        bias = -bias;
        good_side = -1;
    }
    Some(Separation { plane: Hyperplane { weights, bias, good_side }, margin })
}

fn dedup(points: &[Vec<u64>]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = points
        .iter()
        .map(|p| p.iter().map(|&x| i64::try_from(x).expect("coordinate fits i64")).collect())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Wolfe's min-norm point of `conv({g - b})`, with vertices generated on demand.
fn min_norm_difference(goods: &[Vec<i64>], bads: &[Vec<i64>]) -> Vec<Q> {
    let diff = |g: &[i64], b: &[i64]| -> Vec<i64> { g.iter().zip(b).map(|(x, y)| x - y).collect() };
    let dot = |x: &[Q], p: &[i64]| x.iter().zip(p).fold(Q::zero(), |acc, (xi, &pi)| acc + xi * q(pi));
    // vertex minimizing x . (g - b)
    let lmo = |x: &[Q]| -> Vec<i64> {
        let g = goods.iter().min_by(|a, b| dot(x, a).cmp(&dot(x, b))).unwrap();
        let b = bads.iter().max_by(|a, b| dot(x, a).cmp(&dot(x, b))).unwrap();
        diff(g, b)
    };

    let mut corral: Vec<Vec<i64>> = vec![diff(&goods[0], &bads[0])];
    let mut lambda: Vec<Q> = vec![Q::one()];
    let mut x = combine(&corral, &lambda);
    loop {
        let p = lmo(&x);
        let xx = x.iter().fold(Q::zero(), |acc, xi| acc + xi * xi);
        if xx <= dot(&x, &p) {
            return x;
        }
        // x is the min-norm point of aff(corral), so x . s = |x|^2 there and p is new
        corral.push(p);
        lambda.push(Q::zero());
        loop {
            let alpha = affine_min_norm(&corral);
            if alpha.iter().all(Signed::is_positive) {
                lambda = alpha;
                break;
            }
            // step from lambda toward alpha until a coefficient hits zero
            let theta = lambda
                .iter()
                .zip(&alpha)
                .filter(|(_, a)| !a.is_positive())
                .map(|(l, a)| {
                    let d = l - a;
                    if d.is_zero() {
                        Q::zero()
                    } else {
                        l / d
                    }
                })
                .min()
                .unwrap();
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = &*l + &theta * (a - &*l);
            }
            let mut keep = lambda.iter().map(Signed::is_positive);
            let mut i = 0;
            corral.retain(|_| {
                i += 1;
                keep.next().unwrap()
            });
            debug_assert!(i > corral.len());
            lambda.retain(Signed::is_positive);
        }
        x = combine(&corral, &lambda);
    }
}

fn combine(points: &[Vec<i64>], coeffs: &[Q]) -> Vec<Q> {
    let dims = points[0].len();
    let mut out = vec![Q::zero(); dims];
    for (p, c) in points.iter().zip(coeffs) {
        for (o, &pi) in out.iter_mut().zip(p) {
            *o += c * q(pi);
        }
    }
    out
}

/// Affine coefficients of the min-norm point of `aff(points)`; the points must be affinely
/// independent. Solves `[S^T S 1; 1^T 0] [a; mu] = [0; 1]`.
fn affine_min_norm(points: &[Vec<i64>]) -> Vec<Q> {
    let k = points.len();
    let mut m: Vec<Vec<Q>> = Vec::with_capacity(k + 1);
    for pi in points {
        let mut row: Vec<Q> =
            points.iter().map(|pj| q(pi.iter().zip(pj).map(|(a, b)| a * b).sum())).collect();
        row.push(Q::one());
        row.push(Q::zero());
        m.push(row);
    }
    let mut last = vec![Q::one(); k];
    last.push(Q::zero());
    last.push(Q::one());
    m.push(last);
    let mut sol = solve(m);
    sol.truncate(k);
    sol
}

/// Gauss-Jordan elimination on an augmented nonsingular system.
fn solve(mut m: Vec<Vec<Q>>) -> Vec<Q> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero()).expect("affinely independent corral");
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let (src, dst) = if r < col {
                    let (a, b) = m.split_at_mut(col);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = m.split_at_mut(r);
                    (&a[col], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src) {
                    *d -= &f * s;
                }
            }
        }
    }
    m.into_iter().map(|row| row[n].clone()).collect()
}
