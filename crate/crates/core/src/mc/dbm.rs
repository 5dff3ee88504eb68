//! Difference bound matrices over integer bounds.
//!
//! A bound is encoded as `2c + 1` for `<= c` and `2c` for `< c`, so that the integer
//! order on encodings is the tightness order on bounds. `INF` is the absent bound.

use std::fmt;

pub type Bound = i64;

pub const INF: Bound = i64::MAX;
/// `<= 0`
pub const LE_ZERO: Bound = 1;

pub fn bound(c: i64, strict: bool) -> Bound {
    (c << 1) | if strict { 0 } else { 1 }
}

pub fn bound_value(b: Bound) -> i64 {
    b >> 1
}

pub fn bound_is_strict(b: Bound) -> bool {
    b & 1 == 0
}

pub fn add(a: Bound, b: Bound) -> Bound {
    if a == INF || b == INF {
        INF
    } else {
        (((a >> 1) + (b >> 1)) << 1) | (a & b & 1)
    }
}

/// Complement of `x_i - x_j < b`, i.e. the bound on `x_j - x_i` of the negation.
pub fn negate(b: Bound) -> Bound {
    bound(-bound_value(b), !bound_is_strict(b))
}

/// `n x n` matrix, `n = clocks + 1`; entry `(i, j)` bounds `x_i - x_j`, `x_0 = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dbm {
    n: usize,
    m: Vec<Bound>,
}

impl Dbm {
    /// The single valuation with every clock at 0.
    pub fn zero(clocks: usize) -> Self {
        let n = clocks + 1;
        Dbm { n, m: vec![LE_ZERO; n * n] }
    }

    /// All nonnegative valuations.
    pub fn universe(clocks: usize) -> Self {
        let n = clocks + 1;
        let mut m = vec![INF; n * n];
        for i in 0..n {
            m[i * n + i] = LE_ZERO;
            m[i] = LE_ZERO;
        }
        Dbm { n, m }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Bound {
        self.m[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, b: Bound) {
        self.m[i * self.n + j] = b;
    }

    /// Shortest-path closure. Returns `false` when the zone is empty.
    pub fn canonicalize(&mut self) -> bool {
        let n = self.n;
        for k in 0..n {
            for i in 0..n {
                let ik = self.get(i, k);
                if ik == INF {
                    continue;
                }
                for j in 0..n {
                    let via = add(ik, self.get(k, j));
                    if via < self.get(i, j) {
                        self.set(i, j, via);
                    }
                }
            }
        }
        (0..n).all(|i| self.get(i, i) >= LE_ZERO)
    }

    pub fn is_empty(&self) -> bool {
        (0..self.n).any(|i| self.get(i, i) < LE_ZERO)
    }

    /// Intersects with `x_i - x_j <= b` keeping the matrix closed. Returns `false` when the
    /// result is empty, in which case the matrix is marked empty.
    pub fn constrain(&mut self, i: usize, j: usize, b: Bound) -> bool {
        if add(self.get(j, i), b) < LE_ZERO {
            self.set(0, 0, bound(-1, false));
            return false;
        }
        if b >= self.get(i, j) {
            return true;
        }
        self.set(i, j, b);
        let n = self.n;
        for k in 0..n {
            let ki = self.get(k, i);
            if ki == INF {
                continue;
            }
            let kij = add(ki, b);
            for l in 0..n {
                let via = add(kij, self.get(j, l));
                if via < self.get(k, l) {
                    self.set(k, l, via);
                }
            }
        }
        true
    }

    /// Delay: removes upper bounds on every clock.
    pub fn up(&mut self) {
        for i in 1..self.n {
            self.set(i, 0, INF);
        }
    }

    /// `x_i := v` on a closed, nonempty matrix.
    pub fn reset(&mut self, i: usize, v: i64) {
        let n = self.n;
        for j in 0..n {
            if j == i {
                continue;
            }
            let to_j = add(bound(v, false), self.get(0, j));
            let from_j = add(self.get(j, 0), bound(-v, false));
            self.set(i, j, to_j);
            self.set(j, i, from_j);
        }
        self.set(i, i, LE_ZERO);
    }

    /// `other` is a subset of `self`. Both must be closed.
    pub fn includes(&self, other: &Dbm) -> bool {
        self.m.iter().zip(&other.m).all(|(a, b)| a >= b)
    }

    /// Per-clock maximal-constant extrapolation; `k[0]` must be 0. The result is closed.
    pub fn extrapolate(&mut self, k: &[i64]) {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let b = self.get(i, j);
                if b == INF {
                    continue;
                }
                if i != 0 && b > bound(k[i], false) {
                    self.set(i, j, INF);
                } else if b < bound(-k[j], true) {
                    self.set(i, j, bound(-k[j], true));
                }
            }
        }
        self.canonicalize();
    }

    /// True when the zone satisfies `x_i - x_j <= b` everywhere.
    pub fn satisfies(&self, i: usize, j: usize, b: Bound) -> bool {
        self.get(i, j) <= b
    }

    /// True when the zone meets `x_i - x_j <= b`.
    pub fn intersects(&self, i: usize, j: usize, b: Bound) -> bool {
        add(self.get(j, i), b) >= LE_ZERO
    }
}

impl fmt::Debug for Dbm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Dbm[")?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| match self.get(i, j) {
                    INF => "inf".to_string(),
                    b => format!("{}{}", if bound_is_strict(b) { "<" } else { "<=" }, bound_value(b)),
                })
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}
