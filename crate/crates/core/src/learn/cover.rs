//! Pairing of good and bad samples and sequential covering by max-margin segments.

use std::collections::BTreeSet;
use std::ops::Range;

use serde::Serialize;

use crate::learn::separator::{max_margin_separator, Hyperplane};

/// A boundary segment: the max-margin plane of the pairs in `pairs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Segment {
    pub plane: Hyperplane,
    pub margin: f64,
    /// Covered pair indices, a contiguous block of the pairing.
    pub pairs: Range<usize>,
    /// The distinct points of the covered pairs, sorted; the part of the plane they
    /// straddle is the segment proper.
    pub extent: Vec<Vec<u64>>,
}

impl Segment {
    /// Squared distance from `point` to the nearest point of the extent.
    pub fn reach_sq(&self, point: &[u64]) -> u128 {
        self.extent.iter().map(|e| dist_sq(point, e)).min().unwrap_or(u128::MAX)
    }
}

/// Squared Euclidean distance.
fn dist_sq(x: &[u64], y: &[u64]) -> u128 {
    x.iter()
        .zip(y)
        .map(|(&a, &c)| {
            let d = a.abs_diff(c) as u128;
            d * d
        })
        .sum()
}

/// Nearest point of `others` to `p`; ties go to the lexicographically least point.
fn nearest<'a>(p: &[u64], others: &'a [Vec<u64>]) -> &'a Vec<u64> {
    others.iter().min_by(|a, b| dist_sq(p, a).cmp(&dist_sq(p, b)).then(a.cmp(b))).unwrap()
}

/// Pairs every good point with its nearest bad point and every bad point with its nearest
/// good point, without repeating a pair, nearest pairs first.
///
/// Ties in distance go to the lexicographic order of the good point, then the bad point.
/// The result does not depend on input order, and each pair straddles the boundary as
/// closely as the samples allow.
pub fn pair_up(goods: &[Vec<u64>], bads: &[Vec<u64>]) -> Vec<(Vec<u64>, Vec<u64>)> {
    if goods.is_empty() || bads.is_empty() {
        return Vec::new();
    }
    let mut pairs: BTreeSet<(u128, Vec<u64>, Vec<u64>)> = BTreeSet::new();
    for g in goods {
        let b = nearest(g, bads);
        pairs.insert((dist_sq(g, b), g.clone(), b.clone()));
    }
    for b in bads {
        let g = nearest(b, goods);
        pairs.insert((dist_sq(g, b), g.clone(), b.clone()));
    }
    pairs.into_iter().map(|(_, g, b)| (g, b)).collect()
}

fn split(pairs: &[(Vec<u64>, Vec<u64>)]) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    pairs.iter().cloned().unzip()
}

/// Covers the pairing of `goods` and `bads` from the front: the longest separable prefix
/// of the remaining pairs becomes a segment, then the rest is covered the same way.
///
/// Separability is monotone in the prefix length, so the prefix is found by binary search.
/// A head pair that is not separable on its own (a point labeled both ways) is skipped.
pub fn sequential_cover(goods: &[Vec<u64>], bads: &[Vec<u64>]) -> Vec<Segment> {
    let pairs = pair_up(goods, bads);
    let separable = |r: Range<usize>| {
        let (g, b) = split(&pairs[r]);
        max_margin_separator(&g, &b)
    };
    let mut segments = Vec::new();
    let mut start = 0;
    while start < pairs.len() {
        if separable(start..start + 1).is_none() {
            start += 1;
            continue;
        }
        // invariant: prefix of length lo separable, length hi + 1 not (or out of range)
        let (mut lo, mut hi) = (1, pairs.len() - start);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if separable(start..start + mid).is_some() {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let s = separable(start..start + lo).unwrap();
        let (g, b) = split(&pairs[start..start + lo]);
        let mut extent: Vec<Vec<u64>> = g.into_iter().chain(b).collect();
        extent.sort();
        extent.dedup();
        segments.push(Segment { plane: s.plane, margin: s.margin, pairs: start..start + lo, extent });
        start += lo;
    }
    segments
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_are_nearest_first() {
        let g = vec![vec![5, 5], vec![1, 1]];
        let b = vec![vec![0, 0], vec![9, 9]];
        let p = pair_up(&g, &b);
        assert_eq!(p, vec![(vec![1, 1], vec![0, 0]), (vec![5, 5], vec![9, 9])]);
    }

    #[test]
    fn every_point_is_in_some_pair() {
        let g = vec![vec![3], vec![4], vec![5]];
        let b = vec![vec![0], vec![1]];
        let p = pair_up(&g, &b);
        // distances 2, 3, 3, 4; the tie goes to the smaller good point
        assert_eq!(p.len(), 4);
        assert_eq!(p[0], (vec![3], vec![1]));
        assert_eq!(p[1], (vec![3], vec![0]));
        assert_eq!(p[3], (vec![5], vec![1]));
    }

    #[test]
    fn separable_input_gives_one_segment() {
        let g = vec![vec![3], vec![4], vec![7]];
        let b = vec![vec![0], vec![1]];
        let s = sequential_cover(&g, &b);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].pairs, 0..4);
        assert_eq!(s[0].extent.len(), 5);
    }
}
