//! Finite unions of axis-aligned integer boxes over `N^m`.
//!
//! A box is a product of intervals `[lo, hi]` with `hi` possibly infinite. The canonical
//! form produced by [`Region::normalize`] is obtained by a recursive sweep: the first
//! dimension is cut at every box endpoint, maximal runs of slabs whose cross-sections
//! coincide are merged, and each cross-section is canonicalized the same way. Boxes of the
//! result are pairwise disjoint and sorted lexicographically by lower corner, so two
//! regions denote the same set iff their canonical forms are equal.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `[lo, hi]` over the naturals; `hi == None` is `+inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: u64,
    pub hi: Option<u64>,
}

impl Interval {
    pub fn new(lo: u64, hi: Option<u64>) -> Self {
        Interval { lo, hi }
    }

    pub fn point(v: u64) -> Self {
        Interval::new(v, Some(v))
    }

    pub fn closed(lo: u64, hi: u64) -> Self {
        Interval::new(lo, Some(hi))
    }

    pub fn from(lo: u64) -> Self {
        Interval::new(lo, None)
    }

    pub fn all() -> Self {
        Interval::new(0, None)
    }

    pub fn contains(&self, v: u64) -> bool {
        v >= self.lo && self.hi.is_none_or(|h| v <= h)
    }

    fn covers(&self, other: &Interval) -> bool {
        self.lo <= other.lo
            && match (self.hi, other.hi) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(a), Some(b)) => a >= b,
            }
    }

    fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = match (self.hi, other.hi) {
            (None, h) | (h, None) => h,
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        match hi {
            Some(h) if h < lo => None,
            _ => Some(Interval::new(lo, hi)),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(h) => write!(f, "[{},{}]", self.lo, h),
            None => write!(f, "[{},inf)", self.lo),
        }
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(2)?;
        t.serialize_element(&self.lo)?;
        match self.hi {
            Some(h) => t.serialize_element(&h)?,
            None => t.serialize_element("inf")?,
        }
        t.end()
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Hi {
            Num(u64),
            Sentinel(String),
        }

        struct IntervalVisitor;

        impl<'de> Visitor<'de> for IntervalVisitor {
            type Value = Interval;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a pair [lo, hi] with hi a natural or \"inf\"")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Interval, A::Error> {
                let lo: u64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let hi: Hi = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                let hi = match hi {
                    Hi::Num(h) => Some(h),
                    Hi::Sentinel(s) if s == "inf" => None,
                    Hi::Sentinel(s) => return Err(de::Error::custom(format!("bad bound {s:?}"))),
                };
                if hi.is_some_and(|h| h < lo) {
                    return Err(de::Error::custom("interval with hi < lo"));
                }
                Ok(Interval::new(lo, hi))
            }
        }

        deserializer.deserialize_tuple(2, IntervalVisitor)
    }
}

pub type IBox = Vec<Interval>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region {
    dims: usize,
    boxes: Vec<IBox>,
}

impl Region {
    pub fn empty(dims: usize) -> Self {
        Region { dims, boxes: vec![] }
    }

    pub fn full(dims: usize) -> Self {
        Region { dims, boxes: vec![vec![Interval::all(); dims]] }
    }

    /// `{ v | v_i >= t for all i }`
    pub fn up_set(dims: usize, t: u64) -> Self {
        Region { dims, boxes: vec![vec![Interval::from(t); dims]] }
    }

    pub fn from_boxes(dims: usize, boxes: Vec<IBox>) -> Result<Self> {
        for b in &boxes {
            if b.len() != dims {
                return Err(Error::DimensionMismatch { left: dims, right: b.len() });
            }
            if b.iter().any(|iv| iv.hi.is_some_and(|h| h < iv.lo)) {
                return Err(Error::InvalidModel("interval with hi < lo".into()));
            }
        }
        Ok(Region { dims, boxes })
    }

    pub fn from_box(b: IBox) -> Self {
        Region { dims: b.len(), boxes: vec![b] }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn boxes(&self) -> &[IBox] {
        &self.boxes
    }

    fn check_dims(&self, other: &Region) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch { left: self.dims, right: other.dims });
        }
        Ok(())
    }

    pub fn contains(&self, point: &[u64]) -> Result<bool> {
        if point.len() != self.dims {
            return Err(Error::DimensionMismatch { left: self.dims, right: point.len() });
        }
        Ok(self.boxes.iter().any(|b| b.iter().zip(point).all(|(iv, &v)| iv.contains(v))))
    }

    pub fn union(&self, other: &Region) -> Result<Region> {
        self.check_dims(other)?;
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().cloned());
        Ok(Region { dims: self.dims, boxes }.normalize())
    }

    pub fn intersect(&self, other: &Region) -> Result<Region> {
        self.check_dims(other)?;
        let mut boxes = Vec::new();
        for a in &self.boxes {
            for b in &other.boxes {
                let meet: Option<IBox> = a.iter().zip(b).map(|(x, y)| x.intersect(y)).collect();
                if let Some(m) = meet {
                    boxes.push(m);
                }
            }
        }
        Ok(Region { dims: self.dims, boxes }.normalize())
    }

    /// `N^m \ R`
    pub fn complement(&self) -> Region {
        let refs: Vec<&[Interval]> = self.boxes.iter().map(|b| b.as_slice()).collect();
        Region { dims: self.dims, boxes: complement_boxes(&refs, self.dims) }.normalize()
    }

    pub fn normalize(&self) -> Region {
        let refs: Vec<&[Interval]> = self.boxes.iter().map(|b| b.as_slice()).collect();
        Region { dims: self.dims, boxes: canonical(&refs) }
    }

    /// Set equality.
    pub fn set_eq(&self, other: &Region) -> Result<bool> {
        self.check_dims(other)?;
        Ok(self.normalize().boxes == other.normalize().boxes)
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.complement().is_empty()
    }

    /// Inserts a new dimension at `index` fixed to `value`.
    pub fn lift(&self, index: usize, value: u64) -> Region {
        let boxes = self
            .boxes
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.insert(index, Interval::point(value));
                b
            })
            .collect();
        Region { dims: self.dims + 1, boxes }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.boxes.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, b) in self.boxes.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            let parts: Vec<String> = b.iter().map(|iv| iv.to_string()).collect();
            write!(f, "{}", parts.join("x"))?;
        }
        Ok(())
    }
}

/// Slabs of the first dimension cut at every endpoint of `boxes`.
fn slabs(boxes: &[&[Interval]]) -> Vec<Interval> {
    let mut cuts: BTreeSet<u64> = BTreeSet::from([0]);
    for b in boxes {
        cuts.insert(b[0].lo);
        if let Some(h) = b[0].hi {
            cuts.insert(h + 1);
        }
    }
    let cuts: Vec<u64> = cuts.into_iter().collect();
    cuts.iter().enumerate().map(|(k, &lo)| Interval::new(lo, cuts.get(k + 1).map(|next| next - 1))).collect()
}

fn canonical(boxes: &[&[Interval]]) -> Vec<IBox> {
    if boxes.is_empty() {
        return vec![];
    }
    if boxes[0].is_empty() {
        return vec![vec![]];
    }
    let mut runs: Vec<(Interval, Vec<IBox>)> = Vec::new();
    for slab in slabs(boxes) {
        let tails: Vec<&[Interval]> = boxes.iter().filter(|b| b[0].covers(&slab)).map(|b| &b[1..]).collect();
        let section = canonical(&tails);
        match runs.last_mut() {
            Some((iv, prev)) if *prev == section => iv.hi = slab.hi,
            _ => runs.push((slab, section)),
        }
    }
    runs.into_iter()
        .flat_map(|(iv, section)| {
            section.into_iter().map(move |mut tail| {
                tail.insert(0, iv);
                tail
            })
        })
        .collect()
}

fn complement_boxes(boxes: &[&[Interval]], dims: usize) -> Vec<IBox> {
    if dims == 0 {
        return if boxes.is_empty() { vec![vec![]] } else { vec![] };
    }
    if boxes.is_empty() {
        return vec![vec![Interval::all(); dims]];
    }
    let mut out = Vec::new();
    for slab in slabs(boxes) {
        let tails: Vec<&[Interval]> = boxes.iter().filter(|b| b[0].covers(&slab)).map(|b| &b[1..]).collect();
        for mut tail in complement_boxes(&tails, dims - 1) {
            tail.insert(0, slab);
            out.push(tail);
        }
    }
    out
}
