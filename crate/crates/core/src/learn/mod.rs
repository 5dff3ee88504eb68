//! Boundary learning for L/U automata outside the exact procedures.
//!
//! Each round labels integer parameter points with [`mc::check`]: uniformly over
//! `[0, B]^m` in round 0, near the current boundary afterwards. The archive of all labels
//! is paired good-to-bad and covered by max-margin segments ([`sequential_cover`]). A query
//! point takes the side of its nearest segment, where a segment extends over the sample
//! points it covers rather than over its whole plane.

mod cover;
mod separator;

pub use cover::{pair_up, sequential_cover, Segment};
pub use separator::{max_margin_separator, Hyperplane, Separation, Q};

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mc;
use crate::model::{classify_params, ParamClass, ParamValuation, Property, Pta};
use crate::par;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LearnConfig {
    /// Samples per round, at least 2.
    pub samples: usize,
    /// Sampling box `[0, box_bound]^m`, at least 1.
    pub box_bound: u64,
    /// Refinement distance to a segment, at least 1.
    pub margin: u64,
    /// Rounds including the initial one, at least 1.
    pub max_rounds: usize,
    pub seed: u64,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig { samples: 40, box_bound: 10, margin: 1, max_rounds: 5, seed: 0 }
    }
}

impl LearnConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Precondition(format!("learn config: {what}")));
        if self.samples < 2 {
            return bad("samples must be at least 2");
        }
        if self.box_bound < 1 {
            return bad("box bound must be at least 1");
        }
        if self.margin < 1 {
            return bad("margin must be at least 1");
        }
        if self.max_rounds < 1 {
            return bad("rounds must be at least 1");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Good,
    Bad,
}

impl Label {
    pub fn from_verdict(feasible: bool) -> Self {
        if feasible {
            Label::Good
        } else {
            Label::Bad
        }
    }

    pub fn is_good(self) -> bool {
        self == Label::Good
    }
}

/// An oracle-labeled parameter point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabeledSample {
    pub point: Vec<u64>,
    pub label: Label,
    pub round: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundReport {
    pub round: usize,
    pub new_samples: usize,
    pub good: usize,
    pub bad: usize,
    /// New samples the previous classifier got wrong; `None` in round 0.
    pub misclassified: Option<usize>,
    pub segments: usize,
    /// Why the round could not contribute, if it could not.
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classifier {
    pub segments: Vec<Segment>,
    pub archive: Vec<LabeledSample>,
    /// The archive is nonempty and every sample is good; no segment exists.
    pub all_good: bool,
    /// The archive is nonempty and every sample is bad; no segment exists.
    pub all_bad: bool,
    pub rounds: Vec<RoundReport>,
    pub config: LearnConfig,
}

impl Classifier {
    /// Covers `archive`; the result has no round reports.
    pub fn fit(archive: Vec<LabeledSample>, config: LearnConfig) -> Self {
        let (goods, bads) = split_labels(&archive);
        let segments = sequential_cover(&goods, &bads);
        Classifier {
            segments,
            all_good: !goods.is_empty() && bads.is_empty(),
            all_bad: goods.is_empty() && !bads.is_empty(),
            archive,
            rounds: Vec::new(),
            config,
        }
    }

    /// The label of `point`: its side of the nearest segment, measured to the segment's
    /// extent (first segment on ties; good when on the plane). Without segments, good iff
    /// the archive was all good.
    pub fn classify(&self, point: &[u64]) -> Label {
        let nearest =
            self.segments.iter().map(|s| (s.reach_sq(point), s)).min_by(|a, b| a.0.cmp(&b.0)).map(|(_, s)| s);
        match nearest {
            Some(s) => Label::from_verdict(s.plane.is_good(point)),
            None => Label::from_verdict(self.all_good),
        }
    }

    pub fn dims(&self) -> usize {
        self.archive.first().map_or(0, |s| s.point.len())
    }
}

fn split_labels(samples: &[LabeledSample]) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let (g, b): (Vec<_>, Vec<_>) = samples.iter().partition(|s| s.label.is_good());
    (g.into_iter().map(|s| s.point.clone()).collect(), b.into_iter().map(|s| s.point.clone()).collect())
}

/// Every parameter must be a lower, upper or unused parameter.
fn check_learnable(pta: &Pta, property: &Property) -> Result<()> {
    if pta.num_params() == 0 {
        return Err(Error::Precondition("the model has no parameters".into()));
    }
    if let Some(i) = classify_params(pta, property).iter().position(|&c| c == ParamClass::Mixed) {
        return Err(Error::Precondition(format!(
            "parameter {} occurs as both a lower and an upper bound",
            pta.params[i]
        )));
    }
    Ok(())
}

/// Labels `points` with the oracle, in parallel when enabled; order is preserved.
pub fn label(
    pta: &Pta,
    property: &Property,
    points: Vec<Vec<u64>>,
    round: usize,
) -> Result<Vec<LabeledSample>> {
    let verdicts = par::try_map(&points, |p| mc::check(pta, &ParamValuation::finite(p), property))?;
    Ok(points
        .into_iter()
        .zip(verdicts)
        .map(|(point, v)| LabeledSample { point, label: Label::from_verdict(v), round })
        .collect())
}

/// `samples` uniform draws from `[0, B]^m`, deduplicated and sorted, then labeled.
pub fn sample_round(
    pta: &Pta,
    property: &Property,
    config: &LearnConfig,
    round: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<LabeledSample>> {
    let m = pta.num_params();
    let points: BTreeSet<Vec<u64>> =
        (0..config.samples).map(|_| (0..m).map(|_| rng.gen_range(0..=config.box_bound)).collect()).collect();
    label(pta, property, points.into_iter().collect(), round)
}

/// Lattice points of `[0, B]^m` within distance `margin` of some segment, sorted.
pub fn boundary_candidates(segments: &[Segment], dims: usize, config: &LearnConfig) -> Vec<Vec<u64>> {
    let w = Q::from_integer(BigInt::from(config.margin));
    let w_sq = &w * &w;
    let limits: Vec<Q> = segments.iter().map(|s| &w_sq * s.plane.norm_sq()).collect();
    let near = |p: &[u64]| {
        segments.iter().zip(&limits).any(|(s, lim)| {
            let e = s.plane.eval(p);
            &e * &e <= *lim
        })
    };
    lattice_box(dims, config.box_bound).into_iter().filter(|p| near(p)).collect()
}

/// Up to `samples` boundary candidates not yet in `archive`, chosen uniformly, then labeled.
pub fn refine(
    pta: &Pta,
    property: &Property,
    classifier: &Classifier,
    round: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<LabeledSample>> {
    let config = &classifier.config;
    let known: BTreeSet<&[u64]> = classifier.archive.iter().map(|s| s.point.as_slice()).collect();
    let fresh: Vec<Vec<u64>> = boundary_candidates(&classifier.segments, pta.num_params(), config)
        .into_iter()
        .filter(|p| !known.contains(p.as_slice()))
        .collect();
    let mut chosen: Vec<Vec<u64>> = fresh.choose_multiple(rng, config.samples).cloned().collect();
    chosen.sort();
    label(pta, property, chosen, round)
}

/// Samples, covers and refines for up to `max_rounds` rounds, stopping early after a
/// refinement round whose new samples the previous classifier all labeled correctly.
///
/// A round without both labels, or without fresh boundary candidates, is recorded in its
/// report; the remaining rounds are skipped when there is no segment to refine around.
pub fn learn_boundary(pta: &Pta, property: &Property, config: &LearnConfig) -> Result<Classifier> {
    config.validate()?;
    check_learnable(pta, property)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let initial = sample_round(pta, property, config, 0, &mut rng)?;
    let new_samples = initial.len();
    let mut classifier = Classifier::fit(initial, config.clone());
    let mut reports = vec![report(&classifier, 0, new_samples, None)];

    for round in 1..config.max_rounds {
        if classifier.segments.is_empty() {
            break;
        }
        let fresh = refine(pta, property, &classifier, round, &mut rng)?;
        let wrong = fresh.iter().filter(|s| classifier.classify(&s.point) != s.label).count();
        let n = fresh.len();
        let mut archive = std::mem::take(&mut classifier.archive);
        archive.extend(fresh);
        classifier = Classifier::fit(archive, config.clone());
        let mut r = report(&classifier, round, n, Some(wrong));
        if n == 0 {
            r.note = Some("no unlabeled lattice point within the margin of a segment".into());
        }
        reports.push(r);
        if wrong == 0 {
            break;
        }
    }
    classifier.rounds = reports;
    Ok(classifier)
}

fn report(c: &Classifier, round: usize, new_samples: usize, misclassified: Option<usize>) -> RoundReport {
    let good = c.archive.iter().filter(|s| s.label.is_good()).count();
    let bad = c.archive.len() - good;
    let note = if c.archive.is_empty() {
        Some("no samples".to_string())
    } else if bad == 0 {
        Some("no infeasible sample; nothing to separate".into())
    } else if good == 0 {
        Some("no feasible sample; nothing to separate".into())
    } else {
        None
    };
    RoundReport { round, new_samples, good, bad, misclassified, segments: c.segments.len(), note }
}

/// A grid point with its oracle and predicted labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridPoint {
    pub point: Vec<u64>,
    pub oracle: Label,
    pub predicted: Label,
}

/// Oracle and classifier labels on every point of `[0, bound]^m`.
pub fn evaluate_grid(
    pta: &Pta,
    property: &Property,
    classifier: &Classifier,
    bound: u64,
) -> Result<Vec<GridPoint>> {
    let points = lattice_box(pta.num_params(), bound);
    let labeled = label(pta, property, points, 0)?;
    Ok(labeled
        .into_iter()
        .map(|s| GridPoint { predicted: classifier.classify(&s.point), oracle: s.label, point: s.point })
        .collect())
}

/// Fraction of grid points whose labels agree.
pub fn agreement(grid: &[GridPoint]) -> f64 {
    if grid.is_empty() {
        return 1.0;
    }
    grid.iter().filter(|g| g.oracle == g.predicted).count() as f64 / grid.len() as f64
}

/// Every point of `[0, bound]^m` in lexicographic order.
pub fn lattice_box(m: usize, bound: u64) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=bound).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}
