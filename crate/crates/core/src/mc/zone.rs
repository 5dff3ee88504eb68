use std::collections::{HashMap, VecDeque};

use crate::error::Result;
use crate::mc::compile::{apply, ConcreteTa};
use crate::mc::dbm::Dbm;
use crate::model::{LocId, ParamValuation, Pta, StateFormula};

/// A location with a nonempty, closed, time-elapsed zone inside its invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymState {
    pub loc: LocId,
    pub zone: Dbm,
}

#[derive(Clone, Debug)]
pub(crate) struct Node {
    pub state: SymState,
    /// Predecessor node and the transition index taken from it.
    pub parent: Option<(usize, usize)>,
}

pub(crate) struct Exploration {
    pub nodes: Vec<Node>,
    /// First node meeting the target, with the matching disjunct.
    pub hit: Option<(usize, usize)>,
}

fn target_hit(ta: &ConcreteTa, s: &SymState) -> Option<usize> {
    ta.target.iter().position(|d| {
        d.matches_loc(s.loc) && {
            let mut z = s.zone.clone();
            apply(&mut z, &d.cons)
        }
    })
}

/// Delay closure inside `inv`, followed by normalization.
fn elapse(ta: &ConcreteTa, loc: LocId, mut zone: Dbm) -> Vec<Dbm> {
    let Some(inv) = &ta.invariants[loc.0] else {
        return vec![];
    };
    zone.up();
    if !apply(&mut zone, inv) {
        return vec![];
    }
    ta.normalize(zone)
}

/// Breadth-first zone graph exploration with inclusion subsumption.
pub(crate) fn explore(ta: &ConcreteTa, stop_at_target: bool) -> Exploration {
    let mut nodes: Vec<Node> = Vec::new();
    let mut passed: HashMap<LocId, Vec<usize>> = HashMap::new();
    let mut queue = VecDeque::new();

    let mut push = |nodes: &mut Vec<Node>, state: SymState, parent| -> Option<usize> {
        let seen = passed.entry(state.loc).or_default();
        if seen.iter().any(|&i| nodes[i].state.zone.includes(&state.zone)) {
            return None;
        }
        seen.push(nodes.len());
        nodes.push(Node { state, parent });
        Some(nodes.len() - 1)
    };

    let mut init = Dbm::zero(ta.clocks);
    if ta.invariants[ta.init.0].as_ref().is_some_and(|inv| apply(&mut init, inv)) {
        for zone in elapse(ta, ta.init, init) {
            let s = SymState { loc: ta.init, zone };
            if let Some(i) = push(&mut nodes, s, None) {
                queue.push_back(i);
            }
        }
    }

    let mut hit = None;
    while let Some(idx) = queue.pop_front() {
        if hit.is_none() {
            if let Some(d) = target_hit(ta, &nodes[idx].state) {
                hit = Some((idx, d));
                if stop_at_target {
                    break;
                }
            }
        }
        let (loc, zone) = (nodes[idx].state.loc, nodes[idx].state.zone.clone());
        for (ti, t) in ta.transitions.iter().enumerate() {
            let Some(t) = t else { continue };
            if t.src != loc {
                continue;
            }
            let mut z = zone.clone();
            if !apply(&mut z, &t.guard) {
                continue;
            }
            for &(i, b) in &t.resets {
                z.reset(i, b);
            }
            let Some(inv) = &ta.invariants[t.dst.0] else {
                continue;
            };
            if !apply(&mut z, inv) {
                continue;
            }
            for succ in elapse(ta, t.dst, z) {
                let s = SymState { loc: t.dst, zone: succ };
                if let Some(i) = push(&mut nodes, s, Some((idx, ti))) {
                    queue.push_back(i);
                }
            }
        }
    }
    Exploration { nodes, hit }
}

/// Every symbolic state reachable in `A[gamma]`, up to inclusion subsumption.
pub fn reach_zone_graph(pta: &Pta, params: &ParamValuation) -> Result<Vec<SymState>> {
    let ta = ConcreteTa::new(pta, params, None)?;
    Ok(explore(&ta, false).nodes.into_iter().map(|n| n.state).collect())
}

/// `A[gamma] |= E<> target`.
pub fn reachable(pta: &Pta, params: &ParamValuation, target: &StateFormula) -> Result<bool> {
    let ta = ConcreteTa::new(pta, params, Some(target))?;
    if ta.target.is_empty() {
        return Ok(false);
    }
    Ok(explore(&ta, true).hit.is_some())
}
