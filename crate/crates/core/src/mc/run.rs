use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::mc::compile::{ConcreteTa, Cons};
use crate::mc::dbm;
use crate::mc::zone::explore;
use crate::model::{ClockValuation, LocId, ParamValuation, Pta, Rat, StateFormula};

/// `(q0, 0) -d0-> -t1-> (q1, w1) -d1-> ... -tl-> (ql, wl) -dl->`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteRun {
    pub start: LocId,
    /// `l + 1` delays; `delays[i]` precedes `transitions[i]`.
    pub delays: Vec<Rat>,
    /// Transition indices into the source automaton.
    pub transitions: Vec<usize>,
}

/// A state visited by a run, after the step that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunStep {
    Delay { delay: Rat, loc: LocId, clocks: ClockValuation },
    Action { transition: usize, loc: LocId, clocks: ClockValuation },
}

impl ConcreteRun {
    pub fn empty(start: LocId) -> Self {
        ConcreteRun { start, delays: vec![Rat::zero()], transitions: vec![] }
    }

    /// Alternating delay and action steps with the resulting states.
    pub fn steps(&self, pta: &Pta) -> Vec<RunStep> {
        let mut loc = self.start;
        let mut w = ClockValuation::zero(pta.num_clocks());
        let mut out = Vec::new();
        for (i, d) in self.delays.iter().enumerate() {
            w = w.delayed(*d);
            out.push(RunStep::Delay { delay: *d, loc, clocks: w.clone() });
            if let Some(&t) = self.transitions.get(i) {
                let tr = &pta.transitions[t];
                w = tr.resets.apply(&w);
                loc = tr.dst;
                out.push(RunStep::Action { transition: t, loc, clocks: w.clone() });
            }
        }
        out
    }

    pub fn final_loc(&self, pta: &Pta) -> LocId {
        self.transitions.last().map_or(self.start, |&t| pta.transitions[t].dst)
    }

    /// `ceil` of the largest clock value along the run.
    pub fn max_clock_ceil(&self, pta: &Pta) -> u64 {
        self.steps(pta)
            .iter()
            .map(|s| match s {
                RunStep::Delay { clocks, .. } | RunStep::Action { clocks, .. } => clocks.max_value(),
            })
            .max()
            .unwrap_or_else(Rat::zero)
            .ceil()
            .to_integer()
            .to_u64()
            .unwrap_or(0)
    }
}

/// Checks every delay, guard and invariant of `run` under `params`, and that the last
/// state satisfies `target` when given. Returns the final location and valuation.
pub fn replay(
    pta: &Pta,
    params: &ParamValuation,
    run: &ConcreteRun,
    target: Option<&StateFormula>,
) -> Result<(LocId, ClockValuation)> {
    let fail = |msg: String| Err(Error::Replay(msg));
    if run.delays.len() != run.transitions.len() + 1 {
        return fail("a run needs one more delay than transitions".into());
    }
    if run.start != pta.init {
        return fail("run does not start in the initial location".into());
    }
    let mut loc = run.start;
    let mut w = ClockValuation::zero(pta.num_clocks());
    if !pta.invariant(loc).holds(params, &w)? {
        return fail("initial valuation violates the initial invariant".into());
    }
    for (i, d) in run.delays.iter().enumerate() {
        if *d < Rat::zero() {
            return fail(format!("negative delay at step {i}"));
        }
        w = w.delayed(*d);
        // invariants are convex: both ends of the delay suffice
        if !pta.invariant(loc).holds(params, &w)? {
            return fail(format!("invariant of {} violated after delay {i}", pta.locations[loc.0]));
        }
        let Some(&t) = run.transitions.get(i) else { break };
        let tr = pta.transitions.get(t).ok_or_else(|| Error::Replay(format!("unknown transition {t}")))?;
        if tr.src != loc {
            return fail(format!("transition {t} does not leave {}", pta.locations[loc.0]));
        }
        if !tr.guard.holds(params, &w)? {
            return fail(format!("guard of transition {t} violated at step {i}"));
        }
        w = tr.resets.apply(&w);
        loc = tr.dst;
        if !pta.invariant(loc).holds(params, &w)? {
            return fail(format!("invariant of {} violated on entry", pta.locations[loc.0]));
        }
    }
    if let Some(f) = target {
        if !f.holds(loc, params, &w)? {
            return fail("final state does not satisfy the target".into());
        }
    }
    Ok((loc, w))
}

/// A concrete run reaching `target`, with `T = ceil(max clock value)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub run: ConcreteRun,
    pub max_clock: u64,
}

/// Symbolic time `c + k*eps`.
type Sym = (i64, i64);

/// Shortest-path weight `c - k*eps`; the lexicographic order on `(c, -k)` is the order
/// of the weights for infinitesimal `eps`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Weight(i64, i64);

impl Weight {
    fn of(c: i64, eps: i64) -> Weight {
        Weight(c, -eps)
    }

    fn add(self, o: Weight) -> Weight {
        Weight(self.0 + o.0, self.1 + o.1)
    }
}

/// `t_u - t_w <= c - s*eps`
#[derive(Clone, Copy)]
struct Edge {
    w: usize,
    u: usize,
    c: i64,
    s: i64,
}

/// Difference constraints over transition times `t_0 = 0, t_1, ..., t_{l+1}`.
struct TimeSystem {
    vars: usize,
    edges: Vec<Edge>,
    feasible: bool,
}

impl TimeSystem {
    fn new(vars: usize) -> Self {
        let mut sys = TimeSystem { vars, edges: vec![], feasible: true };
        for i in 0..vars - 1 {
            sys.edge(i + 1, i, 0, false); // t_i <= t_{i+1}
        }
        sys
    }

    fn edge(&mut self, w: usize, u: usize, c: i64, strict: bool) {
        if u == w {
            if c < 0 || (c == 0 && strict) {
                self.feasible = false;
            }
            return;
        }
        self.edges.push(Edge { w, u, c, s: strict as i64 });
    }

    /// Adds `x_i - x_j <= b` at time `t_a`, where clock `x` was last reset at `t_{r[x]}` to `v[x]`.
    fn at(&mut self, a: usize, cons: &Cons, r: &[usize], v: &[i64]) {
        let c = dbm::bound_value(cons.b);
        let strict = dbm::bound_is_strict(cons.b);
        let (i, j) = (cons.i, cons.j);
        match (i, j) {
            (0, 0) => self.edge(0, 0, c, strict),
            // t_a - t_ri + v_i <= c
            (i, 0) => self.edge(r[i], a, c - v[i], strict),
            // t_rj - t_a - v_j <= c
            (0, j) => self.edge(a, r[j], c + v[j], strict),
            // t_rj - t_ri + v_i - v_j <= c
            (i, j) => self.edge(r[i], r[j], c - v[i] + v[j], strict),
        }
    }

    /// Pointwise-least solution as symbolic times, or `None` when infeasible.
    fn solve(&self) -> Option<Vec<Sym>> {
        if !self.feasible {
            return None;
        }
        let n = self.vars;
        let mut d: Vec<Vec<Option<Weight>>> = vec![vec![None; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = Some(Weight(0, 0));
        }
        for e in &self.edges {
            let w = Weight::of(e.c, e.s);
            if d[e.w][e.u].is_none_or(|old| w < old) {
                d[e.w][e.u] = Some(w);
            }
        }
        #[allow(clippy::needless_range_loop)]
        for k in 0..n {
            for i in 0..n {
                let Some(ik) = d[i][k] else { continue };
                for j in 0..n {
                    if let Some(kj) = d[k][j] {
                        let via = ik.add(kj);
                        if d[i][j].is_none_or(|old| via < old) {
                            d[i][j] = Some(via);
                        }
                    }
                }
            }
        }
        if (0..n).any(|i| d[i][i].is_some_and(|w| w < Weight(0, 0))) {
            return None;
        }
        // t_0 - t_i <= d(i, 0), hence t_i >= -d(i, 0)
        Some(
            (0..n)
                .map(|i| {
                    let Weight(c, negk) = d[i][0].expect("every time reaches t_0");
                    (-c, -negk)
                })
                .collect(),
        )
    }

    /// A positive `eps` for which the symbolic solution satisfies every edge.
    fn epsilon(&self, t: &[Sym]) -> Rat {
        let mut eps = Rat::new(1, 2);
        for e in &self.edges {
            let slack = e.c - (t[e.u].0 - t[e.w].0);
            let q = t[e.u].1 - t[e.w].1 + e.s;
            if q > 0 && slack > 0 {
                eps = eps.min(Rat::new(slack, q));
            }
        }
        eps
    }
}

/// Extracts a run of `A[gamma]` reaching `target`, choosing least transition times.
pub fn witness_run(pta: &Pta, params: &ParamValuation, target: &StateFormula) -> Result<Witness> {
    let ta = ConcreteTa::new(pta, params, Some(target))?;
    if ta.target.is_empty() {
        return Err(Error::NoWitness);
    }
    let ex = explore(&ta, true);
    let (mut node, disjunct) = ex.hit.ok_or(Error::NoWitness)?;
    let mut path = Vec::new();
    while let Some((parent, t)) = ex.nodes[node].parent {
        path.push(t);
        node = parent;
    }
    path.reverse();

    let l = path.len();
    let n = ta.clocks + 1;
    let mut sys = TimeSystem::new(l + 2);
    let mut r = vec![0usize; n];
    let mut v = vec![0i64; n];
    let mut loc = ta.init;
    let inv = |q: LocId| ta.invariants[q.0].as_deref().unwrap_or(&[]);
    for c in inv(loc) {
        sys.at(0, c, &r, &v);
    }
    for (i, &t) in path.iter().enumerate() {
        let tr = ta.transitions[t].as_ref().expect("explored transitions are satisfiable");
        let depart = i + 1;
        for c in inv(loc).iter().chain(&tr.guard) {
            sys.at(depart, c, &r, &v);
        }
        for &(x, b) in &tr.resets {
            r[x] = depart;
            v[x] = b;
        }
        loc = tr.dst;
        for c in inv(loc) {
            sys.at(depart, c, &r, &v);
        }
    }
    let last = l + 1;
    for c in inv(loc).iter().chain(&ta.target[disjunct].cons) {
        sys.at(last, c, &r, &v);
    }

    let sym = sys.solve().ok_or(Error::NoWitness)?;
    let eps = sys.epsilon(&sym);
    let times: Vec<Rat> =
        sym.iter().map(|&(c, k)| Rat::from_integer(c) + eps * Rat::from_integer(k)).collect();
    let run = ConcreteRun {
        start: ta.init,
        delays: times.windows(2).map(|w| w[1] - w[0]).collect(),
        transitions: path,
    };
    let max_clock = run.max_clock_ceil(pta);
    Ok(Witness { run, max_clock })
}
