use serde_json::{json, Map, Value};

use crate::mc::{ConcreteRun, RunStep};
use crate::model::{ClockValuation, LocId, Pta};
use crate::textio::emit::rat_string;

fn state(pta: &Pta, loc: LocId, clocks: &ClockValuation) -> (Value, Value) {
    let vals: Map<String, Value> = pta
        .clocks
        .iter()
        .zip(clocks.values())
        .map(|(name, v)| (name.clone(), Value::String(rat_string(v))))
        .collect();
    (Value::String(pta.locations[loc.0].clone()), Value::Object(vals))
}

/// JSON object `{"start":..,"steps":[..]}` with alternating delay and action steps.
/// Clock values and delays are exact rationals written as strings.
pub fn emit_run(run: &ConcreteRun, pta: &Pta) -> Value {
    let (start_loc, start_clocks) = state(pta, run.start, &ClockValuation::zero(pta.num_clocks()));
    let steps: Vec<Value> = run
        .steps(pta)
        .iter()
        .map(|s| match s {
            RunStep::Delay { delay, loc, clocks } => {
                let (l, c) = state(pta, *loc, clocks);
                json!({"kind": "delay", "delay": rat_string(delay), "loc": l, "clocks": c})
            }
            RunStep::Action { transition, loc, clocks } => {
                let (l, c) = state(pta, *loc, clocks);
                json!({
                    "kind": "action",
                    "action": pta.transitions[*transition].action,
                    "transition": transition,
                    "loc": l,
                    "clocks": c,
                })
            }
        })
        .collect();
    json!({
        "start": {"loc": start_loc, "clocks": start_clocks},
        "steps": steps,
    })
}
