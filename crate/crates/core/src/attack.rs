//! Attack plans: the shortest observer path to an estimate that gives the
//! secret away, as an input word to inject and the observation that
//! confirms the secret.
//!
//! Plans are open-loop. A plan shows that the observation can happen and
//! that seeing it exposes the secret; the system may of course answer
//! differently on another run.

use serde_json::{json, Value};

use crate::error::Result;
use crate::model::{OpenDes, StateSet};
use crate::semantics::{estimate_observed, Label};
use crate::verify::verify_rcso;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackPlan {
    pub labels: Vec<Label>,
    pub inputs: Vec<usize>,
    pub observation: Vec<usize>,
    pub final_estimate: StateSet,
    pub secret: StateSet,
}

impl AttackPlan {
    pub fn to_json(&self, model: &OpenDes) -> Value {
        let a = model.alphabet();
        json!({
            "inputs": self.inputs.iter().map(|&x| &a.inputs()[x]).collect::<Vec<_>>(),
            "observation": self.observation.iter().map(|&d| &a.outputs()[d]).collect::<Vec<_>>(),
            "estimate": model.set_names(&self.final_estimate),
            "labels": self.labels.iter().map(|l| l.display(a).to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Shortest plan exposing `secret`, or `None` when the model is opaque.
pub fn synthesize_attack(model: &OpenDes, secret: &StateSet) -> Result<Option<AttackPlan>> {
    let verdict = verify_rcso(model, secret)?;
    Ok(verdict.witness.map(|w| AttackPlan {
        labels: w.labels,
        inputs: w.inputs,
        observation: w.observation,
        final_estimate: w.estimate,
        secret: secret.clone(),
    }))
}

/// Re-checks a plan against run enumeration alone: the inputs and
/// observation must be the projections of the labels, and the runs showing
/// exactly those labels must exist and all end in the secret.
pub fn replay(model: &OpenDes, plan: &AttackPlan) -> Result<bool> {
    let inputs: Vec<usize> = plan.labels.iter().filter_map(|l| l.input).collect();
    let observation: Vec<usize> = plan.labels.iter().filter_map(|l| l.output).collect();
    if inputs != plan.inputs || observation != plan.observation {
        return Ok(false);
    }
    let e = estimate_observed(model, &plan.labels)?;
    Ok(!e.is_empty() && e.is_subset(&plan.secret))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled::fig1;

    fn plan(m: &OpenDes, secret: &[&str]) -> Option<AttackPlan> {
        synthesize_attack(m, &m.state_set(secret).unwrap()).unwrap()
    }

    #[test]
    fn plans_for_examples() {
        let m = fig1();
        let a = m.alphabet();
        let p = plan(&m, &["3"]).unwrap();
        assert_eq!(p.inputs, a.input_word(&["x1", "x1", "x2"]).unwrap());
        assert_eq!(a.outputs()[*p.observation.last().unwrap()], "a");
        assert_eq!(m.set_names(&p.final_estimate), ["3"]);
        assert!(replay(&m, &p).unwrap());
        let p = plan(&m, &["2"]).unwrap();
        assert_eq!(p.inputs, a.input_word(&["x2"]).unwrap());
        assert!(replay(&m, &p).unwrap());
    }

    #[test]
    fn initial_singleton_is_exposed_by_the_empty_plan() {
        let m = fig1();
        let p = plan(&m, &["0"]).unwrap();
        assert!(p.labels.is_empty());
        assert!(replay(&m, &p).unwrap());
    }

    #[test]
    fn corrupted_observation_fails_replay() {
        let m = fig1();
        let mut p = plan(&m, &["3"]).unwrap();
        let d1 = m.alphabet().output_index("d1").unwrap();
        *p.labels.last_mut().unwrap() = Label {
            input: p.labels.last().unwrap().input,
            output: Some(d1),
        };
        p.observation = p.labels.iter().filter_map(|l| l.output).collect();
        assert!(!replay(&m, &p).unwrap());
        let mut q = plan(&m, &["3"]).unwrap();
        q.observation.pop();
        assert!(!replay(&m, &q).unwrap());
    }

    #[test]
    fn opaque_model_has_no_plan() {
        let m = fig1();
        assert!(plan(&m, &[]).is_none());
    }
}
