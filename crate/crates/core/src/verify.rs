//! Opacity verdicts. Exact checks go through the observers; the `oracle_*`
//! functions decide the same question by bounded run enumeration and are
//! only certified up to their word-length bound.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Value};

use crate::automata::determinize;
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::model::{OpenDes, StateSet};
use crate::observer::{build_passive_nfa, build_rcso_observer};
use crate::semantics::{self, words_up_to, Label};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    /// Reactive current-state opacity.
    Rcso,
    /// Current-state opacity against a passive intruder.
    Cso,
    /// Reactive language-based opacity.
    Rlbo,
    /// Reactive initial-state opacity.
    Riso,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Rcso => "rcso",
            Property::Cso => "cso",
            Property::Rlbo => "rlbo",
            Property::Riso => "riso",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Observer,
    OracleBounded,
    /// Bounded check with one estimate per initial state.
    OraclePerInitial,
    /// Bounded check using the pooled output recursion.
    OraclePooled,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Observer => "observer",
            Method::OracleBounded => "oracle-bounded",
            Method::OraclePerInitial => "oracle-per-initial",
            Method::OraclePooled => "oracle-pooled",
        }
    }
}

/// Evidence for a non-opaque verdict. `labels` is empty for witnesses that
/// carry no input alignment (passive and pooled checks).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub labels: Vec<Label>,
    pub inputs: Vec<usize>,
    pub observation: Vec<usize>,
    pub estimate: StateSet,
}

impl Witness {
    pub(crate) fn from_labels(labels: Vec<Label>, estimate: StateSet) -> Witness {
        Witness {
            inputs: labels.iter().filter_map(|l| l.input).collect(),
            observation: labels.iter().filter_map(|l| l.output).collect(),
            labels,
            estimate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub property: Property,
    pub opaque: bool,
    pub method: Method,
    /// Word-length bound for oracle verdicts.
    pub bound: Option<usize>,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn new(property: Property, method: Method, bound: Option<usize>, witness: Option<Witness>) -> Verdict {
        Verdict {
            property,
            opaque: witness.is_none(),
            method,
            bound,
            witness,
        }
    }

    /// JSON report. Names are resolved against `model`, which must be the
    /// model the verdict was computed on.
    pub fn report(&self, model: &OpenDes) -> Value {
        let a = model.alphabet();
        let mut v = json!({
            "property": self.property.name(),
            "opaque": self.opaque,
            "method": self.method.name(),
        });
        if let Some(k) = self.bound {
            v["bound"] = json!(k);
        }
        if let Some(w) = &self.witness {
            v["witness"] = json!({
                "inputs": w.inputs.iter().map(|&x| &a.inputs()[x]).collect::<Vec<_>>(),
                "observation": w.observation.iter().map(|&d| &a.outputs()[d]).collect::<Vec<_>>(),
                "estimate": model.set_names(&w.estimate),
                "labels": w.labels.iter().map(|l| l.display(a).to_string()).collect::<Vec<_>>(),
            });
        }
        v
    }
}

fn check_secret(model: &OpenDes, secret: &StateSet) -> Result<()> {
    if let Some(&q) = secret.iter().find(|&&q| q >= model.num_states()) {
        return Err(Error::UnknownState(q.to_string()));
    }
    if secret.len() >= model.num_states() {
        return Err(Error::SecretNotStrict);
    }
    Ok(())
}

fn complement(model: &OpenDes, set: &StateSet) -> StateSet {
    model.all_states().difference(set).copied().collect()
}

/// An estimate gives the secret away when it meets the secret states and
/// misses every non-secret state.
pub fn leaks(estimate: &StateSet, secret: &StateSet, nonsecret: &StateSet) -> bool {
    !estimate.is_disjoint(secret) && estimate.is_disjoint(nonsecret)
}

/// Reactive current-state opacity: not opaque iff some reachable observer
/// estimate is nonempty and inside `secret`. The witness is the shortest,
/// then lexicographically least, label word reaching such an estimate.
pub fn verify_rcso(model: &OpenDes, secret: &StateSet) -> Result<Verdict> {
    check_secret(model, secret)?;
    verify_rcso_with(model, secret, &complement(model, secret))
}

/// As [`verify_rcso`] with an explicit non-secret set: an estimate leaks
/// when it meets `secret` and misses `nonsecret`.
pub fn verify_rcso_with(model: &OpenDes, secret: &StateSet, nonsecret: &StateSet) -> Result<Verdict> {
    for &q in secret.iter().chain(nonsecret) {
        if q >= model.num_states() {
            return Err(Error::UnknownState(q.to_string()));
        }
    }
    let obs = build_rcso_observer(model);
    let witness = obs
        .shortest_path(|e| leaks(e, secret, nonsecret))
        .map(|(s, labels)| Witness::from_labels(labels, obs.estimate(s).clone()));
    Ok(Verdict::new(Property::Rcso, Method::Observer, None, witness))
}

/// Current-state opacity against an intruder who sees projected outputs
/// but injects nothing.
pub fn verify_cso_passive(model: &OpenDes, secret: &StateSet) -> Result<Verdict> {
    check_secret(model, secret)?;
    let observable = model.alphabet().observable();
    let det = determinize(&build_passive_nfa(model), &observable);
    // BFS over the estimator; events are ordered like the observable outputs.
    let dfa = &det.dfa;
    let observable: Vec<usize> = observable.into_iter().collect();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; dfa.num_states()];
    let mut seen = vec![false; dfa.num_states()];
    let mut queue = std::collections::VecDeque::from([det.initial]);
    seen[det.initial] = true;
    while let Some(s) = queue.pop_front() {
        let e = &det.subsets[s];
        if !e.is_empty() && e.is_subset(secret) {
            let mut observation = Vec::new();
            let mut cur = s;
            while let Some((p, ev)) = parent[cur] {
                observation.push(observable[ev]);
                cur = p;
            }
            observation.reverse();
            let witness = Witness {
                labels: Vec::new(),
                inputs: Vec::new(),
                observation,
                estimate: e.clone(),
            };
            return Ok(Verdict::new(Property::Cso, Method::Observer, None, Some(witness)));
        }
        for &(_, ev, t) in dfa.transitions_from(s) {
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some((s, ev));
                queue.push_back(t);
            }
        }
    }
    Ok(Verdict::new(Property::Cso, Method::Observer, None, None))
}

fn check_bound(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::InvalidQuery("bound must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Least witness by (label count, labels).
pub(crate) fn least(candidates: impl IntoIterator<Item = Option<Witness>>) -> Option<Witness> {
    candidates
        .into_iter()
        .flatten()
        .min_by(|a, b| (a.labels.len(), &a.labels).cmp(&(b.labels.len(), &b.labels)))
}

/// Bounded check of reactive current-state opacity by run enumeration over
/// every input word of length at most `k`.
pub fn oracle_verify_rcso(model: &OpenDes, secret: &StateSet, k: usize, strategy: Strategy) -> Result<Verdict> {
    check_secret(model, secret)?;
    oracle_verify_rcso_with(model, secret, &complement(model, secret), k, strategy)
}

pub fn oracle_verify_rcso_with(
    model: &OpenDes,
    secret: &StateSet,
    nonsecret: &StateSet,
    k: usize,
    strategy: Strategy,
) -> Result<Verdict> {
    check_bound(k)?;
    let words = words_up_to(model.alphabet().inputs().len(), k);
    let found = exec::map(strategy, &words, |w| -> Result<Option<Witness>> {
        let groups = semantics::observations(model, w, model.initial())?;
        Ok(groups
            .into_iter()
            .find(|(_, e)| leaks(e, secret, nonsecret))
            .map(|(labels, e)| Witness::from_labels(labels, e)))
    });
    let found = found.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Verdict::new(Property::Rcso, Method::OracleBounded, Some(k), least(found)))
}

/// Bounded check where each initial state gets its own estimate: leaks iff
/// for some initial state, input word and observation, the runs from that
/// state alone all end in `secret`.
pub fn oracle_verify_rcso_per_initial(
    model: &OpenDes,
    secret: &StateSet,
    k: usize,
    strategy: Strategy,
) -> Result<Verdict> {
    check_secret(model, secret)?;
    check_bound(k)?;
    let nonsecret = complement(model, secret);
    let words = words_up_to(model.alphabet().inputs().len(), k);
    let found = exec::map(strategy, &words, |w| -> Result<Option<Witness>> {
        let mut best = Vec::new();
        for &q0 in model.initial() {
            let groups = semantics::observations(model, w, &StateSet::from([q0]))?;
            best.push(
                groups
                    .into_iter()
                    .find(|(_, e)| leaks(e, secret, &nonsecret))
                    .map(|(labels, e)| Witness::from_labels(labels, e)),
            );
        }
        Ok(least(best))
    });
    let found = found.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Verdict::new(Property::Rcso, Method::OraclePerInitial, Some(k), least(found)))
}

/// Bounded check using the pooled output recursion, in which an output is
/// not tied to the path that produced it.
pub fn oracle_verify_rcso_pooled(
    model: &OpenDes,
    secret: &StateSet,
    k: usize,
    strategy: Strategy,
) -> Result<Verdict> {
    check_secret(model, secret)?;
    check_bound(k)?;
    let a = model.alphabet();
    let words = words_up_to(a.inputs().len(), k);
    let found = exec::map(strategy, &words, |w| -> Result<Option<Witness>> {
        let mut alphas = BTreeSet::new();
        for &q0 in model.initial() {
            for s in semantics::pooled_output_words(model, w, q0)? {
                let s: Vec<Option<usize>> = s.into_iter().map(Some).collect();
                alphas.insert(a.project(&s)?);
            }
        }
        for alpha in alphas {
            let e = semantics::pooled_estimate(model, w, &alpha, None)?;
            if !e.is_empty() && e.is_subset(secret) {
                return Ok(Some(Witness {
                    labels: Vec::new(),
                    inputs: w.clone(),
                    observation: alpha,
                    estimate: e,
                }));
            }
        }
        Ok(None)
    });
    let found = found.into_iter().collect::<Result<Vec<_>>>()?;
    let witness = found
        .into_iter()
        .flatten()
        .min_by(|a, b| (a.inputs.len(), &a.inputs, &a.observation).cmp(&(b.inputs.len(), &b.inputs, &b.observation)));
    Ok(Verdict::new(Property::Rcso, Method::OraclePooled, Some(k), witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled::fig1;

    fn set(m: &OpenDes, names: &[&str]) -> StateSet {
        m.state_set(names).unwrap()
    }

    fn input_names(m: &OpenDes, w: &Witness) -> Vec<String> {
        w.inputs.iter().map(|&x| m.alphabet().inputs()[x].clone()).collect()
    }

    #[test]
    fn secret_2_leaks_after_x2() {
        let m = fig1();
        let v = verify_rcso(&m, &set(&m, &["2"])).unwrap();
        assert!(!v.opaque);
        let w = v.witness.unwrap();
        assert_eq!(input_names(&m, &w), ["x2"]);
        assert_eq!(m.set_names(&w.estimate), ["2"]);
    }

    #[test]
    fn secret_3_leaks_after_x1x1x2() {
        let m = fig1();
        let v = verify_rcso(&m, &set(&m, &["3"])).unwrap();
        let w = v.witness.unwrap();
        assert_eq!(input_names(&m, &w), ["x1", "x1", "x2"]);
        assert_eq!(m.alphabet().outputs()[*w.observation.last().unwrap()], "a");
    }

    #[test]
    fn empty_secret_is_opaque_everywhere() {
        let m = fig1();
        assert!(verify_rcso(&m, &StateSet::new()).unwrap().opaque);
        assert!(verify_cso_passive(&m, &StateSet::new()).unwrap().opaque);
        assert!(oracle_verify_rcso(&m, &StateSet::new(), 3, Strategy::Sequential).unwrap().opaque);
    }

    #[test]
    fn full_secret_is_rejected() {
        let m = fig1();
        let err = verify_rcso(&m, &m.all_states()).unwrap_err();
        assert!(err.to_string().contains("secret set must be strict subset"));
        assert!(verify_cso_passive(&m, &m.all_states()).is_err());
    }

    #[test]
    fn passive_verdicts() {
        let m = fig1();
        assert!(verify_cso_passive(&m, &set(&m, &["3"])).unwrap().opaque);
        assert!(verify_cso_passive(&m, &set(&m, &["2"])).unwrap().opaque);
        // {0} is the initial estimate itself.
        let v = verify_cso_passive(&m, &set(&m, &["0"])).unwrap();
        assert!(!v.opaque);
        assert!(v.witness.unwrap().observation.is_empty());
    }

    #[test]
    fn oracle_agrees_on_examples() {
        let m = fig1();
        let v = oracle_verify_rcso(&m, &set(&m, &["2"]), 1, Strategy::Sequential).unwrap();
        assert!(!v.opaque);
        assert_eq!(input_names(&m, v.witness.as_ref().unwrap()), ["x2"]);
        let exact = verify_rcso(&m, &set(&m, &["3"])).unwrap();
        let bounded = oracle_verify_rcso(&m, &set(&m, &["3"]), 3, Strategy::Parallel).unwrap();
        assert_eq!(bounded.witness, exact.witness);
        assert_eq!(bounded.bound, Some(3));
    }

    #[test]
    fn zero_bound_is_rejected() {
        let m = fig1();
        assert!(matches!(
            oracle_verify_rcso(&m, &StateSet::new(), 0, Strategy::Sequential),
            Err(Error::InvalidQuery(_))
        ));
    }

    #[test]
    fn diagnostic_oracles_run() {
        let m = fig1();
        let s = set(&m, &["3"]);
        // A single initial state: per-initial and pooled-over-Q0 coincide.
        let per = oracle_verify_rcso_per_initial(&m, &s, 3, Strategy::Sequential).unwrap();
        assert!(!per.opaque);
        // The pooled recursion forgets which path emitted `a`.
        let pooled = oracle_verify_rcso_pooled(&m, &s, 3, Strategy::Sequential).unwrap();
        assert!(pooled.opaque);
    }

    #[test]
    fn report_shape() {
        let m = fig1();
        let v = verify_rcso(&m, &set(&m, &["2"])).unwrap();
        let r = v.report(&m);
        assert_eq!(r["property"], "rcso");
        assert_eq!(r["opaque"], false);
        assert_eq!(r["method"], "observer");
        assert!(r.get("bound").is_none());
        assert_eq!(r["witness"]["inputs"], json!(["x2"]));
        assert_eq!(r["witness"]["estimate"], json!(["2"]));
        assert_eq!(r["witness"]["labels"], json!(["(x2,d2)"]));
    }
}
