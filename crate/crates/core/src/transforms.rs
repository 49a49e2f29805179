//! Reductions between the reactive opacity notions, and bounded oracles for
//! the language-based and initial-state variants.
//!
//! Observations are compared the way the observer sees them: step by step,
//! as `(input, observed output)` labels, pooled over initial states.

use std::collections::BTreeMap;

use crate::automata::{accessible, disjoint_union, io_product, io_product_relation, is_prefix_closed, trim, Nfa, Side};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::model::{Alphabet, OpenDes, StateSet};
use crate::semantics::{self, words_up_to, Label, Run};
use crate::verify::{least, Method, Property, Verdict, Witness};

/// A secret or non-secret behaviour specification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LanguageSpec {
    /// Output words accepted by an automaton over the model's outputs
    /// (silent outputs erased).
    Output(Nfa),
    /// Step-label sequences `(input, output)` accepted by a marked
    /// transducer over the model's alphabets.
    Relation(OpenDes),
}

impl LanguageSpec {
    fn check(&self, alphabet: &Alphabet) -> Result<()> {
        match self {
            LanguageSpec::Output(nfa) => {
                output_map(nfa, alphabet)?;
            }
            LanguageSpec::Relation(t) => {
                let b = t.alphabet();
                if b.inputs() != alphabet.inputs() || b.outputs() != alphabet.outputs() {
                    return Err(Error::AlphabetMismatch(
                        "relation spec must use the model's input and output alphabets".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Whether a run's behaviour belongs to the specified language.
    pub fn accepts_run(&self, alphabet: &Alphabet, run: &Run) -> Result<bool> {
        match self {
            LanguageSpec::Output(nfa) => {
                let map = output_map(nfa, alphabet)?;
                let word: Option<Vec<usize>> = run.outputs().iter().map(|&d| map[d]).collect();
                Ok(word.is_some_and(|w| nfa.accepts(&w)))
            }
            LanguageSpec::Relation(t) => semantics::io_language_member(t, &run.labels(), true),
        }
    }

    fn product(&self, g: &OpenDes) -> Result<OpenDes> {
        match self {
            LanguageSpec::Output(nfa) => io_product(g, nfa),
            LanguageSpec::Relation(t) => io_product_relation(g, t),
        }
    }
}

/// Model output index -> spec event index.
fn output_map(nfa: &Nfa, alphabet: &Alphabet) -> Result<Vec<Option<usize>>> {
    let mut map = vec![None; alphabet.outputs().len()];
    for (e, name) in nfa.events().iter().enumerate() {
        let d = alphabet
            .output_index(name)
            .map_err(|_| Error::AlphabetMismatch(format!("spec event {name:?} is not an output of the model")))?;
        map[d] = Some(e);
    }
    Ok(map)
}

/// Secret and non-secret initial states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RisoQuery {
    pub secret_initial: StateSet,
    pub nonsecret_initial: StateSet,
}

impl RisoQuery {
    /// Both sets must be made of initial states.
    pub fn new(model: &OpenDes, secret_initial: StateSet, nonsecret_initial: StateSet) -> Result<RisoQuery> {
        for (set, which) in [(&secret_initial, "secret"), (&nonsecret_initial, "non-secret")] {
            if !set.is_subset(model.initial()) {
                return Err(Error::InvalidQuery(format!(
                    "{which} initial states {} are not all initial",
                    model.set_label(set)
                )));
            }
        }
        Ok(RisoQuery {
            secret_initial,
            nonsecret_initial,
        })
    }
}

/// A current-state question: an estimate leaks when it meets `secret` and
/// misses `nonsecret`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RcsoProblem {
    pub model: OpenDes,
    pub secret: StateSet,
    pub nonsecret: StateSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlboProblem {
    pub model: OpenDes,
    pub secret: LanguageSpec,
    pub nonsecret: LanguageSpec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RisoProblem {
    pub model: OpenDes,
    pub query: RisoQuery,
}

fn side_images(prov: &[(Side, usize)], side: Side, set: &StateSet) -> StateSet {
    prov.iter()
        .enumerate()
        .filter(|(_, &(s, q))| s == side && set.contains(&q))
        .map(|(i, _)| i)
        .collect()
}

/// Language-based to current-state: one product per specification, joined
/// side by side. The secret states are the marked states of the secret
/// product and the non-secret states those of the non-secret product.
pub fn rlbo_to_rcso(model: &OpenDes, os: &LanguageSpec, ons: &LanguageSpec) -> Result<RcsoProblem> {
    os.check(model.alphabet())?;
    ons.check(model.alphabet())?;
    let gs = os.product(model)?;
    let gns = ons.product(model)?;
    let (gc, prov) = disjoint_union(&gs, &gns)?;
    let secret = side_images(&prov, Side::Left, gs.marked());
    let nonsecret = side_images(&prov, Side::Right, gns.marked());
    Ok(RcsoProblem {
        model: gc.with_secret(secret.clone()).with_nonsecret(Some(nonsecret.clone())),
        secret,
        nonsecret,
    })
}

/// Current-state to language-based: the secret behaviour is everything the
/// model can do while ending in `secret`, kept as a marked transducer.
pub fn rcso_to_rlbo(model: &OpenDes, secret: &StateSet, nonsecret: &StateSet) -> Result<RlboProblem> {
    if secret.iter().chain(nonsecret).any(|&q| q >= model.num_states()) {
        return Err(Error::UnknownState("state index out of range".into()));
    }
    if secret.len() >= model.num_states() {
        return Err(Error::SecretNotStrict);
    }
    let spec = |marked: &StateSet| LanguageSpec::Relation(trim(&model.with_marked(marked.clone())));
    Ok(RlboProblem {
        model: model.with_marked(StateSet::new()),
        secret: spec(secret),
        nonsecret: spec(nonsecret),
    })
}

/// Initial-state to language-based: the secret behaviour is whatever can be
/// done from a secret initial state, and likewise for non-secret.
pub fn riso_to_rlbo(model: &OpenDes, query: &RisoQuery) -> Result<RlboProblem> {
    RisoQuery::new(model, query.secret_initial.clone(), query.nonsecret_initial.clone())?;
    if query.nonsecret_initial.is_empty() && !query.secret_initial.is_empty() {
        return Err(Error::EmptyNonsecretInitial);
    }
    let unmarked = model.with_marked(StateSet::new());
    let spec = |initial: &StateSet| {
        let g = unmarked.with_initial(initial.clone());
        let all = g.all_states();
        LanguageSpec::Relation(accessible(&g.with_marked(all)))
    };
    let both: StateSet = query.secret_initial.union(&query.nonsecret_initial).copied().collect();
    Ok(RlboProblem {
        model: accessible(&unmarked.with_initial(both)),
        secret: spec(&query.secret_initial),
        nonsecret: spec(&query.nonsecret_initial),
    })
}

/// Language-based to initial-state, for prefix-closed output languages.
/// Each product starts where its specification starts, so the question
/// becomes which side the system started on.
pub fn rlbo_to_riso(model: &OpenDes, os: &LanguageSpec, ons: &LanguageSpec) -> Result<RisoProblem> {
    let (LanguageSpec::Output(s), LanguageSpec::Output(ns)) = (os, ons) else {
        return Err(Error::UnsupportedSpec(
            "initial-state reduction needs output-language specifications".into(),
        ));
    };
    if !model.marked().is_empty() {
        return Err(Error::InvalidQuery(
            "initial-state reduction needs a model without marked states".into(),
        ));
    }
    os.check(model.alphabet())?;
    ons.check(model.alphabet())?;
    if !is_prefix_closed(s) {
        return Err(Error::NotPrefixClosed { which: "secret" });
    }
    if !is_prefix_closed(ns) {
        return Err(Error::NotPrefixClosed { which: "non-secret" });
    }
    // Every word reaching a live spec state is a prefix of a member, hence a
    // member; so every product state is marked.
    let side = |nfa: &Nfa| -> Result<OpenDes> {
        let p = io_product(model, &trim(nfa))?;
        let all = p.all_states();
        Ok(p.with_marked(all))
    };
    let gs = side(s)?;
    let gns = side(ns)?;
    let (gc, prov) = disjoint_union(&gs, &gns)?;
    let query = RisoQuery {
        secret_initial: side_images(&prov, Side::Left, gs.initial()),
        nonsecret_initial: side_images(&prov, Side::Right, gns.initial()),
    };
    Ok(RisoProblem { model: gc, query })
}

/// Exact RLBO verdict through the current-state reduction.
pub fn verify_rlbo(problem: &RlboProblem) -> Result<Verdict> {
    let rcso = rlbo_to_rcso(&problem.model, &problem.secret, &problem.nonsecret)?;
    let mut v = crate::verify::verify_rcso_with(&rcso.model, &rcso.secret, &rcso.nonsecret)?;
    v.property = Property::Rlbo;
    // Estimates name product states; report the underlying model states.
    if let Some(w) = &mut v.witness {
        w.estimate = semantics::estimate_observed(&problem.model, &w.labels)?;
    }
    Ok(v)
}

/// Exact RISO verdict through the language-based reduction.
pub fn verify_riso(problem: &RisoProblem) -> Result<Verdict> {
    let mut v = verify_rlbo(&riso_to_rlbo(&problem.model, &problem.query)?)?;
    v.property = Property::Riso;
    Ok(v)
}

#[derive(Default)]
struct Sides {
    secret: StateSet,
    nonsecret: bool,
}

fn first_leak(groups: BTreeMap<Vec<Label>, Sides>) -> Option<Witness> {
    groups
        .into_iter()
        .find(|(_, s)| !s.secret.is_empty() && !s.nonsecret)
        .map(|(labels, s)| Witness::from_labels(labels, s.secret))
}

fn counts(model: &OpenDes, run: &Run) -> bool {
    model.marked().is_empty() || model.marked().contains(&run.end())
}

/// Bounded language-based check: for every input word of length at most
/// `k` and every observation, if some run with that observation has secret
/// behaviour then some run with the same observation has non-secret
/// behaviour. A model with marked states only counts runs ending marked.
pub fn oracle_verify_rlbo(
    model: &OpenDes,
    os: &LanguageSpec,
    ons: &LanguageSpec,
    k: usize,
    strategy: Strategy,
) -> Result<Verdict> {
    if k == 0 {
        return Err(Error::InvalidQuery("bound must be at least 1".into()));
    }
    os.check(model.alphabet())?;
    ons.check(model.alphabet())?;
    let a = model.alphabet();
    let words = words_up_to(a.inputs().len(), k);
    let found = exec::map(strategy, &words, |w| -> Result<Option<Witness>> {
        let mut groups: BTreeMap<Vec<Label>, Sides> = BTreeMap::new();
        for &q0 in model.initial() {
            for run in semantics::enumerate_runs(model, w, q0)? {
                if !counts(model, &run) {
                    continue;
                }
                let entry = groups.entry(run.observation(a)).or_default();
                if os.accepts_run(a, &run)? {
                    entry.secret.insert(run.end());
                }
                if !entry.nonsecret && ons.accepts_run(a, &run)? {
                    entry.nonsecret = true;
                }
            }
        }
        Ok(first_leak(groups))
    });
    let found = found.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Verdict {
        property: Property::Rlbo,
        opaque: false,
        method: Method::OracleBounded,
        bound: Some(k),
        witness: least(found),
    }
    .settle())
}

/// Bounded initial-state check: every observation of a run from a secret
/// initial state is also the observation of some run from a non-secret
/// initial state, for input words of length at most `k`.
pub fn oracle_verify_riso(model: &OpenDes, query: &RisoQuery, k: usize, strategy: Strategy) -> Result<Verdict> {
    if k == 0 {
        return Err(Error::InvalidQuery("bound must be at least 1".into()));
    }
    RisoQuery::new(model, query.secret_initial.clone(), query.nonsecret_initial.clone())?;
    let words = words_up_to(model.alphabet().inputs().len(), k);
    let found = exec::map(strategy, &words, |w| -> Result<Option<Witness>> {
        let secret = semantics::observations(model, w, &query.secret_initial)?;
        let nonsecret = semantics::observations(model, w, &query.nonsecret_initial)?;
        Ok(secret
            .into_iter()
            .find(|(obs, _)| !nonsecret.contains_key(obs))
            .map(|(labels, e)| Witness::from_labels(labels, e)))
    });
    let found = found.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Verdict {
        property: Property::Riso,
        opaque: false,
        method: Method::OracleBounded,
        bound: Some(k),
        witness: least(found),
    }
    .settle())
}

impl Verdict {
    fn settle(mut self) -> Verdict {
        self.opaque = self.witness.is_none();
        self
    }
}
