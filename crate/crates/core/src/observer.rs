//! Observers: the active intruder's estimator over `(input, observation)`
//! labels, and the passive intruder's automaton over outputs alone.

use std::collections::{BTreeMap, VecDeque};

use crate::automata::Nfa;
use crate::format::NfaDoc;
use crate::model::{Alphabet, OpenDes, StateSet};
use crate::semantics::Label;

/// Deterministic automaton whose states are state estimates of a model.
/// Only the part reachable from the initial estimate is built, and an
/// empty estimate is never a successor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observer {
    estimates: Vec<StateSet>,
    initial: usize,
    transitions: BTreeMap<(usize, Label), usize>,
    alphabet: Alphabet,
    names: Vec<String>,
}

impl Observer {
    pub fn num_states(&self) -> usize {
        self.estimates.len()
    }

    /// Estimates in canonical (sorted) order.
    pub fn estimates(&self) -> &[StateSet] {
        &self.estimates
    }

    pub fn estimate(&self, i: usize) -> &StateSet {
        &self.estimates[i]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn transitions(&self) -> &BTreeMap<(usize, Label), usize> {
        &self.transitions
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn index_of(&self, estimate: &StateSet) -> Option<usize> {
        self.estimates.binary_search(estimate).ok()
    }

    pub fn successor(&self, i: usize, label: Label) -> Option<usize> {
        self.transitions.get(&(i, label)).copied()
    }

    /// Outgoing transitions of one state in label order.
    pub fn transitions_from(&self, i: usize) -> impl Iterator<Item = (Label, usize)> + '_ {
        let lo = Label { input: None, output: None };
        self.transitions
            .range((i, lo)..)
            .take_while(move |((s, _), _)| *s == i)
            .map(|((_, l), &t)| (*l, t))
    }

    /// State reached from the initial estimate, if every label is enabled.
    pub fn run(&self, labels: &[Label]) -> Option<usize> {
        labels
            .iter()
            .try_fold(self.initial, |s, &l| self.successor(s, l))
    }

    /// Renders an estimate as `{a,b}` using the model's state names.
    pub fn estimate_label(&self, i: usize) -> String {
        let names: Vec<&str> = self.estimates[i].iter().map(|&q| self.names[q].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn label_name(&self, label: Label) -> String {
        label.display(&self.alphabet).to_string()
    }

    /// Shortest label word from the initial estimate to a state satisfying
    /// `target`. Labels are explored in canonical order, so among shortest
    /// words the lexicographically least one is returned.
    pub fn shortest_path(&self, target: impl Fn(&StateSet) -> bool) -> Option<(usize, Vec<Label>)> {
        let mut parent: Vec<Option<(usize, Label)>> = vec![None; self.num_states()];
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            if target(&self.estimates[s]) {
                let mut labels = Vec::new();
                let mut cur = s;
                while let Some((p, l)) = parent[cur] {
                    labels.push(l);
                    cur = p;
                }
                labels.reverse();
                return Some((s, labels));
            }
            for (l, t) in self.transitions_from(s) {
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((s, l));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// JSON-friendly form: subset-named states, label-named events.
    pub fn to_doc(&self) -> NfaDoc {
        let mut events: Vec<String> = self.transitions.keys().map(|(_, l)| self.label_name(*l)).collect();
        events.sort();
        events.dedup();
        NfaDoc {
            states: (0..self.num_states()).map(|i| self.estimate_label(i)).collect(),
            events,
            initial: vec![self.estimate_label(self.initial)],
            marked: Vec::new(),
            transitions: self
                .transitions
                .iter()
                .map(|(&(s, l), &t)| [self.estimate_label(s), self.label_name(l), self.estimate_label(t)])
                .collect(),
        }
    }
}

/// Every label the intruder can see: `(x,d)` for `x` an input or silence
/// and `d` an observable output or silence, except `(~,~)`.
pub fn all_labels(alphabet: &Alphabet) -> Vec<Label> {
    let inputs = std::iter::once(None).chain((0..alphabet.inputs().len()).map(Some));
    let outputs: Vec<Option<usize>> = std::iter::once(None)
        .chain(alphabet.observable().into_iter().map(Some))
        .collect();
    let mut labels: Vec<Label> = inputs
        .flat_map(|input| outputs.iter().map(move |&output| Label { input, output }))
        .filter(|l| l.input.is_some() || l.output.is_some())
        .collect();
    labels.sort();
    labels
}

/// Adds every state reachable through moves the intruder cannot see.
fn invisible_closure(model: &OpenDes, set: &mut StateSet) {
    let a = model.alphabet();
    let mut stack: Vec<usize> = set.iter().copied().collect();
    while let Some(q) = stack.pop() {
        for e in model.edges_from(q) {
            if Label::seen(a, e.input, e.output).is_none() && set.insert(e.to) {
                stack.push(e.to);
            }
        }
    }
}

/// Successor estimate of `set` under `label`, closed under invisible moves.
pub fn post(model: &OpenDes, set: &StateSet, label: Label) -> StateSet {
    let a = model.alphabet();
    let mut next: StateSet = set
        .iter()
        .flat_map(|&q| model.edges_from(q))
        .filter(|e| Label::seen(a, e.input, e.output) == Some(label))
        .map(|e| e.to)
        .collect();
    invisible_closure(model, &mut next);
    next
}

/// Builds the active intruder's observer by breadth-first subset
/// construction over [`all_labels`].
pub fn build_rcso_observer(model: &OpenDes) -> Observer {
    let labels = all_labels(model.alphabet());
    let mut start = model.initial().clone();
    invisible_closure(model, &mut start);
    let mut index: BTreeMap<StateSet, usize> = BTreeMap::from([(start.clone(), 0)]);
    let mut found = vec![start];
    let mut arcs = Vec::new();
    let mut i = 0;
    while i < found.len() {
        for &l in &labels {
            let next = post(model, &found[i], l);
            if next.is_empty() {
                continue;
            }
            let j = *index.entry(next.clone()).or_insert_with(|| {
                found.push(next);
                found.len() - 1
            });
            arcs.push((i, l, j));
        }
        i += 1;
    }
    // Renumber in canonical set order; `index` iterates sorted.
    let mut rank = vec![0; found.len()];
    for (r, &old) in index.values().enumerate() {
        rank[old] = r;
    }
    Observer {
        estimates: index.into_keys().collect(),
        initial: rank[0],
        transitions: arcs.into_iter().map(|(s, l, t)| ((rank[s], l), rank[t])).collect(),
        alphabet: model.alphabet().clone(),
        names: model.state_names().to_vec(),
    }
}

/// The passive intruder's view: an automaton over all outputs with an arc
/// `q -d-> q'` for every edge emitting `d`, whatever its input. Edges with a
/// silent output are dropped.
pub fn build_passive_nfa(model: &OpenDes) -> Nfa {
    let transitions = model
        .edges()
        .iter()
        .filter_map(|e| e.output.map(|d| (e.from, d, e.to)));
    Nfa::from_parts(
        model.state_names().to_vec(),
        model.alphabet().outputs().to_vec(),
        model.initial().clone(),
        model.marked().clone(),
        transitions,
    )
}
