//! Automaton algebra used by the reductions: accessible/coaccessible parts,
//! trim, disjoint union, products with output-language and io-relation
//! specifications, determinization and prefix-closedness.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::format::NfaDoc;
use crate::model::{Diagnostic, DiagnosticKind, Edge, OpenDes, StateSet, SILENT};

/// Nondeterministic automaton over a finite event set, with marked states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    states: Vec<String>,
    events: Vec<String>,
    initial: StateSet,
    marked: StateSet,
    transitions: Vec<(usize, usize, usize)>,
    offsets: Vec<usize>,
}

impl Nfa {
    /// Convenience constructor from names.
    pub fn new<S: AsRef<str>>(
        states: &[S],
        events: &[S],
        initial: &[S],
        marked: &[S],
        transitions: &[(S, S, S)],
    ) -> Result<Nfa> {
        let own = |v: &[S]| v.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>();
        Nfa::from_doc(&NfaDoc {
            states: own(states),
            events: own(events),
            initial: own(initial),
            marked: own(marked),
            transitions: transitions
                .iter()
                .map(|(a, e, b)| {
                    [
                        a.as_ref().to_string(),
                        e.as_ref().to_string(),
                        b.as_ref().to_string(),
                    ]
                })
                .collect(),
        })
    }

    pub fn from_doc(doc: &NfaDoc) -> Result<Nfa> {
        use DiagnosticKind::*;
        let mut diags = Vec::new();
        let mut states = BTreeSet::new();
        for s in &doc.states {
            if !states.insert(s.as_str()) {
                diags.push(Diagnostic::new(DuplicateState, s.as_str()));
            }
        }
        let mut events = BTreeSet::new();
        for e in &doc.events {
            if e == SILENT {
                diags.push(Diagnostic::new(ReservedSymbol, e.as_str()));
            } else if !events.insert(e.as_str()) {
                diags.push(Diagnostic::new(DuplicateSymbol, e.as_str()));
            }
        }
        for (names, kind) in [(&doc.initial, UnknownInitialState), (&doc.marked, UnknownMarkedState)] {
            for n in names {
                if !states.contains(n.as_str()) {
                    diags.push(Diagnostic::new(kind, n.as_str()));
                }
            }
        }
        for [from, event, to] in &doc.transitions {
            if !states.contains(from.as_str()) {
                diags.push(Diagnostic::new(UnknownSourceState, from.as_str()));
            }
            if !events.contains(event.as_str()) {
                diags.push(Diagnostic::new(UnknownEvent, event.as_str()));
            }
            if !states.contains(to.as_str()) {
                diags.push(Diagnostic::new(UnknownTargetState, to.as_str()));
            }
        }
        if !diags.is_empty() {
            return Err(Error::Invalid(diags));
        }
        let states: Vec<String> = states.into_iter().map(String::from).collect();
        let events: Vec<String> = events.into_iter().map(String::from).collect();
        let si = |n: &String| states.binary_search(n).unwrap();
        let ei = |n: &String| events.binary_search(n).unwrap();
        let transitions = doc
            .transitions
            .iter()
            .map(|[a, e, b]| (si(a), ei(e), si(b)))
            .collect::<Vec<_>>();
        let initial = doc.initial.iter().map(si).collect();
        let marked = doc.marked.iter().map(si).collect();
        Ok(Nfa::from_parts(states, events, initial, marked, transitions))
    }

    /// `events` must already be sorted and unique; states are sorted here.
    pub(crate) fn from_parts(
        states: Vec<String>,
        events: Vec<String>,
        initial: StateSet,
        marked: StateSet,
        transitions: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Nfa {
        let mut order: Vec<usize> = (0..states.len()).collect();
        order.sort_by(|&a, &b| states[a].cmp(&states[b]));
        let mut remap = vec![0; states.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let names = order.iter().map(|&i| states[i].clone()).collect::<Vec<_>>();
        let mut transitions: Vec<_> = transitions
            .into_iter()
            .map(|(a, e, b)| (remap[a], e, remap[b]))
            .collect();
        transitions.sort_unstable();
        transitions.dedup();
        let offsets = offsets(names.len(), transitions.iter().map(|t| t.0));
        Nfa {
            initial: initial.iter().map(|&q| remap[q]).collect(),
            marked: marked.iter().map(|&q| remap[q]).collect(),
            states: names,
            events,
            transitions,
            offsets,
        }
    }

    pub fn to_doc(&self) -> NfaDoc {
        let names = |s: &StateSet| s.iter().map(|&q| self.states[q].clone()).collect();
        NfaDoc {
            states: self.states.clone(),
            events: self.events.clone(),
            initial: names(&self.initial),
            marked: names(&self.marked),
            transitions: self
                .transitions
                .iter()
                .map(|&(a, e, b)| {
                    [
                        self.states[a].clone(),
                        self.events[e].clone(),
                        self.states[b].clone(),
                    ]
                })
                .collect(),
        }
    }

    /// One-state automaton accepting every word over `events`.
    pub fn universal<S: AsRef<str>>(events: &[S]) -> Result<Nfa> {
        let loops: Vec<(&str, &str, &str)> = events.iter().map(|e| ("u", e.as_ref(), "u")).collect();
        let events: Vec<&str> = events.iter().map(|e| e.as_ref()).collect();
        Nfa::new(&["u"], &events, &["u"], &["u"], &loops)
    }

    /// Automaton accepting nothing.
    pub fn empty<S: AsRef<str>>(events: &[S]) -> Result<Nfa> {
        let events: Vec<&str> = events.iter().map(|e| e.as_ref()).collect();
        Nfa::new(&["z"], &events, &["z"], &[], &[])
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.states
            .binary_search_by(|s| s.as_str().cmp(name))
            .map_err(|_| Error::UnknownState(name.to_string()))
    }

    pub fn events(&self) -> &[String] {
        &self.events
    }

    pub fn event_index(&self, name: &str) -> Option<usize> {
        self.events.binary_search_by(|s| s.as_str().cmp(name)).ok()
    }

    pub fn initial(&self) -> &StateSet {
        &self.initial
    }

    pub fn marked(&self) -> &StateSet {
        &self.marked
    }

    pub fn transitions(&self) -> &[(usize, usize, usize)] {
        &self.transitions
    }

    pub fn transitions_from(&self, q: usize) -> &[(usize, usize, usize)] {
        &self.transitions[self.offsets[q]..self.offsets[q + 1]]
    }

    /// At most one successor per state and event, and at most one initial state.
    pub fn is_deterministic(&self) -> bool {
        self.initial.len() <= 1
            && self
                .transitions
                .windows(2)
                .all(|w| (w[0].0, w[0].1) != (w[1].0, w[1].1))
    }

    /// Successors of a state set under one event.
    pub fn post(&self, set: &StateSet, event: usize) -> StateSet {
        set.iter()
            .flat_map(|&q| self.transitions_from(q))
            .filter(|t| t.1 == event)
            .map(|t| t.2)
            .collect()
    }

    /// Marked-language membership by set simulation.
    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut current = self.initial.clone();
        for &e in word {
            current = self.post(&current, e);
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|q| self.marked.contains(q))
    }

    pub(crate) fn restrict(&self, keep: &[bool]) -> Nfa {
        let mut remap = vec![usize::MAX; self.states.len()];
        let mut states = Vec::new();
        for (q, name) in self.states.iter().enumerate() {
            if keep[q] {
                remap[q] = states.len();
                states.push(name.clone());
            }
        }
        let map_set = |s: &StateSet| s.iter().filter(|&&q| keep[q]).map(|&q| remap[q]).collect();
        let transitions: Vec<_> = self
            .transitions
            .iter()
            .filter(|t| keep[t.0] && keep[t.2])
            .map(|&(a, e, b)| (remap[a], e, remap[b]))
            .collect();
        let offsets = offsets(states.len(), transitions.iter().map(|t| t.0));
        Nfa {
            initial: map_set(&self.initial),
            marked: map_set(&self.marked),
            states,
            events: self.events.clone(),
            transitions,
            offsets,
        }
    }
}

fn offsets(n: usize, sources: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut offsets = vec![0; n + 1];
    for s in sources {
        offsets[s + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    offsets
}

/// Graph view shared by [`OpenDes`] and [`Nfa`] for reachability-based
/// restrictions.
pub trait Automaton: Sized {
    fn state_count(&self) -> usize;
    fn initial_states(&self) -> &StateSet;
    fn marked_states(&self) -> &StateSet;
    fn arcs(&self) -> Vec<(usize, usize)>;
    /// Keeps the flagged states and the transitions between them.
    fn restrict_to(&self, keep: &[bool]) -> Self;
}

impl Automaton for OpenDes {
    fn state_count(&self) -> usize {
        self.num_states()
    }
    fn initial_states(&self) -> &StateSet {
        self.initial()
    }
    fn marked_states(&self) -> &StateSet {
        self.marked()
    }
    fn arcs(&self) -> Vec<(usize, usize)> {
        self.edges().iter().map(|e| (e.from, e.to)).collect()
    }
    fn restrict_to(&self, keep: &[bool]) -> Self {
        self.restrict(keep)
    }
}

impl Automaton for Nfa {
    fn state_count(&self) -> usize {
        self.num_states()
    }
    fn initial_states(&self) -> &StateSet {
        self.initial()
    }
    fn marked_states(&self) -> &StateSet {
        self.marked()
    }
    fn arcs(&self) -> Vec<(usize, usize)> {
        self.transitions.iter().map(|t| (t.0, t.2)).collect()
    }
    fn restrict_to(&self, keep: &[bool]) -> Self {
        self.restrict(keep)
    }
}

fn reach(n: usize, seeds: &StateSet, arcs: &[(usize, usize)], reverse: bool) -> Vec<bool> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in arcs {
        if reverse {
            adj[b].push(a);
        } else {
            adj[a].push(b);
        }
    }
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = seeds.iter().copied().collect();
    for &s in seeds {
        seen[s] = true;
    }
    while let Some(q) = queue.pop_front() {
        for &r in &adj[q] {
            if !seen[r] {
                seen[r] = true;
                queue.push_back(r);
            }
        }
    }
    seen
}

/// Restriction to the states reachable from an initial state.
pub fn accessible<A: Automaton>(a: &A) -> A {
    let keep = reach(a.state_count(), a.initial_states(), &a.arcs(), false);
    a.restrict_to(&keep)
}

/// Restriction to the states from which a marked state is reachable.
pub fn coaccessible<A: Automaton>(a: &A) -> A {
    let keep = reach(a.state_count(), a.marked_states(), &a.arcs(), true);
    a.restrict_to(&keep)
}

/// Accessible and coaccessible part.
pub fn trim<A: Automaton>(a: &A) -> A {
    accessible(&coaccessible(a))
}

/// Which operand of a [`disjoint_union`] a state came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Maps each state of a union back to its side and original index.
pub type Provenance = Vec<(Side, usize)>;

fn same_alphabet(a: &OpenDes, b: &OpenDes) -> Result<()> {
    let (x, y) = (a.alphabet(), b.alphabet());
    if x.inputs() != y.inputs() || x.outputs() != y.outputs() {
        return Err(Error::AlphabetMismatch(
            "operands have different input or output alphabets".into(),
        ));
    }
    if x.observable() != y.observable() {
        return Err(Error::AlphabetMismatch(
            "operands have different observable outputs".into(),
        ));
    }
    Ok(())
}

/// Union of two transducers over the same alphabet. States are renamed
/// `L:q` and `R:q`; initial, marked and secret sets are united.
pub fn disjoint_union(a: &OpenDes, b: &OpenDes) -> Result<(OpenDes, Provenance)> {
    same_alphabet(a, b)?;
    let na = a.num_states();
    let mut states = Vec::with_capacity(na + b.num_states());
    states.extend(a.state_names().iter().map(|s| format!("L:{s}")));
    states.extend(b.state_names().iter().map(|s| format!("R:{s}")));
    let lift = |s: &StateSet, shift: usize| s.iter().map(|&q| q + shift).collect::<StateSet>();
    let union = |x: &StateSet, y: &StateSet| {
        let mut u = lift(x, 0);
        u.extend(lift(y, na));
        u
    };
    let nonsecret = match (a.declared_nonsecret(), b.declared_nonsecret()) {
        (None, None) => None,
        _ => Some(union(&a.nonsecret(), &b.nonsecret())),
    };
    let edges = a.edges().iter().copied().chain(b.edges().iter().map(|e| Edge {
        from: e.from + na,
        to: e.to + na,
        ..*e
    }));
    let model = OpenDes::from_parts(
        states,
        a.alphabet().clone(),
        union(a.initial(), b.initial()),
        union(a.marked(), b.marked()),
        union(a.secret(), b.secret()),
        nonsecret,
        edges,
    );
    // `L:` sorts before `R:`, so left states keep their relative order first.
    let provenance = (0..na)
        .map(|q| (Side::Left, q))
        .chain((0..b.num_states()).map(|q| (Side::Right, q)))
        .collect();
    Ok((model, provenance))
}

fn pair_name(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// Builds the product state space `g × other` given a per-edge successor
/// function for the second component.
fn product<F>(
    g: &OpenDes,
    other_names: &[String],
    other_initial: &StateSet,
    other_marked: &StateSet,
    mut step: F,
) -> OpenDes
where
    F: FnMut(usize, &Edge) -> Vec<usize>,
{
    let m = other_names.len();
    let id = |q: usize, p: usize| q * m + p;
    let mut states = Vec::with_capacity(g.num_states() * m);
    for q in g.state_names() {
        for p in other_names {
            states.push(pair_name(q, p));
        }
    }
    let initial = g
        .initial()
        .iter()
        .flat_map(|&q| other_initial.iter().map(move |&p| id(q, p)))
        .collect();
    let marked = (0..g.num_states())
        .filter(|q| g.marked().is_empty() || g.marked().contains(q))
        .flat_map(|q| other_marked.iter().map(move |&p| id(q, p)))
        .collect();
    let mut edges = Vec::new();
    for e in g.edges() {
        for p in 0..m {
            for p2 in step(p, e) {
                edges.push(Edge {
                    from: id(e.from, p),
                    input: e.input,
                    output: e.output,
                    to: id(e.to, p2),
                });
            }
        }
    }
    OpenDes::from_parts(
        states,
        g.alphabet().clone(),
        initial,
        marked,
        StateSet::new(),
        None,
        edges,
    )
}

/// Synchronous product of a transducer with an automaton over its outputs:
/// silent outputs leave the automaton where it is, other outputs must be
/// matched by an automaton transition. Product states are `(q,p)`; a state
/// is marked when `p` is marked (and `q` is marked, if `g` marks anything).
pub fn io_product(g: &OpenDes, spec: &Nfa) -> Result<OpenDes> {
    let outputs = g.alphabet().outputs();
    let mut event_of_output = vec![None; outputs.len()];
    for (e, name) in spec.events().iter().enumerate() {
        let o = outputs.binary_search(name).map_err(|_| {
            Error::AlphabetMismatch(format!("spec event {name:?} is not an output of the model"))
        })?;
        event_of_output[o] = Some(e);
    }
    Ok(product(
        g,
        spec.state_names(),
        spec.initial(),
        spec.marked(),
        |p, edge| match edge.output {
            None => vec![p],
            Some(o) => match event_of_output[o] {
                Some(e) => spec
                    .transitions_from(p)
                    .iter()
                    .filter(|t| t.1 == e)
                    .map(|t| t.2)
                    .collect(),
                None => Vec::new(),
            },
        },
    ))
}

/// Synchronous product of two transducers over the same alphabet: both
/// must take an edge with the same input and output. Marking follows `spec`.
pub fn io_product_relation(g: &OpenDes, spec: &OpenDes) -> Result<OpenDes> {
    let (x, y) = (g.alphabet(), spec.alphabet());
    if x.inputs() != y.inputs() || x.outputs() != y.outputs() {
        return Err(Error::AlphabetMismatch(
            "relation spec must use the model's input and output alphabets".into(),
        ));
    }
    Ok(product(
        g,
        spec.state_names(),
        spec.initial(),
        spec.marked(),
        |p, edge| {
            spec.edges_from(p)
                .iter()
                .filter(|f| f.input == edge.input && f.output == edge.output)
                .map(|f| f.to)
                .collect()
        },
    ))
}

/// Result of a subset construction: the deterministic automaton and, for
/// each of its states, the subset of original states it stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Determinized {
    pub dfa: Nfa,
    pub subsets: Vec<StateSet>,
    pub initial: usize,
}

fn closure(nfa: &Nfa, set: &StateSet, silent: &[bool]) -> StateSet {
    let mut out = set.clone();
    let mut stack: Vec<usize> = set.iter().copied().collect();
    while let Some(q) = stack.pop() {
        for &(_, e, r) in nfa.transitions_from(q) {
            if silent[e] && out.insert(r) {
                stack.push(r);
            }
        }
    }
    out
}

/// Subset construction over the `observable` events, closing every subset
/// under the remaining events. Subsets are named `{a,b}` and sorted; empty
/// successors are omitted. A subset is marked when it contains a marked state.
pub fn determinize(nfa: &Nfa, observable: &BTreeSet<usize>) -> Determinized {
    let silent: Vec<bool> = (0..nfa.events().len()).map(|e| !observable.contains(&e)).collect();
    let start = closure(nfa, nfa.initial(), &silent);
    let mut index: BTreeMap<StateSet, usize> = BTreeMap::new();
    let mut subsets = vec![start.clone()];
    index.insert(start, 0);
    let mut arcs = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        for &e in observable {
            let next = closure(nfa, &nfa.post(&subsets[i], e), &silent);
            if next.is_empty() {
                continue;
            }
            let j = *index.entry(next.clone()).or_insert_with(|| {
                subsets.push(next);
                subsets.len() - 1
            });
            arcs.push((i, e, j));
        }
        i += 1;
    }
    let events: Vec<String> = observable.iter().map(|&e| nfa.events()[e].clone()).collect();
    let event_pos: BTreeMap<usize, usize> = observable.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let names: Vec<String> = subsets
        .iter()
        .map(|s| {
            let members: Vec<&str> = s.iter().map(|&q| nfa.state_names()[q].as_str()).collect();
            format!("{{{}}}", members.join(","))
        })
        .collect();
    let marked = subsets
        .iter()
        .enumerate()
        .filter(|(_, s)| s.iter().any(|q| nfa.marked().contains(q)))
        .map(|(i, _)| i)
        .collect();
    let dfa = Nfa::from_parts(
        names.clone(),
        events,
        StateSet::from([0]),
        marked,
        arcs.into_iter().map(|(a, e, b)| (a, event_pos[&e], b)),
    );
    // `from_parts` sorted the states by name; carry the subsets along.
    let mut by_name: Vec<(String, StateSet)> = names.into_iter().zip(subsets).collect();
    by_name.sort_by(|a, b| a.0.cmp(&b.0));
    let initial = *dfa.initial().iter().next().expect("initial subset");
    Determinized {
        subsets: by_name.into_iter().map(|(_, s)| s).collect(),
        dfa,
        initial,
    }
}

/// True iff the marked language contains every prefix of its words.
pub fn is_prefix_closed(nfa: &Nfa) -> bool {
    let all: BTreeSet<usize> = (0..nfa.events().len()).collect();
    let det = determinize(nfa, &all);
    let live = trim(&det.dfa);
    (0..live.num_states()).all(|q| live.marked().contains(&q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled::fig1;
    use crate::format::ModelDoc;

    fn chain(marked: &[&str]) -> Nfa {
        Nfa::new(
            &["a", "b", "c"],
            &["e"],
            &["a"],
            marked,
            &[("a", "e", "b"), ("b", "e", "c")],
        )
        .unwrap()
    }

    #[test]
    fn accessible_drops_unreachable_island() {
        let nfa = Nfa::new(
            &["0", "1", "i", "j"],
            &["e"],
            &["0"],
            &["1"],
            &[("0", "e", "1"), ("i", "e", "j"), ("j", "e", "i")],
        )
        .unwrap();
        let acc = accessible(&nfa);
        assert_eq!(acc.state_names(), ["0", "1"]);
        assert_eq!(acc.transitions().len(), 1);
    }

    #[test]
    fn fig1_is_accessible_and_coaccessible_to_3() {
        let m = fig1();
        assert_eq!(accessible(&m), m);
        let marked = m.with_marked(m.state_set(&["3"]).unwrap());
        assert_eq!(coaccessible(&marked), marked);
    }

    #[test]
    fn empty_initial_or_marking_empties() {
        let nfa = Nfa::new(&["a"], &["e"], &[], &["a"], &[("a", "e", "a")]).unwrap();
        assert_eq!(accessible(&nfa).num_states(), 0);
        assert_eq!(coaccessible(&fig1()).num_states(), 0);
        assert_eq!(trim(&fig1()).num_states(), 0);
    }

    #[test]
    fn coaccessible_cuts_after_marking() {
        let c = coaccessible(&chain(&["b"]));
        assert_eq!(c.state_names(), ["a", "b"]);
    }

    #[test]
    fn trim_orders_agree_and_are_idempotent() {
        let nfa = chain(&["b"]);
        assert_eq!(accessible(&coaccessible(&nfa)), coaccessible(&accessible(&nfa)));
        let t = trim(&nfa);
        assert_eq!(trim(&t), t);
    }

    fn one_state(name: &str) -> OpenDes {
        OpenDes::from_doc(&ModelDoc {
            states: vec![name.into()],
            inputs: vec!["x".into()],
            outputs: vec!["o".into()],
            observable: vec!["o".into()],
            initial: vec![name.into()],
            edges: vec![[name.into(), "x".into(), "o".into(), name.into()]],
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn union_of_two_single_state_models() {
        let (u, prov) = disjoint_union(&one_state("s"), &one_state("s")).unwrap();
        assert_eq!(u.state_names(), ["L:s", "R:s"]);
        assert_eq!(u.initial().len(), 2);
        assert_eq!(prov, [(Side::Left, 0), (Side::Right, 0)]);
    }

    #[test]
    fn union_rejects_alphabet_mismatch() {
        assert!(matches!(
            disjoint_union(&fig1(), &one_state("s")),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn union_with_empty_model_keeps_structure() {
        let m = fig1();
        let empty = m.restrict(&[false; 4]);
        let (u, _) = disjoint_union(&m, &empty).unwrap();
        assert_eq!(u.num_states(), m.num_states());
        assert_eq!(u.edges().len(), m.edges().len());
        assert!(u.edges().iter().zip(m.edges()).all(|(a, b)| a == b));
    }

    #[test]
    fn product_with_universal_spec_marks_everything() {
        let m = fig1();
        let spec = Nfa::universal(m.alphabet().outputs()).unwrap();
        let p = io_product(&m, &spec).unwrap();
        assert_eq!(p.num_states(), 4);
        assert_eq!(p.marked().len(), 4);
        assert_eq!(p.edges().len(), m.edges().len());
        assert_eq!(p.state_names(), ["(0,u)", "(1,u)", "(2,u)", "(3,u)"]);
    }

    #[test]
    fn product_with_empty_language_marks_nothing() {
        let m = fig1();
        let p = io_product(&m, &Nfa::empty(m.alphabet().outputs()).unwrap()).unwrap();
        assert!(p.marked().is_empty());
    }

    #[test]
    fn product_rejects_foreign_events() {
        let spec = Nfa::universal(&["zzz"]).unwrap();
        assert!(matches!(io_product(&fig1(), &spec), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn determinize_keeps_deterministic_input() {
        let nfa = chain(&["c"]);
        let det = determinize(&nfa, &BTreeSet::from([0]));
        assert!(det.dfa.is_deterministic());
        assert_eq!(det.dfa.num_states(), 3);
        assert_eq!(det.dfa.transitions().len(), 2);
        assert!(det.dfa.accepts(&[0, 0]));
        assert!(!det.dfa.accepts(&[0]));
    }

    #[test]
    fn prefix_closed_examples() {
        let star = Nfa::new(&["p"], &["d2"], &["p"], &["p"], &[("p", "d2", "p")]).unwrap();
        assert!(is_prefix_closed(&star));
        let exact = Nfa::new(
            &["0", "1", "2"],
            &["d1", "d2"],
            &["0"],
            &["2"],
            &[("0", "d1", "1"), ("1", "d2", "2")],
        )
        .unwrap();
        assert!(!is_prefix_closed(&exact));
        assert!(is_prefix_closed(&Nfa::empty(&["a"]).unwrap()));
    }

    #[test]
    fn prefix_closed_despite_unmarked_duplicate_path() {
        // {ε, e, ee}: the unmarked middle state is covered by a marked twin.
        let nfa = Nfa::new(
            &["0", "1", "1m", "2"],
            &["e"],
            &["0"],
            &["0", "1m", "2"],
            &[("0", "e", "1"), ("0", "e", "1m"), ("1", "e", "2")],
        )
        .unwrap();
        assert!(is_prefix_closed(&nfa));
    }
}
