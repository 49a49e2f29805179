//! Open discrete-event system model: a nondeterministic finite-state
//! transducer whose edges carry an input symbol (or silence) and an output
//! symbol (or silence).
//!
//! States and symbols are referred to by index. Index order is the
//! lexicographic order of the names, so every set and edge list has one
//! canonical ordering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result, SymbolKind};
use crate::format::ModelDoc;

/// Set of state indices of one automaton.
pub type StateSet = BTreeSet<usize>;

/// Token used for the silent symbol (ε) in files and on the command line.
pub const SILENT: &str = "~";

/// Input, output and observable alphabets of an open DES.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    inputs: Vec<String>,
    outputs: Vec<String>,
    observable: Vec<bool>,
}

impl Alphabet {
    /// Builds an alphabet from names. Names are sorted; duplicates, overlaps,
    /// the reserved silent token and observable names outside the outputs
    /// are rejected.
    pub fn new<I, O, V>(inputs: &[I], outputs: &[O], observable: &[V]) -> Result<Self>
    where
        I: AsRef<str>,
        O: AsRef<str>,
        V: AsRef<str>,
    {
        let mut diags = Vec::new();
        let inputs = sorted_names(inputs, "input", &mut diags);
        let outputs = sorted_names(outputs, "output", &mut diags);
        check_alphabets(&inputs, &outputs, &mut diags);
        let mut flags = vec![false; outputs.len()];
        for name in observable {
            match outputs.binary_search_by(|o| o.as_str().cmp(name.as_ref())) {
                Ok(i) => flags[i] = true,
                Err(_) => diags.push(Diagnostic::new(
                    DiagnosticKind::ObservableNotOutput,
                    name.as_ref(),
                )),
            }
        }
        if diags.is_empty() {
            Ok(Alphabet {
                inputs,
                outputs,
                observable: flags,
            })
        } else {
            Err(Error::Invalid(diags))
        }
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn is_observable(&self, output: usize) -> bool {
        self.observable[output]
    }

    /// Observable output indices (Δ_o).
    pub fn observable(&self) -> StateSet {
        (0..self.outputs.len()).filter(|&o| self.observable[o]).collect()
    }

    /// Unobservable output indices (Δ_uo).
    pub fn unobservable(&self) -> StateSet {
        (0..self.outputs.len()).filter(|&o| !self.observable[o]).collect()
    }

    pub fn input_index(&self, name: &str) -> Result<usize> {
        self.inputs
            .binary_search_by(|s| s.as_str().cmp(name))
            .map_err(|_| Error::UnknownSymbol {
                kind: SymbolKind::Input,
                name: name.to_string(),
            })
    }

    pub fn output_index(&self, name: &str) -> Result<usize> {
        self.outputs
            .binary_search_by(|s| s.as_str().cmp(name))
            .map_err(|_| Error::UnknownSymbol {
                kind: SymbolKind::Output,
                name: name.to_string(),
            })
    }

    /// Resolves an input word given by names.
    pub fn input_word<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.input_index(n.as_ref())).collect()
    }

    /// Resolves an output word given by names.
    pub fn output_word<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.output_index(n.as_ref())).collect()
    }

    /// Resolves an input name, mapping the silent token to `None`.
    pub fn input_or_silent(&self, name: &str) -> Result<Option<usize>> {
        if name == SILENT {
            Ok(None)
        } else {
            self.input_index(name).map(Some)
        }
    }

    /// Resolves an output name, mapping the silent token to `None`.
    pub fn output_or_silent(&self, name: &str) -> Result<Option<usize>> {
        if name == SILENT {
            Ok(None)
        } else {
            self.output_index(name).map(Some)
        }
    }

    pub fn input_name(&self, input: Option<usize>) -> &str {
        input.map_or(SILENT, |i| &self.inputs[i])
    }

    pub fn output_name(&self, output: Option<usize>) -> &str {
        output.map_or(SILENT, |o| &self.outputs[o])
    }

    /// Natural projection: erases silent and unobservable outputs.
    pub fn project(&self, word: &[Option<usize>]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(word.len());
        for &symbol in word {
            match symbol {
                None => {}
                Some(o) if o >= self.outputs.len() => {
                    return Err(Error::UnknownSymbol {
                        kind: SymbolKind::Output,
                        name: o.to_string(),
                    })
                }
                Some(o) if self.observable[o] => out.push(o),
                Some(_) => {}
            }
        }
        Ok(out)
    }

    /// Same alphabet with a different observable set.
    pub fn with_observable<S: AsRef<str>>(&self, observable: &[S]) -> Result<Alphabet> {
        Alphabet::new(&self.inputs, &self.outputs, observable)
    }

    pub(crate) fn check_input(&self, input: usize) -> Result<()> {
        if input < self.inputs.len() {
            Ok(())
        } else {
            Err(Error::UnknownSymbol {
                kind: SymbolKind::Input,
                name: input.to_string(),
            })
        }
    }

    pub(crate) fn check_output(&self, output: usize) -> Result<()> {
        if output < self.outputs.len() {
            Ok(())
        } else {
            Err(Error::UnknownSymbol {
                kind: SymbolKind::Output,
                name: output.to_string(),
            })
        }
    }

    fn observable_names(&self) -> Vec<String> {
        self.outputs
            .iter()
            .zip(&self.observable)
            .filter(|(_, &obs)| obs)
            .map(|(o, _)| o.clone())
            .collect()
    }
}

/// One transducer edge `from --input/output--> to`; `None` stands for ε.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub input: Option<usize>,
    pub output: Option<usize>,
    pub to: usize,
}

/// Nondeterministic finite-state transducer with marked, secret and
/// non-secret state sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenDes {
    states: Vec<String>,
    alphabet: Alphabet,
    initial: StateSet,
    marked: StateSet,
    secret: StateSet,
    nonsecret: Option<StateSet>,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    comment: Option<String>,
}

impl OpenDes {
    /// Assembles a model from already-resolved parts. State names must be
    /// unique; they are sorted and every index is remapped accordingly.
    pub(crate) fn from_parts(
        states: Vec<String>,
        alphabet: Alphabet,
        initial: StateSet,
        marked: StateSet,
        secret: StateSet,
        nonsecret: Option<StateSet>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> OpenDes {
        let mut order: Vec<usize> = (0..states.len()).collect();
        order.sort_by(|&a, &b| states[a].cmp(&states[b]));
        let mut remap = vec![0; states.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let names = order.iter().map(|&i| states[i].clone()).collect::<Vec<_>>();
        let map_set = |s: &StateSet| s.iter().map(|&q| remap[q]).collect::<StateSet>();
        let mut edges: Vec<Edge> = edges
            .into_iter()
            .map(|e| Edge {
                from: remap[e.from],
                to: remap[e.to],
                ..e
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let offsets = edge_offsets(names.len(), &edges);
        OpenDes {
            initial: map_set(&initial),
            marked: map_set(&marked),
            secret: map_set(&secret),
            nonsecret: nonsecret.as_ref().map(map_set),
            states: names,
            alphabet,
            edges,
            offsets,
            comment: None,
        }
    }

    /// Builds a model from its file representation, rejecting invalid ones.
    pub fn from_doc(doc: &ModelDoc) -> Result<OpenDes> {
        let diags = validate(doc);
        if !diags.is_empty() {
            return Err(Error::Invalid(diags));
        }
        let alphabet = Alphabet::new(&doc.inputs, &doc.outputs, &doc.observable)?;
        let index: BTreeMap<&str, usize> = doc
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let set = |names: &[String]| names.iter().map(|n| index[n.as_str()]).collect::<StateSet>();
        let expand = doc.epsilon_output.as_deref() == Some("all");
        let mut edges = Vec::with_capacity(doc.edges.len() * if expand { 2 } else { 1 });
        for [from, input, output, to] in &doc.edges {
            let edge = Edge {
                from: index[from.as_str()],
                input: alphabet.input_or_silent(input)?,
                output: alphabet.output_or_silent(output)?,
                to: index[to.as_str()],
            };
            edges.push(edge);
            if expand && edge.output.is_some() {
                edges.push(Edge {
                    output: None,
                    ..edge
                });
            }
        }
        let mut model = OpenDes::from_parts(
            doc.states.clone(),
            alphabet,
            set(&doc.initial),
            set(&doc.marked),
            set(&doc.secret),
            doc.nonsecret.as_deref().map(set),
            edges,
        );
        model.comment = doc.comment.clone();
        Ok(model)
    }

    /// File representation in canonical order.
    pub fn to_doc(&self) -> ModelDoc {
        let names = |s: &StateSet| self.set_names(s);
        ModelDoc {
            comment: self.comment.clone(),
            states: self.states.clone(),
            inputs: self.alphabet.inputs.clone(),
            outputs: self.alphabet.outputs.clone(),
            observable: self.alphabet.observable_names(),
            initial: names(&self.initial),
            marked: names(&self.marked),
            secret: names(&self.secret),
            nonsecret: self.nonsecret.as_ref().map(names),
            edges: self
                .edges
                .iter()
                .map(|e| {
                    [
                        self.states[e.from].clone(),
                        self.alphabet.input_name(e.input).to_string(),
                        self.alphabet.output_name(e.output).to_string(),
                        self.states[e.to].clone(),
                    ]
                })
                .collect(),
            epsilon_output: None,
        }
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.states
            .binary_search_by(|s| s.as_str().cmp(name))
            .map_err(|_| Error::UnknownState(name.to_string()))
    }

    /// Resolves a set of state names.
    pub fn state_set<S: AsRef<str>>(&self, names: &[S]) -> Result<StateSet> {
        names.iter().map(|n| self.state_index(n.as_ref())).collect()
    }

    pub fn set_names(&self, set: &StateSet) -> Vec<String> {
        set.iter().map(|&q| self.states[q].clone()).collect()
    }

    /// Renders a state set as `{a,b}`.
    pub fn set_label(&self, set: &StateSet) -> String {
        format!("{{{}}}", self.set_names(set).join(","))
    }

    pub fn all_states(&self) -> StateSet {
        (0..self.states.len()).collect()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> &StateSet {
        &self.initial
    }

    pub fn marked(&self) -> &StateSet {
        &self.marked
    }

    pub fn secret(&self) -> &StateSet {
        &self.secret
    }

    /// Explicit non-secret set, if the model declares one.
    pub fn declared_nonsecret(&self) -> Option<&StateSet> {
        self.nonsecret.as_ref()
    }

    /// Non-secret set; defaults to the complement of the secret set.
    pub fn nonsecret(&self) -> StateSet {
        match &self.nonsecret {
            Some(ns) => ns.clone(),
            None => self
                .all_states()
                .difference(&self.secret)
                .copied()
                .collect(),
        }
    }

    pub fn comment(&self) -> Option<&str> {
        self.comment.as_deref()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edges leaving `q`, sorted by (input, output, target).
    pub fn edges_from(&self, q: usize) -> &[Edge] {
        &self.edges[self.offsets[q]..self.offsets[q + 1]]
    }

    pub fn has_silent_inputs(&self) -> bool {
        self.edges.iter().any(|e| e.input.is_none())
    }

    fn check_state(&self, q: usize) -> Result<()> {
        if q < self.states.len() {
            Ok(())
        } else {
            Err(Error::UnknownState(q.to_string()))
        }
    }

    /// Successor states T(q, x). A silent input always keeps the current
    /// state, in addition to any explicit ε-input edges.
    pub fn transitions(&self, q: usize, input: Option<usize>) -> Result<StateSet> {
        self.check_state(q)?;
        let mut out: StateSet = self
            .edges_from(q)
            .iter()
            .filter(|e| e.input == input)
            .map(|e| e.to)
            .collect();
        if input.is_none() {
            out.insert(q);
        }
        Ok(out)
    }

    /// Output symbols λ(q, x); a silent input always allows a silent output.
    pub fn outputs(&self, q: usize, input: Option<usize>) -> Result<BTreeSet<Option<usize>>> {
        self.check_state(q)?;
        let mut out: BTreeSet<Option<usize>> = self
            .edges_from(q)
            .iter()
            .filter(|e| e.input == input)
            .map(|e| e.output)
            .collect();
        if input.is_none() {
            out.insert(None);
        }
        Ok(out)
    }

    pub fn with_observable<S: AsRef<str>>(&self, observable: &[S]) -> Result<OpenDes> {
        let mut m = self.clone();
        m.alphabet = self.alphabet.with_observable(observable)?;
        Ok(m)
    }

    pub fn with_secret(&self, secret: StateSet) -> OpenDes {
        OpenDes {
            secret,
            ..self.clone()
        }
    }

    pub fn with_nonsecret(&self, nonsecret: Option<StateSet>) -> OpenDes {
        OpenDes {
            nonsecret,
            ..self.clone()
        }
    }

    pub fn with_marked(&self, marked: StateSet) -> OpenDes {
        OpenDes {
            marked,
            ..self.clone()
        }
    }

    pub fn with_initial(&self, initial: StateSet) -> OpenDes {
        OpenDes {
            initial,
            ..self.clone()
        }
    }

    pub fn with_comment(&self, comment: Option<String>) -> OpenDes {
        OpenDes {
            comment,
            ..self.clone()
        }
    }

    /// Sub-model on the states flagged in `keep`; state order is preserved.
    pub(crate) fn restrict(&self, keep: &[bool]) -> OpenDes {
        let mut remap = vec![usize::MAX; self.states.len()];
        let mut states = Vec::new();
        for (q, name) in self.states.iter().enumerate() {
            if keep[q] {
                remap[q] = states.len();
                states.push(name.clone());
            }
        }
        let map_set = |s: &StateSet| {
            s.iter()
                .filter(|&&q| keep[q])
                .map(|&q| remap[q])
                .collect::<StateSet>()
        };
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| keep[e.from] && keep[e.to])
            .map(|e| Edge {
                from: remap[e.from],
                to: remap[e.to],
                ..*e
            })
            .collect();
        let offsets = edge_offsets(states.len(), &edges);
        OpenDes {
            states,
            alphabet: self.alphabet.clone(),
            initial: map_set(&self.initial),
            marked: map_set(&self.marked),
            secret: map_set(&self.secret),
            nonsecret: self.nonsecret.as_ref().map(map_set),
            edges,
            offsets,
            comment: self.comment.clone(),
        }
    }
}

fn edge_offsets(n: usize, edges: &[Edge]) -> Vec<usize> {
    let mut offsets = vec![0; n + 1];
    for e in edges {
        offsets[e.from + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    offsets
}

/// What a [`Diagnostic`] complains about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    DuplicateState,
    DuplicateSymbol,
    EmptyStates,
    EmptyInputs,
    EmptyOutputs,
    ReservedSymbol,
    OverlappingAlphabets,
    ObservableNotOutput,
    EmptyInitial,
    UnknownInitialState,
    UnknownMarkedState,
    UnknownSecretState,
    UnknownNonsecretState,
    UnknownSourceState,
    UnknownTargetState,
    UnknownInput,
    UnknownOutput,
    UnknownEvent,
    BadEpsilonOutputFlag,
}

impl DiagnosticKind {
    fn message(self) -> &'static str {
        use DiagnosticKind::*;
        match self {
            DuplicateState => "duplicate state",
            DuplicateSymbol => "duplicate symbol",
            EmptyStates => "empty state set",
            EmptyInputs => "empty input alphabet",
            EmptyOutputs => "empty output alphabet",
            ReservedSymbol => "reserved silent token used as a symbol",
            OverlappingAlphabets => "symbol is both an input and an output",
            ObservableNotOutput => "observable symbol is not an output",
            EmptyInitial => "empty initial set",
            UnknownInitialState => "unknown initial state",
            UnknownMarkedState => "unknown marked state",
            UnknownSecretState => "unknown secret state",
            UnknownNonsecretState => "unknown nonsecret state",
            UnknownSourceState => "unknown source state",
            UnknownTargetState => "unknown target state",
            UnknownInput => "unknown input",
            UnknownOutput => "unknown output",
            UnknownEvent => "unknown event",
            BadEpsilonOutputFlag => "epsilon_output must be \"all\"",
        }
    }
}

/// One violated model invariant and the offending element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub element: String,
}

impl Diagnostic {
    pub(crate) fn new(kind: DiagnosticKind, element: impl Into<String>) -> Self {
        Diagnostic {
            kind,
            element: element.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:?}", self.kind.message(), self.element)
    }
}

fn sorted_names<S: AsRef<str>>(names: &[S], what: &str, diags: &mut Vec<Diagnostic>) -> Vec<String> {
    let mut seen = BTreeSet::new();
    for n in names {
        let n = n.as_ref();
        if n == SILENT {
            diags.push(Diagnostic::new(DiagnosticKind::ReservedSymbol, n));
        } else if !seen.insert(n.to_string()) {
            diags.push(Diagnostic::new(DiagnosticKind::DuplicateSymbol, n));
        }
    }
    if seen.is_empty() {
        let kind = if what == "input" {
            DiagnosticKind::EmptyInputs
        } else {
            DiagnosticKind::EmptyOutputs
        };
        diags.push(Diagnostic::new(kind, what));
    }
    seen.into_iter().collect()
}

fn check_alphabets(inputs: &[String], outputs: &[String], diags: &mut Vec<Diagnostic>) {
    for i in inputs {
        if outputs.binary_search(i).is_ok() {
            diags.push(Diagnostic::new(DiagnosticKind::OverlappingAlphabets, i.as_str()));
        }
    }
}

/// Checks every model invariant; the result is empty iff the document
/// describes a well-formed open DES.
pub fn validate(doc: &ModelDoc) -> Vec<Diagnostic> {
    use DiagnosticKind::*;
    let mut diags = Vec::new();
    let mut states = BTreeSet::new();
    for s in &doc.states {
        if !states.insert(s.as_str()) {
            diags.push(Diagnostic::new(DuplicateState, s.as_str()));
        }
    }
    if states.is_empty() {
        diags.push(Diagnostic::new(EmptyStates, "states"));
    }
    let inputs = sorted_names(&doc.inputs, "input", &mut diags);
    let outputs = sorted_names(&doc.outputs, "output", &mut diags);
    check_alphabets(&inputs, &outputs, &mut diags);
    for o in &doc.observable {
        if outputs.binary_search(o).is_err() {
            diags.push(Diagnostic::new(ObservableNotOutput, o.as_str()));
        }
    }
    if doc.initial.is_empty() {
        diags.push(Diagnostic::new(EmptyInitial, "initial"));
    }
    let mut check_set = |names: &[String], kind| {
        for n in names {
            if !states.contains(n.as_str()) {
                diags.push(Diagnostic::new(kind, n.as_str()));
            }
        }
    };
    check_set(&doc.initial, UnknownInitialState);
    check_set(&doc.marked, UnknownMarkedState);
    check_set(&doc.secret, UnknownSecretState);
    if let Some(ns) = &doc.nonsecret {
        check_set(ns, UnknownNonsecretState);
    }
    for [from, input, output, to] in &doc.edges {
        if !states.contains(from.as_str()) {
            diags.push(Diagnostic::new(UnknownSourceState, from.as_str()));
        }
        if !states.contains(to.as_str()) {
            diags.push(Diagnostic::new(UnknownTargetState, to.as_str()));
        }
        if input != SILENT && inputs.binary_search(input).is_err() {
            diags.push(Diagnostic::new(UnknownInput, input.as_str()));
        }
        if output != SILENT && outputs.binary_search(output).is_err() {
            diags.push(Diagnostic::new(UnknownOutput, output.as_str()));
        }
    }
    if let Some(flag) = &doc.epsilon_output {
        if flag != "all" {
            diags.push(Diagnostic::new(BadEpsilonOutputFlag, flag.as_str()));
        }
    }
    diags
}
