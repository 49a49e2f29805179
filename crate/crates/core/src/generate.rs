//! Seeded random instances for the cross-validation harnesses and benches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::Nfa;
use crate::model::{Alphabet, Edge, OpenDes, StateSet};

/// Shape of random models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelParams {
    pub max_states: usize,
    pub max_inputs: usize,
    /// At least two; exactly one output is unobservable.
    pub max_outputs: usize,
    /// Edges with a silent input.
    pub silent_inputs: bool,
    /// Edges with a silent output.
    pub silent_outputs: bool,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            max_states: 5,
            max_inputs: 2,
            max_outputs: 3,
            silent_inputs: false,
            silent_outputs: true,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn random_subset(rng: &mut impl Rng, n: usize, p: f64) -> StateSet {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

/// Random model with at least two states and a random strict secret set.
pub fn random_model(rng: &mut impl Rng, params: &ModelParams) -> OpenDes {
    let n = rng.gen_range(2..=params.max_states.max(2));
    let nx = rng.gen_range(1..=params.max_inputs.max(1));
    let nd = rng.gen_range(2..=params.max_outputs.max(2));
    let inputs = names("x", nx);
    let outputs = names("d", nd);
    let hidden = rng.gen_range(0..nd);
    let observable: Vec<&String> = outputs.iter().enumerate().filter(|&(i, _)| i != hidden).map(|(_, o)| o).collect();
    let alphabet = Alphabet::new(&inputs, &outputs, &observable).expect("generated alphabet is valid");

    let mut edges = Vec::new();
    let output = |rng: &mut ChaCha8Rng| -> Option<usize> {
        if params.silent_outputs && rng.gen_bool(0.15) {
            None
        } else {
            Some(rng.gen_range(0..nd))
        }
    };
    let mut local = ChaCha8Rng::seed_from_u64(rng.gen());
    for q in 0..n {
        for x in 0..nx {
            for _ in 0..local.gen_range(0..=2) {
                edges.push(Edge {
                    from: q,
                    input: Some(x),
                    output: output(&mut local),
                    to: local.gen_range(0..n),
                });
            }
        }
        if params.silent_inputs && local.gen_bool(0.3) {
            edges.push(Edge {
                from: q,
                input: None,
                output: output(&mut local),
                to: local.gen_range(0..n),
            });
        }
    }

    let mut initial = random_subset(&mut local, n, 0.25);
    if initial.is_empty() {
        initial.insert(local.gen_range(0..n));
    }
    let mut secret = random_subset(&mut local, n, 0.4);
    if secret.len() == n {
        secret.remove(&local.gen_range(0..n));
    }
    OpenDes::from_parts(
        names("q", n),
        alphabet,
        initial,
        StateSet::new(),
        secret,
        None,
        edges,
    )
}

/// Random automaton over `events`. With `prefix_closed`, every state is
/// marked, which makes the marked language prefix-closed.
pub fn random_nfa<S: AsRef<str>>(rng: &mut impl Rng, events: &[S], max_states: usize, prefix_closed: bool) -> Nfa {
    let n = rng.gen_range(1..=max_states.max(1));
    let mut events: Vec<String> = events.iter().map(|e| e.as_ref().to_string()).collect();
    events.sort();
    events.dedup();
    let mut transitions = Vec::new();
    for q in 0..n {
        for e in 0..events.len() {
            for _ in 0..rng.gen_range(0..=2) {
                if rng.gen_bool(0.6) {
                    transitions.push((q, e, rng.gen_range(0..n)));
                }
            }
        }
    }
    let marked = if prefix_closed {
        (0..n).collect()
    } else {
        random_subset(rng, n, 0.5)
    };
    Nfa::from_parts(names("p", n), events, StateSet::from([0]), marked, transitions)
}
