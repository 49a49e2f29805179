//! Run semantics by exhaustive search. Nothing here uses the observer; these
//! functions are the ground truth the constructions are checked against.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Alphabet, OpenDes, StateSet, SILENT};

/// One run step: the edge label taken and the state reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub input: Option<usize>,
    pub output: Option<usize>,
    pub to: usize,
}

/// A concrete execution starting at `start`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Run {
    pub start: usize,
    pub steps: Vec<Step>,
}

impl Run {
    pub fn end(&self) -> usize {
        self.steps.last().map_or(self.start, |s| s.to)
    }

    /// Input word, silent inputs erased.
    pub fn inputs(&self) -> Vec<usize> {
        self.steps.iter().filter_map(|s| s.input).collect()
    }

    /// Output word, silent outputs erased positionally.
    pub fn outputs(&self) -> Vec<usize> {
        self.steps.iter().filter_map(|s| s.output).collect()
    }

    /// Step labels `(input, output)` with silences kept.
    pub fn labels(&self) -> Vec<(Option<usize>, Option<usize>)> {
        self.steps.iter().map(|s| (s.input, s.output)).collect()
    }

    /// What an active intruder sees: each step becomes `(input, output)`
    /// with unobservable outputs blanked, and steps that show nothing at all
    /// are dropped.
    pub fn observation(&self, alphabet: &Alphabet) -> Vec<Label> {
        self.steps
            .iter()
            .filter_map(|s| Label::seen(alphabet, s.input, s.output))
            .collect()
    }
}

/// Intruder-visible step label: the injected input (or none) paired with
/// the observed output (or none). Never both `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub input: Option<usize>,
    pub output: Option<usize>,
}

impl Label {
    /// Label of an edge as the intruder sees it, `None` if invisible.
    pub fn seen(alphabet: &Alphabet, input: Option<usize>, output: Option<usize>) -> Option<Label> {
        let output = output.filter(|&o| alphabet.is_observable(o));
        if input.is_none() && output.is_none() {
            None
        } else {
            Some(Label { input, output })
        }
    }

    /// Parses `x/d`, `x` or `~/d` style names against an alphabet.
    pub fn parse(alphabet: &Alphabet, input: &str, output: &str) -> Result<Label> {
        let label = Label {
            input: alphabet.input_or_silent(input)?,
            output: alphabet.output_or_silent(output)?,
        };
        label.check(alphabet)?;
        Ok(label)
    }

    pub(crate) fn check(&self, alphabet: &Alphabet) -> Result<()> {
        if let Some(x) = self.input {
            alphabet.check_input(x)?;
        }
        if let Some(o) = self.output {
            alphabet.check_output(o)?;
            if !alphabet.is_observable(o) {
                return Err(Error::InvalidQuery(format!(
                    "label output {:?} is not observable",
                    alphabet.outputs()[o]
                )));
            }
        }
        if self.input.is_none() && self.output.is_none() {
            return Err(Error::InvalidQuery(format!("label ({SILENT},{SILENT}) is invisible")));
        }
        Ok(())
    }

    pub fn display<'a>(&self, alphabet: &'a Alphabet) -> LabelDisplay<'a> {
        LabelDisplay {
            label: *self,
            alphabet,
        }
    }
}

/// `(x,d)` rendering of a label, with `~` for silence.
pub struct LabelDisplay<'a> {
    label: Label,
    alphabet: &'a Alphabet,
}

impl fmt::Display for LabelDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{})",
            self.alphabet.input_name(self.label.input),
            self.alphabet.output_name(self.label.output)
        )
    }
}

fn check_word(model: &OpenDes, w: &[usize]) -> Result<()> {
    w.iter().try_for_each(|&x| model.alphabet().check_input(x))
}

fn check_state(model: &OpenDes, q: usize) -> Result<()> {
    if q < model.num_states() {
        Ok(())
    } else {
        Err(Error::UnknownState(q.to_string()))
    }
}

fn starts(model: &OpenDes, from: Option<usize>) -> Result<StateSet> {
    match from {
        Some(q) => {
            check_state(model, q)?;
            Ok(StateSet::from([q]))
        }
        None => Ok(model.initial().clone()),
    }
}

/// Default cap on consecutive silent-input steps: enough to reach every
/// state a chain of silent moves can reach.
pub fn default_silent_bound(model: &OpenDes) -> usize {
    model.num_states()
}

/// All runs from `q0` whose input word is `w`, with at most
/// [`default_silent_bound`] silent-input steps before, between and after
/// the inputs.
pub fn enumerate_runs(model: &OpenDes, w: &[usize], q0: usize) -> Result<Vec<Run>> {
    enumerate_runs_bounded(model, w, q0, default_silent_bound(model))
}

pub fn enumerate_runs_bounded(
    model: &OpenDes,
    w: &[usize],
    q0: usize,
    silent_bound: usize,
) -> Result<Vec<Run>> {
    check_word(model, w)?;
    check_state(model, q0)?;
    let mut runs = Vec::new();
    let mut steps = Vec::new();
    extend_runs(model, w, silent_bound, q0, 0, 0, &mut steps, &mut |steps| {
        runs.push(Run {
            start: q0,
            steps: steps.to_vec(),
        })
    });
    Ok(runs)
}

#[allow(clippy::too_many_arguments)]
fn extend_runs(
    model: &OpenDes,
    w: &[usize],
    bound: usize,
    q: usize,
    pos: usize,
    silent: usize,
    steps: &mut Vec<Step>,
    emit: &mut dyn FnMut(&[Step]),
) {
    if pos == w.len() {
        emit(steps);
    }
    for e in model.edges_from(q) {
        let next = match e.input {
            None if silent < bound => (pos, silent + 1),
            Some(x) if pos < w.len() && w[pos] == x => (pos + 1, 0),
            _ => continue,
        };
        steps.push(Step {
            input: e.input,
            output: e.output,
            to: e.to,
        });
        extend_runs(model, w, bound, e.to, next.0, next.1, steps, emit);
        steps.pop();
    }
}

fn runs_from(model: &OpenDes, w: &[usize], from: Option<usize>) -> Result<Vec<Run>> {
    let mut all = Vec::new();
    for q0 in starts(model, from)? {
        all.extend(enumerate_runs(model, w, q0)?);
    }
    Ok(all)
}

/// True iff some run from an initial state consumes `w`.
pub fn accepts(model: &OpenDes, w: &[usize]) -> Result<bool> {
    check_word(model, w)?;
    for &q0 in model.initial() {
        let mut found = false;
        extend_runs(
            model,
            w,
            default_silent_bound(model),
            q0,
            0,
            0,
            &mut Vec::new(),
            &mut |_| found = true,
        );
        if found {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Output words of the runs on `w`, from `from` or pooled over the initial
/// states. Each output word is tied to the run that produced it.
pub fn output_words(model: &OpenDes, w: &[usize], from: Option<usize>) -> Result<BTreeSet<Vec<usize>>> {
    Ok(runs_from(model, w, from)?.iter().map(Run::outputs).collect())
}

/// Membership in the input-output language: some run has exactly the step
/// labels `rho`; with `marked`, some such run also ends in a marked state.
pub fn io_language_member(
    model: &OpenDes,
    rho: &[(Option<usize>, Option<usize>)],
    marked: bool,
) -> Result<bool> {
    for &(x, d) in rho {
        if let Some(x) = x {
            model.alphabet().check_input(x)?;
        }
        if let Some(d) = d {
            model.alphabet().check_output(d)?;
        }
    }
    let mut current = model.initial().clone();
    for &(x, d) in rho {
        current = current
            .iter()
            .flat_map(|&q| model.edges_from(q))
            .filter(|e| e.input == x && e.output == d)
            .map(|e| e.to)
            .collect();
    }
    Ok(if marked {
        current.iter().any(|q| model.marked().contains(q))
    } else {
        !current.is_empty()
    })
}

/// End states of the runs on `w` whose projected output is `alpha`.
pub fn estimate(model: &OpenDes, w: &[usize], alpha: &[usize], from: Option<usize>) -> Result<StateSet> {
    let a = model.alphabet();
    for &d in alpha {
        a.check_output(d)?;
    }
    let mut out = StateSet::new();
    for run in runs_from(model, w, from)? {
        let outputs: Vec<Option<usize>> = run.outputs().into_iter().map(Some).collect();
        if a.project(&outputs)? == alpha {
            out.insert(run.end());
        }
    }
    Ok(out)
}

/// End states of the runs from `starts` whose intruder view is exactly
/// `labels`. Invisible steps are allowed around every label, up to the
/// silent bound between two labels.
pub fn estimate_observed_from(model: &OpenDes, labels: &[Label], starts: &StateSet) -> Result<StateSet> {
    for l in labels {
        l.check(model.alphabet())?;
    }
    let bound = default_silent_bound(model);
    let mut out = StateSet::new();
    let mut seen = HashSet::new();
    let mut stack: Vec<(usize, usize, usize)> = starts.iter().map(|&q| (q, 0, 0)).collect();
    let a = model.alphabet();
    while let Some(node @ (q, pos, silent)) = stack.pop() {
        if !seen.insert(node) {
            continue;
        }
        if pos == labels.len() {
            out.insert(q);
        }
        for e in model.edges_from(q) {
            match Label::seen(a, e.input, e.output) {
                None if silent < bound => stack.push((e.to, pos, silent + 1)),
                Some(l) if pos < labels.len() && labels[pos] == l => stack.push((e.to, pos + 1, 0)),
                _ => {}
            }
        }
    }
    Ok(out)
}

/// [`estimate_observed_from`] pooled over the initial states.
pub fn estimate_observed(model: &OpenDes, labels: &[Label]) -> Result<StateSet> {
    estimate_observed_from(model, labels, model.initial())
}

/// Groups the runs on `w` from `starts` by what the intruder sees, giving
/// the end states for each observation.
pub fn observations(model: &OpenDes, w: &[usize], starts: &StateSet) -> Result<BTreeMap<Vec<Label>, StateSet>> {
    let mut out: BTreeMap<Vec<Label>, StateSet> = BTreeMap::new();
    for &q0 in starts {
        for run in enumerate_runs(model, w, q0)? {
            out.entry(run.observation(model.alphabet()))
                .or_default()
                .insert(run.end());
        }
    }
    Ok(out)
}

/// Output words by the literal set recursion, which pools the outputs of
/// every state reached so far instead of following individual runs.
/// Silent-input edges are not followed.
pub fn pooled_output_words(model: &OpenDes, w: &[usize], q0: usize) -> Result<BTreeSet<Vec<usize>>> {
    Ok(pooled_walk(model, w, q0)?.1)
}

fn pooled_walk(model: &OpenDes, w: &[usize], q0: usize) -> Result<(StateSet, BTreeSet<Vec<usize>>)> {
    check_word(model, w)?;
    check_state(model, q0)?;
    let mut reached = StateSet::from([q0]);
    let mut words = BTreeSet::from([Vec::new()]);
    for &x in w {
        let mut symbols = BTreeSet::new();
        let mut next = StateSet::new();
        for &q in &reached {
            symbols.extend(model.outputs(q, Some(x))?);
            next.extend(model.transitions(q, Some(x))?);
        }
        if next.is_empty() {
            return Ok((next, BTreeSet::new()));
        }
        words = words
            .iter()
            .flat_map(|s| {
                symbols.iter().map(move |d| {
                    let mut t = s.clone();
                    t.extend(*d);
                    t
                })
            })
            .collect();
        reached = next;
    }
    Ok((reached, words))
}

/// Estimator under the literal pooled recursion: every state reached on `w`
/// as soon as some pooled output word projects to `alpha`.
pub fn pooled_estimate(model: &OpenDes, w: &[usize], alpha: &[usize], from: Option<usize>) -> Result<StateSet> {
    let a = model.alphabet();
    let mut out = StateSet::new();
    for q0 in starts(model, from)? {
        let (reached, words) = pooled_walk(model, w, q0)?;
        let feasible = words.iter().any(|s| {
            let s: Vec<Option<usize>> = s.iter().copied().map(Some).collect();
            a.project(&s).is_ok_and(|p| p == alpha)
        });
        if feasible {
            out.extend(reached);
        }
    }
    Ok(out)
}

/// All words over `n` symbols of length at most `k`, shortest first, then
/// lexicographic.
pub fn words_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut all = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..k {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..n).map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}
