//! `ropacity`: verify opacity of open discrete-event systems from the shell.
//!
//! Exit status: 0 when the system is opaque or the command succeeded, 1 when
//! it is not opaque (or an attack exists), 2 on any usage or input error.

use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ropacity::attack::synthesize_attack;
use ropacity::automata::determinize;
use ropacity::dot::{model_to_dot, nfa_to_dot, observer_to_dot};
use ropacity::exec::Strategy;
use ropacity::format::{load_language_spec, load_model, model_to_json, nfa_to_json};
use ropacity::model::validate;
use ropacity::observer::{build_passive_nfa, build_rcso_observer};
use ropacity::transforms::{
    oracle_verify_riso, oracle_verify_rlbo, rcso_to_rlbo, riso_to_rlbo, rlbo_to_rcso, rlbo_to_riso, verify_riso,
    verify_rlbo, LanguageSpec, RisoProblem, RisoQuery, RlboProblem,
};
use ropacity::verify::{
    oracle_verify_rcso_per_initial, oracle_verify_rcso_pooled, oracle_verify_rcso_with, verify_cso_passive,
    verify_rcso_with, Verdict,
};
use ropacity::{Error, OpenDes, StateSet};

#[derive(Parser)]
#[command(name = "ropacity", version, about = "Opacity verification for open discrete-event systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file and summarize it.
    Validate(Common),
    /// Build the intruder's state estimator.
    Observer(Common),
    /// Decide an opacity property.
    Verify(Common),
    /// Synthesize a shortest input/observation attack.
    Attack(Common),
    /// Reduce one opacity question to another.
    Transform {
        #[command(flatten)]
        common: Common,
        /// Target property of the reduction.
        #[arg(long, value_enum)]
        to: Property,
    },
    /// Write the model as Graphviz.
    ExportDot(Common),
}

#[derive(Args)]
struct Common {
    /// Model file (JSON).
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_enum, default_value_t = Property::Rcso)]
    property: Property,
    /// Secret states, comma separated. Overrides the model file.
    #[arg(long, value_delimiter = ',')]
    secret: Option<Vec<String>>,
    /// Secret behaviour specification (language-based opacity).
    #[arg(long)]
    secret_spec: Option<PathBuf>,
    /// Non-secret behaviour specification (language-based opacity).
    #[arg(long)]
    nonsecret_spec: Option<PathBuf>,
    /// Secret initial states, comma separated (initial-state opacity).
    #[arg(long, value_delimiter = ',')]
    secret_initial: Option<Vec<String>>,
    /// Non-secret initial states, comma separated (initial-state opacity).
    #[arg(long, value_delimiter = ',')]
    nonsecret_initial: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t = Method::Observer)]
    method: Method,
    /// Input-word length bound for the oracle.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    bound: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Observable outputs, comma separated. Overrides the model file.
    #[arg(long, value_delimiter = ',')]
    observability: Option<Vec<String>>,
    /// Write the result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Oracle: compare erased output words pooled over initial states.
    #[arg(long, conflicts_with = "per_initial")]
    pooled_oracle: bool,
    /// Oracle: require a leak to show from a single initial state.
    #[arg(long)]
    per_initial: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Rcso,
    Cso,
    Rlbo,
    Riso,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Observer,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

/// A command failure: a message and the exit code 2.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(String, bool), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string();
            let line = first.lines().next().unwrap_or("invalid arguments");
            eprintln!("error: {}", line.trim_start_matches("error: ").trim());
            return ExitCode::from(2);
        }
    };
    let (common, result) = match &cli.command {
        Command::Validate(c) => (c, cmd_validate(c)),
        Command::Observer(c) => (c, cmd_observer(c)),
        Command::Verify(c) => (c, cmd_verify(c)),
        Command::Attack(c) => (c, cmd_attack(c)),
        Command::Transform { common, to } => (common, cmd_transform(common, *to)),
        Command::ExportDot(c) => (c, load(c).map(|m| (model_to_dot(&m), true))),
    };
    match result.and_then(|(text, ok)| emit(common, &text).map(|()| ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {}", msg.replace('\n', "; "));
            ExitCode::from(2)
        }
    }
}

fn emit(c: &Common, text: &str) -> Result<(), Failure> {
    match &c.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| Failure(format!("stdout: {e}")))
        }
    }
}

fn color_enabled(c: &Common) -> bool {
    c.output.is_none() && std::env::var("RO_COLOR").map_or(true, |v| v != "0") && std::io::stdout().is_terminal()
}

fn paint(on: bool, code: &str, s: &str) -> String {
    if on {
        format!("\x1b[{code}m{s}\x1b[0m")
    } else {
        s.to_string()
    }
}

fn states(m: &OpenDes, names: &[String]) -> Result<StateSet, Failure> {
    Ok(m.state_set(names)?)
}

/// Loads the model and applies the observability and secret overrides.
fn load(c: &Common) -> Result<OpenDes, Failure> {
    let mut m = load_model(&c.model)?;
    if let Some(obs) = &c.observability {
        m = m.with_observable(obs)?;
    }
    if let Some(s) = &c.secret {
        let secret = states(&m, s)?;
        m = m.with_secret(secret);
    }
    Ok(m)
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn cmd_validate(c: &Common) -> Outcome {
    let m = load(c)?;
    let diagnostics = validate(&m.to_doc());
    if !diagnostics.is_empty() {
        return Err(Error::Invalid(diagnostics).into());
    }
    let a = m.alphabet();
    let summary = json!({
        "states": m.num_states(),
        "inputs": a.inputs().len(),
        "outputs": a.outputs().len(),
        "observable": a.observable().len(),
        "edges": m.edges().len(),
        "initial": m.set_names(m.initial()),
        "secret": m.set_names(m.secret()),
    });
    let text = match c.format {
        Format::Json => json_text(&summary),
        _ => format!(
            "ok: {} states, {} inputs, {} outputs ({} observable), {} edges, initial {}, secret {}\n",
            m.num_states(),
            a.inputs().len(),
            a.outputs().len(),
            a.observable().len(),
            m.edges().len(),
            m.set_label(m.initial()),
            m.set_label(m.secret()),
        ),
    };
    Ok((text, true))
}

fn cmd_observer(c: &Common) -> Outcome {
    let m = load(c)?;
    let secret = (!m.secret().is_empty()).then(|| m.secret().clone());
    let text = match c.property {
        Property::Rcso => {
            let obs = build_rcso_observer(&m);
            match c.format {
                Format::Dot => observer_to_dot(&obs, secret.as_ref()),
                Format::Json => json_text(&serde_json::to_value(obs.to_doc()).expect("docs serialize")),
                Format::Text => {
                    let mut out = format!("{} estimates, initial {}\n", obs.num_states(), obs.estimate_label(obs.initial()));
                    for (&(s, l), &t) in obs.transitions() {
                        out.push_str(&format!(
                            "{} -{}-> {}\n",
                            obs.estimate_label(s),
                            obs.label_name(l),
                            obs.estimate_label(t)
                        ));
                    }
                    out
                }
            }
        }
        Property::Cso => {
            let det = determinize(&build_passive_nfa(&m), &m.alphabet().observable());
            match c.format {
                Format::Dot => nfa_to_dot(&det.dfa),
                Format::Json => nfa_to_json(&det.dfa),
                Format::Text => {
                    let dfa = &det.dfa;
                    let names = dfa.state_names();
                    let mut out = format!("{} estimates, initial {}\n", dfa.num_states(), names[det.initial]);
                    for &(s, e, t) in dfa.transitions() {
                        out.push_str(&format!("{} -{}-> {}\n", names[s], dfa.events()[e], names[t]));
                    }
                    out
                }
            }
        }
        _ => return Err(Failure("observer supports --property rcso or cso".into())),
    };
    Ok((text, true))
}

fn specs(c: &Common) -> Result<(LanguageSpec, LanguageSpec), Failure> {
    match (&c.secret_spec, &c.nonsecret_spec) {
        (Some(s), Some(ns)) => Ok((load_language_spec(s)?, load_language_spec(ns)?)),
        _ => Err(Failure("--secret-spec and --nonsecret-spec are required".into())),
    }
}

fn query(c: &Common, m: &OpenDes) -> Result<RisoQuery, Failure> {
    match (&c.secret_initial, &c.nonsecret_initial) {
        (Some(s), Some(ns)) => Ok(RisoQuery::new(m, states(m, s)?, states(m, ns)?)?),
        _ => Err(Failure("--secret-initial and --nonsecret-initial are required".into())),
    }
}


fn verdict(c: &Common, m: &OpenDes) -> Result<Verdict, Failure> {
    let k = c.bound as usize;
    let oracle = c.method == Method::Oracle;
    if (c.pooled_oracle || c.per_initial) && !(oracle && c.property == Property::Rcso) {
        return Err(Failure("--pooled-oracle and --per-initial apply to --property rcso --method oracle".into()));
    }
    let v = match c.property {
        Property::Rcso => {
            let (s, ns) = (m.secret(), m.nonsecret());
            if m.secret().len() >= m.num_states() {
                return Err(Error::SecretNotStrict.into());
            }
            if !oracle {
                verify_rcso_with(m, s, &ns)?
            } else if c.per_initial {
                oracle_verify_rcso_per_initial(m, s, k, Strategy::Parallel)?
            } else if c.pooled_oracle {
                oracle_verify_rcso_pooled(m, s, k, Strategy::Parallel)?
            } else {
                oracle_verify_rcso_with(m, s, &ns, k, Strategy::Parallel)?
            }
        }
        Property::Cso if oracle => return Err(Failure("no oracle for --property cso".into())),
        Property::Cso => verify_cso_passive(m, m.secret())?,
        Property::Rlbo => {
            let (os, ons) = specs(c)?;
            if oracle {
                oracle_verify_rlbo(m, &os, &ons, k, Strategy::Parallel)?
            } else {
                verify_rlbo(&RlboProblem {
                    model: m.clone(),
                    secret: os,
                    nonsecret: ons,
                })?
            }
        }
        Property::Riso => {
            let q = query(c, m)?;
            if oracle {
                oracle_verify_riso(m, &q, k, Strategy::Parallel)?
            } else {
                verify_riso(&RisoProblem {
                    model: m.clone(),
                    query: q,
                })?
            }
        }
    };
    Ok(v)
}

fn names<'a>(all: &'a [String], idx: &[usize]) -> String {
    let v: Vec<&'a str> = idx.iter().map(|&i| all[i].as_str()).collect();
    if v.is_empty() {
        "(empty)".into()
    } else {
        v.join(" ")
    }
}

fn cmd_verify(c: &Common) -> Outcome {
    let m = load(c)?;
    let v = verdict(c, &m)?;
    let text = match c.format {
        Format::Json => json_text(&v.report(&m)),
        Format::Dot => return Err(Failure("verify supports --format text or json".into())),
        Format::Text => {
            let color = color_enabled(c);
            let a = m.alphabet();
            let mut out = format!("property: {}\n", v.property);
            match v.bound {
                Some(k) => out.push_str(&format!(
                    "method: {} (bounded: certified for input words of length <= {k} only)\n",
                    v.method.name()
                )),
                None => out.push_str(&format!("method: {} (exact)\n", v.method.name())),
            }
            let word = if v.opaque {
                paint(color, "32", "opaque")
            } else {
                paint(color, "31", "not opaque")
            };
            out.push_str(&format!("verdict: {word}\n"));
            if let Some(w) = &v.witness {
                out.push_str(&format!("witness inputs: {}\n", names(a.inputs(), &w.inputs)));
                out.push_str(&format!("witness observation: {}\n", names(a.outputs(), &w.observation)));
                if !w.labels.is_empty() {
                    let labels: Vec<String> = w.labels.iter().map(|l| l.display(a).to_string()).collect();
                    out.push_str(&format!("witness labels: {}\n", labels.join(" ")));
                }
                out.push_str(&format!("final estimate: {}\n", m.set_label(&w.estimate)));
            }
            out
        }
    };
    Ok((text, v.opaque))
}

fn cmd_attack(c: &Common) -> Outcome {
    if c.property != Property::Rcso {
        return Err(Failure("attack supports --property rcso".into()));
    }
    let m = load(c)?;
    let plan = synthesize_attack(&m, m.secret())?;
    let text = match (c.format, &plan) {
        (Format::Json, Some(p)) => json_text(&json!({ "attack": true, "witness": p.to_json(&m) })),
        (Format::Json, None) => json_text(&json!({ "attack": false })),
        (Format::Dot, _) => return Err(Failure("attack supports --format text or json".into())),
        (Format::Text, None) => "no attack: the system is opaque\n".into(),
        (Format::Text, Some(p)) => {
            let a = m.alphabet();
            let mut out = String::from("step  inject  observe  estimate\n");
            let mut prefix = Vec::new();
            for l in &p.labels {
                prefix.push(*l);
                let e = ropacity::semantics::estimate_observed(&m, &prefix)?;
                out.push_str(&format!(
                    "{:<5} {:<7} {:<8} {}\n",
                    prefix.len(),
                    a.input_name(l.input),
                    a.output_name(l.output),
                    m.set_label(&e)
                ));
            }
            out.push_str(&format!("secret exposed: {}\n", m.set_label(&p.final_estimate)));
            out
        }
    };
    Ok((text, plan.is_none()))
}

fn spec_json(spec: &LanguageSpec) -> Value {
    let text = match spec {
        LanguageSpec::Output(nfa) => nfa_to_json(nfa),
        LanguageSpec::Relation(t) => model_to_json(t),
    };
    serde_json::from_str(&text).expect("documents are JSON")
}

fn model_value(m: &OpenDes) -> Value {
    serde_json::from_str(&model_to_json(m)).expect("documents are JSON")
}

fn cmd_transform(c: &Common, to: Property) -> Outcome {
    let m = load(c)?;
    let out = match (c.property, to) {
        (Property::Rlbo, Property::Rcso) => {
            let (os, ons) = specs(c)?;
            let p = rlbo_to_rcso(&m, &os, &ons)?;
            json!({
                "property": "rcso",
                "model": model_value(&p.model),
                "secret": p.model.set_names(&p.secret),
                "nonsecret": p.model.set_names(&p.nonsecret),
            })
        }
        (Property::Rcso, Property::Rlbo) => {
            let p = rcso_to_rlbo(&m, m.secret(), &m.nonsecret())?;
            json!({
                "property": "rlbo",
                "model": model_value(&p.model),
                "secret_spec": spec_json(&p.secret),
                "nonsecret_spec": spec_json(&p.nonsecret),
            })
        }
        (Property::Riso, Property::Rlbo) => {
            let p = riso_to_rlbo(&m, &query(c, &m)?)?;
            json!({
                "property": "rlbo",
                "model": model_value(&p.model),
                "secret_spec": spec_json(&p.secret),
                "nonsecret_spec": spec_json(&p.nonsecret),
            })
        }
        (Property::Rlbo, Property::Riso) => {
            let (os, ons) = specs(c)?;
            let p = rlbo_to_riso(&m, &os, &ons)?;
            json!({
                "property": "riso",
                "model": model_value(&p.model),
                "secret_initial": p.model.set_names(&p.query.secret_initial),
                "nonsecret_initial": p.model.set_names(&p.query.nonsecret_initial),
            })
        }
        _ => {
            return Err(Failure(
                "supported reductions: rlbo->rcso, rcso->rlbo, riso->rlbo, rlbo->riso".into(),
            ))
        }
    };
    Ok((json_text(&out), true))
}
