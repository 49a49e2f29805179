//! JSON file formats: `.odes` models and NFA language specifications.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::automata::Nfa;
use crate::error::{Error, Result};
use crate::model::OpenDes;

/// Model file contents, before validation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    pub states: Vec<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub observable: Vec<String>,
    pub initial: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub marked: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub secret: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonsecret: Option<Vec<String>>,
    pub edges: Vec<[String; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_output: Option<String>,
}

/// NFA file contents (also used for output-language specifications).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NfaDoc {
    pub states: Vec<String>,
    pub events: Vec<String>,
    pub initial: Vec<String>,
    #[serde(default)]
    pub marked: Vec<String>,
    pub transitions: Vec<[String; 3]>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_error(path: &Path, e: serde_json::Error) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses and validates a model from JSON text. `origin` is only used in
/// error messages.
pub fn parse_model(text: &str, origin: &Path) -> Result<OpenDes> {
    let doc: ModelDoc = serde_json::from_str(text).map_err(|e| parse_error(origin, e))?;
    OpenDes::from_doc(&doc)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<OpenDes> {
    let path = path.as_ref();
    parse_model(&read(path)?, path)
}

pub fn model_to_json(model: &OpenDes) -> String {
    let mut text = render_compact_rows(&model.to_doc(), "edges");
    text.push('\n');
    text
}

pub fn save_model(model: &OpenDes, path: impl AsRef<Path>) -> Result<()> {
    write(path.as_ref(), &model_to_json(model))
}

pub fn parse_nfa(text: &str, origin: &Path) -> Result<Nfa> {
    let doc: NfaDoc = serde_json::from_str(text).map_err(|e| parse_error(origin, e))?;
    Nfa::from_doc(&doc)
}

pub fn load_nfa(path: impl AsRef<Path>) -> Result<Nfa> {
    let path = path.as_ref();
    parse_nfa(&read(path)?, path)
}

pub fn nfa_to_json(nfa: &Nfa) -> String {
    let mut text = render_compact_rows(&nfa.to_doc(), "transitions");
    text.push('\n');
    text
}

pub fn save_nfa(nfa: &Nfa, path: impl AsRef<Path>) -> Result<()> {
    write(path.as_ref(), &nfa_to_json(nfa))
}

/// A language specification file is either an NFA over outputs or a marked
/// transducer in the model format; the two are told apart by their keys.
pub fn load_language_spec(path: impl AsRef<Path>) -> Result<crate::transforms::LanguageSpec> {
    use crate::transforms::LanguageSpec;
    let path = path.as_ref();
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| parse_error(path, e))?;
    if value.get("edges").is_some() {
        Ok(LanguageSpec::Relation(parse_model(&text, path)?))
    } else {
        Ok(LanguageSpec::Output(parse_nfa(&text, path)?))
    }
}

/// Pretty JSON where each row of the `rows` array stays on one line.
fn render_compact_rows<T: Serialize>(doc: &T, rows: &str) -> String {
    let value = serde_json::to_value(doc).expect("documents serialize");
    let map = value.as_object().expect("documents are objects");
    let mut out = String::from("{\n");
    let n = map.len();
    for (i, (key, v)) in map.iter().enumerate() {
        out.push_str("  ");
        out.push_str(&serde_json::to_string(key).unwrap());
        out.push_str(": ");
        match v {
            serde_json::Value::Array(items) if key == rows && !items.is_empty() => {
                out.push_str("[\n");
                for (j, item) in items.iter().enumerate() {
                    out.push_str("    ");
                    out.push_str(&one_line(item));
                    if j + 1 < items.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                out.push_str("  ]");
            }
            _ => out.push_str(&one_line(v)),
        }
        if i + 1 < n {
            out.push(',');
        }
        out.push('\n');
    }
    out.push('}');
    out
}

fn one_line(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Array(items) => format!(
            "[{}]",
            items.iter().map(one_line).collect::<Vec<_>>().join(", ")
        ),
        other => serde_json::to_string(other).unwrap(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled::{fig1, FIG1_ODES};

    #[test]
    fn bundled_fig1_loads() {
        let m = parse_model(FIG1_ODES, Path::new("fig1.odes")).unwrap();
        assert_eq!(m.num_states(), 4);
        assert_eq!(m.edges().len(), 16);
        assert_eq!(m.set_names(m.initial()), ["0"]);
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.odes");
        save_model(&fig1(), &path).unwrap();
        assert_eq!(load_model(&path).unwrap(), fig1());
    }

    #[test]
    fn duplicate_state_is_named() {
        let text = FIG1_ODES.replace(r#"["0", "1", "2", "3"]"#, r#"["0", "1", "1", "2", "3"]"#);
        let err = parse_model(&text, Path::new("dup.odes")).unwrap_err();
        assert!(err.to_string().contains("duplicate state \"1\""), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected_with_location() {
        let text = FIG1_ODES.replacen('{', "{\n  \"colour\": 1,", 1);
        match parse_model(&text, Path::new("x.odes")) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("colour"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_file_is_an_io_error() {
        assert!(matches!(
            load_model("/nonexistent/model.odes"),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn language_spec_kind_is_detected() {
        use crate::transforms::LanguageSpec;
        let dir = tempfile::tempdir().unwrap();
        let nfa_path = dir.path().join("spec.json");
        let nfa = Nfa::from_doc(&NfaDoc {
            states: vec!["p".into()],
            events: vec!["d2".into()],
            initial: vec!["p".into()],
            marked: vec!["p".into()],
            transitions: vec![["p".into(), "d2".into(), "p".into()]],
        })
        .unwrap();
        save_nfa(&nfa, &nfa_path).unwrap();
        assert!(matches!(
            load_language_spec(&nfa_path).unwrap(),
            LanguageSpec::Output(n) if n == nfa
        ));
        let model_path = dir.path().join("spec.odes");
        save_model(&fig1(), &model_path).unwrap();
        assert!(matches!(
            load_language_spec(&model_path).unwrap(),
            LanguageSpec::Relation(_)
        ));
    }
}
