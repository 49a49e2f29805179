//! Models shipped with the crate.

use std::path::Path;

use crate::format::{parse_model, ModelDoc};
use crate::model::OpenDes;

/// Four-state transducer with inputs `x1`, `x2`, outputs `d1`, `d2`, `a`
/// (observable) and `b` (unobservable), single initial state `0` and
/// secret state `3`.
pub const FIG1_ODES: &str = include_str!("../models/fig1.odes");

/// [`FIG1_ODES`] plus the silent-output edge `(3, x2, ~, 3)`.
pub const FIG1_SILENT_ODES: &str = include_str!("../models/fig1_silent.odes");

pub fn fig1() -> OpenDes {
    parse_model(FIG1_ODES, Path::new("fig1.odes")).expect("bundled model is valid")
}

pub fn fig1_silent() -> OpenDes {
    parse_model(FIG1_SILENT_ODES, Path::new("fig1_silent.odes")).expect("bundled model is valid")
}

pub fn fig1_doc() -> ModelDoc {
    serde_json::from_str(FIG1_ODES).expect("bundled model parses")
}
