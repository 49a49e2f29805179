//! Opacity analysis for open discrete-event systems: finite-state
//! transducers that take inputs from a possibly hostile environment and
//! emit partly observable outputs.
//!
//! The main entry points are [`verify::verify_rcso`] (can an intruder who
//! injects inputs ever pin the state inside a secret set?),
//! [`verify::verify_cso_passive`] for an intruder who only listens, the
//! reductions in [`transforms`], and [`attack::synthesize_attack`].

pub mod attack;
pub mod automata;
pub mod bundled;
pub mod dot;
pub mod error;
pub mod exec;
pub mod format;
pub mod generate;
pub mod model;
pub mod observer;
pub mod semantics;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use model::{Alphabet, Edge, OpenDes, StateSet};
