//! Batch command line: declarative input documents in, one deterministic
//! report document out.
//!
//! Exit codes: `0` success (and mathematically-true check results), `1` a
//! check returned false with a witness, `2` malformed input or an exceeded
//! cap. Reports are byte-identical given identical inputs and seed; timing
//! goes to stderr only.

pub mod doc;
mod inputs;
mod report;
mod run;

pub use doc::{parse_document, render_document, DocError, Value};
pub use inputs::{
    action_to_value, builtin_action, builtin_monoid, load_action, load_monoid, load_probes,
    load_topology, load_universe_spec, load_window_map, monoid_to_value, resolve_input,
    universe_to_value, AtomSpec, NamedInput, UniverseSpec,
};
pub use report::{inputs_digest, render_report, Report};
pub use run::{execute, run, CommandSpec, Job, Outcome};

use thiserror::Error;

use crate::hf::DEFAULT_NODE_CAP;
use crate::powder::DEFAULT_SEARCH_CAP;

pub const FORMAT_VERSION: i64 = 1;

/// Resource ceilings carried by every job and echoed in its report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub node_cap: u64,
    pub search_cap: u64,
    pub window_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            node_cap: DEFAULT_NODE_CAP,
            search_cap: DEFAULT_SEARCH_CAP,
            window_cap: 8,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Doc(#[from] DocError),
    #[error("input `{name}`: {message}")]
    Schema { name: String, message: String },
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("unknown builtin {kind} `{name}`")]
    UnknownBuiltin { kind: &'static str, name: String },
    #[error("{0}")]
    Monoid(#[from] crate::monoid::MonoidError),
    #[error("{0}")]
    Action(#[from] crate::action::ActionError),
    #[error("{0}")]
    Hf(#[from] crate::hf::HfError),
    #[error("{0}")]
    Logic(#[from] crate::logic::LogicError),
    #[error("{0}")]
    Transfer(#[from] crate::logic::TransferError),
    #[error("{0}")]
    Sym(#[from] crate::symcore::SymError),
    #[error("{0}")]
    Powder(#[from] crate::powder::PowderError),
    #[error("{0}")]
    Completion(#[from] crate::completion::CompletionError),
    #[error("{0}")]
    Formula(#[from] crate::formula_text::FormulaParseError),
    #[error("window {w} exceeds the window cap {cap}")]
    WindowCap { w: usize, cap: usize },
    #[error("missing input `{0}`")]
    MissingInput(&'static str),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub(crate) fn schema(name: &str, message: impl Into<String>) -> Self {
        CliError::Schema {
            name: name.to_string(),
            message: message.into(),
        }
    }
}
