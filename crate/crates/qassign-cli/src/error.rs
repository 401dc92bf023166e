//! CLI error type; rendered as machine-readable JSON on stderr.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Io(std::io::Error),
    Json(serde_json::Error),
    Csv(csv::Error),
    Graph(qassign::graph::GraphError),
    Circuit(qassign::circuit::CircuitError),
    Metrics(qassign::metrics::MetricsError),
    Anneal(qassign::anneal::AnnealError),
    Stats(qassign::stats::StatsError),
    Readout(qassign::readout::ReadoutError),
    BudgetExceeded { assignments: usize, budget: usize },
    InsufficientData(String),
    BadArgument(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(e) => write!(f, "i/o: {e}"),
            CliError::Json(e) => write!(f, "json: {e}"),
            CliError::Csv(e) => write!(f, "csv: {e}"),
            CliError::Graph(e) => write!(f, "graph: {e}"),
            CliError::Circuit(e) => write!(f, "circuit: {e}"),
            CliError::Metrics(e) => write!(f, "metrics: {e}"),
            CliError::Anneal(e) => write!(f, "anneal: {e}"),
            CliError::Stats(e) => write!(f, "stats: {e}"),
            CliError::Readout(e) => write!(f, "readout: {e}"),
            CliError::BudgetExceeded { assignments, budget } => {
                write!(f, "sweep of {assignments} assignments exceeds the budget of {budget}")
            }
            CliError::InsufficientData(msg) => write!(f, "insufficient data: {msg}"),
            CliError::BadArgument(msg) => write!(f, "bad argument: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Json(_) => "json",
            CliError::Csv(_) => "csv",
            CliError::Graph(_) => "graph",
            CliError::Circuit(_) => "circuit",
            CliError::Metrics(_) => "metrics",
            CliError::Anneal(_) => "anneal",
            CliError::Stats(_) => "stats",
            CliError::Readout(_) => "readout",
            CliError::BudgetExceeded { .. } => "budget-exceeded",
            CliError::InsufficientData(_) => "insufficient-data",
            CliError::BadArgument(_) => "bad-argument",
        }
    }
}

macro_rules! from_err {
    ($variant:ident, $ty:ty) => {
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::$variant(e)
            }
        }
    };
}

from_err!(Io, std::io::Error);
from_err!(Json, serde_json::Error);
from_err!(Csv, csv::Error);
from_err!(Graph, qassign::graph::GraphError);
from_err!(Circuit, qassign::circuit::CircuitError);
from_err!(Metrics, qassign::metrics::MetricsError);
from_err!(Anneal, qassign::anneal::AnnealError);
from_err!(Stats, qassign::stats::StatsError);
from_err!(Readout, qassign::readout::ReadoutError);
