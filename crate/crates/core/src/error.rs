use std::fmt;

use crate::units::UnitError;

/// Which part of the toolkit raised an error. Carried through to the CLI so
/// failures can be attributed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Module {
    Section,
    Joint,
    Tendon,
    Chain,
    Search,
    Reduce,
    Units,
}

impl Module {
    pub fn as_str(self) -> &'static str {
        match self {
            Module::Section => "section_mechanics",
            Module::Joint => "joint_model",
            Module::Tendon => "tendon",
            Module::Chain => "chain_sim",
            Module::Search => "design_search",
            Module::Reduce => "cli_io",
            Module::Units => "units",
        }
    }
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The bound violated by an applied moment in [`crate::section::SectionSpec::solve_wrinkle_boundary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentBound {
    /// Below the wrinkle-onset moment: the section is not wrinkling beyond
    /// its enforced band.
    BelowOnset,
    /// Above the maximum restoring moment: no equilibrium, the beam buckles.
    AboveMaximum,
}

impl fmt::Display for MomentBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentBound::BelowOnset => f.write_str("below wrinkle onset"),
            MomentBound::AboveMaximum => f.write_str("above maximum restoring moment"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{module}: invalid input: {reason}")]
    InvalidInput { module: Module, reason: String },

    #[error("{module}: {name} = {value} outside domain {domain}")]
    Domain {
        module: Module,
        name: &'static str,
        value: f64,
        domain: String,
    },

    #[error("section_mechanics: applied moment {moment} N*m is {bound} (limit {limit} N*m)")]
    MomentOutOfRange {
        bound: MomentBound,
        moment: f64,
        limit: f64,
    },

    #[error("chain_sim: unit {unit} angle {angle} rad exceeds its rotation limit {limit} rad")]
    LimitViolation { unit: usize, angle: f64, limit: f64 },

    #[error("tendon: degenerate route ({0})")]
    DegenerateRoute(String),

    #[error("cli_io: {got} samples, at least {need} required")]
    TooFewSamples { got: usize, need: usize },

    #[error("cli_io: pressure data do not span enough range ({0})")]
    InsufficientSpan(String),

    #[error("design_search: sequence report has no events")]
    EmptyReport,

    #[error("design_search: design space has {size} candidates, cap is {cap}")]
    SpaceTooLarge { size: u128, cap: u128 },

    #[error(transparent)]
    Unit(#[from] UnitError),
}

impl Error {
    pub fn module(&self) -> Module {
        match self {
            Error::InvalidInput { module, .. } | Error::Domain { module, .. } => *module,
            Error::MomentOutOfRange { .. } => Module::Section,
            Error::LimitViolation { .. } => Module::Chain,
            Error::DegenerateRoute(_) => Module::Tendon,
            Error::TooFewSamples { .. } | Error::InsufficientSpan(_) => Module::Reduce,
            Error::EmptyReport | Error::SpaceTooLarge { .. } => Module::Search,
            Error::Unit(_) => Module::Units,
        }
    }

    /// Short machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput { .. } => "invalid_input",
            Error::Domain { .. } => "domain",
            Error::MomentOutOfRange { .. } => "moment_out_of_range",
            Error::LimitViolation { .. } => "limit_violation",
            Error::DegenerateRoute(_) => "degenerate_route",
            Error::TooFewSamples { .. } => "too_few_samples",
            Error::InsufficientSpan(_) => "insufficient_span",
            Error::EmptyReport => "empty_report",
            Error::SpaceTooLarge { .. } => "space_too_large",
            Error::Unit(_) => "unit",
        }
    }

    pub(crate) fn invalid(module: Module, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            module,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(module: Module, name: &'static str, value: f64, domain: &str) -> Self {
        Error::Domain {
            module,
            name,
            value,
            domain: domain.to_owned(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
