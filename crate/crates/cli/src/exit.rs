use qudit_magic::Error;

pub const BUDGET: u8 = 2;
pub const USAGE: u8 = 64;
pub const DATA: u8 = 65;
pub const INTERNAL: u8 = 70;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: USAGE, message: message.into() }
    }

    pub fn data(message: impl Into<String>) -> Self {
        CliError { code: DATA, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError { code: INTERNAL, message: message.into() }
    }

    /// Errors raised while reading an input file are data errors whatever their kind,
    /// except for budget overruns.
    pub fn from_input(path: &std::path::Path, e: Error) -> Self {
        let code = if exit_code(&e) == BUDGET { BUDGET } else { DATA };
        CliError { code, message: format!("{}: {e}", path.display()) }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded(_) | Error::DenseLimit { .. } => BUDGET,
        Error::InvalidModulus(_)
        | Error::InvalidPrime(_)
        | Error::OutOfRange(_)
        | Error::InvalidRegion(_)
        | Error::OverlappingRegions
        | Error::RegionNotContained(_)
        | Error::InvalidPath(_)
        | Error::GeometryTooSmall(_) => USAGE,
        Error::Internal(_) => INTERNAL,
        _ => DATA,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError { code: exit_code(&e), message: e.to_string() }
    }
}
