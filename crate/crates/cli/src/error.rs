use serde_json::json;

/// Failure of a command, mapped to an exit code and a JSON diagnostic.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: unreadable files, malformed words, unsupported options.
    Usage(String),
    Engine(kmdual::Error),
}

impl From<kmdual::Error> for CliError {
    fn from(e: kmdual::Error) -> Self {
        CliError::Engine(e)
    }
}

impl CliError {
    /// 1 for a failed check, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(kmdual::Error::Invariant(_) | kmdual::Error::WeightLock(_)) => 1,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        use kmdual::Error::*;
        match self {
            CliError::Usage(_) => "usage",
            CliError::Engine(e) => match e {
                InvalidCartanMatrix(_) => "invalid_cartan_matrix",
                InvalidRealization(_) => "invalid_realization",
                NotFiniteType(_) => "not_finite_type",
                GeneratorOutOfRange { .. } => "generator_out_of_range",
                DivisionFailure(_) => "division_failure",
                InvalidBimodule(_) => "invalid_bimodule",
                SideMismatch => "side_mismatch",
                DegreeBoundExceeded { .. } => "degree_bound_exceeded",
                NotDecomposable(_) => "not_decomposable",
                LengthBoundExceeded { .. } => "length_bound_exceeded",
                WeightLock(_) => "weight_lock",
                Invariant(_) => "invariant",
                NotReduced(_) => "not_reduced",
                NotMinimal(_) => "not_minimal",
                Cache(_) => "cache",
                Parse(_) => "parse",
            },
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Engine(e) => e.to_string(),
        }
    }

    pub fn diagnostic(&self) -> String {
        json!({ "error": { "kind": self.kind(), "message": self.message() } }).to_string()
    }
}
