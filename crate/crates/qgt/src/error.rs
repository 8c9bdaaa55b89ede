use thiserror::Error;

/// Library-wide error type. CLI exit codes map parse failures to 2 and
/// mathematical failures to 3.
#[derive(Debug, Error)]
pub enum QgtError {
    #[error("root degree {given} cannot represent exponent {exponent}; required root degree {required}")]
    RootDegree {
        given: u32,
        required: u32,
        exponent: String,
    },

    #[error("generic block entry `{0}` requires numeric mode")]
    GenericEntryInExactMode(String),

    #[error("division by zero scalar")]
    DivisionByZero,

    #[error("denominator evaluates below tolerance at sample {sample}: |{value:e}|")]
    Pole { sample: usize, value: f64 },

    #[error("evaluation point must be nonzero and not a root of unity")]
    BadEvaluationPoint,

    #[error("relation {0} is not in the repertoire for height {1}")]
    RelationOutsideRepertoire(String, usize),

    #[error("position {0} does not appear in the relation set")]
    VertexNotInSet(String),

    #[error("tableau is not in the shift lattice of the seed: {0}")]
    NotInLattice(String),

    #[error("seed tableau violates its relation set: {0}")]
    SeedViolatesRelations(String),

    #[error("relation set is not admissible: {0}")]
    NotAdmissible(String),

    #[error("degenerate module: [l_{{{k},{i}}} - l_{{{k},{j}}}]_q = 0 on tableau {tableau}")]
    DegenerateModule {
        k: usize,
        i: usize,
        j: usize,
        tableau: String,
    },

    #[error("numeric mode required: {0}")]
    NumericModeRequired(String),

    #[error("weight is not dominant integral: {0}")]
    NonDominantWeight(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, QgtError>;
