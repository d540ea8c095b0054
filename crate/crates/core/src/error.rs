use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("multiplication table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NonAssociative(usize, usize, usize),
    #[error("multiplication table has no two-sided identity")]
    NoIdentity,
    #[error("multiplication table is not a Latin square: {0}")]
    NotLatinSquare(String),
    #[error("generator {0} is not a bijection of 0..{1}")]
    GeneratorNotBijective(usize, usize),
    #[error("declared order {declared} does not match the computed order {actual}")]
    OrderMismatch { declared: usize, actual: usize },
    #[error("group order exceeds the configured cap of {0} elements")]
    OrderCapExceeded(usize),
    #[error("element set is not a normal subgroup")]
    NotNormal,
    #[error("element set is not a subgroup")]
    NotSubgroup,
    #[error("lattice member {0} is the whole group")]
    NotProper(usize),
    #[error("regular normal subgroups need a permutation representation")]
    RegRequiresPermGroup,
    #[error("primitive spectrum requested without module search bounds")]
    PmtvBoundsMissing,
    #[error("matrix assigned to generator {0} is not invertible")]
    NotInvertible(usize),
    #[error("module action is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("search space too large: {0}")]
    SearchTooLarge(String),
    #[error("point set is not closed")]
    NotClosed,
    #[error("preimage of target member {0} leaves the spectrum")]
    ContractionFails(usize),
    #[error("homomorphism is not surjective")]
    HomNotSurjective,
    #[error("unknown report format `{0}`")]
    UnknownFormat(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
