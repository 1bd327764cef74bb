use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("duplicate service id `{0}`")]
    DuplicateService(String),

    #[error("{collection}[{index}].{field}: {message}")]
    Record {
        collection: &'static str,
        index: usize,
        field: String,
        message: String,
    },

    #[error("oracle refuses instance with {candidates} candidates and {chunks} chunks (limit 12 / 10)")]
    OracleLimit { candidates: usize, chunks: usize },

    #[error("unknown algorithm `{0}` (valid: greedy, knapsack, heuristic, priority, ga, oracle)")]
    UnknownAlgorithm(String),

    #[error("no query with id `{0}`")]
    UnknownQuery(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
