use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: f64 },

    #[error("entries sum to {sum}, which is not within {tol} of 1")]
    NotNormalizable { sum: f64, tol: f64 },

    #[error("vector norm {norm} is not within {tol} of 1")]
    NotUnit { norm: f64, tol: f64 },

    #[error("measurement basis is not orthonormal: {0}")]
    NotOrthonormal(String),

    #[error("duplicate outcome label {0:?}")]
    DuplicateLabel(String),

    #[error("isomorphism {0:?} is not a permutation of 0..4")]
    InvalidIsomorphism([usize; 4]),

    #[error(
        "max CHSH {max_abs} exceeds the Tsirelson bound while the marginal law holds; \
         no named class covers this configuration"
    )]
    AmbiguousClass { max_abs: f64 },

    #[error("invalid target probabilities: {0}")]
    InvalidTargets(String),

    #[error("experiment file {}", match .line { Some(l) => format!("line {l}, field `{field}`: {message}"), None => format!("field `{field}`: {message}") })]
    Parse {
        line: Option<usize>,
        field: String,
        message: String,
    },

    #[error("unknown model {0:?} (expected one of animal-acts, vessels, vessels-alt, vessels-separated)")]
    UnknownModel(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
}
