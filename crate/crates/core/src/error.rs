use std::fmt;

/// A single failed law or structural check, naming the offending data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub law: String,
    pub witness: String,
}

impl Violation {
    pub fn new(law: impl Into<String>, witness: impl Into<String>) -> Self {
        Self {
            law: law.into(),
            witness: witness.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.law, self.witness)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("invalid input: {}", join(.0))]
    Invalid(Vec<Violation>),

    #[error("resource cap `{cap}` exceeded (limit {limit})")]
    CapExceeded { cap: &'static str, limit: u64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Two independent procedures disagreed. Always an implementation bug.
    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl Error {
    pub fn invalid(law: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Invalid(vec![Violation::new(law, witness)])
    }

    pub fn shape(msg: impl Into<String>) -> Self {
        Error::ShapeMismatch(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub const DEFAULT_MAX_CANDIDATES: u64 = 10_000_000;

/// Enumeration caps shared by every search in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Upper bound on candidate (partial) assignments examined by one search.
    pub max_candidates: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_candidates: DEFAULT_MAX_CANDIDATES,
        }
    }
}

impl Limits {
    pub fn with_max_candidates(max_candidates: u64) -> Self {
        Self { max_candidates }
    }

    pub fn counter(&self) -> Counter {
        Counter {
            seen: 0,
            limit: self.max_candidates,
        }
    }
}

/// Counts candidates visited by a single search and trips the cap.
#[derive(Debug)]
pub struct Counter {
    seen: u64,
    limit: u64,
}

impl Counter {
    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.seen += 1;
        if self.seen > self.limit {
            return Err(Error::CapExceeded {
                cap: "max_candidates",
                limit: self.limit,
            });
        }
        Ok(())
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }
}
