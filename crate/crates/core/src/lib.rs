//! Exact weighted limits, module (profunctor) algebra, Cauchy completion and closure
//! computations over finite categories, with checkable certificates.

pub mod cat;
pub mod cauchy;
pub mod cert;
pub mod cli;
pub mod closure;
pub mod doc;
pub mod error;
pub mod fixtures;
pub mod names;
pub mod promod;
pub mod setfun;
pub mod unionfind;
pub mod weighted;

pub use error::{Error, Limits, Result, Violation};
