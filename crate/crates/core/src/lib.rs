//! Binary stiffened-gas mixture closure and regularized 1D shock-tube schemes.
//!
//! ```
//! use sgmix::cases::{build_initial, make_case, CaseId};
//! use sgmix::scheme::run;
//!
//! let spec = make_case(CaseId::B);
//! let s0 = build_initial(&spec, &spec.mesh(100)?)?;
//! let result = run(&s0, &spec.scheme_config(), 0.1 * spec.t_fin, 10)?;
//! assert!(result.extremes.admissible());
//! # Ok::<(), sgmix::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cases;
pub mod cli;
pub mod eos;
pub mod error;
pub mod grid;
pub mod output;
pub mod scheme;
pub mod study;

pub use error::{Error, Result};
