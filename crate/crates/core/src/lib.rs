//! Exact decisions of algebraic regularity for finitely supported probability
//! measures under convolution on torsion groups.
//!
//! A measure `μ` is *regular* when some measure `ν` satisfies
//! `μ ⋆ ν ⋆ μ = μ`. The crate decides this exactly over rational weights,
//! returns certificates that are re-checked by convolution, and builds
//! Moore-Penrose inverses `ν ⋆ μ ⋆ ν`.
//!
//! Module map:
//!
//! * [`group`]: group arithmetic over Cayley tables and permutation groups;
//! * [`grigorchuk`]: the Grigorchuk group and its word problem;
//! * [`measure`]: measures, convolution, translation, support closure;
//! * [`support`]: support tables and left/right convolution matrices;
//! * [`linalg`]: exact matrices and the stochastic feasibility solver;
//! * [`engine`]: regularity verdicts, certificates and the uniform-measure probe;
//! * [`oracle`]: brute-force generalized-inverse search used to cross-check.
//!
//! ```
//! use convreg::engine::{decide_regular, EngineOptions, Status};
//! use convreg::group::builtin;
//! use convreg::measure::Measure;
//!
//! let z2 = builtin::z2();
//! let mu = Measure::parse(&z2, "0 3/4\n1 1/4\n").unwrap();
//! let verdict = decide_regular(&z2, &mu, &EngineOptions::default()).unwrap();
//! assert_eq!(verdict.status, Status::NotRegular);
//! ```

pub mod engine;
pub mod error;
pub mod grigorchuk;
pub mod group;
pub mod linalg;
pub mod measure;
pub mod oracle;
pub mod rational;
pub mod support;

pub use error::{Error, Result};
