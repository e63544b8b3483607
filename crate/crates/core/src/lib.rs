//! Dirichlet series over integers whose base-`b` digits lie in a fixed set.
//!
//! For a base `b` and digit set `A`, the series `K(s) = Σ' n^{-s}` runs over
//! the positive integers written only with digits from `A`. It converges for
//! `Re s > s₀ = log_b |A|` and continues meromorphically to the whole plane,
//! with simple poles confined to the lattice `s₀ - m + 2πik/log b`.
//!
//! The crate provides
//!
//! * [`digitsys`]: digit systems, enumeration of admissible integers and block sums;
//! * [`coeffs`]: the moment coefficients `u_m(s)` and their entire versions `v_m(s)`;
//! * [`continuation`]: evaluation of `K(s)` and `H(s)` anywhere off the lattice;
//! * [`residues`]: residues at the lattice points and generalized Bernoulli numbers;
//! * [`genfunc`]: the digit measure's moment generating function and relatives.
//!
//! ```
//! use ddseries::{DigitSystem, Evaluator};
//! use num_complex::Complex64;
//!
//! let zeta = DigitSystem::parse(10, "0-9").unwrap();
//! let v = Evaluator::new(&zeta).geo(Complex64::new(0.0, 0.0), 1e-12).unwrap();
//! assert!((v.value.re + 0.5).abs() < 1e-10);
//! ```

pub mod coeffs;
pub mod continuation;
pub mod digitsys;
pub mod error;
pub mod genfunc;
pub mod residues;
pub mod settings;
mod util;

pub use coeffs::{CoeffSequence, TruncatedMoment};
pub use continuation::{EvalResult, Evaluator, Method, MethodChoice, PoleInfo};
pub use digitsys::{DigitSystem, LatticePoint, DEFAULT_ENUM_CAP};
pub use error::{Error, Result};
pub use genfunc::TaylorCoeffs;
pub use residues::{RationalSeq, ResidueLimit, ResidueRow};
pub use settings::Settings;
pub use util::parse_complex;
