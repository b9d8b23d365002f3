//! Exact verification of q-series identities of Rogers–Ramanujan type.
//!
//! Both sides of every identity are expanded independently as truncated
//! Puiseux series with exact integer coefficients and compared term by term.
//! The dilogarithm identities that govern the asymptotics of these series are
//! checked numerically in [`dilog`].

pub mod bosonic;
pub mod coefficient;
pub mod dilog;
pub mod error;
pub mod eta;
pub mod fermionic;
pub mod hall_littlewood;
pub mod hl_form;
pub mod kostka;
pub mod milne;
pub mod partition;
pub mod qprime_sums;
pub mod qseries;
pub mod quadratic_form;
pub mod registry;
pub mod report;
pub mod series;

pub use coefficient::Coefficient;
pub use error::{Error, Result};
pub use eta::{eta_quotient, EtaQuotient};
pub use partition::{AlphabetSpec, Partition};
pub use registry::{list_identities, verify, verify_with, IdentityInstance, VerifyOptions};
pub use report::{Kind, Status, VerificationReport};
pub use series::{exponent, int_exponent, ExactSeries, Exponent, Mismatch, Order};

use num_bigint::BigInt;

/// Series with arbitrary-precision coefficients; the default everywhere.
pub type Series = ExactSeries<BigInt>;
/// Series with `i64` coefficients; panics on overflow.
pub type Series64 = ExactSeries<i64>;
/// Series with `i128` coefficients; panics on overflow.
pub type Series128 = ExactSeries<i128>;
/// Fixed-point system over `f64`.
pub type DilogSystem64 = dilog::DilogSystem<f64>;
/// Dilogarithm identity check over `f64`.
pub type DilogCheck64 = dilog::DilogCheck<f64>;
