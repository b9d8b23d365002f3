//! Verification reports and their JSON form.

use crate::series::{Exponent, Mismatch};
use num_bigint::BigInt;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;

/// Named parameters of an identity instance, as given by the user.
pub type Params = BTreeMap<String, serde_json::Value>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Theorem,
    Conjecture,
    /// Two expansions of the same series that must agree.
    Equivalence,
}

impl Kind {
    /// Theorems and equivalences must pass; conjectures are only reported.
    pub fn must_pass(self) -> bool {
        self != Kind::Conjecture
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// First disagreement, with coefficients as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MismatchReport {
    pub exponent_num: i64,
    pub exponent_den: i64,
    pub lhs_coeff: String,
    pub rhs_coeff: String,
}

impl MismatchReport {
    pub fn exponent(&self) -> Exponent {
        Exponent::new(self.exponent_num, self.exponent_den)
    }
}

impl From<Mismatch<BigInt>> for MismatchReport {
    fn from(m: Mismatch<BigInt>) -> Self {
        MismatchReport {
            exponent_num: *m.exponent.numer(),
            exponent_den: *m.exponent.denom(),
            lhs_coeff: m.lhs.to_string(),
            rhs_coeff: m.rhs.to_string(),
        }
    }
}

fn ratio_string<S: Serializer>(r: &Exponent, s: S) -> Result<S::Ok, S::Error> {
    if r.is_integer() {
        s.serialize_str(&r.numer().to_string())
    } else {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub kind: Kind,
    pub params: Params,
    /// Requested order, counted from `offset`.
    pub order: i64,
    /// Leading exponent both sides are normalized to (eta prefactors).
    #[serde(serialize_with = "ratio_string")]
    pub offset: Exponent,
    /// Absolute exponent up to which the two sides were actually compared.
    #[serde(serialize_with = "ratio_string")]
    pub compared_to: Exponent,
    pub status: Status,
    pub first_mismatch: Option<MismatchReport>,
    pub wall_time_ms: u64,
    pub convention_notes: Vec<String>,
    /// One-line verdict, e.g. "verified to order 30".
    pub summary: String,
    /// Error text when `status` is `error`.
    pub detail: Option<String>,
    /// True when the error signals a bug rather than bad input.
    pub internal_error: bool,
    /// Top-level summation routines used by each side.
    pub lhs_engines: Vec<String>,
    pub rhs_engines: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// True when this report should fail a run: theorem entries that do not
    /// pass, and conjectures too when `strict`.
    pub fn is_blocking(&self, strict: bool) -> bool {
        self.status != Status::Pass && (self.kind.must_pass() || strict || self.status == Status::Error)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Same report with the timing zeroed, for determinism checks.
    pub fn without_timing(&self) -> Self {
        VerificationReport {
            wall_time_ms: 0,
            ..self.clone()
        }
    }
}
