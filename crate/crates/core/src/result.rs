//! Answers of cardinality computations at finite precision.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::{SmithDecomposition, SmithForm};
use crate::padic::PadicContext;

/// The cardinality of a module as a power of `p`.
///
/// `Finite(v)` asserts cardinality exactly `p^v`. `Infinite` is only
/// produced together with a constructive witness; anything that cannot be
/// decided at the working precision is `Undetermined`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CardinalityResult {
    Finite { exponent: u64 },
    Infinite { witness: String },
    Undetermined { reason: String },
}

impl CardinalityResult {
    pub fn finite(exponent: u64) -> Self {
        CardinalityResult::Finite { exponent }
    }

    pub fn infinite(witness: impl Into<String>) -> Self {
        CardinalityResult::Infinite {
            witness: witness.into(),
        }
    }

    pub fn undetermined(reason: impl Into<String>) -> Self {
        CardinalityResult::Undetermined {
            reason: reason.into(),
        }
    }

    pub fn exponent(&self) -> Option<u64> {
        match self {
            CardinalityResult::Finite { exponent } => Some(*exponent),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CardinalityResult::Finite { .. })
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, CardinalityResult::Infinite { .. })
    }

    /// Short rendering used in tables: `p^v`, `inf` or `?`.
    pub fn cell(&self, p: u64) -> String {
        match self {
            CardinalityResult::Finite { exponent } => format!("{p}^{exponent}"),
            CardinalityResult::Infinite { .. } => "inf".to_string(),
            CardinalityResult::Undetermined { .. } => "?".to_string(),
        }
    }

    pub fn describe(&self, p: u64) -> String {
        match self {
            CardinalityResult::Finite { exponent } => format!("{p}^{exponent}"),
            CardinalityResult::Infinite { witness } => format!("infinite (witness: {witness})"),
            CardinalityResult::Undetermined { reason } => format!("undetermined ({reason})"),
        }
    }
}

impl fmt::Display for CardinalityResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CardinalityResult::Finite { exponent } => write!(f, "Finite({exponent})"),
            CardinalityResult::Infinite { witness } => write!(f, "Infinite ({witness})"),
            CardinalityResult::Undetermined { reason } => write!(f, "Undetermined ({reason})"),
        }
    }
}

/// `h0`, `h1` and `chi = #H_0 / #H_1` as powers of `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCharResult {
    pub h0: CardinalityResult,
    pub h1: CardinalityResult,
    /// `None` unless both homology groups are finite.
    pub chi_exponent: Option<i64>,
}

impl EulerCharResult {
    pub fn new(h0: CardinalityResult, h1: CardinalityResult) -> Self {
        let chi_exponent = match (h0.exponent(), h1.exponent()) {
            (Some(a), Some(b)) => Some(a as i64 - b as i64),
            _ => None,
        };
        EulerCharResult {
            h0,
            h1,
            chi_exponent,
        }
    }
}

/// Reads off the cokernel of a Smith decomposition computed at the working
/// precision `N` of `ctx`: finite when every divisor and the total sit below
/// `N - guard`, infinite on a divisor that vanishes mod `p^N` (the caller
/// supplies the witness), undetermined in between.
pub(crate) fn classify_cokernel(
    form: &SmithForm,
    ctx: &PadicContext,
    witness: impl FnOnce() -> Option<String>,
) -> CardinalityResult {
    let certified = ctx.certified();
    if form.saturated() > 0 {
        return match witness() {
            Some(w) => CardinalityResult::infinite(w),
            None => CardinalityResult::undetermined(format!(
                "divisor vanishes mod {}^{} but no unit-coordinate witness was found",
                ctx.p(),
                ctx.precision()
            )),
        };
    }
    if form.max_unsaturated().is_some_and(|v| v >= certified) {
        return CardinalityResult::undetermined(format!(
            "elementary divisor of valuation >= {certified} is inside the guard band"
        ));
    }
    let total = form.cokernel_exponent();
    if total >= certified as u64 {
        return CardinalityResult::undetermined(format!(
            "exponent {total} is not below the certified precision {certified}"
        ));
    }
    CardinalityResult::finite(total)
}

pub(crate) fn format_vector(v: &[u64], ctx: &PadicContext) -> String {
    let parts: Vec<String> = v
        .iter()
        .map(|&x| ctx.ring().balanced(x).to_string())
        .collect();
    format!("[{}]", parts.join(", "))
}

pub(crate) fn left_witness_text(
    dec: &SmithDecomposition,
    matrix: &crate::linalg::Matrix,
    ctx: &PadicContext,
    what: &str,
) -> Option<String> {
    crate::linalg::cokernel_witness(dec, matrix, ctx.ring()).map(|y| {
        format!(
            "functional {} with a unit coordinate kills {what} mod {}^{}",
            format_vector(&y, ctx),
            ctx.p(),
            ctx.precision()
        )
    })
}

pub(crate) fn right_witness_text(
    dec: &SmithDecomposition,
    matrix: &crate::linalg::Matrix,
    ctx: &PadicContext,
    what: &str,
) -> Option<String> {
    crate::linalg::kernel_witness(dec, matrix, ctx.ring()).map(|x| {
        format!(
            "vector {} with a unit coordinate lies in the kernel of {what} mod {}^{}",
            format_vector(&x, ctx),
            ctx.p(),
            ctx.precision()
        )
    })
}
