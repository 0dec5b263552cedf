//! Modules over `Λ = Z_p[[X]][[T]]` with `Γ` acting through `1 + T`.
//!
//! A module is presented as `Λ/(relations)`. Twisting by a character of
//! `Γ`, specializing at a height-one prime of `Z_p[[X]]`, and taking
//! `Γ^{p^n}`-homology all act on that presentation.

mod altprod;
mod fiber;
mod oq;
mod scan;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oracle::OracleError;
use crate::padic::{PadicContext, PadicInt};
use crate::powseries::{PadicPoly, ParseError, PowSeriesError};
use crate::result::CardinalityResult;

pub use crate::bivar::BivarPoly;
pub use altprod::{alternating_product, AltProduct, ResolutionData};
pub use fiber::{
    coinvariants, coinvariants_oracle, euler_char, h1, h1_oracle, specialize, SpecializedModule,
};
pub use oq::OqRing;
pub use scan::{twist_scan, ScanCell, ScanReport, ScanRow};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("a presentation needs at least one relation")]
    NoRelations,
    #[error("relation {0} is zero at working precision")]
    ZeroRelation(usize),
    #[error("module file is for p = {file}, but the run uses p = {run}")]
    PrimeMismatch { file: u64, run: u64 },
    #[error("invalid module file: {0}")]
    Json(String),
    #[error("specialization at (p) is not supported")]
    PPrime,
    #[error("the prime polynomial must have positive degree")]
    UnitPrime,
    #[error("a scan needs at least one twist and one prime")]
    EmptyScan,
    #[error("resolution element {0} is zero at working precision")]
    ZeroElement(usize),
    #[error("resolution element {index} has non-finite quotient: {result}")]
    NonFiniteFactor {
        index: usize,
        result: CardinalityResult,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    PowSeries(#[from] PowSeriesError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// The character `θ` of `Γ` with `θ(γ^{-1}) = 1 + p*lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WildCharacter {
    pub lambda: PadicInt,
}

impl WildCharacter {
    pub fn new(lambda: PadicInt) -> Self {
        WildCharacter { lambda }
    }

    pub fn trivial(ctx: &PadicContext) -> Self {
        WildCharacter { lambda: ctx.zero() }
    }

    /// `θ(γ^{-1}) = 1 + p*lambda`.
    pub fn value_at_gamma_inverse(&self) -> PadicInt {
        let ctx = self.lambda.context();
        ctx.one() + ctx.int(ctx.p() as i64) * self.lambda
    }

    /// `θ(γ)`, the inverse of [`Self::value_at_gamma_inverse`].
    pub fn value_at_gamma(&self) -> PadicInt {
        self.value_at_gamma_inverse()
            .inv()
            .expect("1 + p*lambda is a unit")
    }

    /// The product character; `lambda` of the result is known modulo
    /// `p^{N-1}`, which fixes `p*lambda` modulo `p^N`.
    pub fn compose(&self, other: &WildCharacter) -> WildCharacter {
        let ctx = self.lambda.context();
        let c = self.value_at_gamma_inverse() * other.value_at_gamma_inverse() - ctx.one();
        WildCharacter {
            lambda: ctx.int_from_residue(ctx.ring().div_p_pow(c.residue(), 1)),
        }
    }
}

/// `Λ/(relations)` plus the twists applied so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicPresentation {
    relations: Vec<BivarPoly>,
    twist_log: Vec<WildCharacter>,
}

impl CyclicPresentation {
    pub fn new(relations: Vec<BivarPoly>) -> Result<Self, ModuleError> {
        if relations.is_empty() {
            return Err(ModuleError::NoRelations);
        }
        if let Some(i) = relations.iter().position(BivarPoly::is_zero) {
            return Err(ModuleError::ZeroRelation(i));
        }
        Ok(CyclicPresentation {
            relations,
            twist_log: Vec::new(),
        })
    }

    /// `Λ/(X - T)`.
    pub fn diagonal(ctx: &PadicContext) -> Self {
        Self::new(vec![BivarPoly::from_terms(ctx, &[(1, 1, 0), (-1, 0, 1)])])
            .expect("nonzero relation")
    }

    pub fn relations(&self) -> &[BivarPoly] {
        &self.relations
    }

    pub fn twist_log(&self) -> &[WildCharacter] {
        &self.twist_log
    }

    pub fn context(&self) -> &PadicContext {
        self.relations[0].context()
    }

    /// Parses the module file format
    /// `{"p":3,"relations":[[[1,1,0],[-1,0,1]]]}`, each triple being
    /// `[coefficient, X-degree, T-degree]`.
    pub fn from_json_str(ctx: &PadicContext, text: &str) -> Result<Self, ModuleError> {
        let file: ModuleFile =
            serde_json::from_str(text).map_err(|e| ModuleError::Json(e.to_string()))?;
        Self::from_file(ctx, &file)
    }

    pub fn from_file(ctx: &PadicContext, file: &ModuleFile) -> Result<Self, ModuleError> {
        if file.p != ctx.p() {
            return Err(ModuleError::PrimeMismatch {
                file: file.p,
                run: ctx.p(),
            });
        }
        let degree =
            |d: i64| u32::try_from(d).map_err(|_| ModuleError::Json(format!("invalid degree {d}")));
        let relations = file
            .relations
            .iter()
            .map(|r| {
                let terms = r
                    .iter()
                    .map(|t| Ok((t[0], degree(t[1])?, degree(t[2])?)))
                    .collect::<Result<Vec<_>, ModuleError>>()?;
                Ok(BivarPoly::from_terms(ctx, &terms))
            })
            .collect::<Result<Vec<_>, ModuleError>>()?;
        let mut out = Self::new(relations)?;
        out.twist_log = file
            .twist_log
            .iter()
            .map(|&l| WildCharacter::new(ctx.int(l)))
            .collect();
        Ok(out)
    }

    pub fn to_file(&self) -> ModuleFile {
        let ring = self.context().ring();
        ModuleFile {
            p: self.context().p(),
            relations: self
                .relations
                .iter()
                .map(|r| {
                    r.to_triples()
                        .into_iter()
                        .map(|(c, x, t)| [c, x as i64, t as i64])
                        .collect()
                })
                .collect(),
            twist_log: self
                .twist_log
                .iter()
                .map(|t| ring.balanced(t.lambda.residue()) as i64)
                .collect(),
        }
    }

    /// `M(θ)`: substitutes `T + 1 -> (1 + p*lambda)(T + 1)` in every
    /// relation.
    pub fn twist(&self, theta: &WildCharacter) -> Self {
        let c = theta.value_at_gamma_inverse();
        let shift = c - self.context().one();
        CyclicPresentation {
            relations: self
                .relations
                .iter()
                .map(|r| r.substitute_t(&c, &shift))
                .collect(),
            twist_log: {
                let mut log = self.twist_log.clone();
                log.push(*theta);
                log
            },
        }
    }
}

/// Serialized presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleFile {
    pub p: u64,
    pub relations: Vec<Vec<[i64; 3]>>,
    /// `lambda` of every twist applied, oldest first.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub twist_log: Vec<i64>,
}

/// `ω_n = (1 + T)^{p^n} - 1` as a polynomial in `T`.
pub fn omega_n(ctx: &PadicContext, n: u32) -> PadicPoly {
    let one_plus_t = PadicPoly::from_ints(ctx, &[1, 1]);
    &one_plus_t.pow(ctx.p().pow(n)) - &PadicPoly::one(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::powseries::{weierstrass_divide, DistinguishedPoly};

    fn ctx() -> PadicContext {
        PadicContext::new(3, 12, 4).unwrap()
    }

    #[test]
    fn omega_examples() {
        let c = ctx();
        assert_eq!(omega_n(&c, 0).display_in('T'), "T");
        assert_eq!(omega_n(&c, 1).display_in('T'), "T^3+3*T^2+3*T");
        for (n, m) in [(0, 1), (1, 2), (0, 2)] {
            let small = DistinguishedPoly::new(omega_n(&c, n)).unwrap();
            let (q, r) = weierstrass_divide(&omega_n(&c, m), &small);
            assert!(r.is_zero());
            assert!(q.is_distinguished());
        }
    }

    #[test]
    fn twist_examples() {
        let c = ctx();
        let m = CyclicPresentation::diagonal(&c);
        let t = m.twist(&WildCharacter::new(c.int(1)));
        // (X + 1) - 4(T + 1), the negative of 4(T + 1) - (X + 1)
        assert_eq!(t.relations()[0].to_string(), "X-4*T-3");
        assert_eq!(t.twist_log().len(), 1);
        assert_eq!(
            m.twist(&WildCharacter::trivial(&c)).relations(),
            m.relations()
        );
    }

    #[test]
    fn twists_compose() {
        let c = ctx();
        let m =
            CyclicPresentation::new(vec![BivarPoly::parse(&c, "X*T^2 - 3*T + X^2 - 7").unwrap()])
                .unwrap();
        for (l1, l2) in [(1, 2), (-5, 7), (0, 4), (100, -33)] {
            let (t1, t2) = (WildCharacter::new(c.int(l1)), WildCharacter::new(c.int(l2)));
            let twice = m.twist(&t1).twist(&t2);
            let once = m.twist(&t1.compose(&t2));
            assert_eq!(twice.relations(), once.relations());
            assert_eq!(
                t1.compose(&t2).value_at_gamma_inverse(),
                t1.value_at_gamma_inverse() * t2.value_at_gamma_inverse()
            );
        }
        let theta = WildCharacter::new(c.int(2));
        assert_eq!(
            theta.value_at_gamma() * theta.value_at_gamma_inverse(),
            c.one()
        );
    }

    #[test]
    fn module_file_round_trip() {
        let c = ctx();
        let m =
            CyclicPresentation::from_json_str(&c, r#"{"p":3,"relations":[[[1,1,0],[-1,0,1]]]}"#)
                .unwrap();
        assert_eq!(m, CyclicPresentation::diagonal(&c));
        let text = serde_json::to_string(&m.to_file()).unwrap();
        assert_eq!(text, r#"{"p":3,"relations":[[[1,1,0],[-1,0,1]]]}"#);
        let twisted = m.twist(&WildCharacter::new(c.int(1)));
        let back = CyclicPresentation::from_file(&c, &twisted.to_file()).unwrap();
        assert_eq!(back, twisted);
        assert!(matches!(
            CyclicPresentation::from_json_str(&c, r#"{"p":5,"relations":[[[1,1,0]]]}"#),
            Err(ModuleError::PrimeMismatch { file: 5, run: 3 })
        ));
        assert!(matches!(
            CyclicPresentation::from_json_str(&c, r#"{"p":3,"relations":[]}"#),
            Err(ModuleError::NoRelations)
        ));
        assert!(matches!(
            CyclicPresentation::from_json_str(&c, r#"{"p":3,"relations":[[[3,1,0],[-3,1,0]]]}"#),
            Err(ModuleError::ZeroRelation(0))
        ));
    }
}
