//! Polynomials over `Z_p`, viewed inside `Z_p[[X]]`.
//!
//! Power series enter only through polynomials: a distinguished polynomial
//! `f` makes `Z_p[[X]]/(f)` a free `Z_p`-module with basis `1, X, ...,
//! X^{deg f - 1}`, which is where every cardinality below is computed.

mod cardinality;
pub(crate) mod text;
mod weierstrass;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::algebra;
use crate::padic::{PadicContext, PadicInt, Valuation};

pub use cardinality::{quotient_cardinality, resultant, sylvester_matrix};
pub use text::ParseError;
pub use weierstrass::{weierstrass_divide, weierstrass_prepare, WeierstrassForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PowSeriesError {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("{0} is not a distinguished polynomial")]
    NotDistinguished(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A polynomial with coefficients in `Z/p^N`, ascending degree, no trailing
/// zero residues.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicPoly {
    coeffs: Vec<u64>,
    ctx: PadicContext,
}

impl PadicPoly {
    pub fn new(ctx: &PadicContext, coeffs: Vec<u64>) -> Self {
        let ring = ctx.ring();
        let coeffs = coeffs.into_iter().map(|c| ring.reduce_u64(c)).collect();
        PadicPoly {
            coeffs: algebra::trim(ring, coeffs),
            ctx: *ctx,
        }
    }

    pub fn from_ints(ctx: &PadicContext, coeffs: &[i64]) -> Self {
        let ring = ctx.ring();
        Self::new(
            ctx,
            coeffs
                .iter()
                .map(|&c| ring.reduce_i128(c as i128))
                .collect(),
        )
    }

    pub fn zero(ctx: &PadicContext) -> Self {
        PadicPoly {
            coeffs: Vec::new(),
            ctx: *ctx,
        }
    }

    pub fn one(ctx: &PadicContext) -> Self {
        Self::constant(&ctx.one())
    }

    pub fn constant(c: &PadicInt) -> Self {
        Self::new(c.context(), vec![c.residue()])
    }

    /// `X`
    pub fn x(ctx: &PadicContext) -> Self {
        Self::new(ctx, vec![0, 1])
    }

    /// `X - a`
    pub fn linear(a: &PadicInt) -> Self {
        Self::new(a.context(), vec![(-*a).residue(), 1])
    }

    pub(crate) fn from_trimmed(ctx: &PadicContext, coeffs: Vec<u64>) -> Self {
        PadicPoly { coeffs, ctx: *ctx }
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    /// Coefficient residues, ascending degree.
    pub fn residues(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> PadicInt {
        self.ctx
            .int_from_residue(self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub fn coeffs(&self) -> Vec<PadicInt> {
        (0..self.coeffs.len()).map(|i| self.coeff(i)).collect()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Minimum coefficient valuation; `AtLeast(N)` for zero.
    pub fn min_valuation(&self) -> Valuation {
        let ring = self.ctx.ring();
        match self.coeffs.iter().filter_map(|&c| ring.valuation(c)).min() {
            Some(v) => Valuation::Exact(v),
            None => Valuation::AtLeast(self.ctx.precision()),
        }
    }

    pub fn eval(&self, x: &PadicInt) -> PadicInt {
        self.check(x.context());
        self.ctx.int_from_residue(algebra::evaluate(
            self.ctx.ring(),
            &self.coeffs,
            &x.residue(),
        ))
    }

    pub fn scale(&self, c: &PadicInt) -> PadicPoly {
        self.check(c.context());
        PadicPoly::from_trimmed(
            &self.ctx,
            algebra::scale(self.ctx.ring(), &c.residue(), &self.coeffs),
        )
    }

    pub fn pow(&self, mut e: u64) -> PadicPoly {
        let mut base = self.clone();
        let mut acc = PadicPoly::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Reduction of every coefficient modulo `p^k`, `k <= N`.
    pub fn reduce_to(&self, k: u32) -> PadicPoly {
        let m = self.ctx.ring().p_pow(k);
        if m == 0 {
            return self.clone();
        }
        PadicPoly::new(&self.ctx, self.coeffs.iter().map(|c| c % m).collect())
    }

    /// Monic, every lower coefficient in `pZ_p`.
    pub fn is_distinguished(&self) -> bool {
        let ring = self.ctx.ring();
        self.is_monic()
            && self.coeffs[..self.coeffs.len() - 1]
                .iter()
                .all(|&c| !ring.is_unit(c))
    }

    /// Distinguished of positive degree with constant term of valuation
    /// exactly one.
    pub fn is_eisenstein(&self) -> bool {
        self.is_distinguished()
            && self.coeffs.len() >= 2
            && self.ctx.ring().valuation(self.coeffs[0]) == Some(1)
    }

    pub fn parse(ctx: &PadicContext, text: &str) -> Result<PadicPoly, ParseError> {
        text::parse_univariate(ctx, text, 'X')
    }

    pub fn parse_in(ctx: &PadicContext, text: &str, var: char) -> Result<PadicPoly, ParseError> {
        text::parse_univariate(ctx, text, var)
    }

    /// Text form in the given variable.
    pub fn display_in(&self, var: char) -> String {
        text::format_univariate(&self.ctx, &self.coeffs, var)
    }

    fn check(&self, other: &PadicContext) {
        assert_eq!(&self.ctx, other, "p-adic context mismatch");
    }
}

impl fmt::Display for PadicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in('X'))
    }
}

impl fmt::Debug for PadicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PadicPoly({self})")
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $fun:path) => {
        impl $trait<&PadicPoly> for &PadicPoly {
            type Output = PadicPoly;
            fn $method(self, rhs: &PadicPoly) -> PadicPoly {
                self.check(&rhs.ctx);
                PadicPoly::from_trimmed(&self.ctx, $fun(self.ctx.ring(), &self.coeffs, &rhs.coeffs))
            }
        }
        impl $trait<PadicPoly> for PadicPoly {
            type Output = PadicPoly;
            fn $method(self, rhs: PadicPoly) -> PadicPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, algebra::add);
poly_binop!(Sub, sub, algebra::sub);
poly_binop!(Mul, mul, algebra::mul);

impl Neg for &PadicPoly {
    type Output = PadicPoly;
    fn neg(self) -> PadicPoly {
        let ring = *self.ctx.ring();
        PadicPoly::from_trimmed(
            &self.ctx,
            self.coeffs.iter().map(|&c| ring.neg(c)).collect(),
        )
    }
}

impl Neg for PadicPoly {
    type Output = PadicPoly;
    fn neg(self) -> PadicPoly {
        -&self
    }
}

/// A monic polynomial whose lower coefficients all lie in `pZ_p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DistinguishedPoly(PadicPoly);

impl DistinguishedPoly {
    pub fn new(poly: PadicPoly) -> Result<Self, PowSeriesError> {
        if poly.is_distinguished() {
            Ok(DistinguishedPoly(poly))
        } else {
            Err(PowSeriesError::NotDistinguished(poly.to_string()))
        }
    }

    pub fn one(ctx: &PadicContext) -> Self {
        DistinguishedPoly(PadicPoly::one(ctx))
    }

    pub fn parse(ctx: &PadicContext, text: &str) -> Result<Self, PowSeriesError> {
        Self::new(PadicPoly::parse(ctx, text)?)
    }

    pub fn as_poly(&self) -> &PadicPoly {
        &self.0
    }

    pub fn into_poly(self) -> PadicPoly {
        self.0
    }

    pub fn degree(&self) -> usize {
        self.0
            .degree()
            .expect("distinguished polynomials are nonzero")
    }

    pub fn context(&self) -> &PadicContext {
        self.0.context()
    }
}

impl fmt::Display for DistinguishedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for DistinguishedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DistinguishedPoly({})", self.0)
    }
}
