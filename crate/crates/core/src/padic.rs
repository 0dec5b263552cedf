//! Fixed-precision arithmetic in `Z_p`.
//!
//! Every residue is a canonical representative in `[0, p^N)`. The working
//! precision `N` is global to a [`PadicContext`]; a number of guard digits
//! below `N` marks the band in which answers are no longer certified.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Residues are kept below this bound so that products fit in `u128`.
const MODULUS_LIMIT: u128 = 1 << 62;

pub const DEFAULT_GUARD: u32 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("p must be an odd prime (got {0})")]
    InvalidPrime(u64),
    #[error("precision {precision} must be at least guard + 2 = {}", .guard + 2)]
    PrecisionTooSmall { precision: u32, guard: u32 },
    #[error("{p}^{exponent} exceeds the supported residue range (2^62)")]
    ModulusTooLarge { p: u64, exponent: u32 },
    #[error("operands belong to different p-adic contexts")]
    ContextMismatch,
    #[error("element is not a unit (valuation {0})")]
    NotAUnit(Valuation),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The p-adic valuation of a residue mod `p^N`.
///
/// The zero residue has no exact valuation at finite precision; it is
/// reported as `AtLeast(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Valuation {
    Exact(u32),
    AtLeast(u32),
}

impl Valuation {
    pub fn exact(self) -> Option<u32> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// Lower bound on the true valuation.
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// The ring `Z/p^k` on raw `u64` residues.
///
/// This is the workhorse for every matrix and polynomial routine; the
/// typed [`PadicInt`] wraps it for the public scalar API.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Zpk {
    p: u64,
    exponent: u32,
    modulus: u64,
}

impl Zpk {
    pub fn new(p: u64, exponent: u32) -> Result<Self, PadicError> {
        let mut m: u128 = 1;
        for _ in 0..exponent {
            m *= p as u128;
            if m >= MODULUS_LIMIT {
                return Err(PadicError::ModulusTooLarge { p, exponent });
            }
        }
        Ok(Zpk {
            p,
            exponent,
            modulus: m as u64,
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn reduce_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    pub fn reduce_u64(&self, x: u64) -> u64 {
        x % self.modulus
    }

    /// Representative in `(-p^k/2, p^k/2]`.
    pub fn balanced(&self, a: u64) -> i128 {
        if a > self.modulus / 2 {
            a as i128 - self.modulus as i128
        } else {
            a as i128
        }
    }

    /// `None` for the zero residue.
    pub fn valuation(&self, a: u64) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let mut v = 0;
        let mut x = a;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        Some(v)
    }

    /// Valuation with zero mapped to the cap `k`.
    pub fn valuation_capped(&self, a: u64) -> u32 {
        self.valuation(a).unwrap_or(self.exponent)
    }

    #[inline]
    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    pub fn p_pow(&self, e: u32) -> u64 {
        if e >= self.exponent {
            0
        } else {
            self.pow(self.p, e as u64)
        }
    }

    /// Exact quotient `a / p^v`, assuming `p^v | a` as integers.
    /// Exact division of the balanced representative, so small negative
    /// values keep small lifts.
    pub fn div_p_pow(&self, a: u64, v: u32) -> u64 {
        let mut x = self.balanced(a);
        for _ in 0..v {
            debug_assert_eq!(x % self.p as i128, 0);
            x /= self.p as i128;
        }
        self.reduce_i128(x)
    }

    /// Inverse of a unit by extended Euclid; `None` for non-units.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.reduce_i128(t0))
    }

    /// The same prime at a different exponent.
    pub fn with_exponent(&self, exponent: u32) -> Result<Zpk, PadicError> {
        Zpk::new(self.p, exponent)
    }
}

/// Shared, read-only description of the working p-adic precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicContext {
    ring: Zpk,
    guard: u32,
}

impl PadicContext {
    pub fn new(p: u64, precision: u32, guard: u32) -> Result<Self, PadicError> {
        if p < 3 || !is_prime(p) {
            return Err(PadicError::InvalidPrime(p));
        }
        if precision < guard + 2 {
            return Err(PadicError::PrecisionTooSmall { precision, guard });
        }
        Ok(PadicContext {
            ring: Zpk::new(p, precision)?,
            guard,
        })
    }

    pub fn with_default_guard(p: u64, precision: u32) -> Result<Self, PadicError> {
        Self::new(p, precision, DEFAULT_GUARD)
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.ring.p
    }

    #[inline]
    pub fn precision(&self) -> u32 {
        self.ring.exponent
    }

    #[inline]
    pub fn guard(&self) -> u32 {
        self.guard
    }

    /// `N - guard`: exponents below this are certified.
    #[inline]
    pub fn certified(&self) -> u32 {
        self.ring.exponent - self.guard
    }

    #[inline]
    pub fn ring(&self) -> &Zpk {
        &self.ring
    }

    pub fn int(&self, value: i64) -> PadicInt {
        PadicInt {
            residue: self.ring.reduce_i128(value as i128),
            ctx: *self,
        }
    }

    pub fn int_from_residue(&self, residue: u64) -> PadicInt {
        PadicInt {
            residue: self.ring.reduce_u64(residue),
            ctx: *self,
        }
    }

    pub fn zero(&self) -> PadicInt {
        self.int(0)
    }

    pub fn one(&self) -> PadicInt {
        self.int(1)
    }
}

/// An element of `Z_p` known modulo `p^N`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicInt {
    residue: u64,
    ctx: PadicContext,
}

impl PadicInt {
    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn balanced(&self) -> i128 {
        self.ctx.ring.balanced(self.residue)
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    pub fn is_unit(&self) -> bool {
        self.ctx.ring.is_unit(self.residue)
    }

    pub fn valuation(&self) -> Valuation {
        match self.ctx.ring.valuation(self.residue) {
            Some(v) => Valuation::Exact(v),
            None => Valuation::AtLeast(self.ctx.precision()),
        }
    }

    fn check(&self, other: &PadicInt) -> Result<(), PadicError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(PadicError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &PadicInt) -> Result<PadicInt, PadicError> {
        self.check(other)?;
        Ok(self.with(self.ctx.ring.add(self.residue, other.residue)))
    }

    pub fn try_sub(&self, other: &PadicInt) -> Result<PadicInt, PadicError> {
        self.check(other)?;
        Ok(self.with(self.ctx.ring.sub(self.residue, other.residue)))
    }

    pub fn try_mul(&self, other: &PadicInt) -> Result<PadicInt, PadicError> {
        self.check(other)?;
        Ok(self.with(self.ctx.ring.mul(self.residue, other.residue)))
    }

    pub fn inv(&self) -> Result<PadicInt, PadicError> {
        self.ctx
            .ring
            .inv(self.residue)
            .map(|r| self.with(r))
            .ok_or(PadicError::NotAUnit(self.valuation()))
    }

    pub fn pow(&self, e: u64) -> PadicInt {
        self.with(self.ctx.ring.pow(self.residue, e))
    }

    fn with(&self, residue: u64) -> PadicInt {
        PadicInt {
            residue,
            ctx: self.ctx,
        }
    }
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (mod {}^{})",
            self.balanced(),
            self.ctx.p(),
            self.ctx.precision()
        )
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.balanced())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait for PadicInt {
            type Output = PadicInt;
            fn $method(self, rhs: PadicInt) -> PadicInt {
                self.$try(&rhs).expect("p-adic context mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        self.with(self.ctx.ring.neg(self.residue))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx34() -> PadicContext {
        PadicContext::new(3, 4, 2).unwrap()
    }

    /// Extended Euclid on plain integers, kept apart from `Zpk::inv`.
    fn inverse_by_search(a: u64, m: u64) -> Option<u64> {
        (1..m).find(|x| (a * x) % m == 1)
    }

    #[test]
    fn context_validation() {
        assert_eq!(
            PadicContext::new(2, 12, 4),
            Err(PadicError::InvalidPrime(2))
        );
        assert_eq!(
            PadicContext::new(9, 12, 4),
            Err(PadicError::InvalidPrime(9))
        );
        assert!(matches!(
            PadicContext::new(3, 5, 4),
            Err(PadicError::PrecisionTooSmall { .. })
        ));
        assert!(matches!(
            PadicContext::new(3, 60, 4),
            Err(PadicError::ModulusTooLarge { .. })
        ));
        assert!(PadicContext::new(3, 6, 4).is_ok());
    }

    #[test]
    fn add_examples() {
        let c = ctx34();
        assert_eq!(c.int(80) + c.int(1), c.zero());
        assert_eq!(c.int(17) + c.zero(), c.int(17));
        assert_eq!(c.int(40) + c.int(41), c.zero());
    }

    #[test]
    fn mul_examples() {
        let c = ctx34();
        assert_eq!(c.int(23) * c.one(), c.int(23));
        assert_eq!(c.int(27) * c.int(3), c.zero());
        assert_eq!(inverse_by_search(4, 81), Some(61));
        assert_eq!(c.int(4) * c.int(61), c.one());
    }

    #[test]
    fn inv_examples() {
        let c = ctx34();
        assert_eq!(c.one().inv().unwrap(), c.one());
        assert_eq!(c.int(4).inv().unwrap(), c.int(61));
        assert_eq!(
            c.int(3).inv(),
            Err(PadicError::NotAUnit(Valuation::Exact(1)))
        );
    }

    #[test]
    fn valuation_examples() {
        let c = PadicContext::new(3, 12, 4).unwrap();
        assert_eq!(c.int(48).valuation(), Valuation::Exact(1));
        assert_eq!(c.int(1).valuation(), Valuation::Exact(0));
        assert_eq!(c.int(0).valuation(), Valuation::AtLeast(12));
        assert_eq!(c.int(-9).valuation(), Valuation::Exact(2));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = ctx34().int(1);
        let b = PadicContext::new(5, 4, 2).unwrap().int(1);
        assert_eq!(a.try_add(&b), Err(PadicError::ContextMismatch));
        assert_eq!(a.try_mul(&b), Err(PadicError::ContextMismatch));
    }

    #[test]
    fn balanced_display() {
        let c = ctx34();
        assert_eq!(c.int(-3).to_string(), "-3");
        assert_eq!(c.int(40).to_string(), "40");
        assert_eq!(c.int(41).to_string(), "-40");
    }

    proptest! {
        #[test]
        fn ring_axioms(p in prop::sample::select(vec![3u64, 5, 7]), a: u64, b: u64, c: u64) {
            let ctx = PadicContext::new(p, 8, 4).unwrap();
            let (a, b, c) = (ctx.int_from_residue(a), ctx.int_from_residue(b), ctx.int_from_residue(c));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!((a + b) - b, a);
        }

        #[test]
        fn valuation_is_additive(a in 1u64..1_000_000, b in 1u64..1_000_000) {
            let ctx = PadicContext::new(3, 30, 4).unwrap();
            let (x, y) = (ctx.int_from_residue(a), ctx.int_from_residue(b));
            let (va, vb) = (x.valuation().exact().unwrap(), y.valuation().exact().unwrap());
            if va + vb < 30 {
                prop_assert_eq!((x * y).valuation(), Valuation::Exact(va + vb));
            }
        }

        #[test]
        fn inverse_is_an_involution(a: u64) {
            let ctx = PadicContext::new(5, 10, 4).unwrap();
            let x = ctx.int_from_residue(a);
            if x.is_unit() {
                let y = x.inv().unwrap();
                prop_assert_eq!(x * y, ctx.one());
                prop_assert_eq!(y.inv().unwrap(), x);
            } else {
                prop_assert!(x.inv().is_err());
            }
        }
    }
}
