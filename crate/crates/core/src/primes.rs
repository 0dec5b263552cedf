//! Height-one primes of `Z_p[[X]]`.
//!
//! Apart from `(p)`, a height-one prime is generated by an irreducible
//! distinguished polynomial. Irreducibility is never guessed: every prime
//! carries a certificate, and general factorization is out of reach, so
//! anything uncertified is returned as an explicit remainder.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::{PadicContext, PadicInt, Zpk};
use crate::powseries::{
    weierstrass_divide, weierstrass_prepare, DistinguishedPoly, PadicPoly, PowSeriesError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrimeError {
    #[error(transparent)]
    PowSeries(#[from] PowSeriesError),
    #[error("invalid arithmetic prime: {0}")]
    InvalidSpec(String),
    #[error("no irreducibility certificate for {0}")]
    Uncertified(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    Degree1,
    Eisenstein,
    /// Degree two with a discriminant that is not a square in `Q_p`.
    Quadratic,
    UserAsserted,
}

impl Certificate {
    pub fn tag(self) -> &'static str {
        match self {
            Certificate::Degree1 => "degree1",
            Certificate::Eisenstein => "eisenstein",
            Certificate::Quadratic => "quadratic",
            Certificate::UserAsserted => "user-asserted",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "degree1" => Certificate::Degree1,
            "eisenstein" => Certificate::Eisenstein,
            "quadratic" => Certificate::Quadratic,
            "user-asserted" => Certificate::UserAsserted,
            _ => return None,
        })
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Checks for a certificate that `g` is irreducible over `Z_p`.
pub fn certify(g: &DistinguishedPoly) -> Option<Certificate> {
    let poly = g.as_poly();
    match g.degree() {
        0 => None,
        1 => Some(Certificate::Degree1),
        _ if poly.is_eisenstein() => Some(Certificate::Eisenstein),
        2 if quadratic_is_irreducible(poly) => Some(Certificate::Quadratic),
        _ => None,
    }
}

fn discriminant(g: &PadicPoly) -> PadicInt {
    let (c, b) = (g.coeff(0), g.coeff(1));
    b * b - g.context().int(4) * c
}

fn quadratic_is_irreducible(g: &PadicPoly) -> bool {
    let ctx = g.context();
    let disc = discriminant(g);
    let Some(e) = disc.valuation().exact() else {
        return false;
    };
    if e >= ctx.certified() {
        return false;
    }
    if e % 2 == 1 {
        return true;
    }
    let ring = ctx.ring();
    let unit = ring.div_p_pow(disc.residue(), e) % ctx.p();
    !is_square_mod_p(unit, ctx.p())
}

fn is_square_mod_p(u: u64, p: u64) -> bool {
    let r = Zpk::new(p, 1).expect("p fits");
    r.pow(u % p, (p - 1) / 2) == 1
}

/// Square root of a unit quadratic residue in `Z/p^k` by Newton lifting.
fn sqrt_unit(ring: &Zpk, u: u64) -> Option<u64> {
    let p = ring.p();
    let mut x = (1..p).find(|&x| (x * x) % p == u % p)?;
    let two_inv = ring.inv(2).expect("p is odd");
    for _ in 0..=ring.exponent() {
        let inv_x = ring.inv(x)?;
        let next = ring.mul(two_inv, ring.add(x, ring.mul(u, inv_x)));
        if next == x {
            break;
        }
        x = next;
    }
    (ring.mul(x, x) == ring.reduce_u64(u)).then_some(x)
}

/// A height-one prime ideal of `Z_p[[X]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeightOnePrime {
    /// The prime `(p)`; representable, never enumerated as a bad prime.
    PPrime,
    Distinguished {
        poly: DistinguishedPoly,
        certificate: Certificate,
    },
}

impl HeightOnePrime {
    /// A certified prime, or an error if no certificate applies.
    pub fn certified(poly: DistinguishedPoly) -> Result<Self, PrimeError> {
        match certify(&poly) {
            Some(certificate) => Ok(HeightOnePrime::Distinguished { poly, certificate }),
            None => Err(PrimeError::Uncertified(poly.to_string())),
        }
    }

    /// Accepts `poly` as prime on the caller's word; flagged in all output.
    pub fn user_asserted(poly: DistinguishedPoly) -> Self {
        let certificate = certify(&poly).unwrap_or(Certificate::UserAsserted);
        HeightOnePrime::Distinguished { poly, certificate }
    }

    /// Parses prime text: `p` for `(p)`, otherwise a distinguished polynomial
    /// that must certify unless `assert_irreducible` is set.
    pub fn parse(
        ctx: &PadicContext,
        text: &str,
        assert_irreducible: bool,
    ) -> Result<Self, PrimeError> {
        if text.trim() == "p" {
            return Ok(HeightOnePrime::PPrime);
        }
        let poly = DistinguishedPoly::parse(ctx, text)?;
        if poly.degree() == 0 {
            return Err(PrimeError::Uncertified(format!("{poly} is a unit")));
        }
        if assert_irreducible {
            Ok(Self::user_asserted(poly))
        } else {
            Self::certified(poly)
        }
    }

    pub fn poly(&self) -> Option<&DistinguishedPoly> {
        match self {
            HeightOnePrime::PPrime => None,
            HeightOnePrime::Distinguished { poly, .. } => Some(poly),
        }
    }

    pub fn certificate(&self) -> Option<Certificate> {
        match self {
            HeightOnePrime::PPrime => None,
            HeightOnePrime::Distinguished { certificate, .. } => Some(*certificate),
        }
    }

    pub fn to_json(&self, p: u64) -> PrimeJson {
        match self {
            HeightOnePrime::PPrime => PrimeJson {
                poly: p.to_string(),
                cert: "p".to_string(),
            },
            HeightOnePrime::Distinguished { poly, certificate } => PrimeJson {
                poly: poly.to_string(),
                cert: certificate.tag().to_string(),
            },
        }
    }

    /// Rebuilds a prime from its serialized form, re-checking any
    /// certificate other than `user-asserted`.
    pub fn from_json(ctx: &PadicContext, json: &PrimeJson) -> Result<Self, PrimeError> {
        if json.cert == "p" {
            return Ok(HeightOnePrime::PPrime);
        }
        let claimed = Certificate::from_tag(&json.cert).ok_or_else(|| {
            PrimeError::Uncertified(format!("unknown certificate {:?}", json.cert))
        })?;
        let poly = DistinguishedPoly::parse(ctx, &json.poly)?;
        if claimed == Certificate::UserAsserted {
            return Ok(Self::user_asserted(poly));
        }
        match certify(&poly) {
            Some(c) if c == claimed => Ok(HeightOnePrime::Distinguished {
                poly,
                certificate: c,
            }),
            _ => Err(PrimeError::Uncertified(format!(
                "{} does not carry a {} certificate",
                json.poly, json.cert
            ))),
        }
    }
}

impl fmt::Display for HeightOnePrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightOnePrime::PPrime => f.write_str("(p)"),
            HeightOnePrime::Distinguished { poly, certificate } => {
                write!(f, "({poly}) [{certificate}]")
            }
        }
    }
}

/// Wire form of a prime: polynomial text plus certificate tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeJson {
    pub poly: String,
    pub cert: String,
}

/// Parameters of the arithmetic prime `ker(nu_{k,zeta})`, where
/// `nu(1+X) = zeta * (1+p)^k` and `zeta` has exact order `p^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithPrimeSpec {
    pub k: u32,
    pub r: u32,
}

/// `((X+1)^{p^j} - c^{p^j}) / ((X+1)^{p^{j-1}} - c^{p^{j-1}})` for `j >= 1`,
/// and `X + 1 - c` for `j = 0`.
fn frobenius_quotient(c: &PadicInt, j: u32) -> Result<DistinguishedPoly, PrimeError> {
    let ctx = c.context();
    let p = ctx.p();
    let x1 = PadicPoly::from_ints(ctx, &[1, 1]);
    if j == 0 {
        return Ok(DistinguishedPoly::new(&x1 - &PadicPoly::constant(c))?);
    }
    let lower = p.pow(j - 1);
    let x1_lower = x1.pow(lower);
    let denominator = &x1_lower - &PadicPoly::constant(&c.pow(lower));
    let numerator = &x1_lower.pow(p) - &PadicPoly::constant(&c.pow(lower * p));
    let denominator = DistinguishedPoly::new(denominator)?;
    let (q, r) = weierstrass_divide(&numerator, &denominator);
    if !r.is_zero() {
        return Err(PrimeError::PrecisionExhausted(format!(
            "telescoping division at level {j} left remainder {r}"
        )));
    }
    Ok(DistinguishedPoly::new(q)?)
}

/// The arithmetic prime for `(k, r)` as its minimal distinguished
/// polynomial. `r = 0` gives `X - ((1+p)^k - 1)`; `r >= 1` the Eisenstein
/// factor of degree `p^r - p^{r-1}` cut out by the primitive `p^r`-th roots
/// of unity.
pub fn arith_prime(ctx: &PadicContext, spec: ArithPrimeSpec) -> Result<HeightOnePrime, PrimeError> {
    if spec.k == 0 {
        return Err(PrimeError::InvalidSpec("k must be at least 1".into()));
    }
    if spec.r > 0 && (ctx.p() as f64).powi(spec.r as i32) > 1.0e5 {
        return Err(PrimeError::InvalidSpec(format!(
            "p^r = {}^{} is too large",
            ctx.p(),
            spec.r
        )));
    }
    let c = ctx.int(1 + ctx.p() as i64).pow(spec.k as u64);
    let poly = frobenius_quotient(&c, spec.r)?;
    let certificate = match spec.r {
        0 => Certificate::Degree1,
        _ if poly.as_poly().is_eisenstein() => Certificate::Eisenstein,
        _ => {
            return Err(PrimeError::PrecisionExhausted(format!(
                "{poly} failed the Eisenstein check"
            )))
        }
    };
    Ok(HeightOnePrime::Distinguished { poly, certificate })
}

/// `[F_0, ..., F_n]` with `F_0 = X - p*lambda` and `F_j` the level-`j`
/// telescoping quotient for `c = 1 + p*lambda`; their product is
/// `(X+1)^{p^n} - c^{p^n}`.
pub fn factor_frobenius_family(
    lambda: &PadicInt,
    n: u32,
) -> Result<Vec<DistinguishedPoly>, PrimeError> {
    let ctx = lambda.context();
    let c = ctx.one() + ctx.int(ctx.p() as i64) * *lambda;
    (0..=n).map(|j| frobenius_quotient(&c, j)).collect()
}

/// `(X+1)^{p^n} - (1 + p*lambda)^{p^n}`.
pub fn frobenius_polynomial(lambda: &PadicInt, n: u32) -> PadicPoly {
    let ctx = lambda.context();
    let c = ctx.one() + ctx.int(ctx.p() as i64) * *lambda;
    let e = ctx.p().pow(n);
    &PadicPoly::from_ints(ctx, &[1, 1]).pow(e) - &PadicPoly::constant(&c.pow(e))
}

/// Height-one primes `Q != (p)` at which the twisted coinvariants of the
/// module `Z_p[[X]][[T]]/(X - T)` at level `n` are infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadPrimeSet {
    pub lambda: PadicInt,
    pub n: u32,
    pub primes: Vec<HeightOnePrime>,
}

impl BadPrimeSet {
    pub fn contains(&self, poly: &DistinguishedPoly) -> bool {
        self.primes.iter().any(|q| q.poly() == Some(poly))
    }

    pub fn is_strict_subset_of(&self, other: &BadPrimeSet) -> bool {
        self.primes
            .iter()
            .all(|q| q.poly().is_some_and(|g| other.contains(g)))
            && other.primes.len() > self.primes.len()
    }

    /// Product of the member polynomials against the defining polynomial.
    pub fn reconstruction_holds(&self) -> bool {
        let ctx = self.lambda.context();
        let product = self
            .primes
            .iter()
            .filter_map(HeightOnePrime::poly)
            .fold(PadicPoly::one(ctx), |acc, g| &acc * g.as_poly());
        let target = frobenius_polynomial(&self.lambda, self.n);
        product.reduce_to(ctx.certified()) == target.reduce_to(ctx.certified())
    }
}

pub fn bad_prime_set(lambda: &PadicInt, n: u32) -> Result<BadPrimeSet, PrimeError> {
    let primes = factor_frobenius_family(lambda, n)?
        .into_iter()
        .enumerate()
        .map(|(j, poly)| {
            let certificate = if j == 0 || poly.degree() == 1 {
                Certificate::Degree1
            } else if poly.as_poly().is_eisenstein() {
                Certificate::Eisenstein
            } else {
                return Err(PrimeError::PrecisionExhausted(format!(
                    "level-{j} factor {poly} failed the Eisenstein check"
                )));
            };
            Ok(HeightOnePrime::Distinguished { poly, certificate })
        })
        .collect::<Result<_, _>>()?;
    Ok(BadPrimeSet {
        lambda: *lambda,
        n,
        primes,
    })
}

/// Certified prime factors of an annihilator `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilatorFactorization {
    /// Exponent of `p` split off by Weierstrass preparation.
    pub mu: u32,
    pub unit: PadicPoly,
    pub primes: Vec<(HeightOnePrime, u32)>,
    /// Distinguished part left without a certificate; `1` when complete.
    pub remainder: DistinguishedPoly,
    /// Hints that did not divide `r`.
    pub rejected_hints: Vec<DistinguishedPoly>,
}

impl AnnihilatorFactorization {
    pub fn is_complete(&self) -> bool {
        self.remainder.degree() == 0
    }
}

fn divides_exactly(g: &DistinguishedPoly, f: &DistinguishedPoly) -> Option<DistinguishedPoly> {
    if g.degree() > f.degree() {
        return None;
    }
    let ctx = f.context();
    let (q, r) = weierstrass_divide(f.as_poly(), g);
    if r.reduce_to(ctx.certified()).is_zero() {
        DistinguishedPoly::new(q).ok()
    } else {
        None
    }
}

fn push_prime(list: &mut Vec<(HeightOnePrime, u32)>, prime: HeightOnePrime, mult: u32) {
    match list.iter_mut().find(|(q, _)| *q == prime) {
        Some(entry) => entry.1 += mult,
        None => list.push((prime, mult)),
    }
}

/// Splits a distinguished quadratic into linear factors when its
/// discriminant is a square whose root is known to certified precision.
fn split_quadratic(g: &DistinguishedPoly) -> Option<(DistinguishedPoly, DistinguishedPoly)> {
    let ctx = g.context();
    let ring = ctx.ring();
    let disc = discriminant(g.as_poly());
    let e = disc.valuation().exact()?;
    if e % 2 == 1 || e / 2 > ctx.guard() {
        return None;
    }
    let half = e / 2;
    let unit = ring.div_p_pow(disc.residue(), e);
    let sub = ring.with_exponent(ctx.precision() - e).ok()?;
    let root_unit = sqrt_unit(&sub, sub.reduce_u64(unit))?;
    let sqrt_disc =
        ctx.int(sub.balanced(root_unit) as i64) * ctx.int_from_residue(ring.p_pow(half));
    let b = g.as_poly().coeff(1);
    let two_inv = ctx.int(2).inv().ok()?;
    let r1 = (-b + sqrt_disc) * two_inv;
    let r2 = (-b - sqrt_disc) * two_inv;
    let l1 = DistinguishedPoly::new(PadicPoly::linear(&r1)).ok()?;
    let l2 = DistinguishedPoly::new(PadicPoly::linear(&r2)).ok()?;
    let prod = l1.as_poly() * l2.as_poly();
    (prod.reduce_to(ctx.certified()) == g.as_poly().reduce_to(ctx.certified())).then_some((l1, l2))
}

/// Weierstrass-prepares `r` and splits off every factor that can be
/// certified: verified hints, linear and Eisenstein pieces, and quadratics
/// via their discriminant.
pub fn annihilator_bad_primes(
    r: &PadicPoly,
    hints: &[DistinguishedPoly],
) -> Result<AnnihilatorFactorization, PrimeError> {
    let form = weierstrass_prepare(r)?;
    let mut rest = form.distinguished.clone();
    let mut primes = Vec::new();
    let mut rejected = Vec::new();

    for hint in hints {
        if hint.degree() == 0 {
            continue;
        }
        let mut mult = 0;
        while let Some(q) = divides_exactly(hint, &rest) {
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            push_prime(
                &mut primes,
                HeightOnePrime::user_asserted(hint.clone()),
                mult,
            );
        } else {
            rejected.push(hint.clone());
        }
    }

    let ctx = r.context();
    if rest.degree() == 2 {
        if let Some((l1, l2)) = split_quadratic(&rest) {
            push_prime(&mut primes, HeightOnePrime::certified(l1)?, 1);
            push_prime(&mut primes, HeightOnePrime::certified(l2)?, 1);
            rest = DistinguishedPoly::one(ctx);
        }
    }
    if rest.degree() > 0 {
        if let Some(certificate) = certify(&rest) {
            push_prime(
                &mut primes,
                HeightOnePrime::Distinguished {
                    poly: rest,
                    certificate,
                },
                1,
            );
            rest = DistinguishedPoly::one(ctx);
        }
    }

    Ok(AnnihilatorFactorization {
        mu: form.mu,
        unit: form.unit,
        primes,
        remainder: rest,
        rejected_hints: rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx() -> PadicContext {
        PadicContext::new(3, 12, 4).unwrap()
    }

    fn dpoly(c: &PadicContext, s: &str) -> DistinguishedPoly {
        DistinguishedPoly::parse(c, s).unwrap()
    }

    /// Expansion of (X+1)^e - c^e with plain binomial coefficients.
    fn binomial_target(e: u64, c: i128, ring: &Zpk) -> Vec<u64> {
        let mut coeffs = vec![0u64; e as usize + 1];
        let mut binom: i128 = 1;
        for i in 0..=e {
            coeffs[i as usize] = ring.reduce_i128(binom);
            binom = binom * (e - i) as i128 / (i + 1) as i128;
        }
        coeffs[0] = ring.sub(coeffs[0], ring.pow(ring.reduce_i128(c), e));
        coeffs
    }

    #[test]
    fn arith_prime_examples() {
        let c = ctx();
        let q = arith_prime(&c, ArithPrimeSpec { k: 1, r: 0 }).unwrap();
        assert_eq!(q.poly().unwrap().to_string(), "X-3");
        assert_eq!(q.certificate(), Some(Certificate::Degree1));
        let q = arith_prime(&c, ArithPrimeSpec { k: 2, r: 0 }).unwrap();
        assert_eq!(q.poly().unwrap().to_string(), "X-15");
        let q = arith_prime(&c, ArithPrimeSpec { k: 1, r: 1 }).unwrap();
        assert_eq!(q.poly().unwrap().to_string(), "X^2+6*X+21");
        assert_eq!(q.certificate(), Some(Certificate::Eisenstein));
        assert!(matches!(
            arith_prime(&c, ArithPrimeSpec { k: 0, r: 0 }),
            Err(PrimeError::InvalidSpec(_))
        ));
    }

    #[test]
    fn arith_primes_vanish_at_their_point() {
        let c = ctx();
        for k in 1..6u32 {
            let q = arith_prime(&c, ArithPrimeSpec { k, r: 0 }).unwrap();
            let point = c.int(4).pow(k as u64) - c.one();
            assert!(q.poly().unwrap().as_poly().eval(&point).is_zero());
            for r in 1..3 {
                let q = arith_prime(&c, ArithPrimeSpec { k, r }).unwrap();
                assert!(q.poly().unwrap().as_poly().is_eisenstein());
                assert_eq!(
                    q.poly().unwrap().degree(),
                    3usize.pow(r) - 3usize.pow(r - 1)
                );
            }
        }
    }

    #[test]
    fn family_examples() {
        let c = ctx();
        let fam = factor_frobenius_family(&c.int(1), 1).unwrap();
        let names: Vec<String> = fam.iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["X-3", "X^2+6*X+21"]);
        let prod = fam[0].as_poly() * fam[1].as_poly();
        assert_eq!(prod.residues(), binomial_target(3, 4, c.ring()).as_slice());

        let fam = factor_frobenius_family(&c.int(0), 1).unwrap();
        let names: Vec<String> = fam.iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["X", "X^2+3*X+3"]);

        for lam in [-4, 0, 1, 2, 7] {
            let fam = factor_frobenius_family(&c.int(lam), 0).unwrap();
            assert_eq!(fam.len(), 1);
            assert_eq!(fam[0].as_poly(), &PadicPoly::linear(&c.int(3 * lam)));
        }
    }

    #[test]
    fn arith_prime_matches_family_factor() {
        let c = ctx();
        let q = arith_prime(&c, ArithPrimeSpec { k: 1, r: 1 }).unwrap();
        let fam = factor_frobenius_family(&c.int(1), 1).unwrap();
        assert_eq!(q.poly(), Some(&fam[1]));
    }

    #[test]
    fn bad_prime_sets_grow_strictly() {
        let c = ctx();
        let sets: Vec<BadPrimeSet> = (0..=3)
            .map(|n| bad_prime_set(&c.int(1), n).unwrap())
            .collect();
        assert_eq!(sets[0].primes.len(), 1);
        assert_eq!(sets[1].primes.len(), 2);
        let always_bad = dpoly(&c, "X-3");
        for (n, s) in sets.iter().enumerate() {
            assert!(s.contains(&always_bad));
            assert!(s.reconstruction_holds());
            for later in &sets[n + 1..] {
                assert!(s.is_strict_subset_of(later));
            }
        }
        assert_eq!(sets[2].primes[2].poly().unwrap().degree(), 6);
        assert_eq!(
            sets[2].primes[2].certificate(),
            Some(Certificate::Eisenstein)
        );
    }

    #[test]
    fn quadratic_certificates() {
        let c = ctx();
        // disc = 9 - 12 = -3: odd valuation
        assert_eq!(
            certify(&dpoly(&c, "X^2+3*X+3")),
            Some(Certificate::Eisenstein)
        );
        // disc = -36 = 9 * (-4), -4 = 2 mod 3 is not a square
        assert_eq!(certify(&dpoly(&c, "X^2+9")), Some(Certificate::Quadratic));
        // disc = 36 - 4*-27: square root exists, reducible
        assert_eq!(certify(&dpoly(&c, "X^2-9")), None);
        // disc = -27: odd valuation, irreducible though not Eisenstein
        assert_eq!(
            certify(&dpoly(&c, "X^2+3*X+9")),
            Some(Certificate::Quadratic)
        );
        // disc = 9 * 13, 13 = 1 mod 3
        assert_eq!(certify(&dpoly(&c, "X^2+3*X-27")), None);
    }

    #[test]
    fn annihilator_examples() {
        let c = ctx();
        let r = PadicPoly::parse(&c, "3*X-9").unwrap();
        let fac = annihilator_bad_primes(&r, &[]).unwrap();
        assert_eq!(fac.mu, 1);
        assert_eq!(
            fac.primes,
            vec![(HeightOnePrime::certified(dpoly(&c, "X-3")).unwrap(), 1)]
        );
        assert!(fac.is_complete());

        let fac =
            annihilator_bad_primes(&PadicPoly::parse(&c, "X^2+6*X+21").unwrap(), &[]).unwrap();
        assert_eq!(fac.primes.len(), 1);
        assert_eq!(fac.primes[0].0.certificate(), Some(Certificate::Eisenstein));

        let a = dpoly(&c, "X^4+3*X+3");
        let b = dpoly(&c, "X^4+6*X^2+12");
        let prod = a.as_poly() * b.as_poly();
        assert!(certify(&DistinguishedPoly::new(prod.clone()).unwrap()).is_none());
        let fac = annihilator_bad_primes(&prod, &[a.clone(), b.clone()]).unwrap();
        assert!(fac.is_complete());
        assert_eq!(fac.primes.len(), 2);
        assert!(fac
            .primes
            .iter()
            .all(|(q, m)| *m == 1 && q.certificate() == Some(Certificate::Eisenstein)));

        let fac = annihilator_bad_primes(&prod, &[]).unwrap();
        assert!(!fac.is_complete());
        assert_eq!(fac.remainder.degree(), 8);
    }

    #[test]
    fn annihilator_splits_reducible_quadratics() {
        let c = ctx();
        let fac = annihilator_bad_primes(&PadicPoly::parse(&c, "X^2-9").unwrap(), &[]).unwrap();
        assert!(fac.is_complete());
        let mut roots: Vec<String> = fac
            .primes
            .iter()
            .map(|(q, _)| q.poly().unwrap().to_string())
            .collect();
        roots.sort();
        assert_eq!(roots, ["X+3", "X-3"]);
        let fac = annihilator_bad_primes(&PadicPoly::parse(&c, "X^2-6*X+9").unwrap(), &[]).unwrap();
        // discriminant 0 mod p^N: repeated root indistinguishable from a close pair
        assert!(fac.primes.is_empty());
        assert_eq!(fac.remainder.degree(), 2);
        let hinted = annihilator_bad_primes(
            &PadicPoly::parse(&c, "X^2-6*X+9").unwrap(),
            &[dpoly(&c, "X-3")],
        )
        .unwrap();
        assert_eq!(
            hinted.primes,
            vec![(HeightOnePrime::certified(dpoly(&c, "X-3")).unwrap(), 2)]
        );
        assert!(hinted.is_complete());
        let hint = dpoly(&c, "X-6");
        let fac = annihilator_bad_primes(
            &PadicPoly::parse(&c, "X^2+6*X+21").unwrap(),
            std::slice::from_ref(&hint),
        )
        .unwrap();
        assert_eq!(fac.rejected_hints, vec![hint]);
    }

    #[test]
    fn prime_json_round_trip() {
        let c = ctx();
        let q = HeightOnePrime::certified(dpoly(&c, "X^2+6*X+21")).unwrap();
        let json = q.to_json(3);
        assert_eq!(
            serde_json::to_string(&json).unwrap(),
            r#"{"poly":"X^2+6*X+21","cert":"eisenstein"}"#
        );
        assert_eq!(HeightOnePrime::from_json(&c, &json).unwrap(), q);
        let forged = PrimeJson {
            poly: "X^2+3*X+9".into(),
            cert: "eisenstein".into(),
        };
        assert!(HeightOnePrime::from_json(&c, &forged).is_err());
    }

    proptest! {
        #[test]
        fn family_reconstructs_and_is_eisenstein(p in prop::sample::select(vec![3u64, 5]), lam in 0i64..5, n in 0u32..4) {
            let c = PadicContext::new(p, 12, 4).unwrap();
            prop_assume!(p == 3 || n <= 2);
            let lam = c.int(lam % p as i64);
            let set = bad_prime_set(&lam, n).unwrap();
            prop_assert!(set.reconstruction_holds());
            for (j, q) in set.primes.iter().enumerate().skip(1) {
                prop_assert!(q.poly().unwrap().as_poly().is_eisenstein());
                prop_assert_eq!(q.poly().unwrap().degree(), (p.pow(j as u32) - p.pow(j as u32 - 1)) as usize);
            }
        }
    }
}
