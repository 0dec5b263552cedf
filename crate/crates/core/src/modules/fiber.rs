//! Fibers `M/QM` over `O_Q[[T]]` and their `Γ^{p^n}`-homology.
//!
//! Fast path: one specialized relation has a unit coefficient, so
//! Weierstrass preparation over `O_Q` turns it into a monic `H(T)` of degree
//! `L` and `O_Q[[T]]/(H)` is the lattice `Z_p^{dL}` on `x^a T^b`. The other
//! relations and `ω_n` become integer matrices on that lattice and both
//! homology groups come out of Smith forms. Fibers without such a relation
//! go to the oracle.

use crate::algebra::{self, CoeffRing};
use crate::linalg::{smith_decompose, Matrix, SmithDecomposition, Transforms};
use crate::oracle::{brute_cardinality, brute_kernel_cardinality, TruncationBox};
use crate::padic::PadicContext;
use crate::powseries::{DistinguishedPoly, PadicPoly};
use crate::primes::HeightOnePrime;
use crate::result::{
    classify_cokernel, left_witness_text, right_witness_text, CardinalityResult, EulerCharResult,
};

use super::oq::OqRing;
use super::{omega_n, BivarPoly, CyclicPresentation, ModuleError, WildCharacter};

type Elem = Vec<u64>;

/// `M/QM` as an `O_Q[[T]]`-module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializedModule {
    prime: HeightOnePrime,
    oq: OqRing,
    relations: Vec<Vec<Elem>>,
    source: Vec<BivarPoly>,
    twist_log: Vec<WildCharacter>,
}

/// Reduces the `X`-coefficients of every relation modulo `(g, p^N)`;
/// relations that vanish are dropped.
pub fn specialize(
    m: &CyclicPresentation,
    q: &HeightOnePrime,
) -> Result<SpecializedModule, ModuleError> {
    let g = q.poly().ok_or(ModuleError::PPrime)?;
    if g.degree() == 0 {
        return Err(ModuleError::UnitPrime);
    }
    let oq = OqRing::new(g);
    let relations = m
        .relations()
        .iter()
        .map(|r| {
            let coeffs = r
                .t_coefficients()
                .iter()
                .map(|c| oq.reduce(c.residues()))
                .collect();
            algebra::trim(&oq, coeffs)
        })
        .filter(|r: &Vec<Elem>| !r.is_empty())
        .collect();
    Ok(SpecializedModule {
        prime: q.clone(),
        oq,
        relations,
        source: m.relations().to_vec(),
        twist_log: m.twist_log().to_vec(),
    })
}

impl SpecializedModule {
    pub fn prime(&self) -> &HeightOnePrime {
        &self.prime
    }

    pub fn modulus(&self) -> &DistinguishedPoly {
        self.prime.poly().expect("checked at construction")
    }

    pub fn context(&self) -> &PadicContext {
        self.modulus().context()
    }

    /// `d = [O_Q : Z_p]`.
    pub fn degree(&self) -> usize {
        self.oq.degree()
    }

    /// Surviving relations as `T`-polynomials over `O_Q`, ascending in `T`.
    pub fn relations(&self) -> &[Vec<Elem>] {
        &self.relations
    }

    pub fn twist_log(&self) -> &[WildCharacter] {
        &self.twist_log
    }

    /// Relation `i` with `O_Q` coefficients written in `x`.
    pub fn relation_text(&self, i: usize) -> String {
        let ctx = self.context();
        let parts: Vec<String> = self.relations[i]
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !self.oq.is_zero(c))
            .map(|(j, c)| {
                let coeff = PadicPoly::new(ctx, c.clone()).display_in('x');
                match j {
                    0 => format!("({coeff})"),
                    1 => format!("({coeff})*T"),
                    _ => format!("({coeff})*T^{j}"),
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Generators of the ideal of `Λ` cutting out this fiber.
    pub fn oracle_generators(&self) -> Vec<BivarPoly> {
        let mut gens = self.source.clone();
        gens.push(BivarPoly::from_x_poly(self.modulus().as_poly()));
        gens
    }

    /// Whether [`coinvariants`] and [`h1`] avoid the oracle.
    pub fn has_fast_path(&self) -> bool {
        self.unit_relation().is_some() || self.relations.is_empty()
    }

    fn unit_relation(&self) -> Option<(usize, usize)> {
        self.relations
            .iter()
            .enumerate()
            .filter_map(|(i, r)| algebra::unit_index(&self.oq, r).map(|l| (l, i)))
            .min()
            .map(|(l, i)| (i, l))
    }
}

/// The lattice `O_Q[[T]]/(H)` and the matrices acting on it.
struct Lattice {
    l: usize,
    others: Matrix,
    omega: Matrix,
}

enum Fiber {
    Lattice(Lattice),
    /// Every relation vanished: the fiber is `O_Q[[T]]` itself.
    Free,
    NoUnitRelation,
}

impl SpecializedModule {
    fn fiber(&self, n: u32) -> Result<Fiber, String> {
        if self.relations.is_empty() {
            return Ok(Fiber::Free);
        }
        let Some((chosen, lambda)) = self.unit_relation() else {
            return Ok(Fiber::NoUnitRelation);
        };
        let rel = &self.relations[chosen];
        let (_, h) = algebra::weierstrass_factor(&self.oq, rel, lambda, self.oq.nilpotency_bound() + 1)
            .ok_or_else(|| {
                format!(
                    "Weierstrass preparation over O_Q of relation {chosen} did not stabilize at precision {}^{}",
                    self.context().p(),
                    self.context().precision()
                )
            })?;
        let d = self.degree();
        let size = d * lambda;
        let mut others = Matrix::zeros(size, 0);
        for (i, r) in self.relations.iter().enumerate() {
            if i != chosen {
                others = others.hconcat(&self.action(&h, r));
            }
        }
        let omega: Vec<Elem> = omega_n(self.context(), n)
            .residues()
            .iter()
            .map(|&c| {
                let mut e = self.oq.zero();
                e[0] = c;
                e
            })
            .collect();
        Ok(Fiber::Lattice(Lattice {
            l: lambda,
            others,
            omega: self.action(&h, &omega),
        }))
    }

    /// Matrix of multiplication by `y` on `O_Q[T]/(h)`, basis `x^a T^b` at
    /// index `b*d + a`.
    fn action(&self, h: &[Elem], y: &[Elem]) -> Matrix {
        let d = self.degree();
        let l = h.len() - 1;
        let mut columns = Vec::with_capacity(d * l);
        for b in 0..l {
            for a in 0..d {
                let mut basis = vec![self.oq.zero(); b + 1];
                basis[b] = self.oq.x_power(a);
                let prod = algebra::mul(&self.oq, &basis, y);
                let red = algebra::rem_monic(&self.oq, &prod, h);
                let mut col = vec![0u64; d * l];
                for (j, c) in red.iter().enumerate() {
                    col[j * d..(j + 1) * d].copy_from_slice(c);
                }
                columns.push(col);
            }
        }
        Matrix::from_columns(d * l, &columns)
    }
}

fn left_only() -> Transforms {
    Transforms {
        left: true,
        right: false,
    }
}

fn h0_from(sm: &SpecializedModule, lat: &Lattice, n: u32) -> CardinalityResult {
    let ctx = sm.context();
    if lat.l == 0 {
        return CardinalityResult::finite(0);
    }
    let full = lat.others.hconcat(&lat.omega);
    let dec = smith_decompose(&full, ctx.ring(), left_only());
    classify_cokernel(&dec.form, ctx, || {
        let w = left_witness_text(&dec, &full, ctx, &format!("the relations and ω_{n}"))?;
        let omega_zero = (0..lat.omega.rows()).all(|i| lat.omega.row(i).iter().all(|&x| x == 0));
        Some(if omega_zero {
            format!(
                "ω_{n} vanishes modulo the relations over O_Q = Z_p[X]/({}); {w}",
                sm.modulus()
            )
        } else {
            w
        })
    })
}

/// `h1 = h0 - v(det ω_n on M/M_tors)`: `ω_n` is injective on the free
/// part, so its kernel lives on the finite torsion, whose kernel and
/// cokernel have equal size.
fn h1_from(
    sm: &SpecializedModule,
    lat: &Lattice,
    h0: &CardinalityResult,
    n: u32,
) -> CardinalityResult {
    let ctx = sm.context();
    let ring = ctx.ring();
    if lat.l == 0 {
        return CardinalityResult::finite(0);
    }
    let size = lat.omega.rows();
    let dec = smith_decompose(&lat.others, ring, left_only());
    let cap = ring.exponent();
    let certified = ctx.certified();
    let mut free = Vec::new();
    for i in 0..size {
        match dec.form.divisor_valuations.get(i) {
            Some(&v) if v >= cap => free.push(i),
            Some(&v) if v >= certified => {
                return CardinalityResult::undetermined(format!(
                    "torsion divisor of valuation {v} of the fiber is inside the guard band"
                ))
            }
            Some(_) => {}
            None => free.push(i),
        }
    }
    if free.is_empty() {
        return h0.clone();
    }
    let u = dec.left.as_ref().expect("tracked");
    let u_inv = dec.left_inverse.as_ref().expect("tracked");
    let induced = u
        .mul(&lat.omega, ring)
        .mul(u_inv, ring)
        .submatrix(&free, &free);
    let fdec: SmithDecomposition = smith_decompose(&induced, ring, Transforms::BOTH);
    if fdec.form.saturated() > 0 {
        return match right_witness_text(&fdec, &induced, ctx, &format!("ω_{n} on the free part of the fiber")) {
            Some(w) => CardinalityResult::infinite(w),
            None => CardinalityResult::undetermined(format!(
                "ω_{n} is singular mod {}^{} on the free part but no unit-coordinate kernel vector was found",
                ctx.p(),
                ctx.precision()
            )),
        };
    }
    if fdec.form.max_unsaturated().is_some_and(|v| v >= certified) {
        return CardinalityResult::undetermined(
            "determinant of ω_n on the free part is inside the guard band".to_string(),
        );
    }
    let delta = fdec.form.cokernel_exponent();
    match h0 {
        CardinalityResult::Finite { exponent } if *exponent >= delta => {
            CardinalityResult::finite(exponent - delta)
        }
        CardinalityResult::Finite { exponent } => CardinalityResult::undetermined(format!(
            "free-part determinant valuation {delta} exceeds the coinvariant exponent {exponent}"
        )),
        other => CardinalityResult::undetermined(format!(
            "ω_{n} is injective on the free part but the coinvariants are {other}"
        )),
    }
}

fn free_fiber(sm: &SpecializedModule, n: u32) -> (CardinalityResult, CardinalityResult) {
    let h0 = CardinalityResult::infinite(format!(
        "no relation survives modulo {}: the coinvariants contain O_Q[T]/(ω_{n}), free of rank {}",
        sm.modulus(),
        sm.context().p().pow(n)
    ));
    (h0, CardinalityResult::finite(0))
}

fn both(
    sm: &SpecializedModule,
    n: u32,
    want_h1: bool,
) -> (CardinalityResult, Option<CardinalityResult>) {
    match sm.fiber(n) {
        Err(reason) => {
            let r = CardinalityResult::undetermined(reason);
            (r.clone(), Some(r))
        }
        Ok(Fiber::Free) => {
            let (h0, h1) = free_fiber(sm, n);
            (h0, Some(h1))
        }
        Ok(Fiber::NoUnitRelation) => {
            let h0 = coinvariants_oracle(sm, n);
            (h0, want_h1.then(|| h1_oracle(sm, n)))
        }
        Ok(Fiber::Lattice(lat)) => {
            let h0 = h0_from(sm, &lat, n);
            let h1 = want_h1.then(|| h1_from(sm, &lat, &h0, n));
            (h0, h1)
        }
    }
}

/// `#(M/QM)_{Γ^{p^n}} = #(M/QM)/ω_n`.
pub fn coinvariants(sm: &SpecializedModule, n: u32) -> CardinalityResult {
    both(sm, n, false).0
}

/// `#ker(ω_n)` on `M/QM`.
pub fn h1(sm: &SpecializedModule, n: u32) -> CardinalityResult {
    both(sm, n, true).1.expect("requested")
}

pub fn euler_char(sm: &SpecializedModule, n: u32) -> EulerCharResult {
    let (h0, h1) = both(sm, n, true);
    EulerCharResult::new(h0, h1.expect("requested"))
}

fn omega_bivar(sm: &SpecializedModule, n: u32) -> BivarPoly {
    BivarPoly::from_t_poly(&omega_n(sm.context(), n))
}

/// Coinvariants computed by the oracle alone.
pub fn coinvariants_oracle(sm: &SpecializedModule, n: u32) -> CardinalityResult {
    let mut gens = sm.oracle_generators();
    gens.push(omega_bivar(sm, n));
    TruncationBox::for_ideal(&gens)
        .and_then(|b| brute_cardinality(&gens, &b))
        .unwrap_or_else(|e| CardinalityResult::undetermined(e.to_string()))
}

/// `H_1` computed by the oracle alone.
pub fn h1_oracle(sm: &SpecializedModule, n: u32) -> CardinalityResult {
    let gens = sm.oracle_generators();
    TruncationBox::for_ideal(&gens)
        .and_then(|b| brute_kernel_cardinality(&gens, &omega_bivar(sm, n), &b))
        .unwrap_or_else(|e| CardinalityResult::undetermined(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PadicContext {
        PadicContext::new(3, 12, 4).unwrap()
    }

    fn prime(c: &PadicContext, s: &str) -> HeightOnePrime {
        HeightOnePrime::parse(c, s, false).unwrap()
    }

    fn module(c: &PadicContext, rels: &[&str]) -> CyclicPresentation {
        CyclicPresentation::new(
            rels.iter()
                .map(|r| BivarPoly::parse(c, r).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn example(c: &PadicContext, lambda: i64) -> CyclicPresentation {
        CyclicPresentation::diagonal(c).twist(&WildCharacter::new(c.int(lambda)))
    }

    #[test]
    fn specialization_examples() {
        let c = ctx();
        let sm = specialize(&module(&c, &["T-X"]), &prime(&c, "X-3")).unwrap();
        assert_eq!(sm.relation_text(0), "(1)*T + (-3)");
        let sm = specialize(&example(&c, 1), &prime(&c, "X")).unwrap();
        // (X + 1) - 4(T + 1) at X = 0
        assert_eq!(sm.relation_text(0), "(-4)*T + (-3)");
        let sm = specialize(&module(&c, &["T-X"]), &prime(&c, "X^2+6*X+21")).unwrap();
        assert_eq!(sm.relation_text(0), "(1)*T + (-x)");
        assert!(matches!(
            specialize(&module(&c, &["T"]), &HeightOnePrime::PPrime),
            Err(ModuleError::PPrime)
        ));
    }

    #[test]
    fn twisted_diagonal_good_prime() {
        let c = ctx();
        let sm = specialize(&example(&c, 1), &prime(&c, "X")).unwrap();
        assert!(sm.has_fast_path());
        let e = euler_char(&sm, 1);
        assert_eq!(e.h0, CardinalityResult::finite(2));
        assert_eq!(e.h1, CardinalityResult::finite(0));
        assert_eq!(e.chi_exponent, Some(2));
        assert_eq!(coinvariants_oracle(&sm, 1), CardinalityResult::finite(2));
        assert_eq!(h1_oracle(&sm, 1), CardinalityResult::finite(0));

        let sm = specialize(&example(&c, 0), &prime(&c, "X-3")).unwrap();
        assert_eq!(euler_char(&sm, 1).chi_exponent, Some(2));
    }

    #[test]
    fn twisted_diagonal_always_bad_prime() {
        let c = ctx();
        let sm = specialize(&example(&c, 1), &prime(&c, "X-3")).unwrap();
        for n in 0..3 {
            match coinvariants(&sm, n) {
                CardinalityResult::Infinite { witness } => {
                    assert!(witness.contains("vanishes"), "{witness}")
                }
                other => panic!("expected infinite at n={n}, got {other}"),
            }
            assert_eq!(euler_char(&sm, n).chi_exponent, None);
        }
    }

    #[test]
    fn finite_modules_have_trivial_herbrand_quotient() {
        let c = ctx();
        let m = module(&c, &["3", "T", "X-3"]);
        let sm = specialize(&m, &prime(&c, "X-3")).unwrap();
        // relations 3 and T survive; 3 has no unit coefficient but T does
        for n in 0..3 {
            let e = euler_char(&sm, n);
            assert_eq!(
                (e.h0.clone(), e.h1.clone()),
                (CardinalityResult::finite(1), CardinalityResult::finite(1))
            );
            assert_eq!(e.chi_exponent, Some(0));
        }
    }

    #[test]
    fn torsion_free_infinite_fiber() {
        let c = ctx();
        // O_Q[[T]]/(3): ω_n injective, coinvariants F_3[T]/(T^{3^n})
        let sm = specialize(&module(&c, &["3"]), &prime(&c, "X")).unwrap();
        assert!(!sm.has_fast_path());
        assert_eq!(h1(&sm, 0), CardinalityResult::finite(0));
        assert_eq!(coinvariants(&sm, 0), CardinalityResult::finite(1));
        assert_eq!(coinvariants(&sm, 1), CardinalityResult::finite(3));
    }

    #[test]
    fn no_surviving_relation() {
        let c = ctx();
        let sm = specialize(&module(&c, &["X-3"]), &prime(&c, "X-3")).unwrap();
        let e = euler_char(&sm, 1);
        assert!(e.h0.is_infinite());
        assert_eq!(e.h1, CardinalityResult::finite(0));
    }

    #[test]
    fn fast_path_matches_quotient_cardinality() {
        let c = ctx();
        for lambda in 0..3i64 {
            for g in ["X", "X-6", "X^2+6*X+21", "X^2+3*X+3"] {
                let q = prime(&c, g);
                let sm = specialize(&example(&c, lambda), &q).unwrap();
                let target = crate::primes::frobenius_polynomial(&c.int(lambda), 1);
                let expected = crate::powseries::quotient_cardinality(q.poly().unwrap(), &target);
                let got = coinvariants(&sm, 1);
                assert_eq!(got.cell(3), expected.cell(3), "lambda={lambda}, g={g}");
            }
        }
    }
}
