//! Polynomials in `X` and `T` over `Z/p^N`, the relations of modules over
//! `Z_p[[X]][[T]]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::padic::{PadicContext, PadicInt};
use crate::powseries::text::{format_terms, parse_terms, power};
use crate::powseries::{PadicPoly, ParseError};

/// Sparse polynomial keyed by `(X-degree, T-degree)`; no zero residues.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), u64>,
    ctx: PadicContext,
}

impl BivarPoly {
    pub fn zero(ctx: &PadicContext) -> Self {
        BivarPoly {
            terms: BTreeMap::new(),
            ctx: *ctx,
        }
    }

    pub fn one(ctx: &PadicContext) -> Self {
        Self::monomial(&ctx.one(), 0, 0)
    }

    pub fn monomial(c: &PadicInt, x: u32, t: u32) -> Self {
        let mut out = Self::zero(c.context());
        out.add_term(x, t, c.residue());
        out
    }

    /// From `(coefficient, X-degree, T-degree)` triples; repeated monomials add.
    pub fn from_terms(ctx: &PadicContext, terms: &[(i64, u32, u32)]) -> Self {
        let mut out = Self::zero(ctx);
        for &(c, x, t) in terms {
            out.add_term(x, t, ctx.ring().reduce_i128(c as i128));
        }
        out
    }

    /// A polynomial in `X` alone.
    pub fn from_x_poly(f: &PadicPoly) -> Self {
        Self::from_univariate(f, false)
    }

    /// A polynomial in `T` alone, given as a univariate polynomial.
    pub fn from_t_poly(f: &PadicPoly) -> Self {
        Self::from_univariate(f, true)
    }

    fn from_univariate(f: &PadicPoly, in_t: bool) -> Self {
        let mut out = Self::zero(f.context());
        for (i, &c) in f.residues().iter().enumerate() {
            let (x, t) = if in_t { (0, i as u32) } else { (i as u32, 0) };
            out.add_term(x, t, c);
        }
        out
    }

    fn add_term(&mut self, x: u32, t: u32, c: u64) {
        let ring = self.ctx.ring();
        let entry = self.terms.entry((x, t)).or_insert(0);
        *entry = ring.add(*entry, c);
        if *entry == 0 {
            self.terms.remove(&(x, t));
        }
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    /// `(X-degree, T-degree, residue)` in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, u64)> + '_ {
        self.terms.iter().map(|(&(x, t), &c)| (x, t, c))
    }

    pub fn coeff(&self, x: u32, t: u32) -> PadicInt {
        self.ctx
            .int_from_residue(self.terms.get(&(x, t)).copied().unwrap_or(0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn degree_t(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    pub fn involves_t(&self) -> bool {
        self.terms.keys().any(|k| k.1 > 0)
    }

    pub fn scale(&self, c: &PadicInt) -> Self {
        let ring = self.ctx.ring();
        let mut out = Self::zero(&self.ctx);
        for (x, t, v) in self.terms() {
            out.add_term(x, t, ring.mul(v, c.residue()));
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx);
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

    /// Substitutes `T -> a*T + b`.
    pub fn substitute_t(&self, a: &PadicInt, b: &PadicInt) -> Self {
        let lin = &Self::monomial(a, 0, 1) + &Self::monomial(b, 0, 0);
        let max_t = self.degree_t().unwrap_or(0);
        let mut powers = vec![Self::one(&self.ctx)];
        for k in 1..=max_t as usize {
            let next = &powers[k - 1] * &lin;
            powers.push(next);
        }
        let mut out = Self::zero(&self.ctx);
        for (x, t, c) in self.terms() {
            let mut piece = powers[t as usize].scale(&self.ctx.int_from_residue(c));
            piece = piece.shift_x(x);
            out = &out + &piece;
        }
        out
    }

    fn shift_x(&self, s: u32) -> Self {
        BivarPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(x, t), &c)| ((x + s, t), c))
                .collect(),
            ctx: self.ctx,
        }
    }

    /// The `T`-polynomial coefficients: entry `j` is the coefficient of
    /// `T^j` as a polynomial in `X`.
    pub fn t_coefficients(&self) -> Vec<PadicPoly> {
        let len = self.degree_t().map_or(0, |d| d as usize + 1);
        let mut rows: Vec<Vec<u64>> = vec![Vec::new(); len];
        for (x, t, c) in self.terms() {
            let row = &mut rows[t as usize];
            if row.len() <= x as usize {
                row.resize(x as usize + 1, 0);
            }
            row[x as usize] = c;
        }
        rows.into_iter()
            .map(|r| PadicPoly::new(&self.ctx, r))
            .collect()
    }

    /// Coefficients as balanced integers with their exponents, descending.
    pub fn to_triples(&self) -> Vec<(i64, u32, u32)> {
        let ring = self.ctx.ring();
        self.terms
            .iter()
            .rev()
            .map(|(&(x, t), &c)| (ring.balanced(c) as i64, x, t))
            .collect()
    }

    pub fn parse(ctx: &PadicContext, text: &str) -> Result<Self, ParseError> {
        let terms = parse_terms(ctx.ring(), text, &['X', 'T'])?;
        let mut out = Self::zero(ctx);
        for term in terms {
            out.add_term(term.exps[0], term.exps[1], term.coeff);
        }
        Ok(out)
    }

    fn check(&self, other: &PadicContext) {
        assert_eq!(&self.ctx, other, "p-adic context mismatch");
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms.iter().rev().map(|(&(x, t), &c)| {
            let mono = match (power('X', x), power('T', t)) {
                (a, b) if a.is_empty() => b,
                (a, b) if b.is_empty() => a,
                (a, b) => format!("{a}*{b}"),
            };
            (c, mono)
        });
        f.write_str(&format_terms(self.ctx.ring(), terms))
    }
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivarPoly({self})")
    }
}

impl Add<&BivarPoly> for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        self.check(&rhs.ctx);
        let mut out = self.clone();
        for (x, t, c) in rhs.terms() {
            out.add_term(x, t, c);
        }
        out
    }
}

impl Sub<&BivarPoly> for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        self + &(-rhs)
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        let ring = self.ctx.ring();
        BivarPoly {
            terms: self.terms.iter().map(|(&k, &c)| (k, ring.neg(c))).collect(),
            ctx: self.ctx,
        }
    }
}

impl Mul<&BivarPoly> for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        self.check(&rhs.ctx);
        let ring = self.ctx.ring();
        let mut out = BivarPoly::zero(&self.ctx);
        for (x1, t1, c1) in self.terms() {
            for (x2, t2, c2) in rhs.terms() {
                out.add_term(x1 + x2, t1 + t2, ring.mul(c1, c2));
            }
        }
        out
    }
}
