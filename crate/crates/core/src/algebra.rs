//! Dense univariate polynomial routines over a complete local coefficient
//! ring known to finite precision.
//!
//! Polynomials are coefficient vectors in ascending degree with no trailing
//! zeros; the empty vector is the zero polynomial.

use std::fmt::Debug;

use crate::padic::Zpk;

pub trait CoeffRing {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Unit of the local ring, i.e. nonzero modulo the maximal ideal.
    fn is_unit(&self, a: &Self::Elem) -> bool;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Iterations after which an element of the maximal ideal raised to
    /// that power is zero at working precision.
    fn nilpotency_bound(&self) -> usize;
}

impl CoeffRing for Zpk {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus()
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        Zpk::add(self, *a, *b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        Zpk::sub(self, *a, *b)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        Zpk::mul(self, *a, *b)
    }
    fn neg(&self, a: &u64) -> u64 {
        Zpk::neg(self, *a)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &u64) -> bool {
        Zpk::is_unit(self, *a)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        Zpk::inv(self, *a)
    }
    fn nilpotency_bound(&self) -> usize {
        self.exponent() as usize
    }
}

pub fn trim<R: CoeffRing>(ring: &R, mut f: Vec<R::Elem>) -> Vec<R::Elem> {
    while f.last().is_some_and(|c| ring.is_zero(c)) {
        f.pop();
    }
    f
}

pub fn add<R: CoeffRing>(ring: &R, f: &[R::Elem], g: &[R::Elem]) -> Vec<R::Elem> {
    let n = f.len().max(g.len());
    let zero = ring.zero();
    let out = (0..n)
        .map(|i| ring.add(f.get(i).unwrap_or(&zero), g.get(i).unwrap_or(&zero)))
        .collect();
    trim(ring, out)
}

pub fn sub<R: CoeffRing>(ring: &R, f: &[R::Elem], g: &[R::Elem]) -> Vec<R::Elem> {
    let n = f.len().max(g.len());
    let zero = ring.zero();
    let out = (0..n)
        .map(|i| ring.sub(f.get(i).unwrap_or(&zero), g.get(i).unwrap_or(&zero)))
        .collect();
    trim(ring, out)
}

pub fn mul<R: CoeffRing>(ring: &R, f: &[R::Elem], g: &[R::Elem]) -> Vec<R::Elem> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ring.zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if ring.is_zero(a) {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            out[i + j] = ring.add(&out[i + j], &ring.mul(a, b));
        }
    }
    trim(ring, out)
}

pub fn scale<R: CoeffRing>(ring: &R, c: &R::Elem, f: &[R::Elem]) -> Vec<R::Elem> {
    trim(ring, f.iter().map(|a| ring.mul(c, a)).collect())
}

/// Truncation to degree `< n`.
pub fn truncate<R: CoeffRing>(ring: &R, f: &[R::Elem], n: usize) -> Vec<R::Elem> {
    trim(ring, f.iter().take(n).cloned().collect())
}

pub fn evaluate<R: CoeffRing>(ring: &R, f: &[R::Elem], x: &R::Elem) -> R::Elem {
    f.iter()
        .rev()
        .fold(ring.zero(), |acc, c| ring.add(&ring.mul(&acc, x), c))
}

/// Division by a monic polynomial: returns `(q, r)` with `f = q*g + r`,
/// `deg r < deg g`.
pub fn divmod_monic<R: CoeffRing>(
    ring: &R,
    f: &[R::Elem],
    g: &[R::Elem],
) -> (Vec<R::Elem>, Vec<R::Elem>) {
    let dg = g
        .len()
        .checked_sub(1)
        .expect("division by the zero polynomial");
    debug_assert!(g[dg] == ring.one(), "divisor must be monic");
    if f.len() <= dg {
        return (Vec::new(), f.to_vec());
    }
    let mut rem = f.to_vec();
    let mut quot = vec![ring.zero(); f.len() - dg];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dg].clone();
        if ring.is_zero(&c) {
            continue;
        }
        for (i, gi) in g.iter().enumerate() {
            rem[k + i] = ring.sub(&rem[k + i], &ring.mul(&c, gi));
        }
        quot[k] = c;
    }
    rem.truncate(dg);
    (trim(ring, quot), trim(ring, rem))
}

pub fn rem_monic<R: CoeffRing>(ring: &R, f: &[R::Elem], g: &[R::Elem]) -> Vec<R::Elem> {
    divmod_monic(ring, f, g).1
}

/// Inverse of `f` as a power series modulo `T^n`; `f(0)` must be a unit.
pub fn series_inverse<R: CoeffRing>(ring: &R, f: &[R::Elem], n: usize) -> Option<Vec<R::Elem>> {
    let c0 = f.first()?;
    let inv0 = ring.inv(c0)?;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = if k == 0 { ring.one() } else { ring.zero() };
        for i in 1..=k.min(f.len().saturating_sub(1)) {
            acc = ring.sub(&acc, &ring.mul(&f[i], &out[k - i]));
        }
        out.push(ring.mul(&acc, &inv0));
    }
    Some(trim(ring, out))
}

/// Index of the first coefficient that is a unit.
pub fn unit_index<R: CoeffRing>(ring: &R, f: &[R::Elem]) -> Option<usize> {
    f.iter().position(|c| ring.is_unit(c))
}

/// `(u, g)` with `f = u*g`.
pub type Factorization<R> = (Vec<<R as CoeffRing>::Elem>, Vec<<R as CoeffRing>::Elem>);

/// Weierstrass factorization `f = u * g` of a polynomial whose first unit
/// coefficient sits at index `lambda`: `g` monic of degree `lambda` and
/// congruent to `X^lambda` modulo the maximal ideal, `u` with unit constant
/// term.
///
/// Iterates `g <- g + (r * s mod g)` where `f = q*g + r` and `s` inverts `q`
/// modulo `(X^lambda, m)`; each step gains at least one power of the
/// maximal ideal, so `max_iterations` of about the nilpotency bound suffice.
/// Returns `None` if the remainder has not vanished by then.
pub fn weierstrass_factor<R: CoeffRing>(
    ring: &R,
    f: &[R::Elem],
    lambda: usize,
    max_iterations: usize,
) -> Option<Factorization<R>> {
    let mut g = vec![ring.zero(); lambda];
    g.push(ring.one());
    if lambda == 0 {
        return Some((f.to_vec(), g));
    }
    let (q0, _) = divmod_monic(ring, f, &g);
    let s = series_inverse(ring, &q0, lambda)?;
    for _ in 0..=max_iterations {
        let (q, r) = divmod_monic(ring, f, &g);
        if r.is_empty() {
            return Some((q, g));
        }
        let delta = rem_monic(ring, &mul(ring, &r, &s), &g);
        g = add(ring, &g, &delta);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Zpk {
        Zpk::new(3, 12).unwrap()
    }

    fn poly(r: &Zpk, c: &[i64]) -> Vec<u64> {
        trim(r, c.iter().map(|&x| r.reduce_i128(x as i128)).collect())
    }

    #[test]
    fn long_division_by_hand() {
        let r = ring();
        // X^3+3X^2+3X-63 = (X-3)(X^2+6X+21)
        let (q, rem) = divmod_monic(&r, &poly(&r, &[-63, 3, 3, 1]), &poly(&r, &[-3, 1]));
        assert_eq!(q, poly(&r, &[21, 6, 1]));
        assert!(rem.is_empty());
        let (q, rem) = divmod_monic(&r, &poly(&r, &[5, 1]), &poly(&r, &[0, 0, 1]));
        assert!(q.is_empty());
        assert_eq!(rem, poly(&r, &[5, 1]));
    }

    #[test]
    fn series_inverse_of_one_minus_x() {
        let r = ring();
        let inv = series_inverse(&r, &poly(&r, &[1, -1]), 5).unwrap();
        assert_eq!(inv, poly(&r, &[1, 1, 1, 1, 1]));
        assert!(series_inverse(&r, &poly(&r, &[3, 1]), 3).is_none());
    }

    #[test]
    fn factor_recovers_hensel_root() {
        let r = ring();
        // 3X^2 + X + 6 has a root in 3Z_3 congruent to 21 mod 27
        let f = poly(&r, &[6, 1, 3]);
        let (u, g) = weierstrass_factor(&r, &f, 1, 12).unwrap();
        assert_eq!(g.len(), 2);
        let root = r.neg(g[0]);
        assert_eq!(root % 27, 21);
        assert_eq!(evaluate(&r, &f, &root), 0);
        assert_eq!(mul(&r, &u, &g), f);
    }
}
