use crate::algebra::{self, CoeffRing};
use crate::padic::Zpk;
use crate::powseries::DistinguishedPoly;

/// `O_Q = Z_p[X]/(g)` for a distinguished `g` of degree `d`, elements as
/// length-`d` coefficient vectors in `1, x, ..., x^{d-1}`.
///
/// `O_Q` is local with maximal ideal `(p, x)`; since `x^d` lies in `pO_Q`,
/// an element is a unit exactly when its constant coefficient is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OqRing {
    ring: Zpk,
    g: Vec<u64>,
}

impl OqRing {
    pub fn new(g: &DistinguishedPoly) -> Self {
        assert!(g.degree() > 0, "O_Q needs a prime of positive degree");
        OqRing {
            ring: *g.context().ring(),
            g: g.as_poly().residues().to_vec(),
        }
    }

    pub fn degree(&self) -> usize {
        self.g.len() - 1
    }

    pub fn base(&self) -> &Zpk {
        &self.ring
    }

    /// Class of a polynomial in `X`.
    pub fn reduce(&self, f: &[u64]) -> Vec<u64> {
        let mut r = algebra::rem_monic(&self.ring, f, &self.g);
        r.resize(self.degree(), 0);
        r
    }

    /// `x^k` reduced.
    pub fn x_power(&self, k: usize) -> Vec<u64> {
        let mut f = vec![0; k + 1];
        f[k] = 1 % self.ring.modulus();
        self.reduce(&f)
    }
}

impl CoeffRing for OqRing {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }

    fn one(&self) -> Vec<u64> {
        self.x_power(0)
    }

    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| self.ring.add(x, y))
            .collect()
    }

    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| self.ring.sub(x, y))
            .collect()
    }

    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        self.reduce(&algebra::mul(&self.ring, a, b))
    }

    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|&x| self.ring.neg(x)).collect()
    }

    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&x| x == 0)
    }

    fn is_unit(&self, a: &Vec<u64>) -> bool {
        self.ring.is_unit(a[0])
    }

    /// Newton iteration `b <- b(2 - ab)` from the constant inverse; the
    /// error squares in the maximal ideal each step.
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        let c = self.ring.inv(a[0])?;
        let mut b = self.zero();
        b[0] = c;
        let two = {
            let mut t = self.zero();
            t[0] = 2 % self.ring.modulus();
            t
        };
        for _ in 0..64 {
            let ab = self.mul(a, &b);
            if ab == self.one() {
                return Some(b);
            }
            b = self.mul(&b, &self.sub(&two, &ab));
        }
        None
    }

    fn nilpotency_bound(&self) -> usize {
        self.ring.exponent() as usize * self.degree()
    }
}
