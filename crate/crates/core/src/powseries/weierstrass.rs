use serde::Serialize;

use crate::algebra;
use crate::padic::PadicInt;

use super::{DistinguishedPoly, PadicPoly, PowSeriesError};

/// `f = p^mu * unit * distinguished`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassForm {
    pub mu: u32,
    pub unit: PadicPoly,
    pub distinguished: DistinguishedPoly,
}

impl WeierstrassForm {
    /// Degree of the distinguished part.
    pub fn lambda(&self) -> usize {
        self.distinguished.degree()
    }

    pub fn reconstruct(&self) -> PadicPoly {
        let ctx = self.unit.context();
        let pmu: PadicInt = ctx.int_from_residue(ctx.ring().p_pow(self.mu));
        (&self.unit * self.distinguished.as_poly()).scale(&pmu)
    }
}

#[derive(Serialize)]
struct FormJson {
    mu: u32,
    unit: String,
    distinguished: String,
}

impl Serialize for WeierstrassForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FormJson {
            mu: self.mu,
            unit: self.unit.to_string(),
            distinguished: self.distinguished.to_string(),
        }
        .serialize(s)
    }
}

/// Weierstrass preparation of a polynomial `f`, viewed as a power series.
///
/// The `p`-power is split off first; the distinguished factor of the
/// quotient is then found by the division iteration in
/// [`algebra::weierstrass_factor`], capped at `N` rounds. Dividing by `p^mu`
/// leaves the quotient known only mod `p^{N-mu}`, so the reconstruction
/// `p^mu * u * g` agrees with `f` mod `p^N`.
pub fn weierstrass_prepare(f: &PadicPoly) -> Result<WeierstrassForm, PowSeriesError> {
    let ctx = f.context();
    let ring = ctx.ring();
    let mu = match f.min_valuation().exact() {
        Some(v) if v < ctx.certified() => v,
        _ => {
            return Err(PowSeriesError::PrecisionExhausted(format!(
                "{f} vanishes modulo {}^{}",
                ctx.p(),
                ctx.certified()
            )))
        }
    };
    let reduced: Vec<u64> = f
        .residues()
        .iter()
        .map(|&c| ring.div_p_pow(c, mu))
        .collect();
    let lambda = algebra::unit_index(ring, &reduced).expect("some coefficient has valuation mu");
    let (unit, g) = algebra::weierstrass_factor(ring, &reduced, lambda, ctx.precision() as usize)
        .ok_or_else(|| {
        PowSeriesError::PrecisionExhausted(format!(
            "Weierstrass iteration for {f} did not stabilize within {} rounds",
            ctx.precision()
        ))
    })?;
    Ok(WeierstrassForm {
        mu,
        unit: PadicPoly::from_trimmed(ctx, unit),
        distinguished: DistinguishedPoly(PadicPoly::from_trimmed(ctx, g)),
    })
}

/// Division by a distinguished polynomial: `f = q*g + r` with
/// `deg r < deg g`. For polynomial `f` the Weierstrass quotient is itself a
/// polynomial, so this is monic long division.
pub fn weierstrass_divide(f: &PadicPoly, g: &DistinguishedPoly) -> (PadicPoly, PadicPoly) {
    let ctx = f.context();
    assert_eq!(ctx, g.context(), "p-adic context mismatch");
    let (q, r) = algebra::divmod_monic(ctx.ring(), f.residues(), g.as_poly().residues());
    (
        PadicPoly::from_trimmed(ctx, q),
        PadicPoly::from_trimmed(ctx, r),
    )
}
