//! Brute-force cardinalities of quotients of `Z_p[[X]]` and `Z_p[[X]][[T]]`.
//!
//! An ideal is truncated to the finite ring `Z/p^a[X,T]/(X^bx, T^bt)`, whose
//! quotient by every shift of every generator is a finite abelian `p`-group
//! read off a Smith form. Nothing here looks at resultants or Weierstrass
//! data, so the answers are independent of the fast paths they check.
//!
//! A single box can be misleading in both directions, so every answer is
//! computed in two nested boxes and only reported when they agree.

use serde::Serialize;
use thiserror::Error;

use crate::bivar::BivarPoly;
use crate::linalg::{smith_decompose, Matrix, Transforms};
use crate::padic::{PadicContext, Zpk};
use crate::result::CardinalityResult;

pub use crate::linalg::{smith_over_zpa, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("the ideal needs at least one generator")]
    NoGenerators,
    #[error("generator {0} is zero at working precision")]
    ZeroGenerator(usize),
    #[error("generators live in different p-adic contexts")]
    ContextMismatch,
    #[error("box {bx}x{bt} is too small for generators of degree ({deg_x}, {deg_t})")]
    BoxTooSmall {
        bx: u32,
        bt: u32,
        deg_x: u32,
        deg_t: u32,
    },
    #[error("box exponent {a} leaves no room for a rerun within precision {precision}")]
    BoxExceedsPrecision { a: u32, precision: u32 },
}

/// Truncation parameters. `bt = 1` computes in `Z_p[[X]]` alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TruncationBox {
    pub a: u32,
    pub bx: u32,
    pub bt: u32,
}

/// Exponents added to `(a, bx, bt)` for the confirming run.
pub const RERUN_STEP: u32 = 2;

/// Degrees of a generator set plus the `X`-degree of its shortest `T`-free
/// distinguished member, which bounds how fast `X` becomes divisible by `p`.
struct Shape {
    deg_x: u32,
    deg_t: u32,
    bivariate: bool,
    x_scale: u32,
}

fn shape(gens: &[BivarPoly]) -> Shape {
    let deg_x = gens
        .iter()
        .filter_map(BivarPoly::degree_x)
        .max()
        .unwrap_or(0);
    let deg_t = gens
        .iter()
        .filter_map(BivarPoly::degree_t)
        .max()
        .unwrap_or(0);
    let x_scale = gens
        .iter()
        .filter(|g| !g.involves_t())
        .filter_map(distinguished_x_degree)
        .min()
        .unwrap_or(1)
        .max(1);
    Shape {
        deg_x,
        deg_t,
        bivariate: gens.iter().any(BivarPoly::involves_t),
        x_scale,
    }
}

fn distinguished_x_degree(g: &BivarPoly) -> Option<u32> {
    let ring = g.context().ring();
    let d = g.degree_x()?;
    let lead = g.coeff(d, 0).residue();
    let lower_in_p = g.terms().all(|(x, _, c)| x == d || !ring.is_unit(c));
    (ring.is_unit(lead) && lower_in_p).then_some(d)
}

impl TruncationBox {
    /// Default box: `a = N - 2`, cutoffs at least `a` times the degree of
    /// the shortest distinguished `X`-generator so that `X^bx` already lies
    /// in `p^a` on the quotient.
    pub fn for_ideal(gens: &[BivarPoly]) -> Result<Self, OracleError> {
        let ctx = check_gens(gens)?;
        let a = ctx.precision().saturating_sub(RERUN_STEP).max(1);
        Ok(Self::sized(&shape(gens), a))
    }

    fn sized(s: &Shape, a: u32) -> Self {
        let reach = a * s.x_scale;
        TruncationBox {
            a,
            bx: (s.deg_x + 1).max(reach),
            bt: if s.bivariate {
                (s.deg_t + 1).max(reach)
            } else {
                1
            },
        }
    }

    fn grown(&self, by: u32, scale: u32) -> Self {
        TruncationBox {
            a: self.a + by,
            bx: self.bx + by * scale,
            bt: if self.bt > 1 { self.bt + by * scale } else { 1 },
        }
    }

    fn monomials(&self) -> usize {
        (self.bx * self.bt) as usize
    }

    fn index(&self, x: u32, t: u32) -> Option<usize> {
        (x < self.bx && t < self.bt).then(|| (x * self.bt + t) as usize)
    }
}

fn check_gens(gens: &[BivarPoly]) -> Result<PadicContext, OracleError> {
    let first = gens.first().ok_or(OracleError::NoGenerators)?;
    let ctx = *first.context();
    for (i, g) in gens.iter().enumerate() {
        if g.context() != &ctx {
            return Err(OracleError::ContextMismatch);
        }
        if g.is_zero() {
            return Err(OracleError::ZeroGenerator(i));
        }
    }
    Ok(ctx)
}

fn check_box(ctx: &PadicContext, s: &Shape, b: &TruncationBox) -> Result<(), OracleError> {
    if b.bx < s.deg_x + 1 || b.bt < if s.bivariate { s.deg_t + 1 } else { 1 } || b.a == 0 {
        return Err(OracleError::BoxTooSmall {
            bx: b.bx,
            bt: b.bt,
            deg_x: s.deg_x,
            deg_t: s.deg_t,
        });
    }
    if b.a + RERUN_STEP > ctx.precision() {
        return Err(OracleError::BoxExceedsPrecision {
            a: b.a,
            precision: ctx.precision(),
        });
    }
    Ok(())
}

/// One truncated computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleRun {
    pub a: u32,
    pub bx: u32,
    pub bt: u32,
    pub exponent: u64,
    /// Cyclic summands of order exactly `p^a`.
    pub saturated: usize,
}

/// Result together with the runs that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub result: CardinalityResult,
    pub runs: Vec<OracleRun>,
}

impl OracleReport {
    /// `v=1 @ a=10; v=1 @ a=12`
    pub fn trace(&self) -> String {
        self.runs
            .iter()
            .map(|r| {
                if r.saturated > 0 {
                    format!("v={} @ a={} ({} saturated)", r.exponent, r.a, r.saturated)
                } else {
                    format!("v={} @ a={}", r.exponent, r.a)
                }
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Column vector of `g` times `X^s T^t`, truncated to the box.
fn shifted_column(
    g: &BivarPoly,
    s: u32,
    t: u32,
    b: &TruncationBox,
    ring: &Zpk,
) -> Option<Vec<u64>> {
    let mut col = vec![0u64; b.monomials()];
    let mut any = false;
    for (x, y, c) in g.terms() {
        if let Some(k) = b.index(x + s, y + t) {
            let c = ring.reduce_u64(c);
            if c != 0 {
                col[k] = ring.add(col[k], c);
                any = true;
            }
        }
    }
    any.then_some(col)
}

/// Relations of the truncated quotient: every shift of every generator.
fn relation_matrix(gens: &[BivarPoly], b: &TruncationBox, ring: &Zpk) -> Matrix {
    let mut columns = Vec::new();
    for g in gens {
        for s in 0..b.bx {
            for t in 0..b.bt {
                if let Some(col) = shifted_column(g, s, t, b, ring) {
                    columns.push(col);
                }
            }
        }
    }
    Matrix::from_columns(b.monomials(), &columns)
}

/// Multiplication by `m` on the truncated ring, one column per monomial.
fn multiplier_matrix(m: &BivarPoly, b: &TruncationBox, ring: &Zpk) -> Matrix {
    let mut out = Matrix::zeros(b.monomials(), b.monomials());
    for s in 0..b.bx {
        for t in 0..b.bt {
            let j = b.index(s, t).expect("inside the box");
            if let Some(col) = shifted_column(m, s, t, b, ring) {
                for (i, &c) in col.iter().enumerate() {
                    out.set(i, j, c);
                }
            }
        }
    }
    out
}

fn box_ring(ctx: &PadicContext, a: u32) -> Zpk {
    Zpk::new(ctx.p(), a).expect("a <= N keeps the modulus in range")
}

fn run(gens: &[BivarPoly], b: &TruncationBox) -> OracleRun {
    let ring = box_ring(gens[0].context(), b.a);
    let form = smith_over_zpa(&relation_matrix(gens, b, &ring), &ring);
    OracleRun {
        a: b.a,
        bx: b.bx,
        bt: b.bt,
        exponent: form.cokernel_exponent(),
        saturated: form.saturated(),
    }
}

/// `#Λ/(gens)`, certified by agreement of the box and its enlargement.
pub fn brute_cardinality(
    gens: &[BivarPoly],
    b: &TruncationBox,
) -> Result<CardinalityResult, OracleError> {
    brute_cardinality_report(gens, b).map(|r| r.result)
}

pub fn brute_cardinality_report(
    gens: &[BivarPoly],
    b: &TruncationBox,
) -> Result<OracleReport, OracleError> {
    let ctx = check_gens(gens)?;
    let s = shape(gens);
    check_box(&ctx, &s, b)?;
    let big = b.grown(RERUN_STEP, s.x_scale);
    let runs = vec![run(gens, b), run(gens, &big)];
    let (r1, r2) = (runs[0], runs[1]);
    let result = if r1.saturated == 0 && r2.saturated == 0 && r1.exponent == r2.exponent {
        finite_checked(&ctx, r1.exponent)
    } else if r1.saturated > 0 && r2.saturated >= r1.saturated && r2.exponent > r1.exponent {
        CardinalityResult::infinite(format!(
            "a cyclic summand of order p^a persists as the box grows: {} of order {}^{} at a={}, {} of order {}^{} at a={}",
            r1.saturated, ctx.p(), r1.a, r1.a, r2.saturated, ctx.p(), r2.a, r2.a
        ))
    } else {
        CardinalityResult::undetermined(format!(
            "truncations disagree or saturate: v={} @ a={} ({} saturated); v={} @ a={} ({} saturated)",
            r1.exponent, r1.a, r1.saturated, r2.exponent, r2.a, r2.saturated
        ))
    };
    Ok(OracleReport { result, runs })
}

fn finite_checked(ctx: &PadicContext, v: u64) -> CardinalityResult {
    if v < ctx.certified() as u64 {
        CardinalityResult::finite(v)
    } else {
        CardinalityResult::undetermined(format!(
            "exponent {v} is not below the certified precision {}",
            ctx.certified()
        ))
    }
}

/// `#ker(multiplier)` on `Λ/(gens)`.
///
/// The kernel of a truncation is not the truncation of the kernel: a box
/// always has as large a kernel as cokernel. Elements killed in a box
/// larger by `s` in every direction are projected into the base box, and
/// only their image is counted; with `s` beyond the cokernel exponent the
/// spurious kernel created by truncation projects to zero. The box argument
/// fixes the cokernel computation; the kernel boxes are derived from it.
pub fn brute_kernel_cardinality(
    gens: &[BivarPoly],
    multiplier: &BivarPoly,
    b: &TruncationBox,
) -> Result<CardinalityResult, OracleError> {
    brute_kernel_cardinality_report(gens, multiplier, b).map(|r| r.result)
}

pub fn brute_kernel_cardinality_report(
    gens: &[BivarPoly],
    multiplier: &BivarPoly,
    b: &TruncationBox,
) -> Result<OracleReport, OracleError> {
    let ctx = check_gens(gens)?;
    if multiplier.context() != &ctx {
        return Err(OracleError::ContextMismatch);
    }
    if multiplier.is_zero() {
        return brute_cardinality_report(gens, b);
    }
    let mut all = gens.to_vec();
    all.push(multiplier.clone());
    let s = shape(&all);
    let cover = TruncationBox {
        a: b.a,
        bx: b.bx.max(s.deg_x + 1),
        bt: if s.bivariate {
            b.bt.max(s.deg_t + 1)
        } else {
            b.bt
        },
    };
    let coker = brute_cardinality_report(&all, &cover)?;
    let Some(h0) = coker.result.exponent() else {
        return Ok(OracleReport {
            result: CardinalityResult::undetermined(format!(
                "cokernel of the multiplier is {}; the kernel count needs it finite",
                coker.result
            )),
            runs: coker.runs,
        });
    };

    let lift = h0 as u32 + 2;
    let top = ctx.precision().saturating_sub(RERUN_STEP + lift);
    let base_a = b.a.min(top);
    if base_a <= h0 as u32 {
        return Ok(OracleReport {
            result: CardinalityResult::undetermined(format!(
                "precision {} leaves no room to lift kernels past the cokernel exponent {h0}",
                ctx.precision()
            )),
            runs: coker.runs,
        });
    }
    let base = TruncationBox::sized(&s, base_a);
    let runs = vec![
        kernel_run(gens, multiplier, &base, lift, s.x_scale),
        kernel_run(
            gens,
            multiplier,
            &base.grown(RERUN_STEP, s.x_scale),
            lift,
            s.x_scale,
        ),
    ];
    let result = if runs[0].exponent == runs[1].exponent {
        finite_checked(&ctx, runs[0].exponent)
    } else {
        CardinalityResult::undetermined(format!(
            "kernel images disagree: v={} @ a={}; v={} @ a={}",
            runs[0].exponent, runs[0].a, runs[1].exponent, runs[1].a
        ))
    };
    Ok(OracleReport { result, runs })
}

/// Size of the image in `base` of the kernel computed in `base` grown by
/// `lift`.
fn kernel_run(
    gens: &[BivarPoly],
    multiplier: &BivarPoly,
    base: &TruncationBox,
    lift: u32,
    scale: u32,
) -> OracleRun {
    let ctx = gens[0].context();
    let big = base.grown(lift, scale);
    let ring = box_ring(ctx, big.a);
    let rel = relation_matrix(gens, &big, &ring);
    let dec = smith_decompose(
        &rel,
        &ring,
        Transforms {
            left: true,
            right: false,
        },
    );
    let u = dec.left.as_ref().expect("tracked");
    let u_inv = dec.left_inverse.as_ref().expect("tracked");
    let n = big.monomials();

    // Orders p^{e_i} of the cyclic summands in the coordinates y = U x.
    let mut orders = vec![big.a; n];
    for (i, &v) in dec.form.divisor_valuations.iter().enumerate() {
        orders[i] = v.min(big.a);
    }
    let live: Vec<usize> = (0..n).filter(|&i| orders[i] > 0).collect();

    let phi = u
        .mul(&multiplier_matrix(multiplier, &big, &ring), &ring)
        .mul(u_inv, &ring);
    // y lies in the kernel iff (phi y)_i = 0 mod p^{e_i}; scaling row i by
    // p^{a - e_i} makes every condition one modulo p^a.
    let mut eq = phi.submatrix(&live, &live);
    for (r, &i) in live.iter().enumerate() {
        let scale = ring.p_pow(big.a - orders[i]);
        for c in 0..live.len() {
            eq.set(r, c, ring.mul(eq.get(r, c), scale));
        }
    }
    let kdec = smith_decompose(
        &eq,
        &ring,
        Transforms {
            left: false,
            right: true,
        },
    );
    let v = kdec.right.as_ref().expect("tracked");
    let k = live.len();
    let base_ring = box_ring(ctx, base.a);
    let mut images = Vec::new();
    for col in 0..k {
        let f = kdec.form.divisor_valuations.get(col).copied().unwrap_or(0);
        let factor = ring.p_pow(big.a - f.min(big.a));
        let mut y = vec![0u64; n];
        for (r, &i) in live.iter().enumerate() {
            y[i] = ring.mul(v.get(r, col), factor);
        }
        if y.iter().all(|&e| e == 0) {
            continue;
        }
        let x = u_inv.mul_vec(&y, &ring);
        let mut projected = vec![0u64; base.monomials()];
        for sx in 0..big.bx {
            for st in 0..big.bt {
                if let Some(j) = base.index(sx, st) {
                    projected[j] = base_ring.reduce_u64(x[big.index(sx, st).expect("inside")]);
                }
            }
        }
        if projected.iter().any(|&e| e != 0) {
            images.push(projected);
        }
    }

    let base_rel = relation_matrix(gens, base, &base_ring);
    let before = smith_over_zpa(&base_rel, &base_ring).cokernel_exponent();
    let after = smith_over_zpa(
        &base_rel.hconcat(&Matrix::from_columns(base.monomials(), &images)),
        &base_ring,
    )
    .cokernel_exponent();
    OracleRun {
        a: base.a,
        bx: base.bx,
        bt: base.bt,
        exponent: before - after,
        saturated: 0,
    }
}
