use crate::algebra;
use crate::linalg::{determinant, smith_decompose, Matrix, Transforms};
use crate::padic::PadicInt;
use crate::result::{classify_cokernel, right_witness_text, CardinalityResult};

use super::{DistinguishedPoly, PadicPoly};

/// Sylvester matrix of `f` (degree `m`) and `g` (degree `n`): `n` shifted
/// rows of `f`'s coefficients followed by `m` shifted rows of `g`'s, leading
/// coefficient first.
pub fn sylvester_matrix(f: &PadicPoly, g: &PadicPoly) -> Matrix {
    let m = f.degree().expect("resultant of the zero polynomial");
    let n = g.degree().expect("resultant of the zero polynomial");
    let size = m + n;
    let mut s = Matrix::zeros(size, size);
    for i in 0..n {
        for j in 0..=m {
            s.set(i, i + j, f.residues()[m - j]);
        }
    }
    for i in 0..m {
        for j in 0..=n {
            s.set(n + i, i + j, g.residues()[n - j]);
        }
    }
    s
}

/// `Res(f, g)` as the Sylvester determinant mod `p^N`.
///
/// # Panics
/// If either polynomial is zero or the contexts differ.
pub fn resultant(f: &PadicPoly, g: &PadicPoly) -> PadicInt {
    let ctx = f.context();
    assert_eq!(ctx, g.context(), "p-adic context mismatch");
    ctx.int_from_residue(determinant(&sylvester_matrix(f, g), ctx.ring()))
}

/// `#Z_p[[X]]/(f, g)` as a power of `p`.
///
/// `Z_p[[X]]/(f)` is free over `Z_p` on `1, X, ..., X^{d-1}`; the answer is
/// the cokernel of multiplication by `g` on that lattice, read from its
/// Smith form.
pub fn quotient_cardinality(f: &DistinguishedPoly, g: &PadicPoly) -> CardinalityResult {
    let ctx = f.context();
    assert_eq!(ctx, g.context(), "p-adic context mismatch");
    let ring = ctx.ring();
    let d = f.degree();
    if d == 0 {
        return CardinalityResult::finite(0);
    }
    let fr = f.as_poly().residues();
    let g_mod_f = algebra::rem_monic(ring, g.residues(), fr);
    if g_mod_f.is_empty() {
        return CardinalityResult::infinite(format!(
            "{f} divides {g} at full precision {}^{}",
            ctx.p(),
            ctx.precision()
        ));
    }
    let matrix = multiplication_matrix(ring, fr, &g_mod_f);
    let dec = smith_decompose(&matrix, ring, Transforms::NONE);
    classify_cokernel(&dec.form, ctx, || {
        let full = smith_decompose(&matrix, ring, Transforms::BOTH);
        right_witness_text(
            &full,
            &matrix,
            ctx,
            &format!("multiplication by {g} modulo {f}"),
        )
    })
}

/// Matrix of multiplication by `g` on `Z/p^N[X]/(f)`, `f` monic, in the
/// monomial basis: column `j` holds the coordinates of `X^j * g mod f`.
pub(crate) fn multiplication_matrix(ring: &crate::padic::Zpk, f: &[u64], g: &[u64]) -> Matrix {
    let d = f.len() - 1;
    let mut columns = Vec::with_capacity(d);
    let mut current = algebra::rem_monic(ring, g, f);
    for _ in 0..d {
        let mut col = current.clone();
        col.resize(d, 0);
        columns.push(col);
        let mut shifted = vec![0];
        shifted.extend_from_slice(&current);
        current = algebra::rem_monic(ring, &shifted, f);
    }
    Matrix::from_columns(d, &columns)
}
