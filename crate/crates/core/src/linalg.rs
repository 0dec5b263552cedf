//! Dense matrices over `Z/p^a` and elimination that never divides by a
//! non-unit: every pivot is an entry of minimal valuation, so the entries it
//! clears are exact multiples of it.

use serde::{Deserialize, Serialize};

use crate::padic::Zpk;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Builds a matrix column by column.
    pub fn from_columns(rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j));
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix, ring: &Zpk) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let cur = out.get(i, j);
                        out.set(i, j, ring.add(cur, ring.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64], ring: &Zpk) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| ring.add(acc, ring.mul(a, b)))
            })
            .collect()
    }

    pub fn vec_mul(&self, v: &[u64], ring: &Zpk) -> Vec<u64> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![0; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = ring.add(*o, ring.mul(a, self.get(i, j)));
            }
        }
        out
    }

    /// Reduces every entry modulo a smaller power of the same prime.
    pub fn reduce(&self, ring: &Zpk) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| ring.reduce_u64(x)).collect(),
        }
    }

    fn row_axpy(&mut self, target: usize, factor: u64, source: usize, from: usize, ring: &Zpk) {
        // row_target -= factor * row_source
        for j in from..self.cols {
            let s = self.get(source, j);
            if s != 0 {
                let t = self.get(target, j);
                self.set(target, j, ring.sub(t, ring.mul(factor, s)));
            }
        }
    }

    fn col_axpy(&mut self, target: usize, factor: u64, source: usize, ring: &Zpk) {
        // col_target -= factor * col_source
        for i in 0..self.rows {
            let s = self.get(i, source);
            if s != 0 {
                let t = self.get(i, target);
                self.set(i, target, ring.sub(t, ring.mul(factor, s)));
            }
        }
    }

    fn col_add_scaled(&mut self, target: usize, factor: u64, source: usize, ring: &Zpk) {
        for i in 0..self.rows {
            let s = self.get(i, source);
            if s != 0 {
                let t = self.get(i, target);
                self.set(i, target, ring.add(t, ring.mul(factor, s)));
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

/// Diagonal data of a Smith normal form over `Z/p^a`.
///
/// `divisor_valuations` has one entry per diagonal position
/// (`min(rows, cols)` of them), non-decreasing, with the cap `a` standing
/// for a divisor that is zero modulo `p^a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    pub exponent_cap: u32,
    pub rows: usize,
    pub cols: usize,
    pub divisor_valuations: Vec<u32>,
}

impl SmithForm {
    /// Number of cyclic summands `Z/p^a` in the cokernel, counting rows
    /// beyond the diagonal.
    pub fn saturated(&self) -> usize {
        self.divisor_valuations
            .iter()
            .filter(|&&v| v >= self.exponent_cap)
            .count()
            + self.rows.saturating_sub(self.cols)
    }

    /// `log_p` of the cokernel cardinality over `Z/p^a`.
    pub fn cokernel_exponent(&self) -> u64 {
        let diag: u64 = self
            .divisor_valuations
            .iter()
            .map(|&v| v.min(self.exponent_cap) as u64)
            .sum();
        diag + self.exponent_cap as u64 * self.rows.saturating_sub(self.cols) as u64
    }

    pub fn max_unsaturated(&self) -> Option<u32> {
        self.divisor_valuations
            .iter()
            .copied()
            .filter(|&v| v < self.exponent_cap)
            .max()
    }
}

/// A Smith decomposition `left * A * right = D` with optional transforms.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub form: SmithForm,
    pub left: Option<Matrix>,
    pub left_inverse: Option<Matrix>,
    pub right: Option<Matrix>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Transforms {
    pub left: bool,
    pub right: bool,
}

impl Transforms {
    pub const NONE: Transforms = Transforms {
        left: false,
        right: false,
    };
    pub const BOTH: Transforms = Transforms {
        left: true,
        right: true,
    };
}

/// Smith normal form over `Z/p^a` by minimal-valuation pivoting.
pub fn smith_over_zpa(matrix: &Matrix, ring: &Zpk) -> SmithForm {
    smith_decompose(matrix, ring, Transforms::NONE).form
}

pub fn smith_decompose(matrix: &Matrix, ring: &Zpk, track: Transforms) -> SmithDecomposition {
    let mut a = matrix.reduce(ring);
    let (rows, cols) = (a.rows, a.cols);
    let mut left = track.left.then(|| Matrix::identity(rows));
    let mut left_inv = track.left.then(|| Matrix::identity(rows));
    let mut right = track.right.then(|| Matrix::identity(cols));
    let cap = ring.exponent();
    let diag = rows.min(cols);
    let mut vals = Vec::with_capacity(diag);

    for k in 0..diag {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for i in k..rows {
            for j in k..cols {
                if let Some(v) = ring.valuation(a.get(i, j)) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                        if v == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            vals.extend(std::iter::repeat_n(cap, diag - k));
            break;
        };
        a.swap_rows(k, pi);
        if let Some(l) = left.as_mut() {
            l.swap_rows(k, pi);
        }
        if let Some(li) = left_inv.as_mut() {
            li.swap_cols(k, pi);
        }
        a.swap_cols(k, pj);
        if let Some(r) = right.as_mut() {
            r.swap_cols(k, pj);
        }

        let pivot = a.get(k, k);
        let unit_inv = ring
            .inv(ring.div_p_pow(pivot, v))
            .expect("pivot unit part is a unit");
        for i in k + 1..rows {
            let e = a.get(i, k);
            if e == 0 {
                continue;
            }
            let f = ring.mul(ring.div_p_pow(e, v), unit_inv);
            a.row_axpy(i, f, k, k, ring);
            if let Some(l) = left.as_mut() {
                l.row_axpy(i, f, k, 0, ring);
            }
            if let Some(li) = left_inv.as_mut() {
                li.col_add_scaled(k, f, i, ring);
            }
        }
        for j in k + 1..cols {
            let e = a.get(k, j);
            if e == 0 {
                continue;
            }
            let f = ring.mul(ring.div_p_pow(e, v), unit_inv);
            // Below row k column k is already clear, so only row k changes.
            a.set(k, j, 0);
            if let Some(r) = right.as_mut() {
                r.col_axpy(j, f, k, ring);
            }
        }
        vals.push(v);
    }

    SmithDecomposition {
        form: SmithForm {
            exponent_cap: cap,
            rows,
            cols,
            divisor_valuations: vals,
        },
        left,
        left_inverse: left_inv,
        right,
    }
}

/// Determinant over `Z/p^a` by column-wise minimal-valuation pivoting.
pub fn determinant(matrix: &Matrix, ring: &Zpk) -> u64 {
    assert_eq!(
        matrix.rows, matrix.cols,
        "determinant of a non-square matrix"
    );
    let n = matrix.rows;
    let mut a = matrix.reduce(ring);
    let mut det = 1 % ring.modulus();
    for k in 0..n {
        let pivot_row = (k..n)
            .filter_map(|i| ring.valuation(a.get(i, k)).map(|v| (v, i)))
            .min();
        let Some((v, pi)) = pivot_row else {
            return 0;
        };
        if pi != k {
            a.swap_rows(k, pi);
            det = ring.neg(det);
        }
        let pivot = a.get(k, k);
        let unit_inv = ring.inv(ring.div_p_pow(pivot, v)).expect("unit part");
        for i in k + 1..n {
            let e = a.get(i, k);
            if e != 0 {
                let f = ring.mul(ring.div_p_pow(e, v), unit_inv);
                a.row_axpy(i, f, k, k, ring);
            }
        }
        det = ring.mul(det, pivot);
    }
    det
}

/// A left null vector with a unit coordinate among the rows of `left`
/// that correspond to saturated diagonal positions.
pub fn cokernel_witness(
    decomposition: &SmithDecomposition,
    matrix: &Matrix,
    ring: &Zpk,
) -> Option<Vec<u64>> {
    let left = decomposition.left.as_ref()?;
    let form = &decomposition.form;
    let mut candidates: Vec<usize> = form
        .divisor_valuations
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= form.exponent_cap)
        .map(|(i, _)| i)
        .collect();
    candidates.extend(form.cols.min(form.rows)..form.rows);
    candidates.into_iter().find_map(|i| {
        let y = left.row(i).to_vec();
        let image = matrix.vec_mul(&y, ring);
        (image.iter().all(|&x| x == 0) && y.iter().any(|&x| ring.is_unit(x))).then_some(y)
    })
}

/// A right null vector with a unit coordinate among the columns of
/// `right` that correspond to saturated diagonal positions.
pub fn kernel_witness(
    decomposition: &SmithDecomposition,
    matrix: &Matrix,
    ring: &Zpk,
) -> Option<Vec<u64>> {
    let right = decomposition.right.as_ref()?;
    let form = &decomposition.form;
    let mut candidates: Vec<usize> = form
        .divisor_valuations
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= form.exponent_cap)
        .map(|(i, _)| i)
        .collect();
    candidates.extend(form.cols.min(form.rows)..form.cols);
    candidates.into_iter().find_map(|j| {
        let x = right.column(j);
        let image = matrix.mul_vec(&x, ring);
        (image.iter().all(|&e| e == 0) && x.iter().any(|&e| ring.is_unit(e))).then_some(x)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn z27() -> Zpk {
        Zpk::new(3, 3).unwrap()
    }

    #[test]
    fn smith_examples() {
        let r = z27();
        assert_eq!(
            smith_over_zpa(&Matrix::identity(2), &r).divisor_valuations,
            vec![0, 0]
        );
        let d = Matrix::from_rows(vec![vec![3, 0], vec![0, 1]]);
        assert_eq!(smith_over_zpa(&d, &r).divisor_valuations, vec![0, 1]);
        let m = Matrix::from_rows(vec![vec![3, 3], vec![3, 6]]);
        let s = smith_over_zpa(&m, &r);
        assert_eq!(s.divisor_valuations, vec![1, 1]);
        assert_eq!(s.cokernel_exponent(), 2);
        assert_eq!(s.saturated(), 0);
    }

    #[test]
    fn saturation_and_extra_rows() {
        let r = z27();
        let m = Matrix::from_rows(vec![vec![0, 0], vec![0, 9]]);
        let s = smith_over_zpa(&m, &r);
        assert_eq!(s.divisor_valuations, vec![2, 3]);
        assert_eq!(s.saturated(), 1);
        assert_eq!(s.cokernel_exponent(), 5);
        let tall = Matrix::from_rows(vec![vec![1], vec![0], vec![0]]);
        let s = smith_over_zpa(&tall, &r);
        assert_eq!(s.saturated(), 2);
        assert_eq!(s.cokernel_exponent(), 6);
    }

    #[test]
    fn transforms_reproduce_the_diagonal() {
        let r = Zpk::new(5, 6).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let (m, n) = (rng.gen_range(1..6), rng.gen_range(1..6));
            let a = Matrix::from_rows(
                (0..m)
                    .map(|_| {
                        (0..n)
                            .map(|_| 5 * rng.gen_range(0..40u64) % r.modulus())
                            .collect()
                    })
                    .collect(),
            );
            let dec = smith_decompose(&a, &r, Transforms::BOTH);
            let l = dec.left.as_ref().unwrap();
            let li = dec.left_inverse.as_ref().unwrap();
            assert_eq!(l.mul(li, &r), Matrix::identity(m));
            let d = l.mul(&a, &r).mul(dec.right.as_ref().unwrap(), &r);
            for i in 0..m {
                for j in 0..n {
                    if i == j {
                        assert_eq!(
                            r.valuation_capped(d.get(i, i)),
                            dec.form.divisor_valuations[i]
                        );
                    } else {
                        assert_eq!(d.get(i, j), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        fn cofactor(m: &[Vec<i128>]) -> i128 {
            if m.len() == 1 {
                return m[0][0];
            }
            (0..m.len())
                .map(|j| {
                    let minor: Vec<Vec<i128>> = m[1..]
                        .iter()
                        .map(|row| {
                            row.iter()
                                .enumerate()
                                .filter(|(k, _)| *k != j)
                                .map(|(_, &x)| x)
                                .collect()
                        })
                        .collect();
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    sign * m[0][j] * cofactor(&minor)
                })
                .sum()
        }
        let r = Zpk::new(3, 10).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.gen_range(1..5);
            let ints: Vec<Vec<i128>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| rng.gen_range(-30..30) * [1, 3, 9][rng.gen_range(0..3)])
                        .collect()
                })
                .collect();
            let m = Matrix::from_rows(
                ints.iter()
                    .map(|row| row.iter().map(|&x| r.reduce_i128(x)).collect())
                    .collect(),
            );
            assert_eq!(determinant(&m, &r), r.reduce_i128(cofactor(&ints)));
        }
    }

    fn random_unimodular(n: usize, ring: &Zpk, rng: &mut impl Rng) -> Matrix {
        let mut u = Matrix::identity(n);
        for _ in 0..3 * n {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i != j {
                let f = rng.gen_range(0..ring.modulus());
                u.row_axpy(i, f, j, 0, ring);
            }
        }
        u
    }

    proptest! {
        #[test]
        fn cokernel_invariant_under_unimodular_change(seed: u64) {
            let ring = Zpk::new(3, 6).unwrap();
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let (m, n) = (rng.gen_range(1..5), rng.gen_range(1..5));
            let a = Matrix::from_rows((0..m).map(|_| (0..n).map(|_| ring.reduce_u64(rng.gen::<u64>() % 50 * [1, 3, 9, 27][rng.gen_range(0..4)])).collect()).collect());
            let base = smith_over_zpa(&a, &ring);
            let u = random_unimodular(m, &ring, &mut rng);
            let v = random_unimodular(n, &ring, &mut rng);
            let b = u.mul(&a, &ring).mul(&v, &ring);
            let changed = smith_over_zpa(&b, &ring);
            prop_assert_eq!(base.cokernel_exponent(), changed.cokernel_exponent());
            prop_assert_eq!(base.divisor_valuations, changed.divisor_valuations);
        }
    }
}
