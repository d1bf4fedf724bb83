//! Exact integer matrix algebra: Smith normal form and counting solutions of
//! integer linear systems with values in a finite abelian group.
//!
//! All entries are arbitrary-precision integers; SNF intermediates can blow
//! up even on small inputs and the radical computations downstream need
//! exactness.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};

/// Default cap on brute-force search spaces, overridable through the
/// `DWGNS_MAX_ENUM` environment variable.
pub const DEFAULT_MAX_ENUM: u64 = 10_000_000;

/// Current brute-force enumeration guard.
pub fn enumeration_guard() -> u64 {
    std::env::var("DWGNS_MAX_ENUM")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_ENUM)
}

/// A dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    /// The `rows x cols` zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    /// The `n x n` identity.
    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows in matrix literal".into()));
        }
        let data = rows.iter().flatten().map(|&e| BigInt::from(e)).collect();
        Ok(IntMatrix {
            rows: rows.len(),
            cols: ncols,
            data,
        })
    }

    /// Builds a matrix entrywise.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(IntMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| &self[(i, k)] * &other[(k, j)]).sum()
        }))
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect())
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

    /// `row[target] += factor * row[source]`.
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let delta = factor * &self[(source, j)];
            self[(target, j)] += delta;
        }
    }

    /// `col[target] += factor * col[source]`.
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let delta = factor * &self[(i, source)];
            self[(i, target)] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num / &prev;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        Ok(sign * m[(n - 1, n - 1)].clone())
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// A Smith normal form decomposition `U * A * V = D` with `U`, `V`
/// unimodular and `D` diagonal, `d_1 | d_2 | ...`, diagonal non-negative.
#[derive(Debug, Clone)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Checks every decomposition postcondition against the original matrix.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let shape_ok = self.u.rows() == a.rows()
            && self.u.cols() == a.rows()
            && self.v.rows() == a.cols()
            && self.v.cols() == a.cols()
            && self.d.rows() == a.rows()
            && self.d.cols() == a.cols();
        if !shape_ok {
            return false;
        }
        let product = match self.u.mul(a).and_then(|ua| ua.mul(&self.v)) {
            Ok(p) => p,
            Err(_) => return false,
        };
        if product != self.d {
            return false;
        }
        let unimodular = |m: &IntMatrix| {
            m.determinant()
                .map(|det| det.abs().is_one())
                .unwrap_or(false)
        };
        if !unimodular(&self.u) || !unimodular(&self.v) {
            return false;
        }
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                if i != j && !self.d[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        let n = self.d.rows().min(self.d.cols());
        for k in 0..n {
            if self.d[(k, k)].is_negative() {
                return false;
            }
            if k + 1 < n {
                let (a, b) = (&self.d[(k, k)], &self.d[(k + 1, k + 1)]);
                let divides = if a.is_zero() {
                    b.is_zero()
                } else {
                    (b % a).is_zero()
                };
                if !divides {
                    return false;
                }
            }
        }
        true
    }

    /// Diagonal entries of `D` up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|k| self.d[(k, k)].clone()).collect()
    }
}

/// Smallest-magnitude nonzero entry of the trailing submatrix starting at
/// `(k, k)`, ties broken row-major. `None` if the submatrix is zero.
fn find_pivot(m: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..m.rows() {
        for j in k..m.cols() {
            if m[(i, j)].is_zero() {
                continue;
            }
            match best {
                Some(b) if m[b].abs() <= m[(i, j)].abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Computes the Smith normal form of `A`, returning `U, D, V` with
/// `U * A * V = D`. Deterministic for a given input: pivots are chosen by
/// smallest magnitude, ties broken row-major.
pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let limit = rows.min(cols);
    let mut k = 0;
    while k < limit {
        let Some((pi, pj)) = find_pivot(&d, k) else {
            break;
        };
        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);

        loop {
            // Clear column k below the pivot. Truncated division leaves
            // remainders strictly smaller than the pivot.
            for i in k + 1..rows {
                if !d[(i, k)].is_zero() {
                    let q = -(&d[(i, k)] / &d[(k, k)]);
                    d.add_row_multiple(i, k, &q);
                    u.add_row_multiple(i, k, &q);
                }
            }
            if let Some(i) = smallest_in_col(&d, k) {
                d.swap_rows(k, i);
                u.swap_rows(k, i);
                continue;
            }

            // Clear row k right of the pivot. Column k stays zero below the
            // pivot, so these column operations cannot disturb it.
            for j in k + 1..cols {
                if !d[(k, j)].is_zero() {
                    let q = -(&d[(k, j)] / &d[(k, k)]);
                    d.add_col_multiple(j, k, &q);
                    v.add_col_multiple(j, k, &q);
                }
            }
            if let Some(j) = smallest_in_row(&d, k) {
                d.swap_cols(k, j);
                v.swap_cols(k, j);
                continue;
            }

            // Pivot must divide the remaining submatrix for the divisibility
            // chain; fold an offending row in and keep reducing.
            if let Some(i) = first_nondivisible_row(&d, k) {
                let one = BigInt::one();
                d.add_row_multiple(k, i, &one);
                u.add_row_multiple(k, i, &one);
                continue;
            }
            break;
        }
        k += 1;
    }

    for k in 0..limit {
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
    }

    let snf = SnfDecomposition { u, d, v };
    debug_assert!(snf.verify(a), "SNF postcondition failed");
    snf
}

fn smallest_in_col(d: &IntMatrix, k: usize) -> Option<usize> {
    (k + 1..d.rows())
        .filter(|&i| !d[(i, k)].is_zero())
        .min_by_key(|&i| d[(i, k)].abs())
}

fn smallest_in_row(d: &IntMatrix, k: usize) -> Option<usize> {
    (k + 1..d.cols())
        .filter(|&j| !d[(k, j)].is_zero())
        .min_by_key(|&j| d[(k, j)].abs())
}

fn first_nondivisible_row(d: &IntMatrix, k: usize) -> Option<usize> {
    let pivot = d[(k, k)].clone();
    for i in k + 1..d.rows() {
        for j in k + 1..d.cols() {
            if !(&d[(i, j)] % &pivot).is_zero() {
                return Some(i);
            }
        }
    }
    None
}

fn check_system(m: &IntMatrix, t: &[GroupElement], g: &FiniteAbelianGroup) -> Result<()> {
    if t.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "{} target values against {} rows",
            t.len(),
            m.rows()
        )));
    }
    for (i, e) in t.iter().enumerate() {
        if !g.contains(e) {
            return Err(Error::Dimension(format!(
                "target value {i} does not belong to {g}"
            )));
        }
    }
    Ok(())
}

/// Exact number of `x` in `G^cols` with `sum_j M[i][j] * x_j = t_i` for all
/// rows `i`.
///
/// The count decomposes over the cyclic factors `Z_d` of `G`: after a Smith
/// substitution each diagonal congruence `d_ii * y = s (mod d)` contributes
/// `gcd(d_ii, d)` solutions when `gcd(d_ii, d) | s` and zero otherwise, zero
/// rows force `s = 0`, and columns beyond the rows are free (factor `d`).
pub fn count_solutions(
    m: &IntMatrix,
    t: &[GroupElement],
    g: &FiniteAbelianGroup,
) -> Result<BigInt> {
    check_system(m, t, g)?;
    let snf = smith_normal_form(m);
    let mut total = BigInt::one();
    for (f, &d_f) in g.orders().iter().enumerate() {
        let modulus = BigInt::from(d_f);
        let t_f: Vec<BigInt> = t.iter().map(|e| BigInt::from(e.residues()[f])).collect();
        let s = snf.u.mul_vec(&t_f)?;
        let mut factor = BigInt::one();
        for (i, s_i) in s.iter().enumerate() {
            let rhs = s_i.mod_floor(&modulus);
            if i < m.cols() {
                // One variable per diagonal equation d_ii * z = s (mod d).
                let gcd = snf.d[(i, i)].gcd(&modulus);
                if (&rhs % &gcd).is_zero() {
                    factor *= &gcd;
                } else {
                    factor = BigInt::zero();
                    break;
                }
            } else if !rhs.is_zero() {
                // Zero row with no variable: pure consistency condition.
                factor = BigInt::zero();
                break;
            }
        }
        if m.cols() > m.rows() {
            factor *= modulus.pow((m.cols() - m.rows()) as u32);
        }
        total *= factor;
        if total.is_zero() {
            break;
        }
    }
    Ok(total)
}

/// Same contract as [`count_solutions`], computed by exhaustive enumeration
/// of `G^cols`. Serves as the independent oracle. Refuses search spaces
/// larger than [`enumeration_guard`].
pub fn brute_force_count(
    m: &IntMatrix,
    t: &[GroupElement],
    g: &FiniteAbelianGroup,
) -> Result<BigInt> {
    check_system(m, t, g)?;
    let guard = enumeration_guard();
    let mut space: u64 = 1;
    for _ in 0..m.cols() {
        space = space
            .checked_mul(g.order())
            .filter(|&s| s <= guard)
            .ok_or_else(|| {
                Error::Guard(format!(
                    "brute-force space |G|^{} exceeds {guard} (set DWGNS_MAX_ENUM to raise)",
                    m.cols()
                ))
            })?;
    }

    let elements = if m.cols() > 0 {
        g.enumerate()
    } else {
        Vec::new()
    };
    let mut indices = vec![0usize; m.cols()];
    let mut count = BigInt::zero();
    loop {
        let assignment: Vec<&GroupElement> = indices.iter().map(|&ix| &elements[ix]).collect();
        let mut ok = true;
        for i in 0..m.rows() {
            let mut acc = g.zero();
            for (j, x) in assignment.iter().enumerate() {
                let term = g.scalar_mul(&m[(i, j)], x)?;
                acc = g.add(&acc, &term)?;
            }
            if acc != t[i] {
                ok = false;
                break;
            }
        }
        if ok {
            count += 1;
        }

        // Odometer over G^cols.
        let mut pos = m.cols();
        loop {
            if pos == 0 {
                return Ok(count);
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < elements.len() {
                break;
            }
            indices[pos] = 0;
        }
    }
}
