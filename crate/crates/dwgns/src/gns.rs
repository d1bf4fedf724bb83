//! The generic GNS / universal construction layer: pairing matrices built
//! from a state, exact rank and radical computation, and the rank-level
//! checks of multiplicativity, lax monoidality and symmetry.
//!
//! A state on the endomorphisms of the unit object induces, for every
//! object, a bilinear pairing `(f, g) -> I(g o f)` between the free vector
//! spaces on in- and out-morphisms. The quotient by the radical of this
//! pairing is the vector space the construction assigns to the object; its
//! dimension is the rank of the pairing matrix. This module never
//! materializes infinite morphism sets: callers supply finite generator
//! families known to span.

use std::fmt;
use std::ops::Index;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// A finite ordered family of generator descriptors (morphisms from or to
/// the unit object, in the cobordism application).
#[derive(Debug, Clone)]
pub struct GeneratorFamily<T> {
    items: Vec<T>,
}

impl<T> GeneratorFamily<T> {
    pub fn new(items: Vec<T>) -> Self {
        GeneratorFamily { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.items.iter()
    }

    /// The family of all ordered pairs, in row-major order: the generator
    /// family of a tensor product of objects.
    pub fn product<'a, U>(
        &'a self,
        other: &'a GeneratorFamily<U>,
    ) -> GeneratorFamily<(&'a T, &'a U)> {
        let items = self
            .items
            .iter()
            .flat_map(|x| other.items.iter().map(move |y| (x, y)))
            .collect();
        GeneratorFamily { items }
    }
}

/// A dense matrix of exact rationals: rows indexed by in-generators, columns
/// by out-generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl PairingMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PairingMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = PairingMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
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

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> PairingMatrix {
        PairingMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Entrywise scaling.
    pub fn scaled(&self, factor: &Rational) -> PairingMatrix {
        PairingMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * factor)
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        rank_and_radical(self).0
    }

    /// True iff every entry is 0 or 1 with exactly one 1 per row and per
    /// column (a permutation matrix).
    pub fn is_permutation(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let one = Rational::one();
        let mut col_seen = vec![false; self.cols];
        for i in 0..self.rows {
            let mut row_ones = 0;
            for j in 0..self.cols {
                let e = &self[(i, j)];
                if e == &one {
                    row_ones += 1;
                    if std::mem::replace(&mut col_seen[j], true) {
                        return false;
                    }
                } else if !e.is_zero() {
                    return false;
                }
            }
            if row_ones != 1 {
                return false;
            }
        }
        true
    }

    /// JSON export: entries as `"p/q"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].to_string()).collect())
            .collect();
        serde_json::json!(rows)
    }
}

impl Index<(usize, usize)> for PairingMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for PairingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Evaluates the full pairing matrix `P[f][g] = closure(f, g)` of two
/// generator families under a state closure. Entries are exact; a closure
/// failure is reported with the offending generator pair.
pub fn pairing_matrix<A, B>(
    fin: &GeneratorFamily<A>,
    fout: &GeneratorFamily<B>,
    closure: impl Fn(&A, &B) -> Result<Rational>,
) -> Result<PairingMatrix> {
    if fin.is_empty() || fout.is_empty() {
        return Err(Error::Contract(
            "pairing_matrix needs nonempty generator families".into(),
        ));
    }
    let mut m = PairingMatrix::zeros(fin.len(), fout.len());
    for (i, f) in fin.iter().enumerate() {
        for (j, g) in fout.iter().enumerate() {
            let v = closure(f, g).map_err(|e| Error::Closure {
                row: i,
                col: j,
                source: Box::new(e),
            })?;
            m.set(i, j, v);
        }
    }
    Ok(m)
}

/// Exact rank of the pairing and a basis of its left radical (row vectors
/// pairing to zero against every out-generator). The quotient dimension of
/// the GNS space equals the rank. Gaussian elimination with full pivoting
/// over the rationals; radical vectors are normalized to leading
/// coefficient 1 for determinism.
pub fn rank_and_radical(p: &PairingMatrix) -> (usize, Vec<Vec<Rational>>) {
    let (rows, cols) = (p.rows(), p.cols());
    // Work on [P | I]; row operations track the left transform, column
    // swaps stay inside the P block and do not affect left-null vectors.
    let mut work: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rational> = (0..cols).map(|j| p[(i, j)].clone()).collect();
            row.extend((0..rows).map(|k| {
                if k == i {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            row
        })
        .collect();

    let mut rank = 0;
    while rank < rows && rank < cols {
        // Full pivoting: largest absolute value in the trailing block,
        // ties broken row-major.
        let mut pivot: Option<(usize, usize)> = None;
        for i in rank..rows {
            for j in rank..cols {
                if work[i][j].is_zero() {
                    continue;
                }
                match pivot {
                    Some((pi, pj)) if work[pi][pj].abs() >= work[i][j].abs() => {}
                    _ => pivot = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        work.swap(rank, pi);
        for row in work.iter_mut() {
            row.swap(rank, pj);
        }
        let pivot_row = work[rank].clone();
        let pivot_value = pivot_row[rank].clone();
        for (i, row) in work.iter_mut().enumerate() {
            if i == rank || row[rank].is_zero() {
                continue;
            }
            let factor = &row[rank] / &pivot_value;
            for (dst, src) in row.iter_mut().zip(&pivot_row) {
                *dst -= &factor * src;
            }
        }
        rank += 1;
    }

    let mut radical = Vec::new();
    for row in work.iter().skip(rank) {
        debug_assert!(row[..cols].iter().all(Zero::is_zero));
        let mut vec: Vec<Rational> = row[cols..].to_vec();
        if let Some(lead) = vec.iter().find(|v| !v.is_zero()).cloned() {
            for v in vec.iter_mut() {
                *v /= lead.clone();
            }
        }
        radical.push(vec);
    }
    (rank, radical)
}

/// Result of a multiplicativity check of a state.
#[derive(Debug, Clone)]
pub struct MultiplicativityReport {
    /// True iff the unit evaluates to 1 and every sampled pair is
    /// multiplicative.
    pub holds: bool,
    /// Value of the state on the unit (empty) object.
    pub unit_value: Rational,
    /// First failing pair, if any.
    pub counterexample: Option<MultiplicativityCounterexample>,
}

/// A sampled pair on which multiplicativity failed.
#[derive(Debug, Clone)]
pub struct MultiplicativityCounterexample {
    pub index: usize,
    pub union_value: Rational,
    pub product: Rational,
}

/// Checks that a state is a morphism of unitary monoids on the sampled
/// pairs: `I(unit) = 1` and `I(x u y) = I(x) * I(y)` for every sample,
/// where `combine` is the monoid operation (disjoint union).
pub fn check_multiplicative<T>(
    eval: impl Fn(&T) -> Result<Rational>,
    combine: impl Fn(&T, &T) -> T,
    unit: &T,
    samples: &[(T, T)],
) -> Result<MultiplicativityReport> {
    let unit_value = eval(unit)?;
    let mut counterexample = None;
    for (index, (x, y)) in samples.iter().enumerate() {
        let union_value = eval(&combine(x, y))?;
        let product = eval(x)? * eval(y)?;
        if union_value != product {
            counterexample = Some(MultiplicativityCounterexample {
                index,
                union_value,
                product,
            });
            break;
        }
    }
    Ok(MultiplicativityReport {
        holds: unit_value.is_one() && counterexample.is_none(),
        unit_value,
        counterexample,
    })
}

/// Rank-level monoidality check: the comparison map from the tensor product
/// of two GNS spaces into the GNS space of the tensor object is an
/// isomorphism iff product generators span, i.e. iff
/// `rank(P12) = rank(P1) * rank(P2)`.
pub fn tensor_rank_check(
    p1: &PairingMatrix,
    p2: &PairingMatrix,
    p12: &PairingMatrix,
) -> Result<bool> {
    if p12.rows() != p1.rows() * p2.rows() || p12.cols() != p1.cols() * p2.cols() {
        return Err(Error::Dimension(format!(
            "product pairing is {}x{}, expected {}x{}",
            p12.rows(),
            p12.cols(),
            p1.rows() * p2.rows(),
            p1.cols() * p2.cols()
        )));
    }
    Ok(p12.rank() == p1.rank() * p2.rank())
}

/// Solves `x^T P = w^T` exactly (the coordinate problem against a pairing
/// matrix). Free variables are set to zero; an inconsistent system is an
/// error.
pub fn solve_against_pairing(p: &PairingMatrix, w: &[Rational]) -> Result<Vec<Rational>> {
    if w.len() != p.cols() {
        return Err(Error::Dimension(format!(
            "{} pairing values against {} out-generators",
            w.len(),
            p.cols()
        )));
    }
    // Row-reduce [P^T | w].
    let (rows, cols) = (p.cols(), p.rows());
    let mut work: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rational> = (0..cols).map(|j| p[(j, i)].clone()).collect();
            row.push(w[i].clone());
            row
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !work[i][c].is_zero()) else {
            continue;
        };
        work.swap(r, pr);
        let pivot_row = work[r].clone();
        let pivot = pivot_row[c].clone();
        for (i, row) in work.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = &row[c] / &pivot;
            for (dst, src) in row.iter_mut().zip(&pivot_row).skip(c) {
                *dst -= &factor * src;
            }
        }
        pivot_cols.push((r, c));
        r += 1;
        if r == rows {
            break;
        }
    }
    if work.iter().skip(r).any(|row| !row[cols].is_zero()) {
        return Err(Error::Inconsistent(
            "pairing values are not in the row space of the pairing matrix".into(),
        ));
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, col) in pivot_cols {
        x[col] = &work[row][cols] / &work[row][col];
    }
    Ok(x)
}
