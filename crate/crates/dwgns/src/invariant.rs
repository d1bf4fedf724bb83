//! The Dijkgraaf-Witten state: exact rational invariants of labelled links
//! in `S^3`, of closed manifolds given by surgery presentations, and of
//! general homology presentations with boundary constraints, plus the local
//! move rewriting engine.
//!
//! For abelian `G`, bundles on a manifold `M` are homomorphisms
//! `H_1(M) -> G`, each with automorphism group of order `|G|` per connected
//! ambient component (conjugation is trivial). The groupoid cardinality of
//! the bundle groupoid is therefore
//! `(#homomorphisms) / |G|^(manifold components)`, which for the empty link
//! in `S^3` gives exactly `1/|G|`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::link::{Component, FormalSum, Label, LabeledLinkingData};
use crate::zmatrix::{count_solutions, IntMatrix};
use crate::Rational;

/// A presentation of the first homology of a (possibly cut-open) manifold:
/// `generators` meridian classes, integer relation rows, and boundary
/// constraint rows `phi(sum_j row_j mu_j) = value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyPresentation {
    generators: usize,
    relations: IntMatrix,
    constraints: Vec<(Vec<BigInt>, GroupElement)>,
    manifold_components: usize,
}

impl HomologyPresentation {
    pub fn new(
        generators: usize,
        relations: IntMatrix,
        constraints: Vec<(Vec<BigInt>, GroupElement)>,
        manifold_components: usize,
    ) -> Result<Self> {
        if relations.cols() != generators {
            return Err(Error::Dimension(format!(
                "relation rows of length {} for {generators} generators",
                relations.cols()
            )));
        }
        if let Some(bad) = constraints
            .iter()
            .position(|(row, _)| row.len() != generators)
        {
            return Err(Error::Dimension(format!(
                "constraint row {bad} has wrong length for {generators} generators"
            )));
        }
        Ok(HomologyPresentation {
            generators,
            relations,
            constraints,
            manifold_components,
        })
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn constraints(&self) -> &[(Vec<BigInt>, GroupElement)] {
        &self.constraints
    }

    pub fn manifold_components(&self) -> usize {
        self.manifold_components
    }
}

fn check_labels(d: &LabeledLinkingData, g: &FiniteAbelianGroup) -> Result<()> {
    if d.labels_belong_to(g) {
        Ok(())
    } else {
        Err(Error::Labels(format!("link labels do not belong to {g}")))
    }
}

fn order_rational(g: &FiniteAbelianGroup) -> Rational {
    Rational::from(BigInt::from(g.order()))
}

/// The boundary class of component `i`: `sum_j m[i][j] * a_j` evaluated in
/// `G`, where `a_j` is the meridian holonomy of component `j`.
fn boundary_class(
    d: &LabeledLinkingData,
    g: &FiniteAbelianGroup,
    i: usize,
) -> Result<GroupElement> {
    let mut acc = g.zero();
    for j in 0..d.component_count() {
        let a_j = &d.wilson_label(j)?.a;
        let term = g.scalar_mul(&d.matrix()[(i, j)], a_j)?;
        acc = g.add(&acc, &term)?;
    }
    Ok(acc)
}

/// The Dijkgraaf-Witten state of an all-Wilson link in `S^3`: `1/|G|` when
/// every longitude condition `b_i = sum_j m[i][j] a_j` holds in `G`, zero
/// otherwise.
pub fn invariant_s3(d: &LabeledLinkingData, g: &FiniteAbelianGroup) -> Result<Rational> {
    if !d.is_all_wilson() {
        return Err(Error::Contract(
            "invariant_s3 takes all-Wilson data; use invariant_closed for surgery data".into(),
        ));
    }
    if d.manifold_components() != 1 {
        return Err(Error::Contract(format!(
            "invariant_s3 expects a single S^3 ambient component, got {}",
            d.manifold_components()
        )));
    }
    check_labels(d, g)?;
    for i in 0..d.component_count() {
        if boundary_class(d, g, i)? != d.wilson_label(i)?.b {
            return Ok(Rational::zero());
        }
    }
    Ok(order_rational(g).recip())
}

/// The meridian presentation of the manifold described by linking data:
/// one generator per component; a relation row `m[i][.]` for every surgery
/// component (its meridian disk bounds after surgery); and for every Wilson
/// component the two constraints `phi(mu_i) = a_i` and
/// `phi(sum_j m[i][j] mu_j) = b_i`.
pub fn meridian_presentation(d: &LabeledLinkingData) -> Result<HomologyPresentation> {
    let n = d.component_count();
    let mut relation_rows: Vec<Vec<BigInt>> = Vec::new();
    let mut constraints: Vec<(Vec<BigInt>, GroupElement)> = Vec::new();
    for (i, comp) in d.components().iter().enumerate() {
        let row: Vec<BigInt> = (0..n).map(|j| d.matrix()[(i, j)].clone()).collect();
        match comp {
            Component::Surgery => relation_rows.push(row),
            Component::Wilson(Label { a, b }) => {
                let mut unit = vec![BigInt::zero(); n];
                unit[i] = BigInt::one();
                constraints.push((unit, a.clone()));
                constraints.push((row, b.clone()));
            }
        }
    }
    let relations = IntMatrix::from_fn(relation_rows.len(), n, |i, j| relation_rows[i][j].clone());
    HomologyPresentation::new(n, relations, constraints, d.manifold_components())
}

/// The Dijkgraaf-Witten state of the closed manifold obtained by integer
/// surgery on the surgery components, containing the Wilson components as a
/// ribbon link. Reduces to the bundle-groupoid cardinality of the meridian
/// presentation.
pub fn invariant_closed(d: &LabeledLinkingData, g: &FiniteAbelianGroup) -> Result<Rational> {
    check_labels(d, g)?;
    let p = meridian_presentation(d)?;
    invariant_presentation(&p, g)
}

/// Groupoid cardinality of a constrained homology presentation: the number
/// of `phi` in `G^generators` annihilating every relation row and matching
/// every constraint row, divided by `|G|^(manifold components)`.
pub fn invariant_presentation(
    p: &HomologyPresentation,
    g: &FiniteAbelianGroup,
) -> Result<Rational> {
    let rows = p.relations().rows() + p.constraints().len();
    let mut stacked = IntMatrix::zeros(rows, p.generators());
    let mut targets = Vec::with_capacity(rows);
    for i in 0..p.relations().rows() {
        for j in 0..p.generators() {
            stacked[(i, j)] = p.relations()[(i, j)].clone();
        }
        targets.push(g.zero());
    }
    for (k, (row, value)) in p.constraints().iter().enumerate() {
        if !g.contains(value) {
            return Err(Error::Dimension(format!(
                "constraint value {k} does not belong to {g}"
            )));
        }
        let i = p.relations().rows() + k;
        for j in 0..p.generators() {
            stacked[(i, j)] = row[j].clone();
        }
        targets.push(value.clone());
    }
    let count = count_solutions(&stacked, &targets, g)?;
    let denom = BigInt::from(g.order()).pow(p.manifold_components() as u32);
    Ok(Rational::new(count, denom))
}

/// The surgery constant: `I(S^3) / I(S^1 x S^2)`, computed from the two
/// surgery presentations (empty link; 0-framed unknot), never hard-coded.
pub fn eta(g: &FiniteAbelianGroup) -> Rational {
    let s3 = LabeledLinkingData::s3();
    let s1s2 = LabeledLinkingData::new(IntMatrix::zeros(1, 1), vec![Component::Surgery], 1)
        .expect("0-framed unknot surgery datum is well-formed");
    let num = invariant_closed(&s3, g).expect("S^3 invariant is defined for every group");
    let den = invariant_closed(&s1s2, g).expect("S^1 x S^2 invariant is defined for every group");
    num / den
}

/// A local move on labelled linking data. All four preserve the
/// Dijkgraaf-Witten state (the parallel split as the sum over its terms).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// Removes one complete twist of a Wilson component: a right twist takes
    /// `m[i][i] -= 1` and `(a, b) -> (a, b - a)`, a left twist the opposite
    /// signs.
    Twist { component: usize, right: bool },
    /// Splits a Wilson component into two parallel copies, summed over all
    /// splittings `b = b1 + b2` of its longitude label. Each copy inherits
    /// the linking numbers of the original; mutual linking and both framings
    /// equal the original framing. The second copy is appended as the last
    /// component.
    Split { component: usize },
    /// Removes an adjacent over/under crossing pair between Wilson
    /// components `i` and `j` (possibly equal): `m[i][j]` and `m[j][i]`
    /// change by `sign`, and the longitude labels pick up `sign * a` of the
    /// other component.
    CrossingPair { i: usize, j: usize, sign: i8 },
    /// Adds a small 0-framed ring labelled `(c, a)` once around Wilson
    /// component `i` (labelled `(a, b)`) while shifting its label to
    /// `(a, b + c)`.
    Ring { component: usize, c: GroupElement },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Twist {
                component,
                right: true,
            } => {
                write!(f, "remove right twist on component {component}")
            }
            Move::Twist {
                component,
                right: false,
            } => {
                write!(f, "remove left twist on component {component}")
            }
            Move::Split { component } => write!(f, "split component {component}"),
            Move::CrossingPair { i, j, sign } => {
                write!(
                    f,
                    "remove crossing pair ({sign:+}) between components {i} and {j}"
                )
            }
            Move::Ring { component, c } => {
                write!(f, "add ring {c} around component {component}")
            }
        }
    }
}

fn wilson_target(d: &LabeledLinkingData, i: usize) -> Result<&Label> {
    d.check_index(i)?;
    match &d.components()[i] {
        Component::Wilson(l) => Ok(l),
        Component::Surgery => Err(Error::Labels(format!(
            "moves rewrite holonomy labels; component {i} is a surgery component"
        ))),
    }
}

/// Applies a local move, returning the resulting formal sum (a single term
/// for every move except [`Move::Split`], which has `|G|` terms).
pub fn apply_move(d: &LabeledLinkingData, mv: &Move, g: &FiniteAbelianGroup) -> Result<FormalSum> {
    check_labels(d, g)?;
    match mv {
        Move::Twist { component, right } => {
            let i = *component;
            let label = wilson_target(d, i)?.clone();
            let delta = if *right { -1i64 } else { 1 };
            let mut out = d.clone();
            out.set_entry(i, i, d.matrix()[(i, i)].clone() + delta);
            let b = if *right {
                g.sub(&label.b, &label.a)?
            } else {
                g.add(&label.b, &label.a)?
            };
            out.set_label(i, Label::new(label.a, b));
            Ok(FormalSum::singleton(out))
        }
        Move::CrossingPair { i, j, sign } => {
            if *sign != 1 && *sign != -1 {
                return Err(Error::Contract(format!(
                    "crossing-pair sign must be +1 or -1, got {sign}"
                )));
            }
            let li = wilson_target(d, *i)?.clone();
            let lj = wilson_target(d, *j)?.clone();
            let s = BigInt::from(*sign);
            let mut out = d.clone();
            if i == j {
                // A self clasp moves the framing by two and the label twice.
                let two_s = BigInt::from(2) * &s;
                out.set_entry(*i, *i, d.matrix()[(*i, *i)].clone() + &two_s);
                let shift = g.scalar_mul(&two_s, &li.a)?;
                out.set_label(*i, Label::new(li.a.clone(), g.add(&li.b, &shift)?));
            } else {
                out.set_entry(*i, *j, d.matrix()[(*i, *j)].clone() + &s);
                let bi = g.add(&li.b, &g.scalar_mul(&s, &lj.a)?)?;
                let bj = g.add(&lj.b, &g.scalar_mul(&s, &li.a)?)?;
                out.set_label(*i, Label::new(li.a, bi));
                out.set_label(*j, Label::new(lj.a, bj));
            }
            Ok(FormalSum::singleton(out))
        }
        Move::Ring { component, c } => {
            let i = *component;
            let label = wilson_target(d, i)?.clone();
            if !g.contains(c) {
                return Err(Error::Dimension(format!(
                    "ring label {c} does not belong to {g}"
                )));
            }
            let n = d.component_count();
            let mut m = IntMatrix::from_fn(n + 1, n + 1, |r, s| {
                if r < n && s < n {
                    d.matrix()[(r, s)].clone()
                } else {
                    BigInt::zero()
                }
            });
            m[(i, n)] = BigInt::one();
            m[(n, i)] = BigInt::one();
            let mut components = d.components().to_vec();
            components.push(Component::Wilson(Label::new(c.clone(), label.a.clone())));
            let mut out = LabeledLinkingData::new(m, components, d.manifold_components())?;
            out.set_label(i, Label::new(label.a, g.add(&label.b, c)?));
            Ok(FormalSum::singleton(out))
        }
        Move::Split { component } => {
            let i = *component;
            let label = wilson_target(d, i)?.clone();
            let n = d.component_count();
            let framing = d.matrix()[(i, i)].clone();
            let mut terms = Vec::with_capacity(g.order() as usize);
            for b1 in g.enumerate() {
                let b2 = g.sub(&label.b, &b1)?;
                let m = IntMatrix::from_fn(n + 1, n + 1, |r, s| {
                    let rr = if r == n { i } else { r };
                    let ss = if s == n { i } else { s };
                    d.matrix()[(rr, ss)].clone()
                });
                // The copy-copy block of that matrix is the original framing
                // in all four slots: framings and mutual linking agree.
                debug_assert_eq!(m[(n, n)], framing);
                let mut components = d.components().to_vec();
                components.push(Component::Wilson(Label::new(label.a.clone(), b2)));
                let mut out = LabeledLinkingData::new(m, components, d.manifold_components())?;
                out.set_label(i, Label::new(label.a.clone(), b1));
                terms.push((Rational::one(), out));
            }
            Ok(FormalSum::new(terms))
        }
    }
}

/// Reduces all-Wilson data in `S^3` to zero linking matrix by crossing-pair
/// moves (off-diagonal entries) and twist moves (framings), returning the
/// reduced single-term sum and the move trace. Evaluating the result
/// (`1/|G|` iff every longitude label vanishes) reproduces [`invariant_s3`].
pub fn reduce(d: &LabeledLinkingData, g: &FiniteAbelianGroup) -> Result<(FormalSum, Vec<Move>)> {
    if !d.is_all_wilson() || d.manifold_components() != 1 {
        return Err(Error::Contract(
            "reduce takes all-Wilson data in a single S^3".into(),
        ));
    }
    check_labels(d, g)?;
    let mut current = d.clone();
    let mut trace = Vec::new();
    let n = current.component_count();

    let mut step = |cur: &LabeledLinkingData, mv: Move| -> Result<LabeledLinkingData> {
        let sum = apply_move(cur, &mv, g)?;
        debug_assert_eq!(sum.len(), 1);
        trace.push(mv);
        Ok(sum.terms()[0].1.clone())
    };

    for i in 0..n {
        for j in i + 1..n {
            while !current.matrix()[(i, j)].is_zero() {
                let sign = if current.matrix()[(i, j)].is_positive() {
                    -1
                } else {
                    1
                };
                current = step(&current, Move::CrossingPair { i, j, sign })?;
            }
        }
    }
    for i in 0..n {
        while !current.matrix()[(i, i)].is_zero() {
            let right = current.matrix()[(i, i)].is_positive();
            current = step(
                &current,
                Move::Twist {
                    component: i,
                    right,
                },
            )?;
        }
    }
    debug_assert!(current.matrix().is_zero());
    Ok((FormalSum::singleton(current), trace))
}
