//! Shared helpers for the integration suites: random instance generators
//! and the independent oracles the acceptance criteria compare against.

#![allow(dead_code)]

use num_bigint::BigInt;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use dwgns::group::{FiniteAbelianGroup, GroupElement};
use dwgns::link::{Component, Label, LabeledLinkingData};
use dwgns::tqft::{BasisElement, SurfaceObject};
use dwgns::zmatrix::{brute_force_count, IntMatrix};
use dwgns::Rational;

pub fn group(spec: &str) -> FiniteAbelianGroup {
    FiniteAbelianGroup::parse(spec).unwrap()
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn random_element(rng: &mut ChaCha8Rng, g: &FiniteAbelianGroup) -> GroupElement {
    g.element_at(rng.random_range(0..g.order()))
}

pub fn random_label(rng: &mut ChaCha8Rng, g: &FiniteAbelianGroup) -> Label {
    Label::new(random_element(rng, g), random_element(rng, g))
}

/// Random symmetric linking matrix with entries in `[-bound, bound]`.
pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = BigInt::from(rng.random_range(-bound..=bound));
        for j in i + 1..n {
            let v = BigInt::from(rng.random_range(-bound..=bound));
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    m
}

/// Random all-Wilson data in S^3 with `1..=max_n` components.
pub fn random_all_wilson(
    rng: &mut ChaCha8Rng,
    g: &FiniteAbelianGroup,
    max_n: usize,
    bound: i64,
) -> LabeledLinkingData {
    let n = rng.random_range(1..=max_n);
    let m = random_symmetric(rng, n, bound);
    let labels = (0..n).map(|_| random_label(rng, g)).collect();
    LabeledLinkingData::all_wilson(m, labels).unwrap()
}

/// Random data with at least one Wilson and at least one surgery component.
pub fn random_mixed(
    rng: &mut ChaCha8Rng,
    g: &FiniteAbelianGroup,
    max_n: usize,
    bound: i64,
) -> LabeledLinkingData {
    let n = rng.random_range(2..=max_n.max(2));
    let m = random_symmetric(rng, n, bound);
    let surgery_slot = rng.random_range(0..n);
    let components = (0..n)
        .map(|i| {
            if i == surgery_slot || (i != (surgery_slot + 1) % n && rng.random_bool(0.3)) {
                Component::Surgery
            } else {
                Component::Wilson(random_label(rng, g))
            }
        })
        .collect();
    LabeledLinkingData::new(m, components, 1).unwrap()
}

/// Indices of the Wilson components of `d`.
pub fn wilson_indices(d: &LabeledLinkingData) -> Vec<usize> {
    d.components()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.label().is_some())
        .map(|(i, _)| i)
        .collect()
}

/// Brute-force bundle count oracle for all-Wilson links in S^3: stacks the
/// meridian constraints (`phi(mu_i) = a_i` and the longitude rows) and
/// counts homomorphisms by exhaustive enumeration, divided by `|G|`.
/// Shares no code with the direct condition check in `invariant_s3`.
pub fn hom_count_oracle_s3(d: &LabeledLinkingData, g: &FiniteAbelianGroup) -> Rational {
    let n = d.component_count();
    let mut rows = IntMatrix::zeros(2 * n, n);
    let mut targets = Vec::with_capacity(2 * n);
    for i in 0..n {
        let label = d.wilson_label(i).unwrap();
        rows[(2 * i, i)] = BigInt::from(1);
        targets.push(label.a.clone());
        for j in 0..n {
            rows[(2 * i + 1, j)] = d.matrix()[(i, j)].clone();
        }
        targets.push(label.b.clone());
    }
    let count = brute_force_count(&rows, &targets, g).unwrap();
    Rational::new(count, BigInt::from(g.order()))
}

/// Brute-force cokernel oracle for surgery presentations without Wilson
/// lines: counts homomorphisms annihilating every surgery row by exhaustive
/// enumeration, divided by `|G|` per ambient component.
pub fn coker_count_oracle(d: &LabeledLinkingData, g: &FiniteAbelianGroup) -> Rational {
    let n = d.component_count();
    let surgery_rows: Vec<usize> = d
        .components()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.label().is_none())
        .map(|(i, _)| i)
        .collect();
    assert_eq!(surgery_rows.len(), n, "oracle expects surgery-only data");
    let mut rows = IntMatrix::zeros(n, n);
    for (r, &i) in surgery_rows.iter().enumerate() {
        for j in 0..n {
            rows[(r, j)] = d.matrix()[(i, j)].clone();
        }
    }
    let targets = vec![g.zero(); n];
    let count = brute_force_count(&rows, &targets, g).unwrap();
    let denom = BigInt::from(g.order()).pow(d.manifold_components() as u32);
    Rational::new(count, denom)
}

/// Closed form of a handlebody pairing entry: `1/|G|` times the product of
/// the handle deltas and the arc deltas. The independent oracle for the
/// pairing matrices.
pub fn pattern_entry(
    s: &SurfaceObject,
    b: &BasisElement,
    bd: &BasisElement,
    g: &FiniteAbelianGroup,
) -> Rational {
    use num_traits::Zero;
    for k in 0..s.genus() {
        if b.handles()[k].a != bd.handles()[k].b || b.handles()[k].b != bd.handles()[k].a {
            return Rational::zero();
        }
    }
    for j in 0..s.arcs().len() {
        let sum = g.add(&b.rings()[j], &bd.rings()[j]).unwrap();
        if sum != s.arcs()[j].b {
            return Rational::zero();
        }
    }
    rational(1, g.order() as i64)
}

/// The dual basis element pairing nonzero against `b`: handles swap their
/// two slots, ring labels complement to the arc's B-cycle holonomy.
pub fn dual_element(s: &SurfaceObject, b: &BasisElement, g: &FiniteAbelianGroup) -> BasisElement {
    let handles = b
        .handles()
        .iter()
        .map(|l| Label::new(l.b.clone(), l.a.clone()))
        .collect();
    let rings = b
        .rings()
        .iter()
        .zip(s.arcs())
        .map(|(c, arc)| g.sub(&arc.b, c).unwrap())
        .collect();
    BasisElement::new(handles, rings)
}

/// The single-component configuration whose honest 2-cable the split move
/// produces: row and column `i` doubled off the diagonal, framing
/// quadrupled.
pub fn cable_merge(d: &LabeledLinkingData, i: usize) -> LabeledLinkingData {
    let n = d.component_count();
    let m = IntMatrix::from_fn(n, n, |r, c| {
        let base = d.matrix()[(r, c)].clone();
        if r == i && c == i {
            base * 4
        } else if r == i || c == i {
            base * 2
        } else {
            base
        }
    });
    LabeledLinkingData::new(m, d.components().to_vec(), d.manifold_components()).unwrap()
}

/// Sum of `|entry|` over the full linking matrix (the reduction move bound).
pub fn entry_weight(d: &LabeledLinkingData) -> u64 {
    use num_traits::ToPrimitive;
    let n = d.component_count();
    let mut total = 0u64;
    for i in 0..n {
        for j in 0..n {
            total += d.matrix()[(i, j)].magnitude().to_u64().unwrap();
        }
    }
    total
}
