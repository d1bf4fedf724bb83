//! TQFT vector spaces of labelled surfaces, built from standard handlebody
//! generators.
//!
//! The space assigned to a genus-`g` surface with `n` labelled arc pairs is
//! spanned by handlebody links indexed by `G^(2g+n)`: one `(a_k, b_k)` label
//! per handle and one free ring label `c_j` per arc pair. Basis vectors are
//! never materialized as 3-manifolds; only their standard closures (links in
//! `S^3`) are, and abelianness reduces those to linking data. Pairing a
//! generator against its complement-side dual glues to `S^3`, so every
//! pairing entry is an [`invariant_s3`] evaluation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::gns::{
    pairing_matrix, rank_and_radical, solve_against_pairing, GeneratorFamily, PairingMatrix,
};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::invariant::{invariant_presentation, invariant_s3, HomologyPresentation};
use crate::link::{Label, LabeledLinkingData};
use crate::zmatrix::IntMatrix;
use crate::Rational;

/// Hard cap on the basis size for which full pairing matrices are built.
pub const MAX_BASIS_SIZE: u64 = 4096;

/// A connected closed oriented surface of genus `g` with `n` labelled arc
/// pairs; the label of arc pair `j` is a torus-bundle label
/// `(A-holonomy, B-holonomy)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceObject {
    genus: usize,
    arcs: Vec<Label>,
}

/// A handlebody basis vector for a surface: one `(a_k, b_k)` in `G x G` per
/// handle, one ring label `c_j` in `G` per arc pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisElement {
    handles: Vec<Label>,
    rings: Vec<GroupElement>,
}

impl SurfaceObject {
    pub fn new(genus: usize, arcs: Vec<Label>) -> Self {
        SurfaceObject { genus, arcs }
    }

    /// A closed surface without arcs.
    pub fn closed(genus: usize) -> Self {
        SurfaceObject {
            genus,
            arcs: Vec::new(),
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn arcs(&self) -> &[Label] {
        &self.arcs
    }

    /// `|G|^(2g+n)`, the number of handlebody basis vectors.
    pub fn basis_size(&self, g: &FiniteAbelianGroup) -> u128 {
        (g.order() as u128).pow((2 * self.genus + self.arcs.len()) as u32)
    }

    /// All basis elements in lexicographic order over the label tuple
    /// `(a_1, b_1, ..., a_g, b_g, c_1, ..., c_n)`. Deterministic.
    pub fn basis_elements(&self, g: &FiniteAbelianGroup) -> Vec<BasisElement> {
        let elements = g.enumerate();
        let digits = 2 * self.genus + self.arcs.len();
        let mut out = Vec::with_capacity(self.basis_size(g) as usize);
        let mut counter = vec![0usize; digits];
        loop {
            let handles = (0..self.genus)
                .map(|k| {
                    Label::new(
                        elements[counter[2 * k]].clone(),
                        elements[counter[2 * k + 1]].clone(),
                    )
                })
                .collect();
            let rings = (0..self.arcs.len())
                .map(|j| elements[counter[2 * self.genus + j]].clone())
                .collect();
            out.push(BasisElement { handles, rings });

            let mut pos = digits;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                counter[pos] += 1;
                if counter[pos] < elements.len() {
                    break;
                }
                counter[pos] = 0;
            }
        }
    }

    fn check_shape(&self, b: &BasisElement) -> Result<()> {
        if b.handles.len() != self.genus || b.rings.len() != self.arcs.len() {
            return Err(Error::Dimension(format!(
                "basis element with {} handles and {} rings for a surface of genus {} with {} arcs",
                b.handles.len(),
                b.rings.len(),
                self.genus,
                self.arcs.len()
            )));
        }
        Ok(())
    }
}

impl BasisElement {
    pub fn new(handles: Vec<Label>, rings: Vec<GroupElement>) -> Self {
        BasisElement { handles, rings }
    }

    pub fn handles(&self) -> &[Label] {
        &self.handles
    }

    pub fn rings(&self) -> &[GroupElement] {
        &self.rings
    }
}

/// The link in `S^3` obtained by gluing the handlebody generator `b` to the
/// complement-side dual generator `b_dual`:
///
/// - per handle `k`, a 0-framed Hopf pair labelled `(a_k, b_k)` and
///   `(a'_k, b'_k)` with mutual linking 1;
/// - per arc pair `j`, a 0-framed component carrying the arc label
///   `(A_j, B_j)` plus two 0-framed rings labelled `(c_j, A_j)` and
///   `(c'_j, A_j)`, each linking it once and not linking each other;
/// - no linking across blocks.
pub fn standard_closure(
    s: &SurfaceObject,
    b: &BasisElement,
    b_dual: &BasisElement,
) -> Result<LabeledLinkingData> {
    s.check_shape(b)?;
    s.check_shape(b_dual)?;
    let g = s.genus;
    let n = s.arcs.len();
    let total = 2 * g + 3 * n;
    let mut m = IntMatrix::zeros(total, total);
    let mut labels = Vec::with_capacity(total);
    for k in 0..g {
        m[(2 * k, 2 * k + 1)] = BigInt::from(1);
        m[(2 * k + 1, 2 * k)] = BigInt::from(1);
        labels.push(b.handles[k].clone());
        labels.push(b_dual.handles[k].clone());
    }
    for j in 0..n {
        let base = 2 * g + 3 * j;
        m[(base, base + 1)] = BigInt::from(1);
        m[(base + 1, base)] = BigInt::from(1);
        m[(base, base + 2)] = BigInt::from(1);
        m[(base + 2, base)] = BigInt::from(1);
        let arc = &s.arcs[j];
        labels.push(arc.clone());
        labels.push(Label::new(b.rings[j].clone(), arc.a.clone()));
        labels.push(Label::new(b_dual.rings[j].clone(), arc.a.clone()));
    }
    LabeledLinkingData::all_wilson(m, labels)
}

/// One entry of the handlebody pairing: the `S^3` state of the standard
/// closure. Equals `1/|G|` exactly when every handle satisfies
/// `a_k = b'_k`, `b_k = a'_k` and every arc pair satisfies
/// `c_j + c'_j = B_j`.
pub fn pairing_entry(
    s: &SurfaceObject,
    b: &BasisElement,
    b_dual: &BasisElement,
    g: &FiniteAbelianGroup,
) -> Result<Rational> {
    let closure = standard_closure(s, b, b_dual)?;
    invariant_s3(&closure, g)
}

fn check_feasible(s: &SurfaceObject, g: &FiniteAbelianGroup) -> Result<Vec<BasisElement>> {
    let size = s.basis_size(g);
    if size > MAX_BASIS_SIZE as u128 {
        return Err(Error::Guard(format!(
            "pairing matrix would be {size}x{size}; the cap is {MAX_BASIS_SIZE}"
        )));
    }
    Ok(s.basis_elements(g))
}

/// The full `|G|^(2g+n) x |G|^(2g+n)` pairing matrix of the handlebody
/// generators against their duals, rows and columns in
/// [`SurfaceObject::basis_elements`] order.
pub fn surface_pairing_matrix(s: &SurfaceObject, g: &FiniteAbelianGroup) -> Result<PairingMatrix> {
    let basis = check_feasible(s, g)?;
    let fin = GeneratorFamily::new(basis.clone());
    let fout = GeneratorFamily::new(basis);
    pairing_matrix(&fin, &fout, |b, bd| pairing_entry(s, b, bd, g))
}

/// Dimension of the TQFT vector space of `s`: the exact rank of the
/// computed pairing matrix (not assumed from the basis count).
pub fn space_dimension(s: &SurfaceObject, g: &FiniteAbelianGroup) -> Result<usize> {
    let p = surface_pairing_matrix(s, g)?;
    Ok(rank_and_radical(&p).0)
}

/// Recovers the coordinates of an unknown vector `v` in the handlebody
/// basis from its pairings `pair_values[b'] = <v, delta*_{b'}>` against
/// every dual basis element, by solving against the computed pairing
/// matrix. Values not in the row space are rejected.
pub fn coordinates(
    s: &SurfaceObject,
    pair_values: &BTreeMap<BasisElement, Rational>,
    g: &FiniteAbelianGroup,
) -> Result<BTreeMap<BasisElement, Rational>> {
    let basis = check_feasible(s, g)?;
    let p = surface_pairing_matrix(s, g)?;
    let w = basis
        .iter()
        .map(|b| {
            pair_values.get(b).cloned().ok_or_else(|| {
                Error::Dimension("pair_values must cover every dual basis element".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let x = solve_against_pairing(&p, &w)?;
    Ok(basis.into_iter().zip(x).collect())
}

/// Transition amplitude of a cobordism presented by gluing basis
/// handlebodies into it: the bundle-groupoid cardinality of the glued
/// closed manifold with both boundary basis elements imposed as
/// constraints.
pub fn transition_amplitude(p: &HomologyPresentation, g: &FiniteAbelianGroup) -> Result<Rational> {
    invariant_presentation(p, g)
}

#[derive(Deserialize)]
struct SurfaceWire {
    genus: usize,
    #[serde(default)]
    arcs: Vec<(Vec<i64>, Vec<i64>)>,
}

/// Parses the surface spec JSON
/// `{"genus": g, "arcs": [[[a...],[b...]], ...]}` (arcs optional).
pub fn parse_surface(text: &str, g: &FiniteAbelianGroup) -> Result<SurfaceObject> {
    let wire: SurfaceWire = serde_json::from_str(text)
        .map_err(|e| Error::InputParse(format!("bad surface spec: {e}")))?;
    let arcs = wire
        .arcs
        .into_iter()
        .map(|(a, b)| Ok(Label::new(g.element(&a)?, g.element(&b)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SurfaceObject::new(wire.genus, arcs))
}

/// Parses a bare arc-label list `[[[a...],[b...]], ...]` (the `--arcs` file
/// of the CLI).
pub fn parse_arcs(text: &str, g: &FiniteAbelianGroup) -> Result<Vec<Label>> {
    let wire: Vec<(Vec<i64>, Vec<i64>)> =
        serde_json::from_str(text).map_err(|e| Error::InputParse(format!("bad arc list: {e}")))?;
    wire.into_iter()
        .map(|(a, b)| Ok(Label::new(g.element(&a)?, g.element(&b)?)))
        .collect()
}
