//! Labelled framed (ribbon) links: a diagram-level input format and the
//! linking-matrix datum the abelian invariant actually consumes.
//!
//! For an abelian gauge group the invariant factors through first homology,
//! which sees only pairwise linking numbers and framings. The canonical
//! internal representation is therefore the symmetric linking matrix
//! (framings on the diagonal), with a role per component: `Wilson` components
//! carry a holonomy label `(a, b)` in `G x G` (meridian slot first, longitude
//! slot second), `Surgery` components describe the ambient closed manifold.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::zmatrix::IntMatrix;
use crate::Rational;

/// Role of a link component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Wilson,
    Surgery,
}

/// A `G x G` holonomy label: `a` around the meridian (A-cycle), `b` along
/// the longitude (B-cycle).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub a: GroupElement,
    pub b: GroupElement,
}

impl Label {
    pub fn new(a: GroupElement, b: GroupElement) -> Self {
        Label { a, b }
    }

    /// True iff both slots are elements of `g`.
    pub fn belongs_to(&self, g: &FiniteAbelianGroup) -> bool {
        g.contains(&self.a) && g.contains(&self.b)
    }
}

/// Per-component datum: Wilson components carry a label, surgery components
/// none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Component {
    Wilson(Label),
    Surgery,
}

impl Component {
    pub fn role(&self) -> Role {
        match self {
            Component::Wilson(_) => Role::Wilson,
            Component::Surgery => Role::Surgery,
        }
    }

    pub fn label(&self) -> Option<&Label> {
        match self {
            Component::Wilson(l) => Some(l),
            Component::Surgery => None,
        }
    }
}

/// A labelled framed link at the linking-matrix level, together with the
/// connected-component count of the ambient closed manifold.
///
/// The matrix is symmetric; off-diagonal entries are pairwise linking
/// numbers, diagonal entries are framings (writhe under blackboard framing).
/// `manifold_components` is caller-supplied metadata: the linking matrix
/// cannot see ambient connectivity. It is `>= 1` for any nonempty datum; the
/// single value `0` is reserved for [`LabeledLinkingData::empty`], the unit
/// of disjoint union.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledLinkingData {
    m: IntMatrix,
    components: Vec<Component>,
    manifold_components: usize,
}

impl LabeledLinkingData {
    pub fn new(
        m: IntMatrix,
        components: Vec<Component>,
        manifold_components: usize,
    ) -> Result<Self> {
        if m.rows() != components.len() || m.cols() != components.len() {
            return Err(Error::Dimension(format!(
                "{}x{} linking matrix for {} components",
                m.rows(),
                m.cols(),
                components.len()
            )));
        }
        if !m.is_symmetric() {
            return Err(Error::Contract("linking matrix must be symmetric".into()));
        }
        if manifold_components == 0 && !components.is_empty() {
            return Err(Error::Contract(
                "manifold_components must be >= 1 for a nonempty link".into(),
            ));
        }
        Ok(LabeledLinkingData {
            m,
            components,
            manifold_components,
        })
    }

    /// All-Wilson data in a single copy of `S^3`.
    pub fn all_wilson(m: IntMatrix, labels: Vec<Label>) -> Result<Self> {
        let components = labels.into_iter().map(Component::Wilson).collect();
        LabeledLinkingData::new(m, components, 1)
    }

    /// The empty link in the empty manifold: the unit of disjoint union.
    pub fn empty() -> Self {
        LabeledLinkingData {
            m: IntMatrix::zeros(0, 0),
            components: Vec::new(),
            manifold_components: 0,
        }
    }

    /// The empty link in `S^3`.
    pub fn s3() -> Self {
        LabeledLinkingData {
            m: IntMatrix::zeros(0, 0),
            components: Vec::new(),
            manifold_components: 1,
        }
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn manifold_components(&self) -> usize {
        self.manifold_components
    }

    pub fn is_all_wilson(&self) -> bool {
        self.components.iter().all(|c| c.role() == Role::Wilson)
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.components.len() {
            Ok(())
        } else {
            Err(Error::Index(format!(
                "component {i} of a {}-component link",
                self.components.len()
            )))
        }
    }

    /// The label of component `i`, which must be a Wilson component.
    pub fn wilson_label(&self, i: usize) -> Result<&Label> {
        self.check_index(i)?;
        self.components[i].label().ok_or_else(|| {
            Error::Labels(format!(
                "component {i} is a surgery component and carries no label"
            ))
        })
    }

    /// True iff every label lies in `g`.
    pub fn labels_belong_to(&self, g: &FiniteAbelianGroup) -> bool {
        self.components
            .iter()
            .filter_map(Component::label)
            .all(|l| l.belongs_to(g))
    }

    pub(crate) fn set_entry(&mut self, i: usize, j: usize, v: BigInt) {
        self.m[(i, j)] = v.clone();
        self.m[(j, i)] = v;
    }

    pub(crate) fn set_label(&mut self, i: usize, label: Label) {
        self.components[i] = Component::Wilson(label);
    }

    /// Block-diagonal union: matrices stacked as blocks, components
    /// concatenated, manifold-component counts added. The tensor product of
    /// the cobordism category.
    pub fn disjoint_union(&self, other: &LabeledLinkingData) -> LabeledLinkingData {
        let n1 = self.component_count();
        let n2 = other.component_count();
        let m = IntMatrix::from_fn(n1 + n2, n1 + n2, |i, j| {
            if i < n1 && j < n1 {
                self.m[(i, j)].clone()
            } else if i >= n1 && j >= n1 {
                other.m[(i - n1, j - n1)].clone()
            } else {
                BigInt::zero()
            }
        });
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        LabeledLinkingData {
            m,
            components,
            manifold_components: self.manifold_components + other.manifold_components,
        }
    }

    /// Relabels components by `perm` (component `i` of the result is
    /// component `perm[i]` of the input), permuting the matrix rows and
    /// columns simultaneously.
    pub fn permuted(&self, perm: &[usize]) -> Result<LabeledLinkingData> {
        let n = self.component_count();
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::Index(format!(
                "invalid permutation of {n} components"
            )));
        }
        let m = IntMatrix::from_fn(n, n, |i, j| self.m[(perm[i], perm[j])].clone());
        let components = perm.iter().map(|&p| self.components[p].clone()).collect();
        Ok(LabeledLinkingData {
            m,
            components,
            manifold_components: self.manifold_components,
        })
    }
}

/// A formal linear combination of linking data with exact rational
/// coefficients. Duplicate terms are merged and zero coefficients dropped on
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSum {
    terms: Vec<(Rational, LabeledLinkingData)>,
}

impl FormalSum {
    pub fn new(raw: Vec<(Rational, LabeledLinkingData)>) -> Self {
        let mut terms: Vec<(Rational, LabeledLinkingData)> = Vec::new();
        for (coeff, data) in raw {
            match terms.iter_mut().find(|(_, d)| *d == data) {
                Some((c, _)) => *c += coeff,
                None => terms.push((coeff, data)),
            }
        }
        terms.retain(|(c, _)| !c.is_zero());
        FormalSum { terms }
    }

    pub fn singleton(data: LabeledLinkingData) -> Self {
        FormalSum {
            terms: vec![(Rational::from(BigInt::from(1)), data)],
        }
    }

    pub fn terms(&self) -> &[(Rational, LabeledLinkingData)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluates a scalar state on the sum by linearity.
    pub fn evaluate(
        &self,
        state: impl Fn(&LabeledLinkingData) -> Result<Rational>,
    ) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (coeff, data) in &self.terms {
            acc += coeff * state(data)?;
        }
        Ok(acc)
    }
}

/// One crossing of a diagram: the component passing over, the component
/// passing under, and the sign by the right-hand rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub over: usize,
    pub under: usize,
    pub sign: i8,
}

/// A combinatorial link diagram: a component count and a crossing list, with
/// each geometric crossing listed exactly once. Framing is the blackboard
/// framing (writhe).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    components: usize,
    crossings: Vec<Crossing>,
}

#[derive(Serialize, Deserialize)]
struct DiagramWire {
    components: usize,
    crossings: Vec<(usize, usize, i64)>,
}

impl LinkDiagram {
    pub fn new(components: usize, crossings: Vec<Crossing>) -> Result<Self> {
        for (idx, c) in crossings.iter().enumerate() {
            if c.over >= components || c.under >= components {
                return Err(Error::InputParse(format!(
                    "crossing {idx}: component index out of range (components = {components})"
                )));
            }
            if c.sign != 1 && c.sign != -1 {
                return Err(Error::InputParse(format!(
                    "crossing {idx}: sign must be +1 or -1, got {}",
                    c.sign
                )));
            }
        }
        Ok(LinkDiagram {
            components,
            crossings,
        })
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    /// Serializes back to the JSON diagram format.
    pub fn serialize(&self) -> String {
        let wire = DiagramWire {
            components: self.components,
            crossings: self
                .crossings
                .iter()
                .map(|c| (c.over, c.under, c.sign as i64))
                .collect(),
        };
        serde_json::to_string(&wire).expect("diagram serialization cannot fail")
    }
}

/// Parses the JSON diagram format
/// `{"components": n, "crossings": [[over, under, sign], ...]}`.
/// Role and label fields, when present, are ignored here; they are consumed
/// by [`parse_link_file`].
pub fn parse_diagram(text: &str) -> Result<LinkDiagram> {
    let wire: DiagramWire = serde_json::from_str(text)
        .map_err(|e| Error::InputParse(format!("bad link diagram: {e}")))?;
    let crossings = wire
        .crossings
        .into_iter()
        .enumerate()
        .map(|(idx, (over, under, sign))| {
            let sign = i8::try_from(sign)
                .ok()
                .filter(|s| *s == 1 || *s == -1)
                .ok_or_else(|| {
                    Error::InputParse(format!("crossing {idx}: sign must be +1 or -1"))
                })?;
            Ok(Crossing { over, under, sign })
        })
        .collect::<Result<Vec<_>>>()?;
    LinkDiagram::new(wire.components, crossings)
}

/// Extracts the linking data of a diagram: `m[i][j]` for `i != j` is half
/// the signed sum of crossings between components `i` and `j` (two closed
/// curves always cross an even number of times), `m[i][i]` is the writhe of
/// component `i`.
pub fn linking_data(
    d: &LinkDiagram,
    roles: &[Role],
    labels: &[Option<Label>],
    g: &FiniteAbelianGroup,
) -> Result<LabeledLinkingData> {
    let n = d.components();
    if roles.len() != n {
        return Err(Error::Labels(format!(
            "{} roles for {n} components",
            roles.len()
        )));
    }
    if labels.len() != n {
        return Err(Error::Labels(format!(
            "{} labels for {n} components",
            labels.len()
        )));
    }

    let mut m = IntMatrix::zeros(n, n);
    for c in d.crossings() {
        let s = BigInt::from(c.sign);
        if c.over == c.under {
            m[(c.over, c.over)] += s;
        } else {
            m[(c.over, c.under)] += s.clone();
            m[(c.under, c.over)] += s;
        }
    }
    // Halve the off-diagonal sums.
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let v = m[(i, j)].clone();
                if v.is_odd() {
                    return Err(Error::InputParse(format!(
                        "odd signed crossing count between components {i} and {j}; \
                         closed curves cross an even number of times"
                    )));
                }
                m[(i, j)] = v / 2;
            }
        }
    }

    let components = build_components(roles, labels, g)?;
    LabeledLinkingData::new(m, components, 1)
}

fn build_components(
    roles: &[Role],
    labels: &[Option<Label>],
    g: &FiniteAbelianGroup,
) -> Result<Vec<Component>> {
    roles
        .iter()
        .zip(labels)
        .enumerate()
        .map(|(i, (role, label))| match (role, label) {
            (Role::Wilson, Some(l)) => {
                if !l.belongs_to(g) {
                    return Err(Error::Labels(format!(
                        "label of component {i} does not belong to {g}"
                    )));
                }
                Ok(Component::Wilson(l.clone()))
            }
            (Role::Wilson, None) => Err(Error::Labels(format!(
                "Wilson component {i} is missing its label"
            ))),
            (Role::Surgery, None) => Ok(Component::Surgery),
            (Role::Surgery, Some(_)) => Err(Error::Labels(format!(
                "surgery component {i} must not carry a label"
            ))),
        })
        .collect()
}

type LabelWire = Option<(Vec<i64>, Vec<i64>)>;

#[derive(Deserialize)]
struct LinkFileWire {
    components: Option<usize>,
    crossings: Option<Vec<(usize, usize, i64)>>,
    linking_matrix: Option<Vec<Vec<i64>>>,
    roles: Option<Vec<String>>,
    labels: Option<Vec<LabelWire>>,
    manifold_components: Option<usize>,
}

/// Parses a complete link file into linking data over `g`.
///
/// Two forms are accepted. The diagram form
/// `{"components": n, "crossings": [[over, under, sign], ...], ...}`
/// goes through [`linking_data`]; the direct form carries
/// `"linking_matrix": [[...]]` instead. Both take optional
/// `"roles": ["wilson"|"surgery", ...]` (default: all Wilson),
/// `"labels": [[[a...],[b...]] | null, ...]` (required for Wilson
/// components) and `"manifold_components"` (default 1).
pub fn parse_link_file(text: &str, g: &FiniteAbelianGroup) -> Result<LabeledLinkingData> {
    let wire: LinkFileWire =
        serde_json::from_str(text).map_err(|e| Error::InputParse(format!("bad link file: {e}")))?;

    let n = match (&wire.linking_matrix, wire.components) {
        (Some(m), _) => m.len(),
        (None, Some(n)) => n,
        (None, None) => {
            return Err(Error::InputParse(
                "link file needs either `components`+`crossings` or `linking_matrix`".into(),
            ))
        }
    };

    let roles = match &wire.roles {
        None => vec![Role::Wilson; n],
        Some(raw) => {
            if raw.len() != n {
                return Err(Error::Labels(format!(
                    "{} roles for {n} components",
                    raw.len()
                )));
            }
            raw.iter()
                .map(|s| match s.to_ascii_lowercase().as_str() {
                    "wilson" => Ok(Role::Wilson),
                    "surgery" => Ok(Role::Surgery),
                    other => Err(Error::InputParse(format!(
                        "role must be \"wilson\" or \"surgery\", got \"{other}\""
                    ))),
                })
                .collect::<Result<Vec<_>>>()?
        }
    };

    let labels = match wire.labels {
        None => vec![None; n],
        Some(raw) => {
            if raw.len() != n {
                return Err(Error::Labels(format!(
                    "{} labels for {n} components",
                    raw.len()
                )));
            }
            raw.into_iter()
                .map(|entry| {
                    entry
                        .map(|(a, b)| Ok(Label::new(g.element(&a)?, g.element(&b)?)))
                        .transpose()
                })
                .collect::<Result<Vec<_>>>()?
        }
    };

    let mc = wire.manifold_components.unwrap_or(1);

    match wire.linking_matrix {
        Some(rows) => {
            if rows.iter().any(|r| r.len() != n) {
                return Err(Error::InputParse("linking_matrix must be square".into()));
            }
            let m = IntMatrix::from_rows(&rows)?;
            let components = build_components(&roles, &labels, g)?;
            LabeledLinkingData::new(m, components, mc)
        }
        None => {
            let diagram = LinkDiagram::new(
                n,
                wire.crossings
                    .unwrap_or_default()
                    .into_iter()
                    .enumerate()
                    .map(|(idx, (over, under, sign))| {
                        let sign = i8::try_from(sign)
                            .ok()
                            .filter(|s| *s == 1 || *s == -1)
                            .ok_or_else(|| {
                                Error::InputParse(format!("crossing {idx}: sign must be +1 or -1"))
                            })?;
                        Ok(Crossing { over, under, sign })
                    })
                    .collect::<Result<Vec<_>>>()?,
            )?;
            let data = linking_data(&diagram, &roles, &labels, g)?;
            if mc != 1 {
                LabeledLinkingData::new(data.m, data.components, mc)
            } else {
                Ok(data)
            }
        }
    }
}

/// JSON echo of linking data (used by the CLI for reproducible output).
pub fn link_to_json(d: &LabeledLinkingData) -> serde_json::Value {
    let matrix: Vec<Vec<String>> = (0..d.component_count())
        .map(|i| d.matrix().row(i).iter().map(|e| e.to_string()).collect())
        .collect();
    let roles: Vec<&str> = d
        .components()
        .iter()
        .map(|c| match c.role() {
            Role::Wilson => "wilson",
            Role::Surgery => "surgery",
        })
        .collect();
    let labels: Vec<serde_json::Value> = d
        .components()
        .iter()
        .map(|c| match c.label() {
            Some(l) => serde_json::json!([l.a.residues(), l.b.residues()]),
            None => serde_json::Value::Null,
        })
        .collect();
    serde_json::json!({
        "linking_matrix": matrix,
        "roles": roles,
        "labels": labels,
        "manifold_components": d.manifold_components(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn g(spec: &str) -> FiniteAbelianGroup {
        FiniteAbelianGroup::parse(spec).unwrap()
    }

    fn label(grp: &FiniteAbelianGroup, a: &[i64], b: &[i64]) -> Label {
        Label::new(grp.element(a).unwrap(), grp.element(b).unwrap())
    }

    #[test]
    fn parse_crossingless_unknot() {
        let d = parse_diagram(r#"{"components":1,"crossings":[]}"#).unwrap();
        assert_eq!(d.components(), 1);
        assert!(d.crossings().is_empty());
    }

    #[test]
    fn parse_hopf_diagram() {
        let d = parse_diagram(r#"{"components":2,"crossings":[[0,1,1],[1,0,1]]}"#).unwrap();
        assert_eq!(d.components(), 2);
        assert_eq!(d.crossings().len(), 2);
    }

    #[test]
    fn parse_rejects_out_of_range_component() {
        let err = parse_diagram(r#"{"components":1,"crossings":[[0,1,1]]}"#).unwrap_err();
        assert!(matches!(err, Error::InputParse(_)));
        assert!(err.to_string().contains("crossing 0"));
    }

    #[test]
    fn parse_rejects_bad_sign() {
        let err = parse_diagram(r#"{"components":2,"crossings":[[0,1,2]]}"#).unwrap_err();
        assert!(err.to_string().contains("sign"));
    }

    #[test]
    fn serialize_round_trip() {
        for text in [
            r#"{"components":1,"crossings":[]}"#,
            r#"{"components":2,"crossings":[[0,1,1],[1,0,1]]}"#,
            r#"{"components":1,"crossings":[[0,0,1],[0,0,1],[0,0,1]]}"#,
        ] {
            let d = parse_diagram(text).unwrap();
            assert_eq!(parse_diagram(&d.serialize()).unwrap(), d);
        }
    }

    #[test]
    fn linking_crossingless() {
        let z2 = g("Z2");
        let d = parse_diagram(r#"{"components":1,"crossings":[]}"#).unwrap();
        let data = linking_data(&d, &[Role::Wilson], &[Some(label(&z2, &[0], &[0]))], &z2).unwrap();
        assert_eq!(data.matrix(), &IntMatrix::zeros(1, 1));
    }

    #[test]
    fn linking_hopf_is_one() {
        let z2 = g("Z2");
        let d = parse_diagram(r#"{"components":2,"crossings":[[0,1,1],[1,0,1]]}"#).unwrap();
        let labels = [Some(label(&z2, &[0], &[0])), Some(label(&z2, &[1], &[1]))];
        let data = linking_data(&d, &[Role::Wilson, Role::Wilson], &labels, &z2).unwrap();
        let expected = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(data.matrix(), &expected);
    }

    #[test]
    fn linking_writhe_three() {
        let z2 = g("Z2");
        let d = parse_diagram(r#"{"components":1,"crossings":[[0,0,1],[0,0,1],[0,0,1]]}"#).unwrap();
        let data = linking_data(&d, &[Role::Wilson], &[Some(label(&z2, &[1], &[1]))], &z2).unwrap();
        assert_eq!(data.matrix(), &IntMatrix::from_rows(&[vec![3]]).unwrap());
    }

    #[test]
    fn linking_rejects_odd_crossing_count() {
        let z2 = g("Z2");
        let d = parse_diagram(r#"{"components":2,"crossings":[[0,1,1]]}"#).unwrap();
        let labels = [Some(label(&z2, &[0], &[0])), Some(label(&z2, &[0], &[0]))];
        let err = linking_data(&d, &[Role::Wilson, Role::Wilson], &labels, &z2).unwrap_err();
        assert!(err.to_string().contains("odd"));
    }

    #[test]
    fn linking_rejects_label_role_mismatch() {
        let z2 = g("Z2");
        let d = parse_diagram(r#"{"components":1,"crossings":[]}"#).unwrap();
        assert!(matches!(
            linking_data(&d, &[Role::Wilson], &[None], &z2),
            Err(Error::Labels(_))
        ));
        assert!(matches!(
            linking_data(&d, &[Role::Surgery], &[Some(label(&z2, &[0], &[0]))], &z2),
            Err(Error::Labels(_))
        ));
    }

    #[test]
    fn union_of_unknots() {
        let z2 = g("Z2");
        let a =
            LabeledLinkingData::all_wilson(IntMatrix::zeros(1, 1), vec![label(&z2, &[1], &[0])])
                .unwrap();
        let b =
            LabeledLinkingData::all_wilson(IntMatrix::zeros(1, 1), vec![label(&z2, &[1], &[0])])
                .unwrap();
        let u = a.disjoint_union(&b);
        assert_eq!(u.component_count(), 2);
        assert_eq!(u.manifold_components(), 2);
        assert!(u.matrix().is_zero());
    }

    #[test]
    fn union_with_empty_is_identity() {
        let z2 = g("Z2");
        let a = LabeledLinkingData::all_wilson(
            IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap(),
            vec![label(&z2, &[1], &[0]), label(&z2, &[0], &[1])],
        )
        .unwrap();
        assert_eq!(a.disjoint_union(&LabeledLinkingData::empty()), a);
        assert_eq!(LabeledLinkingData::empty().disjoint_union(&a), a);
    }

    #[test]
    fn union_of_hopf_pairs_is_block_diagonal() {
        let z2 = g("Z2");
        let hopf = LabeledLinkingData::all_wilson(
            IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap(),
            vec![label(&z2, &[1], &[0]), label(&z2, &[0], &[1])],
        )
        .unwrap();
        let u = hopf.disjoint_union(&hopf);
        assert_eq!(u.component_count(), 4);
        assert_eq!(u.manifold_components(), 2);
        let expected = IntMatrix::from_rows(&[
            vec![0, 1, 0, 0],
            vec![1, 0, 0, 0],
            vec![0, 0, 0, 1],
            vec![0, 0, 1, 0],
        ])
        .unwrap();
        assert_eq!(u.matrix(), &expected);
    }

    #[test]
    fn formal_sum_merges_duplicates_and_drops_zeros() {
        let z2 = g("Z2");
        let d1 =
            LabeledLinkingData::all_wilson(IntMatrix::zeros(1, 1), vec![label(&z2, &[0], &[0])])
                .unwrap();
        let d2 =
            LabeledLinkingData::all_wilson(IntMatrix::zeros(1, 1), vec![label(&z2, &[1], &[0])])
                .unwrap();
        let one = Rational::one();
        let sum = FormalSum::new(vec![
            (one.clone(), d1.clone()),
            (one.clone(), d1.clone()),
            (-one.clone(), d2.clone()),
            (one.clone(), d2),
        ]);
        assert_eq!(sum.len(), 1);
        assert_eq!(sum.terms()[0].0, Rational::from(BigInt::from(2)));
        assert_eq!(sum.terms()[0].1, d1);
    }

    #[test]
    fn parse_link_file_direct_form() {
        let z2 = g("Z2");
        let text = r#"{
            "linking_matrix": [[0, 1], [1, 0]],
            "roles": ["wilson", "surgery"],
            "labels": [[[1], [0]], null]
        }"#;
        let data = parse_link_file(text, &z2).unwrap();
        assert_eq!(data.component_count(), 2);
        assert_eq!(data.components()[1].role(), Role::Surgery);
        assert_eq!(data.wilson_label(0).unwrap(), &label(&z2, &[1], &[0]));
        assert!(data.wilson_label(1).is_err());
    }

    #[test]
    fn parse_link_file_diagram_form_defaults_to_wilson() {
        let z3 = g("Z3");
        let text = r#"{
            "components": 2,
            "crossings": [[0, 1, 1], [1, 0, 1]],
            "labels": [[[1], [2]], [[2], [1]]]
        }"#;
        let data = parse_link_file(text, &z3).unwrap();
        assert!(data.is_all_wilson());
        assert_eq!(data.matrix()[(0, 1)], BigInt::one());
    }

    #[test]
    fn parse_link_file_rejects_asymmetric_matrix() {
        let z2 = g("Z2");
        let text = r#"{"linking_matrix": [[0, 2], [1, 0]], "labels": [[[0],[0]], [[0],[0]]]}"#;
        assert!(parse_link_file(text, &z2).is_err());
    }

    #[test]
    fn permuted_relabels_consistently() {
        let z2 = g("Z2");
        let data = LabeledLinkingData::all_wilson(
            IntMatrix::from_rows(&[vec![2, 1], vec![1, 0]]).unwrap(),
            vec![label(&z2, &[1], &[0]), label(&z2, &[0], &[1])],
        )
        .unwrap();
        let p = data.permuted(&[1, 0]).unwrap();
        assert_eq!(
            p.matrix(),
            &IntMatrix::from_rows(&[vec![0, 1], vec![1, 2]]).unwrap()
        );
        assert_eq!(p.wilson_label(0).unwrap(), data.wilson_label(1).unwrap());
        assert!(data.permuted(&[0, 0]).is_err());
    }

    fn arb_diagram() -> impl Strategy<Value = LinkDiagram> {
        (1usize..=4).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n, prop_oneof![Just(1i8), Just(-1i8)]), 0..8)
                .prop_map(move |raw| {
                    let crossings = raw
                        .into_iter()
                        .map(|(over, under, sign)| Crossing { over, under, sign })
                        .collect();
                    LinkDiagram::new(n, crossings).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn diagram_serialize_parse_identity(d in arb_diagram()) {
            prop_assert_eq!(parse_diagram(&d.serialize()).unwrap(), d);
        }

        #[test]
        fn linking_matrix_is_symmetric(d in arb_diagram()) {
            let z2 = g("Z2");
            let n = d.components();
            let roles = vec![Role::Wilson; n];
            let labels: Vec<_> =
                (0..n).map(|_| Some(Label::new(z2.zero(), z2.zero()))).collect();
            // Odd inter-component sums are rejected; even ones must be symmetric.
            if let Ok(data) = linking_data(&d, &roles, &labels, &z2) {
                prop_assert!(data.matrix().is_symmetric());
            }
        }
    }
}
