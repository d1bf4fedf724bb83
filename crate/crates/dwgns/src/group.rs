//! Finite abelian groups as explicit products of cyclic groups.
//!
//! A group is an ordered list of cyclic orders `[d_1, ..., d_k]` standing for
//! `Z_{d_1} x ... x Z_{d_k}`; an element is a residue vector stored
//! normalized, `0 <= x[i] < d_i`. Order lists are kept as given rather than
//! reduced to invariant factors, so `Z2xZ2` and `Z4` are different groups and
//! two groups compare equal iff their order lists are equal. Written
//! additively throughout.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Largest permitted group order. Keeps all residue arithmetic comfortably
/// inside `u64`/`u128` and rules out absurd enumeration requests early.
const MAX_ORDER: u64 = 1 << 32;

/// A finite abelian group `Z_{d_1} x ... x Z_{d_k}` with every `d_i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
}

/// An element of a [`FiniteAbelianGroup`]: one residue per cyclic factor,
/// always stored normalized.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    residues: Vec<u64>,
}

impl FiniteAbelianGroup {
    /// Builds the group with the given cyclic orders, in order.
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        let mut total: u64 = 1;
        for (i, &d) in orders.iter().enumerate() {
            if d == 0 {
                return Err(Error::GroupParse(format!(
                    "cyclic order at position {i} must be >= 1, got 0"
                )));
            }
            total = total
                .checked_mul(d)
                .filter(|&t| t <= MAX_ORDER)
                .ok_or_else(|| {
                    Error::Guard(format!(
                        "group order exceeds the supported maximum {MAX_ORDER}"
                    ))
                })?;
        }
        Ok(FiniteAbelianGroup { orders })
    }

    /// Parses a spec matching `Z<d>(xZ<d>)*`, e.g. `"Z2xZ4"`. Both the `Z`
    /// and the `x` separator are case-insensitive.
    pub fn parse(spec: &str) -> Result<Self> {
        if spec.trim().is_empty() {
            return Err(Error::GroupParse("empty group spec".into()));
        }
        let mut orders = Vec::new();
        for token in spec.trim().split(['x', 'X']) {
            let token = token.trim();
            let digits = token
                .strip_prefix(['Z', 'z'])
                .ok_or_else(|| Error::GroupParse(format!("expected `Z<d>`, got `{token}`")))?;
            let d: u64 = digits
                .parse()
                .map_err(|_| Error::GroupParse(format!("bad cyclic order in `{token}`")))?;
            if d == 0 {
                return Err(Error::GroupParse(format!(
                    "cyclic order must be >= 1, got `{token}`"
                )));
            }
            orders.push(d);
        }
        FiniteAbelianGroup::new(orders)
    }

    /// The cyclic orders `d_1, ..., d_k`.
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Group order `|G| = d_1 * ... * d_k`.
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// The identity element.
    pub fn zero(&self) -> GroupElement {
        GroupElement {
            residues: vec![0; self.orders.len()],
        }
    }

    /// Builds an element from (possibly unnormalized, possibly negative)
    /// residues.
    pub fn element(&self, residues: &[i64]) -> Result<GroupElement> {
        if residues.len() != self.orders.len() {
            return Err(Error::Dimension(format!(
                "element has {} residues, group has {} factors",
                residues.len(),
                self.orders.len()
            )));
        }
        let residues = residues
            .iter()
            .zip(&self.orders)
            .map(|(&r, &d)| r.rem_euclid(d as i64) as u64)
            .collect();
        Ok(GroupElement { residues })
    }

    /// True iff `x` is a normalized element of this group.
    pub fn contains(&self, x: &GroupElement) -> bool {
        x.residues.len() == self.orders.len()
            && x.residues.iter().zip(&self.orders).all(|(&r, &d)| r < d)
    }

    fn check_member(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "element {x} does not belong to {self}"
            )))
        }
    }

    /// Componentwise sum mod `d_i`.
    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check_member(x)?;
        self.check_member(y)?;
        let residues = x
            .residues
            .iter()
            .zip(&y.residues)
            .zip(&self.orders)
            .map(|((&a, &b), &d)| (a + b) % d)
            .collect();
        Ok(GroupElement { residues })
    }

    /// The inverse `-x`.
    pub fn neg(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check_member(x)?;
        let residues = x
            .residues
            .iter()
            .zip(&self.orders)
            .map(|(&a, &d)| if a == 0 { 0 } else { d - a })
            .collect();
        Ok(GroupElement { residues })
    }

    /// `x - y`.
    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        let ny = self.neg(y)?;
        self.add(x, &ny)
    }

    /// Integer scalar action `k * x`, for any (possibly negative) `k`.
    /// `scalar_mul(-1, x)` is the inverse of `x`.
    pub fn scalar_mul(&self, k: &BigInt, x: &GroupElement) -> Result<GroupElement> {
        self.check_member(x)?;
        let residues = x
            .residues
            .iter()
            .zip(&self.orders)
            .map(|(&a, &d)| {
                let kd = k
                    .mod_floor(&BigInt::from(d))
                    .to_u64()
                    .expect("reduced scalar fits u64");
                ((kd as u128 * a as u128) % d as u128) as u64
            })
            .collect();
        Ok(GroupElement { residues })
    }

    /// Convenience form of [`scalar_mul`](Self::scalar_mul) for machine ints.
    pub fn scalar_mul_i64(&self, k: i64, x: &GroupElement) -> Result<GroupElement> {
        self.scalar_mul(&BigInt::from(k), x)
    }

    /// All `|G|` elements exactly once, in lexicographic residue order
    /// (first factor most significant). Deterministic.
    pub fn enumerate(&self) -> Vec<GroupElement> {
        (0..self.order()).map(|i| self.element_at(i)).collect()
    }

    /// The `idx`-th element in lexicographic residue order, `0 <= idx < |G|`.
    pub fn element_at(&self, idx: u64) -> GroupElement {
        debug_assert!(idx < self.order());
        let mut residues = vec![0u64; self.orders.len()];
        let mut rem = idx;
        for (slot, &d) in residues.iter_mut().zip(&self.orders).rev() {
            *slot = rem % d;
            rem /= d;
        }
        GroupElement { residues }
    }

    /// Index of `x` in the [`enumerate`](Self::enumerate) order.
    pub fn index_of(&self, x: &GroupElement) -> u64 {
        debug_assert!(self.contains(x));
        x.residues
            .iter()
            .zip(&self.orders)
            .fold(0u64, |acc, (&r, &d)| acc * d + r)
    }
}

impl GroupElement {
    /// The normalized residues of the element.
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    /// True iff this is the identity.
    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "Z1");
        }
        for (i, d) in self.orders.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "Z{d}")?;
        }
        Ok(())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.residues.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(spec: &str) -> FiniteAbelianGroup {
        FiniteAbelianGroup::parse(spec).unwrap()
    }

    #[test]
    fn parse_single_factor() {
        assert_eq!(g("Z2").orders(), &[2]);
    }

    #[test]
    fn parse_product() {
        let grp = g("Z2xZ4");
        assert_eq!(grp.orders(), &[2, 4]);
        assert_eq!(grp.order(), 8);
    }

    #[test]
    fn parse_case_insensitive() {
        assert_eq!(g("z2Xz3").orders(), &[2, 3]);
    }

    #[test]
    fn parse_rejects_degenerate_order() {
        assert!(matches!(
            FiniteAbelianGroup::parse("Z0"),
            Err(Error::GroupParse(_))
        ));
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "Z", "2", "Z2x", "Z2xxZ3", "Z-1", "Q2"] {
            assert!(FiniteAbelianGroup::parse(bad).is_err(), "accepted `{bad}`");
        }
    }

    #[test]
    fn add_componentwise_mod() {
        let grp = g("Z2xZ4");
        let x = grp.element(&[1, 3]).unwrap();
        let y = grp.element(&[1, 2]).unwrap();
        assert_eq!(grp.add(&x, &y).unwrap(), grp.element(&[0, 1]).unwrap());
    }

    #[test]
    fn add_identity() {
        let grp = g("Z3");
        let x = grp.element(&[2]).unwrap();
        assert_eq!(grp.add(&x, &grp.zero()).unwrap(), x);
    }

    #[test]
    fn add_order_two() {
        let grp = g("Z2");
        let x = grp.element(&[1]).unwrap();
        assert!(grp.add(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn add_rejects_length_mismatch() {
        let grp = g("Z2xZ4");
        let x = grp.element(&[1, 0]).unwrap();
        let alien = g("Z2").element(&[1]).unwrap();
        assert!(matches!(grp.add(&x, &alien), Err(Error::Dimension(_))));
    }

    #[test]
    fn scalar_mul_examples() {
        let z4 = g("Z4");
        let one = z4.element(&[1]).unwrap();
        assert_eq!(
            z4.scalar_mul_i64(3, &one).unwrap(),
            z4.element(&[3]).unwrap()
        );
        assert_eq!(
            z4.scalar_mul_i64(-1, &one).unwrap(),
            z4.element(&[3]).unwrap()
        );

        let z2z3 = g("Z2xZ3");
        let x = z2z3.element(&[1, 1]).unwrap();
        assert!(z2z3.scalar_mul_i64(6, &x).unwrap().is_zero());
    }

    #[test]
    fn enumerate_small_groups() {
        let z2 = g("Z2");
        assert_eq!(
            z2.enumerate(),
            vec![z2.element(&[0]).unwrap(), z2.element(&[1]).unwrap()]
        );

        let z2z2 = g("Z2xZ2");
        let all: Vec<_> = z2z2.enumerate();
        let expected: Vec<_> = [[0, 0], [0, 1], [1, 0], [1, 1]]
            .iter()
            .map(|r| z2z2.element(&[r[0], r[1]]).unwrap())
            .collect();
        assert_eq!(all, expected);
    }

    #[test]
    fn enumerate_trivial_group() {
        let z1 = g("Z1");
        let all = z1.enumerate();
        assert_eq!(all.len(), 1);
        assert!(all[0].is_zero());
    }

    #[test]
    fn element_normalizes_negative_residues() {
        let grp = g("Z5");
        assert_eq!(grp.element(&[-1]).unwrap(), grp.element(&[4]).unwrap());
    }

    #[test]
    fn index_of_round_trip() {
        let grp = g("Z3xZ4");
        for (i, x) in grp.enumerate().into_iter().enumerate() {
            assert_eq!(grp.index_of(&x), i as u64);
            assert_eq!(grp.element_at(i as u64), x);
        }
    }

    #[test]
    fn display_round_trip() {
        for spec in ["Z2", "Z2xZ4", "Z1", "Z12xZ1xZ3"] {
            let grp = g(spec);
            assert_eq!(FiniteAbelianGroup::parse(&grp.to_string()).unwrap(), grp);
        }
    }

    fn arb_group() -> impl Strategy<Value = FiniteAbelianGroup> {
        proptest::collection::vec(1u64..=6, 1..=3)
            .prop_map(|orders| FiniteAbelianGroup::new(orders).unwrap())
    }

    fn arb_group_with_elements(
        count: usize,
    ) -> impl Strategy<Value = (FiniteAbelianGroup, Vec<GroupElement>)> {
        (arb_group(), proptest::collection::vec(any::<u64>(), count)).prop_map(|(grp, seeds)| {
            let n = grp.order();
            let elems = seeds.iter().map(|&s| grp.element_at(s % n)).collect();
            (grp, elems)
        })
    }

    proptest! {
        #[test]
        fn addition_is_associative((grp, elems) in arb_group_with_elements(3)) {
            let (x, y, z) = (&elems[0], &elems[1], &elems[2]);
            let lhs = grp.add(&grp.add(x, y).unwrap(), z).unwrap();
            let rhs = grp.add(x, &grp.add(y, z).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn zero_is_identity_and_neg_is_inverse((grp, elems) in arb_group_with_elements(1)) {
            let x = &elems[0];
            prop_assert_eq!(&grp.add(x, &grp.zero()).unwrap(), x);
            let minus = grp.scalar_mul_i64(-1, x).unwrap();
            prop_assert!(grp.add(x, &minus).unwrap().is_zero());
            prop_assert_eq!(minus, grp.neg(x).unwrap());
        }

        #[test]
        fn scalar_mul_matches_repeated_addition(
            (grp, elems) in arb_group_with_elements(1),
            k in 0i64..=12,
        ) {
            let x = &elems[0];
            let mut acc = grp.zero();
            for _ in 0..k {
                acc = grp.add(&acc, x).unwrap();
            }
            prop_assert_eq!(grp.scalar_mul_i64(k, x).unwrap(), acc);
        }

        #[test]
        fn enumerate_is_exhaustive_and_distinct(grp in arb_group()) {
            let all = grp.enumerate();
            prop_assert_eq!(all.len() as u64, grp.order());
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), all.len());
            prop_assert!(all.iter().all(|x| grp.contains(x)));
        }
    }
}
