//! Right ideals, minimal right ideals, and the right-group decomposition of
//! a minimal right ideal.
//!
//! A minimal right ideal `R` of a finite semigroup is a right group: it is
//! isomorphic to `G × E` where `G` is a group and `E` (the idempotents of
//! `R`) is a right-zero semigroup. [`decompose_right_group`] computes this
//! decomposition and checks every structural claim by brute force, so a
//! malformed input surfaces as a [`StructureError`] instead of a silently
//! wrong certificate downstream.

use thiserror::Error;

use crate::mask::SubsetMask;
use crate::table::{CayleyTable, ElementId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("subset is not closed: {a}*{b} = {product} lies outside it")]
    NotClosed { a: usize, b: usize, product: usize },
    #[error("subset is empty")]
    Empty,
    #[error("not a right ideal: {r}*{s} = {product} lies outside it")]
    NotRightIdeal { r: usize, s: usize, product: usize },
    #[error("right ideal is not minimal: {x}*S is a proper subset")]
    NotMinimal { x: usize },
    #[error("right ideal contains no idempotent")]
    NoIdempotent,
    #[error("idempotents are not right-zero: {e}*{f} != {f}")]
    IdempotentsNotRightZero { e: usize, f: usize },
    #[error("R*a is not a group")]
    NotAGroup,
    #[error("group identity is {found}, expected the chosen idempotent {expected}")]
    WrongIdentity { expected: usize, found: usize },
    #[error("element {x} has {count} idempotent right identities, expected one")]
    AmbiguousIdempotent { x: usize, count: usize },
    #[error("x -> (x*a, e_x) is not a bijection onto H x E")]
    NotBijective,
    #[error("x -> (x*a, e_x) is not a homomorphism at ({x}, {y})")]
    NotHomomorphic { x: usize, y: usize },
    #[error("absorption x*u = (x*a)*u fails at x={x}, u={u}")]
    AbsorptionFails { x: usize, u: usize },
}

/// `{x} ∪ x∘S`, the smallest right ideal containing `x`.
pub fn principal_right_ideal(x: usize, s: &CayleyTable) -> SubsetMask {
    let mut out = SubsetMask::from_indices(s.order(), s.row(x));
    out.insert(x);
    out
}

pub fn is_right_ideal(r: &SubsetMask, s: &CayleyTable) -> bool {
    r.iter().all(|x| s.row(x).all(|p| r.contains(p)))
}

/// A minimal right ideal: inclusion-minimal among principal right ideals,
/// smallest cardinality first, then the smallest element list.
pub fn minimal_right_ideal(s: &CayleyTable) -> SubsetMask {
    let ideals: Vec<SubsetMask> = (0..s.order()).map(|x| principal_right_ideal(x, s)).collect();
    ideals
        .iter()
        .filter(|r| !ideals.iter().any(|o| o.is_subset(r) && o != *r))
        .min_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.cmp(b)))
        .cloned()
        .expect("a finite semigroup has a principal right ideal")
}

/// Identity and inverses of a subset that forms a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupStructure {
    pub identity: ElementId,
    /// `inverse[x]` is `Some(x⁻¹)` for members, `None` elsewhere.
    pub inverse: Vec<Option<ElementId>>,
}

impl GroupStructure {
    pub fn inverse_of(&self, x: usize) -> Option<usize> {
        self.inverse.get(x).copied().flatten().map(ElementId::index)
    }
}

/// Decides whether `h` is a group under the ambient product.
///
/// Errors if `h` is not closed. Returns `Ok(None)` for a closed subset
/// without a two-sided identity or without two-sided inverses.
pub fn is_group(h: &SubsetMask, s: &CayleyTable) -> Result<Option<GroupStructure>, StructureError> {
    for a in h {
        for b in h {
            let product = s.mul(a, b);
            if !h.contains(product) {
                return Err(StructureError::NotClosed { a, b, product });
            }
        }
    }
    let Some(identity) = h
        .iter()
        .find(|&e| h.iter().all(|x| s.mul(e, x) == x && s.mul(x, e) == x))
    else {
        return Ok(None);
    };
    let mut inverse = vec![None; s.order()];
    for x in h {
        match h.iter().find(|&y| s.mul(x, y) == identity && s.mul(y, x) == identity) {
            Some(y) => inverse[x] = Some(ElementId::from(y)),
            None => return Ok(None),
        }
    }
    Ok(Some(GroupStructure {
        identity: ElementId::from(identity),
        inverse,
    }))
}

/// A minimal right ideal `R ≅ H × E` with `H = R∘a` a group and `E` the
/// right-zero semigroup of idempotents of `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightGroupDecomposition {
    pub ideal: SubsetMask,
    /// Smallest element of the ideal.
    pub r: ElementId,
    pub idempotents: SubsetMask,
    /// Smallest idempotent; the identity of `group`.
    pub a: ElementId,
    pub group: SubsetMask,
    pub group_structure: GroupStructure,
}

impl RightGroupDecomposition {
    pub fn identity(&self) -> ElementId {
        self.group_structure.identity
    }

    pub fn inverse_of(&self, h: usize) -> Option<usize> {
        self.group_structure.inverse_of(h)
    }

    /// The unique idempotent `e ∈ E` with `x∘e = x`, for `x` in the ideal.
    pub fn idempotent_of(&self, x: usize, s: &CayleyTable) -> Option<usize> {
        self.idempotents.iter().find(|&e| s.mul(x, e) == x)
    }
}

/// Decomposes the minimal right ideal `ideal`, verifying every structural
/// fact the decomposition asserts.
pub fn decompose_right_group(ideal: &SubsetMask, s: &CayleyTable) -> Result<RightGroupDecomposition, StructureError> {
    let r = ideal.first().ok_or(StructureError::Empty)?;
    for x in ideal {
        for y in 0..s.order() {
            let product = s.mul(x, y);
            if !ideal.contains(product) {
                return Err(StructureError::NotRightIdeal { r: x, s: y, product });
            }
        }
    }
    // Minimality: x∘S is itself a right ideal inside R, so it must be all of R.
    for x in ideal {
        if SubsetMask::from_indices(s.order(), s.row(x)) != *ideal {
            return Err(StructureError::NotMinimal { x });
        }
    }

    let idempotents = s.idempotents().intersection(ideal);
    let a = idempotents.first().ok_or(StructureError::NoIdempotent)?;
    for e in &idempotents {
        for f in &idempotents {
            if s.mul(e, f) != f {
                return Err(StructureError::IdempotentsNotRightZero { e, f });
            }
        }
    }

    let group = SubsetMask::from_indices(s.order(), ideal.iter().map(|x| s.mul(x, a)));
    let group_structure = is_group(&group, s)?.ok_or(StructureError::NotAGroup)?;
    if group_structure.identity.index() != a {
        return Err(StructureError::WrongIdentity {
            expected: a,
            found: group_structure.identity.index(),
        });
    }

    let decomposition = RightGroupDecomposition {
        ideal: ideal.clone(),
        r: ElementId::from(r),
        idempotents,
        a: ElementId::from(a),
        group,
        group_structure,
    };
    check_product_structure(&decomposition, s)?;
    Ok(decomposition)
}

fn check_product_structure(d: &RightGroupDecomposition, s: &CayleyTable) -> Result<(), StructureError> {
    let a = d.a.index();
    let n = s.order();
    let mut e_of = vec![usize::MAX; n];
    for x in &d.ideal {
        let count = d.idempotents.iter().filter(|&e| s.mul(x, e) == x).count();
        if count != 1 {
            return Err(StructureError::AmbiguousIdempotent { x, count });
        }
        e_of[x] = d.idempotent_of(x, s).unwrap_or(usize::MAX);
    }
    // Injectivity plus |R| = |H|·|E| gives a bijection onto H × E.
    let mut images: Vec<(usize, usize)> = d.ideal.iter().map(|x| (s.mul(x, a), e_of[x])).collect();
    images.sort_unstable();
    images.dedup();
    if images.len() != d.ideal.count() || d.ideal.count() != d.group.count() * d.idempotents.count() {
        return Err(StructureError::NotBijective);
    }
    for x in &d.ideal {
        for y in &d.ideal {
            let xy = s.mul(x, y);
            if s.mul(xy, a) != s.mul(s.mul(x, a), s.mul(y, a)) || e_of[xy] != e_of[y] {
                return Err(StructureError::NotHomomorphic { x, y });
            }
        }
        for u in &d.group {
            if s.mul(x, u) != s.mul(s.mul(x, a), u) {
                return Err(StructureError::AbsorptionFails { x, u });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::fixtures::*;

    fn m(order: usize, xs: &[usize]) -> SubsetMask {
        SubsetMask::from_indices(order, xs.iter().copied())
    }

    #[test]
    fn principal_right_ideals() {
        assert_eq!(principal_right_ideal(0, &left_zero(2)), m(2, &[0]));
        assert_eq!(principal_right_ideal(1, &cyclic(3)), m(3, &[0, 1, 2]));
        assert_eq!(principal_right_ideal(0, &right_zero(2)), m(2, &[0, 1]));
    }

    #[test]
    fn minimal_right_ideals() {
        assert_eq!(minimal_right_ideal(&left_zero(2)), m(2, &[0]));
        assert_eq!(minimal_right_ideal(&cyclic(3)), m(3, &[0, 1, 2]));
        assert_eq!(minimal_right_ideal(&z2_times_rz2()), m(4, &[0, 1, 2, 3]));
    }

    #[test]
    fn group_recognition() {
        let z4 = cyclic(4);
        let g = is_group(&z4.full(), &z4).unwrap().unwrap();
        assert_eq!(g.identity, ElementId::from(0));
        assert_eq!(g.inverse_of(1), Some(3));
        assert_eq!(g.inverse_of(2), Some(2));

        let lz2 = left_zero(2);
        assert_eq!(is_group(&lz2.full(), &lz2), Ok(None));

        let null = table(&[&[0, 0], &[0, 0]]);
        assert!(is_group(&m(2, &[0]), &null).unwrap().is_some());
        assert_eq!(
            is_group(&m(2, &[1]), &null),
            Err(StructureError::NotClosed { a: 1, b: 1, product: 0 })
        );
        assert_eq!(is_group(&m(2, &[]), &null), Ok(None));
    }

    #[test]
    fn decomposes_right_group() {
        let s = z2_times_rz2();
        let d = decompose_right_group(&s.full(), &s).unwrap();
        assert_eq!(d.idempotents, m(4, &[0, 2]));
        assert_eq!(d.a, ElementId::from(0));
        assert_eq!(d.group, m(4, &[0, 1]));
        assert_eq!(d.identity(), ElementId::from(0));
        assert_eq!(d.inverse_of(1), Some(1));
        assert_eq!(d.r, ElementId::from(0));
    }

    #[test]
    fn decomposes_group_and_trivial() {
        let z3 = cyclic(3);
        let d = decompose_right_group(&z3.full(), &z3).unwrap();
        assert_eq!(d.idempotents, m(3, &[0]));
        assert_eq!(d.group, z3.full());
        assert_eq!(d.inverse_of(1), Some(2));

        let trivial = table(&[&[0]]);
        let d = decompose_right_group(&trivial.full(), &trivial).unwrap();
        assert_eq!(d.group, m(1, &[0]));
        assert_eq!(d.a, ElementId::from(0));
    }

    #[test]
    fn rejects_non_minimal_or_non_ideal_inputs() {
        let lz2 = left_zero(2);
        assert_eq!(
            decompose_right_group(&lz2.full(), &lz2),
            Err(StructureError::NotMinimal { x: 0 })
        );
        let z3 = cyclic(3);
        assert_eq!(
            decompose_right_group(&m(3, &[1]), &z3),
            Err(StructureError::NotRightIdeal { r: 1, s: 1, product: 2 })
        );
        assert_eq!(decompose_right_group(&m(3, &[]), &z3), Err(StructureError::Empty));
    }
}
