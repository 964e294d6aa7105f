//! Subgroups as membership bitsets, plus normality, products and quotients.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};

/// A subgroup of some parent group, stored by membership.
///
/// Equality, hashing and ordering look at membership only; the recorded
/// generator list is informational.
#[derive(Clone, Debug)]
pub struct Subgroup {
    members: FixedBitSet,
    elements: Vec<Element>,
    generators: Vec<Element>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl Ord for Subgroup {
    /// By order, then lexicographically by sorted member list.
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Subgroup {
    pub fn trivial(g: &FiniteGroup) -> Self {
        let mut members = FixedBitSet::with_capacity(g.order());
        members.insert(0);
        Subgroup { members, elements: vec![Element::IDENTITY], generators: Vec::new() }
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        let mut members = FixedBitSet::with_capacity(g.order());
        members.insert_range(..);
        Subgroup {
            members,
            elements: g.elements().collect(),
            generators: g.generators().to_vec(),
        }
    }

    /// Check that `members` is a subgroup of `g` and wrap it.
    pub fn from_members(g: &FiniteGroup, members: FixedBitSet) -> Result<Self> {
        if members.len() != g.order() {
            return Err(Error::NotSubgroup("bitset length differs from group order".into()));
        }
        if !members.contains(0) {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        let target = members.count_ones(..);
        let mut h = Subgroup::trivial(g);
        for i in members.ones() {
            let x = Element::new(i);
            if h.contains(x) {
                continue;
            }
            h = h
                .extend_within(g, x, target)
                .ok_or_else(|| Error::NotSubgroup(format!("closure escapes the set at {x}")))?;
        }
        if h.members != members {
            return Err(Error::NotSubgroup("set is not closed under multiplication".into()));
        }
        Ok(h)
    }

    /// Like [`Subgroup::from_members`] from a list of elements.
    pub fn from_elements(g: &FiniteGroup, elements: &[Element]) -> Result<Self> {
        let mut bits = FixedBitSet::with_capacity(g.order());
        for &x in elements {
            g.element(x.index())?;
            bits.insert(x.index());
        }
        Self::from_members(g, bits)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn contains(&self, x: Element) -> bool {
        self.members.contains(x.index())
    }

    /// Members in ascending index order.
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    /// `<self, x>`.
    pub fn extend(&self, g: &FiniteGroup, x: Element) -> Subgroup {
        self.extend_within(g, x, usize::MAX).expect("unbounded extension")
    }

    /// `<self, x>`, or `None` once the result would exceed `limit` elements.
    ///
    /// The result is grown as a union of left cosets of `self`, so only
    /// right multiplication by `x` has to be closed explicitly.
    pub fn extend_within(&self, g: &FiniteGroup, x: Element, limit: usize) -> Option<Subgroup> {
        self.extend_bounded(g, x, limit, usize::MAX)
    }

    /// As [`Subgroup::extend_within`], but returns the whole group as soon as
    /// the partial closure exceeds `whole_above` elements (callers pass
    /// `|G| / p` for the smallest prime `p` dividing `|G|`).
    pub(crate) fn extend_bounded(
        &self,
        g: &FiniteGroup,
        x: Element,
        limit: usize,
        whole_above: usize,
    ) -> Option<Subgroup> {
        if self.contains(x) {
            return Some(self.clone());
        }
        let mut members = self.members.clone();
        let mut elems = self.elements.clone();
        let mut i = 0;
        while i < elems.len() {
            let y = g.mul(elems[i], x);
            if !members.contains(y.index()) {
                if elems.len() + self.elements.len() > limit {
                    return None;
                }
                for &h in &self.elements {
                    let z = g.mul(y, h);
                    members.insert(z.index());
                    elems.push(z);
                }
                if elems.len() > whole_above {
                    return (g.order() <= limit).then(|| Subgroup::whole(g));
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        let mut generators = self.generators.clone();
        generators.push(x);
        Some(Subgroup { members, elements: elems, generators })
    }

    pub fn intersection(&self, other: &Subgroup, g: &FiniteGroup) -> Subgroup {
        let mut members = self.members.clone();
        members.intersect_with(&other.members);
        let elements: Vec<Element> = members.ones().map(Element::new).collect();
        let generators = greedy_generators(g, elements.iter().copied());
        Subgroup { members, elements, generators }
    }

    pub fn intersection_order(&self, other: &Subgroup) -> usize {
        self.members.intersection_count(&other.members)
    }

    /// `x^{-1} H x`.
    pub fn conjugate(&self, g: &FiniteGroup, x: Element) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(g.order());
        let mut elements: Vec<Element> = self
            .elements
            .iter()
            .map(|&h| {
                let c = g.conjugate(h, x);
                members.insert(c.index());
                c
            })
            .collect();
        elements.sort_unstable();
        let generators = self.generators.iter().map(|&h| g.conjugate(h, x)).collect();
        Subgroup { members, elements, generators }
    }

    /// True when `x` normalizes this subgroup.
    pub fn normalized_by(&self, g: &FiniteGroup, x: Element) -> bool {
        self.generators.iter().all(|&h| self.contains(g.conjugate(h, x)))
    }

    pub fn normalizer(&self, g: &FiniteGroup) -> Subgroup {
        let elements: Vec<Element> = g.elements().filter(|&x| self.normalized_by(g, x)).collect();
        let mut members = FixedBitSet::with_capacity(g.order());
        elements.iter().for_each(|x| members.insert(x.index()));
        let generators = greedy_generators(g, elements.iter().copied());
        Subgroup { members, elements, generators }
    }

    pub fn is_abelian(&self, g: &FiniteGroup) -> bool {
        let gens = &self.generators;
        gens.iter().all(|&a| gens.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
    }

    /// The subgroup as a standalone dense group; local index `i` is `elements()[i]`.
    pub fn to_group(&self, g: &FiniteGroup) -> FiniteGroup {
        let m = self.order();
        let mut local = vec![u32::MAX; g.order()];
        for (i, &x) in self.elements.iter().enumerate() {
            local[x.index()] = i as u32;
        }
        let mut table = Vec::with_capacity(m * m);
        for &a in &self.elements {
            for &b in &self.elements {
                table.push(local[g.mul(a, b).index()] as u16);
            }
        }
        let gens = self
            .generators
            .iter()
            .map(|x| Element::new(local[x.index()] as usize))
            .collect();
        FiniteGroup::from_table_unchecked(m, table, gens).expect("subgroup table has inverses")
    }
}

/// Smallest subgroup containing `gens`.
pub fn closure(g: &FiniteGroup, gens: &[Element]) -> Subgroup {
    let mut h = Subgroup::trivial(g);
    for &x in gens {
        if !x.is_identity() && !h.contains(x) {
            h = h.extend(g, x);
        }
    }
    h
}

/// Pick generators in iteration order, keeping each element not already generated.
pub(crate) fn greedy_generators(
    g: &FiniteGroup,
    elements: impl IntoIterator<Item = Element>,
) -> Vec<Element> {
    let mut h = Subgroup::trivial(g);
    for x in elements {
        if !h.contains(x) {
            h = h.extend(g, x);
        }
    }
    h.generators
}

/// `N` is a normal subgroup of `within`.
pub fn is_normal(g: &FiniteGroup, n: &Subgroup, within: &Subgroup) -> bool {
    n.is_subgroup_of(within) && within.generators().iter().all(|&x| n.normalized_by(g, x))
}

/// Smallest normal subgroup of `within` containing `seeds`.
pub fn normal_closure(g: &FiniteGroup, seeds: &[Element], within: &Subgroup) -> Subgroup {
    let mut n = closure(g, seeds);
    loop {
        let mut grew = false;
        for &x in within.generators() {
            for i in 0.. {
                let Some(&h) = n.generators().get(i) else { break };
                let c = g.conjugate(h, x);
                if !n.contains(c) {
                    n = n.extend(g, c);
                    grew = true;
                }
            }
        }
        if !grew {
            return n;
        }
    }
}

/// The commutator subgroup `[H, H]`.
pub fn derived_subgroup(g: &FiniteGroup, h: &Subgroup) -> Subgroup {
    let gens = h.generators();
    let mut seeds = Vec::new();
    for &a in gens {
        for &b in gens {
            let c = g.commutator(a, b);
            if !c.is_identity() {
                seeds.push(c);
            }
        }
    }
    normal_closure(g, &seeds, h)
}

pub fn center(g: &FiniteGroup) -> Subgroup {
    let gens = g.generators();
    let elems: Vec<Element> = g
        .elements()
        .filter(|&z| gens.iter().all(|&s| g.mul(z, s) == g.mul(s, z)))
        .collect();
    Subgroup::from_elements(g, &elems).expect("center is a subgroup")
}

/// The set `AB = {ab}`.
pub fn product_set(g: &FiniteGroup, a: &Subgroup, b: &Subgroup) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(g.order());
    for &x in a.elements() {
        for &y in b.elements() {
            out.insert(g.mul(x, y).index());
        }
    }
    out
}

/// `|AB| = |A||B| / |A ∩ B|`.
pub fn product_size(a: &Subgroup, b: &Subgroup) -> usize {
    a.order() * b.order() / a.intersection_order(b)
}

/// The coset group `H / N` with its projection.
#[derive(Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    coset_of: Vec<u32>,
    representatives: Vec<Element>,
}

impl Quotient {
    /// Image of `x` in `H/N`; `None` when `x` is outside `H`.
    pub fn project(&self, x: Element) -> Option<Element> {
        match self.coset_of[x.index()] {
            u32::MAX => None,
            c => Some(Element::new(c as usize)),
        }
    }

    pub fn representative(&self, coset: Element) -> Element {
        self.representatives[coset.index()]
    }
}

pub fn quotient(g: &FiniteGroup, h: &Subgroup, n: &Subgroup) -> Result<Quotient> {
    if !is_normal(g, n, h) {
        return Err(Error::NotNormal(format!("subgroup of order {}", n.order())));
    }
    let mut coset_of = vec![u32::MAX; g.order()];
    let mut representatives = Vec::new();
    for &x in h.elements() {
        if coset_of[x.index()] != u32::MAX {
            continue;
        }
        let c = representatives.len() as u32;
        representatives.push(x);
        for &m in n.elements() {
            coset_of[g.mul(x, m).index()] = c;
        }
    }
    let k = representatives.len();
    let mut table = Vec::with_capacity(k * k);
    for &a in &representatives {
        for &b in &representatives {
            table.push(coset_of[g.mul(a, b).index()] as u16);
        }
    }
    let group = FiniteGroup::from_table_with_generators(k, table)?;
    Ok(Quotient { group, coset_of, representatives })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::named_group;

    #[test]
    fn closure_basics() {
        let s3 = named_group("symmetric:3").unwrap();
        assert_eq!(closure(&s3, &[]).order(), 1);
        let three = s3.elements().find(|&x| s3.order_of(x) == 3).unwrap();
        let a3 = closure(&s3, &[three]);
        assert_eq!(a3.order(), 3);
        assert!(is_normal(&s3, &a3, &Subgroup::whole(&s3)));
        let two = s3.elements().find(|&x| s3.order_of(x) == 2).unwrap();
        assert!(!is_normal(&s3, &closure(&s3, &[two]), &Subgroup::whole(&s3)));
    }

    #[test]
    fn from_members_rejects_non_subgroup() {
        let z4 = named_group("cyclic:4").unwrap();
        let mut bits = FixedBitSet::with_capacity(4);
        bits.insert(0);
        bits.insert(1);
        assert!(matches!(Subgroup::from_members(&z4, bits), Err(Error::NotSubgroup(_))));
    }

    #[test]
    fn product_with_trivial() {
        let s3 = named_group("symmetric:3").unwrap();
        let h = closure(&s3, &[Element::new(1)]);
        let p = product_set(&s3, &h, &Subgroup::trivial(&s3));
        assert_eq!(&p, h.members());
    }

    #[test]
    fn quotient_requires_normality() {
        let s3 = named_group("symmetric:3").unwrap();
        let two = s3.elements().find(|&x| s3.order_of(x) == 2).unwrap();
        let h = closure(&s3, &[two]);
        assert!(matches!(
            quotient(&s3, &Subgroup::whole(&s3), &h),
            Err(Error::NotNormal(_))
        ));
    }

    #[test]
    fn derived_subgroup_of_s4_is_a4() {
        let s4 = named_group("symmetric:4").unwrap();
        let d = derived_subgroup(&s4, &Subgroup::whole(&s4));
        assert_eq!(d.order(), 12);
        assert_eq!(derived_subgroup(&s4, &d).order(), 4);
        assert_eq!(center(&s4).order(), 1);
    }
}
