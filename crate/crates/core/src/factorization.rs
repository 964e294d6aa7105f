//! Factorizations `G = HL` by pairs of subgroups.

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::lattice::SubgroupLattice;
use crate::limits::Caps;
use crate::subgroup::{product_set, Subgroup};

/// A pair of subgroups whose product set is the whole group.
///
/// `left` is the factor of larger order (ties broken by element order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub left: Subgroup,
    pub right: Subgroup,
    pub intersection: Subgroup,
    pub exact: bool,
}

impl Factorization {
    /// Validate `G = HL` and record the intersection; the pair is stored
    /// with the larger factor on the left.
    pub fn new(g: &FiniteGroup, h: &Subgroup, l: &Subgroup) -> Result<Self> {
        let meet = h.intersection(l, g);
        if h.order() * l.order() != g.order() * meet.order() {
            return Err(Error::Hypothesis(format!(
                "|H||L|/|H∩L| = {}·{}/{} is not |G| = {}",
                h.order(),
                l.order(),
                meet.order(),
                g.order()
            )));
        }
        let (left, right) = if (h.order(), h) >= (l.order(), l) { (h, l) } else { (l, h) };
        Ok(Factorization {
            left: left.clone(),
            right: right.clone(),
            exact: meet.order() == 1,
            intersection: meet,
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.right.is_trivial()
    }

    /// `HL = G` as sets.
    pub fn covers(&self, g: &FiniteGroup) -> bool {
        product_set(g, &self.left, &self.right).count_ones(..) == g.order()
    }
}

/// All unordered exact factorizations, trivial pair included, each once.
pub fn exact_factorizations(g: &FiniteGroup, caps: &Caps) -> Result<Vec<Factorization>> {
    let lattice = SubgroupLattice::compute(g, g.order(), caps)?;
    Ok(exact_factorizations_in(g, &lattice))
}

/// As [`exact_factorizations`], reusing a computed lattice.
pub fn exact_factorizations_in(g: &FiniteGroup, lattice: &SubgroupLattice) -> Vec<Factorization> {
    let n = g.order();
    let all = lattice.all();
    let mut out = Vec::new();
    for (i, h) in all.iter().enumerate() {
        if h.order() * h.order() < n || !n.is_multiple_of(h.order()) {
            continue;
        }
        let want = n / h.order();
        for (j, l) in all.iter().enumerate() {
            if l.order() != want || (want == h.order() && j <= i) {
                continue;
            }
            if h.intersection_order(l) == 1 {
                let f = Factorization {
                    left: (*h).clone(),
                    right: (*l).clone(),
                    intersection: Subgroup::trivial(g),
                    exact: true,
                };
                debug_assert!(f.covers(g));
                out.push(f);
            }
        }
    }
    out
}

/// Ordered pairs `(A, C)` with `AC = G`, where `A` runs over conjugacy-class
/// representatives and `C` over every subgroup. Every ordered factorization
/// is conjugate to exactly one of these up to the choice of `C`.
pub fn covering_pairs<'a>(g: &FiniteGroup, lattice: &'a SubgroupLattice) -> Vec<(&'a Subgroup, &'a Subgroup)> {
    let n = g.order();
    let all = lattice.all();
    let mut out = Vec::new();
    for class in lattice.classes() {
        let a = class.representative();
        for &c in &all {
            if a.order() * c.order() >= n && a.order() * c.order() == n * a.intersection_order(c) {
                out.push((a, c));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::named_group;

    #[test]
    fn prime_cyclic_only_trivial() {
        let g = named_group("cyclic:7").unwrap();
        let f = exact_factorizations(&g, &Caps::default()).unwrap();
        assert_eq!(f.len(), 1);
        assert!(f[0].is_trivial() && f[0].exact);
    }

    #[test]
    fn z6_pairs() {
        let g = named_group("cyclic:6").unwrap();
        let f = exact_factorizations(&g, &Caps::default()).unwrap();
        let orders: Vec<(usize, usize)> = f.iter().map(|f| (f.left.order(), f.right.order())).collect();
        assert_eq!(orders, vec![(3, 2), (6, 1)]);
    }

    #[test]
    fn psl27_has_s4_times_7() {
        let g = named_group("psl2:7").unwrap();
        let f = exact_factorizations(&g, &Caps::default()).unwrap();
        assert!(f.iter().any(|f| (f.left.order(), f.right.order()) == (24, 7)));
        assert!(f.iter().all(|f| f.covers(&g)));
    }

    #[test]
    fn non_covering_pair_rejected() {
        let g = named_group("symmetric:3").unwrap();
        let t = Subgroup::trivial(&g);
        assert!(Factorization::new(&g, &t, &t).is_err());
        let w = Subgroup::whole(&g);
        let f = Factorization::new(&g, &t, &w).unwrap();
        assert_eq!(f.left.order(), 6);
        assert!(f.exact);
    }
}
