//! Subgroup lattice by conjugacy classes.
//!
//! Every subgroup is reached from the trivial group by adjoining one element
//! at a time, and conjugate subgroups have conjugate extensions, so it is
//! enough to extend one representative per conjugacy class. For a
//! representative `H` the extensions `<H, x>` only depend on the double
//! coset `HxH`, which bounds the work by the number of double cosets.
//! Perfect subgroups (such as A_5 inside PSL(2,11)) are found too, which a
//! pure cyclic-extension search over prime-order normalizing elements misses.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::limits::Caps;
use crate::subgroup::Subgroup;

/// One conjugacy class of subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    representative: Subgroup,
    conjugates: Vec<Subgroup>,
}

impl SubgroupClass {
    /// The least conjugate in subgroup order.
    pub fn representative(&self) -> &Subgroup {
        &self.representative
    }

    /// All conjugates, sorted.
    pub fn conjugates(&self) -> &[Subgroup] {
        &self.conjugates
    }

    pub fn len(&self) -> usize {
        self.conjugates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conjugates.is_empty()
    }

    pub fn order(&self) -> usize {
        self.representative.order()
    }
}

/// All subgroups of order at most `max_order`, grouped by conjugacy.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    classes: Vec<SubgroupClass>,
    max_order: usize,
}

/// The conjugates of `h`, via a right transversal of its normalizer.
pub fn conjugates(g: &FiniteGroup, h: &Subgroup) -> Vec<Subgroup> {
    let norm = h.normalizer(g);
    let mut seen = FixedBitSet::with_capacity(g.order());
    let mut out = Vec::with_capacity(g.order() / norm.order());
    for x in g.elements() {
        if seen.contains(x.index()) {
            continue;
        }
        for &m in norm.elements() {
            seen.insert(g.mul(m, x).index());
        }
        out.push(h.conjugate(g, x));
    }
    out.sort();
    out
}

impl SubgroupLattice {
    pub fn compute(g: &FiniteGroup, max_order: usize, caps: &Caps) -> Result<Self> {
        let n = g.order();
        if n > caps.lattice_order {
            return Err(Error::cap("lattice group order", n, caps.lattice_order));
        }
        let whole_above = n / g.smallest_prime_divisor().max(1);
        let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
        let mut classes: Vec<SubgroupClass> = Vec::new();
        let mut total = 0usize;
        let mut queue = VecDeque::new();

        let mut register = |h: Subgroup,
                            index: &mut HashMap<FixedBitSet, usize>,
                            classes: &mut Vec<SubgroupClass>,
                            queue: &mut VecDeque<usize>|
         -> Result<()> {
            let conj = conjugates(g, &h);
            total += conj.len();
            if total > caps.max_subgroups {
                return Err(Error::cap("subgroup count", total, caps.max_subgroups));
            }
            let id = classes.len();
            for c in &conj {
                index.insert(c.members().clone(), id);
            }
            classes.push(SubgroupClass { representative: conj[0].clone(), conjugates: conj });
            queue.push_back(id);
            Ok(())
        };

        register(Subgroup::trivial(g), &mut index, &mut classes, &mut queue)?;
        while let Some(c) = queue.pop_front() {
            let h = classes[c].representative.clone();
            if 2 * h.order() > max_order {
                continue;
            }
            let mut tried = h.members().clone();
            for x in g.elements() {
                if tried.contains(x.index()) {
                    continue;
                }
                for &a in h.elements() {
                    let ax = g.mul(a, x);
                    for &b in h.elements() {
                        tried.insert(g.mul(ax, b).index());
                    }
                }
                let Some(k) = h.extend_bounded(g, x, max_order, whole_above) else {
                    continue;
                };
                if !index.contains_key(k.members()) {
                    register(k, &mut index, &mut classes, &mut queue)?;
                }
            }
        }
        classes.sort_by(|a, b| a.representative.cmp(&b.representative));
        Ok(SubgroupLattice { classes, max_order })
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Number of subgroups (not classes).
    pub fn len(&self) -> usize {
        self.classes.iter().map(SubgroupClass::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Every subgroup, sorted by order then member list.
    pub fn all(&self) -> Vec<&Subgroup> {
        let mut v: Vec<&Subgroup> = self.classes.iter().flat_map(|c| c.conjugates.iter()).collect();
        v.sort();
        v
    }

    /// Subgroups contained in `h` (including `h`), sorted.
    pub fn subgroups_of<'a>(&'a self, h: &Subgroup) -> Vec<&'a Subgroup> {
        self.all().into_iter().filter(|k| k.is_subgroup_of(h)).collect()
    }

    /// Class index of a subgroup of the lattice.
    pub fn class_of(&self, h: &Subgroup) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| c.order() == h.order() && c.conjugates.binary_search(h).is_ok())
    }
}

/// Every subgroup of order at most `max_order`, each exactly once, sorted.
pub fn all_subgroups(g: &FiniteGroup, max_order: usize, caps: &Caps) -> Result<Vec<Subgroup>> {
    let lattice = SubgroupLattice::compute(g, max_order, caps)?;
    Ok(lattice.all().into_iter().cloned().collect())
}

/// The normal subgroups of `h` among `candidates`.
pub fn normal_subgroups_among<'a>(
    g: &FiniteGroup,
    h: &Subgroup,
    candidates: impl IntoIterator<Item = &'a Subgroup>,
) -> Vec<&'a Subgroup> {
    candidates
        .into_iter()
        .filter(|n| crate::subgroup::is_normal(g, n, h))
        .collect()
}

/// True when `g` has no normal subgroups besides 1 and itself, checked by
/// normal closures of class representatives.
pub fn is_simple(g: &FiniteGroup) -> bool {
    let whole = Subgroup::whole(g);
    g.order() > 1
        && g.conjugacy_classes()
            .classes()
            .iter()
            .filter(|c| !c[0].is_identity())
            .all(|c| crate::subgroup::normal_closure(g, &[c[0]], &whole).order() == g.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::named_group;
    use crate::group::Element;
    use crate::subgroup::closure;
    use std::collections::HashSet;

    #[test]
    fn small_counts() {
        let caps = Caps::default();
        let z6 = named_group("cyclic:6").unwrap();
        assert_eq!(all_subgroups(&z6, 6, &caps).unwrap().len(), 4);
        let s3 = named_group("symmetric:3").unwrap();
        assert_eq!(all_subgroups(&s3, 6, &caps).unwrap().len(), 6);
    }

    /// Brute force: close every subset of generators of size <= 3.
    fn brute_force_count(g: &FiniteGroup) -> usize {
        let mut seen = HashSet::new();
        let n = g.order();
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    let h = closure(g, &[Element::new(a), Element::new(b), Element::new(c)]);
                    seen.insert(h.members().clone());
                }
            }
        }
        seen.len()
    }

    #[test]
    fn matches_brute_force_on_small_groups() {
        let caps = Caps::default();
        for id in ["symmetric:4", "dihedral:8", "quaternion:8", "elemabelian:2:3", "paper16"] {
            let g = named_group(id).unwrap();
            let got = all_subgroups(&g, g.order(), &caps).unwrap();
            assert_eq!(got.len(), brute_force_count(&g), "{id}");
            for h in &got {
                assert_eq!(g.order() % h.order(), 0);
            }
        }
    }

    #[test]
    fn max_order_filter() {
        let caps = Caps::default();
        let s4 = named_group("symmetric:4").unwrap();
        let small = all_subgroups(&s4, 4, &caps).unwrap();
        assert!(small.iter().all(|h| h.order() <= 4));
        let all = all_subgroups(&s4, 24, &caps).unwrap();
        assert_eq!(small.len(), all.iter().filter(|h| h.order() <= 4).count());
        assert_eq!(all.len(), 30);
    }

    #[test]
    fn lattice_cap() {
        let g = named_group("symmetric:4").unwrap();
        let caps = Caps { lattice_order: 10, ..Caps::default() };
        assert!(matches!(all_subgroups(&g, 24, &caps), Err(Error::ResourceCap { .. })));
    }

    #[test]
    fn simplicity() {
        assert!(is_simple(&named_group("alternating:5").unwrap()));
        assert!(!is_simple(&named_group("symmetric:4").unwrap()));
        assert!(is_simple(&named_group("cyclic:5").unwrap()));
    }
}
