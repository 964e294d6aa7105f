use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::constructions::splitting_from_pair;
use crate::error::{Error, Result};
use crate::factorization::exact_factorizations_in;
use crate::group::FiniteGroup;
use crate::lattice::SubgroupLattice;
use crate::limits::Caps;
use crate::morphism::{AutomorphismGroup, GroupMap};
use crate::naming::{fingerprint, subgroup_name, Fingerprint};
use crate::rb::RbOperator;
use crate::subgroup::Subgroup;

/// One non-trivial orbit of splitting operators.
#[derive(Clone, Debug, Serialize)]
pub struct SplittingClass {
    /// Names of `(Im(B), Im(B~))` for the representative.
    pub image: String,
    pub image_tilde: String,
    pub orders: (usize, usize),
    /// Number of operators in the orbit.
    pub orbit_size: usize,
    pub image_elements: Vec<usize>,
    pub image_tilde_elements: Vec<usize>,
    pub representative: GroupMap,
    pub derived_fingerprint: Fingerprint,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub order: usize,
    /// Ordered exact pairs, trivial ones included: one splitting operator each.
    pub splitting_operators: usize,
    pub trivial_orbit_size: usize,
    pub automorphism_order: usize,
    pub s: usize,
    pub classes: Vec<SplittingClass>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectationStatus {
    Match,
    Mismatch,
    /// The closed formula is not expected to apply (`q = 5`, where
    /// `PSL2(5) = PSL2(4)`).
    Flagged,
}

/// Number of non-trivial classes predicted for `PSL2(q)` by the closed formula.
pub fn expected_psl2_classes(q: usize) -> usize {
    match q {
        11 => 3,
        7 | 23 | 59 => 2,
        _ if q % 4 == 1 => 0,
        _ => 1,
    }
}

pub fn psl2_expectation(q: usize, s: usize) -> ExpectationStatus {
    if q == 5 {
        ExpectationStatus::Flagged
    } else if expected_psl2_classes(q) == s {
        ExpectationStatus::Match
    } else {
        ExpectationStatus::Mismatch
    }
}

/// The action of Q(G) on ordered exact pairs `(Im(B), Im(B~)) = (L, H)`
/// of splitting operators `B(hl) = l^{-1}`, whose graph is `L x H`:
/// `(phi, phi)` maps both factors, `(id, alpha_x)` conjugates `H`, and the
/// swap exchanges them.
struct PairAction<'a> {
    g: &'a FiniteGroup,
    subgroups: Vec<&'a Subgroup>,
    index: HashMap<FixedBitSet, usize>,
    maps: Vec<GroupMap>,
    cache: HashMap<(usize, usize), usize>,
}

impl PairAction<'_> {
    fn image(&mut self, map: usize, s: usize) -> Result<usize> {
        if let Some(&t) = self.cache.get(&(map, s)) {
            return Ok(t);
        }
        let mut bits = FixedBitSet::with_capacity(self.g.order());
        for &x in self.subgroups[s].elements() {
            bits.insert(self.maps[map].apply(x).index());
        }
        let t = *self.index.get(&bits).ok_or_else(|| Error::Property {
            clause: "automorphic image of a subgroup is a subgroup".into(),
            witness: self.subgroups[s].generators().to_vec(),
        })?;
        self.cache.insert((map, s), t);
        Ok(t)
    }
}

/// Splitting operators up to equivalence, from the exact factorizations.
pub fn classify_splitting(g: &Arc<FiniteGroup>, caps: &Caps) -> Result<ClassificationReport> {
    let lattice = SubgroupLattice::compute(g, g.order(), caps)?;
    let aut = AutomorphismGroup::compute(g, caps)?;
    let subgroups = lattice.all();
    let index: HashMap<FixedBitSet, usize> =
        subgroups.iter().enumerate().map(|(i, s)| (s.members().clone(), i)).collect();
    let id = |s: &Subgroup| index[s.members()];

    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for f in exact_factorizations_in(g, &lattice) {
        let (a, b) = (id(&f.left), id(&f.right));
        pairs.insert((a, b));
        pairs.insert((b, a));
    }

    // Maps: automorphism generators first, then conjugation by each group generator.
    let mut maps = aut.generators.clone();
    let aut_count = maps.len();
    maps.extend(g.generators().iter().map(|&x| crate::morphism::inner_automorphism(g, x)));
    let mut action = PairAction { g, subgroups: subgroups.clone(), index, maps, cache: HashMap::new() };

    let mut orbit_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut orbits: Vec<Vec<(usize, usize)>> = Vec::new();
    for &start in &pairs {
        if orbit_of.contains_key(&start) {
            continue;
        }
        let label = orbits.len();
        let mut members = vec![start];
        orbit_of.insert(start, label);
        let mut cursor = 0;
        while cursor < members.len() {
            let (l, h) = members[cursor];
            cursor += 1;
            let mut next = vec![(h, l)];
            for m in 0..action.maps.len() {
                next.push(if m < aut_count {
                    (action.image(m, l)?, action.image(m, h)?)
                } else {
                    (l, action.image(m, h)?)
                });
            }
            for p in next {
                if !pairs.contains(&p) {
                    return Err(Error::Property {
                        clause: "Q(G) maps splitting operators to splitting operators".into(),
                        witness: subgroups[p.0].generators().to_vec(),
                    });
                }
                if let std::collections::btree_map::Entry::Vacant(e) = orbit_of.entry(p) {
                    e.insert(label);
                    members.push(p);
                }
            }
        }
        orbits.push(members);
    }

    let mut trivial_orbit_size = 0;
    let mut classes = Vec::new();
    for members in &orbits {
        if members.iter().any(|&(l, h)| subgroups[l].is_trivial() || subgroups[h].is_trivial()) {
            trivial_orbit_size += members.len();
            continue;
        }
        let &(l, h) = members.iter().min().expect("orbits are non-empty");
        let (l, h) = (subgroups[l], subgroups[h]);
        let op = splitting_from_pair(g, h, l)?;
        classes.push(splitting_class(g, &op, l, h, members.len())?);
    }
    classes.sort_by(|a, b| (b.orders, &a.image, &a.image_tilde).cmp(&(a.orders, &b.image, &b.image_tilde)));
    Ok(ClassificationReport {
        order: g.order(),
        splitting_operators: pairs.len(),
        trivial_orbit_size,
        automorphism_order: aut.order,
        s: classes.len(),
        classes,
    })
}

fn splitting_class(
    g: &FiniteGroup,
    op: &RbOperator,
    l: &Subgroup,
    h: &Subgroup,
    orbit_size: usize,
) -> Result<SplittingClass> {
    if !op.is_splitting() || op.image()? != *l || op.btilde()?.image()? != *h {
        return Err(Error::Property {
            clause: "B(hl) = l^-1 is splitting with Im(B) = L and Im(B~) = H".into(),
            witness: op.images().to_vec(),
        });
    }
    let elements = |s: &Subgroup| s.elements().iter().map(|x| x.index()).collect();
    Ok(SplittingClass {
        image: subgroup_name(g, l),
        image_tilde: subgroup_name(g, h),
        orders: (l.order(), h.order()),
        orbit_size,
        image_elements: elements(l),
        image_tilde_elements: elements(h),
        representative: op.map().clone(),
        derived_fingerprint: fingerprint(&op.derived_group()?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::named_group;

    #[test]
    fn formula_values() {
        assert_eq!(expected_psl2_classes(11), 3);
        assert_eq!(expected_psl2_classes(23), 2);
        assert_eq!(expected_psl2_classes(13), 0);
        assert_eq!(expected_psl2_classes(8), 1);
        assert_eq!(psl2_expectation(5, 1), ExpectationStatus::Flagged);
    }

    #[test]
    fn prime_cyclic_has_no_classes() {
        let g = Arc::new(named_group("cyclic:5").unwrap());
        let r = classify_splitting(&g, &Caps::default()).unwrap();
        assert_eq!(r.s, 0);
        assert_eq!(r.splitting_operators, 2);
        assert_eq!(r.trivial_orbit_size, 2);
    }
}
