//! Recipes that produce Rota–Baxter operators from group structure.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::paper16_with_normal_forms;
use crate::error::{Error, Result};
use crate::factorization::{exact_factorizations, Factorization};
use crate::group::{Element, FiniteGroup};
use crate::lattice::SubgroupLattice;
use crate::limits::Caps;
use crate::morphism::{extend_on_subgroup, homomorphisms, GroupMap};
use crate::rb::{verify_rb, RbOperator, VerifyMode};
use crate::subgroup::{closure, is_normal, Subgroup};

/// Which factor is written first in the decomposition `g = xy`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorOrder {
    /// `g = h l` with `h` in `left`, `l` in `right`; `B(hl) = l^{-1}`.
    HL,
    /// `g = l h` with `l` in `right`, `h` in `left`; `B(lh) = h^{-1}`.
    LH,
}

fn mode_for(g: &FiniteGroup) -> VerifyMode {
    VerifyMode::for_order(g.order(), &Caps::default(), 0)
}

fn require_exact(g: &FiniteGroup, h: &Subgroup, l: &Subgroup) -> Result<()> {
    if h.order() * l.order() != g.order() || h.intersection_order(l) != 1 {
        return Err(Error::Hypothesis(format!(
            "factorization with orders {} and {} is not exact",
            h.order(),
            l.order()
        )));
    }
    Ok(())
}

/// Table `hl -> (h, l)` for an exact factorization.
fn decomposition(g: &FiniteGroup, h: &Subgroup, l: &Subgroup) -> Vec<(Element, Element)> {
    let mut table = vec![(Element::IDENTITY, Element::IDENTITY); g.order()];
    for &x in h.elements() {
        for &y in l.elements() {
            table[g.mul(x, y).index()] = (x, y);
        }
    }
    table
}

/// `B(hl) = l^{-1}` for an exact factorization `G = HL`.
pub fn splitting_from_pair(g: &Arc<FiniteGroup>, h: &Subgroup, l: &Subgroup) -> Result<RbOperator> {
    require_exact(g, h, l)?;
    let map = decomposition(g, h, l).into_iter().map(|(_, y)| g.inv(y)).collect();
    RbOperator::verify(g.clone(), GroupMap::new(map), mode_for(g))
}

pub fn splitting_from_exact(g: &Arc<FiniteGroup>, f: &Factorization, order: FactorOrder) -> Result<RbOperator> {
    if !f.exact {
        return Err(Error::Hypothesis("factorization is not exact".into()));
    }
    match order {
        FactorOrder::HL => splitting_from_pair(g, &f.left, &f.right),
        FactorOrder::LH => splitting_from_pair(g, &f.right, &f.left),
    }
}

/// A homomorphism (or antihomomorphism) into an abelian subgroup.
pub fn hom_to_abelian(g: &Arc<FiniteGroup>, h: &Subgroup, phi: &GroupMap, anti: bool) -> Result<RbOperator> {
    if !h.is_abelian(g) {
        return Err(Error::Hypothesis("target subgroup is not abelian".into()));
    }
    let phi = GroupMap::checked(phi.images().to_vec(), g, g)?;
    if let Some(x) = g.elements().find(|&x| !h.contains(phi.apply(x))) {
        return Err(Error::Hypothesis(format!("image of {x} lies outside the target subgroup")));
    }
    let witness = if anti { phi.antihomomorphism_witness(g, g) } else { phi.homomorphism_witness(g, g) };
    if let Some((x, y)) = witness {
        return Err(Error::NotHomomorphism(x, y));
    }
    RbOperator::verify(g.clone(), phi, mode_for(g))
}

/// `B(hl) = C(l)` for `G = HL` exact and `C` an operator on `L`.
///
/// `c` lives on `l.to_group(g)`: local index `i` is `l.elements()[i]`.
/// Requires `Im(C~)` to normalize `H`.
pub fn lift_from_factor(g: &Arc<FiniteGroup>, h: &Subgroup, l: &Subgroup, c: &RbOperator) -> Result<RbOperator> {
    require_exact(g, h, l)?;
    if c.group().order() != l.order() {
        return Err(Error::InvalidInput("operator does not live on the second factor".into()));
    }
    let global = |i: Element| l.elements()[i.index()];
    let local = |x: Element| Element::new(l.elements().binary_search(&x).expect("element of L"));
    let ct = c.btilde()?;
    for y in ct.images() {
        let x = global(*y);
        if !h.normalized_by(g, x) {
            return Err(Error::Hypothesis(format!("Im(C~) element {x} does not normalize H")));
        }
    }
    let map = decomposition(g, h, l).into_iter().map(|(_, y)| global(c.apply(local(y)))).collect();
    RbOperator::verify(g.clone(), GroupMap::new(map), mode_for(g))
}

/// Hypotheses of the order-two intersection construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaR2Instance {
    pub h: Subgroup,
    pub k: Subgroup,
    pub h1: Subgroup,
    pub k1: Subgroup,
    /// `H ∩ K`, of order two.
    pub r_sub: Subgroup,
    /// Least element of `K \ K1`.
    pub t: Element,
    /// Generator of `R`.
    pub r: Element,
}

impl LemmaR2Instance {
    /// Fill in `R`, `t` and `r` from the four subgroups.
    pub fn new(g: &FiniteGroup, h: Subgroup, k: Subgroup, h1: Subgroup, k1: Subgroup) -> Result<Self> {
        let r_sub = h.intersection(&k, g);
        let t = k
            .elements()
            .iter()
            .copied()
            .find(|&x| !k1.contains(x))
            .ok_or_else(|| Error::Hypothesis("K1 is all of K".into()))?;
        let r = r_sub
            .elements()
            .iter()
            .copied()
            .find(|x| !x.is_identity())
            .ok_or_else(|| Error::Hypothesis("H ∩ K is trivial".into()))?;
        let inst = LemmaR2Instance { h, k, h1, k1, r_sub, t, r };
        inst.check(g)?;
        Ok(inst)
    }

    /// Every hypothesis, reporting the first that fails.
    pub fn check(&self, g: &FiniteGroup) -> Result<()> {
        let fail = |clause: &str| Err(Error::Hypothesis(clause.to_string()));
        if !is_normal(g, &self.h1, &self.h) {
            return fail("H1 is normal in H");
        }
        if !is_normal(g, &self.k1, &self.k) {
            return fail("K1 is normal in K");
        }
        if self.h.order() != 2 * self.h1.order() || self.k.order() != 2 * self.k1.order() {
            return fail("|H/H1| = |K/K1| = 2");
        }
        if self.h.order() * self.k.order() != g.order() * self.h.intersection_order(&self.k) {
            return fail("G = HK");
        }
        if self.h1.order() * self.k.order() != g.order() || self.h1.intersection_order(&self.k) != 1 {
            return fail("G = H1 K is exact");
        }
        if self.r_sub.order() != 2 || *self.r_sub.members() != *self.h.intersection(&self.k, g).members() {
            return fail("R = H ∩ K has order two");
        }
        if !self.r_sub.generators().iter().all(|&x| self.h1.normalized_by(g, x)) {
            return fail("R normalizes H1");
        }
        if !self.k.contains(self.t) || self.k1.contains(self.t) {
            return fail("t lies in K \\ K1");
        }
        if !self.r_sub.contains(self.r) || self.r.is_identity() {
            return fail("r lies in R \\ {e}");
        }
        Ok(())
    }
}

/// `B(h1 t^δ k1) = k^{-1} r^δ`, built as the lift of `C(k) = k^{-1} r^δ` on `K`.
pub fn lemma_r2_construct(g: &Arc<FiniteGroup>, inst: &LemmaR2Instance) -> Result<RbOperator> {
    inst.check(g)?;
    let k_group = Arc::new(inst.k.to_group(g));
    let kel = inst.k.elements();
    let local = |x: Element| Element::new(kel.binary_search(&x).expect("element of K"));
    let c_map: Vec<Element> = kel
        .iter()
        .map(|&x| {
            let base = g.inv(x);
            let y = if inst.k1.contains(x) { base } else { g.mul(base, inst.r) };
            local(y)
        })
        .collect();
    let c = RbOperator::verify(k_group.clone(), GroupMap::new(c_map), VerifyMode::Full)?;

    // C~ is a homomorphism onto R.
    let ct = c.btilde()?;
    if let Some((x, y)) = ct.map().homomorphism_witness(&k_group, &k_group) {
        return Err(Error::Property { clause: "C~ is a homomorphism".into(), witness: vec![kel[x.index()], kel[y.index()]] });
    }
    let mut image: Vec<Element> = ct.images().iter().map(|&y| kel[y.index()]).collect();
    image.sort_unstable();
    image.dedup();
    if image != inst.r_sub.elements() {
        return Err(Error::Property { clause: "Im(C~) = R".into(), witness: image });
    }

    let b = lift_from_factor(g, &inst.h1, &inst.k, &c)?;
    for (i, &x) in kel.iter().enumerate() {
        if b.apply(x) != kel[c.apply(Element::new(i)).index()] {
            return Err(Error::Property { clause: "B restricted to K is C".into(), witness: vec![x] });
        }
    }
    Ok(b)
}

/// Every instance of the construction's hypotheses, in lattice order.
pub fn lemma_r2_search(g: &FiniteGroup, caps: &Caps) -> Result<Vec<LemmaR2Instance>> {
    let n = g.order();
    if n % 2 == 1 {
        return Ok(Vec::new());
    }
    let lattice = SubgroupLattice::compute(g, n, caps)?;
    let all = lattice.all();
    let mut out = Vec::new();
    for k in &all {
        if k.order() % 2 == 1 {
            continue;
        }
        let index_two: Vec<&&Subgroup> =
            all.iter().filter(|s| 2 * s.order() == k.order() && s.is_subgroup_of(k)).collect();
        for h1 in &all {
            if h1.order() * k.order() != n || h1.intersection_order(k) != 1 {
                continue;
            }
            for h in &all {
                if h.order() != 2 * h1.order() || !h1.is_subgroup_of(h) || h.intersection_order(k) != 2 {
                    continue;
                }
                for k1 in &index_two {
                    if let Ok(inst) =
                        LemmaR2Instance::new(g, (*h).clone(), (*k).clone(), (*h1).clone(), (**k1).clone())
                    {
                        out.push(inst);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Data for the construction over a normal abelian subgroup with cyclic quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionData {
    pub a: Subgroup,
    pub f: Element,
    /// Image of `a.elements()[i]` under `B|_A`.
    pub ba: Vec<Element>,
    pub bf: Element,
}

/// Result of [`extension_construct`]; `is_rb == condition_holds` always.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionOutcome {
    pub candidate: GroupMap,
    pub is_rb: bool,
    pub condition_holds: bool,
}

/// Least `m > 0` with `f^m` in `A`.
fn coset_order(g: &FiniteGroup, a: &Subgroup, f: Element) -> usize {
    let mut x = f;
    let mut m = 1;
    while !a.contains(x) {
        x = g.mul(x, f);
        m += 1;
    }
    m
}

impl ExtensionData {
    pub fn check(&self, g: &FiniteGroup) -> Result<()> {
        let fail = |clause: &str| Err(Error::Hypothesis(clause.to_string()));
        let whole = Subgroup::whole(g);
        if !self.a.is_abelian(g) || !is_normal(g, &self.a, &whole) {
            return fail("A is a normal abelian subgroup");
        }
        if self.a.extend(g, self.f).order() != g.order() {
            return fail("G = <A, f>");
        }
        if self.ba.len() != self.a.order() || self.ba.iter().any(|&y| !self.a.contains(y)) {
            return fail("B|_A maps A into A");
        }
        if !self.a.contains(self.bf) {
            return fail("B(f) lies in A");
        }
        let at = |x: Element| self.ba[self.a.elements().binary_search(&x).expect("element of A")];
        for &x in self.a.elements() {
            for &y in self.a.elements() {
                if at(g.mul(x, y)) != g.mul(at(x), at(y)) {
                    return fail("B|_A is a homomorphism");
                }
            }
        }
        let m = coset_order(g, &self.a, self.f);
        if g.pow(self.bf, m as i64) != at(g.pow(self.f, m as i64)) {
            return fail("B(f)^m = B(f^m) for the least m with f^m in A");
        }
        Ok(())
    }
}

/// Coset data for a fixed `(A, f)`: `x = f^k a` for every `x`, and the
/// cyclic subgroup `<f>`.
struct CosetTable {
    m: usize,
    /// `(k, position of a in A)` per element index.
    split: Vec<(usize, usize)>,
    powers: Vec<Element>,
}

impl CosetTable {
    fn new(g: &FiniteGroup, a: &Subgroup, f: Element) -> Result<Self> {
        let m = coset_order(g, a, f);
        let f_inv = g.inv(f);
        let mut split = Vec::with_capacity(g.order());
        for x in g.elements() {
            let (mut k, mut rest) = (0, x);
            while !a.contains(rest) {
                rest = g.mul(f_inv, rest);
                k += 1;
            }
            if k >= m {
                return Err(Error::Hypothesis(format!("{x} has no decomposition f^k a")));
            }
            split.push((k, a.elements().binary_search(&rest).expect("element of A")));
        }
        Ok(CosetTable { m, split, powers: closure(g, &[f]).elements().to_vec() })
    }

    fn build(&self, g: &FiniteGroup, data: &ExtensionData) -> Result<ExtensionOutcome> {
        let mut bf_powers = vec![Element::IDENTITY; self.m];
        for k in 1..self.m {
            bf_powers[k] = g.mul(bf_powers[k - 1], data.bf);
        }
        let candidate =
            GroupMap::new(self.split.iter().map(|&(k, i)| g.mul(bf_powers[k], data.ba[i])).collect());
        let is_rb = verify_rb(g, &candidate, VerifyMode::Full).holds();

        // [B~(t), y] in ker(B) for all t and all y in <f>.
        let condition_holds = g.elements().all(|x| {
            let xi = g.inv(x);
            let bt = g.mul(xi, candidate.apply(xi));
            self.powers.iter().all(|&y| candidate.apply(g.commutator(bt, y)).is_identity())
        });
        if is_rb != condition_holds {
            return Err(Error::Property {
                clause: "B is an RB operator iff [Im(B~), f] <= ker(B)".into(),
                witness: vec![data.f, data.bf],
            });
        }
        Ok(ExtensionOutcome { candidate, is_rb, condition_holds })
    }
}

/// Build `B(f^k a) = B(f)^k B(a)`, where `k` is the least non-negative
/// exponent with `f^{-k} g` in `A`, and test both sides of the criterion
/// `[Im(B~), f] <= ker(B)`.
pub fn extension_construct(g: &FiniteGroup, data: &ExtensionData) -> Result<ExtensionOutcome> {
    data.check(g)?;
    CosetTable::new(g, &data.a, data.f)?.build(g, data)
}

/// Upper bound on `|End(A)|`: each generator of a greedy generating set
/// (largest orders first) has at most as many images as `A` has elements
/// of order dividing its own.
fn endomorphism_bound(g: &FiniteGroup, a: &Subgroup) -> u128 {
    let mut by_order = a.elements().to_vec();
    by_order.sort_by_key(|&x| std::cmp::Reverse(g.order_of(x)));
    let mut span = Subgroup::trivial(g);
    let mut bound: u128 = 1;
    for x in by_order {
        if span.contains(x) {
            continue;
        }
        let o = g.order_of(x);
        bound = bound.saturating_mul(a.elements().iter().filter(|&&y| o.is_multiple_of(g.order_of(y))).count() as u128);
        span = span.extend(g, x);
    }
    bound
}

/// Visit every consistent `ExtensionData` on `g`: each normal abelian `A`
/// with cyclic quotient, every `f` with `<A, f> = G`, every endomorphism of
/// `A`, and every admissible `B(f)`. Returns the number visited.
///
/// Fails with a resource error when the search space bound exceeds
/// `caps.search_nodes`, before any data is built.
pub fn extension_for_each<F>(g: &FiniteGroup, caps: &Caps, mut visit: F) -> Result<usize>
where
    F: FnMut(&ExtensionData, &ExtensionOutcome),
{
    let lattice = SubgroupLattice::compute(g, g.order(), caps)?;
    let whole = Subgroup::whole(g);
    let mut plan = Vec::new();
    let mut bound: u128 = 0;
    for a in lattice.all() {
        if !a.is_abelian(g) || !is_normal(g, a, &whole) {
            continue;
        }
        let fs: Vec<Element> = g.elements().filter(|&x| a.extend(g, x).order() == g.order()).collect();
        if fs.is_empty() {
            continue;
        }
        bound = bound.saturating_add(
            (fs.len() as u128).saturating_mul(endomorphism_bound(g, a)).saturating_mul(a.order() as u128),
        );
        plan.push((a, fs));
    }
    if bound > caps.search_nodes as u128 {
        let value = u64::try_from(bound).unwrap_or(u64::MAX);
        return Err(Error::ResourceCap { what: "extension data", value, cap: caps.search_nodes });
    }

    let mut visited = 0;
    for (a, fs) in plan {
        let a_group = a.to_group(g);
        let ends = homomorphisms(&a_group, &a_group, caps)?;
        for &f in &fs {
            let table = CosetTable::new(g, a, f)?;
            let f_m = g.pow(f, table.m as i64);
            let f_m_at = a.elements().binary_search(&f_m).expect("f^m lies in A");
            for end in &ends {
                let ba: Vec<Element> = end.images().iter().map(|y| a.elements()[y.index()]).collect();
                let mut data = ExtensionData { a: a.clone(), f, ba, bf: Element::IDENTITY };
                for &bf in a.elements() {
                    if g.pow(bf, table.m as i64) != data.ba[f_m_at] {
                        continue;
                    }
                    data.bf = bf;
                    let outcome = table.build(g, &data)?;
                    visit(&data, &outcome);
                    visited += 1;
                }
            }
        }
    }
    Ok(visited)
}

/// [`extension_for_each`], collected.
pub fn extension_search(g: &FiniteGroup, caps: &Caps) -> Result<Vec<(ExtensionData, ExtensionOutcome)>> {
    let mut out = Vec::new();
    extension_for_each(g, caps, |d, o| out.push((d.clone(), o.clone())))?;
    Ok(out)
}

/// The non-splitting operator on the order-16 group `<a, b, c>` with
/// `a^4 = b^2 = c^2 = 1`, `[a,b] = [c,b] = 1`, `a^c = ab`.
#[derive(Clone, Debug)]
pub struct Paper16 {
    pub group: Arc<FiniteGroup>,
    pub operator: RbOperator,
    pub data: ExtensionData,
    pub a: Element,
    pub b: Element,
    pub c: Element,
    /// Normal form `(i, j, k)` of `a^i b^j c^k` for each element index.
    pub forms: Vec<(u8, u8, u8)>,
}

impl Paper16 {
    pub fn element(&self, form: (u8, u8, u8)) -> Element {
        Element::new(self.forms.iter().position(|&f| f == form).expect("normal form in range"))
    }
}

pub fn paper16_fixture() -> Result<Paper16> {
    let (group, forms) = paper16_with_normal_forms()?;
    let group = Arc::new(group.with_label("paper16"));
    let at = |form: (u8, u8, u8)| Element::new(forms.iter().position(|&f| f == form).expect("normal form"));
    let (a, b, c) = (at((1, 0, 0)), at((0, 1, 0)), at((0, 0, 1)));
    let a2 = group.mul(a, a);
    let sub = closure(&group, &[a2, b, c]);
    let a2b = group.mul(a2, b);
    let ba = extend_on_subgroup(&group, &sub, &[a2, b, c], &[Element::IDENTITY, a2b, group.mul(a2b, c)], &group)?;
    let data = ExtensionData { a: sub, f: a, ba, bf: a2 };
    let outcome = extension_construct(&group, &data)?;
    let operator = RbOperator::verify(group.clone(), outcome.candidate, VerifyMode::Full)?;
    Ok(Paper16 { group, operator, data, a, b, c, forms })
}

/// Exact factorizations whose splitting operator (either order) equals `b`.
pub fn splitting_sources(b: &RbOperator, caps: &Caps) -> Result<Vec<(Factorization, FactorOrder)>> {
    let g = b.shared_group();
    let mut out = Vec::new();
    for f in exact_factorizations(g, caps)? {
        for order in [FactorOrder::HL, FactorOrder::LH] {
            if splitting_from_exact(g, &f, order)?.map() == b.map() {
                out.push((f.clone(), order));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::named_group;

    fn shared(id: &str) -> Arc<FiniteGroup> {
        Arc::new(named_group(id).unwrap())
    }

    #[test]
    fn z6_splitting_is_endomorphism() {
        let g = shared("cyclic:6");
        let fs = exact_factorizations(&g, &Caps::default()).unwrap();
        let f = fs.iter().find(|f| !f.is_trivial()).unwrap();
        let b = splitting_from_exact(&g, f, FactorOrder::HL).unwrap();
        assert!(b.is_splitting());
        assert!(b.map().is_homomorphism(&g, &g));
    }

    #[test]
    fn trivial_factorization_gives_be() {
        let g = shared("symmetric:3");
        let f = Factorization::new(&g, &Subgroup::whole(&g), &Subgroup::trivial(&g)).unwrap();
        let b = splitting_from_exact(&g, &f, FactorOrder::HL).unwrap();
        assert_eq!(b, RbOperator::trivial_identity(g.clone()));
        let b = splitting_from_exact(&g, &f, FactorOrder::LH).unwrap();
        assert_eq!(b, RbOperator::trivial_inverse(g));
    }

    #[test]
    fn parity_into_transposition_subgroup() {
        let g = shared("symmetric:3");
        let perms = g.permutations().unwrap();
        let t = g.elements().find(|&x| g.order_of(x) == 2).unwrap();
        let h = closure(&g, &[t]);
        let phi = GroupMap::new(
            g.elements().map(|x| if perms[x.index()].sign() < 0 { t } else { Element::IDENTITY }).collect(),
        );
        let b = hom_to_abelian(&g, &h, &phi, false).unwrap();
        assert_eq!(b.image().unwrap().order(), 2);
        let zero = GroupMap::new(vec![Element::IDENTITY; 6]);
        assert_eq!(hom_to_abelian(&g, &h, &zero, true).unwrap(), RbOperator::trivial_identity(g.clone()));
        assert!(hom_to_abelian(&g, &Subgroup::whole(&g), &GroupMap::identity(&g), false).is_err());
    }

    #[test]
    fn lift_of_trivial_operators() {
        let g = shared("psl2:7");
        let fs = exact_factorizations(&g, &Caps::default()).unwrap();
        let f = fs.iter().find(|f| f.left.order() == 24).unwrap();
        let l_group = Arc::new(f.right.to_group(&g));
        let inv = lift_from_factor(&g, &f.left, &f.right, &RbOperator::trivial_inverse(l_group)).unwrap();
        assert_eq!(inv, splitting_from_exact(&g, f, FactorOrder::HL).unwrap());

        // With H normal, every C lifts; C = B_e lifts to B_e.
        let s3 = shared("symmetric:3");
        let t = s3.elements().find(|&x| s3.order_of(x) == 2).unwrap();
        let three = s3.elements().find(|&x| s3.order_of(x) == 3).unwrap();
        let (h, l) = (closure(&s3, &[three]), closure(&s3, &[t]));
        let l_group = Arc::new(l.to_group(&s3));
        let be = lift_from_factor(&s3, &h, &l, &RbOperator::trivial_identity(l_group)).unwrap();
        assert_eq!(be, RbOperator::trivial_identity(s3.clone()));
    }

    #[test]
    fn lift_rejects_non_normalizing_image() {
        let g = shared("symmetric:3");
        let t = g.elements().find(|&x| g.order_of(x) == 2).unwrap();
        let three = g.elements().find(|&x| g.order_of(x) == 3).unwrap();
        let h = closure(&g, &[t]);
        let l = closure(&g, &[three]);
        // L = A3 is abelian; C = inversion has C~ = e and always lifts.
        let l_group = Arc::new(l.to_group(&g));
        assert!(lift_from_factor(&g, &h, &l, &RbOperator::trivial_inverse(l_group.clone())).is_ok());
        // C = B_e has C~ = inversion, image L, which does not normalize H.
        let err = lift_from_factor(&g, &h, &l, &RbOperator::trivial_identity(l_group)).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
    }

    #[test]
    fn lemma_r2_on_small_groups() {
        for id in ["symmetric:4", "dihedral:8", "dihedral:12"] {
            let g = shared(id);
            let found = lemma_r2_search(&g, &Caps::default()).unwrap();
            for inst in &found {
                let b = lemma_r2_construct(&g, inst).unwrap();
                assert!(verify_rb(&g, b.map(), VerifyMode::Full).holds());
            }
        }
        assert!(lemma_r2_search(&shared("cyclic:9"), &Caps::default()).unwrap().is_empty());
        // Z2 = 1·Z2 is exact with H = K = R, so the degenerate instance exists
        // and yields B_e.
        let z2 = shared("cyclic:2");
        let found = lemma_r2_search(&z2, &Caps::default()).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(lemma_r2_construct(&z2, &found[0]).unwrap(), RbOperator::trivial_identity(z2.clone()));
    }

    #[test]
    fn lemma_r2_rejects_order_three_intersection() {
        let g = shared("symmetric:3");
        let whole = Subgroup::whole(&g);
        let three = g.elements().find(|&x| g.order_of(x) == 3).unwrap();
        let a3 = closure(&g, &[three]);
        let err = LemmaR2Instance::new(&g, a3.clone(), a3.clone(), Subgroup::trivial(&g), Subgroup::trivial(&g));
        assert!(err.is_err());
        let err = LemmaR2Instance::new(&g, whole.clone(), whole, a3, Subgroup::trivial(&g));
        assert!(err.is_err());
    }

    #[test]
    fn paper16_operator() {
        let p = paper16_fixture().unwrap();
        let g = &p.group;
        assert_eq!(g.order(), 16);
        let b = &p.operator;
        let a2 = g.mul(p.a, p.a);
        assert_eq!(b.apply(p.a), a2);
        assert_eq!(b.apply(a2), Element::IDENTITY);
        assert_eq!(b.apply(p.b), g.mul(a2, p.b));
        assert!(!b.is_splitting());
        assert_eq!(b.btilde().unwrap().image().unwrap(), closure(g, &[p.a, p.b]));
        assert!(b.map().homomorphism_witness(g, g).is_some());
        assert!(b.map().antihomomorphism_witness(g, g).is_some());
        assert!(splitting_sources(b, &Caps::default()).unwrap().is_empty());
    }

    #[test]
    fn extension_trivial_data_gives_be() {
        let p = paper16_fixture().unwrap();
        let data = ExtensionData {
            a: p.data.a.clone(),
            f: p.a,
            ba: vec![Element::IDENTITY; 8],
            bf: Element::IDENTITY,
        };
        let out = extension_construct(&p.group, &data).unwrap();
        assert!(out.is_rb && out.condition_holds);
        assert!(out.candidate.images().iter().all(|x| x.is_identity()));
    }

    #[test]
    fn extension_search_has_failing_cases_on_d8() {
        let g = named_group("dihedral:8").unwrap();
        let results = extension_search(&g, &Caps::default()).unwrap();
        assert!(results.iter().any(|(_, o)| !o.is_rb));
        assert!(results.iter().any(|(_, o)| o.is_rb));
    }

    #[test]
    fn searched_data_agrees_with_direct_construction() {
        let g = named_group("quaternion:8").unwrap();
        let mut seen = 0;
        extension_for_each(&g, &Caps::default(), |data, outcome| {
            data.check(&g).unwrap();
            assert_eq!(&extension_construct(&g, data).unwrap(), outcome);
            seen += 1;
        })
        .unwrap();
        assert_eq!(seen, 96);
    }

    #[test]
    fn extension_search_space_is_capped() {
        let g = named_group("elemabelian:2:5").unwrap();
        let err = extension_for_each(&g, &Caps::default(), |_, _| {}).unwrap_err();
        assert!(err.is_resource(), "{err}");
        let g = named_group("abelian:4,4").unwrap();
        assert_eq!(endomorphism_bound(&g, &Subgroup::whole(&g)), 256);
    }
}
