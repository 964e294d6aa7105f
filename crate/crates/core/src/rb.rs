//! Rota–Baxter operators of weight 1: `B(g)B(h) = B(g B(g) h B(g)^{-1})`.

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::limits::Caps;
use crate::morphism::GroupMap;
use crate::naming::{fingerprint, Fingerprint};
use crate::subgroup::{is_normal, product_set, quotient, Subgroup};

/// How much of the pair space a verification covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum VerifyMode {
    Full,
    Sampled { seed: u64, count: u64 },
}

impl VerifyMode {
    /// Full below the cap, sampled above it.
    pub fn for_order(n: usize, caps: &Caps, seed: u64) -> Self {
        if n <= caps.full_verify_order {
            VerifyMode::Full
        } else {
            VerifyMode::Sampled { seed, count: caps.sample_count }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    /// The least failing pair among those examined.
    Fails { g: Element, h: Element },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

#[inline]
fn identity_holds(g: &FiniteGroup, b: &GroupMap, x: Element, y: Element) -> bool {
    let bx = b.apply(x);
    let lhs = g.mul(bx, b.apply(y));
    let arg = g.mul(g.mul3(x, bx, y), g.inv(bx));
    lhs == b.apply(arg)
}

const PARALLEL_PAIRS: usize = 1 << 14;

/// Check the Rota–Baxter identity for `b` on `g`.
pub fn verify_rb(g: &FiniteGroup, b: &GroupMap, mode: VerifyMode) -> Verdict {
    let n = g.order();
    match mode {
        VerifyMode::Full => {
            let row = |i: usize| {
                let x = Element::new(i);
                g.elements().find(|&y| !identity_holds(g, b, x, y)).map(|y| (x, y))
            };
            // Below this many pairs the thread pool costs more than the scan.
            let hit = if n * n < PARALLEL_PAIRS { (0..n).find_map(row) } else { (0..n).into_par_iter().find_map_first(row) };
            match hit {
                None => Verdict::Holds,
                Some((x, y)) => Verdict::Fails { g: x, h: y },
            }
        }
        VerifyMode::Sampled { seed, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut worst: Option<(Element, Element)> = None;
            for _ in 0..count {
                let x = Element::new(rng.gen_range(0..n));
                let y = Element::new(rng.gen_range(0..n));
                if !identity_holds(g, b, x, y) && worst.is_none_or(|w| (x, y) < w) {
                    worst = Some((x, y));
                }
            }
            match worst {
                None => Verdict::Holds,
                Some((x, y)) => Verdict::Fails { g: x, h: y },
            }
        }
    }
}

/// Provenance of an operator's verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Verification {
    Unchecked,
    Full,
    Sampled { seed: u64, count: u64 },
}

impl From<VerifyMode> for Verification {
    fn from(m: VerifyMode) -> Self {
        match m {
            VerifyMode::Full => Verification::Full,
            VerifyMode::Sampled { seed, count } => Verification::Sampled { seed, count },
        }
    }
}

/// A verified Rota–Baxter operator on a shared group.
#[derive(Clone, Debug)]
pub struct RbOperator {
    group: Arc<FiniteGroup>,
    map: GroupMap,
    verification: Verification,
}

impl PartialEq for RbOperator {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) && self.map == other.map
    }
}

impl Eq for RbOperator {}

fn property(clause: &str, witness: Vec<Element>) -> Error {
    Error::Property { clause: clause.to_string(), witness }
}

impl RbOperator {
    /// Verify `map` and wrap it; fails with the least witness pair.
    pub fn verify(group: Arc<FiniteGroup>, map: GroupMap, mode: VerifyMode) -> Result<Self> {
        let map = GroupMap::checked(map.into_images(), &group, &group)?;
        match verify_rb(&group, &map, mode) {
            Verdict::Holds => Ok(RbOperator { group, map, verification: mode.into() }),
            Verdict::Fails { g, h } => Err(Error::NotRotaBaxter { g, h }),
        }
    }

    /// Verify with the mode the caps prescribe for this group order.
    pub fn checked(group: Arc<FiniteGroup>, map: GroupMap, caps: &Caps, seed: u64) -> Result<Self> {
        let mode = VerifyMode::for_order(group.order(), caps, seed);
        Self::verify(group, map, mode)
    }

    /// `B_e: g -> e`.
    pub fn trivial_identity(group: Arc<FiniteGroup>) -> Self {
        let map = GroupMap::new(vec![Element::IDENTITY; group.order()]);
        RbOperator { group, map, verification: Verification::Full }
    }

    /// `B_{-1}: g -> g^{-1}`.
    pub fn trivial_inverse(group: Arc<FiniteGroup>) -> Self {
        let map = GroupMap::new(group.elements().map(|x| group.inv(x)).collect());
        RbOperator { group, map, verification: Verification::Full }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn shared_group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn map(&self) -> &GroupMap {
        &self.map
    }

    pub fn images(&self) -> &[Element] {
        self.map.images()
    }

    #[inline]
    pub fn apply(&self, x: Element) -> Element {
        self.map.apply(x)
    }

    pub fn verification(&self) -> Verification {
        self.verification
    }

    fn mode(&self) -> VerifyMode {
        match self.verification {
            Verification::Sampled { seed, count } => VerifyMode::Sampled { seed, count },
            _ => VerifyMode::Full,
        }
    }

    fn btilde_map(&self) -> GroupMap {
        let g = &self.group;
        GroupMap::new(g.elements().map(|x| g.mul(g.inv(x), self.apply(g.inv(x)))).collect())
    }

    /// `B~(g) = g^{-1} B(g^{-1})`, re-verified.
    pub fn btilde(&self) -> Result<Self> {
        Self::verify(self.group.clone(), self.btilde_map(), self.mode())
    }

    /// `phi^{-1} B phi`, re-verified; `phi` must be an automorphism.
    pub fn conjugate_rb(&self, phi: &GroupMap) -> Result<Self> {
        let g = &self.group;
        let inv = phi
            .inverse()
            .filter(|_| phi.len() == g.order())
            .ok_or_else(|| Error::InvalidInput("conjugating map is not a bijection".into()))?;
        if let Some((x, y)) = phi.homomorphism_witness(g, g) {
            return Err(Error::NotHomomorphism(x, y));
        }
        let map = GroupMap::new(g.elements().map(|x| inv.apply(self.apply(phi.apply(x)))).collect());
        Self::verify(self.group.clone(), map, self.mode())
    }

    fn subgroup_of(&self, bits: FixedBitSet, what: &str) -> Result<Subgroup> {
        Subgroup::from_members(&self.group, bits)
            .map_err(|_| property(&format!("{what} is a subgroup"), Vec::new()))
    }

    pub fn image(&self) -> Result<Subgroup> {
        let mut bits = FixedBitSet::with_capacity(self.group.order());
        self.images().iter().for_each(|y| bits.insert(y.index()));
        self.subgroup_of(bits, "Im(B)")
    }

    pub fn kernel(&self) -> Result<Subgroup> {
        let mut bits = FixedBitSet::with_capacity(self.group.order());
        for x in self.group.elements() {
            if self.apply(x).is_identity() {
                bits.insert(x.index());
            }
        }
        self.subgroup_of(bits, "ker(B)")
    }

    /// Cayley table of `g ∘ h = g B(g) h B(g)^{-1}`.
    fn derived_table(&self) -> Vec<u16> {
        let g = &self.group;
        let mut table = Vec::with_capacity(g.order() * g.order());
        for x in g.elements() {
            let bx = self.apply(x);
            let left = g.mul(x, bx);
            let right = g.inv(bx);
            table.extend(g.elements().map(|y| g.mul3(left, y, right).index() as u16));
        }
        table
    }

    /// `(G, ∘)` on the same index set; checks the group axioms and that
    /// `B: (G, ∘) -> (G, ·)` is a homomorphism.
    pub fn derived_group(&self) -> Result<FiniteGroup> {
        let n = self.group.order();
        if n > u16::MAX as usize + 1 {
            return Err(Error::cap("derived group order", n, u16::MAX as usize + 1));
        }
        let dg = FiniteGroup::from_flat_table(n, self.derived_table())
            .map_err(|e| property(&format!("derived product is a group: {e}"), Vec::new()))?;
        if let Some((x, y)) = self.map.homomorphism_witness(&dg, &self.group) {
            return Err(property("B is a homomorphism from the derived group", vec![x, y]));
        }
        Ok(dg)
    }

    /// `B(B~(g)) = e` for all `g`.
    pub fn is_splitting(&self) -> bool {
        let bt = self.btilde_map();
        self.group.elements().all(|x| self.apply(bt.apply(x)).is_identity())
    }

    /// `Im(B B~)` as a set size.
    pub fn image_of_composite_order(&self) -> usize {
        let bt = self.btilde_map();
        let mut bits = FixedBitSet::with_capacity(self.group.order());
        for x in self.group.elements() {
            bits.insert(self.apply(bt.apply(x)).index());
        }
        bits.count_ones(..)
    }

    /// Clauses (b), (c), (d): `B(e) = e`; `B(g)^{-1} = B(B(g)^{-1} g^{-1} B(g))`;
    /// `B(gh) = B(h)` for `g` in the kernel.
    pub fn prop_initial_suite(&self) -> Result<()> {
        let g = &self.group;
        if !self.apply(Element::IDENTITY).is_identity() {
            return Err(property("B(e) = e", vec![Element::IDENTITY]));
        }
        for x in g.elements() {
            let bx = self.apply(x);
            let arg = g.mul3(g.inv(bx), g.inv(x), bx);
            if g.inv(bx) != self.apply(arg) {
                return Err(property("B(g)^-1 = B(B(g)^-1 g^-1 B(g))", vec![x]));
            }
        }
        for k in g.elements().filter(|&k| self.apply(k).is_identity()) {
            for h in g.elements() {
                if self.apply(g.mul(k, h)) != self.apply(h) {
                    return Err(property("B(gh) = B(h) for g in ker(B)", vec![k, h]));
                }
            }
        }
        Ok(())
    }

    /// Subgroups attached to `B` and `B~` with every structural relation checked.
    pub fn structure_report(&self) -> Result<RbStructureReport> {
        let g = &*self.group;
        let bt = self.btilde()?;
        let image = self.image()?;
        let kernel = self.kernel()?;
        let image_tilde = bt.image()?;
        let kernel_tilde = bt.kernel()?;
        let r = image.intersection(&image_tilde, g);

        if !is_normal(g, &kernel_tilde, &image) {
            return Err(property("ker(B~) is normal in Im(B)", kernel_tilde.generators().to_vec()));
        }
        if !is_normal(g, &kernel, &image_tilde) {
            return Err(property("ker(B) is normal in Im(B~)", kernel.generators().to_vec()));
        }
        let q_tilde = quotient(g, &image_tilde, &kernel)?;
        let q_image = quotient(g, &image, &kernel_tilde)?;
        if q_tilde.group.order() != q_image.group.order() {
            return Err(property("|Im(B~)/ker(B)| = |Im(B)/ker(B~)|", Vec::new()));
        }
        let quotient_fingerprint = fingerprint(&q_image.group);
        if fingerprint(&q_tilde.group) != quotient_fingerprint {
            return Err(property("Im(B~)/ker(B) and Im(B)/ker(B~) share a fingerprint", Vec::new()));
        }
        if product_set(g, &image_tilde, &image).count_ones(..) != g.order() {
            return Err(property("G = Im(B~) Im(B)", Vec::new()));
        }

        let dg = self.derived_group()?;
        for (sub, clause) in [(&kernel, "ker(B) is normal in the derived group"), (&kernel_tilde, "ker(B~) is normal in the derived group")] {
            let inside = Subgroup::from_members(&dg, sub.members().clone())
                .map_err(|_| property(clause, Vec::new()))?;
            if !is_normal(&dg, &inside, &Subgroup::whole(&dg)) {
                return Err(property(clause, Vec::new()));
            }
        }
        // B is a homomorphism (G, ∘) -> (G, ·) with kernel ker(B) and image Im(B),
        // which realizes the quotient isomorphism.
        Ok(RbStructureReport {
            splitting: self.is_splitting(),
            quotient_order: q_image.group.order(),
            quotient_fingerprint,
            quotient_iso_checked: true,
            factorization_checked: true,
            image,
            kernel,
            image_tilde,
            kernel_tilde,
            r,
        })
    }

    /// Checks the restriction statement for `B~` on `Im(B)` when its
    /// hypotheses hold.
    pub fn lemma_old_diagnostic(&self) -> Result<LemmaOldOutcome> {
        let g = &*self.group;
        let bt = self.btilde()?;
        let image = self.image()?;
        let image_tilde = bt.image()?;
        let kernel = self.kernel()?;
        let r = image.intersection(&image_tilde, g);
        if !r.is_abelian(g) {
            return Ok(LemmaOldOutcome::HypothesesNotMet("Im(B) ∩ Im(B~) is not abelian".into()));
        }
        if product_set(g, &kernel, &image).count_ones(..) != g.order() {
            return Ok(LemmaOldOutcome::HypothesesNotMet("G is not ker(B) Im(B)".into()));
        }
        for &x in image.elements() {
            for &y in image.elements() {
                if bt.apply(g.mul(x, y)) != g.mul(bt.apply(x), bt.apply(y)) {
                    return Err(property("B~ restricted to Im(B) is a homomorphism", vec![x, y]));
                }
            }
        }
        let mut restricted = FixedBitSet::with_capacity(g.order());
        image.elements().iter().for_each(|&x| restricted.insert(bt.apply(x).index()));
        if restricted != *r.members() {
            return Err(property("B~(Im(B)) = Im(B) ∩ Im(B~)", Vec::new()));
        }
        Ok(LemmaOldOutcome::Holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "reason", rename_all = "snake_case")]
pub enum LemmaOldOutcome {
    Holds,
    HypothesesNotMet(String),
}

#[derive(Clone, Debug)]
pub struct RbStructureReport {
    pub image: Subgroup,
    pub kernel: Subgroup,
    pub image_tilde: Subgroup,
    pub kernel_tilde: Subgroup,
    /// `Im(B) ∩ Im(B~)`.
    pub r: Subgroup,
    pub splitting: bool,
    /// `|Im(B)/ker(B~)|`.
    pub quotient_order: usize,
    pub quotient_fingerprint: Fingerprint,
    pub quotient_iso_checked: bool,
    pub factorization_checked: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::named_group;

    fn shared(id: &str) -> Arc<FiniteGroup> {
        Arc::new(named_group(id).unwrap())
    }

    #[test]
    fn trivial_operators_verify() {
        for id in ["symmetric:3", "dihedral:8", "psl2:7"] {
            let g = shared(id);
            let e = RbOperator::trivial_identity(g.clone());
            let inv = RbOperator::trivial_inverse(g.clone());
            assert!(verify_rb(&g, e.map(), VerifyMode::Full).holds());
            assert!(verify_rb(&g, inv.map(), VerifyMode::Full).holds());
            assert_eq!(e.btilde().unwrap(), inv);
            assert_eq!(inv.btilde().unwrap(), e);
            assert_eq!(e.kernel().unwrap().order(), g.order());
            assert_eq!(inv.kernel().unwrap().order(), 1);
            assert!(e.is_splitting() && inv.is_splitting());
        }
    }

    #[test]
    fn identity_must_fix_e() {
        let g = shared("cyclic:2");
        let map = GroupMap::new(vec![Element::new(1), Element::new(1)]);
        let v = verify_rb(&g, &map, VerifyMode::Full);
        assert_eq!(v, Verdict::Fails { g: Element::new(0), h: Element::new(0) });
        assert!(matches!(RbOperator::verify(g, map, VerifyMode::Full), Err(Error::NotRotaBaxter { .. })));
    }

    #[test]
    fn sampled_mode_reports_least_sampled_witness() {
        let g = shared("symmetric:4");
        let mut images: Vec<Element> = g.elements().map(|x| g.inv(x)).collect();
        images[5] = Element::new(7);
        let map = GroupMap::new(images);
        let full = verify_rb(&g, &map, VerifyMode::Full);
        assert!(!full.holds());
        let sampled = verify_rb(&g, &map, VerifyMode::Sampled { seed: 1, count: 5000 });
        assert!(!sampled.holds());
    }

    #[test]
    fn derived_group_of_inverse_is_opposite() {
        let g = shared("symmetric:3");
        let inv = RbOperator::trivial_inverse(g.clone());
        let dg = inv.derived_group().unwrap();
        for x in g.elements() {
            for y in g.elements() {
                assert_eq!(dg.mul(x, y), g.mul(y, x));
            }
        }
        let e = RbOperator::trivial_identity(g.clone());
        let dg = e.derived_group().unwrap();
        assert_eq!(dg.cayley_rows(), g.cayley_rows());
    }

    #[test]
    fn suites_pass_on_trivial_operators() {
        let g = shared("dihedral:8");
        let inv = RbOperator::trivial_inverse(g.clone());
        inv.prop_initial_suite().unwrap();
        let e = RbOperator::trivial_identity(g);
        let report = e.structure_report().unwrap();
        assert_eq!(report.image.order(), 1);
        assert_eq!(report.image_tilde.order(), 8);
        assert_eq!(e.lemma_old_diagnostic().unwrap(), LemmaOldOutcome::Holds);
    }

    #[test]
    fn conjugation_by_identity_is_noop() {
        let g = shared("symmetric:3");
        let inv = RbOperator::trivial_inverse(g.clone());
        assert_eq!(inv.conjugate_rb(&GroupMap::identity(&g)).unwrap(), inv);
        let bad = GroupMap::new(vec![Element::IDENTITY; 6]);
        assert!(inv.conjugate_rb(&bad).is_err());
    }
}
