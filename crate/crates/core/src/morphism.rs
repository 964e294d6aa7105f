//! Maps between groups, homomorphism checks and automorphism search.
//!
//! Automorphisms (and isomorphisms) are found by backtracking over images
//! of a small generating set. Candidate images must match the generator's
//! element order and conjugacy-class size; pairs of images must also match
//! the orders and class sizes of `g_i g_j` and `g_i g_j^{-1}`. Each complete
//! assignment is extended along a spanning tree of the Cayley graph and then
//! checked against every edge of that graph.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::limits::Caps;
use crate::subgroup::{closure, Subgroup};

/// A total map on element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupMap {
    images: Vec<Element>,
}

impl GroupMap {
    pub fn new(images: Vec<Element>) -> Self {
        GroupMap { images }
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        GroupMap { images: g.elements().collect() }
    }

    /// Check lengths and ranges against `source -> target`.
    pub fn checked(images: Vec<Element>, source: &FiniteGroup, target: &FiniteGroup) -> Result<Self> {
        if images.len() != source.order() {
            return Err(Error::InvalidInput(format!(
                "map has {} images, group has {} elements",
                images.len(),
                source.order()
            )));
        }
        for &y in &images {
            target.element(y.index())?;
        }
        Ok(GroupMap { images })
    }

    #[inline]
    pub fn apply(&self, x: Element) -> Element {
        self.images[x.index()]
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn into_images(self) -> Vec<Element> {
        self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `x -> then(self(x))`.
    pub fn then(&self, then: &GroupMap) -> GroupMap {
        GroupMap { images: self.images.iter().map(|&y| then.apply(y)).collect() }
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.images.len());
        self.images.iter().all(|y| {
            let fresh = y.index() < self.images.len() && !seen.contains(y.index());
            if fresh {
                seen.insert(y.index());
            }
            fresh
        })
    }

    pub fn inverse(&self) -> Option<GroupMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![Element::IDENTITY; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y.index()] = Element::new(x);
        }
        Some(GroupMap { images: inv })
    }

    /// Least pair `(x, y)` with `f(xy) != f(x) f(y)`, if any.
    pub fn homomorphism_witness(&self, src: &FiniteGroup, dst: &FiniteGroup) -> Option<(Element, Element)> {
        self.witness_on(src, dst, src.elements(), false)
    }

    /// Least pair `(x, y)` with `f(xy) != f(y) f(x)`, if any.
    pub fn antihomomorphism_witness(
        &self,
        src: &FiniteGroup,
        dst: &FiniteGroup,
    ) -> Option<(Element, Element)> {
        self.witness_on(src, dst, src.elements(), true)
    }

    /// Homomorphism check restricted to a subgroup of the source.
    pub fn homomorphism_witness_on(
        &self,
        g: &FiniteGroup,
        domain: &Subgroup,
    ) -> Option<(Element, Element)> {
        self.witness_on(g, g, domain.elements().iter().copied(), false)
    }

    fn witness_on<I>(&self, src: &FiniteGroup, dst: &FiniteGroup, domain: I, anti: bool) -> Option<(Element, Element)>
    where
        I: Iterator<Item = Element> + Clone,
    {
        for x in domain.clone() {
            for y in domain.clone() {
                let lhs = self.apply(src.mul(x, y));
                let rhs = if anti {
                    dst.mul(self.apply(y), self.apply(x))
                } else {
                    dst.mul(self.apply(x), self.apply(y))
                };
                if lhs != rhs {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_homomorphism(&self, src: &FiniteGroup, dst: &FiniteGroup) -> bool {
        self.homomorphism_witness(src, dst).is_none()
    }

    pub fn is_automorphism(&self, g: &FiniteGroup) -> bool {
        self.len() == g.order() && self.is_bijective() && self.is_homomorphism(g, g)
    }
}

/// `alpha_x: g -> g^x = x^{-1} g x`.
pub fn inner_automorphism(g: &FiniteGroup, x: Element) -> GroupMap {
    GroupMap { images: g.elements().map(|y| g.conjugate(y, x)).collect() }
}

/// Element fingerprint preserved by isomorphisms.
fn profile(g: &FiniteGroup, x: Element) -> (usize, usize) {
    (g.order_of(x), g.conjugacy_classes().size_of_class_of(x))
}

/// A generating set of at most a few elements, preferring two generators
/// whose candidate image sets are small.
pub fn small_generating_set(g: &FiniteGroup) -> Vec<Element> {
    let n = g.order();
    if n == 1 {
        return Vec::new();
    }
    if let Some(x) = g.elements().find(|&x| g.order_of(x) == n) {
        return vec![x];
    }
    let mut profile_count = std::collections::HashMap::new();
    for x in g.elements() {
        *profile_count.entry(profile(g, x)).or_insert(0usize) += 1;
    }
    let mut reps: Vec<Element> = g.conjugacy_classes().classes().iter().map(|c| c[0]).collect();
    reps.retain(|x| !x.is_identity());
    reps.sort_by_key(|&x| (profile_count[&profile(g, x)], std::cmp::Reverse(g.order_of(x)), x));
    let whole_above = n / g.smallest_prime_divisor();
    for &x in &reps {
        let cx = closure(g, &[x]);
        for y in g.elements() {
            if let Some(k) = cx.extend_bounded(g, y, n, whole_above) {
                if k.order() == n {
                    return vec![x, y];
                }
            }
        }
    }
    // Not two-generated: keep an irredundant subset of the stored generators.
    let mut gens: Vec<Element> = Vec::new();
    let mut h = Subgroup::trivial(g);
    let mut pool: Vec<Element> = g.generators().to_vec();
    pool.sort_by_key(|&x| std::cmp::Reverse(g.order_of(x)));
    for x in pool {
        if !h.contains(x) {
            h = h.extend(g, x);
            gens.push(x);
        }
    }
    gens
}

/// BFS spanning tree of the Cayley graph: `(y, parent, s)` with `y = parent * gens[s]`.
fn spanning_tree(g: &FiniteGroup, gens: &[Element]) -> Vec<(Element, Element, usize)> {
    let mut seen = FixedBitSet::with_capacity(g.order());
    seen.insert(0);
    let mut order = vec![Element::IDENTITY];
    let mut tree = Vec::with_capacity(g.order());
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        for (s, &gen) in gens.iter().enumerate() {
            let y = g.mul(x, gen);
            if !seen.contains(y.index()) {
                seen.insert(y.index());
                order.push(y);
                tree.push((y, x, s));
            }
        }
        i += 1;
    }
    tree
}

struct IsoSearch<'a> {
    src: &'a FiniteGroup,
    dst: &'a FiniteGroup,
    gens: Vec<Element>,
    tree: Vec<(Element, Element, usize)>,
    candidates: Vec<Vec<Element>>,
    budget: u64,
    nodes: AtomicU64,
}

impl<'a> IsoSearch<'a> {
    fn new(src: &'a FiniteGroup, dst: &'a FiniteGroup, budget: u64) -> Self {
        let gens = small_generating_set(src);
        let tree = spanning_tree(src, &gens);
        let candidates = gens
            .iter()
            .map(|&s| {
                let p = profile(src, s);
                dst.elements().filter(|&y| profile(dst, y) == p).collect()
            })
            .collect();
        IsoSearch { src, dst, gens, tree, candidates, budget, nodes: AtomicU64::new(0) }
    }

    fn compatible(&self, images: &[Element], next: Element) -> bool {
        let i = images.len();
        let (src, dst) = (self.src, self.dst);
        images.iter().enumerate().all(|(j, &a)| {
            let (gj, gi) = (self.gens[j], self.gens[i]);
            a != next
                && profile(src, src.mul(gj, gi)) == profile(dst, dst.mul(a, next))
                && profile(src, src.mul(gj, src.inv(gi))) == profile(dst, dst.mul(a, dst.inv(next)))
        })
    }

    /// Extend generator images to a full map and check it is an isomorphism.
    fn realize(&self, images: &[Element]) -> Option<GroupMap> {
        let n = self.src.order();
        if n != self.dst.order() {
            return None;
        }
        let mut map = vec![Element::IDENTITY; n];
        for &(y, p, s) in &self.tree {
            map[y.index()] = self.dst.mul(map[p.index()], images[s]);
        }
        for x in self.src.elements() {
            for (s, &gen) in self.gens.iter().enumerate() {
                if map[self.src.mul(x, gen).index()] != self.dst.mul(map[x.index()], images[s]) {
                    return None;
                }
            }
        }
        let map = GroupMap { images: map };
        map.is_bijective().then_some(map)
    }

    /// Depth-first over the remaining generators; `visit` returns false to stop.
    fn dfs(&self, images: &mut Vec<Element>, visit: &mut dyn FnMut(&[Element], GroupMap) -> bool) -> Result<bool> {
        if images.len() == self.gens.len() {
            if let Some(m) = self.realize(images) {
                return Ok(visit(images, m));
            }
            return Ok(true);
        }
        let depth = images.len();
        for &c in &self.candidates[depth] {
            let used = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
            if used > self.budget {
                return Err(Error::ResourceCap {
                    what: "homomorphism search nodes",
                    value: used,
                    cap: self.budget,
                });
            }
            if !self.compatible(images, c) {
                continue;
            }
            images.push(c);
            let go_on = self.dfs(images, visit)?;
            images.pop();
            if !go_on {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every isomorphism as its tuple of generator images, sorted.
    fn all_tuples(&self) -> Result<Vec<Vec<Element>>> {
        if self.gens.is_empty() {
            return Ok(if self.dst.order() == 1 { vec![Vec::new()] } else { Vec::new() });
        }
        let branches: Vec<Result<Vec<Vec<Element>>>> = self.candidates[0]
            .par_iter()
            .map(|&c| {
                let mut found = Vec::new();
                let mut images = vec![c];
                self.dfs(&mut images, &mut |t, _| {
                    found.push(t.to_vec());
                    true
                })?;
                Ok(found)
            })
            .collect();
        let mut out = Vec::new();
        for b in branches {
            out.extend(b?);
        }
        out.sort();
        Ok(out)
    }

    fn first(&self) -> Result<Option<GroupMap>> {
        if self.src.order() != self.dst.order() {
            return Ok(None);
        }
        if self.gens.is_empty() {
            return Ok(Some(GroupMap::identity(self.src)));
        }
        let mut hit = None;
        self.dfs(&mut Vec::new(), &mut |_, m| {
            hit = Some(m);
            false
        })?;
        Ok(hit)
    }
}

/// An automorphism with its inner/outer flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    pub map: GroupMap,
    pub inner: bool,
}

/// Aut(G) described by a generating set plus counts.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    /// Generators: inner automorphisms of the group generators first, then
    /// outer automorphisms in search order as needed.
    pub generators: Vec<GroupMap>,
    pub order: usize,
    pub inner_order: usize,
    tuples: Vec<Vec<Element>>,
    inner_tuples: HashSet<Vec<Element>>,
    search_gens: Vec<Element>,
}

impl AutomorphismGroup {
    pub fn compute(g: &FiniteGroup, caps: &Caps) -> Result<Self> {
        let search = IsoSearch::new(g, g, caps.search_nodes);
        let tuples = search.all_tuples()?;
        let gens = search.gens.clone();
        let inner_tuples: HashSet<Vec<Element>> = g
            .elements()
            .map(|x| gens.iter().map(|&s| g.conjugate(s, x)).collect())
            .collect();

        let mut generators: Vec<GroupMap> = Vec::new();
        for &x in g.generators() {
            let a = inner_automorphism(g, x);
            if a != GroupMap::identity(g) && !generators.contains(&a) {
                generators.push(a);
            }
        }
        let mut reached = tuple_closure(&gens, &generators);
        for t in &tuples {
            if !reached.contains(t) {
                let m = search.realize(t).expect("tuple came from a realized automorphism");
                generators.push(m);
                reached = tuple_closure(&gens, &generators);
            }
        }
        debug_assert_eq!(reached.len(), tuples.len());
        Ok(AutomorphismGroup {
            generators,
            order: tuples.len(),
            inner_order: inner_tuples.len(),
            tuples,
            inner_tuples,
            search_gens: gens,
        })
    }

    /// Every automorphism, in order of generator images.
    pub fn all(&self, g: &FiniteGroup) -> Vec<Automorphism> {
        let tree = spanning_tree(g, &self.search_gens);
        self.tuples
            .iter()
            .map(|t| {
                let mut map = vec![Element::IDENTITY; g.order()];
                for &(y, p, s) in &tree {
                    map[y.index()] = g.mul(map[p.index()], t[s]);
                }
                Automorphism { map: GroupMap::new(map), inner: self.inner_tuples.contains(t) }
            })
            .collect()
    }

    pub fn outer_index(&self) -> usize {
        self.order / self.inner_order
    }
}

/// All tuples `phi(gens)` for `phi` in the group generated by `maps`.
fn tuple_closure(gens: &[Element], maps: &[GroupMap]) -> HashSet<Vec<Element>> {
    let start: Vec<Element> = gens.to_vec();
    let mut seen = HashSet::new();
    seen.insert(start.clone());
    let mut queue = vec![start];
    while let Some(t) = queue.pop() {
        for m in maps {
            let u: Vec<Element> = t.iter().map(|&x| m.apply(x)).collect();
            if seen.insert(u.clone()) {
                queue.push(u);
            }
        }
    }
    seen
}

/// Every automorphism of `g`.
pub fn automorphism_group(g: &FiniteGroup, caps: &Caps) -> Result<Vec<Automorphism>> {
    Ok(AutomorphismGroup::compute(g, caps)?.all(g))
}

/// Some isomorphism `src -> dst`, or `None`.
pub fn find_isomorphism(src: &FiniteGroup, dst: &FiniteGroup, caps: &Caps) -> Result<Option<GroupMap>> {
    IsoSearch::new(src, dst, caps.search_nodes).first()
}

/// Every homomorphism `src -> dst`, sorted by the images of a fixed
/// generating set of `src`.
pub fn homomorphisms(src: &FiniteGroup, dst: &FiniteGroup, caps: &Caps) -> Result<Vec<GroupMap>> {
    let gens = small_generating_set(src);
    let tree = spanning_tree(src, &gens);
    let candidates: Vec<Vec<Element>> = gens
        .iter()
        .map(|&s| {
            let o = src.order_of(s);
            dst.elements().filter(|&y| o.is_multiple_of(dst.order_of(y))).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut nodes = 0u64;
    let mut images = Vec::with_capacity(gens.len());
    hom_dfs(src, dst, &gens, &tree, &candidates, &mut images, &mut nodes, caps.search_nodes, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn hom_dfs(
    src: &FiniteGroup,
    dst: &FiniteGroup,
    gens: &[Element],
    tree: &[(Element, Element, usize)],
    candidates: &[Vec<Element>],
    images: &mut Vec<Element>,
    nodes: &mut u64,
    budget: u64,
    out: &mut Vec<GroupMap>,
) -> Result<()> {
    let depth = images.len();
    if depth == gens.len() {
        let mut map = vec![Element::IDENTITY; src.order()];
        for &(y, p, s) in tree {
            map[y.index()] = dst.mul(map[p.index()], images[s]);
        }
        let consistent = src.elements().all(|x| {
            gens.iter()
                .enumerate()
                .all(|(s, &g)| map[src.mul(x, g).index()] == dst.mul(map[x.index()], images[s]))
        });
        if consistent {
            out.push(GroupMap::new(map));
        }
        return Ok(());
    }
    for &c in &candidates[depth] {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::ResourceCap { what: "homomorphism search nodes", value: *nodes, cap: budget });
        }
        let gi = gens[depth];
        let fits = images.iter().enumerate().all(|(j, &a)| {
            src.order_of(src.mul(gens[j], gi)).is_multiple_of(dst.order_of(dst.mul(a, c)))
        });
        if fits {
            images.push(c);
            hom_dfs(src, dst, gens, tree, candidates, images, nodes, budget, out)?;
            images.pop();
        }
    }
    Ok(())
}

/// Extend `gens -> images` to a homomorphism on `domain` (generated by
/// `gens`). The result is indexed by position in `domain.elements()`.
pub fn extend_on_subgroup(
    g: &FiniteGroup,
    domain: &Subgroup,
    gens: &[Element],
    images: &[Element],
    target: &FiniteGroup,
) -> Result<Vec<Element>> {
    if gens.len() != images.len() {
        return Err(Error::InvalidInput("generator and image lists differ in length".into()));
    }
    let pos = |x: Element| domain.elements().binary_search(&x).ok();
    let mut out: Vec<Option<Element>> = vec![None; domain.order()];
    out[0] = Some(Element::IDENTITY);
    let mut queue = vec![Element::IDENTITY];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        let fx = out[pos(x).expect("queued elements lie in the domain")].expect("queued elements are assigned");
        for (&s, &t) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let p = pos(y).ok_or_else(|| Error::NotSubgroup("generator outside the domain".into()))?;
            let fy = target.mul(fx, t);
            match out[p] {
                None => {
                    out[p] = Some(fy);
                    queue.push(y);
                }
                Some(prev) if prev != fy => return Err(Error::NotHomomorphism(x, s)),
                Some(_) => {}
            }
        }
        i += 1;
    }
    out.into_iter()
        .map(|v| v.ok_or_else(|| Error::InvalidInput("generators do not generate the domain".into())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::named_group;

    #[test]
    fn aut_klein_four_is_gl22() {
        let g = named_group("elemabelian:2:2").unwrap();
        let auts = automorphism_group(&g, &Caps::default()).unwrap();
        assert_eq!(auts.len(), 6);
        assert_eq!(auts.iter().filter(|a| a.inner).count(), 1);
    }

    #[test]
    fn aut_s3_all_inner() {
        let g = named_group("symmetric:3").unwrap();
        let auts = automorphism_group(&g, &Caps::default()).unwrap();
        assert_eq!(auts.len(), 6);
        assert!(auts.iter().all(|a| a.inner));
        for a in &auts {
            assert!(a.map.is_automorphism(&g));
        }
    }

    #[test]
    fn aut_cyclic_counts() {
        for (n, phi) in [(5usize, 4usize), (8, 4), (12, 4), (7, 6)] {
            let g = named_group(&format!("cyclic:{n}")).unwrap();
            assert_eq!(AutomorphismGroup::compute(&g, &Caps::default()).unwrap().order, phi);
        }
    }

    #[test]
    fn node_budget_enforced() {
        let g = named_group("symmetric:4").unwrap();
        let caps = Caps { search_nodes: 3, ..Caps::default() };
        assert!(matches!(
            AutomorphismGroup::compute(&g, &caps),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn isomorphism_psl24_a5() {
        let a = named_group("psl2:4").unwrap();
        let b = named_group("alternating:5").unwrap();
        let iso = find_isomorphism(&a, &b, &Caps::default()).unwrap().unwrap();
        assert!(iso.is_homomorphism(&a, &b));
        assert!(iso.is_bijective());
        let c = named_group("symmetric:4").unwrap();
        assert!(find_isomorphism(&c, &b, &Caps::default()).unwrap().is_none());
    }

    #[test]
    fn endomorphism_counts() {
        for (id, count) in [("cyclic:6", 6usize), ("elemabelian:2:2", 16), ("abelian:4,2", 32), ("symmetric:3", 10)] {
            let g = named_group(id).unwrap();
            let homs = homomorphisms(&g, &g, &Caps::default()).unwrap();
            assert_eq!(homs.len(), count, "{id}");
            assert!(homs.iter().all(|h| h.is_homomorphism(&g, &g)));
        }
    }

    #[test]
    fn extend_on_subgroup_detects_relations() {
        let g = named_group("cyclic:4").unwrap();
        let whole = Subgroup::whole(&g);
        let x = g.elements().find(|&x| g.order_of(x) == 4).unwrap();
        let square = g.mul(x, x);
        let images = extend_on_subgroup(&g, &whole, &[x], &[square], &g).unwrap();
        assert_eq!(images.len(), 4);
        assert!(extend_on_subgroup(&g, &whole, &[x], &[x], &g).is_ok());
        let s3 = named_group("symmetric:3").unwrap();
        let three = s3.elements().find(|&y| s3.order_of(y) == 3).unwrap();
        assert!(extend_on_subgroup(&g, &whole, &[x], &[three], &s3).is_err());
    }

    #[test]
    fn witnesses() {
        let g = named_group("symmetric:3").unwrap();
        let inv = GroupMap::new(g.elements().map(|x| g.inv(x)).collect());
        assert!(inv.homomorphism_witness(&g, &g).is_some());
        assert!(inv.antihomomorphism_witness(&g, &g).is_none());
    }
}
