use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::morphism::GroupMap;
use crate::rb::{RbOperator, VerifyMode};

/// `H_B = {(B(g), g B(g))}` as sorted pair codes `a * n + b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RbGraph {
    n: usize,
    members: Vec<u32>,
}

impl RbGraph {
    /// Canonical form of a set of pairs.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (Element, Element)>) -> Self {
        let mut members: Vec<u32> = pairs.into_iter().map(|(a, b)| (a.index() * n + b.index()) as u32).collect();
        members.sort_unstable();
        members.dedup();
        RbGraph { n, members }
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Element, Element)> + '_ {
        self.members
            .iter()
            .map(move |&c| (Element::new(c as usize / self.n), Element::new(c as usize % self.n)))
    }

    fn contains(&self, a: Element, b: Element) -> bool {
        self.members.binary_search(&((a.index() * self.n + b.index()) as u32)).is_ok()
    }

    /// Closed under the componentwise product (finite, so a subgroup).
    pub fn is_subgroup(&self, g: &FiniteGroup) -> bool {
        !self.members.is_empty()
            && self.contains(Element::IDENTITY, Element::IDENTITY)
            && self.pairs().all(|(a, b)| self.pairs().all(|(c, d)| self.contains(g.mul(a, c), g.mul(b, d))))
    }
}

pub fn graph_of(b: &RbOperator) -> Result<RbGraph> {
    let g = b.group();
    let graph = RbGraph::from_pairs(g.order(), g.elements().map(|x| (b.apply(x), g.mul(x, b.apply(x)))));
    if graph.len() != g.order() || !graph.is_subgroup(g) {
        return Err(Error::Property { clause: "H_B is a subgroup of G x G".into(), witness: Vec::new() });
    }
    Ok(graph)
}

/// The operator whose graph is `graph`: for each `g`, the unique pair
/// `(a, b)` with `b a^{-1} = g` gives `B(g) = a`.
pub fn rb_from_graph(g: &Arc<FiniteGroup>, graph: &RbGraph) -> Result<RbOperator> {
    let n = g.order();
    let reject = |why: &str| Err(Error::Hypothesis(format!("graph rejected: {why}")));
    if graph.n != n {
        return reject("graph belongs to a group of another order");
    }
    if graph.len() != n {
        return reject("|H| differs from |G|");
    }
    let mut images = vec![Element::IDENTITY; n];
    let mut hit = FixedBitSet::with_capacity(n);
    for (a, b) in graph.pairs() {
        let d = g.mul(b, g.inv(a));
        if hit.contains(d.index()) {
            return reject("differences b a^-1 do not cover G");
        }
        hit.insert(d.index());
        images[d.index()] = a;
    }
    if !graph.is_subgroup(g) {
        return reject("not a subgroup of G x G");
    }
    RbOperator::verify(g.clone(), GroupMap::new(images), VerifyMode::Full)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransformKind {
    Plain,
    Swapped,
}

/// An element of Q(G): `(g, h) -> (phi(g), phi(h^x))`, optionally followed
/// by swapping the coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QTransform {
    pub kind: TransformKind,
    pub phi: GroupMap,
    pub x: Element,
}

impl QTransform {
    pub fn swap(g: &FiniteGroup) -> Self {
        QTransform { kind: TransformKind::Swapped, phi: GroupMap::identity(g), x: Element::IDENTITY }
    }

    pub fn apply(&self, g: &FiniteGroup, (a, b): (Element, Element)) -> (Element, Element) {
        let left = self.phi.apply(a);
        let right = self.phi.apply(g.conjugate(b, self.x));
        match self.kind {
            TransformKind::Plain => (left, right),
            TransformKind::Swapped => (right, left),
        }
    }

    pub fn apply_graph(&self, g: &FiniteGroup, graph: &RbGraph) -> RbGraph {
        RbGraph::from_pairs(graph.n, graph.pairs().map(|p| self.apply(g, p)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::named_group;

    #[test]
    fn trivial_graphs() {
        let g = Arc::new(named_group("symmetric:3").unwrap());
        let be = RbOperator::trivial_identity(g.clone());
        let graph = graph_of(&be).unwrap();
        assert!(graph.pairs().all(|(a, _)| a.is_identity()));
        let inv = RbOperator::trivial_inverse(g.clone());
        let graph_inv = graph_of(&inv).unwrap();
        assert!(graph_inv.pairs().all(|(_, b)| b.is_identity()));
        assert_eq!(rb_from_graph(&g, &graph).unwrap(), be);
        assert_eq!(QTransform::swap(&g).apply_graph(&g, &graph), graph_inv);
    }

    #[test]
    fn diagonal_rejected() {
        let g = Arc::new(named_group("symmetric:3").unwrap());
        let diag = RbGraph::from_pairs(6, g.elements().map(|x| (x, x)));
        assert!(rb_from_graph(&g, &diag).is_err());
    }
}
