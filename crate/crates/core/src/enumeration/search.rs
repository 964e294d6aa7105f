use std::collections::HashSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup, ProductGroup};
use crate::limits::Caps;
use crate::morphism::GroupMap;
use crate::rb::{RbOperator, VerifyMode};
use crate::subgroup::Subgroup;

use super::graph::{rb_from_graph, RbGraph};

/// Differences `b a^{-1}` of a subgroup of `G x G`, or `None` on a repeat.
fn differences(g: &FiniteGroup, p: &ProductGroup, s: &Subgroup) -> Option<FixedBitSet> {
    let mut seen = FixedBitSet::with_capacity(g.order());
    for &c in s.elements() {
        let (a, b) = p.decode(c);
        let d = g.mul(b, g.inv(a)).index();
        if seen.contains(d) {
            return None;
        }
        seen.insert(d);
    }
    Some(seen)
}

/// Every operator on `g`, found as the subgroups of `G x G` of order `|G|`
/// with injective difference map.
///
/// Subgroups of such a graph also have injective differences, so the
/// search only ever grows subgroups with that property.
pub fn enumerate_rb(g: &Arc<FiniteGroup>, caps: &Caps) -> Result<Vec<RbOperator>> {
    let n = g.order();
    if n > caps.enumerate_order {
        return Err(Error::cap("enumeration group order", n, caps.enumerate_order));
    }
    let p = ProductGroup::new(g, g);
    let square = p.materialize(&Caps { dense_order: n * n, ..caps.clone() })?;
    let start = Subgroup::trivial(&square);
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    seen.insert(start.members().clone());
    let mut queue = vec![start];
    let mut full = Vec::new();
    while let Some(s) = queue.pop() {
        if s.order() == n {
            full.push(s);
            continue;
        }
        let diffs = differences(g, &p, &s).expect("queued subgroups have injective differences");
        for x in square.elements() {
            let (a, b) = p.decode(x);
            if s.contains(x) || diffs.contains(g.mul(b, g.inv(a)).index()) {
                continue;
            }
            let Some(k) = s.extend_within(&square, x, n) else { continue };
            if seen.contains(k.members()) || differences(g, &p, &k).is_none() {
                continue;
            }
            seen.insert(k.members().clone());
            if seen.len() > caps.max_subgroups {
                return Err(Error::cap("partial graph count", seen.len(), caps.max_subgroups));
            }
            queue.push(k);
        }
    }
    let mut ops = full
        .iter()
        .map(|s| {
            let graph = RbGraph::from_pairs(n, s.elements().iter().map(|&c| p.decode(c)));
            rb_from_graph(g, &graph)
        })
        .collect::<Result<Vec<_>>>()?;
    ops.sort_by(|a, b| a.map().cmp(b.map()));
    Ok(ops)
}

/// The identity on all pairs, stopping at the first failure.
fn holds_sequential(g: &FiniteGroup, b: &[Element]) -> bool {
    g.elements().all(|x| {
        let bx = b[x.index()];
        let bxi = g.inv(bx);
        g.elements().all(|y| g.mul(bx, b[y.index()]) == b[g.mul3(g.mul(x, bx), y, bxi).index()])
    })
}

/// Every map with `B(e) = e` checked against the identity on all pairs.
pub fn brute_force_rb(g: &Arc<FiniteGroup>, caps: &Caps) -> Result<Vec<RbOperator>> {
    let n = g.order();
    let cap = caps.brute_force_order.min(8);
    if n > cap {
        return Err(Error::cap("brute-force group order", n, cap));
    }
    let mut out = Vec::new();
    let mut images = vec![Element::IDENTITY; n];
    loop {
        if holds_sequential(g, &images) {
            let map = GroupMap::new(images.clone());
            out.push(RbOperator::verify(g.clone(), map, VerifyMode::Full)?);
        }
        // Odometer over positions 1..n, position n-1 least significant.
        let mut i = n;
        loop {
            if i <= 1 {
                return Ok(out);
            }
            i -= 1;
            let next = images[i].index() + 1;
            if next < n {
                images[i] = Element::new(next);
                break;
            }
            images[i] = Element::IDENTITY;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::named_group;

    fn shared(id: &str) -> Arc<FiniteGroup> {
        Arc::new(named_group(id).unwrap())
    }

    #[test]
    fn small_counts() {
        let caps = Caps::default();
        assert_eq!(enumerate_rb(&shared("cyclic:2"), &caps).unwrap().len(), 2);
        assert_eq!(enumerate_rb(&shared("cyclic:3"), &caps).unwrap().len(), 3);
        assert_eq!(brute_force_rb(&shared("cyclic:2"), &caps).unwrap().len(), 2);
        assert_eq!(brute_force_rb(&shared("cyclic:4"), &caps).unwrap().len(), 4);
    }

    #[test]
    fn s3_agrees_with_brute_force() {
        let g = shared("symmetric:3");
        let caps = Caps::default();
        assert_eq!(enumerate_rb(&g, &caps).unwrap(), brute_force_rb(&g, &caps).unwrap());
    }

    #[test]
    fn caps_enforced() {
        let caps = Caps::default();
        assert!(enumerate_rb(&shared("cyclic:17"), &caps).unwrap_err().is_resource());
        assert!(brute_force_rb(&shared("cyclic:9"), &caps).unwrap_err().is_resource());
    }
}
