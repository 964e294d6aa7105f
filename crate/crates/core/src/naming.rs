//! Isomorphism-invariant fingerprints and structure names.
//!
//! Names follow the usual small-group notation: `n` for a cyclic group,
//! `p^m` for an elementary abelian group, `4x2` for other abelian groups
//! (invariant factors, largest first), `Sn`/`An`, `Q8`, `Dn` for the
//! dihedral group of order `n`, and `p^m:k` for a normal elementary abelian
//! Sylow subgroup with a cyclic complement of order `k`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::named_group;
use crate::group::{Element, FiniteGroup};
use crate::limits::Caps;
use crate::morphism::find_isomorphism;
use crate::subgroup::{center, derived_subgroup, Subgroup};

/// Largest order for which a name is attempted.
pub const NAMING_ORDER_LIMIT: usize = 10_000;

/// Invariants preserved by isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: usize,
    pub abelian: bool,
    pub exponent: usize,
    /// `(element order, class size, number of elements)`, sorted.
    pub profile: Vec<(usize, usize, usize)>,
    /// Orders along the derived series, starting with the group.
    pub derived_series: Vec<usize>,
    pub center: usize,
}

pub fn fingerprint(g: &FiniteGroup) -> Fingerprint {
    let classes = g.conjugacy_classes();
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for x in g.elements() {
        *counts.entry((g.order_of(x), classes.size_of_class_of(x))).or_insert(0) += 1;
    }
    let exponent = g.element_orders().iter().fold(1usize, |acc, &o| lcm(acc, o as usize));
    let mut series = vec![g.order()];
    let mut h = Subgroup::whole(g);
    loop {
        let d = derived_subgroup(g, &h);
        if d.order() == h.order() {
            break;
        }
        series.push(d.order());
        h = d;
    }
    Fingerprint {
        order: g.order(),
        abelian: g.is_abelian(),
        exponent,
        profile: counts.into_iter().map(|((o, s), c)| (o, s, c)).collect(),
        derived_series: series,
        center: center(g).order(),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn prime_factors(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Invariant factors of an abelian group, largest first.
///
/// For each prime `p`, the count of elements with `x^(p^k) = e` equals
/// `p^(sum_i min(k, e_i))` over the exponents `e_i` of the `p`-part.
pub fn abelian_invariants(g: &FiniteGroup) -> Vec<usize> {
    let orders = g.element_orders();
    let mut columns: Vec<Vec<usize>> = Vec::new();
    for (p, e) in prime_factors(g.order()) {
        let mut logs = vec![0u32];
        let mut pk = 1usize;
        for _ in 0..e {
            pk *= p;
            let c = orders.iter().filter(|&&o| pk.is_multiple_of(o as usize)).count();
            logs.push(c.ilog(p));
        }
        // Number of cyclic factors of exponent >= k is logs[k] - logs[k-1].
        let mut parts: Vec<usize> = Vec::new();
        for k in 1..logs.len() {
            let at_least_k = (logs[k] - logs[k - 1]) as usize;
            let at_least_next = if k + 1 < logs.len() { (logs[k + 1] - logs[k]) as usize } else { 0 };
            for _ in 0..at_least_k - at_least_next {
                parts.push(p.pow(k as u32));
            }
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        columns.push(parts);
    }
    let width = columns.iter().map(Vec::len).max().unwrap_or(0);
    (0..width)
        .map(|i| columns.iter().map(|c| c.get(i).copied().unwrap_or(1)).product())
        .collect()
}

fn symmetric_or_alternating(g: &FiniteGroup, fp: &Fingerprint) -> Option<String> {
    let candidates: &[(&str, usize, &str)] = &[
        ("S3", 6, "symmetric:3"),
        ("A4", 12, "alternating:4"),
        ("S4", 24, "symmetric:4"),
        ("A5", 60, "alternating:5"),
        ("S5", 120, "symmetric:5"),
        ("A6", 360, "alternating:6"),
        ("S6", 720, "symmetric:6"),
        ("A7", 2520, "alternating:7"),
        ("S7", 5040, "symmetric:7"),
    ];
    for &(name, order, id) in candidates {
        if order != fp.order {
            continue;
        }
        let model = named_group(id).ok()?;
        if fingerprint(&model) != *fp {
            continue;
        }
        if let Ok(Some(_)) = find_isomorphism(g, &model, &Caps::default()) {
            return Some(name.to_string());
        }
    }
    None
}

fn is_dihedral(g: &FiniteGroup) -> bool {
    let n = g.order();
    if n < 6 || n % 2 == 1 || g.is_abelian() {
        return false;
    }
    let m = n / 2;
    let orders = g.element_orders();
    let involutions = orders.iter().filter(|&&o| o == 2).count();
    orders.iter().any(|&o| o as usize == m) && involutions == m + usize::from(m.is_multiple_of(2))
}

/// `p^m:k` when the Sylow `p`-subgroup is normal, elementary abelian, and
/// complemented by a cyclic subgroup.
fn split_metacyclic(g: &FiniteGroup) -> Option<String> {
    let n = g.order();
    let orders = g.element_orders();
    for &(p, e) in prime_factors(n).iter().rev() {
        let pm = p.pow(e);
        let k = n / pm;
        if k == 1 {
            continue;
        }
        let sylow: Vec<Element> = g
            .elements()
            .filter(|x| {
                let o = orders[x.index()] as usize;
                pm % o == 0
            })
            .collect();
        if sylow.len() != pm {
            continue;
        }
        let elementary = sylow.iter().all(|x| x.is_identity() || orders[x.index()] as usize == p);
        let commuting = sylow
            .iter()
            .all(|&x| sylow.iter().all(|&y| g.mul(x, y) == g.mul(y, x)));
        if !(elementary && commuting) {
            continue;
        }
        if orders.iter().any(|&o| o as usize == k) {
            return Some(if e == 1 { format!("{p}:{k}") } else { format!("{p}^{e}:{k}") });
        }
    }
    None
}

/// Human-readable name, or `unidentified(order=n)`.
pub fn structure_name(g: &FiniteGroup) -> String {
    let n = g.order();
    if n == 1 {
        return "1".into();
    }
    let unidentified = format!("unidentified(order={n})");
    if n > NAMING_ORDER_LIMIT {
        return unidentified;
    }
    if g.is_abelian() {
        let inv = abelian_invariants(g);
        if inv.len() == 1 {
            return n.to_string();
        }
        let p = inv[0];
        if inv.iter().all(|&x| x == p) && prime_factors(p).len() == 1 && prime_factors(p)[0].1 == 1 {
            return format!("{p}^{}", inv.len());
        }
        return inv.iter().map(usize::to_string).collect::<Vec<_>>().join("x");
    }
    let fp = fingerprint(g);
    if let Some(name) = symmetric_or_alternating(g, &fp) {
        return name;
    }
    if n == 8 && g.element_orders().iter().filter(|&&o| o == 2).count() == 1 {
        return "Q8".into();
    }
    if is_dihedral(g) {
        return format!("D{n}");
    }
    split_metacyclic(g).unwrap_or(unidentified)
}

/// Name of a subgroup of `g`.
pub fn subgroup_name(g: &FiniteGroup, h: &Subgroup) -> String {
    if h.order() > NAMING_ORDER_LIMIT {
        return format!("unidentified(order={})", h.order());
    }
    structure_name(&h.to_group(g))
}
