use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::limits::Caps;
use crate::morphism::{AutomorphismGroup, GroupMap};
use crate::naming::{fingerprint, subgroup_name, Fingerprint};
use crate::rb::RbOperator;

use super::graph::{graph_of, rb_from_graph, QTransform, RbGraph, TransformKind};

/// Generators of Q(G): `(phi_i, phi_i)` for generators of Aut(G),
/// `(id, alpha_x)` for group generators `x`, and the swap.
#[derive(Clone, Debug)]
pub struct OrbitContext {
    group: Arc<FiniteGroup>,
    transforms: Vec<QTransform>,
    aut_order: usize,
}

impl OrbitContext {
    pub fn new(group: Arc<FiniteGroup>, caps: &Caps) -> Result<Self> {
        let aut = AutomorphismGroup::compute(&group, caps)?;
        let mut transforms: Vec<QTransform> = aut
            .generators
            .iter()
            .map(|phi| QTransform { kind: TransformKind::Plain, phi: phi.clone(), x: Element::IDENTITY })
            .collect();
        for &x in group.generators() {
            transforms.push(QTransform { kind: TransformKind::Plain, phi: GroupMap::identity(&group), x });
        }
        transforms.push(QTransform::swap(&group));
        Ok(OrbitContext { group, transforms, aut_order: aut.order })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn transforms(&self) -> &[QTransform] {
        &self.transforms
    }

    pub fn automorphism_count(&self) -> usize {
        self.aut_order
    }

    fn orbit_graphs(&self, start: RbGraph) -> BTreeSet<RbGraph> {
        let mut seen = HashSet::new();
        seen.insert(start.clone());
        let mut queue = vec![start];
        while let Some(h) = queue.pop() {
            for t in &self.transforms {
                let next = t.apply_graph(&self.group, &h);
                if !seen.contains(&next) {
                    seen.insert(next.clone());
                    queue.push(next);
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// One Q(G)-orbit of operators.
#[derive(Clone, Debug)]
pub struct EquivalenceClass {
    /// The member with the least graph.
    pub representative: RbOperator,
    pub members: Vec<RbGraph>,
    pub splitting: bool,
    /// Names of `(Im(B), Im(B~))` for the representative.
    pub image_names: (String, String),
    pub derived_fingerprint: Fingerprint,
    /// `|Im(B B~)|`, constant on the orbit.
    pub composite_image_order: usize,
    pub trivial: bool,
}

impl EquivalenceClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// The orbit of `b`, with the orbit invariants checked on every member.
pub fn q_orbit(ctx: &OrbitContext, b: &RbOperator) -> Result<EquivalenceClass> {
    let g = &ctx.group;
    let members: Vec<RbGraph> = ctx.orbit_graphs(graph_of(b)?).into_iter().collect();
    let mut invariants: Option<(bool, Fingerprint, usize)> = None;
    let mut representative = None;
    for graph in &members {
        let op = rb_from_graph(g, graph)?;
        let here = (op.is_splitting(), fingerprint(&op.derived_group()?), op.image_of_composite_order());
        match &invariants {
            None => invariants = Some(here),
            Some(first) if *first != here => {
                return Err(Error::Property {
                    clause: "splitting flag, derived group and |Im(BB~)| are constant on an orbit".into(),
                    witness: op.images().to_vec(),
                });
            }
            Some(_) => {}
        }
        if representative.is_none() {
            representative = Some(op);
        }
    }
    let representative = representative.expect("an orbit is never empty");
    let (splitting, derived_fingerprint, composite_image_order) = invariants.expect("an orbit is never empty");
    let image = representative.image()?;
    let image_tilde = representative.btilde()?.image()?;
    let trivial = image.is_trivial() || image_tilde.is_trivial();
    Ok(EquivalenceClass {
        image_names: (subgroup_name(g, &image), subgroup_name(g, &image_tilde)),
        representative,
        members,
        splitting,
        derived_fingerprint,
        composite_image_order,
        trivial,
    })
}

/// Partition `ops` into orbits, in order of first appearance.
pub fn classify_equivalence(ctx: &OrbitContext, ops: &[RbOperator]) -> Result<Vec<EquivalenceClass>> {
    let mut covered: HashSet<RbGraph> = HashSet::new();
    let mut out = Vec::new();
    for b in ops {
        let graph = graph_of(b)?;
        if covered.contains(&graph) {
            continue;
        }
        let class = q_orbit(ctx, b)?;
        covered.extend(class.members.iter().cloned());
        out.push(class);
    }
    Ok(out)
}
