use std::collections::HashMap;
use std::rc::Rc;

use serde::Serialize;

use crate::error::Result;
use crate::factorization::covering_pairs;
use crate::group::FiniteGroup;
use crate::lattice::{is_simple, SubgroupLattice};
use crate::limits::Caps;
use crate::morphism::find_isomorphism;
use crate::naming::{fingerprint, Fingerprint, structure_name, subgroup_name};
use crate::subgroup::{is_normal, quotient, Subgroup};

/// Candidate kernels `(ker(B~), ker(B))` for one factorization.
#[derive(Clone, Debug, Serialize)]
pub struct Survivor {
    pub kernel_tilde: Vec<usize>,
    pub kernel: Vec<usize>,
    pub quotient: String,
}

/// One ordered non-exact factorization `G = AC`, read as
/// `A = Im(B)`, `C = Im(B~)`.
#[derive(Clone, Debug, Serialize)]
pub struct ObstructionEntry {
    pub names: (String, String),
    pub orders: (usize, usize),
    pub image_elements: Vec<usize>,
    pub image_tilde_elements: Vec<usize>,
    /// `|A ∩ C|`, which must equal `|A : ker(B~)|`.
    pub r: usize,
    pub kernel_tilde_candidates: usize,
    pub kernel_candidates: usize,
    pub survivors: Vec<Survivor>,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub order: usize,
    pub simple: bool,
    /// Ordered exact factorizations up to conjugacy of the first factor;
    /// these only carry splitting operators.
    pub exact_pairs: usize,
    pub entries: Vec<ObstructionEntry>,
    pub no_nonsplitting: bool,
    pub conclusion: String,
}

impl ObstructionReport {
    pub fn survivor_count(&self) -> usize {
        self.entries.iter().map(|e| e.survivors.len()).sum()
    }
}

fn indices(s: &Subgroup) -> Vec<usize> {
    s.elements().iter().map(|x| x.index()).collect()
}

/// Necessary conditions for a non-splitting operator.
///
/// For such `B`, `G = Im(B) Im(B~)`, `ker(B~) ⊴ Im(B)`, `ker(B) ⊴ Im(B~)`,
/// both quotients are isomorphic, and `|Im(B) : ker(B~)| = |Im(B) ∩ Im(B~)|`.
/// When that index is 1 the operator is splitting, so only non-exact pairs
/// are examined. In a non-abelian simple group additionally
/// `1 < ker(B~) < Im(B)`. Survivors are not claims of existence.
pub fn nonsplitting_obstruction(g: &FiniteGroup, caps: &Caps) -> Result<ObstructionReport> {
    let lattice = SubgroupLattice::compute(g, g.order(), caps)?;
    let simple = is_simple(g) && !Subgroup::whole(g).is_abelian(g);
    let mut normals: HashMap<Subgroup, Vec<Subgroup>> = HashMap::new();
    let mut quotients: HashMap<(Subgroup, Subgroup), Rc<(Fingerprint, FiniteGroup)>> = HashMap::new();
    let mut names: HashMap<Subgroup, String> = HashMap::new();
    let mut name_of = |s: &Subgroup| names.entry(s.clone()).or_insert_with(|| subgroup_name(g, s)).clone();
    let mut entries = Vec::new();
    let mut exact_pairs = 0;
    for (a, c) in covering_pairs(g, &lattice) {
        let r = a.intersection_order(c);
        if r == 1 {
            exact_pairs += 1;
            continue;
        }
        let mut of_index = |s: &'_ Subgroup| -> Vec<Subgroup> {
            let all = normals.entry(s.clone()).or_insert_with(|| {
                lattice.subgroups_of(s).into_iter().filter(|n| is_normal(g, n, s)).cloned().collect()
            });
            all.iter().filter(|n| n.order() * r == s.order()).cloned().collect()
        };
        let mut n_cands = of_index(a);
        n_cands.retain(|n| !(simple && n.is_trivial()));
        let m_cands = of_index(c);
        let mut quotient_of = |s: &Subgroup, n: &Subgroup| -> Result<Rc<(Fingerprint, FiniteGroup)>> {
            let key = (s.clone(), n.clone());
            if let Some(q) = quotients.get(&key) {
                return Ok(q.clone());
            }
            let q = quotient(g, s, n)?.group;
            let q = Rc::new((fingerprint(&q), q));
            quotients.insert(key, q.clone());
            Ok(q)
        };
        let mut survivors = Vec::new();
        for n in &n_cands {
            let qa = quotient_of(a, n)?;
            for m in &m_cands {
                let qc = quotient_of(c, m)?;
                if qc.0 != qa.0 || find_isomorphism(&qa.1, &qc.1, caps)?.is_none() {
                    continue;
                }
                survivors.push(Survivor { kernel_tilde: indices(n), kernel: indices(m), quotient: structure_name(&qa.1) });
            }
        }
        let reason = if n_cands.is_empty() {
            if simple && a.order() == r {
                format!("only the trivial normal subgroup has index {r} in Im(B), excluded in a simple group")
            } else {
                format!("Im(B) has no admissible normal subgroup of index {r}")
            }
        } else if m_cands.is_empty() {
            format!("Im(B~) has no normal subgroup of index {r}")
        } else if survivors.is_empty() {
            "no pair of quotients of order r is isomorphic".to_string()
        } else {
            format!("{} kernel pair(s) satisfy the necessary conditions", survivors.len())
        };
        entries.push(ObstructionEntry {
            names: (name_of(a), name_of(c)),
            orders: (a.order(), c.order()),
            image_elements: indices(a),
            image_tilde_elements: indices(c),
            r,
            kernel_tilde_candidates: n_cands.len(),
            kernel_candidates: m_cands.len(),
            survivors,
            reason,
        });
    }
    let no_nonsplitting = entries.iter().all(|e| e.survivors.is_empty());
    let conclusion = if no_nonsplitting {
        "no non-splitting RB operator can exist".to_string()
    } else {
        let count: usize = entries.iter().map(|e| e.survivors.len()).sum();
        format!("{count} candidate kernel pair(s) survive; necessary conditions only")
    };
    Ok(ObstructionReport { order: g.order(), simple, exact_pairs, entries, no_nonsplitting, conclusion })
}
