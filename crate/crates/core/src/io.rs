//! JSON shapes for groups, operators and subgroups.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::named_group_with;
use crate::error::{Error, Result};
use crate::group::{BackendKind, Element, FiniteGroup};
use crate::limits::Caps;
use crate::morphism::GroupMap;
use crate::naming::subgroup_name;
use crate::perm::Permutation;
use crate::subgroup::Subgroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationSpec {
    pub degree: usize,
    /// 0-based image arrays.
    pub generators: Vec<Vec<usize>>,
}

/// A group given by Cayley table, permutation generators, or catalog id.
/// A bare string is read as a catalog id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Id(String),
    Cayley { cayley: Vec<Vec<usize>> },
    Permutations { permutations: PermutationSpec },
    Named { named: String },
}

impl GroupRef {
    pub fn named(id: impl Into<String>) -> Self {
        GroupRef::Named { named: id.into() }
    }

    pub fn describe(&self) -> String {
        match self {
            GroupRef::Id(id) | GroupRef::Named { named: id } => id.clone(),
            GroupRef::Cayley { cayley } => format!("cayley table of order {}", cayley.len()),
            GroupRef::Permutations { permutations } => format!(
                "permutation group of degree {} on {} generators",
                permutations.degree,
                permutations.generators.len()
            ),
        }
    }

    pub fn build(&self, caps: &Caps) -> Result<FiniteGroup> {
        let group = match self {
            GroupRef::Id(id) | GroupRef::Named { named: id } => named_group_with(id, BackendKind::Auto, caps)?,
            GroupRef::Cayley { cayley } => {
                if cayley.len() > caps.max_group_order {
                    return Err(Error::cap("group order", cayley.len(), caps.max_group_order));
                }
                FiniteGroup::from_cayley_table(cayley)?
            }
            GroupRef::Permutations { permutations } => {
                let gens = permutations
                    .generators
                    .iter()
                    .map(|images| {
                        if images.len() != permutations.degree {
                            return Err(Error::InvalidInput(format!(
                                "generator has {} images, degree is {}",
                                images.len(),
                                permutations.degree
                            )));
                        }
                        Permutation::from_images(images)
                    })
                    .collect::<Result<Vec<_>>>()?;
                if gens.is_empty() {
                    Permutation::from_images(&(0..permutations.degree.max(1)).collect::<Vec<_>>())
                        .and_then(|p| FiniteGroup::from_permutations(&[p], BackendKind::Auto, caps))?
                } else {
                    FiniteGroup::from_permutations(&gens, BackendKind::Auto, caps)?
                }
            }
        };
        Ok(group.with_label(self.describe()))
    }
}

/// `{"group": <group ref>, "images": [i0, ..., i(n-1)]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub group: GroupRef,
    pub images: Vec<usize>,
}

impl OperatorFile {
    pub fn new(group: GroupRef, map: &GroupMap) -> Self {
        OperatorFile { group, images: map.images().iter().map(|x| x.index()).collect() }
    }

    /// The group and the map, with lengths and indices validated.
    pub fn load(&self, caps: &Caps) -> Result<(Arc<FiniteGroup>, GroupMap)> {
        let g = Arc::new(self.group.build(caps)?);
        let map = map_from_indices(&g, &self.images)?;
        Ok((g, map))
    }
}

pub fn map_from_indices(g: &FiniteGroup, images: &[usize]) -> Result<GroupMap> {
    if images.len() != g.order() {
        return Err(Error::InvalidInput(format!("{} images for a group of order {}", images.len(), g.order())));
    }
    let images = images.iter().map(|&i| g.element(i)).collect::<Result<Vec<Element>>>()?;
    Ok(GroupMap::new(images))
}

/// A subgroup as sorted element indices plus its structure name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupRecord {
    pub order: usize,
    pub name: String,
    pub elements: Vec<usize>,
}

impl SubgroupRecord {
    pub fn new(g: &FiniteGroup, h: &Subgroup) -> Self {
        SubgroupRecord {
            order: h.order(),
            name: subgroup_name(g, h),
            elements: h.elements().iter().map(|x| x.index()).collect(),
        }
    }
}
