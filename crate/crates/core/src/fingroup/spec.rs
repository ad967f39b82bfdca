use serde::{Deserialize, Serialize};

use super::{FinGroupError, FiniteGroup, GroupOptions, SubgroupEmbedding};

/// A named family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum FamilySpec {
    Cyclic {
        n: usize,
        /// Generator label for power notation, e.g. `"a"` prints `a^2`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generator: Option<String>,
    },
    Dihedral {
        n: usize,
    },
    Symmetric {
        n: usize,
    },
    Product {
        parts: Vec<GroupSpec>,
    },
}

/// Group description as read from a JSON group file: either a named
/// family or an explicit Cayley table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Family(FamilySpec),
    Table {
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
}

impl GroupSpec {
    pub fn cyclic(n: usize) -> Self {
        GroupSpec::Family(FamilySpec::Cyclic { n, generator: None })
    }

    pub fn build(&self) -> Result<FiniteGroup, FinGroupError> {
        self.build_with(&GroupOptions::default())
    }

    pub fn build_with(&self, opts: &GroupOptions) -> Result<FiniteGroup, FinGroupError> {
        match self {
            GroupSpec::Family(FamilySpec::Cyclic { n, generator }) => {
                let g = FiniteGroup::cyclic(*n)?;
                Ok(match generator {
                    Some(label) => g.with_generator_label(label.clone()),
                    None => g,
                })
            }
            GroupSpec::Family(FamilySpec::Dihedral { n }) => FiniteGroup::dihedral(*n),
            GroupSpec::Family(FamilySpec::Symmetric { n }) => FiniteGroup::symmetric(*n),
            GroupSpec::Family(FamilySpec::Product { parts }) => {
                let built = parts.iter().map(|p| p.build_with(opts)).collect::<Result<Vec<_>, _>>()?;
                FiniteGroup::direct_product(&built)
            }
            GroupSpec::Table { table, name } => {
                FiniteGroup::from_table(name.clone().unwrap_or_else(|| "table".into()), table, opts)
            }
        }
    }
}

/// Subgroup given by generators (element indices of the ambient group).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupSpec {
    pub generators: Vec<usize>,
}

impl SubgroupSpec {
    pub fn build(&self, sup: &FiniteGroup) -> Result<SubgroupEmbedding, FinGroupError> {
        SubgroupEmbedding::generated(sup, &self.generators)
    }
}
