use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fingroup::{FiniteGroup, GroupSpec};

use super::{AmalgamContext, AmalgamError};

/// A group given inline or as a path to a group file, resolved relative to
/// the directory of the amalgam file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Path(String),
    Inline(GroupSpec),
}

/// Amalgam file: `{"L": …, "G": …, "H": …, "emb_L": […], "emb_G": […]}`.
/// `emb_L[k]` and `emb_G[k]` are the images of element `k` of `H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmalgamSpec {
    #[serde(rename = "L")]
    pub l: GroupRef,
    #[serde(rename = "G")]
    pub g: GroupRef,
    #[serde(rename = "H")]
    pub h: GroupRef,
    #[serde(rename = "emb_L")]
    pub emb_l: Vec<usize>,
    #[serde(rename = "emb_G")]
    pub emb_g: Vec<usize>,
}

/// A spec problem, tagged with the offending field.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("field `{field}`: {reason}")]
pub struct SpecError {
    pub field: String,
    pub reason: String,
}

impl SpecError {
    fn new(field: impl Into<String>, reason: impl ToString) -> SpecError {
        SpecError { field: field.into(), reason: reason.to_string() }
    }
}

impl GroupRef {
    pub fn resolve(&self, base: Option<&Path>) -> Result<GroupSpec, String> {
        match self {
            GroupRef::Inline(s) => Ok(s.clone()),
            GroupRef::Path(p) => {
                let path = base.map_or_else(|| Path::new(p).to_path_buf(), |b| b.join(p));
                let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
            }
        }
    }
}

impl AmalgamSpec {
    pub fn build(&self, base: Option<&Path>) -> Result<AmalgamContext, SpecError> {
        let group = |field: &str, r: &GroupRef| -> Result<FiniteGroup, SpecError> {
            let spec = r.resolve(base).map_err(|e| SpecError::new(field, e))?;
            spec.build().map_err(|e| SpecError::new(field, e))
        };
        let (l, g, h) = (group("L", &self.l)?, group("G", &self.g)?, group("H", &self.h)?);
        AmalgamContext::new(l, g, h, self.emb_l.clone(), self.emb_g.clone()).map_err(|e| match e {
            AmalgamError::BadEmbedding { side, .. } => SpecError::new(format!("emb_{side}"), e),
            other => SpecError::new("emb_L", other),
        })
    }

    /// Reads and builds an amalgam file.
    pub fn load(path: &Path) -> Result<(AmalgamSpec, AmalgamContext), SpecError> {
        let text = std::fs::read_to_string(path).map_err(|e| SpecError::new("<file>", e))?;
        let spec: AmalgamSpec = serde_json::from_str(&text).map_err(|e| SpecError::new("<json>", e))?;
        let ctx = spec.build(path.parent())?;
        Ok((spec, ctx))
    }
}
