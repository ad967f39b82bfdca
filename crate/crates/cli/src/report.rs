use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use amalgam_core::amalgam::{AmalgamContext, AmalgamSpec, GroupRef};
use amalgam_core::fingroup::{FiniteGroup, GroupSpec, SubgroupEmbedding, SubgroupSpec};
use amalgam_core::shelah::ShelahParams;

pub const TOOL: &str = "amalgam";

/// An input file and the sha256 of its bytes, recorded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

/// The common report wrapper.
#[derive(Debug, Serialize)]
pub struct Envelope {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub config: Value,
    pub passed: bool,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recheck: Option<Recheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Recheck {
    pub confirmed: bool,
    pub detail: String,
}

/// Reads input files and remembers their digests.
#[derive(Debug, Default)]
pub struct Inputs {
    pub digests: Vec<InputDigest>,
}

/// An input problem, reported with exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub fn input_err(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

impl Inputs {
    pub fn read(&mut self, role: &str, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
        self.digests.push(InputDigest {
            role: role.into(),
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|_| input_err(format!("{}: not UTF-8", path.display())))
    }

    fn json<T: serde::de::DeserializeOwned>(&mut self, role: &str, path: &Path) -> Result<T> {
        let text = self.read(role, path)?;
        serde_json::from_str(&text).map_err(|e| input_err(format!("{}: {e}", path.display())))
    }

    pub fn group(&mut self, path: &Path) -> Result<FiniteGroup> {
        let spec: GroupSpec = self.json("group", path)?;
        spec.build().map_err(|e| input_err(format!("{}: {e}", path.display())))
    }

    pub fn subgroup(&mut self, path: &Path, sup: &FiniteGroup) -> Result<SubgroupEmbedding> {
        let spec: SubgroupSpec = self.json("subgroup", path)?;
        spec.build(sup).map_err(|e| input_err(format!("{}: field `generators`: {e}", path.display())))
    }

    /// Group references given by path are read (and digested) here, then
    /// passed inline to the builder.
    pub fn amalgam(&mut self, path: &Path) -> Result<AmalgamContext> {
        let mut spec: AmalgamSpec = self.json("amalgam", path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        for (field, r) in [("L", &mut spec.l), ("G", &mut spec.g), ("H", &mut spec.h)] {
            if let GroupRef::Path(p) = r {
                let file: PathBuf = base.join(&*p);
                let text = self.read(field, &file)?;
                let g: GroupSpec = serde_json::from_str(&text)
                    .map_err(|e| input_err(format!("{}: field `{field}`: {e}", path.display())))?;
                *r = GroupRef::Inline(g);
            }
        }
        spec.build(None).map_err(|e| input_err(format!("{}: {e}", path.display())))
    }

    pub fn params(&mut self, path: &Path) -> Result<ShelahParams> {
        self.json("params", path)
    }
}

impl Envelope {
    pub fn write(&self, output: Option<&Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).context("serializing report")?;
        text.push('\n');
        emit(&text, output)
    }
}

pub fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
