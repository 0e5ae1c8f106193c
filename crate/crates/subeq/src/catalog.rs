//! Cone lookup: built-in named cones plus an optional TOML catalog of
//! component sums.
//!
//! ```toml
//! [[cone]]
//! name = "ei"
//! group = "spn-s1"
//! components = ["e_i"]
//! description = "E_I edge"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;
use subeq_core::classify::{named_cone, CONE_NAMES};
use subeq_core::cones::{minimal_cone, ConeHandle};
use subeq_core::structures::{component_sum, Component, GroupKind, GroupTag};

use crate::config::ExperimentConfig;
use crate::error::{usage, CliError};

pub const CATALOG_ENV: &str = "SUBEQ_CATALOG";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogFile {
    #[serde(default)]
    pub cone: Vec<CatalogCone>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogCone {
    pub name: String,
    pub group: String,
    pub components: Vec<String>,
    #[serde(default)]
    pub description: String,
}

pub fn builtin_description(name: &str) -> &'static str {
    match name {
        "P" => "positive semidefinite matrices",
        "laplace" => "Laplacian: trace >= 0",
        "P_C" => "complex plurisubharmonic (edge: complex-skew hermitian)",
        "P_LAG" => "Lagrangian plurisubharmonic (edge: traceless complex-symmetric)",
        "P_H" => "quaternionic plurisubharmonic (edge: Im H tensor H-skew)",
        "P_HLAG" => "quaternionic Lagrangian (edge: traceless H-symmetric)",
        "P_IJK" => "edge: traceless H-symmetric plus E_J plus E_K",
        "P_EI" => "edge: E_I",
        _ => "",
    }
}

/// Default coordinate count for a named cone.
pub fn default_coords(name: &str) -> usize {
    match name {
        "P" | "laplace" => 2,
        "P_IJK" | "P_EI" => 2,
        _ => 1,
    }
}

pub fn catalog_path(cfg: &ExperimentConfig) -> Option<PathBuf> {
    cfg.catalog
        .clone()
        .or_else(|| std::env::var_os(CATALOG_ENV).map(PathBuf::from))
}

pub fn load_catalog(path: &Path) -> Result<CatalogFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read catalog {}: {e}", path.display())))?;
    let file: CatalogFile =
        toml::from_str(&text).map_err(|e| usage(format!("bad catalog {}: {e}", path.display())))?;
    for c in &file.cone {
        parse_group(&c.group)?;
        parse_components(&c.components)?;
    }
    Ok(file)
}

pub fn parse_group(s: &str) -> Result<GroupKind, CliError> {
    s.parse()
        .map_err(|_| usage(format!("unknown group `{s}` (on, un, spn-sp1, spn-s1)")))
}

pub fn parse_components(names: &[String]) -> Result<Vec<Component>, CliError> {
    names
        .iter()
        .map(|s| {
            s.parse()
                .map_err(|_| usage(format!("unknown component `{s}`")))
        })
        .collect()
}

/// What the configuration names, before any numerical work.
#[derive(Debug, Clone)]
pub enum ConeSpec {
    Builtin(String),
    Sum {
        label: String,
        group: GroupKind,
        components: Vec<Component>,
    },
}

impl ConeSpec {
    pub fn label(&self) -> &str {
        match self {
            ConeSpec::Builtin(s) => s,
            ConeSpec::Sum { label, .. } => label,
        }
    }

    /// Real dimensions per coordinate.
    pub fn divisor(&self) -> usize {
        match self {
            ConeSpec::Builtin(s) => match s.as_str() {
                "P" | "laplace" => 1,
                "P_C" | "P_LAG" => 2,
                _ => 4,
            },
            ConeSpec::Sum { group, .. } => group.divisor(),
        }
    }

    pub fn default_coords(&self) -> usize {
        match self {
            ConeSpec::Builtin(s) => default_coords(s),
            ConeSpec::Sum {
                group: GroupKind::On,
                ..
            } => 2,
            ConeSpec::Sum { .. } => 1,
        }
    }

    pub fn build(&self, n: usize) -> Result<ConeHandle, CliError> {
        Ok(match self {
            ConeSpec::Builtin(s) => named_cone(s, n)?,
            ConeSpec::Sum {
                group, components, ..
            } => {
                let tag = GroupTag::with_coords(*group, n)?;
                if let Some(c) = components
                    .iter()
                    .find(|c| !tag.edge_components().contains(c))
                {
                    return Err(usage(format!(
                        "component {c} is not an edge component of group {}",
                        group.name()
                    )));
                }
                minimal_cone(component_sum(tag, components)?)?
            }
        })
    }
}

/// Resolves `--cone` (catalog file first, then built-ins) or `--group` with
/// `--components`.
pub fn cone_spec(cfg: &ExperimentConfig) -> Result<ConeSpec, CliError> {
    if let Some(name) = &cfg.cone {
        if let Some(path) = catalog_path(cfg) {
            let file = load_catalog(&path)?;
            if let Some(c) = file.cone.iter().find(|c| &c.name == name) {
                return Ok(ConeSpec::Sum {
                    label: c.name.clone(),
                    group: parse_group(&c.group)?,
                    components: parse_components(&c.components)?,
                });
            }
        }
        if CONE_NAMES.contains(&name.as_str()) {
            return Ok(ConeSpec::Builtin(name.clone()));
        }
        return Err(usage(format!("unknown cone `{name}`; see `subeq catalog`")));
    }
    match (&cfg.group, &cfg.components) {
        (Some(g), Some(cs)) => {
            let group = parse_group(g)?;
            let components = parse_components(cs)?;
            Ok(ConeSpec::Sum {
                label: format!("{}:{}", group.name(), cs.join("+")),
                group,
                components,
            })
        }
        _ => Err(usage(
            "name a cone with --cone, or --group with --components",
        )),
    }
}
