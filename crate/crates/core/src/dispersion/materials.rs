//! Materials file: Sellmeier coefficient sets keyed by material id.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

use super::SellmeierModel;

const BUILTIN_MATERIALS: &str = include_str!("../../data/materials.toml");

/// Label used in messages when the compiled-in materials file is in use.
pub const BUILTIN_MATERIALS_LABEL: &str = "<builtin materials.toml>";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialsFile {
    version: u32,
    #[serde(default)]
    materials: BTreeMap<String, MaterialEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialEntry {
    name: String,
    source: String,
    range_um: [f64; 2],
    b: Vec<f64>,
    c_um2: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Material {
    pub id: String,
    pub name: String,
    pub source: String,
    pub model: SellmeierModel,
}

#[derive(Clone, Debug)]
pub struct MaterialsDb {
    origin: String,
    materials: BTreeMap<String, Material>,
}

/// Canonical form of a material id: lower case with spaces, dashes and
/// underscores removed.
pub fn normalize_material_id(id: &str) -> String {
    id.chars()
        .filter(|c| !(c.is_whitespace() || *c == '-' || *c == '_'))
        .flat_map(char::to_lowercase)
        .collect()
}

impl MaterialsDb {
    /// The materials file shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_MATERIALS, BUILTIN_MATERIALS_LABEL)
            .expect("builtin materials file is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let malformed = |message: String| Error::MaterialsFile {
            path: origin.to_string(),
            message,
        };
        let file: MaterialsFile = toml::from_str(text).map_err(|e| malformed(e.to_string()))?;
        if file.version != 1 {
            return Err(malformed(format!("unsupported version {}", file.version)));
        }
        let mut materials = BTreeMap::new();
        for (raw_id, entry) in file.materials {
            let id = normalize_material_id(&raw_id);
            let model = SellmeierModel::new(
                id.clone(),
                entry.b,
                entry.c_um2,
                (entry.range_um[0], entry.range_um[1]),
            )
            .map_err(|e| malformed(e.to_string()))?;
            let material = Material {
                id: id.clone(),
                name: entry.name,
                source: entry.source,
                model,
            };
            if materials.insert(id.clone(), material).is_some() {
                return Err(malformed(format!("duplicate material id `{id}`")));
            }
        }
        Ok(Self {
            origin: origin.to_string(),
            materials,
        })
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub fn get(&self, id: &str) -> Result<&Material> {
        self.materials
            .get(&normalize_material_id(id))
            .ok_or_else(|| Error::UnknownMaterial {
                id: id.to_string(),
                path: self.origin.clone(),
            })
    }

    pub fn iter(&self) -> impl Iterator<Item = &Material> {
        self.materials.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_has_znse() {
        let db = MaterialsDb::builtin();
        for id in ["znse", "ZnSe", "zn se", "Zn-Se"] {
            let m = db.get(id).unwrap();
            assert_eq!(m.id, "znse");
            assert!(m.source.contains("1979"));
        }
        assert!(db.iter().count() >= 2);
    }

    #[test]
    fn unknown_id_names_file() {
        let db = MaterialsDb::builtin();
        let msg = db.get("unobtainium").unwrap_err().to_string();
        assert!(msg.contains("unobtainium") && msg.contains(BUILTIN_MATERIALS_LABEL));
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(MaterialsDb::parse("version = 2", "x").is_err());
        assert!(MaterialsDb::parse("nonsense", "x").is_err());
        let dup = r#"
version = 1
[materials.ZnSe]
name = "a"
source = "b"
range_um = [0.5, 1.0]
b = []
c_um2 = []
[materials.znse]
name = "a"
source = "b"
range_um = [0.5, 1.0]
b = []
c_um2 = []
"#;
        assert!(MaterialsDb::parse(dup, "x").is_err());
    }
}
