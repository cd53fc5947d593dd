use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::standard::{build_standard_site, SiteKind};
use super::FinCat;
use crate::error::{CategoryError, Error, Result};

/// Site interchange document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismEntry>,
    pub identities: BTreeMap<String, String>,
    pub compose: Vec<CompositeEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismEntry {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

/// `g ∘ f = result`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositeEntry {
    pub g: String,
    pub f: String,
    pub result: String,
}

impl CategoryDoc {
    /// Validates the tables; identity problems are reported as schema errors at `/identities`.
    pub fn load(&self) -> Result<FinCat> {
        FinCat::validate(self).map_err(|e| match e {
            CategoryError::MissingIdentity(_) | CategoryError::IdentityMistyped { .. } => {
                Error::schema("/identities", e.to_string())
            }
            e => Error::from(e),
        })
    }
}

/// A site given by builtin name or inline document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SiteRef {
    Builtin(String),
    Inline(CategoryDoc),
}

impl SiteRef {
    pub fn resolve(&self) -> Result<Arc<FinCat>> {
        match self {
            SiteRef::Builtin(name) => {
                let kind: SiteKind = name.parse()?;
                Ok(build_standard_site(kind)?.cat().clone())
            }
            SiteRef::Inline(doc) => Ok(Arc::new(doc.load()?)),
        }
    }

    /// Builtin name when the site is a standard one, inline document otherwise.
    pub fn for_site(cat: &FinCat) -> Self {
        match cat.name().parse::<SiteKind>() {
            Ok(kind) if build_standard_site(kind).is_ok_and(|s| s.cat().same_structure(cat)) => {
                SiteRef::Builtin(cat.name().to_string())
            }
            _ => SiteRef::Inline(cat.to_doc()),
        }
    }
}
