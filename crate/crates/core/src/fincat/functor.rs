use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{FinCat, MorphismId, ObjectId, SiteRef};
use crate::error::{Error, Result};

/// A functor between finite sites, checked to preserve identities and composition.
#[derive(Debug, Clone)]
pub struct FunctorData {
    pub source: Arc<FinCat>,
    pub target: Arc<FinCat>,
    pub object_map: Vec<ObjectId>,
    pub morphism_map: Vec<MorphismId>,
}

/// Functor interchange document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub source: SiteRef,
    pub target: SiteRef,
    pub objects: BTreeMap<String, String>,
    /// May omit morphisms whose image has the same id in the target.
    #[serde(default)]
    pub morphisms: BTreeMap<String, String>,
}

impl FunctorData {
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        object_map: Vec<ObjectId>,
        morphism_map: Vec<MorphismId>,
    ) -> Result<Self> {
        let f = Self {
            source,
            target,
            object_map,
            morphism_map,
        };
        f.check()?;
        Ok(f)
    }

    fn check(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if self.object_map.len() != s.object_count() || self.morphism_map.len() != s.morphism_count() {
            return Err(Error::Functor("maps do not cover the source".into()));
        }
        for m in s.morphisms() {
            let fm = self.morphism_map[m];
            if t.dom(fm) != self.object_map[s.dom(m)] || t.cod(fm) != self.object_map[s.cod(m)] {
                return Err(Error::Functor(format!(
                    "image of `{}` has the wrong endpoints",
                    s.morphism_name(m)
                )));
            }
        }
        for o in s.objects() {
            if self.morphism_map[s.identity(o)] != t.identity(self.object_map[o]) {
                return Err(Error::Functor(format!(
                    "identity of `{}` is not preserved",
                    s.object_name(o)
                )));
            }
        }
        for g in s.morphisms() {
            for f in s.morphisms() {
                if let Some(gf) = s.compose(g, f) {
                    if t.comp(self.morphism_map[g], self.morphism_map[f]) != self.morphism_map[gf] {
                        return Err(Error::Functor(format!(
                            "composite ({}, {}) is not preserved",
                            s.morphism_name(g),
                            s.morphism_name(f)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(cat: Arc<FinCat>) -> Self {
        Self {
            object_map: cat.objects().collect(),
            morphism_map: cat.morphisms().collect(),
            source: cat.clone(),
            target: cat,
        }
    }

    /// The unique functor to a one-object, one-morphism category.
    pub fn collapse(source: Arc<FinCat>, target: Arc<FinCat>) -> Result<Self> {
        if target.morphism_count() != 1 {
            return Err(Error::Functor("collapse target is not terminal".into()));
        }
        Self::new(
            source.clone(),
            target,
            vec![0; source.object_count()],
            vec![0; source.morphism_count()],
        )
    }

    /// Inclusion matching objects and morphisms by identifier.
    pub fn by_names(source: Arc<FinCat>, target: Arc<FinCat>) -> Result<Self> {
        let object_map = source
            .objects()
            .map(|o| {
                target.object_index(source.object_name(o)).ok_or_else(|| {
                    Error::Functor(format!("object `{}` missing in target", source.object_name(o)))
                })
            })
            .collect::<Result<_>>()?;
        let morphism_map = source
            .morphisms()
            .map(|m| {
                target.morphism_index(source.morphism_name(m)).ok_or_else(|| {
                    Error::Functor(format!("morphism `{}` missing in target", source.morphism_name(m)))
                })
            })
            .collect::<Result<_>>()?;
        Self::new(source, target, object_map, morphism_map)
    }

    pub fn from_doc(doc: &FunctorDoc) -> Result<Self> {
        let source = doc.source.resolve()?;
        let target = doc.target.resolve()?;
        let object_map = source
            .objects()
            .map(|o| {
                let name = source.object_name(o);
                let img = doc
                    .objects
                    .get(name)
                    .ok_or_else(|| Error::schema(format!("/objects/{name}"), "object not mapped"))?;
                target
                    .object_index(img)
                    .ok_or_else(|| Error::Functor(format!("unknown target object `{img}`")))
            })
            .collect::<Result<_>>()?;
        let morphism_map = source
            .morphisms()
            .map(|m| {
                let name = source.morphism_name(m);
                let img = doc.morphisms.get(name).map(String::as_str).unwrap_or(name);
                target
                    .morphism_index(img)
                    .ok_or_else(|| Error::Functor(format!("`{name}` has no image `{img}` in target")))
            })
            .collect::<Result<_>>()?;
        Self::new(source, target, object_map, morphism_map)
    }

    pub fn to_doc(&self) -> FunctorDoc {
        let (s, t) = (&self.source, &self.target);
        FunctorDoc {
            source: SiteRef::for_site(s),
            target: SiteRef::for_site(t),
            objects: s
                .objects()
                .map(|o| (s.object_name(o).into(), t.object_name(self.object_map[o]).into()))
                .collect(),
            morphisms: s
                .morphisms()
                .map(|m| (s.morphism_name(m).into(), t.morphism_name(self.morphism_map[m]).into()))
                .collect(),
        }
    }

    pub fn obj(&self, c: ObjectId) -> ObjectId {
        self.object_map[c]
    }

    pub fn mor(&self, m: MorphismId) -> MorphismId {
        self.morphism_map[m]
    }
}
