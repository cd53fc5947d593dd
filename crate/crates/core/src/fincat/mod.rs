//! Finite categories stored as dense composition tables.

mod format;
mod functor;
pub mod standard;

use std::collections::HashMap;

use serde::Serialize;

use crate::error::CategoryError;

pub use format::{CategoryDoc, CompositeEntry, MorphismEntry, SiteRef};
pub use functor::{FunctorData, FunctorDoc};
pub use standard::{
    build_standard_site, CubeComponent, CubeSite, DeltaSite, SiteKind, StandardSite,
};

/// Index of an object in a [`FinCat`].
pub type ObjectId = usize;
/// Index of a morphism in a [`FinCat`].
pub type MorphismId = usize;

const NO_COMPOSITE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub dom: ObjectId,
    pub cod: ObjectId,
}

/// A validated finite category.
///
/// Immutable once built; every accessor is a table lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCat {
    name: String,
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<MorphismId>,
    // compose[g * n + f] = g ∘ f
    compose: Vec<u32>,
    hom: Vec<Vec<MorphismId>>,
    hom_pos: Vec<usize>,
    into: Vec<Vec<MorphismId>>,
}

impl FinCat {
    /// Builds a category from its tables, computing composites with `composite(g, f)` for
    /// every composable pair, then checks the category laws.
    pub(crate) fn from_parts(
        name: impl Into<String>,
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<MorphismId>,
        mut composite: impl FnMut(MorphismId, MorphismId) -> MorphismId,
    ) -> Result<Self, CategoryError> {
        let n = arrows.len();
        let mut compose = vec![NO_COMPOSITE; n * n];
        for g in 0..n {
            for f in 0..n {
                if arrows[f].cod == arrows[g].dom {
                    compose[g * n + f] = composite(g, f) as u32;
                }
            }
        }
        let cat = Self::assemble(name.into(), objects, arrows, identities, compose);
        cat.check_laws()?;
        Ok(cat)
    }

    fn assemble(
        name: String,
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<MorphismId>,
        compose: Vec<u32>,
    ) -> Self {
        let k = objects.len();
        let mut hom = vec![Vec::new(); k * k];
        let mut hom_pos = vec![0; arrows.len()];
        let mut into = vec![Vec::new(); k];
        for (m, a) in arrows.iter().enumerate() {
            let slot = &mut hom[a.dom * k + a.cod];
            hom_pos[m] = slot.len();
            slot.push(m);
            into[a.cod].push(m);
        }
        Self {
            name,
            objects,
            arrows,
            identities,
            compose,
            hom,
            hom_pos,
            into,
        }
    }

    /// Validates raw object/morphism/composition tables.
    pub fn validate(doc: &CategoryDoc) -> Result<Self, CategoryError> {
        let mut object_index = HashMap::new();
        for (i, o) in doc.objects.iter().enumerate() {
            if object_index.insert(o.as_str(), i).is_some() {
                return Err(CategoryError::DuplicateObject(o.clone()));
            }
        }
        let mut arrows = Vec::with_capacity(doc.morphisms.len());
        let mut arrow_index = HashMap::new();
        for (i, m) in doc.morphisms.iter().enumerate() {
            if arrow_index.insert(m.id.as_str(), i).is_some() {
                return Err(CategoryError::DuplicateMorphism(m.id.clone()));
            }
            let lookup = |o: &str| {
                object_index
                    .get(o)
                    .copied()
                    .ok_or_else(|| CategoryError::UnknownObject {
                        morphism: m.id.clone(),
                        object: o.to_string(),
                    })
            };
            arrows.push(Arrow {
                name: m.id.clone(),
                dom: lookup(&m.dom)?,
                cod: lookup(&m.cod)?,
            });
        }
        let find_arrow = |id: &str| {
            arrow_index
                .get(id)
                .copied()
                .ok_or_else(|| CategoryError::UnknownMorphism(id.to_string()))
        };
        let mut identities = Vec::with_capacity(doc.objects.len());
        for (o, name) in doc.objects.iter().enumerate() {
            let id = doc
                .identities
                .get(name)
                .ok_or_else(|| CategoryError::MissingIdentity(name.clone()))?;
            let m = find_arrow(id)?;
            if arrows[m].dom != o || arrows[m].cod != o {
                return Err(CategoryError::IdentityMistyped {
                    object: name.clone(),
                    morphism: id.clone(),
                });
            }
            identities.push(m);
        }
        let n = arrows.len();
        let mut compose = vec![NO_COMPOSITE; n * n];
        for entry in &doc.compose {
            let g = find_arrow(&entry.g)?;
            let f = find_arrow(&entry.f)?;
            let r = find_arrow(&entry.result)?;
            if arrows[f].cod != arrows[g].dom {
                return Err(CategoryError::NotComposable {
                    g: entry.g.clone(),
                    f: entry.f.clone(),
                });
            }
            if compose[g * n + f] != NO_COMPOSITE {
                return Err(CategoryError::DuplicateComposite {
                    g: entry.g.clone(),
                    f: entry.f.clone(),
                });
            }
            if arrows[r].dom != arrows[f].dom || arrows[r].cod != arrows[g].cod {
                return Err(CategoryError::IllTypedComposite {
                    g: entry.g.clone(),
                    f: entry.f.clone(),
                    result: entry.result.clone(),
                });
            }
            compose[g * n + f] = r as u32;
        }
        // Composites with an identity may be left implicit.
        for g in 0..n {
            for f in 0..n {
                if arrows[f].cod != arrows[g].dom || compose[g * n + f] != NO_COMPOSITE {
                    continue;
                }
                if identities.contains(&g) {
                    compose[g * n + f] = f as u32;
                } else if identities.contains(&f) {
                    compose[g * n + f] = g as u32;
                } else {
                    return Err(CategoryError::MissingComposite {
                        g: arrows[g].name.clone(),
                        f: arrows[f].name.clone(),
                    });
                }
            }
        }
        let cat = Self::assemble(
            doc.name.clone().unwrap_or_default(),
            doc.objects.clone(),
            arrows,
            identities,
            compose,
        );
        cat.check_laws()?;
        Ok(cat)
    }

    fn check_laws(&self) -> Result<(), CategoryError> {
        let n = self.arrows.len();
        for g in 0..n {
            for f in 0..n {
                if let Some(r) = self.compose(g, f) {
                    if self.dom(r) != self.dom(f) || self.cod(r) != self.cod(g) {
                        return Err(CategoryError::IllTypedComposite {
                            g: self.arrows[g].name.clone(),
                            f: self.arrows[f].name.clone(),
                            result: self.arrows[r].name.clone(),
                        });
                    }
                }
            }
        }
        for (m, a) in self.arrows.iter().enumerate() {
            if self.compose(self.identities[a.cod], m) != Some(m)
                || self.compose(m, self.identities[a.dom]) != Some(m)
            {
                return Err(CategoryError::UnitLaw(a.name.clone()));
            }
        }
        for f in 0..n {
            for &g in self.arrows_out_of(self.cod(f)).iter() {
                let gf = self.compose(g, f).unwrap();
                for &h in self.arrows_out_of(self.cod(g)).iter() {
                    let hg = self.compose(h, g).unwrap();
                    if self.compose(h, gf) != self.compose(hg, f) {
                        return Err(CategoryError::NonAssociative {
                            h: self.arrows[h].name.clone(),
                            g: self.arrows[g].name.clone(),
                            f: self.arrows[f].name.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub(crate) fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> std::ops::Range<ObjectId> {
        0..self.objects.len()
    }

    pub fn morphisms(&self) -> std::ops::Range<MorphismId> {
        0..self.arrows.len()
    }

    pub fn object_name(&self, o: ObjectId) -> &str {
        &self.objects[o]
    }

    pub fn object_index(&self, name: &str) -> Option<ObjectId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrow(&self, m: MorphismId) -> &Arrow {
        &self.arrows[m]
    }

    pub fn morphism_name(&self, m: MorphismId) -> &str {
        &self.arrows[m].name
    }

    pub fn morphism_index(&self, name: &str) -> Option<MorphismId> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn dom(&self, m: MorphismId) -> ObjectId {
        self.arrows[m].dom
    }

    pub fn cod(&self, m: MorphismId) -> ObjectId {
        self.arrows[m].cod
    }

    pub fn identity(&self, o: ObjectId) -> MorphismId {
        self.identities[o]
    }

    pub fn is_identity(&self, m: MorphismId) -> bool {
        self.identities[self.arrows[m].dom] == m
    }

    /// `g ∘ f`, defined when `cod f = dom g`.
    pub fn compose(&self, g: MorphismId, f: MorphismId) -> Option<MorphismId> {
        let r = self.compose[g * self.arrows.len() + f];
        (r != NO_COMPOSITE).then_some(r as usize)
    }

    /// `g ∘ f` for a pair already known to be composable.
    #[inline]
    pub fn comp(&self, g: MorphismId, f: MorphismId) -> MorphismId {
        self.compose[g * self.arrows.len() + f] as usize
    }

    pub fn hom(&self, a: ObjectId, b: ObjectId) -> &[MorphismId] {
        &self.hom[a * self.objects.len() + b]
    }

    /// Position of `m` inside `hom(dom m, cod m)`.
    pub fn hom_position(&self, m: MorphismId) -> usize {
        self.hom_pos[m]
    }

    pub fn arrows_into(&self, c: ObjectId) -> &[MorphismId] {
        &self.into[c]
    }

    pub fn arrows_out_of(&self, c: ObjectId) -> Vec<MorphismId> {
        self.objects()
            .flat_map(|d| self.hom(c, d).iter().copied())
            .collect()
    }

    /// A section `s` with `u ∘ s = id`, if one exists.
    pub fn split_epi_section(&self, u: MorphismId) -> Option<MorphismId> {
        let (d, c) = (self.dom(u), self.cod(u));
        let id = self.identity(c);
        self.hom(c, d).iter().copied().find(|&s| self.comp(u, s) == id)
    }

    pub fn is_split_epi(&self, u: MorphismId) -> bool {
        self.split_epi_section(u).is_some()
    }

    pub fn is_mono(&self, u: MorphismId) -> bool {
        let d = self.dom(u);
        self.objects().all(|e| {
            let hs = self.hom(e, d);
            let mut seen = std::collections::HashSet::with_capacity(hs.len());
            hs.iter().all(|&a| seen.insert(self.comp(u, a)))
        })
    }

    pub fn is_iso(&self, u: MorphismId) -> bool {
        let (d, c) = (self.dom(u), self.cod(u));
        self.hom(c, d).iter().any(|&v| {
            self.comp(u, v) == self.identity(c) && self.comp(v, u) == self.identity(d)
        })
    }

    /// Objects `t` with exactly one morphism from every object.
    pub fn terminal_object(&self) -> Option<ObjectId> {
        self.objects()
            .find(|&t| self.objects().all(|c| self.hom(c, t).len() == 1))
    }

    /// Whether every morphism factors as a split epi followed by a mono.
    pub fn has_split_epi_mono_factorization(&self) -> bool {
        let monos: Vec<bool> = self.morphisms().map(|m| self.is_mono(m)).collect();
        let split: Vec<bool> = self.morphisms().map(|m| self.is_split_epi(m)).collect();
        self.morphisms().all(|u| {
            self.objects().any(|e| {
                self.hom(self.dom(u), e).iter().any(|&p| {
                    split[p]
                        && self
                            .hom(e, self.cod(u))
                            .iter()
                            .any(|&m| monos[m] && self.comp(m, p) == u)
                })
            })
        })
    }

    /// Emits the interchange document for this category.
    pub fn to_doc(&self) -> CategoryDoc {
        let mut compose = Vec::new();
        for g in self.morphisms() {
            for f in self.morphisms() {
                if self.is_identity(g) || self.is_identity(f) {
                    continue;
                }
                if let Some(r) = self.compose(g, f) {
                    compose.push(CompositeEntry {
                        g: self.arrows[g].name.clone(),
                        f: self.arrows[f].name.clone(),
                        result: self.arrows[r].name.clone(),
                    });
                }
            }
        }
        CategoryDoc {
            name: Some(self.name.clone()).filter(|n| !n.is_empty()),
            objects: self.objects.clone(),
            morphisms: self
                .arrows
                .iter()
                .map(|a| MorphismEntry {
                    id: a.name.clone(),
                    dom: self.objects[a.dom].clone(),
                    cod: self.objects[a.cod].clone(),
                })
                .collect(),
            identities: self
                .objects()
                .map(|o| {
                    (
                        self.objects[o].clone(),
                        self.arrows[self.identities[o]].name.clone(),
                    )
                })
                .collect(),
            compose,
        }
    }

    /// Same objects, morphisms and composition, ignoring the display name.
    pub fn same_structure(&self, other: &FinCat) -> bool {
        self.objects == other.objects
            && self.arrows == other.arrows
            && self.identities == other.identities
            && self.compose == other.compose
    }
}

/// Result of checking the presheaf pre-cohesion criteria on a site.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiteReport {
    pub site: String,
    pub has_terminal: bool,
    pub terminal: Option<String>,
    pub all_objects_pointed: bool,
    /// Per object, a morphism from the terminal object (when there is one).
    pub points: Vec<ObjectPoint>,
    pub idempotents_split: bool,
    pub failing_idempotent: Option<String>,
    pub pre_cohesive: bool,
    pub sufficiently_cohesive: bool,
    pub two_point_object: Option<String>,
    pub quality_type: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObjectPoint {
    pub object: String,
    pub point: Option<String>,
}

pub fn classify_site(cat: &FinCat) -> SiteReport {
    let terminal = cat.terminal_object();
    let points: Vec<ObjectPoint> = cat
        .objects()
        .map(|c| ObjectPoint {
            object: cat.object_name(c).to_string(),
            point: terminal
                .and_then(|t| cat.hom(t, c).first())
                .map(|&m| cat.morphism_name(m).to_string()),
        })
        .collect();
    let all_objects_pointed = terminal.is_some() && points.iter().all(|p| p.point.is_some());
    let failing_idempotent = cat
        .morphisms()
        .find(|&e| is_idempotent(cat, e) && !idempotent_splits(cat, e))
        .map(|e| cat.morphism_name(e).to_string());
    let pre_cohesive = all_objects_pointed;
    let two_point_object = terminal.and_then(|t| {
        cat.objects()
            .find(|&c| cat.hom(t, c).len() >= 2)
            .map(|c| cat.object_name(c).to_string())
    });
    let quality_type =
        pre_cohesive && terminal.is_some_and(|t| cat.objects().all(|c| cat.hom(t, c).len() == 1));
    SiteReport {
        site: cat.name().to_string(),
        has_terminal: terminal.is_some(),
        terminal: terminal.map(|t| cat.object_name(t).to_string()),
        all_objects_pointed,
        points,
        idempotents_split: failing_idempotent.is_none(),
        failing_idempotent,
        pre_cohesive,
        sufficiently_cohesive: pre_cohesive && two_point_object.is_some(),
        two_point_object: two_point_object.filter(|_| pre_cohesive),
        quality_type,
    }
}

fn is_idempotent(cat: &FinCat, e: MorphismId) -> bool {
    cat.dom(e) == cat.cod(e) && cat.comp(e, e) == e
}

/// `e = s ∘ r` with `r ∘ s = id`.
fn idempotent_splits(cat: &FinCat, e: MorphismId) -> bool {
    let c = cat.dom(e);
    cat.objects().any(|d| {
        cat.hom(c, d).iter().any(|&r| {
            cat.hom(d, c)
                .iter()
                .any(|&s| cat.comp(r, s) == cat.identity(d) && cat.comp(s, r) == e)
        })
    })
}
