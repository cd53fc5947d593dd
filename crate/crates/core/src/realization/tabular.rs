use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::candidate_morphisms;
use crate::error::{Error, Result};
use crate::fincat::{FinCat, ObjectId, SiteRef};

/// A covariant `A: 𝒞 → Set` given by tables. `action[u][y] = A(u)(y)` for `y ∈ A(dom u)`.
#[derive(Debug, Clone)]
pub struct TabularCarrier {
    site: Arc<FinCat>,
    sets: Vec<Vec<String>>,
    action: Vec<Vec<u32>>,
    monos_only: bool,
}

/// Interchange form: like a presheaf document, with arrows acting forwards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabularDoc {
    pub site: SiteRef,
    pub carrier: BTreeMap<String, Vec<String>>,
    pub action: BTreeMap<String, BTreeMap<String, String>>,
}

/// The cofiltered-elements conditions, checked on the finite tables only.
#[derive(Debug, Clone, Serialize)]
pub struct FilteringCheck {
    pub nonempty: bool,
    pub spans: bool,
    pub equalizers: bool,
    pub filtering: bool,
    pub scope: &'static str,
}

impl TabularCarrier {
    pub fn new(site: Arc<FinCat>, sets: Vec<Vec<String>>, action: Vec<Vec<u32>>) -> Result<Self> {
        let bad = |m: String| Err(Error::Invalid(m));
        if sets.len() != site.object_count() || action.len() != site.morphism_count() {
            return bad("carrier tables do not match the site".into());
        }
        for u in site.morphisms() {
            let (d, c) = (site.dom(u), site.cod(u));
            let row = &action[u];
            if row.len() != sets[d].len() || row.iter().any(|&v| v as usize >= sets[c].len()) {
                return bad(format!("A({}) is not a function", site.morphism_name(u)));
            }
            if site.is_identity(u) && row.iter().enumerate().any(|(i, &v)| v as usize != i) {
                return bad(format!("A({}) is not the identity", site.morphism_name(u)));
            }
        }
        for g in site.morphisms() {
            for f in site.arrows_into(site.dom(g)).iter().copied() {
                let gf = site.comp(g, f);
                for y in 0..sets[site.dom(f)].len() {
                    if action[gf][y] != action[g][action[f][y] as usize] {
                        return bad(format!(
                            "A({}) ≠ A({})∘A({})",
                            site.morphism_name(gf),
                            site.morphism_name(g),
                            site.morphism_name(f)
                        ));
                    }
                }
            }
        }
        let monos_only = site.has_split_epi_mono_factorization();
        Ok(Self {
            site,
            sets,
            action,
            monos_only,
        })
    }

    pub fn from_doc(doc: &TabularDoc) -> Result<Self> {
        let site = doc.site.resolve()?;
        let mut sets = Vec::new();
        let mut index: Vec<HashMap<&str, usize>> = Vec::new();
        for c in site.objects() {
            let name = site.object_name(c);
            let elems = doc
                .carrier
                .get(name)
                .ok_or_else(|| Error::schema(format!("/carrier/{name}"), "missing carrier set"))?;
            index.push(elems.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect());
            if index[c].len() != elems.len() {
                return Err(Error::schema(format!("/carrier/{name}"), "duplicate element"));
            }
            sets.push(elems.clone());
        }
        if let Some(k) = doc.carrier.keys().find(|k| site.object_index(k).is_none()) {
            return Err(Error::schema(format!("/carrier/{k}"), "not an object of the site"));
        }
        if let Some(k) = doc.action.keys().find(|k| site.morphism_index(k).is_none()) {
            return Err(Error::schema(format!("/action/{k}"), "not a morphism of the site"));
        }
        let mut action = Vec::new();
        for u in site.morphisms() {
            let (d, c) = (site.dom(u), site.cod(u));
            let name = site.morphism_name(u);
            let Some(table) = doc.action.get(name) else {
                if site.is_identity(u) {
                    action.push((0..sets[c].len() as u32).collect());
                    continue;
                }
                return Err(Error::schema(format!("/action/{name}"), "missing action"));
            };
            let mut row = Vec::new();
            for y in &sets[d] {
                let pointer = format!("/action/{name}/{y}");
                let img = table.get(y).ok_or_else(|| Error::schema(&pointer, "action is not total"))?;
                let v = index[c]
                    .get(img.as_str())
                    .ok_or_else(|| Error::schema(&pointer, format!("unknown element `{img}`")))?;
                row.push(*v as u32);
            }
            action.push(row);
        }
        Self::new(site, sets, action)
    }

    pub fn to_doc(&self) -> TabularDoc {
        let site = &self.site;
        TabularDoc {
            site: SiteRef::for_site(site),
            carrier: site
                .objects()
                .map(|c| (site.object_name(c).into(), self.sets[c].clone()))
                .collect(),
            action: site
                .morphisms()
                .filter(|&u| !site.is_identity(u))
                .map(|u| {
                    let (d, c) = (site.dom(u), site.cod(u));
                    let table = (0..self.sets[d].len())
                        .map(|y| (self.sets[d][y].clone(), self.sets[c][self.action[u][y] as usize].clone()))
                        .collect();
                    (site.morphism_name(u).into(), table)
                })
                .collect(),
        }
    }

    pub fn site(&self) -> &FinCat {
        &self.site
    }

    pub fn size(&self, c: ObjectId) -> usize {
        self.sets[c].len()
    }

    pub fn element_name(&self, c: ObjectId, e: usize) -> String {
        self.sets[c][e].clone()
    }

    pub fn element_index(&self, c: ObjectId, name: &str) -> Option<usize> {
        self.sets[c].iter().position(|e| e == name)
    }

    /// Whether only monos were tested (the site factors every map as split epi then mono).
    pub fn monos_only(&self) -> bool {
        self.monos_only
    }

    pub fn is_interior(&self, c: ObjectId, x: usize) -> bool {
        self.is_interior_among(c, x, self.monos_only)
    }

    /// The definition over every morphism into `c`, ignoring the factorization shortcut.
    pub fn is_interior_exhaustive(&self, c: ObjectId, x: usize) -> bool {
        self.is_interior_among(c, x, false)
    }

    fn is_interior_among(&self, c: ObjectId, x: usize, monos_only: bool) -> bool {
        candidate_morphisms(&self.site, c, monos_only).into_iter().all(|u| {
            !self.action[u].iter().any(|&v| v as usize == x) || self.site.is_split_epi(u)
        })
    }

    pub fn interior(&self, c: ObjectId) -> Vec<usize> {
        (0..self.size(c)).filter(|&x| self.is_interior(c, x)).collect()
    }

    pub fn check_filtering(&self) -> FilteringCheck {
        let site = &self.site;
        let nonempty = site.objects().any(|c| self.size(c) > 0);
        let elems: Vec<(ObjectId, usize)> = site
            .objects()
            .flat_map(|c| (0..self.size(c)).map(move |x| (c, x)))
            .collect();
        // every pair of elements has a common source
        let spans = elems.iter().all(|&(c, x)| {
            elems.iter().all(|&(c2, x2)| {
                site.objects().any(|d| {
                    (0..self.size(d)).any(|z| {
                        site.hom(d, c).iter().any(|&u| self.action[u][z] as usize == x)
                            && site.hom(d, c2).iter().any(|&v| self.action[v][z] as usize == x2)
                    })
                })
            })
        });
        // parallel arrows agreeing on z are equalized by some arrow hitting z
        let equalizers = site.objects().all(|d| {
            site.objects().all(|c| {
                let hom = site.hom(d, c);
                hom.iter().all(|&u| {
                    hom.iter().all(|&v| {
                        (0..self.size(d)).all(|z| {
                            self.action[u][z] != self.action[v][z]
                                || site.objects().any(|e| {
                                    site.hom(e, d).iter().any(|&w| {
                                        site.comp(u, w) == site.comp(v, w)
                                            && self.action[w].iter().any(|&y| y as usize == z)
                                    })
                                })
                        })
                    })
                })
            })
        });
        FilteringCheck {
            nonempty,
            spans,
            equalizers,
            filtering: nonempty && spans && equalizers,
            scope: "finite tables only",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::standard::DeltaSite;

    /// `A[0] = {∗}`, `A[1] = {0, 1}` on Δ₁: only the endpoints.
    pub(crate) fn endpoints(d: &DeltaSite) -> TabularCarrier {
        let cat = &d.cat;
        let action = cat
            .morphisms()
            .map(|u| {
                let vals = d.values(u);
                match (cat.dom(u), cat.cod(u)) {
                    (0, 0) => vec![0],
                    (0, 1) => vec![vals[0] as u32],
                    (1, 0) => vec![0, 0],
                    // a map [1] → [1] sends endpoint i to vals[i]
                    _ => vec![vals[0] as u32, vals[1] as u32],
                }
            })
            .collect();
        TabularCarrier::new(
            cat.clone(),
            vec![vec!["*".into()], vec!["0".into(), "1".into()]],
            action,
        )
        .unwrap()
    }

    #[test]
    fn endpoints_only_has_empty_interior() {
        let d = DeltaSite::new(1).unwrap();
        let a = endpoints(&d);
        assert_eq!(a.interior(0), vec![0]);
        assert!(a.interior(1).is_empty());
        for x in 0..2 {
            assert_eq!(a.is_interior(1, x), a.is_interior_exhaustive(1, x));
        }
        let doc = a.to_doc();
        let back = TabularCarrier::from_doc(&doc).unwrap();
        assert_eq!(back.to_doc(), doc);
    }

    #[test]
    fn rejects_non_functors() {
        let d = DeltaSite::new(1).unwrap();
        let mut doc = endpoints(&d).to_doc();
        // A of the constant map at 0 must agree with A(vertex 0)∘A(σ)
        doc.action.get_mut("[1]->[1]:0,0").unwrap().insert("1".into(), "1".into());
        assert!(TabularCarrier::from_doc(&doc).is_err());
    }
}
