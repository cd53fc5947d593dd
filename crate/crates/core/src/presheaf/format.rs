use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::Presheaf;
use crate::error::{Error, Result};
use crate::fincat::SiteRef;

/// Presheaf interchange document. Identity actions may be omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafDoc {
    pub site: SiteRef,
    pub sections: BTreeMap<String, Vec<String>>,
    pub action: BTreeMap<String, BTreeMap<String, String>>,
}

fn escape(s: &str) -> String {
    s.replace('~', "~0").replace('/', "~1")
}

impl PresheafDoc {
    pub fn load(&self) -> Result<Presheaf> {
        let site = self.site.resolve()?;
        let mut names = Vec::with_capacity(site.object_count());
        let mut lookup: Vec<HashMap<&str, usize>> = Vec::with_capacity(site.object_count());
        for c in site.objects() {
            let obj = site.object_name(c);
            let elems = self.sections.get(obj).ok_or_else(|| {
                Error::schema(format!("/sections/{}", escape(obj)), "missing sections")
            })?;
            let mut idx = HashMap::new();
            for (i, e) in elems.iter().enumerate() {
                if idx.insert(e.as_str(), i).is_some() {
                    return Err(Error::schema(
                        format!("/sections/{}/{i}", escape(obj)),
                        format!("duplicate element `{e}`"),
                    ));
                }
            }
            names.push(elems.clone());
            lookup.push(idx);
        }
        if let Some(extra) = self.sections.keys().find(|k| site.object_index(k).is_none()) {
            return Err(Error::schema(
                format!("/sections/{}", escape(extra)),
                "not an object of the site",
            ));
        }
        if let Some(extra) = self.action.keys().find(|k| site.morphism_index(k).is_none()) {
            return Err(Error::schema(
                format!("/action/{}", escape(extra)),
                "not a morphism of the site",
            ));
        }
        let mut action = Vec::with_capacity(site.morphism_count());
        for u in site.morphisms() {
            let (d, c) = (site.dom(u), site.cod(u));
            let name = site.morphism_name(u);
            let table = match self.action.get(name) {
                Some(t) => t,
                None if site.is_identity(u) => {
                    action.push((0..names[c].len() as u32).collect());
                    continue;
                }
                None => {
                    return Err(Error::schema(
                        format!("/action/{}", escape(name)),
                        "missing action",
                    ))
                }
            };
            let mut row = Vec::with_capacity(names[c].len());
            for e in &names[c] {
                let pointer = format!("/action/{}/{}", escape(name), escape(e));
                let img = table
                    .get(e)
                    .ok_or_else(|| Error::schema(&pointer, "action is not total"))?;
                let j = lookup[d]
                    .get(img.as_str())
                    .ok_or_else(|| Error::schema(&pointer, format!("unknown element `{img}`")))?;
                row.push(*j as u32);
            }
            if table.len() != names[c].len() {
                return Err(Error::schema(
                    format!("/action/{}", escape(name)),
                    "action mentions unknown elements",
                ));
            }
            action.push(row);
        }
        Presheaf::new(site.clone(), names.iter().map(Vec::len).collect(), action)?.with_names(names)
    }

    pub fn from_presheaf(x: &Presheaf) -> Self {
        let site = x.site();
        let name = |c, e| x.element_name(c, e);
        PresheafDoc {
            site: SiteRef::for_site(site),
            sections: site
                .objects()
                .map(|c| {
                    (
                        site.object_name(c).to_string(),
                        (0..x.size(c)).map(|e| name(c, e)).collect(),
                    )
                })
                .collect(),
            action: site
                .morphisms()
                .filter(|&u| !site.is_identity(u))
                .map(|u| {
                    let (d, c) = (site.dom(u), site.cod(u));
                    (
                        site.morphism_name(u).to_string(),
                        (0..x.size(c)).map(|e| (name(c, e), name(d, x.act(u, e)))).collect(),
                    )
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::standard::DeltaSite;
    use crate::json;

    #[test]
    fn round_trip_is_byte_stable() {
        let d = DeltaSite::new(2).unwrap();
        let y = Presheaf::yoneda(&d.cat, 2);
        let text = json::to_string(&PresheafDoc::from_presheaf(&y));
        let doc: PresheafDoc = json::from_str(&text).unwrap();
        let back = doc.load().unwrap();
        assert!(back.same_tables(&y));
        assert_eq!(json::to_string(&PresheafDoc::from_presheaf(&back)), text);
    }

    #[test]
    fn missing_action_is_located() {
        let d = DeltaSite::new(1).unwrap();
        let y = Presheaf::yoneda(&d.cat, 1);
        let mut doc = PresheafDoc::from_presheaf(&y);
        doc.action.remove("[0]->[1]:1");
        match doc.load().unwrap_err() {
            Error::Schema { pointer, .. } => assert_eq!(pointer, "/action/[0]->[1]:1"),
            e => panic!("{e}"),
        }
    }
}
