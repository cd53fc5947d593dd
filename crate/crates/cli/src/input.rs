//! Reading sites, presheaves, connectors and functors from the command line.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use cohesio_core::fincat::standard::{build_standard_site, DeltaSite, SiteKind, StandardSite};
use cohesio_core::fincat::{CategoryDoc, FunctorDoc};
use cohesio_core::homotopy::Connector;
use cohesio_core::presheaf::PresheafDoc;
use cohesio_core::{json, CohesionContext, Error, FinCat, FunctorData, Presheaf, Result};
use serde::{Deserialize, Serialize};

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

/// `--site` accepts a builtin name or the path of a site document.
pub fn site(arg: &str) -> Result<Arc<FinCat>> {
    let path = Path::new(arg);
    if path.is_file() {
        let doc: CategoryDoc = json::from_str(&read(path)?)?;
        return Ok(Arc::new(doc.load()?));
    }
    builtin(arg)
}

pub fn builtin(name: &str) -> Result<Arc<FinCat>> {
    let kind: SiteKind = name.parse()?;
    Ok(build_standard_site(kind)?.cat().clone())
}

/// The truncated simplex category a site is, if any.
pub fn delta_site(cat: &FinCat) -> Result<DeltaSite> {
    match cat.name().parse::<SiteKind>() {
        Ok(kind @ SiteKind::Delta(_)) => match build_standard_site(kind)? {
            StandardSite::Delta(d) if d.cat.same_structure(cat) => Ok(d),
            _ => Err(Error::Invalid(format!("site `{}` is not a truncated simplex category", cat.name()))),
        },
        _ => Err(Error::Invalid(format!("site `{}` is not a truncated simplex category", cat.name()))),
    }
}

pub fn presheaf(path: &Path) -> Result<Presheaf> {
    let doc: PresheafDoc = json::from_str(&read(path)?)?;
    doc.load()
}

/// Loads `--object`, checking it against `--site` when both are given.
pub fn object(path: &Path, site_arg: Option<&str>) -> Result<Presheaf> {
    let x = presheaf(path)?;
    if let Some(s) = site_arg {
        let cat = site(s)?;
        if !cat.same_structure(x.site()) {
            return Err(Error::SiteMismatch);
        }
    }
    Ok(x)
}

/// Connector document: an interval presheaf and two of its elements over the terminal object.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectorDoc {
    pub interval: PresheafDoc,
    pub zero: String,
    pub one: String,
}

pub fn connector(ctx: &CohesionContext, path: Option<&Path>) -> Result<Connector> {
    let Some(path) = path else {
        return Connector::standard(ctx);
    };
    let doc: ConnectorDoc = json::from_str(&read(path)?)?;
    let interval = doc.interval.load()?;
    if !interval.site().same_structure(ctx.site()) {
        return Err(Error::SiteMismatch);
    }
    let t = ctx.terminal();
    let point = |name: &str, field: &str| {
        (0..interval.size(t))
            .find(|&e| interval.element_name(t, e) == name)
            .ok_or_else(|| Error::Schema {
                pointer: format!("/{field}"),
                message: format!("`{name}` is not an element over the terminal object"),
            })
    };
    let (zero, one) = (point(&doc.zero, "zero")?, point(&doc.one, "one")?);
    Connector::new(ctx, interval, zero, one)
}

pub fn functor(path: &Path) -> Result<FunctorData> {
    let doc: FunctorDoc = json::from_str(&read(path)?)?;
    FunctorData::from_doc(&doc)
}

/// Element of `x` over `c` by name, or by index when no name matches.
pub fn element(x: &Presheaf, c: usize, name: &str) -> Result<usize> {
    (0..x.size(c))
        .find(|&e| x.element_name(c, e) == name)
        .or_else(|| name.parse().ok().filter(|&i| i < x.size(c)))
        .ok_or_else(|| Error::Invalid(format!("no element `{name}` over `{}`", x.site().object_name(c))))
}
