//! Builders for the standard sites: truncated simplex categories, the cube
//! category and strictly bipointed finite sets (opposite).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::{Arrow, FinCat, MorphismId, ObjectId};
use crate::error::{Error, Result};

/// Largest truncation accepted for `delta<n>`.
pub const MAX_DELTA: usize = 6;
/// Largest dimension accepted for the cube and bipointed sites.
pub const MAX_CUBE_CAP: usize = 4;
/// Default dimension cap for the cube and bipointed sites.
pub const DEFAULT_CUBE_CAP: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteKind {
    Terminal,
    /// Full subcategory of Δ on `[0], …, [n]`.
    Delta(usize),
    Cube(usize),
    BipointedOp(usize),
}

impl fmt::Display for SiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SiteKind::Terminal => write!(f, "terminal"),
            SiteKind::Delta(n) => write!(f, "delta{n}"),
            SiteKind::Cube(k) => write!(f, "cube{k}"),
            SiteKind::BipointedOp(k) => write!(f, "bipointed_op{k}"),
        }
    }
}

impl FromStr for SiteKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |rest: &str, default: usize| -> Option<usize> {
            let rest = rest.trim_start_matches('_');
            let rest = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .unwrap_or(rest);
            if rest.is_empty() {
                Some(default)
            } else {
                rest.parse().ok()
            }
        };
        let kind = match s {
            "terminal" | "point" => Some(SiteKind::Terminal),
            "delta_one" => Some(SiteKind::Delta(1)),
            _ => {
                if let Some(rest) = s.strip_prefix("bipointed_op") {
                    num(rest, DEFAULT_CUBE_CAP).map(SiteKind::BipointedOp)
                } else if let Some(rest) = s.strip_prefix("cube") {
                    num(rest, DEFAULT_CUBE_CAP).map(SiteKind::Cube)
                } else if let Some(rest) = s.strip_prefix("delta_truncated") {
                    num(rest, usize::MAX).map(SiteKind::Delta)
                } else if let Some(rest) = s.strip_prefix("delta") {
                    num(rest, usize::MAX).map(SiteKind::Delta)
                } else {
                    None
                }
            }
        };
        match kind {
            Some(SiteKind::Delta(usize::MAX)) | None => Err(Error::UnknownSite(s.to_string())),
            Some(k) => Ok(k),
        }
    }
}

/// A standard site together with the concrete description of its morphisms.
#[derive(Debug, Clone)]
pub enum StandardSite {
    Terminal(Arc<FinCat>),
    Delta(DeltaSite),
    Cube(CubeSite),
    BipointedOp(Arc<FinCat>),
}

impl StandardSite {
    pub fn cat(&self) -> &Arc<FinCat> {
        match self {
            StandardSite::Terminal(c) | StandardSite::BipointedOp(c) => c,
            StandardSite::Delta(d) => &d.cat,
            StandardSite::Cube(c) => &c.cat,
        }
    }
}

pub fn build_standard_site(kind: SiteKind) -> Result<StandardSite> {
    Ok(match kind {
        SiteKind::Terminal => StandardSite::Terminal(Arc::new(terminal_site())),
        SiteKind::Delta(n) => StandardSite::Delta(DeltaSite::new(n)?),
        SiteKind::Cube(k) => StandardSite::Cube(CubeSite::new(k)?),
        SiteKind::BipointedOp(k) => StandardSite::BipointedOp(Arc::new(bipointed_op(k)?)),
    })
}

pub fn terminal_site() -> FinCat {
    FinCat::from_parts(
        "terminal",
        vec!["*".into()],
        vec![Arrow {
            name: "id".into(),
            dom: 0,
            cod: 0,
        }],
        vec![0],
        |_, _| 0,
    )
    .expect("terminal category")
}

/// Truncated simplex category; a morphism `[j] → [k]` is stored as its value list.
#[derive(Debug, Clone)]
pub struct DeltaSite {
    pub cat: Arc<FinCat>,
    pub n: usize,
    values: Vec<Vec<usize>>,
    index: HashMap<(usize, usize, Vec<usize>), MorphismId>,
}

/// Monotone maps `[j] → [k]`, lexicographic.
pub fn monotone_maps(j: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(pos: usize, j: usize, k: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos > j {
            out.push(cur.clone());
            return;
        }
        for v in lo..=k {
            cur.push(v);
            go(pos + 1, j, k, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, j, k, 0, &mut Vec::new(), &mut out);
    out
}

pub fn delta_morphism_name(j: usize, k: usize, values: &[usize]) -> String {
    let vals: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{j}]->[{k}]:{}", vals.join(","))
}

impl DeltaSite {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_DELTA {
            return Err(Error::CapExceeded {
                what: "simplex truncation",
                value: n,
                cap: MAX_DELTA,
            });
        }
        let objects: Vec<String> = (0..=n).map(|k| format!("[{k}]")).collect();
        let mut arrows = Vec::new();
        let mut values = Vec::new();
        let mut index = HashMap::new();
        for j in 0..=n {
            for k in 0..=n {
                for v in monotone_maps(j, k) {
                    index.insert((j, k, v.clone()), arrows.len());
                    arrows.push(Arrow {
                        name: delta_morphism_name(j, k, &v),
                        dom: j,
                        cod: k,
                    });
                    values.push(v);
                }
            }
        }
        let identities = (0..=n)
            .map(|k| index[&(k, k, (0..=k).collect::<Vec<_>>())])
            .collect();
        let cat = FinCat::from_parts(format!("delta{n}"), objects, arrows.clone(), identities, |g, f| {
            let v: Vec<usize> = values[f].iter().map(|&i| values[g][i]).collect();
            index[&(arrows[f].dom, arrows[g].cod, v)]
        })?;
        Ok(Self {
            cat: Arc::new(cat),
            n,
            values,
            index,
        })
    }

    pub fn values(&self, m: MorphismId) -> &[usize] {
        &self.values[m]
    }

    pub fn morphism(&self, j: usize, k: usize, values: &[usize]) -> MorphismId {
        self.index[&(j, k, values.to_vec())]
    }

    /// Coface `δ^i: [k-1] → [k]`, skipping `i`.
    pub fn face(&self, k: usize, i: usize) -> MorphismId {
        let v: Vec<usize> = (0..=k).filter(|&x| x != i).collect();
        self.morphism(k - 1, k, &v)
    }

    /// Codegeneracy `σ^j: [k+1] → [k]`, hitting `j` twice.
    pub fn degeneracy(&self, k: usize, j: usize) -> MorphismId {
        let v: Vec<usize> = (0..=k + 1).map(|x| if x <= j { x } else { x - 1 }).collect();
        self.morphism(k + 1, k, &v)
    }

    /// Vertex `i` of `[k]`, as a map `[0] → [k]`.
    pub fn vertex(&self, k: usize, i: usize) -> MorphismId {
        self.morphism(0, k, &[i])
    }

    pub fn object(&self, k: usize) -> ObjectId {
        k
    }
}

/// One coordinate of a cube morphism `[0,1]^s → [0,1]^t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CubeComponent {
    Proj(usize),
    Zero,
    One,
}

impl fmt::Display for CubeComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CubeComponent::Proj(i) => write!(f, "p{i}"),
            CubeComponent::Zero => write!(f, "0"),
            CubeComponent::One => write!(f, "1"),
        }
    }
}

/// Maps between cubes built from projections and the constants 0 and 1.
#[derive(Debug, Clone)]
pub struct CubeSite {
    pub cat: Arc<FinCat>,
    pub cap: usize,
    components: Vec<Vec<CubeComponent>>,
}

fn component_tuples(s: usize, t: usize) -> Vec<Vec<CubeComponent>> {
    let choices: Vec<CubeComponent> = (0..s)
        .map(CubeComponent::Proj)
        .chain([CubeComponent::Zero, CubeComponent::One])
        .collect();
    let mut out = vec![Vec::new()];
    for _ in 0..t {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&c| {
                    let mut p = prefix.clone();
                    p.push(c);
                    p
                })
            })
            .collect();
    }
    out
}

pub fn cube_object_name(k: usize) -> String {
    format!("[0,1]^{k}")
}

impl CubeSite {
    pub fn new(cap: usize) -> Result<Self> {
        if cap > MAX_CUBE_CAP {
            return Err(Error::CapExceeded {
                what: "cube dimension",
                value: cap,
                cap: MAX_CUBE_CAP,
            });
        }
        let objects: Vec<String> = (0..=cap).map(cube_object_name).collect();
        let mut arrows = Vec::new();
        let mut components = Vec::new();
        let mut index = HashMap::new();
        for s in 0..=cap {
            for t in 0..=cap {
                for comps in component_tuples(s, t) {
                    let names: Vec<String> = comps.iter().map(|c| c.to_string()).collect();
                    index.insert((s, t, comps.clone()), arrows.len());
                    arrows.push(Arrow {
                        name: format!("{}->{}:({})", cube_object_name(s), cube_object_name(t), names.join(",")),
                        dom: s,
                        cod: t,
                    });
                    components.push(comps);
                }
            }
        }
        let identities = (0..=cap)
            .map(|k| index[&(k, k, (0..k).map(CubeComponent::Proj).collect::<Vec<_>>())])
            .collect();
        let cat = FinCat::from_parts("", objects, arrows.clone(), identities, |g, f| {
            let comps: Vec<CubeComponent> = components[g]
                .iter()
                .map(|c| match *c {
                    CubeComponent::Proj(t) => components[f][t],
                    konst => konst,
                })
                .collect();
            index[&(arrows[f].dom, arrows[g].cod, comps)]
        })?
        .with_name(format!("cube{cap}"));
        Ok(Self {
            cat: Arc::new(cat),
            cap,
            components,
        })
    }

    pub fn components(&self, m: MorphismId) -> &[CubeComponent] {
        &self.components[m]
    }
}

/// Opposite of strictly bipointed finite sets `{⊥, ⊤} ⊔ S`, `|S| ≤ cap`.
///
/// A morphism `S → T` here is a bipointed map `T₊ → S₊`, encoded per
/// element of `T` as `⊥`, `⊤` or an element of `S`.
pub fn bipointed_op(cap: usize) -> Result<FinCat> {
    if cap > MAX_CUBE_CAP {
        return Err(Error::CapExceeded {
            what: "bipointed set size",
            value: cap,
            cap: MAX_CUBE_CAP,
        });
    }
    const BOT: usize = usize::MAX - 1;
    const TOP: usize = usize::MAX;
    let objects: Vec<String> = (0..=cap).map(|k| format!("S{k}")).collect();
    let mut arrows = Vec::new();
    let mut maps: Vec<Vec<usize>> = Vec::new();
    let mut index = HashMap::new();
    for s in 0..=cap {
        for t in 0..=cap {
            let targets: Vec<usize> = (0..s).chain([BOT, TOP]).collect();
            let mut all = vec![Vec::new()];
            for _ in 0..t {
                all = all
                    .into_iter()
                    .flat_map(|p: Vec<usize>| {
                        targets.iter().map(move |&v| {
                            let mut q = p.clone();
                            q.push(v);
                            q
                        })
                    })
                    .collect();
            }
            for m in all {
                let label: Vec<String> = m
                    .iter()
                    .map(|&v| match v {
                        BOT => "bot".to_string(),
                        TOP => "top".to_string(),
                        e => format!("e{e}"),
                    })
                    .collect();
                index.insert((s, t, m.clone()), arrows.len());
                arrows.push(Arrow {
                    name: format!("S{s}->S{t}:[{}]", label.join(",")),
                    dom: s,
                    cod: t,
                });
                maps.push(m);
            }
        }
    }
    let identities = (0..=cap)
        .map(|k| index[&(k, k, (0..k).collect::<Vec<_>>())])
        .collect();
    let cat = FinCat::from_parts(format!("bipointed_op{cap}"), objects, arrows.clone(), identities, |g, f| {
        // g ∘ f in the opposite category is the set map f ∘ g.
        let m: Vec<usize> = maps[g]
            .iter()
            .map(|&v| if v == BOT || v == TOP { v } else { maps[f][v] })
            .collect();
        index[&(arrows[f].dom, arrows[g].cod, m)]
    })?;
    Ok(cat)
}

/// The canonical comparison `cube(cap) → bipointed_op(cap)`: projection `πᵢ`
/// goes to element `i`, the constants to the base points. Returns the
/// morphism bijection after checking it is a functor.
pub fn cube_bipointed_isomorphism(cube: &CubeSite, bp: &FinCat) -> Option<Vec<MorphismId>> {
    let c = &cube.cat;
    if c.object_count() != bp.object_count() || c.morphism_count() != bp.morphism_count() {
        return None;
    }
    let mut map = Vec::with_capacity(c.morphism_count());
    for m in c.morphisms() {
        let label: Vec<String> = cube
            .components(m)
            .iter()
            .map(|x| match x {
                CubeComponent::Proj(i) => format!("e{i}"),
                CubeComponent::Zero => "bot".into(),
                CubeComponent::One => "top".into(),
            })
            .collect();
        let name = format!("S{}->S{}:[{}]", c.dom(m), c.cod(m), label.join(","));
        map.push(bp.morphism_index(&name)?);
    }
    let mut seen = vec![false; map.len()];
    for &t in &map {
        if std::mem::replace(&mut seen[t], true) {
            return None;
        }
    }
    for g in c.morphisms() {
        for f in c.morphisms() {
            if let Some(gf) = c.compose(g, f) {
                if bp.compose(map[g], map[f]) != Some(map[gf]) {
                    return None;
                }
            }
        }
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::classify_site;

    #[test]
    fn delta_hom_counts() {
        let d = DeltaSite::new(2).unwrap();
        assert_eq!(d.cat.object_count(), 3);
        assert_eq!(d.cat.hom(1, 2).len(), 6);
        // id₀, id₁, δ⁰, δ¹, σ and the two constant endomaps of [1].
        let d1 = DeltaSite::new(1).unwrap();
        assert_eq!(d1.cat.morphism_count(), 7);
        assert_eq!(d.cat.hom(2, 1).len(), 4);
    }

    #[test]
    fn faces_and_degeneracies() {
        let d = DeltaSite::new(2).unwrap();
        assert_eq!(d.values(d.face(2, 1)), &[0, 2]);
        assert_eq!(d.values(d.degeneracy(1, 0)), &[0, 0, 1]);
        // σ^0 ∘ δ^0 = id
        let c = d.cat.comp(d.degeneracy(1, 0), d.face(2, 0));
        assert_eq!(c, d.cat.identity(1));
    }

    #[test]
    fn cube_hom_counts() {
        let c = CubeSite::new(2).unwrap();
        assert_eq!(c.cat.hom(2, 1).len(), 4);
        let c3 = CubeSite::new(3).unwrap();
        assert_eq!(c3.cat.morphism_count(), 296);
    }

    #[test]
    fn cube_and_bipointed_agree() {
        for cap in 0..=3 {
            let c = CubeSite::new(cap).unwrap();
            let b = bipointed_op(cap).unwrap();
            assert!(cube_bipointed_isomorphism(&c, &b).is_some(), "cap {cap}");
        }
    }

    #[test]
    fn standard_sites_are_pre_cohesive() {
        for kind in [
            SiteKind::Terminal,
            SiteKind::Delta(1),
            SiteKind::Delta(3),
            SiteKind::Cube(2),
            SiteKind::BipointedOp(2),
        ] {
            let s = build_standard_site(kind).unwrap();
            let r = classify_site(s.cat());
            assert!(r.pre_cohesive && r.idempotents_split, "{kind}");
        }
    }

    #[test]
    fn names_round_trip() {
        for k in ["terminal", "delta1", "delta3", "cube2", "bipointed_op1"] {
            assert_eq!(k.parse::<SiteKind>().unwrap().to_string(), k);
        }
        assert_eq!("delta_truncated(2)".parse::<SiteKind>().unwrap(), SiteKind::Delta(2));
        assert_eq!("cube".parse::<SiteKind>().unwrap(), SiteKind::Cube(3));
        assert!("delta".parse::<SiteKind>().is_err());
        assert!(build_standard_site(SiteKind::Cube(9)).is_err());
    }
}
