//! Connectors, distances between points, navigability, horn fillers and
//! the Hurewicz category `H𝓔` with hom-sets `p_!(Yˣ)`.

use std::collections::VecDeque;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::cohesion::{CohesionContext, PiecesData};
use crate::error::{Error, Result};
use crate::fincat::standard::DeltaSite;
use crate::fincat::ObjectId;
use crate::presheaf::simplicial::horn;
use crate::presheaf::{
    exponential, for_each_nat_trans, internal_composition, name_of, nat_transformations,
    Exponential, NatTrans, Presheaf,
};

/// A bipointed object `0, 1: 1 → I`; `zero` and `one` are elements of `I(t)`.
#[derive(Debug, Clone)]
pub struct Connector {
    pub interval: Presheaf,
    pub zero: usize,
    pub one: usize,
}

impl Connector {
    pub fn new(ctx: &CohesionContext, interval: Presheaf, zero: usize, one: usize) -> Result<Self> {
        let n = ctx.points(&interval);
        if zero >= n || one >= n {
            return Err(Error::MalformedPoint(format!(
                "connector endpoints {zero}, {one} but the interval has {n} points"
            )));
        }
        Ok(Self {
            interval,
            zero,
            one,
        })
    }

    /// `y c` with its first two points, for `c` the first object with two points.
    pub fn standard(ctx: &CohesionContext) -> Result<Self> {
        let site = ctx.site();
        let name = ctx.site_report().two_point_object.clone().ok_or_else(|| {
            Error::Invalid(format!("site `{}` has no object with two points", site.name()))
        })?;
        let c = site.object_index(&name).expect("reported object exists");
        Self::representable(ctx, c)
    }

    pub fn representable(ctx: &CohesionContext, c: ObjectId) -> Result<Self> {
        Self::new(ctx, Presheaf::yoneda(ctx.site(), c), 0, 1)
    }
}

/// `p_*(X^I)` presented as `Nat(I, X)`, with both endpoint evaluations.
#[derive(Debug, Clone)]
pub struct Paths {
    pub paths: Vec<NatTrans>,
    pub ev0: Vec<usize>,
    pub ev1: Vec<usize>,
}

impl Paths {
    /// The relation `⇝`, sorted and deduplicated.
    pub fn relation(&self) -> Vec<(usize, usize)> {
        let mut r: Vec<(usize, usize)> = self.ev0.iter().copied().zip(self.ev1.iter().copied()).collect();
        r.sort_unstable();
        r.dedup();
        r
    }
}

pub fn paths(ctx: &CohesionContext, conn: &Connector, x: &Presheaf) -> Result<Paths> {
    let paths = nat_transformations(&conn.interval, x, &ctx.budget())?;
    let t = ctx.terminal();
    Ok(Paths {
        ev0: paths.iter().map(|p| p.at(t, conn.zero)).collect(),
        ev1: paths.iter().map(|p| p.at(t, conn.one)).collect(),
        paths,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConnectorCheck {
    pub fork_commutes: bool,
    pub theta_surjective: bool,
    /// The equivalence generated by `⇝` is exactly the kernel of θ.
    pub kernel_matches: bool,
    pub coequalizer: bool,
}

/// Whether `p_*(X^I) ⇉ p_*X → p_!X` is a coequalizer of sets.
pub fn verify_connector(ctx: &CohesionContext, conn: &Connector, x: &Presheaf) -> Result<ConnectorCheck> {
    let p = paths(ctx, conn, x)?;
    let theta = ctx.theta(x);
    let fork_commutes = p.ev0.iter().zip(&p.ev1).all(|(&a, &b)| theta.map[a] == theta.map[b]);
    let mut uf = crate::presheaf::UnionFind::new(theta.map.len());
    for (a, b) in p.relation() {
        uf.union(a, b);
    }
    let (generated, _) = uf.labels();
    let n = theta.map.len();
    let kernel_matches = (0..n).all(|a| {
        (0..n).all(|b| (generated[a] == generated[b]) == (theta.map[a] == theta.map[b]))
    });
    let theta_surjective = theta.is_surjective();
    Ok(ConnectorCheck {
        fork_commutes,
        theta_surjective,
        kernel_matches,
        coequalizer: fork_commutes && theta_surjective && kernel_matches,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DistanceReport {
    pub points: usize,
    pub squiggle: Vec<(usize, usize)>,
    /// `distance[x][y]`, `None` for ∞.
    pub distance: Vec<Vec<Option<usize>>>,
    pub bound: usize,
}

/// Distances along the reflexive–symmetric closure of `⇝`.
pub fn distance_report(ctx: &CohesionContext, conn: &Connector, x: &Presheaf) -> Result<DistanceReport> {
    let p = paths(ctx, conn, x)?;
    let squiggle = p.relation();
    let n = ctx.points(x);
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &squiggle {
        if a != b {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let distance: Vec<Vec<Option<usize>>> = (0..n)
        .map(|s| {
            let mut d = vec![None; n];
            d[s] = Some(0);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let dv = d[v].unwrap();
                for &w in &adj[v] {
                    if d[w].is_none() {
                        d[w] = Some(dv + 1);
                        queue.push_back(w);
                    }
                }
            }
            d
        })
        .collect();
    let bound = distance.iter().flatten().flatten().copied().max().unwrap_or(0);
    Ok(DistanceReport {
        points: n,
        squiggle,
        distance,
        bound,
    })
}

/// Directed navigability: every pair in the kernel of θ is joined by a single path.
pub fn is_navigable(ctx: &CohesionContext, conn: &Connector, x: &Presheaf) -> Result<bool> {
    let p = paths(ctx, conn, x)?;
    let theta = ctx.theta(x);
    let n = theta.map.len();
    let mut hit = vec![false; n * n];
    for (&a, &b) in p.ev0.iter().zip(&p.ev1) {
        hit[a * n + b] = true;
    }
    Ok((0..n).all(|a| (0..n).all(|b| theta.map[a] != theta.map[b] || hit[a * n + b])))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailingHorn {
    pub dim: usize,
    pub missing_face: usize,
    /// `faces[i]` is the image of the face `δ^i`, absent for `i = missing_face`.
    pub faces: Vec<Option<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KanReport {
    pub kan: bool,
    pub max_dim: usize,
    /// Largest `m ≤ max_dim` such that every horn of dimension `≤ m` fills.
    pub kan_up_to: usize,
    pub failing_horn: Option<FailingHorn>,
}

/// Horn-filler test for every `Λᵏ[m] → X`, `1 ≤ m ≤ max_dim`.
pub fn is_kan(site: &DeltaSite, x: &Presheaf, max_dim: usize, budget: &crate::Budget) -> Result<KanReport> {
    if max_dim > site.n {
        return Err(Error::CapExceeded {
            what: "max_dim",
            value: max_dim,
            cap: site.n,
        });
    }
    if !x.site().same_structure(&site.cat) {
        return Err(Error::SiteMismatch);
    }
    let cat = &site.cat;
    for m in 1..=max_dim {
        for k in 0..=m {
            let (lambda, incl) = horn(site, m, k);
            // horn element (j, e) is the map incl_j(e) ∈ hom([j], [m])
            let mut failure = None;
            for_each_nat_trans(&lambda, x, None, budget, |h| {
                let fills = (0..x.size(m)).any(|z| {
                    cat.objects().all(|j| {
                        (0..lambda.size(j)).all(|e| {
                            let f = cat.hom(j, m)[incl.at(j, e)];
                            x.act(f, z) == h[j][e] as usize
                        })
                    })
                });
                if fills {
                    ControlFlow::Continue(())
                } else {
                    failure = Some(h.to_vec());
                    ControlFlow::Break(())
                }
            })?;
            if let Some(h) = failure {
                let faces = (0..=m)
                    .map(|i| {
                        (i != k).then(|| {
                            let f = site.face(m, i);
                            let pos = cat.hom_position(f);
                            let e = (0..lambda.size(m - 1))
                                .find(|&e| incl.at(m - 1, e) == pos)
                                .expect("faces other than k lie in the horn");
                            x.element_name(m - 1, h[m - 1][e] as usize)
                        })
                    })
                    .collect();
                return Ok(KanReport {
                    kan: false,
                    max_dim,
                    kan_up_to: m - 1,
                    failing_horn: Some(FailingHorn {
                        dim: m,
                        missing_face: k,
                        faces,
                    }),
                });
            }
        }
    }
    Ok(KanReport {
        kan: true,
        max_dim,
        kan_up_to: max_dim,
        failing_horn: None,
    })
}

/// `(H𝓔)(X, Y) = p_!(Yˣ)`.
#[derive(Debug, Clone)]
pub struct HurewiczHom {
    pub exp: Exponential,
    pub pieces: PiecesData,
    terminal: ObjectId,
}

impl HurewiczHom {
    pub fn size(&self) -> usize {
        self.pieces.count
    }

    /// The θ-image of `f: X → Y` viewed as a point of `Yˣ`.
    pub fn class_of(&self, f: &NatTrans) -> Result<usize> {
        let p = name_of(&self.exp, self.terminal, f)
            .ok_or_else(|| Error::NatTrans("not a morphism X → Y".into()))?;
        Ok(self.pieces.of(self.terminal, p))
    }
}

pub fn hurewicz_hom(ctx: &CohesionContext, x: &Presheaf, y: &Presheaf) -> Result<HurewiczHom> {
    let exp = exponential(x, y, &ctx.budget())?;
    let pieces = ctx.pieces(&exp.obj);
    Ok(HurewiczHom {
        exp,
        pieces,
        terminal: ctx.terminal(),
    })
}

pub fn hurewicz_identity(ctx: &CohesionContext, xx: &HurewiczHom, x: &Presheaf) -> Result<usize> {
    let _ = ctx;
    xx.class_of(&NatTrans::identity(x))
}

/// `H(Y, Z) × H(X, Y) → H(X, Z)`; `table[P][Q]` is the composite of classes `P` and `Q`.
pub fn hurewicz_compose(zy: &HurewiczHom, yx: &HurewiczHom, zx: &HurewiczHom) -> Result<Vec<Vec<usize>>> {
    let (pair, comp) = internal_composition(&zy.exp, &yx.exp, &zx.exp)?;
    const UNSET: usize = usize::MAX;
    let mut table = vec![vec![UNSET; yx.size()]; zy.size()];
    let site = pair.obj.site();
    for c in site.objects() {
        for code in 0..pair.obj.size(c) {
            let st = pair.decode(c, code);
            let (p, q) = (zy.pieces.of(c, st[0]), yx.pieces.of(c, st[1]));
            let v = zx.pieces.of(c, comp.at(c, code));
            match table[p][q] {
                UNSET => table[p][q] = v,
                w if w != v => return Err(Error::Invalid("composition is not defined on classes".into())),
                _ => {}
            }
        }
    }
    if table.iter().flatten().any(|&v| v == UNSET) {
        return Err(Error::Invalid("pieces of a product miss a pair".into()));
    }
    Ok(table)
}

pub fn are_homotopic(hom: &HurewiczHom, f: &NatTrans, g: &NatTrans) -> Result<bool> {
    Ok(hom.class_of(f)? == hom.class_of(g)?)
}

/// Whether `p_!(X^{p^*A}) → (p_!X)^A` is a bijection.
pub fn quintessential_check(ctx: &CohesionContext, x: &Presheaf, a: usize) -> Result<bool> {
    Ok(ctx.quintessential_map(x, a)?.1.is_bijective())
}

/// Summary used by the command line.
#[derive(Debug, Clone, Serialize)]
pub struct HomotopyReport {
    pub weakly_kan_bound: usize,
    pub navigable: bool,
    pub connector_is_coequalizer: bool,
    pub kan_up_to: Option<usize>,
    pub hurewicz_hom_size: usize,
}
