//! The string `p_! ⊣ p^* ⊣ p_* ⊣ p^!` for presheaves on a pre-cohesive site,
//! with the comparison maps θ, σ, τ, α, β and κ.

use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{classify_site, FinCat, MorphismId, ObjectId, SiteReport};
use crate::presheaf::{
    exponential, product, subobject_classifier, Exponential, NatTrans, Omega, Presheaf, Product,
    UnionFind,
};

/// Connected components of the category of elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecesData {
    pub count: usize,
    /// `labels[c][x]` is the piece of `x ∈ X(c)`; pieces are numbered by least element.
    pub labels: Vec<Vec<usize>>,
    /// Least element `(object, element)` of each piece.
    pub representatives: Vec<(ObjectId, usize)>,
}

impl PiecesData {
    pub fn of(&self, c: ObjectId, x: usize) -> usize {
        self.labels[c][x]
    }
}

/// A function between finite sets, with its bijectivity recorded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteMap {
    pub map: Vec<usize>,
    pub codomain: usize,
}

impl FiniteMap {
    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain];
        self.map.iter().for_each(|&y| hit[y] = true);
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijective(&self) -> bool {
        self.map.len() == self.codomain && self.is_injective()
    }

    pub fn after(&self, f: &FiniteMap) -> FiniteMap {
        FiniteMap {
            map: f.map.iter().map(|&x| self.map[x]).collect(),
            codomain: self.codomain,
        }
    }
}

/// `κ: p_!(Yˣ) → (p_!Y)^(p_!X)`. A function `p_!X → p_!Y` is encoded by its
/// value list, read as a base-`|p_!Y|` numeral with the first piece most significant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Kappa {
    /// `table[P][Q]`: value at the piece `Q` of `X` of the function assigned to the piece `P` of `Yˣ`.
    pub table: Vec<Vec<usize>>,
    pub source_pieces: usize,
    pub target_pieces: usize,
    pub iso: bool,
}

impl Kappa {
    pub fn as_map(&self) -> FiniteMap {
        let codomain = self.target_pieces.pow(self.source_pieces as u32);
        FiniteMap {
            map: self
                .table
                .iter()
                .map(|row| row.iter().fold(0, |acc, &v| acc * self.target_pieces + v))
                .collect(),
            codomain,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CohesionReport {
    pub pieces: usize,
    pub points: usize,
    pub theta_surjective: bool,
    pub kappa_iso: Option<bool>,
    pub witnesses: Witnesses,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witnesses {
    /// For each piece, a point lying in it (when θ is surjective there is one for every piece).
    pub point_in_piece: Vec<Option<usize>>,
    /// Least element of each piece, as `(object, element)` names.
    pub piece_representatives: Vec<(String, String)>,
}

/// Pieces, points and their comparisons for presheaves on one pre-cohesive site.
#[derive(Debug)]
pub struct CohesionContext {
    site: Arc<FinCat>,
    terminal: ObjectId,
    /// `bang[c]`: the unique morphism `c → t`.
    bang: Vec<MorphismId>,
    report: SiteReport,
    budget_limit: u64,
    omega: OnceLock<Result<Omega>>,
}

impl CohesionContext {
    pub fn new(site: Arc<FinCat>) -> Result<Self> {
        Self::with_budget(site, Budget::from_env().limit())
    }

    pub fn with_budget(site: Arc<FinCat>, budget_limit: u64) -> Result<Self> {
        let report = classify_site(&site);
        let Some(t) = site.terminal_object() else {
            return Err(Error::NotPreCohesive {
                site: site.name().into(),
                reason: "no terminal object".into(),
            });
        };
        if !report.pre_cohesive {
            let unpointed = report
                .points
                .iter()
                .find(|p| p.point.is_none())
                .map(|p| p.object.clone())
                .unwrap_or_default();
            return Err(Error::NotPreCohesive {
                site: site.name().into(),
                reason: format!("object `{unpointed}` has no point"),
            });
        }
        let bang = site.objects().map(|c| site.hom(c, t)[0]).collect();
        Ok(Self {
            site,
            terminal: t,
            bang,
            report,
            budget_limit,
            omega: OnceLock::new(),
        })
    }

    pub fn site(&self) -> &Arc<FinCat> {
        &self.site
    }

    pub fn terminal(&self) -> ObjectId {
        self.terminal
    }

    pub fn site_report(&self) -> &SiteReport {
        &self.report
    }

    /// A fresh budget for one top-level computation.
    pub fn budget(&self) -> Budget {
        Budget::new(self.budget_limit)
    }

    pub fn budget_limit(&self) -> u64 {
        self.budget_limit
    }

    fn check_site(&self, x: &Presheaf) -> Result<()> {
        if Arc::ptr_eq(x.site(), &self.site) || x.site().same_structure(&self.site) {
            Ok(())
        } else {
            Err(Error::SiteMismatch)
        }
    }

    /// `p_!X`: union–find over `x ~ x·u`.
    pub fn pieces(&self, x: &Presheaf) -> PiecesData {
        let site = x.site();
        let offsets = x.offsets();
        let mut uf = UnionFind::new(x.total_size());
        for u in site.morphisms() {
            if site.is_identity(u) {
                continue;
            }
            let (d, c) = (site.dom(u), site.cod(u));
            for e in 0..x.size(c) {
                uf.union(offsets[c] + e, offsets[d] + x.act(u, e));
            }
        }
        let (flat, count) = uf.labels();
        let mut representatives = vec![(usize::MAX, 0); count];
        let mut labels = Vec::with_capacity(site.object_count());
        for c in site.objects() {
            let row: Vec<usize> = (0..x.size(c)).map(|e| flat[offsets[c] + e]).collect();
            for (e, &p) in row.iter().enumerate() {
                if representatives[p].0 == usize::MAX {
                    representatives[p] = (c, e);
                }
            }
            labels.push(row);
        }
        PiecesData {
            count,
            labels,
            representatives,
        }
    }

    /// `p_*X ≅ X(t)`: a point is an element of the terminal object's section.
    pub fn points(&self, x: &Presheaf) -> usize {
        x.size(self.terminal)
    }

    /// The point `1 → X` determined by `x ∈ X(t)`: at `c` it is `x·!_c`.
    pub fn point_map(&self, x: &Presheaf, p: usize) -> NatTrans {
        NatTrans::new(
            self.site
                .objects()
                .map(|c| vec![x.act(self.bang[c], p) as u32])
                .collect(),
        )
    }

    /// The element of `X(t)` named by a map `1 → X`.
    pub fn point_of_map(&self, f: &NatTrans) -> usize {
        f.at(self.terminal, 0)
    }

    /// `p^*A`.
    pub fn discrete(&self, a: usize) -> Presheaf {
        Presheaf::constant(&self.site, a)
    }

    /// `p^!A(c) = A^(points of y c)`, a function `q ↦ f(q)` on `hom(t, c)` read
    /// in mixed radix with the first point most significant.
    pub fn codiscrete(&self, a: usize) -> Presheaf {
        let site = &self.site;
        let t = self.terminal;
        let sizes: Vec<usize> = site
            .objects()
            .map(|c| a.pow(site.hom(t, c).len() as u32))
            .collect();
        let decode = |c: ObjectId, mut code: usize| {
            let n = site.hom(t, c).len();
            let mut f = vec![0; n];
            for i in (0..n).rev() {
                f[i] = code % a;
                code /= a;
            }
            f
        };
        Presheaf::from_fn(site.clone(), sizes, |u, code| {
            let (d, c) = (site.dom(u), site.cod(u));
            let f = decode(c, code);
            // (f·u)(q) = f(u∘q)
            site.hom(t, d).iter().fold(0, |acc, &q| {
                acc * a + f[site.hom_position(site.comp(u, q))]
            })
        })
    }

    /// `θ_X: p_*X → p_!X`, each point to its piece.
    pub fn theta(&self, x: &Presheaf) -> FiniteMap {
        let pieces = self.pieces(x);
        FiniteMap {
            map: (0..self.points(x)).map(|p| pieces.of(self.terminal, p)).collect(),
            codomain: pieces.count,
        }
    }

    /// θ as the composite `α⁻¹_{p_!X} ∘ p_*σ_X`.
    pub fn theta_composite(&self, x: &Presheaf) -> FiniteMap {
        let pieces = self.pieces(x);
        let sigma = self.sigma(x, &pieces);
        let discrete = self.discrete(pieces.count);
        let alpha = self.alpha(pieces.count);
        let alpha_inv = invert(&alpha);
        FiniteMap {
            map: (0..self.points(x))
                .map(|p| {
                    let point = sigma.after(&self.point_map(x, p));
                    alpha_inv[self.point_of_map(&point)]
                })
                .collect(),
            codomain: discrete.size(self.terminal),
        }
    }

    /// `σ_X: X → p^*(p_!X)`.
    pub fn sigma(&self, x: &Presheaf, pieces: &PiecesData) -> NatTrans {
        NatTrans::from_fn(x, |c, e| pieces.of(c, e))
    }

    /// `τ_A: p_!(p^*A) → A`, reading off the element at any object of a piece.
    pub fn tau(&self, a: usize) -> FiniteMap {
        let d = self.discrete(a);
        let pieces = self.pieces(&d);
        FiniteMap {
            map: pieces.representatives.iter().map(|&(_, e)| e).collect(),
            codomain: a,
        }
    }

    /// `α_A: A → p_*(p^*A)`, `a ↦` the constant point at `a`.
    pub fn alpha(&self, a: usize) -> FiniteMap {
        FiniteMap {
            map: (0..a).collect(),
            codomain: self.discrete(a).size(self.terminal),
        }
    }

    /// `β_X: p^*(p_*X) → X`, at `c` the point `p ↦ p·!_c`.
    pub fn beta(&self, x: &Presheaf) -> NatTrans {
        let d = self.discrete(self.points(x));
        NatTrans::from_fn(&d, |c, p| x.act(self.bang[c], p))
    }

    /// The canonical `p_!(X × Y) → p_!X × p_!Y`, encoded as `i·|p_!Y| + j`.
    pub fn product_comparison(&self, x: &Presheaf, y: &Presheaf) -> Result<FiniteMap> {
        let prod = product(x, y)?;
        let (px, py, pxy) = (self.pieces(x), self.pieces(y), self.pieces(&prod.obj));
        let map = pxy
            .representatives
            .iter()
            .map(|&(c, e)| {
                let xy = prod.decode(c, e);
                px.of(c, xy[0]) * py.count + py.of(c, xy[1])
            })
            .collect();
        Ok(FiniteMap {
            map,
            codomain: px.count * py.count,
        })
    }

    /// `κ_{X,Y}` computed through `p_!(Yˣ × X) → p_!Y`, checking it is well defined.
    pub fn kappa(&self, x: &Presheaf, y: &Presheaf) -> Result<Kappa> {
        let exp = exponential(x, y, &self.budget())?;
        self.kappa_of(&exp, x, y)
    }

    pub fn kappa_of(&self, exp: &Exponential, x: &Presheaf, y: &Presheaf) -> Result<Kappa> {
        self.check_site(x)?;
        let (pe, px, py) = (self.pieces(&exp.obj), self.pieces(x), self.pieces(y));
        kappa_from_evaluation(&exp.ev_domain, &exp.ev, &pe, &px, &py)
    }

    /// `p_!(X^{p^*A}) → (p_!X)^A`: κ followed by precomposition with `τ⁻¹`.
    pub fn quintessential_map(&self, x: &Presheaf, a: usize) -> Result<(Kappa, FiniteMap)> {
        let disc = self.discrete(a);
        let kappa = self.kappa(&disc, x)?;
        let disc_pieces = self.pieces(&disc);
        // τ⁻¹(i) is the piece containing the constant i
        let tau_inv: Vec<usize> = (0..a).map(|i| disc_pieces.of(self.terminal, i)).collect();
        let n = kappa.target_pieces;
        let map = kappa
            .table
            .iter()
            .map(|row| tau_inv.iter().fold(0, |acc, &q| acc * n + row[q]))
            .collect();
        Ok((
            kappa,
            FiniteMap {
                map,
                codomain: n.pow(a as u32),
            },
        ))
    }

    /// `Ω`, computed once per context.
    pub fn omega(&self) -> Result<&Omega> {
        self.omega
            .get_or_init(|| subobject_classifier(&self.site, &self.budget()))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn report(&self, x: &Presheaf, kappa_with: Option<&Presheaf>) -> Result<CohesionReport> {
        self.check_site(x)?;
        let pieces = self.pieces(x);
        let theta = self.theta(x);
        let mut point_in_piece = vec![None; pieces.count];
        for (p, &q) in theta.map.iter().enumerate() {
            point_in_piece[q].get_or_insert(p);
        }
        let kappa_iso = match kappa_with {
            Some(y) => Some(self.kappa(x, y)?.iso),
            None => None,
        };
        Ok(CohesionReport {
            pieces: pieces.count,
            points: self.points(x),
            theta_surjective: theta.is_surjective(),
            kappa_iso,
            witnesses: Witnesses {
                point_in_piece,
                piece_representatives: pieces
                    .representatives
                    .iter()
                    .map(|&(c, e)| (self.site.object_name(c).into(), x.element_name(c, e)))
                    .collect(),
            },
        })
    }
}

fn invert(f: &FiniteMap) -> Vec<usize> {
    let mut inv = vec![usize::MAX; f.codomain];
    for (x, &y) in f.map.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

/// κ for `p_!` from an evaluation map `ev: E × X → Y` given on the product `ev_domain`.
pub fn kappa_from_evaluation(
    ev_domain: &Product,
    ev: &NatTrans,
    pe: &PiecesData,
    px: &PiecesData,
    py: &PiecesData,
) -> Result<Kappa> {
    const UNSET: usize = usize::MAX;
    let mut table = vec![vec![UNSET; px.count]; pe.count];
    let site = ev_domain.obj.site();
    for c in site.objects() {
        for code in 0..ev_domain.obj.size(c) {
            let tx = ev_domain.decode(c, code);
            let (p, q) = (pe.of(c, tx[0]), px.of(c, tx[1]));
            let v = py.of(c, ev.at(c, code));
            match table[p][q] {
                UNSET => table[p][q] = v,
                w if w != v => {
                    return Err(Error::Invalid(
                        "κ is not well defined on pieces".into(),
                    ))
                }
                _ => {}
            }
        }
    }
    if table.iter().flatten().any(|&v| v == UNSET) {
        return Err(Error::Invalid(
            "p_! of the product misses a pair of pieces".into(),
        ));
    }
    let mut k = Kappa {
        table,
        source_pieces: px.count,
        target_pieces: py.count,
        iso: false,
    };
    k.iso = k.as_map().is_bijective();
    Ok(k)
}
