use serde::Serialize;

use super::pieces::{lambda, rho, varrho};
use super::{DirectImage, InducedGM};
use crate::cohesion::{FiniteMap, Kappa, PiecesData};
use crate::error::{Error, Result};
use crate::homotopy::{distance_report, Connector};
use crate::presheaf::{exp_map_source, exp_map_target, exponential, Exponential, NatTrans, Presheaf};

/// `γ: g^*((g_*F)^E) → F^{g^*E}`, the unique map with `ev∘(γ × id) = ξ∘g^*ev`.
///
/// For `t ∈ ((g_*F)^E)(Fc)`, `γ(t)` sends `(h: c' → c, e)` to the value of the
/// family `t(Fh, e)` at `(c', id)`.
pub fn gamma(gm: &InducedGM, gf: &DirectImage, outer: &Exponential, inner: &Exponential) -> Result<NatTrans> {
    let (s, t) = (gm.source(), gm.target());
    let g_outer = gm.pullback(&outer.obj)?;
    let mut missing = false;
    let out = NatTrans::from_fn(&g_outer, |c, tt| {
        let fc = gm.functor.obj(c);
        let dom = &inner.domains[c];
        let section = NatTrans::from_fn(&dom.obj, |c1, code| {
            let hx = dom.decode(c1, code);
            let fh = gm.functor.mor(s.hom(c1, c)[hx[0]]);
            let fc1 = gm.functor.obj(c1);
            let fam = outer.apply(fc, tt, fc1, t.hom_position(fh), hx[1]);
            gf.sections[fc1][fam].at(c1, gm.id_pos[c1])
        });
        inner.lookup(c, &section).unwrap_or_else(|| {
            missing = true;
            0
        })
    });
    if missing {
        return Err(Error::Invalid("γ(t) is not a section of F^{g^*E}".into()));
    }
    Ok(out)
}

// ev∘(γ × id) = ξ∘g^*ev, element-wise.
fn gamma_equation(
    gm: &InducedGM,
    ge: &Presheaf,
    gf: &DirectImage,
    outer: &Exponential,
    inner: &Exponential,
    g: &NatTrans,
) -> bool {
    let (s, t) = (gm.source(), gm.target());
    s.objects().all(|c| {
        let fc = gm.functor.obj(c);
        let (id_c, id_fc) = (s.hom_position(s.identity(c)), t.hom_position(t.identity(fc)));
        (0..outer.obj.size(fc)).all(|tt| {
            (0..ge.size(c)).all(|e| {
                let lhs = inner.apply(c, g.at(c, tt), c, id_c, e);
                let fam = outer.apply(fc, tt, fc, id_fc, e);
                lhs == gf.sections[fc][fam].at(c, gm.id_pos[c])
            })
        })
    })
}

fn on_pieces(src: &PiecesData, tgt: &PiecesData, phi: &NatTrans) -> FiniteMap {
    FiniteMap {
        map: src
            .representatives
            .iter()
            .map(|&(c, x)| tgt.of(c, phi.at(c, x)))
            .collect(),
        codomain: tgt.count,
    }
}

/// The links of `H𝓔(E, g_*X) → H𝓕(g^*E, X)` at one pair.
#[derive(Debug, Clone)]
pub struct AdjunctionLink {
    pub e: Presheaf,
    pub x: Presheaf,
    pub ge: Presheaf,
    pub gx: DirectImage,
    /// `(g_*X)^E` over the codomain site.
    pub outer: Exponential,
    /// `X^{g^*E}` over the domain site.
    pub inner: Exponential,
    pub gamma: NatTrans,
    pub gamma_equation: bool,
    /// `g_*γ ∘ ν: (g_*X)^E → g_*(X^{g^*E})`.
    pub transpose: NatTrans,
    pub transpose_iso: bool,
    pub outer_pieces: PiecesData,
    pub inner_pieces: PiecesData,
    /// `p_!(g_*γ∘ν)`.
    pub pieces_link: FiniteMap,
    /// `λ` at `X^{g^*E}`.
    pub lambda: Option<FiniteMap>,
    /// The whole chain `p_!((g_*X)^E) → f_!(X^{g^*E})`.
    pub composite: Option<FiniteMap>,
    /// `f_!γ ∘ ρ_{(g_*X)^E}`, which the chain must equal.
    pub gamma_rho: Option<FiniteMap>,
}

impl AdjunctionLink {
    pub fn new(gm: &InducedGM, e: &Presheaf, x: &Presheaf) -> Result<Self> {
        let (p, f) = (gm.codomain(), gm.domain());
        let t = gm.target();
        let ge = gm.pullback(e)?;
        let gx = gm.direct(x)?;
        let outer = exponential(e, &gx.obj, &p.budget())?;
        let inner = exponential(&ge, x, &f.budget())?;
        let g = gamma(gm, &gx, &outer, &inner)?;
        let gamma_eq = gamma_equation(gm, &ge, &gx, &outer, &inner, &g);
        let g_inner = gm.direct(&inner.obj)?;
        let mut missing = false;
        let transpose = NatTrans::from_fn(&outer.obj, |d, tt| {
            let fam = NatTrans::from_fn(gm.probe(d), |c, h| {
                let h = t.hom(gm.functor.obj(c), d)[h];
                g.at(c, outer.obj.act(h, tt))
            });
            g_inner.lookup(d, &fam).unwrap_or_else(|| {
                missing = true;
                0
            })
        });
        if missing {
            return Err(Error::Invalid("g_*γ∘ν leaves g_*(X^{g^*E})".into()));
        }
        let transpose_iso = transpose.is_iso(&g_inner.obj);
        let outer_pieces = p.pieces(&outer.obj);
        let inner_pieces = f.pieces(&inner.obj);
        let l = lambda(gm, &inner.obj, &g_inner)?;
        let pieces_link = on_pieces(&outer_pieces, &l.pgx, &transpose);
        let composite = l.lambda.as_ref().map(|lam| lam.after(&pieces_link));
        let g_outer = gm.pullback(&outer.obj)?;
        let pg_outer = f.pieces(&g_outer);
        let f_gamma = on_pieces(&pg_outer, &inner_pieces, &g);
        let gamma_rho = rho(gm, &outer_pieces, &pg_outer).map(|r| f_gamma.after(&r));
        Ok(Self {
            e: e.clone(),
            x: x.clone(),
            ge,
            gx,
            outer,
            inner,
            gamma: g,
            gamma_equation: gamma_eq,
            transpose,
            transpose_iso,
            outer_pieces,
            inner_pieces,
            pieces_link,
            lambda: l.lambda,
            composite,
            gamma_rho,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HurewiczAdjunctionReport {
    /// `|H𝓔(E, g_*X)| = |p_!((g_*X)^E)|`
    pub codomain_hom: usize,
    /// `|H𝓕(g^*E, X)| = |f_!(X^{g^*E})|`
    pub domain_hom: usize,
    pub gamma_equation: bool,
    pub transpose_iso: bool,
    pub pieces_link_bijective: bool,
    pub lambda_bijective: bool,
    pub composite_bijective: bool,
    pub composite_matches_gamma_rho: bool,
    /// The composite as a table from classes of `E → g_*X` to classes of `g^*E → X`.
    pub composite: Option<Vec<usize>>,
    pub bijective: bool,
}

pub fn hurewicz_adjunction_check(gm: &InducedGM, e: &Presheaf, x: &Presheaf) -> Result<HurewiczAdjunctionReport> {
    let link = AdjunctionLink::new(gm, e, x)?;
    Ok(report_of(&link))
}

fn report_of(link: &AdjunctionLink) -> HurewiczAdjunctionReport {
    let pieces_link_bijective = link.pieces_link.is_bijective();
    let lambda_bijective = link.lambda.as_ref().is_some_and(FiniteMap::is_bijective);
    let composite_bijective = link.composite.as_ref().is_some_and(FiniteMap::is_bijective);
    let composite_matches_gamma_rho = link.composite.is_some() && link.composite == link.gamma_rho;
    HurewiczAdjunctionReport {
        codomain_hom: link.outer_pieces.count,
        domain_hom: link.inner_pieces.count,
        gamma_equation: link.gamma_equation,
        transpose_iso: link.transpose_iso,
        pieces_link_bijective,
        lambda_bijective,
        composite_bijective,
        composite_matches_gamma_rho,
        composite: link.composite.as_ref().map(|c| c.map.clone()),
        bijective: link.gamma_equation
            && link.transpose_iso
            && pieces_link_bijective
            && lambda_bijective
            && composite_bijective
            && composite_matches_gamma_rho,
    }
}

/// A map along which to test naturality of the chain.
#[derive(Debug, Clone, Copy)]
pub enum Variation<'a> {
    /// `φ: X → X'` over the domain site, with `E` fixed.
    Target(&'a NatTrans),
    /// `ψ: E' → E` over the codomain site, with `X` fixed; `from` is at `E`, `to` at `E'`.
    Source(&'a NatTrans),
}

/// Whether the chain commutes with the induced maps between the two links.
pub fn hurewicz_naturality(gm: &InducedGM, from: &AdjunctionLink, to: &AdjunctionLink, v: Variation) -> Result<bool> {
    let (outer_map, inner_map) = match v {
        Variation::Target(phi) => {
            let g_phi = gm.direct_map(&from.gx, &to.gx, phi)?;
            (
                exp_map_target(&from.outer, &to.outer, &g_phi)?,
                exp_map_target(&from.inner, &to.inner, phi)?,
            )
        }
        Variation::Source(psi) => (
            exp_map_source(&from.outer, &to.outer, psi)?,
            exp_map_source(&from.inner, &to.inner, &gm.pullback_map(psi))?,
        ),
    };
    let (Some(c1), Some(c2)) = (&from.composite, &to.composite) else {
        return Ok(false);
    };
    let left = on_pieces(&from.outer_pieces, &to.outer_pieces, &outer_map);
    let right = on_pieces(&from.inner_pieces, &to.inner_pieces, &inner_map);
    Ok(c2.after(&left) == right.after(c1))
}

/// The κ/κ̄ square at `(E, F)`: `κ̄ ∘ f_!γ ∘ ρ = λ^ϱ ∘ κ` where `λ^ϱ(φ) = λ∘φ∘ϱ`.
#[derive(Debug, Clone, Serialize)]
pub struct KappaSquare {
    pub kappa: Kappa,
    pub kappa_bar: Kappa,
    /// Rows over the pieces of `g^*E`: the upper path.
    pub upper: Option<Vec<Vec<usize>>>,
    /// The lower path.
    pub lower: Option<Vec<Vec<usize>>>,
    pub commutes: bool,
    /// `f_!γ ∘ ρ` bijective.
    pub left_iso: bool,
    /// `λ^ϱ` bijective, i.e. `λ` and `ϱ` are.
    pub right_iso: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WkPreservationReport {
    /// Distance bound of `F` for the domain connector.
    pub domain_bound: usize,
    /// Distance bound of `g_*F` for the codomain connector.
    pub direct_bound: usize,
    pub kappa_square: KappaSquare,
}

pub fn wk_preservation_check(
    gm: &InducedGM,
    conn_domain: &Connector,
    conn_codomain: &Connector,
    x: &Presheaf,
    e: &Presheaf,
) -> Result<WkPreservationReport> {
    let (p, f) = (gm.codomain(), gm.domain());
    let link = AdjunctionLink::new(gm, e, x)?;
    let domain_bound = distance_report(f, conn_domain, x)?.bound;
    let direct_bound = distance_report(p, conn_codomain, &link.gx.obj)?.bound;

    let kappa = p.kappa_of(&link.outer, e, &link.gx.obj)?;
    let kappa_bar = f.kappa_of(&link.inner, &link.ge, x)?;
    let (pe, pge) = (p.pieces(e), f.pieces(&link.ge));
    let var = varrho(gm, &pe, &pge);
    let lam = lambda(gm, x, &link.gx)?.lambda;
    let g_outer = gm.pullback(&link.outer.obj)?;
    let pg_outer = f.pieces(&g_outer);
    let left = rho(gm, &link.outer_pieces, &pg_outer)
        .map(|r| on_pieces(&pg_outer, &link.inner_pieces, &link.gamma).after(&r));
    let upper = left
        .as_ref()
        .map(|l| l.map.iter().map(|&q| kappa_bar.table[q].clone()).collect::<Vec<_>>());
    let lower = lam.as_ref().map(|lam| {
        kappa
            .table
            .iter()
            .map(|row| var.map.iter().map(|&q| lam.map[row[q]]).collect())
            .collect::<Vec<Vec<usize>>>()
    });
    let commutes = upper.is_some() && upper == lower;
    Ok(WkPreservationReport {
        domain_bound,
        direct_bound,
        kappa_square: KappaSquare {
            left_iso: left.as_ref().is_some_and(FiniteMap::is_bijective),
            right_iso: lam.as_ref().is_some_and(FiniteMap::is_bijective) && var.is_bijective(),
            kappa,
            kappa_bar,
            upper,
            lower,
            commutes,
        },
    })
}
