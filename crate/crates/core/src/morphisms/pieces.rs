use rayon::prelude::*;
use serde::Serialize;

use super::{DirectImage, InducedGM};
use crate::cohesion::{FiniteMap, PiecesData};
use crate::error::Result;
use crate::presheaf::{NatTrans, Presheaf};

/// Largest discrete object `p^*A` on which the indexed-coproduct conditions are sampled.
const DISCRETE_SAMPLES: usize = 3;

/// A named, finite family of test objects on both sides of `g`.
#[derive(Debug, Clone)]
pub struct TestFamily {
    pub name: String,
    /// Objects of `Psh(𝒟)`.
    pub codomain_objects: Vec<(String, Presheaf)>,
    /// Objects of `Psh(𝒞)`.
    pub domain_objects: Vec<(String, Presheaf)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CodomainObjectCheck {
    pub name: String,
    pub pieces: usize,
    /// `ρ_E: p_!E → f_!g^*E`, absent when the forced assignment is ill defined or partial.
    pub rho: Option<Vec<usize>>,
    pub varrho: Vec<usize>,
    /// `f^*ρ ∘ g^*σ = σ̄_{g^*}` at `E`.
    pub rho_unit_triangle: bool,
    pub mutually_inverse: bool,
    /// `p_!ν_E` bijective.
    pub unit_pieces_iso: bool,
    pub triangle_identities: bool,
}

/// The three formulations of the mates lemma at one object.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MatesCheck {
    /// `λ∘ϱ_{g_*} = f_!ξ`
    pub triangle: bool,
    /// `f^*λ ∘ g^*σ_{g_*} = σ̄∘ξ`
    pub left_rectangle: bool,
    /// `ν_{p^*f_!} ∘ p^*λ ∘ σ_{g_*} = g_*σ̄`
    pub right_rectangle: bool,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DomainObjectCheck {
    pub name: String,
    pub pieces: usize,
    /// `|p_!g_*X|`
    pub direct_pieces: usize,
    pub rho_at_direct: Option<Vec<usize>>,
    pub varrho_at_direct: Vec<usize>,
    pub rho_varrho_inverse: bool,
    /// `λ_X = f_!ξ ∘ ρ_{g_*X}: p_!g_*X → f_!X`
    pub lambda: Option<Vec<usize>>,
    pub lambda_iso: bool,
    /// `λ∘θ_{g_*X} = θ̄_X` on points of `g_*X = f_*X`.
    pub theta_square_commutes: bool,
    /// θ̄ via `α⁻¹ ∘ (p_*ν_{p^*f_!})⁻¹ ∘ f_*σ̄` agrees with θ̄ computed directly.
    pub theta_bar_composite_agrees: bool,
    pub mates: Option<MatesCheck>,
    pub triangle_identities: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PiecesPreservationReport {
    pub functor: String,
    pub family: String,
    /// `|f_!g^*(y d)|` for each object `d` of the codomain site.
    pub indecomposability: Vec<(String, usize)>,
    pub indexed_coproducts_preserved: bool,
    /// `ν_{p^*A}` iso for `|A| ≤ 3`.
    pub unit_on_discrete_iso: bool,
    /// Indecomposability of every `g^*(y d)` agrees with the sampled `ν_{p^*A}` isos.
    pub referee_converse_consistent: bool,
    /// `p_*ν_{p^*A}` iso for `|A| ≤ 3`. Recorded, not used to gate the verdict.
    pub points_of_unit_on_discrete_iso: bool,
    /// `τ̄ ∘ ρ_{p^*A} = τ_A` for `|A| ≤ 3`.
    pub rho_counit_triangle: bool,
    pub codomain_checks: Vec<CodomainObjectCheck>,
    pub domain_checks: Vec<DomainObjectCheck>,
    pub rho_varrho_inverse: bool,
    pub lambda_iso: bool,
    pub theta_square_commutes: bool,
    pub mates_agree: bool,
    pub unit_pieces_iso: bool,
    pub triangle_identities: bool,
    /// Indexed coproducts preserved and λ iso on every domain test object.
    pub preserves_pieces_on_family: bool,
}

// The map on pieces induced by φ: X → Y.
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

fn identity_map(n: usize) -> FiniteMap {
    FiniteMap {
        map: (0..n).collect(),
        codomain: n,
    }
}

/// `ρ_E: p_!E → f_!g^*E`, forced by `f^*ρ ∘ g^*σ = σ̄_{g^*}`: the piece of `e ∈ E(Fc)`
/// goes to the piece of `e ∈ (g^*E)(c)`. `None` when two such elements of one piece
/// disagree or some piece meets no object in the image of `F`.
pub fn rho(gm: &InducedGM, pe: &PiecesData, pge: &PiecesData) -> Option<FiniteMap> {
    let mut map = vec![None; pe.count];
    for c in gm.source().objects() {
        let fc = gm.functor.obj(c);
        for (x, &q) in pge.labels[c].iter().enumerate() {
            let p = pe.of(fc, x);
            match map[p] {
                Some(v) if v != q => return None,
                _ => map[p] = Some(q),
            }
        }
    }
    Some(FiniteMap {
        map: map.into_iter().collect::<Option<_>>()?,
        codomain: pge.count,
    })
}

/// `ϱ_E = τ̄_{p_!E} ∘ f_!g^*σ_E: f_!g^*E → p_!E`.
pub fn varrho(gm: &InducedGM, pe: &PiecesData, pge: &PiecesData) -> FiniteMap {
    let f = gm.domain();
    let a = pe.count;
    let constant = f.discrete(a);
    let pconst = f.pieces(&constant);
    let tau_bar = f.tau(a);
    // g^*σ_E at c sends x ∈ E(Fc) to its piece label, an element of (f^*A)(c)
    let g_sigma = FiniteMap {
        map: pge
            .representatives
            .iter()
            .map(|&(c, x)| pconst.of(c, pe.of(gm.functor.obj(c), x)))
            .collect(),
        codomain: pconst.count,
    };
    tau_bar.after(&g_sigma)
}

fn mutually_inverse(rho: &Option<FiniteMap>, varrho: &FiniteMap) -> bool {
    rho.as_ref().is_some_and(|r| {
        varrho.after(r) == identity_map(r.map.len()) && r.after(varrho) == identity_map(varrho.map.len())
    })
}

// f^*ρ ∘ g^*σ = σ̄_{g^*}, element-wise.
fn rho_unit_triangle(gm: &InducedGM, rho: &Option<FiniteMap>, pe: &PiecesData, pge: &PiecesData) -> bool {
    rho.as_ref().is_some_and(|r| {
        gm.source().objects().all(|c| {
            let fc = gm.functor.obj(c);
            pge.labels[c]
                .iter()
                .enumerate()
                .all(|(x, &q)| r.map[pe.of(fc, x)] == q)
        })
    })
}

// p_!ν_E bijective.
fn unit_pieces_iso(gm: &InducedGM, e: &Presheaf, pe: &PiecesData) -> Result<bool> {
    let gge = gm.direct(&gm.pullback(e)?)?;
    let nu = gm.unit(e, &gge)?;
    let pgge = gm.codomain().pieces(&gge.obj);
    Ok(on_pieces(pe, &pgge, &nu).is_bijective())
}

fn check_codomain_object(gm: &InducedGM, name: &str, e: &Presheaf) -> Result<CodomainObjectCheck> {
    let (p, f) = (gm.codomain(), gm.domain());
    let ge = gm.pullback(e)?;
    let (pe, pge) = (p.pieces(e), f.pieces(&ge));
    let r = rho(gm, &pe, &pge);
    let v = varrho(gm, &pe, &pge);
    Ok(CodomainObjectCheck {
        name: name.into(),
        pieces: pe.count,
        rho_unit_triangle: rho_unit_triangle(gm, &r, &pe, &pge),
        mutually_inverse: mutually_inverse(&r, &v),
        rho: r.map(|m| m.map),
        varrho: v.map,
        unit_pieces_iso: unit_pieces_iso(gm, e, &pe)?,
        triangle_identities: gm.triangle_identities(e, &ge, &ge)?.all(),
    })
}

/// `λ_X = f_!ξ_X ∘ ρ_{g_*X}` together with the pieces it is built from.
pub(super) struct Lambda {
    pub pgx: PiecesData,
    pub px: PiecesData,
    pub rho: Option<FiniteMap>,
    pub varrho: FiniteMap,
    pub xi: NatTrans,
    pub f_xi: FiniteMap,
    pub lambda: Option<FiniteMap>,
}

pub(super) fn lambda(gm: &InducedGM, x: &Presheaf, gx: &DirectImage) -> Result<Lambda> {
    let (p, f) = (gm.codomain(), gm.domain());
    let ggx = gm.pullback(&gx.obj)?;
    let (pgx, pggx, px) = (p.pieces(&gx.obj), f.pieces(&ggx), f.pieces(x));
    let r = rho(gm, &pgx, &pggx);
    let v = varrho(gm, &pgx, &pggx);
    let xi = gm.counit(gx);
    let f_xi = on_pieces(&pggx, &px, &xi);
    let lambda = r.as_ref().map(|r| f_xi.after(r));
    Ok(Lambda {
        pgx,
        px,
        rho: r,
        varrho: v,
        xi,
        f_xi,
        lambda,
    })
}

fn check_domain_object(gm: &InducedGM, name: &str, x: &Presheaf) -> Result<DomainObjectCheck> {
    let (p, f) = (gm.codomain(), gm.domain());
    let (s, t) = (gm.source(), gm.target());
    let (tc, td) = (f.terminal(), p.terminal());
    let gx = gm.direct(x)?;
    let l = lambda(gm, x, &gx)?;
    let a = l.px.count;

    // "=": a point of g_*X is a family on F^*(y t) ≅ 1, i.e. a point of X
    let eq: Vec<usize> = gx.sections[td].iter().map(|fam| fam.at(tc, 0)).collect();
    let theta = p.theta(&gx.obj);
    let theta_bar = f.theta(x);
    let theta_square_commutes = l.lambda.as_ref().is_some_and(|lam| {
        theta
            .map
            .iter()
            .zip(&eq)
            .all(|(&q, &pt)| lam.map[q] == theta_bar.map[pt])
    });

    // θ̄ = α⁻¹ ∘ (p_*ν_{p^*A})⁻¹ ∘ f_*σ̄, with f_* = p_*g_*
    let sigma_bar = f.sigma(x, &l.px);
    let pa = p.discrete(a);
    let gfa = gm.direct(&f.discrete(a))?;
    let nu_pa = gm.unit(&pa, &gfa)?;
    let g_sigma_bar = gm.direct_map(&gx, &gfa, &sigma_bar)?;
    let alpha = p.alpha(a);
    let mut back = vec![None; gfa.obj.size(td)];
    for i in 0..a {
        back[nu_pa.at(td, alpha.map[i])] = Some(i);
    }
    let theta_bar_composite_agrees = eq.iter().enumerate().all(|(pt, &xp)| {
        back[g_sigma_bar.at(td, pt)] == Some(theta_bar.map[xp])
    });

    let mates = l.lambda.as_ref().map(|lam| {
        let triangle = lam.after(&l.varrho) == l.f_xi;
        let left_rectangle = s.objects().all(|c| {
            let fc = gm.functor.obj(c);
            (0..gx.obj.size(fc)).all(|sx| lam.map[l.pgx.of(fc, sx)] == l.px.of(c, l.xi.at(c, sx)))
        });
        let right_rectangle = t.objects().all(|d| {
            (0..gx.obj.size(d)).all(|sx| nu_pa.at(d, lam.map[l.pgx.of(d, sx)]) == g_sigma_bar.at(d, sx))
        });
        MatesCheck {
            triangle,
            left_rectangle,
            right_rectangle,
            agree: triangle == left_rectangle && left_rectangle == right_rectangle,
        }
    });

    Ok(DomainObjectCheck {
        name: name.into(),
        pieces: a,
        direct_pieces: l.pgx.count,
        rho_varrho_inverse: mutually_inverse(&l.rho, &l.varrho),
        rho_at_direct: l.rho.map(|m| m.map),
        varrho_at_direct: l.varrho.map,
        lambda_iso: l.lambda.as_ref().is_some_and(FiniteMap::is_bijective),
        lambda: l.lambda.map(|m| m.map),
        theta_square_commutes,
        theta_bar_composite_agrees,
        mates,
        triangle_identities: gm.triangle_identities(&gx.obj, x, x)?.all(),
    })
}

/// Runs every §-level check of the ρ/ϱ/λ calculus on the family.
/// Per-object checks run in parallel; the report keeps the family's order.
pub fn pieces_preservation_report(gm: &InducedGM, family: &TestFamily) -> Result<PiecesPreservationReport> {
    let (p, f) = (gm.codomain(), gm.domain());
    let t = gm.target();
    let indecomposability: Vec<(String, usize)> = t
        .objects()
        .map(|d| (t.object_name(d).to_string(), f.pieces(gm.probe(d)).count))
        .collect();
    let indexed_coproducts_preserved = indecomposability.iter().all(|(_, n)| *n == 1);

    let mut unit_on_discrete_iso = true;
    let mut points_of_unit_on_discrete_iso = true;
    let mut rho_counit_triangle = true;
    for a in 0..=DISCRETE_SAMPLES {
        let pa = p.discrete(a);
        let gpa = gm.pullback(&pa)?;
        let gfa = gm.direct(&gpa)?;
        let nu = gm.unit(&pa, &gfa)?;
        unit_on_discrete_iso &= nu.is_iso(&gfa.obj);
        let td = p.terminal();
        let at_points = FiniteMap {
            map: (0..a).map(|i| nu.at(td, i)).collect(),
            codomain: gfa.obj.size(td),
        };
        points_of_unit_on_discrete_iso &= at_points.is_bijective();
        let (ppa, pgpa) = (p.pieces(&pa), f.pieces(&gpa));
        rho_counit_triangle &= rho(gm, &ppa, &pgpa).is_some_and(|r| f.tau(a).after(&r) == p.tau(a));
    }

    let codomain_checks: Vec<CodomainObjectCheck> = family
        .codomain_objects
        .par_iter()
        .map(|(name, e)| check_codomain_object(gm, name, e))
        .collect::<Result<_>>()?;
    let domain_checks: Vec<DomainObjectCheck> = family
        .domain_objects
        .par_iter()
        .map(|(name, x)| check_domain_object(gm, name, x))
        .collect::<Result<_>>()?;

    let rho_varrho_inverse = codomain_checks.iter().all(|c| c.mutually_inverse)
        && domain_checks.iter().all(|c| c.rho_varrho_inverse);
    let lambda_iso = domain_checks.iter().all(|c| c.lambda_iso);
    let theta_square_commutes = domain_checks.iter().all(|c| c.theta_square_commutes);
    let mates_agree = domain_checks.iter().all(|c| c.mates.is_none_or(|m| m.agree));
    let unit_pieces_iso = codomain_checks.iter().all(|c| c.unit_pieces_iso);
    let triangle_identities = codomain_checks.iter().all(|c| c.triangle_identities)
        && domain_checks.iter().all(|c| c.triangle_identities);
    let functor = gm.functor();
    Ok(PiecesPreservationReport {
        functor: format!("{} -> {}", functor.source.name(), functor.target.name()),
        family: family.name.clone(),
        indecomposability,
        indexed_coproducts_preserved,
        unit_on_discrete_iso,
        referee_converse_consistent: indexed_coproducts_preserved == unit_on_discrete_iso,
        points_of_unit_on_discrete_iso,
        rho_counit_triangle,
        codomain_checks,
        domain_checks,
        rho_varrho_inverse,
        lambda_iso,
        theta_square_commutes,
        mates_agree,
        unit_pieces_iso,
        triangle_identities,
        preserves_pieces_on_family: indexed_coproducts_preserved && lambda_iso,
    })
}
