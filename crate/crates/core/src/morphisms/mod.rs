//! Geometric morphisms `g: Psh(𝒞) → Psh(𝒟)` induced by a site functor
//! `F: 𝒞 → 𝒟`, with `g_! ⊣ g^* ⊣ g_*` computed by pointwise Kan extension.
//!
//! Throughout, `p` is the canonical morphism of `Psh(𝒟)` and `f = p∘g` that
//! of `Psh(𝒞)`.

mod kan;
mod pieces;

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::budget::Budget;
use crate::cohesion::CohesionContext;
use crate::error::{Error, Result};
use crate::fincat::{FinCat, FunctorData, MorphismId, ObjectId};
use crate::presheaf::{nat_transformations, NatTrans, Presheaf, UnionFind};

pub use kan::{
    gamma, hurewicz_adjunction_check, hurewicz_naturality, wk_preservation_check, AdjunctionLink,
    HurewiczAdjunctionReport, KappaSquare, Variation, WkPreservationReport,
};
pub use pieces::{
    pieces_preservation_report, rho, varrho, CodomainObjectCheck, DomainObjectCheck, MatesCheck,
    PiecesPreservationReport, TestFamily,
};

/// `g_*X`: `(g_*X)(d) = Nat(F^*(y d), X)`, a compatible family over the comma category `F ↓ d`.
#[derive(Debug, Clone)]
pub struct DirectImage {
    pub obj: Presheaf,
    /// `sections[d][i]` is the family named by element `i` of `(g_*X)(d)`.
    pub sections: Vec<Vec<NatTrans>>,
    index: Vec<HashMap<NatTrans, usize>>,
}

impl DirectImage {
    pub fn lookup(&self, d: ObjectId, family: &NatTrans) -> Option<usize> {
        self.index[d].get(family).copied()
    }
}

/// `g_!Y`: `(g_!Y)(d)` is the set of triples `(c, y ∈ Y(c), h: d → Fc)` modulo
/// `(c', y·u, h) ~ (c, y, F(u)∘h)`, the colimit over `d ↓ F`.
#[derive(Debug, Clone)]
pub struct LeftImage {
    pub obj: Presheaf,
    /// `offsets[d][c]`: first triple index with first component `c`.
    offsets: Vec<Vec<usize>>,
    /// `class[d][triple]`.
    class: Vec<Vec<usize>>,
    /// `|hom(d, Fc)|`, the stride of `y` in a triple index.
    strides: Vec<Vec<usize>>,
}

impl LeftImage {
    /// The class of `(c, y, h)` in `(g_!Y)(d)`, `h` a position in `hom(d, Fc)`.
    pub fn class_of(&self, d: ObjectId, c: ObjectId, y: usize, h: usize) -> usize {
        self.class[d][self.offsets[d][c] + y * self.strides[d][c] + h]
    }
}

/// Whether each of the four triangle identities holds component-wise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TriangleIdentities {
    /// `ξ_{g^*E} ∘ g^*ν_E = id`
    pub xi_after_unit: bool,
    /// `g_*ξ_X ∘ ν_{g_*X} = id`
    pub direct_after_unit: bool,
    /// `ε_{g_!Y} ∘ g_!η_Y = id`
    pub counit_after_shriek: bool,
    /// `g^*ε_E ∘ η_{g^*E} = id`
    pub pullback_counit_after_eta: bool,
}

impl TriangleIdentities {
    pub fn all(&self) -> bool {
        self.xi_after_unit && self.direct_after_unit && self.counit_after_shriek && self.pullback_counit_after_eta
    }
}

/// The adjoint triple `g_! ⊣ g^* ⊣ g_*` induced by `F: 𝒞 → 𝒟`.
#[derive(Debug)]
pub struct InducedGM {
    functor: FunctorData,
    /// `f` on `Psh(𝒞)`.
    domain: CohesionContext,
    /// `p` on `Psh(𝒟)`.
    codomain: CohesionContext,
    /// `F^*(y d)`; its elements at `c` are the comma objects `(c, h: Fc → d)`.
    probes: Vec<Presheaf>,
    /// Position of `id_{Fc}` in `hom(Fc, Fc)`.
    id_pos: Vec<usize>,
}

/// Both sites must be pre-cohesive; the comma categories are charged against the budget.
pub fn induce_gm(functor: FunctorData, budget_limit: u64) -> Result<InducedGM> {
    let domain = CohesionContext::with_budget(functor.source.clone(), budget_limit)?;
    let codomain = CohesionContext::with_budget(functor.target.clone(), budget_limit)?;
    let budget = Budget::new(budget_limit);
    let probes: Vec<Presheaf> = functor
        .target
        .objects()
        .map(|d| Presheaf::yoneda(&functor.target, d).restrict_along(&functor))
        .collect::<Result<_>>()?;
    let comma_size: usize = probes.iter().map(Presheaf::total_size).sum();
    budget.charge(comma_size as u64)?;
    let (s, t) = (&functor.source, &functor.target);
    let id_pos = s
        .objects()
        .map(|c| t.hom_position(t.identity(functor.obj(c))))
        .collect();
    Ok(InducedGM {
        functor,
        domain,
        codomain,
        probes,
        id_pos,
    })
}

impl InducedGM {
    pub fn functor(&self) -> &FunctorData {
        &self.functor
    }

    pub fn domain(&self) -> &CohesionContext {
        &self.domain
    }

    pub fn codomain(&self) -> &CohesionContext {
        &self.codomain
    }

    fn source(&self) -> &Arc<FinCat> {
        &self.functor.source
    }

    fn target(&self) -> &Arc<FinCat> {
        &self.functor.target
    }

    /// The comma objects `(c, h: Fc → d)` of `F ↓ d`, `h` as a morphism id.
    pub fn comma_objects(&self, d: ObjectId) -> Vec<(ObjectId, MorphismId)> {
        let t = self.target();
        self.source()
            .objects()
            .flat_map(|c| t.hom(self.functor.obj(c), d).iter().map(move |&h| (c, h)))
            .collect()
    }

    /// `F^*(y d)`.
    pub fn probe(&self, d: ObjectId) -> &Presheaf {
        &self.probes[d]
    }

    /// `g^*E = E∘F`.
    pub fn pullback(&self, e: &Presheaf) -> Result<Presheaf> {
        e.restrict_along(&self.functor)
    }

    /// `g^*φ`, with components `φ_{Fc}`.
    pub fn pullback_map(&self, phi: &NatTrans) -> NatTrans {
        NatTrans::new(
            self.source()
                .objects()
                .map(|c| phi.components[self.functor.obj(c)].clone())
                .collect(),
        )
    }

    pub fn direct(&self, x: &Presheaf) -> Result<DirectImage> {
        if !x.site().same_structure(self.source()) {
            return Err(Error::SiteMismatch);
        }
        let t = self.target().clone();
        let budget = self.codomain.budget();
        let sections: Vec<Vec<NatTrans>> = t
            .objects()
            .map(|d| nat_transformations(&self.probes[d], x, &budget))
            .collect::<Result<_>>()?;
        let index: Vec<HashMap<NatTrans, usize>> = sections
            .iter()
            .map(|s| s.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect())
            .collect();
        let sizes = sections.iter().map(Vec::len).collect();
        // v: d' → d sends a family x to x'_{(c, h')} = x_{(c, v∘h')}
        let obj = Presheaf::from_fn(t.clone(), sizes, |v, i| {
            let (d1, d) = (t.dom(v), t.cod(v));
            let fam = &sections[d][i];
            let restricted = NatTrans::from_fn(&self.probes[d1], |c, h| {
                let h = t.hom(self.functor.obj(c), d1)[h];
                fam.at(c, t.hom_position(t.comp(v, h)))
            });
            index[d1][&restricted]
        });
        Ok(DirectImage { obj, sections, index })
    }

    /// `g_*φ: g_*X → g_*X'`, postcomposing each family with `φ`.
    pub fn direct_map(&self, from: &DirectImage, to: &DirectImage, phi: &NatTrans) -> Result<NatTrans> {
        let mut missing = false;
        let out = NatTrans::from_fn(&from.obj, |d, i| {
            let fam = phi.after(&from.sections[d][i]);
            to.lookup(d, &fam).unwrap_or_else(|| {
                missing = true;
                0
            })
        });
        if missing {
            return Err(Error::NatTrans("g_*φ leaves the target direct image".into()));
        }
        Ok(out)
    }

    pub fn shriek(&self, y: &Presheaf) -> Result<LeftImage> {
        if !y.site().same_structure(self.source()) {
            return Err(Error::SiteMismatch);
        }
        let (s, t) = (self.source().clone(), self.target().clone());
        let fo = |c| self.functor.obj(c);
        let mut offsets = Vec::new();
        let mut strides = Vec::new();
        let mut class = Vec::new();
        for d in t.objects() {
            let stride: Vec<usize> = s.objects().map(|c| t.hom(d, fo(c)).len()).collect();
            let mut off = Vec::with_capacity(s.object_count());
            let mut n = 0;
            for c in s.objects() {
                off.push(n);
                n += y.size(c) * stride[c];
            }
            let mut uf = UnionFind::new(n);
            for u in s.morphisms() {
                if s.is_identity(u) {
                    continue;
                }
                let (c1, c) = (s.dom(u), s.cod(u));
                let fu = self.functor.mor(u);
                for yy in 0..y.size(c) {
                    let yu = y.act(u, yy);
                    for (hp, &h) in t.hom(d, fo(c1)).iter().enumerate() {
                        let a = off[c1] + yu * stride[c1] + hp;
                        let b = off[c] + yy * stride[c] + t.hom_position(t.comp(fu, h));
                        uf.union(a, b);
                    }
                }
            }
            class.push(uf.labels());
            offsets.push(off);
            strides.push(stride);
        }
        let sizes: Vec<usize> = class.iter().map(|(_, k)| *k).collect();
        let class: Vec<Vec<usize>> = class.into_iter().map(|(l, _)| l).collect();
        // a representative triple per class
        let reps: Vec<Vec<(ObjectId, usize, usize)>> = t
            .objects()
            .map(|d| {
                let mut rep = vec![None; sizes[d]];
                for c in s.objects() {
                    for yy in 0..y.size(c) {
                        for h in 0..strides[d][c] {
                            let k = class[d][offsets[d][c] + yy * strides[d][c] + h];
                            rep[k].get_or_insert((c, yy, h));
                        }
                    }
                }
                rep.into_iter().map(Option::unwrap).collect()
            })
            .collect();
        let obj = Presheaf::from_fn(t.clone(), sizes, |v, k| {
            let (d1, d) = (t.dom(v), t.cod(v));
            let (c, yy, h) = reps[d][k];
            let h = t.hom(d, fo(c))[h];
            let hv = t.hom_position(t.comp(h, v));
            class[d1][offsets[d1][c] + yy * strides[d1][c] + hv]
        });
        Ok(LeftImage {
            obj,
            offsets,
            class,
            strides,
        })
    }

    /// `g_!φ: g_!Y → g_!Y'`, `[c, y, h] ↦ [c, φ(y), h]`.
    pub fn shriek_map(&self, y: &Presheaf, from: &LeftImage, to: &LeftImage, phi: &NatTrans) -> NatTrans {
        let (s, t) = (self.source(), self.target());
        let mut comps: Vec<Vec<u32>> = t.objects().map(|d| vec![u32::MAX; from.obj.size(d)]).collect();
        for d in t.objects() {
            for c in s.objects() {
                for yy in 0..y.size(c) {
                    for h in 0..from.strides[d][c] {
                        let k = from.class_of(d, c, yy, h);
                        comps[d][k] = to.class_of(d, c, phi.at(c, yy), h) as u32;
                    }
                }
            }
        }
        NatTrans::new(comps)
    }

    /// `ν_E: E → g_*g^*E`, `e ↦ ((c, h) ↦ e·h)`.
    pub fn unit(&self, e: &Presheaf, gge: &DirectImage) -> Result<NatTrans> {
        let t = self.target();
        let mut missing = false;
        let nu = NatTrans::from_fn(e, |d, x| {
            let fam = NatTrans::from_fn(&self.probes[d], |c, h| {
                e.act(t.hom(self.functor.obj(c), d)[h], x)
            });
            gge.lookup(d, &fam).unwrap_or_else(|| {
                missing = true;
                0
            })
        });
        if missing {
            return Err(Error::Invalid("ν lands outside g_*g^*E".into()));
        }
        Ok(nu)
    }

    /// `ξ_X: g^*g_*X → X`, a family to its value at `(c, id_{Fc})`.
    pub fn counit(&self, gx: &DirectImage) -> NatTrans {
        NatTrans::new(
            self.source()
                .objects()
                .map(|c| {
                    gx.sections[self.functor.obj(c)]
                        .iter()
                        .map(|fam| fam.at(c, self.id_pos[c]) as u32)
                        .collect()
                })
                .collect(),
        )
    }

    /// `η_Y: Y → g^*g_!Y`, `y ↦ [c, y, id]`.
    pub fn shriek_unit(&self, y: &Presheaf, gy: &LeftImage) -> NatTrans {
        NatTrans::from_fn(y, |c, yy| gy.class_of(self.functor.obj(c), c, yy, self.id_pos[c]))
    }

    /// `ε_E: g_!g^*E → E`, `[c, e, h] ↦ e·h`; fails if some class is sent to two elements.
    pub fn shriek_counit(&self, e: &Presheaf, ge: &Presheaf, gge: &LeftImage) -> Result<NatTrans> {
        let (s, t) = (self.source(), self.target());
        let mut comps: Vec<Vec<u32>> = t.objects().map(|d| vec![u32::MAX; gge.obj.size(d)]).collect();
        for d in t.objects() {
            for c in s.objects() {
                let fc = self.functor.obj(c);
                for x in 0..ge.size(c) {
                    for (hp, &h) in t.hom(d, fc).iter().enumerate() {
                        let k = gge.class_of(d, c, x, hp);
                        let v = e.act(h, x) as u32;
                        if comps[d][k] != u32::MAX && comps[d][k] != v {
                            return Err(Error::Invalid("ε is not well defined".into()));
                        }
                        comps[d][k] = v;
                    }
                }
            }
        }
        Ok(NatTrans::new(comps))
    }

    /// The four triangle identities at `E` (over `𝒟`) and `X`, `Y` (over `𝒞`).
    pub fn triangle_identities(&self, e: &Presheaf, x: &Presheaf, y: &Presheaf) -> Result<TriangleIdentities> {
        // g^* ⊣ g_*
        let ge = self.pullback(e)?;
        let gge = self.direct(&ge)?;
        let nu_e = self.unit(e, &gge)?;
        let xi_ge = self.counit(&gge);
        let xi_after_unit = xi_ge.after(&self.pullback_map(&nu_e)) == NatTrans::identity(&ge);

        let gx = self.direct(x)?;
        let ggx = self.direct(&self.pullback(&gx.obj)?)?;
        let nu_gx = self.unit(&gx.obj, &ggx)?;
        let g_xi = self.direct_map(&ggx, &gx, &self.counit(&gx))?;
        let direct_after_unit = g_xi.after(&nu_gx) == NatTrans::identity(&gx.obj);

        // g_! ⊣ g^*
        let sy = self.shriek(y)?;
        let gsy = self.pullback(&sy.obj)?;
        let eta_y = self.shriek_unit(y, &sy);
        let s_gsy = self.shriek(&gsy)?;
        let shriek_eta = self.shriek_map(y, &sy, &s_gsy, &eta_y);
        let eps_sy = self.shriek_counit(&sy.obj, &gsy, &s_gsy)?;
        let counit_after_shriek = eps_sy.after(&shriek_eta) == NatTrans::identity(&sy.obj);

        let sge = self.shriek(&ge)?;
        let eps_e = self.shriek_counit(e, &ge, &sge)?;
        let eta_ge = self.shriek_unit(&ge, &sge);
        let pullback_counit_after_eta = self.pullback_map(&eps_e).after(&eta_ge) == NatTrans::identity(&ge);

        Ok(TriangleIdentities {
            xi_after_unit,
            direct_after_unit,
            counit_after_shriek,
            pullback_counit_after_eta,
        })
    }
}
