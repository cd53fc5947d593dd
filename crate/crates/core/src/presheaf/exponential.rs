use std::collections::HashMap;

use rayon::prelude::*;

use super::{nat_transformations, product, NatTrans, Presheaf, Product};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::ObjectId;

/// `Yˣ` with `(Yˣ)(c) = Nat(y c × X, Y)`, its sections and evaluation.
#[derive(Debug, Clone)]
pub struct Exponential {
    pub obj: Presheaf,
    /// `y c × X` for each object `c`.
    pub domains: Vec<Product>,
    /// The element `i` of `(Yˣ)(c)` is `sections[c][i]`.
    pub sections: Vec<Vec<NatTrans>>,
    index: Vec<HashMap<NatTrans, usize>>,
    /// `Yˣ × X`, the domain of `ev`.
    pub ev_domain: Product,
    pub ev: NatTrans,
}

impl Exponential {
    pub fn lookup(&self, c: ObjectId, t: &NatTrans) -> Option<usize> {
        self.index[c].get(t).copied()
    }

    /// `t_d(h, x)` for `t ∈ (Yˣ)(c)`, `h` the position of a morphism in `hom(d, c)`.
    pub fn apply(&self, c: ObjectId, t: usize, d: ObjectId, h: usize, x: usize) -> usize {
        let dom = &self.domains[c];
        self.sections[c][t].at(d, dom.encode(d, &[h, x]))
    }
}

/// Builds `Yˣ`. Sections are enumerated per object (in parallel) and sorted.
pub fn exponential(x: &Presheaf, y: &Presheaf, budget: &Budget) -> Result<Exponential> {
    x.same_site(y)?;
    let site = x.site().clone();
    let domains: Vec<Product> = site
        .objects()
        .map(|c| product(&Presheaf::yoneda(&site, c), x))
        .collect::<Result<_>>()?;
    let sections: Vec<Vec<NatTrans>> = domains
        .par_iter()
        .map(|dom| nat_transformations(&dom.obj, y, budget))
        .collect::<Result<_>>()?;
    let index: Vec<HashMap<NatTrans, usize>> = sections
        .iter()
        .map(|s| s.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect())
        .collect();
    let sizes: Vec<usize> = sections.iter().map(Vec::len).collect();
    // t·u = ((h, e) ↦ t(u∘h, e))
    let mut err = None;
    let obj = Presheaf::from_fn(site.clone(), sizes, |u, i| {
        let (d, c) = (site.dom(u), site.cod(u));
        let t = &sections[c][i];
        let restricted = NatTrans::from_fn(&domains[d].obj, |e, code| {
            let hx = domains[d].decode(e, code);
            let h = site.hom(e, d)[hx[0]];
            let uh = site.hom_position(site.comp(u, h));
            t.at(e, domains[c].encode(e, &[uh, hx[1]]))
        });
        match index[d].get(&restricted) {
            Some(&j) => j,
            None => {
                err.get_or_insert_with(|| Error::Invalid("restriction left the exponential".into()));
                0
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let ev_domain = product(&obj, x)?;
    let ev = NatTrans::from_fn(&ev_domain.obj, |c, code| {
        let tx = ev_domain.decode(c, code);
        let id = site.hom_position(site.identity(c));
        sections[c][tx[0]].at(c, domains[c].encode(c, &[id, tx[1]]))
    });
    Ok(Exponential {
        obj,
        domains,
        sections,
        index,
        ev_domain,
        ev,
    })
}

/// The element of `(Yˣ)(c)` naming `f: X → Y` restricted to `y c × X`, i.e. `(h, e) ↦ f(e)`.
pub fn name_of(exp: &Exponential, c: ObjectId, f: &NatTrans) -> Option<usize> {
    let dom = &exp.domains[c];
    let t = NatTrans::from_fn(&dom.obj, |d, code| f.at(d, dom.decode(d, code)[1]));
    exp.lookup(c, &t)
}

/// `φ^X: Yˣ → Y'ˣ` for `φ: Y → Y'`, `t ↦ φ∘t`.
pub fn exp_map_target(from: &Exponential, to: &Exponential, phi: &NatTrans) -> Result<NatTrans> {
    let mut missing = false;
    let out = NatTrans::from_fn(&from.obj, |c, t| {
        to.lookup(c, &phi.after(&from.sections[c][t])).unwrap_or_else(|| {
            missing = true;
            0
        })
    });
    if missing {
        return Err(Error::Invalid("φ∘t is not a section of the target exponential".into()));
    }
    Ok(out)
}

/// `Y^ψ: Yˣ → Y^{X'}` for `ψ: X' → X`, `t ↦ t∘(id × ψ)`.
pub fn exp_map_source(from: &Exponential, to: &Exponential, psi: &NatTrans) -> Result<NatTrans> {
    let mut missing = false;
    let out = NatTrans::from_fn(&from.obj, |c, t| {
        let (dom, dom2) = (&from.domains[c], &to.domains[c]);
        let s = NatTrans::from_fn(&dom2.obj, |d, code| {
            let hx = dom2.decode(d, code);
            from.sections[c][t].at(d, dom.encode(d, &[hx[0], psi.at(d, hx[1])]))
        });
        to.lookup(c, &s).unwrap_or_else(|| {
            missing = true;
            0
        })
    });
    if missing {
        return Err(Error::Invalid("t∘(id × ψ) is not a section of the target exponential".into()));
    }
    Ok(out)
}

/// Internal composition `Zʸ × Yˣ → Zˣ`, `(s, t) ↦ ((h, e) ↦ s(h, t(h, e)))`.
pub fn internal_composition(
    zy: &Exponential,
    yx: &Exponential,
    zx: &Exponential,
) -> Result<(Product, NatTrans)> {
    let pair = product(&zy.obj, &yx.obj)?;
    let mut missing = false;
    let comp = NatTrans::from_fn(&pair.obj, |c, code| {
        let st = pair.decode(c, code);
        let dom = &zx.domains[c];
        let t = NatTrans::from_fn(&dom.obj, |d, hx| {
            let hx = dom.decode(d, hx);
            let y = yx.apply(c, st[1], d, hx[0], hx[1]);
            zy.apply(c, st[0], d, hx[0], y)
        });
        zx.lookup(c, &t).unwrap_or_else(|| {
            missing = true;
            0
        })
    });
    if missing {
        return Err(Error::Invalid("composite is not a section of Zˣ".into()));
    }
    comp.check(&pair.obj, &zx.obj)?;
    Ok((pair, comp))
}
