//! Pointwise finite limits and colimits.

use std::sync::Arc;

use super::{NatTrans, Presheaf, UnionFind};
use crate::error::{Error, Result};
use crate::fincat::{FinCat, ObjectId};

/// An n-fold product. Elements of `obj(c)` encode tuples in mixed radix,
/// first factor most significant.
#[derive(Debug, Clone)]
pub struct Product {
    pub obj: Presheaf,
    radix: Vec<Vec<usize>>,
}

impl Product {
    pub fn arity(&self) -> usize {
        self.radix.first().map_or(0, Vec::len)
    }

    pub fn encode(&self, c: ObjectId, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.radix[c])
            .fold(0, |acc, (&x, &r)| acc * r + x)
    }

    pub fn decode(&self, c: ObjectId, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.arity()];
        for (i, &r) in self.radix[c].iter().enumerate().rev() {
            out[i] = idx % r;
            idx /= r;
        }
        out
    }

    pub fn projection(&self, i: usize) -> NatTrans {
        NatTrans::from_fn(&self.obj, |c, e| self.decode(c, e)[i])
    }

    /// The pairing `⟨f₀, …⟩: Z → ∏` of maps out of a common `z`.
    pub fn pairing(&self, z: &Presheaf, maps: &[&NatTrans]) -> NatTrans {
        NatTrans::from_fn(z, |c, e| {
            let coords: Vec<usize> = maps.iter().map(|m| m.at(c, e)).collect();
            self.encode(c, &coords)
        })
    }
}

pub fn product_many(site: &Arc<FinCat>, factors: &[&Presheaf]) -> Result<Product> {
    for f in factors {
        if !f.site().same_structure(site) {
            return Err(Error::SiteMismatch);
        }
    }
    let radix: Vec<Vec<usize>> = site
        .objects()
        .map(|c| factors.iter().map(|f| f.size(c)).collect())
        .collect();
    let sizes = radix.iter().map(|r| r.iter().product()).collect();
    let mut p = Product {
        obj: Presheaf::terminal(site),
        radix,
    };
    let obj = Presheaf::from_fn(site.clone(), sizes, |u, e| {
        let coords = p.decode(site.cod(u), e);
        let image: Vec<usize> = coords
            .iter()
            .zip(factors)
            .map(|(&x, f)| f.act(u, x))
            .collect();
        p.encode(site.dom(u), &image)
    });
    p.obj = obj;
    Ok(p)
}

pub fn product(x: &Presheaf, y: &Presheaf) -> Result<Product> {
    x.same_site(y)?;
    product_many(x.site(), &[x, y])
}

/// `Xⁿ` as an n-fold product.
pub fn power(x: &Presheaf, n: usize) -> Product {
    let factors = vec![x; n];
    product_many(x.site(), &factors).expect("same site")
}

/// `X ⊔ Y` with its injections; `Y(c)` is numbered after `X(c)`.
pub fn coproduct(x: &Presheaf, y: &Presheaf) -> Result<(Presheaf, NatTrans, NatTrans)> {
    x.same_site(y)?;
    let site = x.site();
    let sizes = site.objects().map(|c| x.size(c) + y.size(c)).collect();
    let s = Presheaf::from_fn(site.clone(), sizes, |u, e| {
        let nx = x.size(site.cod(u));
        if e < nx {
            x.act(u, e)
        } else {
            x.size(site.dom(u)) + y.act(u, e - nx)
        }
    });
    let inl = NatTrans::from_fn(x, |_, e| e);
    let inr = NatTrans::from_fn(y, |c, e| x.size(c) + e);
    Ok((s, inl, inr))
}

fn check_parallel(x: &Presheaf, y: &Presheaf, f: &NatTrans, g: &NatTrans) -> Result<()> {
    x.same_site(y)?;
    f.check(x, y)
        .and_then(|_| g.check(x, y))
        .map_err(|e| Error::NotParallel(e.to_string()))
}

/// The subpresheaf of `x` where `f` and `g: x → y` agree, with its inclusion.
pub fn equalizer(
    x: &Presheaf,
    y: &Presheaf,
    f: &NatTrans,
    g: &NatTrans,
) -> Result<(Presheaf, NatTrans)> {
    check_parallel(x, y, f, g)?;
    let member: Vec<Vec<bool>> = x
        .site()
        .objects()
        .map(|c| (0..x.size(c)).map(|e| f.at(c, e) == g.at(c, e)).collect())
        .collect();
    Ok(x.restrict_to(&member))
}

/// The pointwise quotient of `y` identifying `f(e)` with `g(e)`, with the quotient map.
pub fn coequalizer(
    x: &Presheaf,
    y: &Presheaf,
    f: &NatTrans,
    g: &NatTrans,
) -> Result<(Presheaf, NatTrans)> {
    check_parallel(x, y, f, g)?;
    let labels: Vec<Vec<usize>> = y
        .site()
        .objects()
        .map(|c| {
            let mut uf = UnionFind::new(y.size(c));
            for e in 0..x.size(c) {
                uf.union(f.at(c, e), g.at(c, e));
            }
            uf.labels().0
        })
        .collect();
    Ok(y.quotient(&labels))
}
