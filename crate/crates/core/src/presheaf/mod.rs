//! Finite presheaves on a [`FinCat`], their (co)limits, exponentials and the
//! subobject classifier.

mod exponential;
mod format;
mod limits;
mod nat;
mod omega;
pub mod random;
pub mod simplicial;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{FinCat, MorphismId, ObjectId};

pub use exponential::{
    exp_map_source, exp_map_target, exponential, internal_composition, name_of, Exponential,
};
pub use format::PresheafDoc;
pub use limits::{coequalizer, coproduct, equalizer, power, product, product_many, Product};
pub use nat::{count_nat_transformations, for_each_nat_trans, nat_transformations, NatTrans};
pub use omega::{characteristic_map, subobject_classifier, subpresheaves, Omega};

/// A presheaf `X: Cᵒᵖ → FinSet`. Elements of `X(c)` are `0..size(c)`;
/// `act(u, x)` is `x·u ∈ X(dom u)` for `x ∈ X(cod u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    site: Arc<FinCat>,
    sizes: Vec<usize>,
    action: Vec<Vec<u32>>,
    names: Option<Vec<Vec<String>>>,
}

impl Presheaf {
    /// Builds and checks functoriality. `action[u]` has one entry per element of `X(cod u)`.
    pub fn new(site: Arc<FinCat>, sizes: Vec<usize>, action: Vec<Vec<u32>>) -> Result<Self> {
        let p = Self {
            site,
            sizes,
            action,
            names: None,
        };
        p.check()?;
        Ok(p)
    }

    /// Builds from an action function without checking; callers construct
    /// actions that are functorial by design.
    pub(crate) fn from_fn(
        site: Arc<FinCat>,
        sizes: Vec<usize>,
        mut act: impl FnMut(MorphismId, usize) -> usize,
    ) -> Self {
        let action = site
            .morphisms()
            .map(|u| {
                (0..sizes[site.cod(u)])
                    .map(|x| act(u, x) as u32)
                    .collect()
            })
            .collect();
        let p = Self {
            site,
            sizes,
            action,
            names: None,
        };
        debug_assert!(p.check().is_ok(), "{:?}", p.check());
        p
    }

    fn check(&self) -> Result<()> {
        let s = &self.site;
        if self.sizes.len() != s.object_count() || self.action.len() != s.morphism_count() {
            return Err(Error::Presheaf("tables do not match the site".into()));
        }
        for u in s.morphisms() {
            let (d, c) = (s.dom(u), s.cod(u));
            if self.action[u].len() != self.sizes[c] {
                return Err(Error::Presheaf(format!(
                    "action of `{}` is not total",
                    s.morphism_name(u)
                )));
            }
            if self.action[u].iter().any(|&y| y as usize >= self.sizes[d]) {
                return Err(Error::Presheaf(format!(
                    "action of `{}` leaves its codomain",
                    s.morphism_name(u)
                )));
            }
            if s.is_identity(u) && self.action[u].iter().enumerate().any(|(x, &y)| x != y as usize) {
                return Err(Error::Presheaf(format!(
                    "identity `{}` acts non-trivially",
                    s.morphism_name(u)
                )));
            }
        }
        for g in s.morphisms() {
            for f in s.morphisms() {
                if let Some(gf) = s.compose(g, f) {
                    for x in 0..self.sizes[s.cod(g)] {
                        if self.act(gf, x) != self.act(f, self.act(g, x)) {
                            return Err(Error::Presheaf(format!(
                                "x·({} ∘ {}) ≠ (x·{})·{} for element {x}",
                                s.morphism_name(g),
                                s.morphism_name(f),
                                s.morphism_name(g),
                                s.morphism_name(f),
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn site(&self) -> &Arc<FinCat> {
        &self.site
    }

    pub fn size(&self, c: ObjectId) -> usize {
        self.sizes[c]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total_size(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// `x·u`.
    #[inline]
    pub fn act(&self, u: MorphismId, x: usize) -> usize {
        self.action[u][x] as usize
    }

    pub fn action_table(&self, u: MorphismId) -> &[u32] {
        &self.action[u]
    }

    /// Offsets of each `X(c)` in the disjoint union of all sections.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.sizes
            .iter()
            .map(|&n| {
                let o = acc;
                acc += n;
                o
            })
            .collect()
    }

    pub fn element_name(&self, c: ObjectId, x: usize) -> String {
        match &self.names {
            Some(n) => n[c][x].clone(),
            None => x.to_string(),
        }
    }

    pub fn names(&self) -> Option<&Vec<Vec<String>>> {
        self.names.as_ref()
    }

    pub fn with_names(mut self, names: Vec<Vec<String>>) -> Result<Self> {
        if names.len() != self.sizes.len()
            || names.iter().zip(&self.sizes).any(|(n, &s)| n.len() != s)
        {
            return Err(Error::Presheaf("element names do not match the sections".into()));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn same_site(&self, other: &Presheaf) -> Result<()> {
        if Arc::ptr_eq(&self.site, &other.site) || self.site.same_structure(&other.site) {
            Ok(())
        } else {
            Err(Error::SiteMismatch)
        }
    }

    /// Same sizes and actions (names ignored).
    pub fn same_tables(&self, other: &Presheaf) -> bool {
        self.sizes == other.sizes && self.action == other.action
    }

    /// `y c = C(−, c)`; the element `i` of `(y c)(d)` is `hom(d, c)[i]`.
    pub fn yoneda(site: &Arc<FinCat>, c: ObjectId) -> Self {
        let sizes = site.objects().map(|d| site.hom(d, c).len()).collect();
        let p = Self::from_fn(site.clone(), sizes, |u, i| {
            let h = site.hom(site.cod(u), c)[i];
            site.hom_position(site.comp(h, u))
        });
        let names = site
            .objects()
            .map(|d| {
                site.hom(d, c)
                    .iter()
                    .map(|&h| site.morphism_name(h).to_string())
                    .collect()
            })
            .collect();
        p.with_names(names).expect("hom-set names")
    }

    pub fn terminal(site: &Arc<FinCat>) -> Self {
        Self::constant(site, 1)
    }

    pub fn initial(site: &Arc<FinCat>) -> Self {
        Self::constant(site, 0)
    }

    /// The constant presheaf on `n` elements (the discrete object `p^*n`).
    pub fn constant(site: &Arc<FinCat>, n: usize) -> Self {
        Self::from_fn(site.clone(), vec![n; site.object_count()], |_, x| x)
    }

    /// Whether `S ⊆ X` (given per object as membership flags) is closed under the action.
    pub fn is_subpresheaf(&self, member: &[Vec<bool>]) -> bool {
        self.site.morphisms().all(|u| {
            let (d, c) = (self.site.dom(u), self.site.cod(u));
            (0..self.sizes[c]).all(|x| !member[c][x] || member[d][self.act(u, x)])
        })
    }

    /// The subpresheaf on the flagged elements, with its inclusion.
    pub fn restrict_to(&self, member: &[Vec<bool>]) -> (Presheaf, NatTrans) {
        debug_assert!(self.is_subpresheaf(member));
        let mut index = vec![Vec::new(); self.sizes.len()];
        let mut incl = vec![Vec::new(); self.sizes.len()];
        for c in self.site.objects() {
            index[c] = vec![u32::MAX; self.sizes[c]];
            for x in 0..self.sizes[c] {
                if member[c][x] {
                    index[c][x] = incl[c].len() as u32;
                    incl[c].push(x as u32);
                }
            }
        }
        let sizes = incl.iter().map(Vec::len).collect();
        let sub = Self::from_fn(self.site.clone(), sizes, |u, i| {
            let x = incl[self.site.cod(u)][i] as usize;
            index[self.site.dom(u)][self.act(u, x)] as usize
        });
        (sub, NatTrans::new(incl))
    }

    /// Pointwise quotient by an equivalence given as class labels `0..k`
    /// per object, assumed compatible with the action.
    pub fn quotient(&self, labels: &[Vec<usize>]) -> (Presheaf, NatTrans) {
        let sizes: Vec<usize> = labels
            .iter()
            .map(|l| l.iter().map(|&k| k + 1).max().unwrap_or(0))
            .collect();
        let mut rep = vec![Vec::new(); sizes.len()];
        for c in self.site.objects() {
            rep[c] = vec![0; sizes[c]];
            for x in (0..self.sizes[c]).rev() {
                rep[c][labels[c][x]] = x;
            }
        }
        let q = Self::from_fn(self.site.clone(), sizes, |u, k| {
            labels[self.site.dom(u)][self.act(u, rep[self.site.cod(u)][k])]
        });
        let map = NatTrans::new(
            labels
                .iter()
                .map(|l| l.iter().map(|&k| k as u32).collect())
                .collect(),
        );
        (q, map)
    }

    /// Restriction along a functor `F: D → C`: `(X∘F)(d) = X(F d)`.
    pub fn restrict_along(&self, f: &crate::fincat::FunctorData) -> Result<Presheaf> {
        if !f.target.same_structure(&self.site) {
            return Err(Error::SiteMismatch);
        }
        let sizes = f.source.objects().map(|d| self.sizes[f.obj(d)]).collect();
        Ok(Self::from_fn(f.source.clone(), sizes, |u, x| self.act(f.mor(u), x)))
    }
}

/// Least-label union–find, used for pieces and pointwise quotients.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the classes; the smaller root wins. Returns whether they differed.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Dense labels `0..k`, numbered by least member.
    pub fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut label = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut k = 0;
        for x in 0..n {
            let r = self.find(x);
            if label[r] == usize::MAX {
                label[r] = k;
                k += 1;
            }
            out[x] = label[r];
        }
        (out, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::standard::DeltaSite;

    #[test]
    fn yoneda_sizes_match_hom_counts() {
        let d1 = DeltaSite::new(1).unwrap();
        let y1 = Presheaf::yoneda(&d1.cat, 1);
        assert_eq!(y1.sizes(), &[2, 3]);
        let y0 = Presheaf::yoneda(&d1.cat, 0);
        assert_eq!(y0.sizes(), &[1, 1]);
        let d2 = DeltaSite::new(2).unwrap();
        let y = Presheaf::yoneda(&d2.cat, 1);
        // order-preserving maps [k] → [1], k = 0, 1, 2
        let oracle: Vec<usize> = (0..3usize)
            .map(|k| {
                (0..1usize << (k + 1))
                    .filter(|bits| (0..k).all(|i| (bits >> i & 1) <= (bits >> (i + 1) & 1)))
                    .count()
            })
            .collect();
        assert_eq!(y.sizes(), oracle.as_slice());
        assert_eq!(y.size(2), 4);
    }

    #[test]
    fn rejects_non_functorial_action() {
        let d1 = DeltaSite::new(1).unwrap();
        let y1 = Presheaf::yoneda(&d1.cat, 1);
        let mut action: Vec<Vec<u32>> = d1.cat.morphisms().map(|u| y1.action_table(u).to_vec()).collect();
        let s = d1.degeneracy(0, 0);
        action[s][0] = 2;
        assert!(Presheaf::new(d1.cat.clone(), y1.sizes().to_vec(), action).is_err());
    }

    #[test]
    fn union_find_labels_by_least_member() {
        let mut uf = UnionFind::new(5);
        uf.union(4, 1);
        uf.union(3, 0);
        assert_eq!(uf.labels(), (vec![0, 1, 2, 0, 1], 3));
    }
}
