//! Simplicial sets over truncated simplex sites: a builder from nondegenerate
//! simplices, nerves of cyclic groups, horns and paths.

use std::collections::HashMap;

use rand::Rng;

use super::{NatTrans, Presheaf};
use crate::error::{Error, Result};
use crate::fincat::standard::{monotone_maps, DeltaSite};

/// An element of a built simplicial set: the nondegenerate simplex `id` of
/// dimension `dim`, pulled back along the surjection `surj: [k] ↠ [dim]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    pub dim: usize,
    pub id: usize,
    pub surj: Vec<usize>,
}

impl Elem {
    pub fn nondegenerate(dim: usize, id: usize) -> Self {
        Self {
            dim,
            id,
            surj: (0..=dim).collect(),
        }
    }

    /// The fully degenerate `k`-simplex on a vertex.
    pub fn constant(vertex: usize, k: usize) -> Self {
        Self {
            dim: 0,
            id: vertex,
            surj: vec![0; k + 1],
        }
    }

    pub fn degree(&self) -> usize {
        self.surj.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.surj.len() - 1 != self.dim
    }
}

#[derive(Debug, Clone, Default)]
pub struct SimplicialBuilder {
    // per dimension: (name, faces d_0..d_k)
    simplices: Vec<Vec<(String, Vec<Elem>)>>,
}

impl SimplicialBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, dim: usize, name: String, faces: Vec<Elem>) -> Elem {
        if self.simplices.len() <= dim {
            self.simplices.resize(dim + 1, Vec::new());
        }
        self.simplices[dim].push((name, faces));
        Elem::nondegenerate(dim, self.simplices[dim].len() - 1)
    }

    pub fn vertex(&mut self, name: impl Into<String>) -> Elem {
        self.push(0, name.into(), Vec::new())
    }

    /// An edge with `d₁ = source`, `d₀ = target`.
    pub fn edge(&mut self, name: impl Into<String>, source: &Elem, target: &Elem) -> Elem {
        self.push(1, name.into(), vec![target.clone(), source.clone()])
    }

    /// A nondegenerate simplex of dimension `faces.len() - 1` with the given faces `d₀, d₁, …`.
    pub fn simplex(&mut self, name: impl Into<String>, faces: Vec<Elem>) -> Elem {
        let dim = faces.len() - 1;
        self.push(dim, name.into(), faces)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.simplices.get(dim).map_or(0, Vec::len)
    }

    // x·φ for x nondegenerate of dimension j and φ: [m] → [j].
    fn act(&self, x: &Elem, phi: &[usize]) -> Elem {
        let composite: Vec<usize> = phi.iter().map(|&i| x.surj[i]).collect();
        let j = x.dim;
        match (0..=j).find(|v| !composite.contains(v)) {
            None => Elem {
                dim: j,
                id: x.id,
                surj: composite,
            },
            Some(a) => {
                // φ = δ^a ∘ φ'
                let rest: Vec<usize> = composite.iter().map(|&v| if v < a { v } else { v - 1 }).collect();
                let face = &self.simplices[j][x.id].1[a];
                self.act(face, &rest)
            }
        }
    }

    pub fn build(&self, site: &DeltaSite) -> Result<SimplicialSet> {
        if self.simplices.len() > site.n + 1 {
            return Err(Error::CapExceeded {
                what: "simplex dimension",
                value: self.simplices.len() - 1,
                cap: site.n,
            });
        }
        for (dim, list) in self.simplices.iter().enumerate() {
            for (name, faces) in list {
                let bad = faces.len() != if dim == 0 { 0 } else { dim + 1 }
                    || faces
                        .iter()
                        .any(|f| f.degree() + 1 != dim || f.id >= self.count(f.dim));
                if bad {
                    return Err(Error::Presheaf(format!("simplex `{name}` has ill-typed faces")));
                }
            }
        }
        let mut elements: Vec<Vec<Elem>> = Vec::new();
        for k in 0..=site.n {
            let mut es = Vec::new();
            for j in 0..=k.min(self.simplices.len().saturating_sub(1)) {
                let surjs: Vec<Vec<usize>> = monotone_maps(k, j)
                    .into_iter()
                    .filter(|m| m[0] == 0 && m.last() == Some(&j) && m.windows(2).all(|w| w[1] - w[0] <= 1))
                    .collect();
                for id in 0..self.count(j) {
                    for s in &surjs {
                        es.push(Elem {
                            dim: j,
                            id,
                            surj: s.clone(),
                        });
                    }
                }
            }
            elements.push(es);
        }
        let index: Vec<HashMap<Elem, usize>> = elements
            .iter()
            .map(|es| es.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect())
            .collect();
        let cat = site.cat.clone();
        let sizes = elements.iter().map(Vec::len).collect();
        let action: Vec<Vec<u32>> = cat
            .morphisms()
            .map(|u| {
                let (m, k) = (cat.dom(u), cat.cod(u));
                let theta = site.values(u);
                elements[k]
                    .iter()
                    .map(|e| {
                        let phi: Vec<usize> = theta.iter().map(|&i| e.surj[i]).collect();
                        let nd = Elem::nondegenerate(e.dim, e.id);
                        index[m][&self.act(&nd, &phi)] as u32
                    })
                    .collect()
            })
            .collect();
        // Faces that violate the simplicial identities surface as a functoriality error.
        let presheaf = Presheaf::new(cat, sizes, action)?;
        let names = elements
            .iter()
            .map(|es| {
                es.iter()
                    .map(|e| {
                        let base = &self.simplices[e.dim][e.id].0;
                        if e.is_degenerate() {
                            let s: Vec<String> = e.surj.iter().map(|v| v.to_string()).collect();
                            format!("{base}@{}", s.join(","))
                        } else {
                            base.clone()
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(SimplicialSet {
            presheaf: presheaf.with_names(names)?,
            elements,
            index,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SimplicialSet {
    pub presheaf: Presheaf,
    pub elements: Vec<Vec<Elem>>,
    index: Vec<HashMap<Elem, usize>>,
}

impl SimplicialSet {
    pub fn element(&self, e: &Elem) -> usize {
        self.index[e.degree()][e]
    }
}

/// Whether `x ∈ X[k]` is degenerate, i.e. `x = (x·δ)·σ` for some codegeneracy.
pub fn degeneracy_witness(site: &DeltaSite, x: &Presheaf, k: usize, e: usize) -> Option<usize> {
    (0..k).find(|&j| {
        let s = site.degeneracy(k - 1, j);
        let d = site.face(k, j);
        x.act(site.cat.comp(d, s), e) == e
    })
}

/// `N(ℤ/n)` on `site`; a `k`-simplex is `(g₁, …, g_k)` encoded base `n`, `g₁` most significant.
pub fn cyclic_nerve(site: &DeltaSite, n: usize) -> Presheaf {
    let cat = &site.cat;
    let sizes: Vec<usize> = cat.objects().map(|k| n.pow(k as u32)).collect();
    let decode = |k: usize, mut e: usize| {
        let mut g = vec![0; k];
        for i in (0..k).rev() {
            g[i] = e % n;
            e /= n;
        }
        g
    };
    Presheaf::from_fn(cat.clone(), sizes, |u, e| {
        let g = decode(cat.cod(u), e);
        let theta = site.values(u);
        // h_i = g_{θ(i-1)+1} + … + g_{θ(i)}
        (1..theta.len()).fold(0, |acc, i| {
            let h: usize = (theta[i - 1]..theta[i]).map(|j| g[j]).sum();
            acc * n + h % n
        })
    })
}

/// The horn `Λᵏ[m] ⊆ y[m]` with its inclusion: maps whose image misses some vertex other than `k`.
pub fn horn(site: &DeltaSite, m: usize, k: usize) -> (Presheaf, NatTrans) {
    let y = Presheaf::yoneda(&site.cat, m);
    let member: Vec<Vec<bool>> = site
        .cat
        .objects()
        .map(|j| {
            site.cat
                .hom(j, m)
                .iter()
                .map(|&f| {
                    let img = site.values(f);
                    (0..=m).any(|v| v != k && !img.contains(&v))
                })
                .collect()
        })
        .collect();
    y.restrict_to(&member)
}

/// The path `0 → 1 → ⋯ → n` of `n` nondegenerate edges.
pub fn path(site: &DeltaSite, n: usize) -> Result<SimplicialSet> {
    let mut b = SimplicialBuilder::new();
    let vs: Vec<Elem> = (0..=n).map(|i| b.vertex(format!("v{i}"))).collect();
    for i in 0..n {
        b.edge(format!("e{i}"), &vs[i], &vs[i + 1]);
    }
    b.build(site)
}

/// A random simplicial set with one to three vertices and at most three
/// nondegenerate simplices in each higher dimension ≤ 2.
pub fn random_simplicial_set(site: &DeltaSite, rng: &mut impl Rng) -> SimplicialSet {
    let mut b = SimplicialBuilder::new();
    let nv = rng.random_range(1..=3);
    let vs: Vec<Elem> = (0..nv).map(|i| b.vertex(format!("v{i}"))).collect();
    let mut edges: Vec<(Elem, usize, usize)> = vs
        .iter()
        .enumerate()
        .map(|(i, _)| (Elem::constant(i, 1), i, i))
        .collect();
    if site.n >= 1 {
        for i in 0..rng.random_range(0..=3) {
            let (s, t) = (rng.random_range(0..nv), rng.random_range(0..nv));
            let e = b.edge(format!("e{i}"), &vs[s], &vs[t]);
            edges.push((e, s, t));
        }
    }
    if site.n >= 2 {
        let mut made = 0;
        for _ in 0..rng.random_range(0..=3) * 4 {
            if made == 3 {
                break;
            }
            let v: Vec<usize> = (0..3).map(|_| rng.random_range(0..nv)).collect();
            // d₀ spans v1→v2, d₁ spans v0→v2, d₂ spans v0→v1
            let mut faces = Vec::new();
            for (s, t) in [(v[1], v[2]), (v[0], v[2]), (v[0], v[1])] {
                let options: Vec<&Elem> = edges
                    .iter()
                    .filter(|(_, a, b)| (*a, *b) == (s, t))
                    .map(|(e, _, _)| e)
                    .collect();
                if options.is_empty() {
                    break;
                }
                faces.push(options[rng.random_range(0..options.len())].clone());
            }
            if faces.len() == 3 {
                b.simplex(format!("t{made}"), faces);
                made += 1;
            }
        }
    }
    b.build(site).expect("faces chosen compatibly")
}

/// A random reflexive graph (over `delta1`) with one to four vertices and up to four edges.
pub fn random_graph(site: &DeltaSite, rng: &mut impl Rng) -> SimplicialSet {
    let mut b = SimplicialBuilder::new();
    let nv = rng.random_range(1..=4);
    let vs: Vec<Elem> = (0..nv).map(|i| b.vertex(format!("v{i}"))).collect();
    for i in 0..rng.random_range(0..=4) {
        let (s, t) = (rng.random_range(0..nv), rng.random_range(0..nv));
        b.edge(format!("e{i}"), &vs[s], &vs[t]);
    }
    b.build(site).expect("graph")
}

#[cfg(test)]
mod tests {
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    use super::*;

    #[test]
    fn path_counts() {
        let d = DeltaSite::new(2).unwrap();
        let p = path(&d, 3).unwrap();
        // degree 1: 3 edges + 4 degenerate; degree 2: 3·2 + 4 degenerate
        assert_eq!(p.presheaf.sizes(), &[4, 7, 10]);
        let e0 = p.element(&Elem::nondegenerate(1, 0));
        let src = p.presheaf.act(d.face(1, 1), e0);
        let tgt = p.presheaf.act(d.face(1, 0), e0);
        assert_eq!((src, tgt), (0, 1));
    }

    #[test]
    fn cyclic_nerve_is_functorial_and_sized() {
        let d = DeltaSite::new(3).unwrap();
        let x = cyclic_nerve(&d, 3);
        assert_eq!(x.sizes(), &[1, 3, 9, 27]);
        let action = d.cat.morphisms().map(|u| x.action_table(u).to_vec()).collect();
        Presheaf::new(d.cat.clone(), x.sizes().to_vec(), action).unwrap();
    }

    #[test]
    fn horn_sizes() {
        let d = DeltaSite::new(2).unwrap();
        let (h, incl) = horn(&d, 2, 0);
        // three vertices, edges missing the 1–2 edge
        assert_eq!(h.size(0), 3);
        incl.check(&h, &Presheaf::yoneda(&d.cat, 2)).unwrap();
        assert!(h.size(2) < d.cat.hom(2, 2).len());
    }

    #[test]
    fn bad_faces_are_rejected() {
        let d = DeltaSite::new(2).unwrap();
        let mut b = SimplicialBuilder::new();
        let v = b.vertex("a");
        let w = b.vertex("b");
        let e = b.edge("e", &v, &w);
        // d₂ = e ends at b, so d₀ must start at b; the loop on a does not
        let l = b.edge("l", &v, &v);
        b.simplex("t", vec![l, e.clone(), e]);
        assert!(b.build(&d).is_err());
    }

    #[test]
    fn random_sets_are_valid() {
        let d = DeltaSite::new(2).unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..50 {
            let s = random_simplicial_set(&d, &mut rng);
            assert!(s.presheaf.size(0) >= 1);
        }
    }
}
