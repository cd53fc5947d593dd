//! Seeded generators of small presheaves.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;

use super::{Presheaf, UnionFind};
use crate::fincat::FinCat;

/// A random presheaf with at most `cap` elements per object (`cap ≥ 1`).
///
/// Starts from a coproduct of one to three random representables and merges
/// random pairs of elements, closing each merge under the action, until every
/// section fits. Every finite presheaf arises as such a quotient.
pub fn random_presheaf(site: &Arc<FinCat>, rng: &mut impl Rng, cap: usize) -> Presheaf {
    assert!(cap >= 1);
    let gens: Vec<usize> = (0..rng.random_range(1..=3))
        .map(|_| rng.random_range(0..site.object_count()))
        .collect();
    // elements of object d: (generator, position in hom(d, c_gen))
    let mut elems: Vec<Vec<(usize, usize)>> = site
        .objects()
        .map(|d| {
            gens.iter()
                .enumerate()
                .flat_map(|(g, &c)| (0..site.hom(d, c).len()).map(move |h| (g, h)))
                .collect()
        })
        .collect();
    let index: Vec<std::collections::HashMap<(usize, usize), usize>> = elems
        .iter()
        .map(|es| es.iter().enumerate().map(|(i, &e)| (e, i)).collect())
        .collect();
    let sizes: Vec<usize> = elems.iter().map(Vec::len).collect();
    let base = Presheaf::from_fn(site.clone(), sizes.clone(), |u, i| {
        let (g, h) = elems[site.cod(u)][i];
        let hm = site.hom(site.cod(u), gens[g])[h];
        index[site.dom(u)][&(g, site.hom_position(site.comp(hm, u)))]
    });
    elems.clear();

    let mut uf: Vec<UnionFind> = sizes.iter().map(|&n| UnionFind::new(n)).collect();
    let mut classes = sizes.clone();
    let merge = |c: usize, a: usize, b: usize, uf: &mut [UnionFind], classes: &mut [usize]| {
        let mut queue = vec![(c, a, b)];
        while let Some((c, a, b)) = queue.pop() {
            if uf[c].union(a, b) {
                classes[c] -= 1;
                for &u in site.arrows_into(c) {
                    queue.push((site.dom(u), base.act(u, a), base.act(u, b)));
                }
            }
        }
    };
    // A few optional merges for variety, then forced ones until the cap holds.
    for _ in 0..rng.random_range(0..=2) {
        let c = rng.random_range(0..site.object_count());
        if sizes[c] >= 2 {
            let (a, b) = (rng.random_range(0..sizes[c]), rng.random_range(0..sizes[c]));
            merge(c, a, b, &mut uf, &mut classes);
        }
    }
    loop {
        let over: Vec<usize> = site.objects().filter(|&c| classes[c] > cap).collect();
        let Some(&c) = over.choose(rng) else { break };
        let a = rng.random_range(0..sizes[c]);
        let b = rng.random_range(0..sizes[c]);
        merge(c, a, b, &mut uf, &mut classes);
    }
    let labels: Vec<Vec<usize>> = uf.iter_mut().map(|u| u.labels().0).collect();
    base.quotient(&labels).0
}
