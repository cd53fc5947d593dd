use std::collections::HashMap;
use std::sync::Arc;

use super::{NatTrans, Presheaf};
use crate::budget::Budget;
use crate::error::Result;
use crate::fincat::{FinCat, ObjectId};

/// The subobject classifier: `Ω(c)` is the set of sieves on `c`.
#[derive(Debug, Clone)]
pub struct Omega {
    pub obj: Presheaf,
    /// `sieves[c][i][k]`: whether `arrows_into(c)[k]` belongs to sieve `i`.
    pub sieves: Vec<Vec<Vec<bool>>>,
    /// `true: 1 → Ω`, picking the maximal sieves.
    pub truth: NatTrans,
    index: Vec<HashMap<Vec<bool>, usize>>,
}

impl Omega {
    pub fn lookup(&self, c: ObjectId, sieve: &[bool]) -> Option<usize> {
        self.index[c].get(sieve).copied()
    }
}

// Downward-closed families over a finite relation: `below[i]` must be kept
// whenever `i` is, `above[i]` dropped whenever `i` is. Visits all of them.
fn closed_subsets(
    below: &[Vec<usize>],
    above: &[Vec<usize>],
    budget: &Budget,
    out: &mut Vec<Vec<bool>>,
) -> Result<()> {
    fn go(
        i: usize,
        state: &mut Vec<Option<bool>>,
        below: &[Vec<usize>],
        above: &[Vec<usize>],
        budget: &Budget,
        out: &mut Vec<Vec<bool>>,
    ) -> Result<()> {
        if i == state.len() {
            out.push(state.iter().map(|s| s.unwrap()).collect());
            return Ok(());
        }
        if state[i].is_some() {
            return go(i + 1, state, below, above, budget, out);
        }
        for choice in [false, true] {
            budget.charge(1)?;
            let saved = state.clone();
            let forced = if choice { &below[i] } else { &above[i] };
            let ok = forced.iter().all(|&j| match state[j] {
                Some(v) => v == choice,
                None => {
                    state[j] = Some(choice);
                    true
                }
            });
            state[i] = Some(choice);
            if ok {
                go(i + 1, state, below, above, budget, out)?;
            }
            *state = saved;
        }
        Ok(())
    }
    go(0, &mut vec![None; below.len()], below, above, budget, out)
}

fn sieves_on(site: &FinCat, c: ObjectId, budget: &Budget) -> Result<Vec<Vec<bool>>> {
    let into = site.arrows_into(c);
    let pos: HashMap<usize, usize> = into.iter().enumerate().map(|(k, &h)| (h, k)).collect();
    let mut below = vec![Vec::new(); into.len()];
    let mut above = vec![Vec::new(); into.len()];
    for (k, &h) in into.iter().enumerate() {
        for &v in site.arrows_into(site.dom(h)) {
            let j = pos[&site.comp(h, v)];
            below[k].push(j);
            above[j].push(k);
        }
    }
    let mut out = Vec::new();
    closed_subsets(&below, &above, budget, &mut out)?;
    out.sort();
    Ok(out)
}

pub fn subobject_classifier(site: &Arc<FinCat>, budget: &Budget) -> Result<Omega> {
    let sieves: Vec<Vec<Vec<bool>>> = site
        .objects()
        .map(|c| sieves_on(site, c, budget))
        .collect::<Result<_>>()?;
    let index: Vec<HashMap<Vec<bool>, usize>> = sieves
        .iter()
        .map(|s| s.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect())
        .collect();
    let sizes = sieves.iter().map(Vec::len).collect();
    // u^*S = {h | u∘h ∈ S}
    let obj = Presheaf::from_fn(site.clone(), sizes, |u, i| {
        let (d, c) = (site.dom(u), site.cod(u));
        let s = &sieves[c][i];
        let into_c = site.arrows_into(c);
        let pulled: Vec<bool> = site
            .arrows_into(d)
            .iter()
            .map(|&h| {
                let uh = site.comp(u, h);
                s[into_c.iter().position(|&k| k == uh).unwrap()]
            })
            .collect();
        index[d][&pulled]
    });
    let one = Presheaf::terminal(site);
    let truth = NatTrans::from_fn(&one, |c, _| index[c][&vec![true; site.arrows_into(c).len()]]);
    Ok(Omega {
        obj,
        sieves,
        truth,
        index,
    })
}

/// `χ_A: X → Ω` for the subpresheaf `A` given by membership flags.
pub fn characteristic_map(x: &Presheaf, member: &[Vec<bool>], omega: &Omega) -> NatTrans {
    let site = x.site();
    NatTrans::from_fn(x, |c, e| {
        let sieve: Vec<bool> = site
            .arrows_into(c)
            .iter()
            .map(|&h| member[site.dom(h)][x.act(h, e)])
            .collect();
        omega.lookup(c, &sieve).expect("sieve")
    })
}

/// All subpresheaves of `x`, as membership flags.
pub fn subpresheaves(x: &Presheaf, budget: &Budget) -> Result<Vec<Vec<Vec<bool>>>> {
    let site = x.site();
    let offsets = x.offsets();
    let n = x.total_size();
    let mut below = vec![Vec::new(); n];
    let mut above = vec![Vec::new(); n];
    for u in site.morphisms() {
        let (d, c) = (site.dom(u), site.cod(u));
        for e in 0..x.size(c) {
            let (i, j) = (offsets[c] + e, offsets[d] + x.act(u, e));
            below[i].push(j);
            above[j].push(i);
        }
    }
    let mut flat = Vec::new();
    closed_subsets(&below, &above, budget, &mut flat)?;
    Ok(flat
        .into_iter()
        .map(|f| {
            site.objects()
                .map(|c| f[offsets[c]..offsets[c] + x.size(c)].to_vec())
                .collect()
        })
        .collect())
}
