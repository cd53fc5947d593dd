use std::ops::ControlFlow;

use super::Presheaf;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::ObjectId;

/// Components of a natural transformation, `components[c][x] = φ_c(x)`.
///
/// Source and target presheaves are passed alongside where they matter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NatTrans {
    pub components: Vec<Vec<u32>>,
}

impl NatTrans {
    pub fn new(components: Vec<Vec<u32>>) -> Self {
        Self { components }
    }

    pub fn from_fn(x: &Presheaf, mut f: impl FnMut(ObjectId, usize) -> usize) -> Self {
        Self::new(
            x.site()
                .objects()
                .map(|c| (0..x.size(c)).map(|e| f(c, e) as u32).collect())
                .collect(),
        )
    }

    pub fn identity(x: &Presheaf) -> Self {
        Self::from_fn(x, |_, e| e)
    }

    #[inline]
    pub fn at(&self, c: ObjectId, x: usize) -> usize {
        self.components[c][x] as usize
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &NatTrans) -> NatTrans {
        NatTrans::new(
            f.components
                .iter()
                .enumerate()
                .map(|(c, comp)| comp.iter().map(|&x| self.components[c][x as usize]).collect())
                .collect(),
        )
    }

    /// Checks that the tables type-check against `x → y` and every naturality square commutes.
    pub fn check(&self, x: &Presheaf, y: &Presheaf) -> Result<()> {
        x.same_site(y)?;
        let site = x.site();
        if self.components.len() != site.object_count() {
            return Err(Error::NatTrans("wrong number of components".into()));
        }
        for c in site.objects() {
            if self.components[c].len() != x.size(c)
                || self.components[c].iter().any(|&v| v as usize >= y.size(c))
            {
                return Err(Error::NatTrans(format!(
                    "component at `{}` is not a function X(c) → Y(c)",
                    site.object_name(c)
                )));
            }
        }
        for u in site.morphisms() {
            let (d, c) = (site.dom(u), site.cod(u));
            for e in 0..x.size(c) {
                if self.at(d, x.act(u, e)) != y.act(u, self.at(c, e)) {
                    return Err(Error::NatTrans(format!(
                        "naturality fails at `{}` on element {e}",
                        site.morphism_name(u)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().all(|comp| {
            let mut seen = std::collections::HashSet::new();
            comp.iter().all(|v| seen.insert(*v))
        })
    }

    pub fn is_surjective(&self, y: &Presheaf) -> bool {
        self.components.iter().enumerate().all(|(c, comp)| {
            let mut hit = vec![false; y.size(c)];
            comp.iter().for_each(|&v| hit[v as usize] = true);
            hit.into_iter().all(|h| h)
        })
    }

    pub fn is_iso(&self, y: &Presheaf) -> bool {
        self.is_injective() && self.is_surjective(y)
    }
}

const UNSET: u32 = u32::MAX;

struct Search<'a, F> {
    x: &'a Presheaf,
    y: &'a Presheaf,
    budget: &'a Budget,
    vars: Vec<(ObjectId, usize)>,
    assign: Vec<Vec<u32>>,
    trail: Vec<(ObjectId, usize)>,
    visit: F,
}

impl<F: FnMut(&[Vec<u32>]) -> ControlFlow<()>> Search<'_, F> {
    // Assigns φ_c(e) = v and everything it forces; false on a naturality clash.
    fn assign(&mut self, c: ObjectId, e: usize, v: usize) -> bool {
        let site = self.x.site();
        for &u in site.arrows_into(c) {
            let d = site.dom(u);
            let xe = self.x.act(u, e);
            let ye = self.y.act(u, v) as u32;
            let slot = &mut self.assign[d][xe];
            if *slot == UNSET {
                *slot = ye;
                self.trail.push((d, xe));
            } else if *slot != ye {
                return false;
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for (d, e) in self.trail.drain(mark..) {
            self.assign[d][e] = UNSET;
        }
    }

    fn run(&mut self, i: usize) -> Result<ControlFlow<()>> {
        let Some(&(c, e)) = self.vars.get(i) else {
            return Ok((self.visit)(&self.assign));
        };
        if self.assign[c][e] != UNSET {
            return self.run(i + 1);
        }
        for v in 0..self.y.size(c) {
            self.budget.charge(1)?;
            let mark = self.trail.len();
            if self.assign(c, e, v) && self.run(i + 1)?.is_break() {
                self.undo(mark);
                return Ok(ControlFlow::Break(()));
            }
            self.undo(mark);
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Visits every natural transformation `x → y` extending `fixed`
/// (`fixed[c][e] = u32::MAX` leaves `φ_c(e)` free), in search order.
/// Each candidate value tried costs one budget unit.
pub fn for_each_nat_trans(
    x: &Presheaf,
    y: &Presheaf,
    fixed: Option<&[Vec<u32>]>,
    budget: &Budget,
    visit: impl FnMut(&[Vec<u32>]) -> ControlFlow<()>,
) -> Result<()> {
    x.same_site(y)?;
    let site = x.site();
    // Objects with many incoming arrows constrain the most elements below them.
    let mut order: Vec<ObjectId> = site.objects().collect();
    order.sort_by_key(|&c| (std::cmp::Reverse(site.arrows_into(c).len()), c));
    let vars = order
        .iter()
        .flat_map(|&c| (0..x.size(c)).map(move |e| (c, e)))
        .collect();
    let mut search = Search {
        x,
        y,
        budget,
        vars,
        assign: site.objects().map(|c| vec![UNSET; x.size(c)]).collect(),
        trail: Vec::new(),
        visit,
    };
    if let Some(fixed) = fixed {
        for c in site.objects() {
            for e in 0..x.size(c) {
                let v = fixed[c][e];
                if v == UNSET {
                    continue;
                }
                match search.assign[c][e] {
                    UNSET => {}
                    w if w != v => return Ok(()),
                    _ => {}
                }
                search.assign[c][e] = v;
                if !search.assign(c, e, v as usize) {
                    return Ok(());
                }
            }
        }
        search.trail.clear();
    }
    let _ = search.run(0)?;
    Ok(())
}

/// All natural transformations `x → y`, sorted by component table.
pub fn nat_transformations(x: &Presheaf, y: &Presheaf, budget: &Budget) -> Result<Vec<NatTrans>> {
    let mut out = Vec::new();
    for_each_nat_trans(x, y, None, budget, |a| {
        out.push(NatTrans::new(a.to_vec()));
        ControlFlow::Continue(())
    })?;
    out.sort_unstable();
    Ok(out)
}

pub fn count_nat_transformations(x: &Presheaf, y: &Presheaf, budget: &Budget) -> Result<usize> {
    let mut n = 0;
    for_each_nat_trans(x, y, None, budget, |_| {
        n += 1;
        ControlFlow::Continue(())
    })?;
    Ok(n)
}
