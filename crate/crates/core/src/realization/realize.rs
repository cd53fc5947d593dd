use num_traits::{One, Zero};
use serde::Serialize;

use super::geometry::joint_simplex_preimage;
use super::{simplex_act, RationalPoint};
use crate::error::{Error, Result};
use crate::fincat::standard::DeltaSite;
use crate::fincat::MorphismId;
use crate::presheaf::simplicial::degeneracy_witness;
use crate::presheaf::Presheaf;

/// A pair `(x, a)` with `x ∈ P[dim]` and `a ∈ Δ^dim`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Canonical {
    pub dim: usize,
    pub element: usize,
    pub point: RationalPoint,
}

/// One span `k ← d → k'` with `c ∈ Δ^d` relating consecutive pairs.
#[derive(Debug, Clone, Serialize)]
pub struct SpanStep {
    pub from: Canonical,
    pub to: Canonical,
    #[serde(skip)]
    pub u: MorphismId,
    #[serde(skip)]
    pub u_prime: MorphismId,
    pub c: RationalPoint,
}

/// Reduces `(x, a)` to a nondegenerate simplex and an interior point.
///
/// Boundary points move to the first face they lie on (`t₁ = 0` is face 0,
/// `tᵢ = tᵢ₊₁` is face `i`, `tₖ = 1` is face `k`); degenerate simplices are
/// replaced by the face that the first witnessing degeneracy splits.
pub fn realize_point(
    site: &DeltaSite,
    x: &Presheaf,
    dim: usize,
    element: usize,
    point: &RationalPoint,
) -> Result<(Canonical, Vec<SpanStep>)> {
    if dim > site.n || point.dim() != dim {
        return Err(Error::MalformedPoint(format!("{point} is not a point of Δ^{dim}")));
    }
    point.check_simplex()?;
    if element >= x.size(dim) {
        return Err(Error::Invalid(format!("no element {element} in degree {dim}")));
    }
    let cat = &site.cat;
    let mut cur = Canonical {
        dim,
        element,
        point: point.clone(),
    };
    let mut trace = Vec::new();
    loop {
        let k = cur.dim;
        let t = &cur.point.0;
        let face = (0..=k).filter(|_| k > 0).find(|&i| match i {
            0 => t[0].is_zero(),
            i if i == k => t[k - 1].is_one(),
            i => t[i - 1] == t[i],
        });
        let step = if let Some(i) = face {
            let mut a = t.clone();
            a.remove(if i == k { k - 1 } else { i });
            let a = RationalPoint(a);
            let d = site.face(k, i);
            debug_assert_eq!(simplex_act(site.values(d), k, &a), cur.point);
            let next = Canonical {
                dim: k - 1,
                element: x.act(d, cur.element),
                point: a.clone(),
            };
            (next, d, cat.identity(k - 1), a)
        } else if let Some(j) = (k > 0).then(|| degeneracy_witness(site, x, k, cur.element)).flatten() {
            let s = site.degeneracy(k - 1, j);
            let next = Canonical {
                dim: k - 1,
                element: x.act(site.face(k, j), cur.element),
                point: simplex_act(site.values(s), k - 1, &cur.point),
            };
            (next, cat.identity(k), s, cur.point.clone())
        } else {
            return Ok((cur, trace));
        };
        let (next, u, u_prime, c) = step;
        trace.push(SpanStep {
            from: cur,
            to: next.clone(),
            u,
            u_prime,
            c,
        });
        cur = next;
    }
}

/// Whether a single span relates `p` and `q`: some `u: d → k`, `u': d → k'`
/// and `c ∈ Δ^d` with `A(u)c = a`, `A(u')c = a'` and `x·u = x'·u'`.
pub fn span_related(site: &DeltaSite, x: &Presheaf, p: &Canonical, q: &Canonical) -> bool {
    let cat = &site.cat;
    cat.objects().any(|d| {
        cat.hom(d, p.dim).iter().any(|&u| {
            cat.hom(d, q.dim).iter().any(|&v| {
                x.act(u, p.element) == x.act(v, q.element)
                    && joint_simplex_preimage(d, &[(site.values(u), &p.point), (site.values(v), &q.point)])
                        .is_some()
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::simplicial::{path, Elem};
    use crate::realization::interior_membership;
    use crate::realization::FilteringSpec;

    fn p(s: &str) -> RationalPoint {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_forms_on_an_edge() {
        let d = DeltaSite::new(2).unwrap();
        let s = path(&d, 1).unwrap();
        let x = &s.presheaf;
        let e = s.element(&Elem::nondegenerate(1, 0));
        let (c, trace) = realize_point(&d, x, 1, e, &p("1/2")).unwrap();
        assert_eq!((c.dim, c.element), (1, e));
        assert!(trace.is_empty());
        // the point (1) is the source, d₁ = δ¹
        let (c, _) = realize_point(&d, x, 1, e, &p("1")).unwrap();
        assert_eq!(c.dim, 0);
        assert_eq!(c.element, x.act(d.face(1, 1), e));
        assert_eq!(x.element_name(0, c.element), "v0");
        // a degenerate edge at v collapses to v
        let v = s.element(&Elem::nondegenerate(0, 0));
        let sv = x.act(d.degeneracy(0, 0), v);
        let (c, trace) = realize_point(&d, x, 1, sv, &p("1/2")).unwrap();
        assert_eq!((c.dim, c.element, c.point.dim()), (0, v, 0));
        assert!(span_related(&d, x, &trace[0].from, &c));
    }

    #[test]
    fn results_are_canonical_and_steps_are_spans() {
        let d = DeltaSite::new(2).unwrap();
        let s = path(&d, 2).unwrap();
        let x = &s.presheaf;
        let spec = FilteringSpec::Simplex(d.clone());
        for k in 0..=2 {
            for e in 0..x.size(k) {
                for a in super::super::grid_points(k, 3, true) {
                    let (c, trace) = realize_point(&d, x, k, e, &a).unwrap();
                    assert!(interior_membership(&spec, c.dim, &c.point).unwrap());
                    assert!(degeneracy_witness(&d, x, c.dim, c.element).is_none());
                    for step in &trace {
                        assert!(span_related(&d, x, &step.from, &step.to));
                    }
                    let (again, t2) = realize_point(&d, x, c.dim, c.element, &c.point).unwrap();
                    assert_eq!(again, c);
                    assert!(t2.is_empty());
                }
            }
        }
    }

    #[test]
    fn rejects_bad_points() {
        let d = DeltaSite::new(2).unwrap();
        let y = Presheaf::yoneda(&d.cat, 2);
        assert!(realize_point(&d, &y, 2, 0, &p("2/3,1/3")).is_err());
        assert!(realize_point(&d, &y, 2, 0, &p("1/3")).is_err());
    }
}
