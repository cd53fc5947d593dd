use num_rational::Rational64;
use num_traits::{One, Zero};

use super::RationalPoint;
use crate::fincat::standard::CubeComponent;

// Coordinate `i` of a point of Δʲ extended by t₀ = 0 and t_{j+1} = 1.
fn coord(t: &RationalPoint, i: usize) -> Rational64 {
    match i {
        0 => Rational64::zero(),
        i if i > t.dim() => Rational64::one(),
        i => t.0[i - 1],
    }
}

// #{a : u(a) < b}
fn below(values: &[usize], b: usize) -> usize {
    values.iter().filter(|&&v| v < b).count()
}

/// `A(u): Δʲ → Δᵏ` for `u: [j] → [k]` given by its values; `s_b = t_{#{a : u(a) < b}}`.
pub fn simplex_act(values: &[usize], k: usize, t: &RationalPoint) -> RationalPoint {
    debug_assert_eq!(values.len(), t.dim() + 1);
    RationalPoint((1..=k).map(|b| coord(t, below(values, b))).collect())
}

/// Some `t ∈ Δʲ` with `A(u)(t) = x`, if one exists.
pub fn simplex_preimage(values: &[usize], j: usize, x: &RationalPoint) -> Option<RationalPoint> {
    joint_simplex_preimage(j, &[(values, x)])
}

/// Some `t ∈ Δʲ` with `A(uᵢ)(t) = xᵢ` for every pair given.
pub fn joint_simplex_preimage(j: usize, constraints: &[(&[usize], &RationalPoint)]) -> Option<RationalPoint> {
    // slots 0 and j+1 hold the fixed endpoints
    let mut slot: Vec<Option<Rational64>> = vec![None; j + 2];
    slot[0] = Some(Rational64::zero());
    slot[j + 1] = Some(Rational64::one());
    for (values, x) in constraints {
        for (b, xb) in (1..).zip(&x.0) {
            let m = below(values, b);
            match slot[m] {
                Some(v) if v != *xb => return None,
                _ => slot[m] = Some(*xb),
            }
        }
    }
    let mut last = Rational64::zero();
    let mut t = Vec::with_capacity(j);
    for (i, s) in slot.iter().enumerate() {
        let v = s.unwrap_or(last);
        if v < last {
            return None;
        }
        last = v;
        if (1..=j).contains(&i) {
            t.push(v);
        }
    }
    Some(RationalPoint(t))
}

/// `A(f)(y) = (f_t(y))_t` for a cube map.
pub fn cube_act(comps: &[CubeComponent], y: &RationalPoint) -> RationalPoint {
    RationalPoint(
        comps
            .iter()
            .map(|c| match *c {
                CubeComponent::Proj(s) => y.0[s],
                CubeComponent::Zero => Rational64::zero(),
                CubeComponent::One => Rational64::one(),
            })
            .collect(),
    )
}

pub fn cube_preimage(comps: &[CubeComponent], s: usize, x: &RationalPoint) -> Option<RationalPoint> {
    let mut y: Vec<Option<Rational64>> = vec![None; s];
    for (c, xt) in comps.iter().zip(&x.0) {
        let ok = match *c {
            CubeComponent::Proj(i) => *y[i].get_or_insert(*xt) == *xt,
            CubeComponent::Zero => xt.is_zero(),
            CubeComponent::One => xt.is_one(),
        };
        if !ok {
            return None;
        }
    }
    Some(RationalPoint(y.into_iter().map(Option::unwrap_or_default).collect()))
}
