//! Filtering functors `A: 𝒞 → Set`: interiors, the surjectivity certificate,
//! the simplex retraction and canonical representatives of realized points.

mod geometry;
mod realize;
mod retraction;
mod tabular;

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::standard::{CubeSite, DeltaSite};
use crate::fincat::{FinCat, MorphismId, ObjectId};

pub use geometry::{cube_act, cube_preimage, joint_simplex_preimage, simplex_act, simplex_preimage};
pub use realize::{realize_point, span_related, Canonical, SpanStep};
pub use retraction::{simplex_retraction, Retraction};
pub use tabular::{FilteringCheck, TabularCarrier, TabularDoc};

/// A tuple of exact rationals in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint(pub Vec<Rational64>);

impl RationalPoint {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn in_unit_cube(&self) -> bool {
        self.0.iter().all(|t| *t >= Rational64::zero() && *t <= Rational64::one())
    }

    pub fn is_ordered(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// `0 ≤ t₁ ≤ ⋯ ≤ tₙ ≤ 1`.
    pub fn check_simplex(&self) -> Result<()> {
        if !self.in_unit_cube() {
            return Err(Error::MalformedPoint(format!("{self} has a coordinate outside [0,1]")));
        }
        if !self.is_ordered() {
            return Err(Error::MalformedPoint(format!("{self} is not increasing")));
        }
        Ok(())
    }

    pub fn check_cube(&self) -> Result<()> {
        if !self.in_unit_cube() {
            return Err(Error::MalformedPoint(format!("{self} has a coordinate outside [0,1]")));
        }
        Ok(())
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|t| t.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for RationalPoint {
    type Err = Error;

    /// Comma-separated fractions, e.g. `1/3,2/3`; the empty string is the point of `Δ⁰`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Self(Vec::new()));
        }
        s.split(',')
            .map(|part| {
                part.trim()
                    .parse::<Rational64>()
                    .map_err(|e| Error::MalformedPoint(format!("`{part}`: {e}")))
            })
            .collect::<Result<_>>()
            .map(Self)
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.0.iter().map(|t| t.to_string()).collect();
        s.serialize_str(&parts.join(","))
    }
}

/// The functor `A`: standard simplices or cubes, or an explicit finite table.
#[derive(Debug, Clone)]
pub enum FilteringSpec {
    Simplex(DeltaSite),
    Cube(CubeSite),
    Tabular(TabularCarrier),
}

impl FilteringSpec {
    pub fn site(&self) -> &FinCat {
        match self {
            Self::Simplex(d) => &d.cat,
            Self::Cube(c) => &c.cat,
            Self::Tabular(t) => t.site(),
        }
    }
}

/// Dimension of the simplex or cube sitting at `c`.
fn geometric_dim(spec: &FilteringSpec, c: ObjectId) -> usize {
    match spec {
        FilteringSpec::Simplex(_) | FilteringSpec::Cube(_) => c,
        FilteringSpec::Tabular(_) => unreachable!("tabular carriers have no geometry"),
    }
}

fn check_point(spec: &FilteringSpec, c: ObjectId, x: &RationalPoint) -> Result<()> {
    let n = geometric_dim(spec, c);
    if x.dim() != n {
        return Err(Error::MalformedPoint(format!("{x} has {} coordinates, expected {n}", x.dim())));
    }
    match spec {
        FilteringSpec::Simplex(_) => x.check_simplex(),
        _ => x.check_cube(),
    }
}

/// Closed-form interior test for geometric carriers.
pub fn interior_membership(spec: &FilteringSpec, c: ObjectId, x: &RationalPoint) -> Result<bool> {
    check_point(spec, c, x)?;
    let (zero, one) = (Rational64::zero(), Rational64::one());
    Ok(match spec {
        // 0 < t₁ < ⋯ < tₙ < 1
        FilteringSpec::Simplex(_) => {
            x.0.first().is_none_or(|t| *t > zero)
                && x.0.last().is_none_or(|t| *t < one)
                && x.0.windows(2).all(|w| w[0] < w[1])
        }
        // off the border and off the diagonals
        FilteringSpec::Cube(_) => {
            let mut sorted = x.0.clone();
            sorted.sort();
            x.0.iter().all(|t| *t != zero && *t != one) && sorted.windows(2).all(|w| w[0] != w[1])
        }
        FilteringSpec::Tabular(_) => {
            return Err(Error::Invalid("use the tabular interior test for tabular carriers".into()))
        }
    })
}

/// The interior by its definition: every morphism whose image contains `x` must be split epi.
/// Image membership is decided exactly over all morphisms into `c`.
pub fn brute_force_interior(spec: &FilteringSpec, c: ObjectId, x: &RationalPoint) -> Result<bool> {
    check_point(spec, c, x)?;
    let site = spec.site();
    Ok(site.objects().all(|d| {
        site.hom(d, c).iter().all(|&u| {
            let hit = match spec {
                FilteringSpec::Simplex(ds) => simplex_preimage(ds.values(u), d, x).is_some(),
                FilteringSpec::Cube(cs) => cube_preimage(cs.components(u), d, x).is_some(),
                FilteringSpec::Tabular(_) => unreachable!(),
            };
            !hit || site.is_split_epi(u)
        })
    }))
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateEntry {
    pub object: String,
    pub witness: Option<String>,
    pub status: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub certified: bool,
    pub entries: Vec<CertificateEntry>,
    pub failing_object: Option<String>,
    /// Set for tabular carriers: filtering is only checked on the finite data given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filtering: Option<FilteringCheck>,
}

/// `(1/(n+1), …, n/(n+1))`, interior for both simplices and cubes.
pub fn standard_witness(n: usize) -> RationalPoint {
    RationalPoint(
        (1..=n)
            .map(|i| Rational64::new(i as i64, n as i64 + 1))
            .collect(),
    )
}

/// Nonempty interiors at every object certify that the induced geometric morphism is surjective.
pub fn surjectivity_certificate(spec: &FilteringSpec) -> Result<Certificate> {
    let site = spec.site();
    let mut entries = Vec::new();
    for c in site.objects() {
        let witness = match spec {
            FilteringSpec::Tabular(t) => t.interior(c).first().map(|&e| t.element_name(c, e)),
            _ => {
                let w = standard_witness(geometric_dim(spec, c));
                interior_membership(spec, c, &w)?.then(|| w.to_string())
            }
        };
        entries.push(CertificateEntry {
            object: site.object_name(c).into(),
            status: if witness.is_some() { "interior" } else { "empty_interior" },
            witness,
        });
    }
    let failing_object = entries.iter().find(|e| e.witness.is_none()).map(|e| e.object.clone());
    Ok(Certificate {
        certified: failing_object.is_none(),
        entries,
        failing_object,
        filtering: match spec {
            FilteringSpec::Tabular(t) => Some(t.check_filtering()),
            _ => None,
        },
    })
}

/// `{p/q : 0 ≤ p ≤ q ≤ max_den}`, sorted.
pub fn farey(max_den: usize) -> Vec<Rational64> {
    let mut v: Vec<Rational64> = (1..=max_den as i64)
        .flat_map(|q| (0..=q).map(move |p| Rational64::new(p, q)))
        .collect();
    v.sort();
    v.dedup();
    v
}

/// Every point of the simplex (or cube) of dimension `n` with coordinates of denominator `≤ max_den`.
pub fn grid_points(n: usize, max_den: usize, ordered: bool) -> Vec<RationalPoint> {
    let values = farey(max_den);
    let mut out: Vec<Vec<Rational64>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for prefix in &out {
            for v in &values {
                if !ordered || prefix.last().is_none_or(|l| l <= v) {
                    let mut p = prefix.clone();
                    p.push(*v);
                    next.push(p);
                }
            }
        }
        out = next;
    }
    out.into_iter().map(RationalPoint).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct GridReport {
    pub object: String,
    pub max_denominator: usize,
    pub points_checked: usize,
    pub interior_points: usize,
    pub disagreements: Vec<RationalPoint>,
}

/// Compares the closed form with the definition on every grid point, in parallel.
pub fn grid_sweep(spec: &FilteringSpec, c: ObjectId, max_den: usize) -> Result<GridReport> {
    let ordered = matches!(spec, FilteringSpec::Simplex(_));
    let points = grid_points(geometric_dim(spec, c), max_den, ordered);
    let results: Vec<(bool, bool)> = points
        .par_iter()
        .map(|p| Ok((interior_membership(spec, c, p)?, brute_force_interior(spec, c, p)?)))
        .collect::<Result<_>>()?;
    let disagreements = points
        .iter()
        .zip(&results)
        .filter(|(_, (a, b))| a != b)
        .map(|(p, _)| p.clone())
        .collect();
    Ok(GridReport {
        object: spec.site().object_name(c).into(),
        max_denominator: max_den,
        points_checked: points.len(),
        interior_points: results.iter().filter(|(a, _)| *a).count(),
        disagreements,
    })
}

/// Morphisms into `c` that can hit an interior element: all of them, or only the
/// monos when every morphism factors as a split epi followed by a mono.
pub(crate) fn candidate_morphisms(site: &FinCat, c: ObjectId, monos_only: bool) -> Vec<MorphismId> {
    site.objects()
        .flat_map(|d| site.hom(d, c).iter().copied())
        .filter(|&u| !monos_only || site.is_mono(u))
        .collect()
}
