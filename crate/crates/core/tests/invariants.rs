//! Property tests for the structural invariants of each module.

use std::sync::Arc;

use cohesio_core::fincat::standard::{bipointed_op, build_standard_site, cube_bipointed_isomorphism, CubeSite, DeltaSite, SiteKind};
use cohesio_core::fincat::CategoryDoc;
use cohesio_core::homotopy::{distance_report, is_kan, is_navigable, Connector};
use cohesio_core::morphisms::{induce_gm, pieces_preservation_report, TestFamily};
use cohesio_core::presheaf::random::random_presheaf;
use cohesio_core::presheaf::simplicial::{random_graph, random_simplicial_set};
use cohesio_core::presheaf::{
    characteristic_map, count_nat_transformations, exponential, nat_transformations, product,
    subobject_classifier, subpresheaves, PresheafDoc,
};
use cohesio_core::realization::{
    brute_force_interior, interior_membership, realize_point, FilteringSpec, RationalPoint,
};
use cohesio_core::{classify_site, json, Budget, CohesionContext, FinCat, FunctorData, Presheaf};
use num_rational::Rational64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

const SITES: [&str; 8] = ["terminal", "delta1", "delta2", "delta3", "cube1", "cube2", "cube3", "bipointed_op2"];
// Sites whose Ω is small enough to enumerate; the sieves on a 3-dimensional object are not.
const SMALL: [&str; 6] = ["terminal", "delta1", "delta2", "cube1", "cube2", "bipointed_op2"];

fn site(name: &str) -> Arc<FinCat> {
    build_standard_site(name.parse::<SiteKind>().unwrap()).unwrap().cat().clone()
}

fn random(cat: &Arc<FinCat>, seed: u64, cap: usize) -> Presheaf {
    random_presheaf(cat, &mut StdRng::seed_from_u64(seed), cap)
}

fn site_index() -> impl Strategy<Value = usize> {
    0..SITES.len()
}

// ---------------------------------------------------------------- sites

#[test]
fn standard_sites_are_pre_cohesive_and_cube_matches_bipointed() {
    for name in SITES {
        assert!(classify_site(&site(name)).pre_cohesive, "{name}");
    }
    for cap in 1..=3 {
        let cube = CubeSite::new(cap).unwrap();
        let bp = bipointed_op(cap).unwrap();
        let iso = cube_bipointed_isomorphism(&cube, &bp).expect("isomorphic");
        let mut seen = iso.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), bp.morphism_count());
    }
}

#[test]
fn omega_is_connected_exactly_on_sufficiently_cohesive_sites() {
    for name in SMALL {
        let cat = site(name);
        let ctx = CohesionContext::new(cat.clone()).unwrap();
        let omega = subobject_classifier(&cat, &Budget::unlimited()).unwrap();
        let connected = ctx.pieces(&omega.obj).count == 1;
        assert_eq!(connected, classify_site(&cat).sufficiently_cohesive, "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative_and_unital(s in site_index(), picks in prop::collection::vec(any::<prop::sample::Index>(), 3)) {
        let cat = site(SITES[s]);
        let f = picks[0].get(&cat.morphisms().collect::<Vec<_>>()).to_owned();
        let outs = cat.arrows_out_of(cat.cod(f));
        let g = *picks[1].get(&outs);
        let outs = cat.arrows_out_of(cat.cod(g));
        let h = *picks[2].get(&outs);
        prop_assert_eq!(cat.comp(h, cat.comp(g, f)), cat.comp(cat.comp(h, g), f));
        prop_assert_eq!(cat.comp(cat.identity(cat.cod(f)), f), f);
        prop_assert_eq!(cat.comp(f, cat.identity(cat.dom(f))), f);
        if let Some(sec) = cat.split_epi_section(f) {
            prop_assert!(cat.is_split_epi(f));
            prop_assert_eq!(cat.comp(f, sec), cat.identity(cat.cod(f)));
        }
    }

    // ------------------------------------------------------------ presheaves

    #[test]
    fn random_presheaves_are_functorial(s in site_index(), seed in any::<u64>()) {
        let cat = site(SITES[s]);
        let x = random(&cat, seed, 4);
        for f in cat.morphisms() {
            for g in cat.arrows_out_of(cat.cod(f)) {
                for e in 0..x.size(cat.cod(g)) {
                    prop_assert_eq!(x.act(cat.comp(g, f), e), x.act(f, x.act(g, e)));
                }
            }
        }
        for c in cat.objects() {
            prop_assert!(x.size(c) <= 4);
        }
    }

    #[test]
    fn yoneda_bijection(s in site_index(), seed in any::<u64>()) {
        let cat = site(SITES[s]);
        let x = random(&cat, seed, 4);
        for c in cat.objects() {
            let y = Presheaf::yoneda(&cat, c);
            prop_assert_eq!(count_nat_transformations(&y, &x, &Budget::unlimited()).unwrap(), x.size(c));
        }
    }

    #[test]
    fn documents_round_trip_byte_identically(s in site_index(), seed in any::<u64>()) {
        let cat = site(SITES[s]);
        let x = random(&cat, seed, 4);
        let text = json::to_string(&PresheafDoc::from_presheaf(&x));
        let back = json::from_str::<PresheafDoc>(&text).unwrap().load().unwrap();
        prop_assert!(back.same_tables(&x));
        prop_assert_eq!(json::to_string(&PresheafDoc::from_presheaf(&back)), text);
        let site_text = json::to_string(&cat.to_doc());
        let cat2 = json::from_str::<CategoryDoc>(&site_text).unwrap().load().unwrap();
        prop_assert!(cat2.same_structure(&cat));
        prop_assert_eq!(json::to_string(&cat2.to_doc()), site_text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exponential_universal_property(n in 1usize..=2, seeds in any::<[u64; 3]>()) {
        let d = DeltaSite::new(n).unwrap();
        let (x, y, z) = (random(&d.cat, seeds[0], 2), random(&d.cat, seeds[1], 2), random(&d.cat, seeds[2], 2));
        let b = Budget::unlimited();
        let yx = exponential(&x, &y, &b).unwrap();
        let zx = product(&z, &x).unwrap();
        prop_assert_eq!(
            count_nat_transformations(&z, &yx.obj, &b).unwrap(),
            count_nat_transformations(&zx.obj, &y, &b).unwrap()
        );
    }

    #[test]
    fn subobjects_biject_with_characteristic_maps(s in 0..SMALL.len(), seed in any::<u64>()) {
        let cat = site(SMALL[s]);
        let b = Budget::unlimited();
        let omega = subobject_classifier(&cat, &b).unwrap();
        let x = random(&cat, seed, 3);
        let subs = subpresheaves(&x, &b).unwrap();
        let maps = nat_transformations(&x, &omega.obj, &b).unwrap();
        prop_assert_eq!(subs.len(), maps.len());
        let mut chis: Vec<_> = subs.iter().map(|m| characteristic_map(&x, m, &omega)).collect();
        for chi in &chis {
            prop_assert!(chi.check(&x, &omega.obj).is_ok());
        }
        chis.sort();
        chis.dedup();
        prop_assert_eq!(chis.len(), subs.len());
    }

    // ------------------------------------------------------------ cohesion

    #[test]
    fn pieces_adjunction_and_comparisons(s in site_index(), seeds in any::<[u64; 2]>()) {
        let cat = site(SITES[s]);
        let ctx = CohesionContext::new(cat.clone()).unwrap();
        let (x, y) = (random(&cat, seeds[0], 4), random(&cat, seeds[1], 3));
        prop_assert!(ctx.theta(&x).is_surjective());
        prop_assert!(ctx.product_comparison(&x, &y).unwrap().is_bijective());
        // τ_{p_!X} ∘ p_!σ_X = id
        let px = ctx.pieces(&x);
        let sigma = ctx.sigma(&x, &px);
        let disc = ctx.discrete(px.count);
        let pd = ctx.pieces(&disc);
        let tau = ctx.tau(px.count);
        for (i, &(c, e)) in px.representatives.iter().enumerate() {
            prop_assert_eq!(tau.map[pd.of(c, sigma.at(c, e))], i);
        }
        for a in 0..=3 {
            prop_assert!(ctx.tau(a).is_bijective());
        }
        // κ iso ⟺ the reindexed comparison is iso
        let a = (seeds[1] % 3) as usize + 1;
        let (kappa, composite) = ctx.quintessential_map(&x, a).unwrap();
        prop_assert_eq!(kappa.iso, composite.is_bijective());
        prop_assert!(kappa.iso);
    }

    // ------------------------------------------------------------ homotopy

    #[test]
    fn finite_distance_iff_same_piece(n in 1usize..=2, seed in any::<u64>()) {
        let d = DeltaSite::new(n).unwrap();
        let ctx = CohesionContext::new(d.cat.clone()).unwrap();
        let conn = Connector::standard(&ctx).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let x = if n == 1 { random_graph(&d, &mut rng).presheaf } else { random_simplicial_set(&d, &mut rng).presheaf };
        let r = distance_report(&ctx, &conn, &x).unwrap();
        let pieces = ctx.pieces(&x);
        for a in 0..r.points {
            for b in 0..r.points {
                prop_assert_eq!(r.distance[a][b].is_some(), pieces.of(0, a) == pieces.of(0, b));
                prop_assert_eq!(r.distance[a][b], r.distance[b][a]);
            }
        }
        if n == 2 && is_kan(&d, &x, 2, &Budget::unlimited()).unwrap().kan {
            prop_assert!(is_navigable(&ctx, &conn, &x).unwrap());
        }
    }

    // ------------------------------------------------------------ realization

    #[test]
    fn interior_fast_path_matches_definition(
        cube in any::<bool>(),
        k in 1usize..=3,
        nums in prop::collection::vec(0i64..=12, 3),
        den in 1i64..=12,
    ) {
        let mut coords: Vec<Rational64> = nums.iter().take(k).map(|&p| Rational64::new(p.min(den), den)).collect();
        let spec = if cube {
            FilteringSpec::Cube(CubeSite::new(3).unwrap())
        } else {
            coords.sort();
            FilteringSpec::Simplex(DeltaSite::new(3).unwrap())
        };
        let p = RationalPoint(coords);
        prop_assert_eq!(interior_membership(&spec, k, &p).unwrap(), brute_force_interior(&spec, k, &p).unwrap());
    }

    #[test]
    fn realize_point_is_idempotent(seed in any::<u64>(), k in 0usize..=2, nums in prop::collection::vec(0i64..=6, 2)) {
        let d = DeltaSite::new(2).unwrap();
        let x = random_simplicial_set(&d, &mut StdRng::seed_from_u64(seed)).presheaf;
        let mut coords: Vec<Rational64> = nums.iter().take(k).map(|&p| Rational64::new(p, 6)).collect();
        coords.sort();
        let p = RationalPoint(coords);
        for e in 0..x.size(k) {
            let (c, _) = realize_point(&d, &x, k, e, &p).unwrap();
            let (again, trace) = realize_point(&d, &x, c.dim, c.element, &c.point).unwrap();
            prop_assert_eq!(&again, &c);
            prop_assert!(trace.is_empty());
        }
    }
}

// ---------------------------------------------------------------- morphisms

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn induced_morphism_laws(n in 1usize..=2, seeds in any::<[u64; 3]>()) {
        let (src, tgt) = (DeltaSite::new(n).unwrap(), DeltaSite::new(n + 1).unwrap());
        let gm = induce_gm(FunctorData::by_names(src.cat.clone(), tgt.cat.clone()).unwrap(), Budget::DEFAULT_LIMIT).unwrap();
        let e = random(&tgt.cat, seeds[0], 3);
        let x = random(&src.cat, seeds[1], 3);
        let y = random(&src.cat, seeds[2], 3);
        prop_assert!(gm.triangle_identities(&e, &x, &y).unwrap().all());
        let family = TestFamily {
            name: "sample".into(),
            codomain_objects: vec![("e".into(), e)],
            domain_objects: vec![("x".into(), x), ("y".into(), y)],
        };
        let r = pieces_preservation_report(&gm, &family).unwrap();
        prop_assert!(r.indexed_coproducts_preserved);
        prop_assert!(r.rho_varrho_inverse);
        prop_assert!(r.lambda_iso);
        prop_assert!(r.unit_pieces_iso);
        prop_assert!(r.mates_agree);
        prop_assert!(r.theta_square_commutes);
        prop_assert!(r.triangle_identities);
    }
}
