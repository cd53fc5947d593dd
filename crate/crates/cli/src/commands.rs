use std::fs;
use std::path::Path;
use std::sync::Arc;

use cohesio_core::fincat::standard::{CubeSite, DeltaSite};
use cohesio_core::homotopy::{
    distance_report, hurewicz_hom, is_kan, is_navigable, verify_connector, HomotopyReport,
};
use cohesio_core::morphisms::{induce_gm, pieces_preservation_report, TestFamily};
use cohesio_core::presheaf::random::random_presheaf;
use cohesio_core::presheaf::simplicial::{cyclic_nerve, path};
use cohesio_core::presheaf::PresheafDoc;
use cohesio_core::realization::{
    brute_force_interior, grid_sweep, interior_membership, realize_point, simplex_retraction,
    surjectivity_certificate, FilteringSpec, RationalPoint, TabularCarrier, TabularDoc,
};
use cohesio_core::{
    classify_site, json, Budget, CohesionContext, Error, FinCat, FunctorData, Presheaf, Result,
};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Value};

use crate::input;
use crate::{
    CarrierArgs, CohesionCmd, Command, Global, HomotopyArgs, HomotopyCmd, Kind, MorphismCmd, Outcome,
    PresheafCmd, RealizeCmd, SiteArgs, SiteCmd,
};

/// Option values recorded in every report.
pub fn options(cmd: &Command, g: &Global) -> Value {
    let mut o = json!({ "budget": g.budget(), "jobs": g.jobs });
    let mut set = |k: &str, v: Value| o[k] = v;
    match cmd {
        Command::Homotopy(h) => {
            let (args, max_dim) = match h {
                HomotopyCmd::Kan { args, max_dim } | HomotopyCmd::Report { args, max_dim, .. } => {
                    (args, *max_dim)
                }
                HomotopyCmd::Bound(a) | HomotopyCmd::Navigable(a) | HomotopyCmd::Connector(a) => (a, None),
                HomotopyCmd::Hurewicz { args, .. } => (args, None),
            };
            set("connector", json!(if args.connector.is_some() { "document" } else { "standard" }));
            if max_dim.is_some() {
                set("max_dim", json!(max_dim));
            }
        }
        Command::Realize(RealizeCmd::Grid { grid_step, max_dim, .. }) => {
            set("grid_step", json!(grid_step));
            set("max_dim", json!(max_dim));
        }
        Command::Cohesion(CohesionCmd::Quintessential { index, .. }) => set("index", json!(index)),
        _ => {}
    }
    o
}

pub fn run(cmd: &Command, g: &Global) -> Result<Outcome> {
    match cmd {
        Command::Site(c) => site(c),
        Command::Presheaf(c) => presheaf(c, g),
        Command::Cohesion(c) => cohesion(c, g),
        Command::Homotopy(c) => homotopy(c, g),
        Command::Realize(c) => realize(c),
        Command::Morphism(c) => morphism(c, g),
    }
}

fn site_of(args: &SiteArgs) -> Result<Arc<FinCat>> {
    match (&args.builtin, &args.site) {
        (Some(b), _) => input::builtin(b),
        (None, Some(s)) => input::site(s),
        (None, None) => Err(Error::Invalid("one of --builtin or --site is required".into())),
    }
}

fn site(cmd: &SiteCmd) -> Result<Outcome> {
    match cmd {
        SiteCmd::Classify(a) => Ok(Outcome::report(&classify_site(&*site_of(a)?), true)),
        SiteCmd::Emit(a) => Ok(Outcome::document(&site_of(a)?.to_doc())),
    }
}

fn context(x: &Presheaf, g: &Global) -> Result<CohesionContext> {
    CohesionContext::with_budget(x.site().clone(), g.budget())
}

fn presheaf(cmd: &PresheafCmd, g: &Global) -> Result<Outcome> {
    match cmd {
        PresheafCmd::Validate { object, site } => {
            let x = input::object(object, site.as_deref())?;
            let s = x.site();
            let sizes: serde_json::Map<String, Value> =
                s.objects().map(|c| (s.object_name(c).to_string(), json!(x.size(c)))).collect();
            Ok(Outcome::report(
                &json!({ "valid": true, "site": s.name(), "sizes": sizes, "total_size": x.total_size() }),
                true,
            ))
        }
        PresheafCmd::Emit { object } => Ok(Outcome::document(&PresheafDoc::from_presheaf(&input::presheaf(object)?))),
        PresheafCmd::Generate {
            site,
            kind,
            size,
            at,
            seed,
            cap,
        } => {
            let cat = site_of(site)?;
            let ctx = || CohesionContext::with_budget(cat.clone(), g.budget());
            let x = match kind {
                Kind::Terminal => Presheaf::terminal(&cat),
                Kind::Initial => Presheaf::initial(&cat),
                Kind::Yoneda => {
                    let name = at.as_deref().ok_or_else(|| Error::Invalid("yoneda needs --at".into()))?;
                    let c = cat
                        .object_index(name)
                        .ok_or_else(|| Error::Invalid(format!("no object `{name}`")))?;
                    Presheaf::yoneda(&cat, c)
                }
                Kind::Discrete => ctx()?.discrete(*size),
                Kind::Codiscrete => ctx()?.codiscrete(*size),
                Kind::Path => path(&input::delta_site(&cat)?, *size)?.presheaf,
                Kind::Nerve => cyclic_nerve(&input::delta_site(&cat)?, *size),
                Kind::Random => random_presheaf(&cat, &mut StdRng::seed_from_u64(*seed), (*cap).max(1)),
            };
            Ok(Outcome::document(&PresheafDoc::from_presheaf(&x)))
        }
    }
}

fn cohesion(cmd: &CohesionCmd, g: &Global) -> Result<Outcome> {
    match cmd {
        CohesionCmd::Report { object, with, site } => {
            let x = input::object(object, site.as_deref())?;
            let y = with.as_deref().map(input::presheaf).transpose()?;
            let r = context(&x, g)?.report(&x, y.as_ref())?;
            let passed = r.theta_surjective && r.kappa_iso != Some(false);
            Ok(Outcome::report(&r, passed))
        }
        CohesionCmd::Product { object, with, site } => {
            let x = input::object(object, site.as_deref())?;
            let y = input::presheaf(with)?;
            let ctx = context(&x, g)?;
            let m = ctx.product_comparison(&x, &y)?;
            let ok = m.is_bijective();
            Ok(Outcome::report(
                &json!({
                    "pieces_x": ctx.pieces(&x).count,
                    "pieces_y": ctx.pieces(&y).count,
                    "comparison": m,
                    "bijective": ok,
                }),
                ok,
            ))
        }
        CohesionCmd::Quintessential { object, index, site } => {
            let x = input::object(object, site.as_deref())?;
            let (kappa, m) = context(&x, g)?.quintessential_map(&x, *index)?;
            let ok = m.is_bijective();
            Ok(Outcome::report(&json!({ "kappa": kappa, "comparison": m, "bijective": ok }), ok))
        }
    }
}

struct Loaded {
    ctx: CohesionContext,
    x: Presheaf,
    conn: cohesio_core::homotopy::Connector,
}

fn load_homotopy(a: &HomotopyArgs, g: &Global) -> Result<Loaded> {
    let x = input::object(&a.object, a.site.as_deref())?;
    let ctx = context(&x, g)?;
    let conn = input::connector(&ctx, a.connector.as_deref())?;
    Ok(Loaded { ctx, x, conn })
}

fn kan_report(x: &Presheaf, max_dim: Option<usize>, g: &Global) -> Result<cohesio_core::homotopy::KanReport> {
    let d = input::delta_site(x.site())?;
    is_kan(&d, x, max_dim.unwrap_or(d.n), &Budget::new(g.budget()))
}

fn homotopy(cmd: &HomotopyCmd, g: &Global) -> Result<Outcome> {
    match cmd {
        HomotopyCmd::Bound(a) => {
            let l = load_homotopy(a, g)?;
            let r = distance_report(&l.ctx, &l.conn, &l.x)?;
            Ok(Outcome::report(
                &json!({ "weakly_kan_bound": r.bound, "points": r.points, "distance": r.distance }),
                true,
            ))
        }
        HomotopyCmd::Navigable(a) => {
            let l = load_homotopy(a, g)?;
            let nav = is_navigable(&l.ctx, &l.conn, &l.x)?;
            Ok(Outcome::report(&json!({ "navigable": nav }), nav))
        }
        HomotopyCmd::Kan { args, max_dim } => {
            let x = input::object(&args.object, args.site.as_deref())?;
            let r = kan_report(&x, *max_dim, g)?;
            let ok = r.kan;
            Ok(Outcome::report(&r, ok))
        }
        HomotopyCmd::Connector(a) => {
            let l = load_homotopy(a, g)?;
            let r = verify_connector(&l.ctx, &l.conn, &l.x)?;
            let ok = r.coequalizer;
            Ok(Outcome::report(&r, ok))
        }
        HomotopyCmd::Hurewicz { args, target } => {
            let l = load_homotopy(args, g)?;
            let y = target.as_deref().map(input::presheaf).transpose()?;
            let h = hurewicz_hom(&l.ctx, &l.x, y.as_ref().unwrap_or(&l.x))?;
            Ok(Outcome::report(&json!({ "hurewicz_hom_size": h.size() }), true))
        }
        HomotopyCmd::Report { args, max_dim, target } => {
            let l = load_homotopy(args, g)?;
            let y = target.as_deref().map(input::presheaf).transpose()?;
            let kan_up_to = match input::delta_site(l.x.site()) {
                Ok(_) => Some(kan_report(&l.x, *max_dim, g)?.kan_up_to),
                Err(_) => None,
            };
            let r = HomotopyReport {
                weakly_kan_bound: distance_report(&l.ctx, &l.conn, &l.x)?.bound,
                navigable: is_navigable(&l.ctx, &l.conn, &l.x)?,
                connector_is_coequalizer: verify_connector(&l.ctx, &l.conn, &l.x)?.coequalizer,
                kan_up_to,
                hurewicz_hom_size: hurewicz_hom(&l.ctx, &l.x, y.as_ref().unwrap_or(&l.x))?.size(),
            };
            Ok(Outcome::report(&r, true))
        }
    }
}

fn carrier(a: &CarrierArgs) -> Result<FilteringSpec> {
    match (a.simplex, a.cube) {
        (Some(n), _) => Ok(FilteringSpec::Simplex(DeltaSite::new(n)?)),
        (None, Some(n)) => Ok(FilteringSpec::Cube(CubeSite::new(n)?)),
        (None, None) => Err(Error::Invalid("one of --simplex or --cube is required".into())),
    }
}

fn top_object(a: &CarrierArgs) -> usize {
    a.simplex.or(a.cube).unwrap_or(0)
}

fn realize(cmd: &RealizeCmd) -> Result<Outcome> {
    match cmd {
        RealizeCmd::Interior { carrier: c, point } => {
            let spec = carrier(c)?;
            let p: RationalPoint = point.parse()?;
            let n = top_object(c);
            let fast = interior_membership(&spec, n, &p)?;
            let brute = brute_force_interior(&spec, n, &p)?;
            Ok(Outcome::report(
                &json!({
                    "object": spec.site().object_name(n),
                    "point": p,
                    "interior": fast,
                    "brute_force_interior": brute,
                    "agree": fast == brute,
                }),
                fast == brute,
            ))
        }
        RealizeCmd::Brute { carrier: c, point } => {
            let spec = carrier(c)?;
            let p: RationalPoint = point.parse()?;
            let n = top_object(c);
            let brute = brute_force_interior(&spec, n, &p)?;
            Ok(Outcome::report(
                &json!({ "object": spec.site().object_name(n), "point": p, "interior": brute }),
                true,
            ))
        }
        RealizeCmd::Grid {
            carrier: c,
            grid_step,
            max_dim,
        } => {
            let spec = carrier(c)?;
            let top = max_dim.unwrap_or(top_object(c)).min(top_object(c));
            let reports = (0..=top)
                .map(|k| grid_sweep(&spec, k, *grid_step))
                .collect::<Result<Vec<_>>>()?;
            let ok = reports.iter().all(|r| r.disagreements.is_empty());
            Ok(Outcome::report(&json!({ "sweeps": reports, "agree": ok }), ok))
        }
        RealizeCmd::Certificate { carrier: c, tabular } => {
            let spec = match tabular {
                Some(p) => {
                    let doc: TabularDoc = json::from_str(&input::read(p)?)?;
                    FilteringSpec::Tabular(TabularCarrier::from_doc(&doc)?)
                }
                None => carrier(c)?,
            };
            let cert = surjectivity_certificate(&spec)?;
            let ok = cert.certified;
            Ok(Outcome::report(&cert, ok))
        }
        RealizeCmd::Retraction { simplex } => {
            let site = DeltaSite::new(*simplex)?;
            let r = simplex_retraction(&site, *simplex)?;
            let ok = r.is_retraction();
            Ok(Outcome::report(
                &json!({ "n": simplex, "power_sizes": r.power.obj.sizes(), "retraction": ok }),
                ok,
            ))
        }
        RealizeCmd::Point {
            object,
            dim,
            element,
            point,
        } => {
            let x = input::presheaf(object)?;
            let site = input::delta_site(x.site())?;
            if *dim > site.n {
                return Err(Error::Invalid(format!("no degree {dim} in `{}`", x.site().name())));
            }
            let e = input::element(&x, *dim, element)?;
            let p: RationalPoint = point.parse()?;
            let (canon, trace) = realize_point(&site, &x, *dim, e, &p)?;
            let named = |c: &cohesio_core::realization::Canonical| {
                json!({ "dim": c.dim, "element": x.element_name(c.dim, c.element), "point": c.point })
            };
            let steps: Vec<Value> = trace
                .iter()
                .map(|s| json!({ "from": named(&s.from), "to": named(&s.to), "c": s.c }))
                .collect();
            Ok(Outcome::report(&json!({ "canonical": named(&canon), "trace": steps }), true))
        }
    }
}

fn test_objects(dir: &Path, f: &FunctorData) -> Result<TestFamily> {
    let mut entries: Vec<_> = fs::read_dir(dir)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    entries.sort();
    let mut family = TestFamily {
        name: dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
        codomain_objects: Vec::new(),
        domain_objects: Vec::new(),
    };
    for p in entries {
        let x = input::presheaf(&p)?;
        let name = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        if x.site().same_structure(&f.target) {
            family.codomain_objects.push((name, x));
        } else if x.site().same_structure(&f.source) {
            family.domain_objects.push((name, x));
        } else {
            return Err(Error::Invalid(format!(
                "{} lives over `{}`, which is neither end of the functor",
                p.display(),
                x.site().name()
            )));
        }
    }
    Ok(family)
}

fn morphism(cmd: &MorphismCmd, g: &Global) -> Result<Outcome> {
    match cmd {
        MorphismCmd::Analyze { functor, tests } => {
            let f = input::functor(functor)?;
            let family = test_objects(tests, &f)?;
            let gm = induce_gm(f, g.budget())?;
            let r = pieces_preservation_report(&gm, &family)?;
            let ok = r.preserves_pieces_on_family;
            Ok(Outcome::report(&r, ok))
        }
        MorphismCmd::Functor {
            source,
            target,
            collapse,
        } => {
            let (s, t) = (input::site(source)?, input::site(target)?);
            let f = if *collapse {
                FunctorData::collapse(s, t)?
            } else {
                FunctorData::by_names(s, t)?
            };
            Ok(Outcome::document(&f.to_doc()))
        }
    }
}
