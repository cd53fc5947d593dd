//! Fixed inputs shared by the benchmarks.

use std::sync::Arc;

use cohesio_core::fincat::standard::DeltaSite;
use cohesio_core::presheaf::simplicial::{cyclic_nerve, path};
use cohesio_core::Presheaf;

/// `Δ₂` with a few simplicial sets of increasing size over it.
pub fn simplicial_corpus() -> (DeltaSite, Vec<(&'static str, Presheaf)>) {
    let d = DeltaSite::new(2).expect("delta2");
    let cat: &Arc<_> = &d.cat;
    let objs = vec![
        ("edge", Presheaf::yoneda(cat, 1)),
        ("triangle", Presheaf::yoneda(cat, 2)),
        ("path3", path(&d, 3).expect("path").presheaf),
        ("nerve_z2", cyclic_nerve(&d, 2)),
        ("nerve_z3", cyclic_nerve(&d, 3)),
    ];
    (d, objs)
}
