//! Computation in presheaf toposes over finite sites: pieces and points,
//! connectors and distance bounds, horn fillers, interiors of filtering
//! functors, and geometric morphisms induced by site functors.

pub mod budget;
pub mod cohesion;
pub mod error;
pub mod fincat;
pub mod homotopy;
pub mod json;
pub mod morphisms;
pub mod presheaf;
pub mod realization;

pub use budget::Budget;
pub use cohesion::{CohesionContext, CohesionReport, FiniteMap, Kappa, PiecesData};
pub use error::{CategoryError, Error, Result};
pub use fincat::{classify_site, FinCat, FunctorData, MorphismId, ObjectId, SiteReport};
pub use presheaf::{NatTrans, Presheaf};
