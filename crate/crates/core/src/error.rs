use thiserror::Error;

/// First violated law found while validating a category table.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("duplicate morphism `{0}`")]
    DuplicateMorphism(String),
    #[error("morphism `{morphism}` refers to unknown object `{object}`")]
    UnknownObject { morphism: String, object: String },
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("object `{0}` has no identity")]
    MissingIdentity(String),
    #[error("identity `{morphism}` of `{object}` is not an endomorphism of it")]
    IdentityMistyped { object: String, morphism: String },
    #[error("composite of composable pair ({g}, {f}) is missing")]
    MissingComposite { g: String, f: String },
    #[error("composite given for non-composable pair ({g}, {f})")]
    NotComposable { g: String, f: String },
    #[error("composite of ({g}, {f}) given twice")]
    DuplicateComposite { g: String, f: String },
    #[error("composite of ({g}, {f}) is `{result}`, which has the wrong domain or codomain")]
    IllTypedComposite { g: String, f: String, result: String },
    #[error("identity law fails for `{0}`")]
    UnitLaw(String),
    #[error("associativity fails for ({h}, {g}, {f})")]
    NonAssociative { h: String, g: String, f: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid category: {0}")]
    Category(#[from] CategoryError),
    #[error("invalid presheaf: {0}")]
    Presheaf(String),
    #[error("invalid natural transformation: {0}")]
    NatTrans(String),
    #[error("invalid functor: {0}")]
    Functor(String),
    #[error("enumeration budget of {limit} candidate extensions exceeded")]
    BudgetExceeded { limit: u64 },
    #[error("operands live over different sites")]
    SiteMismatch,
    #[error("not a parallel pair: {0}")]
    NotParallel(String),
    #[error("site `{site}` is not pre-cohesive: {reason}")]
    NotPreCohesive { site: String, reason: String },
    #[error("malformed point: {0}")]
    MalformedPoint(String),
    #[error("{what} {value} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("unknown site `{0}`")]
    UnknownSite(String),
    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error envelope.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Category(_) => "invalid_category",
            Error::Presheaf(_) => "invalid_presheaf",
            Error::NatTrans(_) => "invalid_nat_trans",
            Error::Functor(_) => "invalid_functor",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::SiteMismatch => "site_mismatch",
            Error::NotParallel(_) => "not_parallel",
            Error::NotPreCohesive { .. } => "not_pre_cohesive",
            Error::MalformedPoint(_) => "malformed_point",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::UnknownSite(_) => "unknown_site",
            Error::Schema { .. } => "schema_error",
            Error::Parse(_) => "parse_error",
            Error::Invalid(_) => "invalid_input",
        }
    }

    pub(crate) fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
