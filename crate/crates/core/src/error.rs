use thiserror::Error;

/// Every rejection the toolkit produces. Variants name the violated axiom and
/// carry a witness rendered with the input's own identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown identifier `{0}`")]
    UnknownId(String),
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("object `{0}` has no identity morphism")]
    MissingIdentity(String),
    #[error("composite `{g}` ∘ `{f}` is undefined")]
    CompositeUndefined { g: String, f: String },
    #[error("composite `{g}` ∘ `{f}` listed for a non-composable pair")]
    NotComposable { g: String, f: String },
    #[error("composite `{g}` ∘ `{f}` = `{h}` has the wrong source or target")]
    CompositeEndpoints { g: String, f: String, h: String },
    #[error("identity law fails at `{0}`")]
    IdentityLaw(String),
    #[error("associativity fails on the triple (`{h}`, `{g}`, `{f}`)")]
    Associativity { h: String, g: String, f: String },
    #[error("morphism `{0}` is not invertible")]
    NotInvertible(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("search space too large: {needed} candidate checks exceed the bound {bound}")]
    TooLarge { needed: u128, bound: u64 },
    #[error("no pullback exists for the cospan (`{f}`, `{g}`)")]
    NoPullback { f: String, g: String },
    #[error("the site has no chosen pullback for the cospan (`{f}`, `{g}`)")]
    MissingPullback { f: String, g: String },
    #[error("chosen cone over (`{f}`, `{g}`) is not a pullback: {reason}")]
    BadPullbackCone {
        f: String,
        g: String,
        reason: String,
    },
    #[error("stability fails: no basis cover of `{object}` refines the pullback of cover {cover} along `{morphism}`")]
    Stability {
        cover: String,
        morphism: String,
        object: String,
    },
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("invalid presheaf: {0}")]
    InvalidPresheaf(String),
    #[error("invalid natural transformation: {0}")]
    InvalidNatural(String),
    #[error("invalid groupoid object: {0}")]
    InvalidGroupoidObject(String),
    #[error("cosimplicial identity fails: {0}")]
    CosimplicialIdentity(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("not a levelwise fibration with discrete fibers: {0}")]
    NotDiscreteFibration(String),
    #[error("descent datum violates the {law} law: {witness}")]
    DescentLaw { law: String, witness: String },
    #[error("invalid module data: {0}")]
    InvalidModule(String),
    #[error("module map is not well defined: {0}")]
    IllDefinedMap(String),
    #[error("incompatible modules: {0}")]
    Incompatible(String),
    #[error("Hopf algebroid axiom `{axiom}` fails: {witness}")]
    HopfAxiom { axiom: String, witness: String },
    #[error("comodule law `{law}` fails: {witness}")]
    ComoduleLaw { law: String, witness: String },
    #[error("not a comodule map: {0}")]
    NotComoduleMap(String),
    #[error("module has nonzero free rank; exhaustive search not attempted")]
    InfiniteModule,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
