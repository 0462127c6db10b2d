mod builders;
mod fincat;
mod functor;
mod predicates;
mod pullback;

pub use builders::function_images;
pub use fincat::{ComposeRule, FinCat, Generators, Mor, Obj, RawCategory, RawMorphism};
pub use functor::{same_cat, Functor};
pub use predicates::{
    has_discrete_fibers, has_rlp_against_endpoint, homotopy_pullback, is_equivalence, is_fibration,
    natural_iso_exists, EquivalenceVerdict, EquivalenceWitness, HomotopyPullback, NatIso,
    NotEquivalence,
};
pub use pullback::{compute_pullback, verify_pullback, PullbackCone};
