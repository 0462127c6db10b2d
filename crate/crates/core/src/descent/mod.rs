//! Descent data and their comparison with sheaves on slice sites.

mod cohomology;
mod general;
mod groupoid;
mod tot2;

pub use cohomology::{cech_cohomology, AbPresheaf, CechCohomology};
pub use general::{DescentShape, GeneralDescentDatum};
pub use groupoid::{DescentCategory, DescentContext, SheafDescentDatum};
pub use tot2::{holim_crosscheck, HolimCrosscheck, SheafCosimplicial};
