//! Module theory over `Z` and `Z/n`, Hopf algebroids and their comodules.

mod algebra;
mod algebroid;
mod amitsur;
mod comodule;
mod counterexample;
mod matrix;
mod module;
mod snf;

pub use algebra::{pure, tensor, tensor_algebra, AModule, AlgebraObject, RingMap};
pub use algebroid::{HopfAlgebroid, RawHopfAlgebroid};
pub use amitsur::{amitsur_check, AmitsurReport};
pub use comodule::{
    alpha_from_coaction, coaction_from_alpha, comodule_cokernel, comodule_iso_exists,
    comodule_to_descent, descent_to_comodule, gamma_tensor_m, m_tensor_gamma, Comodule,
    ComoduleMap, ModDescentDatum,
};
pub use counterexample::{counterexample_nonabelian, Counterexample};
pub use matrix::{int, vector, Matrix};
pub use module::{
    add, basis_vector, homology, integer_kernel, scale, sub, zero_vector, Base, FpModule,
    ModuleMap, Vector,
};
pub use snf::{smith_normal_form, Snf};
