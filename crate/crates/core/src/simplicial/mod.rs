//! Truncated cosimplicial categories, Tot², cosimplicial replacement and
//! homotopy limits of finite diagrams.
//!
//! The Tot² morphism condition is `β ∘ d⁰h = d¹h ∘ α`.

mod diagram;
mod product;
mod tot2;

pub use diagram::{cosimplicial_replacement, holim_cat, FinDiagram};
pub use product::{cone_to_tot2, Leg, ProductCosimplicial, ProductLevel, ProductMap, Reindex};
pub use tot2::{tot2, tot2_functor, Tot2, TruncCosimplicial, TruncCosimplicialMap};

use std::sync::Arc;

use crate::cat::{FinCat, Functor};
use crate::error::Result;

impl ProductCosimplicial {
    /// A truncated cosimplicial category with single-factor levels, given by
    /// its structure functors.
    #[allow(clippy::too_many_arguments)]
    pub fn explicit(
        levels: [Arc<FinCat>; 3],
        cofaces0: [Functor; 2],
        cofaces1: [Functor; 3],
        codegeneracy: Functor,
    ) -> Result<ProductCosimplicial> {
        let [g0, g1, g2] = levels;
        let leg = |f: Functor| Reindex {
            legs: vec![Leg {
                source: 0,
                functor: f,
            }],
        };
        let [d0, d1] = cofaces0;
        let [e0, e1, e2] = cofaces1;
        ProductCosimplicial::new(
            [
                ProductLevel::single("G0", g0),
                ProductLevel::single("G1", g1),
                ProductLevel::single("G2", g2),
            ],
            [leg(d0), leg(d1)],
            [leg(e0), leg(e1), leg(e2)],
            leg(codegeneracy),
        )
    }
}
