//! Shearer's measure and its critical function on finite graphs, the
//! parameter region where the measure exists, sufficient conditions for
//! that region, and exact stochastic-domination oracles.
//!
//! Every numeric routine is generic over [`Scalar`], implemented for `f64`
//! and for exact `BigRational`.

pub mod bounds;
pub mod dist;
pub mod domination;
pub mod error;
mod flow;
pub mod graph;
pub mod params;
pub mod scalar;
pub mod shearer;
pub mod xi;
pub mod z2;

pub use bounds::{
    closed_form, fp_check, kfuzz_halfball_brf, kfuzz_halfball_sigma, lll_check, thm2_vector, BoundKind,
    BoundReport, ClosedForm, ConditionCheck,
};
pub use dist::{Dist, PrefixConditionals};
pub use domination::{
    counterexample, dominated_value, min_composition, necessary_check, russo_sample, strassen_dominates,
    upset_dominates, Counterexample, CouplingPlan, Domination, UpSet,
};
pub use error::{Error, Result};
pub use graph::{enumerate_independent_sets, EdgeList, Family, Graph, VertexSubset};
pub use params::ParamVec;
pub use scalar::{Backend, Scalar};
pub use shearer::{
    boundary_crossing, construct_measure, escaping_order, intrinsic_vector, membership, or_composition, sample,
    IntrinsicBound, Region, RegionStatus,
};
pub use xi::{ovoep, xi_dc, xi_enumerate, xi_grid, xi_grid_homogeneous, xi_table, GridWindow, WeightVec, XiCache};
pub use z2::{a_estimate, shape_ovoep, spiral_order, telescoping, xi_log_density, AEstimate, GridShape, Telescoping};

pub use num::rational::BigRational;
