//! Desk-scale workbench for quantitative and continuous algebras: finite
//! metric spaces and posets, the weighted colimits behind strong finitarity,
//! term algebras with metric and order, equation satisfaction, and the
//! two-way translation between Kleisli-triple monad presentations and
//! equationally presented varieties.

pub mod alg;
pub mod bridge;
pub mod colim;
pub mod dist;
pub mod eqn;
pub mod fixtures;
pub mod gen;
pub mod mspace;
pub mod poset;
pub mod term;
