//! Exact computations over F_p for Hopf algebroids, cobar complexes and
//! spectral sequence pages, with shipped presentations and scenarios.

pub mod arith_witness;
pub mod cobar;
pub mod expr;
pub mod fp_linear;
pub mod graded_algebra;
pub mod hopf_comod;
pub mod presets;
pub mod scenarios;
pub mod ss_engine;
