pub mod annulus;
pub mod cli;
pub mod cover_skeleton;
pub mod deformation;
pub mod hurwitz_graph;
pub mod power_series;
pub mod testgen;
pub mod valuation_ring;
