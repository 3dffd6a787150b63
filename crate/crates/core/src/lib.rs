pub mod algebra;
pub mod mahler;
pub mod siegel;
pub mod evaluator;
pub mod liouville;
pub mod elimination;
pub mod cli;
