//! Maker strategies and their parameter calculators.

pub mod controller;
pub mod families;
pub mod lehman;
pub mod params;
pub mod potential;

pub use controller::{multistage_parameters, ControllerParams, DiscrepancyController, StageRecord};
pub use families::{
    coloring_family, hamilton_families, hamilton_shapes, pancyclicity_families,
    pancyclicity_shapes, CrossShape, PancyclicityShapes, DEFAULT_FAMILY_CAP,
};
pub use lehman::LehmanMaker;
pub use params::{
    biased_discrepancy_config, check_share_criterion, discrepancy_residual, epsilon_from_mu,
    gamma_calculator, CriterionReport, DiscrepancyConfig, GammaGame, GammaReport,
};
pub use potential::{
    potential_maker_move, PotentialConfig, PotentialMaker, PotentialState, SetSource,
};
