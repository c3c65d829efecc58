//! Spherically symmetric potentials `V(r)`: admissibility checks, evolution
//! under `h_l + V` and perturbed wave operators.

mod admissibility;
mod evolution;
mod potential;

pub use admissibility::{
    check_potential, AdmissibilityReport, BOUNDED_SLOPE, GROWTH_SLOPE, MARGIN_FLOOR, MAX_CHECK_R_MIN,
};
pub use evolution::{
    default_perturbed_kgrid, default_steps, evolve_perturbed, perturbed_cook_series, wave_operator_perturbed,
    perturbed_kgrid, PerturbedEvolution, PerturbedPropagator, PerturbedWaveOperator, DEFAULT_DT, MAX_NORM_DRIFT,
    PERTURBED_K_MARGIN,
};
pub use potential::{DeclaredClass, Interpolation, PotentialFamily, PotentialSpec};
