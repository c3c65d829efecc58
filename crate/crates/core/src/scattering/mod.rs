//! Identification operator, Cook diagnostics, wave operators and phase shifts.

mod cook;
mod identify;
mod operator;
mod phase;
mod waveop;

pub use cook::{cook_integrand, cook_series, CookSeries};
pub use identify::{identify_j, JImage};
pub use operator::{CookPoint, WaveOperator, MAX_R_MIN_FOR_V1};
pub use phase::{
    phase_distance, phase_row, phase_shift, phase_shift_asymptotic, phase_shift_long_time,
    phase_table, reduce_phase, s_matrix_apply, write_phase_csv, LongTimeOptions, PhaseMethod,
    PhaseRow, PhaseShift, SMatrix,
};
pub use waveop::{
    defect_table, wave_operator_approx, write_defect_csv, WaveOpResult, WaveOpSummary,
    CONVERGENCE_THRESHOLD, DEFAULT_SCHEDULE,
};

