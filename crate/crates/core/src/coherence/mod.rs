//! Quantum layer: dephasing and coherence modes, asymmetry monotones, the
//! free-energy split, covariant channels and the bound they put on
//! coherence transfer, the qubit solution and the ladder-bath example.

mod asymmetry;
mod channel;
mod ladder;
mod modes;
mod qubit;

pub use asymmetry::{
    asymmetry, asymmetry_alpha, fidelity, free_energy_split, holevo_asymmetry, qfi,
    quantum_renyi_divergence, FreeEnergySplit,
};
pub use channel::{
    channel_covariance_check, covariance_violation, cp_bound, gibbs_preserving_check,
    mode_preservation_defect, mode_shift_bound, ClassicalAction, QuantumChannel,
};
pub use ladder::{
    bath_levels, ladder_channel, ladder_simulate, ladder_tail_bound, ladder_transport_factor,
    Direction,
};
pub use modes::{
    bohr_spectrum, default_delta, dephase, dephase_operator, mode_decompose,
    mode_decompose_operator, project_mode, time_translate, BohrSpectrum, ModeDecomposition,
};
pub use qubit::{
    qubit_channel_for_lambda, qubit_coherence_bound, qubit_gibbs_matrix, qubit_lambda,
    qubit_optimal_channel, qubit_reachable_boundary,
};
