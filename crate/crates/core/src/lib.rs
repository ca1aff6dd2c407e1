//! Numerical toolbox for the resource theory of thermal operations.
//!
//! Populations are [`ProbVec`]s, transition matrices are column-stochastic
//! ([`StochasticMatrix`], `G[(i, j)] = G_{i|j}`), and quantum states are
//! [`DensityMatrix`]es written in the energy eigenbasis. Units have
//! `k = ħ = 1` and logarithms are natural.
//!
//! ```
//! use thermops::{thermo_majorizes, GibbsContext, ProbVec};
//!
//! let ctx = GibbsContext::from_energies(vec![0.0, 1.0, 2.0], 1.2).unwrap();
//! let x = ProbVec::uniform(3).unwrap();
//! let y = ProbVec::new(vec![2.0 / 3.0, 1.0 / 3.0, 0.0]).unwrap();
//! // the two thermo-majorisation curves cross
//! assert!(!thermo_majorizes(&x, &y, &ctx).unwrap());
//! assert!(!thermo_majorizes(&y, &x, &ctx).unwrap());
//! ```

pub mod coherence;
pub mod curve;
pub mod density;
pub mod divergences;
pub mod error;
pub mod linalg;
pub mod majorization;
pub mod prob;
pub mod random;
pub mod spectrum;
pub mod thermo;
pub mod tol;
pub mod work;

pub use curve::PLCurve;
pub use density::{population_of, DensityMatrix};
pub use divergences::{
    burg_free_energy, default_alpha_grid, equilibrium_free_energy, free_energy_alpha,
    renyi_divergence, renyi_entropy, second_laws_check, second_laws_check_with, shannon_entropy,
    Law, SecondLawsVerdict, Violation,
};
pub use error::{Error, Result};
pub use majorization::{
    asymptotic_rate, hlp_construct, hlp_construct_with, lorenz_curve, majorizes, majorizes_with,
    HlpPlan, TTransform,
};
pub use prob::{ProbVec, StochasticMatrix};
pub use spectrum::{gibbs_vector, EnergySpectrum, GibbsContext};
pub use thermo::{
    bath_model_simulate, bath_model_simulate_with, beta_order, construct_gibbs_stochastic, embed, feasibility_lp_oracle,
    rationalize, thermo_curve, thermo_majorizes, thermo_majorizes_with, unembed, BathModel,
    BetaOrder, EmbeddingSpec,
};
pub use work::{
    average_work_reference, battery_rescaled_curve, w_det, w_det_geometric_oracle, w_for,
    w_for_geometric_oracle,
};
