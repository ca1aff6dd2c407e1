//! System Hamiltonians and their thermal states.

use crate::error::{Error, Result};
use crate::prob::ProbVec;
use crate::tol;

/// Energies `E_i` of a Hamiltonian diagonal in the working basis, sorted non-decreasing.
///
/// Units are `k = hbar = 1`. Degenerate levels are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpectrum {
    energies: Vec<f64>,
}

impl EnergySpectrum {
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::InvalidInput("energy spectrum is empty".into()));
        }
        if let Some(e) = energies.iter().find(|e| !e.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite energy {e}")));
        }
        if energies.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidInput(
                "energies must be sorted in non-decreasing order".into(),
            ));
        }
        Ok(Self { energies })
    }

    /// `n` equally spaced levels `0, gap, 2 gap, ...`.
    pub fn equispaced(n: usize, gap: f64) -> Result<Self> {
        Self::new((0..n).map(|k| k as f64 * gap).collect())
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn min(&self) -> f64 {
        self.energies[0]
    }

    pub fn max(&self) -> f64 {
        self.energies[self.energies.len() - 1]
    }

    /// Width `E_max - E_min` of the spectrum.
    pub fn width(&self) -> f64 {
        self.max() - self.min()
    }
}

/// Gibbs distribution `g_i = e^{-beta E_i} / Z` computed with the ground energy
/// subtracted before exponentiating.
pub fn gibbs_vector(spectrum: &EnergySpectrum, beta: f64) -> Result<ProbVec> {
    check_beta(beta)?;
    let shift = spectrum.min();
    let weights: Vec<f64> = spectrum
        .energies()
        .iter()
        .map(|e| (-beta * (e - shift)).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    ProbVec::new(weights.into_iter().map(|w| w / total).collect())
}

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidInput(format!(
            "inverse temperature must be finite and non-negative, got {beta}"
        )));
    }
    Ok(())
}

/// A spectrum at inverse temperature `beta`, with its Gibbs vector and partition function.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsContext {
    spectrum: EnergySpectrum,
    beta: f64,
    gibbs: ProbVec,
    log_z: f64,
}

impl GibbsContext {
    pub fn new(spectrum: EnergySpectrum, beta: f64) -> Result<Self> {
        Self::with_cap(spectrum, beta, tol::MAX_LOG_GIBBS_RATIO)
    }

    /// Like [`GibbsContext::new`] but rejecting contexts where
    /// `beta * (E_max - E_min)` exceeds `max_log_ratio`, since the Gibbs
    /// vector must stay strictly positive.
    pub fn with_cap(spectrum: EnergySpectrum, beta: f64, max_log_ratio: f64) -> Result<Self> {
        check_beta(beta)?;
        if beta * spectrum.width() > max_log_ratio {
            return Err(Error::InvalidInput(format!(
                "beta * (E_max - E_min) = {} exceeds the cap {max_log_ratio}; Gibbs weights would vanish",
                beta * spectrum.width()
            )));
        }
        let gibbs = gibbs_vector(&spectrum, beta)?;
        if gibbs.iter().any(|&g| g <= 0.0) {
            return Err(Error::InvalidInput(
                "Gibbs vector has vanishing entries".into(),
            ));
        }
        let shift = spectrum.min();
        let shifted_z: f64 = spectrum
            .energies()
            .iter()
            .map(|e| (-beta * (e - shift)).exp())
            .sum();
        let log_z = shifted_z.ln() - beta * shift;
        Ok(Self {
            spectrum,
            beta,
            gibbs,
            log_z,
        })
    }

    pub fn from_energies(energies: Vec<f64>, beta: f64) -> Result<Self> {
        Self::new(EnergySpectrum::new(energies)?, beta)
    }

    pub fn spectrum(&self) -> &EnergySpectrum {
        &self.spectrum
    }

    pub fn energies(&self) -> &[f64] {
        self.spectrum.energies()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    pub fn gibbs(&self) -> &ProbVec {
        &self.gibbs
    }

    pub fn log_partition(&self) -> f64 {
        self.log_z
    }

    pub fn partition(&self) -> f64 {
        self.log_z.exp()
    }

    /// `kT = 1 / beta`; errors at infinite temperature.
    pub fn kt(&self) -> Result<f64> {
        if self.beta > 0.0 {
            Ok(1.0 / self.beta)
        } else {
            Err(Error::InvalidInput(
                "kT is infinite at beta = 0; use the entropic formulation".into(),
            ))
        }
    }

    /// Unnormalised Boltzmann weights `e^{-beta E_i} = Z g_i`.
    pub fn boltzmann_weights(&self) -> Vec<f64> {
        self.energies()
            .iter()
            .map(|e| (-self.beta * e).exp())
            .collect()
    }

    /// Same temperature, different Hamiltonian.
    pub fn with_spectrum(&self, spectrum: EnergySpectrum) -> Result<Self> {
        Self::new(spectrum, self.beta)
    }

    /// Same Hamiltonian, different temperature.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.spectrum.clone(), beta)
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        crate::error::check_dim(self.dim(), n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn three_level_reference_values() {
        let s = EnergySpectrum::new(vec![0.0, 1.0, 2.0]).unwrap();
        let g = gibbs_vector(&s, 1.2).unwrap();
        for (got, want) in g.iter().zip([0.718436, 0.216389, 0.0651751]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-5);
        }
    }

    #[test]
    fn infinite_temperature_is_uniform() {
        let s = EnergySpectrum::new(vec![0.0, 1.0, 2.0]).unwrap();
        let g = gibbs_vector(&s, 0.0).unwrap();
        for p in g.iter() {
            assert_abs_diff_eq!(*p, 1.0 / 3.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn ln2_gap() {
        let s = EnergySpectrum::new(vec![0.0, std::f64::consts::LN_2]).unwrap();
        let g = gibbs_vector(&s, 1.0).unwrap();
        assert_abs_diff_eq!(g[0], 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g[1], 1.0 / 3.0, epsilon = 1e-15);
        let ctx = GibbsContext::new(s, 1.0).unwrap();
        assert_abs_diff_eq!(ctx.partition(), 1.5, epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(EnergySpectrum::new(vec![]).is_err());
        assert!(EnergySpectrum::new(vec![1.0, 0.0]).is_err());
        assert!(EnergySpectrum::new(vec![0.0, f64::NAN]).is_err());
        let s = EnergySpectrum::new(vec![0.0, 1.0]).unwrap();
        assert!(gibbs_vector(&s, -1.0).is_err());
        assert!(gibbs_vector(&s, f64::INFINITY).is_err());
        assert!(GibbsContext::new(s.clone(), 1e4).is_err());
        assert!(GibbsContext::new(s, 0.0).unwrap().kt().is_err());
    }

    #[test]
    fn large_energies_do_not_overflow() {
        let ctx = GibbsContext::from_energies(vec![-400.0, -399.0], 1.5).unwrap();
        assert!(ctx.gibbs().iter().all(|g| g.is_finite() && *g > 0.0));
        let direct = ((1.5f64 * 400.0).exp() * (1.0 + (-1.5f64).exp())).ln();
        assert_abs_diff_eq!(ctx.log_partition(), direct, epsilon = 1e-9);
    }

    fn spectrum_strategy() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-50.0f64..50.0, 1..8).prop_map(|mut v| {
            v.sort_by(f64::total_cmp);
            v
        })
    }

    proptest! {
        #[test]
        fn gibbs_is_normalised(e in spectrum_strategy(), beta in 0.0f64..50.0) {
            let g = gibbs_vector(&EnergySpectrum::new(e).unwrap(), beta).unwrap();
            prop_assert!((g.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn gibbs_is_gauge_invariant(e in spectrum_strategy(), beta in 0.0f64..50.0, shift in -20.0f64..20.0) {
            let shifted: Vec<f64> = e.iter().map(|x| x + shift).collect();
            let g1 = gibbs_vector(&EnergySpectrum::new(e).unwrap(), beta).unwrap();
            let g2 = gibbs_vector(&EnergySpectrum::new(shifted).unwrap(), beta).unwrap();
            for (a, b) in g1.iter().zip(g2.iter()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
