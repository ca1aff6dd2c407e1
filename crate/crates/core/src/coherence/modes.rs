use crate::density::DensityMatrix;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{CMat, C64, ZERO};
use crate::spectrum::EnergySpectrum;

/// Relative tolerance for treating two transition energies as equal.
const RELATIVE_DELTA: f64 = 1e-9;

/// Default clustering tolerance `1e-9 · (E_max - E_min)`.
pub fn default_delta(spectrum: &EnergySpectrum) -> f64 {
    RELATIVE_DELTA * spectrum.width()
}

/// Sorted distinct transition frequencies `E_i - E_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BohrSpectrum {
    pub frequencies: Vec<f64>,
    pub delta: f64,
}

impl BohrSpectrum {
    /// Index of the representative nearest to `omega`.
    pub fn nearest(&self, omega: f64) -> usize {
        let k = self.frequencies.partition_point(|&w| w < omega);
        match (k.checked_sub(1), k < self.frequencies.len()) {
            (Some(lo), true) if omega - self.frequencies[lo] < self.frequencies[k] - omega => lo,
            (Some(lo), false) => lo,
            _ => k,
        }
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }
}

/// All transition frequencies, single-linkage clustered with gap `delta`;
/// each cluster is represented by its mean.
///
/// The zero cluster is pinned to exactly `0` and the result is made exactly
/// symmetric under negation. A zero cluster wider than `2·delta` means
/// distinct gaps were chained together with the degenerate ones, which is
/// reported as a resolution error.
pub fn bohr_spectrum(spectrum: &EnergySpectrum, delta: f64) -> Result<BohrSpectrum> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::InvalidInput(format!("delta must be finite and >= 0, got {delta}")));
    }
    let e = spectrum.energies();
    let mut diffs: Vec<f64> = e
        .iter()
        .flat_map(|a| e.iter().map(move |b| a - b))
        .filter(|w| *w >= 0.0)
        .collect();
    diffs.sort_by(f64::total_cmp);

    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for w in diffs {
        match clusters.last_mut() {
            Some(c) if w - c.last().unwrap() <= delta => c.push(w),
            _ => clusters.push(vec![w]),
        }
    }
    let zero = &clusters[0];
    if zero.last().unwrap() - zero[0] > 2.0 * delta && zero.last().unwrap() > &0.0 {
        return Err(Error::Resolution(format!(
            "transition frequency {} merges with 0 at delta = {delta:e}",
            zero.last().unwrap()
        )));
    }
    let positive: Vec<f64> = clusters[1..]
        .iter()
        .map(|c| c.iter().sum::<f64>() / c.len() as f64)
        .collect();
    let mut frequencies: Vec<f64> = positive.iter().rev().map(|w| -w).collect();
    frequencies.push(0.0);
    frequencies.extend(positive);
    Ok(BohrSpectrum { frequencies, delta })
}

/// `ρ = Σ_ω ρ^{(ω)}`, where `ρ^{(ω)}` keeps the entries `(a, b)` with
/// `E_a - E_b = ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeDecomposition {
    pub frequencies: Vec<f64>,
    pub components: Vec<CMat>,
}

impl ModeDecomposition {
    pub fn component(&self, omega: f64, tol: f64) -> Option<&CMat> {
        self.frequencies
            .iter()
            .position(|w| (w - omega).abs() <= tol)
            .map(|k| &self.components[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &CMat)> {
        self.frequencies.iter().copied().zip(&self.components)
    }

    /// `Σ_ω ρ^{(ω)}`.
    pub fn total(&self) -> CMat {
        let n = self.components.first().map_or(0, |m| m.nrows());
        self.components.iter().fold(CMat::zeros(n, n), |acc, m| acc + m)
    }

    /// Only modes with some entry above `tol` in modulus.
    pub fn nonzero(&self, tol: f64) -> Vec<f64> {
        self.iter()
            .filter(|(_, m)| m.iter().any(|z| z.norm() > tol))
            .map(|(w, _)| w)
            .collect()
    }
}

/// Projection of an arbitrary operator onto the mode `omega`.
pub fn project_mode(m: &CMat, spectrum: &EnergySpectrum, omega: f64, delta: f64) -> Result<CMat> {
    check_dim(spectrum.dim(), m.nrows())?;
    let e = spectrum.energies();
    Ok(CMat::from_fn(m.nrows(), m.ncols(), |a, b| {
        if (e[a] - e[b] - omega).abs() <= delta {
            m[(a, b)]
        } else {
            ZERO
        }
    }))
}

/// Splits `m` into its modes, using [`bohr_spectrum`] with the default tolerance.
pub fn mode_decompose_operator(m: &CMat, spectrum: &EnergySpectrum) -> Result<ModeDecomposition> {
    check_dim(spectrum.dim(), m.nrows())?;
    let bohr = bohr_spectrum(spectrum, default_delta(spectrum))?;
    let n = m.nrows();
    let e = spectrum.energies();
    let mut components = vec![CMat::zeros(n, n); bohr.len()];
    for a in 0..n {
        for b in 0..n {
            components[bohr.nearest(e[a] - e[b])][(a, b)] = m[(a, b)];
        }
    }
    Ok(ModeDecomposition {
        frequencies: bohr.frequencies,
        components,
    })
}

pub fn mode_decompose(rho: &DensityMatrix, spectrum: &EnergySpectrum) -> Result<ModeDecomposition> {
    mode_decompose_operator(rho.matrix(), spectrum)
}

/// Keeps the entries between (near-)degenerate levels: the `ω = 0` mode.
pub fn dephase_operator(m: &CMat, spectrum: &EnergySpectrum) -> Result<CMat> {
    project_mode(m, spectrum, 0.0, default_delta(spectrum))
}

/// The dephasing map `D`, averaging over all time translations.
pub fn dephase(rho: &DensityMatrix, spectrum: &EnergySpectrum) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_channel_output(dephase_operator(
        rho.matrix(),
        spectrum,
    )?))
}

/// `e^{-iHt} m e^{iHt}`: entry `(a, b)` picks up `e^{-i(E_a - E_b)t}`.
pub fn time_translate(m: &CMat, spectrum: &EnergySpectrum, t: f64) -> Result<CMat> {
    check_dim(spectrum.dim(), m.nrows())?;
    let e = spectrum.energies();
    Ok(CMat::from_fn(m.nrows(), m.ncols(), |a, b| {
        m[(a, b)] * C64::from_polar(1.0, -(e[a] - e[b]) * t)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{self, c, real};

    fn spec(e: &[f64]) -> EnergySpectrum {
        EnergySpectrum::new(e.to_vec()).unwrap()
    }

    #[test]
    fn bohr_examples() {
        let s = spec(&[0.0, 1.0, 2.0]);
        assert_eq!(bohr_spectrum(&s, default_delta(&s)).unwrap().frequencies, vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(bohr_spectrum(&spec(&[0.0]), 0.0).unwrap().frequencies, vec![0.0]);
        let b = bohr_spectrum(&spec(&[0.0, 1.0, 1.0 + 1e-12]), 1e-9).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b.frequencies[1], 0.0);
        assert!((b.frequencies[2] - 1.0).abs() < 1e-11);
        assert_eq!(b.frequencies[0], -b.frequencies[2]);
        // a ladder of tiny gaps chains into the zero cluster
        assert!(bohr_spectrum(&spec(&[0.0, 0.5, 1.0, 1.5]), 0.6).is_err());
    }

    #[test]
    fn dephasing_examples() {
        let s = spec(&[0.0, 1.0]);
        let d = dephase(&DensityMatrix::plus(), &s).unwrap();
        assert!(linalg::max_abs(&(d.matrix() - linalg::diag_real(&[0.5, 0.5]))) < 1e-15);
        let diag = DensityMatrix::from_diag(&crate::ProbVec::new(vec![0.3, 0.7]).unwrap());
        assert_eq!(dephase(&diag, &s).unwrap(), diag);
        // degenerate levels keep their coherence
        let deg = spec(&[0.0, 0.0]);
        assert_eq!(dephase(&DensityMatrix::plus(), &deg).unwrap(), DensityMatrix::plus());
    }

    #[test]
    fn plus_state_modes() {
        let s = spec(&[0.0, 1.0]);
        let modes = mode_decompose(&DensityMatrix::plus(), &s).unwrap();
        assert_eq!(modes.frequencies, vec![-1.0, 0.0, 1.0]);
        assert!((modes.component(1.0, 1e-12).unwrap()[(1, 0)] - real(0.5)).norm() < 1e-15);
        assert!((modes.component(-1.0, 1e-12).unwrap()[(0, 1)] - real(0.5)).norm() < 1e-15);
        assert_eq!(modes.component(0.0, 1e-12).unwrap()[(0, 1)], ZERO);
        assert!(linalg::max_abs(&(modes.total() - DensityMatrix::plus().matrix())) < 1e-15);
    }

    #[test]
    fn single_coherence_lives_in_two_modes() {
        let s = spec(&[0.0, 1.0, 2.0]);
        let m = CMat::from_row_slice(
            3,
            3,
            &[real(0.5), c(0.1, 0.2), real(0.0), c(0.1, -0.2), real(0.3), real(0.0), real(0.0), real(0.0), real(0.2)],
        );
        let modes = mode_decompose(&DensityMatrix::new(m).unwrap(), &s).unwrap();
        assert_eq!(modes.nonzero(0.0), vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn components_rotate_with_their_frequency() {
        let s = spec(&[0.0, 0.7, 1.9]);
        let psi = [real(0.6), c(0.0, 0.48), c(0.64, 0.0)];
        let rho = DensityMatrix::pure(&psi).unwrap();
        let t = 0.37;
        for (w, m) in mode_decompose(&rho, &s).unwrap().iter() {
            let moved = time_translate(m, &s, t).unwrap();
            let want = m * C64::from_polar(1.0, -w * t);
            assert!(linalg::max_abs(&(moved - want)) < 1e-14);
        }
    }
}
