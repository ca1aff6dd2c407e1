use nalgebra::DMatrix;

use super::modes::{bohr_spectrum, default_delta};
use crate::density::DensityMatrix;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, CMat, ONE};
use crate::prob::StochasticMatrix;
use crate::spectrum::{EnergySpectrum, GibbsContext};
use crate::tol;

/// A channel `E(ρ) = Σ_k K_k ρ K_k†`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    kraus: Vec<CMat>,
}

impl QuantumChannel {
    /// Validates shapes and `Σ K†K = I` within `1e-9`.
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        let Some(first) = kraus.first() else {
            return Err(Error::InvalidInput("channel needs at least one Kraus operator".into()));
        };
        let n = first.nrows();
        if kraus.iter().any(|k| k.nrows() != n || k.ncols() != n) || n == 0 {
            return Err(Error::InvalidInput("Kraus operators must be square and of equal size".into()));
        }
        let completeness = kraus.iter().fold(CMat::zeros(n, n), |acc, k| acc + k.adjoint() * k);
        let dev = linalg::max_abs(&(completeness - CMat::identity(n, n)));
        if dev > tol::VALIDATION {
            return Err(Error::InvalidInput(format!(
                "Kraus operators are not trace preserving (deviation {dev:e})"
            )));
        }
        Ok(Self { kraus })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            kraus: vec![CMat::identity(n, n)],
        }
    }

    /// `ρ ↦ U ρ U†`.
    pub fn unitary(u: CMat) -> Result<Self> {
        Self::new(vec![u])
    }

    /// Full dephasing: Kraus operators are the projectors onto the
    /// (near-)degenerate energy eigenspaces.
    pub fn dephasing(spectrum: &EnergySpectrum) -> Self {
        let n = spectrum.dim();
        let delta = default_delta(spectrum);
        let e = spectrum.energies();
        let mut kraus = Vec::new();
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && e[end] - e[end - 1] <= delta {
                end += 1;
            }
            let mut p = CMat::zeros(n, n);
            for i in start..end {
                p[(i, i)] = ONE;
            }
            kraus.push(p);
            start = end;
        }
        Self { kraus }
    }

    /// `D_s = (1 - s) id + s D`.
    pub fn partial_dephasing(spectrum: &EnergySpectrum, s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidInput(format!("dephasing strength {s} outside [0, 1]")));
        }
        let n = spectrum.dim();
        let mut kraus = vec![CMat::identity(n, n).scale((1.0 - s).sqrt())];
        kraus.extend(Self::dephasing(spectrum).kraus.into_iter().map(|k| k.scale(s.sqrt())));
        Ok(Self { kraus })
    }

    /// Measure in the energy basis and resample with `G`: Kraus operators
    /// `√G_{i|j} |i⟩⟨j|`. Covariant for non-degenerate spectra.
    pub fn from_stochastic(g: &StochasticMatrix) -> Self {
        let n = g.dim();
        let mut kraus = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let p = g.get(i, j);
                if p > 0.0 {
                    kraus.push(linalg::ketbra(n, i, j).scale(p.sqrt()));
                }
            }
        }
        Self { kraus }
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].nrows()
    }

    /// Action on an arbitrary operator.
    pub fn apply_operator(&self, m: &CMat) -> CMat {
        let n = self.dim();
        self.kraus
            .iter()
            .fold(CMat::zeros(n, n), |acc, k| acc + k * m * k.adjoint())
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_dim(self.dim(), rho.dim())?;
        Ok(DensityMatrix::from_channel_output(self.apply_operator(rho.matrix())))
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &QuantumChannel) -> Result<QuantumChannel> {
        check_dim(self.dim(), first.dim())?;
        let kraus = self
            .kraus
            .iter()
            .flat_map(|a| first.kraus.iter().map(move |b| a * b))
            .collect();
        Ok(Self { kraus })
    }

    /// Convex mixture `w self + (1 - w) other`.
    pub fn mix(&self, other: &QuantumChannel, w: f64) -> Result<QuantumChannel> {
        check_dim(self.dim(), other.dim())?;
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidInput(format!("mixing weight {w} outside [0, 1]")));
        }
        let mut kraus: Vec<CMat> = self.kraus.iter().map(|k| k.scale(w.sqrt())).collect();
        kraus.extend(other.kraus.iter().map(|k| k.scale((1.0 - w).sqrt())));
        Ok(Self { kraus })
    }

    /// Choi matrix `J = Σ_{ab} E(|a⟩⟨b|) ⊗ |a⟩⟨b|`, output factor first.
    pub fn choi(&self) -> CMat {
        let n = self.dim();
        let mut j = CMat::zeros(n * n, n * n);
        for a in 0..n {
            for b in 0..n {
                let out = self.apply_operator(&linalg::ketbra(n, a, b));
                for x in 0..n {
                    for y in 0..n {
                        j[(x * n + a, y * n + b)] = out[(x, y)];
                    }
                }
            }
        }
        j
    }

    /// `P_{x'|x} = ⟨x'|E(|x⟩⟨x|)|x'⟩`.
    pub fn classical_action(&self) -> ClassicalAction {
        let n = self.dim();
        let mut p = DMatrix::<f64>::zeros(n, n);
        for x in 0..n {
            let out = self.apply_operator(&linalg::ketbra(n, x, x));
            for xp in 0..n {
                p[(xp, x)] = out[(xp, xp)].re.max(0.0);
            }
        }
        for mut col in p.column_iter_mut() {
            let s = col.sum();
            col /= s;
        }
        ClassicalAction {
            p: StochasticMatrix::new(p).expect("trace-preserving channels act stochastically on populations"),
        }
    }
}

/// The population-level action of a channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalAction {
    pub p: StochasticMatrix,
}

impl From<StochasticMatrix> for ClassicalAction {
    fn from(p: StochasticMatrix) -> Self {
        Self { p }
    }
}

/// Covariance under time translations: every Choi entry coupling different
/// eigenvalues of `H ⊗ I - I ⊗ H^T` must vanish within `tol`.
pub fn channel_covariance_check(ch: &QuantumChannel, spectrum: &EnergySpectrum, tol: f64) -> Result<bool> {
    Ok(covariance_violation(ch, spectrum)? <= tol)
}

/// Largest Choi entry outside the block structure of a covariant channel.
pub fn covariance_violation(ch: &QuantumChannel, spectrum: &EnergySpectrum) -> Result<f64> {
    check_dim(spectrum.dim(), ch.dim())?;
    let n = ch.dim();
    let e = spectrum.energies();
    let delta = default_delta(spectrum);
    let label = |r: usize| e[r / n] - e[r % n];
    let j = ch.choi();
    let mut worst: f64 = 0.0;
    for r in 0..n * n {
        for s in 0..n * n {
            if (label(r) - label(s)).abs() > delta {
                worst = worst.max(j[(r, s)].norm());
            }
        }
    }
    Ok(worst)
}

/// `‖E(γ) - γ‖_max <= tol`.
pub fn gibbs_preserving_check(ch: &QuantumChannel, ctx: &GibbsContext, tol: f64) -> Result<bool> {
    check_dim(ctx.dim(), ch.dim())?;
    let gamma = linalg::diag_real(ctx.gibbs().as_slice());
    Ok(linalg::max_abs(&(ch.apply_operator(&gamma) - &gamma)) <= tol)
}

/// Right-hand side of the coherence bound for covariant channels with
/// classical action `P`:
/// `Σ_{(x,y) : E_x - E_y = E_x' - E_y'} √(P_{x'|x} P_{y'|y}) |ρ_xy|`.
pub fn cp_bound(
    action: &ClassicalAction,
    rho: &DensityMatrix,
    spectrum: &EnergySpectrum,
    xp: usize,
    yp: usize,
) -> Result<f64> {
    let n = spectrum.dim();
    check_dim(n, rho.dim())?;
    check_dim(n, action.p.dim())?;
    if xp >= n || yp >= n {
        return Err(Error::InvalidInput(format!("indices ({xp}, {yp}) out of range for dimension {n}")));
    }
    let e = spectrum.energies();
    let delta = default_delta(spectrum);
    let omega = e[xp] - e[yp];
    let mut total = 0.0;
    for x in 0..n {
        for y in 0..n {
            if (e[x] - e[y] - omega).abs() <= delta {
                total += (action.p.get(xp, x) * action.p.get(yp, y)).sqrt() * rho.get(x, y).norm();
            }
        }
    }
    Ok(total)
}

/// `e^{-β ΔE}`: the largest ratio `|σ_12| / |ρ_01|` on an equispaced three
/// level system with gap `ΔE`.
pub fn mode_shift_bound(ctx: &GibbsContext, de: f64) -> Result<f64> {
    let e = ctx.energies();
    let scale = de.abs().max(1.0);
    if e.len() != 3 || (e[1] - e[0] - de).abs() > 1e-9 * scale || (e[2] - e[1] - de).abs() > 1e-9 * scale {
        return Err(Error::InvalidInput(format!(
            "expected an equispaced three-level spectrum with gap {de}, got {e:?}"
        )));
    }
    Ok((-ctx.beta() * de).exp())
}

/// Mode-by-mode action agrees with the action on the whole operator, for
/// every mode of `m`; returns the largest discrepancy.
pub fn mode_preservation_defect(ch: &QuantumChannel, m: &CMat, spectrum: &EnergySpectrum) -> Result<f64> {
    check_dim(spectrum.dim(), ch.dim())?;
    let bohr = bohr_spectrum(spectrum, default_delta(spectrum))?;
    let delta = default_delta(spectrum);
    let out = ch.apply_operator(m);
    let mut worst: f64 = 0.0;
    for &w in &bohr.frequencies {
        let input = super::modes::project_mode(m, spectrum, w, delta)?;
        let mapped = ch.apply_operator(&input);
        let want = super::modes::project_mode(&out, spectrum, w, delta)?;
        worst = worst.max(linalg::max_abs(&(mapped - want)));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real;
    use crate::prob::ProbVec;
    use approx::assert_abs_diff_eq;

    fn qubit() -> EnergySpectrum {
        EnergySpectrum::new(vec![0.0, 1.0]).unwrap()
    }

    fn hadamard() -> QuantumChannel {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        QuantumChannel::unitary(CMat::from_row_slice(2, 2, &[real(h), real(h), real(h), real(-h)])).unwrap()
    }

    #[test]
    fn covariance_examples() {
        assert!(channel_covariance_check(&QuantumChannel::dephasing(&qubit()), &qubit(), 1e-12).unwrap());
        assert!(channel_covariance_check(&QuantumChannel::identity(2), &qubit(), 1e-12).unwrap());
        assert!(!channel_covariance_check(&hadamard(), &qubit(), 1e-3).unwrap());
        // the Hadamard turns the population |0⟩⟨0| into the coherent |+⟩⟨+|
        let j = hadamard().choi();
        assert_abs_diff_eq!(j[(0, 2)].re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn gibbs_preservation() {
        let ctx = GibbsContext::from_energies(vec![0.0, 1.0], 0.5).unwrap();
        assert!(gibbs_preserving_check(&QuantumChannel::identity(2), &ctx, 1e-12).unwrap());
        let ground = StochasticMatrix::replacement(&ProbVec::sharp(2, 0).unwrap());
        assert!(!gibbs_preserving_check(&QuantumChannel::from_stochastic(&ground), &ctx, 1e-3).unwrap());
        let thermalise = StochasticMatrix::replacement(ctx.gibbs());
        assert!(gibbs_preserving_check(&QuantumChannel::from_stochastic(&thermalise), &ctx, 1e-12).unwrap());
    }

    #[test]
    fn validation_and_composition() {
        let bad = vec![CMat::identity(2, 2).scale(0.9)];
        assert!(QuantumChannel::new(bad).is_err());
        let both = hadamard().after(&hadamard()).unwrap();
        let out = both.apply(&DensityMatrix::plus()).unwrap();
        assert!(linalg::max_abs(&(out.matrix() - DensityMatrix::plus().matrix())) < 1e-15);
        let pd = QuantumChannel::partial_dephasing(&qubit(), 0.25).unwrap();
        assert_abs_diff_eq!(pd.apply(&DensityMatrix::plus()).unwrap().get(0, 1).re, 0.375, epsilon = 1e-15);
    }

    #[test]
    fn cp_bound_examples() {
        let plus = DensityMatrix::plus();
        let id = ClassicalAction::from(StochasticMatrix::identity(2));
        assert_abs_diff_eq!(cp_bound(&id, &plus, &qubit(), 0, 1).unwrap(), 0.5, epsilon = 1e-15);

        let s = EnergySpectrum::equispaced(3, 1.0).unwrap();
        let rho = DensityMatrix::new(CMat::from_row_slice(
            3,
            3,
            &[real(0.5), real(0.3), real(0.0), real(0.3), real(0.3), real(0.0), real(0.0), real(0.0), real(0.2)],
        ))
        .unwrap();
        let p = StochasticMatrix::from_rows(&[
            vec![0.7, 0.2, 0.1],
            vec![0.2, 0.5, 0.3],
            vec![0.1, 0.3, 0.6],
        ])
        .unwrap();
        let bound = cp_bound(&ClassicalAction::from(p.clone()), &rho, &s, 1, 2).unwrap();
        assert_abs_diff_eq!(bound, (p.get(1, 0) * p.get(2, 1)).sqrt() * 0.3, epsilon = 1e-15);
    }

    #[test]
    fn trit_bound() {
        let ctx = GibbsContext::from_energies(vec![0.0, 1.0, 2.0], 1.0).unwrap();
        assert_abs_diff_eq!(mode_shift_bound(&ctx, 1.0).unwrap(), (-1.0f64).exp(), epsilon = 1e-15);
        assert_eq!(mode_shift_bound(&ctx.with_beta(0.0).unwrap(), 1.0).unwrap(), 1.0);
        assert!(mode_shift_bound(&ctx, 0.5).is_err());
    }

    #[test]
    fn classical_action_reads_populations() {
        let g = StochasticMatrix::from_rows(&[vec![0.9, 0.3], vec![0.1, 0.7]]).unwrap();
        let ch = QuantumChannel::from_stochastic(&g);
        assert!(ch.classical_action().p.max_abs_diff(&g) < 1e-15);
    }
}
