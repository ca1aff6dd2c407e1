//! Small dense complex linear algebra on top of `nalgebra`.

use nalgebra::{Complex, DMatrix};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Eigen-decomposition of a Hermitian matrix: eigenvalues in ascending order
/// and the unitary whose columns are the matching eigenvectors.
pub fn hermitian_eig(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = nalgebra::SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(m.nrows(), m.ncols(), |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    hermitian_eig(m).0
}

/// `f(M) = V f(Λ) V†` for Hermitian `M`.
pub fn hermitian_fn(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (values, vectors) = hermitian_eig(m);
    let n = values.len();
    let mut scaled = vectors.clone();
    for (j, lambda) in values.iter().enumerate() {
        let fj = real(f(*lambda));
        for i in 0..n {
            scaled[(i, j)] *= fj;
        }
    }
    scaled * vectors.adjoint()
}

/// Power `M^p` of a positive semidefinite matrix, restricted to its support.
///
/// Eigenvalues below `cutoff` are treated as exact zeros, so negative powers
/// act as pseudo-inverses.
pub fn psd_power(m: &CMat, p: f64, cutoff: f64) -> CMat {
    hermitian_fn(m, |x| if x > cutoff { x.powf(p) } else { 0.0 })
}

/// Von Neumann entropy `-tr ρ log ρ` with eigenvalues clamped at zero.
pub fn von_neumann_entropy(rho: &CMat) -> f64 {
    hermitian_eigenvalues(rho)
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.ln())
        .sum()
}

pub fn trace(m: &CMat) -> C64 {
    m.diagonal().sum()
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMat::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// `|a⟩⟨b|` in dimension `n`.
pub fn ketbra(n: usize, a: usize, b: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(a, b)] = ONE;
    m
}

/// `|ψ⟩⟨ψ|`.
pub fn projector(psi: &[C64]) -> CMat {
    let n = psi.len();
    CMat::from_fn(n, n, |i, j| psi[i] * psi[j].conj())
}

pub fn diag_real(d: &[f64]) -> CMat {
    let n = d.len();
    CMat::from_fn(n, n, |i, j| if i == j { real(d[i]) } else { ZERO })
}

/// Sum of singular values.
pub fn trace_norm(m: &CMat) -> f64 {
    m.clone().svd(false, false).singular_values.sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn eig_reconstructs_matrix() {
        let m = CMat::from_row_slice(2, 2, &[real(2.0), c(0.0, 1.0), c(0.0, -1.0), real(2.0)]);
        let (vals, vecs) = hermitian_eig(&m);
        assert_abs_diff_eq!(vals[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vals[1], 3.0, epsilon = 1e-12);
        let back = &vecs * diag_real(&vals) * vecs.adjoint();
        assert!(max_abs(&(back - m)) < 1e-12);
    }

    #[test]
    fn sqrt_squares_back() {
        let m = CMat::from_row_slice(2, 2, &[real(0.7), c(0.1, 0.2), c(0.1, -0.2), real(0.3)]);
        let r = psd_power(&m, 0.5, 0.0);
        assert!(max_abs(&(&r * &r - &m)) < 1e-12);
    }

    #[test]
    fn kron_layout() {
        let a = ketbra(2, 0, 1);
        let b = ketbra(3, 2, 0);
        let k = kron(&a, &b);
        assert_eq!(k[(2, 3)], ONE);
        assert_eq!(k.iter().filter(|z| z.norm() > 0.0).count(), 1);
    }

    #[test]
    fn entropy_of_maximally_mixed() {
        let m = diag_real(&[0.25; 4]);
        assert_abs_diff_eq!(von_neumann_entropy(&m), 4f64.ln(), epsilon = 1e-14);
    }
}
