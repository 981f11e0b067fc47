//! Dense complex linear-algebra helpers shared by the solvers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (DVector<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (DVector::zeros(0), CMatrix::zeros(0, 0));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Eigenvalues only (unsorted); cheaper than [`hermitian_eigen`].
pub fn hermitian_eigenvalues(m: &CMatrix) -> DVector<f64> {
    if m.is_empty() {
        return DVector::zeros(0);
    }
    hermitian_part(m).symmetric_eigenvalues()
}

pub fn lambda_min(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn lambda_max(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn split(m: &CMatrix) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

/// Complex product through real kernels; much faster than the generic complex path.
pub fn cmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    if a.nrows().max(a.ncols()).max(b.ncols()) < 12 {
        return a * b;
    }
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    let rr = &ar * &br - &ai * &bi;
    let ii = &ar * &bi + &ai * &br;
    rr.zip_map(&ii, Complex64::new)
}

/// `a * b * a^H`.
pub fn sandwich(a: &CMatrix, b: &CMatrix) -> CMatrix {
    cmul(&cmul(a, b), &a.adjoint())
}

/// `(m + m^H) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = if m.nrows() >= m.ncols() {
        m.adjoint() * m
    } else {
        m * m.adjoint()
    };
    lambda_max(&gram).max(0.0).sqrt()
}

/// Real part of `Tr(a^H b)`; equals `Tr(a b)` when `a` is Hermitian.
pub fn frobenius_inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Largest absolute deviation from Hermitian symmetry.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// One draw of `CN(0, variance)`: real and imaginary parts each `N(0, variance / 2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

pub fn complex_gaussian_vector<R: Rng + ?Sized>(rng: &mut R, len: usize, variance: f64) -> CVector {
    CVector::from_fn(len, |_, _| complex_gaussian(rng, variance))
}

pub fn complex_gaussian_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    variance: f64,
) -> CMatrix {
    // Row-major fill keeps the draw order independent of nalgebra's storage layout.
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = complex_gaussian(rng, variance);
        }
    }
    m
}

pub(crate) fn unit_phase(angle: f64) -> Complex64 {
    Complex64::from_polar(1.0, angle)
}

/// Phase of `z` as a unit-modulus number; zero maps to 1.
pub(crate) fn phase_of(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r > 0.0 && r.is_finite() {
        z / r
    } else {
        ONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let a = complex_gaussian_matrix(rng, n, n, 1.0);
        hermitian_part(&a)
    }

    #[test]
    fn eigen_reconstructs_hermitian_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 2, 5, 9] {
            let h = random_hermitian(&mut rng, n);
            let (vals, vecs) = hermitian_eigen(&h);
            let d = CMatrix::from_diagonal(&vals.map(|x| Complex64::new(x, 0.0)));
            let back = &vecs * d * vecs.adjoint();
            assert!((back - &h).norm() < 1e-10 * (1.0 + h.norm()));
            for w in vals.as_slice().windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn spectral_norm_of_rank_one_is_product_of_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = complex_gaussian_vector(&mut rng, 4, 1.0);
        let b = complex_gaussian_vector(&mut rng, 3, 1.0);
        let m = &a * b.adjoint();
        assert!((spectral_norm(&m) - a.norm() * b.norm()).abs() < 1e-10);
    }

    #[test]
    fn gaussian_entries_have_requested_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 100_000;
        let v = complex_gaussian_vector(&mut rng, n, 2.5);
        let mean_power = v.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean_power / 2.5 - 1.0).abs() < 0.03);
    }
}
