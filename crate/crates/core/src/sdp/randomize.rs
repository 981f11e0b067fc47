use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{hermitian_eigen, phase_of, CMatrix, CVector};

/// Result of rank-one recovery from a relaxed phase matrix.
#[derive(Debug, Clone)]
pub struct RandomizeOutcome {
    /// Unit-modulus phase vector of length N (homogenizing entry divided out).
    pub v: CVector,
    pub feasible: bool,
    pub score: f64,
    /// Index of the winning candidate; 0 is the principal eigenvector.
    pub candidate: usize,
}

fn dehomogenize(v_bar: &CVector) -> CVector {
    let n = v_bar.len() - 1;
    let anchor = phase_of(v_bar[n]).conj();
    CVector::from_fn(n, |i, _| phase_of(v_bar[i] * anchor))
}

/// Phases of the leading eigenvector of `v_mat`, de-homogenized.
pub fn leading_phase(v_mat: &CMatrix) -> CVector {
    let (_, vecs) = hermitian_eigen(v_mat);
    let n = v_mat.nrows();
    dehomogenize(&vecs.column(n - 1).into_owned())
}

/// Gaussian randomization over the `(N+1) x (N+1)` relaxed matrix `v_mat`.
///
/// `score` maps a phase vector to `(feasible, value)`. The principal eigenvector is
/// scored first, then `l` random draws; the feasible candidate with the largest value
/// wins (earliest on ties). If no candidate is feasible the largest-value one is
/// returned with `feasible = false`.
pub fn gaussian_randomize<R, F>(v_mat: &CMatrix, l: usize, mut score: F, rng: &mut R) -> RandomizeOutcome
where
    R: Rng + ?Sized,
    F: FnMut(&CVector) -> (bool, f64),
{
    let size = v_mat.nrows();
    let (vals, vecs) = hermitian_eigen(v_mat);
    let top = vals[size - 1].max(0.0);

    let mut best: Option<RandomizeOutcome> = None;
    let mut consider = |v: CVector, idx: usize, best: &mut Option<RandomizeOutcome>| {
        let (feasible, value) = score(&v);
        let better = match best {
            None => true,
            Some(b) => (feasible && !b.feasible) || (feasible == b.feasible && value > b.score),
        };
        if better {
            *best = Some(RandomizeOutcome {
                v,
                feasible,
                score: value,
                candidate: idx,
            });
        }
    };

    consider(dehomogenize(&vecs.column(size - 1).into_owned()), 0, &mut best);
    let second = if size >= 2 { vals[size - 2].max(0.0) } else { 0.0 };
    let rank_one = top <= 0.0 || second <= 1e-8 * top;
    if !rank_one {
        // Only directions carrying weight contribute to X Σ^{1/2} e.
        let kept: Vec<usize> = (0..size).filter(|&k| vals[k] > 1e-12 * top).collect();
        let mut basis = CMatrix::zeros(size, kept.len());
        for (c, &k) in kept.iter().enumerate() {
            basis.set_column(c, &(vecs.column(k) * Complex64::new(vals[k].sqrt(), 0.0)));
        }
        let half = std::f64::consts::FRAC_1_SQRT_2;
        for idx in 1..=l {
            let e = CVector::from_fn(kept.len(), |_, _| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re * half, im * half)
            });
            let cand = &basis * e;
            consider(dehomogenize(&cand), idx, &mut best);
        }
    }
    best.expect("the principal eigenvector is always scored")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_phase;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_one_recovers_phases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let theta = [0.3, -2.0, 1.4, 2.9];
        let mut v_bar = CVector::from_iterator(5, theta.iter().map(|t| unit_phase(*t)).chain([unit_phase(0.7)]));
        v_bar *= Complex64::new(1.0, 0.0);
        let vm = &v_bar * v_bar.adjoint();
        let out = gaussian_randomize(&vm, 100, |_| (true, 0.0), &mut rng);
        assert_eq!(out.candidate, 0);
        for i in 0..4 {
            let expect = unit_phase(theta[i] - 0.7);
            assert!((out.v[i] - expect).norm() < 1e-10);
        }
    }

    #[test]
    fn candidates_are_unit_modulus_and_best_feasible_wins() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let vm = CMatrix::identity(4, 4);
        let mut seen = 0;
        let out = gaussian_randomize(
            &vm,
            50,
            |v| {
                seen += 1;
                for z in v.iter() {
                    assert!((z.norm() - 1.0).abs() < 1e-14);
                }
                let value = v[0].re;
                (v[1].re > 0.0, value)
            },
            &mut rng,
        );
        assert_eq!(seen, 51);
        assert!(out.feasible);
        assert!(out.v[1].re > 0.0);
    }

    #[test]
    fn infeasible_fallback_is_flagged() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let out = gaussian_randomize(&CMatrix::identity(3, 3), 10, |v| (false, v[0].re), &mut rng);
        assert!(!out.feasible);
    }
}
