//! Closed-form MISO beamforming under a single interference-power cap.
//!
//! Maximizes `|b w|²` subject to `‖w‖² <= p` and `|a w|² <= e`, where `b` and `a`
//! are Bob's and Willie's effective channel rows. The optimum lies in the span of
//! Bob's MRT direction and its projection onto Willie's null space.

use num_complex::Complex64;

use crate::linalg::CVector;

/// Below this the two channel directions are treated as parallel.
const ALIGNED: f64 = 1e-12;

struct Angles {
    nb2: f64,
    na2: f64,
    /// `|ê^H u|`, the cosine between the two channel directions.
    cos: f64,
    /// `ê^H u` itself.
    c: Complex64,
    /// `‖u - ê ê^H u‖`, computed directly rather than as `sqrt(1 - cos²)`.
    sin: f64,
}

fn angles(b: &[Complex64], a: &[Complex64]) -> Angles {
    let nb2: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    let na2: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    // With column forms bb = b^H and aa = a^H: aa^H bb = Σ a_j conj(b_j).
    let inner: Complex64 = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
    let denom = (na2 * nb2).sqrt();
    let c = if denom > 0.0 { inner / denom } else { Complex64::new(0.0, 0.0) };
    let sin = if denom > 0.0 {
        let (nb, na) = (nb2.sqrt(), na2.sqrt());
        b.iter()
            .zip(a)
            .map(|(y, x)| (y.conj() / nb - x.conj() / na * c).norm_sqr())
            .sum::<f64>()
            .sqrt()
    } else {
        1.0
    };
    Angles {
        nb2,
        na2,
        cos: c.norm().min(1.0),
        c,
        sin,
    }
}

/// Optimal value of `|b w|²`.
pub(crate) fn constrained_gain(b: &[Complex64], a: &[Complex64], p: f64, e: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    let ang = angles(b, a);
    if ang.na2 == 0.0 || p * ang.cos * ang.cos * ang.na2 <= e {
        return p * ang.nb2;
    }
    let e = e.max(0.0);
    let x0 = (e / ang.na2).sqrt();
    let s = if ang.sin <= ALIGNED { 0.0 } else { ang.sin };
    let amp = ang.cos * x0 + s * (p - x0 * x0).max(0.0).sqrt();
    ang.nb2 * amp * amp
}

/// Beamformer attaining [`constrained_gain`].
pub(crate) fn constrained_beamformer(b: &[Complex64], a: &[Complex64], p: f64, e: f64) -> CVector {
    let m = b.len();
    let ang = angles(b, a);
    if p <= 0.0 || ang.nb2 == 0.0 {
        return CVector::zeros(m);
    }
    let nb = ang.nb2.sqrt();
    let u = CVector::from_iterator(m, b.iter().map(|z| z.conj() / nb));
    if ang.na2 == 0.0 || p * ang.cos * ang.cos * ang.na2 <= e {
        return u * Complex64::new(p.sqrt(), 0.0);
    }
    let e = e.max(0.0);
    let na = ang.na2.sqrt();
    let e_hat = CVector::from_iterator(m, a.iter().map(|z| z.conj() / na));
    let x0 = (e / ang.na2).sqrt();
    // Component of u orthogonal to ê.
    let perp = &u - &e_hat * ang.c;
    let s = ang.sin;
    if s <= ALIGNED {
        // Bob and Willie aligned: shrink MRT onto the budget.
        return u * Complex64::new(x0, 0.0);
    }
    let f = perp / Complex64::new(s, 0.0);
    let phase = ang.c / ang.cos;
    let y = (p - x0 * x0).max(0.0).sqrt();
    e_hat * (phase * x0) + f * Complex64::new(y, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::complex_gaussian_vector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn row(v: &CVector) -> Vec<Complex64> {
        v.iter().copied().collect()
    }

    fn gain(r: &[Complex64], w: &CVector) -> f64 {
        r.iter().zip(w.iter()).map(|(x, y)| x * y).sum::<Complex64>().norm_sqr()
    }

    #[test]
    fn beamformer_attains_gain_and_respects_caps() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for m in 1..=6 {
            for _ in 0..50 {
                let b = row(&complex_gaussian_vector(&mut rng, m, 1.0));
                let a = row(&complex_gaussian_vector(&mut rng, m, 1.0));
                let p = 2.0;
                for e in [1e-3, 0.1, 1.0, 100.0] {
                    let w = constrained_beamformer(&b, &a, p, e);
                    assert!(w.norm_squared() <= p * (1.0 + 1e-12));
                    assert!(gain(&a, &w) <= e * (1.0 + 1e-9) + 1e-15);
                    let g = constrained_gain(&b, &a, p, e);
                    assert!((gain(&b, &w) - g).abs() <= 1e-9 * g.max(1e-12));
                }
            }
        }
    }
}
