//! Element-wise phase refinement.
//!
//! Randomized SDP solutions are good but rarely stationary for the joint
//! (phase, power/beamformer) objective. A few sweeps of one-element-at-a-time
//! maximization close the remaining gap. Each element update is a grid scan
//! followed by a golden-section search around the best grid point.

use num_complex::Complex64;

use crate::channel::ChannelRealization;
use crate::linalg::{unit_phase, CMatrix, CVector};

const GRID: usize = 32;
const GOLDEN_ITERS: usize = 40;
const MAX_SWEEPS: usize = 30;

/// Bob's and Willie's effective rows, maintained incrementally as phases change.
#[derive(Debug, Clone)]
pub(crate) struct Cascade {
    /// Row `i` is `conj(g_sb,i) H_as[i, :]`.
    pb: CMatrix,
    pw: CMatrix,
    pub(crate) eff_b: Vec<Complex64>,
    pub(crate) eff_w: Vec<Complex64>,
    pub(crate) v: CVector,
}

impl Cascade {
    pub(crate) fn new(ch: &ChannelRealization, v: &CVector) -> Self {
        let n = ch.elements();
        let m = ch.antennas();
        let mut pb = CMatrix::zeros(n, m);
        let mut pw = CMatrix::zeros(n, m);
        for i in 0..n {
            for j in 0..m {
                pb[(i, j)] = ch.g_sb[i].conj() * ch.h_as[(i, j)];
                pw[(i, j)] = ch.g_sw[i].conj() * ch.h_as[(i, j)];
            }
        }
        let mut eff_b: Vec<Complex64> = ch.h_ab.iter().map(|z| z.conj()).collect();
        let mut eff_w: Vec<Complex64> = ch.h_aw.iter().map(|z| z.conj()).collect();
        for i in 0..n {
            let c = v[i].conj();
            for j in 0..m {
                eff_b[j] += c * pb[(i, j)];
                eff_w[j] += c * pw[(i, j)];
            }
        }
        Self {
            pb,
            pw,
            eff_b,
            eff_w,
            v: v.clone(),
        }
    }

    fn trial(&self, i: usize, vi: Complex64, b: &mut [Complex64], w: &mut [Complex64]) {
        let delta = vi.conj() - self.v[i].conj();
        for j in 0..self.eff_b.len() {
            b[j] = self.eff_b[j] + delta * self.pb[(i, j)];
            w[j] = self.eff_w[j] + delta * self.pw[(i, j)];
        }
    }

    fn commit(&mut self, i: usize, vi: Complex64) {
        let delta = vi.conj() - self.v[i].conj();
        for j in 0..self.eff_b.len() {
            self.eff_b[j] += delta * self.pb[(i, j)];
            self.eff_w[j] += delta * self.pw[(i, j)];
        }
        self.v[i] = vi;
    }

    /// Recomputes the rows from scratch to shed accumulated rounding.
    fn refresh(&mut self, ch: &ChannelRealization) {
        let v = self.v.clone();
        *self = Self::new(ch, &v);
    }
}

/// Coordinate ascent on `objective(eff_b, eff_w)`; returns the final value.
///
/// The objective must be a deterministic function of the two effective rows.
pub(crate) fn coordinate_ascent<F>(ch: &ChannelRealization, cascade: &mut Cascade, objective: F) -> f64
where
    F: Fn(&[Complex64], &[Complex64]) -> f64,
{
    let n = cascade.v.len();
    let m = cascade.eff_b.len();
    let mut bb = vec![Complex64::new(0.0, 0.0); m];
    let mut ww = vec![Complex64::new(0.0, 0.0); m];
    let mut current = objective(&cascade.eff_b, &cascade.eff_w);
    if n == 0 {
        return current;
    }
    let step = std::f64::consts::TAU / GRID as f64;
    for _ in 0..MAX_SWEEPS {
        let start = current;
        for i in 0..n {
            let mut eval = |angle: f64| {
                cascade.trial(i, unit_phase(angle), &mut bb, &mut ww);
                objective(&bb, &ww)
            };
            let base = cascade.v[i].arg();
            let mut best_angle = base;
            let mut best = current;
            for k in 1..GRID {
                let angle = base + step * k as f64;
                let val = eval(angle);
                if val > best {
                    best = val;
                    best_angle = angle;
                }
            }
            // Golden-section refinement on the bracket around the best grid angle.
            let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
            let (mut lo, mut hi) = (best_angle - step, best_angle + step);
            let mut x1 = hi - inv_phi * (hi - lo);
            let mut x2 = lo + inv_phi * (hi - lo);
            let mut f1 = eval(x1);
            let mut f2 = eval(x2);
            for _ in 0..GOLDEN_ITERS {
                if f1 < f2 {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + inv_phi * (hi - lo);
                    f2 = eval(x2);
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - inv_phi * (hi - lo);
                    f1 = eval(x1);
                }
            }
            let (xa, fa) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
            if fa > best {
                best = fa;
                best_angle = xa;
            }
            if best > current {
                cascade.commit(i, unit_phase(best_angle));
                current = best;
            }
        }
        cascade.refresh(ch);
        current = objective(&cascade.eff_b, &cascade.eff_w);
        if current - start <= 1e-10 * current.abs() {
            break;
        }
    }
    current
}
