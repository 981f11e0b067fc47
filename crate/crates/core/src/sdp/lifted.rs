use num_complex::Complex64;

use crate::error::{invalid_arg, Result};
use crate::linalg::{CMatrix, CVector};

/// `gain(v̄) = v̄^H matrix v̄ + offset` for `v̄ = [v; 1]`.
///
/// Also keeps the linear pieces: the gain equals `|alpha + v^H phi|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedForm {
    pub matrix: CMatrix,
    pub offset: f64,
    pub phi: CVector,
    pub alpha: Complex64,
}

impl LiftedForm {
    fn from_parts(phi: CVector, alpha: Complex64) -> Self {
        let n = phi.len();
        let mut matrix = CMatrix::zeros(n + 1, n + 1);
        matrix.view_mut((0, 0), (n, n)).copy_from(&(&phi * phi.adjoint()));
        for i in 0..n {
            matrix[(i, n)] = phi[i] * alpha.conj();
            matrix[(n, i)] = alpha * phi[i].conj();
        }
        Self {
            matrix,
            offset: alpha.norm_sqr(),
            phi,
            alpha,
        }
    }

    /// Gain for the phase vector `v` (length N), via the linear pieces.
    pub fn gain(&self, v: &CVector) -> f64 {
        (self.alpha + v.dotc(&self.phi)).norm_sqr()
    }

    /// `v̄^H matrix v̄ + offset`, evaluated through the matrix.
    pub fn quadratic(&self, v_bar: &CVector) -> f64 {
        (v_bar.adjoint() * &self.matrix * v_bar)[0].re + self.offset
    }
}

/// Single-antenna form: `|h + v^H diag(g^H) h_as|²` with scalar `h` and `h_as` of length N.
pub fn build_lifted_t(h: Complex64, g: &CVector, h_as: &CVector) -> Result<LiftedForm> {
    if g.len() != h_as.len() {
        return Err(invalid_arg("g and h_as must have the same length"));
    }
    let phi = g.zip_map(h_as, |gi, hi| gi.conj() * hi);
    Ok(LiftedForm::from_parts(phi, h.conj()))
}

/// Multi-antenna form for a fixed beamformer: `|(h^H + v^H diag(g^H) H_as) w|²`.
pub fn build_lifted_r(h: &CVector, g: &CVector, h_as: &CMatrix, w: &CVector) -> Result<LiftedForm> {
    let m = h.len();
    let n = g.len();
    if w.len() != m {
        return Err(invalid_arg("beamformer length differs from antenna count"));
    }
    if n > 0 && h_as.shape() != (n, m) {
        return Err(invalid_arg("H_as shape does not match (N, M)"));
    }
    let alpha = h.dotc(w);
    let phi = if n > 0 {
        let hw = h_as * w;
        g.zip_map(&hw, |gi, x| gi.conj() * x)
    } else {
        CVector::zeros(0)
    };
    Ok(LiftedForm::from_parts(phi, alpha))
}
