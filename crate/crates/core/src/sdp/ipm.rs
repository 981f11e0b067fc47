//! Primal-dual interior-point method for small dense Hermitian SDPs.
//!
//! Internally the problem is put in minimization form
//!
//! ```text
//!   min <C', X>  s.t.  <A_k, X> + s_k = b_k,   X_jj = 1 (optional),   X ⪰ 0, s ≥ 0
//! ```
//!
//! with `C' = -C / ‖C‖` and each `A_k` scaled to unit Frobenius norm. Search
//! directions use Nesterov–Todd scaling with a Mehrotra predictor-corrector step.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;

use super::{SdpProblem, SdpSolution, SdpStatus};
use crate::error::{invalid_arg, Result};
use crate::linalg::{
    cmul, sandwich, frobenius_inner, hermitian_defect, hermitian_eigen, hermitian_part, lambda_max, lambda_min, CMatrix,
};

const MAX_ITERS: usize = 200;
const FEAS_TOL: f64 = 1e-9;
const GAP_TOL: f64 = 1e-8;
const STEP_FRACTION: f64 = 0.98;

struct Data {
    n: usize,
    c: CMatrix,
    c_scale: f64,
    a: Vec<CMatrix>,
    b: Vec<f64>,
    diag: bool,
}

impl Data {
    fn p(&self) -> usize {
        self.a.len()
    }

    fn m(&self) -> usize {
        self.p() + if self.diag { self.n } else { 0 }
    }

    fn rhs(&self) -> DVector<f64> {
        let mut r = DVector::zeros(self.m());
        for (k, b) in self.b.iter().enumerate() {
            r[k] = *b;
        }
        if self.diag {
            for j in 0..self.n {
                r[self.p() + j] = 1.0;
            }
        }
        r
    }

    fn op(&self, x: &CMatrix) -> DVector<f64> {
        let mut out = DVector::zeros(self.m());
        for (k, a) in self.a.iter().enumerate() {
            out[k] = frobenius_inner(a, x);
        }
        if self.diag {
            for j in 0..self.n {
                out[self.p() + j] = x[(j, j)].re;
            }
        }
        out
    }

    fn adjoint(&self, y: &DVector<f64>) -> CMatrix {
        let mut out = CMatrix::zeros(self.n, self.n);
        for (k, a) in self.a.iter().enumerate() {
            if y[k] != 0.0 {
                out += a * Complex64::new(y[k], 0.0);
            }
        }
        if self.diag {
            for j in 0..self.n {
                out[(j, j)] += y[self.p() + j];
            }
        }
        out
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn identity(n: usize, scale: f64) -> CMatrix {
    CMatrix::from_diagonal_element(n, n, real(scale))
}

fn prepare(problem: &SdpProblem) -> Result<std::result::Result<Data, ()>> {
    let n = problem.objective.nrows();
    if problem.objective.ncols() != n || n == 0 {
        return Err(invalid_arg("objective must be a non-empty square matrix"));
    }
    let herm_tol = |m: &CMatrix| 1e-12 * (1.0 + m.norm());
    if hermitian_defect(&problem.objective) > herm_tol(&problem.objective) {
        return Err(invalid_arg("objective is not Hermitian"));
    }
    let c_norm = problem.objective.norm();
    let c_scale = if c_norm > 0.0 { c_norm } else { 1.0 };
    let c = hermitian_part(&problem.objective) * real(-1.0 / c_scale);

    let mut a = Vec::new();
    let mut b = Vec::new();
    for (k, (ak, bk)) in problem.ineq_constraints.iter().enumerate() {
        if ak.shape() != (n, n) {
            return Err(invalid_arg(format!("constraint {k} has the wrong shape")));
        }
        if hermitian_defect(ak) > herm_tol(ak) {
            return Err(invalid_arg(format!("constraint {k} is not Hermitian")));
        }
        if !bk.is_finite() {
            return Err(invalid_arg(format!("constraint {k} has a non-finite bound")));
        }
        let norm = ak.norm();
        if norm == 0.0 {
            if *bk < 0.0 {
                return Ok(Err(()));
            }
            continue;
        }
        a.push(hermitian_part(ak) * real(1.0 / norm));
        b.push(bk / norm);
    }
    Ok(Ok(Data {
        n,
        c,
        c_scale,
        a,
        b,
        diag: problem.unit_diagonal,
    }))
}

/// Nesterov–Todd scaling `W = G G^H` with `G^H Z G = G^{-1} X G^{-H} = D`.
struct Scaling {
    g: CMatrix,
    g_inv: CMatrix,
    w: CMatrix,
    d: DVector<f64>,
}

fn nt_scaling(x: &CMatrix, z: &CMatrix) -> Option<Scaling> {
    let n = x.nrows();
    let l = Cholesky::new(x.clone())?.l();
    let l_inv = l.solve_lower_triangular(&identity(n, 1.0))?;
    let lzl = hermitian_part(&sandwich(&l.adjoint(), z));
    let (lam, u) = hermitian_eigen(&lzl);
    if lam.iter().any(|&v| !(v > 0.0)) {
        return None;
    }
    let q = lam.map(|v| v.powf(-0.25));
    let mut lu = cmul(&l, &u);
    for (j, s) in q.iter().enumerate() {
        lu.column_mut(j).scale_mut(*s);
    }
    let g = lu;
    let mut g_inv = cmul(&u.adjoint(), &l_inv);
    for (i, s) in q.iter().enumerate() {
        g_inv.row_mut(i).scale_mut(1.0 / s);
    }
    let w = hermitian_part(&cmul(&g, &g.adjoint()));
    let d = lam.map(f64::sqrt);
    Some(Scaling { g, g_inv, w, d })
}

/// Largest step `α` keeping `X + α ΔX ⪰ 0`.
fn max_psd_step(x: &CMatrix, dx: &CMatrix) -> f64 {
    let n = x.nrows();
    let Some(chol) = Cholesky::new(x.clone()) else {
        return 0.0;
    };
    let l = chol.l();
    let Some(l_inv) = l.solve_lower_triangular(&identity(n, 1.0)) else {
        return 0.0;
    };
    let m = hermitian_part(&sandwich(&l_inv, dx));
    let lmin = lambda_min(&m);
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

fn max_slack_step(s: &DVector<f64>, ds: &DVector<f64>) -> f64 {
    let mut alpha = f64::INFINITY;
    for (si, dsi) in s.iter().zip(ds.iter()) {
        if *dsi < 0.0 {
            alpha = alpha.min(-si / dsi);
        }
    }
    alpha
}

fn solve_spd(m: &DMatrix<f64>, r: &DVector<f64>) -> Option<DVector<f64>> {
    if let Some(ch) = Cholesky::new(m.clone()) {
        return Some(ch.solve(r));
    }
    let scale = m.diagonal().amax().max(1e-300);
    let mut reg = m.clone();
    for i in 0..reg.nrows() {
        reg[(i, i)] += 1e-13 * scale;
    }
    if let Some(ch) = Cholesky::new(reg) {
        return Some(ch.solve(r));
    }
    m.clone().lu().solve(r)
}

struct Direction {
    dx: CMatrix,
    dz: CMatrix,
    dy: DVector<f64>,
    ds: DVector<f64>,
    dzs: DVector<f64>,
}

struct Iterate {
    x: CMatrix,
    z: CMatrix,
    y: DVector<f64>,
    s: DVector<f64>,
    zs: DVector<f64>,
}

struct Residuals {
    rp: DVector<f64>,
    rd: CMatrix,
    rds: DVector<f64>,
}

/// Schur complement `M_ij = <A_i, W A_j W>` plus the slack scaling on the inequality rows.
fn schur(data: &Data, w: &CMatrix, g2: &DVector<f64>) -> DMatrix<f64> {
    let p = data.p();
    let m = data.m();
    let mut out = DMatrix::zeros(m, m);
    let wa: Vec<CMatrix> = data.a.iter().map(|a| sandwich(w, a)).collect();
    for k in 0..p {
        for l in k..p {
            let v = frobenius_inner(&data.a[k], &wa[l]);
            out[(k, l)] = v;
            out[(l, k)] = v;
        }
        out[(k, k)] += g2[k];
        if data.diag {
            for j in 0..data.n {
                let v = wa[k][(j, j)].re;
                out[(k, p + j)] = v;
                out[(p + j, k)] = v;
            }
        }
    }
    if data.diag {
        for i in 0..data.n {
            for j in 0..data.n {
                out[(p + i, p + j)] = w[(i, j)].norm_sqr();
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn direction(
    data: &Data,
    sc: &Scaling,
    schur_chol: &DMatrix<f64>,
    res: &Residuals,
    h: &CMatrix,
    hs: &DVector<f64>,
    g: &DVector<f64>,
) -> Option<Direction> {
    let p = data.p();
    let ghg = sandwich(&sc.g, h);
    let wrw = sandwich(&sc.w, &res.rd);
    let mut rhs = &res.rp - data.op(&ghg) + data.op(&wrw);
    for k in 0..p {
        rhs[k] += -g[k] * hs[k] + g[k] * g[k] * res.rds[k];
    }
    let dy = solve_spd(schur_chol, &rhs)?;
    let dz = hermitian_part(&(&res.rd - data.adjoint(&dy)));
    let dx = hermitian_part(&(ghg - sandwich(&sc.w, &dz)));
    let mut dzs = DVector::zeros(p);
    let mut ds = DVector::zeros(p);
    for k in 0..p {
        dzs[k] = res.rds[k] - dy[k];
        ds[k] = g[k] * hs[k] - g[k] * g[k] * dzs[k];
    }
    Some(Direction { dx, dz, dy, ds, dzs })
}

fn residuals(data: &Data, it: &Iterate, b: &DVector<f64>) -> Residuals {
    let p = data.p();
    let mut rp = b - data.op(&it.x);
    for k in 0..p {
        rp[k] -= it.s[k];
    }
    let rd = hermitian_part(&(&data.c - data.adjoint(&it.y) - &it.z));
    let mut rds = DVector::zeros(p);
    for k in 0..p {
        rds[k] = -it.y[k] - it.zs[k];
    }
    Residuals { rp, rd, rds }
}

/// Certificate check: a dual ray `y` (inequality part ≤ 0) with `b^T y > 0` and
/// `Σ y_k A_k ⪯ ε b^T y I` rules out every feasible `X` of trace below `1/ε`.
fn looks_infeasible(data: &Data, it: &Iterate, b: &DVector<f64>) -> bool {
    let p = data.p();
    let mut y = it.y.clone();
    for k in 0..p {
        y[k] = -it.zs[k];
    }
    let bty = b.dot(&y);
    if !(bty > 0.0) {
        return false;
    }
    let lmax = lambda_max(&data.adjoint(&y));
    lmax <= 1e-8 * bty
}

pub(super) fn solve(problem: &SdpProblem) -> Result<SdpSolution> {
    let data = match prepare(problem)? {
        Ok(d) => d,
        Err(()) => return Ok(infeasible_solution(problem.objective.nrows(), 0)),
    };
    let n = data.n;
    let p = data.p();
    let b = data.rhs();
    let b_norm = b.norm();

    let xi0 = {
        let mut v = (n as f64).sqrt().max(10.0);
        for bk in &data.b {
            v = v.max(n as f64 * (1.0 + bk.abs()) / 2.0);
        }
        v
    };
    let zeta0 = (n as f64).sqrt().max(10.0);
    let mut it = Iterate {
        x: identity(n, xi0),
        z: identity(n, zeta0),
        y: DVector::zeros(data.m()),
        s: DVector::from_element(p, xi0),
        zs: DVector::from_element(p, zeta0),
    };

    let mut best: Option<(f64, CMatrix, usize, f64, f64, f64)> = None;
    let dim = (n + p) as f64;

    for iter in 0..MAX_ITERS {
        let res = residuals(&data, &it, &b);
        let pobj = frobenius_inner(&data.c, &it.x);
        let dobj = b.dot(&it.y);
        let compl = frobenius_inner(&it.x, &it.z) + it.s.dot(&it.zs);
        let mu = compl / dim;
        let pinf = res.rp.norm() / (1.0 + b_norm);
        let dinf = (res.rd.norm() + res.rds.norm()) / (1.0 + data.c.norm());
        let rel_gap = compl.max((pobj - dobj).abs()) / (1.0 + pobj.abs() + dobj.abs());
        let merit = pinf.max(dinf).max(rel_gap * 1e-1);
        if best.as_ref().is_none_or(|bst| merit < bst.0) {
            best = Some((merit, it.x.clone(), iter, pinf, dinf, rel_gap));
        }
        if pinf <= FEAS_TOL && dinf <= FEAS_TOL && rel_gap <= GAP_TOL {
            return Ok(finish(&data, problem, it.x, SdpStatus::Optimal, iter, pinf, dinf, rel_gap));
        }
        if iter > 5 && looks_infeasible(&data, &it, &b) {
            return Ok(infeasible_solution(n, iter));
        }

        let Some(sc) = nt_scaling(&it.x, &it.z) else {
            break;
        };
        let g: DVector<f64> = it.s.zip_map(&it.zs, |s, z| (s / z).sqrt());
        let g2 = g.map(|v| v * v);
        let dsl: DVector<f64> = it.s.zip_map(&it.zs, |s, z| (s * z).sqrt());
        let schur_m = schur(&data, &sc.w, &g2);

        // Predictor (affine scaling).
        let h_aff = CMatrix::from_diagonal(&sc.d.map(|v| real(-v)));
        let hs_aff = -&dsl;
        let Some(aff) = direction(&data, &sc, &schur_m, &res, &h_aff, &hs_aff, &g) else {
            break;
        };
        let ap = max_psd_step(&it.x, &aff.dx).min(max_slack_step(&it.s, &aff.ds)).min(1.0);
        let ad = max_psd_step(&it.z, &aff.dz).min(max_slack_step(&it.zs, &aff.dzs)).min(1.0);
        let x_aff = &it.x + &aff.dx * real(ap);
        let z_aff = &it.z + &aff.dz * real(ad);
        let s_aff = &it.s + &aff.ds * ap;
        let zs_aff = &it.zs + &aff.dzs * ad;
        let mu_aff = (frobenius_inner(&x_aff, &z_aff) + s_aff.dot(&zs_aff)) / dim;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // Corrector with second-order term.
        let dxh = sandwich(&sc.g_inv, &aff.dx);
        let dzh = sandwich(&sc.g.adjoint(), &aff.dz);
        let cross = cmul(&dxh, &dzh) + cmul(&dzh, &dxh);
        let mut h = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut r = -cross[(i, j)];
                if i == j {
                    r += real(2.0 * (sigma * mu - sc.d[i] * sc.d[i]));
                }
                h[(i, j)] = r / (sc.d[i] + sc.d[j]);
            }
        }
        let h = hermitian_part(&h);
        let mut hs = DVector::zeros(p);
        for k in 0..p {
            let dsh = aff.ds[k] / g[k];
            let dzh = aff.dzs[k] * g[k];
            hs[k] = (sigma * mu - dsl[k] * dsl[k] - dsh * dzh) / dsl[k];
        }
        let Some(dir) = direction(&data, &sc, &schur_m, &res, &h, &hs, &g) else {
            break;
        };
        let ap = (STEP_FRACTION * max_psd_step(&it.x, &dir.dx).min(max_slack_step(&it.s, &dir.ds))).min(1.0);
        let ad = (STEP_FRACTION * max_psd_step(&it.z, &dir.dz).min(max_slack_step(&it.zs, &dir.dzs))).min(1.0);
        if !(ap > 0.0 && ad > 0.0) {
            break;
        }
        it.x = hermitian_part(&(&it.x + &dir.dx * real(ap)));
        it.s += &dir.ds * ap;
        it.z = hermitian_part(&(&it.z + &dir.dz * real(ad)));
        it.y += &dir.dy * ad;
        it.zs += &dir.dzs * ad;
    }

    let (_, x, iter, pinf, dinf, gap) = best.expect("at least one iterate is recorded");
    Ok(finish(&data, problem, x, SdpStatus::MaxIterations, iter, pinf, dinf, gap))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    data: &Data,
    problem: &SdpProblem,
    x: CMatrix,
    status: SdpStatus,
    iterations: usize,
    pinf: f64,
    dinf: f64,
    gap: f64,
) -> SdpSolution {
    let objective = frobenius_inner(&problem.objective, &x);
    SdpSolution {
        x,
        objective,
        status,
        iterations,
        primal_residual: pinf,
        dual_residual: dinf,
        relative_gap: gap,
        objective_scale: data.c_scale,
    }
}

fn infeasible_solution(n: usize, iterations: usize) -> SdpSolution {
    SdpSolution {
        x: CMatrix::zeros(n, n),
        objective: f64::NAN,
        status: SdpStatus::Infeasible,
        iterations,
        primal_residual: f64::NAN,
        dual_residual: f64::NAN,
        relative_gap: f64::NAN,
        objective_scale: 1.0,
    }
}
