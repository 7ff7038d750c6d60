//! Log-barrier path following for linear rows, second-order cones and
//! three-dimensional power cones.
//!
//! Problem form, in free variables `z`:
//!
//! ```text
//! minimize cᵀz  s.t.  aᵢᵀz ≤ bᵢ,
//!                     ‖U z + u‖_2 ≤ tᵀz + s                  (second-order)
//!                     |w| ≤ r^α t^{1-α},  (r, t, w) = A z + a   (power)
//! ```

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const MAX_NEWTON: usize = 200;
const MU: f64 = 12.0;
/// Relative objective decrease below which a centering run stops.
const PROGRESS_FLOOR: f64 = 1e-14;

#[derive(Clone, Debug)]
pub(crate) enum Cone {
    Soc {
        u_mat: DMatrix<f64>,
        u0: DVector<f64>,
        t_vec: DVector<f64>,
        t0: f64,
    },
    /// Rows of `a` are the affine maps for `r`, `t` and `w`.
    Pow {
        alpha: f64,
        a: DMatrix<f64>,
        a0: DVector<f64>,
    },
}

#[derive(Clone, Debug, Default)]
pub(crate) struct ConicProblem {
    pub n: usize,
    pub c: Vec<f64>,
    pub lin_a: Vec<DVector<f64>>,
    pub lin_b: Vec<f64>,
    pub cones: Vec<Cone>,
}

impl Cone {
    /// How far inside the cone `z` is; positive iff strictly inside.
    fn margin(&self, z: &DVector<f64>) -> f64 {
        match self {
            Cone::Soc { u_mat, u0, t_vec, t0 } => t_vec.dot(z) + t0 - (u_mat * z + u0).norm(),
            Cone::Pow { alpha, a, a0 } => {
                let v = a * z + a0;
                let (r, t, w) = (v[0], v[1], v[2]);
                if r <= 0.0 || t <= 0.0 {
                    return r.min(t) - w.abs();
                }
                r.powf(*alpha) * t.powf(1.0 - alpha) - w.abs()
            }
        }
    }

    fn nu(&self) -> f64 {
        match self {
            Cone::Soc { .. } => 2.0,
            Cone::Pow { .. } => 3.0,
        }
    }

    fn barrier(&self, z: &DVector<f64>) -> Option<f64> {
        match self {
            Cone::Soc { u_mat, u0, t_vec, t0 } => {
                let t = t_vec.dot(z) + t0;
                let nrm = (u_mat * z + u0).norm();
                (t - nrm > 0.0).then(|| -((t - nrm) * (t + nrm)).ln())
            }
            Cone::Pow { alpha, a, a0 } => {
                let v = a * z + a0;
                let (r, t, w) = (v[0], v[1], v[2]);
                if r <= 0.0 || t <= 0.0 {
                    return None;
                }
                let root = r.powf(*alpha) * t.powf(1.0 - alpha);
                if root - w.abs() <= 0.0 {
                    return None;
                }
                let f = (root - w.abs()) * (root + w.abs());
                Some(-f.ln() - (1.0 - alpha) * r.ln() - alpha * t.ln())
            }
        }
    }

    fn add_derivatives(&self, z: &DVector<f64>, g: &mut DVector<f64>, h: &mut DMatrix<f64>) {
        match self {
            Cone::Soc { u_mat, u0, t_vec, t0 } => {
                let u = u_mat * z + u0;
                let t = t_vec.dot(z) + t0;
                let nrm = u.norm();
                let f = (t - nrm) * (t + nrm);
                let df = t_vec * (2.0 * t) - u_mat.transpose() * &u * 2.0;
                let d2f = t_vec * t_vec.transpose() * 2.0 - u_mat.transpose() * u_mat * 2.0;
                g.axpy(-1.0 / f, &df, 1.0);
                h.ger(1.0 / (f * f), &df, &df, 1.0);
                *h -= d2f / f;
            }
            Cone::Pow { alpha, a, a0 } => {
                let al = *alpha;
                let v = a * z + a0;
                let (r, t, w) = (v[0], v[1], v[2]);
                let psi = r.powf(2.0 * al) * t.powf(2.0 - 2.0 * al);
                let root = psi.sqrt();
                let f = (root - w.abs()) * (root + w.abs());
                let df = DVector::from_vec(vec![2.0 * al * psi / r, (2.0 - 2.0 * al) * psi / t, -2.0 * w]);
                let mut d2f = DMatrix::zeros(3, 3);
                d2f[(0, 0)] = 2.0 * al * (2.0 * al - 1.0) * psi / (r * r);
                d2f[(1, 1)] = (2.0 - 2.0 * al) * (1.0 - 2.0 * al) * psi / (t * t);
                d2f[(0, 1)] = 2.0 * al * (2.0 - 2.0 * al) * psi / (r * t);
                d2f[(1, 0)] = d2f[(0, 1)];
                d2f[(2, 2)] = -2.0;
                let mut gl = -&df / f;
                gl[0] -= (1.0 - al) / r;
                gl[1] -= al / t;
                let mut hl = &df * df.transpose() / (f * f) - d2f / f;
                hl[(0, 0)] += (1.0 - al) / (r * r);
                hl[(1, 1)] += al / (t * t);
                *g += a.transpose() * gl;
                *h += a.transpose() * hl * a;
            }
        }
    }

    /// The cone loosened by a shared variable `σ` appended after the others.
    fn relaxed(&self) -> Cone {
        let ext_mat = |m: &DMatrix<f64>, last: &[f64]| {
            let mut out = DMatrix::zeros(m.nrows(), m.ncols() + 1);
            out.columns_mut(0, m.ncols()).copy_from(m);
            for (i, l) in last.iter().enumerate() {
                out[(i, m.ncols())] = *l;
            }
            out
        };
        match self {
            Cone::Soc { u_mat, u0, t_vec, t0 } => {
                let n = t_vec.len();
                let mut tv = DVector::zeros(n + 1);
                tv.rows_mut(0, n).copy_from(t_vec);
                tv[n] = 1.0;
                Cone::Soc { u_mat: ext_mat(u_mat, &vec![0.0; u_mat.nrows()]), u0: u0.clone(), t_vec: tv, t0: *t0 }
            }
            Cone::Pow { alpha, a, a0 } => Cone::Pow { alpha: *alpha, a: ext_mat(a, &[1.0, 1.0, 0.0]), a0: a0.clone() },
        }
    }
}

impl ConicProblem {
    /// Signed slacks; all positive iff `z` is strictly feasible.
    fn slacks(&self, z: &DVector<f64>) -> Vec<f64> {
        let mut out: Vec<f64> = self.lin_a.iter().zip(&self.lin_b).map(|(a, b)| b - a.dot(z)).collect();
        out.extend(self.cones.iter().map(|k| k.margin(z)));
        out
    }

    fn nu(&self) -> f64 {
        self.lin_a.len() as f64 + self.cones.iter().map(Cone::nu).sum::<f64>()
    }

    /// Barrier value, or `None` outside the domain.
    fn barrier(&self, z: &DVector<f64>) -> Option<f64> {
        let mut phi = 0.0;
        for (a, b) in self.lin_a.iter().zip(&self.lin_b) {
            let s = b - a.dot(z);
            if s <= 0.0 {
                return None;
            }
            phi -= s.ln();
        }
        for k in &self.cones {
            phi += k.barrier(z)?;
        }
        Some(phi)
    }

    fn grad_hess(&self, z: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let n = self.n;
        let mut g = DVector::zeros(n);
        let mut h = DMatrix::zeros(n, n);
        for (a, b) in self.lin_a.iter().zip(&self.lin_b) {
            let s = b - a.dot(z);
            g.axpy(1.0 / s, a, 1.0);
            h.ger(1.0 / (s * s), a, a, 1.0);
        }
        for k in &self.cones {
            k.add_derivatives(z, &mut g, &mut h);
        }
        (g, h)
    }
}

/// Minimizes `τ cᵀz + Φ(z)` from a strictly feasible `z` by damped Newton.
fn center(prob: &ConicProblem, tau: f64, z: &mut DVector<f64>) -> bool {
    let c = DVector::from_column_slice(&prob.c);
    let obj = |z: &DVector<f64>| prob.barrier(z).map(|phi| tau * c.dot(z) + phi);
    let Some(mut fz) = obj(z) else { return false };
    for _ in 0..MAX_NEWTON {
        let (gb, h) = prob.grad_hess(z);
        let g = &c * tau + gb;
        let Some(step) = newton_step(&h, &g) else { return false };
        let dec = -g.dot(&step);
        if dec / 2.0 <= 1e-10 {
            return true;
        }
        let mut alpha = 1.0;
        let mut moved = false;
        for _ in 0..60 {
            let cand = &*z + &step * alpha;
            if let Some(fc) = obj(&cand) {
                if fc <= fz - 0.25 * alpha * dec {
                    let gain = fz - fc;
                    *z = cand;
                    fz = fc;
                    if gain <= PROGRESS_FLOOR * fz.abs().max(1.0) {
                        return true;
                    }
                    moved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !moved {
            return true;
        }
    }
    true
}

fn newton_step(h: &DMatrix<f64>, g: &DVector<f64>) -> Option<DVector<f64>> {
    let n = h.nrows();
    let scale = (0..n).fold(0.0f64, |m, i| m.max(h[(i, i)].abs())).max(1e-300);
    let mut reg = 0.0;
    for _ in 0..12 {
        let mut hr = h.clone();
        for i in 0..n {
            hr[(i, i)] += reg;
        }
        if let Some(ch) = hr.cholesky() {
            let s = -ch.solve(g);
            if s.iter().all(|v| v.is_finite()) {
                return Some(s);
            }
        }
        reg = if reg == 0.0 { 1e-14 * scale } else { reg * 100.0 };
    }
    None
}

/// Path-following from a strictly feasible point to relative gap `gap_tol`.
fn path_follow(
    prob: &ConicProblem,
    mut z: DVector<f64>,
    gap_tol: f64,
    stop: impl Fn(&DVector<f64>) -> bool,
) -> DVector<f64> {
    let c = DVector::from_column_slice(&prob.c);
    let nu = prob.nu();
    let mut tau = 1.0;
    for _ in 0..200 {
        if !center(prob, tau, &mut z) {
            break;
        }
        if stop(&z) {
            break;
        }
        let value = c.dot(&z);
        if nu / tau <= gap_tol * value.abs().max(1.0) {
            break;
        }
        tau *= MU;
    }
    z
}

#[derive(Clone, Debug)]
pub(crate) struct ConicSolution {
    pub z: Vec<f64>,
}

pub(crate) fn solve(prob: &ConicProblem, gap_tol: f64) -> Result<ConicSolution> {
    let n = prob.n;
    let z0 = DVector::zeros(n);
    let viol = prob.slacks(&z0).iter().fold(f64::NEG_INFINITY, |m, s| m.max(-s));
    let start = if viol < 0.0 { z0 } else { phase_one(prob, viol)? };
    let z = path_follow(prob, start, gap_tol, |_| false);
    Ok(ConicSolution { z: z.iter().copied().collect() })
}

/// Finds a strictly feasible point by minimizing a shared violation `σ ≥ -1`.
fn phase_one(prob: &ConicProblem, viol: f64) -> Result<DVector<f64>> {
    let n = prob.n;
    let ext = |v: &DVector<f64>, last: f64| {
        let mut w = DVector::zeros(n + 1);
        w.rows_mut(0, n).copy_from(v);
        w[n] = last;
        w
    };
    let mut aux = ConicProblem { n: n + 1, c: vec![0.0; n + 1], ..Default::default() };
    aux.c[n] = 1.0;
    for (a, b) in prob.lin_a.iter().zip(&prob.lin_b) {
        aux.lin_a.push(ext(a, -1.0));
        aux.lin_b.push(*b);
    }
    aux.lin_a.push(ext(&DVector::zeros(n), -1.0));
    aux.lin_b.push(1.0);
    aux.cones = prob.cones.iter().map(Cone::relaxed).collect();
    let start = ext(&DVector::zeros(n), viol + 1.0);
    let z = path_follow(&aux, start, 1e-10, |w| w[n] < -1e-3);
    if z[n] >= -1e-12 {
        return Err(Error::Infeasible);
    }
    Ok(z.rows(0, n).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn add_box(prob: &mut ConicProblem, bound: f64) {
        for i in 0..prob.n {
            let mut e = DVector::zeros(prob.n);
            e[i] = 1.0;
            prob.lin_a.push(e.clone());
            prob.lin_b.push(bound);
            prob.lin_a.push(-e);
            prob.lin_b.push(bound);
        }
    }

    fn value(prob: &ConicProblem, sol: &ConicSolution) -> f64 {
        prob.c.iter().zip(&sol.z).map(|(a, b)| a * b).sum()
    }

    #[test]
    fn euclidean_distance_to_a_point() {
        // min t  s.t.  ‖(z1 - 3, z2 - 4)‖ ≤ t with z1, z2 ≤ 0
        let mut prob = ConicProblem { n: 3, c: vec![0.0, 0.0, 1.0], ..Default::default() };
        prob.cones.push(Cone::Soc {
            u_mat: DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]),
            u0: DVector::from_vec(vec![-3.0, -4.0]),
            t_vec: DVector::from_vec(vec![0.0, 0.0, 1.0]),
            t0: 0.0,
        });
        prob.lin_a.push(DVector::from_vec(vec![1.0, 0.0, 0.0]));
        prob.lin_b.push(0.0);
        prob.lin_a.push(DVector::from_vec(vec![0.0, 1.0, 0.0]));
        prob.lin_b.push(0.0);
        add_box(&mut prob, 1e6);
        let sol = solve(&prob, 1e-11).unwrap();
        assert!((value(&prob, &sol) - 5.0).abs() < 1e-8);
    }

    #[test]
    fn power_cone_geometric_mean() {
        // max w s.t. |w| ≤ r^{1/3} t^{2/3}, r = 1, t = 8  →  w = 4
        let mut prob = ConicProblem { n: 1, c: vec![-1.0], ..Default::default() };
        prob.cones.push(Cone::Pow {
            alpha: 1.0 / 3.0,
            a: DMatrix::from_row_slice(3, 1, &[0.0, 0.0, 1.0]),
            a0: DVector::from_vec(vec![1.0, 8.0, 0.0]),
        });
        add_box(&mut prob, 1e6);
        let sol = solve(&prob, 1e-11).unwrap();
        assert!((sol.z[0] - 4.0).abs() < 1e-8, "{}", sol.z[0]);
    }

    #[test]
    fn infeasible_rows() {
        let mut prob = ConicProblem { n: 1, c: vec![1.0], ..Default::default() };
        prob.lin_a.push(DVector::from_vec(vec![1.0]));
        prob.lin_b.push(-1.0);
        prob.lin_a.push(DVector::from_vec(vec![-1.0]));
        prob.lin_b.push(0.0);
        assert!(matches!(solve(&prob, 1e-10), Err(Error::Infeasible)));
    }
}
