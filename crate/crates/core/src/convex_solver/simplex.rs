//! Dense two-phase tableau simplex for `min c·x  s.t.  A x ≤ b`, `x` free.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-10;

#[derive(Debug, Clone)]
pub(crate) struct SimplexSolution {
    pub x: Vec<f64>,
    pub value: f64,
    /// Nonnegative row multipliers with `c + Aᵀλ = 0`.
    pub lambda: Vec<f64>,
}

struct Tableau {
    t: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    reduced: Vec<f64>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col];
        for v in self.t[row].iter_mut() {
            *v /= p;
        }
        self.rhs[row] /= p;
        let pivot_row = self.t[row].clone();
        let pivot_rhs = self.rhs[row];
        for i in 0..self.t.len() {
            if i == row {
                continue;
            }
            let f = self.t[i][col];
            if f != 0.0 {
                for (v, pv) in self.t[i].iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                self.t[i][col] = 0.0;
                self.rhs[i] -= f * pivot_rhs;
            }
        }
        let f = self.reduced[col];
        if f != 0.0 {
            for (v, pv) in self.reduced.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.reduced[col] = 0.0;
        }
        self.basis[row] = col;
    }

    fn price(&mut self, cost: &[f64]) {
        self.reduced = cost.to_vec();
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = cost[bv];
            if cb != 0.0 {
                for (r, v) in self.reduced.iter_mut().zip(&self.t[i]) {
                    *r -= cb * v;
                }
            }
        }
    }

    /// Bland's rule iterations; columns `>= allowed` never enter.
    fn run(&mut self, allowed: usize, max_iter: usize) -> Result<()> {
        for _ in 0..max_iter {
            let Some(col) = (0..allowed).find(|&j| self.reduced[j] < -COST_EPS) else {
                return Ok(());
            };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.t.len() {
                let a = self.t[i][col];
                if a > PIVOT_EPS {
                    let ratio = self.rhs[i].max(0.0) / a;
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                            if ratio < br && !tie || tie && self.basis[i] < self.basis[bi] {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return Err(Error::Unbounded),
            }
        }
        Err(Error::Convergence { residual: f64::NAN })
    }
}

pub(crate) fn solve(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<SimplexSolution> {
    let n = c.len();
    let m = a.len();
    // row equilibration: scale[i] multiplies row i
    let scale: Vec<f64> = a
        .iter()
        .map(|row| {
            let mx = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if mx > 0.0 {
                1.0 / mx
            } else {
                1.0
            }
        })
        .collect();
    let artificial_rows: Vec<usize> = (0..m).filter(|&i| b[i] * scale[i] < 0.0).collect();
    let na = artificial_rows.len();
    let slack0 = 2 * n;
    let art0 = slack0 + m;
    let ncols = art0 + na;

    let mut t = vec![vec![0.0; ncols]; m];
    let mut rhs = vec![0.0; m];
    let mut basis = vec![0; m];
    let mut art_iter = 0;
    for i in 0..m {
        let s = scale[i];
        let flip = b[i] * s < 0.0;
        let sign = if flip { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i][j] = sign * s * a[i][j];
            t[i][n + j] = -sign * s * a[i][j];
        }
        t[i][slack0 + i] = sign;
        rhs[i] = sign * s * b[i];
        if flip {
            t[i][art0 + art_iter] = 1.0;
            basis[i] = art0 + art_iter;
            art_iter += 1;
        } else {
            basis[i] = slack0 + i;
        }
    }
    let mut tab = Tableau { t, rhs, basis, reduced: vec![0.0; ncols], ncols };
    let max_iter = 20_000 + 100 * (m + n);

    if na > 0 {
        let mut cost = vec![0.0; ncols];
        for c in cost.iter_mut().skip(art0) {
            *c = 1.0;
        }
        tab.price(&cost);
        tab.run(ncols, max_iter)?;
        let infeas: f64 = (0..m).filter(|&i| tab.basis[i] >= art0).map(|i| tab.rhs[i]).sum();
        let bscale = 1.0 + (0..m).fold(0.0f64, |mx, i| mx.max((b[i] * scale[i]).abs()));
        if infeas > 1e-9 * bscale {
            return Err(Error::Infeasible);
        }
        // drive zero-level artificials out of the basis where possible
        for i in 0..m {
            if tab.basis[i] >= art0 {
                if let Some(j) = (0..art0).find(|&j| tab.t[i][j].abs() > 1e-9) {
                    tab.pivot(i, j);
                }
            }
        }
    }

    let mut cost = vec![0.0; tab.ncols];
    for j in 0..n {
        cost[j] = c[j];
        cost[n + j] = -c[j];
    }
    tab.price(&cost);
    tab.run(art0, max_iter)?;

    let mut xs = vec![0.0; ncols];
    for (i, &bv) in tab.basis.iter().enumerate() {
        xs[bv] = tab.rhs[i];
    }
    let x: Vec<f64> = (0..n).map(|j| xs[j] - xs[n + j]).collect();
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    let lambda = (0..m).map(|i| tab.reduced[slack0 + i].max(0.0) * scale[i]).collect();
    Ok(SimplexSolution { x, value, lambda })
}
