//! Small modelling layer: linear objective, linear rows and norm constraints.
//!
//! Programs whose norm constraints are all polyhedral are sent to the simplex
//! solver and are exact; anything with an `ℓ_p` cone (`1 < p < ∞`) goes to the
//! barrier solver after eliminating the equality constraints.

use nalgebra::{DMatrix, DVector};

use super::conic::{self, Cone, ConicProblem};
use super::simplex;
use crate::error::{Error, Result};
use crate::normed_space::NormSpec;

/// Box used to keep barrier problems bounded.
const BOX: f64 = 1e6;

/// `Σ coef · v[idx] + constant`.
#[derive(Clone, Debug, Default, PartialEq)]
pub(crate) struct Affine {
    pub terms: Vec<(usize, f64)>,
    pub constant: f64,
}

impl Affine {
    pub fn constant(c: f64) -> Self {
        Self { terms: Vec::new(), constant: c }
    }

    pub fn var(i: usize) -> Self {
        Self { terms: vec![(i, 1.0)], constant: 0.0 }
    }

    pub fn term(mut self, i: usize, coef: f64) -> Self {
        self.terms.push((i, coef));
        self
    }

    pub fn plus(mut self, c: f64) -> Self {
        self.constant += c;
        self
    }

    pub fn scaled(mut self, s: f64) -> Self {
        for t in &mut self.terms {
            t.1 *= s;
        }
        self.constant *= s;
        self
    }

    fn dense(&self, n: usize) -> Vec<f64> {
        let mut row = vec![0.0; n];
        for &(i, c) in &self.terms {
            row[i] += c;
        }
        row
    }
}

#[derive(Clone, Debug)]
enum ConeCon {
    /// `‖u‖_2 ≤ t`.
    Soc { u: Vec<Affine>, t: Affine },
    /// `|w| ≤ r^α t^{1-α}`.
    Pow { alpha: f64, r: Affine, t: Affine, w: Affine },
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Model {
    nvars: usize,
    objective: Vec<(usize, f64)>,
    rows: Vec<Affine>,
    eqs: Vec<Affine>,
    cones: Vec<ConeCon>,
}

#[derive(Clone, Debug)]
pub(crate) struct ModelSolution {
    pub value: f64,
    pub v: Vec<f64>,
}

impl Model {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(&mut self) -> usize {
        self.nvars += 1;
        self.nvars - 1
    }

    pub fn vars(&mut self, k: usize) -> Vec<usize> {
        (0..k).map(|_| self.var()).collect()
    }

    pub fn minimize(&mut self, i: usize, coef: f64) {
        self.objective.push((i, coef));
    }

    /// `expr ≤ 0`.
    pub fn le0(&mut self, expr: Affine) {
        self.rows.push(expr);
    }

    /// `expr = 0`.
    pub fn eq0(&mut self, expr: Affine) {
        self.eqs.push(expr);
    }

    pub fn is_linear(&self) -> bool {
        self.cones.is_empty()
    }

    /// `‖y‖_norm ≤ rhs` for affine `y` (one expression per coordinate).
    pub fn norm_le(&mut self, norm: &NormSpec, y: &[Affine], rhs: Affine) {
        match norm {
            NormSpec::Lp { p, .. } => self.lp_le(*p, y, rhs),
            NormSpec::Polyhedral { generators } => {
                for g in generators {
                    let mut e = Affine::default();
                    for (gi, yi) in g.iter().zip(y) {
                        e.terms.extend(yi.terms.iter().map(|&(i, c)| (i, c * gi)));
                        e.constant += gi * yi.constant;
                    }
                    self.abs_le(e, rhs.clone());
                }
            }
            NormSpec::SupDirectSum { inner, .. } => {
                let k = inner.dim();
                self.norm_le(inner, &y[..k], rhs.clone());
                for yi in &y[k..] {
                    self.abs_le(yi.clone(), rhs.clone());
                }
            }
        }
    }

    /// `‖y‖_p ≤ rhs` for a plain `ℓ_p` norm of the expressions.
    pub fn lp_le(&mut self, p: f64, y: &[Affine], rhs: Affine) {
        if p.is_infinite() {
            for yi in y {
                self.abs_le(yi.clone(), rhs.clone());
            }
        } else if p == 1.0 {
            let mut sum = Affine::default();
            for yi in y {
                let s = self.var();
                self.abs_le(yi.clone(), Affine::var(s));
                sum.terms.push((s, 1.0));
            }
            self.le0(sum.plus_affine(&rhs.clone().scaled(-1.0)));
        } else if p == 2.0 {
            self.cones.push(ConeCon::Soc { u: y.to_vec(), t: rhs });
        } else {
            // |y_i|^p ≤ r_i t^{p-1} and Σ r_i ≤ t
            let mut sum = Affine::default();
            for yi in y {
                let r = self.var();
                self.cones.push(ConeCon::Pow { alpha: 1.0 / p, r: Affine::var(r), t: rhs.clone(), w: yi.clone() });
                sum.terms.push((r, 1.0));
            }
            self.le0(sum.plus_affine(&rhs.scaled(-1.0)));
        }
    }

    fn abs_le(&mut self, e: Affine, rhs: Affine) {
        let neg_rhs = rhs.scaled(-1.0);
        self.le0(e.clone().plus_affine(&neg_rhs));
        self.le0(e.scaled(-1.0).plus_affine(&neg_rhs));
    }

    fn objective_dense(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.nvars];
        for &(i, v) in &self.objective {
            c[i] += v;
        }
        c
    }

    pub fn solve(&self) -> Result<ModelSolution> {
        let c = self.objective_dense();
        if self.is_linear() {
            let n = self.nvars;
            let mut a = Vec::new();
            let mut b = Vec::new();
            for r in &self.rows {
                a.push(r.dense(n));
                b.push(-r.constant);
            }
            for e in &self.eqs {
                let row = e.dense(n);
                a.push(row.iter().map(|v| -v).collect());
                b.push(e.constant);
                a.push(row);
                b.push(-e.constant);
            }
            let sol = simplex::solve(&c, &a, &b)?;
            return Ok(ModelSolution { value: sol.value, v: sol.x });
        }
        self.solve_conic(&c)
    }

    fn solve_conic(&self, c: &[f64]) -> Result<ModelSolution> {
        let n = self.nvars;
        // v = v0 + N z parametrizes the equality set
        let (v0, null) = if self.eqs.is_empty() {
            (DVector::zeros(n), DMatrix::identity(n, n))
        } else {
            let m = self.eqs.len();
            let a = DMatrix::from_fn(m, n, |r, col| self.eqs[r].dense(n)[col]);
            let b = DVector::from_fn(m, |r, _| -self.eqs[r].constant);
            affine_solution_set(&a, &b)?
        };
        let k = null.ncols();
        let lift = |e: &Affine| -> (DVector<f64>, f64) {
            let row = DVector::from_vec(e.dense(n));
            (null.transpose() * &row, row.dot(&v0) + e.constant)
        };
        let cvec = DVector::from_column_slice(c);
        let mut prob =
            ConicProblem { n: k, c: (null.transpose() * &cvec).iter().copied().collect(), ..Default::default() };
        for r in &self.rows {
            let (a, a0) = lift(r);
            prob.lin_a.push(a);
            prob.lin_b.push(-a0);
        }
        for i in 0..n {
            let row = null.row(i).transpose();
            prob.lin_a.push(row.clone());
            prob.lin_b.push(BOX - v0[i]);
            prob.lin_a.push(-row);
            prob.lin_b.push(BOX + v0[i]);
        }
        let stack = |exprs: &[&Affine]| {
            let mut mat = DMatrix::zeros(exprs.len(), k);
            let mut off = DVector::zeros(exprs.len());
            for (r, e) in exprs.iter().enumerate() {
                let (a, a0) = lift(e);
                mat.row_mut(r).copy_from(&a.transpose());
                off[r] = a0;
            }
            (mat, off)
        };
        for con in &self.cones {
            match con {
                ConeCon::Soc { u, t } => {
                    let refs: Vec<&Affine> = u.iter().collect();
                    let (u_mat, u0) = stack(&refs);
                    let (t_vec, t0) = lift(t);
                    prob.cones.push(Cone::Soc { u_mat, u0, t_vec, t0 });
                }
                ConeCon::Pow { alpha, r, t, w } => {
                    let (a, a0) = stack(&[r, t, w]);
                    prob.cones.push(Cone::Pow { alpha: *alpha, a, a0 });
                }
            }
        }
        let sol = conic::solve(&prob, 1e-11)?;
        let z = DVector::from_vec(sol.z);
        let v = &v0 + &null * z;
        let value = cvec.dot(&v);
        Ok(ModelSolution { value, v: v.iter().copied().collect() })
    }
}

impl Affine {
    pub fn plus_affine(mut self, other: &Affine) -> Self {
        self.terms.extend_from_slice(&other.terms);
        self.constant += other.constant;
        self
    }
}

/// Particular solution and null-space basis of `A v = b`.
fn affine_solution_set(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = a.ncols();
    let svd = a.clone().svd(true, true);
    let tol = 1e-10 * svd.singular_values.max().max(1.0);
    let v0 = svd.solve(b, tol).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let residual = (a * &v0 - b).amax();
    if residual > 1e-8 * (1.0 + b.amax()) {
        return Err(Error::Infeasible);
    }
    // complete the row space to get the null space
    let full = a.transpose() * a;
    let eig = full.symmetric_eigen();
    let scale = eig.eigenvalues.amax().max(1.0);
    let cols: Vec<DVector<f64>> = (0..n)
        .filter(|&i| eig.eigenvalues[i].abs() <= 1e-12 * scale)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();
    let null = if cols.is_empty() { DMatrix::zeros(n, 0) } else { DMatrix::from_columns(&cols) };
    Ok((v0, null))
}
