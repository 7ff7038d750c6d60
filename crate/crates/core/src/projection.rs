//! Set-valued metric projections `P_C(x)`, near-minimizer sets `P_C(x, δ)` and
//! Hausdorff distances between the resulting sets.
//!
//! All bodies are handled in coefficient coordinates `c`, with `z = M c` where
//! `M` is the subspace basis (subspaces) or the identity (balls, polytopes).
//! Exact faces come from vertex enumeration in those coordinates; everything
//! else is a boundary sample obtained by casting rays from an interior point.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::convex_solver::model::{Affine, Model};
use crate::convex_solver::{enumerate_vertices, HPolytope, VPolytope, MAX_VERTEX_DIM};
use crate::error::{check_dim, Error, Result};
use crate::normed_space::{dot, gaussian_direction, NormSpec, Vector};

/// Tolerance used for membership certificates.
pub const MEMBERSHIP_TOL: f64 = 1e-8;
/// Extra level above `d(x, C)` that defines an exact optimal face.
pub const FACE_LEVEL_TOL: f64 = 1e-9;

/// A closed convex subset of the space.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexBody {
    /// Linear span of independent vectors.
    Subspace {
        basis: Vec<Vector>,
    },
    /// `{y ∈ span(basis) : ‖y‖ ≤ radius}`.
    SubspaceBall {
        basis: Vec<Vector>,
        radius: f64,
    },
    /// `{y : ‖y‖ ≤ radius}` in the ambient norm.
    NormBall {
        radius: f64,
    },
    Polytope(HPolytope),
}

impl ConvexBody {
    pub fn subspace(basis: Vec<Vector>) -> Result<Self> {
        check_basis(&basis)?;
        Ok(ConvexBody::Subspace { basis })
    }

    pub fn subspace_ball(basis: Vec<Vector>, radius: f64) -> Result<Self> {
        check_basis(&basis)?;
        check_radius(radius)?;
        Ok(ConvexBody::SubspaceBall { basis, radius })
    }

    pub fn norm_ball(radius: f64) -> Result<Self> {
        check_radius(radius)?;
        Ok(ConvexBody::NormBall { radius })
    }

    pub fn polytope(h: HPolytope) -> Self {
        ConvexBody::Polytope(h)
    }

    /// The coordinate subspace `{x : x_i = 0 for i ∉ keep}` of `ℝ^dim`.
    pub fn coordinate_subspace(dim: usize, keep: &[usize]) -> Result<Self> {
        Self::subspace(keep.iter().map(|&i| Vector::basis(dim, i)).collect())
    }

    pub fn basis(&self) -> Option<&[Vector]> {
        match self {
            ConvexBody::Subspace { basis } | ConvexBody::SubspaceBall { basis, .. } => Some(basis),
            _ => None,
        }
    }

    pub fn validate(&self, n: &NormSpec) -> Result<()> {
        n.validate()?;
        match self {
            ConvexBody::Subspace { basis } => {
                check_basis(basis)?;
                check_dim(n.dim(), basis[0].dim())
            }
            ConvexBody::SubspaceBall { basis, radius } => {
                check_basis(basis)?;
                check_radius(*radius)?;
                check_dim(n.dim(), basis[0].dim())
            }
            ConvexBody::NormBall { radius } => check_radius(*radius),
            ConvexBody::Polytope(h) => check_dim(n.dim(), h.dim()),
        }
    }

    /// True when the body is cut out by finitely many half-spaces under `n`.
    pub fn is_polyhedral(&self, n: &NormSpec) -> bool {
        match self {
            ConvexBody::Subspace { .. } | ConvexBody::Polytope(_) => true,
            ConvexBody::SubspaceBall { .. } | ConvexBody::NormBall { .. } => n.is_polyhedral(),
        }
    }

    /// Number of coefficient coordinates.
    pub(crate) fn coeff_dim(&self, dim: usize) -> usize {
        self.basis().map_or(dim, <[Vector]>::len)
    }

    pub(crate) fn embed(&self, c: &[f64]) -> Vec<f64> {
        match self.basis() {
            Some(basis) => {
                let mut z = vec![0.0; basis[0].dim()];
                for (cj, b) in c.iter().zip(basis) {
                    for (zi, bi) in z.iter_mut().zip(b.iter()) {
                        *zi += cj * bi;
                    }
                }
                z
            }
            None => c.to_vec(),
        }
    }

    /// `z = M c` as affine expressions of the model variables `c`.
    pub(crate) fn embed_affine(&self, c: &[usize], dim: usize) -> Vec<Affine> {
        match self.basis() {
            Some(basis) => (0..dim)
                .map(|i| {
                    let mut e = Affine::default();
                    for (&cj, b) in c.iter().zip(basis) {
                        if b[i] != 0.0 {
                            e.terms.push((cj, b[i]));
                        }
                    }
                    e
                })
                .collect(),
            None => c.iter().map(|&cj| Affine::var(cj)).collect(),
        }
    }

    /// Adds the body constraint on coefficients `c`, relaxed by `slack` if given.
    pub(crate) fn constrain(&self, model: &mut Model, c: &[usize], n: &NormSpec, slack: Option<usize>) {
        let relax = |e: Affine| match slack {
            Some(s) => e.term(s, 1.0),
            None => e,
        };
        match self {
            ConvexBody::Subspace { .. } => {}
            ConvexBody::SubspaceBall { radius, .. } | ConvexBody::NormBall { radius } => {
                let z = self.embed_affine(c, n.dim());
                model.norm_le(n, &z, relax(Affine::constant(*radius)));
            }
            ConvexBody::Polytope(h) => {
                for row in h.rows() {
                    let mut e = Affine::constant(-row.offset);
                    for (&cj, a) in c.iter().zip(row.normal.iter()) {
                        if *a != 0.0 {
                            e.terms.push((cj, *a));
                        }
                    }
                    let e = match slack {
                        Some(s) => e.term(s, -1.0),
                        None => e,
                    };
                    model.le0(e);
                }
            }
        }
    }

    /// Positive part of the body constraint at coefficients `c`.
    pub(crate) fn coeff_violation(&self, c: &[f64], n: &NormSpec) -> f64 {
        match self {
            ConvexBody::Subspace { .. } => 0.0,
            ConvexBody::SubspaceBall { radius, .. } | ConvexBody::NormBall { radius } => {
                (n.eval(&self.embed(c)) - radius).max(0.0)
            }
            ConvexBody::Polytope(h) => h.violation(c),
        }
    }

    /// Signed body constraint: negative strictly inside.
    fn coeff_margin(&self, c: &[f64], n: &NormSpec) -> f64 {
        match self {
            ConvexBody::Subspace { .. } => f64::NEG_INFINITY,
            ConvexBody::SubspaceBall { radius, .. } | ConvexBody::NormBall { radius } => {
                n.eval(&self.embed(c)) - radius
            }
            ConvexBody::Polytope(h) => {
                h.rows().iter().fold(f64::NEG_INFINITY, |m, r| m.max(dot(r.normal.as_slice(), c) - r.offset))
            }
        }
    }

    /// Least-squares coefficients of `z` (identity for full-dimensional bodies).
    pub(crate) fn coeffs_of(&self, z: &[f64]) -> Vec<f64> {
        match self.basis() {
            Some(basis) => least_squares(basis, z),
            None => z.to_vec(),
        }
    }

    /// Membership violation of an ambient point, measured in the norm `n`.
    pub fn violation(&self, z: &Vector, n: &NormSpec) -> Result<f64> {
        self.validate(n)?;
        check_dim(n.dim(), z.dim())?;
        let c = self.coeffs_of(z.as_slice());
        let off = match self.basis() {
            Some(_) => n.eval_diff(z.as_slice(), &self.embed(&c)),
            None => 0.0,
        };
        Ok(off.max(self.coeff_violation(&c, n)))
    }

    pub fn contains(&self, z: &Vector, n: &NormSpec, tol: f64) -> Result<bool> {
        Ok(self.violation(z, n)? <= tol)
    }

    /// A coefficient point deep inside the body, used as a ray-casting anchor.
    fn center_coeffs(&self, dim: usize) -> Option<Vec<f64>> {
        match self {
            ConvexBody::Subspace { .. } => None,
            ConvexBody::SubspaceBall { .. } | ConvexBody::NormBall { .. } => Some(vec![0.0; self.coeff_dim(dim)]),
            ConvexBody::Polytope(h) => h.chebyshev_center().ok().map(|(c, _)| c.into_vec()),
        }
    }
}

fn check_basis(basis: &[Vector]) -> Result<()> {
    let first = basis.first().ok_or_else(|| Error::InvalidInput("subspace basis must be nonempty".into()))?;
    let dim = first.dim();
    for b in basis {
        check_dim(dim, b.dim())?;
    }
    let m = DMatrix::from_fn(dim, basis.len(), |i, j| basis[j][i]);
    if basis.len() > dim || m.rank(1e-10) < basis.len() {
        return Err(Error::InvalidInput("subspace basis is linearly dependent".into()));
    }
    Ok(())
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("radius must be positive, got {r}")))
    }
}

fn least_squares(basis: &[Vector], z: &[f64]) -> Vec<f64> {
    let k = basis.len();
    let gram = DMatrix::from_fn(k, k, |i, j| basis[i].dot(&basis[j]));
    let rhs = DVector::from_fn(k, |i, _| dot(basis[i].as_slice(), z));
    let sol = gram.cholesky().map(|ch| ch.solve(&rhs)).unwrap_or_else(|| DVector::zeros(k));
    sol.iter().copied().collect()
}

/// Representation of a minimizer or near-minimizer set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MinimizerSet {
    Singleton(Vector),
    /// Exact polytope given by its vertices.
    Face(VPolytope),
    /// Boundary sample; the set is read as the convex hull of `points`.
    Sampled {
        points: Vec<Vector>,
        coverage_radius: f64,
    },
}

impl MinimizerSet {
    pub fn points(&self) -> &[Vector] {
        match self {
            MinimizerSet::Singleton(v) => std::slice::from_ref(v),
            MinimizerSet::Face(p) => p.vertices(),
            MinimizerSet::Sampled { points, .. } => points,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, MinimizerSet::Sampled { .. })
    }

    fn from_vertices(mut vertices: Vec<Vector>) -> Result<Self> {
        if vertices.len() == 1 {
            Ok(MinimizerSet::Singleton(vertices.remove(0)))
        } else {
            Ok(MinimizerSet::Face(VPolytope::new(vertices)?))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub distance: f64,
    pub minimizers: MinimizerSet,
}

/// Level `δ ≥ 0` of a near-minimizer set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearSetSpec {
    pub delta: f64,
}

impl NearSetSpec {
    pub fn new(delta: f64) -> Result<Self> {
        if delta.is_finite() && delta >= 0.0 {
            Ok(Self { delta })
        } else {
            Err(Error::InvalidInput(format!("delta must be finite and >= 0, got {delta}")))
        }
    }
}

/// Controls for sampled set representations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingOptions {
    pub rays: usize,
    pub probes: usize,
    pub seed: u64,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        Self { rays: 10_000, probes: 256, seed: 0 }
    }
}

pub(crate) fn check_inputs(x: &Vector, c: &ConvexBody, n: &NormSpec) -> Result<()> {
    c.validate(n)?;
    check_dim(n.dim(), x.dim())
}

/// `d(x, C)` together with one minimizer in coefficient coordinates.
pub(crate) fn solve_distance(x: &Vector, body: &ConvexBody, n: &NormSpec) -> Result<(f64, Vec<f64>)> {
    let xs = x.as_slice();
    match body {
        ConvexBody::NormBall { radius } => {
            let len = n.eval(xs);
            if len <= *radius {
                return Ok((0.0, xs.to_vec()));
            }
            let c: Vec<f64> = xs.iter().map(|v| v * radius / len).collect();
            return Ok((len - radius, c));
        }
        ConvexBody::Subspace { basis } if n.is_euclidean() => {
            let c = least_squares(basis, xs);
            return Ok((n.eval_diff(xs, &body.embed(&c)), c));
        }
        ConvexBody::SubspaceBall { basis, radius } if n.is_euclidean() => {
            let mut c = least_squares(basis, xs);
            let len = n.eval(&body.embed(&c));
            if len > *radius {
                for v in &mut c {
                    *v *= radius / len;
                }
            }
            return Ok((n.eval_diff(xs, &body.embed(&c)), c));
        }
        _ => {}
    }
    let dim = n.dim();
    let mut model = Model::new();
    let c = model.vars(body.coeff_dim(dim));
    let t = model.var();
    model.minimize(t, 1.0);
    let z = body.embed_affine(&c, dim);
    let diff: Vec<Affine> = z.into_iter().zip(xs).map(|(e, xi)| e.scaled(-1.0).plus(*xi)).collect();
    model.norm_le(n, &diff, Affine::var(t));
    body.constrain(&mut model, &c, n, None);
    let linear = model.is_linear();
    let sol = model.solve()?;
    let coeffs: Vec<f64> = c.iter().map(|&i| sol.v[i]).collect();
    let achieved = n.eval_diff(xs, &body.embed(&coeffs));
    // barrier points are strictly feasible, so the achieved value is an upper bound
    let d = if linear { sol.value.max(0.0) } else { achieved };
    Ok((d, coeffs))
}

/// `d(x, C) = inf_{z ∈ C} ‖x - z‖`.
pub fn distance(x: &Vector, c: &ConvexBody, n: &NormSpec) -> Result<f64> {
    check_inputs(x, c, n)?;
    Ok(solve_distance(x, c, n)?.0)
}

pub fn project(x: &Vector, c: &ConvexBody, n: &NormSpec) -> Result<ProjectionResult> {
    project_with(x, c, n, SamplingOptions::default())
}

pub fn project_with(x: &Vector, c: &ConvexBody, n: &NormSpec, opts: SamplingOptions) -> Result<ProjectionResult> {
    check_inputs(x, c, n)?;
    let (d, coeffs) = solve_distance(x, c, n)?;
    let minimizers = level_set(x, c, n, d, &coeffs, 0.0, opts)?;
    Ok(ProjectionResult { distance: d, minimizers })
}

/// `P_C(x, δ) = {z ∈ C : ‖x - z‖ ≤ d(x, C) + δ}`.
pub fn near_minimizer_set(x: &Vector, c: &ConvexBody, n: &NormSpec, spec: NearSetSpec) -> Result<MinimizerSet> {
    near_minimizer_set_with(x, c, n, spec, SamplingOptions::default())
}

pub fn near_minimizer_set_with(
    x: &Vector,
    c: &ConvexBody,
    n: &NormSpec,
    spec: NearSetSpec,
    opts: SamplingOptions,
) -> Result<MinimizerSet> {
    check_inputs(x, c, n)?;
    NearSetSpec::new(spec.delta)?;
    let (d, coeffs) = solve_distance(x, c, n)?;
    level_set(x, c, n, d, &coeffs, spec.delta, opts)
}

pub(crate) fn level_set(
    x: &Vector,
    body: &ConvexBody,
    n: &NormSpec,
    d: f64,
    coeffs: &[f64],
    delta: f64,
    opts: SamplingOptions,
) -> Result<MinimizerSet> {
    let dim = n.dim();
    let k = body.coeff_dim(dim);
    if delta == 0.0 && (d <= 1e-12 || n.is_strictly_convex()) {
        let z = if d <= 1e-12 { x.clone() } else { Vector::from_vec_unchecked(body.embed(coeffs)) };
        return Ok(MinimizerSet::Singleton(z));
    }
    if n.is_polyhedral() && body.is_polyhedral(n) {
        let level = d + delta + FACE_LEVEL_TOL;
        let poly = level_polytope(x, body, n, level)?;
        if k <= MAX_VERTEX_DIM {
            let verts = enumerate_vertices(&poly)?;
            let ambient =
                verts.vertices().iter().map(|v| Vector::from_vec_unchecked(body.embed(v.as_slice()))).collect();
            return MinimizerSet::from_vertices(ambient);
        }
        return support_sample(body, &poly, n, opts);
    }
    let level = d + delta.max(FACE_LEVEL_TOL * d.max(1.0));
    let caster = RayCaster::new(x, body, n, d, coeffs, level);
    Ok(caster.sample(opts))
}

/// The near set at `level` as an H-polytope in coefficient coordinates.
pub(crate) fn level_polytope(x: &Vector, body: &ConvexBody, n: &NormSpec, level: f64) -> Result<HPolytope> {
    let dim = n.dim();
    let k = body.coeff_dim(dim);
    let rows = n.gauge_rows()?;
    let mut poly = HPolytope::new(k);
    // g·(x - Mc) ≤ level and -g·(x - Mc) ≤ level
    for g in &rows {
        let gm = body.coeffs_transpose(g.as_slice());
        let gx = g.dot(x);
        poly.push(Vector::from_vec_unchecked(gm.iter().map(|v| -v).collect()), level - gx)?;
        poly.push(Vector::from_vec_unchecked(gm), level + gx)?;
    }
    match body {
        ConvexBody::Subspace { .. } => {}
        ConvexBody::SubspaceBall { radius, .. } | ConvexBody::NormBall { radius } => {
            for g in &rows {
                let gm = body.coeffs_transpose(g.as_slice());
                poly.push(Vector::from_vec_unchecked(gm.iter().map(|v| -v).collect()), *radius)?;
                poly.push(Vector::from_vec_unchecked(gm), *radius)?;
            }
        }
        ConvexBody::Polytope(h) => {
            for r in h.rows() {
                poly.push(r.normal.clone(), r.offset)?;
            }
        }
    }
    Ok(poly)
}

impl ConvexBody {
    /// `Mᵀ g`: a linear functional on ambient points pulled back to coefficients.
    pub(crate) fn coeffs_transpose(&self, g: &[f64]) -> Vec<f64> {
        match self.basis() {
            Some(basis) => basis.iter().map(|b| dot(b.as_slice(), g)).collect(),
            None => g.to_vec(),
        }
    }
}

/// Sampled vertices of a high-dimensional face via LPs in random directions.
fn support_sample(body: &ConvexBody, poly: &HPolytope, n: &NormSpec, opts: SamplingOptions) -> Result<MinimizerSet> {
    use crate::convex_solver::{solve_lp, LinearProgram};
    let k = poly.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let support = |u: &Vector| -> Result<Vec<f64>> {
        let lp = LinearProgram::new(-u, poly.clone());
        Ok(body.embed(solve_lp(&lp)?.point.as_slice()))
    };
    let mut points: Vec<Vector> = Vec::new();
    for _ in 0..opts.rays.min(1000) {
        let u = gaussian_direction(k, &mut rng);
        let z = Vector::from_vec_unchecked(support(&u)?);
        if !points.iter().any(|p| (p - &z).max_abs() <= 1e-8) {
            points.push(z);
        }
    }
    let mut coverage: f64 = 0.0;
    for _ in 0..opts.probes {
        let u = gaussian_direction(k, &mut rng);
        let q = support(&u)?;
        let nearest = points.iter().fold(f64::INFINITY, |m, p| m.min(n.eval_diff(&q, p.as_slice())));
        coverage = coverage.max(nearest);
    }
    Ok(MinimizerSet::Sampled { points, coverage_radius: coverage })
}

/// Finds boundary points of `{c : c ∈ body, ‖x - Mc‖ ≤ level}` along rays.
pub(crate) struct RayCaster<'a> {
    x: &'a Vector,
    body: &'a ConvexBody,
    n: &'a NormSpec,
    level: f64,
    pub anchor: Vec<f64>,
}

impl<'a> RayCaster<'a> {
    pub fn new(x: &'a Vector, body: &'a ConvexBody, n: &'a NormSpec, d: f64, coeffs: &[f64], level: f64) -> Self {
        let target = d + (level - d) / 2.0;
        let mut anchor = coeffs.to_vec();
        if let Some(center) = body.center_coeffs(n.dim()) {
            let mut t = 1.0;
            for _ in 0..60 {
                let cand: Vec<f64> = coeffs.iter().zip(&center).map(|(p, q)| p + t * (q - p)).collect();
                let inside_body = body.coeff_margin(&cand, n) < 0.0;
                if inside_body && n.eval_diff(x.as_slice(), &body.embed(&cand)) <= target {
                    anchor = cand;
                    break;
                }
                t *= 0.5;
            }
        }
        Self { x, body, n, level, anchor }
    }

    fn inside(&self, c: &[f64]) -> bool {
        self.body.coeff_violation(c, self.n) <= 0.0
            && self.n.eval_diff(self.x.as_slice(), &self.body.embed(c)) <= self.level
    }

    /// Boundary point `anchor + s u` with maximal `s` (coefficients).
    pub fn boundary(&self, u: &[f64]) -> Vec<f64> {
        let at = |s: f64| -> Vec<f64> { self.anchor.iter().zip(u).map(|(a, ui)| a + s * ui).collect() };
        let mut hi = self.level.max(1.0);
        let mut doublings = 0;
        while self.inside(&at(hi)) && doublings < 60 {
            hi *= 2.0;
            doublings += 1;
        }
        let mut lo = 0.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.inside(&at(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        at(lo)
    }

    pub fn ambient(&self, c: &[f64]) -> Vector {
        Vector::from_vec_unchecked(self.body.embed(c))
    }

    pub fn coeff_dim(&self) -> usize {
        self.anchor.len()
    }

    pub fn directions<R: Rng>(&self, count: usize, rng: &mut R) -> Vec<Vec<f64>> {
        let k = self.coeff_dim();
        match k {
            1 => vec![vec![1.0], vec![-1.0]],
            2 => {
                let phase: f64 = rng.gen::<f64>() * 2.0 * PI;
                (0..count)
                    .map(|j| {
                        let th = phase + 2.0 * PI * j as f64 / count as f64;
                        vec![th.cos(), th.sin()]
                    })
                    .collect()
            }
            _ => (0..count).map(|_| gaussian_direction(k, rng).into_vec()).collect(),
        }
    }

    pub fn sample(&self, opts: SamplingOptions) -> MinimizerSet {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let points: Vec<Vector> =
            self.directions(opts.rays.max(2), &mut rng).iter().map(|u| self.ambient(&self.boundary(u))).collect();
        let mut probe_rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9_7f4a_7c15);
        let k = self.coeff_dim();
        let mut coverage: f64 = 0.0;
        if k > 1 {
            for _ in 0..opts.probes {
                let u = gaussian_direction(k, &mut probe_rng);
                let q = self.ambient(&self.boundary(u.as_slice()));
                let nearest =
                    points.iter().fold(f64::INFINITY, |m, p| m.min(self.n.eval_diff(q.as_slice(), p.as_slice())));
                coverage = coverage.max(nearest);
            }
        }
        MinimizerSet::Sampled { points, coverage_radius: coverage }
    }
}

/// `d(y, A)`; sampled sets use their nearest sample point.
pub fn distance_to_set(y: &Vector, a: &MinimizerSet, n: &NormSpec) -> Result<f64> {
    n.validate()?;
    check_dim(n.dim(), y.dim())?;
    match a {
        MinimizerSet::Singleton(p) => Ok(n.eval_diff(y.as_slice(), p.as_slice())),
        MinimizerSet::Face(face) => distance_to_hull(y, face.vertices(), n),
        MinimizerSet::Sampled { points, .. } => {
            Ok(points.iter().fold(f64::INFINITY, |m, p| m.min(n.eval_diff(y.as_slice(), p.as_slice()))))
        }
    }
}

/// `d(y, conv(points))` by a convex program over barycentric weights.
pub(crate) fn distance_to_hull(y: &Vector, points: &[Vector], n: &NormSpec) -> Result<f64> {
    if points.len() == 1 {
        return Ok(n.eval_diff(y.as_slice(), points[0].as_slice()));
    }
    let dim = n.dim();
    let mut model = Model::new();
    let lam = model.vars(points.len());
    let t = model.var();
    model.minimize(t, 1.0);
    let mut sum = Affine::constant(-1.0);
    for &l in &lam {
        model.le0(Affine::default().term(l, -1.0));
        sum.terms.push((l, 1.0));
    }
    model.eq0(sum);
    let diff: Vec<Affine> = (0..dim)
        .map(|i| {
            let mut e = Affine::constant(y[i]);
            for (&l, p) in lam.iter().zip(points) {
                e.terms.push((l, -p[i]));
            }
            e
        })
        .collect();
    model.norm_le(n, &diff, Affine::var(t));
    Ok(model.solve()?.value.max(0.0))
}

/// One-sided excess `e(A, B) = sup_{a ∈ A} d(a, B)`.
pub fn excess(a: &MinimizerSet, b: &MinimizerSet, n: &NormSpec) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in a.points() {
        worst = worst.max(distance_to_set(p, b, n)?);
    }
    Ok(worst)
}

pub fn hausdorff_distance(a: &MinimizerSet, b: &MinimizerSet, n: &NormSpec) -> Result<f64> {
    Ok(excess(a, b, n)?.max(excess(b, a, n)?))
}

/// `d(y, P_C(x))`, computed exactly whenever the projection set is exact.
pub fn distance_to_projection_set(y: &Vector, x: &Vector, c: &ConvexBody, n: &NormSpec) -> Result<f64> {
    check_inputs(x, c, n)?;
    check_dim(n.dim(), y.dim())?;
    let (d, coeffs) = solve_distance(x, c, n)?;
    let polyhedral = n.is_polyhedral() && c.is_polyhedral(n);
    if d <= 1e-12 || n.is_strictly_convex() || polyhedral && c.coeff_dim(n.dim()) <= MAX_VERTEX_DIM {
        let set = level_set(x, c, n, d, &coeffs, 0.0, SamplingOptions::default())?;
        return distance_to_set(y, &set, n);
    }
    let eta = if polyhedral { 1e-10 } else { 1e-7 * d.max(1.0) };
    constrained_distance(y, x, c, n, d + eta)
}

/// `d(y, C ∩ B[x, level])` as a single convex program.
pub(crate) fn constrained_distance(y: &Vector, x: &Vector, body: &ConvexBody, n: &NormSpec, level: f64) -> Result<f64> {
    let dim = n.dim();
    let mut model = Model::new();
    let c = model.vars(body.coeff_dim(dim));
    let t = model.var();
    model.minimize(t, 1.0);
    let z = body.embed_affine(&c, dim);
    let to_y: Vec<Affine> = z.iter().zip(y.iter()).map(|(e, yi)| e.clone().scaled(-1.0).plus(*yi)).collect();
    let to_x: Vec<Affine> = z.iter().zip(x.iter()).map(|(e, xi)| e.clone().scaled(-1.0).plus(*xi)).collect();
    model.norm_le(n, &to_y, Affine::var(t));
    model.norm_le(n, &to_x, Affine::constant(level));
    body.constrain(&mut model, &c, n, None);
    Ok(model.solve()?.value.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(dim: usize, i: usize) -> Vector {
        Vector::basis(dim, i)
    }

    #[test]
    fn disk_projection() {
        let n = NormSpec::euclidean(2);
        let c = ConvexBody::norm_ball(1.0).unwrap();
        let r = project(&Vector::from([2.0, 0.0]), &c, &n).unwrap();
        assert!((r.distance - 1.0).abs() < 1e-12);
        assert_eq!(r.minimizers, MinimizerSet::Singleton(Vector::from([1.0, 0.0])));
    }

    #[test]
    fn linf_distance_to_coordinate_plane() {
        let n = NormSpec::linf(3);
        let y = ConvexBody::subspace(vec![e(3, 0), e(3, 1)]).unwrap();
        let d = distance(&Vector::from([1.0, 2.0, 3.0]), &y, &n).unwrap();
        assert!((d - 3.0).abs() < 1e-12);
    }

    #[test]
    fn distance_is_zero_inside() {
        for n in [NormSpec::euclidean(2), NormSpec::l1(2), NormSpec::lp(2, 3.0).unwrap()] {
            let c = ConvexBody::norm_ball(2.0).unwrap();
            assert_eq!(distance(&Vector::from([0.5, -0.5]), &c, &n).unwrap(), 0.0);
            let y = ConvexBody::subspace(vec![Vector::from([1.0, 1.0])]).unwrap();
            let d = distance(&Vector::from([2.0, 2.0]), &y, &n).unwrap();
            assert!(d < 1e-9, "{d}");
        }
    }

    #[test]
    fn linf_projection_is_a_segment() {
        let n = NormSpec::linf(2);
        let y = ConvexBody::subspace(vec![e(2, 0)]).unwrap();
        let r = project(&Vector::from([0.0, 1.0]), &y, &n).unwrap();
        assert!((r.distance - 1.0).abs() < 1e-12);
        let MinimizerSet::Face(face) = &r.minimizers else { panic!("{:?}", r.minimizers) };
        assert_eq!(face.vertices().len(), 2);
        assert!((face.vertices()[0][0] + 1.0).abs() < 1e-8 && (face.vertices()[1][0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn euclidean_subspace_ball() {
        let n = NormSpec::euclidean(2);
        let b = ConvexBody::subspace_ball(vec![e(2, 0)], 1.0).unwrap();
        let r = project(&Vector::from([2.0, 1.0]), &b, &n).unwrap();
        assert!((r.distance - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.minimizers, MinimizerSet::Singleton(Vector::from([1.0, 0.0])));
    }

    #[test]
    fn near_set_segment() {
        let n = NormSpec::linf(2);
        let y = ConvexBody::subspace(vec![e(2, 0)]).unwrap();
        let s = near_minimizer_set(&Vector::from([0.0, 1.0]), &y, &n, NearSetSpec::new(0.5).unwrap()).unwrap();
        let pts = s.points();
        assert_eq!(pts.len(), 2);
        assert!((pts[0][0] + 1.5).abs() < 1e-8 && (pts[1][0] - 1.5).abs() < 1e-8);
    }

    #[test]
    fn near_set_at_zero_matches_projection() {
        let n = NormSpec::linf(2);
        let y = ConvexBody::subspace(vec![e(2, 0)]).unwrap();
        let x = Vector::from([0.3, 1.0]);
        let near = near_minimizer_set(&x, &y, &n, NearSetSpec::new(0.0).unwrap()).unwrap();
        let proj = project(&x, &y, &n).unwrap().minimizers;
        assert!(hausdorff_distance(&near, &proj, &n).unwrap() < 1e-6);
    }

    #[test]
    fn disk_lens_is_sampled_inside_the_lens() {
        let n = NormSpec::euclidean(2);
        let c = ConvexBody::norm_ball(1.0).unwrap();
        let x = Vector::from([2.0, 0.0]);
        let s = near_minimizer_set(&x, &c, &n, NearSetSpec::new(0.1).unwrap()).unwrap();
        let MinimizerSet::Sampled { points, coverage_radius } = &s else { panic!() };
        assert!(*coverage_radius < 1e-3, "{coverage_radius}");
        for p in points {
            assert!(n.eval(p.as_slice()) <= 1.0 + 1e-9);
            assert!(n.eval_diff(p.as_slice(), x.as_slice()) <= 1.1 + 1e-9);
        }
    }

    #[test]
    fn hausdorff_examples() {
        let n = NormSpec::linf(2);
        let a = MinimizerSet::Face(VPolytope::new(vec![Vector::from([-1.0, 0.0]), Vector::from([1.0, 0.0])]).unwrap());
        let b = MinimizerSet::Face(VPolytope::new(vec![Vector::from([-0.9, 0.0]), Vector::from([1.1, 0.0])]).unwrap());
        assert!(hausdorff_distance(&a, &a, &n).unwrap() < 1e-12);
        assert!((hausdorff_distance(&a, &b, &n).unwrap() - 0.1).abs() < 1e-9);

        let l2 = NormSpec::euclidean(2);
        let p = MinimizerSet::Singleton(Vector::from([1.0, 0.0]));
        assert!((excess(&a, &p, &l2).unwrap() - 2.0).abs() < 1e-9);
        assert!(excess(&p, &a, &l2).unwrap() < 1e-7);
        assert!((hausdorff_distance(&p, &a, &l2).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn smooth_norm_projection_onto_line() {
        let n = NormSpec::lp(2, 3.0).unwrap();
        let y = ConvexBody::subspace(vec![Vector::from([1.0, 1.0])]).unwrap();
        let x = Vector::from([1.0, 0.0]);
        let r = project(&x, &y, &n).unwrap();
        // by symmetry the minimizer is (1/2, 1/2), distance 2^{1/3}/2
        let MinimizerSet::Singleton(z) = &r.minimizers else { panic!() };
        assert!((z[0] - 0.5).abs() < 1e-5 && (z[1] - 0.5).abs() < 1e-5, "{z:?}");
        assert!((r.distance - 2f64.powf(1.0 / 3.0) / 2.0).abs() < 1e-8);
    }

    #[test]
    fn errors_on_dimension_mismatch() {
        let n = NormSpec::euclidean(3);
        let c = ConvexBody::norm_ball(1.0).unwrap();
        assert!(matches!(distance(&Vector::from([1.0, 0.0]), &c, &n), Err(Error::DimensionMismatch { .. })));
    }
}
