//! Finite-dimensional real normed spaces: vectors, norms, unit balls.
//!
//! A [`NormSpec`] is either an `ℓ_p` norm, a polyhedral gauge
//! `max_k |⟨g_k, x⟩|`, or a sup-direct-sum `X ⊕_∞ ℝ^k` of another norm with
//! extra sup coordinates. Everything downstream (projections, feasibility,
//! Bochner lifts) measures against one of these.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::convex_solver::HPolytope;
use crate::error::{check_dim, Error, Result};

/// Largest dimension for which `ℓ_1` is expanded into sign-pattern generators.
pub const MAX_L1_POLYHEDRAL_DIM: usize = 8;

/// A point of `ℝ^n` with finite coordinates.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("vector must have positive dimension".into()));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite coordinate {bad}")));
        }
        Ok(Self(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// The `i`-th standard basis vector of `ℝ^dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        Self(v)
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()), "non-finite coordinates: {coords:?}");
        Self(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn scaled(&self, alpha: f64) -> Vector {
        Vector(self.0.iter().map(|c| alpha * c).collect())
    }

    /// Euclidean length; used for tolerances, never as the space norm.
    pub fn euclidean_len(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Lexicographic comparison, used for deterministic tie-breaking.
    pub fn lex_cmp(&self, other: &Vector) -> std::cmp::Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.dim().cmp(&other.dim())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Vector::new(coords)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

/// Panics on non-finite coordinates.
impl<const N: usize> From<[f64; N]> for Vector {
    fn from(coords: [f64; N]) -> Self {
        Vector::new(coords.to_vec()).expect("finite coordinates")
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &Vector {
    type Output = Vector;

    fn add(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;

    fn sub(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &Vector {
    type Output = Vector;

    fn mul(self, alpha: f64) -> Vector {
        self.scaled(alpha)
    }
}

impl Neg for &Vector {
    type Output = Vector;

    fn neg(self) -> Vector {
        self.scaled(-1.0)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A norm on `ℝ^dim`.
#[derive(Clone, Debug, PartialEq)]
pub enum NormSpec {
    /// `ℓ_p` with `p ∈ [1, ∞]`; `p = f64::INFINITY` is the max norm.
    Lp { dim: usize, p: f64 },
    /// Gauge `max_k |⟨g_k, x⟩|`; a norm iff the generators span.
    Polyhedral { generators: Vec<Vector> },
    /// `‖(u, w)‖ = max(‖u‖_inner, max_j |w_j|)` with `extra` trailing coordinates.
    SupDirectSum { inner: Box<NormSpec>, extra: usize },
}

impl NormSpec {
    pub fn lp(dim: usize, p: f64) -> Result<Self> {
        let n = NormSpec::Lp { dim, p };
        n.validate()?;
        Ok(n)
    }

    pub fn euclidean(dim: usize) -> Self {
        NormSpec::Lp { dim, p: 2.0 }
    }

    pub fn l1(dim: usize) -> Self {
        NormSpec::Lp { dim, p: 1.0 }
    }

    pub fn linf(dim: usize) -> Self {
        NormSpec::Lp { dim, p: f64::INFINITY }
    }

    pub fn polyhedral(generators: Vec<Vector>) -> Result<Self> {
        let n = NormSpec::Polyhedral { generators };
        n.validate()?;
        Ok(n)
    }

    pub fn sup_direct_sum(inner: NormSpec, extra: usize) -> Result<Self> {
        let n = NormSpec::SupDirectSum { inner: Box::new(inner), extra };
        n.validate()?;
        Ok(n)
    }

    pub fn dim(&self) -> usize {
        match self {
            NormSpec::Lp { dim, .. } => *dim,
            NormSpec::Polyhedral { generators } => generators.first().map_or(0, Vector::dim),
            NormSpec::SupDirectSum { inner, extra } => inner.dim() + extra,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            NormSpec::Lp { dim, p } => {
                if *dim == 0 {
                    return Err(Error::InvalidNorm("dimension must be positive".into()));
                }
                if p.is_nan() || *p < 1.0 {
                    return Err(Error::InvalidNorm(format!("p must be >= 1, got {p}")));
                }
                Ok(())
            }
            NormSpec::Polyhedral { generators } => {
                let dim = self.dim();
                if generators.is_empty() || dim == 0 {
                    return Err(Error::InvalidNorm("polyhedral norm needs generators".into()));
                }
                for g in generators {
                    check_dim(dim, g.dim())?;
                }
                let m = DMatrix::from_fn(generators.len(), dim, |i, j| generators[i][j]);
                if m.rank(1e-10) < dim {
                    return Err(Error::InvalidNorm("generators do not span the space".into()));
                }
                Ok(())
            }
            NormSpec::SupDirectSum { inner, .. } => inner.validate(),
        }
    }

    /// Exact-pipeline norms: `ℓ_1`, `ℓ_∞`, polyhedral gauges and sup-sums of those.
    pub fn is_polyhedral(&self) -> bool {
        match self {
            NormSpec::Lp { p, .. } => *p == 1.0 || p.is_infinite(),
            NormSpec::Polyhedral { .. } => true,
            NormSpec::SupDirectSum { inner, .. } => inner.is_polyhedral(),
        }
    }

    pub fn is_strictly_convex(&self) -> bool {
        match self {
            NormSpec::Lp { dim, p } => *dim == 1 || (*p > 1.0 && p.is_finite()),
            NormSpec::Polyhedral { .. } => self.dim() == 1,
            NormSpec::SupDirectSum { inner, extra } => {
                (*extra == 0 && inner.is_strictly_convex()) || (inner.dim() == 0 && *extra == 1)
            }
        }
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self, NormSpec::Lp { p, .. } if *p == 2.0)
    }

    /// Evaluates the norm without dimension checks.
    pub(crate) fn eval(&self, v: &[f64]) -> f64 {
        match self {
            NormSpec::Lp { p, .. } => lp_eval(v, *p),
            NormSpec::Polyhedral { generators } => {
                generators.iter().fold(0.0, |m, g| m.max(dot(g.as_slice(), v).abs()))
            }
            NormSpec::SupDirectSum { inner, .. } => {
                let k = inner.dim();
                v[k..].iter().fold(inner.eval(&v[..k]), |m, c| m.max(c.abs()))
            }
        }
    }

    pub(crate) fn eval_diff(&self, a: &[f64], b: &[f64]) -> f64 {
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.eval(&d)
    }

    /// Rows `g_k` with `‖v‖ = max_k |⟨g_k, v⟩|`, for polyhedral norms only.
    pub fn gauge_rows(&self) -> Result<Vec<Vector>> {
        self.validate()?;
        let total = self.dim();
        let mut rows = Vec::new();
        self.push_rows(0, total, &mut rows)?;
        Ok(rows.into_iter().map(Vector::from_vec_unchecked).collect())
    }

    fn push_rows(&self, offset: usize, total: usize, out: &mut Vec<Vec<f64>>) -> Result<()> {
        let embed = |local: &[f64]| {
            let mut row = vec![0.0; total];
            row[offset..offset + local.len()].copy_from_slice(local);
            row
        };
        match self {
            NormSpec::Lp { dim, p } => {
                if p.is_infinite() {
                    out.extend((0..*dim).map(|i| embed(Vector::basis(*dim, i).as_slice())));
                } else if *p == 1.0 {
                    if *dim > MAX_L1_POLYHEDRAL_DIM {
                        return Err(Error::DimTooLarge { dim: *dim, max: MAX_L1_POLYHEDRAL_DIM });
                    }
                    out.extend(sign_patterns(*dim).iter().map(|s| embed(s)));
                } else {
                    return Err(Error::NoExactHRep { p: *p });
                }
            }
            NormSpec::Polyhedral { generators } => {
                out.extend(generators.iter().map(|g| embed(g.as_slice())));
            }
            NormSpec::SupDirectSum { inner, extra } => {
                inner.push_rows(offset, total, out)?;
                let k = offset + inner.dim();
                out.extend((0..*extra).map(|j| {
                    let mut row = vec![0.0; total];
                    row[k + j] = 1.0;
                    row
                }));
            }
        }
        Ok(())
    }
}

fn lp_eval(v: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return v.iter().fold(0.0, |m, c| m.max(c.abs()));
    }
    if p == 1.0 {
        return v.iter().map(|c| c.abs()).sum();
    }
    if p == 2.0 {
        return v.iter().map(|c| c * c).sum::<f64>().sqrt();
    }
    // scale by the max to keep the power sum in range
    let m = v.iter().fold(0.0, |m: f64, c| m.max(c.abs()));
    if m == 0.0 {
        return 0.0;
    }
    m * v.iter().map(|c| (c.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Sign vectors with a leading `+1`; `max_s |⟨s, x⟩| = ‖x‖_1`.
fn sign_patterns(dim: usize) -> Vec<Vec<f64>> {
    (0..1usize << (dim - 1))
        .map(|mask| (0..dim).map(|i| if i > 0 && mask & (1 << (i - 1)) != 0 { -1.0 } else { 1.0 }).collect())
        .collect()
}

/// A finite-dimensional real normed space.
#[derive(Clone, Debug, PartialEq)]
pub struct Space {
    pub dim: usize,
    pub norm: NormSpec,
}

impl Space {
    pub fn new(norm: NormSpec) -> Result<Self> {
        norm.validate()?;
        Ok(Self { dim: norm.dim(), norm })
    }
}

/// `‖v‖` under `n`.
pub fn norm_eval(v: &Vector, n: &NormSpec) -> Result<f64> {
    n.validate()?;
    check_dim(n.dim(), v.dim())?;
    Ok(n.eval(v.as_slice()))
}

/// The closed unit ball of a polyhedral norm as `{x : ±⟨g_k, x⟩ ≤ 1}`.
pub fn unit_ball_hrep(n: &NormSpec) -> Result<HPolytope> {
    let mut poly = HPolytope::new(n.dim());
    for g in n.gauge_rows()? {
        poly.push(g.clone(), 1.0)?;
        poly.push(-&g, 1.0)?;
    }
    Ok(poly)
}

/// A deterministic point of the unit sphere of `n`.
pub fn random_unit_vector(n: &NormSpec, seed: u64) -> Result<Vector> {
    n.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sample_unit_vector(n, &mut rng))
}

pub(crate) fn sample_unit_vector<R: Rng>(n: &NormSpec, rng: &mut R) -> Vector {
    let dir = gaussian_direction(n.dim(), rng);
    let len = n.eval(dir.as_slice());
    dir.scaled(1.0 / len)
}

/// Gaussian direction with unit Euclidean length.
pub(crate) fn gaussian_direction<R: Rng>(dim: usize, rng: &mut R) -> Vector {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let len = dot(&v, &v).sqrt();
        if len > 1e-12 {
            return Vector(v.into_iter().map(|c| c / len).collect());
        }
    }
}
