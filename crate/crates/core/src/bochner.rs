//! Step functions on `[0, 1]` with values in a finite-dimensional normed space,
//! as a model of the Bochner spaces `L_p([0, 1], X)`.
//!
//! Each distance has two methods: `Formula` evaluates the pointwise expression
//! piece by piece, `Direct` solves one joint convex program over all pieces.
//! They are independent computations, so comparing them checks the formula.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::convex_solver::model::{Affine, Model};
use crate::error::{check_dim, Error, Result};
use crate::normed_space::{NormSpec, Vector};
use crate::projection::{distance, distance_to_projection_set, ConvexBody, SamplingOptions, MEMBERSHIP_TOL};
use crate::properties::{check_epsilon, grid_search, Bound, ExcessContext};

/// Largest number of pieces accepted from callers.
pub const MAX_PIECES: usize = 16;
/// Largest number of pieces a common refinement can produce.
pub const MAX_REFINED_PIECES: usize = 2 * MAX_PIECES - 1;

const WEIGHT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub w: f64,
    pub x: Vector,
}

/// `Σ xᵢ χ_{Eᵢ}` with the cells `Eᵢ` laid out left to right, `m(Eᵢ) = wᵢ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStep")]
pub struct StepFunction {
    pieces: Vec<Piece>,
}

#[derive(Deserialize)]
struct RawStep {
    pieces: Vec<Piece>,
}

impl TryFrom<RawStep> for StepFunction {
    type Error = Error;

    fn try_from(raw: RawStep) -> Result<Self> {
        StepFunction::new(raw.pieces)
    }
}

impl StepFunction {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.len() > MAX_PIECES {
            return Err(Error::InvalidInput(format!("{} pieces exceed the limit of {MAX_PIECES}", pieces.len())));
        }
        Self::checked(pieces)
    }

    fn checked(pieces: Vec<Piece>) -> Result<Self> {
        let first = pieces.first().ok_or_else(|| Error::InvalidInput("a step function needs a piece".into()))?;
        let dim = first.x.dim();
        let mut total = 0.0;
        for p in &pieces {
            check_dim(dim, p.x.dim())?;
            if !(p.w > 0.0 && p.w <= 1.0) {
                return Err(Error::InvalidInput(format!("piece weight {} is outside (0, 1]", p.w)));
            }
            total += p.w;
        }
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidInput(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { pieces })
    }

    pub fn constant(x: Vector) -> Self {
        Self { pieces: vec![Piece { w: 1.0, x }] }
    }

    /// Pieces of weight `1/k` each.
    pub fn equal_weights(values: Vec<Vector>) -> Result<Self> {
        let w = 1.0 / values.len().max(1) as f64;
        let mut pieces: Vec<Piece> = values.into_iter().map(|x| Piece { w, x }).collect();
        let rest = w * pieces.len().saturating_sub(1) as f64;
        if let Some(last) = pieces.last_mut() {
            // absorb rounding so the weights sum to one
            last.w = 1.0 - rest;
        }
        Self::new(pieces)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn dim(&self) -> usize {
        self.pieces[0].x.dim()
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    fn weights(&self) -> Vec<f64> {
        self.pieces.iter().map(|p| p.w).collect()
    }
}

/// Exponent `p ∈ [1, ∞]`; serialized as a number or `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpIndex(f64);

impl LpIndex {
    pub const ONE: LpIndex = LpIndex(1.0);
    pub const TWO: LpIndex = LpIndex(2.0);
    pub const INFINITY: LpIndex = LpIndex(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p >= 1.0 {
            Ok(Self(p))
        } else {
            Err(Error::InvalidInput(format!("p must be at least 1, got {p}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

impl fmt::Display for LpIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for LpIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for LpIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let p = match Raw::deserialize(d)? {
            Raw::Num(p) => p,
            Raw::Text(t) if matches!(t.as_str(), "inf" | "infinity" | "Infinity") => f64::INFINITY,
            Raw::Text(t) => return Err(serde::de::Error::custom(format!("invalid exponent {t:?}"))),
        };
        LpIndex::new(p).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Formula,
    Direct,
}

/// `(Σ wᵢ vᵢ^p)^{1/p}`, or `max vᵢ` for `p = ∞`.
fn aggregate(weights: &[f64], values: &[f64], p: LpIndex) -> f64 {
    if p.is_infinite() {
        return values.iter().copied().fold(0.0, f64::max);
    }
    let p = p.get();
    let sum: f64 = weights.iter().zip(values).map(|(w, v)| w * v.powf(p)).sum();
    sum.powf(1.0 / p)
}

pub fn lp_norm(f: &StepFunction, p: LpIndex, n: &NormSpec) -> Result<f64> {
    n.validate()?;
    check_dim(n.dim(), f.dim())?;
    let values: Vec<f64> = f.pieces.iter().map(|q| n.eval(q.x.as_slice())).collect();
    Ok(aggregate(&f.weights(), &values, p))
}

/// Rewrites `f` and `g` over the partition generated by both sets of cell endpoints.
pub fn common_refinement(f: &StepFunction, g: &StepFunction) -> Result<(StepFunction, StepFunction)> {
    check_dim(f.dim(), g.dim())?;
    let (mut i, mut j) = (0, 0);
    let (mut rf, mut rg) = (f.pieces[0].w, g.pieces[0].w);
    let (mut fa, mut ga) = (Vec::new(), Vec::new());
    while i < f.len() && j < g.len() {
        let m = rf.min(rg);
        if m > 1e-14 {
            fa.push(Piece { w: m, x: f.pieces[i].x.clone() });
            ga.push(Piece { w: m, x: g.pieces[j].x.clone() });
        }
        rf -= m;
        rg -= m;
        if rf <= 1e-14 {
            i += 1;
            rf = f.pieces.get(i).map_or(0.0, |p| p.w);
        }
        if rg <= 1e-14 {
            j += 1;
            rg = g.pieces.get(j).map_or(0.0, |p| p.w);
        }
    }
    Ok((StepFunction::checked(fa)?, StepFunction::checked(ga)?))
}

/// `Σ wᵢ gᵢ`.
pub fn average(g: &StepFunction) -> Vector {
    let mut acc = vec![0.0; g.dim()];
    for p in &g.pieces {
        for (a, v) in acc.iter_mut().zip(p.x.iter()) {
            *a += p.w * v;
        }
    }
    Vector::from_vec_unchecked(acc)
}

fn subspace_of(y: &ConvexBody) -> Result<&[Vector]> {
    match y {
        ConvexBody::Subspace { basis } => Ok(basis),
        _ => Err(Error::InvalidInput("expected a subspace".into())),
    }
}

/// The ball `B_Y`: radius 1 for a subspace, the given radius for a subspace ball.
fn ball_of(y: &ConvexBody) -> Result<ConvexBody> {
    match y {
        ConvexBody::Subspace { basis } => ConvexBody::subspace_ball(basis.clone(), 1.0),
        ConvexBody::SubspaceBall { .. } => Ok(y.clone()),
        _ => Err(Error::InvalidInput("expected a subspace or a subspace ball".into())),
    }
}

fn check_inputs(f: &StepFunction, y: &ConvexBody, n: &NormSpec) -> Result<()> {
    y.validate(n)?;
    check_dim(n.dim(), f.dim())
}

/// Joint program over `h = Σ (M cᵢ) χ_{Eᵢ}`: minimizes `‖f - h‖_p`, with
/// `extra` adding constraints on the coefficient blocks. Returns the achieved
/// objective and the blocks.
fn joint_program<F>(
    f: &StepFunction,
    basis: &ConvexBody,
    n: &NormSpec,
    p: LpIndex,
    extra: F,
) -> Result<(f64, Vec<Vec<f64>>)>
where
    F: FnOnce(&mut Model, &[Vec<usize>]),
{
    let dim = n.dim();
    let k = basis.coeff_dim(dim);
    let mut model = Model::new();
    let blocks: Vec<Vec<usize>> = f.pieces.iter().map(|_| model.vars(k)).collect();
    let obj = model.var();
    model.minimize(obj, 1.0);
    let ts = model.vars(f.len());
    for ((piece, c), &t) in f.pieces.iter().zip(&blocks).zip(&ts) {
        let diff = residual(basis, c, &piece.x, dim);
        model.norm_le(n, &diff, Affine::var(t));
    }
    weighted_le(&mut model, f, &ts, p, Affine::var(obj));
    extra(&mut model, &blocks);
    let sol = model.solve()?;
    let coeffs: Vec<Vec<f64>> = blocks.iter().map(|c| c.iter().map(|&i| sol.v[i]).collect()).collect();
    let values: Vec<f64> =
        f.pieces.iter().zip(&coeffs).map(|(piece, c)| n.eval_diff(piece.x.as_slice(), &basis.embed(c))).collect();
    Ok((aggregate(&f.weights(), &values, p), coeffs))
}

/// `x - M c` as affine expressions.
fn residual(basis: &ConvexBody, c: &[usize], x: &Vector, dim: usize) -> Vec<Affine> {
    basis.embed_affine(c, dim).into_iter().zip(x.iter()).map(|(e, xi)| e.scaled(-1.0).plus(*xi)).collect()
}

/// `(Σ wᵢ tᵢ^p)^{1/p} ≤ rhs`.
fn weighted_le(model: &mut Model, f: &StepFunction, ts: &[usize], p: LpIndex, rhs: Affine) {
    let scaled: Vec<Affine> = if p.is_infinite() {
        ts.iter().map(|&t| Affine::var(t)).collect()
    } else {
        f.pieces.iter().zip(ts).map(|(q, &t)| Affine::default().term(t, q.w.powf(1.0 / p.get()))).collect()
    };
    model.lp_le(p.get(), &scaled, rhs);
}

/// `‖M cᵢ‖ ≤ sᵢ` and `(Σ wᵢ sᵢ^p)^{1/p} ≤ radius`.
fn ball_constraint(
    model: &mut Model,
    f: &StepFunction,
    basis: &ConvexBody,
    n: &NormSpec,
    blocks: &[Vec<usize>],
    p: LpIndex,
    radius: f64,
) {
    let ss = model.vars(blocks.len());
    for (c, &s) in blocks.iter().zip(&ss) {
        let z = basis.embed_affine(c, n.dim());
        model.norm_le(n, &z, Affine::var(s));
    }
    weighted_le(model, f, &ss, p, Affine::constant(radius));
}

fn pointwise<F>(f: &StepFunction, p: LpIndex, each: F) -> Result<f64>
where
    F: Fn(&Piece) -> Result<f64> + Sync + Send,
{
    let values: Vec<f64> = f.pieces.par_iter().map(each).collect::<Result<_>>()?;
    Ok(aggregate(&f.weights(), &values, p))
}

/// `d(f, L_p(I, Y))` for a subspace `Y`.
pub fn dist_lifted_subspace(f: &StepFunction, y: &ConvexBody, n: &NormSpec, p: LpIndex, method: Method) -> Result<f64> {
    check_inputs(f, y, n)?;
    subspace_of(y)?;
    match method {
        Method::Formula => pointwise(f, p, |q| distance(&q.x, y, n)),
        Method::Direct => Ok(joint_program(f, y, n, p, |_, _| {})?.0),
    }
}

/// `d(f, B_{L_p(I, Y)})`. `Y` is a subspace (unit ball) or a subspace ball.
///
/// The direct method couples the pieces through `‖h‖_p ≤ r`; for `p = ∞`
/// that constraint splits into `‖hᵢ‖ ≤ r` and the pieces are solved apart.
pub fn dist_lifted_ball(f: &StepFunction, y: &ConvexBody, n: &NormSpec, p: LpIndex, method: Method) -> Result<f64> {
    check_inputs(f, y, n)?;
    let ball = ball_of(y)?;
    match method {
        Method::Formula => pointwise(f, p, |q| distance(&q.x, &ball, n)),
        Method::Direct if p.is_infinite() => pointwise(f, p, |q| distance(&q.x, &ball, n)),
        Method::Direct => Ok(coupled_ball(f, &ball, n, p)?.0),
    }
}

fn coupled_ball(f: &StepFunction, ball: &ConvexBody, n: &NormSpec, p: LpIndex) -> Result<(f64, Vec<Vec<f64>>)> {
    let radius = match ball {
        ConvexBody::SubspaceBall { radius, .. } => *radius,
        _ => unreachable!("ball_of returns subspace balls"),
    };
    joint_program(f, ball, n, p, |model, blocks| ball_constraint(model, f, ball, n, blocks, p, radius))
}

/// The step function `hᵢ ∈ P_{B_Y}(fᵢ)` built piece by piece.
pub fn pointwise_ball_projection(f: &StepFunction, y: &ConvexBody, n: &NormSpec) -> Result<StepFunction> {
    check_inputs(f, y, n)?;
    let ball = ball_of(y)?;
    let pieces = f
        .pieces
        .iter()
        .map(|q| {
            let r = crate::projection::project(&q.x, &ball, n)?;
            let h = r.minimizers.points()[0].clone();
            Ok(Piece { w: q.w, x: h })
        })
        .collect::<Result<_>>()?;
    StepFunction::checked(pieces)
}

/// `‖f - g‖_p` on the common refinement.
pub fn lp_distance(f: &StepFunction, g: &StepFunction, p: LpIndex, n: &NormSpec) -> Result<f64> {
    let (fr, gr) = common_refinement(f, g)?;
    let diff = fr.pieces.iter().zip(&gr.pieces).map(|(a, b)| Piece { w: a.w, x: &a.x - &b.x }).collect();
    lp_norm(&StepFunction::checked(diff)?, p, n)
}

/// `d(f, P_{L_p(I,Y)}(g))`, or `d(f, P_{B_{L_p(I,Y)}}(g))` when `ball` is set.
///
/// `f` must take values in `Y` (in `B_Y` for the ball version). The formula
/// method aggregates `d(fᵢ, P(gᵢ))`; the direct method minimizes `‖f - h‖_p`
/// over the lifted projection set described by one joint program.
pub fn dist_to_projection_set(
    f: &StepFunction,
    g: &StepFunction,
    y: &ConvexBody,
    n: &NormSpec,
    p: LpIndex,
    ball: bool,
    method: Method,
) -> Result<f64> {
    check_inputs(f, y, n)?;
    check_dim(f.dim(), g.dim())?;
    let body = if ball { ball_of(y)? } else { subspace_of(y).map(|_| y.clone())? };
    for q in f.pieces() {
        let violation = body.violation(&q.x, n)?;
        if violation > MEMBERSHIP_TOL {
            return Err(Error::NotInBody { violation });
        }
    }
    let (f, g) = common_refinement(f, g)?;
    match method {
        Method::Formula => {
            let values: Vec<f64> = f
                .pieces
                .par_iter()
                .zip(&g.pieces)
                .map(|(a, b)| distance_to_projection_set(&a.x, &b.x, &body, n))
                .collect::<Result<_>>()?;
            Ok(aggregate(&f.weights(), &values, p))
        }
        Method::Direct => projection_set_direct(&f, &g, &body, n, p, ball),
    }
}

fn projection_set_direct(
    f: &StepFunction,
    g: &StepFunction,
    body: &ConvexBody,
    n: &NormSpec,
    p: LpIndex,
    ball: bool,
) -> Result<f64> {
    let (dist, h) = if ball { coupled_ball(g, body, n, p)? } else { joint_program(g, body, n, p, |_, _| {})? };
    // the lifted space is strictly convex here, so the minimizer of the
    // distance program is the whole projection set
    let unique = n.is_strictly_convex() && !p.is_infinite() && (p.get() > 1.0 || !ball);
    if unique {
        let values: Vec<f64> =
            f.pieces.iter().zip(&h).map(|(q, c)| n.eval_diff(q.x.as_slice(), &body.embed(c))).collect();
        return Ok(aggregate(&f.weights(), &values, p));
    }
    let polyhedral = n.is_polyhedral() && (p.get() == 1.0 || p.is_infinite());
    let eta = if polyhedral { 1e-10 } else { 1e-9 } * dist.max(1.0);
    let radius = match body {
        ConvexBody::SubspaceBall { radius, .. } => *radius,
        _ => 0.0,
    };
    Ok(joint_program(f, body, n, p, |model, blocks| {
        let us = model.vars(blocks.len());
        for ((q, c), &u) in g.pieces.iter().zip(blocks).zip(&us) {
            let diff = residual(body, c, &q.x, n.dim());
            model.norm_le(n, &diff, Affine::var(u));
        }
        weighted_le(model, g, &us, p, Affine::constant(dist + eta));
        if ball {
            ball_constraint(model, g, body, n, blocks, p, radius);
        }
    })?
    .0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedModulus {
    pub base_delta: f64,
    pub lifted_delta: f64,
    pub pieces: usize,
    pub p: LpIndex,
    pub bound: Bound,
}

/// Budget units of the allocation knapsack.
const KNAPSACK_UNITS: usize = 240;
/// Candidate per-piece enlargements per evaluation.
const KNAPSACK_LEVELS: usize = 32;

/// Strong-proximinality moduli of `C` at `x` and of `L_p(I, C)` at the
/// constant function `x`, over step functions on `pieces` equal cells.
///
/// A lifted near point spends `tᵢ = ‖x - hᵢ‖ - d` on piece `i` subject to
/// `Σ wᵢ (d + tᵢ)^p ≤ (d + δ)^p`, and is at distance `(Σ wᵢ e(tᵢ)^p)^{1/p}`
/// from the lifted projection set, where `e` is the base excess. The lifted
/// excess maximizes that over allocations by a knapsack on a budget grid.
pub fn lifted_modulus_check(
    c: &ConvexBody,
    n: &NormSpec,
    x: &Vector,
    epsilon: f64,
    p: LpIndex,
    pieces: usize,
) -> Result<LiftedModulus> {
    check_epsilon(epsilon)?;
    if p.is_infinite() {
        return Err(Error::InvalidInput("the lifted modulus needs p < ∞".into()));
    }
    if pieces == 0 || pieces > MAX_PIECES {
        return Err(Error::InvalidInput(format!("pieces must be in 1..={MAX_PIECES}, got {pieces}")));
    }
    let opts = SamplingOptions { rays: 2000, ..SamplingOptions::default() };
    let ctx = ExcessContext::new(x, c, n, opts)?;
    let d = distance(x, c, n)?;
    let base = |delta: f64| -> Result<f64> { Ok(ctx.report(delta, opts)?.value) };
    let (base_delta, _, _) = grid_search(epsilon, |delta| Ok((base(delta)?, ())))?;

    let pp = p.get();
    let w = 1.0 / pieces as f64;
    let lifted = |delta: f64| -> Result<f64> {
        if delta == 0.0 {
            return Ok(0.0);
        }
        let budget = (d + delta).powf(pp) - d.powf(pp);
        let t_max = (d.powf(pp) + budget / w).powf(1.0 / pp) - d;
        let mut cost = Vec::with_capacity(KNAPSACK_LEVELS + 1);
        let mut gain = Vec::with_capacity(KNAPSACK_LEVELS + 1);
        for j in 0..=KNAPSACK_LEVELS {
            let t = t_max * j as f64 / KNAPSACK_LEVELS as f64;
            let share = w * ((d + t).powf(pp) - d.powf(pp)) / budget;
            cost.push((share * KNAPSACK_UNITS as f64 - 1e-9).ceil().max(0.0) as usize);
            gain.push(w * base(t)?.powf(pp));
        }
        let mut best = vec![0.0f64; KNAPSACK_UNITS + 1];
        for _ in 0..pieces {
            let mut next = vec![0.0f64; KNAPSACK_UNITS + 1];
            for (u, slot) in next.iter_mut().enumerate() {
                for j in 0..=KNAPSACK_LEVELS {
                    if cost[j] <= u {
                        *slot = slot.max(best[u - cost[j]] + gain[j]);
                    }
                }
            }
            best = next;
        }
        Ok(best[KNAPSACK_UNITS].powf(1.0 / pp))
    };
    let (lifted_delta, _, _) = grid_search(epsilon, |delta| Ok((lifted(delta)?, ())))?;
    Ok(LiftedModulus {
        base_delta,
        lifted_delta,
        pieces,
        p,
        bound: if ctx.is_exact() { Bound::Exact } else { Bound::UpperBound },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(parts: &[(f64, [f64; 2])]) -> StepFunction {
        StepFunction::new(parts.iter().map(|(w, x)| Piece { w: *w, x: Vector::from(*x) }).collect()).unwrap()
    }

    fn x_axis() -> ConvexBody {
        ConvexBody::coordinate_subspace(2, &[0]).unwrap()
    }

    #[test]
    fn norms_of_a_two_piece_function() {
        let f = step(&[(0.5, [0.0, 2.0]), (0.5, [0.0, 0.0])]);
        let n = NormSpec::euclidean(2);
        assert!((lp_norm(&f, LpIndex::TWO, &n).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(lp_norm(&f, LpIndex::INFINITY, &n).unwrap(), 2.0);
        let c = StepFunction::constant(Vector::from([3.0, 4.0]));
        for p in [1.0, 1.5, 7.0] {
            assert!((lp_norm(&c, LpIndex::new(p).unwrap(), &n).unwrap() - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn refinement_weights() {
        let f = step(&[(0.5, [1.0, 0.0]), (0.5, [0.0, 1.0])]);
        let g = step(&[(1.0 / 3.0, [0.0, 0.0]), (2.0 / 3.0, [1.0, 1.0])]);
        let (fr, gr) = common_refinement(&f, &g).unwrap();
        let w: Vec<f64> = fr.pieces().iter().map(|p| p.w).collect();
        assert_eq!(w.len(), 3);
        for (a, b) in w.iter().zip([1.0 / 3.0, 1.0 / 6.0, 0.5]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(gr.pieces()[1].x, Vector::from([1.0, 1.0]));
        let (ff, _) = common_refinement(&f, &f).unwrap();
        assert_eq!(ff, f);
    }

    #[test]
    fn weights_are_validated() {
        assert!(StepFunction::new(vec![Piece { w: 0.5, x: Vector::zeros(2) }]).is_err());
        let json = r#"{"pieces":[{"w":0.25,"x":[1,2]},{"w":0.75,"x":[0,0]}]}"#;
        let f: StepFunction = serde_json::from_str(json).unwrap();
        assert_eq!(f.len(), 2);
        assert!(serde_json::from_str::<StepFunction>(r#"{"pieces":[{"w":0.2,"x":[1]}]}"#).is_err());
    }

    #[test]
    fn exponent_serde() {
        let p: LpIndex = serde_json::from_str("\"inf\"").unwrap();
        assert!(p.is_infinite());
        assert_eq!(serde_json::to_string(&LpIndex::TWO).unwrap(), "2.0");
        assert!(serde_json::from_str::<LpIndex>("0.5").is_err());
    }

    #[test]
    fn lifted_subspace_examples() {
        let n = NormSpec::euclidean(2);
        let f = step(&[(0.5, [0.0, 2.0]), (0.5, [0.0, 0.0])]);
        for m in [Method::Formula, Method::Direct] {
            let two = dist_lifted_subspace(&f, &x_axis(), &n, LpIndex::TWO, m).unwrap();
            assert!((two - 2f64.sqrt()).abs() < 1e-6, "{m:?} {two}");
            let inf = dist_lifted_subspace(&f, &x_axis(), &n, LpIndex::INFINITY, m).unwrap();
            assert!((inf - 2.0).abs() < 1e-6, "{m:?} {inf}");
        }
    }

    #[test]
    fn lifted_ball_symmetric_example() {
        let n = NormSpec::euclidean(2);
        let f = step(&[(0.5, [3.0, 0.0]), (0.5, [-3.0, 0.0])]);
        for m in [Method::Formula, Method::Direct] {
            let v = dist_lifted_ball(&f, &x_axis(), &n, LpIndex::TWO, m).unwrap();
            assert!((v - 2.0).abs() < 1e-6, "{m:?} {v}");
        }
        let c = StepFunction::constant(Vector::from([2.0, 0.0]));
        for p in [LpIndex::ONE, LpIndex::TWO, LpIndex::INFINITY] {
            let v = dist_lifted_ball(&c, &x_axis(), &n, p, Method::Direct).unwrap();
            assert!((v - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn coupled_ball_beats_the_pointwise_formula() {
        // mass can move between pieces under the coupled constraint
        let n = NormSpec::euclidean(2);
        let f = step(&[(0.5, [3.0, 0.0]), (0.5, [0.0, 0.0])]);
        let formula = dist_lifted_ball(&f, &x_axis(), &n, LpIndex::ONE, Method::Formula).unwrap();
        let direct = dist_lifted_ball(&f, &x_axis(), &n, LpIndex::ONE, Method::Direct).unwrap();
        assert!((formula - 1.0).abs() < 1e-9);
        assert!((direct - 0.5).abs() < 1e-6, "{direct}");
    }

    #[test]
    fn projection_set_examples() {
        let n = NormSpec::linf(2);
        let f = StepFunction::constant(Vector::from([3.0, 0.0]));
        let g = StepFunction::constant(Vector::from([0.0, 1.0]));
        for m in [Method::Formula, Method::Direct] {
            let v = dist_to_projection_set(&f, &g, &x_axis(), &n, LpIndex::ONE, false, m).unwrap();
            assert!((v - 2.0).abs() < 1e-6, "{m:?} {v}");
        }
        let f2 = step(&[(0.5, [3.0, 0.0]), (0.5, [0.0, 0.0])]);
        let g2 = step(&[(0.5, [0.0, 1.0]), (0.5, [0.0, 2.0])]);
        for m in [Method::Formula, Method::Direct] {
            let v = dist_to_projection_set(&f2, &g2, &x_axis(), &n, LpIndex::ONE, false, m).unwrap();
            assert!((v - 1.0).abs() < 1e-6, "{m:?} {v}");
        }
        let outside = StepFunction::constant(Vector::from([0.0, 1.0]));
        assert!(dist_to_projection_set(&outside, &g, &x_axis(), &n, LpIndex::ONE, false, Method::Formula).is_err());
    }

    #[test]
    fn average_and_jensen() {
        let g = step(&[(0.5, [1.0, 0.0]), (0.5, [-1.0, 0.0])]);
        assert_eq!(average(&g), Vector::zeros(2));
        let c = StepFunction::constant(Vector::from([0.3, 0.4]));
        assert_eq!(average(&c), Vector::from([0.3, 0.4]));
    }

    #[test]
    fn lifted_modulus_constant_and_mideal() {
        let n = NormSpec::linf(3);
        let y = ConvexBody::coordinate_subspace(3, &[0, 1]).unwrap();
        let x = Vector::from([1.0, 2.0, 3.0]);
        let one = lifted_modulus_check(&y, &n, &x, 0.3, LpIndex::ONE, 1).unwrap();
        assert!((one.base_delta - one.lifted_delta).abs() <= 1e-3);
        let four = lifted_modulus_check(&y, &n, &x, 0.3, LpIndex::ONE, 4).unwrap();
        assert!(four.lifted_delta >= 0.3 - 1e-3, "{four:?}");
    }
}
