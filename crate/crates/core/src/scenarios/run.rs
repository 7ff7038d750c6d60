use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use super::config::{config_error, Check, Scenario};
use super::report::{Report, Status};
use super::sweeps::{
    half_ball_sweep, jensen_sweep, lift_sweep, pointwise_ball_sweep, LiftKind, SweepOutcome, SweepShape,
};
use crate::bochner::{
    average, dist_lifted_ball, dist_lifted_subspace, dist_to_projection_set, lifted_modulus_check, lp_norm, LpIndex,
    Method, StepFunction,
};
use crate::convex_solver::VPolytope;
use crate::error::{Error, Result};
use crate::normed_space::Vector;
use crate::projection::{
    distance, distance_to_projection_set, hausdorff_distance, project_with, MinimizerSet, SamplingOptions,
};
use crate::properties::{
    continuity_sweep, half_ball_residual, lz_falsifier, projection_continuity_probe, strong_prox_excess_report,
    strong_prox_modulus_with, three_two_ip_check_seeded, uniform_prox_modulus, ModulusEstimate, SamplingBudget, Triple,
};

#[derive(Default)]
struct Outcome {
    status: Option<Status>,
    values: BTreeMap<String, Value>,
    witnesses: Vec<Vector>,
    residuals: Vec<f64>,
}

impl Outcome {
    fn set(&mut self, key: &str, v: impl serde::Serialize) {
        self.values.insert(key.to_string(), json!(v));
    }

    /// Records a residual and returns whether it is within `tol`.
    fn residual(&mut self, r: f64, tol: f64) -> bool {
        self.residuals.push(r);
        r <= tol
    }

    fn verdict(&mut self, ok: bool) {
        self.status = Some(if ok { Status::Pass } else { Status::Fail });
    }

    fn estimate(&mut self, positive: bool) {
        self.status = Some(if positive { Status::Estimate } else { Status::Fail });
    }
}

/// Runs one scenario. Errors are configuration or input problems.
pub fn run_scenario(s: &Scenario) -> Result<Report> {
    let start = Instant::now();
    let mut out = Outcome::default();
    match s.check {
        Check::Distance => check_distance(s, &mut out)?,
        Check::Project => check_project(s, &mut out)?,
        Check::StrongModulus => check_strong_modulus(s, &mut out)?,
        Check::UniformModulus => check_uniform_modulus(s, &mut out)?,
        Check::HalfBall => check_half_ball(s, &mut out)?,
        Check::ThreeTwoIp => check_three_two_ip(s, &mut out)?,
        Check::ContinuityProbe => check_continuity(s, &mut out)?,
        Check::LzFalsify => check_lz(s, &mut out)?,
        Check::LiftSubspace => check_lift(s, &mut out, LiftKind::Subspace)?,
        Check::LiftBall => check_lift(s, &mut out, LiftKind::Ball)?,
        Check::LiftProjectionSet => check_lift(s, &mut out, LiftKind::ProjectionSet)?,
        Check::LiftModulus => check_lift_modulus(s, &mut out)?,
        Check::Average => check_average(s, &mut out)?,
    }
    Ok(Report {
        scenario: s.name.clone(),
        status: out.status.unwrap_or(Status::Pass),
        values: out.values,
        witnesses: out.witnesses,
        residuals: out.residuals,
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

/// Runs scenarios on a pool of `jobs` workers; results keep the input order.
pub fn run_all(scenarios: &[Scenario], jobs: Option<usize>) -> Vec<Result<Report>> {
    let run = || scenarios.par_iter().map(run_scenario).collect();
    match jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        None => run(),
    }
}

fn sampling(s: &Scenario, rays: Option<usize>) -> SamplingOptions {
    let d = SamplingOptions::default();
    SamplingOptions { rays: rays.unwrap_or(d.rays), probes: d.probes, seed: s.seed }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DistanceParams {
    x: Vector,
    expected: Option<f64>,
}

fn check_distance(s: &Scenario, out: &mut Outcome) -> Result<()> {
    let p: DistanceParams = s.params()?;
    let d = distance(&p.x, &s.body()?, &s.norm()?)?;
    out.set("distance", d);
    if let Some(e) = p.expected {
        let ok = out.residual((d - e).abs(), s.tol("distance", 1e-8));
        out.verdict(ok);
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectParams {
    x: Vector,
    expected_distance: Option<f64>,
    expected_points: Option<Vec<Vector>>,
    rays: Option<usize>,
}

fn check_project(s: &Scenario, out: &mut Outcome) -> Result<()> {
    let p: ProjectParams = s.params()?;
    let n = s.norm()?;
    let r = project_with(&p.x, &s.body()?, &n, sampling(s, p.rays))?;
    out.set("distance", r.distance);
    let kind = match &r.minimizers {
        MinimizerSet::Singleton(_) => "singleton",
        MinimizerSet::Face(_) => "face",
        MinimizerSet::Sampled { coverage_radius, .. } => {
            out.set("coverage_radius", coverage_radius);
            "sampled"
        }
    };
    out.set("set_kind", kind);
    out.set("points", r.minimizers.points().len());
    if r.minimizers.is_exact() {
        out.witnesses.extend(r.minimizers.points().iter().cloned());
    }
    let mut ok = true;
    if let Some(e) = p.expected_distance {
        ok &= out.residual((r.distance - e).abs(), s.tol("distance", 1e-8));
    }
    if let Some(points) = p.expected_points {
        let expected = MinimizerSet::Face(VPolytope::new(points)?);
        let h = hausdorff_distance(&r.minimizers, &expected, &n)?;
        out.set("hausdorff_to_expected", h);
        ok &= out.residual(h, s.tol("hausdorff", 1e-8));
    }
    out.verdict(ok);
    Ok(())
}

fn record_modulus(out: &mut Outcome, m: &ModulusEstimate) {
    out.set("epsilon", m.epsilon);
    out.set("delta", m.delta);
    out.set("achieved_excess", m.worst_witness.achieved_excess);
    out.set("bound", m.bound);
    out.set("capped", m.capped);
    out.set("samples_used", m.samples_used);
    if let Some(r) = m.radius_r {
        out.set("radius", r);
    }
    out.witnesses.push(m.worst_witness.x.clone());
    out.witnesses.extend(m.worst_witness.y.clone());
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StrongParams {
    x: Vector,
    epsilon: f64,
    delta_range: Option<[f64; 2]>,
    #[serde(default)]
    excess_at: Vec<f64>,
    rays: Option<usize>,
}

fn check_strong_modulus(s: &Scenario, out: &mut Outcome) -> Result<()> {
    let p: StrongParams = s.params()?;
    let (n, c) = (s.norm()?, s.body()?);
    let opts = sampling(s, p.rays);
    let m = strong_prox_modulus_with(&c, &n, &p.x, p.epsilon, opts)?;
    record_modulus(out, &m);
    for delta in &p.excess_at {
        let e = strong_prox_excess_report(&c, &n, &p.x, *delta, opts)?;
        out.set(&format!("excess_at_{delta}"), e.value);
    }
    match p.delta_range {
        Some([lo, hi]) => {
            let miss = (lo - m.delta).max(m.delta - hi).max(0.0);
            let ok = out.residual(miss, 0.0);
            out.verdict(ok);
        }
        None => out.estimate(m.delta > 0.0),
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UniformParams {
    epsilon: f64,
    radius: f64,
    budget: Option<SamplingBudget>,
    min_delta: Option<f64>,
}

fn check_uniform_modulus(s: &Scenario, out: &mut Outcome) -> Result<()> {
    let p: UniformParams = s.params()?;
    let budget = SamplingBudget { seed: s.seed, ..p.budget.unwrap_or_default() };
    let m = uniform_prox_modulus(&s.body()?, &s.norm()?, p.epsilon, p.radius, &budget)?;
    record_modulus(out, &m);
    match p.min_delta {
        Some(min) => {
            let ok = out.residual((min - m.delta).max(0.0), 0.0);
            out.verdict(ok);
        }
        None => out.estimate(m.delta > 0.0),
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HalfBallParams {
    x: Option<Vector>,
    y: Option<Vector>,
    samples: Option<usize>,
}

fn check_half_ball(s: &Scenario, out: &mut Outcome) -> Result<()> {
    let p: HalfBallParams = s.params()?;
    let (n, c) = (s.norm()?, s.body()?);
    let tol = s.tol("residual", 1e-6);
    match (p.x, p.y, p.samples) {
        (Some(x), Some(y), None) => {
            let r = half_ball_residual(&c, &n, &x, &y)?;
            out.set("lhs", r.lhs);
            out.set("rhs", r.rhs);
            out.set("residual", r.residual);
            out.witnesses.extend([x, y]);
            let ok = out.residual(r.residual, tol);
            out.verdict(ok);
        }
        (None, None, Some(count)) => {
            let rows = half_ball_sweep(&c, &n, count, s.seed)?;
            let worst = rows
                .iter()
                .max_by(|a, b| a.2.total_cmp(&b.2))
                .ok_or_else(|| config_error("params.samples", "must be positive"))?;
            out.set("samples", count);
            out.set("max_residual", worst.2);
            out.witnesses.extend([worst.0.clone(), worst.1.clone()]);
            let ok = out.residual(worst.2, tol);
            out.verdict(ok);
        }
        _ => return Err(config_error("params", "give either x and y, or samples")),
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IpParams {
    trials: usize,
    #[serde(default)]
    seeded: Vec<Triple>,
}

fn check_three_two_ip(s: &Scenario, out: &mut Outcome) -> Result<()> {
    let p: IpParams = s.params()?;
    let v = three_two_ip_check_seeded(&s.norm()?, p.trials, s.seed, &p.seeded)?;
    out.set("holds_on_samples", v.holds_on_samples);
    out.set("trials_run", v.trials_run);
    if let Some(ce) = &v.counterexample {
        out.set("slack", ce.slack);
        out.set("radii", &ce.radii);
        out.witnesses.extend(ce.centers.iter().cloned());
        out.residuals.push(ce.slack);
    }
    out.verdict(v.holds_on_samples);
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ContinuityParams {
    x: Vector,
    radius: f64,
    bound: Option<f64>,
    #[serde(default)]
    sweep: bool,
    budget: Option<SamplingBudget>,
}

fn check_continuity(s: &Scenario, out: &mut Outcome) -> Result<()> {
    let p: ContinuityParams = s.params()?;
    let (n, c) = (s.norm()?, s.body()?);
    let budget = SamplingBudget { seed: s.seed, ..p.budget.unwrap_or_default() };
    let probe = projection_continuity_probe(&c, &n, &p.x, p.radius, &budget)?;
    out.set("max_hausdorff", probe.max_hausdorff);
    out.witnesses.push(probe.argmax_perturbation);
    let mut ok = true;
    if p.sweep {
        let maxima = continuity_sweep(&c, &n, &p.x, p.radius, &budget)?;
        let rise = maxima.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        out.set("sweep", &maxima);
        ok &= out.residual(rise, s.tol("monotone", 1e-9));
    }
    match p.bound {
        Some(b) => {
            ok &= out.residual((probe.max_hausdorff - b).max(0.0), 0.0);
            out.verdict(ok);
        }
        None if p.sweep => out.verdict(ok),
        None => out.estimate(true),
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LzParams {
    x: Vector,
    alpha: f64,
    epsilon: f64,
    #[serde(default = "yes")]
    expect_witness: bool,
}

fn yes() -> bool {
    true
}

fn check_lz(s: &Scenario, out: &mut Outcome) -> Result<()> {
    let p: LzParams = s.params()?;
    let (n, c) = (s.norm()?, s.body()?);
    let w = lz_falsifier(&c, &n, &p.x, p.alpha, p.epsilon)?;
    out.set("alpha", p.alpha);
    out.set("epsilon", p.epsilon);
    out.set("found", w.is_some());
    match &w {
        Some(w) => {
            let gap = distance_to_projection_set(w, &p.x, &c, &n)?;
            out.set("witness", w);
            out.set("d_witness_to_proj", gap);
            out.set("d_witness_to_x", n.eval_diff(w.as_slice(), p.x.as_slice()));
            out.witnesses.push(w.clone());
            if !p.expect_witness {
                out.residuals.push(gap - p.epsilon);
            }
        }
        None if p.expect_witness => out.residuals.push(p.epsilon),
        None => {}
    }
    out.verdict(w.is_some() == p.expect_witness);
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LiftParams {
    f: Option<StepFunction>,
    g: Option<StepFunction>,
    p: Option<LpIndex>,
    random: Option<SweepShape>,
    #[serde(default)]
    ball: bool,
    /// Compare the pointwise ball projection against the lifted distance.
    #[serde(default)]
    pointwise_projection: bool,
}

fn check_lift(s: &Scenario, out: &mut Outcome, kind: LiftKind) -> Result<()> {
    let p: LiftParams = s.params()?;
    let kind = match kind {
        LiftKind::ProjectionSet if p.ball => LiftKind::BallProjectionSet,
        k => k,
    };
    let tol = match kind {
        LiftKind::Subspace => s.tol("formula", 1e-6),
        _ => s.tol("formula", 1e-5),
    };
    if let Some(shape) = p.random {
        let sweep = if p.pointwise_projection {
            pointwise_ball_sweep(&shape, s.seed)?
        } else {
            lift_sweep(kind, &shape, s.seed)?
        };
        return record_sweep(out, &sweep, kind, tol);
    }
    let (n, y) = (s.norm()?, s.body()?);
    let f = p.f.ok_or_else(|| config_error("params.f", "missing step function"))?;
    let exp = p.p.ok_or_else(|| config_error("params.p", "missing exponent"))?;
    let (formula, direct) = match kind {
        LiftKind::Subspace => (
            dist_lifted_subspace(&f, &y, &n, exp, Method::Formula)?,
            dist_lifted_subspace(&f, &y, &n, exp, Method::Direct)?,
        ),
        LiftKind::Ball => {
            (dist_lifted_ball(&f, &y, &n, exp, Method::Formula)?, dist_lifted_ball(&f, &y, &n, exp, Method::Direct)?)
        }
        LiftKind::ProjectionSet | LiftKind::BallProjectionSet => {
            let g = p.g.ok_or_else(|| config_error("params.g", "missing step function"))?;
            let ball = kind == LiftKind::BallProjectionSet;
            (
                dist_to_projection_set(&f, &g, &y, &n, exp, ball, Method::Formula)?,
                dist_to_projection_set(&f, &g, &y, &n, exp, ball, Method::Direct)?,
            )
        }
    };
    out.set("formula", formula);
    out.set("direct", direct);
    out.set("p", exp);
    let ok = out.residual(lift_residual(kind, exp, formula, direct), tol);
    out.verdict(ok);
    Ok(())
}

/// For `p = ∞` only `direct ≤ formula` is asserted on projection sets.
fn lift_residual(kind: LiftKind, p: LpIndex, formula: f64, direct: f64) -> f64 {
    let one_sided = p.is_infinite() && matches!(kind, LiftKind::ProjectionSet | LiftKind::BallProjectionSet);
    if one_sided {
        (direct - formula).max(0.0)
    } else {
        (formula - direct).abs()
    }
}

fn record_sweep(out: &mut Outcome, sweep: &SweepOutcome, kind: LiftKind, tol: f64) -> Result<()> {
    let residuals: Vec<f64> = sweep.samples.iter().map(|x| lift_residual(kind, x.p, x.formula, x.direct)).collect();
    let (worst_i, worst) =
        residuals.iter().copied().enumerate().fold((0, 0.0), |(bi, bv), (i, v)| if v > bv { (i, v) } else { (bi, bv) });
    out.set("samples", sweep.samples.len());
    out.set("max_residual", worst);
    out.set("violations", residuals.iter().filter(|&&r| r > tol).count());
    if let Some(w) = sweep.samples.get(worst_i) {
        out.set("worst", w);
    }
    let ok = out.residual(worst, tol);
    out.verdict(ok);
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LiftModulusParams {
    x: Vector,
    epsilon: f64,
    p: LpIndex,
    pieces: usize,
    #[serde(default)]
    equal_to_base: bool,
    min_lifted: Option<f64>,
}

fn check_lift_modulus(s: &Scenario, out: &mut Outcome) -> Result<()> {
    let p: LiftModulusParams = s.params()?;
    let m = lifted_modulus_check(&s.body()?, &s.norm()?, &p.x, p.epsilon, p.p, p.pieces)?;
    out.set("base_delta", m.base_delta);
    out.set("lifted_delta", m.lifted_delta);
    out.set("pieces", m.pieces);
    out.set("bound", m.bound);
    if p.equal_to_base {
        let ok = out.residual((m.base_delta - m.lifted_delta).abs(), s.tol("grid", 1e-3));
        out.verdict(ok);
    } else if let Some(min) = p.min_lifted {
        let ok = out.residual((min - m.lifted_delta).max(0.0), 0.0);
        out.verdict(ok);
    } else {
        out.estimate(m.lifted_delta > 0.0);
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AverageParams {
    g: Option<StepFunction>,
    samples: Option<usize>,
    exponents: Option<Vec<LpIndex>>,
}

fn check_average(s: &Scenario, out: &mut Outcome) -> Result<()> {
    let p: AverageParams = s.params()?;
    let exps = p.exponents.unwrap_or_else(|| {
        vec![
            LpIndex::ONE,
            LpIndex::new(1.5).expect("valid exponent"),
            LpIndex::TWO,
            LpIndex::new(4.0).expect("valid exponent"),
            LpIndex::INFINITY,
        ]
    });
    let tol = s.tol("jensen", 1e-12);
    let worst = match (p.g, p.samples) {
        (Some(g), None) => {
            let n = s.norm()?;
            let avg = average(&g);
            let len = n.eval(avg.as_slice());
            out.set("average", &avg);
            out.witnesses.push(avg);
            let mut worst = f64::NEG_INFINITY;
            for e in &exps {
                worst = worst.max(len - lp_norm(&g, *e, &n)?);
            }
            worst
        }
        (None, Some(count)) => {
            out.set("samples", count);
            jensen_sweep(count, &exps, s.seed)?
        }
        _ => return Err(config_error("params", "give either g or samples")),
    };
    out.set("max_excess_over_norm", worst);
    let ok = out.residual(worst.max(0.0), tol);
    out.verdict(ok);
    Ok(())
}

/// Whether an error comes from the scenario itself rather than from a solver.
pub fn is_config_error(e: &Error) -> bool {
    !matches!(e, Error::Infeasible | Error::Unbounded | Error::Convergence { .. })
}
