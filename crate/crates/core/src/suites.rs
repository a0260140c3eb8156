//! Verification suites: worked-example replay, oracle concordance and
//! randomized property sweeps.
//!
//! Every suite is deterministic given its seed and returns a
//! [`SuiteReport`] with raw metrics, so callers can both print a summary
//! and assert on the measured values.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coderivative::{
    coderivative_special, regular_coderivative, set_equal, set_membership, zero_in_coderivative,
    CoderivativeSet,
};
use crate::derivative::{gateaux, graphical};
use crate::error::Result;
use crate::hilbert::{inner, ortho_split, Vector};
use crate::oracle::{
    difference_quotient, geometric_schedule, limsup_quotient, roundoff_floor, SamplingScheme,
    Verdict,
};
use crate::projection::{project, Ball, RegionKind, DEFAULT_TAU};
use crate::sampling::InstanceGen;

const MAX_REPORTED_FAILURES: usize = 5;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: usize,
    pub failures: usize,
    pub first_failures: Vec<String>,
    pub metrics: BTreeMap<String, f64>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            checks: 0,
            failures: 0,
            first_failures: Vec::new(),
            metrics: BTreeMap::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failures.len() < MAX_REPORTED_FAILURES {
                self.first_failures.push(describe());
            }
        }
    }

    fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_string(), value);
    }

    fn track_max(&mut self, key: &str, value: f64) {
        let entry = self.metrics.entry(key.to_string()).or_insert(f64::NEG_INFINITY);
        *entry = entry.max(value);
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// The five-case table for the coderivative on an interval `[c−r, c+r]`.
pub fn interval_coderivative_table(c: f64, r: f64, x: f64, y: f64) -> CoderivativeSet {
    let single = |v: f64| CoderivativeSet::Singleton(Vector::new(vec![v]).expect("finite"));
    let between = |a: f64, b: f64| {
        CoderivativeSet::from_endpoints(
            Vector::new(vec![a]).expect("finite"),
            Vector::new(vec![b]).expect("finite"),
        )
        .expect("same dimension")
    };
    if (x - c).abs() < r {
        single(y)
    } else if (x - c).abs() > r {
        single(0.0)
    } else if x == c + r && y <= 0.0 {
        between(y, 0.0)
    } else if x == c - r && y >= 0.0 {
        between(0.0, y)
    } else {
        CoderivativeSet::Empty
    }
}

/// The two-case table for the graphical derivative on `[c−r, c+r]`.
pub fn interval_graphical_table(c: f64, r: f64, x: f64, y: f64) -> f64 {
    let inside = (x - c).abs() < r;
    let passes = inside || (x == c + r && y < 0.0) || (x == c - r && y > 0.0);
    if passes {
        y
    } else {
        0.0
    }
}

fn vec1(v: f64) -> Vector {
    Vector::new(vec![v]).expect("finite")
}

fn vec_of(c: &[f64]) -> Vector {
    Vector::from_slice(c).expect("finite")
}

/// Replays the worked one- and two-dimensional examples.
pub fn examples() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("examples");
    let xs = [-2.0, -1.0, 0.0, 0.5, 1.0, 2.0];
    let ys = [-3.0, -1.0, 0.0, 1.0, 3.0];

    for (c, r) in [(0.0, 1.0), (-1.0, 2.0)] {
        let ball = Ball::new(vec1(c), r)?;
        let grid_x: Vec<f64> = xs.iter().map(|x| c + r * x).collect();
        for &x in &grid_x {
            for &y in &ys {
                let got = regular_coderivative(&ball, &vec1(x), &vec1(y), DEFAULT_TAU)?;
                let want = interval_coderivative_table(c, r, x, y);
                rep.check(set_equal(&got, &want, 1e-12), || {
                    format!("interval coderivative c={c} r={r} x={x} y={y}: got {got:?}, want {want:?}")
                });

                let got = graphical(&ball, &vec1(x), &vec1(y))?;
                let want = interval_graphical_table(c, r, x, y);
                rep.check((got[0] - want).abs() <= 1e-12, || {
                    format!("interval graphical c={c} r={r} x={x} y={y}: got {}, want {want}", got[0])
                });
            }
        }
    }

    // special values at a boundary point of the unit disc
    let disc = Ball::centered(2, 1.0)?;
    let xbar = vec_of(&[1.0, 0.0]);
    let special = coderivative_special(&disc, &xbar, DEFAULT_TAU)?;
    rep.check(special.zero_maps_to_zero(), || "D*P(x)(0) != {0}".into());
    rep.check(special.offset_maps_to_empty(), || "D*P(x)(x) not empty".into());
    let set = regular_coderivative(&disc, &xbar, &vec_of(&[-0.5, 0.0]), DEFAULT_TAU)?;
    rep.check(set_membership(&set, &Vector::zeros(2), 1e-12), || {
        "0 not in D*P(x)(-x/2)".into()
    });

    // interior and exterior singletons
    let y = vec_of(&[1.0, 1.0]);
    let set = regular_coderivative(&disc, &vec_of(&[0.2, -0.3]), &y, DEFAULT_TAU)?;
    rep.check(set == CoderivativeSet::Singleton(y.clone()), || {
        format!("interior coderivative {set:?}")
    });
    let set = regular_coderivative(&disc, &vec_of(&[0.0, 2.0]), &y, DEFAULT_TAU)?;
    rep.check(set_equal(&set, &CoderivativeSet::Singleton(vec_of(&[0.5, 0.0])), 1e-15), || {
        format!("exterior coderivative {set:?}")
    });

    // boundary segment in the plane
    let set = regular_coderivative(&disc, &xbar, &vec_of(&[-1.0, 1.0]), DEFAULT_TAU)?;
    let want = CoderivativeSet::from_endpoints(vec_of(&[-1.0, 1.0]), vec_of(&[0.0, 1.0]))?;
    rep.check(set_equal(&set, &want, 1e-15), || format!("boundary segment {set:?}"));

    // directional derivatives in the plane
    for (x, u, want) in [
        ([0.2, 0.0], [5.0, 7.0], [5.0, 7.0]),
        ([1.0, 0.0], [1.0, 1.0], [0.0, 1.0]),
        ([0.0, 2.0], [1.0, 1.0], [0.5, 0.0]),
        ([1.0, 0.0], [-1.0, 1.0], [-1.0, 1.0]),
    ] {
        let got = gateaux(&disc, &vec_of(&x), &vec_of(&u))?;
        rep.check(got.distance(&vec_of(&want)) <= 1e-15, || {
            format!("gateaux x={x:?} u={u:?}: got {got:?}, want {want:?}")
        });
    }
    Ok(rep)
}

/// Thresholds for [`oracle_concordance`].
#[derive(Debug, Clone, Serialize)]
pub struct ConcordanceConfig {
    pub instances_per_region: usize,
    pub seed: u64,
    pub perturbation: f64,
    pub min_certified_fraction: f64,
    pub scheme: SamplingScheme,
}

impl Default for ConcordanceConfig {
    fn default() -> Self {
        ConcordanceConfig {
            instances_per_region: 500,
            seed: 0,
            perturbation: 0.1,
            min_certified_fraction: 0.95,
            scheme: SamplingScheme::default(),
        }
    }
}

/// Perturbations of size `mag` that leave the set: for segments, past
/// either end along the axis and sideways off the line; for singletons, a
/// random direction.
fn exiting_perturbations(set: &CoderivativeSet, gen: &mut InstanceGen, mag: f64) -> Vec<Vector> {
    match set {
        CoderivativeSet::Empty => Vec::new(),
        CoderivativeSet::Singleton(z) => vec![z.axpy(mag, &gen.unit(z.dim()))],
        CoderivativeSet::Segment(s) => {
            let (near, far) = s.endpoints();
            let along = s.axis().normalized().expect("axis is nonzero");
            // λ grows toward `near`, i.e. against the axis
            let mut out = vec![near.axpy(-mag, &along), far.axpy(mag, &along)];
            if s.axis().dim() > 1 {
                let side = loop {
                    let w = gen.unit(s.axis().dim());
                    if let Some(t) = ortho_split(s.axis(), &w).ok().and_then(|sp| sp.o.normalized()) {
                        break t;
                    }
                };
                out.push(s.midpoint().axpy(mag, &side));
            }
            out
        }
    }
}

/// Closed-form coderivative elements against the limsup oracle.
pub fn oracle_concordance(cfg: &ConcordanceConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("oracle");
    let mut gen = InstanceGen::new(cfg.seed);
    let (mut members, mut perturbed, mut certified) = (0usize, 0usize, 0usize);

    for region in [RegionKind::Interior, RegionKind::Boundary, RegionKind::Exterior] {
        for _ in 0..cfg.instances_per_region {
            let dim = gen.dim(1, 5);
            let ball = gen.ball(dim);
            let xbar = gen.point(&ball, region);
            let y = gen.vector(dim, 2.0);
            let set = regular_coderivative(&ball, &xbar, &y, DEFAULT_TAU)?;

            for z in set.representatives() {
                members += 1;
                let report = limsup_quotient(&ball, &xbar, &y, &z, &cfg.scheme)?;
                rep.track_max("member_finest_max_quotient", report.finest_max());
                rep.check(report.verdict == Verdict::ConsistentMember, || {
                    format!(
                        "{region:?} member z={z:?} y={y:?} x={xbar:?}: {:?}, finest max {:e}",
                        report.verdict,
                        report.finest_max()
                    )
                });
            }

            for zp in exiting_perturbations(&set, &mut gen, cfg.perturbation) {
                perturbed += 1;
                let report = limsup_quotient(&ball, &xbar, &y, &zp, &cfg.scheme)?;
                if report.verdict == Verdict::CertifiedNonMember {
                    certified += 1;
                } else if rep.first_failures.len() < MAX_REPORTED_FAILURES {
                    rep.first_failures.push(format!(
                        "uncertified perturbation ({region:?}) z={zp:?}: finest max {:e} along {:?}",
                        report.finest_max(),
                        report.per_radius_max.last().map(|m| &m.direction)
                    ));
                }
            }
        }
    }

    let fraction = if perturbed == 0 {
        1.0
    } else {
        certified as f64 / perturbed as f64
    };
    rep.metric("members", members as f64);
    rep.metric("perturbations", perturbed as f64);
    rep.metric("certified_fraction", fraction);
    rep.check(fraction >= cfg.min_certified_fraction, || {
        format!("certified fraction {fraction} below {}", cfg.min_certified_fraction)
    });
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FdBranch {
    Interior,
    Exterior,
    Outward,
    Inward,
    Tangent,
}

const FD_BRANCHES: [FdBranch; 5] = [
    FdBranch::Interior,
    FdBranch::Exterior,
    FdBranch::Outward,
    FdBranch::Inward,
    FdBranch::Tangent,
];

/// Random `(ball, x, u)` triples exercising each derivative branch.
fn fd_instance(gen: &mut InstanceGen, branch: FdBranch) -> (Ball, Vector, Vector) {
    let dim = gen.dim(1, 5);
    let ball = gen.ball(dim);
    let region = match branch {
        FdBranch::Interior => RegionKind::Interior,
        FdBranch::Exterior => RegionKind::Exterior,
        _ => RegionKind::Boundary,
    };
    let x = gen.point(&ball, region);
    let mut u = gen.vector(dim, 2.0);
    let offset = ball.offset(&x);
    let along = inner(&offset, &u).expect("same dim");
    match branch {
        FdBranch::Outward if along < 0.0 => u = -&u,
        FdBranch::Inward if along > 0.0 => u = -&u,
        FdBranch::Tangent => {
            u = ortho_split(&offset, &u).expect("nonzero offset").o;
        }
        _ => {}
    }
    (ball, x, u)
}

#[derive(Debug, Clone, Serialize)]
pub struct FdConfig {
    pub count: usize,
    pub seed: u64,
    pub steps: Vec<f64>,
    /// Error bound `slope·t·(1 + ‖u‖²)`.
    pub slope: f64,
    /// Required error reduction per decade of `t`, above the roundoff floor.
    pub min_decade_ratio: f64,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig {
            count: 500,
            seed: 0,
            steps: geometric_schedule(1e-2, 5),
            slope: 10.0,
            min_decade_ratio: 2.0,
        }
    }
}

/// Difference quotients of the projection against the Gâteaux formula.
///
/// Errors at the level of floating-point cancellation (see
/// [`roundoff_floor`]) are exempt from the rate check: on the linear
/// branches the quotient is exact and only cancellation noise remains.
pub fn fd_consistency(cfg: &FdConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("fd_consistency");
    let mut gen = InstanceGen::new(cfg.seed);
    let mut enforced = 0usize;
    for i in 0..cfg.count {
        let branch = FD_BRANCHES[i % FD_BRANCHES.len()];
        let (ball, x, u) = fd_instance(&mut gen, branch);
        let g = gateaux(&ball, &x, &u)?;
        let scale = 1.0 + x.norm() + u.norm();
        let bound_scale = 1.0 + u.norm_squared();

        let errors: Vec<f64> = cfg
            .steps
            .iter()
            .map(|&t| difference_quotient(&ball, &x, &u, t).distance(&g))
            .collect();
        for (&t, &e) in cfg.steps.iter().zip(&errors) {
            rep.track_max("max_error_over_bound", e / (cfg.slope * t * bound_scale));
            rep.check(e <= cfg.slope * t * bound_scale, || {
                format!("{branch:?} x={x:?} u={u:?} t={t:e}: error {e:e}")
            });
        }
        for k in 1..errors.len() {
            let (prev, cur, t) = (errors[k - 1], errors[k], cfg.steps[k]);
            let below_floor = cur <= roundoff_floor(scale, t);
            if !below_floor {
                enforced += 1;
            }
            let ok = below_floor || cur * cfg.min_decade_ratio <= prev;
            rep.check(ok, || {
                format!("{branch:?} x={x:?} u={u:?}: error {prev:e} -> {cur:e} at t={t:e}")
            });
        }
    }
    rep.metric("rate_checks_enforced", enforced as f64);
    Ok(rep)
}

fn random_point_near(gen: &mut InstanceGen, ball: &Ball) -> Vector {
    let spread = 2.5 * ball.radius();
    let off = gen.vector(ball.dim(), spread);
    ball.center() + &off
}

/// `‖P(x₁) − P(x₂)‖ ≤ ‖x₁ − x₂‖ + tol` over random pairs, half of them close.
pub fn nonexpansive(count: usize, seed: u64, tol: f64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("nonexpansive");
    let mut gen = InstanceGen::new(seed);
    for i in 0..count {
        let dim = gen.dim(1, 5);
        let ball = gen.ball(dim);
        let x1 = random_point_near(&mut gen, &ball);
        let x2 = if i % 2 == 0 {
            random_point_near(&mut gen, &ball)
        } else {
            let h = gen.vector(dim, 1e-3);
            &x1 + &h
        };
        let lhs = project(&ball, &x1).distance(&project(&ball, &x2));
        let rhs = x1.distance(&x2);
        rep.track_max("max_excess", lhs - rhs);
        rep.check(lhs <= rhs + tol, || format!("x1={x1:?} x2={x2:?}: {lhs} > {rhs}"));
    }
    Ok(rep)
}

pub fn idempotence(count: usize, seed: u64, tol: f64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("idempotence");
    let mut gen = InstanceGen::new(seed);
    for _ in 0..count {
        let dim = gen.dim(1, 5);
        let ball = gen.ball(dim);
        let x = random_point_near(&mut gen, &ball);
        let p = project(&ball, &x);
        let pp = project(&ball, &p);
        let err = p.distance(&pp);
        rep.track_max("max_error", err);
        rep.check(err <= tol, || format!("x={x:?}: ‖P(P(x)) − P(x)‖ = {err:e}"));
    }
    Ok(rep)
}

/// `P_{B(c,r)}(x) = c + P_{B(θ,r)}(x − c)`, relative to `max(1, ‖x‖, ‖c‖)`.
pub fn projection_covariance(count: usize, seed: u64, tol: f64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("projection_covariance");
    let mut gen = InstanceGen::new(seed);
    for _ in 0..count {
        let dim = gen.dim(1, 5);
        let ball = gen.ball(dim);
        let x = random_point_near(&mut gen, &ball);
        let origin = Ball::centered(dim, ball.radius())?;
        let lhs = project(&ball, &x);
        let rhs = ball.center() + &project(&origin, &ball.offset(&x));
        let scale = x.norm().max(ball.center().norm()).max(1.0);
        let err = lhs.distance(&rhs) / scale;
        rep.track_max("max_relative_error", err);
        rep.check(err <= tol, || format!("x={x:?} ball={ball:?}: relative error {err:e}"));
    }
    Ok(rep)
}

/// Set-level covariance of the regular coderivative under translation.
pub fn coderivative_covariance(count: usize, seed: u64, eps: f64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("coderivative_covariance");
    let mut gen = InstanceGen::new(seed);
    let regions = [RegionKind::Interior, RegionKind::Boundary, RegionKind::Exterior];
    for i in 0..count {
        let dim = gen.dim(1, 5);
        let ball = gen.ball(dim);
        let xbar = gen.point(&ball, regions[i % 3]);
        let y = gen.vector(dim, 2.0);
        let origin = Ball::centered(dim, ball.radius())?;
        let lhs = regular_coderivative(&ball, &xbar, &y, DEFAULT_TAU)?;
        let rhs = regular_coderivative(&origin, &ball.offset(&xbar), &y, DEFAULT_TAU)?;
        rep.check(set_equal(&lhs, &rhs, eps), || {
            format!("x={xbar:?} y={y:?}: {lhs:?} vs {rhs:?}")
        });
    }
    Ok(rep)
}

/// Special values at random boundary points: `{θ}` at `y = θ`, `∅` at
/// `y = x̄ − c`, and the `θ ∈ D̂*P(x̄)(y)` criterion on vectors chosen on
/// both sides of it.
pub fn special_values(count: usize, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("special_values");
    let mut gen = InstanceGen::new(seed);
    for _ in 0..count {
        let dim = gen.dim(1, 5);
        let ball = gen.ball(dim);
        let xbar = gen.point(&ball, RegionKind::Boundary);
        let special = coderivative_special(&ball, &xbar, DEFAULT_TAU)?;
        rep.check(special.zero_maps_to_zero(), || {
            format!("x={xbar:?}: D*P(x)(0) = {:?}", special.at_zero)
        });
        rep.check(special.offset_maps_to_empty(), || {
            format!("x={xbar:?}: D*P(x)(x−c) = {:?}", special.at_offset)
        });

        let offset = ball.offset(&xbar);
        let s = gen.uniform(0.1, 2.0);
        let mut cases = vec![(offset.scale(-s), true), (offset.scale(s), false)];
        if dim > 1 {
            let w = loop {
                let w = gen.unit(dim);
                if let Some(t) = ortho_split(&offset, &w).ok().and_then(|sp| sp.o.normalized()) {
                    break t;
                }
            };
            cases.push((offset.scale(-s).axpy(0.5, &w), false));
            cases.push((w.clone(), false));
        }
        let zero = Vector::zeros(dim);
        for (y, expected) in cases {
            let set = regular_coderivative(&ball, &xbar, &y, DEFAULT_TAU)?;
            let member = set_membership(&set, &zero, set.default_eps());
            let predicate = zero_in_coderivative(&ball, &xbar, &y, DEFAULT_TAU, 1e-9)?;
            rep.check(member == expected && predicate == expected, || {
                format!("x={xbar:?} y={y:?}: member {member}, predicate {predicate}, expected {expected}")
            });
        }
    }
    Ok(rep)
}

/// Samples of boundary segments against the two defining constraints.
pub fn segment_audit(count: usize, seed: u64, samples: usize, tol: f64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("segment_audit");
    let mut gen = InstanceGen::new(seed);
    for _ in 0..count {
        let dim = gen.dim(1, 5);
        let ball = gen.ball(dim);
        let xbar = gen.point(&ball, RegionKind::Boundary);
        let offset = ball.offset(&xbar);
        let mut y = gen.vector(dim, 2.0);
        if inner(&y, &offset)? > 0.0 {
            y = -&y;
        }
        let yd = inner(&y, &offset)?;
        let set = regular_coderivative(&ball, &xbar, &y, DEFAULT_TAU)?;
        let points = match &set {
            CoderivativeSet::Segment(s) => s.samples(samples),
            CoderivativeSet::Singleton(z) => vec![z.clone()],
            CoderivativeSet::Empty => {
                rep.check(false, || format!("x={xbar:?} y={y:?}: unexpected empty set"));
                continue;
            }
        };
        for z in points {
            let zd = inner(&z, &offset)?;
            let sideways = ortho_split(&offset, &(&y - &z))?.o.norm();
            rep.track_max("max_parallel_residual", sideways);
            rep.track_max("max_upper_violation", zd);
            rep.track_max("max_lower_violation", yd - zd);
            let ok = yd - tol <= zd && zd <= tol && sideways <= tol;
            rep.check(ok, || {
                format!("x={xbar:?} y={y:?} z={z:?}: ⟨y,d⟩={yd:e} ⟨z,d⟩={zd:e} residual {sideways:e}")
            });
        }
    }
    Ok(rep)
}

/// Suite selector for the command-line `verify` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteName {
    Examples,
    Oracle,
    Properties,
    All,
}

impl std::str::FromStr for SuiteName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "examples" => Ok(SuiteName::Examples),
            "oracle" => Ok(SuiteName::Oracle),
            "properties" => Ok(SuiteName::Properties),
            "all" => Ok(SuiteName::All),
            other => Err(format!(
                "unknown suite {other:?} (expected examples, oracle, properties or all)"
            )),
        }
    }
}

/// Runs the named suites. `count` overrides every per-suite instance count.
pub fn run(name: SuiteName, seed: u64, count: Option<usize>) -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    if matches!(name, SuiteName::Examples | SuiteName::All) {
        out.push(examples()?);
    }
    if matches!(name, SuiteName::Oracle | SuiteName::All) {
        let cfg = ConcordanceConfig {
            instances_per_region: count.unwrap_or(500),
            seed,
            ..ConcordanceConfig::default()
        };
        out.push(oracle_concordance(&cfg)?);
    }
    if matches!(name, SuiteName::Properties | SuiteName::All) {
        let n = |default: usize| count.unwrap_or(default);
        out.push(nonexpansive(n(10_000), seed, 1e-12)?);
        out.push(idempotence(n(10_000), seed, 1e-12)?);
        out.push(projection_covariance(n(1_000), seed, 1e-12)?);
        out.push(coderivative_covariance(n(1_000), seed, 1e-12)?);
        out.push(fd_consistency(&FdConfig {
            count: n(500),
            seed,
            ..FdConfig::default()
        })?);
        out.push(special_values(n(100), seed)?);
        out.push(segment_audit(n(1_000), seed, 11, 1e-10)?);
    }
    Ok(out)
}
