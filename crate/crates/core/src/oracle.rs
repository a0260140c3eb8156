//! Definition-level numerical checks.
//!
//! These routines never look at the closed-form derivative formulas. They
//! evaluate the projection itself and test candidate answers against the
//! limit definitions:
//!
//! * [`limsup_quotient`] samples the regular-coderivative quotient
//!   `(⟨z,u−x̄⟩ − ⟨y,P(u)−P(x̄)⟩)/‖u−x̄‖` on shrinking spheres around `x̄`;
//!   `z ∈ D̂*P(x̄)(y)` iff its limsup is `≤ 0`.
//! * [`fd_directional`] tracks one-sided difference quotients
//!   `(P(x+tu)−P(x))/t` along a schedule of step sizes.
//! * [`contingent_member`] decides whether `(v, w)` is tangent to the graph
//!   of `P` at `(x̄, P(x̄))`.
//!
//! A positive quotient at a sampled direction is a certificate of
//! non-membership up to discretization; small quotients are only evidence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{inner, ortho_split, Vector};
use crate::projection::{project, Ball};

/// How the neighbourhood `u → x̄` is discretized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplingScheme {
    /// Number of seeded pseudo-random unit directions, on top of the
    /// coordinate axes and probe directions.
    pub num_directions: usize,
    /// Sphere radii, strictly decreasing.
    pub radii: Vec<f64>,
    pub seed: u64,
    /// A maximum quotient at or below this on the finest sphere is reported
    /// as consistent with membership.
    pub member_threshold: f64,
    /// Any quotient above this at the finest radius certifies
    /// non-membership.
    pub witness_threshold: f64,
}

impl Default for SamplingScheme {
    fn default() -> Self {
        SamplingScheme {
            num_directions: 64,
            radii: geometric_schedule(1e-2, 5),
            seed: 0,
            member_threshold: 1e-5,
            witness_threshold: 1e-4,
        }
    }
}

impl SamplingScheme {
    pub fn with_seed(seed: u64) -> Self {
        SamplingScheme {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        validate_schedule(&self.radii)?;
        for t in [self.member_threshold, self.witness_threshold] {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::InvalidTolerance(t));
            }
        }
        Ok(())
    }

    /// Coordinate axes (both signs) followed by `num_directions` seeded
    /// unit vectors. Depends only on `(dim, num_directions, seed)`.
    pub fn base_directions(&self, dim: usize) -> Vec<Vector> {
        let mut dirs = Vec::with_capacity(2 * dim + self.num_directions);
        for i in 0..dim {
            let e = Vector::unit_axis(dim, i);
            dirs.push(-&e);
            dirs.push(e);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        while dirs.len() < 2 * dim + self.num_directions {
            let g: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let g = Vector::new(g).expect("finite samples");
            let n = g.norm();
            // rejection sampling in the unit ball gives uniform directions
            if n > 1e-3 && n <= 1.0 {
                dirs.push(g.scale(1.0 / n));
            }
        }
        dirs
    }
}

/// `first, first/10, …` with `levels` entries.
pub fn geometric_schedule(first: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|k| first / 10f64.powi(k as i32)).collect()
}

fn validate_schedule(ts: &[f64]) -> Result<()> {
    let positive = ts.iter().all(|t| t.is_finite() && *t > 0.0);
    let decreasing = ts.windows(2).all(|w| w[1] < w[0]);
    if ts.is_empty() || !positive || !decreasing {
        return Err(Error::InvalidSchedule);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ConsistentMember,
    CertifiedNonMember,
    /// The finest quotients sit in the dead band between the two thresholds.
    Inconclusive,
}

/// Largest sampled quotient on one sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusMax {
    pub radius: f64,
    pub max_quotient: f64,
    pub direction: Vector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub direction: Vector,
    pub radius: f64,
    pub quotient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimsupReport {
    pub per_radius_max: Vec<RadiusMax>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl LimsupReport {
    /// Maximum quotient on the finest sphere.
    pub fn finest_max(&self) -> f64 {
        self.per_radius_max
            .last()
            .map(|r| r.max_quotient)
            .unwrap_or(f64::NEG_INFINITY)
    }
}

/// Directions probing every constraint of the boundary coderivative: the
/// outward and inward normals, the coordinate axes with their normal
/// component removed, and the tangential part of `z − y`.
fn probe_directions(offset: &Vector, y: &Vector, z: &Vector) -> Vec<Vector> {
    let mut probes = Vec::new();
    let Some(normal) = offset.normalized() else {
        return probes;
    };
    probes.push(-&normal);
    probes.push(normal);
    let mut push_tangent = |w: &Vector| {
        if let Some(t) = ortho_split(offset, w).ok().and_then(|s| s.o.normalized()) {
            probes.push(-&t);
            probes.push(t);
        }
    };
    for i in 0..offset.dim() {
        push_tangent(&Vector::unit_axis(offset.dim(), i));
    }
    push_tangent(&(z - y));
    probes
}

/// Quotient at `u = x̄ + radius·d` for a unit direction `d`.
fn quotient(ball: &Ball, xbar: &Vector, pxbar: &Vector, y: &Vector, z: &Vector, d: &Vector, radius: f64) -> f64 {
    let u = xbar.axpy(radius, d);
    let step = &u - xbar;
    let moved = &project(ball, &u) - pxbar;
    let num = inner(z, &step).expect("dims checked") - inner(y, &moved).expect("dims checked");
    num / step.norm()
}

/// Samples the regular-coderivative quotient for the candidate
/// `z ∈ D̂*P(x̄)(y)`.
pub fn limsup_quotient(
    ball: &Ball,
    xbar: &Vector,
    y: &Vector,
    z: &Vector,
    scheme: &SamplingScheme,
) -> Result<LimsupReport> {
    ball.check_dim(xbar)?;
    ball.check_dim(y)?;
    ball.check_dim(z)?;
    scheme.validate()?;

    let mut dirs = scheme.base_directions(ball.dim());
    dirs.extend(probe_directions(&ball.offset(xbar), y, z));
    let pxbar = project(ball, xbar);

    let per_radius_max: Vec<RadiusMax> = scheme
        .radii
        .iter()
        .map(|&radius| {
            let (q, d) = dirs
                .iter()
                .map(|d| (quotient(ball, xbar, &pxbar, y, z, d, radius), d))
                .fold((f64::NEG_INFINITY, &dirs[0]), |best, cur| {
                    if cur.0 > best.0 {
                        cur
                    } else {
                        best
                    }
                });
            RadiusMax {
                radius,
                max_quotient: q,
                direction: d.clone(),
            }
        })
        .collect();

    // The sampled quotient differs from its limit by O(radius), so only the
    // finest sphere is judged; coarser spheres are reported for diagnostics.
    let finest = per_radius_max.last().expect("schedule is non-empty");

    let (verdict, witness) = if finest.max_quotient > scheme.witness_threshold {
        let w = Witness {
            direction: finest.direction.clone(),
            radius: finest.radius,
            quotient: finest.max_quotient,
        };
        (Verdict::CertifiedNonMember, Some(w))
    } else if finest.max_quotient <= scheme.member_threshold {
        (Verdict::ConsistentMember, None)
    } else {
        (Verdict::Inconclusive, None)
    };

    Ok(LimsupReport {
        per_radius_max,
        verdict,
        witness,
    })
}

/// One-sided difference quotient `(P(x+tu) − P(x))/t`.
pub fn difference_quotient(ball: &Ball, x: &Vector, u: &Vector, t: f64) -> Vector {
    let px = project(ball, x);
    (&project(ball, &x.axpy(t, u)) - &px).scale(1.0 / t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdEstimate {
    /// Difference quotient at the smallest step.
    pub estimate: Vector,
    /// `(t, ‖quotient(t) − estimate‖)` for every step in the schedule.
    pub deviations: Vec<(f64, f64)>,
}

/// Difference quotients of the projection along `u` over `t_schedule`.
pub fn fd_directional(ball: &Ball, x: &Vector, u: &Vector, t_schedule: &[f64]) -> Result<FdEstimate> {
    ball.check_dim(x)?;
    ball.check_dim(u)?;
    validate_schedule(t_schedule)?;
    let quotients: Vec<Vector> = t_schedule
        .iter()
        .map(|&t| difference_quotient(ball, x, u, t))
        .collect();
    let estimate = quotients.last().expect("non-empty").clone();
    let deviations = t_schedule
        .iter()
        .zip(&quotients)
        .map(|(&t, q)| (t, q.distance(&estimate)))
        .collect();
    Ok(FdEstimate {
        estimate,
        deviations,
    })
}

/// Steps used by [`contingent_member`] when the caller has no preference.
pub fn default_contingent_schedule() -> Vec<f64> {
    geometric_schedule(1e-2, 7)
}

/// Tolerance on the final difference-quotient error in [`contingent_member`],
/// per unit of `max(1, ‖v‖)`.
pub const CONTINGENT_TOL: f64 = 1e-6;

/// Whether `(v, w)` lies in the contingent cone to the graph of the
/// projection at `(x̄, P(x̄))`.
///
/// The projection is Lipschitz, so tangency reduces to convergence of the
/// difference quotients along `v` to `w`: the error must end below
/// `CONTINGENT_TOL·max(1, ‖v‖)` and must not grow along the schedule beyond
/// floating-point cancellation noise.
pub fn contingent_member(ball: &Ball, xbar: &Vector, v: &Vector, w: &Vector, t_schedule: &[f64]) -> Result<bool> {
    ball.check_dim(w)?;
    let fd = fd_directional(ball, xbar, v, t_schedule)?;
    let scale = 1.0 + xbar.norm() + v.norm();
    let errors: Vec<(f64, f64)> = t_schedule
        .iter()
        .map(|&t| (t, difference_quotient(ball, xbar, v, t).distance(w)))
        .collect();
    let monotone = errors.windows(2).all(|pair| {
        let (_, prev) = pair[0];
        let (t, cur) = pair[1];
        cur <= prev + roundoff_floor(scale, t)
    });
    let last = fd.estimate.distance(w);
    Ok(monotone && last <= CONTINGENT_TOL * v.norm().max(1.0))
}

/// Cancellation noise in a difference quotient with step `t` for inputs
/// of magnitude `scale`.
pub fn roundoff_floor(scale: f64, t: f64) -> f64 {
    16.0 * f64::EPSILON * scale / t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from_slice(c).unwrap()
    }

    fn unit(dim: usize) -> Ball {
        Ball::centered(dim, 1.0).unwrap()
    }

    #[test]
    fn base_directions_are_deterministic_units() {
        let s = SamplingScheme::default();
        let a = s.base_directions(3);
        let b = s.base_directions(3);
        assert_eq!(a, b);
        assert_eq!(a.len(), 6 + 64);
        assert!(a.iter().all(|d| (d.norm() - 1.0).abs() < 1e-14));
        assert_ne!(a, SamplingScheme::with_seed(7).base_directions(3));
    }

    #[test]
    fn rejects_bad_schedules() {
        let b = unit(1);
        let x = v(&[0.0]);
        assert_eq!(
            fd_directional(&b, &x, &x, &[1e-3, 1e-2]).unwrap_err(),
            Error::InvalidSchedule
        );
        assert_eq!(fd_directional(&b, &x, &x, &[]).unwrap_err(), Error::InvalidSchedule);
        let scheme = SamplingScheme {
            radii: vec![1e-2, -1e-3],
            ..SamplingScheme::default()
        };
        assert!(limsup_quotient(&b, &x, &x, &x, &scheme).is_err());
    }

    #[test]
    fn segment_endpoint_is_consistent() {
        let r = limsup_quotient(
            &unit(2),
            &v(&[1.0, 0.0]),
            &v(&[-1.0, 1.0]),
            &v(&[0.0, 1.0]),
            &SamplingScheme::default(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentMember);
        assert!(r.witness.is_none());
        assert_eq!(r.per_radius_max.len(), 5);
    }

    #[test]
    fn violated_upper_constraint_is_certified_along_the_normal() {
        let r = limsup_quotient(
            &unit(2),
            &v(&[1.0, 0.0]),
            &v(&[-1.0, 1.0]),
            &v(&[0.5, 1.0]),
            &SamplingScheme::default(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::CertifiedNonMember);
        let w = r.witness.unwrap();
        assert!(w.quotient > 0.4);
        // the outward normal (1,0) is the best probe
        assert!(w.direction[0] > 0.99);
    }

    #[test]
    fn interior_identity_quotient_vanishes() {
        let y = v(&[0.3, -1.2, 2.0]);
        let r = limsup_quotient(&unit(3), &v(&[0.1, 0.2, 0.0]), &y, &y, &SamplingScheme::default()).unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentMember);
        assert!(r.per_radius_max.iter().all(|m| m.max_quotient.abs() < 1e-12));
    }

    #[test]
    fn fd_examples() {
        let sched = geometric_schedule(1e-2, 5);
        let est = fd_directional(&unit(2), &v(&[0.1, 0.0]), &v(&[1.0, 2.0]), &sched).unwrap();
        assert!(est.estimate.distance(&v(&[1.0, 2.0])) < 1e-9);

        let est = fd_directional(&unit(2), &v(&[1.0, 0.0]), &v(&[1.0, 1.0]), &sched).unwrap();
        assert!(est.estimate.distance(&v(&[0.0, 1.0])) < 1e-5);

        let est = fd_directional(&unit(2), &v(&[0.0, 2.0]), &v(&[1.0, 1.0]), &sched).unwrap();
        assert!(est.estimate.distance(&v(&[0.5, 0.0])) < 1e-5);
        assert_eq!(est.deviations.len(), 5);
        assert_eq!(est.deviations.last().unwrap().1, 0.0);
    }

    #[test]
    fn contingent_examples() {
        let b = unit(2);
        let x = v(&[1.0, 0.0]);
        let sched = default_contingent_schedule();
        assert!(contingent_member(&b, &x, &v(&[1.0, 1.0]), &v(&[0.0, 1.0]), &sched).unwrap());
        assert!(!contingent_member(&b, &x, &v(&[1.0, 1.0]), &v(&[0.1, 1.0]), &sched).unwrap());
        assert!(contingent_member(&b, &x, &Vector::zeros(2), &Vector::zeros(2), &sched).unwrap());
    }
}
