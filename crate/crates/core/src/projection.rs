//! Metric projection onto a closed ball, region classification and the
//! outward/inward split of directions at boundary points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{inner, Vector};

/// Default classification tolerance, relative to `max(1, r)`.
pub const DEFAULT_TAU: f64 = 1e-9;

/// The closed ball `B(c, r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBall")]
pub struct Ball {
    center: Vector,
    radius: f64,
}

#[derive(Deserialize)]
struct RawBall {
    center: Vector,
    radius: f64,
}

impl TryFrom<RawBall> for Ball {
    type Error = Error;

    fn try_from(raw: RawBall) -> Result<Self> {
        Ball::new(raw.center, raw.radius)
    }
}

impl Ball {
    pub fn new(center: Vector, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidRadius(radius));
        }
        Ok(Ball { center, radius })
    }

    /// `B(θ, r)` in dimension `dim`.
    pub fn centered(dim: usize, radius: f64) -> Result<Self> {
        Self::new(Vector::zeros(dim), radius)
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    /// Errors unless `x` lives in the same space as the ball.
    pub fn check_dim(&self, x: &Vector) -> Result<()> {
        self.center.check_dim(x)
    }

    /// `x − c`.
    pub fn offset(&self, x: &Vector) -> Vector {
        x - &self.center
    }

    pub(crate) fn abs_tolerance(&self, tau: f64) -> f64 {
        tau * self.radius.max(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Interior,
    Boundary,
    Exterior,
}

impl RegionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionKind::Interior => "interior",
            RegionKind::Boundary => "boundary",
            RegionKind::Exterior => "exterior",
        }
    }
}

/// Position of a point relative to a ball, with the signed gap `‖x−c‖ − r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    #[serde(rename = "region")]
    pub kind: RegionKind,
    pub signed_gap: f64,
}

/// Classifies `x` as interior, boundary or exterior, treating
/// `|‖x−c‖ − r| ≤ τ·max(1, r)` as the boundary.
pub fn classify(ball: &Ball, x: &Vector, tau: f64) -> Result<Region> {
    ball.check_dim(x)?;
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidTolerance(tau));
    }
    let signed_gap = ball.center.distance(x) - ball.radius;
    let band = ball.abs_tolerance(tau);
    let kind = if signed_gap < -band {
        RegionKind::Interior
    } else if signed_gap > band {
        RegionKind::Exterior
    } else {
        RegionKind::Boundary
    };
    Ok(Region { kind, signed_gap })
}

/// Nearest point of the ball to `x`.
///
/// Points with `‖x−c‖ ≤ r` are returned unchanged, bit for bit.
///
/// # Panics
///
/// Panics if `x` and the ball have different dimensions; see
/// [`try_project`] for the checked version.
pub fn project(ball: &Ball, x: &Vector) -> Vector {
    let d = ball.offset(x);
    let dist = d.norm();
    if dist <= ball.radius {
        return x.clone();
    }
    let coords = ball
        .center
        .as_slice()
        .iter()
        .zip(d.as_slice())
        .map(|(c, di)| c + di * ball.radius / dist)
        .collect();
    Vector::new(coords).expect("projection of a finite point is finite")
}

pub fn try_project(ball: &Ball, x: &Vector) -> Result<Vector> {
    ball.check_dim(x)?;
    Ok(project(ball, x))
}

/// Whether a nonzero direction leaves (`Up`) or enters (`Down`) the ball
/// from a boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionClass {
    Up,
    Down,
}

/// Sign rule for boundary directions: `Up` iff `⟨x−c, v⟩ ≥ 0`.
///
/// Expanding `‖x−c+tv‖² = ‖x−c‖² + 2t⟨x−c,v⟩ + t²‖v‖²` shows that the point
/// stays outside the open ball for all small `t > 0` exactly when the linear
/// coefficient is nonnegative. Tangent directions count as `Up`.
pub fn direction_class(ball: &Ball, x: &Vector, v: &Vector, tau: f64) -> Result<DirectionClass> {
    ball.check_dim(v)?;
    let region = classify(ball, x, tau)?;
    if region.kind != RegionKind::Boundary {
        return Err(Error::NotBoundary {
            signed_gap: region.signed_gap,
        });
    }
    if v.is_zero() {
        return Err(Error::ZeroDirection);
    }
    Ok(sign_class(&ball.offset(x), v))
}

pub(crate) fn sign_class(offset: &Vector, v: &Vector) -> DirectionClass {
    if inner(offset, v).expect("dimensions checked by caller") >= 0.0 {
        DirectionClass::Up
    } else {
        DirectionClass::Down
    }
}
