//! Regular coderivative of the ball projection as a structured set.
//!
//! Off the boundary the projection is Fréchet differentiable with a
//! self-adjoint derivative, so the coderivative is the singleton holding
//! the derivative applied to `y`. At a boundary point `x̄` with offset
//! `d = x̄ − c` the coderivative is
//!
//! ```text
//! { z : ⟨y,d⟩ ≤ ⟨z,d⟩ ≤ 0,  y − z ∥ d }
//! ```
//!
//! The parallelism constraint forces `z = y − λ·d`, and the inequality
//! chain then pins `λ ∈ [⟨y,d⟩/‖d‖², 0]`. The set is empty when
//! `⟨y,d⟩ > 0` and a segment from `y` to its component orthogonal to `d`
//! otherwise.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::derivative::{apply_linear, frechet_map_with_tol};
use crate::error::{Error, Result};
use crate::hilbert::{inner, ortho_split, Vector};
use crate::projection::{classify, Ball, RegionKind};

/// Default membership and set-equality tolerance before magnitude scaling.
pub const DEFAULT_SET_EPS: f64 = 1e-9;

/// The segment `{ anchor − λ·axis : λ ∈ [lo, hi] }`.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    anchor: Vector,
    axis: Vector,
    lo: f64,
    hi: f64,
}

impl Segment {
    pub fn anchor(&self) -> &Vector {
        &self.anchor
    }

    pub fn axis(&self) -> &Vector {
        &self.axis
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// The point `anchor − λ·axis`.
    pub fn point(&self, lambda: f64) -> Vector {
        self.anchor.axpy(-lambda, &self.axis)
    }

    /// Endpoints at `λ = hi` and `λ = lo`, in that order.
    pub fn endpoints(&self) -> (Vector, Vector) {
        (self.point(self.hi), self.point(self.lo))
    }

    pub fn midpoint(&self) -> Vector {
        self.point(0.5 * (self.lo + self.hi))
    }

    /// `count` equi-spaced points from `λ = lo` to `λ = hi`.
    pub fn samples(&self, count: usize) -> Vec<Vector> {
        match count {
            0 => Vec::new(),
            1 => vec![self.midpoint()],
            _ => (0..count)
                .map(|k| {
                    let s = k as f64 / (count - 1) as f64;
                    self.point(self.lo + s * (self.hi - self.lo))
                })
                .collect(),
        }
    }

    /// Euclidean distance from `z` to the segment.
    pub fn distance(&self, z: &Vector) -> f64 {
        let axis_sq = self.axis.norm_squared();
        let diff = &self.anchor - z;
        let lambda = (inner(&diff, &self.axis).expect("dims checked") / axis_sq)
            .clamp(self.lo, self.hi);
        z.distance(&self.point(lambda))
    }
}

/// Value of the regular coderivative at a single `y`.
#[derive(Debug, Clone, PartialEq)]
pub enum CoderivativeSet {
    Empty,
    Singleton(Vector),
    Segment(Segment),
}

impl CoderivativeSet {
    /// Builds `{ anchor − λ·axis : λ ∈ [lo, hi] }`, collapsing `lo = hi`
    /// to a singleton.
    pub fn segment(anchor: Vector, axis: Vector, lo: f64, hi: f64) -> Result<Self> {
        anchor.check_dim(&axis)?;
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidSegment { lo, hi });
        }
        if axis.is_zero() {
            return Err(Error::ZeroDirection);
        }
        if lo == hi {
            return Ok(CoderivativeSet::Singleton(anchor.axpy(-lo, &axis)));
        }
        Ok(CoderivativeSet::Segment(Segment { anchor, axis, lo, hi }))
    }

    /// The segment joining two points (a singleton if they coincide).
    pub fn from_endpoints(a: Vector, b: Vector) -> Result<Self> {
        a.check_dim(&b)?;
        if a == b {
            return Ok(CoderivativeSet::Singleton(a));
        }
        let axis = &a - &b;
        Self::segment(a, axis, 0.0, 1.0)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, CoderivativeSet::Empty)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            CoderivativeSet::Empty => "empty",
            CoderivativeSet::Singleton(_) => "singleton",
            CoderivativeSet::Segment(_) => "segment",
        }
    }

    /// Representative elements: the value of a singleton, or both
    /// endpoints and the midpoint of a segment.
    pub fn representatives(&self) -> Vec<Vector> {
        match self {
            CoderivativeSet::Empty => Vec::new(),
            CoderivativeSet::Singleton(z) => vec![z.clone()],
            CoderivativeSet::Segment(s) => {
                let (a, b) = s.endpoints();
                vec![a, b, s.midpoint()]
            }
        }
    }

    /// `DEFAULT_SET_EPS` scaled by the magnitude of the set's data.
    pub fn default_eps(&self) -> f64 {
        let scale = match self {
            CoderivativeSet::Empty => 1.0,
            CoderivativeSet::Singleton(z) => z.norm().max(1.0),
            CoderivativeSet::Segment(s) => s.anchor.norm().max(s.axis.norm()).max(1.0),
        };
        DEFAULT_SET_EPS * scale
    }
}

/// Regular coderivative `D̂*P(x̄)(y)` of the projection onto `ball`.
pub fn regular_coderivative(ball: &Ball, xbar: &Vector, y: &Vector, tau: f64) -> Result<CoderivativeSet> {
    ball.check_dim(y)?;
    let region = classify(ball, xbar, tau)?;
    match region.kind {
        RegionKind::Interior | RegionKind::Exterior => {
            let map = frechet_map_with_tol(ball, xbar, tau)?;
            Ok(CoderivativeSet::Singleton(apply_linear(&map, y)?))
        }
        RegionKind::Boundary => {
            let offset = ball.offset(xbar);
            let yd = inner(y, &offset)?;
            if yd > 0.0 {
                return Ok(CoderivativeSet::Empty);
            }
            let lo = yd / offset.norm_squared();
            CoderivativeSet::segment(y.clone(), offset, lo, 0.0)
        }
    }
}

/// Results of the special-value checks at a boundary point.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialValues {
    /// `D̂*P(x̄)(θ)`, expected to be `{θ}`.
    pub at_zero: CoderivativeSet,
    /// `D̂*P(x̄)(x̄ − c)`, expected to be empty.
    pub at_offset: CoderivativeSet,
}

impl SpecialValues {
    pub fn zero_maps_to_zero(&self) -> bool {
        matches!(&self.at_zero, CoderivativeSet::Singleton(z) if z.is_zero())
    }

    pub fn offset_maps_to_empty(&self) -> bool {
        self.at_offset.is_empty()
    }
}

/// Evaluates the coderivative at `y = θ` and `y = x̄ − c` for a boundary `x̄`.
pub fn coderivative_special(ball: &Ball, xbar: &Vector, tau: f64) -> Result<SpecialValues> {
    let region = classify(ball, xbar, tau)?;
    if region.kind != RegionKind::Boundary {
        return Err(Error::NotBoundary {
            signed_gap: region.signed_gap,
        });
    }
    let zero = Vector::zeros(ball.dim());
    Ok(SpecialValues {
        at_zero: regular_coderivative(ball, xbar, &zero, tau)?,
        at_offset: regular_coderivative(ball, xbar, &ball.offset(xbar), tau)?,
    })
}

/// Closed-form test for `θ ∈ D̂*P(x̄)(y)` at a boundary point: `y` must be a
/// nonpositive multiple of `x̄ − c`. Parallelism is checked to
/// `eps·max(1, ‖y‖)`.
pub fn zero_in_coderivative(ball: &Ball, xbar: &Vector, y: &Vector, tau: f64, eps: f64) -> Result<bool> {
    let region = classify(ball, xbar, tau)?;
    if region.kind != RegionKind::Boundary {
        return Err(Error::NotBoundary {
            signed_gap: region.signed_gap,
        });
    }
    let split = ortho_split(&ball.offset(xbar), y)?;
    Ok(split.a <= 0.0 && split.o.norm() <= eps * y.norm().max(1.0))
}

/// Whether `z` lies within `eps` of the set.
pub fn set_membership(set: &CoderivativeSet, z: &Vector, eps: f64) -> bool {
    match set {
        CoderivativeSet::Empty => false,
        CoderivativeSet::Singleton(value) => value.dim() == z.dim() && value.distance(z) <= eps,
        CoderivativeSet::Segment(s) => s.anchor.dim() == z.dim() && s.distance(z) <= eps,
    }
}

/// Geometric equality: same tag, and values or unordered endpoint pairs
/// within `eps`.
pub fn set_equal(s1: &CoderivativeSet, s2: &CoderivativeSet, eps: f64) -> bool {
    let close = |a: &Vector, b: &Vector| a.dim() == b.dim() && a.distance(b) <= eps;
    match (s1, s2) {
        (CoderivativeSet::Empty, CoderivativeSet::Empty) => true,
        (CoderivativeSet::Singleton(a), CoderivativeSet::Singleton(b)) => close(a, b),
        (CoderivativeSet::Segment(a), CoderivativeSet::Segment(b)) => {
            let (a0, a1) = a.endpoints();
            let (b0, b1) = b.endpoints();
            (close(&a0, &b0) && close(&a1, &b1)) || (close(&a0, &b1) && close(&a1, &b0))
        }
        _ => false,
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "lowercase")]
enum SetRepr {
    Empty,
    Singleton { value: Vector },
    Segment { endpoints: [Vector; 2] },
}

impl Serialize for CoderivativeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            CoderivativeSet::Empty => SetRepr::Empty,
            CoderivativeSet::Singleton(z) => SetRepr::Singleton { value: z.clone() },
            CoderivativeSet::Segment(s) => {
                let (a, b) = s.endpoints();
                SetRepr::Segment { endpoints: [a, b] }
            }
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CoderivativeSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match SetRepr::deserialize(deserializer)? {
            SetRepr::Empty => Ok(CoderivativeSet::Empty),
            SetRepr::Singleton { value } => Ok(CoderivativeSet::Singleton(value)),
            SetRepr::Segment { endpoints: [a, b] } => {
                CoderivativeSet::from_endpoints(a, b).map_err(D::Error::custom)
            }
        }
    }
}
