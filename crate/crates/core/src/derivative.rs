//! Directional, graphical and Fréchet derivatives of the ball projection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{inner, Vector};
use crate::projection::{classify, sign_class, Ball, DirectionClass, RegionKind, DEFAULT_TAU};

/// A linear map arising as the derivative of the projection off the boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinearMapSpec {
    Identity,
    /// `u ↦ scale·(u − (⟨axis,u⟩/‖axis‖²)·axis)`.
    ScaledOrthoProjector { scale: f64, axis: Vector },
}

impl LinearMapSpec {
    pub fn apply(&self, u: &Vector) -> Result<Vector> {
        apply_linear(self, u)
    }
}

pub fn apply_linear(map: &LinearMapSpec, u: &Vector) -> Result<Vector> {
    match map {
        LinearMapSpec::Identity => Ok(u.clone()),
        LinearMapSpec::ScaledOrthoProjector { scale, axis } => {
            axis.check_dim(u)?;
            Ok(scaled_ortho(*scale, axis, u))
        }
    }
}

fn scaled_ortho(scale: f64, axis: &Vector, u: &Vector) -> Vector {
    let a = inner(axis, u).expect("dims checked") / axis.norm_squared();
    u.axpy(-a, axis).scale(scale)
}

/// Gâteaux directional derivative `P'(x)(u)` with the default tolerance.
pub fn gateaux(ball: &Ball, x: &Vector, u: &Vector) -> Result<Vector> {
    gateaux_with_tol(ball, x, u, DEFAULT_TAU)
}

/// Gâteaux directional derivative of the projection at `x` along `u`.
///
/// Interior points give `u`, exterior points the scaled orthogonal
/// projector. At boundary points outward (and tangent) directions lose
/// their radial part, `u − ⟨x−c,u⟩(x−c)/r²`, and inward directions pass
/// through unchanged. `u = θ` yields `θ` in every region.
pub fn gateaux_with_tol(ball: &Ball, x: &Vector, u: &Vector, tau: f64) -> Result<Vector> {
    ball.check_dim(u)?;
    let region = classify(ball, x, tau)?;
    let offset = ball.offset(x);
    Ok(match region.kind {
        RegionKind::Interior => u.clone(),
        RegionKind::Exterior => scaled_ortho(ball.radius() / offset.norm(), &offset, u),
        RegionKind::Boundary => {
            if u.is_zero() {
                return Ok(u.clone());
            }
            match sign_class(&offset, u) {
                DirectionClass::Down => u.clone(),
                DirectionClass::Up => {
                    let r = ball.radius();
                    let radial = inner(&offset, u).expect("dims checked") / (r * r);
                    u.axpy(-radial, &offset)
                }
            }
        }
    })
}

/// Graphical derivative `DP(x)(y)`.
///
/// The projection is 1-Lipschitz and directionally differentiable, so the
/// graphical derivative is the singleton holding the Gâteaux derivative.
pub fn graphical(ball: &Ball, x: &Vector, y: &Vector) -> Result<Vector> {
    gateaux(ball, x, y)
}

pub fn graphical_with_tol(ball: &Ball, x: &Vector, y: &Vector, tau: f64) -> Result<Vector> {
    gateaux_with_tol(ball, x, y, tau)
}

/// The Fréchet derivative at an interior or exterior point.
pub fn frechet_map(ball: &Ball, x: &Vector) -> Result<LinearMapSpec> {
    frechet_map_with_tol(ball, x, DEFAULT_TAU)
}

pub fn frechet_map_with_tol(ball: &Ball, x: &Vector, tau: f64) -> Result<LinearMapSpec> {
    let region = classify(ball, x, tau)?;
    match region.kind {
        RegionKind::Interior => Ok(LinearMapSpec::Identity),
        RegionKind::Exterior => {
            let axis = ball.offset(x);
            Ok(LinearMapSpec::ScaledOrthoProjector {
                scale: ball.radius() / axis.norm(),
                axis,
            })
        }
        RegionKind::Boundary => Err(Error::NotDifferentiable),
    }
}
