//! Finite-dimensional inner-product space primitives.
//!
//! [`Vector`] is a dense real vector whose dimension is a runtime property.
//! Arithmetic operators panic on mismatched dimensions, the same way slice
//! indexing does; the free functions [`inner`] and [`ortho_split`] check
//! dimensions and report mismatches as [`Error::DimensionMismatch`].

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A point or direction in R^n with finite coordinates.
#[derive(Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    /// Builds a vector, rejecting empty input and NaN/Inf coordinates.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Vector(coords))
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    /// The zero vector of dimension `dim`.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be at least 1");
        Vector(vec![0.0; dim])
    }

    /// The `i`-th standard basis vector.
    pub fn unit_axis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn norm(&self) -> f64 {
        norm(self)
    }

    pub fn norm_squared(&self) -> f64 {
        dot(&self.0, &self.0)
    }

    /// `alpha * self`.
    pub fn scale(&self, alpha: f64) -> Vector {
        Vector(self.0.iter().map(|c| alpha * c).collect())
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &Vector) -> Vector {
        assert_same_dim(self, other);
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + alpha * b)
                .collect(),
        )
    }

    /// `self / ‖self‖`, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Vector> {
        let n = self.norm();
        if n > 0.0 {
            Some(Vector(self.0.iter().map(|c| c / n).collect()))
        } else {
            None
        }
    }

    /// Errors unless `other` has the same dimension as `self`.
    pub fn check_dim(&self, other: &Vector) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        }
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &Vector) -> f64 {
        assert_same_dim(self, other);
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

fn assert_same_dim(u: &Vector, v: &Vector) {
    assert_eq!(u.dim(), v.dim(), "vector dimension mismatch");
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Standard inner product `Σ uᵢvᵢ`.
pub fn inner(u: &Vector, v: &Vector) -> Result<f64> {
    u.check_dim(v)?;
    Ok(dot(&u.0, &v.0))
}

pub fn norm(u: &Vector) -> f64 {
    // hypot-style scaling is unnecessary at the magnitudes handled here
    dot(&u.0, &u.0).sqrt()
}

/// Decomposition `u = a·x + o` with `o ⟂ x`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoSplit {
    /// Coefficient along the reference vector, `⟨x,u⟩/‖x‖²`.
    pub a: f64,
    /// Component of `u` orthogonal to the reference vector.
    pub o: Vector,
}

/// Splits `u` into its component along `x` and the orthogonal remainder.
pub fn ortho_split(x: &Vector, u: &Vector) -> Result<OrthoSplit> {
    x.check_dim(u)?;
    let xx = x.norm_squared();
    if xx == 0.0 {
        return Err(Error::ZeroReference);
    }
    let a = dot(&x.0, &u.0) / xx;
    let o = u.axpy(-a, x);
    Ok(OrthoSplit { a, o })
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
        self.axpy(1.0, rhs)
    }
}

impl Sub for &Vector {
    type Output = Vector;

    fn sub(self, rhs: &Vector) -> Vector {
        assert_same_dim(self, rhs);
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;

    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Vector::new(coords)
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<f64>::deserialize(deserializer)?;
        Vector::new(coords).map_err(serde::de::Error::custom)
    }
}
