//! Planar grid sweeps exported as CSV.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::coderivative::{regular_coderivative, CoderivativeSet};
use crate::derivative::gateaux_with_tol;
use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::projection::{classify, Ball};

/// Axis-aligned grid `x_range × y_range` with a common step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
    pub step: f64,
}

impl GridSpec {
    fn axis_values(range: [f64; 2], step: f64) -> Result<Vec<f64>> {
        let [lo, hi] = range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::InvalidGrid(format!("bad range [{lo}, {hi}]")));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidGrid(format!("bad step {step}")));
        }
        let span = (hi - lo) / step;
        // tolerate ranges that are a whole number of steps up to roundoff
        let n = (span + 1e-9).floor() as usize;
        if n > 1_000_000 {
            return Err(Error::InvalidGrid(format!("{} points per axis", n + 1)));
        }
        Ok((0..=n).map(|i| lo + i as f64 * step).collect())
    }

    /// Grid points in row-major order: `x1` is the slow index.
    pub fn points(&self) -> Result<Vec<(f64, f64)>> {
        let xs = Self::axis_values(self.x_range, self.step)?;
        let ys = Self::axis_values(self.y_range, self.step)?;
        Ok(xs
            .iter()
            .flat_map(|&a| ys.iter().map(move |&b| (a, b)))
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Region,
    CoderivativeEmptiness,
    SegmentEndpoints,
    GateauxField,
}

impl Quantity {
    fn extra_columns(&self) -> &'static str {
        match self {
            Quantity::Region => "signed_gap",
            Quantity::CoderivativeEmptiness => "tag,empty",
            Quantity::SegmentEndpoints => "tag,a1,a2,b1,b2",
            Quantity::GateauxField => "g1,g2",
        }
    }

    /// Whether the quantity needs a fixed `y` (coderivative) or `u`
    /// (Gâteaux) vector.
    pub fn needs_vector(&self) -> bool {
        !matches!(self, Quantity::Region)
    }
}

/// Evaluates `quantity` over the grid and renders CSV with a header row.
///
/// `vector` is the fixed `y` for coderivative quantities and the fixed `u`
/// for the Gâteaux field.
pub fn sweep2d(ball: &Ball, grid: &GridSpec, quantity: Quantity, vector: Option<&Vector>, tau: f64) -> Result<String> {
    if ball.dim() != 2 {
        return Err(Error::NotTwoDimensional(ball.dim()));
    }
    let fixed = match (quantity.needs_vector(), vector) {
        (false, _) => None,
        (true, Some(v)) => {
            ball.check_dim(v)?;
            Some(v)
        }
        (true, None) => {
            return Err(Error::InvalidGrid(format!(
                "quantity {quantity:?} needs a fixed vector"
            )))
        }
    };

    let mut out = String::new();
    writeln!(out, "x1,x2,region,{}", quantity.extra_columns()).expect("string write");
    for (a, b) in grid.points()? {
        let x = Vector::new(vec![a, b])?;
        let region = classify(ball, &x, tau)?;
        write!(out, "{a},{b},{}", region.kind.as_str()).expect("string write");
        match quantity {
            Quantity::Region => write!(out, ",{}", region.signed_gap),
            Quantity::CoderivativeEmptiness => {
                let set = regular_coderivative(ball, &x, fixed.expect("checked"), tau)?;
                write!(out, ",{},{}", set.tag(), set.is_empty())
            }
            Quantity::SegmentEndpoints => {
                let set = regular_coderivative(ball, &x, fixed.expect("checked"), tau)?;
                match &set {
                    CoderivativeSet::Empty => write!(out, ",empty,,,,"),
                    CoderivativeSet::Singleton(z) => {
                        write!(out, ",singleton,{},{},,", z[0], z[1])
                    }
                    CoderivativeSet::Segment(s) => {
                        let (p, q) = s.endpoints();
                        write!(out, ",segment,{},{},{},{}", p[0], p[1], q[0], q[1])
                    }
                }
            }
            Quantity::GateauxField => {
                let g = gateaux_with_tol(ball, &x, fixed.expect("checked"), tau)?;
                write!(out, ",{},{}", g[0], g[1])
            }
        }
        .expect("string write");
        out.push('\n');
    }
    Ok(out)
}
