//! Seeded random instances for property sweeps and verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hilbert::Vector;
use crate::projection::{Ball, RegionKind};

/// Deterministic generator of balls, points and directions.
pub struct InstanceGen {
    rng: ChaCha8Rng,
}

impl InstanceGen {
    pub fn new(seed: u64) -> Self {
        InstanceGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn dim(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// Coordinates drawn uniformly from `[-scale, scale]`.
    pub fn vector(&mut self, dim: usize, scale: f64) -> Vector {
        let coords = (0..dim).map(|_| self.rng.gen_range(-scale..=scale)).collect();
        Vector::new(coords).expect("finite samples")
    }

    /// Uniform direction on the unit sphere.
    pub fn unit(&mut self, dim: usize) -> Vector {
        loop {
            let g = self.vector(dim, 1.0);
            let n = g.norm();
            if n > 1e-3 && n <= 1.0 {
                return g.scale(1.0 / n);
            }
        }
    }

    /// Center in `[-2,2]^dim`, radius in `[0.5, 3)`.
    pub fn ball(&mut self, dim: usize) -> Ball {
        let center = self.vector(dim, 2.0);
        let radius = self.uniform(0.5, 3.0);
        Ball::new(center, radius).expect("positive radius")
    }

    /// A point of the requested region. Interior points keep at least 10%
    /// of the radius away from the sphere; exterior points sit between
    /// 1.1 and 3 radii from the center.
    pub fn point(&mut self, ball: &Ball, region: RegionKind) -> Vector {
        let dir = self.unit(ball.dim());
        let r = ball.radius();
        let dist = match region {
            RegionKind::Interior => r * self.uniform(0.0, 0.9),
            RegionKind::Boundary => r,
            RegionKind::Exterior => r * self.uniform(1.1, 3.0),
        };
        ball.center().axpy(dist, &dir)
    }
}
