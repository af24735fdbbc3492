//! Point sampling from polytopes.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GeometryError, HPolytope};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Uniform over the set by rejection from its bounding box.
    InteriorUniformRejection,
    /// Random direction scaled to ρ·(boundary point), ρ ∈ [0.95, 0.999].
    /// Needs the origin in the interior.
    BoundaryNear,
    /// The vertex columns, cycled to the requested count.
    Vertices,
}

impl HPolytope {
    pub fn sample(
        &self,
        mode: SampleMode,
        count: usize,
        seed: u64,
    ) -> Result<Vec<DVector<f64>>, GeometryError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = self.dim();
        match mode {
            SampleMode::InteriorUniformRejection => {
                let mut lo = DVector::zeros(d);
                let mut hi = DVector::zeros(d);
                for i in 0..d {
                    let mut dir = DVector::zeros(d);
                    dir[i] = 1.0;
                    hi[i] = self.support(&dir)?.0;
                    dir[i] = -1.0;
                    lo[i] = -self.support(&dir)?.0;
                }
                let mut out = Vec::with_capacity(count);
                let mut attempts = 0usize;
                while out.len() < count {
                    attempts += 1;
                    if attempts > count.saturating_mul(100_000).max(1_000_000) {
                        // Vanishing volume fraction; give up rather than spin.
                        return Err(GeometryError::DegenerateSet);
                    }
                    let x = DVector::from_fn(d, |i, _| rng.gen_range(lo[i]..=hi[i]));
                    if self.contains(&x, 0.0) {
                        out.push(x);
                    }
                }
                Ok(out)
            }
            SampleMode::BoundaryNear => {
                if self.offsets().iter().any(|o| *o <= 0.0) {
                    return Err(GeometryError::OriginNotInterior);
                }
                let mut out = Vec::with_capacity(count);
                while out.len() < count {
                    let dir = random_direction(&mut rng, d);
                    // First facet hit along the ray from the origin.
                    let vals = self.rows() * &dir;
                    let mut t = f64::INFINITY;
                    for i in 0..self.num_rows() {
                        if vals[i] > 1e-12 {
                            t = t.min(self.offsets()[i] / vals[i]);
                        }
                    }
                    if !t.is_finite() {
                        continue;
                    }
                    let rho = rng.gen_range(0.95..0.999);
                    out.push(dir * (t * rho));
                }
                Ok(out)
            }
            SampleMode::Vertices => {
                let verts = self.vertices(super::DEFAULT_TOL)?;
                let v = verts.num_vertices();
                Ok((0..count).map(|k| verts.vertex(k % v)).collect())
            }
        }
    }
}

fn random_direction(rng: &mut ChaCha8Rng, d: usize) -> DVector<f64> {
    loop {
        // Box–Muller pairs give an isotropic Gaussian to normalize.
        let x = DVector::from_fn(d, |_, _| {
            let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
            let u2: f64 = rng.gen();
            (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
        });
        let n = x.norm();
        if n > 1e-9 {
            return x / n;
        }
    }
}
