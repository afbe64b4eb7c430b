use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform cell-centred radial grid on `[0, r_max]`.
///
/// Node `i` sits at `r_i = (i + ½) h`. The origin carries a symmetry
/// (Neumann) condition, the outer edge a Dirichlet condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub r_max: f64,
    pub n_points: usize,
}

pub const MIN_POINTS: usize = 64;

impl RadialGrid {
    pub fn new(r_max: f64, n_points: usize) -> Result<Self> {
        let grid = Self { r_max, n_points };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_max > 0.0) || !self.r_max.is_finite() {
            return Err(Error::config("r_max", "must be > 0"));
        }
        if self.n_points < MIN_POINTS {
            return Err(Error::config("n_points", format!("must be >= {MIN_POINTS}")));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        self.r_max / self.n_points as f64
    }

    pub fn radius(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.spacing()
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.radius(i)).collect()
    }

    /// Annulus area `2π r_i h` of each cell.
    pub fn cell_areas(&self) -> Vec<f64> {
        let h = self.spacing();
        self.radii().iter().map(|r| 2.0 * std::f64::consts::PI * r * h).collect()
    }

    /// Integral of a radial field over the disk.
    pub fn integrate(&self, field: &[f64]) -> f64 {
        self.cell_areas().iter().zip(field).map(|(a, f)| a * f).sum()
    }

    /// Tridiagonal `-∇²` in conservative form as `(lower, diag, upper)`,
    /// laid out for [`solve_tridiagonal`](crate::linalg::solve_tridiagonal).
    pub fn negative_laplacian(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let n = self.n_points;
        let h = self.spacing();
        let h2 = h * h;
        let mut lower = Vec::with_capacity(n - 1);
        let mut diag = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n - 1);
        for i in 0..n {
            let r = self.radius(i);
            let r_in = i as f64 * h;
            let r_out = (i as f64 + 1.0) * h;
            if i > 0 {
                lower.push(-r_in / (r * h2));
            }
            if i + 1 < n {
                upper.push(-r_out / (r * h2));
                diag.push((r_in + r_out) / (r * h2));
            } else {
                // Ghost node u_n = -u_{n-1} puts the zero on the outer edge.
                diag.push((r_in + 2.0 * r_out) / (r * h2));
            }
        }
        (lower, diag, upper)
    }

    /// Symmetrised `-∇²` acting on `√r u`: `(diag, off)`.
    pub fn negative_laplacian_symmetric(&self) -> (Vec<f64>, Vec<f64>) {
        let (_, diag, upper) = self.negative_laplacian();
        let off = (0..self.n_points - 1)
            .map(|i| upper[i] * (self.radius(i) / self.radius(i + 1)).sqrt())
            .collect();
        (diag, off)
    }

    /// `1/√e` radius of a monotone radial density profile.
    ///
    /// The peak is extrapolated to the origin from the two innermost nodes.
    /// Returns `None` for an empty profile or one that never drops below
    /// the threshold.
    pub fn e_half_radius(&self, density: &[f64]) -> Option<f64> {
        let peak = (9.0 * density[0] - density[1]) / 8.0;
        if !(peak > 0.0) {
            return None;
        }
        let level = peak * (-0.5f64).exp();
        if density[0] <= level {
            // Threshold crossed between the origin and the first node.
            let t = (peak - level) / (peak - density[0]);
            return Some(t * self.radius(0));
        }
        density.windows(2).enumerate().find_map(|(i, w)| {
            (w[1] <= level).then(|| {
                let t = (w[0] - level) / (w[0] - w[1]);
                self.radius(i) + t * self.spacing()
            })
        })
    }
}
