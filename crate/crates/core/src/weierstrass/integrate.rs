use num_complex::Complex64;
use rayon::prelude::*;

use super::WeierstrassData;
use crate::classification::Tolerances;
use crate::domain::Grid;
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::numerics::quadrature::{self, QuadError};

impl WeierstrassData {
    /// `∫ Φ dz` along the straight segment `a -> b`.
    pub fn primitive_segment(&self, a: Complex64, b: Complex64, tol: f64) -> Result<[Complex64; 3]> {
        let dz = b - a;
        let mut failure = None;
        let out = quadrature::integrate(
            |t| {
                let z = a + dz * t;
                match self.integrand(z) {
                    Ok(phi) => Ok(phi.map(|c| c * dz)),
                    Err(e) => {
                        let message = e.to_string();
                        failure.get_or_insert(e);
                        Err(QuadError::Integrand { t, message })
                    }
                }
            },
            0.0,
            1.0,
            tol,
        );
        match (out, failure) {
            (Ok(out), _) => Ok(out.value),
            (Err(_), Some(e)) => Err(e),
            (Err(e), None) => Err(e.into()),
        }
    }

    /// Surface point `f(z) = Re ∫_{z₀}^{z} Φ dz` along the straight segment.
    pub fn surface_point(&self, z: Complex64, tol: &Tolerances) -> Result<[f64; 3]> {
        if !self.domain.contains(z) {
            return Err(Error::Invalid(format!("target {z} lies outside the domain")));
        }
        Ok(self.primitive_segment(self.base_point, z, tol.eps_int)?.map(|c| c.re))
    }

    /// `integrate_surface` over a batch of targets.
    pub fn integrate_surface(&self, targets: &[Complex64], tol: &Tolerances) -> Result<Vec<[f64; 3]>> {
        targets.par_iter().map(|&z| self.surface_point(z, tol)).collect()
    }

    /// Same integral along a polyline starting at the base point.
    pub fn integrate_path(&self, path: &[Complex64], tol: &Tolerances) -> Result<[f64; 3]> {
        let mut acc = [Complex64::new(0.0, 0.0); 3];
        let mut prev = self.base_point;
        let share = tol.eps_int / path.len().max(1) as f64;
        for &z in path {
            if !self.domain.contains(z) {
                return Err(Error::Invalid(format!("path vertex {z} lies outside the domain")));
            }
            let seg = self.primitive_segment(prev, z, share)?;
            for (a, s) in acc.iter_mut().zip(seg) {
                *a += s;
            }
            prev = z;
        }
        Ok(acc.map(|c| c.re))
    }

    /// Triangle mesh of `f` over the grid nodes of the domain.
    pub fn mesh(&self, grid: Grid, tol: &Tolerances) -> Result<Mesh> {
        let nodes = grid_nodes(self, grid);
        let vertices = self.integrate_surface(&nodes, tol)?;
        Ok(Mesh::grid(vertices, grid))
    }
}

pub(crate) fn grid_nodes(data: &WeierstrassData, grid: Grid) -> Vec<Complex64> {
    let mut nodes = Vec::with_capacity(grid.node_count());
    for j in 0..=grid.nv {
        for i in 0..=grid.nu {
            nodes.push(data.domain.node(grid, i, j));
        }
    }
    nodes
}
