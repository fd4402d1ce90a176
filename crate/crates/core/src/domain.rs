use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Axis-aligned rectangle `[u_min, u_max] x [v_min, v_max]` in the plane
/// `z = u + iv`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Rect {
    pub fn new(u_min: f64, u_max: f64, v_min: f64, v_max: f64) -> Rect {
        Rect { u_min, u_max, v_min, v_max }
    }

    /// Square `[-r, r]^2`.
    pub fn centered(r: f64) -> Rect {
        Rect::new(-r, r, -r, r)
    }

    pub fn is_valid(&self) -> bool {
        [self.u_min, self.u_max, self.v_min, self.v_max].iter().all(|x| x.is_finite())
            && self.u_min < self.u_max
            && self.v_min < self.v_max
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.u_min && z.re <= self.u_max && z.im >= self.v_min && z.im <= self.v_max
    }

    pub fn width(&self) -> f64 {
        self.u_max - self.u_min
    }

    pub fn height(&self) -> f64 {
        self.v_max - self.v_min
    }

    /// Node `(i, j)` of a grid with `grid.nu x grid.nv` cells.
    pub fn node(&self, grid: Grid, i: usize, j: usize) -> Complex64 {
        Complex64::new(
            self.u_min + self.width() * i as f64 / grid.nu as f64,
            self.v_min + self.height() * j as f64 / grid.nv as f64,
        )
    }
}

/// Number of cells along each axis; a grid has `(nu + 1) * (nv + 1)` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub nu: usize,
    pub nv: usize,
}

impl Grid {
    pub fn new(nu: usize, nv: usize) -> Grid {
        Grid { nu, nv }
    }

    pub fn square(n: usize) -> Grid {
        Grid { nu: n, nv: n }
    }

    pub fn node_count(&self) -> usize {
        (self.nu + 1) * (self.nv + 1)
    }
}
