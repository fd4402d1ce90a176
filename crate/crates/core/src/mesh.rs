use std::fmt::Write;

use crate::domain::Grid;

/// Indexed triangle mesh with vertices in row-major grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    /// Zero-based vertex indices.
    pub triangles: Vec<[usize; 3]>,
}

impl Mesh {
    /// Two triangles per cell of a `(nu + 1) x (nv + 1)` vertex lattice.
    pub fn grid(vertices: Vec<[f64; 3]>, grid: Grid) -> Mesh {
        assert_eq!(vertices.len(), grid.node_count());
        let row = grid.nu + 1;
        let mut triangles = Vec::with_capacity(2 * grid.nu * grid.nv);
        for j in 0..grid.nv {
            for i in 0..grid.nu {
                let a = j * row + i;
                let b = a + 1;
                let c = a + row;
                let d = c + 1;
                triangles.push([a, b, d]);
                triangles.push([a, d, c]);
            }
        }
        Mesh { vertices, triangles }
    }

    /// Wavefront OBJ text with 1-based indices and 17 significant digits.
    pub fn to_obj(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let _ = writeln!(out, "v {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2]);
        }
        for t in &self.triangles {
            let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_counts() {
        let mesh = Mesh::grid(vec![[0.0; 3]; 9], Grid::square(2));
        assert_eq!(mesh.vertices.len(), 9);
        assert_eq!(mesh.triangles.len(), 8);
        assert!(mesh.triangles.iter().flatten().all(|&i| i < 9));
    }

    #[test]
    fn obj_is_one_based() {
        let mesh = Mesh::grid(vec![[0.5, -1.0, 2.0]; 4], Grid::square(1));
        let obj = mesh.to_obj();
        let lines: Vec<_> = obj.lines().collect();
        assert_eq!(lines[0], "v 5.0000000000000000e-1 -1.0000000000000000e0 2.0000000000000000e0");
        assert_eq!(lines[4], "f 1 2 4");
        assert_eq!(lines[5], "f 1 4 3");
    }
}
