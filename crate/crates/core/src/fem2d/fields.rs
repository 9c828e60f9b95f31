//! Nodal P1 fields on a mesh: pointwise evaluation with bucketed point
//! location, per-triangle gradients, and VTK export for plotting.

use super::mesh::TriMesh;
use crate::error::{Error, Result};
use crate::geometry::ScalarField;

/// A P1 field given by nodal values, evaluable anywhere on the mesh.
pub struct MeshField<'a> {
    mesh: &'a TriMesh,
    values: &'a [f64],
    grid: Buckets,
}

struct Buckets {
    lo: [f64; 2],
    inv_cell: f64,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<usize>>,
}

impl<'a> MeshField<'a> {
    pub fn new(mesh: &'a TriMesh, values: &'a [f64]) -> Result<Self> {
        if values.len() != mesh.vertices.len() {
            return Err(Error::parameter(format!(
                "field has {} values for {} vertices",
                values.len(),
                mesh.vertices.len()
            )));
        }
        let (lo, hi) = {
            let mut lo = [f64::INFINITY; 2];
            let mut hi = [f64::NEG_INFINITY; 2];
            for v in &mesh.vertices {
                for k in 0..2 {
                    lo[k] = lo[k].min(v[k]);
                    hi[k] = hi[k].max(v[k]);
                }
            }
            (lo, hi)
        };
        let target = (mesh.triangles.len() as f64).sqrt().ceil().max(4.0) as usize;
        let nx = target.min(512);
        let ny = target.min(512);
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
        let inv_cell = nx as f64 / span;
        let mut cells = vec![Vec::new(); nx * ny];
        for (ti, t) in mesh.triangles.iter().enumerate() {
            let (mut tlo, mut thi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
            for &vi in t {
                for k in 0..2 {
                    tlo[k] = tlo[k].min(mesh.vertices[vi][k]);
                    thi[k] = thi[k].max(mesh.vertices[vi][k]);
                }
            }
            let ix0 = (((tlo[0] - lo[0]) * inv_cell) as usize).min(nx - 1);
            let ix1 = (((thi[0] - lo[0]) * inv_cell) as usize).min(nx - 1);
            let iy0 = (((tlo[1] - lo[1]) * inv_cell) as usize).min(ny - 1);
            let iy1 = (((thi[1] - lo[1]) * inv_cell) as usize).min(ny - 1);
            for ix in ix0..=ix1 {
                for iy in iy0..=iy1 {
                    cells[ix * ny + iy].push(ti);
                }
            }
        }
        Ok(MeshField {
            mesh,
            values,
            grid: Buckets {
                lo,
                inv_cell,
                nx,
                ny,
                cells,
            },
        })
    }

    fn barycentric(&self, ti: usize, x: f64, y: f64) -> [f64; 3] {
        let t = self.mesh.triangles[ti];
        let (p0, p1, p2) = (
            self.mesh.vertices[t[0]],
            self.mesh.vertices[t[1]],
            self.mesh.vertices[t[2]],
        );
        let det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
        let l1 = ((x - p0[0]) * (p2[1] - p0[1]) - (y - p0[1]) * (p2[0] - p0[0])) / det;
        let l2 = ((p1[0] - p0[0]) * (y - p0[1]) - (p1[1] - p0[1]) * (x - p0[0])) / det;
        [1.0 - l1 - l2, l1, l2]
    }

    /// Containing (or nearest by barycentric slack) triangle index.
    pub fn locate(&self, x: f64, y: f64) -> Option<usize> {
        let g = &self.grid;
        let ix = (((x - g.lo[0]) * g.inv_cell) as isize).clamp(0, g.nx as isize - 1) as usize;
        let iy = (((y - g.lo[1]) * g.inv_cell) as isize).clamp(0, g.ny as isize - 1) as usize;
        let mut best: Option<(f64, usize)> = None;
        // Search the cell and its ring of neighbors.
        for dx in -1i32..=1 {
            for dy in -1i32..=1 {
                let cx = ix as i32 + dx;
                let cy = iy as i32 + dy;
                if cx < 0 || cy < 0 || cx as usize >= g.nx || cy as usize >= g.ny {
                    continue;
                }
                for &ti in &g.cells[cx as usize * g.ny + cy as usize] {
                    let bc = self.barycentric(ti, x, y);
                    let slack = bc[0].min(bc[1]).min(bc[2]);
                    if slack >= -1e-12 {
                        return Some(ti);
                    }
                    if best.map(|(s, _)| slack > s).unwrap_or(true) {
                        best = Some((slack, ti));
                    }
                }
            }
        }
        best.filter(|(s, _)| *s > -1e-6).map(|(_, ti)| ti)
    }

    /// Per-triangle (constant) gradient of the field.
    pub fn gradient(&self, ti: usize) -> [f64; 2] {
        let t = self.mesh.triangles[ti];
        let (g, _) = super::assemble::p1_gradients(
            self.mesh.vertices[t[0]],
            self.mesh.vertices[t[1]],
            self.mesh.vertices[t[2]],
        );
        let mut out = [0.0; 2];
        for i in 0..3 {
            out[0] += self.values[t[i]] * g[i][0];
            out[1] += self.values[t[i]] * g[i][1];
        }
        out
    }
}

impl ScalarField for MeshField<'_> {
    fn eval(&self, x: f64, y: f64) -> f64 {
        match self.locate(x, y) {
            Some(ti) => {
                let bc = self.barycentric(ti, x, y);
                let t = self.mesh.triangles[ti];
                bc[0] * self.values[t[0]] + bc[1] * self.values[t[1]] + bc[2] * self.values[t[2]]
            }
            None => 0.0,
        }
    }
}

/// Legacy-format ASCII VTK export of the mesh with one or more point fields.
pub fn export_vtk(mesh: &TriMesh, fields: &[(&str, &[f64])]) -> String {
    let mut out = String::new();
    out.push_str("# vtk DataFile Version 3.0\neigenfunction export\nASCII\n");
    out.push_str("DATASET UNSTRUCTURED_GRID\n");
    out.push_str(&format!("POINTS {} double\n", mesh.vertices.len()));
    for v in &mesh.vertices {
        out.push_str(&format!("{:.15e} {:.15e} 0.0\n", v[0], v[1]));
    }
    out.push_str(&format!(
        "CELLS {} {}\n",
        mesh.triangles.len(),
        4 * mesh.triangles.len()
    ));
    for t in &mesh.triangles {
        out.push_str(&format!("3 {} {} {}\n", t[0], t[1], t[2]));
    }
    out.push_str(&format!("CELL_TYPES {}\n", mesh.triangles.len()));
    for _ in &mesh.triangles {
        out.push_str("5\n");
    }
    out.push_str(&format!("POINT_DATA {}\n", mesh.vertices.len()));
    for (name, vals) in fields {
        out.push_str(&format!("SCALARS {name} double 1\nLOOKUP_TABLE default\n"));
        for v in *vals {
            out.push_str(&format!("{v:.15e}\n"));
        }
    }
    out
}
