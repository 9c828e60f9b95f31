//! P1 finite-element assembly of the weighted stiffness/mass pair over a
//! triangle mesh. The weight is sampled at the points of a degree-6 rule, so
//! polynomial factors up to degree 4 integrate exactly alongside it.

use super::mesh::TriMesh;
use crate::error::{Error, Result};
use crate::linalg::{Csr, TripletBuilder};
use crate::quad::triangle_rule_d6;
use crate::weights::WeightSpec;

#[derive(Debug, Clone)]
pub struct DiscretePair {
    pub k: Csr,
    pub m: Csr,
}

impl DiscretePair {
    pub fn n(&self) -> usize {
        self.k.n
    }

    /// Symmetry, kernel and positivity sanity checks.
    pub fn validate(&self) -> Result<()> {
        if self.k.symmetry_defect() > 1e-14 || self.m.symmetry_defect() > 1e-14 {
            return Err(Error::Mesh("assembled matrices lost symmetry".into()));
        }
        let n = self.n();
        let ones = vec![1.0; n];
        let k1 = self.k.matvec_alloc(&ones);
        let knorm = self
            .k
            .values
            .iter()
            .fold(0.0f64, |a, v| a.max(v.abs()));
        let defect = k1.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if defect > 1e-12 * knorm * (n as f64).sqrt() {
            return Err(Error::Mesh(format!(
                "constants not in the stiffness kernel (defect {defect:.3e})"
            )));
        }
        Ok(())
    }

    /// Total weighted mass 1^T M 1 = m_gamma(domain) up to quadrature error.
    pub fn total_mass(&self) -> f64 {
        let ones = vec![1.0; self.n()];
        self.m.bilinear(&ones, &ones)
    }
}

/// Gradient of the P1 hat functions on a triangle and its area.
#[inline]
pub(crate) fn p1_gradients(p0: [f64; 2], p1: [f64; 2], p2: [f64; 2]) -> ([[f64; 2]; 3], f64) {
    let det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    let area = 0.5 * det;
    let g = [
        [(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det],
        [(p2[1] - p0[1]) / det, (p0[0] - p2[0]) / det],
        [(p0[1] - p1[1]) / det, (p1[0] - p0[0]) / det],
    ];
    (g, area)
}

/// Isotropic Gaussian-weighted pair: K = int gamma grad.grad, M = int gamma uv.
pub fn assemble(w: &WeightSpec, mesh: &TriMesh) -> DiscretePair {
    assemble_with(mesh, &mut |x, y| {
        let g = w.gamma(x, y);
        ([[g, 0.0], [0.0, g]], g)
    })
}

/// General assembly with a pointwise 2x2 diffusion tensor and mass density:
/// K = int (grad u)^T G grad v, M = int rho u v.
pub fn assemble_with(
    mesh: &TriMesh,
    coeff: &mut dyn FnMut(f64, f64) -> ([[f64; 2]; 2], f64),
) -> DiscretePair {
    let rule = triangle_rule_d6();
    let n = mesh.vertices.len();
    let mut kb = TripletBuilder::new(n);
    let mut mb = TripletBuilder::new(n);
    for t in &mesh.triangles {
        let (p0, p1, p2) = (
            mesh.vertices[t[0]],
            mesh.vertices[t[1]],
            mesh.vertices[t[2]],
        );
        let (grad, area) = p1_gradients(p0, p1, p2);
        let mut klocal = [[0.0f64; 3]; 3];
        let mut mlocal = [[0.0f64; 3]; 3];
        for (bc, wq) in rule.points.iter().zip(rule.weights.iter()) {
            let x = bc[0] * p0[0] + bc[1] * p1[0] + bc[2] * p2[0];
            let y = bc[0] * p0[1] + bc[1] * p1[1] + bc[2] * p2[1];
            let (g, rho) = coeff(x, y);
            let wa = wq * area;
            for i in 0..3 {
                let gi = [
                    g[0][0] * grad[i][0] + g[0][1] * grad[i][1],
                    g[1][0] * grad[i][0] + g[1][1] * grad[i][1],
                ];
                for j in i..3 {
                    klocal[i][j] += wa * (gi[0] * grad[j][0] + gi[1] * grad[j][1]);
                    mlocal[i][j] += wa * rho * bc[i] * bc[j];
                }
            }
        }
        for i in 0..3 {
            for j in i..3 {
                kb.add(t[i], t[j], klocal[i][j]);
                mb.add(t[i], t[j], mlocal[i][j]);
                if i != j {
                    kb.add(t[j], t[i], klocal[i][j]);
                    mb.add(t[j], t[i], mlocal[i][j]);
                }
            }
        }
    }
    DiscretePair {
        k: kb.build(),
        m: mb.build(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem2d::mesh::mesh_rectangle;
    use crate::geometry::measure::measure_polygon;
    use crate::geometry::ConvexPolygon;

    #[test]
    fn constants_in_kernel_and_mass_total() {
        let w = WeightSpec::default();
        let mesh = mesh_rectangle(0.0, 1.0, 0.0, 1.0, 0.05).unwrap();
        let pair = assemble(&w, &mesh);
        pair.validate().unwrap();
        let square = ConvexPolygon::rectangle(0.0, 1.0, 0.0, 1.0).unwrap();
        let exact = measure_polygon(&w, &square, 1e-13);
        assert!(
            (pair.total_mass() - exact).abs() < 1e-9,
            "mass {} vs measure {exact}",
            pair.total_mass()
        );
    }

    #[test]
    fn linear_field_energy_matches_measure() {
        // For u = x, grad u = (1, 0), so u^T K u = int gamma = m_gamma.
        let w = WeightSpec::new(0.3, -0.2);
        let mesh = mesh_rectangle(-1.0, 1.0, 0.0, 2.0, 0.05).unwrap();
        let pair = assemble(&w, &mesh);
        let u: Vec<f64> = mesh.vertices.iter().map(|v| v[0]).collect();
        let energy = pair.k.bilinear(&u, &u);
        let rect = ConvexPolygon::rectangle(-1.0, 1.0, 0.0, 2.0).unwrap();
        let exact = measure_polygon(&w, &rect, 1e-13);
        assert!(
            (energy - exact).abs() < 1e-9,
            "energy {energy} vs measure {exact}"
        );
    }
}
