use std::sync::Arc;

use super::mesh::{signed_area, BoundaryEdge, EdgeTag, TriMesh};
use super::sparse::{cg_jacobi, CgStats, CsrMatrix};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::par;

/// Relative residual target of the state solve.
pub const SOLVER_TOL: f64 = 1e-10;

/// Piecewise-linear function on a [`TriMesh`], one value per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    mesh: Arc<TriMesh>,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(mesh: Arc<TriMesh>, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.vertices().len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} nodal values, got {}",
                mesh.vertices().len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite nodal value".into()));
        }
        Ok(ScalarField { mesh, values })
    }

    pub fn zeros(mesh: Arc<TriMesh>) -> Self {
        let values = vec![0.0; mesh.vertices().len()];
        ScalarField { mesh, values }
    }

    pub fn mesh(&self) -> &TriMesh {
        &self.mesh
    }

    pub fn mesh_arc(&self) -> &Arc<TriMesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `t · u`.
    pub fn scaled(&self, t: f64) -> Self {
        ScalarField {
            mesh: Arc::clone(&self.mesh),
            values: self.values.iter().map(|v| t * v).collect(),
        }
    }

    /// Constant gradient of the field on triangle `t`.
    pub fn element_gradient(&self, t: usize) -> [f64; 2] {
        let tri = self.mesh.triangles()[t];
        let [p0, p1, p2] = tri.map(|k| self.mesh.vertices()[k]);
        let [u0, u1, u2] = tri.map(|k| self.values[k]);
        let two_a = 2.0 * signed_area(p0, p1, p2);
        let (du1, du2) = (u1 - u0, u2 - u0);
        [
            (du1 * (p2[1] - p0[1]) - du2 * (p1[1] - p0[1])) / two_a,
            (du2 * (p1[0] - p0[0]) - du1 * (p2[0] - p0[0])) / two_a,
        ]
    }

    /// Value at `p` (linear search; intended for tests and probes).
    pub fn eval(&self, p: Point2) -> Option<f64> {
        let m = &self.mesh;
        for (t, tri) in m.triangles().iter().enumerate() {
            let [a, b, c] = tri.map(|k| m.vertices()[k]);
            let area = m.triangle_area(t);
            let l0 = signed_area(p, b, c) / area;
            let l1 = signed_area(a, p, c) / area;
            let l2 = 1.0 - l0 - l1;
            let eps = -1e-12;
            if l0 >= eps && l1 >= eps && l2 >= eps {
                return Some(
                    l0 * self.values[tri[0]] + l1 * self.values[tri[1]] + l2 * self.values[tri[2]],
                );
            }
        }
        None
    }
}

/// Assembles the P1 stiffness matrix and load vector of `-Δu = 1` over the
/// non-Dirichlet vertices. Returns `(matrix, rhs, dof_of_vertex)`.
pub fn assemble(mesh: &TriMesh) -> (CsrMatrix, Vec<f64>, Vec<Option<usize>>) {
    let boundary = mesh.boundary_vertex_mask();
    let mut dof = vec![None; boundary.len()];
    let mut n_dof = 0;
    for (k, on_boundary) in boundary.iter().enumerate() {
        if !on_boundary {
            dof[k] = Some(n_dof);
            n_dof += 1;
        }
    }
    let elems: Vec<([f64; 9], [f64; 3], f64)> = par::map_collect(mesh.triangles().len(), |t| {
        let tri = mesh.triangles()[t];
        let p = tri.map(|k| mesh.vertices()[k]);
        let area = signed_area(p[0], p[1], p[2]);
        let bx = [p[1][1] - p[2][1], p[2][1] - p[0][1], p[0][1] - p[1][1]];
        let cy = [p[2][0] - p[1][0], p[0][0] - p[2][0], p[1][0] - p[0][0]];
        let mut k = [0.0; 9];
        for a in 0..3 {
            for b in 0..3 {
                k[3 * a + b] = (bx[a] * bx[b] + cy[a] * cy[b]) / (4.0 * area);
            }
        }
        (k, [area / 3.0; 3], area)
    });
    let mut triplets = Vec::with_capacity(9 * elems.len());
    let mut rhs = vec![0.0; n_dof];
    for (tri, (k, f, _)) in mesh.triangles().iter().zip(&elems) {
        for a in 0..3 {
            let Some(ra) = dof[tri[a]] else { continue };
            rhs[ra] += f[a];
            for b in 0..3 {
                if let Some(cb) = dof[tri[b]] {
                    triplets.push((ra, cb, k[3 * a + b]));
                }
            }
        }
    }
    (CsrMatrix::from_triplets(n_dof, &triplets), rhs, dof)
}

/// Iteration cap of the state solve for `n` unknowns.
pub fn max_cg_iterations(n: usize) -> usize {
    ((20.0 * (n as f64).sqrt()).ceil() as usize).max(50)
}

/// Solves `-Δu = 1` in Ω, `u = 0` on ∂Ω with P1 elements.
pub fn solve_poisson(mesh: impl Into<Arc<TriMesh>>) -> Result<ScalarField> {
    solve_poisson_with_stats(mesh).map(|(u, _)| u)
}

pub fn solve_poisson_with_stats(mesh: impl Into<Arc<TriMesh>>) -> Result<(ScalarField, CgStats)> {
    let mesh = mesh.into();
    let (a, b, dof) = assemble(&mesh);
    let (x, stats) = cg_jacobi(&a, &b, SOLVER_TOL, max_cg_iterations(a.n()))?;
    let values = dof.iter().map(|d| d.map_or(0.0, |k| x[k])).collect();
    Ok((ScalarField { mesh, values }, stats))
}

/// `J(Ω) = ∫(½|∇u|² − u)` and the compliance `∫u`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyValue {
    pub j: f64,
    pub compliance: f64,
}

/// Exact integrals of the piecewise-linear field.
pub fn dirichlet_energy(u: &ScalarField) -> EnergyValue {
    let m = u.mesh();
    let nt = m.triangles().len();
    let grad_sq = par::sum(nt, |t| {
        let g = u.element_gradient(t);
        m.triangle_area(t) * (g[0] * g[0] + g[1] * g[1])
    });
    let compliance = par::sum(nt, |t| {
        let tri = m.triangles()[t];
        m.triangle_area(t) * (u.values[tri[0]] + u.values[tri[1]] + u.values[tri[2]]) / 3.0
    });
    EnergyValue {
        j: 0.5 * grad_sq - compliance,
        compliance,
    }
}

/// `|∇u|` on one boundary edge, taken from the owning triangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundarySample {
    pub midpoint: Point2,
    pub grad: f64,
    pub length: f64,
    pub tag: EdgeTag,
    pub edge: BoundaryEdge,
}

pub fn boundary_gradient(u: &ScalarField) -> Vec<BoundarySample> {
    let m = u.mesh();
    m.boundary_edges()
        .iter()
        .map(|e| {
            let g = u.element_gradient(e.tri);
            BoundarySample {
                midpoint: m.edge_midpoint(e),
                grad: g[0].hypot(g[1]),
                length: m.edge_length(e),
                tag: e.tag,
                edge: *e,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::mesh_from_levelset;
    use crate::geometry::{disk_levelset, BoxDomain, LevelSetField};

    fn disk_solution(n: usize, r: f64) -> ScalarField {
        let d = BoxDomain::unit(n).unwrap();
        let m = mesh_from_levelset(&disk_levelset(d, r, [0.0, 0.0]).unwrap()).unwrap();
        solve_poisson(m).unwrap()
    }

    #[test]
    fn gradient_of_linear_data() {
        let d = BoxDomain::unit(16).unwrap();
        let m = Arc::new(mesh_from_levelset(&LevelSetField::from_fn(d, |p| p[0])).unwrap());
        let vals = m.vertices().iter().map(|p| 2.0 * p[0] - 3.0 * p[1]).collect();
        let f = ScalarField::new(m.clone(), vals).unwrap();
        for t in 0..m.triangles().len() {
            let g = f.element_gradient(t);
            assert!((g[0] - 2.0).abs() < 1e-12 && (g[1] + 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn disk_center_value() {
        let r = 0.8;
        let u = disk_solution(256, r);
        let c = u.eval([0.0, 0.0]).unwrap();
        assert!((c / (r * r / 4.0) - 1.0).abs() < 0.02, "u(0) = {c}");
        assert!(u.values().iter().all(|v| *v >= -1e-12));
    }

    #[test]
    fn energy_identity_and_closed_form() {
        let alpha: f64 = 2.5;
        let r = (alpha / std::f64::consts::PI).sqrt();
        let u = disk_solution(256, r);
        let e = dirichlet_energy(&u);
        assert!((e.j + 0.5 * e.compliance).abs() <= 1e-6 * e.j.abs());
        let exact = -alpha * alpha / (16.0 * std::f64::consts::PI);
        assert!((e.j / exact - 1.0).abs() < 0.01, "J = {} vs {exact}", e.j);
    }

    #[test]
    fn boundary_gradient_on_disk() {
        let r = 0.7;
        let u = disk_solution(256, r);
        let s = boundary_gradient(&u);
        let total: f64 = s.iter().map(|x| x.length).sum();
        let mean = s.iter().map(|x| x.grad * x.length).sum::<f64>() / total;
        assert!((mean / (r / 2.0) - 1.0).abs() < 0.02, "mean {mean}");
        let var = s.iter().map(|x| (x.grad - mean).powi(2) * x.length).sum::<f64>() / total;
        assert!(var.sqrt() / mean < 0.03);
    }

    #[test]
    fn zero_field_has_zero_trace() {
        let d = BoxDomain::unit(32).unwrap();
        let m = Arc::new(mesh_from_levelset(&disk_levelset(d, 0.5, [0.0, 0.0]).unwrap()).unwrap());
        let z = ScalarField::zeros(m);
        assert!(boundary_gradient(&z).iter().all(|s| s.grad == 0.0));
    }
}
