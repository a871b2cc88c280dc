//! P1 finite element assembly on a single subdomain mesh.
//!
//! Matrices are oriented `(test row, trial column)`: entry `(k, i)` tests the
//! form with basis function `k` against trial function `i`. Integration uses
//! rules that are exact for every form assembled here: two-point Gauss on
//! intervals and the three-midpoint rule (degree 2) on triangles. P1 gradients
//! are constant per cell.

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::sparse::CsrMatrix;

/// Bilinear forms assembled into square matrices over one subdomain.
#[derive(Debug, Clone, PartialEq)]
pub enum FormKind {
    /// `(phi_i, v_k)`
    Mass,
    /// `(grad phi_i, grad v_k)`
    Stiffness,
    /// `(b . grad phi_i, v_k)`
    Advection { velocity: Vec<f64> },
    /// `(phi_i, b . grad v_k)`
    AdvectionTranspose { velocity: Vec<f64> },
    /// `(b . grad phi_i, b . grad v_k)`
    SupgAdvection { velocity: Vec<f64> },
    /// `(lap phi_i, b . grad v_k)`; identically zero for P1, materialized
    /// explicitly so operator term lists stay structurally complete.
    LaplacianAdvection { velocity: Vec<f64> },
    /// `(lap phi_i, v_k)`; identically zero for P1, materialized explicitly.
    LaplacianMass,
    /// `(phi_i', v_k')` on an interval minus the endpoint flux
    /// `[phi_i' v_k n]` at both ends, with outward normal `n`. 1D only.
    TemporalStiffnessWithBoundary,
}

/// Linear forms assembled into vectors over one subdomain.
#[derive(Debug, Clone, PartialEq)]
pub enum VectorFormKind {
    /// `(1, v_k)`
    Load,
    /// `(1, b . grad v_k)`
    SupgLoad { velocity: Vec<f64> },
}

fn check_velocity(mesh: &Mesh, velocity: &[f64]) -> Result<()> {
    if velocity.len() != mesh.dim() {
        return Err(Error::DimensionMismatch(format!(
            "velocity has {} components for a {}D mesh",
            velocity.len(),
            mesh.dim()
        )));
    }
    if !velocity.iter().all(|b| b.is_finite()) {
        return Err(Error::NonFiniteValue("velocity component".into()));
    }
    Ok(())
}

/// Per-cell geometry: vertex ids, constant basis gradients, quadrature rule.
struct CellGeometry {
    vertices: Vec<usize>,
    /// `grads[v]` is the gradient of the basis function of vertex `v`.
    grads: Vec<Vec<f64>>,
    /// Each point: (weight, basis values at the point).
    quadrature: Vec<(f64, Vec<f64>)>,
}

fn cell_geometry(mesh: &Mesh, c: usize) -> CellGeometry {
    let cell = mesh.cell(c).to_vec();
    match mesh.dim() {
        1 => {
            let (xa, xb) = (mesh.node(cell[0])[0], mesh.node(cell[1])[0]);
            let h = xb - xa;
            let grads = vec![vec![-1.0 / h], vec![1.0 / h]];
            // Two-point Gauss on the reference interval, exact to degree 3.
            let offset = 0.5 / 3.0_f64.sqrt();
            let quadrature = [0.5 - offset, 0.5 + offset]
                .iter()
                .map(|&xi| (0.5 * h, vec![1.0 - xi, xi]))
                .collect();
            CellGeometry { vertices: cell, grads, quadrature }
        }
        _ => {
            let p: Vec<&[f64]> = cell.iter().map(|&v| mesh.node(v)).collect();
            let area = mesh.cell_volume(c);
            let mut grads = Vec::with_capacity(3);
            for v in 0..3 {
                let (q, r) = (p[(v + 1) % 3], p[(v + 2) % 3]);
                grads.push(vec![
                    (q[1] - r[1]) / (2.0 * area),
                    (r[0] - q[0]) / (2.0 * area),
                ]);
            }
            // Edge-midpoint rule, exact to degree 2.
            let quadrature = vec![
                (area / 3.0, vec![0.5, 0.5, 0.0]),
                (area / 3.0, vec![0.0, 0.5, 0.5]),
                (area / 3.0, vec![0.5, 0.0, 0.5]),
            ];
            CellGeometry { vertices: cell, grads, quadrature }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Assembles the `n x n` matrix of `form` over `mesh` (`n` = node count).
pub fn assemble_matrix(mesh: &Mesh, form: &FormKind) -> Result<CsrMatrix> {
    let n = mesh.n_nodes();
    match form {
        FormKind::LaplacianMass => return Ok(CsrMatrix::zeros(n, n)),
        FormKind::LaplacianAdvection { velocity } => {
            check_velocity(mesh, velocity)?;
            return Ok(CsrMatrix::zeros(n, n));
        }
        FormKind::TemporalStiffnessWithBoundary => {
            return assemble_temporal_stiffness(mesh);
        }
        FormKind::Advection { velocity }
        | FormKind::AdvectionTranspose { velocity }
        | FormKind::SupgAdvection { velocity } => check_velocity(mesh, velocity)?,
        FormKind::Mass | FormKind::Stiffness => {}
    }

    let verts = mesh.dim() + 1;
    let mut triplets = Vec::with_capacity(mesh.n_cells() * verts * verts);
    for c in 0..mesh.n_cells() {
        let geo = cell_geometry(mesh, c);
        for (w, basis) in &geo.quadrature {
            for k in 0..verts {
                for i in 0..verts {
                    let value = match form {
                        FormKind::Mass => basis[i] * basis[k],
                        FormKind::Stiffness => dot(&geo.grads[i], &geo.grads[k]),
                        FormKind::Advection { velocity } => {
                            dot(velocity, &geo.grads[i]) * basis[k]
                        }
                        FormKind::AdvectionTranspose { velocity } => {
                            basis[i] * dot(velocity, &geo.grads[k])
                        }
                        FormKind::SupgAdvection { velocity } => {
                            dot(velocity, &geo.grads[i]) * dot(velocity, &geo.grads[k])
                        }
                        _ => unreachable!("zero and boundary forms handled above"),
                    };
                    triplets.push((geo.vertices[k], geo.vertices[i], w * value));
                }
            }
        }
    }
    CsrMatrix::from_triplets(n, n, &triplets)
}

/// Interval stiffness matrix corrected by the endpoint flux of the trial
/// derivative: entry `(k, i)` is `int phi_i' v_k' - [phi_i' v_k n]` with the
/// jump evaluated at both interval ends.
fn assemble_temporal_stiffness(mesh: &Mesh) -> Result<CsrMatrix> {
    if mesh.dim() != 1 {
        return Err(Error::UnsupportedForm(
            "temporal stiffness with boundary flux is defined on 1D meshes only".into(),
        ));
    }
    let n = mesh.n_nodes();
    let stiffness = assemble_matrix(mesh, &FormKind::Stiffness)?;
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    for r in 0..n {
        for (c, v) in stiffness.row(r) {
            triplets.push((r, c, v));
        }
    }

    // The two boundary nodes carry the flux corrections. Only the test
    // function of the endpoint node itself is nonzero there, so each end
    // contributes one row. Cells store ascending node pairs.
    for &nb in mesh.boundary_nodes() {
        let cell_id = (0..mesh.n_cells())
            .find(|&c| mesh.cell(c).contains(&nb))
            .expect("boundary node belongs to a cell");
        let cell = mesh.cell(cell_id);
        let h = mesh.cell_volume(cell_id);
        let x = mesh.node(nb)[0];
        let is_right_end = mesh
            .boundary_nodes()
            .iter()
            .all(|&other| mesh.node(other)[0] <= x);
        let normal = if is_right_end { 1.0 } else { -1.0 };
        let slopes = [-1.0 / h, 1.0 / h];
        for (local, &trial) in cell.iter().enumerate() {
            triplets.push((nb, trial, -normal * slopes[local]));
        }
    }
    CsrMatrix::from_triplets(n, n, &triplets)
}

/// Assembles the length-`n` vector of `form` over `mesh`.
pub fn assemble_vector(mesh: &Mesh, form: &VectorFormKind) -> Result<Vec<f64>> {
    if let VectorFormKind::SupgLoad { velocity } = form {
        check_velocity(mesh, velocity)?;
    }
    let verts = mesh.dim() + 1;
    let mut out = vec![0.0; mesh.n_nodes()];
    for c in 0..mesh.n_cells() {
        let geo = cell_geometry(mesh, c);
        for (w, basis) in &geo.quadrature {
            for k in 0..verts {
                let value = match form {
                    VectorFormKind::Load => basis[k],
                    VectorFormKind::SupgLoad { velocity } => dot(velocity, &geo.grads[k]),
                };
                out[geo.vertices[k]] += w * value;
            }
        }
    }
    Ok(out)
}

/// The matrices and vectors one problem needs from a single subdomain.
#[derive(Debug, Clone)]
pub struct SubdomainForms {
    n_nodes: usize,
    matrices: Vec<(FormKind, CsrMatrix)>,
    vectors: Vec<(VectorFormKind, Vec<f64>)>,
}

impl SubdomainForms {
    /// Assembles every requested form over `mesh`.
    pub fn assemble(
        mesh: &Mesh,
        matrix_kinds: &[FormKind],
        vector_kinds: &[VectorFormKind],
    ) -> Result<Self> {
        let mut matrices = Vec::with_capacity(matrix_kinds.len());
        for kind in matrix_kinds {
            matrices.push((kind.clone(), assemble_matrix(mesh, kind)?));
        }
        let mut vectors = Vec::with_capacity(vector_kinds.len());
        for kind in vector_kinds {
            vectors.push((kind.clone(), assemble_vector(mesh, kind)?));
        }
        Ok(SubdomainForms { n_nodes: mesh.n_nodes(), matrices, vectors })
    }

    /// Node count shared by every stored form.
    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn matrix(&self, kind: &FormKind) -> Result<&CsrMatrix> {
        self.matrices
            .iter()
            .find(|(k, _)| k == kind)
            .map(|(_, m)| m)
            .ok_or_else(|| Error::UnsupportedForm(format!("matrix form {kind:?} not assembled")))
    }

    pub fn vector(&self, kind: &VectorFormKind) -> Result<&[f64]> {
        self.vectors
            .iter()
            .find(|(k, _)| k == kind)
            .map(|(_, v)| v.as_slice())
            .ok_or_else(|| Error::UnsupportedForm(format!("vector form {kind:?} not assembled")))
    }
}
