//! Simplicial meshes of intervals and unit squares.
//!
//! Conventions:
//! - 1D meshes store nodes in ascending coordinate order; cell `c` connects
//!   nodes `c` and `c + 1`.
//! - 2D meshes cover the unit square with a structured grid of `nx * ny`
//!   squares, each split into triangles. Grid node `(i, j)` has index
//!   `j * (nx + 1) + i`, so indices run row-major with `y` outermost.
//!   Triangles are oriented counter-clockwise.
//! - Boundary nodes are derived from connectivity: a facet (endpoint in 1D,
//!   edge in 2D) incident to exactly one cell is a boundary facet, and its
//!   nodes are boundary nodes.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// How each grid square of a 2D mesh is split into triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagonal {
    /// Diagonal from the lower-left to the upper-right corner.
    Right,
    /// Diagonal from the lower-right to the upper-left corner.
    Left,
    /// Both diagonals; adds one center node and four triangles per square.
    Crossed,
}

/// A conforming P1 mesh in one or two dimensions.
#[derive(Debug, Clone)]
pub struct Mesh {
    dim: usize,
    n_nodes: usize,
    /// Node coordinates, `dim` entries per node.
    nodes: Vec<f64>,
    /// Cell connectivity, `dim + 1` node indices per cell.
    cells: Vec<usize>,
    /// Sorted indices of boundary nodes.
    boundary: Vec<usize>,
    /// Longest edge over all cells.
    h: f64,
}

impl Mesh {
    fn from_parts(dim: usize, nodes: Vec<f64>, cells: Vec<usize>) -> Result<Self> {
        assert!(dim == 1 || dim == 2, "only 1D and 2D meshes are supported");
        let n_nodes = nodes.len() / dim;
        let verts = dim + 1;
        assert_eq!(nodes.len() % dim, 0);
        assert_eq!(cells.len() % verts, 0);
        for &v in &cells {
            if v >= n_nodes {
                return Err(Error::OutOfRange(format!(
                    "cell vertex {v} exceeds node count {n_nodes}"
                )));
            }
        }
        if !nodes.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidMesh("non-finite node coordinate".into()));
        }

        let mut mesh = Mesh { dim, n_nodes, nodes, cells, boundary: Vec::new(), h: 0.0 };
        for c in 0..mesh.n_cells() {
            let vol = mesh.cell_volume(c);
            if vol <= 0.0 {
                return Err(Error::InvalidMesh(format!(
                    "cell {c} has non-positive volume {vol}"
                )));
            }
        }
        mesh.h = (0..mesh.n_cells())
            .map(|c| mesh.longest_edge(c))
            .fold(0.0, f64::max);
        mesh.boundary = mesh.boundary_from_connectivity();
        Ok(mesh)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len() / (self.dim + 1)
    }

    /// Coordinates of node `i` as a slice of length `dim`.
    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    /// Vertex indices of cell `c`, `dim + 1` entries.
    pub fn cell(&self, c: usize) -> &[usize] {
        let verts = self.dim + 1;
        &self.cells[c * verts..(c + 1) * verts]
    }

    /// Sorted indices of nodes on the domain boundary.
    pub fn boundary_nodes(&self) -> &[usize] {
        &self.boundary
    }

    /// `mask[i]` is true iff node `i` lies on the boundary.
    pub fn boundary_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n_nodes];
        for &i in &self.boundary {
            mask[i] = true;
        }
        mask
    }

    /// Longest edge over all cells.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Length (1D) or area (2D) of cell `c`. Positive for valid meshes.
    pub fn cell_volume(&self, c: usize) -> f64 {
        let cell = self.cell(c);
        match self.dim {
            1 => self.node(cell[1])[0] - self.node(cell[0])[0],
            _ => {
                let (a, b, p) = (self.node(cell[0]), self.node(cell[1]), self.node(cell[2]));
                0.5 * ((b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]))
            }
        }
    }

    fn longest_edge(&self, c: usize) -> f64 {
        let cell = self.cell(c);
        let mut longest: f64 = 0.0;
        for i in 0..cell.len() {
            for j in i + 1..cell.len() {
                let (a, b) = (self.node(cell[i]), self.node(cell[j]));
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                longest = longest.max(d2.sqrt());
            }
        }
        longest
    }

    fn boundary_from_connectivity(&self) -> Vec<usize> {
        let mut mask = vec![false; self.n_nodes];
        match self.dim {
            1 => {
                // A node incident to exactly one cell is an endpoint.
                let mut count = vec![0usize; self.n_nodes];
                for &v in &self.cells {
                    count[v] += 1;
                }
                for (i, &c) in count.iter().enumerate() {
                    if c == 1 {
                        mask[i] = true;
                    }
                }
            }
            _ => {
                let mut edge_count: HashMap<(usize, usize), usize> = HashMap::new();
                for c in 0..self.n_cells() {
                    let cell = self.cell(c);
                    for (a, b) in [(0, 1), (1, 2), (2, 0)] {
                        let key = (cell[a].min(cell[b]), cell[a].max(cell[b]));
                        *edge_count.entry(key).or_insert(0) += 1;
                    }
                }
                for (&(a, b), &count) in &edge_count {
                    if count == 1 {
                        mask[a] = true;
                        mask[b] = true;
                    }
                }
            }
        }
        (0..self.n_nodes).filter(|&i| mask[i]).collect()
    }
}

/// Uniform 1D mesh of `n_cells` cells on `(a, b)`, nodes in ascending order.
pub fn interval_mesh(n_cells: usize, a: f64, b: f64) -> Result<Mesh> {
    if n_cells == 0 {
        return Err(Error::InvalidMesh("interval mesh needs at least one cell".into()));
    }
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::InvalidMesh(format!(
            "interval bounds must be finite with b > a, got ({a}, {b})"
        )));
    }
    let n = n_cells;
    let nodes: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    let mut cells = Vec::with_capacity(2 * n);
    for c in 0..n {
        cells.extend_from_slice(&[c, c + 1]);
    }
    Mesh::from_parts(1, nodes, cells)
}

/// Structured triangulation of the unit square with `nx * ny` grid squares.
pub fn unit_square_mesh(nx: usize, ny: usize, diagonal: Diagonal) -> Result<Mesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidMesh("square mesh needs at least one cell per side".into()));
    }
    let stride = nx + 1;
    let mut nodes = Vec::with_capacity(2 * stride * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push(i as f64 / nx as f64);
            nodes.push(j as f64 / ny as f64);
        }
    }
    let mut cells = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let ll = j * stride + i;
            let lr = ll + 1;
            let ul = ll + stride;
            let ur = ul + 1;
            match diagonal {
                Diagonal::Right => {
                    cells.extend_from_slice(&[ll, lr, ur]);
                    cells.extend_from_slice(&[ll, ur, ul]);
                }
                Diagonal::Left => {
                    cells.extend_from_slice(&[ll, lr, ul]);
                    cells.extend_from_slice(&[lr, ur, ul]);
                }
                Diagonal::Crossed => {
                    let center = stride * (ny + 1) + j * nx + i;
                    cells.extend_from_slice(&[ll, lr, center]);
                    cells.extend_from_slice(&[lr, ur, center]);
                    cells.extend_from_slice(&[ur, ul, center]);
                    cells.extend_from_slice(&[ul, ll, center]);
                }
            }
        }
    }
    if diagonal == Diagonal::Crossed {
        for j in 0..ny {
            for i in 0..nx {
                nodes.push((i as f64 + 0.5) / nx as f64);
                nodes.push((j as f64 + 0.5) / ny as f64);
            }
        }
    }
    Mesh::from_parts(2, nodes, cells)
}
