//! Finite element toolkit: quadrature, reference elements, dof maps, sparse
//! assembly, and point evaluation.
//!
//! Elements on triangles are the Taylor-Hood pair (quadratic velocities,
//! linear pressures). On interface intervals the toolkit offers linear and
//! cubic Hermite elements plus piecewise constants. All dof numberings are
//! deterministic functions of the mesh, and triplet accumulation sums
//! duplicates in a sorted, reproducible order.

use crate::mesh::{IntervalMesh, TriMesh};
use std::collections::HashMap;

// ---------------------------------------------------------------------------
// Quadrature

/// Gauss points and weights on [0, 1], exact through polynomial degree
/// `order`.
pub fn gauss_interval(order: usize) -> Vec<(f64, f64)> {
    let n = order / 2 + 1;
    // Abscissae on [-1, 1] with weights summing to 2.
    let raw: &[(f64, f64)] = match n {
        1 => &[(0.0, 2.0)],
        2 => &[
            (-0.577350269189625764509148780502, 1.0),
            (0.577350269189625764509148780502, 1.0),
        ],
        3 => &[
            (-0.774596669241483377035853079956, 5.0 / 9.0),
            (0.0, 8.0 / 9.0),
            (0.774596669241483377035853079956, 5.0 / 9.0),
        ],
        4 => &[
            (-0.861136311594052575223946488893, 0.347854845137453857373063949222),
            (-0.339981043584856264802665759103, 0.652145154862546142626936050778),
            (0.339981043584856264802665759103, 0.652145154862546142626936050778),
            (0.861136311594052575223946488893, 0.347854845137453857373063949222),
        ],
        _ => &[
            (-0.906179845938663992797626878299, 0.236926885056189087514264040720),
            (-0.538469310105683091036314420700, 0.478628670499366468041291514836),
            (0.0, 0.568888888888888888888888888889),
            (0.538469310105683091036314420700, 0.478628670499366468041291514836),
            (0.906179845938663992797626878299, 0.236926885056189087514264040720),
        ],
    };
    raw.iter()
        .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect()
}

/// Quadrature on the reference triangle {x, y >= 0, x + y <= 1}, exact
/// through polynomial degree `order` (capped at 6). Weights sum to the
/// reference area 1/2.
pub fn tri_rule(order: usize) -> Vec<(f64, f64, f64)> {
    // Symmetric-orbit rules; weights below are normalized to sum to 1 and are
    // halved on output.
    let mut pts: Vec<(f64, f64, f64)> = Vec::new();
    let push3 = |a: f64, w: f64, pts: &mut Vec<(f64, f64, f64)>| {
        pts.push((a, a, w));
        pts.push((1.0 - 2.0 * a, a, w));
        pts.push((a, 1.0 - 2.0 * a, w));
    };
    match order {
        0 | 1 => pts.push((1.0 / 3.0, 1.0 / 3.0, 1.0)),
        2 => push3(1.0 / 6.0, 1.0 / 3.0, &mut pts),
        3 | 4 => {
            push3(0.445948490915965, 0.223381589678011, &mut pts);
            push3(0.091576213509771, 0.109951743655322, &mut pts);
        }
        5 => {
            pts.push((1.0 / 3.0, 1.0 / 3.0, 0.225));
            push3(0.470142064105115, 0.132394152788506, &mut pts);
            push3(0.101286507323456, 0.125939180544827, &mut pts);
        }
        _ => {
            push3(0.249286745170910, 0.116786275726379, &mut pts);
            push3(0.063089014491502, 0.050844906370207, &mut pts);
            let (s, t, u) = (0.053145049844816, 0.310352451033785, 0.636502499121399);
            let w = 0.082851075618374;
            for (l1, l2) in [(t, u), (u, t), (s, u), (u, s), (s, t), (t, s)] {
                pts.push((l1, l2, w));
            }
        }
    }
    pts.iter().map(|&(x, y, w)| (x, y, 0.5 * w)).collect()
}

/// Default volume rule degree; integrates every bilinear form of the
/// quadratic/linear pairs exactly on affine triangles.
pub const TRI_ORDER: usize = 4;
/// Default interface rule degree; products of two cubics need degree 6.
pub const INT_ORDER: usize = 6;

// ---------------------------------------------------------------------------
// Reference elements

/// Linear shape values on the reference triangle.
pub fn p1_tri_values(x: f64, y: f64) -> [f64; 3] {
    [1.0 - x - y, x, y]
}

/// Reference gradients of the linear triangle shapes (constant).
pub fn p1_tri_grads() -> [[f64; 2]; 3] {
    [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]]
}

/// Quadratic shape values, dofs ordered vertices then edges (01, 12, 20).
pub fn p2_tri_values(x: f64, y: f64) -> [f64; 6] {
    let l = [1.0 - x - y, x, y];
    [
        l[0] * (2.0 * l[0] - 1.0),
        l[1] * (2.0 * l[1] - 1.0),
        l[2] * (2.0 * l[2] - 1.0),
        4.0 * l[0] * l[1],
        4.0 * l[1] * l[2],
        4.0 * l[2] * l[0],
    ]
}

/// Reference gradients of the quadratic triangle shapes.
pub fn p2_tri_grads(x: f64, y: f64) -> [[f64; 2]; 6] {
    let l = [1.0 - x - y, x, y];
    let dl = p1_tri_grads();
    let mut g = [[0.0; 2]; 6];
    for v in 0..3 {
        for k in 0..2 {
            g[v][k] = (4.0 * l[v] - 1.0) * dl[v][k];
        }
    }
    for (e, (a, b)) in [(0usize, 1usize), (1, 2), (2, 0)].into_iter().enumerate() {
        for k in 0..2 {
            g[3 + e][k] = 4.0 * (l[a] * dl[b][k] + l[b] * dl[a][k]);
        }
    }
    g
}

/// Linear shape values on the reference interval [0, 1].
pub fn p1_int_values(t: f64) -> [f64; 2] {
    [1.0 - t, t]
}

/// Cubic Hermite shape values on [0, 1], dofs (value, slope, value, slope).
/// Slope dofs are reference slopes; physical assembly scales them by the cell
/// width.
pub fn hermite_values(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        1.0 - 3.0 * t2 + 2.0 * t3,
        t - 2.0 * t2 + t3,
        3.0 * t2 - 2.0 * t3,
        -t2 + t3,
    ]
}

/// First derivatives of the Hermite shapes with respect to the reference
/// coordinate.
pub fn hermite_d1(t: f64) -> [f64; 4] {
    let t2 = t * t;
    [
        -6.0 * t + 6.0 * t2,
        1.0 - 4.0 * t + 3.0 * t2,
        6.0 * t - 6.0 * t2,
        -2.0 * t + 3.0 * t2,
    ]
}

/// Second derivatives of the Hermite shapes with respect to the reference
/// coordinate.
pub fn hermite_d2(t: f64) -> [f64; 4] {
    [
        -6.0 + 12.0 * t,
        -4.0 + 6.0 * t,
        6.0 - 12.0 * t,
        -2.0 + 6.0 * t,
    ]
}

// ---------------------------------------------------------------------------
// Triangle geometry

/// Affine geometry of one triangle: area, and the action of the inverse
/// transposed Jacobian that maps reference gradients to physical ones.
#[derive(Debug, Clone, Copy)]
pub struct TriGeom {
    pub p0: [f64; 2],
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    pub det: f64,
}

impl TriGeom {
    pub fn new(coords: &[[f64; 2]; 3]) -> TriGeom {
        let a = coords[1][0] - coords[0][0];
        let b = coords[2][0] - coords[0][0];
        let c = coords[1][1] - coords[0][1];
        let d = coords[2][1] - coords[0][1];
        TriGeom {
            p0: coords[0],
            a,
            b,
            c,
            d,
            det: a * d - b * c,
        }
    }

    pub fn area(&self) -> f64 {
        0.5 * self.det
    }

    /// Physical gradient from a reference gradient.
    pub fn phys_grad(&self, g: [f64; 2]) -> [f64; 2] {
        [
            (self.d * g[0] - self.c * g[1]) / self.det,
            (-self.b * g[0] + self.a * g[1]) / self.det,
        ]
    }

    /// Reference coordinates of a physical point.
    pub fn ref_coords(&self, p: [f64; 2]) -> (f64, f64) {
        let px = p[0] - self.p0[0];
        let py = p[1] - self.p0[1];
        (
            (self.d * px - self.b * py) / self.det,
            (-self.c * px + self.a * py) / self.det,
        )
    }

    /// Physical point of reference coordinates.
    pub fn map(&self, x: f64, y: f64) -> [f64; 2] {
        [
            self.p0[0] + self.a * x + self.b * y,
            self.p0[1] + self.c * x + self.d * y,
        ]
    }
}

/// Constant gradient of a linear field given its vertex values.
pub fn p1_gradient(coords: &[[f64; 2]; 3], vals: [f64; 3]) -> [f64; 2] {
    let geom = TriGeom::new(coords);
    let mut g = [0.0; 2];
    for (i, rg) in p1_tri_grads().into_iter().enumerate() {
        let pg = geom.phys_grad(rg);
        g[0] += vals[i] * pg[0];
        g[1] += vals[i] * pg[1];
    }
    g
}

// ---------------------------------------------------------------------------
// Dof maps

/// Quadratic dof map on a triangle mesh: vertex dofs first, then one dof per
/// edge in first-seen order over the deterministic triangle sweep.
#[derive(Debug, Clone)]
pub struct P2Map {
    pub n_verts: usize,
    /// Edge vertex pairs (min, max) in id order.
    pub edges: Vec<(usize, usize)>,
    edge_of: HashMap<(usize, usize), usize>,
    tri_dofs: Vec<[usize; 6]>,
}

impl P2Map {
    pub fn build(mesh: &TriMesh) -> P2Map {
        let n_verts = mesh.n_verts();
        let mut edges = Vec::new();
        let mut edge_of = HashMap::new();
        let mut tri_dofs = Vec::with_capacity(mesh.n_tris());
        for tri in &mesh.tris {
            let mut dofs = [0usize; 6];
            dofs[..3].copy_from_slice(tri);
            for (slot, (a, b)) in [(tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])]
                .into_iter()
                .enumerate()
            {
                let key = (a.min(b), a.max(b));
                let id = *edge_of.entry(key).or_insert_with(|| {
                    edges.push(key);
                    edges.len() - 1
                });
                dofs[3 + slot] = n_verts + id;
            }
            tri_dofs.push(dofs);
        }
        P2Map {
            n_verts,
            edges,
            edge_of,
            tri_dofs,
        }
    }

    pub fn n_dofs(&self) -> usize {
        self.n_verts + self.edges.len()
    }

    pub fn dofs(&self, tri: usize) -> [usize; 6] {
        self.tri_dofs[tri]
    }

    /// Dof index of the edge between two vertices.
    pub fn edge_dof(&self, a: usize, b: usize) -> usize {
        self.n_verts + self.edge_of[&(a.min(b), a.max(b))]
    }

    /// Coordinates of every dof: vertices, then edge midpoints.
    pub fn dof_coords(&self, mesh: &TriMesh) -> Vec<[f64; 2]> {
        let mut coords = mesh.verts.clone();
        coords.reserve(self.edges.len());
        for &(a, b) in &self.edges {
            let pa = mesh.verts[a];
            let pb = mesh.verts[b];
            coords.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
        }
        coords
    }
}

/// Hermite dofs of interval cell `e`: (value, slope) at each endpoint.
pub fn hermite_dofs(e: usize) -> [usize; 4] {
    [2 * e, 2 * e + 1, 2 * e + 2, 2 * e + 3]
}

// ---------------------------------------------------------------------------
// Sparse matrices

/// One scatter-add contribution.
#[derive(Debug, Clone, Copy)]
pub struct Triplet {
    pub row: usize,
    pub col: usize,
    pub val: f64,
}

pub fn triplet(row: usize, col: usize, val: f64) -> Triplet {
    Triplet { row, col, val }
}

/// Compressed sparse row matrix.
#[derive(Debug, Clone)]
pub struct Csr {
    pub nrows: usize,
    pub ncols: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub vals: Vec<f64>,
}

impl Csr {
    /// Build from triplets, summing duplicates. The stable sort by (row, col)
    /// fixes the summation order, so the result is reproducible for any
    /// insertion order of equal entries.
    pub fn from_triplets(nrows: usize, ncols: usize, mut trips: Vec<Triplet>) -> Csr {
        trips.sort_by_key(|t| (t.row, t.col));
        let mut row_counts = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(trips.len());
        let mut vals: Vec<f64> = Vec::with_capacity(trips.len());
        let mut last: Option<(usize, usize)> = None;
        for t in &trips {
            debug_assert!(t.row < nrows && t.col < ncols);
            if last == Some((t.row, t.col)) {
                *vals.last_mut().unwrap() += t.val;
            } else {
                col_idx.push(t.col);
                vals.push(t.val);
                row_counts[t.row + 1] += 1;
                last = Some((t.row, t.col));
            }
        }
        for r in 0..nrows {
            row_counts[r + 1] += row_counts[r];
        }
        Csr {
            nrows,
            ncols,
            row_ptr: row_counts,
            col_idx,
            vals,
        }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for r in 0..self.nrows {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.col_idx[k]];
            }
            y[r] = acc;
        }
    }

    /// y += s A x.
    pub fn matvec_add(&self, s: f64, x: &[f64], y: &mut [f64]) {
        for r in 0..self.nrows {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.col_idx[k]];
            }
            y[r] += s * acc;
        }
    }

    /// x' A y.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = 0.0;
        for r in 0..self.nrows {
            let mut row = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                row += self.vals[k] * y[self.col_idx[k]];
            }
            acc += x[r] * row;
        }
        acc
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.ncols]; self.nrows];
        for r in 0..self.nrows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                dense[r][self.col_idx[k]] += self.vals[k];
            }
        }
        dense
    }
}

/// Replace the rows of constrained dofs by identity rows. Columns are left in
/// place; every constraint in this solver pins its dof to zero, so stray
/// column entries multiply a zero and the solution is unaffected.
pub fn impose_identity_rows(trips: Vec<Triplet>, fixed: &[bool]) -> Vec<Triplet> {
    let mut out: Vec<Triplet> = trips.into_iter().filter(|t| !fixed[t.row]).collect();
    for (i, &f) in fixed.iter().enumerate() {
        if f {
            out.push(triplet(i, i, 1.0));
        }
    }
    out
}

/// Zero the entries of constrained dofs in a right-hand side.
pub fn zero_fixed(rhs: &mut [f64], fixed: &[bool]) {
    for (v, &f) in rhs.iter_mut().zip(fixed) {
        if f {
            *v = 0.0;
        }
    }
}

// ---------------------------------------------------------------------------
// Shared 2D operators

/// scale * (u, phi) for one scalar quadratic field.
pub fn add_mass_p2(
    out: &mut Vec<Triplet>,
    mesh: &TriMesh,
    p2: &P2Map,
    order: usize,
    scale: f64,
    row_off: usize,
    col_off: usize,
) {
    let rule = tri_rule(order);
    for t in 0..mesh.n_tris() {
        let geom = TriGeom::new(&mesh.tri_coords(t));
        let dofs = p2.dofs(t);
        let mut local = [[0.0; 6]; 6];
        for &(x, y, w) in &rule {
            let n = p2_tri_values(x, y);
            let wd = w * geom.det * scale;
            for i in 0..6 {
                for j in 0..6 {
                    local[i][j] += wd * n[i] * n[j];
                }
            }
        }
        for i in 0..6 {
            for j in 0..6 {
                out.push(triplet(row_off + dofs[i], col_off + dofs[j], local[i][j]));
            }
        }
    }
}

/// scale * (q, s) for one scalar linear field.
pub fn add_mass_p1(
    out: &mut Vec<Triplet>,
    mesh: &TriMesh,
    order: usize,
    scale: f64,
    row_off: usize,
    col_off: usize,
) {
    let rule = tri_rule(order);
    for t in 0..mesh.n_tris() {
        let geom = TriGeom::new(&mesh.tri_coords(t));
        let dofs = mesh.tris[t];
        for &(x, y, w) in &rule {
            let n = p1_tri_values(x, y);
            let wd = w * geom.det * scale;
            for i in 0..3 {
                for j in 0..3 {
                    out.push(triplet(row_off + dofs[i], col_off + dofs[j], wd * n[i] * n[j]));
                }
            }
        }
    }
}

/// scale * (grad q, grad s) for one scalar linear field.
pub fn add_stiffness_p1(
    out: &mut Vec<Triplet>,
    mesh: &TriMesh,
    order: usize,
    scale: f64,
    row_off: usize,
    col_off: usize,
) {
    let rule = tri_rule(order);
    for t in 0..mesh.n_tris() {
        let geom = TriGeom::new(&mesh.tri_coords(t));
        let dofs = mesh.tris[t];
        let grads: Vec<[f64; 2]> = p1_tri_grads()
            .into_iter()
            .map(|g| geom.phys_grad(g))
            .collect();
        let area: f64 = rule.iter().map(|&(_, _, w)| w).sum::<f64>() * geom.det;
        for i in 0..3 {
            for j in 0..3 {
                let v = scale * area * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
                out.push(triplet(row_off + dofs[i], col_off + dofs[j], v));
            }
        }
    }
}

/// scale * 2 (D(u), D(phi)) for a two-component quadratic field, the
/// symmetric-gradient viscous form. Component dof offsets are passed per
/// block row/column.
pub fn add_sym_grad_p2(
    out: &mut Vec<Triplet>,
    mesh: &TriMesh,
    p2: &P2Map,
    order: usize,
    scale: f64,
    row_x: usize,
    row_y: usize,
    col_x: usize,
    col_y: usize,
) {
    let rule = tri_rule(order);
    for t in 0..mesh.n_tris() {
        let geom = TriGeom::new(&mesh.tri_coords(t));
        let dofs = p2.dofs(t);
        let mut xx = [[0.0; 6]; 6];
        let mut xy = [[0.0; 6]; 6];
        let mut yx = [[0.0; 6]; 6];
        let mut yy = [[0.0; 6]; 6];
        for &(x, y, w) in &rule {
            let wd = w * geom.det * scale;
            let g: Vec<[f64; 2]> = p2_tri_grads(x, y)
                .into_iter()
                .map(|g| geom.phys_grad(g))
                .collect();
            for i in 0..6 {
                for j in 0..6 {
                    // 2 D(e_a phi_j) : D(e_b phi_i), expanded per block.
                    xx[i][j] += wd * (2.0 * g[i][0] * g[j][0] + g[i][1] * g[j][1]);
                    xy[i][j] += wd * g[i][1] * g[j][0];
                    yx[i][j] += wd * g[i][0] * g[j][1];
                    yy[i][j] += wd * (2.0 * g[i][1] * g[j][1] + g[i][0] * g[j][0]);
                }
            }
        }
        for i in 0..6 {
            for j in 0..6 {
                out.push(triplet(row_x + dofs[i], col_x + dofs[j], xx[i][j]));
                out.push(triplet(row_x + dofs[i], col_y + dofs[j], xy[i][j]));
                out.push(triplet(row_y + dofs[i], col_x + dofs[j], yx[i][j]));
                out.push(triplet(row_y + dofs[i], col_y + dofs[j], yy[i][j]));
            }
        }
    }
}

/// scale * (div u, div phi) for a two-component quadratic field.
pub fn add_div_div_p2(
    out: &mut Vec<Triplet>,
    mesh: &TriMesh,
    p2: &P2Map,
    order: usize,
    scale: f64,
    row_x: usize,
    row_y: usize,
    col_x: usize,
    col_y: usize,
) {
    let rule = tri_rule(order);
    for t in 0..mesh.n_tris() {
        let geom = TriGeom::new(&mesh.tri_coords(t));
        let dofs = p2.dofs(t);
        for &(x, y, w) in &rule {
            let wd = w * geom.det * scale;
            let g: Vec<[f64; 2]> = p2_tri_grads(x, y)
                .into_iter()
                .map(|g| geom.phys_grad(g))
                .collect();
            for i in 0..6 {
                for j in 0..6 {
                    out.push(triplet(row_x + dofs[i], col_x + dofs[j], wd * g[i][0] * g[j][0]));
                    out.push(triplet(row_x + dofs[i], col_y + dofs[j], wd * g[i][0] * g[j][1]));
                    out.push(triplet(row_y + dofs[i], col_x + dofs[j], wd * g[i][1] * g[j][0]));
                    out.push(triplet(row_y + dofs[i], col_y + dofs[j], wd * g[i][1] * g[j][1]));
                }
            }
        }
    }
}

/// scale * (div u, psi) with quadratic u (columns) and linear psi (rows).
pub fn add_div_p2_p1(
    out: &mut Vec<Triplet>,
    mesh: &TriMesh,
    p2: &P2Map,
    order: usize,
    scale: f64,
    row_off: usize,
    col_x: usize,
    col_y: usize,
) {
    let rule = tri_rule(order);
    for t in 0..mesh.n_tris() {
        let geom = TriGeom::new(&mesh.tri_coords(t));
        let udofs = p2.dofs(t);
        let pdofs = mesh.tris[t];
        for &(x, y, w) in &rule {
            let wd = w * geom.det * scale;
            let psi = p1_tri_values(x, y);
            let g: Vec<[f64; 2]> = p2_tri_grads(x, y)
                .into_iter()
                .map(|g| geom.phys_grad(g))
                .collect();
            for i in 0..3 {
                for j in 0..6 {
                    out.push(triplet(row_off + pdofs[i], col_x + udofs[j], wd * psi[i] * g[j][0]));
                    out.push(triplet(row_off + pdofs[i], col_y + udofs[j], wd * psi[i] * g[j][1]));
                }
            }
        }
    }
}

/// scale * (div u, s) with quadratic u (columns) and linear s on the same
/// mesh but a shifted dof block (rows); alias of [`add_div_p2_p1`] kept for
/// call-site clarity in the bulk wall assembly.
pub fn add_div_p2_p1_rows(
    out: &mut Vec<Triplet>,
    mesh: &TriMesh,
    p2: &P2Map,
    order: usize,
    scale: f64,
    row_off: usize,
    col_x: usize,
    col_y: usize,
) {
    add_div_p2_p1(out, mesh, p2, order, scale, row_off, col_x, col_y);
}

// ---------------------------------------------------------------------------
// Point evaluation

/// Evaluate a linear field at a point (clamped into the mesh rectangle).
pub fn eval_p1(mesh: &TriMesh, vals: &[f64], x: f64, y: f64) -> f64 {
    let t = mesh.locate(x, y);
    let geom = TriGeom::new(&mesh.tri_coords(t));
    let (xi, eta) = geom.ref_coords([x, y]);
    let n = p1_tri_values(xi, eta);
    let dofs = mesh.tris[t];
    (0..3).map(|i| vals[dofs[i]] * n[i]).sum()
}

/// Evaluate a quadratic field at a point (clamped into the mesh rectangle).
pub fn eval_p2(mesh: &TriMesh, p2: &P2Map, coeffs: &[f64], x: f64, y: f64) -> f64 {
    let t = mesh.locate(x, y);
    let geom = TriGeom::new(&mesh.tri_coords(t));
    let (xi, eta) = geom.ref_coords([x, y]);
    let n = p2_tri_values(xi, eta);
    let dofs = p2.dofs(t);
    (0..6).map(|i| coeffs[dofs[i]] * n[i]).sum()
}

/// Evaluate a Hermite field at a point; coefficients alternate value and
/// physical slope per grid vertex.
pub fn eval_hermite(grid: &IntervalMesh, coeffs: &[f64], x: f64) -> f64 {
    let h = grid.h();
    let fx = ((x - grid.x0) / h).clamp(0.0, grid.n as f64);
    // The right endpoint lands in the last cell with t = 1 exactly.
    let e = (fx.floor() as usize).min(grid.n - 1);
    let t = fx - e as f64;
    let n = hermite_values(t);
    let d = hermite_dofs(e);
    coeffs[d[0]] * n[0] + coeffs[d[1]] * h * n[1] + coeffs[d[2]] * n[2] + coeffs[d[3]] * h * n[3]
}

/// Evaluate a piecewise-linear interface field at a point.
pub fn eval_p1_interval(grid: &IntervalMesh, vals: &[f64], x: f64) -> f64 {
    let h = grid.h();
    let fx = ((x - grid.x0) / h).clamp(0.0, grid.n as f64);
    let e = (fx.floor() as usize).min(grid.n - 1);
    let t = fx - e as f64;
    vals[e] * (1.0 - t) + vals[e + 1] * t
}

/// Hermite coefficients interpolating a function with known derivative.
pub fn hermite_interpolate(
    grid: &IntervalMesh,
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
) -> Vec<f64> {
    let mut coeffs = Vec::with_capacity(2 * grid.n_verts());
    for &x in &grid.verts {
        coeffs.push(f(x));
        coeffs.push(df(x));
    }
    coeffs
}
