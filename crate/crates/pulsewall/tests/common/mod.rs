//! Shared toolkit for the dense assembly oracles.
//!
//! Everything here recomputes finite element quantities through routes the
//! library does not use: nodal bases come from solving small Vandermonde
//! systems in shifted monomials, and integrals use tensorized Gauss-Legendre
//! points (collapsed onto triangles), so agreement with the library is a
//! genuine cross-check rather than the same arithmetic twice.

#![allow(dead_code)]

pub mod oracles;

use pulsewall::fem::{Csr, Triplet};

// ---------------------------------------------------------------------------
// Dense matrices

pub struct Dense {
    pub nr: usize,
    pub nc: usize,
    v: Vec<f64>,
}

impl Dense {
    pub fn new(nr: usize, nc: usize) -> Dense {
        Dense {
            nr,
            nc,
            v: vec![0.0; nr * nc],
        }
    }

    pub fn add(&mut self, i: usize, j: usize, val: f64) {
        self.v[i * self.nc + j] += val;
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.v[i * self.nc + j]
    }

    pub fn from_triplets(nr: usize, nc: usize, trips: &[Triplet]) -> Dense {
        let mut d = Dense::new(nr, nc);
        for t in trips {
            d.add(t.row, t.col, t.val);
        }
        d
    }

    pub fn from_csr(a: &Csr) -> Dense {
        let mut d = Dense::new(a.nrows, a.ncols);
        for (i, row) in a.to_dense().into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                d.add(i, j, v);
            }
        }
        d
    }

    pub fn max_abs(&self) -> f64 {
        self.v.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Entrywise comparison at `rel` times the larger matrix magnitude.
pub fn assert_close_mats(label: &str, lib: &Dense, orc: &Dense, rel: f64) {
    assert_eq!((lib.nr, lib.nc), (orc.nr, orc.nc), "{label}: shape mismatch");
    let scale = lib.max_abs().max(orc.max_abs());
    assert!(scale > 0.0, "{label}: both matrices are zero");
    let tol = rel * scale;
    let mut worst = (0.0f64, 0usize, 0usize);
    for i in 0..lib.nr {
        for j in 0..lib.nc {
            let d = (lib.at(i, j) - orc.at(i, j)).abs();
            if d > worst.0 {
                worst = (d, i, j);
            }
        }
    }
    assert!(
        worst.0 <= tol,
        "{label}: entry ({}, {}) differs by {:e} (library {:e}, oracle {:e}, scale {:e})",
        worst.1,
        worst.2,
        worst.0,
        lib.at(worst.1, worst.2),
        orc.at(worst.1, worst.2),
        scale
    );
}

pub fn assert_close_vecs(label: &str, lib: &[f64], orc: &[f64], rel: f64) {
    assert_eq!(lib.len(), orc.len(), "{label}: length mismatch");
    let scale = lib
        .iter()
        .chain(orc)
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    for (i, (a, b)) in lib.iter().zip(orc).enumerate() {
        assert!(
            (a - b).abs() <= rel * scale,
            "{label}[{i}]: library {a:e} vs oracle {b:e}"
        );
    }
}

// ---------------------------------------------------------------------------
// Quadrature

/// Six-point Gauss-Legendre rule on [0, 1].
pub fn gl6_unit() -> [(f64, f64); 6] {
    const X: [f64; 3] = [
        0.238619186083196909,
        0.661209386466264514,
        0.932469514203152028,
    ];
    const W: [f64; 3] = [
        0.467913934572691047,
        0.360761573048138608,
        0.171324492379170345,
    ];
    let mut out = [(0.0, 0.0); 6];
    for i in 0..3 {
        out[2 * i] = (0.5 * (1.0 - X[i]), 0.5 * W[i]);
        out[2 * i + 1] = (0.5 * (1.0 + X[i]), 0.5 * W[i]);
    }
    out
}

/// Physical quadrature on a triangle: the unit square collapsed onto the
/// triangle, 36 points, exact well beyond every form in the library.
pub fn tri_quad(v: &[[f64; 2]; 3]) -> Vec<([f64; 2], f64)> {
    let gl = gl6_unit();
    let det = (v[1][0] - v[0][0]) * (v[2][1] - v[0][1])
        - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]);
    let mut pts = Vec::with_capacity(36);
    for &(a, wa) in &gl {
        for &(b, wb) in &gl {
            let xi = a * (1.0 - b);
            let eta = a * b;
            let p = [
                v[0][0] + xi * (v[1][0] - v[0][0]) + eta * (v[2][0] - v[0][0]),
                v[0][1] + xi * (v[1][1] - v[0][1]) + eta * (v[2][1] - v[0][1]),
            ];
            pts.push((p, wa * wb * a * det));
        }
    }
    pts
}

/// Physical quadrature along a segment; weights carry the segment length.
pub fn seg_quad(a: [f64; 2], b: [f64; 2]) -> Vec<([f64; 2], f64)> {
    let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    gl6_unit()
        .iter()
        .map(|&(t, w)| {
            (
                [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])],
                w * len,
            )
        })
        .collect()
}

/// Quadrature on a 1D interval.
pub fn int_quad(xa: f64, xb: f64) -> Vec<(f64, f64)> {
    gl6_unit()
        .iter()
        .map(|&(t, w)| (xa + t * (xb - xa), w * (xb - xa)))
        .collect()
}

// ---------------------------------------------------------------------------
// Small dense inverse

/// Invert a small row-major matrix by Gauss-Jordan with partial pivoting.
pub fn invert(n: usize, mut a: Vec<f64>) -> Vec<f64> {
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&r, &s| {
                a[r * n + col]
                    .abs()
                    .partial_cmp(&a[s * n + col].abs())
                    .unwrap()
            })
            .unwrap();
        assert!(a[piv * n + col].abs() > 1e-14, "singular nodal system");
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
                inv.swap(col * n + j, piv * n + j);
            }
        }
        let d = a[col * n + col];
        for j in 0..n {
            a[col * n + j] /= d;
            inv[col * n + j] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = a[r * n + col];
                if f != 0.0 {
                    for j in 0..n {
                        a[r * n + j] -= f * a[col * n + j];
                        inv[r * n + j] -= f * inv[col * n + j];
                    }
                }
            }
        }
    }
    inv
}

// ---------------------------------------------------------------------------
// Nodal bases from Vandermonde solves

fn monomials2(n: usize, x: f64, y: f64) -> Vec<f64> {
    match n {
        3 => vec![1.0, x, y],
        6 => vec![1.0, x, y, x * x, x * y, y * y],
        _ => panic!("unsupported 2D basis size {n}"),
    }
}

fn monomial_grads2(n: usize, x: f64, y: f64) -> Vec<[f64; 2]> {
    match n {
        3 => vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
        6 => vec![
            [0.0, 0.0],
            [1.0, 0.0],
            [0.0, 1.0],
            [2.0 * x, 0.0],
            [y, x],
            [0.0, 2.0 * y],
        ],
        _ => panic!("unsupported 2D basis size {n}"),
    }
}

/// Polynomial nodal basis on `n` plane points (3 linear, 6 quadratic).
/// Coordinates are shifted and scaled per axis before the Vandermonde solve
/// so the inverse stays well conditioned on slender cells.
pub struct NodalBasis2 {
    n: usize,
    cx: f64,
    cy: f64,
    sx: f64,
    sy: f64,
    /// coef[k][j]: coefficient of monomial j in basis function k.
    coef: Vec<f64>,
}

impl NodalBasis2 {
    pub fn from_nodes(nodes: &[[f64; 2]]) -> NodalBasis2 {
        let n = nodes.len();
        let cx = nodes.iter().map(|p| p[0]).sum::<f64>() / n as f64;
        let cy = nodes.iter().map(|p| p[1]).sum::<f64>() / n as f64;
        let spread = |f: &dyn Fn(&[f64; 2]) -> f64| {
            nodes
                .iter()
                .map(|p| f(p).abs())
                .fold(0.0f64, f64::max)
                .max(1e-300)
        };
        let sx = spread(&|p| p[0] - cx);
        let sy = spread(&|p| p[1] - cy);
        let mut v = vec![0.0; n * n];
        for (i, p) in nodes.iter().enumerate() {
            let m = monomials2(n, (p[0] - cx) / sx, (p[1] - cy) / sy);
            v[i * n..(i + 1) * n].copy_from_slice(&m);
        }
        // Row k of the inverse holds the coefficients of basis k.
        let inv = invert(n, v);
        let mut coef = vec![0.0; n * n];
        for k in 0..n {
            for j in 0..n {
                coef[k * n + j] = inv[j * n + k];
            }
        }
        NodalBasis2 {
            n,
            cx,
            cy,
            sx,
            sy,
            coef,
        }
    }

    pub fn eval(&self, k: usize, p: [f64; 2]) -> f64 {
        let m = monomials2(
            self.n,
            (p[0] - self.cx) / self.sx,
            (p[1] - self.cy) / self.sy,
        );
        m.iter()
            .zip(&self.coef[k * self.n..(k + 1) * self.n])
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn grad(&self, k: usize, p: [f64; 2]) -> [f64; 2] {
        let g = monomial_grads2(
            self.n,
            (p[0] - self.cx) / self.sx,
            (p[1] - self.cy) / self.sy,
        );
        let mut out = [0.0; 2];
        for (j, gj) in g.iter().enumerate() {
            let c = self.coef[k * self.n + j];
            out[0] += c * gj[0] / self.sx;
            out[1] += c * gj[1] / self.sy;
        }
        out
    }
}

/// Cubic Hermite basis on a 1D cell, built from value and physical-slope
/// conditions at both ends; dofs ordered (value, slope, value, slope).
pub struct HermiteBasis {
    c: f64,
    s: f64,
    /// coef[k][j]: coefficient of ((x - c)/s)^j in basis k.
    coef: [[f64; 4]; 4],
}

impl HermiteBasis {
    pub fn new(xa: f64, xb: f64) -> HermiteBasis {
        let c = 0.5 * (xa + xb);
        let s = 0.5 * (xb - xa);
        let mut v = vec![0.0; 16];
        for (r, &x) in [xa, xb].iter().enumerate() {
            let t = (x - c) / s;
            // Value row, then physical-derivative row.
            let vals = [1.0, t, t * t, t * t * t];
            let ders = [0.0, 1.0 / s, 2.0 * t / s, 3.0 * t * t / s];
            v[(2 * r) * 4..(2 * r) * 4 + 4].copy_from_slice(&vals);
            v[(2 * r + 1) * 4..(2 * r + 1) * 4 + 4].copy_from_slice(&ders);
        }
        let inv = invert(4, v);
        let mut coef = [[0.0; 4]; 4];
        for k in 0..4 {
            for j in 0..4 {
                coef[k][j] = inv[j * 4 + k];
            }
        }
        HermiteBasis { c, s, coef }
    }

    pub fn eval(&self, k: usize, x: f64) -> f64 {
        let t = (x - self.c) / self.s;
        let m = [1.0, t, t * t, t * t * t];
        (0..4).map(|j| self.coef[k][j] * m[j]).sum()
    }

    pub fn d2(&self, k: usize, x: f64) -> f64 {
        let t = (x - self.c) / self.s;
        let m2 = [0.0, 0.0, 2.0, 6.0 * t];
        (0..4).map(|j| self.coef[k][j] * m2[j]).sum::<f64>() / (self.s * self.s)
    }
}

/// Linear nodal basis on a 1D cell.
pub struct LinearBasis {
    xa: f64,
    xb: f64,
}

impl LinearBasis {
    pub fn new(xa: f64, xb: f64) -> LinearBasis {
        LinearBasis { xa, xb }
    }

    pub fn eval(&self, k: usize, x: f64) -> f64 {
        let t = (x - self.xa) / (self.xb - self.xa);
        if k == 0 {
            1.0 - t
        } else {
            t
        }
    }
}

// ---------------------------------------------------------------------------
// Vector calculus helpers

/// 2 D(e_a phi) : D(e_b psi) for gradients `ga`, `gb` of the scalar factors.
pub fn sym_grad_pair(a: usize, ga: [f64; 2], b: usize, gb: [f64; 2]) -> f64 {
    let d = |comp: usize, g: [f64; 2]| {
        let mut t = [[0.0; 2]; 2];
        for l in 0..2 {
            t[l][comp] += 0.5 * g[l];
            t[comp][l] += 0.5 * g[l];
        }
        t
    };
    let da = d(a, ga);
    let db = d(b, gb);
    let mut acc = 0.0;
    for l in 0..2 {
        for m in 0..2 {
            acc += da[l][m] * db[l][m];
        }
    }
    2.0 * acc
}

/// Local quadratic nodal basis of one mesh triangle, nodes in the library's
/// local dof order.
pub fn tri_p2_basis(
    p2: &pulsewall::fem::P2Map,
    coords: &[[f64; 2]],
    tri: usize,
) -> (NodalBasis2, [usize; 6]) {
    let dofs = p2.dofs(tri);
    let nodes: Vec<[f64; 2]> = dofs.iter().map(|&d| coords[d]).collect();
    (NodalBasis2::from_nodes(&nodes), dofs)
}

/// Local linear nodal basis of one mesh triangle with its vertex dofs.
pub fn tri_p1_basis(mesh: &pulsewall::mesh::TriMesh, tri: usize) -> (NodalBasis2, [usize; 3]) {
    let vs = mesh.tris[tri];
    let nodes: Vec<[f64; 2]> = vs.iter().map(|&v| mesh.verts[v]).collect();
    (NodalBasis2::from_nodes(&nodes), vs)
}
