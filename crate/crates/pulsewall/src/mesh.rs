//! Structured triangle meshes on axis-aligned rectangles, plus the matching
//! 1D interval meshes used on the channel interface.
//!
//! Every quad of the nx-by-ny grid is split along its lower-left to
//! upper-right diagonal, so meshes are fully determined by the resolution and
//! the ordering below is reproducible run to run:
//!
//! - vertex (i, j) has index `j * (nx + 1) + i`,
//! - quad (i, j) yields triangles `2 * (j * nx + i)` and `2 * (j * nx + i) + 1`,
//! - boundary facets walk the boundary counterclockwise starting from the
//!   bottom-left corner.
//!
//! Boundary facets keep their counterclockwise orientation, so the outward
//! unit normal is the tangent rotated by -90 degrees.

/// Coordinate of gridline `i` of `n` cells spanning [a0, a1]. Endpoints are
/// returned exactly, which keeps interface nodes of independently built 1D
/// and 2D meshes bitwise equal.
pub fn grid_coord(a0: f64, a1: f64, n: usize, i: usize) -> f64 {
    if i == 0 {
        a0
    } else if i == n {
        a1
    } else {
        a0 + (a1 - a0) * (i as f64) / (n as f64)
    }
}

/// Labels for the pieces of a mesh boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryTag {
    /// Fluid inflow end (x = 0).
    Inlet,
    /// Fluid outflow end (x = l).
    Outlet,
    /// Channel centerline treated as a symmetry plane (y = -r_f).
    Symmetry,
    /// Fluid side of the fluid-wall interface (y = 0).
    InterfaceMinus,
    /// Outer face of the bulk wall (y = h).
    InterfacePlus,
    /// Clamped wall end at x = 0.
    StructLeft,
    /// Clamped wall end at x = l.
    StructRight,
}

/// One boundary edge: its two vertices in counterclockwise boundary order,
/// the unique triangle it borders, and its label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Facet {
    pub verts: [usize; 2],
    pub tri: usize,
    pub tag: BoundaryTag,
}

/// Tags for the four sides of a rectangle, in the order bottom, right, top,
/// left.
#[derive(Debug, Clone, Copy)]
pub struct SideTags {
    pub bottom: BoundaryTag,
    pub right: BoundaryTag,
    pub top: BoundaryTag,
    pub left: BoundaryTag,
}

/// Structured triangle mesh of [x0, x1] x [y0, y1].
#[derive(Debug, Clone)]
pub struct TriMesh {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub verts: Vec<[f64; 2]>,
    /// Vertex triples, all counterclockwise.
    pub tris: Vec<[usize; 3]>,
    pub facets: Vec<Facet>,
}

impl TriMesh {
    /// Build the mesh. Panics if a resolution is zero or an extent is empty;
    /// configs are validated before meshes are built.
    pub fn rectangle(
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        nx: usize,
        ny: usize,
        tags: SideTags,
    ) -> TriMesh {
        assert!(nx > 0 && ny > 0, "mesh needs at least one cell per side");
        assert!(x1 > x0 && y1 > y0, "mesh extents must be nonempty");
        let mut verts = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            let y = grid_coord(y0, y1, ny, j);
            for i in 0..=nx {
                verts.push([grid_coord(x0, x1, nx, i), y]);
            }
        }
        let vid = |i: usize, j: usize| j * (nx + 1) + i;
        let mut tris = Vec::with_capacity(2 * nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let a = vid(i, j);
                let b = vid(i + 1, j);
                let c = vid(i + 1, j + 1);
                let d = vid(i, j + 1);
                tris.push([a, b, c]);
                tris.push([a, c, d]);
            }
        }
        let quad = |i: usize, j: usize| 2 * (j * nx + i);
        let mut facets = Vec::with_capacity(2 * (nx + ny));
        for i in 0..nx {
            facets.push(Facet {
                verts: [vid(i, 0), vid(i + 1, 0)],
                tri: quad(i, 0),
                tag: tags.bottom,
            });
        }
        for j in 0..ny {
            facets.push(Facet {
                verts: [vid(nx, j), vid(nx, j + 1)],
                tri: quad(nx - 1, j),
                tag: tags.right,
            });
        }
        for i in (0..nx).rev() {
            facets.push(Facet {
                verts: [vid(i + 1, ny), vid(i, ny)],
                tri: quad(i, ny - 1) + 1,
                tag: tags.top,
            });
        }
        for j in (0..ny).rev() {
            facets.push(Facet {
                verts: [vid(0, j + 1), vid(0, j)],
                tri: quad(0, j) + 1,
                tag: tags.left,
            });
        }
        TriMesh {
            nx,
            ny,
            x0,
            x1,
            y0,
            y1,
            verts,
            tris,
            facets,
        }
    }

    /// Fluid channel [0, l] x [-r_f, 0]: inlet left, outlet right, symmetry
    /// plane below, interface above.
    pub fn fluid_channel(l: f64, r_f: f64, nx: usize, ny: usize) -> TriMesh {
        TriMesh::rectangle(
            0.0,
            l,
            -r_f,
            0.0,
            nx,
            ny,
            SideTags {
                bottom: BoundaryTag::Symmetry,
                right: BoundaryTag::Outlet,
                top: BoundaryTag::InterfaceMinus,
                left: BoundaryTag::Inlet,
            },
        )
    }

    /// Bulk wall layer [0, l] x [0, h]: interface below, outer face above,
    /// clamped ends left and right.
    pub fn wall_layer(l: f64, h: f64, nx: usize, ny: usize) -> TriMesh {
        TriMesh::rectangle(
            0.0,
            l,
            0.0,
            h,
            nx,
            ny,
            SideTags {
                bottom: BoundaryTag::InterfaceMinus,
                right: BoundaryTag::StructRight,
                top: BoundaryTag::InterfacePlus,
                left: BoundaryTag::StructLeft,
            },
        )
    }

    pub fn n_verts(&self) -> usize {
        self.verts.len()
    }

    pub fn n_tris(&self) -> usize {
        self.tris.len()
    }

    pub fn vertex_index(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 1) + i
    }

    pub fn hx(&self) -> f64 {
        (self.x1 - self.x0) / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        (self.y1 - self.y0) / self.ny as f64
    }

    /// Corner coordinates of triangle `t`.
    pub fn tri_coords(&self, t: usize) -> [[f64; 2]; 3] {
        let [a, b, c] = self.tris[t];
        [self.verts[a], self.verts[b], self.verts[c]]
    }

    /// Signed area of triangle `t`; positive for the counterclockwise
    /// orientation this mesh guarantees.
    pub fn tri_area(&self, t: usize) -> f64 {
        let [p, q, r] = self.tri_coords(t);
        0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))
    }

    pub fn facet_length(&self, f: &Facet) -> f64 {
        let a = self.verts[f.verts[0]];
        let b = self.verts[f.verts[1]];
        ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
    }

    pub fn facet_midpoint(&self, f: &Facet) -> [f64; 2] {
        let a = self.verts[f.verts[0]];
        let b = self.verts[f.verts[1]];
        [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
    }

    /// Outward unit normal of a boundary facet.
    pub fn facet_normal(&self, f: &Facet) -> [f64; 2] {
        let a = self.verts[f.verts[0]];
        let b = self.verts[f.verts[1]];
        let tx = b[0] - a[0];
        let ty = b[1] - a[1];
        let len = (tx * tx + ty * ty).sqrt();
        [ty / len, -tx / len]
    }

    /// Facets carrying `tag`, sorted by midpoint (x, then y) so iteration
    /// order never depends on construction order.
    pub fn facets_with_tag(&self, tag: BoundaryTag) -> Vec<Facet> {
        let mut out: Vec<Facet> = self
            .facets
            .iter()
            .copied()
            .filter(|f| f.tag == tag)
            .collect();
        out.sort_by(|p, q| {
            let mp = self.facet_midpoint(p);
            let mq = self.facet_midpoint(q);
            mp.partial_cmp(&mq).unwrap()
        });
        out
    }

    /// Triangle containing the point, with coordinates clamped into the
    /// rectangle first. Constant time thanks to the structured layout.
    pub fn locate(&self, x: f64, y: f64) -> usize {
        let fx = ((x - self.x0) / self.hx()).clamp(0.0, self.nx as f64);
        let fy = ((y - self.y0) / self.hy()).clamp(0.0, self.ny as f64);
        let i = (fx.floor() as usize).min(self.nx - 1);
        let j = (fy.floor() as usize).min(self.ny - 1);
        let s = fx - i as f64;
        let t = fy - j as f64;
        // The diagonal runs from the quad's lower-left to upper-right corner;
        // below it (t <= s) lies the first triangle of the pair.
        let base = 2 * (j * self.nx + i);
        if t <= s {
            base
        } else {
            base + 1
        }
    }
}

/// Uniform mesh of the interval [x0, x1], matching the gridlines of a
/// [`TriMesh`] with the same extent and cell count.
#[derive(Debug, Clone)]
pub struct IntervalMesh {
    pub x0: f64,
    pub x1: f64,
    pub n: usize,
    pub verts: Vec<f64>,
}

impl IntervalMesh {
    pub fn uniform(x0: f64, x1: f64, n: usize) -> IntervalMesh {
        assert!(n > 0, "interval mesh needs at least one cell");
        assert!(x1 > x0, "interval must be nonempty");
        let verts = (0..=n).map(|i| grid_coord(x0, x1, n, i)).collect();
        IntervalMesh { x0, x1, n, verts }
    }

    pub fn n_verts(&self) -> usize {
        self.n + 1
    }

    /// Endpoint coordinates of cell `e`.
    pub fn cell(&self, e: usize) -> (f64, f64) {
        (self.verts[e], self.verts[e + 1])
    }

    pub fn h(&self) -> f64 {
        (self.x1 - self.x0) / self.n as f64
    }
}
