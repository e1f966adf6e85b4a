//! Channel flow coupled to a poroelastic plate on the interface.
//!
//! The wall is reduced to a Kirchhoff-type plate carrying transverse
//! displacement w, its velocity v, the pore pressure jump across the
//! thickness, and the thickness-averaged pore pressure. The fluid is
//! time-dependent Stokes in the channel below. One implicit Euler step
//! solves the fully coupled system for (u, pi, v, jump, qbar); w is
//! eliminated through w(t+dt) = w(t) + dt v(t+dt), which makes the system
//! matrix constant over a run, so it is factored once.
//!
//! Coupling on the interface: the fluid feels the normal traction
//! (jump - q_plus) and the tangential slip resistance -beta (u.tau); the
//! plate pore pressures feel the fluid through the filtration condition
//! u.n - v entering the jump equation. The outer pore pressure q_plus is
//! zero throughout. The resulting step obeys a discrete energy inequality
//! with dissipation from viscosity, slip, and interfacial filtration.

use crate::config::{
    derive_plate_coefficients, inlet_pressure, ConfigError, PlateCoeffs, SimConfig,
};
use crate::diagnostics::{EnergyBudget, InterfaceProfile};
use crate::fem::{
    add_div_p2_p1, add_mass_p2, add_sym_grad_p2, gauss_interval, hermite_d2, hermite_dofs,
    hermite_values, impose_identity_rows, p1_int_values, p2_tri_values, triplet, zero_fixed, Csr,
    P2Map, TriGeom, Triplet, INT_ORDER, TRI_ORDER,
};
use crate::linsolve::{SolveError, SparseLu, SOLVE_TOL};
use crate::mesh::{BoundaryTag, IntervalMesh, TriMesh};
use crate::ModelError;

/// Dof block layout: fluid velocity components, fluid pressure, plate
/// velocity (Hermite pairs), pressure jump, averaged pressure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlateLayout {
    /// Dofs per fluid velocity component.
    pub n_u: usize,
    /// Fluid pressure dofs.
    pub n_p: usize,
    /// Plate Hermite dofs (two per interface vertex).
    pub n_h: usize,
    /// Interface linear dofs (one per interface vertex).
    pub n_i: usize,
}

impl PlateLayout {
    pub fn ox(&self) -> usize {
        0
    }
    pub fn oy(&self) -> usize {
        self.n_u
    }
    pub fn op(&self) -> usize {
        2 * self.n_u
    }
    pub fn ov(&self) -> usize {
        2 * self.n_u + self.n_p
    }
    pub fn oj(&self) -> usize {
        self.ov() + self.n_h
    }
    pub fn ob(&self) -> usize {
        self.oj() + self.n_i
    }
    pub fn n(&self) -> usize {
        self.ob() + self.n_i
    }
}

/// Operators kept after assembly for right-hand sides and energy accounting.
#[derive(Debug, Clone)]
pub struct PlateOps {
    /// Scalar velocity-space mass matrix (applied per component).
    pub m_u: Csr,
    /// mu_f * 2 (D(u), D(phi)) over both components; its quadratic form is
    /// the viscous dissipation rate.
    pub a_visc: Csr,
    /// beta (u.tau, phi.tau) on the interface over both components.
    pub b_bjs: Csr,
    /// Hermite mass on the interface grid.
    pub m_h: Csr,
    /// Hermite bending stiffness (w'', phi'').
    pub k_bend: Csr,
    /// Linear interface mass.
    pub m_i: Csr,
    /// Inlet load: l[i] = integral of (phi_i . n) over the inlet, so the
    /// momentum right-hand side is P_in(t) * l and the boundary power is
    /// P_in(t) * (l . u).
    pub inlet_load: Vec<f64>,
}

/// Assembled but unconstrained system, exposed so tests can compare the raw
/// matrix against independently computed local contributions.
pub struct PlateAssembly {
    pub mesh: TriMesh,
    pub p2: P2Map,
    pub grid: IntervalMesh,
    pub coeffs: PlateCoeffs,
    pub layout: PlateLayout,
    /// Raw system triplets before boundary rows are replaced.
    pub trips: Vec<Triplet>,
    /// Dofs pinned to zero: wall-normal velocity on the symmetry plane and
    /// clamped plate values and slopes at both ends.
    pub fixed: Vec<bool>,
    pub ops: PlateOps,
}

/// Solution at one time level. `p` is the pressure computed by the step that
/// produced this state; it is all zeros at t = 0 where the Stokes pressure is
/// not yet defined.
#[derive(Debug, Clone, PartialEq)]
pub struct PlateState {
    pub t: f64,
    /// Fluid velocity, x block then y block.
    pub u: Vec<f64>,
    /// Fluid pressure at the vertices.
    pub p: Vec<f64>,
    /// Plate displacement (Hermite value/slope pairs).
    pub w: Vec<f64>,
    /// Plate velocity (Hermite value/slope pairs).
    pub v: Vec<f64>,
    /// Pore pressure jump at the interface vertices.
    pub jump: Vec<f64>,
    /// Thickness-averaged pore pressure at the interface vertices.
    pub qbar: Vec<f64>,
}

/// Assemble the coupled plate system for a validated configuration.
pub fn assemble(cfg: &SimConfig) -> Result<PlateAssembly, ConfigError> {
    cfg.validate()?;
    let coeffs = derive_plate_coefficients(&cfg.biot)?;
    let geom = cfg.geometry;
    let mesh = TriMesh::fluid_channel(geom.l, geom.r_f, cfg.nx_f, cfg.ny_f);
    let p2 = P2Map::build(&mesh);
    let grid = IntervalMesh::uniform(0.0, geom.l, cfg.nx_f);
    let layout = PlateLayout {
        n_u: p2.n_dofs(),
        n_p: mesh.n_verts(),
        n_h: 2 * grid.n_verts(),
        n_i: grid.n_verts(),
    };
    let (n_u, ox, oy, op, ov, oj, ob) = (
        layout.n_u,
        layout.ox(),
        layout.oy(),
        layout.op(),
        layout.ov(),
        layout.oj(),
        layout.ob(),
    );
    let dt = cfg.dt;
    let hw = geom.h;
    let rho = cfg.fluid.rho_f;
    let mu = cfg.fluid.mu_f;
    let beta = cfg.fluid.beta;
    let c = coeffs;

    let mut trips: Vec<Triplet> = Vec::new();

    // Fluid momentum: mass and viscous blocks.
    add_mass_p2(&mut trips, &mesh, &p2, TRI_ORDER, rho / dt, ox, ox);
    add_mass_p2(&mut trips, &mesh, &p2, TRI_ORDER, rho / dt, oy, oy);
    let mut visc = Vec::new();
    add_sym_grad_p2(&mut visc, &mesh, &p2, TRI_ORDER, mu, 0, n_u, 0, n_u);
    trips.extend_from_slice(&visc);
    let a_visc = Csr::from_triplets(2 * n_u, 2 * n_u, visc);

    // Incompressibility and its pressure-gradient transpose.
    let mut div = Vec::new();
    add_div_p2_p1(&mut div, &mesh, &p2, TRI_ORDER, 1.0, 0, 0, n_u);
    for t in &div {
        trips.push(triplet(op + t.row, t.col, t.val));
        trips.push(triplet(t.col, op + t.row, -t.val));
    }

    // Interface terms on the shared fluid/plate gridlines.
    let gauss = gauss_interval(INT_ORDER);
    let ifacets = mesh.facets_with_tag(BoundaryTag::InterfaceMinus);
    assert_eq!(ifacets.len(), grid.n);
    let mut bjs: Vec<Triplet> = Vec::new();
    for (e, f) in ifacets.iter().enumerate() {
        let (xa, xb) = grid.cell(e);
        let len = xb - xa;
        let nrm = mesh.facet_normal(f);
        let tau = [nrm[1], -nrm[0]];
        let tg = TriGeom::new(&mesh.tri_coords(f.tri));
        let dofs = p2.dofs(f.tri);
        debug_assert!((mesh.facet_midpoint(f)[0] - 0.5 * (xa + xb)).abs() < 1e-12 * geom.l);
        for &(t, wq) in &gauss {
            let (xi, eta) = tg.ref_coords([xa + t * len, mesh.y1]);
            let nv = p2_tri_values(xi, eta);
            let s = p1_int_values(t);
            let w = wq * len;
            // Slip resistance beta (u.tau)(phi.tau).
            for i in 0..6 {
                for k in 0..6 {
                    let base = w * beta * nv[i] * nv[k];
                    for (ri, ti) in [(0, tau[0]), (n_u, tau[1])] {
                        for (cj, tj) in [(0, tau[0]), (n_u, tau[1])] {
                            if ti != 0.0 && tj != 0.0 {
                                bjs.push(triplet(ri + dofs[i], cj + dofs[k], base * ti * tj));
                            }
                        }
                    }
                }
            }
            // Pressure-jump traction on the fluid and the filtration
            // condition (u.n - v) feeding the jump row.
            for k in 0..2 {
                let jd = oj + e + k;
                for i in 0..6 {
                    for (off, nc) in [(ox, nrm[0]), (oy, nrm[1])] {
                        if nc != 0.0 {
                            let val = w * s[k] * nv[i] * nc;
                            trips.push(triplet(off + dofs[i], jd, -val));
                            trips.push(triplet(jd, off + dofs[i], val));
                        }
                    }
                }
            }
        }
    }
    trips.extend_from_slice(&bjs);
    let b_bjs = Csr::from_triplets(2 * n_u, 2 * n_u, bjs);

    // Inlet traction load.
    let mut inlet_load = vec![0.0; 2 * n_u];
    for f in mesh.facets_with_tag(BoundaryTag::Inlet) {
        let a = mesh.verts[f.verts[0]];
        let b = mesh.verts[f.verts[1]];
        let len = mesh.facet_length(&f);
        let nrm = mesh.facet_normal(&f);
        let tg = TriGeom::new(&mesh.tri_coords(f.tri));
        let dofs = p2.dofs(f.tri);
        for &(t, wq) in &gauss {
            let p = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            let (xi, eta) = tg.ref_coords(p);
            let nv = p2_tri_values(xi, eta);
            for i in 0..6 {
                inlet_load[dofs[i]] += wq * len * nv[i] * nrm[0];
                inlet_load[n_u + dofs[i]] += wq * len * nv[i] * nrm[1];
            }
        }
    }

    // Plate and pore blocks on the interface grid.
    let hh = grid.h();
    let scale = [1.0, hh, 1.0, hh];
    let mut mh: Vec<Triplet> = Vec::new();
    let mut kb: Vec<Triplet> = Vec::new();
    let mut mi: Vec<Triplet> = Vec::new();
    for e in 0..grid.n {
        let hd = hermite_dofs(e);
        for &(t, wq) in &gauss {
            let w = wq * hh;
            let nv = hermite_values(t);
            let d2 = hermite_d2(t);
            let s = p1_int_values(t);
            let mut phys = [0.0; 4];
            let mut dd = [0.0; 4];
            for i in 0..4 {
                phys[i] = nv[i] * scale[i];
                dd[i] = d2[i] * scale[i] / (hh * hh);
            }
            for i in 0..4 {
                for k in 0..4 {
                    mh.push(triplet(hd[i], hd[k], w * phys[i] * phys[k]));
                    kb.push(triplet(hd[i], hd[k], w * dd[i] * dd[k]));
                }
            }
            for i in 0..2 {
                for k in 0..2 {
                    mi.push(triplet(e + i, e + k, w * s[i] * s[k]));
                }
            }
            // Plate row: the jump both loads the plate and, through the
            // reduced elastic coupling, bends with it; the jump row carries
            // the exact negative transpose, which is what cancels these
            // exchanges in the energy identity.
            for i in 0..4 {
                for k in 0..2 {
                    let val =
                        w * s[k] * (phys[i] + dd[i] * hw * hw * c.alpha_p / 12.0);
                    trips.push(triplet(ov + hd[i], oj + e + k, val));
                    trips.push(triplet(oj + e + k, ov + hd[i], -val));
                }
            }
        }
    }
    for t in &mh {
        let s = hw * c.rho_p / dt + dt * hw * c.gamma_p;
        trips.push(triplet(ov + t.row, ov + t.col, t.val * s));
    }
    for t in &kb {
        trips.push(triplet(ov + t.row, ov + t.col, t.val * dt * hw.powi(3) * c.d));
    }
    for t in &mi {
        trips.push(triplet(
            oj + t.row,
            oj + t.col,
            t.val * (hw * c.c0_p / (12.0 * dt) + 4.0 * c.kappa_p / hw),
        ));
        trips.push(triplet(oj + t.row, ob + t.col, t.val * 6.0 * c.kappa_p / hw));
        trips.push(triplet(ob + t.row, oj + t.col, t.val * 6.0 * c.kappa_p / hw));
        trips.push(triplet(
            ob + t.row,
            ob + t.col,
            t.val * (hw * c.c0_p / dt + 12.0 * c.kappa_p / hw),
        ));
    }

    let m_u = {
        let mut m = Vec::new();
        add_mass_p2(&mut m, &mesh, &p2, TRI_ORDER, 1.0, 0, 0);
        Csr::from_triplets(n_u, n_u, m)
    };

    let mut fixed = vec![false; layout.n()];
    for f in mesh.facets_with_tag(BoundaryTag::Symmetry) {
        fixed[oy + f.verts[0]] = true;
        fixed[oy + f.verts[1]] = true;
        fixed[oy + p2.edge_dof(f.verts[0], f.verts[1])] = true;
    }
    // Clamped plate: value and slope at both ends.
    fixed[ov] = true;
    fixed[ov + 1] = true;
    fixed[ov + layout.n_h - 2] = true;
    fixed[ov + layout.n_h - 1] = true;

    Ok(PlateAssembly {
        mesh,
        p2,
        grid,
        coeffs,
        layout,
        trips,
        fixed,
        ops: PlateOps {
            m_u,
            a_visc,
            b_bjs,
            m_h: Csr::from_triplets(layout.n_h, layout.n_h, mh),
            k_bend: Csr::from_triplets(layout.n_h, layout.n_h, kb),
            m_i: Csr::from_triplets(layout.n_i, layout.n_i, mi),
            inlet_load,
        },
    })
}

/// The factored plate model, ready to step.
pub struct PlateModel {
    pub cfg: SimConfig,
    pub coeffs: PlateCoeffs,
    pub mesh: TriMesh,
    pub p2: P2Map,
    pub grid: IntervalMesh,
    pub layout: PlateLayout,
    pub ops: PlateOps,
    fixed: Vec<bool>,
    lu: SparseLu,
}

impl PlateModel {
    pub fn new(cfg: &SimConfig) -> Result<PlateModel, ModelError> {
        let asm = assemble(cfg)?;
        let n = asm.layout.n();
        let constrained = impose_identity_rows(asm.trips, &asm.fixed);
        let lu = SparseLu::factor(Csr::from_triplets(n, n, constrained))?;
        Ok(PlateModel {
            cfg: cfg.clone(),
            coeffs: asm.coeffs,
            mesh: asm.mesh,
            p2: asm.p2,
            grid: asm.grid,
            layout: asm.layout,
            ops: asm.ops,
            fixed: asm.fixed,
            lu,
        })
    }

    pub fn zero_state(&self) -> PlateState {
        let l = self.layout;
        PlateState {
            t: 0.0,
            u: vec![0.0; 2 * l.n_u],
            p: vec![0.0; l.n_p],
            w: vec![0.0; l.n_h],
            v: vec![0.0; l.n_h],
            jump: vec![0.0; l.n_i],
            qbar: vec![0.0; l.n_i],
        }
    }

    /// Advance one implicit Euler step.
    pub fn step(&self, s: &PlateState) -> Result<PlateState, SolveError> {
        let l = self.layout;
        let dt = self.cfg.dt;
        let hw = self.cfg.geometry.h;
        let c = self.coeffs;
        let t_new = s.t + dt;
        let mut rhs = vec![0.0; l.n()];

        let (ux, uy) = s.u.split_at(l.n_u);
        let mut tmp = vec![0.0; l.n_u];
        self.ops.m_u.matvec(ux, &mut tmp);
        let ru = self.cfg.fluid.rho_f / dt;
        for i in 0..l.n_u {
            rhs[l.ox() + i] = ru * tmp[i];
        }
        self.ops.m_u.matvec(uy, &mut tmp);
        for i in 0..l.n_u {
            rhs[l.oy() + i] = ru * tmp[i];
        }
        let pin = inlet_pressure(&self.cfg.pulse, t_new);
        if pin != 0.0 {
            for i in 0..2 * l.n_u {
                rhs[i] += pin * self.ops.inlet_load[i];
            }
        }

        let mut th = vec![0.0; l.n_h];
        self.ops.m_h.matvec(&s.v, &mut th);
        for i in 0..l.n_h {
            rhs[l.ov() + i] = hw * c.rho_p / dt * th[i];
        }
        self.ops.m_h.matvec(&s.w, &mut th);
        for i in 0..l.n_h {
            rhs[l.ov() + i] -= hw * c.gamma_p * th[i];
        }
        self.ops.k_bend.matvec(&s.w, &mut th);
        for i in 0..l.n_h {
            rhs[l.ov() + i] -= hw.powi(3) * c.d * th[i];
        }

        let mut ti = vec![0.0; l.n_i];
        self.ops.m_i.matvec(&s.jump, &mut ti);
        for i in 0..l.n_i {
            rhs[l.oj() + i] = hw * c.c0_p / (12.0 * dt) * ti[i];
        }
        self.ops.m_i.matvec(&s.qbar, &mut ti);
        for i in 0..l.n_i {
            rhs[l.ob() + i] = hw * c.c0_p / dt * ti[i];
        }

        zero_fixed(&mut rhs, &self.fixed);
        let x = self.lu.solve(&rhs, SOLVE_TOL)?;

        let v: Vec<f64> = x[l.ov()..l.ov() + l.n_h].to_vec();
        let w: Vec<f64> = s.w.iter().zip(&v).map(|(w, v)| w + dt * v).collect();
        Ok(PlateState {
            t: t_new,
            u: x[..2 * l.n_u].to_vec(),
            p: x[l.op()..l.op() + l.n_p].to_vec(),
            w,
            v,
            jump: x[l.oj()..l.oj() + l.n_i].to_vec(),
            qbar: x[l.ob()..l.ob() + l.n_i].to_vec(),
        })
    }

    /// Energy account of a state: stored energy, instantaneous dissipation
    /// rate, and the inlet boundary power.
    pub fn energy(&self, s: &PlateState) -> EnergyBudget {
        let l = self.layout;
        let hw = self.cfg.geometry.h;
        let c = self.coeffs;
        let (ux, uy) = s.u.split_at(l.n_u);
        let e_kin = 0.5
            * (self.cfg.fluid.rho_f
                * (self.ops.m_u.bilinear(ux, ux) + self.ops.m_u.bilinear(uy, uy))
                + hw * c.rho_p * self.ops.m_h.bilinear(&s.v, &s.v));
        let e_pot = 0.5
            * (hw * c.gamma_p * self.ops.m_h.bilinear(&s.w, &s.w)
                + hw.powi(3) * c.d * self.ops.k_bend.bilinear(&s.w, &s.w)
                + c.c0_p
                    * (hw * self.ops.m_i.bilinear(&s.qbar, &s.qbar)
                        + hw / 12.0 * self.ops.m_i.bilinear(&s.jump, &s.jump)));
        let mixed: Vec<f64> = s
            .qbar
            .iter()
            .zip(&s.jump)
            .map(|(b, j)| b + 0.5 * j)
            .collect();
        let dissipation_rate = self.ops.a_visc.bilinear(&s.u, &s.u)
            + self.ops.b_bjs.bilinear(&s.u, &s.u)
            + c.kappa_p / hw * self.ops.m_i.bilinear(&s.jump, &s.jump)
            + 12.0 * c.kappa_p / hw * self.ops.m_i.bilinear(&mixed, &mixed);
        let pin = inlet_pressure(&self.cfg.pulse, s.t);
        let boundary_power = pin
            * self
                .ops
                .inlet_load
                .iter()
                .zip(&s.u)
                .map(|(l, u)| l * u)
                .sum::<f64>();
        EnergyBudget {
            e_kin,
            e_pot,
            dissipation_rate,
            boundary_power,
        }
    }

    fn norm_sqs(&self, u: &[f64], v: &[f64], jump: &[f64], qbar: &[f64], w: &[f64]) -> [f64; 5] {
        let (ux, uy) = u.split_at(self.layout.n_u);
        [
            self.ops.m_h.bilinear(v, v),
            self.ops.m_i.bilinear(jump, jump),
            self.ops.m_i.bilinear(qbar, qbar),
            self.ops.m_u.bilinear(ux, ux) + self.ops.m_u.bilinear(uy, uy),
            self.ops.k_bend.bilinear(w, w),
        ]
    }

    /// Names of the norms `solution_norms` reports, in order.
    pub fn norm_labels(&self) -> &'static [&'static str] {
        &[
            "wall velocity",
            "pressure jump",
            "mean pore pressure",
            "fluid velocity",
            "bending curvature",
        ]
    }

    /// Coefficients the stored-energy form puts on each squared solution
    /// norm, making the weighted combination the quantity the scheme keeps
    /// uniformly bounded.
    pub fn norm_weights(&self) -> [f64; 5] {
        let hw = self.cfg.geometry.h;
        let c = self.coeffs;
        [
            hw * c.rho_p,
            c.c0_p * hw / 12.0,
            c.c0_p * hw,
            self.cfg.fluid.rho_f,
            hw.powi(3) * c.d,
        ]
    }

    /// Unweighted L2 norms of the fields the scheme keeps bounded as the
    /// step shrinks: wall velocity, the two pore pressures, fluid velocity,
    /// and the transverse curvature.
    pub fn solution_norms(&self, s: &PlateState) -> Vec<f64> {
        self.norm_sqs(&s.u, &s.v, &s.jump, &s.qbar, &s.w)
            .iter()
            .map(|q| q.max(0.0).sqrt())
            .collect()
    }

    /// Energy-weighted distance between two states of the same
    /// discretization, combining the `solution_norms` components of the
    /// field differences under `norm_weights`.
    pub fn solution_distance(&self, a: &PlateState, b: &PlateState) -> f64 {
        let diff = |x: &[f64], y: &[f64]| -> Vec<f64> {
            x.iter().zip(y).map(|(p, q)| p - q).collect()
        };
        let du = diff(&a.u, &b.u);
        let dv = diff(&a.v, &b.v);
        let dj = diff(&a.jump, &b.jump);
        let db = diff(&a.qbar, &b.qbar);
        let dw = diff(&a.w, &b.w);
        self.norm_sqs(&du, &dv, &dj, &db, &dw)
            .iter()
            .zip(self.norm_weights())
            .map(|(q, c)| c * q.max(0.0))
            .sum::<f64>()
            .sqrt()
    }

    /// Fluid pressure at a point.
    pub fn pressure_at(&self, s: &PlateState, x: f64, y: f64) -> f64 {
        crate::fem::eval_p1(&self.mesh, &s.p, x, y)
    }

    /// Pressure jump sampled at abscissa `x`, linearly interpolated on the
    /// wall grid (clamped to its extent).
    pub fn pressure_jump_at(&self, s: &PlateState, x: f64) -> f64 {
        crate::fem::eval_p1_interval(&self.grid, &s.jump, x)
    }

    /// Interface trace on the shared gridlines. The jump is reported in the
    /// bottom-load convention: the value the fluid feels as normal traction.
    pub fn interface_profile(&self, s: &PlateState) -> InterfaceProfile {
        let nv = self.grid.n_verts();
        InterfaceProfile {
            x: self.grid.verts.clone(),
            displacement: (0..nv).map(|i| s.w[2 * i]).collect(),
            pressure_jump: s.jump.clone(),
            normal_velocity: (0..nv).map(|i| s.v[2 * i]).collect(),
        }
    }

    /// Fluid velocity components at the mesh vertices (the quadratic field's
    /// vertex dofs come first, so this is a direct slice).
    pub fn velocity_at_verts(&self, s: &PlateState) -> (Vec<f64>, Vec<f64>) {
        let nv = self.mesh.n_verts();
        (
            s.u[..nv].to_vec(),
            s.u[self.layout.n_u..self.layout.n_u + nv].to_vec(),
        )
    }
}
