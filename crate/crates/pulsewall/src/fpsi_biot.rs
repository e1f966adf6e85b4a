//! Channel flow coupled to a bulk poroelastic wall layer.
//!
//! The wall occupies a thin rectangle above the channel and carries the
//! solid displacement eta, its velocity xi, and the pore pressure q. One
//! implicit Euler step solves the monolithic system for (u, pi, xi, q); eta
//! is eliminated through eta(t+dt) = eta(t) + dt xi(t+dt), keeping the
//! system matrix constant over a run.
//!
//! Interface conditions on the shared gridlines: the fluid feels the normal
//! traction -q and a slip resistance -beta (u - xi).tau; the pore pressure
//! equation absorbs the filtration condition through its consistent natural
//! boundary term (u - xi).n; and the full mass-conservation residual
//! g = (u - xi).n + kappa grad(q).n is additionally driven to zero by a
//! symmetric interface penalty (factor gamma_N / facet length), which only
//! adds dissipation and keeps the step energy-stable. All interface normals
//! are the fluid-side outward normal.

use crate::config::{inlet_pressure, ConfigError, SimConfig};
use crate::diagnostics::{EnergyBudget, InterfaceProfile};
use crate::fem::{
    add_div_p2_p1, add_mass_p2, add_stiffness_p1, add_sym_grad_p2, add_div_div_p2,
    eval_p2, gauss_interval, impose_identity_rows, p1_tri_grads, p2_tri_values,
    triplet, zero_fixed, Csr, P2Map, TriGeom, Triplet, INT_ORDER, TRI_ORDER,
};
use crate::linsolve::{SolveError, SparseLu, SOLVE_TOL};
use crate::mesh::{BoundaryTag, TriMesh};
use crate::ModelError;

/// Dof block layout: fluid velocity components, fluid pressure, wall
/// velocity components, pore pressure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BiotLayout {
    /// Dofs per fluid velocity component.
    pub n_u: usize,
    /// Fluid pressure dofs.
    pub n_p: usize,
    /// Dofs per wall velocity/displacement component.
    pub n_s: usize,
    /// Pore pressure dofs.
    pub n_q: usize,
}

impl BiotLayout {
    pub fn ox(&self) -> usize {
        0
    }
    pub fn oy(&self) -> usize {
        self.n_u
    }
    pub fn op(&self) -> usize {
        2 * self.n_u
    }
    pub fn osx(&self) -> usize {
        2 * self.n_u + self.n_p
    }
    pub fn osy(&self) -> usize {
        self.osx() + self.n_s
    }
    pub fn oq(&self) -> usize {
        self.osx() + 2 * self.n_s
    }
    pub fn n(&self) -> usize {
        self.oq() + self.n_q
    }
}

/// Operators kept for right-hand sides and energy accounting.
#[derive(Debug, Clone)]
pub struct BiotOps {
    /// Fluid scalar velocity mass (per component).
    pub m_u: Csr,
    /// mu_f * 2 (D(u), D(phi)) over both fluid components.
    pub a_visc: Csr,
    /// beta ((u - xi).tau, (phi - zeta).tau) over full system dofs.
    pub b_slip: Csr,
    /// Wall elastic form 2 mu_b (D(.), D(.)) + lambda_b (div, div) over both
    /// wall components (no spring, no time step factor).
    pub k_e: Csr,
    /// Wall scalar mass (per component).
    pub m_b: Csr,
    /// kappa (grad q, grad s).
    pub k_q: Csr,
    /// Pore pressure mass.
    pub m_q: Csr,
    /// Interface mass-conservation penalty over full system dofs.
    pub penalty: Csr,
    /// Inlet load over fluid velocity dofs.
    pub inlet_load: Vec<f64>,
}

/// Assembled system with the penalty kept separate so tests can check the
/// skew structure of the physical couplings and the symmetry of the penalty
/// independently.
pub struct BiotAssembly {
    pub fluid: TriMesh,
    pub p2f: P2Map,
    pub wall: TriMesh,
    pub p2b: P2Map,
    pub layout: BiotLayout,
    /// System triplets without the interface penalty.
    pub trips: Vec<Triplet>,
    /// Interface penalty triplets.
    pub penalty: Vec<Triplet>,
    pub fixed: Vec<bool>,
    pub ops: BiotOps,
}

/// Solution at one time level; `p` is all zeros at t = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct BiotState {
    pub t: f64,
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    /// Wall displacement, x block then y block.
    pub eta: Vec<f64>,
    /// Wall velocity, x block then y block.
    pub xi: Vec<f64>,
    /// Pore pressure.
    pub q: Vec<f64>,
}

/// Assemble the coupled bulk-wall system for a validated configuration.
pub fn assemble(cfg: &SimConfig) -> Result<BiotAssembly, ConfigError> {
    cfg.validate()?;
    let geom = cfg.geometry;
    let fluid = TriMesh::fluid_channel(geom.l, geom.r_f, cfg.nx_f, cfg.ny_f);
    let p2f = P2Map::build(&fluid);
    let wall = TriMesh::wall_layer(geom.l, geom.h, cfg.nx_p, cfg.ny_p);
    let p2b = P2Map::build(&wall);
    let layout = BiotLayout {
        n_u: p2f.n_dofs(),
        n_p: fluid.n_verts(),
        n_s: p2b.n_dofs(),
        n_q: wall.n_verts(),
    };
    let (n_u, n_s) = (layout.n_u, layout.n_s);
    let (ox, oy, op, osx, osy, oq) = (
        layout.ox(),
        layout.oy(),
        layout.op(),
        layout.osx(),
        layout.osy(),
        layout.oq(),
    );
    let dt = cfg.dt;
    let rho = cfg.fluid.rho_f;
    let mu = cfg.fluid.mu_f;
    let beta = cfg.fluid.beta;
    let b = cfg.biot;
    let gamma_n = cfg.nitsche_penalty_value();

    let mut trips: Vec<Triplet> = Vec::new();

    // Fluid blocks.
    add_mass_p2(&mut trips, &fluid, &p2f, TRI_ORDER, rho / dt, ox, ox);
    add_mass_p2(&mut trips, &fluid, &p2f, TRI_ORDER, rho / dt, oy, oy);
    let mut visc = Vec::new();
    add_sym_grad_p2(&mut visc, &fluid, &p2f, TRI_ORDER, mu, 0, n_u, 0, n_u);
    trips.extend_from_slice(&visc);
    let a_visc = Csr::from_triplets(2 * n_u, 2 * n_u, visc);
    let mut div = Vec::new();
    add_div_p2_p1(&mut div, &fluid, &p2f, TRI_ORDER, 1.0, 0, 0, n_u);
    for t in &div {
        trips.push(triplet(op + t.row, t.col, t.val));
        trips.push(triplet(t.col, op + t.row, -t.val));
    }

    // Wall volume blocks.
    add_mass_p2(&mut trips, &wall, &p2b, TRI_ORDER, b.rho_b / dt, osx, osx);
    add_mass_p2(&mut trips, &wall, &p2b, TRI_ORDER, b.rho_b / dt, osy, osy);
    add_mass_p2(&mut trips, &wall, &p2b, TRI_ORDER, dt * b.gamma, osx, osx);
    add_mass_p2(&mut trips, &wall, &p2b, TRI_ORDER, dt * b.gamma, osy, osy);
    let mut ke = Vec::new();
    add_sym_grad_p2(&mut ke, &wall, &p2b, TRI_ORDER, b.mu_b, 0, n_s, 0, n_s);
    add_div_div_p2(&mut ke, &wall, &p2b, TRI_ORDER, b.lambda_b, 0, n_s, 0, n_s);
    for t in &ke {
        trips.push(triplet(osx + t.row, osx + t.col, dt * t.val));
    }
    let k_e = Csr::from_triplets(2 * n_s, 2 * n_s, ke);
    // Pressure/dilation exchange: -alpha (q, div zeta) against
    // +alpha (div xi, s).
    let mut divb = Vec::new();
    add_div_p2_p1(&mut divb, &wall, &p2b, TRI_ORDER, b.alpha, 0, 0, n_s);
    for t in &divb {
        trips.push(triplet(oq + t.row, osx + t.col, t.val));
        trips.push(triplet(osx + t.col, oq + t.row, -t.val));
    }
    let mut kq = Vec::new();
    add_stiffness_p1(&mut kq, &wall, TRI_ORDER, b.kappa, 0, 0);
    trips.extend(kq.iter().map(|t| triplet(oq + t.row, oq + t.col, t.val)));
    let k_q = Csr::from_triplets(layout.n_q, layout.n_q, kq);
    let mut mq = Vec::new();
    crate::fem::add_mass_p1(&mut mq, &wall, TRI_ORDER, 1.0, 0, 0);
    for t in &mq {
        trips.push(triplet(oq + t.row, oq + t.col, b.c0 / dt * t.val));
    }
    let m_q = Csr::from_triplets(layout.n_q, layout.n_q, mq);

    // Interface terms: both meshes share the gridlines, so cell e of the
    // fluid interface matches cell e of the wall bottom.
    let gauss = gauss_interval(INT_ORDER);
    let if_f = fluid.facets_with_tag(BoundaryTag::InterfaceMinus);
    let if_b = wall.facets_with_tag(BoundaryTag::InterfaceMinus);
    assert_eq!(if_f.len(), if_b.len());
    let mut slip: Vec<Triplet> = Vec::new();
    let mut pen: Vec<Triplet> = Vec::new();
    for (ff, fb) in if_f.iter().zip(&if_b) {
        let a0 = fluid.verts[ff.verts[0]];
        let a1 = fluid.verts[ff.verts[1]];
        let (xa, xb) = (a0[0].min(a1[0]), a0[0].max(a1[0]));
        let len = xb - xa;
        let nrm = fluid.facet_normal(ff);
        let tau = [nrm[1], -nrm[0]];
        let tgf = TriGeom::new(&fluid.tri_coords(ff.tri));
        let tgb = TriGeom::new(&wall.tri_coords(fb.tri));
        let df = p2f.dofs(ff.tri);
        let db = p2b.dofs(fb.tri);
        let qd = wall.tris[fb.tri];
        // Darcy flux direction of each local pore shape on this facet
        // (linear gradients are constant per triangle).
        let mut gq = [0.0; 3];
        for (i, g) in p1_tri_grads().into_iter().enumerate() {
            let pg = tgb.phys_grad(g);
            gq[i] = b.kappa * (pg[0] * nrm[0] + pg[1] * nrm[1]);
        }
        for &(t, wq) in &gauss {
            let x = xa + t * len;
            let (fx, fy) = tgf.ref_coords([x, fluid.y1]);
            let nf = p2_tri_values(fx, fy);
            let (bx, by) = tgb.ref_coords([x, wall.y0]);
            let nb = p2_tri_values(bx, by);
            let sq = {
                // Pore-shape traces along the facet.
                let l = [1.0 - bx - by, bx, by];
                l
            };
            let w = wq * len;
            // Relative slip beta ((u - xi).tau, (phi - zeta).tau): the four
            // sign-alternating blocks of a symmetric nonnegative form.
            for i in 0..6 {
                for k in 0..6 {
                    for (ri, rti, rsign) in
                        [(ox, tau[0], 1.0), (oy, tau[1], 1.0), (osx, tau[0], -1.0), (osy, tau[1], -1.0)]
                    {
                        let rv = if rsign > 0.0 { nf[i] } else { nb[i] };
                        for (ci, cti, csign) in [
                            (ox, tau[0], 1.0),
                            (oy, tau[1], 1.0),
                            (osx, tau[0], -1.0),
                            (osy, tau[1], -1.0),
                        ] {
                            let cv = if csign > 0.0 { nf[k] } else { nb[k] };
                            if rti != 0.0 && cti != 0.0 {
                                let rd = if rsign > 0.0 { df[i] } else { db[i] };
                                let cd = if csign > 0.0 { df[k] } else { db[k] };
                                slip.push(triplet(
                                    ri + rd,
                                    ci + cd,
                                    w * beta * rsign * csign * rti * cti * rv * cv,
                                ));
                            }
                        }
                    }
                }
            }
            // Normal traction -q on the fluid and -q on the wall bottom,
            // against the filtration term (u - xi).n in the pore row; the
            // pairs are exact negative transposes.
            for k in 0..3 {
                let qcol = oq + qd[k];
                for i in 0..6 {
                    for (off, nc) in [(ox, nrm[0]), (oy, nrm[1])] {
                        if nc != 0.0 {
                            let val = w * sq[k] * nf[i] * nc;
                            trips.push(triplet(off + df[i], qcol, val));
                            trips.push(triplet(qcol, off + df[i], -val));
                        }
                    }
                    for (off, nc) in [(osx, nrm[0]), (osy, nrm[1])] {
                        if nc != 0.0 {
                            let val = w * sq[k] * nb[i] * nc;
                            trips.push(triplet(off + db[i], qcol, -val));
                            trips.push(triplet(qcol, off + db[i], val));
                        }
                    }
                }
            }
            // Mass-conservation penalty: gamma_N / len * (g, g) with
            // g = (u - xi).n + kappa grad(q).n.
            let mut gvec: Vec<(usize, f64)> = Vec::with_capacity(27);
            for i in 0..6 {
                for (off, nc) in [(ox, nrm[0]), (oy, nrm[1])] {
                    if nc != 0.0 {
                        gvec.push((off + df[i], nc * nf[i]));
                    }
                }
                for (off, nc) in [(osx, nrm[0]), (osy, nrm[1])] {
                    if nc != 0.0 {
                        gvec.push((off + db[i], -nc * nb[i]));
                    }
                }
            }
            for k in 0..3 {
                gvec.push((oq + qd[k], gq[k]));
            }
            for &(ri, rv) in &gvec {
                for &(ci, cv) in &gvec {
                    pen.push(triplet(ri, ci, gamma_n / len * w * rv * cv));
                }
            }
        }
    }
    trips.extend_from_slice(&slip);
    let b_slip = Csr::from_triplets(layout.n(), layout.n(), slip);
    let penalty = Csr::from_triplets(layout.n(), layout.n(), pen.clone());

    // Inlet traction load.
    let mut inlet_load = vec![0.0; 2 * n_u];
    for f in fluid.facets_with_tag(BoundaryTag::Inlet) {
        let a = fluid.verts[f.verts[0]];
        let c = fluid.verts[f.verts[1]];
        let len = fluid.facet_length(&f);
        let nrm = fluid.facet_normal(&f);
        let tg = TriGeom::new(&fluid.tri_coords(f.tri));
        let dofs = p2f.dofs(f.tri);
        for &(t, wq) in &gauss {
            let p = [a[0] + t * (c[0] - a[0]), a[1] + t * (c[1] - a[1])];
            let (xi, eta) = tg.ref_coords(p);
            let nv = p2_tri_values(xi, eta);
            for i in 0..6 {
                inlet_load[dofs[i]] += wq * len * nv[i] * nrm[0];
                inlet_load[n_u + dofs[i]] += wq * len * nv[i] * nrm[1];
            }
        }
    }

    let m_u = {
        let mut m = Vec::new();
        add_mass_p2(&mut m, &fluid, &p2f, TRI_ORDER, 1.0, 0, 0);
        Csr::from_triplets(n_u, n_u, m)
    };
    let m_b = {
        let mut m = Vec::new();
        add_mass_p2(&mut m, &wall, &p2b, TRI_ORDER, 1.0, 0, 0);
        Csr::from_triplets(n_s, n_s, m)
    };

    let mut fixed = vec![false; layout.n()];
    for f in fluid.facets_with_tag(BoundaryTag::Symmetry) {
        fixed[oy + f.verts[0]] = true;
        fixed[oy + f.verts[1]] = true;
        fixed[oy + p2f.edge_dof(f.verts[0], f.verts[1])] = true;
    }
    // Clamped wall ends: both velocity components.
    for tag in [BoundaryTag::StructLeft, BoundaryTag::StructRight] {
        for f in wall.facets_with_tag(tag) {
            for d in [f.verts[0], f.verts[1], p2b.edge_dof(f.verts[0], f.verts[1])] {
                fixed[osx + d] = true;
                fixed[osy + d] = true;
            }
        }
    }
    // Vented outer face: pore pressure pinned to zero.
    for f in wall.facets_with_tag(BoundaryTag::InterfacePlus) {
        fixed[oq + f.verts[0]] = true;
        fixed[oq + f.verts[1]] = true;
    }

    Ok(BiotAssembly {
        fluid,
        p2f,
        wall,
        p2b,
        layout,
        trips,
        penalty: pen,
        fixed,
        ops: BiotOps {
            m_u,
            a_visc,
            b_slip,
            k_e,
            m_b,
            k_q,
            m_q,
            penalty,
            inlet_load,
        },
    })
}

/// The factored bulk-wall model, ready to step.
pub struct BiotModel {
    pub cfg: SimConfig,
    pub fluid: TriMesh,
    pub p2f: P2Map,
    pub wall: TriMesh,
    pub p2b: P2Map,
    pub layout: BiotLayout,
    pub ops: BiotOps,
    fixed: Vec<bool>,
    lu: SparseLu,
}

impl BiotModel {
    pub fn new(cfg: &SimConfig) -> Result<BiotModel, ModelError> {
        let mut asm = assemble(cfg)?;
        let n = asm.layout.n();
        asm.trips.extend_from_slice(&asm.penalty);
        let constrained = impose_identity_rows(asm.trips, &asm.fixed);
        let lu = SparseLu::factor(Csr::from_triplets(n, n, constrained))?;
        Ok(BiotModel {
            cfg: cfg.clone(),
            fluid: asm.fluid,
            p2f: asm.p2f,
            wall: asm.wall,
            p2b: asm.p2b,
            layout: asm.layout,
            ops: asm.ops,
            fixed: asm.fixed,
            lu,
        })
    }

    pub fn zero_state(&self) -> BiotState {
        let l = self.layout;
        BiotState {
            t: 0.0,
            u: vec![0.0; 2 * l.n_u],
            p: vec![0.0; l.n_p],
            eta: vec![0.0; 2 * l.n_s],
            xi: vec![0.0; 2 * l.n_s],
            q: vec![0.0; l.n_q],
        }
    }

    /// Advance one implicit Euler step.
    pub fn step(&self, s: &BiotState) -> Result<BiotState, SolveError> {
        let l = self.layout;
        let dt = self.cfg.dt;
        let b = self.cfg.biot;
        let t_new = s.t + dt;
        let mut rhs = vec![0.0; l.n()];

        let (ux, uy) = s.u.split_at(l.n_u);
        let mut tf = vec![0.0; l.n_u];
        let ru = self.cfg.fluid.rho_f / dt;
        self.ops.m_u.matvec(ux, &mut tf);
        for i in 0..l.n_u {
            rhs[l.ox() + i] = ru * tf[i];
        }
        self.ops.m_u.matvec(uy, &mut tf);
        for i in 0..l.n_u {
            rhs[l.oy() + i] = ru * tf[i];
        }
        let pin = inlet_pressure(&self.cfg.pulse, t_new);
        if pin != 0.0 {
            for i in 0..2 * l.n_u {
                rhs[i] += pin * self.ops.inlet_load[i];
            }
        }

        let (xix, xiy) = s.xi.split_at(l.n_s);
        let (etx, ety) = s.eta.split_at(l.n_s);
        let mut ts = vec![0.0; l.n_s];
        let rb = b.rho_b / dt;
        self.ops.m_b.matvec(xix, &mut ts);
        for i in 0..l.n_s {
            rhs[l.osx() + i] = rb * ts[i];
        }
        self.ops.m_b.matvec(xiy, &mut ts);
        for i in 0..l.n_s {
            rhs[l.osy() + i] = rb * ts[i];
        }
        self.ops.m_b.matvec(etx, &mut ts);
        for i in 0..l.n_s {
            rhs[l.osx() + i] -= b.gamma * ts[i];
        }
        self.ops.m_b.matvec(ety, &mut ts);
        for i in 0..l.n_s {
            rhs[l.osy() + i] -= b.gamma * ts[i];
        }
        let mut te = vec![0.0; 2 * l.n_s];
        self.ops.k_e.matvec(&s.eta, &mut te);
        for i in 0..2 * l.n_s {
            rhs[l.osx() + i] -= te[i];
        }

        let mut tq = vec![0.0; l.n_q];
        self.ops.m_q.matvec(&s.q, &mut tq);
        for i in 0..l.n_q {
            rhs[l.oq() + i] = b.c0 / dt * tq[i];
        }

        zero_fixed(&mut rhs, &self.fixed);
        let x = self.lu.solve(&rhs, SOLVE_TOL)?;

        let xi: Vec<f64> = x[l.osx()..l.osx() + 2 * l.n_s].to_vec();
        let eta: Vec<f64> = s.eta.iter().zip(&xi).map(|(e, x)| e + dt * x).collect();
        Ok(BiotState {
            t: t_new,
            u: x[..2 * l.n_u].to_vec(),
            p: x[l.op()..l.op() + l.n_p].to_vec(),
            eta,
            xi,
            q: x[l.oq()..l.oq() + l.n_q].to_vec(),
        })
    }

    /// Full-length system vector of a state (pressure slots zeroed), for the
    /// quadratic forms that span fluid, wall, and pore dofs.
    fn full_vector(&self, s: &BiotState) -> Vec<f64> {
        let l = self.layout;
        let mut x = vec![0.0; l.n()];
        x[..2 * l.n_u].copy_from_slice(&s.u);
        x[l.osx()..l.osx() + 2 * l.n_s].copy_from_slice(&s.xi);
        x[l.oq()..l.oq() + l.n_q].copy_from_slice(&s.q);
        x
    }

    /// Energy account of a state.
    pub fn energy(&self, s: &BiotState) -> EnergyBudget {
        let l = self.layout;
        let b = self.cfg.biot;
        let (ux, uy) = s.u.split_at(l.n_u);
        let (xix, xiy) = s.xi.split_at(l.n_s);
        let (etx, ety) = s.eta.split_at(l.n_s);
        let e_kin = 0.5
            * (self.cfg.fluid.rho_f
                * (self.ops.m_u.bilinear(ux, ux) + self.ops.m_u.bilinear(uy, uy))
                + b.rho_b * (self.ops.m_b.bilinear(xix, xix) + self.ops.m_b.bilinear(xiy, xiy)));
        let e_pot = 0.5
            * (self.ops.k_e.bilinear(&s.eta, &s.eta)
                + b.gamma * (self.ops.m_b.bilinear(etx, etx) + self.ops.m_b.bilinear(ety, ety))
                + b.c0 * self.ops.m_q.bilinear(&s.q, &s.q));
        let x = self.full_vector(s);
        let dissipation_rate = self.ops.a_visc.bilinear(&s.u, &s.u)
            + self.ops.b_slip.bilinear(&x, &x)
            + self.ops.k_q.bilinear(&s.q, &s.q)
            + self.ops.penalty.bilinear(&x, &x);
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

    fn norm_sqs(&self, u: &[f64], xi: &[f64], q: &[f64], eta: &[f64]) -> [f64; 4] {
        let (ux, uy) = u.split_at(self.layout.n_u);
        let (xix, xiy) = xi.split_at(self.layout.n_s);
        [
            self.ops.m_b.bilinear(xix, xix) + self.ops.m_b.bilinear(xiy, xiy),
            self.ops.m_q.bilinear(q, q),
            self.ops.m_u.bilinear(ux, ux) + self.ops.m_u.bilinear(uy, uy),
            self.ops.k_e.bilinear(eta, eta),
        ]
    }

    /// Names of the norms `solution_norms` reports, in order.
    pub fn norm_labels(&self) -> &'static [&'static str] {
        &[
            "wall velocity",
            "pore pressure",
            "fluid velocity",
            "elastic strain",
        ]
    }

    /// Coefficients the stored-energy form puts on each squared solution
    /// norm, making the weighted combination the quantity the scheme keeps
    /// uniformly bounded.
    pub fn norm_weights(&self) -> [f64; 4] {
        let b = self.cfg.biot;
        [b.rho_b, b.c0, self.cfg.fluid.rho_f, 1.0]
    }

    /// Unweighted L2 norms of the fields the scheme keeps bounded as the
    /// step shrinks; the displacement enters through its elastic strain norm.
    pub fn solution_norms(&self, s: &BiotState) -> Vec<f64> {
        self.norm_sqs(&s.u, &s.xi, &s.q, &s.eta)
            .iter()
            .map(|q| q.max(0.0).sqrt())
            .collect()
    }

    /// Energy-weighted distance between two states of the same
    /// discretization, combining the `solution_norms` components of the
    /// field differences under `norm_weights`.
    pub fn solution_distance(&self, a: &BiotState, b: &BiotState) -> f64 {
        let diff = |x: &[f64], y: &[f64]| -> Vec<f64> {
            x.iter().zip(y).map(|(p, q)| p - q).collect()
        };
        let du = diff(&a.u, &b.u);
        let dx = diff(&a.xi, &b.xi);
        let dq = diff(&a.q, &b.q);
        let de = diff(&a.eta, &b.eta);
        self.norm_sqs(&du, &dx, &dq, &de)
            .iter()
            .zip(self.norm_weights())
            .map(|(q, c)| c * q.max(0.0))
            .sum::<f64>()
            .sqrt()
    }

    /// Fluid pressure at a point.
    pub fn pressure_at(&self, s: &BiotState, x: f64, y: f64) -> f64 {
        crate::fem::eval_p1(&self.fluid, &s.p, x, y)
    }

    /// Pressure jump sampled at abscissa `x`: the pore pressure trace on the
    /// wall bottom in the bottom-load convention, linearly interpolated
    /// (clamped to the wall extent).
    pub fn pressure_jump_at(&self, s: &BiotState, x: f64) -> f64 {
        let nx = self.wall.nx;
        let x0 = self.wall.verts[self.wall.vertex_index(0, 0)][0];
        let x1 = self.wall.verts[self.wall.vertex_index(nx, 0)][0];
        let fx = ((x - x0) / (x1 - x0) * nx as f64).clamp(0.0, nx as f64);
        let e = (fx.floor() as usize).min(nx - 1);
        let t = fx - e as f64;
        let q0 = -s.q[self.wall.vertex_index(e, 0)];
        let q1 = -s.q[self.wall.vertex_index(e + 1, 0)];
        q0 * (1.0 - t) + q1 * t
    }

    /// Interface trace on the shared gridlines, in the same conventions as
    /// the plate model: displacement is the transverse midplane displacement
    /// (eta_y at half thickness), the reported jump is the pore pressure the
    /// fluid feels as -q at the wall bottom, and the normal velocity is the
    /// wall velocity trace on the interface.
    pub fn interface_profile(&self, s: &BiotState) -> InterfaceProfile {
        let nx = self.wall.nx;
        let h = self.cfg.geometry.h;
        let x: Vec<f64> = (0..=nx).map(|i| self.wall.verts[self.wall.vertex_index(i, 0)][0]).collect();
        let ety = &s.eta[self.layout.n_s..];
        let displacement = x
            .iter()
            .map(|&xc| eval_p2(&self.wall, &self.p2b, ety, xc, 0.5 * h))
            .collect();
        let pressure_jump = (0..=nx)
            .map(|i| -s.q[self.wall.vertex_index(i, 0)])
            .collect();
        let xiy = &s.xi[self.layout.n_s..];
        let normal_velocity = (0..=nx)
            .map(|i| xiy[self.wall.vertex_index(i, 0)])
            .collect();
        InterfaceProfile {
            x,
            displacement,
            pressure_jump,
            normal_velocity,
        }
    }

    /// Fluid velocity components at the mesh vertices.
    pub fn velocity_at_verts(&self, s: &BiotState) -> (Vec<f64>, Vec<f64>) {
        let nv = self.fluid.n_verts();
        (
            s.u[..nv].to_vec(),
            s.u[self.layout.n_u..self.layout.n_u + nv].to_vec(),
        )
    }
}
