//! Shared oracle reconstructions of the assemblies and the mode pencil,
//! usable from both the focused oracle tests and the acceptance harness.
//! Each `check_*` panics with an entry-level report on the first mismatch.

use super::*;
use num_complex::Complex64;
use pulsewall::config::{Preset, SimConfig};
use pulsewall::mesh::BoundaryTag;
use pulsewall::spectral::{mode_pencil, pencil_dim, CMat, SpectralConfig};
use pulsewall::{fpsi_biot, fpsi_plate};

pub fn two_cell_cfg() -> SimConfig {
    let mut cfg = Preset::from_name("desk-h01").unwrap().config();
    cfg.nx_f = 2;
    cfg.nx_p = 2;
    cfg.ny_f = 1;
    cfg.ny_p = 1;
    cfg.t_end = 3.0 * cfg.dt;
    cfg
}

pub struct PlateOracle {
    pub system: Dense,
    pub m_u: Dense,
    pub a_visc: Dense,
    pub b_bjs: Dense,
    pub m_h: Dense,
    pub k_bend: Dense,
    pub m_i: Dense,
    pub inlet: Vec<f64>,
}

pub fn plate_oracle(cfg: &SimConfig, asm: &fpsi_plate::PlateAssembly) -> PlateOracle {
    let l = asm.layout;
    let n_u = l.n_u;
    let (ox, oy, op, ov, oj, ob) = (l.ox(), l.oy(), l.op(), l.ov(), l.oj(), l.ob());
    let comp_off = [ox, oy];
    let coords = asm.p2.dof_coords(&asm.mesh);
    let dt = cfg.dt;
    let hw = cfg.geometry.h;
    let rho = cfg.fluid.rho_f;
    let mu = cfg.fluid.mu_f;
    let beta = cfg.fluid.beta;
    let c = asm.coeffs;

    let mut sys = Dense::new(l.n(), l.n());
    let mut m_u = Dense::new(n_u, n_u);
    let mut a_visc = Dense::new(2 * n_u, 2 * n_u);
    let mut b_bjs = Dense::new(2 * n_u, 2 * n_u);
    let mut m_h = Dense::new(l.n_h, l.n_h);
    let mut k_bend = Dense::new(l.n_h, l.n_h);
    let mut m_i = Dense::new(l.n_i, l.n_i);
    let mut inlet = vec![0.0; 2 * n_u];

    // Fluid volume: momentum mass, viscosity, and the divergence pair.
    for t in 0..asm.mesh.n_tris() {
        let (p2b, d6) = tri_p2_basis(&asm.p2, &coords, t);
        let (p1b, d3) = tri_p1_basis(&asm.mesh, t);
        for (p, w) in tri_quad(&asm.mesh.tri_coords(t)) {
            let v6: Vec<f64> = (0..6).map(|k| p2b.eval(k, p)).collect();
            let g6: Vec<[f64; 2]> = (0..6).map(|k| p2b.grad(k, p)).collect();
            let v3: Vec<f64> = (0..3).map(|k| p1b.eval(k, p)).collect();
            for i in 0..6 {
                for j in 0..6 {
                    let mass = w * v6[i] * v6[j];
                    m_u.add(d6[i], d6[j], mass);
                    sys.add(ox + d6[i], ox + d6[j], rho / dt * mass);
                    sys.add(oy + d6[i], oy + d6[j], rho / dt * mass);
                    for a in 0..2 {
                        for b in 0..2 {
                            let visc = w * mu * sym_grad_pair(a, g6[i], b, g6[j]);
                            a_visc.add(a * n_u + d6[i], b * n_u + d6[j], visc);
                            sys.add(comp_off[a] + d6[i], comp_off[b] + d6[j], visc);
                        }
                    }
                }
                for pi in 0..3 {
                    for cmp in 0..2 {
                        let val = w * v3[pi] * g6[i][cmp];
                        sys.add(op + d3[pi], comp_off[cmp] + d6[i], val);
                        sys.add(comp_off[cmp] + d6[i], op + d3[pi], -val);
                    }
                }
            }
        }
    }

    // Interface: slip resistance and the pressure-jump exchange. The facets
    // lie on the channel top, so the fluid-side outward normal is (0, 1).
    let nrm = [0.0, 1.0];
    let tau = [1.0, 0.0];
    for (e, f) in asm
        .mesh
        .facets_with_tag(BoundaryTag::InterfaceMinus)
        .iter()
        .enumerate()
    {
        let (xa, xb) = asm.grid.cell(e);
        let (p2b, d6) = tri_p2_basis(&asm.p2, &coords, f.tri);
        let lin = LinearBasis::new(xa, xb);
        for (p, w) in seg_quad([xa, 0.0], [xb, 0.0]) {
            let v6: Vec<f64> = (0..6).map(|k| p2b.eval(k, p)).collect();
            for i in 0..6 {
                for j in 0..6 {
                    for a in 0..2 {
                        for b in 0..2 {
                            let val = w * beta * tau[a] * tau[b] * v6[i] * v6[j];
                            b_bjs.add(a * n_u + d6[i], b * n_u + d6[j], val);
                            sys.add(comp_off[a] + d6[i], comp_off[b] + d6[j], val);
                        }
                    }
                }
                for k in 0..2 {
                    let s = lin.eval(k, p[0]);
                    for cmp in 0..2 {
                        let val = w * s * v6[i] * nrm[cmp];
                        sys.add(comp_off[cmp] + d6[i], oj + e + k, -val);
                        sys.add(oj + e + k, comp_off[cmp] + d6[i], val);
                    }
                }
            }
        }
    }

    // Plate and pore blocks on the interface grid.
    for e in 0..asm.grid.n {
        let (xa, xb) = asm.grid.cell(e);
        let herm = HermiteBasis::new(xa, xb);
        let lin = LinearBasis::new(xa, xb);
        let hd = [2 * e, 2 * e + 1, 2 * e + 2, 2 * e + 3];
        for (x, w) in int_quad(xa, xb) {
            let hv: Vec<f64> = (0..4).map(|k| herm.eval(k, x)).collect();
            let hdd: Vec<f64> = (0..4).map(|k| herm.d2(k, x)).collect();
            let sv = [lin.eval(0, x), lin.eval(1, x)];
            for i in 0..4 {
                for k in 0..4 {
                    m_h.add(hd[i], hd[k], w * hv[i] * hv[k]);
                    k_bend.add(hd[i], hd[k], w * hdd[i] * hdd[k]);
                    sys.add(
                        ov + hd[i],
                        ov + hd[k],
                        (hw * c.rho_p / dt + dt * hw * c.gamma_p) * w * hv[i] * hv[k]
                            + dt * hw.powi(3) * c.d * w * hdd[i] * hdd[k],
                    );
                }
                for k in 0..2 {
                    let val = w * sv[k] * (hv[i] + hdd[i] * hw * hw * c.alpha_p / 12.0);
                    sys.add(ov + hd[i], oj + e + k, val);
                    sys.add(oj + e + k, ov + hd[i], -val);
                }
            }
            for i in 0..2 {
                for k in 0..2 {
                    let m = w * sv[i] * sv[k];
                    m_i.add(e + i, e + k, m);
                    sys.add(
                        oj + e + i,
                        oj + e + k,
                        (hw * c.c0_p / (12.0 * dt) + 4.0 * c.kappa_p / hw) * m,
                    );
                    sys.add(oj + e + i, ob + e + k, 6.0 * c.kappa_p / hw * m);
                    sys.add(ob + e + i, oj + e + k, 6.0 * c.kappa_p / hw * m);
                    sys.add(
                        ob + e + i,
                        ob + e + k,
                        (hw * c.c0_p / dt + 12.0 * c.kappa_p / hw) * m,
                    );
                }
            }
        }
    }

    // Inlet traction load; the inlet is the left side, outward normal (-1, 0).
    for f in asm.mesh.facets_with_tag(BoundaryTag::Inlet) {
        let (p2b, d6) = tri_p2_basis(&asm.p2, &coords, f.tri);
        let a = asm.mesh.verts[f.verts[0]];
        let b = asm.mesh.verts[f.verts[1]];
        for (p, w) in seg_quad(a, b) {
            for i in 0..6 {
                inlet[d6[i]] += w * p2b.eval(i, p) * (-1.0);
            }
        }
    }

    PlateOracle {
        system: sys,
        m_u,
        a_visc,
        b_bjs,
        m_h,
        k_bend,
        m_i,
        inlet,
    }
}

/// Assemble the plate problem on the two-cell mesh and demand entrywise
/// agreement with the dense oracle.
pub fn check_plate_assembly() {
    let cfg = two_cell_cfg();
    let asm = fpsi_plate::assemble(&cfg).unwrap();
    let orc = plate_oracle(&cfg, &asm);
    let n = asm.layout.n();

    let lib_sys = Dense::from_triplets(n, n, &asm.trips);
    assert_close_mats("system", &lib_sys, &orc.system, 1e-12);

    assert_close_mats("velocity mass", &Dense::from_csr(&asm.ops.m_u), &orc.m_u, 1e-12);
    assert_close_mats("viscous form", &Dense::from_csr(&asm.ops.a_visc), &orc.a_visc, 1e-12);
    assert_close_mats("slip form", &Dense::from_csr(&asm.ops.b_bjs), &orc.b_bjs, 1e-12);
    assert_close_mats("plate mass", &Dense::from_csr(&asm.ops.m_h), &orc.m_h, 1e-12);
    assert_close_mats("bending stiffness", &Dense::from_csr(&asm.ops.k_bend), &orc.k_bend, 1e-12);
    assert_close_mats("interface mass", &Dense::from_csr(&asm.ops.m_i), &orc.m_i, 1e-12);
    assert_close_vecs("inlet load", &asm.ops.inlet_load, &orc.inlet, 1e-12);
}

pub struct BiotOracle {
    pub system: Dense,
    pub penalty: Dense,
    pub m_u: Dense,
    pub a_visc: Dense,
    pub b_slip: Dense,
    pub k_e: Dense,
    pub m_b: Dense,
    pub k_q: Dense,
    pub m_q: Dense,
    pub inlet: Vec<f64>,
}

pub fn biot_oracle(cfg: &SimConfig, asm: &fpsi_biot::BiotAssembly) -> BiotOracle {
    let l = asm.layout;
    let (n_u, n_s) = (l.n_u, l.n_s);
    let (ox, oy, op, osx, osy, oq) = (l.ox(), l.oy(), l.op(), l.osx(), l.osy(), l.oq());
    let comp_f = [ox, oy];
    let comp_b = [osx, osy];
    let coords_f = asm.p2f.dof_coords(&asm.fluid);
    let coords_b = asm.p2b.dof_coords(&asm.wall);
    let dt = cfg.dt;
    let rho = cfg.fluid.rho_f;
    let mu = cfg.fluid.mu_f;
    let beta = cfg.fluid.beta;
    let bp = cfg.biot;
    let gamma_n = cfg.nitsche_penalty_value();

    let mut sys = Dense::new(l.n(), l.n());
    let mut pen = Dense::new(l.n(), l.n());
    let mut m_u = Dense::new(n_u, n_u);
    let mut a_visc = Dense::new(2 * n_u, 2 * n_u);
    let mut b_slip = Dense::new(l.n(), l.n());
    let mut k_e = Dense::new(2 * n_s, 2 * n_s);
    let mut m_b = Dense::new(n_s, n_s);
    let mut k_q = Dense::new(l.n_q, l.n_q);
    let mut m_q = Dense::new(l.n_q, l.n_q);
    let mut inlet = vec![0.0; 2 * n_u];

    // Fluid volume: momentum mass, viscosity, and the divergence pair.
    for t in 0..asm.fluid.n_tris() {
        let (p2b, d6) = tri_p2_basis(&asm.p2f, &coords_f, t);
        let (p1b, d3) = tri_p1_basis(&asm.fluid, t);
        for (p, w) in tri_quad(&asm.fluid.tri_coords(t)) {
            let v6: Vec<f64> = (0..6).map(|k| p2b.eval(k, p)).collect();
            let g6: Vec<[f64; 2]> = (0..6).map(|k| p2b.grad(k, p)).collect();
            let v3: Vec<f64> = (0..3).map(|k| p1b.eval(k, p)).collect();
            for i in 0..6 {
                for j in 0..6 {
                    let mass = w * v6[i] * v6[j];
                    m_u.add(d6[i], d6[j], mass);
                    sys.add(ox + d6[i], ox + d6[j], rho / dt * mass);
                    sys.add(oy + d6[i], oy + d6[j], rho / dt * mass);
                    for a in 0..2 {
                        for b in 0..2 {
                            let visc = w * mu * sym_grad_pair(a, g6[i], b, g6[j]);
                            a_visc.add(a * n_u + d6[i], b * n_u + d6[j], visc);
                            sys.add(comp_f[a] + d6[i], comp_f[b] + d6[j], visc);
                        }
                    }
                }
                for pi in 0..3 {
                    for cmp in 0..2 {
                        let val = w * v3[pi] * g6[i][cmp];
                        sys.add(op + d3[pi], comp_f[cmp] + d6[i], val);
                        sys.add(comp_f[cmp] + d6[i], op + d3[pi], -val);
                    }
                }
            }
        }
    }

    // Wall volume: displacement mass and damping, the elastic form, the
    // dilation exchange with the pore pressure, and the Darcy blocks.
    for t in 0..asm.wall.n_tris() {
        let (p2b, d6) = tri_p2_basis(&asm.p2b, &coords_b, t);
        let (p1b, d3) = tri_p1_basis(&asm.wall, t);
        for (p, w) in tri_quad(&asm.wall.tri_coords(t)) {
            let v6: Vec<f64> = (0..6).map(|k| p2b.eval(k, p)).collect();
            let g6: Vec<[f64; 2]> = (0..6).map(|k| p2b.grad(k, p)).collect();
            let v3: Vec<f64> = (0..3).map(|k| p1b.eval(k, p)).collect();
            let g3: Vec<[f64; 2]> = (0..3).map(|k| p1b.grad(k, p)).collect();
            for i in 0..6 {
                for j in 0..6 {
                    let mass = w * v6[i] * v6[j];
                    m_b.add(d6[i], d6[j], mass);
                    sys.add(osx + d6[i], osx + d6[j], (bp.rho_b / dt + dt * bp.gamma) * mass);
                    sys.add(osy + d6[i], osy + d6[j], (bp.rho_b / dt + dt * bp.gamma) * mass);
                    for a in 0..2 {
                        for b in 0..2 {
                            let el = w
                                * (bp.mu_b * sym_grad_pair(a, g6[i], b, g6[j])
                                    + bp.lambda_b * g6[i][a] * g6[j][b]);
                            k_e.add(a * n_s + d6[i], b * n_s + d6[j], el);
                            sys.add(comp_b[a] + d6[i], comp_b[b] + d6[j], dt * el);
                        }
                    }
                }
                for pi in 0..3 {
                    for cmp in 0..2 {
                        let val = w * bp.alpha * v3[pi] * g6[i][cmp];
                        sys.add(oq + d3[pi], comp_b[cmp] + d6[i], val);
                        sys.add(comp_b[cmp] + d6[i], oq + d3[pi], -val);
                    }
                }
            }
            for pi in 0..3 {
                for pj in 0..3 {
                    let stiff = w * (g3[pi][0] * g3[pj][0] + g3[pi][1] * g3[pj][1]);
                    k_q.add(d3[pi], d3[pj], bp.kappa * stiff);
                    sys.add(oq + d3[pi], oq + d3[pj], bp.kappa * stiff);
                    let mass = w * v3[pi] * v3[pj];
                    m_q.add(d3[pi], d3[pj], mass);
                    sys.add(oq + d3[pi], oq + d3[pj], bp.c0 / dt * mass);
                }
            }
        }
    }

    // Interface: both meshes meet along y = 0, fluid-side outward normal
    // (0, 1); cell e of each boundary list covers the same span of x.
    let nrm = [0.0, 1.0];
    let tau = [1.0, 0.0];
    let if_f = asm.fluid.facets_with_tag(BoundaryTag::InterfaceMinus);
    let if_b = asm.wall.facets_with_tag(BoundaryTag::InterfaceMinus);
    assert_eq!(if_f.len(), if_b.len());
    for (ff, fb) in if_f.iter().zip(&if_b) {
        let a0 = asm.fluid.verts[ff.verts[0]];
        let a1 = asm.fluid.verts[ff.verts[1]];
        let (xa, xb) = (a0[0].min(a1[0]), a0[0].max(a1[0]));
        let len = xb - xa;
        let (bf, df) = tri_p2_basis(&asm.p2f, &coords_f, ff.tri);
        let (bb, db) = tri_p2_basis(&asm.p2b, &coords_b, fb.tri);
        let (bq, dq) = tri_p1_basis(&asm.wall, fb.tri);
        for (p, w) in seg_quad([xa, 0.0], [xb, 0.0]) {
            let vf: Vec<f64> = (0..6).map(|k| bf.eval(k, p)).collect();
            let vb: Vec<f64> = (0..6).map(|k| bb.eval(k, p)).collect();
            let vq: Vec<f64> = (0..3).map(|k| bq.eval(k, p)).collect();

            // Relative tangential slip: outer product of one signed trace
            // vector over both velocity fields.
            let mut tvec: Vec<(usize, f64)> = Vec::new();
            for i in 0..6 {
                for cmp in 0..2 {
                    tvec.push((comp_f[cmp] + df[i], tau[cmp] * vf[i]));
                    tvec.push((comp_b[cmp] + db[i], -tau[cmp] * vb[i]));
                }
            }
            for &(ri, rv) in &tvec {
                for &(ci, cv) in &tvec {
                    let val = w * beta * rv * cv;
                    b_slip.add(ri, ci, val);
                    sys.add(ri, ci, val);
                }
            }

            // Pore-pressure traction on both sides against the filtration
            // terms in the pore row.
            for k in 0..3 {
                let qcol = oq + dq[k];
                for i in 0..6 {
                    for cmp in 0..2 {
                        let val = w * vq[k] * vf[i] * nrm[cmp];
                        sys.add(comp_f[cmp] + df[i], qcol, val);
                        sys.add(qcol, comp_f[cmp] + df[i], -val);
                        let val = w * vq[k] * vb[i] * nrm[cmp];
                        sys.add(comp_b[cmp] + db[i], qcol, -val);
                        sys.add(qcol, comp_b[cmp] + db[i], val);
                    }
                }
            }

            // Mass-conservation penalty on (u - xi).n + kappa grad(q).n.
            let mut gvec: Vec<(usize, f64)> = Vec::new();
            for i in 0..6 {
                for cmp in 0..2 {
                    gvec.push((comp_f[cmp] + df[i], nrm[cmp] * vf[i]));
                    gvec.push((comp_b[cmp] + db[i], -nrm[cmp] * vb[i]));
                }
            }
            for k in 0..3 {
                let g = bq.grad(k, p);
                gvec.push((oq + dq[k], bp.kappa * (g[0] * nrm[0] + g[1] * nrm[1])));
            }
            for &(ri, rv) in &gvec {
                for &(ci, cv) in &gvec {
                    pen.add(ri, ci, gamma_n / len * w * rv * cv);
                }
            }
        }
    }

    // Inlet traction load; left side, outward normal (-1, 0).
    for f in asm.fluid.facets_with_tag(BoundaryTag::Inlet) {
        let (p2b, d6) = tri_p2_basis(&asm.p2f, &coords_f, f.tri);
        let a = asm.fluid.verts[f.verts[0]];
        let b = asm.fluid.verts[f.verts[1]];
        for (p, w) in seg_quad(a, b) {
            for i in 0..6 {
                inlet[d6[i]] += w * p2b.eval(i, p) * (-1.0);
            }
        }
    }

    BiotOracle {
        system: sys,
        penalty: pen,
        m_u,
        a_visc,
        b_slip,
        k_e,
        m_b,
        k_q,
        m_q,
        inlet,
    }
}

/// Assemble the bulk problem on the two-cell meshes and demand entrywise
/// agreement with the dense oracle.
pub fn check_biot_assembly() {
    let cfg = two_cell_cfg();
    let asm = fpsi_biot::assemble(&cfg).unwrap();
    let orc = biot_oracle(&cfg, &asm);
    let n = asm.layout.n();

    let lib_sys = Dense::from_triplets(n, n, &asm.trips);
    assert_close_mats("system", &lib_sys, &orc.system, 1e-12);
    let lib_pen = Dense::from_triplets(n, n, &asm.penalty);
    assert_close_mats("penalty triplets", &lib_pen, &orc.penalty, 1e-12);

    assert_close_mats("velocity mass", &Dense::from_csr(&asm.ops.m_u), &orc.m_u, 1e-12);
    assert_close_mats("viscous form", &Dense::from_csr(&asm.ops.a_visc), &orc.a_visc, 1e-12);
    assert_close_mats("slip form", &Dense::from_csr(&asm.ops.b_slip), &orc.b_slip, 1e-12);
    assert_close_mats("elastic form", &Dense::from_csr(&asm.ops.k_e), &orc.k_e, 1e-12);
    assert_close_mats("wall mass", &Dense::from_csr(&asm.ops.m_b), &orc.m_b, 1e-12);
    assert_close_mats("pore stiffness", &Dense::from_csr(&asm.ops.k_q), &orc.k_q, 1e-12);
    assert_close_mats("pore mass", &Dense::from_csr(&asm.ops.m_q), &orc.m_q, 1e-12);
    assert_close_mats("penalty operator", &Dense::from_csr(&asm.ops.penalty), &orc.penalty, 1e-12);
    assert_close_vecs("inlet load", &asm.ops.inlet_load, &orc.inlet, 1e-12);
}

// Dof layout of the pencil: four interface scalars, then three velocity
// component blocks of 2 nz free nodes each, then nz + 1 pressure verts.
const W: usize = 0;
const V: usize = 1;
const J: usize = 2;
const B: usize = 3;

pub fn u_dof(c: usize, node: usize, nz: usize) -> Option<usize> {
    if node == 0 {
        None
    } else {
        Some(4 + c * 2 * nz + node - 1)
    }
}

pub fn p_dof(vert: usize, nz: usize) -> usize {
    4 + 6 * nz + vert
}

pub fn trace_dof(c: usize, nz: usize) -> usize {
    u_dof(c, 2 * nz, nz).unwrap()
}

/// Quadratic nodal basis on one vertical cell, fitted through a Vandermonde
/// solve in the centered coordinate.
struct Quad1 {
    zc: f64,
    s: f64,
    coef: [[f64; 3]; 3],
}

impl Quad1 {
    fn new(z0: f64, h: f64) -> Quad1 {
        let zc = z0 + 0.5 * h;
        let s = 0.5 * h;
        let mut v = vec![0.0; 9];
        for (i, u) in [-1.0f64, 0.0, 1.0].into_iter().enumerate() {
            v[3 * i] = 1.0;
            v[3 * i + 1] = u;
            v[3 * i + 2] = u * u;
        }
        let inv = invert(3, v);
        let mut coef = [[0.0; 3]; 3];
        for k in 0..3 {
            for j in 0..3 {
                coef[k][j] = inv[3 * j + k];
            }
        }
        Quad1 { zc, s, coef }
    }

    fn eval(&self, k: usize, z: f64) -> f64 {
        let u = (z - self.zc) / self.s;
        self.coef[k][0] + self.coef[k][1] * u + self.coef[k][2] * u * u
    }

    fn deriv(&self, k: usize, z: f64) -> f64 {
        let d = 1e-5;
        (self.eval(k, z + d) - self.eval(k, z - d)) / (2.0 * d)
    }
}

/// Composite Boole panel over one cell: exact through degree five.
fn boole(z0: f64, h: f64) -> [(f64, f64); 5] {
    let w = [7.0, 32.0, 12.0, 32.0, 7.0];
    let mut out = [(0.0, 0.0); 5];
    for i in 0..5 {
        out[i] = (z0 + h * i as f64 / 4.0, h / 90.0 * w[i]);
    }
    out
}

pub struct CDense {
    pub n: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl CDense {
    fn new(n: usize) -> CDense {
        CDense {
            n,
            re: vec![0.0; n * n],
            im: vec![0.0; n * n],
        }
    }

    fn add(&mut self, i: usize, j: usize, re: f64, im: f64) {
        self.re[i * self.n + j] += re;
        self.im[i * self.n + j] += im;
    }
}

pub fn pencil_oracle(m1: i32, m2: i32, cfg: &SpectralConfig) -> (CDense, CDense) {
    let nz = cfg.nz;
    let n = pencil_dim(nz);
    let k1 = 2.0 * std::f64::consts::PI * m1 as f64;
    let k2 = 2.0 * std::f64::consts::PI * m2 as f64;
    let ksq = k1 * k1 + k2 * k2;
    let k4 = ksq * ksq;
    let mut a = CDense::new(n);
    let mut m = CDense::new(n);

    // Interface scalar rows.
    m.add(W, W, 1.0, 0.0);
    m.add(V, V, 1.0, 0.0);
    m.add(J, J, 1.0, 0.0);
    m.add(B, B, 1.0, 0.0);
    a.add(W, V, 1.0, 0.0);
    a.add(V, W, -(k4 + cfg.gamma_p), 0.0);
    a.add(V, V, -cfg.eps1 * k4, 0.0);
    a.add(V, J, -(1.0 - ksq / 12.0), 0.0);
    a.add(J, V, -(ksq - 12.0), 0.0);
    a.add(J, J, -(cfg.eps2 * ksq + 48.0), 0.0);
    a.add(J, B, -72.0, 0.0);
    a.add(J, trace_dof(2, nz), -12.0, 0.0);
    a.add(B, J, -6.0, 0.0);
    a.add(B, B, -12.0, 0.0);

    // Vertical profiles on (-1, 0), clamped at the bottom.
    let h = 1.0 / nz as f64;
    for e in 0..nz {
        let z0 = -1.0 + e as f64 * h;
        let qb = Quad1::new(z0, h);
        let nodes = [2 * e, 2 * e + 1, 2 * e + 2];
        let verts = [e, e + 1];
        let lin = |j: usize, z: f64| {
            if j == 0 {
                (z0 + h - z) / h
            } else {
                (z - z0) / h
            }
        };
        // Cell integrals through the independent basis and rule.
        let mut mass = [[0.0; 3]; 3];
        let mut stiff = [[0.0; 3]; 3];
        let mut g = [[0.0; 3]; 3];
        let mut pv = [[0.0; 2]; 3];
        let mut pg = [[0.0; 2]; 3];
        for (z, w) in boole(z0, h) {
            for i in 0..3 {
                let (vi, di) = (qb.eval(i, z), qb.deriv(i, z));
                for j in 0..3 {
                    mass[i][j] += w * vi * qb.eval(j, z);
                    stiff[i][j] += w * di * qb.deriv(j, z);
                    g[i][j] += w * di * qb.eval(j, z);
                }
                for j in 0..2 {
                    pv[i][j] += w * lin(j, z) * vi;
                    pg[i][j] += w * lin(j, z) * di;
                }
            }
        }
        for i in 0..3 {
            let Some(ri) = u_dof(0, nodes[i], nz) else {
                continue;
            };
            for j in 0..3 {
                let Some(cj) = u_dof(0, nodes[j], nz) else {
                    continue;
                };
                for c in 0..3 {
                    m.add(ri + c * 2 * nz, cj + c * 2 * nz, mass[i][j], 0.0);
                }
                a.add(ri, cj, -((2.0 * k1 * k1 + k2 * k2) * mass[i][j] + stiff[i][j]), 0.0);
                a.add(
                    ri + 2 * nz,
                    cj + 2 * nz,
                    -((k1 * k1 + 2.0 * k2 * k2) * mass[i][j] + stiff[i][j]),
                    0.0,
                );
                a.add(ri + 4 * nz, cj + 4 * nz, -(ksq * mass[i][j] + 2.0 * stiff[i][j]), 0.0);
                a.add(ri, cj + 2 * nz, -k1 * k2 * mass[i][j], 0.0);
                a.add(ri + 2 * nz, cj, -k1 * k2 * mass[i][j], 0.0);
                a.add(ri, cj + 4 * nz, 0.0, -k1 * g[i][j]);
                a.add(ri + 4 * nz, cj, 0.0, k1 * g[j][i]);
                a.add(ri + 2 * nz, cj + 4 * nz, 0.0, -k2 * g[i][j]);
                a.add(ri + 4 * nz, cj + 2 * nz, 0.0, k2 * g[j][i]);
            }
            for j in 0..2 {
                let pc = p_dof(verts[j], nz);
                a.add(ri, pc, 0.0, -k1 * pv[i][j]);
                a.add(ri + 2 * nz, pc, 0.0, -k2 * pv[i][j]);
                a.add(ri + 4 * nz, pc, pg[i][j], 0.0);
                a.add(pc, ri, 0.0, -k1 * pv[i][j]);
                a.add(pc, ri + 2 * nz, 0.0, -k2 * pv[i][j]);
                a.add(pc, ri + 4 * nz, -pg[i][j], 0.0);
            }
        }
    }

    // Interface trace terms.
    for c in 0..2 {
        let d = trace_dof(c, nz);
        a.add(d, d, -cfg.beta, 0.0);
    }
    a.add(trace_dof(2, nz), J, 1.0, 0.0);

    (a, m)
}

pub fn assert_close_cmats(label: &str, lib: &CMat, orc: &CDense, rel: f64) {
    assert_eq!(lib.n, orc.n);
    let n = lib.n;
    let mut amax = 1.0f64;
    for i in 0..n {
        for j in 0..n {
            amax = amax.max(lib.at(i, j).norm());
            amax = amax.max(Complex64::new(orc.re[i * n + j], orc.im[i * n + j]).norm());
        }
    }
    let tol = rel * amax;
    let mut worst = (0usize, 0usize, 0.0f64);
    for i in 0..n {
        for j in 0..n {
            let d = (lib.at(i, j) - Complex64::new(orc.re[i * n + j], orc.im[i * n + j])).norm();
            if d > worst.2 {
                worst = (i, j, d);
            }
        }
    }
    assert!(
        worst.2 <= tol,
        "{label}: entry ({}, {}) differs by {:.3e} (tol {:.3e}): lib {} vs oracle {}+{}i",
        worst.0,
        worst.1,
        worst.2,
        tol,
        lib.at(worst.0, worst.1),
        orc.re[worst.0 * n + worst.1],
        orc.im[worst.0 * n + worst.1],
    );
}

/// Compare mode pencils against the finite-difference oracle on a coarse
/// vertical grid, for one axis mode and one oblique mode.
pub fn check_mode_pencils() {
    let cfg = SpectralConfig {
        nz: 4,
        ..SpectralConfig::default()
    };
    for (m1, m2) in [(1, 0), (1, 2)] {
        let pencil = mode_pencil(m1, m2, &cfg).unwrap();
        assert_eq!(pencil.n, 5 + 7 * cfg.nz);
        let (a, m) = pencil_oracle(m1, m2, &cfg);
        assert_close_cmats(&format!("A({m1},{m2})"), &pencil.a, &a, 1e-10);
        assert_close_cmats(&format!("M({m1},{m2})"), &pencil.m, &m, 1e-10);
    }
}
