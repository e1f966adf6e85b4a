//! Per-mode stability analysis of the damped, linearized wall-channel
//! operator on a horizontally periodic layer.
//!
//! In the nondimensional setting (unit layer depth, unit plate inertia,
//! rigidity, storage, permeability, and viscosity) the coupled operator
//! block-diagonalizes over horizontal Fourier modes k = 2 pi (m1, m2). For
//! one mode the unknowns reduce to four interface scalars (deflection w,
//! its velocity v, the pressure jump j, the mean pore pressure b) plus
//! vertical profiles of the three fluid velocity components (quadratic
//! elements) and the fluid pressure (linear elements) on (-1, 0), clamped
//! at the bottom. Each mode yields a dense generalized eigenvalue pencil
//! A x = lambda M x whose M is singular on the pressure rows (the
//! divergence constraint carries no time derivative), so the pencil has
//! infinite eigenvalues that are filtered by magnitude.
//!
//! The headline quantity is the decay margin mu0: minus the largest real
//! part over all computed finite eigenvalues across modes. A positive mu0
//! witnesses exponential decay of the damped system. Each accepted pair is
//! double-checked against an energy identity whose lambda-free terms are
//! all nonnegative, the discrete form of the argument that pins the
//! spectrum to the left half-plane.
//!
//! Caveat: this is a discrete witness for the point spectrum of a family
//! of mode pencils; it cannot exclude essential spectrum of the continuous
//! operator.

use num_complex::Complex64;
use openblas_src as _;

use crate::fem::{gauss_interval, INT_ORDER};

/// Parameters of the nondimensional mode family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    /// Plate velocity regularization (fourth-order damping).
    pub eps1: f64,
    /// Pressure-jump regularization (second-order damping).
    pub eps2: f64,
    /// Plate spring coefficient.
    pub gamma_p: f64,
    /// Interface slip coefficient.
    pub beta: f64,
    /// Modes m1, m2 range over [-k_max, k_max].
    pub k_max: i32,
    /// Vertical cells on (-1, 0).
    pub nz: usize,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            eps1: 1.0,
            eps2: 1.0,
            gamma_p: 1.0,
            beta: 1.0,
            k_max: 4,
            nz: 32,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SpectralError {
    #[error("invalid spectral configuration: {0}")]
    Invalid(String),
    #[error("eigenvalue solver failed to converge (info {0})")]
    Convergence(i32),
}

impl SpectralConfig {
    pub fn validate(&self) -> Result<(), SpectralError> {
        let bad = |m: &str| Err(SpectralError::Invalid(m.to_string()));
        if !(self.eps1 > 0.0) {
            return bad("eps1 must be positive");
        }
        if !(self.eps2 > 0.0) {
            return bad("eps2 must be positive");
        }
        if !(self.gamma_p >= 0.0) {
            return bad("gamma_p must be nonnegative");
        }
        if !(self.beta >= 0.0) {
            return bad("beta must be nonnegative");
        }
        if self.k_max < 0 {
            return bad("k_max must be nonnegative");
        }
        if self.nz < 4 {
            return bad("nz must be at least 4");
        }
        Ok(())
    }
}

/// Dense complex matrix in column-major storage (the layout the eigensolver
/// consumes in place).
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub n: usize,
    pub d: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n: usize) -> CMat {
        CMat {
            n,
            d: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.d[i + j * self.n]
    }

    pub fn add(&mut self, i: usize, j: usize, v: Complex64) {
        self.d[i + j * self.n] += v;
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            let xj = x[j];
            if xj != Complex64::new(0.0, 0.0) {
                for i in 0..n {
                    y[i] += self.d[i + j * n] * xj;
                }
            }
        }
        y
    }
}

/// Generalized pencil of one horizontal mode.
pub struct ModePencil {
    /// Integer mode numbers.
    pub mode: (i32, i32),
    /// Wave vector 2 pi (m1, m2).
    pub k: (f64, f64),
    pub nz: usize,
    pub n: usize,
    /// Stiffness-side matrix; eigenvalues solve a x = lambda m x.
    pub a: CMat,
    /// Mass-side matrix, zero on the pressure rows.
    pub m: CMat,
    pub cfg: SpectralConfig,
}

// Scalar dof indices.
const W: usize = 0;
const V: usize = 1;
const J: usize = 2;
const B: usize = 3;

/// Free velocity dofs per component: quadratic nodes minus the clamped
/// bottom node.
fn n_u(nz: usize) -> usize {
    2 * nz
}

fn u_dof(c: usize, node: usize, nz: usize) -> Option<usize> {
    // Global quadratic nodes 0..=2nz from bottom; node 0 is clamped.
    if node == 0 {
        None
    } else {
        Some(4 + c * n_u(nz) + node - 1)
    }
}

fn p_dof(vert: usize, nz: usize) -> usize {
    4 + 3 * n_u(nz) + vert
}

/// Total pencil dimension.
pub fn pencil_dim(nz: usize) -> usize {
    4 + 3 * n_u(nz) + nz + 1
}

/// Index of the interface trace dof of velocity component `c`.
fn trace_dof(c: usize, nz: usize) -> usize {
    u_dof(c, 2 * nz, nz).unwrap()
}

fn p2_line(t: f64) -> ([f64; 3], [f64; 3]) {
    (
        [
            (1.0 - t) * (1.0 - 2.0 * t),
            4.0 * t * (1.0 - t),
            t * (2.0 * t - 1.0),
        ],
        [4.0 * t - 3.0, 4.0 - 8.0 * t, 4.0 * t - 1.0],
    )
}

/// Assemble the pencil of mode (m1, m2).
pub fn mode_pencil(m1: i32, m2: i32, cfg: &SpectralConfig) -> Result<ModePencil, SpectralError> {
    cfg.validate()?;
    let nz = cfg.nz;
    let n = pencil_dim(nz);
    let k1 = 2.0 * std::f64::consts::PI * m1 as f64;
    let k2 = 2.0 * std::f64::consts::PI * m2 as f64;
    let ksq = k1 * k1 + k2 * k2;
    let k4 = ksq * ksq;
    let cx = 1.0 - ksq / 12.0;
    let re = Complex64::new;
    let im = |v: f64| Complex64::new(0.0, v);

    let mut a = CMat::zeros(n);
    let mut m = CMat::zeros(n);

    // Interface scalar rows; the stiffness side carries minus the
    // lambda-free coefficients.
    m.add(W, W, re(1.0, 0.0));
    a.add(W, V, re(1.0, 0.0));
    m.add(V, V, re(1.0, 0.0));
    a.add(V, W, re(-(k4 + cfg.gamma_p), 0.0));
    a.add(V, V, re(-cfg.eps1 * k4, 0.0));
    a.add(V, J, re(-cx, 0.0));
    m.add(J, J, re(1.0, 0.0));
    a.add(J, V, re(-(ksq - 12.0), 0.0));
    a.add(J, J, re(-(cfg.eps2 * ksq + 48.0), 0.0));
    a.add(J, B, re(-72.0, 0.0));
    a.add(J, trace_dof(2, nz), re(-12.0, 0.0));
    m.add(B, B, re(1.0, 0.0));
    a.add(B, J, re(-6.0, 0.0));
    a.add(B, B, re(-12.0, 0.0));

    // Vertical fluid discretization.
    let h = 1.0 / nz as f64;
    let quad = gauss_interval(INT_ORDER);
    // Element integrals: mass, stiffness, deriv-against-value, and the
    // pressure pairings.
    let mut mass = [[0.0; 3]; 3];
    let mut stiff = [[0.0; 3]; 3];
    // g[i][j] = integral of Ni' Nj.
    let mut g = [[0.0; 3]; 3];
    // pv[i][j] = integral of Pi Nj, pg[i][j] = integral of Pi Nj'.
    let mut pv = [[0.0; 2]; 3];
    let mut pg = [[0.0; 2]; 3];
    for &(t, w) in &quad {
        let (nv, nd) = p2_line(t);
        let lv = [1.0 - t, t];
        for i in 0..3 {
            for j in 0..3 {
                mass[i][j] += w * h * nv[i] * nv[j];
                stiff[i][j] += w / h * nd[i] * nd[j];
                g[i][j] += w * nd[i] * nv[j];
            }
            for j in 0..2 {
                pv[i][j] += w * h * lv[j] * nv[i];
                pg[i][j] += w * lv[j] * nd[i];
            }
        }
    }

    for e in 0..nz {
        let nodes = [2 * e, 2 * e + 1, 2 * e + 2];
        let verts = [e, e + 1];
        for i in 0..3 {
            let Some(row_base) = u_dof(0, nodes[i], nz).map(|d| d - 4) else {
                continue;
            };
            let ri = 4 + row_base;
            for j in 0..3 {
                let Some(col_base) = u_dof(0, nodes[j], nz).map(|d| d - 4) else {
                    continue;
                };
                let cj = 4 + col_base;
                let nu = n_u(nz);
                // Component mass blocks.
                for c in 0..3 {
                    m.add(ri + c * nu, cj + c * nu, re(mass[i][j], 0.0));
                }
                // Viscous form, row component then column component.
                a.add(ri, cj, re(-((2.0 * k1 * k1 + k2 * k2) * mass[i][j] + stiff[i][j]), 0.0));
                a.add(
                    ri + nu,
                    cj + nu,
                    re(-((k1 * k1 + 2.0 * k2 * k2) * mass[i][j] + stiff[i][j]), 0.0),
                );
                a.add(
                    ri + 2 * nu,
                    cj + 2 * nu,
                    re(-(ksq * mass[i][j] + 2.0 * stiff[i][j]), 0.0),
                );
                a.add(ri, cj + nu, re(-k1 * k2 * mass[i][j], 0.0));
                a.add(ri + nu, cj, re(-k1 * k2 * mass[i][j], 0.0));
                // Rotation-free cross terms between horizontal components
                // and the vertical one.
                a.add(ri, cj + 2 * nu, -im(k1 * g[i][j]));
                a.add(ri + 2 * nu, cj, im(k1 * g[j][i]));
                a.add(ri + nu, cj + 2 * nu, -im(k2 * g[i][j]));
                a.add(ri + 2 * nu, cj + nu, im(k2 * g[j][i]));
            }
            // Pressure gradient on the momentum rows and the divergence
            // constraint rows, an exact adjoint pair.
            for j in 0..2 {
                let pc = p_dof(verts[j], nz);
                let nu = n_u(nz);
                a.add(ri, pc, -im(k1 * pv[i][j]));
                a.add(ri + nu, pc, -im(k2 * pv[i][j]));
                a.add(ri + 2 * nu, pc, re(pg[i][j], 0.0));
                a.add(pc, ri, -im(k1 * pv[i][j]));
                a.add(pc, ri + nu, -im(k2 * pv[i][j]));
                a.add(pc, ri + 2 * nu, re(-pg[i][j], 0.0));
            }
        }
    }

    // Interface traces: slip drag on the horizontal components, the jump
    // load on the vertical one, and the filtration coupling already placed
    // in the jump row.
    for c in 0..2 {
        let d = trace_dof(c, nz);
        a.add(d, d, re(-cfg.beta, 0.0));
    }
    a.add(trace_dof(2, nz), J, re(1.0, 0.0));

    Ok(ModePencil {
        mode: (m1, m2),
        k: (k1, k2),
        nz,
        n,
        a,
        m,
        cfg: *cfg,
    })
}

/// One accepted eigenpair.
pub struct EigenPair {
    pub lambda: Complex64,
    pub vector: Vec<Complex64>,
    /// || A x - lambda M x || / || x ||.
    pub residual: f64,
}

/// Finite eigenvalues keep |lambda| below this by default; the divergence
/// constraint's infinite eigenvalues sit many orders above it.
pub const INFINITE_CUTOFF: f64 = 1e9;

/// LAPACK generalized eigensolve (QZ); returns (alpha, beta, right vectors).
fn generalized_eigen(
    a: &CMat,
    m: &CMat,
) -> Result<(Vec<Complex64>, Vec<Complex64>, CMat), SpectralError> {
    let n = a.n;
    assert_eq!(m.n, n);
    let ni = n as i32;
    let mut aw = a.d.clone();
    let mut bw = m.d.clone();
    let mut alpha = vec![Complex64::new(0.0, 0.0); n];
    let mut beta = vec![Complex64::new(0.0, 0.0); n];
    let mut vr = CMat::zeros(n);
    let mut rwork = vec![0.0f64; 8 * n];
    let mut info = 0i32;
    let jobvl = b'N' as core::ffi::c_char;
    let jobvr = b'V' as core::ffi::c_char;
    let one = 1i32;
    unsafe {
        // Workspace query, then the real call.
        let mut wkopt = [Complex64::new(0.0, 0.0)];
        let lwork_query = -1i32;
        lapack_sys::zggev_(
            &jobvl,
            &jobvr,
            &ni,
            aw.as_mut_ptr() as *mut _,
            &ni,
            bw.as_mut_ptr() as *mut _,
            &ni,
            alpha.as_mut_ptr() as *mut _,
            beta.as_mut_ptr() as *mut _,
            std::ptr::null_mut(),
            &one,
            vr.d.as_mut_ptr() as *mut _,
            &ni,
            wkopt.as_mut_ptr() as *mut _,
            &lwork_query,
            rwork.as_mut_ptr(),
            &mut info,
        );
        if info != 0 {
            return Err(SpectralError::Convergence(info));
        }
        let lwork = wkopt[0].re.max(2.0 * n as f64) as i32;
        let mut work = vec![Complex64::new(0.0, 0.0); lwork as usize];
        lapack_sys::zggev_(
            &jobvl,
            &jobvr,
            &ni,
            aw.as_mut_ptr() as *mut _,
            &ni,
            bw.as_mut_ptr() as *mut _,
            &ni,
            alpha.as_mut_ptr() as *mut _,
            beta.as_mut_ptr() as *mut _,
            std::ptr::null_mut(),
            &one,
            vr.d.as_mut_ptr() as *mut _,
            &ni,
            work.as_mut_ptr() as *mut _,
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(SpectralError::Convergence(info));
    }
    Ok((alpha, beta, vr))
}

/// All finite eigenpairs of a pencil under a magnitude cutoff.
pub fn mode_eigenvalues_with_cutoff(
    pencil: &ModePencil,
    cutoff: f64,
) -> Result<Vec<EigenPair>, SpectralError> {
    let (alpha, beta, vr) = generalized_eigen(&pencil.a, &pencil.m)?;
    let n = pencil.n;
    let mut pairs = Vec::new();
    for j in 0..n {
        // QZ reports lambda = alpha / beta; beta near zero marks the
        // constraint-induced infinite eigenvalues.
        if alpha[j].norm() > cutoff * beta[j].norm() {
            continue;
        }
        let lambda = alpha[j] / beta[j];
        let x: Vec<Complex64> = (0..n).map(|i| vr.at(i, j)).collect();
        let norm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let ax = pencil.a.matvec(&x);
        let mx = pencil.m.matvec(&x);
        let rnorm = ax
            .iter()
            .zip(&mx)
            .map(|(a, m)| (a - lambda * m).norm_sqr())
            .sum::<f64>()
            .sqrt();
        pairs.push(EigenPair {
            lambda,
            vector: x,
            residual: rnorm / norm,
        });
    }
    pairs.sort_by(|a, b| {
        (b.lambda.re, b.lambda.im)
            .partial_cmp(&(a.lambda.re, a.lambda.im))
            .unwrap()
    });
    Ok(pairs)
}

/// Finite eigenpairs under the default cutoff.
pub fn mode_eigenvalues(pencil: &ModePencil) -> Result<Vec<EigenPair>, SpectralError> {
    mode_eigenvalues_with_cutoff(pencil, INFINITE_CUTOFF)
}

/// Evaluate the energy identity of a pencil at an eigenpair, term by term,
/// and return |identity| / (sum of term magnitudes).
///
/// The identity multiplies the momentum, jump, mean-pressure, and fluid
/// rows by the conjugates of (v, j/12, b, u), eliminates w through
/// v = lambda w, and groups the result into lambda-weighted norms,
/// nonnegative dissipation terms, two purely imaginary exchange terms, and
/// the (weakly zero) pressure-divergence pairing. It vanishes for exact
/// eigenpairs; its real part forces Re lambda <= 0 term by term.
pub fn eigen_energy_residual(pencil: &ModePencil, pair: &EigenPair) -> f64 {
    let x = &pair.vector;
    let norm2 = x.iter().map(|v| v.norm_sqr()).sum::<f64>();
    assert!(norm2 > 0.0, "energy identity needs a nonzero vector");
    let lambda = pair.lambda;
    let cfg = &pencil.cfg;
    let (k1, k2) = pencil.k;
    let ksq = k1 * k1 + k2 * k2;
    let k4 = ksq * ksq;
    let cx = 1.0 - ksq / 12.0;
    let nz = pencil.nz;
    let h = 1.0 / nz as f64;
    let re = Complex64::new;

    let w = x[W];
    let v = x[V];
    let j = x[J];
    let b = x[B];
    let uc = |c: usize, node: usize| -> Complex64 {
        match u_dof(c, node, nz) {
            Some(d) => x[d],
            None => re(0.0, 0.0),
        }
    };

    // Quadrature accumulation of the fluid volume terms.
    let quad = gauss_interval(INT_ORDER);
    let mut mass_u = 0.0;
    let mut visc = 0.0;
    let mut press = re(0.0, 0.0);
    for e in 0..nz {
        let nodes = [2 * e, 2 * e + 1, 2 * e + 2];
        for &(t, wq) in &quad {
            let (nv, nd) = p2_line(t);
            let mut val = [re(0.0, 0.0); 3];
            let mut der = [re(0.0, 0.0); 3];
            for c in 0..3 {
                for i in 0..3 {
                    val[c] += uc(c, nodes[i]) * nv[i];
                    der[c] += uc(c, nodes[i]) * (nd[i] / h);
                }
            }
            let pi = x[p_dof(e, nz)] * (1.0 - t) + x[p_dof(e + 1, nz)] * t;
            let dw = wq * h;
            mass_u += dw * (val[0].norm_sqr() + val[1].norm_sqr() + val[2].norm_sqr());
            visc += dw
                * ((2.0 * k1 * k1 + k2 * k2) * val[0].norm_sqr()
                    + (k1 * k1 + 2.0 * k2 * k2) * val[1].norm_sqr()
                    + ksq * val[2].norm_sqr()
                    + der[0].norm_sqr()
                    + der[1].norm_sqr()
                    + 2.0 * der[2].norm_sqr()
                    + 2.0 * k1 * k2 * (val[0] * val[1].conj()).re
                    - 2.0 * k1 * (val[2] * der[0].conj()).im
                    - 2.0 * k2 * (val[2] * der[1].conj()).im);
            let div = re(0.0, 1.0) * (val[0] * k1 + val[1] * k2) + der[2];
            press -= dw * pi * div.conj();
        }
    }

    let tr = |c: usize| uc(c, 2 * nz);
    let terms = [
        lambda * v.norm_sqr(),
        lambda.conj() * ((k4 + cfg.gamma_p) * w.norm_sqr()),
        re(cfg.eps1 * k4 * v.norm_sqr(), 0.0),
        lambda / 12.0 * j.norm_sqr(),
        re(cfg.eps2 * ksq / 12.0 * j.norm_sqr(), 0.0),
        lambda * b.norm_sqr(),
        re(j.norm_sqr(), 0.0),
        re(12.0 * (b + j / 2.0).norm_sqr(), 0.0),
        lambda * mass_u,
        re(visc, 0.0),
        re(cfg.beta * (tr(0).norm_sqr() + tr(1).norm_sqr()), 0.0),
        cx * (j * v.conj() - v * j.conj()),
        tr(2) * j.conj() - j * tr(2).conj(),
        press,
    ];
    let total: Complex64 = terms.iter().sum();
    let scale: f64 = terms.iter().map(|t| t.norm()).sum();
    if scale == 0.0 {
        return 0.0;
    }
    total.norm() / scale
}

/// One line of the spectrum table.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumRow {
    pub mode: (i32, i32),
    pub k: (f64, f64),
    pub lambda: Complex64,
    pub residual: f64,
    pub identity_residual: f64,
}

/// Result of a full mode sweep.
pub struct SpectralSweep {
    /// Minus the largest real part over all computed eigenvalues; positive
    /// means every computed mode decays.
    pub mu0_estimate: f64,
    pub rows: Vec<SpectrumRow>,
}

impl SpectralSweep {
    pub fn max_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn max_identity_residual(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.identity_residual)
            .fold(0.0, f64::max)
    }
}

/// Sweep all modes |m1|, |m2| <= k_max and estimate the decay margin.
pub fn spectral_abscissa(cfg: &SpectralConfig) -> Result<SpectralSweep, SpectralError> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut max_re = f64::NEG_INFINITY;
    for m1 in -cfg.k_max..=cfg.k_max {
        for m2 in -cfg.k_max..=cfg.k_max {
            let pencil = mode_pencil(m1, m2, cfg)?;
            for pair in mode_eigenvalues(&pencil)? {
                let identity = eigen_energy_residual(&pencil, &pair);
                max_re = max_re.max(pair.lambda.re);
                rows.push(SpectrumRow {
                    mode: (m1, m2),
                    k: pencil.k,
                    lambda: pair.lambda,
                    residual: pair.residual,
                    identity_residual: identity,
                });
            }
        }
    }
    Ok(SpectralSweep {
        mu0_estimate: -max_re,
        rows,
    })
}
