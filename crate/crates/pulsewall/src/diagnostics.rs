//! Run diagnostics: energy bookkeeping, dissipation checks, pulse arrival
//! detection, and interface profile comparison.
//!
//! Everything here operates on plain sampled data, so the same checks apply
//! to either wall model and to synthetic series in tests.

/// Energy account of one time level.
///
/// `dissipation_rate` and `boundary_power` are instantaneous rates evaluated
/// on the fields of this level; the implicit stepper guarantees
/// `E(t+dt) - E(t) + dt * dissipation_rate(t+dt) <= dt * boundary_power(t+dt)`
/// up to roundoff, with the slack being the scheme's own numerical damping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBudget {
    pub e_kin: f64,
    pub e_pot: f64,
    pub dissipation_rate: f64,
    pub boundary_power: f64,
}

impl EnergyBudget {
    pub fn total(&self) -> f64 {
        self.e_kin + self.e_pot
    }
}

/// Verify the discrete energy inequality across a recorded series.
///
/// For every step the physical dissipation must be covered by the energy
/// decrement plus the boundary work, with a slack of `tol` times the series
/// energy scale. A violation reports the offending step.
pub fn check_dissipation(budgets: &[EnergyBudget], dt: f64, tol: f64) -> Result<(), String> {
    let scale = budgets
        .iter()
        .map(|b| b.total())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    for (n, pair) in budgets.windows(2).enumerate() {
        let (prev, next) = (pair[0], pair[1]);
        let lhs = next.total() - prev.total() + dt * next.dissipation_rate;
        let rhs = dt * next.boundary_power + tol * scale;
        if lhs > rhs {
            return Err(format!(
                "energy inequality violated at step {}: gain {:.6e} exceeds allowance {:.6e}",
                n + 1,
                lhs,
                rhs
            ));
        }
    }
    Ok(())
}

/// First time the series reaches `fraction` of its maximum, linearly
/// interpolated between samples. `None` when the series never rises above
/// zero.
///
/// With a threshold crossing inside step k, the reported time lies between
/// `times[k-1]` and `times[k]`; a front that is exactly piecewise linear in
/// time is therefore located exactly.
pub fn wave_arrival_time(times: &[f64], vals: &[f64], fraction: f64) -> Option<f64> {
    assert_eq!(times.len(), vals.len());
    assert!(fraction > 0.0 && fraction < 1.0);
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > 0.0) {
        return None;
    }
    let thr = fraction * max;
    let k = vals.iter().position(|&v| v >= thr)?;
    if k == 0 {
        return Some(times[0]);
    }
    let (t0, t1) = (times[k - 1], times[k]);
    let (v0, v1) = (vals[k - 1], vals[k]);
    Some(t0 + (thr - v0) / (v1 - v0) * (t1 - t0))
}

/// Interface trace of one wall model at one instant, sampled on the shared
/// interface gridlines.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceProfile {
    pub x: Vec<f64>,
    /// Transverse wall displacement.
    pub displacement: Vec<f64>,
    /// Pore pressure jump across the wall (top minus bottom, negated into
    /// the bottom-load convention both models share).
    pub pressure_jump: Vec<f64>,
    /// Wall-normal structure velocity.
    pub normal_velocity: Vec<f64>,
}

/// Trapezoid-rule L2 norm of samples over their coordinate grid.
pub fn l2_trapezoid(x: &[f64], v: &[f64]) -> f64 {
    assert_eq!(x.len(), v.len());
    let mut acc = 0.0;
    for k in 1..x.len() {
        let h = x[k] - x[k - 1];
        acc += 0.5 * h * (v[k - 1] * v[k - 1] + v[k] * v[k]);
    }
    acc.sqrt()
}

/// Relative L2 distances between two interface profiles on the same grid:
/// `(displacement, pressure_jump)`, each normalized by the larger of the two
/// field norms (floored away from zero).
pub fn compare_profiles(a: &InterfaceProfile, b: &InterfaceProfile) -> (f64, f64) {
    assert_eq!(a.x.len(), b.x.len());
    let rel = |fa: &[f64], fb: &[f64]| {
        let diff: Vec<f64> = fa.iter().zip(fb).map(|(p, q)| p - q).collect();
        let na = l2_trapezoid(&a.x, fa);
        let nb = l2_trapezoid(&a.x, fb);
        l2_trapezoid(&a.x, &diff) / na.max(nb).max(1e-12)
    };
    (
        rel(&a.displacement, &b.displacement),
        rel(&a.pressure_jump, &b.pressure_jump),
    )
}

/// Root-mean-square difference of two equally sampled fields.
pub fn rms_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    assert!(!a.is_empty());
    let s: f64 = a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum();
    (s / a.len() as f64).sqrt()
}

/// Ratios of successive entries; for errors of a first-order scheme under
/// time step halving these approach 2.
pub fn convergence_ratios(diffs: &[f64]) -> Vec<f64> {
    diffs.windows(2).map(|w| w[0] / w[1]).collect()
}
