//! Physical parameters, run configuration, and the plain-text config format.
//!
//! Everything is in CGS units. Defaults reproduce the reference arterial-flow
//! setup: a 5 cm channel of half-height 0.5 cm capped by a stiff poroelastic
//! wall of thickness 0.01 cm, driven by a single 3 ms cosine pressure pulse.

use std::fmt;
use std::path::Path;

/// Channel fluid parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidParams {
    /// Fluid density (g/cm^3).
    pub rho_f: f64,
    /// Dynamic viscosity (g/(cm s)).
    pub mu_f: f64,
    /// Tangential slip coefficient on the wall interface (g/(cm^2 s)).
    pub beta: f64,
}

/// Bulk poroelastic wall parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BulkBiotParams {
    /// Solid density (g/cm^3).
    pub rho_b: f64,
    /// First Lame coefficient (dyne/cm^2).
    pub lambda_b: f64,
    /// Shear modulus (dyne/cm^2).
    pub mu_b: f64,
    /// Permeability over fluid viscosity (cm^3 s/g).
    pub kappa: f64,
    /// Storage coefficient (cm^2/dyne).
    pub c0: f64,
    /// Biot–Willis coupling coefficient, in [0, 1].
    pub alpha: f64,
    /// Transverse spring stiffness (dyne/cm^4).
    pub gamma: f64,
}

/// Coefficients of the reduced poroelastic plate, per unit midsurface area.
///
/// Produced from [`BulkBiotParams`] by [`derive_plate_coefficients`]; the
/// reduction averages the thin wall through its thickness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateCoeffs {
    /// Surface density (g/cm^3).
    pub rho_p: f64,
    /// Bending rigidity per unit thickness cubed (dyne/cm^2).
    pub d: f64,
    /// Transverse spring stiffness (dyne/cm^4).
    pub gamma_p: f64,
    /// Storage coefficient (cm^2/dyne).
    pub c0_p: f64,
    /// Reduced elastic-pressure coupling coefficient, dimensionless.
    pub alpha_p: f64,
    /// Permeability over fluid viscosity (cm^3 s/g).
    pub kappa_p: f64,
}

/// Channel and wall geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    /// Channel length (cm).
    pub l: f64,
    /// Channel half-height; the fluid occupies [0, l] x [-r_f, 0] (cm).
    pub r_f: f64,
    /// Wall thickness; the bulk wall occupies [0, l] x [0, h] (cm).
    pub h: f64,
}

/// Inlet pressure pulse: a single raised-cosine burst.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    /// Peak pulse pressure (dyne/cm^2).
    pub p_max: f64,
    /// Pulse duration (s).
    pub t_pulse: f64,
}

/// Which wall model the driver runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    /// Reduced poroelastic plate on the interface.
    Plate,
    /// Bulk Biot layer meshed in 2D.
    Biot,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::Plate => write!(f, "plate"),
            Problem::Biot => write!(f, "biot"),
        }
    }
}

/// Complete run configuration: physical parameters plus discretization and
/// instrumentation knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub fluid: FluidParams,
    pub biot: BulkBiotParams,
    pub geometry: Geometry,
    pub pulse: PulseSpec,
    /// Fluid cells along the channel. Must equal `nx_p`.
    pub nx_f: usize,
    /// Fluid cells across the channel.
    pub ny_f: usize,
    /// Wall cells along the channel. Must equal `nx_f`.
    pub nx_p: usize,
    /// Wall cells through the thickness (bulk model only).
    pub ny_p: usize,
    /// Time step (s).
    pub dt: f64,
    /// Final time (s).
    pub t_end: f64,
    /// Wall model selector.
    pub problem: Problem,
    /// Interface mass-conservation penalty for the bulk model; `None` means
    /// the default `10 * max(mu_f, 1)`.
    pub nitsche_penalty: Option<f64>,
    /// Snapshot cadence in steps.
    pub cadence: usize,
    /// Pressure probe station along the channel (cm).
    pub x_probe: f64,
    /// Arrival threshold as a fraction of the probe-series maximum.
    pub threshold_fraction: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            fluid: FluidParams {
                rho_f: 1.0,
                mu_f: 0.035,
                beta: 1.0,
            },
            biot: BulkBiotParams {
                rho_b: 1.1,
                lambda_b: 1.7e6,
                mu_b: 5.58e5,
                kappa: 1e-8,
                c0: 1e-3,
                alpha: 1.0,
                gamma: 4e6,
            },
            geometry: Geometry {
                l: 5.0,
                r_f: 0.5,
                h: 0.01,
            },
            pulse: PulseSpec {
                p_max: 13333.0,
                t_pulse: 3e-3,
            },
            nx_f: 300,
            ny_f: 25,
            nx_p: 300,
            ny_p: 3,
            dt: 5e-5,
            t_end: 0.04,
            problem: Problem::Plate,
            nitsche_penalty: None,
            cadence: 100,
            x_probe: 5.0,
            threshold_fraction: 0.2,
        }
    }
}

/// Named run profiles: the reference resolution and a half-resolution variant
/// that finishes in desk time, each for the thick (0.01 cm) and thin
/// (0.001 cm) wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    PaperH01,
    PaperH001,
    DeskH01,
    DeskH001,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::PaperH01,
        Preset::PaperH001,
        Preset::DeskH01,
        Preset::DeskH001,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::PaperH01 => "paper-h01",
            Preset::PaperH001 => "paper-h001",
            Preset::DeskH01 => "desk-h01",
            Preset::DeskH001 => "desk-h001",
        }
    }

    pub fn from_name(name: &str) -> Option<Preset> {
        Preset::ALL.iter().copied().find(|p| p.name() == name)
    }

    /// The configuration this profile expands to.
    pub fn config(self) -> SimConfig {
        let mut cfg = SimConfig::default();
        match self {
            Preset::PaperH01 => {}
            Preset::PaperH001 => {
                cfg.geometry.h = 0.001;
                cfg.t_end = 0.12;
            }
            Preset::DeskH01 => {
                cfg.nx_f = 150;
                cfg.ny_f = 13;
                cfg.nx_p = 150;
                cfg.dt = 1e-4;
            }
            Preset::DeskH001 => {
                cfg.nx_f = 150;
                cfg.ny_f = 13;
                cfg.nx_p = 150;
                cfg.dt = 1e-4;
                cfg.geometry.h = 0.001;
                cfg.t_end = 0.12;
            }
        }
        cfg
    }
}

/// Configuration errors: I/O, line-level parse failures, and validation
/// failures that name the violated invariant.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid configuration: {msg}")]
    Invalid { msg: String },
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { msg: msg.into() }
}

impl SimConfig {
    /// The interface mass-conservation penalty actually used by the bulk model.
    pub fn nitsche_penalty_value(&self) -> f64 {
        self.nitsche_penalty
            .unwrap_or_else(|| 10.0 * self.fluid.mu_f.max(1.0))
    }

    /// Check every invariant; errors name the offending field.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let f = &self.fluid;
        if !(f.rho_f > 0.0) {
            return Err(invalid("rho_f must be positive"));
        }
        if !(f.mu_f > 0.0) {
            return Err(invalid("mu_f must be positive"));
        }
        if !(f.beta >= 0.0) {
            return Err(invalid("beta must be nonnegative"));
        }
        let b = &self.biot;
        if !(b.rho_b > 0.0) {
            return Err(invalid("rho_b must be positive"));
        }
        if !(b.mu_b > 0.0) {
            return Err(invalid("mu_b must be positive"));
        }
        if !(b.lambda_b + 2.0 * b.mu_b > 0.0) {
            return Err(invalid("lambda_b + 2*mu_b must be positive"));
        }
        if !(b.kappa > 0.0) {
            return Err(invalid("kappa must be positive"));
        }
        if !(b.c0 > 0.0) {
            return Err(invalid("c0 must be positive"));
        }
        if !(0.0..=1.0).contains(&b.alpha) {
            return Err(invalid("alpha must lie in [0, 1]"));
        }
        if !(b.gamma >= 0.0) {
            return Err(invalid("gamma must be nonnegative"));
        }
        let g = &self.geometry;
        if !(g.l > 0.0) {
            return Err(invalid("l must be positive"));
        }
        if !(g.r_f > 0.0) {
            return Err(invalid("r_f must be positive"));
        }
        if !(g.h > 0.0) {
            return Err(invalid("h must be positive"));
        }
        let p = &self.pulse;
        if !(p.p_max >= 0.0) {
            return Err(invalid("p_max must be nonnegative"));
        }
        if !(p.t_pulse > 0.0) {
            return Err(invalid("t_pulse must be positive"));
        }
        if self.nx_f == 0 || self.ny_f == 0 || self.nx_p == 0 || self.ny_p == 0 {
            return Err(invalid("mesh resolutions must be at least 1 cell"));
        }
        if self.nx_f != self.nx_p {
            return Err(invalid(
                "nx_f must equal nx_p so the interface grids coincide",
            ));
        }
        if !(self.dt > 0.0) {
            return Err(invalid("dt must be positive"));
        }
        if !(self.t_end >= 0.0) {
            return Err(invalid("t_end must be nonnegative"));
        }
        if let Some(pen) = self.nitsche_penalty {
            if !(pen > 0.0) {
                return Err(invalid("nitsche_penalty must be positive"));
            }
        }
        if self.cadence == 0 {
            return Err(invalid("cadence must be at least 1"));
        }
        if !(self.x_probe >= 0.0 && self.x_probe <= g.l) {
            return Err(invalid("x_probe must lie in [0, l]"));
        }
        if !(self.threshold_fraction > 0.0 && self.threshold_fraction < 1.0) {
            return Err(invalid("threshold_fraction must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Reduce the bulk wall parameters to plate coefficients.
///
/// The reduction averages the thin layer through its thickness: the plate
/// keeps the solid density and spring stiffness, gains a storage contribution
/// from the constrained compression of the skeleton, and bends with the
/// plane-strain rigidity of the layer.
pub fn derive_plate_coefficients(b: &BulkBiotParams) -> Result<PlateCoeffs, ConfigError> {
    let stiff = b.lambda_b + 2.0 * b.mu_b;
    if !(stiff > 0.0) {
        return Err(invalid("lambda_b + 2*mu_b must be positive"));
    }
    let coeffs = PlateCoeffs {
        rho_p: b.rho_b,
        d: b.mu_b * (b.lambda_b + b.mu_b) / (3.0 * stiff),
        gamma_p: b.gamma,
        c0_p: b.c0 + b.alpha * b.alpha / stiff,
        alpha_p: 2.0 * b.alpha * b.mu_b / stiff,
        kappa_p: b.kappa,
    };
    if coeffs.alpha_p > b.alpha + 1e-14 * b.alpha.abs() {
        return Err(invalid(
            "derived alpha_p exceeds alpha; requires lambda_b >= 0",
        ));
    }
    if coeffs.c0_p < b.c0 {
        return Err(invalid("derived c0_p fell below c0"));
    }
    Ok(coeffs)
}

/// Elastic pulse-wave speed estimate for a thin-walled channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSpeedEstimate {
    /// Predicted propagation speed (cm/s).
    pub speed: f64,
    /// Predicted transit time over the full channel length (s).
    pub transit: f64,
}

/// Classic thin-wall estimate: `c = sqrt(E h / (2 rho_f r))` with the
/// plane-strain wall stiffness `E = lambda_b + 2 mu_b`.
pub fn moens_korteweg_speed(
    fluid: &FluidParams,
    biot: &BulkBiotParams,
    geom: &Geometry,
) -> WaveSpeedEstimate {
    let e = biot.lambda_b + 2.0 * biot.mu_b;
    let speed = (e * geom.h / (2.0 * fluid.rho_f * geom.r_f)).sqrt();
    WaveSpeedEstimate {
        speed,
        transit: geom.l / speed,
    }
}

/// Inlet pulse value at time `t`: `0.5 p_max (1 - cos(2 pi t / t_pulse))` for
/// `t < t_pulse`, zero afterwards (and for negative `t`).
pub fn inlet_pressure(pulse: &PulseSpec, t: f64) -> f64 {
    if t < 0.0 || t >= pulse.t_pulse {
        0.0
    } else {
        0.5 * pulse.p_max * (1.0 - (2.0 * std::f64::consts::PI * t / pulse.t_pulse).cos())
    }
}

const SECTIONS: [&str; 5] = ["fluid", "biot", "geometry", "pulse", "run"];

/// Assign one `key = value` pair into `cfg`. `section` must be one of
/// [`SECTIONS`]; errors carry `where_` (e.g. "line 7" or "--set") as context.
fn set_key(cfg: &mut SimConfig, section: &str, key: &str, value: &str) -> Result<(), String> {
    fn num(key: &str, value: &str) -> Result<f64, String> {
        value
            .parse::<f64>()
            .map_err(|_| format!("key '{key}': expected a number, got '{value}'"))
    }
    fn count(key: &str, value: &str) -> Result<usize, String> {
        value
            .parse::<usize>()
            .map_err(|_| format!("key '{key}': expected a nonnegative integer, got '{value}'"))
    }
    match (section, key) {
        ("fluid", "rho_f") => cfg.fluid.rho_f = num(key, value)?,
        ("fluid", "mu_f") => cfg.fluid.mu_f = num(key, value)?,
        ("fluid", "beta") => cfg.fluid.beta = num(key, value)?,
        ("biot", "rho_b") => cfg.biot.rho_b = num(key, value)?,
        ("biot", "lambda_b") => cfg.biot.lambda_b = num(key, value)?,
        ("biot", "mu_b") => cfg.biot.mu_b = num(key, value)?,
        ("biot", "kappa") => cfg.biot.kappa = num(key, value)?,
        ("biot", "c0") => cfg.biot.c0 = num(key, value)?,
        ("biot", "alpha") => cfg.biot.alpha = num(key, value)?,
        ("biot", "gamma") => cfg.biot.gamma = num(key, value)?,
        ("geometry", "l") => cfg.geometry.l = num(key, value)?,
        ("geometry", "r_f") => cfg.geometry.r_f = num(key, value)?,
        ("geometry", "h") => cfg.geometry.h = num(key, value)?,
        ("pulse", "p_max") => cfg.pulse.p_max = num(key, value)?,
        ("pulse", "t_pulse") => cfg.pulse.t_pulse = num(key, value)?,
        ("run", "nx_f") => cfg.nx_f = count(key, value)?,
        ("run", "ny_f") => cfg.ny_f = count(key, value)?,
        ("run", "nx_p") => cfg.nx_p = count(key, value)?,
        ("run", "ny_p") => cfg.ny_p = count(key, value)?,
        ("run", "dt") => cfg.dt = num(key, value)?,
        ("run", "t_end") => cfg.t_end = num(key, value)?,
        ("run", "problem") => {
            cfg.problem = match value {
                "plate" => Problem::Plate,
                "biot" => Problem::Biot,
                other => {
                    return Err(format!(
                        "key 'problem': expected 'plate' or 'biot', got '{other}'"
                    ))
                }
            }
        }
        ("run", "nitsche_penalty") => cfg.nitsche_penalty = Some(num(key, value)?),
        ("run", "cadence") => cfg.cadence = count(key, value)?,
        ("run", "x_probe") => cfg.x_probe = num(key, value)?,
        ("run", "threshold_fraction") => cfg.threshold_fraction = num(key, value)?,
        _ => return Err(format!("unknown key '{key}' in section [{section}]")),
    }
    Ok(())
}

/// Parse the plain-text config format into `cfg`, leaving untouched keys at
/// their current values. Does not validate; callers validate when the final
/// overlay is in place.
fn parse_into(cfg: &mut SimConfig, text: &str) -> Result<(), ConfigError> {
    let mut section: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or(ConfigError::Parse {
                line: line_no,
                msg: format!("unterminated section header '{line}'"),
            })?;
            let name = name.trim();
            if !SECTIONS.contains(&name) {
                return Err(ConfigError::Parse {
                    line: line_no,
                    msg: format!("unknown section [{name}]"),
                });
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(ConfigError::Parse {
            line: line_no,
            msg: format!("expected 'key = value', got '{line}'"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let section = section.as_deref().ok_or(ConfigError::Parse {
            line: line_no,
            msg: format!("key '{key}' appears before any [section] header"),
        })?;
        set_key(cfg, section, key, value)
            .map_err(|msg| ConfigError::Parse { line: line_no, msg })?;
    }
    Ok(())
}

/// Parse and validate a config document. An empty document yields the
/// defaults.
pub fn load_config(text: &str) -> Result<SimConfig, ConfigError> {
    let mut cfg = SimConfig::default();
    parse_into(&mut cfg, text)?;
    cfg.validate()?;
    Ok(cfg)
}

/// [`load_config`] over a file path.
pub fn load_config_path(path: &Path) -> Result<SimConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_config(&text)
}

/// Overlay a config file (without validating) onto an existing configuration;
/// used by the CLI to stack file contents on top of a preset.
pub fn overlay_config(cfg: &mut SimConfig, text: &str) -> Result<(), ConfigError> {
    parse_into(cfg, text)
}

/// Apply one `section.key=value` override (bare `key=value` is accepted when
/// the key is unambiguous across sections). Does not validate.
pub fn apply_override(cfg: &mut SimConfig, spec: &str) -> Result<(), ConfigError> {
    let parse = |msg: String| ConfigError::Parse { line: 0, msg };
    let (path, value) = spec
        .split_once('=')
        .ok_or_else(|| parse(format!("override '{spec}': expected key=value")))?;
    let path = path.trim();
    let value = value.trim();
    if let Some((section, key)) = path.split_once('.') {
        let section = section.trim();
        if !SECTIONS.contains(&section) {
            return Err(parse(format!(
                "override '{spec}': unknown section '{section}'"
            )));
        }
        set_key(cfg, section, key.trim(), value).map_err(parse)
    } else {
        let mut hits = Vec::new();
        for section in SECTIONS {
            let mut probe = cfg.clone();
            if set_key(&mut probe, section, path, value).is_ok() {
                hits.push(section);
            }
        }
        match hits.as_slice() {
            [section] => set_key(cfg, section, path, value).map_err(parse),
            [] => {
                // Re-run against one section to surface the value error when
                // the key exists but the value is malformed.
                for section in SECTIONS {
                    let mut probe = cfg.clone();
                    if let Err(msg) = set_key(&mut probe, section, path, value) {
                        if !msg.starts_with("unknown key") {
                            return Err(parse(msg));
                        }
                    }
                }
                Err(parse(format!("override '{spec}': unknown key '{path}'")))
            }
            many => Err(parse(format!(
                "override '{spec}': key '{path}' is ambiguous across sections {many:?}; qualify it"
            ))),
        }
    }
}

/// Render a configuration in the config-file format (used for record echoes).
pub fn render_config(cfg: &SimConfig) -> String {
    let mut s = String::new();
    use std::fmt::Write;
    let _ = writeln!(s, "[fluid]");
    let _ = writeln!(s, "rho_f = {}", cfg.fluid.rho_f);
    let _ = writeln!(s, "mu_f = {}", cfg.fluid.mu_f);
    let _ = writeln!(s, "beta = {}", cfg.fluid.beta);
    let _ = writeln!(s, "[biot]");
    let _ = writeln!(s, "rho_b = {}", cfg.biot.rho_b);
    let _ = writeln!(s, "lambda_b = {}", cfg.biot.lambda_b);
    let _ = writeln!(s, "mu_b = {}", cfg.biot.mu_b);
    let _ = writeln!(s, "kappa = {}", cfg.biot.kappa);
    let _ = writeln!(s, "c0 = {}", cfg.biot.c0);
    let _ = writeln!(s, "alpha = {}", cfg.biot.alpha);
    let _ = writeln!(s, "gamma = {}", cfg.biot.gamma);
    let _ = writeln!(s, "[geometry]");
    let _ = writeln!(s, "l = {}", cfg.geometry.l);
    let _ = writeln!(s, "r_f = {}", cfg.geometry.r_f);
    let _ = writeln!(s, "h = {}", cfg.geometry.h);
    let _ = writeln!(s, "[pulse]");
    let _ = writeln!(s, "p_max = {}", cfg.pulse.p_max);
    let _ = writeln!(s, "t_pulse = {}", cfg.pulse.t_pulse);
    let _ = writeln!(s, "[run]");
    let _ = writeln!(s, "nx_f = {}", cfg.nx_f);
    let _ = writeln!(s, "ny_f = {}", cfg.ny_f);
    let _ = writeln!(s, "nx_p = {}", cfg.nx_p);
    let _ = writeln!(s, "ny_p = {}", cfg.ny_p);
    let _ = writeln!(s, "dt = {}", cfg.dt);
    let _ = writeln!(s, "t_end = {}", cfg.t_end);
    let _ = writeln!(s, "problem = {}", cfg.problem);
    let _ = writeln!(s, "nitsche_penalty = {}", cfg.nitsche_penalty_value());
    let _ = writeln!(s, "cadence = {}", cfg.cadence);
    let _ = writeln!(s, "x_probe = {}", cfg.x_probe);
    let _ = writeln!(s, "threshold_fraction = {}", cfg.threshold_fraction);
    s
}
