//! Batch command-line front end.
//!
//! Six subcommands: `run` a single configuration, `compare` the two wall
//! models, `energy` (zero-data decay audit), `wavespeed` (pulse arrival vs.
//! the Moens-Korteweg estimate), `convergence` (time-step refinement), and
//! `spectrum` (per-mode eigenvalue sweep). Configuration precedence is
//! defaults, then `--preset`, then `--config FILE`, then repeated
//! `--set section.key=value`.
//!
//! Exit codes: 0 success, 1 bad invocation or configuration, 2 solver
//! failure, 3 a `--check` threshold was missed.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{
    self, moens_korteweg_speed, Preset, Problem, SimConfig,
};
use crate::diagnostics::{check_dissipation, wave_arrival_time};
use crate::driver::{
    compare_records, refinement_study, run_decay, run_simulation, Record,
};
use crate::export::{self, ExportFormat, ExportKind};
use crate::mesh::TriMesh;
use crate::spectral::{spectral_abscissa, SpectralConfig, SpectralError};
use crate::ModelError;

/// What went wrong, bucketed by exit code.
#[derive(Debug)]
enum CliError {
    /// Bad flags, config, export request, or file I/O. Exit 1.
    Validation(String),
    /// The linear algebra gave up. Exit 2.
    Solver(String),
    /// A `--check` threshold was missed. Exit 3.
    Check(String),
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> CliError {
        match e {
            ModelError::Config(c) => CliError::Validation(c.to_string()),
            ModelError::Solve(s) => CliError::Solver(s.to_string()),
            ModelError::Spectral(SpectralError::Invalid(m)) => CliError::Validation(m),
            ModelError::Spectral(e @ SpectralError::Convergence(_)) => {
                CliError::Solver(e.to_string())
            }
        }
    }
}

impl From<config::ConfigError> for CliError {
    fn from(e: config::ConfigError) -> CliError {
        CliError::Validation(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "pulsewall",
    version,
    about = "Pulse propagation in a fluid channel with a poroelastic wall"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one simulation and export the requested artifacts
    Run(RunArgs),
    /// Run both wall models on the same configuration and diff the interface
    Compare(CompareArgs),
    /// Decay audit: zero inlet data, initial wall bump, energy budget check
    Energy(EnergyArgs),
    /// Pulse arrival time at the probe vs. the Moens-Korteweg estimate
    Wavespeed(WavespeedArgs),
    /// Time-step refinement study on one configuration
    Convergence(ConvergenceArgs),
    /// Per-mode eigenvalue sweep of the normalized interface model
    Spectrum(SpectrumArgs),
}

/// Flags that choose and adjust a configuration.
#[derive(Args)]
struct CfgArgs {
    /// Start from a named preset (paper-h01, paper-h001, desk-h01, desk-h001)
    #[arg(long)]
    preset: Option<String>,
    /// Layer a config file on top of the preset or defaults
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override one value, e.g. --set run.dt=2e-4 (repeatable)
    #[arg(long, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

/// Flags that say what to write and where.
#[derive(Args)]
struct OutArgs {
    /// Output directory for exported files
    #[arg(long, default_value = ".", value_name = "DIR")]
    out: PathBuf,
    /// Export request as WHAT=FORMAT, e.g. energy_series=csv (repeatable)
    #[arg(long, value_name = "WHAT=FORMAT")]
    export: Vec<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    cfg: CfgArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    cfg: CfgArgs,
    #[command(flatten)]
    out: OutArgs,
    /// Exit 3 unless both interface differences stay under the agreement band
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct EnergyArgs {
    #[command(flatten)]
    cfg: CfgArgs,
    #[command(flatten)]
    out: OutArgs,
    /// Initial bump amplitude (cm)
    #[arg(long, default_value_t = 0.05)]
    amplitude: f64,
    /// Energy budget tolerance, relative to the peak budget magnitude
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Exit 3 if any step gains energy beyond the tolerance
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct WavespeedArgs {
    #[command(flatten)]
    cfg: CfgArgs,
    #[command(flatten)]
    out: OutArgs,
    /// Allowed relative deviation from the estimated transit time
    #[arg(long, default_value_t = 0.2)]
    tolerance: f64,
    /// Exit 3 if the arrival deviates more than the tolerance
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[command(flatten)]
    cfg: CfgArgs,
    #[command(flatten)]
    out: OutArgs,
    /// Time steps to run, largest first
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "4e-4,2e-4,1e-4",
        value_name = "DT,..."
    )]
    dts: Vec<f64>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    out: OutArgs,
    /// Sweep wave numbers k = 2 pi (m1, m2) with |m1|, |m2| <= k-max
    #[arg(long, default_value_t = 4)]
    k_max: i32,
    /// Vertical P2/P1 cells per mode problem
    #[arg(long, default_value_t = 32)]
    nz: usize,
    /// Transverse-velocity regularization weight
    #[arg(long, default_value_t = 1.0)]
    eps1: f64,
    /// Pressure-moment regularization weight
    #[arg(long, default_value_t = 1.0)]
    eps2: f64,
    /// Extra wall spring stiffness
    #[arg(long, default_value_t = 1.0)]
    gamma_p: f64,
    /// Tangential slip coefficient
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
}

/// Entry point for the binary. Returns the process exit code.
pub fn main() -> i32 {
    run_cli(std::env::args_os())
}

/// Parse and execute `args`; returns the exit code instead of exiting, so
/// tests can drive the full command surface in-process.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too; they are not failures.
            let is_usage_error = e.use_stderr();
            let _ = e.print();
            return if is_usage_error { 1 } else { 0 };
        }
    };
    let result = match cli.cmd {
        Cmd::Run(a) => cmd_run(&a),
        Cmd::Compare(a) => cmd_compare(&a),
        Cmd::Energy(a) => cmd_energy(&a),
        Cmd::Wavespeed(a) => cmd_wavespeed(&a),
        Cmd::Convergence(a) => cmd_convergence(&a),
        Cmd::Spectrum(a) => cmd_spectrum(&a),
    };
    match result {
        Ok(()) => 0,
        Err(CliError::Validation(m)) => {
            eprintln!("error: {m}");
            1
        }
        Err(CliError::Solver(m)) => {
            eprintln!("solver error: {m}");
            2
        }
        Err(CliError::Check(m)) => {
            eprintln!("check failed: {m}");
            3
        }
    }
}

fn build_config(args: &CfgArgs) -> Result<SimConfig, CliError> {
    let mut cfg = match &args.preset {
        Some(name) => Preset::from_name(name)
            .ok_or_else(|| {
                let known: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
                CliError::Validation(format!(
                    "unknown preset '{name}' (expected one of {})",
                    known.join(", ")
                ))
            })?
            .config(),
        None => SimConfig::default(),
    };
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation(format!("cannot read {}: {e}", path.display()))
        })?;
        config::overlay_config(&mut cfg, &text)?;
    }
    for spec in &args.set {
        config::apply_override(&mut cfg, spec)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parse `--export WHAT=FORMAT` requests against what a subcommand can
/// actually produce.
fn parse_exports(
    out: &OutArgs,
    allowed: &[ExportKind],
    ctx: &str,
) -> Result<Vec<(ExportKind, ExportFormat)>, CliError> {
    let mut reqs = Vec::new();
    for spec in &out.export {
        let (what, fmt) = spec.split_once('=').ok_or_else(|| {
            CliError::Validation(format!(
                "export '{spec}' must look like WHAT=FORMAT, e.g. energy_series=csv"
            ))
        })?;
        let kind = ExportKind::from_name(what).ok_or_else(|| {
            CliError::Validation(format!("unknown export '{what}'"))
        })?;
        let format = ExportFormat::from_name(fmt).ok_or_else(|| {
            CliError::Validation(format!("unknown export format '{fmt}'"))
        })?;
        if !export::supported(kind, format) {
            return Err(CliError::Validation(format!(
                "{} cannot be written as {fmt}",
                kind.name()
            )));
        }
        if !allowed.contains(&kind) {
            return Err(CliError::Validation(format!(
                "'{ctx}' does not produce {}",
                kind.name()
            )));
        }
        reqs.push((kind, format));
    }
    Ok(reqs)
}

fn write_out(dir: &Path, name: &str, content: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| {
        CliError::Validation(format!("cannot create {}: {e}", dir.display()))
    })?;
    let path = dir.join(name);
    std::fs::write(&path, content)
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Write one export of a finished run. `suffix` distinguishes the two models
/// under `compare` (e.g. "_plate"); it is empty for single runs.
fn export_record(
    cfg: &SimConfig,
    rec: &Record,
    kind: ExportKind,
    format: ExportFormat,
    dir: &Path,
    suffix: &str,
) -> Result<(), CliError> {
    let ext = format.extension();
    match (kind, format) {
        (ExportKind::EnergySeries, ExportFormat::Csv) => write_out(
            dir,
            &format!("energy_series{suffix}.{ext}"),
            &export::energy_series_csv(rec),
        ),
        (ExportKind::EnergySeries, ExportFormat::Svg) => write_out(
            dir,
            &format!("energy_series{suffix}.{ext}"),
            &export::energy_svg(rec),
        ),
        (ExportKind::InterfaceProfiles, ExportFormat::Csv) => write_out(
            dir,
            &format!("interface_profiles{suffix}.{ext}"),
            &export::interface_profiles_csv(rec),
        ),
        (ExportKind::InterfaceProfiles, ExportFormat::Svg) => write_out(
            dir,
            &format!("interface_profiles{suffix}.{ext}"),
            &export::profiles_svg(rec),
        ),
        (ExportKind::FieldSnapshot, ExportFormat::Vtk) => {
            let mesh =
                TriMesh::fluid_channel(cfg.geometry.l, cfg.geometry.r_f, cfg.nx_f, cfg.ny_f);
            for snap in &rec.snapshots {
                write_out(
                    dir,
                    &format!("field_snapshot{suffix}_{:06}.{ext}", snap.step),
                    &export::snapshot_vtk(&mesh, snap),
                )?;
            }
            Ok(())
        }
        _ => Err(CliError::Validation(format!(
            "{} cannot be written as {ext}",
            kind.name()
        ))),
    }
}

fn print_run_summary(cfg: &SimConfig, rec: &Record) {
    println!("model = {}", cfg.problem);
    println!("steps = {}", rec.times.len().saturating_sub(1));
    if let Some(t) = rec.times.last() {
        println!("t_end = {t}");
    }
    println!("snapshots = {}", rec.snapshots.len());
    let e_max = rec
        .energies
        .iter()
        .map(|e| e.total())
        .fold(f64::NEG_INFINITY, f64::max);
    println!("max_total_energy = {e_max}");
    let p_max = rec.probe.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    println!("max_probe_pressure = {p_max}");
}

const RUN_EXPORTS: [ExportKind; 3] = [
    ExportKind::EnergySeries,
    ExportKind::InterfaceProfiles,
    ExportKind::FieldSnapshot,
];

fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let cfg = build_config(&args.cfg)?;
    let exports = parse_exports(&args.out, &RUN_EXPORTS, "run")?;
    let rec = run_simulation(&cfg)?;
    print_run_summary(&cfg, &rec);
    if let Some(t) = wave_arrival_time(&rec.times, &rec.probe, cfg.threshold_fraction) {
        println!("probe_arrival_time = {t}");
    }
    for &(kind, format) in &exports {
        export_record(&cfg, &rec, kind, format, &args.out.out, "")?;
    }
    Ok(())
}

/// Worker count for `compare`, from PULSEWALL_THREADS. Assembly and solves
/// stay deterministic regardless; this only gates whether the two model runs
/// share a thread.
fn thread_count() -> Result<usize, CliError> {
    match std::env::var("PULSEWALL_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(1),
        Err(e) => Err(CliError::Validation(format!("PULSEWALL_THREADS: {e}"))),
        Ok(v) => parse_thread_count(&v),
    }
}

fn parse_thread_count(v: &str) -> Result<usize, CliError> {
    v.trim()
        .parse::<usize>()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| {
            CliError::Validation(format!(
                "PULSEWALL_THREADS must be a positive integer, got '{v}'"
            ))
        })
}

/// Agreement band for `compare --check`, wider for the thick-wall regime.
fn agreement_band(cfg: &SimConfig) -> f64 {
    if cfg.geometry.h > 0.005 {
        0.25
    } else {
        0.10
    }
}

const COMPARE_EXPORTS: [ExportKind; 4] = [
    ExportKind::EnergySeries,
    ExportKind::InterfaceProfiles,
    ExportKind::FieldSnapshot,
    ExportKind::DiffReport,
];

fn cmd_compare(args: &CompareArgs) -> Result<(), CliError> {
    let cfg = build_config(&args.cfg)?;
    let exports = parse_exports(&args.out, &COMPARE_EXPORTS, "compare")?;
    let mut cfg_plate = cfg.clone();
    cfg_plate.problem = Problem::Plate;
    let mut cfg_biot = cfg.clone();
    cfg_biot.problem = Problem::Biot;
    let (rec_plate, rec_biot) = if thread_count()? >= 2 {
        let (ra, rb) = std::thread::scope(|s| {
            let ha = s.spawn(|| run_simulation(&cfg_plate));
            let hb = s.spawn(|| run_simulation(&cfg_biot));
            (ha.join(), hb.join())
        });
        let ra = ra.unwrap_or_else(|p| std::panic::resume_unwind(p));
        let rb = rb.unwrap_or_else(|p| std::panic::resume_unwind(p));
        (ra?, rb?)
    } else {
        (run_simulation(&cfg_plate)?, run_simulation(&cfg_biot)?)
    };
    let rows = compare_records(&rec_plate, &rec_biot);
    println!("matched_snapshots = {}", rows.len());
    let mut d_max = 0.0f64;
    let mut j_max = 0.0f64;
    for r in &rows {
        println!(
            "step {}  t = {}  displacement_diff = {:e}  jump_diff = {:e}",
            r.step, r.t, r.displacement_diff, r.jump_diff
        );
        d_max = d_max.max(r.displacement_diff);
        j_max = j_max.max(r.jump_diff);
    }
    println!("max_displacement_diff = {d_max}");
    println!("max_jump_diff = {j_max}");
    let band = agreement_band(&cfg);
    println!("agreement_band = {band}");
    for &(kind, format) in &exports {
        if kind == ExportKind::DiffReport {
            write_out(
                &args.out.out,
                &format!("diff_report.{}", format.extension()),
                &export::diff_report_csv(&rows),
            )?;
        } else {
            export_record(&cfg_plate, &rec_plate, kind, format, &args.out.out, "_plate")?;
            export_record(&cfg_biot, &rec_biot, kind, format, &args.out.out, "_biot")?;
        }
    }
    if args.check && (d_max > band || j_max > band) {
        return Err(CliError::Check(format!(
            "interface differences (displacement {d_max:e}, jump {j_max:e}) exceed {band}"
        )));
    }
    Ok(())
}

fn cmd_energy(args: &EnergyArgs) -> Result<(), CliError> {
    let mut cfg = build_config(&args.cfg)?;
    // Decay audit runs without inlet data regardless of the configured pulse.
    cfg.pulse.p_max = 0.0;
    let exports = parse_exports(&args.out, &[ExportKind::EnergySeries], "energy")?;
    let rec = run_decay(&cfg, args.amplitude)?;
    print_run_summary(&cfg, &rec);
    let e0 = rec.energies.first().map(|e| e.total()).unwrap_or(0.0);
    let e1 = rec.energies.last().map(|e| e.total()).unwrap_or(0.0);
    println!("initial_energy = {e0}");
    println!("final_energy = {e1}");
    if e0 > 0.0 {
        println!("retained_fraction = {}", e1 / e0);
    }
    let verdict = check_dissipation(&rec.energies, cfg.dt, args.tol);
    match &verdict {
        Ok(()) => println!("energy_budget = pass (tol {})", args.tol),
        Err(m) => println!("energy_budget = violated: {m}"),
    }
    for &(kind, format) in &exports {
        export_record(&cfg, &rec, kind, format, &args.out.out, "")?;
    }
    if args.check {
        verdict.map_err(CliError::Check)?;
    }
    Ok(())
}

fn cmd_wavespeed(args: &WavespeedArgs) -> Result<(), CliError> {
    let cfg = build_config(&args.cfg)?;
    let exports = parse_exports(&args.out, &RUN_EXPORTS, "wavespeed")?;
    let est = moens_korteweg_speed(&cfg.fluid, &cfg.biot, &cfg.geometry);
    let rec = run_simulation(&cfg)?;
    print_run_summary(&cfg, &rec);
    println!("estimated_speed = {}", est.speed);
    println!("estimated_transit = {}", est.transit);
    let arrival = wave_arrival_time(&rec.times, &rec.probe, cfg.threshold_fraction);
    // How much the arrival estimate moves with the crossing threshold.
    for f in [0.1, 0.15, 0.2, 0.25, 0.3] {
        match wave_arrival_time(&rec.times, &rec.probe, f) {
            Some(t) => println!("arrival_at_threshold_{f} = {t}"),
            None => println!("arrival_at_threshold_{f} = none"),
        }
    }
    for &(kind, format) in &exports {
        export_record(&cfg, &rec, kind, format, &args.out.out, "")?;
    }
    match arrival {
        Some(t) => {
            let dev = (t - est.transit) / est.transit;
            println!("probe_arrival_time = {t}");
            println!("relative_deviation = {dev}");
            if args.check && dev.abs() > args.tolerance {
                return Err(CliError::Check(format!(
                    "arrival {t} deviates {dev:e} from estimated transit {} (allowed {})",
                    est.transit, args.tolerance
                )));
            }
            Ok(())
        }
        None => {
            println!("probe_arrival_time = none");
            if args.check {
                return Err(CliError::Check(
                    "the pulse never reached the probe threshold".into(),
                ));
            }
            Ok(())
        }
    }
}

fn cmd_convergence(args: &ConvergenceArgs) -> Result<(), CliError> {
    let cfg = build_config(&args.cfg)?;
    if !args.out.export.is_empty() {
        return Err(CliError::Validation(
            "'convergence' prints its table and exports nothing".into(),
        ));
    }
    if args.dts.len() < 2 {
        return Err(CliError::Validation(
            "need at least two time steps, e.g. --dts 4e-4,2e-4".into(),
        ));
    }
    if args.dts.iter().any(|&dt| !(dt > 0.0)) {
        return Err(CliError::Validation("time steps must be positive".into()));
    }
    let study = refinement_study(&cfg, &args.dts)?;
    for ((dt, sups), comb) in study
        .dts
        .iter()
        .zip(&study.sup_norms)
        .zip(&study.sup_combined)
    {
        let cells: Vec<String> = study
            .norm_labels
            .iter()
            .zip(sups)
            .map(|(l, v)| format!("sup |{l}| = {v:.6e}"))
            .collect();
        println!(
            "dt = {dt}  {}  sup weighted = {comb:.6e}",
            cells.join("  ")
        );
    }
    for (i, diff) in study.field_diffs.iter().enumerate() {
        println!(
            "diff({} -> {}) = {diff}",
            study.dts[i],
            study.dts[i + 1]
        );
    }
    for (i, r) in study.ratios.iter().enumerate() {
        println!("ratio({}) = {r}", i + 1);
    }
    Ok(())
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<(), CliError> {
    let exports = parse_exports(&args.out, &[ExportKind::SpectrumTable], "spectrum")?;
    let scfg = SpectralConfig {
        eps1: args.eps1,
        eps2: args.eps2,
        gamma_p: args.gamma_p,
        beta: args.beta,
        k_max: args.k_max,
        nz: args.nz,
    };
    println!(
        "note: finite-dimensional sweep; it witnesses decay of the resolved modes, \
         not the full essential spectrum"
    );
    let sweep = spectral_abscissa(&scfg).map_err(|e| match e {
        SpectralError::Invalid(m) => CliError::Validation(m),
        e @ SpectralError::Convergence(_) => CliError::Solver(e.to_string()),
    })?;
    println!("modes = {}", (2 * args.k_max + 1).pow(2));
    println!("eigenvalues = {}", sweep.rows.len());
    println!("mu0_estimate = {}", sweep.mu0_estimate);
    println!("max_residual = {}", sweep.max_residual());
    println!("max_identity_residual = {}", sweep.max_identity_residual());
    for &(kind, format) in &exports {
        debug_assert_eq!(kind, ExportKind::SpectrumTable);
        write_out(
            &args.out.out,
            &format!("spectrum_table.{}", format.extension()),
            &export::spectrum_csv(&sweep),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg_args(preset: Option<&str>, config: Option<PathBuf>, set: &[&str]) -> CfgArgs {
        CfgArgs {
            preset: preset.map(String::from),
            config,
            set: set.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn overrides_layer_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("cfg.toml");
        std::fs::write(&file, "[geometry]\nh = 0.004\n[run]\ndt = 5e-4\n").unwrap();

        let base = Preset::from_name("desk-h01").unwrap().config();
        let cfg = build_config(&cfg_args(
            Some("desk-h01"),
            Some(file),
            &["run.dt=2.5e-4", "run.problem=biot"],
        ))
        .unwrap();
        // preset survives where nothing overrode it
        assert_eq!(cfg.nx_f, base.nx_f);
        assert_eq!(cfg.pulse.p_max, base.pulse.p_max);
        // file beat the preset, --set beat the file
        assert_eq!(cfg.geometry.h, 0.004);
        assert_eq!(cfg.dt, 2.5e-4);
        assert_eq!(cfg.problem, Problem::Biot);
    }

    #[test]
    fn bad_inputs_are_validation_errors() {
        for args in [
            cfg_args(Some("desk-h2"), None, &[]),
            cfg_args(None, Some(PathBuf::from("/definitely/not/here.toml")), &[]),
            cfg_args(None, None, &["run.dt=fast"]),
            cfg_args(None, None, &["run.dt=-1e-4"]),
        ] {
            match build_config(&args) {
                Err(CliError::Validation(_)) => {}
                other => panic!("expected a validation error, got {other:?}"),
            }
        }
    }

    fn out_args(export: &[&str]) -> OutArgs {
        OutArgs {
            out: PathBuf::from("."),
            export: export.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn export_requests_are_vetted() {
        let ok = parse_exports(
            &out_args(&["energy_series=svg", "field_snapshot=vtk"]),
            &RUN_EXPORTS,
            "run",
        )
        .unwrap();
        assert_eq!(ok.len(), 2);
        assert_eq!(ok[0], (ExportKind::EnergySeries, ExportFormat::Svg));

        for bad in [
            "energy_series",          // missing format
            "energy_series=png",      // unknown format
            "field_snapshot=csv",     // unsupported pairing
            "spectrum_table=csv",     // not produced by `run`
            "momentum_series=csv",    // unknown kind
        ] {
            match parse_exports(&out_args(&[bad]), &RUN_EXPORTS, "run") {
                Err(CliError::Validation(_)) => {}
                other => panic!("'{bad}' should be rejected, got {other:?}"),
            }
        }
    }

    #[test]
    fn thread_count_parsing() {
        assert_eq!(parse_thread_count("1").unwrap(), 1);
        assert_eq!(parse_thread_count(" 4 ").unwrap(), 4);
        for bad in ["0", "-2", "two", ""] {
            assert!(matches!(
                parse_thread_count(bad),
                Err(CliError::Validation(_))
            ));
        }
    }

    #[test]
    fn agreement_band_tracks_wall_thickness() {
        let mut cfg = SimConfig::default();
        cfg.geometry.h = 0.01;
        assert_eq!(agreement_band(&cfg), 0.25);
        cfg.geometry.h = 0.001;
        assert_eq!(agreement_band(&cfg), 0.10);
    }

    #[test]
    fn help_and_usage_errors_map_to_exit_codes() {
        assert_eq!(run_cli(["pulsewall", "--help"]), 0);
        assert_eq!(run_cli(["pulsewall", "--version"]), 0);
        assert_eq!(run_cli(["pulsewall", "orbit"]), 1);
        assert_eq!(run_cli(["pulsewall", "run", "--preset", "nope"]), 1);
        assert_eq!(
            run_cli(["pulsewall", "convergence", "--dts", "1e-3"]),
            1
        );
    }
}
