//! Exporters (CSV, legacy VTK, SVG) and a small VTK reader.
//!
//! All writers are deterministic: identical inputs produce identical bytes.
//! Numeric CSV fields use Rust's shortest round-trip float formatting. The
//! VTK reader exists so tests and fuzzing can close the write-read loop; it
//! never panics on malformed input and never sizes an allocation from an
//! untrusted count without first checking the token supply.

use std::fmt::Write as _;

use crate::diagnostics::InterfaceProfile;
use crate::driver::{ComparisonRow, Record, Snapshot};
use crate::mesh::TriMesh;
use crate::spectral::SpectralSweep;

/// Output file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Vtk,
    Svg,
}

impl ExportFormat {
    pub fn from_name(s: &str) -> Option<ExportFormat> {
        match s {
            "csv" => Some(ExportFormat::Csv),
            "vtk" => Some(ExportFormat::Vtk),
            "svg" => Some(ExportFormat::Svg),
            _ => None,
        }
    }

    pub fn extension(&self) -> &'static str {
        match self {
            ExportFormat::Csv => "csv",
            ExportFormat::Vtk => "vtk",
            ExportFormat::Svg => "svg",
        }
    }
}

/// What gets exported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportKind {
    EnergySeries,
    InterfaceProfiles,
    FieldSnapshot,
    SpectrumTable,
    DiffReport,
}

impl ExportKind {
    pub fn from_name(s: &str) -> Option<ExportKind> {
        match s {
            "energy_series" => Some(ExportKind::EnergySeries),
            "interface_profiles" => Some(ExportKind::InterfaceProfiles),
            "field_snapshot" => Some(ExportKind::FieldSnapshot),
            "spectrum_table" => Some(ExportKind::SpectrumTable),
            "diff_report" => Some(ExportKind::DiffReport),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExportKind::EnergySeries => "energy_series",
            ExportKind::InterfaceProfiles => "interface_profiles",
            ExportKind::FieldSnapshot => "field_snapshot",
            ExportKind::SpectrumTable => "spectrum_table",
            ExportKind::DiffReport => "diff_report",
        }
    }
}

/// The documented format matrix: tables as CSV, line plots as SVG, and
/// field snapshots as VTK only.
pub fn supported(kind: ExportKind, format: ExportFormat) -> bool {
    use ExportFormat::*;
    use ExportKind::*;
    matches!(
        (kind, format),
        (EnergySeries, Csv)
            | (EnergySeries, Svg)
            | (InterfaceProfiles, Csv)
            | (InterfaceProfiles, Svg)
            | (SpectrumTable, Csv)
            | (DiffReport, Csv)
            | (FieldSnapshot, Vtk)
    )
}

/// Energy budget per sampled step.
pub fn energy_series_csv(rec: &Record) -> String {
    let mut out = String::from("t,e_kin,e_pot,dissipation_rate,boundary_power,total\n");
    for (t, e) in rec.times.iter().zip(&rec.energies) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            t,
            e.e_kin,
            e.e_pot,
            e.dissipation_rate,
            e.boundary_power,
            e.total()
        );
    }
    out
}

/// Interface traces of every stored snapshot in long format.
pub fn interface_profiles_csv(rec: &Record) -> String {
    let mut out = String::from("step,t,x,displacement,pressure_jump,normal_velocity\n");
    for s in &rec.snapshots {
        let p = &s.interface;
        for i in 0..p.x.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                s.step, s.t, p.x[i], p.displacement[i], p.pressure_jump[i], p.normal_velocity[i]
            );
        }
    }
    out
}

/// One row per accepted eigenpair of a mode sweep.
pub fn spectrum_csv(sweep: &SpectralSweep) -> String {
    let mut out = String::from("k1,k2,re_lambda,im_lambda,residual\n");
    for r in &sweep.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.k.0, r.k.1, r.lambda.re, r.lambda.im, r.residual
        );
    }
    out
}

/// Interface distance between two runs per matched snapshot.
pub fn diff_report_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("step,t,displacement_diff,jump_diff\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.step, r.t, r.displacement_diff, r.jump_diff
        );
    }
    out
}

/// Legacy ASCII VTK unstructured grid of one snapshot: triangle cells,
/// pointwise pressure scalars and velocity vectors.
pub fn snapshot_vtk(mesh: &TriMesh, snap: &Snapshot) -> String {
    let nv = mesh.n_verts();
    assert_eq!(snap.pressure.len(), nv);
    assert_eq!(snap.velocity.0.len(), nv);
    let mut out = String::from("# vtk DataFile Version 3.0\n");
    let _ = writeln!(out, "channel fields at t={}", snap.t);
    out.push_str("ASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(out, "POINTS {} double", nv);
    for v in &mesh.verts {
        let _ = writeln!(out, "{} {} 0", v[0], v[1]);
    }
    let nt = mesh.n_tris();
    let _ = writeln!(out, "CELLS {} {}", nt, 4 * nt);
    for t in &mesh.tris {
        let _ = writeln!(out, "3 {} {} {}", t[0], t[1], t[2]);
    }
    let _ = writeln!(out, "CELL_TYPES {}", nt);
    for _ in 0..nt {
        out.push_str("5\n");
    }
    let _ = writeln!(out, "POINT_DATA {}", nv);
    out.push_str("SCALARS pressure double 1\nLOOKUP_TABLE default\n");
    for p in &snap.pressure {
        let _ = writeln!(out, "{}", p);
    }
    out.push_str("VECTORS velocity double\n");
    for i in 0..nv {
        let _ = writeln!(out, "{} {} 0", snap.velocity.0[i], snap.velocity.1[i]);
    }
    out
}

/// Parsed contents of a VTK file this crate wrote.
#[derive(Debug, Clone, PartialEq)]
pub struct VtkData {
    pub points: Vec<[f64; 2]>,
    pub cells: Vec<[usize; 3]>,
    pub pressure: Vec<f64>,
    pub velocity: Vec<[f64; 2]>,
}

/// Read back a legacy ASCII VTK triangle grid. Returns a message for
/// anything it cannot digest; never panics.
pub fn read_vtk(text: &str) -> Result<VtkData, String> {
    let mut toks = text.split_whitespace().peekable();
    // Header: magic comment line, title line, ASCII, dataset kind. The
    // comment and title are free-form; scan forward to the DATASET keyword
    // and check the magic prefix textually.
    if !text.starts_with("# vtk DataFile") {
        return Err("missing vtk magic header".into());
    }
    loop {
        match toks.next() {
            Some("DATASET") => break,
            Some(_) => continue,
            None => return Err("missing DATASET section".into()),
        }
    }
    if toks.next() != Some("UNSTRUCTURED_GRID") {
        return Err("only unstructured grids are supported".into());
    }
    if toks.next() != Some("POINTS") {
        return Err("expected POINTS".into());
    }
    let n: usize = toks
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or("bad point count")?;
    let _dtype = toks.next().ok_or("missing point type")?;
    // Guard allocations: a hostile count must not outrun the actual data.
    let mut points = Vec::new();
    for _ in 0..n {
        let mut c = [0.0f64; 3];
        for v in &mut c {
            *v = toks
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or("truncated point data")?;
        }
        points.push([c[0], c[1]]);
    }
    if toks.next() != Some("CELLS") {
        return Err("expected CELLS".into());
    }
    let m: usize = toks
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or("bad cell count")?;
    let _total: usize = toks
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or("bad cell list size")?;
    let mut cells = Vec::new();
    for _ in 0..m {
        let len: usize = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or("truncated cells")?;
        if len != 3 {
            return Err(format!("unsupported cell arity {len}"));
        }
        let mut ids = [0usize; 3];
        for v in &mut ids {
            *v = toks
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or("truncated cell ids")?;
            if *v >= points.len() {
                return Err(format!("cell references missing point {v}"));
            }
        }
        cells.push(ids);
    }
    if toks.next() != Some("CELL_TYPES") {
        return Err("expected CELL_TYPES".into());
    }
    let mt: usize = toks
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or("bad cell type count")?;
    if mt != cells.len() {
        return Err("cell type count mismatch".into());
    }
    for _ in 0..mt {
        match toks.next() {
            Some("5") => {}
            Some(other) => return Err(format!("unsupported cell type {other}")),
            None => return Err("truncated cell types".into()),
        }
    }
    let mut pressure = Vec::new();
    let mut velocity = Vec::new();
    if toks.peek().is_some() {
        if toks.next() != Some("POINT_DATA") {
            return Err("expected POINT_DATA".into());
        }
        let np: usize = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or("bad point data count")?;
        if np != points.len() {
            return Err("point data count mismatch".into());
        }
        while let Some(section) = toks.next() {
            match section {
                "SCALARS" => {
                    let _name = toks.next().ok_or("missing scalar name")?;
                    let _dtype = toks.next().ok_or("missing scalar type")?;
                    // Optional component count, then the lookup table line.
                    if toks.peek() == Some(&"LOOKUP_TABLE") {
                    } else {
                        let comps = toks.next().ok_or("missing scalar components")?;
                        if comps != "1" {
                            return Err(format!("unsupported scalar components {comps}"));
                        }
                    }
                    if toks.next() != Some("LOOKUP_TABLE") {
                        return Err("expected LOOKUP_TABLE".into());
                    }
                    let _table = toks.next().ok_or("missing lookup table name")?;
                    pressure.clear();
                    for _ in 0..np {
                        pressure.push(
                            toks.next()
                                .and_then(|t| t.parse().ok())
                                .ok_or("truncated scalars")?,
                        );
                    }
                }
                "VECTORS" => {
                    let _name = toks.next().ok_or("missing vector name")?;
                    let _dtype = toks.next().ok_or("missing vector type")?;
                    velocity.clear();
                    for _ in 0..np {
                        let mut c = [0.0f64; 3];
                        for v in &mut c {
                            *v = toks
                                .next()
                                .and_then(|t| t.parse().ok())
                                .ok_or("truncated vectors")?;
                        }
                        velocity.push([c[0], c[1]]);
                    }
                }
                other => return Err(format!("unsupported point data section {other}")),
            }
        }
    }
    Ok(VtkData {
        points,
        cells,
        pressure,
        velocity,
    })
}

/// Minimal self-contained SVG line plot. Series are drawn in order with a
/// fixed palette; axes carry min/max labels only.
fn line_plot(title: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    const W: f64 = 800.0;
    const H: f64 = 420.0;
    const ML: f64 = 70.0;
    const MR: f64 = 20.0;
    const MT: f64 = 40.0;
    const MB: f64 = 50.0;
    const COLORS: [&str; 6] = [
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
    ];
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for (_, pts) in series {
        for &(x, y) in pts {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    if !xmin.is_finite() {
        xmin = 0.0;
        xmax = 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    if xmax == xmin {
        xmax = xmin + 1.0;
    }
    if ymax == ymin {
        ymax = ymin + 1.0;
    }
    let px = |x: f64| ML + (x - xmin) / (xmax - xmin) * (W - ML - MR);
    let py = |y: f64| H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{W}\" height=\"{H}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        out,
        "<text x=\"{:.2}\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">{}</text>",
        W / 2.0,
        title
    );
    // Axes.
    let _ = writeln!(
        out,
        "<line x1=\"{ML}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        H - MB,
        W - MR,
        H - MB
    );
    let _ = writeln!(
        out,
        "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{:.2}\" stroke=\"black\"/>",
        H - MB
    );
    for (v, x, anchor) in [(xmin, ML, "start"), (xmax, W - MR, "end")] {
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"{}\">{:.4e}</text>",
            x,
            H - MB + 18.0,
            anchor,
            v
        );
    }
    for (v, y) in [(ymin, H - MB), (ymax, MT)] {
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{:.4e}</text>",
            ML - 6.0,
            y + 4.0,
            v
        );
    }
    for (si, (label, pts)) in series.iter().enumerate() {
        let color = COLORS[si % COLORS.len()];
        let mut path = String::new();
        for &(x, y) in pts {
            let _ = write!(path, "{:.2},{:.2} ", px(x), py(y));
        }
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>",
            path.trim_end(),
            color
        );
        let ly = MT + 16.0 * si as f64;
        let _ = writeln!(
            out,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"12\" height=\"3\" fill=\"{}\"/>",
            W - MR - 150.0,
            ly,
            color
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
            W - MR - 132.0,
            ly + 5.0,
            label
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Interface displacement profiles of every stored snapshot.
pub fn profiles_svg(rec: &Record) -> String {
    let series: Vec<(String, Vec<(f64, f64)>)> = rec
        .snapshots
        .iter()
        .map(|s: &Snapshot| {
            let p: &InterfaceProfile = &s.interface;
            (
                format!("t={:.4}", s.t),
                p.x.iter().zip(&p.displacement).map(|(&x, &d)| (x, d)).collect(),
            )
        })
        .collect();
    line_plot("interface displacement", &series)
}

/// Energy components over time.
pub fn energy_svg(rec: &Record) -> String {
    let pick = |f: &dyn Fn(usize) -> f64| -> Vec<(f64, f64)> {
        rec.times
            .iter()
            .enumerate()
            .map(|(i, &t)| (t, f(i)))
            .collect()
    };
    let series = vec![
        ("total".to_string(), pick(&|i| rec.energies[i].total())),
        ("kinetic".to_string(), pick(&|i| rec.energies[i].e_kin)),
        ("potential".to_string(), pick(&|i| rec.energies[i].e_pot)),
    ];
    line_plot("energy budget", &series)
}
