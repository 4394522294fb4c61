//! File formats for scan grids and reports.
//!
//! * CSV: header `x,y,z,label`, one row per cell in grid order.
//! * PLY (ascii): one vertex per cell with a nonzero label, coloured
//!   1 → blue, 2 → red, 4 → yellow, 8 → green, with the label kept as an
//!   extra vertex property.
//! * Legacy VTK `STRUCTURED_POINTS` with an integer `label` scalar at the
//!   cell centres.
//! * JSON for region summaries and projection reports.
//!
//! Floats are written in shortest round-trip form, so CSV and PLY files
//! read back bit-exactly.  Files are written to a temporary sibling and
//! renamed into place.

use std::fs::File;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{PolyJson, PolyStats, BITSIZE_DEFINITION};
use crate::kinematics::Vec3;
use crate::scan::{region_summary, ClassifiedGrid, RegionSummary, SAMPLING_NOTE};
use crate::singularity::{
    compare_stats, reference_stats, EliminationStep, ExtraneousFactor, ProjectedSurface, ReferenceStats,
    SingularityKind, Space, StatsMatch,
};

#[derive(Debug, Error)]
pub enum ExportError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn parse_err(line: usize, msg: impl Into<String>) -> ExportError {
    ExportError::Parse { line, msg: msg.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridFormat {
    Csv,
    Ply,
    Vtk,
    Json,
}

impl FromStr for GridFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(GridFormat::Csv),
            "ply" => Ok(GridFormat::Ply),
            "vtk" => Ok(GridFormat::Vtk),
            "json" => Ok(GridFormat::Json),
            other => Err(format!("unsupported grid format `{other}`")),
        }
    }
}

/// Writes through a temporary file in the destination directory and
/// renames it over `path` once `body` succeeds.
pub fn write_atomic(
    path: &Path,
    body: impl FnOnce(&mut dyn Write) -> Result<(), ExportError>,
) -> Result<(), ExportError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file_mut());
        body(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// RGB colour of a label; `None` for label 0 (not exported).
pub fn label_color(label: u8) -> Option<[u8; 3]> {
    match label {
        0 => None,
        1 => Some([0, 0, 255]),
        2 => Some([255, 0, 0]),
        4 => Some([255, 255, 0]),
        8 => Some([0, 255, 0]),
        _ => Some([128, 128, 128]),
    }
}

fn space_title(g: &ClassifiedGrid) -> &'static str {
    match g.space {
        Space::Workspace => "workspace scan (label = IK solution count)",
        Space::Jointspace => "joint-space scan (label = DK solution count)",
    }
}

pub fn write_csv(g: &ClassifiedGrid, w: &mut dyn Write) -> Result<(), ExportError> {
    writeln!(w, "x,y,z,label")?;
    for (linear, label) in g.labels.iter().enumerate() {
        let [x, y, z] = g.center(linear);
        writeln!(w, "{x},{y},{z},{label}")?;
    }
    Ok(())
}

/// A cell centre with its label, as read back from CSV or PLY.
pub type LabelledPoint = (Vec3, u8);

pub fn read_csv(r: impl BufRead) -> Result<Vec<LabelledPoint>, ExportError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let n = i + 1;
        if i == 0 {
            if line.trim() != "x,y,z,label" {
                return Err(parse_err(n, "expected header `x,y,z,label`"));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(parse_err(n, "expected 4 fields"));
        }
        out.push(parse_point(&fields, n)?);
    }
    Ok(out)
}

fn parse_point(fields: &[&str], line: usize) -> Result<LabelledPoint, ExportError> {
    let mut p = [0.0; 3];
    for k in 0..3 {
        p[k] = fields[k].trim().parse().map_err(|_| parse_err(line, format!("bad number `{}`", fields[k])))?;
    }
    let label = fields[3].trim().parse().map_err(|_| parse_err(line, format!("bad label `{}`", fields[3])))?;
    Ok((p, label))
}

pub fn write_ply(g: &ClassifiedGrid, w: &mut dyn Write) -> Result<(), ExportError> {
    let count = g.labels.iter().filter(|&&l| l != 0).count();
    writeln!(w, "ply")?;
    writeln!(w, "format ascii 1.0")?;
    writeln!(w, "comment deltakin {}", space_title(g))?;
    writeln!(w, "comment box {}", g.bbox)?;
    writeln!(w, "comment res {}x{}x{}", g.res[0], g.res[1], g.res[2])?;
    writeln!(w, "comment {SAMPLING_NOTE}")?;
    writeln!(w, "comment colours: 1 blue, 2 red, 4 yellow, 8 green; label 0 omitted")?;
    writeln!(w, "element vertex {count}")?;
    for axis in ["x", "y", "z"] {
        writeln!(w, "property double {axis}")?;
    }
    for channel in ["red", "green", "blue", "label"] {
        writeln!(w, "property uchar {channel}")?;
    }
    writeln!(w, "end_header")?;
    for (linear, &label) in g.labels.iter().enumerate() {
        if let Some([r, gr, b]) = label_color(label) {
            let [x, y, z] = g.center(linear);
            writeln!(w, "{x} {y} {z} {r} {gr} {b} {label}")?;
        }
    }
    Ok(())
}

/// Reads the vertices of an ascii PLY file written by [`write_ply`].
pub fn read_ply(r: impl BufRead) -> Result<Vec<LabelledPoint>, ExportError> {
    let mut lines = r.lines().enumerate();
    let mut vertices = None;
    let mut first = true;
    for (i, line) in lines.by_ref() {
        let line = line?;
        let line = line.trim();
        if first {
            if line != "ply" {
                return Err(parse_err(i + 1, "missing `ply` magic"));
            }
            first = false;
            continue;
        }
        if line == "end_header" {
            break;
        }
        if let Some(n) = line.strip_prefix("element vertex ") {
            vertices = Some(n.trim().parse::<usize>().map_err(|_| parse_err(i + 1, "bad vertex count"))?);
        }
    }
    let expected = vertices.ok_or_else(|| parse_err(0, "no `element vertex` line"))?;
    let mut out = Vec::with_capacity(expected);
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 7 {
            return Err(parse_err(i + 1, "expected 7 vertex fields"));
        }
        let (p, label) = parse_point(&[fields[0], fields[1], fields[2], fields[6]], i + 1)?;
        let rgb: Vec<u8> =
            fields[3..6].iter().map(|f| f.parse()).collect::<Result<_, _>>().map_err(|_| parse_err(i + 1, "bad colour"))?;
        if label_color(label).map(|c| c.to_vec()) != Some(rgb) {
            return Err(parse_err(i + 1, "colour does not match label"));
        }
        out.push((p, label));
    }
    if out.len() != expected {
        return Err(parse_err(0, format!("header announces {expected} vertices, found {}", out.len())));
    }
    Ok(out)
}

pub fn write_vtk(g: &ClassifiedGrid, w: &mut dyn Write) -> Result<(), ExportError> {
    let origin = g.bbox.cell_center(g.res, [0, 0, 0]);
    let spacing = g.bbox.spacing(g.res);
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "deltakin {}; {SAMPLING_NOTE}", space_title(g))?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET STRUCTURED_POINTS")?;
    writeln!(w, "DIMENSIONS {} {} {}", g.res[0], g.res[1], g.res[2])?;
    writeln!(w, "ORIGIN {} {} {}", origin[0], origin[1], origin[2])?;
    writeln!(w, "SPACING {} {} {}", spacing[0], spacing[1], spacing[2])?;
    writeln!(w, "POINT_DATA {}", g.len())?;
    writeln!(w, "SCALARS label int 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for row in g.labels.chunks(g.res[0].max(1)) {
        let text: Vec<String> = row.iter().map(u8::to_string).collect();
        writeln!(w, "{}", text.join(" "))?;
    }
    Ok(())
}

pub fn write_json<T: Serialize>(value: &T, w: &mut dyn Write) -> Result<(), ExportError> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

/// Writes `g` in `format`; JSON means the region summary.
pub fn write_grid(g: &ClassifiedGrid, format: GridFormat, w: &mut dyn Write) -> Result<(), ExportError> {
    match format {
        GridFormat::Csv => write_csv(g, w),
        GridFormat::Ply => write_ply(g, w),
        GridFormat::Vtk => write_vtk(g, w),
        GridFormat::Json => write_json(&region_summary(g), w),
    }
}

pub fn export_grid(g: &ClassifiedGrid, format: GridFormat, path: &Path) -> Result<(), ExportError> {
    write_atomic(path, |w| write_grid(g, format, w))
}

/// A projected singularity polynomial with its statistics, the reference
/// statistics when known, and how the elimination went.
#[derive(Clone, Debug, Serialize)]
pub struct SurfaceReport {
    pub model: String,
    pub kind: SingularityKind,
    pub space: Space,
    pub link_length: String,
    pub polynomial: String,
    pub polynomial_json: PolyJson,
    pub stats: PolyStats,
    pub bitsize_definition: &'static str,
    /// Present when reference values exist for this model, kind and space.
    pub target: Option<ReferenceStats>,
    pub matches: Option<StatsMatch>,
    pub extraneous_factors_removed: Vec<ExtraneousFactor>,
    pub elimination_trace: Vec<EliminationStep>,
}

impl SurfaceReport {
    pub fn new(model: &str, kind: SingularityKind, s: &ProjectedSurface) -> Self {
        let target = reference_stats(model, kind).filter(|t| t.space == s.space);
        SurfaceReport {
            model: model.to_string(),
            kind,
            space: s.space,
            link_length: s.link_length.to_string(),
            polynomial: s.poly.to_string(),
            polynomial_json: PolyJson::from(&s.poly),
            stats: s.stats.clone(),
            bitsize_definition: BITSIZE_DEFINITION,
            matches: target.as_ref().map(|t| compare_stats(&s.stats, t)),
            target,
            extraneous_factors_removed: s.extraneous_factors_removed.clone(),
            elimination_trace: s.elimination_trace.clone(),
        }
    }
}

pub fn export_surface_report(report: &SurfaceReport, path: &Path) -> Result<(), ExportError> {
    write_atomic(path, |w| write_json(report, w))
}

pub fn export_summary(summary: &RegionSummary, path: &Path) -> Result<(), ExportError> {
    write_atomic(path, |w| write_json(summary, w))
}

/// Convenience for tests and callers that want a file body in memory.
pub fn to_string(body: impl FnOnce(&mut dyn Write) -> Result<(), ExportError>) -> Result<String, ExportError> {
    let mut buf = Vec::new();
    body(&mut buf)?;
    Ok(String::from_utf8(buf).expect("exports are ascii"))
}

pub fn read_csv_file(path: &Path) -> Result<Vec<LabelledPoint>, ExportError> {
    read_csv(io::BufReader::new(File::open(path)?))
}

pub fn read_ply_file(path: &Path) -> Result<Vec<LabelledPoint>, ExportError> {
    read_ply(io::BufReader::new(File::open(path)?))
}
