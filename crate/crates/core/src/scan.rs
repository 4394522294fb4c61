//! Grid classification of the workspace by IK solution count and of the
//! joint space by DK solution count.
//!
//! Each cell is labelled with the count at its centre: this is point
//! sampling, not a certified decomposition, so thin regions below the
//! grid spacing can be missed.  The boundaries between constant-count
//! regions have measure zero, so labels converge as the grid is refined.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kinematics::{count_ik_numeric, dk_numeric, NumericModel, Vec3};
use crate::robots::RobotModel;
use crate::singularity::Space;

/// Stated in every export: what a cell label means.
pub const SAMPLING_NOTE: &str =
    "label = solution count at the cell centre (point sampling, not a certified cell decomposition)";

pub const WORKSPACE_LABELS: [u8; 5] = [0, 1, 2, 4, 8];
pub const JOINTSPACE_LABELS: [u8; 3] = [0, 1, 2];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScanError {
    #[error("box must satisfy min < max on every axis (axis {axis}: {min} .. {max})")]
    EmptyBox { axis: usize, min: f64, max: f64 },
    #[error("resolution must be at least 1 on every axis, got {0:?}")]
    Resolution([usize; 3]),
    #[error("grid of resolution {res:?} needs {expected} labels, got {found}")]
    LabelCount { res: [usize; 3], expected: usize, found: usize },
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("failed to start worker pool: {0}")]
    Workers(String),
}

/// Axis-aligned scan region.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanBox {
    pub min: Vec3,
    pub max: Vec3,
}

impl ScanBox {
    pub fn new(min: Vec3, max: Vec3) -> Result<Self, ScanError> {
        for axis in 0..3 {
            if !min[axis].is_finite() || !max[axis].is_finite() || min[axis] >= max[axis] {
                return Err(ScanError::EmptyBox { axis, min: min[axis], max: max[axis] });
            }
        }
        Ok(ScanBox { min, max })
    }

    /// `[-2, 2] × [-2, 6] × [-2, 6]`, the box of the classic Orthoglide
    /// workspace plots.
    pub fn default_workspace() -> Self {
        ScanBox { min: [-2.0, -2.0, -2.0], max: [2.0, 6.0, 6.0] }
    }

    /// The joint-limit cube of `m`.
    pub fn default_jointspace(m: &RobotModel) -> Self {
        let (lo, hi) = m.limits_f64();
        ScanBox { min: [lo; 3], max: [hi; 3] }
    }

    pub fn default_for(space: Space, m: &RobotModel) -> Self {
        match space {
            Space::Workspace => Self::default_workspace(),
            Space::Jointspace => Self::default_jointspace(m),
        }
    }

    /// Centre of cell `idx` when the box is split into `res` cells per axis.
    pub fn cell_center(&self, res: [usize; 3], idx: [usize; 3]) -> Vec3 {
        std::array::from_fn(|k| {
            let n = res[k] as f64;
            self.min[k] + (2 * idx[k] + 1) as f64 * (self.max[k] - self.min[k]) / (2.0 * n)
        })
    }

    pub fn spacing(&self, res: [usize; 3]) -> Vec3 {
        std::array::from_fn(|k| (self.max[k] - self.min[k]) / res[k] as f64)
    }
}

/// `xmin:xmax,ymin:ymax,zmin:zmax`.
impl FromStr for ScanBox {
    type Err = ScanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ScanError::Parse(s.to_string());
        let axes: Vec<&str> = s.split(',').collect();
        if axes.len() != 3 {
            return Err(bad());
        }
        let mut min = [0.0; 3];
        let mut max = [0.0; 3];
        for (k, a) in axes.iter().enumerate() {
            let (lo, hi) = a.split_once(':').ok_or_else(bad)?;
            min[k] = lo.trim().parse().map_err(|_| bad())?;
            max[k] = hi.trim().parse().map_err(|_| bad())?;
        }
        ScanBox::new(min, max)
    }
}

impl fmt::Display for ScanBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{},{}:{},{}:{}",
            self.min[0], self.max[0], self.min[1], self.max[1], self.min[2], self.max[2]
        )
    }
}

/// `NxNxN` (or `NxMxK`).
pub fn parse_resolution(s: &str) -> Result<[usize; 3], ScanError> {
    let parts: Vec<&str> = s.split(['x', 'X']).collect();
    if parts.len() != 3 {
        return Err(ScanError::Parse(s.to_string()));
    }
    let mut res = [0; 3];
    for (k, p) in parts.iter().enumerate() {
        res[k] = p.trim().parse().map_err(|_| ScanError::Parse(s.to_string()))?;
    }
    check_resolution(res)?;
    Ok(res)
}

fn check_resolution(res: [usize; 3]) -> Result<(), ScanError> {
    if res.contains(&0) {
        return Err(ScanError::Resolution(res));
    }
    Ok(())
}

/// Cell labels on a regular grid, `x` index varying fastest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifiedGrid {
    pub space: Space,
    pub bbox: ScanBox,
    pub res: [usize; 3],
    pub labels: Vec<u8>,
    /// Joint-space cells whose DK system was degenerate (labelled 0).
    pub degenerate_cells: usize,
}

impl ClassifiedGrid {
    pub fn from_labels(space: Space, bbox: ScanBox, res: [usize; 3], labels: Vec<u8>) -> Result<Self, ScanError> {
        check_resolution(res)?;
        let expected = res.iter().product();
        if labels.len() != expected {
            return Err(ScanError::LabelCount { res, expected, found: labels.len() });
        }
        Ok(ClassifiedGrid { space, bbox, res, labels, degenerate_cells: 0 })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index(&self, idx: [usize; 3]) -> usize {
        idx[0] + self.res[0] * (idx[1] + self.res[1] * idx[2])
    }

    pub fn coords(&self, linear: usize) -> [usize; 3] {
        let x = linear % self.res[0];
        let rest = linear / self.res[0];
        [x, rest % self.res[1], rest / self.res[1]]
    }

    pub fn label_at(&self, idx: [usize; 3]) -> u8 {
        self.labels[self.index(idx)]
    }

    pub fn center(&self, linear: usize) -> Vec3 {
        self.bbox.cell_center(self.res, self.coords(linear))
    }

    pub fn allowed_labels(&self) -> &'static [u8] {
        match self.space {
            Space::Workspace => &WORKSPACE_LABELS,
            Space::Jointspace => &JOINTSPACE_LABELS,
        }
    }
}

fn run_with_workers<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T, ScanError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| ScanError::Workers(e.to_string()))?;
    Ok(pool.install(job))
}

/// Labels every cell with the number of IK solutions at its centre.
/// `workers == 0` uses one thread per core; the grid is identical for any
/// worker count.
pub fn scan_workspace(
    m: &RobotModel,
    bbox: ScanBox,
    res: [usize; 3],
    apply_limits: bool,
    workers: usize,
) -> Result<ClassifiedGrid, ScanError> {
    check_resolution(res)?;
    let nm = NumericModel::new(m);
    let mut grid = ClassifiedGrid {
        space: Space::Workspace,
        bbox,
        res,
        labels: vec![0; res.iter().product()],
        degenerate_cells: 0,
    };
    let slab = res[0];
    let centers = |row: usize, x: usize| bbox.cell_center(res, [x, row % res[1], row / res[1]]);
    run_with_workers(workers, || {
        grid.labels.par_chunks_mut(slab).enumerate().for_each(|(row, out)| {
            for (x, label) in out.iter_mut().enumerate() {
                *label = count_ik_numeric(&nm, &centers(row, x), apply_limits) as u8;
            }
        })
    })?;
    Ok(grid)
}

/// Labels every cell with the number of DK solutions at its centre.
/// Degenerate systems (parallel or coincident radical planes) are
/// labelled 0 and counted in `degenerate_cells`.
pub fn scan_jointspace(
    m: &RobotModel,
    bbox: ScanBox,
    res: [usize; 3],
    apply_limits: bool,
    workers: usize,
) -> Result<ClassifiedGrid, ScanError> {
    check_resolution(res)?;
    let nm = NumericModel::new(m);
    let mut labels = vec![0u8; res.iter().product()];
    let mut degenerate = vec![false; labels.len()];
    let slab = res[0];
    run_with_workers(workers, || {
        labels.par_chunks_mut(slab).zip(degenerate.par_chunks_mut(slab)).enumerate().for_each(
            |(row, (out, flags))| {
                for x in 0..slab {
                    let joints = bbox.cell_center(res, [x, row % res[1], row / res[1]]);
                    let set = dk_numeric(&nm, &joints, apply_limits);
                    out[x] = set.count() as u8;
                    flags[x] = set.is_degenerate();
                }
            },
        )
    })?;
    Ok(ClassifiedGrid {
        space: Space::Jointspace,
        bbox,
        res,
        labels,
        degenerate_cells: degenerate.iter().filter(|&&d| d).count(),
    })
}

pub fn scan(
    m: &RobotModel,
    space: Space,
    bbox: ScanBox,
    res: [usize; 3],
    apply_limits: bool,
    workers: usize,
) -> Result<ClassifiedGrid, ScanError> {
    match space {
        Space::Workspace => scan_workspace(m, bbox, res, apply_limits, workers),
        Space::Jointspace => scan_jointspace(m, bbox, res, apply_limits, workers),
    }
}

/// A face shared by two face-adjacent cells with different labels.
/// `cell` is the lower-index cell; its neighbour is one step along `axis`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryFace {
    pub cell: [usize; 3],
    pub axis: usize,
    /// (label of `cell`, label of the neighbour).
    pub labels: (u8, u8),
}

pub fn extract_boundary(g: &ClassifiedGrid) -> Vec<BoundaryFace> {
    let mut faces = Vec::new();
    for linear in 0..g.len() {
        let cell = g.coords(linear);
        let here = g.labels[linear];
        for axis in 0..3 {
            if cell[axis] + 1 >= g.res[axis] {
                continue;
            }
            let mut next = cell;
            next[axis] += 1;
            let there = g.label_at(next);
            if there != here {
                faces.push(BoundaryFace { cell, axis, labels: (here, there) });
            }
        }
    }
    faces
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelSummary {
    pub label: u8,
    pub count: usize,
    pub fraction: f64,
    /// Connected components under face adjacency.
    pub components: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionSummary {
    pub space: String,
    pub bbox: ScanBox,
    pub res: [usize; 3],
    pub total_cells: usize,
    pub labels: Vec<LabelSummary>,
    pub degenerate_cells: usize,
    pub note: String,
}

/// Per-label counts, volume fractions and 6-connected component counts.
/// Every label allowed in the grid's space is listed, present or not.
pub fn region_summary(g: &ClassifiedGrid) -> RegionSummary {
    let components = component_counts(g);
    let total = g.len();
    let mut labels: Vec<u8> = g.allowed_labels().to_vec();
    for &l in &g.labels {
        if !labels.contains(&l) {
            labels.push(l);
        }
    }
    labels.sort_unstable();
    let labels = labels
        .into_iter()
        .map(|label| {
            let count = g.labels.iter().filter(|&&l| l == label).count();
            LabelSummary {
                label,
                count,
                fraction: if total == 0 { 0.0 } else { count as f64 / total as f64 },
                components: components[label as usize],
            }
        })
        .collect();
    RegionSummary {
        space: g.space.name().to_string(),
        bbox: g.bbox,
        res: g.res,
        total_cells: total,
        labels,
        degenerate_cells: g.degenerate_cells,
        note: SAMPLING_NOTE.to_string(),
    }
}

fn component_counts(g: &ClassifiedGrid) -> [usize; 256] {
    let mut counts = [0usize; 256];
    let mut seen = vec![false; g.len()];
    let mut stack = Vec::new();
    for start in 0..g.len() {
        if seen[start] {
            continue;
        }
        let label = g.labels[start];
        counts[label as usize] += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(linear) = stack.pop() {
            let cell = g.coords(linear);
            for axis in 0..3 {
                for step in [-1isize, 1] {
                    let c = cell[axis] as isize + step;
                    if c < 0 || c >= g.res[axis] as isize {
                        continue;
                    }
                    let mut next = cell;
                    next[axis] = c as usize;
                    let n = g.index(next);
                    if !seen[n] && g.labels[n] == label {
                        seen[n] = true;
                        stack.push(n);
                    }
                }
            }
        }
    }
    counts
}
