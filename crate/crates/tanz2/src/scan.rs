//! Deterministic rasterization of the dynamical and parameter planes.
//!
//! [`scan_dynamical`] classifies a grid of seeds under a fixed parameter
//! into basins (origin, non-origin cycle, escape, undetermined);
//! [`scan_parameter`] classifies a grid of parameters by their singular
//! orbit. Both parallelize over rows, and every cell is a pure function
//! of its own coordinates, so outputs are byte-identical regardless of
//! worker count. [`flood_component`] extracts 4-connected components for
//! the immediate-basin heuristic.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::map::{eval_detailed, EvalOutcome, Parameter};
use crate::orbit::{classify_parameter, Verdict, ORIGIN_CAPTURE_RADIUS};

/// Class id of the origin's attracting basin.
pub const CLASS_ORIGIN: u8 = 0;
/// Class id of pixels whose orbit escaped through a pole or overflowed.
pub const CLASS_ESCAPE: u8 = 254;
/// Class id of pixels the budget could not decide.
pub const CLASS_UNDETERMINED: u8 = 255;

/// A pixel counts as attracted to the non-origin cycle once it comes
/// within this distance of a precomputed cycle point; avoids re-detecting
/// the cycle in every pixel.
pub const CYCLE_MATCH_RADIUS: f64 = 1e-4;

/// Consecutive near-origin points required before a pixel is classed
/// into the origin basin, mirroring the parameter classifier.
const ORIGIN_RUN: u32 = 3;

/// A rectangular window rasterized into cols x rows pixels.
///
/// Row 0 sits at the top (maximum imaginary part). Pixel centers are
/// placed symmetrically about the window center: for a window centered
/// at 0 the grid is exactly invariant under negation and conjugation,
/// which the raster symmetry checks rely on bit-for-bit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub center: Complex64,
    pub width: f64,
    pub height: f64,
    pub cols: u32,
    pub rows: u32,
}

/// Rejected grid shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("grid needs cols, rows >= 1 and positive finite extent")]
pub struct InvalidGrid;

impl GridSpec {
    pub fn new(
        center: Complex64,
        width: f64,
        height: f64,
        cols: u32,
        rows: u32,
    ) -> Result<Self, InvalidGrid> {
        if cols == 0 || rows == 0 {
            return Err(InvalidGrid);
        }
        if !(width > 0.0) || !(height > 0.0) || !width.is_finite() || !height.is_finite() {
            return Err(InvalidGrid);
        }
        if !center.is_finite() {
            return Err(InvalidGrid);
        }
        Ok(GridSpec {
            center,
            width,
            height,
            cols,
            rows,
        })
    }

    /// Square grid over the axis-aligned window [x0, x1] x [y0, y1].
    pub fn from_window(x0: f64, y0: f64, x1: f64, y1: f64, res: u32) -> Result<Self, InvalidGrid> {
        GridSpec::new(
            Complex64::new(0.5 * (x0 + x1), 0.5 * (y0 + y1)),
            x1 - x0,
            y1 - y0,
            res,
            res,
        )
    }

    /// Center of pixel (col, row). Offsets are computed as exact
    /// multiples of half pixels before scaling, so mirrored pixels get
    /// exactly mirrored coordinates.
    pub fn point_at(&self, col: u32, row: u32) -> Complex64 {
        let u = (col as f64 + 0.5) - self.cols as f64 / 2.0;
        let v = self.rows as f64 / 2.0 - (row as f64 + 0.5);
        Complex64::new(
            self.center.re + u * (self.width / self.cols as f64),
            self.center.im + v * (self.height / self.rows as f64),
        )
    }

    /// The pixel whose cell contains z, if z lies inside the window.
    pub fn pixel_containing(&self, z: Complex64) -> Option<(u32, u32)> {
        let fx = (z.re - self.center.re) / self.width + 0.5;
        let fy = 0.5 - (z.im - self.center.im) / self.height;
        let col = (fx * self.cols as f64).floor();
        let row = (fy * self.rows as f64).floor();
        if col < 0.0 || row < 0.0 || col >= self.cols as f64 || row >= self.rows as f64 {
            return None;
        }
        Some((col as u32, row as u32))
    }

    pub fn cell_count(&self) -> usize {
        self.cols as usize * self.rows as usize
    }
}

/// Classification record of one pixel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    /// 0 = origin basin, 1..=253 = non-origin cycle basin keyed by
    /// period, 254 = pole/escape, 255 = undetermined.
    pub class_id: u8,
    /// Cycle period for basin classes; 1 for the origin, 0 otherwise.
    pub period: u8,
    /// Iterations performed when the class was decided; equals the
    /// budget for undetermined pixels.
    pub steps: u32,
}

/// A scanned raster: the window plus one record per pixel, row-major
/// with row 0 on top.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassifiedGrid {
    pub spec: GridSpec,
    pub cells: Vec<Cell>,
}

/// Basin classes a period maps to: periods beyond 253 would collide with
/// the reserved ids, so they saturate (the classifier's own period cap
/// is far lower).
fn class_for_period(period: usize) -> u8 {
    period.min(253) as u8
}

/// Classify one seed's forward orbit against the known attractors.
///
/// Checks run in a fixed order per step (escape, origin capture, cycle
/// proximity), and a decision at step s depends only on the first s
/// orbit points, so raising the budget can only turn undetermined cells
/// into definite ones, never the reverse.
fn classify_seed(p: Parameter, seed: Complex64, budget: usize, cycle: &CycleTarget) -> Cell {
    let mut z = seed;
    let mut origin_run = 0u32;
    for step in 0..budget as u32 {
        if z.norm() < ORIGIN_CAPTURE_RADIUS {
            origin_run += 1;
            if origin_run >= ORIGIN_RUN {
                return Cell {
                    class_id: CLASS_ORIGIN,
                    period: 1,
                    steps: step,
                };
            }
        } else {
            origin_run = 0;
        }
        if let Some(period) = cycle.matches(z) {
            return Cell {
                class_id: class_for_period(period),
                period: period.min(u8::MAX as usize) as u8,
                steps: step,
            };
        }
        match eval_detailed(p, z) {
            EvalOutcome::Finite(next) => z = next,
            EvalOutcome::Pole | EvalOutcome::Overflow => {
                return Cell {
                    class_id: CLASS_ESCAPE,
                    period: 0,
                    steps: step + 1,
                }
            }
        }
    }
    Cell {
        class_id: CLASS_UNDETERMINED,
        period: 0,
        steps: budget as u32,
    }
}

/// The non-origin attracting cycle of the current parameter, if any,
/// expanded to all its points for per-pixel proximity matching.
struct CycleTarget {
    points: Vec<Complex64>,
    period: usize,
}

impl CycleTarget {
    fn none() -> Self {
        CycleTarget {
            points: Vec::new(),
            period: 0,
        }
    }

    fn from_parameter(p: Parameter, budget: usize) -> Self {
        let class = classify_parameter(p, budget);
        let Verdict::AttractingCycle(period) = class.verdict else {
            return CycleTarget::none();
        };
        let Some(info) = class.cycle else {
            return CycleTarget::none();
        };
        let mut points = Vec::with_capacity(period);
        let mut z = info.representative;
        for _ in 0..period {
            points.push(z);
            match eval_detailed(p, z) {
                EvalOutcome::Finite(next) => z = next,
                _ => return CycleTarget::none(),
            }
        }
        CycleTarget { points, period }
    }

    fn matches(&self, z: Complex64) -> Option<usize> {
        self.points
            .iter()
            .any(|&c| (z - c).norm() < CYCLE_MATCH_RADIUS)
            .then_some(self.period)
    }
}

/// Rasterize basins of attraction for a fixed parameter.
///
/// The parameter is classified once up front; pixels are then matched
/// against the origin and, when present, the detected non-origin cycle.
pub fn scan_dynamical(p: Parameter, spec: GridSpec, budget: usize) -> ClassifiedGrid {
    assert!(budget >= 50, "scan budget below useful minimum");
    let cycle = CycleTarget::from_parameter(p, budget);
    let mut cells = vec![
        Cell {
            class_id: CLASS_UNDETERMINED,
            period: 0,
            steps: 0,
        };
        spec.cell_count()
    ];
    cells
        .par_chunks_mut(spec.cols as usize)
        .enumerate()
        .for_each(|(row, out)| {
            for (col, cell) in out.iter_mut().enumerate() {
                let seed = spec.point_at(col as u32, row as u32);
                *cell = classify_seed(p, seed, budget, &cycle);
            }
        });
    ClassifiedGrid { spec, cells }
}

/// Rasterize singular-orbit verdicts over a window of parameters.
///
/// The pixel containing lambda = 0 (not a member of the family) is
/// marked undetermined.
pub fn scan_parameter(spec: GridSpec, budget: usize) -> ClassifiedGrid {
    assert!(budget >= 100, "classification budget below useful minimum");
    let mut cells = vec![
        Cell {
            class_id: CLASS_UNDETERMINED,
            period: 0,
            steps: 0,
        };
        spec.cell_count()
    ];
    cells
        .par_chunks_mut(spec.cols as usize)
        .enumerate()
        .for_each(|(row, out)| {
            for (col, cell) in out.iter_mut().enumerate() {
                let lambda = spec.point_at(col as u32, row as u32);
                *cell = match Parameter::new(lambda) {
                    Ok(p) => classify_lambda(p, budget),
                    Err(_) => Cell {
                        class_id: CLASS_UNDETERMINED,
                        period: 0,
                        steps: 0,
                    },
                };
            }
        });
    ClassifiedGrid { spec, cells }
}

fn classify_lambda(p: Parameter, budget: usize) -> Cell {
    let class = classify_parameter(p, budget);
    let steps = class.singular_orbit.steps_used as u32;
    match class.verdict {
        Verdict::OriginOnly => Cell {
            class_id: CLASS_ORIGIN,
            period: 1,
            steps,
        },
        Verdict::AttractingCycle(period) => Cell {
            class_id: class_for_period(period),
            period: period.min(u8::MAX as usize) as u8,
            steps,
        },
        Verdict::SingularEscape => Cell {
            class_id: CLASS_ESCAPE,
            period: 0,
            steps,
        },
        Verdict::Undetermined => Cell {
            class_id: CLASS_UNDETERMINED,
            period: 0,
            steps,
        },
    }
}

/// Flood fill from an undetermined pixel is refused: the component of
/// "we don't know" is not evidence of anything.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FloodError {
    #[error("seed pixel ({0}, {1}) is outside the grid")]
    SeedOutsideGrid(u32, u32),
    #[error("seed pixel ({0}, {1}) has no definite class")]
    SeedUndetermined(u32, u32),
}

/// The 4-connected component of equal class containing the seed pixel
/// (col, row), as a row-major mask.
///
/// 4-connectivity is deliberate: diagonal leaks across thin Julia
/// filaments would merge basin components that are visibly separate.
pub fn flood_component(grid: &ClassifiedGrid, seed: (u32, u32)) -> Result<Vec<bool>, FloodError> {
    let (cols, rows) = (grid.spec.cols, grid.spec.rows);
    let (sc, sr) = seed;
    if sc >= cols || sr >= rows {
        return Err(FloodError::SeedOutsideGrid(sc, sr));
    }
    let at = |col: u32, row: u32| row as usize * cols as usize + col as usize;
    let class = grid.cells[at(sc, sr)].class_id;
    if class == CLASS_UNDETERMINED {
        return Err(FloodError::SeedUndetermined(sc, sr));
    }
    let mut mask = vec![false; grid.cells.len()];
    let mut queue = std::collections::VecDeque::new();
    mask[at(sc, sr)] = true;
    queue.push_back((sc, sr));
    while let Some((c, r)) = queue.pop_front() {
        let mut visit = |nc: u32, nr: u32| {
            let i = at(nc, nr);
            if !mask[i] && grid.cells[i].class_id == class {
                mask[i] = true;
                queue.push_back((nc, nr));
            }
        };
        if c > 0 {
            visit(c - 1, r);
        }
        if c + 1 < cols {
            visit(c + 1, r);
        }
        if r > 0 {
            visit(c, r - 1);
        }
        if r + 1 < rows {
            visit(c, r + 1);
        }
    }
    Ok(mask)
}

/// Format tag stamped into every serialized grid.
pub const GRID_FORMAT: &str = "tanz2.grid.v1";
/// Cell payload layout behind the base64: three little-endian fields.
pub const CELL_ENCODING: &str = "class:u8,period:u8,steps:u32le";

#[derive(Serialize, Deserialize)]
struct GridDoc {
    format: String,
    spec: GridSpec,
    encoding: String,
    cells: String,
}

/// Malformed serialized grid.
#[derive(Debug, Error)]
pub enum GridDecodeError {
    #[error("not a grid document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format tag {0:?}")]
    Format(String),
    #[error("unsupported cell encoding {0:?}")]
    Encoding(String),
    #[error("cell payload is not valid base64")]
    Base64,
    #[error("payload holds {got} cells, spec wants {want}")]
    CellCount { got: usize, want: usize },
}

impl ClassifiedGrid {
    /// Serialize to the versioned JSON document: header fields in the
    /// clear, cells packed little-endian and base64-coded.
    pub fn to_json(&self) -> String {
        use base64::Engine;
        let mut payload = Vec::with_capacity(self.cells.len() * 6);
        for cell in &self.cells {
            payload.push(cell.class_id);
            payload.push(cell.period);
            payload.extend_from_slice(&cell.steps.to_le_bytes());
        }
        let doc = GridDoc {
            format: GRID_FORMAT.to_string(),
            spec: self.spec,
            encoding: CELL_ENCODING.to_string(),
            cells: base64::engine::general_purpose::STANDARD.encode(payload),
        };
        serde_json::to_string(&doc).expect("grid document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, GridDecodeError> {
        use base64::Engine;
        let doc: GridDoc = serde_json::from_str(text)?;
        if doc.format != GRID_FORMAT {
            return Err(GridDecodeError::Format(doc.format));
        }
        if doc.encoding != CELL_ENCODING {
            return Err(GridDecodeError::Encoding(doc.encoding));
        }
        let payload = base64::engine::general_purpose::STANDARD
            .decode(doc.cells.as_bytes())
            .map_err(|_| GridDecodeError::Base64)?;
        if payload.len() % 6 != 0 || payload.len() / 6 != doc.spec.cell_count() {
            return Err(GridDecodeError::CellCount {
                got: payload.len() / 6,
                want: doc.spec.cell_count(),
            });
        }
        let cells = payload
            .chunks_exact(6)
            .map(|b| Cell {
                class_id: b[0],
                period: b[1],
                steps: u32::from_le_bytes([b[2], b[3], b[4], b[5]]),
            })
            .collect();
        Ok(ClassifiedGrid {
            spec: doc.spec,
            cells,
        })
    }

    pub fn cell_at(&self, col: u32, row: u32) -> Cell {
        self.cells[row as usize * self.spec.cols as usize + col as usize]
    }
}
