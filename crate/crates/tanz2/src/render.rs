//! Binary PPM rendering of classified grids.
//!
//! The palette follows the figure convention of light basins and dark
//! escape regions: origin basin white, non-origin cycle basins hued by
//! period, escape black, undetermined gray. Output is byte-exact for
//! identical inputs.

use std::io::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::scan::{ClassifiedGrid, CLASS_ESCAPE, CLASS_ORIGIN, CLASS_UNDETERMINED};

/// RGB color per class id; a class without a color cannot be rendered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Palette {
    colors: [Option<[u8; 3]>; 256],
}

impl Default for Palette {
    fn default() -> Self {
        let mut colors = [None; 256];
        colors[CLASS_ORIGIN as usize] = Some([255, 255, 255]);
        colors[CLASS_ESCAPE as usize] = Some([0, 0, 0]);
        colors[CLASS_UNDETERMINED as usize] = Some([128, 128, 128]);
        // Cycle basins: walk the hue wheel by the golden angle so nearby
        // periods stay visually distinct.
        for period in 1..=253u32 {
            let hue = (period as f64 * 137.50776405) % 360.0;
            colors[period as usize] = Some(hue_to_rgb(hue));
        }
        Palette { colors }
    }
}

impl Palette {
    pub fn color_of(&self, class_id: u8) -> Option<[u8; 3]> {
        self.colors[class_id as usize]
    }

    pub fn set(&mut self, class_id: u8, rgb: [u8; 3]) {
        self.colors[class_id as usize] = Some(rgb);
    }
}

/// Saturated hue to RGB, value and saturation pinned to 1.
fn hue_to_rgb(hue: f64) -> [u8; 3] {
    let h = hue / 60.0;
    let x = 1.0 - (h % 2.0 - 1.0).abs();
    let (r, g, b) = match h as u32 {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    let q = |v: f64| (v * 255.0).round() as u8;
    [q(r), q(g), q(b)]
}

/// Rendering failure: unpaintable class or I/O.
#[derive(Debug, Error)]
pub enum RenderError {
    #[error("palette has no color for class {0}")]
    MissingClass(u8),
    #[error("writing image: {0}")]
    Io(#[from] std::io::Error),
}

/// The complete PPM file for a grid: `P6\n<cols> <rows>\n255\n` followed
/// by rows top to bottom, three bytes per pixel.
///
/// The palette is checked against every class present before any pixel
/// is emitted, so a missing class produces no partial output.
pub fn ppm_bytes(grid: &ClassifiedGrid, palette: &Palette) -> Result<Vec<u8>, RenderError> {
    for cell in &grid.cells {
        if palette.color_of(cell.class_id).is_none() {
            return Err(RenderError::MissingClass(cell.class_id));
        }
    }
    let mut out = Vec::with_capacity(32 + grid.cells.len() * 3);
    out.extend_from_slice(format!("P6\n{} {}\n255\n", grid.spec.cols, grid.spec.rows).as_bytes());
    for cell in &grid.cells {
        let rgb = palette.color_of(cell.class_id).expect("checked above");
        out.extend_from_slice(&rgb);
    }
    Ok(out)
}

/// Render the grid and write it to path atomically enough for tests:
/// bytes are produced in full before the file is created.
pub fn write_ppm(
    grid: &ClassifiedGrid,
    palette: &Palette,
    path: impl AsRef<Path>,
) -> Result<(), RenderError> {
    let bytes = ppm_bytes(grid, palette)?;
    let mut file = std::fs::File::create(path)?;
    file.write_all(&bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scan::{Cell, GridSpec};
    use num_complex::Complex64;

    fn grid1x1(class_id: u8) -> ClassifiedGrid {
        ClassifiedGrid {
            spec: GridSpec::new(Complex64::new(0.0, 0.0), 1.0, 1.0, 1, 1).unwrap(),
            cells: vec![Cell {
                class_id,
                period: 0,
                steps: 0,
            }],
        }
    }

    #[test]
    fn one_pixel_file_is_header_plus_three_bytes() {
        let bytes = ppm_bytes(&grid1x1(CLASS_ORIGIN), &Palette::default()).unwrap();
        assert_eq!(&bytes[..11], b"P6\n1 1\n255\n");
        assert_eq!(bytes.len(), 11 + 3);
        assert_eq!(&bytes[11..], &[255, 255, 255]);
    }

    #[test]
    fn default_palette_covers_reserved_and_cycle_classes() {
        let p = Palette::default();
        assert_eq!(p.color_of(CLASS_ORIGIN), Some([255, 255, 255]));
        assert_eq!(p.color_of(CLASS_ESCAPE), Some([0, 0, 0]));
        assert_eq!(p.color_of(CLASS_UNDETERMINED), Some([128, 128, 128]));
        for period in 1..=253u8 {
            assert!(p.color_of(period).is_some(), "period {period} unpainted");
        }
        // Adjacent periods get visibly different hues.
        assert_ne!(p.color_of(2), p.color_of(3));
    }

    #[test]
    fn missing_class_fails_before_any_bytes() {
        let mut palette = Palette::default();
        palette.colors[7] = None;
        let err = ppm_bytes(&grid1x1(7), &palette).unwrap_err();
        assert!(matches!(err, RenderError::MissingClass(7)));
    }

    #[test]
    fn identical_grids_render_identical_files() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.ppm");
        let b = dir.path().join("b.ppm");
        let grid = grid1x1(CLASS_ESCAPE);
        write_ppm(&grid, &Palette::default(), &a).unwrap();
        write_ppm(&grid, &Palette::default(), &b).unwrap();
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    }

    #[test]
    fn rows_are_written_top_to_bottom() {
        let spec = GridSpec::new(Complex64::new(0.0, 0.0), 1.0, 1.0, 1, 2).unwrap();
        let grid = ClassifiedGrid {
            spec,
            cells: vec![
                Cell {
                    class_id: CLASS_ORIGIN,
                    period: 1,
                    steps: 0,
                },
                Cell {
                    class_id: CLASS_ESCAPE,
                    period: 0,
                    steps: 0,
                },
            ],
        };
        let bytes = ppm_bytes(&grid, &Palette::default()).unwrap();
        assert_eq!(&bytes[..11], b"P6\n1 2\n255\n");
        assert_eq!(&bytes[11..14], &[255, 255, 255], "row 0 first");
        assert_eq!(&bytes[14..], &[0, 0, 0]);
    }
}
