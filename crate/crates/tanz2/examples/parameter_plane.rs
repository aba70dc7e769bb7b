//! Rasterize the parameter plane: classify lambda pixel by pixel and
//! write a PPM image. White is the origin-only (Cantor) regime, colored
//! pixels carry an extra attracting cycle keyed by period, gray is
//! undetermined, black escaped.
//!
//! Run with: cargo run --release --example parameter_plane

use num_complex::Complex64;
use tanz2::render::{write_ppm, Palette};
use tanz2::scan::{scan_parameter, GridSpec, CLASS_ESCAPE, CLASS_ORIGIN, CLASS_UNDETERMINED};

fn main() {
    let spec = GridSpec::from_window(-2.0, -2.0, 2.0, 2.0, 256).expect("valid window");
    let budget = 1000;
    let grid = scan_parameter(spec, budget);

    let mut counts = [0usize; 256];
    for cell in &grid.cells {
        counts[cell.class_id as usize] += 1;
    }
    println!("parameter scan, {}x{} pixels, budget {budget}:", spec.cols, spec.rows);
    for (class, count) in counts.iter().enumerate().filter(|(_, &c)| c > 0) {
        let share = 100.0 * *count as f64 / grid.cells.len() as f64;
        let name = match class as u8 {
            CLASS_ORIGIN => String::from("origin only"),
            CLASS_ESCAPE => String::from("singular escape"),
            CLASS_UNDETERMINED => String::from("undetermined"),
            k => format!("attracting cycle, period {k}"),
        };
        println!("  class {class:>3} ({name}): {count} pixels ({share:.1}%)");
    }

    // Verdicts inherit the lambda -> -lambda and lambda -> conj(lambda)
    // symmetries, so the raster of a symmetric window is point- and
    // mirror-symmetric. Spot-check one pixel pair.
    let z = Complex64::new(0.02, 1.38);
    let (c1, r1) = spec.pixel_containing(z).expect("inside");
    let (c2, r2) = spec.pixel_containing(-z).expect("inside");
    println!();
    println!(
        "pixel at  {z}: class {} | pixel at {}: class {}",
        grid.cell_at(c1, r1).class_id,
        -z,
        grid.cell_at(c2, r2).class_id
    );

    let out = std::env::temp_dir().join("tanz2-parameter-plane.ppm");
    write_ppm(&grid, &Palette::default(), &out).expect("image written");
    println!("wrote {}", out.display());
}
