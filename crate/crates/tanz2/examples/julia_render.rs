//! Rasterize the dynamical plane for one parameter and write a PPM
//! image: white pixels converge to the origin, black ones hit poles or
//! overflow, gray ones exhaust the budget. The flood-fill heuristic then
//! checks that both asymptotic values sit in the origin's pixel
//! component.
//!
//! Run with: cargo run --release --example julia_render

use num_complex::Complex64;
use tanz2::render::{write_ppm, Palette};
use tanz2::scan::{flood_component, scan_dynamical, GridSpec};
use tanz2::map::Parameter;

fn main() {
    let lambda = Complex64::new(0.85, 0.0);
    let p = Parameter::new(lambda).expect("nonzero lambda");
    let spec = GridSpec::from_window(-3.0, -3.0, 3.0, 3.0, 512).expect("valid window");
    let grid = scan_dynamical(p, spec, 2000);

    // Class histogram: at lambda = 0.85 the Julia set is a Cantor set of
    // measure-zero filaments, so almost every pixel is origin basin.
    let mut counts = [0usize; 256];
    for cell in &grid.cells {
        counts[cell.class_id as usize] += 1;
    }
    println!("scan at lambda = {lambda}, {}x{} pixels:", spec.cols, spec.rows);
    for (class, count) in counts.iter().enumerate().filter(|(_, &c)| c > 0) {
        let name = match class {
            0 => "origin basin",
            254 => "pole / overflow",
            255 => "undetermined",
            k => &format!("cycle basin, period {k}"),
        };
        println!("  class {class:>3} ({name}): {count} pixels");
    }

    // The immediate-basin heuristic: flood the origin's component and
    // look up the asymptotic values' pixels. A raster can evidence, not
    // certify, immediacy.
    let origin_pixel = spec
        .pixel_containing(Complex64::new(0.0, 0.0))
        .expect("origin is inside the window");
    let mask = flood_component(&grid, origin_pixel).expect("origin pixel is classified");
    println!();
    for value in p.asymptotic_values() {
        let (col, row) = spec.pixel_containing(value).expect("inside the window");
        let inside = mask[(row * spec.cols + col) as usize];
        println!("asymptotic value {value}: pixel ({col}, {row}), origin component: {inside}");
    }

    let out = std::env::temp_dir().join("tanz2-julia-0.85.ppm");
    write_ppm(&grid, &Palette::default(), &out).expect("image written");
    println!();
    println!("wrote {}", out.display());
}
