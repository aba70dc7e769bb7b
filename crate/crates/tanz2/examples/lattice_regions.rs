//! The pole/zero lattice and the integer region coding of the right half
//! plane: where the singularities of tan(z^2) sit and which region index
//! codes each point.
//!
//! Run with: cargo run --example lattice_regions

use num_complex::Complex64;
use tanz2::lattice::{pole, region, region_of, zero};

fn main() {
    // Zeros z_n and poles p_n interleave along the curves Re(z^2) = n*pi
    // and Re(z^2) = (n + 1/2)*pi. Index 0 is the origin's own zero.
    println!("index     zero z_n                    pole p_n");
    for n in -3..=3 {
        println!("{n:>5}     {:<27}   {}", format!("{}", zero(n)), pole(n));
    }
    println!();

    // Each region R_n is a strip in Re(z^2) crossed with a half plane;
    // the closed strip edge is the one carrying the pole chain.
    for n in [-2, -1, 0, 1, 2] {
        let r = region(n);
        let side = if r.closed_at_lower() { "lower" } else { "upper" };
        println!(
            "R_{n}: Re(z^2)/pi in {:?}, {:?} half plane, closed at the {side} edge",
            r.strip, r.half_plane
        );
    }
    println!();

    // region_of inverts the construction: it recovers the index from the
    // point. Each pole sits on the closed edge of its own region, so it
    // codes to its own index. Zeros sit inside neighboring regions (the
    // origin's zero is in no region at all: it lies in the central set
    // that the coding excludes).
    for n in -2..=2 {
        assert_eq!(region_of(pole(n)), Some(n), "pole {n} codes to its region");
    }
    println!("poles with |n| <= 2 code to their own region index");
    for n in -2..=2 {
        println!("  zero({n}) = {} lies in region {:?}", zero(n), region_of(zero(n)));
    }

    // Generic points: sample a small grid and show the coding. Points in
    // the left half plane (and the imaginary axis) carry no code; the
    // map is even, so they are represented by their negatives.
    println!();
    println!("region indices over re in [0.3, 2.8], im in [-1.0, 1.0]:");
    for row in 0..5 {
        let im = 1.0 - 0.5 * row as f64;
        let mut line = String::new();
        for col in 0..6 {
            let re = 0.3 + 0.5 * col as f64;
            let label = match region_of(Complex64::new(re, im)) {
                Some(n) => format!("{n:>4}"),
                None => String::from("   ."),
            };
            line.push_str(&label);
        }
        println!("  im={im:>4}: {line}");
    }
    println!();
    println!("(. marks points outside the coded half plane)");
}
