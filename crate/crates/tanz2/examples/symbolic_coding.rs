//! Symbolic dynamics on the Julia set: code points by the regions and
//! quadrants their orbits visit, decode words back to points, and watch
//! the map act as the shift. In the Cantor regime the coding is a
//! homeomorphism and the shift metric d_kappa measures word agreement.
//!
//! Run with: cargo run --example symbolic_coding

use num_complex::Complex64;
use tanz2::inverse::{composed_inverse, ItineraryKey};
use tanz2::map::{eval, ExtComplex, Parameter};
use tanz2::symbolic::{distance_kappa, itinerary_of, point_from_itinerary, shift};

fn main() {
    let p = Parameter::new(Complex64::new(0.85, 0.0)).expect("nonzero lambda");
    let depth = 8;

    // Points that stay codable for many steps live deep in the Julia
    // set. Cylinder centers are such points: pull a base point back
    // through a chosen region word (the key is the word reversed, since
    // backward stages run outward).
    let word = [1, -2, 2, 0, -1, 2, 1, -1];
    let key = ItineraryKey::new(word.iter().rev().copied().collect()).expect("nonempty");
    let z = composed_inverse(p, &key, ExtComplex::Finite(Complex64::new(1.5, 0.3)))
        .expect("branches exist");
    println!("cylinder center for word {word:?}:");
    println!("  z = {z}");

    let t = itinerary_of(p, z, depth).expect("codable to depth");
    println!("  itinerary regions: {:?}", t.region_indices());
    assert_eq!(t.region_indices(), word);

    // Conjugacy: coding the image equals shifting the code.
    let fz = eval(p, z).as_finite().expect("regular point");
    let t_shifted = shift(&t).expect("nonterminal word shifts");
    let t_image = itinerary_of(p, fz, depth - 1).expect("image stays codable");
    println!("  shift of code  : {:?}", t_shifted.region_indices());
    println!("  code of image  : {:?}", t_image.region_indices());
    assert_eq!(t_shifted, t_image);
    println!();

    // Decoding inverts the coding: the word pins the point down to the
    // sampled cylinder radius.
    let located = point_from_itinerary(p, &t, depth).expect("decodable");
    let center = located.point.as_finite().expect("finite center");
    println!("decoded point: {center}  (cylinder radius {:.2e})", located.radius);
    println!("distance to original: {:.2e}", (center - z).norm());
    println!();

    // Pre-poles carry terminal words: the orbit visits the listed
    // regions and then dies on the pole of the last one. Terminal words
    // decode back to the exact pre-pole, radius zero.
    let key = ItineraryKey::new(vec![-1, 1]).expect("nonempty");
    let prepole = composed_inverse(p, &key, ExtComplex::Infinity).expect("branches exist");
    let terminal = itinerary_of(p, prepole, depth).expect("pre-poles are codable");
    assert!(terminal.is_terminated());
    let located = point_from_itinerary(p, &terminal, depth).expect("decodable");
    println!(
        "pre-pole {} carries the terminal word {:?}",
        prepole,
        terminal.region_indices()
    );
    println!(
        "  decodes back to {} with radius exactly {}",
        located.point.as_finite().expect("pre-poles are finite"),
        located.radius
    );
    println!();

    // The metric d_kappa: distance kappa^-m for words agreeing on m
    // leading symbols. It is an ultrametric; balls are cylinders.
    let s = itinerary_of(p, z, depth).expect("codable");
    for kappa in [1.5, 2.0, 4.0] {
        let d_self = distance_kappa(&s, &s, kappa).expect("valid kappa");
        let d_shift = distance_kappa(&s, &t_image, kappa).expect("valid kappa");
        println!("kappa = {kappa}: d(s, s) = {d_self}, d(s, shift s) = {d_shift}");
    }
}
