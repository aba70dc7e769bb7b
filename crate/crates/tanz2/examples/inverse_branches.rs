//! Backward iteration: every region index names one inverse branch of
//! f(z) = lambda * tan(z^2). Branches round-trip through the map, send
//! infinity to the region's pole, and compose into backward orbits that
//! land on exact pre-poles.
//!
//! Run with: cargo run --example inverse_branches

use num_complex::Complex64;
use tanz2::inverse::{composed_inverse, composed_inverse_path, inverse_branch, ItineraryKey};
use tanz2::lattice::{pole, region_of};
use tanz2::map::{eval, iterate, ExtComplex, OrbitFate, Parameter};

fn main() {
    let p = Parameter::new(Complex64::new(0.85, 0.0)).expect("nonzero lambda");
    let target = Complex64::new(0.4, 0.2);

    // One preimage per region index; each lands in its own region and
    // maps back onto the target.
    println!("preimages of {target}:");
    for n in -2..=2 {
        let w = inverse_branch(p, n, ExtComplex::Finite(target)).expect("branch exists");
        let back = eval(p, w).as_finite().expect("preimages are regular points");
        println!(
            "  branch {n:>2}: w = {w:>24}   region {:?}   |f(w) - target| = {:.2e}",
            region_of(w),
            (back - target).norm()
        );
    }
    println!();

    // The branch over infinity is the region's pole.
    let w = inverse_branch(p, 1, ExtComplex::Infinity).expect("pole branch");
    println!("branch 1 over infinity: {w} = pole(1) = {}", pole(1));
    println!();

    // Composed inverses: branches are applied left to right, so stage i
    // of the backward orbit lands in the region named by index i, and
    // the forward orbit of the deepest point reads the key backwards.
    let key = ItineraryKey::new(vec![1, -2, 0, 2, -1]).expect("nonempty key");
    let path = composed_inverse_path(p, &key, ExtComplex::Finite(target)).expect("stages succeed");
    println!("backward orbit through key {:?}:", key.indices());
    for (stage, w) in path.iter().enumerate() {
        println!("  stage {stage}: {w}   (region {:?})", region_of(*w));
    }
    let deepest = *path.last().expect("nonempty path");
    let forward = iterate(p, deepest, key.depth(), 1e-12);
    let recovered = forward.points[key.depth()]
        .as_finite()
        .expect("forward orbit stays finite");
    println!(
        "forward iteration recovers the target: |f^{}(w) - target| = {:.2e}",
        key.depth(),
        (recovered - target).norm()
    );
    println!();

    // Pulling back infinity yields a pre-pole: a point whose forward
    // orbit reaches infinity after exactly depth steps.
    let key = ItineraryKey::new(vec![0, 1, -1]).expect("nonempty key");
    let prepole = composed_inverse(p, &key, ExtComplex::Infinity).expect("stages succeed");
    let orbit = iterate(p, prepole, 10, 1e-12);
    println!("pre-pole from key {:?}: {prepole}", key.indices());
    match orbit.fate {
        OrbitFate::HitPole(step) => println!("forward orbit hits infinity at step {step} (depth {})", key.depth()),
        other => println!("unexpected fate {other:?}"),
    }
}
