//! Seeded, fast invariant suites runnable from the command line.
//!
//! Each check compresses one of the library's testable contracts into a
//! sub-second randomized pass with a fixed seed, so a binary built on a
//! new machine can vouch for its own numerics without the dev test
//! harness.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::inverse::{composed_inverse, inverse_branch, BranchError, ItineraryKey};
use crate::map::{derivative, eval, eval_detailed, EvalOutcome, ExtComplex, Parameter};
use crate::render::{ppm_bytes, Palette};
use crate::scan::{scan_dynamical, ClassifiedGrid, GridSpec};
use crate::symbolic::{cantor_diagnostics, distance_kappa, itinerary_of, shift, Itinerary};

/// Outcome of one invariant suite.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// What was measured, or what failed first.
    pub detail: String,
}

const SELFTEST_SEED: u64 = 0x5e1f_7e57;

fn random_parameter(rng: &mut ChaCha8Rng) -> Parameter {
    loop {
        let lam = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if lam.norm() > 0.05 {
            return Parameter::new(lam).unwrap();
        }
    }
}

fn symmetry_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SELFTEST_SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let p = random_parameter(&mut rng);
        let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let (a, b, d) = match (eval(p, z), eval(p, -z), eval(p, z.conj())) {
            (ExtComplex::Finite(a), ExtComplex::Finite(b), ExtComplex::Finite(d)) => (a, b, d),
            _ => continue,
        };
        let pc = Parameter::new(p.lambda().conj()).unwrap();
        let pn = Parameter::new(-p.lambda()).unwrap();
        worst = worst.max((a - b).norm());
        if let ExtComplex::Finite(cc) = eval(pc, z.conj()) {
            worst = worst.max((cc - d.conj()).norm().min((cc - a.conj()).norm()));
        }
        if let ExtComplex::Finite(nn) = eval(pn, z) {
            worst = worst.max((nn + a).norm());
        }
    }
    Check {
        name: "map symmetries (even, conjugation, negation)",
        passed: worst < 1e-9,
        detail: format!("worst deviation {worst:.3e} over 200 samples"),
    }
}

fn derivative_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SELFTEST_SEED + 1);
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    while checked < 100 {
        let p = random_parameter(&mut rng);
        let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let Ok(d) = derivative(p, z) else { continue };
        if d.norm() < 1e-3 {
            continue; // finite differences lose all digits near critical points
        }
        let h = 1e-6;
        let f = |w: Complex64| match eval(p, w) {
            ExtComplex::Finite(v) => Some(v),
            ExtComplex::Infinity => None,
        };
        let (Some(fp), Some(fm)) = (f(z + Complex64::new(h, 0.0)), f(z - Complex64::new(h, 0.0)))
        else {
            continue;
        };
        let fd = (fp - fm) / Complex64::new(2.0 * h, 0.0);
        worst = worst.max((fd - d).norm() / d.norm());
        checked += 1;
    }
    Check {
        name: "derivative matches finite differences",
        passed: worst < 1e-5,
        detail: format!("worst relative error {worst:.3e} over {checked} points"),
    }
}

fn inverse_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SELFTEST_SEED + 2);
    let p = Parameter::new(Complex64::new(0.85, 0.0)).unwrap();
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    while checked < 200 {
        let n = rng.gen_range(-4..=4);
        let z = Complex64::new(rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0));
        let w = match inverse_branch(p, n, ExtComplex::Finite(z)) {
            Ok(w) => w,
            Err(BranchError::AsymptoticValueExcluded { .. }) => continue,
            Err(e) => {
                return Check {
                    name: "inverse branches round-trip",
                    passed: false,
                    detail: format!("branch {n} failed at {z}: {e}"),
                }
            }
        };
        let ExtComplex::Finite(back) = eval(p, w) else {
            return Check {
                name: "inverse branches round-trip",
                passed: false,
                detail: format!("round trip through branch {n} left the plane at {w}"),
            };
        };
        worst = worst.max((back - z).norm() / (1.0 + z.norm()));
        checked += 1;
    }
    Check {
        name: "inverse branches round-trip",
        passed: worst < 1e-9,
        detail: format!("worst relative error {worst:.3e} over {checked} branches"),
    }
}

fn pre_pole_suite() -> Check {
    let p = Parameter::new(Complex64::new(0.85, 0.0)).unwrap();
    let mut checked = 0;
    for depth in 1..=3usize {
        let mut word = vec![-1i32; depth];
        loop {
            let key = ItineraryKey::new(word.clone()).unwrap();
            if let Ok(z) = composed_inverse(p, &key, ExtComplex::Infinity) {
                let mut cur = z;
                for step in 1..=depth {
                    match eval_detailed(p, cur) {
                        EvalOutcome::Finite(next) => {
                            if step == depth {
                                return Check {
                                    name: "pre-poles reach infinity on schedule",
                                    passed: false,
                                    detail: format!(
                                        "depth {depth} word {word:?} still finite at step {step}"
                                    ),
                                };
                            }
                            cur = next;
                        }
                        EvalOutcome::Pole | EvalOutcome::Overflow => {
                            if step != depth {
                                return Check {
                                    name: "pre-poles reach infinity on schedule",
                                    passed: false,
                                    detail: format!(
                                        "depth {depth} word {word:?} hit infinity early at {step}"
                                    ),
                                };
                            }
                            break;
                        }
                    }
                }
                checked += 1;
            }
            // Odometer over indices -1..=1.
            let mut pos = 0;
            while pos < depth {
                word[pos] += 1;
                if word[pos] <= 1 {
                    break;
                }
                word[pos] = -1;
                pos += 1;
            }
            if pos == depth {
                break;
            }
        }
    }
    Check {
        name: "pre-poles reach infinity on schedule",
        passed: checked > 30,
        detail: format!("{checked} pre-poles verified to depth 3"),
    }
}

fn metric_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SELFTEST_SEED + 3);
    let p = Parameter::new(Complex64::new(0.85, 0.0)).unwrap();
    // Deep-codable points are cylinder centers: compose inverse branches
    // over a random region word, then read the itinerary back off.
    let mut words: Vec<Itinerary> = Vec::new();
    let mut tries = 0;
    while words.len() < 30 && tries < 500 {
        tries += 1;
        let regions: Vec<i32> = (0..8).map(|_| rng.gen_range(-2..=2)).collect();
        let key = ItineraryKey::new(regions.iter().rev().copied().collect()).unwrap();
        let Ok(z) = composed_inverse(p, &key, ExtComplex::Finite(Complex64::new(1.5, 0.3))) else {
            continue;
        };
        if let Ok(t) = itinerary_of(p, z, 8) {
            words.push(t);
        }
    }
    if words.len() < 10 {
        return Check {
            name: "symbol metric is an ultrametric",
            passed: false,
            detail: format!("only {} codable samples found", words.len()),
        };
    }
    let mut checked = 0;
    for _ in 0..500 {
        let a = &words[rng.gen_range(0..words.len())];
        let b = &words[rng.gen_range(0..words.len())];
        let d = &words[rng.gen_range(0..words.len())];
        let (dab, dbd, dad) = (
            distance_kappa(a, b, 2.0).unwrap(),
            distance_kappa(b, d, 2.0).unwrap(),
            distance_kappa(a, d, 2.0).unwrap(),
        );
        let ultra = dad <= dab.max(dbd) + 1e-15;
        let symmetric = (dab - distance_kappa(b, a, 2.0).unwrap()).abs() == 0.0;
        let zero_iff_equal = (dab == 0.0) == (a == b);
        if !(ultra && symmetric && zero_iff_equal) {
            return Check {
                name: "symbol metric is an ultrametric",
                passed: false,
                detail: format!("violation: d(a,b)={dab} d(b,d)={dbd} d(a,d)={dad}"),
            };
        }
        checked += 1;
    }
    Check {
        name: "symbol metric is an ultrametric",
        passed: true,
        detail: format!("{checked} triples over {} itineraries", words.len()),
    }
}

fn conjugacy_suite() -> Check {
    let p = Parameter::new(Complex64::new(0.85, 0.0)).unwrap();
    let report = cantor_diagnostics(p, 6, 6);
    let shift_ok = report.conjugacy.checked == report.conjugacy.passed;
    // Spot-check the functional equation directly on a deep-codable
    // point (a cylinder center; generic points fall into the basin and
    // lose their symbols).
    let key = ItineraryKey::new(vec![1, -2, 2, 0, -1, 2, 1]).unwrap();
    let Ok(z) = composed_inverse(p, &key, ExtComplex::Finite(Complex64::new(1.5, 0.3))) else {
        return Check {
            name: "coding conjugates the map to the shift",
            passed: false,
            detail: "could not build the spot-check point".to_string(),
        };
    };
    let direct = match (eval(p, z), itinerary_of(p, z, 7)) {
        (ExtComplex::Finite(fz), Ok(t)) => match (shift(&t), itinerary_of(p, fz, 6)) {
            (Ok(shifted), Ok(t_next)) => shifted == t_next,
            _ => false,
        },
        _ => false,
    };
    Check {
        name: "coding conjugates the map to the shift",
        passed: shift_ok && direct && report.all_words_strictly_decreasing,
        detail: format!(
            "{}/{} pre-poles, contraction {}",
            report.conjugacy.passed, report.conjugacy.checked, report.all_words_strictly_decreasing
        ),
    }
}

fn raster_suite() -> Check {
    let p = Parameter::new(Complex64::new(0.85, 0.0)).unwrap();
    let spec = match GridSpec::from_window(-2.0, -2.0, 2.0, 2.0, 16) {
        Ok(s) => s,
        Err(e) => {
            return Check {
                name: "raster determinism and formats",
                passed: false,
                detail: format!("grid construction failed: {e}"),
            }
        }
    };
    let grid = scan_dynamical(p, spec, 120);
    let json_ok = matches!(ClassifiedGrid::from_json(&grid.to_json()), Ok(g) if g == grid);
    let header = b"P6\n16 16\n255\n";
    let ppm = ppm_bytes(&grid, &Palette::default());
    let ppm_ok = ppm
        .map(|b| b.len() == header.len() + 16 * 16 * 3 && b.starts_with(header))
        .unwrap_or(false);
    let rerun = scan_dynamical(p, spec, 120) == grid;
    Check {
        name: "raster determinism and formats",
        passed: json_ok && ppm_ok && rerun,
        detail: format!("json round-trip {json_ok}, ppm bytes {ppm_ok}, rerun identical {rerun}"),
    }
}

/// Run every suite; the binary maps any failure to a nonzero exit.
pub fn run_selftest() -> Vec<Check> {
    vec![
        symmetry_suite(),
        derivative_suite(),
        inverse_suite(),
        pre_pole_suite(),
        metric_suite(),
        conjugacy_suite(),
        raster_suite(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for check in run_selftest() {
            assert!(check.passed, "{}: {}", check.name, check.detail);
        }
    }

    #[test]
    fn suite_results_serialize() {
        let json = serde_json::to_string(&run_selftest()).unwrap();
        assert!(json.contains("passed"));
    }
}
