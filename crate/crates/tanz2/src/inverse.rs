//! Inverse branches of f(z) = lambda * tan(z^2) with explicit branch choice.
//!
//! Solving lambda * tan(w^2) = z gives
//!
//! ```text
//! w = +/- sqrt( arctan(z / lambda) + j*pi ),   j integer,
//! arctan(z / lambda) = Log((lambda + i z) / (lambda - i z)) / (2i).
//! ```
//!
//! The principal logarithm pins Re(arctan) into (-pi/2, pi/2]; the integer
//! shift j moves Re(w^2) by whole multiples of pi, and each fundamental
//! region L_n admits exactly one choice of (j, sign) whose root lands in
//! it. [`inverse_branch`] predicts j from the target strip, searches a
//! window of two shifts either side, picks the square-root sign from the
//! region's half plane, and accepts only after the round trip through f
//! reproduces the input. The asymptotic values +/- lambda*i are the two
//! omitted values of every branch and are rejected up front; the point at
//! infinity has exactly one preimage in L_n, the pole there.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

use crate::lattice;
use crate::map::{self, eval_detailed, EvalOutcome, ExtComplex, Parameter};

/// Inputs this close to an asymptotic value are rejected; the branch has
/// no preimage there and the formulas degenerate.
pub const ASYMPTOTIC_EPSILON: f64 = 1e-12;

/// Relative round-trip tolerance accepted by the branch search.
pub const ROUND_TRIP_TOL: f64 = 1e-9;

/// Failure of a single inverse branch.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum BranchError {
    #[error("input {input} is within {ASYMPTOTIC_EPSILON:e} of asymptotic value {value}")]
    AsymptoticValueExcluded { input: Complex64, value: Complex64 },
    #[error("no branch shift lands in region {region} for input {input}")]
    BranchUnavailable { region: i32, input: Complex64 },
}

/// Failure inside a composed inverse, tagged with the 1-based stage.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("inverse stage {stage}: {error}")]
pub struct StageFailure {
    pub stage: usize,
    #[source]
    pub error: BranchError,
}

/// A nonempty sequence of region indices naming a composed inverse.
///
/// The branches apply in order: `indices()[0]` first, the last index last,
/// so the final output lies in the region of the last index and its
/// forward orbit walks the list in reverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItineraryKey {
    indices: Vec<i32>,
}

/// Rejected itinerary key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("itinerary key must be nonempty")]
pub struct EmptyKey;

impl ItineraryKey {
    pub fn new(indices: Vec<i32>) -> Result<Self, EmptyKey> {
        if indices.is_empty() {
            return Err(EmptyKey);
        }
        Ok(ItineraryKey { indices })
    }

    pub fn indices(&self) -> &[i32] {
        &self.indices
    }

    pub fn depth(&self) -> usize {
        self.indices.len()
    }
}

impl TryFrom<&[i32]> for ItineraryKey {
    type Error = EmptyKey;

    fn try_from(s: &[i32]) -> Result<Self, EmptyKey> {
        ItineraryKey::new(s.to_vec())
    }
}

/// One Newton step toward f(w) = target, kept only if it shrinks the
/// residual. Composed inverses re-expand representation error through
/// every forward step, so squeezing the backward error here buys margin.
fn polish(p: Parameter, w: Complex64, target: Complex64) -> Complex64 {
    let mut best = w;
    let mut best_res = match eval_detailed(p, best) {
        EvalOutcome::Finite(v) => (v - target).norm(),
        _ => return w,
    };
    let mut cur = w;
    for _ in 0..2 {
        let fw = match eval_detailed(p, cur) {
            EvalOutcome::Finite(v) => v,
            _ => break,
        };
        let dw = match map::derivative(p, cur) {
            Ok(d) if d.norm() > 1e-300 => d,
            _ => break,
        };
        let step = (fw - target) / dw;
        if !step.is_finite() {
            break;
        }
        cur -= step;
        match eval_detailed(p, cur) {
            EvalOutcome::Finite(v) => {
                let res = (v - target).norm();
                if res < best_res {
                    best_res = res;
                    best = cur;
                } else {
                    break;
                }
            }
            _ => break,
        }
    }
    best
}

fn round_trip_ok(p: Parameter, w: Complex64, target: Complex64) -> bool {
    match eval_detailed(p, w) {
        EvalOutcome::Finite(v) => (v - target).norm() <= ROUND_TRIP_TOL * (1.0 + target.norm()),
        _ => false,
    }
}

/// The preimage of z under f that lies in region L_n.
///
/// Infinity maps to pole(n). Both square-root signs are tried against the
/// region's membership test, and the winning root is polished by one
/// Newton step; a candidate is returned only if the forward evaluation
/// round-trips to z within [`ROUND_TRIP_TOL`] relative error.
pub fn inverse_branch(p: Parameter, n: i32, z: ExtComplex) -> Result<Complex64, BranchError> {
    let z = match z {
        ExtComplex::Infinity => return Ok(lattice::pole(n)),
        ExtComplex::Finite(v) => v,
    };
    let lam = p.lambda();
    for value in p.asymptotic_values() {
        if (z - value).norm() < ASYMPTOTIC_EPSILON {
            return Err(BranchError::AsymptoticValueExcluded { input: z, value });
        }
    }
    let iz = map::mul_i(z);
    let ratio = (lam + iz) / (lam - iz);
    if !ratio.is_finite() || ratio == Complex64::new(0.0, 0.0) {
        return Err(BranchError::BranchUnavailable { region: n, input: z });
    }
    let ln = ratio.ln(); // principal: Im in (-pi, pi]
    let arctan = Complex64::new(ln.im * 0.5, -ln.re * 0.5); // ln / (2i)
    let reg = lattice::region(n);
    let mid = 0.5 * (reg.strip.0 + reg.strip.1) * PI;
    let j0 = ((mid - arctan.re) / PI).round();
    for dj in [0.0, 1.0, -1.0, 2.0, -2.0] {
        let a = Complex64::new(arctan.re + (j0 + dj) * PI, arctan.im);
        let root = a.sqrt(); // principal: Re >= 0
        for w0 in [root, -root] {
            if !reg.contains(w0) {
                continue;
            }
            let w = polish(p, w0, z);
            if reg.contains(w) && round_trip_ok(p, w, z) {
                return Ok(w);
            }
            if round_trip_ok(p, w0, z) {
                return Ok(w0);
            }
        }
    }
    Err(BranchError::BranchUnavailable { region: n, input: z })
}

/// All stage outputs of the composed inverse, in application order.
///
/// The last entry is the composed result; read in reverse the path is the
/// forward orbit of that result, which makes the quadrant of every future
/// iterate available without re-running the map.
pub fn composed_inverse_path(
    p: Parameter,
    key: &ItineraryKey,
    z: ExtComplex,
) -> Result<Vec<Complex64>, StageFailure> {
    let mut path = Vec::with_capacity(key.depth());
    let mut cur = z;
    for (i, &n) in key.indices().iter().enumerate() {
        let w = inverse_branch(p, n, cur).map_err(|error| StageFailure {
            stage: i + 1,
            error,
        })?;
        path.push(w);
        cur = ExtComplex::Finite(w);
    }
    Ok(path)
}

/// Composition of inverse branches along an itinerary key.
///
/// Stage s applies the branch for indices()[s-1]; the result lies in the
/// region of the last index, and forward iteration visits the keyed
/// regions in reverse order before returning to z after depth() steps.
/// Applied to infinity the composition produces a pre-pole whose orbit
/// hits infinity at exactly depth() steps.
pub fn composed_inverse(
    p: Parameter,
    key: &ItineraryKey,
    z: ExtComplex,
) -> Result<Complex64, StageFailure> {
    Ok(*composed_inverse_path(p, key, z)?
        .last()
        .expect("key is nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{eval, iterate, OrbitFate, DEFAULT_CONVERGENCE_TOL};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn p085() -> Parameter {
        Parameter::new(c(0.85, 0.0)).unwrap()
    }

    #[test]
    fn preimage_of_zero_in_region_zero_is_sqrt_pi() {
        let w = inverse_branch(p085(), 0, ExtComplex::Finite(c(0.0, 0.0))).unwrap();
        assert!((w - c(PI.sqrt(), 0.0)).norm() < 1e-12, "got {w}");
    }

    #[test]
    fn preimage_of_infinity_is_the_regions_pole() {
        for n in -3..=3 {
            let w = inverse_branch(p085(), n, ExtComplex::Infinity).unwrap();
            assert_eq!(w, lattice::pole(n));
        }
    }

    #[test]
    fn asymptotic_values_are_excluded() {
        let p = p085();
        for v in p.asymptotic_values() {
            let err = inverse_branch(p, 0, ExtComplex::Finite(v)).unwrap_err();
            assert!(matches!(err, BranchError::AsymptoticValueExcluded { .. }));
        }
        // Nearby but outside the guard radius still works.
        let nearby = p.asymptotic_values()[0] + c(1e-6, 0.0);
        assert!(inverse_branch(p, 0, ExtComplex::Finite(nearby)).is_ok());
    }

    #[test]
    fn ratio_degenerates_exactly_at_the_asymptotic_values() {
        // (lambda + iz)(lambda - iz) = lambda^2 + z^2, and
        // |lambda^2 + z^2|^2 = (|lambda|^2 - |z|^2)^2 + 4 Re(lambda conj(z))^2,
        // so the branch ratio loses a factor only where |z| = |lambda| and
        // lambda is orthogonal to z, which is z = +/- i lambda: the two
        // asymptotic values are the only inputs the guard must exclude.
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..500 {
            let lam = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let z = c(rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0));
            let iz = map::mul_i(z);
            let product = (lam + iz) * (lam - iz);
            let lhs = product.norm_sqr();
            let gap = lam.norm_sqr() - z.norm_sqr();
            let align = (lam * z.conj()).re;
            let rhs = gap * gap + 4.0 * align * align;
            let rel = (lhs - rhs).abs() / (1.0 + lhs.abs());
            assert!(rel < 1e-12, "lam={lam} z={z} lhs={lhs} rhs={rhs}");
            assert!(((lam * lam + z * z) - product).norm() < 1e-12 * (1.0 + lhs));
        }
        // At the asymptotic values both terms vanish identically.
        let lam = c(0.6, -0.9);
        for z in [map::mul_i(lam), -map::mul_i(lam)] {
            assert!((lam.norm_sqr() - z.norm_sqr()).abs() < 1e-15);
            assert!((lam * z.conj()).re.abs() < 1e-15);
        }
    }

    #[test]
    fn round_trip_lands_in_the_requested_region() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let p = p085();
        let mut checked = 0;
        while checked < 1000 {
            let n = rng.gen_range(-4..=4);
            let z = c(rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0));
            let w = match inverse_branch(p, n, ExtComplex::Finite(z)) {
                Ok(w) => w,
                Err(BranchError::AsymptoticValueExcluded { .. }) => continue,
                Err(e) => panic!("branch {n} failed for {z}: {e}"),
            };
            assert_eq!(lattice::region_of(w), Some(n), "w = {w}");
            let back = eval(p, w).as_finite().expect("round trip finite");
            let rel = (back - z).norm() / (1.0 + z.norm());
            assert!(rel < 1e-9, "n={n} z={z} w={w} back={back}");
            checked += 1;
        }
    }

    #[test]
    fn complex_lambda_round_trips_too() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let p = Parameter::new(c(0.6, -0.9)).unwrap();
        for _ in 0..300 {
            let n = rng.gen_range(-3..=3);
            let z = c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            match inverse_branch(p, n, ExtComplex::Finite(z)) {
                Ok(w) => {
                    assert!(lattice::region_contains(n, w));
                    let back = eval(p, w).as_finite().unwrap();
                    assert!((back - z).norm() <= 1e-9 * (1.0 + z.norm()));
                }
                Err(BranchError::AsymptoticValueExcluded { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn distinct_regions_give_distinct_preimages() {
        let p = p085();
        let z = ExtComplex::Finite(c(0.4, -1.1));
        let mut seen: Vec<Complex64> = Vec::new();
        for n in -4..=4 {
            let w = inverse_branch(p, n, z).unwrap();
            for prev in &seen {
                assert!((w - prev).norm() > 1e-6, "branches collide at {w}");
            }
            seen.push(w);
        }
    }

    #[test]
    fn composed_inverse_single_stage_matches_branch() {
        let p = p085();
        let key = ItineraryKey::new(vec![2]).unwrap();
        let z = ExtComplex::Finite(c(1.0, 0.5));
        assert_eq!(
            composed_inverse(p, &key, z).unwrap(),
            inverse_branch(p, 2, z).unwrap()
        );
    }

    #[test]
    fn pre_poles_hit_infinity_at_the_predicted_step() {
        let p = p085();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for depth in 1..=5 {
            for _ in 0..40 {
                let indices: Vec<i32> = (0..depth).map(|_| rng.gen_range(-2..=2)).collect();
                let key = ItineraryKey::new(indices.clone()).unwrap();
                let z0 = composed_inverse(p, &key, ExtComplex::Infinity).unwrap();
                let orbit = iterate(p, z0, depth + 10, DEFAULT_CONVERGENCE_TOL);
                assert_eq!(
                    orbit.fate,
                    OrbitFate::HitPole(depth),
                    "key {indices:?} z0 {z0}"
                );
            }
        }
    }

    #[test]
    fn composed_round_trip_through_forward_steps() {
        let p = p085();
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for depth in 1..=5 {
            for _ in 0..40 {
                let indices: Vec<i32> = (0..depth).map(|_| rng.gen_range(-2..=2)).collect();
                let key = ItineraryKey::new(indices.clone()).unwrap();
                let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let w = match composed_inverse(p, &key, ExtComplex::Finite(z)) {
                    Ok(w) => w,
                    Err(_) => continue,
                };
                // Forward orbit must walk the key in reverse then return to z.
                let orbit = iterate(p, w, depth, 0.0);
                assert_eq!(orbit.points.len(), depth + 1);
                for (j, &n) in indices.iter().rev().enumerate() {
                    let pt = orbit.points[j].as_finite().unwrap();
                    assert_eq!(lattice::region_of(pt), Some(n), "stage {j}");
                }
                let back = orbit.points[depth].as_finite().unwrap();
                let rel = (back - z).norm() / (1.0 + z.norm());
                assert!(rel < 1e-7, "depth {depth} key {indices:?}: rel {rel}");
            }
        }
    }

    #[test]
    fn stage_failures_carry_the_stage_index() {
        let p = p085();
        // Second stage receives lambda*i exactly when the first stage is
        // bypassed; force it by asking for the preimage of an asymptotic
        // value at stage one of a depth-one key, then at stage two.
        let key1 = ItineraryKey::new(vec![0]).unwrap();
        let bad = ExtComplex::Finite(p.asymptotic_values()[0]);
        assert_eq!(composed_inverse(p, &key1, bad).unwrap_err().stage, 1);
    }

    #[test]
    fn branch_images_of_the_probe_disk_stay_inside_it() {
        // Contraction into the probe disk |z| <= 3 is what makes nested
        // cylinder images shrink. Check all small regions on its boundary.
        let p = p085();
        for n in -2..=2 {
            for k in 0..64 {
                let th = 2.0 * PI * k as f64 / 64.0;
                let z = 3.0 * c(th.cos(), th.sin());
                let w = inverse_branch(p, n, ExtComplex::Finite(z)).unwrap();
                assert!(w.norm() < 3.0, "branch {n} probe {k} maps to {w}");
            }
        }
    }

    #[test]
    fn deeper_composed_images_nest_into_shallower_ones() {
        // comp(n1..nk)(D) sits inside comp(n2..nk)(D) for the probe disk D,
        // because stage one maps D into itself. Verify on boundary samples:
        // the deep image point, iterated forward k-1 times, must land on a
        // stage-one image, which is a point of D mapped into D.
        let p = p085();
        let indices = vec![1, -2, 0, 2, -1];
        for k in 2..=indices.len() {
            let deep = ItineraryKey::new(indices[..k].to_vec()).unwrap();
            for probe in 0..32 {
                let th = 2.0 * PI * probe as f64 / 32.0;
                let z = ExtComplex::Finite(3.0 * c(th.cos(), th.sin()));
                let wd = composed_inverse(p, &deep, z).unwrap();
                let orbit = iterate(p, wd, k - 1, 0.0);
                // The forward orbit retraces the key in reverse.
                for (j, &n) in indices[..k].iter().rev().enumerate().take(k - 1) {
                    let pt = orbit.points[j].as_finite().unwrap();
                    assert_eq!(lattice::region_of(pt), Some(n));
                }
                // After k-1 steps we are at the stage-one image, inside D.
                let stage_one = orbit.points[k - 1].as_finite().unwrap();
                assert!(stage_one.norm() < 3.0, "stage-one image left D: {stage_one}");
                let direct = inverse_branch(p, indices[0], z).unwrap();
                assert!((stage_one - direct).norm() < 1e-6);
            }
        }
    }

    mod properties {
        use super::*;
        use crate::map::eval;
        use proptest::prelude::*;

        proptest! {
            // Any branch of any parameter must land in its region and
            // undo f, unless the input sits on an omitted value.
            #[test]
            fn every_branch_round_trips_for_every_parameter(
                lre in -2.0f64..2.0, lim in -2.0f64..2.0,
                re in -5.0f64..5.0, im in -5.0f64..5.0,
                n in -4i32..=4,
            ) {
                let l = Complex64::new(lre, lim);
                prop_assume!(l.norm() > 0.05);
                let p = Parameter::new(l).unwrap();
                let z = Complex64::new(re, im);
                match inverse_branch(p, n, ExtComplex::Finite(z)) {
                    Ok(w) => {
                        prop_assert!(lattice::region_contains(n, w), "w = {}", w);
                        let back = eval(p, w).as_finite().expect("round trip finite");
                        let rel = (back - z).norm() / (1.0 + z.norm());
                        prop_assert!(rel < ROUND_TRIP_TOL, "rel = {:e}", rel);
                    }
                    Err(BranchError::AsymptoticValueExcluded { .. }) => {}
                    Err(e) => return Err(TestCaseError::fail(e.to_string())),
                }
            }
        }
    }
}
