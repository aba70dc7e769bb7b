//! Cycle detection and parameter classification along the singular orbit.
//!
//! The origin is a superattracting fixed point for every parameter, so
//! the only question a parameter poses is what the orbit of the asymptotic
//! value lambda*i does (its twin -lambda*i lands on the same orbit after
//! one step, and the critical orbit never leaves 0). One attracting cycle
//! away from the origin is the most that can exist, because it would have
//! to absorb that single free singular orbit.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::map::{
    self, eval_detailed, iterate, EvalOutcome, OrbitFate, OrbitRecord, Parameter,
    DEFAULT_CONVERGENCE_TOL,
};

/// Recurrence tolerance used when scanning an orbit tail for a cycle.
pub const CYCLE_TOL: f64 = 1e-9;

/// Largest period the detector will consider.
pub const P_MAX: usize = 64;

/// |multiplier| below this counts as superattracting.
pub const SUPERATTRACTING_TOL: f64 = 1e-8;

/// Band around |multiplier| = 1 reported as neutral.
pub const NEUTRAL_TOL: f64 = 1e-6;

/// Newton refinement must push |f^p(z) - z| under this (relative to scale).
pub const NEWTON_RESIDUAL: f64 = 1e-12;

/// Orbit points inside this radius of 0 for three consecutive steps count
/// as captured by the origin.
pub const ORIGIN_CAPTURE_RADIUS: f64 = 1e-6;

/// Stability class of a cycle by multiplier modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CycleKind {
    SuperAttracting,
    Attracting,
    Neutral,
    Repelling,
}

/// A detected cycle with one representative point on it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CycleInfo {
    pub period: usize,
    pub representative: Complex64,
    pub multiplier: Complex64,
    pub kind: CycleKind,
}

/// Failure while evaluating a multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum MultiplierError {
    #[error("orbit runs through a pole at step {step}")]
    PoleOnCycle { step: usize },
}

fn classify_kind(multiplier: Complex64) -> CycleKind {
    let m = multiplier.norm();
    if m < SUPERATTRACTING_TOL {
        CycleKind::SuperAttracting
    } else if m < 1.0 - NEUTRAL_TOL {
        CycleKind::Attracting
    } else if (m - 1.0).abs() <= NEUTRAL_TOL {
        CycleKind::Neutral
    } else {
        CycleKind::Repelling
    }
}

/// Multiplier of a period-p cycle through z0: the chain-rule product of
/// f' along p steps. Invariant under cyclic permutation of the base point.
pub fn multiplier(p: Parameter, z0: Complex64, period: usize) -> Result<Complex64, MultiplierError> {
    let mut z = z0;
    let mut prod = Complex64::new(1.0, 0.0);
    for step in 0..period {
        let d = map::derivative(p, z).map_err(|_| MultiplierError::PoleOnCycle { step })?;
        prod *= d;
        z = match eval_detailed(p, z) {
            EvalOutcome::Finite(v) => v,
            _ => return Err(MultiplierError::PoleOnCycle { step }),
        };
    }
    Ok(prod)
}

/// f^steps(z) together with the chain-rule derivative of the composite.
fn power_with_derivative(
    p: Parameter,
    z0: Complex64,
    steps: usize,
) -> Option<(Complex64, Complex64)> {
    let mut z = z0;
    let mut prod = Complex64::new(1.0, 0.0);
    for _ in 0..steps {
        let d = map::derivative(p, z).ok()?;
        prod *= d;
        z = match eval_detailed(p, z) {
            EvalOutcome::Finite(v) => v,
            _ => return None,
        };
    }
    Some((z, prod))
}

/// Newton's method on f^p(z) - z from the given start.
fn refine_cycle_point(p: Parameter, start: Complex64, period: usize) -> Option<Complex64> {
    let mut z = start;
    for _ in 0..60 {
        let (fp, dfp) = power_with_derivative(p, z, period)?;
        let residual = fp - z;
        if residual.norm() <= NEWTON_RESIDUAL * (1.0 + z.norm()) {
            return Some(z);
        }
        let denom = dfp - Complex64::new(1.0, 0.0);
        if denom.norm() < 1e-14 {
            return None; // multiplier pinned at 1, Newton is singular
        }
        let step = residual / denom;
        if !step.is_finite() {
            return None;
        }
        z -= step;
        if !z.is_finite() || z.norm() > 1e8 {
            return None;
        }
    }
    None
}

/// Smallest divisor q of period with f^q fixing z within tolerance.
fn minimal_period(p: Parameter, z: Complex64, period: usize) -> usize {
    for q in 1..period {
        if period % q != 0 {
            continue;
        }
        if let Some((fq, _)) = power_with_derivative(p, z, q) {
            if (fq - z).norm() <= 1e-9 * (1.0 + z.norm()) {
                return q;
            }
        }
    }
    period
}

/// Scan the trailing end of an orbit for the smallest recurring period,
/// then refine the candidate with Newton's method and classify its
/// multiplier.
///
/// Returns None when the orbit ended at a pole or overflow, when no period
/// up to [`P_MAX`] recurs within cycle_tol over the trailing witness
/// window, or when Newton refinement cannot hold the residual under
/// [`NEWTON_RESIDUAL`] near the orbit's end.
pub fn detect_cycle(p: Parameter, orbit: &OrbitRecord, cycle_tol: f64) -> Option<CycleInfo> {
    if !matches!(
        orbit.fate,
        OrbitFate::ConvergedToPoint | OrbitFate::BudgetExhausted
    ) {
        return None;
    }
    let pts = orbit.finite_points();
    let len = pts.len();
    if len < 4 {
        return None;
    }
    for period in 1..=P_MAX.min(len.saturating_sub(2)) {
        // Witness the recurrence over the last few returns only; a short
        // transient before fast convergence must not mask the settled tail.
        let witness = period.max(3).min(len - period);
        if witness < 2 {
            continue;
        }
        let start = len - period - witness;
        let recurs = (start..len - period).all(|i| (pts[i + period] - pts[i]).norm() < cycle_tol);
        if !recurs {
            continue;
        }
        let Some(rep) = refine_cycle_point(p, pts[len - 1], period) else {
            continue;
        };
        // Newton must have stayed near the orbit's tail; a far-away root
        // of f^p(z) = z is not what the orbit converged to.
        if (rep - pts[len - 1]).norm() > 0.01 * (1.0 + pts[len - 1].norm()) {
            continue;
        }
        let period = minimal_period(p, rep, period);
        let Ok(mult) = multiplier(p, rep, period) else {
            continue;
        };
        let (back, _) = power_with_derivative(p, rep, period)?;
        if (back - rep).norm() > cycle_tol.max(NEWTON_RESIDUAL * (1.0 + rep.norm())) {
            continue;
        }
        return Some(CycleInfo {
            period,
            representative: rep,
            multiplier: mult,
            kind: classify_kind(mult),
        });
    }
    None
}

/// What the free singular orbit does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// The orbit of lambda*i falls into the origin's basin; no other
    /// attractor can exist.
    OriginOnly,
    /// The orbit settles on an attracting cycle of the given period away
    /// from the origin.
    AttractingCycle(usize),
    /// Budget ran out, or the detected recurrence is neutral or repelling.
    /// Indifferent behavior is deliberately binned here, not classified.
    Undetermined,
    /// The orbit ran into a pole or overflowed.
    SingularEscape,
}

/// Classification of one parameter by its singular orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterClass {
    pub verdict: Verdict,
    pub singular_orbit: OrbitRecord,
    /// Present whenever the verdict is AttractingCycle; may also carry a
    /// neutral or repelling recurrence found under an Undetermined verdict.
    pub cycle: Option<CycleInfo>,
}

/// Follow the orbit of lambda*i and classify the parameter.
///
/// Capture by the origin means |z| < [`ORIGIN_CAPTURE_RADIUS`] on three
/// consecutive orbit points. A detected attracting recurrence away from 0
/// yields AttractingCycle; neutral or repelling recurrences, and budget
/// exhaustion without recurrence, yield Undetermined.
pub fn classify_parameter(p: Parameter, budget: usize) -> ParameterClass {
    let seed = p.asymptotic_values()[0];
    let orbit = iterate(p, seed, budget, DEFAULT_CONVERGENCE_TOL);

    let pts = orbit.finite_points();
    let captured = pts
        .windows(3)
        .any(|w| w.iter().all(|z| z.norm() < ORIGIN_CAPTURE_RADIUS));
    if captured {
        return ParameterClass {
            verdict: Verdict::OriginOnly,
            singular_orbit: orbit,
            cycle: None,
        };
    }

    match orbit.fate {
        OrbitFate::HitPole(_) | OrbitFate::Overflowed(_) => ParameterClass {
            verdict: Verdict::SingularEscape,
            singular_orbit: orbit,
            cycle: None,
        },
        OrbitFate::ConvergedToPoint | OrbitFate::BudgetExhausted => {
            match detect_cycle(p, &orbit, CYCLE_TOL) {
                Some(info) => {
                    let near_origin =
                        info.period == 1 && info.representative.norm() < ORIGIN_CAPTURE_RADIUS;
                    match info.kind {
                        _ if near_origin => ParameterClass {
                            verdict: Verdict::OriginOnly,
                            singular_orbit: orbit,
                            cycle: Some(info),
                        },
                        CycleKind::SuperAttracting | CycleKind::Attracting => ParameterClass {
                            verdict: Verdict::AttractingCycle(info.period),
                            singular_orbit: orbit,
                            cycle: Some(info),
                        },
                        CycleKind::Neutral | CycleKind::Repelling => ParameterClass {
                            verdict: Verdict::Undetermined,
                            singular_orbit: orbit,
                            cycle: Some(info),
                        },
                    }
                }
                None => ParameterClass {
                    verdict: Verdict::Undetermined,
                    singular_orbit: orbit,
                    cycle: None,
                },
            }
        }
    }
}
