//! Forward evaluation and iteration of f(z) = lambda * tan(z^2).
//!
//! The map has one critical point at the origin (a superattracting fixed
//! point, since f(0) = 0 and f'(0) = 0) and two finite asymptotic values
//! at +lambda*i and -lambda*i. Those three points make up the singular set;
//! everything the long-term dynamics can do is visible along their orbits,
//! and because f is even the two asymptotic orbits merge after one step.
//!
//! Symmetry identities satisfied by the k-th iterate, for k >= 1:
//!
//! * evenness: f^k(-z) = f^k(z)
//! * conjugation: iterating with conj(lambda) at conj(z) gives conj(f^k(z))
//! * negation: iterating with -lambda gives -f^k(z)
//! * rotation: iterating with +/-i*lambda gives +/-i*f(z) at k = 1 and
//!   -/+i*f^k(z) for every k >= 2 (the first step carries the opposite
//!   sign from all later ones because squaring kills the rotation)
//!
//! The first three hold bit for bit in this implementation; the rotation
//! identity is exact up to the sign pattern spelled out above and is pinned
//! down by tests.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// |cos(z^2)| below this counts as a direct pole hit and evaluates to
/// infinity. The value leaves headroom for the forward re-iteration of
/// pre-poles assembled from inverse branches: their double precision
/// representation error grows by the orbit's derivative product, which for
/// depth 5 at desk scale reaches a few units in the last place of z^2
/// scaled by 1e7. The comparison is made relative to 1 + |z^2| because
/// one ulp of z^2 (and so the smallest achievable |cos|) grows with
/// |z^2|; an absolute window narrower than an ulp step could never be
/// honored by any representable point near the outer poles.
pub const POLE_EPSILON: f64 = 1e-8;

/// Results with modulus above this are treated as infinity.
pub const OVERFLOW_THRESHOLD: f64 = 1e15;

/// Successive-point convergence tolerance used by [`iterate`] callers.
pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-10;

/// An orbit is declared converged after this many consecutive small steps.
pub const CONVERGENCE_RUN: usize = 3;

/// |Im(z^2)| beyond this and tan(z^2) is +/-i to below double precision.
const TAN_IM_CUTOFF: f64 = 300.0;

/// Multiply by i without rounding: i*(a+bi) = -b+ai.
#[inline]
pub(crate) fn mul_i(z: Complex64) -> Complex64 {
    Complex64::new(-z.im, z.re)
}

/// The parameter lambda. Nonzero by construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Parameter {
    lambda: Complex64,
}

/// Rejected parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("lambda must be nonzero and finite")]
pub struct InvalidParameter;

impl Parameter {
    /// A parameter for f(z) = lambda * tan(z^2). Zero and non-finite
    /// lambda are rejected: lambda = 0 collapses the family to a constant.
    pub fn new(lambda: Complex64) -> Result<Self, InvalidParameter> {
        if lambda == Complex64::new(0.0, 0.0) || !lambda.is_finite() {
            return Err(InvalidParameter);
        }
        Ok(Parameter { lambda })
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// The two finite asymptotic values, +lambda*i and -lambda*i.
    pub fn asymptotic_values(&self) -> [Complex64; 2] {
        let v = mul_i(self.lambda);
        [v, -v]
    }

    /// Image of the only critical point: f(0) = 0.
    pub fn critical_value(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
}

/// A point of the extended plane: finite or the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub fn is_infinity(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match self {
            ExtComplex::Finite(z) => Some(*z),
            ExtComplex::Infinity => None,
        }
    }
}

impl From<Complex64> for ExtComplex {
    fn from(z: Complex64) -> Self {
        ExtComplex::Finite(z)
    }
}

impl std::fmt::Display for ExtComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtComplex::Finite(z) => write!(f, "{}", z),
            ExtComplex::Infinity => write!(f, "inf"),
        }
    }
}

/// Why [`eval_detailed`] stopped producing a finite value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EvalOutcome {
    Finite(Complex64),
    /// z^2 landed within [`POLE_EPSILON`] of a pole of tan.
    Pole,
    /// The image modulus exceeded [`OVERFLOW_THRESHOLD`] or left double range.
    Overflow,
}

/// sin and cos of a complex argument from real sin, cos, sinh, cosh.
///
/// Written out by hand so that conjugation and negation of the argument
/// produce bit-exact conjugation and negation of the result, which the
/// raster symmetry guarantees lean on.
fn sin_cos_complex(w: Complex64) -> (Complex64, Complex64) {
    let (s, c) = w.re.sin_cos();
    let sh = w.im.sinh();
    let ch = w.im.cosh();
    (
        Complex64::new(s * ch, c * sh),
        Complex64::new(c * ch, -s * sh),
    )
}

/// One application of f with the failure reason kept separate.
pub fn eval_detailed(p: Parameter, z: Complex64) -> EvalOutcome {
    let w = z * z;
    if !w.is_finite() {
        return EvalOutcome::Overflow;
    }
    // Far above or below the real axis tan is +/-i to below one ulp; the
    // hyperbolic terms would overflow long before accuracy becomes an issue.
    if w.im > TAN_IM_CUTOFF {
        return EvalOutcome::Finite(mul_i(p.lambda));
    }
    if w.im < -TAN_IM_CUTOFF {
        return EvalOutcome::Finite(-mul_i(p.lambda));
    }
    let (s, c) = sin_cos_complex(w);
    if c.norm() < POLE_EPSILON * (1.0 + w.norm()) {
        return EvalOutcome::Pole;
    }
    let t = s / c;
    let r = p.lambda * t;
    if !r.is_finite() || r.norm() > OVERFLOW_THRESHOLD {
        return EvalOutcome::Overflow;
    }
    EvalOutcome::Finite(r)
}

/// f(z) = lambda * tan(z^2) on the extended plane.
///
/// Evaluates to infinity when |cos(z^2)| falls below [`POLE_EPSILON`]
/// relative to the size of z^2, or when the image overflows. Evenness
/// holds bit for bit: z is only consumed through z*z, and squaring is
/// exactly sign-blind.
///
/// ```
/// use num_complex::Complex64;
/// use tanz2::map::{eval, ExtComplex, Parameter};
///
/// let p = Parameter::new(Complex64::new(0.85, 0.0)).unwrap();
/// assert_eq!(eval(p, Complex64::new(0.0, 0.0)), ExtComplex::Finite(Complex64::new(0.0, 0.0)));
/// ```
pub fn eval(p: Parameter, z: Complex64) -> ExtComplex {
    match eval_detailed(p, z) {
        EvalOutcome::Finite(v) => ExtComplex::Finite(v),
        EvalOutcome::Pole | EvalOutcome::Overflow => ExtComplex::Infinity,
    }
}

/// Attempted derivative at a pole or at non-finite z^2.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DerivativeError {
    #[error("derivative undefined within pole tolerance of {0}")]
    PoleAt(Complex64),
    #[error("z^2 is not finite at {0}")]
    NonFinite(Complex64),
}

/// f'(z) = 2 * lambda * z * sec^2(z^2).
pub fn derivative(p: Parameter, z: Complex64) -> Result<Complex64, DerivativeError> {
    let w = z * z;
    if !w.is_finite() {
        return Err(DerivativeError::NonFinite(z));
    }
    // sec^2 underflows to zero far from the real axis of the w-plane.
    if w.im.abs() > TAN_IM_CUTOFF {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (_, c) = sin_cos_complex(w);
    if c.norm() < POLE_EPSILON * (1.0 + w.norm()) {
        return Err(DerivativeError::PoleAt(z));
    }
    let sec2 = Complex64::new(1.0, 0.0) / (c * c);
    Ok(2.0 * p.lambda * z * sec2)
}

/// How a forward orbit ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitFate {
    /// Step size stayed below the tolerance for [`CONVERGENCE_RUN`] steps.
    ConvergedToPoint,
    /// The orbit evaluated to infinity through a pole at the given step.
    HitPole(usize),
    /// The orbit left double range at the given step.
    Overflowed(usize),
    /// The step budget ran out first.
    BudgetExhausted,
}

/// A forward orbit: every visited point plus how it ended.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitRecord {
    /// `points[0]` is the seed; `points.len() == steps_used + 1`.
    pub points: Vec<ExtComplex>,
    pub fate: OrbitFate,
    pub steps_used: usize,
}

impl OrbitRecord {
    pub fn seed(&self) -> ExtComplex {
        self.points[0]
    }

    pub fn last(&self) -> ExtComplex {
        *self.points.last().expect("orbit holds at least the seed")
    }

    /// The limit point when the orbit converged.
    pub fn limit(&self) -> Option<Complex64> {
        match self.fate {
            OrbitFate::ConvergedToPoint => self.last().as_finite(),
            _ => None,
        }
    }

    /// Finite points in orbit order; stops before any infinity.
    pub fn finite_points(&self) -> Vec<Complex64> {
        self.points
            .iter()
            .map_while(|p| p.as_finite())
            .collect()
    }
}

/// Forward iteration with pole, overflow, convergence, and budget stops.
///
/// Convergence means |z_{n+1} - z_n| < convergence_tol on
/// [`CONVERGENCE_RUN`] consecutive steps; a pole or overflow at step j
/// records the infinity as `points[j]` and stops there.
pub fn iterate(
    p: Parameter,
    z0: Complex64,
    max_steps: usize,
    convergence_tol: f64,
) -> OrbitRecord {
    let mut points = Vec::with_capacity(max_steps.min(4096) + 1);
    points.push(ExtComplex::Finite(z0));
    let mut z = z0;
    let mut small_run = 0usize;
    for step in 1..=max_steps {
        match eval_detailed(p, z) {
            EvalOutcome::Pole => {
                points.push(ExtComplex::Infinity);
                return OrbitRecord {
                    points,
                    fate: OrbitFate::HitPole(step),
                    steps_used: step,
                };
            }
            EvalOutcome::Overflow => {
                points.push(ExtComplex::Infinity);
                return OrbitRecord {
                    points,
                    fate: OrbitFate::Overflowed(step),
                    steps_used: step,
                };
            }
            EvalOutcome::Finite(next) => {
                points.push(ExtComplex::Finite(next));
                if (next - z).norm() < convergence_tol {
                    small_run += 1;
                } else {
                    small_run = 0;
                }
                z = next;
                if small_run >= CONVERGENCE_RUN {
                    return OrbitRecord {
                        points,
                        fate: OrbitFate::ConvergedToPoint,
                        steps_used: step,
                    };
                }
            }
        }
    }
    OrbitRecord {
        points,
        fate: OrbitFate::BudgetExhausted,
        steps_used: max_steps,
    }
}
