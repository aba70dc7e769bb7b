//! Integer coding of zeros, poles, and fundamental regions.
//!
//! f(z) = lambda * tan(z^2) vanishes where z^2 = m*pi and blows up where
//! z^2 = (m + 1/2)*pi. Both lattices sit on the real and imaginary axes
//! and are numbered by a single integer n:
//!
//! * even n = 2m picks the real axis: positive root for m >= 0, negative
//!   for m < 0;
//! * odd n = 2m+1 picks the imaginary axis: upper for m >= 0, lower for
//!   m < 0.
//!
//! So zero(0) = 0, zero(2) = sqrt(pi), zero(1) = i*sqrt(pi),
//! zero(-2) = -sqrt(pi); pole(0) = sqrt(pi/2), pole(1) = i*sqrt(pi/2),
//! pole(-1) = -i*sqrt(pi/2), and so on outward.
//!
//! The region L_n is the half-open curvilinear strip around the pole chain
//! through pole(n), cut out in the w = z^2 plane:
//!
//! * n = 2m, m >= 0:   Re z > 0 and Re(z^2) in [(m+1/2)pi, (m+3/2)pi)
//! * n = 2m, m < 0:    Re z < 0 and Re(z^2) in [(|m|-1/2)pi, (|m|+1/2)pi)
//! * n = 2m+1, m >= 0: Im z > 0 and Re(z^2) in (-(m+3/2)pi, -(m+1/2)pi]
//! * n = 2m+1, m < 0:  Im z < 0 and Re(z^2) in (-(|m|+1/2)pi, -(|m|-1/2)pi]
//!
//! Each strip is half open on the side away from the origin, so the strips
//! tile their half plane; the closed end passes through the pole. Points
//! with |Re(z^2)| < pi/2 form a central set that belongs to no region (it
//! contains the whole basin core around 0 and both asymptotic values for
//! moderate lambda). Points exactly on an axis count toward the positive
//! half plane. f restricted to L_n is one to one and onto the plane minus
//! the two asymptotic values, which is what makes the regions usable as
//! symbols: the branch of f^{-1} landing in L_n is single valued.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Largest |m| for which region arithmetic stays inside i32 and f64 floor
/// stays trustworthy. Beyond this [`region_of`] reports no region.
const MAX_STRIP: f64 = 1.0e9;

/// The n-th zero of f, where z^2 = m*pi.
pub fn zero(n: i32) -> Complex64 {
    let m = n.div_euclid(2);
    if n.rem_euclid(2) == 0 {
        if m >= 0 {
            Complex64::new((m as f64 * PI).sqrt(), 0.0)
        } else {
            Complex64::new(-((-m) as f64 * PI).sqrt(), 0.0)
        }
    } else if m >= 0 {
        Complex64::new(0.0, ((m + 1) as f64 * PI).sqrt())
    } else {
        Complex64::new(0.0, -(((-m) as f64) * PI).sqrt())
    }
}

/// The n-th pole of f, where z^2 = (m + 1/2)*pi.
pub fn pole(n: i32) -> Complex64 {
    let m = n.div_euclid(2);
    if n.rem_euclid(2) == 0 {
        if m >= 0 {
            Complex64::new(((m as f64 + 0.5) * PI).sqrt(), 0.0)
        } else {
            Complex64::new(-((((-m) as f64) - 0.5) * PI).sqrt(), 0.0)
        }
    } else if m >= 0 {
        Complex64::new(0.0, ((m as f64 + 0.5) * PI).sqrt())
    } else {
        Complex64::new(0.0, -((((-m) as f64) - 0.5) * PI).sqrt())
    }
}

/// Which half plane a region occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfPlane {
    RePositive,
    ReNegative,
    ImPositive,
    ImNegative,
}

/// The fundamental region L_n.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region {
    pub index: i32,
    /// Bounds on Re(z^2) in units of pi, lower then upper.
    pub strip: (f64, f64),
    pub half_plane: HalfPlane,
}

impl Region {
    /// Even regions include their lower strip bound, odd regions their
    /// upper one; in both cases the closed side is the one nearer 0,
    /// which is the side the pole chain runs along.
    pub fn closed_at_lower(&self) -> bool {
        self.index.rem_euclid(2) == 0
    }

    /// Membership test. Axis points count toward the positive half plane.
    ///
    /// Comparison happens in units of pi with an ulp-scale snap
    /// (`MEMBERSHIP_SNAP`), so a pole constructed through sqrt compares
    /// as sitting exactly on its closed boundary. The window must stay at
    /// rounding scale: the inverse branches select their sheet with this
    /// test, and a wider window pushes genuinely interior points onto an
    /// open edge and hands back the root one whole period over.
    pub fn contains(&self, z: Complex64) -> bool {
        self.contains_snapped(z, MEMBERSHIP_SNAP)
    }

    fn contains_snapped(&self, z: Complex64, snap: f64) -> bool {
        let side_ok = match self.half_plane {
            HalfPlane::RePositive => z.re >= 0.0,
            HalfPlane::ReNegative => z.re < 0.0,
            HalfPlane::ImPositive => z.im >= 0.0,
            HalfPlane::ImNegative => z.im < 0.0,
        };
        if !side_ok {
            return false;
        }
        let s = (z * z).re / PI;
        if !s.is_finite() {
            return false;
        }
        let s = snap_half_integer(s, snap);
        if self.closed_at_lower() {
            s >= self.strip.0 && s < self.strip.1
        } else {
            s > self.strip.0 && s <= self.strip.1
        }
    }
}

/// Relative snap width for plain membership: a few hundred ulps, enough
/// for lattice points built through sqrt and nothing else.
const MEMBERSHIP_SNAP: f64 = 1e-14;

/// Relative snap width [`region_of`] uses to code forward orbits.
///
/// Re-iterating a constructed pre-pole drifts by the evaluation error
/// times the orbit's derivative product, about 1e-10 at modest depths,
/// and such orbits ride exactly along strip boundaries. 1e-8 gives the
/// same headroom the pole test uses; each boundary sliver codes as the
/// region owning that edge (the one whose pole chain runs along it),
/// which is where the undrifted point belongs.
const CODING_SNAP: f64 = 1e-8;

/// s snapped to the nearest half integer when within `snap` relative.
/// Strip boundaries sit on half integers in units of pi.
fn snap_half_integer(s: f64, snap: f64) -> f64 {
    let snapped = (s * 2.0).round() * 0.5;
    if (s - snapped).abs() <= snap * (1.0 + s.abs()) {
        snapped
    } else {
        s
    }
}

/// The region descriptor for index n.
pub fn region(n: i32) -> Region {
    let m = n.div_euclid(2);
    if n.rem_euclid(2) == 0 {
        if m >= 0 {
            Region {
                index: n,
                strip: (m as f64 + 0.5, m as f64 + 1.5),
                half_plane: HalfPlane::RePositive,
            }
        } else {
            let j = (-m) as f64;
            Region {
                index: n,
                strip: (j - 0.5, j + 0.5),
                half_plane: HalfPlane::ReNegative,
            }
        }
    } else if m >= 0 {
        Region {
            index: n,
            strip: (-(m as f64 + 1.5), -(m as f64 + 0.5)),
            half_plane: HalfPlane::ImPositive,
        }
    } else {
        let j = (-m) as f64;
        Region {
            index: n,
            strip: (-(j + 0.5), -(j - 0.5)),
            half_plane: HalfPlane::ImNegative,
        }
    }
}

/// Does z lie in L_n?
pub fn region_contains(n: i32, z: Complex64) -> bool {
    region(n).contains(z)
}

/// The unique region containing z, or None for the central set
/// |Re(z^2)| < pi/2, non-finite input, and indices beyond i32 range.
///
/// Unlike [`region_contains`] this codes with the wide `CODING_SNAP`
/// window: a point within it of a strip boundary is assigned to the
/// region owning that edge, so a forward orbit that drifted off an exact
/// boundary still codes as the undrifted point would.
pub fn region_of(z: Complex64) -> Option<i32> {
    let w = (z * z).re;
    if !w.is_finite() || w.abs() >= MAX_STRIP * PI {
        return None;
    }
    // Predict the strip by floor division, then confirm against the
    // half-open bounds so boundary rounding can never disagree with
    // the snapped membership test.
    let candidates: [i64; 3];
    if w > 0.0 {
        if z.re >= 0.0 {
            let m = (w / PI - 0.5).floor() as i64;
            candidates = [2 * m, 2 * (m - 1), 2 * (m + 1)];
        } else {
            let j = (w / PI + 0.5).floor() as i64;
            candidates = [-2 * j, -2 * (j - 1), -2 * (j + 1)];
        }
    } else if w < 0.0 {
        if z.im >= 0.0 {
            let m = (-w / PI - 0.5).floor() as i64;
            candidates = [2 * m + 1, 2 * (m - 1) + 1, 2 * (m + 1) + 1];
        } else {
            let j = (-w / PI + 0.5).floor() as i64;
            candidates = [-2 * j + 1, -2 * (j - 1) + 1, -2 * (j + 1) + 1];
        }
    } else {
        return None;
    }
    for cand in candidates {
        if let Ok(n) = i32::try_from(cand) {
            if region(n).contains_snapped(z, CODING_SNAP) {
                return Some(n);
            }
        }
    }
    None
}
