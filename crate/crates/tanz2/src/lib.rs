//! Iteration, inverse branches, symbolic dynamics, and plane scans for the
//! family f(z) = lambda * tan(z^2), lambda nonzero.
//!
//! The origin is a superattracting fixed point of every member, and the
//! finite singular set is just the critical value 0 plus the asymptotic
//! values +/-lambda*i, so the global dynamics is steered by a single free
//! orbit (the two asymptotic orbits merge after one step by evenness).
//! When that orbit falls into the origin's basin, the Julia set is a
//! Cantor-like repeller on which the map is conjugate to a shift; the
//! [`symbolic`] module measures exactly that structure.
//!
//! Module map:
//!
//! * [`map`]: forward evaluation on the extended plane, derivatives, orbit
//!   iteration with convergence/pole/overflow fates, and the bit-exact
//!   symmetry identities in z and lambda.
//! * [`lattice`]: closed forms for the zeros and poles of tan(z^2), the
//!   separating curves Re(z^2) = (n + 1/2) pi, and the half-open
//!   fundamental regions indexed by integers (even on the real axis,
//!   odd on the imaginary axis).
//! * [`inverse`]: one inverse branch per fundamental region with explicit
//!   branch selection, plus composed inverses along an itinerary key;
//!   pre-poles of any depth come from pulling back the point at infinity.
//! * [`orbit`]: singular-orbit classification of a parameter (origin-only,
//!   attracting cycle with period and multiplier, escape, undetermined).
//! * [`symbolic`]: itinerary coding into region/quadrant symbol pairs, the
//!   shift map, the kappa-adic word metric, and cylinder-contraction
//!   diagnostics for the Cantor regime.
//! * [`scan`]: deterministic rasterization of dynamical and parameter
//!   planes into classified grids, with a flood-fill component heuristic.
//! * [`render`]: binary PPM output with a fixed palette.
//! * [`selftest`]: the invariant suites behind the `selftest` subcommand.
//!
//! Every operation is a pure function of its arguments; scans split rows
//! across threads but write disjoint output, so identical inputs produce
//! identical bytes at any worker count. The `examples/` directory walks
//! each capability end to end: `forward_orbits`, `lattice_regions`,
//! `inverse_branches`, `classify_parameters`, `julia_render`,
//! `parameter_plane`, `symbolic_coding`, and `cantor_diagnostics`.

pub mod inverse;
pub mod lattice;
pub mod map;
pub mod orbit;
pub mod render;
pub mod scan;
pub mod selftest;
pub mod symbolic;

pub use inverse::{composed_inverse, inverse_branch, BranchError, ItineraryKey, StageFailure};
pub use lattice::{pole, region, region_contains, region_of, zero, HalfPlane, Region};
pub use map::{
    derivative, eval, eval_detailed, iterate, EvalOutcome, ExtComplex, OrbitFate, OrbitRecord,
    Parameter,
};
pub use orbit::{classify_parameter, detect_cycle, CycleInfo, CycleKind, ParameterClass, Verdict};
pub use render::{ppm_bytes, write_ppm, Palette, RenderError};
pub use scan::{
    flood_component, scan_dynamical, scan_parameter, Cell, ClassifiedGrid, FloodError,
    GridSpec, CLASS_ESCAPE, CLASS_ORIGIN, CLASS_UNDETERMINED,
};
pub use selftest::{run_selftest, Check};
pub use symbolic::{
    cantor_diagnostics, distance_kappa, itinerary_of, point_from_itinerary, quadrant_of, shift,
    CantorReport, Itinerary, LocatedPoint, SymbolIndex, SymbolPair,
};
