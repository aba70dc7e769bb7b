//! Symbol space, shift map, word metric, and the coding between Julia-set
//! points and itineraries.
//!
//! In the Cantor regime (both asymptotic values attracted to the origin)
//! every Julia-set point is determined by the sequence of fundamental
//! regions its forward orbit visits, decorated with the quadrant each
//! iterate sits in. Orbits that reach a pole produce finite words closed
//! by the two-symbol tail (n, 0), (infinity, 0); all other words are
//! truncations of infinite sequences. The metric d_kappa compares words by
//! their first disagreement, which makes the shift map expansive by the
//! factor kappa and cylinder sets into metric balls.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::inverse::{composed_inverse, composed_inverse_path, ItineraryKey, StageFailure};
use crate::map::{eval_detailed, EvalOutcome, ExtComplex, Parameter};
use crate::lattice::region_of;
use crate::orbit::{classify_parameter, Verdict};

/// Default metric base for reported distances.
pub const DEFAULT_KAPPA: f64 = 2.0;

/// Cylinder diameters are probed on this circle about the origin, which
/// encloses the poles reachable at small region indices.
pub const PROBE_RADIUS: f64 = 3.0;

/// Number of boundary probes per cylinder.
pub const PROBE_COUNT: usize = 64;

/// Quadrant of z, numbered 1 to 4 counterclockwise from the closed
/// positive quadrant; axis points count toward nonnegative parts.
pub fn quadrant_of(z: Complex64) -> u8 {
    match (z.re >= 0.0, z.im >= 0.0) {
        (true, true) => 1,
        (false, true) => 2,
        (false, false) => 3,
        (true, false) => 4,
    }
}

/// Region index slot of a symbol: a fundamental-region integer or the
/// point at infinity closing a finite word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SymbolIndex {
    Region(i32),
    Infinity,
}

/// One itinerary entry: region index plus quadrant label. The label is 0
/// exactly on the two-symbol terminal tail of a finite word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolPair {
    pub index: SymbolIndex,
    pub quadrant: u8,
}

impl SymbolPair {
    pub fn regular(region: i32, quadrant: u8) -> SymbolPair {
        SymbolPair {
            index: SymbolIndex::Region(region),
            quadrant,
        }
    }

    pub fn terminal(region: i32) -> SymbolPair {
        SymbolPair {
            index: SymbolIndex::Region(region),
            quadrant: 0,
        }
    }

    pub fn infinity() -> SymbolPair {
        SymbolPair {
            index: SymbolIndex::Infinity,
            quadrant: 0,
        }
    }
}

/// Malformed word shapes and shift underflow.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("word too short to shift or decode")]
    EmptyWord,
    #[error("symbol {position} is malformed: {reason}")]
    MalformedSymbol { position: usize, reason: &'static str },
}

/// A finite word or a depth-truncated infinite one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Itinerary {
    symbols: Vec<SymbolPair>,
    terminated: bool,
}

impl Itinerary {
    /// Validate and wrap a symbol sequence. Quadrant labels must be 1..=4
    /// except on the terminal tail, where the pattern (n, 0), (inf, 0) is
    /// required; the infinity marker may appear only as the final symbol.
    pub fn new(symbols: Vec<SymbolPair>) -> Result<Itinerary, WordError> {
        let len = symbols.len();
        let terminated = matches!(
            symbols.last(),
            Some(SymbolPair {
                index: SymbolIndex::Infinity,
                ..
            })
        );
        for (position, s) in symbols.iter().enumerate() {
            let is_last = position + 1 == len;
            let is_second_last = position + 2 == len;
            match s.index {
                SymbolIndex::Infinity => {
                    if !is_last {
                        return Err(WordError::MalformedSymbol {
                            position,
                            reason: "infinity marker before the end of the word",
                        });
                    }
                    if s.quadrant != 0 {
                        return Err(WordError::MalformedSymbol {
                            position,
                            reason: "infinity marker carries a quadrant label",
                        });
                    }
                }
                SymbolIndex::Region(_) => {
                    let tail_slot = terminated && is_second_last;
                    if tail_slot {
                        if s.quadrant != 0 {
                            return Err(WordError::MalformedSymbol {
                                position,
                                reason: "symbol before the infinity marker must carry label 0",
                            });
                        }
                    } else if !(1..=4).contains(&s.quadrant) {
                        return Err(WordError::MalformedSymbol {
                            position,
                            reason: "quadrant label outside 1..=4",
                        });
                    }
                }
            }
        }
        Ok(Itinerary {
            symbols,
            terminated,
        })
    }

    /// Unterminated word from (region, quadrant) pairs.
    pub fn from_regions(pairs: &[(i32, u8)]) -> Result<Itinerary, WordError> {
        Itinerary::new(
            pairs
                .iter()
                .map(|&(n, l)| SymbolPair::regular(n, l))
                .collect(),
        )
    }

    pub fn symbols(&self) -> &[SymbolPair] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// True exactly when the word ends with the infinity marker.
    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    /// The region indices of the word, excluding the final infinity
    /// marker. For a finite word these are the regions the orbit visits
    /// before reaching infinity.
    pub fn region_indices(&self) -> Vec<i32> {
        self.symbols
            .iter()
            .filter_map(|s| match s.index {
                SymbolIndex::Region(n) => Some(n),
                SymbolIndex::Infinity => None,
            })
            .collect()
    }
}

/// Drop the first symbol. Termination is a property of the tail, so a
/// shifted finite word stays finite; shifting a bare two-symbol tail
/// leaves the lone infinity marker.
pub fn shift(t: &Itinerary) -> Result<Itinerary, WordError> {
    if t.symbols.len() < 2 {
        return Err(WordError::EmptyWord);
    }
    Ok(Itinerary {
        symbols: t.symbols[1..].to_vec(),
        terminated: t.terminated,
    })
}

/// Invalid metric base.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum MetricError {
    #[error("kappa must exceed 1, got {kappa}")]
    BadKappa { kappa: f64 },
}

/// Word metric: kappa^(-n) where n is the position of the first
/// disagreement, with a missing symbol counting as a disagreement; 0 when
/// the words agree on their whole common shape. Since kappa > 1 the first
/// disagreement dominates all later ones, so this realizes the defining
/// maximum exactly and is an ultrametric.
pub fn distance_kappa(s: &Itinerary, t: &Itinerary, kappa: f64) -> Result<f64, MetricError> {
    if !(kappa > 1.0) {
        return Err(MetricError::BadKappa { kappa });
    }
    let common = s.len().min(t.len());
    for n in 0..common {
        if s.symbols[n] != t.symbols[n] {
            return Ok(kappa.powi(-(n as i32)));
        }
    }
    if s.len() != t.len() {
        return Ok(kappa.powi(-(common as i32)));
    }
    Ok(0.0)
}

/// Orbit left the coded part of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SymbolError {
    #[error("iterate {point} at step {step} lies in the uncoded central set")]
    LeftSymbolDomain { step: usize, point: Complex64 },
}

/// The coding map: one symbol per forward iterate.
///
/// Symbol k records the region index and quadrant of f^k(z). When the next
/// iterate is infinite (pole hit, or magnitude beyond representation) the
/// current symbol is emitted with label 0 and the word closes with the
/// infinity marker. Otherwise the word truncates after depth symbols.
///
/// Meaningful in the Cantor regime and for z in or near the Julia set;
/// iterates falling in the central set |Re(z^2)| < pi/2 (which holds the
/// origin's basin core) have no symbol and abort the coding.
pub fn itinerary_of(
    p: Parameter,
    z: Complex64,
    depth: usize,
) -> Result<Itinerary, SymbolError> {
    let mut symbols = Vec::with_capacity(depth.min(64));
    let mut cur = z;
    for step in 0..depth {
        let Some(n) = region_of(cur) else {
            return Err(SymbolError::LeftSymbolDomain { step, point: cur });
        };
        match eval_detailed(p, cur) {
            EvalOutcome::Finite(next) => {
                symbols.push(SymbolPair::regular(n, quadrant_of(cur)));
                cur = next;
            }
            EvalOutcome::Pole | EvalOutcome::Overflow => {
                symbols.push(SymbolPair::terminal(n));
                symbols.push(SymbolPair::infinity());
                return Ok(Itinerary {
                    symbols,
                    terminated: true,
                });
            }
        }
    }
    Ok(Itinerary {
        symbols,
        terminated: false,
    })
}

/// A decoded point with a radius bound on the cylinder it centers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocatedPoint {
    pub point: ExtComplex,
    /// 0 for exact pre-poles; otherwise the sampled radius of the
    /// depth-truncated cylinder around the returned center.
    pub radius: f64,
}

/// Decoding failures: malformed words or an unavailable inverse branch.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PointError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("inverse branch failed while decoding: {0}")]
    Branch(#[from] StageFailure),
}

fn key_from_regions(regions: &[i32]) -> Result<ItineraryKey, WordError> {
    // The word lists regions in forward-orbit order; composed_inverse
    // applies its first index first, so the deepest symbol leads.
    let reversed: Vec<i32> = regions.iter().rev().copied().collect();
    ItineraryKey::new(reversed).map_err(|_| WordError::EmptyWord)
}

/// Invert the coding map.
///
/// Finite words decode exactly: the composed inverse branch over the
/// word's regions applied to infinity is the unique pre-pole with that
/// itinerary. Unterminated words are truncated to depth symbols and
/// decoded to the center of the corresponding cylinder (the composed
/// inverse applied to the probe point 0) with a radius bound sampled from
/// [`PROBE_COUNT`] boundary probes.
pub fn point_from_itinerary(
    p: Parameter,
    t: &Itinerary,
    depth: usize,
) -> Result<LocatedPoint, PointError> {
    if t.is_empty() {
        return Err(WordError::EmptyWord.into());
    }
    if t.is_terminated() {
        let regions = t.region_indices();
        if regions.is_empty() {
            // The lone infinity marker names the point at infinity.
            return Ok(LocatedPoint {
                point: ExtComplex::Infinity,
                radius: 0.0,
            });
        }
        let key = key_from_regions(&regions)?;
        let z = composed_inverse(p, &key, ExtComplex::Infinity)?;
        return Ok(LocatedPoint {
            point: ExtComplex::Finite(z),
            radius: 0.0,
        });
    }
    let regions = t.region_indices();
    let used = regions.len().min(depth.max(1));
    let key = key_from_regions(&regions[..used])?;
    let center = composed_inverse(p, &key, ExtComplex::Finite(Complex64::new(0.0, 0.0)))?;
    let mut radius: f64 = 0.0;
    for k in 0..PROBE_COUNT {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / PROBE_COUNT as f64;
        let probe = Complex64::new(PROBE_RADIUS * theta.cos(), PROBE_RADIUS * theta.sin());
        if let Ok(w) = composed_inverse(p, &key, ExtComplex::Finite(probe)) {
            radius = radius.max((w - center).norm());
        }
    }
    Ok(LocatedPoint {
        point: ExtComplex::Finite(center),
        radius,
    })
}

/// Diameter trend of one sampled cylinder word.
#[derive(Clone, Debug, Serialize)]
pub struct WordDiagnostics {
    pub regions: Vec<i32>,
    /// Quadrant labels realized by the cylinder's own center; together
    /// with the regions these are the full symbols of the word.
    pub quadrants: Vec<u8>,
    /// Sampled cylinder diameter after 1, 2, ..., depth symbols.
    pub diameters: Vec<f64>,
    /// Every step strictly shrinks, except that a diameter of exactly
    /// zero may repeat: deep cylinders collapse below double resolution,
    /// where every sample rounds to the same point and no further
    /// decrease is representable.
    pub strictly_decreasing: bool,
}

/// Conjugacy bookkeeping over exhaustive small pre-poles.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConjugacyCount {
    pub checked: usize,
    pub passed: usize,
}

/// Settings echoed into every report so a run can be reproduced.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DiagnosticsSettings {
    pub kappa: f64,
    pub probe_radius: f64,
    pub probe_count: usize,
    pub rng_seed: u64,
    pub region_index_bound: i32,
    pub conjugacy_depth: usize,
    pub classification_budget: usize,
}

/// Numerical evidence that the Julia set is a Cantor set carrying the
/// shift: cylinder diameters shrink, the coding commutes with the map,
/// and distinct cylinders stay apart.
#[derive(Clone, Debug, Serialize)]
pub struct CantorReport {
    pub lambda: Complex64,
    pub verdict: Verdict,
    pub depth: usize,
    pub sampled_words: usize,
    pub words: Vec<WordDiagnostics>,
    pub max_final_diameter: f64,
    pub all_words_strictly_decreasing: bool,
    pub conjugacy: ConjugacyCount,
    /// Smallest distance between full-depth centers of distinct sampled
    /// words; positive means the sampled cylinders are pairwise disjoint.
    pub min_pairwise_center_distance: f64,
    pub settings: DiagnosticsSettings,
}

const DIAGNOSTICS_SEED: u64 = 0x7a52_c4a1;
const DIAGNOSTICS_INDEX_BOUND: i32 = 2;
const DIAGNOSTICS_CONJUGACY_DEPTH: usize = 5;
const DIAGNOSTICS_BUDGET: usize = 2000;

/// Quadrant labels of the forward orbit of a composed-inverse result,
/// read off the stage path (which visits the orbit in reverse).
fn path_decoration(path: &[Complex64]) -> Vec<u8> {
    path.iter().rev().map(|&w| quadrant_of(w)).collect()
}

/// A point this close to a coordinate axis (relative) has an unreliable
/// quadrant label: the sign deciding it is rounding noise. Strip-edge
/// points map exactly onto the axes, so without this margin a bisection
/// that converges to a cylinder frontier harvests points whose labels
/// flipped to the wrong side.
const AXIS_MARGIN: f64 = 1e-12;

/// Probe anchoring the quadrant decoration of a sampled word.
///
/// The composed inverse of 0 is useless for this: its forward orbit ends
/// on a zero of the map and rides the axes there, so the labels it
/// realizes are signed-zero tie-breaks naming a corner where four
/// sub-cells meet, possibly none of which carries those exact labels. A
/// generic off-axis probe realizes an interior sub-cell instead.
fn decoration_anchor() -> Complex64 {
    Complex64::from_polar(0.25, 0.37)
}

fn quadrant_unambiguous(w: Complex64) -> bool {
    let margin = AXIS_MARGIN * (1.0 + w.norm());
    w.re.abs() > margin && w.im.abs() > margin
}

/// Image of one probe under the composed inverse, tagged with whether its
/// forward quadrants realize the given decoration. Ambiguous quadrants
/// (orbit point pinned on an axis) never match.
fn decorated_image(
    p: Parameter,
    key: &ItineraryKey,
    probe: Complex64,
    decoration: &[u8],
) -> Option<(Complex64, bool)> {
    let path = composed_inverse_path(p, key, ExtComplex::Finite(probe)).ok()?;
    let matches = path.len() == decoration.len()
        && path
            .iter()
            .rev()
            .zip(decoration)
            .all(|(&w, &q)| quadrant_unambiguous(w) && quadrant_of(w) == q);
    Some((*path.last().unwrap(), matches))
}

/// Probe images of the decorated cylinder over key.
///
/// The quadrant filter is what makes cylinders contract: each fundamental
/// strip spans exactly one period of tan, so its two edges map onto one
/// seam curve, and a region index alone cannot separate preimages on
/// opposite sides of that seam. The quadrant of the next iterate can,
/// which is the whole point of decorating symbols with quadrant labels.
///
/// Matching probes thin out with depth (every near-seam stage halves
/// them), so arcs whose endpoints disagree are bisected toward the
/// frontier, harvesting points where the decorated cylinder's extent is
/// realized; if the boundary ring misses the cylinder entirely, a
/// deterministic interior spiral backstops the sample.
fn cylinder_probe_images(p: Parameter, key: &ItineraryKey, decoration: &[u8]) -> Vec<Complex64> {
    let ring = |theta: f64| Complex64::new(PROBE_RADIUS * theta.cos(), PROBE_RADIUS * theta.sin());
    let mut entries = Vec::with_capacity(PROBE_COUNT);
    let mut images = Vec::new();
    for k in 0..PROBE_COUNT {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / PROBE_COUNT as f64;
        if let Some((w, ok)) = decorated_image(p, key, ring(theta), decoration) {
            entries.push((theta, ok));
            if ok {
                images.push(w);
            }
        }
    }
    let mut bisections = 0;
    for i in 0..entries.len() {
        if bisections >= 8 {
            break;
        }
        let (ta, a_ok) = entries[i];
        let (tb, b_ok) = entries[(i + 1) % entries.len()];
        if a_ok == b_ok {
            continue;
        }
        bisections += 1;
        let tb = if tb > ta {
            tb
        } else {
            tb + 2.0 * std::f64::consts::PI
        };
        let (mut tm, mut to) = if a_ok { (ta, tb) } else { (tb, ta) };
        for _ in 0..20 {
            let mid = 0.5 * (tm + to);
            match decorated_image(p, key, ring(mid), decoration) {
                Some((w, true)) => {
                    tm = mid;
                    images.push(w);
                }
                _ => to = mid,
            }
        }
    }
    if images.len() < 4 {
        // The composed forward map sends the decorated cylinder onto an
        // open neighborhood of the anchor that realized the decoration,
        // so however small that neighborhood is, a geometric ladder of
        // rings descending toward the anchor eventually probes inside it.
        let anchor = decoration_anchor();
        for rung in 0..28 {
            let r = PROBE_RADIUS * 0.5f64.powi(rung);
            for k in 0..8 {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
                let probe = anchor + Complex64::from_polar(r, theta);
                if let Some((w, true)) = decorated_image(p, key, probe, decoration) {
                    images.push(w);
                }
            }
        }
    }
    images
}

/// Exhaustive conjugacy check: every pre-pole reachable through region
/// indices |n| <= bound at depth 2..=depth must satisfy
/// shift(itinerary(z)) = itinerary(f(z)) symbol for symbol.
fn conjugacy_on_pre_poles(p: Parameter, bound: i32, depth: usize) -> ConjugacyCount {
    let mut checked = 0;
    let mut passed = 0;
    let indices: Vec<i32> = (-bound..=bound).collect();
    // Depth-1 pre-poles are the poles themselves; their image is infinity,
    // which has no itinerary, so conjugacy starts at depth 2.
    for d in 2..=depth {
        let mut word = vec![0usize; d];
        loop {
            let key: Vec<i32> = word.iter().map(|&i| indices[i]).collect();
            let key = ItineraryKey::new(key).unwrap();
            if let Ok(z) = composed_inverse(p, &key, ExtComplex::Infinity) {
                if let EvalOutcome::Finite(fz) = eval_detailed(p, z) {
                    let a = itinerary_of(p, z, d + 1);
                    let b = itinerary_of(p, fz, d);
                    checked += 1;
                    if let (Ok(a), Ok(b)) = (a, b) {
                        if shift(&a).ok().as_ref() == Some(&b) {
                            passed += 1;
                        }
                    }
                }
            }
            // Odometer over the index alphabet.
            let mut pos = 0;
            loop {
                if pos == d {
                    break;
                }
                word[pos] += 1;
                if word[pos] < indices.len() {
                    break;
                }
                word[pos] = 0;
                pos += 1;
            }
            if pos == d {
                break;
            }
        }
    }
    ConjugacyCount { checked, passed }
}

/// Sample cylinder words and measure the Cantor-set evidence at this
/// parameter. The word sample is seeded and the seed is reported, so runs
/// are reproducible.
pub fn cantor_diagnostics(p: Parameter, sample_words: usize, depth: usize) -> CantorReport {
    let verdict = classify_parameter(p, DIAGNOSTICS_BUDGET).verdict;
    let mut rng = ChaCha8Rng::seed_from_u64(DIAGNOSTICS_SEED);
    let bound = DIAGNOSTICS_INDEX_BOUND;
    let depth = depth.max(1);

    let mut words: Vec<Vec<i32>> = Vec::with_capacity(sample_words);
    while words.len() < sample_words {
        let w: Vec<i32> = (0..depth).map(|_| rng.gen_range(-bound..=bound)).collect();
        if !words.contains(&w) {
            words.push(w);
        }
    }

    let mut diagnostics = Vec::with_capacity(words.len());
    let mut centers = Vec::with_capacity(words.len());
    let mut max_final_diameter: f64 = 0.0;
    let mut all_decreasing = true;
    for regions in &words {
        // The anchor's inverse image realizes the word's quadrant
        // decoration; its stage path read backwards is the forward orbit.
        let full_key = key_from_regions(regions).unwrap();
        let Ok(center_path) =
            composed_inverse_path(p, &full_key, ExtComplex::Finite(decoration_anchor()))
        else {
            continue;
        };
        let decoration = path_decoration(&center_path);
        let center = *center_path.last().unwrap();
        centers.push(center);

        // Sample each truncation depth, then accumulate deepest first:
        // cylinders are nested, so every sample of a deeper cylinder is
        // also a point of the shallower ones. The union makes each
        // diameter an honest lower bound that can only grow toward the
        // shallow end, immune to one depth sampling a lucky small patch.
        let samples: Vec<Vec<Complex64>> = (1..=depth)
            .map(|d| {
                let key = key_from_regions(&regions[..d]).unwrap();
                cylinder_probe_images(p, &key, &decoration[..d])
            })
            .collect();
        let mut pool = vec![center];
        let mut running: f64 = 0.0;
        let mut diameters = vec![0.0; depth];
        for d in (0..depth).rev() {
            for &a in &samples[d] {
                for &b in &pool {
                    running = running.max((a - b).norm());
                }
                pool.push(a);
            }
            diameters[d] = running;
        }
        let strictly_decreasing = diameters.windows(2).all(|w| w[1] < w[0] || w[0] == 0.0);
        all_decreasing &= strictly_decreasing;
        max_final_diameter = max_final_diameter.max(*diameters.last().unwrap());
        diagnostics.push(WordDiagnostics {
            regions: regions.clone(),
            quadrants: decoration,
            diameters,
            strictly_decreasing,
        });
    }

    let mut min_pairwise = f64::INFINITY;
    for (i, a) in centers.iter().enumerate() {
        for b in &centers[i + 1..] {
            min_pairwise = min_pairwise.min((a - b).norm());
        }
    }
    if !min_pairwise.is_finite() {
        min_pairwise = 0.0;
    }

    let conjugacy = conjugacy_on_pre_poles(p, bound, DIAGNOSTICS_CONJUGACY_DEPTH);

    CantorReport {
        lambda: p.lambda(),
        verdict,
        depth,
        sampled_words: words.len(),
        words: diagnostics,
        max_final_diameter,
        all_words_strictly_decreasing: all_decreasing,
        conjugacy,
        min_pairwise_center_distance: min_pairwise,
        settings: DiagnosticsSettings {
            kappa: DEFAULT_KAPPA,
            probe_radius: PROBE_RADIUS,
            probe_count: PROBE_COUNT,
            rng_seed: DIAGNOSTICS_SEED,
            region_index_bound: bound,
            conjugacy_depth: DIAGNOSTICS_CONJUGACY_DEPTH,
            classification_budget: DIAGNOSTICS_BUDGET,
        },
    }
}
