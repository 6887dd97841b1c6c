//! Band enumeration on the positive momentum axis, pole-point bookkeeping,
//! the localization interval families and band-to-gap statistics.
//!
//! Interval families use one threshold inequality per pole family:
//! `|sin kd|` around the segment poles, `|cos πt|` around the sphere poles
//! and `|cos π(¼ + t/2)|` around the even sphere poles (where the
//! quarter-circle entry diverges). The threshold is `k^{−ε}` in the loose
//! regime and `(ln k)^{−ε}` in the tight one.

use crate::dispersion::{chain_relation, torus_range};
use crate::error::{Error, Result};
use crate::greens::degree;
use crate::model::{ModelKind, ModelParams, Regime};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Relative accuracy of band edges.
pub const EDGE_TOL: f64 = 1e-10;
/// Closest relative approach to a pole point when sampling.
pub const POLE_GAP: f64 = 1e-9;
/// Sphere poles a violation-free tail must contain for a verdict.
pub const MIN_TAIL_POLES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PoleFamily {
    Segment,
    Sphere,
    Zigzag,
}

impl PoleFamily {
    pub fn name(self) -> &'static str {
        match self {
            PoleFamily::Segment => "segment",
            PoleFamily::Sphere => "sphere",
            PoleFamily::Zigzag => "zigzag",
        }
    }
}

/// Momentum at which a building-block Q-entry diverges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolePoint {
    pub family: PoleFamily,
    /// Index within the family; zigzag index m labels the sphere pole 2m.
    pub n: u64,
    pub k: f64,
}

pub fn segment_pole(n: u64, d: f64) -> f64 {
    PI * n as f64 / d
}

pub fn sphere_pole(n: u64, a: f64) -> f64 {
    let n = n as f64;
    (n * (n + 1.0)).sqrt() / a
}

/// All pole points up to `k_max`, sorted by momentum (ties by family).
pub fn pole_points(p: &ModelParams, k_max: f64) -> Vec<PolePoint> {
    let mut out = Vec::new();
    if p.kind.has_segments() {
        let mut n = 1;
        while segment_pole(n, p.d) <= k_max {
            out.push(PolePoint {
                family: PoleFamily::Segment,
                n,
                k: segment_pole(n, p.d),
            });
            n += 1;
        }
    }
    let mut n = 1;
    while sphere_pole(n, p.a) <= k_max {
        let k = sphere_pole(n, p.a);
        out.push(PolePoint {
            family: PoleFamily::Sphere,
            n,
            k,
        });
        if n % 2 == 0 {
            out.push(PolePoint {
                family: PoleFamily::Zigzag,
                n: n / 2,
                k,
            });
        }
        n += 1;
    }
    out.sort_by(|x, y| x.k.total_cmp(&y.k).then(x.family.cmp(&y.family)));
    out
}

/// Distinct momenta in (lo, hi) where some entry of the model diverges.
fn singular_points(p: &ModelParams, lo: f64, hi: f64) -> Vec<f64> {
    let mut ks: Vec<f64> = pole_points(p, hi)
        .into_iter()
        .filter(|q| q.family != PoleFamily::Zigzag && q.k > lo && q.k < hi)
        .map(|q| q.k)
        .collect();
    ks.sort_by(f64::total_cmp);
    ks.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * *y);
    ks
}

/// Position of a momentum relative to the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// cos θ < −1, or the torus maximum is negative.
    Below,
    Inside,
    /// cos θ > 1, or the torus minimum is positive.
    Above,
}

pub fn side(k: f64, p: &ModelParams) -> Result<Side> {
    if p.kind.is_carpet() {
        let (lo, hi) = torus_range(k, p)?;
        Ok(if lo > 0.0 {
            Side::Above
        } else if hi < 0.0 {
            Side::Below
        } else {
            Side::Inside
        })
    } else {
        let c = chain_relation(k, p)?.cos_theta()?;
        Ok(if c > 1.0 {
            Side::Above
        } else if c < -1.0 {
            Side::Below
        } else {
            Side::Inside
        })
    }
}

/// Spectrum membership; at a pole point the union of the one-sided limits.
pub fn in_spectrum(k: f64, p: &ModelParams) -> bool {
    match side(k, p) {
        Ok(s) => s == Side::Inside,
        Err(_) => {
            let h = POLE_GAP * k;
            [k - h, k + h]
                .iter()
                .any(|&q| matches!(side(q, p), Ok(Side::Inside)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub k_lo: f64,
    pub k_hi: f64,
    /// Nearest pole point to the band center.
    pub pole: Option<PolePoint>,
}

impl Band {
    pub fn width(&self) -> f64 {
        self.k_hi - self.k_lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.k_lo + self.k_hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub k_lo: f64,
    pub k_hi: f64,
}

/// A band resolved by fewer than three samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanWarning {
    pub k_lo: f64,
    pub k_hi: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scan {
    pub bands: Vec<Band>,
    pub warnings: Vec<ScanWarning>,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    lo: f64,
    hi: f64,
    open_lo: bool,
    open_hi: bool,
    samples: usize,
}

/// Sample positions inside one pole-free subinterval: a uniform grid plus a
/// geometric cluster toward every pole end.
fn sample_points(lo: f64, hi: f64, lo_pole: bool, hi_pole: bool, resolution: usize) -> Vec<f64> {
    let h = (hi - lo) / resolution as f64;
    let mut pts: Vec<f64> = (1..resolution).map(|i| lo + i as f64 * h).collect();
    if !lo_pole {
        pts.push(lo);
    }
    if !hi_pole {
        pts.push(hi);
    }
    let ratio = 2f64.powf(16.0 / resolution as f64);
    for (end, dir, is_pole) in [(lo, 1.0, lo_pole), (hi, -1.0, hi_pole)] {
        if !is_pole {
            continue;
        }
        let floor = POLE_GAP * end;
        let mut dist = h / ratio;
        while dist > floor {
            pts.push(end + dir * dist);
            dist /= ratio;
        }
        pts.push(end + dir * floor);
    }
    pts.retain(|&k| k >= lo && k <= hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

fn is_inside(k: f64, p: &ModelParams) -> bool {
    matches!(side(k, p), Ok(Side::Inside))
}

/// Bisection between a spectral point and a gap point; returns the
/// spectral end of the final bracket.
fn refine_edge(mut inside: f64, mut outside: f64, p: &ModelParams) -> f64 {
    while (inside - outside).abs() > EDGE_TOL * inside.abs().max(outside.abs()) {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if is_inside(mid, p) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

/// Between a point above the spectrum and one below it, look for a band by
/// bisection on the side indicator.
fn find_inside(mut a: f64, sa: Side, mut b: f64, p: &ModelParams) -> Option<f64> {
    while b - a > 1e-13 * b {
        let mid = 0.5 * (a + b);
        match side(mid, p) {
            Ok(Side::Inside) => return Some(mid),
            Ok(s) if s == sa => a = mid,
            Ok(_) => b = mid,
            Err(_) => return None,
        }
    }
    None
}

fn scan_subinterval(
    p: &ModelParams,
    lo: f64,
    hi: f64,
    lo_pole: bool,
    hi_pole: bool,
    resolution: usize,
) -> (Vec<Piece>, usize) {
    let pts = sample_points(lo, hi, lo_pole, hi_pole, resolution);
    let samples: Vec<(f64, Side)> = pts
        .iter()
        .filter_map(|&k| side(k, p).ok().map(|s| (k, s)))
        .collect();
    let mut pieces = Vec::new();
    let Some(&(k0, s0)) = samples.first() else {
        return (pieces, 0);
    };
    let mut open: Option<(f64, bool, usize)> = None;
    if s0 == Side::Inside {
        let start = if lo_pole || k0 == lo {
            lo
        } else {
            refine_edge(k0, lo, p)
        };
        open = Some((start, lo_pole, 1));
    }
    for w in samples.windows(2) {
        let (ka, sa) = w[0];
        let (kb, sb) = w[1];
        match (sa, sb) {
            (Side::Inside, Side::Inside) => {
                if let Some(o) = open.as_mut() {
                    o.2 += 1;
                }
            }
            (Side::Inside, _) => {
                if let Some((start, open_lo, count)) = open.take() {
                    pieces.push(Piece {
                        lo: start,
                        hi: refine_edge(ka, kb, p),
                        open_lo,
                        open_hi: false,
                        samples: count,
                    });
                }
            }
            (_, Side::Inside) => {
                open = Some((refine_edge(kb, ka, p), false, 1));
            }
            (x, y) if x != y => {
                if let Some(m) = find_inside(ka, sa, kb, p) {
                    pieces.push(Piece {
                        lo: refine_edge(m, ka, p),
                        hi: refine_edge(m, kb, p),
                        open_lo: false,
                        open_hi: false,
                        samples: 0,
                    });
                }
            }
            _ => {}
        }
    }
    if let Some((start, open_lo, count)) = open {
        let (kl, _) = *samples.last().unwrap();
        let end = if hi_pole || kl == hi {
            hi
        } else {
            refine_edge(kl, hi, p)
        };
        pieces.push(Piece {
            lo: start,
            hi: end,
            open_lo,
            open_hi: hi_pole,
            samples: count,
        });
    }
    (pieces, samples.len())
}

fn nearest_pole(poles: &[PolePoint], k: f64) -> Option<PolePoint> {
    poles
        .iter()
        .min_by(|x, y| (x.k - k).abs().total_cmp(&(y.k - k).abs()))
        .copied()
}

/// Enumerate bands in [k_min, k_max].
///
/// The range is cut at every pole point; each piece is sampled on a uniform
/// grid of `resolution` steps plus geometric clusters toward its pole ends,
/// membership changes are bisected to relative accuracy [`EDGE_TOL`], and
/// direct jumps from one side of the spectrum to the other are searched for
/// the band that must lie between them. Bands reaching a pole from both
/// sides are merged across it.
pub fn scan_bands(p: &ModelParams, k_min: f64, k_max: f64, resolution: usize) -> Result<Scan> {
    if !(k_min > 0.0 && k_max > k_min && k_max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "momentum range [{k_min}, {k_max}] must satisfy 0 < k_min < k_max"
        )));
    }
    if resolution < 16 {
        return Err(Error::InvalidParameter(format!(
            "resolution {resolution} is below 16"
        )));
    }
    if !(p.alpha > 0.0) {
        return Err(Error::InvalidParameter(
            "alpha must be positive for a scan".into(),
        ));
    }
    let cuts = singular_points(p, k_min, k_max);
    let mut nodes = vec![(k_min, side(k_min, p).is_err())];
    nodes.extend(cuts.iter().map(|&k| (k, true)));
    nodes.push((k_max, side(k_max, p).is_err()));
    let results: Vec<(Vec<Piece>, usize)> = nodes
        .par_windows(2)
        .map(|w| scan_subinterval(p, w[0].0, w[1].0, w[0].1, w[1].1, resolution))
        .collect();

    let samples = results.iter().map(|r| r.1).sum();
    let mut merged: Vec<Piece> = Vec::new();
    for piece in results.into_iter().flat_map(|r| r.0) {
        match merged.last_mut() {
            Some(last) if last.open_hi && piece.open_lo && last.hi == piece.lo => {
                last.hi = piece.hi;
                last.open_hi = piece.open_hi;
                last.samples += piece.samples;
            }
            _ => merged.push(piece),
        }
    }
    let poles = pole_points(p, k_max * 1.5 + 10.0);
    let mut warnings = Vec::new();
    let bands = merged
        .iter()
        .map(|pc| {
            if pc.samples < 3 {
                warnings.push(ScanWarning {
                    k_lo: pc.lo,
                    k_hi: pc.hi,
                    samples: pc.samples,
                });
            }
            Band {
                k_lo: pc.lo,
                k_hi: pc.hi,
                pole: nearest_pole(&poles, 0.5 * (pc.lo + pc.hi)),
            }
        })
        .collect();
    Ok(Scan {
        bands,
        warnings,
        samples,
    })
}

/// Complement of the bands inside [k_min, k_max], positive-length pieces only.
pub fn gaps_from_bands(bands: &[Band], k_min: f64, k_max: f64) -> Vec<Gap> {
    let mut gaps = Vec::new();
    let mut cursor = k_min;
    for b in bands {
        if b.k_lo > cursor {
            gaps.push(Gap {
                k_lo: cursor,
                k_hi: b.k_lo.min(k_max),
            });
        }
        cursor = cursor.max(b.k_hi);
    }
    if k_max > cursor {
        gaps.push(Gap {
            k_lo: cursor,
            k_hi: k_max,
        });
    }
    gaps.retain(|g| g.k_hi > g.k_lo);
    gaps
}

/// Neighbourhood of one pole point where its threshold inequality holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyInterval {
    pub center: PolePoint,
    pub lo: f64,
    pub hi: f64,
}

impl FamilyInterval {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalFamily {
    pub regime: Regime,
    pub epsilon: f64,
    pub k_max: f64,
    /// Sorted by center momentum.
    pub intervals: Vec<FamilyInterval>,
    /// Union of the intervals as disjoint sorted hulls.
    pub hulls: Vec<(f64, f64)>,
}

impl IntervalFamily {
    pub fn contains(&self, k: f64) -> bool {
        let i = self.hulls.partition_point(|h| h.1 < k);
        i < self.hulls.len() && self.hulls[i].0 <= k
    }

    /// Parts of [lo, hi] outside every interval.
    pub fn uncovered(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut cursor = lo;
        let start = self.hulls.partition_point(|h| h.1 < lo);
        for &(hl, hh) in &self.hulls[start..] {
            if hl > hi {
                break;
            }
            if hl > cursor {
                out.push((cursor, hl));
            }
            cursor = cursor.max(hh);
            if cursor >= hi {
                break;
            }
        }
        if cursor < hi {
            out.push((cursor, hi));
        }
        out
    }
}

fn threshold(regime: Regime, epsilon: f64, k: f64) -> f64 {
    match regime {
        Regime::Loose => k.powf(-epsilon),
        Regime::Tight => {
            let l = k.ln();
            if l > 0.0 {
                l.powf(-epsilon)
            } else {
                f64::INFINITY
            }
        }
    }
}

fn family_value(family: PoleFamily, k: f64, p: &ModelParams) -> f64 {
    match family {
        PoleFamily::Segment => (k * p.d).sin().abs(),
        PoleFamily::Sphere => (PI * degree(k, p.a)).cos().abs(),
        PoleFamily::Zigzag => (PI * (0.25 + 0.5 * degree(k, p.a))).cos().abs(),
    }
}

/// Momentum range on which the family function runs from 1 through the
/// pole zero back to 1.
fn pole_cell(pole: &PolePoint, p: &ModelParams) -> (f64, f64) {
    let k_of_t = |t: f64| ((t * t - 0.25).max(0.0)).sqrt() / p.a;
    let n = pole.n as f64;
    match pole.family {
        PoleFamily::Segment => ((n - 0.5) * PI / p.d, (n + 0.5) * PI / p.d),
        PoleFamily::Sphere => (k_of_t(n), k_of_t(n + 1.0)),
        PoleFamily::Zigzag => (k_of_t(2.0 * n - 0.5), k_of_t(2.0 * n + 1.5)),
    }
}

fn interval_edge(pole: &PolePoint, end: f64, p: &ModelParams, regime: Regime, eps: f64) -> f64 {
    let excess = |k: f64| family_value(pole.family, k, p) - threshold(regime, eps, k);
    if excess(end) <= 0.0 {
        return end;
    }
    let (mut inside, mut outside) = (pole.k, end);
    while (outside - inside).abs() > EDGE_TOL * pole.k {
        let mid = 0.5 * (inside + outside);
        if excess(mid) <= 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

/// Localization intervals around every pole point up to `k_max`.
pub fn interval_family(p: &ModelParams, epsilon: f64, k_max: f64) -> Result<IntervalFamily> {
    p.kind.check_epsilon(epsilon)?;
    let regime = p.kind.regime();
    let intervals: Vec<FamilyInterval> = pole_points(p, k_max)
        .into_iter()
        .map(|pole| {
            let (cl, ch) = pole_cell(&pole, p);
            FamilyInterval {
                center: pole,
                lo: interval_edge(&pole, cl, p, regime, epsilon),
                hi: interval_edge(&pole, ch, p, regime, epsilon),
            }
        })
        .collect();
    let mut sorted: Vec<(f64, f64)> = intervals.iter().map(|i| (i.lo, i.hi)).collect();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut hulls: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in sorted {
        match hulls.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => hulls.push((lo, hi)),
        }
    }
    Ok(IntervalFamily {
        regime,
        epsilon,
        k_max,
        intervals,
        hulls,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub k_lo: f64,
    pub k_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapDominanceReport {
    /// Threshold the violation list refers to.
    pub k_threshold: f64,
    /// Band pieces above `k_threshold` outside every interval.
    pub violations: Vec<Violation>,
    /// Smallest K with no violation above it (0 if there are none at all).
    pub k_found: f64,
    pub total_violations: usize,
}

/// Band pieces outside the family intervals. Pieces shorter than the edge
/// tolerance are edge noise and ignored.
pub fn check_gap_dominance(
    bands: &[Band],
    fam: &IntervalFamily,
    k_threshold: f64,
) -> GapDominanceReport {
    let all: Vec<Violation> = bands
        .iter()
        .flat_map(|b| fam.uncovered(b.k_lo, b.k_hi))
        .filter(|&(lo, hi)| hi - lo > 10.0 * EDGE_TOL * hi)
        .map(|(k_lo, k_hi)| Violation { k_lo, k_hi })
        .collect();
    let k_found = all.iter().map(|v| v.k_hi).fold(0.0, f64::max);
    let violations = all
        .iter()
        .filter(|v| v.k_hi > k_threshold)
        .map(|v| Violation {
            k_lo: v.k_lo.max(k_threshold),
            k_hi: v.k_hi,
        })
        .collect();
    GapDominanceReport {
        k_threshold,
        violations,
        k_found,
        total_violations: all.len(),
    }
}

pub fn sphere_poles_between(a: f64, lo: f64, hi: f64) -> usize {
    let mut n = 1;
    let mut count = 0;
    while sphere_pole(n, a) <= hi {
        if sphere_pole(n, a) > lo {
            count += 1;
        }
        n += 1;
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The violation-free tail contains at least [`MIN_TAIL_POLES`] sphere poles.
    Verified,
    /// Violations persist too close to the end of the range.
    Violations,
    /// The range holds fewer than [`MIN_TAIL_POLES`] sphere poles.
    InsufficientRange,
}

pub fn gap_dominance_verdict(
    report: &GapDominanceReport,
    a: f64,
    k_min: f64,
    k_max: f64,
) -> Verdict {
    if sphere_poles_between(a, k_min, k_max) < MIN_TAIL_POLES {
        Verdict::InsufficientRange
    } else if sphere_poles_between(a, report.k_found.max(k_min), k_max) >= MIN_TAIL_POLES {
        Verdict::Verified
    } else {
        Verdict::Violations
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandGapStats {
    pub n: usize,
    /// Lowest pole point of the cluster.
    pub pole: PolePoint,
    pub cluster_lo: f64,
    pub cluster_hi: f64,
    pub band_length: f64,
    pub gap_length: f64,
    pub ratio: f64,
}

fn overlap(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.1.min(b.1) - a.0.max(b.0)).max(0.0)
}

/// Per-cluster band length B_n and following gap length L_n. Clusters are
/// the hulls of the family intervals; the last hull has no successor and is
/// not reported.
pub fn band_gap_stats(bands: &[Band], gaps: &[Gap], fam: &IntervalFamily) -> Vec<BandGapStats> {
    let mut out = Vec::new();
    for (i, w) in fam.hulls.windows(2).enumerate() {
        let (hull, next) = (w[0], w[1]);
        let pole = fam
            .intervals
            .iter()
            .filter(|iv| iv.center.k >= hull.0 && iv.center.k <= hull.1)
            .map(|iv| iv.center)
            .next()
            .expect("every hull contains a pole point");
        let band_length: f64 = bands.iter().map(|b| overlap((b.k_lo, b.k_hi), hull)).sum();
        let gap_length: f64 = gaps
            .iter()
            .map(|g| overlap((g.k_lo, g.k_hi), (hull.1, next.0)))
            .sum();
        let ratio = if gap_length > 0.0 {
            band_length / gap_length
        } else {
            f64::INFINITY
        };
        out.push(BandGapStats {
            n: i + 1,
            pole,
            cluster_lo: hull.0,
            cluster_hi: hull.1,
            band_length,
            gap_length,
            ratio,
        });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitRegime {
    /// Reference decay n^{−ε}.
    Power,
    /// Reference decay (ln n)^{−ε}.
    Log,
}

impl From<Regime> for FitRegime {
    fn from(r: Regime) -> Self {
        match r {
            Regime::Loose => FitRegime::Power,
            Regime::Tight => FitRegime::Log,
        }
    }
}

/// Width of the blocks whose maxima form the upper envelope.
pub const ENVELOPE_BLOCK: usize = 5;
/// Number of trailing indices the trend test looks at.
pub const TAIL_INDICES: usize = 20;
pub const DEFAULT_N0: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioFit {
    pub regime: FitRegime,
    pub epsilon: f64,
    pub n0: usize,
    /// (n, C_n) for n ≥ n0.
    pub constants: Vec<(usize, f64)>,
    /// max C_n over n ≥ n0.
    pub envelope: f64,
    /// (block center, block maximum of C_n), ascending.
    pub envelope_blocks: Vec<(f64, f64)>,
    /// Least-squares slope of ln(block max) against ln(block center) over the
    /// last [`TAIL_INDICES`] indices.
    pub tail_slope: f64,
    pub bounded: bool,
    pub non_increasing: bool,
    /// Increases between consecutive block maxima of the raw ratio.
    pub ratio_inversions: usize,
}

impl RatioFit {
    pub fn consistent(&self) -> bool {
        self.bounded && self.non_increasing
    }
}

fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx > 0.0 {
        sxy / sxx
    } else {
        0.0
    }
}

pub fn fit_ratio_bound(
    stats: &[BandGapStats],
    regime: FitRegime,
    epsilon: f64,
) -> Result<RatioFit> {
    fit_ratio_bound_from(stats, regime, epsilon, DEFAULT_N0)
}

/// Envelope test of C_n = ratio · n^ε (or · (ln n)^ε).
///
/// Blocks of [`ENVELOPE_BLOCK`] consecutive indices are anchored at the
/// largest index; the envelope is the sequence of block maxima. The bound is
/// consistent when every C_n is finite and the envelope does not grow over
/// the last [`TAIL_INDICES`] indices.
pub fn fit_ratio_bound_from(
    stats: &[BandGapStats],
    regime: FitRegime,
    epsilon: f64,
    n0: usize,
) -> Result<RatioFit> {
    if stats.len() < 10 {
        return Err(Error::InsufficientData {
            needed: 10,
            got: stats.len(),
        });
    }
    let weight = |n: usize| match regime {
        FitRegime::Power => (n as f64).powf(epsilon),
        FitRegime::Log => (n as f64).ln().powf(epsilon),
    };
    let start = n0.max(2);
    let used: Vec<&BandGapStats> = stats.iter().filter(|s| s.n >= start).collect();
    if used.len() < TAIL_INDICES {
        return Err(Error::InsufficientData {
            needed: TAIL_INDICES + start - 1,
            got: stats.len(),
        });
    }
    let constants: Vec<(usize, f64)> = used.iter().map(|s| (s.n, s.ratio * weight(s.n))).collect();
    let bounded = constants.iter().all(|c| c.1.is_finite());
    let envelope = constants.iter().map(|c| c.1).fold(0.0, f64::max);

    let n_max = used.last().unwrap().n;
    let mut blocks = Vec::new();
    let mut ratio_blocks = Vec::new();
    let mut hi = n_max;
    while hi + 1 >= start + ENVELOPE_BLOCK {
        let lo = hi + 1 - ENVELOPE_BLOCK;
        let in_block: Vec<&&BandGapStats> =
            used.iter().filter(|s| s.n >= lo && s.n <= hi).collect();
        if !in_block.is_empty() {
            let center = 0.5 * (lo + hi) as f64;
            let cmax = in_block
                .iter()
                .map(|s| s.ratio * weight(s.n))
                .fold(0.0, f64::max);
            let rmax = in_block.iter().map(|s| s.ratio).fold(0.0, f64::max);
            blocks.push((center, cmax));
            ratio_blocks.push(rmax);
        }
        if hi < ENVELOPE_BLOCK {
            break;
        }
        hi -= ENVELOPE_BLOCK;
    }
    blocks.reverse();
    ratio_blocks.reverse();

    let tail_blocks = (TAIL_INDICES / ENVELOPE_BLOCK).min(blocks.len());
    let tail = &blocks[blocks.len() - tail_blocks..];
    let floor = f64::MIN_POSITIVE;
    let xs: Vec<f64> = tail.iter().map(|b| b.0.ln()).collect();
    let ys: Vec<f64> = tail.iter().map(|b| b.1.max(floor).ln()).collect();
    let tail_slope = ls_slope(&xs, &ys);
    let non_increasing = tail_slope <= 1e-9;
    let ratio_inversions = ratio_blocks.windows(2).filter(|w| w[1] > w[0]).count();
    Ok(RatioFit {
        regime,
        epsilon,
        n0,
        constants,
        envelope,
        envelope_blocks: blocks,
        tail_slope,
        bounded,
        non_increasing,
        ratio_inversions,
    })
}

/// Default ε of a model's regime.
pub fn default_epsilon(kind: ModelKind) -> f64 {
    kind.default_epsilon()
}
