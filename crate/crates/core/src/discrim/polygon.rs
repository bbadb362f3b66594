//! Geometry of the eigenvalue polygon of `W = U2^dagger U1`.
//!
//! The minimum of `|<psi|W|psi>|` over unit vectors is the distance from the
//! origin to the convex hull of the eigenvalues of `W`; an `N`-fold tensor
//! power has eigenphases equal to all `N`-fold sums of the phases of `W`.

use std::f64::consts::{PI, TAU};

use crate::discrim::helstrom::DiscriminationProblem;
use crate::error::{Error, Result};
use crate::linops::{eig_unitary, ComplexMatrix, C64, EXACT_TOL};

/// Eigenphases closer than this (on the circle) are merged.
pub const PHASE_DEDUP_TOL: f64 = 1e-9;

/// Slack on the half-circle test: a largest gap of exactly pi puts the
/// origin on the hull boundary, which counts as inside.
pub const HULL_TOL: f64 = 1e-9;

/// Above this many distinct N-fold sums only the two extreme phases are kept.
pub const PHASE_SUM_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct EigenvaluePolygon {
    /// Distinct eigenphases in `[0, 2 pi)`, ascending.
    pub phases: Vec<f64>,
    /// Distance from the origin to the convex hull of the eigenvalues.
    pub r: f64,
    /// Angle subtended at the origin: `2 pi` minus the largest gap.
    pub spread: f64,
}

impl EigenvaluePolygon {
    pub fn from_phases(phases: &[f64]) -> Self {
        let distinct: Vec<f64> = dedup_circular(phases).into_iter().map(|(t, _)| t).collect();
        let r = hull_distance(&distinct);
        let spread = angular_spread(&distinct);
        Self { phases: distinct, r, spread }
    }

    pub fn contains_origin(&self) -> bool {
        origin_in_hull(&self.phases)
    }
}

/// Sorts phases into `[0, 2 pi)` and merges near-equal ones, remembering the
/// index of the first member of each group.
fn dedup_circular(phases: &[f64]) -> Vec<(f64, usize)> {
    let mut items: Vec<(f64, usize)> = phases.iter().enumerate().map(|(i, &t)| (t.rem_euclid(TAU), i)).collect();
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, usize)> = Vec::with_capacity(items.len());
    for (t, i) in items {
        match out.last() {
            Some(&(prev, _)) if t - prev <= PHASE_DEDUP_TOL => {}
            _ => out.push((t, i)),
        }
    }
    if out.len() > 1 {
        let (first, last) = (out[0].0, out[out.len() - 1].0);
        if first + TAU - last <= PHASE_DEDUP_TOL {
            out.pop();
        }
    }
    out
}

/// Largest circular gap and the phase that follows it (start of the arc
/// holding all points). Input must be sorted in `[0, 2 pi)`.
fn largest_gap(sorted: &[f64]) -> (f64, f64) {
    let n = sorted.len();
    if n < 2 {
        return (TAU, sorted.first().copied().unwrap_or(0.0));
    }
    let mut best = (sorted[0] + TAU - sorted[n - 1], sorted[0]);
    for k in 1..n {
        let gap = sorted[k] - sorted[k - 1];
        if gap > best.0 {
            best = (gap, sorted[k]);
        }
    }
    best
}

fn sorted_circular(phases: &[f64]) -> Vec<f64> {
    let mut s: Vec<f64> = phases.iter().map(|t| t.rem_euclid(TAU)).collect();
    s.sort_by(f64::total_cmp);
    s
}

/// Origin inside or on the polygon: no open half-plane holds every point.
pub fn origin_in_hull(phases: &[f64]) -> bool {
    let s = sorted_circular(phases);
    s.len() >= 2 && largest_gap(&s).0 <= PI + HULL_TOL
}

pub fn angular_spread(phases: &[f64]) -> f64 {
    let s = sorted_circular(phases);
    if s.len() < 2 {
        0.0
    } else {
        TAU - largest_gap(&s).0
    }
}

fn point(t: f64) -> C64 {
    C64::from_polar(1.0, t)
}

/// Closest point to the origin on the segment `[p, q]`, as `(t, point)`.
fn segment_foot(p: C64, q: C64) -> (f64, C64) {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (0.0, p);
    }
    let t = (-(p.re * d.re + p.im * d.im) / len2).clamp(0.0, 1.0);
    (t, p + d * t)
}

/// Distance from the origin to the convex hull of `e^{i theta_k}`.
pub fn hull_distance(phases: &[f64]) -> f64 {
    if phases.is_empty() {
        return f64::NAN;
    }
    if origin_in_hull(phases) {
        return 0.0;
    }
    let pts: Vec<C64> = phases.iter().map(|&t| point(t)).collect();
    let mut best = 1.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            best = best.min(segment_foot(pts[i], pts[j]).1.norm());
        }
    }
    best
}

/// Convex weights on (a subset of) the points whose combination is the hull
/// point nearest the origin. Uses at most three points.
fn nearest_hull_weights(pts: &[C64]) -> Vec<(usize, f64)> {
    if pts.len() == 1 {
        return vec![(0, 1.0)];
    }
    let mut best = (f64::INFINITY, 0, 0, 0.0);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (t, q) = segment_foot(pts[i], pts[j]);
            if q.norm() < best.0 {
                best = (q.norm(), i, j, t);
            }
        }
    }
    let pair = vec![(best.1, 1.0 - best.3), (best.2, best.3)];
    if best.0 <= HULL_TOL {
        return pair;
    }
    let phases: Vec<f64> = pts.iter().map(|z| z.arg()).collect();
    if !origin_in_hull(&phases) {
        return pair;
    }
    // origin strictly inside: find a triangle holding it
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                if let Some(w) = barycentric_origin(pts[i], pts[j], pts[k]) {
                    return vec![(i, w[0]), (j, w[1]), (k, w[2])];
                }
            }
        }
    }
    pair
}

fn barycentric_origin(a: C64, b: C64, c: C64) -> Option<[f64; 3]> {
    let cross = |u: C64, v: C64| u.re * v.im - u.im * v.re;
    let area = cross(b - a, c - a);
    if area.abs() < 1e-14 {
        return None;
    }
    let wa = cross(b, c) / area;
    let wb = cross(c, a) / area;
    let wc = cross(a, b) / area;
    let w = [wa, wb, wc];
    w.iter().all(|&x| x >= -1e-12).then(|| w.map(|x| x.max(0.0)))
}

pub fn min_overlap_r(w: &ComplexMatrix) -> Result<EigenvaluePolygon> {
    Ok(EigenvaluePolygon::from_phases(&eig_unitary(w)?.phases))
}

/// Unentangled input minimizing `|<psi|W|psi>|`, built as a superposition of
/// eigenvectors whose weighted eigenvalue average is the hull point nearest
/// the origin.
pub fn optimal_pair_input(w: &ComplexMatrix) -> Result<Vec<C64>> {
    let eig = eig_unitary(w)?;
    let groups = dedup_circular(&eig.phases);
    let pts: Vec<C64> = groups.iter().map(|&(t, _)| point(t)).collect();
    let n = w.rows();
    let mut psi = vec![C64::new(0.0, 0.0); n];
    for (g, weight) in nearest_hull_weights(&pts) {
        let v = eig.vectors.column(groups[g].1);
        for (p, x) in psi.iter_mut().zip(&v) {
            *p += x * weight.sqrt();
        }
    }
    crate::linops::normalized(&psi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopiesOutcome {
    /// Smallest number of parallel uses giving zero overlap.
    Perfect(usize),
    /// Still imperfect at the requested maximum.
    NotWithin(usize),
    /// `W` is a multiple of the identity: no number of copies helps.
    Indistinguishable,
}

impl CopiesOutcome {
    pub fn copies(self) -> Option<usize> {
        match self {
            Self::Perfect(n) => Some(n),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NCopyStep {
    pub n: usize,
    /// Spread of the N-fold phase sums, measured on the unwrapped sums.
    pub spread: f64,
    /// `min(N * spread(W), 2 pi)`.
    pub law_spread: f64,
    pub r: f64,
    pub perfect: bool,
}

/// Phases of `W` as offsets from the start of the arc holding them, so that
/// every offset lies in `[0, spread]`. Returns `(arc_start, offsets)`.
fn arc_offsets(phases: &[f64]) -> (f64, Vec<f64>) {
    let distinct: Vec<f64> = dedup_circular(phases).into_iter().map(|(t, _)| t).collect();
    let (_, start) = largest_gap(&distinct);
    let mut offs: Vec<f64> = distinct.iter().map(|&t| (t - start).rem_euclid(TAU)).collect();
    offs.sort_by(f64::total_cmp);
    (start, offs)
}

fn dedup_sorted(v: &mut Vec<f64>) {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= PHASE_DEDUP_TOL);
}

/// Walks `N = 1..=n_max`, enumerating the distinct unwrapped N-fold phase
/// sums without building `W^{(x)N}`. Stops after the first perfect step when
/// `stop_at_perfect` is set.
fn walk_copies(phases: &[f64], n_max: usize, stop_at_perfect: bool) -> Vec<NCopyStep> {
    let (start, mut offsets) = arc_offsets(phases);
    let base_spread = offsets.last().copied().unwrap_or(0.0) - offsets[0];
    let mut sums = offsets.clone();
    let mut steps = Vec::new();
    for n in 1..=n_max {
        if n > 1 {
            let mut next = Vec::with_capacity(sums.len() * offsets.len());
            for s in &sums {
                for o in &offsets {
                    next.push(s + o);
                }
            }
            dedup_sorted(&mut next);
            if next.len() > PHASE_SUM_CAP {
                // the extreme offsets alone generate the same hull
                offsets = vec![offsets[0], *offsets.last().unwrap()];
                let k = offsets[1] - offsets[0];
                next = (0..=n).map(|j| n as f64 * offsets[0] + j as f64 * k).collect();
            }
            sums = next;
        }
        let unwrapped = sums.last().unwrap() - sums[0];
        let wrapped: Vec<f64> = sums.iter().map(|s| n as f64 * start + s).collect();
        let perfect = origin_in_hull(&wrapped);
        let distinct: Vec<f64> = dedup_circular(&wrapped).into_iter().map(|(t, _)| t).collect();
        steps.push(NCopyStep {
            n,
            spread: unwrapped.min(TAU),
            law_spread: (n as f64 * base_spread).min(TAU),
            r: hull_distance(&distinct),
            perfect,
        });
        if perfect && stop_at_perfect {
            break;
        }
    }
    steps
}

/// Per-N spread, hull distance and perfection for `W^{(x)N}`, N = 1..=n_max.
pub fn n_copy_profile(w: &ComplexMatrix, n_max: usize) -> Result<Vec<NCopyStep>> {
    if n_max < 1 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    Ok(walk_copies(&eig_unitary(w)?.phases, n_max, false))
}

pub fn copies_for_perfect_phases(phases: &[f64], n_max: usize) -> Result<CopiesOutcome> {
    if n_max < 1 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    if dedup_circular(phases).len() < 2 {
        return Ok(CopiesOutcome::Indistinguishable);
    }
    let steps = walk_copies(phases, n_max, true);
    Ok(match steps.last() {
        Some(s) if s.perfect => CopiesOutcome::Perfect(s.n),
        _ => CopiesOutcome::NotWithin(n_max),
    })
}

pub fn copies_for_perfect_w(w: &ComplexMatrix, n_max: usize) -> Result<CopiesOutcome> {
    if !w.is_unitary(EXACT_TOL) {
        return Err(Error::Domain("W must be unitary".into()));
    }
    copies_for_perfect_phases(&eig_unitary(w)?.phases, n_max)
}

/// Smallest number of parallel uses for which an N-partite entangled probe
/// discriminates the two unitaries perfectly.
pub fn copies_for_perfect(p: &DiscriminationProblem, n_max: usize) -> Result<CopiesOutcome> {
    copies_for_perfect_w(&p.relative_unitary(), n_max)
}
