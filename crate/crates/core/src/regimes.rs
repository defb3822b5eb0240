//! Noise regimes: superlevel sets of a probability curve over noise
//! probabilities, their intersections, safety values and curvature checks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_RESOLUTION_1D: usize = 10_000;
pub const DEFAULT_RESOLUTION_2D: usize = 400;

// bisection stops once the bracket is this narrow
const BOUNDARY_TOLERANCE: f64 = 1e-12;
const GOLDEN_TOLERANCE: f64 = 1e-10;

/// A union of disjoint closed intervals inside `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region1D {
    pub intervals: Vec<(f64, f64)>,
    pub resolution: usize,
}

impl Region1D {
    pub fn full(resolution: usize) -> Self {
        Region1D {
            intervals: vec![(0.0, 1.0)],
            resolution,
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= p && p <= hi)
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Total length of the intervals.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }

    /// Whether `other` is contained in `self` up to `tol` at the endpoints.
    pub fn covers(&self, other: &Region1D, tol: f64) -> bool {
        other.intervals.iter().all(|&(lo, hi)| {
            self.intervals
                .iter()
                .any(|&(a, b)| a <= lo + tol && hi <= b + tol)
        })
    }
}

/// `{p ∈ [0, 1] : prob(p) ≥ ζ}`.
///
/// The curve is sampled on `resolution + 1` evenly spaced points, and each
/// boundary between an included and an excluded grid point is bisected. The
/// reported endpoints are always points that satisfy the inequality, so a
/// region that touches only `p = 0` comes back as the interval `[0, 0]`.
/// Features narrower than the grid spacing can be missed.
pub fn superlevel_region_1d(prob: impl Fn(f64) -> f64 + Sync, zeta: f64, resolution: usize) -> Region1D {
    let resolution = resolution.max(1);
    let h = 1.0 / resolution as f64;
    let xs: Vec<f64> = (0..=resolution).map(|k| k as f64 * h).collect();
    let inside: Vec<bool> = xs.par_iter().map(|&x| prob(x) >= zeta).collect();
    let mut intervals = Vec::new();
    let mut k = 0;
    while k <= resolution {
        if !inside[k] {
            k += 1;
            continue;
        }
        let start = k;
        while k < resolution && inside[k + 1] {
            k += 1;
        }
        let lo = if start == 0 {
            0.0
        } else {
            refine(&prob, zeta, xs[start], xs[start - 1])
        };
        let hi = if k == resolution {
            1.0
        } else {
            refine(&prob, zeta, xs[k], xs[k + 1])
        };
        intervals.push((lo, hi));
        k += 1;
    }
    Region1D { intervals, resolution }
}

// Bisects between `good` (prob ≥ ζ) and `bad` and returns the last good point.
fn refine(prob: &impl Fn(f64) -> f64, zeta: f64, mut good: f64, mut bad: f64) -> f64 {
    while (good - bad).abs() > BOUNDARY_TOLERANCE {
        let mid = 0.5 * (good + bad);
        if mid == good || mid == bad {
            break;
        }
        if prob(mid) >= zeta {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

/// Intersection of regions computed at one resolution. The empty list gives
/// the whole interval.
pub fn intersect_regions(regions: &[Region1D]) -> Result<Region1D> {
    let Some(first) = regions.first() else {
        return Ok(Region1D::full(DEFAULT_RESOLUTION_1D));
    };
    if let Some(r) = regions.iter().find(|r| r.resolution != first.resolution) {
        return Err(Error::InvalidParams(format!(
            "regions computed at resolutions {} and {}",
            first.resolution, r.resolution
        )));
    }
    let mut acc = first.intervals.clone();
    for region in &regions[1..] {
        acc = intersect_pair(&acc, &region.intervals);
    }
    Ok(Region1D {
        intervals: acc,
        resolution: first.resolution,
    })
}

fn intersect_pair(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        let lo = a[i].0.max(b[j].0);
        let hi = a[i].1.min(b[j].1);
        if lo <= hi {
            out.push((lo, hi));
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SafetyValue {
    pub p: f64,
    pub value: f64,
}

/// Global minimum of `prob` on `[0, 1]`: a grid scan, then golden-section
/// search inside the bracket around every grid-local minimum.
pub fn safety_value_1d(prob: impl Fn(f64) -> f64 + Sync, resolution: usize) -> SafetyValue {
    let resolution = resolution.max(2);
    let h = 1.0 / resolution as f64;
    let ys: Vec<f64> = (0..=resolution)
        .into_par_iter()
        .map(|k| prob(k as f64 * h))
        .collect();
    let mut best = SafetyValue { p: 0.0, value: ys[0] };
    for k in 0..=resolution {
        let left = if k == 0 { f64::INFINITY } else { ys[k - 1] };
        let right = if k == resolution { f64::INFINITY } else { ys[k + 1] };
        if ys[k] > left || ys[k] > right {
            continue;
        }
        let a = (k.saturating_sub(1)) as f64 * h;
        let b = ((k + 1).min(resolution)) as f64 * h;
        let (p, value) = golden_section(&prob, a, b);
        let (p, value) = if ys[k] < value { (k as f64 * h, ys[k]) } else { (p, value) };
        if value < best.value {
            best = SafetyValue { p, value };
        }
    }
    best
}

fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > GOLDEN_TOLERANCE {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let p = 0.5 * (a + b);
    (p, f(p))
}

/// `(p, prob(p))` at `resolution + 1` evenly spaced points.
pub fn curve_points(prob: impl Fn(f64) -> f64 + Sync, resolution: usize) -> Vec<(f64, f64)> {
    let resolution = resolution.max(1);
    (0..=resolution)
        .into_par_iter()
        .map(|k| {
            let p = k as f64 / resolution as f64;
            (p, prob(p))
        })
        .collect()
}

/// Membership over the probability simplex `{(p1, p2) : p1, p2 ≥ 0, p1 + p2 ≤ 1}`,
/// discretized as a `k × k` grid of square cells. Cell `(i, j)` has centre
/// `((i + ½)/k, (j + ½)/k)` and belongs to the simplex iff `i + j + 1 ≤ k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Region2D {
    pub resolution: usize,
    // row-major k×k; cells outside the simplex are always false
    inside: Vec<bool>,
}

impl Region2D {
    pub fn in_simplex(resolution: usize, i: usize, j: usize) -> bool {
        i < resolution && j < resolution && i + j < resolution
    }

    pub fn cell_center(&self, i: usize, j: usize) -> (f64, f64) {
        cell_center(self.resolution, i, j)
    }

    pub fn contains_cell(&self, i: usize, j: usize) -> bool {
        Region2D::in_simplex(self.resolution, i, j) && self.inside[i * self.resolution + j]
    }

    /// Membership of the cell containing `(p1, p2)`.
    pub fn contains(&self, p1: f64, p2: f64) -> bool {
        let k = self.resolution;
        let idx = |p: f64| ((p * k as f64).floor().max(0.0) as usize).min(k - 1);
        let (i, j) = (idx(p1), idx(p2));
        if i + j >= k {
            // the point lies on the hypotenuse of a cell cut by it
            let j = k - 1 - i;
            return self.contains_cell(i, j);
        }
        self.contains_cell(i, j)
    }

    pub fn simplex_cells(&self) -> usize {
        self.resolution * (self.resolution + 1) / 2
    }

    pub fn count_inside(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }

    pub fn is_whole_simplex(&self) -> bool {
        self.count_inside() == self.simplex_cells()
    }

    /// Cells in the region, in row-major order.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        let k = self.resolution;
        (0..k * k)
            .filter(|&c| self.inside[c])
            .map(|c| (c / k, c % k))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct Region2DJson {
    resolution: usize,
    cells: Vec<(usize, usize)>,
}

impl Serialize for Region2D {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Region2DJson {
            resolution: self.resolution,
            cells: self.cells(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Region2D {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Region2DJson::deserialize(d)?;
        let k = raw.resolution;
        let mut inside = vec![false; k * k];
        for (i, j) in raw.cells {
            if !Region2D::in_simplex(k, i, j) {
                return Err(serde::de::Error::custom(format!("cell ({i}, {j}) is outside the simplex")));
            }
            inside[i * k + j] = true;
        }
        Ok(Region2D { resolution: k, inside })
    }
}

fn cell_center(k: usize, i: usize, j: usize) -> (f64, f64) {
    ((i as f64 + 0.5) / k as f64, (j as f64 + 0.5) / k as f64)
}

/// `{(p1, p2) in the simplex : prob(p1, p2) ≥ ζ}`, evaluated at cell centres.
pub fn superlevel_region_2d(prob: impl Fn(f64, f64) -> f64 + Sync, zeta: f64, resolution: usize) -> Region2D {
    let k = resolution.max(1);
    let inside = (0..k * k)
        .into_par_iter()
        .map(|c| {
            let (i, j) = (c / k, c % k);
            if !Region2D::in_simplex(k, i, j) {
                return false;
            }
            let (p1, p2) = cell_center(k, i, j);
            prob(p1, p2) >= zeta
        })
        .collect();
    Region2D { resolution: k, inside }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexMinimum {
    pub p1: f64,
    pub p2: f64,
    pub value: f64,
}

/// Smallest value of `prob` over the lattice `(i/k, j/k)`, `i + j ≤ k`.
/// Ties keep the first point in row-major order.
pub fn grid_minimum_2d(prob: impl Fn(f64, f64) -> f64 + Sync, resolution: usize) -> SimplexMinimum {
    let k = resolution.max(1);
    let points: Vec<(usize, usize)> = (0..=k).flat_map(|i| (0..=k - i).map(move |j| (i, j))).collect();
    let values: Vec<f64> = points
        .par_iter()
        .map(|&(i, j)| prob(i as f64 / k as f64, j as f64 / k as f64))
        .collect();
    let mut best = 0;
    for (idx, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = idx;
        }
    }
    let (i, j) = points[best];
    SimplexMinimum {
        p1: i as f64 / k as f64,
        p2: j as f64 / k as f64,
        value: values[best],
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hessian2 {
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
}

impl Hessian2 {
    pub fn det(&self) -> f64 {
        self.h11 * self.h22 - self.h12 * self.h12
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.h11 + self.h22);
        let half_gap = (0.25 * (self.h11 - self.h22).powi(2) + self.h12 * self.h12).sqrt();
        (mean - half_gap, mean + half_gap)
    }

    pub fn is_indefinite(&self) -> bool {
        self.det() < 0.0
    }
}

/// Central finite-difference Hessian at an interior point of the simplex.
///
/// `step` must lie in `(0, 1e-4]` and the whole stencil must stay inside the
/// simplex.
pub fn hessian_2d(f: impl Fn(f64, f64) -> f64, p1: f64, p2: f64, step: f64) -> Result<Hessian2> {
    let h = step;
    let inside = h > 0.0 && h <= 1e-4 && p1 - h >= 0.0 && p2 - h >= 0.0 && p1 + p2 + 2.0 * h <= 1.0;
    if !inside {
        return Err(Error::BoundaryPoint { p1, p2, step });
    }
    let f0 = f(p1, p2);
    let h11 = (f(p1 + h, p2) - 2.0 * f0 + f(p1 - h, p2)) / (h * h);
    let h22 = (f(p1, p2 + h) - 2.0 * f0 + f(p1, p2 - h)) / (h * h);
    let h12 = (f(p1 + h, p2 + h) - f(p1 + h, p2 - h) - f(p1 - h, p2 + h) + f(p1 - h, p2 - h))
        / (4.0 * h * h);
    Ok(Hessian2 { h11, h12, h22 })
}

/// Central second difference of `f` at `p`; the stencil must stay in `[0, 1]`.
pub fn second_derivative_1d(f: impl Fn(f64) -> f64, p: f64, step: f64) -> Result<f64> {
    if !(step > 0.0 && p - step >= 0.0 && p + step <= 1.0) {
        return Err(Error::BoundaryPoint { p1: p, p2: 0.0, step });
    }
    Ok((f(p + step) - 2.0 * f(p) + f(p - step)) / (step * step))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn game1_strict(p: f64) -> f64 {
        1.0 - p * (1.0 - p * p)
    }

    #[test]
    fn strict_branch_regime() {
        let r = superlevel_region_1d(game1_strict, 0.9, DEFAULT_RESOLUTION_1D);
        assert_eq!(r.intervals.len(), 2);
        assert_eq!(r.intervals[0].0, 0.0);
        assert!((r.intervals[0].1 - 0.101).abs() < 1e-3);
        assert!((r.intervals[1].0 - 0.946).abs() < 1e-3);
        assert_eq!(r.intervals[1].1, 1.0);
    }

    #[test]
    fn zero_threshold_is_everything() {
        let r = superlevel_region_1d(game1_strict, 0.0, 1000);
        assert_eq!(r.intervals, vec![(0.0, 1.0)]);
    }

    #[test]
    fn threshold_one_leaves_endpoints() {
        let f = |p: f64| p + (1.0 - p).powi(3);
        let r = superlevel_region_1d(f, 1.0, 1000);
        assert_eq!(r.intervals, vec![(0.0, 0.0), (1.0, 1.0)]);
    }

    #[test]
    fn intersections() {
        let a = superlevel_region_1d(game1_strict, 0.9, 1000);
        let full = Region1D::full(1000);
        assert_eq!(intersect_regions(&[full.clone(), a.clone()]).unwrap(), a);
        assert_eq!(intersect_regions(&[a.clone(), a.clone()]).unwrap(), a);
        let b = superlevel_region_1d(|p| 1.0 - p * (1.0 - p), 0.9, 1000);
        let ab = intersect_regions(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(ab, intersect_regions(&[b.clone(), a.clone()]).unwrap());
        assert!(ab.contains(0.0) && ab.contains(1.0));
        for k in 0..=1000 {
            let p = k as f64 / 1000.0;
            assert_eq!(ab.contains(p), a.contains(p) && b.contains(p), "{p}");
        }
        assert!(intersect_regions(&[a, Region1D::full(10)]).is_err());
    }

    #[test]
    fn safety_values() {
        let s = safety_value_1d(game1_strict, DEFAULT_RESOLUTION_1D);
        assert!((s.p - 1.0 / 3f64.sqrt()).abs() < 1e-6);
        assert!((s.value - (1.0 - 2.0 / (3.0 * 3f64.sqrt()))).abs() < 1e-9);
        let s = safety_value_1d(|p| 1.0 - p * p * (1.0 - p), DEFAULT_RESOLUTION_1D);
        assert!((s.p - 2.0 / 3.0).abs() < 1e-6);
        assert!((s.value - 23.0 / 27.0).abs() < 1e-9);
        let s = safety_value_1d(|p| 1.0 - p * (1.0 - p), DEFAULT_RESOLUTION_1D);
        assert!((s.p - 0.5).abs() < 1e-6);
        assert!((s.value - 0.75).abs() < 1e-12);
    }

    #[test]
    fn safety_value_at_an_endpoint() {
        let s = safety_value_1d(|p| p, 100);
        assert_eq!((s.p, s.value), (0.0, 0.0));
    }

    #[test]
    fn region_2d_basics() {
        let r = superlevel_region_2d(|_, _| 0.5, 0.0, 20);
        assert!(r.is_whole_simplex());
        assert_eq!(r.simplex_cells(), 210);
        assert!(r.contains(1.0, 0.0) && r.contains(0.0, 1.0) && r.contains(0.0, 0.0));
        let half = superlevel_region_2d(|p1, _| p1, 0.5, 20);
        assert!(half.contains(0.9, 0.05) && !half.contains(0.1, 0.1));
        let json = serde_json::to_string(&half).unwrap();
        assert_eq!(serde_json::from_str::<Region2D>(&json).unwrap(), half);
    }

    #[test]
    fn quadratic_hessian() {
        let h = hessian_2d(|a, b| a * a + b * b, 0.3, 0.3, 1e-4).unwrap();
        let (lo, hi) = h.eigenvalues();
        assert!((lo - 2.0).abs() < 1e-5 && (hi - 2.0).abs() < 1e-5);
        assert!(matches!(
            hessian_2d(|a, b| a + b, 0.0, 0.3, 1e-4),
            Err(Error::BoundaryPoint { .. })
        ));
        assert!(hessian_2d(|a, b| a + b, 0.3, 0.3, 1e-3).is_err());
        assert!(hessian_2d(|a, b| a + b, 0.5, 0.5, 1e-5).is_err());
    }

    #[test]
    fn grid_minimum() {
        let m = grid_minimum_2d(|a, b| (a - 0.25).powi(2) + (b - 0.5).powi(2), 100);
        assert_eq!((m.p1, m.p2), (0.25, 0.5));
    }

    #[test]
    fn second_derivative() {
        let d = second_derivative_1d(game1_strict, 0.5, 1e-3).unwrap();
        assert!((d - 3.0).abs() < 1e-6);
        assert!(second_derivative_1d(game1_strict, 0.0, 1e-3).is_err());
    }
}
