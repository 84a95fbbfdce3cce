//! Antipodal diameter-one metrics Moebius equivalent to a visual metric.
//!
//! A metric is stored through its log-density `λ = log dρ/dρ_o` against the
//! visual metric of a base point `o`; it is evaluated by the geometric
//! mean-value identity `ρ(ξ, η) = ρ_o(ξ, η) exp((λ(ξ) + λ(η)) / 2)`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::fmt;

use crate::disk::{Disk, DiskEnd};
use crate::flow_conjugacy::MoebiusBoundaryMap;
use crate::optimize::{brent_min, periodic_peaks};
use crate::space::ModelSpace;
use crate::{Error, Result};

/// Slack on the triangle inequality.
pub const TRIANGLE_TOL: f64 = 1e-9;
/// Slack on the upper diameter bound. Synthetic metrics are fixed points
/// computed to about `1e-9`.
pub const DIAMETER_TOL: f64 = 1e-8;
/// Largest `Σ m²|(a, b)|` accepted by [`antipodal_synthetic`].
pub const SEED_BUDGET: f64 = 0.35;

pub type DensityFn<E> = Arc<dyn Fn(&E) -> f64 + Send + Sync>;

/// Boundary samples `end_at(j/n)` used to approximate sups over `∂X`.
#[derive(Clone, Debug)]
pub struct SampleGrid<E> {
    points: Vec<E>,
    refine: usize,
}

impl<E: Clone> SampleGrid<E> {
    /// `refine` bounds the number of grid peaks polished by a local search
    /// (smooth boundaries only).
    pub fn new<S: ModelSpace<End = E>>(s: &S, n: usize, refine: usize) -> Result<Self> {
        if n < 16 {
            return Err(Error::Argument(format!("grid size {n} is below 16")));
        }
        let points = crate::space::boundary_grid(s, n);
        for i in 1..n {
            if s.same_end(&points[i - 1], &points[i]) {
                return Err(Error::Argument(format!("grid size {n} exceeds the boundary resolution")));
            }
        }
        Ok(SampleGrid { points, refine })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[E] {
        &self.points
    }

    pub fn refine(&self) -> usize {
        self.refine
    }
}

/// How a metric's log-density is obtained.
#[derive(Clone)]
pub enum Provenance<S: ModelSpace> {
    /// `ρ_x`, with `λ = B(o, x, ·)`.
    Visual(S::Point),
    /// `f_*ρ`, `(f_*ρ)(ξ, η) = ρ(f⁻¹ξ, f⁻¹η)`.
    Pushforward {
        map: MoebiusBoundaryMap<S>,
        inner: Box<MoebiusMetric<S>>,
    },
    /// An explicitly given log-density.
    Synthetic { lambda: DensityFn<S::End>, label: String },
}

impl<S: ModelSpace> fmt::Debug for Provenance<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Visual(x) => f.debug_tuple("Visual").field(x).finish(),
            Provenance::Pushforward { map, inner } => f
                .debug_struct("Pushforward")
                .field("map", map)
                .field("inner", inner)
                .finish(),
            Provenance::Synthetic { label, .. } => f.debug_struct("Synthetic").field("label", label).finish(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MoebiusMetric<S: ModelSpace> {
    space: S,
    base: S::Point,
    provenance: Provenance<S>,
    /// Added to the log-density; multiplies distances by `e^{shift}`.
    shift: f64,
    validated: bool,
}

impl<S: ModelSpace> MoebiusMetric<S> {
    /// The visual metric `ρ_x`, written against the base point `o`.
    pub fn visual(space: &S, o: &S::Point, x: &S::Point) -> Self {
        MoebiusMetric {
            space: space.clone(),
            base: o.clone(),
            provenance: Provenance::Visual(x.clone()),
            shift: 0.0,
            validated: true,
        }
    }

    /// A provisional metric with log-density `lambda` against `ρ_o`.
    pub fn synthetic(space: &S, o: &S::Point, lambda: DensityFn<S::End>, label: &str) -> Self {
        MoebiusMetric {
            space: space.clone(),
            base: o.clone(),
            provenance: Provenance::Synthetic { lambda, label: label.into() },
            shift: 0.0,
            validated: false,
        }
    }

    /// The same metric with `c` added to its log-density. The result is
    /// provisional.
    pub fn shifted(&self, c: f64) -> Self {
        let mut m = self.clone();
        m.shift += c;
        m.validated = c == 0.0 && self.validated;
        m
    }

    pub fn space(&self) -> &S {
        &self.space
    }

    pub fn base(&self) -> &S::Point {
        &self.base
    }

    pub fn provenance(&self) -> &Provenance<S> {
        &self.provenance
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// A short description of the provenance.
    pub fn label(&self) -> String {
        match &self.provenance {
            Provenance::Visual(x) => format!("visual({x:?})"),
            Provenance::Pushforward { inner, .. } => format!("pushforward of {}", inner.label()),
            Provenance::Synthetic { label, .. } => format!("synthetic({label})"),
        }
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn require_validated(&self) -> Result<()> {
        if self.validated {
            Ok(())
        } else {
            Err(Error::Unvalidated(format!("metric {}", self.label())))
        }
    }

    /// `λ(ξ) = log (dρ/dρ_o)(ξ)`.
    pub fn log_density(&self, xi: &S::End) -> f64 {
        let s = &self.space;
        let raw = match &self.provenance {
            Provenance::Visual(x) => s.busemann(&self.base, x, xi),
            Provenance::Synthetic { lambda, .. } => lambda(xi),
            Provenance::Pushforward { .. } => self.pushforward_log_density(xi),
        };
        raw + self.shift
    }

    /// `dρ/dρ_o` from three points: with `a, b` the reference ends farthest
    /// from `ζ`, `D(ζ) = ρ(ζ,a) ρ(ζ,b) ρ_o(a,b) / (ρ_o(ζ,a) ρ_o(ζ,b) ρ(a,b))`.
    fn pushforward_log_density(&self, zeta: &S::End) -> f64 {
        let s = &self.space;
        let o = &self.base;
        let mut refs: Vec<(f64, S::End)> = s
            .reference_ends()
            .into_iter()
            .map(|r| (s.visual_metric(o, zeta, &r), r))
            .collect();
        refs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let (a, b) = (&refs[0].1, &refs[1].1);
        let lr = |p: &S::End, q: &S::End| self.log_eval_unshifted(p, q);
        let lo = |p: &S::End, q: &S::End| libm::log(s.visual_metric(o, p, q));
        lr(zeta, a) + lr(zeta, b) - lr(a, b) - lo(zeta, a) - lo(zeta, b) + lo(a, b)
    }

    fn log_eval_unshifted(&self, xi: &S::End, eta: &S::End) -> f64 {
        match &self.provenance {
            Provenance::Pushforward { map, inner } => {
                inner.log_eval(&map.apply_inverse(xi), &map.apply_inverse(eta))
            }
            _ => {
                let s = &self.space;
                libm::log(s.visual_metric(&self.base, xi, eta))
                    + 0.5 * (self.log_density(xi) + self.log_density(eta))
                    - self.shift
            }
        }
    }

    fn log_eval(&self, xi: &S::End, eta: &S::End) -> f64 {
        self.log_eval_unshifted(xi, eta) + self.shift
    }

    /// `ρ(ξ, η)`.
    pub fn metric_eval(&self, xi: &S::End, eta: &S::End) -> f64 {
        if self.space.same_end(xi, eta) {
            return 0.0;
        }
        libm::exp(self.log_eval(xi, eta))
    }

    /// Log-density samples on a grid, for serialization.
    pub fn samples(&self, grid: &SampleGrid<S::End>) -> Vec<f64> {
        grid.points().iter().map(|e| self.log_density(e)).collect()
    }

    /// Runs [`validate_metric`] and marks the metric validated on success.
    pub fn validate(&mut self, grid: &SampleGrid<S::End>) -> MetricValidation {
        let v = validate_metric(self, grid);
        self.validated = v.pass;
        v
    }
}

/// `f_*ρ`. Validated when `ρ` is.
pub fn pushforward<S: ModelSpace>(f: &MoebiusBoundaryMap<S>, rho: &MoebiusMetric<S>) -> Result<MoebiusMetric<S>> {
    f.require_validated()?;
    if f.space() != rho.space() {
        return Err(Error::Argument("the map and the metric live on different spaces".into()));
    }
    Ok(MoebiusMetric {
        space: rho.space.clone(),
        base: rho.base.clone(),
        provenance: Provenance::Pushforward { map: f.clone(), inner: Box::new(rho.clone()) },
        shift: 0.0,
        validated: rho.validated,
    })
}

/// The derivative `dρ₂/dρ₁` as an evaluable map.
#[derive(Clone, Debug)]
pub struct Derivative<'a, S: ModelSpace> {
    num: &'a MoebiusMetric<S>,
    den: &'a MoebiusMetric<S>,
}

impl<S: ModelSpace> Derivative<'_, S> {
    pub fn log_at(&self, xi: &S::End) -> f64 {
        let mut v = self.num.log_density(xi) - self.den.log_density(xi);
        if self.num.base != self.den.base {
            // dρ_{o₂}/dρ_{o₁} = e^{B(o₁, o₂, ·)}
            v += self.num.space.busemann(&self.den.base, &self.num.base, xi);
        }
        v
    }

    pub fn at(&self, xi: &S::End) -> f64 {
        libm::exp(self.log_at(xi))
    }
}

/// `dρ₂/dρ₁`.
pub fn derivative<'a, S: ModelSpace>(
    rho2: &'a MoebiusMetric<S>,
    rho1: &'a MoebiusMetric<S>,
) -> Result<Derivative<'a, S>> {
    if rho1.space != rho2.space {
        return Err(Error::Argument("metrics on different spaces".into()));
    }
    Ok(Derivative { num: rho2, den: rho1 })
}

/// `(argmax u, max)` of `log dρ₂/dρ₁(end_at(u))`.
fn sup_log_derivative<S: ModelSpace>(d: &Derivative<'_, S>, grid: &SampleGrid<S::End>, sign: f64) -> (f64, f64) {
    let s = &d.num.space;
    let n = grid.len();
    let refine = if S::SMOOTH_BOUNDARY { grid.refine() } else { 0 };
    let eval = |u: f64| {
        let j = libm::round(u * n as f64);
        let e = if libm::fabs(u * n as f64 - j) < 1e-12 {
            grid.points()[(j as usize) % n].clone()
        } else {
            s.end_at(u)
        };
        sign * d.log_at(&e)
    };
    let (u, v) = periodic_peaks(eval, n, refine, 0.0).first().copied().unwrap_or((0.0, f64::NAN));
    (u, sign * v)
}

/// `d_M(ρ₁, ρ₂) = sup log (dρ₂/dρ₁)`.
pub fn dm_distance<S: ModelSpace>(rho1: &MoebiusMetric<S>, rho2: &MoebiusMetric<S>, grid: &SampleGrid<S::End>) -> Result<f64> {
    rho1.require_validated()?;
    rho2.require_validated()?;
    let d = derivative(rho2, rho1)?;
    Ok(sup_log_derivative(&d, grid, 1.0).1.max(0.0))
}

/// Extremes of `dρ₂/dρ₁`, which multiply to one.
#[derive(Clone, Debug)]
pub struct MaxMinReport<E> {
    /// `log λ`.
    pub log_max: f64,
    pub argmax: E,
    /// `log μ`.
    pub log_min: f64,
    pub argmin: E,
    /// `|λμ - 1|`.
    pub product_residual: f64,
    /// A point at maximal `ρ₁`-distance from the argmax.
    pub partner: E,
    pub partner_rho1: f64,
    pub partner_rho2: f64,
    /// `log dρ₂/dρ₁(partner) - log μ`.
    pub partner_min_gap: f64,
}

pub fn maxmin_report<S: ModelSpace>(
    rho2: &MoebiusMetric<S>,
    rho1: &MoebiusMetric<S>,
    grid: &SampleGrid<S::End>,
) -> Result<MaxMinReport<S::End>> {
    rho1.require_validated()?;
    rho2.require_validated()?;
    let s = &rho1.space;
    let d = derivative(rho2, rho1)?;
    let (u_max, log_max) = sup_log_derivative(&d, grid, 1.0);
    let (u_min, log_min) = sup_log_derivative(&d, grid, -1.0);
    let argmax = s.end_at(u_max);
    let (u_p, _) = row_sup(rho1, &argmax, grid);
    let partner = s.end_at(u_p);
    Ok(MaxMinReport {
        log_max,
        log_min,
        product_residual: libm::fabs(libm::expm1(log_max + log_min)),
        partner_rho1: rho1.metric_eval(&argmax, &partner),
        partner_rho2: rho2.metric_eval(&argmax, &partner),
        partner_min_gap: d.log_at(&partner) - log_min,
        argmin: s.end_at(u_min),
        argmax,
        partner,
    })
}

/// `(argmax u, max)` of `η ↦ ρ(ξ, end_at(u))`.
fn row_sup<S: ModelSpace>(rho: &MoebiusMetric<S>, xi: &S::End, grid: &SampleGrid<S::End>) -> (f64, f64) {
    let s = &rho.space;
    let refine = if S::SMOOTH_BOUNDARY { grid.refine().max(1) } else { 0 };
    periodic_peaks(|u| rho.metric_eval(xi, &s.end_at(u)), grid.len(), refine, 0.0)
        .first()
        .copied()
        .unwrap_or((0.0, f64::NAN))
}

/// Outcome of [`validate_metric`].
#[derive(Clone, Debug, PartialEq)]
pub struct MetricValidation {
    pub pass: bool,
    /// Largest `ρ(a,c) - ρ(a,b) - ρ(b,c)` over grid triples.
    pub triangle_worst: f64,
    /// Grid indices `(a, b, c)` of the worst triple when it violates.
    pub triangle_witness: Option<[usize; 3]>,
    /// Largest distance between grid points.
    pub grid_diameter: f64,
    /// Diameter after local refinement of the best grid pair.
    pub refined_diameter: f64,
    /// Smallest over grid points of the largest distance to another one.
    pub antipodal_worst: f64,
    /// Grid-resolution allowance for the diameter and antipodality.
    pub eps_grid: f64,
    /// `c` such that adding `c` to the log-density makes the diameter one.
    pub suggested_shift: f64,
}

/// Checks the triangle inequality on all grid triples, the diameter and
/// antipodality of a candidate metric.
///
/// The allowance `ε_grid = 2 h² C` uses the largest discrete second
/// derivative `C` of a row at its grid maximum (zero on trees, whose
/// metrics take finitely many values near any point).
pub fn validate_metric<S: ModelSpace>(rho: &MoebiusMetric<S>, grid: &SampleGrid<S::End>) -> MetricValidation {
    let pts = grid.points();
    let n = pts.len();
    let mut m = vec![0.0f64; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rho.metric_eval(&pts[i], &pts[j]);
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    let mut triangle_worst = f64::NEG_INFINITY;
    let mut worst_triple = [0usize; 3];
    for a in 0..n {
        for c in a + 1..n {
            let ac = m[a * n + c];
            for b in 0..n {
                let excess = ac - m[a * n + b] - m[b * n + c];
                if excess > triangle_worst {
                    triangle_worst = excess;
                    worst_triple = [a, b, c];
                }
            }
        }
    }
    let mut grid_diameter: f64 = 0.0;
    let mut best_pair = (0, 1);
    let mut antipodal_worst = f64::INFINITY;
    let mut curvature: f64 = 0.0;
    for i in 0..n {
        let row = &m[i * n..(i + 1) * n];
        let (j, v) = row
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (j, v)| if v > acc.1 { (j, v) } else { acc });
        if v > grid_diameter {
            grid_diameter = v;
            best_pair = (i, j);
        }
        antipodal_worst = antipodal_worst.min(v);
        let second = row[(j + n - 1) % n] - 2.0 * v + row[(j + 1) % n];
        curvature = curvature.max(libm::fabs(second));
    }
    let eps_grid = if S::SMOOTH_BOUNDARY { (2.0 * curvature).max(1e-12) } else { 1e-12 };
    let refined_diameter = refine_diameter(rho, grid, best_pair).max(grid_diameter);
    let triangle_ok = triangle_worst <= TRIANGLE_TOL;
    let pass = triangle_ok
        && grid_diameter >= 1.0 - eps_grid
        && refined_diameter <= 1.0 + DIAMETER_TOL
        && antipodal_worst >= 1.0 - eps_grid;
    MetricValidation {
        pass,
        triangle_worst,
        triangle_witness: if triangle_ok { None } else { Some(worst_triple) },
        grid_diameter,
        refined_diameter,
        antipodal_worst,
        eps_grid,
        suggested_shift: -libm::log(refined_diameter),
    }
}

/// Alternating one-dimensional maximization of `ρ(end_at(u), end_at(v))`
/// from a grid pair.
fn refine_diameter<S: ModelSpace>(rho: &MoebiusMetric<S>, grid: &SampleGrid<S::End>, pair: (usize, usize)) -> f64 {
    let s = &rho.space;
    let n = grid.len() as f64;
    let (mut u, mut v) = (pair.0 as f64 / n, pair.1 as f64 / n);
    let mut best = rho.metric_eval(&s.end_at(u), &s.end_at(v));
    if !S::SMOOTH_BOUNDARY {
        return best;
    }
    let h = 1.0 / n;
    for _ in 0..8 {
        let eu = s.end_at(u);
        let (v2, f2) = brent_min(|t| -rho.metric_eval(&eu, &s.end_at(t)), v - h, v + h, 1e-12);
        v = v2;
        let ev = s.end_at(v);
        let (u2, f1) = brent_min(|t| -rho.metric_eval(&s.end_at(t), &ev), u - h, u + h, 1e-12);
        u = u2;
        let now = (-f1).max(-f2);
        if now <= best * (1.0 + 1e-15) {
            best = best.max(now);
            break;
        }
        best = now;
    }
    best
}

/// Mixing coefficients `γ` minimizing `|f_k - Σ γ_j (f_{j+1} - f_j)|`.
fn anderson_weights(hist: &[Vec<f64>]) -> Option<Vec<f64>> {
    let m = hist.len().checked_sub(1).filter(|&m| m > 0)?;
    let last = &hist[m];
    let diffs: Vec<Vec<f64>> = (0..m)
        .map(|j| hist[j + 1].iter().zip(&hist[j]).map(|(a, b)| a - b).collect())
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut a = vec![vec![0.0; m + 1]; m];
    for i in 0..m {
        for j in 0..m {
            a[i][j] = dot(&diffs[i], &diffs[j]);
        }
        a[i][i] *= 1.0 + 1e-10;
        a[i][m] = dot(&diffs[i], last);
    }
    for col in 0..m {
        let piv = (col..m).max_by(|&x, &y| libm::fabs(a[x][col]).total_cmp(&libm::fabs(a[y][col])))?;
        if !(libm::fabs(a[piv][col]) > 1e-300) {
            return None;
        }
        a.swap(col, piv);
        for row in 0..m {
            if row != col {
                let factor = a[row][col] / a[col][col];
                for k in col..=m {
                    a[row][k] -= factor * a[col][k];
                }
            }
        }
    }
    let gamma: Vec<f64> = (0..m).map(|i| a[i][m] / a[i][i]).collect();
    gamma.iter().all(|g| g.is_finite()).then_some(gamma)
}

/// A real trigonometric polynomial interpolating samples on the uniform
/// grid of `[0, 2π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigInterp {
    /// `a₀, ..., a_{N/2}`.
    cos: Vec<f64>,
    /// `b₁, ..., b_{N/2 - 1}`, with `b₀ = 0` stored in front.
    sin: Vec<f64>,
}

impl TrigInterp {
    /// Interpolant of `values[j]` at `2πj/N`, `N` even.
    pub fn from_samples(values: &[f64]) -> TrigInterp {
        let n = values.len();
        let half = n / 2;
        let mut cos = vec![0.0; half + 1];
        let mut sin = vec![0.0; half];
        for k in 0..=half {
            let (mut a, mut b) = (0.0, 0.0);
            for (j, v) in values.iter().enumerate() {
                let t = TAU * ((k * j) % n) as f64 / n as f64;
                a += v * libm::cos(t);
                b += v * libm::sin(t);
            }
            let w = if k == 0 || k == half { 1.0 } else { 2.0 };
            cos[k] = w * a / n as f64;
            if k > 0 && k < half {
                sin[k] = w * b / n as f64;
            }
        }
        TrigInterp { cos, sin }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let (c1, s1) = (libm::cos(theta), libm::sin(theta));
        let (mut c, mut s) = (1.0, 0.0);
        let mut acc = self.cos[0];
        for k in 1..self.cos.len() {
            let c2 = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = c2;
            acc += self.cos[k] * c;
            if k < self.sin.len() {
                acc += self.sin[k] * s;
            }
        }
        acc
    }

    /// Zeroes all frequencies above `k`.
    pub fn truncate(&mut self, k: usize) {
        for (j, c) in self.cos.iter_mut().enumerate() {
            if j > k {
                *c = 0.0;
            }
        }
        for (j, c) in self.sin.iter_mut().enumerate() {
            if j > k {
                *c = 0.0;
            }
        }
    }

    /// Largest coefficient magnitude among the top eighth of frequencies.
    pub fn tail(&self) -> f64 {
        let n = self.cos.len();
        (n - n / 8..n)
            .map(|k| libm::fabs(self.cos[k]).max(self.sin.get(k).map_or(0.0, |v| libm::fabs(*v))))
            .fold(0.0, f64::max)
    }
}

/// Convergence data of [`antipodal_synthetic`].
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticFit {
    pub iterations: usize,
    /// `max |Tφ - φ|` at the interpolation nodes.
    pub node_residual: f64,
    /// Size of the highest interpolated frequencies.
    pub spectral_tail: f64,
}

/// A diameter-one antipodal metric on the disk boundary grown from the
/// seed `λ₀(θ) = Σ a cos(mθ) + b sin(mθ)` over `(m, a, b)`.
///
/// Writing `φ = λ/2`, the metric has diameter one and is antipodal exactly
/// when `φ = Tφ` with `Tφ(ξ) = -max_η [log ρ_o(ξ, η) + φ(η)]`. `T` does not
/// expand sup-norm distances, and near a fixed point the averaged map
/// `φ ↦ (φ + Tφ)/2` is close to the projection killing the part of `φ` that
/// is even under the partner map, so the iteration settles quickly on a
/// fixed point near the seed. Only odd harmonics survive it, so even ones
/// are refused.
///
/// `φ` is represented by its trigonometric interpolant on `nodes` points;
/// 256 nodes resolve fixed points grown from seeds with `Σ m²|(a, b)|` up
/// to [`SEED_BUDGET`], which is also enforced. Beyond roughly `λ'' = ½` the
/// inner maximum splits and the triangle inequality fails near the
/// diagonal. The result is provisional until validated.
pub fn antipodal_synthetic(
    disk: &Disk,
    seed: &[(u32, f64, f64)],
    nodes: usize,
) -> Result<(MoebiusMetric<Disk>, SyntheticFit)> {
    if nodes < 16 || nodes % 2 != 0 {
        return Err(Error::Argument(format!("node count {nodes} must be even and at least 16")));
    }
    if let Some(&(m, _, _)) = seed.iter().find(|h| h.0 % 2 == 0) {
        return Err(Error::Argument(format!("harmonic {m} is even; only odd harmonics survive")));
    }
    let budget: f64 = seed.iter().map(|&(m, a, b)| (m * m) as f64 * libm::hypot(a, b)).sum();
    if !(budget <= SEED_BUDGET) {
        return Err(Error::Argument(format!("seed curvature budget {budget} exceeds {SEED_BUDGET}")));
    }
    let o = disk.base_point();
    let log_rho = |a: f64, b: f64| libm::log(disk.visual_metric(&o, &DiskEnd::new(a), &DiskEnd::new(b)));
    let theta: Vec<f64> = (0..nodes).map(|j| TAU * j as f64 / nodes as f64).collect();
    let mut phi: Vec<f64> = theta
        .iter()
        .map(|&t| {
            0.5 * seed
                .iter()
                .map(|&(m, a, b)| a * libm::cos(m as f64 * t) + b * libm::sin(m as f64 * t))
                .sum::<f64>()
        })
        .collect();
    let fine = 8 * nodes;
    let h = TAU / fine as f64;
    // log ρ_o between fine-grid angles depends only on the index gap
    let gap: Vec<f64> = (0..fine).map(|k| if k == 0 { f64::NEG_INFINITY } else { log_rho(0.0, k as f64 * h) }).collect();
    let c_transform = |phi: &[f64]| -> Vec<f64> {
        let interp = TrigInterp::from_samples(phi);
        let fine_vals: Vec<f64> = (0..fine).map(|j| interp.eval(j as f64 * h)).collect();
        theta
            .iter()
            .enumerate()
            .map(|(i, &ti)| {
                let base = i * (fine / nodes);
                let mut best = (0usize, f64::NEG_INFINITY);
                for (j, fv) in fine_vals.iter().enumerate() {
                    let v = gap[(j + fine - base) % fine] + fv;
                    if v > best.1 {
                        best = (j, v);
                    }
                }
                let c = best.0 as f64 * h;
                let (_, fm) = brent_min(|e| -(log_rho(ti, e) + interp.eval(e)), c - h, c + h, 1e-13);
                -best.1.max(-fm)
            })
            .collect()
    };
    // The averaged map G(φ) = (φ + Tφ)/2, with the top quarter of the
    // spectrum dropped: aliasing there feeds an unstable mode.
    let averaged = |phi: &[f64], t_phi: &[f64]| -> Vec<f64> {
        let mid: Vec<f64> = phi.iter().zip(t_phi).map(|(a, b)| 0.5 * (a + b)).collect();
        let mut smooth = TrigInterp::from_samples(&mid);
        smooth.truncate(3 * nodes / 8);
        theta.iter().map(|&t| smooth.eval(t)).collect()
    };
    // Linearized at a fixed point, G is nearly a projection, but the
    // discretized partner map is not exactly an involution and leaves modes
    // that decay at rates close to one. Anderson mixing removes them.
    const DEPTH: usize = 6;
    let mut hist_g: Vec<Vec<f64>> = Vec::new();
    let mut hist_f: Vec<Vec<f64>> = Vec::new();
    let mut iterations = 0;
    let mut node_residual = f64::INFINITY;
    let mut best_phi = phi.clone();
    let mut stall = 0;
    while iterations < 200 && stall < 10 {
        let t_phi = c_transform(&phi);
        let r = phi.iter().zip(&t_phi).map(|(a, b)| libm::fabs(a - b)).fold(0.0, f64::max);
        iterations += 1;
        if r < node_residual {
            stall = 0;
            node_residual = r;
            best_phi.clone_from(&phi);
        } else {
            stall += 1;
        }
        if r < 1e-13 {
            break;
        }
        let g = averaged(&phi, &t_phi);
        let f: Vec<f64> = g.iter().zip(&phi).map(|(a, b)| a - b).collect();
        hist_g.push(g.clone());
        hist_f.push(f.clone());
        if hist_f.len() > DEPTH + 1 {
            hist_g.remove(0);
            hist_f.remove(0);
        }
        phi = match anderson_weights(&hist_f) {
            Some(gamma) => {
                let mut next = g;
                for (j, gm) in gamma.iter().enumerate() {
                    for (k, v) in next.iter_mut().enumerate() {
                        *v -= gm * (hist_g[j + 1][k] - hist_g[j][k]);
                    }
                }
                next
            }
            None => g,
        };
    }
    let phi = best_phi;
    if !(node_residual < 1e-8) {
        return Err(Error::Numerical(format!("fixed-point iteration stalled at residual {node_residual}")));
    }
    let interp = TrigInterp::from_samples(&phi);
    let spectral_tail = interp.tail();
    let label = format!("antipodal fixed point seeded by {seed:?}");
    let lambda: DensityFn<DiskEnd> = Arc::new(move |e: &DiskEnd| 2.0 * interp.eval(e.angle()));
    let metric = MoebiusMetric::synthetic(disk, &o, lambda, &label);
    Ok((metric, SyntheticFit { iterations, node_residual, spectral_tail }))
}

