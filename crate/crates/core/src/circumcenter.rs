//! Circumcenters, `F(-1)`-convex objectives, `u_K` and asymptotic
//! circumcenters.
//!
//! Every objective here is a supremum of terms `e^{c} cosh d(·, p)` or
//! `e^{c} exp B(·, y, ξ)`. Minimization works with the logarithm of the
//! objective, which is convex along geodesics. On the disk the search
//! alternates geodesic line searches and then polishes with the exact
//! minimax point of the near-active terms on the hyperboloid. On trees the
//! terms are piecewise linear along edges and an exact descent walk finds
//! the minimizer.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::disk::{Disk, DiskPoint};
use crate::flow_conjugacy::FlowSet;
use crate::lorentz::{equalizing_point, small_subsets, Lorentz3};
use crate::moebius_metrics::{MoebiusMetric, SampleGrid};
use crate::optimize::{convex_line_min, nelder_mead, periodic_peaks};
use crate::space::{foot, GeodesicLine, ModelSpace};
use crate::tree::{ratio_from_f64, ratio_to_f64, Tree, TreePoint, Q};
use crate::{Error, Result};

pub const POSITION_TOL: f64 = 1e-6;
pub const VALUE_TOL: f64 = 1e-10;
pub const MAX_SWEEPS: usize = 200;
/// Number of probe points in the optimality certificate.
pub const CERTIFICATE_PROBES: usize = 8;

/// Near-active terms handed to the hyperboloid polish.
const POLISH_TERMS: usize = 6;
const POLISH_BAND: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimizerOptions {
    pub position_tol: f64,
    /// Relative tolerance on the objective (absolute on its logarithm).
    pub value_tol: f64,
    pub line_tol: f64,
    pub max_sweeps: usize,
}

impl Default for MinimizerOptions {
    fn default() -> Self {
        MinimizerOptions { position_tol: POSITION_TOL, value_tol: VALUE_TOL, line_tol: 1e-9, max_sweeps: MAX_SWEEPS }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimizerResult<P> {
    pub argmin: P,
    pub value: f64,
    /// Radius of the certificate probes.
    pub tolerance: f64,
    pub iterations: usize,
    /// Whether the value at `argmin` is at most the value at every probe.
    pub certified: bool,
    /// Smallest `log f(probe) - log f(argmin)`.
    pub certificate_gap: f64,
}

/// One term of a sup-type objective; `lw` is a log-weight.
#[derive(Clone, Debug, PartialEq)]
pub enum Term<S: ModelSpace> {
    /// `e^{lw} cosh d(·, p)`.
    Cosh { p: S::Point, lw: f64 },
    /// `e^{lw} exp B(·, y, ξ)`.
    Horo { y: S::Point, xi: S::End, lw: f64 },
}

impl<S: ModelSpace> Term<S> {
    pub fn log_value(&self, s: &S, z: &S::Point) -> f64 {
        match self {
            Term::Cosh { p, lw } => lw + log_cosh(s.distance(z, p)),
            Term::Horo { y, xi, lw } => lw + s.busemann(z, y, xi),
        }
    }

    pub fn value(&self, s: &S, z: &S::Point) -> f64 {
        libm::exp(self.log_value(s, z))
    }
}

fn log_cosh(d: f64) -> f64 {
    let d = libm::fabs(d);
    d + libm::log1p(libm::exp(-2.0 * d)) - core::f64::consts::LN_2
}

/// `z ↦ max_ζ [λ(ζ) + B(z, o, ζ)] = d_M(ρ, ρ_z)` for a metric `ρ` with
/// log-density `λ` relative to `ρ_o`.
#[derive(Clone, Debug)]
pub struct VisualTarget<S: ModelSpace> {
    metric: MoebiusMetric<S>,
    grid: SampleGrid<S::End>,
    lambda: Vec<f64>,
}

impl<S: ModelSpace> VisualTarget<S> {
    pub fn new(metric: &MoebiusMetric<S>, grid: &SampleGrid<S::End>) -> Result<Self> {
        metric.require_validated()?;
        let lambda = grid.points().iter().map(|e| metric.log_density(e)).collect();
        Ok(VisualTarget { metric: metric.clone(), grid: grid.clone(), lambda })
    }

    pub fn metric(&self) -> &MoebiusMetric<S> {
        &self.metric
    }

    fn eval_at(&self, z: &S::Point, u: f64) -> (S::End, f64) {
        let s = self.metric.space();
        let n = self.grid.len();
        let j = libm::round(u * n as f64);
        let (e, lam) = if libm::fabs(u * n as f64 - j) < 1e-12 {
            let j = (j as usize) % n;
            (self.grid.points()[j].clone(), self.lambda[j])
        } else {
            let e = s.end_at(u);
            let lam = self.metric.log_density(&e);
            (e, lam)
        };
        let v = lam + s.busemann(z, self.metric.base(), &e);
        (e, v)
    }

    fn peaks(&self, z: &S::Point, band: f64) -> Vec<(f64, f64)> {
        let refine = if S::SMOOTH_BOUNDARY { self.grid.refine() } else { 0 };
        periodic_peaks(|u| self.eval_at(z, u).1, self.grid.len(), refine, band)
    }

    /// `d_M(ρ, ρ_z)`.
    pub fn distance(&self, z: &S::Point) -> f64 {
        self.peaks(z, 0.0).first().map(|p| p.1).unwrap_or(f64::NAN)
    }
}

/// A positive objective whose logarithm is convex along geodesics.
#[derive(Clone, Debug)]
pub enum ConvexObjective<S: ModelSpace> {
    /// `e^{lw} max_i cosh d(·, p_i)`; `lw = log 2 - t` gives `u_t`.
    Circumradius { points: Vec<S::Point>, lw: f64 },
    /// `u_K(z) = sup_{γ∈K} exp B(z, π(γ), γ(+∞))`.
    UK(FlowSet<S>),
    /// `exp d_M(ρ, ρ_z)`.
    VisualDistance(VisualTarget<S>),
    Single(Term<S>),
}

impl<S: ModelSpace> ConvexObjective<S> {
    pub fn log_value(&self, s: &S, z: &S::Point) -> f64 {
        match self {
            ConvexObjective::Circumradius { points, lw } => {
                lw + log_cosh(points.iter().map(|p| s.distance(z, p)).fold(0.0, f64::max))
            }
            ConvexObjective::UK(FlowSet::Finite(lines)) => lines
                .iter()
                .map(|g| s.busemann(z, &foot(s, g), &g.plus))
                .fold(f64::NEG_INFINITY, f64::max),
            ConvexObjective::UK(FlowSet::Conjugated(fan)) => fan.sup(|y, e| s.busemann(z, y, e)).1,
            ConvexObjective::VisualDistance(t) => t.distance(z),
            ConvexObjective::Single(term) => term.log_value(s, z),
        }
    }

    pub fn value(&self, s: &S, z: &S::Point) -> f64 {
        libm::exp(self.log_value(s, z))
    }

    /// Terms whose log-value at `z` is within `band` of the maximum, best
    /// first. Continuous families contribute their local maxima.
    pub fn near_terms(&self, s: &S, z: &S::Point, band: f64) -> Vec<(f64, Term<S>)> {
        let mut out: Vec<(f64, Term<S>)> = match self {
            ConvexObjective::UK(FlowSet::Conjugated(fan)) => fan
                .peaks(|y, e| s.busemann(z, y, e), band)
                .into_iter()
                .filter_map(|(u, v)| fan.element_data(u).ok().map(|(y, xi)| (v, Term::Horo { y, xi, lw: 0.0 })))
                .collect(),
            ConvexObjective::VisualDistance(t) => t
                .peaks(z, band)
                .into_iter()
                .map(|(u, v)| {
                    let (xi, _) = t.eval_at(z, u);
                    let lw = v - s.busemann(z, t.metric.base(), &xi);
                    (v, Term::Horo { y: t.metric.base().clone(), xi, lw })
                })
                .collect(),
            _ => self.finite_terms(s).into_iter().map(|t| (t.log_value(s, z), t)).collect(),
        };
        let best = out.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
        out.retain(|t| t.0 >= best - band);
        out.sort_by(|a, b| b.0.total_cmp(&a.0));
        out
    }

    /// All terms: every term of a finite supremum, and the grid samples of
    /// a continuous family.
    pub fn finite_terms(&self, s: &S) -> Vec<Term<S>> {
        match self {
            ConvexObjective::Circumradius { points, lw } => {
                points.iter().map(|p| Term::Cosh { p: p.clone(), lw: *lw }).collect()
            }
            ConvexObjective::UK(FlowSet::Finite(lines)) => lines
                .iter()
                .map(|g| Term::Horo { y: foot(s, g), xi: g.plus.clone(), lw: 0.0 })
                .collect(),
            ConvexObjective::UK(FlowSet::Conjugated(fan)) => fan
                .samples()
                .iter()
                .map(|(y, xi)| Term::Horo { y: y.clone(), xi: xi.clone(), lw: 0.0 })
                .collect(),
            ConvexObjective::VisualDistance(t) => t
                .grid
                .points()
                .iter()
                .zip(&t.lambda)
                .map(|(xi, &lw)| Term::Horo { y: t.metric.base().clone(), xi: xi.clone(), lw })
                .collect(),
            ConvexObjective::Single(term) => alloc::vec![term.clone()],
        }
    }

    /// Cheap starting points: the term anchors (thinned) and, for visual
    /// targets and fans, their base points.
    fn start_candidates(&self, s: &S) -> Vec<S::Point> {
        let mut out: Vec<S::Point> = Vec::new();
        match self {
            ConvexObjective::UK(FlowSet::Conjugated(fan)) => out.push(fan.center().clone()),
            ConvexObjective::VisualDistance(t) => out.push(t.metric.base().clone()),
            _ => {}
        }
        let terms = self.finite_terms(s);
        let stride = (terms.len() / 16).max(1);
        for t in terms.iter().step_by(stride) {
            let p = match t {
                Term::Cosh { p, .. } => p,
                Term::Horo { y, .. } => y,
            };
            out.push(p.clone());
        }
        out
    }

    /// The best of the cheap starting points.
    pub fn default_start(&self, s: &S) -> S::Point {
        let mut best: Option<(f64, S::Point)> = None;
        for p in self.start_candidates(s) {
            let v = self.log_value(s, &p);
            if best.as_ref().map_or(true, |b| v < b.0) {
                best = Some((v, p));
            }
        }
        best.map(|b| b.1).unwrap_or_else(|| s.base_point())
    }
}

/// Spaces with a minimizer for [`ConvexObjective`].
pub trait ConvexSearch: ModelSpace {
    fn minimize(
        &self,
        obj: &ConvexObjective<Self>,
        start: &Self::Point,
        opts: &MinimizerOptions,
    ) -> Result<MinimizerResult<Self::Point>>;
}

/// Compares `log f` at `z` with its value at [`CERTIFICATE_PROBES`] points
/// at distance `radius`. Returns the smallest gap.
fn certificate<S: ModelSpace, F: Fn(&S::Point) -> f64>(s: &S, f: &F, z: &S::Point, fz: f64, radius: f64) -> f64 {
    (0..CERTIFICATE_PROBES)
        .map(|i| {
            let dir = s.fan_line(z, (i as f64 + 0.5) / CERTIFICATE_PROBES as f64).plus;
            f(&s.ray_point(z, &dir, radius)) - fz
        })
        .fold(f64::INFINITY, f64::min)
}

fn certificate_slack(fz: f64) -> f64 {
    8.0 * f64::EPSILON * libm::fabs(fz).max(1.0)
}

/// `-⟨·, N⟩` restricted to the hyperboloid is a monotone function of the
/// term; the curvature `-1` normalization makes the exponent linear.
fn lorentz_normal(disk: &Disk, term: &Term<Disk>) -> Lorentz3 {
    match term {
        Term::Cosh { p, .. } => p.hyperboloid(),
        Term::Horo { y, xi, lw } => {
            let n = xi.null_vector();
            let c = -y.hyperboloid().dot(&n);
            n.scaled(libm::exp(disk.k() * lw) / c)
        }
    }
}

impl Disk {
    /// Replaces `z` by the best minimax point of small subsets of the
    /// near-active terms, while that improves the objective.
    fn polish<F: Fn(&DiskPoint) -> f64>(&self, obj: &ConvexObjective<Disk>, f: &F, z: &mut DiskPoint, fz: &mut f64) -> bool {
        let mut improved = false;
        for _ in 0..8 {
            let terms = self.near_terms_limited(obj, z);
            let normals: Vec<Lorentz3> = terms.iter().map(|t| lorentz_normal(self, &t.1)).collect();
            let mut best: Option<(f64, DiskPoint)> = None;
            for subset in small_subsets(normals.len()) {
                let sel: Vec<Lorentz3> = subset.iter().map(|&i| normals[i]).collect();
                let Some(v) = equalizing_point(&sel) else { continue };
                let p = DiskPoint::from_hyperboloid(&v);
                if self.check_point(&p).is_err() {
                    continue;
                }
                let fp = f(&p);
                if fp < best.as_ref().map_or(*fz, |b| b.0) {
                    best = Some((fp, p));
                }
            }
            match best {
                Some((fp, p)) if fp < *fz - 0.25 * certificate_slack(*fz) => {
                    *z = p;
                    *fz = fp;
                    improved = true;
                }
                _ => break,
            }
        }
        improved
    }

    fn near_terms_limited(&self, obj: &ConvexObjective<Disk>, z: &DiskPoint) -> Vec<(f64, Term<Disk>)> {
        let mut terms = obj.near_terms(self, z, POLISH_BAND);
        terms.truncate(POLISH_TERMS);
        terms
    }
}

impl ConvexSearch for Disk {
    fn minimize(
        &self,
        obj: &ConvexObjective<Disk>,
        start: &DiskPoint,
        opts: &MinimizerOptions,
    ) -> Result<MinimizerResult<DiskPoint>> {
        self.check_point(start)?;
        let f = |p: &DiskPoint| obj.log_value(self, p);
        let mut frame = self.moving_origin_to(start);
        let mut fz = f(start);
        if !fz.is_finite() {
            return Err(Error::Numerical(format!("objective is {fz} at the start point")));
        }
        let mut dirs = [0.0, FRAC_PI_2];
        let mut step = 0.5;
        let mut sweeps = 0;
        let mut fallback_done = false;
        loop {
            while sweeps < opts.max_sweeps {
                sweeps += 1;
                let start_frame = frame;
                let f_start = fz;
                let line_search = |a: f64, frame: &mut crate::disk::DiskIso, fz: &mut f64| {
                    let (c, sn) = (libm::cos(a), libm::sin(a));
                    let (t, v) = convex_line_min(|t| f(&self.chart_point(frame, [t * c, t * sn])), step, opts.line_tol);
                    if v < *fz {
                        *frame = self.compose(frame, &self.translation(t, a));
                        *fz = v;
                    }
                };
                for a in dirs {
                    line_search(a, &mut frame, &mut fz);
                }
                let w = self.chart_coords(&start_frame, &self.apply(&frame, &DiskPoint::ORIGIN));
                let r = libm::hypot(w[0], w[1]);
                if r > opts.line_tol {
                    // Powell's step: search along the net displacement, then
                    // keep it and its normal as the next pair of directions
                    let a = libm::atan2(w[1], w[0]);
                    line_search(a, &mut frame, &mut fz);
                    dirs = [a, a + FRAC_PI_2];
                }
                step = r.clamp(10.0 * opts.line_tol, 0.5);
                if r < 1e-2 {
                    let mut z = self.apply(&frame, &DiskPoint::ORIGIN);
                    if self.polish(obj, &f, &mut z, &mut fz) {
                        frame = self.moving_origin_to(&z);
                        step = step.min(1e-3);
                        continue;
                    }
                }
                if r < 1e-2 * opts.position_tol && f_start - fz <= opts.value_tol {
                    break;
                }
            }
            let z = self.apply(&frame, &DiskPoint::ORIGIN);
            let gap = certificate(self, &f, &z, fz, opts.position_tol);
            let certified = gap >= -certificate_slack(fz);
            if certified || fallback_done {
                return Ok(MinimizerResult {
                    argmin: z,
                    value: libm::exp(fz),
                    tolerance: opts.position_tol,
                    iterations: sweeps,
                    certified,
                    certificate_gap: gap,
                });
            }
            // the sweeps stalled on a ridge: simplex descent in the chart
            fallback_done = true;
            let chart = self.moving_origin_to(&z);
            let (v, fv) = nelder_mead(
                |v| f(&self.chart_point(&chart, v)),
                [0.0, 0.0],
                1e-3,
                1e-3 * opts.position_tol,
                4000,
            );
            if fv < fz {
                frame = self.moving_origin_to(&self.chart_point(&chart, v));
                fz = fv;
            }
            step = 1e-4;
            sweeps = sweeps.min(opts.max_sweeps.saturating_sub(20));
        }
    }
}

/// Log-value of a term along which everything is piecewise linear on a
/// tree: distance for `Cosh` terms, Busemann for `Horo` terms. Distances
/// replace `log cosh`, which is monotone, so the minimax point is the same
/// when all `Cosh` weights agree.
fn tree_linear(t: &Tree, term: &Term<Tree>, z: &TreePoint) -> f64 {
    match term {
        Term::Cosh { p, .. } => ratio_to_f64(&t.distance_exact(z, p)),
        Term::Horo { y, xi, lw } => lw + ratio_to_f64(&t.busemann_exact(z, y, xi)),
    }
}

/// Distance from `z` to the next vertex toward `dir`.
fn to_vertex(t: &Tree, z: &TreePoint, dir: &crate::tree::TreeEnd) -> Q {
    match z.edge() {
        None => t.edge_length(),
        Some((_, off)) => {
            let p = t.ray_point_exact(z, dir, off);
            if p.is_vertex() && p.vertex() == z.vertex() {
                off
            } else {
                t.edge_length() - off
            }
        }
    }
}

/// Slope (`±1`) of a term along `dir` just after leaving `z`.
fn tree_slope(t: &Tree, term: &Term<Tree>, z: &TreePoint, dir: &crate::tree::TreeEnd, tv: Q) -> i8 {
    let two = Q::from_integer(2);
    match term {
        Term::Cosh { p, .. } => {
            let d = t.distance_exact(z, p);
            if d == Q::from_integer(0) {
                return 1;
            }
            let eps = (if tv < d { tv } else { d }) / two;
            if t.distance_exact(&t.ray_point_exact(z, dir, eps), p) < d {
                -1
            } else {
                1
            }
        }
        Term::Horo { y, xi, .. } => {
            let eps = tv / two;
            let b0 = t.busemann_exact(z, y, xi);
            if t.busemann_exact(&t.ray_point_exact(z, dir, eps), y, xi) < b0 {
                -1
            } else {
                1
            }
        }
    }
}

impl ConvexSearch for Tree {
    fn minimize(
        &self,
        obj: &ConvexObjective<Tree>,
        start: &TreePoint,
        opts: &MinimizerOptions,
    ) -> Result<MinimizerResult<TreePoint>> {
        self.check_point(start)?;
        let terms = obj.finite_terms(self);
        if terms.is_empty() {
            return Err(Error::Argument("objective has no terms".into()));
        }
        let mut z = start.clone();
        let mut steps = 0usize;
        'walk: loop {
            steps += 1;
            if steps > 100_000 {
                return Err(Error::Numerical("tree descent did not terminate".into()));
            }
            let vals: Vec<f64> = terms.iter().map(|term| tree_linear(self, term, &z)).collect();
            let vmax = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let tol = 1e-12 * libm::fabs(vmax).max(1.0);
            let active: Vec<bool> = vals.iter().map(|&v| v >= vmax - tol).collect();
            let branches = if z.is_vertex() { self.valence() as usize } else { 2 };
            for j in 0..branches {
                let dir = self.fan_line(&z, (j as f64 + 0.5) / branches as f64).plus;
                let tv = to_vertex(self, &z, &dir);
                let slopes: Vec<i8> = terms.iter().map(|term| tree_slope(self, term, &z, &dir, tv)).collect();
                if (0..terms.len()).any(|i| active[i] && slopes[i] > 0) {
                    continue;
                }
                let mut step = tv;
                for (i, term) in terms.iter().enumerate() {
                    if let Term::Cosh { p, .. } = term {
                        if slopes[i] < 0 {
                            step = step.min(self.distance_exact(&z, p));
                        }
                    }
                    if slopes[i] > 0 && !active[i] {
                        let cross = ratio_from_f64(0.5 * (vmax - vals[i]));
                        if cross > Q::from_integer(0) {
                            step = step.min(cross);
                        }
                    }
                }
                z = self.ray_point_exact(&z, &dir, step);
                continue 'walk;
            }
            break;
        }
        let f = |p: &TreePoint| obj.log_value(self, p);
        let fz = f(&z);
        let gap = certificate(self, &f, &z, fz, opts.position_tol);
        Ok(MinimizerResult {
            argmin: z,
            value: libm::exp(fz),
            tolerance: opts.position_tol,
            iterations: steps,
            certified: gap >= -certificate_slack(fz),
            certificate_gap: gap,
        })
    }
}

/// The circumcenter and circumradius of a finite set.
pub fn circumcenter<S: ConvexSearch>(s: &S, points: &[S::Point]) -> Result<(S::Point, f64)> {
    let r = circumcenter_result(s, points)?;
    let radius = points.iter().map(|p| s.distance(&r.argmin, p)).fold(0.0, f64::max);
    Ok((r.argmin, radius))
}

/// [`circumcenter`] with the minimizer diagnostics.
pub fn circumcenter_result<S: ConvexSearch>(s: &S, points: &[S::Point]) -> Result<MinimizerResult<S::Point>> {
    if points.is_empty() {
        return Err(Error::Argument("circumcenter of an empty set".into()));
    }
    for p in points {
        s.check_point(p)?;
    }
    let obj = ConvexObjective::Circumradius { points: points.to_vec(), lw: 0.0 };
    s.minimize(&obj, &obj.default_start(s), &MinimizerOptions::default())
}

pub fn u_k_eval<S: ModelSpace>(s: &S, k: &FlowSet<S>, z: &S::Point) -> f64 {
    ConvexObjective::UK(k.clone()).value(s, z)
}

/// The minimizer of `u_K`.
pub fn asymptotic_circumcenter<S: ConvexSearch>(s: &S, k: &FlowSet<S>) -> Result<MinimizerResult<S::Point>> {
    let obj = uk_objective(s, k)?;
    s.minimize(&obj, &obj.default_start(s), &MinimizerOptions::default())
}

/// [`asymptotic_circumcenter`] from a given start point.
pub fn asymptotic_circumcenter_from<S: ConvexSearch>(
    s: &S,
    k: &FlowSet<S>,
    start: &S::Point,
) -> Result<MinimizerResult<S::Point>> {
    let obj = uk_objective(s, k)?;
    s.minimize(&obj, start, &MinimizerOptions::default())
}

fn uk_objective<S: ModelSpace>(s: &S, k: &FlowSet<S>) -> Result<ConvexObjective<S>> {
    if k.endpoints_singleton(s) {
        return Err(Error::Precondition("p(K) is a single point, so u_K is not proper".into()));
    }
    Ok(ConvexObjective::UK(k.clone()))
}

/// The centre and points at distances `½` and `1` in eight directions.
pub fn probe_ball<S: ModelSpace>(s: &S, c: &S::Point, radius: f64) -> Vec<S::Point> {
    let mut out = alloc::vec![c.clone()];
    for r in [0.5 * radius, radius] {
        for i in 0..8 {
            let dir = s.fan_line(c, (i as f64 + 0.5) / 8.0).plus;
            out.push(s.ray_point(c, &dir, r));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowConvergenceRow<P> {
    pub t: f64,
    /// `c(A_t)` for `A_t = π(φ_t(K))`.
    pub center: P,
    pub radius: f64,
    /// `d(c(A_t), c_∞(K))`.
    pub distance: f64,
    /// `sup |u_t - u_K|` over the radius-one probe ball about `c_∞(K)`.
    pub ut_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowConvergence<P> {
    pub limit: MinimizerResult<P>,
    pub rows: Vec<FlowConvergenceRow<P>>,
}

/// Circumcenters of the flowed foot-point sets against the asymptotic
/// circumcenter.
pub fn circumcenter_flow_convergence<S: ConvexSearch>(
    s: &S,
    lines: &[GeodesicLine<S::End>],
    times: &[f64],
) -> Result<FlowConvergence<S::Point>> {
    if times.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Argument("times must increase".into()));
    }
    let k = FlowSet::finite(lines.to_vec())?;
    let limit = asymptotic_circumcenter(s, &k)?;
    let probes = probe_ball(s, &limit.argmin, 1.0);
    let uk: Vec<f64> = probes.iter().map(|z| u_k_eval(s, &k, z)).collect();
    let mut rows = Vec::with_capacity(times.len());
    let mut prev: Option<S::Point> = None;
    for &t in times {
        let a_t: Vec<S::Point> = lines.iter().map(|g| foot(s, &g.flowed(t))).collect();
        let obj = ConvexObjective::Circumradius { points: a_t.clone(), lw: core::f64::consts::LN_2 - t };
        let start = match &prev {
            Some(p) => p.clone(),
            None => obj.default_start(s),
        };
        let r = s.minimize(&obj, &start, &MinimizerOptions::default())?;
        let radius = a_t.iter().map(|p| s.distance(&r.argmin, p)).fold(0.0, f64::max);
        let ut_error = probes
            .iter()
            .zip(&uk)
            .map(|(z, &u)| libm::fabs(obj.value(s, z) - u))
            .fold(0.0, f64::max);
        rows.push(FlowConvergenceRow {
            t,
            distance: s.distance(&r.argmin, &limit.argmin),
            center: r.argmin.clone(),
            radius,
            ut_error,
        });
        prev = Some(r.argmin);
    }
    Ok(FlowConvergence { limit, rows })
}

/// Worst slack `g(0) - f(0)` of the barrier test along each line, where
/// `g` solves `g'' = g` with `g(±h) = f(±h)`. Negative slack means `f`
/// fails `F(-1)`-convexity at that scale.
pub fn convexity_probe<S: ModelSpace, F: Fn(&S::Point) -> f64>(
    s: &S,
    f: F,
    lines: &[GeodesicLine<S::End>],
    h: f64,
) -> f64 {
    lines
        .iter()
        .map(|g| {
            let fm = f(&s.line_point(g, -h));
            let f0 = f(&s.line_point(g, 0.0));
            let fp = f(&s.line_point(g, h));
            (fm + fp) / (2.0 * libm::cosh(h)) - f0
        })
        .fold(f64::INFINITY, f64::min)
}
