//! The circumcenter extension of a boundary map, its characterization as
//! a nearest visual metric, and the pointwise checks behind the Hölder and
//! quasi-isometry bounds.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::boundary_calculus::busemann_angle;
use crate::circumcenter::{
    asymptotic_circumcenter, ConvexObjective, ConvexSearch, MinimizerOptions, MinimizerResult, VisualTarget,
};
use crate::flow_conjugacy::{FlowSet, MoebiusBoundaryMap};
use crate::moebius_metrics::{MoebiusMetric, SampleGrid};
use crate::optimize::periodic_peaks;
use crate::space::ModelSpace;
use crate::{Error, Result};

/// Default width of the thickened argmax set in the angle certificate.
pub const ARGMAX_THICKENING: f64 = 1e-6;
/// Allowed shortfall below `π/2` in the angle certificate.
pub const ANGLE_SLACK: f64 = 1e-3;

/// `f̂(x)`: the asymptotic circumcenter of `φ_f(T¹_x X)` sampled on `n`
/// fan directions.
pub fn circumcenter_extension<S: ConvexSearch>(
    f: &MoebiusBoundaryMap<S>,
    x: &S::Point,
    n: usize,
) -> Result<S::Point> {
    Ok(circumcenter_extension_result(f, x, n)?.argmin)
}

pub fn circumcenter_extension_result<S: ConvexSearch>(
    f: &MoebiusBoundaryMap<S>,
    x: &S::Point,
    n: usize,
) -> Result<MinimizerResult<S::Point>> {
    if n < 16 {
        return Err(Error::Argument(alloc::format!("fan size {n} is below 16")));
    }
    let k = FlowSet::conjugated(f, x, n)?;
    asymptotic_circumcenter(f.space(), &k)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Projection<P> {
    pub point: P,
    /// `d_M(ρ, ρ_z)` at the minimizer.
    pub distance: f64,
    pub result: MinimizerResult<P>,
}

/// The point `z` minimizing `d_M(ρ, ρ_z)`.
pub fn nearest_visual_projection<S: ConvexSearch>(
    rho: &MoebiusMetric<S>,
    grid: &SampleGrid<S::End>,
) -> Result<Projection<S::Point>> {
    nearest_visual_projection_from(rho, grid, rho.base())
}

pub fn nearest_visual_projection_from<S: ConvexSearch>(
    rho: &MoebiusMetric<S>,
    grid: &SampleGrid<S::End>,
    start: &S::Point,
) -> Result<Projection<S::Point>> {
    let obj = ConvexObjective::VisualDistance(VisualTarget::new(rho, grid)?);
    let s = rho.space();
    let result = s.minimize(&obj, start, &MinimizerOptions::default())?;
    Ok(Projection { point: result.argmin.clone(), distance: libm::log(result.value).max(0.0), result })
}

/// `log (dρ/dρ_z)(η) = λ(η) + B(z, o, η)`.
fn log_density_at<S: ModelSpace>(rho: &MoebiusMetric<S>, z: &S::Point, eta: &S::End) -> f64 {
    rho.log_density(eta) + rho.space().busemann(z, rho.base(), eta)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AngleCertificate<E> {
    /// `min_y max_{η ∈ A} ∠ y x* η` over the probes.
    pub worst_angle: f64,
    pub per_probe: Vec<f64>,
    /// The thickened argmax set `A` of `dρ/dρ_{x*}`.
    pub argmax: Vec<E>,
    pub pass: bool,
}

/// Checks that every probe `y` sees some `η` in the thickened argmax set
/// of `dρ/dρ_{x*}` at comparison angle `∠^{(-1)} y x* η ≥ π/2 - slack`.
pub fn angle_certificate<S: ModelSpace>(
    rho: &MoebiusMetric<S>,
    x_star: &S::Point,
    probes: &[S::Point],
    grid: &SampleGrid<S::End>,
    thickening: f64,
) -> Result<AngleCertificate<S::End>> {
    rho.require_validated()?;
    let s = rho.space();
    let n = grid.len();
    let vals: Vec<f64> = grid.points().iter().map(|e| log_density_at(rho, x_star, e)).collect();
    let refine = if S::SMOOTH_BOUNDARY { grid.refine().max(8) } else { 0 };
    let eval = |u: f64| {
        let j = libm::round(u * n as f64);
        if libm::fabs(u * n as f64 - j) < 1e-12 {
            vals[(j as usize) % n]
        } else {
            log_density_at(rho, x_star, &s.end_at(u))
        }
    };
    let peaks = periodic_peaks(eval, n, refine, thickening);
    let best = peaks.first().map(|p| p.1).unwrap_or(f64::NAN);
    let mut argmax: Vec<S::End> = peaks.iter().map(|p| s.end_at(p.0)).collect();
    for (e, &v) in grid.points().iter().zip(&vals) {
        if v >= best - thickening {
            argmax.push(e.clone());
        }
    }
    let mut per_probe = Vec::with_capacity(probes.len());
    for y in probes {
        if s.distance(x_star, y) == 0.0 {
            per_probe.push(core::f64::consts::PI);
            continue;
        }
        let mut m = f64::NEG_INFINITY;
        for eta in &argmax {
            m = m.max(busemann_angle(s, 1.0, x_star, y, eta)?);
        }
        per_probe.push(m);
    }
    let worst_angle = per_probe.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(AngleCertificate { worst_angle, per_probe, argmax, pass: worst_angle >= FRAC_PI_2 - ANGLE_SLACK })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderRecord {
    pub distance: f64,
    pub image_distance: f64,
    /// `e^{d(x,y)} - cosh d(f̂x, f̂y)`.
    pub cosh_slack: f64,
    /// `2 d(x,y)^{1/2} - d(f̂x, f̂y)`.
    pub sqrt_slack: f64,
}

/// The two local Hölder inequalities for one pair and its images.
pub fn holder_record<S: ModelSpace>(s: &S, x: &S::Point, y: &S::Point, fx: &S::Point, fy: &S::Point) -> HolderRecord {
    let d = s.distance(x, y);
    let di = s.distance(fx, fy);
    HolderRecord {
        distance: d,
        image_distance: di,
        cosh_slack: libm::exp(d) - libm::cosh(di),
        sqrt_slack: 2.0 * libm::sqrt(d) - di,
    }
}

/// `|d(f̂x, f̂y) - d(x, y)|`.
pub fn qi_defect<S: ModelSpace>(s: &S, x: &S::Point, y: &S::Point, fx: &S::Point, fy: &S::Point) -> f64 {
    libm::fabs(s.distance(fx, fy) - s.distance(x, y))
}
