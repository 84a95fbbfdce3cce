//! The abstract geodesic flow space, Moebius boundary maps and the flow
//! conjugacy they induce.
//!
//! A flow element is a [`GeodesicLine`]: flowing shifts its offset and
//! flipping swaps its ends, both exactly. A Moebius map `f` sends the line
//! `(ξ, η)` with foot `x` to the line `(fξ, fη)` with the foot `y` at which
//! `df_{ρ_x, ρ_y}(η) = 1`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::disk::{wrap_angle, Disk, DiskEnd, DiskIso};
use crate::optimize::periodic_peaks;
use crate::space::{foot, GeodesicLine, ModelSpace};
use crate::{Error, Result};

/// Tolerance of the round trip `f(f⁻¹(ξ)) = ξ`, in `ρ_o`.
pub const INVERSE_TOL: f64 = 1e-9;
/// Relative tolerance of cross-ratio preservation.
pub const CROSS_RATIO_TOL: f64 = 1e-7;

pub type EndFn<E> = Arc<dyn Fn(&E) -> E + Send + Sync>;

/// Where a boundary map came from.
#[derive(Clone, Debug)]
pub enum MapKind<I> {
    Identity,
    /// Boundary map of an isometry.
    Isometry(I),
    Custom(String),
}

/// A boundary map `∂X → ∂X` given by callables, usable only once
/// [`MoebiusBoundaryMap::validate`] has passed.
#[derive(Clone)]
pub struct MoebiusBoundaryMap<S: ModelSpace> {
    space: S,
    forward: EndFn<S::End>,
    inverse: EndFn<S::End>,
    kind: MapKind<S::Iso>,
    validated: bool,
}

impl<S: ModelSpace> fmt::Debug for MoebiusBoundaryMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MoebiusBoundaryMap")
            .field("kind", &self.kind)
            .field("validated", &self.validated)
            .finish()
    }
}

/// Outcome of [`MoebiusBoundaryMap::validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct MapValidation {
    /// Largest `ρ_o(f(f⁻¹ξ), ξ)` and `ρ_o(f⁻¹(fξ), ξ)` on the grid.
    pub inverse_residual: f64,
    /// Largest `|[fξ fξ′ fη fη′] / [ξ ξ′ η η′] - 1|`.
    pub cross_ratio_residual: f64,
    pub quadruples: usize,
    pub pass: bool,
}

impl<S: ModelSpace> MoebiusBoundaryMap<S> {
    pub fn identity(space: &S) -> Self {
        MoebiusBoundaryMap {
            space: space.clone(),
            forward: Arc::new(|e: &S::End| e.clone()),
            inverse: Arc::new(|e: &S::End| e.clone()),
            kind: MapKind::Identity,
            validated: false,
        }
    }

    pub fn from_isometry(space: &S, g: &S::Iso) -> Self {
        let (s1, s2) = (space.clone(), space.clone());
        let (g1, g2) = (g.clone(), space.invert(g));
        MoebiusBoundaryMap {
            space: space.clone(),
            forward: Arc::new(move |e: &S::End| s1.apply_end(&g1, e)),
            inverse: Arc::new(move |e: &S::End| s2.apply_end(&g2, e)),
            kind: MapKind::Isometry(g.clone()),
            validated: false,
        }
    }

    pub fn custom(space: &S, forward: EndFn<S::End>, inverse: EndFn<S::End>, label: &str) -> Self {
        MoebiusBoundaryMap {
            space: space.clone(),
            forward,
            inverse,
            kind: MapKind::Custom(label.into()),
            validated: false,
        }
    }

    /// `self ∘ other`. Validated when both factors are.
    pub fn compose(&self, other: &Self) -> Self {
        let kind = match (&self.kind, &other.kind) {
            (MapKind::Identity, k) | (k, MapKind::Identity) => k.clone(),
            (MapKind::Isometry(g), MapKind::Isometry(h)) => MapKind::Isometry(self.space.compose(g, h)),
            _ => MapKind::Custom("composition".into()),
        };
        let (f1, g1) = (self.forward.clone(), other.forward.clone());
        let (f2, g2) = (self.inverse.clone(), other.inverse.clone());
        MoebiusBoundaryMap {
            space: self.space.clone(),
            forward: Arc::new(move |e: &S::End| f1(&g1(e))),
            inverse: Arc::new(move |e: &S::End| g2(&f2(e))),
            kind,
            validated: self.validated && other.validated,
        }
    }

    /// The inverse map.
    pub fn inverse_map(&self) -> Self {
        let kind = match &self.kind {
            MapKind::Isometry(g) => MapKind::Isometry(self.space.invert(g)),
            MapKind::Identity => MapKind::Identity,
            MapKind::Custom(l) => MapKind::Custom(format!("inverse of {l}")),
        };
        MoebiusBoundaryMap {
            space: self.space.clone(),
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
            kind,
            validated: self.validated,
        }
    }

    pub fn space(&self) -> &S {
        &self.space
    }

    pub fn kind(&self) -> &MapKind<S::Iso> {
        &self.kind
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// Fails unless the map has passed validation.
    pub fn require_validated(&self) -> Result<()> {
        if self.validated {
            Ok(())
        } else {
            Err(Error::Unvalidated(format!("boundary map ({:?})", self.kind)))
        }
    }

    /// `f(ξ)`, without the validation check.
    pub fn apply(&self, xi: &S::End) -> S::End {
        (self.forward)(xi)
    }

    /// `f⁻¹(ξ)`, without the validation check.
    pub fn apply_inverse(&self, xi: &S::End) -> S::End {
        (self.inverse)(xi)
    }

    /// Checks the inverse on `grid` and cross-ratio preservation on `quads`
    /// (cross-ratios taken in the visual metric of the base point). Marks
    /// the map validated when both pass.
    pub fn validate(&mut self, grid: &[S::End], quads: &[[S::End; 4]]) -> MapValidation {
        let s = &self.space;
        let o = s.base_point();
        let mut inverse_residual: f64 = 0.0;
        for xi in grid {
            let a = s.visual_metric(&o, &self.apply(&self.apply_inverse(xi)), xi);
            let b = s.visual_metric(&o, &self.apply_inverse(&self.apply(xi)), xi);
            inverse_residual = inverse_residual.max(a).max(b);
        }
        let mut cross_ratio_residual: f64 = 0.0;
        for q in quads {
            let img = q.clone().map(|e| self.apply(&e));
            let before = log_cross_ratio(s, &o, q);
            let after = log_cross_ratio(s, &o, &img);
            let r = libm::fabs(libm::expm1(after - before));
            // NaN (a collapsed quadruple) counts as a failure
            cross_ratio_residual = if r.is_nan() { f64::INFINITY } else { cross_ratio_residual.max(r) };
        }
        let pass = inverse_residual <= INVERSE_TOL && cross_ratio_residual <= CROSS_RATIO_TOL;
        self.validated = pass;
        MapValidation { inverse_residual, cross_ratio_residual, quadruples: quads.len(), pass }
    }

    /// Validates on the standard grid of `n` ends and `quads` Weyl quadruples.
    pub fn validate_standard(&mut self, n: usize, quads: usize) -> MapValidation {
        let grid = crate::space::boundary_grid(&self.space, n);
        let q = weyl_quadruples(&self.space, quads);
        self.validate(&grid, &q)
    }
}

impl MoebiusBoundaryMap<Disk> {
    /// Negative control: `θ ↦ g(θ + ε sin 2θ)`, a diffeomorphism of the
    /// circle for `|ε| < ½` that preserves no cross-ratios unless `ε = 0`.
    pub fn corrupted(disk: &Disk, g: &DiskIso, eps: f64) -> Result<Self> {
        if !(libm::fabs(eps) < 0.5) {
            return Err(Error::Argument(format!("perturbation {eps} must be below 1/2 in size")));
        }
        let iso = MoebiusBoundaryMap::from_isometry(disk, g);
        let warp = MoebiusBoundaryMap::custom(
            disk,
            Arc::new(move |e: &DiskEnd| {
                let t = e.angle();
                DiskEnd::new(t + eps * libm::sin(2.0 * t))
            }),
            Arc::new(move |e: &DiskEnd| DiskEnd::new(unwarp(e.angle(), eps))),
            "warp",
        );
        let mut m = iso.compose(&warp);
        m.kind = MapKind::Custom(format!("isometry after the warp θ + {eps} sin 2θ"));
        Ok(m)
    }
}

/// Solves `t + ε sin 2t = φ` by Newton's method.
fn unwarp(phi: f64, eps: f64) -> f64 {
    let mut t = phi;
    for _ in 0..60 {
        let step = (t + eps * libm::sin(2.0 * t) - phi) / (1.0 + 2.0 * eps * libm::cos(2.0 * t));
        t -= step;
        if libm::fabs(step) < 1e-16 {
            break;
        }
    }
    wrap_angle(t)
}

fn log_cross_ratio<S: ModelSpace>(s: &S, o: &S::Point, q: &[S::End; 4]) -> f64 {
    let r = |a: &S::End, b: &S::End| libm::log(s.visual_metric(o, a, b));
    r(&q[0], &q[2]) + r(&q[1], &q[3]) - r(&q[0], &q[3]) - r(&q[1], &q[2])
}

/// `n` quadruples of pairwise distinct ends from a Weyl sequence.
pub fn weyl_quadruples<S: ModelSpace>(s: &S, n: usize) -> Vec<[S::End; 4]> {
    const STEPS: [f64; 4] = [
        0.414_213_562_373_095_1,
        0.732_050_807_568_877_2,
        0.236_067_977_499_789_8,
        0.645_751_311_064_590_6,
    ];
    let mut out = Vec::with_capacity(n);
    let mut j = 1u64;
    while out.len() < n && j < 64 * n as u64 + 64 {
        let q = STEPS.map(|a| {
            let u = j as f64 * a;
            s.end_at(u - libm::floor(u))
        });
        j += 1;
        let distinct = (0..4).all(|a| (a + 1..4).all(|b| !s.same_end(&q[a], &q[b])));
        if distinct {
            out.push(q);
        }
    }
    out
}

/// `φ_t(γ)`.
pub fn flow<E: Clone>(gamma: &GeodesicLine<E>, t: f64) -> GeodesicLine<E> {
    gamma.flowed(t)
}

/// `γ̄`, the same geodesic run backwards.
pub fn flip<E: Clone>(gamma: &GeodesicLine<E>) -> GeodesicLine<E> {
    gamma.flipped()
}

/// `df_{ρ_x, ρ_y}(η) = lim_{ζ→η} ρ_y(fη, fζ) / ρ_x(η, ζ)`.
pub fn map_derivative<S: ModelSpace>(
    f: &MoebiusBoundaryMap<S>,
    x: &S::Point,
    y: &S::Point,
    eta: &S::End,
) -> Result<f64> {
    f.require_validated()?;
    Ok(libm::exp(log_map_derivative(f, x, y, eta)))
}

/// Logarithm of [`map_derivative`], from the geometric mean-value identity
/// `ρ_y(fa, fb)² = df(a) df(b) ρ_x(a, b)²` applied to `η` and the two
/// reference ends farthest from it.
pub(crate) fn log_map_derivative<S: ModelSpace>(
    f: &MoebiusBoundaryMap<S>,
    x: &S::Point,
    y: &S::Point,
    eta: &S::End,
) -> f64 {
    let s = &f.space;
    let mut refs: Vec<(f64, S::End)> = s
        .reference_ends()
        .into_iter()
        .map(|r| (s.visual_metric(x, eta, &r), r))
        .collect();
    refs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (a, b) = (&refs[0].1, &refs[1].1);
    let (fe, fa, fb) = (f.apply(eta), f.apply(a), f.apply(b));
    let ly = |p: &S::End, q: &S::End| libm::log(s.visual_metric(y, p, q));
    let lx = |p: &S::End, q: &S::End| libm::log(s.visual_metric(x, p, q));
    ly(&fe, &fa) + ly(&fe, &fb) - ly(&fa, &fb) - lx(eta, a) - lx(eta, b) + lx(a, b)
}

/// `φ_f(γ)`: the line `(fγ(-∞), fγ(+∞))` with its foot at the unique `y`
/// where `df_{ρ_x, ρ_y}(γ(+∞)) = 1`, `x = π(γ)`.
pub fn conjugacy<S: ModelSpace>(f: &MoebiusBoundaryMap<S>, gamma: &GeodesicLine<S::End>) -> Result<GeodesicLine<S::End>> {
    f.require_validated()?;
    conjugate_unchecked(f, gamma)
}

pub(crate) fn conjugate_unchecked<S: ModelSpace>(
    f: &MoebiusBoundaryMap<S>,
    gamma: &GeodesicLine<S::End>,
) -> Result<GeodesicLine<S::End>> {
    let s = &f.space;
    let x = foot(s, gamma);
    let (fm, fp) = (f.apply(&gamma.minus), f.apply(&gamma.plus));
    let mut line = s.line(&fm, &fp)?;
    let y0 = foot(s, &line);
    // Both x and y0 see their line's ends at visual distance 1, so the
    // mean-value identity gives df(η) df(ξ) = 1 and one reference end ζ
    // suffices: df(η)² = df(η)/df(ξ) = [ρ_y0(fη, fζ) ρ_x(ξ, ζ) / (ρ_x(η, ζ) ρ_y0(fξ, fζ))]².
    // The choice of ζ is symmetric in the two ends, which keeps the
    // construction exactly flip-equivariant.
    let zeta = s
        .reference_ends()
        .into_iter()
        .map(|r| {
            let w = s.visual_metric(&x, &gamma.plus, &r).min(s.visual_metric(&x, &gamma.minus, &r));
            (w, r)
        })
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|p| p.1)
        .ok_or_else(|| Error::Argument("no reference ends".into()))?;
    let fz = f.apply(&zeta);
    let ly = |p: &S::End| libm::log(s.visual_metric(&y0, p, &fz));
    let lx = |p: &S::End| libm::log(s.visual_metric(&x, p, &zeta));
    let log_d0 = (ly(&fp) - lx(&gamma.plus)) - (ly(&fm) - lx(&gamma.minus));
    // moving the foot by t toward fη multiplies df(η) by e^t
    line.offset = -log_d0;
    Ok(line)
}

/// A set `K` of flow elements.
#[derive(Clone, Debug)]
pub enum FlowSet<S: ModelSpace> {
    Finite(Vec<GeodesicLine<S::End>>),
    /// `φ_f(T¹_x X)`, the conjugated unit tangent circle at `x`, sampled
    /// on `n` fan directions and refined between them.
    Conjugated(ConjugatedFan<S>),
}

#[derive(Clone, Debug)]
pub struct ConjugatedFan<S: ModelSpace> {
    map: MoebiusBoundaryMap<S>,
    x: S::Point,
    n: usize,
    samples: Vec<(S::Point, S::End)>,
}

impl<S: ModelSpace> ConjugatedFan<S> {
    pub fn new(f: &MoebiusBoundaryMap<S>, x: &S::Point, n: usize) -> Result<Self> {
        f.require_validated()?;
        let s = &f.space;
        let (lo, hi) = s.fan_bounds(x);
        if n < lo.max(16) || n > hi {
            return Err(Error::Argument(format!("fan size {n} outside [{}, {hi}]", lo.max(16))));
        }
        let mut samples = Vec::with_capacity(n);
        for j in 0..n {
            samples.push(Self::element_at(f, x, j as f64 / n as f64)?);
        }
        Ok(ConjugatedFan { map: f.clone(), x: x.clone(), n, samples })
    }

    fn element_at(f: &MoebiusBoundaryMap<S>, x: &S::Point, u: f64) -> Result<(S::Point, S::End)> {
        let s = &f.space;
        let g = conjugate_unchecked(f, &s.fan_line(x, u))?;
        Ok((foot(s, &g), g.plus))
    }

    pub fn map(&self) -> &MoebiusBoundaryMap<S> {
        &self.map
    }

    pub fn center(&self) -> &S::Point {
        &self.x
    }

    pub fn fan_size(&self) -> usize {
        self.n
    }

    /// `φ_f` of the fan line in direction `u`.
    pub fn element(&self, u: f64) -> Result<GeodesicLine<S::End>> {
        conjugate_unchecked(&self.map, &self.map.space.fan_line(&self.x, u))
    }

    /// The `n` sampled elements.
    pub fn elements(&self) -> Result<Vec<GeodesicLine<S::End>>> {
        (0..self.n).map(|j| self.element(j as f64 / self.n as f64)).collect()
    }

    /// The cached `(π(γ_u), γ_u(+∞))` at the grid directions `u = j/n`.
    pub fn samples(&self) -> &[(S::Point, S::End)] {
        &self.samples
    }

    /// `sup_u h(π(γ_u), γ_u(+∞))` over the continuous fan, from the
    /// sampled grid plus local refinement where the boundary is smooth.
    pub fn sup<H: Fn(&S::Point, &S::End) -> f64>(&self, h: H) -> (f64, f64) {
        self.peaks(h, 0.0).first().copied().unwrap_or((0.0, f64::NAN))
    }

    /// Local maxima of `u ↦ h(π(γ_u), γ_u(+∞))` within `band` of the
    /// supremum, best first.
    pub fn peaks<H: Fn(&S::Point, &S::End) -> f64>(&self, h: H, band: f64) -> Vec<(f64, f64)> {
        let refine = if S::SMOOTH_BOUNDARY { 4 } else { 0 };
        let eval = |u: f64| {
            let j = libm::round(u * self.n as f64);
            if libm::fabs(u * self.n as f64 - j) < 1e-12 {
                let (p, e) = &self.samples[(j as usize) % self.n];
                return h(p, e);
            }
            match Self::element_at(&self.map, &self.x, u) {
                Ok((p, e)) => h(&p, &e),
                Err(_) => f64::NEG_INFINITY,
            }
        };
        periodic_peaks(eval, self.n, refine, band)
    }

    /// `(π(γ_u), γ_u(+∞))` for an arbitrary direction `u`.
    pub fn element_data(&self, u: f64) -> Result<(S::Point, S::End)> {
        Self::element_at(&self.map, &self.x, u)
    }
}

impl<S: ModelSpace> FlowSet<S> {
    pub fn finite(elements: Vec<GeodesicLine<S::End>>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Argument("a flow set needs at least one element".into()));
        }
        Ok(FlowSet::Finite(elements))
    }

    pub fn conjugated(f: &MoebiusBoundaryMap<S>, x: &S::Point, n: usize) -> Result<Self> {
        Ok(FlowSet::Conjugated(ConjugatedFan::new(f, x, n)?))
    }

    /// Whether `p(K)`, the set of forward ends, is a single point.
    pub fn endpoints_singleton(&self, s: &S) -> bool {
        match self {
            FlowSet::Finite(v) => v.iter().all(|g| s.same_end(&g.plus, &v[0].plus)),
            FlowSet::Conjugated(_) => false,
        }
    }

    /// Finitely many elements: all of them, or the fan samples.
    pub fn elements(&self) -> Result<Vec<GeodesicLine<S::End>>> {
        match self {
            FlowSet::Finite(v) => Ok(v.clone()),
            FlowSet::Conjugated(c) => c.elements(),
        }
    }
}
