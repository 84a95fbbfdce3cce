//! The Poincaré disk of constant curvature `-k²`.
//!
//! Points carry their conformal factor `1 - |z|²` alongside the complex
//! coordinate. The factor is produced without cancellation by every
//! constructor and transformed exactly by isometries, so points far out
//! (hyperbolic radius 30 and beyond) keep full relative precision in
//! distances and Busemann functions.

use alloc::format;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::lorentz::Lorentz3;
use crate::space::{projection_offset, GeodesicLine, ModelSpace};
use crate::{Error, Result};

/// Largest coordinate norm accepted from Cartesian input.
pub const MAX_NORM: f64 = 1.0 - 1e-12;
/// Largest hyperbolic radius (curvature `-1` units) of constructed points.
pub const MAX_RADIUS: f64 = 40.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskPoint {
    z: Complex64,
    cf: f64,
}

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint { z: Complex64::new(0.0, 0.0), cf: 1.0 };

    pub fn coords(&self) -> (f64, f64) {
        (self.z.re, self.z.im)
    }

    pub fn complex(&self) -> Complex64 {
        self.z
    }

    /// `1 - |z|²`.
    pub fn conformal_factor(&self) -> f64 {
        self.cf
    }

    /// Hyperboloid coordinates.
    pub fn hyperboloid(&self) -> Lorentz3 {
        let s = 2.0 / self.cf;
        Lorentz3([s - 1.0, s * self.z.re, s * self.z.im])
    }

    /// Inverse of [`DiskPoint::hyperboloid`] for a unit future timelike vector.
    pub fn from_hyperboloid(v: &Lorentz3) -> DiskPoint {
        let d = 1.0 + v.0[0];
        DiskPoint {
            z: Complex64::new(v.0[1] / d, v.0[2] / d),
            cf: 2.0 / d,
        }
    }
}

/// A boundary point, stored as an angle in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskEnd {
    theta: f64,
}

impl DiskEnd {
    pub fn new(theta: f64) -> DiskEnd {
        DiskEnd { theta: wrap_angle(theta) }
    }

    pub fn angle(&self) -> f64 {
        self.theta
    }

    pub fn unit(&self) -> Complex64 {
        cis(self.theta)
    }

    /// Null vector `(1, cos θ, sin θ)`: `exp B(z, o, ξ) = -⟨z, n_ξ⟩`.
    pub fn null_vector(&self) -> Lorentz3 {
        Lorentz3([1.0, libm::cos(self.theta), libm::sin(self.theta)])
    }
}

/// An orientation-preserving isometry `z ↦ (αz + β) / (β̄z + ᾱ)` with
/// `|α|² - |β|² = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskIso {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl DiskIso {
    pub const IDENTITY: DiskIso = DiskIso {
        alpha: Complex64::new(1.0, 0.0),
        beta: Complex64::new(0.0, 0.0),
    };

    /// Rotation by `phi` about the origin.
    pub fn rotation(phi: f64) -> DiskIso {
        DiskIso { alpha: cis(0.5 * phi), beta: Complex64::new(0.0, 0.0) }
    }

    fn normalized(alpha: Complex64, beta: Complex64) -> DiskIso {
        let det = alpha.norm_sqr() - beta.norm_sqr();
        let s = 1.0 / libm::sqrt(det);
        DiskIso { alpha: alpha * s, beta: beta * s }
    }

    fn apply_point(&self, p: &DiskPoint) -> DiskPoint {
        let den = self.beta.conj() * p.z + self.alpha.conj();
        DiskPoint {
            z: (self.alpha * p.z + self.beta) / den,
            cf: p.cf / den.norm_sqr(),
        }
    }

    fn apply_angle(&self, theta: f64) -> f64 {
        let e = cis(theta);
        let w = (self.alpha * e + self.beta) / (self.beta.conj() * e + self.alpha.conj());
        libm::atan2(w.im, w.re)
    }
}

/// The disk model with curvature `-k²`, `k ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    k: f64,
}

impl Default for Disk {
    fn default() -> Self {
        Disk { k: 1.0 }
    }
}

impl Disk {
    pub fn new(k: f64) -> Result<Disk> {
        if !(k >= 1.0) || !k.is_finite() {
            return Err(Error::Argument(format!("curvature scale k = {k} must be finite and at least 1")));
        }
        Ok(Disk { k })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// A point from Cartesian coordinates.
    pub fn point(&self, x: f64, y: f64) -> Result<DiskPoint> {
        let z = Complex64::new(x, y);
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::Domain(format!("non-finite coordinates ({x}, {y})")));
        }
        let n2 = z.norm_sqr();
        if n2 >= MAX_NORM * MAX_NORM {
            return Err(Error::Domain(format!(
                "coordinate norm {} is not below 1 - 1e-12",
                libm::sqrt(n2)
            )));
        }
        Ok(DiskPoint { z, cf: (1.0 - libm::sqrt(n2)) * (1.0 + libm::sqrt(n2)) })
    }

    /// The point at distance `r` from the origin in direction `theta`.
    pub fn polar(&self, r: f64, theta: f64) -> Result<DiskPoint> {
        let rh = r * self.k;
        if !(rh >= 0.0) || rh > MAX_RADIUS {
            return Err(Error::Domain(format!("radius {r} outside [0, {}]", MAX_RADIUS / self.k)));
        }
        Ok(polar_hyp(rh, theta))
    }

    /// The transvection along the diameter through `theta` taking the
    /// origin to `polar(r, theta)`.
    pub fn translation(&self, r: f64, theta: f64) -> DiskIso {
        let h = 0.5 * r * self.k;
        DiskIso {
            alpha: Complex64::new(libm::cosh(h), 0.0),
            beta: cis(theta) * libm::sinh(h),
        }
    }

    /// The transvection taking the origin to `p`.
    pub fn moving_origin_to(&self, p: &DiskPoint) -> DiskIso {
        let s = 1.0 / libm::sqrt(p.cf);
        DiskIso { alpha: Complex64::new(s, 0.0), beta: p.z * s }
    }

    /// The point at distance `s` from `y` toward `z` on the segment `[y, z]`.
    pub fn segment_point(&self, y: &DiskPoint, z: &DiskPoint, s: f64) -> DiskPoint {
        let g = self.moving_origin_to(y);
        let w = self.invert(&g).apply_point(z);
        let dir = libm::atan2(w.z.im, w.z.re);
        g.apply_point(&polar_hyp(self.k * s, dir))
    }

    /// The point at distance `|v|` from `frame(o)` in direction `v`, with
    /// directions read in the frame.
    pub fn chart_point(&self, frame: &DiskIso, v: [f64; 2]) -> DiskPoint {
        let r = libm::hypot(v[0], v[1]);
        frame.apply_point(&polar_hyp(self.k * r, libm::atan2(v[1], v[0])))
    }

    /// Inverse of [`Disk::chart_point`].
    pub fn chart_coords(&self, frame: &DiskIso, p: &DiskPoint) -> [f64; 2] {
        let w = self.invert(frame).apply_point(p);
        let r = Self::hyp_distance(&DiskPoint::ORIGIN, &w) / self.k;
        let dir = libm::atan2(w.z.im, w.z.re);
        [r * libm::cos(dir), r * libm::sin(dir)]
    }

    /// Hyperbolic (curvature `-1`) distance.
    fn hyp_distance(x: &DiskPoint, y: &DiskPoint) -> f64 {
        let chord = abs(x.z - y.z);
        2.0 * libm::asinh(chord / libm::sqrt(x.cf * y.cf))
    }

    /// `ρ_x(ξ, η)` for curvature `-1`.
    fn hyp_visual(x: &DiskPoint, xi: &DiskEnd, eta: &DiskEnd) -> f64 {
        let (a, b) = (xi.unit(), eta.unit());
        let chord = abs(a - b);
        if chord == 0.0 {
            return 0.0;
        }
        let v = chord * x.cf / (2.0 * abs(x.z - a) * abs(x.z - b));
        v.min(1.0)
    }
}

fn cis(theta: f64) -> Complex64 {
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

fn abs(z: Complex64) -> f64 {
    libm::hypot(z.re, z.im)
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = libm::fmod(theta, TAU);
    if t < 0.0 {
        t += TAU;
    }
    if t >= TAU {
        t = 0.0;
    }
    t
}

/// Point at hyperbolic radius `rh` with exact conformal factor.
fn polar_hyp(rh: f64, theta: f64) -> DiskPoint {
    let c = libm::cosh(0.5 * rh);
    DiskPoint { z: cis(theta) * libm::tanh(0.5 * rh), cf: 1.0 / (c * c) }
}

/// The isometry taking the diameter from `-v` to `v` onto the line from
/// `α` to `β`, and the origin onto the line's canonical foot.
///
/// With `δ = β - α (mod 2π)` and `ψ = (δ - π)/2`, the line is the image of
/// the diameter in direction `ω = β - ψ` under `z ↦ (z + a)/(1 + āz)` where
/// `a = i·tan(ψ/2)·e^{iω}`; the origin projects onto the diameter at 0,
/// so the foot is `a`.
fn line_frame(minus: &DiskEnd, plus: &DiskEnd) -> (Complex64, DiskIso) {
    let delta = wrap_angle(plus.theta - minus.theta);
    let psi = 0.5 * (delta - PI);
    let v = cis(plus.theta - psi);
    let r = libm::tan(0.5 * psi);
    let a = Complex64::new(0.0, r) * v;
    // 1 - tan²(ψ/2) = cos ψ / cos²(ψ/2), free of cancellation near |ψ| = π/2
    let ch = libm::cos(0.5 * psi);
    let one_minus = libm::cos(psi) / (ch * ch);
    let s = 1.0 / libm::sqrt(one_minus);
    (v, DiskIso { alpha: Complex64::new(s, 0.0), beta: a * s })
}

impl ModelSpace for Disk {
    type Point = DiskPoint;
    type End = DiskEnd;
    type Iso = DiskIso;

    const SMOOTH_BOUNDARY: bool = true;

    fn base_point(&self) -> DiskPoint {
        DiskPoint::ORIGIN
    }

    fn check_point(&self, p: &DiskPoint) -> Result<()> {
        let ok = p.z.re.is_finite()
            && p.z.im.is_finite()
            && p.cf.is_finite()
            && p.cf > 0.0
            && p.z.norm_sqr() < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid disk point {p:?}")))
        }
    }

    fn distance(&self, x: &DiskPoint, y: &DiskPoint) -> f64 {
        Self::hyp_distance(x, y) / self.k
    }

    fn busemann(&self, x: &DiskPoint, y: &DiskPoint, xi: &DiskEnd) -> f64 {
        let e = xi.unit();
        let num = (x.z - e).norm_sqr() * y.cf;
        let den = (y.z - e).norm_sqr() * x.cf;
        libm::log(num / den) / self.k
    }

    fn gromov_product(&self, x: &DiskPoint, xi: &DiskEnd, eta: &DiskEnd) -> Result<f64> {
        let v = Self::hyp_visual(x, xi, eta);
        if v == 0.0 {
            return Err(Error::Argument("Gromov product of an end with itself diverges".into()));
        }
        Ok(-libm::log(v) / self.k)
    }

    fn visual_metric(&self, x: &DiskPoint, xi: &DiskEnd, eta: &DiskEnd) -> f64 {
        let v = Self::hyp_visual(x, xi, eta);
        if self.k == 1.0 || v == 0.0 {
            v
        } else {
            libm::pow(v, 1.0 / self.k)
        }
    }

    fn same_end(&self, a: &DiskEnd, b: &DiskEnd) -> bool {
        abs(a.unit() - b.unit()) == 0.0
    }

    fn end_at(&self, u: f64) -> DiskEnd {
        DiskEnd::new(TAU * u)
    }

    fn reference_ends(&self) -> [DiskEnd; 3] {
        [DiskEnd::new(0.0), DiskEnd::new(TAU / 3.0), DiskEnd::new(2.0 * TAU / 3.0)]
    }

    fn line(&self, minus: &DiskEnd, plus: &DiskEnd) -> Result<GeodesicLine<DiskEnd>> {
        if self.same_end(minus, plus) {
            return Err(Error::Argument("a geodesic line needs distinct endpoints".into()));
        }
        Ok(GeodesicLine { minus: *minus, plus: *plus, offset: 0.0 })
    }

    fn line_point(&self, line: &GeodesicLine<DiskEnd>, t: f64) -> DiskPoint {
        let (v, frame) = line_frame(&line.minus, &line.plus);
        let s = self.k * (line.offset + t);
        let on_diameter = DiskPoint {
            z: v * libm::tanh(0.5 * s),
            cf: {
                let c = libm::cosh(0.5 * s);
                1.0 / (c * c)
            },
        };
        frame.apply_point(&on_diameter)
    }

    fn ray_point(&self, x: &DiskPoint, xi: &DiskEnd, t: f64) -> DiskPoint {
        let g = self.moving_origin_to(x);
        let dir = self.invert(&g).apply_angle(xi.theta);
        g.apply_point(&polar_hyp(self.k * t, dir))
    }

    fn fan_line(&self, x: &DiskPoint, u: f64) -> GeodesicLine<DiskEnd> {
        let g = self.moving_origin_to(x);
        let phi = TAU * u;
        let plus = DiskEnd::new(g.apply_angle(phi));
        let minus = DiskEnd::new(g.apply_angle(phi + PI));
        let offset = projection_offset(self, &minus, &plus, x).unwrap_or(0.0);
        GeodesicLine { minus, plus, offset }
    }

    fn fan_bounds(&self, _x: &DiskPoint) -> (usize, usize) {
        (4, usize::MAX)
    }

    fn identity(&self) -> DiskIso {
        DiskIso::IDENTITY
    }

    fn apply(&self, g: &DiskIso, p: &DiskPoint) -> DiskPoint {
        g.apply_point(p)
    }

    fn apply_end(&self, g: &DiskIso, xi: &DiskEnd) -> DiskEnd {
        DiskEnd::new(g.apply_angle(xi.theta))
    }

    fn invert(&self, g: &DiskIso) -> DiskIso {
        DiskIso { alpha: g.alpha.conj(), beta: -g.beta }
    }

    fn compose(&self, g: &DiskIso, h: &DiskIso) -> DiskIso {
        DiskIso::normalized(
            g.alpha * h.alpha + g.beta * h.beta.conj(),
            g.alpha * h.beta + g.beta * h.alpha.conj(),
        )
    }
}
