//! Gromov products, visual metrics, Busemann functions, cross-ratios and
//! comparison angles, plus the radial-limit oracles that pin the closed forms.

use alloc::format;

use crate::space::ModelSpace;
use crate::{Error, Result};

/// Slack allowed on `|cos ∠|` before the Busemann angle is declared
/// inconsistent.
pub const COS_SLACK: f64 = 1e-9;

pub fn gromov_product<S: ModelSpace>(s: &S, x: &S::Point, xi: &S::End, eta: &S::End) -> Result<f64> {
    s.gromov_product(x, xi, eta)
}

pub fn visual_metric<S: ModelSpace>(s: &S, x: &S::Point, xi: &S::End, eta: &S::End) -> f64 {
    s.visual_metric(x, xi, eta)
}

pub fn busemann<S: ModelSpace>(s: &S, x: &S::Point, y: &S::Point, xi: &S::End) -> f64 {
    s.busemann(x, y, xi)
}

/// `[ξ ξ′ η η′] = ρ(ξ,η) ρ(ξ′,η′) / (ρ(ξ,η′) ρ(ξ′,η))` for the visual metric at `x`.
pub fn cross_ratio<S: ModelSpace>(s: &S, x: &S::Point, quad: [&S::End; 4]) -> Result<f64> {
    for i in 0..4 {
        for j in i + 1..4 {
            if s.same_end(quad[i], quad[j]) {
                return Err(Error::Argument(format!("cross-ratio needs distinct points (entries {i} and {j} agree)")));
            }
        }
    }
    let [a, a2, b, b2] = quad;
    let num = s.visual_metric(x, a, b) * s.visual_metric(x, a2, b2);
    let den = s.visual_metric(x, a, b2) * s.visual_metric(x, a2, b);
    Ok(num / den)
}

/// Limit of the comparison angles in `H_{-k²}`: `2 asin(ρ_x(ξ,η)^k)`.
pub fn comparison_angle<S: ModelSpace>(s: &S, k: f64, x: &S::Point, xi: &S::End, eta: &S::End) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::Argument(format!("k = {k} must be positive")));
    }
    if s.same_end(xi, eta) {
        return Err(Error::Argument("comparison angle needs distinct ends".into()));
    }
    let rho = s.visual_metric(x, xi, eta);
    Ok(2.0 * libm::asin(libm::pow(rho, k).min(1.0)))
}

/// The angle `∠^{(-k²)} y x ξ` obtained by inverting
/// `e^{kB(y,x,ξ)} = cosh(k d) - sinh(k d) cos ∠` with `d = d(x, y)`.
pub fn busemann_angle<S: ModelSpace>(s: &S, k: f64, x: &S::Point, y: &S::Point, xi: &S::End) -> Result<f64> {
    let cos = busemann_angle_cos(s, k, x, y, xi)?;
    if libm::fabs(cos) > 1.0 + COS_SLACK {
        return Err(Error::Numerical(format!("|cos| = {} exceeds 1 in the Busemann angle", libm::fabs(cos))));
    }
    Ok(libm::acos(cos.clamp(-1.0, 1.0)))
}

fn busemann_angle_cos<S: ModelSpace>(s: &S, k: f64, x: &S::Point, y: &S::Point, xi: &S::End) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::Argument(format!("k = {k} must be positive")));
    }
    let d = s.distance(x, y);
    if !(d > 0.0) {
        return Err(Error::Argument("the Busemann angle needs y distinct from x".into()));
    }
    let b = s.busemann(y, x, xi);
    // cosh(kd) - e^{kB} written without cancellation for small d
    let sh = libm::sinh(0.5 * k * d);
    let num = 2.0 * sh * sh - libm::expm1(k * b);
    Ok(num / libm::sinh(k * d))
}

/// Residual `|log(dρ_y/dρ_x)(ξ) - t cos ∠^{(-1)} y x ξ|` for
/// `y = ray_point(x, ξ_dir, t)`. The log-derivative is `B(x, y, ξ)`.
pub fn embed_derivative_check<S: ModelSpace>(
    s: &S,
    x: &S::Point,
    dir: &S::End,
    xi: &S::End,
    t: f64,
) -> Result<f64> {
    if !(t > 0.0 && t <= 0.1) {
        return Err(Error::Argument(format!("t = {t} must lie in (0, 0.1]")));
    }
    let y = s.ray_point(x, dir, t);
    let log_derivative = s.busemann(x, &y, xi);
    let cos = busemann_angle_cos(s, 1.0, x, &y, xi)?.clamp(-1.0, 1.0);
    Ok(libm::fabs(log_derivative - t * cos))
}

/// Finite-radius approximations of the boundary quantities, evaluated at
/// two radii and combined by Richardson extrapolation.
///
/// The truncation error of every approximant here is a series in `e^{-2r}`.
/// Order 0 returns the value at the outer radius; order 1 (or more, which
/// two radii cannot support beyond one step) removes the leading term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialOracle {
    pub r1: f64,
    pub r2: f64,
    pub order: u32,
}

impl Default for RadialOracle {
    fn default() -> Self {
        RadialOracle { r1: 15.0, r2: 30.0, order: 1 }
    }
}

impl RadialOracle {
    fn extrapolate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let f2 = f(self.r2);
        if self.order == 0 {
            return f2;
        }
        let f1 = f(self.r1);
        // two radii support a single elimination step
        let q = libm::exp(-2.0 * (self.r2 - self.r1));
        (f2 - q * f1) / (1.0 - q)
    }

    pub fn busemann<S: ModelSpace>(&self, s: &S, x: &S::Point, y: &S::Point, xi: &S::End) -> f64 {
        self.extrapolate(|r| {
            let a = s.ray_point(x, xi, r);
            s.distance(x, &a) - s.distance(y, &a)
        })
    }

    pub fn gromov_product<S: ModelSpace>(&self, s: &S, x: &S::Point, xi: &S::End, eta: &S::End) -> f64 {
        self.extrapolate(|r| {
            let a = s.ray_point(x, xi, r);
            let b = s.ray_point(x, eta, r);
            0.5 * (s.distance(x, &a) + s.distance(x, &b) - s.distance(&a, &b))
        })
    }

    pub fn visual_metric<S: ModelSpace>(&self, s: &S, x: &S::Point, xi: &S::End, eta: &S::End) -> f64 {
        libm::exp(-self.gromov_product(s, x, xi, eta))
    }

    /// `exp(½(d(a,b) + d(a′,b′) - d(a,b′) - d(a′,b)))` with the four points
    /// at radius `r` from `x` toward `ξ, ξ′, η, η′`.
    pub fn cross_ratio<S: ModelSpace>(&self, s: &S, x: &S::Point, quad: [&S::End; 4]) -> f64 {
        libm::exp(self.extrapolate(|r| {
            let [a, a2, b, b2] = quad.map(|e| s.ray_point(x, e, r));
            0.5 * (s.distance(&a, &b) + s.distance(&a2, &b2) - s.distance(&a, &b2) - s.distance(&a2, &b))
        }))
    }

    /// The comparison angle in `H_{-k²}` at `x` of the triangle with
    /// vertices at radius `r` toward `ξ` and `η`, from the law of cosines.
    pub fn comparison_angle<S: ModelSpace>(&self, s: &S, k: f64, x: &S::Point, xi: &S::End, eta: &S::End) -> f64 {
        self.extrapolate(|r| {
            let a = s.ray_point(x, xi, r);
            let b = s.ray_point(x, eta, r);
            law_of_cosines_angle(k, s.distance(x, &a), s.distance(x, &b), s.distance(&a, &b))
        })
    }

    /// The comparison angle at `x` between `y` and the point at radius `r`
    /// toward `ξ`.
    pub fn busemann_angle<S: ModelSpace>(&self, s: &S, k: f64, x: &S::Point, y: &S::Point, xi: &S::End) -> f64 {
        self.extrapolate(|r| {
            let a = s.ray_point(x, xi, r);
            law_of_cosines_angle(k, s.distance(x, y), s.distance(x, &a), s.distance(y, &a))
        })
    }
}

/// Angle opposite side `c` in the triangle of `H_{-k²}` with sides `a, b, c`.
pub fn law_of_cosines_angle(k: f64, a: f64, b: f64, c: f64) -> f64 {
    // cosh(ka)cosh(kb) - cosh(kc) = cosh(k(a-b)) - cosh(kc) + sinh(ka)sinh(kb);
    // the difference of cosh values is evaluated as a product of sinh values
    let (ka, kb, kc) = (k * a, k * b, k * c);
    let diff = 2.0 * libm::sinh(0.5 * (ka - kb + kc)) * libm::sinh(0.5 * (ka - kb - kc));
    let prod = libm::sinh(ka) * libm::sinh(kb);
    let one_minus_cos = -diff / prod;
    if one_minus_cos <= 1.0 {
        2.0 * libm::asin(libm::sqrt(0.5 * one_minus_cos.max(0.0)))
    } else {
        libm::acos((1.0 - one_minus_cos).max(-1.0))
    }
}
