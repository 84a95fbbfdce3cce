//! The common interface of the concrete CAT(-1) model spaces.

use alloc::format;
use alloc::vec::Vec;
use core::fmt::Debug;

use crate::{Error, Result};

/// A bi-infinite geodesic with a marked time-zero point.
///
/// The time-zero point is stored as a signed arclength `offset` measured
/// from the canonical foot of the line, which is the nearest-point
/// projection of the space's base point. Flowing is therefore exact:
/// `flow(t)` only adds `t` to the offset.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicLine<E> {
    pub minus: E,
    pub plus: E,
    pub offset: f64,
}

impl<E: Clone> GeodesicLine<E> {
    /// The same line with time-zero point moved by `t` toward `plus`.
    pub fn flowed(&self, t: f64) -> Self {
        GeodesicLine {
            minus: self.minus.clone(),
            plus: self.plus.clone(),
            offset: self.offset + t,
        }
    }

    /// The same line traversed backwards with the same time-zero point.
    /// The canonical foot is symmetric in the endpoints, so only the
    /// sign of the offset changes.
    pub fn flipped(&self) -> Self {
        GeodesicLine {
            minus: self.plus.clone(),
            plus: self.minus.clone(),
            offset: -self.offset,
        }
    }
}

/// A proper, geodesically complete CAT(-1) space together with a
/// parametrization of its boundary at infinity.
pub trait ModelSpace: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Point: Clone + Debug + PartialEq + Send + Sync + 'static;
    type End: Clone + Debug + PartialEq + Send + Sync + 'static;
    type Iso: Clone + Debug + Send + Sync + 'static;

    /// Whether boundary functions built from Busemann functions are smooth
    /// in the `end_at` parameter. Sups over the boundary are refined by a
    /// one-dimensional search only when this holds.
    const SMOOTH_BOUNDARY: bool;

    fn base_point(&self) -> Self::Point;
    /// Checks the invariants of a point (domain, canonical form).
    fn check_point(&self, p: &Self::Point) -> Result<()>;

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> f64;
    /// `B(x, y, ξ) = lim_{a→ξ} d(x, a) - d(y, a)`.
    fn busemann(&self, x: &Self::Point, y: &Self::Point, xi: &Self::End) -> f64;
    /// `(ξ|η)_x`. Fails for `ξ = η`, where the product diverges.
    fn gromov_product(&self, x: &Self::Point, xi: &Self::End, eta: &Self::End) -> Result<f64>;
    /// `ρ_x(ξ, η) = exp(-(ξ|η)_x)`, zero on the diagonal.
    fn visual_metric(&self, x: &Self::Point, xi: &Self::End, eta: &Self::End) -> f64;

    fn same_end(&self, a: &Self::End, b: &Self::End) -> bool;
    /// A surjective parametrization of the boundary by `u ∈ [0, 1)`,
    /// equidistributed for the visual metric at the base point.
    fn end_at(&self, u: f64) -> Self::End;
    /// Three distinct ends, well separated for the visual metric at the
    /// base point.
    fn reference_ends(&self) -> [Self::End; 3];

    /// The line from `minus` to `plus` with time zero at the canonical foot.
    fn line(&self, minus: &Self::End, plus: &Self::End) -> Result<GeodesicLine<Self::End>>;
    /// The point at time `t` on the line.
    fn line_point(&self, line: &GeodesicLine<Self::End>, t: f64) -> Self::Point;
    /// The point at distance `t ≥ 0` from `x` on the ray `[x, ξ)`.
    fn ray_point(&self, x: &Self::Point, xi: &Self::End, t: f64) -> Self::Point;
    /// The line through `x` (time zero at `x`) leaving in direction `u ∈ [0, 1)`.
    fn fan_line(&self, x: &Self::Point, u: f64) -> GeodesicLine<Self::End>;
    /// Smallest and largest admissible sizes of a direction fan at `x`.
    fn fan_bounds(&self, x: &Self::Point) -> (usize, usize);

    fn identity(&self) -> Self::Iso;
    fn apply(&self, g: &Self::Iso, p: &Self::Point) -> Self::Point;
    fn apply_end(&self, g: &Self::Iso, xi: &Self::End) -> Self::End;
    fn invert(&self, g: &Self::Iso) -> Self::Iso;
    /// `g ∘ h`.
    fn compose(&self, g: &Self::Iso, h: &Self::Iso) -> Self::Iso;
}

/// Time-zero point of a line.
pub fn foot<S: ModelSpace>(s: &S, line: &GeodesicLine<S::End>) -> S::Point {
    s.line_point(line, 0.0)
}

/// Parameter (relative to the canonical foot) of the nearest-point
/// projection of `p` onto the line from `minus` to `plus`.
///
/// For `q` on the line at parameter `τ` we have `B(c, q, ξ₊) = τ` and
/// `B(c, q, ξ₋) = -τ`; moving off the line orthogonally changes both
/// Busemann functions by the same amount, so half their difference is the
/// projection parameter.
pub fn projection_offset<S: ModelSpace>(
    s: &S,
    minus: &S::End,
    plus: &S::End,
    p: &S::Point,
) -> Result<f64> {
    let line = s.line(minus, plus)?;
    let c = s.line_point(&line, 0.0);
    Ok(0.5 * (s.busemann(&c, p, plus) - s.busemann(&c, p, minus)))
}

/// The line from `minus` to `plus` with time zero at the projection of `p`.
pub fn line_through<S: ModelSpace>(
    s: &S,
    minus: &S::End,
    plus: &S::End,
    p: &S::Point,
) -> Result<GeodesicLine<S::End>> {
    let mut line = s.line(minus, plus)?;
    line.offset = projection_offset(s, minus, plus, p)?;
    Ok(line)
}

/// `n` lines through `x` whose forward ends are equidistributed for `ρ_x`.
pub fn direction_fan<S: ModelSpace>(s: &S, x: &S::Point, n: usize) -> Result<Vec<GeodesicLine<S::End>>> {
    let (lo, hi) = s.fan_bounds(x);
    if n < lo || n > hi {
        return Err(Error::Argument(format!(
            "fan size {n} outside the admissible range [{lo}, {hi}]"
        )));
    }
    Ok((0..n).map(|j| s.fan_line(x, j as f64 / n as f64)).collect())
}

/// Boundary samples `end_at(j / n)` for `j = 0..n`.
pub fn boundary_grid<S: ModelSpace>(s: &S, n: usize) -> Vec<S::End> {
    (0..n).map(|j| s.end_at(j as f64 / n as f64)).collect()
}
