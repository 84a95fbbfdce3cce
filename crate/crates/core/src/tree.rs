//! The regular tree of valence `q ≥ 3` with rational edge length.
//!
//! Vertices are reduced words over the letters `0..q`, i.e. elements of the
//! free product of `q` copies of `Z/2`; the tree is its Cayley graph. Ends
//! are eventually periodic infinite reduced words. Distances, Busemann
//! functions and Gromov products are computed exactly in rationals and
//! only converted to `f64` at the trait boundary.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::space::{projection_offset, GeodesicLine, ModelSpace};
use crate::{Error, Result};

pub type Q = Ratio<i64>;

/// Default depth beyond which two ends are treated as equal.
pub const DEFAULT_DEPTH_CAP: usize = 64;
/// Default number of digits used by `end_at` and `fan_line`.
pub const DEFAULT_RESOLUTION: usize = 12;

const MAX_DEN: i64 = 1 << 24;

/// Best rational approximation of `x` with denominator at most `2^24`.
pub fn ratio_from_f64(x: f64) -> Q {
    if x == 0.0 || !x.is_finite() {
        return Q::zero();
    }
    let neg = x < 0.0;
    let mut r = libm::fabs(x);
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    for _ in 0..64 {
        let a = libm::floor(r);
        if a > 1e15 {
            break;
        }
        let ai = a as i64;
        let (p2, q2) = match (ai.checked_mul(p1).and_then(|v| v.checked_add(p0)), ai.checked_mul(q1).and_then(|v| v.checked_add(q0))) {
            (Some(p), Some(q)) if q <= MAX_DEN => (p, q),
            _ => break,
        };
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = r - a;
        if frac < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    let v = if q1 == 0 { Q::from_integer(p0) } else { Q::new(p1, q1) };
    if neg {
        -v
    } else {
        v
    }
}

pub fn ratio_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn lcp(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Appends a letter to a reduced word, cancelling if it repeats the last one.
fn push_reduced(w: &mut Vec<u8>, a: u8) {
    if w.last() == Some(&a) {
        w.pop();
    } else {
        w.push(a);
    }
}

fn concat_reduced(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut w = a.to_vec();
    for &x in b {
        push_reduced(&mut w, x);
    }
    w
}

fn vertex_distance(a: &[u8], b: &[u8]) -> i64 {
    (a.len() + b.len() - 2 * lcp(a, b)) as i64
}

/// A point of the tree: a vertex, or a point at distance `offset` from
/// `vertex` along the edge toward its child `vertex·toward`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreePoint {
    vertex: Vec<u8>,
    toward: u8,
    offset: Q,
}

impl TreePoint {
    pub fn vertex(&self) -> &[u8] {
        &self.vertex
    }

    pub fn is_vertex(&self) -> bool {
        self.offset.is_zero()
    }

    /// Edge data `(letter, offset)` for points interior to an edge.
    pub fn edge(&self) -> Option<(u8, Q)> {
        if self.is_vertex() {
            None
        } else {
            Some((self.toward, self.offset))
        }
    }

    fn depth(&self) -> usize {
        self.vertex.len() + usize::from(!self.is_vertex())
    }
}

/// An end of the tree: the infinite reduced word `pre · period^∞`.
/// Kept canonical (shortest preperiod, primitive period) so that equality
/// of ends is structural equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeEnd {
    pre: Vec<u8>,
    period: Vec<u8>,
}

impl TreeEnd {
    pub fn preperiod(&self) -> &[u8] {
        &self.pre
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    pub fn letter(&self, n: usize) -> u8 {
        if n < self.pre.len() {
            self.pre[n]
        } else {
            self.period[(n - self.pre.len()) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.letter(i)).collect()
    }

    fn canonicalize(mut self) -> TreeEnd {
        let p = self.period.len();
        let d = (1..=p)
            .find(|&d| p % d == 0 && (0..p).all(|i| self.period[i] == self.period[i % d]))
            .unwrap_or(p);
        self.period.truncate(d);
        while let (Some(&a), Some(&b)) = (self.pre.last(), self.period.last()) {
            if a != b {
                break;
            }
            self.pre.pop();
            self.period.rotate_right(1);
        }
        self
    }

    /// Preperiod unrolled to at least `len` letters, with the matching
    /// rotation of the period.
    fn unrolled(&self, len: usize) -> (Vec<u8>, Vec<u8>) {
        let mut pre = self.pre.clone();
        let mut k = 0;
        while pre.len() < len {
            pre.push(self.period[k % self.period.len()]);
            k += 1;
        }
        let mut period = self.period.clone();
        period.rotate_left(k % self.period.len());
        (pre, period)
    }
}

/// A tree automorphism `w ↦ word · σ(w)` (reduced), where `σ` permutes letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeIso {
    word: Vec<u8>,
    perm: Vec<u8>,
}

impl TreeIso {
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn permutation(&self) -> &[u8] {
        &self.perm
    }

    fn sigma(&self, w: &[u8]) -> Vec<u8> {
        w.iter().map(|&a| self.perm[a as usize]).collect()
    }

    fn apply_vertex(&self, w: &[u8]) -> Vec<u8> {
        concat_reduced(&self.word, &self.sigma(w))
    }
}

/// The `q`-regular tree with edge length `edge`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tree {
    q: u8,
    edge: Q,
    depth_cap: usize,
    resolution: usize,
}

impl Tree {
    pub fn new(q: u8, edge: Q) -> Result<Tree> {
        if q < 3 {
            return Err(Error::Argument(format!("valence q = {q} must be at least 3")));
        }
        if edge <= Q::zero() {
            return Err(Error::Argument(format!("edge length {edge} must be positive")));
        }
        Ok(Tree { q, edge, depth_cap: DEFAULT_DEPTH_CAP, resolution: DEFAULT_RESOLUTION })
    }

    /// Depth beyond which ends are compared as equal.
    pub fn with_depth_cap(mut self, depth: usize) -> Tree {
        self.depth_cap = depth.max(2);
        self
    }

    /// Number of digits used to address ends in `end_at` and `fan_line`.
    pub fn with_resolution(mut self, digits: usize) -> Tree {
        self.resolution = digits.max(1);
        self
    }

    pub fn valence(&self) -> u8 {
        self.q
    }

    pub fn edge_length(&self) -> Q {
        self.edge
    }

    pub fn depth_cap(&self) -> usize {
        self.depth_cap
    }

    fn check_word(&self, w: &[u8]) -> Result<()> {
        if let Some(&a) = w.iter().find(|&&a| a >= self.q) {
            return Err(Error::Domain(format!("letter {a} is not below q = {}", self.q)));
        }
        if w.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::Domain(format!("word {w:?} backtracks")));
        }
        Ok(())
    }

    /// The vertex with the given reduced word.
    pub fn vertex(&self, w: &[u8]) -> Result<TreePoint> {
        self.check_word(w)?;
        Ok(TreePoint { vertex: w.to_vec(), toward: 0, offset: Q::zero() })
    }

    /// The point at distance `s ∈ [0, L]` from vertex `w` toward its
    /// neighbour `w·a`.
    pub fn edge_point(&self, w: &[u8], a: u8, s: Q) -> Result<TreePoint> {
        self.check_word(w)?;
        if a >= self.q || s < Q::zero() || s > self.edge {
            return Err(Error::Domain(format!("edge point ({w:?}, {a}, {s}) out of range")));
        }
        Ok(self.canonical(w.to_vec(), a, s))
    }

    fn canonical(&self, mut w: Vec<u8>, a: u8, s: Q) -> TreePoint {
        if s.is_zero() {
            return TreePoint { vertex: w, toward: 0, offset: s };
        }
        if s == self.edge {
            push_reduced(&mut w, a);
            return TreePoint { vertex: w, toward: 0, offset: Q::zero() };
        }
        if w.last() == Some(&a) {
            w.pop();
            return TreePoint { vertex: w, toward: a, offset: self.edge - s };
        }
        TreePoint { vertex: w, toward: a, offset: s }
    }

    /// The end `pre · period^∞`. The period must have length at least two
    /// and the whole word must be reduced.
    pub fn end(&self, pre: &[u8], period: &[u8]) -> Result<TreeEnd> {
        if period.len() < 2 {
            return Err(Error::Domain("an end's period needs at least two letters".into()));
        }
        self.check_word(pre)?;
        self.check_word(period)?;
        if period.first() == period.last() || pre.last() == period.first() {
            return Err(Error::Domain(format!("end {pre:?}({period:?}) backtracks")));
        }
        Ok(TreeEnd { pre: pre.to_vec(), period: period.to_vec() }.canonicalize())
    }

    /// Automorphism `w ↦ word · σ(w)`.
    pub fn automorphism(&self, word: &[u8], perm: &[u8]) -> Result<TreeIso> {
        self.check_word(word)?;
        let mut seen = vec![false; self.q as usize];
        if perm.len() != self.q as usize {
            return Err(Error::Argument(format!("permutation must have {} entries", self.q)));
        }
        for &p in perm {
            if p >= self.q || seen[p as usize] {
                return Err(Error::Argument(format!("{perm:?} is not a permutation")));
            }
            seen[p as usize] = true;
        }
        Ok(TreeIso { word: word.to_vec(), perm: perm.to_vec() })
    }

    /// Length of the common prefix of two ends, capped at the depth cap.
    pub fn common_prefix(&self, a: &TreeEnd, b: &TreeEnd) -> usize {
        if a == b {
            return self.depth_cap;
        }
        (0..self.depth_cap).find(|&n| a.letter(n) != b.letter(n)).unwrap_or(self.depth_cap)
    }

    fn anchors(&self, p: &TreePoint) -> Vec<(Vec<u8>, Q)> {
        if p.is_vertex() {
            vec![(p.vertex.clone(), Q::zero())]
        } else {
            let mut child = p.vertex.clone();
            child.push(p.toward);
            vec![(p.vertex.clone(), p.offset), (child, self.edge - p.offset)]
        }
    }

    /// Exact distance.
    pub fn distance_exact(&self, x: &TreePoint, y: &TreePoint) -> Q {
        if !x.is_vertex() && !y.is_vertex() && x.vertex == y.vertex && x.toward == y.toward {
            return (x.offset - y.offset).abs();
        }
        let mut best: Option<Q> = None;
        for (u, du) in self.anchors(x) {
            for (v, dv) in self.anchors(y) {
                let d = du + dv + self.edge * Q::from_integer(vertex_distance(&u, &v));
                best = Some(match best {
                    Some(b) if b <= d => b,
                    _ => d,
                });
            }
        }
        best.unwrap_or_else(Q::zero)
    }

    fn deep_vertex(&self, xi: &TreeEnd, depth: usize) -> TreePoint {
        TreePoint { vertex: xi.prefix(depth), toward: 0, offset: Q::zero() }
    }

    /// Exact Busemann function.
    pub fn busemann_exact(&self, x: &TreePoint, y: &TreePoint, xi: &TreeEnd) -> Q {
        let a = self.deep_vertex(xi, x.depth().max(y.depth()) + 2);
        self.distance_exact(x, &a) - self.distance_exact(y, &a)
    }

    /// Exact Gromov product.
    pub fn gromov_exact(&self, x: &TreePoint, xi: &TreeEnd, eta: &TreeEnd) -> Result<Q> {
        let m = self.common_prefix(xi, eta);
        if m >= self.depth_cap {
            return Err(Error::Argument("Gromov product of an end with itself diverges".into()));
        }
        let depth = x.depth().max(m) + 2;
        let a = self.deep_vertex(xi, depth);
        let b = self.deep_vertex(eta, depth);
        let two = Q::from_integer(2);
        Ok((self.distance_exact(x, &a) + self.distance_exact(x, &b) - self.distance_exact(&a, &b)) / two)
    }

    /// The point at distance `t ≥ 0` from vertex `v` toward `xi`.
    fn walk_from_vertex(&self, v: &[u8], xi: &TreeEnd, t: Q) -> TreePoint {
        let m = lcp(v, &xi.prefix(v.len()));
        let up = self.edge * Q::from_integer((v.len() - m) as i64);
        if t <= up {
            let k = (t / self.edge).floor();
            let r = t - k * self.edge;
            let u = &v[..v.len() - k.to_integer() as usize];
            if r.is_zero() {
                return TreePoint { vertex: u.to_vec(), toward: 0, offset: r };
            }
            let parent = u[..u.len() - 1].to_vec();
            return TreePoint { vertex: parent, toward: u[u.len() - 1], offset: self.edge - r };
        }
        self.walk_down(xi, m, t - up)
    }

    /// The point at distance `t ≥ 0` below the depth-`m` vertex of `xi`.
    fn walk_down(&self, xi: &TreeEnd, m: usize, t: Q) -> TreePoint {
        let k = (t / self.edge).floor().to_integer() as usize;
        let r = t - self.edge * Q::from_integer(k as i64);
        let w = xi.prefix(m + k);
        if r.is_zero() {
            TreePoint { vertex: w, toward: 0, offset: r }
        } else {
            TreePoint { vertex: w, toward: xi.letter(m + k), offset: r }
        }
    }

    /// Exact ray point.
    pub fn ray_point_exact(&self, x: &TreePoint, xi: &TreeEnd, t: Q) -> TreePoint {
        if x.is_vertex() {
            return self.walk_from_vertex(&x.vertex, xi, t);
        }
        let mut child = x.vertex.clone();
        child.push(x.toward);
        if xi.prefix(child.len()) == child {
            let first = self.edge - x.offset;
            if t < first {
                return self.canonical(x.vertex.clone(), x.toward, x.offset + t);
            }
            return self.walk_from_vertex(&child, xi, t - first);
        }
        if t < x.offset {
            return self.canonical(x.vertex.clone(), x.toward, x.offset - t);
        }
        self.walk_from_vertex(&x.vertex, xi, t - x.offset)
    }

    /// The end reached from vertex `start` by a non-backtracking path whose
    /// letters are read off the digits of `u`: at each step the admissible
    /// letters are those different from the previous one.
    fn path_end(&self, start: &[u8], prev: Option<u8>, mut u: f64) -> (TreeEnd, u8) {
        let mut letters = Vec::with_capacity(self.resolution + start.len() + 4);
        let mut last = prev;
        for _ in 0..self.resolution {
            let choices: Vec<u8> = (0..self.q).filter(|&a| Some(a) != last).collect();
            let n = choices.len();
            let idx = ((u * n as f64) as usize).min(n - 1);
            u = (u * n as f64 - idx as f64).clamp(0.0, 1.0);
            letters.push(choices[idx]);
            last = Some(choices[idx]);
        }
        let l = last.unwrap_or(0);
        let x = (0..self.q).find(|&a| a != l).unwrap_or(0);
        let y = (0..self.q).find(|&a| a != x).unwrap_or(0);
        while letters.len() < start.len() + 2 || letters.last() != Some(&y) {
            let next = if letters.last() == Some(&x) { y } else { x };
            letters.push(next);
        }
        let pre = concat_reduced(start, &letters);
        (TreeEnd { pre, period: vec![x, y] }.canonicalize(), letters[0])
    }

    fn child(&self, p: &TreePoint) -> Vec<u8> {
        let mut c = p.vertex.clone();
        c.push(p.toward);
        c
    }
}

impl ModelSpace for Tree {
    type Point = TreePoint;
    type End = TreeEnd;
    type Iso = TreeIso;

    const SMOOTH_BOUNDARY: bool = false;

    fn base_point(&self) -> TreePoint {
        TreePoint { vertex: Vec::new(), toward: 0, offset: Q::zero() }
    }

    fn check_point(&self, p: &TreePoint) -> Result<()> {
        self.check_word(&p.vertex)?;
        if p.offset.is_zero() {
            return Ok(());
        }
        if p.offset < Q::zero() || p.offset >= self.edge || p.toward >= self.q || p.vertex.last() == Some(&p.toward) {
            return Err(Error::Domain(format!("non-canonical tree point {p:?}")));
        }
        Ok(())
    }

    fn distance(&self, x: &TreePoint, y: &TreePoint) -> f64 {
        ratio_to_f64(&self.distance_exact(x, y))
    }

    fn busemann(&self, x: &TreePoint, y: &TreePoint, xi: &TreeEnd) -> f64 {
        ratio_to_f64(&self.busemann_exact(x, y, xi))
    }

    fn gromov_product(&self, x: &TreePoint, xi: &TreeEnd, eta: &TreeEnd) -> Result<f64> {
        self.gromov_exact(x, xi, eta).map(|g| ratio_to_f64(&g))
    }

    fn visual_metric(&self, x: &TreePoint, xi: &TreeEnd, eta: &TreeEnd) -> f64 {
        match self.gromov_product(x, xi, eta) {
            Ok(g) => libm::exp(-g),
            Err(_) => 0.0,
        }
    }

    fn same_end(&self, a: &TreeEnd, b: &TreeEnd) -> bool {
        self.common_prefix(a, b) >= self.depth_cap
    }

    fn end_at(&self, u: f64) -> TreeEnd {
        self.path_end(&[], None, u - libm::floor(u)).0
    }

    fn reference_ends(&self) -> [TreeEnd; 3] {
        [self.end_at(0.0), self.end_at(1.0 / 3.0), self.end_at(2.0 / 3.0)]
    }

    fn line(&self, minus: &TreeEnd, plus: &TreeEnd) -> Result<GeodesicLine<TreeEnd>> {
        if self.same_end(minus, plus) {
            return Err(Error::Argument("a geodesic line needs distinct endpoints".into()));
        }
        Ok(GeodesicLine { minus: minus.clone(), plus: plus.clone(), offset: 0.0 })
    }

    fn line_point(&self, line: &GeodesicLine<TreeEnd>, t: f64) -> TreePoint {
        let m = self.common_prefix(&line.minus, &line.plus);
        let s = ratio_from_f64(line.offset + t);
        if s >= Q::zero() {
            self.walk_down(&line.plus, m, s)
        } else {
            self.walk_down(&line.minus, m, -s)
        }
    }

    fn ray_point(&self, x: &TreePoint, xi: &TreeEnd, t: f64) -> TreePoint {
        self.ray_point_exact(x, xi, ratio_from_f64(t.max(0.0)))
    }

    fn fan_line(&self, x: &TreePoint, u: f64) -> GeodesicLine<TreeEnd> {
        let u = u - libm::floor(u);
        let (plus, minus) = if x.is_vertex() {
            let (plus, step) = self.path_end(&x.vertex, None, u);
            (plus, self.path_end(&x.vertex, Some(step), 0.0).0)
        } else {
            let child = self.child(x);
            let (v, w) = if u < 0.5 { (child, x.vertex.clone()) } else { (x.vertex.clone(), child) };
            let u1 = if u < 0.5 { 2.0 * u } else { 2.0 * u - 1.0 };
            (
                self.path_end(&v, Some(x.toward), u1).0,
                self.path_end(&w, Some(x.toward), 0.0).0,
            )
        };
        let offset = projection_offset(self, &minus, &plus, x).unwrap_or(0.0);
        GeodesicLine { minus, plus, offset }
    }

    fn fan_bounds(&self, x: &TreePoint) -> (usize, usize) {
        let branches = if x.is_vertex() { self.q as usize } else { 2 };
        let mut hi = branches;
        for _ in 1..self.resolution.min(20) {
            hi = hi.saturating_mul(self.q as usize - 1);
        }
        (2, hi)
    }

    fn identity(&self) -> TreeIso {
        TreeIso { word: Vec::new(), perm: (0..self.q).collect() }
    }

    fn apply(&self, g: &TreeIso, p: &TreePoint) -> TreePoint {
        let w = g.apply_vertex(&p.vertex);
        if p.is_vertex() {
            return TreePoint { vertex: w, toward: 0, offset: Q::zero() };
        }
        self.canonical(w, g.perm[p.toward as usize], p.offset)
    }

    fn apply_end(&self, g: &TreeIso, xi: &TreeEnd) -> TreeEnd {
        let (pre, period) = xi.unrolled(g.word.len() + 2);
        let w = g.apply_vertex(&pre);
        TreeEnd { pre: w, period: g.sigma(&period) }.canonicalize()
    }

    fn invert(&self, g: &TreeIso) -> TreeIso {
        let mut inv = vec![0u8; self.q as usize];
        for (a, &b) in g.perm.iter().enumerate() {
            inv[b as usize] = a as u8;
        }
        let rev: Vec<u8> = g.word.iter().rev().map(|&a| inv[a as usize]).collect();
        TreeIso { word: rev, perm: inv }
    }

    fn compose(&self, g: &TreeIso, h: &TreeIso) -> TreeIso {
        let word = concat_reduced(&g.word, &g.sigma(&h.word));
        let perm = h.perm.iter().map(|&a| g.perm[a as usize]).collect();
        TreeIso { word, perm }
    }
}
