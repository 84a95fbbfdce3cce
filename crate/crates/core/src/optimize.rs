//! Derivative-free one- and two-dimensional search routines.

use alloc::vec::Vec;

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const INV_PHI2: f64 = 0.381_966_011_250_105_1;

/// Golden-section minimization of a unimodal function on `[a, b]`.
/// Returns the best abscissa seen and its value.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Brent's minimization (golden section with parabolic steps) on `[a, b]`.
pub fn brent_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = if a < b { (a, b) } else { (b, a) };
    let mut x = a + INV_PHI2 * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let tol1 = 1e-11 * x.abs() + tol;
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            e = d;
            if p.abs() < (0.5 * q * etemp).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if m >= x { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= m { a - x } else { b - x };
            d = INV_PHI2 * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx)
}

/// Minimizes a convex function of one real variable: brackets the
/// minimum by step doubling from `±h`, then runs golden section.
pub fn convex_line_min<F: FnMut(f64) -> f64>(mut f: F, h: f64, tol: f64) -> (f64, f64) {
    let f0 = f(0.0);
    let fp = f(h);
    let (lo, hi) = if fp < f0 {
        let (mut prev, mut cur, mut fcur, mut step) = (0.0, h, fp, h);
        loop {
            step *= 2.0;
            let next = cur + step;
            let fnext = f(next);
            if fnext >= fcur || step > 1e3 {
                break (prev, next);
            }
            prev = cur;
            cur = next;
            fcur = fnext;
        }
    } else {
        let fm = f(-h);
        if fm < f0 {
            let (mut prev, mut cur, mut fcur, mut step) = (0.0, -h, fm, h);
            loop {
                step *= 2.0;
                let next = cur - step;
                let fnext = f(next);
                if fnext >= fcur || step > 1e3 {
                    break (next, prev);
                }
                prev = cur;
                cur = next;
                fcur = fnext;
            }
        } else {
            (-h, h)
        }
    };
    let (s, fs) = golden_min(&mut f, lo, hi, tol);
    if fs <= f0 {
        (s, fs)
    } else {
        (0.0, f0)
    }
}

/// Nelder-Mead simplex minimization in the plane.
pub fn nelder_mead<F: FnMut([f64; 2]) -> f64>(
    mut f: F,
    x0: [f64; 2],
    scale: f64,
    tol: f64,
    max_iter: usize,
) -> ([f64; 2], f64) {
    let mut pts = [x0, [x0[0] + scale, x0[1]], [x0[0], x0[1] + scale]];
    let mut vals = [f(pts[0]), f(pts[1]), f(pts[2])];
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    for _ in 0..max_iter {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        pts = [pts[idx[0]], pts[idx[1]], pts[idx[2]]];
        vals = [vals[idx[0]], vals[idx[1]], vals[idx[2]]];
        let size = (pts[1][0] - pts[0][0])
            .abs()
            .max((pts[1][1] - pts[0][1]).abs())
            .max((pts[2][0] - pts[0][0]).abs())
            .max((pts[2][1] - pts[0][1]).abs());
        if size < tol {
            break;
        }
        let centroid = lerp(pts[0], pts[1], 0.5);
        let reflected = lerp(pts[2], centroid, 2.0);
        let fr = f(reflected);
        if fr < vals[0] {
            let expanded = lerp(pts[2], centroid, 3.0);
            let fe = f(expanded);
            if fe < fr {
                pts[2] = expanded;
                vals[2] = fe;
            } else {
                pts[2] = reflected;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            pts[2] = reflected;
            vals[2] = fr;
        } else {
            let contracted = lerp(pts[2], centroid, 0.5);
            let fc = f(contracted);
            if fc < vals[2] {
                pts[2] = contracted;
                vals[2] = fc;
            } else {
                for i in 1..3 {
                    pts[i] = lerp(pts[0], pts[i], 0.5);
                    vals[i] = f(pts[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap_or(0);
    (pts[best], vals[best])
}

/// Local maxima of a 1-periodic function, from an `n`-point grid.
///
/// Up to `refine` grid local maxima, those that could hold the global
/// maximum (judged by their discrete second difference), are polished by
/// Brent's method inside their two neighbouring cells. Peaks within `band`
/// of the best one are returned, best first.
pub fn periodic_peaks<F: Fn(f64) -> f64>(f: F, n: usize, refine: usize, band: f64) -> Vec<(f64, f64)> {
    let h = 1.0 / n as f64;
    let vals: Vec<f64> = (0..n).map(|j| f(j as f64 * h)).collect();
    let grid_max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // (optimistic value, grid index)
    let mut cands: Vec<(f64, usize)> = Vec::new();
    for j in 0..n {
        let prev = vals[(j + n - 1) % n];
        let next = vals[(j + 1) % n];
        let v = vals[j];
        if v < prev || v < next {
            continue;
        }
        let gain = if refine > 0 { 0.25 * (prev - 2.0 * v + next).abs() } else { 0.0 };
        if v + gain >= grid_max - band {
            cands.push((v + gain, j));
        }
    }
    cands.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut peaks: Vec<(f64, f64)> = Vec::with_capacity(cands.len());
    for (rank, &(_, j)) in cands.iter().enumerate() {
        let u = j as f64 * h;
        let v = vals[j];
        if rank >= refine {
            peaks.push((u, v));
            continue;
        }
        let (um, fm) = brent_min(|t| -f(t), u - h, u + h, 1e-10 * h);
        let (u_best, v_best) = if -fm > v { (um, -fm) } else { (u, v) };
        peaks.push((u_best - libm::floor(u_best), v_best));
    }
    let best = peaks.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    peaks.retain(|p| p.1 >= best - band);
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.total_cmp(&b.0)));
    peaks
}

/// Supremum of a 1-periodic function: `(argmax, max)`.
pub fn periodic_sup<F: Fn(f64) -> f64>(f: F, n: usize, refine: usize) -> (f64, f64) {
    periodic_peaks(f, n, refine, 0.0)
        .first()
        .copied()
        .unwrap_or((0.0, f64::NAN))
}

/// Infimum of a 1-periodic function: `(argmin, min)`.
pub fn periodic_inf<F: Fn(f64) -> f64>(f: F, n: usize, refine: usize) -> (f64, f64) {
    let (u, v) = periodic_sup(|t| -f(t), n, refine);
    (u, -v)
}
