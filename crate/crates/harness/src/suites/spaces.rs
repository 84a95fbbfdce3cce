use std::f64::consts::PI;

use cat1_boundary::space::direction_fan;
use cat1_boundary::ModelSpace;
use rand::Rng;
use rand_chacha::ChaCha20Rng;

use super::*;
use crate::report::{Record, Sense};

const SUITE: &str = "spaces";
const SAMPLES: usize = 1000;
const TREE_SAMPLES: usize = 200;

pub fn run(cfg: &Config, rng: &mut ChaCha20Rng) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let d = disk();
    let t = tree();

    let mut iso = 0.0f64;
    let mut tri = f64::NEG_INFINITY;
    for _ in 0..SAMPLES {
        let (x, y, z) = (
            disk_point(&d, rng, SAMPLE_RADIUS),
            disk_point(&d, rng, SAMPLE_RADIUS),
            disk_point(&d, rng, SAMPLE_RADIUS),
        );
        let xi = disk_end(rng);
        let g = disk_isometry(&d, rng);
        let (gx, gy) = (d.apply(&g, &x), d.apply(&g, &y));
        iso = iso
            .max((d.distance(&gx, &gy) - d.distance(&x, &y)).abs())
            .max((d.busemann(&gx, &gy, &d.apply_end(&g, &xi)) - d.busemann(&x, &y, &xi)).abs());
        tri = tri.max(d.distance(&x, &z) - d.distance(&x, &y) - d.distance(&y, &z));
    }
    out.record(Record::new(
        SUITE,
        "disk_isometry_invariance",
        "isometries preserve distance and Busemann functions",
        "|d(gx,gy) - d(x,y)|, |B(gx,gy,gξ) - B(x,y,ξ)| ≤ tol",
        iso,
        1e-9,
        Sense::AtMost,
        SAMPLES,
    ));
    out.record(Record::new(
        SUITE,
        "disk_triangle_inequality",
        "the disk distance is a metric",
        "d(x,z) - d(x,y) - d(y,z) ≤ tol",
        tri,
        1e-12,
        Sense::AtMost,
        SAMPLES,
    ));

    let mut line_err = 0.0f64;
    for _ in 0..SAMPLES {
        let (a, b) = (disk_end(rng), disk_end(rng));
        let Ok(mut l) = d.line(&a, &b) else { continue };
        l.offset = rng.gen_range(-3.0..3.0);
        let (s0, s1) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let (p, q) = (d.line_point(&l, s0), d.line_point(&l, s1));
        line_err = line_err
            .max((d.distance(&p, &q) - (s1 - s0).abs()).abs())
            .max((d.busemann(&p, &q, &l.plus) - (s1 - s0)).abs());
    }
    out.record(Record::new(
        SUITE,
        "disk_line_parametrization",
        "lines are unit-speed geodesics and flow is Busemann translation",
        "|d(γs,γt) - |s-t||, |B(γs,γt,γ+) - (t-s)| ≤ tol",
        line_err,
        1e-9,
        Sense::AtMost,
        SAMPLES,
    ));

    let n = cfg.fan;
    let expected = (PI / n as f64).sin();
    let mut fan_err = 0.0f64;
    for _ in 0..20 {
        let x = disk_point(&d, rng, SAMPLE_RADIUS);
        let fan = direction_fan(&d, &x, n).expect("fan size admissible");
        for (j, l) in fan.iter().enumerate() {
            let next = &fan[(j + 1) % n];
            fan_err = fan_err
                .max((d.visual_metric(&x, &l.plus, &next.plus) - expected).abs())
                .max((d.visual_metric(&x, &l.minus, &l.plus) - 1.0).abs())
                .max(d.distance(&d.line_point(l, 0.0), &x));
        }
    }
    out.record(Record::new(
        SUITE,
        "disk_fan_equidistribution",
        "fans moved by an isometry are equidistributed for the visual metric at x",
        "|ρx(ξj, ξj+1) - sin(π/n)| ≤ tol",
        fan_err,
        1e-9,
        Sense::AtMost,
        20 * n,
    ));

    let clamp_ok = d.point(1.0 - 1e-13, 0.0).is_err() && d.point(0.0, 1.0 - 1e-11).is_ok();
    out.record(Record::new(
        SUITE,
        "disk_boundary_clamp",
        "Cartesian points are clamped away from the unit circle",
        "points with norm ≥ 1 - 1e-12 are rejected",
        if clamp_ok { 0.0 } else { 1.0 },
        0.0,
        Sense::AtMost,
        2,
    ));

    let mut tree_err = 0.0f64;
    for _ in 0..TREE_SAMPLES {
        let (x, y) = (tree_point(&t, rng), tree_point(&t, rng));
        let xi = tree_end(&t, rng);
        let g = tree_isometry(&t, rng);
        let (gx, gy) = (t.apply(&g, &x), t.apply(&g, &y));
        tree_err = tree_err
            .max((t.distance(&gx, &gy) - t.distance(&x, &y)).abs())
            .max((t.busemann(&gx, &gy, &t.apply_end(&g, &xi)) - t.busemann(&x, &y, &xi)).abs());
        let (a, b) = (tree_end(&t, rng), tree_end(&t, rng));
        if let Ok(l) = t.line(&a, &b) {
            let (s0, s1) = (rng.gen_range(-4i32..4) as f64 * 0.5, rng.gen_range(-4i32..4) as f64 * 0.5);
            let (p, q) = (t.line_point(&l, s0), t.line_point(&l, s1));
            tree_err = tree_err
                .max((t.distance(&p, &q) - (s1 - s0).abs()).abs())
                .max((t.busemann(&p, &q, &l.plus) - (s1 - s0)).abs());
        }
    }
    out.record(Record::new(
        SUITE,
        "tree_isometries_and_lines",
        "tree automorphisms are isometries and tree lines are unit-speed geodesics",
        "exact equality",
        tree_err,
        0.0,
        Sense::AtMost,
        TREE_SAMPLES,
    ));
    out
}
