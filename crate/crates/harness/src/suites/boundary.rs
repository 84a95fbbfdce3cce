use cat1_boundary::boundary_calculus::{busemann_angle, comparison_angle, cross_ratio, RadialOracle};
use cat1_boundary::disk::DiskEnd;
use cat1_boundary::ModelSpace;
use rand::Rng;
use rand_chacha::ChaCha20Rng;

use super::*;
use crate::report::{Record, Sense, Table};

const SUITE: &str = "boundary";
const SAMPLES: usize = 1000;
const TREE_SAMPLES: usize = 200;
/// Closed forms against the radius 15/30 limit oracle.
pub const ORACLE_TOL: f64 = 1e-6;
pub const GMVT_TOL: f64 = 1e-8;
/// Angle formulas against finite triangles at radii 8/16.
pub const ANGLE_TOL: f64 = 1e-4;
pub const ROUND_TRIP_TOL: f64 = 1e-8;

pub fn run(_cfg: &Config, rng: &mut ChaCha20Rng) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let d = disk();
    let t = tree();
    let oracle = RadialOracle::default();
    let angle_oracle = RadialOracle { r1: 8.0, r2: 16.0, order: 1 };

    let mut table = Table::new("boundary_oracle_errors", &["sample", "gromov", "busemann", "visual", "cross_ratio"]);
    let (mut eg, mut eb, mut ev, mut ec, mut gmvt) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..SAMPLES {
        let x = disk_point(&d, rng, SAMPLE_RADIUS);
        let y = disk_point(&d, rng, SAMPLE_RADIUS);
        let ends: Vec<DiskEnd> = (0..4).map(|_| disk_end(rng)).collect();
        let (xi, eta) = (&ends[0], &ends[1]);
        if end_gap(xi, eta) < 1e-3 {
            continue;
        }
        let g = (d.gromov_product(&x, xi, eta).expect("distinct ends") - oracle.gromov_product(&d, &x, xi, eta)).abs();
        let b = (d.busemann(&x, &y, xi) - oracle.busemann(&d, &x, &y, xi)).abs();
        let v = (d.visual_metric(&x, xi, eta) - oracle.visual_metric(&d, &x, xi, eta)).abs();
        let quad = [&ends[0], &ends[2], &ends[1], &ends[3]];
        let separated = (0..4).all(|i| (i + 1..4).all(|j| end_gap(&ends[i], &ends[j]) > 1e-2));
        let c = match cross_ratio(&d, &x, quad) {
            Ok(cr) if separated => {
                // relative, and also across base points
                let other = cross_ratio(&d, &y, quad).expect("same quadruple");
                ((cr - oracle.cross_ratio(&d, &x, quad)) / cr).abs().max(((cr - other) / cr).abs())
            }
            _ => 0.0,
        };
        table.push(vec![i as f64, g, b, v, c]);
        eg = eg.max(g);
        eb = eb.max(b);
        ev = ev.max(v);
        ec = ec.max(c);
        // ρ_y(ξ,η)² = ρ_x(ξ,η)² e^{B(x,y,ξ)} e^{B(x,y,η)}
        let lhs = 2.0 * d.visual_metric(&y, xi, eta).ln();
        let rhs = 2.0 * d.visual_metric(&x, xi, eta).ln() + d.busemann(&x, &y, xi) + d.busemann(&x, &y, eta);
        gmvt = gmvt.max((lhs - rhs).exp_m1().abs());
    }
    for (check, what, worst) in [
        ("oracle_gromov_product", "closed-form Gromov product equals its radial limit", eg),
        ("oracle_busemann", "closed-form Busemann function equals its radial limit", eb),
        ("oracle_visual_metric", "closed-form visual metric equals its radial limit", ev),
        ("oracle_cross_ratio", "cross-ratio equals its radial limit and is independent of the base point", ec),
    ] {
        out.record(Record::new(SUITE, check, what, "|closed form - extrapolated oracle| ≤ tol", worst, ORACLE_TOL, Sense::AtMost, SAMPLES));
    }
    out.record(Record::new(
        SUITE,
        "gmvt_residual",
        "geometric mean value theorem for visual metrics",
        "|ρy(ξ,η)² / (ρx(ξ,η)² dρy/dρx(ξ) dρy/dρx(η)) - 1| ≤ tol",
        gmvt,
        GMVT_TOL,
        Sense::AtMost,
        SAMPLES,
    ));
    out.tables.push(table);

    let mut et = 0.0f64;
    for _ in 0..TREE_SAMPLES {
        let (x, y) = (tree_point(&t, rng), tree_point(&t, rng));
        let (xi, eta) = (tree_end(&t, rng), tree_end(&t, rng));
        et = et.max((t.busemann(&x, &y, &xi) - oracle.busemann(&t, &x, &y, &xi)).abs());
        if let Ok(g) = t.gromov_product(&x, &xi, &eta) {
            et = et
                .max((g - oracle.gromov_product(&t, &x, &xi, &eta)).abs())
                .max((t.visual_metric(&x, &xi, &eta) - oracle.visual_metric(&t, &x, &xi, &eta)).abs());
        }
    }
    out.record(Record::new(
        SUITE,
        "oracle_tree",
        "tree Gromov products, Busemann functions and visual metrics equal their radial limits",
        "|closed form - extrapolated oracle| ≤ tol",
        et,
        ORACLE_TOL,
        Sense::AtMost,
        TREE_SAMPLES,
    ));

    // comparison angles at the boundary and at an interior point against
    // finite triangles
    let (mut ea, mut eba) = (0.0f64, 0.0f64);
    for _ in 0..SAMPLES {
        let x = disk_point(&d, rng, SAMPLE_RADIUS);
        let (xi, eta) = (disk_end(rng), disk_end(rng));
        if end_gap(&xi, &eta) > 1e-2 {
            let a = comparison_angle(&d, 1.0, &x, &xi, &eta).expect("distinct ends");
            ea = ea.max((a - angle_oracle.comparison_angle(&d, 1.0, &x, &xi, &eta)).abs());
        }
        let y = d.ray_point(&x, &disk_end(rng), rng.gen_range(0.1..2.0));
        let a = busemann_angle(&d, 1.0, &x, &y, &xi).expect("consistent angle");
        eba = eba.max((a - angle_oracle.busemann_angle(&d, 1.0, &x, &y, &xi)).abs());
    }
    out.record(Record::new(
        SUITE,
        "comparison_angle_oracle",
        "comparison angle at infinity is 2 asin ρx(ξ,η)",
        "|2 asin ρ - law-of-cosines angle (radii 8/16)| ≤ tol",
        ea,
        ANGLE_TOL,
        Sense::AtMost,
        SAMPLES,
    ));
    out.record(Record::new(
        SUITE,
        "busemann_angle_oracle",
        "e^{B(y,x,ξ)} = cosh d - sinh d cos of the comparison angle",
        "|angle from Busemann - law-of-cosines angle (radii 8/16)| ≤ tol",
        eba,
        ANGLE_TOL,
        Sense::AtMost,
        SAMPLES,
    ));

    // y and ξ placed at a prescribed angle θ seen from x
    let mut rt = 0.0f64;
    for _ in 0..SAMPLES {
        let x = disk_point(&d, rng, SAMPLE_RADIUS);
        let g = d.moving_origin_to(&x);
        let alpha = rng.gen_range(0.0..std::f64::consts::TAU);
        let theta = rng.gen_range(0.05..std::f64::consts::PI - 0.05);
        let r = rng.gen_range(0.1..3.0);
        let xi = d.apply_end(&g, &DiskEnd::new(alpha));
        let y = d.apply(&g, &d.polar(r, alpha + theta).expect("radius in range"));
        let angle = busemann_angle(&d, 1.0, &x, &y, &xi).expect("consistent angle");
        let dist = d.distance(&x, &y);
        let b = (dist.cosh() - dist.sinh() * theta.cos()).ln();
        rt = rt.max((angle - theta).abs()).max((d.busemann(&y, &x, &xi) - b).abs());
    }
    out.record(Record::new(
        SUITE,
        "angle_busemann_round_trip",
        "angles and Busemann functions determine each other",
        "|recovered angle - θ|, |B(y,x,ξ) - log(cosh d - sinh d cos θ)| ≤ tol",
        rt,
        ROUND_TRIP_TOL,
        Sense::AtMost,
        SAMPLES,
    ));
    out
}
