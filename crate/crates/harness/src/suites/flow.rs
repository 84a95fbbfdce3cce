use cat1_boundary::disk::DiskEnd;
use cat1_boundary::flow_conjugacy::{conjugacy, flip, flow, map_derivative, MoebiusBoundaryMap, CROSS_RATIO_TOL};
use cat1_boundary::space::foot;
use cat1_boundary::{GeodesicLine, ModelSpace};
use rand::Rng;
use rand_chacha::ChaCha20Rng;

use super::*;
use crate::report::{Record, Sense};

const SUITE: &str = "flow";
const ELEMENTS: usize = 1000;
const MAPS: usize = 20;
const TREE_ELEMENTS: usize = 200;
pub const CONJUGACY_TOL: f64 = 1e-8;

fn line_gap(a: &GeodesicLine<DiskEnd>, b: &GeodesicLine<DiskEnd>) -> f64 {
    end_gap(&a.minus, &b.minus).max(end_gap(&a.plus, &b.plus)).max((a.offset - b.offset).abs())
}

pub fn run(cfg: &Config, rng: &mut ChaCha20Rng) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let d = disk();
    let t = tree();

    let maps: Vec<_> = (0..MAPS)
        .map(|_| {
            let g = disk_isometry(&d, rng);
            (iso_map(&d, &g), g)
        })
        .collect();
    let (mut flip_err, mut flow_err, mut iso_err) = (0.0f64, 0.0f64, 0.0f64);
    let mut n = 0;
    while n < ELEMENTS {
        let (f, g) = &maps[n % MAPS];
        let (a, b) = (disk_end(rng), disk_end(rng));
        let Ok(mut gamma) = d.line(&a, &b) else { continue };
        gamma.offset = rng.gen_range(-3.0..3.0);
        let s = rng.gen_range(-5.0..5.0);
        let image = conjugacy(f, &gamma).expect("validated map");
        let flipped = conjugacy(f, &flip(&gamma)).expect("validated map");
        flip_err = flip_err.max(line_gap(&flipped, &flip(&image)));
        let flowed = conjugacy(f, &flow(&gamma, s)).expect("validated map");
        flow_err = flow_err.max(line_gap(&flowed, &flow(&image, s)));
        // an isometry maps the time-zero point along with the line
        iso_err = iso_err.max(d.distance(&foot(&d, &image), &d.apply(g, &foot(&d, &gamma))));
        n += 1;
    }
    let mut tree_err = 0.0f64;
    let tree_maps: Vec<_> = (0..5)
        .map(|_| {
            let g = tree_isometry(&t, rng);
            (iso_map(&t, &g), g)
        })
        .collect();
    let mut m = 0;
    while m < TREE_ELEMENTS {
        let (f, g) = &tree_maps[m % tree_maps.len()];
        let (a, b) = (tree_end(&t, rng), tree_end(&t, rng));
        let Ok(mut gamma) = t.line(&a, &b) else { continue };
        gamma.offset = rng.gen_range(-6i32..6) as f64 * 0.5;
        let image = conjugacy(f, &gamma).expect("validated map");
        let flipped = conjugacy(f, &flip(&gamma)).expect("validated map");
        let s = rng.gen_range(-6i32..6) as f64 * 0.5;
        let flowed = conjugacy(f, &flow(&gamma, s)).expect("validated map");
        let same = |x: &GeodesicLine<_>, y: &GeodesicLine<_>| {
            if t.same_end(&x.minus, &y.minus) && t.same_end(&x.plus, &y.plus) {
                (x.offset - y.offset).abs()
            } else {
                f64::INFINITY
            }
        };
        tree_err = tree_err
            .max(same(&flipped, &flip(&image)))
            .max(same(&flowed, &flow(&image, s)))
            .max(t.distance(&foot(&t, &image), &t.apply(g, &foot(&t, &gamma))));
        m += 1;
    }
    out.record(Record::new(
        SUITE,
        "flip_equivariance",
        "the conjugacy commutes with the flip",
        "line distance between φf(flip γ) and flip φf(γ) ≤ tol",
        flip_err,
        CONJUGACY_TOL,
        Sense::AtMost,
        ELEMENTS,
    ));
    out.record(Record::new(
        SUITE,
        "flow_conjugation",
        "the conjugacy commutes with the geodesic flow",
        "line distance between φf(g_t γ) and g_t φf(γ) ≤ tol",
        flow_err,
        CONJUGACY_TOL,
        Sense::AtMost,
        ELEMENTS,
    ));
    out.record(Record::new(
        SUITE,
        "isometry_conjugacy",
        "an isometry's boundary map conjugates by moving feet with the isometry",
        "d(foot φf(γ), g foot γ) ≤ tol",
        iso_err,
        CONJUGACY_TOL,
        Sense::AtMost,
        ELEMENTS,
    ));
    out.record(Record::new(
        SUITE,
        "tree_conjugacy",
        "flip, flow and isometry identities for tree automorphisms",
        "exact equality",
        tree_err,
        0.0,
        Sense::AtMost,
        TREE_ELEMENTS,
    ));

    // derivative of an isometry's boundary map between visual metrics
    let mut deriv_err = 0.0f64;
    for i in 0..100 {
        let (f, g) = &maps[i % MAPS];
        let (x, y) = (disk_point(&d, rng, SAMPLE_RADIUS), disk_point(&d, rng, SAMPLE_RADIUS));
        let eta = disk_end(rng);
        let df = map_derivative(f, &x, &y, &eta).expect("validated map");
        // ρ_y(gη, gζ) / ρ_x(η, ζ) → e^{B(gx, y, gη)}
        let expected = d.busemann(&d.apply(g, &x), &y, &d.apply_end(g, &eta)).exp();
        deriv_err = deriv_err.max((df / expected - 1.0).abs());
    }
    out.record(Record::new(
        SUITE,
        "map_derivative_isometry",
        "the metric derivative of an isometry's boundary map is an exponentiated Busemann function",
        "|df / e^{B(gx, y, gη)} - 1| ≤ tol",
        deriv_err,
        CONJUGACY_TOL,
        Sense::AtMost,
        100,
    ));

    let quads = cfg.grid.max(64);
    let mut good = maps[0].0.clone();
    let vg = good.validate_standard(cfg.grid, quads);
    let mut bad = MoebiusBoundaryMap::corrupted(&d, &maps[0].1, 1e-3).expect("small perturbation");
    let vb = bad.validate_standard(cfg.grid, quads);
    out.record(Record::new(
        SUITE,
        "isometry_map_validates",
        "isometry-induced boundary maps preserve cross-ratios",
        "cross-ratio residual ≤ tol",
        vg.cross_ratio_residual,
        CROSS_RATIO_TOL,
        Sense::AtMost,
        vg.quadruples,
    ));
    out.record(Record::new(
        SUITE,
        "corrupted_map_rejected",
        "a 1e-3 non-Moebius perturbation is caught by cross-ratio validation",
        "cross-ratio residual > tol and validation fails",
        if vb.pass { 0.0 } else { vb.cross_ratio_residual },
        CROSS_RATIO_TOL,
        Sense::AtLeast,
        vb.quadruples,
    ));
    out
}
