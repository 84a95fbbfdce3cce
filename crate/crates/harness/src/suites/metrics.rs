use cat1_boundary::disk::DiskPoint;
use cat1_boundary::moebius_metrics::{
    antipodal_synthetic, dm_distance, maxmin_report, pushforward, MoebiusMetric, Provenance, SampleGrid,
};
use cat1_boundary::ModelSpace;
use rand_chacha::ChaCha20Rng;
use serde_json::json;

use super::*;
use crate::report::{Artifact, Record, Sense};

const SUITE: &str = "metrics";
pub const MAXMIN_TOL: f64 = 1e-6;
pub const EMBEDDING_TOL: f64 = 1e-5;
const SYNTHETIC: usize = 4;

/// Provenance, base point, shift and the log-density sampled on the grid.
pub fn metric_json(m: &MoebiusMetric<Disk>, grid: &SampleGrid<DiskEnd>) -> serde_json::Value {
    let point = |p: &DiskPoint| {
        let (x, y) = p.coords();
        json!([x, y])
    };
    let provenance = match m.provenance() {
        Provenance::Visual(x) => json!({ "kind": "visual", "point": point(x) }),
        Provenance::Pushforward { .. } => json!({ "kind": "pushforward", "label": m.label() }),
        Provenance::Synthetic { .. } => json!({ "kind": "synthetic", "label": m.label() }),
    };
    json!({
        "provenance": provenance,
        "base_point": point(m.base()),
        "shift": m.shift(),
        "validated": m.is_validated(),
        "grid": grid.points().iter().map(|e| e.angle()).collect::<Vec<_>>(),
        "log_density": grid.points().iter().map(|e| m.log_density(e)).collect::<Vec<_>>(),
    })
}

pub fn run(cfg: &Config, rng: &mut ChaCha20Rng) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let d = disk();
    let t = tree();
    let o = d.base_point();
    let g = grid(&d, cfg);
    let tg = grid(&t, cfg);

    // synthetic elements, seeds drawn before the parallel construction
    let seeds: Vec<_> = (0..SYNTHETIC).map(|_| (synthetic_seed(rng), disk_isometry(&d, rng))).collect();
    let built = par_map(&seeds, |(seed, iso)| {
        let (mut m, fit) = antipodal_synthetic(&d, seed, 256).expect("seed within budget");
        let v = m.validate(&g);
        (m, fit, v, iso.clone())
    });
    let tri = max_of(built.iter().map(|b| b.2.triangle_worst));
    let failures = built.iter().filter(|b| !b.2.pass).count();
    out.record(Record::new(
        SUITE,
        "synthetic_metrics_validate",
        "synthetic antipodal fixed points are diameter-one antipodal metrics",
        "validation failures = 0",
        failures as f64,
        0.0,
        Sense::AtMost,
        SYNTHETIC,
    ));
    out.record(Record::new(
        SUITE,
        "synthetic_triangle_inequality",
        "synthetic metrics satisfy the triangle inequality on the grid",
        "max ρ(a,c) - ρ(a,b) - ρ(b,c) ≤ tol",
        tri,
        cat1_boundary::moebius_metrics::TRIANGLE_TOL,
        Sense::AtMost,
        SYNTHETIC,
    ));
    let synthetic: Vec<MoebiusMetric<Disk>> = built
        .iter()
        .filter(|b| b.2.pass)
        .map(|b| pushforward(&iso_map(&d, &b.3), &b.0).expect("validated"))
        .collect();

    let mut shifted = MoebiusMetric::visual(&d, &o, &disk_point(&d, rng, SAMPLE_RADIUS)).shifted(0.05);
    let shifted_pass = shifted.validate(&g).pass;
    let budget_refused = antipodal_synthetic(&d, &[(3, 0.05, 0.0)], 256).is_err();
    out.record(Record::new(
        SUITE,
        "negative_controls",
        "rescaled metrics and over-curved seeds are refused",
        "shifted metric fails validation and an over-budget seed is an error",
        if !shifted_pass && budget_refused { 0.0 } else { 1.0 },
        0.0,
        Sense::AtMost,
        2,
    ));

    // max/min of the derivative on 100 validated pairs
    let mut disk_pairs: Vec<(MoebiusMetric<Disk>, MoebiusMetric<Disk>)> = Vec::new();
    for _ in 0..70 {
        let (x, y) = (disk_point(&d, rng, SAMPLE_RADIUS), disk_point(&d, rng, SAMPLE_RADIUS));
        disk_pairs.push((MoebiusMetric::visual(&d, &o, &x), MoebiusMetric::visual(&d, &o, &y)));
    }
    for (i, s) in synthetic.iter().enumerate() {
        for _ in 0..3 {
            let y = disk_point(&d, rng, SAMPLE_RADIUS);
            disk_pairs.push((s.clone(), MoebiusMetric::visual(&d, &o, &y)));
        }
        for other in &synthetic[i + 1..] {
            disk_pairs.push((s.clone(), other.clone()));
        }
        let f = iso_map(&d, &disk_isometry(&d, rng));
        let x = disk_point(&d, rng, SAMPLE_RADIUS);
        disk_pairs.push((s.clone(), pushforward(&f, &MoebiusMetric::visual(&d, &o, &x)).expect("validated")));
    }
    let mut tree_pairs = Vec::new();
    for _ in 0..10 {
        let (x, y) = (tree_point(&t, rng), tree_point(&t, rng));
        tree_pairs.push((MoebiusMetric::visual(&t, &t.base_point(), &x), MoebiusMetric::visual(&t, &t.base_point(), &y)));
    }
    let disk_reports = par_map(&disk_pairs, |(r2, r1)| maxmin_report(r2, r1, &g).expect("validated pair"));
    let tree_reports: Vec<_> = tree_pairs.iter().map(|(r2, r1)| maxmin_report(r2, r1, &tg).expect("validated pair")).collect();
    let product = max_of(
        disk_reports
            .iter()
            .map(|r| r.product_residual)
            .chain(tree_reports.iter().map(|r| r.product_residual)),
    );
    let partner = max_of(
        disk_reports
            .iter()
            .map(|r| (r.partner_rho1 - 1.0).abs().max((r.partner_rho2 - 1.0).abs()).max(r.partner_min_gap.abs()))
            .chain(tree_reports.iter().map(|r| {
                (r.partner_rho1 - 1.0).abs().max((r.partner_rho2 - 1.0).abs()).max(r.partner_min_gap.abs())
            })),
    );
    let pairs = disk_reports.len() + tree_reports.len();
    out.record(Record::new(
        SUITE,
        "maxmin_product",
        "the maximum and minimum of the derivative multiply to one",
        "|λμ - 1| ≤ tol",
        product,
        MAXMIN_TOL,
        Sense::AtMost,
        pairs,
    ));
    out.record(Record::new(
        SUITE,
        "maxmin_partner",
        "the argmax has a partner at distance one in both metrics where the minimum is attained",
        "|ρ1(ξ,η) - 1|, |ρ2(ξ,η) - 1|, |log dρ2/dρ1(η) - log μ| ≤ tol",
        partner,
        MAXMIN_TOL,
        Sense::AtMost,
        pairs,
    ));

    // d_M(ρ_x, ρ_y) = d(x, y)
    let disk_xy: Vec<_> = (0..90).map(|_| (disk_point(&d, rng, SAMPLE_RADIUS), disk_point(&d, rng, SAMPLE_RADIUS))).collect();
    let disk_err = par_map(&disk_xy, |(x, y)| {
        let dm = dm_distance(&MoebiusMetric::visual(&d, &o, x), &MoebiusMetric::visual(&d, &o, y), &g).expect("validated");
        (dm - d.distance(x, y)).abs()
    });
    let tree_err = (0..10).map(|_| {
        let (x, y) = (tree_point(&t, rng), tree_point(&t, rng));
        let o = t.base_point();
        let dm = dm_distance(&MoebiusMetric::visual(&t, &o, &x), &MoebiusMetric::visual(&t, &o, &y), &tg).expect("validated");
        (dm - t.distance(&x, &y)).abs()
    });
    let embed = max_of(disk_err.into_iter().chain(tree_err));
    out.record(Record::new(
        SUITE,
        "visual_embedding_isometric",
        "x ↦ ρx is an isometric embedding into the Moebius metric space",
        "|dM(ρx, ρy) - d(x,y)| ≤ tol",
        embed,
        EMBEDDING_TOL,
        Sense::AtMost,
        100,
    ));

    out.artifacts.push(Artifact {
        name: "metrics".into(),
        value: serde_json::Value::Array(synthetic.iter().map(|m| metric_json(m, &g)).collect()),
    });
    out
}
