use std::f64::consts::{FRAC_PI_2, LN_2};

use cat1_boundary::circumcenter::u_k_eval;
use cat1_boundary::disk::{DiskIso, DiskPoint};
use cat1_boundary::extension::{
    angle_certificate, circumcenter_extension, holder_record, nearest_visual_projection, qi_defect, ANGLE_SLACK,
    ARGMAX_THICKENING,
};
use cat1_boundary::flow_conjugacy::FlowSet;
use cat1_boundary::moebius_metrics::{dm_distance, pushforward, MoebiusMetric};
use cat1_boundary::ModelSpace;
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use super::*;
use crate::report::{Artifact, Record, Sense, Table};

pub const IDENTITY_TOL: f64 = 1e-5;
pub const AGREEMENT_TOL: f64 = 2e-5;
pub const RECOVERY_TOL: f64 = 1e-5;
pub const NATURALITY_TOL: f64 = 1e-5;
pub const FAN_DOUBLING_TOL: f64 = 1e-3;
/// Discretization allowance on the Hölder and quasi-isometry bounds.
pub const BOUND_SLACK: f64 = 1e-4;
/// Displacement of the sensitivity check of the angle certificate.
pub const DISPLACEMENT: f64 = 0.1;
const MAPS: usize = 10;
const CERTIFICATE_METRICS: usize = 10;

/// Per-sample data of the extension of one boundary map.
#[derive(Clone, Debug, Serialize)]
pub struct ExtensionSample {
    pub x: [f64; 2],
    pub fx: [f64; 2],
    /// `d_M(f_*ρ_x, ρ_{f̂(x)})`.
    pub point_defect: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionReport {
    pub map: String,
    pub fan: usize,
    pub seed: u64,
    pub samples: Vec<ExtensionSample>,
    pub worst_qi_defect: f64,
    /// Only the Hölder suite samples close pairs.
    pub worst_holder_residual: Option<f64>,
    pub qi_bound: f64,
    pub point_defect_bound: f64,
    pub holder_slack: f64,
}

fn xy(p: &DiskPoint) -> [f64; 2] {
    let (x, y) = p.coords();
    [x, y]
}

fn maps<R: Rng>(d: &Disk, rng: &mut R, n: usize) -> Vec<(DiskIso, cat1_boundary::flow_conjugacy::MoebiusBoundaryMap<Disk>)> {
    (0..n)
        .map(|_| {
            let g = disk_isometry(d, rng);
            let f = iso_map(d, &g);
            (g, f)
        })
        .collect()
}

/// Probes for the angle certificate: 16 directions at distance 1 and 8 at
/// distance 0.3.
fn certificate_probes(d: &Disk, c: &DiskPoint) -> Vec<DiskPoint> {
    let mut out = Vec::with_capacity(24);
    for (n, r) in [(16usize, 1.0), (8, 0.3)] {
        for i in 0..n {
            out.push(d.ray_point(c, &d.fan_line(c, (i as f64 + 0.25) / n as f64).plus, r));
        }
    }
    out
}

pub fn run(cfg: &Config, rng: &mut ChaCha20Rng) -> SuiteOutput {
    const SUITE: &str = "extension";
    let mut out = SuiteOutput::default();
    let d = disk();
    let o = d.base_point();
    let g = grid(&d, cfg);
    let fan = cfg.fan;
    let maps = maps(&d, rng, MAPS);

    // exp(d_M(f_*ρ_x, ρ_z)) = u_K(z) at 20 points for 10 (f, x)
    let cases: Vec<_> = (0..MAPS)
        .map(|i| {
            let x = disk_point(&d, rng, SAMPLE_RADIUS);
            let zs: Vec<_> = (0..20).map(|_| disk_point(&d, rng, SAMPLE_RADIUS)).collect();
            (i, x, zs)
        })
        .collect();
    let identity = par_map(&cases, |(i, x, zs)| {
        let f = &maps[*i].1;
        let pf = pushforward(f, &MoebiusMetric::visual(&d, &o, x)).expect("validated");
        let k = FlowSet::conjugated(f, x, fan).expect("validated map");
        max_of(zs.iter().map(|z| {
            let u = u_k_eval(&d, &k, z);
            let dm = dm_distance(&pf, &MoebiusMetric::visual(&d, &o, z), &g).expect("validated");
            (dm.exp() - u).abs() / u
        }))
    });
    out.record(Record::new(
        SUITE,
        "metric_distance_equals_uk",
        "exp dM(f*ρx, ρz) equals u_K(z) for the conjugated fan at x",
        "relative error ≤ tol",
        max_of(identity),
        IDENTITY_TOL,
        Sense::AtMost,
        MAPS * 20,
    ));

    // both constructions of f̂ on 100 points, which also checks f̂ = g
    let xs: Vec<_> = (0..100).map(|i| (i % MAPS, disk_point(&d, rng, SAMPLE_RADIUS))).collect();
    let both = par_map(&xs, |(i, x)| {
        let (gi, f) = &maps[*i];
        let c = circumcenter_extension(f, x, fan).expect("validated map");
        let pf = pushforward(f, &MoebiusMetric::visual(&d, &o, x)).expect("validated");
        let p = nearest_visual_projection(&pf, &g).expect("validated");
        (d.distance(&c, &p.point), d.distance(&c, &d.apply(gi, x)))
    });
    out.record(Record::new(
        SUITE,
        "constructions_agree",
        "the circumcenter extension is the nearest visual point of the pushed metric",
        "d(c∞(φf(T¹x)), argmin dM(f*ρx, ρ·)) ≤ tol",
        max_of(both.iter().map(|b| b.0)),
        AGREEMENT_TOL,
        Sense::AtMost,
        both.len(),
    ));
    let t = tree();
    let tree_cases: Vec<_> = (0..10)
        .map(|_| {
            let gi = tree_isometry(&t, rng);
            (iso_map(&t, &gi), gi, tree_point(&t, rng))
        })
        .collect();
    let tree_recovery = max_of(tree_cases.iter().map(|(f, gi, x)| {
        let c = circumcenter_extension(f, x, fan).expect("validated map");
        t.distance(&c, &t.apply(gi, x))
    }));
    out.record(Record::new(
        SUITE,
        "isometry_recovered",
        "the extension of an isometry's boundary map is the isometry",
        "d(f̂x, gx) ≤ tol",
        max_of(both.iter().map(|b| b.1).chain([tree_recovery])),
        RECOVERY_TOL,
        Sense::AtMost,
        both.len() + tree_cases.len(),
    ));

    // ĥfg = H f̂ G
    let nat_cases: Vec<_> = (0..20)
        .map(|i| {
            let (gg, hh) = (disk_isometry(&d, rng), disk_isometry(&d, rng));
            (i % MAPS, gg, hh, disk_point(&d, rng, SAMPLE_RADIUS))
        })
        .collect();
    let naturality = par_map(&nat_cases, |(i, gg, hh, x)| {
        let f = &maps[*i].1;
        let composite = iso_map(&d, hh).compose(f).compose(&iso_map(&d, gg));
        let lhs = circumcenter_extension(&composite, x, fan).expect("validated");
        let rhs = d.apply(hh, &circumcenter_extension(f, &d.apply(gg, x), fan).expect("validated"));
        d.distance(&lhs, &rhs)
    });
    out.record(Record::new(
        SUITE,
        "naturality",
        "the extension commutes with pre- and post-composition by isometries",
        "d(ext(h∘f∘g)(x), H f̂ G x) ≤ tol",
        max_of(naturality),
        NATURALITY_TOL,
        Sense::AtMost,
        nat_cases.len(),
    ));

    let half = (fan / 2).max(16);
    let doubling_cases: Vec<_> = (0..10).map(|i| (i % MAPS, disk_point(&d, rng, SAMPLE_RADIUS))).collect();
    let doubling = par_map(&doubling_cases, |(i, x)| {
        let f = &maps[*i].1;
        let a = circumcenter_extension(f, x, half).expect("validated");
        let b = circumcenter_extension(f, x, fan).expect("validated");
        d.distance(&a, &b)
    });
    let mut table = Table::new("fan_size_convergence", &["sample", "n_small", "n_large", "distance"]);
    for (j, v) in doubling.iter().enumerate() {
        table.push(vec![j as f64, half as f64, fan as f64, *v]);
    }
    out.tables.push(table);
    out.record(Record::new(
        SUITE,
        "fan_doubling",
        "the extension is stable under doubling the fan size",
        "d(f̂_n x, f̂_2n x) ≤ tol",
        max_of(doubling),
        FAN_DOUBLING_TOL,
        Sense::AtMost,
        10,
    ));

    // angle certificate on synthetic metrics
    let specs: Vec<_> = (0..CERTIFICATE_METRICS)
        .map(|_| (synthetic_seed(rng), disk_isometry(&d, rng), disk_end(rng)))
        .collect();
    let certs = par_map(&specs, |(seed, iso, dir)| {
        let rho = build_synthetic(&d, &g, seed, iso);
        let p = nearest_visual_projection(&rho, &g).expect("validated");
        let at = angle_certificate(&rho, &p.point, &certificate_probes(&d, &p.point), &g, ARGMAX_THICKENING).expect("validated");
        let off = d.ray_point(&p.point, dir, DISPLACEMENT);
        let displaced = angle_certificate(&rho, &off, &certificate_probes(&d, &off), &g, ARGMAX_THICKENING).expect("validated");
        (p.result.certified, p.distance, at.worst_angle, displaced.worst_angle, displaced.pass)
    });
    let mut table = Table::new("angle_certificate", &["metric", "projection_distance", "angle_at_minimizer", "angle_displaced"]);
    for (j, c) in certs.iter().enumerate() {
        table.push(vec![j as f64, c.1, c.2, c.3]);
    }
    out.tables.push(table);
    out.record(Record::new(
        SUITE,
        "certificate_at_minimizer",
        "at the nearest visual point every direction sees a maximizing end at angle at least π/2",
        "min over metrics and probes of the best angle ≥ π/2 - 1e-3",
        min_of(certs.iter().map(|c| c.2)),
        FRAC_PI_2 - ANGLE_SLACK,
        Sense::AtLeast,
        CERTIFICATE_METRICS,
    ));
    out.record(Record::new(
        SUITE,
        "certificate_sensitivity",
        "the angle certificate fails at points displaced 0.1 from the minimizer",
        "displaced failures ≥ 9 of 10",
        certs.iter().filter(|c| !c.4).count() as f64,
        (CERTIFICATE_METRICS - CERTIFICATE_METRICS / 10) as f64,
        Sense::AtLeast,
        CERTIFICATE_METRICS,
    ));
    out.record(Record::new(
        SUITE,
        "projection_certified",
        "every synthetic projection passes the minimizer's probe certificate",
        "uncertified projections = 0",
        certs.iter().filter(|c| !c.0).count() as f64,
        0.0,
        Sense::AtMost,
        CERTIFICATE_METRICS,
    ));
    out
}

pub fn run_holder(cfg: &Config, rng: &mut ChaCha20Rng) -> SuiteOutput {
    const SUITE: &str = "holder";
    let mut out = SuiteOutput::default();
    let d = disk();
    let maps = maps(&d, rng, MAPS);
    let pairs: Vec<_> = (0..cfg.pairs)
        .map(|i| {
            let x = disk_point(&d, rng, SAMPLE_RADIUS);
            let y = d.ray_point(&x, &disk_end(rng), rng.gen_range(0.0..=1.0));
            (i % MAPS, x, y)
        })
        .collect();
    let recs = par_map(&pairs, |(i, x, y)| {
        let f = &maps[*i].1;
        let fx = circumcenter_extension(f, x, cfg.fan).expect("validated");
        let fy = circumcenter_extension(f, y, cfg.fan).expect("validated");
        holder_record(&d, x, y, &fx, &fy)
    });
    let mut table = Table::new("holder", &["pair", "distance", "image_distance", "cosh_slack", "sqrt_slack"]);
    for (j, r) in recs.iter().enumerate() {
        table.push(vec![j as f64, r.distance, r.image_distance, r.cosh_slack, r.sqrt_slack]);
    }
    out.tables.push(table);
    out.record(Record::new(
        SUITE,
        "holder_cosh",
        "cosh d(f̂x, f̂y) ≤ e^{d(x,y)}",
        "max cosh d(f̂x,f̂y) - e^{d(x,y)} ≤ 1e-4 on pairs with d ≤ 1",
        max_of(recs.iter().map(|r| -r.cosh_slack)),
        BOUND_SLACK,
        Sense::AtMost,
        recs.len(),
    ));
    out.record(Record::new(
        SUITE,
        "holder_sqrt",
        "d(f̂x, f̂y) ≤ 2 d(x,y)^{1/2}",
        "max d(f̂x,f̂y) - 2 d(x,y)^{1/2} ≤ 1e-4 on pairs with d ≤ 1",
        max_of(recs.iter().map(|r| -r.sqrt_slack)),
        BOUND_SLACK,
        Sense::AtMost,
        recs.len(),
    ));
    out
}

pub fn run_qi(cfg: &Config, rng: &mut ChaCha20Rng) -> SuiteOutput {
    const SUITE: &str = "qi";
    let mut out = SuiteOutput::default();
    let d = disk();
    let o = d.base_point();
    let g = grid(&d, cfg);
    let maps = maps(&d, rng, MAPS);
    let pairs: Vec<_> = (0..cfg.pairs)
        .map(|i| (i % MAPS, disk_point(&d, rng, SAMPLE_RADIUS), disk_point(&d, rng, SAMPLE_RADIUS)))
        .collect();
    let point = |f: &cat1_boundary::flow_conjugacy::MoebiusBoundaryMap<Disk>, x: &DiskPoint| {
        let fx = circumcenter_extension(f, x, cfg.fan).expect("validated");
        let pf = pushforward(f, &MoebiusMetric::visual(&d, &o, x)).expect("validated");
        let defect = dm_distance(&pf, &MoebiusMetric::visual(&d, &o, &fx), &g).expect("validated");
        (fx, defect)
    };
    let recs = par_map(&pairs, |(i, x, y)| {
        let f = &maps[*i].1;
        let ((fx, dx), (fy, dy)) = (point(f, x), point(f, y));
        (qi_defect(&d, x, y, &fx, &fy), dx, dy, fx, fy)
    });
    let qi = max_of(recs.iter().map(|r| r.0));
    let point_defect = max_of(recs.iter().map(|r| r.1.max(r.2)));
    let chain = max_of(recs.iter().map(|r| r.0 - r.1 - r.2));
    out.record(Record::new(
        SUITE,
        "qi_additive_defect",
        "the extension is a (1, log 2)-quasi-isometry",
        "|d(f̂x,f̂y) - d(x,y)| ≤ log 2 + 1e-4 on pairs in the radius-3 ball",
        qi,
        LN_2 + BOUND_SLACK,
        Sense::AtMost,
        recs.len(),
    ));
    out.record(Record::new(
        SUITE,
        "qi_point_defect",
        "each pushed visual metric is within ½ log 2 of the visual metric at its extension point",
        "dM(f*ρx, ρ_f̂x) ≤ ½ log 2 + 1e-4",
        point_defect,
        0.5 * LN_2 + BOUND_SLACK,
        Sense::AtMost,
        2 * recs.len(),
    ));
    out.record(Record::new(
        SUITE,
        "qi_defect_chain",
        "the additive defect is bounded by the two point defects",
        "|d(f̂x,f̂y) - d(x,y)| - dM(f*ρx, ρ_f̂x) - dM(f*ρy, ρ_f̂y) ≤ 1e-4",
        chain,
        BOUND_SLACK,
        Sense::AtMost,
        recs.len(),
    ));

    // nontrivial point defects come from synthetic elements
    let specs: Vec<_> = (0..CERTIFICATE_METRICS).map(|_| (synthetic_seed(rng), disk_isometry(&d, rng))).collect();
    let synthetic = par_map(&specs, |(seed, iso)| {
        let rho = build_synthetic(&d, &g, seed, iso);
        nearest_visual_projection(&rho, &g).expect("validated").distance
    });
    out.record(Record::new(
        SUITE,
        "synthetic_point_defect",
        "every validated metric is within ½ log 2 of its nearest visual metric",
        "min_z dM(ρ, ρz) ≤ ½ log 2 + 1e-4",
        max_of(synthetic.iter().copied()),
        0.5 * LN_2 + BOUND_SLACK,
        Sense::AtMost,
        synthetic.len(),
    ));
    let mut table = Table::new("synthetic_point_defect", &["metric", "defect"]);
    for (j, v) in synthetic.iter().enumerate() {
        table.push(vec![j as f64, *v]);
    }
    out.tables.push(table);

    let reports: Vec<ExtensionReport> = maps
        .iter()
        .enumerate()
        .map(|(i, (gi, _))| {
            let mine: Vec<_> = pairs.iter().zip(&recs).filter(|(p, _)| p.0 == i).collect();
            let (a, b) = (gi.alpha, gi.beta);
            ExtensionReport {
                map: format!("boundary of the disk isometry z ↦ (αz + β)/(β̄z + ᾱ), α = {a}, β = {b}"),
                fan: cfg.fan,
                seed: cfg.seed,
                samples: mine
                    .iter()
                    .flat_map(|(p, r)| {
                        [
                            ExtensionSample { x: xy(&p.1), fx: xy(&r.3), point_defect: r.1 },
                            ExtensionSample { x: xy(&p.2), fx: xy(&r.4), point_defect: r.2 },
                        ]
                    })
                    .collect(),
                worst_qi_defect: max_of(mine.iter().map(|(_, r)| r.0)),
                worst_holder_residual: None,
                qi_bound: LN_2 + BOUND_SLACK,
                point_defect_bound: 0.5 * LN_2 + BOUND_SLACK,
                holder_slack: BOUND_SLACK,
            }
        })
        .collect();
    out.artifacts.push(Artifact { name: "extension_report".into(), value: serde_json::to_value(&reports).expect("serializes") });
    out
}
