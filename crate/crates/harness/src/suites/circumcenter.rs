use cat1_boundary::circumcenter::{asymptotic_circumcenter_from, circumcenter_flow_convergence, convexity_probe};
use cat1_boundary::flow_conjugacy::FlowSet;
use cat1_boundary::ModelSpace;
use rand::Rng;
use rand_chacha::ChaCha20Rng;

use super::*;
use crate::report::{Record, Sense, Table};

const SUITE: &str = "circumcenter";
const GEODESICS: usize = 1000;
const FANS: usize = 20;
pub const CONVEXITY_TOL: f64 = -1e-8;
/// Step of the three-point convexity probe.
pub const PROBE_STEP: f64 = 1e-2;
pub const LIMIT_TOL: f64 = 1e-3;
/// Allowed increase between consecutive recorded distances once the
/// sequence has reached the optimizer's resolution.
pub const MONOTONE_FLOOR: f64 = 2e-6;
pub const FLOW_TIMES: [f64; 13] = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0];
pub const MONOTONE_FROM: f64 = 4.0;

pub fn run(_cfg: &Config, rng: &mut ChaCha20Rng) -> SuiteOutput {
    let mut out = SuiteOutput::default();
    let d = disk();
    let t = tree();

    let (mut cosh_slack, mut busemann_slack, mut control) = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
    for _ in 0..GEODESICS {
        let line = d.fan_line(&disk_point(&d, rng, SAMPLE_RADIUS), rng.gen_range(0.0..1.0));
        let p = disk_point(&d, rng, SAMPLE_RADIUS);
        cosh_slack = cosh_slack.min(convexity_probe(&d, |z| d.distance(z, &p).cosh(), std::slice::from_ref(&line), PROBE_STEP));
        let (y, xi) = (disk_point(&d, rng, SAMPLE_RADIUS), disk_end(rng));
        busemann_slack =
            busemann_slack.min(convexity_probe(&d, |z| d.busemann(z, &y, &xi).exp(), std::slice::from_ref(&line), PROBE_STEP));
        // a concave function through its peak
        let through = d.fan_line(&p, rng.gen_range(0.0..1.0));
        control = control.min(convexity_probe(&d, |z| -d.distance(z, &p), std::slice::from_ref(&through), PROBE_STEP));
    }
    let mut tree_slack = f64::INFINITY;
    for _ in 0..200 {
        let line = t.fan_line(&tree_point(&t, rng), rng.gen_range(0.0..1.0));
        let p = tree_point(&t, rng);
        let (y, xi) = (tree_point(&t, rng), tree_end(&t, rng));
        let lines = std::slice::from_ref(&line);
        for h in [0.25, 0.5] {
            tree_slack = tree_slack
                .min(convexity_probe(&t, |z| t.distance(z, &p).cosh(), lines, h))
                .min(convexity_probe(&t, |z| t.busemann(z, &y, &xi).exp(), lines, h));
        }
    }
    out.record(Record::new(
        SUITE,
        "convexity_cosh_distance",
        "z ↦ cosh d(z, p) is F(-1)-convex",
        "three-point slack ≥ tol",
        cosh_slack,
        CONVEXITY_TOL,
        Sense::AtLeast,
        GEODESICS,
    ));
    out.record(Record::new(
        SUITE,
        "convexity_exp_busemann",
        "z ↦ exp B(z, y, ξ) is F(-1)-convex",
        "three-point slack ≥ tol",
        busemann_slack,
        CONVEXITY_TOL,
        Sense::AtLeast,
        GEODESICS,
    ));
    out.record(Record::new(
        SUITE,
        "convexity_negative_control",
        "the probe rejects z ↦ -d(z, p) through p",
        "three-point slack < tol",
        control,
        CONVEXITY_TOL,
        Sense::AtMost,
        GEODESICS,
    ));
    out.record(Record::new(
        SUITE,
        "convexity_tree",
        "cosh-distance and exp-Busemann are F(-1)-convex on the tree",
        "three-point slack ≥ tol",
        tree_slack,
        CONVEXITY_TOL,
        Sense::AtLeast,
        200,
    ));

    // random finite flow sets: 3 to 6 lines with random ends and feet
    let fans: Vec<Vec<_>> = (0..FANS)
        .map(|_| {
            let k = rng.gen_range(3..=6);
            let mut lines = Vec::with_capacity(k);
            while lines.len() < k {
                let (a, b) = (disk_end(rng), disk_end(rng));
                if end_gap(&a, &b) < 0.1 {
                    continue;
                }
                let mut l = d.line(&a, &b).expect("distinct ends");
                l.offset = rng.gen_range(-1.0..1.0);
                lines.push(l);
            }
            lines
        })
        .collect();
    let starts: Vec<Vec<_>> = (0..FANS).map(|_| (0..4).map(|_| disk_point(&d, rng, 2.0)).collect()).collect();
    let tables = par_map(&fans, |lines| circumcenter_flow_convergence(&d, lines, &FLOW_TIMES).expect("proper flow set"));
    let mut table = Table::new("flow_convergence", &["fan", "t", "radius", "distance", "ut_error"]);
    let (mut final_dist, mut final_ut, mut rise) = (0.0f64, 0.0f64, f64::NEG_INFINITY);
    for (i, tab) in tables.iter().enumerate() {
        for r in &tab.rows {
            table.push(vec![i as f64, r.t, r.radius, r.distance, r.ut_error]);
        }
        let last = tab.rows.last().expect("times given");
        final_dist = final_dist.max(last.distance);
        final_ut = final_ut.max(last.ut_error);
        for w in tab.rows.windows(2).filter(|w| w[0].t >= MONOTONE_FROM) {
            rise = rise.max(w[1].distance - w[0].distance);
        }
    }
    out.tables.push(table);
    out.record(Record::new(
        SUITE,
        "flow_limit_distance",
        "circumcenters of flowed foot sets converge to the asymptotic circumcenter",
        "d(c(A_12), c∞(K)) < tol",
        final_dist,
        LIMIT_TOL,
        Sense::AtMost,
        FANS,
    ));
    out.record(Record::new(
        SUITE,
        "flow_monotone_after_4",
        "the recorded distances decrease from t = 4 on",
        "max d(c(A_t+1), c∞) - d(c(A_t), c∞) ≤ optimizer floor",
        rise,
        MONOTONE_FLOOR,
        Sense::AtMost,
        FANS,
    ));
    out.record(Record::new(
        SUITE,
        "flow_objective_convergence",
        "u_t converges to u_K on compact sets",
        "sup |u_12 - u_K| on the radius-1 probe ball < tol",
        final_ut,
        LIMIT_TOL,
        Sense::AtMost,
        FANS,
    ));

    let restart = par_map(&(0..FANS).collect::<Vec<_>>(), |&i| {
        let k = FlowSet::finite(fans[i].clone()).expect("nonempty");
        let limit = &tables[i].limit.argmin;
        let mut worst = 0.0f64;
        for s in &starts[i] {
            let r = asymptotic_circumcenter_from(&d, &k, s).expect("proper flow set");
            worst = worst.max(d.distance(&r.argmin, limit));
        }
        worst
    });
    out.record(Record::new(
        SUITE,
        "unique_minimizer",
        "u_K has a unique minimizer",
        "restarts from 4 random points agree within tol",
        max_of(restart),
        1e-5,
        Sense::AtMost,
        FANS * 4,
    ));
    let certified = tables.iter().filter(|t| t.limit.certified).count();
    out.record(Record::new(
        SUITE,
        "minimizer_certified",
        "every asymptotic circumcenter passes its probe certificate",
        "uncertified minimizers = 0",
        (FANS - certified) as f64,
        0.0,
        Sense::AtMost,
        FANS,
    ));
    out
}
