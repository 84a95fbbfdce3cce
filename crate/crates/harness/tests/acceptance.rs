//! The twelve acceptance criteria at desk scale: disk with k = 1, tree with
//! q = 3, fan 128, grid 256, master seed 7. Each criterion is judged from
//! the records of a full run and prints one PASS/FAIL line.

use std::fs;

use cat1_verify::config::{Config, Selection};
use cat1_verify::{run_and_write, Record};

/// (criterion, description, [(suite, check, minimum samples)])
const CRITERIA: &[(u32, &str, &[(&str, &str, usize)])] = &[
    (
        1,
        "closed forms agree with radial-limit oracles to 1e-6; GMVT residual < 1e-8",
        &[
            ("boundary", "oracle_gromov_product", 1000),
            ("boundary", "oracle_busemann", 1000),
            ("boundary", "oracle_visual_metric", 1000),
            ("boundary", "oracle_tree", 100),
            ("boundary", "gmvt_residual", 1000),
        ],
    ),
    (
        2,
        "comparison angles match finite triangles to 1e-4; angle/Busemann round trip < 1e-8",
        &[
            ("boundary", "comparison_angle_oracle", 1000),
            ("boundary", "busemann_angle_oracle", 1000),
            ("boundary", "angle_busemann_round_trip", 1000),
        ],
    ),
    (
        3,
        "max·min of the derivative is one and the partner clause holds to 1e-6",
        &[
            ("metrics", "synthetic_metrics_validate", 1),
            ("metrics", "maxmin_product", 100),
            ("metrics", "maxmin_partner", 100),
        ],
    ),
    (4, "dM(ρx, ρy) = d(x, y) to 1e-5", &[("metrics", "visual_embedding_isometric", 100)]),
    (
        5,
        "flip equivariance and flow conjugation < 1e-8; corrupted map rejected",
        &[
            ("flow", "flip_equivariance", 1000),
            ("flow", "flow_conjugation", 1000),
            ("flow", "isometry_conjugacy", 1000),
            ("flow", "tree_conjugacy", 100),
            ("flow", "corrupted_map_rejected", 1),
        ],
    ),
    (
        6,
        "convexity probes have slack ≥ -1e-8; the negative control fails",
        &[
            ("circumcenter", "convexity_cosh_distance", 1000),
            ("circumcenter", "convexity_exp_busemann", 1000),
            ("circumcenter", "convexity_negative_control", 1000),
        ],
    ),
    (
        7,
        "flowed circumcenters within 1e-3 at t = 12, decreasing after t = 4; u_t error < 1e-3",
        &[
            ("circumcenter", "flow_limit_distance", 20),
            ("circumcenter", "flow_monotone_after_4", 20),
            ("circumcenter", "flow_objective_convergence", 20),
        ],
    ),
    (
        8,
        "exp dM(f*ρx, ρz) = u_K(z) to relative 1e-5; constructions agree to 2e-5",
        &[("extension", "metric_distance_equals_uk", 200), ("extension", "constructions_agree", 100)],
    ),
    (
        9,
        "the extension recovers isometries to 1e-5 and is natural to 1e-5",
        &[("extension", "isometry_recovered", 100), ("extension", "naturality", 1)],
    ),
    (
        10,
        "Hölder bounds on 500 close pairs; QI defect ≤ log 2 and point defect ≤ ½ log 2 on 500 pairs",
        &[
            ("holder", "holder_cosh", 500),
            ("holder", "holder_sqrt", 500),
            ("qi", "qi_additive_defect", 500),
            ("qi", "qi_point_defect", 1000),
            ("qi", "synthetic_point_defect", 10),
        ],
    ),
    (
        11,
        "angle certificate passes at the minimizer and fails 0.1 away in ≥ 9/10 cases",
        &[("extension", "certificate_at_minimizer", 10), ("extension", "certificate_sensitivity", 10)],
    ),
];

fn find<'a>(records: &'a [Record], suite: &str, check: &str) -> Option<&'a Record> {
    records.iter().find(|r| r.suite == suite && r.check == check)
}

#[test]
fn acceptance_criteria() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let cfg = Config { suite: Selection::All, out: dir_a.path().to_path_buf(), ..Config::default() };
    assert_eq!((cfg.seed, cfg.fan, cfg.grid, cfg.pairs), (7, 128, 256, 500));
    let first = run_and_write(&cfg).unwrap();
    let records = &first.report.records;

    let mut all = true;
    for &(n, what, checks) in CRITERIA {
        let mut notes = Vec::new();
        let mut pass = true;
        for &(suite, check, min_samples) in checks {
            match find(records, suite, check) {
                Some(r) => {
                    let ok = r.pass && r.samples >= min_samples;
                    pass &= ok;
                    if !ok {
                        notes.push(format!(
                            "{suite}/{check}: worst {:e}, tolerance {:e}, samples {}",
                            r.worst_observed, r.tolerance, r.samples
                        ));
                    }
                }
                None => {
                    pass = false;
                    notes.push(format!("{suite}/{check}: missing"));
                }
            }
        }
        println!("[{}] C{n:02} {what}", if pass { "PASS" } else { "FAIL" });
        for note in notes {
            println!("        {note}");
        }
        all &= pass;
    }

    let second = run_and_write(&Config { out: dir_b.path().to_path_buf(), ..cfg.clone() }).unwrap();
    let a = fs::read(dir_a.path().join("report.json")).unwrap();
    let b = fs::read(dir_b.path().join("report.json")).unwrap();
    let same = a == b && first.report.to_json() == second.report.to_json();
    println!("[{}] C12 two runs with identical config write byte-identical report.json", if same { "PASS" } else { "FAIL" });
    all &= same;

    assert!(all, "acceptance criteria failed");
}
