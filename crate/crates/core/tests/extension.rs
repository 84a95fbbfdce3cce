use std::f64::consts::{FRAC_PI_2, LN_2};

use approx::assert_relative_eq;
use cat1_boundary::circumcenter::u_k_eval;
use cat1_boundary::disk::{Disk, DiskEnd, DiskIso};
use cat1_boundary::extension::{
    angle_certificate, circumcenter_extension, circumcenter_extension_result, holder_record,
    nearest_visual_projection, qi_defect,
};
use cat1_boundary::flow_conjugacy::{FlowSet, MoebiusBoundaryMap};
use cat1_boundary::moebius_metrics::{antipodal_synthetic, dm_distance, pushforward, MoebiusMetric, SampleGrid};
use cat1_boundary::{Error, ModelSpace};

fn iso_map(d: &Disk, g: &DiskIso) -> MoebiusBoundaryMap<Disk> {
    let mut f = MoebiusBoundaryMap::from_isometry(d, g);
    assert!(f.validate_standard(64, 64).pass);
    f
}

fn ring(d: &Disk, c: &cat1_boundary::disk::DiskPoint, r: f64, n: usize) -> Vec<cat1_boundary::disk::DiskPoint> {
    (0..n).map(|i| d.ray_point(c, &d.fan_line(c, i as f64 / n as f64).plus, r)).collect()
}

#[test]
fn identity_extends_to_the_identity() {
    let d = Disk::default();
    let f = iso_map(&d, &DiskIso::IDENTITY);
    let x = d.polar(2.2, 1.0).unwrap();
    assert!(d.distance(&circumcenter_extension(&f, &x, 64).unwrap(), &x) < 1e-5);
}

#[test]
fn isometries_extend_to_themselves() {
    let d = Disk::default();
    let g = d.compose(&d.translation(1.4, 0.2), &DiskIso::rotation(-1.0));
    let f = iso_map(&d, &g);
    for x in [d.base_point(), d.polar(1.0, 2.0).unwrap(), d.polar(2.9, 4.0).unwrap()] {
        assert!(d.distance(&circumcenter_extension(&f, &x, 128).unwrap(), &d.apply(&g, &x)) < 1e-5);
    }
}

#[test]
fn extension_is_natural() {
    let d = Disk::default();
    let (gi, hi, fi) = (d.translation(0.6, 1.0), d.translation(0.9, -2.0), d.translation(0.4, 0.5));
    let (g, h, f) = (iso_map(&d, &gi), iso_map(&d, &hi), iso_map(&d, &fi));
    let hfg = h.compose(&f).compose(&g);
    let x = d.point(0.2, 0.3).unwrap();
    let lhs = circumcenter_extension(&hfg, &x, 128).unwrap();
    let fx = circumcenter_extension(&f, &d.apply(&gi, &x), 128).unwrap();
    assert!(d.distance(&lhs, &d.apply(&hi, &fx)) < 1e-5);
}

#[test]
fn unvalidated_maps_and_small_fans_are_refused() {
    let d = Disk::default();
    let f = MoebiusBoundaryMap::from_isometry(&d, &DiskIso::IDENTITY);
    assert!(matches!(circumcenter_extension(&f, &d.base_point(), 64), Err(Error::Unvalidated(_))));
    let f = iso_map(&d, &DiskIso::IDENTITY);
    assert!(circumcenter_extension_result(&f, &d.base_point(), 8).is_err());
}

#[test]
fn u_k_is_the_exponential_of_the_metric_distance() {
    let d = Disk::default();
    let o = d.base_point();
    let grid = SampleGrid::new(&d, 256, 4).unwrap();
    let g = d.translation(1.1, 2.5);
    let f = iso_map(&d, &g);
    let x = d.point(-0.3, 0.4).unwrap();
    let pf = pushforward(&f, &MoebiusMetric::visual(&d, &o, &x)).unwrap();
    let k = FlowSet::conjugated(&f, &x, 128).unwrap();
    for z in ring(&d, &d.point(0.1, 0.1).unwrap(), 1.5, 6) {
        let dm = dm_distance(&pf, &MoebiusMetric::visual(&d, &o, &z), &grid).unwrap();
        assert_relative_eq!(dm.exp(), u_k_eval(&d, &k, &z), max_relative = 1e-9);
    }
    let p = nearest_visual_projection(&pf, &grid).unwrap();
    assert!(d.distance(&p.point, &d.apply(&g, &x)) < 1e-6);
    assert!(p.distance < 1e-8);
}

#[test]
fn projection_of_a_visual_metric_is_its_point() {
    let d = Disk::default();
    let grid = SampleGrid::new(&d, 256, 4).unwrap();
    let y = d.polar(1.7, 5.0).unwrap();
    let p = nearest_visual_projection(&MoebiusMetric::visual(&d, &d.base_point(), &y), &grid).unwrap();
    assert!(d.distance(&p.point, &y) < 1e-6);
    assert!(p.distance < 1e-8);
    let c = angle_certificate(
        &MoebiusMetric::visual(&d, &d.base_point(), &y),
        &p.point,
        &ring(&d, &p.point, 1.0, 8),
        &grid,
        1e-6,
    )
    .unwrap();
    assert!(c.pass);
}

#[test]
fn synthetic_projection_certificate_and_defect() {
    let d = Disk::default();
    let grid = SampleGrid::new(&d, 256, 4).unwrap();
    let (mut m, _) = antipodal_synthetic(&d, &[(3, 0.02, 0.015), (5, 0.003, 0.004)], 256).unwrap();
    assert!(m.validate(&grid).pass);
    let p = nearest_visual_projection(&m, &grid).unwrap();
    assert!(p.result.certified);
    assert!(p.distance > 0.0 && p.distance <= 0.5 * LN_2);
    let at_min = angle_certificate(&m, &p.point, &ring(&d, &p.point, 1.0, 16), &grid, 1e-6).unwrap();
    assert!(at_min.pass, "{}", at_min.worst_angle);
    assert!(at_min.worst_angle >= FRAC_PI_2 - 1e-3);
    let off = d.ray_point(&p.point, &DiskEnd::new(0.3), 0.1);
    let displaced = angle_certificate(&m, &off, &ring(&d, &off, 1.0, 16), &grid, 1e-6).unwrap();
    assert!(!displaced.pass);
}

#[test]
fn unvalidated_metrics_cannot_be_projected() {
    let d = Disk::default();
    let grid = SampleGrid::new(&d, 256, 4).unwrap();
    let (m, _) = antipodal_synthetic(&d, &[(3, 0.02, 0.0)], 256).unwrap();
    assert!(matches!(nearest_visual_projection(&m, &grid), Err(Error::Unvalidated(_))));
}

#[test]
fn holder_and_qi_records_for_an_isometry() {
    let d = Disk::default();
    let g = d.translation(0.8, 0.1);
    let x = d.point(0.1, 0.2).unwrap();
    let y = d.point(0.3, -0.1).unwrap();
    let (fx, fy) = (d.apply(&g, &x), d.apply(&g, &y));
    let rec = holder_record(&d, &x, &y, &fx, &fy);
    // cosh t ≤ e^t and t ≤ 2√t for t ≤ 1
    assert!(rec.cosh_slack > 0.0 && rec.sqrt_slack > 0.0);
    assert!(qi_defect(&d, &x, &y, &fx, &fy) < 1e-12);
    let same = holder_record(&d, &x, &x, &fx, &fx);
    assert_eq!(same.cosh_slack, 0.0);
}
