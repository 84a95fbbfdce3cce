use std::sync::Arc;

use approx::assert_relative_eq;
use cat1_boundary::disk::{Disk, DiskEnd, DiskIso};
use cat1_boundary::flow_conjugacy::{conjugacy, map_derivative, weyl_quadruples, MoebiusBoundaryMap};
use cat1_boundary::moebius_metrics::{
    antipodal_synthetic, derivative, dm_distance, maxmin_report, pushforward, validate_metric, MoebiusMetric,
    SampleGrid,
};
use cat1_boundary::space::foot;
use cat1_boundary::tree::Tree;
use cat1_boundary::{Error, ModelSpace};
use num_rational::Ratio;

fn grid(d: &Disk) -> SampleGrid<DiskEnd> {
    SampleGrid::new(d, 256, 4).unwrap()
}

#[test]
fn visual_metrics_embed_isometrically() {
    let d = Disk::default();
    let o = d.base_point();
    let g = grid(&d);
    let x = d.point(0.3, -0.5).unwrap();
    let y = d.polar(2.5, 2.0).unwrap();
    let (rx, ry) = (MoebiusMetric::visual(&d, &o, &x), MoebiusMetric::visual(&d, &o, &y));
    assert_relative_eq!(dm_distance(&rx, &ry, &g).unwrap(), d.distance(&x, &y), epsilon = 1e-9);
    assert_relative_eq!(dm_distance(&ry, &rx, &g).unwrap(), d.distance(&x, &y), epsilon = 1e-9);
    assert_eq!(dm_distance(&rx, &rx, &g).unwrap(), 0.0);
}

#[test]
fn visual_metrics_pass_validation() {
    let d = Disk::default();
    let g = grid(&d);
    let rho = MoebiusMetric::visual(&d, &d.base_point(), &d.polar(1.0, 0.5).unwrap());
    let v = validate_metric(&rho, &g);
    assert!(v.pass, "{v:?}");
    assert!(v.triangle_worst <= 1e-12);
}

#[test]
fn shifted_metrics_are_provisional_and_fail_the_diameter_check() {
    let d = Disk::default();
    let g = grid(&d);
    let rho = MoebiusMetric::visual(&d, &d.base_point(), &d.base_point());
    let mut s = rho.shifted(0.1);
    assert!(!s.is_validated());
    assert!(matches!(dm_distance(&s, &rho, &g), Err(Error::Unvalidated(_))));
    let v = s.validate(&g);
    assert!(!v.pass);
    assert_relative_eq!(v.suggested_shift, -0.1, epsilon = 1e-9);
}

#[test]
fn max_times_min_of_the_derivative_is_one() {
    let d = Disk::default();
    let g = grid(&d);
    let o = d.base_point();
    let r1 = MoebiusMetric::visual(&d, &o, &d.point(0.1, 0.4).unwrap());
    let r2 = MoebiusMetric::visual(&d, &o, &d.point(-0.6, 0.2).unwrap());
    let rep = maxmin_report(&r2, &r1, &g).unwrap();
    assert!(rep.product_residual < 1e-9, "{rep:?}");
    assert_relative_eq!(rep.partner_rho1, 1.0, epsilon = 1e-8);
    assert_relative_eq!(rep.partner_rho2, 1.0, epsilon = 1e-8);
}

#[test]
fn derivative_between_visual_metrics_is_exp_busemann() {
    let d = Disk::default();
    let o = d.base_point();
    let (x, y) = (d.point(0.2, 0.2).unwrap(), d.point(-0.3, 0.1).unwrap());
    let (rx, ry) = (MoebiusMetric::visual(&d, &o, &x), MoebiusMetric::visual(&d, &o, &y));
    let xi = DiskEnd::new(1.3);
    let der = derivative(&ry, &rx).unwrap();
    assert_relative_eq!(der.log_at(&xi), d.busemann(&x, &y, &xi), epsilon = 1e-12);
}

#[test]
fn synthetic_metrics_validate_and_sit_near_the_origin_metric() {
    let d = Disk::default();
    let g = grid(&d);
    let (mut m, fit) = antipodal_synthetic(&d, &[(3, 0.02, 0.01), (5, 0.004, -0.002)], 256).unwrap();
    assert!(fit.node_residual < 1e-8);
    assert!(!m.is_validated());
    let v = m.validate(&g);
    assert!(v.pass, "{v:?}");
    let o = MoebiusMetric::visual(&d, &d.base_point(), &d.base_point());
    let rep = maxmin_report(&m, &o, &g).unwrap();
    assert!(rep.product_residual < 1e-6);
    assert!(rep.log_max > 0.0 && rep.log_max < 0.1);
}

#[test]
fn synthetic_seeds_are_checked() {
    let d = Disk::default();
    assert!(antipodal_synthetic(&d, &[(2, 0.01, 0.0)], 256).is_err());
    assert!(antipodal_synthetic(&d, &[(3, 0.2, 0.0)], 256).is_err());
    assert!(antipodal_synthetic(&d, &[(3, 0.01, 0.0)], 15).is_err());
}

#[test]
fn pushforward_by_an_isometry_is_a_visual_metric() {
    let d = Disk::default();
    let g = grid(&d);
    let o = d.base_point();
    let iso = d.compose(&d.translation(1.2, 0.4), &DiskIso::rotation(2.0));
    let mut f = MoebiusBoundaryMap::from_isometry(&d, &iso);
    let x = d.point(0.25, 0.1).unwrap();
    let rx = MoebiusMetric::visual(&d, &o, &x);
    assert!(matches!(pushforward(&f, &rx), Err(Error::Unvalidated(_))));
    assert!(f.validate_standard(64, 64).pass);
    let pf = pushforward(&f, &rx).unwrap();
    let target = MoebiusMetric::visual(&d, &o, &d.apply(&iso, &x));
    assert!(dm_distance(&pf, &target, &g).unwrap() < 1e-9);
}

#[test]
fn corrupted_maps_fail_cross_ratio_validation() {
    let d = Disk::default();
    let mut good = MoebiusBoundaryMap::from_isometry(&d, &d.translation(0.5, 1.0));
    let mut bad = MoebiusBoundaryMap::corrupted(&d, &d.translation(0.5, 1.0), 0.05).unwrap();
    let vg = good.validate_standard(128, 128);
    let vb = bad.validate_standard(128, 128);
    assert!(vg.pass && vg.cross_ratio_residual < 1e-9);
    assert!(!vb.pass && vb.cross_ratio_residual > 1e-3);
    assert!(vb.inverse_residual < 1e-9);
    assert!(!bad.is_validated());
    assert!(matches!(conjugacy(&bad, &d.fan_line(&d.base_point(), 0.0)), Err(Error::Unvalidated(_))));
    assert!(MoebiusBoundaryMap::corrupted(&d, &DiskIso::IDENTITY, 0.6).is_err());
}

#[test]
fn composition_keeps_validation_only_when_both_factors_have_it() {
    let d = Disk::default();
    let mut a = MoebiusBoundaryMap::from_isometry(&d, &d.translation(0.3, 0.0));
    let b = MoebiusBoundaryMap::from_isometry(&d, &d.translation(0.3, 1.0));
    a.validate_standard(32, 16);
    assert!(!a.compose(&b).is_validated());
    let mut b = b;
    b.validate_standard(32, 16);
    let ab = a.compose(&b);
    assert!(ab.is_validated());
    let xi = DiskEnd::new(0.9);
    assert!((ab.apply_inverse(&ab.apply(&xi)).angle() - xi.angle()).abs() < 1e-12);
}

#[test]
fn isometry_derivative_at_the_image_point_is_one() {
    let d = Disk::default();
    let iso = d.translation(0.9, -0.4);
    let mut f = MoebiusBoundaryMap::from_isometry(&d, &iso);
    f.validate_standard(32, 16);
    let x = d.point(-0.2, 0.35).unwrap();
    for k in 0..8 {
        let eta = DiskEnd::new(0.7 * k as f64);
        assert_relative_eq!(map_derivative(&f, &x, &d.apply(&iso, &x), &eta).unwrap(), 1.0, epsilon = 1e-10);
    }
}

#[test]
fn identity_conjugacy_fixes_lines() {
    let d = Disk::default();
    let mut f = MoebiusBoundaryMap::identity(&d);
    f.validate_standard(32, 16);
    let mut g = d.line(&DiskEnd::new(0.4), &DiskEnd::new(3.0)).unwrap();
    g.offset = 1.7;
    let c = conjugacy(&f, &g).unwrap();
    assert!(d.distance(&foot(&d, &c), &foot(&d, &g)) < 1e-12);
}

#[test]
fn quadruples_are_distinct() {
    let d = Disk::default();
    for q in weyl_quadruples(&d, 50) {
        for i in 0..4 {
            for j in i + 1..4 {
                assert!(!d.same_end(&q[i], &q[j]));
            }
        }
    }
}

#[test]
fn tree_automorphisms_induce_validated_maps() {
    let t = Tree::new(3, Ratio::from_integer(1)).unwrap();
    let g = t.automorphism(&[0, 1], &[1, 2, 0]).unwrap();
    let mut f = MoebiusBoundaryMap::from_isometry(&t, &g);
    assert!(f.validate_standard(64, 32).pass);
    let line = t.fan_line(&t.vertex(&[2]).unwrap(), 0.3);
    let c = conjugacy(&f, &line).unwrap();
    assert_eq!(t.distance(&foot(&t, &c), &t.apply(&g, &foot(&t, &line))), 0.0);
    let mut custom = MoebiusBoundaryMap::custom(&t, Arc::new(|e| e.clone()), Arc::new(|e| e.clone()), "id");
    assert!(custom.validate_standard(32, 16).pass);
}
