use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, LN_2, PI};

use approx::assert_relative_eq;
use cat1_boundary::boundary_calculus::{
    busemann_angle, comparison_angle, cross_ratio, gromov_product, law_of_cosines_angle, RadialOracle,
};
use cat1_boundary::disk::{Disk, DiskEnd, DiskIso};
use cat1_boundary::space::{direction_fan, foot, line_through};
use cat1_boundary::{Error, ModelSpace};

// arcosh(1 + 2|x-y|² / ((1-|x|²)(1-|y|²))), written independently of the crate
fn oracle_distance(x: (f64, f64), y: (f64, f64)) -> f64 {
    let dx = x.0 - y.0;
    let dy = x.1 - y.1;
    let n = |p: (f64, f64)| 1.0 - p.0 * p.0 - p.1 * p.1;
    (1.0 + 2.0 * (dx * dx + dy * dy) / (n(x) * n(y))).acosh()
}

fn chord(a: f64, b: f64) -> f64 {
    ((a.cos() - b.cos()).powi(2) + (a.sin() - b.sin()).powi(2)).sqrt()
}

#[test]
fn distance_to_half_is_log_three() {
    let d = Disk::default();
    let p = d.point(0.5, 0.0).unwrap();
    let oracle = oracle_distance((0.0, 0.0), (0.5, 0.0));
    assert_relative_eq!(oracle, 1.098_612_288_668_11, epsilon = 1e-13);
    assert_relative_eq!(d.distance(&d.base_point(), &p), 1.098_612_288_668_11, epsilon = 1e-14);
}

#[test]
fn distances_match_the_arcosh_oracle() {
    let d = Disk::default();
    let pts = [(0.1, 0.2), (-0.7, 0.3), (0.0, -0.95), (0.6, 0.6)];
    for a in pts {
        for b in pts {
            let (p, q) = (d.point(a.0, a.1).unwrap(), d.point(b.0, b.1).unwrap());
            assert_relative_eq!(d.distance(&p, &q), oracle_distance(a, b), epsilon = 1e-12, max_relative = 1e-12);
        }
    }
}

#[test]
fn curvature_scales_distances() {
    let d2 = Disk::new(2.0).unwrap();
    let p = d2.point(0.5, 0.0).unwrap();
    assert_relative_eq!(d2.distance(&d2.base_point(), &p), 0.5 * 3f64.ln(), epsilon = 1e-14);
    assert!(Disk::new(0.5).is_err());
}

#[test]
fn line_point_at_log_three() {
    let d = Disk::default();
    let line = d.line(&DiskEnd::new(PI), &DiskEnd::new(0.0)).unwrap();
    let (x, y) = d.line_point(&line, 3f64.ln()).coords();
    assert_relative_eq!(x, 0.5, epsilon = 1e-15);
    assert_relative_eq!(y, 0.0, epsilon = 1e-15);
}

#[test]
fn gromov_product_of_orthogonal_ends() {
    let d = Disk::default();
    let g = gromov_product(&d, &d.base_point(), &DiskEnd::new(0.0), &DiskEnd::new(FRAC_PI_2)).unwrap();
    assert_relative_eq!(g, -(FRAC_PI_4.sin()).ln(), epsilon = 1e-15);
    assert_relative_eq!(g, 0.5 * LN_2, epsilon = 1e-15);
}

#[test]
fn gromov_product_of_an_end_with_itself_is_an_error() {
    let d = Disk::default();
    let xi = DiskEnd::new(1.0);
    assert!(matches!(gromov_product(&d, &d.base_point(), &xi, &xi), Err(Error::Argument(_))));
}

#[test]
fn cross_ratio_frozen_value() {
    let d = Disk::default();
    let [a, b, c, e] = [0.0, 1.0, 2.0, 4.0];
    let oracle = chord(a, c) * chord(b, e) / (chord(a, e) * chord(b, c));
    assert_relative_eq!(oracle, 1.925_407_858_840_463, epsilon = 1e-14);
    let quad = [DiskEnd::new(a), DiskEnd::new(b), DiskEnd::new(c), DiskEnd::new(e)];
    let x = d.point(0.3, -0.4).unwrap();
    let cr = cross_ratio(&d, &x, [&quad[0], &quad[1], &quad[2], &quad[3]]).unwrap();
    assert_relative_eq!(cr, 1.925_407_858_840_463, max_relative = 1e-13);
}

#[test]
fn cross_ratio_rejects_repeated_ends() {
    let d = Disk::default();
    let a = DiskEnd::new(0.3);
    let b = DiskEnd::new(1.3);
    assert!(cross_ratio(&d, &d.base_point(), [&a, &b, &a, &b]).is_err());
}

#[test]
fn comparison_angle_for_k_two() {
    let d = Disk::default();
    let (xi, eta) = (DiskEnd::new(0.0), DiskEnd::new(FRAC_PI_2));
    let rho = d.visual_metric(&d.base_point(), &xi, &eta);
    assert_relative_eq!(rho, 0.707_106_781_186_547_6, epsilon = 1e-15);
    let a = comparison_angle(&d, 2.0, &d.base_point(), &xi, &eta).unwrap();
    assert_relative_eq!(a, FRAC_PI_3, epsilon = 1e-14);
    assert!(comparison_angle(&d, 0.0, &d.base_point(), &xi, &eta).is_err());
}

#[test]
fn law_of_cosines_handles_degenerate_and_right_triangles() {
    // equilateral triangles shrink to the Euclidean angle
    assert_relative_eq!(law_of_cosines_angle(1.0, 1e-6, 1e-6, 1e-6), FRAC_PI_3, epsilon = 1e-6);
    // hyperbolic Pythagoras: cosh c = cosh a cosh b
    let (a, b) = (0.7f64, 1.3f64);
    let c = (a.cosh() * b.cosh()).acosh();
    assert_relative_eq!(law_of_cosines_angle(1.0, a, b, c), FRAC_PI_2, epsilon = 1e-12);
}

#[test]
fn busemann_angle_on_a_ray() {
    let d = Disk::default();
    let x = d.point(0.2, 0.1).unwrap();
    let xi = DiskEnd::new(0.7);
    let y = d.ray_point(&x, &xi, 1.5);
    // y lies on [x, ξ): the angle is zero and B(y, x, ξ) = -1.5
    assert_relative_eq!(d.busemann(&y, &x, &xi), -1.5, epsilon = 1e-13);
    assert!(busemann_angle(&d, 1.0, &x, &y, &xi).unwrap() < 1e-6);
    let back = d.ray_point(&x, &DiskEnd::new(0.7 + PI), 0.0);
    assert_eq!(d.distance(&back, &x), 0.0);
}

#[test]
fn radial_oracle_agrees_with_closed_forms() {
    let d = Disk::default();
    let o = RadialOracle::default();
    let x = d.point(-0.3, 0.45).unwrap();
    let y = d.point(0.6, -0.1).unwrap();
    let (xi, eta) = (DiskEnd::new(2.0), DiskEnd::new(4.5));
    assert_relative_eq!(o.busemann(&d, &x, &y, &xi), d.busemann(&x, &y, &xi), epsilon = 1e-9);
    assert_relative_eq!(
        o.gromov_product(&d, &x, &xi, &eta),
        d.gromov_product(&x, &xi, &eta).unwrap(),
        epsilon = 1e-9
    );
}

#[test]
fn points_outside_the_disk_are_domain_errors() {
    let d = Disk::default();
    assert!(matches!(d.point(1.0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(d.point(f64::NAN, 0.0), Err(Error::Domain(_))));
    assert!(d.polar(45.0, 0.0).is_err());
}

#[test]
fn fan_lines_pass_through_their_centre() {
    let d = Disk::default();
    let x = d.point(0.4, -0.2).unwrap();
    for line in direction_fan(&d, &x, 12).unwrap() {
        assert!(d.distance(&foot(&d, &line), &x) < 1e-13);
    }
    let l = line_through(&d, &DiskEnd::new(0.1), &DiskEnd::new(2.0), &x).unwrap();
    let far = d.line_point(&l, 20.0);
    assert_relative_eq!(d.distance(&foot(&d, &l), &far), 20.0, epsilon = 1e-9);
}

#[test]
fn isometries_compose_and_invert() {
    let d = Disk::default();
    let g = d.compose(&d.translation(0.8, 1.0), &DiskIso::rotation(0.3));
    let h = d.translation(1.7, -2.0);
    let p = d.point(0.1, 0.5).unwrap();
    let q = d.point(-0.4, 0.2).unwrap();
    let gh = d.compose(&g, &h);
    assert!(d.distance(&d.apply(&gh, &p), &d.apply(&g, &d.apply(&h, &p))) < 1e-12);
    assert!(d.distance(&d.apply(&d.invert(&g), &d.apply(&g, &p)), &p) < 1e-13);
    assert_relative_eq!(d.distance(&d.apply(&g, &p), &d.apply(&g, &q)), d.distance(&p, &q), epsilon = 1e-13);
}

#[test]
fn chart_round_trip() {
    let d = Disk::default();
    let frame = d.moving_origin_to(&d.point(0.3, 0.3).unwrap());
    let p = d.chart_point(&frame, [0.4, -1.1]);
    let v = d.chart_coords(&frame, &p);
    assert_relative_eq!(v[0], 0.4, epsilon = 1e-12);
    assert_relative_eq!(v[1], -1.1, epsilon = 1e-12);
}
