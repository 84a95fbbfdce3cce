use std::f64::consts::TAU;

use cat1_boundary::boundary_calculus::{busemann_angle, cross_ratio};
use cat1_boundary::circumcenter::convexity_probe;
use cat1_boundary::disk::{Disk, DiskEnd, DiskPoint};
use cat1_boundary::flow_conjugacy::{conjugacy, flip, flow, MoebiusBoundaryMap};
use cat1_boundary::space::foot;
use cat1_boundary::tree::{Tree, Q};
use cat1_boundary::{GeodesicLine, ModelSpace};
use num_rational::Ratio;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(7), failure_persistence: None, ..Config::default() }
}

fn point() -> impl Strategy<Value = DiskPoint> {
    (0.0..3.0f64, 0.0..TAU).prop_map(|(r, t)| Disk::default().polar(r, t).unwrap())
}

fn end() -> impl Strategy<Value = DiskEnd> {
    (0.0..TAU).prop_map(DiskEnd::new)
}

fn distinct_ends() -> impl Strategy<Value = (DiskEnd, DiskEnd)> {
    (0.0..TAU, 0.05..(TAU - 0.05)).prop_map(|(a, gap)| (DiskEnd::new(a), DiskEnd::new(a + gap)))
}

fn line() -> impl Strategy<Value = GeodesicLine<DiskEnd>> {
    (distinct_ends(), -2.0..2.0f64).prop_map(|((m, p), off)| {
        let mut l = Disk::default().line(&m, &p).unwrap();
        l.offset = off;
        l
    })
}

fn iso_map() -> impl Strategy<Value = MoebiusBoundaryMap<Disk>> {
    (0.0..2.0f64, 0.0..TAU, 0.0..TAU).prop_map(|(r, t, phi)| {
        let d = Disk::default();
        let g = d.compose(&d.translation(r, t), &cat1_boundary::disk::DiskIso::rotation(phi));
        let mut f = MoebiusBoundaryMap::from_isometry(&d, &g);
        f.validate_standard(32, 16);
        f
    })
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn distance_is_symmetric_and_satisfies_the_triangle_inequality(x in point(), y in point(), z in point()) {
        let d = Disk::default();
        prop_assert!((d.distance(&x, &y) - d.distance(&y, &x)).abs() < 1e-12);
        prop_assert!(d.distance(&x, &z) <= d.distance(&x, &y) + d.distance(&y, &z) + 1e-12);
        prop_assert_eq!(d.distance(&x, &x), 0.0);
    }

    #[test]
    fn busemann_is_a_bounded_cocycle(x in point(), y in point(), z in point(), xi in end()) {
        let d = Disk::default();
        let (bxy, byz, bxz) = (d.busemann(&x, &y, &xi), d.busemann(&y, &z, &xi), d.busemann(&x, &z, &xi));
        prop_assert!(bxy.abs() <= d.distance(&x, &y) + 1e-12);
        prop_assert!((bxy + byz - bxz).abs() < 1e-11);
        prop_assert!((bxy + d.busemann(&y, &x, &xi)).abs() < 1e-12);
    }

    #[test]
    fn visual_metrics_obey_the_mean_value_identity(x in point(), y in point(), (xi, eta) in distinct_ends()) {
        let d = Disk::default();
        let rx = d.visual_metric(&x, &xi, &eta);
        let ry = d.visual_metric(&y, &xi, &eta);
        prop_assert!(rx <= 1.0 && ry <= 1.0);
        let lhs = 2.0 * ry.ln();
        let rhs = 2.0 * rx.ln() + d.busemann(&x, &y, &xi) + d.busemann(&x, &y, &eta);
        prop_assert!((lhs - rhs).abs() < 1e-8, "residual {}", lhs - rhs);
    }

    #[test]
    fn cross_ratios_do_not_depend_on_the_basepoint(x in point(), y in point(), a in 0.0..TAU, gaps in prop::array::uniform3(0.2..1.8f64)) {
        let d = Disk::default();
        let q = [a, a + gaps[0], a + gaps[0] + gaps[1], a + gaps[0] + gaps[1] + gaps[2]].map(DiskEnd::new);
        let r = [&q[0], &q[2], &q[1], &q[3]];
        let cx = cross_ratio(&d, &x, r).unwrap();
        let cy = cross_ratio(&d, &y, r).unwrap();
        prop_assert!((cx / cy - 1.0).abs() < 1e-9);
    }

    #[test]
    fn busemann_angle_round_trip(x in point(), y in point(), xi in end()) {
        let d = Disk::default();
        let dist = d.distance(&x, &y);
        prop_assume!(dist > 1e-3);
        let angle = busemann_angle(&d, 1.0, &x, &y, &xi).unwrap();
        let rebuilt = (dist.cosh() - dist.sinh() * angle.cos()).ln();
        prop_assert!((rebuilt - d.busemann(&y, &x, &xi)).abs() < 1e-8);
    }

    #[test]
    fn conjugacy_commutes_with_flip_and_flow(f in iso_map(), g in line(), t in -3.0..3.0f64) {
        let d = Disk::default();
        let a = conjugacy(&f, &flip(&g)).unwrap();
        let b = flip(&conjugacy(&f, &g).unwrap());
        prop_assert!(d.distance(&foot(&d, &a), &foot(&d, &b)) < 1e-8);
        let c = conjugacy(&f, &flow(&g, t)).unwrap();
        let e = flow(&conjugacy(&f, &g).unwrap(), t);
        prop_assert!(d.distance(&foot(&d, &c), &foot(&d, &e)) < 1e-8);
    }

    #[test]
    fn isometry_conjugacy_moves_feet_by_the_isometry(r in 0.0..2.0f64, th in 0.0..TAU, g in line()) {
        let d = Disk::default();
        let iso = d.translation(r, th);
        let mut f = MoebiusBoundaryMap::from_isometry(&d, &iso);
        f.validate_standard(32, 16);
        let c = conjugacy(&f, &g).unwrap();
        prop_assert!(d.distance(&foot(&d, &c), &d.apply(&iso, &foot(&d, &g))) < 1e-8);
    }

    #[test]
    fn cosh_distance_and_exp_busemann_are_f_minus_one_convex(y in point(), xi in end(), g in line()) {
        let d = Disk::default();
        let lines = [g];
        let c = convexity_probe(&d, |z| d.distance(z, &y).cosh(), &lines, 1e-2);
        let b = convexity_probe(&d, |z| d.busemann(z, &y, &xi).exp(), &lines, 1e-2);
        let scale = d.distance(&foot(&d, &lines[0]), &y).cosh();
        prop_assert!(c >= -1e-8 * scale, "cosh slack {}", c);
        prop_assert!(b >= -1e-8 * scale.max(1.0) * 4.0, "busemann slack {}", b);
    }
}

fn word() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..3, 0..8).prop_map(|raw| {
        let mut w: Vec<u8> = Vec::new();
        for a in raw {
            if w.last() != Some(&a) {
                w.push(a);
            }
        }
        w
    })
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn tree_metric_axioms_hold_exactly(a in word(), b in word(), c in word(), u in 0.0..1.0f64) {
        let t = Tree::new(3, Ratio::from_integer(1)).unwrap();
        let (x, y, z) = (t.vertex(&a).unwrap(), t.vertex(&b).unwrap(), t.vertex(&c).unwrap());
        prop_assert!(t.distance_exact(&x, &z) <= t.distance_exact(&x, &y) + t.distance_exact(&y, &z));
        let xi = t.end_at(u);
        let cocycle = t.busemann_exact(&x, &y, &xi) + t.busemann_exact(&y, &z, &xi) - t.busemann_exact(&x, &z, &xi);
        prop_assert_eq!(cocycle, Q::from_integer(0));
        let b = t.busemann_exact(&x, &y, &xi);
        let dxy = t.distance_exact(&x, &y);
        prop_assert!(b <= dxy && -b <= dxy);
    }
}
