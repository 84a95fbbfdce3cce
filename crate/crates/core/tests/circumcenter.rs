use std::f64::consts::TAU;

use approx::assert_relative_eq;
use cat1_boundary::circumcenter::{
    asymptotic_circumcenter, asymptotic_circumcenter_from, circumcenter, circumcenter_flow_convergence,
    circumcenter_result, convexity_probe, probe_ball, u_k_eval,
};
use cat1_boundary::disk::{Disk, DiskEnd};
use cat1_boundary::flow_conjugacy::{FlowSet, MoebiusBoundaryMap};
use cat1_boundary::space::{direction_fan, foot};
use cat1_boundary::tree::Tree;
use cat1_boundary::{Error, ModelSpace};
use num_rational::Ratio;

#[test]
fn two_points_give_the_midpoint() {
    let d = Disk::default();
    let a = d.point(0.3, 0.1).unwrap();
    let b = d.point(-0.5, 0.2).unwrap();
    let (c, r) = circumcenter(&d, &[a, b]).unwrap();
    assert_relative_eq!(r, 0.5 * d.distance(&a, &b), epsilon = 1e-12);
    assert!(d.distance(&c, &d.segment_point(&a, &b, r)) < 1e-9);
}

#[test]
fn symmetric_triples_are_centred_at_the_origin() {
    let d = Disk::default();
    let pts: Vec<_> = (0..3).map(|i| d.polar(1.3, 0.4 + i as f64 * TAU / 3.0).unwrap()).collect();
    let (c, r) = circumcenter(&d, &pts).unwrap();
    assert!(d.distance(&c, &d.base_point()) < 1e-9);
    assert_relative_eq!(r, 1.3, epsilon = 1e-9);
}

#[test]
fn singletons_and_empty_sets() {
    let d = Disk::default();
    let p = d.point(0.2, -0.7).unwrap();
    let (c, r) = circumcenter(&d, &[p]).unwrap();
    assert!(d.distance(&c, &p) < 1e-9);
    assert!(r < 1e-9);
    assert!(matches!(circumcenter::<Disk>(&d, &[]), Err(Error::Argument(_))));
}

#[test]
fn circumcenter_results_carry_a_certificate() {
    let d = Disk::default();
    let pts: Vec<_> = [(0.1, 0.2), (-0.4, 0.5), (0.6, -0.3), (0.0, -0.8)]
        .iter()
        .map(|&(x, y)| d.point(x, y).unwrap())
        .collect();
    let res = circumcenter_result(&d, &pts).unwrap();
    assert!(res.certified, "{res:?}");
    assert!(res.iterations <= 200);
}

#[test]
fn u_k_of_a_symmetric_fan_is_exp_distance() {
    let d = Disk::default();
    let o = d.base_point();
    let k = FlowSet::finite(direction_fan(&d, &o, 64).unwrap()).unwrap();
    assert_relative_eq!(u_k_eval(&d, &k, &o), 1.0, epsilon = 1e-14);
    let z = d.polar(0.8, 0.3).unwrap();
    // the fan direction nearest to z is off by at most π/64
    let u = u_k_eval(&d, &k, &z);
    assert!(u <= 0.8f64.exp() + 1e-12 && u > 0.8f64.exp() * 0.99);
    let res = asymptotic_circumcenter(&d, &k).unwrap();
    assert!(d.distance(&res.argmin, &o) < 1e-6);
    assert_relative_eq!(res.value, 1.0, epsilon = 1e-12);
}

#[test]
fn u_k_of_a_single_element() {
    let d = Disk::default();
    let mut g = d.line(&DiskEnd::new(2.0), &DiskEnd::new(5.0)).unwrap();
    g.offset = 0.4;
    let k = FlowSet::finite(vec![g.clone()]).unwrap();
    let p = foot(&d, &g);
    assert_relative_eq!(u_k_eval(&d, &k, &p), 1.0, epsilon = 1e-14);
    // walking toward γ(+∞) lowers u_K at unit exponential rate
    for t in [0.5, 1.0, 3.0] {
        let z = d.ray_point(&p, &g.plus, t);
        assert_relative_eq!(u_k_eval(&d, &k, &z), (-t).exp(), max_relative = 1e-12);
    }
    assert!(matches!(asymptotic_circumcenter(&d, &k), Err(Error::Precondition(_))));
}

#[test]
fn a_line_and_its_flip() {
    let d = Disk::default();
    let o = d.base_point();
    let g = d.fan_line(&o, 0.15);
    let k = FlowSet::finite(vec![g.clone(), g.flipped()]).unwrap();
    let res = asymptotic_circumcenter(&d, &k).unwrap();
    assert!(d.distance(&res.argmin, &o) < 1e-6);
    assert_relative_eq!(res.value, 1.0, epsilon = 1e-10);
}

#[test]
fn isometry_fans_recover_the_isometry() {
    let d = Disk::default();
    let iso = d.translation(0.7, 1.1);
    let mut f = MoebiusBoundaryMap::from_isometry(&d, &iso);
    f.validate_standard(64, 64);
    let x = d.point(0.2, -0.3).unwrap();
    let k = FlowSet::conjugated(&f, &x, 64).unwrap();
    let res = asymptotic_circumcenter(&d, &k).unwrap();
    assert!(d.distance(&res.argmin, &d.apply(&iso, &x)) < 1e-6);
    assert!(res.certified);
}

#[test]
fn restarts_agree() {
    let d = Disk::default();
    let lines: Vec<_> = [(0.3, 2.0, 0.5), (1.0, 4.0, -0.2), (2.5, 5.5, 0.9), (5.0, 0.5, 0.0)]
        .iter()
        .map(|&(a, b, off)| {
            let mut l = d.line(&DiskEnd::new(a), &DiskEnd::new(b)).unwrap();
            l.offset = off;
            l
        })
        .collect();
    let k = FlowSet::finite(lines).unwrap();
    let base = asymptotic_circumcenter(&d, &k).unwrap();
    for i in 0..8 {
        let start = d.polar(0.3 * i as f64, 0.9 * i as f64).unwrap();
        let r = asymptotic_circumcenter_from(&d, &k, &start).unwrap();
        assert!(d.distance(&r.argmin, &base.argmin) < 2e-6);
    }
}

#[test]
fn flowed_circumcenters_converge() {
    let d = Disk::default();
    let lines: Vec<_> = [(0.3, 2.0, 0.5), (1.0, 4.0, -0.2), (2.5, 5.5, 0.9)]
        .iter()
        .map(|&(a, b, off)| {
            let mut l = d.line(&DiskEnd::new(a), &DiskEnd::new(b)).unwrap();
            l.offset = off;
            l
        })
        .collect();
    let table = circumcenter_flow_convergence(&d, &lines, &[0.0, 4.0, 8.0, 12.0]).unwrap();
    let last = table.rows.last().unwrap();
    assert!(last.distance < 1e-3);
    assert!(last.ut_error < 1e-3);
    assert!(table.rows.windows(2).skip(1).all(|w| w[1].distance <= w[0].distance));
    assert!(circumcenter_flow_convergence(&d, &lines, &[1.0, 1.0]).is_err());
}

#[test]
fn symmetric_fans_keep_their_circumcenter() {
    let d = Disk::default();
    let o = d.base_point();
    let lines = direction_fan(&d, &o, 6).unwrap();
    let table = circumcenter_flow_convergence(&d, &lines, &[0.5, 3.0, 6.0]).unwrap();
    for row in &table.rows {
        assert!(d.distance(&row.center, &o) < 1e-6);
    }
}

#[test]
fn convexity_probe_accepts_the_paper_examples_and_rejects_negated_distance() {
    let d = Disk::default();
    let y = d.point(0.1, 0.3).unwrap();
    let xi = DiskEnd::new(4.0);
    let lines: Vec<_> = (0..16).map(|i| d.fan_line(&d.polar(0.5, i as f64).unwrap(), 0.37 * i as f64)).collect();
    assert!(convexity_probe(&d, |z| d.distance(z, &y).cosh(), &lines, 1e-2) >= -1e-8);
    assert!(convexity_probe(&d, |z| d.busemann(z, &y, &xi).exp(), &lines, 1e-2) >= -1e-8);
    let through_y = direction_fan(&d, &y, 8).unwrap();
    assert!(convexity_probe(&d, |z| -d.distance(z, &y), &through_y, 1e-2) < -1e-3);
}

#[test]
fn probe_balls_have_the_requested_radius() {
    let d = Disk::default();
    let c = d.point(-0.3, 0.2).unwrap();
    let ball = probe_ball(&d, &c, 1.0);
    assert_eq!(ball.len(), 17);
    let far = ball.iter().map(|p| d.distance(p, &c)).fold(0.0, f64::max);
    assert_relative_eq!(far, 1.0, epsilon = 1e-12);
}

#[test]
fn tree_circumcenters_are_exact() {
    let t = Tree::new(3, Ratio::from_integer(1)).unwrap();
    let o = t.base_point();
    let p1 = t.ray_point(&o, &t.end_at(0.1), 3.0);
    let p2 = t.ray_point(&o, &t.end_at(0.5), 2.0);
    let p3 = t.ray_point(&o, &t.end_at(0.9), 1.5);
    let (c, r) = circumcenter(&t, &[p1.clone(), p2.clone(), p3]).unwrap();
    // the diameter pair is (p1, p2) at distance 5
    assert_eq!(r, 2.5);
    assert_eq!(t.distance(&c, &p1), 2.5);
    assert_eq!(t.distance(&c, &p2), 2.5);
}

#[test]
fn tree_identity_fans_minimize_at_their_centre() {
    let t = Tree::new(3, Ratio::from_integer(1)).unwrap();
    let mut f = MoebiusBoundaryMap::identity(&t);
    f.validate_standard(64, 32);
    let v = t.vertex(&[0, 1]).unwrap();
    let k = FlowSet::conjugated(&f, &v, 48).unwrap();
    let res = asymptotic_circumcenter(&t, &k).unwrap();
    assert_eq!(res.argmin, v);
    assert_eq!(res.value, 1.0);
    assert!(res.certified);
}
