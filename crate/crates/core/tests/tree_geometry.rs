use approx::assert_relative_eq;
use cat1_boundary::tree::{ratio_from_f64, Tree, TreeEnd, Q};
use cat1_boundary::ModelSpace;
use num_rational::Ratio;

fn tree() -> Tree {
    Tree::new(3, Ratio::from_integer(1)).unwrap()
}

fn lcp(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

// word-metric oracles for vertices, independent of the crate internals
fn oracle_vertex_distance(a: &[u8], b: &[u8]) -> i64 {
    (a.len() + b.len() - 2 * lcp(a, b)) as i64
}

fn oracle_busemann(x: &[u8], y: &[u8], xi: &TreeEnd) -> i64 {
    let depth = x.len().max(y.len()) + 2;
    let w = xi.prefix(depth);
    oracle_vertex_distance(x, &w) - oracle_vertex_distance(y, &w)
}

#[test]
fn vertex_distances_are_word_lengths() {
    let t = tree();
    let words: [&[u8]; 5] = [&[], &[0], &[0, 1], &[1, 2, 0], &[0, 2, 1, 0]];
    for a in words {
        for b in words {
            let d = t.distance_exact(&t.vertex(a).unwrap(), &t.vertex(b).unwrap());
            assert_eq!(d, Q::from_integer(oracle_vertex_distance(a, b)));
        }
    }
}

#[test]
fn invalid_words_are_rejected() {
    let t = tree();
    assert!(t.vertex(&[0, 0]).is_err());
    assert!(t.vertex(&[3]).is_err());
    assert!(Tree::new(2, Ratio::from_integer(1)).is_err());
}

#[test]
fn busemann_and_gromov_exact_values() {
    let t = tree();
    let xi = t.end(&[0], &[1, 2]).unwrap();
    let eta = t.end(&[0, 2], &[0, 1]).unwrap();
    let x: &[u8] = &[1, 0];
    let y: &[u8] = &[0, 1, 2];
    let b = t.busemann_exact(&t.vertex(x).unwrap(), &t.vertex(y).unwrap(), &xi);
    assert_eq!(b, Q::from_integer(oracle_busemann(x, y, &xi)));
    assert_eq!(b, Q::from_integer(5));
    let o = t.base_point();
    // the rays to ξ and η share the single edge to the vertex 0
    assert_eq!(t.gromov_exact(&o, &xi, &eta).unwrap(), Q::from_integer(1));
    assert_relative_eq!(t.visual_metric(&o, &xi, &eta), (-1f64).exp(), epsilon = 1e-15);
    assert!(t.gromov_exact(&o, &xi, &xi).is_err());
}

#[test]
fn edge_points_split_edges_exactly() {
    let t = Tree::new(4, Ratio::new(1, 2)).unwrap();
    let p = t.edge_point(&[1], 2, Ratio::new(1, 8)).unwrap();
    let v = t.vertex(&[1, 2]).unwrap();
    assert_eq!(t.distance_exact(&p, &v), Ratio::new(3, 8));
    assert_eq!(t.distance_exact(&p, &t.base_point()), Ratio::new(5, 8));
}

#[test]
fn ray_points_walk_toward_the_end() {
    let t = tree();
    let xi = t.end(&[2, 0], &[1, 0]).unwrap();
    let start = t.vertex(&[0, 1]).unwrap();
    let r = t.ray_point_exact(&start, &xi, Ratio::new(7, 2));
    assert_eq!(t.distance_exact(&start, &r), Ratio::new(7, 2));
    // on a ray toward ξ the Busemann function drops at unit rate
    assert_eq!(t.busemann_exact(&r, &start, &xi), Ratio::new(-7, 2));
}

#[test]
fn rationals_round_trip_through_floats() {
    assert_eq!(ratio_from_f64(0.375), Ratio::new(3, 8));
    assert_eq!(ratio_from_f64(-2.5), Ratio::new(-5, 2));
    assert_eq!(ratio_from_f64(f64::NAN), Q::from_integer(0));
}

#[test]
fn automorphisms_are_isometries() {
    let t = tree();
    let g = t.automorphism(&[1, 0], &[2, 0, 1]).unwrap();
    let a = t.vertex(&[0, 2, 1]).unwrap();
    let b = t.edge_point(&[2], 1, Ratio::new(1, 3)).unwrap();
    assert_eq!(t.distance_exact(&t.apply(&g, &a), &t.apply(&g, &b)), t.distance_exact(&a, &b));
    let gi = t.invert(&g);
    assert_eq!(t.apply(&gi, &t.apply(&g, &b)), b);
    let xi = t.end(&[1], &[0, 2]).unwrap();
    assert_eq!(t.apply_end(&gi, &t.apply_end(&g, &xi)), xi);
}

#[test]
fn fan_bounds_grow_with_resolution() {
    let t = tree().with_resolution(6);
    let (lo, hi) = t.fan_bounds(&t.base_point());
    assert_eq!((lo, hi), (2, 3 * 2usize.pow(5)));
    let e = t.edge_point(&[], 0, Ratio::new(1, 2)).unwrap();
    assert_eq!(t.fan_bounds(&e).1, 2 * 2usize.pow(5));
}
