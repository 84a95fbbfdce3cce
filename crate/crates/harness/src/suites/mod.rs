//! The verification suites and the samplers they share.

use std::f64::consts::TAU;

use cat1_boundary::disk::{Disk, DiskEnd, DiskIso, DiskPoint};
use cat1_boundary::flow_conjugacy::MoebiusBoundaryMap;
use cat1_boundary::moebius_metrics::{antipodal_synthetic, pushforward, MoebiusMetric, SampleGrid};
use cat1_boundary::tree::{Tree, TreeIso, TreePoint};
use cat1_boundary::ModelSpace;
use num_rational::Ratio;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::config::{Config, Suite};
use crate::report::SuiteOutput;

pub mod boundary;
pub mod circumcenter;
pub mod extension;
pub mod flow;
pub mod metrics;
pub mod spaces;

/// Radius of the hyperbolic ball that interior samples are drawn from.
pub const SAMPLE_RADIUS: f64 = 3.0;

pub fn run_suite(s: Suite, cfg: &Config) -> SuiteOutput {
    let mut rng = suite_rng(cfg.seed, s);
    match s {
        Suite::Spaces => spaces::run(cfg, &mut rng),
        Suite::Boundary => boundary::run(cfg, &mut rng),
        Suite::Metrics => metrics::run(cfg, &mut rng),
        Suite::Flow => flow::run(cfg, &mut rng),
        Suite::Circumcenter => circumcenter::run(cfg, &mut rng),
        Suite::Extension => extension::run(cfg, &mut rng),
        Suite::Holder => extension::run_holder(cfg, &mut rng),
        Suite::Qi => extension::run_qi(cfg, &mut rng),
    }
}

/// The stream of suite `s` under master seed `seed`.
pub fn suite_rng(seed: u64, s: Suite) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(s as u64 + 1);
    rng
}

/// Maps `f` over `items` on all available cores, keeping input order.
pub fn par_map<T: Sync, U: Send, F: Fn(&T) -> U + Sync>(items: &[T], f: F) -> Vec<U> {
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(16);
    if threads <= 1 || items.len() < 2 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| {
                let f = &f;
                scope.spawn(move || c.iter().map(f).collect::<Vec<U>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

pub fn max_of(vals: impl IntoIterator<Item = f64>) -> f64 {
    vals.into_iter().fold(f64::NEG_INFINITY, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

pub fn min_of(vals: impl IntoIterator<Item = f64>) -> f64 {
    vals.into_iter().fold(f64::INFINITY, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.min(b) })
}

pub fn disk() -> Disk {
    Disk::default()
}

pub fn tree() -> Tree {
    Tree::new(3, Ratio::from_integer(1)).expect("valence 3 is admissible")
}

pub fn grid<S: ModelSpace>(s: &S, cfg: &Config) -> SampleGrid<S::End> {
    SampleGrid::new(s, cfg.grid, 4).expect("grid size checked by the config")
}

/// A point of the hyperbolic ball of radius `r` about the origin, radius
/// and angle uniform.
pub fn disk_point<R: Rng>(d: &Disk, rng: &mut R, r: f64) -> DiskPoint {
    d.polar(rng.gen_range(0.0..r), rng.gen_range(0.0..TAU)).expect("radius within range")
}

pub fn disk_end<R: Rng>(rng: &mut R) -> DiskEnd {
    DiskEnd::new(rng.gen_range(0.0..TAU))
}

/// A translation by at most 2 composed with a rotation.
pub fn disk_isometry<R: Rng>(d: &Disk, rng: &mut R) -> DiskIso {
    let t = d.translation(rng.gen_range(0.0..2.0), rng.gen_range(0.0..TAU));
    d.compose(&t, &DiskIso::rotation(rng.gen_range(0.0..TAU)))
}

/// A vertex at depth at most 4 or a point at a rational position on an
/// edge below one.
pub fn tree_point<R: Rng>(t: &Tree, rng: &mut R) -> TreePoint {
    let mut w: Vec<u8> = Vec::new();
    let depth = rng.gen_range(0..=4);
    while w.len() < depth {
        let a = rng.gen_range(0..3u8);
        if w.last() != Some(&a) {
            w.push(a);
        }
    }
    if rng.gen_bool(0.5) {
        return t.vertex(&w).expect("reduced word");
    }
    let a = loop {
        let a = rng.gen_range(0..3u8);
        if w.last() != Some(&a) {
            break a;
        }
    };
    let s = Ratio::new(rng.gen_range(1..8i64), 8);
    t.edge_point(&w, a, s).expect("interior edge point")
}

pub fn tree_end<R: Rng>(t: &Tree, rng: &mut R) -> <Tree as ModelSpace>::End {
    t.end_at(rng.gen_range(0.0..1.0))
}

pub fn tree_isometry<R: Rng>(t: &Tree, rng: &mut R) -> TreeIso {
    let mut w: Vec<u8> = Vec::new();
    let len = rng.gen_range(0..=3);
    while w.len() < len {
        let a = rng.gen_range(0..3u8);
        if w.last() != Some(&a) {
            w.push(a);
        }
    }
    const PERMS: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    t.automorphism(&w, &PERMS[rng.gen_range(0..6)]).expect("valid automorphism")
}

/// A validated Moebius boundary map induced by `g`.
pub fn iso_map<S: ModelSpace>(s: &S, g: &S::Iso) -> MoebiusBoundaryMap<S> {
    let mut f = MoebiusBoundaryMap::from_isometry(s, g);
    let v = f.validate_standard(64, 64);
    assert!(v.pass, "isometry-induced map failed validation: {v:?}");
    f
}

/// A random odd-harmonic seed using the whole curvature budget: harmonics
/// 3 and 5 with random phases and a random split.
pub fn synthetic_seed<R: Rng>(rng: &mut R) -> Vec<(u32, f64, f64)> {
    let budget = 0.3;
    let share = rng.gen_range(0.3..0.9);
    let mut out = Vec::new();
    for (m, part) in [(3u32, share), (5u32, 1.0 - share)] {
        let amp = budget * part / (m * m) as f64;
        let phase = rng.gen_range(0.0..TAU);
        out.push((m, amp * phase.cos(), amp * phase.sin()));
    }
    out
}

/// A validated synthetic metric pushed forward by a random isometry, so
/// its nearest visual point is not tied to the origin.
pub fn synthetic_metric<R: Rng>(d: &Disk, grid: &SampleGrid<DiskEnd>, rng: &mut R) -> MoebiusMetric<Disk> {
    let seed = synthetic_seed(rng);
    let g = disk_isometry(d, rng);
    build_synthetic(d, grid, &seed, &g)
}

pub fn build_synthetic(d: &Disk, grid: &SampleGrid<DiskEnd>, seed: &[(u32, f64, f64)], g: &DiskIso) -> MoebiusMetric<Disk> {
    let (mut m, _) = antipodal_synthetic(d, seed, 256).expect("seed within budget");
    let v = m.validate(grid);
    assert!(v.pass, "synthetic metric from {seed:?} failed validation: {v:?}");
    pushforward(&iso_map(d, g), &m).expect("validated map and metric")
}

/// Angular distance between two disk ends.
pub fn end_gap(a: &DiskEnd, b: &DiskEnd) -> f64 {
    let d = (a.angle() - b.angle()).rem_euclid(TAU);
    d.min(TAU - d)
}
