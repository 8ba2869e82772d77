mod common;

use common::*;
use netdeploy::voronoi::{allocate_barycenters_lex, clip_network_cells, delaunay_neighbors};
use netdeploy::{CollapsedNetwork, Network, SensorSet, UniformDensity, Violation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn crossing_pair_is_named() {
    let n = Network::unchecked(
        vec![p(0.0, 0.0), p(2.0, 2.0), p(0.0, 2.0), p(2.0, 0.0)],
        vec![[0, 1], [2, 3]],
    );
    assert_eq!(n.validate(), vec![Violation::Intersection(0, 1)]);
    let err = Network::new(n.vertices().to_vec(), n.edges().to_vec()).unwrap_err();
    assert!(err.to_string().contains("segment intersection 0x1"), "{err}");
}

#[test]
fn projection_tie_goes_to_first_segment() {
    let n = Network::new(
        vec![p(0.0, 0.0), p(1.0, 0.0), p(3.0, 0.0), p(4.0, 0.0), p(0.0, 5.0), p(4.0, 5.0)],
        vec![[4, 5], [0, 1], [2, 3], [1, 2]],
    )
    .unwrap();
    let q = p(2.0, 2.5);
    let hit = n.project(q);
    assert_eq!(hit.segment, 0);
    assert_eq!(hit.distance, 2.5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn collapse_invariants(seed in any::<u64>(), r in 0.05f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let segs = rng.gen_range(5..=20);
        let n = random_network(&mut rng, segs);
        let c = CollapsedNetwork::build(&n, r, &UniformDensity(1.0)).unwrap();
        prop_assert!(rel_close(c.total_weight(), n.total_length(), 1e-12));
        let expected: usize = n.segments().iter().map(|s| (s.length() / r).ceil() as usize).sum();
        prop_assert_eq!(c.len(), expected);
        for b in c.barycenters() {
            prop_assert!(b.sub_length <= r * (1.0 + 1e-12));
            prop_assert!(n.distance_to(b.position) < 1e-9);
        }
        let half = CollapsedNetwork::build(&n, r / 2.0, &UniformDensity(1.0)).unwrap();
        prop_assert!(half.len() <= 2 * c.len() + n.segment_count());
        let coarse = CollapsedNetwork::build(&n, n.longest_segment(), &UniformDensity(1.0)).unwrap();
        prop_assert_eq!(coarse.len(), n.segment_count());
        for (b, s) in coarse.barycenters().iter().zip(n.segments()) {
            prop_assert!(b.position.distance(s.barycenter()) < 1e-12);
        }
    }

    #[test]
    fn projection_distance_zero_exactly_on_the_network(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = random_network(&mut rng, 9);
        for q in network_points(&mut rng, &n, 5) {
            prop_assert!(n.project(q).distance < 1e-9);
        }
        for q in plane_points(&mut rng, &n, 5, 1.0) {
            let hit = n.project(q);
            let brute = n.segments().iter().map(|s| s.project(q).distance).fold(f64::INFINITY, f64::min);
            prop_assert_eq!(hit.distance, brute);
        }
    }

    #[test]
    fn network_cells_tile_and_hold_their_nearest_points(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let segs = rng.gen_range(5..=20);
        let n = random_network(&mut rng, segs);
        let m = rng.gen_range(1..=10);
        let pos = plane_points(&mut rng, &n, m, 1.0);
        let cells = clip_network_cells(&n, &SensorSet::new(pos.clone()).unwrap()).unwrap();
        for k in 0..n.segment_count() {
            let ivs = cells.segment(k);
            prop_assert_eq!(ivs.first().unwrap().t0, 0.0);
            prop_assert_eq!(ivs.last().unwrap().t1, 1.0);
            for w in ivs.windows(2) {
                prop_assert_eq!(w[0].t1, w[1].t0);
            }
            for iv in ivs {
                let q = n.segment(k).at(0.5 * (iv.t0 + iv.t1));
                let own = q.distance(pos[iv.owner]);
                prop_assert!(pos.iter().all(|s| own <= q.distance(*s) + 1e-9));
            }
        }
        let total: f64 = (0..m).flat_map(|i| cells.cell(i)).map(|(k, t0, t1)| (t1 - t0) * n.segment(k).length()).sum();
        prop_assert!(rel_close(total, n.total_length(), 1e-12));
    }

    #[test]
    fn allocation_is_a_partition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = random_network(&mut rng, 12);
        let c = CollapsedNetwork::build(&n, 0.35, &UniformDensity(1.0)).unwrap();
        let pos = plane_points(&mut rng, &n, 6, 0.0);
        let a = allocate_barycenters_lex(&c, &SensorSet::new(pos.clone()).unwrap()).unwrap();
        let mut seen = vec![0usize; c.len()];
        for cell in a.cells() {
            for b in cell {
                seen[b] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&k| k == 1));
        for (b, &o) in c.barycenters().iter().zip(a.owners()) {
            prop_assert_eq!(o, brute_owner(b.position, &pos));
        }
    }

    #[test]
    fn delaunay_graph_is_symmetric_and_irreflexive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(1..=12);
        let pos: Vec<_> = (0..m).map(|_| p(rng.gen_range(0.0..5.0), rng.gen_range(0.0..5.0))).collect();
        let g = delaunay_neighbors(&SensorSet::new(pos).unwrap()).unwrap();
        for i in 0..m {
            prop_assert!(!g.neighbors(i).contains(&i));
            for &j in g.neighbors(i) {
                prop_assert!(g.neighbors(j).contains(&i));
            }
        }
        if m == 2 {
            prop_assert!(g.are_adjacent(0, 1));
        }
    }
}
