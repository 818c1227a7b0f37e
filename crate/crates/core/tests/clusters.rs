mod common;

use common::flood_fill;
use percorr::estimator::{EventCounts, SiteEvent};
use percorr::lattice::{
    sample_occupancy, BoundaryMode, ClusterLabeler, LatticeSpec, OccupancyGrid, SampleSeed,
};
use percorr::SITE_PC;

/// Same partition as the oracle: the two label maps are related by a bijection.
fn same_partition(spec: &LatticeSpec, grid: &OccupancyGrid, labeler: &mut ClusterLabeler) {
    let ours = labeler.label(grid);
    let oracle = flood_fill(grid);
    let mut fwd = vec![None; ours.cluster_count()];
    let mut back = vec![None; oracle.flags.len()];
    for i in 0..spec.sites() {
        match (ours.label(i), oracle.labels[i]) {
            (None, None) => {}
            (Some(a), Some(b)) => {
                let a = a as usize;
                assert_eq!(*fwd[a].get_or_insert(b), b, "site {i} merged wrongly");
                assert_eq!(*back[b].get_or_insert(a), a, "site {i} split wrongly");
                assert_eq!(ours.site_flags(i), oracle.flags[b], "flags differ at {i}");
            }
            other => panic!("occupancy mismatch at {i}: {other:?}"),
        }
    }
    assert_eq!(ours.cluster_count(), oracle.flags.len());
    let (a1, a2) = (spec.anchor1_index(), spec.anchor2_index());
    let oracle_pair = oracle.labels[a1].is_some() && oracle.labels[a1] == oracle.labels[a2];
    assert_eq!(ours.anchors_connected(), oracle_pair);
}

#[test]
fn union_find_matches_flood_fill_at_pc() {
    for mode in [BoundaryMode::FullPerimeter, BoundaryMode::BottomEdge] {
        let spec = LatticeSpec::new(16, 16, SITE_PC, 6, 10).unwrap().with_boundary_mode(mode);
        let mut labeler = ClusterLabeler::new(&spec);
        for k in 0..1000 {
            let grid = sample_occupancy(&spec, SampleSeed::new(99, k));
            same_partition(&spec, &grid, &mut labeler);
        }
    }
}

#[test]
fn union_find_matches_flood_fill_across_densities_and_shapes() {
    // Widths straddling a word boundary exercise the bit packing.
    for (w, h, a1, a2) in [(2, 2, 0, 1), (63, 5, 0, 62), (64, 7, 10, 11), (65, 9, 30, 64), (130, 4, 1, 128)] {
        for p in [0.1, 0.45, SITE_PC, 0.75, 1.0] {
            let spec = LatticeSpec::new(w, h, p, a1, a2).unwrap();
            let mut labeler = ClusterLabeler::new(&spec);
            for k in 0..20 {
                let grid = sample_occupancy(&spec, SampleSeed::new(7, k));
                same_partition(&spec, &grid, &mut labeler);
            }
        }
    }
}

#[test]
fn count_inequalities_hold_on_every_sample() {
    let spec = LatticeSpec::new(16, 16, SITE_PC, 6, 10).unwrap();
    let mut labeler = ClusterLabeler::new(&spec);
    let mut counts = EventCounts::zero(&spec);
    for k in 0..1000 {
        let grid = sample_occupancy(&spec, SampleSeed::new(5, k));
        counts.accumulate(&labeler.label(&grid)).unwrap();
        counts.check_invariants().unwrap();
    }
}

/// Raising p with the same draws only adds sites, so every event indicator
/// can only switch on.
#[test]
fn events_are_monotone_in_p() {
    let base = LatticeSpec::new(20, 20, 0.3, 7, 12).unwrap();
    for k in 0..50 {
        let mut prev: Option<Vec<[bool; 6]>> = None;
        for p in [0.3, 0.5, SITE_PC, 0.7, 0.9] {
            let spec = base.with_p(p).unwrap();
            let labels = ClusterLabeler::new(&spec).label(&sample_occupancy(&spec, SampleSeed::new(1, k)));
            let hits: Vec<[bool; 6]> = (0..spec.sites())
                .map(|i| SiteEvent::ALL.map(|e| labels.site_flags(i).contains(e.flags())))
                .collect();
            if let Some(prev) = &prev {
                for (i, (a, b)) in prev.iter().zip(&hits).enumerate() {
                    for e in 0..6 {
                        assert!(!a[e] || b[e], "event {e} lost at site {i} going to p = {p}");
                    }
                }
            }
            prev = Some(hits);
        }
    }
}
