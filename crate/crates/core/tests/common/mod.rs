#![allow(dead_code)]

use std::collections::VecDeque;

use percorr::estimator::SiteEvent;
use percorr::lattice::{boundary_partition, ClusterFlags, OccupancyGrid};

/// Breadth-first cluster labels with per-cluster boundary flags.
pub struct Flood {
    pub labels: Vec<Option<usize>>,
    pub flags: Vec<ClusterFlags>,
}

impl Flood {
    pub fn site_flags(&self, i: usize) -> ClusterFlags {
        self.labels[i].map_or(ClusterFlags::EMPTY, |l| self.flags[l])
    }
}

pub fn flood_fill(grid: &OccupancyGrid) -> Flood {
    let spec = *grid.spec();
    let (w, h) = (spec.width(), spec.height());
    let part = boundary_partition(&spec);
    let occ = grid.to_bools();
    let mut labels = vec![None; spec.sites()];
    let mut flags = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..spec.sites() {
        if !occ[start] || labels[start].is_some() {
            continue;
        }
        let id = flags.len();
        let mut f = ClusterFlags::EMPTY;
        labels[start] = Some(id);
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            f |= part.class(i).flags();
            let (c, r) = spec.coords(i);
            let mut nb = Vec::with_capacity(4);
            if c > 0 { nb.push(i - 1); }
            if c + 1 < w { nb.push(i + 1); }
            if r > 0 { nb.push(i - w); }
            if r + 1 < h { nb.push(i + w); }
            for j in nb {
                if occ[j] && labels[j].is_none() {
                    labels[j] = Some(id);
                    queue.push_back(j);
                }
            }
        }
        flags.push(f);
    }
    Flood { labels, flags }
}

/// Per-site event indicator from oracle flags.
pub fn event_hit(f: ClusterFlags, e: SiteEvent) -> bool {
    f.contains(e.flags())
}
