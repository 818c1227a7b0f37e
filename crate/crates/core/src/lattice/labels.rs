use std::ops::{BitOr, BitOrAssign};

use super::boundary::{boundary_partition, BoundaryPartition};
use super::occupancy::OccupancyGrid;
use super::spec::{BoundaryMode, LatticeSpec};
use super::union_find::UnionFind;

/// Boundary classes touched by a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ClusterFlags(u8);

impl ClusterFlags {
    pub const EMPTY: ClusterFlags = ClusterFlags(0);
    pub const ANCHOR1: ClusterFlags = ClusterFlags(1);
    pub const ANCHOR2: ClusterFlags = ClusterFlags(1 << 1);
    pub const INTERVAL: ClusterFlags = ClusterFlags(1 << 2);
    pub const COMPLEMENT: ClusterFlags = ClusterFlags(1 << 3);
    pub const BOUNDARY: ClusterFlags = ClusterFlags(1 << 4);
    pub const BOTH_ANCHORS: ClusterFlags = ClusterFlags(1 | 1 << 1);

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, other: ClusterFlags) -> bool {
        self.0 & other.0 == other.0
    }
}

impl BitOr for ClusterFlags {
    type Output = ClusterFlags;

    fn bitor(self, rhs: ClusterFlags) -> ClusterFlags {
        ClusterFlags(self.0 | rhs.0)
    }
}

impl BitOrAssign for ClusterFlags {
    fn bitor_assign(&mut self, rhs: ClusterFlags) {
        self.0 |= rhs.0;
    }
}

/// Maximal horizontal stretch of occupied sites; all of it is in one cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run {
    /// Flat index of the leftmost site.
    pub start: u32,
    pub len: u32,
    pub cluster: u32,
}

impl Run {
    #[inline]
    pub fn sites(&self) -> std::ops::Range<usize> {
        self.start as usize..(self.start + self.len) as usize
    }

    #[inline]
    fn end(&self) -> u32 {
        self.start + self.len
    }
}

/// Clusters of one sample, stored as labeled runs.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterLabels {
    spec: LatticeSpec,
    runs: Vec<Run>,
    /// Index of the first run of each row, plus a trailing sentinel.
    row_starts: Vec<u32>,
    flags: Vec<ClusterFlags>,
    sizes: Vec<u32>,
}

impl ClusterLabels {
    pub const VACANT: u32 = u32::MAX;

    fn empty(spec: &LatticeSpec) -> Self {
        ClusterLabels {
            spec: *spec,
            runs: Vec::new(),
            row_starts: vec![0; spec.height() + 1],
            flags: Vec::new(),
            sizes: Vec::new(),
        }
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    /// Occupied runs in raster order.
    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn row_runs(&self, row: usize) -> &[Run] {
        &self.runs[self.row_starts[row] as usize..self.row_starts[row + 1] as usize]
    }

    /// Cluster of a site, `None` if vacant.
    pub fn label(&self, index: usize) -> Option<u32> {
        let (_, row) = self.spec.coords(index);
        let runs = self.row_runs(row);
        let k = runs.partition_point(|r| r.start as usize <= index);
        let run = runs.get(k.checked_sub(1)?)?;
        (index < run.end() as usize).then_some(run.cluster)
    }

    /// Per-site labels, [`Self::VACANT`] for empty sites.
    pub fn to_label_grid(&self) -> Vec<u32> {
        let mut grid = vec![Self::VACANT; self.spec.sites()];
        for run in &self.runs {
            grid[run.sites()].fill(run.cluster);
        }
        grid
    }

    pub fn cluster_count(&self) -> usize {
        self.flags.len()
    }

    pub fn cluster_flags(&self) -> &[ClusterFlags] {
        &self.flags
    }

    pub fn cluster_size(&self, label: u32) -> usize {
        self.sizes[label as usize] as usize
    }

    /// Flags of the cluster containing the site; empty for vacant sites.
    pub fn site_flags(&self, index: usize) -> ClusterFlags {
        self.label(index)
            .map_or(ClusterFlags::EMPTY, |l| self.flags[l as usize])
    }

    pub fn same_cluster(&self, a: usize, b: usize) -> bool {
        match (self.label(a), self.label(b)) {
            (Some(la), Some(lb)) => la == lb,
            _ => false,
        }
    }

    /// Both anchor sites occupied and in one cluster.
    pub fn anchors_connected(&self) -> bool {
        self.same_cluster(self.spec.anchor1_index(), self.spec.anchor2_index())
    }
}

/// Reusable labeling workspace for one lattice geometry.
///
/// Labeling works on horizontal runs of occupied sites: each run is one
/// union-find node, joined to every run it overlaps in the row below.
#[derive(Debug, Clone)]
pub struct ClusterLabeler {
    partition: BoundaryPartition,
    uf: UnionFind,
}

impl ClusterLabeler {
    pub fn new(spec: &LatticeSpec) -> Self {
        ClusterLabeler { partition: boundary_partition(spec), uf: UnionFind::default() }
    }

    pub fn spec(&self) -> &LatticeSpec {
        self.partition.spec()
    }

    pub fn partition(&self) -> &BoundaryPartition {
        &self.partition
    }

    pub fn label(&mut self, grid: &OccupancyGrid) -> ClusterLabels {
        let mut out = ClusterLabels::empty(grid.spec());
        self.label_into(grid, &mut out);
        out
    }

    /// Label `grid` into `out`, reusing its buffers.
    ///
    /// Panics if `grid` was built for a different lattice than this labeler.
    pub fn label_into(&mut self, grid: &OccupancyGrid, out: &mut ClusterLabels) {
        let spec = *self.partition.spec();
        assert!(grid.spec().same_as(&spec), "grid and labeler disagree on the lattice");
        let (w, h) = (spec.width(), spec.height());

        out.spec = spec;
        out.runs.clear();
        out.row_starts.clear();
        for row in 0..h {
            out.row_starts.push(out.runs.len() as u32);
            push_runs(grid.row_words(row), w, (row * w) as u32, &mut out.runs);
        }
        out.row_starts.push(out.runs.len() as u32);

        let runs = &out.runs;
        let n_runs = runs.len();
        self.uf.reset(n_runs);
        let w32 = w as u32;
        for row in 1..h {
            let below_end = out.row_starts[row] as usize;
            let mut j = out.row_starts[row - 1] as usize;
            for cur in below_end..out.row_starts[row + 1] as usize {
                let (s, e) = (runs[cur].start - w32, runs[cur].end() - w32);
                while j < below_end && runs[j].end() <= s {
                    j += 1;
                }
                let mut k = j;
                while k < below_end && runs[k].start < e {
                    self.uf.union(cur, k);
                    k += 1;
                }
            }
        }

        out.flags.clear();
        out.sizes.clear();
        // Roots are the smallest run of their set, so the root's id is
        // assigned before any other member is visited.
        for r in 0..n_runs {
            let root = self.uf.find(r);
            let id = if root == r {
                out.flags.push(ClusterFlags::EMPTY);
                out.sizes.push(0);
                (out.flags.len() - 1) as u32
            } else {
                out.runs[root].cluster
            };
            let run = &mut out.runs[r];
            run.cluster = id;
            out.sizes[id as usize] += run.len;
        }

        mark_boundary_flags(&spec, out);
    }
}

/// OR into each cluster the flags of the boundary sites its runs cover.
fn mark_boundary_flags(spec: &LatticeSpec, out: &mut ClusterLabels) {
    let (w, h) = (spec.width() as u32, spec.height());
    let (a1, a2) = (spec.anchor1_col() as u32, spec.anchor2_col() as u32);
    let ClusterLabels { runs, row_starts, flags, .. } = out;
    let row = |r: usize| &runs[row_starts[r] as usize..row_starts[r + 1] as usize];

    for run in row(0) {
        let (s, e) = (run.start, run.end());
        let mut f = ClusterFlags::BOUNDARY;
        if s <= a1 && a1 < e {
            f |= ClusterFlags::ANCHOR1;
        }
        if s <= a2 && a2 < e {
            f |= ClusterFlags::ANCHOR2;
        }
        if s.max(a1 + 1) < e.min(a2) {
            f |= ClusterFlags::INTERVAL;
        }
        if s < a1 || e > a2 + 1 {
            f |= ClusterFlags::COMPLEMENT;
        }
        flags[run.cluster as usize] |= f;
    }

    if spec.boundary_mode() == BoundaryMode::BottomEdge {
        return;
    }
    let outer = ClusterFlags::COMPLEMENT | ClusterFlags::BOUNDARY;
    for run in row(h - 1) {
        flags[run.cluster as usize] |= outer;
    }
    for r in 1..h - 1 {
        let runs = row(r);
        let base = (r as u32) * w;
        if let Some(first) = runs.first().filter(|run| run.start == base) {
            flags[first.cluster as usize] |= outer;
        }
        if let Some(last) = runs.last().filter(|run| run.end() == base + w) {
            flags[last.cluster as usize] |= outer;
        }
    }
}

/// Append every run of set bits of one packed row, offset by `base`.
fn push_runs(words: &[u64], width: usize, base: u32, runs: &mut Vec<Run>) {
    let mut open: Option<u32> = None;
    let mut push = |start: u32, end: u32| {
        runs.push(Run { start: base + start, len: end - start, cluster: 0 });
    };
    for (k, &word) in words.iter().enumerate() {
        let offset = (k * 64) as u32;
        let mut pos = 0u32;
        while pos < 64 {
            // High bits of `rest` are zero, so a stretch of ones never runs past bit 63.
            let rest = word >> pos;
            match open {
                Some(start) => {
                    pos += rest.trailing_ones();
                    if pos < 64 {
                        push(start, offset + pos);
                        open = None;
                    }
                }
                None => {
                    if rest == 0 {
                        break;
                    }
                    pos += rest.trailing_zeros();
                    open = Some(offset + pos);
                }
            }
        }
    }
    if let Some(start) = open {
        push(start, width as u32);
    }
}

/// Connected components of occupied sites under 4-neighbour adjacency.
pub fn label_clusters(grid: &OccupancyGrid) -> ClusterLabels {
    ClusterLabeler::new(grid.spec()).label(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{sample_occupancy, PerimeterClass, SampleSeed};

    fn spec() -> LatticeSpec {
        LatticeSpec::new(12, 9, 0.5927463, 3, 8).unwrap()
    }

    #[test]
    fn full_grid_is_one_cluster_touching_everything() {
        let s = spec().with_p(1.0).unwrap();
        let labels = label_clusters(&sample_occupancy(&s, SampleSeed::new(0, 0)));
        assert_eq!(labels.cluster_count(), 1);
        let f = labels.cluster_flags()[0];
        for flag in [
            ClusterFlags::ANCHOR1,
            ClusterFlags::ANCHOR2,
            ClusterFlags::INTERVAL,
            ClusterFlags::COMPLEMENT,
            ClusterFlags::BOUNDARY,
        ] {
            assert!(f.contains(flag));
        }
        assert!(labels.anchors_connected());
        assert_eq!(labels.cluster_size(0), s.sites());
    }

    #[test]
    fn checkerboard_sites_are_singletons() {
        let s = spec();
        let grid = OccupancyGrid::from_fn(&s, |c, r| (c + r) % 2 == 0);
        let labels = label_clusters(&grid);
        assert_eq!(labels.cluster_count(), grid.occupied_count());
        assert_eq!(labels.runs().len(), grid.occupied_count());
        for id in 0..labels.cluster_count() as u32 {
            assert_eq!(labels.cluster_size(id), 1);
        }
    }

    #[test]
    fn lone_anchor_site() {
        let s = spec();
        let grid = OccupancyGrid::from_fn(&s, |c, r| r == 0 && c == s.anchor1_col());
        let labels = label_clusters(&grid);
        assert_eq!(labels.cluster_count(), 1);
        assert_eq!(labels.cluster_flags()[0], ClusterFlags::ANCHOR1 | ClusterFlags::BOUNDARY);
        assert!(!labels.anchors_connected());
    }

    #[test]
    fn flags_match_direct_scan() {
        use crate::lattice::BoundaryMode;
        let edge_anchors = LatticeSpec::new(12, 9, 0.5927463, 0, 11).unwrap();
        let adjacent = LatticeSpec::new(12, 9, 0.5927463, 5, 6).unwrap();
        for s in [spec(), edge_anchors, adjacent] {
            for mode in [BoundaryMode::FullPerimeter, BoundaryMode::BottomEdge] {
                let s = s.with_boundary_mode(mode);
                let mut labeler = ClusterLabeler::new(&s);
                let part = labeler.partition().clone();
                for k in 0..40 {
                    let grid = sample_occupancy(&s, SampleSeed::new(9, k));
                    let labels = labeler.label(&grid);
                    let dense = labels.to_label_grid();
                    for id in 0..labels.cluster_count() as u32 {
                        let members: Vec<usize> = (0..s.sites()).filter(|&i| dense[i] == id).collect();
                        let touches =
                            |class: PerimeterClass| members.iter().any(|&i| part.class(i) == class);
                        let f = labels.cluster_flags()[id as usize];
                        assert_eq!(f.contains(ClusterFlags::INTERVAL), touches(PerimeterClass::Interval));
                        assert_eq!(f.contains(ClusterFlags::COMPLEMENT), touches(PerimeterClass::Complement));
                        assert_eq!(f.contains(ClusterFlags::ANCHOR1), touches(PerimeterClass::Anchor1));
                        assert_eq!(f.contains(ClusterFlags::ANCHOR2), touches(PerimeterClass::Anchor2));
                        assert_eq!(
                            f.contains(ClusterFlags::BOUNDARY),
                            members.iter().any(|&i| part.class(i) != PerimeterClass::Interior)
                        );
                        assert_eq!(labels.cluster_size(id), members.len());
                    }
                }
            }
        }
    }

    #[test]
    fn label_lookup_matches_label_grid() {
        let s = LatticeSpec::new(70, 5, 0.6, 3, 8).unwrap();
        for k in 0..10 {
            let grid = sample_occupancy(&s, SampleSeed::new(2, k));
            let labels = label_clusters(&grid);
            let dense = labels.to_label_grid();
            for (i, &d) in dense.iter().enumerate() {
                assert_eq!(labels.label(i), (d != ClusterLabels::VACANT).then_some(d));
                assert_eq!(labels.label(i).is_some(), grid.is_occupied_index(i));
            }
        }
    }

    #[test]
    fn reused_buffers_match_fresh_labeling() {
        let s = spec();
        let mut labeler = ClusterLabeler::new(&s);
        let mut reused = labeler.label(&OccupancyGrid::empty(&s));
        for k in 0..20 {
            let grid = sample_occupancy(&s, SampleSeed::new(5, k));
            labeler.label_into(&grid, &mut reused);
            assert_eq!(reused, label_clusters(&grid));
        }
    }
}
