use super::labels::ClusterFlags;
use super::spec::{BoundaryMode, LatticeSpec};

/// Role of a site in the boundary partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PerimeterClass {
    Interior,
    Anchor1,
    Anchor2,
    /// Bottom-row sites strictly between the anchors.
    Interval,
    /// Every other boundary site, anchors excluded.
    Complement,
}

impl PerimeterClass {
    /// Flags a cluster acquires by containing a site of this class.
    pub fn flags(self) -> ClusterFlags {
        match self {
            PerimeterClass::Interior => ClusterFlags::EMPTY,
            PerimeterClass::Anchor1 => ClusterFlags::ANCHOR1 | ClusterFlags::BOUNDARY,
            PerimeterClass::Anchor2 => ClusterFlags::ANCHOR2 | ClusterFlags::BOUNDARY,
            PerimeterClass::Interval => ClusterFlags::INTERVAL | ClusterFlags::BOUNDARY,
            PerimeterClass::Complement => ClusterFlags::COMPLEMENT | ClusterFlags::BOUNDARY,
        }
    }
}

/// Classification of every site of a lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPartition {
    spec: LatticeSpec,
    classes: Vec<PerimeterClass>,
    /// `(index, class)` for every non-interior site, in index order.
    boundary_sites: Vec<(usize, PerimeterClass)>,
}

impl BoundaryPartition {
    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn class(&self, index: usize) -> PerimeterClass {
        self.classes[index]
    }

    pub fn boundary_sites(&self) -> &[(usize, PerimeterClass)] {
        &self.boundary_sites
    }

    pub fn sites_of(&self, class: PerimeterClass) -> Vec<usize> {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == class)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn count(&self, class: PerimeterClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }
}

pub fn boundary_partition(spec: &LatticeSpec) -> BoundaryPartition {
    let (w, h) = (spec.width(), spec.height());
    let mut classes = vec![PerimeterClass::Interior; spec.sites()];
    for row in 0..h {
        for col in 0..w {
            let on_boundary = match spec.boundary_mode() {
                BoundaryMode::FullPerimeter => {
                    row == 0 || row == h - 1 || col == 0 || col == w - 1
                }
                BoundaryMode::BottomEdge => row == 0,
            };
            if !on_boundary {
                continue;
            }
            classes[spec.index(col, row)] = if row == 0 && col == spec.anchor1_col() {
                PerimeterClass::Anchor1
            } else if row == 0 && col == spec.anchor2_col() {
                PerimeterClass::Anchor2
            } else if row == 0 && col > spec.anchor1_col() && col < spec.anchor2_col() {
                PerimeterClass::Interval
            } else {
                PerimeterClass::Complement
            };
        }
    }
    let boundary_sites = classes
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != PerimeterClass::Interior)
        .map(|(i, &c)| (i, c))
        .collect();
    BoundaryPartition { spec: *spec, classes, boundary_sites }
}
