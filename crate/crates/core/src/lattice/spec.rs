use std::fmt;
use std::str::FromStr;

use crate::{Error, Result, SITE_PC};

/// Which lattice sites count as the boundary of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BoundaryMode {
    /// The whole perimeter of the rectangle.
    #[default]
    FullPerimeter,
    /// Only the bottom row, the one carrying the anchors.
    BottomEdge,
}

impl BoundaryMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryMode::FullPerimeter => "full-perimeter",
            BoundaryMode::BottomEdge => "bottom-edge",
        }
    }

    pub(crate) fn code(self) -> u32 {
        match self {
            BoundaryMode::FullPerimeter => 0,
            BoundaryMode::BottomEdge => 1,
        }
    }

    pub(crate) fn from_code(code: u32) -> Option<Self> {
        match code {
            0 => Some(BoundaryMode::FullPerimeter),
            1 => Some(BoundaryMode::BottomEdge),
            _ => None,
        }
    }
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundaryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full-perimeter" => Ok(BoundaryMode::FullPerimeter),
            "bottom-edge" => Ok(BoundaryMode::BottomEdge),
            other => Err(Error::usage(format!(
                "unknown boundary mode {other:?} (expected full-perimeter or bottom-edge)"
            ))),
        }
    }
}

/// Geometry and occupation probability of one experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    width: usize,
    height: usize,
    p: f64,
    anchor1_col: usize,
    anchor2_col: usize,
    boundary_mode: BoundaryMode,
}

impl LatticeSpec {
    pub fn new(
        width: usize,
        height: usize,
        p: f64,
        anchor1_col: usize,
        anchor2_col: usize,
    ) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::usage(format!(
                "lattice must be at least 2x2, got {width}x{height}"
            )));
        }
        if width.checked_mul(height).is_none_or(|n| n >= u32::MAX as usize) {
            return Err(Error::usage(format!("lattice {width}x{height} is too large")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::usage(format!("occupation probability {p} outside [0, 1]")));
        }
        if !(anchor1_col < anchor2_col && anchor2_col < width) {
            return Err(Error::usage(format!(
                "anchor columns must satisfy 0 <= {anchor1_col} < {anchor2_col} < {width}"
            )));
        }
        Ok(LatticeSpec {
            width,
            height,
            p,
            anchor1_col,
            anchor2_col,
            boundary_mode: BoundaryMode::default(),
        })
    }

    /// Square lattice at the percolation point with anchors 3/8 and 5/8 of
    /// the way along the bottom edge.
    pub fn square_at_pc(size: usize) -> Result<Self> {
        Self::new(size, size, SITE_PC, size * 3 / 8, size * 5 / 8)
    }

    /// 510 x 510 with anchors at columns 192 and 320.
    pub fn full_scale() -> Self {
        Self::new(510, 510, SITE_PC, 192, 320).expect("valid geometry")
    }

    /// 128 x 128 with anchors at columns 48 and 80.
    pub fn desk_scale() -> Self {
        Self::new(128, 128, SITE_PC, 48, 80).expect("valid geometry")
    }

    pub fn with_boundary_mode(mut self, mode: BoundaryMode) -> Self {
        self.boundary_mode = mode;
        self
    }

    pub fn with_p(self, p: f64) -> Result<Self> {
        Self::new(self.width, self.height, p, self.anchor1_col, self.anchor2_col)
            .map(|s| s.with_boundary_mode(self.boundary_mode))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn sites(&self) -> usize {
        self.width * self.height
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn anchor1_col(&self) -> usize {
        self.anchor1_col
    }

    pub fn anchor2_col(&self) -> usize {
        self.anchor2_col
    }

    pub fn boundary_mode(&self) -> BoundaryMode {
        self.boundary_mode
    }

    #[inline]
    pub fn index(&self, col: usize, row: usize) -> usize {
        row * self.width + col
    }

    /// `(col, row)` of a flat index.
    #[inline]
    pub fn coords(&self, index: usize) -> (usize, usize) {
        (index % self.width, index / self.width)
    }

    pub fn anchor1_index(&self) -> usize {
        self.index(self.anchor1_col, 0)
    }

    pub fn anchor2_index(&self) -> usize {
        self.index(self.anchor2_col, 0)
    }

    /// Equality that also distinguishes `p` bit patterns such as `-0.0`.
    pub(crate) fn same_as(&self, other: &LatticeSpec) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.p.to_bits() == other.p.to_bits()
            && self.anchor1_col == other.anchor1_col
            && self.anchor2_col == other.anchor2_col
            && self.boundary_mode == other.boundary_mode
    }
}
