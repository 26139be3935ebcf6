//! Lattice positions: points of Z^d and vertices of the comb.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of Z^d.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZdPoint {
    coords: Vec<i64>,
}

impl ZdPoint {
    pub fn origin(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self { coords: vec![0; d] })
    }

    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn apply(&mut self, inc: ZdIncrement) {
        self.coords[inc.axis] += i64::from(inc.sign);
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Squared Euclidean norm.
    pub fn norm_sq(&self) -> i64 {
        self.coords.iter().map(|c| c * c).sum()
    }

    /// True when `other` differs in exactly one coordinate by one.
    pub fn is_neighbor(&self, other: &ZdPoint) -> bool {
        self.dim() == other.dim()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| (a - b).unsigned_abs())
                .sum::<u64>()
                == 1
    }
}

impl fmt::Display for ZdPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// One step of a walk on Z^d: `sign * e_axis`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ZdIncrement {
    pub axis: usize,
    pub sign: i8,
}

/// A vertex `(x, y)` of the comb: `x` runs along the backbone, `y` up a tooth.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct CombVertex {
    pub x: i64,
    pub y: i64,
}

impl CombVertex {
    pub const ORIGIN: CombVertex = CombVertex { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn on_backbone(self) -> bool {
        self.y == 0
    }

    pub fn degree(self) -> u32 {
        if self.y == 0 {
            4
        } else {
            2
        }
    }

    /// Neighbours in the order up, down, left, right (left/right only on the backbone).
    pub fn neighbors(self) -> impl Iterator<Item = CombVertex> {
        let CombVertex { x, y } = self;
        let vertical = [CombVertex::new(x, y + 1), CombVertex::new(x, y - 1)];
        let horizontal = if y == 0 {
            Some([CombVertex::new(x - 1, 0), CombVertex::new(x + 1, 0)])
        } else {
            None
        };
        vertical
            .into_iter()
            .chain(horizontal.into_iter().flatten())
    }

    pub fn is_neighbor(self, other: CombVertex) -> bool {
        if self.x == other.x {
            (self.y - other.y).abs() == 1
        } else {
            self.y == 0 && other.y == 0 && (self.x - other.x).abs() == 1
        }
    }
}

impl fmt::Display for CombVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}
