//! Discrete velocity sets for the D2Q9 and D3Q19 lattice models.
//!
//! Directions are stored as unit integer hops; the physical particle speed
//! `e` scales them only inside equilibrium evaluation and moment sums, so
//! streaming stays exact integer indexing.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Identifies one of the supported lattice models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeModel {
    D2Q9,
    D3Q19,
}

impl LatticeModel {
    pub fn dimension(self) -> usize {
        match self {
            LatticeModel::D2Q9 => 2,
            LatticeModel::D3Q19 => 3,
        }
    }

    pub fn link_count(self) -> usize {
        match self {
            LatticeModel::D2Q9 => 9,
            LatticeModel::D3Q19 => 19,
        }
    }
}

impl fmt::Display for LatticeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeModel::D2Q9 => write!(f, "D2Q9"),
            LatticeModel::D3Q19 => write!(f, "D3Q19"),
        }
    }
}

impl FromStr for LatticeModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "D2Q9" => Ok(LatticeModel::D2Q9),
            "D3Q19" => Ok(LatticeModel::D3Q19),
            other => Err(Error::config(format!("unknown lattice model `{other}`"))),
        }
    }
}

/// Velocity set, weights, and opposite-link table of one lattice model.
///
/// Link ordering follows the conventional enumeration (rest link first,
/// axis links, then diagonals) so indices can be cited directly in tests.
#[derive(Debug, Clone)]
pub struct Stencil<const D: usize, const Q: usize> {
    pub model: LatticeModel,
    /// Unit lattice hops per axis, one per link.
    pub directions: [[i32; D]; Q],
    pub weights: [f64; Q],
    /// `opposite[a]` is the link with reversed direction.
    pub opposite: [usize; Q],
}

pub const D2Q9: Stencil<2, 9> = Stencil {
    model: LatticeModel::D2Q9,
    directions: [
        [0, 0],
        [1, 0],
        [0, 1],
        [-1, 0],
        [0, -1],
        [1, 1],
        [-1, 1],
        [-1, -1],
        [1, -1],
    ],
    weights: [
        4.0 / 9.0,
        1.0 / 9.0,
        1.0 / 9.0,
        1.0 / 9.0,
        1.0 / 9.0,
        1.0 / 36.0,
        1.0 / 36.0,
        1.0 / 36.0,
        1.0 / 36.0,
    ],
    opposite: [0, 3, 4, 1, 2, 7, 8, 5, 6],
};

pub const D3Q19: Stencil<3, 19> = Stencil {
    model: LatticeModel::D3Q19,
    directions: [
        [0, 0, 0],
        [1, 0, 0],
        [-1, 0, 0],
        [0, 1, 0],
        [0, -1, 0],
        [0, 0, 1],
        [0, 0, -1],
        [1, 1, 0],
        [-1, -1, 0],
        [-1, 1, 0],
        [1, -1, 0],
        [0, 1, 1],
        [0, -1, -1],
        [0, -1, 1],
        [0, 1, -1],
        [1, 0, 1],
        [-1, 0, -1],
        [-1, 0, 1],
        [1, 0, -1],
    ],
    weights: [
        1.0 / 3.0,
        1.0 / 18.0,
        1.0 / 18.0,
        1.0 / 18.0,
        1.0 / 18.0,
        1.0 / 18.0,
        1.0 / 18.0,
        1.0 / 36.0,
        1.0 / 36.0,
        1.0 / 36.0,
        1.0 / 36.0,
        1.0 / 36.0,
        1.0 / 36.0,
        1.0 / 36.0,
        1.0 / 36.0,
        1.0 / 36.0,
        1.0 / 36.0,
        1.0 / 36.0,
        1.0 / 36.0,
    ],
    opposite: [0, 2, 1, 4, 3, 6, 5, 8, 7, 10, 9, 12, 11, 14, 13, 16, 15, 18, 17],
};
