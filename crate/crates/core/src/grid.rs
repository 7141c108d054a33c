//! Structured grid with node classification and neighbor resolution.
//!
//! Nodes sit at `x = i * dx`, so boundary nodes lie exactly on walls. A
//! wall-bounded axis of physical length `L` therefore carries `L/dx + 1`
//! node lines, while a periodic axis of period `N*dx` carries `N`.

use crate::error::{Error, Result};

/// Role of a node in the update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    /// Updated by streaming every step.
    Fluid,
    /// Velocity prescribed; density closed by a zero-gradient copy.
    Prescribed,
}

/// Uniform structured grid, dimension fixed at compile time.
#[derive(Debug, Clone)]
pub struct Grid<const D: usize> {
    dims: [usize; D],
    dx: f64,
    periodic: [bool; D],
    strides: [usize; D],
    class: Vec<NodeClass>,
}

impl<const D: usize> Grid<D> {
    /// Builds a grid and classifies its nodes. Non-periodic axes get a
    /// prescribed-velocity node layer at both extremes.
    pub fn new(dims: [usize; D], dx: f64, periodic: [bool; D]) -> Result<Self> {
        if dx <= 0.0 {
            return Err(Error::config(format!("lattice spacing dx = {dx} must be > 0")));
        }
        for (axis, &n) in dims.iter().enumerate() {
            if n < 3 {
                return Err(Error::config(format!(
                    "axis {axis} has {n} nodes, need at least 3"
                )));
            }
        }
        let mut strides = [0usize; D];
        let mut s = 1;
        for d in 0..D {
            strides[d] = s;
            s = s.checked_mul(dims[d]).ok_or_else(|| Error::config("grid too large"))?;
        }
        let count = s;
        let mut class = vec![NodeClass::Fluid; count];
        for (idx, c) in class.iter_mut().enumerate() {
            let coords = coords_of(idx, &dims);
            for d in 0..D {
                if !periodic[d] && (coords[d] == 0 || coords[d] == dims[d] - 1) {
                    *c = NodeClass::Prescribed;
                    break;
                }
            }
        }
        Ok(Self {
            dims,
            dx,
            periodic,
            strides,
            class,
        })
    }

    pub fn dims(&self) -> [usize; D] {
        self.dims
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn periodic(&self) -> [bool; D] {
        self.periodic
    }

    pub fn strides(&self) -> [usize; D] {
        self.strides
    }

    pub fn node_count(&self) -> usize {
        self.class.len()
    }

    pub fn class(&self, idx: usize) -> NodeClass {
        self.class[idx]
    }

    pub fn classes(&self) -> &[NodeClass] {
        &self.class
    }

    #[inline]
    pub fn index(&self, coords: [usize; D]) -> usize {
        let mut idx = 0;
        for d in 0..D {
            debug_assert!(coords[d] < self.dims[d]);
            idx += coords[d] * self.strides[d];
        }
        idx
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> [usize; D] {
        coords_of(idx, &self.dims)
    }

    /// Physical position of a node.
    pub fn position(&self, coords: [usize; D]) -> [f64; D] {
        let mut p = [0.0; D];
        for d in 0..D {
            p[d] = coords[d] as f64 * self.dx;
        }
        p
    }

    /// Resolves the node one `hop` away, wrapping on periodic axes.
    /// Returns `None` when the hop leaves a wall-bounded axis.
    pub fn neighbor(&self, coords: [usize; D], hop: [i32; D]) -> Option<usize> {
        let mut n = [0usize; D];
        for d in 0..D {
            let mut c = coords[d] as i64 + hop[d] as i64;
            let len = self.dims[d] as i64;
            if self.periodic[d] {
                if c < 0 {
                    c += len;
                } else if c >= len {
                    c -= len;
                }
            } else if c < 0 || c >= len {
                return None;
            }
            n[d] = c as usize;
        }
        Some(self.index(n))
    }

    /// True when every neighbor of `coords` can be reached by plain
    /// flat-offset arithmetic (no periodic wrap at this node).
    #[inline]
    pub(crate) fn interior_fast_path(&self, coords: &[usize; D]) -> bool {
        for d in 0..D {
            if self.periodic[d] && (coords[d] == 0 || coords[d] == self.dims[d] - 1) {
                return false;
            }
        }
        true
    }
}

#[inline]
fn coords_of<const D: usize>(idx: usize, dims: &[usize; D]) -> [usize; D] {
    let mut c = [0usize; D];
    let mut rest = idx;
    for d in 0..D {
        c[d] = rest % dims[d];
        rest /= dims[d];
    }
    c
}

/// One boundary node with its prescribed velocity and the interior node
/// its density is copied from (one hop along the inward normal).
#[derive(Debug, Clone, Copy)]
pub struct PrescribedNode<const D: usize> {
    pub index: usize,
    pub velocity: [f64; D],
    pub density_source: usize,
}

/// Complete velocity prescription for every boundary node of a grid.
#[derive(Debug, Clone)]
pub struct BoundarySpec<const D: usize> {
    nodes: Vec<PrescribedNode<D>>,
}

impl<const D: usize> BoundarySpec<D> {
    /// Empty spec for fully periodic grids.
    pub fn none(grid: &Grid<D>) -> Result<Self> {
        if grid.classes().iter().any(|&c| c == NodeClass::Prescribed) {
            return Err(Error::config(
                "grid has prescribed-velocity nodes but no boundary values given",
            ));
        }
        Ok(Self { nodes: Vec::new() })
    }

    /// Builds the spec by evaluating `velocity_at` on every boundary node.
    pub fn build(
        grid: &Grid<D>,
        velocity_at: impl Fn([usize; D]) -> [f64; D],
    ) -> Result<Self> {
        let mut assignments = Vec::new();
        for idx in 0..grid.node_count() {
            if grid.class(idx) == NodeClass::Prescribed {
                assignments.push((idx, velocity_at(grid.coords(idx))));
            }
        }
        Self::from_nodes(grid, assignments)
    }

    /// Builds the spec from explicit `(node index, velocity)` pairs.
    ///
    /// Every prescribed node must be covered exactly once, and covering a
    /// fluid node is a configuration error.
    pub fn from_nodes(grid: &Grid<D>, assignments: Vec<(usize, [f64; D])>) -> Result<Self> {
        let mut seen = vec![false; grid.node_count()];
        let mut nodes = Vec::with_capacity(assignments.len());
        for (idx, velocity) in assignments {
            if idx >= grid.node_count() {
                return Err(Error::config(format!("boundary node {idx} out of range")));
            }
            if grid.class(idx) != NodeClass::Prescribed {
                return Err(Error::config(format!(
                    "node {idx} is a fluid node and cannot carry a boundary value"
                )));
            }
            if seen[idx] {
                return Err(Error::config(format!("node {idx} assigned twice")));
            }
            seen[idx] = true;
            nodes.push(PrescribedNode {
                index: idx,
                velocity,
                density_source: density_source(grid, idx)?,
            });
        }
        for idx in 0..grid.node_count() {
            if grid.class(idx) == NodeClass::Prescribed && !seen[idx] {
                return Err(Error::config(format!(
                    "prescribed node {idx} has no boundary velocity"
                )));
            }
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[PrescribedNode<D>] {
        &self.nodes
    }
}

/// Interior node one hop along the inward normal of a boundary node.
fn density_source<const D: usize>(grid: &Grid<D>, idx: usize) -> Result<usize> {
    let coords = grid.coords(idx);
    let dims = grid.dims();
    let periodic = grid.periodic();
    let mut hop = [0i32; D];
    for d in 0..D {
        if !periodic[d] {
            if coords[d] == 0 {
                hop[d] = 1;
            } else if coords[d] == dims[d] - 1 {
                hop[d] = -1;
            }
        }
    }
    grid.neighbor(coords, hop)
        .ok_or_else(|| Error::config(format!("no interior neighbor for boundary node {idx}")))
}
