//! Local equilibrium distribution and its moments.
//!
//! The equilibrium is the low-Mach polynomial
//!
//! ```text
//! feq_a = w_a rho (1 + 3 (e_a.u)/e^2 + 9/2 (e_a.u)^2/e^4 - 3/2 (u.u)/e^2)
//! ```
//!
//! with `e_a = e * direction[a]`. Its zeroth and first moments reproduce
//! `rho` and `rho u` exactly, which is what the whole scheme rests on.

use crate::error::{Error, Result};
use crate::lattice::Stencil;

/// Density and velocity at a single node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacroState<const D: usize> {
    pub rho: f64,
    pub u: [f64; D],
}

impl<const D: usize> MacroState<D> {
    pub fn new(rho: f64, u: [f64; D]) -> Self {
        Self { rho, u }
    }

    pub fn speed(&self) -> f64 {
        self.u.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// Evaluates the equilibrium vector for one node state.
///
/// `e` is the particle speed scaling the unit directions.
pub fn equilibrium<const D: usize, const Q: usize>(
    state: &MacroState<D>,
    stencil: &Stencil<D, Q>,
    e: f64,
) -> Result<[f64; Q]> {
    if e <= 0.0 {
        return Err(Error::config(format!("particle speed e = {e} must be > 0")));
    }
    Ok(eval(state.rho, &state.u, stencil, e))
}

/// Unchecked equilibrium evaluation, shared with the stepping kernels.
#[inline]
pub(crate) fn eval<const D: usize, const Q: usize>(
    rho: f64,
    u: &[f64; D],
    stencil: &Stencil<D, Q>,
    e: f64,
) -> [f64; Q] {
    let inv_e = 1.0 / e;
    let uu = u.iter().map(|c| c * c).sum::<f64>() * inv_e * inv_e;
    let mut feq = [0.0; Q];
    for a in 0..Q {
        // s = (e_a . u) / e^2 = (direction . u) / e
        let mut s = 0.0;
        for d in 0..D {
            s += stencil.directions[a][d] as f64 * u[d];
        }
        s *= inv_e;
        feq[a] = stencil.weights[a] * rho * (1.0 + 3.0 * s + 4.5 * s * s - 1.5 * uu);
    }
    feq
}

/// Recovers density and velocity from a distribution vector.
///
/// Returns the zeroth moment and the first moment divided by it. A vector
/// summing to zero has no meaningful velocity and is rejected.
pub fn moments<const D: usize, const Q: usize>(
    f: &[f64; Q],
    stencil: &Stencil<D, Q>,
    e: f64,
) -> Result<MacroState<D>> {
    let rho: f64 = f.iter().sum();
    if rho == 0.0 {
        return Err(Error::DegenerateDensity);
    }
    let mut u = [0.0; D];
    for a in 0..Q {
        for d in 0..D {
            u[d] += stencil.directions[a][d] as f64 * f[a];
        }
    }
    for c in u.iter_mut() {
        *c *= e / rho;
    }
    Ok(MacroState { rho, u })
}
