//! Closed-form reference solutions for the verification flows.
//!
//! Evaluators take physical coordinates; scenario code owns the map from
//! node indices to coordinates.

use crate::error::{Error, Result};

/// Plane Couette/Poiseuille channel between parallel plates.
#[derive(Debug, Clone, Copy)]
pub struct CouetteParams {
    /// Plate gap (m).
    pub h: f64,
    /// Speed of the top plate (m/s).
    pub u0: f64,
    /// Streamwise pressure gradient (Pa/m), zero for pure Couette.
    pub dpdx: f64,
    pub rho: f64,
    pub nu: f64,
}

/// Steady streamwise velocity at height `y`:
///
/// ```text
/// u(y) = (u0/h) y + dpdx/(2 rho nu) (y^2 - h y)
/// ```
///
/// The pressure term is omitted entirely when `dpdx` is zero, which keeps
/// the pure Couette profile independent of viscosity.
pub fn couette_profile(y: f64, p: &CouetteParams) -> Result<f64> {
    if p.h <= 0.0 {
        return Err(Error::config(format!("plate gap h = {} must be > 0", p.h)));
    }
    if !(0.0..=p.h).contains(&y) {
        return Err(Error::Domain { value: y, max: p.h });
    }
    let mut u = p.u0 / p.h * y;
    if p.dpdx != 0.0 {
        if p.nu <= 0.0 {
            return Err(Error::config(
                "viscosity must be > 0 for a pressure-driven profile",
            ));
        }
        u += p.dpdx / (2.0 * p.rho * p.nu) * (y * y - p.h * y);
    }
    Ok(u)
}

/// Decaying vortex on the doubly periodic square `[0, 2pi]^2`.
#[derive(Debug, Clone, Copy)]
pub struct TaylorGreenParams {
    /// Velocity amplitude (m/s).
    pub u0: f64,
    pub nu: f64,
}

/// Velocity of the decaying Taylor-Green vortex at `(x, y, t)`:
/// `u_x = -u0 cos(x) sin(y) exp(-2 nu t)`,
/// `u_y =  u0 sin(x) cos(y) exp(-2 nu t)`.
pub fn taylor_green(x: f64, y: f64, t: f64, p: &TaylorGreenParams) -> (f64, f64) {
    let decay = (-2.0 * p.nu * t).exp();
    (
        -p.u0 * x.cos() * y.sin() * decay,
        p.u0 * x.sin() * y.cos() * decay,
    )
}
