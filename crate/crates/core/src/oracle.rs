//! Classical single-relaxation-time lattice Boltzmann solver.
//!
//! Keeps full per-node distribution vectors and relaxes them toward local
//! equilibrium each step:
//!
//! ```text
//! f_a(x + e_a dt, t + dt) = f_a(x, t) + (feq_a(x, t) - f_a(x, t)) / tau
//! ```
//!
//! Its kinematic viscosity is `(2 tau - 1) e dx / 6`. At `tau = 1` the
//! post-collision state is the equilibrium itself, so the moment trajectory
//! collapses onto the collision-free stepper; that equivalence (and its
//! breakdown for `tau != 1`) is what this module is for. It shares the
//! boundary closure with the main solver verbatim so any difference between
//! the two isolates the collision treatment.

use crate::equilibrium;
use crate::error::{Error, Result};
use crate::grid::{BoundarySpec, Grid, NodeClass};
use crate::lattice::Stencil;
use crate::solver::{chunk_len, feq_at, DivergenceSite, Field, Kinetics, KernelTables};

/// SRT solver with double-buffered distributions and synced moments.
pub struct SrtSolver<const D: usize, const Q: usize> {
    grid: Grid<D>,
    kin: Kinetics<D>,
    boundary: BoundarySpec<D>,
    tau: f64,
    f_front: Vec<[f64; Q]>,
    f_back: Vec<[f64; Q]>,
    macro_front: Field<D>,
    macro_back: Field<D>,
    tables: KernelTables<D, Q>,
    stencil: Stencil<D, Q>,
    threads: usize,
    t: f64,
    step_count: u64,
}

impl<const D: usize, const Q: usize> SrtSolver<D, Q> {
    /// Initializes every node's distribution at local equilibrium of the
    /// given macroscopic field.
    pub fn new(
        grid: Grid<D>,
        stencil: Stencil<D, Q>,
        kin: Kinetics<D>,
        boundary: BoundarySpec<D>,
        initial: Field<D>,
        tau: f64,
        threads: usize,
    ) -> Result<Self> {
        if tau < 0.5 {
            return Err(Error::config(format!(
                "relaxation time tau = {tau} must be >= 0.5"
            )));
        }
        if initial.len() != grid.node_count() {
            return Err(Error::config(format!(
                "initial field has {} nodes, grid has {}",
                initial.len(),
                grid.node_count()
            )));
        }
        let mut macro_front = initial;
        crate::solver::apply_prescribed(&boundary, &mut macro_front);
        let n = grid.node_count();
        let mut f_front = vec![[0.0; Q]; n];
        for idx in 0..n {
            f_front[idx] =
                equilibrium::eval(macro_front.rho[idx], &macro_front.vel[idx], &stencil, kin.e);
        }
        let tables = KernelTables::new(&stencil, &grid);
        Ok(Self {
            f_back: f_front.clone(),
            macro_back: macro_front.clone(),
            grid,
            kin,
            boundary,
            tau,
            f_front,
            macro_front,
            tables,
            stencil,
            threads: threads.max(1),
            t: 0.0,
            step_count: 0,
        })
    }

    pub fn grid(&self) -> &Grid<D> {
        &self.grid
    }

    pub fn kinetics(&self) -> &Kinetics<D> {
        &self.kin
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Effective kinematic viscosity `(2 tau - 1) e dx / 6`.
    pub fn viscosity(&self) -> f64 {
        (2.0 * self.tau - 1.0) * self.kin.e * self.grid.dx() / 6.0
    }

    /// Moments of the current distributions.
    pub fn macro_field(&self) -> &Field<D> {
        &self.macro_front
    }

    pub fn distributions(&self) -> &[[f64; Q]] {
        &self.f_front
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// Advances distributions and moments by one time step.
    pub fn step(&mut self) -> Result<()> {
        let n = self.grid.node_count();
        let threads = self.threads.min(n);
        let grid = &self.grid;
        let tables = &self.tables;
        let e = self.kin.e;
        let inv_tau = 1.0 / self.tau;

        let f_read = &self.f_front;
        let m_read = &self.macro_front;
        let f_write = &mut self.f_back;
        let m_write = &mut self.macro_back;

        let failure = if threads <= 1 {
            srt_pass::<D, Q>(
                grid,
                tables,
                e,
                inv_tau,
                f_read,
                m_read,
                0,
                f_write,
                &mut m_write.rho,
                &mut m_write.vel,
            )
        } else {
            let mut sites = Vec::new();
            std::thread::scope(|scope| {
                let mut handles = Vec::with_capacity(threads);
                let mut f_rest: &mut [[f64; Q]] = f_write;
                let mut rho_rest: &mut [f64] = &mut m_write.rho;
                let mut vel_rest: &mut [[f64; D]] = &mut m_write.vel;
                let mut start = 0usize;
                for r in 0..threads {
                    let len = chunk_len(n, threads, r);
                    let (f_chunk, f_tail) = f_rest.split_at_mut(len);
                    let (rho_chunk, rho_tail) = rho_rest.split_at_mut(len);
                    let (vel_chunk, vel_tail) = vel_rest.split_at_mut(len);
                    f_rest = f_tail;
                    rho_rest = rho_tail;
                    vel_rest = vel_tail;
                    let lo = start;
                    start += len;
                    handles.push(scope.spawn(move || {
                        srt_pass::<D, Q>(
                            grid, tables, e, inv_tau, f_read, m_read, lo, f_chunk, rho_chunk,
                            vel_chunk,
                        )
                    }));
                }
                for h in handles {
                    sites.push(h.join().expect("oracle worker panicked"));
                }
            });
            sites.into_iter().flatten().min_by_key(|s: &DivergenceSite| s.node)
        };

        if let Some(site) = failure {
            return Err(Error::Diverged {
                step: self.step_count + 1,
                node: site.node,
                reason: format!("density {}", site.rho),
            });
        }

        // boundary closure identical to the collision-free solver, lifted to
        // distribution space: wall nodes carry the equilibrium of their
        // prescribed state
        crate::solver::apply_prescribed(&self.boundary, m_write);
        for node in self.boundary.nodes() {
            f_write[node.index] = equilibrium::eval(
                m_write.rho[node.index],
                &m_write.vel[node.index],
                &self.stencil,
                e,
            );
        }

        std::mem::swap(&mut self.f_front, &mut self.f_back);
        std::mem::swap(&mut self.macro_front, &mut self.macro_back);
        self.step_count += 1;
        self.t = self.step_count as f64 * self.kin.dt;
        Ok(())
    }
}

/// Relaxed distribution value pulled from one upwind neighbor.
#[inline(always)]
fn relax(f: f64, feq: f64, inv_tau: f64) -> f64 {
    f + inv_tau * (feq - f)
}

#[allow(clippy::too_many_arguments)]
fn srt_pass<const D: usize, const Q: usize>(
    grid: &Grid<D>,
    tables: &KernelTables<D, Q>,
    e: f64,
    inv_tau: f64,
    f_read: &[[f64; Q]],
    m_read: &Field<D>,
    lo: usize,
    f_out: &mut [[f64; Q]],
    rho_out: &mut [f64],
    vel_out: &mut [[f64; D]],
) -> Option<DivergenceSite> {
    let dims = grid.dims();
    let strides = grid.strides();
    let periodic = grid.periodic();
    let classes = grid.classes();
    let inv_e = 1.0 / e;
    let mut coords = grid.coords(lo);

    for (k, f_slot) in f_out.iter_mut().enumerate() {
        let idx = lo + k;
        if classes[idx] == NodeClass::Fluid {
            let fast = grid.interior_fast_path(&coords);
            for a in 0..Q {
                let src = if fast {
                    (idx as i64 - tables.flat_off[a]) as usize
                } else {
                    let mut s = 0usize;
                    for d in 0..D {
                        let mut c = coords[d] as i64 - tables.dirs_i[a][d] as i64;
                        if periodic[d] {
                            let len = dims[d] as i64;
                            if c < 0 {
                                c += len;
                            } else if c >= len {
                                c -= len;
                            }
                        }
                        s += c as usize * strides[d];
                    }
                    s
                };
                let feq = feq_at::<D, Q>(m_read, src, tables, a, inv_e);
                f_slot[a] = relax(f_read[src][a], feq, inv_tau);
            }

            let mut rho = 0.0;
            let mut mom = [0.0; D];
            for a in 0..Q {
                rho += f_slot[a];
                for d in 0..D {
                    mom[d] += tables.dirs[a][d] * f_slot[a];
                }
            }
            if !(rho.is_finite() && rho > 0.0) {
                return Some(DivergenceSite { node: idx, rho });
            }
            let mut u = [0.0; D];
            for d in 0..D {
                u[d] = e * mom[d] / rho;
            }
            rho_out[k] = rho;
            vel_out[k] = u;
        }

        for d in 0..D {
            coords[d] += 1;
            if coords[d] < dims[d] {
                break;
            }
            coords[d] = 0;
        }
    }
    None
}
