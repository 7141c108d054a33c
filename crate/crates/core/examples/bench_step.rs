//! Rough step-rate measurement for the two benchmark grid sizes.

use maclab::solver::{derive_kinetics, smooth_field};
use maclab::{BoundarySpec, Grid, MacLabSolver, D2Q9, D3Q19};
use std::time::Instant;

fn main() {
    let threads: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));

    // 2D cavity-sized periodic grid
    let grid = Grid::new([401, 401], 0.0025, [true, true]).unwrap();
    let kin = derive_kinetics(0.001, 0.0025, None).unwrap();
    let boundary = BoundarySpec::none(&grid).unwrap();
    let field = smooth_field(&grid, 0.05);
    let mut s = MacLabSolver::new(grid, D2Q9.clone(), kin, boundary, field, threads).unwrap();
    let t0 = Instant::now();
    let n = 200;
    for _ in 0..n {
        s.step().unwrap();
    }
    let dt = t0.elapsed().as_secs_f64();
    println!(
        "D2Q9 401^2, {threads} threads: {:.1} steps/s ({:.2} Mnode-updates/s)",
        n as f64 / dt,
        n as f64 * 401.0 * 401.0 / dt / 1e6
    );

    // 3D cavity-sized periodic grid
    let grid = Grid::new([101, 101, 101], 0.01, [true, true, true]).unwrap();
    let kin = derive_kinetics(0.0025, 0.01, None).unwrap();
    let boundary = BoundarySpec::none(&grid).unwrap();
    let field = smooth_field(&grid, 0.05);
    let mut s = MacLabSolver::new(grid, D3Q19.clone(), kin, boundary, field, threads).unwrap();
    let t0 = Instant::now();
    let n = 20;
    for _ in 0..n {
        s.step().unwrap();
    }
    let dt = t0.elapsed().as_secs_f64();
    println!(
        "D3Q19 101^3, {threads} threads: {:.1} steps/s ({:.2} Mnode-updates/s)",
        n as f64 / dt,
        n as f64 * 101.0f64.powi(3) / dt / 1e6
    );
}
