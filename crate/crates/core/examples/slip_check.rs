use maclab::oracle::SrtSolver;
use maclab::solver::Kinetics;
use maclab::{BoundarySpec, Grid, D2Q9};

fn main() {
    let dx = 0.02;
    let dims = [20usize, 51];
    let u0 = 0.1;
    for tau in [0.8f64, 0.58, 1.0] {
        let grid = Grid::new(dims, dx, [true, false]).unwrap();
        let top = dims[1] - 1;
        let boundary = BoundarySpec::build(&grid, |c| {
            if c[1] == top { [u0, 0.0] } else { [0.0, 0.0] }
        }).unwrap();
        let kin = Kinetics::with_speed(1.0, dx, None).unwrap();
        let field = maclab::Field::uniform(grid.node_count(), 1.0, [0.0, 0.0]);
        let mut srt = SrtSolver::new(grid, D2Q9.clone(), kin, boundary, field, tau, 2).unwrap();
        let mut prev = srt.macro_field().clone();
        let mut steps = 0u64;
        loop {
            for _ in 0..500 { srt.step().unwrap(); }
            steps += 500;
            let mut d = 0.0f64;
            for i in 0..prev.rho.len() {
                d = d.max((srt.macro_field().vel[i][0] - prev.vel[i][0]).abs());
            }
            prev = srt.macro_field().clone();
            if d / u0 < 1e-12 || steps > 300000 { break; }
        }
        let g = srt.grid().clone();
        let mut worst = 0.0f64;
        for j in 0..dims[1] {
            let idx = g.index([7, j]);
            let y = j as f64 * dx;
            worst = worst.max((srt.macro_field().vel[idx][0] - u0 * y).abs());
        }
        println!("tau={tau}: steps={steps} linf={worst:.3e} rel={:.3e}", worst / u0);
    }
}
