//! P1 finite elements for the state problem `-Δu = 1`, `u = 0` on `∂Ω`.

mod io;
mod mesh;
mod solve;
pub mod sparse;

pub use io::{read_field, write_boundary_csv, write_field};
pub use mesh::{mesh_from_levelset, snap_small_cuts, BoundaryEdge, SnappedGrid, EdgeTag, TriMesh, SNAP_FRACTION};
pub use solve::{
    assemble, boundary_gradient, dirichlet_energy, max_cg_iterations, solve_poisson,
    solve_poisson_with_stats, BoundarySample, EnergyValue, ScalarField, SOLVER_TOL,
};
