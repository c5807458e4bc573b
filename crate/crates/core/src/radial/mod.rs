//! Piecewise-radial solutions of `−Δu = f(u)` with constant `|∇u|` on a
//! sphere, and exact checks of the identities they satisfy.

mod checks;
mod profile;
mod source;
mod suite;

pub use checks::{
    decay_check, eikonal_check, pde_residual, radial_laplacian, residual_at, residual_grid, sphere_cap_gamma_check,
    SphereCapCheck, BREAKPOINT_GUARD, EIKONAL_SPACING,
};
pub use profile::{ball_baseline, exterior_profile, interior_profile, PiecewiseRadialProfile, Piece, ProfileKind};
pub use source::{
    exterior_source, interior_source, source_properties, unit_source, Branch, SourceFunction, SourceProperties,
};
pub use suite::{
    profile_and_source, verify, write_profile_csv, Construction, SerF64, VerificationReport, CAP_SAMPLES,
    GLUING_TOL, RESIDUAL_SAMPLES, RESIDUAL_TOL,
};
