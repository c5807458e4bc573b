//! Trial domains in the box `(-1, 1)²` as level sets `Ω = {φ < 0}`.

mod levelset;
mod reinit;
mod starshape;
mod steiner;
mod volume;

pub use levelset::{disk_levelset, BoxDomain, LevelSetField, Point2, VolumeTarget};
pub use reinit::{eikonal_fraction, reinitialize};
pub use starshape::{is_starshaped, Starshape};
pub use steiner::{line_measure, section_measures, steiner_symmetrize, symmetry_defect, Axis};
pub use volume::{negative_fraction, volume};
