//! Horn, normalized Horn and lattice basis systems built from `(B, kappa)`.

mod horn;
mod ideal;
mod series;

pub use horn::{Flags, HornData};
pub use ideal::DIdeal;
pub use series::{check_series, horn_series, verify_solution_correspondence, CorrespondenceVerdict, SeriesSolution};
