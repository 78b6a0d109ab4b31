//! Følner averages along the translation orbit, separation frequencies,
//! separated and spanning families, and the amorphic complexity fit.

mod fit;
mod folner;
mod frequency;
mod separated;

pub use fit::{ac_fit, AcRow, ComplexityFit, MIN_DECADES, MIN_ROWS};
pub use folner::{asymptotic_density, DensityReport, FolnerKind, FolnerSpec, OrbitSampler};
pub use frequency::{
    besicovitch_pseudometric, besicovitch_report, delta_frequency, delta_frequency_keyed, frequency_at_least,
    required_radius, symmetric_difference, PairFrequency,
};
pub use separated::{
    family_grid, fundamental_extents, greedy_separated, pair_stream, sausage_radius, span_estimate, uniform_shifts,
    Family, FreqMode, GreedyOutcome, Rejection, SpanEstimate, SpanModel, SpanningCheck,
};
