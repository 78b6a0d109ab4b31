//! Separation frequencies along the orbit, their analytic bound, the
//! Besicovitch pseudometric and dependence on the Følner sequence.
//!
//! cargo run --release --example separation_frequency

use apec::complexity::{
    asymptotic_density, besicovitch_pseudometric, delta_frequency, required_radius, FolnerKind, FolnerSpec,
    OrbitSampler,
};
use apec::cps::{fibonacci_cps, model_set, pair_frequency_bound, ModelSetParams, PHI};
use apec::window::IntervalUnion;

fn main() -> apec::Result<()> {
    let cps = fibonacci_cps();
    let w = IntervalUnion::interval(-1.0, PHI - 1.0)?;
    let folner = FolnerSpec::standard(FolnerKind::Symmetric);
    let sampler = OrbitSampler::standard(7);
    let delta = 0.3;
    // the coarse metric grid of the Besicovitch average looks 32 units ahead
    let radius = required_radius(&folner, &sampler, delta).max(folner.t_max() + 32.0 + 2.0);
    let set = |h: f64| model_set(&cps, &ModelSetParams::new(0.0, h, w.clone(), radius).unwrap());

    let a = set(0.0414)?;
    for dh in [0.001, 0.01, 0.05] {
        let b = set(0.0414 + dh)?;
        let f = delta_frequency(&a, &b, delta, &folner, &sampler)?;
        let bound = pair_frequency_bound(&cps, &w, delta, 0.0414, 0.0414 + dh)?;
        let d = besicovitch_pseudometric(&a, &b, &folner, &sampler, None)?;
        println!(
            "Δh = {dh}: ν = {:.4} ± {:.4} (bound {:.4}), D_F = {:.4} >= δ·ν = {:.4}",
            f.estimate,
            f.std_error,
            bound,
            d,
            delta * f.estimate
        );
    }

    // the half line has density 0 or 1 depending on the side the averages grow to
    let half_line = |t: f64| t >= 0.0;
    for kind in [FolnerKind::OneSidedLeft, FolnerKind::OneSidedRight, FolnerKind::Symmetric] {
        let r = asymptotic_density(half_line, &FolnerSpec::standard(kind), &sampler);
        println!("density of [0, ∞) under {}: {:.3}", kind.name(), r.estimate);
    }
    Ok(())
}
