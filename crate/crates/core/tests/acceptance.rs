//! Acceptance criteria, one PASS/FAIL line each. Runs with `cargo test`
//! (no harness) or `cargo test --test acceptance`. Set `APEC_ACCEPTANCE_OUT`
//! to keep the ac outputs of the preset runs.

mod common;

use std::time::Instant;

use apec::complexity::{delta_frequency, required_radius, FolnerKind, FolnerSpec, OrbitSampler};
use apec::config::RunConfig;
use apec::cps::{candidate_count, enumerate_lattice, fibonacci_cps, pair_frequency_bound, CutProjectScheme, LatticeBox};
use apec::grid::GeometricGrid;
use apec::pipeline::{ac_outputs, run_ac, run_generate, write_outputs, AcReport, Plan};
use apec::window::{box_dimension_fit, cantor_approximation, remark_b_window, shift_exponent};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Tally {
    failed: usize,
    total: usize,
}

impl Tally {
    fn report(&mut self, id: &str, ok: bool, detail: String) {
        self.total += 1;
        if !ok {
            self.failed += 1;
        }
        println!("{} {id}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn cores() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn ac_preset(name: &str) -> (Plan, AcReport, f64) {
    let plan = Plan::new(RunConfig::preset(name).unwrap()).unwrap();
    let started = Instant::now();
    let report = run_ac(&plan).unwrap();
    let secs = started.elapsed().as_secs_f64();
    if let Ok(dir) = std::env::var("APEC_ACCEPTANCE_OUT") {
        let out = ac_outputs(&plan, &report).unwrap();
        write_outputs(&std::path::Path::new(&dir).join(name), &out).unwrap();
    }
    (plan, report, secs)
}

fn cantor_dimension(t: &mut Tally) {
    for gamma in [3.0f64, 4.0, 6.0] {
        let started = Instant::now();
        let boundary = cantor_approximation(gamma, 12).unwrap().boundary_points();
        let grid = GeometricGrid::new(gamma.powi(-10), gamma.powi(-3), 16).unwrap();
        let fit = box_dimension_fit(&boundary, &grid).unwrap();
        let secs = started.elapsed().as_secs_f64();
        let expect = 2f64.ln() / gamma.ln();
        t.report(
            &format!("1 cantor dimension γ={gamma}"),
            (fit.slope - expect).abs() <= 0.05 && fit.r_squared >= 0.98 && secs < 10.0,
            format!("slope {:.4} (log2/logγ {expect:.4}), r² {:.4}, {secs:.2}s", fit.slope, fit.r_squared),
        );
    }
}

fn shift_exponent_b(t: &mut Tally) {
    let w = remark_b_window(4.0, 12).unwrap();
    let grid = GeometricGrid::new(4f64.powi(-10), 4f64.powi(-3), 16).unwrap();
    let fit = shift_exponent(&w, &grid).unwrap();
    t.report(
        "2 shift exponent remark_b(4,12)",
        (fit.slope - 0.5).abs() <= 0.05,
        format!("{:.4} over [4^-10, 4^-3], r² {:.4}", fit.slope, fit.r_squared),
    );
}

fn density(t: &mut Tally) {
    let mut cfg = RunConfig::preset("fibonacci").unwrap();
    cfg.generate.radius = 1e4;
    let plan = Plan::new(cfg).unwrap();
    let started = Instant::now();
    let closed = run_generate(&plan).unwrap();
    let mut cfg = plan.config.clone();
    cfg.generate.interior = true;
    let open = run_generate(&Plan::new(cfg).unwrap()).unwrap();
    let secs = started.elapsed().as_secs_f64();
    // m(int W) = m(W) for an interval, so the sandwich collapses to one value
    let w = common::fib_window();
    let (lo, hi) = (w.measure() / 5f64.sqrt(), w.measure() / 5f64.sqrt());
    let inside = |d: f64| d >= lo * 0.99 && d <= hi * 1.01;
    t.report(
        "3 density sandwich T=1e4",
        inside(closed.density) && inside(open.density) && secs < 5.0,
        format!(
            "closed {:.6}, interior {:.6}, target [{lo:.6}, {hi:.6}] ±1%, {secs:.2}s",
            closed.density, open.density
        ),
    );
}

fn frequency_bound(t: &mut Tally) {
    let cps = fibonacci_cps();
    let w = common::fib_window();
    let folner = FolnerSpec::standard(FolnerKind::Symmetric);
    let delta = 0.3;
    let radius = required_radius(&folner, &OrbitSampler::standard(0), delta) + 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut within = 0;
    let mut worst = f64::NEG_INFINITY;
    for trial in 0..50u64 {
        let h = rng.gen_range(0.0..1.0);
        let h2 = h + 10f64.powf(rng.gen_range(-3.5..-0.5));
        let a = common::fib_set(h, radius);
        let b = common::fib_set(h2, radius);
        let f = delta_frequency(&a, &b, delta, &folner, &OrbitSampler::standard(trial)).unwrap();
        let bound = pair_frequency_bound(&cps, &w, delta, h, h2).unwrap();
        let excess = f.estimate - bound - 3.0 * f.std_error;
        worst = worst.max(excess);
        if excess <= 0.0 {
            within += 1;
        }
    }
    t.report(
        "4 frequency bound oracle",
        within == 50,
        format!("{within}/50 within bound + 3 SE, largest excess {worst:.4}"),
    );
}

fn lattice_oracle(t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut agree = 0;
    let mut tried = 0;
    while tried < 100 {
        let s = std::f64::consts::SQRT_2;
        let cps = CutProjectScheme::new(
            (rng.gen_range(0.5..2.0), 1.0),
            (s + rng.gen_range(-0.9..0.9), -1.0 / s),
        )
        .unwrap();
        let g0 = rng.gen_range(-500.0..500.0);
        let h0 = rng.gen_range(-5.0..5.0);
        let bx = LatticeBox::new(g0, g0 + rng.gen_range(0.1..300.0), h0, h0 + rng.gen_range(0.01..5.0)).unwrap();
        if candidate_count(&cps, &bx) > 100_000 {
            continue;
        }
        tried += 1;
        let mut got: Vec<(i64, i64)> = enumerate_lattice(&cps, &bx).unwrap().iter().map(|p| (p.m, p.n)).collect();
        got.sort_unstable();
        if got == common::oracle(&cps, &bx) {
            agree += 1;
        }
    }
    t.report("9a lattice oracle", agree == 100, format!("{agree}/100 random boxes identical"));
}

fn metric_suite(t: &mut Tally) {
    let r = common::metric_suite(1000, 2024);
    for v in r.violations.iter().take(5) {
        println!("     {v}");
    }
    t.report(
        "8 metric property suite",
        r.violations.is_empty(),
        format!("{} trials, {} checks, {} violations", r.trials, r.checks, r.violations.len()),
    );
}

fn spanning(t: &mut Tally, name: &str, r: &AcReport) {
    t.report(
        &format!("9b spanning check ({name})"),
        r.spanning_verified,
        format!("greedy families spanning on every (δ, ν) row: {}", r.spanning_verified),
    );
}

fn determinism(t: &mut Tally) {
    let cfg = RunConfig::parse(
        "preset = fibonacci
         run.id = determinism
         folner.lengths = 50, 100, 200, 400
         ac.deltas = 0.4, 0.2
         ac.nu_min = 0.01
         ac.nu_max = 0.5
         ac.nu_per_decade = 4
         family.h_count = 80",
    )
    .unwrap();
    let plan = Plan::new(cfg).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let report = run_ac(&plan).unwrap();
            ac_outputs(&plan, &report).unwrap()
        })
    };
    let a = run(1);
    let b = run(4);
    let same = a == b;
    let csvs = a.iter().filter(|(name, _)| name.ends_with(".csv")).count();
    t.report(
        "10 determinism across thread counts",
        same,
        format!("1 vs 4 worker threads, {csvs} CSVs and {} files byte-identical: {same}", a.len()),
    );
}

fn main() {
    let mut t = Tally { failed: 0, total: 0 };
    println!("apec acceptance, cores available: {}", cores());
    cantor_dimension(&mut t);
    shift_exponent_b(&mut t);
    density(&mut t);
    frequency_bound(&mut t);
    metric_suite(&mut t);
    lattice_oracle(&mut t);
    determinism(&mut t);

    let (_, fib, fib_secs) = ac_preset("fibonacci");
    t.report(
        "5 theorem bound, interval window",
        fib.ac_upper <= 1.15 && fib.r2 >= 0.9,
        format!("ac_upper {:.4}, r² {:.4}, ac_lower {:.4}, {fib_secs:.0}s", fib.ac_upper, fib.r2, fib.ac_lower),
    );
    match &fib.compare {
        Some((_, cmp)) => t.report(
            "7 Følner independence",
            cmp.max_frequency_deviation <= 0.05 && cmp.slope_deviation <= 0.1,
            format!(
                "{} vs {}: max frequency deviation {:.4}, slope deviation {:.4}",
                cmp.spec_a.kind.name(),
                cmp.spec_b.kind.name(),
                cmp.max_frequency_deviation,
                cmp.slope_deviation
            ),
        ),
        None => t.report("7 Følner independence", false, "preset has no comparison spec".into()),
    };
    spanning(&mut t, "fibonacci", &fib);

    let (plan, rb, rb_secs) = ac_preset("remark_b");
    t.report(
        "6 theorem bound, Cantor window",
        rb.ac_upper <= 2.3 && rb.ac_lower >= 1.2,
        format!(
            "ac_upper {:.4}, lower slope {:.4}, r² {:.4}, ν ∈ [{:.0e}, {:.0e}]",
            rb.ac_upper,
            rb.ac_lower,
            rb.r2,
            plan.nus.iter().cloned().fold(f64::INFINITY, f64::min),
            plan.nus.iter().cloned().fold(0.0, f64::max)
        ),
    );
    t.report(
        "6 runtime",
        rb_secs < 600.0,
        format!("{rb_secs:.0}s, cores available: {} (target: under 10 min on 4 cores)", cores()),
    );
    spanning(&mut t, "remark_b", &rb);

    println!("{}/{} passed", t.total - t.failed, t.total);
    if t.failed > 0 {
        std::process::exit(1);
    }
}
