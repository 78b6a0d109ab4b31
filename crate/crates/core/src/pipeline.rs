//! End-to-end runs behind the `generate`, `ac` and `dim` commands.
//!
//! [`Plan::new`] validates a [`RunConfig`] (lattice, window, guards, ν
//! schedule, resource cap) before anything expensive happens; the `run_*`
//! functions compute results and [`write_outputs`] puts them on disk.
//! Every output file is a pure function of the configuration.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::complexity::{
    ac_fit, family_grid, required_radius, uniform_shifts, AcRow, ComplexityFit, Family, FolnerSpec, GreedyOutcome,
    OrbitSampler, PairFrequency, SpanEstimate, SpanModel, SpanningCheck, MIN_DECADES, MIN_ROWS,
};
use crate::config::RunConfig;
use crate::cps::{candidate_count, model_set, model_set_box, resource_cap, CutProjectScheme, ModelSetParams};
use crate::delone::{DeloneSet, METRIC_CAP};
use crate::error::{Error, Result};
use crate::grid::GeometricGrid;
use crate::io::fmt17;
use crate::window::{
    box_dimension_fit, sausage_exponent, shift_exponent, CantorSpec, DimensionFit, IntervalUnion,
};

pub const LIBRARY_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Smallest δ the metric grid can resolve.
pub const DELTA_MIN: f64 = 1.0 / 4096.0;

/// A validated configuration with everything derived from it.
#[derive(Clone, Debug)]
pub struct Plan {
    pub config: RunConfig,
    pub cps: CutProjectScheme,
    pub window: IntervalUnion,
    pub cantor: Option<CantorSpec>,
    pub sampler: OrbitSampler,
    /// Truncation radius of every family member.
    pub radius: f64,
    pub nus: Vec<f64>,
    pub dim_grid: GeometricGrid,
}

impl Plan {
    pub fn new(config: RunConfig) -> Result<Self> {
        let cps = config.cps()?;
        let cantor = config.window.cantor_spec().transpose()?;
        let window = config.window.build()?;
        let sampler = config.sampler()?;

        if config.deltas.is_empty() {
            return Err(Error::Config("ac.deltas is empty".into()));
        }
        for &d in &config.deltas {
            if !(DELTA_MIN..=METRIC_CAP).contains(&d) {
                return Err(Error::Config(format!("delta {d} outside [2^-12, 1/√2]")));
            }
        }
        if !(config.nu_min > 0.0) || config.nu_max > 1.0 || config.nu_min >= config.nu_max {
            return Err(Error::Config("need 0 < ac.nu_min < ac.nu_max <= 1".into()));
        }
        let nu_grid = GeometricGrid::per_decade(config.nu_min, config.nu_max, config.nu_per_decade.max(1))?;
        let decades = nu_grid.decades();
        if nu_grid.len() < MIN_ROWS || !(MIN_DECADES - 1e-9..=3.0 + 1e-9).contains(&decades) {
            return Err(Error::Config(format!(
                "ν schedule must have >= {MIN_ROWS} values over 1.5 to 3 decades (got {} over {decades:.2})",
                nu_grid.len()
            )));
        }
        let fam = &config.family;
        if fam.g_values.is_empty() || fam.h_count < 2 || !(fam.h_span > 0.0) {
            return Err(Error::Config(
                "family needs g values, h_count >= 2 and positive h_span".into(),
            ));
        }

        let mut t_max = config.folner.t_max();
        if let Some(f) = &config.folner_compare {
            t_max = t_max.max(f.t_max());
        }
        let delta_min = config.deltas.iter().copied().fold(f64::INFINITY, f64::min);
        let longest = if t_max == config.folner.t_max() {
            &config.folner
        } else {
            config.folner_compare.as_ref().unwrap()
        };
        let need = required_radius(longest, &sampler, delta_min);
        let radius = match fam.radius {
            Some(r) if r < need => {
                return Err(Error::InsufficientData(format!(
                    "family.radius {r} below the {need} needed by the Følner family at δ = {delta_min}"
                )))
            }
            Some(r) => r,
            None => need.ceil(),
        };

        let dim_grid = dim_grid(&config, cantor.as_ref())?;
        if let Some(spec) = &cantor {
            spec.check_resolution(&dim_grid)?;
        }

        let cap = resource_cap() as u128;
        let probes = [
            (config.generate.g_shift, config.generate.h_shift, config.generate.radius),
            (fam.g_values[0], fam.h_offset, radius),
        ];
        for (g, h, r) in probes {
            if let Some(bx) = model_set_box(&ModelSetParams::new(g, h, window.clone(), r)?)? {
                let n = candidate_count(&cps, &bx);
                if n > cap {
                    return Err(Error::ResourceCap {
                        candidates: n,
                        cap: cap as u64,
                    });
                }
            }
        }

        Ok(Plan {
            nus: nu_grid.values().to_vec(),
            config,
            cps,
            window,
            cantor,
            sampler,
            radius,
            dim_grid,
        })
    }
}

fn dim_grid(config: &RunConfig, cantor: Option<&CantorSpec>) -> Result<GeometricGrid> {
    let (lo, hi) = match cantor {
        Some(spec) => (spec.resolution_floor(), spec.gamma.powi(-3)),
        None => (1e-4, 1e-1),
    };
    let lo = config.dim.eps_min.unwrap_or(lo);
    let hi = config.dim.eps_max.unwrap_or(hi);
    GeometricGrid::new(lo, hi, config.dim.steps)
}

// ---------------------------------------------------------------------------
// generate

#[derive(Clone, Debug, Serialize)]
pub struct GenerateReport {
    pub points: usize,
    pub radius: f64,
    /// Points per unit length.
    pub density: f64,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub set: DeloneSet,
}

pub fn run_generate(plan: &Plan) -> Result<GenerateReport> {
    let g = &plan.config.generate;
    let params = ModelSetParams::new(g.g_shift, g.h_shift, plan.window.clone(), g.radius)?;
    let set = if g.interior {
        crate::cps::model_set_interior(&plan.cps, &params)?
    } else {
        model_set(&plan.cps, &params)?
    };
    let mut warnings = Vec::new();
    if plan.window.is_empty() {
        warnings.push("window is empty; the model set has no points".to_string());
    }
    Ok(GenerateReport {
        points: set.len(),
        radius: g.radius,
        density: set.len() as f64 / (2.0 * g.radius),
        warnings,
        set,
    })
}

// ---------------------------------------------------------------------------
// dim

#[derive(Clone, Debug, Serialize)]
pub struct DimReport {
    pub boundary_points: usize,
    pub grid: Vec<f64>,
    pub box_fit: DimensionFit,
    /// Fit of the boundary's ε-neighbourhood measure; the Minkowski
    /// dimension is one minus its slope.
    pub minkowski_fit: DimensionFit,
    pub box_dimension: f64,
    pub minkowski_dimension: f64,
    pub shift_fit: Option<DimensionFit>,
}

pub fn run_dim(plan: &Plan) -> Result<DimReport> {
    let boundary = plan.window.boundary_points();
    if boundary.is_empty() {
        return Err(Error::invalid("the window has no boundary"));
    }
    let box_fit = box_dimension_fit(&boundary, &plan.dim_grid)?;
    let minkowski_fit = sausage_exponent(&boundary, &plan.dim_grid)?;
    let shift_fit = shift_exponent(&plan.window, &plan.dim_grid).ok();
    Ok(DimReport {
        boundary_points: boundary.len(),
        grid: plan.dim_grid.values().to_vec(),
        box_dimension: box_fit.slope,
        minkowski_dimension: 1.0 - minkowski_fit.slope,
        box_fit,
        minkowski_fit,
        shift_fit,
    })
}

// ---------------------------------------------------------------------------
// ac

/// Span bounds for Cantor-type windows are evaluated on the shallowest
/// truncation whose resolution floor `γ^-(depth-2)` lies below `ε(ν)`.
pub struct SpanLadder {
    cps: CutProjectScheme,
    config: crate::config::WindowConfig,
    base: Option<CantorSpec>,
    max_depth: u32,
    models: Vec<(u32, f64, SpanModel)>,
}

impl SpanLadder {
    pub fn new(plan: &Plan) -> Result<Self> {
        let model = SpanModel::new(&plan.cps, &plan.window)?;
        let floor = plan.cantor.map_or(0.0, |s| s.resolution_floor());
        let depth = plan.cantor.map_or(0, |s| s.depth);
        Ok(SpanLadder {
            cps: plan.cps.clone(),
            config: plan.config.window.clone(),
            base: plan.cantor,
            max_depth: plan.config.span_max_depth.min(crate::window::MAX_CANTOR_DEPTH),
            models: vec![(depth, floor, model)],
        })
    }

    /// Estimate and the truncation depth it used (`None` for literal windows).
    pub fn estimate(&mut self, delta: f64, nu: f64) -> Result<(SpanEstimate, Option<u32>)> {
        let mut i = 0;
        loop {
            if i == self.models.len() {
                let depth = self.models[i - 1].0 + 1;
                if self.base.is_none() || depth > self.max_depth {
                    return Err(Error::Resolution {
                        guard: "span_resolution",
                        detail: format!(
                            "ε(ν) for δ = {delta}, ν = {nu} stays below the truncation floor up to depth {}",
                            self.max_depth
                        ),
                    });
                }
                let cfg = self.config.with_depth(depth);
                let spec = cfg.cantor_spec().expect("cantor-type window")?;
                let model = SpanModel::new(&self.cps, &cfg.build()?)?;
                self.models.push((depth, spec.resolution_floor(), model));
            }
            let (depth, floor, model) = &self.models[i];
            let est = model.estimate(delta, nu)?;
            if est.eps.is_none_or(|e| e >= *floor) {
                return Ok((est, self.base.map(|_| *depth)));
            }
            i += 1;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RowDetail {
    pub delta: f64,
    pub nu: f64,
    pub sep: u64,
    pub span: u64,
    pub eps: Option<f64>,
    pub span_depth: Option<u32>,
    pub sampled_pairs: usize,
    pub screened_pairs: usize,
    pub spanning: SpanningCheck,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaScan {
    pub delta: f64,
    pub fit: ComplexityFit,
    pub rows: Vec<RowDetail>,
    /// ν values where `sep` grew although ν increased.
    pub non_monotone: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    pub frequency: PairFrequency,
    /// `estimate <= bound + 3·std_error` (true when no bound applies).
    pub within_bound: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Scan {
    pub folner: FolnerSpec,
    pub deltas: Vec<DeltaScan>,
    pub pairs: Vec<PairCheck>,
    pub ac_lower: f64,
    pub ac_upper: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FolnerComparison {
    pub spec_a: FolnerSpec,
    pub spec_b: FolnerSpec,
    pub max_frequency_deviation: f64,
    /// `(i, j, δ, |ν_A - ν_B|)`
    pub deviations: Vec<(usize, usize, f64, f64)>,
    pub slope_deviation: f64,
    pub frequency_ok: bool,
    pub slope_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AcReport {
    pub run_id: String,
    pub family_size: usize,
    pub radius: f64,
    pub boundary_dimension: f64,
    pub theorem_bound: f64,
    pub ac_lower: f64,
    pub ac_upper: f64,
    /// Smallest r² of the span regressions.
    pub r2: f64,
    pub pass: bool,
    pub spanning_verified: bool,
    pub frequency_bound_ok: bool,
    pub slopes_ordered: bool,
    pub scan: Scan,
    pub compare: Option<(Scan, FolnerComparison)>,
    pub warnings: Vec<String>,
}

/// Pairs `(0, j)` with `j` spread geometrically over the family, so that the
/// shift differences cover several scales.
pub fn check_pairs(family_size: usize, count: usize) -> Vec<(usize, usize)> {
    let top = (family_size - 1) as f64;
    let mut out: Vec<(usize, usize)> = (1..=count)
        .map(|k| (0, top.powf(k as f64 / count as f64).round().max(1.0) as usize))
        .collect();
    out.dedup();
    out
}

pub fn run_scan(plan: &Plan, family: &Family, spans: &[Vec<(SpanEstimate, Option<u32>)>], folner: &FolnerSpec) -> Result<Scan> {
    let cfg = &plan.config;
    let outcomes: Vec<Vec<(GreedyOutcome, SpanningCheck)>> = cfg
        .deltas
        .par_iter()
        .map(|&delta| family.scan(delta, &plan.nus, folner, &plan.sampler, cfg.freq_mode))
        .collect::<Result<_>>()?;

    let mut deltas = Vec::with_capacity(cfg.deltas.len());
    for (d, &delta) in cfg.deltas.iter().enumerate() {
        let mut rows = Vec::with_capacity(plan.nus.len());
        let mut fit_rows = Vec::with_capacity(plan.nus.len());
        for (n, &nu) in plan.nus.iter().enumerate() {
            let (out, spanning) = &outcomes[d][n];
            let (span, depth) = spans[d][n];
            let sep = out.kept.len() as u64;
            fit_rows.push(AcRow { nu, sep, span: span.count });
            rows.push(RowDetail {
                delta,
                nu,
                sep,
                span: span.count,
                eps: span.eps,
                span_depth: depth,
                sampled_pairs: out.sampled_pairs,
                screened_pairs: out.screened_pairs,
                spanning: spanning.clone(),
            });
        }
        let non_monotone = rows.windows(2).filter(|w| w[1].sep > w[0].sep).map(|w| w[1].nu).collect();
        deltas.push(DeltaScan {
            delta,
            fit: ac_fit(delta, &fit_rows)?,
            rows,
            non_monotone,
        });
    }

    let pair_tasks: Vec<(f64, usize, usize)> = cfg
        .deltas
        .iter()
        .flat_map(|&delta| check_pairs(family.len(), cfg.check_pairs).into_iter().map(move |(i, j)| (delta, i, j)))
        .collect();
    let pairs = pair_tasks
        .par_iter()
        .map(|&(delta, i, j)| {
            let frequency = family.frequency(i, j, delta, folner, &plan.sampler)?;
            let within_bound = frequency
                .bound
                .is_none_or(|b| frequency.estimate <= b + 3.0 * frequency.std_error);
            Ok(PairCheck {
                i,
                j,
                frequency,
                within_bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let ac_lower = deltas.iter().map(|d| d.fit.slope_lower).fold(f64::NEG_INFINITY, f64::max);
    let ac_upper = deltas.iter().map(|d| d.fit.slope_upper).fold(f64::NEG_INFINITY, f64::max);
    Ok(Scan {
        folner: folner.clone(),
        deltas,
        pairs,
        ac_lower,
        ac_upper,
    })
}

pub fn compare_scans(a: &Scan, b: &Scan) -> FolnerComparison {
    let deviations: Vec<(usize, usize, f64, f64)> = a
        .pairs
        .iter()
        .zip(&b.pairs)
        .map(|(p, q)| (p.i, p.j, p.frequency.delta, (p.frequency.estimate - q.frequency.estimate).abs()))
        .collect();
    let max_frequency_deviation = deviations.iter().map(|d| d.3).fold(0.0, f64::max);
    let slope_deviation = (a.ac_lower - b.ac_lower).abs().max((a.ac_upper - b.ac_upper).abs());
    FolnerComparison {
        spec_a: a.folner.clone(),
        spec_b: b.folner.clone(),
        max_frequency_deviation,
        deviations,
        slope_deviation,
        frequency_ok: max_frequency_deviation <= 0.05,
        slope_ok: slope_deviation <= 0.1,
    }
}

/// Span table indexed `[δ][ν]`, computed before any sampling so that a
/// resolution failure surfaces early.
pub fn span_table(plan: &Plan) -> Result<Vec<Vec<(SpanEstimate, Option<u32>)>>> {
    let mut ladder = SpanLadder::new(plan)?;
    plan.config
        .deltas
        .iter()
        .map(|&d| plan.nus.iter().map(|&nu| ladder.estimate(d, nu)).collect())
        .collect()
}

pub fn run_ac(plan: &Plan) -> Result<AcReport> {
    let cfg = &plan.config;
    if plan.window.is_empty() {
        return Err(Error::invalid("ac needs a non-empty window"));
    }
    let spans = span_table(plan)?;
    let boundary = plan.window.boundary_points();
    let dim = box_dimension_fit(&boundary, &plan.dim_grid)?;
    let theorem_bound = if dim.slope < 1.0 { 1.0 / (1.0 - dim.slope) } else { f64::INFINITY };

    let h_values = uniform_shifts(cfg.family.h_offset, cfg.family.h_span, cfg.family.h_count);
    let params = family_grid(&plan.window, &cfg.family.g_values, &h_values, plan.radius)?;
    let family = Family::generate(&plan.cps, params)?;

    let scan = run_scan(plan, &family, &spans, &cfg.folner)?;
    let compare = match &cfg.folner_compare {
        Some(spec) => {
            let other = run_scan(plan, &family, &spans, spec)?;
            let cmp = compare_scans(&scan, &other);
            Some((other, cmp))
        }
        None => None,
    };

    let scans = std::iter::once(&scan).chain(compare.as_ref().map(|c| &c.0));
    let mut spanning_verified = true;
    let mut frequency_bound_ok = true;
    let mut slopes_ordered = true;
    let mut warnings = Vec::new();
    for s in scans {
        for d in &s.deltas {
            spanning_verified &= d.rows.iter().all(|r| r.spanning.passed());
            slopes_ordered &= d.fit.slope_lower <= d.fit.slope_upper + 0.1;
            if !d.non_monotone.is_empty() {
                warnings.push(format!(
                    "{}: δ = {}: sep not monotone in ν at {:?}",
                    s.folner.kind.name(),
                    d.delta,
                    d.non_monotone
                ));
            }
        }
        frequency_bound_ok &= s.pairs.iter().all(|p| p.within_bound);
    }
    let r2 = scan.deltas.iter().map(|d| d.fit.r_squared).fold(f64::INFINITY, f64::min);
    Ok(AcReport {
        run_id: cfg.run_id.clone(),
        family_size: family.len(),
        radius: plan.radius,
        boundary_dimension: dim.slope,
        theorem_bound,
        ac_lower: scan.ac_lower,
        ac_upper: scan.ac_upper,
        r2,
        pass: scan.ac_upper <= theorem_bound * 1.15,
        spanning_verified,
        frequency_bound_ok,
        slopes_ordered,
        scan,
        compare,
        warnings,
    })
}

// ---------------------------------------------------------------------------
// output

/// Files produced by one command, in writing order.
pub type Outputs = Vec<(String, String)>;

pub fn results_csv(run_id: &str, scan: &Scan) -> String {
    let mut out = String::from("run_id,delta,nu,sep,span,slope_lower,slope_upper,r2\n");
    for d in &scan.deltas {
        for r in &d.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                run_id,
                fmt17(d.delta),
                fmt17(r.nu),
                r.sep,
                r.span,
                fmt17(d.fit.slope_lower),
                fmt17(d.fit.slope_upper),
                fmt17(d.fit.r_squared)
            ));
        }
    }
    out
}

pub fn frequency_csv(scan: &Scan) -> String {
    let mut out = String::from("pair_id,delta,T_n,value,bound\n");
    for p in &scan.pairs {
        let bound = p.frequency.bound.map(fmt17).unwrap_or_default();
        for &(t, v) in &p.frequency.per_n {
            out.push_str(&format!(
                "{}-{},{},{},{},{}\n",
                p.i,
                p.j,
                fmt17(p.frequency.delta),
                fmt17(t),
                fmt17(v),
                bound
            ));
        }
    }
    out
}

pub fn dimension_csv(report: &DimReport) -> String {
    let mut out = String::from("method,slope,intercept,r2,dimension,degenerate\n");
    let mut row = |name: &str, f: &DimensionFit, dim: f64| {
        out.push_str(&format!(
            "{name},{},{},{},{},{}\n",
            fmt17(f.slope),
            fmt17(f.intercept),
            fmt17(f.r_squared),
            fmt17(dim),
            f.degenerate
        ));
    };
    row("box", &report.box_fit, report.box_dimension);
    row("minkowski", &report.minkowski_fit, report.minkowski_dimension);
    if let Some(f) = &report.shift_fit {
        row("shift", f, 1.0 - f.slope);
    }
    out
}

pub fn dimension_points_csv(report: &DimReport) -> String {
    let mut out = String::from("method,ln_eps,ln_value\n");
    let fits = [("box", Some(&report.box_fit)), ("minkowski", Some(&report.minkowski_fit)), ("shift", report.shift_fit.as_ref())];
    for (name, fit) in fits {
        for &(x, y) in fit.map(|f| f.points.as_slice()).unwrap_or(&[]) {
            out.push_str(&format!("{name},{},{}\n", fmt17(x), fmt17(y)));
        }
    }
    out
}

#[derive(Serialize)]
struct Manifest<'a> {
    library: &'static str,
    version: &'static str,
    command: &'a str,
    seed: u64,
    config: &'a RunConfig,
    /// Same configuration in the text grammar; `--config` accepts it.
    config_text: String,
    derived: Derived,
    outputs: Vec<&'a str>,
    warnings: &'a [String],
}

#[derive(Serialize)]
struct Derived {
    family_radius: f64,
    nus: Vec<f64>,
    dim_grid: Vec<f64>,
}

pub fn manifest(plan: &Plan, command: &str, files: &[&str], warnings: &[String]) -> Result<String> {
    let m = Manifest {
        library: env!("CARGO_PKG_NAME"),
        version: LIBRARY_VERSION,
        command,
        seed: plan.config.seed,
        config: &plan.config,
        config_text: plan.config.to_text(),
        derived: Derived {
            family_radius: plan.radius,
            nus: plan.nus.clone(),
            dim_grid: plan.dim_grid.values().to_vec(),
        },
        outputs: files.to_vec(),
        warnings,
    };
    Ok(serde_json::to_string_pretty(&m)? + "\n")
}

pub fn generate_outputs(plan: &Plan, report: &GenerateReport) -> Result<Outputs> {
    let files = ["model_set.csv", "manifest.json"];
    Ok(vec![
        (files[0].into(), crate::io::points_to_csv(report.set.points())),
        (files[1].into(), manifest(plan, "generate", &files, &report.warnings)?),
    ])
}

pub fn dim_outputs(plan: &Plan, report: &DimReport) -> Result<Outputs> {
    let files = ["dimension.csv", "dimension_points.csv", "manifest.json"];
    Ok(vec![
        (files[0].into(), dimension_csv(report)),
        (files[1].into(), dimension_points_csv(report)),
        (files[2].into(), manifest(plan, "dim", &files, &[])?),
    ])
}

#[derive(Serialize)]
struct Summary<'a> {
    run_id: &'a str,
    ac_lower: f64,
    ac_upper: f64,
    r2: f64,
    boundary_dimension: f64,
    theorem_bound: f64,
    pass: bool,
    spanning_verified: bool,
    frequency_bound_ok: bool,
    slopes_ordered: bool,
    family_size: usize,
    per_delta: Vec<DeltaSummary<'a>>,
    folner_compare: Option<&'a FolnerComparison>,
    warnings: &'a [String],
}

#[derive(Serialize)]
struct DeltaSummary<'a> {
    delta: f64,
    slope_lower: f64,
    slope_upper: f64,
    r2_lower: f64,
    r2_upper: f64,
    rows: &'a [RowDetail],
}

fn summary_of(report: &AcReport) -> Summary<'_> {
    Summary {
        run_id: &report.run_id,
        ac_lower: report.ac_lower,
        ac_upper: report.ac_upper,
        r2: report.r2,
        boundary_dimension: report.boundary_dimension,
        theorem_bound: report.theorem_bound,
        pass: report.pass,
        spanning_verified: report.spanning_verified,
        frequency_bound_ok: report.frequency_bound_ok,
        slopes_ordered: report.slopes_ordered,
        family_size: report.family_size,
        per_delta: report
            .scan
            .deltas
            .iter()
            .map(|d| DeltaSummary {
                delta: d.delta,
                slope_lower: d.fit.slope_lower,
                slope_upper: d.fit.slope_upper,
                r2_lower: d.fit.r_squared_lower,
                r2_upper: d.fit.r_squared,
                rows: &d.rows,
            })
            .collect(),
        folner_compare: report.compare.as_ref().map(|c| &c.1),
        warnings: &report.warnings,
    }
}

pub fn ac_outputs(plan: &Plan, report: &AcReport) -> Result<Outputs> {
    let mut files = vec!["results.csv", "frequency.csv", "summary.json"];
    if report.compare.is_some() {
        files.extend(["results_compare.csv", "frequency_compare.csv", "folner_compare.json"]);
    }
    files.push("manifest.json");
    let mut out: Outputs = vec![
        ("results.csv".into(), results_csv(&report.run_id, &report.scan)),
        ("frequency.csv".into(), frequency_csv(&report.scan)),
        ("summary.json".into(), serde_json::to_string_pretty(&summary_of(report))? + "\n"),
    ];
    if let Some((scan, cmp)) = &report.compare {
        out.push(("results_compare.csv".into(), results_csv(&report.run_id, scan)));
        out.push(("frequency_compare.csv".into(), frequency_csv(scan)));
        out.push(("folner_compare.json".into(), serde_json::to_string_pretty(cmp)? + "\n"));
    }
    out.push(("manifest.json".into(), manifest(plan, "ac", &files, &report.warnings)?));
    Ok(out)
}

/// Write every file under `dir` (created if missing); returns the paths.
pub fn write_outputs(dir: &Path, outputs: &Outputs) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    outputs
        .iter()
        .map(|(name, body)| {
            let path = dir.join(name);
            fs::write(&path, body)?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::FolnerKind;
    use crate::config::WindowConfig;

    #[test]
    fn plan_validates_guards() {
        let mut c = RunConfig::preset("fibonacci").unwrap();
        c.family.radius = Some(100.0);
        assert_eq!(Plan::new(c).unwrap_err().exit_code(), 3);

        let mut c = RunConfig::preset("remark_b").unwrap();
        c.dim.eps_min = Some(1e-9);
        let e = Plan::new(c).unwrap_err();
        assert_eq!(e.guard(), Some("window_resolution"));

        let mut c = RunConfig::preset("fibonacci").unwrap();
        c.basis = [[1.0, 2.0], [2.0, 4.0]];
        assert_eq!(Plan::new(c).unwrap_err().code(), "CPS_SINGULAR");

        let mut c = RunConfig::preset("fibonacci").unwrap();
        c.nu_min = 0.05;
        assert_eq!(Plan::new(c).unwrap_err().exit_code(), 2);

        let mut c = RunConfig::preset("fibonacci").unwrap();
        c.generate.radius = 1e12;
        assert_eq!(Plan::new(c).unwrap_err().exit_code(), 4);
    }

    #[test]
    fn check_pairs_spread() {
        let p = check_pairs(500, 10);
        assert_eq!(p.first(), Some(&(0, 2)));
        assert_eq!(p.last(), Some(&(0, 499)));
        assert!(p.windows(2).all(|w| w[0].1 < w[1].1));
    }

    #[test]
    fn ladder_respects_the_floor() {
        let c = RunConfig::preset("remark_b").unwrap();
        let plan = Plan::new(c).unwrap();
        let mut ladder = SpanLadder::new(&plan).unwrap();
        for nu in [1e-3, 1e-2, 1e-1] {
            let (est, depth) = ladder.estimate(0.4, nu).unwrap();
            let depth = depth.unwrap();
            let floor = 4f64.powi(-(depth as i32 - 2));
            assert!(est.eps.is_none_or(|e| e >= floor));
        }
    }

    #[test]
    fn small_ac_run() {
        let mut c = RunConfig::preset("fibonacci").unwrap();
        c.folner = FolnerSpec::new(FolnerKind::Symmetric, vec![50.0, 100.0, 200.0]).unwrap();
        c.folner_compare = None;
        c.deltas = vec![0.4];
        c.family.h_count = 30;
        c.nu_per_decade = 2;
        c.nu_min = 1e-2;
        c.nu_max = 1.0;
        c.window = WindowConfig::Intervals { parts: vec![[-1.0, crate::cps::PHI - 1.0]] };
        let plan = Plan::new(c).unwrap();
        let r = run_ac(&plan).unwrap();
        assert!(r.spanning_verified);
        assert_eq!(r.theorem_bound, 1.0);
        let csv = results_csv(&r.run_id, &r.scan);
        assert_eq!(csv.lines().count(), 1 + plan.nus.len());
    }
}
