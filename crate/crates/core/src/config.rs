//! Run configuration: a flat `key = value` text format with dotted sections,
//! plus the shipped presets.
//!
//! ```text
//! # comment
//! run.id = fib
//! window.kind = intervals
//! window.intervals = [[-1, 0.6180339887498949]]
//! ac.deltas = 0.4, 0.3, 0.2, 0.1
//! ```
//!
//! Lists are comma separated; `window.intervals` takes a JSON array of pairs.
//! Later lines override earlier ones. Unknown keys are errors.

use serde::{Deserialize, Serialize};

use crate::complexity::{FolnerKind, FolnerSpec, FreqMode, OrbitSampler};
use crate::cps::{fibonacci_cps, CutProjectScheme, PHI};
use crate::error::{Error, Result};
use crate::window::{CantorSpec, GapRule, IntervalUnion, SparseGapWindow};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WindowConfig {
    Intervals { parts: Vec<[f64; 2]> },
    Cantor { gamma: f64, depth: u32 },
    RemarkA { depth: u32 },
    RemarkB { gamma: f64, depth: u32 },
}

impl WindowConfig {
    /// Cantor parameters behind the window, if any.
    pub fn cantor_spec(&self) -> Option<Result<CantorSpec>> {
        match *self {
            WindowConfig::Intervals { .. } => None,
            WindowConfig::Cantor { gamma, depth } => Some(CantorSpec::new(gamma, depth, GapRule::None)),
            WindowConfig::RemarkA { depth } => Some(CantorSpec::new(SparseGapWindow::GAMMA, depth, GapRule::SparseDyadic)),
            WindowConfig::RemarkB { gamma, depth } => Some(CantorSpec::new(gamma, depth, GapRule::OddLevels)),
        }
    }

    pub fn build(&self) -> Result<IntervalUnion> {
        match self {
            WindowConfig::Intervals { parts } => {
                let pairs: Vec<(f64, f64)> = parts.iter().map(|p| (p[0], p[1])).collect();
                IntervalUnion::from_pairs(&pairs)
            }
            _ => self.cantor_spec().expect("cantor-type window")?.window(),
        }
    }

    /// Same construction truncated at another depth.
    pub fn with_depth(&self, depth: u32) -> Self {
        match *self {
            WindowConfig::Cantor { gamma, .. } => WindowConfig::Cantor { gamma, depth },
            WindowConfig::RemarkA { .. } => WindowConfig::RemarkA { depth },
            WindowConfig::RemarkB { gamma, .. } => WindowConfig::RemarkB { gamma, depth },
            ref w @ WindowConfig::Intervals { .. } => w.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyConfig {
    pub g_values: Vec<f64>,
    pub h_offset: f64,
    pub h_span: f64,
    pub h_count: usize,
    /// Truncation radius of every member; derived from the Følner family and
    /// the smallest δ when absent.
    pub radius: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerateConfig {
    pub g_shift: f64,
    pub h_shift: f64,
    pub radius: f64,
    pub interior: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimConfig {
    pub eps_min: Option<f64>,
    pub eps_max: Option<f64>,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub run_id: String,
    pub seed: u64,
    /// Basis columns `v1`, `v2`.
    pub basis: [[f64; 2]; 2],
    pub window: WindowConfig,
    pub folner: FolnerSpec,
    pub folner_compare: Option<FolnerSpec>,
    pub sampler_spacing: f64,
    pub sampler_jitter: bool,
    pub deltas: Vec<f64>,
    pub nu_min: f64,
    pub nu_max: f64,
    pub nu_per_decade: usize,
    pub freq_mode: FreqMode,
    pub family: FamilyConfig,
    /// Pairs per δ written to the frequency table.
    pub check_pairs: usize,
    /// Deepest truncation the span estimate may refine to.
    pub span_max_depth: u32,
    pub dim: DimConfig,
    pub generate: GenerateConfig,
}

pub const PRESETS: &[&str] = &["fibonacci", "remark_a", "remark_b", "remark_b_g3", "remark_b_g4", "remark_b_g6"];

/// Generic offset for family shifts, away from the singular fibres at 0.
const H_OFFSET: f64 = 0.041_421_356_237_309_5;

impl RunConfig {
    fn base(run_id: &str, window: WindowConfig) -> Self {
        let fib = fibonacci_cps();
        let [(a, b), (c, d)] = fib.basis();
        RunConfig {
            run_id: run_id.to_string(),
            seed: 1,
            basis: [[a, b], [c, d]],
            window,
            folner: FolnerSpec::standard(FolnerKind::Symmetric),
            folner_compare: None,
            sampler_spacing: 0.1,
            sampler_jitter: true,
            deltas: vec![0.4, 0.3, 0.2, 0.1],
            nu_min: 1e-3,
            nu_max: 1e-1,
            nu_per_decade: 8,
            freq_mode: FreqMode::AnalyticScreen,
            family: FamilyConfig {
                g_values: vec![0.0],
                h_offset: H_OFFSET,
                h_span: 1.0,
                h_count: 500,
                radius: None,
            },
            check_pairs: 10,
            span_max_depth: 20,
            dim: DimConfig {
                eps_min: None,
                eps_max: None,
                steps: 16,
            },
            generate: GenerateConfig {
                g_shift: 0.0,
                h_shift: 0.0,
                radius: 1e4,
                interior: false,
            },
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        let remark_b = |gamma: f64| {
            let mut c = RunConfig::base(name, WindowConfig::RemarkB { gamma, depth: 12 });
            c.family.h_span = 0.0015;
            c.family.h_count = 2000;
            c
        };
        Ok(match name {
            "fibonacci" => {
                let mut c = RunConfig::base(
                    name,
                    WindowConfig::Intervals {
                        parts: vec![[-1.0, PHI - 1.0]],
                    },
                );
                // one level beyond the default, so the tail starts at T = 800
                let lengths: Vec<f64> = (0..8).map(|n| 50.0 * f64::from(1u32 << n)).collect();
                c.folner = FolnerSpec::new(FolnerKind::Symmetric, lengths.clone())?;
                c.folner_compare = Some(FolnerSpec::new(FolnerKind::OneSidedRight, lengths)?);
                c
            }
            "remark_a" => {
                let mut c = RunConfig::base(name, WindowConfig::RemarkA { depth: 14 });
                c.family.h_span = 0.01;
                c.family.h_count = 2000;
                c
            }
            "remark_b" | "remark_b_g4" => remark_b(4.0),
            "remark_b_g3" => remark_b(3.0),
            "remark_b_g6" => remark_b(6.0),
            other => {
                return Err(Error::Config(format!(
                    "unknown preset `{other}` (known: {})",
                    PRESETS.join(", ")
                )))
            }
        })
    }

    pub fn cps(&self) -> Result<CutProjectScheme> {
        let [v1, v2] = self.basis;
        CutProjectScheme::new((v1[0], v1[1]), (v2[0], v2[1]))
    }

    pub fn sampler(&self) -> Result<OrbitSampler> {
        OrbitSampler::new(self.sampler_spacing, self.seed, self.sampler_jitter)
    }

    /// Apply `key = value` lines on top of this configuration.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {}: {}", lineno + 1, key.trim(), strip(e))))?;
        }
        Ok(())
    }

    /// Parse a config file. A `preset = NAME` line, if present, must come
    /// first and selects the starting point; otherwise the `fibonacci` preset is used.
    pub fn parse(text: &str) -> Result<Self> {
        let first = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'));
        let (mut cfg, rest) = match first.and_then(|l| l.split_once('=')) {
            Some((k, v)) if k.trim() == "preset" => {
                let cfg = RunConfig::preset(v.trim())?;
                let skip = text.find(first.unwrap()).unwrap() + first.unwrap().len();
                (cfg, &text[skip..])
            }
            _ => (RunConfig::preset("fibonacci")?, text),
        };
        cfg.apply_text(rest)?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "run.id" => self.run_id = value.to_string(),
            "run.seed" => self.seed = parse(value)?,
            "cps.preset" => match value {
                "fibonacci" => {
                    let [(a, b), (c, d)] = fibonacci_cps().basis();
                    self.basis = [[a, b], [c, d]];
                }
                other => return Err(Error::invalid(format!("unknown lattice `{other}`"))),
            },
            "cps.v1" => self.basis[0] = pair(value)?,
            "cps.v2" => self.basis[1] = pair(value)?,
            "window.kind" => {
                let (gamma, depth) = match self.window {
                    WindowConfig::Cantor { gamma, depth } | WindowConfig::RemarkB { gamma, depth } => (gamma, depth),
                    WindowConfig::RemarkA { depth } => (4.0, depth),
                    WindowConfig::Intervals { .. } => (4.0, 12),
                };
                self.window = match value {
                    "intervals" => WindowConfig::Intervals {
                        parts: vec![[-1.0, PHI - 1.0]],
                    },
                    "cantor" => WindowConfig::Cantor { gamma, depth },
                    "remark_a" => WindowConfig::RemarkA { depth },
                    "remark_b" => WindowConfig::RemarkB { gamma, depth },
                    other => return Err(Error::invalid(format!("unknown window kind `{other}`"))),
                }
            }
            "window.intervals" => {
                let parts: Vec<[f64; 2]> = serde_json::from_str(value)?;
                self.window = WindowConfig::Intervals { parts };
            }
            "window.gamma" => match &mut self.window {
                WindowConfig::Cantor { gamma, .. } | WindowConfig::RemarkB { gamma, .. } => *gamma = parse(value)?,
                _ => return Err(Error::invalid("window.gamma needs a cantor or remark_b window")),
            },
            "window.depth" => match &mut self.window {
                WindowConfig::Cantor { depth, .. }
                | WindowConfig::RemarkB { depth, .. }
                | WindowConfig::RemarkA { depth } => *depth = parse(value)?,
                _ => return Err(Error::invalid("window.depth needs a Cantor-type window")),
            },
            "folner.kind" => self.folner.kind = FolnerKind::parse(value)?,
            "folner.lengths" => {
                let lengths = list(value)?;
                if let Some(other) = &mut self.folner_compare {
                    *other = FolnerSpec::new(other.kind, lengths.clone())?;
                }
                self.folner = FolnerSpec::new(self.folner.kind, lengths)?;
            }
            "folner.compare" => {
                self.folner_compare = match value {
                    "none" => None,
                    kind => Some(FolnerSpec::new(FolnerKind::parse(kind)?, self.folner.lengths.clone())?),
                }
            }
            "sampler.spacing" => self.sampler_spacing = parse(value)?,
            "sampler.jitter" => self.sampler_jitter = parse(value)?,
            "ac.deltas" => self.deltas = list(value)?,
            "ac.nu_min" => self.nu_min = parse(value)?,
            "ac.nu_max" => self.nu_max = parse(value)?,
            "ac.nu_per_decade" => self.nu_per_decade = parse(value)?,
            "ac.freq_mode" => self.freq_mode = FreqMode::parse(value)?,
            "ac.check_pairs" => self.check_pairs = parse(value)?,
            "ac.span_max_depth" => self.span_max_depth = parse(value)?,
            "family.g_values" => self.family.g_values = list(value)?,
            "family.h_offset" => self.family.h_offset = parse(value)?,
            "family.h_span" => self.family.h_span = parse(value)?,
            "family.h_count" => self.family.h_count = parse(value)?,
            "family.radius" => self.family.radius = Some(parse(value)?),
            "dim.eps_min" => self.dim.eps_min = Some(parse(value)?),
            "dim.eps_max" => self.dim.eps_max = Some(parse(value)?),
            "dim.steps" => self.dim.steps = parse(value)?,
            "generate.g_shift" => self.generate.g_shift = parse(value)?,
            "generate.h_shift" => self.generate.h_shift = parse(value)?,
            "generate.radius" => self.generate.radius = parse(value)?,
            "generate.interior" => self.generate.interior = parse(value)?,
            other => return Err(Error::invalid(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Flat `key = value` rendering that [`RunConfig::parse`] reads back.
    pub fn to_text(&self) -> String {
        use crate::io::fmt17;
        let join = |v: &[f64]| v.iter().map(|x| fmt17(*x)).collect::<Vec<_>>().join(", ");
        let mut out = vec![
            format!("run.id = {}", self.run_id),
            format!("run.seed = {}", self.seed),
            format!("cps.v1 = {}", join(&self.basis[0])),
            format!("cps.v2 = {}", join(&self.basis[1])),
        ];
        match &self.window {
            WindowConfig::Intervals { parts } => {
                out.push("window.kind = intervals".into());
                let body: Vec<String> = parts.iter().map(|p| format!("[{}, {}]", fmt17(p[0]), fmt17(p[1]))).collect();
                out.push(format!("window.intervals = [{}]", body.join(", ")));
            }
            WindowConfig::Cantor { gamma, depth } | WindowConfig::RemarkB { gamma, depth } => {
                let kind = if matches!(self.window, WindowConfig::Cantor { .. }) { "cantor" } else { "remark_b" };
                out.push(format!("window.kind = {kind}"));
                out.push(format!("window.gamma = {}", fmt17(*gamma)));
                out.push(format!("window.depth = {depth}"));
            }
            WindowConfig::RemarkA { depth } => {
                out.push("window.kind = remark_a".into());
                out.push(format!("window.depth = {depth}"));
            }
        }
        out.push(format!("folner.kind = {}", self.folner.kind.name()));
        out.push(format!("folner.lengths = {}", join(&self.folner.lengths)));
        out.push(format!(
            "folner.compare = {}",
            self.folner_compare.as_ref().map_or("none", |f| f.kind.name())
        ));
        out.push(format!("sampler.spacing = {}", fmt17(self.sampler_spacing)));
        out.push(format!("sampler.jitter = {}", self.sampler_jitter));
        out.push(format!("ac.deltas = {}", join(&self.deltas)));
        out.push(format!("ac.nu_min = {}", fmt17(self.nu_min)));
        out.push(format!("ac.nu_max = {}", fmt17(self.nu_max)));
        out.push(format!("ac.nu_per_decade = {}", self.nu_per_decade));
        out.push(format!("ac.freq_mode = {}", self.freq_mode.name()));
        out.push(format!("ac.check_pairs = {}", self.check_pairs));
        out.push(format!("ac.span_max_depth = {}", self.span_max_depth));
        out.push(format!("family.g_values = {}", join(&self.family.g_values)));
        out.push(format!("family.h_offset = {}", fmt17(self.family.h_offset)));
        out.push(format!("family.h_span = {}", fmt17(self.family.h_span)));
        out.push(format!("family.h_count = {}", self.family.h_count));
        if let Some(r) = self.family.radius {
            out.push(format!("family.radius = {}", fmt17(r)));
        }
        if let Some(e) = self.dim.eps_min {
            out.push(format!("dim.eps_min = {}", fmt17(e)));
        }
        if let Some(e) = self.dim.eps_max {
            out.push(format!("dim.eps_max = {}", fmt17(e)));
        }
        out.push(format!("dim.steps = {}", self.dim.steps));
        out.push(format!("generate.g_shift = {}", fmt17(self.generate.g_shift)));
        out.push(format!("generate.h_shift = {}", fmt17(self.generate.h_shift)));
        out.push(format!("generate.radius = {}", fmt17(self.generate.radius)));
        out.push(format!("generate.interior = {}", self.generate.interior));
        out.join("\n") + "\n"
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::InvalidInput(m) | Error::Config(m) => m,
        other => other.to_string(),
    }
}

fn parse<T: std::str::FromStr>(value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::invalid(format!("cannot parse `{value}`: {e}")))
}

fn list(value: &str) -> Result<Vec<f64>> {
    value.split(',').map(|x| parse(x.trim())).collect()
}

fn pair(value: &str) -> Result<[f64; 2]> {
    match list(value)?.as_slice() {
        [a, b] => Ok([*a, *b]),
        _ => Err(Error::invalid("expected two comma-separated numbers")),
    }
}
