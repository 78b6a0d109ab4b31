//! Planar cut-and-project schemes: a lattice in `ℝ × ℝ`, its two
//! projections, and the model sets cut out by a window.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::delone::{DeloneSet, Provenance};
use crate::error::{Error, Result};
use crate::window::{IntervalUnion, MERGE_TOL};

/// Golden mean.
pub const PHI: f64 = 1.618_033_988_749_895;

/// Default limit on the integer box scanned by [`enumerate_lattice`].
pub const DEFAULT_RESOURCE_CAP: u64 = 100_000_000;

/// Environment variable overriding [`DEFAULT_RESOURCE_CAP`].
pub const RESOURCE_CAP_ENV: &str = "APEC_RESOURCE_CAP";

/// Enumeration cap from the environment, or the default.
pub fn resource_cap() -> u64 {
    std::env::var(RESOURCE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_RESOURCE_CAP)
}

/// Lattice `L = ℤv1 + ℤv2` with `v1 = (a, b)`, `v2 = (c, d)`; first coordinate
/// is the external (physical) line, second the internal line.
#[derive(Clone, Debug, PartialEq)]
pub struct CutProjectScheme {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    det: f64,
}

/// On-disk form: `{"basis": [[a, c], [b, d]]}` (columns are the basis vectors).
#[derive(Serialize, Deserialize)]
struct CpsJson {
    basis: [[f64; 2]; 2],
}

impl CutProjectScheme {
    pub fn new(v1: (f64, f64), v2: (f64, f64)) -> Result<Self> {
        let vals = [v1.0, v1.1, v2.0, v2.1];
        if vals.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("non-finite basis entry"));
        }
        let det = v1.0 * v2.1 - v2.0 * v1.1;
        let scale = (v1.0.hypot(v1.1) * v2.0.hypot(v2.1)).max(f64::MIN_POSITIVE);
        if det.abs() <= 1e-12 * scale {
            return Err(Error::SingularBasis { det });
        }
        Ok(CutProjectScheme {
            a: v1.0,
            b: v1.1,
            c: v2.0,
            d: v2.1,
            det,
        })
    }

    pub fn covolume(&self) -> f64 {
        self.det.abs()
    }

    pub fn basis(&self) -> [(f64, f64); 2] {
        [(self.a, self.b), (self.c, self.d)]
    }

    /// `(g, h) = m·v1 + n·v2`.
    pub fn point(&self, m: i64, n: i64) -> LatticePoint {
        let (mf, nf) = (m as f64, n as f64);
        LatticePoint {
            m,
            n,
            g: self.a * mf + self.c * nf,
            h: self.b * mf + self.d * nf,
        }
    }

    /// Real coordinates of `(g, h)` in the basis.
    pub fn coordinates(&self, g: f64, h: f64) -> (f64, f64) {
        let u = (self.d * g - self.c * h) / self.det;
        let v = (-self.b * g + self.a * h) / self.det;
        (u, v)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CpsJson {
            basis: [[self.a, self.c], [self.b, self.d]],
        })
        .expect("plain numbers serialise")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CpsJson = serde_json::from_str(text)?;
        let [[a, c], [b, d]] = raw.basis;
        Self::new((a, b), (c, d))
    }
}

/// Basis `(1, 1)`, `(φ, -1/φ)`: the Fibonacci chain scheme, covolume `√5`.
pub fn fibonacci_cps() -> CutProjectScheme {
    CutProjectScheme::new((1.0, 1.0), (PHI, -1.0 / PHI)).expect("non-singular")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub m: i64,
    pub n: i64,
    pub g: f64,
    pub h: f64,
}

/// Axis-aligned box in `G × H`, closed on all sides.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeBox {
    pub g_lo: f64,
    pub g_hi: f64,
    pub h_lo: f64,
    pub h_hi: f64,
}

impl LatticeBox {
    pub fn new(g_lo: f64, g_hi: f64, h_lo: f64, h_hi: f64) -> Result<Self> {
        let ok = [g_lo, g_hi, h_lo, h_hi].iter().all(|x| x.is_finite()) && g_lo < g_hi && h_lo < h_hi;
        if !ok {
            return Err(Error::invalid(format!(
                "box needs g_lo < g_hi and h_lo < h_hi, got [{g_lo},{g_hi}]×[{h_lo},{h_hi}]"
            )));
        }
        Ok(LatticeBox {
            g_lo,
            g_hi,
            h_lo,
            h_hi,
        })
    }

    fn contains(&self, p: &LatticePoint) -> bool {
        self.g_lo <= p.g && p.g <= self.g_hi && self.h_lo <= p.h && p.h <= self.h_hi
    }
}

/// Integer bounding box `[m_lo, m_hi] × [n_lo, n_hi]` of the preimage of `bx`.
fn integer_box(cps: &CutProjectScheme, bx: &LatticeBox) -> (i64, i64, i64, i64) {
    let corners = [
        cps.coordinates(bx.g_lo, bx.h_lo),
        cps.coordinates(bx.g_lo, bx.h_hi),
        cps.coordinates(bx.g_hi, bx.h_lo),
        cps.coordinates(bx.g_hi, bx.h_hi),
    ];
    let fold = |f: fn(&(f64, f64)) -> f64| {
        let lo = corners.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = corners.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        (lo.floor() as i64 - 1, hi.ceil() as i64 + 1)
    };
    let (m_lo, m_hi) = fold(|p| p.0);
    let (n_lo, n_hi) = fold(|p| p.1);
    (m_lo, m_hi, n_lo, n_hi)
}

/// Number of integer pairs the scan of `bx` would visit.
pub fn candidate_count(cps: &CutProjectScheme, bx: &LatticeBox) -> u128 {
    let (m_lo, m_hi, n_lo, n_hi) = integer_box(cps, bx);
    (m_hi - m_lo + 1) as u128 * (n_hi - n_lo + 1) as u128
}

/// All lattice points in `bx`, sorted by `g` (ties by `(m, n)`), using the
/// cap from [`resource_cap`].
pub fn enumerate_lattice(cps: &CutProjectScheme, bx: &LatticeBox) -> Result<Vec<LatticePoint>> {
    enumerate_lattice_capped(cps, bx, resource_cap())
}

pub fn enumerate_lattice_capped(
    cps: &CutProjectScheme,
    bx: &LatticeBox,
    cap: u64,
) -> Result<Vec<LatticePoint>> {
    let candidates = candidate_count(cps, bx);
    if candidates > cap as u128 {
        return Err(Error::ResourceCap { candidates, cap });
    }
    let (m_lo, m_hi, n_lo, n_hi) = integer_box(cps, bx);
    // Row n: both coordinate constraints are linear in m, so only a short
    // m-range can survive; the filter below stays exact.
    let row_range = |n: i64| -> Option<(i64, i64)> {
        let nf = n as f64;
        let mut lo = m_lo as f64;
        let mut hi = m_hi as f64;
        for (coef, off, a, b) in [
            (cps.a, cps.c * nf, bx.g_lo, bx.g_hi),
            (cps.b, cps.d * nf, bx.h_lo, bx.h_hi),
        ] {
            if coef != 0.0 {
                let (x, y) = ((a - off) / coef, (b - off) / coef);
                lo = lo.max(x.min(y) - 1.0);
                hi = hi.min(x.max(y) + 1.0);
            }
        }
        (lo <= hi).then(|| (lo.floor() as i64, hi.ceil() as i64))
    };
    let mut pts: Vec<LatticePoint> = (n_lo..=n_hi)
        .into_par_iter()
        .flat_map_iter(|n| {
            let range = row_range(n);
            range
                .into_iter()
                .flat_map(move |(lo, hi)| (lo..=hi).map(move |m| (m, n)))
                .map(|(m, n)| cps.point(m, n))
                .filter(|p| bx.contains(p))
        })
        .collect();
    pts.sort_by(|p, q| p.g.total_cmp(&q.g).then(p.m.cmp(&q.m)).then(p.n.cmp(&q.n)));
    Ok(pts)
}

/// Reference scan: every pair in the integer box, filtered.
pub fn enumerate_lattice_brute(cps: &CutProjectScheme, bx: &LatticeBox) -> Vec<LatticePoint> {
    let (m_lo, m_hi, n_lo, n_hi) = integer_box(cps, bx);
    let mut pts = Vec::new();
    for m in m_lo..=m_hi {
        for n in n_lo..=n_hi {
            let p = cps.point(m, n);
            if bx.contains(&p) {
                pts.push(p);
            }
        }
    }
    pts.sort_by(|p, q| p.g.total_cmp(&q.g).then(p.m.cmp(&q.m)).then(p.n.cmp(&q.n)));
    pts
}

/// Evidence for the two axioms of a cut-and-project scheme.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrrationalityReport {
    pub injective: bool,
    pub dense: bool,
    pub points_checked: usize,
    /// Largest hole found among the internal coordinates.
    pub largest_hole: f64,
    pub violations: Vec<String>,
}

impl IrrationalityReport {
    pub fn passed(&self) -> bool {
        self.injective && self.dense
    }
}

/// Finite stand-in for irrationality.
///
/// Lattice points with `|g| <= bound` and `|h| <= 2·covolume` are enumerated.
/// Injectivity fails if two of them share `g` within [`MERGE_TOL`] (this
/// includes a non-zero point on the internal axis). Density fails if the
/// internal coordinates leave a hole wider than `density_eps` in
/// `[0, covolume)`.
pub fn irrationality_diagnostic(
    cps: &CutProjectScheme,
    bound: f64,
    density_eps: f64,
) -> Result<IrrationalityReport> {
    if !(bound > 0.0) || !(density_eps > 0.0) {
        return Err(Error::invalid("diagnostic needs positive bound and density_eps"));
    }
    let span = 2.0 * cps.covolume();
    let pts = enumerate_lattice(cps, &LatticeBox::new(-bound, bound, -span, span)?)?;
    let mut violations = Vec::new();
    for w in pts.windows(2) {
        if (w[1].g - w[0].g).abs() <= MERGE_TOL {
            violations.push(format!(
                "points ({},{}) and ({},{}) share g = {}",
                w[0].m, w[0].n, w[1].m, w[1].n, w[0].g
            ));
            if violations.len() >= 8 {
                break;
            }
        }
    }
    let injective = violations.is_empty();

    let len = cps.covolume();
    let mut hs: Vec<f64> = pts.iter().map(|p| p.h).filter(|h| (0.0..len).contains(h)).collect();
    hs.sort_by(f64::total_cmp);
    let mut edges = vec![0.0];
    edges.extend(&hs);
    edges.push(len);
    let largest_hole = edges.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let dense = largest_hole <= density_eps;
    if !dense {
        violations.push(format!(
            "internal coordinates leave a hole of {largest_hole} > {density_eps} in [0, {len})"
        ));
    }
    Ok(IrrationalityReport {
        injective,
        dense,
        points_checked: pts.len(),
        largest_hole,
        violations,
    })
}

/// Model set parameters: `Γ = ⋏(W + h_shift) - g_shift`, kept on `[-T, T]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSetParams {
    pub g_shift: f64,
    pub h_shift: f64,
    pub window: IntervalUnion,
    pub radius: f64,
}

impl ModelSetParams {
    pub fn new(g_shift: f64, h_shift: f64, window: IntervalUnion, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::invalid(format!("radius must be positive, got {radius}")));
        }
        if !g_shift.is_finite() || !h_shift.is_finite() {
            return Err(Error::invalid("non-finite shift"));
        }
        Ok(ModelSetParams {
            g_shift,
            h_shift,
            window,
            radius,
        })
    }
}

/// `⋏(W + h) - g` on `[-T, T]`, with the closed window.
pub fn model_set(cps: &CutProjectScheme, params: &ModelSetParams) -> Result<DeloneSet> {
    cut(cps, params, false)
}

/// `⋏(int(W) + h) - g` on `[-T, T]`.
pub fn model_set_interior(cps: &CutProjectScheme, params: &ModelSetParams) -> Result<DeloneSet> {
    cut(cps, params, true)
}

/// Search box enumerated by [`model_set`]; `None` for an empty window.
pub fn model_set_box(params: &ModelSetParams) -> Result<Option<LatticeBox>> {
    let Some(hull) = params.window.hull() else {
        return Ok(None);
    };
    let (t, pad) = (params.radius, 2.0 * MERGE_TOL);
    LatticeBox::new(
        params.g_shift - t,
        params.g_shift + t,
        hull.lo + params.h_shift - pad,
        hull.hi + params.h_shift + pad,
    )
    .map(Some)
}

fn cut(cps: &CutProjectScheme, params: &ModelSetParams, interior: bool) -> Result<DeloneSet> {
    let meta = Provenance {
        g_shift: params.g_shift,
        h_shift: params.h_shift,
        interior,
        window_measure: params.window.measure(),
        covolume: cps.covolume(),
    };
    let t = params.radius;
    let Some(bx) = model_set_box(params)? else {
        return Ok(DeloneSet::new(Vec::new(), t)?.with_meta(meta));
    };
    let w = params.window.translate(params.h_shift);
    let pts: Vec<f64> = enumerate_lattice(cps, &bx)?
        .into_iter()
        .filter(|p| if interior { w.contains_interior(p.h) } else { w.contains(p.h) })
        .map(|p| p.g - params.g_shift)
        .filter(|g| g.abs() <= t)
        .collect();
    Ok(DeloneSet::from_unsorted(pts, t)?.with_meta(meta))
}

/// Point of `T = (G × H)/L` in the half-open fundamental parallelogram.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    pub g: f64,
    pub h: f64,
    /// Basis coordinates in `[0, 1)²`.
    pub frac: (f64, f64),
}

pub fn torus_reduce(cps: &CutProjectScheme, g: f64, h: f64) -> TorusPoint {
    let (u, v) = cps.coordinates(g, h);
    let unit = |x: f64| {
        let mut f = x - x.floor();
        // snap values that are a rounding error away from an integer
        if f >= 1.0 - 1e-12 || f <= 1e-12 {
            f = 0.0;
        }
        f
    };
    let (fu, fv) = (unit(u), unit(v));
    TorusPoint {
        g: cps.a * fu + cps.c * fv,
        h: cps.b * fu + cps.d * fv,
        frac: (fu, fv),
    }
}

/// Upper bound on the separation frequency at `δ` of `Γ_{g,h}` and `Γ_{g,h'}`.
///
/// The pair is δ-separated at time `t` only if the torus orbit point lies in
/// `B_G(0, 2/δ) × (W Δ (W + h' - h))`; that set has `μ_T`-measure
/// `(4/δ)·m(W Δ (W + Δh)) / covolume`. The factor `max(1, 1/covolume)`
/// keeps the bound valid for lattices with covolume below one.
pub fn pair_frequency_bound(
    cps: &CutProjectScheme,
    window: &IntervalUnion,
    delta: f64,
    h: f64,
    h_prime: f64,
) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::invalid(format!("delta must be positive, got {delta}")));
    }
    let s = window.symmetric_difference_measure(h_prime - h);
    let scale = (1.0 / cps.covolume()).max(1.0);
    Ok((4.0 / delta * s * scale).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delone::{covering_radius, min_gap};

    fn fib_window() -> IntervalUnion {
        IntervalUnion::interval(-1.0, PHI - 1.0).unwrap()
    }

    #[test]
    fn fibonacci_basics() {
        let cps = fibonacci_cps();
        assert!((cps.covolume() - 5f64.sqrt()).abs() < 1e-12);
        let p = cps.point(1, 0);
        assert_eq!((p.g, p.h), (1.0, 1.0));
        assert!(irrationality_diagnostic(&cps, 1e3, 0.05).unwrap().passed());
        assert!(irrationality_diagnostic(&cps, 1e4, 0.05).unwrap().passed());
    }

    #[test]
    fn rational_lattices_fail_the_diagnostic() {
        let z2 = CutProjectScheme::new((1.0, 0.0), (0.0, 1.0)).unwrap();
        let r = irrationality_diagnostic(&z2, 100.0, 0.05).unwrap();
        assert!(!r.injective);
        let disc = CutProjectScheme::new((1.0, 1.0), (2.0, 3.0)).unwrap();
        let r = irrationality_diagnostic(&disc, 100.0, 0.05).unwrap();
        assert!(!r.dense);
    }

    #[test]
    fn singular_basis() {
        let e = CutProjectScheme::new((1.0, 2.0), (2.0, 4.0)).unwrap_err();
        assert_eq!(e.code(), "CPS_SINGULAR");
    }

    #[test]
    fn json_roundtrip() {
        let cps = fibonacci_cps();
        let back = CutProjectScheme::from_json(&cps.to_json()).unwrap();
        assert_eq!(cps, back);
        let z = CutProjectScheme::from_json(r#"{"basis": [[1, 0], [0, 1]]}"#).unwrap();
        assert_eq!(z.basis(), [(1.0, 0.0), (0.0, 1.0)]);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let cps = fibonacci_cps();
        let bx = LatticeBox::new(0.0, 10.0, -1.0, PHI - 1.0).unwrap();
        assert_eq!(enumerate_lattice(&cps, &bx).unwrap(), enumerate_lattice_brute(&cps, &bx));
        let skew = CutProjectScheme::new((1.0, 0.0001), (0.0001, 1.0)).unwrap();
        let bx = LatticeBox::new(-3.3, 4.1, -2.2, 5.7).unwrap();
        let pts = enumerate_lattice(&skew, &bx).unwrap();
        assert_eq!(pts, enumerate_lattice_brute(&skew, &bx));
        assert_eq!(pts.len(), 8 * 8);
    }

    #[test]
    fn empty_box_in_a_gap() {
        let cps = CutProjectScheme::new((1.0, 0.0), (0.0, 1.0)).unwrap();
        let bx = LatticeBox::new(-5.0, 5.0, 0.25, 0.25 + MERGE_TOL).unwrap();
        assert!(enumerate_lattice(&cps, &bx).unwrap().is_empty());
    }

    #[test]
    fn resource_cap_is_enforced() {
        let cps = fibonacci_cps();
        let bx = LatticeBox::new(-1e6, 1e6, -1.0, 1.0).unwrap();
        let e = enumerate_lattice_capped(&cps, &bx, 1000).unwrap_err();
        assert_eq!(e.exit_code(), 4);
    }

    #[test]
    fn generic_fibonacci_chain_has_two_tiles() {
        let cps = fibonacci_cps();
        let p = ModelSetParams::new(0.0, 0.123_456_7, fib_window(), 50.0).unwrap();
        let s = model_set(&cps, &p).unwrap();
        assert!((min_gap(&s).unwrap() - 1.0).abs() < 1e-9);
        assert!((covering_radius(&s).unwrap() - PHI / 2.0).abs() < 1e-9);
    }

    #[test]
    fn singular_fibre_at_origin() {
        // At h = 0 both window ends are star images, so the closed window picks
        // up one extra point and a short gap of length 1/φ appears.
        let cps = fibonacci_cps();
        let p = ModelSetParams::new(0.0, 0.0, fib_window(), 50.0).unwrap();
        let closed = model_set(&cps, &p).unwrap();
        let open = model_set_interior(&cps, &p).unwrap();
        assert!((min_gap(&closed).unwrap() - (PHI - 1.0)).abs() < 1e-9);
        assert_eq!(closed.len(), open.len() + 2);
        assert!((min_gap(&open).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn empty_window_gives_empty_set() {
        let p = ModelSetParams::new(0.0, 0.0, IntervalUnion::empty(), 10.0).unwrap();
        assert!(model_set(&fibonacci_cps(), &p).unwrap().is_empty());
    }

    #[test]
    fn torus_examples() {
        let cps = fibonacci_cps();
        let z = torus_reduce(&cps, 0.0, 0.0);
        assert_eq!((z.g, z.h), (0.0, 0.0));
        let p = cps.point(5, -3);
        let r = torus_reduce(&cps, p.g, p.h);
        assert!(r.g.abs() < 1e-9 && r.h.abs() < 1e-9);
        let r = torus_reduce(&cps, 1.0 + PHI, 1.0 - 1.0 / PHI);
        assert!(r.g.abs() < 1e-9 && r.h.abs() < 1e-9);
    }

    #[test]
    fn frequency_bound_examples() {
        let cps = fibonacci_cps();
        let w = IntervalUnion::interval(0.0, 1.0).unwrap();
        let b = pair_frequency_bound(&cps, &w, 1.0, 0.0, 0.05).unwrap();
        assert!((b - 0.4).abs() < 1e-12);
        assert_eq!(pair_frequency_bound(&cps, &w, 1.0, 0.3, 0.3).unwrap(), 0.0);
        assert!(pair_frequency_bound(&cps, &w, 0.0, 0.0, 0.1).is_err());
    }
}
