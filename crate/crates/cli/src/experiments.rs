//! Node-count studies and the random-curve benchmark.
//!
//! Every driver runs sequentially and emits rows in input order, so equal
//! arguments give byte-identical CSV.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float};
use serde_json::json;

use rig_core::num::{mag, to_c64};
use rig_core::quadrature::{heuristic_integrate, working_precision};
use rig_core::strategies::{execute, plan_main, plan_reference};
use rig_core::{
    poly_roots, AlgebraicIntegrand, BivariateDefiningPolynomial, BoundMode, PlanOptions, SegmentPlan,
    Tolerance, UnivariatePolynomial,
};

use crate::commands::csv_writer;
use crate::error::{CliError, Result};
use crate::problem::PARSE_GUARD_BITS;
use crate::report::{decimal, value_digits};

/// Planning precision for a tolerance.
pub fn planning_precision(tolerance: &Tolerance) -> u32 {
    tolerance.bits() + PARSE_GUARD_BITS
}

fn path(prec: u32) -> (Complex, Complex) {
    (Complex::with_val(prec, -1), Complex::with_val(prec, 1))
}

/// `(z - z0)^(-v)` on `[-1, 1]`, anchored at `-1` on the principal branch.
///
/// `v = 1/2` and `v = 1` are encoded exactly as `(z - z0) g^2 - 1` and
/// `(z - z0) g - 1` with certified bounds. Any other `v > 0` reuses the
/// square-root curve for its critical point and switches to the model
/// bound `|c - z0|^(-v)`.
pub fn pole_family(v: f64, z0: &Complex, prec: u32) -> Result<(AlgebraicIntegrand, BoundMode)> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(CliError::Parse(format!("exponent v = {v} must be positive")));
    }
    let shift = UnivariatePolynomial::new(vec![Complex::with_val(prec, -z0), Complex::with_val(prec, 1)]);
    let minus_one = UnivariatePolynomial::new(vec![Complex::with_val(prec, -1)]);
    let anchor = Complex::with_val(prec, -1);
    let base = Complex::with_val(prec, &anchor - z0);
    let (rows, branch, mode) = if v == 1.0 {
        (vec![shift, minus_one], base.recip(), BoundMode::Lemma)
    } else {
        let mode = if v == 0.5 { BoundMode::Lemma } else { BoundMode::Proxy { scale: 1.0, exponent: v } };
        (vec![shift, UnivariatePolynomial::zero(), minus_one], base.sqrt().recip(), mode)
    };
    let f = BivariateDefiningPolynomial::new(rows)?;
    Ok((AlgebraicIntegrand::new(f, anchor, branch, prec)?, mode))
}

fn plans(integrand: &AlgebraicIntegrand, tolerance: &Tolerance, options: &PlanOptions) -> Result<(SegmentPlan, SegmentPlan)> {
    let (a, b) = path(integrand.precision());
    Ok((
        plan_main(integrand, &a, &b, tolerance, options)?,
        plan_reference(integrand, &a, &b, tolerance, options)?,
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeatmapRow {
    pub x: f64,
    pub y: f64,
    pub n1: usize,
    pub n2: usize,
}

/// `i / (n + 2)` for `i = 1..=n`.
pub fn heatmap_axis(n: usize) -> Vec<f64> {
    (1..=n).map(|i| i as f64 / (n + 2) as f64).collect()
}

/// Node counts of both planners for `z0 = x + iy`.
pub fn heatmap_point(v: f64, x: f64, y: f64, tolerance: &Tolerance) -> Result<HeatmapRow> {
    let prec = planning_precision(tolerance);
    let (g, mode) = pole_family(v, &Complex::with_val(prec, (x, y)), prec)?;
    let options = PlanOptions { bound_mode: mode, ..Default::default() };
    let (main, reference) = plans(&g, tolerance, &options)?;
    Ok(HeatmapRow { x, y, n1: main.total_nodes, n2: reference.total_nodes })
}

/// Rows ordered by `y`, then `x`.
pub fn heatmap(v: f64, tolerance: &Tolerance, grid: usize) -> Result<Vec<HeatmapRow>> {
    if grid == 0 || grid > 200 {
        return Err(CliError::Parse(format!("grid size {grid} must lie in 1..=200")));
    }
    let axis = heatmap_axis(grid);
    let mut rows = Vec::with_capacity(grid * grid);
    for &y in &axis {
        for &x in &axis {
            rows.push(heatmap_point(v, x, y, tolerance)?);
        }
    }
    Ok(rows)
}

pub fn write_heatmap<W: Write>(rows: &[HeatmapRow], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["x", "y", "N1", "N2"])?;
    for r in rows {
        w.write_record([r.x.to_string(), r.y.to_string(), r.n1.to_string(), r.n2.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `f = p(z) g^2 - 1` with `p(z) = 4z^4 - (16 + 4q^2 + q^4) z^2 - q^2 (4 + q^2)^2`,
/// whose roots are `+-iq` and `+-(2 + q^2/2)`.
pub fn iq_integrand(q: f64, prec: u32) -> Result<AlgebraicIntegrand> {
    if !(q > 0.0 && q < 1.0) {
        return Err(CliError::Parse(format!("q = {q} must lie in (0, 1)")));
    }
    let q = Float::with_val(prec, q);
    let q2 = Float::with_val(prec, q.square_ref());
    let q4 = Float::with_val(prec, q2.square_ref());
    let c2 = -Float::with_val(prec, 16 + Float::with_val(prec, &q2 * 4u32) + &q4);
    let c0 = -Float::with_val(prec, &q2 * Float::with_val(prec, 4 + &q2).square());
    let c = |x: Float| Complex::with_val(prec, x);
    let p = UnivariatePolynomial::new(vec![c(c0), c(Float::new(prec)), c(c2), c(Float::new(prec)), c(Float::with_val(prec, 4))]);
    let f = BivariateDefiningPolynomial::new(vec![
        p.clone(),
        UnivariatePolynomial::zero(),
        UnivariatePolynomial::new(vec![Complex::with_val(prec, -1)]),
    ])?;
    let anchor = Complex::with_val(prec, -1);
    let branch = p.eval(&anchor).sqrt().recip();
    Ok(AlgebraicIntegrand::new(f, anchor, branch, prec)?)
}

/// Model bound used for the `I_q` family: `q^(-1/2) (|c - a| - delta)^(-1/2)`.
pub fn iq_proxy(q: f64) -> BoundMode {
    BoundMode::Proxy { scale: q.powf(-0.5), exponent: 0.5 }
}

#[derive(Clone, Debug)]
pub struct IqRow {
    pub q: f64,
    pub n1_lemma: usize,
    pub n1_proxy: usize,
    pub n2_lemma: usize,
    pub n2_proxy: usize,
    /// Strategy 1 value for the plan selected by `execute_with`.
    pub value: Option<Complex>,
}

/// Which main plan, if any, [`iq`] executes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum IqValue {
    Lemma,
    Proxy,
    None,
}

pub fn iq(qs: &[f64], tolerance: &Tolerance, execute_with: IqValue) -> Result<Vec<IqRow>> {
    let prec = planning_precision(tolerance);
    qs.iter()
        .map(|&q| {
            let g = iq_integrand(q, prec)?;
            let lemma = PlanOptions::default();
            let proxy = PlanOptions { bound_mode: iq_proxy(q), ..Default::default() };
            let (m_lemma, r_lemma) = plans(&g, tolerance, &lemma)?;
            let (m_proxy, r_proxy) = plans(&g, tolerance, &proxy)?;
            let value = match execute_with {
                IqValue::Lemma => Some(execute(&m_lemma, &g)?.value),
                IqValue::Proxy => Some(execute(&m_proxy, &g)?.value),
                IqValue::None => None,
            };
            Ok(IqRow {
                q,
                n1_lemma: m_lemma.total_nodes,
                n1_proxy: m_proxy.total_nodes,
                n2_lemma: r_lemma.total_nodes,
                n2_proxy: r_proxy.total_nodes,
                value,
            })
        })
        .collect()
}

pub fn write_iq<W: Write>(rows: &[IqRow], tolerance: &Tolerance, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["q", "N1_lemma", "N1_proxy", "N2_lemma", "N2_proxy", "value_re", "value_im"])?;
    for r in rows {
        let (re, im) = match &r.value {
            Some(v) => {
                let digits = value_digits(tolerance, v.prec().0);
                (decimal(v.real(), digits), decimal(v.imag(), digits))
            }
            None => (String::new(), String::new()),
        };
        w.write_record([
            r.q.to_string(),
            r.n1_lemma.to_string(),
            r.n1_proxy.to_string(),
            r.n2_lemma.to_string(),
            r.n2_proxy.to_string(),
            re,
            im,
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoleRow {
    pub q: f64,
    pub n1: usize,
    pub n2: usize,
    /// `N1` after dropping segments whose integral is provably below their
    /// allotted tolerance; only reported for `0 < v < 1`.
    pub n1_dropped: Option<usize>,
}

/// Both planners for `z0 = iq`.
pub fn pole(v: f64, qs: &[f64], tolerance: &Tolerance) -> Result<Vec<PoleRow>> {
    let prec = planning_precision(tolerance);
    qs.iter()
        .map(|&q| {
            let z0 = Complex::with_val(prec, (0, q));
            let (g, mode) = pole_family(v, &z0, prec)?;
            let options = PlanOptions { bound_mode: mode, ..Default::default() };
            let (main, reference) = plans(&g, tolerance, &options)?;
            let n1_dropped = (v < 1.0).then(|| dropped_cost(&main, &z0, v));
            Ok(PoleRow { q, n1: main.total_nodes, n2: reference.total_nodes, n1_dropped })
        })
        .collect()
}

/// Nodes left once every segment with `len * dist(segment, z0)^(-v)` at
/// most its tolerance is replaced by zero. Not part of any rigorous plan.
pub fn dropped_cost(plan: &SegmentPlan, z0: &Complex, v: f64) -> usize {
    let p = to_c64(z0);
    plan.segments
        .iter()
        .filter(|s| {
            let (a, b) = (to_c64(&s.start), to_c64(&s.end));
            let len = (b - a).norm();
            let t = ((p - a).re * (b - a).re + (p - a).im * (b - a).im) / (len * len);
            let nearest = a + (b - a) * t.clamp(0.0, 1.0);
            let tail = len * (p - nearest).norm().powf(-v);
            tail > s.tolerance.to_f64()
        })
        .map(|s| s.order)
        .sum()
}

pub fn write_pole<W: Write>(rows: &[PoleRow], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["q", "N1", "N2", "N1_dropped"])?;
    for r in rows {
        w.write_record([
            r.q.to_string(),
            r.n1.to_string(),
            r.n2.to_string(),
            r.n1_dropped.map(|n| n.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Segments the benchmark integrates along.
pub const BENCH_SEGMENTS: [((f64, f64), (f64, f64)); 4] = [
    ((-1.0, 0.0), (1.0, 0.0)),
    ((0.0, -1.0), (0.0, 1.0)),
    ((-1.0, -1.0), (1.0, 1.0)),
    ((-1.0, 1.0), (1.0, -1.0)),
];

/// Instances whose segment passes closer than this to a critical point are redrawn.
pub const BENCH_MIN_CLEARANCE: f64 = 0.1;

const BENCH_MAX_DEGREE: usize = 4;
const BENCH_COEFF: i32 = 10;
const BENCH_MAX_DRAWS: usize = 100_000;

#[derive(Clone, Debug)]
pub struct BenchInstance {
    pub integrand: AlgebraicIntegrand,
    pub start: Complex,
    pub end: Complex,
    /// `c[i][j]` multiplies `z^i g^j`.
    pub coefficients: Vec<Vec<i32>>,
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub instance_id: usize,
    pub n_main: usize,
    pub n_ref: usize,
    pub n_heuristic: usize,
    pub t_main: f64,
    pub t_ref: f64,
    pub t_heuristic: f64,
    pub value_main: Complex,
    pub value_ref: Complex,
    pub value_heuristic: Complex,
    pub values_agree: bool,
}

impl BenchRow {
    /// `|main - ref|`, `|main - heuristic|`, `|ref - heuristic|`.
    pub fn differences(&self) -> [f64; 3] {
        let d = |a: &Complex, b: &Complex| mag(&Complex::with_val(a.prec().0.max(b.prec().0), a - b));
        [
            d(&self.value_main, &self.value_ref),
            d(&self.value_main, &self.value_heuristic),
            d(&self.value_ref, &self.value_heuristic),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct BenchOutput {
    pub rows: Vec<BenchRow>,
    /// One line per rejected draw.
    pub rejections: Vec<String>,
    pub meta: serde_json::Value,
}

/// Cost model for one quadrature of order `n`: `n + 0.01 n^1.7`.
pub fn model_time(n: usize) -> f64 {
    let n = n as f64;
    n + 0.01 * n.powf(1.7)
}

fn draw_instance(rng: &mut ChaCha8Rng, prec: u32) -> std::result::Result<BenchInstance, String> {
    let mut c = vec![vec![0i32; BENCH_MAX_DEGREE + 1]; BENCH_MAX_DEGREE + 1];
    for (i, row) in c.iter_mut().enumerate() {
        for cell in row.iter_mut().take(BENCH_MAX_DEGREE + 1 - i) {
            *cell = rng.gen_range(-BENCH_COEFF..=BENCH_COEFF);
        }
    }
    let segment = BENCH_SEGMENTS[rng.gen_range(0..BENCH_SEGMENTS.len())];
    let root_pick: u32 = rng.gen();

    let degree_g = (0..=BENCH_MAX_DEGREE)
        .rev()
        .find(|&j| (0..=BENCH_MAX_DEGREE).any(|i| c[i][j] != 0))
        .unwrap_or(0);
    if degree_g == 0 {
        return Err("no g dependence".into());
    }
    // row k holds the coefficient of g^(n-k)
    let rows: Vec<UnivariatePolynomial> = (0..=degree_g)
        .map(|k| {
            let j = degree_g - k;
            UnivariatePolynomial::new((0..=BENCH_MAX_DEGREE).map(|i| Complex::with_val(prec, c[i][j])).collect())
        })
        .collect();
    let f = BivariateDefiningPolynomial::new(rows).map_err(|e| e.to_string())?;
    let start = Complex::with_val(prec, segment.0);
    let end = Complex::with_val(prec, segment.1);
    let at_start = f.coefficients_at(&start);
    if at_start.degree() != Some(degree_g) {
        return Err("leading coefficient vanishes at the start".into());
    }
    let roots = poly_roots(&at_start, prec).map_err(|e| e.to_string())?;
    let branch = roots[root_pick as usize % roots.len()].clone();
    let integrand = AlgebraicIntegrand::new(f, start.clone(), branch, prec).map_err(|e| e.to_string())?;
    let clearance = integrand.segment_clearance(&start, &end);
    if clearance < BENCH_MIN_CLEARANCE {
        return Err(format!("segment passes within {clearance:.3e} of a critical point"));
    }
    Ok(BenchInstance { integrand, start, end, coefficients: c })
}

/// Draws `count` admissible random curves and integrates each with all three methods.
///
/// Times are from [`model_time`] unless `wall_clock` is set, in which case
/// they are milliseconds and the output is no longer reproducible.
pub fn bench(count: usize, seed: u64, tolerance: &Tolerance, wall_clock: bool) -> Result<BenchOutput> {
    let prec = planning_precision(tolerance);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(count);
    let mut rejections = Vec::new();
    let e = tolerance.value().to_f64();
    let mut draws = 0;
    while rows.len() < count {
        draws += 1;
        if draws > BENCH_MAX_DRAWS {
            return Err(CliError::Parse(format!("no admissible instance after {BENCH_MAX_DRAWS} draws")));
        }
        let inst = match draw_instance(&mut rng, prec) {
            Ok(inst) => inst,
            Err(reason) => {
                rejections.push(format!("draw {draws}: {reason}"));
                continue;
            }
        };
        let g = &inst.integrand;
        let options = PlanOptions::default();

        let clock = Instant::now();
        let main = plan_main(g, &inst.start, &inst.end, tolerance, &options)?;
        let value_main = execute(&main, g)?.value;
        let wall_main = clock.elapsed().as_secs_f64() * 1e3;

        let clock = Instant::now();
        let reference = plan_reference(g, &inst.start, &inst.end, tolerance, &options)?;
        let value_ref = execute(&reference, g)?.value;
        let wall_ref = clock.elapsed().as_secs_f64() * 1e3;

        let clock = Instant::now();
        let hp = g.with_precision(working_precision(tolerance, 1 << 17))?;
        let heuristic = heuristic_integrate(&hp, &inst.start, &inst.end, tolerance)?;
        let wall_heuristic = clock.elapsed().as_secs_f64() * 1e3;

        let (t_main, t_ref, t_heuristic) = if wall_clock {
            (wall_main, wall_ref, wall_heuristic)
        } else {
            let doublings = (heuristic.order / 8).trailing_zeros();
            (
                main.segments.iter().map(|s| model_time(s.order)).sum(),
                model_time(reference.total_nodes),
                (0..=doublings).map(|k| model_time(8 << k)).sum(),
            )
        };
        let mut row = BenchRow {
            instance_id: rows.len(),
            n_main: main.total_nodes,
            n_ref: reference.total_nodes,
            n_heuristic: heuristic.nodes_used,
            t_main,
            t_ref,
            t_heuristic,
            value_main,
            value_ref,
            value_heuristic: heuristic.value,
            values_agree: false,
        };
        let [main_ref, main_heur, _] = row.differences();
        row.values_agree = main_ref <= 2.0 * e && main_heur <= 1e3 * e;
        rows.push(row);
    }
    let meta = json!({
        "seed": seed,
        "count": count,
        "e_tol": tolerance.to_string(),
        "draws": draws,
        "rejected": rejections.len(),
        "curves": format!(
            "f(z, g) = sum c_ij z^i g^j over i + j <= {BENCH_MAX_DEGREE}, c_ij uniform in [-{BENCH_COEFF}, {BENCH_COEFF}]"
        ),
        "segments": BENCH_SEGMENTS
            .iter()
            .map(|(a, b)| json!([[a.0, a.1], [b.0, b.1]]))
            .collect::<Vec<_>>(),
        "segment_choice": "fixed list, one drawn per instance; paths are not taken from a homology basis",
        "min_clearance": BENCH_MIN_CLEARANCE,
        "branch": "random root of f(z_start, g)",
        "times": if wall_clock {
            "wall-clock milliseconds"
        } else {
            "cost model N + 0.01 N^1.7 summed over quadratures evaluated"
        },
        "values_agree": "|main - reference| <= 2 E_tol and |main - heuristic| <= 1000 E_tol",
    });
    Ok(BenchOutput { rows, rejections, meta })
}

pub fn write_bench<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record([
        "instance_id",
        "N_main",
        "N_ref",
        "N_heuristic",
        "t_main",
        "t_ref",
        "t_heuristic",
        "values_agree",
    ])?;
    for r in rows {
        w.write_record([
            r.instance_id.to_string(),
            r.n_main.to_string(),
            r.n_ref.to_string(),
            r.n_heuristic.to_string(),
            format!("{:.3}", r.t_main),
            format!("{:.3}", r.t_ref),
            format!("{:.3}", r.t_heuristic),
            r.values_agree.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a comma-separated list such as `0.1,0.01`.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Parse(format!("bad list entry {t:?}: {e}")))
        })
        .collect()
}
