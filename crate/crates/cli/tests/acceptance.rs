//! End-to-end acceptance checks, one per criterion.
//!
//! Run with `cargo test -p rig-cli --test acceptance -- --nocapture` to see
//! the PASS/FAIL table; a failing criterion also fails the test.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float, Rational};

use rig_cli::experiments::{bench, heatmap, iq, iq_integrand, planning_precision, pole};
use rig_cli::experiments::IqValue;
use rig_core::bounds::{disk_bound, fujiwara_root_bound};
use rig_core::num::{real, to_c64, Tolerance, BOUND_PREC};
use rig_core::quadrature::required_order;
use rig_core::strategies::{cost, execute, needs_split, plan_main, plan_reference, PlanOptions, SegmentPlan};
use rig_core::{continue_branch, legendre_scheme, poly_roots, AlgebraicIntegrand, BivariateDefiningPolynomial, UnivariatePolynomial};

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(a: &Complex, b: &Complex) -> Float {
    let prec = a.prec().0.max(b.prec().0);
    Complex::with_val(prec, a - b).abs().real().clone()
}

fn unit_path(prec: u32) -> (Complex, Complex) {
    (Complex::with_val(prec, -1), Complex::with_val(prec, 1))
}

/// `(z - z0)^(-1/2)` with the branch principal at `anchor`.
fn inv_sqrt(z0: &Complex, anchor: &Complex, prec: u32) -> AlgebraicIntegrand {
    let f = BivariateDefiningPolynomial::new(vec![
        UnivariatePolynomial::new(vec![Complex::with_val(prec, -z0), Complex::with_val(prec, 1)]),
        UnivariatePolynomial::zero(),
        UnivariatePolynomial::new(vec![Complex::with_val(prec, -1)]),
    ])
    .unwrap();
    let principal = Complex::with_val(prec, anchor - z0).sqrt().recip();
    AlgebraicIntegrand::new(f, anchor.clone(), principal, prec).unwrap()
}

/// `int_a^b (z - z0)^(-1/2) dz` on the straight line through `start`, branch
/// principal at `start`. With `u = (z - z0)/(start - z0)` the line passes
/// through `u = 1` and misses `0`, so the principal `sqrt(u)` is continuous.
fn inv_sqrt_integral(z0: &Complex, start: &Complex, a: &Complex, b: &Complex, prec: u32) -> Complex {
    let s = Complex::with_val(prec, start - z0);
    let ua = Complex::with_val(prec, Complex::with_val(prec, a - z0) / &s).sqrt();
    let ub = Complex::with_val(prec, Complex::with_val(prec, b - z0) / &s).sqrt();
    Complex::with_val(prec, s.sqrt() * Complex::with_val(prec, ub - ua)) * 2u32
}

fn ratio(a: usize, b: usize) -> f64 {
    a as f64 / b as f64
}

fn closed_form_accuracy() -> Outcome {
    let mut worst = 0.0f64;
    for k in [53u32, 100, 200] {
        let t = Tolerance::pow2(k);
        let prec = k + 40;
        for (re, im) in [((3, 10), (4, 10)), ((0, 1), (5, 100)), ((2, 1), (1, 1))] {
            let z0 = Complex::with_val(prec, (Rational::from(re), Rational::from(im)));
            let (a, b) = unit_path(prec);
            let g = inv_sqrt(&z0, &a, prec);
            // 2[(1 - z0)^(1/2) - (-1 - z0)^(1/2)] on the branch principal at -1
            let exact = inv_sqrt_integral(&z0, &a, &a, &b, 2 * prec);
            for plan in [plan_main(&g, &a, &b, &t, &PlanOptions::default()), plan_reference(&g, &a, &b, &t, &PlanOptions::default())] {
                let plan = plan.map_err(|e| e.to_string())?;
                let value = execute(&plan, &g).map_err(|e| e.to_string())?.value;
                let e = err(&value, &exact);
                let rel = Float::with_val(BOUND_PREC, &e / t.value()).to_f64();
                worst = worst.max(rel);
                if e > *t.value() {
                    return Err(format!("{} plan, z0 = {re:?}+{im:?}i, E = 2^-{k}: error/E = {rel:.3}", plan.strategy.as_str()));
                }
            }
        }
    }
    Ok(format!("18 cases, worst error/E_tol = {worst:.3e}"))
}

fn gl_exactness() -> Outcome {
    let p = 333;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for n in 2..=20usize {
        let scheme = legendre_scheme(n, p).map_err(|e| e.to_string())?;
        for _ in 0..5 {
            let deg = rng.gen_range(0..=2 * n - 1);
            let coeffs: Vec<Rational> = (0..=deg)
                .map(|_| Rational::from((rng.gen_range(-1000i64..=1000), rng.gen_range(1i64..=1000))))
                .collect();
            // int_{-1}^{1} x^j = 2/(j+1) for even j
            let exact = coeffs
                .iter()
                .enumerate()
                .filter(|(j, _)| j % 2 == 0)
                .fold(Rational::new(), |acc, (j, c)| acc + Rational::from(c * Rational::from((2, j as u64 + 1))));
            let mut sum = Float::new(p);
            for (x, w) in scheme.nodes().iter().zip(scheme.weights()) {
                let y = coeffs.iter().rev().fold(Float::new(p), |acc, c| Float::with_val(p, acc * x) + c);
                sum += Float::with_val(p, y * w);
            }
            let e = Float::with_val(p, sum - &exact).abs();
            let limit = Float::with_val(p, (deg + 1) as u64) >> (p - 15);
            worst = worst.max(Float::with_val(64, &e / &limit).to_f64());
            if e > limit {
                return Err(format!("N = {n}, degree {deg}: error {e:.3e} above {limit:.3e}"));
            }
        }
    }
    Ok(format!("N = 2..20, 95 polynomials, worst error/limit = {worst:.3e}"))
}

fn required_order_oracle() -> Outcome {
    let one = real(1.0);
    let e100 = Float::with_val(BOUND_PREC, 1) >> 100u32;
    let e200 = Float::with_val(BOUND_PREC, 1) >> 200u32;
    let n100 = required_order(&one, &one, &real(2.0), &e100).map_err(|e| e.to_string())?;
    let n200 = required_order(&one, &one, &real(2.0), &e200).map_err(|e| e.to_string())?;
    check(n100 == 36 && n200 == 70, format!("N(2^-100) = {n100}, N(2^-200) = {n200}"))
}

fn rigorous_bound_never_violated() -> Outcome {
    let prec = 160;
    let t = Tolerance::pow2(100);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut pairs = 0;
    let mut segments = 0;
    let mut worst = 0.0f64;
    while pairs < 20 {
        let z0 = Complex::with_val(prec, (rng.gen_range(-1.5..1.5), rng.gen_range(-1.0..1.0)));
        let a = Complex::with_val(prec, (rng.gen_range(-2.0..0.0), rng.gen_range(-1.0..1.0)));
        let b = Complex::with_val(prec, (rng.gen_range(0.0..2.0), rng.gen_range(-1.0..1.0)));
        let g = inv_sqrt(&z0, &a, prec);
        if g.segment_clearance(&a, &b) < 0.01 {
            continue;
        }
        pairs += 1;
        let opts = PlanOptions::default();
        let main = plan_main(&g, &a, &b, &t, &opts).map_err(|e| e.to_string())?;
        let report = execute(&main, &g).map_err(|e| e.to_string())?;
        for (s, v) in main.segments.iter().zip(&report.per_segment_values) {
            let exact = inv_sqrt_integral(&z0, &a, &s.start, &s.end, 2 * prec);
            let e = err(v, &exact);
            worst = worst.max(Float::with_val(BOUND_PREC, &e / &s.tolerance).to_f64());
            segments += 1;
            if e > s.tolerance {
                return Err(format!("main segment error {e:.3e} above its tolerance {:.3e}", s.tolerance));
            }
        }
        let reference = plan_reference(&g, &a, &b, &t, &opts).map_err(|e| e.to_string())?;
        let value = execute(&reference, &g).map_err(|e| e.to_string())?.value;
        let e = err(&value, &inv_sqrt_integral(&z0, &a, &a, &b, 2 * prec));
        worst = worst.max(Float::with_val(BOUND_PREC, &e / t.value()).to_f64());
        segments += 1;
        if e > *t.value() {
            return Err(format!("reference error {e:.3e} above E_tol"));
        }
    }
    Ok(format!("{pairs} pairs, {segments} budgeted segments, worst error/budget = {worst:.3e}"))
}

fn heatmap_reproduction() -> Outcome {
    let rows = heatmap(0.5, &Tolerance::pow2(100), 8).map_err(|e| e.to_string())?;
    let low: Vec<_> = rows.iter().filter(|r| r.y <= 0.2 + 1e-12).collect();
    let dominated = low.iter().all(|r| r.n2 >= r.n1);
    let best = rows.iter().map(|r| ratio(r.n2, r.n1)).fold(0.0, f64::max);
    let at = rows.iter().max_by(|a, b| ratio(a.n2, a.n1).total_cmp(&ratio(b.n2, b.n1))).unwrap();
    check(
        dominated && best >= 10.0,
        format!(
            "N2 >= N1 for y <= 0.2: {dominated}; max N2/N1 = {best:.2} at ({}, {}) with N1 = {}, N2 = {} (needs >= 10)",
            at.x, at.y, at.n1, at.n2
        ),
    )
}

fn pole_sweep() -> Vec<rig_cli::experiments::PoleRow> {
    let qs: Vec<f64> = (4..=10).map(|k| 2f64.powi(-k)).collect();
    pole(0.5, &qs, &Tolerance::pow2(100)).unwrap()
}

fn n2_trend() -> Outcome {
    let rows = pole_sweep();
    let ratios: Vec<f64> = rows.windows(2).map(|w| ratio(w[1].n2, w[0].n2)).collect();
    let last = &ratios[ratios.len() - 3..];
    check(
        last.iter().all(|r| (1.6..=2.5).contains(r)),
        format!("N2(q/2)/N2(q) for the last three doublings: {last:.3?}"),
    )
}

fn n1_trend() -> Outcome {
    let rows = pole_sweep();
    let ratios: Vec<f64> = rows.windows(2).map(|w| ratio(w[1].n1, w[0].n1)).collect();
    let last = &ratios[ratios.len() - 3..];
    let q = 2f64.powi(-10);
    let t = Tolerance::pow2(100);
    let g = iq_integrand(q, planning_precision(&t)).map_err(|e| e.to_string())?;
    let (a, b) = unit_path(g.precision());
    let n1 = plan_main(&g, &a, &b, &t, &PlanOptions::default()).map_err(|e| e.to_string())?.total_nodes;
    let n2 = plan_reference(&g, &a, &b, &t, &PlanOptions::default()).map_err(|e| e.to_string())?.total_nodes;
    check(
        last.iter().all(|r| *r <= 1.4) && (n1 as f64) < 0.05 * n2 as f64,
        format!("N1(q/2)/N1(q): {last:.3?}; quartic family at q = 2^-10: N1 = {n1}, N2 = {n2} ({:.2}%)", 100.0 * ratio(n1, n2)),
    )
}

fn proxy_agrees_with_lemma() -> Outcome {
    let t = Tolerance::pow2(100);
    let rows = iq(&[0.5, 0.1, 0.02], &t, IqValue::None).map_err(|e| e.to_string())?;
    let mut details = Vec::new();
    let mut ok = true;
    for r in &rows {
        let (r1, r2) = (ratio(r.n1_lemma, r.n1_proxy), ratio(r.n2_lemma, r.n2_proxy));
        ok &= [r1, r2].iter().all(|x| (1.0 / 3.0..=3.0).contains(x));
        details.push(format!("q = {}: {r1:.2}, {r2:.2}", r.q));
    }
    check(ok, format!("lemma/proxy node ratios (main, reference): {}", details.join("; ")))
}

/// `lead * prod (w - root)`.
fn from_roots(prec: u32, lead: &Complex, roots: &[Complex]) -> UnivariatePolynomial {
    let mut c = vec![lead.clone()];
    for r in roots {
        let mut next = vec![Complex::new(prec); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= Complex::with_val(prec, ck * r);
        }
        c = next;
    }
    UnivariatePolynomial::new(c)
}

fn assert_plan_sound(plan: &SegmentPlan, g: &AlgebraicIntegrand) {
    assert_eq!(cost(plan), plan.total_nodes);
    assert!(plan.total_share() <= 1);
    for s in &plan.segments {
        let (a, b) = (to_c64(&s.start), to_c64(&s.end));
        let (mid, half) = ((a + b) * 0.5, (b - a) * 0.5);
        let r = s.r.to_f64();
        let c = to_c64(&s.center);
        let delta = s.delta.to_f64() * (1.0 + 1e-12);
        if plan.covering.is_empty() {
            for k in 0..32 {
                let t = std::f64::consts::TAU * k as f64 / 32.0;
                let z = mid + half * Complex64::new(r.cosh() * t.cos(), r.sinh() * t.sin());
                assert!((z - c).norm() <= delta);
            }
            let h = Float::with_val(BOUND_PREC, s.length() / 2u32);
            assert!(!needs_split(plan.options.beta, s.critical_distance.as_ref(), &h));
        } else {
            for k in 0..128 {
                let t = std::f64::consts::TAU * k as f64 / 128.0;
                let z = mid + half * Complex64::new(r.cosh() * t.cos(), r.sinh() * t.sin());
                assert!(plan.covering.iter().any(|d| (z - to_c64(&d.center)).norm() <= d.radius.to_f64()));
            }
            for d in &plan.covering {
                for alpha in g.critical_points() {
                    assert!((to_c64(alpha) - to_c64(&d.center)).norm() > d.radius.to_f64());
                }
            }
        }
    }
}

fn property_suites() -> Outcome {
    let p = 128;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let c = |re: f64, im: f64| Complex::with_val(p, (re, im));

    for _ in 0..500 {
        let n = rng.gen_range(1..=8);
        let scale = 10f64.powf(rng.gen_range(-2.0..2.0));
        let roots: Vec<Complex> = (0..n).map(|_| c(scale * rng.gen_range(-1.0..1.0), scale * rng.gen_range(-1.0..1.0))).collect();
        let lead = c(rng.gen_range(0.1..3.0), rng.gen_range(-1.0..1.0));
        let bound = fujiwara_root_bound(&from_roots(p, &lead, &roots)).unwrap();
        assert!(roots.iter().all(|r| Float::with_val(BOUND_PREC, r.abs_ref()) <= bound), "Fujiwara containment");
    }

    for _ in 0..20 {
        let z0 = c(rng.gen_range(-2.0..2.0), rng.gen_range(0.05..2.0));
        let center = c(rng.gen_range(-1.0..1.0), 0.0);
        let delta = rng.gen_range(0.1..0.95) * err(&center, &z0).to_f64();
        let g = inv_sqrt(&z0, &center, p);
        let gc = g.branch_value().clone();
        let cert = disk_bound(&g, &center, &real(delta), &gc).unwrap();
        let s0 = Complex::with_val(p, &center - &z0).sqrt();
        for k in 0..64 {
            let t = std::f64::consts::TAU * k as f64 / 64.0;
            let z = Complex::with_val(p, &center + c(delta * t.cos(), delta * t.sin()));
            let u = Complex::with_val(p, Complex::with_val(p, &z - &z0) / Complex::with_val(p, &center - &z0));
            let exact = Complex::with_val(p, s0.clone() * u.sqrt()).recip();
            assert!(err(&exact, &gc) <= cert.variation_bound, "variation bound sampling");
        }
    }

    let t = Tolerance::pow2(100);
    for _ in 0..10 {
        let z0 = c(rng.gen_range(-1.5..1.5), rng.gen_range(0.01..1.0));
        let (a, b) = unit_path(p);
        let g = inv_sqrt(&z0, &a, p);
        assert_plan_sound(&plan_main(&g, &a, &b, &t, &PlanOptions::default()).unwrap(), &g);
        assert_plan_sound(&plan_reference(&g, &a, &b, &t, &PlanOptions::default()).unwrap(), &g);
    }

    for _ in 0..20 {
        let z0 = c(rng.gen_range(-2.0..2.0), rng.gen_range(0.2..2.0));
        let start = c(-1.0, 0.0);
        let g = inv_sqrt(&z0, &start, p);
        let target = c(rng.gen_range(-1.5..1.5), rng.gen_range(-0.15..0.15));
        let mid = Complex::with_val(p, &start + Complex::with_val(p, &target - &start) * rng.gen_range(0.05..0.95));
        if let (Ok(x), Ok(y)) = (continue_branch(&g, &[target.clone()]), continue_branch(&g, &[mid, target])) {
            assert!(err(&x[0], &y[1]).to_f64() < 1e-30, "branch refinement consistency");
        }
    }

    let f = BivariateDefiningPolynomial::from_real(p, &[&[1.0, 0.0, 1.0], &[0.0], &[-3.0, 1.0, 0.0, 2.0]]).unwrap();
    let anchor = c(0.4, 0.3);
    for root in poly_roots(&f.coefficients_at(&anchor), p).unwrap() {
        let g = AlgebraicIntegrand::new(f.clone(), anchor.clone(), root, p).unwrap();
        let h = 1e-12;
        let fwd = continue_branch(&g, &[Complex::with_val(p, &anchor + c(h, 0.0))]).unwrap();
        let back = continue_branch(&g, &[Complex::with_val(p, &anchor - c(h, 0.0))]).unwrap();
        let fd = Complex::with_val(p, Complex::with_val(p, &fwd[0] - &back[0]) / (2.0 * h));
        let d = f.branch_derivative(&anchor, g.branch_value()).unwrap();
        let rel = err(&fd, &d).to_f64() / Float::with_val(64, d.abs_ref()).to_f64().max(1.0);
        assert!(rel < 1e-10, "derivative vs finite difference");
    }
    Ok("Fujiwara (500 polys), variation sampling (20 disks), plan and covering soundness (10 poles), refinement (20), derivative (3 branches)".into())
}

fn cross_method_agreement() -> Outcome {
    let t = Tolerance::pow2(100);
    let out = bench(30, 1, &t, false).map_err(|e| e.to_string())?;
    let e = t.value().to_f64();
    let worst = out
        .rows
        .iter()
        .flat_map(|r| r.differences())
        .fold(0.0, f64::max);
    check(
        out.rows.len() == 30 && worst <= 1e3 * e,
        format!("30 instances ({} draws rejected), worst pairwise difference = {:.3}·E_tol", out.rejections.len(), worst / e),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("closed-form accuracy", closed_form_accuracy),
        ("GL exactness", gl_exactness),
        ("required-order oracle", required_order_oracle),
        ("rigorous bound never violated", rigorous_bound_never_violated),
        ("heatmap qualitative reproduction", heatmap_reproduction),
        ("N2 trend near a pole", n2_trend),
        ("N1 trend near a pole", n1_trend),
        ("proxy vs lemma bounds", proxy_agrees_with_lemma),
        ("property suites", property_suites),
        ("cross-method agreement", cross_method_agreement),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let clock = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = clock.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
