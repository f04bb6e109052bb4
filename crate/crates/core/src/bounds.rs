//! Certified upper bounds for `|g|` and for the variation of `g` on disks.
//!
//! All real arithmetic is done at [`BOUND_PREC`] bits with explicit
//! rounding: upper bounds toward +inf, the lower bound `A_0` toward -inf.

use rug::{Complex, Float};

use crate::algebraic::{AlgebraicIntegrand, BivariateDefiningPolynomial, UnivariatePolynomial};
use crate::error::{Error, Result};
use crate::num::{abs_up, dist_down, down, up, BOUND_PREC};

#[derive(Clone, Debug)]
pub struct Disk {
    pub center: Complex,
    pub radius: Float,
}

impl Disk {
    pub fn new(center: Complex, radius: Float) -> Result<Self> {
        if radius < 0 {
            return Err(Error::InvalidInput(format!("negative disk radius {radius}")));
        }
        Ok(Disk { center, radius })
    }

    pub fn contains(&self, z: &Complex) -> bool {
        crate::num::dist_down(z, &self.center) <= self.radius
    }
}

/// Outcome of [`disk_bound`]: everything needed to re-check the bound.
#[derive(Clone, Debug)]
pub struct DiskBoundCertificate {
    pub disk: Disk,
    /// Radius of the circle the Taylor remainder is estimated on.
    pub taylor_radius: Float,
    /// Uniform bound on every branch over the Taylor disk.
    pub fujiwara_bound: Float,
    pub g_at_center: Complex,
    pub dg_at_center: Complex,
    /// Bound on `|g(z) - g(center)|` over the disk.
    pub variation_bound: Float,
    /// `|g(center)| + variation_bound`.
    pub absolute_bound: Float,
}

/// `2 max_k |a_k / a_0|^(1/k)` for `p(w) = a_0 w^n + ... + a_n`, rounded up.
pub fn fujiwara_root_bound(p: &UnivariatePolynomial) -> Result<Float> {
    let Some(lead) = p.leading() else {
        return Err(Error::InvalidInput("Fujiwara bound of the zero polynomial".into()));
    };
    let lead_abs = down(lead.abs_ref());
    if lead_abs.is_zero() {
        return Err(Error::InvalidInput("zero leading coefficient".into()));
    }
    let coeffs = p.coefficients();
    let n = coeffs.len() - 1;
    let mut best = Float::new(BOUND_PREC);
    for k in 1..=n {
        let ratio = up(abs_up(&coeffs[n - k]) / &lead_abs);
        let root = up(ratio.root_ref(k as u32));
        best.max_mut(&root);
    }
    Ok(up(best * 2u32))
}

/// `A_0 <= |a_0(z)|` and `A_i >= |a_i(z)|` for `z` in `D(z0, radius)`.
///
/// `a0_roots` must be the zeros of `a_0`; `radius` must stay below the
/// distance from `z0` to each of them.
pub fn uniform_coefficient_bounds(
    f: &BivariateDefiningPolynomial,
    a0_roots: &[Complex],
    z0: &Complex,
    radius: &Float,
) -> Result<(Float, Vec<Float>)> {
    let a0 = f.leading();
    let mut lower = down(a0.leading().unwrap().abs_ref());
    for alpha in a0_roots {
        let gap = down(dist_down(z0, alpha) - radius);
        if gap <= 0 {
            return Err(Error::DiskTouchesZero {
                radius: radius.to_string(),
                distance: dist_down(z0, alpha).to_string(),
            });
        }
        lower = down(lower * gap);
    }
    let reach = up(abs_up(z0) + radius);
    let uppers = f.rows()[1..]
        .iter()
        .map(|a| {
            let mut power = Float::with_val(BOUND_PREC, 1);
            let mut total = Float::new(BOUND_PREC);
            for c in a.coefficients() {
                total = up(total + up(abs_up(c) * &power));
                power = up(power * &reach);
            }
            total
        })
        .collect();
    Ok((lower, uppers))
}

/// `2 max_k (A_k / A_0)^(1/k)`, bounding every branch of `g` on `D(z0, radius)`.
pub fn fujiwara_uniform_bound(
    f: &BivariateDefiningPolynomial,
    a0_roots: &[Complex],
    z0: &Complex,
    radius: &Float,
) -> Result<Float> {
    let (a0, uppers) = uniform_coefficient_bounds(f, a0_roots, z0, radius)?;
    let mut best = Float::new(BOUND_PREC);
    for (k, ak) in uppers.iter().enumerate() {
        let ratio = up(ak / &a0);
        best.max_mut(&up(ratio.root_ref(k as u32 + 1)));
    }
    Ok(up(best * 2u32))
}

/// `delta |g'(z0)| + delta^2 M / (rho (rho - delta))`, bounding `|g(z) - g(z0)|`
/// on `D(z0, delta)` when `|g| <= M` on the circle of radius `rho`.
pub fn taylor_variation_bound(
    dg_at_center: &Complex,
    fujiwara_bound: &Float,
    taylor_radius: &Float,
    delta: &Float,
) -> Result<Float> {
    if delta >= taylor_radius {
        return Err(Error::InvalidInput(format!(
            "Taylor radius {taylor_radius} must exceed disk radius {delta}"
        )));
    }
    if delta.is_zero() {
        return Ok(Float::new(BOUND_PREC));
    }
    let linear = up(delta * abs_up(dg_at_center));
    let gap = down(taylor_radius - delta);
    let denom = down(down(taylor_radius * &gap));
    let quadratic = up(up(up(delta * delta) * fujiwara_bound) / &denom);
    Ok(up(linear + quadratic))
}

/// Certified bound for `g` on `D(center, delta)`.
///
/// The Taylor radius sits halfway between `delta` and the distance to the
/// nearest critical point. With no critical points at all, a few multiples
/// of `delta` are tried and the smallest resulting bound kept.
pub fn disk_bound(
    integrand: &AlgebraicIntegrand,
    center: &Complex,
    delta: &Float,
    g_at_center: &Complex,
) -> Result<DiskBoundCertificate> {
    let f = integrand.f();
    let dg = f.branch_derivative(center, g_at_center)?;
    let nearest = integrand.critical_distance(center);
    if let Some(rho_min) = &nearest {
        if delta >= rho_min {
            return Err(Error::DiskContainsCritical {
                radius: delta.to_string(),
                distance: rho_min.to_string(),
            });
        }
    }
    let candidates: Vec<Float> = match &nearest {
        Some(rho_min) => vec![down(up(rho_min + delta) / 2u32)],
        None if delta.is_zero() => vec![Float::with_val(BOUND_PREC, 1)],
        None => [2u32, 4, 8, 16, 64].iter().map(|&m| up(delta * m)).collect(),
    };

    let mut best: Option<(Float, Float, Float)> = None;
    for rho in candidates {
        if rho <= *delta {
            return Err(Error::DiskContainsCritical {
                radius: delta.to_string(),
                distance: rho.to_string(),
            });
        }
        let mtilde = fujiwara_uniform_bound(f, integrand.a0_roots(), center, &rho)?;
        let variation = taylor_variation_bound(&dg, &mtilde, &rho, delta)?;
        if best.as_ref().map_or(true, |b| variation < b.2) {
            best = Some((rho, mtilde, variation));
        }
    }
    let (taylor_radius, fujiwara_bound, variation_bound) = best.unwrap();
    let absolute_bound = up(abs_up(g_at_center) + &variation_bound);
    Ok(DiskBoundCertificate {
        disk: Disk::new(center.clone(), delta.clone())?,
        taylor_radius,
        fujiwara_bound,
        g_at_center: g_at_center.clone(),
        dg_at_center: dg,
        variation_bound,
        absolute_bound,
    })
}

/// Model bound `scale * (|center - alpha| - delta)^(-exponent)`.
pub fn proxy_bound(
    scale: &Float,
    exponent: &Float,
    nearest_critical: &Complex,
    center: &Complex,
    delta: &Float,
) -> Result<Float> {
    let gap = down(dist_down(center, nearest_critical) - delta);
    if gap <= 0 {
        return Err(Error::DiskContainsCritical {
            radius: delta.to_string(),
            distance: dist_down(center, nearest_critical).to_string(),
        });
    }
    if *exponent < 0 {
        return Err(Error::InvalidInput(format!("proxy exponent {exponent} is negative")));
    }
    let neg = Float::with_val(BOUND_PREC, -exponent);
    Ok(up(scale * up(rug::ops::Pow::pow(&gap, &neg))))
}
