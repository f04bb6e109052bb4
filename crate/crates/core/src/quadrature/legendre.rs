use rug::{Assign, Float};

use crate::error::{Error, Result};
use crate::num::MIN_PREC;

/// Gauss-Legendre nodes and weights of order `N` on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct QuadratureScheme {
    order: usize,
    nodes: Vec<Float>,
    weights: Vec<Float>,
    precision: u32,
}

impl QuadratureScheme {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Strictly increasing, symmetric about zero.
    pub fn nodes(&self) -> &[Float] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Float] {
        &self.weights
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }
}

/// `(P_N(x), P_{N-1}(x))` by Bonnet's recurrence at the precision of `x`.
fn legendre_pair(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut prev = Float::with_val(prec, 1);
    let mut cur = x.clone();
    let mut t = Float::new(prec);
    for k in 1..n as u32 {
        // P_{k+1} = ((2k+1) x P_k - k P_{k-1}) / (k+1)
        t.assign(x * &cur);
        t *= 2 * k + 1;
        prev *= k;
        t -= &prev;
        t /= k + 1;
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut t);
    }
    (cur, prev)
}

fn legendre_pair_f64(n: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (1.0, x);
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Newton on `P_N` from a double-precision seed, doubling the working
/// precision each step; stops once the correction is below `2^-(prec+10)`.
/// Returns the node and `P_N'` at it.
fn refine_node(n: usize, seed: f64, prec: u32, internal: u32) -> Option<(Float, Float)> {
    let target = Float::with_val(MIN_PREC, 1) >> (prec + 10);
    let mut x = Float::with_val(internal, seed);
    let mut accuracy = 48u32;
    for _ in 0..64 {
        let wp = (2 * accuracy + 16).min(internal);
        x.set_prec(wp);
        let (p, pm1) = legendre_pair(n, &x);
        // P_N'(x) = N (x P_N - P_{N-1}) / (x^2 - 1)
        let x2m1 = Float::with_val(wp, x.square_ref()) - 1u32;
        let dp = (Float::with_val(wp, &x * &p) - pm1) * n as u32 / x2m1;
        let dx = Float::with_val(wp, &p / &dp);
        x -= &dx;
        if wp == internal && dx.clone().abs() < target {
            return Some((x, dp));
        }
        accuracy = (2 * accuracy).min(internal);
    }
    None
}

/// Gauss-Legendre scheme of order `n` at `prec` bits.
///
/// Nodes are the roots of `P_N`, found by Newton from the seeds
/// `cos(pi (i - 1/4) / (N + 1/2))`, polished in double precision first.
/// Weights use `2 / ((1 - x^2) P_N'(x)^2)`. Only the nonnegative half is
/// computed; the rest follows by symmetry.
pub fn legendre_scheme(n: usize, prec: u32) -> Result<QuadratureScheme> {
    if n == 0 {
        return Err(Error::InvalidInput("quadrature order must be at least 1".into()));
    }
    let prec = prec.max(MIN_PREC);
    let half = n / 2;
    let mut positive: Vec<(Float, Float)> = Vec::with_capacity(half + 1);
    for i in 1..=half {
        let mut seed =
            (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        for _ in 0..8 {
            let (p, pm1) = legendre_pair_f64(n, seed);
            let dp = n as f64 * (seed * p - pm1) / (seed * seed - 1.0);
            let step = p / dp;
            seed -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let mut refined = None;
        for internal in [prec + 20, prec + 84] {
            refined = refine_node(n, seed, prec, internal);
            if refined.is_some() {
                break;
            }
        }
        let (x, dp) = refined.ok_or(Error::NodeStagnation { order: n, precision: prec })?;
        let one_minus = Float::with_val(prec, 1) - Float::with_val(prec, x.square_ref());
        let w = Float::with_val(prec, 2) / (one_minus * Float::with_val(prec, dp.square_ref()));
        positive.push((Float::with_val(prec, x), w));
    }

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    // positive[0] is the largest node
    for (x, w) in &positive {
        nodes.push(Float::with_val(prec, -x));
        weights.push(w.clone());
    }
    if n % 2 == 1 {
        let zero = Float::new(prec);
        let (_, pm1) = legendre_pair(n, &Float::new(prec + 20));
        // at x = 0: P_N'(0) = N P_{N-1}(0)
        let dp = Float::with_val(prec, pm1 * n as u32);
        let w = Float::with_val(prec, 2) / Float::with_val(prec, dp.square_ref());
        nodes.push(zero);
        weights.push(w);
    }
    for (x, w) in positive.iter().rev() {
        nodes.push(x.clone());
        weights.push(w.clone());
    }
    Ok(QuadratureScheme {
        order: n,
        nodes,
        weights,
        precision: prec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: &Float, b: &Float, bits: u32) -> bool {
        let d = Float::with_val(a.prec(), a - b).abs();
        d < Float::with_val(64, 1) >> bits
    }

    #[test]
    fn order_one() {
        let s = legendre_scheme(1, 128).unwrap();
        assert!(s.nodes()[0].is_zero());
        assert_eq!(s.weights()[0], 2);
    }

    #[test]
    fn order_two() {
        let p = 200;
        let s = legendre_scheme(2, p).unwrap();
        let x = Float::with_val(p, 3).sqrt().recip();
        assert!(approx(&s.nodes()[1], &x, p - 4));
        assert!(approx(&s.nodes()[0], &Float::with_val(p, -&x), p - 4));
        for w in s.weights() {
            assert!(approx(w, &Float::with_val(p, 1), p - 4));
        }
    }

    #[test]
    fn order_three() {
        let p = 200;
        let s = legendre_scheme(3, p).unwrap();
        let x = (Float::with_val(p, 3) / 5u32).sqrt();
        assert!(approx(&s.nodes()[2], &x, p - 4));
        assert!(s.nodes()[1].is_zero());
        assert!(approx(&s.weights()[1], &(Float::with_val(p, 8) / 9u32), p - 4));
        assert!(approx(&s.weights()[0], &(Float::with_val(p, 5) / 9u32), p - 4));
    }

    #[test]
    fn weights_sum_to_two_and_nodes_are_roots() {
        let p = 333;
        for n in [4, 7, 50, 121] {
            let s = legendre_scheme(n, p).unwrap();
            let sum = s.weights().iter().fold(Float::new(p), |a, w| a + w);
            assert!(approx(&sum, &Float::with_val(p, 2), p - 10), "n = {n}");
            for pair in s.nodes().windows(2) {
                assert!(pair[0] < pair[1]);
            }
            for x in s.nodes() {
                let (pn, _) = legendre_pair(n, &Float::with_val(p + 20, x));
                assert!(pn.abs() < Float::with_val(64, 1) >> (p - 20));
            }
        }
    }

    #[test]
    fn zero_order_is_rejected() {
        assert!(legendre_scheme(0, 64).is_err());
    }
}
