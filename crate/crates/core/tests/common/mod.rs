//! Reference implementations used only by tests.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre quadrature with `panels` equal panels.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = gauss_legendre(20);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let mid = lo + h / 2.0;
        let part: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * f(mid + xi * h / 2.0)).sum();
        total += part * h / 2.0;
    }
    total
}

/// Two-tailed Student t tail by direct integration.
///
/// With x = sqrt(df) tan(theta) the density becomes proportional to
/// cos^(df-1)(theta) on [0, pi/2), so
/// P(|T| >= t) = int_{atan(t/sqrt df)}^{pi/2} cos^(df-1) / int_0^{pi/2} cos^(df-1).
pub fn t_two_tailed_oracle(t: f64, df: f64) -> f64 {
    let f = |th: f64| {
        let c = th.cos();
        if c <= 0.0 {
            0.0
        } else {
            ((df - 1.0) * c.ln()).exp()
        }
    };
    let theta0 = (t.abs() / df.sqrt()).atan();
    let panels = 2000;
    integrate(f, theta0, FRAC_PI_2, panels) / integrate(f, 0.0, FRAC_PI_2, panels)
}

/// Type-7 quantile as the piecewise-linear curve through the points
/// (k / (n - 1), x_(k)), located by a linear scan over its segments.
pub fn type7(values: &[f64], p: f64) -> f64 {
    let mut s = values.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = s.len();
    if n == 1 {
        return s[0];
    }
    let step = 1.0 / (n - 1) as f64;
    for k in 0..n - 1 {
        let (p0, p1) = (k as f64 * step, (k + 1) as f64 * step);
        if p <= p1 || k == n - 2 {
            let frac = (p - p0) / (p1 - p0);
            return s[k] * (1.0 - frac) + s[k + 1] * frac;
        }
    }
    unreachable!()
}
