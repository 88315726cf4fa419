//! Real roots of univariate polynomials with float coefficients.
//!
//! Isolation works by recursing on the derivative: between consecutive
//! critical points the polynomial is monotone, so sign changes bracket
//! simple roots for bisection, while roots of even multiplicity show up as
//! critical points where the value vanishes. A short Newton polish finishes
//! each root; clustered roots are collapsed.

use super::PolyError;

pub const EPS_ROOT: f64 = 1e-12;

fn horner(c: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &v in c.iter().rev() {
        acc = acc * x + v;
    }
    acc
}

/// Magnitude scale of the evaluation at `x`, for error-aware zero tests.
fn eval_scale(c: &[f64], x: f64) -> f64 {
    let mut acc = 0.0f64;
    let mut xp = 1.0f64;
    for &v in c {
        acc += v.abs() * xp;
        xp *= x.abs().max(1.0);
    }
    acc.max(1e-300)
}

fn trim(c: &[f64]) -> Vec<f64> {
    let m = c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let eps = super::EPS_POLY * m;
    let mut out: Vec<f64> = c.to_vec();
    while out.len() > 1 && out.last().unwrap().abs() <= eps {
        out.pop();
    }
    out
}

fn derivative(c: &[f64]) -> Vec<f64> {
    if c.len() <= 1 {
        return vec![0.0];
    }
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, v)| v * i as f64)
        .collect()
}

fn bisect(c: &[f64], mut a: f64, mut b: f64, fa_sign: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = horner(c, m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa_sign {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn newton_polish(c: &[f64], d: &[f64], mut x: f64, lo: f64, hi: f64) -> f64 {
    for _ in 0..6 {
        let f = horner(c, x);
        let fp = horner(d, x);
        if fp == 0.0 {
            break;
        }
        let nx = x - f / fp;
        if !nx.is_finite() || nx < lo || nx > hi {
            break;
        }
        if (nx - x).abs() <= EPS_ROOT * x.abs().max(1.0) {
            x = nx;
            break;
        }
        x = nx;
    }
    x
}

fn roots_rec(c: &[f64]) -> Vec<f64> {
    let n = c.len() - 1;
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        return vec![-c[0] / c[1]];
    }
    // Cauchy bound
    let lead = c[n].abs();
    let bound = 1.0 + c[..n].iter().fold(0.0f64, |a, v| a.max(v.abs())) / lead;

    let d = derivative(c);
    let mut knots = roots_rec(&trim(&d));
    knots.retain(|x| x.abs() < bound);
    knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut pts = Vec::with_capacity(knots.len() + 2);
    pts.push(-bound);
    pts.extend_from_slice(&knots);
    pts.push(bound);

    let mut out = Vec::new();
    let touch_tol = |x: f64| 1e-11 * eval_scale(c, x);
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let (fa, fb) = (horner(c, a), horner(c, b));
        // roots of even multiplicity sit at critical points with tiny value
        if fa.abs() <= touch_tol(a) {
            out.push(a);
            continue;
        }
        if fb.abs() <= touch_tol(b) {
            continue; // handled as the left endpoint of the next window
        }
        if fa.signum() != fb.signum() {
            let r = bisect(c, a, b, fa.signum());
            out.push(newton_polish(c, &d, r, a, b));
        }
    }
    // the right boundary may itself carry a touching root
    if let Some(&last) = pts.last() {
        if horner(c, last).abs() <= touch_tol(last) {
            out.push(last);
        }
    }
    out
}

/// All real roots, ascending, multiplicities collapsed.
pub fn real_roots(coeffs: &[f64]) -> Result<Vec<f64>, PolyError> {
    let c = trim(coeffs);
    if c.iter().all(|&v| v == 0.0) {
        return Err(PolyError::ZeroPolynomial);
    }
    // normalize scale for stable thresholds
    let m = c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let c: Vec<f64> = c.iter().map(|v| v / m).collect();
    // closed forms for the degrees that dominate the workload
    match c.len() {
        1 => return Ok(vec![]),
        2 => return Ok(vec![-c[0] / c[1]]),
        3 => {
            let (a, b, c0) = (c[2], c[1], c[0]);
            let disc = b * b - 4.0 * a * c0;
            let tol = 1e-13 * (b * b + (4.0 * a * c0).abs()).max(1e-30);
            if disc.abs() <= tol {
                return Ok(vec![-b / (2.0 * a)]);
            }
            if disc < 0.0 {
                return Ok(vec![]);
            }
            // numerically stable pairing avoids cancellation
            let q = -0.5 * (b + b.signum() * disc.sqrt());
            let mut r = if b == 0.0 {
                let s = (disc.sqrt()) / (2.0 * a);
                vec![-s, s]
            } else {
                vec![q / a, c0 / q]
            };
            r.sort_by(|x, y| x.partial_cmp(y).unwrap());
            return Ok(r);
        }
        _ => {}
    }
    let mut roots = roots_rec(&c);
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // collapse clusters
    let mut out: Vec<f64> = Vec::with_capacity(roots.len());
    for r in roots {
        match out.last() {
            Some(&p) if (r - p).abs() <= 1e-9 * r.abs().max(1.0) => {}
            _ => out.push(r),
        }
    }
    Ok(out)
}
