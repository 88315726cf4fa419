//! Affine components of conic sections.

use super::{AffineSubspace, Poly, PolyError};

/// All isolated affine subspaces of the zero set of a polynomial of total
/// degree <= 2 in variables x0, x1. Classification goes through the symmetric
/// matrix of the quadratic form: the result is two lines, one line, a single
/// point, or nothing (irreducible or empty conics).
pub fn conic_components(q: &Poly) -> Result<Vec<AffineSubspace>, PolyError> {
    let q = q.normalized();
    if q.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    debug_assert_eq!(q.degree_in(2), 0, "conic must live in x0, x1");
    let deg = q.total_degree();
    if deg > 2 {
        return Err(PolyError::DegreeTooHigh(deg));
    }
    if deg == 0 {
        return Ok(vec![]);
    }
    if deg == 1 {
        let a = q.coeff([1, 0, 0]);
        let b = q.coeff([0, 1, 0]);
        let c0 = q.coeff([0, 0, 0]);
        let n2 = a * a + b * b;
        let point = [-c0 * a / n2, -c0 * b / n2, 0.0];
        return Ok(vec![AffineSubspace::new(2, point, vec![[-b, a, 0.0]])]);
    }

    let a = q.coeff([2, 0, 0]);
    let b = q.coeff([1, 1, 0]);
    let c = q.coeff([0, 2, 0]);
    let d = q.coeff([1, 0, 0]);
    let e = q.coeff([0, 1, 0]);
    let f0 = q.coeff([0, 0, 0]);

    // q(x) = 1/2 x^T H x + g.x + f0
    let h = [[2.0 * a, b], [b, 2.0 * c]];
    let g = [d, e];
    let det_h = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let hnorm = h.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol_h = 1e-9 * hnorm * hnorm;

    let (l1, l2, u1, u2) = eigen_sym2(h);

    if det_h.abs() > tol_h {
        // unique critical point
        let cx = (-g[0] * h[1][1] + g[1] * h[0][1]) / det_h;
        let cy = (-g[1] * h[0][0] + g[0] * h[1][0]) / det_h;
        let val = q.eval([cx, cy, 0.0]);
        let tol_val = 1e-8 * (1.0 + cx * cx + cy * cy);
        if val.abs() <= tol_val {
            if det_h > 0.0 {
                return Ok(vec![AffineSubspace::point2([cx, cy])]);
            }
            // indefinite: pair of lines through the center, directions from
            // lp a^2 + ln b^2 = 0 with a along the positive eigenvector
            let (lp, ln) = if l1 > 0.0 { (l1, l2) } else { (l2, l1) };
            let (up, un) = if l1 > 0.0 { (u1, u2) } else { (u2, u1) };
            let s = (-ln / lp).sqrt();
            let mk = |sgn: f64| {
                let dir = [
                    un[0] + sgn * s * up[0],
                    un[1] + sgn * s * up[1],
                    0.0,
                ];
                AffineSubspace::new(2, [cx, cy, 0.0], vec![dir])
            };
            return Ok(vec![mk(1.0), mk(-1.0)]);
        }
        return Ok(vec![]); // ellipse, hyperbola, or empty
    }

    // rank-one quadratic part: coordinates along the nonzero eigenvector
    let (lam, us, ut) = if l1.abs() >= l2.abs() {
        (l1, u1, u2)
    } else {
        (l2, u2, u1)
    };
    let alpha = g[0] * us[0] + g[1] * us[1];
    let beta = g[0] * ut[0] + g[1] * ut[1];
    if beta.abs() > 1e-8 {
        return Ok(vec![]); // parabola
    }
    // 1/2 lam s^2 + alpha s + f0 = 0 along the s-axis
    let aa = 0.5 * lam;
    let disc = alpha * alpha - 4.0 * aa * f0;
    let tol_disc = 1e-8 * (alpha * alpha + (4.0 * aa * f0).abs()).max(1.0);
    let mut roots = Vec::new();
    if disc.abs() <= tol_disc {
        roots.push(-alpha / (2.0 * aa));
    } else if disc > 0.0 {
        let sq = disc.sqrt();
        roots.push((-alpha + sq) / (2.0 * aa));
        roots.push((-alpha - sq) / (2.0 * aa));
    }
    Ok(roots
        .into_iter()
        .map(|s| {
            AffineSubspace::new(
                2,
                [s * us[0], s * us[1], 0.0],
                vec![[ut[0], ut[1], 0.0]],
            )
        })
        .collect())
}

/// Eigen decomposition of a symmetric 2x2 matrix.
fn eigen_sym2(h: [[f64; 2]; 2]) -> (f64, f64, [f64; 2], [f64; 2]) {
    let tr = h[0][0] + h[1][1];
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    let l1 = tr / 2.0 + disc;
    let l2 = tr / 2.0 - disc;
    let u1 = eigvec(h, l1);
    let u2 = [-u1[1], u1[0]];
    (l1, l2, u1, u2)
}

fn eigvec(h: [[f64; 2]; 2], lam: f64) -> [f64; 2] {
    // (H - lam I) u = 0; pick the better-conditioned row
    let r0 = [h[0][0] - lam, h[0][1]];
    let r1 = [h[1][0], h[1][1] - lam];
    let n0 = r0[0].abs() + r0[1].abs();
    let n1 = r1[0].abs() + r1[1].abs();
    let r = if n0 >= n1 { r0 } else { r1 };
    let mut u = if r[0].abs() + r[1].abs() < 1e-12 {
        [1.0, 0.0]
    } else {
        [-r[1], r[0]]
    };
    let n = (u[0] * u[0] + u[1] * u[1]).sqrt();
    u[0] /= n;
    u[1] /= n;
    u
}
