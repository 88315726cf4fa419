//! Linear factors: extraction, division and structured division tests.

use super::{real_roots, Poly, PolyError, EPS_FACT};
use crate::linalg::{solve_affine, LinSystem};

/// Degree-one polynomial `c0 + cv[0] x0 + cv[1] x1 + cv[2] x2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearPoly {
    pub c0: f64,
    pub cv: [f64; 3],
}

impl LinearPoly {
    pub fn new(c0: f64, cv: [f64; 3]) -> LinearPoly {
        LinearPoly { c0, cv }
    }

    pub fn to_poly(&self) -> Poly {
        Poly::linear(self.c0, self.cv)
    }

    pub fn from_poly(p: &Poly) -> Option<LinearPoly> {
        if p.total_degree() != 1 {
            return None;
        }
        let q = p.compacted();
        Some(LinearPoly {
            c0: q.coeff([0, 0, 0]),
            cv: [q.coeff([1, 0, 0]), q.coeff([0, 1, 0]), q.coeff([0, 0, 1])],
        })
    }

    pub fn eval(&self, x: [f64; 3]) -> f64 {
        self.c0 + self.cv[0] * x[0] + self.cv[1] * x[1] + self.cv[2] * x[2]
    }

    /// Scaled so the coefficient 4-vector has unit norm with a canonical sign.
    pub fn canonical(&self) -> LinearPoly {
        let n = (self.c0 * self.c0
            + self.cv.iter().map(|v| v * v).sum::<f64>())
        .sqrt();
        let mut out = LinearPoly {
            c0: self.c0 / n,
            cv: [self.cv[0] / n, self.cv[1] / n, self.cv[2] / n],
        };
        let lead = out
            .cv
            .iter()
            .copied()
            .find(|v| v.abs() > 1e-12)
            .unwrap_or(out.c0);
        if lead < 0.0 {
            out.c0 = -out.c0;
            for v in out.cv.iter_mut() {
                *v = -*v;
            }
        }
        out
    }

    /// Equality up to scalar multiple, by cosine of normalized coefficients.
    pub fn same_up_to_scale(&self, o: &LinearPoly) -> bool {
        let a = self.canonical();
        let b = o.canonical();
        let dot = a.c0 * b.c0 + a.cv.iter().zip(&b.cv).map(|(x, y)| x * y).sum::<f64>();
        dot > 1.0 - 1e-9
    }
}

/// Divides `f` by the linear polynomial `l` using the coefficient recursion
/// `q_{m-1} = f_m`, `q_i = f_{i+1} - q_{i+1} lbar`. Succeeds only when the
/// division is exact within `EPS_FACT` relative to `f`.
pub fn divide_by_linear(f: &Poly, l: &LinearPoly) -> Result<Poly, PolyError> {
    let axis = (0..3)
        .max_by(|&a, &b| l.cv[a].abs().partial_cmp(&l.cv[b].abs()).unwrap())
        .unwrap();
    let piv = l.cv[axis];
    if piv.abs() <= 1e-14 {
        return Err(PolyError::PreconditionViolated(
            "linear divisor has no usable pivot variable",
        ));
    }
    // lbar = l/piv - x_axis, a polynomial in the other variables
    let mut cv = [0.0; 3];
    for a in 0..3 {
        if a != axis {
            cv[a] = l.cv[a] / piv;
        }
    }
    let lbar = Poly::linear(l.c0 / piv, cv);

    let fc = f.coeffs_in(axis);
    let m = fc.len() - 1;
    if m == 0 {
        // f constant in the pivot variable: l divides f only if f == l * (f/l)
        // with f/l free of the pivot variable, impossible unless f is zero
        return Err(PolyError::NotAFactor);
    }
    let mut q = vec![Poly::zero(); m];
    q[m - 1] = fc[m].clone();
    for i in (0..m.saturating_sub(1)).rev() {
        q[i] = fc[i + 1].sub(&q[i + 1].mul(&lbar));
    }
    let quotient = Poly::from_coeffs_in(axis, &q).scale(1.0 / piv);
    let residual = f.sub(&l.to_poly().mul(&quotient));
    if residual.max_abs() <= EPS_FACT * f.max_abs() {
        Ok(quotient.compacted())
    } else {
        Err(PolyError::NotAFactor)
    }
}

/// Structured division: decides whether `g` divides `f` with respect to the
/// pivot `axis`, requiring `g`'s leading coefficient in `axis` to be a
/// nonzero constant. Coefficient comparison determines the quotient from the
/// first identities; the rest verify it.
pub fn try_divide(f: &Poly, g: &Poly, axis: usize) -> Result<Poly, PolyError> {
    let m = f.degree_in(axis);
    let n = g.degree_in(axis);
    if n == 0 || m < n {
        return Err(PolyError::NotAFactor);
    }
    let fc_asc = f.coeffs_in(axis);
    let gc_asc = g.coeffs_in(axis);
    let g0 = &gc_asc[n];
    if g0.total_degree() > 0 {
        return Err(PolyError::PreconditionViolated(
            "leading coefficient of divisor is not constant",
        ));
    }
    let g0v = g0.coeff([0, 0, 0]);
    if g0v.abs() <= 1e-14 * g.max_abs() {
        return Err(PolyError::PreconditionViolated(
            "leading coefficient of divisor is zero",
        ));
    }
    // descending-order views: F_k = coeff of x^{m-k}, G_k likewise, G_0 = 1
    let fd: Vec<&Poly> = (0..=m).map(|k| &fc_asc[m - k]).collect();
    let gd: Vec<Poly> = (0..=n).map(|k| gc_asc[n - k].scale(1.0 / g0v)).collect();

    let mut h: Vec<Poly> = Vec::with_capacity(m - n + 1);
    for k in 0..=(m - n) {
        let mut hk = fd[k].clone();
        for j in 1..=k.min(n) {
            hk = hk.sub(&gd[j].mul(&h[k - j]));
        }
        h.push(hk);
    }
    // quotient against the original (unnormalized) divisor
    let mut q = Poly::zero();
    for (k, hk) in h.iter().enumerate() {
        let e = m - n - k;
        let mut xp = Poly::constant(1.0 / g0v);
        for _ in 0..e {
            xp = xp.mul(&Poly::var(axis));
        }
        q = q.add(&hk.mul(&xp));
    }
    let residual = f.sub(&g.mul(&q));
    if residual.max_abs() <= EPS_FACT * f.max_abs().max(g.max_abs()) {
        Ok(q.compacted())
    } else {
        Err(PolyError::NotAFactor)
    }
}

/// Square root of a polynomial that should be the square of a linear form:
/// reconstructs the candidate from the coefficients and verifies it by
/// residual. The zero form is returned for a vanishing input.
fn sqrt_linear_form(d: &Poly, scale: f64) -> Option<LinearPoly> {
    if d.max_abs() <= 1e-9 * scale.max(1e-300) {
        return Some(LinearPoly::new(0.0, [0.0; 3]));
    }
    let e = |a: usize| {
        let mut x = [0usize; 3];
        x[a] = 1;
        x
    };
    let e2 = |a: usize| {
        let mut x = [0usize; 3];
        x[a] = 2;
        x
    };
    // terms of (u0 + sum u_a x_a)^2: diag u_a^2, const u0^2, cross 2 u_a u_b
    let mut diag = [d.coeff([0, 0, 0]), 0.0, 0.0, 0.0];
    for a in 0..3 {
        diag[a + 1] = d.coeff(e2(a));
    }
    let t = (0..4)
        .max_by(|&i, &j| diag[i].abs().partial_cmp(&diag[j].abs()).unwrap())
        .unwrap();
    if diag[t] < 0.0 {
        return None;
    }
    let ut = diag[t].sqrt();
    if ut == 0.0 {
        return None;
    }
    let mut u = [0.0f64; 4]; // [u0, u1, u2, u3]
    u[t] = ut;
    let cross = |i: usize, j: usize| -> f64 {
        // coefficient of the product of slots i and j (slot 0 is the constant)
        if i == 0 {
            d.coeff(e(j - 1))
        } else if j == 0 {
            d.coeff(e(i - 1))
        } else {
            let mut x = [0usize; 3];
            x[i - 1] += 1;
            x[j - 1] += 1;
            d.coeff(x)
        }
    };
    for s in 0..4 {
        if s != t {
            u[s] = cross(t.min(s), t.max(s)) / (2.0 * ut);
        }
    }
    let cand = LinearPoly::new(u[0], [u[1], u[2], u[3]]);
    let sq = cand.to_poly().mul(&cand.to_poly());
    if d.sub(&sq).max_abs() <= 1e-7 * d.max_abs() {
        Some(cand)
    } else {
        None
    }
}

/// Closed-form linear-factor extraction for total degree exactly 2, complete
/// over the reals: either a variable occurs squared and the discriminant
/// must be the square of a linear form, or the polynomial is multilinear and
/// every factor shows up as a pivot coefficient.
fn extract_quadratic(f: &Poly) -> Option<(LinearPoly, Poly)> {
    let scale = f.max_abs();
    if let Some(v) = (0..3).find(|&a| f.degree_in(a) == 2) {
        let coeffs = f.coeffs_in(v);
        let alpha = coeffs[2].coeff([0, 0, 0]);
        if alpha.abs() <= 1e-12 * scale {
            return None;
        }
        let disc = coeffs[1]
            .mul(&coeffs[1])
            .sub(&coeffs[0].scale(4.0 * alpha))
            .compacted();
        let s = sqrt_linear_form(&disc, scale * scale)?;
        for sgn in [1.0, -1.0] {
            let half = coeffs[1].add(&s.to_poly().scale(sgn)).scale(1.0 / (2.0 * alpha));
            let q = half.compacted();
            if q.total_degree() > 1 {
                continue;
            }
            let mut cv = [0.0; 3];
            cv[v] = 1.0;
            for a in 0..3 {
                if a != v {
                    let mut x = [0usize; 3];
                    x[a] = 1;
                    cv[a] = q.coeff(x);
                }
            }
            let l = LinearPoly::new(q.coeff([0, 0, 0]), cv);
            if let Ok(quot) = divide_by_linear(f, &l) {
                return Some((l, quot));
            }
        }
        return None;
    }
    // multilinear: any factor is proportional to some pivot coefficient
    for v in 0..3 {
        if f.degree_in(v) != 1 {
            continue;
        }
        let coeffs = f.coeffs_in(v);
        let lv = coeffs[1].compacted();
        if lv.total_degree() != 1 {
            continue;
        }
        if let Some(l) = LinearPoly::from_poly(&lv) {
            if let Ok(quot) = divide_by_linear(f, &l) {
                return Some((l, quot));
            }
        }
    }
    None
}

/// Deterministic perturbation stream for the sample points.
fn noise(seed: u64, k: usize) -> f64 {
    let mut s = seed
        .wrapping_add(0x9e3779b97f4a7c15u64.wrapping_mul(k as u64 + 1))
        .wrapping_mul(0xbf58476d1ce4e5b9);
    s ^= s >> 27;
    s = s.wrapping_mul(0x94d049bb133111eb);
    s ^= s >> 31;
    (s >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
}

/// One pass of the sample-point linear-factor search on pivot `axis`.
/// Returns a factor and the quotient on success.
fn extract_on_pivot(f: &Poly, axis: usize) -> Option<(LinearPoly, Poly)> {
    let m = f.degree_in(axis);
    if m == 0 {
        return None;
    }
    let others: Vec<usize> = (0..3).filter(|&a| a != axis && f.degree_in(a) > 0).collect();

    if others.is_empty() {
        // univariate: every real root yields a factor
        let (_, coeffs) = f.as_univariate()?;
        let roots = real_roots(&coeffs).ok()?;
        for r in roots {
            let l = LinearPoly::new(-r, {
                let mut cv = [0.0; 3];
                cv[axis] = 1.0;
                cv
            });
            if let Ok(q) = divide_by_linear(f, &l) {
                return Some((l, q));
            }
        }
        return None;
    }

    let d = others.len() + 1; // number of variables of f
    let fscale = f.max_abs();

    'attempt: for attempt in 0..8 {
        // unit vectors and the origin, perturbed on retries
        let mut points: Vec<Vec<f64>> = Vec::with_capacity(d);
        for i in 0..d - 1 {
            let mut u = vec![0.0; d - 1];
            u[i] = 1.0;
            points.push(u);
        }
        points.push(vec![0.0; d - 1]);
        if attempt > 0 {
            for (pi, u) in points.iter_mut().enumerate() {
                for (k, v) in u.iter_mut().enumerate() {
                    *v += 1e-3 * noise(attempt as u64 * 1000 + pi as u64, k);
                }
            }
        }

        // restrictions f(x_axis, u^i) as univariate polynomials
        let mut zsets: Vec<Vec<f64>> = Vec::with_capacity(d);
        for u in &points {
            let mut x = [0.0f64; 3];
            for (k, &a) in others.iter().enumerate() {
                x[a] = u[k];
            }
            let coeffs: Vec<f64> = f
                .coeffs_in(axis)
                .iter()
                .map(|c| c.eval(x))
                .collect();
            let cmax = coeffs.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            if cmax <= 1e-12 * fscale {
                continue 'attempt; // restriction vanished, perturb
            }
            match real_roots(&coeffs) {
                Ok(r) => zsets.push(r),
                Err(_) => continue 'attempt,
            }
        }

        // all root combinations, each solved for the affine coefficients
        let mut combo = vec![0usize; d];
        loop {
            if zsets.iter().zip(&combo).all(|(zs, &i)| i < zs.len()) && !zsets.iter().any(|z| z.is_empty())
            {
                let rows: Vec<(Vec<f64>, f64)> = points
                    .iter()
                    .zip(&combo)
                    .zip(&zsets)
                    .map(|((u, &i), zs)| {
                        let mut row = vec![1.0];
                        row.extend_from_slice(u);
                        (row, zs[i])
                    })
                    .collect();
                if let Ok(sol) = solve_affine(&LinSystem::from_rows(&rows, d)) {
                    if sol.rank == d {
                        // candidate x_axis = l0 + sum l_j x_j
                        let mut cv = [0.0; 3];
                        cv[axis] = 1.0;
                        for (k, &a) in others.iter().enumerate() {
                            cv[a] = -sol.point[k + 1];
                        }
                        let l = LinearPoly::new(-sol.point[0], cv);
                        if let Ok(q) = divide_by_linear(f, &l) {
                            return Some((l, q));
                        }
                    }
                }
            }
            // advance combination counter
            let mut pos = 0;
            loop {
                if pos == d {
                    break;
                }
                combo[pos] += 1;
                if combo[pos] < zsets[pos].len().max(1) {
                    break;
                }
                combo[pos] = 0;
                pos += 1;
            }
            if pos == d {
                break;
            }
        }
        if !zsets.is_empty() {
            return None; // combinations exhausted with valid samples
        }
    }
    None
}

/// All linear factors of `f` with multiplicity, plus the non-linear
/// remainder after dividing them out.
pub fn linear_factors(f: &Poly) -> (Vec<LinearPoly>, Poly) {
    let mut rem = f.normalized();
    let mut out = Vec::new();
    if rem.is_zero() {
        return (out, rem);
    }
    'outer: loop {
        if rem.total_degree() == 1 {
            if let Some(l) = LinearPoly::from_poly(&rem) {
                out.push(l);
                rem = Poly::constant(1.0);
            }
            break;
        }
        if rem.total_degree() == 0 {
            break;
        }
        if rem.total_degree() == 2 {
            // quadratics dominate the workload and have a closed form
            match extract_quadratic(&rem) {
                Some((l, q)) => {
                    out.push(l);
                    rem = q.normalized();
                    continue 'outer;
                }
                None => break,
            }
        }
        for axis in 0..3 {
            if let Some((l, q)) = extract_on_pivot(&rem, axis) {
                out.push(l);
                rem = q.normalized();
                continue 'outer;
            }
        }
        break;
    }
    (out, rem)
}

/// Common linear factors of a family of polynomials, each counted once.
pub fn common_linear_factors(fs: &[Poly]) -> Vec<LinearPoly> {
    let mut iter = fs.iter();
    let Some(first) = iter.next() else {
        return vec![];
    };
    let mut common: Vec<LinearPoly> = {
        let (fac, _) = linear_factors(first);
        let mut uniq: Vec<LinearPoly> = Vec::new();
        for l in fac {
            if !uniq.iter().any(|u| u.same_up_to_scale(&l)) {
                uniq.push(l);
            }
        }
        uniq
    };
    for f in iter {
        let (fac, _) = linear_factors(f);
        common.retain(|c| fac.iter().any(|l| l.same_up_to_scale(c)));
        if common.is_empty() {
            break;
        }
    }
    common
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(0)
    }
    fn y() -> Poly {
        Poly::var(1)
    }

    #[test]
    fn divide_difference_of_squares() {
        let f = x().mul(&x()).sub(&y().mul(&y()));
        let l = LinearPoly::new(0.0, [1.0, -1.0, 0.0]);
        let q = divide_by_linear(&f, &l).unwrap();
        // q = x + y
        assert!((q.eval([2.0, 3.0, 0.0]) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn divide_constructed_product() {
        // f = (x + y - 1)(x - 2y)
        let a = Poly::linear(-1.0, [1.0, 1.0, 0.0]);
        let b = Poly::linear(0.0, [1.0, -2.0, 0.0]);
        let f = a.mul(&b);
        let q = divide_by_linear(&f, &LinearPoly::new(-1.0, [1.0, 1.0, 0.0])).unwrap();
        for p in [[0.5, -1.0, 0.0], [2.0, 0.3, 0.0]] {
            assert!((q.eval(p) - b.eval(p)).abs() < 1e-10);
        }
    }

    #[test]
    fn positive_poly_has_no_linear_divisor() {
        let f = x().mul(&x()).add(&y().mul(&y())).add(&Poly::constant(1.0));
        assert_eq!(
            divide_by_linear(&f, &LinearPoly::new(0.0, [1.0, -1.0, 0.0])).unwrap_err(),
            PolyError::NotAFactor
        );
    }

    #[test]
    fn try_divide_quartic() {
        // f = (x^2 + y)(x^2 - y + 1)
        let g = x().mul(&x()).add(&y());
        let h = x().mul(&x()).sub(&y()).add(&Poly::constant(1.0));
        let f = g.mul(&h);
        let q = try_divide(&f, &g, 0).unwrap();
        for p in [[1.5, -0.4, 0.0], [-2.0, 3.0, 0.0]] {
            assert!((q.eval(p) - h.eval(p)).abs() < 1e-9);
        }
        assert_eq!(try_divide(&f, &f, 0).unwrap().total_degree(), 0);
        // x^4 not divisible by x^2 + 1
        let x4 = x().mul(&x()).mul(&x()).mul(&x());
        let g2 = x().mul(&x()).add(&Poly::constant(1.0));
        assert_eq!(try_divide(&x4, &g2, 0).unwrap_err(), PolyError::NotAFactor);
    }

    #[test]
    fn linear_factors_of_planted_product() {
        // x^2 - xy - 2y^2 - x + 2y = (x + y - 1)(x - 2y)
        let f = Poly::linear(-1.0, [1.0, 1.0, 0.0]).mul(&Poly::linear(0.0, [1.0, -2.0, 0.0]));
        let (fac, rem) = linear_factors(&f);
        assert_eq!(fac.len(), 2);
        assert!(rem.total_degree() == 0);
        let want1 = LinearPoly::new(-1.0, [1.0, 1.0, 0.0]);
        let want2 = LinearPoly::new(0.0, [1.0, -2.0, 0.0]);
        assert!(fac.iter().any(|l| l.same_up_to_scale(&want1)));
        assert!(fac.iter().any(|l| l.same_up_to_scale(&want2)));
    }

    #[test]
    fn irreducible_has_none() {
        let f = x().mul(&x()).add(&y().mul(&y())).add(&Poly::constant(1.0));
        let (fac, rem) = linear_factors(&f);
        assert!(fac.is_empty());
        assert_eq!(rem.total_degree(), 2);
    }

    #[test]
    fn repeated_factor_multiplicity() {
        // (x - 1)^2 (y + 2), trivariate embedded
        let xm1 = Poly::linear(-1.0, [1.0, 0.0, 0.0]);
        let yp2 = Poly::linear(2.0, [0.0, 1.0, 0.0]);
        let f = xm1.mul(&xm1).mul(&yp2);
        let (fac, rem) = linear_factors(&f);
        assert_eq!(fac.len(), 3);
        assert!(rem.total_degree() == 0);
        let n_xm1 = fac
            .iter()
            .filter(|l| l.same_up_to_scale(&LinearPoly::new(-1.0, [1.0, 0.0, 0.0])))
            .count();
        assert_eq!(n_xm1, 2, "double factor must appear twice");
    }

    #[test]
    fn common_factors_planted() {
        // {x^2 - y^2, x^2 + xy} share (x + y)
        let f = x().mul(&x()).sub(&y().mul(&y()));
        let g = x().mul(&x()).add(&x().mul(&y()));
        let c = common_linear_factors(&[f.clone(), g]);
        assert_eq!(c.len(), 1);
        assert!(c[0].same_up_to_scale(&LinearPoly::new(0.0, [1.0, 1.0, 0.0])));
        // {x^2+1, y^2+1} share nothing
        let a = x().mul(&x()).add(&Poly::constant(1.0));
        let b = y().mul(&y()).add(&Poly::constant(1.0));
        assert!(common_linear_factors(&[a, b]).is_empty());
        // {f, f} -> linear factors of f
        let c2 = common_linear_factors(&[f.clone(), f]);
        assert_eq!(c2.len(), 2);
    }
}
