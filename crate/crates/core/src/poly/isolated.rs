//! Isolated affine subspaces of small polynomial systems.
//!
//! The entry points mirror the three solver layers of the critical-point
//! analysis: a single bivariate polynomial of degree <= 4, a bivariate pair,
//! and the gradient of a trivariate cubic. All of them return finitely many
//! affine subspaces contained in the zero set and forming a superset of the
//! isolated affine components; over-approximation is acceptable everywhere,
//! omission is not.

use super::conic::conic_components;
use super::factor::{common_linear_factors, divide_by_linear, linear_factors, try_divide, LinearPoly};
use super::resultant::resultant;
use super::roots::real_roots;
use super::subspace::AffineSubspace;
use super::{Poly, PolyError};

const MAX_DEPTH: usize = 64;

/// Zero classification of a resultant relative to unit-normalized inputs.
/// Near-zero resultants are routed through both the zero and nonzero
/// branches, which is safe because the output may over-approximate.
#[derive(PartialEq, Clone, Copy)]
enum ResClass {
    Zero,
    Near,
    NonZero,
}

fn classify_res(r: &Poly) -> ResClass {
    let m = r.max_abs();
    if m <= 1e-12 {
        ResClass::Zero
    } else if m <= 1e-8 {
        ResClass::Near
    } else {
        ResClass::NonZero
    }
}

/// Gauss-Newton polish of a candidate common root of a polynomial system.
fn polish_root(sys: &[Poly], x0: [f64; 3], axes: &[usize]) -> [f64; 3] {
    let mut x = x0;
    let mut best = residual(sys, x);
    for _ in 0..12 {
        // normal equations over the active axes
        let k = axes.len();
        let mut ata = [[0.0f64; 3]; 3];
        let mut atb = [0.0f64; 3];
        for p in sys {
            let r = p.eval(x);
            let grads: Vec<f64> = axes.iter().map(|&a| p.partial(a).eval(x)).collect();
            for i in 0..k {
                for j in 0..k {
                    ata[i][j] += grads[i] * grads[j];
                }
                atb[i] += grads[i] * r;
            }
        }
        for i in 0..k {
            ata[i][i] += 1e-14;
        }
        let Some(step) = solve_small(&ata, &atb, k) else { break };
        let mut nx = x;
        for (i, &a) in axes.iter().enumerate() {
            nx[a] -= step[i];
        }
        let nr = residual(sys, nx);
        if !nr.is_finite() || nr >= best {
            break;
        }
        x = nx;
        best = nr;
        if best < 1e-15 {
            break;
        }
    }
    x
}

fn residual(sys: &[Poly], x: [f64; 3]) -> f64 {
    sys.iter().map(|p| p.eval(x).powi(2)).sum::<f64>().sqrt()
}

fn solve_small(a: &[[f64; 3]; 3], b: &[f64; 3], k: usize) -> Option<[f64; 3]> {
    let mut m = *a;
    let mut r = *b;
    for col in 0..k {
        let mut piv = col;
        for i in col + 1..k {
            if m[i][col].abs() > m[piv][col].abs() {
                piv = i;
            }
        }
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        r.swap(col, piv);
        for i in 0..k {
            if i != col {
                let f = m[i][col] / m[col][col];
                for j in 0..3 {
                    m[i][j] -= f * m[col][j];
                }
                r[i] -= f * r[col];
            }
        }
    }
    let mut out = [0.0; 3];
    for i in 0..k {
        out[i] = r[i] / m[i][i];
    }
    Some(out)
}

/// Evaluation-scale for residual thresholds at a point.
fn growth(x: [f64; 3], deg: usize) -> f64 {
    let n = x[0].abs().max(x[1].abs()).max(x[2].abs()).max(1.0);
    n.powi(deg as i32)
}

// ---------------------------------------------------------------------------
// Lemma-12-style single bivariate polynomial, degree <= 4, vars x0/x1.
// ---------------------------------------------------------------------------

pub fn bivariate_isolated(f: &Poly) -> Result<Vec<AffineSubspace>, PolyError> {
    let fin = f.normalized();
    if fin.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let deg = fin.total_degree();
    if deg > 4 {
        return Err(PolyError::DegreeTooHigh(deg));
    }
    debug_assert_eq!(fin.degree_in(2), 0);

    let mut out: Vec<AffineSubspace> = Vec::new();
    let (factors, rem) = linear_factors(&fin);
    for l in &factors {
        if let Some(line) = line_from_linear2(l) {
            push_dedup(&mut out, line);
        }
    }
    let fh = rem.normalized();
    if fh.total_degree() == 0 || fh.num_vars() <= 1 {
        // univariate remainders contribute only linear factors, already taken
        return Ok(out);
    }

    // orient so x carries the higher degree
    let swap = fh.degree_in(0) < fh.degree_in(1);
    let fw = if swap {
        fh.permute_vars([1, 0, 2])
    } else {
        fh.clone()
    };

    let fx = fw.partial(0).normalized();
    let res = resultant(&fw, &fx, 0)?.normalized();
    let class = classify_res(&res);

    let mut pts: Vec<AffineSubspace> = Vec::new();
    if class != ResClass::Zero {
        if let Some((_, rc)) = res.as_univariate() {
            if let Ok(ys) = real_roots(&rc) {
                for y in ys {
                    collect_fiber_points(&[fw.clone(), fx.clone()], 0, 1, y, &mut pts);
                }
            }
        }
    }
    if class != ResClass::NonZero && fw.degree_in(0) == 4 {
        // double-factor structure: find the degree-2 common factor of f and f_x
        let (lf, _) = linear_factors(&fx);
        for l in lf {
            let Ok(g) = divide_by_linear(&fx, &l) else { continue };
            if g.degree_in(0) != 2 {
                continue;
            }
            if let Ok(gbar) = try_divide(&fw, &g, 0) {
                for q in [g, gbar] {
                    if q.total_degree() >= 1 && q.total_degree() <= 2 {
                        if let Ok(comps) = conic_components(&q) {
                            pts.extend(comps);
                        }
                    }
                }
                break;
            }
        }
    }
    for mut c in pts {
        if swap {
            c = swap_xy(&c);
        }
        push_dedup(&mut out, c);
    }
    Ok(out)
}

/// Candidate roots of the fiber `x1 = y`: common roots of all restrictions.
fn collect_fiber_points(sys: &[Poly], var_x: usize, var_y: usize, y: f64, out: &mut Vec<AffineSubspace>) {
    let mut point_template = [0.0f64; 3];
    point_template[var_y] = y;
    let restricted: Vec<Poly> = sys
        .iter()
        .map(|p| p.substitute(var_y, &Poly::constant(y)).compacted())
        .collect();
    let Some(main) = restricted.iter().find(|p| !p.is_zero_rel(1.0, 1e-10)) else {
        return;
    };
    let Some((_, rc)) = main.as_univariate() else { return };
    let Ok(roots) = real_roots(&rc) else { return };
    for r in roots {
        let mut x = point_template;
        x[var_x] = r;
        let x = polish_root(sys, x, &[var_x, var_y]);
        let ok = sys.iter().all(|p| {
            p.eval(x).abs() <= 1e-7 * p.max_abs() * growth(x, p.total_degree())
        });
        if ok {
            out.push(AffineSubspace::new(2, x, vec![]));
        }
    }
}

fn line_from_linear2(l: &LinearPoly) -> Option<AffineSubspace> {
    let a = l.cv[0];
    let b = l.cv[1];
    let n2 = a * a + b * b;
    if n2 < 1e-20 {
        return None;
    }
    let point = [-l.c0 * a / n2, -l.c0 * b / n2, 0.0];
    Some(AffineSubspace::new(2, point, vec![[-b, a, 0.0]]))
}

fn swap_xy(c: &AffineSubspace) -> AffineSubspace {
    AffineSubspace::new(
        c.ambient,
        [c.point[1], c.point[0], c.point[2]],
        c.dirs.iter().map(|d| [d[1], d[0], d[2]]).collect(),
    )
}

fn push_dedup(out: &mut Vec<AffineSubspace>, c: AffineSubspace) {
    let dup = out.iter().any(|o| {
        o.dim() == c.dim()
            && o.contains_point(c.point, 1e-7 * growth(c.point, 1))
            && c.dirs.iter().all(|d| {
                let p = [
                    c.point[0] + d[0],
                    c.point[1] + d[1],
                    c.point[2] + d[2],
                ];
                o.contains_point(p, 1e-7 * growth(p, 1))
            })
    });
    if !dup {
        out.push(c);
    }
}

// ---------------------------------------------------------------------------
// Lemma-13-style bivariate pair, deg f <= 4, deg g <= 3, vars x0/x1.
// ---------------------------------------------------------------------------

pub fn bivariate_pair_isolated(f: &Poly, g: &Poly) -> Result<Vec<AffineSubspace>, PolyError> {
    let fin = f.normalized();
    let gin = g.normalized();
    if fin.is_zero() || gin.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if fin.total_degree() > 4 {
        return Err(PolyError::DegreeTooHigh(fin.total_degree()));
    }
    if gin.total_degree() > 4 {
        return Err(PolyError::DegreeTooHigh(gin.total_degree()));
    }
    pair_isolated_inner(&fin, &gin, 0)
}

fn pair_isolated_inner(
    f: &Poly,
    g: &Poly,
    depth: usize,
) -> Result<Vec<AffineSubspace>, PolyError> {
    if depth > MAX_DEPTH {
        return Ok(vec![]);
    }
    let mut out: Vec<AffineSubspace> = Vec::new();
    let mut fh = f.normalized();
    let mut gh = g.normalized();

    // strip common linear factors; each is a full line of the zero set
    loop {
        let common = common_linear_factors(&[fh.clone(), gh.clone()]);
        let mut stripped = false;
        for l in common {
            if let (Ok(fq), Ok(gq)) = (divide_by_linear(&fh, &l), divide_by_linear(&gh, &l)) {
                if let Some(line) = line_from_linear2(&l) {
                    push_dedup(&mut out, line);
                }
                fh = fq.normalized();
                gh = gq.normalized();
                stripped = true;
                break;
            }
        }
        if !stripped {
            break;
        }
    }

    // fully factored or constant members leave only the common lines
    if fh.total_degree() == 0 || gh.total_degree() == 0 {
        return Ok(out);
    }

    // univariate member: enumerate its roots directly
    for (which, uni) in [(0, fh.clone()), (1, gh.clone())] {
        if uni.num_vars() == 1 {
            let other = if which == 0 { gh.clone() } else { fh.clone() };
            let (axis, coeffs) = uni.as_univariate().unwrap();
            let oaxis = 1 - axis;
            if let Ok(roots) = real_roots(&coeffs) {
                for r in roots {
                    let rest = other.substitute(axis, &Poly::constant(r)).compacted();
                    if rest.is_zero_rel(other.max_abs(), 1e-10) {
                        // entire fiber line solves the system
                        let mut pt = [0.0; 3];
                        pt[axis] = r;
                        let mut d = [0.0; 3];
                        d[oaxis] = 1.0;
                        push_dedup(&mut out, AffineSubspace::new(2, pt, vec![d]));
                    } else if let Some((_, rc)) = rest.as_univariate() {
                        if let Ok(rr) = real_roots(&rc) {
                            for s in rr {
                                let mut x = [0.0; 3];
                                x[axis] = r;
                                x[oaxis] = s;
                                let x = polish_root(&[fh.clone(), gh.clone()], x, &[0, 1]);
                                push_dedup(&mut out, AffineSubspace::new(2, x, vec![]));
                            }
                        }
                    }
                }
            }
            return Ok(out);
        }
    }

    // both polynomials involve both variables
    let res = resultant(&fh, &gh, 0)?.normalized();
    let class = classify_res(&res);

    if class != ResClass::Zero {
        if let Some((_, rc)) = res.as_univariate() {
            if let Ok(ys) = real_roots(&rc) {
                let mut pts = Vec::new();
                for y in ys {
                    collect_fiber_points(&[fh.clone(), gh.clone()], 0, 1, y, &mut pts);
                }
                for p in pts {
                    push_dedup(&mut out, p);
                }
            }
        }
    }
    if class != ResClass::NonZero {
        let (lf_g, _) = linear_factors(&gh);
        if let Some(l) = lf_g.first() {
            // split: (f, g/l) and (f restricted to the line l = 0)
            if let Ok(gq) = divide_by_linear(&gh, l) {
                if gq.total_degree() >= 1 {
                    for c in pair_isolated_inner(&fh, &gq, depth + 1)? {
                        push_dedup(&mut out, c);
                    }
                }
            }
            for c in points_on_line(&[fh.clone()], l) {
                push_dedup(&mut out, c);
            }
        } else {
            // g irreducible and res = 0: g divides f, system reduces to V(g)
            for c in bivariate_isolated(&gh)? {
                push_dedup(&mut out, c);
            }
        }
    }
    Ok(out)
}

/// Roots of a system restricted to the line `l = 0` (two variables).
fn points_on_line(sys: &[Poly], l: &LinearPoly) -> Vec<AffineSubspace> {
    let mut out = Vec::new();
    let axis = if l.cv[0].abs() >= l.cv[1].abs() { 0 } else { 1 };
    let oaxis = 1 - axis;
    if l.cv[axis].abs() < 1e-14 {
        return out;
    }
    // x_axis = -(c0 + c_o x_o)/c_axis
    let expr = Poly::linear(-l.c0 / l.cv[axis], {
        let mut cv = [0.0; 3];
        cv[oaxis] = -l.cv[oaxis] / l.cv[axis];
        cv
    });
    let restricted: Vec<Poly> = sys
        .iter()
        .map(|p| p.substitute(axis, &expr).compacted())
        .collect();
    let Some(main) = restricted.iter().find(|p| !p.is_zero_rel(1.0, 1e-10)) else {
        // the whole line solves the system
        if let Some(line) = line_from_linear2(l) {
            out.push(line);
        }
        return out;
    };
    let Some((_, rc)) = main.as_univariate() else { return out };
    let Ok(roots) = real_roots(&rc) else { return out };
    for t in roots {
        let mut x = [0.0; 3];
        x[oaxis] = t;
        x[axis] = expr.eval(x);
        let all_sys: Vec<Poly> = sys.iter().cloned().chain([l.to_poly()]).collect();
        let x = polish_root(&all_sys, x, &[0, 1]);
        out.push(AffineSubspace::new(2, x, vec![]));
    }
    out
}

// ---------------------------------------------------------------------------
// Trivariate systems: the Theorem-3 case machinery.
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub enum GradientCritical {
    /// The gradient vanishes identically.
    WholeSpace,
    Subspaces(Vec<AffineSubspace>),
}

/// All isolated affine subspaces of `grad p = 0` for a trivariate polynomial
/// of total degree <= 3, as a finite superset contained in the critical set.
pub fn gradient_critical_subspaces(p: &Poly) -> Result<GradientCritical, PolyError> {
    let pn = p.normalized();
    if pn.total_degree() > 3 {
        return Err(PolyError::DegreeTooHigh(pn.total_degree()));
    }
    let parts: Vec<Poly> = pn
        .gradient()
        .into_iter()
        .map(|q| q.compacted())
        .filter(|q| !q.is_zero_rel(1.0, 1e-10))
        .collect();
    if parts.is_empty() {
        return Ok(GradientCritical::WholeSpace);
    }
    let active: Vec<usize> = (0..3)
        .filter(|&a| parts.iter().any(|q| q.degree_in(a) > 0))
        .collect();
    if active.is_empty() {
        // gradient is a nonzero constant vector
        return Ok(GradientCritical::Subspaces(vec![]));
    }
    let sys: Vec<Poly> = parts.iter().map(|q| q.normalized()).collect();
    let comps = solve_system(&sys, &active, 0);

    // free axes extend every component
    let free: Vec<usize> = (0..3).filter(|a| !active.contains(a)).collect();
    let mut result = Vec::new();
    for c in comps {
        let mut point = c.point;
        if c.dirs.is_empty() {
            // isolated roots from deep substitution cascades carry the
            // accumulated fiber error; polish on the full gradient system
            point = polish_root(&sys, point, &active);
        }
        let mut dirs = c.dirs.clone();
        for &a in &free {
            let mut d = [0.0; 3];
            d[a] = 1.0;
            dirs.push(d);
        }
        let c = AffineSubspace::new(3, point, dirs);
        // soundness gate: the gradient must vanish on the whole subspace
        let samples = c.samples(6, 2.0);
        let ok = samples.iter().all(|&x| {
            sys.iter()
                .all(|q| q.eval(x).abs() <= 3e-7 * growth(x, q.total_degree()))
        });
        if ok {
            push_dedup(&mut result, c);
        }
    }
    Ok(GradientCritical::Subspaces(result))
}

/// Recursive solver for systems of at most three polynomials of total degree
/// at most two over the given active axes. Returns affine subspaces of the
/// zero set covering all isolated affine components. Coordinates outside
/// `active` stay pinned at zero.
fn solve_system(sys_in: &[Poly], active: &[usize], depth: usize) -> Vec<AffineSubspace> {
    if depth > MAX_DEPTH {
        return vec![];
    }
    // normalize, drop vanished, dedupe proportional
    let mut sys: Vec<Poly> = Vec::new();
    for p in sys_in {
        let q = p.normalized();
        if q.is_zero() {
            continue;
        }
        if q.total_degree() == 0 {
            return vec![]; // nonzero constant: empty zero set
        }
        if !sys.iter().any(|r| proportional(r, &q)) {
            sys.push(q);
        }
    }
    if sys.is_empty() {
        return vec![full_space(active)];
    }

    // common linear factors split off hyperplane components
    let common = common_linear_factors(&sys);
    for l in common {
        let quotients: Vec<Option<Poly>> = sys.iter().map(|p| divide_by_linear(p, &l).ok()).collect();
        if quotients.iter().all(|q| q.is_some()) {
            let mut out = Vec::new();
            if let Some(h) = hyperplane_in(active, &l) {
                out.push(h);
            }
            let qs: Vec<Poly> = quotients.into_iter().map(|q| q.unwrap()).collect();
            let rest = solve_system(&qs, active, depth + 1);
            for c in rest {
                push_dedup(&mut out, c);
            }
            return out;
        }
    }

    // a linear member: substitute and recurse in one variable fewer
    if let Some(pos) = sys.iter().position(|p| p.total_degree() == 1) {
        let l = LinearPoly::from_poly(&sys[pos]).unwrap();
        let rest: Vec<Poly> = sys
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pos)
            .map(|(_, p)| p.clone())
            .collect();
        return substitute_and_solve(&rest, active, &l, depth);
    }

    // a univariate member: branch over its roots
    if let Some((pos, axis)) = sys.iter().enumerate().find_map(|(i, p)| {
        if p.num_vars() == 1 {
            Some((i, (0..3).find(|&a| p.degree_in(a) > 0).unwrap()))
        } else {
            None
        }
    }) {
        let (_, coeffs) = sys[pos].as_univariate().unwrap();
        let Ok(roots) = real_roots(&coeffs) else { return vec![] };
        let rest: Vec<Poly> = sys
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pos)
            .map(|(_, p)| p.clone())
            .collect();
        let mut out = Vec::new();
        for r in roots {
            let mut cv = [0.0; 3];
            cv[axis] = 1.0;
            let l = LinearPoly::new(-r, cv);
            for c in substitute_and_solve(&rest, active, &l, depth) {
                push_dedup(&mut out, c);
            }
        }
        return out;
    }

    // here every member has >= 2 variables and degree exactly 2
    match active.len() {
        0 | 1 => vec![], // cannot happen: univariate/constant handled above
        2 => solve_two_vars(&sys, active, depth),
        _ => solve_three_vars(&sys, active, depth),
    }
}

fn proportional(a: &Poly, b: &Poly) -> bool {
    let d = a.sub(b).max_abs();
    let s = a.add(b).max_abs();
    d <= 1e-9 || s <= 1e-9
}

fn full_space(active: &[usize]) -> AffineSubspace {
    let dirs = active
        .iter()
        .map(|&a| {
            let mut d = [0.0; 3];
            d[a] = 1.0;
            d
        })
        .collect();
    AffineSubspace::new(3, [0.0; 3], dirs)
}

/// The hyperplane `l = 0` inside the active coordinate space.
fn hyperplane_in(active: &[usize], l: &LinearPoly) -> Option<AffineSubspace> {
    let mut n = [0.0; 3];
    for &a in active {
        n[a] = l.cv[a];
    }
    let n2: f64 = n.iter().map(|v| v * v).sum();
    if n2 < 1e-20 {
        return None;
    }
    let point = [-l.c0 * n[0] / n2, -l.c0 * n[1] / n2, -l.c0 * n[2] / n2];
    let mut dirs = Vec::new();
    for &a in active {
        let mut e = [0.0; 3];
        e[a] = 1.0;
        // project out the normal
        let t = e.iter().zip(&n).map(|(x, y)| x * y).sum::<f64>() / n2;
        for k in 0..3 {
            e[k] -= t * n[k];
        }
        dirs.push(e);
    }
    let s = AffineSubspace::new(3, point, dirs);
    if s.dim() + 1 == active.len() {
        Some(s)
    } else {
        None
    }
}

/// Substitutes the linear equation `l = 0` into the system and lifts the
/// solutions of the reduced problem back through the induced affine map.
fn substitute_and_solve(
    sys: &[Poly],
    active: &[usize],
    l: &LinearPoly,
    depth: usize,
) -> Vec<AffineSubspace> {
    // pivot: active variable with the largest coefficient
    let Some(&piv) = active
        .iter()
        .filter(|&&a| l.cv[a].abs() > 1e-12)
        .max_by(|&&a, &&b| l.cv[a].abs().partial_cmp(&l.cv[b].abs()).unwrap())
    else {
        return vec![]; // degenerate: l constant over the active space
    };
    let cp = l.cv[piv];
    let mut cv = [0.0; 3];
    for &a in active {
        if a != piv {
            cv[a] = -l.cv[a] / cp;
        }
    }
    let expr = Poly::linear(-l.c0 / cp, cv);
    let gamma = 1.0 + expr.max_abs();

    let reduced: Vec<Poly> = sys
        .iter()
        .filter_map(|p| {
            let q = p.substitute(piv, &expr).compacted();
            let bound = p.max_abs() * gamma.powi(p.total_degree() as i32);
            if q.max_abs() <= 1e-10 * bound.max(1e-300) {
                None // constraint became vacuous on the plane
            } else {
                Some(q)
            }
        })
        .collect();
    let sub_active: Vec<usize> = active.iter().copied().filter(|&a| a != piv).collect();
    let comps = solve_system(&reduced, &sub_active, depth + 1);

    // lift: x_piv = expr(x_rest)
    let mut offset = [0.0; 3];
    offset[piv] = -l.c0 / cp;
    let mut cols = [[0.0; 3]; 3];
    for &a in &sub_active {
        cols[a][a] = 1.0;
        cols[a][piv] = cv[a];
    }
    comps
        .into_iter()
        .map(|c| c.map_affine(offset, &cols, 3))
        .collect()
}

/// Two active variables, all members bivariate quadratics.
fn solve_two_vars(sys: &[Poly], active: &[usize], depth: usize) -> Vec<AffineSubspace> {
    let (ax, ay) = (active[0], active[1]);
    // move into the canonical x0/x1 slots for the bivariate machinery
    let mut perm = [0usize; 3];
    let spare = (0..3).find(|a| *a != ax && *a != ay).unwrap();
    perm[ax] = 0;
    perm[ay] = 1;
    perm[spare] = 2;
    let canon: Vec<Poly> = sys.iter().map(|p| p.permute_vars(perm)).collect();

    let comps2 = match canon.len() {
        1 => conic_components(&canon[0]).unwrap_or_default(),
        2 => bivariate_pair_isolated(&canon[0], &canon[1]).unwrap_or_default(),
        _ => three_polys_two_vars(&canon, depth),
    };
    // map back to the original axes
    let inv = {
        let mut v = [0usize; 3];
        for a in 0..3 {
            v[perm[a]] = a;
        }
        v
    };
    comps2
        .into_iter()
        .map(|c| {
            let mp = |v: &[f64; 3]| {
                let mut o = [0.0; 3];
                for k in 0..3 {
                    o[inv[k]] = v[k];
                }
                o
            };
            AffineSubspace::new(3, mp(&c.point), c.dirs.iter().map(mp).collect())
        })
        .collect()
}

/// Three (or more) quadratics in two variables (canonical slots x0/x1).
fn three_polys_two_vars(sys: &[Poly], depth: usize) -> Vec<AffineSubspace> {
    let mut out: Vec<AffineSubspace> = Vec::new();
    // resultant of the last two w.r.t. x0, roots in x1, then fiber checks
    let f = &sys[sys.len() - 2];
    let g = &sys[sys.len() - 1];
    let res = match resultant(f, g, 0) {
        Ok(r) => r.normalized(),
        Err(_) => return out,
    };
    let class = classify_res(&res);
    if class != ResClass::Zero {
        if let Some((_, rc)) = res.as_univariate() {
            if let Ok(ys) = real_roots(&rc) {
                for y in ys {
                    collect_fiber_points(sys, 0, 1, y, &mut out);
                }
            }
        }
    }
    if class != ResClass::NonZero {
        // common factor of the pair must be linear, split the system
        let common = common_linear_factors(&[f.clone(), g.clone()]);
        if let Some(l) = common.first() {
            let others: Vec<Poly> = sys[..sys.len() - 2].to_vec();
            // system 1: others plus the line
            let mut s1 = others.clone();
            s1.push(l.to_poly());
            for c in solve_system(&s1, &[0, 1], depth + 1) {
                push_dedup(&mut out, c);
            }
            // system 2: others plus both quotients
            let mut s2 = others;
            if let (Ok(fq), Ok(gq)) = (divide_by_linear(f, l), divide_by_linear(g, l)) {
                s2.push(fq);
                s2.push(gq);
                for c in solve_system(&s2, &[0, 1], depth + 1) {
                    push_dedup(&mut out, c);
                }
            }
        }
    }
    out
}

/// Three active variables: the resultant-cascade cases.
fn solve_three_vars(sys: &[Poly], active: &[usize], depth: usize) -> Vec<AffineSubspace> {
    debug_assert_eq!(active.len(), 3);
    if sys.len() == 1 {
        return single_quadric(&sys[0], depth);
    }

    // pivot: variable occurring in the most members
    let pivot = (0..3)
        .max_by_key(|&a| sys.iter().filter(|p| p.degree_in(a) > 0).count())
        .unwrap();

    // at most one member may be quadratic in the pivot
    let quads: Vec<usize> = (0..sys.len())
        .filter(|&i| sys[i].degree_in(pivot) == 2)
        .collect();
    if quads.len() >= 2 {
        let i = quads[0];
        let j = quads[1];
        let ci = sys[i].coeffs_in(pivot)[2].coeff([0, 0, 0]);
        let cj = sys[j].coeffs_in(pivot)[2].coeff([0, 0, 0]);
        let mut ns = sys.to_vec();
        ns[j] = sys[j].sub(&sys[i].scale(cj / ci)).compacted();
        return solve_system(&ns, active, depth + 1);
    }

    // order members by degree in the pivot
    let mut idx: Vec<usize> = (0..sys.len()).collect();
    idx.sort_by_key(|&i| sys[i].degree_in(pivot));
    let ordered: Vec<Poly> = idx.iter().map(|&i| sys[i].clone()).collect();

    if ordered.len() == 2 {
        let (p1, p2) = (&ordered[0], &ordered[1]);
        return pair_three_vars(p1, p2, pivot, active, depth);
    }

    // three members: res(p1,p2,x) and res(p2,p3,x) with p2 linear in x
    let (p1, p2, p3) = (&ordered[0], &ordered[1], &ordered[2]);
    let mut out: Vec<AffineSubspace> = Vec::new();
    let r12 = match resultant(p1, p2, pivot) {
        Ok(r) => r.normalized(),
        Err(_) => Poly::zero(),
    };
    let r23 = match resultant(p2, p3, pivot) {
        Ok(r) => r.normalized(),
        Err(_) => Poly::zero(),
    };
    let c12 = classify_res(&r12);
    let c23 = classify_res(&r23);

    if c12 != ResClass::NonZero {
        for c in split_on_common_factor(&[p1.clone(), p2.clone()], &[p3.clone()], active, depth) {
            push_dedup(&mut out, c);
        }
    }
    if c23 != ResClass::NonZero {
        for c in split_on_common_factor(&[p2.clone(), p3.clone()], &[p1.clone()], active, depth) {
            push_dedup(&mut out, c);
        }
    }
    if c12 != ResClass::Zero && c23 != ResClass::Zero {
        // project out the pivot, solve the bivariate pair, restrict back
        let others: Vec<usize> = active.iter().copied().filter(|&a| a != pivot).collect();
        let comps2 = pair_in_axes(&r23, &r12, others[0], others[1]);
        for c in comps2 {
            for lifted in restrict_to_component(sys, active, (others[0], others[1]), &c, depth) {
                push_dedup(&mut out, lifted);
            }
        }
    }
    out
}

/// Two trivariate members: Theorem-3 case (2,3).
fn pair_three_vars(
    p1: &Poly,
    p2: &Poly,
    pivot: usize,
    active: &[usize],
    depth: usize,
) -> Vec<AffineSubspace> {
    let mut out: Vec<AffineSubspace> = Vec::new();
    // both involve the pivot by choice; if one misses it, the resultant
    // convention hands it back unchanged which still works below
    let res = match resultant(p1, p2, pivot) {
        Ok(r) => r.normalized(),
        Err(_) => return out,
    };
    let class = classify_res(&res);
    if class != ResClass::NonZero {
        for c in split_on_common_factor(&[p1.clone(), p2.clone()], &[], active, depth) {
            push_dedup(&mut out, c);
        }
    }
    if class != ResClass::Zero {
        let others: Vec<usize> = active.iter().copied().filter(|&a| a != pivot).collect();
        let comps2 = single_in_axes(&res, others[0], others[1]);
        let sys = [p1.clone(), p2.clone()];
        for c in comps2 {
            for lifted in restrict_to_component(&sys, active, (others[0], others[1]), &c, depth) {
                push_dedup(&mut out, lifted);
            }
        }
    }
    out
}

/// Splits a system on a common linear factor of `pair`, keeping `others`.
fn split_on_common_factor(
    pair: &[Poly],
    others: &[Poly],
    active: &[usize],
    depth: usize,
) -> Vec<AffineSubspace> {
    let mut out = Vec::new();
    let common = common_linear_factors(pair);
    if let Some(l) = common.first() {
        let mut s1: Vec<Poly> = others.to_vec();
        s1.push(l.to_poly());
        for c in solve_system(&s1, active, depth + 1) {
            push_dedup(&mut out, c);
        }
        let mut s2: Vec<Poly> = others.to_vec();
        let mut ok = true;
        for p in pair {
            match divide_by_linear(p, l) {
                Ok(q) => s2.push(q),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            for c in solve_system(&s2, active, depth + 1) {
                push_dedup(&mut out, c);
            }
        }
    }
    out
}

/// Runs the bivariate single-polynomial solver on a polynomial living in two
/// arbitrary axes and maps the components back.
fn single_in_axes(p: &Poly, ax: usize, ay: usize) -> Vec<AffineSubspace> {
    with_canonical_axes(&[p.clone()], ax, ay, |canon| {
        bivariate_isolated(&canon[0]).unwrap_or_default()
    })
}

fn pair_in_axes(f: &Poly, g: &Poly, ax: usize, ay: usize) -> Vec<AffineSubspace> {
    with_canonical_axes(&[f.clone(), g.clone()], ax, ay, |canon| {
        bivariate_pair_isolated(&canon[0], &canon[1]).unwrap_or_default()
    })
}

fn with_canonical_axes(
    ps: &[Poly],
    ax: usize,
    ay: usize,
    run: impl Fn(&[Poly]) -> Vec<AffineSubspace>,
) -> Vec<AffineSubspace> {
    let mut perm = [0usize; 3];
    let spare = (0..3).find(|a| *a != ax && *a != ay).unwrap();
    perm[ax] = 0;
    perm[ay] = 1;
    perm[spare] = 2;
    let canon: Vec<Poly> = ps.iter().map(|p| p.permute_vars(perm)).collect();
    let comps = run(&canon);
    let mut inv = [0usize; 3];
    for a in 0..3 {
        inv[perm[a]] = a;
    }
    comps
        .into_iter()
        .map(|c| {
            let mp = |v: &[f64; 3]| {
                let mut o = [0.0; 3];
                for k in 0..3 {
                    o[inv[k]] = v[k];
                }
                o
            };
            AffineSubspace::new(3, mp(&c.point), c.dirs.iter().map(mp).collect())
        })
        .collect()
}

/// Restricts the full system to a 0- or 1-dimensional component in the plane
/// of the given pair of axes and solves the restricted system.
fn restrict_to_component(
    sys: &[Poly],
    active: &[usize],
    plane: (usize, usize),
    comp: &AffineSubspace,
    depth: usize,
) -> Vec<AffineSubspace> {
    let (a, b) = plane;
    if comp.dim() == 0 {
        // the fiber coordinates carry resultant-level error, so exact pinning
        // would reject genuine roots; enumerate pivot roots on the fiber and
        // polish against the full system instead
        return point_fiber_roots(sys, active, plane, [comp.point[a], comp.point[b]]);
    }
    let mut extended: Vec<Poly> = sys.to_vec();
    if comp.dim() == 1 {
        // normal of the line within its plane gives one linear equation
        let d = comp.dirs[0];
        let mut cv = [0.0; 3];
        cv[a] = -d[b];
        cv[b] = d[a];
        let c0 = -(cv[a] * comp.point[a] + cv[b] * comp.point[b]);
        extended.push(LinearPoly::new(c0, cv).to_poly());
    }
    solve_system(&extended, active, depth + 1)
}

/// Solutions of the system over a point fiber `(x_a, x_b) = q` of the
/// non-pivot plane: pivot roots of the restricted members, polished on the
/// unrestricted system and residual-filtered.
fn point_fiber_roots(
    sys: &[Poly],
    active: &[usize],
    plane: (usize, usize),
    q: [f64; 2],
) -> Vec<AffineSubspace> {
    let (a, b) = plane;
    let pivot = active.iter().copied().find(|&v| v != a && v != b);
    let Some(pivot) = pivot else { return vec![] };
    let restricted: Vec<Poly> = sys
        .iter()
        .map(|p| {
            p.substitute(a, &Poly::constant(q[0]))
                .substitute(b, &Poly::constant(q[1]))
                .compacted()
        })
        .collect();
    let scale_of = |p: &Poly| p.max_abs().max(1e-300);
    // tolerant vanish test: fiber error is resultant-level, not machine-level
    let fiber_tol = 1e-6 * growth([q[0].abs().max(q[1].abs()), 0.0, 0.0], 2);
    let live: Vec<(usize, &Poly)> = restricted
        .iter()
        .enumerate()
        .filter(|(i, r)| r.max_abs() > fiber_tol * scale_of(&sys[*i]))
        .map(|(i, r)| (i, r))
        .collect();
    if live.is_empty() {
        // the whole pivot line solves the system on this fiber
        let mut pt = [0.0; 3];
        pt[a] = q[0];
        pt[b] = q[1];
        let mut d = [0.0; 3];
        d[pivot] = 1.0;
        return vec![AffineSubspace::new(3, pt, vec![d])];
    }
    let Some((_, main)) = live.iter().find(|(_, r)| r.degree_in(pivot) >= 1) else {
        return vec![]; // live members constant in the pivot: inconsistent fiber
    };
    let Some((_, coeffs)) = main.as_univariate() else { return vec![] };
    let Ok(roots) = real_roots(&coeffs) else { return vec![] };
    let mut out = Vec::new();
    for r in roots {
        let mut x = [0.0; 3];
        x[a] = q[0];
        x[b] = q[1];
        x[pivot] = r;
        let x = polish_root(sys, x, active);
        let ok = sys
            .iter()
            .all(|p| p.eval(x).abs() <= 1e-7 * p.max_abs() * growth(x, p.total_degree()));
        if ok {
            out.push(AffineSubspace::new(3, x, vec![]));
        }
    }
    out
}

/// Single quadric in three variables: Theorem-3 case (1,3).
fn single_quadric(q: &Poly, depth: usize) -> Vec<AffineSubspace> {
    let _ = depth;
    let mut out: Vec<AffineSubspace> = Vec::new();
    // linear factors were stripped by the caller; find a squared variable
    let Some(v) = (0..3).find(|&a| q.degree_in(a) == 2) else {
        return out; // bilinear-only quadric: no isolated affine components
    };
    let coeffs = q.coeffs_in(v);
    let c2 = coeffs[2].coeff([0, 0, 0]);
    if c2.abs() < 1e-12 * q.max_abs() {
        return out;
    }
    let l3 = coeffs[1].scale(1.0 / c2);
    let q3 = coeffs[0].scale(1.0 / c2);
    // discriminant surface: qt = l3^2/4 - q3 over the other two variables
    let qt = l3.mul(&l3).scale(0.25).sub(&q3).compacted();
    let others: Vec<usize> = (0..3).filter(|&a| a != v).collect();
    if qt.is_zero_rel(1.0, 1e-10) {
        // q = (x + l3/2)^2: a double plane, i.e. a linear factor the caller
        // missed; recover it directly
        let mut cv = [0.0; 3];
        cv[v] = 1.0;
        cv[others[0]] = l3.coeff(unit_exp(others[0])) / 2.0;
        cv[others[1]] = l3.coeff(unit_exp(others[1])) / 2.0;
        let l = LinearPoly::new(l3.coeff([0, 0, 0]) / 2.0, cv);
        if let Some(h) = hyperplane_in(&[0, 1, 2], &l) {
            out.push(h);
        }
        return out;
    }
    let comps2 = with_canonical_axes(&[qt.clone()], others[0], others[1], |canon| {
        match conic_components(&canon[0]) {
            Ok(c) => c,
            Err(_) => vec![],
        }
    });
    // lift: x_v = -l3(y, z)/2 over each component
    let la = l3.coeff(unit_exp(others[0]));
    let lb = l3.coeff(unit_exp(others[1]));
    let l0 = l3.coeff([0, 0, 0]);
    let mut offset = [0.0; 3];
    offset[v] = -l0 / 2.0;
    let mut cols = [[0.0; 3]; 3];
    cols[others[0]][others[0]] = 1.0;
    cols[others[0]][v] = -la / 2.0;
    cols[others[1]][others[1]] = 1.0;
    cols[others[1]][v] = -lb / 2.0;
    for c in comps2 {
        out.push(c.map_affine(offset, &cols, 3));
    }
    out
}

fn unit_exp(axis: usize) -> [usize; 3] {
    let mut e = [0usize; 3];
    e[axis] = 1;
    e
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
    fn z() -> Poly {
        Poly::var(2)
    }

    #[test]
    fn squared_circle_yields_nothing() {
        // (x^2 + y^2 - 1)^2: res(f, f_x, x) = 0, factor splitting finds the
        // circle, which has no affine components
        let c = x().mul(&x()).add(&y().mul(&y())).add(&Poly::constant(-1.0));
        let f = c.mul(&c);
        let comps = bivariate_isolated(&f).unwrap();
        assert!(comps.is_empty(), "got {comps:?}");
    }

    #[test]
    fn isolated_origin() {
        let f = x().mul(&x()).add(&y().mul(&y()));
        let comps = bivariate_isolated(&f).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].dim(), 0);
        assert!(comps[0].point.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn line_times_positive() {
        // (x - y)(x^2 + y^2 + 1): only the line survives
        let f = x().sub(&y()).mul(
            &x().mul(&x()).add(&y().mul(&y())).add(&Poly::constant(1.0)),
        );
        let comps = bivariate_isolated(&f).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].dim(), 1);
        assert!(comps[0].contains_point([3.0, 3.0, 0.0], 1e-8));
    }

    #[test]
    fn pair_circle_line() {
        // x^2 + y^2 - 2 = 0 and x - y = 0 -> (1,1), (-1,-1)
        let f = x().mul(&x()).add(&y().mul(&y())).add(&Poly::constant(-2.0));
        let g = x().sub(&y());
        let comps = bivariate_pair_isolated(&f, &g).unwrap();
        assert_eq!(comps.len(), 2);
        let hit = |p: [f64; 3]| comps.iter().any(|c| c.dim() == 0 && c.contains_point(p, 1e-8));
        assert!(hit([1.0, 1.0, 0.0]));
        assert!(hit([-1.0, -1.0, 0.0]));
    }

    #[test]
    fn pair_shared_product() {
        // f = g = x*y: common factors give both axes
        let f = x().mul(&y());
        let comps = bivariate_pair_isolated(&f, &f).unwrap();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.dim() == 1));
        assert!(comps.iter().any(|c| c.contains_point([5.0, 0.0, 0.0], 1e-9)));
        assert!(comps.iter().any(|c| c.contains_point([0.0, 5.0, 0.0], 1e-9)));
    }

    #[test]
    fn pair_no_real_solutions() {
        let f = x().mul(&x()).add(&y().mul(&y())).add(&Poly::constant(1.0));
        let g = x().add(&y());
        assert!(bivariate_pair_isolated(&f, &g).unwrap().is_empty());
    }

    #[test]
    fn gradient_sphere() {
        let p = x().mul(&x()).add(&y().mul(&y())).add(&z().mul(&z()));
        match gradient_critical_subspaces(&p).unwrap() {
            GradientCritical::Subspaces(c) => {
                assert_eq!(c.len(), 1);
                assert_eq!(c[0].dim(), 0);
                assert!(c[0].point.iter().all(|v| v.abs() < 1e-10));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn gradient_two_planes() {
        // p = x^3 - 3x: dp/dx = 3x^2 - 3 -> planes x = 1, x = -1
        let p = x().mul(&x()).mul(&x()).sub(&x().scale(3.0));
        match gradient_critical_subspaces(&p).unwrap() {
            GradientCritical::Subspaces(c) => {
                assert_eq!(c.len(), 2);
                assert!(c.iter().all(|s| s.dim() == 2));
                assert!(c.iter().any(|s| s.contains_point([1.0, 4.0, -7.0], 1e-8)));
                assert!(c.iter().any(|s| s.contains_point([-1.0, 0.3, 2.0], 1e-8)));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn gradient_saddle_axis() {
        // p = x y: gradient (y, x, 0) vanishes on the z-axis
        let p = x().mul(&y());
        match gradient_critical_subspaces(&p).unwrap() {
            GradientCritical::Subspaces(c) => {
                assert_eq!(c.len(), 1);
                assert_eq!(c[0].dim(), 1);
                assert!(c[0].contains_point([0.0, 0.0, 9.0], 1e-9));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn gradient_constant_is_whole_space() {
        let p = Poly::constant(4.0);
        assert!(matches!(
            gradient_critical_subspaces(&p).unwrap(),
            GradientCritical::WholeSpace
        ));
    }

    #[test]
    fn gradient_affine_has_no_critical_points() {
        let p = Poly::linear(1.0, [1.0, 0.0, 0.0]);
        match gradient_critical_subspaces(&p).unwrap() {
            GradientCritical::Subspaces(c) => assert!(c.is_empty()),
            _ => panic!("affine polynomial has a constant nonzero gradient"),
        }
    }

    #[test]
    fn gradient_product_of_linears() {
        // p = (1 + x)(1 + y)(1 + z): critical set contains lines such as
        // {x = -1, y = -1}
        let p = Poly::linear(1.0, [1.0, 0.0, 0.0])
            .mul(&Poly::linear(1.0, [0.0, 1.0, 0.0]))
            .mul(&Poly::linear(1.0, [0.0, 0.0, 1.0]));
        match gradient_critical_subspaces(&p).unwrap() {
            GradientCritical::Subspaces(c) => {
                assert!(!c.is_empty());
                let hit = |p: [f64; 3]| c.iter().any(|s| s.contains_point(p, 1e-7));
                assert!(hit([-1.0, -1.0, 5.0]));
                assert!(hit([-1.0, 3.0, -1.0]));
                assert!(hit([2.0, -1.0, -1.0]));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn gradient_planted_minimum() {
        // positive definite quadratic with a known minimizer plus a small cubic
        let m = [0.5, -0.25, 0.75];
        let shift = |a: usize| Poly::var(a).sub(&Poly::constant(m[a]));
        let mut p = Poly::zero();
        for a in 0..3 {
            p = p.add(&shift(a).mul(&shift(a)).scale(1.0 + a as f64));
        }
        p = p.add(&shift(0).mul(&shift(1)).scale(0.3));
        p = p.add(&shift(0).mul(&shift(1)).mul(&shift(2)).scale(0.05));
        match gradient_critical_subspaces(&p).unwrap() {
            GradientCritical::Subspaces(c) => {
                assert!(
                    c.iter().any(|s| s.contains_point(m, 1e-6)),
                    "planted minimum missed: {c:?}"
                );
            }
            _ => panic!(),
        }
    }
}
