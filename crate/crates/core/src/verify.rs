//! Exact-arithmetic verification of a winning candidate: the hyperplane
//! system is re-solved over the rationals and the density is matched against
//! small closed forms (rationals and quadratic surds).

use crate::geom::Mat3;
use crate::polytope::Polytope;
use crate::search::{case4_adjust, PackingResult, SearchCase};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, Zero};

#[derive(Debug, Clone)]
pub struct ExactCheck {
    /// The winning basis satisfies the rational re-solve of the hyperplane
    /// system within 1e-12, with matching rank.
    pub solve_verified: bool,
    /// Closed form reproducing the density within 1e-12, when one exists.
    pub exact_form: Option<String>,
}

fn rat(x: f64) -> BigRational {
    BigRational::from_f64(x).expect("finite float")
}

/// Exact Gaussian elimination returning the rank of the rational matrix.
fn rational_rank(rows: &mut Vec<Vec<BigRational>>, ncols: usize) -> usize {
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let p = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &p;
                for c in 0..rows[r].len() {
                    let delta = &f * &rows[rank][c];
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Rebuilds the winning hyperplane system in exact rational arithmetic and
/// checks rank and the residual of the returned basis.
pub fn verify_solve(p0: &Polytope, result: &PackingResult) -> bool {
    let kind = result.case.kind();
    let vectors = kind.vectors();
    let sel = &result.selection;
    let k = sel.len();

    let row6 = if result.case == SearchCase::IV {
        match case4_adjust(p0, sel) {
            Some(h) => Some(h),
            None => return false,
        }
    } else {
        None
    };

    // rows over the rationals, embedding the f64 inputs exactly
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(k);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(k);
    for (slot, &fi) in sel.iter().enumerate() {
        let h = if slot == 5 {
            row6.unwrap_or(p0.halfspaces[fi])
        } else {
            p0.halfspaces[fi]
        };
        let u = vectors[slot];
        let mut row = vec![BigRational::zero(); 9];
        let n = [h.normal.x, h.normal.y, h.normal.z];
        for (j, &uj) in u.iter().enumerate() {
            if uj != 0 {
                for c in 0..3 {
                    row[3 * j + c] = rat(uj as f64) * rat(n[c]);
                }
            }
        }
        rows.push(row);
        rhs.push(rat(h.offset));
    }

    // rank over Q must match the float-side requirement rank = k
    let mut rank_rows = rows.clone();
    let rank = rational_rank(&mut rank_rows, 9);
    if rank != k {
        return false;
    }

    // exact residual of the basis
    let w = vec9(&result.basis);
    let tol = rat(1e-12) * rhs.iter().fold(rat(1.0), |m, b| if b.abs() > m { b.abs() } else { m });
    for (row, b) in rows.iter().zip(&rhs) {
        let mut acc = BigRational::zero();
        for (a, x) in row.iter().zip(&w) {
            acc += a * x;
        }
        if (acc - b).abs() > tol {
            return false;
        }
    }
    true
}

fn vec9(m: &Mat3) -> Vec<BigRational> {
    m.to_vec9().iter().map(|&v| rat(v)).collect()
}

/// Small-denominator rational reconstruction by continued fractions.
fn rational_form(x: f64) -> Option<(i64, i64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, 0i64, 1i64);
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let ai = a as i64;
        let (p2, q2) = (ai.checked_mul(p0)?.checked_add(p1)?, ai.checked_mul(q0)?.checked_add(q1)?);
        if q2 > 1_000_000 {
            return None;
        }
        p1 = p0;
        q1 = q0;
        p0 = p2;
        q0 = q2;
        if q0 != 0 && (x - p0 as f64 / q0 as f64).abs() <= 1e-12 * x.abs().max(1.0) {
            return Some((p0, q0));
        }
        let frac = v - a;
        if frac.abs() < 1e-15 {
            return None;
        }
        v = 1.0 / frac;
    }
    None
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Reconstructs the density as a rational or a quadratic surd
/// `(a + b sqrt(d)) / c` with small integers, matched within 1e-12.
pub fn exact_form(x: f64) -> Option<String> {
    if let Some((p, q)) = rational_form(x) {
        return Some(if q == 1 {
            format!("{p}")
        } else {
            format!("{p}/{q}")
        });
    }
    for d in [2i64, 3, 5, 6, 33, 66] {
        let sq = (d as f64).sqrt();
        for c in 1..=500i64 {
            let cx = c as f64 * x;
            // a + b sqrt(d) = c x
            let bmax = (cx.abs() / sq).ceil() as i64 + 500;
            for b in -bmax.min(600)..=bmax.min(600) {
                let a = (cx - b as f64 * sq).round();
                if a.abs() > 1e9 {
                    continue;
                }
                if (cx - a - b as f64 * sq).abs() <= 1e-12 * c as f64 {
                    if b == 0 {
                        continue; // rationals were handled above
                    }
                    let g = gcd(gcd(a as i64, b), c);
                    let (a, b, c) = (a as i64 / g, b / g, c / g);
                    let bs = if b == 1 {
                        format!("sqrt({d})")
                    } else if b == -1 {
                        format!("-sqrt({d})")
                    } else {
                        format!("{b}*sqrt({d})")
                    };
                    let num = if a == 0 {
                        bs
                    } else if b > 0 {
                        format!("{a}+{bs}")
                    } else {
                        format!("{a}{bs}")
                    };
                    return Some(if c == 1 {
                        num
                    } else {
                        format!("({num})/{c}")
                    });
                }
            }
        }
    }
    None
}

/// Full exact verification of a packing result.
pub fn verify_exact(p0: &Polytope, result: &PackingResult) -> ExactCheck {
    let solve_verified = verify_solve(p0, result);
    let exact = exact_form(result.density);
    ExactCheck {
        solve_verified,
        exact_form: if solve_verified { exact } else { None },
    }
}
