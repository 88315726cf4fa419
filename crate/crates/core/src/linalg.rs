//! Rank and affine solution sets of small dense linear systems.

use thiserror::Error;

/// System `A x = b` with `A` of size m x n, m <= 7, n <= 9 in all uses here.
#[derive(Debug, Clone)]
pub struct LinSystem {
    pub m: usize,
    pub n: usize,
    pub a: Vec<f64>, // row-major m x n
    pub b: Vec<f64>,
}

impl LinSystem {
    pub fn new(m: usize, n: usize) -> LinSystem {
        LinSystem {
            m,
            n,
            a: vec![0.0; m * n],
            b: vec![0.0; m],
        }
    }

    pub fn from_rows(rows: &[(Vec<f64>, f64)], n: usize) -> LinSystem {
        let m = rows.len();
        let mut s = LinSystem::new(m, n);
        for (i, (row, rhs)) in rows.iter().enumerate() {
            s.a[i * n..(i + 1) * n].copy_from_slice(row);
            s.b[i] = *rhs;
        }
        s
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }
}

/// Affine set `{ C + sum_j t_j M^j }` of solutions, with the `M^j` spanning
/// the null space of `A`.
#[derive(Debug, Clone)]
pub struct AffineSolutionSet {
    pub rank: usize,
    pub point: Vec<f64>,
    pub directions: Vec<Vec<f64>>,
}

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("system is inconsistent (rhs outside column span)")]
    Inconsistent,
}

/// Gauss-Jordan elimination with full pivoting. The pivot threshold and the
/// residual tolerance follow the stage-tightness rule: the downstream
/// determinant polynomials amplify error cubically, so this layer stays well
/// below the geometric tolerance.
pub fn solve_affine(sys: &LinSystem) -> Result<AffineSolutionSet, SolveError> {
    let (m, n) = (sys.m, sys.n);
    let amax = sys.a.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1e-300);
    let eps_lin = 1e-10 * amax.max(sys.b.iter().fold(0.0f64, |acc, v| acc.max(v.abs())));

    let mut a = sys.a.clone();
    let mut b = sys.b.clone();
    let mut col_of = (0..n).collect::<Vec<_>>(); // column permutation
    let mut rank = 0;

    for step in 0..m.min(n) {
        // full pivot over the remaining submatrix
        let mut best = (step, step, 0.0f64);
        for i in step..m {
            for j in step..n {
                let v = a[i * n + j].abs();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        let col_norm: f64 = (step..m).map(|i| a[i * n + best.1].powi(2)).sum::<f64>().sqrt();
        if best.2 <= 1e-11 * col_norm.max(amax) {
            break;
        }
        let (pi, pj, _) = best;
        if pi != step {
            for j in 0..n {
                a.swap(step * n + j, pi * n + j);
            }
            b.swap(step, pi);
        }
        if pj != step {
            for i in 0..m {
                a.swap(i * n + step, i * n + pj);
            }
            col_of.swap(step, pj);
        }
        let piv = a[step * n + step];
        for j in 0..n {
            a[step * n + j] /= piv;
        }
        b[step] /= piv;
        a[step * n + step] = 1.0;
        for i in 0..m {
            if i != step {
                let f = a[i * n + step];
                if f != 0.0 {
                    for j in 0..n {
                        a[i * n + j] -= f * a[step * n + j];
                    }
                    a[i * n + step] = 0.0;
                    b[i] -= f * b[step];
                }
            }
        }
        rank += 1;
    }

    // consistency: eliminated rows below the rank must have ~zero rhs
    for i in rank..m {
        if b[i].abs() > eps_lin.max(1e-12) {
            return Err(SolveError::Inconsistent);
        }
    }

    // particular solution: free variables zero
    let mut point = vec![0.0; n];
    for i in 0..rank {
        point[col_of[i]] = b[i];
    }
    // null space: one direction per free column
    let mut directions = Vec::with_capacity(n - rank);
    for f in rank..n {
        let mut d = vec![0.0; n];
        d[col_of[f]] = 1.0;
        for i in 0..rank {
            d[col_of[i]] = -a[i * n + f];
        }
        directions.push(d);
    }

    // residual check against the original system
    let res = residual_inf(sys, &point);
    if res > 10.0 * eps_lin.max(1e-12) {
        return Err(SolveError::Inconsistent);
    }

    Ok(AffineSolutionSet {
        rank,
        point,
        directions,
    })
}

pub fn residual_inf(sys: &LinSystem, x: &[f64]) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..sys.m {
        let s: f64 = (0..sys.n).map(|j| sys.at(i, j) * x[j]).sum();
        r = r.max((s - sys.b[i]).abs());
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_embedded() {
        let mut sys = LinSystem::new(3, 3);
        for i in 0..3 {
            sys.a[i * 3 + i] = 1.0;
        }
        sys.b = vec![1.0, 2.0, 3.0];
        let s = solve_affine(&sys).unwrap();
        assert_eq!(s.rank, 3);
        assert!(s.directions.is_empty());
        assert_eq!(s.point, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn one_row_line() {
        let sys = LinSystem::from_rows(&[(vec![1.0, 1.0], 2.0)], 2);
        let s = solve_affine(&sys).unwrap();
        assert_eq!(s.rank, 1);
        assert_eq!(s.directions.len(), 1);
        let d = &s.directions[0];
        assert!((d[0] + d[1]).abs() < 1e-12, "null direction must be (1,-1) up to scale");
        assert!((s.point[0] + s.point[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn inconsistent_detected() {
        let sys = LinSystem::from_rows(&[(vec![1.0, 0.0], 0.0), (vec![1.0, 0.0], 1.0)], 2);
        assert_eq!(solve_affine(&sys).unwrap_err(), SolveError::Inconsistent);
    }

    #[test]
    fn random_consistent_systems() {
        let mut state = 0x243f6a8885a308d3u64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..300 {
            let m = 1 + (rng().abs() * 6.0) as usize;
            let n = m + (rng().abs() * 3.0) as usize;
            let mut sys = LinSystem::new(m, n);
            let x0: Vec<f64> = (0..n).map(|_| 2.0 * rng()).collect();
            for i in 0..m {
                for j in 0..n {
                    sys.a[i * n + j] = rng();
                }
                sys.b[i] = (0..n).map(|j| sys.at(i, j) * x0[j]).sum();
            }
            let s = solve_affine(&sys).expect("constructed system must be consistent");
            assert!(residual_inf(&sys, &s.point) < 1e-9);
            // every point of the affine set solves the system
            let mut x = s.point.clone();
            for d in &s.directions {
                let t = rng();
                for k in 0..n {
                    x[k] += t * d[k];
                }
            }
            assert!(residual_inf(&sys, &x) < 1e-8);
            // transpose consistency of rank
            let mut tr = LinSystem::new(n, m);
            for i in 0..m {
                for j in 0..n {
                    tr.a[j * m + i] = sys.at(i, j);
                }
            }
            tr.b = vec![0.0; n];
            let st = solve_affine(&tr).unwrap();
            assert_eq!(s.rank, st.rank, "rank(A) != rank(A^T)");
        }
    }
}
