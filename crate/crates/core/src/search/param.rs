//! Parameterization of the hyperplane-constrained basis space (step R1) and
//! its determinant polynomial.

use super::testset::{SearchCase, TestSetKind};
use crate::geom::{orthonormalize9, Halfspace, Mat3, Vec3};
use crate::linalg::{solve_affine, LinSystem};
use crate::poly::Poly;
use crate::polytope::Polytope;

/// Affine family `W(lambda) = C + sum_j lambda_j M^j` of matrices placing
/// every test vector on its selected hyperplane.
#[derive(Debug, Clone)]
pub struct ParamFamily {
    pub base: Mat3,
    pub dirs: Vec<Mat3>,
    pub rank: usize,
}

impl ParamFamily {
    pub fn at(&self, lambda: &[f64]) -> Mat3 {
        let mut w = self.base;
        for (j, d) in self.dirs.iter().enumerate() {
            w = w + *d * lambda[j];
        }
        w
    }
}

/// Outcome of step R1; rank deficiency is a skip signal, not a failure.
#[derive(Debug)]
pub enum Parameterized {
    Family(ParamFamily),
    RankDeficient,
}

/// Assembles the k x 9 hyperplane system and parameterizes its solution set.
/// `row6_override` substitutes the sixth row's hyperplane (case IV).
pub fn parameterize_selection(
    p0: &Polytope,
    sel: &[usize],
    kind: TestSetKind,
    row6_override: Option<Halfspace>,
) -> Parameterized {
    let vectors = kind.vectors();
    let k = sel.len();
    let mut sys = LinSystem::new(k, 9);
    for (slot, &fi) in sel.iter().enumerate() {
        let h = if slot == 5 {
            row6_override.unwrap_or(p0.halfspaces[fi])
        } else {
            p0.halfspaces[fi]
        };
        let u = vectors[slot];
        for (j, &uj) in u.iter().enumerate() {
            if uj != 0 {
                sys.a[slot * 9 + 3 * j] = uj as f64 * h.normal.x;
                sys.a[slot * 9 + 3 * j + 1] = uj as f64 * h.normal.y;
                sys.a[slot * 9 + 3 * j + 2] = uj as f64 * h.normal.z;
            }
        }
        sys.b[slot] = h.offset;
    }
    let Ok(sol) = solve_affine(&sys) else {
        return Parameterized::RankDeficient; // inconsistent: no basis places the test set
    };
    if sol.rank < k {
        return Parameterized::RankDeficient;
    }
    let mut dirs9: Vec<[f64; 9]> = sol
        .directions
        .iter()
        .map(|d| {
            let mut a = [0.0; 9];
            a.copy_from_slice(d);
            a
        })
        .collect();
    orthonormalize9(&mut dirs9);
    Parameterized::Family(ParamFamily {
        base: Mat3::from_vec9(&sol.point),
        dirs: dirs9.iter().map(|d| Mat3::from_vec9(d)).collect(),
        rank: sol.rank,
    })
}

/// The determinant polynomial `p(lambda) = det(C + sum lambda_j M^j)`,
/// expanded symbolically; total degree at most 3.
pub fn det_polynomial(fam: &ParamFamily) -> Poly {
    debug_assert!(fam.dirs.len() <= 3);
    // entries as linear polynomials in the parameters
    let entry = |r: usize, c: usize| -> Poly {
        let mut cv = [0.0; 3];
        for (j, d) in fam.dirs.iter().enumerate() {
            cv[j] = component(d, r, c);
        }
        Poly::linear(component(&fam.base, r, c), cv)
    };
    let m: Vec<Vec<Poly>> = (0..3)
        .map(|r| (0..3).map(|c| entry(r, c)).collect())
        .collect();
    let det2 = |r1: usize, r2: usize, c1: usize, c2: usize| {
        m[r1][c1].mul(&m[r2][c2]).sub(&m[r1][c2].mul(&m[r2][c1]))
    };
    m[0][0]
        .mul(&det2(1, 2, 1, 2))
        .sub(&m[0][1].mul(&det2(1, 2, 0, 2)))
        .add(&m[0][2].mul(&det2(1, 2, 0, 1)))
        .compacted()
}

fn component(m: &Mat3, r: usize, c: usize) -> f64 {
    match r {
        0 => m.col[c].x,
        1 => m.col[c].y,
        _ => m.col[c].z,
    }
}

/// Case IV adjustment: solve `l1 v1 + l2 v2 + l3 v3 = v6` with `l6 = 1`;
/// when `l1, l2 > 0` the supporting hyperplane with normal `l1 v1 + l2 v2`
/// replaces the sixth row. `None` is a skip signal.
pub fn case4_adjust(p0: &Polytope, sel: &[usize]) -> Option<Halfspace> {
    let v1 = p0.halfspaces[sel[0]].normal;
    let v2 = p0.halfspaces[sel[1]].normal;
    let v3 = p0.halfspaces[sel[2]].normal;
    let v6 = p0.halfspaces[sel[5]].normal;
    let m = Mat3::from_cols(v1, v2, v3);
    let lambda = m.solve(v6)?;
    if lambda.x <= 1e-9 || lambda.y <= 1e-9 {
        return None;
    }
    let n = v1 * lambda.x + v2 * lambda.y;
    let norm = n.norm();
    if norm <= 1e-12 {
        return None;
    }
    let n = n / norm;
    // supporting offset: the support function over the vertices
    let b = p0
        .vertices
        .iter()
        .fold(f64::NEG_INFINITY, |m, &v| m.max(n.dot(v)));
    Some(Halfspace::new(n, b))
}

/// The positions of the test vectors under a basis.
pub fn contact_points(w: &Mat3, kind: TestSetKind) -> Vec<Vec3> {
    kind.vectors()
        .iter()
        .map(|u| {
            w.col[0] * u[0] as f64 + w.col[1] * u[1] as f64 + w.col[2] * u[2] as f64
        })
        .collect()
}

/// Exclusion points of the admissibility criteria for cases I and II.
pub fn exclusion_points(w: &Mat3, case: SearchCase) -> Vec<Vec3> {
    let combine = |a: f64, b: f64, c: f64| w.col[0] * a + w.col[1] * b + w.col[2] * c;
    match case {
        SearchCase::I => vec![
            combine(-1.0, 1.0, 1.0),
            combine(1.0, -1.0, 1.0),
            combine(1.0, 1.0, -1.0),
        ],
        SearchCase::II => vec![combine(1.0, 1.0, 1.0)],
        _ => vec![],
    }
}
