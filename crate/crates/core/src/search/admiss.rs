//! Admissibility certification (steps R2 and R3).

use super::param::{contact_points, det_polynomial, exclusion_points, ParamFamily};
use super::testset::SearchCase;
use crate::geom::{orthonormalize9, Mat3, Vec3};
use crate::lp::{lp_feasible, LpOutcome, LpProblem};
use crate::poly::{gradient_critical_subspaces, GradientCritical};
use crate::polytope::{Classification, Polytope};

/// An affine family of matrices restricted to one critical subspace.
#[derive(Debug, Clone)]
pub struct MatrixFamily {
    pub base: Mat3,
    pub dirs: Vec<Mat3>,
}

impl MatrixFamily {
    pub fn at(&self, mu: &[f64]) -> Mat3 {
        let mut w = self.base;
        for (j, d) in self.dirs.iter().enumerate() {
            w = w + *d * mu[j];
        }
        w
    }
}

/// Step R2: affine subspaces of the parameter space on which the determinant
/// is constant and which cover every local extremum, mapped back to matrix
/// space. A constant determinant yields the whole family.
pub fn critical_subspaces(fam: &ParamFamily) -> Vec<MatrixFamily> {
    if fam.dirs.is_empty() {
        return vec![MatrixFamily {
            base: fam.base,
            dirs: vec![],
        }];
    }
    let p = det_polynomial(fam);
    let crit = match gradient_critical_subspaces(&p) {
        Ok(c) => c,
        Err(_) => return vec![],
    };
    match crit {
        GradientCritical::WholeSpace => vec![MatrixFamily {
            base: fam.base,
            dirs: fam.dirs.clone(),
        }],
        GradientCritical::Subspaces(subs) => {
            let mut out = Vec::with_capacity(subs.len());
            for s in subs {
                let mut base = fam.base;
                for (j, d) in fam.dirs.iter().enumerate() {
                    base = base + *d * s.point[j];
                }
                let mut dirs9: Vec<[f64; 9]> = Vec::new();
                for dir in &s.dirs {
                    let mut m = Mat3::ZERO;
                    for (j, d) in fam.dirs.iter().enumerate() {
                        m = m + *d * dir[j];
                    }
                    dirs9.push(m.to_vec9());
                }
                orthonormalize9(&mut dirs9);
                out.push(MatrixFamily {
                    base,
                    dirs: dirs9.iter().map(|d| Mat3::from_vec9(d)).collect(),
                });
            }
            out
        }
    }
}

/// A certified admissible basis.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub basis: Mat3,
    pub det: f64,
    pub contacts: Vec<Vec3>,
    pub marginal: bool,
}

/// Verdict bookkeeping of the Lemma-15 search within one subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SubspaceOutcome {
    Admissible,
    EmptySet,
    DegenerateDet,
    /// Exclusion conditions failed at the found point; the configuration
    /// reappears under case III, so it is dropped here by default.
    DeferredToIII,
}

/// Step R3: find a basis of an admissible lattice within the affine
/// subspace, or report that none is certified here.
pub fn admissible_in_subspace(
    p0: &Polytope,
    family: &MatrixFamily,
    case: SearchCase,
    sel: &[usize],
    exhaustive_exclusions: bool,
) -> (Option<Candidate>, SubspaceOutcome) {
    let kind = case.kind();
    let tol = 1e-7 * p0.scale;

    let w_star = if family.dirs.is_empty() {
        // direct predicate check
        let w = family.base;
        let on_bd = contact_points(&w, kind)
            .iter()
            .all(|&c| p0.classify_point(c, tol) == Classification::Boundary);
        if !on_bd {
            return (None, SubspaceOutcome::EmptySet);
        }
        w
    } else {
        let mut lp = LpProblem::new(family.dirs.len());
        add_membership_rows(&mut lp, p0, family, sel, kind, case);
        match lp_feasible(&lp) {
            LpOutcome::Empty => return (None, SubspaceOutcome::EmptySet),
            LpOutcome::Feasible(mu) => family.at(&mu),
        }
    };

    let det = w_star.det();
    if det.abs() <= 1e-12 * p0.scale.powi(3).max(1.0) {
        return (None, SubspaceOutcome::DegenerateDet);
    }

    // exclusion conditions of the admissibility criteria
    let excl = exclusion_points(&w_star, case);
    let violated = excl
        .iter()
        .any(|&e| p0.classify_point(e, tol) == Classification::Interior);
    if violated {
        if !exhaustive_exclusions || family.dirs.is_empty() {
            return (None, SubspaceOutcome::DeferredToIII);
        }
        // scan the per-facet exclusion systems for a point satisfying them
        if let Some(w) = exclusion_scan(p0, family, case, sel) {
            let cand = finish_candidate(p0, w, case);
            return match cand {
                Some(c) => (Some(c), SubspaceOutcome::Admissible),
                None => (None, SubspaceOutcome::DeferredToIII),
            };
        }
        return (None, SubspaceOutcome::DeferredToIII);
    }

    match finish_candidate(p0, w_star, case) {
        Some(c) => (Some(c), SubspaceOutcome::Admissible),
        None => (None, SubspaceOutcome::EmptySet),
    }
}

fn finish_candidate(p0: &Polytope, w: Mat3, case: SearchCase) -> Option<Candidate> {
    if !check_admissible(p0, &w, case) {
        return None;
    }
    let contacts = contact_points(&w, case.kind());
    // strictness margin of the exclusion points
    let marginal = exclusion_points(&w, case).iter().any(|&e| {
        let worst = p0
            .halfspaces
            .iter()
            .fold(f64::NEG_INFINITY, |m, h| m.max(h.excess(e)));
        worst.abs() <= 10.0 * crate::lp::EPS_STRICT * p0.scale
    });
    Some(Candidate {
        basis: w,
        det: w.det().abs(),
        contacts,
        marginal,
    })
}

/// Membership rows of the set `A`: each test vector stays within the
/// edge-neighbor halfspaces of its facet. For case IV the sixth vector is
/// additionally pinned onto its facet hyperplane, which the parameterization
/// replaced by the adjusted supporting plane.
fn add_membership_rows(
    lp: &mut LpProblem,
    p0: &Polytope,
    family: &MatrixFamily,
    sel: &[usize],
    kind: super::testset::TestSetKind,
    case: SearchCase,
) {
    let vectors = kind.vectors();
    let r = family.dirs.len();
    let apply = |m: &Mat3, u: [i32; 3]| -> Vec3 {
        m.col[0] * u[0] as f64 + m.col[1] * u[1] as f64 + m.col[2] * u[2] as f64
    };
    for (slot, &fi) in sel.iter().enumerate() {
        let u = vectors[slot];
        let base_pos = apply(&family.base, u);
        let dir_pos: Vec<Vec3> = family.dirs.iter().map(|d| apply(d, u)).collect();
        if case == SearchCase::IV && slot == 5 {
            let h = &p0.halfspaces[fi];
            let row: Vec<f64> = (0..r).map(|j| h.normal.dot(dir_pos[j])).collect();
            lp.eq(row, h.offset - h.normal.dot(base_pos));
        }
        for &m in &p0.facets[fi].neighbors {
            let h = &p0.halfspaces[m];
            let row: Vec<f64> = (0..r).map(|j| h.normal.dot(dir_pos[j])).collect();
            lp.le(row, h.offset - h.normal.dot(base_pos));
        }
    }
}

/// The exhaustive exclusion mode: for case II one extra halfspace row per
/// facet, for case I one per facet triple, asking the exclusion points to
/// leave the interior through that facet.
fn exclusion_scan(
    p0: &Polytope,
    family: &MatrixFamily,
    case: SearchCase,
    sel: &[usize],
) -> Option<Mat3> {
    let kind = case.kind();
    let r = family.dirs.len();
    let n = p0.n_facets();
    let apply = |m: &Mat3, c: [f64; 3]| -> Vec3 {
        m.col[0] * c[0] + m.col[1] * c[1] + m.col[2] * c[2]
    };
    let coords: Vec<[f64; 3]> = match case {
        SearchCase::I => vec![[-1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [1.0, 1.0, -1.0]],
        SearchCase::II => vec![[1.0, 1.0, 1.0]],
        _ => return None,
    };
    let mut facet_choice = vec![0usize; coords.len()];
    loop {
        let mut lp = LpProblem::new(r);
        add_membership_rows(&mut lp, p0, family, sel, kind, case);
        for (ei, c) in coords.iter().enumerate() {
            let h = &p0.halfspaces[facet_choice[ei]];
            let base_pos = apply(&family.base, *c);
            let row: Vec<f64> = (0..r)
                .map(|j| -h.normal.dot(apply(&family.dirs[j], *c)))
                .collect();
            lp.le(row, h.normal.dot(base_pos) - h.offset);
        }
        if let LpOutcome::Feasible(mu) = lp_feasible(&lp) {
            return Some(family.at(&mu));
        }
        // next facet assignment
        let mut pos = 0;
        loop {
            if pos == coords.len() {
                return None;
            }
            facet_choice[pos] += 1;
            if facet_choice[pos] < n {
                break;
            }
            facet_choice[pos] = 0;
            pos += 1;
        }
    }
}

/// The admissibility criteria: the test set on the boundary plus the
/// exclusion points outside the interior.
pub fn check_admissible(p0: &Polytope, w: &Mat3, case: SearchCase) -> bool {
    let tol = 1e-7 * p0.scale;
    let on_bd = contact_points(w, case.kind())
        .iter()
        .all(|&c| p0.classify_point(c, tol) == Classification::Boundary);
    if !on_bd {
        return false;
    }
    exclusion_points(w, case)
        .iter()
        .all(|&e| p0.classify_point(e, tol) != Classification::Interior)
}

/// Independent admissibility oracle: enumerate every lattice point within
/// the circumscribed ball and require that none besides the origin lies in
/// the interior.
pub fn verify_admissible_bruteforce(p0: &Polytope, w: &Mat3) -> bool {
    let det = w.det();
    if det.abs() < 1e-12 {
        return false;
    }
    let inv = w.inverse().expect("nonsingular basis");
    let r = p0.scale * (1.0 + 1e-9);
    let rows = inv.transpose();
    let bound = |row: Vec3| (row.norm() * r).floor() as i64;
    let (bx, by, bz) = (bound(rows.col[0]), bound(rows.col[1]), bound(rows.col[2]));
    let tol = p0.geo_tol();
    for mx in -bx..=bx {
        for my in -by..=by {
            for mz in -bz..=bz {
                if mx == 0 && my == 0 && mz == 0 {
                    continue;
                }
                let z = w.col[0] * mx as f64 + w.col[1] * my as f64 + w.col[2] * mz as f64;
                if z.norm() > r {
                    continue;
                }
                if p0.classify_point(z, tol) == Classification::Interior {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::vec3;
    use crate::polytope::{difference_body, from_halfspaces};

    fn cube_p0() -> Polytope {
        let p = from_halfspaces(&crate::polytope::cube_halfspaces(1.0)).unwrap();
        difference_body(&p).unwrap()
    }

    #[test]
    fn cube_2i_admissible_case2() {
        let p0 = cube_p0();
        let w = Mat3::scale(2.0);
        assert!(check_admissible(&p0, &w, SearchCase::II));
        assert!(verify_admissible_bruteforce(&p0, &w));
        let w1 = Mat3::identity();
        assert!(!check_admissible(&p0, &w1, SearchCase::II));
        assert!(!verify_admissible_bruteforce(&p0, &w1));
    }

    #[test]
    fn octahedron_paper_basis_admissible() {
        // the known critical basis of the scaled octahedron
        let po = from_halfspaces(&crate::polytope::octahedron_halfspaces(1.0)).unwrap();
        let p0 = difference_body(&po).unwrap(); // 2 P_o
        let w = Mat3::from_cols(
            vec3(1.0 / 3.0, 1.0 / 2.0, 1.0 / 6.0),
            vec3(-1.0 / 6.0, -1.0 / 3.0, 1.0 / 2.0),
            vec3(-1.0 / 2.0, 1.0 / 6.0, -1.0 / 3.0),
        ) * 2.0;
        assert!(check_admissible(&p0, &w, SearchCase::II));
        assert!(verify_admissible_bruteforce(&p0, &w));
        // det(2M) = 8 |det M| = 8 * 19/108 = 38/27
        assert!((w.det().abs() - 38.0 / 27.0).abs() < 1e-9);
    }

    #[test]
    fn r0_family_direct_check() {
        let p0 = cube_p0();
        let fam = MatrixFamily {
            base: Mat3::scale(2.0),
            dirs: vec![],
        };
        let fx = 0; // facet indices are irrelevant for a point family
        let sel = [fx; 6];
        let (cand, outcome) =
            admissible_in_subspace(&p0, &fam, SearchCase::II, &sel, false);
        assert_eq!(outcome, SubspaceOutcome::Admissible);
        let c = cand.unwrap();
        assert!((c.det - 8.0).abs() < 1e-9);
        // (1,1,1)_W = (2,2,2) is a vertex of the body: marginal by definition
        assert!(c.marginal);
    }
}
