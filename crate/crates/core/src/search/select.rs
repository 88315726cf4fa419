//! Candidate facet selections and their LP feasibility test (step R0).

use super::testset::{SearchCase, TestSetKind};
use super::triples::TripleSet;
use crate::lp::{lp_feasible, LpOutcome, LpProblem};
use crate::polytope::Polytope;

/// Facet indices `l_1 .. l_k` assigned to the test vectors; duplicates across
/// slots are permitted (the LP decides whether they are consistent).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    pub facets: Vec<usize>,
}

/// Streams the 6-tuples satisfying the triple-set conditions
/// `(l2,l3,l4), (l3,l1,l5), (l1,l2,l6) in G`, lexicographically, with `l1`
/// restricted to one facet per antipodal pair.
pub fn for_each_six_tuple(p0: &Polytope, ts: &TripleSet, mut f: impl FnMut(&[usize; 6])) {
    let n = p0.n_facets();
    for l1 in 0..n {
        if p0.symmetric && p0.antipode[l1] < l1 {
            continue;
        }
        for &l2 in &ts.per_facet[l1] {
            for &l3 in &ts.per_facet[l1] {
                if !ts.per_facet[l2].contains(&l3) {
                    continue;
                }
                for &l4 in ts.completions(l2, l3) {
                    for &l5 in ts.completions(l3, l1) {
                        for &l6 in ts.completions(l1, l2) {
                            f(&[l1, l2, l3, l4, l5, l6]);
                        }
                    }
                }
            }
        }
    }
}

/// The twelve selections equivalent to `sel` under reordering of the basis
/// vectors and global negation. A permutation pi of the basis permutes the
/// first three slots and their companion pair slots; odd permutations flip
/// the difference vectors of the first test-set kind, landing them on
/// antipodal facets. Negating the basis sends every slot to its antipode.
fn equivalent_images(p0: &Polytope, sel: &[usize; 6], sigma: i32) -> [[usize; 6]; 12] {
    // (permutation of {0,1,2}, parity)
    const PERMS: [([usize; 3], bool); 6] = [
        ([0, 1, 2], true),
        ([0, 2, 1], false),
        ([1, 0, 2], false),
        ([1, 2, 0], true),
        ([2, 0, 1], true),
        ([2, 1, 0], false),
    ];
    let anti = |i: usize| p0.antipode[i];
    let mut out = [[0usize; 6]; 12];
    for (k, (perm, even)) in PERMS.iter().enumerate() {
        let mut img = [0usize; 6];
        for s in 0..3 {
            img[s] = sel[perm[s]];
        }
        // pair slots: slot 3 pairs {1,2}, slot 4 pairs {2,0}, slot 5 pairs {0,1}
        let pair_slot = |a: usize, b: usize| match (a.min(b), a.max(b)) {
            (1, 2) => 3,
            (0, 2) => 4,
            _ => 5,
        };
        for (s, (a, b)) in [(3, (1usize, 2usize)), (4, (2, 0)), (5, (0, 1))] {
            let v = sel[pair_slot(perm[a], perm[b])];
            img[s] = if sigma < 0 && !even { anti(v) } else { v };
        }
        out[2 * k] = img;
        let mut neg = [0usize; 6];
        for s in 0..6 {
            neg[s] = anti(img[s]);
        }
        out[2 * k + 1] = neg;
    }
    out
}

/// True when `sel` is the lexicographic representative of its equivalence
/// class under basis reordering and negation. Skipping the rest of the class
/// preserves the minimum because equivalent selections carry the same
/// lattices with the same determinants.
pub fn is_canonical_six_tuple(p0: &Polytope, sel: &[usize; 6], sigma: i32) -> bool {
    equivalent_images(p0, sel, sigma)
        .iter()
        .all(|img| sel.as_slice() <= img.as_slice())
}

/// The six basis-order images of a selection under the positive test-set
/// kinds, where the pair slots permute without antipodes.
pub fn basis_order_images(sel: &[usize; 6]) -> [[usize; 6]; 6] {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let pair_slot = |a: usize, b: usize| match (a.min(b), a.max(b)) {
        (1, 2) => 3,
        (0, 2) => 4,
        _ => 5,
    };
    let mut out = [[0usize; 6]; 6];
    for (k, perm) in PERMS.iter().enumerate() {
        for s in 0..3 {
            out[k][s] = sel[perm[s]];
        }
        for (s, (a, b)) in [(3, (1usize, 2usize)), (4, (2, 0)), (5, (0, 1))] {
            out[k][s] = sel[pair_slot(perm[a], perm[b])];
        }
    }
    out
}

/// Full selection stream for a case: 6-tuples for cases I/II, and every
/// 6-tuple crossed with all facets in the 7th slot for cases III/IV.
pub fn for_each_selection(
    p0: &Polytope,
    ts: &TripleSet,
    case: SearchCase,
    mut f: impl FnMut(&Selection),
) {
    let k = case.kind().count();
    for_each_six_tuple(p0, ts, |six| {
        if k == 6 {
            f(&Selection {
                facets: six.to_vec(),
            });
        } else {
            for l7 in 0..p0.n_facets() {
                let mut v = six.to_vec();
                v.push(l7);
                f(&Selection { facets: v });
            }
        }
    });
}

/// Builds the feasibility LP of step R0: nine unknowns (the columns of `W`),
/// one hyperplane equality per test vector, and the edge-neighbor halfspace
/// inequalities that pin each `u^i_W` into its facet.
pub fn selection_lp(p0: &Polytope, sel: &[usize], kind: TestSetKind) -> LpProblem {
    let vectors = kind.vectors();
    let mut lp = LpProblem::new(9);
    for (slot, &fi) in sel.iter().enumerate() {
        let u = vectors[slot];
        let h = &p0.halfspaces[fi];
        lp.eq(coeff_row(h.normal, u), h.offset);
        for &m in &p0.facets[fi].neighbors {
            let hm = &p0.halfspaces[m];
            lp.le(coeff_row(hm.normal, u), hm.offset);
        }
    }
    lp
}

/// Row of `a . (W u) = sum_j u_j (a . w^j)` over the flattened columns.
fn coeff_row(a: crate::geom::Vec3, u: [i32; 3]) -> Vec<f64> {
    let mut row = vec![0.0; 9];
    for (j, &uj) in u.iter().enumerate() {
        if uj != 0 {
            row[3 * j] = uj as f64 * a.x;
            row[3 * j + 1] = uj as f64 * a.y;
            row[3 * j + 2] = uj as f64 * a.z;
        }
    }
    row
}

/// Step R0 with a box short-circuit: the test-vector relations force the
/// facet-box Minkowski combinations to meet, which is necessary for LP
/// feasibility and far cheaper to check.
pub fn selection_feasible(p0: &Polytope, sel: &[usize], kind: TestSetKind) -> bool {
    if !selection_boxes_compatible(p0, sel, kind) {
        return false;
    }
    matches!(
        lp_feasible(&selection_lp(p0, sel, kind)),
        LpOutcome::Feasible(_)
    )
}

pub fn selection_boxes_compatible(p0: &Polytope, sel: &[usize], kind: TestSetKind) -> bool {
    let sigma = kind.sigma();
    let eps = 10.0 * p0.geo_tol();
    // u4 = u2 + s u3, u5 = u3 + s u1, u6 = u1 + s u2
    let rel = [(1usize, 2usize, 3usize), (2, 0, 4), (0, 1, 5)];
    for (i, j, k) in rel {
        let sum = p0.facet_box(sel[i]).minkowski(&p0.facet_box(sel[j]), sigma);
        if !sum.intersects_eps(&p0.facet_box(sel[k]), eps) {
            return false;
        }
    }
    if sel.len() == 7 {
        // u7 = u1 + u4 = u2 + u5 = u3 + u6
        for (i, j) in [(0usize, 3usize), (1, 4), (2, 5)] {
            let sum = p0.facet_box(sel[i]).minkowski(&p0.facet_box(sel[j]), 1);
            if !sum.intersects_eps(&p0.facet_box(sel[6]), eps) {
                return false;
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
    use crate::search::triples::build_triple_set;

    fn cube_p0() -> Polytope {
        let p = from_halfspaces(&crate::polytope::cube_halfspaces(1.0)).unwrap();
        difference_body(&p).unwrap()
    }

    fn facet(p: &Polytope, n: crate::geom::Vec3) -> usize {
        p.halfspaces
            .iter()
            .position(|h| (h.normal - n).norm() < 1e-9)
            .unwrap()
    }

    #[test]
    fn cube_identity_selection_feasible() {
        // contacts of W = 2I on [-2,2]^3, test set of the second kind:
        // u1=(2,0,0) in x=2, u2 in y=2, u3 in z=2, u4=(0,2,2) in y=2,
        // u5=(2,0,2) in x=2, u6=(2,2,0) in x=2
        let p0 = cube_p0();
        let fx = facet(&p0, vec3(1.0, 0.0, 0.0));
        let fy = facet(&p0, vec3(0.0, 1.0, 0.0));
        let fz = facet(&p0, vec3(0.0, 0.0, 1.0));
        let sel = [fx, fy, fz, fy, fx, fx];
        assert!(selection_feasible(&p0, &sel, TestSetKind::Two));
    }

    #[test]
    fn escaping_sum_infeasible() {
        // u1 and u2 both on the facet x = 2 forces u6 = u1 + u2 onto x = 4
        let p0 = cube_p0();
        let fx = facet(&p0, vec3(1.0, 0.0, 0.0));
        let fy = facet(&p0, vec3(0.0, 1.0, 0.0));
        let fz = facet(&p0, vec3(0.0, 0.0, 1.0));
        for l6 in 0..p0.n_facets() {
            assert!(!selection_feasible(&p0, &[fx, fx, fz, fy, fx, l6], TestSetKind::Two));
        }
    }

    #[test]
    fn feasible_selection_triples_in_g() {
        // Eq. (8) implies the three triple memberships
        let p0 = cube_p0();
        let ts = build_triple_set(&p0, 1);
        let mut checked = 0;
        for_each_six_tuple(&p0, &ts, |six| {
            if selection_feasible(&p0, six, TestSetKind::Two) {
                assert!(ts.contains(six[1], six[2], six[3]));
                assert!(ts.contains(six[2], six[0], six[4]));
                assert!(ts.contains(six[0], six[1], six[5]));
                checked += 1;
            }
        });
        assert!(checked > 0);
    }

    #[test]
    fn enumeration_is_sound_and_complete_vs_bruteforce() {
        // every S0-feasible 6^6 tuple (with l1 antipodally normalized) must
        // appear in the G-filtered stream; every emitted tuple satisfies G
        let p0 = cube_p0();
        let n = p0.n_facets();
        let ts = build_triple_set(&p0, 1);
        let mut emitted = std::collections::HashSet::new();
        for_each_six_tuple(&p0, &ts, |six| {
            emitted.insert(*six);
        });
        let mut idx = [0usize; 6];
        loop {
            let sel = idx;
            if p0.antipode[sel[0]] >= sel[0] && selection_feasible(&p0, &sel, TestSetKind::Two) {
                assert!(
                    emitted.contains(&sel),
                    "feasible selection {sel:?} missed by G-filter"
                );
            }
            // advance counter
            let mut pos = 5;
            loop {
                idx[pos] += 1;
                if idx[pos] < n {
                    break;
                }
                idx[pos] = 0;
                if pos == 0 {
                    return;
                }
                pos -= 1;
            }
        }
    }
}
