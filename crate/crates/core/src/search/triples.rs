//! The triple set `G = {(F_i, F_j, F_k) : (F_i + sigma F_j) meets F_k}` and
//! its per-facet slices, built by seeded breadth-first expansion with box
//! pruning and certified by small LP feasibility problems.

use crate::geom::Vec3;
use crate::lp::{lp_feasible, LpOutcome, LpProblem};
use crate::polytope::Polytope;
use std::collections::HashMap;

#[derive(Debug)]
pub struct TripleSet {
    pub sigma: i32,
    /// `G(F_i)`: facets j such that some triple (i, j, k) certifies.
    pub per_facet: Vec<Vec<usize>>,
    /// All certified completions: `(i, j) -> sorted ks`.
    completions: HashMap<(u32, u32), Vec<usize>>,
}

impl TripleSet {
    pub fn completions(&self, i: usize, j: usize) -> &[usize] {
        self.completions
            .get(&(i as u32, j as u32))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    pub fn contains(&self, i: usize, j: usize, k: usize) -> bool {
        self.completions(i, j).binary_search(&k).is_ok()
    }

    pub fn triple_count(&self) -> usize {
        self.completions.values().map(|v| v.len()).sum()
    }
}

/// LP certificate of `(F_i + sigma F_j) meets F_k`: a pair of points, one in
/// each facet, whose combination lies in the third facet. Facet membership is
/// the facet hyperplane equality plus the edge-neighbor halfplanes.
pub fn triple_certified(p0: &Polytope, i: usize, j: usize, k: usize, sigma: i32) -> bool {
    let s = sigma as f64;
    let mut lp = LpProblem::new(6);
    let row1 = |n: Vec3| vec![n.x, n.y, n.z, 0.0, 0.0, 0.0];
    let row2 = |n: Vec3| vec![0.0, 0.0, 0.0, n.x, n.y, n.z];
    let row12 = |n: Vec3| vec![n.x, n.y, n.z, s * n.x, s * n.y, s * n.z];

    lp.eq(row1(p0.halfspaces[i].normal), p0.halfspaces[i].offset);
    lp.eq(row2(p0.halfspaces[j].normal), p0.halfspaces[j].offset);
    lp.eq(row12(p0.halfspaces[k].normal), p0.halfspaces[k].offset);
    for &m in &p0.facets[i].neighbors {
        lp.le(row1(p0.halfspaces[m].normal), p0.halfspaces[m].offset);
    }
    for &m in &p0.facets[j].neighbors {
        lp.le(row2(p0.halfspaces[m].normal), p0.halfspaces[m].offset);
    }
    for &m in &p0.facets[k].neighbors {
        lp.le(row12(p0.halfspaces[m].normal), p0.halfspaces[m].offset);
    }
    matches!(lp_feasible(&lp), LpOutcome::Feasible(_))
}

/// Box-compatible third facets for the pair (i, j).
pub fn box_candidates(p0: &Polytope, i: usize, j: usize, sigma: i32) -> Vec<usize> {
    let sum = p0.facet_box(i).minkowski(&p0.facet_box(j), sigma);
    let eps = 10.0 * p0.geo_tol();
    (0..p0.n_facets())
        .filter(|&k| sum.intersects_eps(&p0.facet_box(k), eps))
        .collect()
}

/// First facet of `G(F_i)`, located by slicing the boundary with a plane
/// through the facet centroid and the origin and LP-testing the crossed
/// facets. Falls back to a full scan.
pub fn find_seed_facet(p0: &Polytope, i: usize, sigma: i32) -> Option<usize> {
    let v = p0.facet_centroid(i);
    // plane through v and 0: normal orthogonal to v
    let axis = {
        let a = v.normalized();
        let cands = [
            crate::geom::vec3(1.0, 0.0, 0.0),
            crate::geom::vec3(0.0, 1.0, 0.0),
            crate::geom::vec3(0.0, 0.0, 1.0),
        ];
        *cands
            .iter()
            .min_by(|p, q| p.dot(a).abs().partial_cmp(&q.dot(a).abs()).unwrap())
            .unwrap()
    };
    let h = v.cross(axis).normalized();
    let tol = p0.geo_tol();
    let crossed: Vec<usize> = (0..p0.n_facets())
        .filter(|&j| {
            let mut pos = false;
            let mut neg = false;
            for &vi in &p0.facets[j].vertices {
                let d = h.dot(p0.vertices[vi]);
                pos |= d > -tol;
                neg |= d < tol;
            }
            pos && neg
        })
        .collect();
    for &j in &crossed {
        for k in box_candidates(p0, i, j, sigma) {
            if triple_certified(p0, i, j, k, sigma) {
                return Some(j);
            }
        }
    }
    // exhaustive fallback keeps correctness when the slice heuristic misses
    for j in 0..p0.n_facets() {
        if crossed.contains(&j) {
            continue;
        }
        for k in box_candidates(p0, i, j, sigma) {
            if triple_certified(p0, i, j, k, sigma) {
                return Some(j);
            }
        }
    }
    None
}

/// Builds `G` and all `G(F_i)` by breadth-first expansion over edge
/// neighbors from a seed facet; the result is independent of traversal order.
pub fn build_triple_set(p0: &Polytope, sigma: i32) -> TripleSet {
    assert!(p0.symmetric, "triple sets are defined for symmetric bodies");
    let n = p0.n_facets();
    let mut per_facet: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut completions: HashMap<(u32, u32), Vec<usize>> = HashMap::new();

    for i in 0..n {
        let Some(seed) = find_seed_facet(p0, i, sigma) else {
            continue;
        };
        let mut member = vec![false; n];
        let mut tested = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(seed);
        tested[seed] = true;
        while let Some(j) = queue.pop_front() {
            let mut ks: Vec<usize> = Vec::new();
            for k in box_candidates(p0, i, j, sigma) {
                if triple_certified(p0, i, j, k, sigma) {
                    ks.push(k);
                }
            }
            if !ks.is_empty() {
                member[j] = true;
                ks.sort_unstable();
                completions.insert((i as u32, j as u32), ks);
                for &nb in &p0.facets[j].neighbors {
                    if !tested[nb] {
                        tested[nb] = true;
                        queue.push_back(nb);
                    }
                }
            }
        }
        per_facet[i] = (0..n).filter(|&j| member[j]).collect();
    }

    TripleSet {
        sigma,
        per_facet,
        completions,
    }
}
