//! Face-lattice assembly from a plane set and a vertex cloud.

use super::{Facet, Polytope, PolytopeError, EPS_GEO};
use crate::geom::{Box3, Halfspace, Vec3};
use crate::lp::{lp_feasible, lp_feasible_strict, LpOutcome, LpProblem};

/// Enumerates vertices of a bounded halfspace intersection by solving all
/// plane triples and keeping the points satisfying every constraint. Cubic in
/// the number of planes, which is fine at the sizes handled here.
pub fn vertices_from_planes(planes: &[Halfspace]) -> Result<Vec<Vec3>, PolytopeError> {
    let n = planes.len();
    let bscale = planes.iter().fold(0.0f64, |m, h| m.max(h.offset.abs())).max(1e-300);
    let mut verts: Vec<Vec3> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let m = crate::geom::Mat3::from_cols(
                    planes[i].normal,
                    planes[j].normal,
                    planes[k].normal,
                )
                .transpose();
                let rhs = crate::geom::vec3(planes[i].offset, planes[j].offset, planes[k].offset);
                let Some(p) = m.solve(rhs) else { continue };
                if !p.is_finite() {
                    continue;
                }
                let tol = EPS_GEO * 100.0 * bscale.max(p.norm());
                if planes.iter().all(|h| h.excess(p) <= tol) {
                    verts.push(p);
                }
            }
        }
    }
    if verts.is_empty() {
        return Err(PolytopeError::EmptyInterior);
    }
    // cluster duplicates (several triples meet at non-simple vertices)
    let scale = verts.iter().fold(0.0f64, |m, p| m.max(p.norm())).max(1e-300);
    let tol = 1e-7 * scale;
    let mut out: Vec<(Vec3, usize)> = Vec::new();
    for v in verts {
        if let Some(entry) = out.iter_mut().find(|(c, cnt)| (*c / *cnt as f64 - v).norm() <= tol) {
            entry.0 += v;
            entry.1 += 1;
        } else {
            out.push((v, 1));
        }
    }
    Ok(out.into_iter().map(|(s, c)| s / c as f64).collect())
}

/// Checks the halfspace system for unboundedness and empty interior.
pub fn check_halfspace_system(planes: &[Halfspace]) -> Result<(), PolytopeError> {
    let mut p = LpProblem::new(3);
    for h in planes {
        p.le(vec![h.normal.x, h.normal.y, h.normal.z], h.offset);
    }
    let strict: Vec<usize> = (0..planes.len()).collect();
    if lp_feasible(&p) == LpOutcome::Empty {
        return Err(PolytopeError::EmptyInterior);
    }
    if lp_feasible_strict(&p, &strict) == LpOutcome::Empty {
        return Err(PolytopeError::EmptyInterior); // nonempty but flat
    }
    // recession direction test: any unit-box direction surviving A d <= 0
    for axis in 0..3 {
        for sign in [1.0, -1.0] {
            let mut rec = LpProblem::new(3);
            for h in planes {
                rec.le(vec![h.normal.x, h.normal.y, h.normal.z], 0.0);
            }
            let mut row = vec![0.0; 3];
            row[axis] = -sign;
            rec.eq(row, -1.0); // d_axis = sign
            if let LpOutcome::Feasible(_) = lp_feasible(&rec) {
                return Err(PolytopeError::Unbounded);
            }
        }
    }
    Ok(())
}

/// Clusters nearly identical points so every facet refers to one
/// representative; inconsistent picks across facets would break the edge
/// matching.
fn cluster_points(points: &[Vec3], tol: f64) -> Vec<Vec3> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].x.partial_cmp(&points[b].x).unwrap());
    let mut cluster = vec![usize::MAX; points.len()];
    let mut reps: Vec<(Vec3, usize)> = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        if cluster[i] != usize::MAX {
            continue;
        }
        let id = reps.len();
        cluster[i] = id;
        let mut sum = points[i];
        let mut cnt = 1;
        for &j in order[pos + 1..].iter() {
            if points[j].x - points[i].x > tol {
                break;
            }
            if cluster[j] == usize::MAX && (points[j] - points[i]).norm() <= tol {
                cluster[j] = id;
                sum += points[j];
                cnt += 1;
            }
        }
        reps.push((sum, cnt));
    }
    reps.into_iter().map(|(s, c)| s / c as f64).collect()
}

/// Builds the full lattice description: irredundant facets with ordered
/// vertex cycles, edges, and edge-neighbor lists.
pub fn assemble(planes: &[Halfspace], raw_points: &[Vec3]) -> Result<Polytope, PolytopeError> {
    let scale = raw_points
        .iter()
        .fold(0.0f64, |m, p| m.max(p.norm()))
        .max(1e-300);
    let points = cluster_points(raw_points, 10.0 * EPS_GEO * scale);
    let points = &points[..];
    let tol = 100.0 * EPS_GEO * scale;

    // incidence and per-facet 2D hulls
    let mut facet_cycles: Vec<(Halfspace, Vec<usize>)> = Vec::new();
    for h in planes {
        let hn = h.normalized();
        let incident: Vec<usize> = (0..points.len())
            .filter(|&i| hn.excess(points[i]).abs() <= tol)
            .collect();
        if incident.len() < 3 {
            continue; // redundant plane
        }
        let cycle = planar_hull_cycle(&hn, points, &incident, scale);
        if cycle.len() >= 3 {
            facet_cycles.push((hn, cycle));
        }
    }
    if facet_cycles.len() < 4 {
        return Err(PolytopeError::DegenerateInput);
    }

    // keep only vertices that appear in some cycle, reindex
    let mut used: Vec<usize> = facet_cycles.iter().flat_map(|(_, c)| c.iter().copied()).collect();
    used.sort_unstable();
    used.dedup();
    let mut remap = vec![usize::MAX; points.len()];
    let vertices: Vec<Vec3> = used
        .iter()
        .enumerate()
        .map(|(new, &old)| {
            remap[old] = new;
            points[old]
        })
        .collect();

    let mut facets: Vec<Facet> = Vec::new();
    let mut halfspaces: Vec<Halfspace> = Vec::new();
    for (h, cycle) in facet_cycles {
        let cycle: Vec<usize> = cycle.into_iter().map(|i| remap[i]).collect();
        let bbox = Box3::around(cycle.iter().map(|&i| vertices[i]));
        halfspaces.push(h);
        facets.push(Facet {
            vertices: cycle,
            neighbors: Vec::new(),
            bbox,
        });
    }

    // edges from consecutive cycle positions
    let mut edge_map: std::collections::HashMap<(usize, usize), Vec<usize>> =
        std::collections::HashMap::new();
    for (fi, f) in facets.iter().enumerate() {
        let m = f.vertices.len();
        for k in 0..m {
            let a = f.vertices[k];
            let b = f.vertices[(k + 1) % m];
            let key = (a.min(b), a.max(b));
            edge_map.entry(key).or_default().push(fi);
        }
    }
    let mut edges: Vec<(usize, usize, usize, usize)> = Vec::new();
    for (&(a, b), fs) in edge_map.iter() {
        if fs.len() != 2 {
            return Err(PolytopeError::Construction(format!(
                "edge ({a},{b}) borders {} facets",
                fs.len()
            )));
        }
        edges.push((a, b, fs[0], fs[1]));
    }
    edges.sort_unstable();
    for &(_, _, f1, f2) in &edges {
        if !facets[f1].neighbors.contains(&f2) {
            facets[f1].neighbors.push(f2);
        }
        if !facets[f2].neighbors.contains(&f1) {
            facets[f2].neighbors.push(f1);
        }
    }
    for f in facets.iter_mut() {
        f.neighbors.sort_unstable();
    }

    // Euler relation is the cheapest full-lattice sanity check
    let (v, e, f) = (vertices.len(), edges.len(), facets.len());
    if v + f != e + 2 {
        return Err(PolytopeError::Construction(format!(
            "Euler violation: V={v} E={e} F={f}"
        )));
    }

    let mut poly = Polytope {
        halfspaces,
        vertices,
        facets,
        edges,
        symmetric: false,
        antipode: Vec::new(),
        scale,
    };
    poly.detect_symmetry();
    Ok(poly)
}

/// Ordered boundary cycle of the incident points within the facet plane:
/// a 2D convex hull (monotone chain) that drops interior and mid-edge points.
fn planar_hull_cycle(h: &Halfspace, points: &[Vec3], incident: &[usize], scale: f64) -> Vec<usize> {
    // in-plane orthonormal frame
    let n = h.normal;
    let pick = if n.x.abs() < 0.7 {
        crate::geom::vec3(1.0, 0.0, 0.0)
    } else {
        crate::geom::vec3(0.0, 1.0, 0.0)
    };
    let u = (pick - n * pick.dot(n)).normalized();
    let w = n.cross(u);

    let mut pts2: Vec<(f64, f64, usize)> = incident
        .iter()
        .map(|&i| (points[i].dot(u), points[i].dot(w), i))
        .collect();
    pts2.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if pts2.len() < 3 {
        return vec![];
    }
    // the chain runs with exact predicates: tolerance pops across the
    // micro-baselines of nearly tied points can discard true corners, so
    // collinearity cleaning is deferred to the cycle sweep below
    let eps_area = 1e-13 * scale * scale;
    let cross =
        |o: &(f64, f64, usize), a: &(f64, f64, usize), b: &(f64, f64, usize)| -> f64 {
            (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
        };
    let mut lower: Vec<(f64, f64, usize)> = Vec::new();
    for p in &pts2 {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0
        {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<(f64, f64, usize)> = Vec::new();
    for p in pts2.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0
        {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    let mut cycle: Vec<usize> = lower.into_iter().chain(upper).map(|(_, _, i)| i).collect();
    // the chain never tests its endpoints, so near-ties in the sort can leave
    // points sitting on straight edges; sweep the closed cycle until clean
    let proj = |i: usize| (points[i].dot(u), points[i].dot(w));
    loop {
        let m = cycle.len();
        if m < 4 {
            break;
        }
        let mut removed = false;
        for k in 0..m {
            let o = proj(cycle[(k + m - 1) % m]);
            let a = proj(cycle[k]);
            let b = proj(cycle[(k + 1) % m]);
            let cr = (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
            if cr <= eps_area {
                cycle.remove(k);
                removed = true;
                break;
            }
        }
        if !removed {
            break;
        }
    }
    if cycle.len() < 3 {
        return vec![];
    }
    // orient counterclockwise as seen from outside (along the outward normal)
    let p0 = points[cycle[0]];
    let p1 = points[cycle[1]];
    let p2 = points[cycle[2]];
    if (p1 - p0).cross(p2 - p0).dot(n) < 0.0 {
        cycle.reverse();
    }
    cycle
}

/// Test-support wrappers around the internal assembly stages.
pub fn debug_cluster(points: &[Vec3], tol: f64) -> Vec<Vec3> {
    cluster_points(points, tol)
}

pub fn debug_cycle(h: &Halfspace, points: &[Vec3], incident: &[usize], scale: f64) -> Vec<usize> {
    planar_hull_cycle(h, points, incident, scale)
}
