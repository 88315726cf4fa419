//! Incremental convex hull producing a facet plane set.
//!
//! The hull is built triangulated; coplanar triangles are merged afterwards
//! by clustering their planes, so only the plane set leaves this module. The
//! face lattice is reassembled from scratch by `build`.

use super::PolytopeError;
use crate::geom::{Halfspace, Vec3};

struct Tri {
    v: [usize; 3],
    n: Vec3, // unit outward normal
    off: f64,
    area: f64,
    alive: bool,
}

fn tri_plane(a: Vec3, b: Vec3, c: Vec3) -> (Vec3, f64, f64) {
    let n = (b - a).cross(c - a);
    let area = 0.5 * n.norm();
    if area == 0.0 {
        return (Vec3::ZERO, 0.0, 0.0);
    }
    let un = n / (2.0 * area);
    (un, un.dot(a), area)
}

/// Candidate facet planes of the convex hull of `points` (deduplicated,
/// merged across coplanar triangles).
pub fn hull_planes(points: &[Vec3]) -> Result<Vec<Halfspace>, PolytopeError> {
    let pts = dedupe(points);
    if pts.len() < 4 {
        return Err(PolytopeError::DegenerateInput);
    }
    let scale = pts.iter().fold(0.0f64, |m, p| m.max(p.norm()));
    let eps = 1e-9 * scale.max(1e-300);

    let mut order = initial_simplex(&pts, eps)?;
    // far points first: keeps sliver insertions late, when the hull is mature
    let mut rest: Vec<usize> = (0..pts.len()).filter(|i| !order.contains(i)).collect();
    rest.sort_by(|&a, &b| pts[b].norm().partial_cmp(&pts[a].norm()).unwrap());
    order.extend(rest);

    // initial tetrahedron
    let (i0, i1, i2, i3) = (order[0], order[1], order[2], order[3]);
    let mut tris: Vec<Tri> = Vec::new();
    let mk = |a: usize, b: usize, c: usize, opp: usize, pts: &[Vec3]| -> Tri {
        let (mut n, mut off, area) = tri_plane(pts[a], pts[b], pts[c]);
        let mut v = [a, b, c];
        if n.dot(pts[opp]) > off {
            v = [a, c, b];
            let r = tri_plane(pts[a], pts[c], pts[b]);
            n = r.0;
            off = r.1;
        }
        Tri {
            v,
            n,
            off,
            area,
            alive: true,
        }
    };
    tris.push(mk(i0, i1, i2, i3, &pts));
    tris.push(mk(i0, i1, i3, i2, &pts));
    tris.push(mk(i0, i2, i3, i1, &pts));
    tris.push(mk(i1, i2, i3, i0, &pts));

    let eps_vis = 10.0 * eps;
    for &pi in order.iter().skip(4) {
        let p = pts[pi];
        let visible: Vec<usize> = tris
            .iter()
            .enumerate()
            .filter(|(_, t)| t.alive && t.n.dot(p) - t.off > eps_vis)
            .map(|(i, _)| i)
            .collect();
        if visible.is_empty() {
            continue;
        }
        let vis_set: std::collections::HashSet<usize> = visible.iter().copied().collect();
        // directed edges of hidden triangles whose reverse lies in the
        // visible region form the horizon
        let mut directed: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        for (ti, t) in tris.iter().enumerate() {
            if t.alive {
                for k in 0..3 {
                    directed.insert((t.v[k], t.v[(k + 1) % 3]), ti);
                }
            }
        }
        let mut new_tris: Vec<Tri> = Vec::new();
        for &ti in &visible {
            let t = &tris[ti];
            for k in 0..3 {
                let (a, b) = (t.v[k], t.v[(k + 1) % 3]);
                // reverse edge belongs to the neighbor on the other side
                if let Some(&nb) = directed.get(&(b, a)) {
                    if !vis_set.contains(&nb) {
                        // horizon edge: hidden neighbor holds (b -> a)
                        let (n, off, area) = tri_plane(pts[pi], pts[a], pts[b]);
                        if area > 1e-12 * scale * scale {
                            new_tris.push(Tri {
                                v: [pi, a, b],
                                n,
                                off,
                                area,
                                alive: true,
                            });
                        } else {
                            // degenerate sliver: inherit the hidden plane
                            let h = &tris[nb];
                            new_tris.push(Tri {
                                v: [pi, a, b],
                                n: h.n,
                                off: h.off,
                                area,
                                alive: true,
                            });
                        }
                    }
                }
            }
        }
        for &ti in &visible {
            tris[ti].alive = false;
        }
        tris.extend(new_tris);
    }

    // cluster the surviving planes
    let alive: Vec<&Tri> = tris.iter().filter(|t| t.alive).collect();
    if alive.is_empty() {
        return Err(PolytopeError::DegenerateInput);
    }
    let mut planes: Vec<(Vec3, f64, f64)> = Vec::new(); // (weighted normal, weighted offset, weight)
    for t in &alive {
        if t.area <= 1e-12 * scale * scale {
            continue;
        }
        let mut found = false;
        for pl in planes.iter_mut() {
            let n_avg = pl.0 / pl.2;
            if n_avg.normalized().dot(t.n) > 1.0 - 1e-7 && (pl.1 / pl.2 - t.off).abs() <= 100.0 * eps
            {
                pl.0 += t.n * t.area;
                pl.1 += t.off * t.area;
                pl.2 += t.area;
                found = true;
                break;
            }
        }
        if !found {
            planes.push((t.n * t.area, t.off * t.area, t.area));
        }
    }
    if planes.len() < 4 {
        return Err(PolytopeError::DegenerateInput);
    }
    Ok(planes
        .into_iter()
        .map(|(n, b, w)| {
            let un = (n / w).normalized();
            Halfspace::new(un, b / w)
        })
        .collect())
}

fn dedupe(points: &[Vec3]) -> Vec<Vec3> {
    let scale = points.iter().fold(0.0f64, |m, p| m.max(p.norm_inf())).max(1e-300);
    let cell = 1e-9 * scale;
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for &p in points {
        if !p.is_finite() {
            continue;
        }
        let key = (
            (p.x / cell).round() as i64,
            (p.y / cell).round() as i64,
            (p.z / cell).round() as i64,
        );
        if seen.insert(key) {
            out.push(p);
        }
    }
    out
}

/// Four affinely independent points to seed the hull.
fn initial_simplex(pts: &[Vec3], eps: f64) -> Result<Vec<usize>, PolytopeError> {
    // farthest pair among axis extremes
    let mut extremes = Vec::new();
    for axis in 0..3 {
        let get = |p: &Vec3| match axis {
            0 => p.x,
            1 => p.y,
            _ => p.z,
        };
        let lo = (0..pts.len()).min_by(|&a, &b| get(&pts[a]).partial_cmp(&get(&pts[b])).unwrap());
        let hi = (0..pts.len()).max_by(|&a, &b| get(&pts[a]).partial_cmp(&get(&pts[b])).unwrap());
        extremes.push(lo.unwrap());
        extremes.push(hi.unwrap());
    }
    let (mut a, mut b, mut best) = (extremes[0], extremes[1], -1.0);
    for &i in &extremes {
        for &j in &extremes {
            let d = (pts[i] - pts[j]).norm();
            if d > best {
                best = d;
                a = i;
                b = j;
            }
        }
    }
    if best <= eps {
        return Err(PolytopeError::DegenerateInput);
    }
    let dir = (pts[b] - pts[a]).normalized();
    let c = (0..pts.len())
        .max_by(|&i, &j| {
            let di = ((pts[i] - pts[a]) - dir * (pts[i] - pts[a]).dot(dir)).norm();
            let dj = ((pts[j] - pts[a]) - dir * (pts[j] - pts[a]).dot(dir)).norm();
            di.partial_cmp(&dj).unwrap()
        })
        .unwrap();
    let off_line = ((pts[c] - pts[a]) - dir * (pts[c] - pts[a]).dot(dir)).norm();
    if off_line <= eps {
        return Err(PolytopeError::DegenerateInput);
    }
    let n = (pts[b] - pts[a]).cross(pts[c] - pts[a]).normalized();
    let d = (0..pts.len())
        .max_by(|&i, &j| {
            let di = (pts[i] - pts[a]).dot(n).abs();
            let dj = (pts[j] - pts[a]).dot(n).abs();
            di.partial_cmp(&dj).unwrap()
        })
        .unwrap();
    if (pts[d] - pts[a]).dot(n).abs() <= eps {
        return Err(PolytopeError::DegenerateInput);
    }
    Ok(vec![a, b, c, d])
}
