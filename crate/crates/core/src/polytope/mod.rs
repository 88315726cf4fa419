//! Bounded 3-polytopes with full lattice descriptions: irredundant
//! halfspaces, vertices, facet cycles, edges and edge-neighbor lists.

mod build;
mod hull;

pub use build::{assemble, debug_cluster, debug_cycle, vertices_from_planes};
pub use hull::hull_planes;

use crate::geom::{vec3, Box3, Halfspace, Vec3};
use thiserror::Error;

/// Relative geometric tolerance for incidence and coplanarity predicates,
/// scaled by the polytope circumradius.
pub const EPS_GEO: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum PolytopeError {
    #[error("input points are affinely degenerate")]
    DegenerateInput,
    #[error("halfspace intersection is unbounded")]
    Unbounded,
    #[error("halfspace intersection has empty interior")]
    EmptyInterior,
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("io: {0}")]
    Io(String),
}

#[derive(Debug, Clone)]
pub struct Facet {
    /// Vertex indices in cycle order, counterclockwise seen from outside.
    pub vertices: Vec<usize>,
    /// Facets sharing an edge with this one.
    pub neighbors: Vec<usize>,
    /// Minimal axis-parallel box containing the facet.
    pub bbox: Box3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Debug, Clone)]
pub struct Polytope {
    /// One halfspace per facet, index-aligned with `facets`, unit normals.
    pub halfspaces: Vec<Halfspace>,
    pub vertices: Vec<Vec3>,
    pub facets: Vec<Facet>,
    /// `(v1, v2, f1, f2)` with `v1 < v2`.
    pub edges: Vec<(usize, usize, usize, usize)>,
    pub symmetric: bool,
    /// Facet index of the antipodal facet, when symmetric.
    pub antipode: Vec<usize>,
    /// Circumradius, the reference scale for tolerances.
    pub scale: f64,
}

impl Polytope {
    pub fn n_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn f_vector(&self) -> (usize, usize, usize) {
        (self.vertices.len(), self.edges.len(), self.facets.len())
    }

    pub fn geo_tol(&self) -> f64 {
        EPS_GEO * self.scale
    }

    pub fn classify_point(&self, x: Vec3, tol: f64) -> Classification {
        let mut worst = f64::NEG_INFINITY;
        for h in &self.halfspaces {
            worst = worst.max(h.excess(x));
        }
        if worst < -tol {
            Classification::Interior
        } else if worst <= tol {
            Classification::Boundary
        } else {
            Classification::Exterior
        }
    }

    pub fn facet_box(&self, i: usize) -> Box3 {
        self.facets[i].bbox
    }

    pub fn facet_centroid(&self, i: usize) -> Vec3 {
        let f = &self.facets[i];
        let mut c = Vec3::ZERO;
        for &v in &f.vertices {
            c += self.vertices[v];
        }
        c / f.vertices.len() as f64
    }

    pub fn centroid(&self) -> Vec3 {
        let mut c = Vec3::ZERO;
        for v in &self.vertices {
            c += *v;
        }
        c / self.vertices.len() as f64
    }

    pub fn translated(&self, t: Vec3) -> Polytope {
        let pts: Vec<Vec3> = self.vertices.iter().map(|&v| v + t).collect();
        let planes: Vec<Halfspace> = self
            .halfspaces
            .iter()
            .map(|h| Halfspace::new(h.normal, h.offset + h.normal.dot(t)))
            .collect();
        assemble(&planes, &pts).expect("translation preserves validity")
    }

    /// Volume by fan decomposition from the origin over facet triangulations.
    pub fn volume(&self) -> f64 {
        let mut vol = 0.0;
        for f in &self.facets {
            let c = &f.vertices;
            for k in 1..c.len() - 1 {
                vol += self.vertices[c[0]]
                    .dot(self.vertices[c[k]].cross(self.vertices[c[k + 1]]));
            }
        }
        vol / 6.0
    }

    /// Marks the polytope symmetric when facets pair up antipodally, and
    /// stores the pairing.
    pub(crate) fn detect_symmetry(&mut self) {
        let n = self.facets.len();
        let tol = 1e-7 * self.scale.max(1.0);
        let mut antipode = vec![usize::MAX; n];
        for i in 0..n {
            let hi = &self.halfspaces[i];
            for j in 0..n {
                let hj = &self.halfspaces[j];
                if (hi.normal + hj.normal).norm() <= 1e-7 && (hi.offset - hj.offset).abs() <= tol {
                    antipode[i] = j;
                    break;
                }
            }
        }
        if antipode.iter().all(|&a| a != usize::MAX) {
            self.symmetric = true;
            self.antipode = antipode;
        }
    }

    /// Forces exact antipodal pairing of the halfspaces by averaging. Only
    /// meaningful for bodies that are symmetric up to construction noise.
    pub(crate) fn symmetrize(&mut self) {
        if !self.symmetric {
            return;
        }
        for i in 0..self.halfspaces.len() {
            let j = self.antipode[i];
            if i < j {
                let hi = self.halfspaces[i];
                let hj = self.halfspaces[j];
                let n = ((hi.normal - hj.normal) * 0.5).normalized();
                let b = 0.5 * (hi.offset + hj.offset);
                self.halfspaces[i] = Halfspace::new(n, b);
                self.halfspaces[j] = Halfspace::new(-n, b);
            }
        }
    }

    /// All inputs inside, Euler relation, matched neighbor lists.
    pub fn validate(&self, original_points: &[Vec3]) -> Result<(), PolytopeError> {
        let tol = 1000.0 * self.geo_tol();
        for p in original_points {
            for h in &self.halfspaces {
                if h.excess(*p) > tol {
                    return Err(PolytopeError::Construction(format!(
                        "input point {p:?} outside hull by {}",
                        h.excess(*p)
                    )));
                }
            }
        }
        let (v, e, f) = self.f_vector();
        if v + f != e + 2 {
            return Err(PolytopeError::Construction("Euler violation".into()));
        }
        for (i, fac) in self.facets.iter().enumerate() {
            for &j in &fac.neighbors {
                if !self.facets[j].neighbors.contains(&i) {
                    return Err(PolytopeError::Construction("asymmetric neighbors".into()));
                }
            }
        }
        Ok(())
    }
}

/// Convex hull with a full lattice description. Coplanar adjacent faces are
/// merged into single facets.
pub fn convex_hull(points: &[Vec3]) -> Result<Polytope, PolytopeError> {
    let planes = hull_planes(points)?;
    let poly = assemble(&planes, points)?;
    poly.validate(points)?;
    Ok(poly)
}

/// Polytope from an irredundant-or-not halfspace system; redundant
/// halfspaces are dropped.
pub fn from_halfspaces(hs: &[Halfspace]) -> Result<Polytope, PolytopeError> {
    let planes: Vec<Halfspace> = hs.iter().map(|h| h.normalized()).collect();
    build::check_halfspace_system(&planes)?;
    let verts = vertices_from_planes(&planes)?;
    if verts.len() < 4 {
        return Err(PolytopeError::EmptyInterior);
    }
    let poly = assemble(&planes, &verts)?;
    Ok(poly)
}

/// The difference body `P + (-P)`, computed as the hull of pairwise vertex
/// differences with coplanar-facet merging; halfspaces come out in exact
/// `(a,b)/(-a,b)` pairs.
pub fn difference_body(p: &Polytope) -> Result<Polytope, PolytopeError> {
    let mut cloud = Vec::with_capacity(p.vertices.len() * p.vertices.len());
    for &a in &p.vertices {
        for &b in &p.vertices {
            cloud.push(a - b);
        }
    }
    let planes = hull_planes(&cloud)?;
    // pair up antipodal planes and average them into exact symmetry
    let n = planes.len();
    let mut paired = vec![false; n];
    let mut sym_planes: Vec<Halfspace> = Vec::with_capacity(n);
    for i in 0..n {
        if paired[i] {
            continue;
        }
        let hi = planes[i];
        let mut best = (usize::MAX, f64::INFINITY);
        for (j, hj) in planes.iter().enumerate() {
            if j != i && !paired[j] {
                let d = (hi.normal + hj.normal).norm() + (hi.offset - hj.offset).abs() / p.scale.max(1.0);
                if d < best.1 {
                    best = (j, d);
                }
            }
        }
        let (j, d) = best;
        if j == usize::MAX || d > 1e-5 {
            return Err(PolytopeError::Construction(
                "difference body plane set is not centrally symmetric".into(),
            ));
        }
        paired[i] = true;
        paired[j] = true;
        let nrm = ((hi.normal - planes[j].normal) * 0.5).normalized();
        let off = 0.5 * (hi.offset + planes[j].offset);
        sym_planes.push(Halfspace::new(nrm, off));
        sym_planes.push(Halfspace::new(-nrm, off));
    }
    let mut poly = assemble(&sym_planes, &cloud)?;
    poly.validate(&cloud)?;
    poly.symmetrize();
    if !poly.symmetric {
        return Err(PolytopeError::Construction(
            "difference body failed symmetry detection".into(),
        ));
    }
    Ok(poly)
}

/// Convenience constructors used by the catalog and tests.
pub fn cube_halfspaces(r: f64) -> Vec<Halfspace> {
    let mut hs = Vec::new();
    for axis in 0..3 {
        for sign in [1.0, -1.0] {
            let mut n = Vec3::ZERO;
            match axis {
                0 => n.x = sign,
                1 => n.y = sign,
                _ => n.z = sign,
            }
            hs.push(Halfspace::new(n, r));
        }
    }
    hs
}

pub fn octahedron_halfspaces(r: f64) -> Vec<Halfspace> {
    let mut hs = Vec::new();
    for sx in [1.0f64, -1.0] {
        for sy in [1.0f64, -1.0] {
            for sz in [1.0f64, -1.0] {
                hs.push(Halfspace::new(vec3(sx, sy, sz), r));
            }
        }
    }
    hs
}
