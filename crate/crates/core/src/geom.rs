//! Small fixed-size linear algebra and primitive geometric types.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const fn vec3(x: f64, y: f64, z: f64) -> Vec3 {
    Vec3 { x, y, z }
}

impl Vec3 {
    pub const ZERO: Vec3 = vec3(0.0, 0.0, 0.0);

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        vec3(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_inf(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn normalized(self) -> Vec3 {
        self / self.norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn min(self, o: Vec3) -> Vec3 {
        vec3(self.x.min(o.x), self.y.min(o.y), self.z.min(o.z))
    }

    pub fn max(self, o: Vec3) -> Vec3 {
        vec3(self.x.max(o.x), self.y.max(o.y), self.z.max(o.z))
    }

    pub fn as_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Vec3 {
        vec3(a[0], a[1], a[2])
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        vec3(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        vec3(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        vec3(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        vec3(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        vec3(self.x / s, self.y / s, self.z / s)
    }
}

/// 3x3 matrix stored as three column vectors, matching the basis-matrix
/// convention `W = (w^1 w^2 w^3)` used throughout the search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3 {
    pub col: [Vec3; 3],
}

impl Mat3 {
    pub const ZERO: Mat3 = Mat3 {
        col: [Vec3::ZERO, Vec3::ZERO, Vec3::ZERO],
    };

    pub fn identity() -> Mat3 {
        Mat3 {
            col: [vec3(1.0, 0.0, 0.0), vec3(0.0, 1.0, 0.0), vec3(0.0, 0.0, 1.0)],
        }
    }

    pub fn from_cols(c0: Vec3, c1: Vec3, c2: Vec3) -> Mat3 {
        Mat3 { col: [c0, c1, c2] }
    }

    pub fn scale(s: f64) -> Mat3 {
        Mat3 {
            col: [vec3(s, 0.0, 0.0), vec3(0.0, s, 0.0), vec3(0.0, 0.0, s)],
        }
    }

    pub fn det(&self) -> f64 {
        self.col[0].dot(self.col[1].cross(self.col[2]))
    }

    pub fn mul_vec(&self, v: Vec3) -> Vec3 {
        self.col[0] * v.x + self.col[1] * v.y + self.col[2] * v.z
    }

    pub fn transpose(&self) -> Mat3 {
        Mat3::from_cols(
            vec3(self.col[0].x, self.col[1].x, self.col[2].x),
            vec3(self.col[0].y, self.col[1].y, self.col[2].y),
            vec3(self.col[0].z, self.col[1].z, self.col[2].z),
        )
    }

    pub fn inverse(&self) -> Option<Mat3> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let [a, b, c] = self.col;
        // rows of the inverse are the cross products of column pairs over det
        let r0 = b.cross(c) / d;
        let r1 = c.cross(a) / d;
        let r2 = a.cross(b) / d;
        Some(Mat3::from_cols(r0, r1, r2).transpose())
    }

    /// Solves `M x = rhs`; `None` when the matrix is singular relative to its scale.
    pub fn solve(&self, rhs: Vec3) -> Option<Vec3> {
        let d = self.det();
        let scale = self.norm_inf().powi(3).max(f64::MIN_POSITIVE);
        if d.abs() <= 1e-13 * scale {
            return None;
        }
        let x = Mat3::from_cols(rhs, self.col[1], self.col[2]).det() / d;
        let y = Mat3::from_cols(self.col[0], rhs, self.col[2]).det() / d;
        let z = Mat3::from_cols(self.col[0], self.col[1], rhs).det() / d;
        Some(vec3(x, y, z))
    }

    pub fn norm_inf(&self) -> f64 {
        self.col[0]
            .norm_inf()
            .max(self.col[1].norm_inf())
            .max(self.col[2].norm_inf())
    }

    /// Flattened in column order `(w^1, w^2, w^3)`, the vectorization used by
    /// the 9-variable linear systems.
    pub fn to_vec9(&self) -> [f64; 9] {
        let mut out = [0.0; 9];
        for (j, c) in self.col.iter().enumerate() {
            out[3 * j] = c.x;
            out[3 * j + 1] = c.y;
            out[3 * j + 2] = c.z;
        }
        out
    }

    pub fn from_vec9(v: &[f64]) -> Mat3 {
        Mat3::from_cols(
            vec3(v[0], v[1], v[2]),
            vec3(v[3], v[4], v[5]),
            vec3(v[6], v[7], v[8]),
        )
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        Mat3::from_cols(
            self.col[0] + o.col[0],
            self.col[1] + o.col[1],
            self.col[2] + o.col[2],
        )
    }
}

impl Mul<f64> for Mat3 {
    type Output = Mat3;
    fn mul(self, s: f64) -> Mat3 {
        Mat3::from_cols(self.col[0] * s, self.col[1] * s, self.col[2] * s)
    }
}

/// Closed halfspace `normal . x <= offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Halfspace {
    pub normal: Vec3,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vec3, offset: f64) -> Halfspace {
        Halfspace { normal, offset }
    }

    /// Signed distance-like excess `normal . x - offset` (not normalized).
    pub fn excess(&self, x: Vec3) -> f64 {
        self.normal.dot(x) - self.offset
    }

    /// Same halfspace with the normal scaled to unit length.
    pub fn normalized(&self) -> Halfspace {
        let n = self.normal.norm();
        Halfspace::new(self.normal / n, self.offset / n)
    }
}

/// Axis-parallel box `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box3 {
    pub lo: Vec3,
    pub hi: Vec3,
}

impl Box3 {
    pub fn around(points: impl IntoIterator<Item = Vec3>) -> Box3 {
        let mut it = points.into_iter();
        let first = it.next().expect("box of empty point set");
        let mut b = Box3 { lo: first, hi: first };
        for p in it {
            b.lo = b.lo.min(p);
            b.hi = b.hi.max(p);
        }
        b
    }

    /// Componentwise intersection test: `lo <= other.hi` and `other.lo <= hi`,
    /// with touching boxes counted as intersecting.
    pub fn intersects(&self, o: &Box3) -> bool {
        self.lo.x <= o.hi.x
            && self.lo.y <= o.hi.y
            && self.lo.z <= o.hi.z
            && o.lo.x <= self.hi.x
            && o.lo.y <= self.hi.y
            && o.lo.z <= self.hi.z
    }

    /// Intersection test with a symmetric slack added on all sides.
    pub fn intersects_eps(&self, o: &Box3, eps: f64) -> bool {
        self.lo.x <= o.hi.x + eps
            && self.lo.y <= o.hi.y + eps
            && self.lo.z <= o.hi.z + eps
            && o.lo.x <= self.hi.x + eps
            && o.lo.y <= self.hi.y + eps
            && o.lo.z <= self.hi.z + eps
    }

    /// Minkowski combination `self + sigma * other` for `sigma = +-1`.
    pub fn minkowski(&self, o: &Box3, sigma: i32) -> Box3 {
        if sigma >= 0 {
            Box3 {
                lo: self.lo + o.lo,
                hi: self.hi + o.hi,
            }
        } else {
            Box3 {
                lo: self.lo - o.hi,
                hi: self.hi - o.lo,
            }
        }
    }
}

/// Gram-Schmidt orthonormalization of a set of 9-vectors, dropping
/// near-dependent ones. Used to condition null-space bases.
pub fn orthonormalize9(vs: &mut Vec<[f64; 9]>) {
    let mut out: Vec<[f64; 9]> = Vec::new();
    for v in vs.iter() {
        let mut w = *v;
        for u in &out {
            let d: f64 = w.iter().zip(u.iter()).map(|(a, b)| a * b).sum();
            for k in 0..9 {
                w[k] -= d * u[k];
            }
        }
        let n: f64 = w.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 1e-12 {
            for k in 0..9 {
                w[k] /= n;
            }
            out.push(w);
        }
    }
    *vs = out;
}
