//! Affine subspaces of R^2 / R^3 with orthonormal direction sets.

/// Point plus orthonormal directions; `ambient` is 2 or 3 and coordinates
/// beyond it are kept at zero.
#[derive(Debug, Clone)]
pub struct AffineSubspace {
    pub ambient: usize,
    pub point: [f64; 3],
    pub dirs: Vec<[f64; 3]>,
}

impl AffineSubspace {
    pub fn point3(p: [f64; 3]) -> AffineSubspace {
        AffineSubspace {
            ambient: 3,
            point: p,
            dirs: vec![],
        }
    }

    pub fn point2(p: [f64; 2]) -> AffineSubspace {
        AffineSubspace {
            ambient: 2,
            point: [p[0], p[1], 0.0],
            dirs: vec![],
        }
    }

    pub fn new(ambient: usize, point: [f64; 3], dirs: Vec<[f64; 3]>) -> AffineSubspace {
        let mut s = AffineSubspace {
            ambient,
            point,
            dirs,
        };
        s.orthonormalize();
        s
    }

    pub fn full(ambient: usize) -> AffineSubspace {
        let mut dirs = Vec::new();
        for a in 0..ambient {
            let mut d = [0.0; 3];
            d[a] = 1.0;
            dirs.push(d);
        }
        AffineSubspace {
            ambient,
            point: [0.0; 3],
            dirs,
        }
    }

    pub fn dim(&self) -> usize {
        self.dirs.len()
    }

    fn orthonormalize(&mut self) {
        let mut out: Vec<[f64; 3]> = Vec::new();
        for d in &self.dirs {
            let mut w = *d;
            for u in &out {
                let t = dot(&w, u);
                for k in 0..3 {
                    w[k] -= t * u[k];
                }
            }
            let n = dot(&w, &w).sqrt();
            if n > 1e-10 {
                for v in w.iter_mut() {
                    *v /= n;
                }
                out.push(w);
            }
        }
        self.dirs = out;
    }

    /// Image under the affine map `q -> offset + L q` where `cols` are the
    /// images of the domain's coordinate axes.
    pub fn map_affine(&self, offset: [f64; 3], cols: &[[f64; 3]], ambient: usize) -> AffineSubspace {
        let apply_lin = |v: &[f64; 3]| {
            let mut out = [0.0; 3];
            for (k, c) in cols.iter().enumerate() {
                for i in 0..3 {
                    out[i] += v[k] * c[i];
                }
            }
            out
        };
        let mut point = apply_lin(&self.point);
        for i in 0..3 {
            point[i] += offset[i];
        }
        let dirs = self.dirs.iter().map(&apply_lin).collect();
        AffineSubspace::new(ambient, point, dirs)
    }

    /// Deterministic sample points spread over the subspace.
    pub fn samples(&self, count: usize, radius: f64) -> Vec<[f64; 3]> {
        let mut out = vec![self.point];
        if self.dirs.is_empty() {
            return out;
        }
        let mut t = 0.387_f64;
        while out.len() < count {
            let mut p = self.point;
            for (j, d) in self.dirs.iter().enumerate() {
                t = (t * 997.0 + 0.618 * (j as f64 + 1.0)).fract();
                let c = radius * (2.0 * t - 1.0);
                for k in 0..3 {
                    p[k] += c * d[k];
                }
            }
            out.push(p);
        }
        out
    }

    pub fn contains_point(&self, p: [f64; 3], tol: f64) -> bool {
        let mut w = [p[0] - self.point[0], p[1] - self.point[1], p[2] - self.point[2]];
        for d in &self.dirs {
            let t = dot(&w, d);
            for k in 0..3 {
                w[k] -= t * d[k];
            }
        }
        dot(&w, &w).sqrt() <= tol
    }
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
