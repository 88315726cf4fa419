//! Dense polynomials in up to three variables, with the degree envelope of
//! the determinant critical-point analysis: trivariate inputs of total degree
//! at most 3, bivariate intermediates up to degree 4, and univariate
//! resultants up to degree 12.

mod conic;
mod factor;
mod isolated;
mod resultant;
mod roots;
mod subspace;

pub use conic::conic_components;
pub use factor::{
    common_linear_factors, divide_by_linear, linear_factors, try_divide, LinearPoly,
};
pub use isolated::{
    bivariate_isolated, bivariate_pair_isolated, gradient_critical_subspaces, GradientCritical,
};
pub use resultant::resultant;
pub use roots::real_roots;
pub use subspace::AffineSubspace;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PolyError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("both polynomials constant in the elimination variable")]
    BothConstantInVar,
    #[error("total degree {0} exceeds what this routine supports")]
    DegreeTooHigh(usize),
    #[error("not a factor")]
    NotAFactor,
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
}

/// Relative threshold deciding when a coefficient is treated as zero.
pub const EPS_POLY: f64 = 1e-10;
/// Residual tolerance for factor tests, relative to the dividend's norm.
pub const EPS_FACT: f64 = 1e-8;

/// Dense polynomial over variables x0, x1, x2. `dims[v]` is one past the
/// maximal stored exponent of variable `v`; coefficients are indexed
/// `i + dims0 * (j + dims1 * k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub dims: [usize; 3],
    pub c: Vec<f64>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly {
            dims: [1, 1, 1],
            c: vec![0.0],
        }
    }

    pub fn constant(v: f64) -> Poly {
        Poly {
            dims: [1, 1, 1],
            c: vec![v],
        }
    }

    pub fn var(axis: usize) -> Poly {
        let mut dims = [1usize, 1, 1];
        dims[axis] = 2;
        let mut p = Poly {
            dims,
            c: vec![0.0; 2],
        };
        p.c[1] = 1.0;
        p
    }

    /// `c0 + cv[0] x0 + cv[1] x1 + cv[2] x2`
    pub fn linear(c0: f64, cv: [f64; 3]) -> Poly {
        let mut p = Poly::constant(c0);
        for a in 0..3 {
            if cv[a] != 0.0 {
                p = p.add(&Poly::var(a).scale(cv[a]));
            }
        }
        p
    }

    fn idx(&self, e: [usize; 3]) -> usize {
        e[0] + self.dims[0] * (e[1] + self.dims[1] * e[2])
    }

    pub fn coeff(&self, e: [usize; 3]) -> f64 {
        if e[0] < self.dims[0] && e[1] < self.dims[1] && e[2] < self.dims[2] {
            self.c[self.idx(e)]
        } else {
            0.0
        }
    }

    pub fn set_coeff(&mut self, e: [usize; 3], v: f64) {
        if e[0] >= self.dims[0] || e[1] >= self.dims[1] || e[2] >= self.dims[2] {
            self.grow([
                self.dims[0].max(e[0] + 1),
                self.dims[1].max(e[1] + 1),
                self.dims[2].max(e[2] + 1),
            ]);
        }
        let i = self.idx(e);
        self.c[i] = v;
    }

    fn grow(&mut self, dims: [usize; 3]) {
        if dims == self.dims {
            return;
        }
        let mut out = Poly {
            dims,
            c: vec![0.0; dims[0] * dims[1] * dims[2]],
        };
        for k in 0..self.dims[2] {
            for j in 0..self.dims[1] {
                for i in 0..self.dims[0] {
                    let v = self.c[self.idx([i, j, k])];
                    if v != 0.0 {
                        let ix = out.idx([i, j, k]);
                        out.c[ix] = v;
                    }
                }
            }
        }
        *self = out;
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = ([usize; 3], f64)> + '_ {
        let dims = self.dims;
        (0..dims[2]).flat_map(move |k| {
            (0..dims[1]).flat_map(move |j| {
                (0..dims[0]).filter_map(move |i| {
                    let v = self.c[i + dims[0] * (j + dims[1] * k)];
                    if v != 0.0 {
                        Some(([i, j, k], v))
                    } else {
                        None
                    }
                })
            })
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Absolute threshold below which coefficients of this polynomial count
    /// as zero.
    pub fn eps(&self) -> f64 {
        EPS_POLY * self.max_abs()
    }

    pub fn is_zero(&self) -> bool {
        self.max_abs() == 0.0
    }

    /// Zero relative to a given scale (used when a polynomial was produced
    /// from inputs of a known magnitude and may be pure noise).
    pub fn is_zero_rel(&self, scale: f64, rel: f64) -> bool {
        self.max_abs() <= rel * scale.max(1e-300)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let dims = [
            self.dims[0].max(o.dims[0]),
            self.dims[1].max(o.dims[1]),
            self.dims[2].max(o.dims[2]),
        ];
        let mut out = Poly {
            dims,
            c: vec![0.0; dims[0] * dims[1] * dims[2]],
        };
        for (e, v) in self.iter_terms() {
            let i = out.idx(e);
            out.c[i] += v;
        }
        for (e, v) in o.iter_terms() {
            let i = out.idx(e);
            out.c[i] += v;
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly {
            dims: self.dims,
            c: self.c.iter().map(|v| v * s).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let dims = [
            self.dims[0] + o.dims[0] - 1,
            self.dims[1] + o.dims[1] - 1,
            self.dims[2] + o.dims[2] - 1,
        ];
        let mut out = Poly {
            dims,
            c: vec![0.0; dims[0] * dims[1] * dims[2]],
        };
        for (e, v) in self.iter_terms() {
            for (f, w) in o.iter_terms() {
                let i = out.idx([e[0] + f[0], e[1] + f[1], e[2] + f[2]]);
                out.c[i] += v * w;
            }
        }
        out
    }

    pub fn eval(&self, x: [f64; 3]) -> f64 {
        // Horner over the flattened nesting
        let mut acc_k = 0.0;
        for k in (0..self.dims[2]).rev() {
            let mut acc_j = 0.0;
            for j in (0..self.dims[1]).rev() {
                let mut acc_i = 0.0;
                for i in (0..self.dims[0]).rev() {
                    acc_i = acc_i * x[0] + self.c[self.idx([i, j, k])];
                }
                acc_j = acc_j * x[1] + acc_i;
            }
            acc_k = acc_k * x[2] + acc_j;
        }
        acc_k
    }

    pub fn partial(&self, axis: usize) -> Poly {
        if self.dims[axis] <= 1 {
            return Poly::zero();
        }
        let mut dims = self.dims;
        dims[axis] -= 1;
        let mut out = Poly {
            dims,
            c: vec![0.0; dims[0] * dims[1] * dims[2]],
        };
        for (e, v) in self.iter_terms() {
            if e[axis] >= 1 {
                let mut f = e;
                f[axis] -= 1;
                let i = out.idx(f);
                out.c[i] += v * e[axis] as f64;
            }
        }
        out
    }

    pub fn gradient(&self) -> [Poly; 3] {
        [self.partial(0), self.partial(1), self.partial(2)]
    }

    /// Degree in one variable, ignoring coefficients below the relative
    /// zero threshold.
    pub fn degree_in(&self, axis: usize) -> usize {
        let eps = self.eps();
        let mut d = 0;
        for (e, v) in self.iter_terms() {
            if v.abs() > eps && e[axis] > d {
                d = e[axis];
            }
        }
        d
    }

    pub fn total_degree(&self) -> usize {
        let eps = self.eps();
        let mut d = 0;
        for (e, v) in self.iter_terms() {
            let t = e[0] + e[1] + e[2];
            if v.abs() > eps && t > d {
                d = t;
            }
        }
        d
    }

    pub fn vars_present(&self) -> [bool; 3] {
        [
            self.degree_in(0) > 0,
            self.degree_in(1) > 0,
            self.degree_in(2) > 0,
        ]
    }

    pub fn num_vars(&self) -> usize {
        self.vars_present().iter().filter(|&&b| b).count()
    }

    /// Drops coefficients at or below the relative zero threshold and
    /// shrinks the storage to the actual degrees.
    pub fn compacted(&self) -> Poly {
        let eps = self.eps();
        let mut dims = [1usize, 1, 1];
        for (e, v) in self.iter_terms() {
            if v.abs() > eps {
                for a in 0..3 {
                    dims[a] = dims[a].max(e[a] + 1);
                }
            }
        }
        let mut out = Poly {
            dims,
            c: vec![0.0; dims[0] * dims[1] * dims[2]],
        };
        for (e, v) in self.iter_terms() {
            if v.abs() > eps && e[0] < dims[0] && e[1] < dims[1] && e[2] < dims[2] {
                let i = out.idx(e);
                out.c[i] = v;
            }
        }
        out
    }

    /// Scaled so the largest coefficient has magnitude 1 (zero poly unchanged).
    pub fn normalized(&self) -> Poly {
        let m = self.max_abs();
        if m == 0.0 {
            self.clone()
        } else {
            self.scale(1.0 / m).compacted()
        }
    }

    /// Coefficients of this polynomial viewed as univariate in `axis` over
    /// the ring of polynomials in the remaining variables; index = exponent.
    pub fn coeffs_in(&self, axis: usize) -> Vec<Poly> {
        let d = self.degree_in(axis);
        let mut out = vec![Poly::zero(); d + 1];
        let eps = self.eps();
        for (e, v) in self.iter_terms() {
            if v.abs() > eps && e[axis] <= d {
                let mut f = e;
                f[axis] = 0;
                let cur = out[e[axis]].coeff(f);
                out[e[axis]].set_coeff(f, cur + v);
            }
        }
        out
    }

    pub fn from_coeffs_in(axis: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        let x = Poly::var(axis);
        let mut xp = Poly::constant(1.0);
        for c in coeffs {
            out = out.add(&c.mul(&xp));
            xp = xp.mul(&x);
        }
        out
    }

    /// If univariate (or constant), the dense coefficient list in the single
    /// present variable, plus that variable's index.
    pub fn as_univariate(&self) -> Option<(usize, Vec<f64>)> {
        let present = self.vars_present();
        let n = present.iter().filter(|&&b| b).count();
        if n > 1 {
            return None;
        }
        let axis = present.iter().position(|&b| b).unwrap_or(0);
        let d = self.degree_in(axis);
        let mut out = vec![0.0; d + 1];
        for (e, v) in self.iter_terms() {
            if e[axis] <= d && e[(axis + 1) % 3] == 0 && e[(axis + 2) % 3] == 0 {
                out[e[axis]] += v;
            }
        }
        Some((axis, out))
    }

    /// Substitutes variable `axis := expr` where `expr` has degree <= 1 and
    /// does not involve `axis`.
    pub fn substitute(&self, axis: usize, expr: &Poly) -> Poly {
        debug_assert_eq!(expr.degree_in(axis), 0);
        let coeffs = self.coeffs_in(axis);
        let mut out = Poly::zero();
        for c in coeffs.iter().rev() {
            out = out.mul(expr).add(c);
        }
        out
    }

    /// Relabels variables: new variable `perm[a]` takes the role of old `a`.
    pub fn permute_vars(&self, perm: [usize; 3]) -> Poly {
        let mut dims = [1usize; 3];
        for a in 0..3 {
            dims[perm[a]] = self.dims[a];
        }
        let mut out = Poly {
            dims,
            c: vec![0.0; dims[0] * dims[1] * dims[2]],
        };
        for (e, v) in self.iter_terms() {
            let mut f = [0usize; 3];
            for a in 0..3 {
                f[perm[a]] = e[a];
            }
            let i = out.idx(f);
            out.c[i] += v;
        }
        out
    }

    /// Human-readable monomial dump for debugging.
    pub fn dump(&self) -> String {
        let names = ["x", "y", "z"];
        let mut parts: Vec<String> = Vec::new();
        for (e, v) in self.iter_terms() {
            let mut s = format!("{v:+.6e}");
            for a in 0..3 {
                match e[a] {
                    0 => {}
                    1 => s.push_str(&format!("*{}", names[a])),
                    k => s.push_str(&format!("*{}^{}", names[a], k)),
                }
            }
            parts.push(s);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_eval_agree() {
        // (1 + x)(1 + y)(1 + z)
        let p = Poly::linear(1.0, [1.0, 0.0, 0.0])
            .mul(&Poly::linear(1.0, [0.0, 1.0, 0.0]))
            .mul(&Poly::linear(1.0, [0.0, 0.0, 1.0]));
        assert_eq!(p.total_degree(), 3);
        let x = [0.3, -1.7, 2.5];
        let direct = (1.0 + x[0]) * (1.0 + x[1]) * (1.0 + x[2]);
        assert!((p.eval(x) - direct).abs() < 1e-12);
        assert!((p.coeff([1, 1, 1]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_of_product() {
        // d/dx (x^2 y) = 2 x y
        let p = Poly::var(0).mul(&Poly::var(0)).mul(&Poly::var(1));
        let px = p.partial(0);
        assert!((px.eval([3.0, 5.0, 0.0]) - 30.0).abs() < 1e-12);
    }

    #[test]
    fn substitute_linear() {
        // f = x^2 + y^2 - 1, x := y  ->  2y^2 - 1
        let f = Poly::var(0)
            .mul(&Poly::var(0))
            .add(&Poly::var(1).mul(&Poly::var(1)))
            .add(&Poly::constant(-1.0));
        let g = f.substitute(0, &Poly::var(1));
        assert!((g.eval([0.0, 2.0, 0.0]) - 7.0).abs() < 1e-12);
        assert_eq!(g.degree_in(0), 0);
    }

    #[test]
    fn univariate_extraction() {
        let f = Poly::var(2).mul(&Poly::var(2)).add(&Poly::constant(4.0));
        let (axis, c) = f.as_univariate().unwrap();
        assert_eq!(axis, 2);
        assert_eq!(c, vec![4.0, 0.0, 1.0]);
    }
}
