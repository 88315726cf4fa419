//! Sylvester resultants with polynomial entries.

use super::{Poly, PolyError};

/// Resultant of `f` and `g` with respect to variable `axis`, as the
/// determinant of the Sylvester matrix over the ring of polynomials in the
/// remaining variables. When one argument is constant in `axis` the
/// convention `res = f^j` for `m_j = 0` applies; both constant is an error.
pub fn resultant(f: &Poly, g: &Poly, axis: usize) -> Result<Poly, PolyError> {
    let m1 = f.degree_in(axis);
    let m2 = g.degree_in(axis);
    if m1 == 0 && m2 == 0 {
        return Err(PolyError::BothConstantInVar);
    }
    if m1 == 0 {
        return Ok(f.compacted());
    }
    if m2 == 0 {
        return Ok(g.compacted());
    }

    let fc = f.coeffs_in(axis);
    let gc = g.coeffs_in(axis);
    let n = m1 + m2;

    // entry (r, c): first m2 columns carry f's coefficients (descending, each
    // column shifted down by one), remaining m1 columns carry g's
    let entry = |r: usize, c: usize| -> Poly {
        if c < m2 {
            if r >= c && r - c <= m1 {
                fc[m1 - (r - c)].clone()
            } else {
                Poly::zero()
            }
        } else {
            let c2 = c - m2;
            if r >= c2 && r - c2 <= m2 {
                gc[m2 - (r - c2)].clone()
            } else {
                Poly::zero()
            }
        }
    };

    // determinant by expansion along columns, memoized on the set of unused rows
    let full: u32 = (1u32 << n) - 1;
    let mut memo: Vec<Option<Poly>> = vec![None; (full as usize) + 1];
    let det = det_rec(&entry, n, full, &mut memo);
    Ok(det.compacted())
}

fn det_rec(
    entry: &dyn Fn(usize, usize) -> Poly,
    n: usize,
    rows: u32,
    memo: &mut Vec<Option<Poly>>,
) -> Poly {
    if rows == 0 {
        return Poly::constant(1.0);
    }
    if let Some(p) = &memo[rows as usize] {
        return p.clone();
    }
    let col = n - rows.count_ones() as usize;
    let mut acc = Poly::zero();
    let mut sign = 1.0;
    for r in 0..n {
        if rows & (1 << r) != 0 {
            let e = entry(r, col);
            if !e.is_zero() {
                let sub = det_rec(entry, n, rows & !(1 << r), memo);
                acc = acc.add(&e.mul(&sub).scale(sign));
            }
            sign = -sign;
        }
    }
    memo[rows as usize] = Some(acc.clone());
    acc
}
