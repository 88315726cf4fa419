//! Dense two-phase simplex for small feasibility problems.
//!
//! Everything the search needs is feasibility of systems with at most ~9 free
//! variables and a few dozen rows, so the solver is a plain dense tableau.
//! Pivoting starts with the steepest (most negative reduced cost) column and
//! falls back to Bland's rule after an iteration budget, which keeps runs
//! fast in practice and cycle-free in the worst case; for a fixed input
//! ordering the pivot sequence, and hence the answer, is deterministic.

/// Feasibility problem over free variables `x in R^n`:
/// `eq_rows . x = eq_rhs` and `le_rows . x <= le_rhs`.
#[derive(Debug, Clone, Default)]
pub struct LpProblem {
    pub nvars: usize,
    pub eqs: Vec<(Vec<f64>, f64)>,
    pub leqs: Vec<(Vec<f64>, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Feasible(Vec<f64>),
    Empty,
}

impl LpProblem {
    pub fn new(nvars: usize) -> Self {
        LpProblem {
            nvars,
            eqs: Vec::new(),
            leqs: Vec::new(),
        }
    }

    pub fn eq(&mut self, row: Vec<f64>, rhs: f64) {
        debug_assert_eq!(row.len(), self.nvars);
        self.eqs.push((row, rhs));
    }

    pub fn le(&mut self, row: Vec<f64>, rhs: f64) {
        debug_assert_eq!(row.len(), self.nvars);
        self.leqs.push((row, rhs));
    }

    /// Max relative violation of any constraint at `x` (0 inside).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let mut v: f64 = 0.0;
        for (row, rhs) in &self.eqs {
            let s: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            v = v.max((s - rhs).abs() / row_scale(row, *rhs));
        }
        for (row, rhs) in &self.leqs {
            let s: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            v = v.max((s - rhs) / row_scale(row, *rhs));
        }
        v
    }
}

fn row_scale(row: &[f64], rhs: f64) -> f64 {
    row.iter()
        .fold(rhs.abs(), |m, a| m.max(a.abs()))
        .max(1e-30)
}

const EPS_PIVOT: f64 = 1e-11;
const EPS_FEAS: f64 = 1e-9;

/// Dense tableau in standard form: minimize c.x st A x = b, x >= 0, b >= 0.
/// Rows are stored flat, `stride = ncols + 1` with the rhs in the last slot.
struct Tableau {
    ncols: usize,
    stride: usize,
    m: usize,
    a: Vec<f64>,
    basis: Vec<usize>,
    cost: Vec<f64>, // length stride; last entry is -objective
}

impl Tableau {
    fn set_objective(&mut self, c: &[f64]) {
        self.cost[..self.ncols].copy_from_slice(c);
        self.cost[self.ncols] = 0.0;
        for r in 0..self.m {
            let cb = self.cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.a[r * self.stride..(r + 1) * self.stride];
                for (k, v) in row.iter().enumerate() {
                    self.cost[k] -= cb * v;
                }
            }
        }
    }

    #[inline]
    fn row(&self, r: usize) -> &[f64] {
        &self.a[r * self.stride..(r + 1) * self.stride]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let stride = self.stride;
        let piv = self.a[r * stride + c];
        let inv = 1.0 / piv;
        for v in self.a[r * stride..(r + 1) * stride].iter_mut() {
            *v *= inv;
        }
        self.a[r * stride + c] = 1.0;
        for i in 0..self.m {
            if i != r {
                let f = self.a[i * stride + c];
                if f != 0.0 {
                    let (lo, hi) = if i < r {
                        let (a, b) = self.a.split_at_mut(r * stride);
                        (&mut a[i * stride..(i + 1) * stride], &b[..stride])
                    } else {
                        let (a, b) = self.a.split_at_mut(i * stride);
                        (&mut b[..stride], &a[r * stride..(r + 1) * stride])
                    };
                    for (x, y) in lo.iter_mut().zip(hi.iter()) {
                        *x -= f * y;
                    }
                    lo[c] = 0.0;
                }
            }
        }
        let f = self.cost[c];
        if f != 0.0 {
            let row = &self.a[r * stride..(r + 1) * stride];
            for (k, v) in row.iter().enumerate() {
                self.cost[k] -= f * v;
            }
            self.cost[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Runs the simplex on the current objective. `allowed` masks columns
    /// permitted to enter. Returns false when unbounded.
    fn solve(&mut self, allowed: &dyn Fn(usize) -> bool) -> bool {
        let budget = 6 * (self.m + self.ncols);
        let mut iter = 0usize;
        loop {
            iter += 1;
            let bland = iter > budget;
            // entering column: steepest descent first, Bland after the budget
            let mut enter = None;
            let mut best = -EPS_PIVOT;
            for j in 0..self.ncols {
                let cj = self.cost[j];
                if cj < best && allowed(j) {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = cj;
                }
            }
            let Some(j) = enter else { return true };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let a = self.a[r * self.stride + j];
                if a > EPS_PIVOT {
                    let ratio = self.a[r * self.stride + self.ncols] / a;
                    match leave {
                        None => leave = Some((r, ratio)),
                        Some((lr, lt)) => {
                            if ratio < lt - 1e-13
                                || (ratio <= lt + 1e-13 && self.basis[r] < self.basis[lr])
                            {
                                leave = Some((r, ratio));
                            }
                        }
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, j),
                None => return false,
            }
        }
    }

    fn objective(&self) -> f64 {
        -self.cost[self.ncols]
    }

    fn var_value(&self, j: usize) -> f64 {
        for (r, &bj) in self.basis.iter().enumerate() {
            if bj == j {
                return self.a[r * self.stride + self.ncols];
            }
        }
        0.0
    }
}

/// Standard-form construction: free vars split into positive parts, slack
/// per inequality, artificial per row lacking a natural basis column.
/// Columns: [x+ (n), x- (n), slacks (m_le), artificials].
struct Standard {
    tab: Tableau,
    n: usize,
    nslack: usize,
    nart: usize,
}

fn build_standard(p: &LpProblem) -> Standard {
    let n = p.nvars;
    let m_le = p.leqs.len();
    let m = p.eqs.len() + m_le;
    let base_cols = 2 * n + m_le;

    // first pass: who needs an artificial column
    let mut needs_art = Vec::with_capacity(m);
    for (_, rhs) in &p.eqs {
        let _ = rhs;
        needs_art.push(true);
    }
    for (row, rhs) in &p.leqs {
        // after sign normalization the slack is a basis column iff rhs >= 0
        let sc = row_scale(row, *rhs);
        needs_art.push(rhs / sc < 0.0);
    }
    let nart = needs_art.iter().filter(|&&b| b).count();
    let ncols = base_cols + nart;
    let stride = ncols + 1;

    let mut a = vec![0.0; m * stride];
    let mut basis = vec![0usize; m];
    let mut art_idx = 0;
    let fill = |r: usize,
                    row: &[f64],
                    rhs: f64,
                    slack: Option<usize>,
                    a: &mut [f64],
                    basis: &mut [usize],
                    art_idx: &mut usize| {
        let sc = row_scale(row, rhs);
        let flip = if rhs / sc < 0.0 { -1.0 } else { 1.0 };
        let base = r * stride;
        for (k, &v) in row.iter().enumerate() {
            let w = flip * v / sc;
            a[base + k] = w;
            a[base + n + k] = -w;
        }
        if let Some(s) = slack {
            a[base + 2 * n + s] = flip;
        }
        a[base + ncols] = flip * rhs / sc;
        let natural = slack.is_some() && flip > 0.0;
        if natural {
            basis[r] = 2 * n + slack.unwrap();
        } else {
            a[base + base_cols + *art_idx] = 1.0;
            basis[r] = base_cols + *art_idx;
            *art_idx += 1;
        }
    };
    let mut r = 0;
    for (row, rhs) in &p.eqs {
        fill(r, row, *rhs, None, &mut a, &mut basis, &mut art_idx);
        r += 1;
    }
    for (i, (row, rhs)) in p.leqs.iter().enumerate() {
        fill(r, row, *rhs, Some(i), &mut a, &mut basis, &mut art_idx);
        r += 1;
    }

    Standard {
        tab: Tableau {
            ncols,
            stride,
            m,
            a,
            basis,
            cost: vec![0.0; stride],
        },
        n,
        nslack: m_le,
        nart,
    }
}

impl Standard {
    fn art_start(&self) -> usize {
        2 * self.n + self.nslack
    }

    /// Phase 1: true when a feasible basis was reached.
    fn phase1(&mut self) -> bool {
        if self.nart > 0 {
            let mut c = vec![0.0; self.tab.ncols];
            for j in self.art_start()..self.tab.ncols {
                c[j] = 1.0;
            }
            self.tab.set_objective(&c);
            self.tab.solve(&|_| true);
            if self.tab.objective() > EPS_FEAS {
                return false;
            }
            self.evict_artificials();
        }
        true
    }

    /// Pivot zero-level artificials out of the basis where possible.
    fn evict_artificials(&mut self) {
        let astart = self.art_start();
        for r in 0..self.tab.m {
            if self.tab.basis[r] >= astart {
                for j in 0..astart {
                    if self.tab.row(r)[j].abs() > 1e-9 {
                        self.tab.pivot(r, j);
                        break;
                    }
                }
                // a redundant row keeps its artificial basic at level zero
            }
        }
    }

    fn point(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for k in 0..self.n {
            x[k] = self.tab.var_value(k) - self.tab.var_value(self.n + k);
        }
        x
    }
}

/// Finds a point satisfying all constraints, or certifies emptiness.
/// Deterministic for a fixed row ordering.
pub fn lp_feasible(p: &LpProblem) -> LpOutcome {
    let mut std = build_standard(p);
    if !std.phase1() {
        return LpOutcome::Empty;
    }
    let x = std.point();
    debug_assert!(
        p.violation(&x) <= 100.0 * EPS_FEAS,
        "simplex returned infeasible point"
    );
    LpOutcome::Feasible(x)
}

/// Slack demanded of strict rows, relative to unit-normalized rows.
pub const EPS_STRICT: f64 = 1e-7;

/// Like [`lp_feasible`] but rows listed in `strict` (indices into `p.leqs`)
/// must hold with slack at least [`EPS_STRICT`]. Realized by maximizing the
/// common minimum slack `t` and testing its optimum, which keeps the
/// Feasible/Empty verdict reproducible.
pub fn lp_feasible_strict(p: &LpProblem, strict: &[usize]) -> LpOutcome {
    if strict.is_empty() {
        return lp_feasible(p);
    }
    // extended problem over (x, t): strict rows become row.x + t*scale <= rhs
    let mut q = LpProblem::new(p.nvars + 1);
    for (row, rhs) in &p.eqs {
        let mut r = row.clone();
        r.push(0.0);
        q.eq(r, *rhs);
    }
    for (i, (row, rhs)) in p.leqs.iter().enumerate() {
        let mut r = row.clone();
        r.push(if strict.contains(&i) {
            row_scale(row, *rhs)
        } else {
            0.0
        });
        q.le(r, *rhs);
    }
    // cap keeps the objective bounded
    let mut cap = vec![0.0; p.nvars + 1];
    cap[p.nvars] = 1.0;
    q.le(cap, 1.0);

    let mut std = build_standard(&q);
    if !std.phase1() {
        return LpOutcome::Empty;
    }
    // phase 2: maximize t = (t+ - t-)
    let mut c = vec![0.0; std.tab.ncols];
    c[q.nvars - 1] = -1.0;
    c[q.nvars + q.nvars - 1] = 1.0;
    let astart = std.art_start();
    std.tab.set_objective(&c);
    std.tab.solve(&|j| j < astart);
    let xt = std.point();
    let t = xt[p.nvars];
    if t >= EPS_STRICT {
        LpOutcome::Feasible(xt[..p.nvars].to_vec())
    } else {
        LpOutcome::Empty
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_feasible() {
        // 0 <= x <= 1
        let mut p = LpProblem::new(1);
        p.le(vec![-1.0], 0.0);
        p.le(vec![1.0], 1.0);
        match lp_feasible(&p) {
            LpOutcome::Feasible(x) => assert!((-1e-9..=1.0 + 1e-9).contains(&x[0])),
            LpOutcome::Empty => panic!("interval should be feasible"),
        }
    }

    #[test]
    fn contradictory_empty() {
        // x <= 0 and x >= 1
        let mut p = LpProblem::new(1);
        p.le(vec![1.0], 0.0);
        p.le(vec![-1.0], -1.0);
        assert_eq!(lp_feasible(&p), LpOutcome::Empty);
    }

    #[test]
    fn equality_and_inequality() {
        // x + y = 2, x <= 0.5 -> y >= 1.5
        let mut p = LpProblem::new(2);
        p.eq(vec![1.0, 1.0], 2.0);
        p.le(vec![1.0, 0.0], 0.5);
        match lp_feasible(&p) {
            LpOutcome::Feasible(x) => {
                assert!((x[0] + x[1] - 2.0).abs() < 1e-8);
                assert!(x[0] <= 0.5 + 1e-8);
            }
            LpOutcome::Empty => panic!(),
        }
    }

    #[test]
    fn strict_single_side() {
        // x < 0
        let mut p = LpProblem::new(1);
        p.le(vec![1.0], 0.0);
        match lp_feasible_strict(&p, &[0]) {
            LpOutcome::Feasible(x) => assert!(x[0] <= -EPS_STRICT * 0.5),
            LpOutcome::Empty => panic!(),
        }
    }

    #[test]
    fn strict_contradiction_empty() {
        // x < 0 and x > 0
        let mut p = LpProblem::new(1);
        p.le(vec![1.0], 0.0);
        p.le(vec![-1.0], 0.0);
        assert_eq!(lp_feasible_strict(&p, &[0, 1]), LpOutcome::Empty);
    }

    #[test]
    fn strict_mixed() {
        // x >= 0 (weak), x < 1 (strict)
        let mut p = LpProblem::new(1);
        p.le(vec![-1.0], 0.0);
        p.le(vec![1.0], 1.0);
        match lp_feasible_strict(&p, &[1]) {
            LpOutcome::Feasible(x) => {
                assert!(x[0] >= -1e-9);
                assert!(x[0] <= 1.0 - EPS_STRICT * 0.5);
            }
            LpOutcome::Empty => panic!(),
        }
    }

    #[test]
    fn random_feasible_systems_never_empty() {
        // systems built around a known interior point must come back feasible
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..200 {
            let n = 2 + (rng().abs() * 6.0) as usize;
            let center: Vec<f64> = (0..n).map(|_| 3.0 * rng()).collect();
            let mut p = LpProblem::new(n);
            for _ in 0..(2 * n + 3) {
                let row: Vec<f64> = (0..n).map(|_| rng()).collect();
                let s: f64 = row.iter().zip(&center).map(|(a, b)| a * b).sum();
                p.le(row, s + 0.1 + rng().abs());
            }
            match lp_feasible(&p) {
                LpOutcome::Feasible(x) => assert!(p.violation(&x) <= 1e-7),
                LpOutcome::Empty => panic!("constructed-feasible system reported empty"),
            }
        }
    }

    #[test]
    fn random_empty_systems_detected() {
        // a pair of parallel contradicting constraints hidden among noise
        let mut state = 0x1234567890abcdefu64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..100 {
            let n = 2 + (rng().abs() * 5.0) as usize;
            let mut p = LpProblem::new(n);
            let dir: Vec<f64> = (0..n).map(|_| rng()).collect();
            p.le(dir.clone(), 1.0);
            p.le(dir.iter().map(|v| -v).collect(), -2.0); // dir.x >= 2
            for _ in 0..n {
                let row: Vec<f64> = (0..n).map(|_| rng()).collect();
                p.le(row, 5.0);
            }
            assert_eq!(lp_feasible(&p), LpOutcome::Empty);
        }
    }
}
