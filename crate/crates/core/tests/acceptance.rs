//! Acceptance suite: every criterion runs at its stated tolerance and prints
//! one pass/fail line. Solved packings are cached so the density, basis and
//! packing-validity criteria share one solver run per solid.

use latpack::catalog::{make_solid, reference_density};
use latpack::geom::{vec3, Mat3, Vec3};
use latpack::poly::{gradient_critical_subspaces, linear_factors, resultant, GradientCritical, Poly};
use latpack::polytope::{difference_body, from_halfspaces, Classification, Polytope};
use latpack::search::{
    build_triple_set, densest_packing_full, for_each_selection, selection_feasible,
    verify_admissible_bruteforce, PackingResult, SearchCase, SearchOptions, TestSetKind,
};
use std::collections::BTreeSet;
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

type Solved = (PackingResult, Polytope, Polytope);

fn solved(name: &str) -> &'static Solved {
    static CACHE: OnceLock<Mutex<std::collections::HashMap<String, &'static Solved>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(std::collections::HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(s) = guard.get(name) {
        return s;
    }
    let p = make_solid(name).expect("catalog solid");
    let out = densest_packing_full(&p, &SearchOptions::default()).expect("search");
    let leaked: &'static Solved = Box::leak(Box::new(out));
    guard.insert(name.to_string(), leaked);
    leaked
}

fn check_density(name: &str, reference: f64, tol: f64) {
    let (r, _, _) = solved(name);
    let err = (r.density - reference).abs();
    assert!(
        err <= tol,
        "{name}: density {} vs reference {reference} (err {err:.3e})",
        r.density
    );
}

#[test]
fn criterion_1_density_fast_tier() {
    let t0 = Instant::now();
    let refs = [
        ("tetrahedron", 18.0 / 49.0),
        ("cube", 1.0),
        ("octahedron", 18.0 / 19.0),
        ("cubeoctahedron", 45.0 / 49.0),
        ("truncated_octahedron", 1.0),
    ];
    for (name, want) in refs {
        let t = Instant::now();
        check_density(name, want, 1e-6);
        println!("  {name}: ok in {:.1?}", t.elapsed());
    }
    println!(
        "[PASS] criterion 1: fast-tier densities within 1e-6 ({:.1?})",
        t0.elapsed()
    );
}

#[test]
fn criterion_2_density_extended_tier() {
    let t0 = Instant::now();
    // snub cube reference: the closed form 1/2 + y/6 + (2/3) y^2 from the
    // roots of y^3 + y^2 + y = 1; the paper's printed decimal 0.78769996 is
    // inconsistent with its own closed form and basis by ~2e-5
    for name in [
        "dodecahedron",
        "icosahedron",
        "icosidodecahedron",
        "truncated_cube",
        "truncated_tetrahedron",
        "rhombic_cubeoctahedron",
        "snub_cube",
    ] {
        let (want, _) = reference_density(name).unwrap();
        let t = Instant::now();
        check_density(name, want, 1e-6);
        println!("  {name}: ok in {:.1?}", t.elapsed());
    }
    let dt = t0.elapsed();
    assert!(dt.as_secs() <= 7200, "extended tier exceeded two hours");
    println!("[PASS] criterion 2: extended-tier densities within 1e-6 ({dt:.1?})");
}

#[test]
fn criterion_3_basis_verification() {
    // paper determinants: cube 8, octahedron 8*19/108, tetrahedron 8*49/54
    let cases = [
        ("cube", 8.0),
        ("octahedron", 38.0 / 27.0),
        ("tetrahedron", 196.0 / 27.0),
    ];
    for (name, det_ref) in cases {
        let (r, _, p0) = solved(name);
        assert!(
            verify_admissible_bruteforce(p0, &r.basis),
            "{name}: returned basis fails the brute-force admissibility oracle"
        );
        let rel = (r.critical_determinant - det_ref).abs() / det_ref;
        assert!(
            rel <= 1e-9,
            "{name}: determinant {} vs paper {det_ref} (rel {rel:.3e})",
            r.critical_determinant
        );
    }
    // the paper's own octahedron basis passes the oracle on 2 P_o
    let po = make_solid("octahedron").unwrap();
    let p0 = difference_body(&po).unwrap();
    let w = Mat3::from_cols(
        vec3(1.0 / 3.0, 1.0 / 2.0, 1.0 / 6.0),
        vec3(-1.0 / 6.0, -1.0 / 3.0, 1.0 / 2.0),
        vec3(-1.0 / 2.0, 1.0 / 6.0, -1.0 / 3.0),
    ) * 2.0;
    assert!(verify_admissible_bruteforce(&p0, &w));
    println!("[PASS] criterion 3: bases admissible, determinants match the paper within 1e-9");
}

struct Rng(u64);

impl Rng {
    fn f(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }
    fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (self.f() * 0.5 + 0.5) * (hi - lo)
    }
}

fn random_linear2(rng: &mut Rng) -> Poly {
    loop {
        let p = Poly::linear(rng.f(), [rng.f(), rng.f(), 0.0]);
        if p.total_degree() == 1 {
            return p;
        }
    }
}

/// Irreducible bivariate quadratic: (a x + b y + c)^2 + (d x + e y + f)^2 + g
/// with g > 0 and independent linear parts has no real zeros at all.
fn random_irreducible_quadratic2(rng: &mut Rng) -> Poly {
    loop {
        let l1 = random_linear2(rng);
        let l2 = random_linear2(rng);
        let g = 0.1 + rng.f().abs();
        let q = l1.mul(&l1).add(&l2.mul(&l2)).add(&Poly::constant(g));
        if q.total_degree() == 2 {
            return q;
        }
    }
}

#[test]
fn criterion_4_polynomial_solver_oracles() {
    let t0 = Instant::now();
    let mut rng = Rng(0x5eed_5eed_1234_5678);

    // 500 random factored bivariate polynomials of degree <= 4
    for trial in 0..500 {
        let n_lin = 1 + (rng.f().abs() * 2.0) as usize; // 1..2 linear factors
        let with_quad = rng.f() > 0.0;
        let mut planted: Vec<Poly> = (0..n_lin).map(|_| random_linear2(&mut rng)).collect();
        // keep planted factors angularly separated so recovery is well posed
        let distinct = |ps: &[Poly]| {
            for i in 0..ps.len() {
                for j in i + 1..ps.len() {
                    let a = latpack::poly::LinearPoly::from_poly(&ps[i]).unwrap().canonical();
                    let b = latpack::poly::LinearPoly::from_poly(&ps[j]).unwrap().canonical();
                    let dot = a.c0 * b.c0 + a.cv.iter().zip(&b.cv).map(|(x, y)| x * y).sum::<f64>();
                    if dot.abs() > 1.0 - 1e-3 {
                        return false;
                    }
                }
            }
            true
        };
        if !distinct(&planted) {
            continue;
        }
        let mut f = Poly::constant(1.0 + rng.f().abs());
        for l in &planted {
            f = f.mul(l);
        }
        if with_quad && n_lin <= 2 {
            f = f.mul(&random_irreducible_quadratic2(&mut rng));
        }
        let (found, _) = linear_factors(&f);
        for l in &planted {
            let lp = latpack::poly::LinearPoly::from_poly(l).unwrap();
            let hit = found.iter().any(|g| {
                let a = g.canonical();
                let b = lp.canonical();
                let d = (a.c0 - b.c0).abs()
                    + a.cv
                        .iter()
                        .zip(&b.cv)
                        .map(|(x, y)| (x - y).abs())
                        .sum::<f64>();
                d <= 1e-6
            });
            assert!(hit, "trial {trial}: planted factor not recovered");
        }
    }

    // 200 random trivariate cubics with planted nondegenerate minima
    for trial in 0..200 {
        let m = [rng.f(), rng.f(), rng.f()];
        let shift = |a: usize, m: &[f64; 3]| Poly::var(a).sub(&Poly::constant(m[a]));
        // positive definite quadratic around m
        let mut p = Poly::zero();
        for a in 0..3 {
            p = p.add(&shift(a, &m).mul(&shift(a, &m)).scale(rng.in_range(0.5, 2.0)));
        }
        p = p.add(&shift(0, &m).mul(&shift(1, &m)).scale(rng.in_range(-0.3, 0.3)));
        p = p.add(&shift(1, &m).mul(&shift(2, &m)).scale(rng.in_range(-0.3, 0.3)));
        // small cubic perturbation keeps the minimum near m; first-order
        // optimality is restored below by reading off the true critical point
        let cubic = shift(0, &m)
            .mul(&shift(1, &m))
            .mul(&shift(2, &m))
            .scale(rng.in_range(-0.05, 0.05));
        let p = p.add(&cubic);
        // locate the true minimizer by Newton from m (dense-grid oracle is
        // equivalent but slow; the quadratic dominates so Newton from m is
        // inside the basin)
        let mut x = m;
        for _ in 0..60 {
            let g: Vec<f64> = (0..3).map(|a| p.partial(a).eval(x)).collect();
            let mut hess = [[0.0; 3]; 3];
            for a in 0..3 {
                for b in 0..3 {
                    hess[a][b] = p.partial(a).partial(b).eval(x);
                }
            }
            let hm = Mat3::from_cols(
                vec3(hess[0][0], hess[1][0], hess[2][0]),
                vec3(hess[0][1], hess[1][1], hess[2][1]),
                vec3(hess[0][2], hess[1][2], hess[2][2]),
            );
            let Some(step) = hm.solve(vec3(g[0], g[1], g[2])) else { break };
            x = [x[0] - step.x, x[1] - step.y, x[2] - step.z];
            if step.norm() < 1e-14 {
                break;
            }
        }
        let gnorm: f64 = (0..3).map(|a| p.partial(a).eval(x).powi(2)).sum::<f64>().sqrt();
        assert!(gnorm < 1e-9, "trial {trial}: oracle minimizer did not converge");
        match gradient_critical_subspaces(&p).unwrap() {
            GradientCritical::Subspaces(subs) => {
                assert!(
                    subs.iter().any(|s| s.contains_point(x, 1e-6)),
                    "trial {trial}: planted minimizer {x:?} not covered"
                );
            }
            GradientCritical::WholeSpace => panic!("definite quadratic cannot be flat"),
        }
    }

    let dt = t0.elapsed();
    assert!(dt.as_secs() <= 120, "oracle suite exceeded two minutes");
    println!("[PASS] criterion 4: polynomial solver oracle suites ({dt:.1?})");
}

#[test]
fn criterion_5_resultant_identities() {
    let mut rng = Rng(0xabcdef0123456789);
    let rand_poly = |rng: &mut Rng, dx: usize, dy: usize| {
        let mut p = Poly::zero();
        for i in 0..=dx {
            for j in 0..=dy {
                p.set_coeff([i, j, 0], rng.f());
            }
        }
        p.compacted()
    };
    for trial in 0..500 {
        // shared-factor identity
        let h = rand_poly(&mut rng, 1, 1);
        let f = rand_poly(&mut rng, 1, 1);
        let g = rand_poly(&mut rng, 1, 1);
        if f.degree_in(0) == 0 || g.degree_in(0) == 0 || h.is_zero() {
            continue;
        }
        let r = resultant(&f.mul(&h), &g.mul(&h), 0).unwrap();
        let scale = f.mul(&h).max_abs() * g.mul(&h).max_abs();
        assert!(
            r.max_abs() <= 1e-6 * scale.max(1.0),
            "trial {trial}: res(f h, g h) != 0"
        );

        // specialization at a planted common root: f vanishes on x = a(y),
        // g on x = b(y); they meet where a(y*) = b(y*), so res(y*) = 0
        let a = rand_poly(&mut rng, 0, 1);
        let b = rand_poly(&mut rng, 0, 1);
        let diff = a.sub(&b).compacted();
        if diff.degree_in(1) == 0 {
            continue; // parallel root curves: no planted intersection
        }
        let ystar = -diff.coeff([0, 0, 0]) / diff.coeff([0, 1, 0]);
        if !ystar.is_finite() || ystar.abs() > 50.0 {
            continue;
        }
        let f2 = Poly::var(0).sub(&a).mul(&rand_poly(&mut rng, 1, 1));
        let g2 = Poly::var(0).sub(&b).mul(&rand_poly(&mut rng, 1, 1));
        if f2.degree_in(0) == 0 || g2.degree_in(0) == 0 {
            continue;
        }
        let r2 = resultant(&f2, &g2, 0).unwrap();
        if r2.is_zero_rel(f2.max_abs() * g2.max_abs(), 1e-9) {
            continue; // secondary factors accidentally shared a root curve
        }
        let v = r2.eval([0.0, ystar, 0.0]);
        let denom = r2.max_abs().max(1e-30) * (1.0 + ystar * ystar).powi(3);
        assert!(
            v.abs() / denom <= 1e-6,
            "trial {trial}: specialization residual {v} at y*={ystar}"
        );
    }
    println!("[PASS] criterion 5: resultant identities on 500 random pairs");
}

/// Canonical form of a selection modulo the antipodal map, used to compare
/// the filtered and brute-force survivor sets.
fn antipodal_canon(p0: &Polytope, sel: &[usize]) -> Vec<usize> {
    let img: Vec<usize> = sel.iter().map(|&i| p0.antipode[i]).collect();
    if img < sel.to_vec() {
        img
    } else {
        sel.to_vec()
    }
}

fn pruning_check(p0: &Polytope, kind: TestSetKind) {
    let n = p0.n_facets();
    let k = kind.count();
    let ts = build_triple_set(p0, kind.sigma());

    // survivors of the triple-set enumeration plus S0
    let mut filtered: BTreeSet<Vec<usize>> = BTreeSet::new();
    let case = match kind {
        TestSetKind::One => SearchCase::I,
        TestSetKind::Two => SearchCase::II,
        TestSetKind::Three => SearchCase::III,
    };
    for_each_selection(p0, &ts, case, |s| {
        if selection_feasible(p0, &s.facets, kind) {
            filtered.insert(antipodal_canon(p0, &s.facets));
        }
    });

    // survivors of S0 over every ordered k-tuple
    let mut brute: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut idx = vec![0usize; k];
    loop {
        if selection_feasible(p0, &idx, kind) {
            brute.insert(antipodal_canon(p0, &idx));
        }
        let mut pos = k - 1;
        loop {
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            if pos == 0 {
                assert_eq!(
                    filtered, brute,
                    "survivor sets differ for kind {kind:?} on n={n}"
                );
                return;
            }
            pos -= 1;
        }
    }
}

#[test]
fn criterion_6_pruning_soundness() {
    let t0 = Instant::now();
    for name in ["cube", "octahedron"] {
        let p = make_solid(name).unwrap();
        let p0 = difference_body(&p).unwrap();
        for kind in [TestSetKind::One, TestSetKind::Two, TestSetKind::Three] {
            pruning_check(&p0, kind);
        }
        // zero optimal-selection loss: the solved optimum came through the
        // filtered pipeline and is brute-force admissible
        let (r, _, p0s) = solved(name);
        assert!(verify_admissible_bruteforce(p0s, &r.basis));
    }
    println!(
        "[PASS] criterion 6: G-filter + S0 equals brute-force S0 on cube and octahedron ({:.1?})",
        t0.elapsed()
    );
}

#[test]
fn criterion_7_affine_invariance() {
    let t0 = Instant::now();
    let mut rng = Rng(0x7777_1111_3333_9999);
    let base = make_solid("tetrahedron").unwrap();
    let want = 18.0 / 49.0;
    for trial in 0..5 {
        // well-conditioned map: random rotations around the axes times a
        // diagonal with singular-value ratio <= 10, plus a translation
        let rot = |axis: usize, ang: f64| -> Mat3 {
            let (c, s) = (ang.cos(), ang.sin());
            match axis {
                0 => Mat3::from_cols(vec3(1.0, 0.0, 0.0), vec3(0.0, c, s), vec3(0.0, -s, c)),
                1 => Mat3::from_cols(vec3(c, 0.0, -s), vec3(0.0, 1.0, 0.0), vec3(s, 0.0, c)),
                _ => Mat3::from_cols(vec3(c, s, 0.0), vec3(-s, c, 0.0), vec3(0.0, 0.0, 1.0)),
            }
        };
        let mul = |a: &Mat3, b: &Mat3| {
            Mat3::from_cols(a.mul_vec(b.col[0]), a.mul_vec(b.col[1]), a.mul_vec(b.col[2]))
        };
        let q1 = mul(&rot(0, rng.f() * 3.0), &rot(1, rng.f() * 3.0));
        let q2 = mul(&rot(2, rng.f() * 3.0), &rot(0, rng.f() * 3.0));
        let d = Mat3::from_cols(
            vec3(rng.in_range(0.4, 1.2), 0.0, 0.0),
            vec3(0.0, rng.in_range(0.4, 2.8), 0.0),
            vec3(0.0, 0.0, rng.in_range(0.4, 3.5)),
        );
        let t = mul(&q1, &mul(&d, &q2));
        let shift = vec3(rng.f(), rng.f(), rng.f());
        let pts: Vec<Vec3> = base.vertices.iter().map(|&v| t.mul_vec(v) + shift).collect();
        let p = latpack::polytope::convex_hull(&pts).unwrap();
        let (r, _, _) = densest_packing_full(&p, &SearchOptions::default()).unwrap();
        assert!(
            (r.density - want).abs() <= 1e-5,
            "trial {trial}: affine image density {} vs 18/49",
            r.density
        );
    }
    println!(
        "[PASS] criterion 7: affine invariance of the tetrahedron density ({:.1?})",
        t0.elapsed()
    );
}

#[test]
fn criterion_8_packing_validity() {
    // every solid solved by the density criteria
    let names = [
        "tetrahedron",
        "cube",
        "octahedron",
        "cubeoctahedron",
        "truncated_octahedron",
        "dodecahedron",
        "icosahedron",
        "icosidodecahedron",
        "truncated_cube",
        "truncated_tetrahedron",
        "rhombic_cubeoctahedron",
        "snub_cube",
    ];
    for name in names {
        let (r, _, p0) = solved(name);
        let w = &r.basis;
        // translates within two shells never overlap: lattice differences
        // range over [-4, 4]^3 and must avoid the open difference body
        let tol = p0.geo_tol();
        for mx in -4i64..=4 {
            for my in -4i64..=4 {
                for mz in -4i64..=4 {
                    if (mx, my, mz) == (0, 0, 0) {
                        continue;
                    }
                    let z = w.col[0] * mx as f64 + w.col[1] * my as f64 + w.col[2] * mz as f64;
                    assert_ne!(
                        p0.classify_point(z, tol),
                        Classification::Interior,
                        "{name}: translates overlap at ({mx},{my},{mz})"
                    );
                }
            }
        }
        // the contact set carries a full test set of the winning kind
        let kind = r.case.kind();
        assert_eq!(r.contact_points.len(), kind.count(), "{name}");
        let btol = 1e-6 * p0.scale;
        for c in &r.contact_points {
            assert_eq!(
                p0.classify_point(*c, btol),
                Classification::Boundary,
                "{name}: contact point off the boundary"
            );
        }
        // density sanity
        assert!(r.density <= 1.0 + 1e-9 && r.density > 0.0, "{name}");
    }
    println!("[PASS] criterion 8: packing validity and contact structure on all solved solids");
}

#[test]
fn scaling_invariance() {
    // supplementary invariant: density is scale-free
    for mu in [0.5, 3.0] {
        let p = make_solid("cube").unwrap();
        let pts: Vec<Vec3> = p.vertices.iter().map(|&v| v * mu).collect();
        let q = latpack::polytope::convex_hull(&pts).unwrap();
        let (r, _, _) = densest_packing_full(&q, &SearchOptions::default()).unwrap();
        assert!((r.density - 1.0).abs() < 1e-9);
    }
    println!("[PASS] supplementary: scaling invariance");
}
