//! Randomized structural invariants of the polytope layer.

use latpack::geom::{vec3, Vec3};
use latpack::io::{parse_off, write_off};
use latpack::polytope::{convex_hull, difference_body, from_halfspaces, Classification};

struct Rng(u64);
impl Rng {
    fn f(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }
}

fn random_cloud(rng: &mut Rng, n: usize) -> Vec<Vec3> {
    (0..n)
        .map(|_| {
            let v = vec3(rng.f(), rng.f(), rng.f());
            if v.norm() < 1e-3 {
                vec3(1.0, 0.3, -0.2)
            } else {
                v.normalized() * (1.0 + 0.5 * rng.f())
            }
        })
        .collect()
}

#[test]
fn hull_euler_and_containment_on_random_clouds() {
    let mut rng = Rng(0x1111_2222_3333_4444);
    for trial in 0..60 {
        let n = 8 + (rng.f().abs() * 40.0) as usize;
        let pts = random_cloud(&mut rng, n);
        let p = match convex_hull(&pts) {
            Ok(p) => p,
            Err(e) => panic!("trial {trial}: hull failed: {e}"),
        };
        let (v, e, f) = p.f_vector();
        assert_eq!(v + f, e + 2, "trial {trial}: Euler violated");
        let tol = 1000.0 * p.geo_tol();
        for q in &pts {
            assert_ne!(
                p.classify_point(*q, tol),
                Classification::Exterior,
                "trial {trial}: input point outside hull"
            );
        }
        assert!(p.volume() > 0.0);
    }
}

#[test]
fn roundtrip_hull_halfspaces_random() {
    let mut rng = Rng(0x5555_6666_7777_8888);
    for trial in 0..25 {
        let n = 10 + (rng.f().abs() * 20.0) as usize;
        let pts = random_cloud(&mut rng, n);
        let p = convex_hull(&pts).unwrap();
        let q = from_halfspaces(&p.halfspaces).unwrap();
        assert_eq!(
            p.vertices.len(),
            q.vertices.len(),
            "trial {trial}: vertex count changed in round trip"
        );
        let tol = 1e-6 * p.scale;
        for v in &p.vertices {
            assert!(
                q.vertices.iter().any(|w| (*w - *v).norm() <= tol),
                "trial {trial}: vertex {v:?} lost"
            );
        }
    }
}

#[test]
fn difference_body_invariants_random() {
    let mut rng = Rng(0x9999_aaaa_bbbb_cccc);
    for trial in 0..20 {
        let n = 8 + (rng.f().abs() * 12.0) as usize;
        let pts = random_cloud(&mut rng, n);
        let p = convex_hull(&pts).unwrap();
        let d = difference_body(&p).unwrap();
        assert!(d.symmetric, "trial {trial}");
        // halfspaces come in (a, b)/(-a, b) pairs
        for (i, h) in d.halfspaces.iter().enumerate() {
            let j = d.antipode[i];
            let hj = &d.halfspaces[j];
            assert!((h.normal + hj.normal).norm() < 1e-9);
            assert!((h.offset - hj.offset).abs() < 1e-7 * d.scale);
        }
        // vol(P - P) >= 8 vol(P)
        assert!(
            d.volume() >= 8.0 * p.volume() - 1e-6 * d.volume(),
            "trial {trial}: difference-body volume bound"
        );
        // vertex differences stay inside the closed difference body
        let tol = 100.0 * d.geo_tol();
        for &a in &p.vertices {
            for &b in &p.vertices {
                assert_ne!(
                    d.classify_point(a - b, tol),
                    Classification::Exterior,
                    "trial {trial}"
                );
            }
        }
    }
}

#[test]
fn off_roundtrip_random() {
    let mut rng = Rng(0xdddd_eeee_ffff_0001);
    for _ in 0..10 {
        let pts = random_cloud(&mut rng, 12);
        let p = convex_hull(&pts).unwrap();
        let mut buf = Vec::new();
        write_off(&p, &mut buf).unwrap();
        let q = parse_off(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(p.f_vector(), q.f_vector());
        assert!((p.volume() - q.volume()).abs() <= 1e-9 * p.volume());
    }
}
