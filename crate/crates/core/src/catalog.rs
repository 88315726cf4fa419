//! Built-in constructions of the regular and Archimedean solids, with
//! reference packing densities for the acceptance suite.

use crate::geom::{vec3, Halfspace, Vec3};
use crate::poly::real_roots;
use crate::polytope::{convex_hull, from_halfspaces, Polytope, PolytopeError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown solid '{0}'")]
    UnknownSolid(String),
    #[error(transparent)]
    Construction(#[from] PolytopeError),
}

pub const GOLDEN_RATIO: f64 = 1.618033988749894848;
pub const SQRT2: f64 = 1.414213562373095049;
pub const SQRT5: f64 = 2.236067977499789696;

/// Names in catalog order.
pub const SOLID_NAMES: [&str; 18] = [
    "tetrahedron",
    "cube",
    "octahedron",
    "dodecahedron",
    "icosahedron",
    "cubeoctahedron",
    "icosidodecahedron",
    "rhombic_cubeoctahedron",
    "rhombic_icosidodecahedron",
    "truncated_cube",
    "truncated_octahedron",
    "truncated_dodecahedron",
    "truncated_icosahedron",
    "truncated_cubeoctahedron",
    "truncated_icosidodecahedron",
    "truncated_tetrahedron",
    "snub_cube",
    "snub_dodecahedron",
];

/// Expected f-vectors, asserted after construction.
fn expected_f(name: &str) -> (usize, usize, usize) {
    match name {
        "tetrahedron" => (4, 6, 4),
        "cube" => (8, 12, 6),
        "octahedron" => (6, 12, 8),
        "dodecahedron" => (20, 30, 12),
        "icosahedron" => (12, 30, 20),
        "cubeoctahedron" => (12, 24, 14),
        "icosidodecahedron" => (30, 60, 32),
        "rhombic_cubeoctahedron" => (24, 48, 26),
        "rhombic_icosidodecahedron" => (60, 120, 62),
        "truncated_cube" => (24, 36, 14),
        "truncated_octahedron" => (24, 36, 14),
        "truncated_dodecahedron" => (60, 90, 32),
        "truncated_icosahedron" => (60, 90, 32),
        "truncated_cubeoctahedron" => (48, 72, 26),
        "truncated_icosidodecahedron" => (120, 180, 62),
        "truncated_tetrahedron" => (12, 18, 8),
        "snub_cube" => (24, 60, 38),
        "snub_dodecahedron" => (60, 150, 92),
        _ => unreachable!(),
    }
}

fn tetra_planes(c: f64) -> Vec<Halfspace> {
    vec![
        Halfspace::new(vec3(1.0, 1.0, 1.0), c),
        Halfspace::new(vec3(-1.0, -1.0, 1.0), c),
        Halfspace::new(vec3(-1.0, 1.0, -1.0), c),
        Halfspace::new(vec3(1.0, -1.0, -1.0), c),
    ]
}

fn cube_planes(c: f64) -> Vec<Halfspace> {
    crate::polytope::cube_halfspaces(c)
}

fn octa_planes(c: f64) -> Vec<Halfspace> {
    crate::polytope::octahedron_halfspaces(c)
}

/// Dodecahedron |tau x_i| + |x_{i+1}| <= c, cyclically.
fn dodeca_planes(c: f64) -> Vec<Halfspace> {
    let t = GOLDEN_RATIO;
    let mut out = Vec::with_capacity(12);
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            out.push(Halfspace::new(vec3(s1 * t, s2, 0.0), c));
            out.push(Halfspace::new(vec3(0.0, s1 * t, s2), c));
            out.push(Halfspace::new(vec3(s2, 0.0, s1 * t), c));
        }
    }
    out
}

/// Icosahedron: the eight |x1|+|x2|+|x3| planes plus twelve golden planes.
fn icosa_planes(c: f64) -> Vec<Halfspace> {
    let t = GOLDEN_RATIO;
    let mut out: Vec<Halfspace> = octa_planes(c);
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            out.push(Halfspace::new(vec3(s1 * t, 0.0, s2 / t), c));
            out.push(Halfspace::new(vec3(s2 / t, s1 * t, 0.0), c));
            out.push(Halfspace::new(vec3(0.0, s2 / t, s1 * t), c));
        }
    }
    out
}

/// Rhombic triacontahedron: |tau x_i| <= c plus the 24 planes
/// |(x1 + tau x2 + tau^2 x3)/2| <= c under cyclic shifts and all signs.
fn rtc_planes(c: f64) -> Vec<Halfspace> {
    let t = GOLDEN_RATIO;
    let mut out = Vec::with_capacity(30);
    for axis in 0..3 {
        for s in [1.0, -1.0] {
            let mut n = Vec3::ZERO;
            match axis {
                0 => n.x = s * t,
                1 => n.y = s * t,
                _ => n.z = s * t,
            }
            out.push(Halfspace::new(n, c));
        }
    }
    let base = [0.5, t / 2.0, (t + 1.0) / 2.0];
    for shift in 0..3 {
        let v = [
            base[(3 - shift) % 3],
            base[(4 - shift) % 3],
            base[(5 - shift) % 3],
        ];
        for sx in [1.0, -1.0] {
            for sy in [1.0, -1.0] {
                for sz in [1.0, -1.0] {
                    out.push(Halfspace::new(vec3(sx * v[0], sy * v[1], sz * v[2]), c));
                }
            }
        }
    }
    out
}

/// Rhombicuboctahedron band planes |x_i| + |x_j| <= c.
fn rhombic_band_planes(c: f64) -> Vec<Halfspace> {
    let mut out = Vec::with_capacity(12);
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            out.push(Halfspace::new(vec3(s1, s2, 0.0), c));
            out.push(Halfspace::new(vec3(s1, 0.0, s2), c));
            out.push(Halfspace::new(vec3(0.0, s1, s2), c));
        }
    }
    out
}

fn snub_cube_vertices() -> Vec<Vec3> {
    // y* is the real root of y^3 + y^2 + y = 1
    let roots = real_roots(&[-1.0, 1.0, 1.0, 1.0]).expect("snub cubic");
    let y = roots[0];
    let base = [1.0, y, y * y];
    let mut out = Vec::with_capacity(24);
    let perms: [([usize; 3], f64); 6] = [
        ([0, 1, 2], 1.0),
        ([1, 2, 0], 1.0),
        ([2, 0, 1], 1.0),
        ([0, 2, 1], -1.0),
        ([2, 1, 0], -1.0),
        ([1, 0, 2], -1.0),
    ];
    for (perm, parity) in perms {
        for sx in [1.0, -1.0] {
            for sy in [1.0, -1.0] {
                for sz in [1.0, -1.0] {
                    if parity * sx * sy * sz > 0.0 {
                        out.push(vec3(
                            sx * base[perm[0]],
                            sy * base[perm[1]],
                            sz * base[perm[2]],
                        ));
                    }
                }
            }
        }
    }
    out
}

const SNUB_DODECAHEDRON_VERTICES: [[f64; 3]; 60] = [
    [-1.45707695930070938, -0.26043394437699985, -0.229930864137340316],
    [-1.45707695930070938, 0.26043394437699985, 0.229930864137340316],
    [-1.37424396897971039, -0.394460538106167283, 0.44679044818750674],
    [-1.37424396897971039, 0.394460538106167283, -0.44679044818750674],
    [-1.21328693953052492, -0.134026593729167432, -0.868181422013692057],
    [-1.21328693953052492, 0.134026593729167432, 0.868181422013692057],
    [-1.14431310484237007, -0.766496491343018184, -0.588895537287017326],
    [-1.14431310484237007, 0.766496491343018184, 0.588895537287017326],
    [-1.01028651111320264, -0.983356075393184608, 0.506062546966018333],
    [-1.01028651111320264, 0.983356075393184608, -0.506062546966018333],
    [-0.983356075393184608, -0.506062546966018333, 1.01028651111320264],
    [-0.983356075393184608, 0.506062546966018333, -1.01028651111320264],
    [-0.868181422013692057, -1.21328693953052492, -0.134026593729167432],
    [-0.868181422013692057, 1.21328693953052492, 0.134026593729167432],
    [-0.766496491343018184, -0.588895537287017326, -1.14431310484237007],
    [-0.766496491343018184, 0.588895537287017326, 1.14431310484237007],
    [-0.588895537287017326, -1.14431310484237007, -0.766496491343018184],
    [-0.588895537287017326, 1.14431310484237007, 0.766496491343018184],
    [-0.506062546966018333, -1.01028651111320264, 0.983356075393184608],
    [-0.506062546966018333, 1.01028651111320264, -0.983356075393184608],
    [-0.44679044818750674, -1.37424396897971039, 0.394460538106167283],
    [-0.44679044818750674, 1.37424396897971039, -0.394460538106167283],
    [-0.394460538106167283, -0.44679044818750674, 1.37424396897971039],
    [-0.394460538106167283, 0.44679044818750674, -1.37424396897971039],
    [-0.26043394437699985, -0.229930864137340316, -1.45707695930070938],
    [-0.26043394437699985, 0.229930864137340316, 1.45707695930070938],
    [-0.229930864137340316, -1.45707695930070938, -0.26043394437699985],
    [-0.229930864137340316, 1.45707695930070938, 0.26043394437699985],
    [-0.134026593729167432, -0.868181422013692057, -1.21328693953052492],
    [-0.134026593729167432, 0.868181422013692057, 1.21328693953052492],
    [0.134026593729167432, -0.868181422013692057, 1.21328693953052492],
    [0.134026593729167432, 0.868181422013692057, -1.21328693953052492],
    [0.229930864137340316, -1.45707695930070938, 0.26043394437699985],
    [0.229930864137340316, 1.45707695930070938, -0.26043394437699985],
    [0.26043394437699985, -0.229930864137340316, 1.45707695930070938],
    [0.26043394437699985, 0.229930864137340316, -1.45707695930070938],
    [0.394460538106167283, -0.44679044818750674, -1.37424396897971039],
    [0.394460538106167283, 0.44679044818750674, 1.37424396897971039],
    [0.44679044818750674, -1.37424396897971039, -0.394460538106167283],
    [0.44679044818750674, 1.37424396897971039, 0.394460538106167283],
    [0.506062546966018333, -1.01028651111320264, -0.983356075393184608],
    [0.506062546966018333, 1.01028651111320264, 0.983356075393184608],
    [0.588895537287017326, -1.14431310484237007, 0.766496491343018184],
    [0.588895537287017326, 1.14431310484237007, -0.766496491343018184],
    [0.766496491343018184, -0.588895537287017326, 1.14431310484237007],
    [0.766496491343018184, 0.588895537287017326, -1.14431310484237007],
    [0.868181422013692057, -1.21328693953052492, 0.134026593729167432],
    [0.868181422013692057, 1.21328693953052492, -0.134026593729167432],
    [0.983356075393184608, -0.506062546966018333, -1.01028651111320264],
    [0.983356075393184608, 0.506062546966018333, 1.01028651111320264],
    [1.01028651111320264, -0.983356075393184608, -0.506062546966018333],
    [1.01028651111320264, 0.983356075393184608, 0.506062546966018333],
    [1.14431310484237007, -0.766496491343018184, 0.588895537287017326],
    [1.14431310484237007, 0.766496491343018184, -0.588895537287017326],
    [1.21328693953052492, -0.134026593729167432, 0.868181422013692057],
    [1.21328693953052492, 0.134026593729167432, -0.868181422013692057],
    [1.37424396897971039, -0.394460538106167283, -0.44679044818750674],
    [1.37424396897971039, 0.394460538106167283, 0.44679044818750674],
    [1.45707695930070938, -0.26043394437699985, 0.229930864137340316],
    [1.45707695930070938, 0.26043394437699985, -0.229930864137340316],
];

/// Builds a catalog solid by name.
pub fn make_solid(name: &str) -> Result<Polytope, CatalogError> {
    let t = GOLDEN_RATIO;
    let p = match name {
        "tetrahedron" => from_halfspaces(&tetra_planes(1.0))?,
        "cube" => from_halfspaces(&cube_planes(1.0))?,
        "octahedron" => from_halfspaces(&octa_planes(1.0))?,
        "dodecahedron" => from_halfspaces(&dodeca_planes(1.0))?,
        "icosahedron" => from_halfspaces(&icosa_planes(1.0))?,
        "cubeoctahedron" => {
            let mut hs = cube_planes(1.0);
            hs.extend(octa_planes(2.0));
            from_halfspaces(&hs)?
        }
        "icosidodecahedron" => {
            let mut hs = icosa_planes(1.0);
            hs.extend(dodeca_planes(1.0));
            from_halfspaces(&hs)?
        }
        "rhombic_cubeoctahedron" => {
            let mut hs = rhombic_band_planes(2.0);
            hs.extend(cube_planes(SQRT2));
            hs.extend(octa_planes(4.0 - SQRT2));
            from_halfspaces(&hs)?
        }
        "rhombic_icosidodecahedron" => {
            let mut hs = rtc_planes(3.0 * t + 2.0);
            hs.extend(icosa_planes(4.0 * t + 1.0));
            hs.extend(dodeca_planes(3.0 * (1.0 + t)));
            from_halfspaces(&hs)?
        }
        "truncated_cube" => {
            let mut hs = cube_planes(1.0);
            hs.extend(octa_planes(1.0 + SQRT2));
            from_halfspaces(&hs)?
        }
        "truncated_octahedron" => {
            let mut hs = cube_planes(1.0);
            hs.extend(octa_planes(1.5));
            from_halfspaces(&hs)?
        }
        "truncated_dodecahedron" => {
            let mut hs = dodeca_planes(1.0 + t);
            hs.extend(icosa_planes((7.0 + 12.0 * t) / (3.0 + 4.0 * t)));
            from_halfspaces(&hs)?
        }
        "truncated_icosahedron" => {
            let mut hs = icosa_planes(1.0 + t);
            hs.extend(dodeca_planes(4.0 / 3.0 + t));
            from_halfspaces(&hs)?
        }
        "truncated_cubeoctahedron" => {
            let mut hs = rhombic_band_planes(2.0 + 3.0 * SQRT2);
            hs.extend(cube_planes(2.0 * SQRT2 + 1.0));
            hs.extend(octa_planes(3.0 * SQRT2 + 3.0));
            from_halfspaces(&hs)?
        }
        "truncated_icosidodecahedron" => {
            let mut hs = rtc_planes(5.0 * t + 4.0);
            hs.extend(icosa_planes(6.0 * t + 3.0));
            hs.extend(dodeca_planes(5.0 * (1.0 + t)));
            from_halfspaces(&hs)?
        }
        "truncated_tetrahedron" => {
            // 5 P_t intersected with -3 P_t
            let mut hs = tetra_planes(5.0);
            for h in tetra_planes(3.0) {
                hs.push(Halfspace::new(-h.normal, h.offset));
            }
            from_halfspaces(&hs)?
        }
        "snub_cube" => convex_hull(&snub_cube_vertices())?,
        "snub_dodecahedron" => {
            let pts: Vec<Vec3> = SNUB_DODECAHEDRON_VERTICES
                .iter()
                .map(|v| Vec3::from_array(*v))
                .collect();
            convex_hull(&pts)?
        }
        other => return Err(CatalogError::UnknownSolid(other.to_string())),
    };
    let got = p.f_vector();
    let want = expected_f(name);
    assert_eq!(got, want, "{name}: f-vector {got:?}, expected {want:?}");
    Ok(p)
}

/// Reference density and a closed-form tag. Decimal values carry at least
/// nine digits; closed forms are evaluated in double precision.
pub fn reference_density(name: &str) -> Result<(f64, &'static str), CatalogError> {
    let t = GOLDEN_RATIO;
    let snub_y = || real_roots(&[-1.0, 1.0, 1.0, 1.0]).unwrap()[0];
    Ok(match name {
        "tetrahedron" => (18.0 / 49.0, "18/49"),
        "cube" => (1.0, "1"),
        "octahedron" => (18.0 / 19.0, "18/19"),
        "dodecahedron" => ((2.0 + t) / 4.0, "(2+tau)/4"),
        "icosahedron" => (0.836357445, "0.836357445"),
        "cubeoctahedron" => (45.0 / 49.0, "45/49"),
        "icosidodecahedron" => ((14.0 + 17.0 * t) / 48.0, "(14+17*tau)/48"),
        "rhombic_cubeoctahedron" => ((16.0 * SQRT2 - 20.0) / 3.0, "(16*sqrt(2)-20)/3"),
        "rhombic_icosidodecahedron" => {
            ((8.0 * t + 46.0) / (36.0 * t + 15.0), "(8*tau+46)/(36*tau+15)")
        }
        "truncated_cube" => (9.0 / (5.0 + 3.0 * SQRT2), "9/(5+3*sqrt(2))"),
        "truncated_octahedron" => (1.0, "1"),
        "truncated_dodecahedron" => {
            ((5.0 * t + 16.0) / (4.0 * (6.0 * t - 3.0)), "(5*tau+16)/(24*tau-12)")
        }
        "truncated_icosahedron" => (0.7849877759, "0.7849877759"),
        "truncated_cubeoctahedron" => (
            99.0 / 992.0 * 66.0f64.sqrt() - 231.0 / 1984.0 * 33.0f64.sqrt()
                + 2835.0 / 992.0 * SQRT2
                - 6615.0 / 1984.0,
            "(99*sqrt(66))/992-(231*sqrt(33))/1984+(2835*sqrt(2))/992-6615/1984",
        ),
        "truncated_icosidodecahedron" => (0.4 * t + 0.18, "(2/5)*tau+9/50"),
        "truncated_tetrahedron" => (207.0 / 304.0, "207/304"),
        "snub_cube" => {
            let y = snub_y();
            (0.5 + y / 6.0 + 2.0 / 3.0 * y * y, "1/2+y/6+(2/3)*y^2, y^3+y^2+y=1")
        }
        "snub_dodecahedron" => (0.788640117, "vol/16"),
        other => return Err(CatalogError::UnknownSolid(other.to_string())),
    })
}
