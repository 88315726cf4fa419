//! OFF mesh files and plain-text halfspace descriptions.

use crate::geom::{vec3, Halfspace, Vec3};
use crate::polytope::{convex_hull, from_halfspaces, Polytope, PolytopeError};
use std::io::Write;

/// Parses an ASCII OFF file: `OFF` header, counts line, vertex lines, facet
/// index lines. `#` starts a comment. Only the vertices are used; the
/// polytope is rebuilt as their convex hull.
pub fn parse_off(text: &str) -> Result<Polytope, PolytopeError> {
    let mut tokens = Vec::new();
    for line in text.lines() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        tokens.extend(line.split_whitespace().map(|s| s.to_string()));
    }
    let mut it = tokens.into_iter();
    match it.next().as_deref() {
        Some("OFF") => {}
        _ => return Err(PolytopeError::Io("missing OFF header".into())),
    }
    let mut next_num = |what: &str| -> Result<f64, PolytopeError> {
        it.next()
            .ok_or_else(|| PolytopeError::Io(format!("unexpected end of file reading {what}")))?
            .parse::<f64>()
            .map_err(|e| PolytopeError::Io(format!("bad {what}: {e}")))
    };
    let nv = next_num("vertex count")? as usize;
    let nf = next_num("facet count")? as usize;
    let _ne = next_num("edge count")?;
    let mut pts = Vec::with_capacity(nv);
    for _ in 0..nv {
        let x = next_num("vertex coordinate")?;
        let y = next_num("vertex coordinate")?;
        let z = next_num("vertex coordinate")?;
        pts.push(vec3(x, y, z));
    }
    // facet lines are read to keep the cursor honest but not trusted
    for _ in 0..nf {
        let k = next_num("facet size")? as usize;
        for _ in 0..k {
            next_num("facet index")?;
        }
    }
    convex_hull(&pts)
}

/// Writes a polytope as ASCII OFF.
pub fn write_off(p: &Polytope, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "OFF")?;
    writeln!(out, "{} {} {}", p.vertices.len(), p.facets.len(), p.edges.len())?;
    for v in &p.vertices {
        writeln!(out, "{:.17} {:.17} {:.17}", v.x, v.y, v.z)?;
    }
    for f in &p.facets {
        write!(out, "{}", f.vertices.len())?;
        for &i in &f.vertices {
            write!(out, " {i}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Writes many translated copies of a polytope into one OFF file.
pub fn write_off_translates(
    p: &Polytope,
    shifts: &[Vec3],
    out: &mut dyn Write,
) -> std::io::Result<()> {
    let nv = p.vertices.len();
    writeln!(out, "OFF")?;
    writeln!(
        out,
        "{} {} {}",
        nv * shifts.len(),
        p.facets.len() * shifts.len(),
        p.edges.len() * shifts.len()
    )?;
    for s in shifts {
        for v in &p.vertices {
            let w = *v + *s;
            writeln!(out, "{:.17} {:.17} {:.17}", w.x, w.y, w.z)?;
        }
    }
    for (k, _) in shifts.iter().enumerate() {
        for f in &p.facets {
            write!(out, "{}", f.vertices.len())?;
            for &i in &f.vertices {
                write!(out, " {}", i + k * nv)?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Parses the plain halfspace format: one line per halfspace
/// `a1 a2 a3 b` meaning `a . x <= b`; `#` starts a comment.
pub fn parse_hrep(text: &str) -> Result<Polytope, PolytopeError> {
    let mut hs: Vec<Halfspace> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 4 {
            return Err(PolytopeError::Io(format!(
                "line {}: expected 4 numbers, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let mut v = [0.0f64; 4];
        for (k, f) in fields.iter().enumerate() {
            v[k] = f
                .parse()
                .map_err(|e| PolytopeError::Io(format!("line {}: {e}", lineno + 1)))?;
        }
        hs.push(Halfspace::new(vec3(v[0], v[1], v[2]), v[3]));
    }
    if hs.is_empty() {
        return Err(PolytopeError::Io("no halfspaces in input".into()));
    }
    from_halfspaces(&hs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::cube_halfspaces;

    #[test]
    fn off_roundtrip_cube() {
        let p = from_halfspaces(&cube_halfspaces(1.0)).unwrap();
        let mut buf = Vec::new();
        write_off(&p, &mut buf).unwrap();
        let q = parse_off(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(q.f_vector(), (8, 12, 6));
    }

    #[test]
    fn hrep_parse_with_comments() {
        let text = "# cube\n1 0 0 1\n-1 0 0 1\n0 1 0 1\n0 -1 0 1\n0 0 1 1\n0 0 -1 1\n";
        let p = parse_hrep(text).unwrap();
        assert_eq!(p.f_vector(), (8, 12, 6));
    }

    #[test]
    fn hrep_bad_line_reports_error() {
        assert!(parse_hrep("1 0 0\n").is_err());
    }

    #[test]
    fn off_rejects_missing_header() {
        assert!(parse_off("3 3 0\n").is_err());
    }
}
