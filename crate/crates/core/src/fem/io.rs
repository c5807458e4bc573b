use std::io::{BufRead, Write};
use std::sync::Arc;

use super::mesh::{EdgeTag, TriMesh};
use super::solve::{BoundarySample, ScalarField};
use crate::error::{Error, Result};
use crate::report::fmt17;

/// Writes the `field v1` dump: vertices with values, triangles, boundary edges.
pub fn write_field<W: Write>(u: &ScalarField, mut w: W) -> Result<()> {
    let m = u.mesh();
    writeln!(w, "field v1 {} {}", m.vertices().len(), m.triangles().len())?;
    for (p, v) in m.vertices().iter().zip(u.values()) {
        writeln!(w, "{} {} {}", fmt17(p[0]), fmt17(p[1]), fmt17(*v))?;
    }
    for t in m.triangles() {
        writeln!(w, "{} {} {}", t[0], t[1], t[2])?;
    }
    for e in m.boundary_edges() {
        writeln!(w, "{} {} {}", e.v[0], e.v[1], e.tag)?;
    }
    Ok(())
}

/// Reads a `field v1` dump. Boundary edges are recomputed from the
/// triangles and checked against the stored list; `h` and `half_width`
/// describe the grid the mesh came from (needed for the BOX tolerance).
pub fn read_field<R: BufRead>(r: R, h: f64, half_width: f64) -> Result<ScalarField> {
    let lines: Vec<String> = r.lines().collect::<std::io::Result<_>>()?;
    let perr = |line: usize, msg: String| Error::Parse { line, msg };
    let header: Vec<&str> = lines
        .first()
        .ok_or_else(|| perr(1, "missing header".into()))?
        .split_whitespace()
        .collect();
    if header.len() != 4 || header[0] != "field" || header[1] != "v1" {
        return Err(perr(1, format!("bad header {header:?}")));
    }
    let nv: usize = header[2].parse().map_err(|e| perr(1, format!("{e}")))?;
    let nt: usize = header[3].parse().map_err(|e| perr(1, format!("{e}")))?;
    if lines.len() < 1 + nv + nt {
        return Err(perr(lines.len(), "truncated dump".into()));
    }
    let mut vertices = Vec::with_capacity(nv);
    let mut values = Vec::with_capacity(nv);
    for (k, line) in lines[1..=nv].iter().enumerate() {
        let xs: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| perr(k + 2, format!("{e}")))?;
        if xs.len() != 3 {
            return Err(perr(k + 2, "expected `x y u`".into()));
        }
        vertices.push([xs[0], xs[1]]);
        values.push(xs[2]);
    }
    let mut triangles = Vec::with_capacity(nt);
    for (k, line) in lines[1 + nv..1 + nv + nt].iter().enumerate() {
        let ids: Vec<usize> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| perr(k + 2 + nv, format!("{e}")))?;
        if ids.len() != 3 {
            return Err(perr(k + 2 + nv, "expected `i j k`".into()));
        }
        triangles.push([ids[0], ids[1], ids[2]]);
    }
    let mesh = TriMesh::from_parts(vertices, triangles, h, half_width)?;
    let stored: Vec<(usize, usize, EdgeTag)> = lines[1 + nv + nt..]
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| {
            let p: Vec<&str> = l.split_whitespace().collect();
            let lineno = k + 2 + nv + nt;
            if p.len() != 3 {
                return Err(perr(lineno, "expected `i j TAG`".into()));
            }
            let a = p[0].parse().map_err(|e| perr(lineno, format!("{e}")))?;
            let b = p[1].parse().map_err(|e| perr(lineno, format!("{e}")))?;
            let tag = p[2].parse().map_err(|e| perr(lineno, e))?;
            Ok((a, b, tag))
        })
        .collect::<Result<_>>()?;
    let recomputed: Vec<(usize, usize, EdgeTag)> = mesh
        .boundary_edges()
        .iter()
        .map(|e| (e.v[0], e.v[1], e.tag))
        .collect();
    if stored != recomputed {
        return Err(perr(1 + nv + nt, "boundary edges disagree with triangles".into()));
    }
    ScalarField::new(Arc::new(mesh), values)
}

/// CSV with columns `x,y,grad,tag`.
pub fn write_boundary_csv<W: Write>(samples: &[BoundarySample], mut w: W) -> Result<()> {
    writeln!(w, "x,y,grad,tag")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{}",
            fmt17(s.midpoint[0]),
            fmt17(s.midpoint[1]),
            fmt17(s.grad),
            s.tag
        )?;
    }
    Ok(())
}
