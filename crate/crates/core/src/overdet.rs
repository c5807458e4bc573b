//! Free-boundary extraction and the constancy statistics of `|∇u|` on it.

use std::collections::HashSet;
use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::fem::{boundary_gradient, BoundarySample, EdgeTag, ScalarField, TriMesh};
use crate::geometry::Point2;
use crate::report::{fmt17, ser_f64, ser_opt_f64};

/// Samples closer than this many cells to a FREE/BOX junction are left out
/// of the constancy statistics.
pub const JUNCTION_CELLS: f64 = 2.0;

/// One FREE edge of a chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaSample {
    pub midpoint: Point2,
    pub grad: f64,
    pub length: f64,
    /// Within [`JUNCTION_CELLS`] cells of a FREE/BOX junction vertex.
    pub near_junction: bool,
}

/// Maximal connected run of FREE edges, in boundary orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    pub closed: bool,
    pub samples: Vec<GammaSample>,
}

impl Chain {
    pub fn length(&self) -> f64 {
        self.samples.iter().map(|s| s.length).sum()
    }
}

/// The free boundary `Γ = ∂Ω ∩ D` as a list of chains.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeBoundary {
    pub chains: Vec<Chain>,
    pub junctions: Vec<Point2>,
}

impl FreeBoundary {
    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn samples(&self) -> impl Iterator<Item = &GammaSample> {
        self.chains.iter().flat_map(|c| c.samples.iter())
    }

    /// `chain,x,y,grad` rows, one per FREE edge midpoint.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "chain,x,y,grad")?;
        for (k, c) in self.chains.iter().enumerate() {
            for s in &c.samples {
                writeln!(
                    w,
                    "{k},{},{},{}",
                    fmt17(s.midpoint[0]),
                    fmt17(s.midpoint[1]),
                    fmt17(s.grad)
                )?;
            }
        }
        Ok(())
    }
}

/// Splits the FREE boundary edges of `u`'s mesh into maximal chains.
///
/// Open chains (ending on the box) come first, ordered by their first edge;
/// closed loops follow, each starting at its lowest-numbered edge.
pub fn extract_free_boundary(u: &ScalarField) -> FreeBoundary {
    let mesh = u.mesh();
    let samples: Vec<BoundarySample> = boundary_gradient(u)
        .into_iter()
        .filter(|s| s.tag == EdgeTag::Free)
        .collect();
    let junctions = junction_vertices(mesh);
    let radius = JUNCTION_CELLS * mesh.h();
    let near = |p: Point2| {
        junctions
            .iter()
            .any(|q| (p[0] - q[0]).hypot(p[1] - q[1]) < radius)
    };

    // outgoing FREE edges per start vertex, in edge order
    let nv = mesh.vertices().len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); nv];
    let mut has_in = vec![false; nv];
    for (k, s) in samples.iter().enumerate() {
        out[s.edge.v[0]].push(k);
        has_in[s.edge.v[1]] = true;
    }
    let mut used = vec![false; samples.len()];
    let mut chains = Vec::new();
    let walk = |start: usize, used: &mut Vec<bool>| {
        let mut ids = Vec::new();
        let mut k = start;
        loop {
            used[k] = true;
            ids.push(k);
            let end = samples[k].edge.v[1];
            match out[end].iter().copied().find(|&e| !used[e]) {
                Some(next) => k = next,
                None => break,
            }
        }
        let closed = samples[*ids.last().unwrap()].edge.v[1] == samples[start].edge.v[0];
        Chain {
            closed,
            samples: ids
                .into_iter()
                .map(|k| GammaSample {
                    midpoint: samples[k].midpoint,
                    grad: samples[k].grad,
                    length: samples[k].length,
                    near_junction: near(samples[k].midpoint),
                })
                .collect(),
        }
    };
    for k in 0..samples.len() {
        if !used[k] && !has_in[samples[k].edge.v[0]] {
            chains.push(walk(k, &mut used));
        }
    }
    for k in 0..samples.len() {
        if !used[k] {
            chains.push(walk(k, &mut used));
        }
    }
    FreeBoundary { chains, junctions }
}

/// Vertices shared by a FREE and a BOX edge, in vertex order.
fn junction_vertices(mesh: &TriMesh) -> Vec<Point2> {
    let mut free = HashSet::new();
    let mut boxed = HashSet::new();
    for e in mesh.boundary_edges() {
        let set = match e.tag {
            EdgeTag::Free => &mut free,
            EdgeTag::Box => &mut boxed,
        };
        set.extend(e.v);
    }
    let mut both: Vec<usize> = free.intersection(&boxed).copied().collect();
    both.sort_unstable();
    both.into_iter().map(|v| mesh.vertices()[v]).collect()
}

/// Constancy statistics of `|∇u|` on `Γ` and the non-disk certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OverdetReport {
    /// Length-weighted mean of `|∇u|` on `Γ`; `None` when `Γ` is empty.
    #[serde(serialize_with = "ser_opt_f64")]
    pub lambda_hat: Option<f64>,
    /// Length-weighted coefficient of variation of `|∇u|` on `Γ`.
    #[serde(serialize_with = "ser_opt_f64")]
    pub cv: Option<f64>,
    pub n_components: usize,
    pub touches_box: bool,
    /// Relative L² deviation of the boundary radius about the area centroid.
    #[serde(serialize_with = "ser_f64")]
    pub disk_deviation: f64,
    #[serde(serialize_with = "ser_f64")]
    pub free_length: f64,
    pub n_samples: usize,
    /// Samples used by `lambda_hat` and `cv` (junction neighbourhoods excluded).
    pub n_used: usize,
    #[serde(serialize_with = "ser_opt_f64")]
    pub grad_min: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub grad_max: Option<f64>,
}

/// Statistics of `fb` on `mesh`. Samples near FREE/BOX junctions are
/// excluded unless nothing else is left.
pub fn overdet_report(fb: &FreeBoundary, mesh: &TriMesh) -> OverdetReport {
    let all: Vec<&GammaSample> = fb.samples().collect();
    let inner: Vec<&GammaSample> = all.iter().copied().filter(|s| !s.near_junction).collect();
    let used = if inner.is_empty() { &all } else { &inner };
    let (mut w, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for s in used {
        w += s.length;
        s1 += s.length * s.grad;
        s2 += s.length * s.grad * s.grad;
    }
    let (lambda_hat, cv) = if w > 0.0 {
        let mean = s1 / w;
        let var = (s2 / w - mean * mean).max(0.0);
        let cv = if mean > 0.0 { var.sqrt() / mean } else { 0.0 };
        (Some(mean), Some(cv))
    } else {
        (None, None)
    };
    let fold = |f: fn(f64, f64) -> f64| used.iter().map(|s| s.grad).reduce(f);
    OverdetReport {
        lambda_hat,
        cv,
        n_components: fb.chains.len(),
        touches_box: mesh.boundary_edges().iter().any(|e| e.tag == EdgeTag::Box),
        disk_deviation: disk_deviation(mesh),
        free_length: fb.chains.iter().map(Chain::length).sum(),
        n_samples: all.len(),
        n_used: used.len(),
        grad_min: fold(f64::min),
        grad_max: fold(f64::max),
    }
}

/// Area centroid of the triangulated domain.
pub fn area_centroid(mesh: &TriMesh) -> Point2 {
    let v = mesh.vertices();
    let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let at = mesh.triangle_area(t);
        a += at;
        cx += at * (v[tri[0]][0] + v[tri[1]][0] + v[tri[2]][0]) / 3.0;
        cy += at * (v[tri[0]][1] + v[tri[1]][1] + v[tri[2]][1]) / 3.0;
    }
    [cx / a, cy / a]
}

/// `sqrt(⨍ (r − r̄)² ds) / r̄` over the whole boundary polygon, with `r` the
/// distance to the area centroid and `r̄ = ⨍ r ds` (Simpson's rule per edge).
pub fn disk_deviation(mesh: &TriMesh) -> f64 {
    let c = area_centroid(mesh);
    let v = mesh.vertices();
    let r = |p: Point2| (p[0] - c[0]).hypot(p[1] - c[1]);
    let (mut len, mut m1, mut m2) = (0.0, 0.0, 0.0);
    for e in mesh.boundary_edges() {
        let (a, b) = (v[e.v[0]], v[e.v[1]]);
        let l = (b[0] - a[0]).hypot(b[1] - a[1]);
        let (ra, rm, rb) = (r(a), r(mesh.edge_midpoint(e)), r(b));
        len += l;
        m1 += l * (ra + 4.0 * rm + rb) / 6.0;
        m2 += l * (ra * ra + 4.0 * rm * rm + rb * rb) / 6.0;
    }
    let mean = m1 / len;
    (m2 / len - mean * mean).max(0.0).sqrt() / mean
}
