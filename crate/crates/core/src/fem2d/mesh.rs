//! Conforming triangle meshes over (truncated) domains: structured grids for
//! rectangles, Delaunay meshes for convex polygons, and terrain-following
//! graded meshes for channel profile domains.

use serde::Serialize;

use super::delaunay::Delaunay;
use crate::error::{Error, Result};
use crate::geometry::{truncate, ConvexPolygon, Domain};
use crate::thinlimit::ThinMap;
use crate::weights::WeightSpec;

#[derive(Debug, Clone, Serialize)]
pub struct MeshInfo {
    pub domain: String,
    #[serde(rename = "R")]
    pub trunc_radius: Option<f64>,
    pub h: f64,
    pub n_nodes: usize,
    pub n_triangles: usize,
    pub min_angle_deg: f64,
}

#[derive(Debug, Clone)]
pub struct TriMesh {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<[usize; 2]>,
    pub h_max: f64,
    pub min_angle_deg: f64,
    /// Corner zone (center, radius) where grading relaxes the angle bound.
    pub graded_zone: Option<([f64; 2], f64)>,
    pub domain_tag: String,
    pub trunc_radius: Option<f64>,
}

fn tri_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

fn tri_angles_deg(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> [f64; 3] {
    let la = (b[0] - c[0]).hypot(b[1] - c[1]);
    let lb = (a[0] - c[0]).hypot(a[1] - c[1]);
    let lc = (a[0] - b[0]).hypot(a[1] - b[1]);
    let ang = |opp: f64, s1: f64, s2: f64| {
        ((s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2))
            .clamp(-1.0, 1.0)
            .acos()
            .to_degrees()
    };
    [ang(la, lb, lc), ang(lb, la, lc), ang(lc, la, lb)]
}

impl TriMesh {
    fn finalize(
        vertices: Vec<[f64; 2]>,
        mut triangles: Vec<[usize; 3]>,
        domain_tag: String,
        trunc_radius: Option<f64>,
        graded_zone: Option<([f64; 2], f64)>,
    ) -> Result<TriMesh> {
        // Enforce ccw orientation and drop degenerate slivers.
        let scale = vertices
            .iter()
            .flat_map(|v| v.iter())
            .fold(1.0f64, |m, x| m.max(x.abs()));
        triangles.retain(|t| {
            tri_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]).abs()
                > 1e-16 * scale * scale
        });
        for t in triangles.iter_mut() {
            if tri_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]) < 0.0 {
                t.swap(1, 2);
            }
        }
        if triangles.is_empty() {
            return Err(Error::Mesh("empty triangulation".into()));
        }
        let mut h_max = 0.0f64;
        let mut min_angle = 180.0f64;
        for t in &triangles {
            let (a, b, c) = (vertices[t[0]], vertices[t[1]], vertices[t[2]]);
            for (p, q) in [(a, b), (b, c), (c, a)] {
                h_max = h_max.max((p[0] - q[0]).hypot(p[1] - q[1]));
            }
            let in_graded = graded_zone.is_some_and(|(ctr, r)| {
                [a, b, c]
                    .iter()
                    .any(|p| (p[0] - ctr[0]).hypot(p[1] - ctr[1]) <= r)
            });
            if !in_graded {
                let angs = tri_angles_deg(a, b, c);
                min_angle = min_angle.min(angs[0].min(angs[1]).min(angs[2]));
            }
        }
        let mesh = TriMesh {
            boundary_edges: boundary_edges(&vertices, &triangles)?,
            vertices,
            triangles,
            h_max,
            min_angle_deg: min_angle,
            graded_zone,
            domain_tag,
            trunc_radius,
        };
        Ok(mesh)
    }

    pub fn info(&self) -> MeshInfo {
        MeshInfo {
            domain: self.domain_tag.clone(),
            trunc_radius: self.trunc_radius,
            h: self.h_max,
            n_nodes: self.vertices.len(),
            n_triangles: self.triangles.len(),
            min_angle_deg: self.min_angle_deg,
        }
    }

    pub fn total_area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| tri_area(self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]))
            .sum()
    }

    /// The polygon traced by the boundary edges (ccw).
    pub fn boundary_polygon(&self) -> Result<ConvexPolygon> {
        let mut next = std::collections::HashMap::new();
        for e in &self.boundary_edges {
            next.insert(e[0], e[1]);
        }
        let start = self.boundary_edges[0][0];
        let mut order = vec![start];
        let mut cur = start;
        for _ in 0..next.len() {
            cur = *next
                .get(&cur)
                .ok_or_else(|| Error::Mesh("open boundary loop".into()))?;
            if cur == start {
                break;
            }
            order.push(cur);
        }
        // Thin out collinear runs: the convexity test tolerates them, but
        // keeping full fidelity is fine; just build the polygon.
        ConvexPolygon::new(order.iter().map(|&i| self.vertices[i]).collect())
    }

    /// Structural checks: conformity, orientation, coverage of the boundary
    /// polygon, and the angle bound (15 degrees, 5 in a declared corner zone).
    pub fn validate(&self) -> Result<()> {
        if self.min_angle_deg < 15.0 {
            return Err(Error::Mesh(format!(
                "min angle {:.2} below 15 degrees outside graded zones",
                self.min_angle_deg
            )));
        }
        if let Some((ctr, r)) = self.graded_zone {
            for t in &self.triangles {
                let (a, b, c) = (
                    self.vertices[t[0]],
                    self.vertices[t[1]],
                    self.vertices[t[2]],
                );
                if [a, b, c]
                    .iter()
                    .any(|p| (p[0] - ctr[0]).hypot(p[1] - ctr[1]) <= r)
                {
                    let angs = tri_angles_deg(a, b, c);
                    let m = angs[0].min(angs[1]).min(angs[2]);
                    if m < 5.0 {
                        return Err(Error::Mesh(format!(
                            "graded-zone angle {m:.2} below 5 degrees"
                        )));
                    }
                }
            }
        }
        let poly = self.boundary_polygon()?;
        let defect = (self.total_area() - poly.area()).abs() / poly.area();
        if defect > 1e-10 {
            return Err(Error::Mesh(format!("area defect {defect:.3e}")));
        }
        Ok(())
    }
}

/// Recomputes derived metadata (orientation, h_max, angles, boundary) for a
/// mesh assembled elsewhere in the crate.
pub(crate) fn refinalize(mesh: TriMesh) -> Result<TriMesh> {
    let mut out = TriMesh::finalize(
        mesh.vertices,
        mesh.triangles,
        mesh.domain_tag,
        mesh.trunc_radius,
        mesh.graded_zone,
    )?;
    out.h_max = out.h_max.max(0.0);
    Ok(out)
}

/// Boundary edges (appearing in exactly one triangle), oriented ccw; errors
/// on non-conforming connectivity.
fn boundary_edges(vertices: &[[f64; 2]], triangles: &[[usize; 3]]) -> Result<Vec<[usize; 2]>> {
    let _ = vertices;
    let mut count: std::collections::HashMap<(usize, usize), (usize, [usize; 2])> =
        std::collections::HashMap::new();
    for t in triangles {
        for e in 0..3 {
            let a = t[e];
            let b = t[(e + 1) % 3];
            let key = (a.min(b), a.max(b));
            let entry = count.entry(key).or_insert((0, [a, b]));
            entry.0 += 1;
            if entry.0 > 2 {
                return Err(Error::Mesh(format!(
                    "edge ({a}, {b}) shared by more than two triangles"
                )));
            }
        }
    }
    Ok(count
        .into_values()
        .filter(|(c, _)| *c == 1)
        .map(|(_, e)| e)
        .collect())
}

/// Structured rectangle mesh with alternating diagonals (keeps the two axis
/// reflection symmetries of the domain).
pub fn mesh_rectangle(x0: f64, x1: f64, y0: f64, y1: f64, h: f64) -> Result<TriMesh> {
    if !(x1 > x0 && y1 > y0 && h > 0.0) {
        return Err(Error::Mesh("degenerate rectangle".into()));
    }
    let nx = (((x1 - x0) / h).ceil() as usize).max(2);
    let ny = (((y1 - y0) / h).ceil() as usize).max(2);
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for i in 0..=nx {
        let x = x0 + (x1 - x0) * i as f64 / nx as f64;
        for j in 0..=ny {
            let y = y0 + (y1 - y0) * j as f64 / ny as f64;
            vertices.push([x, y]);
        }
    }
    let id = |i: usize, j: usize| i * (ny + 1) + j;
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if (i + j) % 2 == 0 {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            } else {
                triangles.push([a, b, d]);
                triangles.push([b, c, d]);
            }
        }
    }
    TriMesh::finalize(
        vertices,
        triangles,
        format!("rect[{x0:.3},{x1:.3}]x[{y0:.3},{y1:.3}]"),
        None,
        None,
    )
}

/// Delaunay mesh of a convex polygon: boundary subdivision at spacing h plus
/// a hexagonal interior lattice, two smoothing sweeps, and retriangulation.
pub fn mesh_convex_polygon(poly: &ConvexPolygon, h: f64) -> Result<TriMesh> {
    if !(h > 0.0) {
        return Err(Error::Mesh("mesh width must be positive".into()));
    }
    let verts = poly.vertices();
    let n = verts.len();
    let mut boundary: Vec<[f64; 2]> = Vec::new();
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        let m = (len / h).ceil().max(1.0) as usize;
        for k in 0..m {
            let t = k as f64 / m as f64;
            boundary.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    let n_boundary = boundary.len();
    // Hexagonal lattice clipped with a safety margin from every edge line.
    let (lo, hi) = poly.bbox();
    let row_h = h * 3.0f64.sqrt() / 2.0;
    let margin = 0.52 * h;
    let edges: Vec<([f64; 2], [f64; 2])> = (0..n)
        .map(|i| (verts[i], verts[(i + 1) % n]))
        .collect();
    let dist_ok = |p: [f64; 2]| {
        edges.iter().all(|(a, b)| {
            let ex = b[0] - a[0];
            let ey = b[1] - a[1];
            let len = ex.hypot(ey);
            // Signed distance to the edge line (positive inside for ccw).
            (ex * (p[1] - a[1]) - ey * (p[0] - a[0])) / len >= margin
        })
    };
    let mut pts = boundary;
    let mut row = 0usize;
    let mut y = lo[1] + 0.5 * row_h;
    while y < hi[1] {
        let offset = if row % 2 == 0 { 0.5 * h } else { h };
        let mut x = lo[0] + offset;
        while x < hi[0] {
            if dist_ok([x, y]) {
                pts.push([x, y]);
            }
            x += h;
        }
        y += row_h;
        row += 1;
    }
    let mut tris = Delaunay::triangulate(&pts);
    // Laplacian smoothing of interior points, then retriangulate.
    for _ in 0..2 {
        let mut acc = vec![[0.0f64; 2]; pts.len()];
        let mut cnt = vec![0usize; pts.len()];
        for t in &tris {
            for e in 0..3 {
                let a = t[e];
                let b = t[(e + 1) % 3];
                acc[a][0] += pts[b][0];
                acc[a][1] += pts[b][1];
                cnt[a] += 1;
                acc[b][0] += pts[a][0];
                acc[b][1] += pts[a][1];
                cnt[b] += 1;
            }
        }
        for i in n_boundary..pts.len() {
            if cnt[i] > 0 {
                let cand = [acc[i][0] / cnt[i] as f64, acc[i][1] / cnt[i] as f64];
                if dist_ok(cand) {
                    pts[i] = cand;
                }
            }
        }
        tris = Delaunay::triangulate(&pts);
    }
    TriMesh::finalize(pts, tris, format!("polygon[{n}]"), None, None)
}

/// Splits a (possibly slanted) quad cell a-b-c-d into two triangles along the
/// diagonal that maximizes the smallest angle.
fn split_quad(
    triangles: &mut Vec<[usize; 3]>,
    verts: &[[f64; 2]],
    q: [usize; 4],
) {
    let min_angle = |t: [usize; 3]| {
        let a = tri_angles_deg(verts[t[0]], verts[t[1]], verts[t[2]]);
        a[0].min(a[1]).min(a[2])
    };
    let [a, b, c, d] = q;
    let ac = min_angle([a, b, c]).min(min_angle([a, c, d]));
    let bd = min_angle([a, b, d]).min(min_angle([b, c, d]));
    if ac >= bd {
        triangles.push([a, b, c]);
        triangles.push([a, c, d]);
    } else {
        triangles.push([a, b, d]);
        triangles.push([b, c, d]);
    }
}

/// Column/level structure of a terrain-following channel mesh, used to pull
/// nodal fields back to the reference strip.
#[derive(Debug, Clone)]
pub struct ChannelLayout {
    pub cols: Vec<f64>,
    pub col_start: Vec<usize>,
    pub levels: Vec<f64>,
    pub corner: bool,
}

/// Terrain-following mesh of the channel domain under f_eps, graded toward
/// the origin corner (column spacing tied to the local height, floored at
/// h/100) and aligned with x = a_eps and any profile kinks. Transverse levels
/// are spread uniformly in angle as seen from the corner, which keeps the
/// apex fan above the graded-zone angle bound.
pub fn mesh_profile(
    map: &ThinMap,
    w: &WeightSpec,
    h: f64,
    tail_tol: f64,
    n_layers: usize,
) -> Result<TriMesh> {
    mesh_profile_with_layout(map, w, h, tail_tol, n_layers).map(|(m, _)| m)
}

pub fn mesh_profile_with_layout(
    map: &ThinMap,
    w: &WeightSpec,
    h: f64,
    tail_tol: f64,
    n_layers: usize,
) -> Result<(TriMesh, ChannelLayout)> {
    if !(h > 0.0) {
        return Err(Error::Mesh("mesh width must be positive".into()));
    }
    let eps = map.eps;
    let corner = matches!(map.inlet, crate::thinlimit::Inlet::Corner(_));
    // Cap the layer count so the apex fan slices stay above 5 degrees.
    let mut m = n_layers.max(2);
    let levels: Vec<f64> = if corner {
        let slope = match &map.inlet {
            crate::thinlimit::Inlet::Corner(p) => p.fprime0(),
            crate::thinlimit::Inlet::Flat => unreachable!(),
        };
        let theta = slope.atan();
        while m > 2 && theta.to_degrees() / (m as f64) < 5.5 {
            m -= 1;
        }
        (0..=m)
            .map(|j| (theta * j as f64 / m as f64).tan() / theta.tan())
            .collect()
    } else {
        (0..=m).map(|j| j as f64 / m as f64).collect()
    };
    let dt_min = levels
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);

    // Right cutoff from the channel tail bound.
    let tail = |x: f64| eps * crate::geometry::measure::gauss_tail_right(w.x0, x);
    let mut xr = map.a_eps.max(1.0);
    while tail(xr) > tail_tol {
        xr += 0.25;
        if xr > 80.0 {
            break;
        }
    }
    // Column abscissae: graded in the wedge, uniform in the channel.
    let mut cols: Vec<f64> = vec![0.0];
    let mut x = 0.0f64;
    if corner {
        x = (h / 100.0).min(0.25 * map.a_eps.max(1e-9));
        let mut forced: Vec<f64> = match &map.inlet {
            crate::thinlimit::Inlet::Corner(p) => {
                p.kinks().into_iter().filter(|&k| k < map.a_eps).collect()
            }
            crate::thinlimit::Inlet::Flat => Vec::new(),
        };
        forced.push(map.a_eps);
        forced.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut fi = 0usize;
        while x < map.a_eps {
            cols.push(x);
            // Local width tied to the thinnest local row keeps angles bounded.
            let local = (2.5 * map.f_eps(x) * dt_min).clamp(h / 100.0, h);
            let mut next = x + local;
            if fi < forced.len() && next > forced[fi] - 0.25 * local {
                next = forced[fi];
                fi += 1;
            }
            x = next;
        }
        x = map.a_eps;
    }
    let dx_channel = h.min(2.5 * eps * dt_min);
    while x < xr {
        cols.push(x);
        x += dx_channel;
    }
    cols.push(xr);
    cols.dedup_by(|a, b| (*a - *b).abs() < 1e-13 * xr);

    // Vertices: a single corner vertex when f(0) = 0, full columns elsewhere.
    let mut vertices: Vec<[f64; 2]> = Vec::new();
    let mut col_start: Vec<usize> = Vec::new();
    for (ci, &xc) in cols.iter().enumerate() {
        col_start.push(vertices.len());
        if ci == 0 && corner {
            vertices.push([0.0, 0.0]);
        } else {
            let height = map.f_eps(xc);
            for &t in &levels {
                vertices.push([xc, height * t]);
            }
        }
    }
    let mut triangles: Vec<[usize; 3]> = Vec::new();
    for ci in 0..cols.len() - 1 {
        let s0 = col_start[ci];
        let s1 = col_start[ci + 1];
        if ci == 0 && corner {
            for j in 0..m {
                triangles.push([s0, s1 + j, s1 + j + 1]);
            }
        } else {
            for j in 0..m {
                split_quad(
                    &mut triangles,
                    &vertices,
                    [s0 + j, s1 + j, s1 + j + 1, s0 + j + 1],
                );
            }
        }
    }
    let zone = if corner {
        Some(([0.0, 0.0], map.a_eps + h))
    } else {
        None
    };
    let layout = ChannelLayout {
        cols,
        col_start,
        levels,
        corner,
    };
    let mesh = TriMesh::finalize(
        vertices,
        triangles,
        format!("profile(eps={eps})"),
        Some(xr + w.x0),
        zone,
    )?;
    Ok((mesh, layout))
}

#[derive(Debug, Clone, Copy)]
pub struct MeshOpts {
    pub h: f64,
    pub tail_tol: f64,
    /// Transverse layers for profile meshes; 0 picks a default.
    pub n_layers: usize,
}

impl Default for MeshOpts {
    fn default() -> Self {
        MeshOpts {
            h: 0.1,
            tail_tol: 1e-10,
            n_layers: 0,
        }
    }
}

/// Meshes any domain kind, truncating unbounded ones first.
pub fn mesh_domain(w: &WeightSpec, d: &Domain, opts: &MeshOpts) -> Result<TriMesh> {
    match d {
        Domain::Strip { y1, y2 } | Domain::SemiStrip { y1, y2, .. } => {
            let t = truncate(w, d, opts.tail_tol)?;
            let (lo, hi) = t.polygon.bbox();
            let mut mesh = mesh_rectangle(lo[0], hi[0], *y1, *y2, opts.h)?;
            mesh.domain_tag = d.tag();
            mesh.trunc_radius = t.radius;
            Ok(mesh)
        }
        Domain::Plane => {
            let t = truncate(w, d, opts.tail_tol)?;
            let mut mesh = mesh_convex_polygon(&t.polygon, opts.h)?;
            mesh.domain_tag = d.tag();
            mesh.trunc_radius = t.radius;
            Ok(mesh)
        }
        Domain::Polygon { vertices } => {
            let mut mesh = mesh_convex_polygon(vertices, opts.h)?;
            mesh.domain_tag = d.tag();
            Ok(mesh)
        }
        Domain::Profile { f, eps } => {
            let map = ThinMap::new(f.clone(), *eps)?;
            let layers = if opts.n_layers > 0 {
                opts.n_layers
            } else {
                ((eps / opts.h).ceil() as usize).clamp(4, 12)
            };
            let mut mesh = mesh_profile(&map, w, opts.h, opts.tail_tol, layers)?;
            mesh.domain_tag = d.tag();
            Ok(mesh)
        }
    }
}
