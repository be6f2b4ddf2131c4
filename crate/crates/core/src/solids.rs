//! Regular point configurations on S²: Platonic solids and regular polygons on
//! the equator, with the subset of special points whose half turns preserve the
//! vertex set.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere::{UnitVector, TAU_GEOM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolidFamily {
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
    /// Regular polygon with the given number of vertices on the equator.
    NGon(usize),
}

impl SolidFamily {
    pub const PLATONIC: [SolidFamily; 5] = [
        SolidFamily::Tetrahedron,
        SolidFamily::Cube,
        SolidFamily::Octahedron,
        SolidFamily::Dodecahedron,
        SolidFamily::Icosahedron,
    ];
}

impl fmt::Display for SolidFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolidFamily::Tetrahedron => f.write_str("tetrahedron"),
            SolidFamily::Cube => f.write_str("cube"),
            SolidFamily::Octahedron => f.write_str("octahedron"),
            SolidFamily::Dodecahedron => f.write_str("dodecahedron"),
            SolidFamily::Icosahedron => f.write_str("icosahedron"),
            SolidFamily::NGon(n) => write!(f, "n_gon({n})"),
        }
    }
}

impl FromStr for SolidFamily {
    type Err = Error;

    /// Accepts the display names plus `n_gon:N` and `ngonN`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Ok(match lower.as_str() {
            "tetrahedron" => SolidFamily::Tetrahedron,
            "cube" => SolidFamily::Cube,
            "octahedron" => SolidFamily::Octahedron,
            "dodecahedron" => SolidFamily::Dodecahedron,
            "icosahedron" => SolidFamily::Icosahedron,
            other => {
                let digits = other
                    .strip_prefix("n_gon(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| other.strip_prefix("n_gon:"))
                    .or_else(|| other.strip_prefix("ngon"))
                    .ok_or_else(|| Error::invalid(format!("unknown solid family {s:?}")))?;
                let n = digits.parse().map_err(|_| Error::invalid(format!("bad polygon size in {s:?}")))?;
                SolidFamily::NGon(n)
            }
        })
    }
}

impl Serialize for SolidFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SolidFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolidSpec {
    pub family: SolidFamily,
    pub vertices: Vec<UnitVector>,
    pub edge_midpoints: Vec<UnitVector>,
    pub face_centers: Vec<UnitVector>,
    /// Special points whose half turn maps the vertex set onto itself.
    pub q: Vec<UnitVector>,
    pub adjacency: Vec<(usize, usize)>,
    #[serde(skip)]
    distances: Vec<Vec<usize>>,
}

fn unit(v: Vector3<f64>) -> UnitVector {
    UnitVector::normalize(v).expect("configuration points are nonzero")
}

fn octahedron_points() -> Vec<UnitVector> {
    (0..3)
        .flat_map(|i| {
            [1.0, -1.0].map(|s| {
                let mut v = Vector3::zeros();
                v[i] = s;
                unit(v)
            })
        })
        .collect()
}

fn cube_points() -> Vec<UnitVector> {
    let mut out = Vec::with_capacity(8);
    for x in [1.0, -1.0] {
        for y in [1.0, -1.0] {
            for z in [1.0, -1.0] {
                out.push(unit(Vector3::new(x, y, z)));
            }
        }
    }
    out
}

fn tetrahedron_points() -> Vec<UnitVector> {
    [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
        .into_iter()
        .map(|c| unit(Vector3::from(c)))
        .collect()
}

fn icosahedron_points() -> Vec<UnitVector> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut out = Vec::with_capacity(12);
    for a in [1.0, -1.0] {
        for b in [phi, -phi] {
            out.push(unit(Vector3::new(0.0, a, b)));
            out.push(unit(Vector3::new(a, b, 0.0)));
            out.push(unit(Vector3::new(b, 0.0, a)));
        }
    }
    out
}

/// Pairs of points at the minimal angular distance.
fn nearest_pairs(points: &[UnitVector]) -> Vec<(usize, usize)> {
    let best = points
        .iter()
        .enumerate()
        .flat_map(|(i, p)| points[i + 1..].iter().map(move |q| p.dot(q)))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut pairs = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i].dot(&points[j]) - best).abs() < 1e-7 {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Triangular faces of a solid whose edge graph is `edges`, as normalized centroids.
fn triangle_centers(points: &[UnitVector], edges: &[(usize, usize)]) -> Vec<UnitVector> {
    let adjacent = |a: usize, b: usize| edges.iter().any(|&(i, j)| (i, j) == (a.min(b), a.max(b)));
    let mut out = Vec::new();
    for &(i, j) in edges {
        for k in j + 1..points.len() {
            if adjacent(i, k) && adjacent(j, k) {
                out.push(unit(points[i].vector() + points[j].vector() + points[k].vector()));
            }
        }
    }
    out
}

fn contains_point(set: &[UnitVector], p: &UnitVector) -> bool {
    set.iter().any(|x| x.approx_eq(p, TAU_GEOM.sqrt()))
}

/// True when the half turn about `p` permutes `vertices`.
pub fn is_reflection_stable(vertices: &[UnitVector], p: &UnitVector) -> bool {
    vertices.iter().all(|v| contains_point(vertices, &p.reflect(v)))
}

fn bfs_distances(n: usize, adjacency: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut neighbours = vec![Vec::new(); n];
    for &(i, j) in adjacency {
        neighbours[i].push(j);
        neighbours[j].push(i);
    }
    (0..n)
        .map(|start| {
            let mut dist = vec![usize::MAX; n];
            dist[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &neighbours[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            dist
        })
        .collect()
}

pub fn build_solid(family: SolidFamily) -> Result<SolidSpec> {
    let (vertices, adjacency, edge_midpoints, face_centers) = match family {
        SolidFamily::NGon(n) => {
            if n < 2 {
                return Err(Error::invalid(format!("a polygon needs at least 2 vertices, got {n}")));
            }
            let at = |t: f64| unit(Vector3::new(t.cos(), t.sin(), 0.0));
            let step = 2.0 * PI / n as f64;
            let vertices: Vec<_> = (0..n).map(|k| at(step * k as f64)).collect();
            let mids: Vec<_> = (0..n).map(|k| at(step * (k as f64 + 0.5))).collect();
            let adjacency =
                if n == 2 { vec![(0, 1)] } else { (0..n).map(|k| (k.min((k + 1) % n), k.max((k + 1) % n))).collect() };
            let poles = vec![unit(Vector3::z()), unit(-Vector3::z())];
            (vertices, adjacency, mids, poles)
        }
        _ => {
            let (vertices, faces) = match family {
                SolidFamily::Tetrahedron => {
                    let v = tetrahedron_points();
                    let f = v.iter().map(UnitVector::antipode).collect();
                    (v, f)
                }
                SolidFamily::Octahedron => (octahedron_points(), cube_points()),
                SolidFamily::Cube => (cube_points(), octahedron_points()),
                SolidFamily::Icosahedron => {
                    let v = icosahedron_points();
                    let f = triangle_centers(&v, &nearest_pairs(&v));
                    (v, f)
                }
                SolidFamily::Dodecahedron => {
                    let ico = icosahedron_points();
                    (triangle_centers(&ico, &nearest_pairs(&ico)), ico)
                }
                SolidFamily::NGon(_) => unreachable!(),
            };
            let adjacency = nearest_pairs(&vertices);
            let mids = adjacency.iter().map(|&(i, j)| unit(vertices[i].vector() + vertices[j].vector())).collect();
            (vertices, adjacency, mids, faces)
        }
    };
    let distances = bfs_distances(vertices.len(), &adjacency);
    let mut spec = SolidSpec { family, vertices, edge_midpoints, face_centers, q: Vec::new(), adjacency, distances };
    spec.q = compute_q(&spec);
    Ok(spec)
}

/// The points of V ∪ E ∪ F whose half turn preserves V.
pub fn compute_q(s: &SolidSpec) -> Vec<UnitVector> {
    let mut out: Vec<UnitVector> = Vec::new();
    for p in s.vertices.iter().chain(&s.edge_midpoints).chain(&s.face_centers) {
        if is_reflection_stable(&s.vertices, p) && !contains_point(&out, p) {
            out.push(*p);
        }
    }
    out
}

pub fn graph_distance(s: &SolidSpec, i: usize, j: usize) -> Result<usize> {
    let n = s.vertices.len();
    if i >= n || j >= n {
        return Err(Error::invalid(format!("vertex index out of range ({i}, {j}) for {n} vertices")));
    }
    Ok(s.distances[i][j])
}

impl SolidSpec {
    pub fn in_q(&self, p: &UnitVector) -> bool {
        contains_point(&self.q, p)
    }

    pub fn distance(&self, i: usize, j: usize) -> usize {
        self.distances[i][j]
    }

    /// Index of the vertex antipodal to `i`, if there is one.
    pub fn antipode_of(&self, i: usize) -> Option<usize> {
        let a = self.vertices[i].antipode();
        self.vertices.iter().position(|v| v.approx_eq(&a, 1e-7))
    }

    pub fn vertex_index(&self, p: &UnitVector) -> Option<usize> {
        self.vertices.iter().position(|v| v.approx_eq(p, 1e-7))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(f: SolidFamily) -> (usize, usize, usize, usize) {
        let s = build_solid(f).unwrap();
        (s.vertices.len(), s.edge_midpoints.len(), s.face_centers.len(), s.q.len())
    }

    #[test]
    fn euler_counts() {
        for (f, v, e, fc) in [
            (SolidFamily::Tetrahedron, 4, 6, 4),
            (SolidFamily::Cube, 8, 12, 6),
            (SolidFamily::Octahedron, 6, 12, 8),
            (SolidFamily::Dodecahedron, 20, 30, 12),
            (SolidFamily::Icosahedron, 12, 30, 20),
        ] {
            let (cv, ce, cf, _) = counts(f);
            assert_eq!((cv, ce, cf), (v, e, fc), "{f}");
            assert_eq!(v + fc, e + 2);
        }
    }

    #[test]
    fn special_point_sets_per_family() {
        let s = build_solid(SolidFamily::Octahedron).unwrap();
        assert_eq!(s.q.len(), 18);
        assert!(s.vertices.iter().chain(&s.edge_midpoints).all(|p| s.in_q(p)));
        assert!(s.face_centers.iter().all(|p| !s.in_q(p)));

        let s = build_solid(SolidFamily::Cube).unwrap();
        assert_eq!(s.q.len(), 18);
        assert!(s.edge_midpoints.iter().chain(&s.face_centers).all(|p| s.in_q(p)));

        for f in [SolidFamily::Icosahedron, SolidFamily::Dodecahedron] {
            let s = build_solid(f).unwrap();
            assert_eq!(s.q.len(), 30);
            assert!(s.edge_midpoints.iter().all(|p| s.in_q(p)));
        }

        assert_eq!(counts(SolidFamily::NGon(4)).3, 4 + 4 + 2);
        assert_eq!(counts(SolidFamily::NGon(5)).3, 5 + 5);
    }

    #[test]
    fn square_on_equator() {
        let s = build_solid(SolidFamily::NGon(4)).unwrap();
        let expected = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (v, (x, y)) in s.vertices.iter().zip(expected) {
            assert!((v.x() - x).abs() < 1e-12 && (v.y() - y).abs() < 1e-12 && v.z() == 0.0);
        }
        assert!(matches!(build_solid(SolidFamily::NGon(1)), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn graph_distances() {
        let s = build_solid(SolidFamily::Octahedron).unwrap();
        let (i, j) = s.adjacency[0];
        assert_eq!(graph_distance(&s, i, j).unwrap(), 1);
        let a = s.antipode_of(0).unwrap();
        assert_eq!(graph_distance(&s, 0, a).unwrap(), 2);
        assert!(graph_distance(&s, 0, 99).is_err());

        let d = build_solid(SolidFamily::Dodecahedron).unwrap();
        let a = d.antipode_of(0).unwrap();
        assert_eq!(graph_distance(&d, 0, a).unwrap(), 5);
        assert_eq!((0..20).map(|j| d.distance(0, j)).max(), Some(5));
    }

    #[test]
    fn tetrahedron_midpoints_form_an_octahedron() {
        let t = build_solid(SolidFamily::Tetrahedron).unwrap();
        let o = build_solid(SolidFamily::Octahedron).unwrap();
        assert!(t.edge_midpoints.iter().all(|p| contains_point(&o.vertices, p)));
    }

    #[test]
    fn q_membership_is_direct_stability() {
        for f in SolidFamily::PLATONIC.into_iter().chain([SolidFamily::NGon(2), SolidFamily::NGon(7)]) {
            let s = build_solid(f).unwrap();
            for p in s.vertices.iter().chain(&s.edge_midpoints).chain(&s.face_centers) {
                assert_eq!(s.in_q(p), is_reflection_stable(&s.vertices, p), "{f}");
            }
            assert_eq!(compute_q(&s).len(), s.q.len());
        }
    }

    #[test]
    fn family_names_parse() {
        assert_eq!("n_gon(6)".parse::<SolidFamily>().unwrap(), SolidFamily::NGon(6));
        assert_eq!("ngon5".parse::<SolidFamily>().unwrap(), SolidFamily::NGon(5));
        assert_eq!("Cube".parse::<SolidFamily>().unwrap(), SolidFamily::Cube);
        assert!("prism".parse::<SolidFamily>().is_err());
    }
}
