//! Enumeration of basic triangles whose vertices lie on a regular
//! configuration and whose edge midpoints lie in its special set Q.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::Vector3;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use super::{
    attach_hemisphere, canonical_rotation, rotate, ArcKind, AtlasEntry, AtlasFamily, BalanceClass, CornerAngles,
    EdgeLabel, Note, SphericalTriangle, TriangleGeometry,
};
use crate::error::{Error, Result};
use crate::rational::{int, rat, snap, to_f64, Rational};
use crate::solids::{build_solid, SolidFamily, SolidSpec};
use crate::sphere::{UnitVector, TAU_GEOM};

const ANGLE_DENOMINATOR: i64 = 120;
const ANGLE_TOLERANCE: f64 = 1e-7;

/// Concrete boundary of an atlas entry inside a configuration: vertex indices
/// clockwise around the region, edge `i` opposite vertex `i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Representative {
    pub solid: SolidFamily,
    pub vertices: [usize; 3],
    pub arcs: [ArcKind; 3],
    pub midpoints: [UnitVector; 3],
}

fn unit(v: Vector3<f64>) -> Result<UnitVector> {
    UnitVector::normalize(v)
}

/// Unit tangent at `v` pointing along the great circle towards `m`.
fn tangent(v: &UnitVector, m: &UnitVector) -> Result<Vector3<f64>> {
    let t = m.vector() - v.vector() * m.dot(v);
    let norm = t.norm();
    if norm < TAU_GEOM {
        return Err(Error::Degenerate("edge midpoint coincides with an endpoint".into()));
    }
    Ok(t / norm)
}

/// Interior angle at `v` (radians) for a boundary traversed with the region on the right.
fn corner_angle(v: &UnitVector, prev_mid: &UnitVector, next_mid: &UnitVector) -> Result<f64> {
    let w = tangent(v, prev_mid)?;
    let u = tangent(v, next_mid)?;
    Ok(w.cross(&u).dot(v.vector()).atan2(w.dot(&u)).rem_euclid(2.0 * PI))
}

/// Angles (units of π) at `pts`, where `mids[e]` is the midpoint of the edge
/// from `pts[e]` to `pts[e + 1]`.
fn traversal_angles(pts: &[UnitVector; 3], mids: &[UnitVector; 3]) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (i, o) in out.iter_mut().enumerate() {
        *o = corner_angle(&pts[i], &mids[(i + 2) % 3], &mids[i])? / PI;
    }
    Ok(out)
}

/// Snaps all three corners when each is a small rational.
fn classify_angles(raw: [f64; 3]) -> CornerAngles {
    let snapped = raw.map(|a| snap(a, ANGLE_DENOMINATOR, ANGLE_TOLERANCE));
    match snapped {
        [Some(a), Some(b), Some(c)] => CornerAngles::Exact([a, b, c]),
        _ => CornerAngles::Approx(raw),
    }
}

fn area_from(raw: &[f64; 3]) -> Option<Rational> {
    snap((raw.iter().sum::<f64>() - 1.0) / 2.0, ANGLE_DENOMINATOR, ANGLE_TOLERANCE)
}

/// A closed curve with vertex indices in traversal order; `arcs[e]` runs from
/// `vertices[e]` to `vertices[e + 1]`.
#[derive(Clone, Debug)]
struct Curve {
    vertices: [usize; 3],
    arcs: [ArcKind; 3],
    mids: [UnitVector; 3],
}

impl Curve {
    fn reversed(&self) -> Curve {
        let [a, b, c] = self.vertices;
        Curve {
            vertices: [a, c, b],
            arcs: [self.arcs[2], self.arcs[1], self.arcs[0]],
            mids: [self.mids[2], self.mids[1], self.mids[0]],
        }
    }

    fn points(&self, s: &SolidSpec) -> [UnitVector; 3] {
        self.vertices.map(|i| s.vertices[i])
    }

    /// Converts traversal-ordered edges into the opposite-vertex convention.
    fn into_representative(self, solid: SolidFamily) -> Representative {
        // edge e joins vertex e and e+1, so it is opposite vertex e+2
        let opp = |i: usize| (i + 1) % 3;
        Representative {
            solid,
            vertices: self.vertices,
            arcs: [0, 1, 2].map(|i| self.arcs[opp(i)]),
            midpoints: [0, 1, 2].map(|i| self.mids[opp(i)]),
        }
    }
}

fn candidate_curves(s: &SolidSpec) -> Result<Vec<Curve>> {
    let nv = s.vertices.len();
    let mut out = Vec::new();
    let minor = |a: usize, b: usize| unit(s.vertices[a].vector() + s.vertices[b].vector());
    for i in 0..nv {
        for j in i + 1..nv {
            for k in j + 1..nv {
                let tri = [i, j, k];
                let antipodal =
                    [(0, 1), (1, 2), (0, 2)].into_iter().find(|&(a, b)| s.antipode_of(tri[a]) == Some(tri[b]));
                if let Some((a, b)) = antipodal {
                    let (p, ap) = (tri[a], tri[b]);
                    let r = tri[3 - a - b];
                    let (Ok(m1), Ok(m2)) = (minor(p, r), minor(r, ap)) else { continue };
                    if !s.in_q(&m1) || !s.in_q(&m2) {
                        continue;
                    }
                    for m in s.q.iter().filter(|m| m.dot(&s.vertices[p]).abs() < TAU_GEOM) {
                        out.push(Curve {
                            vertices: [p, r, ap],
                            arcs: [ArcKind::Minor, ArcKind::Minor, ArcKind::Half],
                            mids: [m1, m2, *m],
                        });
                    }
                    continue;
                }
                let [pi, pj, pk] = tri.map(|t| *s.vertices[t].vector());
                if pi.cross(&pj).dot(&pk).abs() < TAU_GEOM {
                    // three points on one great circle only bound hemispheres
                    continue;
                }
                let base = [minor(i, j)?, minor(j, k)?, minor(k, i)?];
                for major in [None, Some(0), Some(1), Some(2)] {
                    let mut arcs = [ArcKind::Minor; 3];
                    let mut mids = base;
                    if let Some(e) = major {
                        arcs[e] = ArcKind::Major;
                        mids[e] = mids[e].antipode();
                    }
                    if mids.iter().all(|m| s.in_q(m)) {
                        out.push(Curve { vertices: tri, arcs, mids });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn atlas_family(solid: SolidFamily) -> AtlasFamily {
    match solid {
        SolidFamily::Octahedron => AtlasFamily::Octahedral,
        SolidFamily::Tetrahedron | SolidFamily::Cube => AtlasFamily::Cubical,
        SolidFamily::Icosahedron => AtlasFamily::Icosahedral,
        SolidFamily::Dodecahedron => AtlasFamily::Dodecahedral,
        SolidFamily::NGon(_) => AtlasFamily::Dihedral,
    }
}

fn note_for(labels: &[EdgeLabel; 3], theta: &CornerAngles) -> Note {
    if labels[0] == labels[1] && labels[1] == labels[2] {
        Note::Regular
    } else if theta.balance() == BalanceClass::Semibalanced {
        Note::Semibalanced
    } else {
        Note::None
    }
}

fn marker(n: Rational, complement: bool) -> AtlasEntry {
    AtlasEntry {
        family: AtlasFamily::KleinFour,
        n,
        distances: None,
        note: Note::None,
        counts: [0; 3],
        angles: None,
        complement,
        representative: None,
    }
}

/// Basic triangles with `n < 1` on `family`, their complements, and Klein-four
/// markers. Tetrahedral triangles are reported inside the cube that contains
/// the tetrahedron; polygons yield the dihedral hemispheres.
pub fn enumerate_basic(family: SolidFamily) -> Result<Vec<AtlasEntry>> {
    let solid = build_solid(family)?;
    let (label_solid, index_map) = match family {
        SolidFamily::Tetrahedron => {
            let cube = build_solid(SolidFamily::Cube)?;
            let map = solid
                .vertices
                .iter()
                .map(|v| {
                    cube.vertex_index(v).ok_or_else(|| Error::Degenerate("tetrahedron not inscribed in cube".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            (cube, map)
        }
        _ => (solid.clone(), (0..solid.vertices.len()).collect()),
    };
    let fam = atlas_family(family);

    let mut found: BTreeMap<(Rational, [EdgeLabel; 3]), AtlasEntry> = BTreeMap::new();
    let mut klein_four = false;
    for curve in candidate_curves(&solid)? {
        let mut raw = traversal_angles(&curve.points(&solid), &curve.mids)?;
        if raw.iter().any(|&t| !(TAU_GEOM..=2.0 - TAU_GEOM).contains(&t)) {
            continue;
        }
        // corners may be irrational, but a finite-monodromy area is not
        let Some(mut n) = area_from(&raw) else { continue };
        let mut curve = curve;
        if n == Rational::one() {
            continue;
        }
        if n > Rational::one() {
            curve = curve.reversed();
            raw = [raw[0], raw[2], raw[1]].map(|t| 2.0 - t);
            n = int(2) - n;
        }
        let theta = classify_angles(raw);
        if theta.balance() == BalanceClass::Unbalanced {
            continue;
        }
        if n == rat(1, 2) {
            klein_four = true;
            continue;
        }
        let mut rep = curve.into_representative(label_solid.family);
        rep.vertices = rep.vertices.map(|v| index_map[v]);
        let labels: [EdgeLabel; 3] = [0, 1, 2].map(|i| {
            let (b, c) = (rep.vertices[(i + 1) % 3], rep.vertices[(i + 2) % 3]);
            EdgeLabel { distance: label_solid.distance(b, c), major: rep.arcs[i] == ArcKind::Major }
        });
        let r = canonical_rotation(&labels);
        let labels = rotate(&labels, r);
        let theta = theta.rotated(r);
        let rep = Representative {
            solid: rep.solid,
            vertices: rotate(&rep.vertices, r),
            arcs: rotate(&rep.arcs, r),
            midpoints: rotate(&rep.midpoints, r),
        };
        found.entry((n, labels)).or_insert_with(|| AtlasEntry {
            family: fam,
            n,
            distances: Some(labels),
            note: note_for(&labels, &theta),
            counts: [0; 3],
            angles: Some(theta),
            complement: false,
            representative: Some(rep),
        });
    }

    let mut out: Vec<AtlasEntry> = found.into_values().collect();
    let complements: Vec<AtlasEntry> = out
        .iter()
        .filter(|e| e.angles.is_some_and(|t| t.balance() == BalanceClass::StrictlyBalanced))
        .map(|e| AtlasEntry {
            n: int(2) - e.n,
            angles: e.angles.map(|t| t.complement()),
            note: e.note,
            complement: true,
            ..e.clone()
        })
        .collect();
    out.extend(complements);
    if let SolidFamily::NGon(k) = family {
        out.extend(enumerate_dihedral(k)?);
    }
    if klein_four {
        out.push(marker(rat(1, 2), false));
        out.push(marker(rat(3, 2), true));
    }
    out.sort_by_key(|a| a.sort_key());
    Ok(out)
}

/// Hemispheres bounded by three vertices of the `k`-gon, by arc steps
/// `(k1, k2, k3)` with coprime entries, up to rotation.
pub fn enumerate_dihedral(k: usize) -> Result<Vec<AtlasEntry>> {
    if k < 3 {
        return Err(Error::invalid(format!("dihedral hemispheres need at least three polygon vertices, got {k}")));
    }
    let solid = build_solid(SolidFamily::NGon(k))?;
    let step = 2.0 * PI / k as f64;
    let point = |angle: f64| UnitVector::new(angle.cos(), angle.sin(), 0.0);
    let mut out = Vec::new();
    for k1 in 1..k {
        for k2 in 1..k - k1 {
            let k3 = k - k1 - k2;
            let steps = [k1, k2, k3];
            if k1.gcd(&k2).gcd(&k3) != 1 || canonical_rotation(&steps.map(label)) != 0 {
                continue;
            }
            // clockwise seen from the north pole: P1 at 0, then P2, P3 at decreasing angles
            let pos = [0, k - k3, k2];
            let start_angle = |i: usize| pos[i] as f64 * step;
            let midpoints = [0, 1, 2]
                .map(|i| {
                    // edge opposite P_i runs from P_{i+1} clockwise by steps[i]
                    let from = start_angle((i + 1) % 3);
                    point(from - steps[i] as f64 * step / 2.0)
                })
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            let arcs = steps.map(|s| match (2 * s).cmp(&k) {
                std::cmp::Ordering::Less => ArcKind::Minor,
                std::cmp::Ordering::Equal => ArcKind::Half,
                std::cmp::Ordering::Greater => ArcKind::Major,
            });
            let labels = steps.map(label);
            out.push(AtlasEntry {
                family: AtlasFamily::Dihedral,
                n: Rational::one(),
                distances: Some(labels),
                note: if k1 == k2 && k2 == k3 { Note::Regular } else { Note::None },
                counts: [0; 3],
                angles: Some(CornerAngles::Exact([int(1); 3])),
                complement: false,
                representative: Some(Representative {
                    solid: solid.family,
                    vertices: pos,
                    arcs,
                    midpoints: midpoints.try_into().expect("three midpoints"),
                }),
            });
        }
    }
    Ok(out)
}

fn label(distance: usize) -> EdgeLabel {
    EdgeLabel { distance, major: false }
}

/// Builds the explicit triangle for an entry, checking its corners and
/// midpoints against `solid`, then attaches the recorded hemispheres.
pub fn realize_geometry(entry: &AtlasEntry, solid: &SolidSpec) -> Result<SphericalTriangle> {
    let rep = entry
        .representative
        .as_ref()
        .ok_or_else(|| Error::Unsupported(format!("{} entries carry no geometry", entry.family)))?;
    if rep.solid != solid.family {
        return Err(Error::invalid(format!("entry lives on {}, not {}", rep.solid, solid.family)));
    }
    if let Some(&i) = rep.vertices.iter().find(|&&i| i >= solid.vertices.len()) {
        return Err(Error::invalid(format!("vertex {i} out of range")));
    }
    let vertices = rep.vertices.map(|i| solid.vertices[i]);
    for (i, m) in rep.midpoints.iter().enumerate() {
        if !solid.in_q(m) {
            return Err(Error::Degenerate(format!("midpoint of edge {i} is not a special point")));
        }
        let (b, c) = (vertices[(i + 1) % 3], vertices[(i + 2) % 3]);
        if (b.angle_to(m) - c.angle_to(m)).abs() > 1e-7 {
            return Err(Error::Degenerate(format!("edge {i} is not bisected by its midpoint")));
        }
    }
    // traversal order P1 -> P2 -> P3: edge e from P_e to P_{e+1} is opposite P_{e+2}
    let mids = [rep.midpoints[2], rep.midpoints[0], rep.midpoints[1]];
    let raw = traversal_angles(&vertices, &mids)?;
    let theta = classify_angles(raw);
    let theta = if entry.complement { theta.complement() } else { theta };
    let expected = entry.angles.ok_or_else(|| Error::Unsupported("entry has no angles".into()))?;
    let close = theta.to_f64().iter().zip(expected.to_f64()).all(|(a, b)| (a - b).abs() < ANGLE_TOLERANCE);
    if !close || theta.exact().is_some() != expected.exact().is_some() {
        return Err(Error::Degenerate(format!("realized angles {theta:?} differ from {expected:?}")));
    }
    let sum: f64 = theta.to_f64().iter().sum();
    if (sum - (2.0 * to_f64(entry.n) + 1.0)).abs() > TAU_GEOM {
        return Err(Error::Degenerate(format!("angle sum {sum} does not match n = {}", entry.n)));
    }
    let mut lengths = [0.0; 3];
    for i in 0..3 {
        lengths[i] = 2.0 * vertices[(i + 1) % 3].angle_to(&rep.midpoints[i]);
    }
    let (arcs, midpoints) = (rep.arcs, rep.midpoints);
    let mut t = SphericalTriangle {
        angles: theta,
        lengths,
        n: entry.n,
        geometry: Some(TriangleGeometry { vertices, arcs, midpoints }),
    };
    for (edge, &count) in entry.counts.iter().enumerate() {
        for _ in 0..count {
            t = attach_hemisphere(&t, edge)?;
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys(entries: &[AtlasEntry]) -> Vec<(Rational, String, bool)> {
        entries.iter().map(|e| (e.n, e.distance_string(), e.complement)).collect()
    }

    #[test]
    fn octahedron_atlas() {
        let e = enumerate_basic(SolidFamily::Octahedron).unwrap();
        let k = keys(&e);
        assert!(k.contains(&(rat(1, 4), "1,1,1".into(), false)));
        assert!(k.contains(&(rat(7, 4), "1,1,1".into(), true)));
        assert!(k.contains(&(rat(3, 4), "1,1,2".into(), false)));
        assert!(k.contains(&(rat(5, 4), "1,1,2".into(), true)));
        assert!(e.iter().any(|x| x.family == AtlasFamily::KleinFour));
    }

    #[test]
    fn entries_realize_with_matching_angles() {
        for family in [SolidFamily::Octahedron, SolidFamily::Cube, SolidFamily::Icosahedron, SolidFamily::Dodecahedron]
        {
            let solid = build_solid(family).unwrap();
            for e in enumerate_basic(family).unwrap().iter().filter(|e| e.representative.is_some()) {
                let t = realize_geometry(e, &solid).unwrap();
                assert_eq!(t.n, e.n);
                let sum: f64 = t.lengths.iter().sum();
                assert!(sum > 0.0 && sum < 6.0 * PI);
                let with = realize_geometry(&e.with_counts([1, 0, 2]), &solid).unwrap();
                assert_eq!(with.n, e.n + 3);
                let expected = e.with_counts([1, 0, 2]).total_angles().unwrap().to_f64();
                for (a, b) in with.angles.to_f64().iter().zip(expected) {
                    assert!((a - b).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn tetrahedral_triangles_are_cubical() {
        let cube: Vec<_> = keys(&enumerate_basic(SolidFamily::Cube).unwrap());
        for e in enumerate_basic(SolidFamily::Tetrahedron).unwrap() {
            if e.family != AtlasFamily::KleinFour {
                assert_eq!(e.family, AtlasFamily::Cubical);
                assert!(cube.contains(&(e.n, e.distance_string(), e.complement)), "{e:?}");
            }
        }
    }

    #[test]
    fn dihedral_steps() {
        let e = enumerate_dihedral(6).unwrap();
        let k: Vec<String> = e.iter().map(AtlasEntry::distance_string).collect();
        assert_eq!(k, ["1,1,4", "1,2,3", "1,3,2"]);
        let solid = build_solid(SolidFamily::NGon(6)).unwrap();
        for x in &e {
            let t = realize_geometry(x, &solid).unwrap();
            assert_eq!(t.angles.exact(), Some([int(1); 3]));
            let steps = x.distances.unwrap().map(|l| l.distance as f64 * PI / 3.0);
            for (len, step) in t.lengths.iter().zip(steps) {
                assert!((len - step).abs() < 1e-9);
            }
        }
        assert_eq!(enumerate_dihedral(3).unwrap().len(), 1);
        assert!(enumerate_dihedral(2).is_err());
    }
}
