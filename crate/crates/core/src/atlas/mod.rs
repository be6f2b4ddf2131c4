//! Spherical triangles: balance, existence, hemisphere attachment and the
//! decomposition of a balanced triangle into a basic triangle plus hemispheres.

mod enumerate;
mod table;

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::sphere::UnitVector;

pub use enumerate::{enumerate_basic, enumerate_dihedral, realize_geometry, Representative};
pub use table::{atlas_entries, table1_rows, Table1Row};

pub type Angles = [Rational; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceClass {
    StrictlyBalanced,
    Semibalanced,
    Unbalanced,
}

pub fn balance_class(theta: &Angles) -> BalanceClass {
    let [a, b, c] = *theta;
    let slack = [b + c - a, a + c - b, a + b - c];
    if slack.iter().any(Rational::is_negative) {
        BalanceClass::Unbalanced
    } else if slack.iter().any(Rational::is_zero) {
        BalanceClass::Semibalanced
    } else {
        BalanceClass::StrictlyBalanced
    }
}

pub fn is_balanced(theta: &Angles) -> bool {
    balance_class(theta) != BalanceClass::Unbalanced
}

/// Area parameter: the angle sum is `2n + 1` (units of π).
pub fn area_parameter(theta: &Angles) -> Rational {
    (theta[0] + theta[1] + theta[2] - Rational::one()) / 2
}

pub fn complement_angles(theta: &Angles) -> Angles {
    theta.map(|t| int(2) - t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Existence {
    ExistsUnique,
    ExistsFamily,
    NotExists,
}

/// How the lattice condition for triangles without integral angles is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExistenceReading {
    /// Each angle against its own integer, minimised over all even-sum triples.
    #[default]
    PerAngle,
    /// The first angle against all three integers, for some even-sum triple.
    FirstAngleOnly,
}

pub fn exists_triangle(theta: &Angles) -> Existence {
    exists_triangle_with(theta, ExistenceReading::PerAngle)
}

pub fn exists_triangle_with(theta: &Angles, reading: ExistenceReading) -> Existence {
    if theta.iter().any(|t| !t.is_positive()) {
        return Existence::NotExists;
    }
    let integral: Vec<usize> = (0..3).filter(|&i| theta[i].is_integer()).collect();
    match integral.len() {
        0 => {
            let holds = match reading {
                ExistenceReading::PerAngle => even_lattice_distance(theta) > Rational::one(),
                ExistenceReading::FirstAngleOnly => first_angle_condition(theta),
            };
            if holds {
                Existence::ExistsUnique
            } else {
                Existence::NotExists
            }
        }
        1 => {
            let k = integral[0];
            let (a, b) = (theta[(k + 1) % 3], theta[(k + 2) % 3]);
            let odd_positive = |x: Rational| x.is_integer() && x.is_positive() && x.to_integer() % 2 == 1;
            let t = theta[k];
            if (odd_positive(t + a - b) && odd_positive(t + b - a)) || odd_positive(t - a - b) {
                Existence::ExistsFamily
            } else {
                Existence::NotExists
            }
        }
        2 => Existence::NotExists,
        _ => {
            let sum = (theta[0] + theta[1] + theta[2]).to_integer();
            if sum % 2 == 1 {
                Existence::ExistsFamily
            } else {
                Existence::NotExists
            }
        }
    }
}

/// L¹ distance from `theta` to the nearest integer point with even coordinate sum.
pub fn even_lattice_distance(theta: &Angles) -> Rational {
    let ranges = theta.map(|t| (t.floor().to_integer() - 1)..=(t.ceil().to_integer() + 1));
    let mut best: Option<Rational> = None;
    for a in ranges[0].clone() {
        for b in ranges[1].clone() {
            for c in ranges[2].clone() {
                if (a + b + c).rem_euclid(2) != 0 {
                    continue;
                }
                let d = (theta[0] - a).abs() + (theta[1] - b).abs() + (theta[2] - c).abs();
                if best.is_none_or(|x| d < x) {
                    best = Some(d);
                }
            }
        }
    }
    best.expect("search box is nonempty")
}

fn first_angle_condition(theta: &Angles) -> bool {
    let t = theta[0];
    let bounds = theta.map(|x| x.ceil().to_integer() + 1);
    (0..=bounds[0]).any(|a| {
        (0..=bounds[1]).any(|b| {
            (0..=bounds[2])
                .any(|c| (a + b + c) % 2 == 0 && (t - a).abs() + (t - b).abs() + (t - c).abs() > Rational::one())
        })
    })
}

/// Corner angles in units of π. Geometric triangles on a configuration can
/// have irrational corners even when their area is rational.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CornerAngles {
    Exact(Angles),
    Approx([f64; 3]),
}

impl CornerAngles {
    pub fn exact(&self) -> Option<Angles> {
        match self {
            CornerAngles::Exact(a) => Some(*a),
            CornerAngles::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> [f64; 3] {
        match self {
            CornerAngles::Exact(a) => a.map(crate::rational::to_f64),
            CornerAngles::Approx(a) => *a,
        }
    }

    /// Exact on rationals; within `TAU_GEOM` otherwise.
    pub fn balance(&self) -> BalanceClass {
        match self {
            CornerAngles::Exact(a) => balance_class(a),
            CornerAngles::Approx([a, b, c]) => {
                let slack = [b + c - a, a + c - b, a + b - c];
                let tol = crate::sphere::TAU_GEOM;
                if slack.iter().any(|&x| x < -tol) {
                    BalanceClass::Unbalanced
                } else if slack.iter().any(|&x| x.abs() <= tol) {
                    BalanceClass::Semibalanced
                } else {
                    BalanceClass::StrictlyBalanced
                }
            }
        }
    }

    pub fn complement(&self) -> Self {
        match self {
            CornerAngles::Exact(a) => CornerAngles::Exact(complement_angles(a)),
            CornerAngles::Approx(a) => CornerAngles::Approx(a.map(|t| 2.0 - t)),
        }
    }

    /// Angles after attaching `counts[i]` hemispheres on edge `i`.
    pub fn with_hemispheres(&self, counts: [u32; 3]) -> Self {
        let add = |i: usize| counts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &c)| c as i64).sum::<i64>();
        match self {
            CornerAngles::Exact(a) => CornerAngles::Exact([0, 1, 2].map(|i| a[i] + add(i))),
            CornerAngles::Approx(a) => CornerAngles::Approx([0, 1, 2].map(|i| a[i] + add(i) as f64)),
        }
    }

    /// Reorders as `[self[r], self[r + 1], self[r + 2]]`.
    pub fn rotated(&self, r: usize) -> Self {
        match self {
            CornerAngles::Exact(a) => CornerAngles::Exact(rotate(a, r)),
            CornerAngles::Approx(a) => CornerAngles::Approx(rotate(a, r)),
        }
    }
}

impl Serialize for CornerAngles {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CornerAngles::Exact(a) => s.collect_seq(a.iter().map(ToString::to_string)),
            CornerAngles::Approx(a) => a.serialize(s),
        }
    }
}

impl From<Angles> for CornerAngles {
    fn from(a: Angles) -> Self {
        CornerAngles::Exact(a)
    }
}

/// How an edge runs between its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcKind {
    Minor,
    Major,
    /// Half of a great circle between antipodal endpoints.
    Half,
}

impl ArcKind {
    fn complement(self) -> Self {
        match self {
            ArcKind::Minor => ArcKind::Major,
            ArcKind::Major => ArcKind::Minor,
            ArcKind::Half => ArcKind::Half,
        }
    }
}

/// Explicit embedding of a triangle: vertices clockwise around the region,
/// edge `i` opposite vertex `i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TriangleGeometry {
    pub vertices: [UnitVector; 3],
    pub arcs: [ArcKind; 3],
    pub midpoints: [UnitVector; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphericalTriangle {
    pub angles: CornerAngles,
    /// Edge lengths in radians, `lengths[i]` opposite `angles[i]`.
    pub lengths: [f64; 3],
    #[serde(with = "crate::rational::as_string")]
    pub n: Rational,
    pub geometry: Option<TriangleGeometry>,
}

impl SphericalTriangle {
    pub fn balance(&self) -> BalanceClass {
        self.angles.balance()
    }

    /// Area from the angle excess, in radians.
    pub fn area(&self) -> f64 {
        let sum: f64 = self.angles.to_f64().iter().sum();
        (sum - 1.0) * PI
    }
}

/// Glues a hemisphere onto edge `edge`: the edge becomes its complement on
/// the same great circle and both of its endpoint angles grow by π.
pub fn attach_hemisphere(t: &SphericalTriangle, edge: usize) -> Result<SphericalTriangle> {
    if edge > 2 {
        return Err(Error::invalid(format!("edge index {edge} out of range")));
    }
    if t.lengths[edge] >= 2.0 * PI {
        return Err(Error::invalid(format!("edge {edge} has length {} >= 2π", t.lengths[edge])));
    }
    let mut out = t.clone();
    let mut counts = [0; 3];
    counts[edge] = 1;
    out.angles = t.angles.with_hemispheres(counts);
    out.lengths[edge] = 2.0 * PI - t.lengths[edge];
    out.n += Rational::one();
    if let Some(g) = &mut out.geometry {
        g.arcs[edge] = g.arcs[edge].complement();
        g.midpoints[edge] = g.midpoints[edge].antipode();
    }
    Ok(out)
}

/// True for balanced triangles with `n <= 1`, and for complements of
/// strictly balanced triangles with `n < 1`.
pub fn is_basic(theta: &Angles) -> bool {
    if theta.iter().any(|t| !t.is_positive()) || !is_balanced(theta) || exists_triangle(theta) == Existence::NotExists {
        return false;
    }
    let n = area_parameter(theta);
    if n <= Rational::one() {
        return true;
    }
    let c = complement_angles(theta);
    n < int(2)
        && c.iter().all(Rational::is_positive)
        && balance_class(&c) == BalanceClass::StrictlyBalanced
        && area_parameter(&c) < Rational::one()
}

/// A balanced triangle written as a basic triangle plus hemisphere counts
/// (`counts[i]` hemispheres on the edge opposite angle `i`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    #[serde(serialize_with = "serialize_angles")]
    pub basic: Angles,
    pub counts: [u32; 3],
}

fn serialize_angles<S: serde::Serializer>(a: &Angles, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(a.iter().map(ToString::to_string))
}

impl Decomposition {
    /// Angles after re-attaching the hemispheres.
    pub fn recompose(&self) -> Angles {
        let [a, b, c] = self.counts.map(|x| int(x as i64));
        let [p, q, r] = self.basic;
        [p + b + c, q + a + c, r + a + b]
    }
}

fn counts_from(values: [i64; 3]) -> Result<[u32; 3]> {
    let mut out = [0u32; 3];
    for (o, v) in out.iter_mut().zip(values) {
        *o = u32::try_from(v).map_err(|_| Error::invalid("decomposition produced a negative hemisphere count"))?;
    }
    Ok(out)
}

/// Splits `theta` into its unique basic triangle and hemisphere counts.
pub fn decompose_balanced(theta: &Angles) -> Result<Decomposition> {
    if theta.iter().any(|t| !t.is_positive()) {
        return Err(Error::invalid("angles must be positive"));
    }
    if !is_balanced(theta) {
        return Err(Error::invalid("triangle is not balanced"));
    }
    if exists_triangle(theta) == Existence::NotExists {
        return Err(Error::invalid("no spherical triangle has these angles"));
    }
    let integral: Vec<usize> = (0..3).filter(|&i| theta[i].is_integer()).collect();
    match integral.len() {
        0 => decompose_non_integral(theta),
        1 => decompose_one_integral(theta, integral[0]),
        _ => {
            // All integral with odd sum: a hemisphere (1, 1, 1) plus hemispheres.
            let t = theta.map(|x| x.to_integer() - 1);
            let total = (t[0] + t[1] + t[2]) / 2;
            let counts = counts_from([total - t[0], total - t[1], total - t[2]])?;
            Ok(Decomposition { basic: [int(1); 3], counts })
        }
    }
}

fn decompose_non_integral(theta: &Angles) -> Result<Decomposition> {
    let floors = theta.map(|t| t.floor().to_integer());
    let parity = (floors[0] + floors[1] + floors[2]).rem_euclid(2);
    // theta_i = (sum of the other two counts) + phi_i
    let solve = |f: [i64; 3]| {
        let total = (f[0] + f[1] + f[2]) / 2;
        [total - f[0], total - f[1], total - f[2]]
    };
    if parity == 0 {
        // 0 < phi_i < 1
        let phi = [0, 1, 2].map(|i| theta[i] - floors[i]);
        let [a, b, c] = solve(floors);
        if is_balanced(&phi) {
            return Ok(Decomposition { basic: phi, counts: counts_from([a, b, c])? });
        }
        let big = (0..3).max_by(|&i, &j| phi[i].cmp(&phi[j]).then(Ordering::Greater)).expect("three angles");
        let mut basic = phi;
        let mut counts = [a, b, c];
        for j in (0..3).filter(|&j| j != big) {
            basic[j] += Rational::one();
        }
        counts[big] -= 1;
        Ok(Decomposition { basic, counts: counts_from(counts)? })
    } else {
        // 1 < phi_i < 2
        let reduced = floors.map(|f| f - 1);
        let phi = [0, 1, 2].map(|i| theta[i] - reduced[i]);
        let counts = solve(reduced);
        for i in 0..3 {
            let mut candidate = phi;
            for j in (0..3).filter(|&j| j != i) {
                candidate[j] -= Rational::one();
            }
            if is_balanced(&candidate) {
                let mut c = counts;
                c[i] += 1;
                return Ok(Decomposition { basic: candidate, counts: counts_from(c)? });
            }
        }
        Ok(Decomposition { basic: phi, counts: counts_from(counts)? })
    }
}

fn decompose_one_integral(theta: &Angles, k: usize) -> Result<Decomposition> {
    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
    let r = theta[i] - theta[i].floor();
    let half = Rational::new(1, 2);
    let phi = if r >= half { r } else { r + Rational::one() };
    // theta_k = 1 + (counts on the edges at vertex k), theta_i = phi + ..., theta_j = phi + ...
    let tk = theta[k].to_integer();
    let ai = theta[i] - phi;
    let aj = theta[j] - phi;
    if !ai.is_integer() || !aj.is_integer() {
        return Err(Error::invalid("non-integral angles must share their fractional part"));
    }
    let (ai, aj) = (ai.to_integer(), aj.to_integer());
    // ai = count_k + count_j, aj = count_k + count_i, tk - 1 = count_i + count_j
    let total = ai + aj + tk - 1;
    if total % 2 != 0 {
        return Err(Error::invalid("inconsistent parity for a triangle with one integral angle"));
    }
    let total = total / 2;
    let mut counts = [0i64; 3];
    counts[k] = total - (tk - 1);
    counts[i] = total - ai;
    counts[j] = total - aj;
    let mut basic = [phi; 3];
    basic[k] = Rational::one();
    Ok(Decomposition { basic, counts: counts_from(counts)? })
}

/// Symbolic family of a basic triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtlasFamily {
    Octahedral,
    Cubical,
    Icosahedral,
    Dodecahedral,
    Dihedral,
    KleinFour,
}

impl fmt::Display for AtlasFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AtlasFamily::Octahedral => "octahedral",
            AtlasFamily::Cubical => "cubical",
            AtlasFamily::Icosahedral => "icosahedral",
            AtlasFamily::Dodecahedral => "dodecahedral",
            AtlasFamily::Dihedral => "dihedral",
            AtlasFamily::KleinFour => "klein_four",
        })
    }
}

impl std::str::FromStr for AtlasFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "octahedral" | "octahedron" => AtlasFamily::Octahedral,
            "cubical" | "cube" => AtlasFamily::Cubical,
            "icosahedral" | "icosahedron" => AtlasFamily::Icosahedral,
            "dodecahedral" | "dodecahedron" => AtlasFamily::Dodecahedral,
            "dihedral" => AtlasFamily::Dihedral,
            "klein_four" | "kleinfour" => AtlasFamily::KleinFour,
            _ => return Err(Error::invalid(format!("unknown atlas family {s:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Note {
    Regular,
    Semibalanced,
    None,
}

/// Graph distance of an edge's endpoints, primed when the edge is a major arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeLabel {
    pub distance: usize,
    pub major: bool,
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.distance, if self.major { "'" } else { "" })
    }
}

impl std::str::FromStr for EdgeLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (digits, major) = match s.strip_suffix('\'') {
            Some(d) => (d, true),
            None => (s, false),
        };
        let distance = digits.parse().map_err(|_| Error::invalid(format!("bad edge label {s:?}")))?;
        Ok(EdgeLabel { distance, major })
    }
}

impl Serialize for EdgeLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EdgeLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Formats a distance triple as `1,1,2'`.
pub fn format_distances(d: &[EdgeLabel; 3]) -> String {
    d.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn parse_distances(s: &str) -> Result<[EdgeLabel; 3]> {
    let parts: Vec<EdgeLabel> = s.split(',').map(str::parse).collect::<Result<_>>()?;
    parts.try_into().map_err(|_| Error::invalid(format!("expected three edge labels in {s:?}")))
}

/// One row of the basic-triangle atlas, optionally with hemispheres attached.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtlasEntry {
    pub family: AtlasFamily,
    #[serde(with = "crate::rational::as_string")]
    pub n: Rational,
    /// Edge labels in clockwise order, `distances[i]` opposite angle `i`;
    /// for dihedral entries the arc lengths in polygon steps.
    pub distances: Option<[EdgeLabel; 3]>,
    pub note: Note,
    pub counts: [u32; 3],
    pub angles: Option<CornerAngles>,
    /// True for the complement of a strictly balanced basic triangle.
    pub complement: bool,
    #[serde(skip)]
    pub representative: Option<Representative>,
}

impl AtlasEntry {
    /// Area parameter after the recorded hemispheres.
    pub fn total_n(&self) -> Rational {
        self.n + int(self.counts.iter().map(|&c| c as i64).sum())
    }

    pub fn with_counts(&self, counts: [u32; 3]) -> AtlasEntry {
        AtlasEntry { counts, ..self.clone() }
    }

    /// Angles after the recorded hemispheres.
    pub fn total_angles(&self) -> Option<CornerAngles> {
        self.angles.map(|a| a.with_hemispheres(self.counts))
    }

    pub fn distance_string(&self) -> String {
        self.distances.as_ref().map(format_distances).unwrap_or_else(|| "-".into())
    }

    pub fn sort_key(&self) -> (AtlasFamily, Rational, Option<[EdgeLabel; 3]>, bool) {
        (self.family, self.n, self.distances, self.complement)
    }
}

/// Orders labels as the minimal cyclic rotation, returning the rotation offset.
pub(crate) fn canonical_rotation(labels: &[EdgeLabel; 3]) -> usize {
    (0..3).min_by_key(|&r| [labels[r], labels[(r + 1) % 3], labels[(r + 2) % 3]]).expect("three rotations")
}

pub(crate) fn rotate<T: Copy>(a: &[T; 3], r: usize) -> [T; 3] {
    [a[r % 3], a[(r + 1) % 3], a[(r + 2) % 3]]
}
