//! Points on the unit sphere, axial reflections, their lifts to SU(2) and U(2),
//! and closure/identification of finite matrix groups.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{Matrix2, Matrix3, Quaternion, UnitQuaternion, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TAU_GEOM: f64 = 1e-9;
pub const TAU_GROUP: f64 = 1e-6;
pub const DEFAULT_CLOSURE_CAP: usize = 1024;

/// A point of S².
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct UnitVector(Vector3<f64>);

impl UnitVector {
    /// Checked constructor: the input must already have unit norm within `TAU_GEOM`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Vector3::new(x, y, z);
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > TAU_GEOM {
            return Err(Error::invalid(format!("({x}, {y}, {z}) has norm {norm}, not 1")));
        }
        Ok(UnitVector(v))
    }

    /// Projects a nonzero vector onto the sphere.
    pub fn normalize(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm <= TAU_GEOM {
            return Err(Error::invalid("cannot normalize a zero vector"));
        }
        Ok(UnitVector(v / norm))
    }

    #[cfg(test)]
    pub(crate) fn from_normalized(v: Vector3<f64>) -> Self {
        debug_assert!((v.norm() - 1.0).abs() < 1e-6);
        UnitVector(v)
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }
    pub fn y(&self) -> f64 {
        self.0.y
    }
    pub fn z(&self) -> f64 {
        self.0.z
    }

    pub fn vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn antipode(&self) -> UnitVector {
        UnitVector(-self.0)
    }

    pub fn approx_eq(&self, other: &UnitVector, tol: f64) -> bool {
        (self.0 - other.0).amax() < tol
    }

    /// Great-circle distance in radians.
    pub fn angle_to(&self, other: &UnitVector) -> f64 {
        self.0.cross(&other.0).norm().atan2(self.0.dot(&other.0))
    }

    /// The rotation by π about this axis, applied to `v`.
    pub fn reflect(&self, v: &UnitVector) -> UnitVector {
        UnitVector(2.0 * self.0.dot(&v.0) * self.0 - v.0)
    }
}

impl TryFrom<[f64; 3]> for UnitVector {
    type Error = Error;
    fn try_from(c: [f64; 3]) -> Result<Self> {
        UnitVector::new(c[0], c[1], c[2])
    }
}

impl From<UnitVector> for [f64; 3] {
    fn from(u: UnitVector) -> Self {
        [u.0.x, u.0.y, u.0.z]
    }
}

/// An element of SU(2), stored as a unit quaternion `w + xi + yj + zk`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationElement(Quaternion<f64>);

impl RotationElement {
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let q = Quaternion::new(w, x, y, z);
        if (q.norm() - 1.0).abs() > TAU_GEOM {
            return Err(Error::invalid(format!("quaternion norm {} is not 1", q.norm())));
        }
        Ok(RotationElement(q))
    }

    /// Components in `(w, x, y, z)` order.
    pub fn components(&self) -> [f64; 4] {
        [self.0.w, self.0.i, self.0.j, self.0.k]
    }

    pub fn to_matrix(&self) -> Matrix3<f64> {
        UnitQuaternion::new_unchecked(self.0).to_rotation_matrix().into_inner()
    }

    /// The same element written as a 2×2 special unitary matrix.
    pub fn to_unitary(&self) -> UnitaryElement {
        let q = self.0;
        let c = Complex64::new;
        UnitaryElement(Matrix2::new(c(q.w, q.k), c(-q.j, q.i), c(q.j, q.i), c(q.w, -q.k)))
    }
}

/// The rotation by π about `p`, lifted to SU(2) along the path of increasing rotation angle.
pub fn axial_reflection(p: &UnitVector) -> RotationElement {
    RotationElement(Quaternion::new(0.0, p.x(), p.y(), p.z()))
}

/// `i` times the SU(2) lift of the half turn about `q`: an involution of determinant -1.
pub fn lift_gamma(q: &UnitVector) -> UnitaryElement {
    axial_reflection(q).to_unitary().scale(Complex64::i())
}

/// A 2×2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitaryElement(Matrix2<Complex64>);

impl UnitaryElement {
    pub fn from_matrix(m: Matrix2<Complex64>) -> Result<Self> {
        let u = UnitaryElement(m);
        let defect = (m * m.adjoint() - Matrix2::identity()).camax();
        if defect > TAU_GROUP || (m.determinant().norm() - 1.0).abs() > TAU_GROUP {
            return Err(Error::invalid("matrix is not unitary"));
        }
        Ok(u)
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.0
    }

    pub fn scale(&self, c: Complex64) -> Self {
        UnitaryElement(self.0 * c)
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.determinant()
    }

    /// Image in SO(3) under U(2) → PU(2) ≅ SO(3).
    pub fn project(&self) -> Matrix3<f64> {
        let root = self.determinant().sqrt();
        let m = self.0 / root;
        let q = Quaternion::new(m[(0, 0)].re, m[(0, 1)].im, -m[(0, 1)].re, m[(0, 0)].im);
        UnitQuaternion::new_normalize(q).to_rotation_matrix().into_inner()
    }
}

/// A group element usable by [`close_group`].
pub trait GroupElement: Clone + Send + Sync {
    fn identity() -> Self;
    fn compose(&self, other: &Self) -> Self;
    /// Max-entrywise distance.
    fn distance(&self, other: &Self) -> f64;
    /// True when the element is the scalar -I of its ambient linear group.
    fn is_minus_identity(&self, _tol: f64) -> bool {
        false
    }
    fn determinant(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
}

impl GroupElement for UnitaryElement {
    fn identity() -> Self {
        UnitaryElement(Matrix2::identity())
    }
    fn compose(&self, other: &Self) -> Self {
        UnitaryElement(self.0 * other.0)
    }
    fn distance(&self, other: &Self) -> f64 {
        (self.0 - other.0).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
    fn is_minus_identity(&self, tol: f64) -> bool {
        self.distance(&UnitaryElement(-Matrix2::identity())) < tol
    }
    fn determinant(&self) -> Complex64 {
        self.0.determinant()
    }
}

impl GroupElement for RotationElement {
    fn identity() -> Self {
        RotationElement(Quaternion::identity())
    }
    fn compose(&self, other: &Self) -> Self {
        RotationElement(self.0 * other.0)
    }
    fn distance(&self, other: &Self) -> f64 {
        (self.0.coords - other.0.coords).amax()
    }
    fn is_minus_identity(&self, tol: f64) -> bool {
        (self.0.coords + Quaternion::<f64>::identity().coords).amax() < tol
    }
}

/// A unitary matrix modulo scalars, kept with its first nonzero entry positive real.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectiveElement(Matrix2<Complex64>);

impl ProjectiveElement {
    pub fn new(u: &UnitaryElement) -> Self {
        let m = u.0 / u.determinant().sqrt();
        let pivot = m.iter().find(|c| c.norm() > TAU_GROUP).copied().unwrap_or(Complex64::new(1.0, 0.0));
        ProjectiveElement(m * (pivot.conj() / pivot.norm()))
    }
}

impl GroupElement for ProjectiveElement {
    fn identity() -> Self {
        ProjectiveElement(Matrix2::identity())
    }
    fn compose(&self, other: &Self) -> Self {
        ProjectiveElement::new(&UnitaryElement(self.0 * other.0))
    }
    fn distance(&self, other: &Self) -> f64 {
        (self.0 - other.0).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// An element of SO(3).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatialRotation(pub Matrix3<f64>);

impl SpatialRotation {
    pub fn half_turn(axis: &UnitVector) -> Self {
        SpatialRotation(axial_reflection(axis).to_matrix())
    }
}

impl GroupElement for SpatialRotation {
    fn identity() -> Self {
        SpatialRotation(Matrix3::identity())
    }
    fn compose(&self, other: &Self) -> Self {
        SpatialRotation(self.0 * other.0)
    }
    fn distance(&self, other: &Self) -> f64 {
        (self.0 - other.0).amax()
    }
}

/// R(l₃)R(l₂)R(l₁) for half turns about three axes.
pub fn triple_half_turn(axes: &[UnitVector; 3]) -> SpatialRotation {
    let r = axes.each_ref().map(SpatialRotation::half_turn);
    r[2].compose(&r[1]).compose(&r[0])
}

/// Max-entry distance of [`triple_half_turn`] from the identity. Zero
/// exactly when the axes are pairwise orthogonal.
pub fn triple_defect(axes: &[UnitVector; 3]) -> f64 {
    triple_half_turn(axes).distance(&SpatialRotation::identity())
}

/// The right-handed orthonormal frame obtained from `u` and `v` by Gram–Schmidt.
pub fn orthonormal_frame(u: &UnitVector, v: &UnitVector) -> Result<[UnitVector; 3]> {
    let w = v.vector() - u.vector() * u.dot(v);
    let w = UnitVector::normalize(w)?;
    let x = UnitVector::normalize(u.vector().cross(w.vector()))?;
    Ok([*u, w, x])
}

/// Labels for the finite groups that occur as monodromy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupLabel {
    Cyclic(usize),
    Dihedral(usize),
    K4,
    A4,
    S4,
    A5,
    Q8,
    Pauli,
    G12,
    G12Plus,
    G13,
    G13Plus,
    G22,
    G22Plus,
    Unknown,
}

impl GroupLabel {
    /// Order implied by the label, when it determines one.
    pub fn order(&self) -> Option<usize> {
        Some(match self {
            GroupLabel::Cyclic(k) => *k,
            GroupLabel::Dihedral(k) => 2 * k,
            GroupLabel::K4 => 4,
            GroupLabel::A4 => 12,
            GroupLabel::S4 => 24,
            GroupLabel::A5 => 60,
            GroupLabel::Q8 => 8,
            GroupLabel::Pauli => 16,
            GroupLabel::G12 => 48,
            GroupLabel::G12Plus => 24,
            GroupLabel::G13 => 96,
            GroupLabel::G13Plus => 48,
            GroupLabel::G22 => 240,
            GroupLabel::G22Plus => 120,
            GroupLabel::Unknown => return None,
        })
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Cyclic(k) => write!(f, "C_{k}"),
            GroupLabel::Dihedral(k) => write!(f, "D_{k}"),
            GroupLabel::K4 => f.write_str("K4"),
            GroupLabel::A4 => f.write_str("A4"),
            GroupLabel::S4 => f.write_str("S4"),
            GroupLabel::A5 => f.write_str("A5"),
            GroupLabel::Q8 => f.write_str("Q8"),
            GroupLabel::Pauli => f.write_str("Pauli"),
            GroupLabel::G12 => f.write_str("G12"),
            GroupLabel::G12Plus => f.write_str("G12+"),
            GroupLabel::G13 => f.write_str("G13"),
            GroupLabel::G13Plus => f.write_str("G13+"),
            GroupLabel::G22 => f.write_str("G22"),
            GroupLabel::G22Plus => f.write_str("G22+"),
            GroupLabel::Unknown => f.write_str("Unknown"),
        }
    }
}

impl std::str::FromStr for GroupLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parse_index =
            |rest: &str| rest.parse::<usize>().map_err(|_| Error::invalid(format!("bad group label {s:?}")));
        Ok(match s {
            "K4" => GroupLabel::K4,
            "A4" => GroupLabel::A4,
            "S4" => GroupLabel::S4,
            "A5" => GroupLabel::A5,
            "Q8" => GroupLabel::Q8,
            "Pauli" => GroupLabel::Pauli,
            "G12" => GroupLabel::G12,
            "G12+" => GroupLabel::G12Plus,
            "G13" => GroupLabel::G13,
            "G13+" => GroupLabel::G13Plus,
            "G22" => GroupLabel::G22,
            "G22+" => GroupLabel::G22Plus,
            "Unknown" => GroupLabel::Unknown,
            _ => match s.split_once('_') {
                Some(("C", k)) => GroupLabel::Cyclic(parse_index(k)?),
                Some(("D", k)) => GroupLabel::Dihedral(parse_index(k)?),
                _ => return Err(Error::invalid(format!("bad group label {s:?}"))),
            },
        })
    }
}

impl Serialize for GroupLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite group given by its full element list.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup<E> {
    elements: Vec<E>,
    generators: Vec<E>,
    tolerance: f64,
    label: GroupLabel,
}

impl<E: GroupElement> FiniteMatrixGroup<E> {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn elements(&self) -> &[E] {
        &self.elements
    }
    pub fn generators(&self) -> &[E] {
        &self.generators
    }
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
    pub fn label(&self) -> GroupLabel {
        self.label
    }

    pub fn contains(&self, e: &E) -> bool {
        self.elements.iter().any(|x| x.distance(e) < self.tolerance)
    }

    pub fn contains_minus_identity(&self) -> bool {
        self.elements.iter().any(|x| x.is_minus_identity(self.tolerance))
    }

    /// Identifies the group and stores the label.
    pub fn identified(mut self) -> Self {
        self.label = identify_group(&self);
        self
    }

    pub fn element_order(&self, e: &E) -> usize {
        let id = E::identity();
        let mut power = e.clone();
        for k in 1..=self.elements.len() {
            if power.distance(&id) < self.tolerance {
                return k;
            }
            power = power.compose(e);
        }
        0
    }

    /// Number of elements of each order.
    pub fn order_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for e in &self.elements {
            *hist.entry(self.element_order(e)).or_insert(0) += 1;
        }
        hist
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, a)| {
            self.generators[i + 1..].iter().all(|b| a.compose(b).distance(&b.compose(a)) < self.tolerance)
        })
    }
}

/// Closes `generators` under multiplication, merging elements closer than `tolerance`.
pub fn close_group_with_tolerance<E: GroupElement>(
    generators: &[E],
    cap: usize,
    tolerance: f64,
) -> Result<FiniteMatrixGroup<E>> {
    if generators.is_empty() {
        return Err(Error::invalid("close_group needs at least one generator"));
    }
    if cap == 0 {
        return Err(Error::invalid("closure cap must be positive"));
    }
    let mut elements = vec![E::identity()];
    let mut frontier = 0;
    while frontier < elements.len() {
        let current = elements[frontier].clone();
        frontier += 1;
        for g in generators {
            let product = current.compose(g);
            if !elements.iter().any(|x| x.distance(&product) < tolerance) {
                if elements.len() == cap {
                    return Err(Error::ClosureOverflow { cap });
                }
                elements.push(product);
            }
        }
    }
    Ok(FiniteMatrixGroup { elements, generators: generators.to_vec(), tolerance, label: GroupLabel::Unknown })
}

pub fn close_group<E: GroupElement>(generators: &[E], cap: usize) -> Result<FiniteMatrixGroup<E>> {
    close_group_with_tolerance(generators, cap, TAU_GROUP)
}

const KNOWN_HISTOGRAMS: &[(GroupLabel, &[(usize, usize)])] = &[
    (GroupLabel::Q8, &[(1, 1), (2, 1), (4, 6)]),
    (GroupLabel::Pauli, &[(1, 1), (2, 7), (4, 8)]),
    (GroupLabel::A4, &[(1, 1), (2, 3), (3, 8)]),
    (GroupLabel::S4, &[(1, 1), (2, 9), (3, 8), (4, 6)]),
    (GroupLabel::A5, &[(1, 1), (2, 15), (3, 20), (5, 24)]),
    (GroupLabel::G12Plus, &[(1, 1), (2, 1), (3, 8), (4, 6), (6, 8)]),
    (GroupLabel::G13Plus, &[(1, 1), (2, 1), (3, 8), (4, 18), (6, 8), (8, 12)]),
    (GroupLabel::G12, &[(1, 1), (2, 13), (3, 8), (4, 6), (6, 8), (8, 12)]),
    (GroupLabel::G13, &[(1, 1), (2, 19), (3, 8), (4, 20), (6, 8), (8, 24), (12, 16)]),
    (GroupLabel::G22Plus, &[(1, 1), (2, 1), (3, 20), (4, 30), (5, 24), (6, 20), (10, 24)]),
    (GroupLabel::G22, &[(1, 1), (2, 31), (3, 20), (4, 32), (5, 24), (6, 20), (10, 24), (12, 40), (20, 48)]),
];

/// Names a closed group from its order, commutativity and element-order statistics.
///
/// The determinant-one subgroups (`G12+`, `G13+`, `G22+`) contain -I and only
/// unimodular elements; the reflection groups contain elements of determinant -1.
pub fn identify_group<E: GroupElement>(g: &FiniteMatrixGroup<E>) -> GroupLabel {
    let order = g.order();
    let hist = g.order_histogram();
    if hist.contains_key(&0) {
        return GroupLabel::Unknown;
    }
    if hist.contains_key(&order) {
        return GroupLabel::Cyclic(order);
    }
    let abelian = g.is_abelian();
    if abelian {
        return if order == 4 { GroupLabel::K4 } else { GroupLabel::Unknown };
    }
    for (label, expected) in KNOWN_HISTOGRAMS {
        if hist.len() == expected.len() && expected.iter().all(|(o, c)| hist.get(o) == Some(c)) {
            return *label;
        }
    }
    if order.is_multiple_of(2) && order >= 6 {
        let k = order / 2;
        let involutions = hist.get(&2).copied().unwrap_or(0);
        if hist.contains_key(&k) && involutions == k + usize::from(k.is_multiple_of(2)) {
            return GroupLabel::Dihedral(k);
        }
    }
    GroupLabel::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(i: usize) -> UnitVector {
        let mut v = Vector3::zeros();
        v[i] = 1.0;
        UnitVector::from_normalized(v)
    }

    fn unit(v: [f64; 3]) -> UnitVector {
        UnitVector::normalize(Vector3::from(v)).unwrap()
    }

    prop_compose! {
        fn any_unit()(v in prop::array::uniform3(-1.0f64..1.0)
            .prop_filter("nonzero", |v| Vector3::from(*v).norm() > 1e-3)) -> UnitVector {
            unit(v)
        }
    }

    #[test]
    fn rejects_non_unit_input() {
        assert!(matches!(UnitVector::new(1.0, 1.0, 0.0), Err(Error::InvalidInput(_))));
        assert!(UnitVector::new(0.0, 0.0, 1.0).is_ok());
    }

    #[test]
    fn reflection_about_z_is_pure_k() {
        let r = axial_reflection(&e(2));
        assert_eq!(r.components(), [0.0, 0.0, 0.0, 1.0]);
        let m = r.to_matrix();
        let expected = Matrix3::from_diagonal(&Vector3::new(-1.0, -1.0, 1.0));
        assert!((m - expected).amax() < 1e-12);
    }

    #[test]
    fn reflection_squares_to_identity_rotation() {
        let r = axial_reflection(&e(0));
        assert!((r.compose(&r).to_matrix() - Matrix3::identity()).amax() < 1e-12);
        assert!(r.compose(&r).is_minus_identity(1e-12));
    }

    #[test]
    fn reflection_about_diagonal_axis() {
        let axis = unit([1.0, 1.0, 0.0]);
        let m = axial_reflection(&axis).to_matrix();
        assert!((m * axis.vector() - axis.vector()).amax() < 1e-12);
        assert!((m * Vector3::z() + Vector3::z()).amax() < 1e-12);
        // Rodrigues by hand: the half turn about (1,1,0)/√2 swaps x and y.
        let by_hand = Matrix3::new(0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0);
        assert!((m - by_hand).amax() < 1e-12);
    }

    #[test]
    fn gamma_at_north_pole_is_diagonal() {
        let g = lift_gamma(&e(2));
        let expected = Matrix2::new(
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        );
        assert!((g.matrix() - expected).iter().all(|c| c.norm() < 1e-12));
    }

    #[test]
    fn trivial_generator_gives_trivial_group() {
        let g = close_group(&[UnitaryElement::identity()], 8).unwrap().identified();
        assert_eq!(g.order(), 1);
        assert_eq!(g.label(), GroupLabel::Cyclic(1));
    }

    #[test]
    fn orthogonal_axes() {
        let quats: Vec<_> = (0..3).map(|i| axial_reflection(&e(i))).collect();
        let q8 = close_group(&quats, 64).unwrap().identified();
        assert_eq!((q8.order(), q8.label()), (8, GroupLabel::Q8));

        let gammas: Vec<_> = (0..3).map(|i| lift_gamma(&e(i))).collect();
        let pauli = close_group(&gammas, 64).unwrap().identified();
        assert_eq!((pauli.order(), pauli.label()), (16, GroupLabel::Pauli));

        let rots: Vec<_> = (0..3).map(|i| SpatialRotation::half_turn(&e(i))).collect();
        let k4 = close_group(&rots, 64).unwrap().identified();
        assert_eq!(k4.label(), GroupLabel::K4);
    }

    #[test]
    fn closure_overflow_is_reported() {
        let generic = lift_gamma(&unit([1.0, 0.3, 0.1]));
        let other = lift_gamma(&unit([0.2, 1.0, -0.4]));
        assert_eq!(close_group(&[generic, other], 50).unwrap_err(), Error::ClosureOverflow { cap: 50 });
        assert!(close_group::<UnitaryElement>(&[], 8).is_err());
        assert!(close_group(&[generic], 0).is_err());
    }

    #[test]
    fn projective_elements_ignore_phase() {
        let g = lift_gamma(&unit([0.3, -0.2, 0.9]));
        let a = ProjectiveElement::new(&g);
        let b = ProjectiveElement::new(&g.scale(Complex64::from_polar(1.0, 0.7)));
        assert!(a.distance(&b) < 1e-12);
    }

    #[test]
    fn dihedral_and_cyclic_labels() {
        let c = |a: f64| Complex64::from_polar(1.0, a);
        let eighth = std::f64::consts::PI / 4.0;
        let rot = UnitaryElement(Matrix2::new(c(eighth), 0.0.into(), 0.0.into(), c(-eighth)));
        let flip = UnitaryElement(Matrix2::new(0.0.into(), 1.0.into(), 1.0.into(), 0.0.into()));
        let turn = 2.0 * std::f64::consts::PI / 5.0;
        let r5 = UnitaryElement(Matrix2::new(c(turn), 0.0.into(), 0.0.into(), c(-turn)));
        assert_eq!(close_group(&[r5], 64).unwrap().identified().label(), GroupLabel::Cyclic(5));
        assert_eq!(close_group(&[r5, flip], 64).unwrap().identified().label(), GroupLabel::Dihedral(5));
        let g = close_group(&[rot, flip], 64).unwrap().identified();
        assert!(matches!(g.label(), GroupLabel::Dihedral(_)));
        assert_eq!(g.label().order(), Some(g.order()));
    }

    #[test]
    fn labels_round_trip_through_strings() {
        for label in [GroupLabel::Cyclic(6), GroupLabel::Dihedral(3), GroupLabel::G22Plus, GroupLabel::Pauli] {
            assert_eq!(label.to_string().parse::<GroupLabel>().unwrap(), label);
        }
    }

    proptest! {
        #[test]
        fn reflection_fixes_axis_and_negates_complement(p in any_unit(), v in any_unit()) {
            let m = axial_reflection(&p).to_matrix();
            prop_assert!((m * p.vector() - p.vector()).amax() < 1e-9);
            let perp = v.vector() - p.vector() * p.dot(&v);
            prop_assert!((m * perp + perp).amax() < 1e-9);
            prop_assert!((m * m - Matrix3::identity()).amax() < 1e-9);
        }

        #[test]
        fn gamma_is_an_involution_of_determinant_minus_one(q in any_unit()) {
            let g = lift_gamma(&q);
            prop_assert!(g.compose(&g).distance(&UnitaryElement::identity()) < TAU_GROUP);
            prop_assert!((g.determinant() + 1.0).norm() < TAU_GROUP);
        }

        #[test]
        fn orthogonal_half_turns_compose_to_identity(u in any_unit(), v in any_unit()) {
            prop_assume!(u.dot(&v).abs() < 0.99);
            let frame = orthonormal_frame(&u, &v).unwrap();
            prop_assert!(triple_defect(&frame) < 1e-8);
            let skew = [frame[0], frame[1], UnitVector::normalize(frame[2].vector() + frame[0].vector() * 0.2).unwrap()];
            prop_assert!(triple_defect(&skew) > 1e-3);
        }

        #[test]
        fn gamma_lift_is_compatible_with_rotations(p in any_unit(), q in any_unit()) {
            let product = lift_gamma(&p).compose(&lift_gamma(&q)).project();
            let expected = axial_reflection(&p).to_matrix() * axial_reflection(&q).to_matrix();
            prop_assert!((product - expected).amax() < 1e-9);
        }
    }
}
