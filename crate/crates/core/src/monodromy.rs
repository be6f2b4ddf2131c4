//! Monodromy of a spherical torus: the (s, t) parameters in the dihedral
//! case and the four groups M, PM, M̃, PM̃ generated by reflection lifts.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::atlas::{
    atlas_entries, enumerate_dihedral, realize_geometry, AtlasEntry, AtlasFamily, CornerAngles, SphericalTriangle,
};
use crate::error::{Error, Result};
use crate::rational::{frac, rat, snap, to_f64, Rational};
use crate::solids::{build_solid, SolidFamily};
use crate::sphere::{
    close_group_with_tolerance, lift_gamma, GroupElement, GroupLabel, ProjectiveElement, SpatialRotation,
    UnitaryElement, DEFAULT_CLOSURE_CAP, TAU_GEOM, TAU_GROUP,
};

/// Each hemisphere glued onto edge `i` negates the ordinary lift `γᵢ`.
/// Checked against the dihedral counts by the sweep tests.
pub const HEMISPHERE_NEGATES_LIFT: bool = true;

/// Largest denominator accepted when reading (s, t) off real lengths.
const PARAM_DENOMINATOR: i64 = 10_000;

/// Where the developing map sends the center of the hemisphere.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterImage {
    #[default]
    Zero,
    Infinity,
}

/// Which inequality system the base parameters satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// s < 1/2, t < 1/2, s + t > 1/2
    Direct,
    /// s > 1/2, t > 1/2, s + t < 3/2
    Negated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonodromyParams {
    #[serde(with = "crate::rational::as_string")]
    pub s: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub t: Rational,
    pub region: Region,
    pub lengths: Option<[f64; 3]>,
}

fn region_of(s: Rational, t: Rational) -> Option<Region> {
    let half = rat(1, 2);
    if s < half && t < half && s + t > half {
        Some(Region::Direct)
    } else if s > half && t > half && s + t < rat(3, 2) {
        Some(Region::Negated)
    } else {
        None
    }
}

/// Parameters of the hemisphere with edge lengths `lengths` (radians).
pub fn params_from_lengths(lengths: [f64; 3], center: CenterImage) -> Result<MonodromyParams> {
    let total: f64 = lengths.iter().sum();
    if lengths.iter().any(|&l| l <= 0.0) || (total - 2.0 * PI).abs() > TAU_GEOM.sqrt() {
        return Err(Error::invalid(format!("hemisphere edge lengths must be positive and sum to 2π, got {lengths:?}")));
    }
    let read = |x: f64| {
        snap(x, PARAM_DENOMINATOR, 1e-9)
            .ok_or_else(|| Error::Unsupported(format!("parameter {x} is not rational; the monodromy is infinite")))
    };
    let s = read((lengths[1] + lengths[2]) / (4.0 * PI))?;
    let t = read((lengths[0] + lengths[2]) / (4.0 * PI))?;
    let (s, t) = match center {
        CenterImage::Zero => (s, t),
        CenterImage::Infinity => (frac(-s), frac(-t)),
    };
    let region =
        region_of(s, t).ok_or_else(|| Error::invalid(format!("(s, t) = ({s}, {t}) is outside both regions")))?;
    Ok(MonodromyParams { s, t, region, lengths: Some(lengths) })
}

/// Exact parameters for the hemisphere with arc steps `k` on a polygon of
/// `k1 + k2 + k3` vertices.
pub fn params_from_steps(k: [u64; 3]) -> Result<MonodromyParams> {
    if k.contains(&0) {
        return Err(Error::invalid("arc steps must be positive"));
    }
    let total = (k[0] + k[1] + k[2]) as i64;
    let s = Rational::new((k[1] + k[2]) as i64, 2 * total);
    let t = Rational::new((k[0] + k[2]) as i64, 2 * total);
    let region = region_of(s, t).ok_or_else(|| Error::invalid(format!("steps {k:?} give a degenerate hemisphere")))?;
    let lengths = k.map(|x| 2.0 * PI * x as f64 / total as f64);
    Ok(MonodromyParams { s, t, region, lengths: Some(lengths) })
}

/// Edge lengths of the base hemisphere with parameters `(s, t)` in the direct region.
pub fn lengths_from_params(s: Rational, t: Rational) -> [f64; 3] {
    let (s, t) = (to_f64(s), to_f64(t));
    [2.0 * PI - 4.0 * PI * t, 2.0 * PI - 4.0 * PI * s, 4.0 * PI * (s + t) - 2.0 * PI]
}

/// Each hemisphere on edge 2 or 3 moves `s` by 1/2; on edge 1 or 3 it moves `t`.
pub fn shift_params(p: &MonodromyParams, counts: [u32; 3]) -> MonodromyParams {
    let half = rat(1, 2);
    MonodromyParams {
        s: frac(p.s + half * i64::from(counts[1] + counts[2])),
        t: frac(p.t + half * i64::from(counts[0] + counts[2])),
        region: p.region,
        lengths: None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GroupOrders {
    pub m: usize,
    pub pm: usize,
    pub m_tilde: usize,
    pub pm_tilde: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonodromyProfile {
    pub m: GroupLabel,
    pub pm: GroupLabel,
    pub m_tilde: GroupLabel,
    pub pm_tilde: GroupLabel,
    pub orders: GroupOrders,
    /// Whether -I lies in M̃.
    pub contains_minus_identity: bool,
    pub params: Option<MonodromyParams>,
}

impl MonodromyProfile {
    pub fn labels(&self) -> [GroupLabel; 4] {
        [self.m, self.pm, self.m_tilde, self.pm_tilde]
    }
}

/// Closure settings for the numeric group computations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosureConfig {
    pub cap: usize,
    pub tolerance: f64,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig { cap: DEFAULT_CLOSURE_CAP, tolerance: TAU_GROUP }
    }
}

/// Groups of the torus built from basic triangle `t` with `counts[i]`
/// hemispheres on edge `i`.
pub fn groups_from_triangle(t: &SphericalTriangle, counts: [u32; 3]) -> Result<MonodromyProfile> {
    groups_from_triangle_with(t, counts, ClosureConfig::default())
}

pub fn groups_from_triangle_with(
    t: &SphericalTriangle,
    counts: [u32; 3],
    cfg: ClosureConfig,
) -> Result<MonodromyProfile> {
    let geometry = t.geometry.as_ref().ok_or_else(|| Error::invalid("triangle carries no geometry"))?;
    let q = geometry.midpoints;
    let gamma: Vec<UnitaryElement> = (0..3)
        .map(|i| {
            let g = lift_gamma(&q[i]);
            if HEMISPHERE_NEGATES_LIFT && counts[i] % 2 == 1 {
                g.scale(Complex64::new(-1.0, 0.0))
            } else {
                g
            }
        })
        .collect();
    let m_gens = [gamma[0].compose(&gamma[2]), gamma[1].compose(&gamma[2])];
    let rot: Vec<SpatialRotation> = q.iter().map(SpatialRotation::half_turn).collect();
    let pm_gens = [rot[0].compose(&rot[2]), rot[1].compose(&rot[2])];

    let close =
        |gens: &[UnitaryElement]| close_group_with_tolerance(gens, cfg.cap, cfg.tolerance).map(|g| g.identified());
    let close_rot =
        |gens: &[SpatialRotation]| close_group_with_tolerance(gens, cfg.cap, cfg.tolerance).map(|g| g.identified());
    let m_tilde = close(&gamma)?;
    let m = close(&m_gens)?;
    let pm_tilde = close_rot(&rot)?;
    let pm = close_rot(&pm_gens)?;
    Ok(MonodromyProfile {
        m: m.label(),
        pm: pm.label(),
        m_tilde: m_tilde.label(),
        pm_tilde: pm_tilde.label(),
        orders: GroupOrders { m: m.order(), pm: pm.order(), m_tilde: m_tilde.order(), pm_tilde: pm_tilde.order() },
        contains_minus_identity: m_tilde.contains_minus_identity(),
        params: None,
    })
}

fn diagonal(x: Rational) -> UnitaryElement {
    let z = Complex64::from_polar(1.0, -2.0 * PI * to_f64(x));
    UnitaryElement::from_matrix(Matrix2::new(z, Complex64::zero(), Complex64::zero(), z.conj()))
        .expect("diagonal phases are unitary")
}

fn anti_diagonal() -> UnitaryElement {
    let (o, z) = (Complex64::one(), Complex64::zero());
    UnitaryElement::from_matrix(Matrix2::new(z, o, o, z)).expect("swap is unitary")
}

fn denominator_lcm(values: &[Rational]) -> u64 {
    values.iter().fold(1u64, |acc, v| acc.lcm(&(*v.denom() as u64)))
}

/// Dihedral groups for parameters `(s, t)` with common denominator `order`.
pub fn dihedral_groups_from_params(s: Rational, t: Rational, order: u64) -> Result<MonodromyProfile> {
    let (s, t) = (frac(s), frac(t));
    if order == 0 || !(s * order as i64).is_integer() || !(t * order as i64).is_integer() {
        return Err(Error::invalid(format!("({s}, {t}) do not have denominator dividing {order}")));
    }
    let two = Rational::from_integer(2);
    if (s * two).is_integer() || (t * two).is_integer() || ((s + t) * two).is_integer() {
        return Err(Error::invalid(format!("({s}, {t}) lies on a boundary line; no Lamé equation has it")));
    }
    let m_gens = [diagonal(s), diagonal(t)];
    let mt_gens = [m_gens[0], m_gens[1], anti_diagonal()];
    let cfg = ClosureConfig::default();
    let m = close_group_with_tolerance(&m_gens, cfg.cap, cfg.tolerance)?.identified();
    let m_tilde = close_group_with_tolerance(&mt_gens, cfg.cap, cfg.tolerance)?.identified();
    let proj = |g: &[UnitaryElement]| g.iter().map(ProjectiveElement::new).collect::<Vec<_>>();
    let pm = close_group_with_tolerance(&proj(&m_gens), cfg.cap, cfg.tolerance)?.identified();
    let pm_tilde = close_group_with_tolerance(&proj(&mt_gens), cfg.cap, cfg.tolerance)?.identified();
    Ok(MonodromyProfile {
        m: m.label(),
        pm: pm.label(),
        m_tilde: m_tilde.label(),
        pm_tilde: pm_tilde.label(),
        orders: GroupOrders { m: m.order(), pm: pm.order(), m_tilde: m_tilde.order(), pm_tilde: pm_tilde.order() },
        contains_minus_identity: m_tilde.contains_minus_identity(),
        params: Some(MonodromyParams { s, t, region: region_of(s, t).unwrap_or(Region::Direct), lengths: None }),
    })
}

/// Profile of the dihedral torus with arc steps `k` and `counts` hemispheres.
pub fn dihedral_profile(k: [u64; 3], counts: [u32; 3]) -> Result<MonodromyProfile> {
    let base = params_from_steps(k)?;
    let p = shift_params(&base, counts);
    let order = denominator_lcm(&[p.s, p.t]);
    let mut profile = dihedral_groups_from_params(p.s, p.t, order)?;
    if let Some(params) = &mut profile.params {
        params.region = base.region;
        params.lengths = base.lengths;
    }
    Ok(profile)
}

/// Tori with integral `n` tallied by the order of M and of PM, over all
/// coprime steps with `k1 + k2 + k3 <= 2·max_order` up to rotation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DihedralSweep {
    pub ordinary: BTreeMap<u64, u64>,
    pub projective: BTreeMap<u64, u64>,
}

pub fn dihedral_sweep(n: u64, max_order: u64) -> Result<DihedralSweep> {
    if n == 0 || max_order == 0 {
        return Err(Error::invalid("n and the maximal order must be positive"));
    }
    let mut out = DihedralSweep::default();
    let spread = (n - 1) as u32;
    for total in 3..=2 * max_order {
        let mut seen = BTreeSet::new();
        for k1 in 1..total {
            for k2 in 1..total - k1 {
                let k = [k1, k2, total - k1 - k2];
                if k1.gcd(&k2).gcd(&k[2]) != 1 {
                    continue;
                }
                for m1 in 0..=spread {
                    for m2 in 0..=spread - m1 {
                        let m = [m1, m2, spread - m1 - m2];
                        let key = (0..3)
                            .map(|r| ([k[r], k[(r + 1) % 3], k[(r + 2) % 3]], [m[r], m[(r + 1) % 3], m[(r + 2) % 3]]))
                            .min()
                            .expect("three rotations");
                        if !seen.insert(key) {
                            continue;
                        }
                        let profile = dihedral_profile(k, m)?;
                        let ordinary = (profile.orders.m) as u64;
                        let projective = (profile.orders.pm) as u64;
                        if ordinary <= max_order {
                            *out.ordinary.entry(ordinary).or_default() += 1;
                        }
                        if projective <= max_order {
                            *out.projective.entry(projective).or_default() += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Labels expected for each family row.
pub fn expected_labels(family: AtlasFamily) -> Option<[GroupLabel; 4]> {
    use crate::atlas::AtlasFamily as F;
    use GroupLabel::*;
    Some(match family {
        F::Octahedral => [G12Plus, A4, G12, S4],
        F::Cubical => [G13Plus, S4, G13, S4],
        F::Icosahedral | F::Dodecahedral => [G22Plus, A5, G22, A5],
        F::KleinFour => [Q8, K4, Pauli, K4],
        F::Dihedral => return None,
    })
}

/// One row of the monodromy group table. Dihedral rows carry the patterns
/// in terms of `k = k1 + k2 + k3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table3Row {
    pub family: AtlasFamily,
    pub m: String,
    pub pm: String,
    pub m_tilde: String,
    pub pm_tilde: String,
}

impl Table3Row {
    fn from_labels(family: AtlasFamily, l: [GroupLabel; 4]) -> Self {
        Table3Row {
            family,
            m: l[0].to_string(),
            pm: l[1].to_string(),
            m_tilde: l[2].to_string(),
            pm_tilde: l[3].to_string(),
        }
    }
}

/// Solid whose special points realise a Platonic atlas family.
pub fn solid_for(family: AtlasFamily) -> Option<SolidFamily> {
    Some(match family {
        AtlasFamily::Octahedral => SolidFamily::Octahedron,
        AtlasFamily::Cubical => SolidFamily::Cube,
        AtlasFamily::Icosahedral => SolidFamily::Icosahedron,
        AtlasFamily::Dodecahedral => SolidFamily::Dodecahedron,
        _ => return None,
    })
}

/// Profile of an enumerated Platonic entry with its own hemisphere counts.
pub fn profile_for_entry(entry: &AtlasEntry) -> Result<MonodromyProfile> {
    let family = solid_for(entry.family)
        .ok_or_else(|| Error::invalid(format!("{} entries have no Platonic realization", entry.family)))?;
    let t = realize_geometry(entry, &build_solid(family)?)?;
    groups_from_triangle(&t, entry.counts)
}

/// Largest polygon used when deriving the dihedral row.
const DIHEDRAL_PROBE: u64 = 8;

/// Computes the group table: every Platonic entry, the orthogonal-midpoint
/// triangle and dihedral hemispheres up to a small polygon must agree
/// within their family.
pub fn table3_rows() -> Result<Vec<Table3Row>> {
    let mut rows = Vec::new();
    for family in [AtlasFamily::Octahedral, AtlasFamily::Cubical, AtlasFamily::Icosahedral, AtlasFamily::Dodecahedral] {
        let mut labels = BTreeSet::new();
        for entry in atlas_entries()?.iter().filter(|e| e.family == family) {
            labels.insert(profile_for_entry(entry)?.labels());
        }
        rows.push(single_row(family, labels)?);
    }

    let mut consistent = true;
    for order in 3..=DIHEDRAL_PROBE {
        let solid = build_solid(SolidFamily::NGon(order as usize))?;
        for entry in enumerate_dihedral(order as usize)? {
            let t = realize_geometry(&entry, &solid)?;
            for counts in [[0, 0, 0], [1, 0, 0], [1, 1, 0]] {
                let [m, pm, mt, pmt] = groups_from_triangle(&t, counts)?.labels();
                let k = order as usize;
                consistent &= matches!(m, GroupLabel::Cyclic(x) if x == k || x == 2 * k)
                    && pm == GroupLabel::Cyclic(k)
                    && matches!(mt, GroupLabel::Dihedral(x) if x == k || x == 2 * k)
                    && pmt == GroupLabel::Dihedral(k);
            }
        }
    }
    rows.push(if consistent {
        Table3Row {
            family: AtlasFamily::Dihedral,
            m: "C_k or C_2k".into(),
            pm: "C_k".into(),
            m_tilde: "D_k or D_2k".into(),
            pm_tilde: "D_k".into(),
        }
    } else {
        Table3Row::from_labels(AtlasFamily::Dihedral, [GroupLabel::Unknown; 4])
    });

    let k4 = groups_from_triangle(&klein_four_triangle(), [0, 0, 0])?;
    rows.push(Table3Row::from_labels(AtlasFamily::KleinFour, k4.labels()));
    Ok(rows)
}

fn single_row(family: AtlasFamily, labels: BTreeSet<[GroupLabel; 4]>) -> Result<Table3Row> {
    let mut it = labels.into_iter();
    match (it.next(), it.next()) {
        (Some(l), None) => Ok(Table3Row::from_labels(family, l)),
        (Some(_), Some(_)) => Ok(Table3Row::from_labels(family, [GroupLabel::Unknown; 4])),
        (None, _) => Err(Error::invalid(format!("no {family} entries"))),
    }
}

/// A triangle whose three midpoints are mutually orthogonal, as occurs for
/// every Klein-four torus.
pub fn klein_four_triangle() -> SphericalTriangle {
    use crate::atlas::{ArcKind, TriangleGeometry};
    use crate::sphere::UnitVector;
    let e = |x: f64, y: f64, z: f64| UnitVector::new(x, y, z).expect("unit axis");
    let r = 1.0 / 3f64.sqrt();
    SphericalTriangle {
        angles: CornerAngles::Exact([rat(2, 3); 3]),
        lengths: [(-1.0f64 / 3.0).acos(); 3],
        n: rat(1, 2),
        geometry: Some(TriangleGeometry {
            vertices: [e(r, r, r), e(r, -r, -r), e(-r, r, -r)],
            arcs: [ArcKind::Minor; 3],
            midpoints: [e(0.0, 0.0, -1.0), e(1.0, 0.0, 0.0), e(0.0, 1.0, 0.0)],
        }),
    }
}
