//! Exact counts of spherical tori: family formulas with a brute-force
//! oracle, and the integral-n formulas with their lattice-point oracle.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::atlas::{
    atlas_entries, enumerate_dihedral, table1_rows, AtlasEntry, AtlasFamily, BalanceClass, Note, Table1Row,
};
use crate::error::{Error, Result};
use crate::rational::{int, is_half_integer, Rational};

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn positive(n: u64, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::invalid(format!("{what} must be at least 1")))
    } else {
        Ok(())
    }
}

/// Jordan's totient J₂: pairs `(k1, k2)` mod N with `gcd(k1, k2, N) = 1`.
pub fn phi_big(n: u64) -> Result<u64> {
    positive(n, "N")?;
    Ok(prime_factors(n).iter().fold(n * n, |acc, &(p, _)| acc / (p * p) * (p * p - 1)))
}

pub fn euler_phi(n: u64) -> Result<u64> {
    positive(n, "N")?;
    Ok(prime_factors(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1)))
}

pub fn mobius(n: u64) -> Result<i64> {
    positive(n, "N")?;
    let f = prime_factors(n);
    Ok(if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    })
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// 1 when `N = 3` and `n ≡ 1 (mod 3)`.
pub fn epsilon(n: u64, order: u64) -> i64 {
    i64::from(order == 3 && n % 3 == 1)
}

/// `a_{2k} = a_{2k+1} = k(k+1)/2`.
pub fn a_coeff(n: u64) -> i64 {
    let k = (n / 2) as i64;
    k * (k + 1) / 2
}

/// `b_{2k} = b_{2k-1} = k²`.
pub fn b_coeff(n: u64) -> i64 {
    let k = n.div_ceil(2) as i64;
    k * k
}

fn require_integral(r: Rational, what: &str) -> Result<i64> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(Error::Degenerate(format!("{what} evaluated to the non-integer {r}")))
    }
}

/// Number of Lamé equations with integral `n` whose projective monodromy is
/// dihedral of order `2N`.
pub fn dahmen_projective(n: u64, order: u64) -> Result<i64> {
    positive(n, "n")?;
    positive(order, "N")?;
    if order == 1 {
        return Ok(0);
    }
    let n_ = n as i64;
    let phi_diff = phi_big(order)? as i64 - 3 * euler_phi(order)? as i64;
    let value = Rational::new(n_ * (n_ + 1) * phi_diff, 12) + Rational::new(2 * epsilon(n, order), 3);
    require_integral(value, "projective count")
}

/// Number of Lamé equations with integral `n` whose ordinary monodromy has order `N`.
pub fn dahmen_ordinary(n: u64, order: u64) -> Result<i64> {
    positive(n, "n")?;
    positive(order, "N")?;
    if order <= 2 {
        return Ok(0);
    }
    let n_ = n as i64;
    let phi_half = if order.is_multiple_of(2) { euler_phi(order / 2)? as i64 } else { 0 };
    let inner = Rational::new(n_ * (n_ + 1) * phi_big(order)? as i64, 24)
        - int(a_coeff(n) * euler_phi(order)? as i64 + b_coeff(n) * phi_half);
    let value = inner / 2 + Rational::new(2 * epsilon(n, order), 3);
    require_integral(value, "ordinary count")
}

/// Weight of the lattice point `(k1, k2) / N` in the unit square; `None` on
/// a boundary line.
fn cell_weight(n: u64, k1: u64, k2: u64, order: u64, projective: bool) -> Option<i64> {
    let n_ = n as i64;
    if projective {
        return Some(n_ * (n_ + 1) / 2);
    }
    // work in units of 1/(2N) so every boundary is an integer comparison
    let (s, t, half) = (2 * k1, 2 * k2, order);
    let sum = s + t;
    if s == half || t == half || sum == half || sum == 2 * half || sum == 3 * half {
        return None;
    }
    let l = if n % 2 == 1 { (n_ + 1) / 2 } else { n_ / 2 };
    let lo = l * (l - 1) / 2;
    let hi = l * (l + 1) / 2;
    let special = match (s < half, t < half) {
        (true, true) => sum > half,
        (false, false) => sum < 3 * half,
        _ => false,
    };
    let odd = n % 2 == 1;
    Some(if special == odd { hi } else { lo })
}

/// Weighted count of lattice points `(k1, k2)/N` with `0 < k1 < N - k2 < N`,
/// optionally restricted to `gcd(k1, k2, N) = 1`.
pub fn lattice_weight(n: u64, order: u64, projective: bool, primitive_only: bool) -> Result<i64> {
    positive(n, "n")?;
    positive(order, "N")?;
    let mut total = 0;
    for k1 in 1..order {
        for k2 in 1..order - k1 {
            if primitive_only && k1.gcd(&k2).gcd(&order) != 1 {
                continue;
            }
            total += cell_weight(n, k1, k2, order, projective).unwrap_or(0);
        }
    }
    Ok(total)
}

/// Direct lattice count: primitive points weighted per cell, plus the
/// correction for the torus fixed by the cyclic relabelling, divided by 3.
pub fn lattice_oracle(n: u64, order: u64, projective: bool) -> Result<i64> {
    let w = lattice_weight(n, order, projective, true)?;
    let value = Rational::new(w + 2 * epsilon(n, order), 3);
    require_integral(value, "lattice count")
}

/// `Σ_{d|N} (3·count(n, d) − 2ε(n, d))` using the closed formulas.
pub fn divisor_sum(n: u64, order: u64, projective: bool) -> Result<i64> {
    positive(order, "N")?;
    divisors(order)
        .into_iter()
        .map(|d| {
            let c = if projective { dahmen_projective(n, d)? } else { dahmen_ordinary(n, d)? };
            Ok(3 * c - 2 * epsilon(n, d))
        })
        .sum()
}

/// Closed-form count attached to a family row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CountFormula {
    /// ⌈m(m+1)/6⌉
    CeilSixth,
    /// m(m+1)/2
    Triangular,
    /// m(m+1)/2 − ⌊m/2⌋
    TriangularMinusHalfFloor,
    /// ⌈m(m+1)/6⌉ for steps (1,1,1), m(m+1)/2 otherwise.
    Dihedral,
    /// Positive-dimensional moduli; no finite count.
    Moduli,
}

impl CountFormula {
    pub fn for_note(note: Note) -> Self {
        match note {
            Note::Regular => CountFormula::CeilSixth,
            Note::Semibalanced => CountFormula::TriangularMinusHalfFloor,
            Note::None => CountFormula::Triangular,
        }
    }

    pub fn evaluate(self, m: u64) -> Result<u64> {
        positive(m, "m")?;
        let tri = m * (m + 1) / 2;
        match self {
            CountFormula::CeilSixth => Ok((m * (m + 1)).div_ceil(6)),
            CountFormula::Triangular => Ok(tri),
            CountFormula::TriangularMinusHalfFloor => Ok(tri - m / 2),
            CountFormula::Dihedral => {
                Err(Error::invalid("the dihedral count depends on the steps (k1,k2,k3); use count_dihedral"))
            }
            CountFormula::Moduli => {
                Err(Error::Unsupported("Klein-four tori form a complex 1-dimensional family".into()))
            }
        }
    }
}

impl fmt::Display for CountFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountFormula::CeilSixth => "ceil(m(m+1)/6)",
            CountFormula::Triangular => "m(m+1)/2",
            CountFormula::TriangularMinusHalfFloor => "m(m+1)/2-floor(m/2)",
            CountFormula::Dihedral => "ceil(m(m+1)/6) if k1=k2=k3=1, m(m+1)/2 otherwise",
            CountFormula::Moduli => "complex 1-dimensional",
        })
    }
}

impl FromStr for CountFormula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [
            CountFormula::CeilSixth,
            CountFormula::Triangular,
            CountFormula::TriangularMinusHalfFloor,
            CountFormula::Dihedral,
            CountFormula::Moduli,
        ]
        .into_iter()
        .find(|f| f.to_string() == s.trim())
        .ok_or_else(|| Error::invalid(format!("unknown count formula {s:?}")))
    }
}

impl Serialize for CountFormula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CountFormula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// The n-column of a family row: `m − c`, `m ± c` or `m` (c = 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Offset {
    pub c: Rational,
    pub both_signs: bool,
}

impl Offset {
    /// The `m` for which `n` is on this row, with the sign taken.
    pub fn solve(&self, n: Rational) -> Vec<(u64, i8)> {
        let mut out = Vec::new();
        let mut push = |m: Rational, sign: i8| {
            if m.is_integer() && m >= Rational::one() {
                out.push((m.to_integer() as u64, sign));
            }
        };
        push(n + self.c, -1);
        if self.both_signs && !self.c.is_zero() {
            push(n - self.c, 1);
        }
        out
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_zero() {
            f.write_str("m")
        } else {
            write!(f, "m{}{}", if self.both_signs { "±" } else { "-" }, self.c)
        }
    }
}

impl FromStr for Offset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "m" {
            return Ok(Offset { c: Rational::zero(), both_signs: false });
        }
        let bad = || Error::invalid(format!("bad offset {s:?}"));
        let rest = t.strip_prefix('m').ok_or_else(bad)?;
        let (both_signs, c) = if let Some(c) = rest.strip_prefix('±').or_else(|| rest.strip_prefix("+-")) {
            (true, c)
        } else if let Some(c) = rest.strip_prefix('-') {
            (false, c)
        } else {
            return Err(bad());
        };
        let c = crate::rational::parse_rational(c).ok_or_else(bad)?;
        Ok(Offset { c, both_signs })
    }
}

impl Serialize for Offset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Offset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Table2Row {
    pub family: AtlasFamily,
    pub n: Offset,
    pub distances: String,
    pub count: CountFormula,
}

impl Table2Row {
    fn from_table1(row: &Table1Row) -> Self {
        let (c, count) = match row.family {
            AtlasFamily::Dihedral => (Rational::zero(), CountFormula::Dihedral),
            AtlasFamily::KleinFour => (Rational::new(1, 2), CountFormula::Moduli),
            _ => (Rational::one() - row.n[0], CountFormula::for_note(row.note)),
        };
        let both_signs = row.n.len() == 2;
        Table2Row { family: row.family, n: Offset { c, both_signs }, distances: row.distances.clone(), count }
    }
}

/// Family rows derived from the atlas: a basic triangle at `n₀ < 1` lives at
/// `m − (1 − n₀)`, its complement at `m + (1 − n₀)`.
pub fn table2_rows() -> Result<Vec<Table2Row>> {
    Ok(table1_rows()?.iter().map(Table2Row::from_table1).collect())
}

pub fn count_family(row: &Table2Row, m: u64) -> Result<u64> {
    row.count.evaluate(m)
}

/// Count for a dihedral hemisphere with arc steps `k` and `n = m`.
pub fn count_dihedral(k: [u64; 3], m: u64) -> Result<u64> {
    if k.contains(&0) || k[0].gcd(&k[1]).gcd(&k[2]) != 1 {
        return Err(Error::invalid(format!("dihedral steps {k:?} must be positive and coprime")));
    }
    if k == [1, 1, 1] {
        CountFormula::CeilSixth.evaluate(m)
    } else {
        CountFormula::Triangular.evaluate(m)
    }
}

/// Classes of hemisphere attachments `(m1, m2, m3)`, `Σ = m − 1`, counted by
/// direct enumeration.
pub fn brute_force_family(entry: &AtlasEntry, m: u64) -> Result<u64> {
    positive(m, "m")?;
    let angles = entry.angles.ok_or_else(|| Error::Unsupported(format!("{} entries have no angles", entry.family)))?;
    let regular = entry.note == Note::Regular;
    let k = (m - 1) as u32;
    let mut classes = BTreeSet::new();
    for a in 0..=k {
        for b in 0..=k - a {
            let counts = [a, b, k - a - b];
            let mut orbit = vec![counts];
            if regular {
                orbit.push([counts[1], counts[2], counts[0]]);
                orbit.push([counts[2], counts[0], counts[1]]);
            }
            let result = angles.with_hemispheres(counts);
            if result.balance() == BalanceClass::Semibalanced {
                // the mirror image fixes the vertex with the largest angle
                let v = result.to_f64();
                let big = (0..3).max_by(|&i, &j| v[i].total_cmp(&v[j])).expect("three angles");
                let (p, q) = ((big + 1) % 3, (big + 2) % 3);
                let mirrored: Vec<[u32; 3]> = orbit
                    .iter()
                    .map(|c| {
                        let mut c = *c;
                        c.swap(p, q);
                        c
                    })
                    .collect();
                orbit.extend(mirrored);
            }
            classes.insert(*orbit.iter().min().expect("orbit is nonempty"));
        }
    }
    Ok(classes.len() as u64)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupScope {
    #[default]
    ProjectiveAlgebraic,
    OrdinaryAlgebraic,
    TorusFamily,
}

impl FromStr for GroupScope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().replace('-', "_").as_str() {
            "projective_algebraic" | "projective" => Ok(GroupScope::ProjectiveAlgebraic),
            "ordinary_algebraic" | "ordinary" => Ok(GroupScope::OrdinaryAlgebraic),
            "torus_family" | "torus" => Ok(GroupScope::TorusFamily),
            _ => Err(Error::invalid(format!("unknown group scope {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    #[default]
    Formula,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountQuery {
    pub n: Rational,
    pub scope: GroupScope,
    pub family: Option<AtlasFamily>,
    /// Dihedral order, needed for integral `n`.
    pub order: Option<u64>,
}

impl CountQuery {
    pub fn new(n: Rational) -> Self {
        CountQuery { n, scope: GroupScope::default(), family: None, order: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryCount {
    pub entry: AtlasEntry,
    pub m: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountReport {
    #[serde(with = "crate::rational::as_string")]
    pub n: Rational,
    pub total: u64,
    pub breakdown: Vec<EntryCount>,
    pub method: CountMethod,
}

fn check_n(n: Rational) -> Result<()> {
    if !n.is_positive() {
        return Err(Error::invalid(format!("n must be positive, got {n}")));
    }
    if is_half_integer(n) {
        return Err(Error::Unsupported(format!("n = {n} is a Klein-four value with a positive-dimensional family")));
    }
    Ok(())
}

/// Sums the family counts over every basic triangle whose row contains `n`.
pub fn total_for_n(n: Rational) -> Result<CountReport> {
    count(&CountQuery::new(n), CountMethod::Formula)
}

pub fn count(query: &CountQuery, method: CountMethod) -> Result<CountReport> {
    let n = query.n;
    check_n(n)?;
    if n.is_integer() {
        return count_integral(query, method);
    }
    let mut breakdown = Vec::new();
    for entry in atlas_entries()? {
        if query.family.is_some_and(|f| f != entry.family) {
            continue;
        }
        let m = n - entry.n + Rational::one();
        if !m.is_integer() || m < Rational::one() {
            continue;
        }
        let m = m.to_integer() as u64;
        let c = match method {
            CountMethod::Formula => CountFormula::for_note(entry.note).evaluate(m)?,
            CountMethod::BruteForce => brute_force_family(&entry, m)?,
        };
        breakdown.push(EntryCount { entry, m, count: c });
    }
    Ok(CountReport { n, total: breakdown.iter().map(|e| e.count).sum(), breakdown, method })
}

fn count_integral(query: &CountQuery, method: CountMethod) -> Result<CountReport> {
    let n = query.n.to_integer() as u64;
    let order = query.order.ok_or_else(|| Error::invalid("integral n needs the dihedral order N"))?;
    if query.family.is_some_and(|f| f != AtlasFamily::Dihedral) {
        return Err(Error::invalid("integral n only occurs in the dihedral family"));
    }
    let (total, breakdown) = match query.scope {
        GroupScope::ProjectiveAlgebraic | GroupScope::OrdinaryAlgebraic => {
            let projective = query.scope == GroupScope::ProjectiveAlgebraic;
            let v = match (method, projective) {
                (CountMethod::Formula, true) => dahmen_projective(n, order)?,
                (CountMethod::Formula, false) => dahmen_ordinary(n, order)?,
                (CountMethod::BruteForce, p) => lattice_oracle(n, order, p)?,
            };
            (v as u64, Vec::new())
        }
        GroupScope::TorusFamily => {
            let mut breakdown = Vec::new();
            for entry in enumerate_dihedral(order as usize)? {
                let k = entry.distances.expect("dihedral entries carry steps").map(|l| l.distance as u64);
                let c = match method {
                    CountMethod::Formula => count_dihedral(k, n)?,
                    CountMethod::BruteForce => brute_force_family(&entry, n)?,
                };
                breakdown.push(EntryCount { entry, m: n, count: c });
            }
            (breakdown.iter().map(|e| e.count).sum(), breakdown)
        }
    };
    Ok(CountReport { n: query.n, total, breakdown, method })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn arithmetic_functions() {
        assert_eq!((phi_big(1).unwrap(), euler_phi(1).unwrap(), mobius(1).unwrap()), (1, 1, 1));
        assert_eq!(phi_big(2).unwrap(), 3);
        assert_eq!(phi_big(6).unwrap(), 24);
        assert_eq!(euler_phi(12).unwrap(), 4);
        assert_eq!([mobius(6), mobius(12), mobius(7)].map(Result::unwrap), [1, 0, -1]);
        assert!(phi_big(0).is_err() && euler_phi(0).is_err() && mobius(0).is_err());
    }

    fn phi_big_direct(n: u64) -> u64 {
        let mut c = 0;
        for a in 0..n {
            for b in 0..n {
                if a.gcd(&b).gcd(&n) == 1 {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn phi_big_multiplicative_and_direct() {
        for a in 1..=30u64 {
            assert_eq!(phi_big(a).unwrap(), phi_big_direct(a));
            for b in 1..=30u64 {
                if a.gcd(&b) == 1 {
                    assert_eq!(phi_big(a * b).unwrap(), phi_big(a).unwrap() * phi_big(b).unwrap());
                }
            }
        }
    }

    #[test]
    fn mobius_inverts_divisor_sums() {
        for n in 1..=60u64 {
            let s: i64 = divisors(n).iter().map(|&d| mobius(d).unwrap()).sum();
            assert_eq!(s, i64::from(n == 1));
            let phi: i64 = divisors(n).iter().map(|&d| mobius(d).unwrap() * (n / d) as i64).sum();
            assert_eq!(phi, euler_phi(n).unwrap() as i64);
        }
    }

    #[test]
    fn coefficient_patterns() {
        assert_eq!((1..=5).map(a_coeff).collect::<Vec<_>>(), [0, 1, 1, 3, 3]);
        assert_eq!((1..=5).map(b_coeff).collect::<Vec<_>>(), [1, 1, 4, 4, 9]);
    }

    #[test]
    fn projective_examples() {
        assert_eq!(dahmen_projective(1, 3).unwrap(), 1);
        assert_eq!(dahmen_projective(2, 3).unwrap(), 1);
        for n in 1..5 {
            assert_eq!(dahmen_projective(n, 1).unwrap(), 0);
        }
        assert_eq!(lattice_oracle(1, 2, true).unwrap(), 0);
    }

    #[test]
    fn formulas_match_lattice_oracle() {
        for n in 1..=6 {
            for order in 1..=12 {
                assert_eq!(
                    dahmen_projective(n, order).unwrap(),
                    lattice_oracle(n, order, true).unwrap(),
                    "{n} {order}"
                );
                assert_eq!(dahmen_ordinary(n, order).unwrap(), lattice_oracle(n, order, false).unwrap(), "{n} {order}");
                assert!(dahmen_projective(n, order).unwrap() >= 0 && dahmen_ordinary(n, order).unwrap() >= 0);
            }
        }
    }

    #[test]
    fn projective_divisor_sum_counts_one_triangle() {
        // every lattice point under the anti-diagonal, weighted n(n+1)/2
        for n in 1..=6u64 {
            for order in 1..=12u64 {
                let want = (n * (n + 1) * (order * order + 2 - 3 * order)) as i64 / 4;
                assert_eq!(divisor_sum(n, order, true).unwrap(), want);
                assert_eq!(divisor_sum(n, order, true).unwrap(), lattice_weight(n, order, true, false).unwrap());
            }
        }
    }

    #[test]
    fn ordinary_divisor_sum_closed_forms() {
        for n in 1..=6u64 {
            let (a, b) = (a_coeff(n), b_coeff(n));
            let t = (n * (n + 1)) as i64;
            for order in 1..=12u64 {
                let lhs = divisor_sum(n, order, false).unwrap();
                assert_eq!(lhs, lattice_weight(n, order, false, false).unwrap());
                let big_n = order as i64;
                if order % 2 == 1 {
                    let l = (big_n + 1) / 2;
                    assert_eq!(2 * lhs, a * 3 * (l - 1) * (l - 2) + (b - a) * l * (l - 1));
                    assert_eq!(4 * lhs, t * l * (l - 1) - 12 * a * (l - 1));
                    assert_eq!(16 * lhs, t * (big_n * big_n - 1) - 24 * a * (big_n - 1));
                } else {
                    let l = big_n / 2;
                    assert_eq!(2 * lhs, a * 3 * (l - 1) * (l - 2) + (b - a) * (l - 1) * (l - 2));
                    assert_eq!(4 * lhs, t * l * l - (2 * a + b) * 2 * (3 * l - 2));
                    assert_eq!(16 * lhs, t * big_n * big_n - (2 * a + b) * 4 * (3 * big_n - 4));
                }
            }
        }
    }

    #[test]
    fn family_formula_examples() {
        let rows = table2_rows().unwrap();
        let row =
            |fam: AtlasFamily, d: &str| rows.iter().find(|r| r.family == fam && r.distances == d).unwrap().clone();
        assert_eq!(count_family(&row(AtlasFamily::Icosahedral, "1,2,2"), 1).unwrap(), 1);
        assert_eq!(count_family(&row(AtlasFamily::Octahedral, "1,1,1"), 2).unwrap(), 1);
        assert_eq!(count_family(&row(AtlasFamily::Cubical, "1,1,2"), 3).unwrap(), 5);
        assert!(matches!(count_family(&row(AtlasFamily::KleinFour, "-"), 1), Err(Error::Unsupported(_))));
        assert!(count_family(&row(AtlasFamily::Dihedral, "k1,k2,k3"), 1).is_err());
    }

    #[test]
    fn brute_force_examples() {
        let entries = atlas_entries().unwrap();
        let find = |fam: AtlasFamily, d: &str, n: Rational| {
            entries.iter().find(|e| e.family == fam && e.distance_string() == d && e.n == n).unwrap()
        };
        let regular = find(AtlasFamily::Octahedral, "1,1,1", rat(1, 4));
        assert_eq!(brute_force_family(regular, 1).unwrap(), 1);
        assert_eq!(brute_force_family(regular, 3).unwrap(), 2);
        let semi = find(AtlasFamily::Cubical, "1,1,2", rat(1, 6));
        assert_eq!(brute_force_family(semi, 2).unwrap(), 2);
    }

    #[test]
    fn family_formulas_match_brute_force() {
        for entry in atlas_entries().unwrap() {
            for m in 1..=6 {
                assert_eq!(
                    CountFormula::for_note(entry.note).evaluate(m).unwrap(),
                    brute_force_family(&entry, m).unwrap(),
                    "{} {} {} m={m}",
                    entry.family,
                    entry.n,
                    entry.distance_string()
                );
            }
        }
        for order in 3..=9 {
            for entry in enumerate_dihedral(order).unwrap() {
                let k = entry.distances.unwrap().map(|l| l.distance as u64);
                for m in 1..=6 {
                    assert_eq!(count_dihedral(k, m).unwrap(), brute_force_family(&entry, m).unwrap());
                }
            }
        }
    }

    #[test]
    fn totals_for_n() {
        let r = total_for_n(rat(13, 10)).unwrap();
        assert_eq!(r.total, 6);
        assert_eq!(r.breakdown.len(), 4);
        assert_eq!(total_for_n(rat(3, 10)).unwrap().total, 1);
        assert_eq!(total_for_n(rat(1, 4)).unwrap().total, 1);
        assert!(matches!(total_for_n(rat(3, 2)), Err(Error::Unsupported(_))));
        assert!(matches!(total_for_n(int(2)), Err(Error::InvalidInput(_))));
        assert!(total_for_n(rat(-1, 4)).is_err());
    }

    #[test]
    fn integral_queries() {
        let mut q = CountQuery::new(int(1));
        q.order = Some(3);
        assert_eq!(count(&q, CountMethod::Formula).unwrap().total, 1);
        assert_eq!(count(&q, CountMethod::BruteForce).unwrap().total, 1);
        q.scope = GroupScope::TorusFamily;
        q.order = Some(5);
        let f = count(&q, CountMethod::Formula).unwrap();
        assert_eq!(f.total, count(&q, CountMethod::BruteForce).unwrap().total);
    }

    #[test]
    fn offsets_round_trip() {
        for s in ["m±3/4", "m-5/6", "m"] {
            assert_eq!(s.parse::<Offset>().unwrap().to_string(), s);
        }
        let o: Offset = "m±3/10".parse().unwrap();
        assert_eq!(o.solve(rat(13, 10)), vec![(1, 1)]);
        assert_eq!(o.solve(rat(7, 10)), vec![(1, -1)]);
    }

    proptest! {
        #[test]
        fn formula_and_brute_force_totals_agree(p in 1i64..60, q in prop::sample::select(vec![4i64, 6, 10])) {
            let n = rat(p, q);
            prop_assume!(!n.is_integer() && !is_half_integer(n));
            let f = count(&CountQuery::new(n), CountMethod::Formula).unwrap();
            let b = count(&CountQuery::new(n), CountMethod::BruteForce).unwrap();
            prop_assert_eq!(f.total, b.total);
        }
    }
}
