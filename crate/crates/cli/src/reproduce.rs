//! Regenerates the reference tables and compares them with the bundled data.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;

use clap::ValueEnum;
use serde::Serialize;

use lame_core::atlas::{atlas_entries, enumerate_dihedral, table1_rows};
use lame_core::counting::{
    a_coeff, b_coeff, brute_force_family, count_dihedral, dahmen_ordinary, dahmen_projective, divisor_sum,
    lattice_oracle, table2_rows, CountFormula,
};
use lame_core::dessin::{passport_for, TriangleGroup};
use lame_core::monodromy::{profile_for_entry, table3_rows};
use lame_core::rational::int;
use lame_core::{golden, Rational, Result};

use crate::render::{Render, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Table1,
    Table2,
    Table3,
    Table4,
    Thm13,
    Thm14,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diff {
    pub item: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReproduceReport {
    pub target: Target,
    pub matched: bool,
    pub checked: usize,
    pub diffs: Vec<Diff>,
    pub notes: Vec<String>,
}

impl ReproduceReport {
    fn new(target: Target) -> Self {
        ReproduceReport { target, matched: true, checked: 0, diffs: Vec::new(), notes: Vec::new() }
    }

    fn compare<T: PartialEq + fmt::Debug>(&mut self, item: impl Into<String>, expected: T, actual: T) {
        self.checked += 1;
        if expected != actual {
            self.matched = false;
            let show = |v: &T| format!("{v:?}").trim_matches('"').to_string();
            self.diffs.push(Diff { item: item.into(), expected: show(&expected), actual: show(&actual) });
        }
    }
}

impl Render for ReproduceReport {
    fn table(&self) -> Table {
        Table {
            headers: vec!["item", "expected", "actual"],
            rows: self.diffs.iter().map(|d| vec![d.item.clone(), d.expected.clone(), d.actual.clone()]).collect(),
        }
    }

    fn footer(&self) -> Vec<String> {
        let verdict = if self.matched { "match" } else { "MISMATCH" };
        let mut out =
            vec![format!("{}: {verdict} ({} checks, {} differences)", self.target, self.checked, self.diffs.len())];
        out.extend(self.notes.iter().map(|n| format!("note: {n}")));
        out
    }
}

/// Ranges used by the parametrised targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ranges {
    pub k: RangeInclusive<u32>,
    pub n: RangeInclusive<u64>,
    pub order: RangeInclusive<u64>,
    pub m: RangeInclusive<u64>,
}

impl Default for Ranges {
    fn default() -> Self {
        Ranges { k: 0..=2, n: 1..=6, order: 1..=12, m: 1..=6 }
    }
}

pub fn reproduce(target: Target, ranges: &Ranges) -> Result<ReproduceReport> {
    match target {
        Target::Table1 => table1(),
        Target::Table2 => table2(ranges),
        Target::Table3 => table3(),
        Target::Table4 => table4(ranges),
        Target::Thm13 => theorem_projective(ranges),
        Target::Thm14 => theorem_ordinary(ranges),
    }
}

fn set_diff<T: Ord + Clone + fmt::Debug>(r: &mut ReproduceReport, what: &str, expected: Vec<T>, actual: Vec<T>) {
    let (e, a): (BTreeSet<T>, BTreeSet<T>) = (expected.into_iter().collect(), actual.into_iter().collect());
    r.checked += e.len().max(a.len());
    for missing in e.difference(&a) {
        r.matched = false;
        r.diffs.push(Diff { item: format!("{what} row"), expected: format!("{missing:?}"), actual: "missing".into() });
    }
    for extra in a.difference(&e) {
        r.matched = false;
        r.diffs.push(Diff { item: format!("{what} row"), expected: "absent".into(), actual: format!("{extra:?}") });
    }
}

fn table1() -> Result<ReproduceReport> {
    let mut r = ReproduceReport::new(Target::Table1);
    let (expected, actual) = (golden::table1(), table1_rows()?);
    r.compare("row count", expected.len(), actual.len());
    set_diff(&mut r, "table1", expected, actual);
    Ok(r)
}

/// Golden rows, then formula against enumeration of hemisphere placements.
fn table2(ranges: &Ranges) -> Result<ReproduceReport> {
    let mut r = ReproduceReport::new(Target::Table2);
    let expected: Vec<String> = golden::table2().iter().map(serde_json_line).collect();
    let actual: Vec<String> = table2_rows()?.iter().map(serde_json_line).collect();
    set_diff(&mut r, "table2", expected, actual);
    for entry in atlas_entries()? {
        for m in ranges.m.clone() {
            let formula = CountFormula::for_note(entry.note).evaluate(m)?;
            let brute = brute_force_family(&entry, m)?;
            r.compare(format!("{} {} {} m={m}", entry.family, entry.n, entry.distance_string()), formula, brute);
        }
    }
    for k in 3..=8 {
        for entry in enumerate_dihedral(k)? {
            let steps = entry.distances.expect("dihedral steps").map(|l| l.distance as u64);
            for m in ranges.m.clone() {
                r.compare(
                    format!("dihedral {} m={m}", entry.distance_string()),
                    count_dihedral(steps, m)?,
                    brute_force_family(&entry, m)?,
                );
            }
        }
    }
    Ok(r)
}

fn serde_json_line<T: Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("rows serialize")
}

fn table3() -> Result<ReproduceReport> {
    let mut r = ReproduceReport::new(Target::Table3);
    set_diff(
        &mut r,
        "table3",
        golden::table3().iter().map(serde_json_line).collect(),
        table3_rows()?.iter().map(serde_json_line).collect(),
    );
    for entry in atlas_entries()? {
        let p = profile_for_entry(&entry)?;
        r.compare(
            format!("|M~| = 2|M| for {} {} {}", entry.family, entry.n, entry.distance_string()),
            2 * p.orders.m,
            p.orders.m_tilde,
        );
    }
    Ok(r)
}

fn table4(ranges: &Ranges) -> Result<ReproduceReport> {
    let mut r = ReproduceReport::new(Target::Table4);
    let pattern = golden::table4();
    let group = TriangleGroup::for_family(pattern.family)?;
    for k in ranges.k.clone() {
        let expected = pattern.instantiate(k)?;
        let n = pattern.n + i64::from(k);
        let got = passport_for(n, group, pattern.form)?;
        r.compare(format!("passport count k={k}"), 1, got.len());
        if let Some(p) = got.first() {
            r.compare(format!("fibers k={k}"), &expected.fibers, &p.fibers);
            r.compare(format!("degree k={k}"), pattern.degree.at(k), p.degree);
            r.compare(format!("genus k={k}"), 1, p.genus);
        }
    }
    r.notes.push(format!("pattern [{}]", pattern.rows().join(", ")));
    Ok(r)
}

fn theorem_projective(ranges: &Ranges) -> Result<ReproduceReport> {
    let mut r = ReproduceReport::new(Target::Thm13);
    let mut corrected_ok = true;
    for n in ranges.n.clone() {
        for order in ranges.order.clone() {
            r.compare(
                format!("PL({n},{order}) vs lattice"),
                dahmen_projective(n, order)?,
                lattice_oracle(n, order, true)?,
            );
            let lhs = divisor_sum(n, order, true)?;
            let (n_, big) = (n as i64, order as i64);
            let printed = Rational::new(n_ * (n_ + 1), 2) * (big * big - 3 * big + 2);
            r.compare(format!("divisor identity n={n} N={order}"), printed.to_string(), lhs.to_string());
            corrected_ok &= Rational::new(n_ * (n_ + 1), 4) * (big * big - 3 * big + 2) == int(lhs);
        }
    }
    if corrected_ok {
        r.notes.push("the divisor sum equals n(n+1)/4·(N²−3N+2) on the whole grid".into());
    }
    Ok(r)
}

/// The printed three-line display for `Σ_{d|N}(3L̃(n,d) − 2ε(n,d))`.
fn printed_ordinary_lines(n: u64, order: u64) -> [Rational; 3] {
    let (a, b) = (int(a_coeff(n)), int(b_coeff(n)));
    let nn = int((n * (n + 1)) as i64);
    let big = int(order as i64);
    let half = Rational::new(1, 2);
    if order % 2 == 1 {
        let l = int(order.div_ceil(2) as i64);
        [
            a * int(3) * (l - 1) * (l - 2) * half + (b - a) * l * (l - 1) * half,
            nn * half * l * (l - 1) * half - int(3) * a * l,
            nn / int(16) * (big * big - 1) - Rational::new(3, 2) * a * (big + 1),
        ]
    } else {
        let l = int((order / 2) as i64);
        [
            a * int(3) * (l - 1) * (l - 2) * half + (b - a) * (l - 1) * (l - 2) * half,
            nn * half * l * l * half - (int(2) * a + b) * (int(3) * l - 2) * half,
            nn / int(16) * big * big - (int(2) * a + b) * (Rational::new(3, 4) * big - 1),
        ]
    }
}

fn theorem_ordinary(ranges: &Ranges) -> Result<ReproduceReport> {
    let mut r = ReproduceReport::new(Target::Thm14);
    let mut corrected_ok = true;
    for n in ranges.n.clone() {
        for order in ranges.order.clone() {
            r.compare(
                format!("L({n},{order}) vs lattice"),
                dahmen_ordinary(n, order)?,
                lattice_oracle(n, order, false)?,
            );
            let lhs = int(divisor_sum(n, order, false)?);
            for (line, value) in printed_ordinary_lines(n, order).into_iter().enumerate() {
                r.compare(format!("display line {} n={n} N={order}", line + 1), value.to_string(), lhs.to_string());
            }
            if order % 2 == 1 {
                let (nn, a) = (int((n * (n + 1)) as i64), int(a_coeff(n)));
                let big = int(order as i64);
                corrected_ok &= nn / int(16) * (big * big - 1) - Rational::new(3, 2) * a * (big - 1) == lhs;
            }
        }
    }
    if corrected_ok {
        r.notes.push("for odd N the divisor sum equals n(n+1)(N²−1)/16 − 3a_n(N−1)/2 on the whole grid".into());
    }
    Ok(r)
}
