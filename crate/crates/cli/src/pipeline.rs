//! End-to-end run for one value of n: atlas entries, groups, passports and
//! dessin counts.

use serde::Serialize;

use lame_core::atlas::{realize_geometry, AtlasEntry, CornerAngles};
use lame_core::counting::{count, CountMethod, CountQuery, GroupScope};
use lame_core::dessin::{enumerate_dessins, passport_for, Form, Passport, TriangleGroup, DEFAULT_DEGREE_CAP};
use lame_core::monodromy::{dihedral_profile, profile_for_entry, solid_for, MonodromyProfile};
use lame_core::rational::is_half_integer;
use lame_core::solids::{build_solid, SolidFamily};
use lame_core::{AtlasFamily, Error, Rational, Result};

use crate::entry_id;
use crate::render::{Render, Table};

#[derive(Clone, Debug, Serialize)]
pub struct PipelineEntry {
    pub id: String,
    pub family: AtlasFamily,
    pub m: u64,
    pub count: u64,
    pub angles: Option<CornerAngles>,
    pub lengths: Option<[f64; 3]>,
    pub groups: MonodromyProfile,
}

#[derive(Clone, Debug, Serialize)]
pub struct PassportSummary {
    pub p: u32,
    pub passport: Passport,
    /// `None` when the degree exceeds the cap.
    pub dessin_classes: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    #[serde(with = "lame_core::rational::as_string")]
    pub n: Rational,
    pub total: u64,
    pub entries: Vec<PipelineEntry>,
    pub passports: Vec<PassportSummary>,
}

impl Render for PipelineReport {
    fn table(&self) -> Table {
        Table {
            headers: vec!["entry", "m", "count", "M", "PM", "M~", "PM~"],
            rows: self
                .entries
                .iter()
                .map(|e| {
                    let mut row = vec![e.id.clone(), e.m.to_string(), e.count.to_string()];
                    row.extend(e.groups.labels().iter().map(|l| l.to_string()));
                    row
                })
                .collect(),
        }
    }

    fn footer(&self) -> Vec<String> {
        let mut out = vec![format!("n = {}: {} tori", self.n, self.total)];
        for p in &self.passports {
            let classes = p.dessin_classes.map_or("over cap".to_string(), |c| c.to_string());
            out.push(format!("(2,3,{}) passport {}: {classes} dessin classes", p.p, p.passport));
        }
        out
    }
}

fn entry_geometry(entry: &AtlasEntry) -> Result<(Option<[f64; 3]>, MonodromyProfile)> {
    if entry.family == AtlasFamily::Dihedral {
        let steps = entry.distances.ok_or_else(|| Error::InvalidInput("dihedral entry without steps".into()))?;
        let k = steps.map(|l| l.distance as u64);
        let solid = build_solid(SolidFamily::NGon(k.iter().sum::<u64>() as usize))?;
        let t = realize_geometry(entry, &solid)?;
        return Ok((Some(t.lengths), dihedral_profile(k, entry.counts)?));
    }
    let profile = profile_for_entry(entry)?;
    let solid = solid_for(entry.family).ok_or_else(|| Error::Unsupported(format!("no solid for {}", entry.family)))?;
    let t = realize_geometry(entry, &build_solid(solid)?)?;
    Ok((Some(t.lengths), profile))
}

pub fn run_pipeline(n: Rational, order: Option<u64>, cap: usize) -> Result<PipelineReport> {
    if is_half_integer(n) {
        return Err(Error::Unsupported(format!(
            "n = {n} has Klein-four monodromy: the tori form a one-parameter family, so there is no finite count \
             (see the Klein-four row of `lame reproduce table1`)"
        )));
    }
    let query = CountQuery { order, scope: GroupScope::TorusFamily, ..CountQuery::new(n) };
    let report = count(&query, CountMethod::Formula)?;
    let mut entries = Vec::new();
    for item in &report.breakdown {
        let (lengths, groups) = entry_geometry(&item.entry)?;
        entries.push(PipelineEntry {
            id: entry_id(&item.entry),
            family: item.entry.family,
            m: item.m,
            count: item.count,
            angles: item.entry.angles,
            lengths,
            groups,
        });
    }

    let mut passports = Vec::new();
    if !n.is_integer() {
        let mut groups: Vec<TriangleGroup> =
            entries.iter().filter_map(|e| TriangleGroup::for_family(e.family).ok()).collect();
        groups.sort();
        groups.dedup();
        for g in groups {
            for passport in passport_for(n, g, Form::Algebraic)? {
                let dessin_classes =
                    if passport.degree as usize <= cap { Some(enumerate_dessins(&passport, cap)?.len()) } else { None };
                passports.push(PassportSummary { p: g.p, passport, dessin_classes });
            }
        }
    }
    Ok(PipelineReport { n, total: report.total, entries, passports })
}

/// Pipeline with the default dessin cap.
pub fn pipeline(n: Rational, order: Option<u64>) -> Result<PipelineReport> {
    run_pipeline(n, order, DEFAULT_DEGREE_CAP)
}
