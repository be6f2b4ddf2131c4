//! Library side of the `lame` command-line tool.
//!
//! Everything the binary does is reachable through [`app::run_from`], which
//! the integration tests drive directly.

pub mod app;
pub mod checks;
pub mod config;
pub mod pipeline;
pub mod render;
pub mod reproduce;

use lame_core::atlas::{atlas_entries, enumerate_dihedral, parse_distances, AtlasEntry};
use lame_core::rational::parse_rational;
use lame_core::{AtlasFamily, Error, Result};

/// Stable id of an atlas entry, `family:distances:n`.
pub fn entry_id(entry: &AtlasEntry) -> String {
    format!("{}:{}:{}", entry.family, entry.distance_string(), entry.n)
}

/// Looks up an entry by id. The `:n` suffix may be omitted when the
/// distances already pin down a single entry; dihedral steps may be given in
/// any rotation.
pub fn parse_entry_id(id: &str) -> Result<AtlasEntry> {
    let mut parts = id.trim().splitn(3, ':');
    let family: AtlasFamily = parts.next().unwrap_or_default().parse()?;
    let distances = parts.next().ok_or_else(|| Error::InvalidInput(format!("entry id {id:?} has no distances")))?;
    let n = parts
        .next()
        .map(|s| parse_rational(s).ok_or_else(|| Error::InvalidInput(format!("bad n in entry id {id:?}"))))
        .transpose()?;

    let candidates: Vec<AtlasEntry> = if family == AtlasFamily::Dihedral {
        let labels = parse_distances(distances)?;
        let k: usize = labels.iter().map(|l| l.distance).sum();
        let rotations: Vec<_> = (0..3).map(|r| [labels[r], labels[(r + 1) % 3], labels[(r + 2) % 3]]).collect();
        enumerate_dihedral(k)?.into_iter().filter(|e| e.distances.is_some_and(|d| rotations.contains(&d))).collect()
    } else {
        atlas_entries()?
            .into_iter()
            .filter(|e| e.family == family && e.distance_string() == distances && n.is_none_or(|n| e.n == n))
            .collect()
    };
    match candidates.as_slice() {
        [one] => Ok(one.clone()),
        [] => Err(Error::InvalidInput(format!("no atlas entry matches {id:?}; list ids with `lame atlas enumerate`"))),
        many => Err(Error::InvalidInput(format!(
            "{id:?} is ambiguous, candidates: {}",
            many.iter().map(entry_id).collect::<Vec<_>>().join(", ")
        ))),
    }
}
