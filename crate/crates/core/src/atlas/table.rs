//! Grouping of atlas entries into one row per basic triangle and its complement.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{enumerate_basic, AtlasEntry, AtlasFamily, Note};
use crate::error::Result;
use crate::rational::{rat, Rational};
use crate::solids::SolidFamily;

/// Solids whose basic triangles make up the Platonic rows.
const ROW_SOLIDS: [SolidFamily; 4] =
    [SolidFamily::Octahedron, SolidFamily::Cube, SolidFamily::Icosahedron, SolidFamily::Dodecahedron];

/// Polygons probed for the dihedral marker.
const DIHEDRAL_PROBES: std::ops::RangeInclusive<usize> = 3..=8;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Table1Row {
    pub family: AtlasFamily,
    #[serde(with = "crate::rational::vec_as_string")]
    pub n: Vec<Rational>,
    pub distances: String,
    pub note: Note,
}

/// All entries over the Platonic solids, without tetrahedral duplicates.
/// Computed once per process.
pub fn atlas_entries() -> Result<Vec<AtlasEntry>> {
    static CACHE: OnceLock<Result<Vec<AtlasEntry>>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let mut out = Vec::new();
            for family in ROW_SOLIDS {
                out.extend(enumerate_basic(family)?.into_iter().filter(|e| e.family != AtlasFamily::KleinFour));
            }
            Ok(out)
        })
        .clone()
}

pub fn table1_rows() -> Result<Vec<Table1Row>> {
    let mut rows = Vec::new();
    let mut klein_four = false;
    for family in ROW_SOLIDS {
        let entries = enumerate_basic(family)?;
        klein_four |= entries.iter().any(|e| e.family == AtlasFamily::KleinFour);
        for base in entries.iter().filter(|e| !e.complement && e.family != AtlasFamily::KleinFour) {
            let mut n = vec![base.n];
            n.extend(
                entries
                    .iter()
                    .filter(|c| {
                        c.complement
                            && c.family == base.family
                            && c.distances == base.distances
                            && c.n + base.n == rat(2, 1)
                    })
                    .map(|c| c.n),
            );
            rows.push(Table1Row { family: base.family, n, distances: base.distance_string(), note: base.note });
        }
    }
    let mut dihedral = false;
    for k in DIHEDRAL_PROBES {
        dihedral |= enumerate_basic(SolidFamily::NGon(k))?.iter().any(|e| e.family == AtlasFamily::Dihedral);
    }
    if dihedral {
        rows.push(Table1Row {
            family: AtlasFamily::Dihedral,
            n: vec![rat(1, 1)],
            distances: "k1,k2,k3".into(),
            note: Note::None,
        });
    }
    if klein_four {
        rows.push(Table1Row {
            family: AtlasFamily::KleinFour,
            n: vec![rat(1, 2), rat(3, 2)],
            distances: "-".into(),
            note: Note::None,
        });
    }
    Ok(rows)
}
