//! Seeded property sweeps shared by the CLI and the acceptance run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use lame_core::atlas::{atlas_entries, attach_hemisphere, enumerate_dihedral, realize_geometry, SphericalTriangle};
use lame_core::monodromy::{groups_from_triangle, params_from_steps, shift_params};
use lame_core::rational::frac;
use lame_core::solids::{build_solid, SolidFamily};
use lame_core::sphere::{orthonormal_frame, triple_defect, UnitVector};
use lame_core::{AtlasFamily, Rational, Result};

use crate::render::{Render, Table};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub name: String,
    pub samples: usize,
    pub failures: Vec<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Render for SweepReport {
    fn table(&self) -> Table {
        Table { headers: vec!["failure"], rows: self.failures.iter().map(|f| vec![f.clone()]).collect() }
    }

    fn footer(&self) -> Vec<String> {
        vec![format!("{}: {} samples, {} failures", self.name, self.samples, self.failures.len())]
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> UnitVector {
    loop {
        let v = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let norm = v.iter().map(|x: &f64| x * x).sum::<f64>().sqrt();
        if (0.1..=1.0).contains(&norm) {
            if let Ok(u) = UnitVector::new(v[0] / norm, v[1] / norm, v[2] / norm) {
                return u;
            }
        }
    }
}

/// Half turns about pairwise orthogonal axes compose to the identity; about
/// generic axes they stay away from it.
pub fn orthogonal_triples(seed: u64, samples: usize, tol: f64) -> SweepReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut drawn = 0;
    while drawn < samples {
        let (u, v) = (random_unit(&mut rng), random_unit(&mut rng));
        let Ok(frame) = orthonormal_frame(&u, &v) else { continue };
        drawn += 1;
        let defect = triple_defect(&frame);
        if defect > tol {
            failures.push(format!("orthogonal frame {frame:?} has defect {defect:e}"));
        }
    }
    drawn = 0;
    while drawn < samples {
        let axes = [random_unit(&mut rng), random_unit(&mut rng), random_unit(&mut rng)];
        let worst = (0..3).map(|i| axes[i].dot(&axes[(i + 1) % 3]).abs()).fold(0.0, f64::max);
        if worst < 1e-2 {
            continue;
        }
        drawn += 1;
        let defect = triple_defect(&axes);
        if defect <= 1e-3 {
            failures.push(format!("generic axes {axes:?} have defect {defect:e}"));
        }
    }
    SweepReport { name: "orthogonal half turns".into(), samples: 2 * samples, failures }
}

fn solid_for(f: AtlasFamily) -> SolidFamily {
    match f {
        AtlasFamily::Octahedral => SolidFamily::Octahedron,
        AtlasFamily::Cubical => SolidFamily::Cube,
        AtlasFamily::Icosahedral => SolidFamily::Icosahedron,
        _ => SolidFamily::Dodecahedron,
    }
}

fn attach_all(t: &SphericalTriangle, counts: [u32; 3]) -> Result<SphericalTriangle> {
    let mut out = t.clone();
    for (edge, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            out = attach_hemisphere(&out, edge)?;
        }
    }
    Ok(out)
}

/// Attaching hemispheres keeps PM̃, and on dihedral tori moves `(s, t)` by
/// `((θ₁ − 1)/2, (θ₂ − 1)/2)` read off the attached angles.
pub fn hemisphere_invariance(seed: u64, samples: usize) -> Result<SweepReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let platonic = atlas_entries()?;
    let mut dihedral = Vec::new();
    for k in 3..=8 {
        dihedral.extend(enumerate_dihedral(k)?.into_iter().map(|e| (k, e)));
    }
    let mut failures = Vec::new();
    for i in 0..samples {
        let mut counts = [0u32; 3];
        for _ in 0..rng.random_range(1..=3) {
            counts[rng.random_range(0..3)] += 1;
        }
        let use_dihedral = i % 2 == 1;
        let (label, base, steps) = if use_dihedral {
            let (k, entry) = &dihedral[rng.random_range(0..dihedral.len())];
            let t = realize_geometry(entry, &build_solid(SolidFamily::NGon(*k))?)?;
            let steps = entry.distances.expect("dihedral steps").map(|l| l.distance as u64);
            (format!("dihedral {}", entry.distance_string()), t, Some(steps))
        } else {
            let entry = &platonic[rng.random_range(0..platonic.len())];
            let t = realize_geometry(entry, &build_solid(solid_for(entry.family))?)?;
            (format!("{} {} {}", entry.family, entry.n, entry.distance_string()), t, None)
        };
        let attached = attach_all(&base, counts)?;
        let (before, after) = (groups_from_triangle(&base, [0; 3])?, groups_from_triangle(&attached, [0; 3])?);
        if before.pm_tilde != after.pm_tilde {
            failures.push(format!("{label} {counts:?}: PM~ {} became {}", before.pm_tilde, after.pm_tilde));
        }
        if let Some(k) = steps {
            let p = params_from_steps(k)?;
            let shifted = shift_params(&p, counts);
            let theta = attached.angles.exact().expect("dihedral angles are rational");
            let half = Rational::new(1, 2);
            let expected = (frac(p.s + (theta[0] - 1) * half), frac(p.t + (theta[1] - 1) * half));
            if (shifted.s, shifted.t) != expected {
                failures.push(format!(
                    "{label} {counts:?}: shift gave ({}, {}), angles give {expected:?}",
                    shifted.s, shifted.t
                ));
            }
        }
    }
    Ok(SweepReport { name: "hemisphere invariance".into(), samples, failures })
}
