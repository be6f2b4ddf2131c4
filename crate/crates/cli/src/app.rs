//! Argument parsing and dispatch for the `lame` binary.

use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use lame_core::atlas::{atlas_entries, enumerate_basic, enumerate_dihedral, realize_geometry, AtlasEntry};
use lame_core::belyi::{
    certify, closed_form_fixtures, newton_solve, CertificateReport, Configuration, NewtonOptions, SolveResult,
    DEFAULT_MAX_ITER,
};
use lame_core::counting::{
    count, dahmen_ordinary, dahmen_projective, lattice_oracle, CountMethod, CountQuery, CountReport, GroupScope,
};
use lame_core::dessin::{
    enumerate_dessins, export_graph, passport_for, DessinMap, Form, GraphFormat, Passport, TriangleGroup,
    DEFAULT_DEGREE_CAP,
};
use lame_core::monodromy::{dihedral_profile, groups_from_triangle_with, solid_for, ClosureConfig, MonodromyProfile};
use lame_core::rational::parse_rational;
use lame_core::solids::{build_solid, SolidFamily, SolidSpec};
use lame_core::sphere::UnitVector;
use lame_core::{AtlasFamily, Error, Rational, Result};

use crate::checks::{hemisphere_invariance, orthogonal_triples, SweepReport};
use crate::config::{OutputFormat, RunConfig};
use crate::pipeline::run_pipeline;
use crate::render::{render, Render, Table};
use crate::reproduce::{reproduce, Ranges, ReproduceReport, Target};
use crate::{entry_id, parse_entry_id};

#[derive(Debug, Parser)]
#[command(
    name = "lame",
    version,
    about = "Spherical tori, Lamé equations with finite monodromy, dessins and Belyi maps"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    #[arg(long, global = true, default_value_t = lame_core::sphere::TAU_GEOM)]
    pub tol_geom: f64,
    #[arg(long, global = true, default_value_t = lame_core::sphere::TAU_GROUP)]
    pub tol_group: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Point configurations on the sphere.
    Solids {
        #[command(subcommand)]
        action: SolidsAction,
    },
    /// Basic spherical triangles.
    Atlas {
        #[command(subcommand)]
        action: AtlasAction,
    },
    /// Number of tori (equivalently Lamé equations) for a given n.
    Count(CountArgs),
    /// Closed-form dihedral counts next to the lattice count.
    Dahmen {
        #[arg(long)]
        n: u64,
        #[arg(long = "N", alias = "order")]
        order: u64,
    },
    /// The four monodromy groups of an atlas entry.
    Monodromy {
        /// Entry id as printed by `atlas enumerate`, e.g. `octahedral:1,1,1:1/4`.
        #[arg(long)]
        entry: String,
        #[arg(long, default_value = "0,0,0")]
        hemispheres: String,
    },
    /// Ramification passports and dessins.
    Dessin {
        #[command(subcommand)]
        action: DessinAction,
    },
    /// Genus-0 Belyi maps by Newton iteration.
    Belyi {
        #[command(subcommand)]
        action: BelyiAction,
    },
    /// Regenerate a reference table and diff it against the bundled data.
    Reproduce(ReproduceArgs),
    /// Seeded property sweeps.
    Check {
        #[arg(value_enum)]
        sweep: Sweep,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Atlas, groups, passports and dessin counts for one n.
    Pipeline {
        #[arg(long)]
        n: String,
        /// Dihedral order, required for integral n.
        #[arg(long = "N", alias = "order")]
        order: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        cap: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum SolidsAction {
    Dump {
        /// tetrahedron, cube, octahedron, dodecahedron, icosahedron or n_gon:K
        #[arg(long)]
        family: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum AtlasAction {
    Enumerate {
        /// Restrict to one solid (default: the four Platonic families).
        #[arg(long)]
        family: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub n: String,
    #[arg(long)]
    pub family: Option<AtlasFamily>,
    #[arg(long, value_enum, default_value_t = ScopeArg::Projective)]
    pub scope: ScopeArg,
    /// Dihedral order, required for integral n.
    #[arg(long = "N", alias = "order")]
    pub order: Option<u64>,
    #[arg(long, value_enum, default_value_t = MethodArg::Formula)]
    pub method: MethodArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    Projective,
    Ordinary,
    Tori,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Formula,
    BruteForce,
}

#[derive(Debug, Subcommand)]
pub enum DessinAction {
    Passport {
        #[arg(long)]
        n: String,
        #[arg(long)]
        family: AtlasFamily,
        #[arg(long, default_value = "algebraic")]
        form: Form,
    },
    Enumerate {
        /// Passport JSON, inline or as a file path.
        #[arg(long)]
        passport: String,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        cap: usize,
        #[arg(long)]
        export: Option<GraphFormat>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BelyiAction {
    Solve {
        #[arg(long)]
        passport: String,
        #[arg(long)]
        initial: String,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long, default_value_t = lame_core::belyi::EPS_BELYI)]
        tol: f64,
    },
    Certify {
        #[arg(long)]
        result: String,
    },
    /// Print a closed-form fixture as passport and configuration JSON.
    Fixture {
        /// One of z^2, z^3, -2z^2(z-3/2), -z^2(z^2-2)
        #[arg(long)]
        name: String,
    },
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub target: Target,
    /// Inclusive range such as `0..2`.
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long = "N", alias = "order")]
    pub order: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Sweep {
    /// Half turns about orthogonal and generic axis triples.
    Orthogonal,
    /// Projective groups and parameter shifts under hemisphere attachment.
    Hemispheres,
}

/// Rendered output plus the process exit status.
#[derive(Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: u8,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_LIMIT: u8 = 3;

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ClosureOverflow { .. } | Error::CapExceeded { .. } => EXIT_LIMIT,
        Error::CertificationFailed { .. } | Error::SingularJacobian => EXIT_MISMATCH,
        _ => EXIT_INVALID,
    }
}

fn parse_n(s: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| Error::InvalidInput(format!("cannot read {s:?} as a rational")))
}

/// `a..b`, `a..=b` (both inclusive) or a single value.
pub fn parse_range<T: std::str::FromStr + Copy>(s: &str) -> Result<std::ops::RangeInclusive<T>> {
    let bad = || Error::InvalidInput(format!("bad range {s:?}"));
    let one = |x: &str| x.trim().parse::<T>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => Ok(one(a)?..=one(b.trim_start_matches('='))?),
        None => {
            let v = one(s)?;
            Ok(v..=v)
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(arg: &str) -> Result<T> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| Error::InvalidInput(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("bad JSON in {arg}: {e}")))
}

/// Passport input: only the fibers are required.
#[derive(Deserialize)]
struct PassportInput {
    fibers: [Vec<u32>; 3],
}

fn read_passport(arg: &str) -> Result<Passport> {
    let p: PassportInput = read_json(arg)?;
    Passport::from_fibers(p.fibers)
}

#[derive(Serialize)]
#[serde(transparent)]
struct Solid(SolidSpec);

impl Render for Solid {
    fn table(&self) -> Table {
        let pts = |kind: &str, v: &[UnitVector]| -> Vec<Vec<String>> {
            v.iter()
                .enumerate()
                .map(|(i, p)| {
                    vec![
                        kind.to_string(),
                        i.to_string(),
                        format!("{:.9}", p.x()),
                        format!("{:.9}", p.y()),
                        format!("{:.9}", p.z()),
                    ]
                })
                .collect()
        };
        let mut rows = pts("vertex", &self.0.vertices);
        rows.extend(pts("q", &self.0.q));
        Table { headers: vec!["kind", "index", "x", "y", "z"], rows }
    }

    fn footer(&self) -> Vec<String> {
        vec![format!(
            "{}: {} vertices, {} edges, {} special points",
            self.0.family,
            self.0.vertices.len(),
            self.0.adjacency.len(),
            self.0.q.len()
        )]
    }
}

#[derive(Serialize)]
struct AtlasListing {
    entries: Vec<ListedEntry>,
}

#[derive(Serialize)]
struct ListedEntry {
    id: String,
    #[serde(flatten)]
    entry: AtlasEntry,
}

impl Render for AtlasListing {
    fn table(&self) -> Table {
        Table {
            headers: vec!["id", "family", "n", "distances", "note", "angles"],
            rows: self
                .entries
                .iter()
                .map(|e| {
                    let angles = e.entry.angles.map(|a| match a.exact() {
                        Some(x) => x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
                        None => a.to_f64().iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(","),
                    });
                    vec![
                        e.id.clone(),
                        e.entry.family.to_string(),
                        e.entry.n.to_string(),
                        e.entry.distance_string(),
                        format!("{:?}", e.entry.note).to_lowercase(),
                        angles.unwrap_or_default(),
                    ]
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
#[serde(transparent)]
struct Counted(CountReport);

impl Render for Counted {
    fn table(&self) -> Table {
        Table {
            headers: vec!["entry", "m", "count"],
            rows: self
                .0
                .breakdown
                .iter()
                .map(|e| vec![entry_id(&e.entry), e.m.to_string(), e.count.to_string()])
                .collect(),
        }
    }

    fn footer(&self) -> Vec<String> {
        vec![format!("n = {}: total {}", self.0.n, self.0.total)]
    }
}

#[derive(Serialize)]
struct DahmenReport {
    n: u64,
    order: u64,
    projective: i64,
    projective_lattice: i64,
    ordinary: i64,
    ordinary_lattice: i64,
}

impl Render for DahmenReport {
    fn table(&self) -> Table {
        Table {
            headers: vec!["count", "formula", "lattice"],
            rows: vec![
                vec!["projective".into(), self.projective.to_string(), self.projective_lattice.to_string()],
                vec!["ordinary".into(), self.ordinary.to_string(), self.ordinary_lattice.to_string()],
            ],
        }
    }
}

#[derive(Serialize)]
struct Profile {
    entry: String,
    hemispheres: [u32; 3],
    #[serde(flatten)]
    profile: MonodromyProfile,
}

impl Render for Profile {
    fn table(&self) -> Table {
        let o = &self.profile.orders;
        let l = self.profile.labels();
        Table {
            headers: vec!["group", "label", "order"],
            rows: [("M", o.m), ("PM", o.pm), ("M~", o.m_tilde), ("PM~", o.pm_tilde)]
                .iter()
                .zip(l)
                .map(|((name, order), label)| vec![name.to_string(), label.to_string(), order.to_string()])
                .collect(),
        }
    }

    fn footer(&self) -> Vec<String> {
        let mut out = vec![format!("{} with hemispheres {:?}", self.entry, self.hemispheres)];
        if let Some(p) = &self.profile.params {
            out.push(format!("(s, t) = ({}, {})", p.s, p.t));
        }
        out
    }
}

#[derive(Serialize)]
#[serde(transparent)]
struct Passports(Vec<Passport>);

impl Render for Passports {
    fn table(&self) -> Table {
        Table {
            headers: vec!["degree", "over 0", "over 1", "over inf", "genus"],
            rows: self
                .0
                .iter()
                .map(|p| {
                    let mut row = vec![p.degree.to_string()];
                    row.extend(p.fibers.iter().map(|f| f.to_string()));
                    row.push(p.genus.to_string());
                    row
                })
                .collect(),
        }
    }

    fn footer(&self) -> Vec<String> {
        if self.0.is_empty() {
            vec!["no placement of the singular points gives a consistent passport".into()]
        } else {
            Vec::new()
        }
    }
}

#[derive(Serialize)]
struct Dessins {
    passport: Passport,
    maps: Vec<DessinMap>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    exports: Vec<String>,
}

impl Render for Dessins {
    fn table(&self) -> Table {
        let one_based = |p: &lame_core::dessin::Permutation| {
            p.cycles()
                .iter()
                .map(|c| format!("({})", c.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ")))
                .collect::<String>()
        };
        Table {
            headers: vec!["class", "sigma0", "sigma1"],
            rows: self
                .maps
                .iter()
                .enumerate()
                .map(|(i, m)| vec![(i + 1).to_string(), one_based(&m.sigma0), one_based(&m.sigma1)])
                .collect(),
        }
    }

    fn footer(&self) -> Vec<String> {
        let mut out = vec![format!("{}: {} classes", self.passport, self.maps.len())];
        out.extend(self.exports.iter().cloned());
        out
    }
}

#[derive(Serialize)]
#[serde(transparent)]
struct Solved(SolveResult);

impl Render for Solved {
    fn table(&self) -> Table {
        Table {
            headers: vec!["iteration", "residual"],
            rows: self.0.history.iter().enumerate().map(|(i, r)| vec![i.to_string(), format!("{r:.3e}")]).collect(),
        }
    }

    fn footer(&self) -> Vec<String> {
        vec![format!(
            "converged: {} after {} iterations, residual {:.3e}, jacobian rank {}/{}",
            self.0.converged, self.0.iterations, self.0.residual, self.0.jacobian_rank, self.0.unknowns
        )]
    }
}

#[derive(Serialize)]
#[serde(transparent)]
struct Certified(CertificateReport);

impl Render for Certified {
    fn table(&self) -> Table {
        Table {
            headers: vec!["degree", "points", "max defect", "residual"],
            rows: vec![vec![
                self.0.degree.to_string(),
                self.0.points_checked.to_string(),
                format!("{:.3e}", self.0.max_defect),
                format!("{:.3e}", self.0.residual),
            ]],
        }
    }
}

#[derive(Serialize)]
struct Fixture {
    name: String,
    passport: Passport,
    initial: Configuration,
}

impl Render for Fixture {
    fn table(&self) -> Table {
        Table { headers: vec!["name", "passport"], rows: vec![vec![self.name.clone(), self.passport.to_string()]] }
    }
}

fn emit<T: Render>(value: &T, cfg: &RunConfig, code: u8) -> Result<Outcome> {
    Ok(Outcome { output: render(value, cfg.format)?, code })
}

fn monodromy(entry: &str, hemispheres: &str, cfg: &RunConfig) -> Result<Profile> {
    let counts: Vec<u32> = hemispheres
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::InvalidInput(format!("bad hemisphere counts {hemispheres:?}"))))
        .collect::<Result<_>>()?;
    let counts: [u32; 3] =
        counts.try_into().map_err(|_| Error::InvalidInput("hemisphere counts need three entries".into()))?;
    let e = parse_entry_id(entry)?;
    let profile = if e.family == AtlasFamily::Dihedral {
        let k = e.distances.expect("dihedral steps").map(|l| l.distance as u64);
        dihedral_profile(k, counts)?
    } else {
        let solid_family =
            solid_for(e.family).ok_or_else(|| Error::Unsupported(format!("no solid for {}", e.family)))?;
        let solid = build_solid(solid_family)?;
        let t = realize_geometry(&e, &solid)?;
        let closure = ClosureConfig { tolerance: cfg.tol_group, ..ClosureConfig::default() };
        groups_from_triangle_with(&t, counts, closure)?
    };
    Ok(Profile { entry: entry_id(&e), hemispheres: counts, profile })
}

pub fn execute(cli: Cli) -> Result<Outcome> {
    let cfg = RunConfig {
        tol_geom: cli.tol_geom,
        tol_group: cli.tol_group,
        format: cli.format,
        seed: cli.seed,
        ..RunConfig::default()
    };
    cfg.validate()?;
    match cli.command {
        Command::Solids { action: SolidsAction::Dump { family } } => {
            emit(&Solid(build_solid(family.parse::<SolidFamily>()?)?), &cfg, EXIT_OK)
        }
        Command::Atlas { action: AtlasAction::Enumerate { family } } => {
            let entries = match family {
                None => atlas_entries()?,
                Some(f) => match f.parse::<SolidFamily>()? {
                    SolidFamily::NGon(k) => enumerate_dihedral(k)?,
                    solid => enumerate_basic(solid)?,
                },
            };
            let entries = entries.into_iter().map(|entry| ListedEntry { id: entry_id(&entry), entry }).collect();
            emit(&AtlasListing { entries }, &cfg, EXIT_OK)
        }
        Command::Count(args) => {
            let scope = match args.scope {
                ScopeArg::Projective => GroupScope::ProjectiveAlgebraic,
                ScopeArg::Ordinary => GroupScope::OrdinaryAlgebraic,
                ScopeArg::Tori => GroupScope::TorusFamily,
            };
            let method = match args.method {
                MethodArg::Formula => CountMethod::Formula,
                MethodArg::BruteForce => CountMethod::BruteForce,
            };
            let query = CountQuery { n: parse_n(&args.n)?, scope, family: args.family, order: args.order };
            emit(&Counted(count(&query, method)?), &cfg, EXIT_OK)
        }
        Command::Dahmen { n, order } => {
            let report = DahmenReport {
                n,
                order,
                projective: dahmen_projective(n, order)?,
                projective_lattice: lattice_oracle(n, order, true)?,
                ordinary: dahmen_ordinary(n, order)?,
                ordinary_lattice: lattice_oracle(n, order, false)?,
            };
            let code = if report.projective == report.projective_lattice && report.ordinary == report.ordinary_lattice {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            };
            emit(&report, &cfg, code)
        }
        Command::Monodromy { entry, hemispheres } => emit(&monodromy(&entry, &hemispheres, &cfg)?, &cfg, EXIT_OK),
        Command::Dessin { action: DessinAction::Passport { n, family, form } } => {
            let group = TriangleGroup::for_family(family)?;
            emit(&Passports(passport_for(parse_n(&n)?, group, form)?), &cfg, EXIT_OK)
        }
        Command::Dessin { action: DessinAction::Enumerate { passport, cap, export } } => {
            let passport = read_passport(&passport)?;
            let maps = enumerate_dessins(&passport, cap)?;
            let exports = match export {
                Some(f) => maps.iter().map(|m| export_graph(m, f)).collect::<Result<_>>()?,
                None => Vec::new(),
            };
            emit(&Dessins { passport, maps, exports }, &cfg, EXIT_OK)
        }
        Command::Belyi { action: BelyiAction::Solve { passport, initial, max_iter, tol } } => {
            let cfg = RunConfig { eps_belyi: tol, ..cfg };
            cfg.validate()?;
            let passport = read_passport(&passport)?;
            let initial: Configuration = read_json(&initial)?;
            let opts = NewtonOptions { max_iter, tol: cfg.eps_belyi, ..NewtonOptions::default() };
            let result = newton_solve(&passport, &initial, opts)?;
            let code = if result.converged { EXIT_OK } else { EXIT_MISMATCH };
            emit(&Solved(result), &cfg, code)
        }
        Command::Belyi { action: BelyiAction::Certify { result } } => {
            let result: SolveResult = read_json(&result)?;
            let c = &result.configuration;
            let passport = Passport::from_fibers([c.zero_orders.clone(), c.one_orders.clone(), c.pole_orders.clone()])?;
            emit(&Certified(certify(&result, &passport)?), &cfg, EXIT_OK)
        }
        Command::Belyi { action: BelyiAction::Fixture { name } } => {
            let (name, passport, initial) = closed_form_fixtures()
                .into_iter()
                .find(|(n, _, _)| *n == name)
                .ok_or_else(|| Error::InvalidInput(format!("unknown fixture {name:?}")))?;
            emit(&Fixture { name, passport, initial }, &cfg, EXIT_OK)
        }
        Command::Reproduce(args) => {
            let mut ranges = Ranges::default();
            if let Some(k) = &args.k {
                ranges.k = parse_range(k)?;
            }
            if let Some(n) = &args.n {
                ranges.n = parse_range(n)?;
            }
            if let Some(order) = &args.order {
                ranges.order = parse_range(order)?;
            }
            let report: ReproduceReport = reproduce(args.target, &ranges)?;
            let code = if report.matched { EXIT_OK } else { EXIT_MISMATCH };
            emit(&report, &cfg, code)
        }
        Command::Check { sweep, samples } => {
            let report: SweepReport = match sweep {
                Sweep::Orthogonal => orthogonal_triples(cfg.seed, samples, cfg.tol_geom.max(1e-8)),
                Sweep::Hemispheres => hemisphere_invariance(cfg.seed, samples)?,
            };
            let code = if report.passed() { EXIT_OK } else { EXIT_MISMATCH };
            emit(&report, &cfg, code)
        }
        Command::Pipeline { n, order, cap } => emit(&run_pipeline(parse_n(&n)?, order, cap)?, &cfg, EXIT_OK),
    }
}

/// Parses `args` and runs the command, mapping errors to exit codes.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            return Outcome { output: e.to_string(), code };
        }
    };
    match execute(cli) {
        Ok(o) => o,
        Err(e) => Outcome { output: format!("error: {e}\n"), code: exit_code(&e) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lame_core::dessin::parse_graph;

    fn run(args: &[&str]) -> Outcome {
        run_from(std::iter::once("lame").chain(args.iter().copied()))
    }

    #[test]
    fn table1_reproduces_with_exit_zero() {
        let o = run(&["reproduce", "table1"]);
        assert_eq!(o.code, EXIT_OK, "{}", o.output);
        assert!(o.output.contains("table1: match"));
    }

    #[test]
    fn pipeline_for_a_quarter() {
        let o = run(&["pipeline", "--n", "1/4", "--format", "json"]);
        assert_eq!(o.code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&o.output).unwrap();
        assert_eq!(v["total"], 1);
        assert_eq!(v["entries"][0]["id"], "octahedral:1,1,1:1/4");
        assert_eq!(v["entries"][0]["groups"]["pm_tilde"], "S4");
        assert_eq!(v["passports"][0]["dessin_classes"], 1);
    }

    #[test]
    fn half_integer_pipeline_is_refused() {
        let o = run(&["pipeline", "--n", "1/2"]);
        assert_eq!(o.code, EXIT_INVALID);
        assert!(o.output.contains("Klein-four"));
    }

    #[test]
    fn exit_codes_follow_the_error_kind() {
        assert_eq!(run(&["count", "--n", "0"]).code, EXIT_INVALID);
        assert_eq!(
            run(&["dessin", "enumerate", "--passport", r#"{"fibers":[[2,2,2,2,2,2,2],[3,3,3,3,2],[4,4,4,2]]}"#]).code,
            EXIT_LIMIT
        );
        assert_eq!(run(&["reproduce", "thm13", "--n", "1", "--N", "3"]).code, EXIT_MISMATCH);
        assert_eq!(run(&["dahmen", "--n", "3", "--N", "7"]).code, EXIT_OK);
        assert_eq!(run(&["no-such-command"]).code, EXIT_INVALID);
    }

    #[test]
    fn csv_has_a_header_row() {
        let o = run(&["count", "--n", "13/10", "--format", "csv"]);
        let mut lines = o.output.lines();
        assert_eq!(lines.next(), Some("entry,m,count"));
        assert_eq!(lines.count(), 4);
    }

    #[test]
    fn monodromy_with_hemispheres() {
        let o = run(&["monodromy", "--entry", "dihedral:1,1,2", "--hemispheres", "1,0,0", "--format", "json"]);
        assert_eq!(o.code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&o.output).unwrap();
        assert_eq!(v["m_tilde"], "D_8");
        assert_eq!(v["params"]["s"], "3/8");
    }

    #[test]
    fn dessins_export_and_round_trip() {
        let passport = r#"{"fibers":[[1,2,2,2,2,2],[3,3,3,2],[4,4,3]]}"#;
        let o = run(&["dessin", "enumerate", "--passport", passport, "--export", "json", "--format", "json"]);
        assert_eq!(o.code, EXIT_OK, "{}", o.output);
        let v: serde_json::Value = serde_json::from_str(&o.output).unwrap();
        for (map, graph) in v["maps"].as_array().unwrap().iter().zip(v["exports"].as_array().unwrap()) {
            let parsed = parse_graph(graph.as_str().unwrap()).unwrap();
            let original: DessinMap = serde_json::from_value(map.clone()).unwrap();
            assert_eq!(parsed.canonical(), original.canonical());
        }
    }

    #[test]
    fn belyi_solve_then_certify() {
        let fixture = run(&["belyi", "fixture", "--name=-z^2(z^2-2)", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&fixture.output).unwrap();
        let passport = v["passport"].to_string();
        let mut initial = v["initial"].clone();
        initial["zeros"][1][0] = serde_json::json!(1.42);
        let solved =
            run(&["belyi", "solve", "--passport", &passport, "--initial", &initial.to_string(), "--format", "json"]);
        assert_eq!(solved.code, EXIT_OK, "{}", solved.output);
        let certified = run(&["belyi", "certify", "--result", solved.output.trim()]);
        assert_eq!(certified.code, EXIT_OK, "{}", certified.output);
    }

    #[test]
    fn seeded_checks_pass() {
        assert_eq!(run(&["check", "orthogonal", "--samples", "50", "--seed", "3"]).code, EXIT_OK);
        assert_eq!(run(&["check", "hemispheres", "--samples", "4", "--seed", "3"]).code, EXIT_OK);
    }
}
