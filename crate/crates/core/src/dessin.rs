//! Ramification passports of Klein pullbacks and their dessins d'enfants,
//! enumerated as transitive permutation pairs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::atlas::AtlasFamily;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Default degree cap for [`enumerate_dessins`].
pub const DEFAULT_DEGREE_CAP: usize = 12;

/// The rotation triangle group of signature (2, 3, p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TriangleGroup {
    pub p: u32,
}

impl TriangleGroup {
    pub fn new(p: u32) -> Result<Self> {
        match p {
            3..=5 => Ok(TriangleGroup { p }),
            _ => Err(Error::invalid(format!("(2,3,{p}) is not a spherical triangle group with p in 3..=5"))),
        }
    }

    pub fn for_family(family: AtlasFamily) -> Result<Self> {
        match family {
            AtlasFamily::Octahedral | AtlasFamily::Cubical => Ok(TriangleGroup { p: 4 }),
            AtlasFamily::Icosahedral | AtlasFamily::Dodecahedral => Ok(TriangleGroup { p: 5 }),
            other => Err(Error::Unsupported(format!("{other} tori are not Klein pullbacks of a (2,3,p) group"))),
        }
    }

    /// Number of rotations.
    pub fn order(&self) -> u32 {
        match self.p {
            3 => 12,
            4 => 24,
            _ => 60,
        }
    }

    /// Cone orders over 0, 1, ∞.
    pub fn cone_orders(&self) -> [u32; 3] {
        [2, 3, self.p]
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    /// Pullback from the torus itself.
    #[default]
    Elliptic,
    /// Pullback from the x-line of the Weierstrass model.
    Algebraic,
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::Elliptic => "elliptic",
            Form::Algebraic => "algebraic",
        })
    }
}

impl std::str::FromStr for Form {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "elliptic" => Ok(Form::Elliptic),
            "algebraic" => Ok(Form::Algebraic),
            _ => Err(Error::invalid(format!("unknown form {s:?}"))),
        }
    }
}

/// Singular points of the pulled-back equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularPoint {
    /// The lattice point on the torus.
    Origin,
    /// x = ∞ on the Weierstrass line.
    Infinity,
    /// One of e₁, e₂, e₃.
    HalfPeriod,
}

/// Where a singular point lands: the fiber index (0, 1, ∞ as 0, 1, 2) and its local index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Placement {
    pub point: SingularPoint,
    pub fiber: usize,
    pub index: u32,
}

/// A multiset of local indices, kept sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<u32>", into = "Vec<u32>")]
pub struct Fiber(Vec<u32>);

impl Fiber {
    pub fn new(mut indices: Vec<u32>) -> Self {
        indices.sort_unstable();
        Fiber(indices)
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }

    fn ramification(&self) -> u32 {
        self.0.iter().map(|e| e - 1).sum()
    }
}

impl From<Vec<u32>> for Fiber {
    fn from(v: Vec<u32>) -> Self {
        Fiber::new(v)
    }
}

impl From<Fiber> for Vec<u32> {
    fn from(f: Fiber) -> Self {
        f.0
    }
}

impl fmt::Display for Fiber {
    /// Exponent notation, e.g. `1^3 2^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &e in &self.0 {
            *counts.entry(e).or_default() += 1;
        }
        let parts: Vec<String> =
            counts.into_iter().map(|(e, c)| if c == 1 { e.to_string() } else { format!("{e}^{c}") }).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Passport {
    pub degree: u32,
    /// Fibers over 0, 1 and ∞.
    pub fibers: [Fiber; 3],
    pub genus: u32,
    #[serde(default)]
    pub form: Option<Form>,
    #[serde(default)]
    pub placements: Vec<Placement>,
}

impl Passport {
    /// Builds a passport from three fibers, checking sums and Riemann–Hurwitz.
    pub fn from_fibers(fibers: [Vec<u32>; 3]) -> Result<Self> {
        let fibers = fibers.map(Fiber::new);
        let degree = fibers[0].sum();
        let mut p = Passport { degree, fibers, genus: 0, form: None, placements: Vec::new() };
        p.genus = check_riemann_hurwitz(&p)?;
        Ok(p)
    }
}

impl fmt::Display for Passport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}], [{}], [{}] (d = {}, g = {})",
            self.fibers[0], self.fibers[1], self.fibers[2], self.degree, self.genus
        )
    }
}

/// Genus of the covering surface from 2g − 2 = −2d + Σ(e − 1).
pub fn check_riemann_hurwitz(p: &Passport) -> Result<u32> {
    if p.degree == 0 {
        return Err(Error::InvalidPassport("degree must be positive".into()));
    }
    if let Some(bad) = p.fibers.iter().find(|f| f.sum() != p.degree || f.indices().contains(&0)) {
        return Err(Error::InvalidPassport(format!("fiber [{bad}] does not partition degree {}", p.degree)));
    }
    let twice = p.fibers.iter().map(Fiber::ramification).sum::<u32>() as i64 - 2 * p.degree as i64 + 2;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::InvalidPassport(format!("Riemann–Hurwitz gives 2g = {twice}")));
    }
    Ok((twice / 2) as u32)
}

/// Integral local index `δ·q`, if any.
fn local_index(delta: Rational, q: u32) -> Option<u32> {
    let nu = delta * Rational::from_integer(q as i64);
    (nu.is_integer() && *nu.numer() > 0).then(|| *nu.numer() as u32)
}

/// Candidate passports of the Klein pullback for a torus of parameter `n`.
/// An empty result means no placement of the singular points is consistent.
pub fn passport_for(n: Rational, group: TriangleGroup, form: Form) -> Result<Vec<Passport>> {
    if n <= Rational::from_integer(0) {
        return Err(Error::invalid(format!("n must be positive, got {n}")));
    }
    let scale = match form {
        Form::Elliptic => Rational::from_integer(group.order() as i64),
        Form::Algebraic => Rational::new(group.order() as i64, 2),
    };
    let degree = n * scale;
    if !degree.is_integer() {
        return Err(Error::invalid(format!("degree {degree} of the {form} pullback for n = {n} is not integral")));
    }
    let degree = *degree.numer() as u32;
    let q = group.cone_orders();
    let two_n_plus_one = n * 2 + 1;

    // Each choice places the distinguished point over one fiber and the
    // half-periods as a multiset over the three fibers.
    let mut choices: Vec<Vec<(SingularPoint, usize, Rational)>> = Vec::new();
    for main in 0..3 {
        match form {
            Form::Elliptic => choices.push(vec![(SingularPoint::Origin, main, two_n_plus_one)]),
            Form::Algebraic => {
                for a in 0..=3usize {
                    for b in 0..=3 - a {
                        let mut c = vec![(SingularPoint::Infinity, main, two_n_plus_one / 2)];
                        let half = Rational::new(1, 2);
                        c.extend(std::iter::repeat_n((SingularPoint::HalfPeriod, 0, half), a));
                        c.extend(std::iter::repeat_n((SingularPoint::HalfPeriod, 1, half), b));
                        c.extend(std::iter::repeat_n((SingularPoint::HalfPeriod, 2, half), 3 - a - b));
                        choices.push(c);
                    }
                }
            }
        }
    }
    let genus = match form {
        Form::Elliptic => 1,
        Form::Algebraic => 0,
    };

    let mut out = BTreeSet::new();
    'choice: for choice in choices {
        let mut fibers: [Vec<u32>; 3] = Default::default();
        let mut placements = Vec::new();
        for &(point, fiber, delta) in &choice {
            let Some(index) = local_index(delta, q[fiber]) else { continue 'choice };
            fibers[fiber].push(index);
            placements.push(Placement { point, fiber, index });
        }
        for (fiber, &qi) in fibers.iter_mut().zip(&q) {
            let used: u32 = fiber.iter().sum();
            if used > degree || !(degree - used).is_multiple_of(qi) {
                continue 'choice;
            }
            fiber.extend(std::iter::repeat_n(qi, ((degree - used) / qi) as usize));
        }
        let Ok(mut passport) = Passport::from_fibers(fibers) else { continue };
        if passport.genus != genus {
            continue;
        }
        placements.sort();
        passport.form = Some(form);
        passport.placements = placements;
        out.insert(PassportKey(passport));
    }
    Ok(out.into_iter().map(|k| k.0).collect())
}

/// Orders passports by fibers then placements.
#[derive(PartialEq, Eq)]
struct PassportKey(Passport);

impl PartialOrd for PassportKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PassportKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.0.fibers, &self.0.placements).cmp(&(&other.0.fibers, &other.0.placements))
    }
}

/// A permutation of `0..d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Permutation((0..d).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::invalid(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation(images))
    }

    pub fn from_cycles(d: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..d).collect();
        let mut seen = vec![false; d];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= d || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::invalid(format!("cycles {cycles:?} are not disjoint in 0..{d}")));
                }
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self` after `other`: x ↦ self(other(x)).
    pub fn after(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Permutation(inv)
    }

    /// Cycles, each starting at its least element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.0[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> Fiber {
        Fiber::new(self.cycles().iter().map(|c| c.len() as u32).collect())
    }
}

/// A dessin as a pair (σ₀, σ₁) acting on darts; σ_∞ = (σ₀σ₁)⁻¹.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DessinMap {
    pub sigma0: Permutation,
    pub sigma1: Permutation,
}

impl DessinMap {
    pub fn new(sigma0: Permutation, sigma1: Permutation) -> Result<Self> {
        if sigma0.degree() != sigma1.degree() || sigma0.degree() == 0 {
            return Err(Error::invalid("σ₀ and σ₁ must act on the same nonempty dart set"));
        }
        Ok(DessinMap { sigma0, sigma1 })
    }

    pub fn degree(&self) -> usize {
        self.sigma0.degree()
    }

    pub fn sigma_inf(&self) -> Permutation {
        self.sigma0.after(&self.sigma1).inverse()
    }

    pub fn cycle_types(&self) -> [Fiber; 3] {
        [self.sigma0.cycle_type(), self.sigma1.cycle_type(), self.sigma_inf().cycle_type()]
    }

    pub fn is_transitive(&self) -> bool {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(x) = stack.pop() {
            for y in [self.sigma0.apply(x), self.sigma1.apply(x)] {
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    stack.push(y);
                }
            }
        }
        reached == d
    }

    /// The lexicographically least relabeling obtained by a breadth-first
    /// walk from each dart. Equal for conjugate transitive pairs.
    pub fn canonical(&self) -> DessinMap {
        let d = self.degree();
        (0..d)
            .map(|start| {
                let mut label = vec![usize::MAX; d];
                let mut order = vec![start];
                label[start] = 0;
                let mut head = 0;
                while head < order.len() {
                    let x = order[head];
                    head += 1;
                    for y in [self.sigma0.apply(x), self.sigma1.apply(x)] {
                        if label[y] == usize::MAX {
                            label[y] = order.len();
                            order.push(y);
                        }
                    }
                }
                let relabel = |s: &Permutation| Permutation(order.iter().map(|&x| label[s.apply(x)]).collect());
                DessinMap { sigma0: relabel(&self.sigma0), sigma1: relabel(&self.sigma1) }
            })
            .min()
            .expect("at least one dart")
    }
}

/// Calls `visit` for every permutation of `0..d` with the given cycle type.
fn for_each_with_cycle_type(fiber: &Fiber, visit: &mut dyn FnMut(&Permutation)) {
    let d = fiber.sum() as usize;
    let mut lengths: BTreeMap<u32, usize> = BTreeMap::new();
    for &e in fiber.indices() {
        *lengths.entry(e).or_default() += 1;
    }
    let mut images = vec![usize::MAX; d];
    fill(&mut images, &mut lengths, visit);
}

fn fill(images: &mut Vec<usize>, lengths: &mut BTreeMap<u32, usize>, visit: &mut dyn FnMut(&Permutation)) {
    let Some(start) = images.iter().position(|&x| x == usize::MAX) else {
        visit(&Permutation(images.clone()));
        return;
    };
    let available: Vec<u32> = lengths.iter().filter(|(_, &c)| c > 0).map(|(&l, _)| l).collect();
    for len in available {
        *lengths.get_mut(&len).expect("listed") -= 1;
        let mut cycle = vec![start];
        extend_cycle(images, &mut cycle, len as usize, lengths, visit);
        *lengths.get_mut(&len).expect("listed") += 1;
    }
}

fn extend_cycle(
    images: &mut Vec<usize>,
    cycle: &mut Vec<usize>,
    len: usize,
    lengths: &mut BTreeMap<u32, usize>,
    visit: &mut dyn FnMut(&Permutation),
) {
    let last = *cycle.last().expect("cycle starts nonempty");
    if cycle.len() == len {
        images[last] = cycle[0];
        fill(images, lengths, visit);
        images[last] = usize::MAX;
        return;
    }
    // later cycle members exceed the start, which is the least free dart
    for next in cycle[0] + 1..images.len() {
        if images[next] != usize::MAX || cycle.contains(&next) {
            continue;
        }
        images[last] = next;
        cycle.push(next);
        extend_cycle(images, cycle, len, lengths, visit);
        cycle.pop();
        images[last] = usize::MAX;
    }
}

fn class_size(fiber: &Fiber) -> f64 {
    let d = fiber.sum();
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for &e in fiber.indices() {
        *counts.entry(e).or_default() += 1;
    }
    let factorial = |k: u32| (1..=k).map(f64::from).product::<f64>();
    let centralizer: f64 = counts.iter().map(|(&e, &c)| f64::from(e).powi(c as i32) * factorial(c)).product();
    factorial(d) / centralizer
}

/// All dessins with the passport's cycle types up to simultaneous conjugacy,
/// as canonical representatives in ascending order.
pub fn enumerate_dessins(p: &Passport, cap: usize) -> Result<Vec<DessinMap>> {
    check_riemann_hurwitz(p)?;
    let d = p.degree as usize;
    if d > cap {
        return Err(Error::CapExceeded { degree: d, cap });
    }
    // σ₀ is fixed in cycle form; the smaller of the other two classes is searched.
    let cycles = {
        let mut next = 0;
        p.fibers[0]
            .indices()
            .iter()
            .rev()
            .map(|&len| {
                let c: Vec<usize> = (next..next + len as usize).collect();
                next += len as usize;
                c
            })
            .collect::<Vec<_>>()
    };
    let sigma0 = Permutation::from_cycles(d, &cycles)?;
    let search_inf = class_size(&p.fibers[2]) < class_size(&p.fibers[1]);
    let (searched, derived) = if search_inf { (&p.fibers[2], &p.fibers[1]) } else { (&p.fibers[1], &p.fibers[2]) };
    let sigma0_inv = sigma0.inverse();

    let mut found = BTreeSet::new();
    for_each_with_cycle_type(searched, &mut |perm| {
        // σ₀σ₁σ_∞ = 1: σ₁ = σ₀⁻¹σ_∞⁻¹ and σ_∞ = σ₁⁻¹σ₀⁻¹
        let other = if search_inf { sigma0_inv.after(&perm.inverse()) } else { perm.inverse().after(&sigma0_inv) };
        if &other.cycle_type() != derived {
            return;
        }
        let sigma1 = if search_inf { other } else { perm.clone() };
        let map = DessinMap { sigma0: sigma0.clone(), sigma1 };
        if map.is_transitive() {
            found.insert(map.canonical());
        }
    });
    Ok(found.into_iter().collect())
}

/// Output formats for [`export_graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphFormat {
    Dot,
    Json,
}

impl std::str::FromStr for GraphFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(GraphFormat::Dot),
            "json" => Ok(GraphFormat::Json),
            _ => Err(Error::invalid(format!("unknown graph format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub dart: usize,
    pub black: usize,
    pub white: usize,
    /// Position of the dart in the cyclic order around each endpoint.
    pub black_port: usize,
    pub white_port: usize,
}

/// The bicolored graph: black vertices are σ₀-cycles, white are σ₁-cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DessinGraph {
    pub degree: usize,
    pub black: Vec<Vec<usize>>,
    pub white: Vec<Vec<usize>>,
    pub edges: Vec<GraphEdge>,
}

impl DessinGraph {
    pub fn from_map(m: &DessinMap) -> Self {
        let black = m.sigma0.cycles();
        let white = m.sigma1.cycles();
        let locate = |cycles: &[Vec<usize>], dart: usize| {
            cycles
                .iter()
                .enumerate()
                .find_map(|(v, c)| c.iter().position(|&x| x == dart).map(|port| (v, port)))
                .expect("every dart lies in a cycle")
        };
        let edges = (0..m.degree())
            .map(|dart| {
                let (b, bp) = locate(&black, dart);
                let (w, wp) = locate(&white, dart);
                GraphEdge { dart, black: b, white: w, black_port: bp, white_port: wp }
            })
            .collect();
        DessinGraph { degree: m.degree(), black, white, edges }
    }

    pub fn to_map(&self) -> Result<DessinMap> {
        DessinMap::new(
            Permutation::from_cycles(self.degree, &self.black)?,
            Permutation::from_cycles(self.degree, &self.white)?,
        )
    }
}

pub fn export_graph(m: &DessinMap, format: GraphFormat) -> Result<String> {
    let g = DessinGraph::from_map(m);
    Ok(match format {
        GraphFormat::Json => serde_json::to_string_pretty(&g).map_err(|e| Error::invalid(e.to_string()))?,
        GraphFormat::Dot => {
            let mut s = String::from("graph dessin {\n");
            for (i, c) in g.black.iter().enumerate() {
                s +=
                    &format!("  b{i} [shape=circle, style=filled, fillcolor=black, label=\"\", degree={}];\n", c.len());
            }
            for (i, c) in g.white.iter().enumerate() {
                s += &format!("  w{i} [shape=circle, label=\"\", degree={}];\n", c.len());
            }
            for e in &g.edges {
                s += &format!(
                    "  b{} -- w{} [label=\"{}\", tailport={}, headport={}];\n",
                    e.black,
                    e.white,
                    e.dart + 1,
                    e.black_port,
                    e.white_port
                );
            }
            s + "}\n"
        }
    })
}

/// Reads the JSON produced by [`export_graph`].
pub fn parse_graph(json: &str) -> Result<DessinMap> {
    let g: DessinGraph = serde_json::from_str(json).map_err(|e| Error::invalid(format!("bad dessin JSON: {e}")))?;
    g.to_map()
}

/// `a·k + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[u32; 2]", into = "[u32; 2]")]
pub struct Affine(pub u32, pub u32);

impl From<[u32; 2]> for Affine {
    fn from([a, b]: [u32; 2]) -> Self {
        Affine(a, b)
    }
}

impl From<Affine> for [u32; 2] {
    fn from(x: Affine) -> Self {
        [x.0, x.1]
    }
}

impl Affine {
    pub fn at(self, k: u32) -> u32 {
        self.0 * k + self.1
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.0, self.1) {
            (0, b) => write!(f, "{b}"),
            (a, 0) => write!(f, "{a}k"),
            (a, b) => write!(f, "{a}k+{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRun {
    pub index: Affine,
    pub count: Affine,
}

/// Ramification of the pullback for the family `n + k`, `k = 0, 1, ...`,
/// with every index and multiplicity affine in `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassportPattern {
    pub family: AtlasFamily,
    pub form: Form,
    #[serde(with = "crate::rational::as_string")]
    pub n: Rational,
    pub degree: Affine,
    pub fibers: [Vec<IndexRun>; 3],
}

impl PassportPattern {
    pub fn instantiate(&self, k: u32) -> Result<Passport> {
        let fibers = self
            .fibers
            .clone()
            .map(|runs| runs.iter().flat_map(|r| std::iter::repeat_n(r.index.at(k), r.count.at(k) as usize)).collect());
        let p = Passport::from_fibers(fibers)?;
        if p.degree != self.degree.at(k) {
            return Err(Error::InvalidPassport(format!("pattern degree {} disagrees with fibers", self.degree)));
        }
        Ok(p)
    }

    /// Rows in exponent notation, e.g. `2^{30k+9}`.
    pub fn rows(&self) -> [String; 3] {
        self.fibers.clone().map(|runs| {
            runs.iter()
                .map(|r| {
                    if r.count == Affine(0, 1) {
                        format!("({})", r.index)
                    } else {
                        format!("{}^{{{}}}", r.index, r.count)
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        })
    }
}

/// Derives the affine pattern from passports at `k = 0` and `k = 1`, when
/// each has a single passport with matching shape.
pub fn passport_pattern(n: Rational, family: AtlasFamily, form: Form) -> Result<PassportPattern> {
    let group = TriangleGroup::for_family(family)?;
    let at = |k: i64| -> Result<Passport> {
        let mut ps = passport_for(n + k, group, form)?;
        match ps.len() {
            1 => Ok(ps.remove(0)),
            c => Err(Error::Unsupported(format!("{c} passports for n = {}; no single pattern", n + k))),
        }
    };
    let (p0, p1) = (at(0)?, at(1)?);
    let runs = |f: &Fiber| -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &e in f.indices() {
            match out.last_mut() {
                Some((i, c)) if *i == e => *c += 1,
                _ => out.push((e, 1)),
            }
        }
        out
    };
    let mut fibers: [Vec<IndexRun>; 3] = Default::default();
    for (slot, (f0, f1)) in fibers.iter_mut().zip(p0.fibers.iter().zip(&p1.fibers)) {
        let (r0, r1) = (runs(f0), runs(f1));
        if r0.len() != r1.len() {
            return Err(Error::Unsupported("fiber shapes change with k".into()));
        }
        // regular indices come first in the pattern
        let mut pairs: Vec<IndexRun> = r0
            .iter()
            .zip(&r1)
            .map(|(&(i0, c0), &(i1, c1))| {
                (i1 >= i0 && c1 >= c0)
                    .then(|| IndexRun { index: Affine(i1 - i0, i0), count: Affine(c1 - c0, c0) })
                    .ok_or_else(|| Error::Unsupported("fiber decreases with k".into()))
            })
            .collect::<Result<_>>()?;
        pairs.sort_by_key(|r| (r.index.0, r.index.1));
        *slot = pairs;
    }
    Ok(PassportPattern { family, form, n, degree: Affine(p1.degree - p0.degree, p0.degree), fibers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn fibers(p: &Passport) -> [Vec<u32>; 3] {
        p.fibers.clone().map(Vec::from)
    }

    #[test]
    fn icosahedral_elliptic_passports() {
        for k in 0..3i64 {
            let n = rat(3, 10) + k;
            let ps = passport_for(n, TriangleGroup::new(5).unwrap(), Form::Elliptic).unwrap();
            assert_eq!(ps.len(), 1, "k = {k}");
            let k = k as usize;
            let mut inf = vec![5; 10 * k + 2];
            inf.push(10 * k as u32 + 8);
            assert_eq!(fibers(&ps[0]), [vec![2; 30 * k + 9], vec![3; 20 * k + 6], Fiber::new(inf).into()]);
            assert_eq!((ps[0].degree, ps[0].genus), (60 * k as u32 + 18, 1));
        }
    }

    #[test]
    fn algebraic_examples() {
        let ps = passport_for(rat(1, 4), TriangleGroup::new(4).unwrap(), Form::Algebraic).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(fibers(&ps[0]), [vec![1, 1, 1], vec![3], vec![3]]);
        assert_eq!(ps[0].genus, 0);

        let ps = passport_for(rat(3, 10), TriangleGroup::new(5).unwrap(), Form::Algebraic).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(fibers(&ps[0]), [vec![1, 1, 1, 2, 2, 2], vec![3, 3, 3], vec![4, 5]]);
        assert_eq!(ps[0].to_string(), "[1^3 2^3], [3^3], [4 5] (d = 9, g = 0)");

        assert!(passport_for(rat(1, 7), TriangleGroup::new(5).unwrap(), Form::Algebraic).is_err());
    }

    #[test]
    fn riemann_hurwitz() {
        let table4 = Passport::from_fibers([vec![2; 9], vec![3; 6], vec![5, 5, 8]]).unwrap();
        assert_eq!(table4.genus, 1);
        assert_eq!(Passport::from_fibers([vec![1, 1, 1], vec![3], vec![3]]).unwrap().genus, 0);
        assert!(matches!(Passport::from_fibers([vec![2], vec![2], vec![2]]), Err(Error::InvalidPassport(_))));
        assert!(matches!(Passport::from_fibers([vec![2], vec![1], vec![2, 1]]), Err(Error::InvalidPassport(_))));
    }

    #[test]
    fn small_enumerations() {
        let p = Passport::from_fibers([vec![1, 1, 1], vec![3], vec![3]]).unwrap();
        assert_eq!(enumerate_dessins(&p, 12).unwrap().len(), 1);
        let p = Passport::from_fibers([vec![2], vec![1, 1], vec![2]]).unwrap();
        let maps = enumerate_dessins(&p, 12).unwrap();
        assert_eq!(maps.len(), 1);
        let g = DessinGraph::from_map(&maps[0]);
        assert_eq!((g.black.len(), g.white.len()), (1, 2));

        let p = passport_for(rat(3, 10), TriangleGroup::new(5).unwrap(), Form::Algebraic).unwrap().remove(0);
        assert_eq!(enumerate_dessins(&p, 12).unwrap().len(), 1);
        assert!(matches!(enumerate_dessins(&p, 8), Err(Error::CapExceeded { degree: 9, cap: 8 })));
    }

    #[test]
    fn trivial_graph() {
        let m = DessinMap::new(Permutation::identity(1), Permutation::identity(1)).unwrap();
        let g = DessinGraph::from_map(&m);
        assert_eq!((g.black.len(), g.white.len(), g.edges.len()), (1, 1, 1));
        assert!(export_graph(&m, GraphFormat::Dot).unwrap().contains("b0 -- w0"));
    }

    #[test]
    fn elliptic_degree_doubles_algebraic() {
        for den in [4i64, 6, 10] {
            for num in 1..4 * den {
                let n = rat(num, den);
                for p in [4, 5] {
                    let g = TriangleGroup::new(p).unwrap();
                    let (Ok(e), Ok(a)) = (passport_for(n, g, Form::Elliptic), passport_for(n, g, Form::Algebraic))
                    else {
                        continue;
                    };
                    for (x, y) in e.iter().zip(&a) {
                        assert_eq!(x.degree, 2 * y.degree);
                    }
                    for pp in e.iter().chain(&a) {
                        assert_eq!(check_riemann_hurwitz(pp).unwrap(), pp.genus);
                    }
                }
            }
        }
    }

    fn permutation(d: usize) -> impl Strategy<Value = Permutation> {
        Just((0..d).collect::<Vec<_>>()).prop_shuffle().prop_map(Permutation)
    }

    proptest! {
        #[test]
        fn canonical_form_is_conjugation_invariant(
            (s0, s1, c) in (1usize..9).prop_flat_map(|d| (permutation(d), permutation(d), permutation(d)))
        ) {
            let m = DessinMap::new(s0, s1).unwrap();
            prop_assert!(m.sigma0.after(&m.sigma1).after(&m.sigma_inf()) == Permutation::identity(m.degree()));
            if m.is_transitive() {
                let ci = c.inverse();
                let conj = DessinMap::new(c.after(&m.sigma0).after(&ci), c.after(&m.sigma1).after(&ci)).unwrap();
                prop_assert_eq!(m.canonical(), conj.canonical());
                let back = parse_graph(&export_graph(&m, GraphFormat::Json).unwrap()).unwrap();
                prop_assert_eq!(back.canonical(), m.canonical());
            }
        }
    }
}
