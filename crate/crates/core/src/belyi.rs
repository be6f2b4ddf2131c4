//! Numeric genus-0 Belyi maps: Newton iteration on the constellation
//! (Z, O, P) with z₁ = 0, o₁ = 1, p₁ = ∞.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dessin::{Fiber, Passport};
use crate::error::{Error, Result};

pub const EPS_BELYI: f64 = 1e-10;
pub const EPS_COLLIDE: f64 = 1e-8;
pub const H_FD: f64 = 1e-7;
pub const MAX_HALVINGS: u32 = 20;
pub const DEFAULT_MAX_ITER: usize = 200;
/// Scale at which a derivative counts as vanishing during certification.
pub const EPS_CERTIFY: f64 = 1e-7;

/// A constellation with the map `F = λ Π(z − zᵢ)^{d⁰ᵢ} / Π_{j≥2}(z − pⱼ)^{d^∞ⱼ}`.
///
/// `zeros[0]` is pinned at 0 and `ones[0]` at 1. `poles` lists the finite
/// poles `p₂, …`, while `pole_orders[0]` is the order at ∞.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub lambda: Complex64,
    pub zeros: Vec<Complex64>,
    pub ones: Vec<Complex64>,
    pub poles: Vec<Complex64>,
    pub zero_orders: Vec<u32>,
    pub one_orders: Vec<u32>,
    pub pole_orders: Vec<u32>,
}

impl Configuration {
    pub fn degree(&self) -> u32 {
        self.zero_orders.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let lengths_ok = self.zeros.len() == self.zero_orders.len()
            && self.ones.len() == self.one_orders.len()
            && self.poles.len() + 1 == self.pole_orders.len()
            && !self.zeros.is_empty()
            && !self.ones.is_empty();
        if !lengths_ok {
            return Err(Error::invalid("point lists and exponent vectors have mismatched lengths"));
        }
        if self.zeros[0] != Complex64::new(0.0, 0.0) || self.ones[0] != Complex64::new(1.0, 0.0) {
            return Err(Error::invalid("z₁ must be 0 and o₁ must be 1"));
        }
        let d = self.degree();
        let sums = [self.one_orders.iter().sum::<u32>(), self.pole_orders.iter().sum()];
        if sums.iter().any(|&s| s != d)
            || [&self.zero_orders, &self.one_orders, &self.pole_orders].iter().any(|v| v.contains(&0))
        {
            return Err(Error::invalid(format!("exponent vectors must be positive with common sum {d}")));
        }
        let finite_degree = d as i64 - self.pole_orders[1..].iter().sum::<u32>() as i64;
        if finite_degree != self.pole_orders[0] as i64 {
            return Err(Error::invalid("pole order at ∞ does not balance the finite poles"));
        }
        Ok(())
    }

    fn points(&self) -> impl Iterator<Item = (&'static str, usize, Complex64)> + '_ {
        let tag = |name: &'static str, off: usize| move |(i, z): (usize, &Complex64)| (name, i + off, *z);
        self.zeros
            .iter()
            .enumerate()
            .map(tag("z", 1))
            .chain(self.ones.iter().enumerate().map(tag("o", 1)))
            .chain(self.poles.iter().enumerate().map(tag("p", 2)))
    }

    fn check_collisions(&self) -> Result<()> {
        let pts: Vec<_> = self.points().collect();
        for (a, rest) in pts.iter().enumerate() {
            for b in &pts[a + 1..] {
                if (rest.2 - b.2).norm() < EPS_COLLIDE {
                    return Err(Error::Degenerate(format!("{}{} and {}{} collide", rest.0, rest.1, b.0, b.1)));
                }
            }
        }
        Ok(())
    }

    /// The free unknowns `(λ, z₂…, o₂…, p₂…)`.
    pub fn unknowns(&self) -> Vec<Complex64> {
        std::iter::once(self.lambda)
            .chain(self.zeros[1..].iter().copied())
            .chain(self.ones[1..].iter().copied())
            .chain(self.poles.iter().copied())
            .collect()
    }

    pub fn with_unknowns(&self, x: &[Complex64]) -> Configuration {
        let mut c = self.clone();
        let (nz, no) = (c.zeros.len() - 1, c.ones.len() - 1);
        c.lambda = x[0];
        c.zeros[1..].copy_from_slice(&x[1..1 + nz]);
        c.ones[1..].copy_from_slice(&x[1 + nz..1 + nz + no]);
        c.poles.copy_from_slice(&x[1 + nz + no..]);
        c
    }

    /// Checks the exponent multisets against a passport.
    pub fn matches(&self, p: &Passport) -> bool {
        [&self.zero_orders, &self.one_orders, &self.pole_orders]
            .iter()
            .zip(&p.fibers)
            .all(|(v, f)| Fiber::new(v.to_vec()) == *f)
    }

    /// `F(z)`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        derivatives(self.lambda, &self.zero_factors(), z, 0)[0]
    }

    /// `1 + λ Π(z − oᵢ)^{d¹ᵢ} / Π(z − pⱼ)^{d^∞ⱼ}`, equal to `F` at a solution.
    pub fn eval_from_ones(&self, z: Complex64) -> Complex64 {
        derivatives(self.lambda, &self.one_factors(), z, 0)[0] + 1.0
    }

    fn zero_factors(&self) -> Vec<(Complex64, i32)> {
        self.zeros.iter().zip(&self.zero_orders).map(|(&a, &e)| (a, e as i32)).chain(self.pole_factors()).collect()
    }

    fn one_factors(&self) -> Vec<(Complex64, i32)> {
        self.ones.iter().zip(&self.one_orders).map(|(&a, &e)| (a, e as i32)).chain(self.pole_factors()).collect()
    }

    fn pole_factors(&self) -> impl Iterator<Item = (Complex64, i32)> + '_ {
        self.poles.iter().zip(&self.pole_orders[1..]).map(|(&a, &e)| (a, -(e as i32)))
    }
}

/// `G(z), G'(z), …, G⁽ᵐ⁾(z)` for `G = λ Π(z − a)^e`, through `G' = G·L`
/// with `L = Σ e/(z − a)`. `z` must avoid every `a`.
fn derivatives(lambda: Complex64, factors: &[(Complex64, i32)], z: Complex64, m: usize) -> Vec<Complex64> {
    let g0 = factors.iter().fold(lambda, |acc, &(a, e)| acc * (z - a).powi(e));
    // L⁽ʳ⁾ = Σ e (−1)^r r! / (z − a)^{r+1}
    let mut l = vec![Complex64::new(0.0, 0.0); m];
    let mut fact = 1.0;
    for (r, lr) in l.iter_mut().enumerate() {
        if r > 0 {
            fact *= r as f64;
        }
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        *lr = factors.iter().map(|&(a, e)| (z - a).powi(-(r as i32) - 1) * (e as f64 * sign * fact)).sum();
    }
    let mut g = vec![g0];
    for k in 0..m {
        // G⁽ᵏ⁺¹⁾ = Σ_j C(k, j) G⁽ʲ⁾ L⁽ᵏ⁻ʲ⁾
        let mut binom = 1.0;
        let mut next = Complex64::new(0.0, 0.0);
        for j in 0..=k {
            next += g[j] * l[k - j] * binom;
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
        g.push(next);
    }
    g
}

/// `Φ = (F(o₁) − 1, F′(o₁), …, F^{(d¹₁−1)}(o₁), F(o₂) − 1, …)`.
pub fn phi_residual(c: &Configuration) -> Result<Vec<Complex64>> {
    c.validate()?;
    c.check_collisions()?;
    Ok(phi_unchecked(c))
}

fn phi_unchecked(c: &Configuration) -> Vec<Complex64> {
    let factors = c.zero_factors();
    let mut out = Vec::with_capacity(c.degree() as usize);
    for (&o, &e) in c.ones.iter().zip(&c.one_orders) {
        let mut d = derivatives(c.lambda, &factors, o, e as usize - 1);
        d[0] -= 1.0;
        out.extend(d);
    }
    out
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Central-difference Jacobian of Φ in the free unknowns.
pub fn jacobian(c: &Configuration, h: f64) -> DMatrix<Complex64> {
    let x = c.unknowns();
    let rows = phi_unchecked(c).len();
    let mut j = DMatrix::zeros(rows, x.len());
    for k in 0..x.len() {
        let (mut plus, mut minus) = (x.clone(), x.clone());
        plus[k] += h;
        minus[k] -= h;
        let (fp, fm) = (phi_unchecked(&c.with_unknowns(&plus)), phi_unchecked(&c.with_unknowns(&minus)));
        for r in 0..rows {
            j[(r, k)] = (fp[r] - fm[r]) / (2.0 * h);
        }
    }
    j
}

fn numeric_rank(j: &DMatrix<Complex64>) -> usize {
    let sv = j.clone().svd(false, false).singular_values;
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > top * 1e-9 && s > 0.0).count()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewtonOptions {
    pub max_iter: usize,
    pub tol: f64,
    pub h_fd: f64,
    pub max_halvings: u32,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { max_iter: DEFAULT_MAX_ITER, tol: EPS_BELYI, h_fd: H_FD, max_halvings: MAX_HALVINGS }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub configuration: Configuration,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Residual norm before each step and after the last.
    pub history: Vec<f64>,
    /// Numeric rank of the final Jacobian against its column count.
    pub jacobian_rank: usize,
    pub unknowns: usize,
}

/// Damped Newton iteration from `initial`.
pub fn newton_solve(passport: &Passport, initial: &Configuration, opts: NewtonOptions) -> Result<SolveResult> {
    initial.validate()?;
    if !initial.matches(passport) {
        return Err(Error::invalid(format!("initial exponents do not match passport {passport}")));
    }
    if passport.genus != 0 {
        return Err(Error::Unsupported("only genus-0 passports have this parametrization".into()));
    }
    let mut c = initial.clone();
    c.check_collisions()?;
    let mut r = norm(&phi_unchecked(&c));
    let mut history = vec![r];
    let mut iterations = 0;
    while r >= opts.tol && iterations < opts.max_iter {
        let j = jacobian(&c, opts.h_fd);
        let phi = DVector::from_vec(phi_unchecked(&c));
        let step = j.lu().solve(&phi).ok_or(Error::SingularJacobian)?;
        if step.iter().any(|z| !z.is_finite()) {
            return Err(Error::SingularJacobian);
        }
        let x = c.unknowns();
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let trial: Vec<Complex64> = x.iter().zip(step.iter()).map(|(a, s)| a - s * scale).collect();
            let candidate = c.with_unknowns(&trial);
            if candidate.check_collisions().is_ok() {
                let rn = norm(&phi_unchecked(&candidate));
                if rn < r {
                    accepted = Some((candidate, rn));
                    break;
                }
            }
            scale /= 2.0;
        }
        iterations += 1;
        let Some((next, rn)) = accepted else { break };
        c = next;
        r = rn;
        history.push(r);
    }
    let j = jacobian(&c, opts.h_fd);
    Ok(SolveResult {
        residual: r,
        converged: r < opts.tol,
        iterations,
        history,
        jacobian_rank: numeric_rank(&j),
        unknowns: j.ncols(),
        configuration: c,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub degree: u32,
    pub residual: f64,
    pub points_checked: usize,
    /// Largest derivative that had to vanish.
    pub max_defect: f64,
}

/// Checks the multiplicities at Z and O through both product forms of F,
/// and the exponent bookkeeping against `passport`.
pub fn certify(result: &SolveResult, passport: &Passport) -> Result<CertificateReport> {
    let c = &result.configuration;
    let fail = |point: String, reason: String| Error::CertificationFailed { point, reason };
    c.validate().map_err(|e| fail("configuration".into(), e.to_string()))?;
    c.check_collisions().map_err(|e| fail("configuration".into(), e.to_string()))?;
    if !c.matches(passport) {
        return Err(fail("passport".into(), format!("exponents differ from {passport}")));
    }
    let d = c.degree();
    if c.zeros.len() + c.ones.len() + c.pole_orders.len() != d as usize + 2 {
        return Err(fail("passport".into(), "point count violates genus-0 Riemann–Hurwitz".into()));
    }
    let mut max_defect: f64 = 0.0;
    let mut checked = 0;
    // F − 1 vanishes to order d¹ at oᵢ through the Z form, and F to order d⁰ at zᵢ through the O form.
    let sides =
        [("o", &c.ones, &c.one_orders, c.zero_factors(), -1.0), ("z", &c.zeros, &c.zero_orders, c.one_factors(), 1.0)];
    for (name, points, orders, factors, shift) in sides {
        for (i, (&a, &e)) in points.iter().zip(orders.iter()).enumerate() {
            let mut g = derivatives(c.lambda, &factors, a, e as usize);
            g[0] += shift;
            let scale = 1.0 + g.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for (k, v) in g[..e as usize].iter().enumerate() {
                let defect = v.norm() / scale;
                max_defect = max_defect.max(defect);
                if defect > EPS_CERTIFY {
                    return Err(fail(
                        format!("{name}{}", i + 1),
                        format!("derivative {k} is {:.3e}, not zero", v.norm()),
                    ));
                }
            }
            if g[e as usize].norm() / scale < EPS_CERTIFY {
                return Err(fail(format!("{name}{}", i + 1), format!("multiplicity exceeds the declared {e}")));
            }
            checked += 1;
        }
    }
    Ok(CertificateReport { degree: d, residual: result.residual, points_checked: checked, max_defect })
}

/// Closed-form maps used as fixtures and demos: `z²`, `z³`,
/// `−2z²(z − 3/2)` and `−z²(z² − 2)`.
pub fn closed_form_fixtures() -> Vec<(String, Passport, Configuration)> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let w = c(-0.5, 3f64.sqrt() / 2.0);
    let r2 = 2f64.sqrt();
    let specs: Vec<(&str, Configuration)> = vec![
        (
            "z^2",
            Configuration {
                lambda: c(1.0, 0.0),
                zeros: vec![c(0.0, 0.0)],
                ones: vec![c(1.0, 0.0), c(-1.0, 0.0)],
                poles: vec![],
                zero_orders: vec![2],
                one_orders: vec![1, 1],
                pole_orders: vec![2],
            },
        ),
        (
            "z^3",
            Configuration {
                lambda: c(1.0, 0.0),
                zeros: vec![c(0.0, 0.0)],
                ones: vec![c(1.0, 0.0), w, w.conj()],
                poles: vec![],
                zero_orders: vec![3],
                one_orders: vec![1, 1, 1],
                pole_orders: vec![3],
            },
        ),
        (
            "-2z^2(z-3/2)",
            Configuration {
                lambda: c(-2.0, 0.0),
                zeros: vec![c(0.0, 0.0), c(1.5, 0.0)],
                ones: vec![c(1.0, 0.0), c(-0.5, 0.0)],
                poles: vec![],
                zero_orders: vec![2, 1],
                one_orders: vec![2, 1],
                pole_orders: vec![3],
            },
        ),
        (
            "-z^2(z^2-2)",
            Configuration {
                lambda: c(-1.0, 0.0),
                zeros: vec![c(0.0, 0.0), c(r2, 0.0), c(-r2, 0.0)],
                ones: vec![c(1.0, 0.0), c(-1.0, 0.0)],
                poles: vec![],
                zero_orders: vec![2, 1, 1],
                one_orders: vec![2, 2],
                pole_orders: vec![4],
            },
        ),
    ];
    specs
        .into_iter()
        .map(|(name, conf)| {
            let p =
                Passport::from_fibers([conf.zero_orders.clone(), conf.one_orders.clone(), conf.pole_orders.clone()])
                    .expect("fixture passports are valid");
            (name.to_string(), p, conf)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fixture(name: &str) -> (Passport, Configuration) {
        let (_, p, c) = closed_form_fixtures().into_iter().find(|(n, _, _)| n == name).unwrap();
        (p, c)
    }

    fn perturbed(c: &Configuration, seed: u64, size: f64) -> Configuration {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<Complex64> = c
            .unknowns()
            .into_iter()
            .map(|z| z + Complex64::new(rng.random_range(-size..size), rng.random_range(-size..size)))
            .collect();
        c.with_unknowns(&x)
    }

    #[test]
    fn exact_maps_have_zero_residual() {
        for (name, _, c) in closed_form_fixtures() {
            assert!(norm(&phi_residual(&c).unwrap()) < 1e-12, "{name}");
        }
    }

    #[test]
    fn perturbation_residual_scale() {
        let (_, c) = fixture("z^3");
        let mut moved = c.clone();
        moved.ones[1] += 1e-3;
        let r = norm(&phi_residual(&moved).unwrap());
        assert!(r > 0.0 && r < 1e-1);
    }

    #[test]
    fn collision_is_degenerate() {
        let (_, mut c) = fixture("-2z^2(z-3/2)");
        c.zeros[1] = Complex64::new(1.0, 0.0);
        assert!(matches!(phi_residual(&c), Err(Error::Degenerate(_))));
    }

    #[test]
    fn newton_recovers_fixtures() {
        for (name, p, exact) in closed_form_fixtures() {
            let start = perturbed(&exact, 7, 1e-2);
            let res = newton_solve(&p, &start, NewtonOptions::default()).unwrap();
            assert!(res.converged && res.residual < 1e-10, "{name}");
            let gap = res
                .configuration
                .unknowns()
                .iter()
                .zip(exact.unknowns())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(gap < 1e-8, "{name}: {gap}");
            assert_eq!(res.jacobian_rank, res.unknowns);
            certify(&res, &p).unwrap();
        }
    }

    #[test]
    fn square_map_from_shifted_start() {
        let (p, mut c) = fixture("z^2");
        c.ones[1] = Complex64::new(-1.1, 0.0);
        let res = newton_solve(&p, &c, NewtonOptions::default()).unwrap();
        assert!(res.converged);
        assert!((res.configuration.ones[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn quadratic_convergence() {
        for (name, p, exact) in closed_form_fixtures() {
            let res = newton_solve(&p, &perturbed(&exact, 11, 1e-2), NewtonOptions::default()).unwrap();
            let h = &res.history;
            for w in h.windows(2).filter(|w| w[0] < 1e-2 && w[1] > 1e-13) {
                assert!(w[1] / (w[0] * w[0]) < 1e3, "{name}: {h:?}");
            }
        }
    }

    #[test]
    fn certification_negative_controls() {
        let (p, exact) = fixture("-2z^2(z-3/2)");
        let res = newton_solve(&p, &exact, NewtonOptions::default()).unwrap();
        assert!(certify(&res, &p).is_ok());

        let mut wrong = res.clone();
        wrong.configuration.zero_orders = vec![1, 2];
        wrong.configuration.zeros = vec![Complex64::new(0.0, 0.0), Complex64::new(1.5, 0.0)];
        let wrong_passport = Passport::from_fibers([vec![1, 2], vec![2, 1], vec![3]]).unwrap();
        assert!(
            matches!(certify(&wrong, &wrong_passport), Err(Error::CertificationFailed { point, .. }) if point.starts_with('o') || point.starts_with('z'))
        );

        let moved = SolveResult { configuration: perturbed(&exact, 3, 1e-3), converged: false, ..res };
        assert!(matches!(certify(&moved, &p), Err(Error::CertificationFailed { .. })));
    }

    #[test]
    fn solved_map_matches_one_form() {
        let (p, exact) = fixture("-z^2(z^2-2)");
        let res = newton_solve(&p, &perturbed(&exact, 5, 1e-2), NewtonOptions::default()).unwrap();
        let c = &res.configuration;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let z = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let (f, g) = (c.eval(z), c.eval_from_ones(z));
            assert!((f - g).norm() <= 1e-8 * f.norm().max(1.0), "{z}");
        }
    }

    proptest! {
        #[test]
        fn jacobian_matches_directional_difference(seed in 0u64..1000, vr in -1.0f64..1.0, vi in -1.0f64..1.0) {
            let (_, exact) = fixture("-z^2(z^2-2)");
            let c = perturbed(&exact, seed, 0.05);
            let j = jacobian(&c, H_FD);
            let v: Vec<Complex64> = (0..c.unknowns().len()).map(|k| Complex64::new(vr, vi) * (k as f64 + 1.0)).collect();
            let jv = &j * DVector::from_vec(v.clone());
            let h = 1e-5;
            let x = c.unknowns();
            let shift = |s: f64| -> Vec<Complex64> { x.iter().zip(&v).map(|(a, b)| a + b * s).collect() };
            let fp = phi_unchecked(&c.with_unknowns(&shift(h)));
            let fm = phi_unchecked(&c.with_unknowns(&shift(-h)));
            let scale = 1.0 + jv.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for (r, (a, b)) in fp.iter().zip(&fm).enumerate() {
                let fd = (a - b) / (2.0 * h);
                prop_assert!((fd - jv[r]).norm() / scale < 1e-6);
            }
        }
    }
}
