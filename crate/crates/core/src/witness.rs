//! Certified sup-norm bounds for modulated bumps and the ratio evidence
//! against weak-coercivity estimates.
//!
//! The reference bump is `psi(x) = prod_k phi(x_k)` with
//! `phi(t) = exp(-1/(1 - t^2))` on `(-1, 1)`. Since `psi` is a product,
//! `sup |d^alpha psi| = prod_k sup |phi^(alpha_k)|`, so only a
//! one-dimensional table is needed. With `s = 1 - t^2`,
//! `phi^(m) = p_m(t) s^(-2m) phi` and
//! `p_(m+1) = p_m' s^2 + 4 m t s p_m - 2 t p_m`.

use std::collections::HashMap;
use std::io::Write;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{rat, rat_to_f64, GaussianRational, Rational};
use crate::interval::Interval;
use crate::poly::{MultiIndex, OperatorSystem, Polynomial};
use crate::univariate::QPoly;

/// Cells per unit interval in the tabulation.
const CELLS: usize = 10_000;

fn up(x: f64) -> f64 {
    x.next_up()
}

fn exp_enclosure(x: Interval) -> Interval {
    let lo = (x.lo.exp() * (1.0 - 4.0 * f64::EPSILON)).next_down().max(0.0);
    let hi = (x.hi.exp() * (1.0 + 4.0 * f64::EPSILON)).next_up();
    Interval { lo, hi }
}

fn horner(p: &QPoly, x: Interval) -> Interval {
    p.coeffs().iter().rev().fold(Interval::point(0.0), |acc, c| acc * x + Interval::from_rational(c))
}

/// The numerators `p_0, ..., p_max`.
fn derivative_numerators(max: u32) -> Vec<QPoly> {
    let t = QPoly::x();
    let s = QPoly::new(vec![Rational::one(), Rational::zero(), -Rational::one()]);
    let s2 = &s * &s;
    let mut out = vec![QPoly::one()];
    for m in 0..max {
        let p = &out[m as usize];
        let a = &p.derivative() * &s2;
        let b = (&(&t * &s) * p).scale(&rat(4 * m as i64, 1));
        let c = (&t * p).scale(&rat(2, 1));
        out.push(&(&a + &b) - &c);
    }
    out
}

/// Certified upper bound of `sup_{(-1,1)} |phi^(m)|`.
fn sup_bound(p: &QPoly, m: u32) -> f64 {
    let two_m = 2 * m as i32;
    let s0 = 1.0 / (16.0 * (m.max(1) as f64));
    let tb = (1.0 - s0).sqrt().next_down();
    // Tail: for s <= s0 <= 1/(2m), s^(-2m) exp(-1/s) is increasing in s.
    let s_tail = 1.0 - tb * tb;
    let s_tail_hi = up(s_tail + 4.0 * f64::EPSILON);
    let p_max = horner(p, Interval::new(tb, 1.0)).mag();
    let g = exp_enclosure(Interval::point(-1.0 / s_tail_hi)).hi / s_tail_hi.powi(two_m).next_down();
    let mut best = up(p_max * up(g));
    let h = tb / CELLS as f64;
    for i in 0..CELLS {
        let lo = (i as f64 * h).next_down().max(0.0);
        let hi = if i + 1 == CELLS { tb } else { ((i + 1) as f64 * h).next_up() };
        let x = Interval::new(lo, hi);
        let s = Interval::point(1.0) - x.powi(2);
        let s = Interval { lo: s.lo.max(s_tail * 0.5), hi: s.hi.min(1.0) };
        let inv = Interval { lo: (1.0 / s.hi).next_down(), hi: (1.0 / s.lo).next_up() };
        let e = exp_enclosure(-inv);
        let pv = horner(p, x).mag();
        let v = up(up(pv * up(inv.hi.powi(two_m))) * e.hi);
        best = best.max(v);
    }
    best
}

struct Table1D {
    bounds: Vec<f64>,
    at_zero: Vec<Rational>,
}

fn table(max: u32) -> Arc<Table1D> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Table1D>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("table cache").get(&max) {
        return t.clone();
    }
    let ps = derivative_numerators(max);
    let t = Arc::new(Table1D {
        bounds: ps.iter().enumerate().map(|(m, p)| sup_bound(p, m as u32)).collect(),
        at_zero: ps.iter().map(|p| p.coeff(0)).collect(),
    });
    cache.lock().expect("table cache").insert(max, t.clone());
    t
}

/// Sup-norm table of the reference bump in dimension `n` up to order
/// `max_order` per coordinate.
#[derive(Clone)]
pub struct BumpProfile {
    pub dim: usize,
    pub max_order: u32,
    table: Arc<Table1D>,
}

impl std::fmt::Debug for BumpProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BumpProfile").field("dim", &self.dim).field("max_order", &self.max_order).finish()
    }
}

impl BumpProfile {
    pub fn new(dim: usize, max_order: u32) -> Self {
        Self { dim, max_order, table: table(max_order) }
    }

    /// Upper bound of `sup |d^alpha psi|`.
    pub fn bound(&self, alpha: &MultiIndex) -> Result<f64> {
        if alpha.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: alpha.len() });
        }
        let mut b = 1.0f64;
        for &a in alpha.exps() {
            if a > self.max_order {
                return Err(Error::OrderExceedsTable { order: a, max: self.max_order });
            }
            b = up(b * self.table.bounds[a as usize]);
        }
        Ok(b)
    }

    /// Exact `phi^(m)(0) / phi(0)`.
    pub fn derivative_at_zero_ratio(&self, m: u32) -> Rational {
        self.table.at_zero[m as usize].clone()
    }

    /// `psi(0) = e^(-n)`, rounded down.
    pub fn psi_at_zero(&self) -> f64 {
        ((-(self.dim as f64)).exp() * (1.0 - 4.0 * f64::EPSILON)).next_down()
    }

    /// `|d^alpha psi(0)|` as a float.
    pub fn value_at_zero(&self, alpha: &MultiIndex) -> f64 {
        let r: Rational = alpha.exps().iter().map(|&a| self.derivative_at_zero_ratio(a)).product();
        rat_to_f64(&r.abs()) * (-(self.dim as f64)).exp()
    }
}

fn modulus_up(z: &GaussianRational) -> f64 {
    up(up(rat_to_f64(&z.norm_sqr())).sqrt())
}

fn modulus_down(z: &GaussianRational) -> f64 {
    rat_to_f64(&z.norm_sqr()).next_down().max(0.0).sqrt().next_down().max(0.0)
}

fn r_power_down(r: &Rational, k: u32) -> f64 {
    up(rat_to_f64(&(Rational::one() / r).pow(k as i32)))
}

/// Upper bound of `sup |P(D)(psi(x/r) e^{i<x,xi>})|` via
/// `sum_alpha (1/alpha!) |d^alpha P(xi)| r^-|alpha| sup |d^alpha psi|`.
pub fn leibniz_upper_bound(p: &Polynomial, psi: &BumpProfile, xi: &[Rational], r: &Rational) -> Result<f64> {
    let n = p.dim();
    if xi.len() != n || psi.dim != n {
        return Err(Error::DimensionMismatch { expected: n, got: xi.len().min(psi.dim) });
    }
    if !r.is_positive() {
        return Err(Error::PreconditionViolated("scale r must be positive".into()));
    }
    let deg = p.total_degree().unwrap_or(0);
    if deg > psi.max_order {
        return Err(Error::OrderExceedsTable { order: deg, max: psi.max_order });
    }
    let mut total = 0.0f64;
    for d in 0..=deg {
        for alpha in MultiIndex::all_of_degree(n, d) {
            let dp = p.derivative(&alpha)?;
            if dp.is_zero() {
                continue;
            }
            let v = dp.evaluate_rational(xi)?;
            if v.is_zero() {
                continue;
            }
            let coef = modulus_up(&v) / alpha.factorial() as f64;
            let term = up(up(up(coef) * r_power_down(r, d)) * psi.bound(&alpha)?);
            total = up(total + term);
        }
    }
    Ok(total)
}

/// Certified lower bound of `sup |D^alpha (psi(x/r) e^{i<x,xi>})|` by the
/// exact value at `x = 0`:
/// `sum_beta C(alpha, beta) (-i)^|beta| r^-|beta| d^beta psi(0) xi^(alpha - beta)`.
fn derivative_lower_bound(alpha: &MultiIndex, psi: &BumpProfile, xi: &[Rational], r: &Rational) -> Result<f64> {
    let mono = Polynomial::monomial(alpha.clone(), GaussianRational::one());
    let minus_i = -GaussianRational::i();
    let mut total = GaussianRational::zero();
    for beta in alpha.below() {
        let shape: Rational = beta.exps().iter().map(|&b| psi.derivative_at_zero_ratio(b)).product();
        if shape.is_zero() {
            continue;
        }
        let scale = (Rational::one() / r).pow(beta.degree() as i32) * shape / Rational::from_integer(beta.factorial().into());
        let v = mono.derivative(&beta)?.evaluate_rational(xi)?;
        let mut term = &v * &GaussianRational::from_rational(scale);
        term = &term * &minus_i.pow(beta.degree());
        total += &term;
    }
    Ok((modulus_down(&total) * psi.psi_at_zero()).next_down().max(0.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioStep {
    pub t: f64,
    pub r: f64,
    /// Lower bound of `sup |D^alpha f|`.
    pub lower: f64,
    /// Upper bound of `sum_j sup |P_j(D) f| + sup |f|`.
    pub upper: f64,
    /// Lower bound of the ratio; zero when `lower` is not positive.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioEvidence {
    pub alpha: MultiIndex,
    pub direction: Vec<f64>,
    pub steps: Vec<RatioStep>,
    /// Least-squares slope of `log ratio` against `log t` over steps with a
    /// positive ratio; `None` with fewer than two such steps.
    pub growth_exponent: Option<f64>,
    /// Exponent above [`FALSIFY_EXPONENT`] across at least four doublings.
    pub falsifies: bool,
}

pub const FALSIFY_EXPONENT: f64 = 0.1;

impl RatioEvidence {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,lower,upper,ratio")?;
        for s in &self.steps {
            writeln!(w, "{:e},{:e},{:e},{:e}", s.t, s.lower, s.upper, s.ratio)?;
        }
        Ok(())
    }
}

fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}

/// First schedule exponent: `t_k = 2^(SCHEDULE_START + k)`.
pub const SCHEDULE_START: u32 = 4;

/// Ratio evidence for `f_t(x) = psi(x/t) e^{i t <x, xi0>}`,
/// `t = 2^(SCHEDULE_START + k)` for `k = 1..=steps`. The direction is used as given (not normalized); it
/// must be a common zero of the principal parts and `|alpha| <= l - 1`.
pub fn falsify_weak_coercivity(s: &OperatorSystem, alpha: &MultiIndex, direction: &[Rational], steps: u32) -> Result<RatioEvidence> {
    let l = s.isotropic_order()?;
    let n = s.dim();
    if direction.len() != n || alpha.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: if direction.len() != n { direction.len() } else { alpha.len() } });
    }
    if direction.iter().all(Zero::is_zero) {
        return Err(Error::ZeroPoint);
    }
    if alpha.degree() + 1 > l {
        return Err(Error::AlphaTooHigh { order: alpha.degree(), max: l.saturating_sub(1) });
    }
    let parts = s.principal_parts();
    let dnorm = direction.iter().map(|d| rat_to_f64(d).abs()).fold(0.0, f64::max);
    let mut residual = 0.0;
    let mut scale = 0.0;
    for (pl, p) in parts.iter().zip(s.operators()) {
        residual += modulus_up(&pl.evaluate_rational(direction)?);
        scale += p.terms().map(|(_, c)| c.to_complex().norm()).sum::<f64>() * dnorm.powi(l as i32);
    }
    if residual > 1e-9 * scale.max(1.0) {
        return Err(Error::DirectionNotAZero { residual });
    }
    let order = s.order().max(alpha.degree());
    let psi = BumpProfile::new(n, order.max(1));
    let sup_f = psi.bound(&MultiIndex::zero(n))?;
    let mut out = Vec::new();
    for k in 1..=steps {
        let t = Rational::from_integer(num_bigint::BigInt::from(2u8).pow(SCHEDULE_START + k));
        let xi: Vec<Rational> = direction.iter().map(|d| d * &t).collect();
        let lower = derivative_lower_bound(alpha, &psi, &xi, &t)?;
        let mut upper = sup_f;
        for p in s.operators() {
            upper = up(upper + leibniz_upper_bound(p, &psi, &xi, &t)?);
        }
        let ratio = if lower > 0.0 { (lower / upper).next_down() } else { 0.0 };
        let tf = rat_to_f64(&t);
        out.push(RatioStep { t: tf, r: tf, lower, upper, ratio });
    }
    let logs: Vec<(f64, f64)> = out.iter().filter(|s| s.ratio > 0.0).map(|s| (s.t.ln(), s.ratio.ln())).collect();
    let growth_exponent = fit_slope(&logs);
    let falsifies = logs.len() >= 4 && growth_exponent.is_some_and(|e| e > FALSIFY_EXPONENT);
    Ok(RatioEvidence {
        alpha: alpha.clone(),
        direction: direction.iter().map(rat_to_f64).collect(),
        steps: out,
        growth_exponent,
        falsifies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_operator;

    fn p(s: &str, n: usize) -> Polynomial {
        parse_operator(s, Some(n)).unwrap()
    }

    #[test]
    fn table_is_consistent() {
        let b = BumpProfile::new(1, 6);
        let e1 = (-1.0f64).exp();
        let b0 = b.bound(&MultiIndex(vec![0])).unwrap();
        assert!(b0 >= e1 && b0 < e1 * 1.001);
        for m in 0..=6 {
            let at0 = b.value_at_zero(&MultiIndex(vec![m]));
            assert!(b.bound(&MultiIndex(vec![m])).unwrap() >= at0, "order {m}");
        }
        assert_eq!(b.derivative_at_zero_ratio(2), rat(-2, 1));
        assert!(matches!(b.bound(&MultiIndex(vec![7])), Err(Error::OrderExceedsTable { .. })));
    }

    #[test]
    fn table_dominates_sampled_derivatives() {
        let ps = derivative_numerators(4);
        let b = BumpProfile::new(1, 4);
        for (m, q) in ps.iter().enumerate() {
            let qf: Vec<f64> = q.coeffs().iter().map(rat_to_f64).collect();
            let mut sup = 0.0f64;
            for i in 0..20_000 {
                let t = -1.0 + (i as f64 + 0.5) / 10_000.0;
                let s = 1.0 - t * t;
                let pv = qf.iter().rev().fold(0.0, |acc, c| acc * t + c);
                sup = sup.max((pv / s.powi(2 * m as i32) * (-1.0 / s).exp()).abs());
            }
            let bound = b.bound(&MultiIndex(vec![m as u32])).unwrap();
            assert!(bound >= sup && bound < 1.05 * sup + 1e-12, "order {m}: {bound} vs {sup}");
        }
    }

    #[test]
    fn leibniz_examples() {
        let psi = BumpProfile::new(2, 4);
        let one = Polynomial::one(2);
        let xi = [rat(3, 1), rat(-5, 2)];
        let b0 = psi.bound(&MultiIndex::zero(2)).unwrap();
        let got = leibniz_upper_bound(&one, &psi, &xi, &rat(7, 1)).unwrap();
        assert!(got >= b0 && got <= b0 * (1.0 + 1e-14));
        let m = p("D1^2*D2", 2);
        let zero = [Rational::zero(), Rational::zero()];
        for r in [rat(1, 1), rat(2, 1), rat(8, 1)] {
            let got = leibniz_upper_bound(&m, &psi, &zero, &r).unwrap();
            let exact = psi.bound(&MultiIndex(vec![2, 1])).unwrap() / rat_to_f64(&r).powi(3);
            assert!(got >= exact && got <= exact * (1.0 + 1e-14), "{got} vs {exact}");
        }
        let d = p("D1^2 - D2^2", 2);
        let t = rat(4, 1);
        let got = leibniz_upper_bound(&d, &psi, &[t.clone(), t.clone()], &t).unwrap();
        let b = |a: u32, c: u32| psi.bound(&MultiIndex(vec![a, c])).unwrap();
        let expect = (2.0 * 4.0 / 4.0) * (b(1, 0) + b(0, 1)) + (1.0 / 16.0) * (b(2, 0) + b(0, 2));
        assert!((got - expect).abs() <= 1e-12 * expect);
        assert!(matches!(leibniz_upper_bound(&p("D1^5", 2), &psi, &xi, &t), Err(Error::OrderExceedsTable { .. })));
    }

    #[test]
    fn dalembert_grows_malgrange_does_not() {
        let s = OperatorSystem::single(p("D1^2 - D2^2", 2));
        let e = falsify_weak_coercivity(&s, &MultiIndex(vec![1, 0]), &[rat(1, 1), rat(1, 1)], 8).unwrap();
        let g = e.growth_exponent.unwrap();
        assert!((0.8..=1.2).contains(&g), "{g}");
        assert!(e.falsifies);
        let m = OperatorSystem::single(p("D1*D2 + i*D1 + i*D2 - 1", 2));
        let e = falsify_weak_coercivity(&m, &MultiIndex(vec![1, 0]), &[rat(1, 1), rat(0, 1)], 10).unwrap();
        assert!(e.growth_exponent.unwrap() < 0.1, "{:?}", e.growth_exponent);
        assert!(!e.falsifies);
    }

    #[test]
    fn preconditions() {
        let s = OperatorSystem::single(p("D1^2 + D2^2", 2));
        assert!(matches!(
            falsify_weak_coercivity(&s, &MultiIndex(vec![1, 0]), &[rat(1, 1), rat(1, 1)], 4),
            Err(Error::DirectionNotAZero { .. })
        ));
        let s = OperatorSystem::single(p("D1^2 - D2^2", 2));
        assert!(matches!(
            falsify_weak_coercivity(&s, &MultiIndex(vec![1, 1]), &[rat(1, 1), rat(1, 1)], 4),
            Err(Error::AlphaTooHigh { .. })
        ));
    }
}
