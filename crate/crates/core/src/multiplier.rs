//! Grid evidence for the sufficient L1-multiplier conditions on rational
//! symbols.
//!
//! Derivatives are plain partials `d/dxi_k`; the conditions only involve
//! moduli, so the `(-i)^|alpha|` factor of `D = -i d/dx` is irrelevant.
//! Every pass is heuristic: a supremum over finitely many points never
//! proves boundedness.

use std::cmp::Ordering;
use std::io::Write;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::ellipticity::{is_elliptic_with, SearchConfig};
use crate::error::{Error, Result};
use crate::gaussian::{f64_to_rat, rat_to_f64, serialize_rational, GaussianRational, Rational};
use crate::numeric::{minimize_on_sphere, sphere_points, CompiledPoly, MinimizerConfig, SumOfSquares};
use crate::poly::{MultiIndex, OperatorSystem, Polynomial};

/// Ratio bound between consecutive nested-radius suprema that counts as a
/// plateau.
pub const PLATEAU_RATIO: f64 = 1.02;

/// `numerator / prod factor^exponent`, evaluated only for `|xi| >= cutoff`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalSymbol {
    pub numerator: Polynomial,
    pub factors: Vec<(Polynomial, u32)>,
    #[serde(serialize_with = "serialize_rational")]
    pub cutoff: Rational,
}

impl RationalSymbol {
    /// Checks numerically that no factor vanishes on shells `|xi| = r 2^k`.
    pub fn new(numerator: Polynomial, factors: Vec<(Polynomial, u32)>, cutoff: Rational) -> Result<Self> {
        let n = numerator.dim();
        for (f, _) in &factors {
            if f.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: f.dim() });
            }
            if f.is_zero() {
                return Err(Error::DenominatorVanishes);
            }
        }
        if cutoff.is_negative() {
            return Err(Error::PreconditionViolated("cutoff radius must be non-negative".into()));
        }
        let factors: Vec<(Polynomial, u32)> = factors.into_iter().filter(|(f, e)| *e > 0 && *f != Polynomial::one(n)).collect();
        let s = Self { numerator, factors, cutoff };
        s.check_denominator()?;
        Ok(s)
    }

    pub fn quotient(numerator: Polynomial, denominator: Polynomial, cutoff: Rational) -> Result<Self> {
        Self::new(numerator, vec![(denominator, 1)], cutoff)
    }

    fn check_denominator(&self) -> Result<()> {
        let n = self.dim();
        let r0 = rat_to_f64(&self.cutoff).max(1e-3);
        let cfg = MinimizerConfig { starts: 24, max_iter: 200, ..MinimizerConfig::default() };
        for (f, _) in &self.factors {
            if f.is_constant() {
                continue;
            }
            for k in 0..=12 {
                let r = f64_to_rat(r0 * 2f64.powi(k));
                let subs: Vec<Polynomial> =
                    (0..n).map(|j| Polynomial::var(n, j).scale(&GaussianRational::from_rational(r.clone()))).collect();
                let g = f.substitute(&subs)?;
                let big = g.terms().map(|(_, c)| c.to_complex().norm()).fold(0.0, f64::max);
                let g = g.scale(&GaussianRational::from_rational(f64_to_rat(1.0 / big)));
                let min = minimize_on_sphere(&SumOfSquares::new(&[g]), &cfg, &[]);
                if min.first().is_some_and(|m| m.value <= 1e-24) {
                    return Err(Error::DenominatorVanishes);
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.numerator.dim()
    }

    pub fn denominator(&self) -> Polynomial {
        let n = self.dim();
        self.factors.iter().fold(Polynomial::one(n), |acc, (f, e)| &acc * &f.pow(*e))
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Same function, tested by cross multiplication.
    pub fn same_function(&self, other: &RationalSymbol) -> bool {
        &self.numerator * &other.denominator() == &other.numerator * &self.denominator()
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        CompiledSymbol::new(self).eval(x)
    }

    pub fn mul(&self, other: &RationalSymbol) -> Result<RationalSymbol> {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        let cutoff = self.cutoff.clone().max(other.cutoff.clone());
        let mut s = RationalSymbol { numerator: &self.numerator * &other.numerator, factors, cutoff };
        s.merge_factors();
        s.cancel();
        Ok(s)
    }

    fn merge_factors(&mut self) {
        let mut merged: Vec<(Polynomial, u32)> = Vec::new();
        for (f, e) in self.factors.drain(..) {
            match merged.iter_mut().find(|(g, _)| *g == f) {
                Some((_, m)) => *m += e,
                None => merged.push((f, e)),
            }
        }
        self.factors = merged;
    }

    fn cancel(&mut self) {
        if self.numerator.is_zero() {
            self.factors.clear();
            return;
        }
        for (f, e) in &mut self.factors {
            while *e > 0 {
                match self.numerator.div_exact(f) {
                    Some(q) => {
                        self.numerator = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.factors.retain(|(_, e)| *e > 0);
    }

    fn partial(&self, k: usize) -> Result<RationalSymbol> {
        let n = self.dim();
        let dn = self.numerator.differentiate(k)?;
        let mut rest = Polynomial::one(n);
        let mut moving = Vec::new();
        for (i, (f, _)) in self.factors.iter().enumerate() {
            let df = f.differentiate(k)?;
            if !df.is_zero() {
                rest = &rest * f;
                moving.push((i, df));
            }
        }
        let mut numerator = &dn * &rest;
        for (i, df) in &moving {
            let e = self.factors[*i].1;
            let mut others = Polynomial::one(n);
            for (m, _) in &moving {
                if m != i {
                    others = &others * &self.factors[*m].0;
                }
            }
            let term = (&(&self.numerator * df) * &others).scale(&GaussianRational::from_int(e as i64));
            numerator = &numerator - &term;
        }
        let mut factors = self.factors.clone();
        for (i, _) in &moving {
            factors[*i].1 += 1;
        }
        let mut s = RationalSymbol { numerator, factors, cutoff: self.cutoff.clone() };
        s.cancel();
        Ok(s)
    }
}

/// `d^alpha Phi` by repeated quotient rule with factor cancellation.
pub fn symbolic_partial(phi: &RationalSymbol, alpha: &MultiIndex) -> Result<RationalSymbol> {
    if alpha.len() != phi.dim() {
        return Err(Error::DimensionMismatch { expected: phi.dim(), got: alpha.len() });
    }
    let mut s = phi.clone();
    for (k, &a) in alpha.exps().iter().enumerate() {
        for _ in 0..a {
            s = s.partial(k)?;
        }
    }
    Ok(s)
}

struct CompiledSymbol {
    num: CompiledPoly,
    factors: Vec<(CompiledPoly, i32)>,
}

impl CompiledSymbol {
    fn new(s: &RationalSymbol) -> Self {
        Self {
            num: CompiledPoly::new(&s.numerator),
            factors: s.factors.iter().map(|(f, e)| (CompiledPoly::new(f), *e as i32)).collect(),
        }
    }

    fn eval(&self, x: &[f64]) -> Complex64 {
        let mut v = self.num.eval(x);
        for (f, e) in &self.factors {
            v /= f.eval(x).powi(*e);
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    /// Axis values `+-2^k` for `k` in this range, plus zero.
    pub axis_exponents: (i32, i32),
    /// Nested radii `2^k`.
    pub radius_exponents: (i32, i32),
    pub shell_points: usize,
    pub seed: u64,
    /// Points with `|xi|` below this are skipped.
    pub min_norm: f64,
    /// Cap on the crossed axis grid; the exponent stride grows until it fits.
    pub max_axis_points: usize,
    pub record_samples: bool,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            axis_exponents: (-4, 12),
            radius_exponents: (4, 12),
            shell_points: 10_000,
            seed: 0x5eed,
            min_norm: 0.0,
            max_axis_points: 200_000,
            record_samples: false,
        }
    }
}

impl GridSpec {
    fn radii(&self) -> Vec<f64> {
        (self.radius_exponents.0..=self.radius_exponents.1).map(|k| 2f64.powi(k)).collect()
    }

    fn axis_values(&self, n: usize) -> Vec<f64> {
        let (lo, hi) = self.axis_exponents;
        let mut stride = 1;
        loop {
            let mut vals = vec![0.0];
            let mut k = lo;
            while k <= hi {
                let v = 2f64.powi(k);
                vals.push(v);
                vals.push(-v);
                k += stride;
            }
            let total = (vals.len() as f64).powi(n as i32);
            if total <= self.max_axis_points as f64 || vals.len() <= 3 {
                return vals;
            }
            stride += 1;
        }
    }

    /// Grid points with the index of the first nested radius containing them.
    fn points(&self, n: usize) -> Vec<(Vec<f64>, usize)> {
        let radii = self.radii();
        let bucket = |x: &[f64]| -> Option<usize> {
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if r < self.min_norm {
                return None;
            }
            radii.iter().position(|&big| r <= big * (1.0 + 1e-12))
        };
        let mut out = Vec::new();
        let vals = self.axis_values(n);
        let mut idx = vec![0usize; n];
        'outer: loop {
            let x: Vec<f64> = idx.iter().map(|&i| vals[i]).collect();
            if let Some(b) = bucket(&x) {
                out.push((x, b));
            }
            for d in 0..n {
                idx[d] += 1;
                if idx[d] < vals.len() {
                    continue 'outer;
                }
                idx[d] = 0;
            }
            break;
        }
        let dirs = sphere_points(self.shell_points, n, self.seed);
        for (b, &r) in radii.iter().enumerate() {
            if r < self.min_norm {
                continue;
            }
            out.extend(dirs.iter().map(|d| (d.iter().map(|v| v * r).collect(), b)));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusSup {
    pub radius: f64,
    pub sup: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    /// Derivative multi-index in `{0,1}^n`; zero for the undifferentiated
    /// condition.
    pub alpha: MultiIndex,
    pub sup: f64,
    pub worst_point: Vec<f64>,
    pub radii_growth: Vec<RadiusSup>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum CertVerdict {
    PassHeuristic,
    FailWitness { alpha: MultiIndex, point: Vec<f64>, trend: Vec<RadiusSup> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleRow {
    pub point: Vec<f64>,
    pub alpha: MultiIndex,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertReport {
    #[serde(serialize_with = "serialize_opt_rational")]
    pub delta: Option<Rational>,
    /// Largest supremum over all conditions.
    pub a_delta_estimate: f64,
    pub conditions: Vec<ConditionReport>,
    pub radii_growth: Vec<RadiusSup>,
    pub verdict: CertVerdict,
    pub label: &'static str,
    pub points: usize,
    #[serde(skip)]
    pub samples: Vec<SampleRow>,
}

fn serialize_opt_rational<S: serde::Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => serialize_rational(q, s),
        None => s.serialize_none(),
    }
}

impl CertReport {
    pub fn passes(&self) -> bool {
        self.verdict == CertVerdict::PassHeuristic
    }

    /// Writes `point, condition, value` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "point,condition,value")?;
        for r in &self.samples {
            let p: Vec<String> = r.point.iter().map(|v| format!("{v:e}")).collect();
            let a: Vec<String> = r.alpha.exps().iter().map(u32::to_string).collect();
            writeln!(w, "\"{}\",\"{}\",{:e}", p.join(" "), a.join(" "), r.value)?;
        }
        Ok(())
    }
}

fn binary_indices(n: usize) -> Vec<MultiIndex> {
    (0..1u32 << n).map(|m| MultiIndex((0..n).map(|k| (m >> k) & 1).collect())).collect()
}

fn is_plateau(trend: &[RadiusSup]) -> bool {
    if trend.iter().any(|t| !t.sup.is_finite()) {
        return false;
    }
    let k = trend.len();
    if k < 2 {
        return true;
    }
    let from = k.saturating_sub(4);
    trend[from..].windows(2).all(|w| w[0].sup == 0.0 && w[1].sup == 0.0 || w[1].sup <= PLATEAU_RATIO * w[0].sup)
}

/// Radii where the nested supremum strictly increases.
fn increasing_trend(trend: &[RadiusSup]) -> Vec<RadiusSup> {
    let mut out: Vec<RadiusSup> = Vec::new();
    for t in trend {
        if out.last().is_none_or(|l| t.sup > l.sup) {
            out.push(t.clone());
        }
    }
    out
}

fn better(v: f64, p: &[f64], best: f64, bp: &[f64]) -> bool {
    match v.partial_cmp(&best) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Equal) => p.partial_cmp(bp) == Some(Ordering::Less),
        None => v.is_nan() && !best.is_nan(),
        _ => false,
    }
}

/// Per-condition nested suprema of `weight_c(x) * |value_c(x)|` over the grid.
fn sup_report<F>(n: usize, grid: &GridSpec, conditions: &[MultiIndex], eval: F, delta: Option<Rational>) -> CertReport
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let points = grid.points(n);
    let radii = grid.radii();
    let nc = conditions.len();
    let threads = std::thread::available_parallelism().map_or(1, |t| t.get()).min(16);
    let chunk = points.len().div_ceil(threads).max(1);
    type Best = Vec<Vec<(f64, Vec<f64>)>>;
    let partials: Vec<(Best, Vec<SampleRow>)> = std::thread::scope(|sc| {
        let handles: Vec<_> = points
            .chunks(chunk)
            .map(|part| {
                let eval = &eval;
                let radii = &radii;
                sc.spawn(move || {
                    let mut best: Best = vec![vec![(f64::NEG_INFINITY, Vec::new()); radii.len()]; nc];
                    let mut rows = Vec::new();
                    let mut vals = vec![0.0; nc];
                    for (x, b) in part {
                        eval(x, &mut vals);
                        for c in 0..nc {
                            let v = if vals[c].is_nan() { f64::INFINITY } else { vals[c] };
                            let slot = &mut best[c][*b];
                            if better(v, x, slot.0, &slot.1) {
                                *slot = (v, x.clone());
                            }
                            if grid.record_samples {
                                rows.push(SampleRow { point: x.clone(), alpha: conditions[c].clone(), value: v });
                            }
                        }
                    }
                    (best, rows)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("grid worker")).collect()
    });
    let mut best: Best = vec![vec![(f64::NEG_INFINITY, Vec::new()); radii.len()]; nc];
    let mut samples = Vec::new();
    for (b, rows) in partials {
        for c in 0..nc {
            for k in 0..radii.len() {
                if better(b[c][k].0, &b[c][k].1, best[c][k].0, &best[c][k].1) {
                    best[c][k] = b[c][k].clone();
                }
            }
        }
        samples.extend(rows);
    }
    let mut reports = Vec::new();
    for (c, alpha) in conditions.iter().enumerate() {
        let mut running = (f64::NEG_INFINITY, Vec::new());
        let mut trend = Vec::new();
        for (k, &r) in radii.iter().enumerate() {
            if better(best[c][k].0, &best[c][k].1, running.0, &running.1) {
                running = best[c][k].clone();
            }
            trend.push(RadiusSup { radius: r, sup: running.0.max(0.0) });
        }
        reports.push(ConditionReport { alpha: alpha.clone(), sup: running.0.max(0.0), worst_point: running.1, radii_growth: trend });
    }
    let radii_growth: Vec<RadiusSup> = radii
        .iter()
        .enumerate()
        .map(|(k, &r)| RadiusSup { radius: r, sup: reports.iter().map(|c| c.radii_growth[k].sup).fold(0.0, f64::max) })
        .collect();
    let failing = reports.iter().find(|c| !is_plateau(&c.radii_growth));
    let verdict = match failing {
        None => CertVerdict::PassHeuristic,
        Some(c) => CertVerdict::FailWitness {
            alpha: c.alpha.clone(),
            point: c.worst_point.clone(),
            trend: increasing_trend(&c.radii_growth),
        },
    };
    CertReport {
        delta,
        a_delta_estimate: reports.iter().map(|c| c.sup).fold(0.0, f64::max),
        conditions: reports,
        radii_growth,
        verdict,
        label: "heuristic",
        points: points.len(),
        samples,
    }
}

/// Nested-radius suprema of the left sides of both multiplier conditions,
/// one per `alpha` in `{0,1}^n` (`alpha = 0` is the undifferentiated one).
pub fn check_mikhlin_like(phi: &RationalSymbol, delta: &Rational, grid: &GridSpec) -> Result<CertReport> {
    if !(delta.is_positive() && *delta < Rational::one()) {
        return Err(Error::InvalidDelta);
    }
    let n = phi.dim();
    let d = rat_to_f64(delta);
    let alphas = binary_indices(n);
    let derivs: Vec<CompiledSymbol> =
        alphas.iter().map(|a| symbolic_partial(phi, a).map(|s| CompiledSymbol::new(&s))).collect::<Result<_>>()?;
    let mut g = grid.clone();
    g.min_norm = g.min_norm.max(rat_to_f64(&phi.cutoff));
    let eval = |x: &[f64], out: &mut [f64]| {
        for (c, a) in alphas.iter().enumerate() {
            let mut w = 1.0;
            for (j, &xj) in x.iter().enumerate() {
                let t = xj.abs();
                w *= if a.exps()[j] == 1 { t.powf(1.0 - d) * (1.0 + t.powf(2.0 * d)) } else { (1.0 + t).powf(d) };
            }
            let v = derivs[c].eval(x).norm();
            out[c] = if w == 0.0 && v.is_finite() { 0.0 } else { w * v };
        }
    };
    Ok(sup_report(n, &g, &alphas, eval, Some(delta.clone())))
}

/// Nested-radius suprema of `prod (1+|xi_j|)^gamma_j |d^gamma P| / |P|`.
pub fn check_p_ratio(p: &Polynomial, grid: &GridSpec) -> Result<CertReport> {
    if p.is_zero() {
        return Err(Error::DenominatorVanishes);
    }
    let n = p.dim();
    let gammas: Vec<MultiIndex> = binary_indices(n).into_iter().skip(1).collect();
    let derivs: Vec<CompiledPoly> = gammas.iter().map(|g| p.derivative(g).map(|q| CompiledPoly::new(&q))).collect::<Result<_>>()?;
    let cp = CompiledPoly::new(p);
    let eval = |x: &[f64], out: &mut [f64]| {
        let pv = cp.eval(x).norm();
        for (c, g) in gammas.iter().enumerate() {
            let w: f64 = x.iter().zip(g.exps()).map(|(v, &e)| if e == 1 { 1.0 + v.abs() } else { 1.0 }).product();
            let dv = w * derivs[c].eval(x).norm();
            out[c] = if dv == 0.0 { 0.0 } else { dv / pv };
        }
    };
    Ok(sup_report(n, grid, &gammas, eval, None))
}

fn check_elliptic_base(s: &OperatorSystem) -> Result<()> {
    if !is_elliptic_with(s, &SearchConfig::default())?.passes() {
        return Err(Error::PreconditionViolated("system is not elliptic".into()));
    }
    Ok(())
}

/// Radius beyond which `sum |P_q|^2` has no real zeros: `max(1, 2B/c)`
/// rounded up, with `c` the sphere minimum of the principal norm and `B`
/// the norm of the lower-order coefficient sums.
pub fn zero_set_radius(s: &OperatorSystem) -> Rational {
    let parts = s.principal_parts();
    let f = SumOfSquares::new(&parts);
    let c = minimize_on_sphere(&f, &MinimizerConfig { starts: 64, ..MinimizerConfig::default() }, &[])
        .first()
        .map_or(0.0, |m| m.value.max(0.0).sqrt());
    let b: f64 = s
        .operators()
        .iter()
        .zip(&parts)
        .map(|(p, pl)| {
            let lower = p - pl;
            let t: f64 = lower.terms().map(|(_, c)| c.to_complex().norm()).sum();
            t * t
        })
        .sum::<f64>()
        .sqrt();
    if b == 0.0 {
        return Rational::one();
    }
    let r = (2.0 * b / c).max(1.0).ceil();
    Rational::from_integer(BigInt::from(r.to_u64().unwrap_or(u64::MAX)))
}

fn phi_denominator_parts(s: &OperatorSystem) -> (Polynomial, Polynomial) {
    let n = s.dim();
    let g = s.operators().iter().fold(Polynomial::zero(n), |acc, p| &acc + &p.norm_sqr());
    let one = Polynomial::one(n);
    let sigma = (1..n).fold(Polynomial::zero(n), |acc, k| &(&acc + &Polynomial::var(n, k).pow(2)) + &one);
    (g, sigma)
}

fn monomial(alpha: &MultiIndex) -> Polynomial {
    Polynomial::monomial(alpha.clone(), GaussianRational::one())
}

/// `xi^alpha (xi_v - i) conj(P_j) / ((xi_1 + i) G sum_{s>=2}(xi_s^2 + 1))`
/// with `G = sum_q |P_q|^2`; `j` and `v` are one-based.
pub fn phi_family(s: &OperatorSystem, alpha: &MultiIndex, j: usize, v: usize) -> Result<RationalSymbol> {
    let l = s.isotropic_order()?;
    let n = s.dim();
    if alpha.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: alpha.len() });
    }
    if alpha.degree() > l + 1 {
        return Err(Error::PreconditionViolated(format!("|alpha| = {} exceeds l + 1 = {}", alpha.degree(), l + 1)));
    }
    if j == 0 || j > s.len() {
        return Err(Error::PreconditionViolated(format!("operator index {j} outside 1..{}", s.len())));
    }
    if v < 2 || v > n {
        return Err(Error::PreconditionViolated(format!("index v = {v} outside 2..{n}")));
    }
    check_elliptic_base(s)?;
    let i = Polynomial::constant(n, GaussianRational::i());
    let numerator = &(&monomial(alpha) * &(&Polynomial::var(n, v - 1) - &i)) * &s.operators()[j - 1].conj();
    let (g, sigma) = phi_denominator_parts(s);
    let first = &Polynomial::var(n, 0) + &i;
    RationalSymbol::new(numerator, vec![(first, 1), (g, 1), (sigma, 1)], zero_set_radius(s))
}

/// `xi^gamma / (G sum_{s>=2}(xi_s^2 + 1))` for `|gamma| <= 2l + 1`,
/// `gamma_1 <= 2l - 1`.
pub fn phi_gamma(s: &OperatorSystem, gamma: &MultiIndex) -> Result<RationalSymbol> {
    let l = s.isotropic_order()?;
    let n = s.dim();
    if gamma.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: gamma.len() });
    }
    if gamma.degree() > 2 * l + 1 || gamma.exps()[0] + 1 > 2 * l {
        return Err(Error::PreconditionViolated(format!("gamma {:?} outside the admissible range", gamma.exps())));
    }
    check_elliptic_base(s)?;
    let (g, sigma) = phi_denominator_parts(s);
    RationalSymbol::new(monomial(gamma), vec![(g, 1), (sigma, 1)], zero_set_radius(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::rat;
    use num_traits::Zero;
    use crate::parser::parse_operator;

    fn p(s: &str, n: usize) -> Polynomial {
        parse_operator(s, Some(n)).unwrap()
    }

    fn sym(num: &str, den: &[&str], n: usize) -> RationalSymbol {
        RationalSymbol::new(p(num, n), den.iter().map(|d| (p(d, n), 1)).collect(), Rational::zero()).unwrap()
    }

    fn small_grid() -> GridSpec {
        GridSpec { shell_points: 2000, ..GridSpec::default() }
    }

    #[test]
    fn quotient_rule_examples() {
        let d = symbolic_partial(&sym("1", &["D1 + i"], 1), &MultiIndex(vec![1])).unwrap();
        assert!(d.same_function(&RationalSymbol::new(p("-1", 1), vec![(p("D1 + i", 1), 2)], Rational::zero()).unwrap()));
        assert_eq!(d.factors, vec![(p("D1 + i", 1), 2)]);
        let d = symbolic_partial(&sym("D1", &["D1^2 + 1"], 1), &MultiIndex(vec![1])).unwrap();
        assert!(d.same_function(&RationalSymbol::new(p("1 - D1^2", 1), vec![(p("D1^2 + 1", 1), 2)], Rational::zero()).unwrap()));
        let d = symbolic_partial(&sym("1", &["D1 + i", "D2 + i"], 2), &MultiIndex(vec![1, 1])).unwrap();
        assert_eq!(d.numerator, p("1", 2));
        assert_eq!(d.factors, vec![(p("D1 + i", 2), 2), (p("D2 + i", 2), 2)]);
    }

    #[test]
    fn cancellation() {
        let s = RationalSymbol { numerator: p("D1^2 + D1*D2", 2), factors: vec![(p("D1", 2), 1)], cutoff: Rational::one() };
        let d = symbolic_partial(&s, &MultiIndex(vec![0, 0])).unwrap();
        assert_eq!(d.numerator, p("D1^2 + D1*D2", 2));
        let mut c = s.clone();
        c.cancel();
        assert_eq!(c.numerator, p("D1 + D2", 2));
        assert!(c.factors.is_empty());
    }

    #[test]
    fn vanishing_denominator_rejected() {
        assert_eq!(RationalSymbol::quotient(p("1", 2), p("D1 - D2", 2), Rational::zero()), Err(Error::DenominatorVanishes));
        assert_eq!(RationalSymbol::quotient(p("1", 2), p("0", 2), Rational::zero()), Err(Error::DenominatorVanishes));
    }

    #[test]
    fn mikhlin_examples() {
        let r = check_mikhlin_like(&sym("1", &["D1 + i", "D2 + i"], 2), &rat(1, 2), &small_grid()).unwrap();
        assert!(r.passes(), "{:?}", r.radii_growth);
        assert!(r.a_delta_estimate <= 4.0);
        let r = check_mikhlin_like(&sym("1", &["D1 + i"], 2), &rat(1, 2), &small_grid()).unwrap();
        let CertVerdict::FailWitness { trend, .. } = &r.verdict else { panic!() };
        assert!(trend.len() >= 3);
        assert!(trend.windows(2).all(|w| w[1].sup > w[0].sup));
        assert_eq!(check_mikhlin_like(&sym("1", &["D1 + i"], 1), &rat(1, 1), &small_grid()).unwrap_err(), Error::InvalidDelta);
    }

    #[test]
    fn p_ratio_examples() {
        let r = check_p_ratio(&p("D1^2 + D2^2 + 1", 2), &small_grid()).unwrap();
        assert!(r.passes());
        assert!(r.a_delta_estimate < 3.0);
        let r = check_p_ratio(&p("D1 + i", 1), &small_grid()).unwrap();
        assert!(r.passes());
        assert!((r.a_delta_estimate - 2f64.sqrt()).abs() < 1e-9);
        let r = check_p_ratio(&p("D1*D2 + 1", 2), &small_grid()).unwrap();
        assert!(!r.passes());
    }

    #[test]
    fn phi_family_shape() {
        let s = OperatorSystem::single(p("D1^2 + D2^2 + D3^2", 3));
        let phi = phi_family(&s, &MultiIndex(vec![3, 0, 0]), 1, 2).unwrap();
        assert_eq!(phi.numerator, p("D1^3*(D2 - i)*(D1^2 + D2^2 + D3^2)", 3));
        assert_eq!(phi.cutoff, Rational::one());
        assert!(matches!(phi_family(&s, &MultiIndex(vec![4, 0, 0]), 1, 2), Err(Error::PreconditionViolated(_))));
        assert!(matches!(phi_family(&s, &MultiIndex(vec![1, 0, 0]), 1, 1), Err(Error::PreconditionViolated(_))));
        let g = phi_gamma(&s, &MultiIndex(vec![1, 1, 1])).unwrap();
        assert_eq!(g.factors.len(), 2);
        assert!(matches!(phi_gamma(&s, &MultiIndex(vec![4, 0, 0])), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn cutoff_radius_for_lower_order_terms() {
        let s = OperatorSystem::single(p("D1^2 + D2^2 - 9", 2));
        let r = zero_set_radius(&s);
        assert!(r >= rat(3, 1));
    }
}
