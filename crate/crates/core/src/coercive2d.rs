//! Weak coercivity of a single operator in two variables: normal form
//! `R * prod(lambda_k xi1 + mu_k xi2 + alpha_k) + Q`, alpha-constants, the
//! resultant criterion and membership in `L0(P)`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::binary_form::{
    dehomogenize, dehomogenize_at_infinity, dense_form_f64, divide_linear_f64, factor_binary_form,
    BinaryFormFactorization, RealDirection, Slope,
};
use crate::error::{Error, Result};
use crate::gaussian::{rat_to_f64, GaussianRational};
use crate::poly::{MultiIndex, Polynomial};
use crate::sturm::count_real_roots;
use crate::univariate::{sylvester_resultant, GPoly, QPoly};

/// A coefficient that is either exact or a floating approximation of an
/// algebraic number.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Exact(GaussianRational),
    Approx(Complex64),
}

impl Coefficient {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Coefficient::Exact(g) => g.to_complex(),
            Coefficient::Approx(z) => *z,
        }
    }

    pub fn exact(&self) -> Option<&GaussianRational> {
        match self {
            Coefficient::Exact(g) => Some(g),
            Coefficient::Approx(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coefficient::Exact(_))
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Exact(g) => write!(f, "{g}"),
            Coefficient::Approx(z) => write!(f, "~({:.12} {:+.12}*i)", z.re, z.im),
        }
    }
}

impl Serialize for Coefficient {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A polynomial with exact coefficients, or a floating approximation.
#[derive(Clone, Debug, PartialEq)]
pub enum MaybeExactPoly {
    Exact(Polynomial),
    Approx(BTreeMap<MultiIndex, Complex64>),
}

impl MaybeExactPoly {
    pub fn exact(&self) -> Option<&Polynomial> {
        match self {
            MaybeExactPoly::Exact(p) => Some(p),
            MaybeExactPoly::Approx(_) => None,
        }
    }

    pub fn eval_f64(&self, x: &[f64]) -> Complex64 {
        match self {
            MaybeExactPoly::Exact(p) => p.eval_f64(x),
            MaybeExactPoly::Approx(m) => fp_eval(m, x),
        }
    }
}

impl fmt::Display for MaybeExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaybeExactPoly::Exact(p) => write!(f, "{p}"),
            MaybeExactPoly::Approx(m) => {
                if m.is_empty() {
                    return write!(f, "0");
                }
                let parts: Vec<String> = m
                    .iter()
                    .rev()
                    .map(|(a, c)| {
                        let mono = Polynomial::monomial(a.clone(), GaussianRational::one()).to_string();
                        format!("({:.12} {:+.12}*i)*{}", c.re, c.im, mono)
                    })
                    .collect();
                write!(f, "~[{}]", parts.join(" + "))
            }
        }
    }
}

impl Serialize for MaybeExactPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaConstant {
    pub direction: RealDirection,
    pub alpha: Coefficient,
    /// Decided exactly, also for algebraic directions.
    pub im_nonzero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffineFactor {
    pub lambda: Coefficient,
    pub mu: Coefficient,
    pub alpha: Coefficient,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalForm2D {
    pub elliptic_part: MaybeExactPoly,
    pub affine_factors: Vec<AffineFactor>,
    pub remainder: MaybeExactPoly,
    /// Zero when the reconstruction is exact.
    pub residual: f64,
    pub exact: bool,
}

impl NormalForm2D {
    /// `R * prod(lambda xi1 + mu xi2 + alpha) + Q` at a real point.
    pub fn eval_f64(&self, x: &[f64]) -> Complex64 {
        let mut prod = self.elliptic_part.eval_f64(x);
        for f in &self.affine_factors {
            prod *= f.lambda.to_complex() * x[0] + f.mu.to_complex() * x[1] + f.alpha.to_complex();
        }
        prod + self.remainder.eval_f64(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum NotCoerciveReason {
    MultipleRealZero { direction: RealDirection },
    RealAlpha { alpha: AlphaConstant },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status")]
pub enum Status2D {
    Elliptic,
    WeaklyCoerciveNotElliptic { normal_form: NormalForm2D },
    NotWeaklyCoercive { reason: NotCoerciveReason },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakCoercivityVerdict2D {
    pub status: Status2D,
    pub order: u32,
    /// Set for first-order operators, where the normal-form rule is applied
    /// beyond the order range of the underlying theorem.
    pub order_one_extension: bool,
    pub real_directions: Vec<RealDirection>,
    pub alphas: Vec<AlphaConstant>,
}

impl WeakCoercivityVerdict2D {
    pub fn is_weakly_coercive(&self) -> bool {
        !matches!(self.status, Status2D::NotWeaklyCoercive { .. })
    }

    pub fn label(&self) -> &'static str {
        match &self.status {
            Status2D::Elliptic => "Elliptic",
            Status2D::WeaklyCoerciveNotElliptic { .. } => "WeaklyCoerciveNotElliptic",
            Status2D::NotWeaklyCoercive { reason: NotCoerciveReason::MultipleRealZero { .. } } => {
                "NotWeaklyCoercive(MultipleRealZero)"
            }
            Status2D::NotWeaklyCoercive { reason: NotCoerciveReason::RealAlpha { .. } } => "NotWeaklyCoercive(RealAlpha)",
        }
    }
}

fn check_dim(p: &Polynomial) -> Result<u32> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: p.dim() });
    }
    p.total_degree().ok_or(Error::ZeroPolynomial)
}

fn eval_gpoly_f64(p: &GPoly, s: f64) -> Complex64 {
    p.coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * s + c.to_complex())
}

fn alphas_for(fact: &BinaryFormFactorization, pl: &Polynomial, pl1: &Polynomial) -> Vec<AlphaConstant> {
    let f = dehomogenize(pl);
    let df = f.derivative();
    let q = dehomogenize(pl1);
    fact.real_factors
        .iter()
        .map(|dir| {
            let (alpha, im_nonzero) = match &dir.slope {
                Slope::Rational(s) => {
                    let s = GaussianRational::from_rational(s.clone());
                    let a = -(q.eval(&s) / df.eval(&s));
                    let nz = !a.im.is_zero();
                    (Coefficient::Exact(a), nz)
                }
                Slope::Infinite => {
                    let big_f = dehomogenize_at_infinity(pl);
                    let num = pl1
                        .evaluate(&[GaussianRational::from_int(-1), GaussianRational::zero()])
                        .expect("two variables");
                    let a = num / big_f.coeff(1);
                    let nz = !a.im.is_zero();
                    (Coefficient::Exact(a), nz)
                }
                Slope::Algebraic(r) => {
                    // Im(alpha) vanishes iff Re q * Im f' - Im q * Re f' does
                    let (a, b) = (q.re_part(), q.im_part());
                    let (c, d) = (df.re_part(), df.im_part());
                    let witness: QPoly = &(&a * &d) - &(&b * &c);
                    let nz = !r.is_root_of(&witness);
                    let s = r.to_f64();
                    (Coefficient::Approx(-(eval_gpoly_f64(&q, s) / eval_gpoly_f64(&df, s))), nz)
                }
            };
            AlphaConstant { direction: dir.clone(), alpha, im_nonzero }
        })
        .collect()
}

/// Alpha-constants of the simple real directions of `P^l`.
pub fn alpha_constants(p: &Polynomial) -> Result<Vec<AlphaConstant>> {
    let l = check_dim(p)?;
    let pl = p.homogeneous_component(l);
    let fact = factor_binary_form(&pl)?;
    if fact.has_multiple() {
        return Err(Error::MultipleRealZero);
    }
    Ok(alphas_for(&fact, &pl, &p.homogeneous_component(l.saturating_sub(1))))
}

type FPoly = BTreeMap<MultiIndex, Complex64>;

fn fp_from(p: &Polynomial) -> FPoly {
    p.terms().map(|(a, c)| (a.clone(), c.to_complex())).collect()
}

fn fp_add(a: &FPoly, b: &FPoly, sign: f64) -> FPoly {
    let mut out = a.clone();
    for (k, v) in b {
        *out.entry(k.clone()).or_insert(Complex64::new(0.0, 0.0)) += v * sign;
    }
    out
}

fn fp_mul(a: &FPoly, b: &FPoly) -> FPoly {
    let mut out = FPoly::new();
    for (x, u) in a {
        for (y, v) in b {
            *out.entry(x.add(y)).or_insert(Complex64::new(0.0, 0.0)) += u * v;
        }
    }
    out
}

fn fp_eval(m: &FPoly, x: &[f64]) -> Complex64 {
    m.iter()
        .map(|(a, c)| c * a.exps().iter().zip(x).map(|(&e, &v)| v.powi(e as i32)).product::<f64>())
        .sum()
}

fn dense_to_fp(c: &[Complex64]) -> FPoly {
    let d = c.len().saturating_sub(1) as u32;
    c.iter()
        .enumerate()
        .filter(|(_, v)| v.norm() != 0.0)
        .map(|(j, v)| (MultiIndex(vec![d - j as u32, j as u32]), *v))
        .collect()
}

fn normal_form_exact(p: &Polynomial, l: u32, fact: &BinaryFormFactorization, alphas: &[AlphaConstant]) -> NormalForm2D {
    let pl = p.homogeneous_component(l);
    let pl1 = p.homogeneous_component(l.saturating_sub(1));
    let lin: Vec<Polynomial> = fact.real_factors.iter().map(|d| d.linear_form().expect("rational")).collect();
    let al: Vec<GaussianRational> = alphas.iter().map(|a| a.alpha.exact().expect("exact").clone()).collect();
    let prod_l = lin.iter().fold(Polynomial::one(2), |acc, x| &acc * x);
    let r_top = pl.div_exact(&prod_l).expect("linear factors divide P^l");
    let mut sigma = Polynomial::zero(2);
    for j in 0..lin.len() {
        let others = (0..lin.len()).filter(|&k| k != j).fold(Polynomial::one(2), |acc, k| &acc * &lin[k]);
        sigma = &sigma + &others.scale(&al[j]);
    }
    let numer = if lin.is_empty() { pl1.clone() } else { &pl1 - &(&r_top * &sigma) };
    let r_next = if numer.is_zero() {
        Polynomial::zero(2)
    } else {
        numer.div_exact(&prod_l).expect("alpha-constants make the correction divisible")
    };
    let r = &r_top + &r_next;
    let mut full = r.clone();
    for (x, a) in lin.iter().zip(&al) {
        full = &full * &(x + &Polynomial::constant(2, a.clone()));
    }
    let q = p - &full;
    debug_assert!(q.total_degree().is_none_or(|d| d + 2 <= l));
    let factors = fact
        .real_factors
        .iter()
        .zip(&al)
        .map(|(d, a)| {
            let (lam, mu) = d.lambda_mu().expect("rational");
            AffineFactor {
                lambda: Coefficient::Exact(lam.into()),
                mu: Coefficient::Exact(mu.into()),
                alpha: Coefficient::Exact(a.clone()),
            }
        })
        .collect();
    NormalForm2D {
        elliptic_part: MaybeExactPoly::Exact(r),
        affine_factors: factors,
        remainder: MaybeExactPoly::Exact(q),
        residual: 0.0,
        exact: true,
    }
}

fn normal_form_approx(p: &Polynomial, l: u32, fact: &BinaryFormFactorization, alphas: &[AlphaConstant]) -> NormalForm2D {
    let pl = dense_form_f64(&p.homogeneous_component(l));
    let pl1_poly = p.homogeneous_component(l.saturating_sub(1));
    let mut pl1 = dense_form_f64(&pl1_poly);
    if pl1_poly.is_zero() {
        pl1 = vec![Complex64::new(0.0, 0.0); l as usize];
    }
    let lm: Vec<(f64, f64)> = fact.real_factors.iter().map(RealDirection::lambda_mu_f64).collect();
    let al: Vec<Complex64> = alphas.iter().map(|a| a.alpha.to_complex()).collect();
    let mut r_top = pl.clone();
    for &(a, b) in &lm {
        r_top = divide_linear_f64(&r_top, a, b).0;
    }
    let lin_fp: Vec<FPoly> = lm
        .iter()
        .map(|&(a, b)| {
            let mut m = FPoly::new();
            m.insert(MultiIndex(vec![1, 0]), Complex64::new(a, 0.0));
            m.insert(MultiIndex(vec![0, 1]), Complex64::new(b, 0.0));
            m.retain(|_, v| v.norm() != 0.0);
            m
        })
        .collect();
    let r_top_fp = dense_to_fp(&r_top);
    let mut sigma = FPoly::new();
    for j in 0..lin_fp.len() {
        let mut others = FPoly::from([(MultiIndex(vec![0, 0]), al[j])]);
        for (k, x) in lin_fp.iter().enumerate() {
            if k != j {
                others = fp_mul(&others, x);
            }
        }
        sigma = fp_add(&sigma, &others, 1.0);
    }
    let numer_fp = fp_add(&dense_to_fp(&pl1), &fp_mul(&r_top_fp, &sigma), -1.0);
    let mut numer = vec![Complex64::new(0.0, 0.0); l as usize];
    for (a, v) in &numer_fp {
        numer[a.exps()[1] as usize] += v;
    }
    let mut r_next = numer;
    for &(a, b) in &lm {
        r_next = if r_next.len() <= 1 { Vec::new() } else { divide_linear_f64(&r_next, a, b).0 };
    }
    let r = fp_add(&r_top_fp, &dense_to_fp(&r_next), 1.0);
    let mut full = r.clone();
    for (x, a) in lin_fp.iter().zip(&al) {
        let mut aff = x.clone();
        aff.insert(MultiIndex(vec![0, 0]), *a);
        full = fp_mul(&full, &aff);
    }
    let diff = fp_add(&fp_from(p), &full, -1.0);
    let scale = p.terms().map(|(_, c)| c.to_complex().norm()).fold(1.0, f64::max);
    let mut residual: f64 = 0.0;
    let mut q = FPoly::new();
    for (a, v) in diff {
        if a.degree() + 1 >= l {
            residual = residual.max(v.norm() / scale);
        } else if v.norm() > 1e-14 * scale {
            q.insert(a, v);
        }
    }
    let r: FPoly = r.into_iter().filter(|(_, v)| v.norm() > 1e-14 * scale).collect();
    let factors = lm
        .iter()
        .zip(&al)
        .map(|(&(a, b), &al)| AffineFactor {
            lambda: Coefficient::Approx(Complex64::new(a, 0.0)),
            mu: Coefficient::Approx(Complex64::new(b, 0.0)),
            alpha: Coefficient::Approx(al),
        })
        .collect();
    NormalForm2D {
        elliptic_part: MaybeExactPoly::Approx(r),
        affine_factors: factors,
        remainder: MaybeExactPoly::Approx(q),
        residual,
        exact: false,
    }
}

/// Exact weak-coercivity decision for one operator in two variables.
pub fn decide_weak_coercive_2d(p: &Polynomial) -> Result<WeakCoercivityVerdict2D> {
    let l = check_dim(p)?;
    if l == 0 {
        return Err(Error::PreconditionViolated("operator must have order at least 1".into()));
    }
    let pl = p.homogeneous_component(l);
    let fact = factor_binary_form(&pl)?;
    let base = |status, alphas| WeakCoercivityVerdict2D {
        status,
        order: l,
        order_one_extension: l == 1,
        real_directions: fact.real_factors.clone(),
        alphas,
    };
    if let Some(d) = fact.real_factors.iter().find(|d| d.multiplicity > 1) {
        let reason = NotCoerciveReason::MultipleRealZero { direction: d.clone() };
        return Ok(base(Status2D::NotWeaklyCoercive { reason }, Vec::new()));
    }
    if fact.is_elliptic() {
        return Ok(base(Status2D::Elliptic, Vec::new()));
    }
    let alphas = alphas_for(&fact, &pl, &p.homogeneous_component(l - 1));
    if let Some(a) = alphas.iter().find(|a| !a.im_nonzero) {
        let reason = NotCoerciveReason::RealAlpha { alpha: a.clone() };
        return Ok(base(Status2D::NotWeaklyCoercive { reason }, alphas));
    }
    let nf = build_normal_form(p, l, &fact, &alphas);
    Ok(base(Status2D::WeaklyCoerciveNotElliptic { normal_form: nf }, alphas))
}

fn build_normal_form(p: &Polynomial, l: u32, fact: &BinaryFormFactorization, alphas: &[AlphaConstant]) -> NormalForm2D {
    if fact.real_factors.iter().all(RealDirection::is_rational) {
        normal_form_exact(p, l, fact, alphas)
    } else {
        normal_form_approx(p, l, fact, alphas)
    }
}

/// Normal form of an elliptic or weakly coercive operator.
pub fn normal_form_2d(p: &Polynomial) -> Result<NormalForm2D> {
    let v = decide_weak_coercive_2d(p)?;
    match v.status {
        Status2D::NotWeaklyCoercive { .. } => Err(Error::NotWeaklyCoercive),
        Status2D::WeaklyCoerciveNotElliptic { normal_form } => Ok(normal_form),
        Status2D::Elliptic => {
            let l = v.order;
            let fact = factor_binary_form(&p.homogeneous_component(l))?;
            Ok(build_normal_form(p, l, &fact, &[]))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum NotApplicableReason {
    NonRealCoefficients,
    NonRealZeros,
    MultipleZero,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status")]
pub enum ResultantVerdict {
    WeaklyCoercive { resultant: GaussianRational },
    NotWeaklyCoercive { resultant: GaussianRational },
    NotApplicable { reason: NotApplicableReason },
}

/// Resultant criterion: for real `P^l` (after scaling) with only simple
/// real zeros, `P` is weakly coercive iff `Res(P^l, Im P^(l-1)) != 0`.
pub fn resultant_criterion_2d(p: &Polynomial) -> Result<ResultantVerdict> {
    let l = check_dim(p)?;
    if l == 0 {
        return Err(Error::PreconditionViolated("operator must have order at least 1".into()));
    }
    let pl = p.homogeneous_component(l);
    let c = pl.leading_term().map(|(_, c)| c.clone()).expect("non-zero principal part");
    let scaled = p.scale(&c.inv());
    let pl = scaled.homogeneous_component(l);
    if !pl.is_real() {
        return Ok(ResultantVerdict::NotApplicable { reason: NotApplicableReason::NonRealCoefficients });
    }
    let f = dehomogenize(&pl).re_part();
    let infinite = l - f.degree().unwrap_or(0) as u32;
    if infinite > 1 {
        return Ok(ResultantVerdict::NotApplicable { reason: NotApplicableReason::MultipleZero });
    }
    let mut real_count = infinite as usize;
    for (g, m) in f.squarefree_decomposition()? {
        let k = count_real_roots(&g)?;
        if m > 1 && k > 0 {
            return Ok(ResultantVerdict::NotApplicable { reason: NotApplicableReason::MultipleZero });
        }
        real_count += k * m as usize;
    }
    if real_count != l as usize {
        return Ok(ResultantVerdict::NotApplicable { reason: NotApplicableReason::NonRealZeros });
    }
    let im1 = scaled.homogeneous_component(l - 1).im_part();
    let res = binary_form_resultant(&pl, l, &im1, l - 1);
    Ok(if res.is_zero() {
        ResultantVerdict::NotWeaklyCoercive { resultant: res }
    } else {
        ResultantVerdict::WeaklyCoercive { resultant: res }
    })
}

/// Resultant of two binary forms of the given formal degrees.
pub fn binary_form_resultant(f: &Polynomial, m: u32, g: &Polynomial, n: u32) -> GaussianRational {
    let coeffs = |h: &Polynomial, d: u32| -> Vec<GaussianRational> {
        // coefficient of xi1^k xi2^(d-k), i.e. h(x, 1)
        (0..=d).map(|k| h.coeff(&MultiIndex(vec![k, d - k]))).collect()
    };
    sylvester_resultant(&coeffs(f, m), m as usize, &coeffs(g, n), n as usize)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status")]
pub enum L0Membership {
    Member { c: GaussianRational },
    NotMember,
}

/// Whether `T` belongs to `L0(P)`: its degree-`l` part is a constant
/// multiple of `P^l`.
pub fn l0_membership_2d(t: &Polynomial, p: &Polynomial) -> Result<L0Membership> {
    let v = decide_weak_coercive_2d(p)?;
    if !v.is_weakly_coercive() {
        return Err(Error::PNotWeaklyCoercive);
    }
    if t.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: t.dim() });
    }
    let l = v.order;
    let dt = t.total_degree().unwrap_or(0);
    if dt > l {
        return Err(Error::PreconditionViolated(format!("deg T = {dt} exceeds deg P = {l}")));
    }
    if dt < l || t.is_zero() {
        return Ok(L0Membership::Member { c: GaussianRational::zero() });
    }
    let pl = p.homogeneous_component(l);
    let tl = t.homogeneous_component(l);
    let (lm, lc) = pl.leading_term().expect("non-zero");
    let c = &tl.coeff(lm) / lc;
    Ok(if pl.scale(&c) == tl { L0Membership::Member { c } } else { L0Membership::NotMember })
}

/// Slope of a real direction as a float, `inf` for the infinite one.
pub fn slope_value(d: &RealDirection) -> f64 {
    match &d.slope {
        Slope::Rational(s) => rat_to_f64(s),
        Slope::Algebraic(r) => r.to_f64(),
        Slope::Infinite => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::rat;
    use crate::parser::parse_operator;

    fn p(s: &str) -> Polynomial {
        parse_operator(s, Some(2)).unwrap()
    }

    fn gi(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    #[test]
    fn malgrange_normal_form() {
        let v = decide_weak_coercive_2d(&p("(D1+i)*(D2+i)")).unwrap();
        let Status2D::WeaklyCoerciveNotElliptic { normal_form } = v.status else { panic!("{v:?}") };
        assert!(normal_form.exact);
        assert_eq!(normal_form.elliptic_part, MaybeExactPoly::Exact(Polynomial::one(2)));
        assert_eq!(normal_form.remainder, MaybeExactPoly::Exact(Polynomial::zero(2)));
        let f: Vec<(String, String, String)> = normal_form
            .affine_factors
            .iter()
            .map(|a| (a.lambda.to_string(), a.mu.to_string(), a.alpha.to_string()))
            .collect();
        assert_eq!(f, vec![("1".into(), "0".into(), "i".into()), ("0".into(), "1".into(), "i".into())]);
    }

    #[test]
    fn alphas_of_examples() {
        let a = alpha_constants(&p("(D1+i)*(D2+i)")).unwrap();
        assert!(a.iter().all(|x| x.alpha == Coefficient::Exact(gi(0, 1)) && x.im_nonzero));
        let a = alpha_constants(&p("D1^2-D2^2")).unwrap();
        assert!(a.iter().all(|x| x.alpha == Coefficient::Exact(gi(0, 0)) && !x.im_nonzero));
        let a = alpha_constants(&p("D1^2-D2^2+i*D1")).unwrap();
        let half_i = GaussianRational::new(rat(0, 1), rat(1, 2));
        assert_eq!(a.len(), 2);
        assert!(a.iter().all(|x| x.alpha == Coefficient::Exact(half_i.clone())));
        assert_eq!(alpha_constants(&p("D1^2")), Err(Error::MultipleRealZero));
    }

    #[test]
    fn decisions() {
        assert_eq!(decide_weak_coercive_2d(&p("D1^2+D2^2")).unwrap().status, Status2D::Elliptic);
        assert_eq!(decide_weak_coercive_2d(&p("D1^2-D2^2")).unwrap().label(), "NotWeaklyCoercive(RealAlpha)");
        assert_eq!(decide_weak_coercive_2d(&p("D1^2+D2")).unwrap().label(), "NotWeaklyCoercive(MultipleRealZero)");
        assert_eq!(
            decide_weak_coercive_2d(&p("(D1-D2+i)*(D1+D2+i)")).unwrap().label(),
            "WeaklyCoerciveNotElliptic"
        );
        assert_eq!(decide_weak_coercive_2d(&Polynomial::zero(2)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn normal_form_with_elliptic_part() {
        let nf = normal_form_2d(&p("(D1^2+D2^2)*(D1+i)+5")).unwrap();
        assert_eq!(nf.elliptic_part, MaybeExactPoly::Exact(p("D1^2+D2^2")));
        assert_eq!(nf.remainder, MaybeExactPoly::Exact(p("5")));
        assert_eq!(nf.affine_factors.len(), 1);
        assert_eq!(nf.affine_factors[0].alpha, Coefficient::Exact(gi(0, 1)));
        let nf = normal_form_2d(&p("D1^2+D2^2")).unwrap();
        assert_eq!(nf.elliptic_part, MaybeExactPoly::Exact(p("D1^2+D2^2")));
        assert!(nf.affine_factors.is_empty());
        assert_eq!(normal_form_2d(&p("D1^2-D2^2")), Err(Error::NotWeaklyCoercive));
    }

    #[test]
    fn algebraic_directions_reconstruct() {
        let q = p("D1^2 - 2*D2^2 + i*D1 + 3*D2 - 7");
        let v = decide_weak_coercive_2d(&q).unwrap();
        let Status2D::WeaklyCoerciveNotElliptic { normal_form } = v.status else { panic!("{v:?}") };
        assert!(!normal_form.exact);
        assert!(normal_form.residual < 1e-9);
        for x in [[0.3, -1.7], [2.0, 5.0], [-3.1, 0.2]] {
            let err = (normal_form.eval_f64(&x) - q.eval_f64(&x)).norm();
            assert!(err < 1e-8, "{err}");
        }
        // a real lower-order part gives real alphas at both algebraic directions
        let r = p("D1^2 - 2*D2^2 + D1");
        assert_eq!(decide_weak_coercive_2d(&r).unwrap().label(), "NotWeaklyCoercive(RealAlpha)");
    }

    #[test]
    fn resultant_criterion_examples() {
        assert!(matches!(
            resultant_criterion_2d(&p("D1^2-D2^2+i*D1")).unwrap(),
            ResultantVerdict::WeaklyCoercive { .. }
        ));
        assert!(matches!(resultant_criterion_2d(&p("D1^2-D2^2")).unwrap(), ResultantVerdict::NotWeaklyCoercive { .. }));
        assert_eq!(
            resultant_criterion_2d(&p("D1^2+D2^2+i*D1")).unwrap(),
            ResultantVerdict::NotApplicable { reason: NotApplicableReason::NonRealZeros }
        );
        assert_eq!(
            resultant_criterion_2d(&p("D1^2+i*D2")).unwrap(),
            ResultantVerdict::NotApplicable { reason: NotApplicableReason::MultipleZero }
        );
        // complex scalar multiple of a real form is normalized first
        assert!(matches!(
            resultant_criterion_2d(&p("i*(D1+i)*(D2+i)")).unwrap(),
            ResultantVerdict::WeaklyCoercive { .. }
        ));
    }

    #[test]
    fn l0_examples() {
        let m = p("(D1+i)*(D2+i)");
        assert_eq!(l0_membership_2d(&p("D1*D2"), &m).unwrap(), L0Membership::Member { c: gi(1, 0) });
        assert_eq!(l0_membership_2d(&p("D1^2"), &m).unwrap(), L0Membership::NotMember);
        assert_eq!(l0_membership_2d(&p("i*D1+3"), &m).unwrap(), L0Membership::Member { c: gi(0, 0) });
        assert_eq!(l0_membership_2d(&p("D1"), &p("D1^2-D2^2")), Err(Error::PNotWeaklyCoercive));
    }

    #[test]
    fn infinite_direction_alpha() {
        // (xi1 + 1)(xi2 + 2i) - 2i
        let a = alpha_constants(&p("D1*D2 + 2*i*D1 + D2")).unwrap();
        // direction xi1 (s = 0): alpha = -q(0)/f'(0), f = -s, q(s) = -2i s + 1 -> 1
        assert_eq!(a[0].alpha, Coefficient::Exact(gi(1, 0)));
        // direction xi2: alpha = P1(-1,0)/F'(0) = (-2i)/(-1) = 2i
        assert_eq!(a[1].alpha, Coefficient::Exact(gi(0, 2)));
    }
}
