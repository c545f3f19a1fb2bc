//! Real linear factors of binary forms.
//!
//! A real direction with slope `s` stands for the linear form
//! `xi1 + s*xi2`, i.e. `(lambda, mu) = (1, s)`, whose zero direction is
//! `(-s, 1)`. The infinite slope stands for `xi2`. A form `H` is read through
//! `f(s) = H(-s, 1)`; the infinite direction has multiplicity
//! `deg H - deg f`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{fmt_rational, rat_to_f64, GaussianRational, Rational};
use crate::poly::{MultiIndex, Polynomial};
use crate::sturm::{real_roots, RootInterval};
use crate::univariate::{GPoly, QPoly};

#[derive(Clone, Debug, PartialEq)]
pub enum Slope {
    Rational(Rational),
    Algebraic(RootInterval),
    Infinite,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealDirection {
    pub slope: Slope,
    pub multiplicity: u32,
}

impl RealDirection {
    pub fn is_rational(&self) -> bool {
        !matches!(self.slope, Slope::Algebraic(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.slope, Slope::Infinite)
    }

    pub fn slope_f64(&self) -> Option<f64> {
        match &self.slope {
            Slope::Rational(s) => Some(rat_to_f64(s)),
            Slope::Algebraic(r) => Some(r.to_f64()),
            Slope::Infinite => None,
        }
    }

    /// `(lambda, mu)` exactly, when the slope is rational or infinite.
    pub fn lambda_mu(&self) -> Option<(Rational, Rational)> {
        match &self.slope {
            Slope::Rational(s) => Some((Rational::one(), s.clone())),
            Slope::Infinite => Some((Rational::zero(), Rational::one())),
            Slope::Algebraic(_) => None,
        }
    }

    pub fn lambda_mu_f64(&self) -> (f64, f64) {
        match self.slope_f64() {
            Some(s) => (1.0, s),
            None => (0.0, 1.0),
        }
    }

    /// A real point on the zero line of the linear form, `(-mu, lambda)`.
    pub fn zero_direction_f64(&self) -> (f64, f64) {
        let (l, m) = self.lambda_mu_f64();
        (-m, l)
    }

    pub fn zero_direction(&self) -> Option<(Rational, Rational)> {
        self.lambda_mu().map(|(l, m)| (-m, l))
    }

    /// `lambda*xi1 + mu*xi2` for rational or infinite slopes.
    pub fn linear_form(&self) -> Option<Polynomial> {
        let (l, m) = self.lambda_mu()?;
        Some(&Polynomial::var(2, 0).scale(&l.into()) + &Polynomial::var(2, 1).scale(&m.into()))
    }

    /// Human-readable slope text: a rational, `inf`, or `root of g in (a, b)`.
    pub fn describe(&self) -> String {
        match &self.slope {
            Slope::Rational(s) => fmt_rational(s),
            Slope::Infinite => "inf".into(),
            Slope::Algebraic(r) => format!(
                "root of {} in ({}, {}) ~ {:.12}",
                qpoly_text(&r.poly),
                fmt_rational(&r.lo),
                fmt_rational(&r.hi),
                r.to_f64()
            ),
        }
    }
}

/// Compact text for a rational univariate polynomial in `t`.
pub fn qpoly_text(p: &QPoly) -> String {
    let g = GPoly::from_rational(p);
    let poly = Polynomial::from_univariate(&g, 1, 0);
    crate::parser::format_operator(&poly).replace("D1", "t")
}

impl Serialize for RealDirection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RealDirection", 4)?;
        let (l, m) = self.lambda_mu_f64();
        st.serialize_field("slope", &self.describe())?;
        st.serialize_field("exact", &self.is_rational())?;
        st.serialize_field("direction", &[l, m])?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.end()
    }
}

fn cmp_slopes(a: &Slope, b: &Slope) -> Ordering {
    match (a, b) {
        (Slope::Infinite, Slope::Infinite) => Ordering::Equal,
        (Slope::Infinite, _) => Ordering::Greater,
        (_, Slope::Infinite) => Ordering::Less,
        (Slope::Rational(x), Slope::Rational(y)) => x.cmp(y),
        (Slope::Rational(x), Slope::Algebraic(r)) => r.sign_of(&QPoly::linear_root(x.clone())).reverse(),
        (Slope::Algebraic(r), Slope::Rational(x)) => r.sign_of(&QPoly::linear_root(x.clone())),
        (Slope::Algebraic(r), Slope::Algebraic(q)) => {
            let (mut r, mut q) = (r.clone(), q.clone());
            loop {
                if r.hi < q.lo || (r.hi == q.lo && !(r.is_exact() && q.is_exact())) {
                    return Ordering::Less;
                }
                if q.hi < r.lo || (q.hi == r.lo && !(r.is_exact() && q.is_exact())) {
                    return Ordering::Greater;
                }
                if r.is_exact() && q.is_exact() {
                    return r.lo.cmp(&q.lo);
                }
                r.bisect();
                q.bisect();
            }
        }
    }
}

/// Algebraic directions that share one defining polynomial and are divided
/// out of the form jointly through `form`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicGroup {
    /// Homogenized defining polynomial `xi2^k D(-xi1/xi2)`.
    pub form: Polynomial,
    pub defining: QPoly,
    pub multiplicity: u32,
    /// Indices into `real_factors`.
    pub directions: Vec<usize>,
    /// Number of non-real roots of `defining`; these stay elliptic but are
    /// removed from `elliptic_cofactor` together with the group.
    pub complex_roots: usize,
}

/// `H = scalar * prod(rational linear factors) * prod(group forms) * elliptic_cofactor`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryFormFactorization {
    pub degree: u32,
    pub scalar: GaussianRational,
    pub real_factors: Vec<RealDirection>,
    pub elliptic_cofactor: Polynomial,
    pub groups: Vec<AlgebraicGroup>,
}

impl BinaryFormFactorization {
    pub fn is_elliptic(&self) -> bool {
        self.real_factors.is_empty()
    }

    pub fn all_rational(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn has_multiple(&self) -> bool {
        self.real_factors.iter().any(|d| d.multiplicity > 1)
    }

    pub fn real_degree(&self) -> u32 {
        self.real_factors.iter().map(|d| d.multiplicity).sum()
    }
}

/// `f(s) = H(-s, 1)` for a binary form.
pub fn dehomogenize(h: &Polynomial) -> GPoly {
    let d = h.total_degree().unwrap_or(0) as usize;
    let mut c = vec![GaussianRational::zero(); d + 1];
    for (a, v) in h.terms() {
        let e = a.exps()[0] as usize;
        c[e] = if e.is_multiple_of(2) { v.clone() } else { -v };
    }
    GPoly::new(c)
}

/// `F(u) = H(-1, u)`, the chart around the infinite direction.
pub fn dehomogenize_at_infinity(h: &Polynomial) -> GPoly {
    let d = h.total_degree().unwrap_or(0) as usize;
    let mut c = vec![GaussianRational::zero(); d + 1];
    for (a, v) in h.terms() {
        let e = a.exps()[1] as usize;
        c[e] = if a.exps()[0] % 2 == 0 { v.clone() } else { -v };
    }
    GPoly::new(c)
}

/// Inverse of `dehomogenize` at a formal degree `k`: `xi2^k D(-xi1/xi2)`.
pub fn homogenize(d: &GPoly, k: u32) -> Polynomial {
    Polynomial::from_terms(
        2,
        d.coeffs().iter().enumerate().map(|(j, c)| {
            let c = if j % 2 == 0 { c.clone() } else { -c };
            (MultiIndex(vec![j as u32, k - j as u32]), c)
        }),
    )
}

/// Primitive integer polynomial with the same roots.
fn integer_primitive(p: &QPoly) -> Vec<BigInt> {
    let l = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| if g.is_zero() { c } else { c / &g }).collect()
}

/// Splits the isolated roots of a square-free `p` into rational roots and
/// the remaining (irrational) root intervals on the reduced polynomial.
pub(crate) fn split_rational_roots(p: &QPoly) -> Result<(Vec<Rational>, QPoly, Vec<RootInterval>)> {
    let roots = real_roots(p, None, None)?;
    let ints = integer_primitive(p);
    let lc = ints.last().cloned().unwrap_or_else(BigInt::one).abs();
    let lc_q = Rational::from_integer(lc.clone());
    let width = Rational::new(BigInt::one(), lc.clone() + BigInt::one());
    let mut rational = Vec::new();
    let mut irrational = Vec::new();
    for mut r in roots {
        if let Some(v) = r.exact_value() {
            rational.push(v.clone());
            continue;
        }
        r.refine_to(&width);
        if let Some(v) = r.exact_value() {
            rational.push(v.clone());
            continue;
        }
        let lo = (&r.lo * &lc_q).ceil().to_integer();
        let hi = (&r.hi * &lc_q).floor().to_integer();
        let mut m = lo;
        let mut hit = None;
        while m <= hi {
            let cand = Rational::new(m.clone(), lc.clone());
            if p.eval(&cand).is_zero() {
                hit = Some(cand);
                break;
            }
            m += 1;
        }
        match hit {
            Some(v) => rational.push(v),
            None => irrational.push(r),
        }
    }
    let mut reduced = p.clone();
    for v in &rational {
        reduced = reduced.exact_div(&QPoly::linear_root(v.clone())).expect("rational root divides");
    }
    let reduced = reduced.monic();
    for r in &mut irrational {
        r.poly = reduced.clone();
    }
    Ok((rational, reduced, irrational))
}

/// Factors the real linear factors out of a non-zero binary form.
pub fn factor_binary_form(h: &Polynomial) -> Result<BinaryFormFactorization> {
    if h.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: h.dim() });
    }
    if h.is_zero() {
        return Err(Error::ZeroForm);
    }
    if !h.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let d = h.total_degree().unwrap_or(0);
    let f = dehomogenize(h);
    let deg_f = f.degree().unwrap_or(0) as u32;
    let mut real_factors = Vec::new();
    let mut groups = Vec::new();
    let mut divisor = Polynomial::one(2);
    if d > deg_f {
        real_factors.push(RealDirection { slope: Slope::Infinite, multiplicity: d - deg_f });
        divisor = Polynomial::var(2, 1).pow(d - deg_f);
    }
    let carrier = f.real_root_carrier();
    if !carrier.is_constant() {
        for (g, m) in carrier.squarefree_decomposition()? {
            let (rational, reduced, irrational) = split_rational_roots(&g)?;
            for v in rational {
                let dir = RealDirection { slope: Slope::Rational(v), multiplicity: m };
                divisor = &divisor * &dir.linear_form().expect("rational").pow(m);
                real_factors.push(dir);
            }
            if !irrational.is_empty() {
                let k = reduced.degree().unwrap_or(0);
                let form = homogenize(&GPoly::from_rational(&reduced), k as u32);
                divisor = &divisor * &form.pow(m);
                groups.push(AlgebraicGroup {
                    form,
                    defining: reduced.clone(),
                    multiplicity: m,
                    directions: Vec::new(),
                    complex_roots: k - irrational.len(),
                });
                let gi = groups.len() - 1;
                for r in irrational {
                    real_factors.push(RealDirection { slope: Slope::Algebraic(r), multiplicity: m });
                    groups[gi].directions.push(usize::MAX);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..real_factors.len()).collect();
    order.sort_by(|&a, &b| cmp_slopes(&real_factors[a].slope, &real_factors[b].slope));
    let sorted: Vec<RealDirection> = order.iter().map(|&i| real_factors[i].clone()).collect();
    // remap group membership after sorting
    for g in &mut groups {
        g.directions.clear();
    }
    for (new_idx, dir) in sorted.iter().enumerate() {
        if let Slope::Algebraic(r) = &dir.slope {
            if let Some(g) = groups.iter_mut().find(|g| g.defining == r.poly) {
                g.directions.push(new_idx);
            }
        }
    }
    let mut cofactor = h.div_exact(&divisor).expect("real factors divide the form");
    let mut scalar = GaussianRational::one();
    if cofactor.is_constant() {
        scalar = cofactor.constant_term();
        cofactor = Polynomial::one(2);
    }
    Ok(BinaryFormFactorization { degree: d, scalar, real_factors: sorted, elliptic_cofactor: cofactor, groups })
}

/// Dense homogeneous form `sum c_j xi1^(d-j) xi2^j` in floating point.
pub fn dense_form_f64(h: &Polynomial) -> Vec<Complex64> {
    let d = h.total_degree().unwrap_or(0) as usize;
    let mut c = vec![Complex64::new(0.0, 0.0); d + 1];
    for (a, v) in h.terms() {
        c[a.exps()[1] as usize] += v.to_complex();
    }
    c
}

/// Divides a dense form by `lambda*xi1 + mu*xi2`; returns the quotient and
/// the size of the remainder.
pub fn divide_linear_f64(h: &[Complex64], lambda: f64, mu: f64) -> (Vec<Complex64>, f64) {
    let d = h.len() - 1;
    if d == 0 {
        return (Vec::new(), h[0].norm());
    }
    let mut g = vec![Complex64::new(0.0, 0.0); d];
    if lambda != 0.0 {
        // (lambda xi1 + mu xi2) sum g_j xi1^(d-1-j) xi2^j
        for j in 0..d {
            let prev = if j == 0 { Complex64::new(0.0, 0.0) } else { g[j - 1] };
            g[j] = (h[j] - prev * mu) / lambda;
        }
        let rem = h[d] - g[d - 1] * mu;
        (g, rem.norm())
    } else {
        for j in 0..d {
            g[j] = h[j + 1] / mu;
        }
        (g, h[0].norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{rat, rat_int};
    use crate::parser::parse_operator;

    fn p(s: &str) -> Polynomial {
        parse_operator(s, Some(2)).unwrap()
    }

    #[test]
    fn product_of_axes() {
        let f = factor_binary_form(&p("D1*D2")).unwrap();
        assert_eq!(f.real_factors.len(), 2);
        assert_eq!(f.real_factors[0].lambda_mu(), Some((rat_int(1), rat_int(0))));
        assert_eq!(f.real_factors[1].lambda_mu(), Some((rat_int(0), rat_int(1))));
        assert_eq!(f.elliptic_cofactor, Polynomial::one(2));
    }

    #[test]
    fn elliptic_form_has_no_directions() {
        let f = factor_binary_form(&p("D1^2+D2^2")).unwrap();
        assert!(f.is_elliptic());
        assert_eq!(f.elliptic_cofactor, p("D1^2+D2^2"));
    }

    #[test]
    fn double_direction() {
        let f = factor_binary_form(&p("(D1-D2)^2*(D1^2+D2^2)")).unwrap();
        assert_eq!(f.real_factors.len(), 1);
        assert_eq!(f.real_factors[0].multiplicity, 2);
        assert_eq!(f.real_factors[0].lambda_mu(), Some((rat_int(1), rat_int(-1))));
        assert_eq!(f.elliptic_cofactor, p("D1^2+D2^2"));
    }

    #[test]
    fn algebraic_pair() {
        let f = factor_binary_form(&p("D1^2 - 2*D2^2")).unwrap();
        assert_eq!(f.real_factors.len(), 2);
        assert!(f.real_factors.iter().all(|d| !d.is_rational()));
        let s: Vec<f64> = f.real_factors.iter().map(|d| d.slope_f64().unwrap()).collect();
        assert!((s[0] + 2f64.sqrt()).abs() < 1e-14 && (s[1] - 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(f.groups.len(), 1);
        assert_eq!(f.groups[0].directions, vec![0, 1]);
        assert_eq!(f.elliptic_cofactor, Polynomial::one(2));
    }

    #[test]
    fn complex_coefficients_keep_only_real_directions() {
        // (xi1 - 3 xi2)(xi1 + i xi2)
        let f = factor_binary_form(&p("(D1 - 3*D2)*(D1 + i*D2)")).unwrap();
        assert_eq!(f.real_factors.len(), 1);
        assert_eq!(f.real_factors[0].slope, Slope::Rational(rat_int(-3)));
        assert_eq!(f.elliptic_cofactor, p("D1 + i*D2"));
        let g = factor_binary_form(&p("(2*D1 - D2)*(D1^2+D2^2)")).unwrap();
        assert_eq!(g.real_factors[0].slope, Slope::Rational(rat(-1, 2)));
        assert_eq!(g.elliptic_cofactor, p("2*D1^2 + 2*D2^2"));
    }

    #[test]
    fn errors() {
        assert_eq!(factor_binary_form(&Polynomial::zero(2)), Err(Error::ZeroForm));
        assert_eq!(factor_binary_form(&p("D1^2 + D2")), Err(Error::NotHomogeneous));
    }

    #[test]
    fn float_linear_division() {
        let h = dense_form_f64(&p("D1^2 - 2*D2^2"));
        let (q, rem) = divide_linear_f64(&h, 1.0, 2f64.sqrt());
        assert!(rem < 1e-12);
        assert!((q[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((q[1] + Complex64::new(2f64.sqrt(), 0.0)).norm() < 1e-12);
    }
}
