//! Sparse multivariate polynomials over Q(i), weight vectors and operator
//! systems. Variable indices are 0-based throughout the API.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gaussian::{GaussianRational, Rational};
use crate::univariate::{GPoly, QPoly};

/// Exponent vector ordered by graded lexicographic order: total degree first,
/// then the exponent of the first variable, and so on.
#[derive(Clone, PartialEq, Eq, Hash, Debug, serde::Serialize)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut e = vec![0; n];
        e[k] = 1;
        Self(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `|alpha:l| = sum alpha_k / l_k`, exactly.
    pub fn weighted_degree(&self, l: &WeightVector) -> Rational {
        self.0
            .iter()
            .zip(l.entries())
            .map(|(&a, &w)| Rational::new(a.into(), w.into()))
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `alpha!`
    pub fn factorial(&self) -> u128 {
        self.0.iter().map(|&a| (1..=a as u128).product::<u128>()).product()
    }

    /// All multi-indices `beta <= self` componentwise.
    pub fn below(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for &a in &self.0 {
            out = out
                .into_iter()
                .flat_map(|p: Vec<u32>| {
                    (0..=a).map(move |b| {
                        let mut q = p.clone();
                        q.push(b);
                        q
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// All multi-indices of length `n` and total degree exactly `d`.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if n == 1 {
                prefix.push(d);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in (0..=d).rev() {
                prefix.push(a);
                rec(n - 1, d - a, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        rec(n, d, &mut Vec::new(), &mut out);
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Anisotropic weights `(l_1, ..., l_n)`, each at least 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug, serde::Serialize)]
pub struct WeightVector(Vec<u32>);

impl WeightVector {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::WeightViolation("weight vector is empty".into()));
        }
        if let Some(k) = entries.iter().position(|&w| w == 0) {
            return Err(Error::WeightViolation(format!("weight l{} must be at least 1", k + 1)));
        }
        Ok(Self(entries))
    }

    pub fn isotropic(n: usize, l: u32) -> Self {
        Self(vec![l.max(1); n])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_isotropic(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    pub fn max(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(1)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Sparse polynomial in `dim` variables with Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, GaussianRational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, GaussianRational::one())
    }

    pub fn constant(dim: usize, c: GaussianRational) -> Self {
        Self::monomial(MultiIndex::zero(dim), c)
    }

    /// The coordinate `xi_k` (0-based).
    pub fn var(dim: usize, k: usize) -> Self {
        Self::monomial(MultiIndex::unit(dim, k), GaussianRational::one())
    }

    pub fn monomial(alpha: MultiIndex, c: GaussianRational) -> Self {
        let dim = alpha.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(alpha, c);
        }
        Self { dim, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, GaussianRational)>>(dim: usize, it: I) -> Self {
        let mut p = Self::zero(dim);
        for (a, c) in it {
            assert_eq!(a.len(), dim, "multi-index length must equal dim");
            p.add_term(a, c);
        }
        p
    }

    fn add_term(&mut self, a: MultiIndex, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(a) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: &MultiIndex) -> GaussianRational {
        self.terms.get(a).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn degree_in(&self, k: usize) -> u32 {
        self.terms.keys().map(|a| a.0[k]).max().unwrap_or(0)
    }

    /// Graded-lex leading term.
    pub fn leading_term(&self) -> Option<(&MultiIndex, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|a| a.degree() == 0)
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(&MultiIndex::zero(self.dim))
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(MultiIndex::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    /// Variables that occur in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.dim).filter(|&k| self.terms.keys().any(|a| a.0[k] > 0)).collect()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Self { dim: self.dim, terms: self.terms.iter().map(|(a, v)| (a.clone(), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Polynomial with conjugated coefficients; equals the complex
    /// conjugate of `P(xi)` for real `xi`.
    pub fn conj(&self) -> Self {
        Self { dim: self.dim, terms: self.terms.iter().map(|(a, c)| (a.clone(), c.conj())).collect() }
    }

    pub fn re_part(&self) -> Self {
        Self::from_terms(
            self.dim,
            self.terms.iter().map(|(a, c)| (a.clone(), GaussianRational::from_rational(c.re.clone()))),
        )
    }

    pub fn im_part(&self) -> Self {
        Self::from_terms(
            self.dim,
            self.terms.iter().map(|(a, c)| (a.clone(), GaussianRational::from_rational(c.im.clone()))),
        )
    }

    /// `|P|^2 = P * conj(P)` as a real polynomial on real arguments.
    pub fn norm_sqr(&self) -> Self {
        self * &self.conj()
    }

    /// Terms with total degree exactly `k`.
    pub fn homogeneous_component(&self, k: u32) -> Self {
        Self {
            dim: self.dim,
            terms: self.terms.iter().filter(|(a, _)| a.degree() == k).map(|(a, c)| (a.clone(), c.clone())).collect(),
        }
    }

    /// Largest `|alpha:l|` over the terms (zero for the zero polynomial).
    pub fn weighted_order(&self, l: &WeightVector) -> Rational {
        self.terms.keys().map(|a| a.weighted_degree(l)).max().unwrap_or_else(Rational::zero)
    }

    /// Terms with `|alpha:l| = 1`.
    pub fn l_principal_part(&self, l: &WeightVector) -> Result<Self> {
        if l.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: l.len() });
        }
        let one = Rational::one();
        let mut out = Self::zero(self.dim);
        for (a, c) in &self.terms {
            let w = a.weighted_degree(l);
            match w.cmp(&one) {
                Ordering::Greater => {
                    return Err(Error::TermAboveWeight { weight: crate::gaussian::fmt_rational(&w) })
                }
                Ordering::Equal => {
                    out.terms.insert(a.clone(), c.clone());
                }
                Ordering::Less => {}
            }
        }
        Ok(out)
    }

    /// `dP / d xi_var` (0-based variable).
    pub fn differentiate(&self, var: usize) -> Result<Self> {
        if var >= self.dim {
            return Err(Error::IndexOutOfRange { index: var, dim: self.dim });
        }
        let mut out = Self::zero(self.dim);
        for (a, c) in &self.terms {
            let e = a.0[var];
            if e == 0 {
                continue;
            }
            let mut b = a.clone();
            b.0[var] -= 1;
            out.add_term(b, c * &GaussianRational::from_int(e as i64));
        }
        Ok(out)
    }

    /// `d^alpha P`.
    pub fn derivative(&self, alpha: &MultiIndex) -> Result<Self> {
        if alpha.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: alpha.len() });
        }
        let mut p = self.clone();
        for (k, &m) in alpha.0.iter().enumerate() {
            for _ in 0..m {
                p = p.differentiate(k)?;
            }
        }
        Ok(p)
    }

    /// Sets every variable outside `keep` to zero and re-indexes the kept
    /// variables in ascending order.
    pub fn restrict_coordinates(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&k) = keep.iter().find(|&&k| k >= self.dim) {
            return Err(Error::IndexOutOfRange { index: k, dim: self.dim });
        }
        let mut out = Self::zero(keep.len());
        for (a, c) in &self.terms {
            let dropped = (0..self.dim).filter(|k| !keep.contains(k)).any(|k| a.0[k] > 0);
            if dropped {
                continue;
            }
            out.add_term(MultiIndex(keep.iter().map(|&k| a.0[k]).collect()), c.clone());
        }
        Ok(out)
    }

    /// Same polynomial viewed in a larger space; variable `k` maps to
    /// `positions[k]`.
    pub fn embed(&self, new_dim: usize, positions: &[usize]) -> Self {
        assert_eq!(positions.len(), self.dim);
        Self::from_terms(
            new_dim,
            self.terms.iter().map(|(a, c)| {
                let mut e = vec![0; new_dim];
                for (k, &p) in positions.iter().enumerate() {
                    e[p] += a.0[k];
                }
                (MultiIndex(e), c.clone())
            }),
        )
    }

    pub fn evaluate(&self, point: &[GaussianRational]) -> Result<GaussianRational> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: point.len() });
        }
        let mut acc = GaussianRational::zero();
        for (a, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&a.0) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate_rational(&self, point: &[Rational]) -> Result<GaussianRational> {
        let p: Vec<GaussianRational> = point.iter().cloned().map(GaussianRational::from_rational).collect();
        self.evaluate(&p)
    }

    /// Floating evaluation at a real point.
    pub fn eval_f64(&self, point: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, c) in &self.terms {
            let mut m = 1.0;
            for (x, &e) in point.iter().zip(&a.0) {
                if e > 0 {
                    m *= x.powi(e as i32);
                }
            }
            acc += c.to_complex() * m;
        }
        acc
    }

    /// Floating evaluation at a complex point.
    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, c) in &self.terms {
            let mut m = c.to_complex();
            for (x, &e) in point.iter().zip(&a.0) {
                if e > 0 {
                    m *= x.powi(e as i32);
                }
            }
            acc += m;
        }
        acc
    }

    /// `P(q_1, ..., q_n)` where the `q_k` share a common dimension.
    pub fn substitute(&self, subs: &[Polynomial]) -> Result<Self> {
        if subs.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: subs.len() });
        }
        let m = subs.first().map(|q| q.dim).unwrap_or(0);
        let mut powers: Vec<Vec<Polynomial>> = subs.iter().map(|q| vec![Polynomial::one(q.dim), q.clone()]).collect();
        let mut out = Self::zero(m);
        for (a, c) in &self.terms {
            let mut t = Self::constant(m, c.clone());
            for (k, &e) in a.0.iter().enumerate() {
                while powers[k].len() <= e as usize {
                    let next = &powers[k][powers[k].len() - 1] * &subs[k];
                    powers[k].push(next);
                }
                if e > 0 {
                    t = &t * &powers[k][e as usize];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Exact quotient when `d` divides `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Self> {
        let (lm, lc) = d.leading_term()?;
        let lm = lm.clone();
        let lc_inv = lc.inv();
        let mut r = self.clone();
        let mut q = Self::zero(self.dim);
        while let Some((a, c)) = r.leading_term() {
            if !lm.divides(a) {
                return None;
            }
            let t = Self::monomial(a.sub(&lm), c * &lc_inv);
            r = &r - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    /// View as a univariate polynomial in variable `k`, requiring all other
    /// exponents to vanish.
    pub fn to_univariate(&self, k: usize) -> Option<GPoly> {
        let deg = self.degree_in(k) as usize;
        let mut c = vec![GaussianRational::zero(); deg + 1];
        for (a, v) in &self.terms {
            if a.0.iter().enumerate().any(|(j, &e)| j != k && e > 0) {
                return None;
            }
            c[a.0[k] as usize] = v.clone();
        }
        Some(GPoly::new(c))
    }

    pub fn from_univariate(p: &GPoly, dim: usize, k: usize) -> Self {
        Self::from_terms(
            dim,
            p.coeffs().iter().enumerate().map(|(e, c)| {
                let mut a = vec![0; dim];
                a[k] = e as u32;
                (MultiIndex(a), c.clone())
            }),
        )
    }

    /// Restriction to the line `t * point`, as a polynomial in `t`.
    pub fn along_ray(&self, point: &[GaussianRational]) -> GPoly {
        let deg = self.total_degree().unwrap_or(0) as usize;
        let mut c = vec![GaussianRational::zero(); deg + 1];
        for (a, v) in &self.terms {
            let mut t = v.clone();
            for (x, &e) in point.iter().zip(&a.0) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            let d = a.degree() as usize;
            c[d] = &c[d] + &t;
        }
        GPoly::new(c)
    }

    /// Real coefficients of a polynomial known to be real.
    pub fn real_coeffs(&self) -> Option<BTreeMap<MultiIndex, Rational>> {
        self.terms
            .iter()
            .map(|(a, c)| c.is_real().then(|| (a.clone(), c.re.clone())))
            .collect()
    }
}

/// Univariate rational polynomial from a polynomial in one variable with
/// real coefficients.
pub fn real_univariate(p: &Polynomial, k: usize) -> Option<QPoly> {
    let g = p.to_univariate(k)?;
    g.im_part().is_zero().then(|| g.re_part())
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in polynomial addition");
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in polynomial subtraction");
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), -c);
        }
        out
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in polynomial product");
        let mut out = Polynomial::zero(self.dim);
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out.add_term(a.add(b), c * d);
            }
        }
        out
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { dim: self.dim, terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect() }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [dim {}]", crate::parser::format_operator(self), self.dim)
    }
}

impl serde::Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&crate::parser::format_operator(self))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::format_operator(self))
    }
}

/// A system `{P_j}` of operators in a common dimension with optional
/// anisotropic weights.
#[derive(Clone, PartialEq, Debug, serde::Serialize)]
pub struct OperatorSystem {
    dim: usize,
    operators: Vec<Polynomial>,
    weights: Option<WeightVector>,
}

impl OperatorSystem {
    pub fn new(operators: Vec<Polynomial>, weights: Option<WeightVector>) -> Result<Self> {
        let first = operators.first().ok_or(Error::EmptySystem)?;
        let dim = first.dim();
        for p in &operators {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
            }
        }
        if let Some(l) = &weights {
            if l.len() != dim {
                return Err(Error::WeightViolation(format!(
                    "weight vector has {} entries for dimension {}",
                    l.len(),
                    dim
                )));
            }
            for (j, p) in operators.iter().enumerate() {
                let w = p.weighted_order(l);
                if w > Rational::one() {
                    return Err(Error::WeightViolation(format!(
                        "operator {} has a term with |alpha:l| = {} > 1",
                        j + 1,
                        crate::gaussian::fmt_rational(&w)
                    )));
                }
            }
        }
        Ok(Self { dim, operators, weights })
    }

    pub fn single(p: Polynomial) -> Self {
        Self::new(vec![p], None).expect("single operator system")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[Polynomial] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn declared_weights(&self) -> Option<&WeightVector> {
        self.weights.as_ref()
    }

    /// Maximal total degree over the operators.
    pub fn order(&self) -> u32 {
        self.operators.iter().filter_map(Polynomial::total_degree).max().unwrap_or(0)
    }

    /// Declared weights, or the isotropic vector `(l, ..., l)` with `l` the
    /// maximal total degree.
    pub fn weights(&self) -> WeightVector {
        self.weights.clone().unwrap_or_else(|| WeightVector::isotropic(self.dim, self.order()))
    }

    pub fn is_isotropic(&self) -> bool {
        self.weights.as_ref().is_none_or(WeightVector::is_isotropic)
    }

    /// Isotropic order, or `AnisotropicNotSupported`.
    pub fn isotropic_order(&self) -> Result<u32> {
        match &self.weights {
            Some(l) if !l.is_isotropic() => Err(Error::AnisotropicNotSupported),
            Some(l) => Ok(l.entries()[0]),
            None => Ok(self.order().max(1)),
        }
    }

    pub fn principal_parts_for(&self, l: &WeightVector) -> Result<Vec<Polynomial>> {
        self.operators.iter().map(|p| p.l_principal_part(l)).collect()
    }

    pub fn principal_parts(&self) -> Vec<Polynomial> {
        self.principal_parts_for(&self.weights()).expect("weights validated at construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{rat, rat_int};

    fn x(n: usize, k: usize) -> Polynomial {
        Polynomial::var(n, k)
    }

    fn c(re: i64, im: i64, n: usize) -> Polynomial {
        Polynomial::constant(n, GaussianRational::from_ints(re, im))
    }

    fn malgrange() -> Polynomial {
        &(&x(2, 0) + &c(0, 1, 2)) * &(&x(2, 1) + &c(0, 1, 2))
    }

    #[test]
    fn homogeneous_components_of_malgrange() {
        let p = malgrange();
        assert_eq!(p.homogeneous_component(2), &x(2, 0) * &x(2, 1));
        assert_eq!(p.homogeneous_component(1), (&x(2, 0) + &x(2, 1)).scale(&GaussianRational::i()));
        assert!(p.homogeneous_component(5).is_zero());
    }

    #[test]
    fn principal_part_by_weights() {
        let p = &(&x(2, 0).pow(2) + &x(2, 1).pow(3).scale(&GaussianRational::i())) + &x(2, 0);
        let l = WeightVector::new(vec![2, 3]).unwrap();
        assert_eq!(p.l_principal_part(&l).unwrap(), &x(2, 0).pow(2) + &x(2, 1).pow(3).scale(&GaussianRational::i()));
        let l2 = WeightVector::new(vec![2, 2]).unwrap();
        assert!(matches!(x(2, 0).pow(3).l_principal_part(&l2), Err(Error::TermAboveWeight { .. })));
        assert_eq!(malgrange().l_principal_part(&l2).unwrap(), &x(2, 0) * &x(2, 1));
    }

    #[test]
    fn derivatives() {
        let p = &x(2, 0).pow(3) * &x(2, 1);
        let p = p.scale(&GaussianRational::i());
        assert_eq!(p.differentiate(1).unwrap(), x(2, 0).pow(3).scale(&GaussianRational::i()));
        assert_eq!((&x(2, 0) * &x(2, 1)).differentiate(0).unwrap(), x(2, 1));
        assert!(matches!(p.differentiate(2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn restriction_examples() {
        let p = &(&x(3, 0) + &c(0, 1, 3)) * &(&x(3, 2) + &c(0, 1, 3));
        let r = p.restrict_coordinates(&[0, 1]).unwrap();
        assert_eq!(r, &x(2, 0).scale(&GaussianRational::i()) - &c(1, 0, 2));
        assert_eq!(r.dim(), 2);
        assert!(x(2, 1).restrict_coordinates(&[0]).unwrap().is_zero());
        assert_eq!(x(2, 1).restrict_coordinates(&[]), Err(Error::EmptyKeepSet));
    }

    #[test]
    fn evaluation_examples() {
        let g = |a, b| GaussianRational::from_ints(a, b);
        assert_eq!((&x(2, 0) * &x(2, 1)).evaluate(&[g(1, 0), g(-1, 0)]).unwrap(), g(-1, 0));
        assert_eq!(malgrange().evaluate(&[g(0, 0), g(0, 0)]).unwrap(), g(-1, 0));
        assert_eq!(malgrange().evaluate(&[g(0, 0)]), Err(Error::DimensionMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn exact_division_and_substitution() {
        let a = &x(2, 0).pow(2) - &x(2, 1).pow(2);
        let b = &x(2, 0) - &x(2, 1);
        assert_eq!(a.div_exact(&b).unwrap(), &x(2, 0) + &x(2, 1));
        assert!(a.div_exact(&x(2, 0)).is_none());
        // (x - y)^2 with x -> t, y -> t gives 0
        let t = Polynomial::var(1, 0);
        assert!(b.pow(2).substitute(&[t.clone(), t]).unwrap().is_zero());
    }

    #[test]
    fn weighted_degree_is_exact() {
        let l = WeightVector::new(vec![2, 3]).unwrap();
        assert_eq!(MultiIndex(vec![1, 1]).weighted_degree(&l), rat(5, 6));
        assert_eq!(MultiIndex(vec![2, 0]).weighted_degree(&l), rat_int(1));
        assert!(WeightVector::new(vec![1, 0]).is_err());
    }

    #[test]
    fn grlex_order() {
        let mut v = vec![MultiIndex(vec![0, 2]), MultiIndex(vec![1, 0]), MultiIndex(vec![2, 0]), MultiIndex(vec![1, 1])];
        v.sort();
        assert_eq!(v, vec![MultiIndex(vec![1, 0]), MultiIndex(vec![0, 2]), MultiIndex(vec![1, 1]), MultiIndex(vec![2, 0])]);
    }

    #[test]
    fn system_validation() {
        let l = WeightVector::new(vec![2, 2]).unwrap();
        assert!(OperatorSystem::new(vec![x(2, 0).pow(3)], Some(l)).is_err());
        assert_eq!(OperatorSystem::new(vec![], None), Err(Error::EmptySystem));
        let s = OperatorSystem::new(vec![malgrange(), x(2, 0)], None).unwrap();
        assert_eq!(s.order(), 2);
        assert_eq!(s.principal_parts()[1], Polynomial::zero(2));
    }
}
