//! Dense univariate polynomials over an exact field: Euclidean gcd,
//! square-free decomposition and Sylvester resultants.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gaussian::{GaussianRational, Rational};

/// Exact field arithmetic needed by the univariate routines.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;
}

impl Field for Rational {
    fn from_i64(n: i64) -> Self {
        crate::gaussian::rat_int(n)
    }
}

impl Field for GaussianRational {
    fn from_i64(n: i64) -> Self {
        GaussianRational::from_int(n)
    }
}

impl Field for num_complex::Complex64 {
    fn from_i64(n: i64) -> Self {
        num_complex::Complex64::new(n as f64, 0.0)
    }
}

/// Coefficients stored lowest degree first; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly<F> {
    coeffs: Vec<F>,
}

pub type QPoly = UniPoly<Rational>;
pub type GPoly = UniPoly<GaussianRational>;

impl<F: Field> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn x() -> Self {
        Self::new(vec![F::zero(), F::one()])
    }

    /// `t - r`
    pub fn linear_root(r: F) -> Self {
        Self::new(vec![-r, F::one()])
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| F::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * F::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = F::one() / self.lead();
        self.scale(&inv)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = F::one() / d.lead();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![F::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = rem[k].clone() * lead_inv.clone();
            if !c.is_zero() {
                let shift = k - dd;
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[shift + j] = rem[shift + j].clone() - c.clone() * dc.clone();
                }
                quot[shift] = c;
            }
            rem.pop();
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition: `(factor, multiplicity)` pairs with
    /// monic pairwise coprime square-free factors, multiplicities ascending.
    /// The product of `factor^multiplicity` equals `self` up to a unit.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Self, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut out = Vec::new();
        if self.is_constant() {
            return Ok(out);
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0).expect("gcd divides");
        let c = df.exact_div(&a0).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut mult = 1u32;
        while !b.is_constant() {
            let a = b.gcd(&d);
            let b_next = b.exact_div(&a).expect("gcd divides");
            let c_next = d.exact_div(&a).expect("gcd divides");
            if !a.is_constant() {
                out.push((a, mult));
            }
            d = &c_next - &b_next.derivative();
            b = b_next;
            mult += 1;
        }
        Ok(out)
    }

    /// Product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> Self {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    /// Reverse the coefficient order with respect to a formal degree
    /// (`t^n p(1/t)`).
    pub fn reversed(&self, formal_degree: usize) -> Self {
        let mut c: Vec<F> = (0..=formal_degree).map(|k| self.coeff(k)).collect();
        c.reverse();
        Self::new(c)
    }

    /// `p(a t + b)`.
    pub fn compose_affine(&self, a: &F, b: &F) -> Self {
        let lin = Self::new(vec![b.clone(), a.clone()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        acc
    }
}

impl<F: Field> Add for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn add(self, rhs: &UniPoly<F>) -> UniPoly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<F: Field> Sub for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn sub(self, rhs: &UniPoly<F>) -> UniPoly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<F: Field> Mul for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn mul(self, rhs: &UniPoly<F>) -> UniPoly<F> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly::new(out)
    }
}

impl<F: Field> Neg for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn neg(self) -> UniPoly<F> {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<F: Field + fmt::Display> fmt::Display for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{k}")?,
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly{:?}", self.coeffs)
    }
}

impl GPoly {
    /// Componentwise real part of the coefficients.
    pub fn re_part(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c.re.clone()).collect())
    }

    pub fn im_part(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c.im.clone()).collect())
    }

    pub fn from_rational(p: &QPoly) -> Self {
        GPoly::new(p.coeffs.iter().cloned().map(GaussianRational::from_rational).collect())
    }

    /// Polynomial with conjugated coefficients (`conj(p(conj t))`).
    pub fn conj_coeffs(&self) -> Self {
        GPoly::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// `gcd(Re p, Im p)`: its real roots are exactly the real roots of `p`.
    pub fn real_root_carrier(&self) -> QPoly {
        self.re_part().gcd(&self.im_part())
    }
}

/// Determinant by Gaussian elimination over an exact field.
pub fn determinant<F: Field>(mut m: Vec<Vec<F>>) -> F {
    let n = m.len();
    let mut det = F::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return F::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det = det * p.clone();
        let inv = F::one() / p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() * inv.clone();
            for c in col..n {
                let v = m[col][c].clone();
                m[r][c] = m[r][c].clone() - factor.clone() * v;
            }
        }
    }
    det
}

/// Sylvester-matrix determinant of coefficient vectors read with the given
/// formal degrees (leading coefficients may vanish). This is the resultant of
/// two binary forms when the formal degrees are their homogeneous degrees.
pub fn sylvester_resultant<F: Field>(f: &[F], m: usize, g: &[F], n: usize) -> F {
    let size = m + n;
    if size == 0 {
        return F::one();
    }
    let get = |v: &[F], k: usize| v.get(k).cloned().unwrap_or_else(F::zero);
    let mut mat = vec![vec![F::zero(); size]; size];
    // rows hold coefficients from the leading one downwards
    for r in 0..n {
        for k in 0..=m {
            mat[r][r + k] = get(f, m - k);
        }
    }
    for r in 0..m {
        for k in 0..=n {
            mat[n + r][r + k] = get(g, n - k);
        }
    }
    determinant(mat)
}

/// Resultant of two univariate polynomials with degrees taken from their
/// leading non-zero coefficients.
pub fn resultant<F: Field>(p: &UniPoly<F>, q: &UniPoly<F>) -> Result<F> {
    match (p.degree(), q.degree()) {
        (None, None) => Err(Error::BothZero),
        (None, _) | (_, None) => Ok(F::zero()),
        (Some(m), Some(n)) => Ok(sylvester_resultant(p.coeffs(), m, q.coeffs(), n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::rat_int;

    fn q(cs: &[i64]) -> QPoly {
        QPoly::from_i64s(cs)
    }

    #[test]
    fn resultant_examples() {
        // Res(t - 1, t^2 + 1) = lc^deg * prod g(root) = 1 * (1 + 1) = 2
        let g1 = GPoly::from_i64s(&[-1, 1]);
        let g2 = GPoly::from_i64s(&[1, 0, 1]);
        assert_eq!(resultant(&g1, &g2).unwrap(), GaussianRational::from_int(2));
        assert_eq!(resultant(&q(&[-1, 0, 1]), &q(&[-1, 1])).unwrap(), rat_int(0));
        assert_eq!(resultant(&q(&[0, 1]), &q(&[0, 1])).unwrap(), rat_int(0));
        assert_eq!(resultant(&QPoly::zero(), &QPoly::zero()), Err(Error::BothZero));
    }

    #[test]
    fn squarefree_examples() {
        // (t-1)^2 (t+2) = t^3 - 3t + 2
        let p = q(&[2, -3, 0, 1]);
        let d = p.squarefree_decomposition().unwrap();
        assert_eq!(d, vec![(q(&[2, 1]), 1), (q(&[-1, 1]), 2)]);
        assert_eq!(q(&[1, 0, 1]).squarefree_decomposition().unwrap(), vec![(q(&[1, 0, 1]), 1)]);
        assert_eq!(q(&[0, 0, 0, 1]).squarefree_decomposition().unwrap(), vec![(q(&[0, 1]), 3)]);
        assert_eq!(QPoly::zero().squarefree_decomposition(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn gcd_and_division() {
        let a = &q(&[-1, 1]) * &q(&[1, 0, 1]);
        let b = &q(&[-1, 1]) * &q(&[3, 1]);
        assert_eq!(a.gcd(&b), q(&[-1, 1]));
        let (quo, rem) = a.div_rem(&q(&[1, 0, 1]));
        assert_eq!(quo, q(&[-1, 1]));
        assert!(rem.is_zero());
    }

    #[test]
    fn gaussian_real_root_carrier() {
        // (t - 1)(t - i) has the single real root 1
        let p = &GPoly::from_i64s(&[-1, 1]) * &GPoly::new(vec![-GaussianRational::i(), GaussianRational::one()]);
        assert_eq!(p.real_root_carrier(), q(&[-1, 1]));
    }
}
