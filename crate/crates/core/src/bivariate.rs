//! Polynomials in `Q[u][v]`: primitive gcd, exact division and
//! resultants with respect to `v` via fraction-free elimination.

use num_traits::{One, Zero};

use crate::gaussian::Rational;
use crate::poly::Polynomial;
use crate::univariate::QPoly;

/// Coefficients in `v`, lowest degree first, each a polynomial in `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly {
    coeffs: Vec<QPoly>,
}

impl BiPoly {
    pub fn new(mut coeffs: Vec<QPoly>) -> Self {
        while coeffs.last().is_some_and(QPoly::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// Real part of a polynomial in two of its variables; other variables
    /// must not occur.
    pub fn from_real(p: &Polynomial, u: usize, v: usize) -> Self {
        let mut grid: Vec<Vec<Rational>> = Vec::new();
        for (a, c) in p.terms() {
            let (du, dv) = (a.exps()[u] as usize, a.exps()[v] as usize);
            if grid.len() <= dv {
                grid.resize(dv + 1, Vec::new());
            }
            if grid[dv].len() <= du {
                grid[dv].resize(du + 1, Rational::zero());
            }
            grid[dv][du] += &c.re;
        }
        Self::new(grid.into_iter().map(QPoly::new).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    pub fn degree_v(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> QPoly {
        self.coeffs.last().cloned().unwrap_or_else(QPoly::zero)
    }

    /// Monic gcd of the coefficients in `Q[u]`.
    pub fn content(&self) -> QPoly {
        self.coeffs.iter().fold(QPoly::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part, normalized so the leading coefficient is monic in `u`.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        let mut out: Vec<QPoly> = self.coeffs.iter().map(|q| q.exact_div(&c).expect("content divides")).collect();
        let lc = out.last().unwrap().lead();
        let inv = Rational::one() / lc;
        for q in &mut out {
            *q = q.scale(&inv);
        }
        Self::new(out)
    }

    pub fn scale_u(&self, c: &QPoly) -> Self {
        Self::new(self.coeffs.iter().map(|q| q * c).collect())
    }

    pub fn derivative_v(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, q)| q.scale(&Rational::from_integer(k.into()))).collect())
    }

    pub fn eval_u(&self, x: &Rational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|q| q.eval(x)).collect())
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).cloned().unwrap_or_else(QPoly::zero);
                    let b = other.coeffs.get(k).cloned().unwrap_or_else(QPoly::zero);
                    &a - &b
                })
                .collect(),
        )
    }

    fn shift_mul(&self, c: &QPoly, k: usize) -> Self {
        let mut out = vec![QPoly::zero(); k];
        out.extend(self.coeffs.iter().map(|q| q * c));
        Self::new(out)
    }

    /// Pseudo-remainder of `self` by `d` in `v`.
    pub fn prem(&self, d: &Self) -> Self {
        let dd = d.degree_v().expect("non-zero divisor");
        let lc = d.lead();
        let mut r = self.clone();
        while let Some(dr) = r.degree_v() {
            if dr < dd {
                break;
            }
            let top = r.lead();
            r = r.scale_u(&lc).sub(&d.shift_mul(&top, dr - dd));
        }
        r
    }

    /// Exact quotient in `Q[u][v]`, if `d` divides `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let dd = d.degree_v()?;
        let lc = d.lead();
        let mut r = self.clone();
        let mut q = vec![QPoly::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(dr) = r.degree_v() {
            if dr < dd {
                return None;
            }
            let c = r.lead().exact_div(&lc)?;
            q[dr - dd] = &q[dr - dd] + &c;
            r = r.sub(&d.shift_mul(&c, dr - dd));
        }
        Some(Self::new(q))
    }

    /// Gcd in `Q[u][v]` by the primitive remainder sequence; the content
    /// part is monic and the primitive part normalized as in
    /// [`BiPoly::primitive_part`].
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let c = self.content().gcd(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree_v() < b.degree_v() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_part() };
        }
        a.primitive_part().scale_u(&c)
    }

    fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.primitive_part().scale_u(&self.content())
    }

    /// Square-free part of a primitive polynomial with respect to `v`.
    pub fn squarefree_v(&self) -> Self {
        let g = self.gcd(&self.derivative_v());
        if g.degree_v().unwrap_or(0) == 0 {
            return self.primitive_part();
        }
        self.exact_div(&g).expect("gcd divides").primitive_part()
    }

    /// `Res_v(self, other)` as a polynomial in `u`, with the formal degrees
    /// taken as the actual `v`-degrees.
    pub fn resultant_v(&self, other: &Self) -> QPoly {
        let (Some(m), Some(n)) = (self.degree_v(), other.degree_v()) else {
            return QPoly::zero();
        };
        if m == 0 && n == 0 {
            return QPoly::one();
        }
        let size = m + n;
        let mut rows = Vec::with_capacity(size);
        for i in 0..n {
            let mut row = vec![QPoly::zero(); size];
            for (k, c) in self.coeffs.iter().rev().enumerate() {
                row[i + k] = c.clone();
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![QPoly::zero(); size];
            for (k, c) in other.coeffs.iter().rev().enumerate() {
                row[i + k] = c.clone();
            }
            rows.push(row);
        }
        bareiss_determinant(rows)
    }
}

/// Fraction-free determinant over `Q[u]`.
pub fn bareiss_determinant(mut m: Vec<Vec<QPoly>>) -> QPoly {
    let n = m.len();
    if n == 0 {
        return QPoly::one();
    }
    let mut sign = false;
    let mut prev = QPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return QPoly::zero();
            };
            m.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::rat;
    use crate::parser::parse_operator;
    use crate::univariate::resultant;

    fn bp(s: &str) -> BiPoly {
        BiPoly::from_real(&parse_operator(s, Some(2)).unwrap(), 0, 1)
    }

    #[test]
    fn gcd_of_products() {
        let a = bp("(D1 + D2 - 1)*(D1^2 + D2)");
        let b = bp("(D1 + D2 - 1)*(D1 - D2^2 + 3)");
        assert_eq!(a.gcd(&b), bp("D1 + D2 - 1"));
        let c = bp("D1*(D2 + 1)");
        let d = bp("D1*(D2 - 1)");
        assert_eq!(c.gcd(&d), bp("D1"));
        assert_eq!(bp("D1^2 + D2^2 + 1").gcd(&bp("D2")), bp("1"));
    }

    #[test]
    fn discriminant_of_circle() {
        let c = bp("D1^2 + D2^2 - 1");
        let disc = c.resultant_v(&c.derivative_v());
        assert_eq!(disc, QPoly::new(vec![rat(-4, 1), rat(0, 1), rat(4, 1)]));
    }

    #[test]
    fn resultant_matches_univariate_at_points() {
        let a = bp("D1*D2^2 + 3*D2 - D1^2");
        let b = bp("D2^3 - D1*D2 + 2");
        let r = a.resultant_v(&b);
        for x in -3..=3 {
            let x = rat(x, 1);
            let direct = resultant(&a.eval_u(&x), &b.eval_u(&x)).unwrap();
            if !a.lead().eval(&x).is_zero() {
                assert_eq!(r.eval(&x), direct);
            }
        }
    }

    #[test]
    fn squarefree_in_v() {
        let a = bp("(D2 - D1)^2*(D2 + 1)");
        assert_eq!(a.squarefree_v(), bp("(D2 - D1)*(D2 + 1)"));
    }
}
