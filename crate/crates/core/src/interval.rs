//! Outward-rounded interval arithmetic and the Krawczyk test for square
//! real polynomial systems.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::gaussian::{rat_to_f64, Rational};
use crate::poly::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// Enclosure of an exact rational.
    pub fn from_rational(q: &Rational) -> Self {
        let f = rat_to_f64(q);
        Self { lo: f.next_down(), hi: f.next_up() }
    }

    pub fn around(x: f64, r: f64) -> Self {
        Self { lo: (x - r).next_down(), hi: (x + r).next_up() }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    /// Strict containment in the interior of `other`.
    pub fn interior_of(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn powi(self, e: u32) -> Self {
        if e == 0 {
            return Self::point(1.0);
        }
        if e.is_multiple_of(2) && self.contains_zero() {
            let m = self.mag();
            let mut hi = 1.0f64;
            for _ in 0..e {
                hi = (hi * m).next_up();
            }
            return Self { lo: 0.0, hi };
        }
        let mut acc = self;
        for _ in 1..e {
            acc = acc * self;
        }
        acc
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval { lo: (self.lo + o.lo).next_down(), hi: (self.hi + o.hi).next_up() }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval { lo: (self.lo - o.hi).next_down(), hi: (self.hi - o.lo).next_up() }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo: lo.next_down(), hi: hi.next_up() }
    }
}

/// A real polynomial with interval-enclosed coefficients.
#[derive(Clone, Debug)]
pub struct IntervalPoly {
    terms: Vec<(Vec<u32>, Interval)>,
}

impl IntervalPoly {
    /// Panics in debug builds if `p` has non-real coefficients.
    pub fn from_real(p: &Polynomial) -> Self {
        debug_assert!(p.is_real());
        Self { terms: p.terms().map(|(a, c)| (a.exps().to_vec(), Interval::from_rational(&c.re))).collect() }
    }

    pub fn eval(&self, x: &[Interval]) -> Interval {
        let mut acc = Interval::point(0.0);
        for (a, c) in &self.terms {
            let mut m = *c;
            for (k, &e) in a.iter().enumerate() {
                if e > 0 {
                    m = m * x[k].powi(e);
                }
            }
            acc = acc + m;
        }
        acc
    }
}

/// Result of a successful Krawczyk test: a box of the given radius around
/// the center contains exactly one zero of the system.
#[derive(Clone, Debug, PartialEq)]
pub struct KrawczykCertificate {
    pub center: Vec<f64>,
    pub radius: f64,
}

/// Krawczyk test for `n` real polynomials in `n` unknowns around `x`.
pub fn krawczyk(system: &[Polynomial], x: &[f64]) -> Option<KrawczykCertificate> {
    let n = x.len();
    if system.len() != n || n == 0 {
        return None;
    }
    let g: Vec<IntervalPoly> = system.iter().map(IntervalPoly::from_real).collect();
    let jac: Vec<Vec<IntervalPoly>> = system
        .iter()
        .map(|p| (0..n).map(|k| IntervalPoly::from_real(&p.differentiate(k).expect("index in range"))).collect())
        .collect();
    let center: Vec<Interval> = x.iter().map(|&v| Interval::point(v)).collect();
    let mid_jac = DMatrix::from_fn(n, n, |i, k| jac[i][k].eval(&center).mid());
    let y = mid_jac.try_inverse()?;
    let gx: Vec<Interval> = g.iter().map(|p| p.eval(&center)).collect();
    for radius in [1e-12, 1e-10, 1e-8, 1e-6, 1e-4] {
        let bx: Vec<Interval> = x.iter().map(|&v| Interval::around(v, radius)).collect();
        let jx: Vec<Vec<Interval>> = jac.iter().map(|row| row.iter().map(|p| p.eval(&bx)).collect()).collect();
        let dx: Vec<Interval> = bx.iter().zip(x).map(|(b, &c)| *b - Interval::point(c)).collect();
        let mut inside = true;
        for i in 0..n {
            let mut yg = Interval::point(0.0);
            for (k, gk) in gx.iter().enumerate() {
                yg = yg + Interval::point(y[(i, k)]) * *gk;
            }
            let mut acc = Interval::point(x[i]) - yg;
            for j in 0..n {
                let mut m = Interval::point(if i == j { 1.0 } else { 0.0 });
                for k in 0..n {
                    m = m - Interval::point(y[(i, k)]) * jx[k][j];
                }
                acc = acc + m * dx[j];
            }
            if !acc.interior_of(&bx[i]) {
                inside = false;
                break;
            }
        }
        if inside {
            return Some(KrawczykCertificate { center: x.to_vec(), radius });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::rat;
    use crate::parser::parse_operator;

    #[test]
    fn arithmetic_encloses() {
        let a = Interval::new(-1.0, 2.0);
        let b = Interval::new(3.0, 4.0);
        let p = a * b;
        assert!(p.lo <= -4.0 && p.hi >= 8.0);
        let s = a.powi(2);
        assert!(s.lo == 0.0 && s.hi >= 4.0);
        let t = Interval::from_rational(&rat(1, 3));
        assert!(t.lo < 1.0 / 3.0 + 1e-17 && t.hi > 1.0 / 3.0 - 1e-17);
    }

    #[test]
    fn certifies_circle_line_intersection() {
        let circle = parse_operator("D1^2 + D2^2 - 1", None).unwrap();
        let line = parse_operator("D1 - D2", None).unwrap();
        let h = 0.5f64.sqrt();
        let c = krawczyk(&[circle, line], &[h, h]).expect("regular zero");
        assert!(c.radius <= 1e-8);
    }

    #[test]
    fn rejects_non_zero() {
        let circle = parse_operator("D1^2 + D2^2 - 1", None).unwrap();
        let line = parse_operator("D1 - D2 - 3", None).unwrap();
        assert!(krawczyk(&[circle, line], &[0.7, 0.7]).is_none());
    }
}
