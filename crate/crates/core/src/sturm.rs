//! Real root isolation for rational univariate polynomials with Sturm
//! sequences and bisection.

use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::gaussian::{rat, rat_to_f64, Rational};
use crate::univariate::QPoly;

/// Signed remainder sequence `p, p', -rem(p, p'), ...`.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<QPoly>,
}

impl SturmSequence {
    pub fn new(p: &QPoly) -> Self {
        let mut seq = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            seq.push(d);
        }
        while seq.len() >= 2 {
            let k = seq.len();
            let r = seq[k - 2].div_rem(&seq[k - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        Self { seq }
    }

    fn variations<I: Iterator<Item = Ordering>>(signs: I) -> usize {
        let mut last = Ordering::Equal;
        let mut v = 0;
        for s in signs {
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::variations(self.seq.iter().map(|q| sign(&q.eval(x))))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|q| sign(&q.lead())))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|q| {
            let s = sign(&q.lead());
            if q.degree().unwrap_or(0) % 2 == 1 {
                s.reverse()
            } else {
                s
            }
        }))
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }
}

pub(crate) fn sign(q: &Rational) -> Ordering {
    if q.is_zero() {
        Ordering::Equal
    } else if q.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Cauchy bound: every complex root satisfies `|z| < B`.
pub fn cauchy_bound(p: &QPoly) -> Rational {
    let lead = p.lead().abs();
    let mut m = Rational::zero();
    if let Some(d) = p.degree() {
        for c in &p.coeffs()[..d] {
            let r = c.abs() / &lead;
            if r > m {
                m = r;
            }
        }
    }
    m + Rational::one()
}

/// An interval holding exactly one real root of a square-free polynomial.
/// Either `lo == hi` (an exact rational root) or the polynomial is non-zero
/// with opposite signs at both endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct RootInterval {
    pub poly: QPoly,
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// One bisection step.
    pub fn bisect(&mut self) {
        if self.is_exact() {
            return;
        }
        let mid = (&self.lo + &self.hi) / Rational::from_integer(2.into());
        let sm = sign(&self.poly.eval(&mid));
        if sm == Ordering::Equal {
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        if sm == sign(&self.poly.eval(&self.lo)) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn refine_to(&mut self, width: &Rational) {
        while !self.is_exact() && &self.width() > width {
            self.bisect();
        }
    }

    /// Double-precision value, refined to the last few ulps.
    pub fn to_f64(&self) -> f64 {
        if let Some(v) = self.exact_value() {
            return rat_to_f64(v);
        }
        let mut r = self.clone();
        let scale = rat_to_f64(&r.lo).abs().max(rat_to_f64(&r.hi).abs()).max(1.0);
        let tol = Rational::from_float(scale * 1e-17).unwrap_or_else(|| rat(1, 1 << 40));
        r.refine_to(&tol);
        rat_to_f64(&((&r.lo + &r.hi) / Rational::from_integer(2.into())))
    }

    /// Exact sign of `q` at the isolated root.
    pub fn sign_of(&self, q: &QPoly) -> Ordering {
        if q.is_zero() {
            return Ordering::Equal;
        }
        if let Some(v) = self.exact_value() {
            return sign(&q.eval(v));
        }
        let g = self.poly.gcd(q);
        if !g.is_constant() {
            let sg = SturmSequence::new(&g);
            if sg.count(&self.lo, &self.hi) > 0 {
                return Ordering::Equal;
            }
        }
        let sq = SturmSequence::new(&q.squarefree_part());
        let mut r = self.clone();
        loop {
            let inside = sq.count(&r.lo, &r.hi) + usize::from(q.eval(&r.lo).is_zero());
            if inside == 0 {
                return sign(&q.eval(&r.lo));
            }
            r.bisect();
            if let Some(v) = r.exact_value() {
                return sign(&q.eval(v));
            }
        }
    }

    /// Whether `q` vanishes at the isolated root.
    pub fn is_root_of(&self, q: &QPoly) -> bool {
        self.sign_of(q) == Ordering::Equal
    }
}

/// Isolates the distinct real roots of `p` in `[lo, hi]` (either end may be
/// unbounded), sorted ascending.
pub fn real_roots(p: &QPoly, lo: Option<&Rational>, hi: Option<&Rational>) -> Result<Vec<RootInterval>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sf = p.squarefree_part();
    if sf.is_constant() {
        return Ok(Vec::new());
    }
    let bound = cauchy_bound(&sf);
    let a = lo.cloned().unwrap_or_else(|| -bound.clone());
    let b = hi.cloned().unwrap_or(bound);
    if a > b {
        return Ok(Vec::new());
    }
    let seq = SturmSequence::new(&sf);
    let mut out = Vec::new();
    if sf.eval(&a).is_zero() {
        out.push(RootInterval { poly: sf.clone(), lo: a.clone(), hi: a.clone() });
    }
    if a == b {
        return Ok(out);
    }
    let half = Rational::from_integer(2.into());
    let mut stack = vec![(a.clone(), b.clone(), seq.count(&a, &b))];
    let mut found = Vec::new();
    while let Some((x, y, c)) = stack.pop() {
        if c == 0 {
            continue;
        }
        if c == 1 {
            if sf.eval(&y).is_zero() {
                found.push(RootInterval { poly: sf.clone(), lo: y.clone(), hi: y });
                continue;
            }
            if !sf.eval(&x).is_zero() {
                found.push(RootInterval { poly: sf.clone(), lo: x, hi: y });
                continue;
            }
        }
        let mid = (&x + &y) / &half;
        let c1 = seq.count(&x, &mid);
        stack.push((mid.clone(), y, c - c1));
        stack.push((x, mid, c1));
    }
    found.sort_by(|u, v| u.lo.cmp(&v.lo));
    out.extend(found);
    Ok(out)
}

/// Number of distinct real roots on the whole line.
pub fn count_real_roots(p: &QPoly) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sf = p.squarefree_part();
    let s = SturmSequence::new(&sf);
    Ok(s.variations_at_neg_inf().saturating_sub(s.variations_at_pos_inf()))
}
