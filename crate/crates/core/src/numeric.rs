//! Floating-point evaluation of polynomial systems and multistart
//! minimization of `F = sum |P_j|^2` on the unit sphere.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

use crate::gaussian::Rational;
use crate::poly::Polynomial;

/// A polynomial prepared for repeated floating evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    n: usize,
    terms: Vec<(Vec<u32>, Complex64)>,
    max_exp: Vec<u32>,
}

impl CompiledPoly {
    pub fn new(p: &Polynomial) -> Self {
        let n = p.dim();
        let terms: Vec<(Vec<u32>, Complex64)> = p.terms().map(|(a, c)| (a.exps().to_vec(), c.to_complex())).collect();
        let max_exp = (0..n).map(|k| terms.iter().map(|t| t.0[k]).max().unwrap_or(0)).collect();
        Self { n, terms, max_exp }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn powers(&self, x: &[f64]) -> Vec<Vec<f64>> {
        x.iter()
            .zip(&self.max_exp)
            .map(|(&v, &m)| {
                let mut p = Vec::with_capacity(m as usize + 1);
                p.push(1.0);
                for e in 1..=m as usize {
                    p.push(p[e - 1] * v);
                }
                p
            })
            .collect()
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let pw = self.powers(x);
        self.terms
            .iter()
            .map(|(a, c)| c * a.iter().enumerate().map(|(k, &e)| pw[k][e as usize]).product::<f64>())
            .sum()
    }

    /// Value and gradient with respect to the real coordinates.
    pub fn eval_grad(&self, x: &[f64], grad: &mut [Complex64]) -> Complex64 {
        let pw = self.powers(x);
        grad.iter_mut().for_each(|g| *g = Complex64::zero());
        let mut val = Complex64::zero();
        for (a, c) in &self.terms {
            val += c * a.iter().enumerate().map(|(k, &e)| pw[k][e as usize]).product::<f64>();
            for k in 0..self.n {
                if a[k] == 0 {
                    continue;
                }
                let mut m = a[k] as f64 * pw[k][a[k] as usize - 1];
                for (i, &e) in a.iter().enumerate() {
                    if i != k {
                        m *= pw[i][e as usize];
                    }
                }
                grad[k] += c * m;
            }
        }
        val
    }
}

/// `F(x) = sum_j |P_j(x)|^2` for a list of polynomials in a common dimension.
#[derive(Clone, Debug)]
pub struct SumOfSquares {
    n: usize,
    polys: Vec<CompiledPoly>,
}

impl SumOfSquares {
    pub fn new(ps: &[Polynomial]) -> Self {
        let n = ps.first().map_or(0, Polynomial::dim);
        Self { n, polys: ps.iter().map(CompiledPoly::new).collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.polys.iter().map(|p| p.eval(x).norm_sqr()).sum()
    }

    pub fn value_grad(&self, x: &[f64], g: &mut [f64]) -> f64 {
        let mut buf = vec![Complex64::zero(); self.n];
        g.iter_mut().for_each(|v| *v = 0.0);
        let mut f = 0.0;
        for p in &self.polys {
            let v = p.eval_grad(x, &mut buf);
            f += v.norm_sqr();
            for k in 0..self.n {
                g[k] += 2.0 * (v.conj() * buf[k]).re;
            }
        }
        f
    }

    /// Residual vector `(Re P_j, Im P_j)_j` and its Jacobian.
    pub fn residuals(&self, x: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let m = 2 * self.polys.len();
        let mut r = DVector::zeros(m);
        let mut jac = DMatrix::zeros(m, self.n);
        let mut buf = vec![Complex64::zero(); self.n];
        for (j, p) in self.polys.iter().enumerate() {
            let v = p.eval_grad(x, &mut buf);
            r[2 * j] = v.re;
            r[2 * j + 1] = v.im;
            for k in 0..self.n {
                jac[(2 * j, k)] = buf[k].re;
                jac[(2 * j + 1, k)] = buf[k].im;
            }
        }
        (r, jac)
    }
}

const PRIMES: [u32; 32] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109,
    113, 127, 131,
];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Point `index` of the Halton sequence in `[0, 1)^dim`; dimensions beyond
/// the prime table are scrambled with a seeded shift.
pub fn halton(index: u64, dim: usize, shift: &[f64]) -> Vec<f64> {
    (0..dim)
        .map(|k| {
            let base = PRIMES[k % PRIMES.len()] as u64;
            let v = radical_inverse(index + 1 + (k / PRIMES.len()) as u64 * 7919, base);
            (v + shift.get(k).copied().unwrap_or(0.0)).fract()
        })
        .collect()
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn normalize(x: &mut [f64]) {
    let r = norm(x);
    if r > 0.0 {
        x.iter_mut().for_each(|v| *v /= r);
    }
}

/// Inverse standard normal CDF (Acklam's rational approximation); used to
/// map low-discrepancy cube points to near-uniform sphere points.
fn inv_normal(p: f64) -> f64 {
    const A: [f64; 6] =
        [-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02, 1.383_577_518_672_69e2, -3.066479806614716e+01, 2.506628277459239e+00];
    const B: [f64; 5] =
        [-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02, 6.680131188771972e+01, -1.328068155288572e+01];
    const C: [f64; 6] =
        [-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00, -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00];
    const D: [f64; 4] = [7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00, 3.754408661907416e+00];
    let p = p.clamp(1e-12, 1.0 - 1e-12);
    let plow = 0.02425;
    if p < plow {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - plow {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -inv_normal(1.0 - p)
    }
}

/// Low-discrepancy points on the unit sphere.
pub fn sphere_points(count: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
    (0..count as u64)
        .map(|i| {
            let mut x: Vec<f64> = halton(i, dim, &shift).into_iter().map(inv_normal).collect();
            if norm(&x) == 0.0 {
                x[0] = 1.0;
            }
            normalize(&mut x);
            x
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct MinimizerConfig {
    pub starts: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for MinimizerConfig {
    fn default() -> Self {
        Self { starts: 256, tol: 1e-10, max_iter: 400, seed: 0x5eed }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereMinimum {
    pub point: Vec<f64>,
    pub value: f64,
}

fn tangent(x: &[f64], g: &[f64]) -> Vec<f64> {
    let d: f64 = x.iter().zip(g).map(|(a, b)| a * b).sum();
    g.iter().zip(x).map(|(gi, xi)| gi - d * xi).collect()
}

/// Projected gradient descent with Armijo backtracking and
/// Barzilai-Borwein step proposals, from one start.
pub fn descend(f: &SumOfSquares, start: &[f64], max_iter: usize, tol: f64) -> SphereMinimum {
    let n = f.dim();
    let mut x = start.to_vec();
    normalize(&mut x);
    let mut g = vec![0.0; n];
    let mut fx = f.value_grad(&x, &mut g);
    let mut gt = tangent(&x, &g);
    let mut step = 1.0 / (norm(&gt) + 1e-300);
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    for _ in 0..max_iter {
        let gn = norm(&gt);
        if fx < tol * 1e-6 || gn < 1e-15 {
            break;
        }
        if let Some((px, pg)) = &prev {
            let s: Vec<f64> = x.iter().zip(px).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = gt.iter().zip(pg).map(|(a, b)| a - b).collect();
            let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
            let ss: f64 = s.iter().map(|a| a * a).sum();
            if sy > 0.0 {
                step = (ss / sy).clamp(1e-12 / gn, 1.0 / gn);
            }
        }
        let mut accepted = false;
        let mut t = step;
        for _ in 0..40 {
            let mut y: Vec<f64> = x.iter().zip(&gt).map(|(a, b)| a - t * b).collect();
            normalize(&mut y);
            let fy = f.value(&y);
            if fy <= fx - 1e-4 * t * gn * gn {
                prev = Some((x.clone(), gt.clone()));
                x = y;
                fx = f.value_grad(&x, &mut g);
                gt = tangent(&x, &g);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        step = t * 2.0;
    }
    SphereMinimum { point: x, value: fx }
}

/// Levenberg-Marquardt polishing of `(Re P_j, Im P_j, |x|^2 - 1) = 0`.
pub fn polish(f: &SumOfSquares, start: &[f64], iters: usize) -> SphereMinimum {
    let n = f.dim();
    let mut x = start.to_vec();
    normalize(&mut x);
    let mut fx = f.value(&x);
    let mut mu = 1e-3;
    for _ in 0..iters {
        if fx == 0.0 {
            break;
        }
        let (r, j) = f.residuals(&x);
        let m = r.len();
        let mut ra = DVector::zeros(m + 1);
        let mut ja = DMatrix::zeros(m + 1, n);
        ra.rows_mut(0, m).copy_from(&r);
        ja.view_mut((0, 0), (m, n)).copy_from(&j);
        ra[m] = x.iter().map(|v| v * v).sum::<f64>() - 1.0;
        for k in 0..n {
            ja[(m, k)] = 2.0 * x[k];
        }
        let jt = ja.transpose();
        let jtj = &jt * &ja;
        let rhs = -(&jt * &ra);
        let mut improved = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            let scale = (0..n).map(|k| jtj[(k, k)]).fold(0.0, f64::max).max(1e-300);
            for k in 0..n {
                a[(k, k)] += mu * scale;
            }
            let Some(delta) = a.lu().solve(&rhs) else {
                mu *= 10.0;
                continue;
            };
            let mut y: Vec<f64> = x.iter().zip(delta.iter()).map(|(a, b)| a + b).collect();
            normalize(&mut y);
            let fy = f.value(&y);
            if fy < fx {
                x = y;
                fx = fy;
                mu = (mu * 0.3).max(1e-15);
                improved = true;
                break;
            }
            mu *= 10.0;
        }
        if !improved {
            break;
        }
    }
    SphereMinimum { point: x, value: fx }
}

/// Multistart minimization; returns distinct local minima sorted by value,
/// then lexicographically by point.
pub fn minimize_on_sphere(f: &SumOfSquares, cfg: &MinimizerConfig, extra_starts: &[Vec<f64>]) -> Vec<SphereMinimum> {
    let n = f.dim();
    let mut starts = extra_starts.to_vec();
    starts.extend(sphere_points(cfg.starts, n, cfg.seed));
    let mut found: Vec<SphereMinimum> = Vec::new();
    for s in &starts {
        let mut m = descend(f, s, cfg.max_iter, cfg.tol);
        if m.value < 1e-4 * (1.0 + f.value(s)) {
            let p = polish(f, &m.point, 60);
            if p.value <= m.value {
                m = p;
            }
        }
        let dup = found.iter_mut().find(|q| {
            let d: f64 = q.point.iter().zip(&m.point).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            d < 1e-6
        });
        match dup {
            Some(q) if m.value < q.value => *q = m,
            Some(_) => {}
            None => found.push(m),
        }
    }
    found.sort_by(|a, b| {
        a.value.partial_cmp(&b.value).unwrap_or(std::cmp::Ordering::Equal).then_with(|| {
            a.point.iter().zip(&b.point).map(|(u, v)| u.partial_cmp(v).unwrap()).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    found
}

/// Best rational approximation with denominator at most `max_den`.
pub fn rationalize(x: f64, max_den: i64) -> Rational {
    if !x.is_finite() {
        return Rational::zero();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_den as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return Rational::from_integer(BigInt::from(x.round() as i64));
    }
    Rational::new(BigInt::from(p1), BigInt::from(q1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::rat;
    use crate::parser::parse_operator;

    #[test]
    fn gradient_matches_finite_differences() {
        let p = parse_operator("D1^2*D2 + i*D3^3 - 2*D1*D3 + 1", None).unwrap();
        let f = SumOfSquares::new(&[p]);
        let x = [0.3, -0.7, 0.5];
        let mut g = [0.0; 3];
        f.value_grad(&x, &mut g);
        for k in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[k] += 1e-6;
            xm[k] -= 1e-6;
            let fd = (f.value(&xp) - f.value(&xm)) / 2e-6;
            assert!((fd - g[k]).abs() < 1e-6, "{k}: {fd} vs {}", g[k]);
        }
    }

    #[test]
    fn finds_cone_zero() {
        let p = parse_operator("D1^2 + D2^2 - D3^2", None).unwrap();
        let f = SumOfSquares::new(&[p]);
        let mins = minimize_on_sphere(&f, &MinimizerConfig { starts: 32, ..Default::default() }, &[]);
        assert!(mins[0].value < 1e-20);
        assert!((mins[0].point[2].abs() - 0.5f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn elliptic_minimum_is_positive() {
        let p = parse_operator("D1^2 + D2^2 + D3^2", None).unwrap();
        let f = SumOfSquares::new(&[p]);
        let mins = minimize_on_sphere(&f, &MinimizerConfig { starts: 16, ..Default::default() }, &[]);
        assert!((mins[0].value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rational_approximation() {
        assert_eq!(rationalize(0.75, 100), rat(3, 4));
        assert_eq!(rationalize(-1.0 / 3.0 + 1e-14, 1000), rat(-1, 3));
        assert_eq!(rationalize(2.0, 10), rat(2, 1));
    }

    #[test]
    fn sphere_points_are_unit() {
        for p in sphere_points(50, 5, 1) {
            assert!((norm(&p) - 1.0).abs() < 1e-12);
        }
    }
}
