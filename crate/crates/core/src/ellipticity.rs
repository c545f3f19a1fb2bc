//! Ellipticity and l-quasiellipticity of operator systems, existence and
//! construction of quasielliptic systems, and the algebraic necessary
//! conditions built on common real zeros of principal symbols.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::binary_form::split_rational_roots;
use crate::bivariate::BiPoly;
use crate::error::{Error, Result};
use crate::gaussian::{rat_int, rat_to_f64, serialize_opt_rational_vec, serialize_rational, GaussianRational, Rational};
use crate::interval::krawczyk;
use crate::linalg;
use crate::numeric::{minimize_on_sphere, norm, rationalize, sphere_points, MinimizerConfig, SumOfSquares};
use crate::poly::{MultiIndex, OperatorSystem, Polynomial, WeightVector};
use crate::sturm::{cauchy_bound, real_roots, RootInterval};
use crate::univariate::{GPoly, QPoly};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroWitness {
    /// Point on the unit sphere.
    pub point: Vec<f64>,
    /// Exact zero before normalization, when one is known.
    #[serde(serialize_with = "serialize_opt_rational_vec")]
    pub exact_point: Option<Vec<Rational>>,
    pub residual: f64,
    pub certified: bool,
    pub log: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum EllipticityStatus {
    QuasiElliptic,
    NotQuasiElliptic { witness: ZeroWitness },
    NumericallyQuasiElliptic { min_value: f64, samples: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Exactness {
    Exact,
    Numeric,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EllipticityVerdict {
    pub status: EllipticityStatus,
    pub exactness: Exactness,
    pub weights: WeightVector,
    pub method: String,
}

impl EllipticityVerdict {
    /// True unless a common zero was found.
    pub fn passes(&self) -> bool {
        !matches!(self.status, EllipticityStatus::NotQuasiElliptic { .. })
    }

    pub fn witness(&self) -> Option<&ZeroWitness> {
        match &self.status {
            EllipticityStatus::NotQuasiElliptic { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self.status {
            EllipticityStatus::QuasiElliptic => "QuasiElliptic",
            EllipticityStatus::NotQuasiElliptic { .. } => "NotQuasiElliptic",
            EllipticityStatus::NumericallyQuasiElliptic { .. } => "NumericallyQuasiElliptic",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub starts: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { starts: 256, tol: 1e-10, seed: 0x5eed }
    }
}

impl SearchConfig {
    fn minimizer(&self) -> MinimizerConfig {
        MinimizerConfig { starts: self.starts, tol: self.tol, seed: self.seed, ..MinimizerConfig::default() }
    }
}

fn weight_error(e: Error) -> Error {
    match e {
        Error::TermAboveWeight { weight } => Error::WeightViolation(format!("term of weighted degree {weight} above 1")),
        Error::DimensionMismatch { expected, got } => {
            Error::WeightViolation(format!("weight vector has {got} entries, expected {expected}"))
        }
        other => other,
    }
}

fn residual_f64(parts: &[Polynomial], x: &[f64]) -> f64 {
    parts.iter().map(|p| p.eval_f64(x).norm_sqr()).sum()
}

/// Scales `x` along the quasi-homogeneous orbit `t -> (t^{1/l_k} x_k)` onto
/// the unit sphere. Isotropic witnesses are also sign-normalized.
pub fn normalize_witness(x: &[f64], l: &WeightVector) -> Vec<f64> {
    let r = norm(x);
    if r == 0.0 {
        return x.to_vec();
    }
    if l.is_isotropic() {
        let mut y: Vec<f64> = x.iter().map(|v| v / r).collect();
        if let Some(first) = y.iter().find(|v| v.abs() > 1e-12) {
            if *first < 0.0 {
                y.iter_mut().for_each(|v| *v = -*v);
            }
        }
        return y;
    }
    let scaled = |s: f64| -> Vec<f64> {
        x.iter().zip(l.entries()).map(|(v, &lk)| v * (s / lk as f64).exp()).collect()
    };
    let (mut lo, mut hi) = (-200.0f64, 200.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if norm(&scaled(mid)) > 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut y = scaled(0.5 * (lo + hi));
    let r = norm(&y);
    y.iter_mut().for_each(|v| *v /= r);
    y
}

fn exact_witness(parts: &[Polynomial], point: Vec<Rational>, l: &WeightVector, log: Vec<String>) -> ZeroWitness {
    let f: Vec<f64> = point.iter().map(rat_to_f64).collect();
    let unit = normalize_witness(&f, l);
    ZeroWitness { residual: residual_f64(parts, &unit), point: unit, exact_point: Some(point), certified: true, log }
}

pub(crate) fn all_vanish(parts: &[Polynomial], point: &[Rational]) -> bool {
    parts.iter().all(|p| p.evaluate_rational(point).map(|v| v.is_zero()).unwrap_or(false))
}

fn verdict(status: EllipticityStatus, exactness: Exactness, l: &WeightVector, method: &str) -> EllipticityVerdict {
    EllipticityVerdict { status, exactness, weights: l.clone(), method: method.to_string() }
}

/// `p(s, sigma)` as a polynomial in `s`.
fn slice_2d(p: &Polynomial, sigma: &Rational) -> GPoly {
    let mut coeffs: Vec<GaussianRational> = Vec::new();
    for (a, c) in p.terms() {
        let (d1, d2) = (a.exps()[0] as usize, a.exps()[1]);
        if coeffs.len() <= d1 {
            coeffs.resize(d1 + 1, GaussianRational::zero());
        }
        let f = GaussianRational::from_rational(num_traits::pow(sigma.clone(), d2 as usize));
        coeffs[d1] += &(c * &f);
    }
    GPoly::new(coeffs)
}

/// A common real zero of planar forms: either exact or an algebraic root of
/// the carrier polynomial at `xi_2 = sigma`.
#[derive(Clone, Debug)]
enum PlanarZero {
    Exact(Vec<Rational>),
    Algebraic { root: RootInterval, sigma: Rational },
}

/// Common real zeros of planar quasi-homogeneous parts, up to the orbit
/// action: the points `(+-1, 0)` and one representative per root at
/// `xi_2 = +-1`.
fn planar_zeros(parts: &[Polynomial], first_only: bool) -> Result<Vec<PlanarZero>> {
    let mut out = Vec::new();
    for s1 in [1i64, -1] {
        let pt = vec![rat_int(s1), Rational::zero()];
        if all_vanish(parts, &pt) {
            out.push(PlanarZero::Exact(pt));
            if first_only {
                return Ok(out);
            }
        }
    }
    for s2 in [1i64, -1] {
        let sigma = rat_int(s2);
        let g = parts.iter().fold(QPoly::zero(), |g, p| g.gcd(&slice_2d(p, &sigma).real_root_carrier()));
        if g.is_zero() {
            out.push(PlanarZero::Exact(vec![Rational::zero(), sigma.clone()]));
            if first_only {
                return Ok(out);
            }
            continue;
        }
        if g.is_constant() {
            continue;
        }
        let (rational, _, irrational) = split_rational_roots(&g.squarefree_part())?;
        for r in rational {
            out.push(PlanarZero::Exact(vec![r, sigma.clone()]));
            if first_only {
                return Ok(out);
            }
        }
        for root in irrational {
            out.push(PlanarZero::Algebraic { root, sigma: sigma.clone() });
            if first_only {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

fn planar_witness(parts: &[Polynomial], z: PlanarZero, l: &WeightVector) -> ZeroWitness {
    match z {
        PlanarZero::Exact(p) => exact_witness(parts, p, l, vec!["exact common zero of the planar forms".into()]),
        PlanarZero::Algebraic { mut root, sigma } => {
            root.refine_to(&Rational::new(BigInt::one(), BigInt::from(10u8).pow(30)));
            let x = [root.to_f64(), rat_to_f64(&sigma)];
            let unit = normalize_witness(&x, l);
            ZeroWitness {
                residual: residual_f64(parts, &unit),
                point: unit,
                exact_point: None,
                certified: true,
                log: vec![format!("isolated real root of {} at xi2 = {}", root.poly, sigma)],
            }
        }
    }
}

/// Variables forced to vanish at every common real zero, by repeatedly
/// reading off monomials that must vanish from the real and imaginary
/// parts.
fn forced_zero_variables(parts: &[Polynomial]) -> (Vec<bool>, Vec<String>) {
    let n = parts.first().map_or(0, Polynomial::dim);
    let mut forced = vec![false; n];
    let mut log = Vec::new();
    let reals: Vec<Polynomial> =
        parts.iter().flat_map(|p| [p.re_part(), p.im_part()]).filter(|p| !p.is_zero()).collect();
    loop {
        let mut changed = false;
        for a in &reals {
            let live: Vec<(&MultiIndex, &GaussianRational)> =
                a.terms().filter(|(m, _)| m.exps().iter().zip(&forced).all(|(&e, &f)| e == 0 || !f)).collect();
            if live.is_empty() || live.iter().any(|(m, _)| m.degree() == 0) {
                continue;
            }
            let single = live.len() == 1;
            let definite = live.iter().all(|(m, _)| m.exps().iter().all(|e| e % 2 == 0))
                && (live.iter().all(|(_, c)| c.re.is_positive()) || live.iter().all(|(_, c)| c.re.is_negative()));
            if !single && !definite {
                continue;
            }
            for (m, _) in live {
                let support: Vec<usize> = (0..n).filter(|&k| m.exps()[k] > 0).collect();
                if support.len() == 1 && !forced[support[0]] {
                    forced[support[0]] = true;
                    changed = true;
                    log.push(format!("xi{} = 0 forced by {}", support[0] + 1, a));
                }
            }
        }
        if !changed {
            break;
        }
    }
    (forced, log)
}

/// Small exact test points: sign vectors in `{-1, 0, 1}^n` for `n <= 6`,
/// otherwise axes and pairwise diagonals. Ordered by support size.
pub(crate) fn candidate_points(n: usize, isotropic: bool) -> Vec<Vec<Rational>> {
    let mut pts: Vec<Vec<i64>> = Vec::new();
    if n <= 6 {
        let total = 3usize.pow(n as u32);
        for code in 1..total {
            let mut c = code;
            let v: Vec<i64> = (0..n)
                .map(|_| {
                    let d = c % 3;
                    c /= 3;
                    [0, 1, -1][d]
                })
                .collect();
            pts.push(v);
        }
    } else {
        for a in 0..n {
            for sa in [1, -1] {
                let mut v = vec![0; n];
                v[a] = sa;
                pts.push(v.clone());
                for b in a + 1..n {
                    for sb in [1, -1] {
                        let mut w = v.clone();
                        w[b] = sb;
                        pts.push(w);
                    }
                }
            }
        }
    }
    if isotropic {
        pts.retain(|v| v.iter().find(|&&x| x != 0) == Some(&1));
    }
    pts.sort_by_key(|v| {
        let support: Vec<usize> = (0..n).filter(|&k| v[k] != 0).collect();
        (support.len(), support, v.iter().map(|&x| if x == 1 { 0 } else { 1 }).collect::<Vec<_>>())
    });
    pts.into_iter().map(|v| v.into_iter().map(rat_int).collect()).collect()
}

/// Rescales a numeric zero along its orbit so the largest coordinate is
/// `+-1`, then rounds to small rationals.
fn rationalize_zero(x: &[f64], l: &WeightVector) -> Vec<Rational> {
    let (m, xm) = x.iter().enumerate().fold((0, 0.0f64), |acc, (k, v)| if v.abs() > acc.1.abs() { (k, *v) } else { acc });
    let lm = l.entries()[m] as f64;
    x.iter()
        .zip(l.entries())
        .map(|(v, &lk)| {
            let y = v * xm.abs().powf(-lm / lk as f64);
            rationalize(y, 10_000)
        })
        .collect()
}

/// Square real system `(Re/Im parts that are not identically zero, |x|^2 - 1)`.
fn square_real_system(parts: &[Polynomial]) -> Vec<Polynomial> {
    let n = parts.first().map_or(0, Polynomial::dim);
    let mut sys: Vec<Polynomial> =
        parts.iter().flat_map(|p| [p.re_part(), p.im_part()]).filter(|p| !p.is_zero()).collect();
    let mut sphere = Polynomial::constant(n, GaussianRational::from_int(-1));
    for k in 0..n {
        sphere = &sphere + &Polynomial::var(n, k).pow(2);
    }
    sys.push(sphere);
    sys
}

/// Decides whether the given forms have a common real zero off the origin.
/// `l` controls the orbit normalization of witnesses.
pub fn common_zero_engine(parts: &[Polynomial], l: &WeightVector, cfg: &SearchConfig) -> Result<EllipticityVerdict> {
    let n = l.len();
    if parts.iter().all(Polynomial::is_zero) {
        let mut e = vec![Rational::zero(); n];
        e[0] = Rational::one();
        let w = exact_witness(parts, e, l, vec!["all forms vanish identically".into()]);
        return Ok(verdict(EllipticityStatus::NotQuasiElliptic { witness: w }, Exactness::Exact, l, "trivial"));
    }
    if parts.iter().any(|p| p.is_constant() && !p.is_zero()) {
        return Ok(verdict(EllipticityStatus::QuasiElliptic, Exactness::Exact, l, "non-zero constant form"));
    }
    if n == 1 {
        for s in [1i64, -1] {
            if all_vanish(parts, &[rat_int(s)]) {
                let w = exact_witness(parts, vec![rat_int(s)], l, vec![]);
                return Ok(verdict(EllipticityStatus::NotQuasiElliptic { witness: w }, Exactness::Exact, l, "line"));
            }
        }
        return Ok(verdict(EllipticityStatus::QuasiElliptic, Exactness::Exact, l, "line"));
    }
    if n == 2 {
        let zeros = planar_zeros(parts, true)?;
        return Ok(match zeros.into_iter().next() {
            Some(z) => verdict(
                EllipticityStatus::NotQuasiElliptic { witness: planar_witness(parts, z, l) },
                Exactness::Exact,
                l,
                "planar gcd",
            ),
            None => verdict(EllipticityStatus::QuasiElliptic, Exactness::Exact, l, "planar gcd"),
        });
    }
    let (forced, log) = forced_zero_variables(parts);
    if forced.iter().all(|&f| f) {
        let method = format!("symbolic slots: {}", log.join("; "));
        return Ok(verdict(EllipticityStatus::QuasiElliptic, Exactness::Exact, l, &method));
    }
    for pt in candidate_points(n, l.is_isotropic()) {
        if all_vanish(parts, &pt) {
            let w = exact_witness(parts, pt, l, vec!["exact zero among lattice candidates".into()]);
            return Ok(verdict(EllipticityStatus::NotQuasiElliptic { witness: w }, Exactness::Exact, l, "lattice candidates"));
        }
    }
    let f = SumOfSquares::new(parts);
    let mins = minimize_on_sphere(&f, &cfg.minimizer(), &[]);
    let best = &mins[0];
    if best.value >= cfg.tol {
        return Ok(verdict(
            EllipticityStatus::NumericallyQuasiElliptic { min_value: best.value, samples: cfg.starts },
            Exactness::Numeric,
            l,
            "multistart sphere minimization",
        ));
    }
    let mut log = vec![format!("multistart minimum {:.3e} from {} starts, seed {}", best.value, cfg.starts, cfg.seed)];
    let q = rationalize_zero(&best.point, l);
    if all_vanish(parts, &q) {
        log.push("rationalized to an exact zero".into());
        let w = exact_witness(parts, q, l, log);
        return Ok(verdict(EllipticityStatus::NotQuasiElliptic { witness: w }, Exactness::Exact, l, "rationalized minimizer"));
    }
    let sys = square_real_system(parts);
    let certified = if sys.len() == n {
        match krawczyk(&sys, &best.point) {
            Some(c) => {
                log.push(format!("Krawczyk box of radius {:.1e} contains a unique zero", c.radius));
                true
            }
            None => {
                log.push("Krawczyk test inconclusive".into());
                false
            }
        }
    } else {
        log.push(format!("real system is {}x{}; no interval certificate", sys.len(), n));
        false
    };
    let point = normalize_witness(&best.point, l);
    let w = ZeroWitness { residual: residual_f64(parts, &point), point, exact_point: None, certified, log };
    Ok(verdict(EllipticityStatus::NotQuasiElliptic { witness: w }, Exactness::Numeric, l, "multistart sphere minimization"))
}

pub fn is_quasielliptic(s: &OperatorSystem, l: &WeightVector) -> Result<EllipticityVerdict> {
    is_quasielliptic_with(s, l, &SearchConfig::default())
}

pub fn is_quasielliptic_with(s: &OperatorSystem, l: &WeightVector, cfg: &SearchConfig) -> Result<EllipticityVerdict> {
    let parts = s.principal_parts_for(l).map_err(weight_error)?;
    common_zero_engine(&parts, l, cfg)
}

/// Ellipticity with respect to the isotropic order of the system.
pub fn is_elliptic(s: &OperatorSystem) -> Result<EllipticityVerdict> {
    is_elliptic_with(s, &SearchConfig::default())
}

pub fn is_elliptic_with(s: &OperatorSystem, cfg: &SearchConfig) -> Result<EllipticityVerdict> {
    let l = s.isotropic_order()?;
    is_quasielliptic_with(s, &WeightVector::isotropic(s.dim(), l.max(1)), cfg)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Existence {
    Exists { reason: String },
    NotExists { odd: usize, bound: usize },
}

pub fn exists_quasielliptic(l: &WeightVector, n_ops: usize) -> Existence {
    let n = l.len();
    let odd = l.entries().iter().filter(|&&x| x % 2 == 1).count();
    if n <= 2 * n_ops {
        return Existence::Exists { reason: format!("n = {n} <= 2N = {}", 2 * n_ops) };
    }
    if n_ops >= 1 && odd < 2 * n_ops {
        Existence::Exists { reason: format!("{odd} odd weights <= 2N-1 = {}", 2 * n_ops - 1) }
    } else {
        Existence::NotExists { odd, bound: (2 * n_ops).saturating_sub(1) }
    }
}

/// Builds an `N`-operator l-quasielliptic system by pairing coordinates.
pub fn construct_quasielliptic(l: &WeightVector, n_ops: usize) -> Result<OperatorSystem> {
    if n_ops == 0 || matches!(exists_quasielliptic(l, n_ops), Existence::NotExists { .. }) {
        return Err(Error::NoSuchSystem);
    }
    let n = l.len();
    let w = l.entries();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&k| (w[k].is_multiple_of(2), k));
    let pow = |k: usize| Polynomial::var(n, k).pow(w[k]);
    let i = GaussianRational::i();
    let pair = |a: usize, b: usize| &pow(a) + &pow(b).scale(&i);
    let mut ops = Vec::new();
    if n <= 2 * n_ops {
        for chunk in order.chunks(2) {
            ops.push(if chunk.len() == 2 { pair(chunk[0], chunk[1]) } else { pow(chunk[0]) });
        }
    } else {
        let paired = 2 * (n_ops - 1);
        for chunk in order[..paired].chunks(2) {
            ops.push(pair(chunk[0], chunk[1]));
        }
        let rest = &order[paired..];
        let mut last = pow(rest[0]).scale(&i);
        for &k in &rest[1..] {
            last = &last + &pow(k);
        }
        ops.push(last);
    }
    while ops.len() < n_ops {
        ops.push(ops[0].clone());
    }
    OperatorSystem::new(ops, Some(l.clone()))
}

/// Common-zero test for the gradients of the principal parts.
pub fn principal_type_check(s: &OperatorSystem) -> Result<EllipticityVerdict> {
    let l = s.isotropic_order()?;
    let n = s.dim();
    let mut grads = Vec::new();
    for p in s.principal_parts() {
        for k in 0..n {
            grads.push(p.differentiate(k)?);
        }
    }
    common_zero_engine(&grads, &WeightVector::isotropic(n, l.saturating_sub(1).max(1)), &SearchConfig::default())
}

/// Exact rank over Q of the real Jacobian of `(Re P_j^l, Im P_j^l)` at `point`.
pub fn jacobian_rank_at(s: &OperatorSystem, point: &[Rational]) -> Result<usize> {
    if point.len() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), got: point.len() });
    }
    if point.iter().all(Zero::is_zero) {
        return Err(Error::ZeroPoint);
    }
    let parts = s.principal_parts_for(&s.weights()).map_err(weight_error)?;
    let mut rows = Vec::new();
    for p in &parts {
        let mut re = Vec::new();
        let mut im = Vec::new();
        for k in 0..s.dim() {
            let v = p.differentiate(k)?.evaluate_rational(point)?;
            re.push(v.re);
            im.push(v.im);
        }
        rows.push(re);
        rows.push(im);
    }
    Ok(linalg::rank(&rows))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Subordination {
    Coefficients { lambdas: Vec<GaussianRational> },
    /// `certificate` assigns weights `y_m` to monomials `m` with
    /// `sum_m y_m coeff_m(P_j^l) = 0` for all `j` and `sum_m y_m coeff_m(Q^l) = 1`.
    NoSolution { certificate: Vec<(MultiIndex, GaussianRational)> },
}

/// Solves `Q^l = sum_j lambda_j P_j^l` over Q(i).
pub fn subordination_principal(q: &Polynomial, s: &OperatorSystem, l: &WeightVector) -> Result<Subordination> {
    if q.dim() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), got: q.dim() });
    }
    let ql = q.l_principal_part(l).map_err(weight_error)?;
    let parts = s.principal_parts_for(l).map_err(weight_error)?;
    let monos: BTreeSet<MultiIndex> =
        parts.iter().chain(std::iter::once(&ql)).flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
    let monos: Vec<MultiIndex> = monos.into_iter().collect();
    let a: Vec<Vec<GaussianRational>> = monos.iter().map(|m| parts.iter().map(|p| p.coeff(m)).collect()).collect();
    let b: Vec<GaussianRational> = monos.iter().map(|m| ql.coeff(m)).collect();
    if monos.is_empty() {
        return Ok(Subordination::Coefficients { lambdas: vec![GaussianRational::zero(); parts.len()] });
    }
    if let Some(lambdas) = linalg::solve(&a, &b) {
        return Ok(Subordination::Coefficients { lambdas });
    }
    let y = linalg::infeasibility_certificate(&a, &b).expect("inconsistent system has a certificate");
    let certificate = monos.into_iter().zip(y).filter(|(_, c)| !c.is_zero()).collect();
    Ok(Subordination::NoSolution { certificate })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum AlgInequality {
    /// Along the curve `xi_k = t^{w_k} d_k` the symbol `Q` grows like
    /// `t^q_growth` while every `P_j` grows at most like `t^p_growth`.
    Falsified {
        direction: Vec<f64>,
        #[serde(serialize_with = "serialize_opt_rational_vec")]
        exact_direction: Option<Vec<Rational>>,
        curve_exponents: Vec<u32>,
        q_growth: u32,
        p_growth: Option<u32>,
    },
    NotFalsified { directions_checked: usize, note: String },
}

/// Curve exponents `w_k = lcm(l) / l_k`.
fn curve_exponents(l: &WeightVector) -> Vec<u32> {
    let lcm = l.entries().iter().fold(1u32, |a, &b| a.lcm(&b));
    l.entries().iter().map(|&x| lcm / x).collect()
}

/// Coefficients of `p` along the curve, grouped by `t`-degree, as
/// polynomials in the point coordinates.
fn curve_components(p: &Polynomial, w: &[u32]) -> BTreeMap<u32, Polynomial> {
    let mut out: BTreeMap<u32, Vec<(MultiIndex, GaussianRational)>> = BTreeMap::new();
    for (a, c) in p.terms() {
        let d: u32 = a.exps().iter().zip(w).map(|(e, wk)| e * wk).sum();
        out.entry(d).or_default().push((a.clone(), c.clone()));
    }
    out.into_iter().map(|(d, ts)| (d, Polynomial::from_terms(p.dim(), ts))).collect()
}

enum Direction {
    Exact(Vec<Rational>),
    Algebraic { root: RootInterval, sigma: Rational },
    Numeric(Vec<f64>),
}

impl Direction {
    fn vanishes(&self, p: &Polynomial) -> bool {
        match self {
            Direction::Exact(x) => p.evaluate_rational(x).map(|v| v.is_zero()).unwrap_or(false),
            Direction::Algebraic { root, sigma } => {
                let g = slice_2d(p, sigma);
                root.is_root_of(&g.re_part()) && root.is_root_of(&g.im_part())
            }
            Direction::Numeric(x) => {
                let scale: f64 = p.terms().map(|(_, c)| c.to_complex().norm()).sum::<f64>().max(1e-300);
                p.eval_f64(x).norm() <= 1e-8 * scale
            }
        }
    }

    fn growth(&self, p: &Polynomial, w: &[u32]) -> Option<u32> {
        curve_components(p, w).into_iter().rev().find(|(_, c)| !self.vanishes(c)).map(|(d, _)| d)
    }

    fn to_f64(&self) -> Vec<f64> {
        match self {
            Direction::Exact(x) => x.iter().map(rat_to_f64).collect(),
            Direction::Algebraic { root, sigma } => {
                let mut r = root.clone();
                r.refine_to(&Rational::new(BigInt::one(), BigInt::from(10u8).pow(30)));
                vec![r.to_f64(), rat_to_f64(sigma)]
            }
            Direction::Numeric(x) => x.clone(),
        }
    }
}

fn zero_directions(parts: &[Polynomial], l: &WeightVector, cfg: &SearchConfig) -> Result<Vec<Direction>> {
    let n = l.len();
    if parts.iter().all(Polynomial::is_zero) {
        return Ok((0..n)
            .map(|k| {
                let mut e = vec![Rational::zero(); n];
                e[k] = Rational::one();
                Direction::Exact(e)
            })
            .collect());
    }
    if n == 1 {
        return Ok([1i64, -1]
            .into_iter()
            .filter(|&s| all_vanish(parts, &[rat_int(s)]))
            .map(|s| Direction::Exact(vec![rat_int(s)]))
            .collect());
    }
    if n == 2 {
        return Ok(planar_zeros(parts, false)?
            .into_iter()
            .map(|z| match z {
                PlanarZero::Exact(p) => Direction::Exact(p),
                PlanarZero::Algebraic { root, sigma } => Direction::Algebraic { root, sigma },
            })
            .collect());
    }
    let mut dirs: Vec<Direction> = candidate_points(n, false)
        .into_iter()
        .filter(|p| all_vanish(parts, p))
        .map(Direction::Exact)
        .collect();
    let f = SumOfSquares::new(parts);
    for m in minimize_on_sphere(&f, &cfg.minimizer(), &[]) {
        if m.value >= cfg.tol {
            break;
        }
        let q = rationalize_zero(&m.point, l);
        if all_vanish(parts, &q) {
            dirs.push(Direction::Exact(q));
        } else {
            dirs.push(Direction::Numeric(m.point));
        }
    }
    Ok(dirs)
}

/// Searches zero curves of the principal parts for growth of `|Q|` beyond
/// `sum_j |P_j| + 1`.
pub fn alg_inequality_falsify(q: &Polynomial, s: &OperatorSystem, cfg: &SearchConfig) -> Result<AlgInequality> {
    if q.dim() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), got: q.dim() });
    }
    let l = s.weights();
    let w = curve_exponents(&l);
    let parts = s.principal_parts_for(&l).map_err(weight_error)?;
    let dirs = zero_directions(&parts, &l, cfg)?;
    let count = dirs.len();
    for d in dirs {
        let Some(qg) = d.growth(q, &w) else { continue };
        let pg = s.operators().iter().filter_map(|p| d.growth(p, &w)).max();
        if qg > pg.unwrap_or(0) {
            let exact_direction = match &d {
                Direction::Exact(x) => Some(x.clone()),
                _ => None,
            };
            return Ok(AlgInequality::Falsified {
                direction: normalize_witness(&d.to_f64(), &l),
                exact_direction,
                curve_exponents: w,
                q_growth: qg,
                p_growth: pg,
            });
        }
    }
    let note = if count == 0 { "principal parts have no common real zero" } else { "growth of Q dominated on every zero curve" };
    Ok(AlgInequality::NotFalsified { directions_checked: count, note: note.into() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateGrid {
    /// Angles on the unit circle for planar systems.
    pub angles: usize,
    /// Sphere samples in higher dimension.
    pub samples: usize,
    pub seed: u64,
}

impl Default for EstimateGrid {
    fn default() -> Self {
        Self { angles: 20_000, samples: 20_000, seed: 0x5eed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoSidedEstimate {
    pub c1: f64,
    pub c2: f64,
    /// Set when `sum |P_j^l|^2 = c sum xi_k^{2 l_k}` identically.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub exact: Option<Rational>,
    pub samples: usize,
}

fn serialize_opt_rational<S: serde::Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(q) => serialize_rational(q, s),
        None => s.serialize_none(),
    }
}

/// Extremes of `sum_j |P_j^l|^2 / sum_k xi_k^{2 l_k}` over a grid.
pub fn two_sided_estimate_constants(s: &OperatorSystem, l: &WeightVector, grid: &EstimateGrid) -> Result<TwoSidedEstimate> {
    let v = is_quasielliptic(s, l)?;
    if !v.passes() {
        return Err(Error::NotQuasiElliptic);
    }
    let n = s.dim();
    let parts = s.principal_parts_for(l).map_err(weight_error)?;
    let num = parts.iter().fold(Polynomial::zero(n), |acc, p| &acc + &p.norm_sqr());
    let den = (0..n).fold(Polynomial::zero(n), |acc, k| &acc + &Polynomial::var(n, k).pow(2 * l.entries()[k]));
    if let Some((m, c)) = den.leading_term() {
        let ratio = &num.coeff(m) / c;
        if ratio.is_real() && num == den.scale(&ratio) {
            let c = rat_to_f64(&ratio.re);
            return Ok(TwoSidedEstimate { c1: c, c2: c, exact: Some(ratio.re), samples: 0 });
        }
    }
    let pts: Vec<Vec<f64>> = if n == 2 {
        (0..grid.angles)
            .map(|k| {
                let th = std::f64::consts::TAU * k as f64 / grid.angles as f64;
                vec![th.cos(), th.sin()]
            })
            .collect()
    } else {
        let mut pts = sphere_points(grid.samples, n, grid.seed);
        for k in 0..n {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            pts.push(e);
        }
        pts.push(vec![1.0 / (n as f64).sqrt(); n]);
        pts
    };
    let (mut c1, mut c2) = (f64::INFINITY, 0.0f64);
    for x in &pts {
        let r = num.eval_f64(x).re / den.eval_f64(x).re;
        c1 = c1.min(r);
        c2 = c2.max(r);
    }
    Ok(TwoSidedEstimate { c1, c2, exact: None, samples: pts.len() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadiusSchedule {
    pub radii: Vec<f64>,
    pub starts: usize,
    pub seed: u64,
}

impl Default for RadiusSchedule {
    fn default() -> Self {
        Self { radii: (0..=10).map(|k| 2f64.powi(k)).collect(), starts: 64, seed: 0x5eed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Compactness {
    Compact { note: String },
    CompactNumeric { radius: f64, min_values: Vec<(f64, f64)> },
    Unbounded { witnesses: Vec<Vec<f64>>, residuals: Vec<f64>, exact: bool },
}

impl Compactness {
    pub fn is_compact(&self) -> bool {
        !matches!(self, Compactness::Unbounded { .. })
    }
}

/// Real points of the curve `g = 0` with `|u|` or `|v|` arbitrarily large,
/// as witness points `(u, v)`.
fn curve_escape(g: &BiPoly) -> Result<Option<Vec<(f64, f64)>>> {
    let content = g.content();
    if !content.is_constant() {
        if let Some(mut r) = real_roots(&content, None, None)?.into_iter().next() {
            r.refine_to(&Rational::new(BigInt::one(), BigInt::from(10u8).pow(30)));
            let u = r.to_f64();
            return Ok(Some((0..5).map(|k| (u, 2f64.powi(k + 2))).collect()));
        }
    }
    let h = g.primitive_part().squarefree_v();
    if h.degree_v().unwrap_or(0) == 0 {
        return Ok(None);
    }
    let disc = &h.lead() * &h.resultant_v(&h.derivative_v());
    let bound = if disc.is_constant() { Rational::one() } else { cauchy_bound(&disc) + Rational::one() };
    for sign in [1i64, -1] {
        let u0 = &bound * rat_int(sign);
        if real_roots(&h.eval_u(&u0), None, None)?.is_empty() {
            continue;
        }
        let mut pts = Vec::new();
        for k in 0..5 {
            let u = &u0 * rat_int(1 << k);
            let mut r = real_roots(&h.eval_u(&u), None, None)?.into_iter().next().expect("root count constant beyond bound");
            r.refine_to(&Rational::new(BigInt::one(), BigInt::from(10u8).pow(30)));
            pts.push((rat_to_f64(&u), r.to_f64()));
        }
        return Ok(Some(pts));
    }
    Ok(None)
}

/// Compactness of the real zero set of the full symbols.
pub fn zero_set_compactness(s: &OperatorSystem, scan: &RadiusSchedule) -> Result<Compactness> {
    let n = s.dim();
    let ops = s.operators();
    let residual = |x: &[f64]| residual_f64(ops, x);
    if ops.iter().all(Polynomial::is_zero) {
        let w: Vec<Vec<f64>> = (0..5)
            .map(|k| {
                let mut e = vec![0.0; n];
                e[0] = 2f64.powi(k);
                e
            })
            .collect();
        let r = w.iter().map(|x| residual(x)).collect();
        return Ok(Compactness::Unbounded { witnesses: w, residuals: r, exact: true });
    }
    if n == 1 {
        let g = ops.iter().fold(QPoly::zero(), |g, p| {
            g.gcd(&p.to_univariate(0).expect("one variable").real_root_carrier())
        });
        debug_assert!(!g.is_zero());
        return Ok(Compactness::Compact { note: "finitely many real zeros".into() });
    }
    if n == 2 {
        let reals: Vec<Polynomial> =
            ops.iter().flat_map(|p| [p.re_part(), p.im_part()]).filter(|p| !p.is_zero()).collect();
        for (u, v) in [(1usize, 0usize), (0, 1)] {
            let g = reals.iter().fold(BiPoly::zero(), |g, p| g.gcd(&BiPoly::from_real(p, u, v)));
            if let Some(pts) = curve_escape(&g)? {
                let witnesses: Vec<Vec<f64>> = pts
                    .into_iter()
                    .map(|(pu, pv)| {
                        let mut x = vec![0.0; 2];
                        x[u] = pu;
                        x[v] = pv;
                        x
                    })
                    .collect();
                let residuals = witnesses.iter().map(|x| residual(x)).collect();
                return Ok(Compactness::Unbounded { witnesses, residuals, exact: true });
            }
        }
        return Ok(Compactness::Compact { note: "common real curve bounded or absent".into() });
    }
    let maxdeg = s.order() as i32;
    let mut mins = Vec::new();
    let mut near = Vec::new();
    for &r in &scan.radii {
        let scaled: Vec<Polynomial> = ops
            .iter()
            .map(|p| {
                Polynomial::from_terms(
                    n,
                    p.terms().map(|(a, c)| {
                        let f = crate::gaussian::f64_to_rat(r.powi(a.degree() as i32));
                        (a.clone(), c * &GaussianRational::from_rational(f))
                    }),
                )
            })
            .collect();
        let f = SumOfSquares::new(&scaled);
        let cfg = MinimizerConfig { starts: scan.starts, seed: scan.seed, ..MinimizerConfig::default() };
        let best = minimize_on_sphere(&f, &cfg, &[]).remove(0);
        let tol = 1e-9 * (1.0 + r).powi(2 * maxdeg);
        mins.push((r, best.value));
        near.push((best.value < tol, best.point.iter().map(|x| x * r).collect::<Vec<f64>>()));
    }
    let k = near.len();
    if k >= 3 && near[k - 3..].iter().all(|(z, _)| *z) {
        let witnesses: Vec<Vec<f64>> = near[k - 3..].iter().map(|(_, x)| x.clone()).collect();
        let residuals = witnesses.iter().map(|x| residual(x)).collect();
        return Ok(Compactness::Unbounded { witnesses, residuals, exact: false });
    }
    let radius = near.iter().zip(&mins).filter(|((z, _), _)| *z).map(|(_, (r, _))| *r).fold(0.0, f64::max);
    Ok(Compactness::CompactNumeric { radius, min_values: mins })
}
