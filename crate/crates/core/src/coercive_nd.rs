//! Weak-coercivity classification of isotropic systems in any dimension.
//!
//! [`classify_weak_coercivity`] applies the rules in order:
//!
//! | rule | fires when | verdict |
//! |------|------------|---------|
//! | R0 | order at most one | weakly coercive |
//! | R1 | principal parts have no common real zero | elliptic |
//! | R2 | one operator in two variables | exact planar decision |
//! | R3 | one operator, `n >= 3`, not elliptic | not weakly coercive |
//! | R4 | `n >= 2N + 1`, planar restrictions independent, not elliptic | not weakly coercive |
//! | R5 | products `P_j (D_u + i)(D_v + i)` with `{P_j}` elliptic | weakly coercive |
//! | R6 | a necessary condition fails | not weakly coercive |
//!
//! Otherwise the verdict is inconclusive and carries the R6 battery.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::binary_form::factor_binary_form;
use crate::coercive2d::{decide_weak_coercive_2d, WeakCoercivityVerdict2D};
use crate::ellipticity::{
    all_vanish, candidate_points, common_zero_engine, is_elliptic_with, jacobian_rank_at, subordination_principal,
    zero_set_compactness, Compactness, EllipticityStatus, RadiusSchedule, SearchConfig, Subordination, ZeroWitness,
};
use crate::error::{Error, Result};
use crate::gaussian::{rat, serialize_rational_vec, GaussianRational, Rational};
use crate::linalg;
use crate::numeric::{minimize_on_sphere, MinimizerConfig, SumOfSquares};
use crate::poly::{MultiIndex, OperatorSystem, Polynomial, WeightVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Rule {
    R0,
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
}

impl Rule {
    /// Stable anchor of the result the rule rests on.
    pub fn citation(&self) -> &'static str {
        match self {
            Rule::R0 => "order-one: only the zero-order term is estimated",
            Rule::R1 => "th2: quasielliptic systems are weakly coercive",
            Rule::R2 => "obschij_vid: two-variable normal form",
            Rule::R3 => "deLeu-Mir: ellipticity equals weak coercivity for n >= 3",
            Rule::R4 => "odnorod: systems with independent planar restrictions",
            Rule::R5 => "th_4.3: S-systems are weakly coercive but not elliptic",
            Rule::R6 => "prop_weak_coerc, suzhenie, prop6: necessary conditions",
        }
    }
}

/// Range of `p` for which the quoted result establishes the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PRange {
    All,
    InfinityOnly,
}

impl Serialize for PRange {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            PRange::All => "[1, inf]",
            PRange::InfinityOnly => "inf",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RuleRecord {
    pub rule: Rule,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum PairVerdict {
    Decided { verdict: WeakCoercivityVerdict2D },
    /// The restricted operator has degree below the system order.
    DegreeDrop { degree: Option<u32>, weakly_coercive: bool },
    Unsupported { operators: usize },
}

impl PairVerdict {
    pub fn is_obstruction(&self) -> bool {
        match self {
            PairVerdict::Decided { verdict } => !verdict.is_weakly_coercive(),
            PairVerdict::DegreeDrop { weakly_coercive, .. } => !weakly_coercive,
            PairVerdict::Unsupported { .. } => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairResult {
    /// One-based coordinate indices.
    pub pair: [usize; 2],
    pub verdict: PairVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Independence {
    PassProbabilistic { trials: usize, seed: u64 },
    Fail {
        #[serde(serialize_with = "serialize_frame")]
        frame: [Vec<Rational>; 2],
        coefficients: Vec<GaussianRational>,
    },
}

fn serialize_frame<S: Serializer>(f: &[Vec<Rational>; 2], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    struct V<'a>(&'a [Rational]);
    impl Serialize for V<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            serialize_rational_vec(self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&V(&f[0]))?;
    seq.serialize_element(&V(&f[1]))?;
    seq.end()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Witness {
    ZeroDirection { witness: ZeroWitness },
    Planar { verdict: WeakCoercivityVerdict2D },
    Restriction { result: PairResult },
    Unbounded { compactness: Compactness },
    JacobianRank {
        #[serde(serialize_with = "serialize_rational_vec")]
        point: Vec<Rational>,
        rank: usize,
    },
    OddOrder { order: u32, zero_clusters: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Battery {
    pub compactness: Compactness,
    pub jacobian_ranks: Vec<(Vec<String>, usize)>,
    pub restrictions: Vec<PairResult>,
    pub zero_clusters: Option<usize>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status")]
pub enum StatusND {
    Elliptic,
    WeaklyCoercive { rule: Rule },
    NotWeaklyCoercive { rule: Rule, witness: Box<Witness> },
    Inconclusive { battery: Box<Battery> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakCoercivityVerdictND {
    pub status: StatusND,
    pub applied_rules: Vec<RuleRecord>,
    pub p_range: Option<PRange>,
    pub notes: Vec<String>,
    pub seed: u64,
}

impl WeakCoercivityVerdictND {
    pub fn is_weakly_coercive(&self) -> Option<bool> {
        match self.status {
            StatusND::Elliptic | StatusND::WeaklyCoercive { .. } => Some(true),
            StatusND::NotWeaklyCoercive { .. } => Some(false),
            StatusND::Inconclusive { .. } => None,
        }
    }

    /// Rule that decided the verdict; R1 for elliptic systems.
    pub fn rule(&self) -> Option<Rule> {
        match &self.status {
            StatusND::Elliptic => Some(Rule::R1),
            StatusND::WeaklyCoercive { rule } | StatusND::NotWeaklyCoercive { rule, .. } => Some(*rule),
            StatusND::Inconclusive { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyConfig {
    pub search: SearchConfig,
    pub independence_trials: usize,
    pub radii: RadiusSchedule,
    pub seed: u64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self { search: SearchConfig::default(), independence_trials: 32, radii: RadiusSchedule::default(), seed: 0x5eed }
    }
}

impl ClassifyConfig {
    pub fn with_seed(seed: u64) -> Self {
        let mut c = Self { seed, ..Self::default() };
        c.search.seed = seed;
        c.radii.seed = seed;
        c
    }
}

fn require_isotropic(s: &OperatorSystem) -> Result<u32> {
    s.isotropic_order()
}

/// Decides every coordinate-plane restriction that reduces to a single
/// non-constant operator.
pub fn restriction_battery(s: &OperatorSystem) -> Result<Vec<PairResult>> {
    let l = require_isotropic(s)?;
    let n = s.dim();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let restricted: Vec<Polynomial> = s
                .operators()
                .iter()
                .map(|p| p.restrict_coordinates(&[u, v]))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|p| !p.is_constant())
                .collect();
            let verdict = match restricted.len() {
                0 => PairVerdict::DegreeDrop { degree: None, weakly_coercive: l <= 1 },
                1 => {
                    let p = &restricted[0];
                    let d = p.total_degree().unwrap_or(0);
                    if d >= l {
                        PairVerdict::Decided { verdict: decide_weak_coercive_2d(p)? }
                    } else {
                        let wc = d + 1 == l && factor_binary_form(&p.homogeneous_component(d))?.is_elliptic();
                        PairVerdict::DegreeDrop { degree: Some(d), weakly_coercive: wc }
                    }
                }
                k => PairVerdict::Unsupported { operators: k },
            };
            out.push(PairResult { pair: [u + 1, v + 1], verdict });
        }
    }
    Ok(out)
}

/// `(D_u + i)(D_v + i)` in dimension `n`, zero-based indices.
pub fn r_factor(n: usize, u: usize, v: usize) -> Polynomial {
    let i = Polynomial::constant(n, GaussianRational::i());
    &(&Polynomial::var(n, u) + &i) * &(&Polynomial::var(n, v) + &i)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SSystem {
    pub system: OperatorSystem,
    /// One-based `(u, v)` with `u > v`, in operator order within each block.
    pub pairs: Vec<(usize, usize)>,
    pub base_len: usize,
    pub warning: Option<String>,
}

fn s_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..n).flat_map(|u| (0..u).map(move |v| (u, v))).collect()
}

/// Builds `{P_j (D_u + i)(D_v + i) : u > v}`.
pub fn construct_s_system(p: &OperatorSystem) -> Result<SSystem> {
    let v = is_elliptic_with(p, &SearchConfig::default())?;
    let warning = match v.status {
        EllipticityStatus::NotQuasiElliptic { .. } => return Err(Error::NotElliptic),
        EllipticityStatus::NumericallyQuasiElliptic { min_value, .. } => {
            Some(format!("ellipticity verified numerically only (sphere minimum {min_value:.3e})"))
        }
        EllipticityStatus::QuasiElliptic => None,
    };
    let n = p.dim();
    let pairs = s_pairs(n);
    let mut ops = Vec::new();
    for pj in p.operators() {
        for &(u, v) in &pairs {
            ops.push(pj * &r_factor(n, u, v));
        }
    }
    Ok(SSystem {
        system: OperatorSystem::new(ops, None)?,
        pairs: pairs.into_iter().map(|(u, v)| (u + 1, v + 1)).collect(),
        base_len: p.len(),
        warning,
    })
}

/// Recognizes `S` as a complete S-system; returns the base operators.
pub fn recognize_s_system(s: &OperatorSystem) -> Option<Vec<Polynomial>> {
    let n = s.dim();
    let pairs = s_pairs(n);
    if n < 2 || !s.len().is_multiple_of(pairs.len()) {
        return None;
    }
    let factors: Vec<Polynomial> = pairs.iter().map(|&(u, v)| r_factor(n, u, v)).collect();
    let mut by_pair: Vec<Vec<Polynomial>> = vec![Vec::new(); pairs.len()];
    for op in s.operators() {
        let k = factors.iter().position(|f| op.div_exact(f).is_some())?;
        by_pair[k].push(op.div_exact(&factors[k])?);
    }
    let mut base = by_pair[0].clone();
    base.sort_by_key(|p| p.to_string());
    for group in &by_pair[1..] {
        let mut g = group.clone();
        g.sort_by_key(|p| p.to_string());
        if g != base {
            return None;
        }
    }
    if base.is_empty() {
        return None;
    }
    Some(base)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Minimality {
    Broken { monomial: MultiIndex, restricted: OperatorSystem, certificate: Vec<(MultiIndex, GaussianRational)> },
    Survives { note: String },
}

/// Drops `S_uv` (one-based, either order) from a single-operator S-system
/// and tests whether the rest can still subordinate `xi^{l+1}` on the
/// plane `{u, v}`.
pub fn minimality_check(s: &OperatorSystem, drop: Option<(usize, usize)>) -> Result<Minimality> {
    let base = recognize_s_system(s).ok_or(Error::NotAnSSystem)?;
    if base.len() != 1 {
        return Err(Error::NotAnSSystem);
    }
    let Some((a, b)) = drop else {
        return Ok(Minimality::Survives { note: "full S-system is weakly coercive".into() });
    };
    let n = s.dim();
    let (u, v) = (a.max(b), a.min(b));
    if v == 0 || u > n || u == v {
        return Err(Error::IndexOutOfRange { index: u.max(v), dim: n });
    }
    let dropped = &base[0] * &r_factor(n, u - 1, v - 1);
    let rest: Vec<Polynomial> = s
        .operators()
        .iter()
        .filter(|op| **op != dropped)
        .map(|op| op.restrict_coordinates(&[v - 1, u - 1]))
        .collect::<Result<Vec<_>>>()?;
    let restricted = OperatorSystem::new(rest, None)?;
    let order = restricted.order();
    let w = WeightVector::isotropic(2, order.max(1));
    for k in [0usize, 1] {
        let q = Polynomial::var(2, k).pow(order);
        if let Subordination::NoSolution { certificate } = subordination_principal(&q, &restricted, &w)? {
            let mut m = vec![0u32; 2];
            m[k] = order;
            return Ok(Minimality::Broken { monomial: MultiIndex(m), restricted, certificate });
        }
    }
    Ok(Minimality::Survives { note: "both coordinate powers are subordinate on the plane".into() })
}

fn random_frame_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// Restrictions of the principal parts to `span{a, b}` as binary forms;
/// returns a dependency among them if one exists.
fn frame_dependency(parts: &[Polynomial], a: &[Rational], b: &[Rational], l: u32) -> Option<Vec<GaussianRational>> {
    let n = a.len();
    let s = Polynomial::var(2, 0);
    let t = Polynomial::var(2, 1);
    let subs: Vec<Polynomial> = (0..n)
        .map(|k| {
            &s.scale(&GaussianRational::from_rational(a[k].clone()))
                + &t.scale(&GaussianRational::from_rational(b[k].clone()))
        })
        .collect();
    let monos = MultiIndex::all_of_degree(2, l);
    let restricted: Vec<Polynomial> = parts.iter().map(|p| p.substitute(&subs).expect("dimension checked")).collect();
    let cols: Vec<Vec<GaussianRational>> = monos.iter().map(|m| restricted.iter().map(|p| p.coeff(m)).collect()).collect();
    linalg::nullspace_vector(&cols, parts.len())
}

fn independent(v1: &[Rational], v2: &[Rational]) -> bool {
    let n = v1.len();
    (0..n).any(|i| (i + 1..n).any(|j| &v1[i] * &v2[j] != &v1[j] * &v2[i]))
}

/// Linear independence of the principal parts on planes: all coordinate
/// planes, then `trials` seeded random rational planes.
pub fn two_subspace_independence(s: &OperatorSystem, trials: usize, seed: u64) -> Result<Independence> {
    let l = require_isotropic(s)?;
    let n = s.dim();
    let parts = s.principal_parts();
    let unit = |k: usize| -> Vec<Rational> { (0..n).map(|i| if i == k { Rational::one() } else { Rational::zero() }).collect() };
    let mut frames: Vec<[Vec<Rational>; 2]> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            frames.push([unit(u), unit(v)]);
        }
    }
    if n == 1 {
        frames.push([unit(0), unit(0)]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random = 0;
    while random < trials && n >= 2 {
        let a = random_frame_vector(&mut rng, n);
        let b = random_frame_vector(&mut rng, n);
        if independent(&a, &b) {
            frames.push([a, b]);
            random += 1;
        }
    }
    for f in frames {
        if let Some(c) = frame_dependency(&parts, &f[0], &f[1], l) {
            return Ok(Independence::Fail { frame: f, coefficients: c });
        }
    }
    Ok(Independence::PassProbabilistic { trials, seed })
}

/// Counts clusters of numeric principal zeros on the sphere; `None` when
/// two runs with different start sets disagree.
fn zero_cluster_count(parts: &[Polynomial], cfg: &SearchConfig) -> Option<usize> {
    let f = SumOfSquares::new(parts);
    let count = |starts: usize, seed: u64| -> usize {
        let mc = MinimizerConfig { starts, seed, tol: cfg.tol, ..MinimizerConfig::default() };
        let mut reps: Vec<Vec<f64>> = Vec::new();
        for m in minimize_on_sphere(&f, &mc, &[]) {
            if m.value >= cfg.tol {
                break;
            }
            let close = |r: &Vec<f64>| {
                let d1: f64 = r.iter().zip(&m.point).map(|(a, b)| (a - b) * (a - b)).sum();
                let d2: f64 = r.iter().zip(&m.point).map(|(a, b)| (a + b) * (a + b)).sum();
                d1.min(d2).sqrt() < 1e-3
            };
            if !reps.iter().any(close) {
                reps.push(m.point);
            }
        }
        reps.len()
    };
    let a = count(cfg.starts, cfg.seed);
    let b = count(2 * cfg.starts, cfg.seed.wrapping_add(1));
    (a == b).then_some(a)
}

fn record(rules: &mut Vec<RuleRecord>, rule: Rule, outcome: impl Into<String>) {
    rules.push(RuleRecord { rule, outcome: outcome.into() });
}

pub fn classify_weak_coercivity(s: &OperatorSystem) -> Result<WeakCoercivityVerdictND> {
    classify_weak_coercivity_with(s, &ClassifyConfig::default())
}

pub fn classify_weak_coercivity_with(s: &OperatorSystem, cfg: &ClassifyConfig) -> Result<WeakCoercivityVerdictND> {
    let l = require_isotropic(s)?;
    let n = s.dim();
    let big_n = s.len();
    let mut rules = Vec::new();
    let mut notes = Vec::new();
    let done = |status, rules, p_range, notes| Ok(WeakCoercivityVerdictND { status, applied_rules: rules, p_range, notes, seed: cfg.seed });

    if l <= 1 {
        record(&mut rules, Rule::R0, "fired");
        return done(StatusND::WeaklyCoercive { rule: Rule::R0 }, rules, Some(PRange::All), notes);
    }
    record(&mut rules, Rule::R0, "not applicable: order >= 2");

    let ell = is_elliptic_with(s, &cfg.search)?;
    if ell.passes() {
        if let EllipticityStatus::NumericallyQuasiElliptic { min_value, .. } = ell.status {
            notes.push(format!("ellipticity is numeric: sphere minimum {min_value:.3e}"));
        }
        record(&mut rules, Rule::R1, format!("fired ({})", ell.method));
        return done(StatusND::Elliptic, rules, Some(PRange::All), notes);
    }
    let zero = ell.witness().cloned().expect("non-elliptic verdict carries a witness");
    if !zero.certified {
        notes.push("principal zero found numerically without an interval certificate".into());
    }
    record(&mut rules, Rule::R1, "not applicable: principal parts share a real zero");

    if big_n == 1 && n == 2 {
        let v = decide_weak_coercive_2d(&s.operators()[0])?;
        record(&mut rules, Rule::R2, format!("fired: {}", v.label()));
        return if v.is_weakly_coercive() {
            done(StatusND::WeaklyCoercive { rule: Rule::R2 }, rules, Some(PRange::All), notes)
        } else {
            let w = Box::new(Witness::Planar { verdict: v });
            done(StatusND::NotWeaklyCoercive { rule: Rule::R2, witness: w }, rules, Some(PRange::InfinityOnly), notes)
        };
    }
    record(&mut rules, Rule::R2, "not applicable");

    if big_n == 1 && n >= 3 {
        record(&mut rules, Rule::R3, "fired");
        let w = Box::new(Witness::ZeroDirection { witness: zero });
        return done(StatusND::NotWeaklyCoercive { rule: Rule::R3, witness: w }, rules, Some(PRange::InfinityOnly), notes);
    }
    record(&mut rules, Rule::R3, "not applicable");

    if n > 2 * big_n {
        match two_subspace_independence(s, cfg.independence_trials, cfg.seed)? {
            Independence::PassProbabilistic { trials, seed } => {
                notes.push(format!(
                    "planar independence checked on coordinate planes and {trials} random planes (seed {seed}); evidence, not proof"
                ));
                record(&mut rules, Rule::R4, "fired");
                let w = Box::new(Witness::ZeroDirection { witness: zero });
                return done(StatusND::NotWeaklyCoercive { rule: Rule::R4, witness: w }, rules, Some(PRange::InfinityOnly), notes);
            }
            Independence::Fail { .. } => record(&mut rules, Rule::R4, "not applicable: dependent planar restriction"),
        }
    } else {
        record(&mut rules, Rule::R4, "not applicable: n < 2N + 1");
    }

    if let Some(base) = recognize_s_system(s) {
        let bs = OperatorSystem::new(base, None)?;
        if is_elliptic_with(&bs, &cfg.search)?.passes() {
            record(&mut rules, Rule::R5, "fired");
            return done(StatusND::WeaklyCoercive { rule: Rule::R5 }, rules, Some(PRange::All), notes);
        }
        record(&mut rules, Rule::R5, "not applicable: base system not elliptic");
    } else {
        record(&mut rules, Rule::R5, "not applicable: not an S-system");
    }

    let compactness = zero_set_compactness(s, &cfg.radii)?;
    if !compactness.is_compact() {
        record(&mut rules, Rule::R6, "fired: zero set not compact");
        let w = Box::new(Witness::Unbounded { compactness });
        return done(StatusND::NotWeaklyCoercive { rule: Rule::R6, witness: w }, rules, Some(PRange::All), notes);
    }

    let parts = s.principal_parts();
    let mut jacobian_ranks = Vec::new();
    if n > 2 * big_n {
        let mut pts: Vec<Vec<Rational>> = zero.exact_point.iter().cloned().collect();
        pts.extend(candidate_points(n, true).into_iter().filter(|p| all_vanish(&parts, p)));
        for p in pts {
            let rank = jacobian_rank_at(s, &p)?;
            jacobian_ranks.push((p.iter().map(|x| x.to_string()).collect(), rank));
            if rank >= 2 * big_n {
                record(&mut rules, Rule::R6, format!("fired: Jacobian rank {rank} = 2N at a principal zero"));
                let w = Box::new(Witness::JacobianRank { point: p, rank });
                return done(StatusND::NotWeaklyCoercive { rule: Rule::R6, witness: w }, rules, Some(PRange::All), notes);
            }
        }
    }

    let restrictions = restriction_battery(s)?;
    if let Some(r) = restrictions.iter().find(|r| r.verdict.is_obstruction()) {
        record(&mut rules, Rule::R6, format!("fired: restriction to plane {:?} is not weakly coercive", r.pair));
        let w = Box::new(Witness::Restriction { result: r.clone() });
        return done(StatusND::NotWeaklyCoercive { rule: Rule::R6, witness: w }, rules, Some(PRange::InfinityOnly), notes);
    }

    let mut zero_clusters = None;
    if n > 2 * big_n && l % 2 == 1 {
        zero_clusters = zero_cluster_count(&parts, &cfg.search);
        if let Some(c) = zero_clusters {
            record(&mut rules, Rule::R6, format!("fired: odd order {l} with {c} isolated principal zero clusters"));
            let w = Box::new(Witness::OddOrder { order: l, zero_clusters: c });
            return done(StatusND::NotWeaklyCoercive { rule: Rule::R6, witness: w }, rules, Some(PRange::All), notes);
        }
        notes.push("odd order, but finiteness of principal zeros on the sphere not established".into());
    }
    record(&mut rules, Rule::R6, "no necessary condition failed");
    notes.push("no rule decides this system; the battery is attached".into());
    let battery = Battery { compactness, jacobian_ranks, restrictions, zero_clusters, notes: notes.clone() };
    done(StatusND::Inconclusive { battery: Box::new(battery) }, rules, None, notes)
}

/// Common-zero verdict for an arbitrary list of forms, re-exported for
/// callers that assemble their own systems.
pub fn forms_have_common_zero(forms: &[Polynomial], l: u32) -> Result<bool> {
    let n = forms.first().map_or(1, Polynomial::dim);
    Ok(!common_zero_engine(forms, &WeightVector::isotropic(n, l.max(1)), &SearchConfig::default())?.passes())
}
