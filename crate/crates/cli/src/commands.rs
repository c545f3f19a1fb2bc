use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde_json::json;

use symcoerce_core::binary_form::{RealDirection, Slope};
use symcoerce_core::coercive2d::{decide_weak_coercive_2d, slope_value, resultant_criterion_2d, NotCoerciveReason, ResultantVerdict, Status2D};
use symcoerce_core::coercive_nd::{
    classify_weak_coercivity_with, construct_s_system, minimality_check, recognize_s_system, ClassifyConfig, Minimality, Rule,
    StatusND,
};
use symcoerce_core::ellipticity::{
    construct_quasielliptic, exists_quasielliptic, is_quasielliptic_with, subordination_principal, EllipticityStatus,
    Existence, SearchConfig, Subordination,
};
use symcoerce_core::multiplier::{check_mikhlin_like, check_p_ratio, phi_family, phi_gamma, CertReport, CertVerdict, GridSpec, RationalSymbol};
use symcoerce_core::witness::falsify_weak_coercivity;
use symcoerce_core::{format_operator, MultiIndex, OperatorSystem, Polynomial};

use crate::input::{self, CliError};
use crate::report::Outcome;
use crate::Command;

pub struct Context<'a> {
    pub file: Option<&'a Path>,
    pub dim: Option<usize>,
    pub seed: u64,
    pub dump: Option<PathBuf>,
}

type Dispatched = (Vec<String>, Outcome, Vec<u64>);

fn echo(s: &OperatorSystem) -> Vec<String> {
    s.operators().iter().map(format_operator).collect()
}

fn fmt_point(x: &[f64]) -> String {
    let parts: Vec<String> = x.iter().map(|v| format!("{v:.6}")).collect();
    format!("({})", parts.join(", "))
}

fn fmt_index(a: &MultiIndex) -> String {
    let parts: Vec<String> = a.0.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(","))
}

fn linear_form(d: &RealDirection) -> String {
    match &d.slope {
        Slope::Rational(s) => format!("xi1 + ({s})*xi2"),
        Slope::Infinite => "xi2".to_string(),
        Slope::Algebraic(_) => format!("xi1 + ({:.6})*xi2", slope_value(d)),
    }
}

fn rule_name(r: Rule) -> &'static str {
    match r {
        Rule::R0 => "order one",
        Rule::R1 => "quasiellipticity",
        Rule::R2 => "two-variable normal form",
        Rule::R3 => "de Leeuw–Mirkil",
        Rule::R4 => "planar restrictions",
        Rule::R5 => "S-system",
        Rule::R6 => "necessary conditions",
    }
}

fn single(s: &OperatorSystem, cmd: &str) -> Result<Polynomial, CliError> {
    match s.operators() {
        [p] => Ok(p.clone()),
        ops => Err(CliError::Usage(format!("{cmd} takes a single operator, got {}", ops.len()))),
    }
}

fn no_dump(ctx: &Context, cmd: &str) -> Result<(), CliError> {
    match ctx.dump {
        Some(_) => Err(CliError::Usage(format!("--dump is not available for {cmd}"))),
        None => Ok(()),
    }
}

fn dump_file(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

pub fn dispatch(cmd: &Command, ctx: &Context) -> Result<Dispatched, CliError> {
    if !matches!(cmd, Command::MultiplierCheck { .. } | Command::Witness { .. }) {
        no_dump(ctx, "this command")?;
    }
    let load = |ops: &crate::Operators| input::load_system(&ops.operators, ctx.file, ctx.dim);
    match cmd {
        Command::Classify(ops) => classify(&load(ops)?, ctx),
        Command::Elliptic { ops, weights } => elliptic(&load(ops)?, weights.as_deref(), ctx),
        Command::Coercive2d { ops, normal_form } => coercive2d(&load(ops)?, *normal_form),
        Command::Resultant2d(ops) => resultant2d(&load(ops)?),
        Command::Exists { weights, n_ops } => exists(weights, *n_ops),
        Command::Construct { weights, n_ops } => construct(weights, *n_ops),
        Command::Subordinate { ops, q, weights } => subordinate(&load(ops)?, q, weights.as_deref()),
        Command::SSystem(ops) => s_system(&load(ops)?),
        Command::Minimality { ops, drop } => minimality(&load(ops)?, drop.as_deref()),
        Command::MultiplierCheck { ops, delta, denominator, cutoff, alpha, j, v, gamma } => {
            let s = load(ops)?;
            let mode = match (denominator, alpha, gamma) {
                (None, None, None) => SymbolMode::PRatio,
                (Some(d), None, None) => SymbolMode::Quotient { denominator: d, cutoff },
                (None, Some(a), None) => SymbolMode::Family { alpha: a, j: *j, v: *v },
                (None, None, Some(g)) => SymbolMode::Gamma { gamma: g },
                _ => return Err(CliError::Usage("use at most one of --denominator, --alpha, --gamma".into())),
            };
            multiplier(&s, delta.as_deref(), mode, ctx)
        }
        Command::Witness { ops, alpha, direction, steps } => witness(&load(ops)?, alpha, direction, *steps, ctx),
        Command::Restrict { ops, keep } => restrict(&load(ops)?, keep),
    }
}

fn classify(s: &OperatorSystem, ctx: &Context) -> Result<Dispatched, CliError> {
    let v = classify_weak_coercivity_with(s, &ClassifyConfig::with_seed(ctx.seed))?;
    let (summary, conclusive) = match &v.status {
        StatusND::Elliptic => {
            let r = v.rule().unwrap_or(Rule::R1);
            (format!("ELLIPTIC, hence weakly coercive (rule {r:?}, {})", rule_name(r)), true)
        }
        StatusND::WeaklyCoercive { rule } => (format!("WEAKLY COERCIVE (rule {rule:?}, {})", rule_name(*rule)), true),
        StatusND::NotWeaklyCoercive { rule, .. } => (format!("NOT weakly coercive (rule {rule:?}, {})", rule_name(*rule)), true),
        StatusND::Inconclusive { .. } => ("INCONCLUSIVE (no rule decides this system)".to_string(), false),
    };
    let mut details: Vec<String> = v.applied_rules.iter().map(|r| format!("{:?}: {}", r.rule, r.outcome)).collect();
    if let Some(p) = v.p_range {
        details.push(format!("p range: {}", serde_json::to_value(p).expect("serializes").as_str().unwrap_or("")));
    }
    details.extend(v.notes.iter().cloned());
    let mut rules: Vec<Rule> = v.applied_rules.iter().map(|r| r.rule).collect();
    rules.dedup();
    let mut out = Outcome::verdict(summary, &v).details(details).rules(rules);
    if !conclusive {
        out = out.inconclusive();
    }
    Ok((echo(s), out, vec![ctx.seed]))
}

fn elliptic(s: &OperatorSystem, weights: Option<&[u32]>, ctx: &Context) -> Result<Dispatched, CliError> {
    let l = match weights {
        Some(w) => input::weights(w)?,
        None => s.weights(),
    };
    let cfg = SearchConfig { seed: ctx.seed, ..SearchConfig::default() };
    let v = is_quasielliptic_with(s, &l, &cfg)?;
    let kind = if l.entries().windows(2).all(|w| w[0] == w[1]) { "ELLIPTIC" } else { "QUASIELLIPTIC" };
    let summary = match &v.status {
        EllipticityStatus::QuasiElliptic => format!("{kind} (l = {l}, {:?})", v.exactness),
        EllipticityStatus::NumericallyQuasiElliptic { min_value, .. } => {
            format!("{kind} (l = {l}, numeric: min of sum |P_j^l|^2 on the sphere {min_value:.3e})")
        }
        EllipticityStatus::NotQuasiElliptic { witness } => {
            format!("NOT {} (l = {l}): common zero at {}", kind.to_lowercase(), fmt_point(&witness.point))
        }
    };
    let out = Outcome::verdict(summary, &v).detail(format!("method: {}", v.method)).rules([Rule::R1]);
    Ok((echo(s), out, vec![ctx.seed]))
}

fn coercive2d(s: &OperatorSystem, normal_form: bool) -> Result<Dispatched, CliError> {
    let p = single(s, "coercive2d")?;
    let v = decide_weak_coercive_2d(&p)?;
    let summary = match &v.status {
        Status2D::Elliptic => "ELLIPTIC (weakly coercive)".to_string(),
        Status2D::WeaklyCoerciveNotElliptic { .. } => "WEAKLY COERCIVE (not elliptic)".to_string(),
        Status2D::NotWeaklyCoercive { reason: NotCoerciveReason::MultipleRealZero { .. } } => {
            "NOT weakly coercive (principal part has a multiple real zero)".to_string()
        }
        Status2D::NotWeaklyCoercive { reason: NotCoerciveReason::RealAlpha { alpha } } => {
            format!("NOT weakly coercive (real alpha = {})", alpha.alpha)
        }
    };
    let mut details = Vec::new();
    if v.order_one_extension {
        details.push("first-order operator: rule applied beyond its stated order range".to_string());
    }
    for a in &v.alphas {
        details.push(format!("real factor {}: alpha = {}", linear_form(&a.direction), a.alpha));
    }
    if normal_form {
        if let Status2D::WeaklyCoerciveNotElliptic { normal_form: nf } = &v.status {
            details.push(format!("elliptic part R = {}", nf.elliptic_part));
            for f in &nf.affine_factors {
                details.push(format!("factor ({})*xi1 + ({})*xi2 + ({})", f.lambda, f.mu, f.alpha));
            }
            details.push(format!("remainder Q = {}", nf.remainder));
            if !nf.exact {
                details.push(format!("reconstruction residual {:.3e}", nf.residual));
            }
        } else {
            details.push("normal form: only defined for weakly coercive non-elliptic operators".to_string());
        }
    }
    let out = Outcome::verdict(summary, &v).details(details).rules([Rule::R2]);
    Ok((echo(s), out, vec![]))
}

fn resultant2d(s: &OperatorSystem) -> Result<Dispatched, CliError> {
    let p = single(s, "resultant2d")?;
    let v = resultant_criterion_2d(&p)?;
    let out = match &v {
        ResultantVerdict::WeaklyCoercive { resultant } => {
            Outcome::verdict(format!("WEAKLY COERCIVE (resultant = {resultant})"), &v)
        }
        ResultantVerdict::NotWeaklyCoercive { resultant } => {
            Outcome::verdict(format!("NOT weakly coercive (resultant = {resultant})"), &v)
        }
        ResultantVerdict::NotApplicable { reason } => {
            Outcome::verdict(format!("NOT APPLICABLE ({reason:?})"), &v).inconclusive()
        }
    };
    Ok((echo(s), out.rules([Rule::R2]), vec![]))
}

fn exists(weights: &[u32], n_ops: usize) -> Result<Dispatched, CliError> {
    if n_ops == 0 {
        return Err(CliError::Usage("--N must be at least 1".into()));
    }
    let l = input::weights(weights)?;
    let e = exists_quasielliptic(&l, n_ops);
    let summary = match &e {
        Existence::Exists { reason } => format!("an l-quasielliptic system of {n_ops} operator(s) exists ({reason})"),
        Existence::NotExists { odd, bound } => {
            format!("NO l-quasielliptic system exists ({odd} odd > 2N−1={bound})")
        }
    };
    let payload = json!({ "weights": l.entries(), "N": n_ops, "existence": e });
    Ok((vec![], Outcome::verdict(summary, payload), vec![]))
}

fn construct(weights: &[u32], n_ops: usize) -> Result<Dispatched, CliError> {
    if n_ops == 0 {
        return Err(CliError::Usage("--N must be at least 1".into()));
    }
    let l = input::weights(weights)?;
    if let Existence::NotExists { odd, bound } = exists_quasielliptic(&l, n_ops) {
        return Err(CliError::Usage(format!("no l-quasielliptic system exists ({odd} odd > 2N−1={bound})")));
    }
    let s = construct_quasielliptic(&l, n_ops)?;
    let header: Vec<String> = l.entries().iter().map(|w| w.to_string()).collect();
    let mut details = vec![format!("weights: {}", header.join(" "))];
    details.extend(echo(&s));
    let out = Outcome::verdict(format!("constructed {n_ops} operator(s), l = {l}"), &s).details(details);
    Ok((vec![], out, vec![]))
}

fn subordinate(s: &OperatorSystem, q: &str, weights: Option<&[u32]>) -> Result<Dispatched, CliError> {
    let qp = input::parse_expr(q, s.dim(), "--Q")?;
    let l = match weights {
        Some(w) => input::weights(w)?,
        None => s.weights(),
    };
    let v = subordination_principal(&qp, s, &l)?;
    let summary = match &v {
        Subordination::Coefficients { lambdas } => {
            let parts: Vec<String> = lambdas.iter().map(|c| c.to_string()).collect();
            format!("SUBORDINATE: Q^l = sum lambda_j P_j^l with lambda = [{}]", parts.join(", "))
        }
        Subordination::NoSolution { certificate } => {
            format!("NOT subordinate (dual certificate on {} monomial(s))", certificate.len())
        }
    };
    let mut inputs = echo(s);
    inputs.push(format_operator(&qp));
    let payload = json!({ "q": format_operator(&qp), "weights": l.entries(), "result": v });
    Ok((inputs, Outcome::verdict(summary, payload), vec![]))
}

fn s_system(s: &OperatorSystem) -> Result<Dispatched, CliError> {
    let ss = construct_s_system(s)?;
    let mut details: Vec<String> = echo(&ss.system);
    if let Some(w) = &ss.warning {
        details.push(format!("warning: {w}"));
    }
    let summary = format!("S-system with {} operator(s), order {}", ss.system.len(), ss.system.order());
    let out = Outcome::verdict(summary, &ss).details(details).rules([Rule::R5]);
    Ok((echo(s), out, vec![]))
}

fn as_s_system(s: &OperatorSystem) -> Result<OperatorSystem, CliError> {
    if recognize_s_system(s).is_some() {
        return Ok(s.clone());
    }
    Ok(construct_s_system(s)?.system)
}

fn minimality(s: &OperatorSystem, drop: Option<&[usize]>) -> Result<Dispatched, CliError> {
    let drop = drop.map(|d| input::pair(d, "--drop")).transpose()?;
    let ss = as_s_system(s)?;
    let m = minimality_check(&ss, drop)?;
    let summary = match &m {
        Minimality::Broken { monomial, .. } => {
            format!("MINIMAL: without the dropped operator xi^{} is no longer subordinate", fmt_index(monomial))
        }
        Minimality::Survives { note } => format!("NOT minimal: {note}"),
    };
    Ok((echo(s), Outcome::verdict(summary, &m).rules([Rule::R5]), vec![]))
}

enum SymbolMode<'a> {
    PRatio,
    Quotient { denominator: &'a str, cutoff: &'a str },
    Family { alpha: &'a [u32], j: usize, v: usize },
    Gamma { gamma: &'a [u32] },
}

fn base_system(s: &OperatorSystem) -> Result<OperatorSystem, CliError> {
    match recognize_s_system(s) {
        Some(base) => Ok(OperatorSystem::new(base, None)?),
        None => Ok(s.clone()),
    }
}

fn multiplier(s: &OperatorSystem, delta: Option<&str>, mode: SymbolMode, ctx: &Context) -> Result<Dispatched, CliError> {
    let grid = GridSpec { seed: ctx.seed, record_samples: ctx.dump.is_some(), ..GridSpec::default() };
    let (symbol, report): (String, CertReport) = match mode {
        SymbolMode::PRatio => {
            if delta.is_some() {
                return Err(CliError::Usage("--delta applies to symbol checks (--denominator, --alpha, --gamma)".into()));
            }
            let p = single(s, "multiplier-check")?;
            (format!("ratio test for {}", format_operator(&p)), check_p_ratio(&p, &grid)?)
        }
        mode => {
            let delta = delta.ok_or_else(|| CliError::Usage("--delta is required for symbol checks".into()))?;
            let delta = input::parse_rational(delta, "--delta")?;
            let phi = match mode {
                SymbolMode::Quotient { denominator, cutoff } => {
                    let d = input::parse_expr_any(denominator, "--denominator")?;
                    let n = d.dim().max(s.dim());
                    let p = input::parse_expr(&format_operator(&single(s, "multiplier-check")?), n, "operator")?;
                    let d = input::parse_expr(denominator, n, "--denominator")?;
                    RationalSymbol::quotient(p, d, input::parse_rational(cutoff, "--cutoff")?)?
                }
                SymbolMode::Family { alpha, j, v } => phi_family(&base_system(s)?, &MultiIndex(alpha.to_vec()), j, v)?,
                SymbolMode::Gamma { gamma } => phi_gamma(&base_system(s)?, &MultiIndex(gamma.to_vec()))?,
                SymbolMode::PRatio => unreachable!(),
            };
            (format!("symbol check at delta = {delta}"), check_mikhlin_like(&phi, &delta, &grid)?)
        }
    };
    if let Some(path) = &ctx.dump {
        report.write_csv(dump_file(path)?).map_err(|e| CliError::Io(path.clone(), e))?;
    }
    let summary = match &report.verdict {
        CertVerdict::PassHeuristic => format!("PASS (heuristic): {symbol}, sup estimate {:.4e}", report.a_delta_estimate),
        CertVerdict::FailWitness { alpha, point, .. } => {
            format!("FAIL: {symbol}, condition {} grows, worst point {}", fmt_index(alpha), fmt_point(point))
        }
    };
    let details = report
        .conditions
        .iter()
        .map(|c| format!("condition {}: sup {:.4e} at {}", fmt_index(&c.alpha), c.sup, fmt_point(&c.worst_point)));
    let out = Outcome::verdict(summary, &report).details(details.collect::<Vec<_>>());
    Ok((echo(s), out, vec![ctx.seed]))
}

fn witness(s: &OperatorSystem, alpha: &[u32], direction: &[String], steps: u32, ctx: &Context) -> Result<Dispatched, CliError> {
    let dir = direction.iter().map(|d| input::parse_rational(d, "--direction")).collect::<Result<Vec<_>, _>>()?;
    if dir.len() != s.dim() {
        return Err(CliError::Usage(format!("--direction has {} entries, expected {}", dir.len(), s.dim())));
    }
    let e = falsify_weak_coercivity(s, &MultiIndex(alpha.to_vec()), &dir, steps)?;
    if let Some(path) = &ctx.dump {
        e.write_csv(dump_file(path)?).map_err(|err| CliError::Io(path.clone(), err))?;
    }
    let exp = e.growth_exponent.map_or("n/a".to_string(), |g| format!("{g:.4}"));
    let details = e.steps.iter().map(|st| format!("t = {:e}: lower {:.4e}, upper {:.4e}, ratio {:.4e}", st.t, st.lower, st.upper, st.ratio));
    let out = if e.falsifies {
        Outcome::verdict(format!("FALSIFIED: ratio grows like t^{exp}; the estimate fails for D^{}", fmt_index(&e.alpha)), &e)
    } else {
        Outcome::verdict(format!("NOT FALSIFIED: growth exponent {exp}"), &e).inconclusive()
    };
    Ok((echo(s), out.details(details.collect::<Vec<_>>()), vec![]))
}

fn restrict(s: &OperatorSystem, keep: &[usize]) -> Result<Dispatched, CliError> {
    if keep.contains(&0) {
        return Err(CliError::Usage("--keep indices are one-based".into()));
    }
    let zero_based: Vec<usize> = keep.iter().map(|k| k - 1).collect();
    let ops = s.operators().iter().map(|p| p.restrict_coordinates(&zero_based)).collect::<Result<Vec<_>, _>>()?;
    let text: Vec<String> = ops.iter().map(format_operator).collect();
    let summary = format!("restriction to coordinates {keep:?}");
    let payload = json!({ "keep": keep, "operators": text });
    Ok((echo(s), Outcome::verdict(summary, payload).details(text), vec![]))
}
