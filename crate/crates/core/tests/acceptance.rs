//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symcoerce_core::coercive2d::{
    decide_weak_coercive_2d, resultant_criterion_2d, MaybeExactPoly, NotCoerciveReason, ResultantVerdict, Status2D,
};
use symcoerce_core::coercive_nd::{classify_weak_coercivity, construct_s_system, minimality_check, Minimality, Rule, StatusND};
use symcoerce_core::ellipticity::{
    construct_quasielliptic, exists_quasielliptic, is_elliptic, is_quasielliptic, jacobian_rank_at, two_sided_estimate_constants,
    EllipticityStatus, EstimateGrid, Exactness, Existence,
};
use symcoerce_core::gaussian::{rat, rat_to_f64};
use symcoerce_core::multiplier::{check_mikhlin_like, phi_family, CertVerdict, GridSpec};
use symcoerce_core::sturm::count_real_roots;
use symcoerce_core::univariate::{resultant, QPoly};
use symcoerce_core::witness::falsify_weak_coercivity;
use symcoerce_core::{format_operator, parse_operator, GaussianRational, MultiIndex, OperatorSystem, Polynomial, Rational, WeightVector};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn p(s: &str, n: usize) -> Polynomial {
    parse_operator(s, Some(n)).unwrap_or_else(|e| panic!("{s}: {e:?}"))
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn gi(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_ints(re, im)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random polynomial with Gaussian-integer coefficients of total degree `<= d`.
fn random_poly(r: &mut ChaCha8Rng, n: usize, max_deg: u32, terms: usize, range: i64) -> Polynomial {
    Polynomial::from_terms(
        n,
        (0..terms).map(|_| {
            let d = r.gen_range(0..=max_deg);
            let mut e = vec![0u32; n];
            for _ in 0..d {
                e[r.gen_range(0..n)] += 1;
            }
            (MultiIndex(e), gi(r.gen_range(-range..=range), r.gen_range(-range..=range)))
        }),
    )
}

fn c1_malgrange() -> Outcome {
    let v = decide_weak_coercive_2d(&p("(D1+i)*(D2+i)", 2)).map_err(|e| e.to_string())?;
    let Status2D::WeaklyCoerciveNotElliptic { normal_form } = &v.status else {
        return Err(format!("status {}", v.label()));
    };
    check(normal_form.elliptic_part == MaybeExactPoly::Exact(Polynomial::one(2)), "R != 1")?;
    check(normal_form.remainder == MaybeExactPoly::Exact(Polynomial::zero(2)), "Q != 0")?;
    check(normal_form.exact && normal_form.residual == 0.0, "not exact")?;
    let f: Vec<String> =
        normal_form.affine_factors.iter().map(|a| format!("({},{},{})", a.lambda, a.mu, a.alpha)).collect();
    check(f == ["(1,0,i)", "(0,1,i)"], format!("factors {f:?}"))?;
    Ok(format!("R=1, factors {}, Q=0, residual 0", f.join(" ")))
}

fn c2_dalembert() -> Outcome {
    let v = decide_weak_coercive_2d(&p("D1^2-D2^2", 2)).map_err(|e| e.to_string())?;
    match &v.status {
        Status2D::NotWeaklyCoercive { reason: NotCoerciveReason::RealAlpha { alpha } } => {
            check(alpha.alpha.exact() == Some(&GaussianRational::zero()), format!("alpha {}", alpha.alpha))?
        }
        _ => return Err(format!("D1^2-D2^2: {}", v.label())),
    }
    let w = decide_weak_coercive_2d(&p("(D1-D2+i)*(D1+D2+i)", 2)).map_err(|e| e.to_string())?;
    check(matches!(w.status, Status2D::WeaklyCoerciveNotElliptic { .. }), format!("perturbed: {}", w.label()))?;
    Ok("RealAlpha(alpha=0); perturbed pair WeaklyCoerciveNotElliptic".into())
}

fn c3_double_zero() -> Outcome {
    let mut ops = vec![p("D1^2 + D2", 2)];
    let mut r = rng(3);
    for _ in 0..50 {
        let tail = random_poly(&mut r, 2, 1, 4, 5);
        ops.push(&p("D1^2", 2) + &tail);
    }
    let mut hits = 0;
    for op in &ops {
        let v = decide_weak_coercive_2d(op).map_err(|e| e.to_string())?;
        if matches!(v.status, Status2D::NotWeaklyCoercive { reason: NotCoerciveReason::MultipleRealZero { .. } }) {
            hits += 1;
        }
    }
    check(hits == ops.len(), format!("{hits}/{} MultipleRealZero", ops.len()))?;
    Ok(format!("{hits}/{} MultipleRealZero", ops.len()))
}

/// Product of distinct real linear forms times a unit, plus a random tail.
fn simple_real_principal(r: &mut ChaCha8Rng) -> Polynomial {
    let l = r.gen_range(1..=6u32);
    let mut slopes: Vec<(i64, i64)> = Vec::new();
    while slopes.len() < l as usize {
        let (a, b) = (r.gen_range(-4..=4i64), r.gen_range(-4..=4i64));
        if (a, b) == (0, 0) || slopes.iter().any(|&(c, d)| a * d == b * c) {
            continue;
        }
        slopes.push((a, b));
    }
    let mut pl = Polynomial::one(2);
    for (a, b) in slopes {
        pl = &pl * &Polynomial::from_terms(2, [(MultiIndex(vec![1, 0]), gi(a, 0)), (MultiIndex(vec![0, 1]), gi(b, 0))]);
    }
    let scale = gi(r.gen_range(1..=3), 0);
    let mut tail = random_poly(r, 2, l - 1, 4, 3);
    match r.gen_range(0..3) {
        0 => tail = tail.re_part(),
        1 if l >= 2 => {
            let f = Polynomial::from_terms(2, [(MultiIndex(vec![1, 0]), gi(1, 0))]);
            let lin = pl.div_exact(&f).map(|_| f);
            if let Some(f) = lin {
                tail = &tail + &(&f * &random_poly(r, 2, l - 2, 3, 3).homogeneous_component(l - 2)).scale(&gi(0, 1));
            }
        }
        _ => {}
    }
    &pl.scale(&scale) + &tail
}

fn c4_oracle_equivalence() -> Outcome {
    let mut r = rng(4);
    let (mut checked, mut wc, mut disagree) = (0, 0, Vec::new());
    while checked < 240 {
        let op = simple_real_principal(&mut r);
        let res = resultant_criterion_2d(&op).map_err(|e| e.to_string())?;
        let direct = decide_weak_coercive_2d(&op).map_err(|e| e.to_string())?;
        let a = match res {
            ResultantVerdict::WeaklyCoercive { .. } => true,
            ResultantVerdict::NotWeaklyCoercive { .. } => false,
            ResultantVerdict::NotApplicable { reason } => return Err(format!("{op}: not applicable {reason:?}")),
        };
        if a {
            wc += 1;
        }
        if a != direct.is_weakly_coercive() {
            disagree.push(op.to_string());
        }
        checked += 1;
    }
    check(disagree.is_empty(), format!("{} disagreements, first {:?}", disagree.len(), disagree.first()))?;
    Ok(format!("{checked} operators ({wc} weakly coercive), 0 disagreements"))
}

fn parity_oracle(l: &[u32], n_ops: usize) -> bool {
    let odd = l.iter().filter(|&&x| x % 2 == 1).count();
    l.len() <= 2 * n_ops || odd < 2 * n_ops
}

fn c5_parity() -> Outcome {
    let start = Instant::now();
    let (mut cases, mut built) = (0usize, 0usize);
    for n in 1..=7usize {
        let total = 4usize.pow(n as u32);
        for code in 0..total {
            let l: Vec<u32> = (0..n).map(|k| ((code / 4usize.pow(k as u32)) % 4 + 1) as u32).collect();
            let w = WeightVector::new(l.clone()).map_err(|e| e.to_string())?;
            for n_ops in 1..=3 {
                cases += 1;
                let exists = matches!(exists_quasielliptic(&w, n_ops), Existence::Exists { .. });
                check(exists == parity_oracle(&l, n_ops), format!("l={l:?} N={n_ops}: truth table mismatch"))?;
                if !exists {
                    continue;
                }
                let s = construct_quasielliptic(&w, n_ops).map_err(|e| format!("l={l:?} N={n_ops}: {e}"))?;
                let v = is_quasielliptic(&s, &w).map_err(|e| e.to_string())?;
                let ok = match &v.status {
                    EllipticityStatus::QuasiElliptic => n != 2 || v.exactness == Exactness::Exact,
                    EllipticityStatus::NumericallyQuasiElliptic { min_value, .. } => n != 2 && *min_value > 1e-6,
                    EllipticityStatus::NotQuasiElliptic { .. } => false,
                };
                check(ok, format!("l={l:?} N={n_ops}: constructed system {:?} gave {}", v.method, v.label()))?;
                built += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 60.0, format!("took {secs:.1}s"))?;
    Ok(format!("{cases} cases, {built} constructions verified, {secs:.1}s"))
}

fn c6_jacobian() -> Outcome {
    let s = OperatorSystem::new(vec![p("(D1+i)*(D2+i)", 4), p("(D3+i)*(D4+i)", 4)], None).map_err(|e| e.to_string())?;
    let r1 = jacobian_rank_at(&s, &[rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)]).map_err(|e| e.to_string())?;
    let r2 = jacobian_rank_at(&s, &[rat(1, 1), rat(0, 1), rat(1, 1), rat(0, 1)]).map_err(|e| e.to_string())?;
    check((r1, r2) == (1, 2), format!("ranks {r1}, {r2}"))?;
    Ok("rank 1 at (1,0,0,0), rank 2 at (1,0,1,0)".into())
}

fn random_quadratic(r: &mut ChaCha8Rng, n: usize, definite: bool) -> Polynomial {
    let mut terms = Vec::new();
    let neg = r.gen_range(0..n);
    for k in 0..n {
        let mut e = vec![0u32; n];
        e[k] = 2;
        let c = r.gen_range(2 * n as i64..=3 * n as i64);
        let c = if !definite && k == neg { -c } else { c };
        terms.push((MultiIndex(e), gi(c, 0)));
        for j in k + 1..n {
            let mut e = vec![0u32; n];
            e[k] = 1;
            e[j] = 1;
            terms.push((MultiIndex(e), gi(r.gen_range(-1..=1), 0)));
        }
    }
    if !definite {
        let mut e = vec![0u32; n];
        e[(neg + 1) % n] = 2;
        terms.push((MultiIndex(e), gi(0, 0)));
    }
    Polynomial::from_terms(n, terms)
}

fn c7_de_leeuw_mirkil() -> Outcome {
    let mut r = rng(7);
    let (mut r3, mut r1) = (0, 0);
    for i in 0..100 {
        let n = 3 + i % 3;
        let principal = if i % 4 == 3 {
            random_poly(&mut r, n, 3, 6, 4).homogeneous_component(3)
        } else {
            random_quadratic(&mut r, n, false)
        };
        let principal = if principal.is_zero() { p("D1^3", n) } else { principal };
        let l = principal.total_degree().unwrap_or(0);
        let op = &principal + &random_poly(&mut r, n, l - 1, 4, 3);
        let v = classify_weak_coercivity(&OperatorSystem::single(op.clone())).map_err(|e| e.to_string())?;
        if v.rule() == Some(Rule::R3) && v.is_weakly_coercive() == Some(false) {
            r3 += 1;
        } else {
            return Err(format!("non-elliptic {op}: {:?}", v.rule()));
        }
    }
    for i in 0..100 {
        let n = 3 + i % 3;
        let mut principal = random_quadratic(&mut r, n, true);
        if i % 2 == 1 {
            principal = &principal + &random_quadratic(&mut r, n, false).scale(&gi(0, 1));
        }
        let op = &principal + &random_poly(&mut r, n, 1, 4, 3);
        let v = classify_weak_coercivity(&OperatorSystem::single(op.clone())).map_err(|e| e.to_string())?;
        if v.status == StatusND::Elliptic && v.rule() == Some(Rule::R1) {
            r1 += 1;
        } else {
            return Err(format!("elliptic {op}: {:?}", v.rule()));
        }
    }
    Ok(format!("non-elliptic: {r3}/100 via R3; elliptic: {r1}/100 via R1"))
}

fn c8_s_system() -> Outcome {
    let base = OperatorSystem::single(p("D1^2 + D2^2 + D3^2", 3));
    let s = construct_s_system(&base).map_err(|e| e.to_string())?;
    check(s.system.len() == 3, format!("{} operators", s.system.len()))?;
    let ell = is_elliptic(&s.system).map_err(|e| e.to_string())?;
    let w = ell.witness().ok_or("S-system reported elliptic")?;
    check(w.point.iter().filter(|x| x.abs() > 1e-12).count() == 1, format!("witness {:?} not on an axis", w.point))?;
    let mut broken = 0;
    for drop in [(2, 1), (3, 1), (3, 2)] {
        match minimality_check(&s.system, Some(drop)).map_err(|e| e.to_string())? {
            Minimality::Broken { certificate, .. } if !certificate.is_empty() => broken += 1,
            other => return Err(format!("drop {drop:?}: {other:?}")),
        }
    }
    let delta = rat(1, 6);
    let grid = GridSpec::default();
    let mut failures = Vec::new();
    let mut total = 0;
    for d in 1..=3u32 {
        for alpha in MultiIndex::all_of_degree(3, d) {
            if alpha.exps()[0] == 0 {
                continue;
            }
            for v in 2..=3 {
                total += 1;
                let phi = phi_family(&base, &alpha, 1, v).map_err(|e| e.to_string())?;
                let rep = check_mikhlin_like(&phi, &delta, &grid).map_err(|e| e.to_string())?;
                if let CertVerdict::FailWitness { alpha: cond, point, trend } = &rep.verdict {
                    let t: Vec<String> = trend.iter().map(|t| format!("{:.3e}@{}", t.sup, t.radius)).collect();
                    failures.push(format!(
                        "Phi[{:?},v={v}] cond {:?} at {:?}: {}",
                        alpha.exps(),
                        cond.exps(),
                        point.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>(),
                        t.join(" ")
                    ));
                }
            }
        }
    }
    check(
        failures.is_empty(),
        format!("{}/{total} multipliers not plateauing: {}", failures.len(), failures.join("; ")),
    )?;
    Ok(format!("3 operators, axis witness, {total}/{total} multipliers plateau, {broken}/3 pairs Broken"))
}

fn c9_witness() -> Outcome {
    let d = OperatorSystem::single(p("D1^2 - D2^2", 2));
    let e = falsify_weak_coercivity(&d, &MultiIndex(vec![1, 0]), &[rat(1, 1), rat(1, 1)], 8).map_err(|e| e.to_string())?;
    let g = e.growth_exponent.ok_or("no exponent")?;
    check((0.8..=1.2).contains(&g), format!("d'Alembertian exponent {g:.4}"))?;
    let m = OperatorSystem::single(p("D1*D2 + i*D1 + i*D2 - 1", 2));
    let e = falsify_weak_coercivity(&m, &MultiIndex(vec![1, 0]), &[rat(1, 1), rat(0, 1)], 8).map_err(|e| e.to_string())?;
    let h = e.growth_exponent.ok_or("no exponent")?;
    check(h < 0.1, format!("Malgrange exponent {h:.4}"))?;
    Ok(format!("d'Alembertian exponent {g:.4}, Malgrange exponent {h:.4}"))
}

fn sign_changes(p: &QPoly, lo: f64, hi: f64, steps: usize) -> usize {
    let c: Vec<f64> = p.coeffs().iter().map(rat_to_f64).collect();
    let eval = |x: f64| c.iter().rev().fold(0.0, |acc, v| acc * x + v);
    let mut count = 0;
    let mut prev = eval(lo).signum();
    for i in 1..=steps {
        let x = lo + (hi - lo) * i as f64 / steps as f64;
        let s = eval(x).signum();
        if s != prev && s != 0.0 {
            count += 1;
            prev = s;
        }
    }
    count
}

fn c10_sturm_resultant() -> Outcome {
    let mut r = rng(10);
    for case in 0..1000 {
        let deg = r.gen_range(1..=8usize);
        let real = r.gen_range(0..=deg);
        let mut roots: Vec<i64> = Vec::new();
        while roots.len() < real {
            let k = r.gen_range(-40..=40i64);
            if !roots.contains(&k) {
                roots.push(k);
            }
        }
        let mut poly = QPoly::constant(rat(r.gen_range(1..=5), 1) * rat(if r.gen_bool(0.5) { 1 } else { -1 }, 1));
        for &k in &roots {
            poly = &poly * &QPoly::new(vec![rat(-k, 4), rat(1, 1)]);
        }
        let mut d = real;
        while d + 2 <= deg {
            let q = QPoly::new(vec![rat(r.gen_range(2..=9), 1), rat(r.gen_range(-2..=2), 1), rat(1, 1)]);
            poly = &poly * &q;
            d += 2;
        }
        let sturm = count_real_roots(&poly).map_err(|e| e.to_string())?;
        let grid = sign_changes(&poly, -10.0 - 1.0 / 128.0, 10.0 + 1.0 / 128.0, 20 * 64 + 1);
        check(sturm == real && grid == real, format!("case {case}: sturm {sturm}, grid {grid}, expected {real}"))?;
    }
    for case in 0..200 {
        let m = r.gen_range(1..=4usize);
        let n = r.gen_range(1..=4usize);
        let a: Vec<Rational> = (0..m).map(|_| rat(r.gen_range(-9..=9), r.gen_range(1..=3))).collect();
        let b: Vec<Rational> = (0..n).map(|_| rat(r.gen_range(-9..=9), r.gen_range(1..=3))).collect();
        let (ca, cb) = (rat(r.gen_range(1..=4), 1), rat(-r.gen_range(1..=4), 1));
        let f = a.iter().fold(QPoly::constant(ca.clone()), |acc, x| &acc * &QPoly::new(vec![-x.clone(), Rational::one()]));
        let g = b.iter().fold(QPoly::constant(cb.clone()), |acc, x| &acc * &QPoly::new(vec![-x.clone(), Rational::one()]));
        let mut expect = ca.pow(n as i32) * cb.pow(m as i32);
        for x in &a {
            for y in &b {
                expect *= x - y;
            }
        }
        let got = resultant(&f, &g).map_err(|e| e.to_string())?;
        check(got == expect, format!("resultant case {case}: {got} vs {expect}"))?;
    }
    Ok("1000 Sturm counts match grid sign changes; 200 resultants equal root products".into())
}

fn c11_parser() -> Outcome {
    let mut r = rng(11);
    for i in 0..10_000 {
        let n = r.gen_range(1..=5);
        let terms = r.gen_range(0..7);
        let q = random_poly(&mut r, n, 5, terms, 20);
        let text = format_operator(&q);
        let back = parse_operator(&text, Some(n)).map_err(|e| format!("case {i}: {text}: {e:?}"))?;
        check(back == q, format!("case {i}: {text} round-trips to {back}"))?;
    }
    let alphabet = b"D0123456789+-*^()i. \t\n;,#xi[]{}=/\\\x00\xff";
    let mut diagnostics = 0;
    for _ in 0..100_000 {
        let len = r.gen_range(0..24);
        let bytes: Vec<u8> =
            (0..len).map(|_| if r.gen_bool(0.8) { alphabet[r.gen_range(0..alphabet.len())] } else { r.gen() }).collect();
        let text = String::from_utf8_lossy(&bytes);
        let out = std::panic::catch_unwind(|| parse_operator(&text, None).is_err());
        match out {
            Ok(true) => diagnostics += 1,
            Ok(false) => {}
            Err(_) => return Err(format!("parser panicked on {bytes:?}")),
        }
    }
    Ok(format!("10000 round-trips; 100000 fuzz inputs, {diagnostics} diagnostics, 0 crashes"))
}

fn c12_two_sided() -> Outcome {
    let s = OperatorSystem::single(p("D1^2 + i*D2^3", 2));
    let w = WeightVector::new(vec![2, 3]).map_err(|e| e.to_string())?;
    let e = two_sided_estimate_constants(&s, &w, &EstimateGrid::default()).map_err(|e| e.to_string())?;
    check(e.c1 == 1.0 && e.c2 == 1.0 && e.exact == Some(rat(1, 1)), format!("anisotropic: {e:?}"))?;
    let s = OperatorSystem::single(p("D1^2 + D2^2", 2));
    let e = two_sided_estimate_constants(&s, &s.weights(), &EstimateGrid::default()).map_err(|e| e.to_string())?;
    check((0.99..=1.01).contains(&e.c1) && (1.99..=2.01).contains(&e.c2), format!("isotropic: {e:?}"))?;
    Ok(format!("C1=C2=1 exactly; Laplacian C1={:.6}, C2={:.6}", e.c1, e.c2))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("1 Malgrange normal form", c1_malgrange),
        ("2 d'Alembertian pair", c2_dalembert),
        ("3 double-zero rule", c3_double_zero),
        ("4 resultant oracle equivalence", c4_oracle_equivalence),
        ("5 parity truth table", c5_parity),
        ("6 Jacobian ranks", c6_jacobian),
        ("7 single-operator rule", c7_de_leeuw_mirkil),
        ("8 S-system suite", c8_s_system),
        ("9 witness lab", c9_witness),
        ("10 Sturm/resultant oracles", c10_sturm_resultant),
        ("11 parser round-trip and fuzz", c11_parser),
        ("12 two-sided estimate", c12_two_sided),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|x| name.contains(x.as_str())) {
            continue;
        }
        let start = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("PASS [{name}] {msg} ({secs:.2}s)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{name}] {msg} ({secs:.2}s)");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
