//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use omvals::clibench::{ex1, ex2, ex3, ex4, ex5};
use omvals::config::Config;
use omvals::diffdisc::{p_discriminant_report, DiscReport};
use omvals::ffield::ff_ord;
use omvals::montes::{montes_factorize, OMRep};
use omvals::newton::{newton_data, residual_polynomial};
use omvals::omtype::OMType;
use omvals::oracle::{naive_discriminant, naive_discriminant_cancellable, naive_resultant};
use omvals::polyz::{pow_p, vp_int, PIntPoly, Val, WorkPoly};
use omvals::presultant::p_resultant;
use omvals::sfl::{measure, sfl_iteration};

const PRIMES: [u64; 6] = [2, 3, 5, 7, 13, 101];
const TABLE_LIMIT: Duration = Duration::from_secs(60);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_monic(rng: &mut ChaCha8Rng, max_deg: usize) -> PIntPoly {
    let n = rng.gen_range(1..=max_deg);
    let mut c: Vec<i64> = (0..n).map(|_| rng.gen_range(-10_000..=10_000)).collect();
    c.push(1);
    PIntPoly::from_i64s(&c)
}

fn v_p(p: u64, n: u64) -> i64 {
    let (mut n, mut k) = (n, 0);
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

/// Identity checks on one disc report; returns a description of the first violation.
fn check_identities(g: &PIntPoly, p: u64, rep: &DiscReport) -> Result<usize, String> {
    let Some(fac) = &rep.factorization else {
        return Err("no factorization".into());
    };
    match fac.ind {
        Val::Fin(x) if x >= 0 => {}
        v => return Err(format!("ind_p = {v}")),
    }
    let mut deg = 0;
    for (r, d) in fac.reps.iter().zip(&rep.differents) {
        let inv = &r.invariants;
        let (e, f) = (BigRational::from(BigInt::from(inv.e)), BigRational::from(BigInt::from(inv.f)));
        let one = BigRational::from(BigInt::from(1));
        let c1 = &e * &inv.mu - &e + &one;
        let c2 = BigRational::from(BigInt::from(2)) * &inv.ind / &f;
        if inv.conductor != c1 || inv.conductor != c2 {
            return Err(format!("conductor {} vs eμ−e+1 = {c1}, 2ind/f = {c2}", inv.conductor));
        }
        if !inv.ind.is_integer() || inv.ind.is_negative() {
            return Err(format!("ind(F) = {}", inv.ind));
        }
        let wild = inv.e % p == 0;
        if (d.rho == 0) == wild {
            return Err(format!("rho = {} with e = {}", d.rho, inv.e));
        }
        if d.rho < 0 || d.rho > inv.e as i64 * v_p(p, inv.e) {
            return Err(format!("rho = {} out of [0, e·v_p(e)] for e = {}", d.rho, inv.e));
        }
        deg += inv.e * inv.f;
    }
    if deg != g.deg() as u64 {
        return Err(format!("Σ e·f = {deg} but deg = {}", g.deg()));
    }
    Ok(fac.reps.len())
}

struct Table {
    reports: Vec<(PIntPoly, u64, DiscReport)>,
}

fn criterion_1(tab: &mut Table) -> Outcome {
    let cfg = Config::default();
    let mut bad = vec![];
    let mut slowest = Duration::ZERO;
    let disc_cases: Vec<(&str, u64, PIntPoly, i64)> = vec![
        ("ex1 n=20", 2, ex1(2, 20).unwrap(), 7659),
        ("ex1 n=50", 2, ex1(2, 50).unwrap(), 49099),
        ("ex1 n=20", 59, ex1(59, 20).unwrap(), 7619),
        ("ex2 m=3", 7, ex2(7, 3).unwrap(), 297),
        ("ex2 m=5", 23, ex2(23, 5).unwrap(), 495),
        ("ex3 j=5", 5, ex3(5, 5).unwrap(), 4671),
        ("ex3 j=6", 5, ex3(5, 6).unwrap(), 18899),
        ("ex3 j=5", 61, ex3(61, 5).unwrap(), 4671),
    ];
    for (name, p, g, want) in disc_cases {
        let t0 = Instant::now();
        let got = p_discriminant_report(&g, p, &cfg, false);
        let dt = t0.elapsed();
        slowest = slowest.max(dt);
        match got {
            Ok(r) if r.result.v_disc == Val::Fin(want) && dt < TABLE_LIMIT => tab.reports.push((g, p, r)),
            Ok(r) => bad.push(format!("{name} p={p}: {} in {dt:.2?}", r.result.v_disc)),
            Err(e) => bad.push(format!("{name} p={p}: {e}")),
        }
    }
    let res_cases: Vec<(&str, u64, (PIntPoly, PIntPoly), i64)> = vec![
        ("ex4 deg 30", 7, ex4(7, 3).unwrap(), 300),
        ("ex4 deg 50", 11, ex4(11, 5).unwrap(), 500),
        ("ex5 E5,E6", 5, ex5(5, 5, 6).unwrap(), 9557),
        ("ex5 E6,E7", 5, ex5(5, 6, 7).unwrap(), 57343),
    ];
    for (name, p, (f, g), want) in res_cases {
        let t0 = Instant::now();
        let got = p_resultant(&f, &g, p);
        let dt = t0.elapsed();
        slowest = slowest.max(dt);
        match got {
            Ok(v) if v == Val::Fin(want) && dt < TABLE_LIMIT => {}
            Ok(v) => bad.push(format!("{name} p={p}: {v} in {dt:.2?}")),
            Err(e) => bad.push(format!("{name} p={p}: {e}")),
        }
    }
    if bad.is_empty() {
        outcome(true, format!("example tables: 12/12 exact, slowest {slowest:.2?} (limit 60 s)"))
    } else {
        outcome(false, format!("example tables: {}", bad.join("; ")))
    }
}

fn criterion_2(tab: &mut Table) -> Outcome {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut bad = vec![];
    let mut polys = vec![];
    while polys.len() < 200 {
        let g = random_monic(&mut rng, 12);
        let d = naive_discriminant(&g);
        if !d.is_zero() {
            polys.push((g, d));
        }
    }
    for (g, d) in &polys {
        for &p in &PRIMES {
            match p_discriminant_report(g, p, &cfg, false) {
                Ok(r) if r.result.v_disc == vp_int(p, d) => tab.reports.push((g.clone(), p, r)),
                Ok(r) => bad.push(format!("disc {g} p={p}: {} vs {}", r.result.v_disc, vp_int(p, d))),
                Err(e) => bad.push(format!("disc {g} p={p}: {e}")),
            }
        }
    }
    let mut zero_res = 0;
    for k in 0..200 {
        let p = PRIMES[k % PRIMES.len()];
        let f = random_monic(&mut rng, 12);
        let g = random_monic(&mut rng, 12);
        let want = vp_int(p, &naive_resultant(&f, &g));
        if want.is_inf() {
            zero_res += 1;
        }
        match p_resultant(&f, &g, p) {
            Ok(v) if v == want => {}
            Ok(v) => bad.push(format!("res ({f}, {g}) p={p}: {v} vs {want}")),
            Err(e) => bad.push(format!("res ({f}, {g}) p={p}: {e}")),
        }
    }
    if bad.is_empty() {
        outcome(true, format!("oracle equivalence: 1200/1200 discriminants, 200/200 resultants ({zero_res} zero)"))
    } else {
        let n = bad.len();
        bad.truncate(3);
        outcome(false, format!("oracle equivalence: {n} mismatches, e.g. {}", bad.join("; ")))
    }
}

fn criterion_3(tab: &Table) -> Outcome {
    let mut reps = 0;
    let mut bad = vec![];
    for (g, p, r) in &tab.reports {
        match check_identities(g, *p, r) {
            Ok(n) => reps += n,
            Err(e) => bad.push(format!("{g} p={p}: {e}")),
        }
    }
    if bad.is_empty() {
        outcome(true, format!("identities: {reps} OM reps over {} factorizations", tab.reports.len()))
    } else {
        let n = bad.len();
        bad.truncate(3);
        outcome(false, format!("identities: {n} violations, e.g. {}", bad.join("; ")))
    }
}

/// ℓ(N_{i+1}^-(g)) and ord_{ψ_i} R_i(g) for the order-i prefix of `t`.
fn length_pair(t: &OMType, i: usize, g: &PIntPoly) -> omvals::Result<(usize, usize)> {
    let w = WorkPoly::new(g, t.p, None);
    let parent = t.truncated(i - 1);
    let lev = &t.levels[i - 1];
    let data = newton_data(&parent, g.deg() / parent.top.m, &w)?;
    let r = residual_polynomial(&parent, &data, lev.h, lev.e)?;
    let ord = ff_ord(&parent.tower, &r, &lev.psi)?;
    let child = t.truncated(i);
    let data = newton_data(&child, g.deg() / child.top.m, &w)?;
    let min = data.ords.iter().filter_map(|v| v.fin()).min().expect("g is nonzero");
    let len = data.ords.iter().position(|v| v.fin() == Some(min)).unwrap();
    Ok((len, ord))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut sources: Vec<(PIntPoly, OMRep)> = vec![];
    let mut seeds = vec![
        (ex1(2, 20).unwrap(), 2),
        (ex2(7, 3).unwrap(), 7),
        (ex3(5, 4).unwrap(), 5),
        (PIntPoly::from_i64s(&[6, 2, 0, 2, 1]), 2),
    ];
    while seeds.len() < 12 {
        let p = PRIMES[rng.gen_range(0..4)];
        let g = random_monic(&mut rng, 10);
        let shifted = g.scale_var(&BigInt::from(p)).reduce_mod_power(p, 6);
        let mut c = shifted.coeffs().to_vec();
        c.resize(g.deg() + 1, BigInt::zero());
        c[g.deg()] = BigInt::from(1);
        seeds.push((PIntPoly::new(c), p));
    }
    for (f, p) in seeds {
        if let Ok(fac) = montes_factorize(&f, p, None) {
            for r in fac.reps {
                if r.depth() >= 1 {
                    sources.push((f.clone(), r));
                }
            }
        }
    }
    let mut checked = 0;
    let mut nontrivial = 0;
    let mut bad = vec![];
    let mut attempts = 0;
    while checked < 100 && attempts < 2000 {
        attempts += 1;
        let (f, rep) = &sources[rng.gen_range(0..sources.len())];
        let t = &rep.omtype;
        let p = t.p;
        let i = rng.gen_range(1..=t.order());
        let noise = {
            let n = rng.gen_range(0..=f.deg());
            let c: Vec<BigInt> = (0..=n).map(|_| BigInt::from(rng.gen_range(-50i64..=50))).collect();
            PIntPoly::new(c)
        };
        let g = match rng.gen_range(0..4) {
            0 => f.clone(),
            1 => f * &noise,
            2 => {
                let k = rng.gen_range(1..=3u64);
                &t.phi(i + 1).pow(k) + &noise.scale(&pow_p(p, rng.gen_range(0..40)))
            }
            _ => &(f * &PIntPoly::from_i64s(&[rng.gen_range(-9..=9), 1])) + &noise.scale(&pow_p(p, rng.gen_range(0..60))),
        };
        if g.is_zero() {
            continue;
        }
        match length_pair(t, i, &g) {
            Ok((len, ord)) => {
                checked += 1;
                if ord > 0 {
                    nontrivial += 1;
                }
                if len != ord {
                    bad.push(format!("level {i} of a rep of {f}, g = {g}: ℓ = {len}, ord = {ord}"));
                }
            }
            Err(e) => bad.push(format!("level {i}, g = {g}: {e}")),
        }
    }
    if checked < 100 {
        return outcome(false, format!("polygon length = residual order: only {checked} instances sampled"));
    }
    if bad.is_empty() {
        outcome(true, format!("polygon length = residual order: {checked}/{checked} instances ({nontrivial} with positive order)"))
    } else {
        let n = bad.len();
        bad.truncate(2);
        outcome(false, format!("polygon length = residual order: {n} failures, e.g. {}", bad.join("; ")))
    }
}

/// A representative of the Ex.1 factor with h_φ = 1: f + δ with v_2(δ) = V_2 + 1.
fn h_one_rep(f: &PIntPoly, p: u64) -> omvals::Result<OMRep> {
    let fac = montes_factorize(f, p, None)?;
    let rep = fac.reps.into_iter().next().expect("one factor");
    let t = &rep.omtype;
    let r1 = t.order() + 1;
    let target = t.top.v + 1;
    let phi1 = t.phi(t.order());
    let (vp, vphi) = match (t.value(r1, &PIntPoly::constant(BigInt::from(p))), t.value(r1, phi1)) {
        (Val::Fin(a), Val::Fin(b)) => (a, b),
        _ => return Err(omvals::Error::InsufficientPrecision),
    };
    for b in 0..t.top.m as i64 {
        let rest = target - b * vphi;
        if rest >= 0 && rest % vp == 0 {
            let delta = phi1.pow(b as u64).scale(&pow_p(p, (rest / vp) as u64));
            assert_eq!(t.value(r1, &delta), Val::Fin(target));
            let mut t2 = t.clone();
            t2.top.phi = f + &delta;
            return OMRep::new(t2, Val::Fin(1));
        }
    }
    Err(omvals::Error::InvariantViolation("no perturbation found".into()))
}

fn criterion_5() -> Outcome {
    let cfg = Config::default();
    let f = ex1(2, 20).unwrap();
    let mut rep = match h_one_rep(&f, 2) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("sfl doubling: {e}")),
    };
    let polygon_h = |rep: &OMRep| measure(&rep.omtype, &WorkPoly::new(&f, 2, None));
    let mut hs = vec![];
    match polygon_h(&rep) {
        Ok(Val::Fin(1)) => hs.push(Val::Fin(1)),
        other => return outcome(false, format!("sfl doubling: starting h = {other:?}")),
    }
    for step in 1..=5 {
        rep = match sfl_iteration(&rep, &f, &cfg) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("sfl doubling: step {step}: {e}")),
        };
        let h = match polygon_h(&rep) {
            Ok(h) => h,
            Err(e) => return outcome(false, format!("sfl doubling: step {step} measure: {e}")),
        };
        let prev = hs[hs.len() - 1].fin().unwrap();
        let doubled = match h {
            Val::Fin(x) => x >= 2 * prev,
            Val::Inf => true,
            Val::AtLeast(_) => false,
        };
        if rep.h_phi != h || !doubled {
            return outcome(false, format!("sfl doubling: step {step} gave h = {h} (stored {}), trail {hs:?}", rep.h_phi));
        }
        hs.push(h);
        if h.is_inf() {
            // φ is now the factor itself; further steps are the identity
            break;
        }
    }
    let trail: Vec<String> = hs.iter().map(|h| h.to_string()).collect();
    let reached = match *hs.last().unwrap() {
        Val::Fin(x) => x >= 32,
        v => v.is_inf(),
    };
    outcome(reached, format!("sfl doubling: h trail [{}] (need ≥ 32 within 5 steps)", trail.join(", ")))
}

fn engine_time(g: &PIntPoly, p: u64) -> (Duration, Val) {
    let cfg = Config::default();
    let mut best = Duration::MAX;
    let mut val = Val::Inf;
    for _ in 0..3 {
        let t0 = Instant::now();
        val = p_discriminant_report(g, p, &cfg, false).expect("engine").result.v_disc;
        best = best.min(t0.elapsed());
    }
    (best, val)
}

/// Oracle wall-clock, abandoned once it exceeds `cap`.
fn oracle_time(g: &PIntPoly, cap: Duration) -> (Duration, bool) {
    let stop = Arc::new(AtomicBool::new(false));
    let (g2, s2) = (g.clone(), stop.clone());
    let t0 = Instant::now();
    let h = thread::spawn(move || naive_discriminant_cancellable(&g2, Some(&s2)).is_ok());
    while !h.is_finished() && t0.elapsed() < cap {
        thread::sleep(Duration::from_millis(2));
    }
    let dt = t0.elapsed();
    stop.store(true, Ordering::Relaxed);
    let finished = h.join().unwrap();
    (dt, finished)
}

fn criterion_6() -> Outcome {
    let mut parts = vec![];
    let mut pass = true;
    for (name, p, g) in [("ex1 p=59 n=100", 59, ex1(59, 100).unwrap()), ("ex2 p=23 m=10", 23, ex2(23, 10).unwrap())] {
        let (te, _) = engine_time(&g, p);
        let (to, finished) = oracle_time(&g, te * 20);
        let ratio = to.as_secs_f64() / te.as_secs_f64();
        let ok = ratio >= 10.0;
        pass &= ok;
        let shown = if finished { format!("{ratio:.1}x") } else { format!(">{ratio:.0}x (oracle abandoned)") };
        parts.push(format!("{name}: engine {te:.1?}, oracle {to:.1?}, {shown}"));
    }
    let ns = [20usize, 50, 100, 150];
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .map(|&n| {
            let (t, _) = engine_time(&ex1(59, n).unwrap(), 59);
            ((n as f64).ln(), t.as_secs_f64().ln())
        })
        .collect();
    let k = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|q| q.0).sum::<f64>() / k, pts.iter().map(|q| q.1).sum::<f64>() / k);
    let slope = pts.iter().map(|q| (q.0 - mx) * (q.1 - my)).sum::<f64>() / pts.iter().map(|q| (q.0 - mx).powi(2)).sum::<f64>();
    pass &= slope <= 2.5;
    parts.push(format!("ex1 p=59 fit exponent {slope:.2} (limit 2.5)"));
    outcome(pass, format!("performance (need ≥10x): {}", parts.join("; ")))
}

fn criterion_7() -> Outcome {
    let cfg = Config::default();
    let sq = PIntPoly::from_i64s(&[1, -2, 1]);
    let mut bad = vec![];
    for p in PRIMES {
        match p_discriminant_report(&sq, p, &cfg, true) {
            Ok(r) if r.result.v_disc.is_inf() => {}
            Ok(r) => bad.push(format!("(x-1)^2 p={p}: {}", r.result.v_disc)),
            Err(e) => bad.push(format!("(x-1)^2 p={p}: {e}")),
        }
    }
    let f = ex5(5, 5, 6).unwrap().0;
    for p in [2, 5, 7] {
        match p_resultant(&f, &f, p) {
            Ok(Val::Inf) => {}
            other => bad.push(format!("Res(f, f) p={p}: {other:?}")),
        }
    }
    if bad.is_empty() {
        outcome(true, "guards: (x-1)^2 → ∞ with the index-bound guard at 6 primes; Res(f, f) → ∞")
    } else {
        outcome(false, format!("guards: {}", bad.join("; ")))
    }
}

type Run = Box<dyn FnOnce(&mut Table) -> Outcome>;

fn main() {
    let mut tab = Table { reports: vec![] };
    let runs: Vec<(usize, Run)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(criterion_2)),
        (3, Box::new(|t: &mut Table| criterion_3(t))),
        (4, Box::new(|_: &mut Table| criterion_4())),
        (5, Box::new(|_: &mut Table| criterion_5())),
        (6, Box::new(|_: &mut Table| criterion_6())),
        (7, Box::new(|_: &mut Table| criterion_7())),
    ];
    let mut failed = 0;
    for (k, run) in runs {
        let t0 = Instant::now();
        let o = run(&mut tab);
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {k}: {} [{:.1?}]", o.detail, t0.elapsed());
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
