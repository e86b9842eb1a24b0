//! Local differents, local discriminants and v_p(Disc g).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::ffield::TowerField;
use crate::montes::{montes_factorize_with, reduce_mod_p, OMFactorization, OMRep};
use crate::omtype::ratstr;
use crate::polyz::{vp_int, PIntPoly, Val};
use crate::sfl::sfl_to_target;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentResult {
    pub e: u64,
    pub f: u64,
    #[serde(with = "ratstr")]
    pub mu: BigRational,
    pub rho: i64,
    pub diff_exponent: i64,
    pub local_disc_valuation: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscResult {
    pub sum_local_disc: i64,
    pub ind: Val,
    pub v_disc: Val,
}

impl DiscResult {
    fn infinite() -> Self {
        DiscResult { sum_local_disc: 0, ind: Val::Inf, v_disc: Val::Inf }
    }
}

/// Full output of a discriminant run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscReport {
    pub result: DiscResult,
    pub factorization: Option<OMFactorization>,
    pub differents: Vec<DifferentResult>,
}

pub fn different_valuation(f: &PIntPoly, rep: &OMRep) -> Result<DifferentResult> {
    different_valuation_with(f, rep, &Config::default())
}

pub fn different_valuation_with(f: &PIntPoly, rep: &OMRep, cfg: &Config) -> Result<DifferentResult> {
    let inv = &rep.invariants;
    let (e, fdeg) = (inv.e, inv.f);
    let p = rep.omtype.p;
    let vpe = vp_int(p, &BigInt::from(e)).fin().unwrap();
    let rho = if vpe == 0 {
        0
    } else {
        let bound = e as i64 * vpe;
        let lifted = sfl_to_target(rep, f, bound, cfg)?;
        let d = lifted.phi().derivative();
        let v = lifted
            .omtype
            .value_multiadic(&d)?
            .ok_or_else(|| Error::InvariantViolation("derivative of φ vanishes".into()))?;
        let emu = &inv.mu * BigInt::from(e);
        if !emu.is_integer() {
            return Err(Error::InvariantViolation(format!("e·mu = {emu} is not integral")));
        }
        let rho = v - emu.to_integer().to_i64().unwrap();
        if rho < 0 || rho > bound {
            return Err(Error::InvariantViolation(format!("rho = {rho} outside [0, {bound}]")));
        }
        rho
    };
    let diff = e as i64 - 1 + rho;
    Ok(DifferentResult {
        e,
        f: fdeg,
        mu: inv.mu.clone(),
        rho,
        diff_exponent: diff,
        local_disc_valuation: fdeg as i64 * diff,
    })
}

/// N(g) = ⌈log_p(nⁿ·‖g‖₁^{2n−2})⌉ + 1.
pub fn disc_valuation_bound(g: &PIntPoly, p: u64) -> u64 {
    let n = g.deg();
    let norm = g.norm1();
    let (a, b) = (n as f64, 2.0 * n.saturating_sub(1) as f64);
    let l = (a * log2_big(&BigInt::from(n)) + b * log2_big(&norm)) / (p as f64).log2();
    // the float estimate decides unless it lands too close to an integer
    let margin = 1e-6 + 1e-12 * l.abs();
    if l > 1.0 && (l - l.round()).abs() > margin {
        return l.ceil() as u64 + 1;
    }
    let x = num_traits::pow(BigInt::from(n), n) * num_traits::pow(norm, 2 * n.saturating_sub(1));
    ceil_log(p, &x) + 1
}

/// log₂|x| from the exponent and the top 64 bits.
pub(crate) fn log2_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.magnitude().to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    let top = (x.magnitude() >> shift).to_u64().unwrap();
    shift as f64 + (top as f64).log2()
}

/// Largest k with p^k ≤ x, for x ≥ 1.
pub(crate) fn floor_log(p: u64, x: &BigInt) -> u64 {
    let pb = BigInt::from(p);
    // start just below the estimate from bit lengths, then walk up
    let est = ((x.bits() as f64 - 1.0) / (p as f64).log2()).floor() as u64;
    let mut k = est.saturating_sub(2);
    let mut pk = num_traits::pow(pb.clone(), k as usize);
    while &pk > x && k > 0 {
        pk /= &pb;
        k -= 1;
    }
    loop {
        let next = &pk * &pb;
        if &next > x {
            return k;
        }
        pk = next;
        k += 1;
    }
}

/// Least k with p^k ≥ x (0 for x ≤ 1).
pub(crate) fn ceil_log(p: u64, x: &BigInt) -> u64 {
    if x <= &BigInt::one() {
        return 0;
    }
    let k = floor_log(p, x);
    if num_traits::pow(BigInt::from(p), k as usize) == *x {
        k
    } else {
        k + 1
    }
}

const CHECK_PRIMES: [u64; 5] = [2_147_483_647, 1_000_000_007, 998_244_353, 1_000_000_009, 754_974_721];

/// True when g has no repeated factor over ℚ.
pub fn is_squarefree(g: &PIntPoly) -> bool {
    if g.deg() <= 1 {
        return true;
    }
    let d = g.derivative();
    for q in CHECK_PRIMES {
        if (g.lead() % q).is_zero() {
            continue;
        }
        let t = TowerField::new(q);
        let (a, b) = (reduce_mod_p(&t, g), reduce_mod_p(&t, &d));
        if b.is_zero() {
            continue;
        }
        if t.gcd(&a, &b).deg() == 0 {
            return true;
        }
    }
    exact_gcd_degree(g, &d) == 0
}

fn primitive(a: &PIntPoly) -> PIntPoly {
    let c = a.content();
    if c.is_zero() {
        a.clone()
    } else {
        a.div_exact(&c).unwrap()
    }
}

/// Degree of gcd(a, b) over ℚ by the primitive remainder sequence.
fn exact_gcd_degree(a: &PIntPoly, b: &PIntPoly) -> usize {
    let (mut a, mut b) = (primitive(a), primitive(b));
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        if b.deg() == 0 {
            return 0;
        }
        let lb = b.lead();
        let mut r = a.clone();
        while !r.is_zero() && r.deg() >= b.deg() {
            let shift = r.deg() - b.deg();
            let lr = r.lead();
            let t = PIntPoly::monomial(lr, shift);
            r = &r.scale(&lb) - &(&t * &b);
        }
        a = b;
        b = primitive(&r);
    }
    a.deg()
}

/// v_p(Disc g) for monic g with default settings.
pub fn p_discriminant(g: &PIntPoly, p: u64) -> Result<DiscResult> {
    Ok(p_discriminant_report(g, p, &Config::default(), false)?.result)
}

/// Discriminant run keeping the factorization and the local differents.
/// With `paper_guard` the squarefree pre-check is skipped and only the
/// index bound stops inseparable input.
pub fn p_discriminant_report(g: &PIntPoly, p: u64, cfg: &Config, paper_guard: bool) -> Result<DiscReport> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !g.is_monic() {
        return Err(Error::NotMonic);
    }
    let none = || DiscReport { result: DiscResult::infinite(), factorization: None, differents: vec![] };
    if !paper_guard && !is_squarefree(g) {
        return Ok(none());
    }
    if g.deg() == 0 {
        return Ok(DiscReport {
            result: DiscResult { sum_local_disc: 0, ind: Val::Fin(0), v_disc: Val::Fin(0) },
            factorization: None,
            differents: vec![],
        });
    }
    let bound = disc_valuation_bound(g, p);
    let fac = montes_factorize_with(g, p, Some(bound), cfg)?;
    let Val::Fin(ind) = fac.ind else {
        return Ok(DiscReport { factorization: Some(fac), ..none() });
    };
    let mut differents = Vec::with_capacity(fac.reps.len());
    let mut sum = 0;
    for rep in &fac.reps {
        let d = different_valuation_with(g, rep, cfg)?;
        sum += d.local_disc_valuation;
        differents.push(d);
    }
    let total = sum + 2 * ind;
    let result = if paper_guard && total as u64 >= bound {
        DiscResult { sum_local_disc: sum, ind: Val::Fin(ind), v_disc: Val::Inf }
    } else {
        DiscResult { sum_local_disc: sum, ind: Val::Fin(ind), v_disc: Val::Fin(total) }
    };
    Ok(DiscReport { result, factorization: Some(fac), differents })
}

/// ĝ = a^{n−1} g(x/a) and the offset with v_p(Disc g) = v_p(Disc ĝ) − offset.
pub fn normalize_nonmonic_disc(g: &PIntPoly, p: u64) -> Result<(PIntPoly, i64)> {
    let a = g.lead();
    if g.is_zero() || a.is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let n = g.deg();
    if n == 0 {
        return Err(Error::ParamOutOfRange("degree must be at least 1".into()));
    }
    if a.is_one() {
        return Ok((g.clone(), 0));
    }
    let mut c = Vec::with_capacity(n + 1);
    for (k, gk) in g.coeffs().iter().enumerate().take(n) {
        c.push(gk * num_traits::pow(a.clone(), n - 1 - k));
    }
    c.push(BigInt::one());
    let va = vp_int(p, &a).fin().unwrap();
    let offset = ((n - 1) * n.saturating_sub(2)) as i64 * va;
    // a sign flip a → −a is absorbed: a^{n−1} g(x/a) is monic for either sign
    Ok((PIntPoly::new(c), offset))
}

/// Clears denominators of a rational polynomial: returns D·g and (2n−2)·v_p(D).
pub fn clear_denominators(coeffs: &[BigRational], p: u64) -> Result<(PIntPoly, i64)> {
    let d = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &d).to_integer()).collect();
    let g = PIntPoly::new(ints);
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = g.deg() as i64;
    let vd = vp_int(p, &d.abs()).fin().unwrap();
    Ok((g, (2 * n - 2).max(0) * vd))
}
