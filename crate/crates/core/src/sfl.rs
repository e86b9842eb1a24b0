//! Single-factor lifting: φ ↦ Φ = φ + a_0·a_1^{-1} mod φ, doubling h_φ.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::config::{with_precision, Config};
use crate::error::{Error, Result};
use crate::montes::OMRep;
use crate::omtype::OMType;
use crate::polyz::{pow_p, PIntPoly, Precision, Val, WorkPoly};

/// h_φ of the top representative of a complete type: the slope of the
/// length-one polygon of f. `Inf` for an exact factor, `AtLeast` when hidden
/// by the working precision.
pub fn measure(t: &OMType, f: &WorkPoly) -> Result<Val> {
    let r1 = t.order() + 1;
    let phi = &t.top.phi;
    let exp = f.expand(phi, Some(1))?;
    let (a0, a1) = (exp.get(0), exp.get(1));
    let w1 = match t.value(r1, &a1) {
        Val::Fin(w) => w,
        _ => return Err(Error::InsufficientPrecision),
    };
    let mut w0 = t.value(r1, &a0);
    if a0.is_zero() && !a0.is_exact() && f.expand_exact(phi, Some(0))?.get(0).is_zero() {
        w0 = Val::Inf;
    }
    let h = w0.add_int(-w1 - t.top.v);
    match h {
        Val::Fin(x) if x <= 0 => Err(Error::InvariantViolation(format!(
            "non-positive h = {x} for a complete type"
        ))),
        v => Ok(v),
    }
}

/// h_φ of a complete representative against an exact f.
pub fn measure_h(rep: &OMRep, f: &PIntPoly) -> Result<i64> {
    match measure(&rep.omtype, &WorkPoly::new(f, rep.omtype.p, None))? {
        Val::Fin(h) => Ok(h),
        Val::Inf => Err(Error::ExactFactor),
        Val::AtLeast(_) => Err(Error::InsufficientPrecision),
    }
}

fn mulmod(a: &PIntPoly, b: &PIntPoly, phi: &PIntPoly, md: &BigInt, m: u32) -> Result<PIntPoly> {
    Ok((a * b).rem_monic(phi)?.reduce_mod(md, m))
}

fn bit_len(x: i64) -> i64 {
    64 - (x.max(1) as u64).leading_zeros() as i64
}

/// One lifting step at quality `h`; returns the improved type and its measured quality.
pub(crate) fn sfl_step(t: &OMType, f: &WorkPoly, h: i64) -> Result<(OMType, Val)> {
    let p = t.p;
    let r1 = t.order() + 1;
    let e = t.e_upto(t.order());
    let vv = t.top.v;
    let phi = &t.top.phi;
    let exp = f.expand(phi, Some(1))?;
    let (a0, a1) = (exp.get(0), exp.get(1));
    let w1 = match t.value(r1, &a1) {
        Val::Fin(w) => w,
        _ => return Err(Error::InsufficientPrecision),
    };
    // a_1^{-1} = B / p^k with v_{r+1}(B) = e k − w_1 ≥ V_{r+1}
    let k = Integer::div_ceil(&(vv + w1), &e).max(0);
    let tv = e * k - w1;
    let m = Integer::div_floor(&(2 * h + vv), &e) + 1;
    let iters = bit_len(2 * h + 2) + 2;
    let mut big_m = m + k * (iters + 2) + 2;
    if let Some(nu) = f.nu() {
        big_m = big_m.min(nu as i64);
    }
    if big_m <= k {
        return Err(Error::InsufficientPrecision);
    }
    let big_m = big_m as u32;
    let md = pow_p(p, big_m as u64);
    let pk = pow_p(p, k as u64);
    let pk_poly = PIntPoly::constant(pk.clone());

    let tw = &t.tower;
    let num = t.residue(r1, &pk_poly);
    let den = t.residue(r1, &a1);
    let c0 = tw.mul(&num, &tw.inv(&den).expect("nonzero residue"));
    let mut b = t.lift(r1, &c0, tv).reduce_mod(&md, big_m);
    let mut converged = false;
    for _ in 0..iters + 4 {
        let u = mulmod(&a1, &b, phi, &md, big_m)?;
        let err = (&pk_poly - &u).reduce_mod(&md, big_m);
        let rel = t.value(r1, &err).add_int(-e * k);
        match rel {
            Val::Inf => {
                converged = true;
                break;
            }
            Val::Fin(x) | Val::AtLeast(x) if x >= 2 * h => {
                converged = true;
                break;
            }
            Val::AtLeast(_) => return Err(Error::InsufficientPrecision),
            Val::Fin(x) if x <= 0 => {
                return Err(Error::InvariantViolation("inverse seed has no accuracy".into()));
            }
            Val::Fin(_) => {}
        }
        let d = mulmod(&b, &err, phi, &md, big_m)?;
        let d = d.div_exact(&pk).ok_or(Error::InsufficientPrecision)?;
        b = (&b + &d).reduce_mod(&md, big_m);
    }
    if !converged {
        return Err(Error::InsufficientPrecision);
    }
    let cfull = mulmod(&a0, &b, phi, &md, big_m)?;
    let c = cfull.div_exact(&pk).ok_or(Error::InsufficientPrecision)?;
    let new_phi = (phi + &c).reduce_mod_power(p, m as u32).with_precision(Precision::Exact);
    let mut t2 = t.clone();
    t2.top.phi = new_phi;
    let hn = measure(&t2, f)?;
    match hn {
        Val::Fin(x) | Val::AtLeast(x) if x <= h => Err(Error::InsufficientPrecision),
        v => Ok((t2, v)),
    }
}

/// Repeats [`sfl_step`] until h_φ at least doubles. A single step falls short of
/// doubling when other roots of f sit close to the lifted factor.
pub(crate) fn sfl_double(t: &OMType, f: &WorkPoly, h: i64) -> Result<(OMType, Val)> {
    let (mut t, mut cur) = (t.clone(), h);
    loop {
        let (t2, hn) = sfl_step(&t, f, cur)?;
        match hn {
            Val::Fin(x) | Val::AtLeast(x) if x < 2 * h => {
                t = t2;
                cur = x;
            }
            v => return Ok((t2, v)),
        }
    }
}

fn current_h(rep: &OMRep) -> Result<i64> {
    match rep.h_phi {
        Val::Fin(h) => Ok(h),
        Val::Inf => Err(Error::ExactFactor),
        Val::AtLeast(_) => Err(Error::InsufficientPrecision),
    }
}

/// One lifting iteration on a complete representative.
pub fn sfl_iteration(rep: &OMRep, f: &PIntPoly, cfg: &Config) -> Result<OMRep> {
    let h = current_h(&refresh(rep, f, cfg)?)?;
    with_precision(cfg, |nu| {
        let w = WorkPoly::new(f, rep.omtype.p, Some(nu));
        let (t2, hn) = sfl_double(&rep.omtype, &w, h)?;
        Ok(OMRep { omtype: t2, h_phi: hn, ..rep.clone() })
    })
}

/// Re-measures h_φ exactly when the stored value is only a lower bound.
fn refresh(rep: &OMRep, f: &PIntPoly, cfg: &Config) -> Result<OMRep> {
    if !matches!(rep.h_phi, Val::AtLeast(_)) {
        return Ok(rep.clone());
    }
    let h = with_precision(cfg, |nu| match measure(&rep.omtype, &WorkPoly::new(f, rep.omtype.p, Some(nu)))? {
        Val::AtLeast(_) => Err(Error::InsufficientPrecision),
        v => Ok(v),
    })?;
    Ok(OMRep { h_phi: h, ..rep.clone() })
}

/// Lifts until h_φ ≥ target; exact factors are returned unchanged.
pub fn sfl_to_target(rep: &OMRep, f: &PIntPoly, target_h: i64, cfg: &Config) -> Result<OMRep> {
    if let Val::AtLeast(x) = rep.h_phi {
        if x >= target_h {
            return Ok(rep.clone());
        }
    }
    let mut cur = refresh(rep, f, cfg)?;
    loop {
        match cur.h_phi {
            Val::Inf => return Ok(cur),
            Val::Fin(h) | Val::AtLeast(h) if h >= target_h => return Ok(cur),
            _ => {}
        }
        cur = sfl_iteration(&cur, f, cfg)?;
    }
}
