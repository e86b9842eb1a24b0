//! The Montes algorithm: OM representations of the p-adic factors of a monic
//! polynomial together with its p-index.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::config::{with_precision, Config};
use crate::error::{Error, Result};
use crate::ffield::{ff_factorize, FFPoly, TowerField};
use crate::newton::{cut_polygon, newton_data, polygon_index, residual_polynomial, Slope};
use crate::omtype::{OMType, OkutsuInvariants};
use crate::polyz::{cmp_poly, PIntPoly, Val, WorkPoly};
use crate::sfl::measure;

/// A complete optimal type singling out one p-adic factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OMRep {
    pub omtype: OMType,
    /// Quality of the top representative as an approximation of the factor.
    pub h_phi: Val,
    pub invariants: OkutsuInvariants,
    /// Degree e·f of the factor.
    pub degree: u64,
}

impl OMRep {
    pub fn new(omtype: OMType, h_phi: Val) -> Result<OMRep> {
        let invariants = omtype.okutsu_invariants()?;
        let degree = invariants.e * invariants.f;
        Ok(OMRep { omtype, h_phi, invariants, degree })
    }

    /// The Okutsu approximation φ_{r+1}.
    pub fn phi(&self) -> &PIntPoly {
        &self.omtype.top.phi
    }

    pub fn depth(&self) -> usize {
        self.omtype.order()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OMFactorization {
    pub p: u64,
    pub f: PIntPoly,
    pub reps: Vec<OMRep>,
    /// ind_p(f); infinite when the index bound tripped.
    pub ind: Val,
}

/// Reduction of an integer polynomial modulo p over F_p.
pub fn reduce_mod_p(tower: &TowerField, g: &PIntPoly) -> FFPoly {
    let p = num_bigint::BigInt::from(tower.p());
    let c: Vec<u64> = g
        .coeffs()
        .iter()
        .map(|a| num_integer::Integer::mod_floor(a, &p).try_into().unwrap())
        .collect();
    tower.poly_from_ints(0, &c)
}

fn rep_order(a: &OMRep, b: &OMRep) -> Ordering {
    (a.invariants.e, a.invariants.f, a.depth())
        .cmp(&(b.invariants.e, b.invariants.f, b.depth()))
        .then_with(|| {
            let (ca, cb) = (a.omtype.phi_chain(), b.omtype.phi_chain());
            for (x, y) in ca.iter().zip(&cb) {
                let o = cmp_poly(x, y);
                if o != Ordering::Equal {
                    return o;
                }
            }
            ca.len().cmp(&cb.len())
        })
}

pub(crate) fn dump_polygon(cfg: &Config, t: &OMType, what: &str, poly: &crate::newton::Polygon) {
    if cfg.debug_polygons {
        eprintln!("[{what}] order {} deg phi {} cs {}: {}", t.order(), t.top.m, t.top.cs, poly);
    }
}

/// OM factorization with default settings.
pub fn montes_factorize(f: &PIntPoly, p: u64, index_bound: Option<u64>) -> Result<OMFactorization> {
    montes_factorize_with(f, p, index_bound, &Config::default())
}

pub fn montes_factorize_with(f: &PIntPoly, p: u64, index_bound: Option<u64>, cfg: &Config) -> Result<OMFactorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if f.deg() == 0 {
        return Err(Error::ParamOutOfRange("degree must be at least 1".into()));
    }
    with_precision(cfg, |nu| montes_run(f, p, index_bound, nu, cfg))
}

fn montes_run(f: &PIntPoly, p: u64, bound: Option<u64>, nu: u32, cfg: &Config) -> Result<OMFactorization> {
    let work = WorkPoly::new(f, p, Some(nu));
    let base = TowerField::new(p);
    let fbar = reduce_mod_p(&base, f);
    let mut stack: Vec<OMType> = Vec::new();
    let mut reps: Vec<OMRep> = Vec::new();
    let mut ind: u64 = 0;
    let infinite = |f: &PIntPoly| OMFactorization { p, f: f.clone(), reps: vec![], ind: Val::Inf };

    let emit = |t: OMType, reps: &mut Vec<OMRep>| -> Result<()> {
        let h = measure(&t, &work)?;
        reps.push(OMRep::new(t, h)?);
        Ok(())
    };

    for (psi, mult) in ff_factorize(&base, &fbar)? {
        let mut t = OMType::order_zero(p, &psi)?;
        t.top.omega = mult;
        if mult == 1 {
            emit(t, &mut reps)?;
        } else {
            stack.push(t);
        }
    }

    while let Some(t) = stack.pop() {
        let omega = t.top.omega;
        let cs = t.top.cs;
        let data = newton_data(&t, omega, &work)?;
        let cut = cut_polygon(&data.polygon, cs);
        dump_polygon(cfg, &t, "f", &cut);
        if cut.length() != omega {
            return Err(Error::InvariantViolation(format!(
                "cut polygon length {} differs from the expected {omega}",
                cut.length()
            )));
        }
        match polygon_index(&cut, cs) {
            Val::Fin(k) => ind += t.f_product() * k as u64,
            _ => return Ok(infinite(f)),
        }
        if bound.is_some_and(|b| ind >= b) {
            return Ok(infinite(f));
        }
        if cut.has_neg_inf() {
            // φ divides f exactly; the side has length one here
            let mut t = t.clone();
            t.top.omega = 1;
            reps.push(OMRep::new(t, Val::Inf)?);
        }
        for side in cut.finite_sides() {
            let Slope::Finite { h, e } = side.slope else { continue };
            let r = residual_polynomial(&t, &data, h, e)?;
            for (psi, mult) in ff_factorize(&t.tower, &r)? {
                let mut t2 = t.extend(h, e, &psi)?;
                t2.top.omega = mult;
                if t2.is_refinement() {
                    t2 = t2.refine();
                }
                if mult == 1 {
                    emit(t2, &mut reps)?;
                } else {
                    stack.push(t2);
                }
            }
        }
    }
    reps.sort_by(rep_order);
    Ok(OMFactorization { p, f: f.clone(), reps, ind: Val::Fin(ind as i64) })
}
