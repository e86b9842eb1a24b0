//! v_p(Res(f, g)) by a joint Montes run over the common types of f and g.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::config::{with_precision, Config};
use crate::diffdisc::floor_log;
use crate::error::{Error, Result};
use crate::ffield::{ff_factorize, ff_ord, TowerField};
use crate::montes::{dump_polygon, reduce_mod_p};
use crate::newton::{cut_polygon, newton_data, res_partial_polygons, residual_polynomial, Slope};
use crate::omtype::OMType;
use crate::polyz::{vp_int, PIntPoly, Val, WorkPoly};
use crate::sfl::sfl_double;

/// N(f, g) = ⌊log_p(‖f‖₂^{deg g}·‖g‖₂^{deg f})⌋ + 1; any valuation at or above it means Res = 0.
pub fn res_valuation_bound(f: &PIntPoly, g: &PIntPoly, p: u64) -> u64 {
    let (n, m) = (f.deg(), g.deg());
    // compare squares: p^{2k} ≤ ‖f‖₂^{2m}·‖g‖₂^{2n}
    let x = num_traits::pow(f.norm2_sq(), m) * num_traits::pow(g.norm2_sq(), n);
    if x.is_zero() {
        return 1;
    }
    floor_log(p, &x) / 2 + 1
}

pub fn p_resultant(f: &PIntPoly, g: &PIntPoly, p: u64) -> Result<Val> {
    p_resultant_with(f, g, p, None, &Config::default())
}

/// Same as [`p_resultant`]; `bound` overrides the default guard [`res_valuation_bound`].
pub fn p_resultant_with(f: &PIntPoly, g: &PIntPoly, p: u64, bound: Option<u64>, cfg: &Config) -> Result<Val> {
    for h in [f, g] {
        if h.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !h.is_monic() {
            return Err(Error::NotMonic);
        }
    }
    let (f, g) = if f.deg() <= g.deg() { (f, g) } else { (g, f) };
    if f.deg() == 0 {
        return Ok(Val::Fin(0));
    }
    let bound = bound.unwrap_or_else(|| res_valuation_bound(f, g, p));
    with_precision(cfg, |nu| resultant_run(f, g, p, bound, nu, cfg))
}

fn resultant_run(f: &PIntPoly, g: &PIntPoly, p: u64, bound: u64, nu: u32, cfg: &Config) -> Result<Val> {
    let wf = WorkPoly::new(f, p, Some(nu));
    let wg = WorkPoly::new(g, p, Some(nu));
    let base = TowerField::new(p);
    let (fbar, gbar) = (reduce_mod_p(&base, f), reduce_mod_p(&base, g));
    let mut stack: Vec<OMType> = Vec::new();
    for (phi, a) in ff_factorize(&base, &fbar)? {
        let b = ff_ord(&base, &gbar, &phi)?;
        if b == 0 {
            continue;
        }
        let mut t = OMType::order_zero(p, &phi)?;
        t.top.omega = a;
        t.top.alpha = b;
        stack.push(t);
    }

    let mut total: u64 = 0;
    while let Some(t) = stack.pop() {
        let (omega, alpha, cs) = (t.top.omega, t.top.alpha, t.top.cs);
        let df = newton_data(&t, omega, &wf)?;
        let dg = newton_data(&t, alpha, &wg)?;
        let (nf, ng) = (cut_polygon(&df.polygon, cs), cut_polygon(&dg.polygon, cs));
        dump_polygon(cfg, &t, "f", &nf);
        dump_polygon(cfg, &t, "g", &ng);
        if nf.length() != omega || ng.length() != alpha {
            return Err(Error::InvariantViolation(format!(
                "cut polygon lengths ({}, {}) differ from the expected ({omega}, {alpha})",
                nf.length(),
                ng.length()
            )));
        }
        match res_partial_polygons(t.f_product(), &nf, &ng, cs) {
            Val::Fin(k) => total += k as u64,
            _ => return Ok(Val::Inf),
        }
        if total >= bound {
            return Ok(Val::Inf);
        }
        let g_slopes: Vec<Slope> = ng.finite_sides().map(|s| s.slope).collect();
        for side in nf.finite_sides() {
            let Slope::Finite { h, e } = side.slope else { continue };
            if !g_slopes.contains(&side.slope) {
                continue;
            }
            let rf = residual_polynomial(&t, &df, h, e)?;
            let rg = residual_polynomial(&t, &dg, h, e)?;
            for (psi, a) in ff_factorize(&t.tower, &rf)? {
                let b = ff_ord(&t.tower, &rg, &psi)?;
                if b == 0 {
                    continue;
                }
                let t2 = if omega > 1 {
                    let mut t2 = t.extend(h, e, &psi)?;
                    t2.top.omega = a;
                    t2.top.alpha = b;
                    if t2.is_refinement() {
                        t2.refine()
                    } else {
                        t2
                    }
                } else {
                    // f-complete: one lifting step at the same degree
                    let (mut t2, _) = sfl_double(&t, &wf, h)?;
                    t2.top.omega = 1;
                    t2.top.alpha = b;
                    t2.top.cs = h;
                    t2
                };
                stack.push(t2);
            }
        }
    }
    Ok(Val::Fin(total as i64))
}

/// Monic normalization of a pair with arbitrary nonzero leading coefficients a, c.
/// With d = a·c, F̃(y) = dⁿ F(y/d)/a and G̃(y) = dᵐ G(y/d)/c are monic integral and
/// v_p(Res(F, G)) = v_p(Res(F̃, G̃)) + offset.
pub fn normalize_nonmonic_res(f: &PIntPoly, g: &PIntPoly, p: u64) -> Result<(PIntPoly, PIntPoly, i64)> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let (a, c) = (f.lead(), g.lead());
    let d = &a * &c;
    // h_k/lc is integral only after multiplying by d^{n−k}
    let scale = |h: &PIntPoly, lc: &BigInt| -> PIntPoly {
        if lc.is_one() {
            return h.clone();
        }
        let n = h.deg();
        let mut out = Vec::with_capacity(n + 1);
        for (k, hk) in h.coeffs().iter().enumerate().take(n) {
            out.push(hk * num_traits::pow(d.clone(), n - k) / lc);
        }
        out.push(BigInt::one());
        PIntPoly::new(out)
    };
    let (n, m) = (f.deg() as i64, g.deg() as i64);
    let v = |x: &BigInt| vp_int(p, x).fin().unwrap();
    let offset = m * v(&a) + n * v(&c) - n * m * v(&d);
    Ok((scale(f, &a), scale(g, &c), offset))
}
