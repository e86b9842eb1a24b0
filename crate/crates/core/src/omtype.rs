//! OM types: levels, MacLane valuations, residues, lifts and representatives.
//!
//! Residual convention. With ℓ_i = h_i^{-1} mod e_i, the residue of a nonzero
//! `a` with deg a < m_{i+1} at level i+1 is
//! `z_i^{(s_0 - uℓ_i)/e_i} · Σ_j residue_i(a_{s_0 + j e_i}) z_i^j`
//! where `a = Σ a_s φ_i^s`, `u = v_{i+1}(a)` and `s_0` is the least abscissa
//! on the supporting line. Residual polynomials use the same coefficient
//! images without the twist.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{FFPoly, TowerElem, TowerField};
use crate::polyz::{multiadic_expansion, phi_expansion, pow_p, PIntPoly, Precision, Val};

/// A sealed level of a type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub phi: PIntPoly,
    pub m: usize,
    /// V_i = v_i(φ_i)
    pub v: i64,
    pub h: i64,
    pub e: i64,
    /// h^{-1} mod e
    pub ell: i64,
    /// ψ_i over F_i
    pub psi: FFPoly,
    pub f: usize,
    pub omega: usize,
    pub alpha: usize,
    pub cs: i64,
}

impl Level {
    /// e_i V_i + h_i, the weight of φ_i under v_{i+1}.
    pub fn weight(&self) -> i64 {
        self.e * self.v + self.h
    }
}

/// The live top of a type: its representative and the algorithm state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Top {
    pub phi: PIntPoly,
    pub m: usize,
    pub v: i64,
    pub omega: usize,
    pub alpha: usize,
    pub cs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OMType {
    pub p: u64,
    pub psi0: FFPoly,
    pub tower: TowerField,
    pub levels: Vec<Level>,
    pub top: Top,
}

pub(crate) mod ratstr {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;
        pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|r| r.to_string()))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OkutsuInvariants {
    pub depth: usize,
    pub e: u64,
    pub f: u64,
    #[serde(with = "ratstr")]
    pub mu: BigRational,
    #[serde(with = "ratstr::vec")]
    pub nus: Vec<BigRational>,
    #[serde(with = "ratstr")]
    pub ind: BigRational,
    pub exp: i64,
    #[serde(with = "ratstr")]
    pub conductor: BigRational,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn inv_mod(h: i64, e: i64) -> i64 {
    if e == 1 {
        return 0;
    }
    let g = h.extended_gcd(&e);
    debug_assert_eq!(g.gcd, 1);
    g.x.mod_floor(&e)
}

impl OMType {
    /// Order-0 type attached to a monic irreducible factor ψ_0 of f mod p.
    pub fn order_zero(p: u64, psi0: &FFPoly) -> Result<OMType> {
        let tower = TowerField::new(p).extend(psi0)?;
        let coeffs = psi0.coeffs.iter().map(|c| BigInt::from(c.c[0])).collect();
        let phi = PIntPoly::new(coeffs);
        Ok(OMType {
            p,
            psi0: psi0.clone(),
            tower,
            levels: vec![],
            top: Top { m: phi.deg(), phi, v: 0, omega: 0, alpha: 0, cs: 0 },
        })
    }

    pub fn order(&self) -> usize {
        self.levels.len()
    }

    pub fn f0(&self) -> usize {
        self.psi0.deg()
    }

    /// f_0 f_1 ⋯ f_order.
    pub fn f_product(&self) -> u64 {
        self.levels.iter().fold(self.f0() as u64, |a, l| a * l.f as u64)
    }

    /// e_1 ⋯ e_k.
    pub fn e_upto(&self, k: usize) -> i64 {
        self.levels[..k].iter().map(|l| l.e).product()
    }

    /// φ_i for 1 ≤ i ≤ order+1.
    pub fn phi(&self, i: usize) -> &PIntPoly {
        if i == self.order() + 1 {
            &self.top.phi
        } else {
            &self.levels[i - 1].phi
        }
    }

    pub fn phi_chain(&self) -> Vec<PIntPoly> {
        (1..=self.order() + 1).map(|i| self.phi(i).clone()).collect()
    }

    /// v_i(g) for 1 ≤ i ≤ order+1, computed on the given representative.
    pub fn value_raw(&self, i: usize, g: &PIntPoly) -> Option<i64> {
        if g.is_zero() {
            return None;
        }
        if i == 1 {
            return g.content_val(self.p).fin();
        }
        let lv = &self.levels[i - 2];
        if g.deg() < lv.m {
            return self.value_raw(i - 1, g).map(|v| lv.e * v);
        }
        let exp = phi_expansion(g, &lv.phi, None).expect("level polynomials are monic");
        let w = lv.weight();
        exp.coeffs
            .iter()
            .enumerate()
            .filter_map(|(s, a)| self.value_raw(i - 1, a).map(|v| lv.e * v + s as i64 * w))
            .min()
    }

    /// v_{r+1}(g) for deg g < m_{r+1}, read off the (φ_1,…,φ_r)-multiadic expansion:
    /// each term c·Π φ_i^{j_i} contributes E_r·v_1(c) + Σ j_i·v_{r+1}(φ_i).
    pub fn value_multiadic(&self, g: &PIntPoly) -> Result<Option<i64>> {
        let r = self.order();
        let chain: Vec<PIntPoly> = self.levels.iter().map(|l| l.phi.clone()).collect();
        let terms = multiadic_expansion(g, &chain)?;
        let er = self.e_upto(r);
        // v_{r+1}(φ_i) = (e_i V_i + h_i)·e_{i+1}⋯e_r
        let phi_vals: Vec<i64> = (0..r)
            .map(|i| self.levels[i].weight() * self.levels[i + 1..].iter().map(|l| l.e).product::<i64>())
            .collect();
        Ok(terms
            .iter()
            .filter_map(|(j, c)| {
                let base = c.content_val(self.p).fin()? * er;
                Some(base + j.iter().zip(&phi_vals).map(|(&k, &w)| k as i64 * w).sum::<i64>())
            })
            .min())
    }

    /// v_i(g) honouring the precision tag of g.
    pub fn value(&self, i: usize, g: &PIntPoly) -> Val {
        let raw = self.value_raw(i, g);
        match g.precision() {
            Precision::Exact => raw.map_or(Val::Inf, Val::Fin),
            Precision::ModPPower(nu) => {
                let cap = nu as i64 * self.e_upto(i - 1);
                match raw {
                    Some(v) if v < cap => Val::Fin(v),
                    _ => Val::AtLeast(cap),
                }
            }
        }
    }

    /// v_i(g) for an exact polynomial; errors on imprecise input whose value is hidden.
    pub fn maclane_value(&self, i: usize, g: &PIntPoly) -> Result<Val> {
        if i == 0 || i > self.order() + 1 {
            return Err(Error::InvariantViolation(format!("level {i} out of range")));
        }
        match self.value(i, g) {
            Val::AtLeast(_) => Err(Error::InsufficientPrecision),
            v => Ok(v),
        }
    }

    /// v(g(θ)) = v_{r+1}(g)/(e_1⋯e_r) for deg g < m_{r+1}.
    pub fn theta_valuation(&self, g: &PIntPoly) -> Result<Option<BigRational>> {
        let r = self.order();
        if g.deg() >= self.top.m && !g.is_zero() {
            return Err(Error::InvariantViolation("degree exceeds the top level".into()));
        }
        Ok(self.maclane_value(r + 1, g)?.fin().map(|v| rat(v, self.e_upto(r))))
    }

    /// Residue of a nonzero `a` with deg a < m_i, an element of F_i.
    pub fn residue(&self, i: usize, a: &PIntPoly) -> TowerElem {
        self.residue_with_value(i, a, None)
    }

    /// [`Self::residue`] when v_i(a) is already known.
    pub fn residue_with_value(&self, i: usize, a: &PIntPoly, known: Option<i64>) -> TowerElem {
        debug_assert!(!a.is_zero());
        let t = &self.tower;
        if i == 1 {
            let v = known.unwrap_or_else(|| a.content_val(self.p).fin().unwrap());
            let pv = pow_p(self.p, v as u64);
            let pb = BigInt::from(self.p);
            let red: Vec<u64> = a
                .coeffs()
                .iter()
                .map(|c| {
                    let q = c / &pv;
                    let r = q.mod_floor(&pb);
                    r.try_into().unwrap()
                })
                .collect();
            return t.poly_to_elem(0, &t.poly_from_ints(0, &red));
        }
        let lv = &self.levels[i - 2];
        let k = i - 1;
        let exp = phi_expansion(a, &lv.phi, None).expect("monic");
        let w = lv.weight();
        let vals: Vec<Option<i64>> = exp
            .coeffs
            .iter()
            .enumerate()
            .map(|(s, c)| self.value_raw(k, c).map(|v| lv.e * v + s as i64 * w))
            .collect();
        let u = vals.iter().flatten().copied().min().unwrap();
        let s0 = vals.iter().position(|&x| x == Some(u)).unwrap();
        let mut coeffs = Vec::new();
        let mut s = s0;
        while s < exp.coeffs.len() {
            if vals[s] == Some(u) {
                coeffs.push(self.residue(k, &exp.coeffs[s]));
            } else {
                coeffs.push(t.zero(k));
            }
            s += lv.e as usize;
        }
        let body = t.poly_to_elem(k, &FFPoly::new(k, coeffs));
        let tw = Integer::div_floor(&(s0 as i64 - u * lv.ell), &lv.e);
        let z = t.gen(k);
        t.mul(&body, &t.pow_i64(&z, tw).expect("z is a unit"))
    }

    /// A polynomial b of degree < m_i with v_i(b) = v and residue(i, b) = c.
    /// Requires v ≥ V_i when i ≥ 2.
    pub fn lift(&self, i: usize, c: &TowerElem, v: i64) -> PIntPoly {
        if c.is_zero() {
            return PIntPoly::zero();
        }
        let t = &self.tower;
        if i == 1 {
            let poly = t.elem_to_poly(c);
            let coeffs = poly.coeffs.iter().map(|e| BigInt::from(e.c[0])).collect();
            return PIntPoly::new(coeffs).scale(&pow_p(self.p, v as u64));
        }
        let lv = &self.levels[i - 2];
        debug_assert!(v >= self.level_value(i), "lift below V_i");
        let (e, w) = (lv.e, lv.weight());
        let s0 = (v * lv.ell).mod_floor(&e);
        let tw = (s0 - v * lv.ell) / e;
        let z = t.gen(i - 1);
        let c2 = t.mul(c, &t.pow_i64(&z, -tw).unwrap());
        let cp = t.elem_to_poly(&c2);
        let mut acc = PIntPoly::zero();
        for (j, cj) in cp.coeffs.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let s = s0 + j as i64 * e;
            let b = self.lift(i - 1, cj, (v - s * w) / e);
            acc = &acc + &(&b * &lv.phi.pow(s as u64));
        }
        acc
    }

    /// V_i for 1 ≤ i ≤ order+1.
    pub fn level_value(&self, i: usize) -> i64 {
        if i == self.order() + 1 {
            self.top.v
        } else {
            self.levels[i - 1].v
        }
    }

    /// Seals the top level with slope −h/e and residual factor ψ (over F_{order+1})
    /// and builds the next representative.
    pub fn extend(&self, h: i64, e: i64, psi: &FFPoly) -> Result<OMType> {
        let i = self.order() + 1;
        if h <= 0 || e <= 0 || h.gcd(&e) != 1 {
            return Err(Error::InvariantViolation(format!("bad slope -{h}/{e}")));
        }
        if psi.coeffs.len() == 2 && psi.coeffs[0].is_zero() {
            return Err(Error::PsiIsY);
        }
        let tower = self.tower.extend(psi)?;
        let f = psi.deg();
        let level = Level {
            phi: self.top.phi.clone(),
            m: self.top.m,
            v: self.top.v,
            h,
            e,
            ell: inv_mod(h, e),
            psi: psi.clone(),
            f,
            omega: self.top.omega,
            alpha: self.top.alpha,
            cs: self.top.cs,
        };
        let w = level.weight();
        let mut t = OMType { tower, levels: self.levels.clone(), ..self.clone() };
        t.levels.push(level);
        let phi_i = &self.top.phi;
        let ef = e as usize * f;
        let mut phi = phi_i.pow(ef as u64);
        for j in 0..f {
            let b = t.lift(i, &psi.coeffs[j], (f - j) as i64 * w);
            if !b.is_zero() {
                phi = &phi + &(&b * &phi_i.pow((j * e as usize) as u64));
            }
        }
        t.top = Top { m: ef * self.top.m, phi, v: ef as i64 * w, omega: 0, alpha: 0, cs: 0 };
        Ok(t)
    }

    /// True when the last sealed level has e = f = 1.
    pub fn is_refinement(&self) -> bool {
        self.levels.last().is_some_and(|l| l.e == 1 && l.f == 1)
    }

    /// Drops a degree-preserving last level, replacing the previous representative
    /// by the new one and setting the cutting slope to h.
    pub fn refine(&self) -> OMType {
        debug_assert!(self.is_refinement());
        let mut t = self.clone();
        let last = t.levels.pop().unwrap();
        t.tower = self.tower.truncate(t.order() + 1);
        t.top = Top {
            phi: self.top.phi.clone(),
            m: last.m,
            v: last.v,
            omega: self.top.omega,
            alpha: self.top.alpha,
            cs: last.h,
        };
        t
    }

    /// The order-k prefix, with φ_{k+1} as its representative.
    pub fn truncated(&self, k: usize) -> OMType {
        assert!(k <= self.order());
        if k == self.order() {
            return self.clone();
        }
        let l = &self.levels[k];
        OMType {
            p: self.p,
            psi0: self.psi0.clone(),
            tower: self.tower.truncate(k + 1),
            levels: self.levels[..k].to_vec(),
            top: Top { phi: l.phi.clone(), m: l.m, v: l.v, omega: l.omega, alpha: l.alpha, cs: l.cs },
        }
    }

    /// Okutsu invariants of a complete type.
    pub fn okutsu_invariants(&self) -> Result<OkutsuInvariants> {
        if self.top.omega != 1 {
            return Err(Error::IncompleteType);
        }
        let r = self.order();
        let e: i64 = self.e_upto(r);
        let f = self.f_product() as i64;
        let mut mu = BigRational::zero();
        let mut nus = Vec::with_capacity(r);
        let mut nu = BigRational::zero();
        let mut eprod = 1i64;
        for j in 0..r {
            let lv = &self.levels[j];
            eprod *= lv.e;
            let tail: i64 = self.levels[j..].iter().map(|l| l.e * l.f as i64).product();
            mu += rat((tail - 1) * lv.h, eprod);
            nu += rat(lv.h, eprod);
            nus.push(nu.clone());
        }
        let n = e * f;
        let ind = (mu.clone() - BigRational::one() + rat(1, e)) * rat(n, 2);
        let conductor = mu.clone() * BigInt::from(e) - BigRational::from_integer(BigInt::from(e - 1));
        let exp: i64 = mu.floor().to_integer().try_into().unwrap();
        Ok(OkutsuInvariants { depth: r, e: e as u64, f: f as u64, mu, nus, ind, exp, conductor })
    }
}

impl fmt::Display for OMType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(psi0 deg {}", self.f0())?;
        for l in &self.levels {
            write!(f, "; (deg {}, -{}/{}, f {})", l.m, l.h, l.e, l.f)?;
        }
        write!(f, "; top deg {})", self.top.m)
    }
}
