//! Residue-field towers F_p = F_0 ⊂ F_1 ⊂ … and polynomials over them.
//!
//! An element of level k+1 is a polynomial of degree < f_k in z_k with
//! coefficients in level k. It is stored flattened: the coefficient of z_k^j
//! occupies the j-th chunk of length |F_k : F_p|.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

static GLOBAL_SEED: AtomicU64 = AtomicU64::new(0x5_eed0_f0a1);

/// Sets the seed mixed into every factorization PRNG.
pub fn set_global_seed(seed: u64) {
    GLOBAL_SEED.store(seed, Ordering::Relaxed);
}

pub fn global_seed() -> u64 {
    GLOBAL_SEED.load(Ordering::Relaxed)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TowerElem {
    pub level: usize,
    pub c: Vec<u64>,
}

impl TowerElem {
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
}

/// Dense polynomial over one level of a tower; no trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FFPoly {
    pub level: usize,
    pub coeffs: Vec<TowerElem>,
}

impl FFPoly {
    pub fn new(level: usize, mut coeffs: Vec<TowerElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FFPoly { level, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> Option<&TowerElem> {
        self.coeffs.last()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerField {
    p: u64,
    psis: Vec<FFPoly>,
    degs: Vec<usize>,
}

#[inline]
fn addm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

#[inline]
fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        ((a as u128 + p as u128 - b as u128) % p as u128) as u64
    }
}

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl TowerField {
    pub fn new(p: u64) -> Self {
        TowerField { p, psis: vec![], degs: vec![1] }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Index of the top level.
    pub fn top(&self) -> usize {
        self.psis.len()
    }

    pub fn psi(&self, k: usize) -> &FFPoly {
        &self.psis[k]
    }

    /// Degree of level k over F_p.
    pub fn abs_degree(&self, k: usize) -> usize {
        self.degs[k]
    }

    /// Cardinality of level k.
    pub fn card(&self, k: usize) -> BigUint {
        num_traits::pow(BigUint::from(self.p), self.degs[k])
    }

    /// Drops every level above `k`.
    pub fn truncate(&self, k: usize) -> TowerField {
        TowerField { p: self.p, psis: self.psis[..k].to_vec(), degs: self.degs[..=k].to_vec() }
    }

    pub fn zero(&self, k: usize) -> TowerElem {
        TowerElem { level: k, c: vec![0; self.degs[k]] }
    }

    pub fn one(&self, k: usize) -> TowerElem {
        self.from_int(k, 1)
    }

    pub fn from_int(&self, k: usize, x: u64) -> TowerElem {
        let mut c = vec![0; self.degs[k]];
        c[0] = x % self.p;
        TowerElem { level: k, c }
    }

    /// Embeds an element into a higher level.
    pub fn embed(&self, a: &TowerElem, k: usize) -> TowerElem {
        debug_assert!(a.level <= k);
        let mut c = a.c.clone();
        c.resize(self.degs[k], 0);
        TowerElem { level: k, c }
    }

    pub fn add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        debug_assert_eq!(a.level, b.level);
        let c = a.c.iter().zip(&b.c).map(|(&x, &y)| addm(x, y, self.p)).collect();
        TowerElem { level: a.level, c }
    }

    pub fn sub(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        debug_assert_eq!(a.level, b.level);
        let c = a.c.iter().zip(&b.c).map(|(&x, &y)| subm(x, y, self.p)).collect();
        TowerElem { level: a.level, c }
    }

    pub fn neg(&self, a: &TowerElem) -> TowerElem {
        let c = a.c.iter().map(|&x| subm(0, x, self.p)).collect();
        TowerElem { level: a.level, c }
    }

    pub fn scale_int(&self, a: &TowerElem, k: u64) -> TowerElem {
        let k = k % self.p;
        let c = a.c.iter().map(|&x| mulm(x, k, self.p)).collect();
        TowerElem { level: a.level, c }
    }

    pub fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        debug_assert_eq!(a.level, b.level);
        let c = self.mul_slices(a.level, &a.c, &b.c);
        TowerElem { level: a.level, c }
    }

    fn mul_slices(&self, k: usize, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p;
        if k == 0 {
            return vec![mulm(a[0], b[0], p)];
        }
        let d = self.degs[k - 1];
        let f = self.degs[k] / d;
        if f == 1 {
            return self.mul_slices(k - 1, a, b);
        }
        let chunk = |x: &[u64], j: usize| x[j * d..(j + 1) * d].to_vec();
        let achunks: Vec<Vec<u64>> = (0..f).map(|j| chunk(a, j)).collect();
        let bchunks: Vec<Vec<u64>> = (0..f).map(|j| chunk(b, j)).collect();
        let mut prod = vec![vec![0u64; d]; 2 * f - 1];
        for (i, ai) in achunks.iter().enumerate() {
            if ai.iter().all(|&x| x == 0) {
                continue;
            }
            for (j, bj) in bchunks.iter().enumerate() {
                if bj.iter().all(|&x| x == 0) {
                    continue;
                }
                let t = self.mul_slices(k - 1, ai, bj);
                for (dst, src) in prod[i + j].iter_mut().zip(&t) {
                    *dst = addm(*dst, *src, p);
                }
            }
        }
        // reduce modulo the monic ψ_{k-1} of degree f
        let psi = &self.psis[k - 1];
        for t in (f..2 * f - 1).rev() {
            let ct = std::mem::take(&mut prod[t]);
            if ct.iter().all(|&x| x == 0) {
                continue;
            }
            for s in 0..f {
                let ps = &psi.coeffs[s].c;
                if ps.iter().all(|&x| x == 0) {
                    continue;
                }
                let m = self.mul_slices(k - 1, &ct, ps);
                for (dst, src) in prod[t - f + s].iter_mut().zip(&m) {
                    *dst = subm(*dst, *src, p);
                }
            }
        }
        prod.truncate(f);
        prod.concat()
    }

    pub fn pow(&self, a: &TowerElem, e: &BigUint) -> TowerElem {
        let mut acc = self.one(a.level);
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn inv(&self, a: &TowerElem) -> Option<TowerElem> {
        if a.is_zero() {
            return None;
        }
        let q = self.card(a.level);
        Some(self.pow(a, &(q - 2u32)))
    }

    /// a^e for a possibly negative exponent; `None` when a = 0 and e < 0.
    pub fn pow_i64(&self, a: &TowerElem, e: i64) -> Option<TowerElem> {
        if e >= 0 {
            Some(self.pow(a, &BigUint::from(e as u64)))
        } else {
            let inv = self.inv(a)?;
            Some(self.pow(&inv, &BigUint::from(e.unsigned_abs())))
        }
    }

    /// Class of a polynomial over level k in level k+1 = F_k[y]/(ψ_k).
    pub fn poly_to_elem(&self, k: usize, g: &FFPoly) -> TowerElem {
        let r = self.rem(g, &self.psis[k]);
        let f = self.psis[k].deg();
        let mut c = Vec::with_capacity(self.degs[k + 1]);
        for j in 0..f {
            match r.coeffs.get(j) {
                Some(e) => c.extend_from_slice(&e.c),
                None => c.extend(std::iter::repeat_n(0, self.degs[k])),
            }
        }
        TowerElem { level: k + 1, c }
    }

    /// Inverse of [`poly_to_elem`](Self::poly_to_elem): the reduced polynomial over level k.
    pub fn elem_to_poly(&self, a: &TowerElem) -> FFPoly {
        let k = a.level - 1;
        let d = self.degs[k];
        let coeffs = a.c.chunks(d).map(|ch| TowerElem { level: k, c: ch.to_vec() }).collect();
        FFPoly::new(k, coeffs)
    }

    /// The generator z_k, an element of level k+1.
    pub fn gen(&self, k: usize) -> TowerElem {
        self.poly_to_elem(k, &self.poly_x(k))
    }

    pub fn random_elem<R: Rng>(&self, k: usize, rng: &mut R) -> TowerElem {
        TowerElem { level: k, c: (0..self.degs[k]).map(|_| rng.gen_range(0..self.p)).collect() }
    }

    // ---- polynomials ----

    pub fn poly_x(&self, k: usize) -> FFPoly {
        FFPoly::new(k, vec![self.zero(k), self.one(k)])
    }

    pub fn poly_one(&self, k: usize) -> FFPoly {
        FFPoly::new(k, vec![self.one(k)])
    }

    pub fn poly_const(&self, a: TowerElem) -> FFPoly {
        FFPoly::new(a.level, vec![a])
    }

    /// Builds a polynomial over level k from integer coefficients (ascending).
    pub fn poly_from_ints(&self, k: usize, c: &[u64]) -> FFPoly {
        FFPoly::new(k, c.iter().map(|&x| self.from_int(k, x)).collect())
    }

    pub fn padd(&self, a: &FFPoly, b: &FFPoly) -> FFPoly {
        let k = a.level;
        let n = a.coeffs.len().max(b.coeffs.len());
        let z = self.zero(k);
        let v = (0..n)
            .map(|i| self.add(a.coeffs.get(i).unwrap_or(&z), b.coeffs.get(i).unwrap_or(&z)))
            .collect();
        FFPoly::new(k, v)
    }

    pub fn psub(&self, a: &FFPoly, b: &FFPoly) -> FFPoly {
        let k = a.level;
        let n = a.coeffs.len().max(b.coeffs.len());
        let z = self.zero(k);
        let v = (0..n)
            .map(|i| self.sub(a.coeffs.get(i).unwrap_or(&z), b.coeffs.get(i).unwrap_or(&z)))
            .collect();
        FFPoly::new(k, v)
    }

    pub fn pscale(&self, a: &FFPoly, c: &TowerElem) -> FFPoly {
        FFPoly::new(a.level, a.coeffs.iter().map(|x| self.mul(x, c)).collect())
    }

    pub fn pmul(&self, a: &FFPoly, b: &FFPoly) -> FFPoly {
        let k = a.level;
        if a.is_zero() || b.is_zero() {
            return FFPoly::new(k, vec![]);
        }
        let mut v = vec![self.zero(k); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] = self.add(&v[i + j], &self.mul(x, y));
                }
            }
        }
        FFPoly::new(k, v)
    }

    pub fn monic(&self, a: &FFPoly) -> FFPoly {
        match a.lead() {
            None => a.clone(),
            Some(l) => self.pscale(a, &self.inv(l).unwrap()),
        }
    }

    /// Division with remainder; panics on a zero divisor.
    pub fn divrem(&self, a: &FFPoly, b: &FFPoly) -> (FFPoly, FFPoly) {
        let k = a.level;
        let db = b.degree().expect("division by zero polynomial");
        if a.coeffs.len() <= db {
            return (FFPoly::new(k, vec![]), a.clone());
        }
        let linv = self.inv(b.lead().unwrap()).unwrap();
        let mut r = a.coeffs.clone();
        let mut q = vec![self.zero(k); r.len() - db];
        for i in (db..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let t = self.mul(&r[i], &linv);
            for (j, bj) in b.coeffs.iter().enumerate() {
                if !bj.is_zero() {
                    r[i - db + j] = self.sub(&r[i - db + j], &self.mul(&t, bj));
                }
            }
            q[i - db] = t;
        }
        r.truncate(db);
        (FFPoly::new(k, q), FFPoly::new(k, r))
    }

    pub fn rem(&self, a: &FFPoly, b: &FFPoly) -> FFPoly {
        self.divrem(a, b).1
    }

    /// Monic gcd.
    pub fn gcd(&self, a: &FFPoly, b: &FFPoly) -> FFPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    pub fn derivative(&self, a: &FFPoly) -> FFPoly {
        let v = a.coeffs.iter().enumerate().skip(1).map(|(i, c)| self.scale_int(c, i as u64)).collect();
        FFPoly::new(a.level, v)
    }

    pub fn powmod(&self, a: &FFPoly, e: &BigUint, m: &FFPoly) -> FFPoly {
        let mut acc = self.poly_one(a.level);
        let base = self.rem(a, m);
        for i in (0..e.bits()).rev() {
            acc = self.rem(&self.pmul(&acc, &acc), m);
            if e.bit(i) {
                acc = self.rem(&self.pmul(&acc, &base), m);
            }
        }
        acc
    }

    /// a^q mod m where q is the cardinality of the coefficient level.
    fn frobenius_mod(&self, a: &FFPoly, m: &FFPoly) -> FFPoly {
        let pe = BigUint::from(self.p);
        let mut r = self.rem(a, m);
        for _ in 0..self.degs[a.level] {
            r = self.powmod(&r, &pe, m);
        }
        r
    }

    /// Appends ψ as a new top level after checking it is monic and irreducible.
    pub fn extend(&self, psi: &FFPoly) -> Result<TowerField> {
        let k = self.top();
        if psi.level != k {
            return Err(Error::InvariantViolation(format!(
                "extension polynomial lives on level {} but the top is {k}",
                psi.level
            )));
        }
        let lead = psi.lead().ok_or(Error::ZeroPolynomial)?;
        if *lead != self.one(k) {
            return Err(Error::NotMonic);
        }
        if psi.deg() == 0 {
            return Err(Error::ReduciblePsi);
        }
        if k > 0 && psi.coeffs.len() == 2 && psi.coeffs[0].is_zero() {
            return Err(Error::PsiIsY);
        }
        let fac = ff_factorize(self, psi)?;
        if fac.len() != 1 || fac[0].1 != 1 {
            return Err(Error::ReduciblePsi);
        }
        let mut t = self.clone();
        t.degs.push(self.degs[k] * psi.deg());
        t.psis.push(psi.clone());
        Ok(t)
    }
}

fn seed_for(tower: &TowerField, g: &FFPoly) -> u64 {
    // FNV-1a over the defining data.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |x: u64| {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100_0000_01b3);
        }
    };
    eat(global_seed());
    eat(tower.p);
    eat(g.level as u64);
    for psi in &tower.psis {
        for c in &psi.coeffs {
            c.c.iter().for_each(|&x| eat(x));
        }
    }
    for c in &g.coeffs {
        c.c.iter().for_each(|&x| eat(x));
    }
    h
}

/// Multiplicity of the irreducible ψ in g.
pub fn ff_ord(tower: &TowerField, g: &FFPoly, psi: &FFPoly) -> Result<usize> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut g = g.clone();
    let mut k = 0;
    loop {
        let (q, r) = tower.divrem(&g, psi);
        if !r.is_zero() {
            return Ok(k);
        }
        g = q;
        k += 1;
    }
}

/// Complete factorization into monic irreducibles with multiplicities, sorted.
pub fn ff_factorize(tower: &TowerField, g: &FFPoly) -> Result<Vec<(FFPoly, usize)>> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(tower, g));
    let g = tower.monic(g);
    let mut out: Vec<(FFPoly, usize)> = Vec::new();
    for (sq, mult) in squarefree(tower, &g) {
        for (part, d) in distinct_degree(tower, &sq) {
            let mut pieces = Vec::new();
            equal_degree(tower, &part, d, &mut rng, &mut pieces);
            for piece in pieces {
                match out.iter_mut().find(|(f, _)| *f == piece) {
                    Some(e) => e.1 += mult,
                    None => out.push((piece, mult)),
                }
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.coeffs
            .len()
            .cmp(&b.0.coeffs.len())
            .then_with(|| a.0.coeffs.cmp(&b.0.coeffs))
    });
    Ok(out)
}

fn pth_root(tower: &TowerField, a: &FFPoly) -> FFPoly {
    let p = tower.p as usize;
    let k = a.level;
    // a^(1/p) = a^(q/p) on elements
    let e = tower.card(k) / BigUint::from(tower.p);
    let v = a.coeffs.iter().step_by(p).map(|c| tower.pow(c, &e)).collect();
    FFPoly::new(k, v)
}

/// Squarefree decomposition of a monic polynomial.
fn squarefree(tower: &TowerField, f: &FFPoly) -> Vec<(FFPoly, usize)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let d = tower.derivative(f);
    if d.is_zero() {
        for (g, m) in squarefree(tower, &pth_root(tower, f)) {
            out.push((g, m * tower.p as usize));
        }
        return out;
    }
    let mut c = tower.gcd(f, &d);
    let mut w = tower.divrem(f, &c).0;
    let mut i = 1;
    while w.deg() > 0 {
        let y = tower.gcd(&w, &c);
        let z = tower.divrem(&w, &y).0;
        if z.deg() > 0 {
            out.push((tower.monic(&z), i));
        }
        i += 1;
        w = y;
        c = tower.divrem(&c, &w).0;
    }
    if c.deg() > 0 {
        let c = tower.monic(&c);
        for (g, m) in squarefree(tower, &pth_root(tower, &c)) {
            out.push((g, m * tower.p as usize));
        }
    }
    out
}

fn distinct_degree(tower: &TowerField, f: &FFPoly) -> Vec<(FFPoly, usize)> {
    let mut out = Vec::new();
    let mut g = f.clone();
    let x = tower.poly_x(f.level);
    let mut h = tower.rem(&x, &g);
    let mut d = 0;
    while g.deg() >= 2 * (d + 1) {
        d += 1;
        h = tower.frobenius_mod(&h, &g);
        let gd = tower.gcd(&tower.psub(&h, &x), &g);
        if gd.deg() > 0 {
            out.push((gd.clone(), d));
            g = tower.divrem(&g, &gd).0;
            h = tower.rem(&h, &g);
        }
    }
    if g.deg() > 0 {
        let n = g.deg();
        out.push((tower.monic(&g), n));
    }
    out
}

fn equal_degree(tower: &TowerField, f: &FFPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FFPoly>) {
    let n = f.deg();
    if n == d {
        out.push(tower.monic(f));
        return;
    }
    let k = f.level;
    let qd = num_traits::pow(tower.card(k), d);
    loop {
        let a = FFPoly::new(k, (0..n).map(|_| tower.random_elem(k, rng)).collect());
        if a.deg() == 0 {
            continue;
        }
        let b = if tower.p == 2 {
            // trace map a + a^2 + … + a^(2^(kd-1))
            let steps = tower.degs[k] * d;
            let mut t = tower.rem(&a, f);
            let mut acc = t.clone();
            for _ in 1..steps {
                t = tower.rem(&tower.pmul(&t, &t), f);
                acc = tower.padd(&acc, &t);
            }
            acc
        } else {
            let e: BigUint = (&qd - BigUint::one()) >> 1;
            let t = tower.powmod(&a, &e, f);
            tower.psub(&t, &tower.poly_one(k))
        };
        let g = tower.gcd(&b, f);
        if g.deg() > 0 && g.deg() < n {
            let h = tower.divrem(f, &g).0;
            equal_degree(tower, &g, d, rng, out);
            equal_degree(tower, &h, d, rng, out);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f4() -> TowerField {
        let t = TowerField::new(2);
        let psi = t.poly_from_ints(0, &[1, 1, 1]);
        t.extend(&psi).unwrap()
    }

    #[test]
    fn extend_examples() {
        let t = TowerField::new(5);
        let t25 = t.extend(&t.poly_from_ints(0, &[2, 0, 1])).unwrap();
        assert_eq!(t25.card(1), BigUint::from(25u32));
        let z = t25.gen(0);
        let zz = t25.mul(&z, &z);
        assert!(t25.add(&zz, &t25.from_int(1, 2)).is_zero());
        assert_eq!(t.extend(&t.poly_from_ints(0, &[4, 0, 1])), Err(Error::ReduciblePsi));
        assert_eq!(t.extend(&t.poly_from_ints(0, &[1, 0, 2])), Err(Error::NotMonic));

        let t4 = f4();
        let z = t4.gen(0);
        let psi = FFPoly::new(1, vec![z, t4.one(1), t4.one(1)]);
        let t16 = t4.extend(&psi).unwrap();
        assert_eq!(t16.card(2), BigUint::from(16u32));
        let w = t16.gen(1);
        // w^2 + w + z = 0
        let zz = t16.embed(&t16.gen(0), 2);
        let s = t16.add(&t16.add(&t16.mul(&w, &w), &w), &zz);
        assert!(s.is_zero());
    }

    #[test]
    fn factor_examples() {
        let t = TowerField::new(5);
        let f = ff_factorize(&t, &t.poly_from_ints(0, &[1, 0, 1])).unwrap();
        assert_eq!(f, vec![(t.poly_from_ints(0, &[2, 1]), 1), (t.poly_from_ints(0, &[3, 1]), 1)]);

        let t2 = TowerField::new(2);
        let g = t2.poly_from_ints(0, &[1, 1, 1]);
        assert_eq!(ff_factorize(&t2, &g).unwrap(), vec![(g.clone(), 1)]);

        let t4 = f4();
        let g = t4.poly_from_ints(1, &[1, 1, 1]);
        let f = ff_factorize(&t4, &g).unwrap();
        let z = t4.gen(0);
        let one = t4.one(1);
        let a = FFPoly::new(1, vec![z.clone(), one.clone()]);
        let b = FFPoly::new(1, vec![t4.add(&z, &one), one]);
        assert_eq!(f.len(), 2);
        assert!(f.contains(&(a, 1)) && f.contains(&(b, 1)));
        assert_eq!(ff_factorize(&t4, &FFPoly::new(1, vec![])), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn ord_examples() {
        let t = TowerField::new(5);
        let a = t.poly_from_ints(0, &[2, 1]);
        let b = t.poly_from_ints(0, &[3, 1]);
        let g = t.pmul(&t.pmul(&a, &a), &t.pmul(&a, &b));
        assert_eq!(ff_ord(&t, &g, &a).unwrap(), 3);
        let t2 = TowerField::new(2);
        let g = t2.poly_from_ints(0, &[1, 1, 1]);
        assert_eq!(ff_ord(&t2, &g, &t2.poly_from_ints(0, &[1, 1])).unwrap(), 0);
        assert_eq!(ff_ord(&t2, &g, &g).unwrap(), 1);
    }

    #[test]
    fn inseparable_factorization() {
        // (y^2+y+1)^2 * y^3 over F_2 has zero-derivative parts
        let t = TowerField::new(2);
        let a = t.poly_from_ints(0, &[1, 1, 1]);
        let y = t.poly_x(0);
        let g = t.pmul(&t.pmul(&a, &a), &t.pmul(&y, &t.pmul(&y, &y)));
        let f = ff_factorize(&t, &g).unwrap();
        assert_eq!(f, vec![(y, 3), (a, 2)]);
        // y^9 - 1 = (y^3 - 1)^3 over F_3
        let t3 = TowerField::new(3);
        let g = t3.poly_from_ints(0, &[2, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let f = ff_factorize(&t3, &g).unwrap();
        assert_eq!(f, vec![(t3.poly_from_ints(0, &[2, 1]), 9)]);
    }

    #[test]
    fn determinism() {
        let t = TowerField::new(101);
        let g = t.poly_from_ints(0, &[3, 1, 4, 1, 5, 9, 2, 6, 1]);
        assert_eq!(ff_factorize(&t, &g).unwrap(), ff_factorize(&t, &g).unwrap());
    }

    fn tower_for(sel: u8) -> TowerField {
        match sel % 4 {
            0 => TowerField::new(7),
            1 => f4(),
            2 => {
                let t = TowerField::new(3);
                t.extend(&t.poly_from_ints(0, &[1, 0, 1])).unwrap()
            }
            _ => {
                let t = f4();
                let z = t.gen(0);
                let psi = FFPoly::new(1, vec![z, t.one(1), t.one(1)]);
                t.extend(&psi).unwrap()
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn field_axioms(sel in 0u8..4, seed in any::<u64>()) {
            let t = tower_for(sel);
            let k = t.top();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = t.random_elem(k, &mut rng);
            let b = t.random_elem(k, &mut rng);
            let c = t.random_elem(k, &mut rng);
            prop_assert_eq!(t.mul(&a, &t.add(&b, &c)), t.add(&t.mul(&a, &b), &t.mul(&a, &c)));
            prop_assert_eq!(t.mul(&t.mul(&a, &b), &c), t.mul(&a, &t.mul(&b, &c)));
            prop_assert_eq!(t.mul(&a, &b), t.mul(&b, &a));
            if !a.is_zero() {
                prop_assert_eq!(t.mul(&a, &t.inv(&a).unwrap()), t.one(k));
            }
            prop_assert_eq!(t.pow(&a, &t.card(k)), a);
        }

        #[test]
        fn factorization_reconstructs(sel in 0u8..4, seed in any::<u64>(), n in 1usize..7) {
            let t = tower_for(sel);
            let k = t.top();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut c: Vec<TowerElem> = (0..n).map(|_| t.random_elem(k, &mut rng)).collect();
            c.push(t.one(k));
            let g = FFPoly::new(k, c);
            // square part to exercise multiplicities
            let g = t.pmul(&g, &t.poly_from_ints(k, &[1, 1]));
            let fac = ff_factorize(&t, &g).unwrap();
            let mut prod = t.poly_one(k);
            for (f, m) in &fac {
                prop_assert_eq!(f.lead().unwrap(), &t.one(k));
                let dd = distinct_degree(&t, f);
                prop_assert_eq!(dd.len(), 1);
                prop_assert_eq!(dd[0].1, f.deg());
                for _ in 0..*m {
                    prod = t.pmul(&prod, f);
                }
            }
            prop_assert_eq!(prod, g);
        }
    }
}
