//! Big-integer polynomials with p-adic valuations and precision tags.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An extended valuation.
///
/// `AtLeast(k)` is what a valuation looks like when the true value is hidden
/// behind the working precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Val {
    Fin(i64),
    AtLeast(i64),
    Inf,
}

impl Val {
    pub fn is_inf(self) -> bool {
        matches!(self, Val::Inf)
    }

    pub fn fin(self) -> Option<i64> {
        match self {
            Val::Fin(v) => Some(v),
            _ => None,
        }
    }

    /// Lower bound carried by the value; `None` for infinity.
    pub fn lower(self) -> Option<i64> {
        match self {
            Val::Fin(v) | Val::AtLeast(v) => Some(v),
            Val::Inf => None,
        }
    }

    pub fn add_int(self, k: i64) -> Val {
        match self {
            Val::Fin(v) => Val::Fin(v + k),
            Val::AtLeast(v) => Val::AtLeast(v + k),
            Val::Inf => Val::Inf,
        }
    }
}

impl Add for Val {
    type Output = Val;
    fn add(self, o: Val) -> Val {
        match (self, o) {
            (Val::Inf, _) | (_, Val::Inf) => Val::Inf,
            (Val::Fin(a), Val::Fin(b)) => Val::Fin(a + b),
            (Val::Fin(a), Val::AtLeast(b))
            | (Val::AtLeast(a), Val::Fin(b))
            | (Val::AtLeast(a), Val::AtLeast(b)) => Val::AtLeast(a + b),
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Fin(v) => write!(f, "{v}"),
            Val::AtLeast(v) => write!(f, ">={v}"),
            Val::Inf => write!(f, "infinity"),
        }
    }
}

impl Serialize for Val {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Val::Fin(v) => s.serialize_i64(*v),
            Val::AtLeast(v) => s.serialize_str(&format!(">={v}")),
            Val::Inf => s.serialize_str("infinity"),
        }
    }
}

impl<'de> Deserialize<'de> for Val {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Val, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Val::Fin(v)),
            Raw::Str(s) if s == "infinity" => Ok(Val::Inf),
            Raw::Str(s) => s
                .strip_prefix(">=")
                .and_then(|r| r.parse().ok())
                .map(Val::AtLeast)
                .ok_or_else(|| serde::de::Error::custom(format!("bad valuation {s:?}"))),
        }
    }
}

/// p-adic valuation of an integer.
pub fn vp_int(p: u64, n: &BigInt) -> Val {
    if n.is_zero() {
        Val::Inf
    } else {
        Val::Fin(vp_nonzero(p, n.magnitude()) as i64)
    }
}

pub(crate) fn vp_nonzero(p: u64, n: &BigUint) -> u64 {
    if p == 2 {
        return n.trailing_zeros().unwrap_or(0);
    }
    // chunks of p^k < 2^32 (just p when p is larger) first, on the digits in place: most valuations are
    // small next to the size of n
    let (mut chunk, mut k) = (p, 1u64);
    while chunk.checked_mul(p).is_some_and(|c| c < 1 << 32) {
        chunk *= p;
        k += 1;
    }
    let mut digits = n.to_u32_digits();
    let mut v = 0u64;
    let mut divided = false;
    for _ in 0..4 {
        let r = if chunk < 1 << 32 { rem_small(&digits, chunk) } else { rem_wide(&digits, chunk) };
        if r != 0 {
            let mut r = r;
            while r % p == 0 {
                r /= p;
                v += 1;
            }
            return v;
        }
        if chunk < 1 << 32 {
            let mut r = 0u64;
            for d in digits.iter_mut().rev() {
                let cur = (r << 32) | *d as u64;
                *d = (cur / chunk) as u32;
                r = cur % chunk;
            }
        } else {
            let c = chunk as u128;
            let mut r = 0u128;
            for d in digits.iter_mut().rev() {
                let cur = (r << 32) | *d as u128;
                *d = (cur / c) as u32;
                r = cur % c;
            }
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        divided = true;
        v += k;
    }
    let owned = divided.then(|| BigUint::new(digits));
    let n = owned.as_ref().unwrap_or(n);
    // powers[k] = p^(2^k)
    let mut powers = vec![BigUint::from(p)];
    loop {
        let last = powers.last().unwrap();
        if 2 * last.bits() > n.bits() + 1 {
            break;
        }
        let sq = last * last;
        if (n % &sq).is_zero() {
            powers.push(sq);
        } else {
            break;
        }
    }
    let mut cur = n.clone();
    for k in (0..powers.len()).rev() {
        loop {
            let (q, r) = cur.div_rem(&powers[k]);
            if !r.is_zero() {
                break;
            }
            cur = q;
            v += 1 << k;
        }
    }
    v
}

fn rem_small(digits: &[u32], c: u64) -> u64 {
    digits.iter().rev().fold(0u64, |r, &d| ((r << 32) | d as u64) % c)
}

fn rem_wide(digits: &[u32], c: u64) -> u64 {
    let c = c as u128;
    digits.iter().rev().fold(0u128, |r, &d| ((r << 32) | d as u128) % c) as u64
}

/// p^k as a big integer.
pub fn pow_p(p: u64, k: u64) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// Precision tag of a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Exact,
    ModPPower(u32),
}

impl Precision {
    pub fn meet(self, o: Precision) -> Precision {
        match (self, o) {
            (Precision::Exact, x) | (x, Precision::Exact) => x,
            (Precision::ModPPower(a), Precision::ModPPower(b)) => Precision::ModPPower(a.min(b)),
        }
    }
}

/// Dense polynomial over the integers, ascending coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PIntPoly {
    #[serde(with = "bigint_strings")]
    coeffs: Vec<BigInt>,
    precision: Precision,
}

mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|c| c.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect()
    }
}

impl PIntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PIntPoly { coeffs, precision: Precision::Exact }
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision == Precision::Exact
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        PIntPoly::new(self.coeffs.iter().map(|a| a * c).collect()).with_precision(self.precision)
    }

    /// Exact division of every coefficient by `c`; `None` if some division is inexact.
    pub fn div_exact(&self, c: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(PIntPoly::new(out).with_precision(self.precision))
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        PIntPoly::new(v).with_precision(self.precision)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = PIntPoly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// g(x + a).
    pub fn shift(&self, a: &BigInt) -> Self {
        // Horner in the shifted variable.
        let lin = PIntPoly::new(vec![a.clone(), BigInt::one()]);
        let mut acc = PIntPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &PIntPoly::constant(c.clone());
        }
        acc.with_precision(self.precision)
    }

    /// g(c x).
    pub fn scale_var(&self, c: &BigInt) -> Self {
        let mut pw = BigInt::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            v.push(a * &pw);
            pw *= c;
        }
        PIntPoly::new(v).with_precision(self.precision)
    }

    /// Minimum p-adic valuation of the coefficients (exact representative).
    pub fn content_val(&self, p: u64) -> Val {
        let mut best = Val::Inf;
        for c in &self.coeffs {
            if let Val::Fin(v) = vp_int(p, c) {
                best = match best {
                    Val::Fin(b) if b <= v => best,
                    _ => Val::Fin(v),
                };
                if v == 0 {
                    break;
                }
            }
        }
        best
    }

    /// Canonical reduction of the coefficients into `[0, p^m)`.
    pub fn reduce_mod_power(&self, p: u64, m: u32) -> Self {
        let modulus = pow_p(p, m as u64);
        self.reduce_mod(&modulus, m)
    }

    pub(crate) fn reduce_mod(&self, modulus: &BigInt, m: u32) -> Self {
        let v = self.coeffs.iter().map(|c| c.mod_floor(modulus)).collect();
        PIntPoly::new(v).with_precision(self.precision.meet(Precision::ModPPower(m)))
    }

    /// Quotient and remainder by a monic divisor.
    pub fn divrem_monic(&self, phi: &PIntPoly) -> Result<(PIntPoly, PIntPoly)> {
        self.divrem_monic_inner(phi, None)
    }

    /// Like [`divrem_monic`](Self::divrem_monic), reducing modulo `p^m` along the way.
    pub fn divrem_monic_mod(&self, phi: &PIntPoly, modulus: &BigInt, m: u32) -> Result<(PIntPoly, PIntPoly)> {
        self.divrem_monic_inner(phi, Some((modulus, m)))
    }

    fn divrem_monic_inner(&self, phi: &PIntPoly, modulus: Option<(&BigInt, u32)>) -> Result<(PIntPoly, PIntPoly)> {
        if !phi.is_monic() {
            return Err(Error::NotMonic);
        }
        let m = phi.deg();
        let prec = self.precision.meet(phi.precision);
        let prec = match modulus {
            Some((_, k)) => prec.meet(Precision::ModPPower(k)),
            None => prec,
        };
        if self.coeffs.len() <= m {
            let r = match modulus {
                Some((md, k)) => self.reduce_mod(md, k),
                None => self.clone(),
            };
            return Ok((PIntPoly::zero(), r.with_precision(prec)));
        }
        let mut r = self.coeffs.clone();
        let qlen = r.len() - m;
        let mut q = vec![BigInt::zero(); qlen];
        let pc = &phi.coeffs[..m];
        if m == 1 {
            // synthetic division by x + c
            let c = &pc[0];
            for i in (1..r.len()).rev() {
                let mut t = std::mem::take(&mut r[i]);
                if let Some((md, _)) = modulus {
                    t = t.mod_floor(md);
                }
                if !t.is_zero() {
                    r[i - 1] -= &t * c;
                }
                q[i - 1] = t;
            }
        } else {
            for i in (m..r.len()).rev() {
                let mut t = std::mem::take(&mut r[i]);
                if let Some((md, _)) = modulus {
                    t = t.mod_floor(md);
                }
                if t.is_zero() {
                    continue;
                }
                for (j, cj) in pc.iter().enumerate() {
                    if !cj.is_zero() {
                        r[i - m + j] -= &t * cj;
                    }
                }
                q[i - m] = t;
            }
        }
        r.truncate(m);
        let (mut qp, mut rp) = (PIntPoly::new(q), PIntPoly::new(r));
        if let Some((md, k)) = modulus {
            rp = rp.reduce_mod(md, k);
            qp = qp.reduce_mod(md, k);
        }
        Ok((qp.with_precision(prec), rp.with_precision(prec)))
    }

    pub fn rem_monic(&self, phi: &PIntPoly) -> Result<PIntPoly> {
        Ok(self.divrem_monic(phi)?.1)
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    /// Sum of absolute values of the coefficients.
    pub fn norm1(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Squared Euclidean norm of the coefficient vector.
    pub fn norm2_sq(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Content (gcd of the coefficients), non-negative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }
}

impl<'a> Add<&'a PIntPoly> for &'a PIntPoly {
    type Output = PIntPoly;
    fn add(self, o: &PIntPoly) -> PIntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|i| match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) | (None, Some(a)) => a.clone(),
                _ => unreachable!(),
            })
            .collect();
        PIntPoly::new(v).with_precision(self.precision.meet(o.precision))
    }
}

impl<'a> Sub<&'a PIntPoly> for &'a PIntPoly {
    type Output = PIntPoly;
    fn sub(self, o: &PIntPoly) -> PIntPoly {
        self + &(-o)
    }
}

impl Neg for &PIntPoly {
    type Output = PIntPoly;
    fn neg(self) -> PIntPoly {
        PIntPoly::new(self.coeffs.iter().map(|c| -c).collect()).with_precision(self.precision)
    }
}

impl<'a> Mul<&'a PIntPoly> for &'a PIntPoly {
    type Output = PIntPoly;
    fn mul(self, o: &PIntPoly) -> PIntPoly {
        if self.is_zero() || o.is_zero() {
            return PIntPoly::zero().with_precision(self.precision.meet(o.precision));
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        PIntPoly::new(v).with_precision(self.precision.meet(o.precision))
    }
}

impl fmt::Display for PIntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.sign() == Sign::Minus;
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let body = match (k, a.is_one()) {
                (0, _) => a.to_string(),
                (1, true) => "x".to_string(),
                (1, false) => format!("{a}*x"),
                (_, true) => format!("x^{k}"),
                (_, false) => format!("{a}*x^{k}"),
            };
            write!(f, "{body}")?;
        }
        Ok(())
    }
}

/// Coefficients of the φ-expansion g = Σ a_s φ^s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionResult {
    pub phi: PIntPoly,
    pub coeffs: Vec<PIntPoly>,
}

impl ExpansionResult {
    pub fn reconstruct(&self) -> PIntPoly {
        let mut acc = PIntPoly::zero();
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * &self.phi) + a;
        }
        acc
    }

    /// Coefficient a_s, zero when beyond the stored range.
    pub fn get(&self, s: usize) -> PIntPoly {
        self.coeffs.get(s).cloned().unwrap_or_else(PIntPoly::zero)
    }
}

/// φ-adic expansion of `g`; with `count = Some(c)` only a_0..a_c are produced.
pub fn phi_expansion(g: &PIntPoly, phi: &PIntPoly, count: Option<usize>) -> Result<ExpansionResult> {
    phi_expansion_inner(g, phi, count, None)
}

/// φ-adic expansion reduced modulo `p^m` at every step.
pub fn phi_expansion_mod(g: &PIntPoly, phi: &PIntPoly, count: Option<usize>, p: u64, m: u32) -> Result<ExpansionResult> {
    let md = pow_p(p, m as u64);
    phi_expansion_inner(g, phi, count, Some((&md, m)))
}

fn phi_expansion_inner(
    g: &PIntPoly,
    phi: &PIntPoly,
    count: Option<usize>,
    modulus: Option<(&BigInt, u32)>,
) -> Result<ExpansionResult> {
    if !phi.is_monic() || phi.deg() == 0 {
        return Err(Error::NotMonic);
    }
    let mut coeffs = Vec::new();
    let mut cur = g.clone();
    let limit = count.map(|c| c + 1).unwrap_or(usize::MAX);
    while !cur.is_zero() && coeffs.len() < limit {
        let (q, r) = match modulus {
            Some((md, k)) => cur.divrem_monic_mod(phi, md, k)?,
            None => cur.divrem_monic(phi)?,
        };
        coeffs.push(r);
        cur = q;
    }
    if coeffs.is_empty() {
        coeffs.push(PIntPoly::zero().with_precision(g.precision));
    }
    Ok(ExpansionResult { phi: phi.clone(), coeffs })
}

/// One term of a multiadic expansion: exponents (j_1..j_r) and an integer coefficient
/// polynomial of degree below deg φ_1.
pub type MultiadicTerm = (Vec<usize>, PIntPoly);

/// (φ_1,…,φ_r)-multiadic expansion; zero terms are omitted.
pub fn multiadic_expansion(g: &PIntPoly, chain: &[PIntPoly]) -> Result<Vec<MultiadicTerm>> {
    for w in chain.windows(2) {
        let (a, b) = (w[0].deg(), w[1].deg());
        if a >= b || b % a != 0 {
            return Err(Error::ChainDegreeMismatch);
        }
    }
    if chain.iter().any(|c| !c.is_monic() || c.deg() == 0) {
        return Err(Error::NotMonic);
    }
    let mut out = Vec::new();
    let mut exps = vec![0; chain.len()];
    multiadic_rec(g, chain, chain.len(), &mut exps, &mut out)?;
    Ok(out)
}

fn multiadic_rec(
    g: &PIntPoly,
    chain: &[PIntPoly],
    level: usize,
    exps: &mut Vec<usize>,
    out: &mut Vec<MultiadicTerm>,
) -> Result<()> {
    if g.is_zero() {
        return Ok(());
    }
    if level == 0 {
        out.push((exps.clone(), g.clone()));
        return Ok(());
    }
    let phi = &chain[level - 1];
    if g.deg() < phi.deg() {
        exps[level - 1] = 0;
        return multiadic_rec(g, chain, level - 1, exps, out);
    }
    let exp = phi_expansion(g, phi, None)?;
    for (s, a) in exp.coeffs.iter().enumerate() {
        exps[level - 1] = s;
        multiadic_rec(a, chain, level - 1, exps, out)?;
    }
    exps[level - 1] = 0;
    Ok(())
}

pub fn multiadic_reconstruct(terms: &[MultiadicTerm], chain: &[PIntPoly]) -> PIntPoly {
    let mut acc = PIntPoly::zero();
    for (j, c) in terms {
        let mut t = c.clone();
        for (phi, &k) in chain.iter().zip(j) {
            t = &t * &phi.pow(k as u64);
        }
        acc = &acc + &t;
    }
    acc
}

/// Parses the textual grammar (`3*x^2 - x + 7`) or a JSON array of decimal strings.
pub fn parse_poly(s: &str) -> Result<PIntPoly> {
    let t = s.trim();
    if t.starts_with('[') {
        let raw: Vec<serde_json::Value> =
            serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
        let mut v = Vec::with_capacity(raw.len());
        for x in raw {
            let c = match x {
                serde_json::Value::String(s) => s.trim().parse::<BigInt>(),
                serde_json::Value::Number(n) => n.to_string().parse::<BigInt>(),
                other => return Err(Error::Parse(format!("bad coefficient {other}"))),
            };
            v.push(c.map_err(|e| Error::Parse(e.to_string()))?);
        }
        return Ok(PIntPoly::new(v));
    }
    parse_terms(t)
}

fn parse_terms(s: &str) -> Result<PIntPoly> {
    let mut prev: Option<char> = None;
    let mut gap = false;
    for c in s.chars() {
        if c.is_whitespace() {
            gap = true;
            continue;
        }
        if gap && c.is_ascii_alphanumeric() && prev.is_some_and(|q| q.is_ascii_alphanumeric()) {
            return Err(Error::Parse(format!("missing operator in {s:?}")));
        }
        prev = Some(c);
        gap = false;
    }
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut i = 0;
    let bad = |msg: &str| Error::Parse(format!("{msg} in {s:?}"));
    while i < chars.len() {
        let mut sign = BigInt::one();
        if chars[i] == '+' || chars[i] == '-' {
            if chars[i] == '-' {
                sign = -sign;
            }
            i += 1;
        } else if i > 0 {
            return Err(bad("expected sign"));
        }
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let c = if i > start {
            let digits: String = chars[start..i].iter().collect();
            Some(digits.parse::<BigInt>().map_err(|e| Error::Parse(e.to_string()))?)
        } else {
            None
        };
        let mut k = 0usize;
        let has_mul = i < chars.len() && chars[i] == '*';
        if has_mul {
            if c.is_none() {
                return Err(bad("dangling '*'"));
            }
            i += 1;
        }
        if i < chars.len() && chars[i] == 'x' {
            i += 1;
            k = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let st = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i == st {
                    return Err(bad("missing exponent"));
                }
                let e: String = chars[st..i].iter().collect();
                k = e.parse().map_err(|_| bad("bad exponent"))?;
            }
        } else if has_mul || c.is_none() {
            return Err(bad("expected x"));
        }
        let c = c.unwrap_or_else(BigInt::one) * sign;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, BigInt::zero());
        }
        coeffs[k] += c;
    }
    Ok(PIntPoly::new(coeffs))
}

impl std::str::FromStr for PIntPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}

/// Compare two polynomials by degree, then coefficients from the top.
pub fn cmp_poly(a: &PIntPoly, b: &PIntPoly) -> Ordering {
    a.coeffs
        .len()
        .cmp(&b.coeffs.len())
        .then_with(|| a.coeffs.iter().rev().cmp(b.coeffs.iter().rev()))
}

/// A polynomial known exactly, together with its working copy modulo p^ν.
#[derive(Debug, Clone)]
pub struct WorkPoly {
    exact: PIntPoly,
    working: PIntPoly,
    p: u64,
    nu: Option<u32>,
}

impl WorkPoly {
    /// `nu = None` keeps everything exact.
    pub fn new(exact: &PIntPoly, p: u64, nu: Option<u32>) -> Self {
        let working = match nu {
            Some(n) => exact.reduce_mod_power(p, n),
            None => exact.clone(),
        };
        WorkPoly { exact: exact.clone(), working, p, nu }
    }

    pub fn exact(&self) -> &PIntPoly {
        &self.exact
    }

    pub fn working(&self) -> &PIntPoly {
        &self.working
    }

    pub fn nu(&self) -> Option<u32> {
        self.nu
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Expansion of the working copy.
    pub fn expand(&self, phi: &PIntPoly, count: Option<usize>) -> Result<ExpansionResult> {
        match self.nu {
            Some(n) => phi_expansion_mod(&self.working, phi, count, self.p, n),
            None => phi_expansion(&self.exact, phi, count),
        }
    }

    /// Expansion of the exact polynomial, used to tell true zeros from hidden values.
    pub fn expand_exact(&self, phi: &PIntPoly, count: Option<usize>) -> Result<ExpansionResult> {
        phi_expansion(&self.exact, phi, count)
    }
}
