//! Example generators, primality check and the benchmark harness.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::diffdisc::p_discriminant;
use crate::error::{Error, Result};
use crate::oracle::{naive_discriminant, naive_resultant};
use crate::polyz::{pow_p, vp_int, PIntPoly, Val};
use crate::presultant::p_resultant;

fn out_of_range(msg: impl Into<String>) -> Error {
    Error::ParamOutOfRange(msg.into())
}

fn c(v: BigInt) -> PIntPoly {
    PIntPoly::constant(v)
}

fn xp() -> PIntPoly {
    PIntPoly::x()
}

/// (x + p + p² + ⋯ + p²⁰)ⁿ + p^{20n+1}
pub fn ex1(p: u64, n: usize) -> Result<PIntPoly> {
    if p < 2 || !is_prime(p) {
        return Err(out_of_range(format!("{p} is not prime")));
    }
    if n == 0 {
        return Err(out_of_range("n must be positive"));
    }
    let a: BigInt = (1..=20).map(|k| pow_p(p, k)).sum();
    let base = &xp() + &c(a);
    Ok(&base.pow(n as u64) + &c(pow_p(p, 20 * n as u64 + 1)))
}

/// g_0(x)g_0(x+2)⋯g_0(x+2(m−1)) + 2p^{110m} with g_0 = x¹⁰ + 2p¹¹.
pub fn ex2(p: u64, m: usize) -> Result<PIntPoly> {
    if !is_prime(p) || p <= 5 {
        return Err(out_of_range(format!("need a prime p > 5, got {p}")));
    }
    if m == 0 || 2 * m as u64 >= p {
        return Err(out_of_range(format!("need 0 < m < p/2, got m = {m}")));
    }
    let g0 = &xp().pow(10) + &c(BigInt::from(2) * pow_p(p, 11));
    let mut g = PIntPoly::one();
    for k in 0..m {
        g = &g * &g0.shift(&BigInt::from(2 * k as i64));
    }
    Ok(&g + &c(BigInt::from(2) * pow_p(p, 110 * m as u64)))
}

pub const EX3_DEGREES: [usize; 8] = [2, 4, 12, 36, 72, 144, 432, 864];

/// The ladder E_1, …, E_j.
pub fn ex3_ladder(p: u64, j: usize) -> Result<Vec<PIntPoly>> {
    if !is_prime(p) || p <= 3 {
        return Err(out_of_range(format!("need a prime p > 3, got {p}")));
    }
    if !(1..=8).contains(&j) {
        return Err(out_of_range(format!("j must lie in 1..=8, got {j}")));
    }
    let x = xp();
    let pk = |k: u64| c(pow_p(p, k));
    let pm1 = |k: u64| c((BigInt::from(p) - 1) * pow_p(p, k));
    let mut e: Vec<PIntPoly> = vec![&x.pow(2) + &pk(1)];
    while e.len() < j {
        let next = match e.len() {
            1 => &e[0].pow(2) + &(&pm1(3) * &x),
            2 => &e[1].pow(3) + &pk(11),
            3 => &e[2].pow(3) + &(&(&pk(29) * &x) * &e[1]),
            4 => &e[3].pow(2) + &(&(&(&pm1(42) * &x) * &e[0]) * &e[2].pow(2)),
            5 => &e[4].pow(2) + &(&(&(&pk(88) * &x) * &e[2]) * &e[3]),
            6 => &e[5].pow(3) + &(&(&(&pk(295) * &e[1]) * &e[3]) * &e[4]),
            _ => {
                let t = &(&(&pm1(632) * &x) * &e[0]) * &e[1].pow(2);
                &e[6].pow(2) + &(&(&t * &e[2].pow(2)) * &e[5])
            }
        };
        e.push(next);
    }
    Ok(e)
}

pub fn ex3(p: u64, j: usize) -> Result<PIntPoly> {
    Ok(ex3_ladder(p, j)?.pop().unwrap())
}

/// Example-1 polynomial of degree 10m against the example-2 polynomial.
pub fn ex4(p: u64, m: usize) -> Result<(PIntPoly, PIntPoly)> {
    let g = ex2(p, m)?;
    Ok((ex1(p, 10 * m)?, g))
}

pub fn ex5(p: u64, i: usize, j: usize) -> Result<(PIntPoly, PIntPoly)> {
    let l = ex3_ladder(p, i.max(j))?;
    if i == 0 {
        return Err(out_of_range("i must lie in 1..=8"));
    }
    Ok((l[i - 1].clone(), l[j - 1].clone()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Ex1,
    Ex2,
    Ex3,
    Ex4,
    Ex5,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "ex1" => Suite::Ex1,
            "ex2" => Suite::Ex2,
            "ex3" => Suite::Ex3,
            "ex4" => Suite::Ex4,
            "ex5" => Suite::Ex5,
            _ => return Err(Error::Parse(format!("unknown example {s:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Ex1 => "ex1",
            Suite::Ex2 => "ex2",
            Suite::Ex3 => "ex3",
            Suite::Ex4 => "ex4",
            Suite::Ex5 => "ex5",
        };
        f.write_str(s)
    }
}

/// One configuration of an example family. `a` and `b` are the family
/// parameters: n, m, j, m and (i, j) respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchCase {
    pub suite: Suite,
    pub p: u64,
    pub a: usize,
    pub b: usize,
}

/// What a case asks for: a discriminant or a resultant valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Disc(PIntPoly),
    Res(PIntPoly, PIntPoly),
}

impl Instance {
    pub fn degree_label(&self) -> String {
        match self {
            Instance::Disc(g) => g.deg().to_string(),
            Instance::Res(f, g) => format!("{}/{}", f.deg(), g.deg()),
        }
    }
}

impl BenchCase {
    pub fn new(suite: Suite, p: u64, a: usize) -> Self {
        BenchCase { suite, p, a, b: 0 }
    }

    pub fn pair(p: u64, i: usize, j: usize) -> Self {
        BenchCase { suite: Suite::Ex5, p, a: i, b: j }
    }

    pub fn build(&self) -> Result<Instance> {
        let (p, a) = (self.p, self.a);
        Ok(match self.suite {
            Suite::Ex1 => Instance::Disc(ex1(p, a)?),
            Suite::Ex2 => Instance::Disc(ex2(p, a)?),
            Suite::Ex3 => Instance::Disc(ex3(p, a)?),
            Suite::Ex4 => {
                let (f, g) = ex4(p, a)?;
                Instance::Res(f, g)
            }
            Suite::Ex5 => {
                let (f, g) = ex5(p, a, self.b)?;
                Instance::Res(f, g)
            }
        })
    }
}

/// Desk-scale rows of each table.
pub fn default_cases(suite: Suite) -> Vec<BenchCase> {
    let c = |p, a| BenchCase::new(suite, p, a);
    match suite {
        Suite::Ex1 => vec![c(2, 20), c(2, 50), c(59, 20)],
        Suite::Ex2 => vec![c(7, 3), c(23, 5)],
        Suite::Ex3 => vec![c(5, 5), c(5, 6), c(61, 5)],
        Suite::Ex4 => vec![c(7, 3), c(11, 5)],
        Suite::Ex5 => vec![BenchCase::pair(5, 5, 6), BenchCase::pair(5, 6, 7)],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub example: String,
    pub p: u64,
    pub deg: String,
    pub value: Val,
    pub engine_ms: f64,
    pub naive_value: Option<Val>,
    pub naive_ms: Option<f64>,
}

impl BenchRow {
    pub fn agrees(&self) -> bool {
        self.naive_value.is_none_or(|v| v == self.value)
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

pub fn engine_value(inst: &Instance, p: u64) -> Result<Val> {
    match inst {
        Instance::Disc(g) => Ok(p_discriminant(g, p)?.v_disc),
        Instance::Res(f, g) => p_resultant(f, g, p),
    }
}

pub fn naive_value(inst: &Instance, p: u64) -> Val {
    match inst {
        Instance::Disc(g) => vp_int(p, &naive_discriminant(g)),
        Instance::Res(f, g) => vp_int(p, &naive_resultant(f, g)),
    }
}

pub fn run_case(case: &BenchCase, with_naive: bool) -> Result<BenchRow> {
    let inst = case.build()?;
    let t = Instant::now();
    let value = engine_value(&inst, case.p)?;
    let engine_ms = ms(t);
    let (naive_value, naive_ms) = if with_naive {
        let t = Instant::now();
        let v = naive_value(&inst, case.p);
        (Some(v), Some(ms(t)))
    } else {
        (None, None)
    };
    Ok(BenchRow {
        example: case.suite.to_string(),
        p: case.p,
        deg: inst.degree_label(),
        value,
        engine_ms,
        naive_value,
        naive_ms,
    })
}

/// Runs the cases one after another so timings do not interfere.
pub fn run_bench(cases: &[BenchCase], with_naive: bool) -> Result<Vec<BenchRow>> {
    cases.iter().map(|c| run_case(c, with_naive)).collect()
}

pub fn write_csv<W: std::io::Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Parse(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["example", "p", "deg", "value", "engine_ms", "naive_value", "naive_ms"])
        .map_err(io)?;
    for r in rows {
        w.write_record([
            r.example.clone(),
            r.p.to_string(),
            r.deg.clone(),
            r.value.to_string(),
            format!("{:.3}", r.engine_ms),
            r.naive_value.map(|v| v.to_string()).unwrap_or_default(),
            r.naive_ms.map(|t| format!("{t:.3}")).unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(())
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit input.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees() {
        assert_eq!(ex1(2, 20).unwrap().deg(), 20);
        assert_eq!(ex2(7, 3).unwrap().deg(), 30);
        let l = ex3_ladder(5, 8).unwrap();
        assert_eq!(l.iter().map(|e| e.deg()).collect::<Vec<_>>(), EX3_DEGREES);
        assert!(l.iter().all(|e| e.is_monic()));
        assert_eq!(ex3(5, 5).unwrap().deg(), 72);
        let (f, g) = ex4(7, 3).unwrap();
        assert_eq!((f.deg(), g.deg()), (30, 30));
    }

    #[test]
    fn small_shapes() {
        let l = ex3_ladder(5, 2).unwrap();
        assert_eq!(l[0].to_i64s().unwrap(), vec![5, 0, 1]);
        // (x²+5)² + 4·125·x
        assert_eq!(l[1].to_i64s().unwrap(), vec![25, 500, 10, 0, 1]);
        assert!(ex1(2, 1).unwrap().coeff(0) > BigInt::from(1));
    }

    #[test]
    fn ranges() {
        assert!(matches!(ex2(5, 1), Err(Error::ParamOutOfRange(_))));
        assert!(matches!(ex2(7, 4), Err(Error::ParamOutOfRange(_))));
        assert!(matches!(ex3(3, 2), Err(Error::ParamOutOfRange(_))));
        assert!(matches!(ex3(5, 9), Err(Error::ParamOutOfRange(_))));
        assert!(matches!(ex1(4, 3), Err(Error::ParamOutOfRange(_))));
    }

    #[test]
    fn bench_rows() {
        let rows = run_bench(&[BenchCase::new(Suite::Ex2, 7, 1), BenchCase::pair(5, 1, 2)], true).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.agrees() && r.naive_ms.is_some()));
        assert_eq!(rows[1].deg, "2/4");
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "example,p,deg,value,engine_ms,naive_value,naive_ms");
        assert!(lines.next().unwrap().starts_with("ex2,7,10,"));
        assert_eq!("ex4".parse::<Suite>().unwrap(), Suite::Ex4);
        assert!("ex9".parse::<Suite>().is_err());
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(2_147_483_647));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(18_446_744_073_709_551_615));
    }
}
