//! Naive exact resultants and discriminants over ℤ.
//!
//! This is the slow reference path. It never looks at p.

use std::sync::atomic::{AtomicBool, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::polyz::PIntPoly;

/// Marker error for a cancelled oracle computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cancelled;

fn check(stop: Option<&AtomicBool>) -> Result<(), Cancelled> {
    match stop {
        Some(s) if s.load(Ordering::Relaxed) => Err(Cancelled),
        _ => Ok(()),
    }
}

fn prim_part(a: &PIntPoly) -> (BigInt, PIntPoly) {
    let c = a.content();
    let c = if a.lead().is_negative() { -c } else { c };
    (c.clone(), a.div_exact(&c).unwrap())
}

/// Pseudo-remainder: lc(b)^{deg a − deg b + 1}·a mod b.
fn prem(a: &PIntPoly, b: &PIntPoly, stop: Option<&AtomicBool>) -> Result<PIntPoly, Cancelled> {
    let db = b.deg();
    let lb = b.lead();
    let mut r: Vec<BigInt> = a.coeffs().to_vec();
    let bc = b.coeffs();
    let mut steps = a.deg() as i64 - db as i64 + 1;
    while r.len() > db && !r.is_empty() {
        check(stop)?;
        let k = r.len() - 1;
        let t = r[k].clone();
        for x in r.iter_mut() {
            *x *= &lb;
        }
        for (j, bj) in bc.iter().enumerate() {
            r[k - db + j] -= &t * bj;
        }
        steps -= 1;
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    let mut rp = PIntPoly::new(r);
    if steps > 0 {
        rp = rp.scale(&num_traits::pow(lb, steps as usize));
    }
    Ok(rp)
}

fn pow_i(b: &BigInt, e: usize) -> BigInt {
    num_traits::pow(b.clone(), e)
}

/// Res(f, g) by the subresultant PRS.
pub fn naive_resultant(f: &PIntPoly, g: &PIntPoly) -> BigInt {
    naive_resultant_cancellable(f, g, None).unwrap()
}

/// Like [`naive_resultant`], aborting once `stop` is raised.
pub fn naive_resultant_cancellable(f: &PIntPoly, g: &PIntPoly, stop: Option<&AtomicBool>) -> Result<BigInt, Cancelled> {
    if f.is_zero() || g.is_zero() {
        return Ok(BigInt::zero());
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    let mut s = BigInt::one();
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            s = -s;
        }
    }
    let (ca, pa) = prim_part(&a);
    let (cb, pb) = prim_part(&b);
    let t = pow_i(&ca, b.deg()) * pow_i(&cb, a.deg());
    let (mut a, mut b) = (pa, pb);
    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    while b.deg() > 0 {
        check(stop)?;
        let delta = a.deg() - b.deg();
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            s = -s;
        }
        let r = prem(&a, &b, stop)?;
        if r.is_zero() {
            return Ok(BigInt::zero());
        }
        a = b;
        let denom = &gg * pow_i(&h, delta);
        b = r.div_exact(&denom).expect("subresultant division is exact");
        gg = a.lead();
        h = match delta {
            0 => h,
            1 => gg.clone(),
            d => {
                let num = pow_i(&gg, d);
                let den = pow_i(&h, d - 1);
                let (q, rem) = num.div_rem(&den);
                debug_assert!(rem.is_zero());
                q
            }
        };
    }
    let da = a.deg();
    let lb = b.lead();
    let hh = if da == 0 {
        h
    } else {
        let num = pow_i(&lb, da);
        let den = pow_i(&h, da - 1);
        num.div_floor(&den)
    };
    Ok(s * t * hh)
}

/// Determinant of the Sylvester matrix by fraction-free elimination.
pub fn sylvester_resultant(f: &PIntPoly, g: &PIntPoly) -> BigInt {
    let (n, m) = (f.deg(), g.deg());
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    let size = n + m;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..m {
        for (j, c) in f.coeffs().iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..n {
        for (j, c) in g.coeffs().iter().rev().enumerate() {
            mat[m + i][i + j] = c.clone();
        }
    }
    bareiss(mat)
}

fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            let Some(sw) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, sw);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Disc(g) = (−1)^{n(n−1)/2} Res(g, g′)/a_n.
pub fn naive_discriminant(g: &PIntPoly) -> BigInt {
    naive_discriminant_cancellable(g, None).unwrap()
}

pub fn naive_discriminant_cancellable(g: &PIntPoly, stop: Option<&AtomicBool>) -> Result<BigInt, Cancelled> {
    let n = g.deg();
    if n <= 1 {
        return Ok(BigInt::one());
    }
    let r = naive_resultant_cancellable(g, &g.derivative(), stop)?;
    let d = r / g.lead();
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -d } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyz::parse_poly;
    use proptest::prelude::*;

    fn p(s: &str) -> PIntPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(naive_resultant(&p("x^2+1"), &p("x-2")), BigInt::from(5));
        assert_eq!(naive_resultant(&p("x-3"), &p("x-1")), BigInt::from(2));
        assert_eq!(naive_resultant(&p("x^3+x+1"), &p("7")), BigInt::from(343));
        assert_eq!(naive_resultant(&p("x^2-1"), &p("x-1")), BigInt::zero());
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(naive_discriminant(&p("x^2+3*x+2")), BigInt::from(1));
        assert_eq!(naive_discriminant(&p("x^3+1")), BigInt::from(-27));
        assert_eq!(naive_discriminant(&p("x+5")), BigInt::from(1));
        assert_eq!(naive_discriminant(&p("4*x^2-1")), BigInt::from(16));
        assert_eq!(naive_discriminant(&p("2*x^3-2")), BigInt::from(-432));
    }

    #[test]
    fn cancellation() {
        let stop = AtomicBool::new(true);
        let r = naive_resultant_cancellable(&p("x^5+x+1"), &p("x^3+2"), Some(&stop));
        assert_eq!(r, Err(Cancelled));
    }

    fn arb(maxdeg: usize) -> impl Strategy<Value = PIntPoly> {
        prop::collection::vec(-30i64..30, 1..=maxdeg + 1)
            .prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
            .prop_map(|v| PIntPoly::from_i64s(&v))
    }

    proptest! {
        #[test]
        fn prs_matches_sylvester(f in arb(6), g in arb(6)) {
            prop_assert_eq!(naive_resultant(&f, &g), sylvester_resultant(&f, &g));
        }

        #[test]
        fn closed_forms(b in -50i64..50, c in -50i64..50, q in -50i64..50) {
            let quad = PIntPoly::from_i64s(&[c, b, 1]);
            prop_assert_eq!(naive_discriminant(&quad), BigInt::from(b * b - 4 * c));
            let cubic = PIntPoly::from_i64s(&[q, c, 0, 1]);
            prop_assert_eq!(naive_discriminant(&cubic), BigInt::from(-4 * c * c * c - 27 * q * q));
        }

        #[test]
        fn multiplicative(f in arb(4), g in arb(3), h in arb(3)) {
            let gh = &g * &h;
            prop_assert_eq!(naive_resultant(&f, &gh), naive_resultant(&f, &g) * naive_resultant(&f, &h));
        }
    }
}
