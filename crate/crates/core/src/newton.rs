//! Newton polygons of higher order, residual polynomials, side resultants and
//! partial indices.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::FFPoly;
use crate::omtype::OMType;
use crate::polyz::{PIntPoly, Val, WorkPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slope {
    /// −h/e with gcd(h, e) = 1
    Finite { h: i64, e: i64 },
    NegInf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Side {
    pub slope: Slope,
    /// Left endpoint; ordinate `None` for a side of slope −∞.
    pub start: (usize, Option<i64>),
    pub end: (usize, i64),
}

impl Side {
    /// Length E.
    pub fn len(&self) -> usize {
        self.end.0 - self.start.0
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Height H; `None` means ∞.
    pub fn height(&self) -> Option<i64> {
        self.start.1.map(|y| y - self.end.1)
    }

    /// Number of lattice slots E/e.
    pub fn degree(&self) -> usize {
        match self.slope {
            Slope::Finite { e, .. } => self.len() / e as usize,
            Slope::NegInf => 1,
        }
    }
}

/// Principal part of a Newton polygon, steepest side first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Polygon {
    pub sides: Vec<Side>,
}

impl Polygon {
    pub fn length(&self) -> usize {
        self.sides.iter().map(Side::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    pub fn has_neg_inf(&self) -> bool {
        self.sides.first().is_some_and(|s| s.slope == Slope::NegInf)
    }

    pub fn finite_sides(&self) -> impl Iterator<Item = &Side> {
        self.sides.iter().filter(|s| s.slope != Slope::NegInf)
    }

    pub fn right_end(&self) -> Option<(usize, i64)> {
        self.sides.last().map(|s| s.end)
    }

    /// floor of the polygon ordinate at an integer abscissa; `None` inside a −∞ side.
    fn floor_at(&self, a: usize) -> Option<i64> {
        for s in &self.sides {
            if a < s.start.0 || a > s.end.0 {
                continue;
            }
            if a == s.end.0 {
                return Some(s.end.1);
            }
            let y0 = s.start.1?;
            if a == s.start.0 {
                return Some(y0);
            }
            let (x0, x1, y1) = (s.start.0 as i64, s.end.0 as i64, s.end.1);
            let num = y0 * (x1 - a as i64) + y1 * (a as i64 - x0);
            return Some(Integer::div_floor(&num, &(x1 - x0)));
        }
        None
    }
}

impl fmt::Display for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.sides {
            if first {
                match s.start.1 {
                    Some(y) => write!(f, "({},{})", s.start.0, y)?,
                    None => write!(f, "({},inf)", s.start.0)?,
                }
                first = false;
            }
            write!(f, " -> ({},{})", s.end.0, s.end.1)?;
        }
        if first {
            write!(f, "(empty)")?;
        }
        Ok(())
    }
}

fn reduced_slope(dx: i64, dy: i64) -> Slope {
    let g = dx.gcd(&dy);
    Slope::Finite { h: dy / g, e: dx / g }
}

/// Principal polygon of the points `(s, ords[s])`.
///
/// Hidden ordinates (`AtLeast`) must lie strictly above the result, otherwise
/// `InsufficientPrecision` is raised.
pub fn polygon_from_points(ords: &[Val]) -> Result<Polygon> {
    let first = ords.iter().position(|v| !v.is_inf());
    let Some(first) = first else {
        return Err(Error::ZeroPolynomial);
    };
    let Val::Fin(_) = ords[first] else {
        return Err(Error::InsufficientPrecision);
    };
    // lower hull of the finite points
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for (s, v) in ords.iter().enumerate().skip(first) {
        let Val::Fin(y) = *v else { continue };
        let pt = (s as i64, y);
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it is on or above segment a–pt
            let cross = (b.0 - a.0) as i128 * (pt.1 - a.1) as i128 - (b.1 - a.1) as i128 * (pt.0 - a.0) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    // keep the negative-slope prefix
    let mut cut = 1;
    while cut < hull.len() && hull[cut].1 < hull[cut - 1].1 {
        cut += 1;
    }
    hull.truncate(cut);
    let mut sides = Vec::new();
    if first > 0 {
        sides.push(Side { slope: Slope::NegInf, start: (0, None), end: (first, hull[0].1) });
    }
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        sides.push(Side {
            slope: reduced_slope(b.0 - a.0, a.1 - b.1),
            start: (a.0 as usize, Some(a.1)),
            end: (b.0 as usize, b.1),
        });
    }
    let poly = Polygon { sides };
    // hidden points must stay clear of the polygon
    let (xe, ye) = *hull.last().unwrap();
    for (s, v) in ords.iter().enumerate() {
        let Val::AtLeast(lb) = *v else { continue };
        if s < first {
            return Err(Error::InsufficientPrecision);
        }
        if s as i64 >= xe {
            if lb < ye || (s as i64 == xe) {
                return Err(Error::InsufficientPrecision);
            }
            continue;
        }
        if !strictly_above(&hull, s as i64, lb) {
            return Err(Error::InsufficientPrecision);
        }
    }
    Ok(poly)
}

fn strictly_above(hull: &[(i64, i64)], s: i64, y: i64) -> bool {
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        if s >= a.0 && s <= b.0 {
            // y > a.y + (b.y - a.y)(s - a.x)/(b.x - a.x)
            let lhs = y as i128 * (b.0 - a.0) as i128;
            let rhs = a.1 as i128 * (b.0 - a.0) as i128 + (b.1 - a.1) as i128 * (s - a.0) as i128;
            return lhs > rhs;
        }
    }
    true
}

/// Sides of slope less than −h.
pub fn cut_polygon(n: &Polygon, h: i64) -> Polygon {
    let sides = n
        .sides
        .iter()
        .take_while(|s| match s.slope {
            Slope::NegInf => true,
            Slope::Finite { .. } => s.height().unwrap() > h * s.len() as i64,
        })
        .cloned()
        .collect();
    Polygon { sides }
}

/// Lattice points (a, b), 1 ≤ a < ℓ, strictly above the right end and on or
/// under the polygon after the shear (a, b) ↦ (a, b + cs·a).
pub fn polygon_index(n: &Polygon, cs: i64) -> Val {
    let l = n.length();
    if l == 0 {
        return Val::Fin(0);
    }
    if let Some(first) = n.sides.first() {
        if first.slope == Slope::NegInf && first.len() >= 2 {
            return Val::Inf;
        }
    }
    let (_, ye) = n.right_end().unwrap();
    let base = ye + cs * l as i64;
    let mut count = 0i64;
    for a in 1..l {
        let Some(y) = n.floor_at(a) else { return Val::Inf };
        let c = y + cs * a as i64 - base;
        if c > 0 {
            count += c;
        }
    }
    Val::Fin(count)
}

/// Res^h(S, T) = min(E H', E' H) − h E E'.
pub fn res_of_sides(s: &Side, t: &Side, h: i64) -> Val {
    let (e1, e2) = (s.len() as i64, t.len() as i64);
    let a = t.height().map(|h2| e1 * h2);
    let b = s.height().map(|h1| e2 * h1);
    let m = match (a, b) {
        (None, None) => return Val::Inf,
        (Some(x), None) | (None, Some(x)) => x,
        (Some(x), Some(y)) => x.min(y),
    };
    Val::Fin(m - h * e1 * e2)
}

/// f_0⋯f_{i−1}·Σ_{S,T} Res^h(S, T) over the two cut polygons.
pub fn res_partial_polygons(fprod: u64, nf: &Polygon, ng: &Polygon, h: i64) -> Val {
    let mut total = 0i64;
    for s in &nf.sides {
        for t in &ng.sides {
            match res_of_sides(s, t, h) {
                Val::Fin(v) => total += v,
                _ => return Val::Inf,
            }
        }
    }
    Val::Fin(total * fprod as i64)
}

/// Expansion coefficients a_0..a_ω of a polynomial w.r.t. the top φ of a type,
/// their polygon ordinates and principal polygon.
#[derive(Debug, Clone)]
pub struct NewtonData {
    pub coeffs: Vec<PIntPoly>,
    pub ords: Vec<Val>,
    pub polygon: Polygon,
}

/// Newton data of `g` w.r.t. the top representative of `t`, restricted to [0, ω].
pub fn newton_data(t: &OMType, omega: usize, g: &WorkPoly) -> Result<NewtonData> {
    let i = t.order() + 1;
    let phi = &t.top.phi;
    let exp = g.expand(phi, Some(omega))?;
    let mut coeffs = exp.coeffs;
    coeffs.resize(omega + 1, PIntPoly::zero().with_precision(g.working().precision()));
    let mut exact: Option<Vec<PIntPoly>> = None;
    let mut ords = Vec::with_capacity(omega + 1);
    for (s, a) in coeffs.iter().enumerate() {
        let mut v = t.value(i, a);
        if a.is_zero() && !a.is_exact() {
            if exact.is_none() {
                exact = Some(g.expand_exact(phi, Some(omega))?.coeffs);
            }
            if exact.as_ref().unwrap().get(s).is_none_or(|c| c.is_zero()) {
                v = Val::Inf;
            }
        }
        ords.push(v.add_int(s as i64 * t.top.v));
    }
    let polygon = polygon_from_points(&ords)?;
    Ok(NewtonData { coeffs, ords, polygon })
}

/// Principal polygon of an exact polynomial over [0, ω].
pub fn build_polygon(t: &OMType, omega: usize, g: &PIntPoly) -> Result<Polygon> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(newton_data(t, omega, &WorkPoly::new(g, t.p, None))?.polygon)
}

/// Residual polynomial R_i of the λ-component, λ = −h/e, over F_{order+1}.
pub fn residual_polynomial(t: &OMType, data: &NewtonData, h: i64, e: i64) -> Result<FFPoly> {
    let i = t.order() + 1;
    let line: Vec<Option<i64>> = data
        .ords
        .iter()
        .enumerate()
        .map(|(s, v)| v.fin().map(|y| e * y + s as i64 * h))
        .collect();
    let Some(min) = line.iter().flatten().copied().min() else {
        return Err(Error::ZeroPolynomial);
    };
    for (s, v) in data.ords.iter().enumerate() {
        if let Val::AtLeast(lb) = v {
            if e * lb + s as i64 * h <= min {
                return Err(Error::InsufficientPrecision);
            }
        }
    }
    let on: Vec<usize> = (0..line.len()).filter(|&s| line[s] == Some(min)).collect();
    let (s0, s1) = (on[0], *on.last().unwrap());
    let tw = &t.tower;
    let mut coeffs = vec![tw.zero(i); (s1 - s0) / e as usize + 1];
    for &s in &on {
        let v = data.ords[s].fin().map(|y| y - s as i64 * t.top.v);
        coeffs[(s - s0) / e as usize] = t.residue_with_value(i, &data.coeffs[s], v);
    }
    Ok(FFPoly::new(i, coeffs))
}

/// Partial resultant of f and g at the top of a type with lengths ω, α and cutting slope h.
pub fn res_partial(t: &OMType, omega: usize, alpha: usize, f: &PIntPoly, g: &PIntPoly, h: i64) -> Result<Val> {
    let nf = cut_polygon(&build_polygon(t, omega, f)?, h);
    let ng = cut_polygon(&build_polygon(t, alpha, g)?, h);
    Ok(res_partial_polygons(t.f_product(), &nf, &ng, h))
}
