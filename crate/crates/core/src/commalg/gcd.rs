//! Bivariate GCD in `Q[x,y]` by the subresultant remainder sequence over
//! `Q[x][y]`, with the content in `x` handled separately.

use num_traits::Zero;

use super::{xy_vars, CommMonomial, CommPoly, UniPoly};
use crate::commalg::uni::euclid_gcd;
use crate::error::{Error, Result};

/// Polynomial in `y` with coefficients in `Q[x]`, lowest power first.
type YPoly = Vec<UniPoly>;

fn trim(p: &mut YPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn to_ypoly(u: &CommPoly) -> YPoly {
    let mut out: YPoly = Vec::new();
    for (m, c) in u.terms() {
        let (ex, ey) = (m.0[0] as usize, m.0[1] as usize);
        if out.len() <= ey {
            out.resize(ey + 1, UniPoly::zero());
        }
        out[ey] = &out[ey] + &UniPoly::monomial(c.clone(), ex);
    }
    trim(&mut out);
    out
}

fn from_ypoly(p: &YPoly) -> CommPoly {
    let mut out = CommPoly::zero(xy_vars());
    for (ey, cx) in p.iter().enumerate() {
        for (ex, c) in cx.coeffs().iter().enumerate() {
            out.add_term(CommMonomial::from_exps(&[ex as u32, ey as u32]), c.clone());
        }
    }
    out
}

fn content(p: &YPoly) -> UniPoly {
    let mut g = UniPoly::zero();
    for c in p {
        if !c.is_zero() {
            g = if g.is_zero() { c.monic() } else { euclid_gcd(&g, c).unwrap() };
        }
    }
    g
}

fn div_coeffs(p: &YPoly, d: &UniPoly) -> YPoly {
    p.iter()
        .map(|c| {
            let (q, r) = c.div_rem(d);
            debug_assert!(r.is_zero(), "inexact coefficient division");
            q
        })
        .collect()
}

fn primitive_part(p: &YPoly) -> YPoly {
    let c = content(p);
    div_coeffs(p, &c)
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
fn prem(a: &YPoly, b: &YPoly) -> YPoly {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r = a.clone();
    let mut steps = (a.len() - 1) as i64 - db as i64 + 1;
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (i, c) in b.iter().enumerate() {
            r[k + i] = &r[k + i] - &(&lr * c);
        }
        r.pop();
        trim(&mut r);
        steps -= 1;
    }
    for _ in 0..steps.max(0) {
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
    }
    r
}

fn subresultant_last(mut a: YPoly, mut b: YPoly) -> YPoly {
    let mut g = UniPoly::one();
    let mut h = UniPoly::one();
    loop {
        let delta = (a.len() - b.len()) as u32;
        let r = prem(&a, &b);
        if r.is_empty() {
            return b;
        }
        if r.len() == 1 {
            return r;
        }
        let divisor = &g * &h.pow(delta);
        a = b;
        b = div_coeffs(&r, &divisor);
        g = a.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            let num = g.pow(delta);
            let den = h.pow(delta - 1);
            num.div_rem(&den).0
        };
    }
}

/// GCD of two elements of `K[x,y]`, scaled to be monic under lex order
/// with `x > y`.
pub fn bivariate_gcd(u: &CommPoly, v: &CommPoly) -> Result<CommPoly> {
    let u = u.align(&xy_vars())?;
    let v = v.align(&xy_vars())?;
    if u.is_zero() && v.is_zero() {
        return Err(Error::GcdOfZero);
    }
    if u.is_zero() {
        return Ok(v.monic_lex());
    }
    if v.is_zero() {
        return Ok(u.monic_lex());
    }
    let (a, b) = (to_ypoly(&u), to_ypoly(&v));
    let c = euclid_gcd(&content(&a), &content(&b))?;
    let (mut pa, mut pb) = (primitive_part(&a), primitive_part(&b));
    if pa.len() < pb.len() {
        std::mem::swap(&mut pa, &mut pb);
    }
    let g = if pb.len() <= 1 {
        vec![UniPoly::one()]
    } else {
        let last = subresultant_last(pa, pb);
        if last.len() <= 1 {
            vec![UniPoly::one()]
        } else {
            primitive_part(&last)
        }
    };
    let g: YPoly = g.iter().map(|coef| &coef.clone() * &c).collect();
    let out = from_ypoly(&g);
    debug_assert!(!out.terms().any(|(_, c)| c.is_zero()));
    Ok(out.monic_lex())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn x() -> CommPoly {
        CommPoly::x()
    }
    fn y() -> CommPoly {
        CommPoly::y()
    }

    #[test]
    fn examples() {
        let two_xy = (&x() * &y()).scale(&int(2));
        assert_eq!(bivariate_gcd(&two_xy, &x().pow(2).unwrap()).unwrap(), x());
        assert_eq!(
            bivariate_gcd(&(&x() + &y()), &(&x() - &y())).unwrap(),
            CommPoly::one(xy_vars())
        );
        let zero = CommPoly::zero(xy_vars());
        assert_eq!(bivariate_gcd(&zero, &y().pow(2).unwrap()).unwrap(), y().pow(2).unwrap());
        assert_eq!(bivariate_gcd(&zero, &zero), Err(Error::GcdOfZero));
    }

    #[test]
    fn common_nontrivial_factor() {
        // (x + y^2 + 1) * (x - y) and (x + y^2 + 1) * (x*y + 3)
        let f = &(&x() + &y().pow(2).unwrap()) + &CommPoly::one(xy_vars());
        let a = &f * &(&x() - &y());
        let b = &f * &(&(&x() * &y()) + &CommPoly::constant(int(3), xy_vars()));
        assert_eq!(bivariate_gcd(&a, &b).unwrap(), f);
        // content in x only
        let c = &x() + &CommPoly::constant(int(2), xy_vars());
        let a2 = &c * &(&y().pow(3).unwrap() - &x());
        let b2 = &(&c * &c) * &y();
        assert_eq!(bivariate_gcd(&a2, &b2).unwrap(), c);
        assert!(bivariate_gcd(&a2, &b2).unwrap().terms().all(|(_, c)| !c.is_zero()));
    }
}
