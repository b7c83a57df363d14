//! Drivers for `K[x,y]`, where total degree plays the role of the quotient
//! degree and the constants play the role of `V`.

use std::fmt;

use super::engine::{as_xy, Comm};
use super::equiv::equiv_generic;
use super::semiinv::semiinv_generic;
use super::{Certificate, Verdict};
use crate::autgroup::{AutWord, ElementaryAut};
use crate::budget::Budget;
use crate::commalg::{bivariate_gcd, CommPoly};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, MonomialOrder};
use crate::scalar::Scalar;

pub fn comm_equiv_decide(u: &CommPoly, v: &CommPoly, budget: &Budget) -> Result<Certificate> {
    let (u, v) = (as_xy(u)?, as_xy(v)?);
    Ok(match (u.is_constant(), v.is_constant()) {
        (true, true) if u == v => Certificate::new(Verdict::Equivalent, vec!["equal constants".into()])
            .with_witness(AutWord::identity()),
        (true, true) => Certificate::new(Verdict::NotEquivalent, vec!["automorphisms fix constants".into()]),
        (true, false) | (false, true) => {
            Certificate::new(Verdict::NotEquivalent, vec!["exactly one element is constant".into()])
        }
        (false, false) => equiv_generic::<Comm>(&u, &v, budget),
    })
}

pub fn comm_semiinv_decide(u: &CommPoly, budget: &Budget) -> Result<Certificate> {
    let u = as_xy(u)?;
    if u.is_zero() {
        return Err(Error::ZeroElement);
    }
    if u.is_constant() {
        let t = ElementaryAut::diag_translate(Scalar::from_integer(1.into()), Scalar::from_integer(1.into()), Scalar::from_integer(1.into()), Scalar::from_integer(0.into()));
        return Ok(Certificate::new(Verdict::Semiinvariant, vec!["constants are fixed by every automorphism".into()])
            .with_witness(AutWord::single(t))
            .with_lambda("1"));
    }
    Ok(semiinv_generic::<Comm>(&u, budget))
}

/// Partial evidence from `gcd(u_x, u_y)`; never a decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeuristicReport {
    pub gcd: CommPoly,
    pub depends_on_x: bool,
    pub depends_on_y: bool,
    /// `u` is a polynomial in one variable, the shape of cases (ii) and (iii).
    pub single_variable: bool,
    /// `u_x / g` and `u_y / g` generate the unit ideal, as for `u = w(f)`
    /// with a coordinate `f` and `g = w'(f)`.
    pub coordinate_shape: bool,
    pub positive: bool,
}

impl fmt::Display for HeuristicReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "HEURISTIC: {}", if self.positive { "POSITIVE" } else { "NEGATIVE" })?;
        writeln!(f, "GCD: {}", self.gcd)?;
        writeln!(f, "SINGLE_VARIABLE: {}", self.single_variable)?;
        writeln!(f, "COORDINATE_SHAPE: {}", self.coordinate_shape)
    }
}

fn exact_div(a: &CommPoly, g: &CommPoly) -> Option<CommPoly> {
    let gb = buchberger(&[g.clone()], MonomialOrder::Lex);
    if !gb.reduce(a).is_zero() {
        return None;
    }
    let mut q = CommPoly::zero(a.vars().clone());
    let mut r = a.clone();
    let (lm, lc) = g.lex_leading().map(|(m, c)| (m.clone(), c.clone()))?;
    while let Some((m, c)) = r.lex_leading().map(|(m, c)| (m.clone(), c.clone())) {
        if !lm.divides(&m) {
            return None;
        }
        let t = m.div(&lm);
        let k = &c / &lc;
        q.add_term(t.clone(), k.clone());
        r = &r - &g.mul_monomial(&t, &k);
    }
    Some(q)
}

/// Looks at `g = gcd(u_x, u_y)` for the shapes of cases (ii) and (iii).
pub fn comm_semiinv_heuristic(u: &CommPoly) -> Result<HeuristicReport> {
    let u = as_xy(u)?;
    if u.is_constant() {
        return Err(Error::ConstantInput);
    }
    let (ux, uy) = u.partials();
    let g = match (ux.is_zero(), uy.is_zero()) {
        (true, _) => uy.monic_lex(),
        (_, true) => ux.monic_lex(),
        _ => bivariate_gcd(&ux, &uy)?,
    };
    let depends_on_x = !ux.is_zero();
    let depends_on_y = !uy.is_zero();
    let single_variable = !(depends_on_x && depends_on_y);
    let coordinate_shape = !g.is_constant()
        && match (exact_div(&ux, &g), exact_div(&uy, &g)) {
            (Some(fx), Some(fy)) => buchberger(&[fx, fy], MonomialOrder::DegRevLex).is_trivial(),
            _ => false,
        };
    Ok(HeuristicReport { gcd: g, depends_on_x, depends_on_y, single_variable, coordinate_shape, positive: single_variable || coordinate_shape })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::verify_witness;
    use crate::scalar::int;

    fn budget() -> Budget {
        Budget::new(5_000, 2_000_000, Some(std::time::Duration::from_secs(120)))
    }

    fn x() -> CommPoly {
        CommPoly::x()
    }
    fn y() -> CommPoly {
        CommPoly::y()
    }

    #[test]
    fn shear_example() {
        let v = &x() + &y().pow(3).unwrap();
        let c = comm_equiv_decide(&x(), &v, &budget()).unwrap();
        assert_eq!(c.verdict, Verdict::Equivalent, "{c}");
        assert!(verify_witness(c.witness.as_ref().unwrap(), &x(), &v));
    }

    #[test]
    fn round_trip_example() {
        let u = &x().pow(2).unwrap() * &y();
        let phi = AutWord::single(ElementaryAut::shear(crate::commalg::UniPoly::from_ints(&[0, 0, 1])));
        let v = phi.apply(&u).unwrap();
        let c = comm_equiv_decide(&u, &v, &budget()).unwrap();
        assert_eq!(c.verdict, Verdict::Equivalent, "{c}");
        assert!(verify_witness(c.witness.as_ref().unwrap(), &u, &v));
    }

    #[test]
    fn x_and_xy() {
        let c = comm_equiv_decide(&x(), &(&x() * &y()), &budget()).unwrap();
        assert_eq!(c.verdict, Verdict::NotEquivalent, "{c}");
    }

    #[test]
    fn constants() {
        let k = |a| CommPoly::constant(int(a), crate::commalg::xy_vars());
        assert_eq!(comm_equiv_decide(&k(2), &k(2), &budget()).unwrap().verdict, Verdict::Equivalent);
        assert_eq!(comm_equiv_decide(&k(2), &k(3), &budget()).unwrap().verdict, Verdict::NotEquivalent);
        assert_eq!(comm_semiinv_decide(&k(2), &budget()).unwrap().verdict, Verdict::Semiinvariant);
    }

    #[test]
    fn semiinvariant_x() {
        let c = comm_semiinv_decide(&x(), &budget()).unwrap();
        assert_eq!(c.verdict, Verdict::Semiinvariant);
        let lam: Scalar = c.lambda.as_deref().unwrap().parse().unwrap();
        assert!(verify_witness(c.witness.as_ref().unwrap(), &x(), &x().scale(&lam)));
    }

    #[test]
    fn heuristic_examples() {
        let r = comm_semiinv_heuristic(&(&y().pow(3).unwrap() + &y())).unwrap();
        assert!(r.single_variable && r.positive);
        let r = comm_semiinv_heuristic(&x().pow(2).unwrap().pow(3).unwrap()).unwrap();
        assert!(r.positive);
        assert_eq!(r.gcd, x().pow(5).unwrap());
        let r = comm_semiinv_heuristic(&(&x() + &y().pow(2).unwrap())).unwrap();
        assert!(!r.positive);
        assert!(r.gcd.is_constant());
        let f = &x() + &y().pow(2).unwrap();
        let r = comm_semiinv_heuristic(&(&f.pow(2).unwrap() + &f)).unwrap();
        assert!(r.coordinate_shape);
        assert!(matches!(comm_semiinv_heuristic(&CommPoly::constant(int(1), crate::commalg::xy_vars())), Err(Error::ConstantInput)));
    }
}
