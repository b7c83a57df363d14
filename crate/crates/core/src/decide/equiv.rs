use std::ops::ControlFlow;

use super::case1::case1_decide;
use super::engine::{descend, meet, solve, two_sided, Eigen, Found, Free, Setting};
use super::sequences::{for_each_sequence, EndShape};
use super::{verify_witness, Certificate, Verdict};
use crate::autgroup::{to_simplified, AutWord};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::freealg::{v_membership, FreePoly};

const TRACE_SEQUENCES: usize = 32;

/// Decides whether `v = phi(u)` for an automorphism `phi` of `K<x,y>`.
pub fn equiv_decide(u: &FreePoly, v: &FreePoly, budget: &Budget) -> Certificate {
    match (v_membership(u), v_membership(v)) {
        (Some(l), Some(m)) => case1_decide(&l, &m),
        (Some(_), None) | (None, Some(_)) => {
            Certificate::new(Verdict::NotEquivalent, vec!["exactly one element lies in V".into()])
        }
        (None, None) => equiv_generic::<Free>(u, v, budget),
    }
}

/// Shorter equivalent word when the simplified form still verifies.
pub(crate) fn tidy<S: Setting>(phi: AutWord, u: &S::Poly, v: &S::Poly) -> AutWord {
    let s = to_simplified(&phi).to_word();
    let s = AutWord::new(s.factors.into_iter().filter(|f| !f.is_identity()).collect());
    if s.factors.len() < phi.factors.len() && verify_witness(&s, u, v) {
        s
    } else {
        phi
    }
}

pub(crate) fn unknown_on(err: Error, mut trace: Vec<String>) -> Certificate {
    trace.push(match err {
        Error::Budget(m) => format!("budget exhausted: {m}"),
        e => format!("stopped: {e}"),
    });
    Certificate::new(Verdict::Unknown, trace)
}

pub(crate) fn equiv_generic<S: Setting>(u: &S::Poly, v: &S::Poly, budget: &Budget) -> Certificate {
    let mut trace = Vec::new();
    match equiv_run::<S>(u, v, budget, &mut trace) {
        Ok(c) => c,
        Err(e) => unknown_on(e, trace),
    }
}

fn equiv_run<S: Setting>(u: &S::Poly, v: &S::Poly, budget: &Budget, trace: &mut Vec<String>) -> Result<Certificate> {
    let (du, um) = descend::<S>(u, budget, trace, "u")?;
    let (dv, vm) = descend::<S>(v, budget, trace, "v")?;
    let a = S::level(&um).ok_or_else(|| Error::Internal("descent left the complement of V".into()))?;
    let b = S::level(&vm).ok_or_else(|| Error::Internal("descent left the complement of V".into()))?;
    let around = |mid: AutWord| AutWord::new([dv.invert().factors, mid.factors, du.factors.clone()].concat());

    if a == b {
        if let Some((w, ideal)) = meet::<S>(&um, &vm, a, budget, trace)? {
            if let Some(w) = w {
                let phi = around(w);
                if verify_witness(&phi, u, v) {
                    let phi = tidy::<S>(phi, u, v);
                    return Ok(Certificate::new(Verdict::Equivalent, trace.clone()).with_witness(phi));
                }
                return Err(Error::Internal("meet produced a map that fails verification".into()));
            }
            trace.push("witnesses are Dv^-1 . phi . Du for phi in the ideal".into());
            return Ok(Certificate::new(Verdict::Equivalent, trace.clone()).with_ideal(ideal.unwrap()));
        }
    }

    let mut examined = 0usize;
    for n in 0..=a + b {
        for shape in EndShape::ALL {
            let r = for_each_sequence(a, b, n, shape, &mut |seq| {
                let step = (|| -> Result<Option<Certificate>> {
                    budget.charge_seq()?;
                    examined += 1;
                    if examined <= TRACE_SEQUENCES {
                        trace.push(format!("sequence {seq}"));
                    }
                    let sys = two_sided::<S>(&um, &vm, &seq, Eigen::None)?.expect("plain systems always exist");
                    match solve(&sys.system, budget)? {
                        None => Ok(None),
                        Some(Found::Point(p)) => {
                            let phi = around(sys.witness(&p)?);
                            if !verify_witness(&phi, u, v) {
                                return Err(Error::Internal(format!("witness of {seq} fails verification")));
                            }
                            trace.push(format!("solved at sequence {seq}"));
                            let phi = tidy::<S>(phi, u, v);
                            Ok(Some(Certificate::new(Verdict::Equivalent, trace.clone()).with_witness(phi)))
                        }
                        Some(Found::Closure(s)) => {
                            trace.push(format!("solvable over the closure at sequence {seq}"));
                            Ok(Some(Certificate::new(Verdict::Equivalent, trace.clone()).with_ideal(s)))
                        }
                    }
                })();
                match step {
                    Ok(None) => ControlFlow::Continue(()),
                    Ok(Some(c)) => ControlFlow::Break(Ok(c)),
                    Err(e) => ControlFlow::Break(Err(e)),
                }
            });
            if let ControlFlow::Break(r) = r {
                return r;
            }
        }
    }
    trace.push(format!("all {examined} degree sequences from {a} to {b} are unsolvable"));
    Ok(Certificate::new(Verdict::NotEquivalent, trace.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgroup::ElementaryAut;
    use crate::commalg::UniPoly;
    use crate::freealg::Word;
    use crate::scalar::int;

    fn budget() -> Budget {
        Budget::new(5_000, 2_000_000, Some(std::time::Duration::from_secs(120)))
    }

    #[test]
    fn case1_example() {
        let c = FreePoly::commutator_xy();
        let r = equiv_decide(&c, &c.scale(&int(2)), &budget());
        assert_eq!(r.verdict, Verdict::Equivalent);
        assert!(verify_witness(r.witness.as_ref().unwrap(), &c, &c.scale(&int(2))));
    }

    #[test]
    fn shear_example() {
        let x = FreePoly::x();
        let v = &x + &FreePoly::y().pow(2);
        let r = equiv_decide(&x, &v, &budget());
        assert_eq!(r.verdict, Verdict::Equivalent, "{r}");
        let w = r.witness.unwrap();
        assert!(verify_witness(&w, &x, &v));
        assert_eq!(w.factors, vec![ElementaryAut::shear(UniPoly::from_ints(&[0, 0, 1]))]);
    }

    #[test]
    fn affine_meet_with_large_constants() {
        let u = crate::freealg::FreePoly::from_terms([
            (Word::parse("xxx"), int(-1)),
            (Word::parse("xyy"), int(-1)),
            (Word::parse("yxx"), int(-1)),
            (Word::parse("y"), int(3)),
        ]);
        let phi = AutWord::single(
            ElementaryAut::affine(int(-12), int(-14), int(19), int(8), int(-4), int(10)).unwrap(),
        );
        let v = phi.apply(&u).unwrap();
        let r = equiv_decide(&u, &v, &Budget::new(100, 100_000, Some(std::time::Duration::from_secs(10))));
        assert_eq!(r.verdict, Verdict::Equivalent, "{r}");
        assert!(verify_witness(r.witness.as_ref().unwrap(), &u, &v));
    }

    #[test]
    fn x_and_x_squared() {
        let x = FreePoly::x();
        let r = equiv_decide(&x, &x.pow(2), &budget());
        assert_eq!(r.verdict, Verdict::NotEquivalent, "{r}");
    }

    #[test]
    fn one_side_in_v() {
        let r = equiv_decide(&FreePoly::x(), &FreePoly::commutator_xy(), &budget());
        assert_eq!(r.verdict, Verdict::NotEquivalent);
    }
}
