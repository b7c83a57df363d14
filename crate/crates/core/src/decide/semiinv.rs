use std::ops::ControlFlow;

use super::case1::case1_semiinv;
use super::engine::{descend, solve, two_sided, Builder, Chain, Eigen, Found, Free, Setting, Spec};
use super::equiv::{tidy, unknown_on};
use super::sequences::{for_each_sequence, EndShape};
use super::{verify_witness, Certificate, Verdict};
use crate::autgroup::{AutWord, XyAlgebra};
use crate::budget::Budget;
use crate::commalg::CommPoly;
use crate::error::{Error, Result};
use crate::freealg::{v_membership, FreePoly};
use crate::param::param_var;
use crate::scalar::{fmt_scalar, Scalar};

/// Decides whether `u` is a semiinvariant of a nontrivial automorphism of
/// `K<x,y>`.
pub fn semiinv_decide(u: &FreePoly, budget: &Budget) -> Result<Certificate> {
    if u.is_zero() {
        return Err(Error::ZeroElement);
    }
    if let Some(lam) = v_membership(u) {
        return Ok(case1_semiinv(&lam));
    }
    Ok(semiinv_generic::<Free>(u, budget))
}

pub(crate) fn semiinv_generic<S: Setting>(u: &S::Poly, budget: &Budget) -> Certificate {
    let mut trace = Vec::new();
    match semiinv_run::<S>(u, budget, &mut trace) {
        Ok(c) => c,
        Err(e) => unknown_on(e, trace),
    }
}

fn is_identity<S: Setting>(phi: &AutWord) -> bool {
    let (ix, iy) = phi.images::<S::Poly>();
    ix == S::Poly::gen_x() && iy == S::Poly::gen_y()
}

/// Accepts `phi` when it is nontrivial and `phi u = lam u`.
fn accept<S: Setting>(phi: AutWord, lam: &Scalar, u: &S::Poly) -> Option<AutWord> {
    let target = u.scaled(lam);
    if is_identity::<S>(&phi) || !verify_witness(&phi, u, &target) {
        return None;
    }
    Some(tidy::<S>(phi, u, &target))
}

fn semiinv_run<S: Setting>(u: &S::Poly, budget: &Budget, trace: &mut Vec<String>) -> Result<Certificate> {
    let (d, um) = descend::<S>(u, budget, trace, "u")?;
    let a = S::level(&um).ok_or_else(|| Error::Internal("descent left the complement of V".into()))?;
    let around = |mid: AutWord| AutWord::new([d.invert().factors, mid.factors, d.factors.clone()].concat());
    let one = Scalar::from_integer(1.into());

    let chains = [
        vec![Spec::Triangular(0, a)],
        vec![Spec::Affine(0)],
        vec![Spec::Tau, Spec::Triangular(0, a), Spec::Tau],
    ];
    for specs in &chains {
        for eigen in [Eigen::NotOne, Eigen::OneNontrivial] {
            budget.check_time()?;
            let chain = Chain::new(specs, if eigen == Eigen::NotOne { &["lam"] } else { &[] });
            let base = S::lift(&um, &chain.params);
            let img = chain.apply(&base);
            let mut b = Builder::new(&chain.params);
            b.nonzero(chain.nondegeneracy());
            if eigen == Eigen::NotOne {
                let lam = param_var("lam", &chain.params);
                b.equal(&img, &base.scale(&lam));
                b.nonzero(lam.clone());
                b.nonzero(&lam - &CommPoly::one(chain.params.clone()));
            } else {
                b.equal(&img, &base);
                b.not_all_zero(&chain.deviation::<S::M>(), "id");
            }
            match solve(&b.finish()?, budget)? {
                None => {}
                Some(Found::Point(p)) => {
                    let lam = if eigen == Eigen::NotOne { chain.value("lam", &p) } else { one.clone() };
                    if let Some(phi) = accept::<S>(around(chain.specialize(&p)?), &lam, u) {
                        trace.push(format!("stabilizing form with {} factor(s) at level {a}", specs.len()));
                        return Ok(Certificate::new(Verdict::Semiinvariant, trace.clone())
                            .with_witness(phi)
                            .with_lambda(fmt_scalar(&lam)));
                    }
                }
                Some(Found::Closure(s)) => {
                    trace.push("solvable over the closure only; witnesses are D^-1 . phi . D".into());
                    return Ok(Certificate::new(Verdict::Semiinvariant, trace.clone()).with_ideal(s));
                }
            }
        }
    }

    let mut examined = 0usize;
    for n in 1..=2 * a {
        for shape in EndShape::ALL {
            let r = for_each_sequence(a, a, n, shape, &mut |seq| {
                let step = (|| -> Result<Option<Certificate>> {
                    for eigen in [Eigen::NotOne, Eigen::OneNontrivial] {
                        budget.charge_seq()?;
                        examined += 1;
                        let Some(sys) = two_sided::<S>(&um, &um, &seq, eigen)? else { continue };
                        match solve(&sys.system, budget)? {
                            None => {}
                            Some(Found::Point(p)) => {
                                let lam = sys.lambda(&p).unwrap_or_else(|| one.clone());
                                if let Some(phi) = accept::<S>(around(sys.witness(&p)?), &lam, u) {
                                    trace.push(format!("solved at sequence {seq}"));
                                    return Ok(Some(
                                        Certificate::new(Verdict::Semiinvariant, trace.clone())
                                            .with_witness(phi)
                                            .with_lambda(fmt_scalar(&lam)),
                                    ));
                                }
                            }
                            Some(Found::Closure(s)) => {
                                trace.push(format!("solvable over the closure at sequence {seq}"));
                                return Ok(Some(Certificate::new(Verdict::Semiinvariant, trace.clone()).with_ideal(s)));
                            }
                        }
                    }
                    Ok(None)
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
    trace.push(format!("no stabilizing form among {examined} systems up to length {}", 2 * a));
    Ok(Certificate::new(Verdict::NotSemiinvariant, trace.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgroup::random_tame;
    use crate::scalar::int;

    fn budget() -> Budget {
        Budget::new(5_000, 2_000_000, Some(std::time::Duration::from_secs(120)))
    }

    fn check(u: &FreePoly) {
        let c = semiinv_decide(u, &budget()).unwrap();
        assert_eq!(c.verdict, Verdict::Semiinvariant, "{c}");
        let lam: Scalar = c.lambda.as_deref().unwrap().parse().unwrap();
        assert!(verify_witness(c.witness.as_ref().unwrap(), u, &u.scale(&lam)));
    }

    #[test]
    fn x_is_semiinvariant() {
        check(&FreePoly::x());
    }

    #[test]
    fn commutator_square() {
        let c = semiinv_decide(&FreePoly::commutator_xy().pow(2), &budget()).unwrap();
        assert_eq!(c.lambda.as_deref(), Some("theta^2"));
    }

    #[test]
    fn conjugated_x() {
        for seed in 0..3 {
            let psi = random_tame(seed, 2, 2, 3);
            check(&psi.invert().apply(&FreePoly::x()).unwrap());
        }
    }

    #[test]
    fn zero_is_rejected() {
        assert!(matches!(semiinv_decide(&FreePoly::zero(), &budget()), Err(Error::ZeroElement)));
        let _ = int(0);
    }
}
