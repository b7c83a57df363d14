//! Elements of `V = span([x,y]^k)`: an automorphism with determinant
//! `omega` maps `sum lam_k [x,y]^k` to `sum lam_k omega^k [x,y]^k`.

use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Certificate, Verdict};
use crate::autgroup::{AutWord, ElementaryAut};
use crate::commalg::{euclid_gcd, vars_of, CommPoly, UniPoly};
use crate::groebner::{rational_roots, AlgebraicSystem};
use crate::scalar::{fmt_scalar, Scalar};

fn coeff(v: &[Scalar], k: usize) -> Scalar {
    v.get(k).cloned().unwrap_or_else(Scalar::zero)
}

/// `t_k(omega) = lam_k omega^k - mu_k`
fn t_k(lam: &[Scalar], mu: &[Scalar], k: usize) -> UniPoly {
    let mut c = vec![Scalar::zero(); k + 1];
    c[k] = coeff(lam, k);
    c[0] = &c[0] - &coeff(mu, k);
    UniPoly::new(c)
}

/// Strips the factor `omega` as often as it divides.
fn without_zero_root(p: &UniPoly) -> UniPoly {
    let c = p.coeffs();
    let skip = c.iter().take_while(|a| a.is_zero()).count();
    UniPoly::new(c[skip..].to_vec())
}

fn scaling(omega: &Scalar) -> AutWord {
    AutWord::single(ElementaryAut::diag_translate(Scalar::one(), Scalar::zero(), omega.clone(), Scalar::zero()))
}

/// Decides whether `sum mu_k [x,y]^k` is an image of `sum lam_k [x,y]^k`.
pub fn case1_decide(lam: &[Scalar], mu: &[Scalar]) -> Certificate {
    let top = lam.len().max(mu.len());
    let ts: Vec<(usize, UniPoly)> = (0..top)
        .map(|k| (k, t_k(lam, mu, k)))
        .filter(|(_, t)| !t.is_zero())
        .collect();
    let mut trace = vec!["case 1: both elements lie in V".to_string()];
    for (k, t) in &ts {
        trace.push(format!("t{k} = {}", t.fmt_in("w")));
    }
    if ts.is_empty() {
        trace.push("all t_k vanish; identity".into());
        return Certificate::new(Verdict::Equivalent, trace).with_witness(AutWord::identity()).with_lambda("1");
    }
    let mut g = UniPoly::zero();
    for (_, t) in &ts {
        g = euclid_gcd(&g, t).expect("nonzero input");
    }
    let g = without_zero_root(&g);
    trace.push(format!("gcd without zero root: {}", g.fmt_in("w")));
    if g.degree() == Some(0) {
        return Certificate::new(Verdict::NotEquivalent, trace);
    }
    match rational_roots(&g).into_iter().next() {
        Some(w) => {
            trace.push(format!("omega = {}", fmt_scalar(&w)));
            Certificate::new(Verdict::Equivalent, trace).with_witness(scaling(&w)).with_lambda(fmt_scalar(&w))
        }
        None => {
            let vars = vars_of(&["w"]);
            let eqs = ts.iter().map(|(_, t)| CommPoly::from_uni(t, 0, vars.clone())).collect();
            let sys = AlgebraicSystem::new(vars.clone(), eqs, Some(CommPoly::var(0, vars))).expect("single variable");
            trace.push("no rational omega; witnesses are (x, omega y) over the closure".into());
            Certificate::new(Verdict::Equivalent, trace).with_ideal(sys)
        }
    }
}

/// Semiinvariants inside `V`: `phi u = theta^k u` needs `theta^k` equal
/// for all `k` in the support, and `theta = 1` always works.
pub fn case1_semiinv(lam: &[Scalar]) -> Certificate {
    let support: Vec<usize> = (0..lam.len()).filter(|&k| !lam[k].is_zero()).collect();
    let mut trace = vec!["element lies in V; any automorphism with theta = 1 stabilizes it".to_string()];
    let translation = AutWord::single(ElementaryAut::diag_translate(Scalar::one(), Scalar::one(), Scalar::one(), Scalar::zero()));
    match support.as_slice() {
        [] | [0] => {
            trace.push("constant element".into());
            Certificate::new(Verdict::Semiinvariant, trace).with_witness(translation).with_lambda("1")
        }
        [k] => {
            let two = Scalar::from_integer(2.into());
            trace.push(format!("witness theta = 2 gives lambda = {}", fmt_scalar(&num_traits::pow(two.clone(), *k))));
            Certificate::new(Verdict::Semiinvariant, trace).with_witness(scaling(&two)).with_lambda(format!("theta^{k}"))
        }
        ks => {
            let g = ks.windows(2).fold(0usize, |acc, w| acc.gcd(&(w[1] - w[0])));
            trace.push(format!("admissible theta satisfy theta^{g} = 1"));
            Certificate::new(Verdict::Semiinvariant, trace)
                .with_witness(translation)
                .with_lambda(format!("theta^{}, theta^{g} = 1", ks[0]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::verify_witness;
    use crate::freealg::FreePoly;
    use crate::scalar::int;

    fn v_elem(l: &[i64]) -> FreePoly {
        let c = FreePoly::commutator_xy();
        l.iter().enumerate().fold(FreePoly::zero(), |acc, (k, &a)| &acc + &c.pow(k as u32).scale(&int(a)))
    }

    fn s(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&a| int(a)).collect()
    }

    #[test]
    fn examples() {
        let c = case1_decide(&s(&[0, 1, 3]), &s(&[0, 2, 12]));
        assert_eq!(c.verdict, Verdict::Equivalent);
        assert!(verify_witness(c.witness.as_ref().unwrap(), &v_elem(&[0, 1, 3]), &v_elem(&[0, 2, 12])));
        assert_eq!(c.witness.unwrap().factors[0], ElementaryAut::diag_translate(int(1), int(0), int(2), int(0)));

        assert_eq!(case1_decide(&s(&[0, 1]), &s(&[0, 1, 1])).verdict, Verdict::NotEquivalent);
        let c = case1_decide(&s(&[1, 0, 5]), &s(&[1, 0, 5]));
        assert_eq!(c.verdict, Verdict::Equivalent);
        assert!(verify_witness(c.witness.as_ref().unwrap(), &v_elem(&[1, 0, 5]), &v_elem(&[1, 0, 5])));
        assert_eq!(case1_decide(&[], &[]).witness, Some(AutWord::identity()));
    }

    #[test]
    fn zero_root_is_not_a_determinant() {
        assert_eq!(case1_decide(&s(&[0, 1]), &s(&[0, 0])).verdict, Verdict::NotEquivalent);
    }

    #[test]
    fn irrational_omega_gives_ideal() {
        let c = case1_decide(&s(&[0, 0, 1]), &s(&[0, 0, 2]));
        assert_eq!(c.verdict, Verdict::Equivalent);
        assert!(c.witness.is_none());
        assert!(c.ideal.is_some());
    }

    #[test]
    fn semiinvariants_in_v() {
        let c = case1_semiinv(&s(&[0, 0, 1]));
        assert_eq!(c.lambda.as_deref(), Some("theta^2"));
        let u = v_elem(&[0, 0, 1]);
        assert!(verify_witness(c.witness.as_ref().unwrap(), &u, &u.scale(&int(4))));
        let c = case1_semiinv(&s(&[1, 0, 1]));
        assert!(verify_witness(c.witness.as_ref().unwrap(), &v_elem(&[1, 0, 1]), &v_elem(&[1, 0, 1])));
    }
}
