use std::fmt;

use num_traits::Zero;

use super::{AutWord, ElementaryAut, XyAlgebra};
use crate::commalg::UniPoly;
use crate::error::Result;
use crate::scalar::Scalar;

/// `rho_n tau ... tau rho_1 tau rho_0`, stored as `rhos[0] = rho_0`. Every
/// `rho_i` is in triangular form; for `i >= 1` it is `(x + p_i(y), y)` with
/// `p_i(0) = 0`, and interior factors are nonaffine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplifiedForm {
    rhos: Vec<ElementaryAut>,
}

impl SimplifiedForm {
    /// Number of `tau` factors.
    pub fn n(&self) -> usize {
        self.rhos.len() - 1
    }

    pub fn rhos(&self) -> &[ElementaryAut] {
        &self.rhos
    }

    pub fn to_word(&self) -> AutWord {
        let mut factors = Vec::new();
        for (k, r) in self.rhos.iter().enumerate().rev() {
            if !r.is_identity() || self.rhos.len() == 1 {
                factors.push(r.clone());
            }
            if k > 0 {
                factors.push(ElementaryAut::tau());
            }
        }
        AutWord::new(factors)
    }

    pub fn apply<A: XyAlgebra>(&self, u: &A) -> Result<A> {
        self.to_word().apply(u)
    }

    pub fn is_identity(&self) -> bool {
        self.n() == 0 && self.rhos[0].is_identity()
    }
}

impl fmt::Display for SimplifiedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_word())
    }
}

#[derive(Clone, Debug)]
enum Syl {
    B(ElementaryAut),
    Tau,
}

/// `phi = B1 . tau . B2` for an affine map outside `B`.
fn bruhat(e: &ElementaryAut) -> (ElementaryAut, ElementaryAut) {
    let ElementaryAut::Affine { a, c, e: e0, b, d, f } = e else {
        unreachable!("bruhat on a non-affine map")
    };
    let det = a * d - c * b;
    let b1 = ElementaryAut::shear(UniPoly::new(vec![Scalar::zero(), d / b]));
    let b2 = ElementaryAut::Triangular {
        alpha: -det / b,
        p: UniPoly::new(vec![e0.clone(), a.clone()]),
        beta: b.clone(),
        eta: f.clone(),
    };
    (b1, b2)
}

fn push(stack: &mut Vec<Syl>, s: Syl) {
    match s {
        Syl::B(e) => {
            if let Some(Syl::B(prev)) = stack.last() {
                let merged = prev.compose_triangular(&e);
                stack.pop();
                push(stack, Syl::B(merged));
                return;
            }
            if e.is_identity() {
                return;
            }
            stack.push(Syl::B(e));
        }
        Syl::Tau => {
            match stack.last() {
                Some(Syl::Tau) => {
                    stack.pop();
                    return;
                }
                Some(Syl::B(c)) if c.is_affine() && matches!(stack.get(stack.len().wrapping_sub(2)), Some(Syl::Tau)) => {
                    // tau c tau = (beta x + eta, p1 x + alpha y + p0)
                    let Some(ElementaryAut::Triangular { alpha, p, beta, eta }) = c.to_triangular() else {
                        unreachable!()
                    };
                    stack.pop();
                    stack.pop();
                    let conj = ElementaryAut::Affine {
                        a: beta,
                        c: Scalar::zero(),
                        e: eta,
                        b: p.coeff(1),
                        d: alpha,
                        f: p.coeff(0),
                    };
                    for s in expand(&conj) {
                        push(stack, s);
                    }
                    return;
                }
                _ => {}
            }
            stack.push(Syl::Tau);
        }
    }
}

fn expand(e: &ElementaryAut) -> Vec<Syl> {
    if e.is_tau() {
        vec![Syl::Tau]
    } else if let Some(t) = e.to_triangular() {
        vec![Syl::B(t)]
    } else {
        let (b1, b2) = bruhat(e);
        vec![Syl::B(b1), Syl::Tau, Syl::B(b2)]
    }
}

/// Reduced alternating form with interior factors normalized to
/// `(x + p(y), y)`, `p(0) = 0`.
pub fn to_simplified(phi: &AutWord) -> SimplifiedForm {
    let mut stack: Vec<Syl> = Vec::new();
    for e in &phi.factors {
        for s in expand(e) {
            push(&mut stack, s);
        }
    }
    // Written order is rho_n first; collect the B slots between taus.
    let mut rhos_written: Vec<ElementaryAut> = vec![ElementaryAut::identity()];
    for s in stack {
        match s {
            Syl::B(e) => *rhos_written.last_mut().unwrap() = e,
            Syl::Tau => rhos_written.push(ElementaryAut::identity()),
        }
    }
    let mut rhos: Vec<ElementaryAut> = rhos_written.into_iter().rev().collect();
    for i in (1..rhos.len()).rev() {
        let Some(ElementaryAut::Triangular { alpha, p, beta, eta }) = rhos[i].to_triangular() else {
            unreachable!()
        };
        let p0 = p.coeff(0);
        let normalized = &p - &UniPoly::constant(p0.clone());
        rhos[i] = ElementaryAut::shear(normalized.scale(&alpha.recip()));
        // (alpha x + p0, beta y + eta) . tau = tau . (beta x + eta, alpha y + p0)
        let swapped = ElementaryAut::diag_translate(beta, eta, alpha, p0);
        rhos[i - 1] = swapped.compose_triangular(&rhos[i - 1]);
    }
    for r in rhos.iter_mut() {
        *r = r.to_triangular().unwrap();
    }
    debug_assert!(rhos.iter().all(|r| !r.theta().is_zero()));
    SimplifiedForm { rhos }
}
