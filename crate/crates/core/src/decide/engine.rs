//! Shared machinery of the drivers: parametric templates, system assembly,
//! degree descent, and the two-sided systems of a degree sequence.

use std::fmt;
use std::sync::Arc;

use super::sequences::DegreeSequence;
use crate::autgroup::{AutWord, ElementaryAut, XyAlgebra};
use crate::budget::Budget;
use crate::commalg::{xy_vars, CommPoly, Vars};
use crate::error::{Error, Result};
use crate::freealg::{quotient_degrees, FreePoly, Letter, Word};
use crate::groebner::{rational_point_with, AlgebraicSystem};
use crate::param::{
    extract_equations, names, nondegeneracy, param_var, CommWord, Equations, ParamAut, ParamPoly, ParamSpace,
    XyMonomial,
};
use crate::scalar::Scalar;

/// The algebra a driver works in.
pub(crate) trait Setting {
    type Poly: XyAlgebra + fmt::Display;
    type M: XyMonomial;

    /// Degree that automorphisms move along valleys: quotient degree in the
    /// free case, total degree in the polynomial case. `None` on the
    /// elements every automorphism fixes up to the determinant.
    fn level(u: &Self::Poly) -> Option<usize>;
    fn lift(u: &Self::Poly, params: &Vars) -> ParamPoly<Self::M>;
    /// Conditions for `level(p) <= target`, possibly with fresh unknowns.
    fn bound(p: &ParamPoly<Self::M>, target: usize, tag: &str) -> Result<Equations>;
}

pub(crate) struct Free;
pub(crate) struct Comm;

impl Setting for Free {
    type Poly = FreePoly;
    type M = Word;

    fn level(u: &FreePoly) -> Option<usize> {
        quotient_degrees(u).ok().map(|d| d.qdeg)
    }
    fn lift(u: &FreePoly, params: &Vars) -> ParamPoly<Word> {
        ParamPoly::<Word>::lift(u, params)
    }
    fn bound(p: &ParamPoly<Word>, target: usize, tag: &str) -> Result<Equations> {
        let cap = p.degree().unwrap_or(0).max(target);
        let tag = tag.to_string();
        extract_equations(p, target, cap, &move |s| format!("th{tag}_{s}"))
    }
}

impl Setting for Comm {
    type Poly = CommPoly;
    type M = CommWord;

    fn level(u: &CommPoly) -> Option<usize> {
        if u.is_constant() {
            None
        } else {
            u.total_degree().ok().map(|d| d as usize)
        }
    }
    fn lift(u: &CommPoly, params: &Vars) -> ParamPoly<CommWord> {
        ParamPoly::<CommWord>::lift(u, params).expect("polynomial in x and y")
    }
    fn bound(p: &ParamPoly<CommWord>, target: usize, _tag: &str) -> Result<Equations> {
        Ok(Equations { vars: p.params().clone(), equations: p.coefficients_above(target), thetas: Vec::new() })
    }
}

/// Collects equations over a growing list of unknowns.
pub(crate) struct Builder {
    params: Vars,
    extra: Vec<String>,
    eqs: Vec<CommPoly>,
    nonzero: Vec<CommPoly>,
}

impl Builder {
    pub(crate) fn new(params: &Vars) -> Self {
        Builder { params: params.clone(), extra: Vec::new(), eqs: Vec::new(), nonzero: Vec::new() }
    }

    fn current_vars(&self) -> Vars {
        let mut v = self.params.as_ref().clone();
        v.extend(self.extra.iter().cloned());
        Arc::new(v)
    }

    pub(crate) fn add(&mut self, e: Equations) {
        self.extra.extend(e.thetas.into_iter().map(|(_, n)| n));
        self.eqs.extend(e.equations);
    }

    pub(crate) fn equal<M: XyMonomial>(&mut self, a: &ParamPoly<M>, b: &ParamPoly<M>) {
        for (_, c) in a.sub(b).terms() {
            self.eqs.push(c.clone());
        }
    }

    pub(crate) fn nonzero(&mut self, f: CommPoly) {
        self.nonzero.push(f);
    }

    /// Not all of `fs` vanish: `sum f_i w_i = 1` with fresh `w_i`.
    pub(crate) fn not_all_zero(&mut self, fs: &[CommPoly], tag: &str) {
        let fs: Vec<&CommPoly> = fs.iter().filter(|f| !f.is_zero()).collect();
        let start = self.extra.len();
        for i in 0..fs.len() {
            self.extra.push(format!("w{tag}_{i}"));
        }
        let vars = self.current_vars();
        let mut sum = -&CommPoly::one(vars.clone());
        for (i, f) in fs.iter().enumerate() {
            let w = CommPoly::var(self.params.len() + start + i, vars.clone());
            sum = &sum + &(&f.align(&vars).expect("subset of unknowns") * &w);
        }
        self.eqs.push(sum);
    }

    pub(crate) fn finish(self) -> Result<AlgebraicSystem> {
        let vars = self.current_vars();
        let mut ineq: Option<CommPoly> = None;
        for f in &self.nonzero {
            let f = f.align(&vars)?;
            ineq = Some(match ineq {
                None => f,
                Some(g) => &g * &f,
            });
        }
        let eqs = self.eqs.iter().map(|e| e.align(&vars)).collect::<Result<Vec<_>>>()?;
        AlgebraicSystem::new(vars, eqs, ineq)
    }
}

/// A solvable system, with a rational point when one was found.
pub(crate) enum Found {
    Point(Vec<Scalar>),
    Closure(AlgebraicSystem),
}

pub(crate) fn solve(system: &AlgebraicSystem, budget: &Budget) -> Result<Option<Found>> {
    match rational_point_with(system, budget) {
        Ok(Some(p)) => Ok(Some(Found::Point(p))),
        Ok(None) => Ok(Some(Found::Closure(system.clone()))),
        Err(Error::NoSolution) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Shapes of parametric factors; `j` distinguishes parameter names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Spec {
    Tau,
    Affine(usize),
    /// `(alpha x + p(y), beta y + eta)`, `deg p <= bound`
    Triangular(usize, usize),
    /// `(x + c_1 y + ... + c_K y^K, y)`
    Shear(usize, usize),
    /// `(x + c y^k, y)` with `c != 0`
    TopShear(usize, usize),
    /// `(x + t y, y)`
    LinShear(usize),
}

impl Spec {
    fn register(&self, sp: &mut ParamSpace) {
        match *self {
            Spec::Tau => {}
            Spec::Affine(j) => {
                sp.add_affine(j);
            }
            Spec::Triangular(j, k) => {
                sp.add_triangular(j, k);
            }
            Spec::Shear(j, k) => (1..=k).for_each(|i| {
                sp.add(&names::omega(j, i));
            }),
            Spec::TopShear(j, k) => {
                sp.add(&names::omega(j, k));
            }
            Spec::LinShear(j) => {
                sp.add(&names::xi_p(j));
            }
        }
    }

    fn build(&self, params: &Vars) -> ParamAut {
        let zero = || CommPoly::zero(params.clone());
        let one = || CommPoly::one(params.clone());
        match *self {
            Spec::Tau => ParamAut::Tau,
            Spec::Affine(j) => {
                let n = [names::xi(j), names::xi_p(j), names::xi_pp(j), names::eta_pp(j), names::eta(j), names::eta_p(j)];
                ParamAut::affine_named(&n, params)
            }
            Spec::Triangular(j, k) => {
                let ps: Vec<String> = (0..=k).map(|i| names::omega(j, i)).collect();
                ParamAut::triangular_named(&names::xi(j), &names::eta(j), &names::eta_p(j), &ps, false, params)
            }
            Spec::Shear(j, k) => {
                let mut p = vec![zero()];
                p.extend((1..=k).map(|i| param_var(&names::omega(j, i), params)));
                ParamAut::shear(p, params, false)
            }
            Spec::TopShear(j, k) => {
                let mut p = vec![zero(); k];
                p.push(param_var(&names::omega(j, k), params));
                ParamAut::shear(p, params, true)
            }
            Spec::LinShear(j) => ParamAut::Affine {
                a: one(),
                c: param_var(&names::xi_p(j), params),
                e: zero(),
                b: zero(),
                d: one(),
                f: zero(),
            },
        }
    }
}

/// Parametric factors in written order, with their unknowns.
pub(crate) struct Chain {
    pub params: Vars,
    pub factors: Vec<ParamAut>,
}

impl Chain {
    pub(crate) fn new(specs: &[Spec], extra: &[&str]) -> Self {
        let mut sp = ParamSpace::new();
        specs.iter().for_each(|s| s.register(&mut sp));
        extra.iter().for_each(|n| {
            sp.add(n);
        });
        let params = sp.vars();
        let factors = specs.iter().map(|s| s.build(&params)).collect();
        Chain { params, factors }
    }

    pub(crate) fn apply<M: XyMonomial>(&self, u: &ParamPoly<M>) -> ParamPoly<M> {
        self.factors.iter().rev().fold(u.clone(), |acc, f| f.apply(&acc))
    }

    pub(crate) fn nondegeneracy(&self) -> CommPoly {
        nondegeneracy(&self.factors, &self.params)
    }

    /// Coefficients of `phi x - x` and `phi y - y`.
    pub(crate) fn deviation<M: XyMonomial>(&self) -> Vec<CommPoly> {
        let mut out = Vec::new();
        for l in [Letter::X, Letter::Y] {
            let g = ParamPoly::<M>::gen(l, &self.params);
            out.extend(self.apply(&g).sub(&g).terms().map(|(_, c)| c.clone()));
        }
        out
    }

    pub(crate) fn specialize(&self, values: &[Scalar]) -> Result<AutWord> {
        let v = &values[..self.params.len()];
        Ok(AutWord::new(self.factors.iter().map(|f| f.specialize(v)).collect::<Result<Vec<_>>>()?))
    }

    pub(crate) fn value(&self, name: &str, values: &[Scalar]) -> Scalar {
        let i = self.params.iter().position(|n| n == name).expect("known unknown");
        values[i].clone()
    }
}

/// A step lowering the level of `u` by a shear of the given degree,
/// possibly after a change of the distinguished direction.
fn descent_step<S: Setting>(u: &S::Poly, d: usize, budget: &Budget) -> Result<Option<AutWord>> {
    for k in 2..=d.max(2) {
        for with_tau in [false, true] {
            let specs: Vec<Spec> = if with_tau {
                vec![Spec::TopShear(1, k), Spec::Tau, Spec::LinShear(0)]
            } else {
                vec![Spec::TopShear(1, k)]
            };
            let chain = Chain::new(&specs, &[]);
            let img = chain.apply(&S::lift(u, &chain.params));
            let mut b = Builder::new(&chain.params);
            b.add(S::bound(&img, d - 1, "d")?);
            b.nonzero(chain.nondegeneracy());
            let sys = b.finish()?;
            if let Some(Found::Point(p)) = solve(&sys, budget)? {
                let w = chain.specialize(&p)?;
                let next = w.apply(u)?;
                if S::level(&next).is_some_and(|l| l < d) {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

/// Lowers the level greedily; returns `(D, D u)` with `D u` at a level no
/// single step lowers further.
pub(crate) fn descend<S: Setting>(u: &S::Poly, budget: &Budget, trace: &mut Vec<String>, label: &str) -> Result<(AutWord, S::Poly)> {
    let mut word = AutWord::identity();
    let mut cur = u.clone();
    let mut levels = Vec::new();
    while let Some(d) = S::level(&cur) {
        levels.push(d.to_string());
        if d <= 1 {
            break;
        }
        match descent_step::<S>(&cur, d, budget)? {
            Some(step) => {
                cur = step.apply(&cur)?;
                word = AutWord::compose(&step, &word);
            }
            None => break,
        }
    }
    trace.push(format!("descent of {label}: levels {}", levels.join(" -> ")));
    Ok((word, cur))
}

/// Meets two elements of the same minimal level by short template chains.
pub(crate) fn meet<S: Setting>(u: &S::Poly, v: &S::Poly, level: usize, budget: &Budget, trace: &mut Vec<String>) -> Result<Option<(Option<AutWord>, Option<AlgebraicSystem>)>> {
    let chains: [Vec<Spec>; 4] = [
        vec![Spec::Affine(0)],
        vec![Spec::Triangular(0, level)],
        vec![Spec::Affine(1), Spec::Triangular(0, level)],
        vec![Spec::Triangular(1, level), Spec::Affine(0)],
    ];
    for specs in chains {
        let chain = Chain::new(&specs, &[]);
        let img = chain.apply(&S::lift(u, &chain.params));
        let mut b = Builder::new(&chain.params);
        b.equal(&img, &S::lift(v, &chain.params));
        b.nonzero(chain.nondegeneracy());
        let sys = b.finish()?;
        budget.check_time()?;
        match solve(&sys, budget)? {
            Some(Found::Point(p)) => {
                trace.push(format!("meet at level {level} with {} factor(s)", specs.len()));
                return Ok(Some((Some(chain.specialize(&p)?), None)));
            }
            Some(Found::Closure(s)) => {
                trace.push(format!("meet at level {level} solvable over the closure only"));
                return Ok(Some((None, Some(s))));
            }
            None => {}
        }
    }
    Ok(None)
}

/// Parametric system of one degree sequence, with the data needed to turn
/// a solution back into an automorphism.
pub struct TwoSidedSystem {
    pub system: AlgebraicSystem,
    params: Vars,
    left: Vec<ParamAut>,
    right: Vec<ParamAut>,
    lambda: Option<usize>,
}

impl TwoSidedSystem {
    /// `sigma_n^-1 tau ... sigma_{m+1}^-1 tau rho_m tau ... tau rho_0`
    pub fn witness(&self, point: &[Scalar]) -> Result<AutWord> {
        let v = &point[..self.params.len()];
        let mut f = Vec::new();
        for s in self.right.iter().rev() {
            f.push(s.specialize(v)?.inverse());
            f.push(ElementaryAut::tau());
        }
        for (j, r) in self.left.iter().enumerate().rev() {
            f.push(r.specialize(v)?);
            if j > 0 {
                f.push(ElementaryAut::tau());
            }
        }
        Ok(AutWord::new(f))
    }

    pub fn lambda(&self, point: &[Scalar]) -> Option<Scalar> {
        self.lambda.map(|i| point[i].clone())
    }
}

fn spec_for(seq: &DegreeSequence, j: usize) -> Spec {
    let n = seq.n();
    let bound = seq.d(j as isize - 1).max(seq.d(j as isize));
    if n == 0 {
        return if seq.shape.start_affine { Spec::Affine(0) } else { Spec::Triangular(0, bound) };
    }
    if (j == 0 && seq.shape.start_affine) || (j == n && seq.shape.end_affine) {
        Spec::Affine(j)
    } else if j == 0 || j == n {
        Spec::Triangular(j, bound)
    } else {
        Spec::Shear(j, bound)
    }
}

/// Options for semiinvariant searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Eigen {
    /// Target is `v` itself.
    None,
    /// Target is `lam * v` with `lam != 0, 1`.
    NotOne,
    /// Target is `v`, and every interior shear is nonaffine.
    OneNontrivial,
}

pub(crate) fn two_sided<S: Setting>(u: &S::Poly, v: &S::Poly, seq: &DegreeSequence, eigen: Eigen) -> Result<Option<TwoSidedSystem>> {
    let (a, b) = (S::level(u), S::level(v));
    if a != Some(seq.start()) || b != Some(seq.end()) {
        return Err(Error::SequenceMismatch(format!(
            "levels {:?} and {:?} do not match sequence {seq}",
            a, b
        )));
    }
    let n = seq.n();
    let m = seq.valley;
    let specs: Vec<Spec> = (0..=n).map(|j| spec_for(seq, j)).collect();
    const LAM: &str = "lam";
    let lam_name = LAM;
    let chain = Chain::new(&specs, if eigen == Eigen::NotOne { &[LAM] } else { &[] });
    let params = chain.params.clone();
    let mut b = Builder::new(&params);

    let mut w = S::lift(u, &params);
    for j in 0..=m {
        if j > 0 {
            w = ParamAut::Tau.apply(&w);
        }
        w = chain.factors[j].apply(&w);
        if j < m {
            b.add(S::bound(&w, seq.d(j as isize), &format!("L{j}"))?);
        }
    }
    let mut z = S::lift(v, &params);
    let lambda = if eigen == Eigen::NotOne {
        let lam = param_var(lam_name, &params);
        z = z.scale(&lam);
        b.nonzero(lam.clone());
        b.nonzero(&lam - &CommPoly::one(params.clone()));
        Some(params.iter().position(|p| p == lam_name).unwrap())
    } else {
        None
    };
    for j in (m + 1..=n).rev() {
        z = chain.factors[j].apply(&z);
        z = ParamAut::Tau.apply(&z);
        if j - 1 > m {
            b.add(S::bound(&z, seq.d(j as isize - 1), &format!("R{}", j - 1))?);
        }
    }
    b.equal(&w, &z);
    b.nonzero(chain.nondegeneracy());
    if eigen == Eigen::OneNontrivial {
        if n < 2 {
            return Ok(None);
        }
        for j in 1..n {
            if let ParamAut::Triangular { p, .. } = &chain.factors[j] {
                if p.len() < 3 {
                    return Ok(None);
                }
                b.not_all_zero(&p[2..], &j.to_string());
            }
        }
    }
    let system = b.finish()?;
    let mut factors = chain.factors;
    let right = factors.split_off(m + 1);
    Ok(Some(TwoSidedSystem { system, params, left: factors, right, lambda }))
}

/// The two-sided system of a degree sequence for `K<x,y>`.
pub fn build_two_sided_system(u: &FreePoly, v: &FreePoly, seq: &DegreeSequence) -> Result<TwoSidedSystem> {
    Ok(two_sided::<Free>(u, v, seq, Eigen::None)?.expect("plain systems always exist"))
}

/// Plain `K[x,y]` polynomials used by the commutative drivers.
pub(crate) fn as_xy(u: &CommPoly) -> Result<CommPoly> {
    u.align(&xy_vars()).map_err(|_| Error::VariableMismatch(format!("expected variables x, y, got {:?}", u.vars())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::sequences::EndShape;
    use crate::decide::verify_witness;
    use crate::groebner::{rational_point, solvable};
    use crate::scalar::int;

    fn seq(values: &[usize], sa: bool, ea: bool) -> DegreeSequence {
        let inner = &values[1..values.len() - 1];
        let valley = if inner.is_empty() { 0 } else { inner.iter().position(|d| d == inner.iter().min().unwrap()).unwrap() };
        DegreeSequence { values: values.to_vec(), valley, shape: EndShape { start_affine: sa, end_affine: ea } }
    }

    fn witness_of(u: &FreePoly, v: &FreePoly, s: &DegreeSequence) -> AutWord {
        let t = build_two_sided_system(u, v, s).unwrap();
        assert!(solvable(&t.system));
        let p = rational_point(&t.system).unwrap().unwrap();
        t.witness(&p).unwrap()
    }

    #[test]
    fn identity_sequence() {
        let x = FreePoly::x();
        let w = witness_of(&x, &x, &seq(&[1, 1], true, true));
        assert!(verify_witness(&w, &x, &x));
    }

    #[test]
    fn tau_sequence() {
        let (x, y) = (FreePoly::x(), FreePoly::y());
        let w = witness_of(&x, &y, &seq(&[1, 1], true, true));
        assert!(verify_witness(&w, &x, &y));
        let w = witness_of(&x, &y, &seq(&[1, 1, 1], true, true));
        assert!(verify_witness(&w, &x, &y));
    }

    #[test]
    fn triangular_sequence() {
        let x = FreePoly::x();
        let v = &x + &FreePoly::y().pow(2);
        let w = witness_of(&x, &v, &seq(&[1, 2], false, false));
        assert!(verify_witness(&w, &x, &v));
    }

    #[test]
    fn mismatch_is_an_error() {
        let x = FreePoly::x();
        assert!(matches!(
            build_two_sided_system(&x, &x.pow(2), &seq(&[1, 1], true, true)),
            Err(Error::SequenceMismatch(_))
        ));
    }

    #[test]
    fn descent_reaches_linear() {
        let phi = AutWord::new(vec![
            ElementaryAut::shear(crate::commalg::UniPoly::from_ints(&[0, 1, 2])),
            ElementaryAut::tau(),
            ElementaryAut::shear(crate::commalg::UniPoly::from_ints(&[1, 0, -1])),
        ]);
        let v = phi.apply(&FreePoly::x()).unwrap();
        let mut tr = Vec::new();
        let (d, low) = descend::<Free>(&v, &Budget::unlimited(), &mut tr, "v").unwrap();
        assert_eq!(Free::level(&low), Some(1));
        assert_eq!(d.apply(&v).unwrap(), low);
        let _ = int(0);
    }
}
