//! Polynomials in `x`, `y` whose coefficients are polynomials in unknown
//! parameters, and automorphism templates with unknown coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::autgroup::ElementaryAut;
use crate::commalg::{xy_vars, CommMonomial, CommPoly, UniPoly, Vars};
use crate::error::{Error, Result};
use crate::freealg::{BasisExpander, CommBasisTerm, FreePoly, Letter, Word};
use crate::scalar::Scalar;

/// Monomials in `x`, `y`: words for the free algebra, exponent pairs for
/// the polynomial algebra.
pub trait XyMonomial: Ord + Clone + Hash + Debug {
    fn unit() -> Self;
    fn letter(l: Letter) -> Self;
    fn concat(&self, other: &Self) -> Self;
    fn letters(&self) -> Vec<Letter>;
    fn degree_x(&self) -> usize;
    fn degree_y(&self) -> usize;
    fn degree(&self) -> usize {
        self.degree_x() + self.degree_y()
    }
    fn swap(&self) -> Self {
        let mut out = Self::unit();
        for l in self.letters() {
            out = out.concat(&Self::letter(l.swap()));
        }
        out
    }
}

impl XyMonomial for Word {
    fn unit() -> Self {
        Word::empty()
    }
    fn letter(l: Letter) -> Self {
        Word::letter(l)
    }
    fn concat(&self, other: &Self) -> Self {
        Word::concat(self, other)
    }
    fn letters(&self) -> Vec<Letter> {
        Word::letters(self).collect()
    }
    fn degree_x(&self) -> usize {
        self.count_x()
    }
    fn degree_y(&self) -> usize {
        self.count_y()
    }
}

/// `x^a y^b` in `K[x,y]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CommWord(pub u32, pub u32);

impl XyMonomial for CommWord {
    fn unit() -> Self {
        CommWord(0, 0)
    }
    fn letter(l: Letter) -> Self {
        match l {
            Letter::X => CommWord(1, 0),
            Letter::Y => CommWord(0, 1),
        }
    }
    fn concat(&self, other: &Self) -> Self {
        CommWord(self.0 + other.0, self.1 + other.1)
    }
    fn letters(&self) -> Vec<Letter> {
        let mut v = vec![Letter::X; self.0 as usize];
        v.extend(std::iter::repeat(Letter::Y).take(self.1 as usize));
        v
    }
    fn degree_x(&self) -> usize {
        self.0 as usize
    }
    fn degree_y(&self) -> usize {
        self.1 as usize
    }
}

/// Polynomial in `x`, `y` with coefficients in `K[params]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPoly<M: XyMonomial> {
    params: Vars,
    terms: BTreeMap<M, CommPoly>,
}

pub type ParamFreePoly = ParamPoly<Word>;
pub type ParamCommPoly = ParamPoly<CommWord>;

impl<M: XyMonomial> ParamPoly<M> {
    pub fn zero(params: Vars) -> Self {
        ParamPoly { params, terms: BTreeMap::new() }
    }

    pub fn monomial(m: M, c: CommPoly, params: &Vars) -> Self {
        let mut p = Self::zero(params.clone());
        p.add_term(m, c);
        p
    }

    pub fn constant(c: CommPoly, params: &Vars) -> Self {
        Self::monomial(M::unit(), c, params)
    }

    pub fn gen(l: Letter, params: &Vars) -> Self {
        Self::monomial(M::letter(l), CommPoly::one(params.clone()), params)
    }

    pub fn params(&self) -> &Vars {
        &self.params
    }

    pub fn terms(&self) -> impl Iterator<Item = (&M, &CommPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &M) -> CommPoly {
        self.terms.get(m).cloned().unwrap_or_else(|| CommPoly::zero(self.params.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn add_term(&mut self, m: M, c: CommPoly) {
        if c.is_zero() {
            return;
        }
        let c = c.align(&self.params).expect("coefficient outside the parameter list");
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.params.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.concat(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &CommPoly) -> Self {
        let mut out = Self::zero(self.params.clone());
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// Re-expresses coefficients over a larger parameter list.
    pub fn with_params(&self, params: &Vars) -> Result<Self> {
        let mut out = Self::zero(params.clone());
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c.align(params)?);
        }
        Ok(out)
    }

    pub fn swap_letters(&self) -> Self {
        let mut out = Self::zero(self.params.clone());
        for (m, c) in &self.terms {
            out.add_term(m.swap(), c.clone());
        }
        out
    }

    /// `u(ix, iy)`, memoizing the images of word prefixes.
    pub fn substitute(&self, ix: &Self, iy: &Self) -> Self {
        let mut cache: HashMap<Vec<Letter>, Self> = HashMap::new();
        let mut out = Self::zero(self.params.clone());
        for (m, c) in &self.terms {
            let letters = m.letters();
            let img = prefix_image(&letters, ix, iy, &self.params, &mut cache);
            for (m2, c2) in &img.terms {
                out.add_term(m2.clone(), c * c2);
            }
        }
        out
    }

    /// Substitutes each coefficient's parameters by the given rational
    /// values (indexed like `params`).
    pub fn specialize_coeffs(&self, values: &[(usize, Scalar)]) -> Self {
        let mut out = Self::zero(self.params.clone());
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.specialize(values));
        }
        out
    }

    /// Coefficients of the monomials of degree above `target`, which must
    /// all vanish for the polynomial to have degree at most `target`.
    pub fn coefficients_above(&self, target: usize) -> Vec<CommPoly> {
        self.terms.iter().filter(|(m, _)| m.degree() > target).map(|(_, c)| c.clone()).collect()
    }
}

fn prefix_image<M: XyMonomial>(
    letters: &[Letter],
    ix: &ParamPoly<M>,
    iy: &ParamPoly<M>,
    params: &Vars,
    cache: &mut HashMap<Vec<Letter>, ParamPoly<M>>,
) -> ParamPoly<M> {
    if letters.is_empty() {
        return ParamPoly::constant(CommPoly::one(params.clone()), params);
    }
    if let Some(p) = cache.get(letters) {
        return p.clone();
    }
    let n = letters.len();
    let head = prefix_image(&letters[..n - 1], ix, iy, params, cache);
    let img = match letters[n - 1] {
        Letter::X => head.mul(ix),
        Letter::Y => head.mul(iy),
    };
    cache.insert(letters.to_vec(), img.clone());
    img
}

fn concrete_point(values: &[Scalar]) -> Vec<(usize, Scalar)> {
    values.iter().cloned().enumerate().collect()
}

fn constant_value(c: &CommPoly) -> Result<Scalar> {
    if c.is_constant() {
        Ok(c.constant_term())
    } else {
        Err(Error::Internal(format!("coefficient {c} is not fully specialized")))
    }
}

impl ParamPoly<Word> {
    pub fn lift(u: &FreePoly, params: &Vars) -> Self {
        let mut out = Self::zero(params.clone());
        for (w, c) in u.terms() {
            out.add_term(w.clone(), CommPoly::constant(c.clone(), params.clone()));
        }
        out
    }

    /// Evaluates every parameter; `values` is indexed like `params`.
    pub fn specialize(&self, values: &[Scalar]) -> Result<FreePoly> {
        let pt = concrete_point(values);
        let mut out = FreePoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), constant_value(&c.specialize(&pt))?);
        }
        Ok(out)
    }

    /// Coefficients in the commutator basis.
    pub fn basis_form(&self, expander: &mut BasisExpander) -> BTreeMap<CommBasisTerm, CommPoly> {
        let mut out: BTreeMap<CommBasisTerm, CommPoly> = BTreeMap::new();
        for (w, c) in &self.terms {
            for (t, n) in expander.expand_word(w).iter() {
                let k = Scalar::from_integer((*n).into());
                let e = out.entry(t.clone()).or_insert_with(|| CommPoly::zero(self.params.clone()));
                *e = &*e + &c.scale(&k);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Conditions for the class modulo `V` to have degree at most `target`:
    /// every non-commutator-power basis coefficient above `target` vanishes.
    pub fn excess_equations(&self, target: usize, expander: &mut BasisExpander) -> Vec<CommPoly> {
        self.basis_form(expander)
            .into_iter()
            .filter(|(t, _)| t.degree() > target && !t.is_commutator_power())
            .map(|(_, c)| c)
            .collect()
    }
}

impl ParamPoly<CommWord> {
    pub fn lift(u: &CommPoly, params: &Vars) -> Result<Self> {
        let u = u.align(&xy_vars())?;
        let mut out = Self::zero(params.clone());
        for (m, c) in u.terms() {
            out.add_term(CommWord(m.0[0], m.0[1]), CommPoly::constant(c.clone(), params.clone()));
        }
        Ok(out)
    }

    pub fn specialize(&self, values: &[Scalar]) -> Result<CommPoly> {
        let pt = concrete_point(values);
        let mut out = CommPoly::zero(xy_vars());
        for (m, c) in &self.terms {
            out.add_term(CommMonomial::from_exps(&[m.0, m.1]), constant_value(&c.specialize(&pt))?);
        }
        Ok(out)
    }
}

/// Automorphism with unknown coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamAut {
    /// `(a x + c y + e, b x + d y + f)`
    Affine { a: CommPoly, c: CommPoly, e: CommPoly, b: CommPoly, d: CommPoly, f: CommPoly },
    /// `(alpha x + sum p[k] y^k, beta y + eta)`; `require_nonaffine` marks
    /// the top coefficient of `p` as required nonzero.
    Triangular { alpha: CommPoly, p: Vec<CommPoly>, beta: CommPoly, eta: CommPoly, require_nonaffine: bool },
    Tau,
}

/// Deterministic parameter names.
pub mod names {
    pub fn xi(j: usize) -> String {
        format!("xi{j}")
    }
    pub fn xi_p(j: usize) -> String {
        format!("xi{j}p")
    }
    pub fn xi_pp(j: usize) -> String {
        format!("xi{j}pp")
    }
    pub fn eta(j: usize) -> String {
        format!("eta{j}")
    }
    pub fn eta_p(j: usize) -> String {
        format!("eta{j}p")
    }
    pub fn eta_pp(j: usize) -> String {
        format!("eta{j}pp")
    }
    pub fn omega(j: usize, k: usize) -> String {
        format!("om{j}_{k}")
    }
    pub fn theta(s: usize) -> String {
        format!("th{s}")
    }
}

/// Collects parameter names in allocation order.
#[derive(Clone, Debug, Default)]
pub struct ParamSpace {
    names: Vec<String>,
}

impl ParamSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: &str) -> usize {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return i;
        }
        self.names.push(name.to_string());
        self.names.len() - 1
    }

    /// Names of an affine template `j` in slot order `a c e b d f`.
    pub fn add_affine(&mut self, j: usize) -> [String; 6] {
        let n = [
            names::xi(j),
            names::xi_p(j),
            names::xi_pp(j),
            names::eta_pp(j),
            names::eta(j),
            names::eta_p(j),
        ];
        n.iter().for_each(|s| {
            self.add(s);
        });
        n
    }

    /// Names `alpha, beta, eta, p_0..p_bound` of a triangular template `j`.
    pub fn add_triangular(&mut self, j: usize, bound: usize) -> (String, String, String, Vec<String>) {
        let (a, b, e) = (names::xi(j), names::eta(j), names::eta_p(j));
        self.add(&a);
        self.add(&b);
        self.add(&e);
        let ps: Vec<String> = (0..=bound).map(|k| names::omega(j, k)).collect();
        ps.iter().for_each(|s| {
            self.add(s);
        });
        (a, b, e, ps)
    }

    pub fn vars(&self) -> Vars {
        Arc::new(self.names.clone())
    }
}

pub fn param_var(name: &str, params: &Vars) -> CommPoly {
    let i = params.iter().position(|n| n == name).unwrap_or_else(|| panic!("unknown parameter {name}"));
    CommPoly::var(i, params.clone())
}

impl ParamAut {
    pub fn affine_named(n: &[String; 6], params: &Vars) -> Self {
        let v = |i: usize| param_var(&n[i], params);
        ParamAut::Affine { a: v(0), c: v(1), e: v(2), b: v(3), d: v(4), f: v(5) }
    }

    pub fn triangular_named(
        alpha: &str,
        beta: &str,
        eta: &str,
        p: &[String],
        require_nonaffine: bool,
        params: &Vars,
    ) -> Self {
        ParamAut::Triangular {
            alpha: param_var(alpha, params),
            p: p.iter().map(|n| param_var(n, params)).collect(),
            beta: param_var(beta, params),
            eta: param_var(eta, params),
            require_nonaffine,
        }
    }

    /// `(x + sum p[k] y^k, y)` with the given coefficient slots.
    pub fn shear(p: Vec<CommPoly>, params: &Vars, require_nonaffine: bool) -> Self {
        ParamAut::Triangular {
            alpha: CommPoly::one(params.clone()),
            p,
            beta: CommPoly::one(params.clone()),
            eta: CommPoly::zero(params.clone()),
            require_nonaffine,
        }
    }

    /// A concrete map viewed as a template.
    pub fn from_concrete(e: &ElementaryAut, params: &Vars) -> Self {
        let k = |c: &Scalar| CommPoly::constant(c.clone(), params.clone());
        if e.is_tau() {
            return ParamAut::Tau;
        }
        match e {
            ElementaryAut::Affine { a, c, e, b, d, f } => {
                ParamAut::Affine { a: k(a), c: k(c), e: k(e), b: k(b), d: k(d), f: k(f) }
            }
            ElementaryAut::Triangular { alpha, p, beta, eta } => ParamAut::Triangular {
                alpha: k(alpha),
                p: p.coeffs().iter().map(k).collect(),
                beta: k(beta),
                eta: k(eta),
                require_nonaffine: false,
            },
        }
    }

    pub fn images<M: XyMonomial>(&self, params: &Vars) -> (ParamPoly<M>, ParamPoly<M>) {
        let x = ParamPoly::<M>::gen(Letter::X, params);
        let y = ParamPoly::<M>::gen(Letter::Y, params);
        let one = ParamPoly::<M>::constant(CommPoly::one(params.clone()), params);
        let lin = |a: &CommPoly, c: &CommPoly, e: &CommPoly| x.scale(a).add(&y.scale(c)).add(&one.scale(e));
        match self {
            ParamAut::Tau => (y.clone(), x.clone()),
            ParamAut::Affine { a, c, e, b, d, f } => (lin(a, c, e), lin(b, d, f)),
            ParamAut::Triangular { alpha, p, beta, eta, .. } => {
                let mut ix = x.scale(alpha);
                let mut ypow = one.clone();
                for pk in p {
                    ix = ix.add(&ypow.scale(pk));
                    ypow = ypow.mul(&y);
                }
                let zero = CommPoly::zero(params.clone());
                (ix, lin(&zero, beta, eta))
            }
        }
    }

    pub fn apply<M: XyMonomial>(&self, u: &ParamPoly<M>) -> ParamPoly<M> {
        if *self == ParamAut::Tau {
            return u.swap_letters();
        }
        let (ix, iy) = self.images::<M>(u.params());
        u.substitute(&ix, &iy)
    }

    /// Slots that must be nonzero for the template to be an automorphism
    /// of the intended kind.
    pub fn nonzero_factors(&self) -> Vec<CommPoly> {
        match self {
            ParamAut::Tau => Vec::new(),
            ParamAut::Affine { a, c, b, d, .. } => vec![&(a * d) - &(c * b)],
            ParamAut::Triangular { alpha, p, beta, require_nonaffine, .. } => {
                let mut v = vec![alpha.clone(), beta.clone()];
                if *require_nonaffine {
                    if let Some(top) = p.last() {
                        v.push(top.clone());
                    }
                }
                v
            }
        }
    }

    /// Concrete map at a point of the parameter space.
    pub fn specialize(&self, values: &[Scalar]) -> Result<ElementaryAut> {
        let pt = concrete_point(values);
        let v = |c: &CommPoly| constant_value(&c.specialize(&pt));
        match self {
            ParamAut::Tau => Ok(ElementaryAut::tau()),
            ParamAut::Affine { a, c, e, b, d, f } => ElementaryAut::affine(v(a)?, v(c)?, v(e)?, v(b)?, v(d)?, v(f)?),
            ParamAut::Triangular { alpha, p, beta, eta, .. } => {
                let coeffs = p.iter().map(v).collect::<Result<Vec<_>>>()?;
                ElementaryAut::triangular(v(alpha)?, UniPoly::new(coeffs), v(beta)?, v(eta)?)
            }
        }
    }
}

/// Product of every slot that must be nonzero; `1` for no templates.
pub fn nondegeneracy(templates: &[ParamAut], params: &Vars) -> CommPoly {
    let mut out = CommPoly::one(params.clone());
    for t in templates {
        for f in t.nonzero_factors() {
            out = &out * &f.align(params).expect("template outside the parameter list");
        }
    }
    out
}

/// Equations `Delta_q = 0` with the fresh unknowns they introduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equations {
    pub vars: Vars,
    pub equations: Vec<CommPoly>,
    pub thetas: Vec<(usize, String)>,
}

/// For each degree `s` with `target < s <= cap`: unbalanced words get
/// coefficient `0`, and the balanced component is matched against
/// `theta_s [x,y]^(s/2)` with a fresh unknown per degree.
pub fn extract_equations(
    w: &ParamFreePoly,
    target_qdeg: usize,
    hard_cap: usize,
    namer: &dyn Fn(usize) -> String,
) -> Result<Equations> {
    if let Some((m, _)) = w.terms().find(|(m, _)| m.len() > hard_cap) {
        return Err(Error::Internal(format!("word of degree {} above cap {hard_cap}", m.len())));
    }
    let mut names = w.params().as_ref().clone();
    let mut thetas = Vec::new();
    let balanced: Vec<usize> = (target_qdeg + 1..=hard_cap)
        .filter(|s| s % 2 == 0 && w.terms().any(|(m, _)| m.len() == *s && 2 * m.count_x() == *s))
        .collect();
    for &s in &balanced {
        let n = namer(s);
        if names.contains(&n) {
            return Err(Error::Internal(format!("fresh name {n} already in use")));
        }
        names.push(n.clone());
        thetas.push((s, n));
    }
    let vars: Vars = Arc::new(names);
    let w = w.with_params(&vars)?;
    let mut eqs = Vec::new();
    for (m, c) in w.terms() {
        let s = m.len();
        if s > target_qdeg && 2 * m.count_x() != s {
            eqs.push(c.clone());
        }
    }
    let c = FreePoly::commutator_xy();
    for (s, name) in &thetas {
        let th = param_var(name, &vars);
        let cp = c.pow((*s / 2) as u32);
        let mut words: Vec<Word> = w.terms().filter(|(m, _)| m.len() == *s && 2 * m.count_x() == *s).map(|(m, _)| m.clone()).collect();
        words.extend(cp.terms().map(|(m, _)| m.clone()));
        words.sort();
        words.dedup();
        for m in words {
            let e = &w.coeff(&m) - &th.scale(&cp.coeff(&m));
            if !e.is_zero() {
                eqs.push(e);
            }
        }
    }
    Ok(Equations { vars, equations: eqs, thetas })
}

pub fn default_theta_name(s: usize) -> String {
    names::theta(s)
}

/// A rational point of the parameter space as named assignments.
pub fn assignment(params: &Vars, values: &[Scalar]) -> Vec<(String, Scalar)> {
    params.iter().cloned().zip(values.iter().cloned()).collect()
}

pub fn zero_point(params: &Vars) -> Vec<Scalar> {
    vec![Scalar::zero(); params.len()]
}

pub fn one_scalar() -> Scalar {
    Scalar::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgroup::AutWord;
    use crate::freealg::quotient_degrees;
    use crate::groebner::{solvable, AlgebraicSystem};
    use crate::scalar::int;
    use proptest::prelude::*;

    fn space_affine_b() -> (Vars, ParamAut) {
        let mut sp = ParamSpace::new();
        for n in ["xi0", "xi0p", "xi0pp", "eta0", "eta0p"] {
            sp.add(n);
        }
        let v = sp.vars();
        let z = CommPoly::zero(v.clone());
        let t = ParamAut::Affine {
            a: param_var("xi0", &v),
            c: param_var("xi0p", &v),
            e: param_var("xi0pp", &v),
            b: z,
            d: param_var("eta0", &v),
            f: param_var("eta0p", &v),
        };
        (v, t)
    }

    #[test]
    fn apply_examples() {
        let (v, t) = space_affine_b();
        let u = ParamFreePoly::lift(&FreePoly::x(), &v);
        let img = t.apply(&u);
        let expect = ParamFreePoly::gen(Letter::X, &v)
            .scale(&param_var("xi0", &v))
            .add(&ParamFreePoly::gen(Letter::Y, &v).scale(&param_var("xi0p", &v)))
            .add(&ParamFreePoly::constant(param_var("xi0pp", &v), &v));
        assert_eq!(img, expect);
        let w = ParamFreePoly::lift(&(&FreePoly::x() * &FreePoly::y()), &v).scale(&param_var("eta0", &v));
        assert_eq!(ParamAut::Tau.apply(&w), ParamFreePoly::lift(&(&FreePoly::y() * &FreePoly::x()), &v).scale(&param_var("eta0", &v)));

        let mut sp = ParamSpace::new();
        let (a, b, e, ps) = sp.add_triangular(1, 2);
        let v = sp.vars();
        let mut t = ParamAut::triangular_named(&a, &b, &e, &ps, true, &v);
        if let ParamAut::Triangular { p, eta, .. } = &mut t {
            p[0] = CommPoly::zero(v.clone());
            *eta = CommPoly::zero(v.clone());
        }
        let img = t.apply(&ParamFreePoly::lift(&FreePoly::x(), &v));
        let y = ParamFreePoly::gen(Letter::Y, &v);
        let expect = ParamFreePoly::gen(Letter::X, &v)
            .scale(&param_var("xi1", &v))
            .add(&y.mul(&y).scale(&param_var("om1_2", &v)))
            .add(&y.scale(&param_var("om1_1", &v)));
        assert_eq!(img, expect);
    }

    fn delta_space() -> (Vars, CommPoly, CommPoly) {
        let mut sp = ParamSpace::new();
        sp.add("d");
        sp.add("dp");
        let v = sp.vars();
        (v.clone(), param_var("d", &v), param_var("dp", &v))
    }

    #[test]
    fn extract_examples() {
        let (v, d, dp) = delta_space();
        let w = ParamFreePoly::monomial(Word::parse("xy"), d.clone(), &v)
            .add(&ParamFreePoly::monomial(Word::parse("yx"), dp.clone(), &v));
        let eq = extract_equations(&w, 1, 2, &default_theta_name).unwrap();
        assert_eq!(eq.thetas, vec![(2, "th2".to_string())]);
        let th = param_var("th2", &eq.vars);
        let (d2, dp2) = (d.align(&eq.vars).unwrap(), dp.align(&eq.vars).unwrap());
        assert_eq!(eq.equations, vec![&d2 - &th, &dp2 + &th]);

        let w = ParamFreePoly::monomial(Word::parse("xxy"), d.clone(), &v);
        let eq = extract_equations(&w, 2, 3, &default_theta_name).unwrap();
        assert_eq!(eq.equations, vec![d.align(&eq.vars).unwrap()]);

        let w = ParamFreePoly::monomial(Word::parse("x"), d.clone(), &v);
        assert!(extract_equations(&w, 1, 1, &default_theta_name).unwrap().equations.is_empty());

        let w = ParamFreePoly::monomial(Word::parse("xxy"), d, &v);
        assert!(matches!(extract_equations(&w, 1, 2, &default_theta_name), Err(Error::Internal(_))));
    }

    #[test]
    fn nondegeneracy_examples() {
        let mut sp = ParamSpace::new();
        let (a, b, e, ps) = sp.add_triangular(1, 2);
        let v = sp.vars();
        let t = ParamAut::triangular_named(&a, &b, &e, &ps, true, &v);
        let expect = &(&param_var("xi1", &v) * &param_var("eta1", &v)) * &param_var("om1_2", &v);
        assert_eq!(nondegeneracy(&[t], &v), expect);

        let mut sp = ParamSpace::new();
        let n = sp.add_affine(0);
        let v = sp.vars();
        let t = ParamAut::affine_named(&n, &v);
        let det = &(&param_var("xi0", &v) * &param_var("eta0", &v)) - &(&param_var("xi0p", &v) * &param_var("eta0pp", &v));
        assert_eq!(nondegeneracy(&[t], &v), det);
        assert_eq!(nondegeneracy(&[], &v), CommPoly::one(v.clone()));
    }

    fn small_template() -> (Vars, ParamAut) {
        // (x + a y^2 + b y, y + c)
        let mut sp = ParamSpace::new();
        for n in ["a", "b", "c"] {
            sp.add(n);
        }
        let v = sp.vars();
        let one = CommPoly::one(v.clone());
        let z = CommPoly::zero(v.clone());
        let t = ParamAut::Triangular {
            alpha: one.clone(),
            p: vec![z, param_var("b", &v), param_var("a", &v)],
            beta: one,
            eta: param_var("c", &v),
            require_nonaffine: false,
        };
        (v, t)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn specialization_commutes(vals in prop::collection::vec(-3i64..=3, 3), word in prop::collection::vec(any::<bool>(), 0..5)) {
            let (v, t) = small_template();
            let w = Word::from_letters(word.into_iter().map(|b| if b { Letter::Y } else { Letter::X }));
            let u = &FreePoly::monomial(w, int(1)) + &FreePoly::x();
            let pt: Vec<Scalar> = vals.iter().map(|&k| int(k)).collect();
            let via_template = t.apply(&ParamFreePoly::lift(&u, &v)).specialize(&pt).unwrap();
            let concrete = AutWord::single(t.specialize(&pt).unwrap()).apply(&u).unwrap();
            prop_assert_eq!(via_template, concrete);
        }
    }

    /// Grid oracle: the equations hold (for some theta) exactly at the
    /// parameter points where the concrete image has small quotient degree.
    #[test]
    fn extract_matches_brute_force() {
        let (v, t) = small_template();
        let u = &(&FreePoly::x() * &FreePoly::y()) + &(&FreePoly::y() * &FreePoly::x());
        let tau_t = [ParamAut::Tau, t.clone()];
        let image = tau_t.iter().rev().fold(ParamFreePoly::lift(&u, &v), |acc, r| r.apply(&acc));
        let cap = image.degree().unwrap();
        for target in [2usize, 3, 4] {
            let eq = extract_equations(&image, target, cap, &default_theta_name).unwrap();
            let mut exp = BasisExpander::new();
            let excess = image.excess_equations(target, &mut exp);
            let grid = [-1i64, 0, 1, 2];
            for &a in &grid {
                for &b in &grid {
                    for &c in &grid {
                        let pt = vec![int(a), int(b), int(c)];
                        let concrete = AutWord::new(vec![ElementaryAut::tau(), t.specialize(&pt).unwrap()]).apply(&u).unwrap();
                        let small = quotient_degrees(&concrete).map(|d| d.qdeg <= target).unwrap_or(true);
                        let assign: Vec<(usize, Scalar)> = pt.iter().cloned().enumerate().collect();
                        let spec: Vec<CommPoly> = eq.equations.iter().map(|e| e.specialize(&assign)).collect();
                        let sys = AlgebraicSystem::new(eq.vars.clone(), spec, None).unwrap();
                        prop_assert_eq_helper(small, solvable(&sys), (a, b, c, target));
                        let ex_ok = excess.iter().all(|e| e.eval(&pt).is_zero());
                        prop_assert_eq_helper(small, ex_ok, (a, b, c, target));
                    }
                }
            }
        }
    }

    fn prop_assert_eq_helper(a: bool, b: bool, ctx: (i64, i64, i64, usize)) {
        assert_eq!(a, b, "mismatch at {ctx:?}");
    }
}
