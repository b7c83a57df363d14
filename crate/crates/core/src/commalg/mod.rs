//! Commutative polynomials with exact rational coefficients.
//!
//! [`CommPoly`] is used both for elements of `K[x,y]` and for polynomials in
//! the unknown coefficients of parametric automorphisms. Terms are kept in a
//! sorted map under graded lexicographic order, so no stored coefficient is
//! ever zero.

mod gcd;
mod uni;

pub use gcd::bivariate_gcd;
pub use uni::{euclid_gcd, UniPoly};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

pub type Vars = Arc<Vec<String>>;

pub fn vars_of(names: &[&str]) -> Vars {
    Arc::new(names.iter().map(|s| s.to_string()).collect())
}

/// The variable list `(x, y)`.
pub fn xy_vars() -> Vars {
    thread_local! {
        static XY: Vars = vars_of(&["x", "y"]);
    }
    XY.with(|v| v.clone())
}

/// Exponent vector indexed by the ambient variable list.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CommMonomial(pub SmallVec<[u32; 4]>);

impl CommMonomial {
    pub fn one(n: usize) -> Self {
        CommMonomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        m.0[i] = 1;
        m
    }

    pub fn from_exps(e: &[u32]) -> Self {
        CommMonomial(SmallVec::from_slice(e))
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        CommMonomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Self) -> Self {
        CommMonomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }

    fn lex_cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl Ord for CommMonomial {
    /// Graded lexicographic: total degree first, then exponents left to right.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for CommMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct CommPoly {
    vars: Vars,
    terms: BTreeMap<CommMonomial, Scalar>,
}

impl PartialEq for CommPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = align_pair(self, other);
        a.terms == b.terms
    }
}

impl Eq for CommPoly {}

/// Result of [`CommPoly::degree_calculus`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeInfo {
    pub total_degree: u32,
    pub deg_x: u32,
    pub deg_y: u32,
    pub leading_form: CommPoly,
    pub biased: bool,
}

impl CommPoly {
    pub fn zero(vars: Vars) -> Self {
        CommPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar, vars: Vars) -> Self {
        let mut p = Self::zero(vars);
        let n = p.nvars();
        p.add_term(CommMonomial::one(n), c);
        p
    }

    pub fn one(vars: Vars) -> Self {
        Self::constant(Scalar::one(), vars)
    }

    pub fn var(i: usize, vars: Vars) -> Self {
        let n = vars.len();
        assert!(i < n, "variable index out of range");
        let mut p = Self::zero(vars);
        p.add_term(CommMonomial::var(n, i), Scalar::one());
        p
    }

    pub fn x() -> Self {
        Self::var(0, xy_vars())
    }

    pub fn y() -> Self {
        Self::var(1, xy_vars())
    }

    pub fn from_terms<I: IntoIterator<Item = (CommMonomial, Scalar)>>(vars: Vars, terms: I) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.len(), p.nvars(), "monomial arity differs from variable count");
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&CommMonomial, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<CommMonomial, Scalar> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// Constant term (zero when absent).
    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&CommMonomial::one(self.nvars()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn coeff(&self, m: &CommMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: CommMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Re-expresses the polynomial over `vars`, which must contain every
    /// variable that actually occurs.
    pub fn align(&self, vars: &Vars) -> Result<CommPoly> {
        if &self.vars == vars {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.nvars());
        for name in self.vars.iter() {
            map.push(vars.iter().position(|v| v == name));
        }
        let mut out = CommPoly::zero(vars.clone());
        for (m, c) in &self.terms {
            let mut e = CommMonomial::one(vars.len());
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e.0[j] = k,
                    None => {
                        return Err(Error::VariableMismatch(format!(
                            "variable {} not in target list",
                            self.vars[i]
                        )))
                    }
                }
            }
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> CommPoly {
        if c.is_zero() {
            return CommPoly::zero(self.vars.clone());
        }
        CommPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &CommMonomial, c: &Scalar) -> CommPoly {
        if c.is_zero() {
            return CommPoly::zero(self.vars.clone());
        }
        CommPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Result<CommPoly> {
        if e < 0 {
            return Err(Error::NegativeExponent);
        }
        let mut result = CommPoly::one(self.vars.clone());
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    pub fn total_degree(&self) -> Result<u32> {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .ok_or(Error::DegreeOfZero)
    }

    pub fn degree_in(&self, var: usize) -> Result<u32> {
        self.terms.keys().map(|m| m.0[var]).max().ok_or(Error::DegreeOfZero)
    }

    /// Sum of the terms of maximal total degree.
    pub fn leading_form(&self) -> Result<CommPoly> {
        let d = self.total_degree()?;
        Ok(CommPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        })
    }

    /// Homogeneous component of the given total degree.
    pub fn homogeneous_part(&self, d: u32) -> CommPoly {
        CommPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Total degree, x/y degrees, top homogeneous form and bias of an
    /// element of `K[x,y]`.
    pub fn degree_calculus(&self) -> Result<DegreeInfo> {
        if self.nvars() != 2 {
            return Err(Error::VariableMismatch("degree calculus needs exactly (x, y)".into()));
        }
        let total_degree = self.total_degree()?;
        let leading_form = self.leading_form()?;
        let lx = leading_form.degree_in(0)?;
        let ly = leading_form.degree_in(1)?;
        Ok(DegreeInfo {
            total_degree,
            deg_x: self.degree_in(0)?,
            deg_y: self.degree_in(1)?,
            leading_form,
            biased: lx >= ly,
        })
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> CommPoly {
        let mut out = CommPoly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            out.add_term(m2, c * scalar::int(e as i64));
        }
        out
    }

    /// `(u_x, u_y)` for an element of `K[x,y]`.
    pub fn partials(&self) -> (CommPoly, CommPoly) {
        (self.derivative(0), self.derivative(1))
    }

    /// Evaluates at `images[i]` for variable `i`; all images must share one
    /// variable list.
    pub fn substitute(&self, images: &[CommPoly]) -> Result<CommPoly> {
        if images.len() != self.nvars() {
            return Err(Error::VariableMismatch(format!(
                "expected {} images, got {}",
                self.nvars(),
                images.len()
            )));
        }
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => return Ok(self.clone()),
        };
        let images: Vec<CommPoly> = images.iter().map(|p| p.align(&target)).collect::<Result<_>>()?;
        // powers are cached per variable
        let mut powers: Vec<Vec<CommPoly>> = vec![vec![CommPoly::one(target.clone())]; images.len()];
        let mut out = CommPoly::zero(target.clone());
        for (m, c) in &self.terms {
            let mut t = CommPoly::constant(c.clone(), target.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Substitutes scalar values for the listed variables, keeping the
    /// variable list unchanged.
    pub fn specialize(&self, assignment: &[(usize, Scalar)]) -> CommPoly {
        let mut out = CommPoly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut m2 = m.clone();
            for (i, v) in assignment {
                let e = m.0[*i];
                if e > 0 {
                    coeff *= num_traits::pow(v.clone(), e as usize);
                    m2.0[*i] = 0;
                }
            }
            out.add_term(m2, coeff);
        }
        out
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Indices of variables that occur.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars()];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        (0..self.nvars()).filter(|&i| used[i]).collect()
    }

    /// Leading term under pure lex (variable 0 largest).
    pub fn lex_leading(&self) -> Option<(&CommMonomial, &Scalar)> {
        self.terms.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    /// Scales so the lex-leading coefficient is one.
    pub fn monic_lex(&self) -> CommPoly {
        match self.lex_leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Univariate view in variable `var`, valid when no other variable occurs.
    pub fn to_uni(&self, var: usize) -> Option<UniPoly> {
        let mut coeffs = Vec::new();
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(i, &e)| i != var && e > 0) {
                return None;
            }
            let e = m.0[var] as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, Scalar::zero());
            }
            coeffs[e] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    pub fn from_uni(p: &UniPoly, var: usize, vars: Vars) -> CommPoly {
        let n = vars.len();
        let mut out = CommPoly::zero(vars);
        for (e, c) in p.coeffs().iter().enumerate() {
            let mut m = CommMonomial::one(n);
            m.0[var] = e as u32;
            out.add_term(m, c.clone());
        }
        out
    }

    fn combine(&self, other: &CommPoly, sign: bool) -> CommPoly {
        if self.vars != other.vars {
            let (a, b) = align_pair(self, other);
            return a.combine(&b, sign);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            if sign {
                out.add_term(m.clone(), c.clone());
            } else {
                out.add_term(m.clone(), -c.clone());
            }
        }
        out
    }

    fn product(&self, other: &CommPoly) -> CommPoly {
        if self.vars != other.vars {
            let (a, b) = align_pair(self, other);
            return a.product(&b);
        }
        let mut out = CommPoly::zero(self.vars.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Terms in decreasing lex order (x before y), the printing order.
    pub fn terms_for_display(&self) -> Vec<(&CommMonomial, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.lex_cmp(a.0));
        v
    }
}

/// Aligns two polynomials to the union of their variable lists.
/// Variables of all lists, in order of first appearance.
pub fn union_vars<'a, I: IntoIterator<Item = &'a Vars>>(lists: I) -> Vars {
    let mut names: Vec<String> = Vec::new();
    for l in lists {
        for v in l.iter() {
            if !names.contains(v) {
                names.push(v.clone());
            }
        }
    }
    Arc::new(names)
}

fn align_pair(a: &CommPoly, b: &CommPoly) -> (CommPoly, CommPoly) {
    let vars = union_vars([&a.vars, &b.vars]);
    (a.align(&vars).unwrap(), b.align(&vars).unwrap())
}

impl std::ops::Add for &CommPoly {
    type Output = CommPoly;
    fn add(self, rhs: &CommPoly) -> CommPoly {
        self.combine(rhs, true)
    }
}

impl std::ops::Sub for &CommPoly {
    type Output = CommPoly;
    fn sub(self, rhs: &CommPoly) -> CommPoly {
        self.combine(rhs, false)
    }
}

impl std::ops::Mul for &CommPoly {
    type Output = CommPoly;
    fn mul(self, rhs: &CommPoly) -> CommPoly {
        self.product(rhs)
    }
}

impl std::ops::Neg for &CommPoly {
    type Output = CommPoly;
    fn neg(self) -> CommPoly {
        self.scale(&-Scalar::one())
    }
}

impl std::ops::Add for CommPoly {
    type Output = CommPoly;
    fn add(self, rhs: CommPoly) -> CommPoly {
        &self + &rhs
    }
}

impl std::ops::Sub for CommPoly {
    type Output = CommPoly;
    fn sub(self, rhs: CommPoly) -> CommPoly {
        &self - &rhs
    }
}

impl std::ops::Mul for CommPoly {
    type Output = CommPoly;
    fn mul(self, rhs: CommPoly) -> CommPoly {
        &self * &rhs
    }
}

pub(crate) fn monomial_body(m: &CommMonomial, vars: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars[i].clone()),
            _ => parts.push(format!("{}^{}", vars[i], e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms_for_display().into_iter().enumerate() {
            scalar::push_term(&mut out, c, &monomial_body(m, &self.vars), i == 0);
        }
        write!(f, "{out}")
    }
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
    fn difference_of_squares() {
        let p = &(&x() + &y()) * &(&x() - &y());
        let expected = &(&x() * &x()) - &(&y() * &y());
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "x^2 - y^2");
    }

    #[test]
    fn powers() {
        assert_eq!((&x() + &y()).pow(0).unwrap(), CommPoly::one(xy_vars()));
        let p = (&x() + &y().pow(2).unwrap()).pow(2).unwrap();
        assert_eq!(p.to_string(), "x^2 + 2*x*y^2 + y^4");
        assert_eq!(x().pow(-1), Err(Error::NegativeExponent));
    }

    #[test]
    fn degree_calculus_examples() {
        let u = &(&x().pow(2).unwrap() * &y()) + &y().pow(2).unwrap();
        let d = u.degree_calculus().unwrap();
        assert_eq!((d.total_degree, d.deg_x, d.deg_y, d.biased), (3, 2, 2, true));
        assert_eq!(d.leading_form.to_string(), "x^2*y");

        let u = &(&x() * &y().pow(3).unwrap()) + &x();
        let d = u.degree_calculus().unwrap();
        assert_eq!((d.total_degree, d.deg_x, d.deg_y, d.biased), (4, 1, 3, false));

        let u = &x().pow(2).unwrap() + &y().pow(2).unwrap();
        let d = u.degree_calculus().unwrap();
        assert_eq!((d.total_degree, d.deg_x, d.deg_y, d.biased), (2, 2, 2, true));
        assert_eq!(d.leading_form, u);

        assert_eq!(CommPoly::zero(xy_vars()).degree_calculus(), Err(Error::DegreeOfZero));
    }

    #[test]
    fn substitution_examples() {
        let u = &x().pow(2).unwrap() * &y();
        let img = u.substitute(&[&x() + &y().pow(2).unwrap(), y()]).unwrap();
        assert_eq!(img.to_string(), "x^2*y + 2*x*y^3 + y^5");
        assert_eq!(x().substitute(&[y(), x()]).unwrap(), y());
        let zero = CommPoly::zero(xy_vars());
        assert_eq!((&x() + &y()).substitute(&[x(), zero]).unwrap(), x());
    }

    #[test]
    fn partial_derivatives() {
        let u = &x().pow(2).unwrap() * &y();
        let (ux, uy) = u.partials();
        assert_eq!(ux, &(&x() * &y()).scale(&int(2)) + &CommPoly::zero(xy_vars()));
        assert_eq!(uy, x().pow(2).unwrap());
        let (cx, cy) = CommPoly::constant(int(5), xy_vars()).partials();
        assert!(cx.is_zero() && cy.is_zero());
        let u = &x().pow(3).unwrap() + &y().pow(3).unwrap();
        let (ux, uy) = u.partials();
        assert_eq!(ux.to_string(), "3*x^2");
        assert_eq!(uy.to_string(), "3*y^2");
    }

    #[test]
    fn rational_coefficients_print() {
        let p = &x().scale(&crate::scalar::ratio(1, 2)) - &y().scale(&crate::scalar::ratio(3, 4));
        assert_eq!(p.to_string(), "1/2*x - 3/4*y");
        assert_eq!((-&x()).to_string(), "-x");
    }

    #[test]
    fn align_mixes_variable_lists() {
        let a = CommPoly::var(0, vars_of(&["t1"]));
        let b = CommPoly::var(0, vars_of(&["t2"]));
        let s = &a + &b;
        assert_eq!(s.nvars(), 2);
        assert_eq!(s.to_string(), "t1 + t2");
    }
}
