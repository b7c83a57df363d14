//! The basis `x^{a_1} y^{b_1} C x^{a_2} y^{b_2} ... C x^{a_{r+1}} y^{b_{r+1}}`
//! of `K<x,y>`, where `C = [x,y]`, and the quotient by `V = span(C^k)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use smallvec::{smallvec, SmallVec};

use super::{FreePoly, Letter, Word};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CommBasisTerm {
    blocks: SmallVec<[(u32, u32); 4]>,
}

impl CommBasisTerm {
    /// `blocks` must be nonempty.
    pub fn new(blocks: &[(u32, u32)]) -> Self {
        assert!(!blocks.is_empty(), "a basis term has at least one block");
        CommBasisTerm { blocks: blocks.iter().copied().collect() }
    }

    /// `C^r`
    pub fn commutator_power(r: usize) -> Self {
        CommBasisTerm { blocks: smallvec![(0, 0); r + 1] }
    }

    pub fn blocks(&self) -> &[(u32, u32)] {
        &self.blocks
    }

    /// Number of commutator factors.
    pub fn r(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.degree_x() + self.degree_y()
    }

    pub fn degree_x(&self) -> usize {
        self.blocks.iter().map(|b| b.0 as usize).sum::<usize>() + self.r()
    }

    pub fn degree_y(&self) -> usize {
        self.blocks.iter().map(|b| b.1 as usize).sum::<usize>() + self.r()
    }

    /// True when every `a_i` and `b_i` vanishes, i.e. the term is `C^r`.
    pub fn is_commutator_power(&self) -> bool {
        self.blocks.iter().all(|&(a, b)| a == 0 && b == 0)
    }

    pub fn all_a_zero(&self) -> bool {
        self.blocks.iter().all(|&(a, _)| a == 0)
    }

    pub fn body(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (i, &(a, b)) in self.blocks.iter().enumerate() {
            if i > 0 {
                parts.push("C".into());
            }
            for (name, e) in [("x", a), ("y", b)] {
                match e {
                    0 => {}
                    1 => parts.push(name.into()),
                    _ => parts.push(format!("{name}^{e}")),
                }
            }
        }
        parts.join("*")
    }

    pub fn to_free(&self) -> FreePoly {
        let c = FreePoly::commutator_xy();
        let mut out = FreePoly::one();
        for (i, &(a, b)) in self.blocks.iter().enumerate() {
            if i > 0 {
                out = &out * &c;
            }
            let mut w = Word::empty();
            (0..a).for_each(|_| w.push(Letter::X));
            (0..b).for_each(|_| w.push(Letter::Y));
            out = &out * &FreePoly::monomial(w, Scalar::from_integer(1.into()));
        }
        out
    }

    fn flat(&self) -> impl Iterator<Item = u32> + '_ {
        self.blocks.iter().flat_map(|&(a, b)| [a, b])
    }
}

impl Ord for CommBasisTerm {
    /// Display order: degree descending, then fewer commutators first, then
    /// flattened blocks descending.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| self.r().cmp(&other.r()))
            .then_with(|| other.flat().cmp(self.flat()))
    }
}

impl PartialOrd for CommBasisTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CommBasisForm {
    terms: BTreeMap<CommBasisTerm, Scalar>,
}

impl CommBasisForm {
    pub fn zero() -> Self {
        CommBasisForm::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (CommBasisTerm, Scalar)>>(it: I) -> Self {
        let mut f = CommBasisForm::zero();
        for (t, c) in it {
            f.add_term(t, c);
        }
        f
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CommBasisTerm, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &CommBasisTerm) -> Scalar {
        self.terms.get(t).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, t: CommBasisTerm, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(t) {
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

    pub fn add(&self, other: &CommBasisForm) -> CommBasisForm {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    /// Drops the commutator powers.
    pub fn without_v(&self) -> CommBasisForm {
        CommBasisForm {
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| !t.is_commutator_power())
                .map(|(t, c)| (t.clone(), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for CommBasisForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (t, c)) in self.terms.iter().enumerate() {
            scalar::push_term(&mut out, c, &t.body(), i == 0);
        }
        write!(f, "{out}")
    }
}

type Expansion = Arc<Vec<(CommBasisTerm, i128)>>;

const CACHE_LIMIT: usize = 200_000;

/// Expands words in the commutator basis, memoizing every prefix it visits.
/// Holds no state beyond the cache, so separate instances are independent.
#[derive(Default)]
pub struct BasisExpander {
    cache: HashMap<Word, Expansion>,
}

impl BasisExpander {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn expand_word(&mut self, w: &Word) -> Expansion {
        if let Some(e) = self.cache.get(w) {
            return e.clone();
        }
        if self.cache.len() > CACHE_LIMIT {
            self.cache.clear();
        }
        let mut k = w.len();
        while k > 0 && !self.cache.contains_key(&w.prefix(k)) {
            k -= 1;
        }
        let mut cur: Expansion = if k == 0 {
            Arc::new(vec![(CommBasisTerm::commutator_power(0), 1)])
        } else {
            self.cache[&w.prefix(k)].clone()
        };
        let mut prefix = w.prefix(k);
        for i in k..w.len() {
            let l = w.get(i);
            cur = Arc::new(right_multiply(&cur, l));
            prefix.push(l);
            self.cache.insert(prefix.clone(), cur.clone());
        }
        cur
    }

    pub fn to_comm_basis(&mut self, u: &FreePoly) -> CommBasisForm {
        let mut acc: HashMap<CommBasisTerm, Scalar> = HashMap::new();
        for (w, c) in u.terms() {
            for (t, n) in self.expand_word(w).iter() {
                *acc.entry(t.clone()).or_insert_with(Scalar::zero) += c * Scalar::from_integer(BigInt::from(*n));
            }
        }
        CommBasisForm { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

/// Multiplies a basis expansion on the right by one letter, using
/// `y^b x = x y^b - sum_{i<b} y^i C y^{b-1-i}`.
fn right_multiply(terms: &[(CommBasisTerm, i128)], l: Letter) -> Vec<(CommBasisTerm, i128)> {
    let mut acc: HashMap<CommBasisTerm, i128> = HashMap::new();
    let mut add = |t: CommBasisTerm, n: i128| {
        let e = acc.entry(t).or_insert(0);
        *e = e.checked_add(n).expect("basis coefficient overflow");
    };
    for (t, n) in terms {
        let last = t.blocks.len() - 1;
        let (a, b) = t.blocks[last];
        match l {
            Letter::Y => {
                let mut t2 = t.clone();
                t2.blocks[last].1 += 1;
                add(t2, *n);
            }
            Letter::X => {
                let mut t2 = t.clone();
                t2.blocks[last].0 += 1;
                add(t2, *n);
                for i in 0..b {
                    let mut t3 = t.clone();
                    t3.blocks[last] = (a, i);
                    t3.blocks.push((0, b - 1 - i));
                    add(t3, -*n);
                }
            }
        }
    }
    acc.into_iter().filter(|(_, n)| *n != 0).collect()
}

pub fn to_comm_basis(u: &FreePoly) -> CommBasisForm {
    BasisExpander::new().to_comm_basis(u)
}

pub fn from_comm_basis(c: &CommBasisForm) -> FreePoly {
    let mut out = FreePoly::zero();
    for (t, k) in c.terms() {
        out = &out + &t.to_free().scale(k);
    }
    out
}

/// The coefficients `lambda_k` of `u = sum lambda_k C^k`, or `None` when `u`
/// is not in `V`.
pub fn v_membership(u: &FreePoly) -> Option<Vec<Scalar>> {
    let form = to_comm_basis(u);
    let mut out: Vec<Scalar> = Vec::new();
    for (t, c) in form.terms() {
        if !t.is_commutator_power() {
            return None;
        }
        if out.len() <= t.r() {
            out.resize(t.r() + 1, Scalar::zero());
        }
        out[t.r()] = c.clone();
    }
    Some(out)
}

/// Canonical representative of the class of `u` modulo `V`.
pub fn quotient_project(u: &FreePoly) -> FreePoly {
    from_comm_basis(&to_comm_basis(u).without_v())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuotientDegrees {
    pub qdeg: usize,
    pub qdeg_x: usize,
    pub qdeg_y: usize,
    pub biased: bool,
}

pub fn quotient_degrees(u: &FreePoly) -> Result<QuotientDegrees> {
    degrees_of_form(&to_comm_basis(u))
}

pub(crate) fn degrees_of_form(form: &CommBasisForm) -> Result<QuotientDegrees> {
    let rest = form.without_v();
    let qdeg = rest.terms().map(|(t, _)| t.degree()).max().ok_or(Error::ElementInV)?;
    let qdeg_x = rest.terms().map(|(t, _)| t.degree_x()).max().unwrap();
    let qdeg_y = rest.terms().map(|(t, _)| t.degree_y()).max().unwrap();
    let top = rest.terms().filter(|(t, _)| t.degree() == qdeg);
    let (tx, ty) = top.fold((0, 0), |(x, y), (t, _)| (x.max(t.degree_x()), y.max(t.degree_y())));
    Ok(QuotientDegrees { qdeg, qdeg_x, qdeg_y, biased: tx >= ty })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use proptest::prelude::*;

    fn w(s: &str) -> FreePoly {
        FreePoly::monomial(Word::parse(s), int(1))
    }

    fn c() -> FreePoly {
        FreePoly::commutator_xy()
    }

    #[test]
    fn rewrite_examples() {
        let f = to_comm_basis(&w("yx"));
        assert_eq!(f.coeff(&CommBasisTerm::new(&[(1, 1)])), int(1));
        assert_eq!(f.coeff(&CommBasisTerm::commutator_power(1)), int(-1));
        assert_eq!(f.to_string(), "x*y - C");
        assert_eq!(to_comm_basis(&w("xy")).to_string(), "x*y");
        let g = to_comm_basis(&w("yyx"));
        assert_eq!(g.to_string(), "x*y^2 - y*C - C*y");
        assert_eq!(from_comm_basis(&g), w("yyx"));
    }

    #[test]
    fn expansion_examples() {
        let t = CommBasisForm::from_terms([(CommBasisTerm::commutator_power(1), int(1))]);
        assert_eq!(from_comm_basis(&t), c());
        let t = CommBasisForm::from_terms([(CommBasisTerm::new(&[(1, 0), (0, 1)]), int(1))]);
        assert_eq!(from_comm_basis(&t), &(&FreePoly::x() * &c()) * &FreePoly::y());
        assert_eq!(from_comm_basis(&CommBasisForm::zero()), FreePoly::zero());
    }

    #[test]
    fn v_examples() {
        let u = &c().pow(2).scale(&int(3)) - &c();
        assert_eq!(v_membership(&u), Some(vec![int(0), int(-1), int(3)]));
        assert_eq!(v_membership(&FreePoly::one()), Some(vec![int(1)]));
        assert_eq!(v_membership(&(&FreePoly::x() + &c())), None);
    }

    #[test]
    fn projection_examples() {
        assert_eq!(quotient_project(&c().pow(3)), FreePoly::zero());
        assert_eq!(quotient_project(&(&FreePoly::x() + &c())), FreePoly::x());
        let s = &w("xy") + &w("yx");
        assert_eq!(quotient_project(&s), w("xy").scale(&int(2)));
        assert_eq!(quotient_project(&quotient_project(&s)), quotient_project(&s));
    }

    #[test]
    fn degree_examples() {
        let u = &w("xxy") + &c().pow(5);
        let d = quotient_degrees(&u).unwrap();
        assert_eq!((d.qdeg, d.qdeg_x, d.qdeg_y, d.biased), (3, 2, 1, true));
        let d = quotient_degrees(&w("yyy")).unwrap();
        assert_eq!((d.qdeg, d.qdeg_x, d.qdeg_y, d.biased), (3, 0, 3, false));
        let d = quotient_degrees(&(&w("xy") + &w("yx"))).unwrap();
        assert_eq!((d.qdeg, d.qdeg_x, d.qdeg_y, d.biased), (2, 1, 1, true));
        assert_eq!(quotient_degrees(&c()), Err(Error::ElementInV));
    }

    pub(crate) fn arb_free_poly(max_deg: usize, max_terms: usize) -> impl Strategy<Value = FreePoly> {
        let word = (0..=max_deg).prop_flat_map(|n| prop::collection::vec(any::<bool>(), n));
        prop::collection::vec((word, -5i64..=5), 0..=max_terms).prop_map(|ts| {
            FreePoly::from_terms(ts.into_iter().map(|(bits, c)| {
                (Word::from_letters(bits.into_iter().map(|b| if b { Letter::Y } else { Letter::X })), int(c))
            }))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn round_trip(u in arb_free_poly(6, 12)) {
            prop_assert_eq!(from_comm_basis(&to_comm_basis(&u)), u);
        }
    }

    proptest! {
        #[test]
        fn linearity(u in arb_free_poly(5, 6), v in arb_free_poly(5, 6)) {
            prop_assert_eq!(to_comm_basis(&(&u + &v)), to_comm_basis(&u).add(&to_comm_basis(&v)));
        }

        #[test]
        fn projection_idempotent(u in arb_free_poly(5, 6)) {
            let p = quotient_project(&u);
            prop_assert_eq!(quotient_project(&p), p.clone());
            prop_assert!(v_membership(&(&u - &p)).is_some());
        }
    }
}
