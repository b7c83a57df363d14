//! Noncommutative polynomials in the letters `x`, `y`.

mod basis;

pub use basis::{
    from_comm_basis, quotient_degrees, quotient_project, to_comm_basis, v_membership, BasisExpander,
    CommBasisForm, CommBasisTerm, QuotientDegrees,
};

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::commalg::{xy_vars, CommMonomial, CommPoly};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn swap(self) -> Letter {
        match self {
            Letter::X => Letter::Y,
            Letter::Y => Letter::X,
        }
    }
}

/// A word over `{x, y}`, one bit per letter (`x = 0`, `y = 1`), most
/// significant bit first so that equal-length words compare lexicographically
/// by comparing chunks.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    len: u32,
    bits: SmallVec<[u64; 1]>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letter(l: Letter) -> Self {
        let mut w = Word::empty();
        w.push(l);
        w
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(it: I) -> Self {
        let mut w = Word::empty();
        for l in it {
            w.push(l);
        }
        w
    }

    /// Parses a string of `x`/`y` characters; used mostly in tests.
    pub fn parse(s: &str) -> Self {
        Word::from_letters(s.chars().map(|c| match c {
            'x' => Letter::X,
            'y' => Letter::Y,
            _ => panic!("bad letter {c}"),
        }))
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> Letter {
        debug_assert!(i < self.len());
        if (self.bits[i / 64] >> (63 - (i % 64))) & 1 == 1 {
            Letter::Y
        } else {
            Letter::X
        }
    }

    pub fn push(&mut self, l: Letter) {
        let i = self.len as usize;
        if i % 64 == 0 {
            self.bits.push(0);
        }
        if l == Letter::Y {
            self.bits[i / 64] |= 1 << (63 - (i % 64));
        }
        self.len += 1;
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for l in other.letters() {
            w.push(l);
        }
        w
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word::from_letters(self.letters().take(n))
    }

    pub fn count_x(&self) -> usize {
        self.len() - self.count_y()
    }

    pub fn count_y(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// `x^2*y*x`; empty string for the empty word.
    pub fn body(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        let n = self.len();
        while i < n {
            let l = self.get(i);
            let mut j = i;
            while j < n && self.get(j) == l {
                j += 1;
            }
            let name = if l == Letter::X { "x" } else { "y" };
            if j - i == 1 {
                parts.push(name.to_string());
            } else {
                parts.push(format!("{name}^{}", j - i));
            }
            i = j;
        }
        parts.join("*")
    }
}

impl Ord for Word {
    /// Length first, then lexicographic with `x < y`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.letters().map(|l| if l == Letter::X { 'x' } else { 'y' }).collect();
        write!(f, "Word({s})")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FreePoly {
    terms: BTreeMap<Word, Scalar>,
}

impl FreePoly {
    pub fn zero() -> Self {
        FreePoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(Word::empty(), c)
    }

    pub fn monomial(w: Word, c: Scalar) -> Self {
        let mut p = FreePoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(Word::letter(Letter::X), Scalar::one())
    }

    pub fn y() -> Self {
        Self::monomial(Word::letter(Letter::Y), Scalar::one())
    }

    /// `[x,y] = xy - yx`
    pub fn commutator_xy() -> Self {
        Self::commutator(&Self::x(), &Self::y())
    }

    pub fn commutator(a: &FreePoly, b: &FreePoly) -> FreePoly {
        &(a * b) - &(b * a)
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Scalar)>>(it: I) -> Self {
        let mut p = FreePoly::zero();
        for (w, c) in it {
            p.add_term(w, c);
        }
        p
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|w| w.is_empty())
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
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

    pub fn scale(&self, c: &Scalar) -> FreePoly {
        if c.is_zero() {
            return FreePoly::zero();
        }
        FreePoly { terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> FreePoly {
        let mut r = FreePoly::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    pub fn degree(&self) -> Result<usize> {
        self.terms.keys().next_back().map(|w| w.len()).ok_or(Error::DegreeOfZero)
    }

    pub fn degree_x(&self) -> Result<usize> {
        self.terms.keys().map(|w| w.count_x()).max().ok_or(Error::DegreeOfZero)
    }

    pub fn degree_y(&self) -> Result<usize> {
        self.terms.keys().map(|w| w.count_y()).max().ok_or(Error::DegreeOfZero)
    }

    pub fn homogeneous_part(&self, d: usize) -> FreePoly {
        FreePoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == d)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sum of the terms of maximal degree.
    pub fn leading_form(&self) -> Result<FreePoly> {
        Ok(self.homogeneous_part(self.degree()?))
    }

    /// Image under the canonical map onto `K[x,y]`.
    pub fn abelianize(&self) -> CommPoly {
        let mut out = CommPoly::zero(xy_vars());
        for (w, c) in &self.terms {
            out.add_term(
                CommMonomial::from_exps(&[w.count_x() as u32, w.count_y() as u32]),
                c.clone(),
            );
        }
        out
    }

    /// Swaps the letters `x` and `y`.
    pub fn swap_letters(&self) -> FreePoly {
        FreePoly::from_terms(
            self.terms
                .iter()
                .map(|(w, c)| (Word::from_letters(w.letters().map(Letter::swap)), c.clone())),
        )
    }

    /// Letter-by-letter substitution `x -> image_x`, `y -> image_y`.
    pub fn substitute(&self, image_x: &FreePoly, image_y: &FreePoly) -> FreePoly {
        let mut cache: HashMap<Word, FreePoly> = HashMap::new();
        cache.insert(Word::empty(), FreePoly::one());
        let mut out = FreePoly::zero();
        for (w, c) in &self.terms {
            let img = word_image(w, image_x, image_y, &mut cache);
            for (w2, c2) in img.terms() {
                out.add_term(w2.clone(), c * c2);
            }
        }
        out
    }
}

fn word_image(w: &Word, ix: &FreePoly, iy: &FreePoly, cache: &mut HashMap<Word, FreePoly>) -> FreePoly {
    if let Some(p) = cache.get(w) {
        return p.clone();
    }
    let n = w.len();
    let prefix = w.prefix(n - 1);
    let head = word_image(&prefix, ix, iy, cache);
    let img = match w.get(n - 1) {
        Letter::X => &head * ix,
        Letter::Y => &head * iy,
    };
    cache.insert(w.clone(), img.clone());
    img
}

impl std::ops::Add for &FreePoly {
    type Output = FreePoly;
    fn add(self, rhs: &FreePoly) -> FreePoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &FreePoly {
    type Output = FreePoly;
    fn sub(self, rhs: &FreePoly) -> FreePoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Mul for &FreePoly {
    type Output = FreePoly;
    fn mul(self, rhs: &FreePoly) -> FreePoly {
        let mut out = FreePoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }
}

impl std::ops::Neg for &FreePoly {
    type Output = FreePoly;
    fn neg(self) -> FreePoly {
        self.scale(&-Scalar::one())
    }
}

impl fmt::Display for FreePoly {
    /// Higher degree first; within a degree, lexicographic with `x` first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(b.0)));
        let mut out = String::new();
        for (i, (w, c)) in terms.into_iter().enumerate() {
            scalar::push_term(&mut out, c, &w.body(), i == 0);
        }
        write!(f, "{out}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn x() -> FreePoly {
        FreePoly::x()
    }
    fn y() -> FreePoly {
        FreePoly::y()
    }

    #[test]
    fn words_pack_and_order() {
        let w = Word::parse("xyyx");
        assert_eq!(w.len(), 4);
        assert_eq!(w.count_y(), 2);
        assert_eq!(w.body(), "x*y^2*x");
        assert!(Word::parse("xy") < Word::parse("yx"));
        assert!(Word::parse("yy") < Word::parse("xxx"));
        let long = Word::from_letters((0..130).map(|i| if i % 3 == 0 { Letter::Y } else { Letter::X }));
        assert_eq!(long.len(), 130);
        assert_eq!(long.get(129), Letter::Y);
        assert_eq!(long.get(128), Letter::X);
    }

    #[test]
    fn ring_examples() {
        assert_eq!((&x() * &y()).to_string(), "x*y");
        assert_eq!(FreePoly::commutator_xy().to_string(), "x*y - y*x");
        let p = &(&x() + &y()) * &(&x() - &y());
        assert_eq!(p.to_string(), "x^2 - x*y + y*x - y^2");
    }

    #[test]
    fn substitution_examples() {
        let c = FreePoly::commutator_xy();
        assert_eq!(c.substitute(&y(), &x()), -&c);
        // [alpha x + p(y), beta y] = alpha beta [x,y]
        let p = &y().pow(2).scale(&int(5)) + &y();
        let img = c.substitute(&(&x().scale(&int(3)) + &p), &y().scale(&int(2)));
        assert_eq!(img, c.scale(&int(6)));
        let t = x().substitute(&(&x() + &y().pow(2)), &y());
        assert_eq!(t.to_string(), "y^2 + x");
    }

    #[test]
    fn degrees() {
        let p = &(&x().pow(2) * &y()) + &y();
        assert_eq!(p.degree().unwrap(), 3);
        assert_eq!(p.degree_x().unwrap(), 2);
        assert_eq!(FreePoly::zero().degree(), Err(Error::DegreeOfZero));
        assert_eq!(p.abelianize().to_string(), "x^2*y + y");
    }
}
