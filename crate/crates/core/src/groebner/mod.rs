//! Buchberger's algorithm over the rationals, with fraction-free integer
//! arithmetic internally.

mod solve;
mod system;

pub use solve::{eliminate, ideal_is_trivial, radical_member, rational_point, rational_point_with, solvable, solvable_with};
pub(crate) use solve::rational_roots;
pub use system::AlgebraicSystem;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::budget::Budget;
use crate::commalg::{union_vars, CommMonomial, CommPoly, Vars};
use crate::error::Result;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
    /// Degrevlex on the first `k` variables, then degrevlex on the rest;
    /// eliminates the first block.
    Block(usize),
}

type Exps = SmallVec<[u16; 8]>;

fn deg(a: &[u16]) -> u32 {
    a.iter().map(|&e| e as u32).sum()
}

fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    deg(a).cmp(&deg(b)).then_with(|| {
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        match *self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::DegRevLex => grevlex(a, b),
            MonomialOrder::Block(k) => {
                let k = k.min(a.len());
                grevlex(&a[..k], &b[..k]).then_with(|| grevlex(&a[k..], &b[k..]))
            }
        }
    }
}

fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn mono_div(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn mono_mul(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Integer polynomial with terms in ascending order, so the leading term is
/// last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IPoly {
    terms: Vec<(Exps, BigInt)>,
}

impl IPoly {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Exps {
        &self.terms.last().unwrap().0
    }

    fn lc(&self) -> &BigInt {
        &self.terms.last().unwrap().1
    }

    fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.lm().iter().all(|&e| e == 0)
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content and makes the leading coefficient positive.
    fn make_primitive(&mut self) {
        if self.is_zero() {
            return;
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in self.terms.iter_mut() {
                *c /= &g;
            }
        }
    }

    fn from_comm(p: &CommPoly, order: MonomialOrder) -> IPoly {
        let mut den = BigInt::one();
        for (_, c) in p.terms() {
            den = den.lcm(c.denom());
        }
        let mut terms: Vec<(Exps, BigInt)> = p
            .terms()
            .map(|(m, c)| {
                let e: Exps = m.0.iter().map(|&k| u16::try_from(k).expect("exponent too large")).collect();
                (e, c.numer() * (&den / c.denom()))
            })
            .collect();
        terms.sort_by(|a, b| order.cmp(&a.0, &b.0));
        let mut out = IPoly { terms };
        out.make_primitive();
        out
    }

    fn to_comm(&self, vars: &Vars, monic: bool) -> CommPoly {
        let lc = if monic && !self.is_zero() { Scalar::from_integer(self.lc().clone()) } else { Scalar::one() };
        CommPoly::from_terms(
            vars.clone(),
            self.terms.iter().map(|(e, c)| {
                (CommMonomial::from_exps(&e.iter().map(|&k| k as u32).collect::<Vec<_>>()), Scalar::from_integer(c.clone()) / &lc)
            }),
        )
    }

    /// `a * self - b * m * g`
    fn sub_mul(&self, a: &BigInt, b: &BigInt, m: &[u16], g: &IPoly, order: MonomialOrder) -> IPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let mut j = 0;
        let gm: Vec<Exps> = g.terms.iter().map(|(e, _)| mono_mul(e, m)).collect();
        while i < self.terms.len() || j < g.terms.len() {
            let ord = if i == self.terms.len() {
                Ordering::Greater
            } else if j == g.terms.len() {
                Ordering::Less
            } else {
                order.cmp(&self.terms[i].0, &gm[j])
            };
            match ord {
                Ordering::Less => {
                    out.push((self.terms[i].0.clone(), a * &self.terms[i].1));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((gm[j].clone(), -(b * &g.terms[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a * &self.terms[i].1 - b * &g.terms[j].1;
                    if !c.is_zero() {
                        out.push((gm[j].clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        IPoly { terms: out }
    }
}

fn spoly(f: &IPoly, g: &IPoly, order: MonomialOrder) -> IPoly {
    let l = lcm(f.lm(), g.lm());
    let gc = f.lc().gcd(g.lc());
    let a = g.lc() / &gc;
    let b = f.lc() / &gc;
    let mf = mono_div(&l, f.lm());
    let mg = mono_div(&l, g.lm());
    let zero = IPoly { terms: Vec::new() };
    let fm = zero.sub_mul(&BigInt::zero(), &(-a), &mf, f, order);
    fm.sub_mul(&BigInt::one(), &b, &mg, g, order)
}

/// Full normal form, returned primitive.
fn reduce_full(f: &IPoly, basis: &[IPoly], order: MonomialOrder) -> IPoly {
    let mut f = f.clone();
    // remainder terms in descending order
    let mut rem: Vec<(Exps, BigInt)> = Vec::new();
    let mut steps = 0usize;
    while let Some((m, c)) = f.terms.last().cloned() {
        match basis.iter().find(|g| divides(g.lm(), &m)) {
            Some(g) => {
                let gc = c.gcd(g.lc());
                let a = g.lc() / &gc;
                let b = &c / &gc;
                let q = mono_div(&m, g.lm());
                f = f.sub_mul(&a, &b, &q, g, order);
                if !a.is_one() {
                    for (_, r) in rem.iter_mut() {
                        *r *= &a;
                    }
                }
                steps += 1;
                if steps % 16 == 0 {
                    let mut g = f.content();
                    for (_, r) in &rem {
                        g = g.gcd(r);
                    }
                    if !g.is_zero() && !g.is_one() {
                        f.terms.iter_mut().for_each(|(_, c)| *c /= &g);
                        rem.iter_mut().for_each(|(_, c)| *c /= &g);
                    }
                }
            }
            None => {
                f.terms.pop();
                rem.push((m, c));
            }
        }
    }
    rem.reverse();
    let mut out = IPoly { terms: rem };
    out.make_primitive();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub vars: Vars,
    pub generators: Vec<CommPoly>,
    pub order: MonomialOrder,
}

impl GroebnerBasis {
    pub fn is_trivial(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_constant()
    }

    /// Normal form of `f` modulo the basis, made monic.
    pub fn reduce(&self, f: &CommPoly) -> CommPoly {
        let vars = union_vars([&self.vars, f.vars()]);
        let basis: Vec<IPoly> = self
            .generators
            .iter()
            .map(|g| IPoly::from_comm(&g.align(&vars).unwrap(), self.order))
            .collect();
        let r = reduce_full(&IPoly::from_comm(&f.align(&vars).unwrap(), self.order), &basis, self.order);
        r.to_comm(&vars, true)
    }

    pub fn contains(&self, f: &CommPoly) -> bool {
        self.reduce(f).is_zero()
    }
}

impl fmt::Display for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Exps,
}

/// Gebauer-Moeller update with the new generator at index `h`.
fn update(polys: &[IPoly], active: &mut Vec<usize>, pairs: &mut Vec<Pair>, h: usize) {
    let lh = polys[h].lm().clone();
    let mut c: Vec<Pair> = active.iter().map(|&g| Pair { i: g, j: h, lcm: lcm(polys[g].lm(), &lh) }).collect();
    let mut d: Vec<Pair> = Vec::new();
    while let Some(p) = c.pop() {
        let cop = coprime(polys[p.i].lm(), &lh);
        if cop || !c.iter().chain(d.iter()).any(|q| divides(&q.lcm, &p.lcm)) {
            d.push(p);
        }
    }
    let kept: Vec<Pair> = d.into_iter().filter(|p| !coprime(polys[p.i].lm(), &lh)).collect();
    pairs.retain(|p| {
        !(divides(&lh, &p.lcm)
            && lcm(polys[p.i].lm(), &lh) != p.lcm
            && lcm(polys[p.j].lm(), &lh) != p.lcm)
    });
    pairs.extend(kept);
    active.retain(|&g| !divides(&lh, polys[g].lm()));
    active.push(h);
}

fn interreduce(mut basis: Vec<IPoly>, order: MonomialOrder) -> Vec<IPoly> {
    basis.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    let mut minimal: Vec<IPoly> = Vec::new();
    for g in basis {
        if !minimal.iter().any(|h| divides(h.lm(), g.lm())) {
            minimal.retain(|h| !divides(g.lm(), h.lm()));
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<IPoly> = minimal.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, g)| g.clone()).collect();
        out.push(reduce_full(&minimal[k], &others, order));
    }
    out.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    out
}

pub(crate) fn buchberger_ipoly(gens: Vec<IPoly>, order: MonomialOrder, budget: &Budget) -> Result<Vec<IPoly>> {
    let mut polys: Vec<IPoly> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut gens: Vec<IPoly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    gens.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    for g in gens {
        let basis: Vec<IPoly> = active.iter().map(|&i| polys[i].clone()).collect();
        let h = reduce_full(&g, &basis, order);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(vec![h]);
        }
        polys.push(h);
        update(&polys, &mut active, &mut pairs, polys.len() - 1);
    }
    while !pairs.is_empty() {
        budget.charge_pair()?;
        // normal strategy: smallest lcm in the term order
        let best = (0..pairs.len()).min_by(|&a, &b| order.cmp(&pairs[a].lcm, &pairs[b].lcm)).unwrap();
        let p = pairs.swap_remove(best);
        let s = spoly(&polys[p.i], &polys[p.j], order);
        let basis: Vec<IPoly> = active.iter().map(|&i| polys[i].clone()).collect();
        let h = reduce_full(&s, &basis, order);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(vec![h]);
        }
        polys.push(h);
        update(&polys, &mut active, &mut pairs, polys.len() - 1);
    }
    Ok(interreduce(active.iter().map(|&i| polys[i].clone()).collect(), order))
}

/// Reduced monic Groebner basis, without resource limits.
pub fn buchberger(generators: &[CommPoly], order: MonomialOrder) -> GroebnerBasis {
    buchberger_with(generators, order, &Budget::unlimited()).expect("unlimited budget")
}

pub fn buchberger_with(generators: &[CommPoly], order: MonomialOrder, budget: &Budget) -> Result<GroebnerBasis> {
    let vars = union_vars(generators.iter().map(|g| g.vars()));
    buchberger_in(generators, &vars, order, budget)
}

pub(crate) fn buchberger_in(
    generators: &[CommPoly],
    vars: &Vars,
    order: MonomialOrder,
    budget: &Budget,
) -> Result<GroebnerBasis> {
    let gens: Vec<IPoly> =
        generators.iter().map(|g| IPoly::from_comm(&g.align(vars).unwrap(), order)).collect();
    let gb = buchberger_ipoly(gens, order, budget)?;
    Ok(GroebnerBasis {
        vars: vars.clone(),
        generators: gb.iter().map(|g| g.to_comm(vars, true)).collect(),
        order,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::commalg::vars_of;
    use crate::scalar::{int, ratio};
    use proptest::prelude::*;

    pub(crate) fn t(i: usize) -> CommPoly {
        CommPoly::var(i, vars_of(&["t1", "t2", "t3"]))
    }

    pub(crate) fn k(c: i64) -> CommPoly {
        CommPoly::constant(int(c), vars_of(&["t1", "t2", "t3"]))
    }

    /// Every S-polynomial reduces to zero and every input lies in the ideal.
    pub(crate) fn check_basis(gens: &[CommPoly], gb: &GroebnerBasis) {
        let vars = &gb.vars;
        let ip: Vec<IPoly> = gb.generators.iter().map(|g| IPoly::from_comm(&g.align(vars).unwrap(), gb.order)).collect();
        for i in 0..ip.len() {
            for j in i + 1..ip.len() {
                let s = spoly(&ip[i], &ip[j], gb.order);
                assert!(reduce_full(&s, &ip, gb.order).is_zero(), "S-pair ({i},{j}) does not reduce");
            }
            for j in 0..ip.len() {
                assert!(i == j || !divides(ip[j].lm(), ip[i].lm()), "basis not minimal");
            }
        }
        for g in gens {
            assert!(gb.contains(g), "generator {g} not in ideal");
        }
    }

    #[test]
    fn examples() {
        let gb = buchberger(&[t(0), &t(0) - &k(1)], MonomialOrder::Lex);
        assert!(gb.is_trivial());
        let sq = t(0).pow(2).unwrap();
        let gb = buchberger(&[sq.clone()], MonomialOrder::Lex);
        assert_eq!(gb.generators, vec![sq]);
        let gens = [&(&t(0).pow(2).unwrap() + &t(1).pow(2).unwrap()) - &k(1), &t(0) - &t(1)];
        let gb = buchberger(&gens, MonomialOrder::Lex);
        // monic form of {t1 - t2, 2 t2^2 - 1}
        let half = CommPoly::constant(ratio(1, 2), t(0).vars().clone());
        assert_eq!(gb.generators, vec![&t(0) - &t(1), &t(1).pow(2).unwrap() - &half]);
        check_basis(&gens, &gb);
    }

    #[test]
    fn cyclic3() {
        let (a, b, c) = (t(0), t(1), t(2));
        let gens = [
            &(&a + &b) + &c,
            &(&(&a * &b) + &(&b * &c)) + &(&c * &a),
            &(&(&a * &b) * &c) - &k(1),
        ];
        for order in [MonomialOrder::Lex, MonomialOrder::DegRevLex, MonomialOrder::Block(1)] {
            let gb = buchberger(&gens, order);
            check_basis(&gens, &gb);
            assert!(!gb.is_trivial());
        }
    }

    pub(crate) fn arb_system() -> impl Strategy<Value = Vec<CommPoly>> {
        let term = (0u32..3, 0u32..3, 0u32..2, -3i64..=3);
        let poly = prop::collection::vec(term, 1..4).prop_map(|ts| {
            CommPoly::from_terms(
                vars_of(&["t1", "t2", "t3"]),
                ts.into_iter().map(|(a, b, c, k)| (CommMonomial::from_exps(&[a, b, c]), int(k))),
            )
        });
        prop::collection::vec(poly, 1..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn bases_are_groebner(gens in arb_system()) {
            for order in [MonomialOrder::Lex, MonomialOrder::DegRevLex] {
                let gb = buchberger(&gens, order);
                check_basis(&gens, &gb);
            }
        }
    }
}
