use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{buchberger_in, GroebnerBasis, MonomialOrder};
use crate::budget::Budget;
use crate::commalg::{union_vars, CommPoly, UniPoly, Vars};
use crate::error::{Error, Result};
use crate::groebner::AlgebraicSystem;
use crate::scalar::{int, Scalar};

pub fn ideal_is_trivial(gb: &GroebnerBasis) -> bool {
    gb.is_trivial()
}

fn fresh_var(vars: &Vars) -> String {
    let mut name = "z".to_string();
    while vars.contains(&name) {
        name.push('_');
    }
    name
}

/// `vars` with one extra variable and the polynomial `1 - z f0`.
fn rabinowitsch(vars: &Vars, f0: &CommPoly) -> (Vars, CommPoly) {
    let mut names = vars.as_ref().clone();
    names.push(fresh_var(vars));
    let ext: Vars = Arc::new(names);
    let z = CommPoly::var(ext.len() - 1, ext.clone());
    let f = &CommPoly::one(ext.clone()) - &(&z * &f0.align(&ext).unwrap());
    (ext, f)
}

/// Whether some power of `f0` lies in the ideal generated by `generators`.
pub fn radical_member(f0: &CommPoly, generators: &[CommPoly]) -> bool {
    let vars = union_vars(generators.iter().map(|g| g.vars()).chain([f0.vars()]));
    let (ext, extra) = rabinowitsch(&vars, f0);
    let mut gens: Vec<CommPoly> = generators.iter().map(|g| g.align(&ext).unwrap()).collect();
    gens.push(extra);
    buchberger_in(&gens, &ext, MonomialOrder::DegRevLex, &Budget::unlimited())
        .expect("unlimited budget")
        .is_trivial()
}

pub fn solvable(system: &AlgebraicSystem) -> bool {
    solvable_with(system, &Budget::unlimited()).expect("unlimited budget")
}

/// Solvability over the algebraic closure, with the inequation handled by
/// an extra variable.
pub fn solvable_with(system: &AlgebraicSystem, budget: &Budget) -> Result<bool> {
    match &system.inequation {
        None => Ok(!buchberger_in(&system.equations, &system.vars, MonomialOrder::DegRevLex, budget)?.is_trivial()),
        Some(f0) if f0.is_zero() => Ok(false),
        Some(f0) => {
            let (ext, extra) = rabinowitsch(&system.vars, f0);
            let mut gens: Vec<CommPoly> = system.equations.iter().map(|g| g.align(&ext).unwrap()).collect();
            gens.push(extra);
            Ok(!buchberger_in(&gens, &ext, MonomialOrder::DegRevLex, budget)?.is_trivial())
        }
    }
}

/// Generators of the intersection of the ideal with `K[keep]`, expressed
/// over the kept variables.
pub fn eliminate(generators: &[CommPoly], keep: &[&str]) -> Vec<CommPoly> {
    let vars = union_vars(generators.iter().map(|g| g.vars()));
    let mut names: Vec<String> = vars.iter().filter(|v| !keep.contains(&v.as_str())).cloned().collect();
    let k = names.len();
    names.extend(keep.iter().map(|s| s.to_string()));
    let ordered: Vars = Arc::new(names);
    let kept: Vars = Arc::new(keep.iter().map(|s| s.to_string()).collect());
    let gb = buchberger_in(generators, &ordered, MonomialOrder::Block(k), &Budget::unlimited()).expect("unlimited budget");
    gb.generators
        .iter()
        .filter(|g| g.support_vars().iter().all(|&i| i >= k))
        .map(|g| g.align(&kept).unwrap())
        .collect()
}

pub fn rational_point(system: &AlgebraicSystem) -> Result<Option<Vec<Scalar>>> {
    rational_point_with(system, &Budget::unlimited())
}

/// Best-effort rational solution: lex elimination, rational roots of
/// univariate members, and small integer trial values for free variables.
pub fn rational_point_with(system: &AlgebraicSystem, budget: &Budget) -> Result<Option<Vec<Scalar>>> {
    if !solvable_with(system, budget)? {
        return Err(Error::NoSolution);
    }
    let n = system.vars.len();
    let mut assigned: Vec<Option<Scalar>> = vec![None; n];
    let found = search(&system.vars, system.equations.clone(), system.inequation.clone(), &mut assigned, budget)?;
    if let Some(p) = &found {
        debug_assert!(system.equations.iter().all(|e| e.eval(p).is_zero()));
    }
    Ok(found)
}

const FREE_TRIALS: [i64; 9] = [0, 1, -1, 2, -2, 3, -3, 4, 5];

fn search(
    vars: &Vars,
    eqs: Vec<CommPoly>,
    neq: Option<CommPoly>,
    assigned: &mut Vec<Option<Scalar>>,
    budget: &Budget,
) -> Result<Option<Vec<Scalar>>> {
    budget.check_time()?;
    if assigned.iter().all(|a| a.is_some()) {
        let point: Vec<Scalar> = assigned.iter().map(|a| a.clone().unwrap()).collect();
        let ok_eq = eqs.iter().all(|e| e.eval(&point).is_zero());
        let ok_neq = neq.as_ref().map_or(true, |f| !f.eval(&point).is_zero());
        return Ok((ok_eq && ok_neq).then_some(point));
    }
    if neq.as_ref().is_some_and(|f| f.is_zero()) {
        return Ok(None);
    }
    // lex straight from the input can explode; the degrevlex basis is a far better start
    let pre = buchberger_in(&eqs, vars, MonomialOrder::DegRevLex, budget)?;
    if pre.is_trivial() {
        return Ok(None);
    }
    let gb = buchberger_in(&pre.generators, vars, MonomialOrder::Lex, budget)?;
    if gb.is_trivial() {
        return Ok(None);
    }
    let open: Vec<usize> = (0..vars.len()).filter(|&i| assigned[i].is_none()).collect();
    // a univariate member pins its variable to finitely many values
    let uni = gb
        .generators
        .iter()
        .filter_map(|g| {
            let s = g.support_vars();
            (s.len() == 1).then(|| (s[0], g.to_uni(s[0]).unwrap()))
        })
        .min_by_key(|(_, p)| p.degree().unwrap_or(0));
    let (var, candidates, pinned) = match uni {
        Some((v, p)) => (v, rational_roots(&p), true),
        None => {
            let v = *open.last().unwrap();
            (v, FREE_TRIALS.iter().map(|&c| int(c)).collect(), false)
        }
    };
    for c in candidates {
        let eqs2: Vec<CommPoly> =
            gb.generators.iter().map(|g| g.specialize(&[(var, c.clone())])).filter(|g| !g.is_zero()).collect();
        if eqs2.iter().any(|g| g.is_constant()) {
            continue;
        }
        let neq2 = neq.as_ref().map(|f| f.specialize(&[(var, c.clone())]));
        if !pinned || neq2.is_some() {
            let sys = AlgebraicSystem { vars: vars.clone(), equations: eqs2.clone(), inequation: neq2.clone() };
            if !solvable_with(&sys, budget)? {
                continue;
            }
        }
        assigned[var] = Some(c);
        if let Some(p) = search(vars, eqs2, neq2, assigned, budget)? {
            return Ok(Some(p));
        }
        assigned[var] = None;
    }
    Ok(None)
}

fn small_factors(mut n: BigInt) -> Vec<(BigInt, u32)> {
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    let limit = BigInt::from(100_000);
    while &d * &d <= n && d <= limit {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, e) in small_factors(n.abs()) {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
        if out.len() > 4096 {
            break;
        }
    }
    out
}

/// Rational roots by the rational root theorem, ascending.
pub(crate) fn rational_roots(p: &UniPoly) -> Vec<Scalar> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let den = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let shift = ints.iter().position(|c| !c.is_zero()).unwrap();
    let mut roots: Vec<Scalar> = Vec::new();
    if shift > 0 {
        roots.push(Scalar::zero());
    }
    let ints = &ints[shift..];
    if ints.len() > 1 {
        let (a0, an) = (&ints[0], ints.last().unwrap());
        let reduced = UniPoly::new(ints.iter().map(|c| Scalar::from_integer(c.clone())).collect());
        for num in divisors(a0) {
            for d in divisors(an) {
                for s in [1i64, -1] {
                    let r = Scalar::new(&num * s, d.clone());
                    if !roots.contains(&r) && reduced.eval(&r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots.sort_by(|a, b| {
        let ka = (a.abs(), a.is_negative());
        let kb = (b.abs(), b.is_negative());
        ka.cmp(&kb)
    });
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commalg::vars_of;
    use crate::groebner::tests::{arb_system, k, t};
    use crate::groebner::buchberger;
    use proptest::prelude::*;

    fn sys(eqs: Vec<CommPoly>, neq: Option<CommPoly>) -> AlgebraicSystem {
        AlgebraicSystem::new(vars_of(&["t1", "t2", "t3"]), eqs, neq).unwrap()
    }

    #[test]
    fn triviality() {
        assert!(ideal_is_trivial(&buchberger(&[k(1)], MonomialOrder::Lex)));
        assert!(!ideal_is_trivial(&buchberger(&[t(0)], MonomialOrder::Lex)));
        let gb = buchberger(&[&t(0) * &t(1), &t(0) + &t(1), &t(0) - &t(1)], MonomialOrder::DegRevLex);
        assert!(!ideal_is_trivial(&gb));
        assert_eq!(gb.generators.len(), 2);
    }

    #[test]
    fn radical_examples() {
        assert!(radical_member(&t(0), &[t(0).pow(2).unwrap()]));
        assert!(!radical_member(&t(1), &[t(0)]));
        let s = &t(0) + &t(1);
        assert!(radical_member(&s, &[s.pow(3).unwrap(), &t(0) * &t(1)]));
    }

    #[test]
    fn solvable_examples() {
        assert!(solvable(&sys(vec![&t(0) * &t(1)], Some(t(0)))));
        assert!(!solvable(&sys(vec![t(0), &t(0) - &k(1)], None)));
        assert!(solvable(&sys(vec![&t(0).pow(2).unwrap() + &k(1)], None)));
        assert!(!solvable(&sys(vec![t(0)], Some(t(0)))));
    }

    #[test]
    fn elimination_examples() {
        assert!(eliminate(&[&t(0) - &t(1).pow(2).unwrap()], &["t2"]).is_empty());
        let e = eliminate(&[&t(0) - &t(1), &t(0) + &t(1)], &["t2"]);
        assert_eq!(e, vec![CommPoly::var(0, vars_of(&["t2"]))]);
        let e = eliminate(&[t(0).pow(2).unwrap(), t(1)], &["t1"]);
        assert_eq!(e, vec![CommPoly::var(0, vars_of(&["t1"])).pow(2).unwrap()]);
    }

    #[test]
    fn rational_point_examples() {
        let two = vars_of(&["t1", "t2"]);
        let s = AlgebraicSystem::new(
            two.clone(),
            vec![&t(0) - &k(2), &t(1) - &t(0)].into_iter().map(|p| p.align(&two).unwrap()).collect(),
            None,
        )
        .unwrap();
        assert_eq!(rational_point(&s).unwrap(), Some(vec![int(2), int(2)]));
        let one = vars_of(&["t1"]);
        let t1 = CommPoly::var(0, one.clone());
        let four = CommPoly::constant(int(4), one.clone());
        let two_c = CommPoly::constant(int(2), one.clone());
        let s = AlgebraicSystem::new(one.clone(), vec![&(&t1 * &t1) - &four], Some(&t1 - &two_c)).unwrap();
        assert_eq!(rational_point(&s).unwrap(), Some(vec![int(-2)]));
        let s = AlgebraicSystem::new(one.clone(), vec![&(&t1 * &t1) - &two_c], None).unwrap();
        assert_eq!(rational_point(&s).unwrap(), None);
        let s = AlgebraicSystem::new(one, vec![t1.clone(), &t1 - &CommPoly::constant(int(1), vars_of(&["t1"]))], None).unwrap();
        assert_eq!(rational_point(&s), Err(Error::NoSolution));
    }

    #[test]
    fn free_variable_with_inequation() {
        let s = sys(vec![&t(0) - &t(1).pow(2).unwrap()], Some(&t(1) * &t(2)));
        let p = rational_point(&s).unwrap().unwrap();
        assert!(s.equations[0].eval(&p).is_zero());
        assert!(!s.inequation.unwrap().eval(&p).is_zero());
    }

    #[test]
    fn roots() {
        let p = UniPoly::from_ints(&[6, -5, 1]);
        assert_eq!(rational_roots(&p), vec![int(2), int(3)]);
        let q = UniPoly::from_ints(&[0, -1, 0, 4]);
        assert_eq!(rational_roots(&q), vec![int(0), crate::scalar::ratio(1, 2), crate::scalar::ratio(-1, 2)]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn order_independent(gens in arb_system()) {
            let vars = vars_of(&["t1", "t2", "t3"]);
            let lex = !buchberger_in(&gens, &vars, MonomialOrder::Lex, &Budget::unlimited()).unwrap().is_trivial();
            let drl = !buchberger_in(&gens, &vars, MonomialOrder::DegRevLex, &Budget::unlimited()).unwrap().is_trivial();
            prop_assert_eq!(lex, drl);
        }

        #[test]
        fn points_satisfy_system(gens in arb_system()) {
            let s = sys(gens, Some(t(0)));
            if solvable(&s) {
                if let Some(p) = rational_point(&s).unwrap() {
                    prop_assert!(s.equations.iter().all(|e| e.eval(&p).is_zero()));
                    prop_assert!(!s.inequation.as_ref().unwrap().eval(&p).is_zero());
                }
            }
        }
    }
}
