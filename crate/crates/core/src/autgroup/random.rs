use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AutWord, ElementaryAut};
use crate::commalg::UniPoly;
use crate::scalar::{int, Scalar};

fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> Scalar {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return int(v);
        }
    }
}

fn any(rng: &mut ChaCha8Rng, bound: i64) -> Scalar {
    int(rng.gen_range(-bound..=bound))
}

/// Reproducible random word of `1..=max_factors` elementary automorphisms.
/// Coefficients are integers in `[-coeff_bound, coeff_bound]`.
pub fn random_tame(seed: u64, max_factors: usize, max_p_degree: usize, coeff_bound: i64) -> AutWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = coeff_bound.max(1);
    let n = rng.gen_range(1..=max_factors.max(1));
    let mut factors = Vec::with_capacity(n);
    for _ in 0..n {
        let e = match rng.gen_range(0..3) {
            0 => ElementaryAut::tau(),
            1 => loop {
                let (a, c, e, b, d, f) = (
                    any(&mut rng, bound),
                    any(&mut rng, bound),
                    any(&mut rng, bound),
                    any(&mut rng, bound),
                    any(&mut rng, bound),
                    any(&mut rng, bound),
                );
                if !(&a * &d - &c * &b).is_zero() {
                    break ElementaryAut::Affine { a, c, e, b, d, f };
                }
            },
            _ => {
                let deg = rng.gen_range(0..=max_p_degree);
                let mut coeffs: Vec<Scalar> = (0..deg).map(|_| any(&mut rng, bound)).collect();
                coeffs.push(nonzero(&mut rng, bound));
                ElementaryAut::Triangular {
                    alpha: nonzero(&mut rng, bound),
                    p: UniPoly::new(coeffs),
                    beta: nonzero(&mut rng, bound),
                    eta: any(&mut rng, bound),
                }
            }
        };
        factors.push(e);
    }
    AutWord::new(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::FreePoly;

    #[test]
    fn deterministic_and_valid() {
        let w = random_tame(1, 1, 2, 3);
        assert_eq!(w.factors.len(), 1);
        assert_eq!(w, random_tame(1, 1, 2, 3));
        for seed in 0..50 {
            let w = random_tame(seed, 5, 3, 4);
            assert!(!w.theta().is_zero());
            let back = AutWord::compose(&w.invert(), &w);
            assert_eq!(back.apply(&FreePoly::x()).unwrap(), FreePoly::x());
        }
    }
}
