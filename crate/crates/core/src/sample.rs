//! Seeded random divisor classes and curve functionals for property checks.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::picard::{CurveFunctional, DivisorClass, GeneratorId, Space};
use crate::ratlin::{q, Rational};

/// Uniform over `a/b` with `|a| <= max_abs`, `1 <= b <= max_den`.
pub fn rational<R: Rng>(rng: &mut R, max_abs: i64, max_den: i64) -> Rational {
    q(
        rng.random_range(-max_abs..=max_abs),
        rng.random_range(1..=max_den),
    )
}

fn terms<R: Rng>(space: Space, rng: &mut R, nonzero: usize) -> Vec<(GeneratorId, Rational)> {
    let gens = space.generators();
    (0..nonzero)
        .map(|_| {
            let g = gens.choose(rng).expect("at least lambda").clone();
            (g, rational(rng, 9, 5))
        })
        .collect()
}

/// Random class with up to `nonzero` nonzero coefficients.
pub fn class<R: Rng>(space: Space, rng: &mut R, nonzero: usize) -> DivisorClass {
    DivisorClass::from_terms(space, terms(space, rng, nonzero)).expect("generators are canonical")
}

/// Random class with every coefficient drawn independently.
pub fn dense_class<R: Rng>(space: Space, rng: &mut R) -> DivisorClass {
    let terms: Vec<_> = space
        .generators()
        .into_iter()
        .map(|g| (g, rational(rng, 9, 5)))
        .collect();
    DivisorClass::from_terms(space, terms).expect("generators are canonical")
}

/// Random curve functional; in genus 2 the λ-pairing is solved from the
/// relation so the result is a valid numerical class.
pub fn functional<R: Rng>(space: Space, rng: &mut R, nonzero: usize) -> CurveFunctional {
    let mut ts = terms(space, rng, nonzero);
    if let Some(rel) = space.relation_class() {
        ts.retain(|(g, _)| *g != GeneratorId::Lambda);
        let others: Rational = rel
            .terms()
            .filter(|(g, _)| **g != GeneratorId::Lambda)
            .map(|(g, c)| {
                let v: Rational = ts.iter().filter(|(h, _)| h == g).map(|(_, v)| v).sum();
                c * v
            })
            .sum();
        ts.push((GeneratorId::Lambda, -others));
    }
    CurveFunctional::new(space, ts).expect("relation enforced")
}
