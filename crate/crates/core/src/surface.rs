//! The test surface `i : C × C → Mbar_{g,2}` for a general curve `C`.
//!
//! The numerical classes on `C × C` used here are the two fibre classes `f1`,
//! `f2` and the diagonal `Δ`, with `f_i² = 0`, `f1·f2 = f_i·Δ = 1` and
//! `Δ² = 2 - 2g`. Only `ψ1`, `ψ2` and `δ_{0:{1,2}}` restrict nontrivially:
//! `i^*ψ_i = (2g-2) f_i + Δ` and `i^*δ_{0:{1,2}} = Δ`.
//!
//! For a divisor `D` the curve class `B_D = i_* i^* D` gives a numerical
//! rigidity test: if `D` is irreducible and `B_D · D < 0` then `D` is rigid and
//! extremal in the effective cone and `B_D` is a covering curve for it.

use serde::Serialize;

use crate::error::Error;
use crate::picard::{pair, CurveFunctional, DivisorClass, GeneratorId, Space};
use crate::ratlin::Rational;

/// Numerical class `a·f1 + b·f2 + c·Δ` on `C × C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceClass {
    pub g: u32,
    pub coords: [Rational; 3],
}

impl SurfaceClass {
    pub fn new(g: u32, f1: Rational, f2: Rational, diagonal: Rational) -> Self {
        SurfaceClass {
            g,
            coords: [f1, f2, diagonal],
        }
    }

    pub fn f1(g: u32) -> Self {
        SurfaceClass::new(g, Rational::one(), Rational::zero(), Rational::zero())
    }

    pub fn f2(g: u32) -> Self {
        SurfaceClass::new(g, Rational::zero(), Rational::one(), Rational::zero())
    }

    pub fn diagonal(g: u32) -> Self {
        SurfaceClass::new(g, Rational::zero(), Rational::zero(), Rational::one())
    }

    fn gram(g: u32) -> [[Rational; 3]; 3] {
        let one = Rational::one;
        let zero = Rational::zero;
        [
            [zero(), one(), one()],
            [one(), zero(), one()],
            [one(), one(), Rational::from(2 - 2 * i64::from(g))],
        ]
    }
}

/// Intersection form on `C × C`.
pub fn ns_product(u: &SurfaceClass, v: &SurfaceClass) -> Result<Rational, Error> {
    if u.g != v.g {
        return Err(Error::GenusMismatch(u.g, v.g));
    }
    let gram = SurfaceClass::gram(u.g);
    let mut total = Rational::zero();
    for (i, row) in gram.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            if !entry.is_zero() {
                total += &(&u.coords[i] * entry) * &v.coords[j];
            }
        }
    }
    Ok(total)
}

fn require_two_points(space: Space) -> Result<(), Error> {
    if space.n == 2 {
        Ok(())
    } else {
        Err(Error::Precondition {
            what: "n = 2",
            space,
        })
    }
}

fn diagonal_gen(space: Space) -> GeneratorId {
    space
        .delta(0, &[1, 2])
        .expect("delta_0:{1,2} exists when n = 2")
}

/// `i^* d` on `C × C`.
pub fn restrict_to_surface(d: &DivisorClass) -> Result<SurfaceClass, Error> {
    let space = d.space();
    require_two_points(space)?;
    let c1 = d.coeff(&GeneratorId::Psi(1));
    let c2 = d.coeff(&GeneratorId::Psi(2));
    let c0 = d.coeff(&diagonal_gen(space));
    let canonical_degree = Rational::from(2 * i64::from(space.g) - 2);
    Ok(SurfaceClass::new(
        space.g,
        &c1 * &canonical_degree,
        &c2 * &canonical_degree,
        c1 + c2 + c0,
    ))
}

/// The curve class `B_d = i_* i^* d`.
pub fn b_class(d: &DivisorClass) -> Result<CurveFunctional, Error> {
    let space = d.space();
    let restricted = restrict_to_surface(d)?;
    let pairings = [
        GeneratorId::Psi(1),
        GeneratorId::Psi(2),
        diagonal_gen(space),
    ]
    .into_iter()
    .map(|gen| {
        let image = restrict_to_surface(&DivisorClass::generator(space, gen.clone())?)?;
        Ok((gen, ns_product(&restricted, &image)?))
    })
    .collect::<Result<Vec<_>, Error>>()?;
    CurveFunctional::new(space, pairings)
}

/// Closed form of `B_D · D` in terms of the `ψ1`, `ψ2`, `δ_{0:{1,2}}`
/// coefficients.
pub fn bdd_formula(c1: &Rational, c2: &Rational, c0: &Rational, g: u32) -> Rational {
    let g = Rational::from(g);
    let two = Rational::from(2);
    let four = Rational::from(4);
    let sum = c1 + c2;
    let bracket = (&four * &g - &four) * c1 * c2 + &sum * &sum - c0 * c0;
    (&two * &g - &two) * bracket
}

/// The bracketed quadratic form whose sign decides `B_D · D`.
fn rigidity_form(c1: &Rational, c2: &Rational, c0: &Rational, g: u32) -> Rational {
    let sum = c1 + c2;
    Rational::from(4 * i64::from(g) - 4) * c1 * c2 + &sum * &sum - c0 * c0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "rigid_extremal")]
    RigidExtremal,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

/// Outcome of the covering-curve test. `RigidExtremal` is only issued when the
/// self-pairing is negative and the caller vouched for irreducibility, which
/// cannot be checked numerically. `Inconclusive` makes no claim either way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalityCertificate {
    pub divisor: DivisorClass,
    pub pairing_value: Rational,
    pub irreducibility_asserted: bool,
    pub verdict: Verdict,
}

pub fn extremality_certificate(
    d: &DivisorClass,
    caller_asserts_irreducible: bool,
) -> Result<ExtremalityCertificate, Error> {
    let pairing_value = pair(&b_class(d)?, d)?;
    let verdict = if pairing_value.is_negative() && caller_asserts_irreducible {
        Verdict::RigidExtremal
    } else {
        Verdict::Inconclusive
    };
    Ok(ExtremalityCertificate {
        divisor: d.clone(),
        pairing_value,
        irreducibility_asserted: caller_asserts_irreducible,
        verdict,
    })
}

/// `d = moving + multiplier · e` with `B_e · moving = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseLocusSplit {
    pub moving: DivisorClass,
    pub multiplier: Rational,
}

/// Splits off the forced multiple of a rigid divisor `e` from `d`. Requires
/// `B_e · e < 0` and `B_e · d < 0`; the split is the same for every multiple
/// `kd`, so it is returned normalised to `k = 1`.
pub fn base_locus_split(d: &DivisorClass, e: &DivisorClass) -> Result<BaseLocusSplit, Error> {
    let be = b_class(e)?;
    let self_pairing = pair(&be, e)?;
    let cross = pair(&be, d)?;
    if !self_pairing.is_negative() {
        return Err(Error::HypothesisNotMet(format!(
            "B_E . E = {self_pairing} is not negative"
        )));
    }
    if !cross.is_negative() {
        return Err(Error::HypothesisNotMet(format!(
            "B_E . D = {cross} is not negative"
        )));
    }
    let multiplier = &cross / &self_pairing;
    let moving = d.add_scaled(&-&multiplier, e)?;
    debug_assert!(pair(&be, &moving)?.is_zero());
    Ok(BaseLocusSplit { moving, multiplier })
}

/// What the covering-curve test says about a class proposed as a limit of
/// effective divisors on the dual face of the fibre class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayProbe {
    pub divisor: DivisorClass,
    pub self_pairing: Rational,
    pub formula_value: Rational,
    pub quadratic_form: Rational,
    pub negative: bool,
    /// A negative self-pairing forces a rigid extremal component with positive
    /// fibre degree, so the class cannot sit on the fibre's dual face.
    pub excluded_from_fibre_face: bool,
}

pub fn pseudo_effective_ray_probe(d: &DivisorClass) -> Result<RayProbe, Error> {
    let space = d.space();
    let self_pairing = pair(&b_class(d)?, d)?;
    let c1 = d.coeff(&GeneratorId::Psi(1));
    let c2 = d.coeff(&GeneratorId::Psi(2));
    let c0 = d.coeff(&diagonal_gen(space));
    let formula_value = bdd_formula(&c1, &c2, &c0, space.g);
    if formula_value != self_pairing {
        return Err(Error::AssertionFailed(format!(
            "lattice value {self_pairing} differs from closed form {formula_value}"
        )));
    }
    let quadratic_form = rigidity_form(&c1, &c2, &c0, space.g);
    let negative = self_pairing.is_negative();
    Ok(RayProbe {
        divisor: d.clone(),
        self_pairing,
        formula_value,
        excluded_from_fibre_face: negative && quadratic_form.is_negative(),
        quadratic_form,
        negative,
    })
}

/// `[H] = ψ1 + ψ2 - λ - 3δ_{0:{1,2}} - δ_{1:∅}` on `Mbar_{2,2}`, the closure of
/// the locus where the two markings are hyperelliptic conjugates.
pub fn hyperelliptic_conjugate_divisor() -> DivisorClass {
    let space = Space { g: 2, n: 2 };
    DivisorClass::from_terms(
        space,
        [
            (GeneratorId::Psi(1), Rational::one()),
            (GeneratorId::Psi(2), Rational::one()),
            (GeneratorId::Lambda, -Rational::one()),
            (diagonal_gen(space), Rational::from(-3)),
            (GeneratorId::delta(1, []), -Rational::one()),
        ],
    )
    .expect("valid generators")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::{q, qi};
    use crate::sample;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sp(g: u32) -> Space {
        Space::new(g, 2).unwrap()
    }

    fn gen_class(g: u32, gen: GeneratorId) -> DivisorClass {
        DivisorClass::generator(sp(g), gen).unwrap()
    }

    fn d12(g: u32) -> DivisorClass {
        gen_class(g, sp(g).delta(0, &[1, 2]).unwrap())
    }

    #[test]
    fn ns_examples() {
        assert_eq!(
            ns_product(&SurfaceClass::diagonal(3), &SurfaceClass::diagonal(3)).unwrap(),
            qi(-4)
        );
        assert_eq!(
            ns_product(&SurfaceClass::f1(3), &SurfaceClass::f2(3)).unwrap(),
            qi(1)
        );
        assert_eq!(
            ns_product(&SurfaceClass::f1(3), &SurfaceClass::f1(3)).unwrap(),
            qi(0)
        );
        assert_eq!(
            ns_product(&SurfaceClass::f1(3), &SurfaceClass::f1(4)),
            Err(Error::GenusMismatch(3, 4))
        );
    }

    #[test]
    fn restriction_examples() {
        assert_eq!(
            restrict_to_surface(&gen_class(2, GeneratorId::Psi(1))).unwrap(),
            SurfaceClass::new(2, qi(2), qi(0), qi(1))
        );
        assert_eq!(
            restrict_to_surface(&gen_class(2, GeneratorId::Lambda)).unwrap(),
            SurfaceClass::new(2, qi(0), qi(0), qi(0))
        );
        assert_eq!(
            restrict_to_surface(&hyperelliptic_conjugate_divisor()).unwrap(),
            SurfaceClass::new(2, qi(2), qi(2), qi(-1))
        );
        let wrong = DivisorClass::zero(Space::new(2, 3).unwrap());
        assert!(restrict_to_surface(&wrong).is_err());
        assert!(b_class(&wrong).is_err());
    }

    #[test]
    fn b_class_examples() {
        for g in 2..=10 {
            let d = d12(g);
            assert_eq!(
                pair(&b_class(&d).unwrap(), &d).unwrap(),
                Rational::from(2 - 2 * i64::from(g))
            );
        }
        let h = hyperelliptic_conjugate_divisor();
        assert_eq!(pair(&b_class(&h).unwrap(), &h).unwrap(), qi(-2));
        assert!(b_class(&DivisorClass::zero(sp(3))).unwrap().is_zero());
    }

    #[test]
    fn bdd_examples() {
        assert_eq!(bdd_formula(&qi(1), &qi(1), &qi(-3), 2), qi(-2));
        for g in 2..=8 {
            assert_eq!(
                bdd_formula(&qi(0), &qi(0), &qi(1), g),
                Rational::from(2 - 2 * i64::from(g))
            );
        }
        // c1 = (1-2g)c2 - c0 at c2 = 1, c0 = 0, g = 2.
        assert_eq!(bdd_formula(&qi(-3), &qi(1), &qi(0), 2), qi(-16));
    }

    #[test]
    fn certificate_examples() {
        let c = extremality_certificate(&d12(3), true).unwrap();
        assert_eq!(
            (c.pairing_value.clone(), c.verdict),
            (qi(-4), Verdict::RigidExtremal)
        );
        let c = extremality_certificate(&hyperelliptic_conjugate_divisor(), true).unwrap();
        assert_eq!(
            (c.pairing_value.clone(), c.verdict),
            (qi(-2), Verdict::RigidExtremal)
        );
        let c = extremality_certificate(&gen_class(2, GeneratorId::Psi(1)), true).unwrap();
        assert_eq!(
            (c.pairing_value.clone(), c.verdict),
            (qi(2), Verdict::Inconclusive)
        );
        let c = extremality_certificate(&d12(3), false).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn split_examples() {
        let e = d12(4);
        let s = base_locus_split(&e, &e).unwrap();
        assert_eq!(s.multiplier, qi(1));
        assert!(s.moving.is_zero());

        let h = hyperelliptic_conjugate_divisor();
        let s = base_locus_split(&h.scaled(&qi(2)), &h).unwrap();
        assert_eq!(s.multiplier, qi(2));
        assert!(s.moving.is_zero());

        let bh = b_class(&h).unwrap();
        let psi1 = gen_class(2, GeneratorId::Psi(1));
        assert_eq!(pair(&bh, &psi1).unwrap(), qi(8));
        assert!(matches!(
            base_locus_split(&h.plus(&psi1).unwrap(), &h),
            Err(Error::HypothesisNotMet(_))
        ));
        assert!(matches!(
            base_locus_split(&h, &psi1),
            Err(Error::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn split_with_fractional_multiplier() {
        let h = hyperelliptic_conjugate_divisor();
        let d = h.add_scaled(&q(1, 4), &d12(2)).unwrap();
        let s = base_locus_split(&d, &h).unwrap();
        assert_eq!(s.multiplier, q(1, 4));
        assert!(pair(&b_class(&h).unwrap(), &s.moving).unwrap().is_zero());
        assert_eq!(s.moving.add_scaled(&s.multiplier, &h).unwrap(), d);
    }

    #[test]
    fn probe_examples() {
        let s = sp(2);
        let family = DivisorClass::from_terms(
            s,
            [(GeneratorId::Psi(1), qi(-3)), (GeneratorId::Psi(2), qi(1))],
        )
        .unwrap();
        let p = pseudo_effective_ray_probe(&family).unwrap();
        assert_eq!(p.self_pairing, qi(-16));
        assert!(p.negative && p.excluded_from_fibre_face);

        let p = pseudo_effective_ray_probe(&d12(5)).unwrap();
        assert_eq!(p.self_pairing, qi(-8));
        assert!(p.negative);

        let p = pseudo_effective_ray_probe(&gen_class(2, GeneratorId::Lambda)).unwrap();
        assert_eq!(p.self_pairing, qi(0));
        assert!(!p.negative && !p.excluded_from_fibre_face);
    }

    proptest! {
        #[test]
        fn lattice_matches_closed_form(g in 2u32..=6, seed: u64) {
            let d = sample::dense_class(sp(g), &mut ChaCha8Rng::seed_from_u64(seed));
            let lattice = pair(&b_class(&d).unwrap(), &d).unwrap();
            let closed = bdd_formula(
                &d.coeff(&GeneratorId::Psi(1)),
                &d.coeff(&GeneratorId::Psi(2)),
                &d.coeff(&sp(g).delta(0, &[1, 2]).unwrap()),
                g,
            );
            prop_assert_eq!(lattice, closed);
        }

        #[test]
        fn b_class_is_symmetric_and_supported(g in 2u32..=5, seed: u64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = sample::dense_class(sp(g), &mut rng);
            let e = sample::dense_class(sp(g), &mut rng);
            let bd = b_class(&d).unwrap();
            prop_assert_eq!(pair(&bd, &e).unwrap(), pair(&b_class(&e).unwrap(), &d).unwrap());
            let allowed = [GeneratorId::Psi(1), GeneratorId::Psi(2), sp(g).delta(0, &[1, 2]).unwrap()];
            prop_assert!(bd.terms().all(|(gen, _)| allowed.contains(gen)));
            bd.check_relation().unwrap();
        }
    }
}
