//! Pullback matrices of the forgetful maps `π_j : Mbar_{g,n} → Mbar_{g,2}` and
//! of the rational-tail gluing `α : Mbar_{g,2} → Mbar_{g,n}`. Curve classes are
//! pushed forward by the projection formula, `π_*B · D = B · π^*D`.

use std::collections::{BTreeMap, BTreeSet};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::picard::{pair, CurveFunctional, DivisorClass, GeneratorId, Marks, Space};
use crate::ratlin::Rational;

/// Pullback along a morphism `source → target`, stored as the image of every
/// target generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackMap {
    source: Space,
    target: Space,
    image: BTreeMap<GeneratorId, DivisorClass>,
}

impl PullbackMap {
    pub fn source(&self) -> Space {
        self.source
    }

    pub fn target(&self) -> Space {
        self.target
    }

    pub fn image(&self, gen: &GeneratorId) -> Option<&DivisorClass> {
        self.image.get(gen)
    }

    pub fn images(&self) -> impl Iterator<Item = (&GeneratorId, &DivisorClass)> {
        self.image.iter()
    }

    fn from_fn(
        source: Space,
        target: Space,
        mut f: impl FnMut(&GeneratorId) -> Result<DivisorClass, Error>,
    ) -> Result<Self, Error> {
        let image = target
            .generators()
            .into_iter()
            .map(|gen| Ok((gen.clone(), f(&gen)?)))
            .collect::<Result<BTreeMap<_, _>, Error>>()?;
        Ok(PullbackMap {
            source,
            target,
            image,
        })
    }
}

fn sum_of(space: Space, gens: BTreeSet<GeneratorId>, sign: i64) -> Result<DivisorClass, Error> {
    DivisorClass::from_terms(space, gens.into_iter().map(|g| (g, Rational::from(sign))))
}

/// Genus-0 boundary divisors `δ_{0:S}` of `space` with `S` satisfying `keep`.
fn rational_tails(space: Space, keep: impl Fn(&Marks) -> bool) -> BTreeSet<GeneratorId> {
    Marks::all_subsets(space.n)
        .filter(|s| s.len() >= 2 && keep(s))
        .map(|s| space.canonicalize(0, &s).expect("|S| >= 2"))
        .collect()
}

/// `π_j : Mbar_{g,n} → Mbar_{g,2}` keeping markings `j` (as 1) and `n` (as 2).
pub fn forget_to_two(source: Space, j: u32) -> Result<PullbackMap, Error> {
    let n = source.n;
    if n < 3 {
        return Err(Error::Precondition {
            what: "n >= 3",
            space: source,
        });
    }
    if !(1..n).contains(&j) {
        return Err(Error::MarkingOutOfRange {
            index: j,
            max: n - 1,
        });
    }
    let target = Space::new(source.g, 2)?;
    PullbackMap::from_fn(source, target, |gen| match gen {
        GeneratorId::Lambda | GeneratorId::DeltaIrr => DivisorClass::generator(source, gen.clone()),
        GeneratorId::Psi(1) => {
            let tails = rational_tails(source, |s| s.contains(j) && !s.contains(n));
            DivisorClass::generator(source, GeneratorId::Psi(j))?.plus(&sum_of(source, tails, -1)?)
        }
        GeneratorId::Psi(_) => {
            let tails = rational_tails(source, |s| s.contains(n) && !s.contains(j));
            DivisorClass::generator(source, GeneratorId::Psi(n))?.plus(&sum_of(source, tails, -1)?)
        }
        GeneratorId::DeltaSep { genus: 0, .. } => sum_of(
            source,
            rational_tails(source, |s| s.contains(j) && s.contains(n)),
            1,
        ),
        GeneratorId::DeltaSep { genus, marks } => {
            let over: BTreeSet<GeneratorId> = Marks::all_subsets(n)
                .filter(|s| {
                    s.contains(j) == marks.contains(1) && s.contains(n) == marks.contains(2)
                })
                .map(|s| source.canonicalize(*genus, &s))
                .collect::<Result<_, _>>()?;
            sum_of(source, over, 1)
        }
    })
}

/// `α : Mbar_{g,2} → Mbar_{g,n}` attaching a fixed general rational tail
/// carrying markings `1..n-1` at the first marking; the second marking becomes
/// marking `n`.
pub fn glue_rational_tail(target: Space) -> Result<PullbackMap, Error> {
    let n = target.n;
    if n < 3 {
        return Err(Error::Precondition {
            what: "n >= 3",
            space: target,
        });
    }
    let source = Space::new(target.g, 2)?;
    let gen = |g: GeneratorId| DivisorClass::generator(source, g);

    let mut images: BTreeMap<GeneratorId, DivisorClass> = BTreeMap::new();
    images.insert(GeneratorId::Lambda, gen(GeneratorId::Lambda)?);
    images.insert(GeneratorId::DeltaIrr, gen(GeneratorId::DeltaIrr)?);
    images.insert(GeneratorId::Psi(n), gen(GeneratorId::Psi(2))?);
    let node_side: Vec<u32> = (1..n).collect();
    let all: Vec<u32> = (1..=n).collect();
    images.insert(
        target.delta(0, &node_side)?,
        gen(GeneratorId::Psi(1))?.scaled(&-Rational::one()),
    );
    images.insert(target.delta(0, &all)?, gen(source.delta(0, &[1, 2])?)?);
    for i in 1..target.g {
        images.insert(target.delta(i, &[n])?, gen(source.delta(i, &[2])?)?);
        images.insert(target.delta(i, &[])?, gen(source.delta(i, &[])?)?);
    }
    PullbackMap::from_fn(source, target, |g| {
        Ok(images
            .get(g)
            .cloned()
            .unwrap_or_else(|| DivisorClass::zero(source)))
    })
}

pub fn pullback(map: &PullbackMap, d: &DivisorClass) -> Result<DivisorClass, Error> {
    if d.space() != map.target {
        return Err(Error::SpaceMismatch {
            left: map.target,
            right: d.space(),
        });
    }
    d.terms()
        .try_fold(DivisorClass::zero(map.source), |acc, (g, c)| {
            acc.add_scaled(c, &map.image[g])
        })
}

/// Pushforward of a curve class: its pairing with each target generator is
/// the source pairing with that generator's pullback.
pub fn pushforward(b: &CurveFunctional, map: &PullbackMap) -> Result<CurveFunctional, Error> {
    if b.space() != map.source {
        return Err(Error::SpaceMismatch {
            left: map.source,
            right: b.space(),
        });
    }
    let pairings = map
        .image
        .iter()
        .map(|(g, d)| Ok((g.clone(), pair(b, d)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    CurveFunctional::new(map.target, pairings)
}

impl Serialize for PullbackMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Images<'a>(&'a BTreeMap<GeneratorId, DivisorClass>);
        impl Serialize for Images<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (g, d) in self.0 {
                    map.serialize_entry(&g.to_string(), d)?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("source", &self.source)?;
        map.serialize_entry("target", &self.target)?;
        map.serialize_entry("image", &Images(&self.image))?;
        map.end()
    }
}
