//! Standard generators of the rational Picard group of the moduli space of
//! stable pointed curves, divisor classes over them, and curve classes seen
//! as linear functionals on those generators.
//!
//! Sign convention: boundary coefficients carry their natural sign, so a class
//! is written `c_λ λ + Σ c_ψi ψ_i + c_irr δ_irr + Σ c_{i:S} δ_{i:S}` with no
//! extra minus signs in front of the boundary terms.
//!
//! A separating boundary divisor `δ_{i:S}` is the same divisor as
//! `δ_{g-i:S^c}`. Of the two labels we keep the one with the smaller genus
//! part; when both genus parts agree we keep the marking set whose sorted
//! element list is lexicographically smaller (the empty set first).
//!
//! In genus 2 the generators satisfy one linear relation. Classes are stored
//! in the free module; [`DivisorClass::eq_mod_relation`] compares modulo it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::ratlin::{q, Matrix, Rational};

/// The moduli space of stable genus-`g` curves with `n` markings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Space {
    pub g: u32,
    pub n: u32,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mbar_{{{},{}}}", self.g, self.n)
    }
}

/// A sorted set of marking labels in `1..=n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Marks(Vec<u32>);

impl Marks {
    pub fn new(marks: impl IntoIterator<Item = u32>) -> Self {
        let set: BTreeSet<u32> = marks.into_iter().collect();
        Marks(set.into_iter().collect())
    }

    pub fn empty() -> Self {
        Marks(Vec::new())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: u32) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn complement(&self, n: u32) -> Marks {
        Marks((1..=n).filter(|i| !self.contains(*i)).collect())
    }

    /// All subsets of `{1..n}`.
    pub fn all_subsets(n: u32) -> impl Iterator<Item = Marks> {
        (0u64..1 << n)
            .map(move |mask| Marks((1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect()))
    }
}

impl fmt::Display for Marks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// One standard generator. The derived order is the canonical generator order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorId {
    Lambda,
    Psi(u32),
    DeltaIrr,
    DeltaSep { genus: u32, marks: Marks },
}

impl GeneratorId {
    pub fn delta(genus: u32, marks: impl IntoIterator<Item = u32>) -> Self {
        GeneratorId::DeltaSep {
            genus,
            marks: Marks::new(marks),
        }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorId::Lambda => write!(f, "lambda"),
            GeneratorId::Psi(i) => write!(f, "psi{i}"),
            GeneratorId::DeltaIrr => write!(f, "delta_irr"),
            GeneratorId::DeltaSep { genus, marks } => write!(f, "delta_{genus}:{marks}"),
        }
    }
}

impl FromStr for GeneratorId {
    type Err = Error;

    /// Parses the textual key form; the result is not yet canonicalized.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("unknown generator key {s:?}"));
        let s = s.trim();
        match s {
            "lambda" => return Ok(GeneratorId::Lambda),
            "delta_irr" | "delta_0" => return Ok(GeneratorId::DeltaIrr),
            _ => {}
        }
        if let Some(idx) = s.strip_prefix("psi") {
            return idx.parse().map(GeneratorId::Psi).map_err(|_| bad());
        }
        let rest = s.strip_prefix("delta_").ok_or_else(bad)?;
        let (genus, set) = rest.split_once(':').ok_or_else(bad)?;
        let genus: u32 = genus.parse().map_err(|_| bad())?;
        let inner = set
            .strip_prefix('{')
            .and_then(|x| x.strip_suffix('}'))
            .ok_or_else(bad)?;
        let marks = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?
        };
        Ok(GeneratorId::delta(genus, marks))
    }
}

impl Space {
    pub fn new(g: u32, n: u32) -> Result<Self, Error> {
        if g < 2 {
            return Err(Error::GenusOutOfRange(g));
        }
        Ok(Space { g, n })
    }

    fn boundary_valid(&self, genus: u32, marks: &Marks) -> bool {
        genus <= self.g
            && marks.as_slice().iter().all(|&i| (1..=self.n).contains(&i))
            && !(genus == 0 && marks.len() < 2)
            && !(genus == self.g && marks.len() + 2 > self.n as usize)
    }

    /// Canonical label of `δ_{genus:marks}` on this space.
    pub fn canonicalize(&self, genus: u32, marks: &Marks) -> Result<GeneratorId, Error> {
        if !self.boundary_valid(genus, marks) {
            return Err(Error::InvalidBoundary {
                space: *self,
                genus,
                marks: marks.as_slice().to_vec(),
            });
        }
        let other_genus = self.g - genus;
        let other = marks.complement(self.n);
        let keep_first = genus < other_genus || (genus == other_genus && marks <= &other);
        Ok(if keep_first {
            GeneratorId::DeltaSep {
                genus,
                marks: marks.clone(),
            }
        } else {
            GeneratorId::DeltaSep {
                genus: other_genus,
                marks: other,
            }
        })
    }

    /// Canonical boundary generator from a genus part and a list of markings.
    pub fn delta(&self, genus: u32, marks: &[u32]) -> Result<GeneratorId, Error> {
        self.canonicalize(genus, &Marks::new(marks.iter().copied()))
    }

    pub fn psi(&self, i: u32) -> Result<GeneratorId, Error> {
        if (1..=self.n).contains(&i) {
            Ok(GeneratorId::Psi(i))
        } else {
            Err(Error::MarkingOutOfRange {
                index: i,
                max: self.n,
            })
        }
    }

    /// Re-labels a possibly non-canonical generator, rejecting ones that do
    /// not exist on this space.
    pub fn canonical(&self, gen: &GeneratorId) -> Result<GeneratorId, Error> {
        match gen {
            GeneratorId::Lambda | GeneratorId::DeltaIrr => Ok(gen.clone()),
            GeneratorId::Psi(i) => self.psi(*i),
            GeneratorId::DeltaSep { genus, marks } => self.canonicalize(*genus, marks),
        }
    }

    pub fn contains(&self, gen: &GeneratorId) -> bool {
        self.canonical(gen).is_ok_and(|c| &c == gen)
    }

    /// All generators in canonical order, each boundary divisor once.
    pub fn generators(&self) -> Vec<GeneratorId> {
        let mut out = vec![GeneratorId::Lambda];
        out.extend((1..=self.n).map(GeneratorId::Psi));
        out.push(GeneratorId::DeltaIrr);
        let mut seps = BTreeSet::new();
        for genus in 0..=self.g {
            for marks in Marks::all_subsets(self.n) {
                if let Ok(id) = self.canonicalize(genus, &marks) {
                    seps.insert(id);
                }
            }
        }
        out.extend(seps);
        out
    }

    pub fn picard_rank(&self) -> usize {
        self.generators().len() - usize::from(self.g == 2)
    }

    /// The genus-2 relation `λ - δ_irr/10 - (1/5) Σ δ_{1:S}` pulled back from
    /// the unmarked space, each distinct `δ_{1:S}` once. `None` for `g >= 3`.
    pub fn relation_class(&self) -> Option<DivisorClass> {
        if self.g != 2 {
            return None;
        }
        let mut terms = vec![
            (GeneratorId::Lambda, Rational::one()),
            (GeneratorId::DeltaIrr, q(-1, 10)),
        ];
        let deltas: BTreeSet<GeneratorId> = Marks::all_subsets(self.n)
            .map(|s| {
                self.canonicalize(1, &s)
                    .expect("genus-1 boundary is always valid")
            })
            .collect();
        terms.extend(deltas.into_iter().map(|d| (d, q(-1, 5))));
        Some(DivisorClass::from_terms(*self, terms).expect("relation generators are canonical"))
    }

    fn check(&self, gen: &GeneratorId) -> Result<(), Error> {
        if self.contains(gen) {
            Ok(())
        } else {
            Err(Error::ForeignGenerator {
                gen: gen.clone(),
                space: *self,
            })
        }
    }

    fn same(&self, other: &Space) -> Result<(), Error> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch {
                left: *self,
                right: *other,
            })
        }
    }
}

/// Sparse coefficient vector with zero entries dropped.
fn collect_terms(
    space: &Space,
    terms: impl IntoIterator<Item = (GeneratorId, Rational)>,
) -> Result<BTreeMap<GeneratorId, Rational>, Error> {
    let mut out: BTreeMap<GeneratorId, Rational> = BTreeMap::new();
    for (gen, c) in terms {
        space.check(&gen)?;
        *out.entry(gen).or_default() += c;
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// An exact divisor class on a fixed space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    space: Space,
    coeffs: BTreeMap<GeneratorId, Rational>,
}

impl DivisorClass {
    pub fn zero(space: Space) -> Self {
        DivisorClass {
            space,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds a class from `(generator, coefficient)` terms; repeated
    /// generators are summed and every generator must be canonical.
    pub fn from_terms(
        space: Space,
        terms: impl IntoIterator<Item = (GeneratorId, Rational)>,
    ) -> Result<Self, Error> {
        Ok(DivisorClass {
            space,
            coeffs: collect_terms(&space, terms)?,
        })
    }

    pub fn generator(space: Space, gen: GeneratorId) -> Result<Self, Error> {
        DivisorClass::from_terms(space, [(gen, Rational::one())])
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn coeff(&self, gen: &GeneratorId) -> Rational {
        self.coeffs.get(gen).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GeneratorId, &Rational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: &Rational, other: &DivisorClass) -> Result<Self, Error> {
        self.space.same(&other.space)?;
        let mut coeffs = self.coeffs.clone();
        for (gen, c) in &other.coeffs {
            *coeffs.entry(gen.clone()).or_default() += factor * c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(DivisorClass {
            space: self.space,
            coeffs,
        })
    }

    pub fn plus(&self, other: &DivisorClass) -> Result<Self, Error> {
        self.add_scaled(&Rational::one(), other)
    }

    pub fn minus(&self, other: &DivisorClass) -> Result<Self, Error> {
        self.add_scaled(&-Rational::one(), other)
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        DivisorClass::zero(self.space)
            .add_scaled(factor, self)
            .expect("same space")
    }

    /// Coefficient vector in the order of [`Space::generators`].
    pub fn to_vec(&self) -> Vec<Rational> {
        self.space
            .generators()
            .iter()
            .map(|g| self.coeff(g))
            .collect()
    }

    /// Equality modulo the genus-2 relation (plain equality in higher genus).
    pub fn eq_mod_relation(&self, other: &DivisorClass) -> Result<bool, Error> {
        let diff = self.minus(other)?;
        if diff.is_zero() {
            return Ok(true);
        }
        let Some(rel) = self.space.relation_class() else {
            return Ok(false);
        };
        let factor = diff.coeff(&GeneratorId::Lambda);
        Ok(diff.minus(&rel.scaled(&factor))?.is_zero())
    }
}

/// A numerical curve class, recorded by its intersection number with each
/// generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFunctional {
    space: Space,
    pairings: BTreeMap<GeneratorId, Rational>,
}

impl CurveFunctional {
    /// Validates generator keys and, in genus 2, that the relation class pairs
    /// to zero.
    pub fn new(
        space: Space,
        pairings: impl IntoIterator<Item = (GeneratorId, Rational)>,
    ) -> Result<Self, Error> {
        let b = CurveFunctional {
            space,
            pairings: collect_terms(&space, pairings)?,
        };
        b.check_relation()?;
        Ok(b)
    }

    pub fn zero(space: Space) -> Self {
        CurveFunctional {
            space,
            pairings: BTreeMap::new(),
        }
    }

    pub fn check_relation(&self) -> Result<(), Error> {
        if let Some(rel) = self.space.relation_class() {
            let v = pair(self, &rel)?;
            if !v.is_zero() {
                return Err(Error::Genus2RelationViolated(v.to_string()));
            }
        }
        Ok(())
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn pairing(&self, gen: &GeneratorId) -> Rational {
        self.pairings.get(gen).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GeneratorId, &Rational)> {
        self.pairings.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.pairings.is_empty()
    }

    pub fn plus(&self, other: &CurveFunctional) -> Result<Self, Error> {
        self.space.same(&other.space)?;
        let terms = self
            .pairings
            .iter()
            .chain(other.pairings.iter())
            .map(|(g, v)| (g.clone(), v.clone()));
        Ok(CurveFunctional {
            space: self.space,
            pairings: collect_terms(&self.space, terms)?,
        })
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        let terms = self.pairings.iter().map(|(g, v)| (g.clone(), factor * v));
        CurveFunctional {
            space: self.space,
            pairings: collect_terms(&self.space, terms).expect("keys already valid"),
        }
    }

    pub fn to_vec(&self) -> Vec<Rational> {
        self.space
            .generators()
            .iter()
            .map(|g| self.pairing(g))
            .collect()
    }
}

/// Intersection number of a curve class with a divisor class.
pub fn pair(b: &CurveFunctional, d: &DivisorClass) -> Result<Rational, Error> {
    b.space.same(&d.space)?;
    Ok(d.coeffs.iter().map(|(g, c)| c * b.pairing(g)).sum())
}

/// A divisor class known only on a declared set of generators; the remaining
/// coefficients are undetermined rather than zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialDivisorClass {
    space: Space,
    known: BTreeMap<GeneratorId, Rational>,
    support: BTreeSet<GeneratorId>,
}

impl PartialDivisorClass {
    pub fn new(
        space: Space,
        support: impl IntoIterator<Item = GeneratorId>,
        known: impl IntoIterator<Item = (GeneratorId, Rational)>,
    ) -> Result<Self, Error> {
        let support: BTreeSet<GeneratorId> = support.into_iter().collect();
        for gen in &support {
            space.check(gen)?;
        }
        let known = collect_terms(&space, known)?;
        if let Some(gen) = known.keys().find(|g| !support.contains(g)) {
            return Err(Error::UnknownCoefficientTouched(gen.clone()));
        }
        Ok(PartialDivisorClass {
            space,
            known,
            support,
        })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn support(&self) -> &BTreeSet<GeneratorId> {
        &self.support
    }

    /// Coefficient of a generator in the declared support, `None` outside it.
    pub fn coeff(&self, gen: &GeneratorId) -> Option<Rational> {
        self.support
            .contains(gen)
            .then(|| self.known.get(gen).cloned().unwrap_or_default())
    }
}

/// Pairing against a partially known class. Fails if the curve sees any
/// generator whose coefficient is undetermined.
pub fn pair_partial(b: &CurveFunctional, d: &PartialDivisorClass) -> Result<Rational, Error> {
    b.space.same(&d.space)?;
    if let Some((gen, _)) = b.pairings.iter().find(|(g, _)| !d.support.contains(*g)) {
        return Err(Error::UnknownCoefficientTouched(gen.clone()));
    }
    Ok(d.known.iter().map(|(g, c)| c * b.pairing(g)).sum())
}

/// Rank of the span of `classes` in the Picard group, taken modulo the
/// genus-2 relation when `g = 2`.
pub fn span_rank(space: Space, classes: &[DivisorClass]) -> Result<usize, Error> {
    let mut rows = Vec::with_capacity(classes.len() + 1);
    for d in classes {
        space.same(&d.space)?;
        rows.push(d.to_vec());
    }
    match space.relation_class() {
        Some(rel) => {
            rows.push(rel.to_vec());
            let with_rel = Matrix::from_rows(rows)?.rank();
            Ok(with_rel - 1)
        }
        None if rows.is_empty() => Ok(0),
        None => Ok(Matrix::from_rows(rows)?.rank()),
    }
}

fn serialize_terms<S: Serializer>(
    serializer: S,
    space: &Space,
    key: &str,
    terms: &BTreeMap<GeneratorId, Rational>,
) -> Result<S::Ok, S::Error> {
    struct Terms<'a>(&'a BTreeMap<GeneratorId, Rational>);
    impl Serialize for Terms<'_> {
        fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
            let mut map = serializer.serialize_map(Some(self.0.len()))?;
            for (g, c) in self.0 {
                map.serialize_entry(&g.to_string(), c)?;
            }
            map.end()
        }
    }
    let mut map = serializer.serialize_map(Some(3))?;
    map.serialize_entry("g", &space.g)?;
    map.serialize_entry("n", &space.n)?;
    map.serialize_entry(key, &Terms(terms))?;
    map.end()
}

#[derive(Deserialize)]
struct RawClass {
    g: u32,
    n: u32,
    #[serde(alias = "pairings")]
    coeffs: BTreeMap<String, Rational>,
}

impl RawClass {
    fn into_terms(self) -> Result<(Space, Vec<(GeneratorId, Rational)>), Error> {
        let space = Space::new(self.g, self.n)?;
        let terms = self
            .coeffs
            .into_iter()
            .map(|(k, v)| Ok((space.canonical(&k.parse()?)?, v)))
            .collect::<Result<Vec<_>, Error>>()?;
        Ok((space, terms))
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serialize_terms(serializer, &self.space, "coeffs", &self.coeffs)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (space, terms) = RawClass::deserialize(deserializer)?
            .into_terms()
            .map_err(D::Error::custom)?;
        DivisorClass::from_terms(space, terms).map_err(D::Error::custom)
    }
}

impl Serialize for CurveFunctional {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serialize_terms(serializer, &self.space, "coeffs", &self.pairings)
    }
}

impl<'de> Deserialize<'de> for CurveFunctional {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (space, terms) = RawClass::deserialize(deserializer)?
            .into_terms()
            .map_err(D::Error::custom)?;
        CurveFunctional::new(space, terms).map_err(D::Error::custom)
    }
}

impl Serialize for PartialDivisorClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("g", &self.space.g)?;
        map.serialize_entry("n", &self.space.n)?;
        let support: Vec<String> = self.support.iter().map(ToString::to_string).collect();
        map.serialize_entry("support", &support)?;
        let known: BTreeMap<GeneratorId, Rational> = self
            .support
            .iter()
            .map(|g| (g.clone(), self.known.get(g).cloned().unwrap_or_default()))
            .collect();
        struct Known<'a>(&'a BTreeMap<GeneratorId, Rational>);
        impl Serialize for Known<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (g, c) in self.0 {
                    map.serialize_entry(&g.to_string(), c)?;
                }
                map.end()
            }
        }
        map.serialize_entry("coeffs", &Known(&known))?;
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::qi;
    use proptest::prelude::*;

    fn sp(g: u32, n: u32) -> Space {
        Space::new(g, n).unwrap()
    }

    fn keys(space: Space) -> Vec<String> {
        space.generators().iter().map(ToString::to_string).collect()
    }

    /// Independent enumeration: every valid `(i, S)` pair, grouped into
    /// identification classes `{(i,S), (g-i,S^c)}`.
    fn brute_force_boundary_count(g: u32, n: u32) -> usize {
        let mut classes: BTreeSet<BTreeSet<(u32, Vec<u32>)>> = BTreeSet::new();
        for i in 0..=g {
            for mask in 0u32..1 << n {
                let s: Vec<u32> = (1..=n).filter(|k| mask >> (k - 1) & 1 == 1).collect();
                let sc: Vec<u32> = (1..=n).filter(|k| mask >> (k - 1) & 1 == 0).collect();
                let ok = !(i == 0 && s.len() < 2) && !(i == g && s.len() + 2 > n as usize);
                if ok {
                    classes.insert([(i, s), (g - i, sc)].into_iter().collect());
                }
            }
        }
        classes.len()
    }

    #[test]
    fn generators_g2_n2() {
        assert_eq!(
            keys(sp(2, 2)),
            [
                "lambda",
                "psi1",
                "psi2",
                "delta_irr",
                "delta_0:{1,2}",
                "delta_1:{}",
                "delta_1:{1}"
            ]
        );
    }

    #[test]
    fn generators_g3() {
        assert_eq!(keys(sp(3, 0)), ["lambda", "delta_irr", "delta_1:{}"]);
        assert_eq!(
            keys(sp(3, 1)),
            ["lambda", "psi1", "delta_irr", "delta_1:{}", "delta_1:{1}"]
        );
    }

    #[test]
    fn generator_count_matches_brute_force() {
        for g in 2..=6 {
            for n in 0..=8 {
                let gens = sp(g, n).generators();
                assert_eq!(
                    gens.len(),
                    2 + n as usize + brute_force_boundary_count(g, n)
                );
                let distinct: BTreeSet<_> = gens.iter().collect();
                assert_eq!(distinct.len(), gens.len());
                for gen in &gens {
                    assert_eq!(&sp(g, n).canonical(gen).unwrap(), gen);
                }
            }
        }
    }

    #[test]
    fn picard_rank_examples() {
        assert_eq!(sp(2, 2).picard_rank(), 6);
        assert_eq!(sp(2, 1).picard_rank(), 3);
        assert_eq!(sp(3, 0).picard_rank(), 3);
        for g in 2..=6 {
            for n in 0..=8 {
                let s = sp(g, n);
                assert_eq!(s.picard_rank(), s.generators().len() - usize::from(g == 2));
            }
        }
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(sp(3, 2).delta(2, &[1]).unwrap(), GeneratorId::delta(1, [2]));
        assert_eq!(
            sp(2, 2).delta(1, &[1, 2]).unwrap(),
            GeneratorId::delta(1, [])
        );
        assert_eq!(sp(4, 2).delta(2, &[2]).unwrap(), GeneratorId::delta(2, [1]));
        assert_eq!(sp(4, 2).delta(2, &[1]).unwrap(), GeneratorId::delta(2, [1]));
    }

    #[test]
    fn canonicalize_rejects_invalid() {
        assert!(sp(3, 2).delta(0, &[1]).is_err());
        assert!(sp(3, 2).delta(3, &[1]).is_err());
        assert!(sp(3, 2).delta(4, &[]).is_err());
        assert!(sp(3, 2).delta(1, &[3]).is_err());
        assert!(sp(3, 2).psi(3).is_err());
        assert!(Space::new(1, 2).is_err());
    }

    #[test]
    fn relation_examples() {
        let r0 = sp(2, 0).relation_class().unwrap();
        let expect0 = DivisorClass::from_terms(
            sp(2, 0),
            [
                (GeneratorId::Lambda, qi(1)),
                (GeneratorId::DeltaIrr, q(-1, 10)),
                (GeneratorId::delta(1, []), q(-1, 5)),
            ],
        )
        .unwrap();
        assert_eq!(r0, expect0);

        let r2 = sp(2, 2).relation_class().unwrap();
        assert_eq!(r2.coeff(&GeneratorId::delta(1, [])), q(-1, 5));
        assert_eq!(r2.coeff(&GeneratorId::delta(1, [1])), q(-1, 5));
        assert_eq!(r2.terms().count(), 4);
        assert!(sp(3, 1).relation_class().is_none());
    }

    #[test]
    fn relation_fold_counts() {
        // Each distinct δ_{1:S} arises from exactly the two labels S and S^c.
        for n in 1..=4 {
            let s = sp(2, n);
            let rel = s.relation_class().unwrap();
            let n_delta = rel
                .terms()
                .filter(|(g, _)| matches!(g, GeneratorId::DeltaSep { .. }))
                .count();
            assert_eq!(n_delta, 1 << (n - 1));
            let mut multiplicity: BTreeMap<GeneratorId, usize> = BTreeMap::new();
            for m in Marks::all_subsets(n) {
                *multiplicity
                    .entry(s.canonicalize(1, &m).unwrap())
                    .or_default() += 1;
            }
            assert!(multiplicity.values().all(|&c| c == 2));
        }
    }

    #[test]
    fn pairing_examples() {
        let s = sp(2, 2);
        let d12 = s.delta(0, &[1, 2]).unwrap();
        let f1 = CurveFunctional::new(
            s,
            [
                (GeneratorId::Psi(1), qi(1)),
                (GeneratorId::Psi(2), qi(3)),
                (d12.clone(), qi(1)),
            ],
        )
        .unwrap();
        assert_eq!(pair(&f1, &DivisorClass::zero(s)).unwrap(), qi(0));
        assert_eq!(
            pair(
                &f1,
                &DivisorClass::generator(s, GeneratorId::Psi(2)).unwrap()
            )
            .unwrap(),
            qi(3)
        );
        let h = DivisorClass::from_terms(
            s,
            [
                (GeneratorId::Psi(1), qi(1)),
                (GeneratorId::Psi(2), qi(1)),
                (GeneratorId::Lambda, qi(-1)),
                (d12.clone(), qi(-3)),
                (GeneratorId::delta(1, []), qi(-1)),
            ],
        )
        .unwrap();
        assert_eq!(pair(&f1, &h).unwrap(), qi(1));
        assert!(matches!(
            pair(&CurveFunctional::zero(sp(2, 3)), &h),
            Err(Error::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn pair_partial_examples() {
        let s = sp(2, 2);
        let d12 = s.delta(0, &[1, 2]).unwrap();
        let support = [GeneratorId::Psi(1), GeneratorId::Psi(2), d12.clone()];
        let dbar = PartialDivisorClass::new(
            s,
            support.clone(),
            [
                (GeneratorId::Psi(1), qi(30)),
                (GeneratorId::Psi(2), qi(-2)),
                (d12.clone(), qi(-18)),
            ],
        )
        .unwrap();
        let f1 = CurveFunctional::new(
            s,
            [
                (GeneratorId::Psi(1), qi(1)),
                (GeneratorId::Psi(2), qi(3)),
                (d12.clone(), qi(1)),
            ],
        )
        .unwrap();
        assert_eq!(pair_partial(&f1, &dbar).unwrap(), qi(6));

        let ebar = PartialDivisorClass::new(
            s,
            support,
            [
                (GeneratorId::Psi(1), qi(6)),
                (GeneratorId::Psi(2), qi(6)),
                (d12.clone(), qi(-18)),
            ],
        )
        .unwrap();
        let b_delta = CurveFunctional::new(s, [(d12, qi(-2))]).unwrap();
        assert_eq!(pair_partial(&b_delta, &ebar).unwrap(), qi(36));

        // λ ↦ 1 alone violates the genus-2 relation, so pair λ against δ_irr too.
        let touches_lambda = CurveFunctional::new(
            s,
            [
                (GeneratorId::Lambda, qi(1)),
                (GeneratorId::DeltaIrr, qi(10)),
            ],
        )
        .unwrap();
        assert_eq!(
            pair_partial(&touches_lambda, &ebar),
            Err(Error::UnknownCoefficientTouched(GeneratorId::Lambda))
        );
    }

    #[test]
    fn genus2_functional_validation() {
        let s = sp(2, 1);
        assert!(matches!(
            CurveFunctional::new(s, [(GeneratorId::Lambda, qi(1))]),
            Err(Error::Genus2RelationViolated(_))
        ));
        assert!(CurveFunctional::new(sp(3, 1), [(GeneratorId::Lambda, qi(1))]).is_ok());
    }

    #[test]
    fn mod_relation_equality() {
        let s = sp(2, 2);
        let lambda = DivisorClass::generator(s, GeneratorId::Lambda).unwrap();
        let rhs = DivisorClass::from_terms(
            s,
            [
                (GeneratorId::DeltaIrr, q(1, 10)),
                (GeneratorId::delta(1, []), q(1, 5)),
                (GeneratorId::delta(1, [1]), q(1, 5)),
            ],
        )
        .unwrap();
        assert_ne!(lambda, rhs);
        assert!(lambda.eq_mod_relation(&rhs).unwrap());
        let psi = DivisorClass::generator(s, GeneratorId::Psi(1)).unwrap();
        assert!(!lambda.eq_mod_relation(&psi).unwrap());
    }

    #[test]
    fn json_form() {
        let s = sp(2, 2);
        let d = DivisorClass::from_terms(
            s,
            [
                (s.delta(0, &[1, 2]).unwrap(), qi(-3)),
                (GeneratorId::Psi(1), q(1, 2)),
                (GeneratorId::Lambda, qi(-1)),
            ],
        )
        .unwrap();
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(
            text,
            r#"{"g":2,"n":2,"coeffs":{"lambda":"-1","psi1":"1/2","delta_0:{1,2}":"-3"}}"#
        );
        let back: DivisorClass = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
        // Non-canonical keys are folded onto the canonical label.
        let alt: DivisorClass =
            serde_json::from_str(r#"{"g":2,"n":2,"coeffs":{"delta_1:{2}":"1","delta_1:{1}":"1"}}"#)
                .unwrap();
        assert_eq!(alt.coeff(&GeneratorId::delta(1, [1])), qi(2));
    }

    fn random_class(space: Space) -> impl Strategy<Value = DivisorClass> {
        let gens = space.generators();
        proptest::collection::vec((-5i64..=5, 1i64..=4), gens.len()).prop_map(move |cs| {
            DivisorClass::from_terms(
                space,
                gens.iter()
                    .cloned()
                    .zip(cs.into_iter().map(|(a, b)| q(a, b))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn pair_is_bilinear(
            d1 in random_class(Space { g: 3, n: 3 }),
            d2 in random_class(Space { g: 3, n: 3 }),
            bs in random_class(Space { g: 3, n: 3 }),
            x in -6i64..=6,
        ) {
            let s = sp(3, 3);
            let b = CurveFunctional::new(s, bs.terms().map(|(g, c)| (g.clone(), c.clone()))).unwrap();
            let lhs = pair(&b, &d1.scaled(&qi(x)).plus(&d2).unwrap()).unwrap();
            let rhs = qi(x) * pair(&b, &d1).unwrap() + pair(&b, &d2).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn generator_keys_round_trip(g in 2u32..=5, n in 0u32..=5) {
            let s = sp(g, n);
            for gen in s.generators() {
                let parsed: GeneratorId = gen.to_string().parse().unwrap();
                prop_assert_eq!(s.canonical(&parsed).unwrap(), gen);
            }
        }
    }
}
