//! Two families of divisors on `Mbar_{g,2}` cut out by branched covers of the
//! line, and their intersections with the test curves of `C × C`.
//!
//! For `k >= 2`, `D̄_k` is the closure of the locus of `[C, p1, p2]` admitting a
//! degree `k(g-1)+1` cover totally ramified at `p1`, with `p2` unramified in a
//! fibre whose other `g-1` points each have ramification order `k-1`. `Ē_k` is
//! the analogous degree `k(g-1)` locus with `p1` of order `k(g-1)-2` and `p2`
//! unramified in the same fibre.
//!
//! Only the `ψ1`, `ψ2`, `δ_{0:{1,2}}` coefficients of these classes are known;
//! the rest stay undetermined, and any pairing that would need them fails.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::Error;
use crate::picard::{pair_partial, CurveFunctional, GeneratorId, PartialDivisorClass, Space};
use crate::ratlin::{Matrix, Rational, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum HurwitzKind {
    D,
    E,
}

impl std::fmt::Display for HurwitzKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HurwitzKind::D => "D",
            HurwitzKind::E => "E",
        })
    }
}

impl std::str::FromStr for HurwitzKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "D" | "d" => Ok(HurwitzKind::D),
            "E" | "e" => Ok(HurwitzKind::E),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HurwitzFamily {
    pub kind: HurwitzKind,
    pub g: u32,
    pub k: u32,
}

impl HurwitzFamily {
    pub fn new(kind: HurwitzKind, g: u32, k: u32) -> Result<Self, Error> {
        if g < 2 {
            return Err(Error::GenusOutOfRange(g));
        }
        check_k(k)?;
        Ok(HurwitzFamily { kind, g, k })
    }

    /// Degree of the covers defining the family.
    pub fn cover_degree(&self) -> u32 {
        match self.kind {
            HurwitzKind::D => self.k * (self.g - 1) + 1,
            HurwitzKind::E => self.k * (self.g - 1),
        }
    }
}

fn check_k(k: u32) -> Result<(), Error> {
    if k < 2 {
        Err(Error::KOutOfRange(i64::from(k)))
    } else {
        Ok(())
    }
}

fn two_pointed(g: u32) -> Result<Space, Error> {
    Space::new(g, 2)
}

/// The generators on which the test curves and the family classes live.
pub fn table_generators(g: u32) -> Result<[GeneratorId; 3], Error> {
    let s = two_pointed(g)?;
    Ok([
        GeneratorId::Psi(1),
        GeneratorId::Psi(2),
        s.delta(0, &[1, 2])?,
    ])
}

fn r(n: i64) -> Rational {
    Rational::from(n)
}

fn rpow(base: i64, exp: u32) -> Rational {
    Rational::from(BigInt::from(base).pow(exp))
}

/// The fibre classes `F1`, `F2` and the diagonal `B_Δ` of `C × C`, pushed
/// into `Mbar_{g,2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TestCurves {
    pub f1: CurveFunctional,
    pub f2: CurveFunctional,
    pub b_delta: CurveFunctional,
}

impl TestCurves {
    pub fn rows(&self) -> [(&'static str, &CurveFunctional); 3] {
        [
            ("F1", &self.f1),
            ("F2", &self.f2),
            ("B_Delta", &self.b_delta),
        ]
    }
}

pub fn test_curves(g: u32) -> Result<TestCurves, Error> {
    let s = two_pointed(g)?;
    let [p1, p2, d] = table_generators(g)?;
    let gi = i64::from(g);
    let f1 = CurveFunctional::new(
        s,
        [
            (p1.clone(), r(1)),
            (p2.clone(), r(2 * gi - 1)),
            (d.clone(), r(1)),
        ],
    )?;
    let f2 = CurveFunctional::new(s, [(p1, r(2 * gi - 1)), (p2, r(1)), (d.clone(), r(1))])?;
    let b_delta = CurveFunctional::new(s, [(d, r(2 - 2 * gi))])?;
    Ok(TestCurves { f1, f2, b_delta })
}

/// The known part of `[D̄_k]` or `[Ē_k]`.
pub fn family_class(fam: HurwitzFamily) -> Result<PartialDivisorClass, Error> {
    check_k(fam.k)?;
    let (g, k) = (i64::from(fam.g), i64::from(fam.k));
    let half = Rational::new(1, 2);
    let k_2g2 = rpow(k, 2 * fam.g - 2);
    let k_2g = rpow(k, 2 * fam.g);
    let (c1, c2) = match fam.kind {
        HurwitzKind::D => (
            &half * r(g * k + 1) * r(g * k - k + 1) * &k_2g2,
            &half * r(1 - k) * &k_2g2,
        ),
        HurwitzKind::E => (
            &half * r(g * k - 1) * r(g * k - k - 1) * &k_2g2,
            &half * r(k + 1) * &k_2g2,
        ),
    };
    let c0 = -(&half * (r(g) * &k_2g - &k_2g + r(2)) * r(g));
    let gens = table_generators(fam.g)?;
    PartialDivisorClass::new(
        two_pointed(fam.g)?,
        gens.clone(),
        gens.into_iter().zip([c1, c2, c0]),
    )
}

/// Intersection numbers of `F1`, `F2`, `B_Δ` with `ψ1`, `ψ2`, `δ_{0:{1,2}}`,
/// `D̄_k` and `Ē_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionTable {
    pub g: u32,
    pub k: u32,
    pub rows: [[Rational; 5]; 3],
}

pub const TABLE_ROWS: [&str; 3] = ["F1", "F2", "B_Delta"];
pub const TABLE_COLUMNS: [&str; 5] = ["psi1", "psi2", "delta_0:{1,2}", "D_k", "E_k"];

impl IntersectionTable {
    /// Column of the family `kind`: the pairings of `F1`, `F2`, `B_Δ` with it.
    pub fn family_column(&self, kind: HurwitzKind) -> [Rational; 3] {
        let c = match kind {
            HurwitzKind::D => 3,
            HurwitzKind::E => 4,
        };
        [
            self.rows[0][c].clone(),
            self.rows[1][c].clone(),
            self.rows[2][c].clone(),
        ]
    }

    /// The left 3×3 block.
    pub fn generator_block(&self) -> Matrix {
        Matrix::from_rows(self.rows.iter().map(|row| row[..3].to_vec()).collect())
            .expect("3x3 block")
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "g = {}, k = {}", self.g, self.k);
        let _ = writeln!(out);
        let _ = writeln!(out, "| | {} |", TABLE_COLUMNS.join(" | "));
        let _ = writeln!(out, "|---|{}", "---|".repeat(TABLE_COLUMNS.len()));
        for (name, row) in TABLE_ROWS.iter().zip(&self.rows) {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "| {name} | {} |", cells.join(" | "));
        }
        out
    }
}

/// The table from its closed forms.
pub fn table(g: u32, k: u32) -> Result<IntersectionTable, Error> {
    check_k(k)?;
    two_pointed(g)?;
    let (gi, ki) = (i64::from(g), i64::from(k));
    let g_r = r(gi);
    let k_2g2 = rpow(ki, 2 * g - 2);
    let k_2g = rpow(ki, 2 * g);
    let f1_fam = (&k_2g2 - r(1)) * &g_r;
    let f2_d = r(ki * (gi - 1) + 1).pow(2) * &k_2g2 * &g_r - &g_r;
    let f2_e = r(ki * (gi - 1) - 1).pow(2) * &k_2g2 * &g_r - &g_r;
    let bd = (&k_2g - r(1)) * r(gi - 1).pow(2) * &g_r + &g_r * r(gi * gi - 1);
    Ok(IntersectionTable {
        g,
        k,
        rows: [
            [r(1), r(2 * gi - 1), r(1), f1_fam.clone(), f1_fam],
            [r(2 * gi - 1), r(1), r(1), f2_d, f2_e],
            [r(0), r(0), r(2 - 2 * gi), bd.clone(), bd],
        ],
    })
}

/// Recovers the known coefficients of a family class by solving the 3×3
/// system given by the table.
pub fn class_from_table(g: u32, k: u32, kind: HurwitzKind) -> Result<PartialDivisorClass, Error> {
    let t = table(g, k)?;
    let block = t.generator_block();
    let coeffs = match block.solve(&t.family_column(kind))? {
        Solution::Unique(x) => x,
        other => {
            return Err(Error::AssertionFailed(format!(
                "test-curve system at g = {g} is singular: {other:?}"
            )))
        }
    };
    let gens = table_generators(g)?;
    PartialDivisorClass::new(two_pointed(g)?, gens.clone(), gens.into_iter().zip(coeffs))
}

/// Ramification forced above the node when the two special branch points
/// collide and the component through `p1`, `p2` is rational. Always `g - 1`.
pub fn riemann_hurwitz_residual(g: u32, k: u32, kind: HurwitzKind) -> i64 {
    let (g, k) = (i64::from(g), i64::from(k));
    // 2h - 2 for the rational component, h = 0.
    let genus_zero_euler = -2;
    match kind {
        // Degree k(g-1)+1; p1 contributes k(g-1), the q_i contribute (k-1)(g-1).
        HurwitzKind::D => {
            genus_zero_euler
                - (k * (g - 1) + 1) * genus_zero_euler
                - (k - 1) * (g - 1)
                - k * (g - 1)
        }
        // Degree k(g-1); p1 contributes k(g-1)-2.
        HurwitzKind::E => {
            genus_zero_euler
                - k * (g - 1) * genus_zero_euler
                - (k * (g - 1) - 2)
                - (k - 1) * (g - 1)
        }
    }
}

/// Counts entering the final two columns of the table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerativeConstants {
    /// Degree of `C^g → Pic`, `(p2, q_i) ↦ O(p2 + k Σ q_i)`: `g! k^{2(g-1)}`.
    pub theta_map_degree: Rational,
    /// Multiplicity of the excluded diagonal solution.
    pub ramification_exclusion: Rational,
    /// Weierstrass points of a general curve, `g³ - g`.
    pub weierstrass_count: Rational,
    /// Nontrivial `k`-torsion line bundles, `k^{2g} - 1`.
    pub torsion_count: Rational,
    /// Contribution of the torsion solutions, `(k^{2g} - 1)(g - 1)² g`.
    pub case2_count: Rational,
}

pub fn enumerative_constants(g: u32, k: u32) -> EnumerativeConstants {
    let gi = i64::from(g);
    let factorial: BigInt = (1..=gi).map(BigInt::from).product();
    let torsion = rpow(i64::from(k), 2 * g) - r(1);
    EnumerativeConstants {
        theta_map_degree: Rational::from(factorial) * rpow(i64::from(k), 2 * (g - 1)),
        ramification_exclusion: r(gi),
        weierstrass_count: r(gi * gi * gi - gi),
        case2_count: &torsion * r(gi - 1).pow(2) * r(gi),
        torsion_count: torsion,
    }
}

/// Intermediate values reproducing the last two table columns from the
/// enumerative counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberColumnRecord {
    pub g: u32,
    pub k: u32,
    pub constants: EnumerativeConstants,
    /// `(deg - g·(g-1)!) / (g-1)!`, the ordered-to-unordered count for the
    /// `F1` row.
    pub f1_from_constants: Rational,
    pub f1_table: Rational,
    pub b_delta_from_constants: Rational,
    pub b_delta_table_d: Rational,
    pub b_delta_table_e: Rational,
}

pub fn fiber_column_identity(g: u32, k: u32) -> Result<FiberColumnRecord, Error> {
    let t = table(g, k)?;
    let c = enumerative_constants(g, k);
    let orderings = Rational::from((1..i64::from(g)).map(BigInt::from).product::<BigInt>());
    let f1_from_constants =
        (&c.theta_map_degree - &c.ramification_exclusion * &orderings) / &orderings;
    let b_delta_from_constants = &c.case2_count + &c.weierstrass_count;
    let rec = FiberColumnRecord {
        g,
        k,
        f1_table: t.rows[0][3].clone(),
        b_delta_table_d: t.rows[2][3].clone(),
        b_delta_table_e: t.rows[2][4].clone(),
        constants: c,
        f1_from_constants,
        b_delta_from_constants,
    };
    let mismatches: Vec<String> = [
        ("F1.D_k", &rec.f1_from_constants, &rec.f1_table),
        ("F1.E_k", &rec.f1_from_constants, &t.rows[0][4]),
        (
            "B_Delta.D_k",
            &rec.b_delta_from_constants,
            &rec.b_delta_table_d,
        ),
        (
            "B_Delta.E_k",
            &rec.b_delta_from_constants,
            &rec.b_delta_table_e,
        ),
    ]
    .into_iter()
    .filter(|(_, a, b)| a != b)
    .map(|(name, a, b)| format!("{name}: constants give {a}, table has {b}"))
    .collect();
    if mismatches.is_empty() {
        Ok(rec)
    } else {
        Err(Error::AssertionFailed(mismatches.join("; ")))
    }
}

/// Pairings of the three test curves with a family class.
pub fn test_curve_pairings(fam: HurwitzFamily) -> Result<[Rational; 3], Error> {
    let curves = test_curves(fam.g)?;
    let class = family_class(fam)?;
    Ok([
        pair_partial(&curves.f1, &class)?,
        pair_partial(&curves.f2, &class)?,
        pair_partial(&curves.b_delta, &class)?,
    ])
}
