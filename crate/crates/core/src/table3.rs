//! Replays a published maxterm table under index-mapping hypotheses, and
//! re-validates our own databases the same way.
//!
//! The published cubes use indexes up to 63 for a 32-bit plaintext, so the
//! mapping to plaintext positions has to be guessed. Printed equations are
//! read as GF(2) sums, so a repeated term cancels.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cube::{blr_test, superpoly_reconstruct, Cube, Linearity, LinearPoly, Rejection, PUBLIC_BITS};
use crate::db::MaxtermDb;
use crate::leakage::{LeakageSpec, SimeckLeak};

/// `(cube indexes, key-bit terms)` as printed.
pub const PUBLISHED_ROWS: &[(&[usize], &[usize])] = &[
    (&[0, 1, 2, 3, 4, 61], &[11]),
    (&[0, 1, 2, 3, 6, 20], &[12]),
    (&[0, 1, 2, 3, 15, 60], &[10]),
    (&[0, 1, 2, 3, 57, 58], &[13]),
    (&[0, 1, 2, 4, 21, 59], &[0]),
    (&[0, 1, 2, 4, 58, 61], &[7]),
    (&[0, 1, 2, 7, 19, 58], &[20, 14, 13]),
    (&[0, 1, 2, 7, 56, 58], &[20, 23, 14, 13, 2]),
    (&[0, 1, 2, 9, 26, 59], &[4]),
    (&[0, 1, 2, 10, 27, 53], &[13]),
    (&[0, 1, 2, 10, 27, 58], &[3]),
    (&[0, 1, 2, 11, 14, 59], &[6]),
    (&[0, 1, 2, 13, 19, 58], &[24, 12, 9, 8, 7, 3]),
    (&[0, 1, 2, 13, 30, 58], &[24, 9, 8]),
    (&[0, 1, 3, 4, 20, 26], &[14]),
    (&[0, 1, 3, 8, 20, 53], &[20, 13, 12]),
    (&[0, 1, 3, 8, 25, 58], &[20, 24, 13, 14, 13, 0]),
    (&[0, 1, 3, 9, 17, 60], &[14, 8]),
    (&[0, 1, 3, 11, 58, 63], &[12, 7, 6]),
    (&[0, 1, 3, 13, 55, 58], &[0]),
    (&[0, 1, 3, 14, 17, 59], &[23, 10, 0]),
    (&[0, 1, 3, 14, 20, 58], &[23, 19, 10, 0, 8, 4]),
    (&[0, 1, 4, 12, 18, 56], &[23, 17, 8, 7, 6, 2]),
    (&[0, 1, 4, 14, 56, 58], &[3]),
    (&[0, 1, 5, 17, 22, 60], &[27, 21, 12, 11, 10, 0]),
    (&[0, 2, 3, 5, 19, 61], &[27, 12, 11]),
    (&[0, 2, 3, 11, 19, 61], &[22, 10, 7, 6, 3, 1]),
    (&[0, 2, 7, 29, 56, 58], &[1]),
    (&[0, 4, 15, 16, 21, 59], &[20, 20, 11, 10, 0, 3]),
    (&[1, 2, 3, 11, 28, 53], &[6, 0]),
    (&[1, 2, 4, 9, 26, 59], &[21, 23, 13, 14, 10, 0]),
    (&[0, 1, 2, 4, 11, 15, 41, 46], &[20, 20, 10, 3, 3]),
];

/// How printed cube indexes map to plaintext bit positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexMapping {
    /// Index `i` is plaintext bit `i`; indexes ≥ 32 are untestable.
    Identity,
    /// Index `i` is plaintext bit `i mod 32`.
    Mod32,
}

impl IndexMapping {
    pub fn name(self) -> &'static str {
        match self {
            IndexMapping::Identity => "identity",
            IndexMapping::Mod32 => "mod32",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "identity" => Some(IndexMapping::Identity),
            "mod32" => Some(IndexMapping::Mod32),
            _ => None,
        }
    }

    fn map(self, indexes: &[usize]) -> Result<Cube, String> {
        let mapped: Vec<usize> = match self {
            IndexMapping::Identity => {
                if let Some(&i) = indexes.iter().find(|&&i| i >= PUBLIC_BITS) {
                    return Err(format!("index {i} is not a plaintext position"));
                }
                indexes.to_vec()
            }
            IndexMapping::Mod32 => indexes.iter().map(|i| i % PUBLIC_BITS).collect(),
        };
        Cube::new(&mapped).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Untestable(String),
    /// Superpoly is linear and equals the expected equation.
    Match,
    /// Superpoly is linear but differs.
    Mismatch(LinearPoly),
    /// Cube is not a maxterm under this mapping.
    NotMaxterm(Rejection),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReport {
    pub printed_cube: Vec<usize>,
    pub cube: Option<Cube>,
    pub expected: LinearPoly,
    pub status: RowStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub label: String,
    pub rows: Vec<RowReport>,
}

impl ValidationReport {
    pub fn count(&self, pred: impl Fn(&RowStatus) -> bool) -> usize {
        self.rows.iter().filter(|r| pred(&r.status)).count()
    }

    pub fn matches(&self) -> usize {
        self.count(|s| *s == RowStatus::Match)
    }

    pub fn untestable(&self) -> usize {
        self.count(|s| matches!(s, RowStatus::Untestable(_)))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            let cube = r.cube.as_ref().map_or("-".to_string(), |c| c.to_string());
            let status = match &r.status {
                RowStatus::Untestable(why) => format!("untestable ({why})"),
                RowStatus::Match => "match".to_string(),
                RowStatus::Mismatch(got) => format!("mismatch (found {got})"),
                RowStatus::NotMaxterm(why) => format!("not a maxterm ({why:?})"),
            };
            writeln!(f, "row {:2}  {:?} -> {cube}  expect {}  {status}", i + 1, r.printed_cube, r.expected)?;
        }
        writeln!(
            f,
            "mapping={} rows={} match={} untestable={}",
            self.label,
            self.rows.len(),
            self.matches(),
            self.untestable()
        )
    }
}

fn check_row(
    leak: &SimeckLeak,
    cube: &Cube,
    fixed: u32,
    expected: LinearPoly,
    compare_constant: bool,
    blr_trials: usize,
    rng: &mut ChaCha8Rng,
) -> RowStatus {
    match blr_test(leak, cube, fixed, blr_trials, rng).linearity {
        Linearity::Nonlinear => return RowStatus::NotMaxterm(Rejection::Nonlinear),
        Linearity::Constant => return RowStatus::NotMaxterm(Rejection::Constant),
        Linearity::Linear => {}
    }
    match superpoly_reconstruct(leak, cube, fixed, 100, rng) {
        Ok(p) if p == expected => RowStatus::Match,
        Ok(p) if !compare_constant && p.coeffs == expected.coeffs => RowStatus::Match,
        Ok(p) => RowStatus::Mismatch(p),
        Err(r) => RowStatus::NotMaxterm(r),
    }
}

/// Runs BLR and reconstruction for every published row under `mapping`.
/// Printed equations carry no constant term, so only key terms are compared.
pub fn verify_table3(mapping: IndexMapping, leak: LeakageSpec, fixed_bit: bool, blr_trials: usize, seed: u64) -> ValidationReport {
    let oracle = SimeckLeak::new(leak);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = PUBLISHED_ROWS
        .iter()
        .map(|&(printed, keys)| {
            let expected = LinearPoly::from_keys(false, keys);
            match mapping.map(printed) {
                Err(why) => RowReport { printed_cube: printed.to_vec(), cube: None, expected, status: RowStatus::Untestable(why) },
                Ok(cube) => {
                    let fixed = cube.uniform_fixed(fixed_bit);
                    let status = check_row(&oracle, &cube, fixed, expected, false, blr_trials, &mut rng);
                    RowReport { printed_cube: printed.to_vec(), cube: Some(cube), expected, status }
                }
            }
        })
        .collect();
    ValidationReport { label: mapping.name().to_string(), rows }
}

/// Re-derives every maxterm of a database from scratch and compares,
/// constant included.
pub fn self_validate(db: &MaxtermDb, blr_trials: usize, seed: u64) -> ValidationReport {
    let oracle = SimeckLeak::new(db.leak);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = db
        .maxterms
        .iter()
        .map(|m| {
            let status = check_row(&oracle, &m.cube, m.fixed, m.superpoly, true, blr_trials, &mut rng);
            RowReport { printed_cube: m.cube.indexes().collect(), cube: Some(m.cube.clone()), expected: m.superpoly, status }
        })
        .collect();
    ValidationReport { label: "self".to_string(), rows }
}
