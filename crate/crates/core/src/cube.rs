//! Cube summation, BLR linearity testing, linear superpoly reconstruction
//! and randomized maxterm search.

use std::collections::HashSet;
use std::fmt;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::SpecError;
use crate::gf2::XorBasis;
use crate::leakage::{LeakOracle, LeakageSpec};
use crate::simeck::MasterKey;

/// Number of public (plaintext) bits.
pub const PUBLIC_BITS: usize = 32;
/// Number of secret (key) bits.
pub const KEY_BITS: usize = 64;

/// Plaintext mask of public bit `index` (0 = MSB).
#[inline]
pub fn public_bit(index: usize) -> u32 {
    1 << (31 - index)
}

/// A set of public-bit indexes summed over.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    indexes: Vec<u8>,
}

impl Cube {
    pub fn new(indexes: &[usize]) -> Result<Self, SpecError> {
        if indexes.is_empty() {
            return Err(SpecError::EmptyCube);
        }
        let mut sorted = indexes.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(SpecError::DuplicateCubeIndex(w[0]));
            }
        }
        if let Some(&bad) = sorted.iter().find(|&&i| i >= PUBLIC_BITS) {
            return Err(SpecError::CubeIndex(bad));
        }
        Ok(Cube { indexes: sorted.into_iter().map(|i| i as u8).collect() })
    }

    pub fn indexes(&self) -> impl Iterator<Item = usize> + '_ {
        self.indexes.iter().map(|&i| i as usize)
    }

    pub fn len(&self) -> usize {
        self.indexes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indexes.is_empty()
    }

    /// Plaintext mask with every cube position set.
    pub fn mask(&self) -> u32 {
        self.indexes().fold(0, |m, i| m | public_bit(i))
    }

    /// Plaintext with the non-cube positions all set to `value` and the cube
    /// positions cleared.
    pub fn uniform_fixed(&self, value: bool) -> u32 {
        if value {
            !self.mask()
        } else {
            0
        }
    }
}

impl fmt::Debug for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cube{:?}", self.indexes)
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indexes.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Affine polynomial over the 64 key bits: `constant ⊕ Σ coeffs[i]·k_i`.
/// Bit `i` of `coeffs` is the coefficient of key bit `k_i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct LinearPoly {
    pub constant: bool,
    pub coeffs: u64,
}

/// Key as a coefficient-aligned vector: bit `i` holds key bit `k_i`.
#[inline]
pub fn key_vector(key: MasterKey) -> u64 {
    key.0.reverse_bits()
}

/// Inverse of [`key_vector`].
#[inline]
pub fn key_from_vector(v: u64) -> MasterKey {
    MasterKey(v.reverse_bits())
}

/// Unit key with only bit `k_i` set.
#[inline]
pub fn unit_key(i: usize) -> MasterKey {
    key_from_vector(1 << i)
}

impl LinearPoly {
    pub fn from_keys(constant: bool, keys: &[usize]) -> Self {
        let coeffs = keys.iter().fold(0u64, |c, &i| {
            assert!(i < KEY_BITS);
            c ^ 1 << i
        });
        LinearPoly { constant, coeffs }
    }

    pub fn eval(&self, key: MasterKey) -> bool {
        self.constant ^ ((self.coeffs & key_vector(key)).count_ones() & 1 == 1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs == 0
    }

    /// Key-bit indexes with a nonzero coefficient, ascending.
    pub fn key_indexes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..KEY_BITS).filter(|&i| self.coeffs >> i & 1 == 1)
    }
}

impl fmt::Display for LinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        if self.constant {
            terms.push("1".into());
        }
        terms.extend(self.key_indexes().map(|i| format!("k{i}")));
        if terms.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&terms.join(" + "))
    }
}

/// A cube whose superpoly is linear and non-constant, with the public
/// assignment it was found under.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Maxterm {
    pub cube: Cube,
    pub superpoly: LinearPoly,
    /// Values of the non-cube public bits; cube positions are zero.
    pub fixed: u32,
}

/// XOR of `oracle(fixed | s, key)` over every assignment `s` to the cube bits.
pub fn cube_sum<O: LeakOracle + ?Sized>(oracle: &O, cube: &Cube, fixed: u32, key: MasterKey) -> bool {
    let mask = cube.mask();
    let base = fixed & !mask;
    let mut acc = false;
    let mut sub = 0u32;
    loop {
        acc ^= oracle.eval(base | sub, key);
        sub = sub.wrapping_sub(mask) & mask;
        if sub == 0 {
            break;
        }
    }
    acc
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Linearity {
    Linear,
    Nonlinear,
    Constant,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BlrVerdict {
    pub linearity: Linearity,
    /// Trials actually run.
    pub trials: usize,
}

/// BLR test `S(0) ⊕ S(x) ⊕ S(y) = S(x ⊕ y)` on the cube sum `S` as a
/// function of the key, for `trials` random pairs.
///
/// Stops at the first violation. If every observed sum, including the
/// probes at the 64 unit keys, equals `S(0)` the superpoly is reported
/// constant.
pub fn blr_test<O, R>(oracle: &O, cube: &Cube, fixed: u32, trials: usize, rng: &mut R) -> BlrVerdict
where
    O: LeakOracle + ?Sized,
    R: Rng + ?Sized,
{
    assert!(trials >= 1, "BLR needs at least one trial");
    let sum = |k: u64| cube_sum(oracle, cube, fixed, MasterKey(k));
    let at_zero = sum(0);
    let mut varied = false;
    for t in 0..trials {
        let (x, y): (u64, u64) = (rng.gen(), rng.gen());
        let (sx, sy, sxy) = (sum(x), sum(y), sum(x ^ y));
        if at_zero ^ sx ^ sy != sxy {
            return BlrVerdict { linearity: Linearity::Nonlinear, trials: t + 1 };
        }
        varied |= sx != at_zero || sy != at_zero || sxy != at_zero;
    }
    if !varied {
        varied = (0..KEY_BITS).any(|i| cube_sum(oracle, cube, fixed, unit_key(i)) != at_zero);
    }
    let linearity = if varied { Linearity::Linear } else { Linearity::Constant };
    BlrVerdict { linearity, trials }
}

/// Why a candidate cube was not accepted as a maxterm.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rejection {
    /// Superpoly is constant over the key.
    Constant,
    /// BLR found a nonlinear superpoly.
    Nonlinear,
    /// Reconstructed polynomial disagreed with a fresh cube sum.
    FalsePositive,
}

/// Reads off a linear superpoly: the constant is the cube sum at the zero
/// key and the coefficient of `k_i` is the sum at unit key `e_i` XOR the
/// constant. The result is then checked against `verify_probes` random keys.
pub fn superpoly_reconstruct<O, R>(
    oracle: &O,
    cube: &Cube,
    fixed: u32,
    verify_probes: usize,
    rng: &mut R,
) -> Result<LinearPoly, Rejection>
where
    O: LeakOracle + ?Sized,
    R: Rng + ?Sized,
{
    let constant = cube_sum(oracle, cube, fixed, MasterKey(0));
    let coeffs = (0..KEY_BITS).fold(0u64, |c, i| {
        let bit = cube_sum(oracle, cube, fixed, unit_key(i)) ^ constant;
        c | (bit as u64) << i
    });
    let poly = LinearPoly { constant, coeffs };
    if poly.is_constant() {
        return Err(Rejection::Constant);
    }
    for _ in 0..verify_probes {
        let key = MasterKey(rng.gen());
        if poly.eval(key) != cube_sum(oracle, cube, fixed, key) {
            return Err(Rejection::FalsePositive);
        }
    }
    Ok(poly)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub cube_sizes: Vec<usize>,
    pub leak: LeakageSpec,
    pub blr_trials: usize,
    pub candidate_budget: usize,
    pub rng_seed: u64,
    pub target_rank: usize,
    pub fixed_bit: bool,
    /// Random-key probes used to discard constant superpolys before BLR.
    pub constant_probes: usize,
    /// Fresh random keys each reconstructed superpoly must predict.
    pub verify_probes: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            cube_sizes: vec![6, 8],
            leak: LeakageSpec::default(),
            blr_trials: 300,
            candidate_budget: 10_000,
            rng_seed: 0,
            target_rank: 32,
            fixed_bit: false,
            constant_probes: 8,
            verify_probes: 100,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SpecError> {
        if self.cube_sizes.is_empty() {
            return Err(SpecError::Config("no cube sizes".into()));
        }
        if let Some(s) = self.cube_sizes.iter().find(|&&s| s == 0 || s > PUBLIC_BITS) {
            return Err(SpecError::Config(format!("cube size {s} outside 1..=32")));
        }
        if self.blr_trials == 0 {
            return Err(SpecError::Config("blr_trials must be at least 1".into()));
        }
        if self.target_rank > KEY_BITS {
            return Err(SpecError::Config(format!("target rank {} above 64", self.target_rank)));
        }
        Ok(())
    }
}

/// Per-candidate generator: candidate `n` always sees the same stream.
pub fn candidate_rng(seed: u64, candidate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(candidate);
    rng
}

/// The cube tried as candidate `n`, plus the generator state the rest of
/// its evaluation continues from.
pub fn sample_candidate(config: &SearchConfig, candidate: u64) -> (Cube, ChaCha8Rng) {
    let mut rng = candidate_rng(config.rng_seed, candidate);
    let size = config.cube_sizes[rng.gen_range(0..config.cube_sizes.len())];
    let picked: Vec<usize> = index::sample(&mut rng, PUBLIC_BITS, size).into_vec();
    (Cube::new(&picked).expect("sampled indexes are distinct and in range"), rng)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CandidateOutcome {
    Accepted(LinearPoly),
    ScreenedConstant,
    Rejected(Rejection),
}

/// Full evaluation pipeline for one cube: constant screen, BLR,
/// reconstruction and verification.
pub fn evaluate_candidate<O, R>(oracle: &O, cube: &Cube, fixed: u32, config: &SearchConfig, rng: &mut R) -> CandidateOutcome
where
    O: LeakOracle + ?Sized,
    R: Rng + ?Sized,
{
    if config.constant_probes > 0 {
        let first = cube_sum(oracle, cube, fixed, MasterKey(rng.gen()));
        let varies = (1..config.constant_probes).any(|_| cube_sum(oracle, cube, fixed, MasterKey(rng.gen())) != first);
        if !varies {
            return CandidateOutcome::ScreenedConstant;
        }
    }
    match blr_test(oracle, cube, fixed, config.blr_trials, rng).linearity {
        Linearity::Nonlinear => return CandidateOutcome::Rejected(Rejection::Nonlinear),
        Linearity::Constant => return CandidateOutcome::Rejected(Rejection::Constant),
        Linearity::Linear => {}
    }
    match superpoly_reconstruct(oracle, cube, fixed, config.verify_probes, rng) {
        Ok(poly) => CandidateOutcome::Accepted(poly),
        Err(r) => CandidateOutcome::Rejected(r),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub screened_constant: usize,
    pub blr_constant: usize,
    pub blr_nonlinear: usize,
    pub false_positives: usize,
    pub duplicate_cubes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub maxterms: Vec<Maxterm>,
    pub candidates_tried: usize,
    pub rank: usize,
    pub target_rank: usize,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn target_reached(&self) -> bool {
        self.rank >= self.target_rank
    }

    /// Shortfall message when the budget ran out below the target rank.
    pub fn diagnostic(&self) -> Option<String> {
        (!self.target_reached()).then(|| {
            format!(
                "candidate budget exhausted after {} candidates: rank {} of target {} ({} maxterms)",
                self.candidates_tried,
                self.rank,
                self.target_rank,
                self.maxterms.len()
            )
        })
    }
}

const BATCH: usize = 512;

/// Randomized maxterm search.
///
/// Candidates are numbered; candidate `n` uses [`candidate_rng`]`(seed, n)`
/// for its cube and all of its tests, so evaluating batches in parallel and
/// merging in candidate order gives the same list as a serial run. The
/// search stops after `candidate_budget` candidates or as soon as the
/// accepted superpolys reach `target_rank`.
///
/// `threads == 0` uses rayon's global pool.
pub fn maxterm_search<O>(oracle: &O, config: &SearchConfig, threads: usize) -> Result<SearchOutcome, SpecError>
where
    O: LeakOracle + ?Sized,
{
    config.validate()?;
    let run = || search_batches(oracle, config);
    if threads == 0 {
        Ok(run())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| SpecError::Config(format!("thread pool: {e}")))?;
        Ok(pool.install(run))
    }
}

fn search_batches<O: LeakOracle + ?Sized>(oracle: &O, config: &SearchConfig) -> SearchOutcome {
    let mut out = SearchOutcome {
        maxterms: Vec::new(),
        candidates_tried: 0,
        rank: 0,
        target_rank: config.target_rank,
        stats: SearchStats::default(),
    };
    let mut basis = XorBasis::new();
    let mut seen: HashSet<u32> = HashSet::new();
    let mut next = 0usize;
    while next < config.candidate_budget && !out.target_reached() {
        let end = (next + BATCH).min(config.candidate_budget);
        let results: Vec<(Cube, u32, CandidateOutcome)> = (next..end)
            .into_par_iter()
            .map(|n| {
                let (cube, mut rng) = sample_candidate(config, n as u64);
                let fixed = cube.uniform_fixed(config.fixed_bit);
                let outcome = evaluate_candidate(oracle, &cube, fixed, config, &mut rng);
                (cube, fixed, outcome)
            })
            .collect();
        for (cube, fixed, outcome) in results {
            out.candidates_tried += 1;
            match outcome {
                CandidateOutcome::ScreenedConstant => out.stats.screened_constant += 1,
                CandidateOutcome::Rejected(Rejection::Constant) => out.stats.blr_constant += 1,
                CandidateOutcome::Rejected(Rejection::Nonlinear) => out.stats.blr_nonlinear += 1,
                CandidateOutcome::Rejected(Rejection::FalsePositive) => out.stats.false_positives += 1,
                CandidateOutcome::Accepted(superpoly) => {
                    if !seen.insert(cube.mask()) {
                        out.stats.duplicate_cubes += 1;
                    } else {
                        basis.insert(superpoly.coeffs);
                        out.maxterms.push(Maxterm { cube, superpoly, fixed });
                    }
                }
            }
            if basis.rank() >= config.target_rank {
                break;
            }
        }
        out.rank = basis.rank();
        next = end;
    }
    out.rank = basis.rank();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anf::Anf;

    /// Public variable `v` of an [`Anf`] over public bits is plaintext bit `v`.
    fn public_point(pt: u32, vars: usize) -> u32 {
        (0..vars).fold(0, |x, v| x | ((pt & public_bit(v) != 0) as u32) << v)
    }

    fn anf_oracle(p: Anf, vars: usize) -> impl Fn(u32, MasterKey) -> bool + Sync {
        move |pt, _key| p.eval(public_point(pt, vars))
    }

    fn cube_from_vars(vars: &[usize]) -> Cube {
        Cube::new(vars).unwrap()
    }

    #[test]
    fn cube_validation() {
        assert_eq!(Cube::new(&[]), Err(SpecError::EmptyCube));
        assert_eq!(Cube::new(&[3, 32]), Err(SpecError::CubeIndex(32)));
        assert_eq!(Cube::new(&[5, 1, 5]), Err(SpecError::DuplicateCubeIndex(5)));
        let c = Cube::new(&[31, 0, 7]).unwrap();
        assert_eq!(c.indexes().collect::<Vec<_>>(), vec![0, 7, 31]);
        assert_eq!(c.mask(), 0x8100_0001);
        assert_eq!(c.to_string(), "{0, 7, 31}");
        assert_eq!(c.uniform_fixed(true), !0x8100_0001);
    }

    #[test]
    fn factoring_example_by_summation() {
        // variables x1..x7 on public bits 1..7
        let p = Anf::from_terms(&[&[1, 2, 3], &[1, 2, 3, 4], &[2, 4, 6], &[1, 2, 3, 5, 7]]);
        let expected = Anf::from_terms(&[&[], &[4], &[5, 7]]);
        let oracle = anf_oracle(p, 8);
        let cube = cube_from_vars(&[1, 2, 3]);
        for rest in 0..16u32 {
            // x4..x7
            let fixed = (0..4).fold(0, |f, j| if rest >> j & 1 == 1 { f | public_bit(4 + j) } else { f });
            let point = public_point(fixed, 8);
            assert_eq!(cube_sum(&oracle, &cube, fixed, MasterKey(0)), expected.eval(point));
        }
    }

    #[test]
    fn summation_table_example() {
        // x1x2x3x4 + x3x4 + x3 + x4x5 + x1x3 + x2x3, cube {1,2,3}: superpoly x4
        let p = Anf::from_terms(&[&[1, 2, 3, 4], &[3, 4], &[3], &[4, 5], &[1, 3], &[2, 3]]);
        assert_eq!(p.superpoly(0b1110), Anf::from_terms(&[&[4]]));
        let oracle = anf_oracle(p, 6);
        let cube = cube_from_vars(&[1, 2, 3]);
        for x4 in [false, true] {
            for x5 in [false, true] {
                let fixed = ((x4 as u32) * public_bit(4)) | ((x5 as u32) * public_bit(5));
                assert_eq!(cube_sum(&oracle, &cube, fixed, MasterKey(0)), x4);
            }
        }
    }

    #[test]
    fn sum_of_cube_free_function_is_zero() {
        let oracle = |pt: u32, key: MasterKey| (pt & 0x0000_FFFF).count_ones() % 3 == 1 || key.0 & 1 == 1;
        let cube = cube_from_vars(&[0, 3, 9]);
        for k in 0..8 {
            assert!(!cube_sum(&oracle, &cube, 0x0000_1234, MasterKey(k)));
        }
    }

    /// Oracle whose superpoly over cube {0,1} is `extra(key)` and whose
    /// remainder is an arbitrary non-cube expression.
    fn planted(extra: impl Fn(MasterKey) -> bool + Sync) -> impl Fn(u32, MasterKey) -> bool + Sync {
        move |pt: u32, key: MasterKey| {
            let x0 = pt & public_bit(0) != 0;
            let x1 = pt & public_bit(1) != 0;
            let noise = key.bit(5) & key.bit(9) & x0 ^ (pt & public_bit(20) != 0);
            (x0 & x1 & extra(key)) ^ noise
        }
    }

    #[test]
    fn blr_examples() {
        let cube = cube_from_vars(&[0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let linear = planted(|k| k.bit(3));
        assert_eq!(blr_test(&linear, &cube, 0, 300, &mut rng).linearity, Linearity::Linear);
        let quad = planted(|k| k.bit(1) & k.bit(2));
        assert_eq!(blr_test(&quad, &cube, 0, 300, &mut rng).linearity, Linearity::Nonlinear);
        let one = planted(|_| true);
        let v = blr_test(&one, &cube, 0, 300, &mut rng);
        assert_eq!(v, BlrVerdict { linearity: Linearity::Constant, trials: 300 });
    }

    #[test]
    fn quadratic_blr_defect_probability() {
        // f = k1 k2; the defect f(0)+f(x)+f(y)+f(x+y) = x1y2 + x2y1 is 1 on 6 of 16 patterns
        let f = |a: u32, b: u32| a & b;
        let failures = (0..16u32)
            .filter(|p| {
                let (x1, x2, y1, y2) = (p & 1, p >> 1 & 1, p >> 2 & 1, p >> 3 & 1);
                f(0, 0) ^ f(x1, x2) ^ f(y1, y2) != f(x1 ^ y1, x2 ^ y2)
            })
            .count();
        assert_eq!(failures, 6);
    }

    #[test]
    fn reconstruct_examples() {
        let cube = cube_from_vars(&[0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = superpoly_reconstruct(&planted(|k| !k.bit(11)), &cube, 0, 100, &mut rng).unwrap();
        assert_eq!(p, LinearPoly::from_keys(true, &[11]));
        assert_eq!(p.to_string(), "1 + k11");
        assert_eq!(superpoly_reconstruct(&planted(|_| false), &cube, 0, 100, &mut rng), Err(Rejection::Constant));
        let quad = planted(|k| k.bit(1) & k.bit(2) ^ k.bit(7));
        assert_eq!(superpoly_reconstruct(&quad, &cube, 0, 100, &mut rng), Err(Rejection::FalsePositive));
    }

    #[test]
    fn reconstruct_planted_linear_superpolys() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let target = LinearPoly { constant: rng.gen(), coeffs: rng.gen::<u64>() | 1 };
            let size = rng.gen_range(2..7);
            let picked = index::sample(&mut rng, PUBLIC_BITS, size).into_vec();
            let cube = Cube::new(&picked).unwrap();
            let mask = cube.mask();
            let missing = public_bit(picked[0]);
            let salt: u64 = rng.gen();
            let oracle = move |pt: u32, key: MasterKey| {
                let full = pt & mask == mask;
                // high-degree remainder that never depends on the first cube variable
                let reduced = (pt & !missing) as u64;
                let junk = (reduced.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ key.0 ^ salt).count_ones() > 32;
                (full && target.eval(key)) ^ junk
            };
            let got = superpoly_reconstruct(&oracle, &cube, 0x0F0F_0F0F & !mask, 100, &mut rng).unwrap();
            assert_eq!(got, target);
        }
    }

    #[test]
    fn search_budget_zero() {
        let config = SearchConfig { candidate_budget: 0, ..SearchConfig::default() };
        let out = maxterm_search(&planted(|k| k.bit(0)), &config, 1).unwrap();
        assert!(out.maxterms.is_empty());
        assert_eq!((out.candidates_tried, out.rank), (0, 0));
        assert!(out.diagnostic().is_some());
    }

    #[test]
    fn search_on_all_linear_oracle() {
        // Every cube's superpoly is k_{(sum of cube indexes) mod 64}.
        let oracle = |pt: u32, key: MasterKey| {
            let idx: usize = (0..32).filter(|&i| pt & public_bit(i) != 0).sum();
            let size = pt.count_ones();
            size == 3 && key.bit(idx % 64)
        };
        let config = SearchConfig {
            cube_sizes: vec![3],
            candidate_budget: 50,
            target_rank: 4,
            blr_trials: 20,
            ..SearchConfig::default()
        };
        let out = maxterm_search(&oracle, &config, 2).unwrap();
        assert!(out.target_reached());
        assert_eq!(out.rank, 4);
        let first = sample_candidate(&config, 0).0;
        assert_eq!(out.maxterms[0].cube, first);
        for m in &out.maxterms {
            let idx: usize = m.cube.indexes().sum();
            assert_eq!(m.superpoly, LinearPoly::from_keys(false, &[idx % 64]));
        }
    }

    #[test]
    fn search_is_deterministic_across_thread_counts() {
        let oracle = planted(|k| k.bit(2) ^ k.bit(40));
        let config = SearchConfig {
            cube_sizes: vec![2, 3],
            candidate_budget: 600,
            blr_trials: 30,
            target_rank: 64,
            ..SearchConfig::default()
        };
        let serial = maxterm_search(&oracle, &config, 1).unwrap();
        let parallel = maxterm_search(&oracle, &config, 4).unwrap();
        assert_eq!(serial, parallel);
        assert!(!serial.maxterms.is_empty());
    }

    #[test]
    fn config_validation() {
        let bad = SearchConfig { blr_trials: 0, ..SearchConfig::default() };
        assert!(bad.validate().is_err());
        let bad = SearchConfig { cube_sizes: vec![33], ..SearchConfig::default() };
        assert!(bad.validate().is_err());
        assert!(SearchConfig::default().validate().is_ok());
    }
}
