//! Embedded invariant suite behind the `selftest` command.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::anf::Anf;
use crate::cube::{blr_test, cube_sum, public_bit, Cube, Linearity};
use crate::gf2::{row_reduce, Gf2Matrix, Gf2System};
use crate::simeck::{decrypt_with_keys, encrypt_with_keys, key_schedule, MasterKey, RoundKeys};

pub const TEST_VECTOR: (u64, u32, u32) = (0x1918_1110_0908_0100, 0x6565_6877, 0x770D_2C76);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfTestReport {
    pub stages: Vec<StageResult>,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.stages.iter().all(|s| s.passed)
    }

    pub fn first_failure(&self) -> Option<&StageResult> {
        self.stages.iter().find(|s| !s.passed)
    }
}

impl fmt::Display for SelfTestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stages {
            writeln!(f, "{}={} {}", s.name, if s.passed { "pass" } else { "FAIL" }, s.detail)?;
        }
        writeln!(f, "selftest={}", if self.passed() { "pass" } else { "FAIL" })
    }
}

/// Runs every stage with the standard key schedule.
pub fn run(seed: u64) -> SelfTestReport {
    run_with_schedule(seed, key_schedule)
}

/// Runs every stage, deriving round keys with `schedule`.
pub fn run_with_schedule(seed: u64, schedule: fn(MasterKey) -> RoundKeys) -> SelfTestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SelfTestReport {
        stages: vec![
            cipher_vectors(schedule, &mut rng),
            cube_sum_equivalence(&mut rng),
            blr_sanity(&mut rng),
            gf2_oracle(&mut rng),
        ],
    }
}

fn stage(name: &'static str, result: Result<String, String>) -> StageResult {
    match result {
        Ok(detail) => StageResult { name, passed: true, detail },
        Err(detail) => StageResult { name, passed: false, detail },
    }
}

fn cipher_vectors(schedule: fn(MasterKey) -> RoundKeys, rng: &mut ChaCha8Rng) -> StageResult {
    let mut run = || {
        let (key, pt, ct) = TEST_VECTOR;
        let keys = schedule(MasterKey(key));
        let got = encrypt_with_keys(pt, &keys);
        if got != ct {
            return Err(format!("test vector: expected {ct:08X}, got {got:08X}"));
        }
        for _ in 0..1000 {
            let (pt, keys) = (rng.gen(), schedule(MasterKey(rng.gen())));
            if decrypt_with_keys(encrypt_with_keys(pt, &keys), &keys) != pt {
                return Err(format!("round trip failed for {pt:08X}"));
            }
        }
        Ok("vector+1000 round trips".to_string())
    };
    stage("cipher", run())
}

fn cube_sum_equivalence(rng: &mut ChaCha8Rng) -> StageResult {
    let mut run = || {
        const VARS: usize = 10;
        for poly in 0..40 {
            let p = Anf::random(rng, VARS, 4, 0.05);
            let size = rng.gen_range(1..=4);
            let picked = rand::seq::index::sample(rng, VARS, size).into_vec();
            let cube = Cube::new(&picked).map_err(|e| e.to_string())?;
            let var_mask = picked.iter().fold(0u32, |m, &v| m | 1 << v);
            let superpoly = p.superpoly(var_mask);
            let oracle = |pt: u32, _: MasterKey| p.eval((0..VARS).fold(0, |x, v| x | ((pt & public_bit(v) != 0) as u32) << v));
            for rest in 0..(1u32 << VARS) {
                if rest & var_mask != 0 {
                    continue;
                }
                let fixed = (0..VARS).filter(|v| rest >> v & 1 == 1).fold(0, |f, v| f | public_bit(v));
                if cube_sum(&oracle, &cube, fixed, MasterKey(0)) != superpoly.eval(rest) {
                    return Err(format!("polynomial {poly}: cube sum differs from superpoly at {rest:#x}"));
                }
            }
        }
        Ok("40 polynomials".to_string())
    };
    stage("cube_sum", run())
}

fn blr_sanity(rng: &mut ChaCha8Rng) -> StageResult {
    let cube = Cube::new(&[0, 1]).expect("valid cube");
    let both = public_bit(0) | public_bit(1);
    let linear = |pt: u32, k: MasterKey| pt & both == both && (k.bit(3) ^ k.bit(60));
    let quadratic = |pt: u32, k: MasterKey| pt & both == both && k.bit(1) && k.bit(2);
    let lin = blr_test(&linear, &cube, 0, 300, rng).linearity;
    let quad = blr_test(&quadratic, &cube, 0, 300, rng).linearity;
    let result = if lin != Linearity::Linear {
        Err(format!("linear superpoly classified {lin:?}"))
    } else if quad != Linearity::Nonlinear {
        Err(format!("quadratic superpoly classified {quad:?}"))
    } else {
        Ok("linear/quadratic".to_string())
    };
    stage("blr", result)
}

/// Span size by enumeration: rank is log2 of the number of distinct
/// combinations of rows.
fn span_rank(rows: &[u64]) -> usize {
    let mut span = std::collections::HashSet::new();
    for s in 0..(1u32 << rows.len()) {
        span.insert(rows.iter().enumerate().filter(|(i, _)| s >> i & 1 == 1).fold(0u64, |a, (_, r)| a ^ r));
    }
    span.len().trailing_zeros() as usize
}

fn gf2_oracle(rng: &mut ChaCha8Rng) -> StageResult {
    let mut run = || {
        for t in 0..50 {
            let (r, c) = (rng.gen_range(1..=10), rng.gen_range(1..=10));
            let rows: Vec<u64> = (0..r).map(|_| rng.gen::<u64>() & ((1 << c) - 1)).collect();
            let m = Gf2Matrix::from_rows(rows.clone(), c);
            let rank = row_reduce(&m).rank;
            if rank != span_rank(&rows) {
                return Err(format!("trial {t}: rank {rank} vs span {}", span_rank(&rows)));
            }
            let x: u64 = rng.gen::<u64>() & ((1 << c) - 1);
            let sol = Gf2System::new(m.clone(), m.mul_vec(x)).and_then(|s| s.solve()).map_err(|e| e.to_string())?;
            if m.mul_vec(sol.assign(0)) != m.mul_vec(x) {
                return Err(format!("trial {t}: solution does not satisfy system"));
            }
        }
        Ok("50 systems".to_string())
    };
    stage("gf2", run())
}
