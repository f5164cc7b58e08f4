//! Simeck32/64: 32-bit block, 64-bit key, 32 Feistel rounds on 16-bit words.
//!
//! Bit numbering used throughout the crate: bit 0 of a block is its most
//! significant bit and bit 31 the least significant; key bits run from 0
//! (MSB) to 63 (LSB).

use std::fmt;

use crate::error::HexError;

/// Number of rounds of a full encryption.
pub const ROUNDS: usize = 32;

/// Round constant `2^16 - 4` mixed into every key-schedule step.
pub const KEY_CONSTANT: u16 = 0xFFFC;

/// First 32 bits (LSB first) of the m-sequence with feedback `X^5 + X^2 + 1`
/// started from the all-ones state.
pub const Z_SEQUENCE: u32 = lfsr_sequence();

const fn lfsr_sequence() -> u32 {
    // s[i+5] = s[i+2] ^ s[i]
    let mut state = [1u8; 5];
    let mut out = 0u32;
    let mut i = 0;
    while i < 32 {
        out |= (state[0] as u32) << i;
        let next = state[2] ^ state[0];
        state = [state[1], state[2], state[3], state[4], next];
        i += 1;
    }
    out
}

/// Circular left rotation of a 16-bit word.
#[inline]
pub fn rotl16(x: u16, s: u32) -> u16 {
    assert!(s < 16, "rotation amount {s} out of range");
    x.rotate_left(s)
}

/// Simeck round function `f(x) = (x & (x <<< 5)) ^ (x <<< 1)`.
#[inline]
pub fn round_f(x: u16) -> u16 {
    (x & x.rotate_left(5)) ^ x.rotate_left(1)
}

/// 64-bit master key, decomposed as `t2 ‖ t1 ‖ t0 ‖ k0` from the most
/// significant word down.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MasterKey(pub u64);

impl MasterKey {
    /// Key words as `[k0, t0, t1, t2]`, i.e. least significant word first.
    pub fn words(self) -> [u16; 4] {
        let k = self.0;
        [k as u16, (k >> 16) as u16, (k >> 32) as u16, (k >> 48) as u16]
    }

    /// Value of key bit `index` (0 = MSB).
    pub fn bit(self, index: usize) -> bool {
        assert!(index < 64);
        (self.0 >> (63 - index)) & 1 == 1
    }

    pub fn parse_hex(s: &str) -> Result<Self, HexError> {
        parse_hex_exact(s, 16).map(MasterKey)
    }
}

impl fmt::Debug for MasterKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MasterKey({:016X})", self.0)
    }
}

impl fmt::Display for MasterKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016X}", self.0)
    }
}

/// The 32 round keys derived from a master key.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RoundKeys(pub [u16; ROUNDS]);

impl RoundKeys {
    pub fn get(&self, round: usize) -> u16 {
        self.0[round]
    }
}

/// Expands a master key into round keys.
///
/// The schedule is a Feistel register `(t2, t1, t0, k0)`: each step outputs
/// `k0` as the round key, then shifts `t0 -> k0`, `t1 -> t0`, `t2 -> t1` and
/// loads `t2 <- f(t0) ^ k0 ^ C ^ z_i`.
pub fn key_schedule(key: MasterKey) -> RoundKeys {
    key_schedule_with(key, KEY_CONSTANT, Z_SEQUENCE)
}

/// Key schedule with explicit constant and z-sequence; only useful for
/// checking that a corrupted table is detected.
pub fn key_schedule_with(key: MasterKey, constant: u16, z_sequence: u32) -> RoundKeys {
    let [mut k0, mut t0, mut t1, mut t2] = key.words();
    let mut keys = [0u16; ROUNDS];
    for (i, rk) in keys.iter_mut().enumerate() {
        *rk = k0;
        let z = ((z_sequence >> i) & 1) as u16;
        let next_t2 = round_f(t0) ^ k0 ^ constant ^ z;
        k0 = t0;
        t0 = t1;
        t1 = t2;
        t2 = next_t2;
    }
    RoundKeys(keys)
}

/// Internal state after `round` completed rounds.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct CipherState {
    pub left: u16,
    pub right: u16,
    pub round: u8,
}

impl CipherState {
    pub fn from_block(block: u32) -> Self {
        CipherState { left: (block >> 16) as u16, right: block as u16, round: 0 }
    }

    /// `left ‖ right` as one 32-bit word.
    pub fn block(&self) -> u32 {
        ((self.left as u32) << 16) | self.right as u32
    }

    /// Advances one round with round key `rk`.
    pub fn step(self, rk: u16) -> Self {
        round_step(self, rk)
    }
}

/// One Feistel round: `(L, R) -> (f(L) ^ R ^ rk, L)`.
#[inline]
pub fn round_step(state: CipherState, rk: u16) -> CipherState {
    assert!((state.round as usize) < ROUNDS, "cannot advance past round {ROUNDS}");
    CipherState {
        left: round_f(state.left) ^ state.right ^ rk,
        right: state.left,
        round: state.round + 1,
    }
}

/// Runs the first `rounds` rounds with precomputed round keys.
pub fn encrypt_rounds(pt: u32, keys: &RoundKeys, rounds: usize) -> CipherState {
    assert!(rounds <= ROUNDS, "round count {rounds} out of range");
    keys.0[..rounds]
        .iter()
        .fold(CipherState::from_block(pt), |s, &rk| round_step(s, rk))
}

/// Internal state after `rounds` rounds of encrypting `pt` under `key`.
pub fn encrypt_partial(pt: u32, key: MasterKey, rounds: usize) -> CipherState {
    assert!(rounds <= ROUNDS, "round count {rounds} out of range");
    // Only the first four round keys are the raw key words; later ones need the schedule.
    if rounds <= 4 {
        let words = key.words();
        let mut s = CipherState::from_block(pt);
        for &rk in &words[..rounds] {
            s = round_step(s, rk);
        }
        return s;
    }
    encrypt_rounds(pt, &key_schedule(key), rounds)
}

pub fn encrypt_with_keys(pt: u32, keys: &RoundKeys) -> u32 {
    encrypt_rounds(pt, keys, ROUNDS).block()
}

pub fn encrypt(pt: u32, key: MasterKey) -> u32 {
    encrypt_with_keys(pt, &key_schedule(key))
}

pub fn decrypt_with_keys(ct: u32, keys: &RoundKeys) -> u32 {
    let (mut left, mut right) = ((ct >> 16) as u16, ct as u16);
    for &rk in keys.0.iter().rev() {
        let prev_left = right;
        let prev_right = left ^ round_f(prev_left) ^ rk;
        left = prev_left;
        right = prev_right;
    }
    ((left as u32) << 16) | right as u32
}

pub fn decrypt(ct: u32, key: MasterKey) -> u32 {
    decrypt_with_keys(ct, &key_schedule(key))
}

/// Parses an 8-digit hex block.
pub fn parse_block_hex(s: &str) -> Result<u32, HexError> {
    parse_hex_exact(s, 8).map(|v| v as u32)
}

/// Formats a block as 8 uppercase hex digits.
pub fn format_block_hex(block: u32) -> String {
    format!("{block:08X}")
}

fn parse_hex_exact(s: &str, digits: usize) -> Result<u64, HexError> {
    let s = s.trim();
    let s = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    if s.len() != digits {
        return Err(HexError::Width { expected: digits, found: s.len() });
    }
    if let Some(c) = s.chars().find(|c| !c.is_ascii_hexdigit()) {
        return Err(HexError::Digit(c));
    }
    Ok(u64::from_str_radix(s, 16).expect("validated hex digits"))
}
