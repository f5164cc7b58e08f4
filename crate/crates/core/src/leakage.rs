//! Hamming-weight side-channel simulator.
//!
//! The simulated device leaks one bit of the binary Hamming weight of the
//! internal state after a chosen round.

use crate::error::SpecError;
use crate::simeck::{encrypt_partial, CipherState, MasterKey};

/// Which part of the internal state the Hamming weight is taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum LeakScope {
    /// Both 16-bit halves.
    #[default]
    Full,
    Left,
    Right,
}

impl LeakScope {
    pub fn name(self) -> &'static str {
        match self {
            LeakScope::Full => "full",
            LeakScope::Left => "left",
            LeakScope::Right => "right",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "full" => Some(LeakScope::Full),
            "left" => Some(LeakScope::Left),
            "right" => Some(LeakScope::Right),
            _ => None,
        }
    }
}

/// Round after which the state is measured and the Hamming-weight bit
/// exposed (0 = LSB).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LeakageSpec {
    round: u8,
    hw_bit: u8,
    scope: LeakScope,
}

impl Default for LeakageSpec {
    fn default() -> Self {
        LeakageSpec { round: 4, hw_bit: 1, scope: LeakScope::Full }
    }
}

impl LeakageSpec {
    pub fn new(round: usize, hw_bit: usize) -> Result<Self, SpecError> {
        Self::with_scope(round, hw_bit, LeakScope::Full)
    }

    pub fn with_scope(round: usize, hw_bit: usize, scope: LeakScope) -> Result<Self, SpecError> {
        if !(1..=32).contains(&round) {
            return Err(SpecError::Round(round));
        }
        if hw_bit > 7 {
            return Err(SpecError::HwBit(hw_bit));
        }
        Ok(LeakageSpec { round: round as u8, hw_bit: hw_bit as u8, scope })
    }

    pub fn round(&self) -> usize {
        self.round as usize
    }

    pub fn hw_bit(&self) -> usize {
        self.hw_bit as usize
    }

    pub fn scope(&self) -> LeakScope {
        self.scope
    }
}

/// Number of set bits in `left ‖ right`.
pub fn hamming_weight(state: &CipherState) -> u32 {
    state.block().count_ones()
}

fn scoped_weight(state: &CipherState, scope: LeakScope) -> u32 {
    match scope {
        LeakScope::Full => hamming_weight(state),
        LeakScope::Left => state.left.count_ones(),
        LeakScope::Right => state.right.count_ones(),
    }
}

/// Bit `spec.hw_bit()` of the Hamming weight of the state after
/// `spec.round()` rounds.
#[inline]
pub fn leak_bit(pt: u32, key: MasterKey, spec: &LeakageSpec) -> bool {
    let state = encrypt_partial(pt, key, spec.round());
    (scoped_weight(&state, spec.scope) >> spec.hw_bit) & 1 == 1
}

/// A black-box bit function of public input and key: the object the cube
/// machinery sums over.
pub trait LeakOracle: Sync {
    fn eval(&self, pt: u32, key: MasterKey) -> bool;
}

impl<F> LeakOracle for F
where
    F: Fn(u32, MasterKey) -> bool + Sync,
{
    fn eval(&self, pt: u32, key: MasterKey) -> bool {
        self(pt, key)
    }
}

/// Simulated Simeck32/64 device leaking according to a [`LeakageSpec`].
#[derive(Clone, Copy, Debug, Default)]
pub struct SimeckLeak {
    pub spec: LeakageSpec,
}

impl SimeckLeak {
    pub fn new(spec: LeakageSpec) -> Self {
        SimeckLeak { spec }
    }
}

impl LeakOracle for SimeckLeak {
    #[inline]
    fn eval(&self, pt: u32, key: MasterKey) -> bool {
        leak_bit(pt, key, &self.spec)
    }
}
