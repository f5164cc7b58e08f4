//! Simeck32/64 with a Hamming-weight leakage simulator and a side-channel
//! cube attack pipeline: maxterm search, BLR linearity testing, superpoly
//! extraction, GF(2) solving and online key recovery.

pub mod anf;
pub mod attack;
pub mod cube;
pub mod db;
pub mod error;
pub mod gf2;
pub mod leakage;
pub mod selftest;
pub mod simeck;
pub mod table3;

pub use cube::{cube_sum, Cube, LinearPoly, Maxterm, SearchConfig};
pub use error::{AttackError, DbError, Gf2Error, HexError, SpecError, VictimError};
pub use leakage::{LeakOracle, LeakScope, LeakageSpec, SimeckLeak};
pub use simeck::{decrypt, encrypt, encrypt_partial, CipherState, MasterKey, RoundKeys};
