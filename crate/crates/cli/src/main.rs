use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sccube::attack::{complexity_report, preprocess, recover_linear, run_attack, AttackOptions, SimulatedDevice};
use sccube::db::MaxtermDb;
use sccube::leakage::leak_bit;
use sccube::simeck::{decrypt, encrypt_partial, format_block_hex, parse_block_hex};
use sccube::table3::{verify_table3, IndexMapping};
use sccube::{selftest, LeakScope, LeakageSpec, MasterKey, SearchConfig};

#[derive(Parser)]
#[command(name = "sccube", version, about = "Side-channel cube attack on Simeck32/64 with Hamming-weight leakage")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = one per CPU).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scope {
    Full,
    Left,
    Right,
}

impl From<Scope> for LeakScope {
    fn from(s: Scope) -> Self {
        match s {
            Scope::Full => LeakScope::Full,
            Scope::Left => LeakScope::Left,
            Scope::Right => LeakScope::Right,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mapping {
    Identity,
    Mod32,
}

impl From<Mapping> for IndexMapping {
    fn from(m: Mapping) -> Self {
        match m {
            Mapping::Identity => IndexMapping::Identity,
            Mapping::Mod32 => IndexMapping::Mod32,
        }
    }
}

#[derive(clap::Args)]
struct LeakArgs {
    /// Round after which the state leaks.
    #[arg(long, default_value_t = 4)]
    round: usize,
    /// Bit of the Hamming weight that leaks (0 = parity).
    #[arg(long = "hwbit", default_value_t = 1)]
    hw_bit: usize,
    /// Part of the state whose weight leaks.
    #[arg(long, value_enum, default_value_t = Scope::Full)]
    scope: Scope,
}

impl LeakArgs {
    fn spec(&self) -> Result<LeakageSpec, String> {
        LeakageSpec::with_scope(self.round, self.hw_bit, self.scope.into()).map_err(|e| e.to_string())
    }
}

fn block(s: &str) -> Result<u32, String> {
    parse_block_hex(s).map_err(|e| e.to_string())
}

fn key(s: &str) -> Result<MasterKey, String> {
    MasterKey::parse_hex(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt one block, optionally stopping after fewer rounds.
    Encrypt {
        /// Plaintext, 8 hex digits.
        #[arg(long, value_parser = block)]
        pt: u32,
        /// Master key, 16 hex digits.
        #[arg(long, value_parser = key)]
        key: MasterKey,
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u8).range(0..=32))]
        rounds: u8,
    },
    /// Decrypt one block.
    Decrypt {
        #[arg(long, value_parser = block)]
        ct: u32,
        #[arg(long, value_parser = key)]
        key: MasterKey,
    },
    /// Print the leaked bit for one plaintext under one key.
    Leak {
        #[arg(long, value_parser = block)]
        pt: u32,
        #[arg(long, value_parser = key)]
        key: MasterKey,
        #[command(flatten)]
        leak: LeakArgs,
    },
    /// Search for maxterms and write a database.
    Preprocess {
        /// Candidate cubes to try.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long)]
        out: PathBuf,
        /// Cube sizes to sample from.
        #[arg(long, value_delimiter = ',', default_value = "6,8")]
        sizes: Vec<usize>,
        /// BLR trials per candidate.
        #[arg(long, default_value_t = 300)]
        trials: usize,
        /// Set non-cube plaintext bits to 1 instead of 0.
        #[arg(long)]
        fixed: bool,
        /// Stop once the superpolys reach this rank.
        #[arg(long, default_value_t = 32)]
        target_rank: usize,
        #[command(flatten)]
        leak: LeakArgs,
    },
    /// Run the online phase against a simulated victim.
    Attack {
        #[arg(long)]
        db: PathBuf,
        /// Hidden key of the simulated device.
        #[arg(long, value_parser = key)]
        victim_key: MasterKey,
        /// Brute-force the key bits left free by the equations.
        #[arg(long)]
        full_recover: bool,
        /// Disclose this many free bits to the brute force (test aid).
        #[arg(long, default_value_t = 0)]
        reveal_free: usize,
        /// Maximum brute-force trials.
        #[arg(long, default_value_t = 1 << 32)]
        brute_budget: u64,
    },
    /// Print the chosen-plaintext cost of a database.
    Complexity {
        #[arg(long)]
        db: PathBuf,
    },
    /// Run the embedded invariant checks.
    Selftest,
    /// Replay the published maxterm table against the simulator.
    VerifyTable3 {
        #[arg(long, value_enum, default_value_t = Mapping::Mod32)]
        mapping: Mapping,
        #[arg(long, default_value_t = 300)]
        trials: usize,
        #[arg(long)]
        fixed: bool,
        #[command(flatten)]
        leak: LeakArgs,
    },
}

fn run(cli: Cli) -> Result<(), String> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global().map_err(|e| e.to_string())?;
    }
    match cli.command {
        Command::Encrypt { pt, key, rounds } => {
            println!("{}", format_block_hex(encrypt_partial(pt, key, rounds as usize).block()));
        }
        Command::Decrypt { ct, key } => println!("{}", format_block_hex(decrypt(ct, key))),
        Command::Leak { pt, key, leak } => println!("{}", leak_bit(pt, key, &leak.spec()?) as u8),
        Command::Preprocess { budget, out, sizes, trials, fixed, target_rank, leak } => {
            let config = SearchConfig {
                cube_sizes: sizes,
                leak: leak.spec()?,
                blr_trials: trials,
                candidate_budget: budget,
                rng_seed: cli.seed,
                target_rank,
                fixed_bit: fixed,
                ..SearchConfig::default()
            };
            let (mut db, outcome) = preprocess(&config, 0).map_err(|e| e.to_string())?;
            db.meta.created = SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs());
            db.save(&out).map_err(|e| format!("{}: {e}", out.display()))?;
            let cost = complexity_report(&db);
            println!("candidates={}", outcome.candidates_tried);
            println!("maxterms={}", db.len());
            println!("rank={}", db.rank());
            println!("target_rank={target_rank}");
            println!("chosen_plaintexts={}", cost.chosen_plaintexts);
            println!("log2_chosen_plaintexts={:.4}", cost.log2_plaintexts);
            let s = &outcome.stats;
            println!("rejected_constant={}", s.screened_constant + s.blr_constant);
            println!("rejected_nonlinear={}", s.blr_nonlinear);
            println!("rejected_false_positive={}", s.false_positives);
            println!("duplicate_cubes={}", s.duplicate_cubes);
            println!("out={}", out.display());
            if let Some(d) = outcome.diagnostic() {
                eprintln!("warning: {d}");
            }
        }
        Command::Attack { db, victim_key, full_recover, reveal_free, brute_budget } => {
            let db = MaxtermDb::load(&db).map_err(|e| format!("{}: {e}", db.display()))?;
            let mut victim = SimulatedDevice::new(victim_key, db.leak);
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let known_pairs = vec![victim.known_pair(rng.gen()), victim.known_pair(rng.gen())];
            // the free columns depend only on the equations; a homogeneous solve finds them
            let homogeneous: Vec<bool> = db.maxterms.iter().map(|m| m.superpoly.constant).collect();
            let free = recover_linear(&db, &homogeneous).map_err(|e| e.to_string())?.free;
            let revealed = free.iter().take(reveal_free).map(|&i| (i, victim_key.bit(i))).collect();
            let options = AttackOptions { full_recover, revealed, brute_budget, known_pairs };
            let report = run_attack(&db, &mut victim, &options).map_err(|e| e.to_string())?;
            eprint!("{report}");
            print!("{}", report.to_kv());
            if full_recover && !report.success {
                return Err(format!("key not found within {} trials", report.brute_force_tried));
            }
        }
        Command::Complexity { db } => {
            let db = MaxtermDb::load(&db).map_err(|e| format!("{}: {e}", db.display()))?;
            let r = complexity_report(&db);
            let sizes: Vec<String> = r.cubes_by_size.iter().map(|(s, n)| format!("{n}x2^{s}")).collect();
            println!("cubes={}", sizes.join("+"));
            println!("chosen_plaintexts={}", r.chosen_plaintexts);
            println!("log2_chosen_plaintexts={:.4}", r.log2_plaintexts);
            if let Some(note) = r.divergence_note() {
                println!("data_complexity_note={note}");
            }
        }
        Command::Selftest => {
            let report = selftest::run(cli.seed);
            print!("{report}");
            if !report.passed() {
                return Err("selftest failed".into());
            }
        }
        Command::VerifyTable3 { mapping, trials, fixed, leak } => {
            print!("{}", verify_table3(mapping.into(), leak.spec()?, fixed, trials, cli.seed));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
