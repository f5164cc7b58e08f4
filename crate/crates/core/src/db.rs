//! Line-oriented maxterm database.
//!
//! ```text
//! simeck-sccube-db v1
//! cipher=simeck32/64 round=4 hwbit=1 seed=0 fixed=0
//! cube=0,5,9,13,20,31 const=1 keys=37,58
//! ```
//!
//! Blank lines and `#` comments are ignored. A non-full leakage scope is
//! written as an extra `scope=left|right` token on the parameter line.

use std::fmt::Write as _;
use std::path::Path;

use crate::cube::{Cube, LinearPoly, Maxterm, KEY_BITS};
use crate::error::DbError;
use crate::gf2::XorBasis;
use crate::leakage::{LeakScope, LeakageSpec};

pub const HEADER: &str = "simeck-sccube-db v1";
pub const CIPHER_ID: &str = "simeck32/64";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DbMeta {
    pub candidates_tried: Option<usize>,
    /// Unix seconds.
    pub created: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxtermDb {
    pub cipher: String,
    pub leak: LeakageSpec,
    pub seed: u64,
    pub fixed_bit: bool,
    pub maxterms: Vec<Maxterm>,
    /// Written as comments; not read back.
    pub meta: DbMeta,
}

impl MaxtermDb {
    pub fn new(leak: LeakageSpec, seed: u64, fixed_bit: bool) -> Self {
        MaxtermDb {
            cipher: CIPHER_ID.to_string(),
            leak,
            seed,
            fixed_bit,
            maxterms: Vec::new(),
            meta: DbMeta::default(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.maxterms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.maxterms.len()
    }

    /// GF(2) rank of the stacked superpoly coefficient vectors.
    pub fn rank(&self) -> usize {
        let mut basis = XorBasis::new();
        for m in &self.maxterms {
            basis.insert(m.superpoly.coeffs);
        }
        basis.rank()
    }

    pub fn to_text(&self) -> Result<String, DbError> {
        let mut s = String::new();
        writeln!(s, "{HEADER}").unwrap();
        write!(
            s,
            "cipher={} round={} hwbit={} seed={} fixed={}",
            self.cipher,
            self.leak.round(),
            self.leak.hw_bit(),
            self.seed,
            self.fixed_bit as u8
        )
        .unwrap();
        if self.leak.scope() != LeakScope::Full {
            write!(s, " scope={}", self.leak.scope().name()).unwrap();
        }
        s.push('\n');
        if let Some(n) = self.meta.candidates_tried {
            writeln!(s, "# candidates={n} maxterms={} rank={}", self.len(), self.rank()).unwrap();
        }
        if let Some(t) = self.meta.created {
            writeln!(s, "# created={t}").unwrap();
        }
        for (index, m) in self.maxterms.iter().enumerate() {
            if m.fixed != m.cube.uniform_fixed(self.fixed_bit) {
                return Err(DbError::NonUniformFixedBits { index });
            }
            let cube: Vec<String> = m.cube.indexes().map(|i| i.to_string()).collect();
            let keys: Vec<String> = m.superpoly.key_indexes().map(|i| i.to_string()).collect();
            writeln!(
                s,
                "cube={} const={} keys={}",
                cube.join(","),
                m.superpoly.constant as u8,
                keys.join(",")
            )
            .unwrap();
        }
        Ok(s)
    }

    pub fn parse(text: &str) -> Result<Self, DbError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let err = |line: usize, message: String| DbError::Parse { line, message };

        let (n, header) = lines.next().ok_or_else(|| err(1, "missing header".into()))?;
        if header != HEADER {
            return Err(err(n, format!("expected header {HEADER:?}, found {header:?}")));
        }
        let (n, params) = lines.next().ok_or_else(|| err(n + 1, "missing parameter line".into()))?;
        let mut db = parse_params(params).map_err(|m| err(n, m))?;
        for (n, line) in lines {
            let m = parse_maxterm(line, db.fixed_bit).map_err(|m| err(n, m))?;
            db.maxterms.push(m);
        }
        Ok(db)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), DbError> {
        std::fs::write(path, self.to_text()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DbError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

fn fields(line: &str) -> Result<Vec<(&str, &str)>, String> {
    line.split_whitespace()
        .map(|tok| tok.split_once('=').ok_or_else(|| format!("expected key=value, found {tok:?}")))
        .collect()
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("invalid value {v:?} for {key}"))
}

fn parse_bit(key: &str, v: &str) -> Result<bool, String> {
    match v {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(format!("{key} must be 0 or 1, found {v:?}")),
    }
}

fn parse_params(line: &str) -> Result<MaxtermDb, String> {
    let (mut cipher, mut round, mut hwbit, mut seed, mut fixed) = (None, None, None, None, None);
    let mut scope = LeakScope::Full;
    for (k, v) in fields(line)? {
        match k {
            "cipher" => cipher = Some(v.to_string()),
            "round" => round = Some(parse_num::<usize>(k, v)?),
            "hwbit" => hwbit = Some(parse_num::<usize>(k, v)?),
            "seed" => seed = Some(parse_num::<u64>(k, v)?),
            "fixed" => fixed = Some(parse_bit(k, v)?),
            "scope" => scope = LeakScope::from_name(v).ok_or_else(|| format!("unknown scope {v:?}"))?,
            _ => return Err(format!("unknown field {k:?}")),
        }
    }
    let missing = |name: &str| format!("missing field {name}");
    let cipher = cipher.ok_or_else(|| missing("cipher"))?;
    if cipher != CIPHER_ID {
        return Err(format!("unsupported cipher {cipher:?}"));
    }
    let leak = LeakageSpec::with_scope(
        round.ok_or_else(|| missing("round"))?,
        hwbit.ok_or_else(|| missing("hwbit"))?,
        scope,
    )
    .map_err(|e| e.to_string())?;
    let mut db = MaxtermDb::new(leak, seed.ok_or_else(|| missing("seed"))?, fixed.ok_or_else(|| missing("fixed"))?);
    db.cipher = cipher;
    Ok(db)
}

fn parse_list(key: &str, v: &str) -> Result<Vec<usize>, String> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|x| parse_num::<usize>(key, x)).collect()
}

fn parse_maxterm(line: &str, fixed_bit: bool) -> Result<Maxterm, String> {
    let (mut cube, mut constant, mut keys) = (None, None, None);
    for (k, v) in fields(line)? {
        match k {
            "cube" => cube = Some(Cube::new(&parse_list(k, v)?).map_err(|e| e.to_string())?),
            "const" => constant = Some(parse_bit(k, v)?),
            "keys" => keys = Some(parse_list(k, v)?),
            _ => return Err(format!("unknown field {k:?}")),
        }
    }
    let cube = cube.ok_or("missing field cube")?;
    let keys = keys.ok_or("missing field keys")?;
    if let Some(&bad) = keys.iter().find(|&&i| i >= KEY_BITS) {
        return Err(format!("key index {bad} outside 0..64"));
    }
    let superpoly = LinearPoly::from_keys(constant.ok_or("missing field const")?, &keys);
    if superpoly.is_constant() {
        return Err("maxterm superpoly has no key terms".into());
    }
    let fixed = cube.uniform_fixed(fixed_bit);
    Ok(Maxterm { cube, superpoly, fixed })
}
