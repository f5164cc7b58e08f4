use std::path::PathBuf;
use std::process::{Command, Output};

fn sccube(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sccube")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn kv<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
}

fn temp_db(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("sccube-cli-{}-{name}.db", std::process::id()))
}

const KEY: &str = "1918111009080100";

#[test]
fn encrypt_matches_test_vector() {
    let o = sccube(&["encrypt", "--pt", "65656877", "--key", KEY]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "770D2C76\n");
    let o = sccube(&["decrypt", "--ct", "770d2c76", "--key", KEY]);
    assert_eq!(stdout(&o), "65656877\n");
}

#[test]
fn zero_rounds_is_identity() {
    let o = sccube(&["encrypt", "--pt", "0xDEADBEEF", "--key", KEY, "--rounds", "0"]);
    assert_eq!(stdout(&o), "DEADBEEF\n");
}

#[test]
fn malformed_input_is_a_usage_error() {
    for args in [
        &["encrypt", "--pt", "6565687", "--key", KEY][..],
        &["encrypt", "--pt", "6565687G", "--key", KEY],
        &["encrypt", "--pt", "65656877", "--key", "19181110090801"],
        &["encrypt", "--pt", "65656877", "--key", KEY, "--rounds", "33"],
        &["bogus"],
    ] {
        let o = sccube(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn leak_parity_and_range_checks() {
    // four-round state 17EE5658 has weight 17
    let bit = |hw: &str| stdout(&sccube(&["leak", "--pt", "65656877", "--key", KEY, "--hwbit", hw]));
    assert_eq!(bit("0"), "1\n");
    assert_eq!(bit("1"), "0\n");
    assert_eq!(bit("4"), "1\n");
    let o = sccube(&["leak", "--pt", "65656877", "--key", KEY, "--round", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn preprocess_empty_budget_warns() {
    let out = temp_db("empty");
    let o = sccube(&["preprocess", "--budget", "0", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(kv(&text, "maxterms"), Some("0"));
    assert_eq!(kv(&text, "rank"), Some("0"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    std::fs::remove_file(out).unwrap();
}

fn equation_lines(path: &PathBuf) -> Vec<String> {
    std::fs::read_to_string(path).unwrap().lines().filter(|l| !l.starts_with('#')).map(String::from).collect()
}

#[test]
fn preprocess_and_attack() {
    let (a, b) = (temp_db("a"), temp_db("b"));
    let run = |out: &PathBuf, threads: &str| {
        sccube(&["--seed", "5", "--threads", threads, "preprocess", "--budget", "1500", "--out", out.to_str().unwrap()])
    };
    let first = run(&a, "1");
    assert!(first.status.success());
    assert!(run(&b, "3").status.success());
    assert_eq!(equation_lines(&a), equation_lines(&b));
    let rank: usize = kv(&stdout(&first), "rank").unwrap().parse().unwrap();
    assert!(rank > 0);

    let key = "0123456789ABCDEF";
    let o = sccube(&["attack", "--db", a.to_str().unwrap(), "--victim-key", key]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(kv(&text, "rank"), Some(rank.to_string().as_str()));
    let complexity = stdout(&sccube(&["complexity", "--db", a.to_str().unwrap()]));
    assert_eq!(kv(&text, "chosen_plaintexts"), kv(&complexity, "chosen_plaintexts"));
    let master = u64::from_str_radix(key, 16).unwrap();
    for pair in kv(&text, "determined_bits").unwrap().split(',') {
        let (bit, value) = pair.split_once(':').unwrap();
        let bit: usize = bit.parse().unwrap();
        assert_eq!(value == "1", master >> (63 - bit) & 1 == 1, "bit {bit}");
    }

    // leave 12 bits to the brute force
    let reveal = (64 - rank - 12).to_string();
    let o = sccube(&["attack", "--db", a.to_str().unwrap(), "--victim-key", key, "--full-recover", "--reveal-free", &reveal]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(kv(&text, "recovered_key"), Some(key));
    assert_eq!(kv(&text, "success"), Some("1"));
    assert_eq!(kv(&text, "log2_residual_search_space"), Some("12"));

    let o = sccube(&["attack", "--db", a.to_str().unwrap(), "--victim-key", key, "--full-recover", "--reveal-free", &reveal, "--brute-budget", "0"]);
    assert_eq!(o.status.code(), Some(1));

    std::fs::remove_file(a).unwrap();
    std::fs::remove_file(b).unwrap();
}

#[test]
fn attack_reports_bad_database() {
    let path = temp_db("bad");
    std::fs::write(&path, "not a database\n").unwrap();
    let o = sccube(&["attack", "--db", path.to_str().unwrap(), "--victim-key", KEY]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    std::fs::remove_file(path).unwrap();
    let o = sccube(&["attack", "--db", "/nonexistent/x.db", "--victim-key", KEY]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn selftest_passes() {
    let o = sccube(&["selftest"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("selftest=pass\n"));
}

#[test]
fn published_table_report() {
    let o = sccube(&["verify-table3", "--mapping", "identity", "--trials", "50"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 33);
    assert!(text.contains("mapping=identity rows=32"));
}
