use std::process::{Command, Output};

use trunczeta::enumerate::CountTable;

fn trunczeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trunczeta"))
        .args(args)
        .env_remove("TRUNCZETA_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_small_indices() {
    let o = trunczeta(&["count", "--prime", "3", "--exponent", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "13 (enumeration)");

    let o = trunczeta(&["count", "--prime", "2", "--exponent", "2", "--cocyclic"]);
    assert_eq!(stdout(&o).trim(), "4 (enumeration)");
}

#[test]
fn methods_agree() {
    for method in ["enum", "cells", "formula"] {
        let o = trunczeta(&[
            "count",
            "--prime",
            "5",
            "--exponent",
            "4",
            "--method",
            method,
        ]);
        assert!(o.status.success(), "{method}");
        assert!(stdout(&o).starts_with(&format!(
            "{} ",
            trunczeta::enumerate::count_subrings(5, 4).unwrap()
        )));
    }
}

#[test]
fn zeta_coefficients() {
    let o = trunczeta(&["zeta", "--which", "subring", "--prime", "3", "--terms", "3"]);
    assert_eq!(stdout(&o).trim(), "1,1,13,49");
}

#[test]
fn json_table_round_trips() {
    let o = trunczeta(&["table", "--prime", "3", "--max-exponent", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let table: CountTable = serde_json::from_str(&text).unwrap();
    assert_eq!(table.prime, 3);
    assert_eq!(table.rows.len(), 6);
    let again = serde_json::to_string_pretty(&table).unwrap();
    assert_eq!(again, text.trim_end_matches('\n'));
}

#[test]
fn csv_table_has_header() {
    let o = trunczeta(&[
        "table",
        "--prime",
        "3",
        "--max-exponent",
        "2",
        "--format",
        "csv",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("prime,m,subrings,cocyclic,method"));
    assert_eq!(lines.nth(2), Some("3,2,13,9,enumeration"));
}

#[test]
fn exit_codes() {
    let o = trunczeta(&["count", "--prime", "4", "--exponent", "2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = trunczeta(&["count", "--prime", "3"]);
    assert_eq!(o.status.code(), Some(2));

    let o = Command::new(env!("CARGO_BIN_EXE_trunczeta"))
        .args(["count", "--prime", "7", "--exponent", "6"])
        .env("TRUNCZETA_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));

    let o = trunczeta(&["verify", "--suite", "identities"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
