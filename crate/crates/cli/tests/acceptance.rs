//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Reference values are frozen from the published tables for these board
//! families. Criterion 2 is known red on its cylinder half: the cylinder
//! reference values cannot be reproduced by exhaustive enumeration under the
//! stated adjacency (the oracle and the frontier DP agree with each other
//! and with every other published table, but not with that one); see the
//! test body for the cross-checks that isolate the discrepancy.

use std::process::Command;

use num_bigint::BigInt;
use num_traits::One;

use kingdom::board::{BoardSpec, BoundaryMode, Family};
use kingdom::{matching, oracle, transfer};

fn bi(v: i64) -> BigInt {
    BigInt::from(v)
}

fn theorem_sign(dims: &[usize]) -> BigInt {
    let blocks: usize = dims.iter().map(|n| n.div_ceil(2)).product();
    if blocks % 2 == 0 {
        bi(1)
    } else {
        bi(-1)
    }
}

/// Criterion 1: P(-1) over king free boards m,n in 1..=10 equals
/// (-1)^(ceil(m/2) ceil(n/2)) in every cell. Zero tolerance.
#[test]
fn criterion_1_theorem_sweep() {
    let scan =
        transfer::table_scan(Family::King, BoundaryMode::Free, (1, 10), (1, 10), -1).unwrap();
    for (i, &n) in scan.n_values.iter().enumerate() {
        for (j, &m) in scan.m_values.iter().enumerate() {
            assert_eq!(
                scan.rows[i][j],
                theorem_sign(&[m, n]),
                "P(-1) of king {m}x{n} deviates from the theorem pattern"
            );
        }
    }
    // the same sweep through the command-line surface
    let out = Command::new(env!("CARGO_BIN_EXE_kingdom"))
        .args(["table", "king", "--free", "-m", "1..10", "-n", "1..10", "-z", "-1", "--check-theorem"])
        .output()
        .unwrap();
    assert!(out.status.success(), "CLI sweep failed");
    assert!(String::from_utf8_lossy(&out.stdout).contains("all cells match"));
    println!("[criterion 1] PASS - 10x10 king free sweep matches (-1)^(ceil(m/2)ceil(n/2))");
}

/// Optional stretch of criterion 1 toward larger boards in point mode.
/// Slow; run with `cargo test -- --ignored`.
#[test]
#[ignore = "several minutes; stretch check beyond the 10x10 gate"]
fn criterion_1_stretch_to_12() {
    let scan =
        transfer::table_scan(Family::King, BoundaryMode::Free, (11, 12), (1, 12), -1).unwrap();
    for (i, &n) in scan.n_values.iter().enumerate() {
        for (j, &m) in scan.m_values.iter().enumerate() {
            assert_eq!(scan.rows[i][j], theorem_sign(&[m, n]), "king {m}x{n}");
        }
    }
    println!("[criterion 1 stretch] PASS - extended to m = 12");
}

// Reference tables for the 3..=6 cylinder and torus blocks: rows are n,
// columns are m, the cyclic axis is x with extent m.
const CYLINDER_TABLE: [[i64; 4]; 4] = [
    [5, -3, -1, -1],
    [3, 39, 11, 43],
    [9, 33, -1, -1],
    [15, -13, -1, 11],
];
const TORUS_TABLE: [[i64; 4]; 4] = [
    [-1, 3, -1, -1],
    [3, 63, 3, 51],
    [-1, 3, -1, -1],
    [-1, 51, -1, 11],
];

/// Criterion 2: reproduce all 16 + 16 entries of the cylinder and torus
/// reference tables exactly. Zero tolerance.
///
/// Known red on the cylinder half. The cross-checks below pin the
/// computation: the frontier DP equals the brute-force oracle on every cell
/// small enough to enumerate (both orientations), reproduces the full torus
/// block, the full free-king block and the full wazir block, yet the
/// cylinder reference values differ in 13 of 16 cells. Exhaustive
/// enumeration of the 3x3 cylinder king graph (C3 x P3 strong product, 512
/// subsets) yields P(-1) = 1, not the listed 5; no king-cylinder adjacency
/// convention reproduces the listed block.
#[test]
fn criterion_2_cylinder_and_torus_tables() {
    // orientation pinning: columns = m = cyclic-axis extent, checked against
    // the oracle on every cell it can reach
    for (mode, name) in [(BoundaryMode::CylX, "cylinder"), (BoundaryMode::Torus, "torus")] {
        for m in 3..=6usize {
            for n in 3..=6usize {
                if m * n > 24 {
                    continue;
                }
                let spec = BoardSpec::rect(Family::King, m, n, mode).unwrap();
                let dp = transfer::transfer_eval(&spec, -1).unwrap();
                let oracle_v = oracle::eval_signed_count(&spec, true).unwrap();
                assert_eq!(dp, oracle_v, "engines disagree on {name} {m}x{n}");
            }
        }
    }

    let mut failures = Vec::new();
    for (mode, table, name) in [
        (BoundaryMode::Torus, &TORUS_TABLE, "torus"),
        (BoundaryMode::CylX, &CYLINDER_TABLE, "cylinder"),
    ] {
        let scan = transfer::table_scan(Family::King, mode, (3, 6), (3, 6), -1).unwrap();
        for (i, row) in table.iter().enumerate() {
            for (j, &expected) in row.iter().enumerate() {
                let got = &scan.rows[i][j];
                if *got != bi(expected) {
                    failures.push(format!(
                        "{name} m={} n={}: reference {expected}, computed {got}",
                        scan.m_values[j], scan.n_values[i]
                    ));
                }
            }
        }
        if failures.is_empty() {
            println!("[criterion 2] {name} block: all 16 entries reproduced");
        }
    }
    if !failures.is_empty() {
        println!("[criterion 2] FAIL - {} of 32 reference entries not reproduced:", failures.len());
        for f in &failures {
            println!("  {f}");
        }
        panic!(
            "criterion 2 red: {} cylinder reference entries differ from exhaustive enumeration",
            failures.len()
        );
    }
    println!("[criterion 2] PASS - cylinder and torus blocks reproduced exactly");
}

// Wazir (grid graph) reference block, m,n in 1..=8.
const WAZIR_TABLE: [[i64; 8]; 8] = [
    [-1, -1, 1, 1, -1, -1, 1, 1],
    [-1, 3, -3, 5, -5, 7, -7, 9],
    [1, -3, 1, 5, -3, -3, 5, 1],
    [1, 5, 5, 5, 1, 1, -3, 1],
    [-1, -5, -3, 1, 3, -1, 9, 13],
    [-1, 7, -3, 1, -1, 15, -7, 9],
    [1, -7, 5, -3, 9, -7, -3, -3],
    [1, 9, 1, 1, 13, 9, -3, 9],
];

/// Criterion 3: the m,n <= 8 wazir block reproduced exactly. Zero tolerance.
#[test]
fn criterion_3_wazir_table() {
    let scan = transfer::table_scan(Family::Wazir, BoundaryMode::Free, (1, 8), (1, 8), -1).unwrap();
    for (i, row) in WAZIR_TABLE.iter().enumerate() {
        for (j, &expected) in row.iter().enumerate() {
            assert_eq!(
                scan.rows[i][j],
                bi(expected),
                "wazir m={} n={}",
                scan.m_values[j],
                scan.n_values[i]
            );
        }
    }
    println!("[criterion 3] PASS - wazir 8x8 block reproduced exactly");
}

/// Criterion 4: gamma(K_{8x8}) = 9 via min-support of the full polynomial.
#[test]
fn criterion_4_domination_number_8x8() {
    let spec = BoardSpec::free(Family::King, vec![8, 8]).unwrap();
    let p = transfer::transfer_polynomial(&spec).unwrap();
    assert_eq!(p.domination_number(), 9, "gamma of the 8x8 king board");
    println!("[criterion 4] PASS - gamma(king 8x8) = 9 in polynomial mode");
}

/// Criterion 5: coefficient-exact oracle/transfer equality on every board
/// with |V| <= 20 across both families and all four boundary layouts.
#[test]
fn criterion_5_engine_equivalence() {
    let mut cases = 0usize;
    for family in [Family::King, Family::Wazir] {
        for mode in [BoundaryMode::Free, BoundaryMode::CylX, BoundaryMode::CylY, BoundaryMode::Torus] {
            for m in 1..=20usize {
                for n in 1..=20usize {
                    if m * n > 20 {
                        continue;
                    }
                    let spec = match BoardSpec::rect(family, m, n, mode) {
                        Ok(s) => s,
                        Err(_) => continue, // cyclic axis below 3
                    };
                    let via_dp = transfer::transfer_polynomial(&spec).unwrap();
                    let via_oracle = oracle::enumerate_polynomial(&spec, false).unwrap();
                    assert_eq!(via_dp, via_oracle, "engines disagree on {spec}");
                    cases += 1;
                }
            }
        }
    }
    // degenerate empty boards ride along
    for spec in [
        BoardSpec::free(Family::King, vec![0, 5]).unwrap(),
        BoardSpec::free(Family::Wazir, vec![3, 0]).unwrap(),
    ] {
        assert_eq!(
            transfer::transfer_polynomial(&spec).unwrap(),
            oracle::enumerate_polynomial(&spec, false).unwrap()
        );
        cases += 1;
    }
    println!("[criterion 5] PASS - {cases} boards coefficient-exact across engines");
}

/// Criterion 6: exhaustive matching verification on king free boards 1x1
/// through 4x5 and on the three oracle-sized 3-d boards. Zero violations.
#[test]
fn criterion_6_matching_exhaustive() {
    let mut boards: Vec<Vec<usize>> = Vec::new();
    for m in 1..=4usize {
        for n in 1..=5usize {
            boards.push(vec![m, n]);
        }
    }
    boards.push(vec![2, 2, 2]);
    boards.push(vec![2, 2, 3]);
    boards.push(vec![2, 3, 3]);
    for dims in boards {
        let spec = BoardSpec::free(Family::King, dims.clone()).unwrap();
        let report = matching::verify_theorem(&spec, false).unwrap();
        assert!(report.pass(), "matching verification failed on {spec}: {report:?}");
        assert_eq!(report.violations.len(), 0, "{spec}");
        assert_eq!(BigInt::from(report.signed_sum), theorem_sign(&dims), "{spec}");
    }
    println!("[criterion 6] PASS - matching verified exhaustively on 23 boards");
}

/// Criterion 7: the d-dimensional parity on king 3x3x3 by brute force over
/// 2^27 subsets equals (-1)^8 = +1.
#[test]
fn criterion_7_three_dimensional_oracle() {
    let spec = BoardSpec::free(Family::King, vec![3, 3, 3]).unwrap();
    let signed = oracle::eval_signed_count(&spec, true).unwrap();
    assert_eq!(signed, bi(1), "P(-1) of king 3x3x3");
    assert_eq!(signed, theorem_sign(&[3, 3, 3]));
    println!("[criterion 7] PASS - king 3x3x3 signed count = +1 over 2^27 subsets");
}

/// Criterion 8: P(1) is odd for every polynomial the other criteria touch.
/// (The polynomial constructor also enforces this; here it is checked
/// through the evaluation route.)
#[test]
fn criterion_8_odd_totals() {
    let mut checked = 0usize;
    let odd = |v: &BigInt| (v % bi(2)).magnitude().is_one();

    // boards from the criterion-1 sweep, point mode at z = 1
    for m in 1..=10usize {
        for n in 1..=10usize {
            let spec = BoardSpec::free(Family::King, vec![m, n]).unwrap();
            assert!(odd(&transfer::transfer_eval(&spec, 1).unwrap()), "{spec}");
            checked += 1;
        }
    }
    // cylinder/torus and wazir table boards
    for mode in [BoundaryMode::CylX, BoundaryMode::Torus] {
        for m in 3..=6usize {
            for n in 3..=6usize {
                let spec = BoardSpec::rect(Family::King, m, n, mode).unwrap();
                assert!(odd(&transfer::transfer_eval(&spec, 1).unwrap()), "{spec}");
                checked += 1;
            }
        }
    }
    for m in 1..=8usize {
        for n in 1..=8usize {
            let spec = BoardSpec::free(Family::Wazir, vec![m, n]).unwrap();
            assert!(odd(&transfer::transfer_eval(&spec, 1).unwrap()), "{spec}");
            checked += 1;
        }
    }
    // polynomial route on the criterion-6 boards
    for dims in [vec![4usize, 5], vec![2, 2, 3], vec![2, 3, 3], vec![8, 8]] {
        let spec = BoardSpec::free(Family::King, dims).unwrap();
        let p = if spec.ndim() == 2 {
            transfer::transfer_polynomial(&spec).unwrap()
        } else {
            oracle::enumerate_polynomial(&spec, false).unwrap()
        };
        assert!(odd(&p.eval_i64(1)), "{spec}");
        checked += 1;
    }
    println!("[criterion 8] PASS - P(1) odd on {checked} boards");
}

/// Criterion 9: seeded sampling on boards beyond the oracle: 10^5 samples on
/// king 12x12 and 10^4 on king 5x5x5, zero partner-property violations.
#[test]
fn criterion_9_sampled_matching() {
    let spec = BoardSpec::free(Family::King, vec![12, 12]).unwrap();
    let report = matching::sampled_check(&spec, 100_000, 7).unwrap();
    assert!(report.pass(), "king 12x12: {report:?}");
    assert_eq!(report.violations.len(), 0);

    let spec = BoardSpec::free(Family::King, vec![5, 5, 5]).unwrap();
    let report = matching::sampled_check(&spec, 10_000, 7).unwrap();
    assert!(report.pass(), "king 5x5x5: {report:?}");
    assert_eq!(report.violations.len(), 0);
    println!("[criterion 9] PASS - 110000 seeded samples, zero violations");
}
