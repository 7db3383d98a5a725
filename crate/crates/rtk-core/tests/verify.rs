mod common;

use common::{ty, w};
use num_bigint::BigInt;
use rtk_core::tables::{seal, RowId, TableId, TableStore};
use rtk_core::verify::*;

fn tampered(from: &str, to: &str) -> TableStore {
    let text = TableStore::builtin_text();
    let body = text.splitn(3, '\n').nth(2).unwrap();
    assert_eq!(body.matches(from).count(), 1, "{from}");
    TableStore::parse(&seal(&body.replacen(from, to, 1))).unwrap()
}

fn row(t: TableId, index: usize) -> RowId {
    RowId { table: t, index }
}

#[test]
fn zero_bound_gives_an_empty_report() {
    let r = cross_verify(TableStore::builtin(), 0);
    assert!(r.is_empty());
    assert_eq!(r.weights_checked, 0);
    assert!(r.excluded.is_empty());
}

#[test]
fn full_sweep_has_no_mismatches() {
    let t = std::time::Instant::now();
    let r = cross_verify(TableStore::builtin(), 5000);
    eprintln!("{}in {:?}", r.to_text(), t.elapsed());
    assert!(r.mismatches.is_empty(), "{}", r.to_text());
    assert!(r.weights_checked > 8000);
    assert!(r.rows_checked.len() >= 70);
    // the printed B_n 2ω1 value, n = 3..8, is one too large
    assert_eq!(r.errata.len(), 6);
    for (k, e) in r.errata.iter().enumerate() {
        assert_eq!(e.row, Some(row(TableId::T2, 4)));
        let n = k + 3;
        assert_eq!(e.ty, ty(&format!("B{n}")));
        assert_eq!((e.expected.clone(), e.computed.clone()), ((n + 1).to_string(), n.to_string()));
    }
    assert!(r.excluded.contains(&row(TableId::TM2, 3)));
    assert!(!r.excluded.iter().any(|id| matches!(id.table, TableId::TEXC | TableId::TPAIRS)));
    let drops: Vec<String> = r.dimension_drops.iter().map(|r| r.to_string()).collect();
    assert_eq!(drops, ["T7#2", "T8#3", "T8#6", "T8#9", "T8#11"]);
    assert!(r.to_text().ends_with("0 mismatches\n"));
}

#[test]
fn injected_dimension_is_flagged_once() {
    let store = tampered("T3 | C3 | w3 | - | dim 14 | -", "T3 | C3 | w3 | - | dim 15 | -");
    let r = cross_verify(&store, 1000);
    assert_eq!(r.mismatches.len(), 1, "{}", r.to_text());
    let m = &r.mismatches[0];
    assert_eq!(m.check, Check::Dimension);
    assert_eq!((m.ty, m.lambda.clone()), (ty("C3"), w(&[0, 0, 1])));
    assert_eq!((m.expected.as_str(), m.computed.as_str()), ("15", "14"));
}

#[test]
fn injected_form_and_zero_faults() {
    // E7 ω7 moved from the symplectic to the even orthogonal table
    let store = tampered("T3 | E7 | w7 | - | dim 56 | -\n", "");
    let text = store.to_text();
    let body = text.splitn(3, '\n').nth(2).unwrap().replacen("\nT5 |", "\nT4 | E7 | w7 | - | dim 56 | -\nT5 |", 1);
    let store = TableStore::parse(&seal(&body)).unwrap();
    let r = cross_verify_types(&store, 100, &[ty("E7")]);
    let checks: Vec<Check> = r.mismatches.iter().map(|m| m.check).collect();
    assert_eq!(checks, vec![Check::FormType], "{}", r.to_text());

    let store = tampered("T2 | E8 | w8 | - | zero 8 | -", "T2 | E8 | w8 | - | zero 7 | -");
    let r = cross_verify_types(&store, 300, &[ty("E8")]);
    assert_eq!(r.mismatches.len(), 1);
    assert_eq!(r.mismatches[0].check, Check::ZeroMultiplicity);
    assert_eq!(r.mismatches[0].computed, "8");

    // dropping a row leaves a multiplicity-free weight unlisted
    let store = tampered("T2 | G2 | w2 | p!=3 | zero 2 | -\n", "");
    let r = cross_verify_types(&store, 100, &[ty("G2")]);
    let checks: Vec<Check> = r.mismatches.iter().map(|m| m.check).collect();
    assert!(checks.contains(&Check::Coverage), "{}", r.to_text());
}

#[test]
fn characteristic_two_dimensions() {
    let s = TableStore::builtin();
    let c = |t: &str, l: &[i64]| char2_row_dimension(s, ty(t), &w(l)).unwrap();
    assert_eq!(c("C3", &[0, 0, 1]), CharZeroDimension::Isogeny(BigInt::from(8)));
    assert_eq!(c("C2", &[0, 1]), CharZeroDimension::Isogeny(BigInt::from(4)));
    assert_eq!(c("G2", &[1, 0]), CharZeroDimension::Drops(DropReason::OddDimension));
    assert_eq!(c("F4", &[1, 0, 0, 0]), CharZeroDimension::Drops(DropReason::Table));
    assert_eq!(c("A3", &[1, 0, 1]), CharZeroDimension::Drops(DropReason::Table));
    assert_eq!(c("E7", &[0, 0, 0, 0, 0, 0, 1]), CharZeroDimension::Weyl(BigInt::from(56)));
    assert_eq!(c("F4", &[0, 0, 0, 1]), CharZeroDimension::Weyl(BigInt::from(26)));
    assert_eq!(c("D6", &[1, 0, 0, 0, 0, 0]), CharZeroDimension::Weyl(BigInt::from(12)));
}

#[test]
fn table2_and_mult2_pair_up() {
    let primes = [0, 2, 3, 5, 7, 11, 13];
    let (n, printed) = table2_pairing(TableStore::builtin(), 10, &primes, false);
    assert!(n > 20000);
    assert!(printed.is_empty(), "{printed:?}");
    // with the corrected B_n 2ω1 value, B3 2ω1 at p = 7 has a zero weight of
    // multiplicity 2 that the multiplicity-2 table does not list
    let (_, fixed) = table2_pairing(TableStore::builtin(), 10, &primes, true);
    assert_eq!(fixed.len(), 1);
    assert_eq!((fixed[0].ty, fixed[0].lambda.clone(), fixed[0].p), (ty("B3"), w(&[2, 0, 0]), 7));
}

#[test]
fn default_types_cover_every_family() {
    let t = default_types();
    assert_eq!(t.len(), 8 + 7 + 7 + 5 + 3 + 2);
    assert!(t.contains(&ty("A1")) && t.contains(&ty("E8")) && t.contains(&ty("G2")));
}
