mod common;

use common::{ty, w};
use rtk_core::tables::{seal, PVal, PayloadValue, TableError, TableId, TableStore};
use rtk_core::Characteristic;

fn store() -> &'static TableStore {
    TableStore::builtin()
}

fn ch(p: u64) -> Characteristic {
    Characteristic::new(p).unwrap()
}

#[test]
fn shipped_file_round_trips() {
    let text = TableStore::builtin_text();
    assert_eq!(store().to_text(), text);
    let again = TableStore::parse(&store().to_text()).unwrap();
    assert_eq!(again.to_text(), text);
}

#[test]
fn row_counts() {
    let expect = [
        (TableId::T1, 15),
        (TableId::T2, 17),
        (TableId::T3, 9),
        (TableId::T4, 12),
        (TableId::T5, 10),
        (TableId::T6, 5),
        (TableId::T7, 2),
        (TableId::T8, 12),
        (TableId::TM2, 12),
        (TableId::TEXC, 18),
        (TableId::TPAIRS, 10),
    ];
    assert_eq!(store().table_ids().len(), 11);
    for (t, n) in expect {
        assert_eq!(store().rows(t).count(), n, "{t}");
    }
}

#[test]
fn load_errors() {
    assert!(matches!(TableStore::parse(""), Err(TableError::Parse { line: 1, .. })));
    let text = TableStore::builtin_text();
    let tampered = text.replacen("dim 56", "dim 57", 1);
    assert!(matches!(TableStore::parse(&tampered), Err(TableError::SchemaMismatch(_))));
    let other = text.replacen("rtk-tables 1", "rtk-tables 2", 1);
    assert!(matches!(TableStore::parse(&other), Err(TableError::SchemaMismatch(_))));
    let bad = seal("T3 | C3 | w3 | - | dim 14\n");
    assert!(matches!(TableStore::parse(&bad), Err(TableError::Parse { line: 3, .. })));
    let untagged = seal("T1 | F4 | w4 | p=3 | - | -\n");
    assert!(matches!(TableStore::parse(&untagged), Err(TableError::Parse { .. })));
    let orphan = seal("T1 | A2 | w1 | q>2 | - | -\n");
    assert!(TableStore::parse(&orphan).is_err());
}

#[test]
fn lookups() {
    let s = store();
    let m = s.find(TableId::T3, ty("C3"), &w(&[0, 0, 1]), ch(0)).unwrap().unwrap();
    assert_eq!(m.payload(PVal::Infinite).unwrap(), PayloadValue::Dim(14.into()));
    assert_eq!(m.id.to_string(), "T3#4");
    // B_n spin modules by n mod 4
    for n in 3..=12usize {
        let t = ty(&format!("B{n}"));
        let mut lam = vec![0; n];
        lam[n - 1] = 1;
        let sym = s.find(TableId::T3, t, &w(&lam), ch(0)).unwrap().is_some();
        let orth = s.find(TableId::T4, t, &w(&lam), ch(0)).unwrap().is_some();
        assert_eq!(sym, n % 4 == 1 || n % 4 == 2, "B{n}");
        assert_eq!(orth, !sym, "B{n}");
    }
    // The T1 p-parameterised family is invisible at p = 0 and visible at p = 5
    assert!(s.find(TableId::T1, ty("A3"), &w(&[0, 3, 1]), ch(0)).unwrap().is_none());
    assert!(s.find(TableId::T1, ty("A3"), &w(&[0, 3, 1]), ch(5)).unwrap().is_some());
    // C2 row outranks the generic C_n rows
    let m = s.find(TableId::T1, ty("C2"), &w(&[1, 0]), ch(0)).unwrap().unwrap();
    assert!(m.row.group.is_fixed());
    // B2 is read through C2 with the labels swapped
    let m = s.find(TableId::T5, ty("B2"), &w(&[1, 0]), ch(0)).unwrap().unwrap();
    assert!(m.via_c2);
    // table-wide p restrictions
    assert!(s.find(TableId::T4, ty("G2"), &w(&[0, 1]), ch(2)).unwrap().is_none());
    assert!(s.find(TableId::T8, ty("G2"), &w(&[0, 1]), ch(2)).unwrap().is_some());
    assert!(s.find(TableId::T8, ty("G2"), &w(&[0, 1]), ch(0)).unwrap().is_none());
}

#[test]
fn zero_payloads_follow_the_branches() {
    let s = store();
    let z = |t: &str, lam: &[i64], p: u64| match s.find(TableId::T2, ty(t), &w(lam), ch(p)).unwrap() {
        Some(m) => m.payload(rtk_core::tables::to_pval(ch(p))).unwrap(),
        None => PayloadValue::None,
    };
    assert_eq!(z("A4", &[1, 0, 0, 1], 0), PayloadValue::Zero(4.into()));
    assert_eq!(z("A4", &[1, 0, 0, 1], 5), PayloadValue::Zero(3.into()));
    assert_eq!(z("A2", &[1, 1], 3), PayloadValue::None);
    assert_eq!(z("D6", &[0, 1, 0, 0, 0, 0], 2), PayloadValue::Zero(4.into()));
    assert_eq!(z("D5", &[0, 1, 0, 0, 0], 2), PayloadValue::Zero(4.into()));
    assert_eq!(z("E6", &[0, 1, 0, 0, 0, 0], 3), PayloadValue::Zero(5.into()));
    assert_eq!(z("E6", &[0, 1, 0, 0, 0, 0], 0), PayloadValue::Zero(6.into()));
    assert_eq!(z("C4", &[0, 0, 0, 1], 7), PayloadValue::Zero(2.into()));
    assert_eq!(z("C4", &[0, 0, 0, 1], 3), PayloadValue::None);
}

#[test]
fn subgroup_rows() {
    let s = store();
    let names = |h: &str, p: u64| -> Vec<String> {
        s.subgroups(TableId::TPAIRS, ty(h), ch(p))
            .unwrap()
            .into_iter()
            .map(|(_, v)| v.iter().map(|t| t.to_string()).collect::<String>())
            .collect()
    };
    assert_eq!(names("A6", 3), vec!["G2", "B3"]);
    assert_eq!(names("A5", 2), vec!["G2", "C3"]);
    assert_eq!(names("D5", 2), vec!["B4"]);
    assert_eq!(names("A1", 0), vec!["A1"]);
    let exc: Vec<String> = s
        .subgroups(TableId::TEXC, ty("E8"), ch(0))
        .unwrap()
        .into_iter()
        .map(|(_, v)| v.iter().map(|t| t.to_string()).collect::<String>())
        .collect();
    assert_eq!(exc, vec!["A1", "A1A2", "G2F4"]);
}
