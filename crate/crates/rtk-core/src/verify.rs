//! Recomputation of table rows from weight multiplicities, the Weyl
//! dimension formula and the form-type criterion.
//!
//! The sweep walks every dominant weight of small dimension for a list of
//! types, looks the weight up in each table at p = 0 and checks what the
//! matched row claims. Rows that only make sense in positive characteristic
//! are listed as excluded rather than dropped.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::forms::{is_self_dual, steinberg_indicator, Indicator};
use crate::omega::Classifier;
use crate::roots::{Family, RootDatum, SimpleType, Weight};
use crate::tables::{PVal, PayloadValue, RowId, RowMatch, TableId, TableStore};
use crate::weights::{dominant_weights_up_to_dim, weight_multiset, weyl_dimension, Characteristic, WeightMultiset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Check {
    Dimension,
    FormType,
    ZeroMultiplicity,
    MultiplicityFree,
    /// A weight with all nonzero multiplicities 1 that no row of T1/T2 lists.
    Coverage,
    RegularTorus,
    /// T2 rows with zero multiplicity 2 against TM2.
    Pairing,
    Evaluation,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Check::Dimension => "dimension",
            Check::FormType => "form type",
            Check::ZeroMultiplicity => "zero multiplicity",
            Check::MultiplicityFree => "multiplicity free",
            Check::Coverage => "coverage",
            Check::RegularTorus => "regular torus",
            Check::Pairing => "T2/TM2 pairing",
            Check::Evaluation => "evaluation",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub row: Option<RowId>,
    pub ty: SimpleType,
    pub lambda: Weight,
    pub p: u64,
    pub check: Check,
    pub expected: String,
    pub computed: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.row {
            Some(r) => write!(f, "{r}: ")?,
            None => write!(f, "-: ")?,
        }
        write!(f, "{} {} p={} {}: table {}, computed {}", self.ty, self.lambda, self.p, self.check, self.expected, self.computed)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub max_dim: u64,
    pub weights_checked: usize,
    pub rows_checked: BTreeSet<RowId>,
    pub checks: usize,
    pub mismatches: Vec<Finding>,
    /// Printed values that disagree with the computation where the data
    /// file already carries a correction.
    pub errata: Vec<Finding>,
    /// Rows with no characteristic-0 instance, not recomputed.
    pub excluded: Vec<RowId>,
    /// Characteristic-2 rows whose dimension is below the Weyl dimension,
    /// so only their other claims are checked.
    pub dimension_drops: BTreeSet<RowId>,
}

impl VerifyReport {
    pub fn is_empty(&self) -> bool {
        self.checks == 0 && self.mismatches.is_empty() && self.errata.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "max dim {}: {} weights, {} rows, {} checks\n",
            self.max_dim,
            self.weights_checked,
            self.rows_checked.len(),
            self.checks
        );
        for m in &self.mismatches {
            s += &format!("mismatch {m}\n");
        }
        for m in &self.errata {
            s += &format!("erratum {m}\n");
        }
        if !self.excluded.is_empty() {
            let ids: Vec<String> = self.excluded.iter().map(|r| r.to_string()).collect();
            s += &format!("excluded (characteristic p only): {}\n", ids.join(" "));
        }
        if !self.dimension_drops.is_empty() {
            let ids: Vec<String> = self.dimension_drops.iter().map(|r| r.to_string()).collect();
            s += &format!("dimension not compared (smaller in characteristic 2): {}\n", ids.join(" "));
        }
        s += &format!("{} mismatches\n", self.mismatches.len());
        s
    }
}

/// A1–A8, B2–B8, C2–C8, D4–D8, E6–E8, F4, G2.
pub fn default_types() -> Vec<SimpleType> {
    let mut out = Vec::new();
    let ranges = [(Family::A, 1..=8), (Family::B, 2..=8), (Family::C, 2..=8), (Family::D, 4..=8), (Family::E, 6..=8)];
    for (f, r) in ranges {
        for n in r {
            out.push(SimpleType::new(f, n).expect("valid type"));
        }
    }
    out.push(SimpleType::new(Family::F, 4).expect("F4"));
    out.push(SimpleType::new(Family::G, 2).expect("G2"));
    out
}

/// Where the characteristic-0 value of a T7/T8 dimension comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharZeroDimension {
    Weyl(BigInt),
    /// `C_n ω_n` in characteristic 2 is the spin module of `B_n` pulled back
    /// along the special isogeny.
    Isogeny(BigInt),
    /// The module in characteristic 2 is smaller than the Weyl module.
    Drops(DropReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropReason {
    /// TM2 lists the same weight only at p = 2.
    Table,
    /// Odd Weyl dimension: a nontrivial irreducible self-dual module in
    /// characteristic 2 has even dimension.
    OddDimension,
}

impl CharZeroDimension {
    pub fn value(&self) -> Option<&BigInt> {
        match self {
            CharZeroDimension::Weyl(n) | CharZeroDimension::Isogeny(n) => Some(n),
            CharZeroDimension::Drops(_) => None,
        }
    }
}

/// Characteristic-0 reading of the dimension of a characteristic-2 row.
pub fn char2_row_dimension(store: &TableStore, ty: SimpleType, lambda: &Weight) -> crate::tables::Result<CharZeroDimension> {
    let d = RootDatum::new(ty);
    let zero = Characteristic::ZERO;
    let two = Characteristic::new(2).expect("2 is prime");
    if store.find(TableId::TM2, ty, lambda, two)?.is_some() && store.find(TableId::TM2, ty, lambda, zero)?.is_none() {
        return Ok(CharZeroDimension::Drops(DropReason::Table));
    }
    let n = ty.rank();
    if ty.family() == Family::C && n >= 2 && *lambda == Weight::fundamental(n, n) {
        let b = RootDatum::new(SimpleType::new(Family::B, n).expect("B_n"));
        let dim = weyl_dimension(&b, &Weight::fundamental(n, n)).expect("dominant");
        return Ok(CharZeroDimension::Isogeny(dim));
    }
    let dim = weyl_dimension(&d, lambda).expect("dominant");
    if dim.is_odd() && !lambda.is_zero() {
        return Ok(CharZeroDimension::Drops(DropReason::OddDimension));
    }
    Ok(CharZeroDimension::Weyl(dim))
}

struct Sweep<'a> {
    store: &'a TableStore,
    report: VerifyReport,
}

impl<'a> Sweep<'a> {
    fn finding(&mut self, m: Option<&RowMatch<'_>>, ty: SimpleType, lambda: &Weight, p: u64, check: Check, expected: String, computed: String) {
        self.report.mismatches.push(Finding { row: m.map(|m| m.id), ty, lambda: lambda.clone(), p, check, expected, computed });
    }

    fn check<T: PartialEq + fmt::Display>(&mut self, m: &RowMatch<'_>, ty: SimpleType, lambda: &Weight, p: u64, check: Check, expected: T, computed: T) {
        self.report.checks += 1;
        self.report.rows_checked.insert(m.id);
        if expected != computed {
            self.finding(Some(m), ty, lambda, p, check, expected.to_string(), computed.to_string());
        }
    }

    fn matches(&mut self, t: TableId, ty: SimpleType, lambda: &Weight, p: Characteristic) -> Vec<RowMatch<'a>> {
        let store: &'a TableStore = self.store;
        match store.find_all(t, ty, lambda, p) {
            Ok(v) => v,
            Err(e) => {
                self.finding(None, ty, lambda, p.p(), Check::Evaluation, t.to_string(), e.to_string());
                Vec::new()
            }
        }
    }

    fn dim_payload(&mut self, m: &RowMatch<'_>, p: PVal, ty: SimpleType, lambda: &Weight, dim: &BigInt, q: u64) {
        match m.payload(p) {
            Ok(PayloadValue::Dim(n)) => self.check(m, ty, lambda, q, Check::Dimension, n, dim.clone()),
            Ok(_) => {}
            Err(e) => self.finding(Some(m), ty, lambda, q, Check::Evaluation, "payload".into(), e.to_string()),
        }
    }

    fn weight(&mut self, d: &RootDatum, lambda: &Weight) {
        let ty = d.simple_type();
        let zero = Characteristic::ZERO;
        let ms: WeightMultiset = weight_multiset(d, lambda).expect("dominant");
        let dim = ms.total_dim().clone();
        let all_one = ms.all_multiplicities_one();
        let nonzero_one = ms.nonzero_multiplicities_one();
        let z = ms.zero_multiplicity();
        self.report.weights_checked += 1;

        let t1 = self.store.find_all(TableId::T1, ty, lambda, zero).unwrap_or_default();
        for m in &t1 {
            self.check(m, ty, lambda, 0, Check::MultiplicityFree, true, all_one);
        }
        let t2 = self.store.find_all(TableId::T2, ty, lambda, zero).unwrap_or_default();
        if t1.is_empty() {
            if let Some(m) = t2.first() {
                self.check(m, ty, lambda, 0, Check::MultiplicityFree, true, nonzero_one && !all_one);
                match (m.corrected_payload(PVal::Infinite), m.payload(PVal::Infinite)) {
                    (Ok(PayloadValue::Zero(fixed)), Ok(PayloadValue::Zero(printed))) => {
                        self.check(m, ty, lambda, 0, Check::ZeroMultiplicity, fixed, z.clone());
                        if printed != z {
                            self.report.errata.push(Finding {
                                row: Some(m.id),
                                ty,
                                lambda: lambda.clone(),
                                p: 0,
                                check: Check::ZeroMultiplicity,
                                expected: printed.to_string(),
                                computed: z.to_string(),
                            });
                        }
                    }
                    _ => self.finding(Some(m), ty, lambda, 0, Check::Evaluation, "zero payload".into(), "none".into()),
                }
            }
        }
        if !lambda.is_zero() {
            self.report.checks += 1;
            let listed = !t1.is_empty() || !t2.is_empty();
            if nonzero_one != listed {
                self.finding(None, ty, lambda, 0, Check::Coverage, format!("listed {listed}"), format!("nonzero multiplicities one {nonzero_one}"));
            }
        }

        if lambda.is_zero() {
            return;
        }
        let self_dual = is_self_dual(d, lambda).expect("dominant");
        let form = if self_dual { steinberg_indicator(d, lambda).ok() } else { None };
        let form_name = |f: Option<Indicator>| match f {
            Some(Indicator::Symplectic) => "symplectic".to_string(),
            Some(Indicator::Orthogonal) => "orthogonal".to_string(),
            None => "not self-dual".to_string(),
        };
        let parity = if dim.is_odd() { "odd" } else { "even" };
        for (t, want, want_parity) in [
            (TableId::T3, Some(Indicator::Symplectic), None),
            (TableId::T4, Some(Indicator::Orthogonal), Some("even")),
            (TableId::T5, Some(Indicator::Orthogonal), Some("odd")),
            (TableId::T6, None, None),
        ] {
            for m in self.matches(t, ty, lambda, zero) {
                self.check(&m, ty, lambda, 0, Check::FormType, form_name(want), form_name(form));
                if let Some(par) = want_parity {
                    self.check(&m, ty, lambda, 0, Check::Dimension, par, parity);
                }
                self.dim_payload(&m, PVal::Infinite, ty, lambda, &dim, 0);
            }
        }
        for m in self.matches(TableId::TM2, ty, lambda, zero) {
            self.check(&m, ty, lambda, 0, Check::ZeroMultiplicity, BigInt::from(2), z.clone());
            self.check(&m, ty, lambda, 0, Check::MultiplicityFree, true, nonzero_one);
            self.dim_payload(&m, PVal::Infinite, ty, lambda, &dim, 0);
        }
        if ty.family() != Family::B && lambda.is_p_restricted(2) {
            let two = Characteristic::new(2).expect("2 is prime");
            for t in [TableId::T7, TableId::T8] {
                for m in self.matches(t, ty, lambda, two) {
                    let Ok(PayloadValue::Dim(n)) = m.payload(PVal::Prime(2)) else { continue };
                    match char2_row_dimension(self.store, ty, lambda) {
                        Ok(c) => {
                            match c.value() {
                                Some(v) => self.check(&m, ty, lambda, 2, Check::Dimension, n, v.clone()),
                                None => {
                                    self.report.dimension_drops.insert(m.id);
                                }
                            }
                        }
                        Err(e) => self.finding(Some(&m), ty, lambda, 2, Check::Evaluation, "dimension".into(), e.to_string()),
                    }
                }
            }
        }

        let c = Classifier::new(self.store);
        let row = c.regular_torus_table_row(ty, lambda, zero);
        let verdict = c.regular_torus_verdict(ty, lambda, zero);
        self.report.checks += 1;
        match (row, verdict) {
            (Ok(row), Ok(v)) => {
                if row.is_some() != v.contains_regular_torus {
                    self.report.mismatches.push(Finding {
                        row,
                        ty,
                        lambda: lambda.clone(),
                        p: 0,
                        check: Check::RegularTorus,
                        expected: format!("listed {}", row.is_some()),
                        computed: format!("{:?}", v.reason),
                    });
                } else if let Some(r) = row {
                    self.report.rows_checked.insert(r);
                }
            }
            (Err(e), _) => self.finding(None, ty, lambda, 0, Check::Evaluation, "table row".into(), e.to_string()),
            (_, Err(e)) => self.finding(None, ty, lambda, 0, Check::Evaluation, "verdict".into(), e.to_string()),
        }
    }
}

/// [`cross_verify_types`] over [`default_types`].
pub fn cross_verify(store: &TableStore, max_dim: u64) -> VerifyReport {
    cross_verify_types(store, max_dim, &default_types())
}

/// Checks every row instance reached by a dominant weight of Weyl dimension
/// at most `max_dim` for one of `types`.
pub fn cross_verify_types(store: &TableStore, max_dim: u64, types: &[SimpleType]) -> VerifyReport {
    let mut sweep = Sweep { store, report: VerifyReport { max_dim, ..Default::default() } };
    for &ty in types {
        let d = RootDatum::new(ty);
        for lambda in dominant_weights_up_to_dim(&d, max_dim) {
            sweep.weight(&d, &lambda);
        }
    }
    let mut report = sweep.report;
    if report.weights_checked > 0 {
        report.excluded = store
            .all_rows()
            .filter(|(id, r)| r.charp_only && !r.weights().is_empty() && !matches!(id.table, TableId::T7 | TableId::T8))
            .map(|(id, _)| id)
            .collect();
    }
    report.mismatches.sort_by(|a, b| (a.row, a.ty, &a.lambda, a.check).cmp(&(b.row, b.ty, &b.lambda, b.check)));
    report
}

/// Every weight of T2 outside T1 with zero multiplicity 2 is a TM2 weight
/// and the other way round, for all types of rank at most `max_rank` and the
/// given characteristics. Candidates are the weights with at most two
/// nonzero coordinates, each at most 2. With `corrected` the zero
/// multiplicities carry the data file's corrections, otherwise they are read
/// as printed.
pub fn table2_pairing(store: &TableStore, max_rank: usize, primes: &[u64], corrected: bool) -> (usize, Vec<Finding>) {
    let mut checked = 0;
    let mut out = Vec::new();
    let mut types = Vec::new();
    for n in 1..=max_rank {
        for f in [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G] {
            if let Ok(t) = SimpleType::new(f, n) {
                types.push(t);
            }
        }
    }
    for &q in primes {
        let Ok(p) = Characteristic::new(q) else { continue };
        for &ty in &types {
            if ty.family() == Family::B && q == 2 {
                continue;
            }
            for lambda in small_weights(ty.rank()) {
                if q > 0 && !lambda.is_p_restricted(q) {
                    continue;
                }
                checked += 1;
                let in_t1 = store.find(TableId::T1, ty, &lambda, p).ok().flatten().is_some();
                let t2 = if in_t1 { None } else { store.find(TableId::T2, ty, &lambda, p).ok().flatten() };
                let two = t2.as_ref().is_some_and(|m| {
                    let pv = crate::tables::to_pval(p);
                    let v = if corrected { m.corrected_payload(pv) } else { m.payload(pv) };
                    matches!(v, Ok(PayloadValue::Zero(z)) if z == BigInt::from(2))
                });
                let tm2 = store.find(TableId::TM2, ty, &lambda, p).ok().flatten();
                if two != tm2.is_some() {
                    out.push(Finding {
                        row: tm2.as_ref().map(|m| m.id).or(t2.as_ref().map(|m| m.id)),
                        ty,
                        lambda: lambda.clone(),
                        p: q,
                        check: Check::Pairing,
                        expected: format!("TM2 {}", tm2.is_some()),
                        computed: format!("T2 zero 2 {two}"),
                    });
                }
            }
        }
    }
    (checked, out)
}

fn small_weights(n: usize) -> Vec<Weight> {
    let mut out = Vec::new();
    for i in 0..n {
        for a in 1..=2 {
            let mut c = vec![0; n];
            c[i] = a;
            out.push(Weight::new(c.clone()));
            for j in i + 1..n {
                for b in 1..=2 {
                    let mut c2 = c.clone();
                    c2[j] = b;
                    out.push(Weight::new(c2));
                }
            }
        }
    }
    out
}
