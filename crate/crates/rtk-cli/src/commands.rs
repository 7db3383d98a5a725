//! One function per subcommand, each producing a [`Report`].

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context as _, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use rtk_core::exceptional::{audit, EmbeddingStore};
use rtk_core::forms::{decide_overgroup_in, is_self_dual, module_dimension, steinberg_indicator, DimensionSource};
use rtk_core::omega::{element_regularity, Classifier, Eigenvalue, TorusElement, TwistVerdict};
use rtk_core::tables::TableStore;
use rtk_core::verify::{cross_verify, table2_pairing};
use rtk_core::weights::{dominant_weights_up_to_dim, weight_multiset, MultisetCache};
use rtk_core::{Characteristic, RootDatum, SimpleType, Weight};

use crate::report::{big, Input, MultisetEntry, Provenance, Report};

/// Data files in use.
pub struct Ctx {
    pub tables: &'static TableStore,
    pub tables_label: String,
    pub embeddings: Option<PathBuf>,
}

impl Ctx {
    pub fn load(tables: Option<PathBuf>, embeddings: Option<PathBuf>) -> Result<Ctx> {
        let (store, label) = match tables {
            None => (TableStore::builtin(), "builtin".to_string()),
            Some(p) => {
                let s = TableStore::load(&p).with_context(|| format!("loading tables from {}", p.display()))?;
                (&*Box::leak(Box::new(s)), p.display().to_string())
            }
        };
        Ok(Ctx { tables: store, tables_label: label, embeddings })
    }

    fn provenance(&self) -> Provenance {
        Provenance {
            version: env!("CARGO_PKG_VERSION").to_string(),
            tables: self.tables_label.clone(),
            tables_checksum: self.tables.checksum().to_string(),
            ..Default::default()
        }
    }

    fn classifier(&self) -> Classifier<'static> {
        Classifier::new(self.tables)
    }
}

/// A finished command: the report and whether it found a mismatch.
pub struct Outcome {
    pub report: Report,
    pub mismatch: bool,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome { report, mismatch: false }
    }
}

/// Query subject shared by the per-weight commands.
#[derive(Debug, Clone)]
pub struct Subject {
    pub ty: SimpleType,
    pub lambda: Weight,
    pub p: Characteristic,
}

impl Subject {
    pub fn parse(ty: &str, lambda: Option<&str>, weight_name: Option<&str>, p: u64) -> Result<Subject> {
        let ty: SimpleType = ty.parse().map_err(|e| anyhow!("--type: {e}"))?;
        let lambda = match (lambda, weight_name) {
            (Some(l), None) => l.parse::<Weight>().map_err(|e| anyhow!("--lambda: {e}"))?,
            (None, Some(n)) => parse_weight_name(n, ty.rank())?,
            (None, None) => bail!("one of --lambda or --weight-name is required"),
            (Some(_), Some(_)) => bail!("--lambda and --weight-name are exclusive"),
        };
        if lambda.rank() != ty.rank() {
            bail!("--lambda has {} coordinates but {ty} has rank {}", lambda.rank(), ty.rank());
        }
        if lambda.coords().iter().any(|&c| c < 0) {
            bail!("--lambda must be dominant (no negative coordinates)");
        }
        let p = Characteristic::new(p).map_err(|e| anyhow!("--p: {e}"))?;
        Ok(Subject { ty, lambda, p })
    }

    fn input(&self, command: &str) -> Input {
        Input {
            command: command.into(),
            ty: Some(self.ty.to_string()),
            lambda: Some(self.lambda.coords().to_vec()),
            p: Some(self.p.p()),
            flags: BTreeMap::new(),
        }
    }
}

/// `w3`, `2w1+w4` or `0`: sums of fundamental weights.
pub fn parse_weight_name(s: &str, rank: usize) -> Result<Weight> {
    let mut c = vec![0i64; rank];
    if s.trim() == "0" {
        return Ok(Weight::new(c));
    }
    for term in s.split('+') {
        let t = term.trim();
        let (k, i) = t.split_once('w').ok_or_else(|| anyhow!("--weight-name: `{t}` is not of the form kwi"))?;
        let k: i64 = if k.trim().is_empty() { 1 } else { k.trim().trim_end_matches('*').parse().map_err(|_| anyhow!("--weight-name: bad coefficient in `{t}`"))? };
        let i: usize = i.trim().parse().map_err(|_| anyhow!("--weight-name: bad index in `{t}`"))?;
        if i == 0 || i > rank {
            bail!("--weight-name: index {i} out of range 1..={rank}");
        }
        c[i - 1] += k;
    }
    Ok(Weight::new(c))
}

fn yes_no_err<T>(r: &mut Report, key: &str, v: std::result::Result<T, impl std::fmt::Display>, f: impl FnOnce(T) -> Value) {
    match v {
        Ok(x) => r.set(key, f(x)),
        Err(e) => {
            r.set(key, Value::Null);
            r.note(format!("{key}: {e}"));
        }
    }
}

pub fn weights(ctx: &Ctx, s: &Subject) -> Result<Outcome> {
    let d = RootDatum::new(s.ty);
    let ms = weight_multiset(&d, &s.lambda)?;
    let mut r = Report::new(s.input("weights"), ctx.provenance());
    r.method("Freudenthal");
    r.set("dim", big(ms.total_dim()));
    r.set("dominant_orbits", ms.orbit_count());
    r.set("zero_multiplicity", big(&ms.zero_multiplicity()));
    r.set("max_multiplicity", big(&ms.max_multiplicity()));
    r.set("all_multiplicities_one", ms.all_multiplicities_one());
    r.set("nonzero_multiplicities_one", ms.nonzero_multiplicities_one());
    if !s.p.is_zero() {
        r.note(format!("multiplicities are those of the Weyl module; the irreducible module in characteristic {} may be smaller", s.p));
        let c = ctx.classifier();
        yes_no_err(&mut r, "table_zero_multiplicity", c.omega2_membership(s.ty, &s.lambda, s.p), |v| {
            v.zero_mult.as_ref().map(big).unwrap_or(Value::Null)
        });
    }
    r.multiset = Some(
        ms.graded()
            .map(|(w, m)| MultisetEntry {
                weight: w.coords().to_vec(),
                multiplicity: big(m),
                orbit_size: big(ms.orbit_size(w).expect("orbit of an entry")),
            })
            .collect(),
    );
    Ok(Outcome::ok(r))
}

fn twist_value(v: &TwistVerdict) -> Value {
    match v {
        TwistVerdict::AllMultOne => json!("all multiplicities 1"),
        TwistVerdict::ZeroMultOnlyException { k, mu } => json!(format!("zero weight exception: p^{k} {mu}")),
        TwistVerdict::Neither => json!("neither"),
    }
}

pub fn classify(ctx: &Ctx, s: &Subject) -> Result<Outcome> {
    let c = ctx.classifier();
    let d = RootDatum::new(s.ty);
    let mut r = Report::new(s.input("classify"), ctx.provenance());
    r.method("tables");
    match c.omega2_membership(s.ty, &s.lambda, s.p) {
        Ok(v) => {
            r.set("omega1", v.in_omega1);
            r.set("omega2", v.in_omega2);
            r.set("zero_multiplicity", v.zero_mult.as_ref().map(big).unwrap_or(Value::Null));
            if let Some(z) = &v.printed_zero_mult {
                r.set("printed_zero_multiplicity", big(z));
            }
            if let Some(id) = v.table_row {
                r.row(id);
            }
        }
        Err(e) => {
            r.set("omega1", Value::Null);
            r.set("omega2", Value::Null);
            r.note(format!("omega: {e}"));
        }
    }
    yes_no_err(&mut r, "twist", c.twisted_weight_verdict(s.ty, &s.lambda, s.p), |v| twist_value(&v));
    if s.lambda.is_zero() {
        r.note("the zero weight gives the trivial module");
        return Ok(Outcome::ok(r));
    }
    match decide_overgroup_in(&d, &s.lambda, s.p, ctx.tables) {
        Ok((f, g)) => {
            r.set("form", format!("{:?}", f.form));
            r.set("overgroup", g.to_string());
        }
        Err(e) => {
            r.set("form", Value::Null);
            r.set("overgroup", Value::Null);
            r.note(format!("form: {e}"));
        }
    }
    let mut mismatch = false;
    match c.regular_torus_verdict(s.ty, &s.lambda, s.p) {
        Ok(v) => {
            r.set("regular_torus", v.contains_regular_torus);
            r.set("regular_torus_reason", format!("{:?}", v.reason));
            if s.p.is_zero() {
                r.method("Freudenthal");
            }
            if let Ok(row) = c.regular_torus_table_row(s.ty, &s.lambda, s.p) {
                if let Some(id) = row {
                    r.row(id);
                }
                if s.lambda.is_p_restricted(s.p.p()) {
                    mismatch = row.is_some() != v.contains_regular_torus;
                    r.set("regular_torus_table_agrees", !mismatch);
                }
            }
        }
        Err(e) => {
            r.set("regular_torus", Value::Null);
            r.note(format!("regular_torus: {e}"));
        }
    }
    Ok(Outcome { report: r, mismatch })
}

pub fn forms(ctx: &Ctx, s: &Subject) -> Result<Outcome> {
    let d = RootDatum::new(s.ty);
    let mut r = Report::new(s.input("forms"), ctx.provenance());
    r.set("self_dual", is_self_dual(&d, &s.lambda)?);
    if s.p.p() != 2 {
        yes_no_err(&mut r, "indicator", steinberg_indicator(&d, &s.lambda), |i| json!(format!("{i:?}")));
    }
    match module_dimension(&d, &s.lambda, s.p, ctx.tables) {
        Ok((n, src)) => {
            r.set("dim", big(&n));
            let label = match &src {
                DimensionSource::Table(id) => {
                    r.row(id);
                    format!("table {id}")
                }
                other => format!("{other:?}"),
            };
            r.set("dim_source", label);
        }
        Err(e) => {
            r.set("dim", Value::Null);
            r.note(format!("dim: {e}"));
        }
    }
    let (v, g) = decide_overgroup_in(&d, &s.lambda, s.p, ctx.tables)?;
    r.set("form", format!("{:?}", v.form));
    if let Some(q) = v.p2_quadratic {
        r.set("quadratic_form", q);
    }
    r.set("overgroup", g.to_string());
    Ok(Outcome::ok(r))
}

pub fn regular_torus(ctx: &Ctx, s: &Subject) -> Result<Outcome> {
    let c = ctx.classifier();
    let mut r = Report::new(s.input("regular-torus"), ctx.provenance());
    let v = c.regular_torus_verdict(s.ty, &s.lambda, s.p)?;
    r.set("regular_torus", v.contains_regular_torus);
    r.set("reason", format!("{:?}", v.reason));
    r.set("overgroup", v.overgroup.to_string());
    r.method(if s.p.is_zero() { "Freudenthal" } else { "tables" });
    let mut mismatch = false;
    if s.lambda.is_p_restricted(s.p.p()) {
        let row = c.regular_torus_table_row(s.ty, &s.lambda, s.p)?;
        r.set("table_row", row.map(|id| id.to_string()));
        if let Some(id) = row {
            r.row(id);
        }
        mismatch = row.is_some() != v.contains_regular_torus;
        r.set("table_agrees", !mismatch);
    } else {
        r.note("Frobenius twist reduced to its nonzero digit; the table check applies to restricted weights");
    }
    Ok(Outcome { report: r, mismatch })
}

pub fn element(ctx: &Ctx, ty: &str, entries: &str, central: Option<&str>) -> Result<Outcome> {
    let ty: SimpleType = ty.parse().map_err(|e| anyhow!("--type: {e}"))?;
    let parse = |x: &str| x.parse::<Eigenvalue>().map_err(|e| anyhow!("eigenvalue `{x}`: {e}"));
    let es: Vec<Eigenvalue> = entries.split(',').map(|x| parse(x.trim())).collect::<Result<_>>()?;
    let mut t = TorusElement::new(es);
    t.central = central.map(parse).transpose()?;
    let (in_h, in_gl) = element_regularity(ty, &t)?;
    let input = Input {
        command: "element".into(),
        ty: Some(ty.to_string()),
        lambda: None,
        p: None,
        flags: BTreeMap::from([("entries".to_string(), json!(entries))]),
    };
    let mut r = Report::new(input, ctx.provenance());
    r.set("regular_in_group", in_h);
    r.set("regular_in_gl", in_gl);
    let ev: Vec<String> = t.eigenvalues(ty)?.iter().map(|e| e.to_string()).collect();
    r.set("eigenvalues", ev);
    Ok(Outcome::ok(r))
}

pub fn exceptional(ctx: &Ctx, group: Option<&str>) -> Result<Outcome> {
    let store: &EmbeddingStore = match &ctx.embeddings {
        None => EmbeddingStore::builtin(),
        Some(p) => Box::leak(Box::new(EmbeddingStore::load(p).with_context(|| format!("loading {}", p.display()))?)),
    };
    let filter: Option<SimpleType> = group.map(|g| g.parse().map_err(|e| anyhow!("--group: {e}"))).transpose()?;
    let mut flags = BTreeMap::new();
    if let Some(g) = group {
        flags.insert("group".to_string(), json!(g));
    }
    let input = Input { command: "exceptional".into(), ty: group.map(String::from), lambda: None, p: None, flags };
    let mut prov = ctx.provenance();
    prov.embeddings = Some(ctx.embeddings.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "builtin".into()));
    prov.embeddings_checksum = Some(store.checksum().to_string());
    let mut r = Report::new(input, prov);
    r.method("Freudenthal");
    let lines = audit(store, ctx.tables)?;
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for (l, e) in lines.iter().zip(store.data()) {
        if filter.is_some_and(|f| f != e.h) {
            continue;
        }
        rows.push(json!({
            "datum": l.datum,
            "rank": l.rank,
            "zero_weight_sum": l.value().map(big),
            "source": if l.computed.is_some() { "computed" } else { "stated" },
            "contains_regular_torus": l.verdict(),
            "in_table": l.in_table,
            "consistent": l.consistent(),
        }));
        if !l.consistent() {
            bad.push(l.datum.clone());
        }
    }
    let n = rows.len();
    r.set("data", rows);
    r.set("checked", n);
    r.set("inconsistent", bad.clone());
    let mismatch = !bad.is_empty();
    Ok(Outcome { report: r, mismatch })
}

pub fn verify_tables(ctx: &Ctx, max_dim: u64, pairing_rank: usize) -> Result<Outcome> {
    let input = Input {
        command: "verify-tables".into(),
        ty: None,
        lambda: None,
        p: None,
        flags: BTreeMap::from([("max_dim".to_string(), json!(max_dim)), ("pairing_rank".to_string(), json!(pairing_rank))]),
    };
    let mut r = Report::new(input, ctx.provenance());
    r.method("Freudenthal");
    r.method("Weyl dimension formula");
    let rep = cross_verify(ctx.tables, max_dim);
    let primes = [0, 2, 3, 5, 7, 11, 13];
    let (pairs, printed) = if pairing_rank > 0 { table2_pairing(ctx.tables, pairing_rank, &primes, false) } else { (0, vec![]) };
    let corrected = if pairing_rank > 0 { table2_pairing(ctx.tables, pairing_rank, &primes, true).1 } else { vec![] };
    let strs = |v: &[rtk_core::verify::Finding]| v.iter().map(|f| f.to_string()).collect::<Vec<_>>();
    r.set("weights", rep.weights_checked);
    r.set("rows", rep.rows_checked.len());
    r.set("checks", rep.checks);
    r.set("mismatch_list", strs(&rep.mismatches));
    r.set("errata", strs(&rep.errata));
    r.set("excluded", rep.excluded.iter().map(|i| i.to_string()).collect::<Vec<_>>());
    r.set("dimension_drops", rep.dimension_drops.iter().map(|i| i.to_string()).collect::<Vec<_>>());
    r.set("pairing_checked", pairs);
    r.set("pairing_mismatches", strs(&printed));
    r.set("pairing_after_corrections", strs(&corrected));
    let total = rep.mismatches.len() + printed.len();
    r.set("mismatches", total);
    r.set("summary", format!("{total} mismatches"));
    Ok(Outcome { report: r, mismatch: total > 0 })
}

pub fn sweep(ctx: &Ctx, ty: &str, max_dim: u64, p: u64, workers: usize) -> Result<Outcome> {
    let ty: SimpleType = ty.parse().map_err(|e| anyhow!("--type: {e}"))?;
    let p = Characteristic::new(p).map_err(|e| anyhow!("--p: {e}"))?;
    let d = RootDatum::new(ty);
    let weights = dominant_weights_up_to_dim(&d, max_dim);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    let cache = Arc::new(MultisetCache::new());
    let c = ctx.classifier();
    let rows: Vec<(Value, Option<String>)> = pool.install(|| {
        weights.par_iter().filter(|w| w.is_p_restricted(p.p())).map(|w| sweep_one(&c, &d, w, p, &cache)).collect()
    });
    let input = Input {
        command: "sweep".into(),
        ty: Some(ty.to_string()),
        lambda: None,
        p: Some(p.p()),
        flags: BTreeMap::from([("max_dim".to_string(), json!(max_dim)), ("workers".to_string(), json!(workers))]),
    };
    let mut r = Report::new(input, ctx.provenance());
    r.method("tables");
    if p.is_zero() {
        r.method("Freudenthal");
    }
    let mismatches: Vec<String> = rows.iter().filter_map(|(_, m)| m.clone()).collect();
    let entries: Vec<Value> = rows.into_iter().map(|(v, _)| v).collect();
    r.set("count", entries.len());
    r.set("weights", entries);
    r.set("mismatch_list", mismatches.clone());
    r.set("summary", format!("{} mismatches", mismatches.len()));
    Ok(Outcome { report: r, mismatch: !mismatches.is_empty() })
}

fn sweep_one(c: &Classifier<'static>, d: &RootDatum, w: &Weight, p: Characteristic, cache: &MultisetCache) -> (Value, Option<String>) {
    let ty = d.simple_type();
    let mut mismatch = None;
    let om = c.omega2_membership(ty, w, p).ok();
    let mut entry = json!({
        "lambda": w.coords(),
        "omega1": om.as_ref().map(|v| v.in_omega1),
        "omega2": om.as_ref().map(|v| v.in_omega2),
    });
    if p.is_zero() {
        let ms = cache.get(d, w).expect("dominant");
        entry["dim"] = big(ms.total_dim());
        entry["zero_multiplicity"] = big(&ms.zero_multiplicity());
        if let Some(v) = &om {
            if v.in_omega1 != ms.all_multiplicities_one() || v.in_omega2 != ms.nonzero_multiplicities_one() {
                mismatch = Some(format!("{ty} {w}: table Ω1={} Ω2={}, computed {} {}", v.in_omega1, v.in_omega2, ms.all_multiplicities_one(), ms.nonzero_multiplicities_one()));
            }
        }
    } else {
        entry["zero_multiplicity"] = om.as_ref().and_then(|v| v.zero_mult.as_ref()).map(big).unwrap_or(Value::Null);
    }
    if !w.is_zero() {
        match c.regular_torus_verdict(ty, w, p) {
            Ok(v) => {
                entry["overgroup"] = json!(v.overgroup.to_string());
                entry["regular_torus"] = json!(v.contains_regular_torus);
                if let Ok(row) = c.regular_torus_table_row(ty, w, p) {
                    if row.is_some() != v.contains_regular_torus && mismatch.is_none() {
                        mismatch = Some(format!("{ty} {w}: regular torus {:?} but table row {:?}", v.reason, row.map(|r| r.to_string())));
                    }
                }
            }
            Err(e) => entry["regular_torus"] = json!(format!("n/a: {e}")),
        }
    }
    (entry, mismatch)
}

