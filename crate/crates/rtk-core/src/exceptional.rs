//! Maximal subgroups of smaller rank in the exceptional groups: the zero
//! weight space of a maximal torus of M on the Lie algebra of H, and whether
//! that torus is regular in H.
//!
//! A torus of H is regular exactly when its centralizer in Lie(H) has
//! dimension rank(H), so the test is a count of zero weights over the
//! factors of `Lie(H)|M`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::roots::{RootDatum, SimpleType, Weight};
use crate::tables::expr::{parse_conditions, write_conditions, Binding, Cond, PVal};
use crate::tables::{parse_type_list, TableError, TableId, TableStore};
use crate::weights::{freudenthal_multiplicity, weyl_dimension, Characteristic, WeightError};

const SCHEMA: &str = "rtk-embeddings 1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExceptionalError {
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{datum}: factor {factor} has no stated zero weight multiplicity")]
    MissingStatedMultiplicity { datum: String, factor: String },
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Table(#[from] TableError),
}

pub type Result<T> = std::result::Result<T, ExceptionalError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorKind {
    Weyl,
    Irreducible { stated: Option<BigInt> },
}

/// A module for the product group: one highest weight block per factor of M.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub blocks: Vec<Weight>,
    pub kind: FactorKind,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> =
            self.blocks.iter().map(|b| b.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")).collect();
        let inner = blocks.join(";");
        match &self.kind {
            FactorKind::Weyl => write!(f, "W({inner})"),
            FactorKind::Irreducible { stated: Some(k) } => write!(f, "L({inner})={k}"),
            FactorKind::Irreducible { stated: None } => write!(f, "L({inner})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingDatum {
    pub h: SimpleType,
    pub m: Vec<SimpleType>,
    /// Distinguishes classes of subgroups of the same type, e.g. `E8(a1)`.
    pub class: Option<String>,
    pub p_condition: Vec<Cond>,
    pub factors: Vec<Factor>,
    /// Zero weight multiplicity of the whole module, as stated with the data.
    pub stated_total: Option<BigInt>,
    pub table2: bool,
    pub external: bool,
    /// Written as `T(m1;...;mk)`.
    t_notation: bool,
}

fn type_list_string(m: &[SimpleType]) -> String {
    m.iter().map(|t| t.to_string()).collect()
}

impl fmt::Display for EmbeddingDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊂ {}", type_list_string(&self.m), self.h)?;
        if let Some(c) = &self.class {
            write!(f, " [{c}]")?;
        }
        if !self.p_condition.is_empty() {
            write!(f, " ({})", write_conditions(&self.p_condition))?;
        }
        Ok(())
    }
}

impl EmbeddingDatum {
    /// A datum with Weyl-module factors only.
    pub fn weyl(h: SimpleType, m: Vec<SimpleType>, factors: Vec<Vec<Weight>>) -> Self {
        EmbeddingDatum {
            h,
            m,
            class: None,
            p_condition: Vec::new(),
            factors: factors.into_iter().map(|blocks| Factor { blocks, kind: FactorKind::Weyl }).collect(),
            stated_total: None,
            table2: false,
            external: false,
            t_notation: false,
        }
    }

    pub fn admits(&self, p: PVal) -> bool {
        let env = Binding::new();
        self.p_condition.iter().all(|c| c.eval(&env, p).unwrap_or(false))
    }

    /// Smallest prime satisfying the p-condition.
    pub fn representative_prime(&self) -> Option<u64> {
        (2u64..200).filter(|&q| (2..q).all(|d| q % d != 0)).find(|&q| self.admits(PVal::Prime(q as i64)))
    }

    fn factor_zero(&self, fac: &Factor) -> Result<Option<BigInt>> {
        match &fac.kind {
            FactorKind::Irreducible { stated } => Ok(stated.clone()),
            FactorKind::Weyl => {
                let mut z = BigInt::one();
                for (t, b) in self.m.iter().zip(&fac.blocks) {
                    let d = RootDatum::new(*t);
                    z *= freudenthal_multiplicity(&d, b, &Weight::zero(t.rank()))?;
                }
                Ok(Some(z))
            }
        }
    }

    /// Total dimension when every factor is a Weyl module.
    pub fn weyl_dimension_sum(&self) -> Result<Option<BigInt>> {
        let mut total = BigInt::zero();
        for fac in &self.factors {
            if fac.kind != FactorKind::Weyl {
                return Ok(None);
            }
            let mut dim = BigInt::one();
            for (t, b) in self.m.iter().zip(&fac.blocks) {
                dim *= weyl_dimension(&RootDatum::new(*t), b)?;
            }
            total += dim;
        }
        Ok(Some(total))
    }

    fn write_factors(&self) -> String {
        if self.t_notation {
            let ms: Vec<String> = self.factors.iter().map(|f| f.blocks[0].at(1).to_string()).collect();
            return format!("T({})", ms.join(";"));
        }
        self.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(" + ")
    }

    fn write_tags(&self) -> String {
        let mut tags = Vec::new();
        if let Some(k) = &self.stated_total {
            tags.push(format!("stated({k})"));
        }
        if self.table2 {
            tags.push("table2".to_string());
        }
        if self.external {
            tags.push("external".to_string());
        }
        if tags.is_empty() {
            "-".to_string()
        } else {
            tags.join(", ")
        }
    }

    pub fn to_line(&self) -> String {
        let cond = if self.p_condition.is_empty() { "-".to_string() } else { write_conditions(&self.p_condition) };
        format!(
            "{} | {} | {} | {} | {} | {}",
            self.h,
            type_list_string(&self.m),
            self.class.as_deref().unwrap_or("-"),
            cond,
            self.write_factors(),
            self.write_tags()
        )
    }
}

/// Σ over the factors of their zero weight multiplicities. A Weyl factor of
/// a product group contributes the product of the blockwise multiplicities.
pub fn zero_weight_sum(e: &EmbeddingDatum) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for fac in &e.factors {
        match e.factor_zero(fac)? {
            Some(z) => total += z,
            None => {
                return Err(ExceptionalError::MissingStatedMultiplicity { datum: e.to_string(), factor: fac.to_string() })
            }
        }
    }
    Ok(total)
}

pub fn regular_torus_in_exceptional(e: &EmbeddingDatum) -> Result<bool> {
    Ok(zero_weight_sum(e)? == BigInt::from(e.h.rank()))
}

fn parse_factor(s: &str, m: &[SimpleType]) -> std::result::Result<Factor, String> {
    let s = s.trim();
    let (kind, rest) = match s.as_bytes().first() {
        Some(b'W') => ('W', &s[1..]),
        Some(b'L') => ('L', &s[1..]),
        _ => return Err(format!("factor `{s}` must start with W or L")),
    };
    let close = rest.find(')').ok_or_else(|| format!("unclosed factor `{s}`"))?;
    let inner = rest.strip_prefix('(').ok_or_else(|| format!("factor `{s}` lacks `(`"))?;
    let inner = &inner[..close - 1];
    let tail = rest[close + 1..].trim();
    let mut blocks = Vec::new();
    for b in inner.split(';') {
        let w: Weight = b.trim().parse().map_err(|e: crate::roots::RootError| e.to_string())?;
        blocks.push(w);
    }
    if blocks.len() != m.len() {
        return Err(format!("factor `{s}` has {} blocks for {} simple factors", blocks.len(), m.len()));
    }
    for (b, t) in blocks.iter().zip(m) {
        if b.rank() != t.rank() || !b.is_dominant() {
            return Err(format!("block {b} is not a dominant weight of {t}"));
        }
    }
    let kind = match (kind, tail) {
        ('W', "") => FactorKind::Weyl,
        ('W', _) => return Err(format!("Weyl factor `{s}` cannot carry a value")),
        (_, "") => FactorKind::Irreducible { stated: None },
        (_, t) => {
            let v = t.strip_prefix('=').ok_or_else(|| format!("unexpected `{t}`"))?;
            FactorKind::Irreducible { stated: Some(v.trim().parse().map_err(|_| format!("bad multiplicity `{v}`"))?) }
        }
    };
    Ok(Factor { blocks, kind })
}

pub fn parse_datum(line: &str) -> std::result::Result<EmbeddingDatum, String> {
    let fields: Vec<&str> = line.split('|').map(|f| f.trim()).collect();
    if fields.len() != 6 {
        return Err(format!("expected 6 fields, found {}", fields.len()));
    }
    let h: SimpleType = fields[0].parse().map_err(|e: crate::roots::RootError| e.to_string())?;
    let env = Binding::new();
    let mut m = Vec::new();
    for pat in parse_type_list(fields[1])? {
        m.push(pat.instantiate(&env).ok_or_else(|| format!("`{}` is not a fixed type", fields[1]))?);
    }
    let class = (fields[2] != "-").then(|| fields[2].to_string());
    let p_condition = parse_conditions(fields[3]).map_err(|e| e.to_string())?;
    let (factors, t_notation) = if let Some(list) = fields[4].strip_prefix("T(") {
        let list = list.strip_suffix(')').ok_or("unclosed T(...)")?;
        if m.len() != 1 || m[0].rank() != 1 {
            return Err("T(...) is only for A1".into());
        }
        let mut fs = Vec::new();
        for x in list.split(';') {
            let k: i64 = x.trim().parse().map_err(|_| format!("bad entry `{x}`"))?;
            if k < 0 {
                return Err(format!("negative entry {k}"));
            }
            fs.push(Factor { blocks: vec![Weight::new(vec![k])], kind: FactorKind::Weyl });
        }
        (fs, true)
    } else {
        let fs: std::result::Result<Vec<Factor>, String> = fields[4].split(" + ").map(|f| parse_factor(f, &m)).collect();
        (fs?, false)
    };
    let mut d = EmbeddingDatum { h, m, class, p_condition, factors, stated_total: None, table2: false, external: false, t_notation };
    if fields[5] != "-" {
        for tag in fields[5].split(',').map(|t| t.trim()) {
            if let Some(v) = tag.strip_prefix("stated(").and_then(|v| v.strip_suffix(')')) {
                d.stated_total = Some(v.parse().map_err(|_| format!("bad stated value `{v}`"))?);
            } else if tag == "table2" {
                d.table2 = true;
            } else if tag == "external" {
                d.external = true;
            } else {
                return Err(format!("unknown tag `{tag}`"));
            }
        }
    }
    Ok(d)
}

#[derive(Debug, Clone)]
enum Line {
    Text(String),
    Datum(usize),
}

#[derive(Debug, Clone)]
pub struct EmbeddingStore {
    data: Vec<EmbeddingDatum>,
    lines: Vec<Line>,
    checksum: String,
}

pub fn seal(body: &str) -> String {
    format!("{SCHEMA}\nchecksum sha256 {}\n{body}", crate::tables::digest(body))
}

impl EmbeddingStore {
    pub fn parse(text: &str) -> Result<Self> {
        let mut it = text.splitn(3, '\n');
        let header = it.next().unwrap_or("");
        if header.trim().is_empty() {
            return Err(ExceptionalError::Parse { line: 1, msg: "empty file".into() });
        }
        if header != SCHEMA {
            return Err(ExceptionalError::SchemaMismatch(format!("expected `{SCHEMA}`, found `{header}`")));
        }
        let sum = it
            .next()
            .and_then(|l| l.strip_prefix("checksum sha256 "))
            .ok_or(ExceptionalError::Parse { line: 2, msg: "malformed checksum line".into() })?;
        let body = it.next().unwrap_or("");
        let actual = crate::tables::digest(body);
        if sum != actual {
            return Err(ExceptionalError::SchemaMismatch(format!("checksum {sum} does not match content ({actual})")));
        }
        let mut data = Vec::new();
        let mut lines = Vec::new();
        for (k, line) in body.split('\n').enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                lines.push(Line::Text(line.to_string()));
                continue;
            }
            let d = parse_datum(line).map_err(|msg| ExceptionalError::Parse { line: k + 3, msg })?;
            lines.push(Line::Datum(data.len()));
            data.push(d);
        }
        Ok(EmbeddingStore { data, lines, checksum: actual })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExceptionalError::Io { path: path.display().to_string(), msg: e.to_string() })?;
        Self::parse(&text)
    }

    pub fn builtin_text() -> &'static str {
        include_str!("../data/embeddings.txt")
    }

    pub fn builtin() -> &'static EmbeddingStore {
        static STORE: std::sync::OnceLock<EmbeddingStore> = std::sync::OnceLock::new();
        STORE.get_or_init(|| EmbeddingStore::parse(Self::builtin_text()).expect("shipped embedding data is valid"))
    }

    pub fn data(&self) -> &[EmbeddingDatum] {
        &self.data
    }

    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    pub fn to_text(&self) -> String {
        let body: Vec<String> = self
            .lines
            .iter()
            .map(|l| match l {
                Line::Text(s) => s.clone(),
                Line::Datum(i) => self.data[*i].to_line(),
            })
            .collect();
        seal(&body.join("\n"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditLine {
    pub datum: String,
    pub rank: usize,
    /// From the factors; `None` when a factor has no value.
    pub computed: Option<BigInt>,
    pub stated: Option<BigInt>,
    pub regular: Option<bool>,
    /// Prime used to compare with the table (smallest one the datum admits).
    pub prime: Option<u64>,
    pub in_table: bool,
}

impl AuditLine {
    /// The value used for the verdict: computed when possible, else stated.
    pub fn value(&self) -> Option<&BigInt> {
        self.computed.as_ref().or(self.stated.as_ref())
    }

    pub fn verdict(&self) -> Option<bool> {
        self.value().map(|v| *v == BigInt::from(self.rank))
    }

    /// The verdict matches the table, and the computed value matches the
    /// stated one when both exist.
    pub fn consistent(&self) -> bool {
        let stated_ok = match (&self.computed, &self.stated) {
            (Some(c), Some(s)) => c == s,
            _ => true,
        };
        stated_ok && self.verdict() == Some(self.in_table)
    }
}

/// Every datum against the subgroup table.
pub fn audit(store: &EmbeddingStore, tables: &TableStore) -> Result<Vec<AuditLine>> {
    let mut out = Vec::new();
    for e in store.data() {
        let computed = match zero_weight_sum(e) {
            Ok(v) => Some(v),
            Err(ExceptionalError::MissingStatedMultiplicity { .. }) => None,
            Err(err) => return Err(err),
        };
        let prime = e.representative_prime();
        let in_table = match prime {
            Some(q) => {
                let ch = Characteristic::new(q)?;
                tables.subgroups(TableId::TEXC, e.h, ch)?.iter().any(|(_, g)| *g == e.m)
            }
            None => false,
        };
        let rank = e.h.rank();
        out.push(AuditLine {
            datum: e.to_string(),
            rank,
            regular: computed.as_ref().map(|c| *c == BigInt::from(rank)),
            computed,
            stated: e.stated_total.clone(),
            prime,
            in_table,
        });
    }
    Ok(out)
}
