//! Machine-readable copies of the classification tables and a small rule
//! engine that matches `(type, weight, p)` against them.
//!
//! File format (one row per line, fields separated by ` | `):
//!
//! ```text
//! rtk-tables 1
//! checksum sha256 <hex of everything after this line>
//! # comment
//! T4 | G2 | w2 | p>3 | dim 14 | -
//! ```
//!
//! Fields are: table, group type, weights (or subgroup types for `TEXC` and
//! `TPAIRS`) separated by `;`, comma-separated conditions (`-` for none),
//! payload, tags. Payloads are `-`, `dim <expr>`, `dim ?` (not known) and
//! `zero <expr> if <cond>; <expr>`. Tags are `charp-only` and
//! `erratum(<payload>)`.
//!
//! A top-level condition clause that mentions a variable absent from the
//! matched weight does not apply to that weight; this is how a printed row
//! such as "a ω1, b ωn, 1 ≤ a,b < p" is read.

pub mod expr;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::roots::{diagram_automorphisms, Family, SimpleType, Weight};
use crate::weights::Characteristic;
pub use expr::{Binding, Cond, Expr, ExprError, PVal, WeightPattern};

pub const SCHEMA: &str = "rtk-tables 1";

const BUILTIN: &str = include_str!("../../data/tables.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("row {row}: {err}")]
    Eval { row: RowId, err: ExprError },
    #[error("i/o error reading {path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, TableError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    TM2,
    TEXC,
    TPAIRS,
}

impl TableId {
    pub const ALL: [TableId; 11] = [
        TableId::T1,
        TableId::T2,
        TableId::T3,
        TableId::T4,
        TableId::T5,
        TableId::T6,
        TableId::T7,
        TableId::T8,
        TableId::TM2,
        TableId::TEXC,
        TableId::TPAIRS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::T1 => "T1",
            TableId::T2 => "T2",
            TableId::T3 => "T3",
            TableId::T4 => "T4",
            TableId::T5 => "T5",
            TableId::T6 => "T6",
            TableId::T7 => "T7",
            TableId::T8 => "T8",
            TableId::TM2 => "TM2",
            TableId::TEXC => "TEXC",
            TableId::TPAIRS => "TPAIRS",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            TableId::T1 => "all weights of multiplicity 1",
            TableId::T2 => "nonzero weights of multiplicity 1, zero weight larger",
            TableId::T3 => "symplectic, p != 2",
            TableId::T4 => "even-dimensional orthogonal, p != 2",
            TableId::T5 => "odd-dimensional orthogonal, p != 2",
            TableId::T6 => "not self-dual",
            TableId::T7 => "symplectic but not orthogonal, p = 2",
            TableId::T8 => "orthogonal, p = 2",
            TableId::TM2 => "zero weight of multiplicity 2",
            TableId::TEXC => "maximal subgroups of exceptional groups containing a regular torus",
            TableId::TPAIRS => "subgroups containing a regular unipotent element",
        }
    }

    /// Restriction on p printed in the table caption rather than the rows.
    pub fn admits(self, p: PVal) -> bool {
        match self {
            TableId::T3 | TableId::T4 | TableId::T5 => p != PVal::Prime(2),
            TableId::T7 | TableId::T8 => p == PVal::Prime(2),
            _ => true,
        }
    }

    fn has_group_subject(self) -> bool {
        matches!(self, TableId::TEXC | TableId::TPAIRS)
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        TableId::ALL.iter().copied().find(|t| t.name() == s).ok_or_else(|| format!("unknown table `{s}`"))
    }
}

/// Table and 1-based position of a row inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RowId {
    pub table: TableId,
    pub index: usize,
}

impl fmt::Display for RowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.table, self.index)
    }
}

pub fn to_pval(p: Characteristic) -> PVal {
    if p.is_zero() {
        PVal::Infinite
    } else {
        PVal::Prime(p.p() as i64)
    }
}

/// A simple type with a possibly symbolic rank, e.g. `A(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypePattern {
    pub family: Family,
    pub rank: Expr,
}

impl TypePattern {
    /// Binding of `n` (if symbolic) under which the pattern is `ty`.
    pub fn bind(&self, ty: SimpleType) -> Option<Binding> {
        if ty.family() != self.family {
            return None;
        }
        let r = ty.rank() as i64;
        match &self.rank {
            Expr::Num(k) => (*k == r).then(Binding::new),
            Expr::Var(v) => Some([(v.clone(), r)].into_iter().collect()),
            e => (1..=r + 2).find_map(|n| {
                let env: Binding = [("n".to_string(), n)].into_iter().collect();
                (e.eval(&env, PVal::Infinite).ok() == Some(r as i128)).then_some(env)
            }),
        }
    }

    pub fn is_fixed(&self) -> bool {
        matches!(self.rank, Expr::Num(_))
    }

    pub fn instantiate(&self, env: &Binding) -> Option<SimpleType> {
        let r = self.rank.eval(env, PVal::Infinite).ok()?;
        let r = usize::try_from(r).ok()?;
        // B1 and C1 are A1 for our purposes
        let (fam, r) = match (self.family, r) {
            (Family::B | Family::C, 1) => (Family::A, 1),
            (f, r) => (f, r),
        };
        SimpleType::new(fam, r).ok()
    }
}

impl fmt::Display for TypePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rank {
            Expr::Num(_) | Expr::Var(_) => write!(f, "{}{}", self.family, self.rank),
            e => write!(f, "{}({})", self.family, e),
        }
    }
}

pub fn parse_type_list(s: &str) -> std::result::Result<Vec<TypePattern>, String> {
    let b = s.trim().as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let family: Family = (b[i] as char).to_string().parse().map_err(|e: crate::roots::RootError| e.to_string())?;
        i += 1;
        let st = i;
        let rank = if i < b.len() && b[i] == b'(' {
            let mut depth = 0;
            while i < b.len() {
                match b[i] {
                    b'(' => depth += 1,
                    b')' => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
                i += 1;
            }
            if i == b.len() {
                return Err("unbalanced parenthesis in type".into());
            }
            i += 1;
            expr::parse_expr(&s.trim()[st + 1..i - 1]).map_err(|e| e.to_string())?
        } else if i < b.len() && b[i].is_ascii_digit() {
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            Expr::Num(s.trim()[st..i].parse().map_err(|_| "bad rank")?)
        } else if i < b.len() && b[i].is_ascii_lowercase() {
            i += 1;
            Expr::Var((b[i - 1] as char).to_string())
        } else {
            return Err(format!("missing rank in type `{s}`"));
        };
        out.push(TypePattern { family, rank });
    }
    if out.is_empty() {
        return Err("empty type".into());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subject {
    Weights(Vec<WeightPattern>),
    Groups(Vec<TypePattern>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    None,
    /// `None` inside means "not known".
    Dim(Option<Expr>),
    Zero(Vec<(Expr, Option<Cond>)>),
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::None => write!(f, "-"),
            Payload::Dim(None) => write!(f, "dim ?"),
            Payload::Dim(Some(e)) => write!(f, "dim {e}"),
            Payload::Zero(cases) => {
                write!(f, "zero ")?;
                for (k, (e, c)) in cases.iter().enumerate() {
                    if k > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{e}")?;
                    if let Some(c) = c {
                        write!(f, " if {c}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

fn parse_payload(s: &str) -> std::result::Result<Payload, String> {
    let s = s.trim();
    if s == "-" {
        return Ok(Payload::None);
    }
    if let Some(rest) = s.strip_prefix("dim ") {
        if rest.trim() == "?" {
            return Ok(Payload::Dim(None));
        }
        return expr::parse_expr(rest).map(|e| Payload::Dim(Some(e))).map_err(|e| e.to_string());
    }
    if let Some(rest) = s.strip_prefix("zero ") {
        let mut cases = Vec::new();
        for part in rest.split(';') {
            let (e, c) = match part.split_once(" if ") {
                Some((e, c)) => (e, Some(expr::parse_condition(c).map_err(|e| e.to_string())?)),
                None => (part, None),
            };
            cases.push((expr::parse_expr(e).map_err(|e| e.to_string())?, c));
        }
        return Ok(Payload::Zero(cases));
    }
    Err(format!("unknown payload `{s}`"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub table: TableId,
    pub group: TypePattern,
    pub subject: Subject,
    pub conditions: Vec<Cond>,
    pub payload: Payload,
    pub charp_only: bool,
    /// Corrected payload where the printed value is wrong.
    pub erratum: Option<Payload>,
}

/// Evaluated payload.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PayloadValue {
    None,
    Dim(BigInt),
    DimNotKnown,
    Zero(BigInt),
}

impl TableRow {
    pub fn weights(&self) -> &[WeightPattern] {
        match &self.subject {
            Subject::Weights(w) => w,
            Subject::Groups(_) => &[],
        }
    }

    pub fn groups(&self) -> &[TypePattern] {
        match &self.subject {
            Subject::Groups(g) => g,
            Subject::Weights(_) => &[],
        }
    }

    /// Whether weight `k` of the row has an instance in characteristic 0.
    pub fn weight_admits_char0(&self, k: usize) -> bool {
        !self.charp_only && !self.weights()[k].mentions("p")
    }

    /// Whether the row has no instance in characteristic 0.
    pub fn computed_charp_only(&self) -> bool {
        let ws = self.weights();
        !self.table.admits(PVal::Infinite)
            || self.conditions.iter().any(Cond::pins_p)
            || (!ws.is_empty() && ws.iter().all(|w| w.mentions("p")))
    }

    pub fn conditions_hold(&self, env: &Binding, p: PVal) -> std::result::Result<bool, ExprError> {
        for c in &self.conditions {
            let mut vs = BTreeSet::new();
            c.vars(&mut vs);
            if vs.iter().any(|v| v != "p" && !env.contains_key(v)) {
                continue;
            }
            if !c.eval(env, p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn evaluate_payload(&self, payload: &Payload, env: &Binding, p: PVal) -> std::result::Result<PayloadValue, ExprError> {
        Ok(match payload {
            Payload::None => PayloadValue::None,
            Payload::Dim(None) => PayloadValue::DimNotKnown,
            Payload::Dim(Some(e)) => PayloadValue::Dim(BigInt::from(e.eval(env, p)?)),
            Payload::Zero(cases) => {
                for (e, c) in cases {
                    let ok = match c {
                        None => true,
                        Some(c) => c.eval(env, p)?,
                    };
                    if ok {
                        return Ok(PayloadValue::Zero(BigInt::from(e.eval(env, p)?)));
                    }
                }
                PayloadValue::None
            }
        })
    }

    /// Bindings under which weight pattern `k` equals `lambda`; the
    /// conditions are not checked here.
    fn weight_bindings(&self, k: usize, base: &Binding, lambda: &Weight, p: PVal) -> std::result::Result<Vec<Binding>, ExprError> {
        let pat = &self.weights()[k];
        let rank = lambda.rank();
        let mut vars = BTreeSet::new();
        pat.vars(&mut vars);
        vars.remove("p");
        for b in base.keys() {
            vars.remove(b);
        }
        let index_vars = pat.index_vars();
        let mut coef_values: Vec<i64> = lambda.coords().to_vec();
        coef_values.push(0);
        coef_values.sort_unstable();
        coef_values.dedup();
        let domains: Vec<(String, Vec<i64>)> = vars
            .into_iter()
            .map(|v| {
                let dom = if index_vars.contains(&v) { (1..=rank as i64).collect() } else { coef_values.clone() };
                (v, dom)
            })
            .collect();
        let mut out = Vec::new();
        let mut env = base.clone();
        fn rec(
            depth: usize,
            domains: &[(String, Vec<i64>)],
            env: &mut Binding,
            pat: &WeightPattern,
            lambda: &Weight,
            p: PVal,
            out: &mut Vec<Binding>,
        ) -> std::result::Result<(), ExprError> {
            if depth == domains.len() {
                if let Some(v) = pat.instantiate(lambda.rank(), env, p)? {
                    if v == lambda.coords() {
                        out.push(env.clone());
                    }
                }
                return Ok(());
            }
            let (name, dom) = &domains[depth];
            for &x in dom {
                env.insert(name.clone(), x);
                rec(depth + 1, domains, env, pat, lambda, p, out)?;
            }
            env.remove(name);
            Ok(())
        }
        rec(0, &domains, &mut env, pat, lambda, p, &mut out)?;
        Ok(out)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let payload_ok = match self.table {
            TableId::T1 | TableId::T6 | TableId::TEXC | TableId::TPAIRS => matches!(self.payload, Payload::None),
            TableId::T2 => matches!(self.payload, Payload::Zero(_)),
            _ => matches!(self.payload, Payload::Dim(_)),
        };
        if !payload_ok {
            return Err(format!("payload `{}` does not fit table {}", self.payload, self.table));
        }
        if self.table.has_group_subject() != matches!(self.subject, Subject::Groups(_)) {
            return Err("subject kind does not fit the table".into());
        }
        let mut known: BTreeSet<String> = ["p".to_string()].into_iter().collect();
        self.group.rank.vars(&mut known);
        for w in self.weights() {
            w.vars(&mut known);
            let idx = w.index_vars();
            let mut all = BTreeSet::new();
            w.vars(&mut all);
            let lone = w.lone_coefficient_vars();
            for v in all {
                let bound = v == "p" || idx.contains(&v) || lone.contains(&v) || {
                    let mut r = BTreeSet::new();
                    self.group.rank.vars(&mut r);
                    r.contains(&v)
                };
                if !bound {
                    return Err(format!("variable `{v}` cannot be recovered from a weight"));
                }
            }
        }
        for g in self.groups() {
            g.rank.vars(&mut known);
        }
        let mut used = BTreeSet::new();
        self.conditions.iter().for_each(|c| c.vars(&mut used));
        match &self.payload {
            Payload::Dim(Some(e)) => e.vars(&mut used),
            Payload::Zero(cases) => {
                for (e, c) in cases {
                    e.vars(&mut used);
                    if let Some(c) = c {
                        c.vars(&mut used);
                    }
                }
            }
            _ => {}
        }
        if let Some(v) = used.difference(&known).next() {
            return Err(format!("unknown variable `{v}`"));
        }
        if self.charp_only != self.computed_charp_only() {
            return Err(format!(
                "row is {}tagged charp-only but its conditions say otherwise",
                if self.charp_only { "" } else { "not " }
            ));
        }
        Ok(())
    }
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {} | ", self.table, self.group)?;
        match &self.subject {
            Subject::Weights(ws) => {
                let parts: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
                write!(f, "{}", parts.join("; "))?;
            }
            Subject::Groups(gs) => {
                for g in gs {
                    write!(f, "{g}")?;
                }
            }
        }
        write!(f, " | {} | {} | ", expr::write_conditions(&self.conditions), self.payload)?;
        let mut tags = Vec::new();
        if self.charp_only {
            tags.push("charp-only".to_string());
        }
        if let Some(e) = &self.erratum {
            tags.push(format!("erratum({e})"));
        }
        if tags.is_empty() {
            write!(f, "-")
        } else {
            write!(f, "{}", tags.join(", "))
        }
    }
}

fn split_tags(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

pub fn parse_row(line: &str) -> std::result::Result<TableRow, String> {
    let fields: Vec<&str> = line.split(" | ").collect();
    if fields.len() != 6 {
        return Err(format!("expected 6 fields separated by ` | `, found {}", fields.len()));
    }
    let table: TableId = fields[0].trim().parse()?;
    let mut group = parse_type_list(fields[1])?;
    if group.len() != 1 {
        return Err("the group column must be a single simple type".into());
    }
    let group = group.pop().unwrap();
    let subject = if table.has_group_subject() {
        Subject::Groups(parse_type_list(fields[2])?)
    } else {
        let mut ws = Vec::new();
        for part in fields[2].split(';') {
            ws.push(expr::parse_weight_pattern(part).map_err(|e| format!("weight `{}`: {e}", part.trim()))?);
        }
        Subject::Weights(ws)
    };
    let conditions = expr::parse_conditions(fields[3]).map_err(|e| format!("conditions: {e}"))?;
    let payload = parse_payload(fields[4])?;
    let mut charp_only = false;
    let mut erratum = None;
    if fields[5].trim() != "-" {
        for tag in split_tags(fields[5]) {
            if tag == "charp-only" {
                charp_only = true;
            } else if let Some(inner) = tag.strip_prefix("erratum(").and_then(|t| t.strip_suffix(')')) {
                erratum = Some(parse_payload(inner)?);
            } else {
                return Err(format!("unknown tag `{tag}`"));
            }
        }
    }
    let row = TableRow { table, group, subject, conditions, payload, charp_only, erratum };
    row.validate()?;
    Ok(row)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Line {
    Text(String),
    Row(usize),
}

/// A successful lookup.
#[derive(Debug, Clone)]
pub struct RowMatch<'a> {
    pub id: RowId,
    pub row: &'a TableRow,
    pub binding: Binding,
    /// Which of the row's weights matched.
    pub weight_index: usize,
    /// The query was of type B2 and matched a C2 row after swapping labels.
    pub via_c2: bool,
    /// The row matched the image of the query under a diagram automorphism.
    pub twisted: bool,
}

impl RowMatch<'_> {
    pub fn payload(&self, p: PVal) -> Result<PayloadValue> {
        self.row.evaluate_payload(&self.row.payload, &self.binding, p).map_err(|err| TableError::Eval { row: self.id, err })
    }

    pub fn corrected_payload(&self, p: PVal) -> Result<PayloadValue> {
        let pl = self.row.erratum.as_ref().unwrap_or(&self.row.payload);
        self.row.evaluate_payload(pl, &self.binding, p).map_err(|err| TableError::Eval { row: self.id, err })
    }
}

#[derive(Debug, Clone)]
pub struct TableStore {
    rows: Vec<TableRow>,
    ids: Vec<RowId>,
    lines: Vec<Line>,
    checksum: String,
}

pub(crate) fn digest(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

/// Header and checksum line for a body.
pub fn seal(body: &str) -> String {
    format!("{SCHEMA}\nchecksum sha256 {}\n{body}", digest(body))
}

impl TableStore {
    pub fn parse(text: &str) -> Result<TableStore> {
        let mut it = text.splitn(3, '\n');
        let header = it.next().unwrap_or("");
        if header.trim().is_empty() {
            return Err(TableError::Parse { line: 1, msg: "empty file".into() });
        }
        if header != SCHEMA {
            return Err(TableError::SchemaMismatch(format!("expected `{SCHEMA}`, found `{header}`")));
        }
        let sum_line = it.next().ok_or(TableError::Parse { line: 2, msg: "missing checksum line".into() })?;
        let stated = sum_line
            .strip_prefix("checksum sha256 ")
            .ok_or(TableError::Parse { line: 2, msg: "malformed checksum line".into() })?;
        let body = it.next().unwrap_or("");
        let actual = digest(body);
        if stated != actual {
            return Err(TableError::SchemaMismatch(format!("checksum {stated} does not match content ({actual})")));
        }
        let mut rows = Vec::new();
        let mut ids = Vec::new();
        let mut lines = Vec::new();
        let mut counters = std::collections::HashMap::new();
        for (k, line) in body.split('\n').enumerate() {
            let lineno = k + 3;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                lines.push(Line::Text(line.to_string()));
                continue;
            }
            let row = parse_row(line).map_err(|msg| TableError::Parse { line: lineno, msg })?;
            let c = counters.entry(row.table).or_insert(0usize);
            *c += 1;
            ids.push(RowId { table: row.table, index: *c });
            lines.push(Line::Row(rows.len()));
            rows.push(row);
        }
        Ok(TableStore { rows, ids, lines, checksum: actual })
    }

    pub fn load(path: &std::path::Path) -> Result<TableStore> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| TableError::Io { path: path.display().to_string(), msg: e.to_string() })?;
        TableStore::parse(&text)
    }

    /// The table file compiled into the library.
    pub fn builtin() -> &'static TableStore {
        static STORE: OnceLock<TableStore> = OnceLock::new();
        STORE.get_or_init(|| TableStore::parse(BUILTIN).expect("built-in table file is valid"))
    }

    pub fn builtin_text() -> &'static str {
        BUILTIN
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
                Line::Row(i) => self.rows[*i].to_string(),
            })
            .collect();
        seal(&body.join("\n"))
    }

    pub fn all_rows(&self) -> impl Iterator<Item = (RowId, &TableRow)> {
        self.ids.iter().copied().zip(self.rows.iter())
    }

    pub fn rows(&self, table: TableId) -> impl Iterator<Item = (RowId, &TableRow)> {
        self.all_rows().filter(move |(id, _)| id.table == table)
    }

    pub fn row(&self, id: RowId) -> Option<&TableRow> {
        self.all_rows().find(|(i, _)| *i == id).map(|(_, r)| r)
    }

    pub fn table_ids(&self) -> BTreeSet<TableId> {
        self.ids.iter().map(|i| i.table).collect()
    }

    fn match_row<'a>(&'a self, id: RowId, row: &'a TableRow, ty: SimpleType, lambda: &Weight, p: PVal) -> Result<Option<RowMatch<'a>>> {
        if !row.table.admits(p) || (p == PVal::Infinite && row.charp_only) {
            return Ok(None);
        }
        let Some(base) = row.group.bind(ty) else { return Ok(None) };
        let wrap = |err| TableError::Eval { row: id, err };
        for k in 0..row.weights().len() {
            if p == PVal::Infinite && row.weights()[k].mentions("p") {
                continue;
            }
            for env in row.weight_bindings(k, &base, lambda, p).map_err(wrap)? {
                if row.conditions_hold(&env, p).map_err(wrap)? {
                    return Ok(Some(RowMatch { id, row, binding: env, weight_index: k, via_c2: false, twisted: false }));
                }
            }
        }
        Ok(None)
    }

    /// All rows of `table` matching `(ty, lambda, p)`, fixed-rank rows first.
    /// A B2 query is also matched against C2 rows with the two labels swapped.
    /// The tables list weights up to diagram automorphisms, so images of
    /// `lambda` under them are tried last.
    pub fn find_all(&self, table: TableId, ty: SimpleType, lambda: &Weight, p: Characteristic) -> Result<Vec<RowMatch<'_>>> {
        let pv = to_pval(p);
        let mut out = Vec::new();
        let mut candidates: Vec<(RowId, &TableRow)> = self.rows(table).collect();
        candidates.sort_by_key(|(id, r)| (!r.group.is_fixed(), id.index));
        if ty.is(Family::B, 2) {
            let c2 = SimpleType::new(Family::C, 2).expect("C2");
            let swapped = Weight::new(vec![lambda.at(2), lambda.at(1)]);
            for (id, row) in &candidates {
                if let Some(mut m) = self.match_row(*id, row, c2, &swapped, pv)? {
                    m.via_c2 = true;
                    out.push(m);
                }
            }
        }
        for (id, row) in &candidates {
            if let Some(m) = self.match_row(*id, row, ty, lambda, pv)? {
                out.push(m);
            }
        }
        if lambda.rank() != ty.rank() {
            return Ok(out);
        }
        let mut images: Vec<Weight> = Vec::new();
        for perm in diagram_automorphisms(ty) {
            let mut c = vec![0; ty.rank()];
            for (i, &j) in perm.iter().enumerate() {
                c[j] = lambda.coords()[i];
            }
            let img = Weight::new(c);
            if img != *lambda && !images.contains(&img) {
                images.push(img);
            }
        }
        for img in &images {
            for (id, row) in &candidates {
                if out.iter().any(|m| m.id == *id) {
                    continue;
                }
                if let Some(mut m) = self.match_row(*id, row, ty, img, pv)? {
                    m.twisted = true;
                    out.push(m);
                }
            }
        }
        Ok(out)
    }

    pub fn find(&self, table: TableId, ty: SimpleType, lambda: &Weight, p: Characteristic) -> Result<Option<RowMatch<'_>>> {
        Ok(self.find_all(table, ty, lambda, p)?.into_iter().next())
    }

    /// Subgroup-type rows (`TEXC`, `TPAIRS`) whose group column is `ty` and
    /// whose conditions hold at `p`, instantiated.
    pub fn subgroups(&self, table: TableId, ty: SimpleType, p: Characteristic) -> Result<Vec<(RowId, Vec<SimpleType>)>> {
        let pv = to_pval(p);
        let mut out = Vec::new();
        for (id, row) in self.rows(table) {
            let Some(env) = row.group.bind(ty) else { continue };
            if !row.table.admits(pv) || !row.conditions_hold(&env, pv).map_err(|err| TableError::Eval { row: id, err })? {
                continue;
            }
            let inst: Option<Vec<SimpleType>> = row.groups().iter().map(|g| g.instantiate(&env)).collect();
            if let Some(v) = inst {
                out.push((id, v));
            }
        }
        Ok(out)
    }
}
