//! Integer expressions, conditions and weight patterns used by the table
//! file. Each type has a parser and a canonical printer; the printer output
//! re-parses to the same value.
//!
//! Evaluation takes the characteristic as [`PVal`]. In characteristic 0 the
//! symbol `p` may only appear as a bare operand of a comparison or of a
//! divisibility test, where it reads as "larger than everything": `p>3`
//! holds, `p=3` fails, `p|k` fails.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("`p` occurs inside arithmetic and cannot be read in characteristic 0")]
    PInArithmetic,
    #[error("division {0}/{1} is not exact")]
    Inexact(i128, i128),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("negative exponent or binomial argument")]
    Domain,
}

pub type Binding = BTreeMap<String, i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PVal {
    Infinite,
    Prime(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Pow,
}

impl Op {
    fn prec(self) -> u8 {
        match self {
            Op::Add | Op::Sub => 1,
            Op::Mul | Op::Div | Op::Mod => 2,
            Op::Pow => 4,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Op::Add => "+",
            Op::Sub => "-",
            Op::Mul => "*",
            Op::Div => "/",
            Op::Mod => "%",
            Op::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(i64),
    Var(String),
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
    Binom(Box<Expr>, Box<Expr>),
    Gcd(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Neg(e) => e.vars(out),
            Expr::Bin(_, a, b) | Expr::Binom(a, b) | Expr::Gcd(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        let mut s = BTreeSet::new();
        self.vars(&mut s);
        s.contains(name)
    }

    fn is_bare_p(&self) -> bool {
        matches!(self, Expr::Var(v) if v == "p")
    }

    pub fn eval(&self, env: &Binding, p: PVal) -> Result<i128, ExprError> {
        match self {
            Expr::Num(k) => Ok(*k as i128),
            Expr::Var(v) if v == "p" => match p {
                PVal::Prime(q) => Ok(q as i128),
                PVal::Infinite => Err(ExprError::PInArithmetic),
            },
            Expr::Var(v) => env.get(v).map(|&x| x as i128).ok_or_else(|| ExprError::Unbound(v.clone())),
            Expr::Neg(e) => Ok(-e.eval(env, p)?),
            Expr::Bin(op, a, b) => {
                let x = a.eval(env, p)?;
                let y = b.eval(env, p)?;
                match op {
                    Op::Add => x.checked_add(y).ok_or(ExprError::Overflow),
                    Op::Sub => x.checked_sub(y).ok_or(ExprError::Overflow),
                    Op::Mul => x.checked_mul(y).ok_or(ExprError::Overflow),
                    Op::Div => {
                        if y == 0 || x % y != 0 {
                            Err(ExprError::Inexact(x, y))
                        } else {
                            Ok(x / y)
                        }
                    }
                    Op::Mod => {
                        if y <= 0 {
                            Err(ExprError::Domain)
                        } else {
                            Ok(x.rem_euclid(y))
                        }
                    }
                    Op::Pow => {
                        let e = u32::try_from(y).map_err(|_| ExprError::Domain)?;
                        x.checked_pow(e).ok_or(ExprError::Overflow)
                    }
                }
            }
            Expr::Binom(a, b) => {
                let n = a.eval(env, p)?;
                let k = b.eval(env, p)?;
                if n < 0 {
                    return Err(ExprError::Domain);
                }
                if k < 0 || k > n {
                    return Ok(0);
                }
                let k = k.min(n - k);
                let mut acc: i128 = 1;
                for j in 0..k {
                    acc = acc.checked_mul(n - j).ok_or(ExprError::Overflow)? / (j + 1);
                }
                Ok(acc)
            }
            Expr::Gcd(a, b) => {
                let (mut x, mut y) = (a.eval(env, p)?.abs(), b.eval(env, p)?.abs());
                while y != 0 {
                    let t = x % y;
                    x = y;
                    y = t;
                }
                Ok(x)
            }
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        match self {
            Expr::Num(k) if *k < 0 && min > 1 => write!(f, "({k})"),
            Expr::Num(k) => write!(f, "{k}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(e) => {
                if min > 3 {
                    write!(f, "(-")?;
                    e.write_prec(f, 4)?;
                    write!(f, ")")
                } else {
                    write!(f, "-")?;
                    e.write_prec(f, 4)
                }
            }
            Expr::Bin(op, a, b) => {
                let pr = op.prec();
                let paren = pr < min;
                if paren {
                    write!(f, "(")?;
                }
                if *op == Op::Pow {
                    a.write_prec(f, pr + 1)?;
                    write!(f, "^")?;
                    b.write_prec(f, pr)?;
                } else {
                    a.write_prec(f, pr)?;
                    write!(f, "{}", op.symbol())?;
                    b.write_prec(f, pr + 1)?;
                }
                if paren {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Expr::Binom(a, b) => write!(f, "binom({a},{b})"),
            Expr::Gcd(a, b) => write!(f, "gcd({a},{b})"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    fn symbol(self) -> &'static str {
        match self {
            Cmp::Eq => "=",
            Cmp::Ne => "!=",
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
        }
    }

    fn holds(self, x: i128, y: i128) -> bool {
        match self {
            Cmp::Eq => x == y,
            Cmp::Ne => x != y,
            Cmp::Lt => x < y,
            Cmp::Le => x <= y,
            Cmp::Gt => x > y,
            Cmp::Ge => x >= y,
        }
    }

    // truth of `inf op y`
    fn inf_left(self) -> bool {
        matches!(self, Cmp::Ne | Cmp::Gt | Cmp::Ge)
    }

    fn inf_right(self) -> bool {
        matches!(self, Cmp::Ne | Cmp::Lt | Cmp::Le)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cond {
    Chain(Expr, Vec<(Cmp, Expr)>),
    Divides(Expr, Expr),
    NotDivides(Expr, Expr),
    Odd(Expr),
    Even(Expr),
    And(Vec<Cond>),
    Or(Vec<Cond>),
    Implies(Box<Cond>, Box<Cond>),
}

impl Cond {
    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Cond::Chain(a, rest) => {
                a.vars(out);
                for (_, e) in rest {
                    e.vars(out);
                }
            }
            Cond::Divides(a, b) | Cond::NotDivides(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Cond::Odd(e) | Cond::Even(e) => e.vars(out),
            Cond::And(cs) | Cond::Or(cs) => cs.iter().for_each(|c| c.vars(out)),
            Cond::Implies(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    /// `p=k` for a constant k, the shape that pins a row to one prime.
    pub fn pins_p(&self) -> bool {
        match self {
            Cond::Chain(a, rest) if rest.len() == 1 && rest[0].0 == Cmp::Eq => {
                (a.is_bare_p() && !rest[0].1.mentions("p")) || (rest[0].1.is_bare_p() && !a.mentions("p"))
            }
            Cond::And(cs) => cs.iter().any(Cond::pins_p),
            _ => false,
        }
    }

    /// Inexact division inside a condition makes the atom false, so that
    /// `odd((n+1)/2)` simply fails for even n.
    pub fn eval(&self, env: &Binding, p: PVal) -> Result<bool, ExprError> {
        fn soft(r: Result<bool, ExprError>) -> Result<bool, ExprError> {
            match r {
                Err(ExprError::Inexact(..)) => Ok(false),
                other => other,
            }
        }
        match self {
            Cond::Chain(first, rest) => {
                let mut left = first;
                for (op, right) in rest {
                    let ok = soft(compare(left, *op, right, env, p))?;
                    if !ok {
                        return Ok(false);
                    }
                    left = right;
                }
                Ok(true)
            }
            Cond::Divides(a, b) => soft(divides(a, b, env, p)),
            Cond::NotDivides(a, b) => soft(divides(a, b, env, p).map(|d| !d)),
            Cond::Odd(e) => soft(e.eval(env, p).map(|x| x.rem_euclid(2) == 1)),
            Cond::Even(e) => soft(e.eval(env, p).map(|x| x.rem_euclid(2) == 0)),
            Cond::And(cs) => {
                for c in cs {
                    if !c.eval(env, p)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Cond::Or(cs) => {
                for c in cs {
                    if c.eval(env, p)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Cond::Implies(a, b) => Ok(!a.eval(env, p)? || b.eval(env, p)?),
        }
    }

    fn write_level(&self, f: &mut fmt::Formatter<'_>, level: u8) -> fmt::Result {
        // levels: 0 implication, 1 or, 2 and, 3 atom
        match self {
            Cond::Chain(a, rest) => {
                write!(f, "{a}")?;
                for (op, e) in rest {
                    write!(f, "{}{e}", op.symbol())?;
                }
                Ok(())
            }
            Cond::Divides(a, b) => write!(f, "{a}|{b}"),
            Cond::NotDivides(a, b) => write!(f, "{a}!|{b}"),
            Cond::Odd(e) => write!(f, "odd({e})"),
            Cond::Even(e) => write!(f, "even({e})"),
            Cond::And(cs) => {
                debug_assert!(level <= 2);
                for (k, c) in cs.iter().enumerate() {
                    if k > 0 {
                        write!(f, " and ")?;
                    }
                    c.write_level(f, 3)?;
                }
                Ok(())
            }
            Cond::Or(cs) => {
                debug_assert!(level <= 1);
                for (k, c) in cs.iter().enumerate() {
                    if k > 0 {
                        write!(f, " or ")?;
                    }
                    c.write_level(f, 2)?;
                }
                Ok(())
            }
            Cond::Implies(a, b) => {
                a.write_level(f, 1)?;
                write!(f, " -> ")?;
                b.write_level(f, 1)
            }
        }
    }
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_level(f, 0)
    }
}

fn compare(a: &Expr, op: Cmp, b: &Expr, env: &Binding, p: PVal) -> Result<bool, ExprError> {
    if p == PVal::Infinite {
        if a.is_bare_p() && !b.mentions("p") {
            b.eval(env, p)?;
            return Ok(op.inf_left());
        }
        if b.is_bare_p() && !a.mentions("p") {
            a.eval(env, p)?;
            return Ok(op.inf_right());
        }
    }
    Ok(op.holds(a.eval(env, p)?, b.eval(env, p)?))
}

fn divides(a: &Expr, b: &Expr, env: &Binding, p: PVal) -> Result<bool, ExprError> {
    if p == PVal::Infinite && a.is_bare_p() && !b.mentions("p") {
        let y = b.eval(env, p)?;
        // only 0 is divisible by an unbounded modulus
        return Ok(y == 0);
    }
    let x = a.eval(env, p)?;
    let y = b.eval(env, p)?;
    if x == 0 {
        return Ok(y == 0);
    }
    Ok(y % x == 0)
}

/// A linear combination of fundamental weights with symbolic coefficients
/// and symbolic (1-based) indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightPattern {
    pub terms: Vec<(Expr, Expr)>,
}

impl WeightPattern {
    pub fn vars(&self, out: &mut BTreeSet<String>) {
        for (c, i) in &self.terms {
            c.vars(out);
            i.vars(out);
        }
    }

    pub fn index_vars(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        for (_, i) in &self.terms {
            i.vars(&mut s);
        }
        s
    }

    /// Variables that appear alone as a coefficient somewhere.
    pub fn lone_coefficient_vars(&self) -> BTreeSet<String> {
        self.terms
            .iter()
            .filter_map(|(c, _)| match c {
                Expr::Var(v) => Some(v.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn mentions(&self, name: &str) -> bool {
        let mut s = BTreeSet::new();
        self.vars(&mut s);
        s.contains(name)
    }

    /// Coordinates of the pattern at a binding; `None` when an index falls
    /// outside 1..=rank or a coefficient is not an integer.
    pub fn instantiate(&self, rank: usize, env: &Binding, p: PVal) -> Result<Option<Vec<i64>>, ExprError> {
        let mut out = vec![0i64; rank];
        for (c, i) in &self.terms {
            let idx = match i.eval(env, p) {
                Ok(v) => v,
                Err(ExprError::Inexact(..)) => return Ok(None),
                Err(e) => return Err(e),
            };
            if idx < 1 || idx as usize > rank {
                return Ok(None);
            }
            let coef = match c.eval(env, p) {
                Ok(v) => v,
                Err(ExprError::Inexact(..)) => return Ok(None),
                Err(e) => return Err(e),
            };
            let slot = &mut out[idx as usize - 1];
            *slot = i64::try_from(*slot as i128 + coef).map_err(|_| ExprError::Overflow)?;
        }
        Ok(Some(out))
    }
}

impl fmt::Display for WeightPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (c, i)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if *c != Expr::Num(1) {
                c.write_prec(f, 2)?;
                write!(f, "*")?;
            }
            match i {
                Expr::Num(_) | Expr::Var(_) => write!(f, "w{i}")?,
                _ => write!(f, "w({i})")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(i64),
    Ident(String),
    // `w3`, `wn`, or bare `w` followed by a parenthesised index
    W(Option<String>),
    Sym(&'static str),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    const SYMS: [&str; 17] = ["->", "!|", "!=", "<=", ">=", "+", "-", "*", "/", "%", "^", "(", ")", ",", "<", ">", "="];
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let v = s[st..i].parse().map_err(|_| ExprError::Syntax { col: st, msg: "number too large".into() })?;
            out.push((st, Tok::Num(v)));
            continue;
        }
        if c.is_ascii_lowercase() {
            let st = i;
            if c == b'w' {
                i += 1;
                let rest = i;
                while i < b.len() && b[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let idx = &s[rest..i];
                out.push((st, Tok::W(if idx.is_empty() { None } else { Some(idx.to_string()) })));
                continue;
            }
            while i < b.len() && b[i].is_ascii_lowercase() {
                i += 1;
            }
            out.push((st, Tok::Ident(s[st..i].to_string())));
            continue;
        }
        if c == b'|' {
            out.push((i, Tok::Sym("|")));
            i += 1;
            continue;
        }
        for sym in SYMS {
            if s[i..].starts_with(sym) {
                out.push((i, Tok::Sym(sym)));
                i += sym.len();
                continue 'outer;
            }
        }
        return Err(ExprError::Syntax { col: i, msg: format!("unexpected character `{}`", c as char) });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(s: &str) -> Result<Self, ExprError> {
        Ok(Parser { toks: lex(s)?, pos: 0, end: s.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ExprError> {
        Err(ExprError::Syntax { col: self.col(), msg: msg.to_string() })
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), ExprError> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.err(&format!("expected `{sym}`"))
        }
    }

    fn done(&self) -> Result<(), ExprError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }

    // Expressions may contain weight atoms when `lin` is set; the result is
    // then linearised by the caller.
    fn expr(&mut self, lin: bool) -> Result<LinExpr, ExprError> {
        let mut acc = self.term(lin)?;
        loop {
            let op = if self.eat("+") {
                Op::Add
            } else if self.eat("-") {
                Op::Sub
            } else {
                return Ok(acc);
            };
            let rhs = self.term(lin)?;
            acc = LinExpr::bin(op, acc, rhs);
        }
    }

    fn term(&mut self, lin: bool) -> Result<LinExpr, ExprError> {
        let mut acc = self.unary(lin)?;
        loop {
            let op = if self.eat("*") {
                Op::Mul
            } else if self.eat("/") {
                Op::Div
            } else if self.eat("%") {
                Op::Mod
            } else {
                return Ok(acc);
            };
            let rhs = self.unary(lin)?;
            acc = LinExpr::bin(op, acc, rhs);
        }
    }

    fn unary(&mut self, lin: bool) -> Result<LinExpr, ExprError> {
        if self.eat("-") {
            let e = self.unary(lin)?;
            return Ok(match e {
                LinExpr::Scalar(Expr::Num(k)) => LinExpr::Scalar(Expr::Num(-k)),
                LinExpr::Scalar(x) => LinExpr::Scalar(Expr::Neg(Box::new(x))),
                other => LinExpr::Neg(Box::new(other)),
            });
        }
        let base = self.atom(lin)?;
        if self.eat("^") {
            let e = self.unary(lin)?;
            return Ok(LinExpr::bin(Op::Pow, base, e));
        }
        Ok(base)
    }

    fn atom(&mut self, lin: bool) -> Result<LinExpr, ExprError> {
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return self.err("unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Num(k) => Ok(LinExpr::Scalar(Expr::Num(k))),
            Tok::Ident(name) if name == "binom" || name == "gcd" => {
                self.expect("(")?;
                let a = self.expr(false)?.scalar(self)?;
                self.expect(",")?;
                let b = self.expr(false)?.scalar(self)?;
                self.expect(")")?;
                let (a, b) = (Box::new(a), Box::new(b));
                Ok(LinExpr::Scalar(if name == "binom" { Expr::Binom(a, b) } else { Expr::Gcd(a, b) }))
            }
            Tok::Ident(name) => {
                if matches!(name.as_str(), "and" | "or" | "odd" | "even") {
                    self.pos -= 1;
                    return self.err("keyword in expression position");
                }
                Ok(LinExpr::Scalar(Expr::Var(name)))
            }
            Tok::W(idx) => {
                if !lin {
                    self.pos -= 1;
                    return self.err("weight symbol outside a weight pattern");
                }
                let index = match idx {
                    Some(s) if s.bytes().all(|c| c.is_ascii_digit()) => {
                        Expr::Num(s.parse().map_err(|_| ExprError::Syntax { col: self.col(), msg: "bad index".into() })?)
                    }
                    Some(s) if s.bytes().all(|c| c.is_ascii_lowercase()) => Expr::Var(s),
                    Some(_) => return self.err("bad weight index"),
                    None => {
                        self.expect("(")?;
                        let e = self.expr(false)?.scalar(self)?;
                        self.expect(")")?;
                        e
                    }
                };
                Ok(LinExpr::W(index))
            }
            Tok::Sym("(") => {
                let e = self.expr(lin)?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Sym(s) => {
                self.pos -= 1;
                self.err(&format!("unexpected `{s}`"))
            }
        }
    }

    fn cond_list(&mut self) -> Result<Vec<Cond>, ExprError> {
        let mut out = vec![self.implication()?];
        while self.eat(",") {
            out.push(self.implication()?);
        }
        Ok(out)
    }

    fn implication(&mut self) -> Result<Cond, ExprError> {
        let a = self.disjunction()?;
        if self.eat("->") {
            let b = self.disjunction()?;
            return Ok(Cond::Implies(Box::new(a), Box::new(b)));
        }
        Ok(a)
    }

    fn disjunction(&mut self) -> Result<Cond, ExprError> {
        let mut items = vec![self.conjunction()?];
        while self.eat_word("or") {
            items.push(self.conjunction()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Cond::Or(items) })
    }

    fn conjunction(&mut self) -> Result<Cond, ExprError> {
        let mut items = vec![self.cond_atom()?];
        while self.eat_word("and") {
            items.push(self.cond_atom()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Cond::And(items) })
    }

    fn cond_atom(&mut self) -> Result<Cond, ExprError> {
        for (word, odd) in [("odd", true), ("even", false)] {
            if self.eat_word(word) {
                self.expect("(")?;
                let e = self.expr(false)?.scalar(self)?;
                self.expect(")")?;
                return Ok(if odd { Cond::Odd(e) } else { Cond::Even(e) });
            }
        }
        let first = self.expr(false)?.scalar(self)?;
        if self.eat("|") {
            let b = self.expr(false)?.scalar(self)?;
            return Ok(Cond::Divides(first, b));
        }
        if self.eat("!|") {
            let b = self.expr(false)?.scalar(self)?;
            return Ok(Cond::NotDivides(first, b));
        }
        let mut rest = Vec::new();
        loop {
            let op = match self.peek() {
                Some(Tok::Sym("=")) => Cmp::Eq,
                Some(Tok::Sym("!=")) => Cmp::Ne,
                Some(Tok::Sym("<")) => Cmp::Lt,
                Some(Tok::Sym("<=")) => Cmp::Le,
                Some(Tok::Sym(">")) => Cmp::Gt,
                Some(Tok::Sym(">=")) => Cmp::Ge,
                _ => break,
            };
            self.pos += 1;
            rest.push((op, self.expr(false)?.scalar(self)?));
        }
        if rest.is_empty() {
            return self.err("expected a comparison, `|`, `!|`, odd(..) or even(..)");
        }
        Ok(Cond::Chain(first, rest))
    }
}

// Expression tree during parsing: weight atoms may still be present.
enum LinExpr {
    Scalar(Expr),
    W(Expr),
    Neg(Box<LinExpr>),
    Bin(Op, Box<LinExpr>, Box<LinExpr>),
}

impl LinExpr {
    fn bin(op: Op, a: LinExpr, b: LinExpr) -> LinExpr {
        match (a, b) {
            (LinExpr::Scalar(x), LinExpr::Scalar(y)) => LinExpr::Scalar(Expr::Bin(op, Box::new(x), Box::new(y))),
            (a, b) => LinExpr::Bin(op, Box::new(a), Box::new(b)),
        }
    }

    fn scalar(self, p: &Parser) -> Result<Expr, ExprError> {
        match self {
            LinExpr::Scalar(e) => Ok(e),
            _ => p.err("weight symbol in scalar position"),
        }
    }

    fn linearize(self, p: &Parser) -> Result<Vec<(Expr, Expr)>, ExprError> {
        Ok(match self {
            LinExpr::Scalar(Expr::Num(0)) => Vec::new(),
            LinExpr::Scalar(_) => return p.err("constant term in a weight pattern"),
            LinExpr::W(i) => vec![(Expr::Num(1), i)],
            LinExpr::Neg(e) => e.linearize(p)?.into_iter().map(|(c, i)| (negate(c), i)).collect(),
            LinExpr::Bin(Op::Add, a, b) => {
                let mut v = a.linearize(p)?;
                v.extend(b.linearize(p)?);
                v
            }
            LinExpr::Bin(Op::Sub, a, b) => {
                let mut v = a.linearize(p)?;
                v.extend(b.linearize(p)?.into_iter().map(|(c, i)| (negate(c), i)));
                v
            }
            LinExpr::Bin(Op::Mul, a, b) => match (*a, *b) {
                (LinExpr::Scalar(k), w) | (w, LinExpr::Scalar(k)) => {
                    w.linearize(p)?.into_iter().map(|(c, i)| (scale(k.clone(), c), i)).collect()
                }
                _ => return p.err("product of two weights"),
            },
            LinExpr::Bin(..) => return p.err("only +, - and scalar * apply to weights"),
        })
    }
}

fn negate(c: Expr) -> Expr {
    match c {
        Expr::Num(k) => Expr::Num(-k),
        other => Expr::Neg(Box::new(other)),
    }
}

fn scale(k: Expr, c: Expr) -> Expr {
    if c == Expr::Num(1) {
        k
    } else {
        Expr::Bin(Op::Mul, Box::new(k), Box::new(c))
    }
}

pub fn parse_expr(s: &str) -> Result<Expr, ExprError> {
    let mut p = Parser::new(s)?;
    let e = p.expr(false)?.scalar(&p)?;
    p.done()?;
    Ok(e)
}

/// Top-level comma-separated clauses; `-` is the empty list.
pub fn parse_conditions(s: &str) -> Result<Vec<Cond>, ExprError> {
    if s.trim() == "-" {
        return Ok(Vec::new());
    }
    let mut p = Parser::new(s)?;
    let c = p.cond_list()?;
    p.done()?;
    Ok(c)
}

pub fn parse_condition(s: &str) -> Result<Cond, ExprError> {
    let mut p = Parser::new(s)?;
    let c = p.implication()?;
    p.done()?;
    Ok(c)
}

pub fn parse_weight_pattern(s: &str) -> Result<WeightPattern, ExprError> {
    let mut p = Parser::new(s)?;
    let e = p.expr(true)?;
    p.done()?;
    Ok(WeightPattern { terms: e.linearize(&p)? })
}

pub fn write_conditions(cs: &[Cond]) -> String {
    if cs.is_empty() {
        return "-".to_string();
    }
    cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, i64)]) -> Binding {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn expression_printing_is_stable() {
        for s in ["n+1", "(n+1)/2", "2^n", "(p^n-1)/2", "n-gcd(2,n)", "binom(n+1,(n+1)/2)", "n*(p-1)/2", "p-1-c", "2*n+1"] {
            let e = parse_expr(s).unwrap();
            assert_eq!(e.to_string(), s);
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn weight_patterns() {
        let w = parse_weight_pattern("(p-1)/2*(w(n/2) + w((n+2)/2))").unwrap();
        assert_eq!(w.to_string(), "(p-1)/2*w(n/2) + (p-1)/2*w((n+2)/2)");
        let w = parse_weight_pattern("c*wi + (p-1-c)*w(i+1)").unwrap();
        assert_eq!(w.to_string(), "c*wi + (p-1-c)*w(i+1)");
        let got = w.instantiate(4, &env(&[("c", 2), ("i", 2)]), PVal::Prime(5)).unwrap();
        assert_eq!(got, Some(vec![0, 2, 2, 0]));
        assert_eq!(parse_weight_pattern("0").unwrap().terms.len(), 0);
        assert!(parse_weight_pattern("w1*w2").is_err());
    }

    #[test]
    fn characteristic_zero_reading() {
        let e = Binding::new();
        let t = |s: &str| parse_condition(s).unwrap().eval(&env(&[("n", 4), ("a", 9)]), PVal::Infinite).unwrap();
        assert!(t("p>3"));
        assert!(t("p!=5"));
        assert!(!t("p=2"));
        assert!(t("1<=a<p"));
        assert!(!t("p|n+1"));
        assert!(t("p!|n"));
        assert!(t("n!=2 or p!=3"));
        assert!(!t("odd((n+1)/2)"));
        assert!(parse_condition("p-1>2").unwrap().eval(&e, PVal::Infinite).is_err());
    }

    #[test]
    fn condition_printing() {
        let s = "1<=i<n, 0<=c<=p-1, even(n) and 2*i=n -> 2*c!=p-1, n%4=1 or n%4=2, p!|n+1";
        let cs = parse_conditions(s).unwrap();
        assert_eq!(write_conditions(&cs), s);
        assert!(parse_conditions("p=2").unwrap()[0].pins_p());
        assert!(!parse_conditions("p>2").unwrap()[0].pins_p());
    }
}
