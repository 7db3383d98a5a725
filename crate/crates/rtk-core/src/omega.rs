//! Membership in Ω₁ (all weights of multiplicity 1) and Ω₂ (all nonzero
//! weights of multiplicity 1), the reduction of arbitrary dominant weights
//! to those sets, and regular tori and regular elements in the classical
//! overgroup.
//!
//! Membership of p-restricted weights is read from the tables. In
//! characteristic 0 the regular torus verdict is computed from the
//! Freudenthal weight multiset instead; the tables are only used to
//! cross-check it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::{decide_overgroup_in, ClassicalOvergroup, FormError, Series};
use crate::roots::{Family, RootDatum, RootError, SimpleType, Weight};
use crate::tables::{to_pval, PayloadValue, RowId, TableError, TableId, TableStore};
use crate::weights::{weight_multiset, Characteristic, WeightError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmegaError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("{lambda} is not {p}-restricted")]
    NotPRestricted { lambda: Weight, p: u64 },
    #[error("p-adic decomposition needs p > 0")]
    CharZero,
    #[error("type B in characteristic 2 is not treated")]
    TypeBCharTwo,
    #[error("malformed torus element: {0}")]
    MalformedElement(String),
}

pub type Result<T> = std::result::Result<T, OmegaError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaVerdict {
    pub in_omega1: bool,
    pub in_omega2: bool,
    pub table_row: Option<RowId>,
    /// Zero weight multiplicity for weights in Ω₂ \ Ω₁, with known
    /// corrections applied.
    pub zero_mult: Option<BigInt>,
    /// The same value as printed in the table, when it differs.
    pub printed_zero_mult: Option<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwistVerdict {
    AllMultOne,
    /// `λ = p^k μ` with μ in Ω₂ \ Ω₁.
    ZeroMultOnlyException { k: u32, mu: Weight },
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegularityReason {
    AllMultOne,
    DTypeZeroMultTwo,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityVerdict {
    pub overgroup: ClassicalOvergroup,
    pub contains_regular_torus: bool,
    pub reason: RegularityReason,
}

/// Table lookups against one store. The free functions of this module use
/// the built-in store.
#[derive(Debug, Clone, Copy)]
pub struct Classifier<'a> {
    store: &'a TableStore,
}

impl Default for Classifier<'static> {
    fn default() -> Self {
        Classifier { store: TableStore::builtin() }
    }
}

fn reject_b2(ty: SimpleType, p: Characteristic) -> Result<()> {
    if ty.family() == Family::B && p.p() == 2 {
        return Err(OmegaError::TypeBCharTwo);
    }
    Ok(())
}

fn restricted(d: &RootDatum, lambda: &Weight, p: Characteristic) -> Result<()> {
    d.check_dominant(lambda)?;
    if !lambda.is_p_restricted(p.p()) {
        return Err(OmegaError::NotPRestricted { lambda: lambda.clone(), p: p.p() });
    }
    reject_b2(d.simple_type(), p)
}

/// `λ = Σ p^i λ_i` with every `λ_i` p-restricted; trailing zero digits dropped.
pub fn p_adic_digits(lambda: &Weight, p: u64) -> Result<Vec<Weight>> {
    if p == 0 {
        return Err(OmegaError::CharZero);
    }
    if !lambda.is_dominant() {
        return Err(RootError::NotDominant(lambda.clone()).into());
    }
    let p = p as i64;
    let mut rest: Vec<i64> = lambda.coords().to_vec();
    let mut out = Vec::new();
    while rest.iter().any(|&c| c != 0) {
        out.push(Weight::new(rest.iter().map(|c| c % p).collect()));
        rest.iter_mut().for_each(|c| *c /= p);
    }
    Ok(out)
}

impl<'a> Classifier<'a> {
    pub fn new(store: &'a TableStore) -> Self {
        Classifier { store }
    }

    pub fn store(&self) -> &'a TableStore {
        self.store
    }

    /// The zero weight is counted as a member: its module has one weight.
    pub fn omega1_membership(&self, ty: SimpleType, lambda: &Weight, p: Characteristic) -> Result<bool> {
        let d = RootDatum::new(ty);
        restricted(&d, lambda, p)?;
        Ok(lambda.is_zero() || self.store.find(TableId::T1, ty, lambda, p)?.is_some())
    }

    pub fn omega2_membership(&self, ty: SimpleType, lambda: &Weight, p: Characteristic) -> Result<OmegaVerdict> {
        let d = RootDatum::new(ty);
        restricted(&d, lambda, p)?;
        let mut v = OmegaVerdict { in_omega1: false, in_omega2: false, table_row: None, zero_mult: None, printed_zero_mult: None };
        if lambda.is_zero() {
            v.in_omega1 = true;
            v.in_omega2 = true;
            return Ok(v);
        }
        if let Some(m) = self.store.find(TableId::T1, ty, lambda, p)? {
            v.in_omega1 = true;
            v.in_omega2 = true;
            v.table_row = Some(m.id);
            return Ok(v);
        }
        if let Some(m) = self.store.find(TableId::T2, ty, lambda, p)? {
            let pv = to_pval(p);
            v.in_omega2 = true;
            v.table_row = Some(m.id);
            if let PayloadValue::Zero(z) = m.corrected_payload(pv)? {
                v.zero_mult = Some(z);
            }
            if let PayloadValue::Zero(z) = m.payload(pv)? {
                if v.zero_mult.as_ref() != Some(&z) {
                    v.printed_zero_mult = Some(z);
                }
            }
        }
        Ok(v)
    }

    /// All weights of `L(λ)` have multiplicity 1, for λ not necessarily
    /// p-restricted: every p-adic digit lies in Ω₁ and no forbidden pair of
    /// consecutive digits occurs.
    pub fn omega1_nonrestricted(&self, ty: SimpleType, lambda: &Weight, p: Characteristic) -> Result<bool> {
        if p.is_zero() {
            return Err(OmegaError::CharZero);
        }
        let d = RootDatum::new(ty);
        d.check_dominant(lambda)?;
        reject_b2(ty, p)?;
        let digits = p_adic_digits(lambda, p.p())?;
        for mu in &digits {
            if !mu.is_zero() && self.store.find(TableId::T1, ty, mu, p)?.is_none() {
                return Ok(false);
            }
        }
        let n = ty.rank();
        let fw = |i| Weight::fundamental(n, i);
        let forbidden: Vec<(Weight, Weight)> = match (ty.family(), p.p()) {
            (Family::C, 2) => vec![(fw(n), fw(1))],
            (Family::G, 2) => vec![(fw(1), fw(1))],
            (Family::G, 3) => vec![(fw(2), fw(1))],
            _ => vec![],
        };
        Ok(!digits.windows(2).any(|w| forbidden.iter().any(|(a, b)| *a == w[0] && *b == w[1])))
    }

    pub fn twisted_weight_verdict(&self, ty: SimpleType, lambda: &Weight, p: Characteristic) -> Result<TwistVerdict> {
        let d = RootDatum::new(ty);
        d.check_dominant(lambda)?;
        reject_b2(ty, p)?;
        if p.is_zero() {
            let v = self.omega2_membership(ty, lambda, p)?;
            return Ok(if v.in_omega1 {
                TwistVerdict::AllMultOne
            } else if v.in_omega2 {
                TwistVerdict::ZeroMultOnlyException { k: 0, mu: lambda.clone() }
            } else {
                TwistVerdict::Neither
            });
        }
        if self.omega1_nonrestricted(ty, lambda, p)? {
            return Ok(TwistVerdict::AllMultOne);
        }
        let digits = p_adic_digits(lambda, p.p())?;
        let nonzero: Vec<usize> = (0..digits.len()).filter(|&i| !digits[i].is_zero()).collect();
        if let [k] = nonzero[..] {
            let mu = &digits[k];
            let v = self.omega2_membership(ty, mu, p)?;
            if v.in_omega2 && !v.in_omega1 {
                return Ok(TwistVerdict::ZeroMultOnlyException { k: k as u32, mu: mu.clone() });
            }
        }
        Ok(TwistVerdict::Neither)
    }

    /// Does the image of `G` in its minimal classical overgroup contain a
    /// regular torus of that group?
    ///
    /// In characteristic 0 the multiplicities come from the Freudenthal
    /// multiset. For p > 0 they are read from the tables, and a Frobenius
    /// twist `p^k μ` is reduced to μ.
    pub fn regular_torus_verdict(&self, ty: SimpleType, lambda: &Weight, p: Characteristic) -> Result<RegularityVerdict> {
        let d = RootDatum::new(ty);
        d.check_dominant(lambda)?;
        reject_b2(ty, p)?;
        if lambda.is_zero() {
            return Err(FormError::TrivialModule.into());
        }
        let lambda = if p.is_zero() {
            lambda.clone()
        } else {
            let digits = p_adic_digits(lambda, p.p())?;
            let mut nz = digits.into_iter().filter(|w| !w.is_zero());
            match (nz.next(), nz.next()) {
                (Some(mu), None) => mu,
                _ => return Err(OmegaError::NotPRestricted { lambda: lambda.clone(), p: p.p() }),
            }
        };
        let (_, overgroup) = decide_overgroup_in(&d, &lambda, p, self.store)?;
        let (all_one, zero_two) = if p.is_zero() {
            let ms = weight_multiset(&d, &lambda)?;
            (ms.all_multiplicities_one(), ms.nonzero_multiplicities_one() && ms.zero_multiplicity() == BigInt::from(2))
        } else {
            let v = self.omega2_membership(ty, &lambda, p)?;
            (v.in_omega1, v.in_omega2 && !v.in_omega1 && v.zero_mult == Some(BigInt::from(2)))
        };
        let reason = if all_one {
            RegularityReason::AllMultOne
        } else if zero_two && overgroup.series == Series::SOEven {
            RegularityReason::DTypeZeroMultTwo
        } else {
            RegularityReason::Fails
        };
        Ok(RegularityVerdict { overgroup, contains_regular_torus: reason != RegularityReason::Fails, reason })
    }

    /// The first row of the tables listing modules whose image contains a
    /// regular torus of the classical overgroup, if any.
    pub fn regular_torus_table_row(&self, ty: SimpleType, lambda: &Weight, p: Characteristic) -> Result<Option<RowId>> {
        let tables: &[TableId] = if p.p() == 2 {
            &[TableId::T6, TableId::T7, TableId::T8]
        } else {
            &[TableId::T3, TableId::T4, TableId::T5, TableId::T6]
        };
        for &t in tables {
            if let Some(m) = self.store.find(t, ty, lambda, p)? {
                return Ok(Some(m.id));
            }
        }
        Ok(None)
    }

    /// Simple subgroups of `H` containing a regular unipotent element of `H`,
    /// including the principal `A1` when `p = 0` or `p ≥ h`.
    pub fn regular_unipotent_pairs(&self, h: SimpleType, p: Characteristic) -> Result<Vec<SimpleType>> {
        let mut out: Vec<SimpleType> = Vec::new();
        for (_, groups) in self.store.subgroups(TableId::TPAIRS, h, p)? {
            for g in groups {
                if !out.contains(&g) {
                    out.push(g);
                }
            }
        }
        let cox = RootDatum::new(h).coxeter_number();
        let a1 = SimpleType::new(Family::A, 1)?;
        if (p.is_zero() || p.p() >= cox) && !out.contains(&a1) {
            out.push(a1);
        }
        Ok(out)
    }
}

pub fn omega1_membership(ty: SimpleType, lambda: &Weight, p: Characteristic) -> Result<bool> {
    Classifier::default().omega1_membership(ty, lambda, p)
}

pub fn omega2_membership(ty: SimpleType, lambda: &Weight, p: Characteristic) -> Result<OmegaVerdict> {
    Classifier::default().omega2_membership(ty, lambda, p)
}

pub fn omega1_nonrestricted(ty: SimpleType, lambda: &Weight, p: Characteristic) -> Result<bool> {
    Classifier::default().omega1_nonrestricted(ty, lambda, p)
}

pub fn twisted_weight_verdict(ty: SimpleType, lambda: &Weight, p: Characteristic) -> Result<TwistVerdict> {
    Classifier::default().twisted_weight_verdict(ty, lambda, p)
}

pub fn regular_torus_verdict(ty: SimpleType, lambda: &Weight, p: Characteristic) -> Result<RegularityVerdict> {
    Classifier::default().regular_torus_verdict(ty, lambda, p)
}

pub fn regular_unipotent_pairs(h: SimpleType, p: Characteristic) -> Result<Vec<SimpleType>> {
    Classifier::default().regular_unipotent_pairs(h, p)
}

/// Intermediate subgroups between the image of `G` and its classical
/// overgroup, for the known non-maximal cases. `None` when the image is
/// maximal or the case is not listed.
pub fn maximality_exceptions(ty: SimpleType, lambda: &Weight, p: Characteristic) -> Result<Option<Vec<SimpleType>>> {
    RootDatum::new(ty).check_dominant(lambda)?;
    let n = ty.rank();
    let q = p.p();
    let is = |i: usize, a: i64| *lambda == Weight::fundamental(n, i).scale(a);
    let t = |f, r| SimpleType::new(f, r);
    let out = match ty.family() {
        Family::A if n == 1 && is(1, 6) && (q == 0 || q >= 7) => vec![t(Family::G, 2)?],
        Family::A if n == 2 && *lambda == Weight::new(vec![1, 1]) && q == 3 => vec![t(Family::G, 2)?],
        Family::A if n == 3 && *lambda == Weight::new(vec![1, 0, 1]) && q == 2 => vec![t(Family::C, 3)?],
        Family::B if is(n, 1) && q != 2 => vec![t(Family::D, n + 1)?],
        Family::C if is(n, 1) && q == 2 => vec![t(Family::D, n + 1)?],
        Family::D if n == 4 && is(2, 1) && q == 2 => vec![t(Family::C, 4)?, t(Family::F, 4)?],
        Family::G if is(2, 1) && q == 2 => vec![t(Family::C, 3)?],
        _ => return Ok(None),
    };
    Ok(Some(out))
}

/// A nonzero complex number `r·e^{2πiθ}` with `r` positive rational and θ
/// rational modulo 1. Products, inverses and equality are exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Eigenvalue {
    modulus: BigRational,
    turn: Rational64,
}

fn reduce_turn(t: Rational64) -> Rational64 {
    t - t.floor()
}

impl Eigenvalue {
    pub fn new(modulus: BigRational, turn: Rational64) -> Result<Self> {
        if !modulus.is_positive() {
            return Err(OmegaError::MalformedElement(format!("modulus {modulus} is not positive")));
        }
        Ok(Eigenvalue { modulus, turn: reduce_turn(turn) })
    }

    pub fn one() -> Self {
        Eigenvalue { modulus: BigRational::one(), turn: Rational64::zero() }
    }

    pub fn integer(n: i64) -> Result<Self> {
        let half = if n < 0 { Rational64::new(1, 2) } else { Rational64::zero() };
        Eigenvalue::new(BigRational::from_integer(BigInt::from(n.abs())), half)
    }

    /// `e^{2πi a/b}`.
    pub fn root_of_unity(a: i64, b: i64) -> Result<Self> {
        if b == 0 {
            return Err(OmegaError::MalformedElement("zero denominator".into()));
        }
        Eigenvalue::new(BigRational::one(), Rational64::new(a, b))
    }

    pub fn modulus(&self) -> &BigRational {
        &self.modulus
    }

    pub fn turn(&self) -> Rational64 {
        self.turn
    }

    pub fn is_one(&self) -> bool {
        self.modulus.is_one() && self.turn.is_zero()
    }

    pub fn mul(&self, o: &Eigenvalue) -> Eigenvalue {
        Eigenvalue { modulus: &self.modulus * &o.modulus, turn: reduce_turn(self.turn + o.turn) }
    }

    pub fn inv(&self) -> Eigenvalue {
        Eigenvalue { modulus: self.modulus.recip(), turn: reduce_turn(-self.turn) }
    }

    pub fn div(&self, o: &Eigenvalue) -> Eigenvalue {
        self.mul(&o.inv())
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.turn.is_zero() {
            write!(f, "{}", self.modulus)
        } else if self.turn == Rational64::new(1, 2) {
            write!(f, "-{}", self.modulus)
        } else if self.modulus.is_one() {
            write!(f, "e({})", self.turn)
        } else {
            write!(f, "{}*e({})", self.modulus, self.turn)
        }
    }
}

/// Accepts `3`, `-1/2`, `e(1/3)`, `2*e(-1/4)` and `-e(1/6)`.
impl FromStr for Eigenvalue {
    type Err = OmegaError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || OmegaError::MalformedElement(format!("cannot read eigenvalue `{s}`"));
        let t = s.trim();
        let (neg, t) = match t.strip_prefix('-') {
            Some(r) => (true, r.trim()),
            None => (false, t),
        };
        let (modulus, turn) = match t.find("e(") {
            Some(pos) => {
                let inner = t[pos + 2..].strip_suffix(')').ok_or_else(bad)?;
                let turn: Rational64 = inner.trim().parse().map_err(|_| bad())?;
                let head = t[..pos].trim();
                let m = if head.is_empty() {
                    BigRational::one()
                } else {
                    head.strip_suffix('*').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?
                };
                (m, turn)
            }
            None => (t.parse().map_err(|_| bad())?, Rational64::zero()),
        };
        let turn = if neg { turn + Rational64::new(1, 2) } else { turn };
        Eigenvalue::new(modulus, turn)
    }
}

/// `diag(t_1, …, t_m, x, t_m⁻¹, …, t_1⁻¹)` in the natural module of a group
/// of type B, C or D; `x = 1` is present only for type B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusElement {
    pub entries: Vec<Eigenvalue>,
    pub central: Option<Eigenvalue>,
}

impl TorusElement {
    pub fn new(entries: Vec<Eigenvalue>) -> Self {
        TorusElement { entries, central: None }
    }

    fn check(&self, ty: SimpleType) -> Result<()> {
        let bad = |m: String| Err(OmegaError::MalformedElement(m));
        if !matches!(ty.family(), Family::B | Family::C | Family::D) {
            return bad(format!("{ty} is not of type B, C or D"));
        }
        if self.entries.len() != ty.rank() {
            return bad(format!("{} entries for rank {}", self.entries.len(), ty.rank()));
        }
        match (&self.central, ty.family()) {
            (Some(x), Family::B) if !x.is_one() => bad(format!("central entry {x} must be 1")),
            (Some(_), Family::C | Family::D) => bad(format!("{ty} has an even-dimensional natural module")),
            _ => Ok(()),
        }
    }

    /// All eigenvalues on the natural module.
    pub fn eigenvalues(&self, ty: SimpleType) -> Result<Vec<Eigenvalue>> {
        self.check(ty)?;
        let mut v = self.entries.clone();
        if ty.family() == Family::B {
            v.push(Eigenvalue::one());
        }
        v.extend(self.entries.iter().rev().map(|t| t.inv()));
        Ok(v)
    }

    /// Values of the roots of the group on this element.
    pub fn root_values(&self, ty: SimpleType) -> Result<Vec<Eigenvalue>> {
        self.check(ty)?;
        let t = &self.entries;
        let mut out = Vec::new();
        for i in 0..t.len() {
            for j in 0..t.len() {
                if i != j {
                    out.push(t[i].div(&t[j]));
                    if i < j {
                        out.push(t[i].mul(&t[j]));
                    }
                }
            }
            match ty.family() {
                Family::B => out.push(t[i].clone()),
                Family::C => out.push(t[i].mul(&t[i])),
                _ => {}
            }
        }
        Ok(out)
    }
}

/// `(regular in H, regular in GL(V))` for the natural module V of H.
pub fn element_regularity(ty: SimpleType, t: &TorusElement) -> Result<(bool, bool)> {
    let in_h = t.root_values(ty)?.iter().all(|v| !v.is_one());
    let mut ev = t.eigenvalues(ty)?;
    let n = ev.len();
    ev.sort();
    ev.dedup();
    Ok((in_h, ev.len() == n))
}
