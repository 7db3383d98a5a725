//! Self-duality, symplectic versus orthogonal type, and the smallest
//! classical group containing the image of an irreducible representation.
//!
//! Away from characteristic 2 the form type is computed from the parity of
//! `<λ, 2ρ∨>`; the tables are never consulted for it. In characteristic 2 the
//! answer comes from the orthogonal table (`T8`) inside the domain where that
//! table is complete, and is an error outside it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::roots::{rational_inverse, Family, RootDatum, RootError, SimpleType, Weight};
use crate::tables::{PayloadValue, TableError, TableId, TableStore};
use crate::weights::{subdominant_weights, weyl_dimension, Characteristic, WeightError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("{lambda} is not self-dual for {ty}")]
    NotSelfDual { ty: SimpleType, lambda: Weight },
    #[error("{ty} {lambda} is outside the domain of the characteristic-2 quadratic form table: {reason}")]
    OutOfTableDomain { ty: SimpleType, lambda: Weight, reason: String },
    #[error("dimension of L({lambda}) for {ty} in characteristic {p} is not available")]
    UnsupportedCharPDimension { ty: SimpleType, lambda: Weight, p: u64 },
    #[error("{lambda} is not {p}-restricted")]
    NotPRestricted { lambda: Weight, p: u64 },
    #[error("the zero weight gives the trivial 1-dimensional module")]
    TrivialModule,
    #[error("type B in characteristic 2 is not treated")]
    TypeBCharTwo,
    #[error("invalid case: {0}")]
    InvalidCase(String),
}

pub type Result<T> = std::result::Result<T, FormError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Indicator {
    Orthogonal,
    Symplectic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormType {
    NonSelfDual,
    Symplectic,
    OrthogonalOddDim,
    OrthogonalEvenDim,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormVerdict {
    pub self_dual: bool,
    pub form: FormType,
    /// Only set in characteristic 2.
    pub p2_quadratic: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Series {
    SL,
    Sp,
    SOOdd,
    SOEven,
}

impl std::fmt::Display for Series {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Series::SL => "SL",
            Series::Sp => "Sp",
            Series::SOOdd => "SO",
            Series::SOEven => "SO",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalOvergroup {
    pub series: Series,
    pub natural_dim: BigInt,
}

impl std::fmt::Display for ClassicalOvergroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}({})", self.series, self.natural_dim)
    }
}

/// Where a module dimension came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimensionSource {
    WeylFormula,
    /// Minuscule highest weight: a single Weyl orbit in every characteristic.
    Minuscule,
    /// `<λ+ρ, β∨> ≤ p` for every positive root β, so the Weyl module is simple.
    LowestAlcove,
    Table(String),
}

pub fn is_self_dual(d: &RootDatum, lambda: &Weight) -> Result<bool> {
    d.check_dominant(lambda)?;
    Ok(d.longest_element_action(lambda) == *lambda)
}

/// `<λ, 2ρ∨>`, the sum of `<λ, α∨>` over positive roots α.
pub fn coroot_sum_pairing(d: &RootDatum, lambda: &Weight) -> i64 {
    d.positive_roots().iter().map(|a| d.coroot_pairing(lambda, a)).sum()
}

pub fn steinberg_indicator(d: &RootDatum, lambda: &Weight) -> Result<Indicator> {
    if !is_self_dual(d, lambda)? {
        return Err(FormError::NotSelfDual { ty: d.simple_type(), lambda: lambda.clone() });
    }
    Ok(if coroot_sum_pairing(d, lambda).rem_euclid(2) == 1 { Indicator::Symplectic } else { Indicator::Orthogonal })
}

/// Whether λ lies in the root lattice, by solving `λ = Σ c_i α_i` over ℚ.
pub fn in_root_lattice(d: &RootDatum, lambda: &Weight) -> bool {
    let inv = rational_inverse(d.cartan()).expect("Cartan matrices are invertible");
    let r = d.rank();
    (0..r).all(|j| {
        let c: num_rational::Rational64 = (0..r).map(|i| inv[i][j] * lambda.coords()[i]).sum();
        c.is_integer()
    })
}

pub fn is_minuscule(d: &RootDatum, lambda: &Weight) -> Result<bool> {
    if lambda.is_zero() {
        return Ok(false);
    }
    Ok(subdominant_weights(d, lambda)?.len() == 1)
}

/// Largest `<λ+ρ, β∨>` over positive roots β.
pub fn alcove_height(d: &RootDatum, lambda: &Weight) -> i64 {
    let shifted = lambda + &d.rho();
    d.positive_roots().iter().map(|a| d.coroot_pairing(&shifted, a)).max().unwrap_or(0)
}

const DIMENSION_TABLES: [TableId; 6] = [TableId::T3, TableId::T4, TableId::T5, TableId::T7, TableId::T8, TableId::TM2];

/// Dimension of the irreducible module `L(λ)` in characteristic p.
///
/// Characteristic 0 uses the Weyl formula. For p > 0 the weight must be
/// p-restricted and the dimension is only returned when it is forced: a
/// minuscule weight, a weight in the closure of the lowest alcove, or a
/// table row stating a number.
pub fn module_dimension(d: &RootDatum, lambda: &Weight, p: Characteristic, store: &TableStore) -> Result<(BigInt, DimensionSource)> {
    d.check_dominant(lambda)?;
    if p.is_zero() {
        return Ok((weyl_dimension(d, lambda)?, DimensionSource::WeylFormula));
    }
    if !lambda.is_p_restricted(p.p()) {
        return Err(FormError::NotPRestricted { lambda: lambda.clone(), p: p.p() });
    }
    if lambda.is_zero() || is_minuscule(d, lambda)? {
        return Ok((weyl_dimension(d, lambda)?, DimensionSource::Minuscule));
    }
    if alcove_height(d, lambda) <= p.p() as i64 {
        return Ok((weyl_dimension(d, lambda)?, DimensionSource::LowestAlcove));
    }
    let ty = d.simple_type();
    for t in DIMENSION_TABLES {
        for m in store.find_all(t, ty, lambda, p)? {
            if let PayloadValue::Dim(n) = m.payload(crate::tables::to_pval(p))? {
                return Ok((n, DimensionSource::Table(m.id.to_string())));
            }
        }
    }
    Err(FormError::UnsupportedCharPDimension { ty, lambda: lambda.clone(), p: p.p() })
}

/// In characteristic 2: does `L(λ)` carry a non-degenerate invariant
/// quadratic form? Defined for self-dual weights in Ω₂ whose zero weight
/// has multiplicity at most 2.
pub fn p2_quadratic_form_exists(ty: SimpleType, lambda: &Weight) -> Result<bool> {
    p2_quadratic_form_exists_in(ty, lambda, TableStore::builtin())
}

pub fn p2_quadratic_form_exists_in(ty: SimpleType, lambda: &Weight, store: &TableStore) -> Result<bool> {
    let d = RootDatum::new(ty);
    d.check_dominant(lambda)?;
    if ty.family() == Family::B {
        return Err(FormError::TypeBCharTwo);
    }
    let out = |reason: &str| FormError::OutOfTableDomain { ty, lambda: lambda.clone(), reason: reason.to_string() };
    if lambda.is_zero() {
        return Err(out("trivial module"));
    }
    if !lambda.is_p_restricted(2) {
        return Err(out("not 2-restricted"));
    }
    if d.longest_element_action(lambda) != *lambda {
        return Err(out("not self-dual"));
    }
    let two = Characteristic::new(2).expect("2 is prime");
    let in_omega1 = store.find(TableId::T1, ty, lambda, two)?.is_some();
    if !in_omega1 {
        let Some(m) = store.find(TableId::T2, ty, lambda, two)? else {
            return Err(out("not in Ω₂"));
        };
        match m.corrected_payload(crate::tables::PVal::Prime(2))? {
            PayloadValue::Zero(z) if z <= BigInt::from(2) => {}
            _ => return Err(out("zero weight multiplicity above 2")),
        }
    }
    Ok(store.find(TableId::T8, ty, lambda, two)?.is_some())
}

pub fn decide_overgroup(d: &RootDatum, lambda: &Weight, p: Characteristic) -> Result<(FormVerdict, ClassicalOvergroup)> {
    decide_overgroup_in(d, lambda, p, TableStore::builtin())
}

pub fn decide_overgroup_in(
    d: &RootDatum,
    lambda: &Weight,
    p: Characteristic,
    store: &TableStore,
) -> Result<(FormVerdict, ClassicalOvergroup)> {
    d.check_dominant(lambda)?;
    if lambda.is_zero() {
        return Err(FormError::TrivialModule);
    }
    if p.p() == 2 && d.simple_type().family() == Family::B {
        return Err(FormError::TypeBCharTwo);
    }
    let (dim, _) = module_dimension(d, lambda, p, store)?;
    let self_dual = is_self_dual(d, lambda)?;
    let odd = dim.is_odd();
    let orthogonal = |q: Option<bool>| {
        let (form, series) =
            if odd { (FormType::OrthogonalOddDim, Series::SOOdd) } else { (FormType::OrthogonalEvenDim, Series::SOEven) };
        (FormVerdict { self_dual: true, form, p2_quadratic: q }, series)
    };
    let (verdict, series) = if !self_dual {
        let q = (p.p() == 2).then_some(false);
        (FormVerdict { self_dual: false, form: FormType::NonSelfDual, p2_quadratic: q }, Series::SL)
    } else if p.p() == 2 {
        if p2_quadratic_form_exists_in(d.simple_type(), lambda, store)? {
            orthogonal(Some(true))
        } else {
            (FormVerdict { self_dual: true, form: FormType::Symplectic, p2_quadratic: Some(false) }, Series::Sp)
        }
    } else {
        match steinberg_indicator(d, lambda)? {
            Indicator::Symplectic => (FormVerdict { self_dual: true, form: FormType::Symplectic, p2_quadratic: None }, Series::Sp),
            Indicator::Orthogonal => orthogonal(None),
        }
    };
    Ok((verdict, ClassicalOvergroup { series, natural_dim: dim }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HalfSpinBranch {
    /// `((p-1)/2) ω_n`
    Lambda1,
    /// `ω_{n-1} + ((p-3)/2) ω_n`
    Lambda2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosedFormCase {
    /// Type A_n, p odd, `(p-1) ω_{(n+1)/2}` (n odd) or
    /// `((p-1)/2)(ω_{n/2} + ω_{n/2+1})` (n even).
    SelfDualAlcove { n: usize, p: u64 },
    /// Type A_n, n odd, `ω_{(n+1)/2}`.
    MiddleExteriorPower { n: usize },
    /// Type C_n, n > 1, p odd.
    SymplecticHalfSpin { n: usize, p: u64, branch: HalfSpinBranch },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosedFormValue {
    OddDimension,
    Dim(BigInt),
}

fn odd_prime(p: u64) -> Result<()> {
    match Characteristic::new(p) {
        Ok(c) if !c.is_zero() && p > 2 => Ok(()),
        _ => Err(FormError::InvalidCase(format!("p = {p} is not an odd prime"))),
    }
}

impl ClosedFormCase {
    pub fn simple_type(&self) -> Result<SimpleType> {
        let (fam, n) = match *self {
            ClosedFormCase::SelfDualAlcove { n, .. } | ClosedFormCase::MiddleExteriorPower { n } => (Family::A, n),
            ClosedFormCase::SymplecticHalfSpin { n, .. } => (Family::C, n),
        };
        SimpleType::new(fam, n).map_err(|e| FormError::InvalidCase(e.to_string()))
    }

    /// The highest weight the case is about.
    pub fn weight(&self) -> Result<Weight> {
        self.validate()?;
        Ok(match *self {
            ClosedFormCase::SelfDualAlcove { n, p } => {
                let mut v = vec![0i64; n];
                if n % 2 == 1 {
                    v[(n + 1) / 2 - 1] = p as i64 - 1;
                } else {
                    v[n / 2 - 1] = (p as i64 - 1) / 2;
                    v[n / 2] = (p as i64 - 1) / 2;
                }
                Weight::new(v)
            }
            ClosedFormCase::MiddleExteriorPower { n } => Weight::fundamental(n, (n + 1) / 2),
            ClosedFormCase::SymplecticHalfSpin { n, p, branch } => {
                let mut v = vec![0i64; n];
                match branch {
                    HalfSpinBranch::Lambda1 => v[n - 1] = (p as i64 - 1) / 2,
                    HalfSpinBranch::Lambda2 => {
                        v[n - 2] = 1;
                        v[n - 1] = (p as i64 - 3) / 2;
                    }
                }
                Weight::new(v)
            }
        })
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ClosedFormCase::SelfDualAlcove { n, p } => {
                if n == 0 {
                    return Err(FormError::InvalidCase("rank 0".into()));
                }
                odd_prime(p)
            }
            ClosedFormCase::MiddleExteriorPower { n } => {
                if n % 2 == 0 {
                    return Err(FormError::InvalidCase(format!("n = {n} must be odd")));
                }
                Ok(())
            }
            ClosedFormCase::SymplecticHalfSpin { n, p, .. } => {
                if n < 2 {
                    return Err(FormError::InvalidCase(format!("n = {n} must exceed 1")));
                }
                odd_prime(p)
            }
        }
    }
}

pub fn closed_form_dimension(case: ClosedFormCase) -> Result<ClosedFormValue> {
    case.validate()?;
    Ok(match case {
        ClosedFormCase::SelfDualAlcove { .. } => ClosedFormValue::OddDimension,
        ClosedFormCase::MiddleExteriorPower { n } => {
            let mut b = BigInt::one();
            let k = (n + 1) / 2;
            for j in 0..k {
                b = b * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
            }
            ClosedFormValue::Dim(b)
        }
        ClosedFormCase::SymplecticHalfSpin { n, p, branch } => {
            let pn: BigInt = num_traits::pow(BigInt::from(p), n);
            let num: BigInt = match branch {
                HalfSpinBranch::Lambda1 => pn + 1,
                HalfSpinBranch::Lambda2 => pn - 1,
            };
            let (q, r) = num.div_rem(&BigInt::from(2));
            debug_assert!(r.is_zero());
            ClosedFormValue::Dim(q)
        }
    })
}
