//! Root systems of the simple types in Bourbaki numbering.
//!
//! Weights are integer vectors on the fundamental weights. Roots are kept in
//! simple-root coordinates. The invariant form is carried as an integer
//! multiple of the normalized one (long roots of squared length 2); every
//! formula that consumes it is a ratio, so the multiple never matters.
//!
//! See `docs/conventions.md` at the repository root for the ambient
//! realizations.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("invalid rank {rank} for family {family}")]
    InvalidRank { family: Family, rank: usize },
    #[error("reflection index {index} outside 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("weight {0} is not dominant")]
    NotDominant(Weight),
    #[error("weight {weight} has {got} coordinates, rank is {rank}")]
    RankMismatch { weight: Weight, got: usize, rank: usize },
    #[error("cannot parse simple type `{0}`")]
    BadType(String),
    #[error("cannot parse weight `{0}`")]
    BadWeight(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        };
        write!(f, "{c}")
    }
}

impl FromStr for Family {
    type Err = RootError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            _ => Err(RootError::BadType(s.to_string())),
        }
    }
}

/// A simple type such as `C3`. D3 is stored as A3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleType {
    family: Family,
    rank: usize,
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !ok {
            return Err(RootError::InvalidRank { family, rank });
        }
        if family == Family::D && rank == 3 {
            return Ok(SimpleType { family: Family::A, rank: 3 });
        }
        Ok(SimpleType { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is(&self, family: Family, rank: usize) -> bool {
        self.family == family && self.rank == rank
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = RootError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.len() < 2 || !t.is_char_boundary(1) {
            return Err(RootError::BadType(s.to_string()));
        }
        let family: Family = t[..1].parse().map_err(|_| RootError::BadType(s.to_string()))?;
        let rank: usize = t[1..].parse().map_err(|_| RootError::BadType(s.to_string()))?;
        SimpleType::new(family, rank)
    }
}

/// Integer coordinates on the fundamental weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    /// `ω_i`, with `i` counted from 1.
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i - 1] = 1;
        Weight(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Coefficient of `ω_i`, 1-based.
    pub fn at(&self, i: usize) -> i64 {
        self.0[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Dominant with all coordinates below `p`; every dominant weight when `p = 0`.
    pub fn is_p_restricted(&self, p: u64) -> bool {
        self.is_dominant() && (p == 0 || self.0.iter().all(|&c| (c as u64) < p))
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|c| c * k).collect())
    }

    /// Indices (1-based) of the nonzero coordinates.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] != 0).map(|i| i + 1).collect()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Weight {
    type Err = RootError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.is_empty() {
            return Err(RootError::BadWeight(s.to_string()));
        }
        t.split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map(Weight)
            .map_err(|_| RootError::BadWeight(s.to_string()))
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

/// Coordinates on the simple roots.
pub type RootVec = Vec<i64>;

/// Immutable root datum of a simple type.
#[derive(Debug, Clone)]
pub struct RootDatum {
    ty: SimpleType,
    cartan: Vec<Vec<i64>>,
    len2: Vec<i64>,
    positive_roots: Vec<RootVec>,
    positive_roots_omega: Vec<Weight>,
    weyl_order: BigInt,
}

/// `cartan[i][j] = 2(α_i, α_j)/(α_j, α_j)`.
pub fn cartan_matrix(ty: SimpleType) -> Vec<Vec<i64>> {
    let n = ty.rank();
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i - 1][j - 1] = -1;
        a[j - 1][i - 1] = -1;
    };
    match ty.family() {
        Family::A | Family::B | Family::C => {
            for i in 1..n {
                link(i, i + 1);
            }
        }
        Family::D => {
            for i in 1..n - 1 {
                link(i, i + 1);
            }
            link(n - 2, n);
        }
        Family::E => {
            link(1, 3);
            link(2, 4);
            for i in 3..n {
                link(i, i + 1);
            }
        }
        Family::F => {
            link(1, 2);
            link(2, 3);
            link(3, 4);
        }
        Family::G => link(1, 2),
    }
    match ty.family() {
        Family::B => a[n - 2][n - 1] = -2,
        Family::C => a[n - 1][n - 2] = -2,
        Family::F => a[1][2] = -2,
        Family::G => a[1][0] = -3,
        _ => {}
    }
    a
}

/// Relative squared lengths of the simple roots, primitive integers.
fn symmetrizer(cartan: &[Vec<i64>]) -> Vec<i64> {
    let n = cartan.len();
    let mut d: Vec<Option<Rational64>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Rational64::one());
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let di = d[i].unwrap();
            for j in 0..n {
                if j != i && cartan[i][j] != 0 && d[j].is_none() {
                    // a_ij d_j = a_ji d_i
                    d[j] = Some(di * Rational64::from(cartan[j][i]) / Rational64::from(cartan[i][j]));
                    queue.push_back(j);
                }
            }
        }
    }
    let d: Vec<Rational64> = d.into_iter().map(Option::unwrap).collect();
    let den = d.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = d.iter().map(|x| (x * Rational64::from(den)).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| x / g).collect()
}

/// Positive roots in simple-root coordinates, graded by height.
fn positive_roots_of(cartan: &[Vec<i64>]) -> Vec<RootVec> {
    let n = cartan.len();
    let mut roots: Vec<RootVec> = Vec::new();
    let mut index: HashSet<RootVec> = HashSet::new();
    let mut queue: VecDeque<RootVec> = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        index.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..n {
            let is_simple_i = beta[i] == 1 && beta.iter().sum::<i64>() == 1;
            if is_simple_i {
                continue;
            }
            // length of the string below beta in direction alpha_i
            let mut r = 0;
            loop {
                let mut down = beta.clone();
                down[i] -= r + 1;
                if down[i] < 0 || !index.contains(&down) {
                    break;
                }
                r += 1;
            }
            let pairing: i64 = (0..n).map(|k| beta[k] * cartan[k][i]).sum();
            if r - pairing > 0 {
                let mut up = beta.clone();
                up[i] += 1;
                if index.insert(up.clone()) {
                    queue.push_back(up);
                }
            }
        }
        roots.push(beta);
    }
    roots.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    roots
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Fraction-free determinant.
fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Order of the Weyl group of a (possibly reducible) Cartan matrix.
///
/// Each irreducible component contributes `r! · Π m_i · det`, with `m_i` the
/// coefficients of its highest root.
pub fn weyl_group_order(cartan: &[Vec<i64>]) -> BigInt {
    let n = cartan.len();
    let mut seen = vec![false; n];
    let mut total = BigInt::one();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..n {
                if !seen[j] && cartan[i][j] != 0 {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        let sub: Vec<Vec<i64>> = comp.iter().map(|&i| comp.iter().map(|&j| cartan[i][j]).collect()).collect();
        let roots = positive_roots_of(&sub);
        let highest = roots.last().expect("nonempty component");
        let marks = highest.iter().fold(BigInt::one(), |acc, &m| acc * BigInt::from(m));
        total *= factorial(comp.len()) * marks * determinant(&sub);
    }
    total
}

impl RootDatum {
    pub fn new(ty: SimpleType) -> Self {
        let cartan = cartan_matrix(ty);
        let len2 = symmetrizer(&cartan);
        let positive_roots = positive_roots_of(&cartan);
        let n = ty.rank();
        let positive_roots_omega = positive_roots
            .iter()
            .map(|r| Weight((0..n).map(|j| (0..n).map(|k| r[k] * cartan[k][j]).sum()).collect()))
            .collect();
        let weyl_order = weyl_group_order(&cartan);
        RootDatum { ty, cartan, len2, positive_roots, positive_roots_omega, weyl_order }
    }

    pub fn simple_type(&self) -> SimpleType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.ty.rank()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Relative squared lengths of the simple roots (shortest is 1).
    pub fn simple_lengths(&self) -> &[i64] {
        &self.len2
    }

    pub fn positive_roots(&self) -> &[RootVec] {
        &self.positive_roots
    }

    /// Positive roots in fundamental-weight coordinates, same order as
    /// [`RootDatum::positive_roots`].
    pub fn positive_roots_omega(&self) -> &[Weight] {
        &self.positive_roots_omega
    }

    pub fn weyl_group_order(&self) -> &BigInt {
        &self.weyl_order
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank()])
    }

    /// `α_i` in fundamental-weight coordinates (row `i` of the Cartan matrix).
    pub fn simple_root(&self, i: usize) -> Weight {
        Weight(self.cartan[i - 1].clone())
    }

    /// Converts a root-lattice vector to fundamental-weight coordinates.
    pub fn root_to_weight(&self, c: &[i64]) -> Weight {
        let n = self.rank();
        Weight((0..n).map(|j| (0..n).map(|k| c[k] * self.cartan[k][j]).sum()).collect())
    }

    pub fn highest_root(&self) -> &RootVec {
        self.positive_roots.last().expect("rank >= 1")
    }

    /// One plus the height of the highest root.
    pub fn coxeter_number(&self) -> u64 {
        1 + self.highest_root().iter().sum::<i64>() as u64
    }

    /// Scaled pairing `(v, α)` of a weight with a root given on simple roots.
    pub fn pair(&self, v: &Weight, root: &[i64]) -> i64 {
        root.iter().zip(v.coords()).zip(&self.len2).map(|((c, x), l)| c * x * l).sum()
    }

    /// Scaled squared length of a root given on simple roots.
    pub fn root_norm(&self, root: &[i64]) -> i64 {
        self.pair(&self.root_to_weight(root), root)
    }

    /// `⟨v, α∨⟩` for a root given on simple roots.
    pub fn coroot_pairing(&self, v: &Weight, root: &[i64]) -> i64 {
        let num = 2 * self.pair(v, root);
        let den = self.root_norm(root);
        debug_assert_eq!(num % den, 0);
        num / den
    }

    pub fn check_rank(&self, v: &Weight) -> Result<(), RootError> {
        if v.rank() != self.rank() {
            return Err(RootError::RankMismatch { weight: v.clone(), got: v.rank(), rank: self.rank() });
        }
        Ok(())
    }

    pub fn check_dominant(&self, v: &Weight) -> Result<(), RootError> {
        self.check_rank(v)?;
        if !v.is_dominant() {
            return Err(RootError::NotDominant(v.clone()));
        }
        Ok(())
    }

    /// Simple reflection `s_i`, `i` counted from 1.
    pub fn reflect(&self, i: usize, v: &Weight) -> Result<Weight, RootError> {
        self.check_rank(v)?;
        if i == 0 || i > self.rank() {
            return Err(RootError::IndexOutOfRange { index: i, rank: self.rank() });
        }
        Ok(self.reflect_unchecked(i - 1, v))
    }

    pub(crate) fn reflect_unchecked(&self, i: usize, v: &Weight) -> Weight {
        let k = v.0[i];
        Weight(v.0.iter().zip(&self.cartan[i]).map(|(x, a)| x - k * a).collect())
    }

    /// Dominant Weyl conjugate of `v` and the indices `i` with `⟨·, α_i∨⟩ = 0`.
    pub fn dominant_representative(&self, v: &Weight) -> Result<(Weight, BTreeSet<usize>), RootError> {
        self.check_rank(v)?;
        let d = self.dominant_unchecked(v);
        let stab = (0..self.rank()).filter(|&i| d.0[i] == 0).map(|i| i + 1).collect();
        Ok((d, stab))
    }

    pub(crate) fn dominant_unchecked(&self, v: &Weight) -> Weight {
        let mut w = v.clone();
        while let Some(i) = w.0.iter().position(|&c| c < 0) {
            let k = w.0[i];
            for (x, a) in w.0.iter_mut().zip(&self.cartan[i]) {
                *x -= k * a;
            }
        }
        w
    }

    /// Dominant conjugate together with the change in simple-root coordinates:
    /// returns `(d, c)` with `d = v + Σ c_i α_i`.
    pub fn dominant_with_shift(&self, v: &Weight) -> (Weight, RootVec) {
        let mut w = v.clone();
        let mut shift = vec![0i64; self.rank()];
        while let Some(i) = w.0.iter().position(|&c| c < 0) {
            let k = w.0[i];
            shift[i] -= k;
            for (x, a) in w.0.iter_mut().zip(&self.cartan[i]) {
                *x -= k * a;
            }
        }
        (w, shift)
    }

    /// `|W| / |W_J|` with `J` the parabolic stabilizer of `dominant`.
    pub fn orbit_size(&self, dominant: &Weight) -> Result<BigInt, RootError> {
        self.check_dominant(dominant)?;
        Ok(self.orbit_size_unchecked(dominant))
    }

    pub(crate) fn orbit_size_unchecked(&self, dominant: &Weight) -> BigInt {
        let j: Vec<usize> = (0..self.rank()).filter(|&i| dominant.0[i] == 0).collect();
        let sub: Vec<Vec<i64>> = j.iter().map(|&a| j.iter().map(|&b| self.cartan[a][b]).collect()).collect();
        &self.weyl_order / weyl_group_order(&sub)
    }

    /// Every element of the Weyl orbit of a dominant weight.
    pub fn orbit(&self, dominant: &Weight) -> Result<Vec<Weight>, RootError> {
        self.check_dominant(dominant)?;
        let mut seen: HashSet<Weight> = HashSet::from([dominant.clone()]);
        let mut out = vec![dominant.clone()];
        let mut k = 0;
        while k < out.len() {
            let v = out[k].clone();
            for i in 0..self.rank() {
                if v.0[i] > 0 {
                    let w = self.reflect_unchecked(i, &v);
                    if seen.insert(w.clone()) {
                        out.push(w);
                    }
                }
            }
            k += 1;
        }
        Ok(out)
    }

    /// `-w_0(v)` through the diagram symmetry it induces.
    pub fn longest_element_action(&self, v: &Weight) -> Weight {
        let n = self.rank();
        let c = &v.0;
        match self.ty.family() {
            Family::A => Weight(c.iter().rev().copied().collect()),
            Family::D if n % 2 == 1 => {
                let mut w = c.clone();
                w.swap(n - 2, n - 1);
                Weight(w)
            }
            Family::E if n == 6 => Weight(vec![c[5], c[1], c[4], c[3], c[2], c[0]]),
            _ => v.clone(),
        }
    }

    /// Maps each fundamental weight index to its image under `-w_0`.
    pub fn minus_w0_permutation(&self) -> HashMap<usize, usize> {
        let n = self.rank();
        (1..=n)
            .map(|i| {
                let img = self.longest_element_action(&Weight::fundamental(n, i));
                (i, img.0.iter().position(|&x| x == 1).unwrap() + 1)
            })
            .collect()
    }
}

/// Non-identity automorphisms of the Dynkin diagram as permutations of the
/// 0-based node indices (`perm[i]` is the image of node i).
pub fn diagram_automorphisms(ty: SimpleType) -> Vec<Vec<usize>> {
    let n = ty.rank();
    let id: Vec<usize> = (0..n).collect();
    match ty.family() {
        Family::A if n > 1 => vec![(0..n).rev().collect()],
        Family::D if n == 4 => {
            let outer = [0usize, 2, 3];
            let mut out = Vec::new();
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        if a == b || b == c || a == c || (a, b, c) == (0, 1, 2) {
                            continue;
                        }
                        let mut p = id.clone();
                        p[0] = outer[a];
                        p[2] = outer[b];
                        p[3] = outer[c];
                        out.push(p);
                    }
                }
            }
            out
        }
        Family::D => {
            let mut p = id;
            p.swap(n - 2, n - 1);
            vec![p]
        }
        Family::E if n == 6 => vec![vec![5, 1, 4, 3, 2, 0]],
        _ => vec![],
    }
}

/// Builds the datum for `family` and `rank`, validating the rank.
pub fn build_root_datum(family: Family, rank: usize) -> Result<RootDatum, RootError> {
    Ok(RootDatum::new(SimpleType::new(family, rank)?))
}

/// Simple roots in an orthonormal basis, following the planches. The
/// returned scale `s` gives the normalized form `(x, y) = s · Σ x_k y_k`.
pub fn ambient_simple_roots(ty: SimpleType) -> (Vec<Vec<Rational64>>, Rational64) {
    let n = ty.rank();
    let r = |x: i64| Rational64::from(x);
    let half = Rational64::new(1, 2);
    let unit = |dim: usize, i: usize| {
        let mut v = vec![r(0); dim];
        v[i] = r(1);
        v
    };
    let diff = |dim: usize, i: usize, j: usize| {
        let mut v = vec![r(0); dim];
        v[i] = r(1);
        v[j] = r(-1);
        v
    };
    match ty.family() {
        Family::A => ((0..n).map(|i| diff(n + 1, i, i + 1)).collect(), r(1)),
        Family::B => {
            let mut s: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
            s.push(unit(n, n - 1));
            (s, r(1))
        }
        Family::C => {
            let mut s: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
            s.push(unit(n, n - 1).into_iter().map(|x| x * 2).collect());
            (s, half)
        }
        Family::D => {
            let mut s: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
            let mut last = vec![r(0); n];
            last[n - 2] = r(1);
            last[n - 1] = r(1);
            s.push(last);
            (s, r(1))
        }
        Family::E => {
            let mut a1 = vec![-half; 8];
            a1[0] = half;
            a1[7] = half;
            let mut a2 = vec![r(0); 8];
            a2[0] = r(1);
            a2[1] = r(1);
            let mut s = vec![a1, a2];
            for i in 0..n - 2 {
                s.push(diff(8, i + 1, i));
            }
            (s, r(1))
        }
        Family::F => {
            let s = vec![
                diff(4, 1, 2),
                diff(4, 2, 3),
                unit(4, 3),
                vec![half, -half, -half, -half],
            ];
            (s, r(1))
        }
        Family::G => (vec![diff(3, 0, 1), vec![r(-2), r(1), r(1)]], Rational64::new(1, 3)),
    }
}

/// Inverse of an integer matrix over the rationals.
pub fn rational_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<Rational64>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational64> = row.iter().map(|&x| Rational64::from(x)).collect();
            r.extend((0..n).map(|j| if i == j { Rational64::one() } else { Rational64::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Fundamental weights in the ambient basis of [`ambient_simple_roots`].
pub fn ambient_fundamental_weights(ty: SimpleType) -> Vec<Vec<Rational64>> {
    let (simple, _) = ambient_simple_roots(ty);
    let inv = rational_inverse(&cartan_matrix(ty)).expect("Cartan matrices are invertible");
    let dim = simple[0].len();
    inv.iter()
        .map(|row| {
            (0..dim)
                .map(|k| row.iter().zip(&simple).map(|(c, a)| *c * a[k]).sum())
                .collect()
        })
        .collect()
}
