//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Zero};
use rtk_core::roots::{cartan_matrix, rational_inverse, SimpleType, Weight};

/// Weyl character formula in Kostant's form:
/// `m_λ(μ) = Σ_w sgn(w) P(w(λ+ρ) - (μ+ρ))` with `P` the partition function.
pub struct KostantOracle {
    cartan: Vec<Vec<i64>>,
    inv: Vec<Vec<Rational64>>,
    roots: Vec<Vec<i64>>,
    memo: HashMap<(Vec<i64>, usize), BigInt>,
}

impl KostantOracle {
    pub fn new(ty: SimpleType) -> Self {
        let cartan = cartan_matrix(ty);
        let inv = rational_inverse(&cartan).unwrap();
        let roots = Self::roots_by_reflection(&cartan);
        KostantOracle { cartan, inv, roots, memo: HashMap::new() }
    }

    fn reflect(cartan: &[Vec<i64>], i: usize, v: &[i64]) -> Vec<i64> {
        let k = v[i];
        v.iter().zip(&cartan[i]).map(|(x, a)| x - k * a).collect()
    }

    /// Roots as the W-orbits of the simple roots, computed on simple-root
    /// coordinates with `s_i(β) = β - ⟨β, α_i∨⟩ α_i`.
    fn roots_by_reflection(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = cartan.len();
        let mut all: Vec<Vec<i64>> = Vec::new();
        let mut stack: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                e
            })
            .collect();
        while let Some(b) = stack.pop() {
            if all.contains(&b) {
                continue;
            }
            for i in 0..n {
                let pairing: i64 = (0..n).map(|k| b[k] * cartan[k][i]).sum();
                let mut c = b.clone();
                c[i] -= pairing;
                stack.push(c);
            }
            all.push(b);
        }
        all.into_iter().filter(|r| r.iter().all(|&x| x >= 0)).collect()
    }

    pub fn positive_root_count(&self) -> usize {
        self.roots.len()
    }

    fn to_roots(&self, v: &[i64]) -> Option<Vec<i64>> {
        let n = v.len();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let c: Rational64 = (0..n).map(|j| Rational64::from(v[j]) * self.inv[j][k]).sum();
            if !c.is_integer() || c < Rational64::zero() {
                return None;
            }
            out.push(c.to_integer());
        }
        Some(out)
    }

    fn partitions(&mut self, gamma: Vec<i64>, from: usize) -> BigInt {
        if gamma.iter().all(|&x| x == 0) {
            return BigInt::one();
        }
        if from == self.roots.len() {
            return BigInt::zero();
        }
        if let Some(v) = self.memo.get(&(gamma.clone(), from)) {
            return v.clone();
        }
        let root = self.roots[from].clone();
        let mut total = BigInt::zero();
        let mut g = gamma.clone();
        loop {
            total += self.partitions(g.clone(), from + 1);
            for (x, r) in g.iter_mut().zip(&root) {
                *x -= r;
            }
            if g.iter().any(|&x| x < 0) {
                break;
            }
        }
        self.memo.insert((gamma, from), total.clone());
        total
    }

    pub fn multiplicity(&mut self, lambda: &Weight, mu: &Weight) -> BigInt {
        let n = self.cartan.len();
        let lr: Vec<i64> = lambda.coords().iter().map(|x| x + 1).collect();
        let mr: Vec<i64> = mu.coords().iter().map(|x| x + 1).collect();
        // λ+ρ is regular, so its orbit is in bijection with W
        let mut orbit: Vec<(Vec<i64>, i32)> = vec![(lr.clone(), 1)];
        let mut seen = vec![lr];
        let mut k = 0;
        while k < orbit.len() {
            let (v, s) = orbit[k].clone();
            for i in 0..n {
                let w = Self::reflect(&self.cartan, i, &v);
                if !seen.contains(&w) {
                    seen.push(w.clone());
                    orbit.push((w, -s));
                }
            }
            k += 1;
        }
        let mut total = BigInt::zero();
        for (v, s) in orbit {
            let diff: Vec<i64> = v.iter().zip(&mr).map(|(a, b)| a - b).collect();
            if let Some(g) = self.to_roots(&diff) {
                let p = self.partitions(g, 0);
                if s > 0 {
                    total += p;
                } else {
                    total -= p;
                }
            }
        }
        total
    }
}

/// Dominant weights `μ` with `λ - μ` in the positive root cone, found by
/// scanning a box of simple-root coefficients.
pub fn brute_force_subdominant(ty: SimpleType, lambda: &Weight) -> Vec<Weight> {
    let cartan = cartan_matrix(ty);
    let inv = rational_inverse(&cartan).unwrap();
    let n = cartan.len();
    let bound: Vec<i64> = (0..n)
        .map(|k| {
            let c: Rational64 = (0..n).map(|j| Rational64::from(lambda.coords()[j]) * inv[j][k]).sum();
            c.floor().to_integer()
        })
        .collect();
    let mut out = Vec::new();
    let mut c = vec![0i64; n];
    loop {
        let mu: Vec<i64> = (0..n)
            .map(|j| lambda.coords()[j] - (0..n).map(|k| c[k] * cartan[k][j]).sum::<i64>())
            .collect();
        if mu.iter().all(|&x| x >= 0) {
            out.push(Weight::new(mu));
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            c[i] += 1;
            if c[i] <= bound[i] {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

/// All vectors with entries in `0..=max`.
pub fn coordinate_box(rank: usize, max: i64) -> Vec<Weight> {
    let mut out = Vec::new();
    let mut c = vec![0i64; rank];
    loop {
        out.push(Weight::new(c.clone()));
        let mut i = 0;
        loop {
            if i == rank {
                return out;
            }
            c[i] += 1;
            if c[i] <= max {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

pub fn w(c: &[i64]) -> Weight {
    Weight::new(c.to_vec())
}

pub fn ty(s: &str) -> SimpleType {
    s.parse().unwrap()
}

/// Dominant weights whose Weyl module has dimension at most `max`. The
/// dimension grows in every coordinate, so the set is closed downwards.
pub fn dominant_up_to_dim(t: SimpleType, max: u64) -> Vec<Weight> {
    use rtk_core::weights::weyl_dimension;
    use rtk_core::RootDatum;
    let d = RootDatum::new(t);
    let n = t.rank();
    let cap = BigInt::from(max);
    let mut seen = std::collections::BTreeSet::new();
    let mut stack = vec![Weight::zero(n)];
    while let Some(v) = stack.pop() {
        if seen.contains(&v) || weyl_dimension(&d, &v).unwrap() > cap {
            continue;
        }
        for i in 1..=n {
            stack.push(&v + &Weight::fundamental(n, i));
        }
        seen.insert(v);
    }
    seen.into_iter().collect()
}
