//! Subsystem subgroups given by a base of parent roots, restriction of
//! weights to them, and a weight-level audit of multiplicities after
//! restriction.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::roots::{cartan_matrix, rational_inverse, Family, RootDatum, RootError, RootVec, SimpleType, Weight};
use crate::weights::WeightMultiset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubsystemError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("invalid subsystem basis: {0}")]
    InvalidBasis(String),
}

pub type Result<T> = std::result::Result<T, SubsystemError>;

/// One simple factor of the subsystem: its type and the positions in the
/// basis of its simple roots, listed in Bourbaki order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub ty: SimpleType,
    pub nodes: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SubsystemBasis {
    parent: RootDatum,
    roots: Vec<RootVec>,
    /// `cartan[i][j] = <β_i, β_j∨>`.
    cartan: Vec<Vec<i64>>,
    components: Vec<Component>,
}

fn families_of_rank(k: usize) -> Vec<SimpleType> {
    let mut out = Vec::new();
    for f in [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G] {
        if let Ok(t) = SimpleType::new(f, k) {
            if t.family() == f {
                out.push(t);
            }
        }
    }
    out
}

/// A bijection `perm` with `m[perm[a]][perm[b]] == target[a][b]`.
fn match_cartan(m: &[Vec<i64>], nodes: &[usize], target: &[Vec<i64>]) -> Option<Vec<usize>> {
    fn extend(m: &[Vec<i64>], nodes: &[usize], target: &[Vec<i64>], perm: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let a = perm.len();
        if a == nodes.len() {
            return true;
        }
        for (k, &cand) in nodes.iter().enumerate() {
            if used[k] || m[cand][cand] != target[a][a] {
                continue;
            }
            if (0..a).all(|b| m[cand][perm[b]] == target[a][b] && m[perm[b]][cand] == target[b][a]) {
                used[k] = true;
                perm.push(cand);
                if extend(m, nodes, target, perm, used) {
                    return true;
                }
                perm.pop();
                used[k] = false;
            }
        }
        false
    }
    let mut perm = Vec::new();
    let mut used = vec![false; nodes.len()];
    extend(m, nodes, target, &mut perm, &mut used).then_some(perm)
}

fn identify(m: &[Vec<i64>], nodes: &[usize]) -> Option<Component> {
    let cands = families_of_rank(nodes.len());
    // keep the caller's order when it is already a Bourbaki labelling
    for &t in &cands {
        let c = cartan_matrix(t);
        let ok = (0..nodes.len()).all(|a| (0..nodes.len()).all(|b| m[nodes[a]][nodes[b]] == c[a][b]));
        if ok {
            return Some(Component { ty: t, nodes: nodes.to_vec() });
        }
    }
    for &t in &cands {
        if let Some(perm) = match_cartan(m, nodes, &cartan_matrix(t)) {
            return Some(Component { ty: t, nodes: perm });
        }
    }
    None
}

impl SubsystemBasis {
    /// `roots` are parent roots on the simple roots, e.g. `[0, 1, 2]` for
    /// `α2 + 2α3`.
    pub fn new(parent: RootDatum, roots: Vec<RootVec>) -> Result<Self> {
        let bad = |m: String| Err(SubsystemError::InvalidBasis(m));
        let n = parent.rank();
        if roots.is_empty() {
            return bad("no roots".into());
        }
        for r in &roots {
            if r.len() != n {
                return bad(format!("{r:?} has {} coordinates, rank is {n}", r.len()));
            }
            let neg: RootVec = r.iter().map(|x| -x).collect();
            if !parent.positive_roots().iter().any(|p| *p == *r || *p == neg) {
                return bad(format!("{r:?} is not a root of {}", parent.simple_type()));
            }
        }
        let k = roots.len();
        let weights: Vec<Weight> = roots.iter().map(|r| parent.root_to_weight(r)).collect();
        let gram: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| parent.pair(&weights[i], &roots[j])).collect()).collect();
        if rational_inverse(&gram).is_none() {
            return bad("roots are linearly dependent".into());
        }
        let cartan: Vec<Vec<i64>> =
            (0..k).map(|i| (0..k).map(|j| parent.coroot_pairing(&weights[i], &roots[j])).collect()).collect();
        for i in 0..k {
            for j in 0..k {
                if i != j && cartan[i][j] > 0 {
                    return bad(format!("<β{}, β{}∨> = {} is positive", i + 1, j + 1, cartan[i][j]));
                }
            }
        }
        let mut seen = vec![false; k];
        let mut components = Vec::new();
        for s in 0..k {
            if seen[s] {
                continue;
            }
            let mut nodes = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < nodes.len() {
                let a = nodes[i];
                for b in 0..k {
                    if !seen[b] && cartan[a][b] != 0 {
                        seen[b] = true;
                        nodes.push(b);
                    }
                }
                i += 1;
            }
            nodes.sort_unstable();
            match identify(&cartan, &nodes) {
                Some(c) => components.push(c),
                None => return bad(format!("nodes {nodes:?} do not form a finite-type diagram")),
            }
        }
        Ok(SubsystemBasis { parent, roots, cartan, components })
    }

    /// The Levi subsystem on the given simple roots (1-based).
    pub fn levi(parent: RootDatum, simple: &[usize]) -> Result<Self> {
        let n = parent.rank();
        let mut roots = Vec::new();
        for &i in simple {
            if i == 0 || i > n {
                return Err(SubsystemError::InvalidBasis(format!("simple root {i} outside 1..={n}")));
            }
            let mut r = vec![0; n];
            r[i - 1] = 1;
            roots.push(r);
        }
        SubsystemBasis::new(parent, roots)
    }

    pub fn parent(&self) -> &RootDatum {
        &self.parent
    }

    pub fn roots(&self) -> &[RootVec] {
        &self.roots
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn child_types(&self) -> Vec<SimpleType> {
        self.components.iter().map(|c| c.ty).collect()
    }

    /// `(<v, β∨>)` over the basis, in basis order.
    pub fn restrict_weight(&self, v: &Weight) -> Result<Weight> {
        self.parent.check_rank(v)?;
        Ok(Weight::new(self.roots.iter().map(|r| self.parent.coroot_pairing(v, r)).collect()))
    }

    /// The restriction split over the simple factors, each in Bourbaki order.
    pub fn restrict_to_components(&self, v: &Weight) -> Result<Vec<(SimpleType, Weight)>> {
        let r = self.restrict_weight(v)?;
        Ok(self.components.iter().map(|c| (c.ty, Weight::new(c.nodes.iter().map(|&i| r.at(i + 1)).collect()))).collect())
    }

    /// `v` minus its projection onto the span of the basis roots, in
    /// fundamental-weight coordinates. Weights with the same key differ by
    /// a rational combination of basis roots.
    pub fn layer_key(&self, v: &Weight) -> Result<Vec<Rational64>> {
        let r = self.restrict_weight(v)?;
        let inv = rational_inverse(&self.cartan).expect("checked at construction");
        let k = self.roots.len();
        // Σ_j x_j <β_j, β_i∨> = r_i
        let x: Vec<Rational64> =
            (0..k).map(|j| (0..k).map(|i| Rational64::from(r.at(i + 1)) * inv[i][j]).sum()).collect();
        let mut key: Vec<Rational64> = v.coords().iter().map(|&c| Rational64::from(c)).collect();
        for (j, root) in self.roots.iter().enumerate() {
            let w = self.parent.root_to_weight(root);
            for (kc, &c) in key.iter_mut().zip(w.coords()) {
                *kc -= x[j] * Rational64::from(c);
            }
        }
        Ok(key)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub child: Weight,
    pub multiplicity: BigInt,
    /// Parent weights restricting to `child`, with their multiplicities.
    pub parents: Vec<(Weight, BigInt)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub child_types: Vec<SimpleType>,
    /// Restricted multiset over all parent weights.
    pub child_multiplicities: BTreeMap<Weight, BigInt>,
    /// Nonzero child weights of total multiplicity at least 2.
    pub excess: Vec<AuditEntry>,
    /// Nonzero child weights of multiplicity at least 2 inside a single
    /// layer. A layer collects parent weights that differ by the span of the
    /// basis roots, and the restriction is injective on it, so a violation
    /// is a nonzero child weight coming from a parent weight of multiplicity
    /// at least 2. None can occur when the parent weight is in Ω₂.
    pub violations: Vec<AuditEntry>,
    pub layer_count: usize,
    pub max_layer_multiplicity: BigInt,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub type Layers = BTreeMap<Vec<Rational64>, BTreeMap<Weight, (BigInt, Vec<(Weight, BigInt)>)>>;

/// Every weight of the multiset, restricted and grouped by layer.
pub fn restricted_layers(basis: &SubsystemBasis, multiset: &WeightMultiset) -> Result<Layers> {
    let d = basis.parent();
    let mut layers: Layers = BTreeMap::new();
    for (v, m) in multiset.expand(d) {
        let key = basis.layer_key(&v)?;
        let child = basis.restrict_weight(&v)?;
        let slot = layers.entry(key).or_default().entry(child).or_insert_with(|| (BigInt::zero(), Vec::new()));
        slot.0 += &m;
        slot.1.push((v, m));
    }
    Ok(layers)
}

pub fn restriction_audit(basis: &SubsystemBasis, multiset: &WeightMultiset) -> Result<AuditReport> {
    if multiset.simple_type() != basis.parent().simple_type() {
        return Err(SubsystemError::InvalidBasis(format!(
            "multiset is for {}, basis for {}",
            multiset.simple_type(),
            basis.parent().simple_type()
        )));
    }
    let layers = restricted_layers(basis, multiset)?;
    let mut total: BTreeMap<Weight, (BigInt, Vec<(Weight, BigInt)>)> = BTreeMap::new();
    let mut violations = Vec::new();
    let mut max_layer = BigInt::zero();
    for layer in layers.values() {
        for (child, (m, parents)) in layer {
            if *m > max_layer {
                max_layer = m.clone();
            }
            if !child.is_zero() && *m > BigInt::one() {
                violations.push(AuditEntry { child: child.clone(), multiplicity: m.clone(), parents: parents.clone() });
            }
            let slot = total.entry(child.clone()).or_insert_with(|| (BigInt::zero(), Vec::new()));
            slot.0 += m;
            slot.1.extend(parents.iter().cloned());
        }
    }
    let mut excess = Vec::new();
    for (child, (m, parents)) in &total {
        if !child.is_zero() && *m > BigInt::one() {
            let mut parents = parents.clone();
            parents.sort();
            excess.push(AuditEntry { child: child.clone(), multiplicity: m.clone(), parents });
        }
    }
    violations.sort_by(|a, b| a.child.cmp(&b.child));
    Ok(AuditReport {
        child_types: basis.child_types(),
        child_multiplicities: total.into_iter().map(|(k, (m, _))| (k, m)).collect(),
        excess,
        violations,
        layer_count: layers.len(),
        max_layer_multiplicity: max_layer,
    })
}
