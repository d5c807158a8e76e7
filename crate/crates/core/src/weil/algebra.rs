use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::WeilError;
use crate::scalar::Backend;

/// Largest number of basis monomials an algebra may have.
pub const MAX_BASIS: usize = 1024;

/// A nilpotent generator `name` with `name^power = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub power: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, power: u32) -> Self {
        Generator { name: name.into(), power }
    }
}

/// Exponent vector over the generators of an algebra.
///
/// Ordered by total degree first, then so that earlier generators sort first
/// within a degree (`1 < e1 < e2 < e1^2 < e1*e2 < ...`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(n_generators: usize) -> Self {
        Monomial(vec![0; n_generators])
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Serialized form of an [`AlgebraSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpecJson {
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub annihilating_pairs: Vec<[String; 2]>,
    pub backend: Backend,
}

/// A Weil algebra `Q[e1..ek] / I` where `I` is generated by power caps
/// `ei^pi` and cross products `ei*ej`.
///
/// Construction enumerates the finite monomial basis and a multiplication
/// table, so a reduced monomial is exactly one that is not divisible by any
/// relation.
#[derive(Clone)]
pub struct AlgebraSpec {
    generators: Vec<Generator>,
    pairs: Vec<(usize, usize)>,
    backend: Backend,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    // basis.len()^2 entries; NO_PRODUCT marks a product in the ideal
    table: Vec<u32>,
    nilpotency: u32,
}

const NO_PRODUCT: u32 = u32::MAX;

impl AlgebraSpec {
    pub fn new(
        generators: Vec<Generator>,
        annihilating_pairs: &[(&str, &str)],
        backend: Backend,
    ) -> Result<Arc<Self>, WeilError> {
        let owned: Vec<(String, String)> = annihilating_pairs
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        Self::build(generators, &owned, backend).map(Arc::new)
    }

    fn build(
        mut generators: Vec<Generator>,
        annihilating_pairs: &[(String, String)],
        backend: Backend,
    ) -> Result<Self, WeilError> {
        for (i, g) in generators.iter().enumerate() {
            if !is_identifier(&g.name) {
                return Err(WeilError::InvalidSpec(format!(
                    "generator name `{}` is not an identifier",
                    g.name
                )));
            }
            if g.power == 0 {
                return Err(WeilError::InvalidSpec(format!(
                    "generator `{}` needs a power cap of at least 1",
                    g.name
                )));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(WeilError::InvalidSpec(format!(
                    "duplicate generator `{}`",
                    g.name
                )));
            }
        }
        let lookup = |name: &str| {
            generators
                .iter()
                .position(|g| g.name == name)
                .ok_or_else(|| WeilError::InvalidSpec(format!("unknown generator `{name}` in pair")))
        };
        let mut pairs = Vec::new();
        let mut squares = Vec::new();
        for (a, b) in annihilating_pairs {
            let (i, j) = (lookup(a)?, lookup(b)?);
            match i.cmp(&j) {
                Ordering::Equal => squares.push(i),
                Ordering::Less => pairs.push((i, j)),
                Ordering::Greater => pairs.push((j, i)),
            }
        }
        for i in squares {
            generators[i].power = generators[i].power.min(2);
        }
        pairs.sort_unstable();
        pairs.dedup();

        let basis = enumerate_basis(&generators, &pairs)?;
        let index: HashMap<Monomial, usize> =
            basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let n = basis.len();
        let mut table = vec![NO_PRODUCT; n * n];
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                if let Some(&k) = index.get(&a.times(b)) {
                    table[i * n + j] = k as u32;
                }
            }
        }
        let nilpotency = basis.iter().map(Monomial::degree).max().unwrap_or(0) + 1;
        Ok(AlgebraSpec {
            generators,
            pairs,
            backend,
            basis,
            index,
            table,
            nilpotency,
        })
    }

    /// The plain reals: no infinitesimal generators.
    pub fn reals(backend: Backend) -> Arc<Self> {
        Self::new(Vec::new(), &[], backend).expect("empty algebra is valid")
    }

    /// First-order infinitesimals `D = { d | d^2 = 0 }`.
    pub fn square_zero(name: &str, backend: Backend) -> Result<Arc<Self>, WeilError> {
        Self::new(vec![Generator::new(name, 2)], &[], backend)
    }

    /// `D_k = { d | d^(k+1) = 0 }`.
    pub fn truncated(name: &str, order: u32, backend: Backend) -> Result<Arc<Self>, WeilError> {
        Self::new(vec![Generator::new(name, order + 1)], &[], backend)
    }

    pub fn from_json(text: &str) -> Result<Arc<Self>, WeilError> {
        let raw: AlgebraSpecJson =
            serde_json::from_str(text).map_err(|e| WeilError::InvalidSpec(e.to_string()))?;
        Self::from_json_value(&raw)
    }

    pub fn from_json_value(raw: &AlgebraSpecJson) -> Result<Arc<Self>, WeilError> {
        let pairs: Vec<(String, String)> = raw
            .annihilating_pairs
            .iter()
            .map(|[a, b]| (a.clone(), b.clone()))
            .collect();
        Self::build(raw.generators.clone(), &pairs, raw.backend).map(Arc::new)
    }

    pub fn to_json_value(&self) -> AlgebraSpecJson {
        AlgebraSpecJson {
            generators: self.generators.clone(),
            annihilating_pairs: self
                .pairs
                .iter()
                .map(|&(i, j)| [self.generators[i].name.clone(), self.generators[j].name.clone()])
                .collect(),
            backend: self.backend,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("spec serializes")
    }

    /// Appends a fresh generator with the given power cap. The name is
    /// suffixed with primes until it no longer clashes.
    pub fn extend(&self, name: &str, power: u32) -> Result<Arc<Self>, WeilError> {
        let mut fresh = name.to_string();
        while self.generators.iter().any(|g| g.name == fresh) {
            fresh.push('_');
        }
        let mut generators = self.generators.clone();
        generators.push(Generator::new(fresh, power));
        let pairs: Vec<(String, String)> = self
            .pairs
            .iter()
            .map(|&(i, j)| (self.generators[i].name.clone(), self.generators[j].name.clone()))
            .collect();
        Self::build(generators, &pairs, self.backend).map(Arc::new)
    }

    /// Same relations, other backend.
    pub fn with_backend(&self, backend: Backend) -> Arc<Self> {
        let mut copy = self.clone();
        copy.backend = backend;
        Arc::new(copy)
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Smallest `k` such that every product of `k` nilpotent elements vanishes.
    pub fn nilpotency_index(&self) -> u32 {
        self.nilpotency
    }

    pub fn monomial_index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Index of the product of two basis monomials, `None` if it lies in the ideal.
    #[inline]
    pub(crate) fn product_index(&self, i: usize, j: usize) -> Option<usize> {
        let k = self.table[i * self.basis.len() + j];
        (k != NO_PRODUCT).then_some(k as usize)
    }

    /// `e1*e2^2` style label for a basis monomial; `1` for the unit.
    pub fn monomial_label(&self, idx: usize) -> String {
        let m = &self.basis[idx];
        if m.is_one() {
            return "1".to_string();
        }
        let parts: Vec<String> = m
            .0
            .iter()
            .zip(&self.generators)
            .filter(|(e, _)| **e > 0)
            .map(|(&e, g)| {
                if e == 1 {
                    g.name.clone()
                } else {
                    format!("{}^{}", g.name, e)
                }
            })
            .collect();
        parts.join("*")
    }

    /// Inverse of [`monomial_label`](Self::monomial_label). Returns
    /// `Ok(None)` for a well-formed monomial that reduces to zero.
    pub fn parse_monomial(&self, label: &str) -> Result<Option<usize>, WeilError> {
        let label = label.trim();
        let mut exps = vec![0u32; self.generators.len()];
        if label != "1" {
            for factor in label.split('*') {
                let factor = factor.trim();
                let (name, power) = match factor.split_once('^') {
                    Some((n, p)) => (
                        n.trim(),
                        p.trim().parse::<u32>().map_err(|_| {
                            WeilError::InvalidSpec(format!("bad exponent in monomial `{label}`"))
                        })?,
                    ),
                    None => (factor, 1),
                };
                let g = self.generator_index(name).ok_or_else(|| {
                    WeilError::InvalidSpec(format!("unknown generator `{name}` in monomial `{label}`"))
                })?;
                exps[g] = exps[g].saturating_add(power);
            }
        }
        Ok(self.monomial_index(&Monomial(exps)))
    }
}

impl PartialEq for AlgebraSpec {
    fn eq(&self, other: &Self) -> bool {
        self.backend == other.backend
            && self.generators == other.generators
            && self.pairs == other.pairs
    }
}

impl Eq for AlgebraSpec {}

impl fmt::Debug for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraSpec")
            .field("generators", &self.generators)
            .field("pairs", &self.pairs)
            .field("backend", &self.backend)
            .field("dim", &self.basis.len())
            .finish()
    }
}

pub(crate) fn same_algebra(a: &Arc<AlgebraSpec>, b: &Arc<AlgebraSpec>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn enumerate_basis(
    generators: &[Generator],
    pairs: &[(usize, usize)],
) -> Result<Vec<Monomial>, WeilError> {
    fn walk(
        i: usize,
        current: &mut Vec<u32>,
        generators: &[Generator],
        pairs: &[(usize, usize)],
        out: &mut Vec<Monomial>,
    ) -> Result<(), WeilError> {
        if i == generators.len() {
            if out.len() >= MAX_BASIS {
                return Err(WeilError::AlgebraTooLarge { limit: MAX_BASIS });
            }
            out.push(Monomial(current.clone()));
            return Ok(());
        }
        let blocked = pairs.iter().any(|&(a, b)| b == i && current[a] > 0);
        let top = if blocked { 1 } else { generators[i].power };
        for e in 0..top {
            current.push(e);
            walk(i + 1, current, generators, pairs, out)?;
            current.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    walk(0, &mut Vec::new(), generators, pairs, &mut out)?;
    out.sort();
    Ok(out)
}
