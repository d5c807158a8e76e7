use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::LogicError;

/// How to build a [`HeytingAlgebra`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraKind {
    /// Linear order `0 < ... < 1` with `n` elements.
    Chain(usize),
    /// The two-element Boolean algebra.
    Boolean,
    /// JSON document `{"elements": [...], "le": [[a, b], ...]}`; the order is
    /// the reflexive-transitive closure of the listed pairs.
    Custom(String),
}

/// Custom lattice description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub le: Vec<[String; 2]>,
}

/// Finite Heyting algebra with precomputed operation tables.
///
/// Elements are addressed by index into [`HeytingAlgebra::elements`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeytingAlgebra {
    names: Vec<String>,
    le: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    imp: Vec<Vec<usize>>,
    top: usize,
    bottom: usize,
}

pub fn make_algebra(kind: &AlgebraKind) -> Result<HeytingAlgebra, LogicError> {
    match kind {
        AlgebraKind::Chain(n) => HeytingAlgebra::chain(*n),
        AlgebraKind::Boolean => HeytingAlgebra::chain(2),
        AlgebraKind::Custom(json) => HeytingAlgebra::from_json(json),
    }
}

impl HeytingAlgebra {
    /// `n >= 2` elements. Three elements are named `0, m, 1`; longer chains
    /// use `0, m1, ..., m(n-2), 1`.
    pub fn chain(n: usize) -> Result<Self, LogicError> {
        if n < 2 {
            return Err(LogicError::MalformedInput(format!("a chain needs at least 2 elements, got {n}")));
        }
        let mut names = vec!["0".to_string()];
        if n == 3 {
            names.push("m".into());
        } else {
            names.extend((1..n - 1).map(|i| format!("m{i}")));
        }
        names.push("1".into());
        let le = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        Self::from_order(names, le)
    }

    pub fn boolean() -> Self {
        Self::chain(2).expect("two-element chain")
    }

    pub fn from_json(text: &str) -> Result<Self, LogicError> {
        let spec: LatticeJson =
            serde_json::from_str(text).map_err(|e| LogicError::MalformedInput(e.to_string()))?;
        Self::from_lattice_json(&spec)
    }

    pub fn from_lattice_json(spec: &LatticeJson) -> Result<Self, LogicError> {
        let n = spec.elements.len();
        if n == 0 {
            return Err(LogicError::MalformedInput("no elements".into()));
        }
        let mut index = HashMap::new();
        for (i, name) in spec.elements.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(LogicError::MalformedInput(format!("duplicate element `{name}`")));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| LogicError::MalformedInput(format!("unknown element `{name}`")))
        };
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for [a, b] in &spec.le {
            le[lookup(a)?][lookup(b)?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i][k] {
                    for j in 0..n {
                        if le[k][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::from_order(spec.elements.clone(), le)
    }

    /// Builds the algebra from a reflexive, transitive relation, deriving and
    /// checking every table.
    pub fn from_order(names: Vec<String>, le: Vec<Vec<bool>>) -> Result<Self, LogicError> {
        let n = names.len();
        for i in 0..n {
            for j in 0..n {
                if i != j && le[i][j] && le[j][i] {
                    return Err(LogicError::MalformedInput(format!(
                        "`{}` and `{}` are mutually below each other",
                        names[i], names[j]
                    )));
                }
            }
        }
        let greatest = |set: &[usize]| set.iter().copied().find(|&g| set.iter().all(|&x| le[x][g]));
        let least = |set: &[usize]| set.iter().copied().find(|&g| set.iter().all(|&x| le[g][x]));
        let all: Vec<usize> = (0..n).collect();
        let top = greatest(&all).ok_or_else(|| LogicError::MalformedInput("no top element".into()))?;
        let bottom = least(&all).ok_or_else(|| LogicError::MalformedInput("no bottom element".into()))?;

        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&c| le[c][a] && le[c][b]).collect();
                let upper: Vec<usize> = (0..n).filter(|&c| le[a][c] && le[b][c]).collect();
                meet[a][b] = greatest(&lower).ok_or_else(|| {
                    LogicError::MalformedInput(format!("`{}` and `{}` have no meet", names[a], names[b]))
                })?;
                join[a][b] = least(&upper).ok_or_else(|| {
                    LogicError::MalformedInput(format!("`{}` and `{}` have no join", names[a], names[b]))
                })?;
            }
        }

        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]] {
                        return Err(LogicError::NotDistributive {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            c: names[c].clone(),
                        });
                    }
                }
            }
        }

        let mut imp = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let candidates: Vec<usize> = (0..n).filter(|&c| le[meet[c][a]][b]).collect();
                imp[a][b] = greatest(&candidates).ok_or_else(|| LogicError::NoImplication {
                    a: names[a].clone(),
                    b: names[b].clone(),
                })?;
            }
        }

        let algebra = HeytingAlgebra { names, le, meet, join, imp, top, bottom };
        if let Some((a, b, _)) = algebra.adjunction_violation() {
            return Err(LogicError::NoImplication {
                a: algebra.names[a].clone(),
                b: algebra.names[b].clone(),
            });
        }
        Ok(algebra)
    }

    /// First triple `(a, b, c)` with `c <= (a -> b)` disagreeing with
    /// `c & a <= b`, if any.
    pub fn adjunction_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.le(c, self.imp[a][b]) != self.le(self.meet[c][a], b) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn implies(&self, a: usize, b: usize) -> usize {
        self.imp[a][b]
    }

    pub fn not(&self, a: usize) -> usize {
        self.imp[a][self.bottom]
    }

    /// Every element is complemented.
    pub fn is_boolean(&self) -> bool {
        (0..self.len()).all(|a| self.join(a, self.not(a)) == self.top)
    }

    pub fn to_lattice_json(&self) -> LatticeJson {
        let n = self.len();
        let mut le = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.le[a][b] {
                    le.push([self.names[a].clone(), self.names[b].clone()]);
                }
            }
        }
        LatticeJson { elements: self.names.clone(), le }
    }
}

impl fmt::Display for HeytingAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names.join(", "))
    }
}
