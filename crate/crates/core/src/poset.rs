//! Finite posets and monotone maps.
//!
//! Finite carriers make the poset, omega-cpo and dcpo notions coincide:
//! every ascending chain is eventually constant, so continuity degenerates
//! to monotonicity and chain joins are last elements. One representation
//! therefore serves all three enrichment bases.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A finite poset: ordered point labels plus the full `leq` relation table.
/// Values of this type always satisfy reflexivity, transitivity and
/// antisymmetry; build them through [`validate_poset`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinPoset {
    points: Vec<String>,
    leq: Vec<Vec<bool>>,
}

/// Raw candidate for a poset, as parsed from files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetCandidate {
    pub points: Vec<String>,
    pub leq: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PosetViolation {
    NotReflexive { point: String },
    NotTransitive { x: String, y: String, z: String },
    NotAntisymmetric { x: String, y: String },
    Shape { detail: String },
}

impl fmt::Display for PosetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosetViolation::NotReflexive { point } => write!(f, "{point} not below itself"),
            PosetViolation::NotTransitive { x, y, z } => {
                write!(f, "{x} <= {y} <= {z} but not {x} <= {z}")
            }
            PosetViolation::NotAntisymmetric { x, y } => {
                write!(f, "distinct {x} and {y} below each other")
            }
            PosetViolation::Shape { detail } => write!(f, "malformed relation: {detail}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("poset axioms violated: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct PosetViolations(pub Vec<PosetViolation>);

pub fn validate_poset(candidate: &PosetCandidate) -> Result<FinPoset, PosetViolations> {
    let n = candidate.points.len();
    let mut violations = Vec::new();
    {
        let mut seen = std::collections::BTreeSet::new();
        for p in &candidate.points {
            if !seen.insert(p) {
                violations.push(PosetViolation::Shape {
                    detail: format!("duplicate point {p}"),
                });
            }
        }
    }
    if candidate.leq.len() != n || candidate.leq.iter().any(|row| row.len() != n) {
        violations.push(PosetViolation::Shape {
            detail: format!("relation is not {n}x{n}"),
        });
        return Err(PosetViolations(violations));
    }
    let le = |i: usize, j: usize| candidate.leq[i][j];
    for i in 0..n {
        if !le(i, i) {
            violations.push(PosetViolation::NotReflexive {
                point: candidate.points[i].clone(),
            });
        }
        for j in 0..n {
            if i < j && le(i, j) && le(j, i) {
                violations.push(PosetViolation::NotAntisymmetric {
                    x: candidate.points[i].clone(),
                    y: candidate.points[j].clone(),
                });
            }
            for k in 0..n {
                if le(i, j) && le(j, k) && !le(i, k) {
                    violations.push(PosetViolation::NotTransitive {
                        x: candidate.points[i].clone(),
                        y: candidate.points[j].clone(),
                        z: candidate.points[k].clone(),
                    });
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(FinPoset {
            points: candidate.points.clone(),
            leq: candidate.leq.clone(),
        })
    } else {
        Err(PosetViolations(violations))
    }
}

impl FinPoset {
    pub(crate) fn new_unchecked(points: Vec<String>, leq: Vec<Vec<bool>>) -> FinPoset {
        debug_assert!(validate_poset(&PosetCandidate {
            points: points.clone(),
            leq: leq.clone()
        })
        .is_ok());
        FinPoset { points, leq }
    }

    pub fn candidate(&self) -> PosetCandidate {
        PosetCandidate {
            points: self.points.clone(),
            leq: self.leq.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn label(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p == label)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.len()).all(|i| (0..self.len()).all(|j| i == j || !self.leq(i, j)))
    }

    /// Length of the longest strictly ascending chain (number of points in
    /// it); 0 for the empty poset. Bounds the iteration count when joining
    /// generated chains.
    pub fn longest_chain_len(&self) -> usize {
        let n = self.len();
        let mut best = vec![1usize; n];
        // points sorted by number of elements below, so predecessors settle first
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (0..n).filter(|&j| self.leq(j, i)).count());
        for &i in &order {
            for j in 0..n {
                if j != i && self.leq(j, i) {
                    best[i] = best[i].max(best[j] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }
}

/// Discrete poset: `x <= y` iff `x = y`.
pub fn discrete_poset<I, S>(labels: I) -> FinPoset
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let points: Vec<String> = labels.into_iter().map(Into::into).collect();
    let n = points.len();
    let leq = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
    FinPoset::new_unchecked(points, leq)
}

/// An ascending chain `l0 < l1 < ... < l{n-1}` on the given labels.
pub fn chain_poset<I, S>(labels: I) -> FinPoset
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let points: Vec<String> = labels.into_iter().map(Into::into).collect();
    let n = points.len();
    let leq = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
    FinPoset::new_unchecked(points, leq)
}

fn tuple_label(parts: &[&str]) -> String {
    format!("({})", parts.join(","))
}

fn product_tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut tuples = vec![vec![]];
    for &s in sizes {
        let mut next = Vec::with_capacity(tuples.len() * s);
        for t in &tuples {
            for v in 0..s {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        tuples = next;
    }
    tuples
}

/// Product with the coordinate-wise order, plus projections.
pub fn poset_product(factors: &[&FinPoset]) -> (FinPoset, Vec<MonotoneMap>) {
    let sizes: Vec<usize> = factors.iter().map(|p| p.len()).collect();
    let tuples = product_tuples(&sizes);
    let points: Vec<String> = tuples
        .iter()
        .map(|t| {
            tuple_label(
                &t.iter()
                    .enumerate()
                    .map(|(k, &i)| factors[k].label(i))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let leq = tuples
        .iter()
        .map(|a| {
            tuples
                .iter()
                .map(|b| {
                    a.iter()
                        .zip(b.iter())
                        .enumerate()
                        .all(|(k, (&i, &j))| factors[k].leq(i, j))
                })
                .collect()
        })
        .collect();
    let product = FinPoset::new_unchecked(points, leq);
    let projections = (0..factors.len())
        .map(|k| {
            MonotoneMap::new_unchecked(
                product.clone(),
                factors[k].clone(),
                tuples.iter().map(|t| t[k]).collect(),
            )
        })
        .collect();
    (product, projections)
}

pub fn poset_power(p: &FinPoset, n: usize) -> (FinPoset, Vec<MonotoneMap>) {
    let factors = vec![p; n];
    poset_product(&factors)
}

/// A total map between finite posets; monotonicity is checked by
/// [`check_monotone`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneMap {
    domain: FinPoset,
    codomain: FinPoset,
    table: Vec<usize>,
}

pub use crate::mspace::MapError;

impl MonotoneMap {
    pub fn new(
        domain: FinPoset,
        codomain: FinPoset,
        table: Vec<usize>,
    ) -> Result<MonotoneMap, MapError> {
        if table.len() != domain.len() {
            return Err(MapError::WrongLength {
                expected: domain.len(),
                got: table.len(),
            });
        }
        if let Some(i) = table.iter().position(|&v| v >= codomain.len()) {
            return Err(MapError::OutOfRange { index: i });
        }
        Ok(MonotoneMap {
            domain,
            codomain,
            table,
        })
    }

    pub fn from_labels(
        domain: FinPoset,
        codomain: FinPoset,
        assign: &BTreeMap<String, String>,
    ) -> Result<MonotoneMap, MapError> {
        let table = domain
            .points()
            .iter()
            .map(|p| {
                let target = assign
                    .get(p)
                    .ok_or_else(|| MapError::UnknownPoint(p.clone()))?;
                codomain
                    .index_of(target)
                    .ok_or_else(|| MapError::UnknownPoint(target.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MonotoneMap {
            domain,
            codomain,
            table,
        })
    }

    pub(crate) fn new_unchecked(
        domain: FinPoset,
        codomain: FinPoset,
        table: Vec<usize>,
    ) -> MonotoneMap {
        debug_assert_eq!(table.len(), domain.len());
        debug_assert!(table.iter().all(|&v| v < codomain.len()));
        MonotoneMap {
            domain,
            codomain,
            table,
        }
    }

    pub fn identity(p: &FinPoset) -> MonotoneMap {
        MonotoneMap::new_unchecked(p.clone(), p.clone(), (0..p.len()).collect())
    }

    pub fn domain(&self) -> &FinPoset {
        &self.domain
    }

    pub fn codomain(&self) -> &FinPoset {
        &self.codomain
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn then(&self, other: &MonotoneMap) -> MonotoneMap {
        debug_assert_eq!(self.codomain, other.domain);
        MonotoneMap::new_unchecked(
            self.domain.clone(),
            other.codomain.clone(),
            self.table.iter().map(|&i| other.table[i]).collect(),
        )
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain.len()];
        for &v in &self.table {
            hit[v] = true;
        }
        hit.into_iter().all(|b| b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotonicityWitness {
    pub x: String,
    pub y: String,
}

/// `true` iff `x <= y` implies `f x <= f y`; on failure returns the first
/// violating pair in point order.
pub fn check_monotone(f: &MonotoneMap) -> Result<(), MonotonicityWitness> {
    for i in 0..f.domain().len() {
        for j in 0..f.domain().len() {
            if f.domain().leq(i, j) && !f.codomain().leq(f.apply(i), f.apply(j)) {
                return Err(MonotonicityWitness {
                    x: f.domain().label(i).to_string(),
                    y: f.domain().label(j).to_string(),
                });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("elements at positions {0} and {1} are not related, so the list is not a chain")]
pub struct NotAChain(pub usize, pub usize);

/// Join of a finite ascending chain: checks each consecutive pair is related
/// and returns the last element, which is the least upper bound of an
/// eventually constant chain.
pub fn join_of_chain(p: &FinPoset, seq: &[usize]) -> Result<usize, NotAChain> {
    assert!(!seq.is_empty(), "join of the empty chain is undefined");
    for w in seq.windows(2) {
        if !p.leq(w[0], w[1]) {
            let at = seq.windows(2).position(|x| x == w).unwrap();
            return Err(NotAChain(at, at + 1));
        }
    }
    Ok(*seq.last().unwrap())
}

/// Pair two monotone maps into a product poset.
pub fn pair_into_product(f: &MonotoneMap, g: &MonotoneMap, product: &FinPoset) -> MonotoneMap {
    debug_assert_eq!(f.domain(), g.domain());
    let table = (0..f.domain().len())
        .map(|i| {
            let label = tuple_label(&[
                f.codomain().label(f.apply(i)),
                g.codomain().label(g.apply(i)),
            ]);
            product
                .index_of(&label)
                .expect("pairing target must be a product point")
        })
        .collect();
    MonotoneMap::new_unchecked(f.domain().clone(), product.clone(), table)
}
