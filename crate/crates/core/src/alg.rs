//! Quantitative and continuous algebras on finite carriers: evaluation of
//! terms, homomorphisms, and the homomorphic-image / subalgebra / product
//! constructions.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::dist::Dist;
use crate::mspace::{check_nonexpanding, sup_power, FinMetric, MetricMap};
use crate::poset::{check_monotone, poset_power, FinPoset, MonotoneMap};
use crate::term::{Signature, Term, UnmappedVariable};

/// Rank of an argument tuple in a row-major operation table (first argument
/// varies slowest).
pub(crate) fn tuple_rank(tuple: &[usize], carrier: usize) -> usize {
    tuple.iter().fold(0, |acc, &i| acc * carrier + i)
}

/// All argument tuples of the given arity over a carrier, in rank order.
pub(crate) fn all_tuples(arity: usize, carrier: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(out.len() * carrier);
        for t in &out {
            for v in 0..carrier {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgError {
    #[error("missing operation table for symbol {0:?}")]
    MissingOp(String),
    #[error("table for {name:?} has {got} entries, expected {expected}")]
    TableSize {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("table for {name:?} maps a tuple outside the carrier")]
    TableRange { name: String },
    #[error("operation table given for a symbol {0:?} not in the signature")]
    UnknownOp(String),
}

fn check_tables(
    sig: &Signature,
    carrier_len: usize,
    ops: &BTreeMap<String, Vec<usize>>,
) -> Result<(), AlgError> {
    for (name, arity) in sig.symbols() {
        let table = ops
            .get(name)
            .ok_or_else(|| AlgError::MissingOp(name.clone()))?;
        let expected = carrier_len.pow(*arity as u32);
        if table.len() != expected {
            return Err(AlgError::TableSize {
                name: name.clone(),
                expected,
                got: table.len(),
            });
        }
        if table.iter().any(|&v| v >= carrier_len) {
            return Err(AlgError::TableRange { name: name.clone() });
        }
    }
    for name in ops.keys() {
        if sig.arity(name).is_none() {
            return Err(AlgError::UnknownOp(name.clone()));
        }
    }
    Ok(())
}

/// A quantitative algebra: a metric carrier with one total operation table
/// per signature symbol. Structural well-formedness (table shapes) is
/// enforced at construction; nonexpansiveness of the operations is checked
/// by [`validate_quant_algebra`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantAlgebra {
    sig: Signature,
    carrier: FinMetric,
    ops: BTreeMap<String, Vec<usize>>,
}

/// A continuous algebra: a poset carrier with one operation table per
/// symbol; monotonicity is checked by [`validate_cont_algebra`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContAlgebra {
    sig: Signature,
    carrier: FinPoset,
    ops: BTreeMap<String, Vec<usize>>,
}

/// Worst violating instance of an operation law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpWitness {
    pub symbol: String,
    pub tuple_a: Vec<String>,
    pub tuple_b: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraViolation {
    #[error("operation {} is not nonexpanding ({})", .0.symbol, .0.detail)]
    OpNotNonexpanding(OpWitness),
    #[error("operation {} is not monotone ({})", .0.symbol, .0.detail)]
    OpNotMonotone(OpWitness),
}

macro_rules! algebra_common {
    ($ty:ident, $carrier:ty) => {
        impl $ty {
            pub fn sig(&self) -> &Signature {
                &self.sig
            }

            pub fn carrier(&self) -> &$carrier {
                &self.carrier
            }

            pub fn op_table(&self, name: &str) -> &[usize] {
                &self.ops[name]
            }

            pub fn ops(&self) -> &BTreeMap<String, Vec<usize>> {
                &self.ops
            }

            pub fn apply(&self, name: &str, tuple: &[usize]) -> usize {
                self.ops[name][tuple_rank(tuple, self.carrier.len())]
            }

            /// Evaluate a term under an interpretation of its leaves as
            /// carrier point indices.
            pub fn eval_term(
                &self,
                interp: &BTreeMap<String, usize>,
                t: &Term,
            ) -> Result<usize, UnmappedVariable> {
                match t {
                    Term::Var(v) => interp
                        .get(v)
                        .copied()
                        .ok_or_else(|| UnmappedVariable(v.clone())),
                    Term::App(sym, args) => {
                        let vals = args
                            .iter()
                            .map(|a| self.eval_term(interp, a))
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(self.apply(sym, &vals))
                    }
                }
            }
        }
    };
}

algebra_common!(QuantAlgebra, FinMetric);
algebra_common!(ContAlgebra, FinPoset);

impl QuantAlgebra {
    pub fn new(
        sig: Signature,
        carrier: FinMetric,
        ops: BTreeMap<String, Vec<usize>>,
    ) -> Result<QuantAlgebra, AlgError> {
        check_tables(&sig, carrier.len(), &ops)?;
        Ok(QuantAlgebra { sig, carrier, ops })
    }
}

impl ContAlgebra {
    pub fn new(
        sig: Signature,
        carrier: FinPoset,
        ops: BTreeMap<String, Vec<usize>>,
    ) -> Result<ContAlgebra, AlgError> {
        check_tables(&sig, carrier.len(), &ops)?;
        Ok(ContAlgebra { sig, carrier, ops })
    }
}

/// Every operation must be nonexpanding from the sup power of the carrier.
/// Reports the worst violating tuple pair per offending symbol.
pub fn validate_quant_algebra(a: &QuantAlgebra) -> Result<(), Vec<AlgebraViolation>> {
    let mut violations = Vec::new();
    let n = a.carrier.len();
    for (name, arity) in a.sig.symbols().to_vec() {
        let tuples = all_tuples(arity, n);
        let mut worst: Option<(Dist, Dist, usize, usize)> = None;
        for (i, ta) in tuples.iter().enumerate() {
            for (j, tb) in tuples.iter().enumerate().skip(i + 1) {
                let source = Dist::sup(
                    ta.iter()
                        .zip(tb.iter())
                        .map(|(&x, &y)| a.carrier.dist(x, y).clone()),
                );
                let image = a
                    .carrier
                    .dist(a.op_table(&name)[i], a.op_table(&name)[j])
                    .clone();
                if image > source {
                    let margin_beats = match &worst {
                        None => true,
                        Some((wi, ws, _, _)) => {
                            (image.clone(), std::cmp::Reverse(source.clone()))
                                > (wi.clone(), std::cmp::Reverse(ws.clone()))
                        }
                    };
                    if margin_beats {
                        worst = Some((image, source, i, j));
                    }
                }
            }
        }
        if let Some((image, source, i, j)) = worst {
            let label = |t: &Vec<usize>| {
                t.iter()
                    .map(|&x| a.carrier.label(x).to_string())
                    .collect::<Vec<_>>()
            };
            violations.push(AlgebraViolation::OpNotNonexpanding(OpWitness {
                symbol: name.clone(),
                tuple_a: label(&tuples[i]),
                tuple_b: label(&tuples[j]),
                detail: format!("image distance {image} exceeds tuple distance {source}"),
            }));
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Every operation must be monotone in the componentwise order.
pub fn validate_cont_algebra(a: &ContAlgebra) -> Result<(), Vec<AlgebraViolation>> {
    let mut violations = Vec::new();
    let n = a.carrier.len();
    for (name, arity) in a.sig.symbols().to_vec() {
        let tuples = all_tuples(arity, n);
        let mut witness = None;
        'outer: for (i, ta) in tuples.iter().enumerate() {
            for (j, tb) in tuples.iter().enumerate() {
                let leq = ta.iter().zip(tb.iter()).all(|(&x, &y)| a.carrier.leq(x, y));
                if leq && !a.carrier.leq(a.op_table(&name)[i], a.op_table(&name)[j]) {
                    witness = Some((i, j));
                    break 'outer;
                }
            }
        }
        if let Some((i, j)) = witness {
            let label = |t: &Vec<usize>| {
                t.iter()
                    .map(|&x| a.carrier.label(x).to_string())
                    .collect::<Vec<_>>()
            };
            violations.push(AlgebraViolation::OpNotMonotone(OpWitness {
                symbol: name.clone(),
                tuple_a: label(&tuples[i]),
                tuple_b: label(&tuples[j]),
                detail: "comparable tuples with incomparable images".into(),
            }));
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// A candidate homomorphism between algebras over the same signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantHomo {
    pub source: QuantAlgebra,
    pub target: QuantAlgebra,
    pub table: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContHomo {
    pub source: ContAlgebra,
    pub target: ContAlgebra,
    pub table: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum HomoFailure {
    /// `h(op(tuple)) != op(h(tuple))`
    OpClash {
        symbol: String,
        tuple: Vec<String>,
    },
    /// the carrier map is not a morphism of the enriching base
    NotStructureMap {
        detail: String,
    },
    SignatureMismatch,
}

macro_rules! homo_common {
    ($homo:ident, $alg:ident) => {
        impl $homo {
            pub fn identity(a: &$alg) -> $homo {
                $homo {
                    source: a.clone(),
                    target: a.clone(),
                    table: (0..a.carrier().len()).collect(),
                }
            }

            pub fn apply(&self, i: usize) -> usize {
                self.table[i]
            }

            fn op_clash(&self) -> Option<HomoFailure> {
                for (name, arity) in self.source.sig().symbols() {
                    for tuple in all_tuples(*arity, self.source.carrier().len()) {
                        let mapped: Vec<usize> = tuple.iter().map(|&i| self.table[i]).collect();
                        if self.table[self.source.apply(name, &tuple)]
                            != self.target.apply(name, &mapped)
                        {
                            return Some(HomoFailure::OpClash {
                                symbol: name.clone(),
                                tuple: tuple
                                    .iter()
                                    .map(|&i| self.source.carrier().label(i).to_string())
                                    .collect(),
                            });
                        }
                    }
                }
                None
            }
        }
    };
}

homo_common!(QuantHomo, QuantAlgebra);
homo_common!(ContHomo, ContAlgebra);

/// A homomorphism commutes with every operation and its carrier map is
/// nonexpanding.
pub fn check_quant_homomorphism(h: &QuantHomo) -> Result<(), HomoFailure> {
    if h.source.sig() != h.target.sig() {
        return Err(HomoFailure::SignatureMismatch);
    }
    let map = MetricMap::new(
        h.source.carrier().clone(),
        h.target.carrier().clone(),
        h.table.clone(),
    )
    .map_err(|e| HomoFailure::NotStructureMap {
        detail: e.to_string(),
    })?;
    if let Err(w) = check_nonexpanding(&map) {
        return Err(HomoFailure::NotStructureMap {
            detail: format!(
                "expands ({}, {}) from {} to {}",
                w.x, w.y, w.source_dist, w.image_dist
            ),
        });
    }
    match h.op_clash() {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

/// A homomorphism commutes with every operation and its carrier map is
/// monotone.
pub fn check_cont_homomorphism(h: &ContHomo) -> Result<(), HomoFailure> {
    if h.source.sig() != h.target.sig() {
        return Err(HomoFailure::SignatureMismatch);
    }
    let map = MonotoneMap::new(
        h.source.carrier().clone(),
        h.target.carrier().clone(),
        h.table.clone(),
    )
    .map_err(|e| HomoFailure::NotStructureMap {
        detail: e.to_string(),
    })?;
    if let Err(w) = check_monotone(&map) {
        return Err(HomoFailure::NotStructureMap {
            detail: format!("not monotone on ({}, {})", w.x, w.y),
        });
    }
    match h.op_clash() {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

fn decode_product_index(mut idx: usize, sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for k in (0..sizes.len()).rev() {
        out[k] = idx % sizes[k];
        idx /= sizes[k];
    }
    out
}

fn encode_product_index(tuple: &[usize], sizes: &[usize]) -> usize {
    tuple.iter().zip(sizes).fold(0, |acc, (&i, &s)| acc * s + i)
}

/// Product of quantitative algebras over a shared signature: sup-product
/// carrier, componentwise operations. The empty product is the one-point
/// algebra. Projections are homomorphisms.
pub fn product_quant_algebra(factors: &[&QuantAlgebra]) -> (QuantAlgebra, Vec<QuantHomo>) {
    let sig = factors
        .first()
        .map(|a| a.sig().clone())
        .unwrap_or_else(Signature::empty);
    for f in factors {
        assert_eq!(f.sig(), &sig, "product factors must share the signature");
    }
    let sizes: Vec<usize> = factors.iter().map(|a| a.carrier().len()).collect();
    let carriers: Vec<&FinMetric> = factors.iter().map(|a| a.carrier()).collect();
    let (carrier, _) = crate::mspace::sup_product(&carriers);
    let total = carrier.len();
    let mut ops = BTreeMap::new();
    for (name, arity) in sig.symbols() {
        let mut table = Vec::with_capacity(total.pow(*arity as u32));
        for tuple in all_tuples(*arity, total) {
            // tuple of product points -> per-factor tuples
            let decoded: Vec<Vec<usize>> = tuple
                .iter()
                .map(|&p| decode_product_index(p, &sizes))
                .collect();
            let image: Vec<usize> = (0..factors.len())
                .map(|k| {
                    let factor_tuple: Vec<usize> = decoded.iter().map(|d| d[k]).collect();
                    factors[k].apply(name, &factor_tuple)
                })
                .collect();
            table.push(encode_product_index(&image, &sizes));
        }
        ops.insert(name.clone(), table);
    }
    let product = QuantAlgebra { sig, carrier, ops };
    let projections = (0..factors.len())
        .map(|k| QuantHomo {
            source: product.clone(),
            target: factors[k].clone(),
            table: (0..total)
                .map(|p| decode_product_index(p, &sizes)[k])
                .collect(),
        })
        .collect();
    (product, projections)
}

/// Product of continuous algebras; mirror of [`product_quant_algebra`].
pub fn product_cont_algebra(factors: &[&ContAlgebra]) -> (ContAlgebra, Vec<ContHomo>) {
    let sig = factors
        .first()
        .map(|a| a.sig().clone())
        .unwrap_or_else(Signature::empty);
    for f in factors {
        assert_eq!(f.sig(), &sig, "product factors must share the signature");
    }
    let sizes: Vec<usize> = factors.iter().map(|a| a.carrier().len()).collect();
    let carriers: Vec<&FinPoset> = factors.iter().map(|a| a.carrier()).collect();
    let (carrier, _) = crate::poset::poset_product(&carriers);
    let total = carrier.len();
    let mut ops = BTreeMap::new();
    for (name, arity) in sig.symbols() {
        let mut table = Vec::with_capacity(total.pow(*arity as u32));
        for tuple in all_tuples(*arity, total) {
            let decoded: Vec<Vec<usize>> = tuple
                .iter()
                .map(|&p| decode_product_index(p, &sizes))
                .collect();
            let image: Vec<usize> = (0..factors.len())
                .map(|k| {
                    let factor_tuple: Vec<usize> = decoded.iter().map(|d| d[k]).collect();
                    factors[k].apply(name, &factor_tuple)
                })
                .collect();
            table.push(encode_product_index(&image, &sizes));
        }
        ops.insert(name.clone(), table);
    }
    let product = ContAlgebra { sig, carrier, ops };
    let projections = (0..factors.len())
        .map(|k| ContHomo {
            source: product.clone(),
            target: factors[k].clone(),
            table: (0..total)
                .map(|p| decode_product_index(p, &sizes)[k])
                .collect(),
        })
        .collect();
    (product, projections)
}

fn op_closure(
    sig: &Signature,
    ops: &BTreeMap<String, Vec<usize>>,
    carrier_len: usize,
    seed: &BTreeSet<usize>,
) -> Vec<usize> {
    let mut closed: BTreeSet<usize> = seed.clone();
    loop {
        let mut added = false;
        for (name, arity) in sig.symbols() {
            let members: Vec<usize> = closed.iter().copied().collect();
            for tuple in all_tuples(*arity, members.len()) {
                let actual: Vec<usize> = tuple.iter().map(|&i| members[i]).collect();
                let v = ops[name][tuple_rank(&actual, carrier_len)];
                if closed.insert(v) {
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    closed.into_iter().collect()
}

fn restrict_tables(
    sig: &Signature,
    ops: &BTreeMap<String, Vec<usize>>,
    carrier_len: usize,
    subset: &[usize],
) -> BTreeMap<String, Vec<usize>> {
    let position: BTreeMap<usize, usize> =
        subset.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    sig.symbols()
        .iter()
        .map(|(name, arity)| {
            let table = all_tuples(*arity, subset.len())
                .into_iter()
                .map(|tuple| {
                    let actual: Vec<usize> = tuple.iter().map(|&i| subset[i]).collect();
                    position[&ops[name][tuple_rank(&actual, carrier_len)]]
                })
                .collect();
            (name.clone(), table)
        })
        .collect()
}

/// The least op-closed subset containing the generators, carrying the
/// restricted metric so that the inclusion is an isometric embedding.
pub fn subalgebra_generated_quant(
    a: &QuantAlgebra,
    generators: &BTreeSet<usize>,
) -> (QuantAlgebra, QuantHomo) {
    let subset = op_closure(a.sig(), a.ops(), a.carrier().len(), generators);
    let points: Vec<String> = subset
        .iter()
        .map(|&i| a.carrier().label(i).to_string())
        .collect();
    let dist = subset
        .iter()
        .map(|&i| {
            subset
                .iter()
                .map(|&j| a.carrier().dist(i, j).clone())
                .collect()
        })
        .collect();
    let carrier = FinMetric::new_unchecked(points, dist);
    let ops = restrict_tables(a.sig(), a.ops(), a.carrier().len(), &subset);
    let sub = QuantAlgebra {
        sig: a.sig().clone(),
        carrier,
        ops,
    };
    let embedding = QuantHomo {
        source: sub.clone(),
        target: a.clone(),
        table: subset,
    };
    (sub, embedding)
}

/// Mirror of [`subalgebra_generated_quant`]: the inclusion is an order
/// embedding (`x <= y` in the subalgebra iff the images compare).
pub fn subalgebra_generated_cont(
    a: &ContAlgebra,
    generators: &BTreeSet<usize>,
) -> (ContAlgebra, ContHomo) {
    let subset = op_closure(a.sig(), a.ops(), a.carrier().len(), generators);
    let points: Vec<String> = subset
        .iter()
        .map(|&i| a.carrier().label(i).to_string())
        .collect();
    let leq = subset
        .iter()
        .map(|&i| subset.iter().map(|&j| a.carrier().leq(i, j)).collect())
        .collect();
    let carrier = FinPoset::new_unchecked(points, leq);
    let ops = restrict_tables(a.sig(), a.ops(), a.carrier().len(), &subset);
    let sub = ContAlgebra {
        sig: a.sig().clone(),
        carrier,
        ops,
    };
    let embedding = ContHomo {
        source: sub.clone(),
        target: a.clone(),
        table: subset,
    };
    (sub, embedding)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a homomorphism: {0:?}")]
pub struct NotAHomomorphism(pub HomoFailure);

/// Image of a homomorphism: the target structure restricted to the image
/// points, with the corestriction as a surjective homomorphism.
pub fn homomorphic_image_quant(
    h: &QuantHomo,
) -> Result<(QuantAlgebra, QuantHomo), NotAHomomorphism> {
    check_quant_homomorphism(h).map_err(NotAHomomorphism)?;
    let image: Vec<usize> = {
        let set: BTreeSet<usize> = h.table.iter().copied().collect();
        set.into_iter().collect()
    };
    let points: Vec<String> = image
        .iter()
        .map(|&i| h.target.carrier().label(i).to_string())
        .collect();
    let dist = image
        .iter()
        .map(|&i| {
            image
                .iter()
                .map(|&j| h.target.carrier().dist(i, j).clone())
                .collect()
        })
        .collect();
    let carrier = FinMetric::new_unchecked(points, dist);
    let ops = restrict_tables(
        h.target.sig(),
        h.target.ops(),
        h.target.carrier().len(),
        &image,
    );
    let img = QuantAlgebra {
        sig: h.target.sig().clone(),
        carrier,
        ops,
    };
    let position: BTreeMap<usize, usize> = image.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let corestriction = QuantHomo {
        source: h.source.clone(),
        target: img.clone(),
        table: h.table.iter().map(|v| position[v]).collect(),
    };
    Ok((img, corestriction))
}

pub fn homomorphic_image_cont(h: &ContHomo) -> Result<(ContAlgebra, ContHomo), NotAHomomorphism> {
    check_cont_homomorphism(h).map_err(NotAHomomorphism)?;
    let image: Vec<usize> = {
        let set: BTreeSet<usize> = h.table.iter().copied().collect();
        set.into_iter().collect()
    };
    let points: Vec<String> = image
        .iter()
        .map(|&i| h.target.carrier().label(i).to_string())
        .collect();
    let leq = image
        .iter()
        .map(|&i| {
            image
                .iter()
                .map(|&j| h.target.carrier().leq(i, j))
                .collect()
        })
        .collect();
    let carrier = FinPoset::new_unchecked(points, leq);
    let ops = restrict_tables(
        h.target.sig(),
        h.target.ops(),
        h.target.carrier().len(),
        &image,
    );
    let img = ContAlgebra {
        sig: h.target.sig().clone(),
        carrier,
        ops,
    };
    let position: BTreeMap<usize, usize> = image.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let corestriction = ContHomo {
        source: h.source.clone(),
        target: img.clone(),
        table: h.table.iter().map(|v| position[v]).collect(),
    };
    Ok((img, corestriction))
}

/// Check that the image of an op table under a carrier subset is closed;
/// needed before collapsing onto an arbitrary subalgebra.
pub fn is_op_closed_quant(a: &QuantAlgebra, subset: &BTreeSet<usize>) -> bool {
    let members: Vec<usize> = subset.iter().copied().collect();
    a.sig().symbols().iter().all(|(name, arity)| {
        all_tuples(*arity, members.len()).into_iter().all(|tuple| {
            let actual: Vec<usize> = tuple.iter().map(|&i| members[i]).collect();
            subset.contains(&a.apply(name, &actual))
        })
    })
}

/// Sup power of a carrier, re-exported for the nonexpansiveness tests.
pub fn carrier_power(a: &QuantAlgebra, n: usize) -> FinMetric {
    sup_power(a.carrier(), n).0
}

pub fn carrier_power_pos(a: &ContAlgebra, n: usize) -> FinPoset {
    poset_power(a.carrier(), n).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mspace::{discrete_space, validate_metric, MetricCandidate};
    use crate::poset::chain_poset;

    fn q(n: i64, m: i64) -> Dist {
        Dist::ratio(n, m).unwrap()
    }

    fn two_point_space(d: Dist) -> FinMetric {
        validate_metric(&MetricCandidate {
            points: vec!["p".into(), "q".into()],
            dist: vec![vec![Dist::zero(), d.clone()], vec![d, Dist::zero()]],
        })
        .unwrap()
    }

    /// The two-element monoid {e, a} with a.a = a on a carrier with
    /// d(e, a) = 1.
    fn almost_commutative_monoid() -> QuantAlgebra {
        let sig = Signature::new([("mul", 2), ("e", 0)]).unwrap();
        let carrier = validate_metric(&MetricCandidate {
            points: vec!["e".into(), "a".into()],
            dist: vec![vec![Dist::zero(), q(1, 1)], vec![q(1, 1), Dist::zero()]],
        })
        .unwrap();
        let mut ops = BTreeMap::new();
        // mul: (e,e)->e, (e,a)->a, (a,e)->a, (a,a)->a
        ops.insert("mul".to_string(), vec![0, 1, 1, 1]);
        ops.insert("e".to_string(), vec![0]);
        QuantAlgebra::new(sig, carrier, ops).unwrap()
    }

    #[test]
    fn validation_of_quant_algebras() {
        // discrete carrier: anything is nonexpanding
        let sig = Signature::new([("f", 1)]).unwrap();
        let a = QuantAlgebra::new(
            sig.clone(),
            discrete_space(["p", "q"]),
            BTreeMap::from([("f".to_string(), vec![1, 0])]),
        )
        .unwrap();
        assert!(validate_quant_algebra(&a).is_ok());

        // identity on a 2-point space is fine
        let b = QuantAlgebra::new(
            sig.clone(),
            two_point_space(q(1, 1)),
            BTreeMap::from([("f".to_string(), vec![0, 1])]),
        )
        .unwrap();
        assert!(validate_quant_algebra(&b).is_ok());

        // expanding unary op: carrier p,q,r with d(p,q)=1, d(p,r)=3, f(p)=p, f(q)=r
        let carrier = validate_metric(&MetricCandidate {
            points: vec!["p".into(), "q".into(), "r".into()],
            dist: vec![
                vec![Dist::zero(), q(1, 1), q(3, 1)],
                vec![q(1, 1), Dist::zero(), q(3, 1)],
                vec![q(3, 1), q(3, 1), Dist::zero()],
            ],
        })
        .unwrap();
        let c = QuantAlgebra::new(
            sig,
            carrier,
            BTreeMap::from([("f".to_string(), vec![0, 2, 2])]),
        )
        .unwrap();
        let errs = validate_quant_algebra(&c).unwrap_err();
        assert!(matches!(&errs[0], AlgebraViolation::OpNotNonexpanding(w) if w.symbol == "f"));

        // almost-commutative monoid validates
        assert!(validate_quant_algebra(&almost_commutative_monoid()).is_ok());
    }

    #[test]
    fn validation_of_cont_algebras() {
        let c2 = chain_poset(["0", "1"]);
        let sig = Signature::new([("min", 2)]).unwrap();
        // min on the 2-chain: monotone
        let a = ContAlgebra::new(
            sig.clone(),
            c2.clone(),
            BTreeMap::from([("min".to_string(), vec![0, 0, 0, 1])]),
        )
        .unwrap();
        assert!(validate_cont_algebra(&a).is_ok());
        // constant op: monotone
        let sig1 = Signature::new([("c", 1)]).unwrap();
        let b = ContAlgebra::new(
            sig1.clone(),
            c2.clone(),
            BTreeMap::from([("c".to_string(), vec![1, 1])]),
        )
        .unwrap();
        assert!(validate_cont_algebra(&b).is_ok());
        // negation on the 2-chain: not monotone
        let c =
            ContAlgebra::new(sig1, c2, BTreeMap::from([("c".to_string(), vec![1, 0])])).unwrap();
        let errs = validate_cont_algebra(&c).unwrap_err();
        assert!(matches!(&errs[0], AlgebraViolation::OpNotMonotone(_)));
    }

    #[test]
    fn eval_term_cases() {
        let a = almost_commutative_monoid();
        let interp = BTreeMap::from([("x0".to_string(), 0), ("x1".to_string(), 1)]);
        assert_eq!(a.eval_term(&interp, &Term::var("x0")).unwrap(), 0);
        let t = Term::app("mul", vec![Term::var("x0"), Term::var("x1")]);
        assert_eq!(a.eval_term(&interp, &t).unwrap(), 1);
        // constants evaluate independently of the interpretation
        let e = Term::app("e", vec![]);
        assert_eq!(a.eval_term(&BTreeMap::new(), &e).unwrap(), 0);
        assert!(a.eval_term(&BTreeMap::new(), &Term::var("x9")).is_err());
    }

    #[test]
    fn homomorphism_checks() {
        let a = almost_commutative_monoid();
        assert!(check_quant_homomorphism(&QuantHomo::identity(&a)).is_ok());

        // projection from a product is a homomorphism
        let (prod, projs) = product_quant_algebra(&[&a, &a]);
        assert!(validate_quant_algebra(&prod).is_ok());
        for p in &projs {
            assert!(check_quant_homomorphism(p).is_ok());
        }

        // perturbing one op entry breaks it
        let mut bad = QuantHomo::identity(&a);
        bad.table = vec![1, 0]; // swap e and a: not a monoid endomorphism
        let err = check_quant_homomorphism(&bad).unwrap_err();
        assert!(matches!(err, HomoFailure::OpClash { .. }));
    }

    #[test]
    fn product_of_empty_family_is_terminal() {
        let (one, _) = product_quant_algebra(&[]);
        assert_eq!(one.carrier().len(), 1);
        let (one_p, _) = product_cont_algebra(&[]);
        assert_eq!(one_p.carrier().len(), 1);
    }

    #[test]
    fn product_min_on_diamond() {
        let c2 = chain_poset(["0", "1"]);
        let sig = Signature::new([("min", 2)]).unwrap();
        let a = ContAlgebra::new(
            sig,
            c2,
            BTreeMap::from([("min".to_string(), vec![0, 0, 0, 1])]),
        )
        .unwrap();
        let (prod, projs) = product_cont_algebra(&[&a, &a]);
        assert_eq!(prod.carrier().len(), 4);
        assert!(validate_cont_algebra(&prod).is_ok());
        for p in &projs {
            assert!(check_cont_homomorphism(p).is_ok());
        }
        // min((0,1),(1,0)) = (0,0)
        let i = prod.carrier().index_of("(0,1)").unwrap();
        let j = prod.carrier().index_of("(1,0)").unwrap();
        let bot = prod.carrier().index_of("(0,0)").unwrap();
        assert_eq!(prod.apply("min", &[i, j]), bot);
    }

    #[test]
    fn diagonal_into_square_is_homomorphism() {
        let a = almost_commutative_monoid();
        let (prod, _) = product_quant_algebra(&[&a, &a]);
        let table: Vec<usize> = (0..a.carrier().len())
            .map(|i| {
                let lbl = format!("({},{})", a.carrier().label(i), a.carrier().label(i));
                prod.carrier().index_of(&lbl).unwrap()
            })
            .collect();
        let diag = QuantHomo {
            source: a.clone(),
            target: prod,
            table,
        };
        assert!(check_quant_homomorphism(&diag).is_ok());
    }

    #[test]
    fn subalgebra_closure() {
        let a = almost_commutative_monoid();
        // whole carrier
        let all: BTreeSet<usize> = (0..2).collect();
        let (sub, emb) = subalgebra_generated_quant(&a, &all);
        assert_eq!(sub.carrier().len(), 2);
        assert!(check_quant_homomorphism(&emb).is_ok());
        // generated by e alone: {e} is closed since e.e = e
        let (sub_e, emb_e) = subalgebra_generated_quant(&a, &BTreeSet::from([0]));
        assert_eq!(sub_e.carrier().len(), 1);
        assert!(check_quant_homomorphism(&emb_e).is_ok());
        // empty generators: the constant e forces {e}
        let (sub0, _) = subalgebra_generated_quant(&a, &BTreeSet::new());
        assert_eq!(sub0.carrier().len(), 1);
        assert_eq!(sub0.carrier().label(0), "e");
        assert!(validate_quant_algebra(&sub0).is_ok());
    }

    #[test]
    fn image_of_collapse() {
        // collapse of the meet-semilattice on a 2-chain onto its bottom
        let c2 = chain_poset(["0", "1"]);
        let sig = Signature::new([("min", 2)]).unwrap();
        let a = ContAlgebra::new(
            sig.clone(),
            c2.clone(),
            BTreeMap::from([("min".to_string(), vec![0, 0, 0, 1])]),
        )
        .unwrap();
        let one = ContAlgebra::new(
            sig,
            chain_poset(["0"]),
            BTreeMap::from([("min".to_string(), vec![0])]),
        )
        .unwrap();
        let h = ContHomo {
            source: a.clone(),
            target: one,
            table: vec![0, 0],
        };
        let (img, sur) = homomorphic_image_cont(&h).unwrap();
        assert_eq!(img.carrier().len(), 1);
        assert!(sur.table.iter().all(|&v| v == 0));
        // identity gives back the algebra
        let (img2, _) = homomorphic_image_cont(&ContHomo::identity(&a)).unwrap();
        assert_eq!(img2, a);
        // a non-homomorphism is rejected
        let bad = ContHomo {
            source: a.clone(),
            target: a.clone(),
            table: vec![1, 0],
        };
        assert!(homomorphic_image_cont(&bad).is_err());
    }

    /// Sensitivity: evaluation is nonexpanding in the interpretation, and
    /// monotone in the poset case.
    #[test]
    fn evaluation_sensitivity() {
        let a = almost_commutative_monoid();
        let t = Term::app(
            "mul",
            vec![
                Term::var("x0"),
                Term::app("mul", vec![Term::var("x1"), Term::var("x0")]),
            ],
        );
        let n = a.carrier().len();
        for f0 in 0..n {
            for f1 in 0..n {
                for g0 in 0..n {
                    for g1 in 0..n {
                        let f = BTreeMap::from([("x0".to_string(), f0), ("x1".to_string(), f1)]);
                        let g = BTreeMap::from([("x0".to_string(), g0), ("x1".to_string(), g1)]);
                        let dv = a
                            .carrier()
                            .dist(a.eval_term(&f, &t).unwrap(), a.eval_term(&g, &t).unwrap())
                            .clone();
                        let df = a
                            .carrier()
                            .dist(f0, g0)
                            .clone()
                            .max(a.carrier().dist(f1, g1).clone());
                        assert!(dv <= df);
                    }
                }
            }
        }
    }

    /// The depth-bounded term carrier realizes the free-algebra adjunction
    /// locally: evaluating terms over the carrier's own points is
    /// structural and contracts the term metric.
    #[test]
    fn evaluation_contracts_term_metric() {
        use crate::term::{enumerate_terms, term_metric};
        let a = almost_commutative_monoid();
        let gens: Vec<String> = a.carrier().points().to_vec();
        let interp: BTreeMap<String, usize> = gens
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let terms = enumerate_terms(a.sig(), &gens, 2, 10_000).unwrap();
        for t in &terms {
            if let Term::App(sym, args) = t {
                let vals: Vec<usize> = args
                    .iter()
                    .map(|arg| a.eval_term(&interp, arg).unwrap())
                    .collect();
                assert_eq!(a.eval_term(&interp, t).unwrap(), a.apply(sym, &vals));
            }
            for u in &terms {
                let d_term = term_metric(a.carrier(), t, u).unwrap();
                let d_eval = a.carrier().dist(
                    a.eval_term(&interp, t).unwrap(),
                    a.eval_term(&interp, u).unwrap(),
                );
                assert!(*d_eval <= d_term);
            }
        }
    }

    /// Homomorphisms commute with evaluation.
    #[test]
    fn homomorphisms_commute_with_eval() {
        let a = almost_commutative_monoid();
        let (prod, projs) = product_quant_algebra(&[&a, &a]);
        let h = &projs[0];
        let t = Term::app("mul", vec![Term::var("x0"), Term::var("x1")]);
        for i in 0..prod.carrier().len() {
            for j in 0..prod.carrier().len() {
                let f = BTreeMap::from([("x0".to_string(), i), ("x1".to_string(), j)]);
                let hf = BTreeMap::from([
                    ("x0".to_string(), h.apply(i)),
                    ("x1".to_string(), h.apply(j)),
                ]);
                assert_eq!(
                    h.apply(prod.eval_term(&f, &t).unwrap()),
                    a.eval_term(&hf, &t).unwrap()
                );
            }
        }
    }
}
