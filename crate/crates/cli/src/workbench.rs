//! Parsed workbench files: named declarations of every kind, plus the
//! resolution layer that turns them into validated core values.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use qaw_core::alg::{ContAlgebra, QuantAlgebra};
use qaw_core::bridge::{Carrier, Mode, MonadPresentation};
use qaw_core::colim::{MetTail, OmegaChainMet, OmegaChainPos, ParallelPair};
use qaw_core::dist::Dist;
use qaw_core::eqn::{ContEq, QuantEq};
use qaw_core::mspace::{validate_metric, FinMetric, MetricCandidate, MetricMap};
use qaw_core::poset::{validate_poset, FinPoset, MonotoneMap, PosetCandidate};
use qaw_core::term::{ExtTerm, Signature, Term};

/// A parsed workbench file: order-independent named declarations, names
/// unique per kind.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WorkbenchFile {
    #[serde(default)]
    pub spaces: BTreeMap<String, MetricCandidate>,
    #[serde(default)]
    pub posets: BTreeMap<String, PosetCandidate>,
    #[serde(default)]
    pub signatures: BTreeMap<String, Signature>,
    #[serde(default)]
    pub algebras: BTreeMap<String, AlgebraDecl>,
    #[serde(default)]
    pub equations: BTreeMap<String, EqDecl>,
    #[serde(default)]
    pub chains: BTreeMap<String, ChainDecl>,
    #[serde(default)]
    pub pairs: BTreeMap<String, PairDecl>,
    #[serde(default)]
    pub presentations: BTreeMap<String, PresentationDecl>,
}

/// An algebra over a named carrier; the signature is implicit in the op
/// list, tables are row-major point labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDecl {
    pub carrier: String,
    pub ops: Vec<OpDecl>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpDecl {
    pub name: String,
    pub arity: usize,
    pub table: Vec<String>,
}

/// A declared equation: bounded form for quantitative use, plain form over
/// extended terms. Inequations are desugared at parse time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EqDecl {
    Bounded { left: Term, right: Term, eps: Dist },
    Plain { left: ExtTerm, right: ExtTerm },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeclMode {
    Met,
    Pos,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainDecl {
    pub mode: DeclMode,
    pub stages: Vec<String>,
    pub links: Vec<BTreeMap<String, String>>,
    pub tail: TailDecl,
    /// Request for the catalogued strictly growing family; always rejected
    /// at resolution since its colimit is not finite.
    #[serde(default)]
    pub ordinal_family: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TailDecl {
    Stable,
    /// Declared limits for pairs of the last stage; unlisted pairs default
    /// to the last stage's distance.
    Limits(Vec<(String, String, Dist)>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDecl {
    pub from: String,
    pub to: String,
    pub f0: BTreeMap<String, String>,
    pub f1: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PresentationDecl {
    Builtin {
        which: String,
        mode: DeclMode,
        arity: usize,
    },
    Explicit {
        mode: DeclMode,
        arity: usize,
        carriers: Vec<CarrierDecl>,
        units: Vec<Vec<String>>,
        exts: Vec<ExtDecl>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CarrierDecl {
    Space(MetricCandidate),
    Poset(PosetCandidate),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtDecl {
    pub n: usize,
    pub m: usize,
    pub k: Vec<String>,
    pub table: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ResolveError {
    #[error("no {kind} named {name:?}")]
    Unresolved { kind: &'static str, name: String },
    #[error("{kind} {name:?} is invalid: {detail}")]
    Invalid {
        kind: &'static str,
        name: String,
        detail: String,
    },
    #[error("{0}")]
    Other(String),
}

/// A resolved algebra, metric or continuous depending on its carrier kind.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraValue {
    Quant(QuantAlgebra),
    Cont(ContAlgebra),
}

/// A resolved chain of either mode.
#[derive(Debug, Clone, PartialEq)]
pub enum ChainValue {
    Met(OmegaChainMet),
    Pos(OmegaChainPos),
}

fn label_table(
    names: &[String],
    lookup: impl Fn(&str) -> Option<usize>,
    kind: &'static str,
    what: &str,
) -> Result<Vec<usize>, ResolveError> {
    names
        .iter()
        .map(|l| {
            lookup(l).ok_or_else(|| ResolveError::Invalid {
                kind,
                name: what.to_string(),
                detail: format!("unknown point {l:?}"),
            })
        })
        .collect()
}

fn check_labels(kind: &'static str, name: &str, labels: &[String]) -> Result<(), ResolveError> {
    for l in labels {
        let ok = !l.is_empty()
            && l.chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && l.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(ResolveError::Invalid {
                kind,
                name: name.into(),
                detail: format!("point label {l:?} is not an identifier"),
            });
        }
    }
    Ok(())
}

impl WorkbenchFile {
    pub fn raw_space(&self, name: &str) -> Result<&MetricCandidate, ResolveError> {
        self.spaces
            .get(name)
            .ok_or_else(|| ResolveError::Unresolved {
                kind: "space",
                name: name.into(),
            })
    }

    pub fn raw_poset(&self, name: &str) -> Result<&PosetCandidate, ResolveError> {
        self.posets
            .get(name)
            .ok_or_else(|| ResolveError::Unresolved {
                kind: "poset",
                name: name.into(),
            })
    }

    pub fn metric(&self, name: &str) -> Result<FinMetric, ResolveError> {
        let raw = self.raw_space(name)?;
        check_labels("space", name, &raw.points)?;
        validate_metric(raw).map_err(|e| ResolveError::Invalid {
            kind: "space",
            name: name.into(),
            detail: e.to_string(),
        })
    }

    pub fn poset(&self, name: &str) -> Result<FinPoset, ResolveError> {
        let raw = self.raw_poset(name)?;
        check_labels("poset", name, &raw.points)?;
        validate_poset(raw).map_err(|e| ResolveError::Invalid {
            kind: "poset",
            name: name.into(),
            detail: e.to_string(),
        })
    }

    pub fn signature(&self, name: &str) -> Result<&Signature, ResolveError> {
        self.signatures
            .get(name)
            .ok_or_else(|| ResolveError::Unresolved {
                kind: "signature",
                name: name.into(),
            })
    }

    pub fn equation(&self, name: &str) -> Result<&EqDecl, ResolveError> {
        self.equations
            .get(name)
            .ok_or_else(|| ResolveError::Unresolved {
                kind: "equation",
                name: name.into(),
            })
    }

    /// Resolve an algebra: metric carriers yield quantitative algebras,
    /// poset carriers continuous ones.
    pub fn algebra(&self, name: &str) -> Result<AlgebraValue, ResolveError> {
        let decl = self
            .algebras
            .get(name)
            .ok_or_else(|| ResolveError::Unresolved {
                kind: "algebra",
                name: name.into(),
            })?;
        let sig =
            Signature::new(decl.ops.iter().map(|op| (op.name.clone(), op.arity))).map_err(|e| {
                ResolveError::Invalid {
                    kind: "algebra",
                    name: name.into(),
                    detail: e.to_string(),
                }
            })?;
        let invalid = |detail: String| ResolveError::Invalid {
            kind: "algebra",
            name: name.into(),
            detail,
        };
        if self.spaces.contains_key(&decl.carrier) {
            let carrier = self.metric(&decl.carrier)?;
            let ops = decl
                .ops
                .iter()
                .map(|op| {
                    let table = label_table(&op.table, |l| carrier.index_of(l), "algebra", name)?;
                    Ok((op.name.clone(), table))
                })
                .collect::<Result<BTreeMap<_, _>, ResolveError>>()?;
            QuantAlgebra::new(sig, carrier, ops)
                .map(AlgebraValue::Quant)
                .map_err(|e| invalid(e.to_string()))
        } else if self.posets.contains_key(&decl.carrier) {
            let carrier = self.poset(&decl.carrier)?;
            let ops = decl
                .ops
                .iter()
                .map(|op| {
                    let table = label_table(&op.table, |l| carrier.index_of(l), "algebra", name)?;
                    Ok((op.name.clone(), table))
                })
                .collect::<Result<BTreeMap<_, _>, ResolveError>>()?;
            ContAlgebra::new(sig, carrier, ops)
                .map(AlgebraValue::Cont)
                .map_err(|e| invalid(e.to_string()))
        } else {
            Err(ResolveError::Unresolved {
                kind: "space or poset",
                name: decl.carrier.clone(),
            })
        }
    }

    /// Resolve an equation against a quantitative algebra: bounded
    /// equations directly, plain equations when both sides are base terms.
    pub fn quant_eq(&self, name: &str) -> Result<QuantEq, ResolveError> {
        match self.equation(name)? {
            EqDecl::Bounded { left, right, eps } => {
                if !eps.is_finite() {
                    return Err(ResolveError::Invalid {
                        kind: "equation",
                        name: name.into(),
                        detail: "equation bounds must be finite".into(),
                    });
                }
                Ok(QuantEq::new(left.clone(), right.clone(), eps.clone()))
            }
            EqDecl::Plain {
                left: ExtTerm::Base(l),
                right: ExtTerm::Base(r),
            } => Ok(QuantEq::strict(l.clone(), r.clone())),
            EqDecl::Plain { .. } => Err(ResolveError::Invalid {
                kind: "equation",
                name: name.into(),
                detail: "contains joins; only meaningful for continuous algebras".into(),
            }),
        }
    }

    /// Resolve an equation against a continuous algebra: plain equations
    /// directly, bounded ones only at bound zero.
    pub fn cont_eq(&self, name: &str) -> Result<ContEq, ResolveError> {
        match self.equation(name)? {
            EqDecl::Plain { left, right } => Ok(ContEq::new(left.clone(), right.clone())),
            EqDecl::Bounded { left, right, eps } if eps.is_zero() => Ok(ContEq::new(
                ExtTerm::base(left.clone()),
                ExtTerm::base(right.clone()),
            )),
            EqDecl::Bounded { .. } => Err(ResolveError::Invalid {
                kind: "equation",
                name: name.into(),
                detail: "a positive bound has no continuous reading".into(),
            }),
        }
    }

    pub fn chain(&self, name: &str) -> Result<ChainValue, ResolveError> {
        let decl = self
            .chains
            .get(name)
            .ok_or_else(|| ResolveError::Unresolved {
                kind: "chain",
                name: name.into(),
            })?;
        let invalid = |detail: String| ResolveError::Invalid {
            kind: "chain",
            name: name.into(),
            detail,
        };
        if let Some(n) = decl.ordinal_family {
            if decl.mode == DeclMode::Met {
                return Err(invalid(
                    "the ordinal family is a poset chain request".into(),
                ));
            }
            return OmegaChainPos::ordinal_family(n)
                .map(ChainValue::Pos)
                .map_err(|e| invalid(e.to_string()));
        }
        match decl.mode {
            DeclMode::Met => {
                let stages: Vec<FinMetric> = decl
                    .stages
                    .iter()
                    .map(|s| self.metric(s))
                    .collect::<Result<_, _>>()?;
                let mut links = Vec::new();
                for (i, assign) in decl.links.iter().enumerate() {
                    if i + 1 >= stages.len() {
                        return Err(invalid("more links than stage gaps".into()));
                    }
                    links.push(
                        MetricMap::from_labels(stages[i].clone(), stages[i + 1].clone(), assign)
                            .map_err(|e| invalid(e.to_string()))?,
                    );
                }
                let tail = match &decl.tail {
                    TailDecl::Stable => MetTail::Stable,
                    TailDecl::Limits(entries) => {
                        let last = stages
                            .last()
                            .ok_or_else(|| invalid("chain needs a stage".into()))?;
                        let n = last.len();
                        let mut lim = last.table().clone();
                        for (x, y, d) in entries {
                            let i = last
                                .index_of(x)
                                .ok_or_else(|| invalid(format!("unknown point {x:?}")))?;
                            let j = last
                                .index_of(y)
                                .ok_or_else(|| invalid(format!("unknown point {y:?}")))?;
                            lim[i][j] = d.clone();
                            lim[j][i] = d.clone();
                        }
                        for (i, row) in lim.iter_mut().enumerate().take(n) {
                            row[i] = Dist::zero();
                        }
                        MetTail::DeclaredLimits(lim)
                    }
                };
                OmegaChainMet::new(stages, links, tail)
                    .map(ChainValue::Met)
                    .map_err(|e| invalid(e.to_string()))
            }
            DeclMode::Pos => {
                if !matches!(decl.tail, TailDecl::Stable) {
                    return Err(invalid("poset chains only support stable tails".into()));
                }
                let stages: Vec<FinPoset> = decl
                    .stages
                    .iter()
                    .map(|s| self.poset(s))
                    .collect::<Result<_, _>>()?;
                let mut links = Vec::new();
                for (i, assign) in decl.links.iter().enumerate() {
                    if i + 1 >= stages.len() {
                        return Err(invalid("more links than stage gaps".into()));
                    }
                    links.push(
                        MonotoneMap::from_labels(stages[i].clone(), stages[i + 1].clone(), assign)
                            .map_err(|e| invalid(e.to_string()))?,
                    );
                }
                OmegaChainPos::new(stages, links)
                    .map(ChainValue::Pos)
                    .map_err(|e| invalid(e.to_string()))
            }
        }
    }

    pub fn pair(&self, name: &str) -> Result<ParallelPair, ResolveError> {
        let decl = self
            .pairs
            .get(name)
            .ok_or_else(|| ResolveError::Unresolved {
                kind: "pair",
                name: name.into(),
            })?;
        let from = self.poset(&decl.from)?;
        let to = self.poset(&decl.to)?;
        let invalid = |detail: String| ResolveError::Invalid {
            kind: "pair",
            name: name.into(),
            detail,
        };
        let f0 = MonotoneMap::from_labels(from.clone(), to.clone(), &decl.f0)
            .map_err(|e| invalid(e.to_string()))?;
        let f1 =
            MonotoneMap::from_labels(from, to, &decl.f1).map_err(|e| invalid(e.to_string()))?;
        Ok(ParallelPair::new(f0, f1))
    }

    pub fn presentation(&self, name: &str) -> Result<MonadPresentation, ResolveError> {
        let decl = self
            .presentations
            .get(name)
            .ok_or_else(|| ResolveError::Unresolved {
                kind: "presentation",
                name: name.into(),
            })?;
        let invalid = |detail: String| ResolveError::Invalid {
            kind: "presentation",
            name: name.into(),
            detail,
        };
        match decl {
            PresentationDecl::Builtin { which, mode, arity } => {
                let mode = match mode {
                    DeclMode::Met => Mode::Met,
                    DeclMode::Pos => Mode::Pos,
                };
                match (which.as_str(), mode) {
                    ("identity", _) => Ok(qaw_core::fixtures::identity(mode, *arity)),
                    ("semilattice", _) => Ok(qaw_core::fixtures::semilattice(mode, *arity)),
                    ("maybe", _) => Ok(qaw_core::fixtures::maybe(mode, *arity)),
                    ("writer", Mode::Met) => Ok(qaw_core::fixtures::writer(*arity)),
                    ("lift", Mode::Pos) => Ok(qaw_core::fixtures::lift(*arity)),
                    (other, _) => Err(invalid(format!("unknown builtin {other:?} for this mode"))),
                }
            }
            PresentationDecl::Explicit {
                mode,
                arity,
                carriers,
                units,
                exts,
            } => {
                if carriers.len() != arity + 1 {
                    return Err(invalid(format!(
                        "need {} carriers, got {}",
                        arity + 1,
                        carriers.len()
                    )));
                }
                let carriers: Vec<Carrier> = carriers
                    .iter()
                    .enumerate()
                    .map(|(i, c)| match (mode, c) {
                        (DeclMode::Met, CarrierDecl::Space(s)) => validate_metric(s)
                            .map(Carrier::Met)
                            .map_err(|e| invalid(format!("carrier {i}: {e}"))),
                        (DeclMode::Pos, CarrierDecl::Poset(p)) => validate_poset(p)
                            .map(Carrier::Pos)
                            .map_err(|e| invalid(format!("carrier {i}: {e}"))),
                        _ => Err(invalid(format!("carrier {i} does not match the mode"))),
                    })
                    .collect::<Result<_, _>>()?;
                if units.len() != arity + 1 {
                    return Err(invalid("one unit list per carrier required".into()));
                }
                let unit_tables: Vec<Vec<usize>> =
                    units
                        .iter()
                        .enumerate()
                        .map(|(n, labels)| {
                            labels
                                .iter()
                                .map(|l| {
                                    carriers[n].points().iter().position(|p| p == l).ok_or_else(
                                        || invalid(format!("unit {n}: unknown point {l:?}")),
                                    )
                                })
                                .collect()
                        })
                        .collect::<Result<_, _>>()?;
                let mut ext = BTreeMap::new();
                for e in exts {
                    if e.n > *arity || e.m > *arity {
                        return Err(invalid(format!(
                            "ext ({}, {}) outside the arity budget",
                            e.n, e.m
                        )));
                    }
                    let k: Vec<usize> =
                        e.k.iter()
                            .map(|l| {
                                carriers[e.m]
                                    .points()
                                    .iter()
                                    .position(|p| p == l)
                                    .ok_or_else(|| invalid(format!("ext k: unknown point {l:?}")))
                            })
                            .collect::<Result<_, _>>()?;
                    let table: Vec<usize> = e
                        .table
                        .iter()
                        .map(|l| {
                            carriers[e.m]
                                .points()
                                .iter()
                                .position(|p| p == l)
                                .ok_or_else(|| invalid(format!("ext table: unknown point {l:?}")))
                        })
                        .collect::<Result<_, _>>()?;
                    ext.insert((e.n, e.m, k), table);
                }
                let mode = match mode {
                    DeclMode::Met => Mode::Met,
                    DeclMode::Pos => Mode::Pos,
                };
                MonadPresentation::new(mode, carriers, unit_tables, ext)
                    .map_err(|e| invalid(e.to_string()))
            }
        }
    }
}
