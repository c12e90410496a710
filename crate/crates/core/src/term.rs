//! Signatures, finitary terms, similarity, the term metric and term order,
//! depth-bounded enumeration, substitution, and extended terms with formal
//! omega-joins.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dist::Dist;
use crate::mspace::{BoundExceeded, FinMetric};
use crate::poset::FinPoset;

/// A finitary signature: named symbols with arities. Names are unique.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(String, usize)>", into = "Vec<(String, usize)>")]
pub struct Signature {
    symbols: Vec<(String, usize)>,
}

impl TryFrom<Vec<(String, usize)>> for Signature {
    type Error = SigError;

    fn try_from(symbols: Vec<(String, usize)>) -> Result<Signature, SigError> {
        Signature::new(symbols)
    }
}

impl From<Signature> for Vec<(String, usize)> {
    fn from(sig: Signature) -> Vec<(String, usize)> {
        sig.symbols
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SigError {
    #[error("duplicate symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("symbol {name:?} has arity {expected}, applied to {got} arguments")]
    ArityMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
}

impl Signature {
    pub fn new<I, S>(symbols: I) -> Result<Signature, SigError>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let symbols: Vec<(String, usize)> =
            symbols.into_iter().map(|(s, a)| (s.into(), a)).collect();
        let mut seen = BTreeSet::new();
        for (name, _) in &symbols {
            if !seen.insert(name.clone()) {
                return Err(SigError::DuplicateSymbol(name.clone()));
            }
        }
        Ok(Signature { symbols })
    }

    pub fn empty() -> Signature {
        Signature {
            symbols: Vec::new(),
        }
    }

    pub fn symbols(&self) -> &[(String, usize)] {
        &self.symbols
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.symbols
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, a)| a)
    }
}

/// A finitary term: a variable-or-atom leaf, or a symbol applied to
/// arguments. Leaves are opaque labels; whether they stand for variables or
/// for points of a carrier depends on the operation consuming the term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var<S: Into<String>>(s: S) -> Term {
        Term::Var(s.into())
    }

    pub fn app<S: Into<String>>(sym: S, args: Vec<Term>) -> Term {
        Term::App(sym.into(), args)
    }

    /// Check arities against a signature, recursively.
    pub fn well_formed(&self, sig: &Signature) -> Result<(), SigError> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(sym, args) => {
                let arity = sig
                    .arity(sym)
                    .ok_or_else(|| SigError::UnknownSymbol(sym.clone()))?;
                if arity != args.len() {
                    return Err(SigError::ArityMismatch {
                        name: sym.clone(),
                        expected: arity,
                        got: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.well_formed(sig))
            }
        }
    }

    pub fn height(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(Term::height).max().map_or(0, |h| h + 1),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(sym, args) => {
                if args.is_empty() {
                    write!(f, "{sym}()")
                } else {
                    write!(f, "{sym}(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")
                }
            }
        }
    }
}

/// The reserved hole variable of generated join families.
pub const HOLE: &str = "z";

/// An extended term: a finitary term, or a formal omega-join of a family
/// that is either eventually constant or generated by iterating a step term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtTerm {
    Base(Term),
    Join(JoinFamily),
}

/// A representable countable family of extended terms.
///
/// `EventuallyConstant` lists a finite prefix whose last entry repeats
/// forever. `Generated` denotes `t_0 = seed`, `t_{k+1} = step[z := t_k]`;
/// the step is a plain term with the distinguished hole variable [`HOLE`]
/// and finitely many parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum JoinFamily {
    EventuallyConstant(Vec<ExtTerm>),
    Generated { seed: Box<ExtTerm>, step: Term },
}

impl ExtTerm {
    pub fn base(t: Term) -> ExtTerm {
        ExtTerm::Base(t)
    }

    pub fn join(terms: Vec<ExtTerm>) -> ExtTerm {
        assert!(!terms.is_empty(), "a join family needs at least one term");
        ExtTerm::Join(JoinFamily::EventuallyConstant(terms))
    }

    pub fn generated(seed: ExtTerm, step: Term) -> ExtTerm {
        assert!(
            !vars_of_ext(&seed).contains(HOLE),
            "the hole variable may not occur in seeds"
        );
        ExtTerm::Join(JoinFamily::Generated {
            seed: Box::new(seed),
            step,
        })
    }

    pub fn well_formed(&self, sig: &Signature) -> Result<(), SigError> {
        match self {
            ExtTerm::Base(t) => t.well_formed(sig),
            ExtTerm::Join(JoinFamily::EventuallyConstant(ts)) => {
                ts.iter().try_for_each(|t| t.well_formed(sig))
            }
            ExtTerm::Join(JoinFamily::Generated { seed, step }) => {
                seed.well_formed(sig)?;
                step.well_formed(sig)
            }
        }
    }
}

impl fmt::Display for ExtTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtTerm::Base(t) => write!(f, "{t}"),
            ExtTerm::Join(JoinFamily::EventuallyConstant(ts)) => {
                write!(f, "join [")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, "]")
            }
            ExtTerm::Join(JoinFamily::Generated { seed, step }) => {
                write!(f, "join from {seed} step {step}")
            }
        }
    }
}

/// The variable namespace: `x0, x1, ...`; `V_n` is the first `n` of them.
pub fn var_name(i: usize) -> String {
    format!("x{i}")
}

pub fn var_set_n(n: usize) -> Vec<String> {
    (0..n).map(var_name).collect()
}

/// Exact set of leaf labels occurring in a term.
pub fn vars(t: &Term) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_vars(t, &mut out);
    out
}

fn collect_vars(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(v) => {
            out.insert(v.clone());
        }
        Term::App(_, args) => args.iter().for_each(|a| collect_vars(a, out)),
    }
}

/// Variables of an extended term. For generated families the hole does not
/// count: the family's variables are the seed's plus the step's parameters.
pub fn vars_of_ext(t: &ExtTerm) -> BTreeSet<String> {
    match t {
        ExtTerm::Base(t) => vars(t),
        ExtTerm::Join(JoinFamily::EventuallyConstant(ts)) => {
            ts.iter().flat_map(vars_of_ext).collect()
        }
        ExtTerm::Join(JoinFamily::Generated { seed, step }) => {
            let mut out = vars_of_ext(seed);
            let mut step_vars = vars(step);
            step_vars.remove(HOLE);
            out.extend(step_vars);
            out
        }
    }
}

/// Similarity: all leaves are identified, and composite terms are similar
/// iff their head symbols agree and their arguments are pairwise similar.
pub fn similar(t: &Term, u: &Term) -> bool {
    match (t, u) {
        (Term::Var(_), Term::Var(_)) => true,
        (Term::App(s, ts), Term::App(r, us)) => {
            s == r && ts.len() == us.len() && ts.iter().zip(us).all(|(a, b)| similar(a, b))
        }
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("leaf {0:?} is not a point of the carrier")]
pub struct UnknownLeaf(pub String);

/// The term metric over a carrier space: leaf distances from the carrier,
/// infinity across dissimilar terms, and the sup over children of similar
/// composites.
pub fn term_metric(m: &FinMetric, t: &Term, u: &Term) -> Result<Dist, UnknownLeaf> {
    match (t, u) {
        (Term::Var(a), Term::Var(b)) => {
            let i = m.index_of(a).ok_or_else(|| UnknownLeaf(a.clone()))?;
            let j = m.index_of(b).ok_or_else(|| UnknownLeaf(b.clone()))?;
            Ok(m.dist(i, j).clone())
        }
        (Term::App(s, ts), Term::App(r, us)) if s == r && ts.len() == us.len() => {
            let mut acc = Dist::zero();
            for (a, b) in ts.iter().zip(us) {
                acc = acc.max(term_metric(m, a, b)?);
            }
            Ok(acc)
        }
        _ => {
            check_leaves(m, t)?;
            check_leaves(m, u)?;
            Ok(Dist::Infinity)
        }
    }
}

fn check_leaves(m: &FinMetric, t: &Term) -> Result<(), UnknownLeaf> {
    for v in vars(t) {
        if m.index_of(&v).is_none() {
            return Err(UnknownLeaf(v));
        }
    }
    Ok(())
}

/// The term order over a carrier poset: leaf order from the carrier,
/// componentwise over similar composites, false otherwise.
pub fn term_order(p: &FinPoset, t: &Term, u: &Term) -> Result<bool, UnknownLeaf> {
    match (t, u) {
        (Term::Var(a), Term::Var(b)) => {
            let i = p.index_of(a).ok_or_else(|| UnknownLeaf(a.clone()))?;
            let j = p.index_of(b).ok_or_else(|| UnknownLeaf(b.clone()))?;
            Ok(p.leq(i, j))
        }
        (Term::App(s, ts), Term::App(r, us)) if s == r && ts.len() == us.len() => {
            for (a, b) in ts.iter().zip(us) {
                if !term_order(p, a, b)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => {
            for v in vars(t).union(&vars(u)) {
                if p.index_of(v).is_none() {
                    return Err(UnknownLeaf(v.clone()));
                }
            }
            Ok(false)
        }
    }
}

/// All terms of height at most `depth` over the given generator leaves,
/// grouped by exact height and deterministically ordered within each group
/// (symbols in signature order, argument tuples lexicographically by their
/// position in the enumeration so far).
///
/// Nullary symbols count as height 0, so they appear alongside the
/// generators.
pub fn enumerate_terms(
    sig: &Signature,
    gens: &[String],
    depth: usize,
    max_terms: usize,
) -> Result<Vec<Term>, BoundExceeded> {
    let mut by_height: Vec<Vec<Term>> = Vec::new();
    let mut level0: Vec<Term> = gens.iter().map(|g| Term::var(g.clone())).collect();
    for (name, arity) in sig.symbols() {
        if *arity == 0 {
            level0.push(Term::app(name.clone(), vec![]));
        }
    }
    let mut total = level0.len();
    by_height.push(level0);
    for h in 1..=depth {
        let mut level: Vec<Term> = Vec::new();
        let below: Vec<&Term> = by_height.iter().flatten().collect();
        let strictly_below: usize = by_height[..h - 1].iter().map(Vec::len).sum();
        for (name, arity) in sig.symbols() {
            if *arity == 0 {
                continue;
            }
            // argument tuples over everything of height < h, at least one
            // argument of height exactly h-1
            let mut idx = vec![0usize; *arity];
            loop {
                if idx.iter().any(|&i| i >= strictly_below) {
                    let args: Vec<Term> = idx.iter().map(|&i| below[i].clone()).collect();
                    level.push(Term::app(name.clone(), args));
                    total += 1;
                    if total > max_terms {
                        return Err(BoundExceeded {
                            task: "term enumeration".into(),
                            needed: total as u128,
                            bound: max_terms as u128,
                        });
                    }
                }
                // odometer over indices into `below`
                let mut k = *arity;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < below.len() {
                        break;
                    }
                    idx[k] = 0;
                    if k == 0 {
                        break;
                    }
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
        by_height.push(level);
    }
    Ok(by_height.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("variable {0:?} is not mapped by the substitution")]
pub struct UnmappedVariable(pub String);

/// Simultaneous capture-free substitution of variables. First-order terms
/// have no binders, so no renaming is ever needed.
pub fn substitute(t: &Term, m: &BTreeMap<String, Term>) -> Result<Term, UnmappedVariable> {
    match t {
        Term::Var(v) => m.get(v).cloned().ok_or_else(|| UnmappedVariable(v.clone())),
        Term::App(sym, args) => Ok(Term::App(
            sym.clone(),
            args.iter()
                .map(|a| substitute(a, m))
                .collect::<Result<_, _>>()?,
        )),
    }
}

/// Substitute only the listed variables, leaving others in place.
pub fn substitute_partial(t: &Term, m: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => m.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::App(sym, args) => Term::App(
            sym.clone(),
            args.iter().map(|a| substitute_partial(a, m)).collect(),
        ),
    }
}
