//! Desk-scale strongly finitary monads as finitary Kleisli-triple
//! presentations, the translation between monad presentations and
//! equationally presented varieties, Eilenberg-Moore algebra checks,
//! freeness verification, and evaluation on non-discrete finite spaces.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::alg::{all_tuples, tuple_rank, ContAlgebra, QuantAlgebra};
use crate::colim::{basic_weight_colimit, Constraint, ConstraintSet};
use crate::dist::Dist;
use crate::eqn::{ContEq, Equation, QuantEq};
use crate::mspace::{check_nonexpanding, discrete_space, BoundExceeded, FinMetric, MetricMap};
use crate::poset::{check_monotone, discrete_poset, FinPoset, MonotoneMap};
use crate::term::{var_name, ExtTerm, JoinFamily, Signature, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    Met,
    Pos,
}

/// A presentation carrier: a finite metric space or a finite poset on the
/// points of `T_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Carrier {
    Met(FinMetric),
    Pos(FinPoset),
}

impl Carrier {
    pub fn len(&self) -> usize {
        match self {
            Carrier::Met(m) => m.len(),
            Carrier::Pos(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn label(&self, i: usize) -> &str {
        match self {
            Carrier::Met(m) => m.label(i),
            Carrier::Pos(p) => p.label(i),
        }
    }

    pub fn points(&self) -> &[String] {
        match self {
            Carrier::Met(m) => m.points(),
            Carrier::Pos(p) => p.points(),
        }
    }

    pub fn met(&self) -> &FinMetric {
        match self {
            Carrier::Met(m) => m,
            Carrier::Pos(_) => panic!("expected a metric carrier"),
        }
    }

    pub fn pos(&self) -> &FinPoset {
        match self {
            Carrier::Pos(p) => p,
            Carrier::Met(_) => panic!("expected a poset carrier"),
        }
    }
}

/// Key of one extension table: `k : V_n -> T_m` given as the list of its
/// values in `T_m`.
pub type ExtKey = (usize, usize, Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("expected {expected} carriers for max arity {arity}, got {got}")]
    CarrierCount {
        expected: usize,
        got: usize,
        arity: usize,
    },
    #[error("carrier {0} does not match the presentation mode")]
    CarrierMode(usize),
    #[error("unit for arity {n} must list {n} points of T_{n}")]
    UnitShape { n: usize },
    #[error("extension table missing for k: V_{n} -> T_{m} ({k:?})")]
    MissingExt { n: usize, m: usize, k: Vec<usize> },
    #[error("extension table for ({n},{m},{k:?}) is malformed")]
    ExtShape { n: usize, m: usize, k: Vec<usize> },
}

/// A strongly finitary monad at desk scale: carriers on the discrete
/// arities up to `N`, unit maps, and a complete family of Kleisli extension
/// tables, one for every map from an arity into a carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonadPresentation {
    mode: Mode,
    max_arity: usize,
    carriers: Vec<Carrier>,
    units: Vec<Vec<usize>>,
    ext: BTreeMap<ExtKey, Vec<usize>>,
}

impl MonadPresentation {
    pub fn new(
        mode: Mode,
        carriers: Vec<Carrier>,
        units: Vec<Vec<usize>>,
        ext: BTreeMap<ExtKey, Vec<usize>>,
    ) -> Result<MonadPresentation, PresentationError> {
        let max_arity = carriers
            .len()
            .checked_sub(1)
            .ok_or(PresentationError::CarrierCount {
                expected: 1,
                got: 0,
                arity: 0,
            })?;
        for (i, c) in carriers.iter().enumerate() {
            let ok = matches!(
                (mode, c),
                (Mode::Met, Carrier::Met(_)) | (Mode::Pos, Carrier::Pos(_))
            );
            if !ok {
                return Err(PresentationError::CarrierMode(i));
            }
        }
        if units.len() != carriers.len() {
            return Err(PresentationError::CarrierCount {
                expected: carriers.len(),
                got: units.len(),
                arity: max_arity,
            });
        }
        for (n, unit) in units.iter().enumerate() {
            if unit.len() != n || unit.iter().any(|&v| v >= carriers[n].len()) {
                return Err(PresentationError::UnitShape { n });
            }
        }
        for n in 0..=max_arity {
            for m in 0..=max_arity {
                for k in all_tuples(n, carriers[m].len()) {
                    match ext.get(&(n, m, k.clone())) {
                        None => return Err(PresentationError::MissingExt { n, m, k }),
                        Some(table) => {
                            if table.len() != carriers[n].len()
                                || table.iter().any(|&v| v >= carriers[m].len())
                            {
                                return Err(PresentationError::ExtShape { n, m, k });
                            }
                        }
                    }
                }
            }
        }
        Ok(MonadPresentation {
            mode,
            max_arity,
            carriers,
            units,
            ext,
        })
    }

    /// Build the extension family from a rule and validate the result.
    pub fn from_rule<F>(
        mode: Mode,
        carriers: Vec<Carrier>,
        units: Vec<Vec<usize>>,
        rule: F,
    ) -> Result<MonadPresentation, PresentationError>
    where
        F: Fn(usize, usize, &[usize], usize) -> usize,
    {
        let max_arity = carriers.len() - 1;
        let mut ext = BTreeMap::new();
        for n in 0..=max_arity {
            for m in 0..=max_arity {
                for k in all_tuples(n, carriers[m].len()) {
                    let table = (0..carriers[n].len()).map(|t| rule(n, m, &k, t)).collect();
                    ext.insert((n, m, k), table);
                }
            }
        }
        MonadPresentation::new(mode, carriers, units, ext)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn carrier(&self, n: usize) -> &Carrier {
        &self.carriers[n]
    }

    pub fn unit(&self, n: usize) -> &[usize] {
        &self.units[n]
    }

    pub fn ext_table(&self, n: usize, m: usize, k: &[usize]) -> &[usize] {
        &self.ext[&(n, m, k.to_vec())]
    }

    pub fn ext(&self) -> &BTreeMap<ExtKey, Vec<usize>> {
        &self.ext
    }

    /// Copy with one extension-table cell replaced; for mutation testing.
    pub fn with_mutated_ext(
        &self,
        key_index: usize,
        cell: usize,
        value: usize,
    ) -> MonadPresentation {
        let mut out = self.clone();
        let key = out
            .ext
            .keys()
            .nth(key_index)
            .expect("key index in range")
            .clone();
        let table = out.ext.get_mut(&key).unwrap();
        let m = key.1;
        assert!(cell < table.len() && value < out.carriers[m].len());
        table[cell] = value;
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum KleisliLaw {
    ExtIsMorphism,
    ExtOfUnitIsIdentity,
    ExtRestrictsToUnit,
    ExtComposes,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawFailure {
    pub law: KleisliLaw,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub passed: bool,
    pub failures: Vec<LawFailure>,
}

/// Exhaustively check the Kleisli-triple laws over all arities up to the
/// presentation's budget: every `ext(k)` is a morphism, `ext(unit) = id`,
/// `ext(k) . unit = k`, and `ext(ext(k) . l) = ext(k) . ext(l)`.
pub fn check_kleisli_laws(p: &MonadPresentation) -> LawReport {
    let mut failures = Vec::new();
    let top = p.max_arity();
    for n in 0..=top {
        for m in 0..=top {
            for k in all_tuples(n, p.carrier(m).len()) {
                let table = p.ext_table(n, m, &k);
                // morphism check
                let ok = match (p.carrier(n), p.carrier(m)) {
                    (Carrier::Met(dom), Carrier::Met(cod)) => check_nonexpanding(
                        &MetricMap::new(dom.clone(), cod.clone(), table.to_vec()).unwrap(),
                    )
                    .is_ok(),
                    (Carrier::Pos(dom), Carrier::Pos(cod)) => check_monotone(
                        &MonotoneMap::new(dom.clone(), cod.clone(), table.to_vec()).unwrap(),
                    )
                    .is_ok(),
                    _ => unreachable!("mode matched at construction"),
                };
                if !ok {
                    failures.push(LawFailure {
                        law: KleisliLaw::ExtIsMorphism,
                        witness: format!("ext of k = {k:?} : V_{n} -> T_{m}"),
                    });
                }
                // ext(k) . unit_n = k
                for (i, &ki) in k.iter().enumerate() {
                    if table[p.unit(n)[i]] != ki {
                        failures.push(LawFailure {
                            law: KleisliLaw::ExtRestrictsToUnit,
                            witness: format!("k = {k:?} : V_{n} -> T_{m}, at x{i}"),
                        });
                    }
                }
            }
        }
        // ext(unit_n) = id on T_n
        let unit_key = (n, n, p.unit(n).to_vec());
        let table = &p.ext()[&unit_key];
        if table.iter().enumerate().any(|(i, &v)| v != i) {
            failures.push(LawFailure {
                law: KleisliLaw::ExtOfUnitIsIdentity,
                witness: format!("arity {n}"),
            });
        }
    }
    // composition: ext(ext(k) . l) = ext(k) . ext(l)
    for pp in 0..=top {
        for n in 0..=top {
            for m in 0..=top {
                for l in all_tuples(pp, p.carrier(n).len()) {
                    let ext_l = p.ext_table(pp, n, &l);
                    for k in all_tuples(n, p.carrier(m).len()) {
                        let ext_k = p.ext_table(n, m, &k);
                        let composite: Vec<usize> = l.iter().map(|&t| ext_k[t]).collect();
                        let lhs = p.ext_table(pp, m, &composite);
                        let rhs: Vec<usize> = ext_l.iter().map(|&t| ext_k[t]).collect();
                        if lhs != rhs.as_slice() {
                            failures.push(LawFailure {
                                law: KleisliLaw::ExtComposes,
                                witness: format!(
                                    "l = {l:?} : V_{pp} -> T_{n}, k = {k:?} : V_{n} -> T_{m}"
                                ),
                            });
                        }
                    }
                }
            }
        }
    }
    LawReport {
        passed: failures.is_empty(),
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BridgeError {
    #[error("presentation mode does not match the requested operation")]
    ModeMismatch,
    #[error("arity budget exceeded: needed {needed}, presentation covers {budget}")]
    ArityBudgetExceeded { needed: usize, budget: usize },
    #[error("not an Eilenberg-Moore algebra: {0}")]
    NotAnEmAlgebra(String),
    #[error(transparent)]
    Bound(#[from] BoundExceeded),
}

/// The variety generated by a presentation: the signature has the points of
/// `T_n` as its `n`-ary symbols; the equation list encodes the carrier
/// structure, the extension tables, and the units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedVariety {
    pub mode: Mode,
    pub sig: Signature,
    pub eqs: Vec<Equation>,
    symbols: BTreeMap<(usize, usize), String>,
}

impl GeneratedVariety {
    /// The symbol standing for point `point` of `T_n`.
    pub fn symbol(&self, arity: usize, point: usize) -> &str {
        &self.symbols[&(arity, point)]
    }

    pub fn quant_eqs(&self) -> Vec<QuantEq> {
        self.eqs
            .iter()
            .filter_map(|e| match e {
                Equation::Quant(q) => Some(q.clone()),
                Equation::Cont(_) => None,
            })
            .collect()
    }

    pub fn cont_eqs(&self) -> Vec<ContEq> {
        self.eqs
            .iter()
            .filter_map(|e| match e {
                Equation::Cont(c) => Some(c.clone()),
                Equation::Quant(_) => None,
            })
            .collect()
    }
}

fn sanitize(label: &str) -> String {
    let mut out: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    if !out.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
        out.insert(0, 's');
    }
    out
}

fn symbol_table(p: &MonadPresentation) -> (Signature, BTreeMap<(usize, usize), String>) {
    let mut names = BTreeMap::new();
    let mut used = BTreeSet::new();
    let mut symbols = Vec::new();
    for n in 0..=p.max_arity() {
        for point in 0..p.carrier(n).len() {
            let mut name = format!("{}_{}", sanitize(p.carrier(n).label(point)), n);
            while !used.insert(name.clone()) {
                name.push('_');
            }
            names.insert((n, point), name.clone());
            symbols.push((name, n));
        }
    }
    (
        Signature::new(symbols).expect("generated symbol names are unique"),
        names,
    )
}

fn symbol_term(
    names: &BTreeMap<(usize, usize), String>,
    n: usize,
    point: usize,
    args: Vec<Term>,
) -> Term {
    Term::app(names[&(n, point)].clone(), args)
}

fn arg_vars(m: usize) -> Vec<Term> {
    (0..m).map(|i| Term::var(var_name(i))).collect()
}

/// Shared part of the two generation routines: the substitution equations
/// `ext(k)(sigma)(x) = sigma(k(x_i)(x))` and the projection equations
/// `unit(x_i)(x) = x_i`, as pairs of terms.
fn structural_equations(
    p: &MonadPresentation,
    names: &BTreeMap<(usize, usize), String>,
) -> Vec<(Term, Term)> {
    let mut eqs = Vec::new();
    for n in 0..=p.max_arity() {
        for m in 0..=p.max_arity() {
            for k in all_tuples(n, p.carrier(m).len()) {
                let table = p.ext_table(n, m, &k);
                for sigma in 0..p.carrier(n).len() {
                    let lhs = symbol_term(names, m, table[sigma], arg_vars(m));
                    let inner: Vec<Term> = k
                        .iter()
                        .map(|&ki| symbol_term(names, m, ki, arg_vars(m)))
                        .collect();
                    let rhs = symbol_term(names, n, sigma, inner);
                    eqs.push((lhs, rhs));
                }
            }
        }
        for (i, &u) in p.unit(n).iter().enumerate() {
            let lhs = symbol_term(names, n, u, arg_vars(n));
            eqs.push((lhs, Term::var(var_name(i))));
        }
    }
    eqs
}

/// The quantitative variety of a metric presentation: closeness equations
/// for every pair of symbols at finite distance, substitution equations,
/// and projection equations.
pub fn generate_variety_met(p: &MonadPresentation) -> Result<GeneratedVariety, BridgeError> {
    if p.mode() != Mode::Met {
        return Err(BridgeError::ModeMismatch);
    }
    let (sig, names) = symbol_table(p);
    let mut eqs = Vec::new();
    for n in 0..=p.max_arity() {
        let space = p.carrier(n).met();
        for (i, j, d) in space.pairs() {
            if d.is_finite() {
                eqs.push(Equation::Quant(QuantEq::new(
                    symbol_term(&names, n, i, arg_vars(n)),
                    symbol_term(&names, n, j, arg_vars(n)),
                    d.clone(),
                )));
            }
        }
    }
    for (lhs, rhs) in structural_equations(p, &names) {
        eqs.push(Equation::Quant(QuantEq::strict(lhs, rhs)));
    }
    Ok(GeneratedVariety {
        mode: Mode::Met,
        sig,
        eqs,
        symbols: names,
    })
}

/// The continuous variety of a poset presentation: for every comparable
/// pair `sigma' <= sigma` the join equation `sigma = join [sigma', sigma]`
/// (the eventually-constant rendering of the omega-chain clause), plus the
/// substitution and projection equations as extended-term equations.
pub fn generate_variety_cpo(p: &MonadPresentation) -> Result<GeneratedVariety, BridgeError> {
    if p.mode() != Mode::Pos {
        return Err(BridgeError::ModeMismatch);
    }
    let (sig, names) = symbol_table(p);
    let mut eqs = Vec::new();
    for n in 0..=p.max_arity() {
        let poset = p.carrier(n).pos();
        for lo in 0..poset.len() {
            for hi in 0..poset.len() {
                if poset.leq(lo, hi) {
                    let lo_term = ExtTerm::base(symbol_term(&names, n, lo, arg_vars(n)));
                    let hi_term = ExtTerm::base(symbol_term(&names, n, hi, arg_vars(n)));
                    eqs.push(Equation::Cont(ContEq::new(
                        hi_term.clone(),
                        ExtTerm::join(vec![lo_term, hi_term]),
                    )));
                }
            }
        }
    }
    for (lhs, rhs) in structural_equations(p, &names) {
        eqs.push(Equation::Cont(ContEq::new(
            ExtTerm::base(lhs),
            ExtTerm::base(rhs),
        )));
    }
    Ok(GeneratedVariety {
        mode: Mode::Pos,
        sig,
        eqs,
        symbols: names,
    })
}

/// An Eilenberg-Moore algebra candidate on the discrete carrier `V_j`: a
/// structure map from `T_j` to the arity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmAlgebra {
    pub arity: usize,
    pub alpha: Vec<usize>,
}

/// Check the Eilenberg-Moore laws of a structure-map candidate: the map
/// must be a morphism out of `T_j`, restrict to the identity along the
/// unit, and agree with the two extension routes on `T_{|T_j|}`.
pub fn check_em_algebra(p: &MonadPresentation, em: &EmAlgebra) -> Result<(), BridgeError> {
    let j = em.arity;
    if j > p.max_arity() {
        return Err(BridgeError::ArityBudgetExceeded {
            needed: j,
            budget: p.max_arity(),
        });
    }
    let t_j = p.carrier(j);
    if em.alpha.len() != t_j.len() || em.alpha.iter().any(|&v| v >= j) {
        return Err(BridgeError::NotAnEmAlgebra(format!(
            "alpha must map the {} points of T_{j} into V_{j}",
            t_j.len()
        )));
    }
    let s = t_j.len();
    if s > p.max_arity() {
        return Err(BridgeError::ArityBudgetExceeded {
            needed: s,
            budget: p.max_arity(),
        });
    }
    // structure: alpha is a morphism into the discrete carrier
    match t_j {
        Carrier::Met(space) => {
            let target = discrete_space((0..j).map(var_name));
            let map = MetricMap::new(space.clone(), target, em.alpha.clone()).unwrap();
            if let Err(w) = check_nonexpanding(&map) {
                return Err(BridgeError::NotAnEmAlgebra(format!(
                    "alpha is not nonexpanding: separates ({}, {}) at distance {}",
                    w.x, w.y, w.source_dist
                )));
            }
        }
        Carrier::Pos(poset) => {
            let target = discrete_poset((0..j).map(var_name));
            let map = MonotoneMap::new(poset.clone(), target, em.alpha.clone()).unwrap();
            if let Err(w) = check_monotone(&map) {
                return Err(BridgeError::NotAnEmAlgebra(format!(
                    "alpha is not monotone: separates ({}, {})",
                    w.x, w.y
                )));
            }
        }
    }
    // unit law
    for (i, &u) in p.unit(j).iter().enumerate() {
        if em.alpha[u] != i {
            return Err(BridgeError::NotAnEmAlgebra(format!(
                "unit law fails at x{i}: alpha(unit(x{i})) = x{}",
                em.alpha[u]
            )));
        }
    }
    // multiplication law through the extension operator
    let id_labeling: Vec<usize> = (0..s).collect();
    let mu_route = p.ext_table(s, j, &id_labeling);
    let unit_alpha: Vec<usize> = (0..s).map(|t| p.unit(j)[em.alpha[t]]).collect();
    let alpha_route = p.ext_table(s, j, &unit_alpha);
    for t in 0..p.carrier(s).len() {
        if em.alpha[mu_route[t]] != em.alpha[alpha_route[t]] {
            return Err(BridgeError::NotAnEmAlgebra(format!(
                "multiplication law fails at point {} of T_{s}",
                p.carrier(s).label(t)
            )));
        }
    }
    Ok(())
}

/// All law-passing Eilenberg-Moore algebras on `V_j`, in canonical order.
/// Errors when the presentation cannot even state the laws at this arity.
pub fn enumerate_em_algebras(
    p: &MonadPresentation,
    j: usize,
) -> Result<Vec<EmAlgebra>, BridgeError> {
    if j > p.max_arity() {
        return Err(BridgeError::ArityBudgetExceeded {
            needed: j,
            budget: p.max_arity(),
        });
    }
    let size = p.carrier(j).len();
    if size > p.max_arity() {
        return Err(BridgeError::ArityBudgetExceeded {
            needed: size,
            budget: p.max_arity(),
        });
    }
    Ok(all_tuples(size, j)
        .into_iter()
        .map(|alpha| EmAlgebra { arity: j, alpha })
        .filter(|em| check_em_algebra(p, em).is_ok())
        .collect())
}

fn em_tables(
    p: &MonadPresentation,
    em: &EmAlgebra,
    variety: &GeneratedVariety,
) -> BTreeMap<String, Vec<usize>> {
    let j = em.arity;
    let mut ops = BTreeMap::new();
    for n in 0..=p.max_arity() {
        for sigma in 0..p.carrier(n).len() {
            let table = all_tuples(n, j)
                .into_iter()
                .map(|tuple| {
                    let k: Vec<usize> = tuple.iter().map(|&a| p.unit(j)[a]).collect();
                    em.alpha[p.ext_table(n, j, &k)[sigma]]
                })
                .collect();
            ops.insert(variety.symbol(n, sigma).to_string(), table);
        }
    }
    ops
}

/// Translate an Eilenberg-Moore algebra into the corresponding variety
/// algebra: `sigma_A(a) = alpha(ext(unit . a)(sigma))`.
pub fn em_to_quant_algebra(
    p: &MonadPresentation,
    em: &EmAlgebra,
    variety: &GeneratedVariety,
) -> Result<QuantAlgebra, BridgeError> {
    if p.mode() != Mode::Met {
        return Err(BridgeError::ModeMismatch);
    }
    check_em_algebra(p, em)?;
    let carrier = discrete_space((0..em.arity).map(var_name));
    let ops = em_tables(p, em, variety);
    Ok(QuantAlgebra::new(variety.sig.clone(), carrier, ops)
        .expect("translated tables are well formed"))
}

pub fn em_to_cont_algebra(
    p: &MonadPresentation,
    em: &EmAlgebra,
    variety: &GeneratedVariety,
) -> Result<ContAlgebra, BridgeError> {
    if p.mode() != Mode::Pos {
        return Err(BridgeError::ModeMismatch);
    }
    check_em_algebra(p, em)?;
    let carrier = discrete_poset((0..em.arity).map(var_name));
    let ops = em_tables(p, em, variety);
    Ok(ContAlgebra::new(variety.sig.clone(), carrier, ops)
        .expect("translated tables are well formed"))
}

/// Recover the structure-map candidate of a variety algebra on a discrete
/// arity carrier: `alpha(sigma) = sigma_A(x0, ..., x_{j-1})`.
pub fn variety_algebra_to_em(
    p: &MonadPresentation,
    variety: &GeneratedVariety,
    tables: &BTreeMap<String, Vec<usize>>,
    j: usize,
) -> EmAlgebra {
    let identity_tuple: Vec<usize> = (0..j).collect();
    let alpha = (0..p.carrier(j).len())
        .map(|sigma| tables[variety.symbol(j, sigma)][tuple_rank(&identity_tuple, j)])
        .collect();
    EmAlgebra { arity: j, alpha }
}

// ---------------------------------------------------------------------------
// Enumerating variety algebras on discrete carriers
// ---------------------------------------------------------------------------

/// On a discrete carrier every generated equation reduces to a pointwise
/// equality of terms: finite closeness bounds force equality, and the
/// clause-one join equations force the two symbol values equal.
fn equations_as_equalities(v: &GeneratedVariety) -> Vec<(Term, Term)> {
    v.eqs
        .iter()
        .map(|e| match e {
            Equation::Quant(q) => (q.left.clone(), q.right.clone()),
            Equation::Cont(c) => match (&c.left, &c.right) {
                (ExtTerm::Base(l), ExtTerm::Base(r)) => (l.clone(), r.clone()),
                (ExtTerm::Base(hi), ExtTerm::Join(JoinFamily::EventuallyConstant(fam))) => {
                    match fam.as_slice() {
                        [ExtTerm::Base(lo), ExtTerm::Base(hi2)] if hi2 == hi => {
                            (lo.clone(), hi.clone())
                        }
                        _ => panic!("generated equations have the two-term join shape"),
                    }
                }
                _ => panic!("generated equations are base terms or two-term joins"),
            },
        })
        .collect()
}

struct SymbolLayout {
    names: Vec<String>,
    arities: Vec<usize>,
    offsets: Vec<usize>,
    total_cells: usize,
}

fn layout(sig: &Signature, carrier: usize) -> SymbolLayout {
    let mut names = Vec::new();
    let mut arities = Vec::new();
    let mut offsets = Vec::new();
    let mut total = 0;
    for (name, arity) in sig.symbols() {
        names.push(name.clone());
        arities.push(*arity);
        offsets.push(total);
        total += carrier.pow(*arity as u32);
    }
    SymbolLayout {
        names,
        arities,
        offsets,
        total_cells: total,
    }
}

/// A term with variables and symbols resolved to slots, so propagation can
/// evaluate against a plain assignment array.
enum RTerm {
    Var(usize),
    App(usize, Vec<RTerm>),
}

struct REq {
    left: RTerm,
    right: RTerm,
    num_vars: usize,
}

fn resolve_term(t: &Term, variables: &[String], lay: &SymbolLayout) -> RTerm {
    match t {
        Term::Var(v) => RTerm::Var(
            variables
                .iter()
                .position(|w| w == v)
                .expect("variable listed"),
        ),
        Term::App(sym, args) => {
            let idx = lay
                .names
                .iter()
                .position(|n| n == sym)
                .expect("symbol in signature");
            RTerm::App(
                idx,
                args.iter()
                    .map(|a| resolve_term(a, variables, lay))
                    .collect(),
            )
        }
    }
}

fn resolve_equations(eqs: &[(Term, Term)], lay: &SymbolLayout) -> Vec<REq> {
    eqs.iter()
        .map(|(l, r)| {
            let mut variables = crate::term::vars(l);
            variables.extend(crate::term::vars(r));
            let variables: Vec<String> = variables.into_iter().collect();
            REq {
                left: resolve_term(l, &variables, lay),
                right: resolve_term(r, &variables, lay),
                num_vars: variables.len(),
            }
        })
        .collect()
}

enum Eval {
    Known(usize),
    /// blocked: all arguments known but the root cell is unassigned
    Blocked {
        cell: usize,
    },
    /// some argument is itself unknown
    Deep,
}

fn eval_partial(
    t: &RTerm,
    assignment: &[usize],
    cells: &[Option<usize>],
    lay: &SymbolLayout,
    carrier: usize,
) -> Eval {
    match t {
        RTerm::Var(slot) => Eval::Known(assignment[*slot]),
        RTerm::App(sym, args) => {
            let mut rank = 0;
            for a in args {
                match eval_partial(a, assignment, cells, lay, carrier) {
                    Eval::Known(v) => rank = rank * carrier + v,
                    _ => return Eval::Deep,
                }
            }
            let cell = lay.offsets[*sym] + rank;
            match cells[cell] {
                Some(v) => Eval::Known(v),
                None => Eval::Blocked { cell },
            }
        }
    }
}

/// Propagate all equation instances to a fixpoint, enumerating variable
/// assignments on the fly. Returns false on conflict.
fn propagate(eqs: &[REq], cells: &mut [Option<usize>], lay: &SymbolLayout, carrier: usize) -> bool {
    loop {
        let mut changed = false;
        for eq in eqs {
            let mut assignment = vec![0usize; eq.num_vars];
            'assignments: loop {
                let l = eval_partial(&eq.left, &assignment, cells, lay, carrier);
                let r = eval_partial(&eq.right, &assignment, cells, lay, carrier);
                match (l, r) {
                    (Eval::Known(a), Eval::Known(b)) => {
                        if a != b {
                            return false;
                        }
                    }
                    (Eval::Known(a), Eval::Blocked { cell })
                    | (Eval::Blocked { cell }, Eval::Known(a)) => {
                        cells[cell] = Some(a);
                        changed = true;
                    }
                    _ => {}
                }
                let mut k = eq.num_vars;
                loop {
                    if k == 0 {
                        break 'assignments;
                    }
                    k -= 1;
                    assignment[k] += 1;
                    if assignment[k] < carrier {
                        break;
                    }
                    assignment[k] = 0;
                    if k == 0 {
                        break 'assignments;
                    }
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

fn solve(
    eqs: &[REq],
    cells: Vec<Option<usize>>,
    lay: &SymbolLayout,
    carrier: usize,
    out: &mut Vec<Vec<usize>>,
) {
    let mut cells = cells;
    if !propagate(eqs, &mut cells, lay, carrier) {
        return;
    }
    match cells.iter().position(Option::is_none) {
        None => out.push(cells.into_iter().map(Option::unwrap).collect()),
        Some(free) => {
            for v in 0..carrier {
                let mut branch = cells.clone();
                branch[free] = Some(v);
                solve(eqs, branch, lay, carrier, out);
            }
        }
    }
}

/// Enumerate every algebra of the generated variety on a discrete carrier
/// of the given size, by constraint propagation and backtracking over the
/// operation-table cells. Labels are `x0, x1, ...` so the results align with
/// the Eilenberg-Moore translations.
pub fn enumerate_discrete_variety_algebras(
    v: &GeneratedVariety,
    carrier_size: usize,
) -> Vec<BTreeMap<String, Vec<usize>>> {
    let eqs = equations_as_equalities(v);
    let lay = layout(&v.sig, carrier_size);
    let resolved = resolve_equations(&eqs, &lay);
    let mut tables = Vec::new();
    if carrier_size == 0 {
        return tables;
    }
    let mut solutions = Vec::new();
    solve(
        &resolved,
        vec![None; lay.total_cells],
        &lay,
        carrier_size,
        &mut solutions,
    );
    for s in solutions {
        let mut ops = BTreeMap::new();
        for (i, name) in lay.names.iter().enumerate() {
            let size = carrier_size.pow(lay.arities[i] as u32);
            ops.insert(
                name.clone(),
                s[lay.offsets[i]..lay.offsets[i] + size].to_vec(),
            );
        }
        tables.push(ops);
    }
    tables
}

pub fn discrete_tables_to_quant(
    v: &GeneratedVariety,
    carrier_size: usize,
    ops: BTreeMap<String, Vec<usize>>,
) -> QuantAlgebra {
    QuantAlgebra::new(
        v.sig.clone(),
        discrete_space((0..carrier_size).map(var_name)),
        ops,
    )
    .expect("enumerated tables are well formed")
}

pub fn discrete_tables_to_cont(
    v: &GeneratedVariety,
    carrier_size: usize,
    ops: BTreeMap<String, Vec<usize>>,
) -> ContAlgebra {
    ContAlgebra::new(
        v.sig.clone(),
        discrete_poset((0..carrier_size).map(var_name)),
        ops,
    )
    .expect("enumerated tables are well formed")
}

// ---------------------------------------------------------------------------
// Freeness
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FreenessFailureReason {
    NotHomomorphism,
    NotStructureMap,
    UnitMismatch,
    NotUnique,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreenessFailure {
    pub target: usize,
    pub interpretation: Vec<String>,
    pub reason: FreenessFailureReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreenessReport {
    pub passed: bool,
    pub failures: Vec<FreenessFailure>,
}

enum TargetCarrier<'a> {
    Met(&'a FinMetric),
    Pos(&'a FinPoset),
}

struct FreenessTarget<'a> {
    carrier: TargetCarrier<'a>,
    ops: &'a BTreeMap<String, Vec<usize>>,
}

fn target_len(t: &FreenessTarget) -> usize {
    match &t.carrier {
        TargetCarrier::Met(m) => m.len(),
        TargetCarrier::Pos(p) => p.len(),
    }
}

fn target_label(t: &FreenessTarget, i: usize) -> String {
    match &t.carrier {
        TargetCarrier::Met(m) => m.label(i).to_string(),
        TargetCarrier::Pos(p) => p.label(i).to_string(),
    }
}

/// Is `table : T_n -> A` a morphism of the enriching base?
fn is_structure_map(p: &MonadPresentation, n: usize, t: &FreenessTarget, table: &[usize]) -> bool {
    match (p.carrier(n), &t.carrier) {
        (Carrier::Met(dom), TargetCarrier::Met(cod)) => check_nonexpanding(
            &MetricMap::new(dom.clone(), (*cod).clone(), table.to_vec()).unwrap(),
        )
        .is_ok(),
        (Carrier::Pos(dom), TargetCarrier::Pos(cod)) => {
            check_monotone(&MonotoneMap::new(dom.clone(), (*cod).clone(), table.to_vec()).unwrap())
                .is_ok()
        }
        _ => false,
    }
}

/// Is `table : T_n -> A` a homomorphism from the free-algebra structure on
/// `T_n` (each `m`-ary symbol `tau` acting by `ext`) to the target algebra?
fn is_symbol_homomorphism(
    p: &MonadPresentation,
    variety: &GeneratedVariety,
    n: usize,
    t: &FreenessTarget,
    table: &[usize],
) -> bool {
    let t_n = p.carrier(n).len();
    for m in 0..=p.max_arity() {
        for tau in 0..p.carrier(m).len() {
            let op = &t.ops[variety.symbol(m, tau)];
            for sigma_tuple in all_tuples(m, t_n) {
                let acted = p.ext_table(m, n, &sigma_tuple)[tau];
                let mapped: Vec<usize> = sigma_tuple.iter().map(|&s| table[s]).collect();
                if table[acted] != op[tuple_rank(&mapped, target_len(t))] {
                    return false;
                }
            }
        }
    }
    true
}

fn check_freeness_inner(
    p: &MonadPresentation,
    n: usize,
    variety: &GeneratedVariety,
    targets: &[FreenessTarget],
    max_maps: u128,
) -> Result<FreenessReport, BridgeError> {
    if n > p.max_arity() {
        return Err(BridgeError::ArityBudgetExceeded {
            needed: n,
            budget: p.max_arity(),
        });
    }
    let t_n = p.carrier(n).len();
    let mut failures = Vec::new();
    for (ti, target) in targets.iter().enumerate() {
        let a_len = target_len(target);
        let need = (a_len as u128)
            .checked_pow(t_n.max(n) as u32)
            .unwrap_or(u128::MAX);
        if need > max_maps {
            return Err(BridgeError::Bound(BoundExceeded {
                task: "freeness verification".into(),
                needed: need,
                bound: max_maps,
            }));
        }
        for f in all_tuples(n, a_len) {
            let interp_labels: Vec<String> = f.iter().map(|&v| target_label(target, v)).collect();
            // extension formula: fbar(sigma) = sigma_A(f(x_i))
            let fbar: Vec<usize> = (0..t_n)
                .map(|sigma| target.ops[variety.symbol(n, sigma)][tuple_rank(&f, a_len)])
                .collect();
            let mut fail = |reason| {
                failures.push(FreenessFailure {
                    target: ti,
                    interpretation: interp_labels.clone(),
                    reason,
                })
            };
            if (0..n).any(|i| fbar[p.unit(n)[i]] != f[i]) {
                fail(FreenessFailureReason::UnitMismatch);
                continue;
            }
            if !is_structure_map(p, n, target, &fbar) {
                fail(FreenessFailureReason::NotStructureMap);
                continue;
            }
            if !is_symbol_homomorphism(p, variety, n, target, &fbar) {
                fail(FreenessFailureReason::NotHomomorphism);
                continue;
            }
            // uniqueness among all structure-respecting homomorphic extensions
            let extensions = all_tuples(t_n, a_len)
                .into_iter()
                .filter(|g| (0..n).all(|i| g[p.unit(n)[i]] == f[i]))
                .filter(|g| is_structure_map(p, n, target, g))
                .filter(|g| is_symbol_homomorphism(p, variety, n, target, g))
                .count();
            if extensions != 1 {
                fail(FreenessFailureReason::NotUnique);
            }
        }
    }
    Ok(FreenessReport {
        passed: failures.is_empty(),
        failures,
    })
}

/// Verify the free-algebra property of `T_n` against a list of variety
/// members: every interpretation extends uniquely, through the closed
/// formula, to a structure-respecting homomorphism out of `T_n`.
pub fn check_freeness_quant(
    p: &MonadPresentation,
    n: usize,
    variety: &GeneratedVariety,
    targets: &[&QuantAlgebra],
    max_maps: u128,
) -> Result<FreenessReport, BridgeError> {
    if p.mode() != Mode::Met {
        return Err(BridgeError::ModeMismatch);
    }
    let wrapped: Vec<FreenessTarget> = targets
        .iter()
        .map(|a| FreenessTarget {
            carrier: TargetCarrier::Met(a.carrier()),
            ops: a.ops(),
        })
        .collect();
    check_freeness_inner(p, n, variety, &wrapped, max_maps)
}

pub fn check_freeness_cont(
    p: &MonadPresentation,
    n: usize,
    variety: &GeneratedVariety,
    targets: &[&ContAlgebra],
    max_maps: u128,
) -> Result<FreenessReport, BridgeError> {
    if p.mode() != Mode::Pos {
        return Err(BridgeError::ModeMismatch);
    }
    let wrapped: Vec<FreenessTarget> = targets
        .iter()
        .map(|a| FreenessTarget {
            carrier: TargetCarrier::Pos(a.carrier()),
            ops: a.ops(),
        })
        .collect();
    check_freeness_inner(p, n, variety, &wrapped, max_maps)
}

// ---------------------------------------------------------------------------
// Kan evaluation on non-discrete spaces
// ---------------------------------------------------------------------------

/// Evaluate the presented monad on a finite metric space: the basic-weight
/// colimit over `T_{|M|}` whose constraints are the precongruence triples
/// of `M` lifted through the arity-one extension tables. On a discrete
/// space this returns the presentation carrier on the nose.
pub fn kan_evaluate(p: &MonadPresentation, m: &FinMetric) -> Result<FinMetric, BridgeError> {
    if p.mode() != Mode::Met {
        return Err(BridgeError::ModeMismatch);
    }
    let size = m.len();
    if size > p.max_arity() {
        return Err(BridgeError::ArityBudgetExceeded {
            needed: size,
            budget: p.max_arity(),
        });
    }
    let base = p.carrier(size).met().clone();
    let mut constraints = Vec::new();
    let finite_pairs: Vec<(usize, usize, Dist)> = m
        .pairs()
        .filter(|(_, _, d)| d.is_finite() && !d.is_zero())
        .map(|(i, j, d)| (i, j, d.clone()))
        .collect();
    if !finite_pairs.is_empty() && p.max_arity() < 1 {
        return Err(BridgeError::ArityBudgetExceeded {
            needed: 1,
            budget: p.max_arity(),
        });
    }
    for (i, j, d) in finite_pairs {
        let left = p.ext_table(1, size, &[p.unit(size)[i]]);
        let right = p.ext_table(1, size, &[p.unit(size)[j]]);
        for q in 0..p.carrier(1).len() {
            if left[q] != right[q] {
                constraints.push(Constraint {
                    x: left[q],
                    y: right[q],
                    eps: d.clone(),
                });
            }
        }
    }
    let cs = ConstraintSet::new(base, constraints);
    Ok(basic_weight_colimit(&cs).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_presentation_laws() {
        for mode in [Mode::Met, Mode::Pos] {
            let p = fixtures::identity(mode, 3);
            assert!(check_kleisli_laws(&p).passed);
        }
    }

    #[test]
    fn semilattice_presentation_laws() {
        let p = fixtures::semilattice(Mode::Met, 3);
        assert_eq!(p.carrier(3).len(), 7);
        assert!(check_kleisli_laws(&p).passed);
    }

    #[test]
    fn maybe_and_writer_laws() {
        assert!(check_kleisli_laws(&fixtures::maybe(Mode::Met, 3)).passed);
        assert!(check_kleisli_laws(&fixtures::maybe(Mode::Pos, 3)).passed);
        assert!(check_kleisli_laws(&fixtures::writer(3)).passed);
        assert!(check_kleisli_laws(&fixtures::lift(3)).passed);
    }

    #[test]
    fn mutated_semilattice_fails_laws() {
        let p = fixtures::semilattice(Mode::Met, 2);
        // find a mutable cell: perturb the ext table of some non-unit k
        let mut killed = false;
        'outer: for key_index in 0..p.ext().len() {
            let (_, m, _) = p.ext().keys().nth(key_index).unwrap().clone();
            let m_len = p.carrier(m).len();
            if m_len < 2 {
                continue;
            }
            let table = p.ext().values().nth(key_index).unwrap();
            for cell in 0..table.len() {
                let new_value = (table[cell] + 1) % m_len;
                let mutated = p.with_mutated_ext(key_index, cell, new_value);
                if !check_kleisli_laws(&mutated).passed {
                    killed = true;
                    break 'outer;
                }
            }
        }
        assert!(killed);
    }

    #[test]
    fn identity_variety_forces_projections() {
        let p = fixtures::identity(Mode::Met, 2);
        let v = generate_variety_met(&p).unwrap();
        // only substitution and projection equations, all strict
        assert!(v.quant_eqs().iter().all(|e| e.eps.is_zero()));
        // on a discrete 2-point carrier exactly one algebra: projections
        let algebras = enumerate_discrete_variety_algebras(&v, 2);
        assert_eq!(algebras.len(), 1);
        let ops = &algebras[0];
        assert_eq!(ops[v.symbol(1, 0)], vec![0, 1]);
        assert_eq!(ops[v.symbol(2, 0)], vec![0, 0, 1, 1]);
        assert_eq!(ops[v.symbol(2, 1)], vec![0, 1, 0, 1]);
    }

    #[test]
    fn semilattice_variety_on_two_points() {
        let p = fixtures::semilattice(Mode::Met, 3);
        let v = generate_variety_met(&p).unwrap();
        let algebras = enumerate_discrete_variety_algebras(&v, 2);
        // the two semilattice structures on two elements: min and max
        assert_eq!(algebras.len(), 2);
        let binary = v.symbol(2, 2); // the two-element subset {x0,x1}
        for ops in &algebras {
            let t = &ops[binary];
            // commutative and idempotent
            assert_eq!(t[0], 0);
            assert_eq!(t[3], 1);
            assert_eq!(t[1], t[2]);
        }
    }

    #[test]
    fn writer_variety_on_two_points_is_unique() {
        let p = fixtures::writer(2);
        let v = generate_variety_met(&p).unwrap();
        // the closeness equations force the flagged symbols to match their
        // unflagged versions on a discrete carrier
        let algebras = enumerate_discrete_variety_algebras(&v, 2);
        assert_eq!(algebras.len(), 1);
    }

    #[test]
    fn em_algebras_of_fixtures() {
        // identity: only the identity alpha
        let p = fixtures::identity(Mode::Met, 2);
        let ems = enumerate_em_algebras(&p, 2).unwrap();
        assert_eq!(ems.len(), 1);
        assert_eq!(ems[0].alpha, vec![0, 1]);

        // semilattice on V_2: the two choices of the doubleton value
        let p = fixtures::semilattice(Mode::Met, 3);
        let ems = enumerate_em_algebras(&p, 2).unwrap();
        assert_eq!(ems.len(), 2);

        // writer on V_2: the flag must be forgotten
        let p = fixtures::writer(4);
        let ems = enumerate_em_algebras(&p, 2).unwrap();
        assert_eq!(ems.len(), 1);
        assert_eq!(ems[0].alpha, vec![0, 0, 1, 1]);
    }

    #[test]
    fn em_unit_law_violation_detected() {
        let p = fixtures::identity(Mode::Met, 2);
        let bad = EmAlgebra {
            arity: 2,
            alpha: vec![1, 0],
        };
        let err = check_em_algebra(&p, &bad).unwrap_err();
        assert!(matches!(err, BridgeError::NotAnEmAlgebra(d) if d.contains("unit law")));
    }

    #[test]
    fn em_translation_round_trip() {
        let p = fixtures::semilattice(Mode::Met, 3);
        let v = generate_variety_met(&p).unwrap();
        let ems = enumerate_em_algebras(&p, 2).unwrap();
        let mut translated = Vec::new();
        for em in &ems {
            let a = em_to_quant_algebra(&p, em, &v).unwrap();
            // membership in the generated variety
            let rep = crate::eqn::check_quant_membership(&a, &v.quant_eqs(), 1 << 24).unwrap();
            assert!(rep.member);
            // inverting through the extension formula recovers alpha
            let back = variety_algebra_to_em(&p, &v, a.ops(), 2);
            assert_eq!(&back, em);
            translated.push(a);
        }
        // surjectivity: every discrete variety algebra arises
        let all = enumerate_discrete_variety_algebras(&v, 2);
        assert_eq!(all.len(), translated.len());
        for ops in all {
            assert!(translated.iter().any(|a| a.ops() == &ops));
        }
    }

    /// The symbol-action structure on `T_n` itself satisfies every
    /// generated equation: the variety contains its free algebras.
    #[test]
    fn free_algebra_is_a_member() {
        for (p, n) in [
            (fixtures::semilattice(Mode::Met, 3), 2usize),
            (fixtures::writer(3), 1),
            (fixtures::maybe(Mode::Met, 2), 2),
        ] {
            let v = generate_variety_met(&p).unwrap();
            let carrier = p.carrier(n).met().clone();
            let mut ops = BTreeMap::new();
            for m in 0..=p.max_arity() {
                for tau in 0..p.carrier(m).len() {
                    let table = all_tuples(m, carrier.len())
                        .into_iter()
                        .map(|sigma_tuple| p.ext_table(m, n, &sigma_tuple)[tau])
                        .collect();
                    ops.insert(v.symbol(m, tau).to_string(), table);
                }
            }
            let free = QuantAlgebra::new(v.sig.clone(), carrier, ops).unwrap();
            assert!(crate::alg::validate_quant_algebra(&free).is_ok());
            let rep = crate::eqn::check_quant_membership(&free, &v.quant_eqs(), 1 << 24).unwrap();
            assert!(
                rep.member,
                "free algebra fails {:?}",
                rep.first_counterexample
            );
        }
    }

    /// Maps commuting with the structure maps also commute with every
    /// translated operation table.
    #[test]
    fn em_morphisms_are_sigma_homomorphisms() {
        let p = fixtures::semilattice(Mode::Met, 3);
        let v = generate_variety_met(&p).unwrap();
        let ems = enumerate_em_algebras(&p, 2).unwrap();
        for a in &ems {
            for b in &ems {
                let alg_a = em_to_quant_algebra(&p, a, &v).unwrap();
                let alg_b = em_to_quant_algebra(&p, b, &v).unwrap();
                for table in all_tuples(2, 2) {
                    // h is a morphism of structure maps when h . alpha
                    // agrees with beta . ext(unit . h)
                    let lifted: Vec<usize> = (0..p.carrier(2).len())
                        .map(|t| {
                            let k: Vec<usize> = table.iter().map(|&x| p.unit(2)[x]).collect();
                            p.ext_table(2, 2, &k)[t]
                        })
                        .collect();
                    let em_morphism =
                        (0..p.carrier(2).len()).all(|t| table[a.alpha[t]] == b.alpha[lifted[t]]);
                    if em_morphism {
                        let h = crate::alg::QuantHomo {
                            source: alg_a.clone(),
                            target: alg_b.clone(),
                            table: table.clone(),
                        };
                        assert!(crate::alg::check_quant_homomorphism(&h).is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn freeness_of_identity_presentation() {
        let p = fixtures::identity(Mode::Met, 2);
        let v = generate_variety_met(&p).unwrap();
        let algebras: Vec<QuantAlgebra> = enumerate_discrete_variety_algebras(&v, 2)
            .into_iter()
            .map(|ops| discrete_tables_to_quant(&v, 2, ops))
            .collect();
        let refs: Vec<&QuantAlgebra> = algebras.iter().collect();
        let report = check_freeness_quant(&p, 2, &v, &refs, 1 << 24).unwrap();
        assert!(report.passed);
    }

    #[test]
    fn kan_evaluate_discrete_is_carrier() {
        let p = fixtures::writer(4);
        let m = discrete_space(["x0", "x1"]);
        let out = kan_evaluate(&p, &m).unwrap();
        assert_eq!(&out, p.carrier(2).met());
        // identity presentation: any space maps to itself
        let idp = fixtures::identity(Mode::Met, 3);
        let space = {
            use crate::mspace::{validate_metric, MetricCandidate};
            validate_metric(&MetricCandidate {
                points: vec!["x0".into(), "x1".into()],
                dist: vec![
                    vec![Dist::zero(), Dist::ratio(1, 2).unwrap()],
                    vec![Dist::ratio(1, 2).unwrap(), Dist::zero()],
                ],
            })
            .unwrap()
        };
        let out = kan_evaluate(&idp, &space).unwrap();
        assert!(crate::colim::isometric_label_respecting(&out, &space));
    }

    #[test]
    fn kan_evaluate_writer_on_half_distance_pair() {
        let p = fixtures::writer(4);
        let space = {
            use crate::mspace::{validate_metric, MetricCandidate};
            validate_metric(&MetricCandidate {
                points: vec!["x0".into(), "x1".into()],
                dist: vec![
                    vec![Dist::zero(), Dist::ratio(1, 2).unwrap()],
                    vec![Dist::ratio(1, 2).unwrap(), Dist::zero()],
                ],
            })
            .unwrap()
        };
        let out = kan_evaluate(&p, &space).unwrap();
        assert_eq!(out.len(), 4);
        let d = |a: &str, b: &str| {
            out.dist(out.index_of(a).unwrap(), out.index_of(b).unwrap())
                .clone()
        };
        let half = Dist::ratio(1, 2).unwrap();
        let one = Dist::from_integer(1);
        let three_halves = Dist::ratio(3, 2).unwrap();
        assert_eq!(d("x0b0", "x1b0"), half);
        assert_eq!(d("x0b1", "x1b1"), half);
        assert_eq!(d("x0b0", "x0b1"), one);
        assert_eq!(d("x1b0", "x1b1"), one);
        assert_eq!(d("x0b0", "x1b1"), three_halves);
        assert_eq!(d("x0b1", "x1b0"), three_halves);
    }

    #[test]
    fn cpo_variety_generation() {
        // a presentation with a two-chain T_1 emits the join equation
        let p = fixtures::lift(1);
        let v = generate_variety_cpo(&p).unwrap();
        let joins: Vec<&ContEq> = v
            .eqs
            .iter()
            .filter_map(|e| match e {
                Equation::Cont(c) if matches!(c.right, ExtTerm::Join(_)) => Some(c),
                _ => None,
            })
            .collect();
        // bottom <= bottom, bottom <= x0, x0 <= x0 as join equations
        assert_eq!(joins.len(), 3 + 1); // T_0 = {bottom} contributes its reflexive pair
                                        // discrete-order presentations degenerate to reflexive joins only
        let pd = fixtures::identity(Mode::Pos, 2);
        let vd = generate_variety_cpo(&pd).unwrap();
        for e in &vd.eqs {
            if let Equation::Cont(c) = e {
                if let ExtTerm::Join(JoinFamily::EventuallyConstant(fam)) = &c.right {
                    assert_eq!(fam[0], fam[1]);
                }
            }
        }
    }

    #[test]
    fn mode_mismatch_errors() {
        let p = fixtures::identity(Mode::Pos, 2);
        assert!(matches!(
            generate_variety_met(&p),
            Err(BridgeError::ModeMismatch)
        ));
        let p = fixtures::identity(Mode::Met, 2);
        assert!(matches!(
            generate_variety_cpo(&p),
            Err(BridgeError::ModeMismatch)
        ));
    }
}
