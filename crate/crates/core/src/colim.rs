//! The weighted-colimit engine: precongruences and their basic-weight
//! colimits in Met, coinserters in Pos, omega-chain directed colimits, and
//! the product-commutation checks behind strong finitarity.
//!
//! Only omega chains are represented. A colimit over any other finite
//! directed poset would be trivial: a finite directed poset has a top
//! element, so the colimit is just the object sitting there.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::dist::Dist;
use crate::mspace::{check_nonexpanding, sup_product, BoundExceeded, FinMetric, MetricMap};
use crate::poset::{
    check_monotone, discrete_poset, poset_product, validate_poset, FinPoset, MonotoneMap,
    PosetCandidate,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColimError {
    #[error("invalid chain tail: {0}")]
    InvalidTail(String),
    #[error("non-stabilizing chain: {0}")]
    NonStabilizingChain(String),
    #[error("parallel pair {which} is not reflexive; coinserters only commute with products for reflexive pairs")]
    NotReflexive { which: String },
    #[error("malformed chain: {0}")]
    ChainShape(String),
    #[error(transparent)]
    Bound(#[from] BoundExceeded),
}

// ---------------------------------------------------------------------------
// Precongruences and basic-weight colimits
// ---------------------------------------------------------------------------

/// One basic-weight constraint: the images of `x` and `y` must end up at
/// distance at most `eps` (finite, positive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub x: usize,
    pub y: usize,
    pub eps: Dist,
}

/// A weighted diagram of basic shape: a base space together with closeness
/// constraints. The colimit is the universal metric quotient of the base
/// satisfying them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    base: FinMetric,
    constraints: Vec<Constraint>,
}

impl ConstraintSet {
    pub fn new(base: FinMetric, constraints: Vec<Constraint>) -> ConstraintSet {
        for c in &constraints {
            assert!(
                c.x < base.len() && c.y < base.len(),
                "constraint points must lie in the base"
            );
            assert!(
                c.eps.is_finite() && !c.eps.is_zero(),
                "constraint bounds must be positive rationals"
            );
        }
        ConstraintSet { base, constraints }
    }

    pub fn base(&self) -> &FinMetric {
        &self.base
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }
}

impl Serialize for ConstraintSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ConstraintSet", 2)?;
        s.serialize_field("base", &self.base)?;
        let triples: Vec<[String; 3]> = self
            .constraints
            .iter()
            .map(|c| {
                [
                    self.base.label(c.x).to_string(),
                    self.base.label(c.y).to_string(),
                    c.eps.to_string(),
                ]
            })
            .collect();
        s.serialize_field("constraints", &triples)?;
        s.end()
    }
}

/// The precongruence of a space: the discrete space on its points, with one
/// constraint per unordered pair at finite positive distance.
///
/// In principle a precongruence carries one constraint family per positive
/// rational bound; for a finite space the single triple with the exact
/// distance yields the same colimit, since larger bounds are weaker and
/// pairs at distance 0 or infinity impose nothing.
pub fn precongruence(m: &FinMetric) -> ConstraintSet {
    let base = crate::mspace::discrete_space(m.points().iter().cloned());
    let constraints = m
        .pairs()
        .filter(|(_, _, d)| d.is_finite() && !d.is_zero())
        .map(|(i, j, d)| Constraint {
            x: i,
            y: j,
            eps: d.clone(),
        })
        .collect();
    ConstraintSet::new(base, constraints)
}

/// Compute the basic-weight colimit of a constraint set: lower the base
/// distances by the constraints, close under the triangle inequality by
/// all-pairs shortest paths, then collapse the distance-zero classes.
/// Returns the quotient space with the unit map from the base.
pub fn basic_weight_colimit(cs: &ConstraintSet) -> (FinMetric, MetricMap) {
    let n = cs.base.len();
    let mut d: Vec<Vec<Dist>> = cs.base.table().clone();
    for c in &cs.constraints {
        let lowered = d[c.x][c.y].clone().min(c.eps.clone());
        d[c.x][c.y] = lowered.clone();
        d[c.y][c.x] = lowered;
    }
    // Floyd-Warshall over exact rationals with infinity
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    // quotient the distance-zero classes; representative = least index
    let mut class = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..n {
        if class[i] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(i);
        for j in i..n {
            if class[j] == usize::MAX && d[i][j].is_zero() {
                class[j] = c;
            }
        }
    }
    let points: Vec<String> = reps.iter().map(|&i| cs.base.label(i).to_string()).collect();
    let dist: Vec<Vec<Dist>> = reps
        .iter()
        .map(|&i| reps.iter().map(|&j| d[i][j].clone()).collect())
        .collect();
    let quotient = FinMetric::new_unchecked(points, dist);
    let unit = MetricMap::new_unchecked(cs.base.clone(), quotient.clone(), class);
    (quotient, unit)
}

/// Verify the universal property of a basic-weight colimit against one
/// target space, by full enumeration: nonexpanding maps out of the colimit
/// must correspond, bijectively and isometrically in the sup metric, to
/// constraint-respecting nonexpanding maps out of the base.
pub fn check_basic_weight_universal(
    cs: &ConstraintSet,
    colimit: &FinMetric,
    unit: &MetricMap,
    target: &FinMetric,
    max_maps: u128,
) -> Result<bool, BoundExceeded> {
    let count = (target.len() as u128)
        .checked_pow(cs.base.len().max(colimit.len()) as u32)
        .unwrap_or(u128::MAX);
    if count > max_maps {
        return Err(BoundExceeded {
            task: "basic-weight universal property".into(),
            needed: count,
            bound: max_maps,
        });
    }
    let respecting: Vec<Vec<usize>> = all_tables(cs.base.len(), target.len())
        .into_iter()
        .filter(|t| {
            let f = MetricMap::new_unchecked(cs.base.clone(), target.clone(), t.clone());
            check_nonexpanding(&f).is_ok()
                && cs
                    .constraints
                    .iter()
                    .all(|c| target.dist(t[c.x], t[c.y]) <= &c.eps)
        })
        .collect();
    let from_colimit: Vec<Vec<usize>> = all_tables(colimit.len(), target.len())
        .into_iter()
        .filter(|t| {
            let h = MetricMap::new_unchecked(colimit.clone(), target.clone(), t.clone());
            check_nonexpanding(&h).is_ok()
        })
        .collect();
    // precomposition with the unit must be a bijection onto the respecting maps
    let mut images: Vec<Vec<usize>> = from_colimit
        .iter()
        .map(|h| unit.table().iter().map(|&b| h[b]).collect())
        .collect();
    images.sort();
    images.dedup();
    let mut expected = respecting.clone();
    expected.sort();
    if images != expected || images.len() != from_colimit.len() {
        return Ok(false);
    }
    // isometry of the correspondence in the sup metric: automatic for a
    // surjective unit, but checked directly
    for (a, h1) in from_colimit.iter().enumerate() {
        for h2 in from_colimit.iter().skip(a + 1) {
            let d_colim = Dist::sup((0..colimit.len()).map(|i| target.dist(h1[i], h2[i]).clone()));
            let d_base = Dist::sup(
                (0..cs.base.len())
                    .map(|i| target.dist(h1[unit.apply(i)], h2[unit.apply(i)]).clone()),
            );
            if d_colim != d_base {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn all_tables(domain: usize, codomain: usize) -> Vec<Vec<usize>> {
    let mut tables = vec![vec![]];
    for _ in 0..domain {
        let mut next = Vec::with_capacity(tables.len() * codomain);
        for t in &tables {
            for v in 0..codomain {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        tables = next;
    }
    tables
}

// ---------------------------------------------------------------------------
// Coinserters
// ---------------------------------------------------------------------------

/// An ordered parallel pair `f0, f1 : A -> B` in Pos.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelPair {
    f0: MonotoneMap,
    f1: MonotoneMap,
}

impl ParallelPair {
    pub fn new(f0: MonotoneMap, f1: MonotoneMap) -> ParallelPair {
        assert_eq!(
            f0.domain(),
            f1.domain(),
            "parallel pair must share its domain"
        );
        assert_eq!(
            f0.codomain(),
            f1.codomain(),
            "parallel pair must share its codomain"
        );
        ParallelPair { f0, f1 }
    }

    pub fn f0(&self) -> &MonotoneMap {
        &self.f0
    }

    pub fn f1(&self) -> &MonotoneMap {
        &self.f1
    }

    pub fn domain(&self) -> &FinPoset {
        self.f0.domain()
    }

    pub fn codomain(&self) -> &FinPoset {
        self.f0.codomain()
    }
}

/// The projection pair of a poset: both projections from the discrete set of
/// comparable pairs to the discrete carrier. Its coinserter recovers the
/// poset itself.
pub fn projection_pair(c: &FinPoset) -> ParallelPair {
    let mut pair_labels = Vec::new();
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for i in 0..c.len() {
        for j in 0..c.len() {
            if c.leq(i, j) {
                pair_labels.push(format!("({},{})", c.label(i), c.label(j)));
                lo.push(i);
                hi.push(j);
            }
        }
    }
    let dom = discrete_poset(pair_labels);
    let cod = discrete_poset(c.points().iter().cloned());
    ParallelPair::new(
        MonotoneMap::new_unchecked(dom.clone(), cod.clone(), lo),
        MonotoneMap::new_unchecked(dom, cod, hi),
    )
}

/// Coinserter of a parallel pair: the smallest preorder on the codomain
/// containing its order and every pair `(f0 a, f1 a)`, quotiented by its
/// symmetric core. Returns the quotient poset and the projection, which is
/// always surjective.
pub fn coinserter(p: &ParallelPair) -> (FinPoset, MonotoneMap) {
    let b = p.codomain();
    let n = b.len();
    let mut rel = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            rel[i][j] = b.leq(i, j);
        }
    }
    for a in 0..p.domain().len() {
        rel[p.f0.apply(a)][p.f1.apply(a)] = true;
    }
    // transitive closure
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if rel[i][k] && rel[k][j] {
                    rel[i][j] = true;
                }
            }
        }
    }
    // collapse the symmetric core
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for i in 0..n {
        if class[i] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(i);
        for j in i..n {
            if class[j] == usize::MAX && rel[i][j] && rel[j][i] {
                class[j] = c;
            }
        }
    }
    let points: Vec<String> = reps.iter().map(|&i| b.label(i).to_string()).collect();
    let leq: Vec<Vec<bool>> = reps
        .iter()
        .map(|&i| reps.iter().map(|&j| rel[i][j]).collect())
        .collect();
    let quotient = FinPoset::new_unchecked(points, leq);
    let proj = MonotoneMap::new_unchecked(b.clone(), quotient.clone(), class);
    (quotient, proj)
}

/// Decide whether a parallel pair is reflexive: search for a monotone joint
/// splitting `d` with `f0 . d = f1 . d = id`. Returns one such splitting,
/// found deterministically.
pub fn is_reflexive(p: &ParallelPair) -> Option<MonotoneMap> {
    let a = p.domain();
    let b = p.codomain();
    let candidates: Vec<Vec<usize>> = (0..b.len())
        .map(|i| {
            (0..a.len())
                .filter(|&x| p.f0.apply(x) == i && p.f1.apply(x) == i)
                .collect()
        })
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return None;
    }
    // backtracking over B's points for a monotone selection
    fn search(
        b: &FinPoset,
        a: &FinPoset,
        candidates: &[Vec<usize>],
        chosen: &mut Vec<usize>,
    ) -> bool {
        let i = chosen.len();
        if i == candidates.len() {
            return true;
        }
        for &cand in &candidates[i] {
            let ok = (0..i).all(|j| {
                (!b.leq(j, i) || a.leq(chosen[j], cand)) && (!b.leq(i, j) || a.leq(cand, chosen[j]))
            });
            if ok {
                chosen.push(cand);
                if search(b, a, candidates, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    if search(b, a, &candidates, &mut chosen) {
        Some(MonotoneMap::new_unchecked(b.clone(), a.clone(), chosen))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Omega chains and their directed colimits
// ---------------------------------------------------------------------------

/// Tail descriptor of a metric omega chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetTail {
    /// All data beyond the last explicit stage repeats it with identity links.
    Stable,
    /// The inf of the induced distance sequence for each pair of points of
    /// the last explicit stage.
    DeclaredLimits(Vec<Vec<Dist>>),
}

/// A directed omega chain in Met: explicit stages joined by nonexpanding
/// links, plus a tail descriptor making the colimit computable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaChainMet {
    stages: Vec<FinMetric>,
    links: Vec<MetricMap>,
    tail: MetTail,
}

impl OmegaChainMet {
    pub fn new(
        stages: Vec<FinMetric>,
        links: Vec<MetricMap>,
        tail: MetTail,
    ) -> Result<OmegaChainMet, ColimError> {
        if stages.is_empty() {
            return Err(ColimError::ChainShape(
                "a chain needs at least one stage".into(),
            ));
        }
        if links.len() + 1 != stages.len() {
            return Err(ColimError::ChainShape(format!(
                "{} stages need {} links, got {}",
                stages.len(),
                stages.len() - 1,
                links.len()
            )));
        }
        for (i, l) in links.iter().enumerate() {
            if l.domain() != &stages[i] || l.codomain() != &stages[i + 1] {
                return Err(ColimError::ChainShape(format!(
                    "link {i} does not join stages {i} and {}",
                    i + 1
                )));
            }
            if check_nonexpanding(l).is_err() {
                return Err(ColimError::ChainShape(format!(
                    "link {i} is not nonexpanding"
                )));
            }
        }
        if let MetTail::DeclaredLimits(lim) = &tail {
            let last = stages.last().unwrap();
            let n = last.len();
            if lim.len() != n || lim.iter().any(|r| r.len() != n) {
                return Err(ColimError::InvalidTail(format!(
                    "declared limits must be {n}x{n}"
                )));
            }
            for i in 0..n {
                if !lim[i][i].is_zero() {
                    return Err(ColimError::InvalidTail(format!(
                        "declared limit on the diagonal at {} is {}",
                        last.label(i),
                        lim[i][i]
                    )));
                }
                for j in 0..n {
                    if lim[i][j] != lim[j][i] {
                        return Err(ColimError::InvalidTail(
                            "declared limits must be symmetric".into(),
                        ));
                    }
                    if lim[i][j] > *last.dist(i, j) {
                        return Err(ColimError::InvalidTail(format!(
                            "declared limit for ({},{}) exceeds the last-stage distance",
                            last.label(i),
                            last.label(j)
                        )));
                    }
                    for k in 0..n {
                        if lim[i][k] > &lim[i][j] + &lim[j][k] {
                            return Err(ColimError::InvalidTail(
                                "declared limits violate the triangle inequality".into(),
                            ));
                        }
                    }
                }
            }
        }
        Ok(OmegaChainMet {
            stages,
            links,
            tail,
        })
    }

    /// Constant chain on one space.
    pub fn constant(space: &FinMetric, stages: usize) -> OmegaChainMet {
        assert!(stages >= 1);
        let links = (1..stages).map(|_| MetricMap::identity(space)).collect();
        OmegaChainMet::new(vec![space.clone(); stages], links, MetTail::Stable).unwrap()
    }

    pub fn stages(&self) -> &[FinMetric] {
        &self.stages
    }

    pub fn links(&self) -> &[MetricMap] {
        &self.links
    }

    pub fn tail(&self) -> &MetTail {
        &self.tail
    }

    pub fn last_stage(&self) -> &FinMetric {
        self.stages.last().unwrap()
    }

    /// Composite of the links from stage `i` into the last explicit stage.
    pub fn into_last(&self, i: usize) -> MetricMap {
        let mut f = MetricMap::identity(&self.stages[i]);
        for l in &self.links[i..] {
            f = f.then(l);
        }
        f
    }

    /// The limit of the induced distance sequence for two points of stage `i`.
    pub fn limit_dist(&self, i: usize, y: usize, y2: usize) -> Dist {
        let f = self.into_last(i);
        match &self.tail {
            MetTail::Stable => self.last_stage().dist(f.apply(y), f.apply(y2)).clone(),
            MetTail::DeclaredLimits(lim) => lim[f.apply(y)][f.apply(y2)].clone(),
        }
    }

    /// Extend the explicit prefix to `len` stages by repeating the last
    /// stage with identity links; the tail is unchanged.
    pub fn pad_to(&self, len: usize) -> OmegaChainMet {
        let mut stages = self.stages.clone();
        let mut links = self.links.clone();
        while stages.len() < len {
            links.push(MetricMap::identity(self.last_stage()));
            stages.push(self.last_stage().clone());
        }
        OmegaChainMet {
            stages,
            links,
            tail: self.tail.clone(),
        }
    }
}

impl Serialize for OmegaChainMet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("OmegaChainMet", 3)?;
        s.serialize_field("stages", &self.stages)?;
        let links: Vec<Vec<&str>> = self
            .links
            .iter()
            .map(|l| {
                (0..l.domain().len())
                    .map(|i| l.codomain().label(l.apply(i)))
                    .collect()
            })
            .collect();
        s.serialize_field("links", &links)?;
        match &self.tail {
            MetTail::Stable => s.serialize_field("tail", "stable")?,
            MetTail::DeclaredLimits(lim) => {
                let mut wrapper = std::collections::BTreeMap::new();
                wrapper.insert("limits", lim);
                s.serialize_field("tail", &wrapper)?;
            }
        }
        s.end()
    }
}

impl Serialize for OmegaChainPos {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("OmegaChainPos", 3)?;
        s.serialize_field("stages", &self.stages)?;
        let links: Vec<Vec<&str>> = self
            .links
            .iter()
            .map(|l| {
                (0..l.domain().len())
                    .map(|i| l.codomain().label(l.apply(i)))
                    .collect()
            })
            .collect();
        s.serialize_field("links", &links)?;
        s.serialize_field("tail", "stable")?;
        s.end()
    }
}

/// Directed colimit of a metric omega chain: the last explicit stage with
/// the tail's limit distances, collapsed at distance zero. Returns the
/// colimit and the full cocone.
pub fn omega_colimit_met(ch: &OmegaChainMet) -> (FinMetric, Vec<MetricMap>) {
    let last = ch.last_stage();
    let n = last.len();
    let limit: Vec<Vec<Dist>> = match ch.tail() {
        MetTail::Stable => last.table().clone(),
        MetTail::DeclaredLimits(lim) => lim.clone(),
    };
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for i in 0..n {
        if class[i] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(i);
        for j in i..n {
            if class[j] == usize::MAX && limit[i][j].is_zero() {
                class[j] = c;
            }
        }
    }
    let points: Vec<String> = reps.iter().map(|&i| last.label(i).to_string()).collect();
    let dist: Vec<Vec<Dist>> = reps
        .iter()
        .map(|&i| reps.iter().map(|&j| limit[i][j].clone()).collect())
        .collect();
    let colimit = FinMetric::new_unchecked(points, dist);
    let quotient = MetricMap::new_unchecked(last.clone(), colimit.clone(), class);
    let cocone = (0..ch.stages().len())
        .map(|i| ch.into_last(i).then(&quotient))
        .collect();
    (colimit, cocone)
}

/// Check the two characterization clauses of directed colimit cocones in
/// Met directly on a computed colimit: (a) the cocone maps jointly cover the
/// colimit, and (b) cocone distances are the limits of the induced distance
/// sequences.
pub fn check_met_colimit_characterization(
    ch: &OmegaChainMet,
    colimit: &FinMetric,
    cocone: &[MetricMap],
) -> bool {
    let mut covered = vec![false; colimit.len()];
    for c in cocone {
        for i in 0..c.domain().len() {
            covered[c.apply(i)] = true;
        }
    }
    if !covered.into_iter().all(|b| b) {
        return false;
    }
    for (i, c) in cocone.iter().enumerate() {
        let stage = &ch.stages()[i];
        for y in 0..stage.len() {
            for y2 in 0..stage.len() {
                if colimit.dist(c.apply(y), c.apply(y2)) != &ch.limit_dist(i, y, y2) {
                    return false;
                }
            }
        }
    }
    true
}

/// A directed omega chain in Pos; only stable tails are representable, since
/// a genuinely growing chain has an infinite colimit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaChainPos {
    stages: Vec<FinPoset>,
    links: Vec<MonotoneMap>,
}

impl OmegaChainPos {
    pub fn new(
        stages: Vec<FinPoset>,
        links: Vec<MonotoneMap>,
    ) -> Result<OmegaChainPos, ColimError> {
        if stages.is_empty() {
            return Err(ColimError::ChainShape(
                "a chain needs at least one stage".into(),
            ));
        }
        if links.len() + 1 != stages.len() {
            return Err(ColimError::ChainShape(format!(
                "{} stages need {} links, got {}",
                stages.len(),
                stages.len() - 1,
                links.len()
            )));
        }
        for (i, l) in links.iter().enumerate() {
            if l.domain() != &stages[i] || l.codomain() != &stages[i + 1] {
                return Err(ColimError::ChainShape(format!(
                    "link {i} does not join stages {i} and {}",
                    i + 1
                )));
            }
            if check_monotone(l).is_err() {
                return Err(ColimError::ChainShape(format!("link {i} is not monotone")));
            }
        }
        Ok(OmegaChainPos { stages, links })
    }

    pub fn constant(p: &FinPoset, stages: usize) -> OmegaChainPos {
        assert!(stages >= 1);
        let links = (1..stages).map(|_| MonotoneMap::identity(p)).collect();
        OmegaChainPos::new(vec![p.clone(); stages], links).unwrap()
    }

    /// The catalogued strictly growing family `A_n = {0, ..., n-1}` with
    /// inclusion links and no stabilization. Its true colimit is the chain
    /// of naturals with a top element added, which is not finite, so the
    /// request is rejected.
    pub fn ordinal_family(_stages: usize) -> Result<OmegaChainPos, ColimError> {
        Err(ColimError::NonStabilizingChain(
            "the strictly growing ordinal family A_0 into A_1 into ... has colimit \
             N with a top element adjoined, which is not a finite poset; only \
             eventually stable chains are representable"
                .into(),
        ))
    }

    pub fn stages(&self) -> &[FinPoset] {
        &self.stages
    }

    pub fn links(&self) -> &[MonotoneMap] {
        &self.links
    }

    pub fn last_stage(&self) -> &FinPoset {
        self.stages.last().unwrap()
    }

    pub fn into_last(&self, i: usize) -> MonotoneMap {
        let mut f = MonotoneMap::identity(&self.stages[i]);
        for l in &self.links[i..] {
            f = f.then(l);
        }
        f
    }

    pub fn pad_to(&self, len: usize) -> OmegaChainPos {
        let mut stages = self.stages.clone();
        let mut links = self.links.clone();
        while stages.len() < len {
            links.push(MonotoneMap::identity(self.last_stage()));
            stages.push(self.last_stage().clone());
        }
        OmegaChainPos { stages, links }
    }
}

/// Directed colimit of a stable Pos chain: the last stage, with the
/// composed links as cocone.
pub fn omega_colimit_pos(ch: &OmegaChainPos) -> (FinPoset, Vec<MonotoneMap>) {
    let colimit = ch.last_stage().clone();
    let cocone = (0..ch.stages().len()).map(|i| ch.into_last(i)).collect();
    (colimit, cocone)
}

// ---------------------------------------------------------------------------
// Isometry and order-isomorphism search
// ---------------------------------------------------------------------------

/// Size bound for the bijection search in isomorphism checks.
pub const ISO_SEARCH_BOUND: usize = 9;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Try the label-respecting bijection first; if labels do not line up,
/// search all bijections up to [`ISO_SEARCH_BOUND`] points. Returns the
/// witnessing bijection `x -> y` as a table.
pub fn isometric(x: &FinMetric, y: &FinMetric) -> Option<Vec<usize>> {
    if x.len() != y.len() {
        return None;
    }
    if let Some(table) = label_respecting(x.points(), y.points()) {
        if check_isometry_table(x, y, &table) {
            return Some(table);
        }
    }
    assert!(
        x.len() <= ISO_SEARCH_BOUND,
        "isometry search is bounded at {ISO_SEARCH_BOUND} points"
    );
    permutations(x.len())
        .into_iter()
        .find(|p| check_isometry_table(x, y, p))
}

fn check_isometry_table(x: &FinMetric, y: &FinMetric, table: &[usize]) -> bool {
    (0..x.len()).all(|i| (0..x.len()).all(|j| x.dist(i, j) == y.dist(table[i], table[j])))
}

/// Label-respecting isometry only: the bijection must match labels exactly.
pub fn isometric_label_respecting(x: &FinMetric, y: &FinMetric) -> bool {
    if x.len() != y.len() {
        return false;
    }
    match label_respecting(x.points(), y.points()) {
        Some(table) => check_isometry_table(x, y, &table),
        None => false,
    }
}

pub fn order_isomorphic(x: &FinPoset, y: &FinPoset) -> Option<Vec<usize>> {
    if x.len() != y.len() {
        return None;
    }
    if let Some(table) = label_respecting(x.points(), y.points()) {
        if check_order_iso_table(x, y, &table) {
            return Some(table);
        }
    }
    assert!(
        x.len() <= ISO_SEARCH_BOUND,
        "isomorphism search is bounded at {ISO_SEARCH_BOUND} points"
    );
    permutations(x.len())
        .into_iter()
        .find(|p| check_order_iso_table(x, y, p))
}

fn check_order_iso_table(x: &FinPoset, y: &FinPoset, table: &[usize]) -> bool {
    (0..x.len()).all(|i| (0..x.len()).all(|j| x.leq(i, j) == y.leq(table[i], table[j])))
}

fn label_respecting(xs: &[String], ys: &[String]) -> Option<Vec<usize>> {
    xs.iter().map(|p| ys.iter().position(|q| q == p)).collect()
}

// ---------------------------------------------------------------------------
// Commutation of directed colimits / reflexive coinserters with products
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetCommutationReport {
    pub holds: bool,
    pub colimit_of_products: FinMetric,
    pub product_of_colimits: FinMetric,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PosCommutationReport {
    pub holds: bool,
    pub colimit_of_products: FinPoset,
    pub product_of_colimits: FinPoset,
}

fn product_met_map(f: &MetricMap, g: &MetricMap, dom: &FinMetric, cod: &FinMetric) -> MetricMap {
    let gb = g.domain().len();
    let gcod = g.codomain().len();
    let table = (0..dom.len())
        .map(|idx| {
            let (i, j) = (idx / gb, idx % gb);
            f.apply(i) * gcod + g.apply(j)
        })
        .collect();
    MetricMap::new_unchecked(dom.clone(), cod.clone(), table)
}

/// Stagewise product of two metric chains. Stable prefixes are padded to a
/// common length; for the tail, the limit of a max of nonincreasing
/// sequences is the max of the limits.
pub fn product_met_chain(a: &OmegaChainMet, b: &OmegaChainMet) -> OmegaChainMet {
    let len = a.stages().len().max(b.stages().len());
    let a = a.pad_to(len);
    let b = b.pad_to(len);
    let stages: Vec<FinMetric> = (0..len)
        .map(|i| sup_product(&[&a.stages()[i], &b.stages()[i]]).0)
        .collect();
    let links: Vec<MetricMap> = (0..len - 1)
        .map(|i| product_met_map(&a.links()[i], &b.links()[i], &stages[i], &stages[i + 1]))
        .collect();
    let tail = match (a.tail(), b.tail()) {
        (MetTail::Stable, MetTail::Stable) => MetTail::Stable,
        _ => {
            let la = a.last_stage();
            let lb = b.last_stage();
            let lim_a = |i: usize, j: usize| match a.tail() {
                MetTail::Stable => la.dist(i, j).clone(),
                MetTail::DeclaredLimits(l) => l[i][j].clone(),
            };
            let lim_b = |i: usize, j: usize| match b.tail() {
                MetTail::Stable => lb.dist(i, j).clone(),
                MetTail::DeclaredLimits(l) => l[i][j].clone(),
            };
            let n = la.len() * lb.len();
            let lim = (0..n)
                .map(|p| {
                    (0..n)
                        .map(|q| {
                            let (pa, pb) = (p / lb.len(), p % lb.len());
                            let (qa, qb) = (q / lb.len(), q % lb.len());
                            lim_a(pa, qa).max(lim_b(pb, qb))
                        })
                        .collect()
                })
                .collect();
            MetTail::DeclaredLimits(lim)
        }
    };
    OmegaChainMet::new(stages, links, tail).expect("stagewise product of valid chains is valid")
}

/// Directed colimits commute with finite products: compute the colimit of
/// the stagewise product chain and compare it with the product of the two
/// colimits, up to isometry.
pub fn check_product_commutation_met(a: &OmegaChainMet, b: &OmegaChainMet) -> MetCommutationReport {
    let product_chain = product_met_chain(a, b);
    let (lhs, _) = omega_colimit_met(&product_chain);
    let (ca, _) = omega_colimit_met(a);
    let (cb, _) = omega_colimit_met(b);
    let (rhs, _) = sup_product(&[&ca, &cb]);
    let holds = isometric(&lhs, &rhs).is_some();
    MetCommutationReport {
        holds,
        colimit_of_products: lhs,
        product_of_colimits: rhs,
    }
}

fn product_pos_map(
    f: &MonotoneMap,
    g: &MonotoneMap,
    dom: &FinPoset,
    cod: &FinPoset,
) -> MonotoneMap {
    let gb = g.domain().len();
    let gcod = g.codomain().len();
    let table = (0..dom.len())
        .map(|idx| {
            let (i, j) = (idx / gb, idx % gb);
            f.apply(i) * gcod + g.apply(j)
        })
        .collect();
    MonotoneMap::new_unchecked(dom.clone(), cod.clone(), table)
}

pub fn product_pos_chain(a: &OmegaChainPos, b: &OmegaChainPos) -> OmegaChainPos {
    let len = a.stages().len().max(b.stages().len());
    let a = a.pad_to(len);
    let b = b.pad_to(len);
    let stages: Vec<FinPoset> = (0..len)
        .map(|i| poset_product(&[&a.stages()[i], &b.stages()[i]]).0)
        .collect();
    let links: Vec<MonotoneMap> = (0..len - 1)
        .map(|i| product_pos_map(&a.links()[i], &b.links()[i], &stages[i], &stages[i + 1]))
        .collect();
    OmegaChainPos::new(stages, links).expect("stagewise product of valid chains is valid")
}

pub fn check_product_commutation_pos(a: &OmegaChainPos, b: &OmegaChainPos) -> PosCommutationReport {
    let product_chain = product_pos_chain(a, b);
    let (lhs, _) = omega_colimit_pos(&product_chain);
    let (ca, _) = omega_colimit_pos(a);
    let (cb, _) = omega_colimit_pos(b);
    let (rhs, _) = poset_product(&[&ca, &cb]);
    let holds = order_isomorphic(&lhs, &rhs).is_some();
    PosCommutationReport {
        holds,
        colimit_of_products: lhs,
        product_of_colimits: rhs,
    }
}

/// Reflexive coinserters commute with finite products: compare the
/// coinserter of the componentwise product pair with the product of the two
/// coinserters. Errors if either pair is not reflexive, since commutation
/// can fail otherwise.
pub fn check_coinserter_products(
    pa: &ParallelPair,
    pb: &ParallelPair,
) -> Result<PosCommutationReport, ColimError> {
    if is_reflexive(pa).is_none() {
        return Err(ColimError::NotReflexive { which: "A".into() });
    }
    if is_reflexive(pb).is_none() {
        return Err(ColimError::NotReflexive { which: "B".into() });
    }
    let (dom, _) = poset_product(&[pa.domain(), pb.domain()]);
    let (cod, _) = poset_product(&[pa.codomain(), pb.codomain()]);
    let f0 = product_pos_map(pa.f0(), pb.f0(), &dom, &cod);
    let f1 = product_pos_map(pa.f1(), pb.f1(), &dom, &cod);
    let (lhs, _) = coinserter(&ParallelPair::new(f0, f1));
    let (ca, _) = coinserter(pa);
    let (cb, _) = coinserter(pb);
    let (rhs, _) = poset_product(&[&ca, &cb]);
    let holds = order_isomorphic(&lhs, &rhs).is_some();
    Ok(PosCommutationReport {
        holds,
        colimit_of_products: lhs,
        product_of_colimits: rhs,
    })
}

// ---------------------------------------------------------------------------
// Universal property of coinserters, by enumeration
// ---------------------------------------------------------------------------

/// All posets on at most `max_points` points, one representative per
/// isomorphism class, on canonical labels `e0, e1, ...`.
pub fn all_posets_up_to_iso(max_points: usize) -> Vec<FinPoset> {
    let mut out = Vec::new();
    for n in 1..=max_points {
        let mut seen = std::collections::BTreeSet::new();
        let offdiag: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let perms = permutations(n);
        for mask in 0..(1u64 << offdiag.len()) {
            let mut leq = vec![vec![false; n]; n];
            for i in 0..n {
                leq[i][i] = true;
            }
            for (bit, &(i, j)) in offdiag.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    leq[i][j] = true;
                }
            }
            let candidate = PosetCandidate {
                points: (0..n).map(|i| format!("e{i}")).collect(),
                leq,
            };
            if let Ok(p) = validate_poset(&candidate) {
                let canon = perms
                    .iter()
                    .map(|perm| {
                        let mut bits = Vec::with_capacity(n * n);
                        for i in 0..n {
                            for j in 0..n {
                                bits.push(p.leq(perm[i], perm[j]));
                            }
                        }
                        bits
                    })
                    .min()
                    .unwrap();
                if seen.insert(canon) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// All monotone maps between two posets.
pub fn all_monotone_maps(dom: &FinPoset, cod: &FinPoset) -> Vec<MonotoneMap> {
    all_tables(dom.len(), cod.len())
        .into_iter()
        .map(|t| MonotoneMap::new_unchecked(dom.clone(), cod.clone(), t))
        .filter(|f| check_monotone(f).is_ok())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniversalReport {
    pub holds: bool,
    pub detail: String,
}

/// Verify both universal-property clauses of a coinserter candidate by
/// exhaustive enumeration of monotone maps into all posets of at most
/// `max_target_points` points, and check the candidate is isomorphic to the
/// computed coinserter.
pub fn check_coinserter_universal(
    p: &ParallelPair,
    candidate: &(FinPoset, MonotoneMap),
    max_target_points: usize,
    max_maps: u128,
) -> Result<UniversalReport, BoundExceeded> {
    let (cand_poset, cand_map) = candidate;
    assert_eq!(
        cand_map.domain(),
        p.codomain(),
        "candidate map must start at the pair's codomain"
    );
    assert_eq!(
        cand_map.codomain(),
        cand_poset,
        "candidate map must land in the candidate poset"
    );

    let b = p.codomain();
    for e in 1..=max_target_points {
        let need = (e as u128)
            .checked_pow(b.len().max(cand_poset.len()) as u32)
            .unwrap_or(u128::MAX);
        if need > max_maps {
            return Err(BoundExceeded {
                task: "coinserter universal property".into(),
                needed: need,
                bound: max_maps,
            });
        }
    }

    // the candidate must itself satisfy the defining inequality
    let ok = (0..p.domain().len()).all(|a| {
        cand_poset.leq(
            cand_map.apply(p.f0().apply(a)),
            cand_map.apply(p.f1().apply(a)),
        )
    });
    if !ok {
        return Ok(UniversalReport {
            holds: false,
            detail: "candidate map does not satisfy c.f0 <= c.f1".into(),
        });
    }

    for target in all_posets_up_to_iso(max_target_points) {
        let maps_from_cand = all_monotone_maps(cand_poset, &target);
        // clause (a): every competing map factorizes through the candidate
        for c2 in all_monotone_maps(b, &target) {
            let competing = (0..p.domain().len())
                .all(|a| target.leq(c2.apply(p.f0().apply(a)), c2.apply(p.f1().apply(a))));
            if !competing {
                continue;
            }
            let factors = maps_from_cand
                .iter()
                .any(|u| (0..b.len()).all(|x| u.apply(cand_map.apply(x)) == c2.apply(x)));
            if !factors {
                return Ok(UniversalReport {
                    holds: false,
                    detail: format!(
                        "clause (a) fails: a map into a {}-point poset does not factorize",
                        target.len()
                    ),
                });
            }
        }
        // clause (b): precomposition with the candidate reflects the pointwise order
        for u in &maps_from_cand {
            for v in &maps_from_cand {
                let after = (0..b.len())
                    .all(|x| target.leq(u.apply(cand_map.apply(x)), v.apply(cand_map.apply(x))));
                let direct = (0..cand_poset.len()).all(|x| target.leq(u.apply(x), v.apply(x)));
                if after && !direct {
                    return Ok(UniversalReport {
                        holds: false,
                        detail: format!(
                            "clause (b) fails: order not reflected for maps into a {}-point poset",
                            target.len()
                        ),
                    });
                }
            }
        }
    }

    let (built, _) = coinserter(p);
    if order_isomorphic(cand_poset, &built).is_none() {
        return Ok(UniversalReport {
            holds: false,
            detail: "candidate poset is not isomorphic to the coinserter".into(),
        });
    }
    Ok(UniversalReport {
        holds: true,
        detail: "universal property verified".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mspace::{discrete_space, validate_metric, MetricCandidate};
    use crate::poset::chain_poset;

    fn q(n: i64, m: i64) -> Dist {
        Dist::ratio(n, m).unwrap()
    }

    fn metric(points: &[&str], finite: &[(&str, &str, Dist)]) -> FinMetric {
        let pts: Vec<String> = points.iter().map(|s| s.to_string()).collect();
        let n = pts.len();
        let mut dist = vec![vec![Dist::Infinity; n]; n];
        for i in 0..n {
            dist[i][i] = Dist::zero();
        }
        for (a, b, d) in finite {
            let i = pts.iter().position(|p| p == a).unwrap();
            let j = pts.iter().position(|p| p == b).unwrap();
            dist[i][j] = d.clone();
            dist[j][i] = d.clone();
        }
        validate_metric(&MetricCandidate { points: pts, dist }).unwrap()
    }

    #[test]
    fn precongruence_triples() {
        let single = discrete_space(["p"]);
        assert!(precongruence(&single).constraints().is_empty());

        let m = metric(&["p", "q"], &[("p", "q", q(1, 1))]);
        let cs = precongruence(&m);
        assert_eq!(cs.constraints().len(), 1);
        assert_eq!(cs.constraints()[0].eps, q(1, 1));

        let m3 = metric(
            &["p", "q", "r"],
            &[
                ("p", "q", q(1, 1)),
                ("q", "r", q(2, 1)),
                ("p", "r", q(5, 2)),
            ],
        );
        assert_eq!(precongruence(&m3).constraints().len(), 3);
    }

    #[test]
    fn colimit_reconstructs_space() {
        let m = metric(
            &["p", "q", "r"],
            &[
                ("p", "q", q(1, 1)),
                ("q", "r", q(2, 1)),
                ("p", "r", q(5, 2)),
            ],
        );
        let (c, unit) = basic_weight_colimit(&precongruence(&m));
        assert!(isometric_label_respecting(&m, &c));
        assert!(unit.is_surjective());
        assert_eq!(c.len(), m.len());
    }

    #[test]
    fn shortest_path_closure() {
        let base = discrete_space(["a", "b", "c"]);
        let cs = ConstraintSet::new(
            base,
            vec![
                Constraint {
                    x: 0,
                    y: 1,
                    eps: q(1, 1),
                },
                Constraint {
                    x: 1,
                    y: 2,
                    eps: q(1, 1),
                },
            ],
        );
        let (c, _) = basic_weight_colimit(&cs);
        let a = c.index_of("a").unwrap();
        let cc = c.index_of("c").unwrap();
        assert_eq!(*c.dist(a, cc), q(2, 1));
    }

    #[test]
    fn parallel_constraints_take_min() {
        let base = discrete_space(["a", "b"]);
        let cs = ConstraintSet::new(
            base,
            vec![
                Constraint {
                    x: 0,
                    y: 1,
                    eps: q(1, 1),
                },
                Constraint {
                    x: 0,
                    y: 1,
                    eps: q(1, 2),
                },
                Constraint {
                    x: 0,
                    y: 1,
                    eps: q(1, 4),
                },
            ],
        );
        let (c, _) = basic_weight_colimit(&cs);
        assert_eq!(*c.dist(0, 1), q(1, 4));
    }

    #[test]
    fn universal_property_on_small_cases() {
        let m = metric(
            &["p", "q", "r"],
            &[
                ("p", "q", q(1, 2)),
                ("q", "r", q(1, 1)),
                ("p", "r", q(3, 2)),
            ],
        );
        let cs = precongruence(&m);
        let (c, unit) = basic_weight_colimit(&cs);
        let targets = [
            discrete_space(["u", "v"]),
            metric(&["u", "v"], &[("u", "v", q(1, 2))]),
            metric(
                &["u", "v", "w"],
                &[
                    ("u", "v", q(1, 1)),
                    ("v", "w", q(1, 1)),
                    ("u", "w", q(2, 1)),
                ],
            ),
        ];
        for z in &targets {
            assert!(check_basic_weight_universal(&cs, &c, &unit, z, 1 << 24).unwrap());
        }
    }

    /// The same closure computes colimits over bases that already carry a
    /// metric, the shape used when evaluating presented monads on
    /// non-discrete spaces; only the universal property certifies it.
    #[test]
    fn universal_property_with_non_discrete_base() {
        let base = metric(
            &["a", "b", "c"],
            &[
                ("a", "b", q(2, 1)),
                ("a", "c", q(3, 1)),
                ("b", "c", q(1, 1)),
            ],
        );
        let cs = ConstraintSet::new(
            base,
            vec![
                Constraint {
                    x: 0,
                    y: 1,
                    eps: q(1, 4),
                },
                Constraint {
                    x: 1,
                    y: 2,
                    eps: q(1, 2),
                },
            ],
        );
        let (c, unit) = basic_weight_colimit(&cs);
        assert_eq!(*c.dist(0, 1), q(1, 4));
        assert_eq!(*c.dist(0, 2), q(3, 4));
        let targets = [
            discrete_space(["u", "v"]),
            metric(&["u", "v"], &[("u", "v", q(1, 4))]),
            metric(
                &["u", "v", "w"],
                &[
                    ("u", "v", q(1, 4)),
                    ("v", "w", q(1, 2)),
                    ("u", "w", q(3, 4)),
                ],
            ),
        ];
        for z in &targets {
            assert!(check_basic_weight_universal(&cs, &c, &unit, z, 1 << 24).unwrap());
        }
    }

    #[test]
    fn coinserter_of_equal_pair_is_identity() {
        let b = chain_poset(["0", "1"]);
        let a = discrete_poset(["x"]);
        let f = MonotoneMap::new(a.clone(), b.clone(), vec![0]).unwrap();
        let p = ParallelPair::new(f.clone(), f);
        let (c, proj) = coinserter(&p);
        assert!(order_isomorphic(&c, &b).is_some());
        assert_eq!(proj.table(), &[0, 1]);
    }

    #[test]
    fn coinserter_of_projection_pair_recovers_poset() {
        let c2 = chain_poset(["a", "b"]);
        let p = projection_pair(&c2);
        assert!(is_reflexive(&p).is_some());
        let (c, proj) = coinserter(&p);
        assert!(order_isomorphic(&c, &c2).is_some());
        assert!(proj.is_surjective());
        // and on a non-chain example
        let (diamond, _) = poset_product(&[&c2, &c2]);
        let (cd, _) = coinserter(&projection_pair(&diamond));
        assert!(order_isomorphic(&cd, &diamond).is_some());
    }

    #[test]
    fn coinserter_inserts_order() {
        let b = discrete_poset(["u", "v"]);
        let a = discrete_poset(["*"]);
        let f0 = MonotoneMap::new(a.clone(), b.clone(), vec![0]).unwrap();
        let f1 = MonotoneMap::new(a.clone(), b.clone(), vec![1]).unwrap();
        let p = ParallelPair::new(f0, f1);
        let (c, _) = coinserter(&p);
        assert_eq!(c.len(), 2);
        let u = c.index_of("u").unwrap();
        let v = c.index_of("v").unwrap();
        assert!(c.leq(u, v) && !c.leq(v, u));
        // this pair has no splitting: |B| > |A|
        assert!(is_reflexive(&p).is_none());
    }

    #[test]
    fn reflexive_pair_witness() {
        let b = chain_poset(["0", "1"]);
        let p = ParallelPair::new(MonotoneMap::identity(&b), MonotoneMap::identity(&b));
        let d = is_reflexive(&p).unwrap();
        assert_eq!(d.table(), &[0, 1]);
        let proj = projection_pair(&b);
        let d2 = is_reflexive(&proj).unwrap();
        // d(x) = (x,x)
        for i in 0..b.len() {
            let lbl = format!("({},{})", b.label(i), b.label(i));
            assert_eq!(proj.domain().label(d2.apply(i)), lbl);
        }
    }

    #[test]
    fn met_chain_colimits() {
        let m = metric(&["p", "q"], &[("p", "q", q(1, 1))]);
        let constant = OmegaChainMet::constant(&m, 3);
        let (c, cocone) = omega_colimit_met(&constant);
        assert!(isometric_label_respecting(&m, &c));
        assert!(check_met_colimit_characterization(&constant, &c, &cocone));

        // stages {0,1} with d = 2^-n and declared limit 0: singleton
        let stages: Vec<FinMetric> = (0..3)
            .map(|n| metric(&["0", "1"], &[("0", "1", q(1, 1 << n))]))
            .collect();
        let links = vec![
            MetricMap::new(stages[0].clone(), stages[1].clone(), vec![0, 1]).unwrap(),
            MetricMap::new(stages[1].clone(), stages[2].clone(), vec![0, 1]).unwrap(),
        ];
        let lim = vec![
            vec![Dist::zero(), Dist::zero()],
            vec![Dist::zero(), Dist::zero()],
        ];
        let ch = OmegaChainMet::new(stages, links, MetTail::DeclaredLimits(lim)).unwrap();
        let (c, cocone) = omega_colimit_met(&ch);
        assert_eq!(c.len(), 1);
        assert!(check_met_colimit_characterization(&ch, &c, &cocone));

        // collapsing link onto a point
        let d2 = discrete_space(["a", "b"]);
        let one = discrete_space(["z"]);
        let link = MetricMap::new(d2.clone(), one.clone(), vec![0, 0]).unwrap();
        let ch2 = OmegaChainMet::new(vec![d2, one], vec![link], MetTail::Stable).unwrap();
        let (c2, _) = omega_colimit_met(&ch2);
        assert_eq!(c2.len(), 1);
    }

    #[test]
    fn declared_limits_validated() {
        let m = metric(&["p", "q"], &[("p", "q", q(1, 2))]);
        // declared limit above the last-stage distance is invalid
        let lim = vec![vec![Dist::zero(), q(1, 1)], vec![q(1, 1), Dist::zero()]];
        let err =
            OmegaChainMet::new(vec![m.clone()], vec![], MetTail::DeclaredLimits(lim)).unwrap_err();
        assert!(matches!(err, ColimError::InvalidTail(_)));
        // nonzero diagonal is invalid
        let lim = vec![vec![q(1, 4), q(1, 4)], vec![q(1, 4), Dist::zero()]];
        let err = OmegaChainMet::new(vec![m], vec![], MetTail::DeclaredLimits(lim)).unwrap_err();
        assert!(matches!(err, ColimError::InvalidTail(_)));
    }

    #[test]
    fn pos_chain_colimits() {
        let c2 = chain_poset(["0", "1"]);
        let constant = OmegaChainPos::constant(&c2, 2);
        let (c, _) = omega_colimit_pos(&constant);
        assert!(order_isomorphic(&c, &c2).is_some());

        // chain1 into chain2, then stable
        let c1 = chain_poset(["0"]);
        let inc = MonotoneMap::new(c1.clone(), c2.clone(), vec![0]).unwrap();
        let idc2 = MonotoneMap::identity(&c2);
        let ch = OmegaChainPos::new(vec![c1, c2.clone(), c2.clone()], vec![inc, idc2]).unwrap();
        let (c, _) = omega_colimit_pos(&ch);
        assert!(order_isomorphic(&c, &c2).is_some());

        // the growing ordinal family is rejected
        let err = OmegaChainPos::ordinal_family(4).unwrap_err();
        assert!(matches!(err, ColimError::NonStabilizingChain(_)));
    }

    #[test]
    fn product_commutation_met() {
        let m = metric(&["p", "q"], &[("p", "q", q(1, 1))]);
        let a = OmegaChainMet::constant(&m, 2);
        let b = OmegaChainMet::constant(&m, 2);
        assert!(check_product_commutation_met(&a, &b).holds);

        // the collapsing 2^-n chain paired with a constant singleton chain
        let stages: Vec<FinMetric> = (0..2)
            .map(|n| metric(&["0", "1"], &[("0", "1", q(1, 1 << n))]))
            .collect();
        let links = vec![MetricMap::new(stages[0].clone(), stages[1].clone(), vec![0, 1]).unwrap()];
        let lim = vec![vec![Dist::zero(); 2]; 2];
        let collapsing = OmegaChainMet::new(stages, links, MetTail::DeclaredLimits(lim)).unwrap();
        let singleton = OmegaChainMet::constant(&discrete_space(["z"]), 1);
        let report = check_product_commutation_met(&collapsing, &singleton);
        assert!(report.holds);
        assert_eq!(report.colimit_of_products.len(), 1);
    }

    #[test]
    fn product_commutation_pos() {
        let c2 = chain_poset(["0", "1"]);
        let (diamond, _) = poset_product(&[&c2, &c2]);
        let a = OmegaChainPos::constant(&c2, 3);
        let b = OmegaChainPos::constant(&diamond, 2);
        let report = check_product_commutation_pos(&a, &b);
        assert!(report.holds);
        assert_eq!(report.colimit_of_products.len(), 8);
    }

    #[test]
    fn coinserter_products_commute_for_reflexive_pairs() {
        let one = discrete_poset(["*"]);
        let idp = ParallelPair::new(MonotoneMap::identity(&one), MonotoneMap::identity(&one));
        assert!(check_coinserter_products(&idp, &idp).unwrap().holds);

        let c2 = chain_poset(["a", "b"]);
        let pp = projection_pair(&c2);
        let report = check_coinserter_products(&pp, &pp).unwrap();
        assert!(report.holds);
        assert_eq!(report.colimit_of_products.len(), 4);

        // non-reflexive second pair is rejected
        let b = discrete_poset(["u", "v"]);
        let a = discrete_poset(["*"]);
        let f0 = MonotoneMap::new(a.clone(), b.clone(), vec![0]).unwrap();
        let f1 = MonotoneMap::new(a, b, vec![1]).unwrap();
        let bad = ParallelPair::new(f0, f1);
        let err = check_coinserter_products(&idp, &bad).unwrap_err();
        assert!(matches!(err, ColimError::NotReflexive { which } if which == "B"));
    }

    #[test]
    fn coinserter_universal_self_check() {
        let b = discrete_poset(["u", "v"]);
        let a = discrete_poset(["*"]);
        let f0 = MonotoneMap::new(a.clone(), b.clone(), vec![0]).unwrap();
        let f1 = MonotoneMap::new(a, b.clone(), vec![1]).unwrap();
        let p = ParallelPair::new(f0, f1);
        let built = coinserter(&p);
        assert!(
            check_coinserter_universal(&p, &built, 3, 1 << 24)
                .unwrap()
                .holds
        );

        // candidate B with the identity does not satisfy c.f0 <= c.f1
        let cand = (b.clone(), MonotoneMap::identity(&b));
        let rep = check_coinserter_universal(&p, &cand, 3, 1 << 24).unwrap();
        assert!(!rep.holds);

        // collapsing to a singleton cannot factorize an order-separating map
        let one = discrete_poset(["z"]);
        let collapse = MonotoneMap::new(b.clone(), one.clone(), vec![0, 0]).unwrap();
        let rep = check_coinserter_universal(&p, &(one, collapse), 3, 1 << 24).unwrap();
        assert!(!rep.holds);
    }

    #[test]
    fn poset_enumeration_counts() {
        // iso classes: 1 point: 1, 2 points: 2, 3 points: 5
        let p1 = all_posets_up_to_iso(1);
        assert_eq!(p1.len(), 1);
        let p3 = all_posets_up_to_iso(3);
        assert_eq!(p3.len(), 1 + 2 + 5);
    }
}
