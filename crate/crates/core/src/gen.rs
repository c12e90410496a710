//! Deterministic pseudo-random generators for the test suites: spaces,
//! posets, chains, pairs, algebras, terms and equations at desk scale.
//! Everything is driven by a splitmix64 stream, so suites are reproducible
//! across platforms from a single seed.

use std::collections::BTreeMap;

use crate::alg::{all_tuples, ContAlgebra, QuantAlgebra};
use crate::colim::{MetTail, OmegaChainMet, OmegaChainPos, ParallelPair};
use crate::dist::Dist;
use crate::eqn::{ContEq, QuantEq};
use crate::mspace::{check_nonexpanding, validate_metric, FinMetric, MetricCandidate, MetricMap};
use crate::poset::{check_monotone, validate_poset, FinPoset, MonotoneMap, PosetCandidate};
use crate::term::{var_name, ExtTerm, Signature, Term, HOLE};

/// splitmix64; deterministic and platform-independent.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    pub fn range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        lo + self.below(hi_inclusive - lo + 1)
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.next_u64() % den < num
    }
}

fn quarter(k: usize) -> Dist {
    Dist::ratio(k as i64, 4).unwrap()
}

/// A valid metric space on 1..=max_points points with distances drawn from
/// `{k/4 : 1 <= k <= 40}` together with infinity, closed under triangles by
/// shortest paths.
pub fn random_metric(rng: &mut Rng, max_points: usize, prefix: &str) -> FinMetric {
    let n = rng.range(1, max_points);
    let points: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let mut dist = vec![vec![Dist::Infinity; n]; n];
    for i in 0..n {
        dist[i][i] = Dist::zero();
        for j in (i + 1)..n {
            let d = if rng.chance(1, 4) {
                Dist::Infinity
            } else {
                quarter(rng.range(1, 40))
            };
            dist[i][j] = d.clone();
            dist[j][i] = d;
        }
    }
    closure(&mut dist);
    validate_metric(&MetricCandidate { points, dist }).expect("closed quarter tables are metrics")
}

fn closure(dist: &mut [Vec<Dist>]) {
    let n = dist.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &dist[i][k] + &dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
}

/// A valid poset on 1..=max_points points: random strict bits above the
/// diagonal, closed reflexively and transitively.
pub fn random_poset(rng: &mut Rng, max_points: usize, prefix: &str) -> FinPoset {
    let n = rng.range(1, max_points);
    let points: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        leq[i][i] = true;
        for j in (i + 1)..n {
            if rng.chance(2, 5) {
                leq[i][j] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    validate_poset(&PosetCandidate { points, leq }).expect("closed triangular bits form a poset")
}

/// A random nonexpanding map, by bounded rejection with a constant-map
/// fallback.
pub fn random_nonexpanding(rng: &mut Rng, from: &FinMetric, to: &FinMetric) -> MetricMap {
    assert!(!to.is_empty());
    for _ in 0..40 {
        let table: Vec<usize> = (0..from.len()).map(|_| rng.below(to.len())).collect();
        let f = MetricMap::new(from.clone(), to.clone(), table).unwrap();
        if check_nonexpanding(&f).is_ok() {
            return f;
        }
    }
    let c = rng.below(to.len());
    MetricMap::new(from.clone(), to.clone(), vec![c; from.len()]).unwrap()
}

pub fn random_monotone(rng: &mut Rng, from: &FinPoset, to: &FinPoset) -> MonotoneMap {
    assert!(!to.is_empty());
    for _ in 0..40 {
        let table: Vec<usize> = (0..from.len()).map(|_| rng.below(to.len())).collect();
        let f = MonotoneMap::new(from.clone(), to.clone(), table).unwrap();
        if check_monotone(&f).is_ok() {
            return f;
        }
    }
    let c = rng.below(to.len());
    MonotoneMap::new(from.clone(), to.clone(), vec![c; from.len()]).unwrap()
}

/// An eventually stable metric chain: random stages joined by nonexpanding
/// maps, with an occasional declared-limits tail obtained by collapsing a
/// random block partition of the last stage and re-closing.
pub fn random_met_chain(rng: &mut Rng, max_points: usize, max_stages: usize) -> OmegaChainMet {
    let stages_n = rng.range(1, max_stages);
    let mut stages = vec![random_metric(rng, max_points, "a")];
    let mut links = Vec::new();
    for s in 1..stages_n {
        let next = random_metric(rng, max_points, &format!("{}", (b'a' + s as u8) as char));
        links.push(random_nonexpanding(rng, &stages[s - 1], &next));
        stages.push(next);
    }
    let tail = if rng.chance(1, 3) {
        let last = stages.last().unwrap();
        let n = last.len();
        // collapse a random partition to distance zero, then re-close
        let blocks: Vec<usize> = (0..n).map(|_| rng.below(n)).collect();
        let mut lim = last.table().clone();
        for i in 0..n {
            for j in 0..n {
                if blocks[i] == blocks[j] {
                    lim[i][j] = Dist::zero();
                }
            }
        }
        closure(&mut lim);
        MetTail::DeclaredLimits(lim)
    } else {
        MetTail::Stable
    };
    OmegaChainMet::new(stages, links, tail).expect("generated chains are valid")
}

pub fn random_pos_chain(rng: &mut Rng, max_points: usize, max_stages: usize) -> OmegaChainPos {
    let stages_n = rng.range(1, max_stages);
    let mut stages = vec![random_poset(rng, max_points, "a")];
    let mut links = Vec::new();
    for s in 1..stages_n {
        let next = random_poset(rng, max_points, &format!("{}", (b'a' + s as u8) as char));
        links.push(random_monotone(rng, &stages[s - 1], &next));
        stages.push(next);
    }
    OmegaChainPos::new(stages, links).expect("generated chains are valid")
}

/// A random parallel pair between small posets.
pub fn random_parallel_pair(rng: &mut Rng, max_points: usize) -> ParallelPair {
    let a = random_poset(rng, max_points, "d");
    let b = random_poset(rng, max_points, "c");
    ParallelPair::new(random_monotone(rng, &a, &b), random_monotone(rng, &a, &b))
}

/// A random reflexive pair: either the projection pair of a random poset,
/// the identity pair, or the comparable-pairs pair with the componentwise
/// order.
pub fn random_reflexive_pair(rng: &mut Rng, max_points: usize) -> ParallelPair {
    let b = random_poset(rng, max_points, "c");
    match rng.below(3) {
        0 => crate::colim::projection_pair(&b),
        1 => ParallelPair::new(MonotoneMap::identity(&b), MonotoneMap::identity(&b)),
        _ => {
            // ordered comparable-pairs poset with both projections
            let mut labels = Vec::new();
            let mut pairs = Vec::new();
            for i in 0..b.len() {
                for j in 0..b.len() {
                    if b.leq(i, j) {
                        labels.push(format!("({},{})", b.label(i), b.label(j)));
                        pairs.push((i, j));
                    }
                }
            }
            let leq = pairs
                .iter()
                .map(|&(i, j)| {
                    pairs
                        .iter()
                        .map(|&(i2, j2)| b.leq(i, i2) && b.leq(j, j2))
                        .collect()
                })
                .collect();
            let dom = validate_poset(&PosetCandidate {
                points: labels,
                leq,
            })
            .expect("componentwise order on comparable pairs is a poset");
            let f0 = MonotoneMap::new(
                dom.clone(),
                b.clone(),
                pairs.iter().map(|&(i, _)| i).collect(),
            )
            .unwrap();
            let f1 =
                MonotoneMap::new(dom, b.clone(), pairs.iter().map(|&(_, j)| j).collect()).unwrap();
            ParallelPair::new(f0, f1)
        }
    }
}

fn random_op_table_quant(rng: &mut Rng, carrier: &FinMetric, arity: usize) -> Vec<usize> {
    let n = carrier.len();
    let size = n.pow(arity as u32);
    if carrier.is_discrete() {
        return (0..size).map(|_| rng.below(n)).collect();
    }
    'tries: for _ in 0..40 {
        let table: Vec<usize> = (0..size).map(|_| rng.below(n)).collect();
        let tuples = all_tuples(arity, n);
        for (i, ta) in tuples.iter().enumerate() {
            for (j, tb) in tuples.iter().enumerate().skip(i + 1) {
                let src = Dist::sup(ta.iter().zip(tb).map(|(&x, &y)| carrier.dist(x, y).clone()));
                if *carrier.dist(table[i], table[j]) > src {
                    continue 'tries;
                }
            }
        }
        return table;
    }
    // fallback: a projection, or a constant for nullary symbols
    if arity == 0 {
        vec![rng.below(n)]
    } else {
        let axis = rng.below(arity);
        all_tuples(arity, n).into_iter().map(|t| t[axis]).collect()
    }
}

fn random_op_table_cont(rng: &mut Rng, carrier: &FinPoset, arity: usize) -> Vec<usize> {
    let n = carrier.len();
    let size = n.pow(arity as u32);
    'tries: for _ in 0..40 {
        let table: Vec<usize> = (0..size).map(|_| rng.below(n)).collect();
        let tuples = all_tuples(arity, n);
        for (i, ta) in tuples.iter().enumerate() {
            for (j, tb) in tuples.iter().enumerate() {
                let leq = ta.iter().zip(tb).all(|(&x, &y)| carrier.leq(x, y));
                if leq && !carrier.leq(table[i], table[j]) {
                    continue 'tries;
                }
            }
        }
        return table;
    }
    if arity == 0 {
        vec![rng.below(n)]
    } else {
        let axis = rng.below(arity);
        all_tuples(arity, n).into_iter().map(|t| t[axis]).collect()
    }
}

/// A valid quantitative algebra on a random carrier: discrete carriers get
/// arbitrary tables, non-discrete ones rejection-sampled nonexpanding
/// tables with projection fallbacks.
pub fn random_quant_algebra(rng: &mut Rng, sig: &Signature, max_points: usize) -> QuantAlgebra {
    let carrier = if rng.chance(1, 2) {
        let n = rng.range(1, max_points);
        crate::mspace::discrete_space((0..n).map(|i| format!("c{i}")))
    } else {
        random_metric(rng, max_points, "c")
    };
    let ops: BTreeMap<String, Vec<usize>> = sig
        .symbols()
        .iter()
        .map(|(name, arity)| (name.clone(), random_op_table_quant(rng, &carrier, *arity)))
        .collect();
    QuantAlgebra::new(sig.clone(), carrier, ops).expect("generated tables are well formed")
}

pub fn random_cont_algebra(rng: &mut Rng, sig: &Signature, max_points: usize) -> ContAlgebra {
    let carrier = random_poset(rng, max_points, "c");
    let ops: BTreeMap<String, Vec<usize>> = sig
        .symbols()
        .iter()
        .map(|(name, arity)| (name.clone(), random_op_table_cont(rng, &carrier, *arity)))
        .collect();
    ContAlgebra::new(sig.clone(), carrier, ops).expect("generated tables are well formed")
}

/// A random term over the signature and `num_vars` variables.
pub fn random_term(rng: &mut Rng, sig: &Signature, num_vars: usize, depth: usize) -> Term {
    let composites: Vec<&(String, usize)> = sig
        .symbols()
        .iter()
        .filter(|(_, a)| *a > 0 || num_vars == 0)
        .collect();
    if num_vars > 0 && (depth == 0 || composites.is_empty() || rng.chance(1, 3)) {
        return Term::var(var_name(rng.below(num_vars)));
    }
    if composites.is_empty() {
        return Term::var(var_name(rng.below(num_vars.max(1))));
    }
    let (name, arity) = composites[rng.below(composites.len())].clone();
    if depth == 0 && arity > 0 {
        return if num_vars > 0 {
            Term::var(var_name(rng.below(num_vars)))
        } else {
            // no variables: fall back to a nullary symbol if one exists
            match sig.symbols().iter().find(|(_, a)| *a == 0) {
                Some((c, _)) => Term::app(c.clone(), vec![]),
                None => Term::app(name, (0..arity).map(|_| Term::var(var_name(0))).collect()),
            }
        };
    }
    let args = (0..arity)
        .map(|_| random_term(rng, sig, num_vars, depth.saturating_sub(1)))
        .collect();
    Term::app(name, args)
}

/// A random extended term: a base term, a short eventually constant join,
/// or a generated join whose step uses the hole.
pub fn random_ext_term(rng: &mut Rng, sig: &Signature, num_vars: usize, depth: usize) -> ExtTerm {
    match rng.below(4) {
        0 | 1 => ExtTerm::base(random_term(rng, sig, num_vars, depth)),
        2 => {
            let len = rng.range(1, 3);
            let fam = (0..len)
                .map(|_| ExtTerm::base(random_term(rng, sig, num_vars, depth)))
                .collect();
            ExtTerm::join(fam)
        }
        _ => {
            let seed = ExtTerm::base(random_term(rng, sig, num_vars, depth));
            // a step that actually uses the hole: wrap it in a random symbol
            let composites: Vec<&(String, usize)> =
                sig.symbols().iter().filter(|(_, a)| *a > 0).collect();
            if composites.is_empty() {
                return seed;
            }
            let (name, arity) = composites[rng.below(composites.len())].clone();
            let hole_at = rng.below(arity);
            let args = (0..arity)
                .map(|i| {
                    if i == hole_at {
                        Term::var(HOLE)
                    } else {
                        random_term(rng, sig, num_vars, depth.saturating_sub(1))
                    }
                })
                .collect();
            ExtTerm::generated(seed, Term::app(name, args))
        }
    }
}

pub fn random_quant_eq(rng: &mut Rng, sig: &Signature, num_vars: usize, depth: usize) -> QuantEq {
    let eps = if rng.chance(1, 3) {
        Dist::zero()
    } else {
        quarter(rng.range(1, 40))
    };
    QuantEq::new(
        random_term(rng, sig, num_vars, depth),
        random_term(rng, sig, num_vars, depth),
        eps,
    )
}

pub fn random_cont_eq(rng: &mut Rng, sig: &Signature, num_vars: usize, depth: usize) -> ContEq {
    ContEq::new(
        random_ext_term(rng, sig, num_vars, depth),
        random_ext_term(rng, sig, num_vars, depth),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alg::{validate_cont_algebra, validate_quant_algebra};

    #[test]
    fn generators_produce_valid_values() {
        let mut rng = Rng::new(7);
        let sig = Signature::new([("mul", 2), ("sigma", 1), ("e", 0)]).unwrap();
        for _ in 0..50 {
            let m = random_metric(&mut rng, 8, "p");
            assert!(!m.is_empty() && m.len() <= 8);
            let p = random_poset(&mut rng, 6, "p");
            assert!(!p.is_empty());
            let a = random_quant_algebra(&mut rng, &sig, 4);
            assert!(validate_quant_algebra(&a).is_ok());
            let c = random_cont_algebra(&mut rng, &sig, 4);
            assert!(validate_cont_algebra(&c).is_ok());
            let ch = random_met_chain(&mut rng, 4, 3);
            assert!(ch.stages().len() <= 3);
            let _ = random_pos_chain(&mut rng, 4, 3);
            let pair = random_reflexive_pair(&mut rng, 4);
            assert!(crate::colim::is_reflexive(&pair).is_some());
        }
    }

    #[test]
    fn stream_is_deterministic() {
        let mut a = Rng::new(42);
        let mut b = Rng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }
}
