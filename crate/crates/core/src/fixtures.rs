//! The shipped monad presentations: identity, nonempty powerset
//! (semilattice), maybe, the metric writer over the max monoid on a flag,
//! and the lift presentation with an added bottom.

use crate::bridge::{Carrier, Mode, MonadPresentation};
use crate::dist::Dist;
use crate::mspace::FinMetric;
use crate::mspace::{discrete_space, validate_metric, MetricCandidate};
use crate::poset::{discrete_poset, validate_poset, FinPoset, PosetCandidate};
use crate::term::var_name;

fn discrete_carrier(mode: Mode, labels: Vec<String>) -> Carrier {
    match mode {
        Mode::Met => Carrier::Met(discrete_space(labels)),
        Mode::Pos => Carrier::Pos(discrete_poset(labels)),
    }
}

/// The identity monad: `T_n = V_n`, unit the identity, extension by
/// application.
pub fn identity(mode: Mode, max_arity: usize) -> MonadPresentation {
    let carriers = (0..=max_arity)
        .map(|n| discrete_carrier(mode, (0..n).map(var_name).collect()))
        .collect();
    let units = (0..=max_arity).map(|n| (0..n).collect()).collect();
    MonadPresentation::from_rule(mode, carriers, units, |_, _, k, t| k[t])
        .expect("identity presentation is well formed")
}

fn subset_label(mask: usize) -> String {
    let mut s = String::from("s");
    let mut bit = 0;
    let mut m = mask;
    while m > 0 {
        if m & 1 == 1 {
            s.push_str(&bit.to_string());
        }
        m >>= 1;
        bit += 1;
    }
    s
}

/// The nonempty-powerset monad: `T_n` is the discrete space of nonempty
/// subsets of `V_n` (point `i` encodes the mask `i + 1`), unit by
/// singletons, extension by union.
pub fn semilattice(mode: Mode, max_arity: usize) -> MonadPresentation {
    let carriers = (0..=max_arity)
        .map(|n| {
            let labels = (1..(1usize << n)).map(subset_label).collect();
            discrete_carrier(mode, labels)
        })
        .collect();
    let units = (0..=max_arity)
        .map(|n| (0..n).map(|i| (1usize << i) - 1).collect())
        .collect();
    MonadPresentation::from_rule(mode, carriers, units, |_, _, k, t| {
        let mask = t + 1;
        let mut union = 0usize;
        for (i, &ki) in k.iter().enumerate() {
            if mask & (1 << i) != 0 {
                union |= ki + 1;
            }
        }
        union - 1
    })
    .expect("semilattice presentation is well formed")
}

/// The maybe monad: `T_n = V_n` with one added discrete point, unit the
/// inclusion, extension strict on the added point.
pub fn maybe(mode: Mode, max_arity: usize) -> MonadPresentation {
    let carriers = (0..=max_arity)
        .map(|n| {
            let mut labels: Vec<String> = (0..n).map(var_name).collect();
            labels.push("none".into());
            discrete_carrier(mode, labels)
        })
        .collect();
    let units = (0..=max_arity).map(|n| (0..n).collect()).collect();
    MonadPresentation::from_rule(mode, carriers, units, |n, m, k, t| {
        if t < n {
            k[t]
        } else {
            m // the added point of T_m
        }
    })
    .expect("maybe presentation is well formed")
}

fn writer_space(n: usize) -> FinMetric {
    let points: Vec<String> = (0..n)
        .flat_map(|i| (0..2).map(move |b| format!("x{i}b{b}")))
        .collect();
    let size = points.len();
    let mut dist = vec![vec![Dist::Infinity; size]; size];
    for p in 0..size {
        dist[p][p] = Dist::zero();
        for q in 0..size {
            if p != q && p / 2 == q / 2 {
                dist[p][q] = Dist::from_integer(1);
            }
        }
    }
    validate_metric(&MetricCandidate { points, dist }).expect("writer carrier is a metric space")
}

/// The metric writer monad over the flag monoid `({0,1}, max)`:
/// `T_n = V_n x {0,1}` with distance 1 between the two flags of a variable,
/// unit flags off, extension joining flags by max.
pub fn writer(max_arity: usize) -> MonadPresentation {
    let carriers = (0..=max_arity)
        .map(|n| Carrier::Met(writer_space(n)))
        .collect();
    let units = (0..=max_arity)
        .map(|n| (0..n).map(|i| 2 * i).collect())
        .collect();
    MonadPresentation::from_rule(Mode::Met, carriers, units, |_, _, k, t| {
        let (i, b) = (t / 2, t % 2);
        let target = k[i];
        let (y, c) = (target / 2, target % 2);
        2 * y + b.max(c)
    })
    .expect("writer presentation is well formed")
}

fn lift_poset(n: usize) -> FinPoset {
    let mut points: Vec<String> = (0..n).map(var_name).collect();
    points.push("bottom".into());
    let size = points.len();
    let leq = (0..size)
        .map(|i| (0..size).map(|j| i == j || i == size - 1).collect())
        .collect();
    validate_poset(&PosetCandidate { points, leq }).expect("lift carrier is a poset")
}

/// The lift monad on posets: `T_n = V_n` with a new bottom, unit the
/// inclusion, extension strict on the bottom.
pub fn lift(max_arity: usize) -> MonadPresentation {
    let carriers = (0..=max_arity)
        .map(|n| Carrier::Pos(lift_poset(n)))
        .collect();
    let units = (0..=max_arity).map(|n| (0..n).collect()).collect();
    MonadPresentation::from_rule(
        Mode::Pos,
        carriers,
        units,
        |n, m, k, t| {
            if t < n {
                k[t]
            } else {
                m
            }
        },
    )
    .expect("lift presentation is well formed")
}
