//! Property tests for the core invariants, driven by seeded generators.

use std::collections::BTreeMap;

use proptest::prelude::*;

use qaw_core::alg::validate_quant_algebra;
use qaw_core::colim::{basic_weight_colimit, isometric_label_respecting, precongruence};
use qaw_core::dist::Dist;
use qaw_core::eqn::satisfies_quant;
use qaw_core::gen::{
    random_metric, random_poset, random_quant_algebra, random_quant_eq, random_term, Rng,
};
use qaw_core::mspace::{validate_metric, MetricCandidate};
use qaw_core::term::{similar, substitute, term_metric, term_order, vars, Signature, Term};

fn sig() -> Signature {
    Signature::new([("mul", 2), ("sigma", 1), ("e", 0)]).unwrap()
}

proptest! {
    /// Every generated space is a valid metric and is recovered from its
    /// precongruence by a label-respecting isometry.
    #[test]
    fn precongruence_round_trip(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let m = random_metric(&mut rng, 6, "p");
        prop_assert!(validate_metric(&m.candidate()).is_ok());
        let (colim, unit) = basic_weight_colimit(&precongruence(&m));
        prop_assert!(isometric_label_respecting(&m, &colim));
        prop_assert!(unit.is_surjective());
    }

    /// Similarity is an equivalence and the term metric is infinite across
    /// dissimilar terms, zero on equal ones.
    #[test]
    fn similarity_and_term_metric(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let sig = sig();
        let t = random_term(&mut rng, &sig, 2, 3);
        let u = random_term(&mut rng, &sig, 2, 3);
        let v = random_term(&mut rng, &sig, 2, 3);
        prop_assert!(similar(&t, &t));
        prop_assert_eq!(similar(&t, &u), similar(&u, &t));
        if similar(&t, &u) && similar(&u, &v) {
            prop_assert!(similar(&t, &v));
        }
        let m = random_metric(&mut rng, 4, "x");
        // leaves x0, x1 exist only if the carrier is big enough; remap leaves
        // into carrier labels first
        let rename: BTreeMap<String, Term> = vars(&t)
            .into_iter()
            .chain(vars(&u))
            .map(|x| {
                let i = rng.below(m.len());
                (x, Term::var(m.label(i)))
            })
            .collect();
        let t = qaw_core::term::substitute_partial(&t, &rename);
        let u = qaw_core::term::substitute_partial(&u, &rename);
        let d = term_metric(&m, &t, &u).unwrap();
        if !similar(&t, &u) {
            prop_assert_eq!(d, Dist::Infinity);
        }
        prop_assert!(term_metric(&m, &t, &t).unwrap().is_zero());
    }

    /// The term metric restricted to a finite set of terms is a metric, and
    /// the term order is a partial order.
    #[test]
    fn induced_term_structures(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let sig = sig();
        let m = random_metric(&mut rng, 3, "x");
        let mut terms: Vec<Term> = (0..5)
            .map(|_| {
                let t = random_term(&mut rng, &sig, 2, 2);
                let rename: BTreeMap<String, Term> = vars(&t)
                    .into_iter()
                    .map(|x| (x, Term::var(m.label(rng.below(m.len())))))
                    .collect();
                qaw_core::term::substitute_partial(&t, &rename)
            })
            .collect();
        terms.sort();
        terms.dedup();
        let table: Vec<Vec<Dist>> = terms
            .iter()
            .map(|a| terms.iter().map(|b| term_metric(&m, a, b).unwrap()).collect())
            .collect();
        let candidate = MetricCandidate {
            points: terms.iter().map(|t| t.to_string()).collect(),
            dist: table,
        };
        prop_assert!(validate_metric(&candidate).is_ok());

        let p = random_poset(&mut rng, 3, "x");
        let mut pterms: Vec<Term> = (0..5)
            .map(|_| {
                let t = random_term(&mut rng, &sig, 2, 2);
                let rename: BTreeMap<String, Term> = vars(&t)
                    .into_iter()
                    .map(|x| (x, Term::var(p.label(rng.below(p.len())))))
                    .collect();
                qaw_core::term::substitute_partial(&t, &rename)
            })
            .collect();
        pterms.sort();
        pterms.dedup();
        for a in &pterms {
            prop_assert!(term_order(&p, a, a).unwrap());
            for b in &pterms {
                if a != b && term_order(&p, a, b).unwrap() && term_order(&p, b, a).unwrap() {
                    prop_assert!(false, "antisymmetry fails");
                }
                for c in &pterms {
                    if term_order(&p, a, b).unwrap() && term_order(&p, b, c).unwrap() {
                        prop_assert!(term_order(&p, a, c).unwrap());
                    }
                }
            }
        }
    }

    /// Substitution composes: applying two substitutions in sequence equals
    /// applying their composite.
    #[test]
    fn substitution_composition(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let sig = sig();
        let t = random_term(&mut rng, &sig, 2, 3);
        let m1: BTreeMap<String, Term> = (0..2)
            .map(|i| (format!("x{i}"), random_term(&mut rng, &sig, 2, 2)))
            .collect();
        let m2: BTreeMap<String, Term> = (0..2)
            .map(|i| (format!("x{i}"), random_term(&mut rng, &sig, 2, 2)))
            .collect();
        let lhs = substitute(&substitute(&t, &m1).unwrap(), &m2).unwrap();
        let composite: BTreeMap<String, Term> = m1
            .iter()
            .map(|(k, v)| (k.clone(), substitute(v, &m2).unwrap()))
            .collect();
        let rhs = substitute(&t, &composite).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// Satisfaction is monotone in the bound.
    #[test]
    fn eps_monotonicity(seed in any::<u64>(), bump in 1u64..16) {
        let mut rng = Rng::new(seed);
        let sig = sig();
        let a = random_quant_algebra(&mut rng, &sig, 3);
        prop_assert!(validate_quant_algebra(&a).is_ok());
        let eq = random_quant_eq(&mut rng, &sig, 2, 2);
        let holds = satisfies_quant(&a, &eq, 1 << 24).unwrap().holds;
        let mut weaker = eq.clone();
        weaker.eps = weaker.eps + Dist::ratio(bump as i64, 4).unwrap();
        let weaker_holds = satisfies_quant(&a, &weaker, 1 << 24).unwrap().holds;
        prop_assert!(!holds || weaker_holds);
    }
}

proptest! {
    /// The validator accepts exactly the tables passing an independent
    /// triple-loop oracle over raw random tables.
    #[test]
    fn validate_metric_matches_triple_loop_oracle(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let n = 1 + rng.below(4);
        let points: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        // raw tables, deliberately not closed and sometimes asymmetric
        let pick = |rng: &mut Rng| match rng.below(5) {
            0 => Dist::zero(),
            1 => Dist::Infinity,
            k => Dist::ratio(k as i64, 4).unwrap(),
        };
        let dist: Vec<Vec<Dist>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j && rng.chance(4, 5) { Dist::zero() } else { pick(&mut rng) })
                    .collect()
            })
            .collect();
        let candidate = MetricCandidate { points, dist: dist.clone() };
        let mut oracle_ok = true;
        for i in 0..n {
            if !dist[i][i].is_zero() {
                oracle_ok = false;
            }
            for j in 0..n {
                if dist[i][j] != dist[j][i] {
                    oracle_ok = false;
                }
                if i != j && dist[i][j].is_zero() {
                    oracle_ok = false;
                }
                for k in 0..n {
                    if dist[i][k] > &dist[i][j] + &dist[j][k] {
                        oracle_ok = false;
                    }
                }
            }
        }
        prop_assert_eq!(validate_metric(&candidate).is_ok(), oracle_ok);
    }
}
