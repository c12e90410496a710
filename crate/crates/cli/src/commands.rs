//! Command dispatch: every subcommand resolves its inputs from the parsed
//! file, runs the corresponding library operation, and renders a report.

use std::collections::BTreeSet;
use std::time::Instant;

use serde_json::json;

use qaw_core::alg::{
    check_quant_homomorphism, homomorphic_image_cont, homomorphic_image_quant,
    product_cont_algebra, product_quant_algebra, subalgebra_generated_cont,
    subalgebra_generated_quant, validate_cont_algebra, validate_quant_algebra, ContHomo, QuantHomo,
};
use qaw_core::bridge::{
    check_freeness_cont, check_freeness_quant, check_kleisli_laws, generate_variety_cpo,
    generate_variety_met, kan_evaluate, BridgeError, GeneratedVariety, Mode,
};
use qaw_core::colim::{
    basic_weight_colimit, check_coinserter_products, check_met_colimit_characterization,
    check_product_commutation_met, check_product_commutation_pos, coinserter, is_reflexive,
    isometric_label_respecting, omega_colimit_met, omega_colimit_pos, precongruence,
};
use qaw_core::eqn::{
    check_cont_membership, check_quant_membership, is_definable, satisfies_cont, satisfies_quant,
    Equation,
};
use qaw_core::mspace::validate_metric;
use qaw_core::poset::validate_poset;
use qaw_core::term::enumerate_terms;

use crate::report::Report;
use crate::workbench::{AlgebraValue, ChainValue, ResolveError, WorkbenchFile};

#[derive(Debug, Clone)]
pub enum Cmd {
    CheckMetric {
        space: String,
    },
    CheckPoset {
        poset: String,
    },
    CheckAlgebra {
        algebra: String,
    },
    Satisfies {
        algebra: String,
        eq: String,
    },
    Definable {
        algebra: String,
        term: String,
    },
    ColimitPrecongruence {
        space: String,
    },
    ColimitCoinserter {
        pair: String,
    },
    ColimitChain {
        chain: String,
    },
    CommuteProducts {
        chain_a: String,
        chain_b: String,
    },
    CommuteCoinserters {
        pair_a: String,
        pair_b: String,
    },
    HspClose {
        algebra: String,
        construct: Construct,
        eqs: Vec<String>,
    },
    MonadLaws {
        presentation: String,
    },
    MonadEqgen {
        presentation: String,
    },
    MonadFreeness {
        presentation: String,
        arity: usize,
        targets: Vec<String>,
    },
    KanEval {
        presentation: String,
        space: String,
    },
    FreeTerms {
        signature: String,
        gens: Vec<String>,
        depth: usize,
    },
}

#[derive(Debug, Clone)]
pub enum Construct {
    Product {
        with: String,
    },
    Sub {
        generators: Vec<String>,
    },
    Image {
        with: String,
        map: Vec<(String, String)>,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct Opts {
    pub max_carrier: usize,
    pub max_maps: u128,
}

impl Default for Opts {
    fn default() -> Opts {
        Opts {
            max_carrier: 6,
            max_maps: 10_000_000,
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

fn command_name(cmd: &Cmd) -> String {
    match cmd {
        Cmd::CheckMetric { space } => format!("check-metric --space {space}"),
        Cmd::CheckPoset { poset } => format!("check-poset --poset {poset}"),
        Cmd::CheckAlgebra { algebra } => format!("check-algebra --algebra {algebra}"),
        Cmd::Satisfies { algebra, eq } => format!("satisfies --algebra {algebra} --eq {eq}"),
        Cmd::Definable { algebra, term } => format!("definable --algebra {algebra} --term {term}"),
        Cmd::ColimitPrecongruence { space } => format!("colimit precongruence --space {space}"),
        Cmd::ColimitCoinserter { pair } => format!("colimit coinserter --pair {pair}"),
        Cmd::ColimitChain { chain } => format!("colimit chain --chain {chain}"),
        Cmd::CommuteProducts { chain_a, chain_b } => {
            format!("commute products --chain-a {chain_a} --chain-b {chain_b}")
        }
        Cmd::CommuteCoinserters { pair_a, pair_b } => {
            format!("commute coinserters --pair-a {pair_a} --pair-b {pair_b}")
        }
        Cmd::HspClose {
            algebra, construct, ..
        } => {
            let c = match construct {
                Construct::Product { with } => format!("product --with {with}"),
                Construct::Sub { .. } => "sub".into(),
                Construct::Image { with, .. } => format!("image --with {with}"),
            };
            format!("hsp close --algebra {algebra} --construct {c}")
        }
        Cmd::MonadLaws { presentation } => format!("monad laws --presentation {presentation}"),
        Cmd::MonadEqgen { presentation } => format!("monad eqgen --presentation {presentation}"),
        Cmd::MonadFreeness {
            presentation,
            arity,
            ..
        } => {
            format!("monad freeness --presentation {presentation} --arity {arity}")
        }
        Cmd::KanEval {
            presentation,
            space,
        } => {
            format!("kan eval --presentation {presentation} --space {space}")
        }
        Cmd::FreeTerms {
            signature, depth, ..
        } => {
            format!("free-terms --signature {signature} --depth {depth}")
        }
    }
}

struct Outcome {
    verdict: bool,
    exit_code: i32,
    details: serde_json::Value,
}

fn ok(details: serde_json::Value) -> Outcome {
    Outcome {
        verdict: true,
        exit_code: EXIT_OK,
        details,
    }
}

fn negative(details: serde_json::Value) -> Outcome {
    Outcome {
        verdict: false,
        exit_code: EXIT_NEGATIVE,
        details,
    }
}

fn input_error(message: String) -> Outcome {
    Outcome {
        verdict: false,
        exit_code: EXIT_INPUT,
        details: json!({ "error": message }),
    }
}

fn bound_error(message: String) -> Outcome {
    Outcome {
        verdict: false,
        exit_code: EXIT_BOUND,
        details: json!({ "error": message }),
    }
}

fn carrier_guard(len: usize, opts: &Opts) -> Option<Outcome> {
    if len > opts.max_carrier {
        Some(bound_error(format!(
            "carrier has {len} points, above the enumeration bound of {} (see --max-carrier)",
            opts.max_carrier
        )))
    } else {
        None
    }
}

impl From<ResolveError> for Outcome {
    fn from(e: ResolveError) -> Outcome {
        input_error(e.to_string())
    }
}

pub fn run(cmd: &Cmd, file: &WorkbenchFile, input_hash: &str, opts: &Opts) -> Report {
    let start = Instant::now();
    let outcome = dispatch(cmd, file, opts);
    Report {
        command: command_name(cmd),
        version: env!("CARGO_PKG_VERSION").to_string(),
        input_hash: input_hash.to_string(),
        verdict: outcome.verdict,
        exit_code: outcome.exit_code,
        details: outcome.details,
        timing_ms: start.elapsed().as_millis(),
    }
}

fn dispatch(cmd: &Cmd, file: &WorkbenchFile, opts: &Opts) -> Outcome {
    match cmd {
        Cmd::CheckMetric { space } => {
            let raw = match file.raw_space(space) {
                Ok(r) => r,
                Err(e) => return e.into(),
            };
            match validate_metric(raw) {
                Ok(m) => ok(json!({ "space": m, "points": m.len() })),
                Err(errs) => negative(json!({
                    "violations": errs.0.iter().map(|v| v.to_string()).collect::<Vec<_>>()
                })),
            }
        }
        Cmd::CheckPoset { poset } => {
            let raw = match file.raw_poset(poset) {
                Ok(r) => r,
                Err(e) => return e.into(),
            };
            match validate_poset(raw) {
                Ok(p) => ok(json!({ "poset": p, "points": p.len() })),
                Err(errs) => negative(json!({
                    "violations": errs.0.iter().map(|v| v.to_string()).collect::<Vec<_>>()
                })),
            }
        }
        Cmd::CheckAlgebra { algebra } => match file.algebra(algebra) {
            Err(e) => e.into(),
            Ok(AlgebraValue::Quant(a)) => match validate_quant_algebra(&a) {
                Ok(()) => ok(json!({ "kind": "quantitative", "carrier": a.carrier() })),
                Err(errs) => negative(json!({
                    "violations": errs.iter().map(|v| v.to_string()).collect::<Vec<_>>()
                })),
            },
            Ok(AlgebraValue::Cont(a)) => match validate_cont_algebra(&a) {
                Ok(()) => ok(json!({ "kind": "continuous", "carrier": a.carrier() })),
                Err(errs) => negative(json!({
                    "violations": errs.iter().map(|v| v.to_string()).collect::<Vec<_>>()
                })),
            },
        },
        Cmd::Satisfies { algebra, eq } => match file.algebra(algebra) {
            Err(e) => e.into(),
            Ok(AlgebraValue::Quant(a)) => {
                if let Some(out) = carrier_guard(a.carrier().len(), opts) {
                    return out;
                }
                let equation = match file.quant_eq(eq) {
                    Ok(e) => e,
                    Err(e) => return e.into(),
                };
                match satisfies_quant(&a, &equation, opts.max_maps) {
                    Err(b) => bound_error(b.to_string()),
                    Ok(rep) if rep.holds => ok(json!({ "equation": equation.to_string() })),
                    Ok(rep) => negative(json!({
                        "equation": equation.to_string(),
                        "counterexample": rep.counterexample,
                    })),
                }
            }
            Ok(AlgebraValue::Cont(a)) => {
                if let Some(out) = carrier_guard(a.carrier().len(), opts) {
                    return out;
                }
                let equation = match file.cont_eq(eq) {
                    Ok(e) => e,
                    Err(e) => return e.into(),
                };
                match satisfies_cont(&a, &equation, opts.max_maps) {
                    Err(b) => bound_error(b.to_string()),
                    Ok(rep) if rep.holds => ok(json!({ "equation": equation.to_string() })),
                    Ok(rep) => negative(json!({
                        "equation": equation.to_string(),
                        "counterexample": rep.counterexample,
                    })),
                }
            }
        },
        Cmd::Definable { algebra, term } => {
            let t = match crate::dsl::parser::parse_ext_term_str(term) {
                Ok(t) => t,
                Err(e) => return input_error(e.to_string()),
            };
            match file.algebra(algebra) {
                Err(e) => e.into(),
                Ok(AlgebraValue::Quant(_)) => {
                    input_error("definability concerns continuous algebras".into())
                }
                Ok(AlgebraValue::Cont(a)) => {
                    if let Some(out) = carrier_guard(a.carrier().len(), opts) {
                        return out;
                    }
                    match is_definable(&a, &t, opts.max_maps) {
                        Err(b) => bound_error(b.to_string()),
                        Ok(rep) if rep.holds => ok(json!({ "term": t.to_string() })),
                        Ok(rep) => negative(json!({
                            "term": t.to_string(),
                            "counterexample": rep.counterexample,
                        })),
                    }
                }
            }
        }
        Cmd::ColimitPrecongruence { space } => {
            let m = match file.metric(space) {
                Ok(m) => m,
                Err(e) => return e.into(),
            };
            let cs = precongruence(&m);
            let (colim, unit) = basic_weight_colimit(&cs);
            let reconstructed = isometric_label_respecting(&m, &colim);
            let details = json!({
                "precongruence": cs,
                "colimit": colim,
                "unit": unit.table(),
                "reconstructs_space": reconstructed,
            });
            if reconstructed {
                ok(details)
            } else {
                negative(details)
            }
        }
        Cmd::ColimitCoinserter { pair } => {
            let p = match file.pair(pair) {
                Ok(p) => p,
                Err(e) => return e.into(),
            };
            let (c, proj) = coinserter(&p);
            let reflexive = is_reflexive(&p).is_some();
            ok(json!({
                "coinserter": c,
                "projection": proj.table(),
                "surjective": proj.is_surjective(),
                "reflexive": reflexive,
            }))
        }
        Cmd::ColimitChain { chain } => match file.chain(chain) {
            Err(e) => e.into(),
            Ok(ChainValue::Met(ch)) => {
                let (colim, cocone) = omega_colimit_met(&ch);
                let characterized = check_met_colimit_characterization(&ch, &colim, &cocone);
                let details = json!({
                    "chain": ch,
                    "colimit": colim,
                    "cocone": cocone.iter().map(|c| c.table().to_vec()).collect::<Vec<_>>(),
                    "characterization": characterized,
                });
                if characterized {
                    ok(details)
                } else {
                    negative(details)
                }
            }
            Ok(ChainValue::Pos(ch)) => {
                let (colim, cocone) = omega_colimit_pos(&ch);
                ok(json!({
                    "chain": ch,
                    "colimit": colim,
                    "cocone": cocone.iter().map(|c| c.table().to_vec()).collect::<Vec<_>>(),
                }))
            }
        },
        Cmd::CommuteProducts { chain_a, chain_b } => {
            let a = match file.chain(chain_a) {
                Ok(c) => c,
                Err(e) => return e.into(),
            };
            let b = match file.chain(chain_b) {
                Ok(c) => c,
                Err(e) => return e.into(),
            };
            match (a, b) {
                (ChainValue::Met(a), ChainValue::Met(b)) => {
                    let rep = check_product_commutation_met(&a, &b);
                    let details = json!({
                        "holds": rep.holds,
                        "colimit_of_products": rep.colimit_of_products,
                        "product_of_colimits": rep.product_of_colimits,
                    });
                    if rep.holds {
                        ok(details)
                    } else {
                        negative(details)
                    }
                }
                (ChainValue::Pos(a), ChainValue::Pos(b)) => {
                    let rep = check_product_commutation_pos(&a, &b);
                    let details = json!({
                        "holds": rep.holds,
                        "colimit_of_products": rep.colimit_of_products,
                        "product_of_colimits": rep.product_of_colimits,
                    });
                    if rep.holds {
                        ok(details)
                    } else {
                        negative(details)
                    }
                }
                _ => input_error("chains must share a mode".into()),
            }
        }
        Cmd::CommuteCoinserters { pair_a, pair_b } => {
            let a = match file.pair(pair_a) {
                Ok(p) => p,
                Err(e) => return e.into(),
            };
            let b = match file.pair(pair_b) {
                Ok(p) => p,
                Err(e) => return e.into(),
            };
            match check_coinserter_products(&a, &b) {
                Err(e) => input_error(e.to_string()),
                Ok(rep) => {
                    let details = json!({
                        "holds": rep.holds,
                        "coinserter_of_products": rep.colimit_of_products,
                        "product_of_coinserters": rep.product_of_colimits,
                    });
                    if rep.holds {
                        ok(details)
                    } else {
                        negative(details)
                    }
                }
            }
        }
        Cmd::HspClose {
            algebra,
            construct,
            eqs,
        } => hsp_close(file, algebra, construct, eqs, opts),
        Cmd::MonadLaws { presentation } => {
            let p = match file.presentation(presentation) {
                Ok(p) => p,
                Err(e) => return e.into(),
            };
            let rep = check_kleisli_laws(&p);
            let details = json!({
                "passed": rep.passed,
                "failures": rep.failures,
            });
            if rep.passed {
                ok(details)
            } else {
                negative(details)
            }
        }
        Cmd::MonadEqgen { presentation } => {
            let p = match file.presentation(presentation) {
                Ok(p) => p,
                Err(e) => return e.into(),
            };
            let variety = match p.mode() {
                Mode::Met => generate_variety_met(&p),
                Mode::Pos => generate_variety_cpo(&p),
            };
            match variety {
                Err(e) => input_error(e.to_string()),
                Ok(v) => {
                    let dsl = variety_to_dsl(&v);
                    ok(json!({
                        "symbols": v.sig.symbols().len(),
                        "equations": v.eqs.len(),
                        "dsl": dsl,
                    }))
                }
            }
        }
        Cmd::MonadFreeness {
            presentation,
            arity,
            targets,
        } => monad_freeness(file, presentation, *arity, targets, opts),
        Cmd::KanEval {
            presentation,
            space,
        } => {
            let p = match file.presentation(presentation) {
                Ok(p) => p,
                Err(e) => return e.into(),
            };
            let m = match file.metric(space) {
                Ok(m) => m,
                Err(e) => return e.into(),
            };
            match kan_evaluate(&p, &m) {
                Ok(out) => ok(json!({ "result": out })),
                Err(BridgeError::ArityBudgetExceeded { needed, budget }) => bound_error(format!(
                    "arity budget exceeded: needed {needed}, presentation covers {budget}"
                )),
                Err(e) => input_error(e.to_string()),
            }
        }
        Cmd::FreeTerms {
            signature,
            gens,
            depth,
        } => {
            let sig = match file.signature(signature) {
                Ok(s) => s,
                Err(e) => return e.into(),
            };
            match enumerate_terms(sig, gens, *depth, opts.max_maps as usize) {
                Err(b) => bound_error(b.to_string()),
                Ok(terms) => ok(json!({
                    "count": terms.len(),
                    "terms": terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                })),
            }
        }
    }
}

fn resolve_equations(
    file: &WorkbenchFile,
    names: &[String],
    quant: bool,
) -> Result<Vec<Equation>, ResolveError> {
    names
        .iter()
        .map(|n| {
            if quant {
                file.quant_eq(n).map(Equation::Quant)
            } else {
                file.cont_eq(n).map(Equation::Cont)
            }
        })
        .collect()
}

fn hsp_close(
    file: &WorkbenchFile,
    algebra: &str,
    construct: &Construct,
    eqs: &[String],
    opts: &Opts,
) -> Outcome {
    match file.algebra(algebra) {
        Err(e) => e.into(),
        Ok(AlgebraValue::Quant(a)) => {
            if let Some(out) = carrier_guard(a.carrier().len(), opts) {
                return out;
            }
            let constructed = match construct {
                Construct::Product { with } => match file.algebra(with) {
                    Ok(AlgebraValue::Quant(b)) => product_quant_algebra(&[&a, &b]).0,
                    Ok(AlgebraValue::Cont(_)) => {
                        return input_error(
                            "cannot multiply a metric algebra with a poset one".into(),
                        )
                    }
                    Err(e) => return e.into(),
                },
                Construct::Sub { generators } => {
                    let mut gens = BTreeSet::new();
                    for g in generators {
                        match a.carrier().index_of(g) {
                            Some(i) => {
                                gens.insert(i);
                            }
                            None => return input_error(format!("unknown generator {g:?}")),
                        }
                    }
                    subalgebra_generated_quant(&a, &gens).0
                }
                Construct::Image { with, map } => {
                    let target = match file.algebra(with) {
                        Ok(AlgebraValue::Quant(b)) => b,
                        Ok(AlgebraValue::Cont(_)) => {
                            return input_error("image target must be a metric algebra".into())
                        }
                        Err(e) => return e.into(),
                    };
                    let mut table = vec![0usize; a.carrier().len()];
                    for (from, to) in map {
                        let i = match a.carrier().index_of(from) {
                            Some(i) => i,
                            None => return input_error(format!("unknown point {from:?}")),
                        };
                        let j = match target.carrier().index_of(to) {
                            Some(j) => j,
                            None => return input_error(format!("unknown point {to:?}")),
                        };
                        table[i] = j;
                    }
                    let h = QuantHomo {
                        source: a.clone(),
                        target,
                        table,
                    };
                    if let Err(e) = check_quant_homomorphism(&h) {
                        return input_error(format!("not a homomorphism: {e:?}"));
                    }
                    match homomorphic_image_quant(&h) {
                        Ok((img, _)) => img,
                        Err(e) => return input_error(e.to_string()),
                    }
                }
            };
            let valid = validate_quant_algebra(&constructed).is_ok();
            let equations = match resolve_equations(file, eqs, true) {
                Ok(e) => e,
                Err(e) => return e.into(),
            };
            let quant_eqs: Vec<_> = equations
                .into_iter()
                .map(|e| match e {
                    Equation::Quant(q) => q,
                    Equation::Cont(_) => unreachable!(),
                })
                .collect();
            match check_quant_membership(&constructed, &quant_eqs, opts.max_maps) {
                Err(b) => bound_error(b.to_string()),
                Ok(rep) => {
                    let verdict = valid && rep.member;
                    let details = json!({
                        "carrier": constructed.carrier(),
                        "valid": valid,
                        "equations_preserved": rep.member,
                        "verdicts": rep.verdicts,
                    });
                    if verdict {
                        ok(details)
                    } else {
                        negative(details)
                    }
                }
            }
        }
        Ok(AlgebraValue::Cont(a)) => {
            if let Some(out) = carrier_guard(a.carrier().len(), opts) {
                return out;
            }
            let constructed = match construct {
                Construct::Product { with } => match file.algebra(with) {
                    Ok(AlgebraValue::Cont(b)) => product_cont_algebra(&[&a, &b]).0,
                    Ok(AlgebraValue::Quant(_)) => {
                        return input_error(
                            "cannot multiply a poset algebra with a metric one".into(),
                        )
                    }
                    Err(e) => return e.into(),
                },
                Construct::Sub { generators } => {
                    let mut gens = BTreeSet::new();
                    for g in generators {
                        match a.carrier().index_of(g) {
                            Some(i) => {
                                gens.insert(i);
                            }
                            None => return input_error(format!("unknown generator {g:?}")),
                        }
                    }
                    subalgebra_generated_cont(&a, &gens).0
                }
                Construct::Image { with, map } => {
                    let target = match file.algebra(with) {
                        Ok(AlgebraValue::Cont(b)) => b,
                        Ok(AlgebraValue::Quant(_)) => {
                            return input_error("image target must be a poset algebra".into())
                        }
                        Err(e) => return e.into(),
                    };
                    let mut table = vec![0usize; a.carrier().len()];
                    for (from, to) in map {
                        let i = match a.carrier().index_of(from) {
                            Some(i) => i,
                            None => return input_error(format!("unknown point {from:?}")),
                        };
                        let j = match target.carrier().index_of(to) {
                            Some(j) => j,
                            None => return input_error(format!("unknown point {to:?}")),
                        };
                        table[i] = j;
                    }
                    let h = ContHomo {
                        source: a.clone(),
                        target,
                        table,
                    };
                    match homomorphic_image_cont(&h) {
                        Ok((img, _)) => img,
                        Err(e) => return input_error(e.to_string()),
                    }
                }
            };
            let valid = validate_cont_algebra(&constructed).is_ok();
            let equations = match resolve_equations(file, eqs, false) {
                Ok(e) => e,
                Err(e) => return e.into(),
            };
            let cont_eqs: Vec<_> = equations
                .into_iter()
                .map(|e| match e {
                    Equation::Cont(c) => c,
                    Equation::Quant(_) => unreachable!(),
                })
                .collect();
            match check_cont_membership(&constructed, &cont_eqs, opts.max_maps) {
                Err(b) => bound_error(b.to_string()),
                Ok(rep) => {
                    let verdict = valid && rep.member;
                    let details = json!({
                        "carrier": constructed.carrier(),
                        "valid": valid,
                        "equations_preserved": rep.member,
                        "verdicts": rep.verdicts,
                    });
                    if verdict {
                        ok(details)
                    } else {
                        negative(details)
                    }
                }
            }
        }
    }
}

fn monad_freeness(
    file: &WorkbenchFile,
    presentation: &str,
    arity: usize,
    targets: &[String],
    opts: &Opts,
) -> Outcome {
    let p = match file.presentation(presentation) {
        Ok(p) => p,
        Err(e) => return e.into(),
    };
    match p.mode() {
        Mode::Met => {
            let variety = match generate_variety_met(&p) {
                Ok(v) => v,
                Err(e) => return input_error(e.to_string()),
            };
            let mut algebras = Vec::new();
            for t in targets {
                match file.algebra(t) {
                    Ok(AlgebraValue::Quant(a)) => {
                        if let Some(out) = carrier_guard(a.carrier().len(), opts) {
                            return out;
                        }
                        algebras.push(a)
                    }
                    Ok(AlgebraValue::Cont(_)) => {
                        return input_error(format!("target {t} is not a metric algebra"))
                    }
                    Err(e) => return e.into(),
                }
            }
            // targets must be validated members of the variety
            for (i, a) in algebras.iter().enumerate() {
                match check_quant_membership(a, &variety.quant_eqs(), opts.max_maps) {
                    Err(b) => return bound_error(b.to_string()),
                    Ok(rep) if !rep.member => {
                        return input_error(format!(
                            "target {} is not a member of the generated variety: {}",
                            targets[i],
                            rep.first_counterexample.unwrap_or_default()
                        ))
                    }
                    Ok(_) => {}
                }
            }
            let refs: Vec<&qaw_core::alg::QuantAlgebra> = algebras.iter().collect();
            match check_freeness_quant(&p, arity, &variety, &refs, opts.max_maps) {
                Err(e) => input_error(e.to_string()),
                Ok(rep) => {
                    let details = json!({ "passed": rep.passed, "failures": rep.failures });
                    if rep.passed {
                        ok(details)
                    } else {
                        negative(details)
                    }
                }
            }
        }
        Mode::Pos => {
            let variety = match generate_variety_cpo(&p) {
                Ok(v) => v,
                Err(e) => return input_error(e.to_string()),
            };
            let mut algebras = Vec::new();
            for t in targets {
                match file.algebra(t) {
                    Ok(AlgebraValue::Cont(a)) => {
                        if let Some(out) = carrier_guard(a.carrier().len(), opts) {
                            return out;
                        }
                        algebras.push(a)
                    }
                    Ok(AlgebraValue::Quant(_)) => {
                        return input_error(format!("target {t} is not a poset algebra"))
                    }
                    Err(e) => return e.into(),
                }
            }
            for (i, a) in algebras.iter().enumerate() {
                match check_cont_membership(a, &variety.cont_eqs(), opts.max_maps) {
                    Err(b) => return bound_error(b.to_string()),
                    Ok(rep) if !rep.member => {
                        return input_error(format!(
                            "target {} is not a member of the generated variety: {}",
                            targets[i],
                            rep.first_counterexample.unwrap_or_default()
                        ))
                    }
                    Ok(_) => {}
                }
            }
            let refs: Vec<&qaw_core::alg::ContAlgebra> = algebras.iter().collect();
            match check_freeness_cont(&p, arity, &variety, &refs, opts.max_maps) {
                Err(e) => input_error(e.to_string()),
                Ok(rep) => {
                    let details = json!({ "passed": rep.passed, "failures": rep.failures });
                    if rep.passed {
                        ok(details)
                    } else {
                        negative(details)
                    }
                }
            }
        }
    }
}

/// Render a generated variety as a workbench file: a signature declaration
/// and one equation declaration per generated equation, re-consumable by
/// `satisfies` and `hsp close`.
pub fn variety_to_dsl(v: &GeneratedVariety) -> String {
    let mut out = String::new();
    out.push_str("signature generated {\n");
    for (name, arity) in v.sig.symbols() {
        out.push_str(&format!("  {name}/{arity};\n"));
    }
    out.push_str("}\n");
    for (i, eq) in v.eqs.iter().enumerate() {
        match eq {
            Equation::Quant(q) if q.eps.is_zero() => {
                out.push_str(&format!("eq e{i} : {} == {} within 0;\n", q.left, q.right));
            }
            Equation::Quant(q) => {
                out.push_str(&format!(
                    "eq e{i} : {} == {} within {};\n",
                    q.left, q.right, q.eps
                ));
            }
            Equation::Cont(c) => {
                out.push_str(&format!("eq e{i} : {} == {};\n", c.left, c.right));
            }
        }
    }
    out
}
