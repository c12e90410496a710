//! Canonical DSL rendering of workbench files; `parse . print` is the
//! identity on files built from valid values.

use std::fmt::Write;

use qaw_core::mspace::MetricCandidate;
use qaw_core::poset::PosetCandidate;

use crate::workbench::{CarrierDecl, DeclMode, EqDecl, PresentationDecl, TailDecl, WorkbenchFile};

pub fn print(file: &WorkbenchFile) -> String {
    let mut out = String::new();
    for (name, space) in &file.spaces {
        write!(out, "space {name} ").unwrap();
        space_body(&mut out, space, "");
        out.push('\n');
    }
    for (name, poset) in &file.posets {
        write!(out, "poset {name} ").unwrap();
        poset_body(&mut out, poset, "");
        out.push('\n');
    }
    for (name, sig) in &file.signatures {
        writeln!(out, "signature {name} {{").unwrap();
        for (sym, arity) in sig.symbols() {
            writeln!(out, "  {sym}/{arity};").unwrap();
        }
        out.push_str("}\n");
    }
    for (name, alg) in &file.algebras {
        writeln!(out, "algebra {name} over {} {{", alg.carrier).unwrap();
        for op in &alg.ops {
            writeln!(
                out,
                "  op {}({}) = table [{}];",
                op.name,
                op.arity,
                op.table.join(", ")
            )
            .unwrap();
        }
        out.push_str("}\n");
    }
    for (name, eq) in &file.equations {
        match eq {
            EqDecl::Bounded { left, right, eps } if eps.is_zero() => {
                writeln!(out, "eq {name} : {left} == {right} within 0;").unwrap();
            }
            EqDecl::Bounded { left, right, eps } => {
                writeln!(out, "eq {name} : {left} == {right} within {eps};").unwrap();
            }
            EqDecl::Plain { left, right } => {
                writeln!(out, "eq {name} : {left} == {right};").unwrap();
            }
        }
    }
    for (name, ch) in &file.chains {
        let mode = match ch.mode {
            DeclMode::Met => "met",
            DeclMode::Pos => "pos",
        };
        writeln!(out, "chain {name} mode {mode} {{").unwrap();
        if let Some(n) = ch.ordinal_family {
            writeln!(out, "  ordinal family {n};").unwrap();
        }
        for (i, stage) in ch.stages.iter().enumerate() {
            writeln!(out, "  stage {stage};").unwrap();
            if let Some(link) = ch.links.get(i) {
                out.push_str("  link {");
                for (from, to) in link {
                    write!(out, " {from} -> {to};").unwrap();
                }
                out.push_str(" }\n");
            }
        }
        match &ch.tail {
            TailDecl::Stable => out.push_str("  tail stable;\n"),
            TailDecl::Limits(entries) => {
                out.push_str("  tail limits {");
                for (x, y, d) in entries {
                    write!(out, " d {x} {y} = {d};").unwrap();
                }
                out.push_str(" }\n");
            }
        }
        out.push_str("}\n");
    }
    for (name, pair) in &file.pairs {
        writeln!(out, "pair {name} {{").unwrap();
        writeln!(out, "  from {} to {};", pair.from, pair.to).unwrap();
        out.push_str("  f0 {");
        for (from, to) in &pair.f0 {
            write!(out, " {from} -> {to};").unwrap();
        }
        out.push_str(" }\n  f1 {");
        for (from, to) in &pair.f1 {
            write!(out, " {from} -> {to};").unwrap();
        }
        out.push_str(" }\n}\n");
    }
    for (name, pres) in &file.presentations {
        match pres {
            PresentationDecl::Builtin { which, mode, arity } => {
                let mode = match mode {
                    DeclMode::Met => "met",
                    DeclMode::Pos => "pos",
                };
                writeln!(
                    out,
                    "presentation {name} = builtin {which} mode {mode} arity {arity};"
                )
                .unwrap();
            }
            PresentationDecl::Explicit {
                mode,
                arity,
                carriers,
                units,
                exts,
            } => {
                let mode_word = match mode {
                    DeclMode::Met => "met",
                    DeclMode::Pos => "pos",
                };
                writeln!(out, "presentation {name} mode {mode_word} arity {arity} {{").unwrap();
                for (n, c) in carriers.iter().enumerate() {
                    match c {
                        CarrierDecl::Space(s) => {
                            write!(out, "  carrier {n} space ").unwrap();
                            space_body(&mut out, s, "  ");
                        }
                        CarrierDecl::Poset(p) => {
                            write!(out, "  carrier {n} poset ").unwrap();
                            poset_body(&mut out, p, "  ");
                        }
                    }
                }
                for (n, unit) in units.iter().enumerate() {
                    writeln!(out, "  unit {n} [{}];", unit.join(", ")).unwrap();
                }
                for e in exts {
                    writeln!(
                        out,
                        "  ext {} {} [{}] = [{}];",
                        e.n,
                        e.m,
                        e.k.join(", "),
                        e.table.join(", ")
                    )
                    .unwrap();
                }
                out.push_str("}\n");
            }
        }
    }
    out
}

fn space_body(out: &mut String, space: &MetricCandidate, indent: &str) {
    out.push_str("{\n");
    writeln!(out, "{indent}  points {};", space.points.join(" ")).unwrap();
    for i in 0..space.points.len() {
        for j in (i + 1)..space.points.len() {
            let d = &space.dist[i][j];
            if d.is_finite() {
                writeln!(
                    out,
                    "{indent}  d {} {} = {};",
                    space.points[i], space.points[j], d
                )
                .unwrap();
            }
        }
    }
    writeln!(out, "{indent}}}").unwrap();
}

fn poset_body(out: &mut String, poset: &PosetCandidate, indent: &str) {
    out.push_str("{\n");
    writeln!(out, "{indent}  points {};", poset.points.join(" ")).unwrap();
    for i in 0..poset.points.len() {
        for j in 0..poset.points.len() {
            if i != j && poset.leq[i][j] {
                writeln!(out, "{indent}  le {} {};", poset.points[i], poset.points[j]).unwrap();
            }
        }
    }
    writeln!(out, "{indent}}}").unwrap();
}
