//! Recursive-descent parser for `.qaw` workbench files.

use std::collections::BTreeMap;

use qaw_core::dist::Dist;
use qaw_core::mspace::MetricCandidate;
use qaw_core::poset::PosetCandidate;
use qaw_core::term::{ExtTerm, Signature, Term};

use super::lexer::{lex, Spanned, SyntaxError, Tok};
use crate::workbench::{
    AlgebraDecl, CarrierDecl, ChainDecl, DeclMode, EqDecl, ExtDecl, OpDecl, PairDecl,
    PresentationDecl, TailDecl, WorkbenchFile,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("duplicate {kind} name {name:?}")]
    DuplicateName { kind: &'static str, name: String },
    #[error("unresolved reference to {kind} {name:?} in {context}")]
    UnresolvedName {
        kind: &'static str,
        name: String,
        context: String,
    },
    #[error("arity mismatch in {context}: {detail}")]
    ArityMismatch { context: String, detail: String },
}

pub fn parse(source: &str) -> Result<WorkbenchFile, Vec<ParseError>> {
    let tokens = lex(source).map_err(|e| vec![ParseError::Syntax(e)])?;
    let mut p = Parser {
        tokens,
        pos: 0,
        anon_eq: 0,
    };
    let file = p.file().map_err(|e| vec![ParseError::Syntax(e)])?;
    let errors = cross_check(&file);
    if errors.is_empty() {
        Ok(file)
    } else {
        Err(errors)
    }
}

/// Parse a single extended term, as used by `--term` arguments.
pub fn parse_ext_term_str(source: &str) -> Result<ExtTerm, SyntaxError> {
    let tokens = lex(source)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        anon_eq: 0,
    };
    let t = p.ext_term()?;
    if p.peek().is_some() {
        return Err(p.err_here("trailing input after the term"));
    }
    Ok(t)
}

/// Reference and arity consistency over the whole parsed file.
fn cross_check(file: &WorkbenchFile) -> Vec<ParseError> {
    let mut errors = Vec::new();
    for (name, alg) in &file.algebras {
        let carrier_len = file
            .spaces
            .get(&alg.carrier)
            .map(|s| s.points.len())
            .or_else(|| file.posets.get(&alg.carrier).map(|p| p.points.len()));
        match carrier_len {
            None => errors.push(ParseError::UnresolvedName {
                kind: "space or poset",
                name: alg.carrier.clone(),
                context: format!("algebra {name}"),
            }),
            Some(len) => {
                for op in &alg.ops {
                    let expected = len.pow(op.arity as u32);
                    if op.table.len() != expected {
                        errors.push(ParseError::ArityMismatch {
                            context: format!("algebra {name}, op {}", op.name),
                            detail: format!(
                                "table has {} entries, arity {} over {} points needs {}",
                                op.table.len(),
                                op.arity,
                                len,
                                expected
                            ),
                        });
                    }
                }
            }
        }
    }
    for (name, ch) in &file.chains {
        for stage in &ch.stages {
            let found = match ch.mode {
                DeclMode::Met => file.spaces.contains_key(stage),
                DeclMode::Pos => file.posets.contains_key(stage),
            };
            if !found {
                errors.push(ParseError::UnresolvedName {
                    kind: if ch.mode == DeclMode::Met {
                        "space"
                    } else {
                        "poset"
                    },
                    name: stage.clone(),
                    context: format!("chain {name}"),
                });
            }
        }
    }
    for (name, pair) in &file.pairs {
        for target in [&pair.from, &pair.to] {
            if !file.posets.contains_key(target) {
                errors.push(ParseError::UnresolvedName {
                    kind: "poset",
                    name: target.clone(),
                    context: format!("pair {name}"),
                });
            }
        }
    }
    for (name, eq) in &file.equations {
        let mut arities: BTreeMap<String, usize> = BTreeMap::new();
        let mut walk_term = |t: &Term, errors: &mut Vec<ParseError>| {
            fn go(
                t: &Term,
                arities: &mut BTreeMap<String, usize>,
                errors: &mut Vec<ParseError>,
                name: &str,
            ) {
                if let Term::App(sym, args) = t {
                    if let Some(&a) = arities.get(sym) {
                        if a != args.len() {
                            errors.push(ParseError::ArityMismatch {
                                context: format!("equation {name}"),
                                detail: format!(
                                    "{sym} used with {} and {} arguments",
                                    a,
                                    args.len()
                                ),
                            });
                        }
                    } else {
                        arities.insert(sym.clone(), args.len());
                    }
                    for a in args {
                        go(a, arities, errors, name);
                    }
                }
            }
            go(t, &mut arities, errors, name);
        };
        match eq {
            EqDecl::Bounded { left, right, .. } => {
                walk_term(left, &mut errors);
                walk_term(right, &mut errors);
            }
            EqDecl::Plain { left, right } => {
                for side in [left, right] {
                    for t in base_terms(side) {
                        walk_term(&t, &mut errors);
                    }
                }
            }
        }
    }
    errors
}

fn base_terms(t: &ExtTerm) -> Vec<Term> {
    use qaw_core::term::JoinFamily;
    match t {
        ExtTerm::Base(t) => vec![t.clone()],
        ExtTerm::Join(JoinFamily::EventuallyConstant(ts)) => {
            ts.iter().flat_map(base_terms).collect()
        }
        ExtTerm::Join(JoinFamily::Generated { seed, step }) => {
            let mut out = base_terms(seed);
            out.push(step.clone());
            out
        }
    }
}

type SpaceBody = (Vec<String>, Vec<(String, String, Dist)>);

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    anon_eq: usize,
}

impl Parser {
    fn err_here(&self, message: impl Into<String>) -> SyntaxError {
        let (line, col) = self
            .tokens
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .or_else(|| self.tokens.last().map(|s| (s.line, s.col + 1)))
            .unwrap_or((1, 1));
        SyntaxError {
            line,
            col,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|s| &s.tok)
    }

    fn next(&mut self) -> Result<Tok, SyntaxError> {
        let t = self
            .tokens
            .get(self.pos)
            .map(|s| s.tok.clone())
            .ok_or_else(|| self.err_here("unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, tok: &Tok) -> Result<(), SyntaxError> {
        let got = self.peek().cloned();
        match got {
            Some(t) if &t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.err_here(format!("expected `{tok}`, found `{t}`"))),
            None => Err(self.err_here(format!("expected `{tok}` at end of input"))),
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            other => Err(self.err_here(format!(
                "expected an identifier{}",
                other.map(|t| format!(", found `{t}`")).unwrap_or_default()
            ))),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), SyntaxError> {
        let got = self.ident()?;
        if got == word {
            Ok(())
        } else {
            self.pos -= 1;
            Err(self.err_here(format!("expected `{word}`, found `{got}`")))
        }
    }

    fn eat_keyword(&mut self, word: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == word) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<usize, SyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Int(s)) => {
                self.pos += 1;
                s.parse().map_err(|_| self.err_here("integer out of range"))
            }
            _ => Err(self.err_here("expected an integer")),
        }
    }

    fn dist(&mut self) -> Result<Dist, SyntaxError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            return Err(self.err_here("negative distance"));
        }
        if self.eat_keyword("inf") {
            return Ok(Dist::Infinity);
        }
        let numer = self.integer()?;
        if matches!(self.peek(), Some(Tok::Slash)) {
            self.pos += 1;
            let denom = self.integer()?;
            Dist::ratio(numer as i64, denom as i64).map_err(|e| self.err_here(e.to_string()))
        } else {
            Ok(Dist::from_integer(numer as u64))
        }
    }

    fn file(&mut self) -> Result<WorkbenchFile, SyntaxError> {
        let mut file = WorkbenchFile::default();
        while self.peek().is_some() {
            let word = self.ident()?;
            match word.as_str() {
                "space" => self.space(&mut file)?,
                "poset" => self.poset(&mut file)?,
                "signature" => self.signature(&mut file)?,
                "algebra" => self.algebra(&mut file)?,
                "eq" => self.equation(&mut file, false)?,
                "ineq" => self.equation(&mut file, true)?,
                "chain" => self.chain(&mut file)?,
                "pair" => self.pair(&mut file)?,
                "presentation" => self.presentation(&mut file)?,
                other => {
                    self.pos -= 1;
                    return Err(self.err_here(format!("unknown declaration `{other}`")));
                }
            }
        }
        Ok(file)
    }

    fn insert_unique<T>(
        &self,
        map: &mut BTreeMap<String, T>,
        kind: &'static str,
        name: String,
        value: T,
    ) -> Result<(), SyntaxError> {
        if map.contains_key(&name) {
            return Err(self.err_here(format!("duplicate {kind} name {name:?}")));
        }
        map.insert(name, value);
        Ok(())
    }

    fn space(&mut self, file: &mut WorkbenchFile) -> Result<(), SyntaxError> {
        let name = self.ident()?;
        self.expect(&Tok::LBrace)?;
        let (points, finite) = self.space_body()?;
        let candidate = build_metric_candidate(points, finite).map_err(|m| self.err_here(m))?;
        self.insert_unique(&mut file.spaces, "space", name, candidate)
    }

    fn space_body(&mut self) -> Result<SpaceBody, SyntaxError> {
        let mut points = Vec::new();
        let mut finite = Vec::new();
        loop {
            if matches!(self.peek(), Some(Tok::RBrace)) {
                self.pos += 1;
                break;
            }
            let word = self.ident()?;
            match word.as_str() {
                "points" => {
                    while let Some(Tok::Ident(_)) = self.peek() {
                        points.push(self.ident()?);
                    }
                    self.expect(&Tok::Semi)?;
                }
                "d" => {
                    let x = self.ident()?;
                    let y = self.ident()?;
                    self.expect(&Tok::Eq)?;
                    let d = self.dist()?;
                    self.expect(&Tok::Semi)?;
                    finite.push((x, y, d));
                }
                other => {
                    self.pos -= 1;
                    return Err(self.err_here(format!("expected `points` or `d`, found `{other}`")));
                }
            }
        }
        Ok((points, finite))
    }

    fn poset(&mut self, file: &mut WorkbenchFile) -> Result<(), SyntaxError> {
        let name = self.ident()?;
        self.expect(&Tok::LBrace)?;
        let candidate = self.poset_body()?;
        self.insert_unique(&mut file.posets, "poset", name, candidate)
    }

    fn poset_body(&mut self) -> Result<PosetCandidate, SyntaxError> {
        let mut points: Vec<String> = Vec::new();
        let mut below: Vec<(String, String)> = Vec::new();
        loop {
            if matches!(self.peek(), Some(Tok::RBrace)) {
                self.pos += 1;
                break;
            }
            let word = self.ident()?;
            match word.as_str() {
                "points" => {
                    while let Some(Tok::Ident(_)) = self.peek() {
                        points.push(self.ident()?);
                    }
                    self.expect(&Tok::Semi)?;
                }
                "le" => {
                    let x = self.ident()?;
                    let y = self.ident()?;
                    self.expect(&Tok::Semi)?;
                    below.push((x, y));
                }
                other => {
                    self.pos -= 1;
                    return Err(
                        self.err_here(format!("expected `points` or `le`, found `{other}`"))
                    );
                }
            }
        }
        let n = points.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (x, y) in &below {
            let i = points
                .iter()
                .position(|p| p == x)
                .ok_or_else(|| self.err_here(format!("unknown point {x:?} in le")))?;
            let j = points
                .iter()
                .position(|p| p == y)
                .ok_or_else(|| self.err_here(format!("unknown point {y:?} in le")))?;
            leq[i][j] = true;
        }
        // listed pairs generate the order: close transitively
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        Ok(PosetCandidate { points, leq })
    }

    fn signature(&mut self, file: &mut WorkbenchFile) -> Result<(), SyntaxError> {
        let name = self.ident()?;
        self.expect(&Tok::LBrace)?;
        let mut symbols = Vec::new();
        loop {
            if matches!(self.peek(), Some(Tok::RBrace)) {
                self.pos += 1;
                break;
            }
            let sym = self.ident()?;
            self.expect(&Tok::Slash)?;
            let arity = self.integer()?;
            self.expect(&Tok::Semi)?;
            symbols.push((sym, arity));
        }
        let sig = Signature::new(symbols).map_err(|e| self.err_here(e.to_string()))?;
        self.insert_unique(&mut file.signatures, "signature", name, sig)
    }

    fn algebra(&mut self, file: &mut WorkbenchFile) -> Result<(), SyntaxError> {
        let name = self.ident()?;
        self.keyword("over")?;
        let carrier = self.ident()?;
        self.expect(&Tok::LBrace)?;
        let mut ops = Vec::new();
        loop {
            if matches!(self.peek(), Some(Tok::RBrace)) {
                self.pos += 1;
                break;
            }
            self.keyword("op")?;
            let op_name = self.ident()?;
            self.expect(&Tok::LParen)?;
            let arity = self.integer()?;
            self.expect(&Tok::RParen)?;
            self.expect(&Tok::Eq)?;
            self.keyword("table")?;
            let table = self.label_list()?;
            self.expect(&Tok::Semi)?;
            ops.push(OpDecl {
                name: op_name,
                arity,
                table,
            });
        }
        self.insert_unique(
            &mut file.algebras,
            "algebra",
            name,
            AlgebraDecl { carrier, ops },
        )
    }

    fn label_list(&mut self) -> Result<Vec<String>, SyntaxError> {
        self.expect(&Tok::LBracket)?;
        let mut out = Vec::new();
        if matches!(self.peek(), Some(Tok::RBracket)) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.ident()?);
            match self.next()? {
                Tok::Comma => continue,
                Tok::RBracket => break,
                t => {
                    self.pos -= 1;
                    return Err(self.err_here(format!("expected `,` or `]`, found `{t}`")));
                }
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let head = self.ident()?;
        if matches!(self.peek(), Some(Tok::LParen)) {
            self.pos += 1;
            let mut args = Vec::new();
            if matches!(self.peek(), Some(Tok::RParen)) {
                self.pos += 1;
                return Ok(Term::app(head, args));
            }
            loop {
                args.push(self.term()?);
                match self.next()? {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    t => {
                        self.pos -= 1;
                        return Err(self.err_here(format!("expected `,` or `)`, found `{t}`")));
                    }
                }
            }
            Ok(Term::app(head, args))
        } else {
            Ok(Term::var(head))
        }
    }

    fn ext_term(&mut self) -> Result<ExtTerm, SyntaxError> {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == "join") {
            self.pos += 1;
            if matches!(self.peek(), Some(Tok::LBracket)) {
                self.pos += 1;
                let mut fam = Vec::new();
                loop {
                    fam.push(self.ext_term()?);
                    match self.next()? {
                        Tok::Comma => continue,
                        Tok::RBracket => break,
                        t => {
                            self.pos -= 1;
                            return Err(self.err_here(format!("expected `,` or `]`, found `{t}`")));
                        }
                    }
                }
                return Ok(ExtTerm::join(fam));
            }
            self.keyword("from")?;
            let seed = self.ext_term()?;
            self.keyword("step")?;
            let step = self.term()?;
            if qaw_core::term::vars_of_ext(&seed).contains(qaw_core::term::HOLE) {
                return Err(self.err_here("the hole variable z may not occur in the seed"));
            }
            return Ok(ExtTerm::generated(seed, step));
        }
        Ok(ExtTerm::base(self.term()?))
    }

    fn equation(&mut self, file: &mut WorkbenchFile, is_ineq: bool) -> Result<(), SyntaxError> {
        // optional `name :` prefix
        let name = if matches!(self.peek(), Some(Tok::Ident(_)))
            && matches!(
                self.tokens.get(self.pos + 1).map(|s| &s.tok),
                Some(Tok::Colon)
            ) {
            let n = self.ident()?;
            self.pos += 1;
            n
        } else {
            self.anon_eq += 1;
            format!("eq{}", self.anon_eq - 1)
        };
        let left = self.ext_term()?;
        if is_ineq {
            self.expect(&Tok::Leq)?;
            let right = self.ext_term()?;
            self.expect(&Tok::Semi)?;
            let eq = qaw_core::eqn::inequation(left, right);
            return self.insert_unique(
                &mut file.equations,
                "equation",
                name,
                EqDecl::Plain {
                    left: eq.left,
                    right: eq.right,
                },
            );
        }
        self.expect(&Tok::EqEq)?;
        let right = self.ext_term()?;
        let decl = if self.eat_keyword("within") {
            let eps = self.dist()?;
            if !eps.is_finite() {
                return Err(self.err_here("equation bounds must be finite"));
            }
            match (left, right) {
                (ExtTerm::Base(l), ExtTerm::Base(r)) => EqDecl::Bounded {
                    left: l,
                    right: r,
                    eps,
                },
                _ => return Err(self.err_here("`within` applies to plain terms, not joins")),
            }
        } else {
            EqDecl::Plain { left, right }
        };
        self.expect(&Tok::Semi)?;
        self.insert_unique(&mut file.equations, "equation", name, decl)
    }

    fn mode(&mut self) -> Result<DeclMode, SyntaxError> {
        let word = self.ident()?;
        match word.as_str() {
            "met" => Ok(DeclMode::Met),
            "pos" | "cpo" => Ok(DeclMode::Pos),
            other => {
                self.pos -= 1;
                Err(self.err_here(format!("expected `met` or `pos`, found `{other}`")))
            }
        }
    }

    fn assignments(&mut self) -> Result<BTreeMap<String, String>, SyntaxError> {
        self.expect(&Tok::LBrace)?;
        let mut out = BTreeMap::new();
        loop {
            if matches!(self.peek(), Some(Tok::RBrace)) {
                self.pos += 1;
                break;
            }
            let from = self.ident()?;
            self.expect(&Tok::Arrow)?;
            let to = self.ident()?;
            self.expect(&Tok::Semi)?;
            out.insert(from, to);
        }
        Ok(out)
    }

    fn chain(&mut self, file: &mut WorkbenchFile) -> Result<(), SyntaxError> {
        let name = self.ident()?;
        self.keyword("mode")?;
        let mode = self.mode()?;
        self.expect(&Tok::LBrace)?;
        let mut stages = Vec::new();
        let mut links = Vec::new();
        let mut tail = TailDecl::Stable;
        let mut ordinal_family = None;
        loop {
            if matches!(self.peek(), Some(Tok::RBrace)) {
                self.pos += 1;
                break;
            }
            let word = self.ident()?;
            match word.as_str() {
                "ordinal" => {
                    self.keyword("family")?;
                    ordinal_family = Some(self.integer()?);
                    self.expect(&Tok::Semi)?;
                }
                "stage" => {
                    stages.push(self.ident()?);
                    self.expect(&Tok::Semi)?;
                }
                "link" => links.push(self.assignments()?),
                "tail" => {
                    if self.eat_keyword("stable") {
                        self.expect(&Tok::Semi)?;
                        tail = TailDecl::Stable;
                    } else {
                        self.keyword("limits")?;
                        self.expect(&Tok::LBrace)?;
                        let mut entries = Vec::new();
                        loop {
                            if matches!(self.peek(), Some(Tok::RBrace)) {
                                self.pos += 1;
                                break;
                            }
                            self.keyword("d")?;
                            let x = self.ident()?;
                            let y = self.ident()?;
                            self.expect(&Tok::Eq)?;
                            let d = self.dist()?;
                            self.expect(&Tok::Semi)?;
                            entries.push((x, y, d));
                        }
                        tail = TailDecl::Limits(entries);
                    }
                }
                other => {
                    self.pos -= 1;
                    return Err(self.err_here(format!(
                        "expected `stage`, `link` or `tail`, found `{other}`"
                    )));
                }
            }
        }
        self.insert_unique(
            &mut file.chains,
            "chain",
            name,
            ChainDecl {
                mode,
                stages,
                links,
                tail,
                ordinal_family,
            },
        )
    }

    fn pair(&mut self, file: &mut WorkbenchFile) -> Result<(), SyntaxError> {
        let name = self.ident()?;
        self.expect(&Tok::LBrace)?;
        self.keyword("from")?;
        let from = self.ident()?;
        self.keyword("to")?;
        let to = self.ident()?;
        self.expect(&Tok::Semi)?;
        self.keyword("f0")?;
        let f0 = self.assignments()?;
        self.keyword("f1")?;
        let f1 = self.assignments()?;
        self.expect(&Tok::RBrace)?;
        self.insert_unique(&mut file.pairs, "pair", name, PairDecl { from, to, f0, f1 })
    }

    fn presentation(&mut self, file: &mut WorkbenchFile) -> Result<(), SyntaxError> {
        let name = self.ident()?;
        if matches!(self.peek(), Some(Tok::Eq)) {
            self.pos += 1;
            self.keyword("builtin")?;
            let which = self.ident()?;
            self.keyword("mode")?;
            let mode = self.mode()?;
            self.keyword("arity")?;
            let arity = self.integer()?;
            self.expect(&Tok::Semi)?;
            return self.insert_unique(
                &mut file.presentations,
                "presentation",
                name,
                PresentationDecl::Builtin { which, mode, arity },
            );
        }
        self.keyword("mode")?;
        let mode = self.mode()?;
        self.keyword("arity")?;
        let arity = self.integer()?;
        self.expect(&Tok::LBrace)?;
        let mut carriers: Vec<Option<CarrierDecl>> = vec![None; arity + 1];
        let mut units: Vec<Option<Vec<String>>> = vec![None; arity + 1];
        let mut exts = Vec::new();
        loop {
            if matches!(self.peek(), Some(Tok::RBrace)) {
                self.pos += 1;
                break;
            }
            let word = self.ident()?;
            match word.as_str() {
                "carrier" => {
                    let n = self.integer()?;
                    if n > arity {
                        return Err(
                            self.err_here(format!("carrier index {n} exceeds arity {arity}"))
                        );
                    }
                    let kind = self.ident()?;
                    self.expect(&Tok::LBrace)?;
                    let decl = match kind.as_str() {
                        "space" => {
                            let (points, finite) = self.space_body()?;
                            CarrierDecl::Space(
                                build_metric_candidate(points, finite)
                                    .map_err(|m| self.err_here(m))?,
                            )
                        }
                        "poset" => CarrierDecl::Poset(self.poset_body()?),
                        other => {
                            self.pos -= 1;
                            return Err(self.err_here(format!(
                                "expected `space` or `poset`, found `{other}`"
                            )));
                        }
                    };
                    carriers[n] = Some(decl);
                }
                "unit" => {
                    let n = self.integer()?;
                    if n > arity {
                        return Err(self.err_here(format!("unit index {n} exceeds arity {arity}")));
                    }
                    let labels = self.label_list()?;
                    self.expect(&Tok::Semi)?;
                    units[n] = Some(labels);
                }
                "ext" => {
                    let n = self.integer()?;
                    let m = self.integer()?;
                    let k = self.label_list()?;
                    self.expect(&Tok::Eq)?;
                    let table = self.label_list()?;
                    self.expect(&Tok::Semi)?;
                    exts.push(ExtDecl { n, m, k, table });
                }
                other => {
                    self.pos -= 1;
                    return Err(self.err_here(format!(
                        "expected `carrier`, `unit` or `ext`, found `{other}`"
                    )));
                }
            }
        }
        let carriers: Vec<CarrierDecl> = carriers
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or_else(|| self.err_here(format!("missing carrier {i}"))))
            .collect::<Result<_, _>>()?;
        let units: Vec<Vec<String>> = units.into_iter().map(|u| u.unwrap_or_default()).collect();
        self.insert_unique(
            &mut file.presentations,
            "presentation",
            name,
            PresentationDecl::Explicit {
                mode,
                arity,
                carriers,
                units,
                exts,
            },
        )
    }
}

fn build_metric_candidate(
    points: Vec<String>,
    finite: Vec<(String, String, Dist)>,
) -> Result<MetricCandidate, String> {
    let n = points.len();
    let mut dist = vec![vec![Dist::Infinity; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = Dist::zero();
    }
    for (x, y, d) in finite {
        let i = points
            .iter()
            .position(|p| p == &x)
            .ok_or_else(|| format!("unknown point {x:?} in a distance entry"))?;
        let j = points
            .iter()
            .position(|p| p == &y)
            .ok_or_else(|| format!("unknown point {y:?} in a distance entry"))?;
        dist[i][j] = d.clone();
        dist[j][i] = d;
    }
    Ok(MetricCandidate { points, dist })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_space() {
        let file = parse("space M { points p q; d p q = 1/2; }").unwrap();
        let m = file.metric("M").unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(*m.dist(0, 1), Dist::ratio(1, 2).unwrap());
    }

    #[test]
    fn parses_quant_equation() {
        let file = parse("eq almost : mul(x0, x1) == mul(x1, x0) within 1;").unwrap();
        let eq = file.quant_eq("almost").unwrap();
        assert_eq!(eq.eps, Dist::from_integer(1));
    }

    #[test]
    fn negative_distance_is_syntax_error() {
        let errs = parse("space M { points p q; d p q = -1/2; }").unwrap_err();
        assert!(matches!(&errs[0], ParseError::Syntax(e) if e.message.contains("negative")));
    }

    #[test]
    fn unresolved_and_arity_errors() {
        let errs = parse("algebra A over M { op f(1) = table [p, p]; }").unwrap_err();
        assert!(errs
            .iter()
            .any(|e| matches!(e, ParseError::UnresolvedName { .. })));
        let errs = parse("space M { points p; }\nalgebra A over M { op f(1) = table [p, p]; }")
            .unwrap_err();
        assert!(errs
            .iter()
            .any(|e| matches!(e, ParseError::ArityMismatch { .. })));
        let errs = parse("eq e0 : mul(x0, x1) == mul(x0);").unwrap_err();
        assert!(errs
            .iter()
            .any(|e| matches!(e, ParseError::ArityMismatch { .. })));
    }

    #[test]
    fn duplicate_name_rejected() {
        let errs = parse("space M { points p; } space M { points q; }").unwrap_err();
        assert!(matches!(&errs[0], ParseError::Syntax(e) if e.message.contains("duplicate")));
    }

    #[test]
    fn parses_joins_and_ineq() {
        let file = parse(
            "eq pow : join from x0 step mul(z, x0) == e();\n\
             ineq sq : mul(x0, x0) <= x0;",
        )
        .unwrap();
        assert!(file.cont_eq("pow").is_ok());
        assert!(file.cont_eq("sq").is_ok());
    }

    #[test]
    fn parses_chain_pair_presentation() {
        let src = "\
space M0 { points p q; d p q = 1; }\n\
space M1 { points u; }\n\
chain C mode met { stage M0; link { p -> u; q -> u; } stage M1; tail stable; }\n\
poset B { points a b; le a b; }\n\
poset A { points x; }\n\
pair P { from A to B; f0 { x -> a; } f1 { x -> b; } }\n\
presentation S = builtin semilattice mode met arity 2;\n\
presentation E mode met arity 0 { carrier 0 space { points t; } unit 0 []; ext 0 0 [] = [t]; }\n";
        let file = parse(src).unwrap();
        assert!(file.chain("C").is_ok());
        assert!(file.pair("P").is_ok());
        assert!(file.presentation("S").is_ok());
        assert!(file.presentation("E").is_ok());
    }
}
