use std::collections::HashMap;

use num_traits::{Signed, Zero};

use super::lexer::{tokenize, Tok, Token};
use crate::diagnostic::{Diagnostic, Diagnostics, SourceSpan};
use crate::linarith::{LinExpr, LinearInequality, Polyhedron, Rational, VarRef, VariableRegistry};
use crate::model::{
    Comparison, DiscreteGuard, DiscreteUpdate, Location, Network, PTAComponent, TransitionRecord,
    UpdateValue,
};

const KEYWORDS: &[&str] = &[
    "var",
    "clock",
    "parameter",
    "discrete",
    "automaton",
    "synclabs",
    "end",
    "loc",
    "while",
    "do",
    "when",
    "sync",
    "goto",
    "init",
    "True",
    "False",
];

fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

type PResult<T> = Result<T, Diagnostic>;

/// Linear expression over unresolved names.
#[derive(Debug, Clone)]
struct RawExpr {
    terms: Vec<(String, SourceSpan, Rational)>,
    constant: Rational,
}

impl RawExpr {
    fn scaled(mut self, k: &Rational) -> Self {
        for t in &mut self.terms {
            t.2 *= k;
        }
        self.constant *= k;
        self
    }
}

#[derive(Debug, Clone)]
struct RawLin {
    lhs: RawExpr,
    rel: Comparison,
    rhs: RawExpr,
    span: SourceSpan,
}

#[derive(Debug, Clone)]
enum RawConvex {
    True,
    False,
    Conj(Vec<RawLin>),
}

enum Atom {
    Linear(LinearInequality),
    Discrete(DiscreteGuard),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end_span: SourceSpan,
    diags: Vec<Diagnostic>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.pos + offset).map(|t| &t.tok)
    }

    fn span(&self) -> SourceSpan {
        self.toks
            .get(self.pos)
            .map_or_else(|| self.end_span.clone(), |t| t.span.clone())
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        let found = self
            .peek()
            .map_or_else(|| "end of input".to_string(), Tok::describe);
        Err(Diagnostic::at(
            self.span(),
            format!("expected {expected}, found {found}"),
        ))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<SourceSpan> {
        if self.peek() == Some(&tok) {
            Ok(self.bump().unwrap().span)
        } else {
            self.error(&tok.describe())
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            self.error(&format!("`{kw}`"))
        }
    }

    fn at_name(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if !is_keyword(s))
    }

    fn expect_name(&mut self, what: &str) -> PResult<(String, SourceSpan)> {
        if self.at_name() {
            let t = self.bump().unwrap();
            let Tok::Ident(s) = t.tok else { unreachable!() };
            Ok((s, t.span))
        } else {
            self.error(what)
        }
    }

    fn name_list(&mut self) -> PResult<Vec<(String, SourceSpan)>> {
        let mut out = vec![self.expect_name("a name")?];
        while self.eat(&Tok::Comma) {
            out.push(self.expect_name("a name")?);
        }
        Ok(out)
    }

    fn integer(&mut self) -> PResult<num_bigint::BigInt> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.error("an integer"),
        }
    }

    fn term(&mut self) -> PResult<RawExpr> {
        let zero = RawExpr {
            terms: vec![],
            constant: Rational::zero(),
        };
        match self.peek() {
            Some(Tok::Int(_)) => {
                let n = self.integer()?;
                let mut value = Rational::from_integer(n);
                if self.eat(&Tok::Slash) {
                    let span = self.span();
                    let d = self.integer()?;
                    if d.is_zero() {
                        return Err(Diagnostic::at(span, "division by zero"));
                    }
                    value /= Rational::from_integer(d);
                }
                let starred = self.eat(&Tok::Star);
                if starred || self.at_name() {
                    let (name, span) = self.expect_name("a variable")?;
                    Ok(RawExpr {
                        terms: vec![(name, span, value)],
                        ..zero
                    })
                } else {
                    Ok(RawExpr {
                        constant: value,
                        ..zero
                    })
                }
            }
            _ if self.at_name() => {
                let (name, span) = self.expect_name("a variable")?;
                let mut coeff = Rational::from_integer(1.into());
                if self.eat(&Tok::Slash) {
                    let dspan = self.span();
                    let d = self.integer()?;
                    if d.is_zero() {
                        return Err(Diagnostic::at(dspan, "division by zero"));
                    }
                    coeff /= Rational::from_integer(d);
                }
                Ok(RawExpr {
                    terms: vec![(name, span, coeff)],
                    ..zero
                })
            }
            _ => self.error("a number or a variable"),
        }
    }

    fn expr(&mut self) -> PResult<RawExpr> {
        let minus = Rational::from_integer((-1).into());
        let mut negate = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        let mut acc = RawExpr {
            terms: vec![],
            constant: Rational::zero(),
        };
        loop {
            let mut t = self.term()?;
            if negate {
                t = t.scaled(&minus);
            }
            acc.terms.extend(t.terms);
            acc.constant += t.constant;
            if self.eat(&Tok::Plus) {
                negate = false;
            } else if self.eat(&Tok::Minus) {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn relation(&mut self) -> PResult<Comparison> {
        let rel = match self.peek() {
            Some(Tok::Lt) => Comparison::Lt,
            Some(Tok::Le) => Comparison::Le,
            Some(Tok::Eq) => Comparison::Eq,
            Some(Tok::Ge) => Comparison::Ge,
            Some(Tok::Gt) => Comparison::Gt,
            _ => return self.error("a comparison (<, <=, =, >=, >)"),
        };
        self.pos += 1;
        Ok(rel)
    }

    fn lin(&mut self) -> PResult<RawLin> {
        let start = self.span();
        let lhs = self.expr()?;
        let rel = self.relation()?;
        let rhs = self.expr()?;
        let end = self
            .toks
            .get(self.pos.saturating_sub(1))
            .map_or(start.end_col, |t| t.span.end_col);
        let span = SourceSpan::new(start.line, start.start_col, end.max(start.start_col));
        Ok(RawLin {
            lhs,
            rel,
            rhs,
            span,
        })
    }

    fn convex(&mut self) -> PResult<RawConvex> {
        if self.eat_keyword("True") {
            return Ok(RawConvex::True);
        }
        if self.eat_keyword("False") {
            return Ok(RawConvex::False);
        }
        let mut lins = vec![self.lin()?];
        while self.eat(&Tok::Amp) {
            lins.push(self.lin()?);
        }
        Ok(RawConvex::Conj(lins))
    }
}

struct RawTransition {
    guard: RawConvex,
    sync: Option<(String, SourceSpan)>,
    updates: Vec<((String, SourceSpan), RawUpdateValue)>,
    target: (String, SourceSpan),
}

enum RawUpdateValue {
    Int(num_bigint::BigInt, SourceSpan),
    Name(String, SourceSpan),
}

struct RawLocation {
    name: (String, SourceSpan),
    invariant: RawConvex,
    transitions: Vec<RawTransition>,
}

struct RawAutomaton {
    name: (String, SourceSpan),
    synclabs: Vec<(String, SourceSpan)>,
    locations: Vec<RawLocation>,
}

enum InitItem {
    Loc((String, SourceSpan), (String, SourceSpan)),
    Lin(RawLin),
}

/// Names with spans, kind, span of the kind.
type RawDecl = (Vec<(String, SourceSpan)>, String, SourceSpan);

struct RawModel {
    decls: Vec<RawDecl>,
    automata: Vec<RawAutomaton>,
    init: Option<(SourceSpan, Vec<InitItem>)>,
}

impl Parser {
    fn model(&mut self) -> PResult<RawModel> {
        let mut decls = Vec::new();
        if self.eat_keyword("var") {
            while self.at_name() {
                let names = self.name_list()?;
                self.expect(Tok::Colon)?;
                let span = self.span();
                let kind = match self.peek() {
                    Some(Tok::Ident(k))
                        if ["clock", "parameter", "discrete"].contains(&k.as_str()) =>
                    {
                        k.clone()
                    }
                    _ => return self.error("`clock`, `parameter` or `discrete`"),
                };
                self.pos += 1;
                self.expect(Tok::Semi)?;
                decls.push((names, kind, span));
            }
        }
        let mut automata = Vec::new();
        while self.eat_keyword("automaton") {
            automata.push(self.automaton()?);
        }
        let mut init = None;
        if self.at_keyword("init") {
            let span = self.span();
            self.pos += 1;
            self.expect(Tok::Assign)?;
            let mut items = vec![self.init_item()?];
            while self.eat(&Tok::Amp) {
                items.push(self.init_item()?);
            }
            self.expect(Tok::Semi)?;
            init = Some((span, items));
        }
        if self.peek().is_some() {
            return self.error(if init.is_some() {
                "end of input"
            } else {
                "`automaton` or `init`"
            });
        }
        Ok(RawModel {
            decls,
            automata,
            init,
        })
    }

    fn automaton(&mut self) -> PResult<RawAutomaton> {
        let name = self.expect_name("an automaton name")?;
        self.expect_keyword("synclabs")?;
        self.expect(Tok::Colon)?;
        let synclabs = if self.at_name() {
            self.name_list()?
        } else {
            Vec::new()
        };
        self.expect(Tok::Semi)?;
        let mut locations = Vec::new();
        while self.eat_keyword("loc") {
            let loc_name = self.expect_name("a location name")?;
            self.expect(Tok::Colon)?;
            self.expect_keyword("while")?;
            let invariant = self.convex()?;
            self.expect_keyword("do")?;
            let mut transitions = Vec::new();
            while self.eat_keyword("when") {
                transitions.push(self.transition()?);
            }
            locations.push(RawLocation {
                name: loc_name,
                invariant,
                transitions,
            });
        }
        if locations.is_empty() {
            return self.error("`loc`");
        }
        self.expect_keyword("end")?;
        Ok(RawAutomaton {
            name,
            synclabs,
            locations,
        })
    }

    fn transition(&mut self) -> PResult<RawTransition> {
        let guard = self.convex()?;
        let sync = if self.eat_keyword("sync") {
            Some(self.expect_name("an action name")?)
        } else {
            None
        };
        let mut updates = Vec::new();
        if self.eat_keyword("do") {
            self.expect(Tok::LBrace)?;
            if !self.eat(&Tok::RBrace) {
                loop {
                    let target = self.expect_name("a variable")?;
                    self.expect(Tok::Prime)?;
                    self.expect(Tok::Eq)?;
                    let span = self.span();
                    let value = if self.at_name() {
                        let (n, s) = self.expect_name("a discrete variable")?;
                        RawUpdateValue::Name(n, s)
                    } else {
                        let negative = self.eat(&Tok::Minus);
                        let n = self.integer()?;
                        RawUpdateValue::Int(if negative { -n } else { n }, span)
                    };
                    updates.push((target, value));
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::RBrace)?;
            }
        }
        self.expect_keyword("goto")?;
        let target = self.expect_name("a location name")?;
        self.expect(Tok::Semi)?;
        Ok(RawTransition {
            guard,
            sync,
            updates,
            target,
        })
    }

    fn init_item(&mut self) -> PResult<InitItem> {
        if self.at_keyword("loc") && self.peek_at(1) == Some(&Tok::LBracket) {
            self.pos += 2;
            let automaton = self.expect_name("an automaton name")?;
            self.expect(Tok::RBracket)?;
            self.expect(Tok::Eq)?;
            let location = self.expect_name("a location name")?;
            return Ok(InitItem::Loc(automaton, location));
        }
        Ok(InitItem::Lin(self.lin()?))
    }
}

struct Resolver<'a> {
    registry: &'a VariableRegistry,
    diags: Vec<Diagnostic>,
}

impl Resolver<'_> {
    fn affine(&mut self, raw: &RawExpr) -> (LinExpr, Vec<(usize, Rational)>) {
        let dim = self.registry.space().dimension();
        let mut expr = LinExpr::constant(dim, raw.constant.clone());
        let mut discretes: Vec<(usize, Rational)> = Vec::new();
        for (name, span, coeff) in &raw.terms {
            match self.registry.lookup(name) {
                Some(VarRef::Discrete(d)) => match discretes.iter_mut().find(|(v, _)| *v == d) {
                    Some(entry) => entry.1 += coeff,
                    None => discretes.push((d, coeff.clone())),
                },
                Some(_) => {
                    let col = self.registry.column(name).unwrap();
                    expr.coeffs[col] += coeff;
                }
                None => self.diags.push(Diagnostic::at(
                    span.clone(),
                    format!("unknown variable `{name}`"),
                )),
            }
        }
        discretes.retain(|(_, c)| !c.is_zero());
        (expr, discretes)
    }

    fn atom(&mut self, lin: &RawLin) -> Option<Atom> {
        let (lhs, ld) = self.affine(&lin.lhs);
        let (rhs, rd) = self.affine(&lin.rhs);
        if ld.is_empty() && rd.is_empty() {
            let row = match lin.rel {
                Comparison::Lt => lhs.lt(&rhs),
                Comparison::Le => lhs.le(&rhs),
                Comparison::Eq => lhs.eq(&rhs),
                Comparison::Ge => lhs.ge(&rhs),
                Comparison::Gt => lhs.gt(&rhs),
            };
            return Some(Atom::Linear(row));
        }
        // a·d + c  rel  0
        let diff = lhs.minus(&rhs);
        let mut terms = ld;
        for (d, c) in rd {
            match terms.iter_mut().find(|(v, _)| *v == d) {
                Some(entry) => entry.1 -= c,
                None => terms.push((d, -c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        let bad = |this: &mut Self, msg: &str| {
            this.diags
                .push(Diagnostic::at(lin.span.clone(), msg.to_string()));
            None
        };
        if !diff.is_constant() || terms.len() != 1 {
            return bad(
                self,
                "discrete variables may only be compared with integer constants",
            );
        }
        let (variable, a) = terms.pop().unwrap();
        let bound = -diff.constant / &a;
        if !bound.is_integer() {
            return bad(self, "discrete comparison against a non-integer value");
        }
        let Ok(value) = i64::try_from(bound.to_integer()) else {
            return bad(self, "discrete constant out of range");
        };
        let comparison = if a.is_negative() {
            lin.rel.mirrored()
        } else {
            lin.rel
        };
        Some(Atom::Discrete(DiscreteGuard {
            variable,
            comparison,
            value,
        }))
    }

    fn convex(
        &mut self,
        raw: &RawConvex,
        allow_discrete: bool,
    ) -> (Vec<LinearInequality>, Vec<DiscreteGuard>, bool) {
        match raw {
            RawConvex::True => (vec![], vec![], false),
            RawConvex::False => (vec![], vec![], true),
            RawConvex::Conj(lins) => {
                let mut rows = Vec::new();
                let mut guards = Vec::new();
                for lin in lins {
                    match self.atom(lin) {
                        Some(Atom::Linear(r)) => rows.push(r),
                        Some(Atom::Discrete(g)) if allow_discrete => guards.push(g),
                        Some(Atom::Discrete(_)) => self.diags.push(Diagnostic::at(
                            lin.span.clone(),
                            "discrete variables are not allowed here",
                        )),
                        None => {}
                    }
                }
                (rows, guards, false)
            }
        }
    }

    fn polyhedron(&self, rows: Vec<LinearInequality>, contradiction: bool) -> Polyhedron {
        let space = self.registry.space();
        if contradiction {
            Polyhedron::empty(space)
        } else {
            Polyhedron::from_inequalities(space, rows)
        }
    }
}

/// Parses a model; on failure returns every diagnostic found.
pub fn parse_model(text: &str) -> Result<Network, Diagnostics> {
    let toks = tokenize(text).map_err(|d| Diagnostics(vec![d]))?;
    let line_count = text.lines().count().max(1);
    let last_len = text.lines().last().map_or(0, |l| l.chars().count());
    let mut parser = Parser {
        toks,
        pos: 0,
        end_span: SourceSpan::new(line_count, last_len + 1, last_len + 1),
        diags: Vec::new(),
    };
    let raw = parser.model().map_err(|d| Diagnostics(vec![d]))?;
    let mut diags = parser.diags;

    let mut seen: HashMap<String, SourceSpan> = HashMap::new();
    let (mut clocks, mut params, mut discretes) = (Vec::new(), Vec::new(), Vec::new());
    for (names, kind, _) in &raw.decls {
        for (name, span) in names {
            if seen.contains_key(name) {
                diags.push(Diagnostic::at(
                    span.clone(),
                    format!("duplicate declaration of `{name}`"),
                ));
                continue;
            }
            seen.insert(name.clone(), span.clone());
            match kind.as_str() {
                "clock" => clocks.push(name.clone()),
                "parameter" => params.push(name.clone()),
                _ => discretes.push(name.clone()),
            }
        }
    }
    let registry = VariableRegistry::new(clocks, params, discretes).expect("deduplicated");
    let space = registry.space();
    let mut res = Resolver {
        registry: &registry,
        diags: Vec::new(),
    };

    if raw.automata.is_empty() {
        diags.push(Diagnostic::at(
            parser.end_span.clone(),
            "no automaton declared",
        ));
    }

    let mut actions: Vec<String> = Vec::new();
    let mut components: Vec<PTAComponent> = Vec::new();
    for aut in &raw.automata {
        if components.iter().any(|c| c.name == aut.name.0) {
            res.diags.push(Diagnostic::at(
                aut.name.1.clone(),
                format!("duplicate automaton `{}`", aut.name.0),
            ));
        }
        let mut alphabet = Vec::new();
        for (label, span) in &aut.synclabs {
            if registry.lookup(label).is_some() {
                res.diags.push(Diagnostic::at(
                    span.clone(),
                    format!("`{label}` is declared as a variable"),
                ));
            }
            let id = match actions.iter().position(|a| a == label) {
                Some(id) => id,
                None => {
                    actions.push(label.clone());
                    actions.len() - 1
                }
            };
            if alphabet.contains(&id) {
                res.diags.push(Diagnostic::at(
                    span.clone(),
                    format!("action `{label}` listed twice"),
                ));
            } else {
                alphabet.push(id);
            }
        }
        let mut locations: Vec<Location> = Vec::new();
        for loc in &aut.locations {
            if locations.iter().any(|l| l.name == loc.name.0) {
                res.diags.push(Diagnostic::at(
                    loc.name.1.clone(),
                    format!("duplicate location `{}`", loc.name.0),
                ));
            }
            let (rows, _, contradiction) = res.convex(&loc.invariant, false);
            locations.push(Location {
                name: loc.name.0.clone(),
                invariant: res.polyhedron(rows, contradiction),
            });
        }
        let mut transitions = Vec::new();
        for (source, loc) in aut.locations.iter().enumerate() {
            for t in &loc.transitions {
                let (rows, discrete_guard, contradiction) = res.convex(&t.guard, true);
                let action = match &t.sync {
                    None => None,
                    Some((label, span)) => match actions.iter().position(|a| a == label) {
                        Some(id) if alphabet.contains(&id) => Some(id),
                        _ => {
                            res.diags.push(Diagnostic::at(
                                span.clone(),
                                format!(
                                    "action `{label}` is not in the synclabs of `{}`",
                                    aut.name.0
                                ),
                            ));
                            None
                        }
                    },
                };
                let mut resets = Vec::new();
                let mut discrete_updates: Vec<DiscreteUpdate> = Vec::new();
                for ((var, span), value) in &t.updates {
                    match registry.lookup(var) {
                        Some(VarRef::Clock(c)) => match value {
                            RawUpdateValue::Int(n, _) if n.is_zero() => {
                                if resets.contains(&c) {
                                    res.diags.push(Diagnostic::at(
                                        span.clone(),
                                        format!("`{var}` updated twice"),
                                    ));
                                }
                                resets.push(c)
                            }
                            _ => res.diags.push(Diagnostic::at(
                                span.clone(),
                                format!("clock `{var}` can only be reset to 0"),
                            )),
                        },
                        Some(VarRef::Discrete(d)) => {
                            let value = match value {
                                RawUpdateValue::Int(n, vspan) => match i64::try_from(n) {
                                    Ok(n) => Some(UpdateValue::Constant(n)),
                                    Err(_) => {
                                        res.diags.push(Diagnostic::at(
                                            vspan.clone(),
                                            "discrete constant out of range",
                                        ));
                                        None
                                    }
                                },
                                RawUpdateValue::Name(n, vspan) => match registry.lookup(n) {
                                    Some(VarRef::Discrete(src)) => Some(UpdateValue::Variable(src)),
                                    _ => {
                                        res.diags.push(Diagnostic::at(
                                            vspan.clone(),
                                            format!("`{n}` is not a discrete variable"),
                                        ));
                                        None
                                    }
                                },
                            };
                            if discrete_updates.iter().any(|u| u.variable == d) {
                                res.diags.push(Diagnostic::at(
                                    span.clone(),
                                    format!("`{var}` updated twice"),
                                ));
                            } else if let Some(value) = value {
                                discrete_updates.push(DiscreteUpdate { variable: d, value });
                            }
                        }
                        Some(VarRef::Parameter(_)) => res.diags.push(Diagnostic::at(
                            span.clone(),
                            format!("parameter `{var}` cannot be updated"),
                        )),
                        None => res.diags.push(Diagnostic::at(
                            span.clone(),
                            format!("unknown variable `{var}`"),
                        )),
                    }
                }
                resets.sort_unstable();
                let target = match locations.iter().position(|l| l.name == t.target.0) {
                    Some(id) => id,
                    None => {
                        res.diags.push(Diagnostic::at(
                            t.target.1.clone(),
                            format!(
                                "unknown location `{}` in automaton `{}`",
                                t.target.0, aut.name.0
                            ),
                        ));
                        0
                    }
                };
                transitions.push(TransitionRecord {
                    source,
                    guard: res.polyhedron(rows, contradiction),
                    discrete_guard,
                    action,
                    resets,
                    discrete_updates,
                    target,
                });
            }
        }
        components.push(PTAComponent {
            name: aut.name.0.clone(),
            alphabet,
            locations,
            initial_location: usize::MAX,
            transitions,
        });
    }

    let mut k_rows = Vec::new();
    let mut clock_rows = Vec::new();
    let mut initial_discretes: Vec<Option<i64>> = vec![None; registry.discretes().len()];
    match &raw.init {
        None => {
            if !raw.automata.is_empty() {
                diags.push(Diagnostic::at(
                    parser.end_span.clone(),
                    "missing init block",
                ));
            }
        }
        Some((_, items)) => {
            for item in items {
                match item {
                    InitItem::Loc((aut, aspan), (loc, lspan)) => {
                        let Some(comp) = components.iter_mut().find(|c| &c.name == aut) else {
                            res.diags.push(Diagnostic::at(
                                aspan.clone(),
                                format!("unknown automaton `{aut}`"),
                            ));
                            continue;
                        };
                        if comp.initial_location != usize::MAX {
                            res.diags.push(Diagnostic::at(
                                aspan.clone(),
                                format!("initial location of `{aut}` given twice"),
                            ));
                        }
                        match comp.location_id(loc) {
                            Some(id) => comp.initial_location = id,
                            None => res.diags.push(Diagnostic::at(
                                lspan.clone(),
                                format!("unknown location `{loc}` in automaton `{aut}`"),
                            )),
                        }
                    }
                    InitItem::Lin(lin) => match res.atom(lin) {
                        Some(Atom::Linear(row)) => {
                            if space.clock_columns().any(|c| row.mentions(c)) {
                                clock_rows.push(row);
                            } else {
                                k_rows.push(row);
                            }
                        }
                        Some(Atom::Discrete(g)) => {
                            if g.comparison != Comparison::Eq {
                                res.diags.push(Diagnostic::at(
                                    lin.span.clone(),
                                    "initial discrete values must be given with `=`",
                                ));
                            } else if initial_discretes[g.variable].is_some() {
                                res.diags.push(Diagnostic::at(
                                    lin.span.clone(),
                                    format!(
                                        "initial value of `{}` given twice",
                                        registry.discretes()[g.variable]
                                    ),
                                ));
                            } else {
                                initial_discretes[g.variable] = Some(g.value);
                            }
                        }
                        None => {}
                    },
                }
            }
            for comp in &components {
                if comp.initial_location == usize::MAX {
                    diags.push(Diagnostic::at(
                        raw.init.as_ref().unwrap().0.clone(),
                        format!("no initial location for automaton `{}`", comp.name),
                    ));
                }
            }
        }
    }
    diags.extend(res.diags);
    if !diags.is_empty() {
        return Err(Diagnostics(diags));
    }

    let network = Network {
        initial_constraint: Polyhedron::from_inequalities(space, k_rows),
        initial_clocks: Polyhedron::from_inequalities(space, clock_rows),
        initial_discretes: initial_discretes
            .into_iter()
            .map(|v| v.unwrap_or(0))
            .collect(),
        registry,
        actions,
        components,
    };
    let problems = network.validate();
    if !problems.is_empty() {
        return Err(Diagnostics(problems));
    }
    Ok(network)
}
