//! First-order queries over a presentation, with the "there exist
//! infinitely many" quantifier.
//!
//! Concrete syntax, tightest-binding first: `!`, `&`, `|`, `->`
//! (right-associative); quantifiers `A x.`, `E x.`, `Einf x.` scope to the
//! end of the formula; atoms are `name(x, y, ...)` and `x = y`.
//!
//! Compilation translates a formula into an automaton over its sorted free
//! variables, one tape per variable, restricted to the domain throughout:
//! negation is complement relative to the corresponding domain power, and
//! `Einf x` keeps the tuples that admit arbitrarily long witnesses for `x`,
//! found by requiring a witness longer than every other component by more
//! than the automaton's deterministic state count.

use crate::automata::{
    complement, determinize, intersect, is_empty, is_finite, minimize, trim, union, Alphabet,
    Automaton, Builder, Label, Mask, Word,
};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::relations::{convolve, deconvolve, equality_machine, universe, RegularRelation};
use std::collections::{BTreeMap, BTreeSet, HashMap};

// ---------------------------------------------------------------------------
// Syntax
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    ExistsInf(String, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Atom(String, Vec<String>),
    Eq(String, String),
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Forall(v, f) | Formula::Exists(v, f) | Formula::ExistsInf(v, f) => {
                let mut inner = BTreeSet::new();
                f.collect_free(&mut inner);
                inner.remove(v);
                out.extend(inner);
            }
            Formula::Imp(a, b) | Formula::Or(a, b) | Formula::And(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::Not(f) => f.collect_free(out),
            Formula::Atom(_, vars) => out.extend(vars.iter().cloned()),
            Formula::Eq(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Id(String),
    LPar,
    RPar,
    Comma,
    Dot,
    EqSign,
    Bang,
    Amp,
    Bar,
    Arrow,
}

struct SpannedTok {
    tok: Tok,
    line: usize,
    col: usize,
}

fn step(chars: &[char], i: &mut usize, line: &mut usize, col: &mut usize) -> char {
    let c = chars[*i];
    *i += 1;
    if c == '\n' {
        *line = *line + 1;
        *col = 1;
    } else {
        *col += 1;
    }
    c
}

fn tokenize(src: &str) -> Result<Vec<SpannedTok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0usize;
    let mut line = 1usize;
    let mut col = 1usize;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c.is_whitespace() {
            step(&chars, &mut i, &mut line, &mut col);
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut name = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                name.push(step(&chars, &mut i, &mut line, &mut col));
            }
            toks.push(SpannedTok {
                tok: Tok::Id(name),
                line: tl,
                col: tc,
            });
            continue;
        }
        let tok = match c {
            '(' => Tok::LPar,
            ')' => Tok::RPar,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '=' => Tok::EqSign,
            '!' => Tok::Bang,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            '-' => {
                step(&chars, &mut i, &mut line, &mut col);
                if chars.get(i) == Some(&'>') {
                    step(&chars, &mut i, &mut line, &mut col);
                    toks.push(SpannedTok {
                        tok: Tok::Arrow,
                        line: tl,
                        col: tc,
                    });
                    continue;
                }
                return Err(Error::Syntax {
                    line: tl,
                    col: tc,
                    msg: "expected '->'".into(),
                });
            }
            other => {
                return Err(Error::Syntax {
                    line: tl,
                    col: tc,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        step(&chars, &mut i, &mut line, &mut col);
        toks.push(SpannedTok {
            tok,
            line: tl,
            col: tc,
        });
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<SpannedTok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|s| &s.tok)
    }

    fn err_here(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self
            .toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|s| (s.line, s.col))
            .unwrap_or((1, 1));
        Error::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn advance(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err_here(format!("expected {what}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Id(_)) => match self.advance() {
                Some(Tok::Id(s)) => Ok(s),
                _ => unreachable!(),
            },
            _ => Err(self.err_here(format!("expected {what}"))),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        if let (Some(Tok::Id(q)), Some(Tok::Id(_))) = (self.peek(), self.peek2()) {
            let build: Option<fn(String, Box<Formula>) -> Formula> = match q.as_str() {
                "A" => Some(Formula::Forall),
                "E" => Some(Formula::Exists),
                "Einf" => Some(Formula::ExistsInf),
                _ => None,
            };
            if let Some(build) = build {
                self.advance();
                let var = self.ident("variable")?;
                self.expect(Tok::Dot, "'.' after quantified variable")?;
                let body = self.formula()?;
                return Ok(build(var, Box::new(body)));
            }
        }
        self.implication()
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.advance();
            let rhs = self.implication()?;
            return Ok(Formula::Imp(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Bar) {
            self.advance();
            let rhs = self.conjunction()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.advance();
            let rhs = self.unary()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.advance();
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Some(Tok::LPar) => {
                self.advance();
                let f = self.formula()?;
                self.expect(Tok::RPar, "')'")?;
                Ok(f)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        let name = self.ident("relation name or variable")?;
        match self.peek() {
            Some(Tok::LPar) => {
                self.advance();
                let mut vars = vec![self.ident("variable")?];
                while self.peek() == Some(&Tok::Comma) {
                    self.advance();
                    vars.push(self.ident("variable")?);
                }
                self.expect(Tok::RPar, "')'")?;
                Ok(Formula::Atom(name, vars))
            }
            Some(Tok::EqSign) => {
                self.advance();
                let rhs = self.ident("variable")?;
                Ok(Formula::Eq(name, rhs))
            }
            _ => Err(self.err_here("expected '(' or '=' after identifier")),
        }
    }
}

pub fn parse_formula(src: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
    };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return Err(p.err_here("trailing input after formula"));
    }
    Ok(f)
}

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

/// Result of compiling a formula: a truth value for sentences, otherwise an
/// automaton over the sorted free variables.
#[derive(Clone, Debug)]
pub enum Compiled {
    Sentence(bool),
    Relation(RegularRelation),
}

/// Details recorded during compilation: for every `Einf` handled through a
/// length guard, the variable and the deterministic state count used as the
/// guard's slack.
#[derive(Clone, Debug, Default)]
pub struct CompileTrace {
    pub einf_slacks: Vec<(String, usize)>,
}

struct Compiler<'a> {
    p: &'a Presentation,
    trace: CompileTrace,
    /// Memoized k-fold domain powers; negation and widening rebuild these
    /// constantly, and they only depend on the arity.
    universes: std::cell::RefCell<HashMap<usize, Automaton>>,
}

fn mini(r: RegularRelation) -> RegularRelation {
    let tapes = r.tapes().to_vec();
    let m = minimize(r.automaton());
    RegularRelation::new(tapes, m).expect("shape preserved")
}

/// Word equality between tapes `i` and `j`, other tapes unconstrained.
fn tape_equality(alph: &Alphabet, i: usize, j: usize) -> Automaton {
    let arity = alph.arity();
    let pad = alph.pad();
    let full: Mask = (1u64 << pad) | ((1u64 << pad) - 1);
    let mut b = Builder::new(alph.clone());
    let s = b.state();
    b.set_final(s);
    for c in 0..=pad {
        let label = Label::new((0..arity).map(|k| {
            if k == i || k == j {
                1u64 << c
            } else {
                full
            }
        }));
        b.edge(s, label, s);
    }
    b.finish(s)
}

impl<'a> Compiler<'a> {
    fn domain_nonempty(&self) -> bool {
        !is_empty(self.p.domain())
    }

    fn domain_infinite(&self) -> bool {
        !is_finite(self.p.domain())
    }

    fn full_over(&self, tapes: &[String]) -> Result<RegularRelation> {
        let u = self.universe_power(tapes.len())?;
        RegularRelation::new(tapes.to_vec(), u)
    }

    fn universe_power(&self, arity: usize) -> Result<Automaton> {
        if let Some(u) = self.universes.borrow().get(&arity) {
            return Ok(u.clone());
        }
        let u = minimize(&universe(self.p.domain(), arity)?);
        self.universes.borrow_mut().insert(arity, u.clone());
        Ok(u)
    }

    fn empty_over(&self, model: &RegularRelation) -> RegularRelation {
        let alph = model.automaton().alphabet().clone();
        RegularRelation::new(model.tapes().to_vec(), Automaton::empty_lang(alph))
            .expect("shape preserved")
    }

    fn negate(&self, v: Compiled) -> Result<Compiled> {
        Ok(match v {
            Compiled::Sentence(b) => Compiled::Sentence(!b),
            Compiled::Relation(r) => {
                let u = self.full_over(r.tapes())?;
                let m = intersect(u.automaton(), &complement(r.automaton()))?;
                Compiled::Relation(mini(RegularRelation::new(r.tapes().to_vec(), m)?))
            }
        })
    }

    /// Cylindrify both relations to their common sorted variable set.
    fn align(
        &self,
        a: RegularRelation,
        b: RegularRelation,
    ) -> Result<(RegularRelation, RegularRelation)> {
        let names: BTreeSet<String> = a
            .tapes()
            .iter()
            .chain(b.tapes().iter())
            .cloned()
            .collect();
        let widen = |mut r: RegularRelation| -> Result<RegularRelation> {
            for n in &names {
                if !r.tapes().contains(n) {
                    r = r.cylindrify(n)?;
                }
            }
            Ok(r)
        };
        Ok((widen(a)?, widen(b)?))
    }

    fn conjoin(&self, a: Compiled, b: Compiled) -> Result<Compiled> {
        Ok(match (a, b) {
            (Compiled::Sentence(x), Compiled::Sentence(y)) => Compiled::Sentence(x && y),
            (Compiled::Sentence(true), v) | (v, Compiled::Sentence(true)) => v,
            (Compiled::Sentence(false), Compiled::Relation(r))
            | (Compiled::Relation(r), Compiled::Sentence(false)) => {
                Compiled::Relation(self.empty_over(&r))
            }
            (Compiled::Relation(a), Compiled::Relation(b)) => {
                let (a, b) = self.align(a, b)?;
                let m = intersect(a.automaton(), b.automaton())?;
                Compiled::Relation(mini(RegularRelation::new(a.tapes().to_vec(), m)?))
            }
        })
    }

    fn disjoin(&self, a: Compiled, b: Compiled) -> Result<Compiled> {
        Ok(match (a, b) {
            (Compiled::Sentence(x), Compiled::Sentence(y)) => Compiled::Sentence(x || y),
            (Compiled::Sentence(false), v) | (v, Compiled::Sentence(false)) => v,
            (Compiled::Sentence(true), Compiled::Relation(r))
            | (Compiled::Relation(r), Compiled::Sentence(true)) => {
                Compiled::Relation(mini(self.full_over(r.tapes())?))
            }
            (Compiled::Relation(a), Compiled::Relation(b)) => {
                let (a, b) = self.align(a, b)?;
                let m = union(a.automaton(), b.automaton())?;
                Compiled::Relation(mini(RegularRelation::new(a.tapes().to_vec(), m)?))
            }
        })
    }

    fn atom(&self, name: &str, vars: &[String]) -> Result<Compiled> {
        let machine = self.p.relation(name)?;
        let expected = machine.alphabet().arity();
        if expected != vars.len() {
            return Err(Error::ArityMismatch {
                name: name.to_string(),
                expected,
                got: vars.len(),
            });
        }
        // Distinct tape names per argument position; repeats become fresh
        // tapes forced equal to the first occurrence, then projected away.
        let mut tape_names = Vec::with_capacity(vars.len());
        let mut dups: Vec<(String, String)> = Vec::new();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                let fresh = format!("{v}~{i}");
                dups.push((v.clone(), fresh.clone()));
                tape_names.push(fresh);
            } else {
                tape_names.push(v.clone());
            }
        }
        let mut rel = RegularRelation::new(tape_names, machine.clone())?;
        for (orig, fresh) in dups {
            let alph = rel.automaton().alphabet().clone();
            let i = rel.tape_index(&orig)?;
            let j = rel.tape_index(&fresh)?;
            let eq = tape_equality(&alph, i, j);
            let constrained = intersect(rel.automaton(), &eq)?;
            rel = RegularRelation::new(rel.tapes().to_vec(), constrained)?;
            rel = rel.project(&fresh)?;
        }
        Ok(Compiled::Relation(mini(rel.sorted())))
    }

    fn var_equality(&self, x: &str, y: &str) -> Result<Compiled> {
        if x == y {
            let rel = RegularRelation::new(
                vec![x.to_string()],
                minimize(self.p.domain()),
            )?;
            return Ok(Compiled::Relation(rel));
        }
        let base = self.p.alphabet();
        let eq = equality_machine(base);
        let dom2 = self.universe_power(2)?;
        let m = intersect(&eq, &dom2)?;
        let mut tapes = vec![x.to_string(), y.to_string()];
        tapes.sort();
        Ok(Compiled::Relation(mini(RegularRelation::new(tapes, m)?)))
    }

    fn exists(&self, var: &str, v: Compiled) -> Result<Compiled> {
        match v {
            Compiled::Sentence(b) => Ok(Compiled::Sentence(b && self.domain_nonempty())),
            Compiled::Relation(r) if !r.tapes().contains(&var.to_string()) => {
                if self.domain_nonempty() {
                    Ok(Compiled::Relation(r))
                } else {
                    Ok(Compiled::Relation(self.empty_over(&r)))
                }
            }
            Compiled::Relation(r) => {
                if r.arity() == 1 {
                    Ok(Compiled::Sentence(!is_empty(r.automaton())))
                } else {
                    Ok(Compiled::Relation(mini(r.project(var)?)))
                }
            }
        }
    }

    fn exists_inf(&mut self, var: &str, v: Compiled) -> Result<Compiled> {
        match v {
            Compiled::Sentence(b) => Ok(Compiled::Sentence(b && self.domain_infinite())),
            Compiled::Relation(r) if !r.tapes().contains(&var.to_string()) => {
                if self.domain_infinite() {
                    Ok(Compiled::Relation(r))
                } else {
                    Ok(Compiled::Relation(self.empty_over(&r)))
                }
            }
            Compiled::Relation(r) => {
                if r.arity() == 1 {
                    return Ok(Compiled::Sentence(!is_finite(r.automaton())));
                }
                let slack = determinize(r.automaton()).num_states() as usize;
                self.trace.einf_slacks.push((var.to_string(), slack));
                let others: Vec<String> = r
                    .tapes()
                    .iter()
                    .filter(|t| t.as_str() != var)
                    .cloned()
                    .collect();
                let guarded = r.length_guard(var, &others, slack)?;
                Ok(Compiled::Relation(mini(guarded.project(var)?)))
            }
        }
    }

    fn go(&mut self, f: &Formula, bound: &mut Vec<String>) -> Result<Compiled> {
        match f {
            Formula::Atom(name, vars) => self.atom(name, vars),
            Formula::Eq(x, y) => self.var_equality(x, y),
            Formula::Not(g) => {
                let v = self.go(g, bound)?;
                self.negate(v)
            }
            Formula::And(a, b) => {
                let va = self.go(a, bound)?;
                let vb = self.go(b, bound)?;
                self.conjoin(va, vb)
            }
            Formula::Or(a, b) => {
                let va = self.go(a, bound)?;
                let vb = self.go(b, bound)?;
                self.disjoin(va, vb)
            }
            Formula::Imp(a, b) => {
                let va = self.go(a, bound)?;
                let vb = self.go(b, bound)?;
                let na = self.negate(va)?;
                self.disjoin(na, vb)
            }
            Formula::Exists(x, g) => {
                self.check_rebind(x, bound)?;
                bound.push(x.clone());
                let v = self.go(g, bound)?;
                bound.pop();
                self.exists(x, v)
            }
            Formula::ExistsInf(x, g) => {
                self.check_rebind(x, bound)?;
                bound.push(x.clone());
                let v = self.go(g, bound)?;
                bound.pop();
                self.exists_inf(x, v)
            }
            Formula::Forall(x, g) => {
                self.check_rebind(x, bound)?;
                bound.push(x.clone());
                let v = self.go(g, bound)?;
                bound.pop();
                let nv = self.negate(v)?;
                let ex = self.exists(x, nv)?;
                self.negate(ex)
            }
        }
    }

    fn check_rebind(&self, x: &str, bound: &[String]) -> Result<()> {
        if bound.iter().any(|b| b == x) {
            return Err(Error::Rebind(x.to_string()));
        }
        Ok(())
    }
}

pub fn compile_with_trace(p: &Presentation, f: &Formula) -> Result<(Compiled, CompileTrace)> {
    let mut c = Compiler {
        p,
        trace: CompileTrace::default(),
        universes: Default::default(),
    };
    let v = c.go(f, &mut Vec::new())?;
    Ok((v, c.trace))
}

pub fn compile(p: &Presentation, f: &Formula) -> Result<Compiled> {
    compile_with_trace(p, f).map(|(v, _)| v)
}

/// Truth value of a sentence; formulas with free variables are rejected.
pub fn eval_sentence(p: &Presentation, f: &Formula) -> Result<bool> {
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(Error::FreeVariablePresent(v));
    }
    match compile(p, f)? {
        Compiled::Sentence(b) => Ok(b),
        Compiled::Relation(_) => unreachable!("closed formulas compile to truth values"),
    }
}

/// All satisfying assignments with every component of length at most
/// `max_len`, in length-lexicographic order of the underlying tuple words.
/// For sentences the variable list is empty and a true sentence yields one
/// empty row.
pub struct SolutionSet {
    pub vars: Vec<String>,
    pub rows: Vec<Vec<Word>>,
}

pub fn solutions(p: &Presentation, f: &Formula, max_len: usize) -> Result<SolutionSet> {
    match compile(p, f)? {
        Compiled::Sentence(b) => Ok(SolutionSet {
            vars: Vec::new(),
            rows: if b { vec![Vec::new()] } else { Vec::new() },
        }),
        Compiled::Relation(r) => {
            let alph = r.automaton().alphabet().clone();
            let dfa = trim(&determinize(r.automaton()));
            let rows = crate::automata::enumerate_llex(&dfa, max_len)
                .map(|w| deconvolve(&alph, &w))
                .collect();
            Ok(SolutionSet {
                vars: r.tapes().to_vec(),
                rows,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Reference evaluation by explicit enumeration
// ---------------------------------------------------------------------------

/// Slow evaluator used to cross-check compilation: quantifiers range over
/// explicitly enumerated domain words up to a sufficient length bound.
///
/// For `E x. g` with the other free variables fixed, any satisfying value
/// for `x` can be shortened below M + s + 1, where M is the longest fixed
/// component and s the deterministic state count for `g`: past position M
/// the run only pads the other tapes, so a longer witness revisits a state
/// there and the excursion can be cut. For `Einf x. g` there are infinitely
/// many witnesses exactly when one is longer than M + s (its tail then
/// pumps), and shrinking a witness loop by loop shows one then exists with
/// length at most M + 2s + 1.
pub struct ReferenceEvaluator<'a> {
    p: &'a Presentation,
    domain_words: Vec<Vec<Word>>,
    det_states: HashMap<Formula, usize>,
}

impl<'a> ReferenceEvaluator<'a> {
    pub fn new(p: &'a Presentation) -> ReferenceEvaluator<'a> {
        ReferenceEvaluator {
            p,
            domain_words: Vec::new(),
            det_states: HashMap::new(),
        }
    }

    fn domain_upto(&mut self, n: usize) -> Vec<Word> {
        while self.domain_words.len() <= n {
            let k = self.domain_words.len();
            let dfa = trim(&determinize(self.p.domain()));
            let words: Vec<Word> = crate::automata::enumerate_llex(&dfa, k)
                .filter(|w| w.len() == k)
                .map(|w| w.iter().map(|t| t[0]).collect())
                .collect();
            self.domain_words.push(words);
        }
        self.domain_words[..=n].concat()
    }

    fn states_for(&mut self, f: &Formula) -> Result<usize> {
        if let Some(&s) = self.det_states.get(f) {
            return Ok(s);
        }
        let s = match compile(self.p, f)? {
            Compiled::Relation(r) => determinize(r.automaton()).num_states() as usize,
            Compiled::Sentence(_) => 1,
        };
        self.det_states.insert(f.clone(), s);
        Ok(s)
    }

    fn longest_other(&self, f: &Formula, skip: &str, env: &BTreeMap<String, Word>) -> usize {
        f.free_vars()
            .iter()
            .filter(|v| v.as_str() != skip)
            .filter_map(|v| env.get(v))
            .map(|w| w.len())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&mut self, f: &Formula, env: &BTreeMap<String, Word>) -> Result<bool> {
        match f {
            Formula::Atom(name, vars) => {
                let machine = self.p.relation(name)?;
                let arity = machine.alphabet().arity();
                if arity != vars.len() {
                    return Err(Error::ArityMismatch {
                        name: name.clone(),
                        expected: arity,
                        got: vars.len(),
                    });
                }
                let mut comps = Vec::with_capacity(vars.len());
                for v in vars {
                    comps.push(
                        env.get(v)
                            .ok_or_else(|| Error::FreeVariablePresent(v.clone()))?
                            .clone(),
                    );
                }
                let w = convolve(machine.alphabet(), &comps);
                Ok(machine.accepts(&w))
            }
            Formula::Eq(x, y) => {
                let wx = env
                    .get(x)
                    .ok_or_else(|| Error::FreeVariablePresent(x.clone()))?;
                let wy = env
                    .get(y)
                    .ok_or_else(|| Error::FreeVariablePresent(y.clone()))?;
                Ok(wx == wy)
            }
            Formula::Not(g) => Ok(!self.eval(g, env)?),
            Formula::And(a, b) => Ok(self.eval(a, env)? && self.eval(b, env)?),
            Formula::Or(a, b) => Ok(self.eval(a, env)? || self.eval(b, env)?),
            Formula::Imp(a, b) => Ok(!self.eval(a, env)? || self.eval(b, env)?),
            Formula::Exists(x, g) => {
                if !g.free_vars().contains(x) {
                    return Ok(self.eval(g, env)? && !is_empty(self.p.domain()));
                }
                let bound = self.longest_other(g, x, env) + self.states_for(g)? + 1;
                let mut env = env.clone();
                for w in self.domain_upto(bound) {
                    env.insert(x.clone(), w);
                    if self.eval(g, &env)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::Forall(x, g) => {
                let negated = Formula::Not(g.clone());
                let inner = Formula::Exists(x.clone(), Box::new(negated));
                Ok(!self.eval(&inner, env)?)
            }
            Formula::ExistsInf(x, g) => {
                if !g.free_vars().contains(x) {
                    return Ok(self.eval(g, env)? && !is_finite(self.p.domain()));
                }
                let m = self.longest_other(g, x, env);
                let s = self.states_for(g)?;
                let mut env = env.clone();
                for w in self.domain_upto(m + 2 * s + 1) {
                    if w.len() <= m + s {
                        continue;
                    }
                    env.insert(x.clone(), w);
                    if self.eval(g, &env)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }
}

/// One-shot wrapper around [`ReferenceEvaluator`].
pub fn reference_eval(
    p: &Presentation,
    f: &Formula,
    env: &BTreeMap<String, Word>,
) -> Result<bool> {
    ReferenceEvaluator::new(p).eval(f, env)
}
