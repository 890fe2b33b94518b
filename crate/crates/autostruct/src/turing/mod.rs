//! Deterministic Turing machines and their step graphs as automatic
//! structures.
//!
//! A configuration is spelled as a single word: tape content left of the
//! head, then the state symbol, then the scanned cell and the rest of the
//! tape, with trailing blanks trimmed.  Under that spelling the one-step
//! relation of a machine is synchronous: outside a window of radius two
//! around the state symbol the two words agree letter by letter (the
//! alignment shifts by exactly one cell when the head moves, which the
//! window absorbs), and inside the window the transition table is
//! checked.  [`config_graph`] compiles that window automaton together
//! with the sets of halting (out-degree 0) and unstarted (in-degree 0)
//! configurations; [`check_reversible`] asks in first-order logic whether
//! every configuration has in- and out-degree at most one; and the
//! [`reduction`] machinery grows the step graph into a tagged chain
//! structure whose local shape tracks the machine's halting behaviour.

mod reduction;

pub use reduction::{
    build_ar, neighborhood_dot, probe_invariants, probe_presentation, BaseProbe, ProbeReport,
    ReductionGraph,
};

use std::collections::BTreeMap;

use crate::automata::{
    difference, minimize, Alphabet, Automaton, Builder, Label, TapeSym, Word,
};
use crate::error::{Error, Result};
use crate::logic::{eval_sentence, parse_formula};
use crate::presentation::Presentation;
use crate::relations::{universe, RegularRelation};

/// Head movement of a transition rule.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Move {
    Left,
    Right,
}

/// A deterministic one-tape Turing machine.
///
/// `tape` always contains the blank symbol and the input symbols `0` and
/// `1`; further symbols are collected from the rules.  `rules` is keyed
/// by (state, read symbol), which makes determinism structural; the
/// parser rejects duplicate keys.
#[derive(Clone, Debug)]
pub struct TmSpec {
    pub states: Vec<String>,
    pub initial: String,
    pub accept: String,
    pub blank: String,
    pub tape: Vec<String>,
    pub rules: BTreeMap<(String, String), (String, String, Move)>,
}

impl TmSpec {
    /// Structural well-formedness: known states, disjoint name spaces,
    /// no rules out of the accepting state.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidTm(msg));
        if self.states.is_empty() {
            return bad("no states declared".into());
        }
        for (i, s) in self.states.iter().enumerate() {
            if s.is_empty() || s.contains(|c: char| c.is_whitespace() || c == ',') || s == "_" {
                return bad(format!("invalid state name {s:?}"));
            }
            if self.states[..i].contains(s) {
                return bad(format!("duplicate state {s:?}"));
            }
        }
        for t in &self.tape {
            if t.is_empty() || t.contains(|c: char| c.is_whitespace() || c == ',') || t == "_" {
                return bad(format!("invalid tape symbol {t:?}"));
            }
            if self.states.contains(t) {
                return bad(format!("name {t:?} is both a state and a tape symbol"));
            }
        }
        let mut sorted = self.tape.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.tape.len() {
            return bad("duplicate tape symbol".into());
        }
        for name in [&self.blank, &"0".to_string(), &"1".to_string()] {
            if !self.tape.contains(name) {
                return bad(format!("tape alphabet must contain {name:?}"));
            }
        }
        if !self.states.contains(&self.initial) {
            return bad(format!("unknown initial state {:?}", self.initial));
        }
        if !self.states.contains(&self.accept) {
            return bad(format!("unknown accepting state {:?}", self.accept));
        }
        for ((q, a), (q2, b, _)) in &self.rules {
            if !self.states.contains(q) || !self.states.contains(q2) {
                return bad(format!("rule {q} {a} uses an undeclared state"));
            }
            if !self.tape.contains(a) || !self.tape.contains(b) {
                return bad(format!("rule {q} {a} uses an undeclared tape symbol"));
            }
            if *q == self.accept {
                return bad(format!("accepting state {q:?} has an outgoing rule"));
            }
        }
        Ok(())
    }

    /// Checks that the machine can only halt in the accepting state:
    /// every other state must have a rule for every tape symbol.
    pub fn accepting_halts_only(&self) -> Result<()> {
        for q in &self.states {
            if *q == self.accept {
                continue;
            }
            for a in &self.tape {
                if !self.rules.contains_key(&(q.clone(), a.clone())) {
                    return Err(Error::RejectingHaltState(format!(
                        "state {q} halts on symbol {a} without accepting"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Parse the line-oriented machine format: header lines `states:`,
/// `initial:`, `accept:`, `blank:`, then one rule `q a -> q' b R|L` per
/// line, closed by `end`.  Blank lines and `#` comments are skipped.
pub fn parse_tm(text: &str) -> Result<TmSpec> {
    let bad = |line: usize, msg: String| Error::InvalidTm(format!("line {line}: {msg}"));
    let mut states: Option<Vec<String>> = None;
    let mut initial: Option<String> = None;
    let mut accept: Option<String> = None;
    let mut blank: Option<String> = None;
    let mut rules: BTreeMap<(String, String), (String, String, Move)> = BTreeMap::new();
    let mut closed = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if closed {
            return Err(bad(line, "content after `end`".into()));
        }
        if t == "end" {
            closed = true;
            continue;
        }
        if let Some(rest) = t.strip_prefix("states:") {
            states = Some(rest.split_whitespace().map(String::from).collect());
        } else if let Some(rest) = t.strip_prefix("initial:") {
            initial = Some(rest.trim().to_string());
        } else if let Some(rest) = t.strip_prefix("accept:") {
            accept = Some(rest.trim().to_string());
        } else if let Some(rest) = t.strip_prefix("blank:") {
            blank = Some(rest.trim().to_string());
        } else if t.contains("->") {
            let mut halves = t.splitn(2, "->");
            let lhs: Vec<&str> = halves.next().unwrap().split_whitespace().collect();
            let rhs: Vec<&str> = halves.next().unwrap_or("").split_whitespace().collect();
            if lhs.len() != 2 || rhs.len() != 3 {
                return Err(bad(line, format!("malformed rule {t:?}")));
            }
            let mv = match rhs[2] {
                "R" => Move::Right,
                "L" => Move::Left,
                other => return Err(bad(line, format!("move must be R or L, got {other:?}"))),
            };
            let key = (lhs[0].to_string(), lhs[1].to_string());
            if rules
                .insert(key.clone(), (rhs[0].to_string(), rhs[1].to_string(), mv))
                .is_some()
            {
                return Err(bad(line, format!("duplicate rule for {} {}", key.0, key.1)));
            }
        } else {
            return Err(bad(line, format!("unrecognized line {t:?}")));
        }
    }
    if !closed {
        return Err(Error::InvalidTm("missing `end` line".into()));
    }
    let states = states.ok_or_else(|| Error::InvalidTm("missing `states:` line".into()))?;
    let initial = initial.ok_or_else(|| Error::InvalidTm("missing `initial:` line".into()))?;
    let accept = accept.ok_or_else(|| Error::InvalidTm("missing `accept:` line".into()))?;
    let blank = blank.ok_or_else(|| Error::InvalidTm("missing `blank:` line".into()))?;
    let mut tape: Vec<String> = vec![blank.clone(), "0".into(), "1".into()];
    for ((_, a), (_, b, _)) in &rules {
        tape.push(a.clone());
        tape.push(b.clone());
    }
    tape.sort();
    tape.dedup();
    let tm = TmSpec {
        states,
        initial,
        accept,
        blank,
        tape,
        rules,
    };
    tm.validate()?;
    Ok(tm)
}

/// Index-level view of a machine: configuration words are spelled over
/// `alphabet`, whose base lists the tape symbols first and the states
/// after them.  Used by both the step simulator and the automaton
/// constructions, so the two necessarily agree on the encoding.
#[derive(Clone)]
pub struct ConfigCoding {
    pub alphabet: Alphabet,
    tape_count: usize,
    blank: TapeSym,
    initial: TapeSym,
    accept: TapeSym,
    rules: BTreeMap<(TapeSym, TapeSym), (TapeSym, TapeSym, Move)>,
}

impl ConfigCoding {
    pub fn new(tm: &TmSpec) -> Result<ConfigCoding> {
        tm.validate()?;
        let mut names: Vec<String> = tm.tape.clone();
        names.extend(tm.states.iter().cloned());
        let alphabet = Alphabet::new(names)?;
        let sym = |n: &str| alphabet.base_index(n).unwrap();
        let rules = tm
            .rules
            .iter()
            .map(|((q, a), (q2, b, mv))| ((sym(q), sym(a)), (sym(q2), sym(b), *mv)))
            .collect();
        Ok(ConfigCoding {
            tape_count: tm.tape.len(),
            blank: sym(&tm.blank),
            initial: sym(&tm.initial),
            accept: sym(&tm.accept),
            rules,
            alphabet,
        })
    }

    pub fn is_state(&self, s: TapeSym) -> bool {
        (s as usize) >= self.tape_count && (s as usize) < self.alphabet.base_len()
    }

    pub fn blank(&self) -> TapeSym {
        self.blank
    }

    pub fn accept(&self) -> TapeSym {
        self.accept
    }

    fn tape_syms(&self) -> impl Iterator<Item = TapeSym> + '_ {
        (0..self.tape_count as u8).map(|s| s as TapeSym)
    }

    fn state_syms(&self) -> impl Iterator<Item = TapeSym> + '_ {
        (self.tape_count as u8..self.alphabet.base_len() as u8).map(|s| s as TapeSym)
    }

    /// The starting configuration on the given input word (over the
    /// input symbols): state symbol first, head on the first letter.
    pub fn initial_config(&self, input: &[TapeSym]) -> Word {
        let mut w = Vec::with_capacity(input.len() + 1);
        w.push(self.initial);
        w.extend_from_slice(input);
        w
    }

    /// Whether the word is a well-formed configuration: exactly one
    /// state symbol and no trailing blank.
    pub fn is_config(&self, w: &[TapeSym]) -> bool {
        w.iter().filter(|&&s| self.is_state(s)).count() == 1 && w.last() != Some(&self.blank)
    }

    /// One step of the machine, or `None` when the configuration halts
    /// (accepting state or missing rule) or is malformed.
    pub fn step(&self, c: &[TapeSym]) -> Option<Word> {
        if !self.is_config(c) {
            return None;
        }
        let i = c.iter().position(|&s| self.is_state(s)).unwrap();
        let q = c[i];
        let scanned = c.get(i + 1).copied().unwrap_or(self.blank);
        let &(q2, b, mv) = self.rules.get(&(q, scanned))?;
        let rest = if i + 2 <= c.len() { &c[i + 2..] } else { &[] };
        let mut out: Word;
        match mv {
            Move::Right => {
                out = c[..i].to_vec();
                out.push(b);
                out.push(q2);
                out.extend_from_slice(rest);
            }
            Move::Left if i == 0 => {
                out = vec![q2, self.blank, b];
                out.extend_from_slice(rest);
            }
            Move::Left => {
                out = c[..i - 1].to_vec();
                out.push(q2);
                out.push(c[i - 1]);
                out.push(b);
                out.extend_from_slice(rest);
            }
        }
        while out.last() == Some(&self.blank) {
            out.pop();
        }
        Some(out)
    }

    /// Runs the machine from `c` for at most `max_steps` steps and
    /// returns the number of steps taken if it halts within the budget.
    pub fn halts_within(&self, c: &Word, max_steps: usize) -> Option<usize> {
        let mut cur = c.clone();
        for n in 0..=max_steps {
            match self.step(&cur) {
                Some(next) => cur = next,
                None => return Some(n),
            }
        }
        None
    }
}

/// The language of well-formed configurations: exactly one state symbol,
/// no trailing blank.
fn config_domain(cc: &ConfigCoding) -> Automaton {
    let mut b = Builder::new(cc.alphabet.clone());
    let before = b.state();
    let after = b.state();
    let after_blank = b.state();
    b.set_final(after);
    let tape_mask: u64 = cc.tape_syms().map(|s| 1u64 << s).sum();
    let state_mask: u64 = cc.state_syms().map(|s| 1u64 << s).sum();
    let blank_bit = 1u64 << cc.blank;
    b.edge(before, Label::new([tape_mask]), before);
    b.edge(before, Label::new([state_mask]), after);
    b.edge(after, Label::new([blank_bit]), after_blank);
    b.edge(after, Label::new([tape_mask & !blank_bit]), after);
    b.edge(after_blank, Label::new([blank_bit]), after_blank);
    b.edge(after_blank, Label::new([tape_mask & !blank_bit]), after);
    minimize(&b.finish(before))
}

/// The one-step relation as a synchronous automaton.  Equality runs in a
/// diagonal loop before and after the rewrite window; the window itself
/// spells out, per transition rule, how the two or three cells around
/// the state symbol change, including the end-of-word cases (scanning an
/// implicit blank, trimming a trailing blank the rule wrote, and the
/// fresh blank a left move at the word start pulls in).
fn config_edges(cc: &ConfigCoding, domain: &Automaton) -> Result<Automaton> {
    let alph2 = cc.alphabet.with_arity(2);
    let pad = cc.alphabet.pad();
    let blank = cc.blank;
    let mut b = Builder::new(alph2);
    let start = b.state();
    let mid = b.state();
    let suffix_eq = b.state();
    let acc = b.state();
    b.set_final(suffix_eq);
    b.set_final(acc);
    for t in cc.tape_syms() {
        let diag = Label::new([1u64 << t, 1u64 << t]);
        b.edge(start, diag.clone(), mid);
        b.edge(mid, diag.clone(), mid);
        b.edge(suffix_eq, diag, suffix_eq);
    }
    // Delayed equality for left moves at the word start: the target is
    // one cell longer, so the source letters arrive one column late.
    let mut delay: BTreeMap<TapeSym, u32> = BTreeMap::new();
    for t in cc.tape_syms() {
        delay.insert(t, b.state());
    }
    for (&p, &dp) in &delay {
        for (&x, &dx) in &delay {
            b.edge(dp, Label::new([1u64 << x, 1u64 << p]), dx);
        }
        if p != blank {
            b.edge(dp, Label::new([1u64 << pad, 1u64 << p]), acc);
        }
    }
    // A chain of fresh states spelling the given window columns from
    // each anchor, ending in `to`.
    let window = |b: &mut Builder, anchors: &[u32], cols: &[(TapeSym, TapeSym)], to: u32| {
        let mut cur: Vec<u32> = anchors.to_vec();
        for (k, &(x, y)) in cols.iter().enumerate() {
            let label = Label::new([1u64 << x, 1u64 << y]);
            let next = if k + 1 == cols.len() { to } else { b.state() };
            for &a in &cur {
                b.edge(a, label.clone(), next);
            }
            cur = vec![next];
        }
    };
    let anywhere = [start, mid];
    let at_start = [start];
    for (&(q, a), &(q2, bw, mv)) in &cc.rules {
        match mv {
            Move::Right => {
                window(&mut b, &anywhere, &[(q, bw), (a, q2)], suffix_eq);
                if a == blank {
                    // Scanning the implicit blank past the word end.
                    window(&mut b, &anywhere, &[(q, bw), (pad, q2)], acc);
                }
            }
            Move::Left => {
                for c1 in cc.tape_syms() {
                    window(&mut b, &anywhere, &[(c1, q2), (q, c1), (a, bw)], suffix_eq);
                    if bw == blank {
                        // The written blank is trimmed at the word end.
                        window(&mut b, &anywhere, &[(c1, q2), (q, c1), (a, pad)], acc);
                    }
                    if a == blank {
                        if bw == blank {
                            window(&mut b, &anywhere, &[(c1, q2), (q, c1)], acc);
                        } else {
                            window(&mut b, &anywhere, &[(c1, q2), (q, c1), (pad, bw)], acc);
                        }
                    }
                }
                // Double trim: the head backs onto a blank while writing
                // a blank at the word end, so two cells disappear.
                if bw == blank {
                    window(&mut b, &anywhere, &[(blank, q2), (q, pad), (a, pad)], acc);
                    if a == blank {
                        window(&mut b, &anywhere, &[(blank, q2), (q, pad)], acc);
                    }
                }
                // Left move at the word start: a fresh blank appears and
                // the alignment shifts right by one.
                window(&mut b, &at_start, &[(q, q2), (a, blank)], delay[&bw]);
                if bw == blank {
                    window(&mut b, &at_start, &[(q, q2), (a, pad)], acc);
                }
                if a == blank {
                    if bw == blank {
                        window(&mut b, &at_start, &[(q, q2)], acc);
                    } else {
                        window(&mut b, &at_start, &[(q, q2), (pad, blank), (pad, bw)], acc);
                    }
                }
            }
        }
    }
    let raw = b.finish(start);
    let boxed = crate::automata::intersect(&raw, &universe(domain, 2)?)?;
    Ok(minimize(&boxed))
}

/// Compiles a machine's step graph: domain = all configurations, binary
/// `E` = one step, unary `halting` = out-degree 0, unary `unstarted` =
/// in-degree 0.
pub fn config_graph(tm: &TmSpec) -> Result<Presentation> {
    let cc = ConfigCoding::new(tm)?;
    let domain = config_domain(&cc);
    let e = config_edges(&cc, &domain)?;
    let rel = RegularRelation::new(vec!["x".into(), "y".into()], e.clone())?;
    let sources = rel.project("y")?;
    let targets = rel.project("x")?;
    let halting = minimize(&difference(&domain, sources.automaton())?);
    let unstarted = minimize(&difference(&domain, targets.automaton())?);
    let mut rels = BTreeMap::new();
    rels.insert("E".to_string(), e);
    rels.insert("halting".to_string(), halting);
    rels.insert("unstarted".to_string(), unstarted);
    Ok(Presentation::new(cc.alphabet.clone(), domain, rels))
}

/// Whether every vertex of the presentation's binary relation `E` has
/// out-degree and in-degree at most one, decided by sentence evaluation.
pub fn check_reversible(p: &Presentation) -> Result<bool> {
    let fwd = parse_formula("A x. A y. A z. ((E(x,y) & E(x,z)) -> (y = z))")?;
    let bwd = parse_formula("A x. A y. A z. ((E(y,x) & E(z,x)) -> (y = z))")?;
    Ok(eval_sentence(p, &fwd)? && eval_sentence(p, &bwd)?)
}

/// All words `v` with `(u, v)` in the binary relation recognized by `m`,
/// restricted to `|v| <= cap`, in length-lexicographic order.  Walks the
/// convolution column by column, driving the first tape with `u`.
pub(crate) fn image(m: &Automaton, u: &[TapeSym], cap: usize) -> Vec<Word> {
    assert_eq!(m.alphabet().arity(), 2, "image needs a binary relation");
    let pad = m.alphabet().pad();
    let live = crate::automata::coreachable(m);
    let mut out: Vec<Word> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    // (state, columns consumed, target word so far, target finished)
    let mut stack: Vec<(u32, usize, Word, bool)> = vec![(m.initial(), 0, Word::new(), false)];
    while let Some((s, pos, v, ended)) = stack.pop() {
        if m.is_final(s) && pos >= u.len() && seen.insert(v.clone()) {
            out.push(v.clone());
        }
        let us = if pos < u.len() { u[pos] } else { pad };
        for (l, t) in m.edges_from(s) {
            if !live[*t as usize] || l.mask(0) & (1u64 << us) == 0 {
                continue;
            }
            let mut m2 = l.mask(1);
            while m2 != 0 {
                let bsym = m2.trailing_zeros() as TapeSym;
                m2 &= m2 - 1;
                if bsym == pad {
                    if pos < u.len() {
                        stack.push((*t, pos + 1, v.clone(), true));
                    }
                } else if !ended && v.len() < cap {
                    let mut v2 = v.clone();
                    v2.push(bsym);
                    stack.push((*t, pos + 1, v2, false));
                }
            }
        }
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

/// The same relation with its two tapes exchanged.
pub(crate) fn swap_tapes(m: &Automaton) -> Automaton {
    assert_eq!(m.alphabet().arity(), 2);
    let pad = m.alphabet().pad();
    let edges = (0..m.num_states())
        .map(|s| {
            m.edges_from(s)
                .iter()
                .map(|(l, t)| (Label::new([l.mask(1), l.mask(0)]).normalize(pad), *t))
                .collect()
        })
        .collect();
    Automaton {
        alphabet: m.alphabet().clone(),
        initial: m.initial(),
        finals: (0..m.num_states()).map(|s| m.is_final(s)).collect(),
        edges,
        deterministic: false,
        complete: false,
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    /// Accepts any input in one step.
    pub const ALWAYS_ACCEPT: &str = "\
states: q0 qa
initial: q0
accept: qa
blank: B
q0 0 -> qa 0 R
q0 1 -> qa 1 R
q0 B -> qa B R
end
";

    /// Accepts any input in two steps.
    pub const ALWAYS_ACCEPT_SLOW: &str = "\
states: q0 q1 qa
initial: q0
accept: qa
blank: B
q0 0 -> q1 0 R
q0 1 -> q1 1 R
q0 B -> q1 B R
q1 0 -> qa 0 R
q1 1 -> qa 1 R
q1 B -> qa B R
end
";

    /// Runs right forever.
    pub const ALWAYS_LOOP: &str = "\
states: q0 qa
initial: q0
accept: qa
blank: B
q0 0 -> q0 0 R
q0 1 -> q0 1 R
q0 B -> q0 B R
end
";

    /// Two distinct states write the same symbol and enter the same
    /// state, so some configurations have two predecessors.
    pub const IRREVERSIBLE: &str = "\
states: p r s qa
initial: p
accept: qa
blank: B
p 0 -> s 0 R
p 1 -> s 1 R
p B -> s B R
r 0 -> s 0 R
r 1 -> qa 1 R
r B -> qa B R
s 0 -> qa 0 R
s 1 -> qa 1 R
s B -> qa B R
end
";

    /// Exercises right moves, left moves, blank writes (trimming), the
    /// left word edge, and implicit blank scans.
    pub const BUSY: &str = "\
states: q0 q1 q2 qa
initial: q0
accept: qa
blank: B
q0 0 -> q1 1 R
q0 1 -> q0 0 R
q0 B -> q2 B L
q1 0 -> q0 B L
q1 1 -> q2 1 L
q1 B -> q1 1 R
q2 0 -> qa 0 R
q2 1 -> q0 1 L
q2 B -> qa B R
end
";
}
