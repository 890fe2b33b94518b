//! Presentations of structures: a regular domain plus named regular
//! relations, with a line-oriented text format, structural validation, and
//! the componentwise product construction.
//!
//! Format, by example:
//!
//! ```text
//! # full-line comments only: '#' may itself be an alphabet symbol
//! alphabet: 0 1
//! domain regex: (0|1)*1|()
//! relation le arity 2 automaton:
//! states 2
//! initial 0
//! final 0 1
//! 0 0,0 0
//! 0 _,1 1
//! 1 _,1 1
//! end
//! ```

use crate::automata::det::eliminate_epsilon;
use crate::automata::{
    complement, determinize, difference, intersect, is_empty, minimize, shortest_word, trim,
    Alphabet, Automaton, Label, Mask, Word, MAX_BASE,
};
use crate::error::{Error, Result};
use crate::relations::{deconvolve, padding_valid_all, universe};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Relation names with their arities, in name order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature(pub Vec<(String, usize)>);

/// A structure given by automata: regular domain, one synchronous
/// automaton per relation.
#[derive(Clone, Debug)]
pub struct Presentation {
    alphabet: Alphabet,
    domain: Automaton,
    relations: BTreeMap<String, Automaton>,
}

impl Presentation {
    pub fn new(
        alphabet: Alphabet,
        domain: Automaton,
        relations: BTreeMap<String, Automaton>,
    ) -> Presentation {
        Presentation {
            alphabet,
            domain,
            relations,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn domain(&self) -> &Automaton {
        &self.domain
    }

    pub fn relation(&self, name: &str) -> Result<&Automaton> {
        self.relations
            .get(name)
            .ok_or_else(|| Error::UnknownRelation(name.to_string()))
    }

    pub fn relation_names(&self) -> Vec<String> {
        self.relations.keys().cloned().collect()
    }

    pub fn relations(&self) -> &BTreeMap<String, Automaton> {
        &self.relations
    }

    pub fn signature(&self) -> Signature {
        Signature(
            self.relations
                .iter()
                .map(|(n, a)| (n.clone(), a.alphabet().arity()))
                .collect(),
        )
    }
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

// ---------------------------------------------------------------------------
// Regular expressions over declared symbols
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Sym(u8),
    Bar,
    Star,
    LPar,
    RPar,
}

fn regex_tokens(alph: &Alphabet, src: &str, line: usize) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    'outer: while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        // Longest declared-symbol match wins over operator reading.
        let mut best: Option<(usize, u8)> = None;
        for (idx, name) in alph.base_names().iter().enumerate() {
            if src[i..].starts_with(name.as_str())
                && best.map_or(true, |(len, _)| name.len() > len)
            {
                best = Some((name.len(), idx as u8));
            }
        }
        if let Some((len, idx)) = best {
            toks.push(Tok::Sym(idx));
            i += len;
            continue 'outer;
        }
        let t = match bytes[i] {
            b'|' => Tok::Bar,
            b'*' => Tok::Star,
            b'(' => Tok::LPar,
            b')' => Tok::RPar,
            c => {
                return Err(syntax(
                    line,
                    i + 1,
                    format!("unexpected character '{}' in regex", c as char),
                ))
            }
        };
        toks.push(t);
        i += 1;
    }
    Ok(toks)
}

/// Thompson-style construction into an ε-NFA, then ε-elimination and
/// minimization.
struct RegexBuilder {
    edges: Vec<Vec<(Label, u32)>>,
    eps: Vec<Vec<u32>>,
}

impl RegexBuilder {
    fn state(&mut self) -> u32 {
        self.edges.push(Vec::new());
        self.eps.push(Vec::new());
        (self.edges.len() - 1) as u32
    }

    fn parse_alt(&mut self, toks: &[Tok], pos: &mut usize, line: usize) -> Result<(u32, u32)> {
        let first = self.parse_concat(toks, pos, line)?;
        let mut parts = vec![first];
        while toks.get(*pos) == Some(&Tok::Bar) {
            *pos += 1;
            parts.push(self.parse_concat(toks, pos, line)?);
        }
        if parts.len() == 1 {
            return Ok(parts.pop().expect("one part"));
        }
        let s = self.state();
        let t = self.state();
        for (ps, pt) in parts {
            self.eps[s as usize].push(ps);
            self.eps[pt as usize].push(t);
        }
        Ok((s, t))
    }

    fn parse_concat(&mut self, toks: &[Tok], pos: &mut usize, line: usize) -> Result<(u32, u32)> {
        let mut frags = Vec::new();
        loop {
            match toks.get(*pos) {
                Some(Tok::Sym(_)) | Some(Tok::LPar) => {
                    frags.push(self.parse_star(toks, pos, line)?)
                }
                _ => break,
            }
        }
        if frags.is_empty() {
            let s = self.state();
            let t = self.state();
            self.eps[s as usize].push(t);
            return Ok((s, t));
        }
        let mut it = frags.into_iter();
        let (s, mut acc) = it.next().expect("nonempty");
        for (ns, nt) in it {
            self.eps[acc as usize].push(ns);
            acc = nt;
        }
        Ok((s, acc))
    }

    fn parse_star(&mut self, toks: &[Tok], pos: &mut usize, line: usize) -> Result<(u32, u32)> {
        let mut frag = self.parse_atom(toks, pos, line)?;
        while toks.get(*pos) == Some(&Tok::Star) {
            *pos += 1;
            let s = self.state();
            let t = self.state();
            let (fs, ft) = frag;
            self.eps[s as usize].push(fs);
            self.eps[s as usize].push(t);
            self.eps[ft as usize].push(t);
            self.eps[ft as usize].push(fs);
            frag = (s, t);
        }
        Ok(frag)
    }

    fn parse_atom(&mut self, toks: &[Tok], pos: &mut usize, line: usize) -> Result<(u32, u32)> {
        match toks.get(*pos) {
            Some(Tok::Sym(c)) => {
                *pos += 1;
                let s = self.state();
                let t = self.state();
                self.edges[s as usize].push((Label::new([1u64 << c]), t));
                Ok((s, t))
            }
            Some(Tok::LPar) => {
                *pos += 1;
                let frag = self.parse_alt(toks, pos, line)?;
                if toks.get(*pos) != Some(&Tok::RPar) {
                    return Err(syntax(line, 0, "unclosed '(' in regex"));
                }
                *pos += 1;
                Ok(frag)
            }
            _ => Err(syntax(line, 0, "expected symbol or '(' in regex")),
        }
    }
}

pub fn regex_to_automaton(alph: &Alphabet, src: &str, line: usize) -> Result<Automaton> {
    assert_eq!(alph.arity(), 1);
    let toks = regex_tokens(alph, src, line)?;
    let mut b = RegexBuilder {
        edges: Vec::new(),
        eps: Vec::new(),
    };
    let mut pos = 0;
    let (start, acc) = b.parse_alt(&toks, &mut pos, line)?;
    if pos != toks.len() {
        return Err(syntax(line, 0, "trailing tokens in regex"));
    }
    let mut finals = vec![false; b.edges.len()];
    finals[acc as usize] = true;
    let nfa = eliminate_epsilon(alph, start, finals, b.edges, &b.eps);
    Ok(minimize(&nfa))
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

fn parse_block(
    lines: &[(usize, &str)],
    cursor: &mut usize,
    alph: &Alphabet,
) -> Result<Automaton> {
    let next = |cursor: &mut usize| -> Result<(usize, &str)> {
        let item = lines
            .get(*cursor)
            .copied()
            .ok_or_else(|| syntax(lines.last().map_or(0, |l| l.0), 0, "unexpected end of file"))?;
        *cursor += 1;
        Ok(item)
    };

    let (ln, line) = next(cursor)?;
    let states: usize = line
        .strip_prefix("states ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| syntax(ln, 1, "expected 'states <count>'"))?;
    if states == 0 {
        return Err(syntax(ln, 1, "automaton needs at least one state"));
    }

    let (ln, line) = next(cursor)?;
    let initial: u32 = line
        .strip_prefix("initial ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| syntax(ln, 1, "expected 'initial <state>'"))?;
    if initial as usize >= states {
        return Err(syntax(ln, 1, "initial state out of range"));
    }

    let (ln, line) = next(cursor)?;
    let finals_str = line
        .strip_prefix("final")
        .ok_or_else(|| syntax(ln, 1, "expected 'final [states...]'"))?;
    let mut finals = vec![false; states];
    for tok in finals_str.split_whitespace() {
        let q: usize = tok
            .parse()
            .map_err(|_| syntax(ln, 1, format!("bad final state '{tok}'")))?;
        if q >= states {
            return Err(syntax(ln, 1, "final state out of range"));
        }
        finals[q] = true;
    }

    let mut edges: Vec<Vec<(Label, u32)>> = vec![Vec::new(); states];
    loop {
        let (ln, line) = next(cursor)?;
        if line == "end" {
            break;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(syntax(ln, 1, "expected '<from> <symbol> <to>'"));
        }
        let from: usize = toks[0]
            .parse()
            .map_err(|_| syntax(ln, 1, format!("bad state '{}'", toks[0])))?;
        let to: usize = toks[2]
            .parse()
            .map_err(|_| syntax(ln, 1, format!("bad state '{}'", toks[2])))?;
        if from >= states || to >= states {
            return Err(syntax(ln, 1, "transition endpoint out of range"));
        }
        let sym = alph.parse_sym(toks[1])?;
        edges[from].push((Label::from_sym(&sym), to as u32));
    }

    let mut b = crate::automata::Builder::new(alph.clone());
    for _ in 0..states {
        b.state();
    }
    for (q, f) in finals.iter().enumerate() {
        if *f {
            b.set_final(q as u32);
        }
    }
    for (q, out) in edges.into_iter().enumerate() {
        for (l, t) in out {
            b.edge(q as u32, l, t);
        }
    }
    Ok(b.finish(initial))
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let mut cursor = 0usize;

    let (ln, line) = *lines
        .first()
        .ok_or_else(|| syntax(1, 1, "empty presentation"))?;
    let names = line
        .strip_prefix("alphabet:")
        .ok_or_else(|| syntax(ln, 1, "expected 'alphabet: ...'"))?;
    let alphabet = Alphabet::new(names.split_whitespace().collect::<Vec<_>>())?;
    cursor += 1;

    let (ln, line) = *lines
        .get(cursor)
        .ok_or_else(|| syntax(ln, 1, "expected domain declaration"))?;
    cursor += 1;
    let domain = if let Some(re) = line.strip_prefix("domain regex:") {
        regex_to_automaton(&alphabet, re, ln)?
    } else if line == "domain automaton:" {
        parse_block(&lines, &mut cursor, &alphabet)?
    } else {
        return Err(syntax(ln, 1, "expected 'domain regex:' or 'domain automaton:'"));
    };

    let mut relations = BTreeMap::new();
    while cursor < lines.len() {
        let (ln, line) = lines[cursor];
        cursor += 1;
        let rest = line
            .strip_prefix("relation ")
            .ok_or_else(|| syntax(ln, 1, "expected 'relation <name> arity <k> automaton:'"))?;
        let toks: Vec<&str> = rest.split_whitespace().collect();
        if toks.len() != 4 || toks[1] != "arity" || toks[3] != "automaton:" {
            return Err(syntax(ln, 1, "expected 'relation <name> arity <k> automaton:'"));
        }
        let name = toks[0].to_string();
        let arity: usize = toks[2]
            .parse()
            .map_err(|_| syntax(ln, 1, format!("bad arity '{}'", toks[2])))?;
        if arity == 0 {
            return Err(syntax(ln, 1, "relation arity must be at least 1"));
        }
        if relations.contains_key(&name) {
            return Err(syntax(ln, 1, format!("duplicate relation '{name}'")));
        }
        let machine = parse_block(&lines, &mut cursor, &alphabet.with_arity(arity))?;
        relations.insert(name, machine);
    }

    Ok(Presentation {
        alphabet,
        domain,
        relations,
    })
}

fn write_block(out: &mut String, m: &Automaton) {
    let canon = trim(&minimize(m));
    let pad = canon.alphabet().pad();
    let _ = writeln!(out, "states {}", canon.num_states());
    let _ = writeln!(out, "initial {}", canon.initial());
    let finals: Vec<String> = (0..canon.num_states())
        .filter(|&q| canon.is_final(q))
        .map(|q| q.to_string())
        .collect();
    if finals.is_empty() {
        out.push_str("final\n");
    } else {
        let _ = writeln!(out, "final {}", finals.join(" "));
    }
    for q in 0..canon.num_states() {
        for (label, t) in canon.edges_from(q) {
            for sym in label.syms(pad) {
                let _ = writeln!(
                    out,
                    "{} {} {}",
                    q,
                    canon.alphabet().format_sym(&sym),
                    t
                );
            }
        }
    }
    out.push_str("end\n");
}

pub fn serialize_presentation(p: &Presentation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "alphabet: {}", p.alphabet.base_names().join(" "));
    out.push_str("domain automaton:\n");
    write_block(&mut out, &p.domain);
    for (name, m) in &p.relations {
        let _ = writeln!(
            out,
            "relation {} arity {} automaton:",
            name,
            m.alphabet().arity()
        );
        write_block(&mut out, m);
    }
    out
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IssueKind {
    EmptyDomain,
    PaddingViolation,
    NotInDomain,
}

#[derive(Clone, Debug)]
pub struct ValidationIssue {
    pub kind: IssueKind,
    pub relation: Option<String>,
    /// Component words of one offending tuple, when available.
    pub witness: Vec<String>,
}

impl std::fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let what = match self.kind {
            IssueKind::EmptyDomain => "domain is empty",
            IssueKind::PaddingViolation => "padding discipline violated",
            IssueKind::NotInDomain => "tuple outside domain power",
        };
        match &self.relation {
            Some(r) => write!(f, "relation {r}: {what}")?,
            None => write!(f, "{what}")?,
        }
        if !self.witness.is_empty() {
            write!(f, " (witness: ({}))", self.witness.join(", "))?;
        }
        Ok(())
    }
}

/// Structural checks: non-empty domain; every relation padding-valid and
/// contained in the matching power of the domain. Violations are reported,
/// not raised.
pub fn validate(p: &Presentation) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    if is_empty(&p.domain) {
        issues.push(ValidationIssue {
            kind: IssueKind::EmptyDomain,
            relation: None,
            witness: Vec::new(),
        });
    }
    for (name, m) in &p.relations {
        let alph = m.alphabet();
        let witness_of = |bad: &Automaton| -> Vec<String> {
            shortest_word(bad)
                .map(|w| {
                    deconvolve(alph, &w)
                        .iter()
                        .map(|c| p.alphabet.format_word(c))
                        .collect()
                })
                .unwrap_or_default()
        };
        match padding_valid_all(alph) {
            Ok(valid) => {
                let bad = intersect(m, &complement(&valid)).expect("same alphabet");
                if !is_empty(&bad) {
                    issues.push(ValidationIssue {
                        kind: IssueKind::PaddingViolation,
                        relation: Some(name.clone()),
                        witness: witness_of(&bad),
                    });
                }
            }
            Err(_) => unreachable!("validity machine construction is total"),
        }
        if is_empty(&p.domain) {
            continue;
        }
        let power = universe(&p.domain, alph.arity()).expect("same alphabet");
        let bad = intersect(m, &complement(&power)).expect("same alphabet");
        if !is_empty(&bad) {
            issues.push(ValidationIssue {
                kind: IssueKind::NotInDomain,
                relation: Some(name.clone()),
                witness: witness_of(&bad),
            });
        }
    }
    issues
}

// ---------------------------------------------------------------------------
// Componentwise product
// ---------------------------------------------------------------------------

/// Index of the pair symbol (i, j) in the flattened pair alphabet, where
/// i ≤ P and j ≤ Q with P, Q standing for the left and right padding; the
/// all-padding pair is last and excluded, so indices are contiguous.
fn pair_idx(i: usize, j: usize, q_vals: usize) -> usize {
    i * q_vals + j
}

fn pair_name(left: Option<&str>, right: Option<&str>) -> String {
    format!(
        "{}+{}",
        left.unwrap_or("_"),
        right.unwrap_or("_")
    )
}

/// Flattened word for the element pair (u, v) of a product presentation.
pub fn pair_encode(p_alph: &Alphabet, q_alph: &Alphabet, pair_alph: &Alphabet, u: &Word, v: &Word) -> Word {
    let q_vals = q_alph.base_len() + 1;
    let len = u.len().max(v.len());
    (0..len)
        .map(|k| {
            let i = u.get(k).map_or(p_alph.base_len(), |&c| c as usize);
            let j = v.get(k).map_or(q_alph.base_len(), |&c| c as usize);
            debug_assert!(pair_idx(i, j, q_vals) < pair_alph.base_len());
            pair_idx(i, j, q_vals) as u8
        })
        .collect()
}

/// Expand a mask over one side's values (including its padding) to the
/// mask of pair symbols whose projection to that side lies in the mask.
/// `left` chooses the side; the pair-alphabet padding bit is included
/// exactly when the side's padding is.
fn expand_mask(m: Mask, left: bool, p_vals: usize, q_vals: usize) -> Mask {
    let pair_count = p_vals * q_vals - 1;
    let mut out: Mask = 0;
    for i in 0..p_vals {
        for j in 0..q_vals {
            if i == p_vals - 1 && j == q_vals - 1 {
                continue;
            }
            let side = if left { i } else { j };
            if m & (1u64 << side) != 0 {
                out |= 1u64 << pair_idx(i, j, q_vals);
            }
        }
    }
    let side_pad = if left { p_vals - 1 } else { q_vals - 1 };
    if m & (1u64 << side_pad) != 0 {
        out |= 1u64 << pair_count;
    }
    out
}

/// Run `m` (over one factor's alphabet, any arity) on the chosen side of
/// the pair alphabet: consume while that side is live, then require
/// acceptance and tolerate the other side running on.
fn lift_side(m: &Automaton, pair_alph: &Alphabet, left: bool, p_vals: usize, q_vals: usize) -> Automaton {
    let arity = m.alphabet().arity();
    let alph = pair_alph.with_arity(arity);
    let pad = alph.pad();
    let side_pad_mask: Mask = 1u64 << (if left { p_vals - 1 } else { q_vals - 1 });
    let ended_step = Label::new(
        std::iter::repeat(expand_mask(side_pad_mask, left, p_vals, q_vals)).take(arity),
    )
    .normalize(pad);
    let side_done_box = ended_step.clone();
    let n = m.num_states() as usize;
    let ended = n as u32;
    let mut edges: Vec<Vec<(Label, u32)>> = Vec::with_capacity(n + 1);
    let mut finals = Vec::with_capacity(n + 1);
    for s in 0..n {
        let mut out = Vec::new();
        for (l, t) in m.edges_from(s as u32) {
            let wide = Label::new(
                (0..arity).map(|k| expand_mask(l.mask(k), left, p_vals, q_vals)),
            );
            // The region where this side is entirely padded belongs to the
            // ended state, not to the factor machine.
            for part in wide.subtract(&side_done_box) {
                let part = part.normalize(pad);
                if !part.is_empty(pad) {
                    out.push((part, *t));
                }
            }
        }
        if m.is_final(s as u32) && !ended_step.is_empty(pad) {
            out.push((ended_step.clone(), ended));
        }
        edges.push(out);
        finals.push(m.is_final(s as u32));
    }
    let mut tail = Vec::new();
    if !ended_step.is_empty(pad) {
        tail.push((ended_step.clone(), ended));
    }
    edges.push(tail);
    finals.push(true);
    Automaton {
        alphabet: alph,
        initial: m.initial(),
        finals,
        edges,
        deterministic: false,
        complete: false,
    }
}

/// The componentwise product: elements are flattened convolutions of one
/// element from each factor; every relation holds exactly when it holds in
/// both factors on the projections.
pub fn product_presentation(p: &Presentation, q: &Presentation) -> Result<Presentation> {
    if p.signature() != q.signature() {
        return Err(Error::SignatureMismatch(format!(
            "{:?} vs {:?}",
            p.signature(),
            q.signature()
        )));
    }
    let p_vals = p.alphabet.base_len() + 1;
    let q_vals = q.alphabet.base_len() + 1;
    let pair_count = p_vals * q_vals - 1;
    if pair_count > MAX_BASE {
        return Err(Error::LimitExceeded(format!(
            "product alphabet needs {pair_count} symbols"
        )));
    }
    let mut names = Vec::with_capacity(pair_count);
    for i in 0..p_vals {
        for j in 0..q_vals {
            if i == p_vals - 1 && j == q_vals - 1 {
                continue;
            }
            names.push(pair_name(
                if i < p_vals - 1 {
                    Some(p.alphabet.base_names()[i].as_str())
                } else {
                    None
                },
                if j < q_vals - 1 {
                    Some(q.alphabet.base_names()[j].as_str())
                } else {
                    None
                },
            ));
        }
    }
    let pair_alph = Alphabet::new(names)?;

    let domain = minimize(&intersect(
        &lift_side(&p.domain, &pair_alph, true, p_vals, q_vals),
        &lift_side(&q.domain, &pair_alph, false, p_vals, q_vals),
    )?);

    let mut relations = BTreeMap::new();
    for (name, mp) in &p.relations {
        let mq = q.relations.get(name).expect("signatures match");
        let lifted = intersect(
            &lift_side(mp, &pair_alph, true, p_vals, q_vals),
            &lift_side(mq, &pair_alph, false, p_vals, q_vals),
        )?;
        relations.insert(name.clone(), minimize(&lifted));
    }

    Ok(Presentation {
        alphabet: pair_alph,
        domain,
        relations,
    })
}


/// Project one side out of a machine over a pair alphabet: every symbol is
/// relabelled to its component on that side, runs may finish early where
/// only the other side kept going, and the result is cut down to
/// well-formed convolutions.
fn unlift_side(
    m: &Automaton,
    side_alph: &Alphabet,
    left: bool,
    p_vals: usize,
    q_vals: usize,
) -> Result<Automaton> {
    let arity = m.alphabet().arity();
    let out_alph = side_alph.with_arity(arity);
    let pair_pad = m.alphabet().pad() as usize;
    let side_vals = if left { p_vals } else { q_vals };
    let side_of = |idx: usize| -> usize {
        if idx == pair_pad {
            side_vals - 1
        } else if left {
            idx / q_vals
        } else {
            idx % q_vals
        }
    };
    let mut bit: Vec<u64> = Vec::with_capacity(pair_pad + 1);
    let mut side_done: Mask = 0;
    for idx in 0..=pair_pad {
        let c = side_of(idx);
        bit.push(1u64 << c);
        if c == side_vals - 1 {
            side_done |= 1u64 << idx;
        }
    }
    let map_mask = |mask: Mask| -> Mask {
        let mut out = 0u64;
        let mut rest = mask;
        while rest != 0 {
            out |= bit[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        out
    };

    // Acceptance must survive the tail where this side reads nothing more:
    // close the finals backward along edges that admit a column in which
    // every tape is already finished on this side.
    let n = m.num_states() as usize;
    let pair_pad_bit: Mask = 1u64 << pair_pad;
    let mut closed: Vec<bool> = (0..n).map(|s| m.is_final(s as u32)).collect();
    loop {
        let mut changed = false;
        for s in 0..n {
            if closed[s] {
                continue;
            }
            for (l, t) in m.edges_from(s as u32) {
                if !closed[*t as usize] {
                    continue;
                }
                if (0..arity).all(|k| l.mask(k) & side_done != 0)
                    && (0..arity).any(|k| l.mask(k) & side_done & !pair_pad_bit != 0)
                {
                    closed[s] = true;
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let out_pad = out_alph.pad();
    let mut edges: Vec<Vec<(Label, u32)>> = Vec::with_capacity(n);
    for s in 0..n {
        let mut out = Vec::new();
        for (l, t) in m.edges_from(s as u32) {
            let lab = Label::new((0..arity).map(|k| map_mask(l.mask(k)))).normalize(out_pad);
            if !lab.is_empty(out_pad) {
                out.push((lab, *t));
            }
        }
        edges.push(out);
    }
    let projected = Automaton {
        alphabet: out_alph.clone(),
        initial: m.initial(),
        finals: closed,
        edges,
        deterministic: false,
        complete: false,
    };
    Ok(minimize(&intersect(&projected, &padding_valid_all(&out_alph)?)?))
}

fn try_factors(
    p: &Presentation,
    left_alph: &Alphabet,
    right_alph: &Alphabet,
    p_vals: usize,
    q_vals: usize,
) -> Option<(Presentation, Presentation)> {
    let side = |alph: &Alphabet, left: bool| -> Option<Presentation> {
        let domain = unlift_side(&p.domain, alph, left, p_vals, q_vals).ok()?;
        let mut relations = BTreeMap::new();
        for (name, m) in &p.relations {
            relations.insert(name.clone(), unlift_side(m, alph, left, p_vals, q_vals).ok()?);
        }
        Some(Presentation {
            alphabet: alph.clone(),
            domain,
            relations,
        })
    };
    let pl = side(left_alph, true)?;
    let pr = side(right_alph, false)?;
    // Certify, for the domain and every relation, that the original
    // machine accepts exactly the pairings of its two projections. Only
    // the lifted projections are determinized — they stay close to the
    // factor machines in size — so certification never determinizes
    // anything as large as the original.
    let certified = |m: &Automaton, ml: &Automaton, mr: &Automaton| -> Option<bool> {
        let dl = determinize(&lift_side(ml, &p.alphabet, true, p_vals, q_vals));
        let dr = determinize(&lift_side(mr, &p.alphabet, false, p_vals, q_vals));
        let both = intersect(&dl, &dr).ok()?;
        Some(
            is_empty(&difference(m, &dl).ok()?)
                && is_empty(&difference(m, &dr).ok()?)
                && is_empty(&difference(&both, m).ok()?),
        )
    };
    if !certified(&p.domain, &pl.domain, &pr.domain)? {
        return None;
    }
    for (name, m) in &p.relations {
        if !certified(m, pl.relations.get(name)?, pr.relations.get(name)?)? {
            return None;
        }
    }
    Some((pl, pr))
}

/// Recognize a presentation as a componentwise product of two factors.
///
/// Candidate pair structures are read off the symbol-name grid; a
/// candidate is accepted only after every machine compares language-equal
/// with the pairing of its two projections, so a successful split
/// certifies direct-product structure.
pub fn factor_product(p: &Presentation) -> Option<(Presentation, Presentation)> {
    let names = p.alphabet.base_names();
    let pairs = names.len() + 1;
    for p_vals in 2..pairs {
        if pairs % p_vals != 0 {
            continue;
        }
        let q_vals = pairs / p_vals;
        if q_vals < 2 {
            continue;
        }
        let idx = |i: usize, j: usize| i * q_vals + j;
        'split: for (k, _) in names[0].match_indices('+') {
            let l0 = &names[0][..k];
            let r0 = &names[0][k + 1..];
            let mut ls: Vec<&str> = Vec::with_capacity(p_vals);
            let mut rs: Vec<&str> = Vec::with_capacity(q_vals);
            for j in 0..q_vals {
                let nm = names[idx(0, j)].as_str();
                if nm.len() < l0.len() + 2
                    || !nm.starts_with(l0)
                    || nm.as_bytes()[l0.len()] != b'+'
                {
                    continue 'split;
                }
                rs.push(&nm[l0.len() + 1..]);
            }
            for i in 0..p_vals {
                let nm = names[idx(i, 0)].as_str();
                if nm.len() < r0.len() + 2
                    || !nm.ends_with(r0)
                    || nm.as_bytes()[nm.len() - r0.len() - 1] != b'+'
                {
                    continue 'split;
                }
                ls.push(&nm[..nm.len() - r0.len() - 1]);
            }
            if ls[p_vals - 1] != "_" || rs[q_vals - 1] != "_" {
                continue;
            }
            for i in 0..p_vals {
                for j in 0..q_vals {
                    if i == p_vals - 1 && j == q_vals - 1 {
                        continue;
                    }
                    if names[idx(i, j)] != format!("{}+{}", ls[i], rs[j]) {
                        continue 'split;
                    }
                }
            }
            let left_names: Vec<String> = ls[..p_vals - 1].iter().map(|s| s.to_string()).collect();
            let right_names: Vec<String> = rs[..q_vals - 1].iter().map(|s| s.to_string()).collect();
            let (Ok(left_alph), Ok(right_alph)) =
                (Alphabet::new(left_names), Alphabet::new(right_names))
            else {
                continue;
            };
            if let Some(split) = try_factors(p, &left_alph, &right_alph, p_vals, q_vals) {
                return Some(split);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{count_words_upto, language_equal};
    use crate::relations::convolve;

    // append1(x, y) ⟺ y = x·1, on the domain of words ending in 1 plus λ.
    const SAMPLE: &str = "\
# sample structure
alphabet: 0 1
domain regex: (0|1)*1|()

relation append1 arity 2 automaton:
states 4
initial 0
final 3
0 0,0 1
0 1,1 2
1 0,0 1
1 1,1 2
2 0,0 1
2 1,1 2
0 _,1 3
2 _,1 3
end
";

    #[test]
    fn parse_and_membership() {
        let p = parse_presentation(SAMPLE).unwrap();
        let a = p.alphabet().clone();
        let in_domain = convolve(&a, &[a.parse_word("011").unwrap()]);
        assert!(p.domain().accepts(&in_domain));
        let rel = p.relation("append1").unwrap();
        let pair = a.with_arity(2);
        let w = convolve(&pair, &[a.parse_word("01").unwrap(), a.parse_word("011").unwrap()]);
        assert!(rel.accepts(&w));
        let w = convolve(&pair, &[a.parse_word("01").unwrap(), a.parse_word("010").unwrap()]);
        assert!(!rel.accepts(&w));
    }

    #[test]
    fn empty_regex_group_is_epsilon() {
        let p = parse_presentation(SAMPLE).unwrap();
        // λ is in the domain via the "()" alternative.
        assert!(p.domain().accepts(&[]));
    }

    #[test]
    fn serialize_round_trips() {
        let p = parse_presentation(SAMPLE).unwrap();
        let text = serialize_presentation(&p);
        let q = parse_presentation(&text).unwrap();
        assert!(language_equal(p.domain(), q.domain()).unwrap());
        assert!(language_equal(
            p.relation("append1").unwrap(),
            q.relation("append1").unwrap()
        )
        .unwrap());
        // A second serialization is byte-identical.
        assert_eq!(text, serialize_presentation(&q));
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let bad = "\
alphabet: 0 1
domain regex: (0|1)*
relation r arity 2 automaton:
states 1
initial 0
final 0
0 0,0,1 0
end
";
        match parse_presentation(bad) {
            Err(Error::ArityMismatch { .. }) => {}
            other => panic!("expected arity mismatch, got {other:?}"),
        }
    }

    #[test]
    fn unknown_symbol_is_reported() {
        let bad = "\
alphabet: 0 1
domain regex: (0|1)*
relation r arity 1 automaton:
states 1
initial 0
final 0
0 2 0
end
";
        match parse_presentation(bad) {
            Err(Error::UnknownSymbol(_)) => {}
            other => panic!("expected unknown symbol, got {other:?}"),
        }
    }

    #[test]
    fn validate_flags_containment() {
        // Relation pairs "01" with "00", but "00" is outside domain (0|1)*1.
        let text = "\
alphabet: 0 1
domain regex: (0|1)*1
relation r arity 2 automaton:
states 3
initial 0
final 2
0 0,0 1
1 1,0 2
end
";
        let p = parse_presentation(text).unwrap();
        let issues = validate(&p);
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].kind, IssueKind::NotInDomain);
        assert_eq!(issues[0].witness, vec!["01".to_string(), "00".to_string()]);
    }

    #[test]
    fn validate_flags_padding_violation() {
        // Tape 2 resumes after padding.
        let text = "\
alphabet: 0 1
domain regex: (0|1)*
relation r arity 2 automaton:
states 3
initial 0
final 2
0 0,_ 1
1 0,0 2
end
";
        let p = parse_presentation(text).unwrap();
        let issues = validate(&p);
        assert!(issues.iter().any(|i| i.kind == IssueKind::PaddingViolation));
    }

    #[test]
    fn validate_flags_empty_domain() {
        // ∅ regex: empty alternative set is inexpressible, so use a
        // contradiction: domain automaton with no final states.
        let text = "\
alphabet: 0 1
domain automaton:
states 1
initial 0
final
end
";
        let p = parse_presentation(text).unwrap();
        let issues = validate(&p);
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].kind, IssueKind::EmptyDomain);
    }

    fn tiny() -> Presentation {
        parse_presentation(SAMPLE).unwrap()
    }

    #[test]
    fn product_counts_pairs() {
        let p = tiny();
        let prod = product_presentation(&p, &p).unwrap();
        assert!(validate(&prod).is_empty());
        // Factor members with length ≤ 2: λ, 1, 01, 11 → 4; pair words of
        // length ≤ 2 cover exactly the 16 pairs.
        let total = count_words_upto(prod.domain(), 2).total();
        assert_eq!(total, 16u32.into());
    }

    #[test]
    fn product_relation_is_componentwise() {
        let p = tiny();
        let prod = product_presentation(&p, &p).unwrap();
        let a = p.alphabet().clone();
        let parse = |s: &str| a.parse_word(s).unwrap();
        let enc = |u: &str, v: &str| {
            pair_encode(&a, &a, prod.alphabet(), &parse(u), &parse(v))
        };
        let rel = prod.relation("append1").unwrap();
        let pair2 = prod.alphabet().with_arity(2);
        // (λ,"11") → ("1","111"): appends one 1 in both components.
        let w = convolve(&pair2, &[enc("", "11"), enc("1", "111")]);
        assert!(rel.accepts(&w));
        // Right component fails.
        let w = convolve(&pair2, &[enc("", "11"), enc("1", "11")]);
        assert!(!rel.accepts(&w));
        // Components of unequal lengths still pair up.
        let w = convolve(&pair2, &[enc("0011", "1"), enc("00111", "11")]);
        assert!(rel.accepts(&w));
    }
}
