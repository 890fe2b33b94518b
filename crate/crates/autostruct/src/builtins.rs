//! Catalog of ready-made presentations, each shipped as a checked-in
//! presentation file together with an independent semantic oracle that
//! decodes words into mathematical objects and evaluates the relations
//! directly.
//!
//! Every entry also carries `eq`, the diagonal on its domain.
//!
//! Encodings:
//! - `presburger`, `nat_le`, `nat_succ`: naturals in base 2, least
//!   significant bit first, zero = the empty word, no trailing
//!   (most-significant) zeros; relations `plus/3`, `le/2`, `succ/2`.
//! - `int_add`: integers as a sign symbol (`+`/`-`) followed by the
//!   magnitude in the same base-2 encoding; `-` with empty magnitude is
//!   excluded; relation `plus/3`.
//! - `word_struct`: all binary words with append-zero `L/2`, append-one
//!   `R/2`, equal-length `E/2`, and prefix `preceq/2`.
//! - `b_omega`: the Boolean algebra of finite and co-finite subsets of ℕ.
//!   A word is flag + `#` + characteristic string (no trailing zeros):
//!   flag 0 denotes the finite set of one-positions, flag 1 its complement.
//!   Relations `union/3`, `inter/3`, `comp/2`, `zero/1`, `one/1`.
//! - `q_le`, `q_le_u`: nonempty binary words ending in 1 under strict
//!   lexicographic (dyadic) order `lt/2`; `q_le_u` adds the even-length
//!   predicate `U/1`.
//! - `tree_a1`: domain `(0|1)*1 ∪ λ`; `E(x,y)` iff `y ∈ x·0*1` (immediate
//!   successor in the prefix order restricted to the domain).
//! - `chains_j`: disjoint finite chains, infinitely many of every length.
//!   A vertex `1^c#1^a#1^b` is the token split (a,b) in copy c; the edge
//!   moves one token right: `1^c#1^a#1^b → 1^c#1^(a-1)#1^(b+1)`. The sum
//!   a+b is invariant, so copy c at sum t is a chain of t+1 vertices.

use crate::automata::{intersect, minimize, Alphabet, Automaton, Builder};
use crate::error::{Error, Result};
use crate::presentation::{parse_presentation, regex_to_automaton, Presentation};
use crate::relations::{equality_machine, universe};
use std::collections::{BTreeMap, BTreeSet};

pub const NAMES: [&str; 10] = [
    "presburger",
    "nat_le",
    "nat_succ",
    "int_add",
    "word_struct",
    "b_omega",
    "q_le",
    "q_le_u",
    "tree_a1",
    "chains_j",
];

/// Load a catalog entry from its checked-in presentation file.
pub fn builtin(name: &str) -> Result<Presentation> {
    let text = builtin_source(name)?;
    parse_presentation(text)
}

/// The raw presentation file for a catalog entry.
pub fn builtin_source(name: &str) -> Result<&'static str> {
    Ok(match name {
        "presburger" => include_str!("../data/presburger.pres"),
        "nat_le" => include_str!("../data/nat_le.pres"),
        "nat_succ" => include_str!("../data/nat_succ.pres"),
        "int_add" => include_str!("../data/int_add.pres"),
        "word_struct" => include_str!("../data/word_struct.pres"),
        "b_omega" => include_str!("../data/b_omega.pres"),
        "q_le" => include_str!("../data/q_le.pres"),
        "q_le_u" => include_str!("../data/q_le_u.pres"),
        "tree_a1" => include_str!("../data/tree_a1.pres"),
        "chains_j" => include_str!("../data/chains_j.pres"),
        other => return Err(Error::UnknownBuiltin(other.to_string())),
    })
}

// ---------------------------------------------------------------------------
// Generators (the files are serialized from these; tests assert agreement)
// ---------------------------------------------------------------------------

pub(crate) fn machine(
    alph: &Alphabet,
    n_states: u32,
    initial: u32,
    finals: &[u32],
    edges: &[(u32, String, u32)],
) -> Result<Automaton> {
    let mut b = Builder::new(alph.clone());
    for _ in 0..n_states {
        b.state();
    }
    for &f in finals {
        b.set_final(f);
    }
    for (q, s, t) in edges {
        b.edge_sym(*q, s, *t)?;
    }
    Ok(b.finish(initial))
}

pub(crate) fn restrict(domain: &Automaton, m: Automaton) -> Result<Automaton> {
    let u = universe(domain, m.alphabet().arity())?;
    Ok(minimize(&intersect(&m, &u)?))
}

pub(crate) fn with_eq(
    alphabet: Alphabet,
    domain: Automaton,
    mut rels: BTreeMap<String, Automaton>,
) -> Result<Presentation> {
    let eq = minimize(&intersect(&equality_machine(&alphabet), &universe(&domain, 2)?)?);
    rels.insert("eq".to_string(), eq);
    Ok(Presentation::new(alphabet, domain, rels))
}

fn bit(v: u8) -> &'static str {
    ["0", "1", "_"][v as usize]
}

/// Digit triples satisfying lhs1 + lhs2 + carry = result + 2·carry',
/// with padding read as digit 0. `perm` maps (tape0, tape1, tape2) to
/// (lhs1, lhs2, result).
fn adder_edges(
    from: impl Fn(u8) -> u32,
    to: impl Fn(u8) -> u32,
    perm: impl Fn(u8, u8, u8) -> (u8, u8, u8),
) -> Vec<(u32, String, u32)> {
    let val = |d: u8| if d == 1 { 1 } else { 0 };
    let mut out = Vec::new();
    for carry in 0..2u8 {
        for a in [0u8, 1, 2] {
            for b in [0u8, 1, 2] {
                for c in [0u8, 1, 2] {
                    if a == 2 && b == 2 && c == 2 {
                        continue;
                    }
                    let (l1, l2, r) = perm(a, b, c);
                    let sum = val(l1) + val(l2) + carry;
                    if val(r) != sum % 2 {
                        continue;
                    }
                    out.push((
                        from(carry),
                        format!("{},{},{}", bit(a), bit(b), bit(c)),
                        to(sum / 2),
                    ));
                }
            }
        }
    }
    out
}

fn nat_domain(alph: &Alphabet) -> Result<Automaton> {
    regex_to_automaton(alph, "(0|1)*1|()", 0)
}

fn gen_presburger() -> Result<Presentation> {
    let a1 = Alphabet::new(vec!["0", "1"])?;
    let domain = nat_domain(&a1)?;
    let a3 = a1.with_arity(3);
    let edges = adder_edges(|c| c as u32, |c| c as u32, |a, b, c| (a, b, c));
    let plus = machine(&a3, 2, 0, &[0], &edges)?;
    let mut rels = BTreeMap::new();
    rels.insert("plus".to_string(), restrict(&domain, plus)?);
    with_eq(a1, domain, rels)
}

fn gen_nat_le() -> Result<Presentation> {
    let a1 = Alphabet::new(vec!["0", "1"])?;
    let domain = nat_domain(&a1)?;
    let a2 = a1.with_arity(2);
    let val = |d: u8| if d == 1 { 1 } else { 0 };
    let mut edges = Vec::new();
    // State 0: prefix read so far satisfies x ≤ y; state 1: x > y. Later
    // digits are more significant, so a difference overrides the state.
    for st in 0..2u32 {
        for a in [0u8, 1, 2] {
            for b in [0u8, 1, 2] {
                if a == 2 && b == 2 {
                    continue;
                }
                let next = match val(a).cmp(&val(b)) {
                    std::cmp::Ordering::Less => 0,
                    std::cmp::Ordering::Greater => 1,
                    std::cmp::Ordering::Equal => st,
                };
                edges.push((st, format!("{},{}", bit(a), bit(b)), next));
            }
        }
    }
    let le = machine(&a2, 2, 0, &[0], &edges)?;
    let mut rels = BTreeMap::new();
    rels.insert("le".to_string(), restrict(&domain, le)?);
    with_eq(a1, domain, rels)
}

fn gen_nat_succ() -> Result<Presentation> {
    let a1 = Alphabet::new(vec!["0", "1"])?;
    let domain = nat_domain(&a1)?;
    let a2 = a1.with_arity(2);
    // State 0 still owes the increment; state 1 copies the rest.
    let edges = vec![
        (0, "1,0".to_string(), 0),
        (0, "0,1".to_string(), 1),
        (0, "_,1".to_string(), 1),
        (1, "0,0".to_string(), 1),
        (1, "1,1".to_string(), 1),
    ];
    let succ = machine(&a2, 2, 0, &[1], &edges)?;
    let mut rels = BTreeMap::new();
    rels.insert("succ".to_string(), restrict(&domain, succ)?);
    with_eq(a1, domain, rels)
}

fn gen_int_add() -> Result<Presentation> {
    let a1 = Alphabet::new(vec!["0", "1", "+", "-"])?;
    let domain = regex_to_automaton(&a1, "+((0|1)*1|())|-(0|1)*1", 0)?;
    let a3 = a1.with_arity(3);
    // State 0 reads the sign triple; states 1 + 2·mode + carry run a
    // magnitude adder. Mode 0 adds |x|+|y|=|z| (equal signs); mode 1
    // checks |z|+|y|=|x|; mode 2 checks |z|+|x|=|y| (mixed signs, the
    // result sign names the larger magnitude).
    let st = |mode: u8, carry: u8| 1 + 2 * (mode as u32) + carry as u32;
    let mut edges: Vec<(u32, String, u32)> = vec![
        (0, "+,+,+".to_string(), st(0, 0)),
        (0, "-,-,-".to_string(), st(0, 0)),
        (0, "+,-,+".to_string(), st(1, 0)),
        (0, "-,+,-".to_string(), st(1, 0)),
        (0, "+,-,-".to_string(), st(2, 0)),
        (0, "-,+,+".to_string(), st(2, 0)),
    ];
    for mode in 0..3u8 {
        let perm = move |a: u8, b: u8, c: u8| match mode {
            0 => (a, b, c),
            1 => (c, b, a),
            _ => (c, a, b),
        };
        edges.extend(adder_edges(
            move |carry| st(mode, carry),
            move |carry| st(mode, carry),
            perm,
        ));
    }
    let finals = [st(0, 0), st(1, 0), st(2, 0)];
    let plus = machine(&a3, 7, 0, &finals, &edges)?;
    let mut rels = BTreeMap::new();
    rels.insert("plus".to_string(), restrict(&domain, plus)?);
    with_eq(a1, domain, rels)
}

fn gen_word_struct() -> Result<Presentation> {
    let a1 = Alphabet::new(vec!["0", "1"])?;
    let domain = regex_to_automaton(&a1, "(0|1)*", 0)?;
    let a2 = a1.with_arity(2);
    let copy = |s: u32| {
        vec![
            (s, "0,0".to_string(), s),
            (s, "1,1".to_string(), s),
        ]
    };
    let append = |suffix: &str| -> Vec<(u32, String, u32)> {
        let mut e = copy(0);
        e.push((0, format!("_,{suffix}"), 1));
        e
    };
    let left = machine(&a2, 2, 0, &[1], &append("0"))?;
    let right = machine(&a2, 2, 0, &[1], &append("1"))?;
    let mut eq_len_edges = Vec::new();
    for a in ["0", "1"] {
        for b in ["0", "1"] {
            eq_len_edges.push((0, format!("{a},{b}"), 0));
        }
    }
    let eq_len = machine(&a2, 1, 0, &[0], &eq_len_edges)?;
    let mut prefix_edges = copy(0);
    for b in ["0", "1"] {
        prefix_edges.push((0, format!("_,{b}"), 1));
        prefix_edges.push((1, format!("_,{b}"), 1));
    }
    let prefix = machine(&a2, 2, 0, &[0, 1], &prefix_edges)?;
    let mut rels = BTreeMap::new();
    rels.insert("L".to_string(), restrict(&domain, left)?);
    rels.insert("R".to_string(), restrict(&domain, right)?);
    rels.insert("E".to_string(), restrict(&domain, eq_len)?);
    rels.insert("preceq".to_string(), restrict(&domain, prefix)?);
    with_eq(a1, domain, rels)
}

fn gen_b_omega() -> Result<Presentation> {
    let a1 = Alphabet::new(vec!["0", "1", "#"])?;
    let domain = regex_to_automaton(&a1, "(0|1)#((0|1)*1|())", 0)?;
    let a2 = a1.with_arity(2);
    let a3 = a1.with_arity(3);

    // Membership sequence of flag f and characteristic digit d (padding
    // counts as digit 0): member ⟺ d ⊕ f.
    let mem = |f: u8, d: u8| (if d == 1 { 1 } else { 0 }) ^ f;
    let gen_op = |combine: fn(u8, u8) -> u8| -> Result<Automaton> {
        // States: 0 = start; 1..=4 = flag triple read; 5..=8 = separators
        // read, looping over digits. Flag combos are (fx, fy) with
        // fz = combine(fx, fy).
        let combo = |fx: u8, fy: u8| (2 * fx + fy) as u32;
        let mut edges = Vec::new();
        for fx in 0..2u8 {
            for fy in 0..2u8 {
                let fz = combine(fx, fy);
                edges.push((0, format!("{fx},{fy},{fz}"), 1 + combo(fx, fy)));
                edges.push((1 + combo(fx, fy), "#,#,#".to_string(), 5 + combo(fx, fy)));
                for a in [0u8, 1, 2] {
                    for b in [0u8, 1, 2] {
                        for c in [0u8, 1, 2] {
                            if a == 2 && b == 2 && c == 2 {
                                continue;
                            }
                            if combine(mem(fx, a), mem(fy, b)) == mem(fz, c) {
                                edges.push((
                                    5 + combo(fx, fy),
                                    format!("{},{},{}", bit(a), bit(b), bit(c)),
                                    5 + combo(fx, fy),
                                ));
                            }
                        }
                    }
                }
            }
        }
        machine(&a3, 9, 0, &[5, 6, 7, 8], &edges)
    };
    let union = gen_op(|x, y| x | y)?;
    let inter = gen_op(|x, y| x & y)?;

    let comp_edges = vec![
        (0, "0,1".to_string(), 1),
        (0, "1,0".to_string(), 1),
        (1, "#,#".to_string(), 2),
        (2, "0,0".to_string(), 2),
        (2, "1,1".to_string(), 2),
    ];
    let comp = machine(&a2, 3, 0, &[2], &comp_edges)?;

    let singleton = |word: &[&str]| -> Result<Automaton> {
        let edges: Vec<(u32, String, u32)> = word
            .iter()
            .enumerate()
            .map(|(i, s)| (i as u32, s.to_string(), i as u32 + 1))
            .collect();
        machine(&a1, word.len() as u32 + 1, 0, &[word.len() as u32], &edges)
    };
    let zero = singleton(&["0", "#"])?;
    let one = singleton(&["1", "#"])?;

    let mut rels = BTreeMap::new();
    rels.insert("union".to_string(), restrict(&domain, union)?);
    rels.insert("inter".to_string(), restrict(&domain, inter)?);
    rels.insert("comp".to_string(), restrict(&domain, comp)?);
    rels.insert("zero".to_string(), restrict(&domain, zero)?);
    rels.insert("one".to_string(), restrict(&domain, one)?);
    with_eq(a1, domain, rels)
}

fn lex_lt_machine(a2: &Alphabet) -> Result<Automaton> {
    // State 0 copies agreement; 1 accepts everything after the deciding
    // position (first difference 0<1, or x exhausted first).
    let mut edges = vec![
        (0, "0,0".to_string(), 0),
        (0, "1,1".to_string(), 0),
        (0, "0,1".to_string(), 1),
        (0, "_,0".to_string(), 1),
        (0, "_,1".to_string(), 1),
    ];
    for a in ["0", "1", "_"] {
        for b in ["0", "1", "_"] {
            if a == "_" && b == "_" {
                continue;
            }
            edges.push((1, format!("{a},{b}"), 1));
        }
    }
    machine(a2, 2, 0, &[1], &edges)
}

fn gen_q_le() -> Result<Presentation> {
    let a1 = Alphabet::new(vec!["0", "1"])?;
    let domain = regex_to_automaton(&a1, "(0|1)*1", 0)?;
    let lt = lex_lt_machine(&a1.with_arity(2))?;
    let mut rels = BTreeMap::new();
    rels.insert("lt".to_string(), restrict(&domain, lt)?);
    with_eq(a1, domain, rels)
}

fn gen_q_le_u() -> Result<Presentation> {
    let a1 = Alphabet::new(vec!["0", "1"])?;
    let domain = regex_to_automaton(&a1, "(0|1)*1", 0)?;
    let lt = lex_lt_machine(&a1.with_arity(2))?;
    let even_edges = vec![
        (0, "0".to_string(), 1),
        (0, "1".to_string(), 1),
        (1, "0".to_string(), 0),
        (1, "1".to_string(), 0),
    ];
    let even = machine(&a1, 2, 0, &[0], &even_edges)?;
    let mut rels = BTreeMap::new();
    rels.insert("lt".to_string(), restrict(&domain, lt)?);
    rels.insert("U".to_string(), restrict(&domain, even)?);
    with_eq(a1, domain, rels)
}

fn gen_tree_a1() -> Result<Presentation> {
    let a1 = Alphabet::new(vec!["0", "1"])?;
    let domain = regex_to_automaton(&a1, "(0|1)*1|()", 0)?;
    let a2 = a1.with_arity(2);
    // y = x · 0^k · 1: copy x, then zeros on y only, then a final one.
    let edges = vec![
        (0, "0,0".to_string(), 0),
        (0, "1,1".to_string(), 0),
        (0, "_,0".to_string(), 1),
        (1, "_,0".to_string(), 1),
        (0, "_,1".to_string(), 2),
        (1, "_,1".to_string(), 2),
    ];
    let succ = machine(&a2, 3, 0, &[2], &edges)?;
    let mut rels = BTreeMap::new();
    rels.insert("E".to_string(), restrict(&domain, succ)?);
    with_eq(a1, domain, rels)
}

fn gen_chains_j() -> Result<Presentation> {
    let a1 = Alphabet::new(vec!["1", "#"])?;
    let domain = regex_to_automaton(&a1, "1*#1*#1*", 0)?;
    let a2 = a1.with_arity(2);
    // ⊗(1^c#1^a#1^b, 1^c#1^(a-1)#1^(b+1)) = (1,1)^c (#,#) (1,1)^(a-1)
    // (1,#) (#,1) (1,1)^b — both words have the same length.
    let edges = vec![
        (0, "1,1".to_string(), 0),
        (0, "#,#".to_string(), 1),
        (1, "1,1".to_string(), 1),
        (1, "1,#".to_string(), 2),
        (2, "#,1".to_string(), 3),
        (3, "1,1".to_string(), 3),
    ];
    let edge = machine(&a2, 4, 0, &[3], &edges)?;
    let mut rels = BTreeMap::new();
    rels.insert("E".to_string(), restrict(&domain, edge)?);
    with_eq(a1, domain, rels)
}

/// Build a catalog entry from scratch (the shipped files are serialized
/// from these constructions).
pub fn generate(name: &str) -> Result<Presentation> {
    match name {
        "presburger" => gen_presburger(),
        "nat_le" => gen_nat_le(),
        "nat_succ" => gen_nat_succ(),
        "int_add" => gen_int_add(),
        "word_struct" => gen_word_struct(),
        "b_omega" => gen_b_omega(),
        "q_le" => gen_q_le(),
        "q_le_u" => gen_q_le_u(),
        "tree_a1" => gen_tree_a1(),
        "chains_j" => gen_chains_j(),
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

fn decode_err(what: impl Into<String>) -> Error {
    Error::Decode(what.into())
}

/// Base-2 LSB-first natural; empty = 0; the last digit, if any, must be 1.
pub fn decode_nat(s: &str) -> Result<u128> {
    if !s.chars().all(|c| c == '0' || c == '1') {
        return Err(decode_err(format!("{s:?} is not a binary word")));
    }
    if !s.is_empty() && !s.ends_with('1') {
        return Err(decode_err(format!("{s:?} has a trailing zero digit")));
    }
    if s.len() > 120 {
        return Err(decode_err("number too large to decode"));
    }
    Ok(s
        .chars()
        .enumerate()
        .map(|(i, c)| if c == '1' { 1u128 << i } else { 0 })
        .sum())
}

/// Sign-magnitude integer; "+": zero; "-" requires a nonzero magnitude.
pub fn decode_int(s: &str) -> Result<i128> {
    let (sign, mag) = match s.chars().next() {
        Some('+') => (1i128, &s[1..]),
        Some('-') => (-1i128, &s[1..]),
        _ => return Err(decode_err(format!("{s:?} lacks a sign symbol"))),
    };
    let value = decode_nat(mag)? as i128;
    if sign < 0 && value == 0 {
        return Err(decode_err("negative zero is excluded"));
    }
    Ok(sign * value)
}

/// A finite or co-finite subset of ℕ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OmegaSet {
    Finite(BTreeSet<u64>),
    /// `Cofinite(s)` is ℕ without the elements of `s`.
    Cofinite(BTreeSet<u64>),
}

impl OmegaSet {
    pub fn complement(&self) -> OmegaSet {
        match self {
            OmegaSet::Finite(s) => OmegaSet::Cofinite(s.clone()),
            OmegaSet::Cofinite(s) => OmegaSet::Finite(s.clone()),
        }
    }

    pub fn union(&self, other: &OmegaSet) -> OmegaSet {
        use OmegaSet::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a | b),
            (Finite(a), Cofinite(b)) | (Cofinite(b), Finite(a)) => Cofinite(b - a),
            (Cofinite(a), Cofinite(b)) => Cofinite(a & b),
        }
    }

    pub fn intersection(&self, other: &OmegaSet) -> OmegaSet {
        self.complement()
            .union(&other.complement())
            .complement()
    }

    /// Canonical word encoding this set.
    pub fn encode(&self) -> String {
        let (flag, s) = match self {
            OmegaSet::Finite(s) => ('0', s),
            OmegaSet::Cofinite(s) => ('1', s),
        };
        let mut out = String::new();
        out.push(flag);
        out.push('#');
        if let Some(&max) = s.iter().next_back() {
            for i in 0..=max {
                out.push(if s.contains(&i) { '1' } else { '0' });
            }
        }
        out
    }
}

impl std::fmt::Display for OmegaSet {
    /// Render as a union of half-open intervals, e.g. `[1,3)∪[6,10)`;
    /// co-finite sets as `ℕ` minus such a union.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn intervals(s: &BTreeSet<u64>) -> String {
            let mut parts = Vec::new();
            let mut run: Option<(u64, u64)> = None;
            for &x in s {
                run = match run {
                    Some((lo, hi)) if x == hi => Some((lo, hi + 1)),
                    Some((lo, hi)) => {
                        parts.push(format!("[{lo},{hi})"));
                        Some((x, x + 1))
                    }
                    None => Some((x, x + 1)),
                };
            }
            if let Some((lo, hi)) = run {
                parts.push(format!("[{lo},{hi})"));
            }
            parts.join("∪")
        }
        match self {
            OmegaSet::Finite(s) if s.is_empty() => write!(f, "∅"),
            OmegaSet::Finite(s) => write!(f, "{}", intervals(s)),
            OmegaSet::Cofinite(s) if s.is_empty() => write!(f, "ℕ"),
            OmegaSet::Cofinite(s) => write!(f, "ℕ∖{}", intervals(s)),
        }
    }
}

pub fn decode_omega_set(s: &str) -> Result<OmegaSet> {
    let (flag, rest) = match (s.chars().next(), s.get(1..2)) {
        (Some(f @ ('0' | '1')), Some("#")) => (f, &s[2..]),
        _ => {
            return Err(decode_err(format!(
                "{s:?} is not flag + '#' + characteristic string"
            )))
        }
    };
    if !rest.chars().all(|c| c == '0' || c == '1') {
        return Err(decode_err(format!("{s:?} has a bad characteristic string")));
    }
    if rest.ends_with('0') {
        return Err(decode_err(format!("{s:?} has trailing zeros")));
    }
    let ones: BTreeSet<u64> = rest
        .chars()
        .enumerate()
        .filter(|(_, c)| *c == '1')
        .map(|(i, _)| i as u64)
        .collect();
    Ok(if flag == '0' {
        OmegaSet::Finite(ones)
    } else {
        OmegaSet::Cofinite(ones)
    })
}

fn check_bin_domain(s: &str, allow_empty: bool, must_end_one: bool) -> Result<()> {
    if !s.chars().all(|c| c == '0' || c == '1') {
        return Err(decode_err(format!("{s:?} is not a binary word")));
    }
    if s.is_empty() && !allow_empty {
        return Err(decode_err("empty word not in domain"));
    }
    if must_end_one && !s.is_empty() && !s.ends_with('1') {
        return Err(decode_err(format!("{s:?} must end in 1")));
    }
    Ok(())
}

/// Strict dyadic/lexicographic order on words ending in 1: the first
/// difference decides, and a proper prefix precedes its extensions.
fn lex_lt(x: &str, y: &str) -> bool {
    for (a, b) in x.chars().zip(y.chars()) {
        if a != b {
            return a < b;
        }
    }
    x.len() < y.len()
}

fn decode_chain_vertex(s: &str) -> Result<(usize, usize, usize)> {
    let parts: Vec<&str> = s.split('#').collect();
    if parts.len() != 3 || parts.iter().any(|p| p.chars().any(|c| c != '1')) {
        return Err(decode_err(format!("{s:?} is not 1^c#1^a#1^b")));
    }
    Ok((parts[0].len(), parts[1].len(), parts[2].len()))
}

fn expect_arity(rel: &str, args: &[&str], want: usize) -> Result<()> {
    if args.len() != want {
        return Err(Error::ArityMismatch {
            name: rel.to_string(),
            expected: want,
            got: args.len(),
        });
    }
    Ok(())
}

/// Evaluate an atomic relation of a catalog entry directly on decoded
/// mathematical objects, independently of any automaton.
pub fn oracle_eval(name: &str, rel: &str, args: &[&str]) -> Result<bool> {
    let unknown_rel = || Err(Error::UnknownRelation(format!("{name}.{rel}")));
    match name {
        "presburger" | "nat_le" | "nat_succ" => {
            let nums: Vec<u128> = args
                .iter()
                .map(|s| decode_nat(s))
                .collect::<Result<_>>()?;
            match (name, rel) {
                ("presburger", "plus") => {
                    expect_arity(rel, args, 3)?;
                    Ok(nums[0] + nums[1] == nums[2])
                }
                ("nat_le", "le") => {
                    expect_arity(rel, args, 2)?;
                    Ok(nums[0] <= nums[1])
                }
                ("nat_succ", "succ") => {
                    expect_arity(rel, args, 2)?;
                    Ok(nums[0] + 1 == nums[1])
                }
                (_, "eq") => {
                    expect_arity(rel, args, 2)?;
                    Ok(nums[0] == nums[1])
                }
                _ => unknown_rel(),
            }
        }
        "int_add" => {
            let nums: Vec<i128> = args
                .iter()
                .map(|s| decode_int(s))
                .collect::<Result<_>>()?;
            match rel {
                "plus" => {
                    expect_arity(rel, args, 3)?;
                    Ok(nums[0] + nums[1] == nums[2])
                }
                "eq" => {
                    expect_arity(rel, args, 2)?;
                    Ok(nums[0] == nums[1])
                }
                _ => unknown_rel(),
            }
        }
        "word_struct" => {
            for a in args {
                check_bin_domain(a, true, false)?;
            }
            match rel {
                "L" => {
                    expect_arity(rel, args, 2)?;
                    Ok(format!("{}0", args[0]) == args[1])
                }
                "R" => {
                    expect_arity(rel, args, 2)?;
                    Ok(format!("{}1", args[0]) == args[1])
                }
                "E" => {
                    expect_arity(rel, args, 2)?;
                    Ok(args[0].len() == args[1].len())
                }
                "preceq" => {
                    expect_arity(rel, args, 2)?;
                    Ok(args[1].starts_with(args[0]))
                }
                "eq" => {
                    expect_arity(rel, args, 2)?;
                    Ok(args[0] == args[1])
                }
                _ => unknown_rel(),
            }
        }
        "b_omega" => {
            let sets: Vec<OmegaSet> = args
                .iter()
                .map(|s| decode_omega_set(s))
                .collect::<Result<_>>()?;
            match rel {
                "union" => {
                    expect_arity(rel, args, 3)?;
                    Ok(sets[0].union(&sets[1]) == sets[2])
                }
                "inter" => {
                    expect_arity(rel, args, 3)?;
                    Ok(sets[0].intersection(&sets[1]) == sets[2])
                }
                "comp" => {
                    expect_arity(rel, args, 2)?;
                    Ok(sets[0].complement() == sets[1])
                }
                "zero" => {
                    expect_arity(rel, args, 1)?;
                    Ok(sets[0] == OmegaSet::Finite(BTreeSet::new()))
                }
                "one" => {
                    expect_arity(rel, args, 1)?;
                    Ok(sets[0] == OmegaSet::Cofinite(BTreeSet::new()))
                }
                "eq" => {
                    expect_arity(rel, args, 2)?;
                    Ok(sets[0] == sets[1])
                }
                _ => unknown_rel(),
            }
        }
        "q_le" | "q_le_u" => {
            for a in args {
                check_bin_domain(a, false, true)?;
            }
            match rel {
                "lt" => {
                    expect_arity(rel, args, 2)?;
                    Ok(lex_lt(args[0], args[1]))
                }
                "U" if name == "q_le_u" => {
                    expect_arity(rel, args, 1)?;
                    Ok(args[0].len() % 2 == 0)
                }
                "eq" => {
                    expect_arity(rel, args, 2)?;
                    Ok(args[0] == args[1])
                }
                _ => unknown_rel(),
            }
        }
        "tree_a1" => {
            for a in args {
                check_bin_domain(a, true, true)?;
            }
            match rel {
                "E" => {
                    expect_arity(rel, args, 2)?;
                    let (x, y) = (args[0], args[1]);
                    Ok(y.len() > x.len() && y.starts_with(x) && {
                        let tail = &y[x.len()..];
                        tail.ends_with('1') && tail[..tail.len() - 1].chars().all(|c| c == '0')
                    })
                }
                "eq" => {
                    expect_arity(rel, args, 2)?;
                    Ok(args[0] == args[1])
                }
                _ => unknown_rel(),
            }
        }
        "chains_j" => {
            let vs: Vec<(usize, usize, usize)> = args
                .iter()
                .map(|s| decode_chain_vertex(s))
                .collect::<Result<_>>()?;
            match rel {
                "E" => {
                    expect_arity(rel, args, 2)?;
                    let ((c1, a1, b1), (c2, a2, b2)) = (vs[0], vs[1]);
                    Ok(c1 == c2 && a1 >= 1 && a2 == a1 - 1 && b2 == b1 + 1)
                }
                "eq" => {
                    expect_arity(rel, args, 2)?;
                    Ok(vs[0] == vs[1])
                }
                _ => unknown_rel(),
            }
        }
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

/// Adjacency of the explicit bit graph: vertex `n` points at vertex `m`
/// exactly when bit `m` of `n` is set. Kept as a brute-force contrast
/// oracle; it is not presented by any automaton here.
pub fn contrast_bitgraph(n: u64, m: u64) -> bool {
    m < 64 && (n >> m) & 1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{determinize, enumerate_llex, language_equal, trim, Word};
    use crate::logic::{eval_sentence, parse_formula};
    use crate::presentation::{serialize_presentation, validate};
    use crate::relations::convolve;

    #[test]
    #[ignore = "writes the shipped data files from the generators"]
    fn write_builtin_data() {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
        std::fs::create_dir_all(&dir).unwrap();
        for name in NAMES {
            let p = generate(name).unwrap();
            std::fs::write(
                dir.join(format!("{name}.pres")),
                serialize_presentation(&p),
            )
            .unwrap();
        }
    }

    #[test]
    fn unknown_builtin_is_reported() {
        assert!(matches!(
            builtin("no_such_thing"),
            Err(Error::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn shipped_files_match_generators_and_validate() {
        for name in NAMES {
            let shipped = builtin(name).unwrap();
            let fresh = generate(name).unwrap();
            assert_eq!(
                shipped.alphabet().base_names(),
                fresh.alphabet().base_names(),
                "{name}: alphabet"
            );
            assert!(
                language_equal(shipped.domain(), fresh.domain()).unwrap(),
                "{name}: domain"
            );
            assert_eq!(
                shipped.relation_names(),
                fresh.relation_names(),
                "{name}: relation set"
            );
            for rel in shipped.relation_names() {
                assert!(
                    language_equal(
                        shipped.relation(&rel).unwrap(),
                        fresh.relation(&rel).unwrap()
                    )
                    .unwrap(),
                    "{name}.{rel}"
                );
            }
            assert!(validate(&shipped).is_empty(), "{name}: validation");
        }
    }

    #[test]
    fn files_round_trip_stably() {
        for name in NAMES {
            let p = builtin(name).unwrap();
            let text = serialize_presentation(&p);
            let q = crate::presentation::parse_presentation(&text).unwrap();
            assert!(language_equal(p.domain(), q.domain()).unwrap(), "{name}");
            for rel in p.relation_names() {
                assert!(
                    language_equal(p.relation(&rel).unwrap(), q.relation(&rel).unwrap())
                        .unwrap(),
                    "{name}.{rel}"
                );
            }
            assert_eq!(text, serialize_presentation(&q), "{name}: byte-stable");
        }
    }

    fn domain_words(p: &Presentation, max_len: usize) -> Vec<String> {
        let dfa = trim(&determinize(p.domain()));
        let alph = p.alphabet();
        enumerate_llex(&dfa, max_len)
            .map(|w| {
                let word: Word = w.iter().map(|t| t[0]).collect();
                alph.format_word(&word)
            })
            .collect()
    }

    #[test]
    fn oracles_agree_with_automata() {
        for name in NAMES {
            let p = builtin(name).unwrap();
            // Keep ternary enumerations affordable: length 6 for binary
            // relations, 4 for ternary ones.
            let words6 = domain_words(&p, 6);
            let words4 = domain_words(&p, 4);
            for rel in p.relation_names() {
                let m = p.relation(&rel).unwrap();
                let arity = m.alphabet().arity();
                let words = if arity >= 3 { &words4 } else { &words6 };
                let mut idx = vec![0usize; arity];
                loop {
                    let args: Vec<&str> =
                        idx.iter().map(|&i| words[i].as_str()).collect();
                    let comps: Vec<Word> = args
                        .iter()
                        .map(|a| p.alphabet().parse_word(a).unwrap())
                        .collect();
                    let direct = m.accepts(&convolve(m.alphabet(), &comps));
                    let by_oracle = oracle_eval(name, &rel, &args).unwrap();
                    assert_eq!(direct, by_oracle, "{name}.{rel} at {args:?}");
                    let mut k = 0;
                    while k < idx.len() {
                        idx[k] += 1;
                        if idx[k] < words.len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                    if k == idx.len() {
                        break;
                    }
                }
            }
        }
    }

    #[test]
    fn addition_examples() {
        let p = builtin("presburger").unwrap();
        let m = p.relation("plus").unwrap();
        let alph = p.alphabet();
        let tuple = |xs: [&str; 3]| {
            let comps: Vec<Word> = xs.iter().map(|s| alph.parse_word(s).unwrap()).collect();
            convolve(m.alphabet(), &comps)
        };
        // 3 + 5 = 8.
        assert!(m.accepts(&tuple(["11", "101", "0001"])));
        // 3 + 5 ≠ 9.
        assert!(!oracle_eval("presburger", "plus", &["11", "101", "1001"]).unwrap());
        assert!(oracle_eval("presburger", "plus", &["", "", ""]).unwrap());
    }

    #[test]
    fn int_addition_examples() {
        let holds = |x: &str, y: &str, z: &str| {
            let p = builtin("int_add").unwrap();
            let m = p.relation("plus").unwrap();
            let alph = p.alphabet();
            let comps: Vec<Word> = [x, y, z]
                .iter()
                .map(|s| alph.parse_word(s).unwrap())
                .collect();
            m.accepts(&convolve(m.alphabet(), &comps))
        };
        assert!(holds("+01", "-11", "-1")); // 2 + (−3) = −1
        assert!(holds("-11", "+11", "+")); // −3 + 3 = 0
        assert!(holds("-1", "-01", "-11")); // −1 + (−2) = −3
        assert!(!holds("+1", "+1", "+1"));
        assert_eq!(decode_int("+").unwrap(), 0);
        assert!(decode_int("-").is_err());
    }

    #[test]
    fn omega_set_decoding() {
        let s = decode_omega_set("0#0110001111").unwrap();
        assert_eq!(s.to_string(), "[1,3)∪[6,10)");
        let c = decode_omega_set("1#0001").unwrap();
        assert_eq!(c.to_string(), "ℕ∖[3,4)");
        assert_eq!(decode_omega_set("0#").unwrap().to_string(), "∅");
        assert_eq!(decode_omega_set("1#").unwrap().to_string(), "ℕ");
        assert!(decode_omega_set("0#010").is_err());
        assert!(decode_omega_set("00110").is_err());
        // ([1,3), [2,5)) under ∩ → [2,3).
        let a = decode_omega_set("0#011").unwrap();
        let b = decode_omega_set("0#00111").unwrap();
        assert_eq!(a.intersection(&b).to_string(), "[2,3)");
        assert!(oracle_eval("b_omega", "inter", &["0#011", "0#00111", "0#001"]).unwrap());
    }

    #[test]
    fn omega_words_decode_and_reencode() {
        let p = builtin("b_omega").unwrap();
        for w in domain_words(&p, 8) {
            let set = decode_omega_set(&w).unwrap();
            assert_eq!(set.encode(), w, "round-trip through the set object");
        }
    }

    #[test]
    fn lexicographic_examples() {
        assert!(oracle_eval("q_le", "lt", &["01", "1"]).unwrap());
        assert!(!oracle_eval("q_le", "lt", &["1", "01"]).unwrap());
        assert!(oracle_eval("q_le", "lt", &["1", "11"]).unwrap());
        let p = builtin("q_le").unwrap();
        let m = p.relation("lt").unwrap();
        let alph = p.alphabet();
        let comps: Vec<Word> = ["01", "1"]
            .iter()
            .map(|s| alph.parse_word(s).unwrap())
            .collect();
        assert!(m.accepts(&convolve(m.alphabet(), &comps)));
    }

    #[test]
    fn tree_successor_examples() {
        assert!(!oracle_eval("tree_a1", "E", &["1", "01"]).unwrap());
        assert!(oracle_eval("tree_a1", "E", &["1", "11"]).unwrap());
        assert!(oracle_eval("tree_a1", "E", &["1", "101"]).unwrap());
        assert!(oracle_eval("tree_a1", "E", &["", "001"]).unwrap());
        assert!(!oracle_eval("tree_a1", "E", &["11", "11"]).unwrap());
    }

    #[test]
    fn density_and_endpoint_sentences() {
        let p = builtin("q_le").unwrap();
        let t = |s: &str| eval_sentence(&p, &parse_formula(s).unwrap()).unwrap();
        assert!(t("A x. A y. (lt(x,y) -> (E z. (lt(x,z) & lt(z,y))))"));
        assert!(t("A x. E y. lt(y,x)"));
        assert!(t("A x. E y. lt(x,y)"));
        assert!(t("A x. A y. (lt(x,y) -> !lt(y,x))"));
    }

    #[test]
    fn chain_degree_and_length_sentences() {
        let p = builtin("chains_j").unwrap();
        let t = |s: &str| eval_sentence(&p, &parse_formula(s).unwrap()).unwrap();
        assert!(t("A x. A y. A z. ((E(x,y) & E(x,z)) -> eq(y,z))"));
        assert!(t("A x. A y. A z. ((E(y,x) & E(z,x)) -> eq(y,z))"));
        // A chain with exactly L vertices exists for each L ≤ 5: a path
        // v1 → … → vL with no edge into v1 and none out of vL.
        for l in 1..=5usize {
            let vars: Vec<String> = (1..=l).map(|i| format!("v{i}")).collect();
            let mut parts = Vec::new();
            for w in vars.windows(2) {
                parts.push(format!("E({},{})", w[0], w[1]));
            }
            parts.push(format!("!(E u. E(u,{}))", vars[0]));
            parts.push(format!("!(E u. E({},u))", vars[l - 1]));
            let mut formula = parts.join(" & ");
            for v in vars.iter().rev() {
                formula = format!("E {v}. ({formula})");
            }
            assert!(t(&formula), "chain of length {l}");
        }
    }

    #[test]
    fn successor_has_no_infinite_branching() {
        let p = builtin("nat_succ").unwrap();
        let f = parse_formula("Einf y. succ(x, y)").unwrap();
        match crate::logic::compile(&p, &f).unwrap() {
            crate::logic::Compiled::Relation(r) => {
                assert!(crate::automata::is_empty(r.automaton()))
            }
            other => panic!("expected relation, got {other:?}"),
        }
    }

    #[test]
    fn addition_commutativity_sentence() {
        let p = builtin("presburger").unwrap();
        let f = parse_formula("A x. A y. A z. (plus(x,y,z) -> plus(y,x,z))").unwrap();
        assert!(eval_sentence(&p, &f).unwrap());
    }

    #[test]
    fn le_successors_and_predecessors() {
        let p = builtin("nat_le").unwrap();
        // Infinitely many x above any y: the whole domain qualifies.
        let f = parse_formula("Einf x. le(y, x)").unwrap();
        let above = match crate::logic::compile(&p, &f).unwrap() {
            crate::logic::Compiled::Relation(r) => r,
            other => panic!("expected relation, got {other:?}"),
        };
        assert!(
            language_equal(above.automaton(), &minimize(p.domain())).unwrap()
        );
        // Infinitely many x below some y: never.
        let f = parse_formula("Einf x. le(x, y)").unwrap();
        match crate::logic::compile(&p, &f).unwrap() {
            crate::logic::Compiled::Relation(r) => {
                assert!(crate::automata::is_empty(r.automaton()))
            }
            other => panic!("expected relation, got {other:?}"),
        }
    }

    #[test]
    fn bitgraph_contrast_oracle() {
        assert!(contrast_bitgraph(5, 0));
        assert!(!contrast_bitgraph(5, 1));
        assert!(contrast_bitgraph(5, 2));
        for m in 0..70 {
            assert!(!contrast_bitgraph(0, m));
        }
    }
}
