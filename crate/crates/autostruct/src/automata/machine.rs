//! Automaton representation: dense integer states, factored-label edges.

use super::alphabet::{Alphabet, SymTuple};
use super::label::Label;
use crate::error::{Error, Result};
use std::collections::VecDeque;
use std::fmt::Write as _;

/// A nondeterministic finite automaton over an [`Alphabet`].
///
/// Transitions carry [`Label`] boxes rather than single letters, so wide
/// tuple alphabets stay cheap. The `deterministic` and `complete` fields
/// are conservative caches maintained by the constructing operations.
#[derive(Clone, Debug)]
pub struct Automaton {
    pub(crate) alphabet: Alphabet,
    pub(crate) initial: u32,
    pub(crate) finals: Vec<bool>,
    pub(crate) edges: Vec<Vec<(Label, u32)>>,
    pub(crate) deterministic: bool,
    pub(crate) complete: bool,
}

impl Automaton {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> u32 {
        self.edges.len() as u32
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn is_final(&self, s: u32) -> bool {
        self.finals[s as usize]
    }

    pub fn edges_from(&self, s: u32) -> &[(Label, u32)] {
        &self.edges[s as usize]
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    /// Automaton with the empty language.
    pub fn empty_lang(alphabet: Alphabet) -> Automaton {
        Automaton {
            alphabet,
            initial: 0,
            finals: vec![false],
            edges: vec![Vec::new()],
            deterministic: true,
            complete: false,
        }
    }

    /// Automaton accepting exactly the empty word.
    pub fn epsilon_only(alphabet: Alphabet) -> Automaton {
        Automaton {
            alphabet,
            initial: 0,
            finals: vec![true],
            edges: vec![Vec::new()],
            deterministic: true,
            complete: false,
        }
    }

    /// Automaton accepting every word.
    pub fn full_lang(alphabet: Alphabet) -> Automaton {
        let all = Label::full(&alphabet);
        Automaton {
            alphabet,
            initial: 0,
            finals: vec![true],
            edges: vec![vec![(all, 0)]],
            deterministic: true,
            complete: true,
        }
    }

    pub fn accepts(&self, word: &[SymTuple]) -> bool {
        let mut cur = vec![false; self.edges.len()];
        cur[self.initial as usize] = true;
        for sym in word {
            let mut next = vec![false; self.edges.len()];
            let mut any = false;
            for (s, on) in cur.iter().enumerate() {
                if !on {
                    continue;
                }
                for (label, t) in &self.edges[s] {
                    if label.contains(sym) {
                        next[*t as usize] = true;
                        any = true;
                    }
                }
            }
            if !any {
                return false;
            }
            cur = next;
        }
        cur.iter()
            .enumerate()
            .any(|(s, on)| *on && self.finals[s])
    }

    /// Renumber states canonically: breadth-first from the initial state,
    /// neighbors visited in order of least edge letter. Unreachable states
    /// are dropped. This is what makes serialized machines byte-stable.
    pub fn canonicalize(&self) -> Automaton {
        let pad = self.alphabet.pad();
        let n = self.edges.len();
        let mut order: Vec<u32> = vec![u32::MAX; n];
        let mut seq: Vec<u32> = Vec::new();
        let mut queue = VecDeque::new();
        order[self.initial as usize] = 0;
        seq.push(self.initial);
        queue.push_back(self.initial);
        while let Some(s) = queue.pop_front() {
            let mut out: Vec<&(Label, u32)> = self.edges[s as usize].iter().collect();
            out.sort_by(|a, b| {
                (a.0.min_sym(pad), a.0.masks(), a.1).cmp(&(
                    b.0.min_sym(pad),
                    b.0.masks(),
                    b.1,
                ))
            });
            for (_, t) in out {
                if order[*t as usize] == u32::MAX {
                    order[*t as usize] = seq.len() as u32;
                    seq.push(*t);
                    queue.push_back(*t);
                }
            }
        }
        let mut edges: Vec<Vec<(Label, u32)>> = Vec::with_capacity(seq.len());
        let mut finals = Vec::with_capacity(seq.len());
        for &old in &seq {
            let mut out: Vec<(Label, u32)> = self.edges[old as usize]
                .iter()
                .map(|(l, t)| (l.clone(), order[*t as usize]))
                .collect();
            out.sort_by(|a, b| {
                (a.0.min_sym(pad), a.0.masks(), a.1).cmp(&(
                    b.0.min_sym(pad),
                    b.0.masks(),
                    b.1,
                ))
            });
            edges.push(out);
            finals.push(self.finals[old as usize]);
        }
        Automaton {
            alphabet: self.alphabet.clone(),
            initial: 0,
            finals,
            edges,
            deterministic: self.deterministic,
            complete: self.complete,
        }
    }

    /// DOT rendering, one line per concrete transition letter.
    pub fn to_dot(&self) -> Result<String> {
        let pad = self.alphabet.pad();
        let mut lines: u128 = 0;
        for out in &self.edges {
            for (label, _) in out {
                lines += label.size(pad);
            }
        }
        if lines > 200_000 {
            return Err(Error::LimitExceeded(format!(
                "DOT export would list {lines} transitions"
            )));
        }
        let mut s = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
        for (q, f) in self.finals.iter().enumerate() {
            if *f {
                let _ = writeln!(s, "  {q} [shape=doublecircle];");
            }
        }
        let _ = writeln!(s, "  start [shape=point];");
        let _ = writeln!(s, "  start -> {};", self.initial);
        for (q, out) in self.edges.iter().enumerate() {
            for (label, t) in out {
                for sym in label.syms(pad) {
                    let _ = writeln!(
                        s,
                        "  {q} -> {t} [label=\"{}\"];",
                        self.alphabet.format_sym(&sym)
                    );
                }
            }
        }
        s.push_str("}\n");
        Ok(s)
    }
}

/// Incremental construction of explicit machines.
pub struct Builder {
    alphabet: Alphabet,
    finals: Vec<bool>,
    edges: Vec<Vec<(Label, u32)>>,
}

impl Builder {
    pub fn new(alphabet: Alphabet) -> Builder {
        Builder {
            alphabet,
            finals: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state(&mut self) -> u32 {
        self.finals.push(false);
        self.edges.push(Vec::new());
        (self.finals.len() - 1) as u32
    }

    pub fn set_final(&mut self, s: u32) {
        self.finals[s as usize] = true;
    }

    pub fn edge(&mut self, from: u32, label: Label, to: u32) {
        assert_eq!(label.arity(), self.alphabet.arity(), "label arity mismatch");
        assert!((from as usize) < self.edges.len() && (to as usize) < self.edges.len());
        if label.is_empty(self.alphabet.pad()) {
            return;
        }
        self.edges[from as usize].push((label, to));
    }

    /// Edge on a single letter given in textual form ("0,_,1").
    pub fn edge_sym(&mut self, from: u32, sym: &str, to: u32) -> Result<()> {
        let s = self.alphabet.parse_sym(sym)?;
        self.edge(from, Label::from_sym(&s), to);
        Ok(())
    }

    pub fn finish(self, initial: u32) -> Automaton {
        assert!((initial as usize) < self.edges.len(), "initial out of range");
        let pad = self.alphabet.pad();
        let mut det = true;
        'scan: for out in &self.edges {
            for i in 0..out.len() {
                for j in i + 1..out.len() {
                    if out[i].0.and(&out[j].0, pad).is_some() {
                        det = false;
                        break 'scan;
                    }
                }
            }
        }
        Automaton {
            alphabet: self.alphabet,
            initial,
            finals: self.finals,
            edges: self.edges,
            deterministic: det,
            complete: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::label::Label;

    fn sigma01() -> Alphabet {
        Alphabet::new(vec!["0", "1"]).unwrap()
    }

    fn word(a: &Alphabet, s: &str) -> Vec<SymTuple> {
        a.parse_word(s)
            .unwrap()
            .into_iter()
            .map(|c| SymTuple::from_slice(&[c]))
            .collect()
    }

    #[test]
    fn nfa_membership() {
        // (0|1)*1
        let a = sigma01();
        let mut b = Builder::new(a.clone());
        let s0 = b.state();
        let s1 = b.state();
        b.set_final(s1);
        b.edge(s0, Label::full(&a), s0);
        b.edge_sym(s0, "1", s1).unwrap();
        let m = b.finish(s0);
        assert!(!m.is_deterministic());
        assert!(m.accepts(&word(&a, "1")));
        assert!(m.accepts(&word(&a, "0101")));
        assert!(!m.accepts(&word(&a, "10")));
        assert!(!m.accepts(&word(&a, "")));
    }

    #[test]
    fn canonicalize_drops_unreachable() {
        let a = sigma01();
        let mut b = Builder::new(a.clone());
        let junk = b.state();
        let start = b.state();
        let fin = b.state();
        b.set_final(fin);
        b.edge_sym(start, "1", fin).unwrap();
        b.edge_sym(junk, "0", junk).unwrap();
        let m = b.finish(start).canonicalize();
        assert_eq!(m.num_states(), 2);
        assert_eq!(m.initial(), 0);
        assert!(m.accepts(&word(&a, "1")));
    }

    #[test]
    fn dot_contains_transitions() {
        let a = sigma01();
        let mut b = Builder::new(a.clone());
        let s0 = b.state();
        b.set_final(s0);
        b.edge_sym(s0, "0", s0).unwrap();
        let dot = b.finish(s0).to_dot().unwrap();
        assert!(dot.contains("0 -> 0 [label=\"0\"]"));
        assert!(dot.contains("doublecircle"));
    }
}
