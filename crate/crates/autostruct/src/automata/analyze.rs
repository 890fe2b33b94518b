//! Reachability, finiteness, exact counting, and ordered enumeration.

use super::alphabet::SymTuple;
use super::det::determinize;
use super::label::Label;
use super::machine::Automaton;
use num_bigint::BigUint;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Exact per-length word counts, arbitrary precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub counts: Vec<BigUint>,
}

impl CountTable {
    /// counts[0] + ... + counts[m] for each m.
    pub fn cumulative(&self) -> Vec<BigUint> {
        let mut acc = BigUint::from(0u32);
        self.counts
            .iter()
            .map(|c| {
                acc += c;
                acc.clone()
            })
            .collect()
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }
}

pub fn reachable(a: &Automaton) -> Vec<bool> {
    let mut seen = vec![false; a.edges.len()];
    let mut stack = vec![a.initial];
    seen[a.initial as usize] = true;
    while let Some(s) = stack.pop() {
        for (_, t) in &a.edges[s as usize] {
            if !seen[*t as usize] {
                seen[*t as usize] = true;
                stack.push(*t);
            }
        }
    }
    seen
}

pub fn coreachable(a: &Automaton) -> Vec<bool> {
    let n = a.edges.len();
    let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (s, out) in a.edges.iter().enumerate() {
        for (_, t) in out {
            rev[*t as usize].push(s as u32);
        }
    }
    let mut seen = vec![false; n];
    let mut stack: Vec<u32> = (0..n as u32).filter(|&s| a.finals[s as usize]).collect();
    for &s in &stack {
        seen[s as usize] = true;
    }
    while let Some(s) = stack.pop() {
        for &p in &rev[s as usize] {
            if !seen[p as usize] {
                seen[p as usize] = true;
                stack.push(p);
            }
        }
    }
    seen
}

/// Restrict to states both reachable and co-reachable. An automaton whose
/// initial state is dead collapses to the one-state empty-language machine.
pub fn trim(a: &Automaton) -> Automaton {
    let r = reachable(a);
    let c = coreachable(a);
    let live: Vec<bool> = r.iter().zip(&c).map(|(x, y)| *x && *y).collect();
    if !live[a.initial as usize] {
        return Automaton::empty_lang(a.alphabet.clone());
    }
    let mut map = vec![u32::MAX; live.len()];
    let mut kept = 0u32;
    for (s, l) in live.iter().enumerate() {
        if *l {
            map[s] = kept;
            kept += 1;
        }
    }
    let mut edges: Vec<Vec<(Label, u32)>> = Vec::with_capacity(kept as usize);
    let mut finals = Vec::with_capacity(kept as usize);
    for (s, l) in live.iter().enumerate() {
        if !*l {
            continue;
        }
        edges.push(
            a.edges[s]
                .iter()
                .filter(|(_, t)| live[*t as usize])
                .map(|(lab, t)| (lab.clone(), map[*t as usize]))
                .collect(),
        );
        finals.push(a.finals[s]);
    }
    Automaton {
        alphabet: a.alphabet.clone(),
        initial: map[a.initial as usize],
        finals,
        edges,
        deterministic: a.deterministic,
        complete: false,
    }
}

pub fn is_empty(a: &Automaton) -> bool {
    let r = reachable(a);
    !r.iter()
        .zip(&a.finals)
        .any(|(reach, fin)| *reach && *fin)
}

/// True when the accepted language is a finite set: the trimmed machine has
/// no cycle (every edge label holds at least one letter, so any live cycle
/// pumps).
pub fn is_finite(a: &Automaton) -> bool {
    let t = trim(a);
    let n = t.edges.len();
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut color = vec![0u8; n];
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        color[start] = 1;
        while let Some((s, i)) = stack.pop() {
            if i < t.edges[s].len() {
                stack.push((s, i + 1));
                let nxt = t.edges[s][i].1 as usize;
                match color[nxt] {
                    0 => {
                        color[nxt] = 1;
                        stack.push((nxt, 0));
                    }
                    1 => return false,
                    _ => {}
                }
            } else {
                color[s] = 2;
            }
        }
    }
    true
}

fn trimmed_dfa(a: &Automaton) -> Automaton {
    trim(&determinize(a))
}

/// Exact number of accepted words of each length 0..=n.
pub fn count_words_upto(a: &Automaton, n: usize) -> CountTable {
    let d = trimmed_dfa(a);
    let pad = d.alphabet.pad();
    let states = d.edges.len();
    let mut cur: Vec<BigUint> = vec![BigUint::from(0u32); states];
    cur[d.initial as usize] = BigUint::from(1u32);
    let mut counts = Vec::with_capacity(n + 1);
    let tally = |v: &[BigUint]| -> BigUint {
        v.iter()
            .zip(&d.finals)
            .filter(|(_, f)| **f)
            .map(|(c, _)| c)
            .sum()
    };
    counts.push(tally(&cur));
    for _ in 1..=n {
        let mut next: Vec<BigUint> = vec![BigUint::from(0u32); states];
        for (s, c) in cur.iter().enumerate() {
            if c == &BigUint::from(0u32) {
                continue;
            }
            for (label, t) in &d.edges[s] {
                next[*t as usize] += c * BigUint::from(label.size(pad));
            }
        }
        counts.push(tally(&next));
        cur = next;
    }
    CountTable { counts }
}

/// Number of length-n words that can be extended (by zero or more letters)
/// to an accepted word.
pub fn prefix_count(a: &Automaton, n: usize) -> BigUint {
    let d = trimmed_dfa(a);
    let pad = d.alphabet.pad();
    let states = d.edges.len();
    let mut cur: Vec<BigUint> = vec![BigUint::from(0u32); states];
    if is_empty(&d) {
        return BigUint::from(0u32);
    }
    cur[d.initial as usize] = BigUint::from(1u32);
    for _ in 0..n {
        let mut next: Vec<BigUint> = vec![BigUint::from(0u32); states];
        for (s, c) in cur.iter().enumerate() {
            if c == &BigUint::from(0u32) {
                continue;
            }
            for (label, t) in &d.edges[s] {
                next[*t as usize] += c * BigUint::from(label.size(pad));
            }
        }
        cur = next;
    }
    // Every state of the trimmed machine reaches a final state.
    cur.iter().sum()
}

const BITS: usize = 64;

fn get_bit(v: &[u64], i: usize) -> bool {
    v[i / BITS] >> (i % BITS) & 1 == 1
}

fn set_bit(v: &mut [u64], i: usize) {
    v[i / BITS] |= 1 << (i % BITS);
}

struct Frame {
    heap: BinaryHeap<Reverse<(SymTuple, usize)>>,
    iters: Vec<super::label::LabelSyms>,
    targets: Vec<u32>,
}

impl Frame {
    fn new(d: &Automaton, feasible: &[Vec<u64>], state: u32, rem: usize) -> Frame {
        let pad = d.alphabet.pad();
        let mut heap = BinaryHeap::new();
        let mut iters = Vec::new();
        let mut targets = Vec::new();
        for (label, t) in &d.edges[state as usize] {
            if !get_bit(&feasible[*t as usize], rem - 1) {
                continue;
            }
            let mut it = label.syms(pad);
            if let Some(first) = it.next() {
                heap.push(Reverse((first, iters.len())));
                iters.push(it);
                targets.push(*t);
            }
        }
        Frame {
            heap,
            iters,
            targets,
        }
    }
}

/// Accepted words of length at most `max_len`, in length-lexicographic
/// order (shorter first; same length compared letter-wise in alphabet
/// order, padding last).
pub struct LlexIter {
    dfa: Automaton,
    feasible: Vec<Vec<u64>>,
    max_len: usize,
    next_len: usize,
    cur_len: usize,
    stack: Vec<Frame>,
    word: Vec<SymTuple>,
    emitted_epsilon: bool,
}

pub fn enumerate_llex(a: &Automaton, max_len: usize) -> LlexIter {
    let d = trimmed_dfa(a);
    let states = d.edges.len();
    let words = max_len / BITS + 1;
    let mut feasible: Vec<Vec<u64>> = vec![vec![0; words]; states];
    for (s, f) in d.finals.iter().enumerate() {
        if *f {
            set_bit(&mut feasible[s], 0);
        }
    }
    for len in 1..=max_len {
        let prev: Vec<bool> = (0..states).map(|s| get_bit(&feasible[s], len - 1)).collect();
        for s in 0..states {
            if d.edges[s].iter().any(|(_, t)| prev[*t as usize]) {
                set_bit(&mut feasible[s], len);
            }
        }
    }
    LlexIter {
        dfa: d,
        feasible,
        max_len,
        next_len: 0,
        cur_len: 0,
        stack: Vec::new(),
        word: Vec::new(),
        emitted_epsilon: false,
    }
}

impl Iterator for LlexIter {
    type Item = Vec<SymTuple>;

    fn next(&mut self) -> Option<Vec<SymTuple>> {
        loop {
            if self.stack.is_empty() {
                if self.next_len == 0 {
                    self.next_len = 1;
                    if !self.emitted_epsilon
                        && self.dfa.finals[self.dfa.initial as usize]
                    {
                        self.emitted_epsilon = true;
                        return Some(Vec::new());
                    }
                }
                // Start the next length with any accepted word.
                let init = self.dfa.initial as usize;
                while self.next_len <= self.max_len
                    && !get_bit(&self.feasible[init], self.next_len)
                {
                    self.next_len += 1;
                }
                if self.next_len > self.max_len {
                    return None;
                }
                self.cur_len = self.next_len;
                self.next_len += 1;
                self.word.clear();
                self.stack.push(Frame::new(
                    &self.dfa,
                    &self.feasible,
                    self.dfa.initial,
                    self.cur_len,
                ));
                continue;
            }
            let top = self.stack.last_mut().expect("stack nonempty");
            match top.heap.pop() {
                Some(Reverse((sym, idx))) => {
                    if let Some(nxt) = top.iters[idx].next() {
                        top.heap.push(Reverse((nxt, idx)));
                    }
                    let tgt = top.targets[idx];
                    self.word.push(sym);
                    if self.word.len() == self.cur_len {
                        let out = self.word.clone();
                        self.word.pop();
                        return Some(out);
                    }
                    let rem = self.cur_len - self.word.len();
                    self.stack
                        .push(Frame::new(&self.dfa, &self.feasible, tgt, rem));
                }
                None => {
                    self.stack.pop();
                    if !self.stack.is_empty() {
                        self.word.pop();
                    }
                }
            }
        }
    }
}

/// Length-lex least accepted word, if the language is non-empty.
pub fn shortest_word(a: &Automaton) -> Option<Vec<SymTuple>> {
    let d = trimmed_dfa(a);
    let bound = d.num_states() as usize;
    enumerate_llex(&d, bound).next()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::alphabet::Alphabet;
    use crate::automata::machine::Builder;
    use proptest::prelude::*;

    fn sigma01() -> Alphabet {
        Alphabet::new(vec!["0", "1"]).unwrap()
    }

    fn all_words(a: &Alphabet, n: usize) -> Vec<Vec<SymTuple>> {
        let mut out: Vec<Vec<SymTuple>> = vec![Vec::new()];
        let mut layer: Vec<Vec<SymTuple>> = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &layer {
                for c in 0..a.base_len() as u8 {
                    let mut w2 = w.clone();
                    w2.push(SymTuple::from_slice(&[c]));
                    next.push(w2);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// 0*1
    fn zeros_then_one() -> Automaton {
        let a = sigma01();
        let mut b = Builder::new(a);
        let s0 = b.state();
        let s1 = b.state();
        b.set_final(s1);
        b.edge_sym(s0, "0", s0).unwrap();
        b.edge_sym(s0, "1", s1).unwrap();
        b.finish(s0)
    }

    /// {0,1}*1 ∪ {λ}
    fn ends_in_one_or_empty() -> Automaton {
        let a = sigma01();
        let mut b = Builder::new(a);
        let start = b.state();
        let after_zero = b.state();
        let after_one = b.state();
        b.set_final(start);
        b.set_final(after_one);
        for s in [start, after_zero, after_one] {
            b.edge_sym(s, "0", after_zero).unwrap();
            b.edge_sym(s, "1", after_one).unwrap();
        }
        b.finish(start)
    }

    fn fmt(a: &Alphabet, w: &[SymTuple]) -> String {
        w.iter().map(|s| a.format_sym(s)).collect::<Vec<_>>().join("")
    }

    #[test]
    fn emptiness_and_finiteness() {
        let m = zeros_then_one();
        assert!(!is_empty(&m));
        assert!(!is_finite(&m));

        let a = sigma01();
        let mut b = Builder::new(a.clone());
        let s0 = b.state();
        b.set_final(s0);
        let just_empty = b.finish(s0);
        assert!(!is_empty(&just_empty));
        assert!(is_finite(&just_empty));

        let mut b = Builder::new(a);
        let s0 = b.state();
        b.edge_sym(s0, "0", s0).unwrap();
        let no_finals = b.finish(s0);
        assert!(is_empty(&no_finals));
        assert!(is_finite(&no_finals));
    }

    #[test]
    fn count_examples() {
        let t = count_words_upto(&zeros_then_one(), 3);
        let cum = t.cumulative();
        assert_eq!(cum[3], BigUint::from(3u32));

        let a = sigma01();
        let full = Automaton::full_lang(a);
        let t = count_words_upto(&full, 3);
        assert_eq!(t.cumulative()[3], BigUint::from(15u32));
    }

    #[test]
    fn prefix_count_examples() {
        assert_eq!(prefix_count(&zeros_then_one(), 2), BigUint::from(2u32));
        let full = Automaton::full_lang(sigma01());
        assert_eq!(prefix_count(&full, 3), BigUint::from(8u32));

        let a = sigma01();
        let mut b = Builder::new(a);
        let s0 = b.state();
        let s1 = b.state();
        b.set_final(s1);
        b.edge_sym(s0, "1", s1).unwrap();
        let just_one = b.finish(s0);
        assert_eq!(prefix_count(&just_one, 2), BigUint::from(0u32));
    }

    #[test]
    fn enumerate_examples() {
        let a = sigma01();
        let words: Vec<String> = enumerate_llex(&zeros_then_one(), 3)
            .map(|w| fmt(&a, &w))
            .collect();
        assert_eq!(words, vec!["1", "01", "001"]);

        let words: Vec<String> = enumerate_llex(&ends_in_one_or_empty(), 2)
            .map(|w| fmt(&a, &w))
            .collect();
        assert_eq!(words, vec!["", "1", "01", "11"]);

        let mut b = Builder::new(a);
        let s0 = b.state();
        let empty = b.finish(s0);
        assert_eq!(enumerate_llex(&empty, 4).count(), 0);
    }

    #[test]
    fn shortest_word_examples() {
        let a = sigma01();
        assert_eq!(
            shortest_word(&zeros_then_one()).map(|w| fmt(&a, &w)),
            Some("1".to_string())
        );
        let mut b = Builder::new(a);
        let s0 = b.state();
        let empty = b.finish(s0);
        assert_eq!(shortest_word(&empty), None);
    }

    fn arb_nfa() -> impl Strategy<Value = Automaton> {
        let edge = (0u32..4, 0u8..2, 0u32..4);
        (
            proptest::collection::vec(edge, 0..14),
            proptest::collection::vec(proptest::bool::ANY, 4),
        )
            .prop_map(|(edges, finals)| {
                let a = Alphabet::new(vec!["0", "1"]).unwrap();
                let mut b = Builder::new(a);
                let states: Vec<u32> = (0..4).map(|_| b.state()).collect();
                for (i, f) in finals.iter().enumerate() {
                    if *f {
                        b.set_final(states[i]);
                    }
                }
                for (from, sym, to) in edges {
                    let s = if sym == 0 { "0" } else { "1" };
                    b.edge_sym(states[from as usize], s, states[to as usize])
                        .unwrap();
                }
                b.finish(states[0])
            })
    }

    proptest! {
        /// Enumeration agrees with direct simulation of every short word.
        #[test]
        fn enumerate_matches_simulation(m in arb_nfa()) {
            let got: Vec<Vec<SymTuple>> = enumerate_llex(&m, 6).collect();
            let want: Vec<Vec<SymTuple>> = all_words(m.alphabet(), 6)
                .into_iter()
                .filter(|w| m.accepts(w))
                .collect();
            // Same set...
            let mut sorted = got.clone();
            sorted.sort();
            let mut want_sorted = want.clone();
            want_sorted.sort();
            prop_assert_eq!(&sorted, &want_sorted);
            // ...and length-lex order.
            for pair in got.windows(2) {
                let key = |w: &Vec<SymTuple>| (w.len(), w.clone());
                prop_assert!(key(&pair[0]) < key(&pair[1]));
            }
        }

        /// Counting agrees with enumeration for every length.
        #[test]
        fn count_matches_enumeration(m in arb_nfa()) {
            let table = count_words_upto(&m, 6);
            let mut by_len = vec![0u64; 7];
            for w in enumerate_llex(&m, 6) {
                by_len[w.len()] += 1;
            }
            for (i, c) in by_len.iter().enumerate() {
                prop_assert_eq!(&table.counts[i], &BigUint::from(*c));
            }
        }

        /// Growth bounds relating prefix counts and domain counts, with the
        /// state count of the trimmed deterministic machine as the constant.
        /// Both bounds assume n is at least that constant.
        #[test]
        fn growth_bounds(m in arb_nfa()) {
            let d = trim(&determinize(&m));
            let c = d.num_states() as usize;
            let table = count_words_upto(&m, 13);
            let cum = table.cumulative();
            let two = BigUint::from(2u32);
            for n in c..=12 {
                let bound = two.pow(c as u32) * &cum[n];
                prop_assert!(prefix_count(&m, n) <= bound);
                for k in 0..=3usize.min(13 - n) {
                    let bound = two.pow((k + c) as u32) * &cum[n];
                    prop_assert!(cum[n + k] <= bound);
                }
            }
        }
    }
}
