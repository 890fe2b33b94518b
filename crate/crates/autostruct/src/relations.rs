//! Regular relations: synchronous multi-tape automata over convolutions.
//!
//! Tuples of words are read in lockstep, shorter components padded with ⋄
//! ("_" in text). The operations here — cylindrification, projection, tape
//! reordering, and length guards — are the closure steps the logic layer
//! composes into a decision procedure.

use crate::automata::det::eliminate_epsilon;
use crate::automata::{
    intersect, minimize, Alphabet, Automaton, Label, Mask, SymTuple, TapeSym, Word,
};
use crate::error::{Error, Result};

/// Zip words into one synchronous word over the tuple alphabet. `alph` is
/// the tuple alphabet of the target arity.
pub fn convolve(alph: &Alphabet, components: &[Word]) -> Vec<SymTuple> {
    assert_eq!(components.len(), alph.arity());
    let pad = alph.pad();
    let len = components.iter().map(|w| w.len()).max().unwrap_or(0);
    (0..len)
        .map(|k| {
            components
                .iter()
                .map(|w| w.get(k).copied().unwrap_or(pad))
                .collect()
        })
        .collect()
}

/// Split a synchronous word back into components, stripping padding.
pub fn deconvolve(alph: &Alphabet, word: &[SymTuple]) -> Vec<Word> {
    let pad = alph.pad();
    (0..alph.arity())
        .map(|t| {
            word.iter()
                .map(|sym| sym[t])
                .take_while(|&c| c != pad)
                .collect()
        })
        .collect()
}

/// Two-state machine enforcing, on one tape, that no letter follows ⋄.
pub fn validity_machine(alph: &Alphabet, tape: usize) -> Automaton {
    let pad = alph.pad();
    let arity = alph.arity();
    let full: Mask = (1u64 << pad) | ((1u64 << pad) - 1);
    let base: Mask = (1u64 << pad) - 1;
    let box_with = |tape_mask: Mask| -> Label {
        Label::new((0..arity).map(|i| if i == tape { tape_mask } else { full }))
            .normalize(pad)
    };
    let running = 0u32;
    let ended = 1u32;
    Automaton {
        alphabet: alph.clone(),
        initial: running,
        finals: vec![true, true],
        edges: vec![
            vec![
                (box_with(base), running),
                (box_with(1u64 << pad), ended),
            ],
            vec![(box_with(1u64 << pad), ended)],
        ],
        deterministic: true,
        complete: false,
    }
}

/// Conjunction of the per-tape validity machines: the language of all
/// well-formed convolutions of the given arity.
pub fn padding_valid_all(alph: &Alphabet) -> Result<Automaton> {
    let mut acc = validity_machine(alph, 0);
    for t in 1..alph.arity() {
        acc = intersect(&acc, &validity_machine(alph, t))?;
    }
    Ok(acc)
}

/// Run the 1-tape `domain` machine on the chosen tape of a wider alphabet,
/// letting every other tape move freely; the tape must finish inside the
/// domain and then stay padded.
fn lift_domain(domain: &Automaton, alph: &Alphabet, tape: usize) -> Automaton {
    assert_eq!(domain.alphabet().arity(), 1);
    assert!(domain.alphabet().same_base(alph));
    let pad = alph.pad();
    let arity = alph.arity();
    let full: Mask = (1u64 << pad) | ((1u64 << pad) - 1);
    let lift = |tape_mask: Mask| -> Label {
        Label::new((0..arity).map(|i| if i == tape { tape_mask } else { full }))
            .normalize(pad)
    };
    let n = domain.num_states() as usize;
    let ended = n as u32;
    let mut edges: Vec<Vec<(Label, u32)>> = Vec::with_capacity(n + 1);
    let mut finals = Vec::with_capacity(n + 1);
    for s in 0..n {
        let mut out: Vec<(Label, u32)> = domain
            .edges_from(s as u32)
            .iter()
            .map(|(l, t)| (lift(l.mask(0)), *t))
            .collect();
        if domain.is_final(s as u32) {
            out.push((lift(1u64 << pad), ended));
        }
        edges.push(out);
        finals.push(domain.is_final(s as u32));
    }
    edges.push(vec![(lift(1u64 << pad), ended)]);
    finals.push(true);
    Automaton {
        alphabet: alph.clone(),
        initial: domain.initial(),
        finals,
        edges,
        deterministic: false,
        complete: false,
    }
}

/// All valid convolutions of `arity` domain members: D^arity as one
/// synchronous language.
pub fn universe(domain: &Automaton, arity: usize) -> Result<Automaton> {
    assert!(arity >= 1);
    if arity == 1 {
        return Ok(minimize(domain));
    }
    let alph = domain.alphabet().with_arity(arity);
    let mut acc = lift_domain(domain, &alph, 0);
    for t in 1..arity {
        acc = intersect(&acc, &lift_domain(domain, &alph, t))?;
    }
    Ok(minimize(&acc))
}

/// The identity relation: all pairs (w, w) over the base alphabet.
pub fn equality_machine(base: &Alphabet) -> Automaton {
    assert_eq!(base.arity(), 1);
    let alph = base.with_arity(2);
    let eq = 0u32;
    let edges = vec![(0..base.base_len() as TapeSym)
        .map(|c| {
            (
                Label::new([1u64 << c, 1u64 << c]),
                eq,
            )
        })
        .collect()];
    Automaton {
        alphabet: alph,
        initial: eq,
        finals: vec![true],
        edges,
        deterministic: true,
        complete: false,
    }
}

/// A regular relation: an automaton over convolutions together with the
/// variable name carried by each tape.
#[derive(Clone, Debug)]
pub struct RegularRelation {
    tapes: Vec<String>,
    automaton: Automaton,
}

impl RegularRelation {
    pub fn new(tapes: Vec<String>, automaton: Automaton) -> Result<RegularRelation> {
        if tapes.len() != automaton.alphabet().arity() {
            return Err(Error::ArityMismatch {
                name: tapes.join(","),
                expected: automaton.alphabet().arity(),
                got: tapes.len(),
            });
        }
        for (i, t) in tapes.iter().enumerate() {
            if tapes[..i].contains(t) {
                return Err(Error::DuplicateTape(t.clone()));
            }
        }
        Ok(RegularRelation { tapes, automaton })
    }

    pub fn tapes(&self) -> &[String] {
        &self.tapes
    }

    pub fn arity(&self) -> usize {
        self.tapes.len()
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn into_automaton(self) -> Automaton {
        self.automaton
    }

    pub fn tape_index(&self, name: &str) -> Result<usize> {
        self.tapes
            .iter()
            .position(|t| t == name)
            .ok_or_else(|| Error::UnknownTape(name.to_string()))
    }

    /// Same machine, tapes renamed positionally.
    pub fn with_tapes(self, tapes: Vec<String>) -> Result<RegularRelation> {
        RegularRelation::new(tapes, self.automaton)
    }

    /// Membership test on a tuple of component words.
    pub fn holds(&self, components: &[Word]) -> bool {
        let w = convolve(self.automaton.alphabet(), components);
        self.automaton.accepts(&w)
    }

    /// Add an unconstrained, padding-valid tape. The new tape is inserted
    /// at its sorted position among the variable names.
    pub fn cylindrify(&self, name: &str) -> Result<RegularRelation> {
        if self.tapes.iter().any(|t| t == name) {
            return Err(Error::DuplicateTape(name.to_string()));
        }
        let pos = self.tapes.iter().filter(|t| t.as_str() < name).count();
        let old_alph = self.automaton.alphabet();
        let pad = old_alph.pad();
        let arity = old_alph.arity() + 1;
        let alph = old_alph.with_arity(arity);
        let full: Mask = (1u64 << pad) | ((1u64 << pad) - 1);
        let base: Mask = (1u64 << pad) - 1;
        // Box of letters whose old-tape part is all padding.
        let olds_pad = Label::new(
            (0..arity).map(|i| if i == pos { full } else { 1u64 << pad }),
        );
        let n = self.automaton.num_states() as usize;
        let tail = n as u32;
        let mut edges: Vec<Vec<(Label, u32)>> = Vec::with_capacity(n + 1);
        let mut finals = Vec::with_capacity(n + 1);
        for s in 0..n {
            let mut out = Vec::new();
            for (l, t) in self.automaton.edges_from(s as u32) {
                // Widen, then cut away the region where every old tape is
                // padded: the original machine never meant to move there.
                let wide = l.insert_tape(pos, full);
                for part in wide.subtract(&olds_pad) {
                    let part = part.normalize(pad);
                    if !part.is_empty(pad) {
                        out.push((part, *t));
                    }
                }
            }
            if self.automaton.is_final(s as u32) {
                let step = Label::new(
                    (0..arity).map(|i| if i == pos { base } else { 1u64 << pad }),
                )
                .normalize(pad);
                out.push((step, tail));
            }
            edges.push(out);
            finals.push(self.automaton.is_final(s as u32));
        }
        let step = Label::new(
            (0..arity).map(|i| if i == pos { base } else { 1u64 << pad }),
        )
        .normalize(pad);
        edges.push(vec![(step, tail)]);
        finals.push(true);
        let widened = Automaton {
            alphabet: alph.clone(),
            initial: self.automaton.initial(),
            finals,
            edges,
            deterministic: false,
            complete: false,
        };
        // Padding discipline on the new tape.
        let machine = intersect(&widened, &validity_machine(&alph, pos))?;
        let mut tapes = self.tapes.clone();
        tapes.insert(pos, name.to_string());
        RegularRelation::new(tapes, machine)
    }

    /// Existential projection: drop a tape, guessing its letters. Steps
    /// that only moved the dropped tape become ε-moves and are eliminated.
    pub fn project(&self, name: &str) -> Result<RegularRelation> {
        assert!(self.arity() >= 2, "projection needs arity >= 2");
        let pos = self.tape_index(name)?;
        let old_alph = self.automaton.alphabet();
        let pad = old_alph.pad();
        let arity = old_alph.arity();
        let full: Mask = (1u64 << pad) | ((1u64 << pad) - 1);
        let rest_pad = Label::new(
            (0..arity).map(|i| if i == pos { full } else { 1u64 << pad }),
        );
        let alph = old_alph.with_arity(arity - 1);
        let n = self.automaton.num_states() as usize;
        let mut edges: Vec<Vec<(Label, u32)>> = Vec::with_capacity(n);
        let mut eps: Vec<Vec<u32>> = vec![Vec::new(); n];
        for s in 0..n {
            let mut out = Vec::new();
            for (l, t) in self.automaton.edges_from(s as u32) {
                if l.and(&rest_pad, pad).is_some() {
                    eps[s].push(*t);
                }
                for part in l.subtract(&rest_pad) {
                    let dropped = part.remove_tape(pos).normalize(pad);
                    if !dropped.is_empty(pad) {
                        out.push((dropped, *t));
                    }
                }
            }
            edges.push(out);
        }
        let finals: Vec<bool> = (0..n as u32).map(|s| self.automaton.is_final(s)).collect();
        let machine = eliminate_epsilon(&alph, self.automaton.initial(), finals, edges, &eps);
        let mut tapes = self.tapes.clone();
        tapes.remove(pos);
        RegularRelation::new(tapes, machine)
    }

    /// Permute tapes into the given variable order.
    pub fn reorder_to(&self, order: &[String]) -> Result<RegularRelation> {
        if order.len() != self.tapes.len() {
            return Err(Error::ArityMismatch {
                name: order.join(","),
                expected: self.tapes.len(),
                got: order.len(),
            });
        }
        let perm: Vec<usize> = order
            .iter()
            .map(|name| self.tape_index(name))
            .collect::<Result<_>>()?;
        {
            let mut seen = vec![false; perm.len()];
            for &p in &perm {
                if seen[p] {
                    return Err(Error::DuplicateTape(order[p].clone()));
                }
                seen[p] = true;
            }
        }
        let n = self.automaton.num_states() as usize;
        let edges = (0..n)
            .map(|s| {
                self.automaton
                    .edges_from(s as u32)
                    .iter()
                    .map(|(l, t)| (l.permute(&perm), *t))
                    .collect()
            })
            .collect();
        let machine = Automaton {
            alphabet: self.automaton.alphabet().clone(),
            initial: self.automaton.initial(),
            finals: (0..n as u32).map(|s| self.automaton.is_final(s)).collect(),
            edges,
            deterministic: self.automaton.is_deterministic(),
            complete: false,
        };
        RegularRelation::new(order.to_vec(), machine)
    }

    /// Tapes in sorted-name order, the canonical order for combining.
    pub fn sorted(&self) -> RegularRelation {
        let mut order = self.tapes.clone();
        order.sort();
        self.reorder_to(&order).expect("own tapes permute")
    }

    /// Restrict to tuples where the chosen component is longer than every
    /// component in `others` by more than `slack` letters.
    pub fn length_guard(
        &self,
        tape: &str,
        others: &[String],
        slack: usize,
    ) -> Result<RegularRelation> {
        let pos = self.tape_index(tape)?;
        let other_pos: Vec<usize> = others
            .iter()
            .map(|o| self.tape_index(o))
            .collect::<Result<_>>()?;
        let alph = self.automaton.alphabet();
        let pad = alph.pad();
        let arity = alph.arity();
        let full: Mask = (1u64 << pad) | ((1u64 << pad) - 1);
        let base: Mask = (1u64 << pad) - 1;
        let padm: Mask = 1u64 << pad;

        // The counting letter: chosen tape still running, every tracked
        // tape already padded.
        let count_box = Label::new((0..arity).map(|i| {
            if i == pos {
                base
            } else if other_pos.contains(&i) {
                padm
            } else {
                full
            }
        }))
        .normalize(pad);
        // Its complement within the full box, as disjoint boxes.
        let mut rest: Vec<Label> = Vec::new();
        rest.push(Label::new((0..arity).map(|i| if i == pos { padm } else { full })));
        for (k, &oj) in other_pos.iter().enumerate() {
            rest.push(Label::new((0..arity).map(|i| {
                if i == pos {
                    base
                } else if i == oj {
                    base
                } else if other_pos[..k].contains(&i) {
                    padm
                } else {
                    full
                }
            })));
        }

        let need = slack + 1;
        let mut edges: Vec<Vec<(Label, u32)>> = Vec::with_capacity(need + 1);
        let mut finals = vec![false; need + 1];
        finals[need] = true;
        for k in 0..need {
            let mut out = vec![(count_box.clone(), (k + 1) as u32)];
            for r in &rest {
                let r = r.clone().normalize(pad);
                if !r.is_empty(pad) {
                    out.push((r, k as u32));
                }
            }
            edges.push(out);
        }
        edges.push(vec![(Label::full(alph), need as u32)]);
        let guard = Automaton {
            alphabet: alph.clone(),
            initial: 0,
            finals,
            edges,
            deterministic: true,
            complete: false,
        };
        let machine = intersect(&self.automaton, &guard)?;
        RegularRelation::new(self.tapes.clone(), machine)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{
        complement, count_words_upto, enumerate_llex, is_empty, language_equal, Builder,
    };

    fn sigma01() -> Alphabet {
        Alphabet::new(vec!["0", "1"]).unwrap()
    }

    fn parse(a: &Alphabet, s: &str) -> Word {
        a.parse_word(s).unwrap()
    }

    #[test]
    fn convolve_examples() {
        let abc = Alphabet::new(vec!["a", "b", "c"]).unwrap();
        let pair = abc.with_arity(2);
        let w = convolve(&pair, &[parse(&abc, "ab"), parse(&abc, "c")]);
        assert_eq!(pair.format_sym(&w[0]), "a,c");
        assert_eq!(pair.format_sym(&w[1]), "b,_");
        assert_eq!(w.len(), 2);

        assert!(convolve(&pair, &[Vec::new(), Vec::new()]).is_empty());

        let a = sigma01();
        let triple = a.with_arity(3);
        let parts = [parse(&a, "11"), parse(&a, "101"), parse(&a, "0001")];
        let back = deconvolve(&triple, &convolve(&triple, &parts));
        assert_eq!(back, parts.to_vec());
    }

    #[test]
    fn validity_rejects_resumed_tape() {
        let a = sigma01().with_arity(2);
        let v = padding_valid_all(&a).unwrap();
        let ok: Vec<SymTuple> = vec![
            a.parse_sym("0,1").unwrap(),
            a.parse_sym("0,_").unwrap(),
        ];
        let bad: Vec<SymTuple> = vec![
            a.parse_sym("0,_").unwrap(),
            a.parse_sym("0,1").unwrap(),
        ];
        assert!(v.accepts(&ok));
        assert!(!v.accepts(&bad));
    }

    #[test]
    fn universe_counts_domain_pairs() {
        // domain 0*1: members by length: 1, 01, 001, ...
        let a = sigma01();
        let mut b = Builder::new(a.clone());
        let s0 = b.state();
        let s1 = b.state();
        b.set_final(s1);
        b.edge_sym(s0, "0", s0).unwrap();
        b.edge_sym(s0, "1", s1).unwrap();
        let dom = b.finish(s0);
        let u = universe(&dom, 2).unwrap();
        // Pairs (x, y) with |x|,|y| ≤ 3: 3 choices each; convolution length
        // = max of the two, so every pair appears once.
        let total = count_words_upto(&u, 3).total();
        assert_eq!(total, 9u32.into());
    }

    fn equality_rel() -> RegularRelation {
        let base = sigma01();
        RegularRelation::new(
            vec!["x".into(), "y".into()],
            equality_machine(&base),
        )
        .unwrap()
    }

    #[test]
    fn equality_holds_on_equal_words() {
        let r = equality_rel();
        let a = sigma01();
        assert!(r.holds(&[parse(&a, "0110"), parse(&a, "0110")]));
        assert!(!r.holds(&[parse(&a, "01"), parse(&a, "011")]));
        assert!(r.holds(&[Vec::new(), Vec::new()]));
    }

    #[test]
    fn cylindrify_then_project_roundtrip() {
        let r = equality_rel();
        let c = r.cylindrify("z").unwrap();
        assert_eq!(c.tapes(), &["x", "y", "z"]);
        let back = c.project("z").unwrap();
        assert!(language_equal(back.automaton(), r.automaton()).unwrap());
    }

    #[test]
    fn cylindrify_counts_new_tape_freely() {
        // Relation {(0, 0)} over base {0,1}.
        let a = sigma01();
        let pair = a.with_arity(2);
        let mut b = Builder::new(pair);
        let s0 = b.state();
        let s1 = b.state();
        b.set_final(s1);
        b.edge_sym(s0, "0,0", s1).unwrap();
        let r = RegularRelation::new(
            vec!["x".into(), "y".into()],
            b.finish(s0),
        )
        .unwrap();
        let c = r.cylindrify("z").unwrap();
        // z ranges over {λ, 0, 1} within convolution length 1 → 3 tuples.
        let total = count_words_upto(c.automaton(), 1).total();
        assert_eq!(total, 3u32.into());
    }

    #[test]
    fn project_equality_gives_all_words() {
        let r = equality_rel();
        let p = r.project("y").unwrap();
        assert_eq!(p.tapes(), &["x"]);
        let full = Automaton::full_lang(sigma01());
        assert!(language_equal(p.automaton(), &full).unwrap());
    }

    #[test]
    fn project_empty_is_empty() {
        let a = sigma01().with_arity(2);
        let empty = Automaton::empty_lang(a);
        let r = RegularRelation::new(vec!["x".into(), "y".into()], empty).unwrap();
        assert!(is_empty(r.project("x").unwrap().automaton()));
    }

    #[test]
    fn reorder_swaps_components() {
        // Relation {(w, w1) : w ∈ {0,1}*}: y is x with "1" appended.
        let a = sigma01();
        let pair = a.with_arity(2);
        let mut b = Builder::new(pair);
        let run = b.state();
        let done = b.state();
        b.set_final(done);
        b.edge_sym(run, "0,0", run).unwrap();
        b.edge_sym(run, "1,1", run).unwrap();
        b.edge_sym(run, "_,1", done).unwrap();
        let r = RegularRelation::new(vec!["x".into(), "y".into()], b.finish(run)).unwrap();
        let swapped = r
            .reorder_to(&["y".to_string(), "x".to_string()])
            .unwrap();
        assert!(r.holds(&[parse(&a, "01"), parse(&a, "011")]));
        // After the swap the first tape carries y.
        assert!(swapped.holds(&[parse(&a, "011"), parse(&a, "01")]));
        assert!(!swapped.holds(&[parse(&a, "01"), parse(&a, "011")]));
        let twice = swapped
            .reorder_to(&["x".to_string(), "y".to_string()])
            .unwrap();
        assert!(language_equal(twice.automaton(), r.automaton()).unwrap());
    }

    #[test]
    fn length_guard_on_equality_is_empty() {
        let r = equality_rel();
        let g = r
            .length_guard("x", &["y".to_string()], 0)
            .unwrap();
        assert!(is_empty(g.automaton()));
    }

    #[test]
    fn length_guard_matches_brute_force() {
        // All pairs over {0,1}, guard |x| > |y| + 2, check ≤ length 5.
        let a = sigma01();
        let pair = a.with_arity(2);
        let all = intersect(
            &Automaton::full_lang(pair.clone()),
            &padding_valid_all(&pair).unwrap(),
        )
        .unwrap();
        let r = RegularRelation::new(vec!["x".into(), "y".into()], all).unwrap();
        let g = r.length_guard("x", &["y".to_string()], 2).unwrap();
        let mut got: Vec<(Word, Word)> = enumerate_llex(g.automaton(), 5)
            .map(|w| {
                let c = deconvolve(&pair, &w);
                (c[0].clone(), c[1].clone())
            })
            .collect();
        got.sort();
        let mut want: Vec<(Word, Word)> = Vec::new();
        let mut words: Vec<Word> = vec![Vec::new()];
        for _ in 0..5 {
            let prev = words.clone();
            for w in prev {
                if w.len() < 5 {
                    for c in 0..2u8 {
                        let mut w2 = w.clone();
                        w2.push(c);
                        if !words.contains(&w2) {
                            words.push(w2);
                        }
                    }
                }
            }
        }
        for x in &words {
            for y in &words {
                if x.len() > y.len() + 2 {
                    want.push((x.clone(), y.clone()));
                }
            }
        }
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn operations_preserve_padding_validity() {
        let r = equality_rel();
        let candidates = vec![
            r.cylindrify("z").unwrap(),
            r.cylindrify("z").unwrap().project("x").unwrap(),
            r.length_guard("y", &["x".to_string()], 1).unwrap(),
        ];
        for rel in candidates {
            let alph = rel.automaton().alphabet().clone();
            let violations = intersect(
                rel.automaton(),
                &complement(&padding_valid_all(&alph).unwrap()),
            )
            .unwrap();
            assert!(is_empty(&violations));
        }
    }
}
