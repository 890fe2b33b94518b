//! Subset construction, minimization, and the boolean closure operations.

use super::alphabet::Alphabet;
use super::label::{Label, Mask};
use super::machine::Automaton;
use crate::error::{Error, Result};
use std::collections::{HashMap, HashSet};

/// Cheap global counters for performance investigations (test-only use).
pub mod stats {
    use std::sync::atomic::{AtomicU64, Ordering::Relaxed};
    pub static DET_CALLS: AtomicU64 = AtomicU64::new(0);
    pub static DET_OUT_STATES: AtomicU64 = AtomicU64::new(0);
    pub static DET_MAX_OUT: AtomicU64 = AtomicU64::new(0);
    pub static DET_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static PROD_NANOS: AtomicU64 = AtomicU64::new(0);
    pub static PROD_MAX_OUT: AtomicU64 = AtomicU64::new(0);
    pub static REDUCE_NANOS: AtomicU64 = AtomicU64::new(0);

    pub fn reset() {
        for c in [
            &DET_CALLS,
            &DET_OUT_STATES,
            &DET_MAX_OUT,
            &DET_NANOS,
            &PROD_NANOS,
            &PROD_MAX_OUT,
            &REDUCE_NANOS,
        ] {
            c.store(0, Relaxed);
        }
    }

    pub fn report() -> String {
        format!(
            "det: {} calls, {} total states, max {}, {:.2}s | prod: {:.2}s, max {} | reduce: {:.2}s",
            DET_CALLS.load(Relaxed),
            DET_OUT_STATES.load(Relaxed),
            DET_MAX_OUT.load(Relaxed),
            DET_NANOS.load(Relaxed) as f64 / 1e9,
            PROD_NANOS.load(Relaxed) as f64 / 1e9,
            PROD_MAX_OUT.load(Relaxed),
            REDUCE_NANOS.load(Relaxed) as f64 / 1e9,
        )
    }

    pub fn bump(counter: &AtomicU64, v: u64) {
        counter.fetch_add(v, Relaxed);
    }

    pub fn bump_max(counter: &AtomicU64, v: u64) {
        counter.fetch_max(v, Relaxed);
    }
}

/// Refine the full per-tape mask by every mask in `seen`, producing the
/// coarsest partition in which each input mask is a union of parts.
fn atoms_of(full: Mask, seen: &[Mask]) -> Vec<Mask> {
    let mut atoms = vec![full];
    for &m in seen {
        let mut next = Vec::with_capacity(atoms.len() * 2);
        for a in atoms {
            let inside = a & m;
            let outside = a & !m;
            if inside != 0 {
                next.push(inside);
            }
            if outside != 0 {
                next.push(outside);
            }
        }
        atoms = next;
    }
    atoms
}

/// Canonical box cover of a union of boxes: partitions the first tape's
/// values into slice-equivalence classes (values whose residual sets
/// coincide) and recurses on the residuals. The result depends only on
/// the covered SET, not on the incoming carving, and is usually far
/// smaller than an atom-level decomposition.
fn canonical_cover(boxes: &[Vec<Mask>]) -> Vec<Vec<Mask>> {
    if boxes.is_empty() {
        return Vec::new();
    }
    let arity = boxes[0].len();
    if arity == 1 {
        let m = boxes.iter().fold(0u64, |acc, b| acc | b[0]);
        return vec![vec![m]];
    }
    // Group first-tape values by the set of boxes covering them.
    let present = boxes.iter().fold(0u64, |acc, b| acc | b[0]);
    let mut groups: HashMap<Vec<usize>, Mask> = HashMap::new();
    for v in 0..64u32 {
        if present & (1u64 << v) == 0 {
            continue;
        }
        let key: Vec<usize> = boxes
            .iter()
            .enumerate()
            .filter(|(_, b)| b[0] & (1u64 << v) != 0)
            .map(|(i, _)| i)
            .collect();
        *groups.entry(key).or_insert(0) |= 1u64 << v;
    }
    // Canonicalize each group's residual cover; merge groups whose
    // residual sets turn out equal.
    let mut by_residual: std::collections::BTreeMap<Vec<Vec<Mask>>, Mask> =
        std::collections::BTreeMap::new();
    for (key, mask) in groups {
        let sub: Vec<Vec<Mask>> = key.iter().map(|&i| boxes[i][1..].to_vec()).collect();
        *by_residual.entry(canonical_cover(&sub)).or_insert(0) |= mask;
    }
    let mut out = Vec::new();
    for (residuals, mask) in by_residual {
        for r in residuals {
            let mut b = Vec::with_capacity(arity);
            b.push(mask);
            b.extend(r);
            out.push(b);
        }
    }
    out.sort();
    out
}

/// Merge same-target boxes into the canonical cover of their union;
/// keeps transition tables small and carving-independent.
fn coalesce(mut out: Vec<(Label, u32)>, pad: u8) -> Vec<(Label, u32)> {
    out.sort_by_key(|(_, t)| *t);
    let mut merged: Vec<(Label, u32)> = Vec::with_capacity(out.len());
    let mut i = 0;
    while i < out.len() {
        let t = out[i].1;
        let mut j = i;
        while j < out.len() && out[j].1 == t {
            j += 1;
        }
        let group = &out[i..j];
        let arity = group[0].0.arity();
        let mut union: Vec<Mask> = vec![0; arity];
        let mut total: u128 = 0;
        for (l, _) in group {
            for (k, u) in union.iter_mut().enumerate() {
                *u |= l.mask(k);
            }
            total += l.size(pad);
        }
        let candidate = Label::new(union).normalize(pad);
        if candidate.size(pad) == total {
            // The union is itself a box (single-label groups always are).
            merged.push((candidate, t));
        } else {
            let boxes: Vec<Vec<Mask>> = group.iter().map(|(l, _)| l.masks().to_vec()).collect();
            for masks in canonical_cover(&boxes) {
                let label = Label::new(masks).normalize(pad);
                if !label.is_empty(pad) {
                    merged.push((label, t));
                }
            }
        }
        i = j;
    }
    merged.sort_by(|a, b| (a.0.masks(), a.1).cmp(&(b.0.masks(), b.1)));
    merged
}

/// Subset construction over factored labels. Outgoing labels of each
/// macro-state are split into per-tape atoms; every atom combination is a
/// box that behaves uniformly, so the result is deterministic and complete
/// (the empty macro-state acts as the sink). Only reachable macro-states
/// are built.
pub(crate) fn determinize_core(
    alphabet: &Alphabet,
    edges: &[Vec<(Label, u32)>],
    finals: &[bool],
    init: &[u32],
) -> Automaton {
    let t_start = std::time::Instant::now();
    let pad = alphabet.pad();
    let arity = alphabet.arity();
    let full: Mask = (1u64 << pad) | ((1u64 << pad) - 1);

    let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut members: Vec<Vec<u32>> = Vec::new();
    let mut out_edges: Vec<Vec<(Label, u32)>> = Vec::new();
    let mut out_finals: Vec<bool> = Vec::new();

    let mut intern = |set: Vec<u32>,
                      members: &mut Vec<Vec<u32>>,
                      out_finals: &mut Vec<bool>|
     -> u32 {
        if let Some(&id) = ids.get(&set) {
            return id;
        }
        let id = members.len() as u32;
        out_finals.push(set.iter().any(|&s| finals[s as usize]));
        ids.insert(set.clone(), id);
        members.push(set);
        id
    };

    let mut init_set: Vec<u32> = init.to_vec();
    init_set.sort_unstable();
    init_set.dedup();
    let initial = intern(init_set, &mut members, &mut out_finals);

    let mut next_macro = initial as usize;
    while next_macro < members.len() {
        let macro_id = next_macro;
        next_macro += 1;

        // Gather the member edges once, deduplicated: reversal-subset
        // states repeat identical edges heavily.
        let local_set: HashSet<(Label, u32)> = members[macro_id]
            .iter()
            .flat_map(|&s| edges[s as usize].iter().cloned())
            .collect();
        let local: Vec<(Label, u32)> = local_set.into_iter().collect();

        // Per-tape atoms refined by every mask that appears locally.
        let mut tape_atoms: Vec<Vec<Mask>> = Vec::with_capacity(arity);
        for t in 0..arity {
            let mut seen: Vec<Mask> = local.iter().map(|(l, _)| l.mask(t)).collect();
            seen.sort_unstable();
            seen.dedup();
            tape_atoms.push(atoms_of(full, &seen));
        }

        let mut produced: Vec<(Label, u32)> = Vec::new();

        // DFS over atom combinations; `alive` holds the edges whose label
        // still covers every atom chosen so far. An empty `alive` set means
        // the whole remaining subtree goes to the sink, emitted as one box.
        struct Dfs<'a> {
            tape_atoms: &'a [Vec<Mask>],
            local: &'a [(Label, u32)],
            full: Mask,
            arity: usize,
        }
        impl Dfs<'_> {
            #[allow(clippy::too_many_arguments)]
            fn go(
                &self,
                depth: usize,
                chosen: &mut Vec<Mask>,
                alive: &[usize],
                sink: &mut dyn FnMut(Vec<Mask>, Vec<u32>),
            ) {
                if alive.is_empty() {
                    let mut masks = chosen.clone();
                    masks.extend(std::iter::repeat(self.full).take(self.arity - depth));
                    sink(masks, Vec::new());
                    return;
                }
                if depth == self.arity {
                    let mut targets: Vec<u32> =
                        alive.iter().map(|&e| self.local[e].1).collect();
                    targets.sort_unstable();
                    targets.dedup();
                    sink(chosen.clone(), targets);
                    return;
                }
                for &atom in &self.tape_atoms[depth] {
                    let next_alive: Vec<usize> = alive
                        .iter()
                        .copied()
                        .filter(|&e| self.local[e].0.mask(depth) & atom == atom)
                        .collect();
                    chosen.push(atom);
                    self.go(depth + 1, chosen, &next_alive, sink);
                    chosen.pop();
                }
            }
        }

        let dfs = Dfs {
            tape_atoms: &tape_atoms,
            local: &local,
            full,
            arity,
        };
        let all: Vec<usize> = (0..local.len()).collect();
        let mut emitted: Vec<(Vec<Mask>, Vec<u32>)> = Vec::new();
        dfs.go(0, &mut Vec::new(), &all, &mut |masks, targets| {
            emitted.push((masks, targets));
        });
        for (masks, targets) in emitted {
            let label = Label::new(masks).normalize(pad);
            if label.is_empty(pad) {
                continue;
            }
            let tgt = intern(targets, &mut members, &mut out_finals);
            produced.push((label, tgt));
        }

        out_edges.push(Vec::new());
        out_edges[macro_id] = coalesce(produced, pad);
    }

    stats::bump(&stats::DET_CALLS, 1);
    stats::bump(&stats::DET_OUT_STATES, members.len() as u64);
    stats::bump_max(&stats::DET_MAX_OUT, members.len() as u64);
    stats::bump(&stats::DET_NANOS, t_start.elapsed().as_nanos() as u64);
    Automaton {
        alphabet: alphabet.clone(),
        initial,
        finals: out_finals,
        edges: out_edges,
        deterministic: true,
        complete: true,
    }
}

pub fn determinize(a: &Automaton) -> Automaton {
    if a.deterministic && a.complete {
        return a.clone();
    }
    determinize_core(&a.alphabet, &a.edges, &a.finals, &[a.initial])
}

/// Remove ε-moves by closing each state over them: a state inherits the
/// labeled edges and acceptance of everything in its ε-closure.
pub(crate) fn eliminate_epsilon(
    alph: &Alphabet,
    initial: u32,
    finals: Vec<bool>,
    edges: Vec<Vec<(Label, u32)>>,
    eps: &[Vec<u32>],
) -> Automaton {
    let n = edges.len();
    let closure = |s: usize| -> Vec<usize> {
        let mut seen = vec![false; n];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(x) = stack.pop() {
            for &t in &eps[x] {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t as usize);
                }
            }
        }
        (0..n).filter(|&i| seen[i]).collect()
    };
    let mut new_edges: Vec<Vec<(Label, u32)>> = Vec::with_capacity(n);
    let mut new_finals = vec![false; n];
    for s in 0..n {
        let mut out: HashSet<(Label, u32)> = HashSet::new();
        for m in closure(s) {
            if finals[m] {
                new_finals[s] = true;
            }
            for e in &edges[m] {
                out.insert(e.clone());
            }
        }
        let mut out: Vec<(Label, u32)> = out.into_iter().collect();
        out.sort_by(|a, b| (a.0.masks(), a.1).cmp(&(b.0.masks(), b.1)));
        new_edges.push(out);
    }
    Automaton {
        alphabet: alph.clone(),
        initial,
        finals: new_finals,
        edges: new_edges,
        deterministic: false,
        complete: false,
    }
}

/// Minimal complete deterministic automaton for the same language, in
/// canonical state numbering. Determinizes, then merges equivalent states
/// by partition refinement; edge labels are canonical covers, so the
/// result is independent of how the input's transitions were carved.
pub fn minimize(a: &Automaton) -> Automaton {
    let d = determinize(a);
    let t_start = std::time::Instant::now();
    let n = d.edges.len();
    let pad = d.alphabet.pad();

    // Class-labeled edge function of a state, canonicalized by coalescing
    // same-class labels and sorting.
    let signature = |s: usize, class: &[u32]| -> Vec<(Vec<Mask>, u32)> {
        let relabeled: Vec<(Label, u32)> = d.edges[s]
            .iter()
            .map(|(l, t)| (l.clone(), class[*t as usize]))
            .collect();
        let mut out: Vec<(Vec<Mask>, u32)> = coalesce(relabeled, pad)
            .into_iter()
            .map(|(l, c)| (l.masks().to_vec(), c))
            .collect();
        out.sort();
        out
    };

    let mut class: Vec<u32> = d.finals.iter().map(|&f| f as u32).collect();
    let mut count = 0usize;
    loop {
        let mut ids: HashMap<(u32, Vec<(Vec<Mask>, u32)>), u32> = HashMap::new();
        let mut next: Vec<u32> = Vec::with_capacity(n);
        for s in 0..n {
            let key = (class[s], signature(s, &class));
            let fresh = ids.len() as u32;
            next.push(*ids.entry(key).or_insert(fresh));
        }
        let new_count = ids.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }

    let mut rep: Vec<Option<usize>> = vec![None; count];
    for s in 0..n {
        let c = class[s] as usize;
        if rep[c].is_none() {
            rep[c] = Some(s);
        }
    }
    let mut edges: Vec<Vec<(Label, u32)>> = Vec::with_capacity(count);
    let mut finals: Vec<bool> = Vec::with_capacity(count);
    for c in 0..count {
        let s = rep[c].expect("every class has a member");
        let relabeled: Vec<(Label, u32)> = d.edges[s]
            .iter()
            .map(|(l, t)| (l.clone(), class[*t as usize]))
            .collect();
        edges.push(coalesce(relabeled, pad));
        finals.push(d.finals[s]);
    }
    let out = Automaton {
        alphabet: d.alphabet.clone(),
        initial: class[d.initial as usize],
        finals,
        edges,
        deterministic: true,
        complete: true,
    }
    .canonicalize();
    stats::bump(&stats::REDUCE_NANOS, t_start.elapsed().as_nanos() as u64);
    out
}

fn check_compatible(a: &Automaton, b: &Automaton) -> Result<()> {
    if !a.alphabet.same_base(&b.alphabet) || a.alphabet.arity() != b.alphabet.arity() {
        return Err(Error::AlphabetMismatch(format!(
            "{:?} vs {:?}",
            a.alphabet, b.alphabet
        )));
    }
    Ok(())
}

fn product(a: &Automaton, b: &Automaton, keep: impl Fn(bool, bool) -> bool) -> Result<Automaton> {
    check_compatible(a, b)?;
    let t_start = std::time::Instant::now();
    let pad = a.alphabet.pad();
    let da;
    let a = if a.deterministic && a.complete {
        a
    } else {
        da = determinize(a);
        &da
    };
    let db;
    let b = if b.deterministic && b.complete {
        b
    } else {
        db = determinize(b);
        &db
    };

    let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    let mut finals: Vec<bool> = Vec::new();
    let mut edges: Vec<Vec<(Label, u32)>> = Vec::new();

    let mut intern = |p: (u32, u32), pairs: &mut Vec<(u32, u32)>, finals: &mut Vec<bool>| -> u32 {
        if let Some(&id) = ids.get(&p) {
            return id;
        }
        let id = pairs.len() as u32;
        ids.insert(p, id);
        pairs.push(p);
        finals.push(keep(
            a.finals[p.0 as usize],
            b.finals[p.1 as usize],
        ));
        id
    };

    let initial = intern((a.initial, b.initial), &mut pairs, &mut finals);
    let mut next = initial as usize;
    while next < pairs.len() {
        let (pa, pb) = pairs[next];
        let mut out: Vec<(Label, u32)> = Vec::new();
        for (la, ta) in &a.edges[pa as usize] {
            for (lb, tb) in &b.edges[pb as usize] {
                if let Some(l) = la.and(lb, pad) {
                    let id = intern((*ta, *tb), &mut pairs, &mut finals);
                    out.push((l, id));
                }
            }
        }
        edges.push(coalesce(out, pad));
        next += 1;
    }

    stats::bump(&stats::PROD_NANOS, t_start.elapsed().as_nanos() as u64);
    stats::bump_max(&stats::PROD_MAX_OUT, pairs.len() as u64);
    Ok(Automaton {
        alphabet: a.alphabet.clone(),
        initial,
        finals,
        edges,
        deterministic: true,
        complete: true,
    })
}

/// Words accepted by both machines.
pub fn intersect(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    product(a, b, |x, y| x && y)
}

/// Words accepted by either machine.
pub fn union(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    product(a, b, |x, y| x || y)
}

/// Words accepted by `a` but not `b`.
pub fn difference(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    product(a, b, |x, y| x && !y)
}

/// Whether two machines accept exactly the same words, decided by
/// emptiness of both set differences.
pub fn language_equal(a: &Automaton, b: &Automaton) -> Result<bool> {
    check_compatible(a, b)?;
    let empty = |m: &Automaton| !m.finals.iter().any(|&f| f);
    Ok(empty(&difference(a, b)?) && empty(&difference(b, a)?))
}

/// Words over the alphabet not accepted by `a`.
pub fn complement(a: &Automaton) -> Automaton {
    let mut d = determinize(a);
    for f in d.finals.iter_mut() {
        *f = !*f;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::alphabet::SymTuple;
    use crate::automata::machine::Builder;
    use proptest::prelude::*;

    fn sigma01() -> Alphabet {
        Alphabet::new(vec!["0", "1"]).unwrap()
    }

    /// Every word over `a`'s base alphabet with length at most `n`.
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

    fn ends_in_one() -> Automaton {
        let a = sigma01();
        let mut b = Builder::new(a.clone());
        let s0 = b.state();
        let s1 = b.state();
        b.set_final(s1);
        b.edge(s0, Label::full(&a), s0);
        b.edge_sym(s0, "1", s1).unwrap();
        b.finish(s0)
    }

    fn even_zeros() -> Automaton {
        let a = sigma01();
        let mut b = Builder::new(a.clone());
        let e = b.state();
        let o = b.state();
        b.set_final(e);
        b.edge_sym(e, "1", e).unwrap();
        b.edge_sym(o, "1", o).unwrap();
        b.edge_sym(e, "0", o).unwrap();
        b.edge_sym(o, "0", e).unwrap();
        b.finish(e)
    }

    #[test]
    fn determinize_preserves_language() {
        let m = ends_in_one();
        let d = determinize(&m);
        assert!(d.is_deterministic());
        for w in all_words(m.alphabet(), 8) {
            assert_eq!(m.accepts(&w), d.accepts(&w));
        }
    }

    #[test]
    fn minimize_is_canonical_and_small() {
        // Two structurally different machines for "ends in 1" must minimize
        // to identical tables.
        let m1 = ends_in_one();
        let mut b = Builder::new(sigma01());
        let s0 = b.state();
        let s1 = b.state();
        let s2 = b.state(); // redundant duplicate of s1
        b.set_final(s1);
        b.set_final(s2);
        b.edge_sym(s0, "0", s0).unwrap();
        b.edge_sym(s0, "1", s1).unwrap();
        b.edge_sym(s1, "0", s0).unwrap();
        b.edge_sym(s1, "1", s2).unwrap();
        b.edge_sym(s2, "0", s0).unwrap();
        b.edge_sym(s2, "1", s1).unwrap();
        let m2 = b.finish(s0);

        let c1 = minimize(&m1);
        let c2 = minimize(&m2);
        assert_eq!(c1.num_states(), 2);
        assert_eq!(c1.num_states(), c2.num_states());
        assert_eq!(c1.finals, c2.finals);
        assert_eq!(c1.edges, c2.edges);
        for w in all_words(m1.alphabet(), 8) {
            assert_eq!(m1.accepts(&w), c1.accepts(&w));
        }
    }

    #[test]
    fn boolean_ops_match_set_algebra() {
        let p = ends_in_one();
        let q = even_zeros();
        let both = intersect(&p, &q).unwrap();
        let either = union(&p, &q).unwrap();
        let diff = difference(&p, &q).unwrap();
        let not_p = complement(&p);
        for w in all_words(p.alphabet(), 8) {
            let (ip, iq) = (p.accepts(&w), q.accepts(&w));
            assert_eq!(both.accepts(&w), ip && iq);
            assert_eq!(either.accepts(&w), ip || iq);
            assert_eq!(diff.accepts(&w), ip && !iq);
            assert_eq!(not_p.accepts(&w), !ip);
        }
    }

    #[test]
    fn de_morgan_on_samples() {
        let p = ends_in_one();
        let q = even_zeros();
        let lhs = complement(&union(&p, &q).unwrap());
        let rhs = intersect(&complement(&p), &complement(&q)).unwrap();
        for w in all_words(p.alphabet(), 8) {
            assert_eq!(lhs.accepts(&w), rhs.accepts(&w));
        }
    }

    /// Random small machines, compared against their determinized and
    /// minimized forms by exhaustive enumeration.
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
        #[test]
        fn determinize_minimize_agree_with_source(m in arb_nfa()) {
            let d = determinize(&m);
            let mn = minimize(&m);
            prop_assert!(mn.num_states() <= d.num_states());
            for w in all_words(m.alphabet(), 6) {
                let want = m.accepts(&w);
                prop_assert_eq!(d.accepts(&w), want);
                prop_assert_eq!(mn.accepts(&w), want);
            }
        }

        #[test]
        fn complement_involution(m in arb_nfa()) {
            let cc = complement(&complement(&m));
            for w in all_words(m.alphabet(), 6) {
                prop_assert_eq!(cc.accepts(&w), m.accepts(&w));
            }
        }
    }
}
