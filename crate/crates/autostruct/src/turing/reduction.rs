//! The tagged chain graph grown around a machine's step graph.
//!
//! The domain is a disjoint union of five tagged word shapes:
//!
//! * `T·w` — tree nodes: `w` is empty or a binary word ending in `1`;
//!   each node has every `w·0^k·1` as a child.
//! * `G·w#1^c#1^a#1^b` — bundles of finite chains hanging off every
//!   tree node `w`: copy `c`, position `b` in a chain of `a + b + 1`
//!   vertices.  Every length occurs in infinitely many copies, so the
//!   local picture at `w` does not change when one more finite chain
//!   appears.  The tree node points at every chain base (`b = 0`).
//! * `C·c` — configuration words, wired by the machine's step relation;
//!   each nonempty tree node points at its starting configuration.
//! * `J·1^c#1^a#1^b` — one free-floating copy of the chain bundle.
//! * `I·1^a#1^b` — infinitely many infinite chains (`b` grows without
//!   bound); their bases have no predecessor.
//!
//! All edges live in one binary relation `E`; the class languages are
//! exported as unary relations `tree`, `gadget`, `conf`, and `junk`.

use std::collections::{BTreeMap, BTreeSet};

use super::{
    check_reversible, config_domain, config_graph, image, swap_tapes, ConfigCoding, TmSpec,
};
use crate::automata::{
    determinize, intersect, minimize, union, Alphabet, Automaton, Builder, Label, Mask, TapeSym,
    Word,
};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::relations::{universe, RegularRelation};

const TAGS: [&str; 6] = ["#", "T", "G", "C", "J", "I"];

/// A machine's reduction graph: the tagged presentation plus the
/// index-level machine coding, kept for probe cross-checks.
pub struct ReductionGraph {
    pub presentation: Presentation,
    pub coding: ConfigCoding,
}

/// Positions of the tag symbols inside the extended alphabet.
struct Tagging {
    alph: Alphabet,
    hash: TapeSym,
    t: TapeSym,
    g: TapeSym,
    c: TapeSym,
    j: TapeSym,
    i: TapeSym,
    zero: TapeSym,
    one: TapeSym,
}

fn tagging(cc: &ConfigCoding) -> Result<Tagging> {
    let mut names: Vec<String> = cc.alphabet.base_names().to_vec();
    for t in TAGS {
        if names.iter().any(|n| n == t) {
            return Err(Error::InvalidTm(format!(
                "machine symbol {t:?} collides with a reserved tag"
            )));
        }
        names.push(t.to_string());
    }
    let alph = Alphabet::new(names)?;
    let at = |n: &str| alph.base_index(n).unwrap();
    Ok(Tagging {
        hash: at("#"),
        t: at("T"),
        g: at("G"),
        c: at("C"),
        j: at("J"),
        i: at("I"),
        zero: at("0"),
        one: at("1"),
        alph,
    })
}

/// Rewrites an automaton over the machine's alphabet into the tagged
/// alphabet.  Base symbols keep their indices; only the pad bit moves.
fn widen(m: &Automaton, alph: &Alphabet) -> Automaton {
    let oldpad = m.alphabet().pad();
    let newpad = alph.pad();
    let arity = m.alphabet().arity();
    let remap = |mask: Mask| -> Mask {
        let base = mask & !(1u64 << oldpad);
        if mask & (1u64 << oldpad) != 0 {
            base | (1u64 << newpad)
        } else {
            base
        }
    };
    let edges = (0..m.num_states())
        .map(|s| {
            m.edges_from(s)
                .iter()
                .map(|(l, t)| {
                    let masks: Vec<Mask> = (0..arity).map(|k| remap(l.mask(k))).collect();
                    (Label::new(masks).normalize(newpad), *t)
                })
                .collect()
        })
        .collect();
    Automaton {
        alphabet: alph.with_arity(arity),
        initial: m.initial(),
        finals: (0..m.num_states()).map(|s| m.is_final(s)).collect(),
        edges,
        deterministic: m.deterministic,
        complete: false,
    }
}

/// Prepends one fixed letter to every word of the language.
fn with_prefix(m: &Automaton, label: Label) -> Automaton {
    let n = m.num_states();
    let mut edges: Vec<Vec<(Label, u32)>> =
        (0..n).map(|s| m.edges_from(s).to_vec()).collect();
    edges.push(vec![(label, m.initial())]);
    let mut finals: Vec<bool> = (0..n).map(|s| m.is_final(s)).collect();
    finals.push(false);
    Automaton {
        alphabet: m.alphabet().clone(),
        initial: n,
        finals,
        edges,
        deterministic: m.deterministic,
        complete: false,
    }
}

/// `T` followed by an empty word or a binary word ending in `1`.
fn tree_class(tg: &Tagging) -> Automaton {
    let mut b = Builder::new(tg.alph.clone());
    let pre = b.state();
    let empty = b.state();
    let after0 = b.state();
    let after1 = b.state();
    b.set_final(empty);
    b.set_final(after1);
    b.edge(pre, Label::new([1u64 << tg.t]), empty);
    for (sym, target) in [(tg.zero, after0), (tg.one, after1)] {
        let l = Label::new([1u64 << sym]);
        b.edge(empty, l.clone(), target);
        b.edge(after0, l.clone(), target);
        b.edge(after1, l, target);
    }
    minimize(&b.finish(pre))
}

/// `tag` then `lead`, then `blocks` runs of `1` separated by `#`.
fn block_class(tg: &Tagging, tag: TapeSym, lead_tree_word: bool, blocks: usize) -> Automaton {
    let mut b = Builder::new(tg.alph.clone());
    let pre = b.state();
    let start = b.state();
    b.edge(pre, Label::new([1u64 << tag]), start);
    let hash = Label::new([1u64 << tg.hash]);
    let one = Label::new([1u64 << tg.one]);
    let mut block_entry = start;
    if lead_tree_word {
        // w ∈ λ | (0|1)*1 before the first separator.
        let after0 = b.state();
        let after1 = b.state();
        for (sym, target) in [(tg.zero, after0), (tg.one, after1)] {
            let l = Label::new([1u64 << sym]);
            b.edge(start, l.clone(), target);
            b.edge(after0, l.clone(), target);
            b.edge(after1, l, target);
        }
        let first = b.state();
        b.edge(start, hash.clone(), first);
        b.edge(after1, hash.clone(), first);
        block_entry = first;
    }
    let mut cur = block_entry;
    b.edge(cur, one.clone(), cur);
    for _ in 1..blocks {
        let next = b.state();
        b.edge(cur, hash.clone(), next);
        b.edge(next, one.clone(), next);
        cur = next;
    }
    b.set_final(cur);
    minimize(&b.finish(pre))
}

/// All structural edges except the configuration steps: tree children,
/// chain-bundle token moves, connecting edges into chain bases, the
/// tree-to-configuration identification (`q0` is the machine's initial
/// state symbol, whose index survives widening), and the infinite-chain
/// steps.
fn structural_edges(tg: &Tagging, q0: TapeSym) -> Automaton {
    let mut b = Builder::new(tg.alph.with_arity(2));
    let pad = tg.alph.pad();
    let bit = |s: TapeSym| 1u64 << s;
    let diag = |b: &mut Builder, from: u32, mask: Mask, to: u32| {
        let mut m = mask;
        while m != 0 {
            let s = m.trailing_zeros() as TapeSym;
            m &= m - 1;
            b.edge(from, Label::new([bit(s), bit(s)]), to);
        }
    };
    let start = b.state();
    let bin = bit(tg.zero) | bit(tg.one);
    let bin_hash = bin | bit(tg.hash);
    let one_hash = bit(tg.one) | bit(tg.hash);

    // T·w -> T·w0^k1.
    let ta = b.state();
    let tb = b.state();
    let tc = b.state();
    b.set_final(tc);
    b.edge(start, Label::new([bit(tg.t), bit(tg.t)]), ta);
    diag(&mut b, ta, bin, ta);
    b.edge(ta, Label::new([bit(pad), bit(tg.zero)]), tb);
    b.edge(tb, Label::new([bit(pad), bit(tg.zero)]), tb);
    b.edge(ta, Label::new([bit(pad), bit(tg.one)]), tc);
    b.edge(tb, Label::new([bit(pad), bit(tg.one)]), tc);

    // Token move inside a chain bundle (G and J alike): one `1` crosses
    // the last separator, stepping position b to b+1.
    let ga = b.state();
    let gb = b.state();
    let gc = b.state();
    b.set_final(gc);
    b.edge(start, Label::new([bit(tg.g), bit(tg.g)]), ga);
    b.edge(start, Label::new([bit(tg.j), bit(tg.j)]), ga);
    diag(&mut b, ga, bin_hash, ga);
    b.edge(ga, Label::new([bit(tg.one), bit(tg.hash)]), gb);
    b.edge(gb, Label::new([bit(tg.hash), bit(tg.one)]), gc);
    diag(&mut b, gc, bit(tg.one), gc);

    // Connecting edges T·w -> G·w#1^c#1^a# (every chain base).
    let ca = b.state();
    let cb = b.state();
    let cc = b.state();
    let cd = b.state();
    b.set_final(cd);
    b.edge(start, Label::new([bit(tg.t), bit(tg.g)]), ca);
    diag(&mut b, ca, bin, ca);
    b.edge(ca, Label::new([bit(pad), bit(tg.hash)]), cb);
    b.edge(cb, Label::new([bit(pad), bit(tg.one)]), cb);
    b.edge(cb, Label::new([bit(pad), bit(tg.hash)]), cc);
    b.edge(cc, Label::new([bit(pad), bit(tg.one)]), cc);
    b.edge(cc, Label::new([bit(pad), bit(tg.hash)]), cd);

    // Identification T·w -> C·q0·w for nonempty w: the configuration
    // spells the state symbol first, so the tree word arrives delayed
    // by one column.
    let ia = b.state();
    let d0 = b.state();
    let d1 = b.state();
    let iacc = b.state();
    b.set_final(iacc);
    b.edge(start, Label::new([bit(tg.t), bit(tg.c)]), ia);
    for (sym, d) in [(tg.zero, d0), (tg.one, d1)] {
        b.edge(ia, Label::new([bit(sym), bit(q0)]), d);
        for (sym2, d2) in [(tg.zero, d0), (tg.one, d1)] {
            b.edge(d, Label::new([bit(sym2), bit(sym)]), d2);
        }
        b.edge(d, Label::new([bit(pad), bit(sym)]), iacc);
    }

    // Infinite chains: I·1^a#1^b -> I·1^a#1^(b+1).
    let ja = b.state();
    let jb = b.state();
    b.set_final(jb);
    b.edge(start, Label::new([bit(tg.i), bit(tg.i)]), ja);
    diag(&mut b, ja, one_hash, ja);
    b.edge(ja, Label::new([bit(pad), bit(tg.one)]), jb);

    b.finish(start)
}

/// Builds the reduction graph of a machine that is reversible and can
/// only halt by accepting.
pub fn build_ar(tm: &TmSpec) -> Result<ReductionGraph> {
    tm.validate()?;
    tm.accepting_halts_only()?;
    let cfg = config_graph(tm)?;
    if !check_reversible(&cfg)? {
        return Err(Error::NotReversible);
    }
    let cc = ConfigCoding::new(tm)?;
    let tg = tagging(&cc)?;

    let tree = tree_class(&tg);
    let gadget = block_class(&tg, tg.g, true, 3);
    let conf = minimize(&with_prefix(
        &widen(&config_domain(&cc), &tg.alph),
        Label::new([1u64 << tg.c]),
    ));
    let copyj = block_class(&tg, tg.j, false, 3);
    let inf = block_class(&tg, tg.i, false, 2);
    let junk = minimize(&union(&copyj, &inf)?);
    let domain = minimize(&union(&union(&tree, &gadget)?, &union(&conf, &junk)?)?);

    let structural = structural_edges(&tg, cc.initial);
    let steps = with_prefix(
        &widen(cfg.relation("E")?, &tg.alph),
        Label::new([1u64 << tg.c, 1u64 << tg.c]),
    );
    let raw = union(&structural, &steps)?;
    let e = minimize(&intersect(&raw, &universe(&domain, 2)?)?);

    let mut rels = BTreeMap::new();
    rels.insert("E".to_string(), e);
    rels.insert("tree".to_string(), tree);
    rels.insert("gadget".to_string(), gadget);
    rels.insert("conf".to_string(), conf);
    rels.insert("junk".to_string(), junk);
    let presentation = Presentation::new(tg.alph.clone(), domain, rels);
    Ok(ReductionGraph {
        presentation,
        coding: cc,
    })
}

/// What the bounded probe saw at one tree node.
#[derive(Clone, Debug)]
pub struct BaseProbe {
    /// The tree word, spelled over 0/1 (empty for the root).
    pub word: String,
    /// Complete chain lengths seen from this node with their counts,
    /// counts saturated at 3 ("3 or more").
    pub chain_lengths: Vec<(usize, usize)>,
    /// Vertex count of the computation chain if it ends within `depth`.
    pub conf_chain: Option<usize>,
    /// The computation chain still runs after `depth` vertices.
    pub proxy_infinite: bool,
    /// Steps until the simulator halts, when within the probe budget.
    pub sim_halts: Option<usize>,
    /// Whether a simulator cross-check ran.
    pub checked: bool,
    /// Cross-check verdict (true when unchecked).
    pub agrees: bool,
}

/// Bounded exploration of a reduction graph.
#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub depth: usize,
    pub bases: Vec<BaseProbe>,
}

/// Probes the reduction graph and cross-checks against the simulator.
pub fn probe_invariants(g: &ReductionGraph, depth: usize) -> Result<ProbeReport> {
    probe_presentation(&g.presentation, Some(&g.coding), depth)
}

/// Probes any presentation shaped like a reduction graph (tags `T`,
/// `G`, `C` in its alphabet, binary relation `E`).  With a machine
/// coding, computation chains are cross-checked against simulation; the
/// root carries no computation chain by construction and is reported
/// unchecked.
pub fn probe_presentation(
    p: &Presentation,
    coding: Option<&ConfigCoding>,
    depth: usize,
) -> Result<ProbeReport> {
    if depth == 0 || depth > 10 {
        return Err(Error::LimitExceeded(format!(
            "probe depth {depth} outside 1..=10"
        )));
    }
    let alph = p.alphabet();
    let need = |n: &str| {
        alph.base_index(n)
            .ok_or_else(|| Error::InvalidTm(format!("alphabet lacks the {n:?} tag")))
    };
    let t_tag = need("T")?;
    let g_tag = need("G")?;
    let c_tag = need("C")?;
    let zero = need("0")?;
    let one = need("1")?;
    let e = {
        let m = p.relation("E")?;
        if m.deterministic {
            m.clone()
        } else {
            determinize(m)
        }
    };

    let mut bases = Vec::new();
    for w in tree_words(depth) {
        let mut tw: Word = vec![t_tag];
        tw.extend(w.iter().map(|&b| if b == 0 { zero } else { one }));
        let cap = tw.len() + 2 * depth + 8;
        let mut lengths: BTreeMap<usize, usize> = BTreeMap::new();
        let mut conf_chain = None;
        let mut proxy = false;
        for succ in image(&e, &tw, cap) {
            let class = succ[0];
            if class != g_tag && class != c_tag {
                continue;
            }
            let mut cur = succ;
            let mut count = 1usize;
            let complete = loop {
                let nexts = image(&e, &cur, cur.len() + 3);
                if nexts.is_empty() {
                    break Some(count);
                }
                if count == depth {
                    break None;
                }
                cur = nexts.into_iter().next().unwrap();
                count += 1;
            };
            match complete {
                Some(len) => {
                    let slot = lengths.entry(len).or_insert(0);
                    *slot = (*slot + 1).min(3);
                    if class == c_tag {
                        conf_chain = Some(len);
                    }
                }
                None => {
                    if class == c_tag {
                        proxy = true;
                    }
                }
            }
        }
        let word = w
            .iter()
            .map(|&b| if b == 0 { '0' } else { '1' })
            .collect::<String>();
        let (sim_halts, checked, agrees) = match coding {
            Some(cc) if !w.is_empty() => {
                let input: Word = word
                    .chars()
                    .map(|ch| cc.alphabet.base_index(&ch.to_string()).unwrap())
                    .collect();
                let c0 = cc.initial_config(&input);
                let sim = cc.halts_within(&c0, depth);
                let ok = match sim {
                    Some(t) if t + 1 <= depth => conf_chain == Some(t + 1) && !proxy,
                    _ => proxy && conf_chain.is_none(),
                };
                (sim, true, ok)
            }
            _ => (None, false, true),
        };
        bases.push(BaseProbe {
            word,
            chain_lengths: lengths.into_iter().collect(),
            conf_chain,
            proxy_infinite: proxy,
            sim_halts,
            checked,
            agrees,
        });
    }
    Ok(ProbeReport { depth, bases })
}

/// The tree words of length at most `n`: λ plus binary words ending in
/// 1, in length-lexicographic order.
fn tree_words(n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for len in 1..=n {
        for prefix in 0..(1u32 << (len - 1)) {
            let mut w: Vec<u8> = (0..len - 1)
                .rev()
                .map(|k| ((prefix >> k) & 1) as u8)
                .collect();
            w.push(1);
            out.push(w);
        }
    }
    out
}

/// Renders the neighborhood of one domain word as a DOT digraph:
/// every vertex within `radius` steps of `center` along `rel`, in
/// either direction, with words as node labels.
pub fn neighborhood_dot(
    p: &Presentation,
    rel: &str,
    center: &str,
    radius: usize,
) -> Result<String> {
    let alph = p.alphabet();
    let center_w = alph.parse_word(center)?;
    let dom = RegularRelation::new(vec!["x".into()], p.domain().clone())?;
    if !dom.holds(&[center_w.clone()]) {
        return Err(Error::Decode(format!("{center:?} is not a domain word")));
    }
    let m = p.relation(rel)?;
    if m.alphabet().arity() != 2 {
        return Err(Error::ArityMismatch {
            name: rel.into(),
            expected: 2,
            got: m.alphabet().arity(),
        });
    }
    let fwd = if m.deterministic { m.clone() } else { determinize(m) };
    let bwd = swap_tapes(&fwd);
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    let mut edges: BTreeSet<(Word, Word)> = BTreeSet::new();
    let mut frontier = vec![center_w.clone()];
    seen.insert(center_w);
    for _ in 0..radius {
        let mut next = Vec::new();
        for u in frontier {
            let cap = u.len() + 2 * radius + 8;
            for v in image(&fwd, &u, cap) {
                edges.insert((u.clone(), v.clone()));
                if seen.insert(v.clone()) {
                    next.push(v);
                }
            }
            for v in image(&bwd, &u, cap) {
                edges.insert((v.clone(), u.clone()));
                if seen.insert(v.clone()) {
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    let name = |w: &Word| {
        let s = alph.format_word(w);
        if s.is_empty() {
            "ε".to_string()
        } else {
            s
        }
    };
    let mut out = String::from("digraph fragment {\n  rankdir=LR;\n");
    for w in &seen {
        out.push_str(&format!("  \"{}\";\n", name(w)));
    }
    for (u, v) in &edges {
        out.push_str(&format!("  \"{}\" -> \"{}\";\n", name(u), name(v)));
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::parse_tm;
    use super::*;
    use crate::automata::{is_empty, language_equal};
    use crate::logic::{eval_sentence, parse_formula};
    use crate::presentation::validate;

    fn graph(src: &str) -> ReductionGraph {
        build_ar(&parse_tm(src).unwrap()).unwrap()
    }

    #[test]
    fn rejects_unfit_machines() {
        let irr = parse_tm(IRREVERSIBLE).unwrap();
        assert!(matches!(build_ar(&irr), Err(Error::NotReversible)));
        let partial = "\
states: q0 qa
initial: q0
accept: qa
blank: B
q0 0 -> qa 0 R
end
";
        let tm = parse_tm(partial).unwrap();
        assert!(matches!(build_ar(&tm), Err(Error::RejectingHaltState(_))));
        let clash = "\
states: T qa
initial: T
accept: qa
blank: B
T 0 -> qa 0 R
T 1 -> qa 1 R
T B -> qa B R
end
";
        let tm = parse_tm(clash).unwrap();
        assert!(matches!(build_ar(&tm), Err(Error::InvalidTm(_))));
    }

    #[test]
    fn reduction_presentation_is_well_formed() {
        let g = graph(ALWAYS_ACCEPT);
        assert!(validate(&g.presentation).is_empty());
    }

    #[test]
    fn classes_partition_the_domain() {
        let g = graph(ALWAYS_ACCEPT);
        let p = &g.presentation;
        let names = ["tree", "gadget", "conf", "junk"];
        for (i, a) in names.iter().enumerate() {
            for b in &names[i + 1..] {
                let both =
                    intersect(p.relation(a).unwrap(), p.relation(b).unwrap()).unwrap();
                assert!(is_empty(&both), "{a} and {b} overlap");
            }
        }
        let mut all = p.relation("tree").unwrap().clone();
        for n in &names[1..] {
            all = union(&all, p.relation(n).unwrap()).unwrap();
        }
        assert!(language_equal(&all, p.domain()).unwrap());
    }

    #[test]
    fn chain_vertices_have_degree_at_most_one() {
        let g = graph(ALWAYS_ACCEPT);
        let out_deg = parse_formula(
            "A x. A y. A z. ((gadget(x) & E(x,y) & E(x,z)) -> (y = z))",
        )
        .unwrap();
        let in_deg = parse_formula(
            "A x. A y. A z. ((gadget(y) & E(x,y) & E(z,y)) -> (x = z))",
        )
        .unwrap();
        assert!(eval_sentence(&g.presentation, &out_deg).unwrap());
        assert!(eval_sentence(&g.presentation, &in_deg).unwrap());
    }

    #[test]
    fn probe_sees_every_finite_chain_length() {
        // Chain bundles supply at least three chains of every length at
        // every tree node, and the halting computation shows up as one
        // more finite chain.
        let g = graph(ALWAYS_ACCEPT);
        let report = probe_invariants(&g, 5).unwrap();
        assert_eq!(report.bases.len(), 1 + 1 + 2 + 4 + 8 + 16);
        for probe in &report.bases {
            for len in 1..=4 {
                let hit = probe
                    .chain_lengths
                    .iter()
                    .find(|&&(l, _)| l == len)
                    .map(|&(_, c)| c);
                assert_eq!(hit, Some(3), "length {len} at {:?}", probe.word);
            }
            assert!(!probe.proxy_infinite, "at {:?}", probe.word);
            if probe.word.is_empty() {
                assert_eq!(probe.conf_chain, None, "the root has no computation");
                assert!(!probe.checked);
            } else {
                // One machine step, so the computation chain has two
                // vertices.
                assert_eq!(probe.conf_chain, Some(2), "at {:?}", probe.word);
                assert_eq!(probe.sim_halts, Some(1));
                assert!(probe.checked);
            }
            assert!(probe.agrees, "at {:?}", probe.word);
        }
    }

    #[test]
    fn probe_flags_nonhalting_machines() {
        let g = graph(ALWAYS_LOOP);
        let report = probe_invariants(&g, 6).unwrap();
        for probe in &report.bases {
            if probe.word.is_empty() {
                continue;
            }
            assert!(probe.proxy_infinite, "at {:?}", probe.word);
            assert_eq!(probe.conf_chain, None);
            assert_eq!(probe.sim_halts, None);
            assert!(probe.checked && probe.agrees, "at {:?}", probe.word);
        }
    }

    #[test]
    fn probe_reports_are_insensitive_to_running_time() {
        // Two machines that accept everything, one twice as slow: the
        // chain-length statistics agree at every tree node even though
        // the computation chains differ.
        let fast = probe_invariants(&graph(ALWAYS_ACCEPT), 5).unwrap();
        let slow = probe_invariants(&graph(ALWAYS_ACCEPT_SLOW), 5).unwrap();
        assert_eq!(fast.bases.len(), slow.bases.len());
        for (a, b) in fast.bases.iter().zip(&slow.bases) {
            assert_eq!(a.word, b.word);
            assert_eq!(a.chain_lengths, b.chain_lengths, "at {:?}", a.word);
            assert_eq!(a.proxy_infinite, b.proxy_infinite);
            assert_ne!(
                (a.conf_chain, b.conf_chain),
                (Some(2), Some(2)),
                "the slow machine must actually be slower at {:?}",
                a.word
            );
        }
    }

    #[test]
    fn probe_rejects_out_of_range_depths() {
        let g = graph(ALWAYS_ACCEPT);
        assert!(matches!(
            probe_invariants(&g, 0),
            Err(Error::LimitExceeded(_))
        ));
        assert!(matches!(
            probe_invariants(&g, 11),
            Err(Error::LimitExceeded(_))
        ));
    }

    #[test]
    fn infinite_chains_never_end_and_start_fresh() {
        let g = graph(ALWAYS_ACCEPT);
        let p = &g.presentation;
        let alph = p.alphabet();
        let e = p.relation("E").unwrap();
        let back = swap_tapes(e);
        let mut cur = alph.parse_word("I#").unwrap();
        assert!(
            image(&back, &cur, cur.len() + 4).is_empty(),
            "chain bases have no predecessor"
        );
        for _ in 0..8 {
            let next = image(e, &cur, cur.len() + 3);
            assert_eq!(next.len(), 1, "infinite chains keep going at {cur:?}");
            cur = next.into_iter().next().unwrap();
        }
        // The free-floating chain bundle steps like the attached ones.
        let j = alph.parse_word("J11#1#").unwrap();
        let next = image(e, &j, j.len() + 3);
        assert_eq!(next, vec![alph.parse_word("J11##1").unwrap()]);
    }

    #[test]
    fn neighborhood_export_is_valid_dot() {
        let g = graph(ALWAYS_ACCEPT);
        let dot = neighborhood_dot(&g.presentation, "E", "T1", 1).unwrap();
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("\"T1\""));
        assert!(dot.contains("->"));
        assert_eq!(dot.matches('{').count(), dot.matches('}').count());
        assert!(neighborhood_dot(&g.presentation, "E", "T0", 1).is_err());
    }
}
