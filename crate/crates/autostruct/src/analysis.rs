//! Counting diagnostics over presented structures: length-gap bounds for
//! relation graphs, the product-length bound for monoid operation graphs,
//! distinct-column censuses for definable binary relations (with a
//! non-regular contrast), and the finite-poset antichain×chain bound.

use crate::automata::{determinize, enumerate_llex, trim, Automaton, Word};
use crate::builtins::contrast_bitgraph;
use crate::error::{Error, Result};
use crate::logic::{compile, Compiled, Formula};
use crate::presentation::Presentation;
use crate::relations::deconvolve;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::HashSet;

// ---------------------------------------------------------------------------
// Length gaps of relation graphs
// ---------------------------------------------------------------------------

/// Largest output-versus-input length difference seen while scanning a
/// relation, together with the pumping bound it is measured against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub relation: String,
    /// How the tapes divide into inputs (first `k`) and outputs (last `l`).
    pub split: (usize, usize),
    /// max over scanned tuples of (longest output − longest input); zero
    /// when nothing was scanned.
    pub max_gap: i64,
    /// State count of the relation's automaton: an upper bound on the gap
    /// for any synchronous relation whose outputs are determined up to
    /// finitely many values by the inputs.
    pub pump_bound: usize,
    pub depth: usize,
}

/// Scan every tuple of the relation whose components all have length at
/// most `depth` and report the largest length gap between the longest
/// output component and the longest input component.
pub fn gap_check(
    p: &Presentation,
    relation: &str,
    split: (usize, usize),
    depth: usize,
) -> Result<GapReport> {
    let m = p.relation(relation)?;
    let (k, l) = split;
    let arity = m.alphabet().arity();
    if k + l != arity || l == 0 {
        return Err(Error::ArityMismatch {
            name: relation.to_string(),
            expected: arity,
            got: k + l,
        });
    }
    let alph = m.alphabet().clone();
    let dfa = trim(&determinize(m));
    let mut max_gap: i64 = 0;
    for conv in enumerate_llex(&dfa, depth) {
        let parts = deconvolve(&alph, &conv);
        let longest = |ws: &[Word]| ws.iter().map(|w| w.len()).max().unwrap_or(0) as i64;
        let gap = longest(&parts[k..]) - longest(&parts[..k]);
        max_gap = max_gap.max(gap);
    }
    Ok(GapReport {
        relation: relation.to_string(),
        split,
        max_gap,
        pump_bound: m.num_states() as usize,
        depth,
    })
}

// ---------------------------------------------------------------------------
// Product-length bound for monoid operation graphs
// ---------------------------------------------------------------------------

/// Where the factor lists for [`product_length_check`] come from.
#[derive(Debug, Clone)]
pub enum FactorSource {
    /// Every multiset of factors, for each list length up to the cap.
    /// The checked bound depends only on the multiset of factors, so
    /// orderings are not re-enumerated.
    Exhaustive,
    /// `samples` uniformly drawn ordered lists per list length, from a
    /// seeded generator.
    Random { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductLengthReport {
    pub relation: String,
    pub m_max: usize,
    pub factor_max_len: usize,
    pub lists_checked: usize,
    /// min over lists of (allowed length − actual product length); the
    /// bound holds exactly when this is non-negative.
    pub worst_slack: i64,
    pub holds: bool,
    /// State count of the operation's automaton, the `k` of the bound
    /// |s₁⋯s_m| ≤ max|sᵢ| + k·⌈log₂ m⌉.
    pub pump_bound: usize,
}

/// Apply the binary operation through its graph automaton: all words `w`
/// with (u, v, w) in the relation. The third tape is searched directly on
/// the determinized machine, so no per-query compilation happens.
fn apply_op(dfa: &Automaton, live: &[bool], u: &Word, v: &Word, max_len: usize) -> Vec<Word> {
    let pad = dfa.alphabet().pad();
    let mut results = Vec::new();
    // (state, position, word-so-far, third tape already padded)
    let mut stack: Vec<(u32, usize, Word, bool)> = vec![(dfa.initial(), 0, Word::new(), false)];
    while let Some((s, pos, w, done)) = stack.pop() {
        let inputs_done = pos >= u.len() && pos >= v.len();
        if inputs_done && dfa.is_final(s) {
            results.push(w.clone());
        }
        if pos >= max_len {
            continue;
        }
        let a = u.get(pos).copied().unwrap_or(pad);
        let b = v.get(pos).copied().unwrap_or(pad);
        for (label, t) in dfa.edges_from(s) {
            if !live[*t as usize] {
                continue;
            }
            if label.mask(0) & (1u64 << a) == 0 || label.mask(1) & (1u64 << b) == 0 {
                continue;
            }
            let mut mask = label.mask(2);
            if done || inputs_done {
                // A padded tape may not resume, and the run only continues
                // past both inputs to emit more output symbols.
                mask &= if inputs_done && !done {
                    !(1u64 << pad)
                } else {
                    1u64 << pad
                };
            }
            let mut rest = mask;
            while rest != 0 {
                let c = rest.trailing_zeros() as u8;
                rest &= rest - 1;
                let mut w2 = w.clone();
                if c != pad {
                    w2.push(c);
                }
                stack.push((*t, pos + 1, w2, c == pad));
            }
        }
    }
    results.sort();
    results.dedup();
    results
}

fn reachable_final(dfa: &Automaton) -> Vec<bool> {
    let n = dfa.num_states() as usize;
    let mut live: Vec<bool> = (0..n).map(|s| dfa.is_final(s as u32)).collect();
    loop {
        let mut changed = false;
        for s in 0..n {
            if live[s] {
                continue;
            }
            if dfa.edges_from(s as u32).iter().any(|(_, t)| live[*t as usize]) {
                live[s] = true;
                changed = true;
            }
        }
        if !changed {
            return live;
        }
    }
}

/// Check |s₁⋯s_m| ≤ maxᵢ|sᵢ| + k·⌈log₂ m⌉ over factor lists drawn from the
/// domain, folding products left to right through the operation's graph.
/// The operation is trusted to be associative; each fold step must resolve
/// to exactly one product word.
pub fn product_length_check(
    p: &Presentation,
    monoid_op: &str,
    source: FactorSource,
    m_max: usize,
    factor_max_len: usize,
) -> Result<ProductLengthReport> {
    let m = p.relation(monoid_op)?;
    if m.alphabet().arity() != 3 {
        return Err(Error::ArityMismatch {
            name: monoid_op.to_string(),
            expected: 3,
            got: m.alphabet().arity(),
        });
    }
    let k = m.num_states() as usize;
    let dfa = determinize(m);
    let live = reachable_final(&dfa);
    let domain = trim(&determinize(p.domain()));
    let factors: Vec<Word> = enumerate_llex(&domain, factor_max_len)
        .map(|conv| conv.into_iter().map(|sym| sym[0]).collect())
        .collect();
    if factors.is_empty() {
        return Err(Error::LimitExceeded("domain has no short words".into()));
    }

    let mut worst_slack = i64::MAX;
    let mut lists_checked = 0usize;
    let mut check = |list: &[Word]| -> Result<()> {
        let mut acc = list[0].clone();
        let longest = list.iter().map(|w| w.len()).max().unwrap_or(0);
        let allowed = longest + k * (usize::BITS - (list.len() - 1).leading_zeros()) as usize;
        for f in &list[1..] {
            let cap = acc.len().max(f.len()) + k + 1;
            let mut out = apply_op(&dfa, &live, &acc, f, cap);
            if out.len() != 1 {
                return Err(Error::NotAFunction(
                    monoid_op.to_string(),
                    format!("{} results for a product step", out.len()),
                ));
            }
            acc = out.pop().unwrap();
        }
        worst_slack = worst_slack.min(allowed as i64 - acc.len() as i64);
        lists_checked += 1;
        Ok(())
    };

    match source {
        FactorSource::Exhaustive => {
            // Multisets as non-decreasing index sequences.
            let mut idx = vec![0usize; 1];
            loop {
                let list: Vec<Word> = idx.iter().map(|&i| factors[i].clone()).collect();
                check(&list)?;
                // advance
                let mut pos = idx.len();
                loop {
                    if pos == 0 {
                        idx = vec![0; idx.len() + 1];
                        break;
                    }
                    pos -= 1;
                    if idx[pos] + 1 < factors.len() {
                        idx[pos] += 1;
                        let v = idx[pos];
                        for q in pos + 1..idx.len() {
                            idx[q] = v;
                        }
                        break;
                    }
                }
                if idx.len() > m_max {
                    break;
                }
            }
        }
        FactorSource::Random { samples, seed } => {
            let mut rng = StdRng::seed_from_u64(seed);
            for m_len in 1..=m_max {
                for _ in 0..samples {
                    let list: Vec<Word> = (0..m_len)
                        .map(|_| factors[rng.gen_range(0..factors.len())].clone())
                        .collect();
                    check(&list)?;
                }
            }
        }
    }

    Ok(ProductLengthReport {
        relation: monoid_op.to_string(),
        m_max,
        factor_max_len,
        lists_checked,
        worst_slack,
        holds: worst_slack >= 0,
        pump_bound: k,
    })
}

// ---------------------------------------------------------------------------
// Distinct-column census
// ---------------------------------------------------------------------------

/// Census of the distinct truth-value columns a definable binary relation
/// produces: for each `y`, the column records Φ(x, y) over all `x` of
/// length at most `n` in length-lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnCensus {
    pub n: usize,
    /// `y` ranges over words of length at most this bound; columns of
    /// longer `y` can repeat earlier ones, so `distinct` is a lower bound
    /// on the true census.
    pub scan_bound: usize,
    pub distinct: usize,
    /// Number of `x` values, |A^{≤n}|.
    pub x_count: usize,
    pub y_count: usize,
}

impl ColumnCensus {
    /// distinct / |A^{≤n}| as a reduced rational.
    pub fn ratio(&self) -> (usize, usize) {
        let g = gcd(self.distinct, self.x_count.max(1));
        (self.distinct / g, self.x_count.max(1) / g)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Count distinct columns of a two-free-variable formula: compile once,
/// then for every `y` up to `n + slack` compute the membership column over
/// all `x` up to `n` and dedup. When `slack` is `None` it defaults to the
/// compiled automaton's state count, past which columns only revisit
/// residual behaviors that already occurred.
pub fn column_census(
    p: &Presentation,
    phi: &Formula,
    n: usize,
    slack: Option<usize>,
) -> Result<ColumnCensus> {
    let rel = match compile(p, phi)? {
        Compiled::Relation(r) if r.arity() == 2 => r,
        Compiled::Relation(r) => {
            return Err(Error::ArityMismatch {
                name: "phi".into(),
                expected: 2,
                got: r.arity(),
            })
        }
        Compiled::Sentence(_) => {
            return Err(Error::ArityMismatch {
                name: "phi".into(),
                expected: 2,
                got: 0,
            })
        }
    };
    let slack = slack.unwrap_or(rel.automaton().num_states() as usize);
    let domain = trim(&determinize(p.domain()));
    let words = |upto: usize| -> Vec<Word> {
        enumerate_llex(&domain, upto)
            .map(|conv| conv.into_iter().map(|sym| sym[0]).collect())
            .collect()
    };
    let xs = words(n);
    let ys = words(n + slack);
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    for y in &ys {
        let mut col = vec![0u64; (xs.len() + 63) / 64];
        for (i, x) in xs.iter().enumerate() {
            if rel.holds(&[x.clone(), y.clone()]) {
                col[i / 64] |= 1u64 << (i % 64);
            }
        }
        seen.insert(col);
    }
    Ok(ColumnCensus {
        n,
        scan_bound: n + slack,
        distinct: seen.len(),
        x_count: xs.len(),
        y_count: ys.len(),
    })
}

/// Distinct-column count of the bit-graph on {0..2^k−1}: vertex `y` is
/// adjacent to `x` when bit `x` of `y` is set, and columns are taken over
/// the first `k` vertices. Each column spells out the vertex's binary
/// digits, so all 2^k columns occur — a blow-up no synchronous
/// presentation can produce.
pub fn contrast_census(k: u32) -> usize {
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    for y in 0..(1u64 << k) {
        seen.insert((0..u64::from(k)).map(|x| contrast_bitgraph(y, x)).collect());
    }
    seen.len()
}

// ---------------------------------------------------------------------------
// Finite posets: antichain × chain bound
// ---------------------------------------------------------------------------

/// A finite partial order given by its full order matrix; construction
/// validates reflexivity, antisymmetry, and transitivity.
#[derive(Debug, Clone)]
pub struct FinitePoset {
    elements: Vec<String>,
    le: Vec<Vec<bool>>,
}

impl FinitePoset {
    pub fn new(elements: Vec<String>, le: Vec<Vec<bool>>) -> Result<FinitePoset> {
        let n = elements.len();
        if le.len() != n || le.iter().any(|row| row.len() != n) {
            return Err(Error::NotAPoset("order matrix is not n×n".into()));
        }
        for i in 0..n {
            if !le[i][i] {
                return Err(Error::NotAPoset(format!("not reflexive at {}", elements[i])));
            }
            for j in 0..n {
                if i != j && le[i][j] && le[j][i] {
                    return Err(Error::NotAPoset(format!(
                        "not antisymmetric at {}, {}",
                        elements[i], elements[j]
                    )));
                }
                for k in 0..n {
                    if le[i][j] && le[j][k] && !le[i][k] {
                        return Err(Error::NotAPoset(format!(
                            "not transitive at {}, {}, {}",
                            elements[i], elements[j], elements[k]
                        )));
                    }
                }
            }
        }
        Ok(FinitePoset { elements, le })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DilworthReport {
    pub n: usize,
    pub max_antichain: usize,
    pub longest_chain: usize,
    pub holds: bool,
}

/// Exhaustively compute the maximum antichain and the longest chain and
/// check n ≤ antichain·chain. Capped at 20 elements: the antichain search
/// branches over subsets.
pub fn dilworth_check(ps: &FinitePoset) -> Result<DilworthReport> {
    let n = ps.len();
    if n > 20 {
        return Err(Error::LimitExceeded(format!(
            "poset has {n} elements, antichain search is capped at 20"
        )));
    }
    // Comparability masks (strict, both directions) for the independent-set
    // search.
    let comp: Vec<u32> = (0..n)
        .map(|i| {
            let mut m = 0u32;
            for j in 0..n {
                if i != j && (ps.le[i][j] || ps.le[j][i]) {
                    m |= 1 << j;
                }
            }
            m
        })
        .collect();
    fn best(comp: &[u32], i: usize, avail: u32, picked: u32) -> u32 {
        if i == comp.len() {
            return picked.count_ones();
        }
        let remaining = (comp.len() - i) as u32;
        let skip = best(comp, i + 1, avail, picked);
        if picked.count_ones() + remaining <= skip {
            return skip;
        }
        if avail & (1 << i) != 0 {
            best(comp, i + 1, avail & !comp[i], picked | (1 << i)).max(skip)
        } else {
            skip
        }
    }
    let a = if n == 0 {
        0
    } else {
        best(&comp, 0, (1u32 << n) - 1, 0) as usize
    };

    // Longest chain by dynamic programming over the strict order.
    let mut longest = vec![0usize; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (0..n).filter(|&j| j != i && ps.le[j][i]).count());
    let mut c = 0usize;
    for &i in &order {
        let mut l = 1;
        for j in 0..n {
            if j != i && ps.le[j][i] {
                l = l.max(longest[j] + 1);
            }
        }
        longest[i] = l;
        c = c.max(l);
    }

    Ok(DilworthReport {
        n,
        max_antichain: a,
        longest_chain: c,
        holds: n <= a * c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::{builtin, decode_nat, oracle_eval};
    use crate::logic::parse_formula;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn encode_nat(mut v: u64) -> Word {
        let mut w = Word::new();
        while v > 0 {
            w.push((v & 1) as u8);
            v >>= 1;
        }
        w
    }

    #[test]
    fn addition_graph_gap_matches_arithmetic() {
        let p = builtin("presburger").unwrap();
        let report = gap_check(&p, "plus", (2, 1), 8).unwrap();
        // Independent arithmetic oracle: the same scan over integers.
        let len = |v: u64| 64 - v.leading_zeros() as i64;
        let mut expect = 0i64;
        for x in 0u64..256 {
            for y in 0u64..256 {
                if len(x + y) <= 8 {
                    expect = expect.max(len(x + y) - len(x).max(len(y)));
                }
            }
        }
        assert_eq!(report.max_gap, expect);
        assert!(report.max_gap <= 1);
        assert!(report.max_gap <= report.pump_bound as i64);
    }

    #[test]
    fn successor_graph_gap_is_one() {
        let p = builtin("nat_succ").unwrap();
        let report = gap_check(&p, "succ", (1, 1), 10).unwrap();
        let len = |v: u64| 64 - v.leading_zeros() as i64;
        let mut expect = 0i64;
        for x in 0u64..1024 {
            if len(x + 1) <= 10 {
                expect = expect.max(len(x + 1) - len(x));
            }
        }
        assert_eq!(report.max_gap, expect);
        assert!(report.max_gap <= 1);
        assert!(report.max_gap <= report.pump_bound as i64);
    }

    #[test]
    fn equality_gap_is_zero() {
        let p = builtin("presburger").unwrap();
        let report = gap_check(&p, "eq", (1, 1), 6).unwrap();
        assert_eq!(report.max_gap, 0);
    }

    #[test]
    fn bad_split_is_reported() {
        let p = builtin("presburger").unwrap();
        assert!(gap_check(&p, "plus", (1, 1), 4).is_err());
        assert!(gap_check(&p, "nosuch", (1, 1), 4).is_err());
    }

    #[test]
    fn product_length_bound_on_addition() {
        let p = builtin("presburger").unwrap();
        let report =
            product_length_check(&p, "plus", FactorSource::Exhaustive, 8, 4).unwrap();
        assert!(report.holds, "worst slack {}", report.worst_slack);
        assert!(report.lists_checked > 10_000);

        // Independent arithmetic oracle on random lists: fold with integer
        // addition and compare representation lengths against the bound.
        let mut rng = StdRng::seed_from_u64(7);
        let len = |v: u64| (64 - v.leading_zeros()) as usize;
        for _ in 0..2000 {
            let m = rng.gen_range(1..=8usize);
            let list: Vec<u64> = (0..m).map(|_| rng.gen_range(0..16u64)).collect();
            let sum: u64 = list.iter().sum();
            let allowed = list.iter().map(|&v| len(v)).max().unwrap()
                + report.pump_bound * (usize::BITS - (m - 1).leading_zeros()) as usize;
            assert!(len(sum) <= allowed);
        }
    }

    #[test]
    fn product_length_bound_on_integers() {
        let p = builtin("int_add").unwrap();
        let report =
            product_length_check(&p, "plus", FactorSource::Random { samples: 200, seed: 11 }, 8, 4)
                .unwrap();
        assert!(report.holds, "worst slack {}", report.worst_slack);
    }

    #[test]
    fn single_factor_product_is_identity_bound() {
        let p = builtin("presburger").unwrap();
        let report = product_length_check(&p, "plus", FactorSource::Exhaustive, 1, 3).unwrap();
        // With m = 1 the allowed length equals the factor's own length.
        assert!(report.holds);
        assert_eq!(report.worst_slack, 0);
    }

    #[test]
    fn zero_factors_fold_to_zero() {
        let p = builtin("presburger").unwrap();
        let m = p.relation("plus").unwrap();
        let dfa = determinize(m);
        let live = reachable_final(&dfa);
        let out = apply_op(&dfa, &live, &Word::new(), &Word::new(), 4);
        assert_eq!(out, vec![Word::new()]);
    }

    #[test]
    fn census_of_natural_order_matches_integers() {
        let p = builtin("nat_le").unwrap();
        let phi = parse_formula("le(x,y)").unwrap();
        let census = column_census(&p, &phi, 4, Some(4)).unwrap();

        // Independent oracle: columns of ≤ on decoded integers. A column
        // is the down-set of y among x-values, so distinct columns are
        // distinct thresholds.
        let domain = trim(&determinize(p.domain()));
        let decode = |w: &Word| {
            let s: String = w.iter().map(|&c| if c == 0 { '0' } else { '1' }).collect();
            decode_nat(&s).unwrap()
        };
        let xs: Vec<u128> = enumerate_llex(&domain, 4)
            .map(|conv| decode(&conv.into_iter().map(|sym| sym[0]).collect()))
            .collect();
        let ys: Vec<u128> = enumerate_llex(&domain, 8)
            .map(|conv| decode(&conv.into_iter().map(|sym| sym[0]).collect()))
            .collect();
        let mut seen = HashSet::new();
        for y in &ys {
            let col: Vec<bool> = xs.iter().map(|x| x <= y).collect();
            seen.insert(col);
        }
        assert_eq!(census.distinct, seen.len());
        assert!(census.distinct <= census.x_count + 1);
    }

    #[test]
    fn census_of_rational_order_stays_small() {
        let p = builtin("q_le").unwrap();
        let phi = parse_formula("lt(x,y)").unwrap();
        let census = column_census(&p, &phi, 3, Some(5)).unwrap();

        // Independent oracle through the direct string-order semantics.
        let domain = trim(&determinize(p.domain()));
        let alph = p.alphabet().clone();
        let word_str = |w: &Word| alph.format_word(w);
        let xs: Vec<String> = enumerate_llex(&domain, 3)
            .map(|conv| word_str(&conv.into_iter().map(|sym| sym[0]).collect()))
            .collect();
        let ys: Vec<String> = enumerate_llex(&domain, 8)
            .map(|conv| word_str(&conv.into_iter().map(|sym| sym[0]).collect()))
            .collect();
        let mut seen = HashSet::new();
        for y in &ys {
            let col: Vec<bool> = xs
                .iter()
                .map(|x| oracle_eval("q_le", "lt", &[x, y]).unwrap())
                .collect();
            seen.insert(col);
        }
        assert_eq!(census.distinct, seen.len());
        let (num, den) = census.ratio();
        assert!(num <= 4 * den, "ratio {num}/{den}");
    }

    #[test]
    fn contrast_census_is_exponential() {
        for k in 2..=10u32 {
            assert_eq!(contrast_census(k), 1usize << k);
        }
    }

    #[test]
    fn divisibility_poset_obeys_bound() {
        // {1,2,3,6} under divisibility.
        let els: Vec<String> = ["1", "2", "3", "6"].iter().map(|s| s.to_string()).collect();
        let vals = [1u32, 2, 3, 6];
        let le: Vec<Vec<bool>> = (0..4)
            .map(|i| (0..4).map(|j| vals[j] % vals[i] == 0).collect())
            .collect();
        let ps = FinitePoset::new(els, le).unwrap();
        let r = dilworth_check(&ps).unwrap();
        assert_eq!((r.n, r.max_antichain, r.longest_chain), (4, 2, 3));
        assert!(r.holds);
    }

    #[test]
    fn chain_and_antichain_extremes() {
        let total: Vec<Vec<bool>> = (0..5).map(|i| (0..5).map(|j| i <= j).collect()).collect();
        let ps = FinitePoset::new((0..5).map(|i| i.to_string()).collect(), total).unwrap();
        let r = dilworth_check(&ps).unwrap();
        assert_eq!((r.max_antichain, r.longest_chain, r.holds), (1, 5, true));

        let anti: Vec<Vec<bool>> = (0..4).map(|i| (0..4).map(|j| i == j).collect()).collect();
        let ps = FinitePoset::new((0..4).map(|i| i.to_string()).collect(), anti).unwrap();
        let r = dilworth_check(&ps).unwrap();
        assert_eq!((r.max_antichain, r.longest_chain, r.holds), (4, 1, true));
    }

    #[test]
    fn invalid_posets_are_rejected() {
        let not_reflexive = vec![vec![false]];
        assert!(FinitePoset::new(vec!["a".into()], not_reflexive).is_err());
        let not_antisym = vec![vec![true, true], vec![true, true]];
        assert!(FinitePoset::new(vec!["a".into(), "b".into()], not_antisym).is_err());
        let not_trans = vec![
            vec![true, true, false],
            vec![false, true, true],
            vec![false, false, true],
        ];
        assert!(
            FinitePoset::new(vec!["a".into(), "b".into(), "c".into()], not_trans).is_err()
        );
    }

    #[test]
    fn random_posets_obey_bound() {
        let mut rng = StdRng::seed_from_u64(20260822);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=12usize);
            // Random strict order on indices (acyclic by construction),
            // then its reflexive-transitive closure.
            let mut le = vec![vec![false; n]; n];
            for i in 0..n {
                le[i][i] = true;
                for j in i + 1..n {
                    if rng.gen_bool(0.3) {
                        le[i][j] = true;
                    }
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if le[i][k] && le[k][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
            let ps =
                FinitePoset::new((0..n).map(|i| i.to_string()).collect(), le).unwrap();
            let r = dilworth_check(&ps).unwrap();
            assert!(r.holds, "n={} a={} c={}", r.n, r.max_antichain, r.longest_chain);
        }
    }
}
