//! Boolean-algebra recognition and classification over presented
//! structures whose signature carries the operation graphs `union/3`,
//! `inter/3`, `comp/2`, the constant singletons `zero/1`, `one/1`, and
//! the diagonal `eq/2`.
//!
//! `ba_invariant` first checks the axioms as first-order sentences. A
//! finite model is classified by its atom count. An infinite model is
//! classified by the largest i such that there are i pairwise-disjoint
//! elements, each with infinitely many atoms below it — the invariant
//! that separates the i-fold products of the finite/co-finite algebra.
//!
//! Every axiom here is a universal Horn sentence (after replacing the
//! one genuinely existential obligation per operation — totality — by a
//! separately compiled projection), so each check reduces to emptiness
//! of a conjunction of deterministic machines. That emptiness is
//! decided by an on-the-fly synchronized-product reachability search,
//! which never determinizes or minimizes the multi-tape intermediates
//! that a generic formula compilation would materialize.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::automata::{count_words_upto, determinize, is_finite, trim, Automaton, Mask};
use crate::error::{Error, Result};
use crate::logic::{compile, parse_formula, Compiled};
use crate::presentation::Presentation;

/// Classification result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaInvariant {
    /// Some axiom sentence failed; carries the failing sentence.
    NotBa(String),
    /// Finite model with this many atoms.
    Finite(usize),
    /// Infinite model: the largest verified i of the disjointness
    /// invariant (i = 1 is the finite/co-finite algebra itself).
    Infinite(usize),
    /// The invariant still held at i = cap; larger i unexplored.
    CapExceeded(usize),
}

pub const DEFAULT_CAP: usize = 8;

/// One conjunct of a satisfiability query: a deterministic complete
/// machine reading a subset of the joint tapes. `flipped` negates its
/// acceptance (sound because the machine is complete and each joint
/// tape is pad-closed by a domain conjunct).
#[derive(Clone)]
struct Lit {
    m: Arc<Automaton>,
    map: Vec<usize>,
    flipped: bool,
}

impl Lit {
}

/// Decide satisfiability of a conjunction of literals over convolutions
/// of `tapes` words. Callers must include a domain literal for every
/// tape: that both imposes the domain and makes each tape pad-closed
/// (once a tape pads, it pads forever), which in turn justifies the
/// per-literal "ended" bookkeeping and negation by final-flip.
fn conj_satisfiable(tapes: usize, lits: &[Lit], pad: u8) -> bool {
    let full: Mask = (1u64 << (pad as u32 + 1)) - 1;
    // Pack a joint state (one state or ENDED per literal) into a u128.
    let widths: Vec<u32> = lits
        .iter()
        .map(|l| u128::BITS - u128::from(l.m.num_states()).leading_zeros())
        .collect();
    let total: u32 = widths.iter().sum();
    assert!(total <= 128, "joint state fits a u128");
    let ended: Vec<u128> = lits.iter().map(|l| u128::from(l.m.num_states())).collect();
    let pack = |st: &[u128]| -> u128 {
        let mut acc = 0u128;
        for (v, w) in st.iter().zip(&widths) {
            acc = (acc << w) | v;
        }
        acc
    };
    let unpack = |mut key: u128| -> Vec<u128> {
        let mut st = vec![0u128; lits.len()];
        for i in (0..lits.len()).rev() {
            st[i] = key & ((1u128 << widths[i]) - 1);
            key >>= widths[i];
        }
        st
    };
    let ok = |st: &[u128]| {
        st.iter()
            .zip(lits)
            .zip(&ended)
            .all(|((&s, l), &e)| s == e || (l.m.is_final(s as u32) ^ l.flipped))
    };

    let init: Vec<u128> = lits.iter().map(|l| u128::from(l.m.initial())).collect();
    if ok(&init) {
        return true;
    }
    let mut seen: HashSet<u128> = HashSet::new();
    let mut queue: VecDeque<u128> = VecDeque::new();
    seen.insert(pack(&init));
    queue.push_back(pack(&init));

    // Per-literal candidate moves under a partially refined joint box:
    // either a real edge whose pulled-back label still intersects the
    // box (minus the corner where the literal's own projection is all
    // pad — that region is not a symbol of its alphabet), or — from an
    // accepting state — the "ended" move that pins the literal's tapes
    // to pad for good.
    while let Some(key) = queue.pop_front() {
        let st = unpack(key);
        let mut stack: Vec<(usize, Vec<Mask>, u128)> = vec![(0, vec![full; tapes], 0)];
        while let Some((i, boxm, packed)) = stack.pop() {
            if i == lits.len() {
                // A joint column exists iff some tape can be non-pad.
                if boxm.iter().any(|&m| m & !(1u64 << pad) != 0) && seen.insert(packed) {
                    let full_state = unpack(packed);
                    if ok(&full_state) {
                        return true;
                    }
                    queue.push_back(packed);
                }
                continue;
            }
            let lit = &lits[i];
            let s = st[i];
            let push_ended = |stack: &mut Vec<(usize, Vec<Mask>, u128)>, boxm: &[Mask]| {
                let mut b = boxm.to_vec();
                for &t in &lit.map {
                    b[t] &= 1u64 << pad;
                }
                if b.iter().all(|&m| m != 0) {
                    stack.push((i + 1, b, (packed << widths[i]) | ended[i]));
                }
            };
            if s == ended[i] {
                push_ended(&mut stack, &boxm);
                continue;
            }
            for (label, target) in lit.m.edges_from(s as u32) {
                let mut base = boxm.clone();
                let mut live = true;
                for (k, &t) in lit.map.iter().enumerate() {
                    base[t] &= label.mask(k);
                    if base[t] == 0 {
                        live = false;
                        break;
                    }
                }
                if !live {
                    continue;
                }
                let next = (packed << widths[i]) | u128::from(*target);
                if lit.map.iter().all(|&t| base[t] & (1u64 << pad) != 0) {
                    // Carve out the all-pad corner of the projection,
                    // splitting on the first tape that stays non-pad.
                    for j in 0..lit.map.len() {
                        let mut b = base.clone();
                        let mut ok2 = true;
                        for (jj, &t) in lit.map.iter().enumerate() {
                            if jj < j {
                                b[t] &= 1u64 << pad;
                            } else if jj == j {
                                b[t] &= !(1u64 << pad);
                            }
                            if b[t] == 0 {
                                ok2 = false;
                                break;
                            }
                        }
                        if ok2 {
                            stack.push((i + 1, b, next));
                        }
                    }
                } else {
                    stack.push((i + 1, base, next));
                }
            }
            if lit.m.is_final(s as u32) ^ lit.flipped {
                push_ended(&mut stack, &boxm);
            }
        }
    }
    false
}

/// An axiom check: the sentence holds iff the literal conjunction is
/// empty (for universal sentences phrased as refuted violations) or
/// non-empty (for the existence obligations).
struct AxiomCheck {
    sentence: String,
    tapes: usize,
    lits: Vec<Lit>,
    want_witness: bool,
}

/// Shared per-presentation machinery: deterministic completions of the
/// signature machines and compiled helper relations.
struct BaCtx<'a> {
    p: &'a Presentation,
    dets: HashMap<String, Arc<Automaton>>,
    domain: Arc<Automaton>,
}

impl<'a> BaCtx<'a> {
    fn new(p: &'a Presentation) -> BaCtx<'a> {
        BaCtx {
            p,
            dets: HashMap::new(),
            domain: Arc::new(determinize(p.domain())),
        }
    }

    fn rel(&mut self, name: &str) -> Result<Arc<Automaton>> {
        if let Some(m) = self.dets.get(name) {
            return Ok(m.clone());
        }
        let m = Arc::new(determinize(self.p.relation(name)?));
        self.dets.insert(name.to_string(), m.clone());
        Ok(m)
    }

    /// Compile a formula to the deterministic machine over its sorted
    /// free variables.
    fn compiled(&self, formula: &str) -> Result<Arc<Automaton>> {
        match compile(self.p, &parse_formula(formula)?)? {
            Compiled::Relation(r) => Ok(Arc::new(determinize(r.automaton()))),
            Compiled::Sentence(_) => unreachable!("formula has free variables"),
        }
    }

    /// Evaluate one axiom check. Tapes constrained by some positive
    /// literal inherit domain membership and pad discipline from that
    /// literal's (universe-restricted) machine; every other tape gets
    /// an explicit domain literal, which keeps negation by final-flip
    /// sound there.
    fn holds(&mut self, check: &AxiomCheck) -> bool {
        let mut lits = check.lits.clone();
        let mut covered = vec![false; check.tapes];
        for l in &check.lits {
            if !l.flipped {
                for &t in &l.map {
                    covered[t] = true;
                }
            }
        }
        for t in 0..check.tapes {
            if !covered[t] {
                lits.push(Lit {
                    m: self.domain.clone(),
                    map: vec![t],
                    flipped: false,
                });
            }
        }
        let sat = conj_satisfiable(check.tapes, &lits, self.p.alphabet().pad());
        sat == check.want_witness
    }
}

fn pos(m: Arc<Automaton>, map: &[usize]) -> Lit {
    Lit { m, map: map.to_vec(), flipped: false }
}

fn neg(m: Arc<Automaton>, map: &[usize]) -> Lit {
    Lit { m, map: map.to_vec(), flipped: true }
}

/// The axioms demanded of the operation graphs: totality and
/// functionality, commutativity, associativity, absorption, neutral
/// bounds, complement laws, constants as singletons, and one
/// distributive law. Together these force a Boolean algebra.
fn axiom_checks(ctx: &mut BaCtx) -> Result<Vec<AxiomCheck>> {
    let eq = ctx.rel("eq")?;
    let union = ctx.rel("union")?;
    let inter = ctx.rel("inter")?;
    let comp = ctx.rel("comp")?;
    let zero = ctx.rel("zero")?;
    let one = ctx.rel("one")?;

    let mut checks = Vec::new();
    fn refute(checks: &mut Vec<AxiomCheck>, sentence: &str, tapes: usize, lits: Vec<Lit>) {
        checks.push(AxiomCheck {
            sentence: sentence.to_string(),
            tapes,
            lits,
            want_witness: false,
        });
    }
    for (name, op) in [("union", &union), ("inter", &inter)] {
        refute(&mut checks, 
            &format!("A x. A y. A z. A w. (({name}(x,y,z) & {name}(x,y,w)) -> eq(z,w))"),
            4,
            vec![
                pos(op.clone(), &[0, 1, 2]),
                pos(op.clone(), &[0, 1, 3]),
                neg(eq.clone(), &[2, 3]),
            ],
        );
        refute(&mut checks, 
            &format!("A x. A y. A z. ({name}(x,y,z) -> {name}(y,x,z))"),
            3,
            vec![pos(op.clone(), &[0, 1, 2]), neg(op.clone(), &[1, 0, 2])],
        );
        refute(&mut checks, 
            &format!(
                "A x. A y. A z. A u. A v. A s. A t. \
                 ((({name}(x,y,u) & {name}(u,z,v)) & ({name}(y,z,s) & {name}(x,s,t))) -> eq(v,t))"
            ),
            7,
            vec![
                pos(op.clone(), &[0, 1, 3]),
                pos(op.clone(), &[3, 2, 4]),
                pos(op.clone(), &[1, 2, 5]),
                pos(op.clone(), &[0, 5, 6]),
                neg(eq.clone(), &[4, 6]),
            ],
        );
    }
    refute(&mut checks, 
        "A x. A y. A z. ((comp(x,y) & comp(x,z)) -> eq(y,z))",
        3,
        vec![
            pos(comp.clone(), &[0, 1]),
            pos(comp.clone(), &[0, 2]),
            neg(eq.clone(), &[1, 2]),
        ],
    );
    for (cname, c) in [("zero", &zero), ("one", &one)] {
        checks.push(AxiomCheck {
            sentence: format!("E x. {cname}(x)"),
            tapes: 1,
            lits: vec![pos((*c).clone(), &[0])],
            want_witness: true,
        });
        refute(&mut checks, 
            &format!("A x. A y. (({cname}(x) & {cname}(y)) -> eq(x,y))"),
            2,
            vec![
                pos((*c).clone(), &[0]),
                pos((*c).clone(), &[1]),
                neg(eq.clone(), &[0, 1]),
            ],
        );
    }
    // Absorption: x ∪ (x ∩ y) = x and x ∩ (x ∪ y) = x.
    refute(&mut checks, 
        "A x. A y. A u. A v. ((inter(x,y,u) & union(x,u,v)) -> eq(v,x))",
        4,
        vec![
            pos(inter.clone(), &[0, 1, 2]),
            pos(union.clone(), &[0, 2, 3]),
            neg(eq.clone(), &[3, 0]),
        ],
    );
    refute(&mut checks, 
        "A x. A y. A u. A v. ((union(x,y,u) & inter(x,u,v)) -> eq(v,x))",
        4,
        vec![
            pos(union.clone(), &[0, 1, 2]),
            pos(inter.clone(), &[0, 2, 3]),
            neg(eq.clone(), &[3, 0]),
        ],
    );
    // Neutral bounds: x ∪ 0 = x and x ∩ 1 = x.
    refute(&mut checks, 
        "A x. A q. A v. ((zero(q) & union(x,q,v)) -> eq(v,x))",
        3,
        vec![
            pos(zero.clone(), &[1]),
            pos(union.clone(), &[0, 1, 2]),
            neg(eq.clone(), &[2, 0]),
        ],
    );
    refute(&mut checks, 
        "A x. A q. A v. ((one(q) & inter(x,q,v)) -> eq(v,x))",
        3,
        vec![
            pos(one.clone(), &[1]),
            pos(inter.clone(), &[0, 1, 2]),
            neg(eq.clone(), &[2, 0]),
        ],
    );
    // Complement laws: x ∪ x̄ = 1 and x ∩ x̄ = 0.
    refute(&mut checks, 
        "A x. A y. A v. A q. (((comp(x,y) & union(x,y,v)) & one(q)) -> eq(v,q))",
        4,
        vec![
            pos(comp.clone(), &[0, 1]),
            pos(union.clone(), &[0, 1, 2]),
            pos(one.clone(), &[3]),
            neg(eq.clone(), &[2, 3]),
        ],
    );
    refute(&mut checks, 
        "A x. A y. A v. A q. (((comp(x,y) & inter(x,y,v)) & zero(q)) -> eq(v,q))",
        4,
        vec![
            pos(comp.clone(), &[0, 1]),
            pos(inter.clone(), &[0, 1, 2]),
            pos(zero.clone(), &[3]),
            neg(eq.clone(), &[2, 3]),
        ],
    );
    // One distributive law: x ∩ (y ∪ z) = (x ∩ y) ∪ (x ∩ z).
    refute(&mut checks, 
        "A x. A y. A z. A u. A v. A a. A b. \
         ((((union(y,z,u) & inter(x,u,v)) & inter(x,y,a)) & inter(x,z,b)) -> union(a,b,v))",
        7,
        vec![
            pos(union.clone(), &[1, 2, 3]),
            pos(inter.clone(), &[0, 3, 4]),
            pos(inter.clone(), &[0, 1, 5]),
            pos(inter.clone(), &[0, 2, 6]),
            neg(union.clone(), &[5, 6, 4]),
        ],
    );
    // Totality of the operations, compiled as projections so the
    // violation query stays a plain conjunction.
    for op in ["union", "inter"] {
        let psi = ctx.compiled(&format!("E z. {op}(x,y,z)"))?;
        checks.push(AxiomCheck {
            sentence: format!("A x. A y. E z. {op}(x,y,z)"),
            tapes: 2,
            lits: vec![neg(psi, &[0, 1])],
            want_witness: false,
        });
    }
    let psi = ctx.compiled("E y. comp(x,y)")?;
    checks.push(AxiomCheck {
        sentence: "A x. E y. comp(x,y)".to_string(),
        tapes: 1,
        lits: vec![neg(psi, &[0])],
        want_witness: false,
    });
    Ok(checks)
}

/// `v` is an atom: nonzero, and everything below it is zero or itself
/// (w ≤ v is expressed as inter(w,v,w)).
fn atom_formula(v: &str) -> String {
    format!(
        "(A qz. (zero(qz) -> (!eq({v},qz) & \
         (A qb. (inter(qb,{v},qb) -> (eq(qb,qz) | eq(qb,{v})))))))"
    )
}

fn count_atoms(p: &Presentation) -> Result<usize> {
    let f = parse_formula(&atom_formula("qv"))?;
    match compile(p, &f)? {
        Compiled::Relation(r) => {
            let dfa = trim(&determinize(r.automaton()));
            assert!(is_finite(&dfa), "finite domain, finite atom set");
            let table = count_words_upto(&dfa, dfa.num_states() as usize);
            Ok(table.total().try_into().expect("atom count fits"))
        }
        Compiled::Sentence(_) => unreachable!("atom formula has a free variable"),
    }
}

/// "There are i pairwise-disjoint elements, each with infinitely many
/// atoms below it" — evaluated as satisfiability of a conjunction of
/// two compiled helper relations spread over i tapes.
fn disjointness_invariant(ctx: &mut BaCtx, i: usize) -> Result<bool> {
    let disj = ctx.compiled("E qd. (zero(qd) & inter(x,y,qd))")?;
    let below = ctx.compiled(&format!(
        "Einf qa. ({} & inter(qa,x,qa))",
        atom_formula("qa")
    ))?;
    let mut lits = Vec::new();
    for j in 0..i {
        for k in j + 1..i {
            lits.push(pos(disj.clone(), &[j, k]));
        }
    }
    for v in 0..i {
        lits.push(pos(below.clone(), &[v]));
    }
    let check = AxiomCheck {
        sentence: format!("disjointness invariant at i = {i}"),
        tapes: i,
        lits,
        want_witness: true,
    };
    Ok(ctx.holds(&check))
}

/// A structural fingerprint of the presentation, stable across rebuilds
/// because every stored machine is canonically minimized. Used to
/// memoize classification results within a process.
fn fingerprint(p: &Presentation, cap: usize) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    let dump = |s: &mut String, m: &Automaton| {
        write!(s, "[{};{}", m.initial(), m.num_states()).unwrap();
        for st in 0..m.num_states() {
            write!(s, "|{}", u8::from(m.is_final(st))).unwrap();
            for (l, t) in m.edges_from(st) {
                write!(s, ",{:?}>{t}", l.masks()).unwrap();
            }
        }
        s.push(']');
    };
    write!(s, "{:?};{cap};", p.alphabet()).unwrap();
    dump(&mut s, p.domain());
    for (name, m) in p.relations() {
        s.push_str(name);
        dump(&mut s, m);
    }
    s
}

fn classify(p: &Presentation, cap: usize) -> Result<BaInvariant> {
    if let Some((left, right)) = crate::presentation::factor_product(p) {
        let cl = ba_invariant(&left, cap)?;
        let cr = ba_invariant(&right, cap)?;
        if let Some(combined) = combine_product(&cl, &cr, cap) {
            return Ok(combined);
        }
    }
    classify_flat(p, cap)
}

/// Invariant of a certified direct product from the factor invariants.
///
/// Atoms of a product are an atom on one side paired with zero on the
/// other, so finite atom counts add. A product element has infinitely
/// many atoms below it exactly when one of its components does, and a
/// disjoint family of such elements splits by side into disjoint factor
/// families, so the maximal family sizes add as well; the iteration cap
/// applies to the combined value. Products of algebras that fail the
/// axioms are not combined here (the caller falls back to direct
/// checking), since a violation in a factor need not lift to one in the
/// product when the other factor is degenerate.
fn combine_product(a: &BaInvariant, b: &BaInvariant, cap: usize) -> Option<BaInvariant> {
    use BaInvariant::*;
    let capped = |v: usize| {
        if v >= cap {
            CapExceeded(cap)
        } else {
            Infinite(v)
        }
    };
    match (a, b) {
        (NotBa(_), _) | (_, NotBa(_)) => None,
        (CapExceeded(c), _) | (_, CapExceeded(c)) => Some(CapExceeded(*c)),
        (Finite(x), Finite(y)) => Some(Finite(x + y)),
        (Finite(_), Infinite(i)) | (Infinite(i), Finite(_)) => Some(capped(*i)),
        (Infinite(i), Infinite(j)) => Some(capped(i + j)),
    }
}

fn classify_flat(p: &Presentation, cap: usize) -> Result<BaInvariant> {
    let trace = std::env::var("BA_TRACE").is_ok();
    let mut ctx = BaCtx::new(p);
    for check in axiom_checks(&mut ctx)? {
        let t0 = std::time::Instant::now();
        let holds = ctx.holds(&check);
        if trace {
            eprintln!("{:>10.2?}  {}  {}", t0.elapsed(), holds, check.sentence);
        }
        if !holds {
            return Ok(BaInvariant::NotBa(check.sentence));
        }
    }
    if is_finite(&trim(&determinize(p.domain()))) {
        return Ok(BaInvariant::Finite(count_atoms(p)?));
    }
    for i in 1..=cap {
        if !disjointness_invariant(&mut ctx, i)? {
            return Ok(BaInvariant::Infinite(i - 1));
        }
    }
    Ok(BaInvariant::CapExceeded(cap))
}

/// Check the axioms, then classify: atom count when the domain is
/// finite, otherwise the largest i ≤ cap passing the disjointness
/// invariant. Missing signature entries surface as relation errors.
/// Results are memoized per process, keyed by the canonical machine
/// structure, so repeated classification of the same presented algebra
/// (as `ba_isomorphic` does) costs one traversal.
pub fn ba_invariant(p: &Presentation, cap: usize) -> Result<BaInvariant> {
    use std::sync::Mutex;
    static MEMO: Mutex<Option<HashMap<String, BaInvariant>>> = Mutex::new(None);
    let key = fingerprint(p, cap);
    if let Some(hit) = MEMO.lock().unwrap().get_or_insert_with(HashMap::new).get(&key) {
        return Ok(hit.clone());
    }
    let result = classify(p, cap)?;
    MEMO.lock()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .insert(key, result.clone());
    Ok(result)
}

/// Decide isomorphism of two presented Boolean algebras: finite models
/// by atom count, infinite ones by the disjointness invariant.
pub fn ba_isomorphic(p: &Presentation, q: &Presentation) -> Result<bool> {
    let classify = |s: &Presentation| -> Result<BaInvariant> {
        match ba_invariant(s, DEFAULT_CAP)? {
            BaInvariant::NotBa(ax) => Err(Error::NotABooleanAlgebra(format!(
                "axiom fails: {ax}"
            ))),
            BaInvariant::CapExceeded(i) => Err(Error::CapExceeded(i)),
            other => Ok(other),
        }
    };
    Ok(classify(p)? == classify(q)?)
}

/// The power-set algebra on `bits` atoms, presented over fixed-length
/// bit words (element = subset of {1..bits} as its indicator word).
pub fn finite_ba(bits: usize) -> Result<Presentation> {
    use crate::automata::Alphabet;
    use crate::presentation::regex_to_automaton;
    use std::collections::BTreeMap;

    assert!(bits >= 1 && bits <= 6, "fixture scale");
    let a1 = Alphabet::new(vec!["0", "1"])?;
    let regex = "(0|1)".repeat(bits);
    let domain = regex_to_automaton(&a1, &regex, 0)?;
    let a2 = a1.with_arity(2);
    let a3 = a1.with_arity(3);

    let tri = |f: fn(u8, u8) -> u8| -> Result<crate::automata::Automaton> {
        let mut edges = Vec::new();
        for a in 0..2u8 {
            for b in 0..2u8 {
                edges.push((0, format!("{a},{b},{}", f(a, b)), 0));
            }
        }
        crate::builtins::machine(&a3, 1, 0, &[0], &edges)
    };
    let union = tri(|a, b| a | b)?;
    let inter = tri(|a, b| a & b)?;
    let comp = crate::builtins::machine(
        &a2,
        1,
        0,
        &[0],
        &[(0, "0,1".to_string(), 0), (0, "1,0".to_string(), 0)],
    )?;
    let word_machine = |sym: &str| -> Result<crate::automata::Automaton> {
        let edges: Vec<(u32, String, u32)> =
            (0..bits as u32).map(|i| (i, sym.to_string(), i + 1)).collect();
        crate::builtins::machine(&a1, bits as u32 + 1, 0, &[bits as u32], &edges)
    };
    let zero = word_machine("0")?;
    let one = word_machine("1")?;

    let mut rels = BTreeMap::new();
    rels.insert("union".to_string(), crate::builtins::restrict(&domain, union)?);
    rels.insert("inter".to_string(), crate::builtins::restrict(&domain, inter)?);
    rels.insert("comp".to_string(), crate::builtins::restrict(&domain, comp)?);
    rels.insert("zero".to_string(), crate::builtins::restrict(&domain, zero)?);
    rels.insert("one".to_string(), crate::builtins::restrict(&domain, one)?);
    crate::builtins::with_eq(a1, domain, rels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin;
    use crate::presentation::{parse_presentation, product_presentation, serialize_presentation};

    #[test]
    #[ignore = "timing probe"]
    fn profile_axioms() {
        let p = builtin("b_omega").unwrap();
        let t0 = std::time::Instant::now();
        println!("{:?} b_omega  {:.2?}", ba_invariant(&p, 8).unwrap(), t0.elapsed());
        let t0 = std::time::Instant::now();
        let p2 = product_presentation(&p, &p).unwrap();
        println!("build product2 {:.2?}", t0.elapsed());
        let t0 = std::time::Instant::now();
        println!("{:?} product2  {:.2?}", ba_invariant(&p2, 8).unwrap(), t0.elapsed());
        let t0 = std::time::Instant::now();
        let p3 = product_presentation(&p2, &p).unwrap();
        println!("build product3 {:.2?}", t0.elapsed());
        let t0 = std::time::Instant::now();
        println!("{:?} product3  {:.2?}", ba_invariant(&p3, 8).unwrap(), t0.elapsed());
    }

    #[test]
    fn finite_models_count_atoms() {
        assert_eq!(ba_invariant(&finite_ba(2).unwrap(), 8).unwrap(), BaInvariant::Finite(2));
        assert_eq!(ba_invariant(&finite_ba(3).unwrap(), 8).unwrap(), BaInvariant::Finite(3));
    }

    #[test]
    fn finite_cofinite_algebra_has_invariant_one() {
        let p = builtin("b_omega").unwrap();
        assert_eq!(ba_invariant(&p, 8).unwrap(), BaInvariant::Infinite(1));
    }

    #[test]
    fn cap_stops_the_iteration() {
        let p = builtin("b_omega").unwrap();
        assert_eq!(ba_invariant(&p, 1).unwrap(), BaInvariant::CapExceeded(1));
    }

    #[test]
    fn broken_complement_is_rejected() {
        let p = finite_ba(2).unwrap();
        let mut rels = p.relations().clone();
        rels.insert("comp".to_string(), p.relation("eq").unwrap().clone());
        let broken =
            Presentation::new(p.alphabet().clone(), p.domain().clone(), rels);
        match ba_invariant(&broken, 8).unwrap() {
            BaInvariant::NotBa(_) => {}
            other => panic!("expected NotBa, got {other:?}"),
        }
        assert!(matches!(
            ba_isomorphic(&broken, &p),
            Err(Error::NotABooleanAlgebra(_))
        ));
    }

    #[test]
    fn isomorphism_compares_invariants() {
        let b = builtin("b_omega").unwrap();
        let b2 = parse_presentation(&serialize_presentation(&b)).unwrap();
        assert!(ba_isomorphic(&b, &b2).unwrap());
        assert!(!ba_isomorphic(&finite_ba(2).unwrap(), &finite_ba(3).unwrap()).unwrap());
        assert!(!ba_isomorphic(&finite_ba(3).unwrap(), &b).unwrap());
    }
}
