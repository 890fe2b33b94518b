//! Factored transition labels.
//!
//! A label is a box: one 64-bit coordinate mask per tape. It stands for
//! every letter inside the box except the all-padding tuple. Boolean
//! operations act mask-wise, so automata over wide tuple alphabets never
//! enumerate their letters symbol by symbol.

use super::alphabet::{Alphabet, SymTuple, TapeSym};
use smallvec::SmallVec;

pub type Mask = u64;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Label(SmallVec<[Mask; 8]>);

fn bit(c: TapeSym) -> Mask {
    1u64 << c
}

impl Label {
    pub fn new(masks: impl IntoIterator<Item = Mask>) -> Self {
        Label(masks.into_iter().collect())
    }

    /// The box of all letters of the alphabet.
    pub fn full(alph: &Alphabet) -> Self {
        let all = (bit(alph.pad()) << 1).wrapping_sub(1);
        Label(std::iter::repeat(all).take(alph.arity()).collect()).normalize(alph.pad())
    }

    /// Drop padding bits that denote no letter: padding on tape `i` only
    /// ever combines into the excluded all-padding tuple when every other
    /// tape is padding-only. Keeping labels in this form makes equal boxes
    /// structurally equal, which canonical numbering relies on.
    pub fn normalize(mut self, pad: TapeSym) -> Label {
        let pb = bit(pad);
        for i in 0..self.0.len() {
            if self.0[i] & pb != 0
                && (0..self.0.len()).filter(|&j| j != i).all(|j| self.0[j] == pb)
            {
                self.0[i] &= !pb;
            }
        }
        self
    }

    pub fn from_sym(sym: &SymTuple) -> Self {
        Label(sym.iter().map(|&c| bit(c)).collect())
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn mask(&self, tape: usize) -> Mask {
        self.0[tape]
    }

    pub fn masks(&self) -> &[Mask] {
        &self.0
    }

    pub fn contains(&self, sym: &SymTuple) -> bool {
        debug_assert_eq!(sym.len(), self.0.len());
        sym.iter()
            .zip(&self.0)
            .all(|(&c, &m)| m & bit(c) != 0)
    }

    /// Intersection, `None` when no valid letter remains.
    pub fn and(&self, other: &Label, pad: TapeSym) -> Option<Label> {
        debug_assert_eq!(self.0.len(), other.0.len());
        let out = Label(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a & b)
                .collect(),
        )
        .normalize(pad);
        if out.is_empty(pad) {
            None
        } else {
            Some(out)
        }
    }

    /// True when the box holds no letter (some tape empty, or only the
    /// all-padding tuple would remain).
    pub fn is_empty(&self, pad: TapeSym) -> bool {
        if self.0.iter().any(|&m| m == 0) {
            return true;
        }
        self.0.iter().all(|&m| m == bit(pad))
    }

    /// Exact number of letters in the box.
    pub fn size(&self, pad: TapeSym) -> u128 {
        let mut n: u128 = 1;
        let mut all_pad = true;
        for &m in &self.0 {
            n *= m.count_ones() as u128;
            all_pad &= m & bit(pad) != 0;
        }
        if all_pad {
            n - 1
        } else {
            n
        }
    }

    /// Lexicographically least letter in the box.
    pub fn min_sym(&self, pad: TapeSym) -> Option<SymTuple> {
        if self.is_empty(pad) {
            return None;
        }
        Some(
            self.0
                .iter()
                .map(|&m| {
                    let non_pad = m & !bit(pad);
                    if non_pad != 0 {
                        non_pad.trailing_zeros() as TapeSym
                    } else {
                        pad
                    }
                })
                .collect(),
        )
    }

    /// Box difference as disjoint boxes. Results may be all-padding-empty;
    /// callers filter with `is_empty`.
    pub fn subtract(&self, other: &Label) -> Vec<Label> {
        debug_assert_eq!(self.0.len(), other.0.len());
        let mut out = Vec::new();
        let mut prefix: SmallVec<[Mask; 8]> = SmallVec::new();
        for i in 0..self.0.len() {
            let keep = self.0[i] & !other.0[i];
            if keep != 0 {
                let mut masks = prefix.clone();
                masks.push(keep);
                masks.extend_from_slice(&self.0[i + 1..]);
                if masks.iter().all(|&m| m != 0) {
                    out.push(Label(masks));
                }
            }
            let common = self.0[i] & other.0[i];
            if common == 0 {
                return out;
            }
            prefix.push(common);
        }
        out
    }

    pub fn insert_tape(&self, pos: usize, mask: Mask) -> Label {
        let mut masks = self.0.clone();
        masks.insert(pos, mask);
        Label(masks)
    }

    pub fn remove_tape(&self, pos: usize) -> Label {
        let mut masks = self.0.clone();
        masks.remove(pos);
        Label(masks)
    }

    /// Reorder tapes: output tape `i` takes the mask of input tape `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Label {
        Label(perm.iter().map(|&src| self.0[src]).collect())
    }

    /// Letters of the box in lexicographic order.
    pub fn syms(&self, pad: TapeSym) -> LabelSyms {
        let lists: Vec<Vec<TapeSym>> = self
            .0
            .iter()
            .map(|&m| {
                (0..=pad).filter(|&c| m & bit(c) != 0).collect::<Vec<_>>()
            })
            .collect();
        let done = lists.iter().any(|l| l.is_empty());
        LabelSyms {
            idx: vec![0; lists.len()],
            lists,
            done,
            pad,
        }
    }
}

pub struct LabelSyms {
    lists: Vec<Vec<TapeSym>>,
    idx: Vec<usize>,
    done: bool,
    pad: TapeSym,
}

impl Iterator for LabelSyms {
    type Item = SymTuple;

    fn next(&mut self) -> Option<SymTuple> {
        if self.done {
            return None;
        }
        let cur: SymTuple = self
            .idx
            .iter()
            .zip(&self.lists)
            .map(|(&i, l)| l[i])
            .collect();
        if cur.iter().all(|&c| c == self.pad) {
            self.done = true;
            return None;
        }
        for t in (0..self.lists.len()).rev() {
            self.idx[t] += 1;
            if self.idx[t] < self.lists[t].len() {
                break;
            }
            self.idx[t] = 0;
            if t == 0 {
                self.done = true;
            }
        }
        Some(cur)
    }
}
