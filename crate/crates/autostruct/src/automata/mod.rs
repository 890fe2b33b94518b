//! Finite automata over factored tuple alphabets.

pub mod alphabet;
pub mod analyze;
pub mod det;
pub mod label;
pub mod machine;

pub use alphabet::{Alphabet, SymTuple, TapeSym, Word, MAX_BASE, PAD_NAME};
pub use analyze::{
    count_words_upto, coreachable, enumerate_llex, is_empty, is_finite, prefix_count, reachable,
    shortest_word, trim, CountTable, LlexIter,
};
pub use det::{
    complement, determinize, difference, intersect, language_equal, minimize, union,
};
pub use label::{Label, Mask};
pub use machine::{Automaton, Builder};
