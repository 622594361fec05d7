//! k-automatic sequences: automata with output, uniform morphisms, the
//! k-kernel, and certified factor sets.

mod dfao;
pub mod factors;
pub mod format;
pub mod kernel;
mod morphism;

pub use dfao::{Dfao, DigitOrder};
pub use factors::{
    contains_factor, dfao_factor_set, factor_set, factor_set_with_cap, prefix_factor_set,
    FactorClosure, FactorSet, Membership,
};
pub use format::{parse_definition, Definition};
pub use kernel::{colliding_pair, kernel, same_kernel_element, KernelReport};
pub use morphism::{from_uniform_morphism, UniformMorphism};

/// Output symbols and morphism codings are printable ASCII bytes.
pub type Symbol = u8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomaticError {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u32),
    #[error("automaton has no states")]
    EmptyAutomaton,
    #[error("malformed definition: {0}")]
    Malformed(String),
    #[error("output changes when a high-order zero is read in state {state}")]
    NotZeroRobust { state: usize },
    #[error("image of seed {0:?} does not start with the seed")]
    NotProlongable(char),
    #[error("image of {letter:?} has length {length}, expected {base}")]
    ImageLength { letter: char, length: usize, base: u32 },
    #[error("unknown letter {0:?}")]
    UnknownLetter(char),
    #[error("symbol {0:?} is not a printable ASCII character")]
    InvalidSymbol(String),
    #[error("need k^r > Q, but k^r = {modulus} and Q = {q}")]
    KernelPrecondition { modulus: u64, q: u64 },
    #[error("{base}^{r} residues are too many to scan")]
    TooLarge { base: u32, r: u32 },
    #[error("no colliding residues at r = {r} although k^r > Q")]
    NoCollision { r: u32 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub(crate) fn check_symbol(symbol: Symbol) -> Result<(), AutomaticError> {
    if symbol.is_ascii_graphic() {
        Ok(())
    } else {
        Err(AutomaticError::InvalidSymbol(format!("{}", symbol as char)))
    }
}
