use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_symbol, AutomaticError, Dfao, Symbol};

/// A k-uniform morphism with a seed letter and a coding of letters to output
/// symbols. Letters are single characters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MorphismParts", into = "MorphismParts")]
pub struct UniformMorphism {
    base: u32,
    letters: Vec<char>,
    images: Vec<Vec<usize>>,
    seed: usize,
    coding: Vec<Symbol>,
}

/// Serialized shape of a [`UniformMorphism`], keyed by letter.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub(crate) struct MorphismParts {
    pub base: u32,
    pub seed: char,
    pub images: BTreeMap<char, String>,
    #[serde(default)]
    pub coding: BTreeMap<char, char>,
}

impl From<UniformMorphism> for MorphismParts {
    fn from(m: UniformMorphism) -> Self {
        let images = m
            .letters
            .iter()
            .zip(&m.images)
            .map(|(&l, img)| (l, img.iter().map(|&i| m.letters[i]).collect()))
            .collect();
        let coding = m
            .letters
            .iter()
            .zip(&m.coding)
            .map(|(&l, &s)| (l, s as char))
            .collect();
        MorphismParts {
            base: m.base,
            seed: m.letters[m.seed],
            images,
            coding,
        }
    }
}

impl TryFrom<MorphismParts> for UniformMorphism {
    type Error = AutomaticError;

    fn try_from(p: MorphismParts) -> Result<Self, Self::Error> {
        let images: Vec<(char, String)> = p.images.into_iter().collect();
        let coding = p
            .coding
            .into_iter()
            .map(|(l, s)| {
                u8::try_from(s)
                    .map_err(|_| AutomaticError::InvalidSymbol(s.to_string()))
                    .map(|b| (l, b))
            })
            .collect::<Result<Vec<_>, _>>()?;
        UniformMorphism::new(p.base, &images, p.seed, &coding)
    }
}

impl UniformMorphism {
    /// `images` maps each letter to its image; `coding` may be partial, in
    /// which case unmapped letters code to themselves (they must then be
    /// ASCII).
    pub fn new<S: AsRef<str>>(
        base: u32,
        images: &[(char, S)],
        seed: char,
        coding: &[(char, Symbol)],
    ) -> Result<Self, AutomaticError> {
        if base < 2 {
            return Err(AutomaticError::InvalidBase(base));
        }
        let letters: Vec<char> = images.iter().map(|(l, _)| *l).collect();
        let index_of = |l: char| {
            letters
                .iter()
                .position(|&x| x == l)
                .ok_or(AutomaticError::UnknownLetter(l))
        };
        for (i, &l) in letters.iter().enumerate() {
            if letters[..i].contains(&l) {
                return Err(AutomaticError::Malformed(format!("letter {l:?} defined twice")));
            }
        }
        let mut table = Vec::with_capacity(letters.len());
        for (letter, image) in images {
            let image: Vec<usize> = image
                .as_ref()
                .chars()
                .map(index_of)
                .collect::<Result<_, _>>()?;
            if image.len() != base as usize {
                return Err(AutomaticError::ImageLength {
                    letter: *letter,
                    length: image.len(),
                    base,
                });
            }
            table.push(image);
        }
        let seed = index_of(seed)?;
        let mut codes = Vec::with_capacity(letters.len());
        for &l in &letters {
            let symbol = match coding.iter().find(|(x, _)| *x == l) {
                Some(&(_, s)) => s,
                None => u8::try_from(l).map_err(|_| AutomaticError::InvalidSymbol(l.to_string()))?,
            };
            check_symbol(symbol)?;
            codes.push(symbol);
        }
        for (l, _) in coding {
            index_of(*l)?;
        }
        let morphism = UniformMorphism {
            base,
            letters,
            images: table,
            seed,
            coding: codes,
        };
        if morphism.images[seed][0] != seed {
            return Err(AutomaticError::NotProlongable(morphism.letters[seed]));
        }
        Ok(morphism)
    }

    /// Cobham's construction in reverse: the letters of the morphism are the
    /// states of the minimal most-significant-digit-first automaton.
    pub fn from_dfao(dfao: &Dfao) -> Self {
        let (initial, transitions, outputs) = dfao.to_msd();
        let letters = (0..transitions.len()).map(synthetic_letter).collect();
        UniformMorphism {
            base: dfao.base(),
            letters,
            images: transitions,
            seed: initial,
            coding: outputs,
        }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn seed(&self) -> usize {
        self.seed
    }

    pub fn num_letters(&self) -> usize {
        self.letters.len()
    }

    /// Image of letter `l`, as letter indices.
    pub fn image(&self, l: usize) -> &[usize] {
        &self.images[l]
    }

    pub fn code(&self, l: usize) -> Symbol {
        self.coding[l]
    }

    pub fn apply(&self, word: &[usize]) -> Vec<usize> {
        word.iter().flat_map(|&l| self.images[l].iter().copied()).collect()
    }

    pub fn encode(&self, word: &[usize]) -> Vec<Symbol> {
        word.iter().map(|&l| self.coding[l]).collect()
    }

    /// First `len` letters of the fixed point starting with the seed.
    pub fn fixed_point_prefix(&self, len: usize) -> Vec<usize> {
        let mut word = vec![self.seed];
        while word.len() < len {
            word = self.apply(&word);
        }
        word.truncate(len);
        word
    }

    /// First `len` symbols of the coded fixed point.
    pub fn prefix(&self, len: usize) -> Vec<Symbol> {
        self.encode(&self.fixed_point_prefix(len))
    }

    /// The equivalent automaton: letters read most significant digit first,
    /// converted to the canonical least-significant-first form.
    pub fn to_dfao(&self) -> Dfao {
        Dfao::from_msd(self.base, self.seed, self.images.clone(), self.coding.clone())
            .expect("a prolongable morphism yields a zero-robust automaton")
    }
}

fn synthetic_letter(i: usize) -> char {
    const NAMES: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
    match NAMES.get(i) {
        Some(&b) => b as char,
        None => char::from_u32(0x4E00 + i as u32).expect("CJK block holds every index we use"),
    }
}

/// Cobham's construction: the automaton computing the coded fixed point of `m`.
pub fn from_uniform_morphism(m: &UniformMorphism) -> Dfao {
    m.to_dfao()
}
