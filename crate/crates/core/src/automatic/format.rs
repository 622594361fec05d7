//! Definition files for automatic sequences.
//!
//! Text form, one declaration per line, `#` starts a comment:
//!
//! ```text
//! kind morphism
//! base 2
//! seed 0
//! image 0 -> 01
//! image 1 -> 10
//! coding 0 -> 0        # optional, defaults to the letter itself
//! ```
//!
//! ```text
//! kind dfao
//! base 2
//! order lsd            # or msd
//! initial even
//! state even 0 -> even odd   # name, output symbol, successor per digit 0..k-1
//! state odd 1 -> odd even
//! ```
//!
//! The JSON mirror carries the same declarations as keys:
//! `{"kind": "morphism", "base": 2, "seed": "0", "images": {"0": "01", …}, "coding": {…}}`
//! and
//! `{"kind": "dfao", "base": 2, "order": "lsd", "initial": "even",
//!   "states": {"even": {"output": "0", "next": ["even", "odd"]}, …}}`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::morphism::MorphismParts;
use super::{AutomaticError, Dfao, DigitOrder, Symbol, UniformMorphism};

/// A parsed automatic-sequence definition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Definition {
    Dfao(Dfao),
    Morphism(UniformMorphism),
}

impl Definition {
    pub fn to_dfao(&self) -> Dfao {
        match self {
            Definition::Dfao(d) => d.clone(),
            Definition::Morphism(m) => m.to_dfao(),
        }
    }

    pub fn to_morphism(&self) -> UniformMorphism {
        match self {
            Definition::Dfao(d) => UniformMorphism::from_dfao(d),
            Definition::Morphism(m) => m.clone(),
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<Symbol> {
        match self {
            Definition::Dfao(d) => d.prefix(len),
            Definition::Morphism(m) => m.prefix(len),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum DefinitionJson {
    Dfao(DfaoJson),
    Morphism(MorphismParts),
}

#[derive(Debug, Serialize, Deserialize)]
struct DfaoJson {
    base: u32,
    #[serde(default = "default_order")]
    order: DigitOrder,
    initial: String,
    states: BTreeMap<String, StateJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct StateJson {
    output: char,
    next: Vec<String>,
}

fn default_order() -> DigitOrder {
    DigitOrder::Lsd
}

/// Parses either the text or the JSON form (detected by a leading `{`).
pub fn parse_definition(input: &str) -> Result<Definition, AutomaticError> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

fn parse_json(input: &str) -> Result<Definition, AutomaticError> {
    let json: DefinitionJson =
        serde_json::from_str(input).map_err(|e| AutomaticError::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
    match json {
        DefinitionJson::Morphism(parts) => UniformMorphism::try_from(parts).map(Definition::Morphism),
        DefinitionJson::Dfao(d) => {
            let states: Vec<(String, Symbol, Vec<String>)> = d
                .states
                .into_iter()
                .map(|(name, s)| {
                    let out = u8::try_from(s.output)
                        .map_err(|_| AutomaticError::InvalidSymbol(s.output.to_string()))?;
                    Ok((name, out, s.next))
                })
                .collect::<Result<_, AutomaticError>>()?;
            build_dfao(d.base, d.order, &d.initial, &states).map(Definition::Dfao)
        }
    }
}

fn build_dfao(
    base: u32,
    order: DigitOrder,
    initial: &str,
    states: &[(String, Symbol, Vec<String>)],
) -> Result<Dfao, AutomaticError> {
    let index_of = |name: &str| {
        states
            .iter()
            .position(|(n, _, _)| n == name)
            .ok_or_else(|| AutomaticError::Malformed(format!("unknown state `{name}`")))
    };
    let transitions = states
        .iter()
        .map(|(_, _, next)| next.iter().map(|n| index_of(n)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let outputs = states.iter().map(|(_, o, _)| *o).collect();
    Dfao::with_order(order, base, index_of(initial)?, transitions, outputs)
}

fn parse_text(input: &str) -> Result<Definition, AutomaticError> {
    let mut kind: Option<String> = None;
    let mut base: Option<u32> = None;
    let mut seed: Option<char> = None;
    let mut order = DigitOrder::Lsd;
    let mut initial: Option<String> = None;
    let mut images: Vec<(char, String)> = Vec::new();
    let mut coding: Vec<(char, Symbol)> = Vec::new();
    let mut states: Vec<(String, Symbol, Vec<String>)> = Vec::new();

    for (i, raw) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: &str| AutomaticError::Parse {
            line: line_no,
            message: format!("{message}: `{line}`"),
        };
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "kind" => kind = Some(rest.to_string()),
            "base" => base = Some(rest.parse().map_err(|_| err("bad base"))?),
            "seed" => seed = Some(single_char(rest).ok_or_else(|| err("seed must be one letter"))?),
            "order" => {
                order = match rest {
                    "lsd" => DigitOrder::Lsd,
                    "msd" => DigitOrder::Msd,
                    _ => return Err(err("order must be lsd or msd")),
                }
            }
            "initial" => initial = Some(rest.to_string()),
            "image" => {
                let (letter, image) = rest.split_once("->").ok_or_else(|| err("expected `image a -> w`"))?;
                let letter = single_char(letter.trim()).ok_or_else(|| err("image letter must be one character"))?;
                images.push((letter, image.trim().to_string()));
            }
            "coding" => {
                let (letter, symbol) = rest.split_once("->").ok_or_else(|| err("expected `coding a -> s`"))?;
                let letter = single_char(letter.trim()).ok_or_else(|| err("coding letter must be one character"))?;
                let symbol = single_char(symbol.trim())
                    .and_then(|c| u8::try_from(c).ok())
                    .ok_or_else(|| err("coded symbol must be one ASCII character"))?;
                coding.push((letter, symbol));
            }
            "state" => {
                let (head, next) = rest.split_once("->").ok_or_else(|| err("expected `state name out -> successors`"))?;
                let mut head = head.split_whitespace();
                let (Some(name), Some(out), None) = (head.next(), head.next(), head.next()) else {
                    return Err(err("expected `state name out -> successors`"));
                };
                let out = single_char(out)
                    .and_then(|c| u8::try_from(c).ok())
                    .ok_or_else(|| err("output must be one ASCII character"))?;
                let next = next.split_whitespace().map(str::to_string).collect();
                states.push((name.to_string(), out, next));
            }
            _ => return Err(err("unknown declaration")),
        }
    }

    let missing = |what: &str| AutomaticError::Parse {
        line: 0,
        message: format!("missing `{what}` declaration"),
    };
    let base = base.ok_or_else(|| missing("base"))?;
    let kind = kind.unwrap_or_else(|| if states.is_empty() { "morphism" } else { "dfao" }.to_string());
    match kind.as_str() {
        "morphism" => {
            let seed = seed.ok_or_else(|| missing("seed"))?;
            UniformMorphism::new(base, &images, seed, &coding).map(Definition::Morphism)
        }
        "dfao" => {
            let initial = match initial {
                Some(name) => name,
                None => states.first().map(|s| s.0.clone()).ok_or_else(|| missing("state"))?,
            };
            build_dfao(base, order, &initial, &states).map(Definition::Dfao)
        }
        other => Err(AutomaticError::Parse {
            line: 0,
            message: format!("unknown kind `{other}`"),
        }),
    }
}

fn single_char(s: &str) -> Option<char> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

/// Text form of a morphism definition.
pub fn morphism_to_text(m: &UniformMorphism) -> String {
    let mut out = format!("kind morphism\nbase {}\nseed {}\n", m.base(), m.letters()[m.seed()]);
    for (i, &l) in m.letters().iter().enumerate() {
        let image: String = m.image(i).iter().map(|&j| m.letters()[j]).collect();
        let _ = writeln!(out, "image {l} -> {image}");
    }
    for (i, &l) in m.letters().iter().enumerate() {
        let _ = writeln!(out, "coding {l} -> {}", m.code(i) as char);
    }
    out
}

/// Text form of an automaton definition, states named `q0`, `q1`, ….
pub fn dfao_to_text(d: &Dfao) -> String {
    let mut out = format!("kind dfao\nbase {}\norder lsd\ninitial q{}\n", d.base(), d.initial());
    for (q, row) in d.transitions().iter().enumerate() {
        let next: Vec<String> = row.iter().map(|t| format!("q{t}")).collect();
        let _ = writeln!(out, "state q{q} {} -> {}", d.output(q) as char, next.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const THUE_MORSE: &str = "# Thue-Morse\nkind morphism\nbase 2\nseed 0\nimage 0 -> 01\nimage 1 -> 10\n";

    const POWERS_OF_TWO: &str = "\
kind dfao
base 2
order msd
initial none
state none 0 -> none one
state one 1 -> one many
state many 0 -> many many
";

    #[test]
    fn parses_morphism_text() {
        let def = parse_definition(THUE_MORSE).unwrap();
        assert_eq!(def.prefix(8), b"01101001");
        assert!(matches!(def, Definition::Morphism(_)));
    }

    #[test]
    fn parses_dfao_text() {
        let def = parse_definition(POWERS_OF_TWO).unwrap();
        assert_eq!(def.prefix(9), b"011010001");
    }

    #[test]
    fn json_mirror() {
        let morphism = r#"{"kind":"morphism","base":2,"seed":"0","images":{"0":"01","1":"10"}}"#;
        assert_eq!(parse_definition(morphism).unwrap().prefix(8), b"01101001");
        let dfao = r#"{"kind":"dfao","base":2,"order":"lsd","initial":"e",
            "states":{"e":{"output":"0","next":["e","o"]},"o":{"output":"1","next":["o","e"]}}}"#;
        assert_eq!(parse_definition(dfao).unwrap().prefix(8), b"01101001");
    }

    #[test]
    fn text_round_trip() {
        let Definition::Morphism(m) = parse_definition(THUE_MORSE).unwrap() else {
            panic!("expected a morphism")
        };
        assert_eq!(parse_definition(&morphism_to_text(&m)).unwrap(), Definition::Morphism(m));
        let d = parse_definition(POWERS_OF_TWO).unwrap().to_dfao();
        assert_eq!(parse_definition(&dfao_to_text(&d)).unwrap().to_dfao(), d);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_definition("kind morphism\nbase two\n").unwrap_err();
        assert!(matches!(err, AutomaticError::Parse { line: 2, .. }), "{err:?}");
        let err = parse_definition("kind morphism\nbase 2\nfrobnicate\n").unwrap_err();
        assert!(matches!(err, AutomaticError::Parse { line: 3, .. }), "{err:?}");
        assert!(parse_definition("kind morphism\nseed 0\n").is_err());
        assert!(parse_definition("kind dfao\nbase 2\nstate a 0 -> a b\n").is_err());
    }
}
