//! Words over `{xₙ, a, b}` and their evaluation.
//!
//! Letters are applied left to right (maps act on the right), so the word
//! `x0^-2 x1 x0^2` is the conjugate of `x₁` by `x₀²`. `a` stands for `x₀²`
//! and `b` for `x₁x₂⁻¹`.
//!
//! Grammar: `word := letter*`, `letter := base ("^" int)?`,
//! `base := "x" digits | "a" | "b"`. Letters may be separated by whitespace.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::plmap::PLMap;
use crate::treepair::TreePair;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    X(u32),
    A,
    B,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::X(n) => write!(f, "x{n}"),
            Generator::A => write!(f, "a"),
            Generator::B => write!(f, "b"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub base: Generator,
    pub exp: i64,
}

impl Letter {
    pub fn new(base: Generator, exp: i64) -> Self {
        assert!(exp != 0, "letters carry a nonzero exponent");
        Letter { base, exp }
    }

    pub fn inverse(self) -> Self {
        Letter {
            base: self.base,
            exp: -self.exp,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 1 {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{}^{}", self.base, self.exp)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Word length counted with multiplicity (`x0^3` has length 3).
    pub fn len(&self) -> u64 {
        self.0.iter().map(|l| l.exp.unsigned_abs()).sum()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Reverses the letters and negates exponents.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Merges adjacent letters with the same base, dropping zero exponents.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            match out.last_mut() {
                Some(last) if last.base == l.base => {
                    last.exp += l.exp;
                    if last.exp == 0 {
                        out.pop();
                    }
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    /// `[u, v] = u⁻¹ v⁻¹ u v`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.inverse().concat(&v.inverse()).concat(u).concat(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

pub fn parse(text: &str) -> Result<Word, WordError> {
    let chars: Vec<char> = text.chars().collect();
    let err = |pos: usize, msg: &str| WordError::Syntax {
        pos,
        msg: msg.to_string(),
    };
    let digits = |pos: &mut usize| {
        let start = *pos;
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        chars[start..*pos].iter().collect::<String>()
    };
    let mut letters = Vec::new();
    let mut pos = 0;
    while pos < chars.len() {
        let c = chars[pos];
        if c.is_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        pos += 1;
        let base = match c {
            'a' => Generator::A,
            'b' => Generator::B,
            'x' => {
                let d = digits(&mut pos);
                if d.is_empty() {
                    return Err(err(pos, "expected generator index after 'x'"));
                }
                Generator::X(d.parse().map_err(|_| err(start + 1, "index too large"))?)
            }
            _ => return Err(err(start, &format!("unexpected character {c:?}"))),
        };
        let mut exp = 1i64;
        if chars.get(pos) == Some(&'^') {
            pos += 1;
            let neg = match chars.get(pos) {
                Some('-') => {
                    pos += 1;
                    true
                }
                Some('+') => {
                    pos += 1;
                    false
                }
                _ => false,
            };
            let at = pos;
            let d = digits(&mut pos);
            if d.is_empty() {
                return Err(err(at, "expected exponent after '^'"));
            }
            let v: i64 = d.parse().map_err(|_| err(at, "exponent too large"))?;
            if v == 0 {
                return Err(err(at, "zero exponent"));
            }
            exp = if neg { -v } else { v };
        }
        letters.push(Letter::new(base, exp));
    }
    Ok(Word(letters))
}

fn x0() -> &'static PLMap {
    static M: OnceLock<PLMap> = OnceLock::new();
    M.get_or_init(|| "0:0 1/4:1/2 1/2:3/4 1:1".parse().expect("x0 table"))
}

fn x1() -> &'static PLMap {
    static M: OnceLock<PLMap> = OnceLock::new();
    M.get_or_init(|| "0:0 1/2:1/2 5/8:3/4 3/4:7/8 1:1".parse().expect("x1 table"))
}

/// The map of `xₙ = x₀^{-(n-1)} x₁ x₀^{n-1}` (and the tables for `x₀`, `x₁`).
pub fn generator_map(n: u32) -> PLMap {
    match n {
        0 => x0().clone(),
        1 => x1().clone(),
        _ => x1()
            .conjugate(&x0().pow(n as i64 - 1))
            .expect("unit-interval maps"),
    }
}

/// `a = x₀²`.
pub fn a_map() -> &'static PLMap {
    static M: OnceLock<PLMap> = OnceLock::new();
    M.get_or_init(|| x0().pow(2))
}

/// `b = x₁x₂⁻¹`.
pub fn b_map() -> &'static PLMap {
    static M: OnceLock<PLMap> = OnceLock::new();
    M.get_or_init(|| x1() * &generator_map(2).inverse())
}

pub fn base_map(g: Generator) -> PLMap {
    match g {
        Generator::X(n) => generator_map(n),
        Generator::A => a_map().clone(),
        Generator::B => b_map().clone(),
    }
}

pub fn eval_word(w: &Word) -> PLMap {
    w.letters().iter().fold(PLMap::unit_identity(), |acc, l| {
        &acc * &base_map(l.base).pow(l.exp)
    })
}

pub fn is_trivial(w: &Word) -> bool {
    eval_word(w).is_identity()
}

fn base_diagram(g: Generator) -> TreePair {
    let x0 = TreePair::x0();
    let x1 = TreePair::x1();
    let xn = |n: u32| match n {
        0 => x0.clone(),
        1 => x1.clone(),
        _ => {
            let c = x0.pow(n as i64 - 1);
            c.inverse().multiply(&x1).multiply(&c)
        }
    };
    match g {
        Generator::X(n) => xn(n),
        Generator::A => x0.multiply(&x0),
        Generator::B => x1.multiply(&xn(2).inverse()),
    }
}

/// Evaluates a word entirely with tree-pair diagrams.
pub fn eval_word_diagram(w: &Word) -> TreePair {
    w.letters().iter().fold(TreePair::identity(), |acc, l| {
        acc.multiply(&base_diagram(l.base).pow(l.exp))
    })
}
