//! Words in the free group on `a`, `b`.
//!
//! The flat encoding uses `a`, `b` for the generators and `A`, `B` for their
//! inverses. The exponent encoding writes `a^k` / `b^k` for a nonzero signed
//! integer `k`; an exponent may be wrapped in braces (`a^{-2}`), and both
//! forms may be mixed freely. Whitespace is ignored.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// A generator or its inverse. Declaration order gives `a < A < b < B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    pub fn inverse(self) -> Self {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'a' => Some(Letter::A),
            'A' => Some(Letter::AInv),
            'b' => Some(Letter::B),
            'B' => Some(Letter::BInv),
            _ => None,
        }
    }

    pub fn is_inverse(self) -> bool {
        matches!(self, Letter::AInv | Letter::BInv)
    }

    fn base_char(self) -> char {
        match self {
            Letter::A | Letter::AInv => 'a',
            Letter::B | Letter::BInv => 'b',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordStyle {
    Flat,
    Exponent,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    /// Character offset into the input.
    pub position: usize,
    pub message: String,
}

/// A sequence of letters. The derived `Ord` is lexicographic; use
/// [`Word::shortlex_cmp`] to order words of different lengths.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    /// `self` followed by `letter`.
    pub fn extended(&self, letter: Letter) -> Self {
        let mut letters = Vec::with_capacity(self.0.len() + 1);
        letters.extend_from_slice(&self.0);
        letters.push(letter);
        Self(letters)
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Self(letters)
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_word(text)
    }

    pub fn format(&self, style: WordStyle) -> String {
        format_word(self, style)
    }

    /// Freely reduced form: cancels adjacent inverse pairs until none remain.
    pub fn free_reduce(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self(out)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[1] != w[0].inverse())
    }

    /// Reversed sequence of inverse letters.
    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Shorter words first, then lexicographic in `a < A < b < B`.
    pub fn shortlex_cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s)
    }
}

/// Flat encoding.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

pub fn parse_word(text: &str) -> Result<Word, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut letters = Vec::new();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    loop {
        skip_ws(&mut i);
        if i >= chars.len() {
            break;
        }
        let letter = Letter::from_char(chars[i]).ok_or_else(|| ParseError {
            position: i,
            message: format!("unexpected character {:?}", chars[i]),
        })?;
        i += 1;
        skip_ws(&mut i);
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let exponent = parse_exponent(&chars, &mut i)?;
            let l = if exponent < 0 {
                letter.inverse()
            } else {
                letter
            };
            let count = exponent.unsigned_abs() as usize;
            letters.extend(std::iter::repeat_n(l, count));
        } else {
            letters.push(letter);
        }
    }
    Ok(Word(letters))
}

fn parse_exponent(chars: &[char], i: &mut usize) -> Result<i64, ParseError> {
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    skip_ws(i);
    let braced = *i < chars.len() && chars[*i] == '{';
    if braced {
        *i += 1;
        skip_ws(i);
    }
    let start = *i;
    let mut digits = String::new();
    if *i < chars.len() && (chars[*i] == '-' || chars[*i] == '+') {
        digits.push(chars[*i]);
        *i += 1;
    }
    while *i < chars.len() && chars[*i].is_ascii_digit() {
        digits.push(chars[*i]);
        *i += 1;
    }
    let malformed = |position: usize| ParseError {
        position,
        message: "malformed exponent".to_string(),
    };
    let exponent: i64 = digits.parse().map_err(|_| malformed(start))?;
    if exponent == 0 {
        return Err(ParseError {
            position: start,
            message: "exponent must be nonzero".to_string(),
        });
    }
    if braced {
        skip_ws(i);
        if *i >= chars.len() || chars[*i] != '}' {
            return Err(malformed(*i));
        }
        *i += 1;
    }
    Ok(exponent)
}

pub fn format_word(w: &Word, style: WordStyle) -> String {
    match style {
        WordStyle::Flat => w.to_string(),
        WordStyle::Exponent => {
            let mut out = String::new();
            let letters = w.letters();
            let mut i = 0;
            while i < letters.len() {
                let l = letters[i];
                let run = letters[i..].iter().take_while(|&&x| x == l).count();
                out.push(l.base_char());
                match (l.is_inverse(), run) {
                    (false, 1) => {}
                    (false, k) => out.push_str(&format!("^{k}")),
                    (true, k) => out.push_str(&format!("^-{k}")),
                }
                i += run;
            }
            out
        }
    }
}

pub fn free_reduce(w: &Word) -> Word {
    w.free_reduce()
}

pub fn invert_word(w: &Word) -> Word {
    w.inverse()
}

/// Flat transcription of the length-82 certificate word.
pub const PAPER_WITNESS_FLAT: &str = concat!(
    "aabAABabaaBABaabAbaaBABabaBabAbaaBaaabAAB",
    "aBAAbbaBAAbABaBAAbaBaabAbaBabAbaaBaaabAAB"
);

/// The same word in exponent notation, as displayed in two lines.
pub const PAPER_WITNESS_EXPONENT: &str = concat!(
    "a^2ba^{-2}b^{-1}aba^2b^{-1}a^{-1}b^{-1}a^2ba^{-1}ba^2b^{-1}a^{-1}b^{-1}",
    "abab^{-1}aba^{-1}ba^2b^{-1}a^3ba^{-2}b^{-1}",
    "ab^{-1}a^{-2}b^2ab^{-1}a^{-2}ba^{-1}b^{-1}ab^{-1}a^{-2}bab^{-1}a^2ba^{-1}",
    "bab^{-1}aba^{-1}ba^2b^{-1}a^3ba^{-2}b^{-1}"
);

/// The length-82 word whose image is an infinite-order element of PGL₂(ℤ).
pub fn paper_witness_word() -> Word {
    parse_word(PAPER_WITNESS_FLAT).expect("witness constant is a valid flat word")
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::*;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn parse_flat_and_exponent() {
        assert_eq!(w("aA").letters(), &[A, AInv]);
        assert!(!w("aA").is_freely_reduced());
        assert_eq!(w("a^2bA^2B").letters(), &[A, A, B, AInv, AInv, BInv]);
        assert_eq!(w(" a ^ { -2 } b^+1 ").letters(), &[AInv, AInv, B]);
        assert_eq!(w("").len(), 0);
    }

    #[test]
    fn parse_errors_carry_position() {
        assert_eq!(parse_word("abc").unwrap_err().position, 2);
        assert_eq!(parse_word("a^0").unwrap_err().position, 2);
        assert_eq!(parse_word("ab^").unwrap_err().position, 3);
        assert_eq!(parse_word("a^{2").unwrap_err().position, 4);
        assert!(parse_word("a^-").is_err());
    }

    #[test]
    fn formatting() {
        let x = Word::from_letters(vec![A, A, BInv]);
        assert_eq!(format_word(&x, WordStyle::Flat), "aaB");
        assert_eq!(format_word(&x, WordStyle::Exponent), "a^2b^-1");
        assert_eq!(format_word(&w("AbbbA"), WordStyle::Exponent), "a^-1b^3a^-1");
        assert_eq!(format_word(&Word::new(), WordStyle::Exponent), "");
    }

    #[test]
    fn reduction() {
        assert!(w("aA").free_reduce().is_empty());
        assert!(w("abBA").free_reduce().is_empty());
        assert_eq!(w("abBBa").free_reduce(), w("aBa"));
    }

    #[test]
    fn inversion() {
        assert_eq!(w("ab").inverse(), w("BA"));
        assert_eq!(Word::new().inverse(), Word::new());
        assert_eq!(w("aaB").inverse(), w("bAA"));
    }

    #[test]
    fn witness_encodings_agree() {
        let flat = paper_witness_word();
        let exp = w(PAPER_WITNESS_EXPONENT);
        assert_eq!(flat, exp);
        assert_eq!(flat.len(), 82);
        assert!(flat.is_freely_reduced());
        assert_eq!(flat.free_reduce(), flat);
    }

    #[test]
    fn shortlex() {
        assert_eq!(w("B").shortlex_cmp(&w("aa")), Ordering::Less);
        assert_eq!(w("aA").shortlex_cmp(&w("ab")), Ordering::Less);
        assert!(Letter::A < Letter::AInv && Letter::AInv < Letter::B && Letter::B < Letter::BInv);
    }
}
