//! Words in the free group on `x`, `y`.
//!
//! Text syntax: `x`, `y` are the generators and `X`, `Y` their inverses.
//! Powers are written `x^3`, `(xy)^5` or `(xY)^-2`; `1` or an empty string is
//! the identity.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unexpected {found:?} at position {pos}")]
    Unexpected { pos: usize, found: char },
    #[error("unexpected end of word")]
    UnexpectedEnd,
    #[error("exponent out of range at position {0}")]
    BadExponent(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    X,
    Y,
}

impl Generator {
    pub fn other(self) -> Generator {
        match self {
            Generator::X => Generator::Y,
            Generator::Y => Generator::X,
        }
    }
}

/// A generator or its inverse. Orders positive letters before inverse ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub inverse: bool,
    pub generator: Generator,
}

impl Letter {
    pub const X: Letter = Letter::new(Generator::X, false);
    pub const Y: Letter = Letter::new(Generator::Y, false);
    pub const X_INV: Letter = Letter::new(Generator::X, true);
    pub const Y_INV: Letter = Letter::new(Generator::Y, true);

    pub const fn new(generator: Generator, inverse: bool) -> Self {
        Self { inverse, generator }
    }

    pub fn inv(self) -> Letter {
        Letter::new(self.generator, !self.inverse)
    }

    fn to_char(self) -> char {
        match (self.generator, self.inverse) {
            (Generator::X, false) => 'x',
            (Generator::Y, false) => 'y',
            (Generator::X, true) => 'X',
            (Generator::Y, true) => 'Y',
        }
    }
}

/// A finite sequence of letters. Not necessarily reduced; see [`FreeWord::reduced`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Self {
            letters: letters.into_iter().collect(),
        }
    }

    pub fn letter(l: Letter) -> Self {
        Self { letters: vec![l] }
    }

    /// `g h g h …` of the given length, starting with `first`.
    pub fn alternating(first: Generator, len: usize) -> Self {
        let mut g = first;
        let mut letters = Vec::with_capacity(len);
        for _ in 0..len {
            letters.push(Letter::new(g, false));
            g = g.other();
        }
        Self { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> FreeWord {
        Self {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> FreeWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Self { letters }
    }

    /// Free reduction: cancels adjacent inverse pairs until none remain.
    pub fn reduced(&self) -> FreeWord {
        Self {
            letters: free_reduce(&self.letters),
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1].inv())
    }

    /// Free and cyclic reduction; the result is a conjugate of `self`.
    pub fn cyclically_reduced(&self) -> FreeWord {
        Self {
            letters: cyclic_reduce(free_reduce(&self.letters)),
        }
    }

    /// Rotation starting at letter `k`.
    pub fn rotate(&self, k: usize) -> FreeWord {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            letters.rotate_left(k % self.len());
        }
        Self { letters }
    }
}

pub(crate) fn free_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Strips conjugating letters from a freely reduced word.
pub(crate) fn cyclic_reduce(mut letters: Vec<Letter>) -> Vec<Letter> {
    let mut start = 0;
    let mut end = letters.len();
    while end - start >= 2 && letters[start] == letters[end - 1].inv() {
        start += 1;
        end -= 1;
    }
    letters.truncate(end);
    letters.drain(..start);
    letters
}

impl Mul for &FreeWord {
    type Output = FreeWord;

    fn mul(self, rhs: &FreeWord) -> FreeWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&rhs.letters);
        FreeWord { letters }
    }
}

impl Mul for FreeWord {
    type Output = FreeWord;

    fn mul(self, rhs: FreeWord) -> FreeWord {
        &self * &rhs
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, WordError> {
        let chars: Vec<(usize, char)> = s
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        let mut parser = Parser { chars, pos: 0 };
        let w = parser.word()?;
        match parser.peek() {
            None => Ok(w),
            Some((pos, found)) => Err(WordError::Unexpected { pos, found }),
        }
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<FreeWord, WordError> {
        let mut letters = Vec::new();
        while let Some((pos, c)) = self.peek() {
            let atom = match c {
                ')' => break,
                'x' | 'y' | 'X' | 'Y' => {
                    self.pos += 1;
                    FreeWord::letter(match c {
                        'x' => Letter::X,
                        'y' => Letter::Y,
                        'X' => Letter::X_INV,
                        _ => Letter::Y_INV,
                    })
                }
                '1' => {
                    self.pos += 1;
                    FreeWord::identity()
                }
                '(' => {
                    self.pos += 1;
                    let inner = self.word()?;
                    match self.peek() {
                        Some((_, ')')) => self.pos += 1,
                        Some((pos, found)) => return Err(WordError::Unexpected { pos, found }),
                        None => return Err(WordError::UnexpectedEnd),
                    }
                    inner
                }
                found => return Err(WordError::Unexpected { pos, found }),
            };
            let atom = match self.peek() {
                Some((_, '^')) => {
                    self.pos += 1;
                    atom.pow(self.exponent()?)
                }
                _ => atom,
            };
            letters.extend(atom.letters);
        }
        Ok(FreeWord { letters })
    }

    fn exponent(&mut self) -> Result<i64, WordError> {
        let start = self
            .peek()
            .map(|(p, _)| p)
            .ok_or(WordError::UnexpectedEnd)?;
        let mut text = String::new();
        if let Some((_, '-')) = self.peek() {
            text.push('-');
            self.pos += 1;
        }
        while let Some((_, c)) = self.peek().filter(|(_, c)| c.is_ascii_digit()) {
            text.push(c);
            self.pos += 1;
        }
        let k: i64 = text.parse().map_err(|_| WordError::BadExponent(start))?;
        if k.unsigned_abs() > 1_000_000 {
            return Err(WordError::BadExponent(start));
        }
        Ok(k)
    }
}
