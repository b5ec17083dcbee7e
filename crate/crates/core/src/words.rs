//! Words in a free group: letters, free and cyclic reduction, uniform
//! sampling of cyclically reduced words and exhaustive enumeration.
//!
//! Text format: letters separated by whitespace, `a3` for the third
//! generator and `A3` for its inverse. The empty word is the empty string.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{invalid, parse_err, Error, Result};

/// Default bound on rejection loops.
pub const DEFAULT_MAX_ATTEMPTS: usize = 10_000;

/// Default cap on `(2m)^l` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 1 << 24;

/// A generator `a_i` or its inverse. Generator indices are 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    index: u32,
    positive: bool,
}

impl Letter {
    pub fn new(index: u32, positive: bool) -> Self {
        assert!(index >= 1, "generator indices are 1-based");
        Letter { index, positive }
    }

    pub fn pos(index: u32) -> Self {
        Letter::new(index, true)
    }

    pub fn neg(index: u32) -> Self {
        Letter::new(index, false)
    }

    pub fn index(self) -> u32 {
        self.index
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    /// +1 or -1.
    pub fn sign(self) -> i32 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    pub fn inverse(self) -> Self {
        Letter {
            index: self.index,
            positive: !self.positive,
        }
    }

    /// Position among `s_1..s_m, s_1^-1..s_m^-1`: `s_i -> i-1`, `s_i^-1 -> m+i-1`.
    pub fn symbol_index(self, m: usize) -> usize {
        let base = self.index as usize - 1;
        if self.positive {
            base
        } else {
            m + base
        }
    }

    /// Inverse of [`Letter::symbol_index`].
    pub fn from_symbol_index(idx: usize, m: usize) -> Self {
        assert!(idx < 2 * m, "symbol index {idx} out of range for m = {m}");
        if idx < m {
            Letter::pos(idx as u32 + 1)
        } else {
            Letter::neg((idx - m) as u32 + 1)
        }
    }

    fn order_key(self) -> (u32, bool) {
        (self.index, !self.positive)
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.positive { 'a' } else { 'A' };
        write!(f, "{c}{}", self.index)
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        let positive = match chars.next() {
            Some('a') => true,
            Some('A') => false,
            _ => return Err(parse_err(0, format!("bad letter `{s}`"))),
        };
        let index: u32 = chars
            .as_str()
            .parse()
            .map_err(|_| parse_err(0, format!("bad letter `{s}`")))?;
        if index == 0 {
            return Err(parse_err(
                0,
                format!("generator index must be >= 1 in `{s}`"),
            ));
        }
        Ok(Letter::new(index, positive))
    }
}

/// All `2m` letters in lexicographic order: `a1, A1, a2, A2, ...`.
pub fn alphabet(m: usize) -> Vec<Letter> {
    (1..=m as u32)
        .flat_map(|i| [Letter::pos(i), Letter::neg(i)])
        .collect()
}

/// A finite sequence of letters. Ordering is lexicographic by letters.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
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

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Largest generator index used, 0 for the empty word.
    pub fn max_generator(&self) -> u32 {
        self.0.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Plain concatenation, no reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverse())
    }

    /// Reduced, and the first letter is not the inverse of the last.
    pub fn is_cyclically_reduced(&self) -> bool {
        if !self.is_reduced() {
            return false;
        }
        match (self.first(), self.last()) {
            (Some(f), Some(l)) if self.len() > 1 => f != l.inverse(),
            _ => true,
        }
    }

    /// The unique reduced word equal to `self` in the free group.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// True iff every letter is positive.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|l| l.is_positive())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(Letter::from_str)
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

/// Free reduction as a free function, mirroring the method.
pub fn free_reduce(w: &Word) -> Word {
    w.free_reduce()
}

pub fn is_cyclically_reduced(w: &Word) -> bool {
    w.is_cyclically_reduced()
}

/// Uniform sample from the cyclically reduced words of length `l` over `m`
/// generators.
///
/// Chain sampling gives a uniform reduced word; rejecting words whose last
/// letter cancels the first keeps the law uniform on the cyclically reduced
/// ones.
pub fn sample_cyclically_reduced<R: Rng + ?Sized>(
    m: usize,
    l: usize,
    rng: &mut R,
    max_attempts: usize,
) -> Result<Word> {
    if m == 0 {
        return Err(invalid("m", "alphabet size must be >= 1"));
    }
    if l == 0 {
        return Err(invalid("l", "word length must be >= 1"));
    }
    let letters = alphabet(m);
    for _ in 0..max_attempts.max(1) {
        let mut w = Vec::with_capacity(l);
        let first = letters[rng.gen_range(0..letters.len())];
        w.push(first);
        while w.len() < l {
            let prev = *w.last().unwrap();
            // uniform over the 2m-1 letters other than prev^-1
            let mut pick = rng.gen_range(0..letters.len() - 1);
            let forbidden = letters
                .iter()
                .position(|&x| x == prev.inverse())
                .expect("inverse is in the alphabet");
            if pick >= forbidden {
                pick += 1;
            }
            w.push(letters[pick]);
        }
        if l == 1 || w[l - 1] != first.inverse() {
            return Ok(Word(w));
        }
    }
    Err(Error::AttemptsExhausted {
        what: "cyclically reduced word",
        attempts: max_attempts,
    })
}

/// Which words [`enumerate_words`] keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordConstraint {
    AllReduced,
    CyclicallyReduced,
    /// Reduced, first and last letters positive.
    PositiveBoundaryReduced,
}

/// Every word of length `l` over `m` generators meeting `constraint`, in
/// lexicographic order.
pub fn enumerate_words(
    m: usize,
    l: usize,
    constraint: WordConstraint,
    cap: usize,
) -> Result<Vec<Word>> {
    if m == 0 {
        return Err(invalid("m", "alphabet size must be >= 1"));
    }
    let size = (2.0 * m as f64).powi(l as i32);
    if size > cap as f64 {
        return Err(Error::EnumerationCap { size, cap });
    }
    let letters = alphabet(m);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(l);
    enumerate_rec(&letters, l, constraint, &mut cur, &mut out);
    Ok(out)
}

fn enumerate_rec(
    letters: &[Letter],
    l: usize,
    constraint: WordConstraint,
    cur: &mut Vec<Letter>,
    out: &mut Vec<Word>,
) {
    if cur.len() == l {
        let keep = match constraint {
            WordConstraint::AllReduced => true,
            WordConstraint::CyclicallyReduced => l <= 1 || cur[0] != cur[l - 1].inverse(),
            WordConstraint::PositiveBoundaryReduced => {
                l == 0 || (cur[0].is_positive() && cur[l - 1].is_positive())
            }
        };
        if keep {
            out.push(Word(cur.clone()));
        }
        return;
    }
    for &x in letters {
        if let Some(&prev) = cur.last() {
            if prev == x.inverse() {
                continue;
            }
        }
        if constraint == WordConstraint::PositiveBoundaryReduced
            && cur.is_empty()
            && !x.is_positive()
        {
            continue;
        }
        cur.push(x);
        enumerate_rec(letters, l, constraint, cur, out);
        cur.pop();
    }
}
