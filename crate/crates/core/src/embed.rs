//! The word table `W_k` (reduced words of length `k = l/3` with positive
//! first and last letters), the map `phi: s_i -> w_i` from the positive
//! triangular model into the Gromov model, coset normal forms with respect
//! to the subgroup generated by the table, and sampling from `W'_l`.
//!
//! Factor lists are signed 1-based indices: `+i` stands for `w_i`, `-i` for
//! `w_i^-1`, multiplied left to right.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{invalid, parse_err, Error, Result};
use crate::models::{ModelTag, Presentation, DEFAULT_COUNT_CAP};
use crate::words::{
    alphabet, enumerate_words, Letter, Word, WordConstraint, DEFAULT_ENUMERATION_CAP,
};

/// Smallest relator length accepted by [`coset_normal_form`].
pub const MIN_COSET_LENGTH: usize = 9;

/// Default factor applied to `(2m-1)^(3d)` by [`sample_gromov_restricted`].
pub const DEFAULT_COUNT_SCALE: f64 = 0.5;

#[derive(Clone, Debug)]
pub struct WordTable {
    n: usize,
    l: usize,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl WordTable {
    pub fn generator_count(&self) -> usize {
        self.n
    }

    pub fn relator_length(&self) -> usize {
        self.l
    }

    /// `l / 3`.
    pub fn block_length(&self) -> usize {
        self.l / 3
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// `w_i` for 1-based `i`.
    pub fn word(&self, i: usize) -> &Word {
        &self.words[i - 1]
    }

    /// 1-based index of `w`, if it is a table word.
    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).map(|&i| i + 1)
    }

    /// Word spelled by one signed factor.
    pub fn factor_word(&self, f: i64) -> Result<Word> {
        let i = f.unsigned_abs() as usize;
        if f == 0 || i > self.len() {
            return Err(invalid(
                "factors",
                format!("index {f} out of range 1..={}", self.len()),
            ));
        }
        Ok(if f > 0 {
            self.word(i).clone()
        } else {
            self.word(i).inverse()
        })
    }

    /// Free reduction of the product of `factors`.
    pub fn evaluate(&self, factors: &[i64]) -> Result<Word> {
        let mut letters = Vec::new();
        for &f in factors {
            letters.extend_from_slice(self.factor_word(f)?.letters());
        }
        Ok(Word::new(letters).free_reduce())
    }
}

pub fn build_word_table(n: usize, l: usize) -> Result<WordTable> {
    build_word_table_with_cap(n, l, DEFAULT_ENUMERATION_CAP)
}

pub fn build_word_table_with_cap(n: usize, l: usize, cap: usize) -> Result<WordTable> {
    if n < 1 {
        return Err(invalid("n", "need at least one generator"));
    }
    if l == 0 || !l.is_multiple_of(3) {
        return Err(invalid(
            "l",
            format!("must be a positive multiple of 3, got {l}"),
        ));
    }
    let words = enumerate_words(n, l / 3, WordConstraint::PositiveBoundaryReduced, cap)?;
    let index = words
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    Ok(WordTable { n, l, words, index })
}

/// `s_x s_y s_z -> w_x w_y w_z` for every relator.
pub fn phi_map(p: &Presentation, t: &WordTable) -> Result<Presentation> {
    if p.generator_count != t.len() {
        return Err(invalid(
            "m",
            format!(
                "presentation has {} generators, table has {} words",
                p.generator_count,
                t.len()
            ),
        ));
    }
    let mut images = Vec::with_capacity(p.relators.len());
    for (i, r) in p.relators.iter().enumerate() {
        if r.len() != 3 {
            return Err(Error::WrongRelatorLength {
                index: i,
                len: r.len(),
            });
        }
        if !r.is_positive() {
            return Err(invalid(
                "relators",
                format!("relator {i} ({r}) is not positive"),
            ));
        }
        let mut letters = Vec::with_capacity(t.relator_length());
        for l in r.letters() {
            letters.extend_from_slice(t.word(l.index() as usize).letters());
        }
        let image = Word::new(letters);
        if image.len() != t.relator_length() || !image.is_cyclically_reduced() {
            return Err(Error::Internal(format!(
                "image of {r} is not cyclically reduced"
            )));
        }
        images.push(image);
    }
    Ok(Presentation::new(t.generator_count(), images)?.with_tag(ModelTag::GromovRestricted))
}

/// Split of a relator of `W'_l` into its three table indices.
pub fn decompose_restricted(w: &Word, t: &WordTable) -> Option<[usize; 3]> {
    let k = t.block_length();
    if w.len() != 3 * k {
        return None;
    }
    let l = w.letters();
    let mut out = [0; 3];
    for (j, slot) in out.iter_mut().enumerate() {
        *slot = t.index_of(&Word::new(l[j * k..(j + 1) * k].to_vec()))?;
    }
    Some(out)
}

/// `w = free_reduce(prefix * product of factors)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetForm {
    pub prefix: Word,
    pub factors: Vec<i64>,
}

impl CosetForm {
    pub fn evaluate(&self, t: &WordTable) -> Result<Word> {
        Ok(self
            .prefix
            .concat(&t.evaluate(&self.factors)?)
            .free_reduce())
    }
}

pub fn format_factors(factors: &[i64]) -> String {
    factors
        .iter()
        .map(|f| f.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_factors(s: &str) -> Result<Vec<i64>> {
    s.split_whitespace()
        .map(|x| {
            x.parse::<i64>()
                .ok()
                .filter(|&v| v != 0)
                .ok_or_else(|| parse_err(0, format!("bad factor `{x}`")))
        })
        .collect()
}

/// Two lines: the prefix in word format, then the factor list.
impl fmt::Display for CosetForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.prefix)?;
        writeln!(f, "{}", format_factors(&self.factors))
    }
}

impl FromStr for CosetForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.split('\n');
        let prefix = lines
            .next()
            .unwrap_or("")
            .parse()
            .map_err(|e| parse_err(1, format!("{e}")))?;
        let factors =
            parse_factors(lines.next().unwrap_or("")).map_err(|e| parse_err(2, format!("{e}")))?;
        Ok(CosetForm { prefix, factors })
    }
}

/// Writes `w` as `prefix * (product of table words and inverses)` with a
/// prefix of length at most 2.
pub fn coset_normal_form(w: &Word, t: &WordTable) -> Result<CosetForm> {
    let n = t.generator_count();
    if n < 2 {
        return Err(invalid("n", "coset normal forms need n >= 2"));
    }
    if t.relator_length() < MIN_COSET_LENGTH {
        return Err(invalid(
            "l",
            format!("coset normal forms need l >= {MIN_COSET_LENGTH}"),
        ));
    }
    if !w.is_reduced() {
        return Err(invalid("w", format!("`{w}` is not reduced")));
    }
    if w.max_generator() as usize > n {
        return Err(invalid(
            "w",
            format!("`{w}` uses a generator beyond n = {n}"),
        ));
    }
    let splitter = Splitter {
        t,
        letters: alphabet(n),
    };
    for prefix in prefix_candidates(w, n) {
        let rest = prefix.inverse().concat(w).free_reduce();
        if let Some(factors) = splitter.split(rest.letters()) {
            let form = CosetForm { prefix, factors };
            if form.evaluate(t)? != *w {
                return Err(Error::Internal(format!(
                    "coset form of `{w}` does not evaluate back"
                )));
            }
            return Ok(form);
        }
    }
    Err(Error::Internal(format!("no coset form found for `{w}`")))
}

/// Empty prefix, then the parity/sign case choice, then every prefix of
/// length 1 and 2 in lexicographic order.
fn prefix_candidates(w: &Word, n: usize) -> Vec<Word> {
    let letters = alphabet(n);
    let mut out = vec![Word::empty()];
    if let Some(p) = case_prefix(w, n) {
        out.push(p);
    }
    for &a in &letters {
        out.push(Word::new(vec![a]));
    }
    for &a in &letters {
        for &b in &letters {
            if b != a.inverse() {
                out.push(Word::new(vec![a, b]));
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|p| seen.insert(p.clone()));
    out
}

/// Prefix prescribed by the sign of the first and last letters and the
/// parity of the length, for words starting with a positive letter.
fn case_prefix(w: &Word, n: usize) -> Option<Word> {
    let (first, last) = (w.first()?, w.last()?);
    if !first.is_positive() {
        return None;
    }
    let positive =
        |avoid: Option<Letter>| (1..=n as u32).map(Letter::pos).find(|&c| Some(c) != avoid);
    let odd = w.len() % 2 == 1;
    match (odd, last.is_positive()) {
        (true, true) => Some(Word::new(vec![positive(Some(first))?])),
        (true, false) => Some(Word::new(vec![positive(None)?.inverse()])),
        (false, false) => Some(Word::empty()),
        (false, true) => {
            let second = w.letters()[1];
            Some(Word::new(vec![first, positive(Some(second))?]))
        }
    }
}

struct Splitter<'a> {
    t: &'a WordTable,
    letters: Vec<Letter>,
}

type State = (usize, Option<Letter>);
/// Cost, predecessor state and the factors of the last piece.
type Entry = (usize, State, Vec<i64>);

impl Splitter<'_> {
    /// Fewest-factor split of a reduced word into pieces, adjacent pieces
    /// optionally joined through an inserted `x x^-1`.
    fn split(&self, z: &[Letter]) -> Option<Vec<i64>> {
        if z.is_empty() {
            return Some(Vec::new());
        }
        let len = z.len();
        let k = self.t.block_length();
        let max_piece = 2 * k;
        let slots = self.letters.len() + 1;
        let slot = |j: Option<Letter>| match j {
            None => 0,
            Some(l) => 1 + self.letters.iter().position(|&x| x == l).unwrap(),
        };
        // best[pos][joiner]
        let mut best: Vec<Vec<Option<Entry>>> = vec![vec![None; slots]; len + 1];
        best[0][0] = Some((0, (0, None), Vec::new()));
        for pos in 0..len {
            for js in 0..slots {
                let Some((cost, _, _)) = best[pos][js].clone() else {
                    continue;
                };
                let left = if js == 0 {
                    None
                } else {
                    Some(self.letters[js - 1])
                };
                for end in pos + 1..=len.min(pos + max_piece) {
                    let rights: Vec<Option<Letter>> = if end == len {
                        vec![None]
                    } else {
                        std::iter::once(None)
                            .chain(self.letters.iter().copied().map(Some))
                            .collect()
                    };
                    for right in rights {
                        let Some(piece) = joined_piece(left, &z[pos..end], right) else {
                            continue;
                        };
                        let Some(factors) = self.piece_factors(&piece) else {
                            continue;
                        };
                        let c = cost + factors.len();
                        let cell = &mut best[end][slot(right)];
                        if cell.as_ref().is_none_or(|(old, _, _)| c < *old) {
                            *cell = Some((c, (pos, left), factors));
                        }
                    }
                }
            }
        }
        let mut out = Vec::new();
        let mut state: State = (len, None);
        while state.0 > 0 {
            let (_, prev, factors) = best[state.0][slot(state.1)].clone()?;
            out.push(factors);
            state = prev;
        }
        out.reverse();
        Some(out.concat())
    }

    fn piece_factors(&self, q: &[Letter]) -> Option<Vec<i64>> {
        let k = self.t.block_length();
        let word = Word::new(q.to_vec());
        if q.len() == k {
            if let Some(i) = self.t.index_of(&word) {
                return Some(vec![i as i64]);
            }
            if let Some(i) = self.t.index_of(&word.inverse()) {
                return Some(vec![-(i as i64)]);
            }
        }
        if !q.len().is_multiple_of(2) || q.len() < 2 {
            return None;
        }
        let r = q.len() / 2;
        if r > k {
            return None;
        }
        let (first, last) = (q[0], q[q.len() - 1]);
        let (x, y, sign) = match (first.is_positive(), last.is_positive()) {
            // q = X Y^-1 with X = q1..qr s, Y = q2r^-1..q(r+1)^-1 s
            (true, false) => {
                let s = self.padding(k - r, &[q[r - 1].inverse(), q[r]])?;
                let x: Vec<Letter> = q[..r].iter().copied().chain(s.iter().copied()).collect();
                let y: Vec<Letter> = q[r..]
                    .iter()
                    .rev()
                    .map(|l| l.inverse())
                    .chain(s.iter().copied())
                    .collect();
                (x, y, 1)
            }
            // q = X^-1 Y with X = s qr^-1..q1^-1, Y = s q(r+1)..q2r
            (false, true) => {
                let s = self.padding_rev(k - r, &[q[r - 1], q[r].inverse()])?;
                let x: Vec<Letter> = s
                    .iter()
                    .copied()
                    .chain(q[..r].iter().rev().map(|l| l.inverse()))
                    .collect();
                let y: Vec<Letter> = s.iter().copied().chain(q[r..].iter().copied()).collect();
                (x, y, -1)
            }
            _ => return None,
        };
        let xi = self.t.index_of(&Word::new(x))? as i64;
        let yi = self.t.index_of(&Word::new(y))? as i64;
        Some(vec![sign * xi, -sign * yi])
    }

    /// Lexicographically first reduced `s` of length `len` with `s_1` not
    /// in `first_avoid` and a positive last letter.
    fn padding(&self, len: usize, first_avoid: &[Letter]) -> Option<Vec<Letter>> {
        let mut s = Vec::with_capacity(len);
        self.pad_rec(
            len,
            &mut s,
            &|i, l: Letter| i > 0 || !first_avoid.contains(&l),
            &|l: Letter| l.is_positive(),
        )
        .then_some(s)
    }

    /// Lexicographically first reduced `s` of length `len` with a positive
    /// first letter and last letter not in `last_avoid`.
    fn padding_rev(&self, len: usize, last_avoid: &[Letter]) -> Option<Vec<Letter>> {
        let mut s = Vec::with_capacity(len);
        self.pad_rec(
            len,
            &mut s,
            &|i, l: Letter| i > 0 || l.is_positive(),
            &|l: Letter| !last_avoid.contains(&l),
        )
        .then_some(s)
    }

    fn pad_rec(
        &self,
        len: usize,
        s: &mut Vec<Letter>,
        ok_at: &dyn Fn(usize, Letter) -> bool,
        ok_last: &dyn Fn(Letter) -> bool,
    ) -> bool {
        if s.len() == len {
            return true;
        }
        for &l in &self.letters {
            if !ok_at(s.len(), l) || s.last().is_some_and(|&p| p == l.inverse()) {
                continue;
            }
            if s.len() + 1 == len && !ok_last(l) {
                continue;
            }
            s.push(l);
            if self.pad_rec(len, s, ok_at, ok_last) {
                return true;
            }
            s.pop();
        }
        false
    }
}

/// `left^-1 seg right`, if reduced.
fn joined_piece(
    left: Option<Letter>,
    seg: &[Letter],
    right: Option<Letter>,
) -> Option<Vec<Letter>> {
    let mut q = Vec::with_capacity(seg.len() + 2);
    if let Some(j) = left {
        if seg[0] == j {
            return None;
        }
        q.push(j.inverse());
    }
    q.extend_from_slice(seg);
    if let Some(j) = right {
        if *seg.last().unwrap() == j.inverse() {
            return None;
        }
        q.push(j);
    }
    Some(q)
}

/// Gromov relators drawn uniformly from `W'_l`, i.e. as uniform triples of
/// table words; `floor(count_scale * (2m-1)^(3d))` of them with `m = |W_k|`.
pub fn sample_gromov_restricted<R: Rng + ?Sized>(
    n: usize,
    l: usize,
    d: f64,
    count_scale: f64,
    rng: &mut R,
) -> Result<Presentation> {
    let t = build_word_table(n, l)?;
    sample_gromov_restricted_with(&t, d, count_scale, rng)
}

pub fn restricted_count(m: usize, d: f64, count_scale: f64) -> Result<usize> {
    if !(d > 0.0 && d < 1.0) {
        return Err(invalid("d", format!("density must lie in (0,1), got {d}")));
    }
    if !(count_scale > 0.0 && count_scale.is_finite()) {
        return Err(invalid("count-scale", "must be positive"));
    }
    let x = count_scale * ((2 * m) as f64 - 1.0).powf(3.0 * d);
    let nudged = x + 1e-9 * x.max(1.0);
    if !nudged.is_finite() || nudged > DEFAULT_COUNT_CAP as f64 {
        return Err(Error::CountOverflow {
            count: x,
            cap: DEFAULT_COUNT_CAP,
        });
    }
    Ok(nudged.floor() as usize)
}

pub fn sample_gromov_restricted_with<R: Rng + ?Sized>(
    t: &WordTable,
    d: f64,
    count_scale: f64,
    rng: &mut R,
) -> Result<Presentation> {
    let count = restricted_count(t.len(), d, count_scale)?;
    let relators = (0..count)
        .map(|_| {
            let mut letters = Vec::with_capacity(t.relator_length());
            for _ in 0..3 {
                letters.extend_from_slice(t.word(rng.gen_range(1..=t.len())).letters());
            }
            Word::new(letters)
        })
        .collect();
    Ok(Presentation::new(t.generator_count(), relators)?.with_tag(ModelTag::GromovRestricted))
}
