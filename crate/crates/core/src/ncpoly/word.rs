use std::cmp::Ordering;
use std::fmt;

/// A letter of the two-letter alphabet. The derive order gives `X < Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub const ALL: [Letter; 2] = [Letter::X, Letter::Y];

    pub fn other(self) -> Letter {
        match self {
            Letter::X => Letter::Y,
            Letter::Y => Letter::X,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn lower(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::Y => 'y',
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::X => write!(f, "X"),
            Letter::Y => write!(f, "Y"),
        }
    }
}

/// A monomial in the free monoid on {X, Y}. The empty word is the unit.
///
/// Ordered graded-lexicographically: shorter words first, then
/// lexicographically with `X < Y`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// `l^k`.
    pub fn power(l: Letter, k: usize) -> Self {
        Word(vec![l; k])
    }

    /// Parses a string over `{X, Y, x, y}`; other characters are rejected.
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                'X' | 'x' => Some(Letter::X),
                'Y' | 'y' => Some(Letter::Y),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Word)
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

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// True when every letter equals `l` (vacuously true for the empty word).
    pub fn is_pure(&self, l: Letter) -> bool {
        self.0.iter().all(|&c| c == l)
    }

    pub fn count(&self, l: Letter) -> usize {
        self.0.iter().filter(|&&c| c == l).count()
    }

    /// Maximal runs of equal letters, as `(letter, run length)`.
    pub fn block_factorize(&self) -> Vec<(Letter, usize)> {
        let mut out: Vec<(Letter, usize)> = Vec::new();
        for &l in &self.0 {
            match out.last_mut() {
                Some((last, n)) if *last == l => *n += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }

    /// The blocks of [`Word::block_factorize`] as words.
    pub fn blocks(&self) -> Vec<Word> {
        self.block_factorize().into_iter().map(|(l, n)| Word::power(l, n)).collect()
    }

    pub fn block_length(&self) -> usize {
        self.block_factorize().len()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    /// Canonical printer form, e.g. `x^3*y^2*x`; the empty word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .block_factorize()
            .into_iter()
            .map(|(l, n)| if n == 1 { l.lower().to_string() } else { format!("{}^{}", l.lower(), n) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn block_factorization_examples() {
        assert_eq!(w("XXXYYX").block_factorize(), vec![(Letter::X, 3), (Letter::Y, 2), (Letter::X, 1)]);
        assert_eq!(w("XXXYYX").block_length(), 3);
        assert_eq!(Word::empty().block_factorize(), vec![]);
        assert_eq!(Word::empty().block_length(), 0);
        assert_eq!(w("YYYYY").block_factorize(), vec![(Letter::Y, 5)]);
    }

    #[test]
    fn graded_lex_order() {
        let mut v = vec![w("Y"), w("XX"), w(""), w("X"), w("YX"), w("XY")];
        v.sort();
        assert_eq!(v, vec![w(""), w("X"), w("Y"), w("XX"), w("XY"), w("YX")]);
    }

    #[test]
    fn printing() {
        assert_eq!(w("XXXYYX").to_string(), "x^3*y^2*x");
        assert_eq!(Word::empty().to_string(), "1");
        assert_eq!(format!("{:?}", w("XYX")), "XYX");
    }
}
