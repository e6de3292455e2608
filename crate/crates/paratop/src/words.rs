//! Reduced words and finite-support integer vectors: the abstract free
//! group and free abelian group over a point alphabet.
//!
//! Words are kept reduced at all times; concatenation cancels at the seam
//! only, which suffices when both inputs are reduced. The abelianization
//! sends a word to its signed letter counts and is the canonical
//! homomorphism between the two.
//!
//! Surface grammar, shared with the command line: a word is a
//! whitespace-separated list of atoms `p`, `p^-1`, or `p^k` (integer `k`,
//! expanded into repeated `±1` letters); a vector is a signed sum of terms
//! `p` or `k*p`, e.g. `b - a` or `2*b - 2*a`, with `0` as the zero vector.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::space::Point;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown point `{0}`")]
    UnknownPoint(Point),
}

/// Letter exponent.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

/// A reduced word over the point alphabet; the empty word is the identity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct FreeWord {
    letters: Vec<(Point, Sign)>,
}

impl FreeWord {
    pub fn identity() -> FreeWord {
        FreeWord::default()
    }

    pub fn letter(point: Point, sign: Sign) -> FreeWord {
        FreeWord {
            letters: vec![(point, sign)],
        }
    }

    /// Builds a word from raw letters, cancelling adjacent inverse pairs.
    pub fn from_letters<I: IntoIterator<Item = (Point, Sign)>>(letters: I) -> FreeWord {
        let mut stack: Vec<(Point, Sign)> = Vec::new();
        for (p, s) in letters {
            match stack.last() {
                Some((q, t)) if *q == p && *t == s.flip() => {
                    stack.pop();
                }
                _ => stack.push((p, s)),
            }
        }
        FreeWord { letters: stack }
    }

    pub fn letters(&self) -> &[(Point, Sign)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Reduced product `self · other`.
    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut stack = self.letters.clone();
        for (p, s) in &other.letters {
            match stack.last() {
                Some((q, t)) if q == p && *t == s.flip() => {
                    stack.pop();
                }
                _ => stack.push((p.clone(), *s)),
            }
        }
        FreeWord { letters: stack }
    }

    pub fn invert(&self) -> FreeWord {
        FreeWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|(p, s)| (p.clone(), s.flip()))
                .collect(),
        }
    }

    /// `self · w · self^-1`, reduced.
    pub fn conjugate(&self, w: &FreeWord) -> FreeWord {
        self.concat(w).concat(&self.invert())
    }

    /// Signed letter counts; a homomorphism onto the free abelian group.
    pub fn abelianize(&self) -> AbelianVector {
        let mut coeffs: BTreeMap<Point, i64> = BTreeMap::new();
        for (p, s) in &self.letters {
            *coeffs.entry(p.clone()).or_insert(0) += s.as_i64();
        }
        coeffs.retain(|_, c| *c != 0);
        AbelianVector { coeffs }
    }

    /// Sum of letter exponents; the word lies in the class `Z_k` for
    /// `k` equal to this value.
    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|(_, s)| s.as_i64()).sum()
    }

    /// Distinct base points in order of first occurrence.
    pub fn distinct_points(&self) -> Vec<Point> {
        let mut seen = Vec::new();
        for (p, _) in &self.letters {
            if !seen.contains(p) {
                seen.push(p.clone());
            }
        }
        seen
    }

    /// Parses the word grammar. Unknown-point checking happens where an
    /// ambient space is available.
    pub fn parse(text: &str) -> Result<FreeWord, ParseError> {
        let mut letters = Vec::new();
        let mut offset = 0;
        for chunk in text.split_whitespace() {
            let pos = offset_of(text, chunk, &mut offset);
            let (name, exp) = match chunk.split_once('^') {
                None => (chunk, 1i64),
                Some((name, exp_text)) => {
                    let exp = exp_text.parse::<i64>().map_err(|_| ParseError::Syntax {
                        pos,
                        msg: format!("invalid exponent `{exp_text}`"),
                    })?;
                    (name, exp)
                }
            };
            let point: Point = name.parse().map_err(|_| ParseError::Syntax {
                pos,
                msg: format!("invalid point name `{name}`"),
            })?;
            let sign = if exp >= 0 { Sign::Pos } else { Sign::Neg };
            for _ in 0..exp.unsigned_abs() {
                letters.push((point.clone(), sign));
            }
        }
        Ok(FreeWord::from_letters(letters))
    }
}

impl fmt::Display for FreeWord {
    /// Atoms with runs compressed: `a a a b^-1` prints as `a^3 b^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let (p, s) = &self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == (p.clone(), *s) {
                run += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            match (run, s) {
                (1, Sign::Pos) => write!(f, "{p}")?,
                (k, Sign::Pos) => write!(f, "{p}^{k}")?,
                (k, Sign::Neg) => write!(f, "{p}^-{k}")?,
            }
            i += run;
        }
        Ok(())
    }
}

impl Serialize for FreeWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FreeWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<FreeWord, D::Error> {
        let text = String::deserialize(deserializer)?;
        FreeWord::parse(&text).map_err(D::Error::custom)
    }
}

/// A finite-support integer vector over points; zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct AbelianVector {
    coeffs: BTreeMap<Point, i64>,
}

impl AbelianVector {
    pub fn zero() -> AbelianVector {
        AbelianVector::default()
    }

    pub fn unit(p: Point) -> AbelianVector {
        AbelianVector {
            coeffs: BTreeMap::from([(p, 1)]),
        }
    }

    /// `e_to − e_from`.
    pub fn difference(to: Point, from: Point) -> AbelianVector {
        AbelianVector::unit(to).sub(&AbelianVector::unit(from))
    }

    pub fn from_coeffs<I: IntoIterator<Item = (Point, i64)>>(coeffs: I) -> AbelianVector {
        let mut map: BTreeMap<Point, i64> = BTreeMap::new();
        for (p, c) in coeffs {
            *map.entry(p).or_insert(0) += c;
        }
        map.retain(|_, c| *c != 0);
        AbelianVector { coeffs: map }
    }

    pub fn coeff(&self, p: &Point) -> i64 {
        self.coeffs.get(p).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.coeffs.keys()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Point, i64)> {
        self.coeffs.iter().map(|(p, &c)| (p, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &AbelianVector) -> AbelianVector {
        AbelianVector::from_coeffs(
            self.coeffs
                .iter()
                .chain(other.coeffs.iter())
                .map(|(p, &c)| (p.clone(), c)),
        )
    }

    pub fn neg(&self) -> AbelianVector {
        AbelianVector {
            coeffs: self.coeffs.iter().map(|(p, &c)| (p.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &AbelianVector) -> AbelianVector {
        self.add(&other.neg())
    }

    /// Scale by a nonnegative count.
    pub fn scaled(&self, k: i64) -> AbelianVector {
        AbelianVector::from_coeffs(self.coeffs.iter().map(|(p, &c)| (p.clone(), c * k)))
    }

    pub fn l1_norm(&self) -> u64 {
        self.coeffs.values().map(|c| c.unsigned_abs()).sum()
    }

    /// Sum of coefficients; the vector lies in the class `Z_k` for `k`
    /// equal to this value.
    pub fn coeff_sum(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// Parses the signed-term grammar: `b - a`, `2*b - 2*a`, `0`.
    pub fn parse(text: &str) -> Result<AbelianVector, ParseError> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "0" {
            return Ok(AbelianVector::zero());
        }
        let bytes: Vec<char> = trimmed.chars().collect();
        let mut i = 0usize;
        let mut terms: Vec<(Point, i64)> = Vec::new();
        let mut expect_term = true;
        let mut sign = 1i64;
        while i < bytes.len() {
            if bytes[i].is_whitespace() {
                i += 1;
                continue;
            }
            if !expect_term {
                sign = match bytes[i] {
                    '+' => 1,
                    '-' => -1,
                    c => {
                        return Err(ParseError::Syntax {
                            pos: i,
                            msg: format!("expected `+` or `-`, found `{c}`"),
                        })
                    }
                };
                i += 1;
                expect_term = true;
                continue;
            }
            if bytes[i] == '+' || bytes[i] == '-' {
                // Leading sign on the first term.
                sign = if bytes[i] == '-' { -sign } else { sign };
                i += 1;
                continue;
            }
            let start = i;
            while i < bytes.len()
                && !bytes[i].is_whitespace()
                && !matches!(bytes[i], '+' | '-' | '*')
            {
                i += 1;
            }
            let token: String = bytes[start..i].iter().collect();
            if token.is_empty() {
                return Err(ParseError::Syntax {
                    pos: start,
                    msg: "expected a term".into(),
                });
            }
            // Skip whitespace before a possible `*`.
            let mut j = i;
            while j < bytes.len() && bytes[j].is_whitespace() {
                j += 1;
            }
            if j < bytes.len() && bytes[j] == '*' {
                let coeff = token.parse::<i64>().map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: format!("invalid coefficient `{token}`"),
                })?;
                i = j + 1;
                while i < bytes.len() && bytes[i].is_whitespace() {
                    i += 1;
                }
                let name_start = i;
                while i < bytes.len()
                    && !bytes[i].is_whitespace()
                    && !matches!(bytes[i], '+' | '-' | '*')
                {
                    i += 1;
                }
                let name: String = bytes[name_start..i].iter().collect();
                let point: Point = name.parse().map_err(|_| ParseError::Syntax {
                    pos: name_start,
                    msg: format!("invalid point name `{name}`"),
                })?;
                terms.push((point, sign * coeff));
            } else {
                let point: Point = token.parse().map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: format!("invalid point name `{token}`"),
                })?;
                terms.push((point, sign));
            }
            sign = 1;
            expect_term = false;
        }
        if expect_term {
            return Err(ParseError::Syntax {
                pos: bytes.len(),
                msg: "dangling sign".into(),
            });
        }
        Ok(AbelianVector::from_coeffs(terms))
    }
}

impl fmt::Display for AbelianVector {
    /// Positive terms first, then negative, in point order: `b - a`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        let ordered = self
            .coeffs
            .iter()
            .filter(|(_, &c)| c > 0)
            .chain(self.coeffs.iter().filter(|(_, &c)| c < 0));
        for (p, &c) in ordered {
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
                first = false;
            } else if c > 0 {
                f.write_str(" + ")?;
            } else {
                f.write_str(" - ")?;
            }
            if c.abs() == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{}*{}", c.abs(), p)?;
            }
        }
        Ok(())
    }
}

impl Serialize for AbelianVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_map(self.coeffs.iter().map(|(p, c)| (p.to_string(), *c)))
    }
}

impl<'de> Deserialize<'de> for AbelianVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<AbelianVector, D::Error> {
        let map = BTreeMap::<String, i64>::deserialize(deserializer)?;
        let coeffs = map
            .into_iter()
            .map(|(name, c)| Ok((name.parse::<Point>().map_err(D::Error::custom)?, c)))
            .collect::<Result<Vec<_>, D::Error>>()?;
        Ok(AbelianVector::from_coeffs(coeffs))
    }
}

fn offset_of(text: &str, chunk: &str, cursor: &mut usize) -> usize {
    match text[*cursor..].find(chunk) {
        Some(rel) => {
            let pos = *cursor + rel;
            *cursor = pos + chunk.len();
            pos
        }
        None => *cursor,
    }
}
