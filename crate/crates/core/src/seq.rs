//! Finite words, eventually periodic sequences and exact rationals in `[0, 1]`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Extremal, Result};

/// A finite binary word. The derived order is lexicographic with a proper
/// prefix ranked first, which is only meaningful for words of equal length.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Parse {
                token: bits.iter().map(|b| b.to_string()).collect(),
                reason: "symbols must be 0 or 1",
            });
        }
        Ok(Word(bits))
    }

    pub(crate) fn from_vec(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Word(bits)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.0
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn first(&self) -> Option<u8> {
        self.0.first().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    pub fn mirror(&self) -> Word {
        Word(self.0.iter().map(|b| 1 - b).collect())
    }

    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        Word(v)
    }

    pub fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.len()).map(move |k| self.rotate(k))
    }

    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    /// Shortest `u` with `self = u^k`.
    pub fn primitive_root(&self) -> Word {
        Word(primitive_root(&self.0).to_vec())
    }
}

fn primitive_root(v: &[u8]) -> &[u8] {
    let n = v.len();
    for d in 1..n {
        if n.is_multiple_of(d) && (d..n).all(|i| v[i] == v[i - d]) {
            return &v[..d];
        }
    }
    v
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_bits(s, s).map(Word)
    }
}

fn parse_bits(part: &str, token: &str) -> Result<Vec<u8>> {
    part.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Parse {
                token: token.to_string(),
                reason: "expected bits 0/1",
            }),
        })
        .collect()
}

/// An eventually periodic binary sequence `pre (per)^∞` in canonical form:
/// the period is primitive and the preperiod is as short as possible.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EPSeq {
    pre: Word,
    per: Word,
}

impl EPSeq {
    pub fn new(pre: Word, per: Word) -> Result<Self> {
        if per.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(Self::canonical(pre.0, per.0))
    }

    pub fn periodic(per: Word) -> Result<Self> {
        Self::new(Word::empty(), per)
    }

    /// `bit^∞`.
    pub fn constant(bit: u8) -> Self {
        EPSeq {
            pre: Word::empty(),
            per: Word(alloc::vec![bit & 1]),
        }
    }

    pub(crate) fn canonical(mut pre: Vec<u8>, per: Vec<u8>) -> Self {
        let mut per = primitive_root(&per).to_vec();
        while let (Some(&a), Some(&b)) = (pre.last(), per.last()) {
            if a != b {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        EPSeq {
            pre: Word(pre),
            per: Word(per),
        }
    }

    pub fn pre(&self) -> &Word {
        &self.pre
    }

    pub fn per(&self) -> &Word {
        &self.per
    }

    pub fn is_periodic(&self) -> bool {
        self.pre.is_empty()
    }

    /// Number of distinct shifts, `|pre| + |per|`.
    pub fn orbit_len(&self) -> usize {
        self.pre.len() + self.per.len()
    }

    /// Symbol at 0-based index `i`.
    pub fn at(&self, i: usize) -> u8 {
        let p = self.pre.len();
        if i < p {
            self.pre.0[i]
        } else {
            self.per.0[(i - p) % self.per.len()]
        }
    }

    pub fn first(&self) -> u8 {
        self.at(0)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n).map(|i| self.at(i)).collect())
    }

    pub fn starts_with(&self, w: &Word) -> bool {
        w.0.iter().enumerate().all(|(i, &b)| self.at(i) == b)
    }

    /// `w` followed by this sequence.
    pub fn prepend(&self, w: &Word) -> EPSeq {
        let mut pre = w.0.clone();
        pre.extend_from_slice(&self.pre.0);
        Self::canonical(pre, self.per.0.clone())
    }

    pub fn shift(&self, n: usize) -> EPSeq {
        let p = self.pre.len();
        if n <= p {
            EPSeq {
                pre: Word(self.pre.0[n..].to_vec()),
                per: self.per.clone(),
            }
        } else {
            EPSeq {
                pre: Word::empty(),
                per: self.per.rotate((n - p) % self.per.len()),
            }
        }
    }

    pub fn mirror(&self) -> EPSeq {
        EPSeq {
            pre: self.pre.mirror(),
            per: self.per.mirror(),
        }
    }

    pub fn lex_cmp(&self, other: &EPSeq) -> Ordering {
        cmp_shifted(self, 0, other, 0)
    }
}

/// Compares `σ^i(x)` with `σ^j(y)` without materialising the shifts.
pub(crate) fn cmp_shifted(x: &EPSeq, i: usize, y: &EPSeq, j: usize) -> Ordering {
    let tx = x.pre.len().saturating_sub(i);
    let ty = y.pre.len().saturating_sub(j);
    let bound = tx.max(ty) + x.per.len().lcm(&y.per.len());
    for k in 0..bound {
        match x.at(i + k).cmp(&y.at(j + k)) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

impl PartialOrd for EPSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EPSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(other)
    }
}

impl fmt::Display for EPSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.pre, self.per)
    }
}

impl FromStr for EPSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let err = |reason| Error::Parse {
            token: s.to_string(),
            reason,
        };
        let open = t.find('(').ok_or_else(|| err("expected pre(per)"))?;
        let body = t[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| err("expected closing parenthesis"))?;
        let pre = parse_bits(&t[..open], s)?;
        let per = parse_bits(body, s)?;
        if per.is_empty() {
            return Err(err("period must be non-empty"));
        }
        Ok(Self::canonical(pre, per))
    }
}

/// An exact rational in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::OutOfRange);
        }
        Self::from_big(BigRational::new(num.into(), den))
    }

    pub fn from_big(v: BigRational) -> Result<Self> {
        if v < BigRational::zero() || v > BigRational::one() {
            return Err(Error::OutOfRange);
        }
        Ok(Rat(v))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let err = |reason| Error::Parse {
            token: s.to_string(),
            reason,
        };
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n, d),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err("expected p/q"))?;
        let d: BigInt = d.parse().map_err(|_| err("expected p/q"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        Rat::new(n, d).map_err(|_| err("value outside [0, 1]"))
    }
}

/// Ordering of the two infinite sequences.
pub fn lex_cmp(x: &EPSeq, y: &EPSeq) -> Ordering {
    x.lex_cmp(y)
}

pub fn shift(x: &EPSeq, n: usize) -> EPSeq {
    x.shift(n)
}

pub fn mirror(x: &EPSeq) -> EPSeq {
    x.mirror()
}

/// `2^{-j}` where `j` is the first (1-based) index at which `x` and `y` differ.
pub fn seq_dist(x: &EPSeq, y: &EPSeq) -> Rat {
    if x == y {
        return Rat::zero();
    }
    let mut j = 0;
    while x.at(j) == y.at(j) {
        j += 1;
    }
    Rat(BigRational::new(BigInt::one(), BigInt::one() << (j + 1)))
}

/// Value of `x` read as a binary expansion.
pub fn project(x: &EPSeq) -> Rat {
    let bits_value = |w: &Word| {
        w.0.iter()
            .fold(BigInt::zero(), |acc, &b| (acc << 1) + BigInt::from(b))
    };
    let p = x.pre.len();
    let l = x.per.len();
    let head = BigRational::new(bits_value(&x.pre), BigInt::one() << p);
    let cycle = (BigInt::one() << l) - BigInt::one();
    let tail = BigRational::new(bits_value(&x.per), cycle * (BigInt::one() << p));
    Rat(head + tail)
}

/// Binary expansion of `q` by long division. Dyadic rationals end in `0^∞`,
/// so `1/2` becomes `10^∞`; the value `1` becomes `1^∞`.
pub fn expand(q: &Rat) -> EPSeq {
    let den = q.denom().clone();
    let mut rem = q.numer().clone();
    let mut seen: BTreeMap<BigInt, usize> = BTreeMap::new();
    let mut digits = Vec::new();
    loop {
        if let Some(&start) = seen.get(&rem) {
            let per = digits.split_off(start);
            return EPSeq::canonical(digits, per);
        }
        seen.insert(rem.clone(), digits.len());
        rem <<= 1;
        if rem >= den {
            digits.push(1);
            rem -= &den;
        } else {
            digits.push(0);
        }
    }
}

/// `α₁ = 1` and every shift of `α` is `≼ α`.
pub fn is_parry(alpha: &EPSeq) -> bool {
    alpha.first() == 1 && (1..alpha.orbit_len()).all(|n| cmp_shifted(alpha, n, alpha, 0).is_le())
}

/// Replaces a non-Parry `α` starting with 1 by `(a₁…a_{n-1}0)^∞`, where `n`
/// is the first shift with `σ^n(α) ≽ α`.
pub fn varsigma(alpha: &EPSeq) -> Result<EPSeq> {
    if alpha.first() != 1 {
        return Err(Error::NotApplicable("sequence starts with 0"));
    }
    let n = (1..alpha.orbit_len())
        .find(|&n| cmp_shifted(alpha, n, alpha, 0).is_ge())
        .ok_or(Error::NotApplicable("sequence is already Parry"))?;
    let mut per = alpha.prefix(n - 1).0;
    per.push(0);
    Ok(EPSeq::canonical(Vec::new(), per))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admissibility {
    Admissible,
    Extremal(Extremal),
}

impl Admissibility {
    pub fn is_admissible(self) -> bool {
        self == Admissibility::Admissible
    }
}

pub fn admissible(alpha: &EPSeq, beta: &EPSeq) -> Admissibility {
    if !is_parry(alpha) {
        return Admissibility::Extremal(Extremal::AlphaNotParry);
    }
    if !is_parry(&beta.mirror()) {
        return Admissibility::Extremal(Extremal::MirrorBetaNotParry);
    }
    if (0..alpha.orbit_len()).any(|n| cmp_shifted(alpha, n, beta, 0).is_lt()) {
        return Admissibility::Extremal(Extremal::AlphaShiftBelowBeta);
    }
    if (0..beta.orbit_len()).any(|n| cmp_shifted(beta, n, alpha, 0).is_gt()) {
        return Admissibility::Extremal(Extremal::BetaShiftAboveAlpha);
    }
    Admissibility::Admissible
}

/// `Ok(())` for admissible pairs, `NotAdmissible` otherwise.
pub fn require_admissible(alpha: &EPSeq, beta: &EPSeq) -> Result<()> {
    match admissible(alpha, beta) {
        Admissibility::Admissible => Ok(()),
        Admissibility::Extremal(e) => Err(Error::NotAdmissible(e)),
    }
}

/// Text form of a pair, used in diagnostics.
pub fn pair_string(alpha: &EPSeq, beta: &EPSeq) -> String {
    alloc::format!("({alpha}, {beta})")
}
