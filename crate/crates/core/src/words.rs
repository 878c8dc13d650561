//! Balanced words, Sturmian pairs and two-letter substitutions.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::seq::{EPSeq, Word};

/// A rational `p/q` in `(0, 1)` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ratio {
    p: u32,
    q: u32,
}

impl Ratio {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p == 0 || p >= q || p.gcd(&q) != 1 {
            return Err(Error::InvalidRatio);
        }
        Ok(Ratio { p, q })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    pub fn q(self) -> u32 {
        self.q
    }

    /// Every ratio with denominator at most `max_q`, ordered by `q` then `p`.
    pub fn all_up_to(max_q: u32) -> impl Iterator<Item = Ratio> {
        (2..=max_q).flat_map(|q| (1..q).filter_map(move |p| Ratio::new(p, q).ok()))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Ratio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason| Error::Parse {
            token: s.into(),
            reason,
        };
        let (p, q) = s.trim().split_once('/').ok_or_else(|| err("expected p/q"))?;
        let p: u32 = p.trim().parse().map_err(|_| err("expected p/q"))?;
        let q: u32 = q.trim().parse().map_err(|_| err("expected p/q"))?;
        Ratio::new(p, q).map_err(|_| err("need 0 < p < q with gcd(p, q) = 1"))
    }
}

/// Every length-`n` factor of `w²` with `2 ≤ n ≤ ℓ(w)` has a 1-count within one
/// of the others.
pub fn is_cyclically_balanced(w: &Word) -> bool {
    let l = w.len();
    let sq: Vec<u8> = w.bits().iter().chain(w.bits()).copied().collect();
    (2..=l).all(|n| {
        let mut count: usize = sq[..n].iter().map(|&b| b as usize).sum();
        let (mut lo, mut hi) = (count, count);
        for i in n..sq.len() {
            count = count + sq[i] as usize - sq[i - n] as usize;
            lo = lo.min(count);
            hi = hi.max(count);
        }
        hi - lo <= 1
    })
}

/// The largest rotation starting with 0 and the smallest starting with 1.
pub fn cyclic_extremes(w: &Word) -> Result<(Word, Word)> {
    let zero_max = w.rotations().filter(|r| r.first() == Some(0)).max();
    let one_min = w.rotations().filter(|r| r.first() == Some(1)).min();
    match (zero_max, one_min) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::NoSuchRotation),
    }
}

/// All cyclically balanced words of length `q` with `p` ones, sorted.
/// Exhaustive over all `2^q` words.
pub fn enumerate_balanced(r: Ratio) -> Vec<Word> {
    let q = r.q as usize;
    (0u64..1 << q)
        .filter(|m| m.count_ones() == r.p)
        .map(|m| Word::from_vec((0..q).rev().map(|i| ((m >> i) & 1) as u8).collect()))
        .filter(is_cyclically_balanced)
        .collect()
}

/// The lower Christoffel word of slope `p/q`.
pub fn christoffel(r: Ratio) -> Word {
    let (p, q) = (r.p as u64, r.q as u64);
    Word::from_vec(
        (0..q)
            .map(|i| ((i + 1) * p / q - i * p / q) as u8)
            .collect(),
    )
}

/// `(ξ_r, ζ_r)`: the extremal rotations of the Christoffel word.
pub fn sturmian_pair(r: Ratio) -> (Word, Word) {
    cyclic_extremes(&christoffel(r)).expect("Christoffel words use both symbols")
}

/// The substitution `0 ↦ image0`, `1 ↦ image1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Substitution {
    image0: Word,
    image1: Word,
}

impl Substitution {
    pub fn new(image0: Word, image1: Word) -> Result<Self> {
        if image0.first() != Some(0) || image1.first() != Some(1) {
            return Err(Error::InvalidSubstitution);
        }
        Ok(Substitution { image0, image1 })
    }

    pub fn sturmian(r: Ratio) -> Self {
        let (xi, zeta) = sturmian_pair(r);
        Substitution {
            image0: xi,
            image1: zeta,
        }
    }

    pub fn image0(&self) -> &Word {
        &self.image0
    }

    pub fn image1(&self) -> &Word {
        &self.image1
    }

    fn image(&self, b: u8) -> &Word {
        if b == 0 {
            &self.image0
        } else {
            &self.image1
        }
    }

    pub fn apply_word(&self, w: &Word) -> Word {
        Word::from_vec(
            w.bits()
                .iter()
                .flat_map(|&b| self.image(b).bits().iter().copied())
                .collect(),
        )
    }

    pub fn apply(&self, x: &EPSeq) -> EPSeq {
        EPSeq::canonical(
            self.apply_word(x.pre()).into_bits(),
            self.apply_word(x.per()).into_bits(),
        )
    }

    /// Parses `x` as a concatenation of images. The parse is forced because the
    /// images start with different symbols; it is tracked until the position in
    /// `x` (reduced modulo its period) repeats at a block boundary.
    pub fn decode(&self, x: &EPSeq) -> Result<EPSeq> {
        let p = x.pre().len();
        let l = x.per().len();
        let reduce = |i: usize| if i < p { i } else { p + (i - p) % l };
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        let mut blocks: Vec<u8> = Vec::new();
        let mut pos = 0usize;
        loop {
            let state = reduce(pos);
            if let Some(&start) = seen.get(&state) {
                let per = blocks.split_off(start);
                return Ok(EPSeq::canonical(blocks, per));
            }
            seen.insert(state, blocks.len());
            let b = x.at(pos);
            let img = self.image(b);
            for (k, &c) in img.bits().iter().enumerate() {
                if x.at(pos + k) != c {
                    return Err(Error::DecodeFailure { position: pos + k });
                }
            }
            blocks.push(b);
            pos += img.len();
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0->{},1->{}", self.image0, self.image1)
    }
}

impl FromStr for Substitution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason| Error::Parse {
            token: s.into(),
            reason,
        };
        let (a, b) = s.split_once(',').ok_or_else(|| err("expected 0->bits,1->bits"))?;
        let a = a.trim().strip_prefix("0->").ok_or_else(|| err("expected 0->bits"))?;
        let b = b.trim().strip_prefix("1->").ok_or_else(|| err("expected 1->bits"))?;
        Substitution::new(a.parse()?, b.parse()?).map_err(|_| err("images must start with 0 and 1"))
    }
}

/// Free function form of [`Substitution::apply_word`].
pub fn substitute_word(s: &Substitution, w: &Word) -> Word {
    s.apply_word(w)
}

/// Free function form of [`Substitution::apply`].
pub fn substitute(s: &Substitution, x: &EPSeq) -> EPSeq {
    s.apply(x)
}

/// Free function form of [`Substitution::decode`].
pub fn decode(s: &Substitution, x: &EPSeq) -> Result<EPSeq> {
    s.decode(x)
}
