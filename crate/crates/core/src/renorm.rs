//! Renormalisation of kneading pairs: associated pairs, renormalisation boxes,
//! the Sturmian tower, the Hofbauer family, holes and the classifier.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::entropy::{beta_of, entropy_of_series, EntropyResult, KneadingSeries};
use crate::error::{Error, Extremal, Result};
use crate::seq::{admissible, expand, is_parry, require_admissible, varsigma, Admissibility, EPSeq, Rat, Word};
use crate::sft::{ie_verdict, IeVerdict};
use crate::words::{cyclic_extremes, sturmian_pair, Ratio, Substitution};

/// Two words `(ω, ν)` that generate a renormalisation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AssocPair {
    omega: Word,
    nu: Word,
}

impl AssocPair {
    /// Checks that both words are primitive, `ω = 0-max(ω)`, `ν = 1-min(ν)`,
    /// `(0-max ν)^∞ ≺ ω^∞`, `ν^∞ ≺ (1-min ω)^∞` and `ℓ(ων) ≥ 3`.
    pub fn new(omega: Word, nu: Word) -> Result<Self> {
        if omega.len() + nu.len() < 3 {
            return Err(Error::InvalidPair("combined length below 3"));
        }
        if omega.primitive_root().len() != omega.len() || nu.primitive_root().len() != nu.len() {
            return Err(Error::InvalidPair("word is a proper power"));
        }
        let (omega_max, omega_min) = cyclic_extremes(&omega).map_err(|_| Error::InvalidPair("omega is constant"))?;
        let (nu_max, nu_min) = cyclic_extremes(&nu).map_err(|_| Error::InvalidPair("nu is constant"))?;
        if omega_max != omega {
            return Err(Error::InvalidPair("omega is not its own largest 0-rotation"));
        }
        if nu_min != nu {
            return Err(Error::InvalidPair("nu is not its own smallest 1-rotation"));
        }
        if periodic(&nu_max) >= periodic(&omega) {
            return Err(Error::InvalidPair("rotation of nu reaches omega"));
        }
        if periodic(&nu) >= periodic(&omega_min) {
            return Err(Error::InvalidPair("rotation of omega reaches nu"));
        }
        Ok(AssocPair { omega, nu })
    }

    /// `(ξ_r, ζ_r)`. These sit on the boundary of the strict conditions.
    pub fn sturmian(r: Ratio) -> Self {
        let (omega, nu) = sturmian_pair(r);
        AssocPair { omega, nu }
    }

    /// Strict pairs, or `(ξ_r, ζ_r)` for some ratio `r`.
    pub fn strict_or_sturmian(omega: Word, nu: Word) -> Result<Self> {
        let loose = AssocPair {
            omega: omega.clone(),
            nu: nu.clone(),
        };
        match loose.sturmian_ratio() {
            Some(_) => Ok(loose),
            None => AssocPair::new(omega, nu),
        }
    }

    pub fn omega(&self) -> &Word {
        &self.omega
    }

    pub fn nu(&self) -> &Word {
        &self.nu
    }

    pub fn substitution(&self) -> Substitution {
        Substitution::new(self.omega.clone(), self.nu.clone()).expect("pair words start with 0 and 1")
    }

    /// `ℓ(ων) = 3`.
    pub fn is_trivial(&self) -> bool {
        self.omega.len() + self.nu.len() == 3
    }

    /// The Sturmian ratio, when `(ω, ν) = (ξ_r, ζ_r)`.
    pub fn sturmian_ratio(&self) -> Option<Ratio> {
        let q = self.omega.len();
        if self.nu.len() != q || self.omega.ones() != self.nu.ones() {
            return None;
        }
        let r = Ratio::new(self.omega.ones() as u32, q as u32).ok()?;
        (sturmian_pair(r) == (self.omega.clone(), self.nu.clone())).then_some(r)
    }
}

impl fmt::Display for AssocPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.omega, self.nu)
    }
}

fn periodic(w: &Word) -> EPSeq {
    EPSeq::periodic(w.clone()).expect("non-empty word")
}

/// A maximal block of one symbol; `len = None` for an infinite tail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Run {
    pub symbol: u8,
    pub len: Option<usize>,
}

/// Run-length form of an eventually periodic sequence: `pre` once, then
/// `per` repeated (empty `per` when the sequence ends in an infinite run).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Runs {
    pub pre: Vec<Run>,
    pub per: Vec<Run>,
}

fn runs_of(bits: &[u8]) -> Vec<Run> {
    let mut out: Vec<Run> = Vec::new();
    for &b in bits {
        match out.last_mut() {
            Some(Run { symbol, len: Some(n) }) if *symbol == b => *n += 1,
            _ => out.push(Run { symbol: b, len: Some(1) }),
        }
    }
    out
}

pub fn run_lengths(x: &EPSeq) -> Runs {
    let p = x.pre().len();
    if x.per().is_constant() {
        let c = x.per().bits()[0];
        let mut pre = runs_of(x.pre().bits());
        match pre.last_mut() {
            Some(last) if last.symbol == c => last.len = None,
            _ => pre.push(Run { symbol: c, len: None }),
        }
        return Runs { pre, per: Vec::new() };
    }
    // Align the period to start at a symbol change.
    let start = (p.max(1)..).find(|&i| x.at(i) != x.at(i - 1)).expect("period is not constant");
    let l = x.per().len();
    Runs {
        pre: runs_of(x.prefix(start).bits()),
        per: runs_of(&(start..start + l).map(|i| x.at(i)).collect::<Vec<_>>()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenormKind {
    Associated,
    Sturmian(Ratio),
}

/// A renormalisation `0α = ρ(0 1 …)`, `1β = ρ(1 0 …)` by `ρ = ρ_{ω,ν}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Renormalisation {
    pub pair: AssocPair,
    pub kind: RenormKind,
    pub trivial: bool,
    /// Block sequence of `0α` over `{0 = ω, 1 = ν}`.
    pub alpha_blocks: EPSeq,
    /// Block sequence of `1β`.
    pub beta_blocks: EPSeq,
}

impl Renormalisation {
    /// Exponents of `0α = ω ν^{n₁} ω^{n₁'} …` as runs of the block sequence.
    pub fn alpha_exponents(&self) -> Runs {
        run_lengths(&self.alpha_blocks)
    }

    /// Exponents of `1β = ν ω^{m₁} ν^{m₁'} …`.
    pub fn beta_exponents(&self) -> Runs {
        run_lengths(&self.beta_blocks)
    }
}

fn candidate_kind(omega: &Word, nu: &Word) -> Option<(AssocPair, RenormKind)> {
    if omega.first() != Some(0) || nu.first() != Some(1) || omega.len() + nu.len() < 3 {
        return None;
    }
    let loose = AssocPair {
        omega: omega.clone(),
        nu: nu.clone(),
    };
    if let Some(r) = loose.sturmian_ratio() {
        return Some((loose, RenormKind::Sturmian(r)));
    }
    AssocPair::new(omega.clone(), nu.clone())
        .ok()
        .map(|p| (p, RenormKind::Associated))
}

fn try_renormalise(x: &EPSeq, y: &EPSeq, pair: &AssocPair) -> Option<(EPSeq, EPSeq)> {
    let sub = pair.substitution();
    let dx = sub.decode(x).ok()?;
    let dy = sub.decode(y).ok()?;
    (dx.at(0) == 0 && dx.at(1) == 1 && dy.at(0) == 1 && dy.at(1) == 0).then_some((dx, dy))
}

/// Shortest `(ω, ν)`, by total length and then `ℓ(ω)`, such that `0α` and
/// `1β` parse as `ω ν …` and `ν ω …`. Sturmian pairs `(ξ_r, ζ_r)` are accepted
/// alongside pairs meeting the strict associated-pair conditions.
pub fn detect_renorm(alpha: &EPSeq, beta: &EPSeq) -> Result<Option<Renormalisation>> {
    require_admissible(alpha, beta)?;
    let x = alpha.prepend(&Word::from_vec(vec![0]));
    let y = beta.prepend(&Word::from_vec(vec![1]));
    let (max_o, max_n) = (x.orbit_len(), y.orbit_len());
    for total in 3..=max_o + max_n {
        for lo in 2.max(total.saturating_sub(max_n))..=max_o.min(total - 1) {
            let (omega, nu) = (x.prefix(lo), y.prefix(total - lo));
            let Some((pair, kind)) = candidate_kind(&omega, &nu) else {
                continue;
            };
            if let Some((alpha_blocks, beta_blocks)) = try_renormalise(&x, &y, &pair) {
                return Ok(Some(Renormalisation {
                    trivial: pair.is_trivial(),
                    pair,
                    kind,
                    alpha_blocks,
                    beta_blocks,
                }));
            }
        }
    }
    Ok(None)
}

/// `ρ_{r_n} ∘ … ∘ ρ_{r_1}` applied to `(B⁰(ω, ν))`; `ratios` lists `r_1` first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenormBox {
    pub base: AssocPair,
    pub ratios: Vec<Ratio>,
}

impl RenormBox {
    pub fn new(base: AssocPair, ratios: Vec<Ratio>) -> Self {
        RenormBox { base, ratios }
    }

    pub fn level(&self) -> usize {
        self.ratios.len()
    }

    /// `q₁ ⋯ q_n`.
    pub fn q_product(&self) -> u64 {
        self.ratios.iter().map(|r| r.q() as u64).product()
    }

    fn lift(&self, x: &EPSeq) -> EPSeq {
        self.ratios
            .iter()
            .fold(x.clone(), |acc, &r| Substitution::sturmian(r).apply(&acc))
    }

    /// `((lo_x, hi_x), (lo_y, hi_y))` in `(0α, 1β)` coordinates.
    pub fn corners(&self) -> ((EPSeq, EPSeq), (EPSeq, EPSeq)) {
        let (o, n) = (&self.base.omega, &self.base.nu);
        let lo_x = periodic(o);
        let hi_x = periodic(n).prepend(o);
        let lo_y = periodic(o).prepend(n);
        let hi_y = periodic(n);
        (
            (self.lift(&lo_x), self.lift(&hi_x)),
            (self.lift(&lo_y), self.lift(&hi_y)),
        )
    }

    /// `2^{-2(Qℓω+1)} + 2^{-2(Qℓν+1)}`.
    pub fn diameter_squared(&self) -> Rat {
        let q = self.q_product() as usize;
        let term = |l: usize| BigRational::new(BigInt::one(), BigInt::one() << (2 * (q * l + 1)));
        Rat::from_big(term(self.base.omega.len()) + term(self.base.nu.len())).expect("below 1")
    }

    pub fn diameter(&self) -> f64 {
        libm::sqrt(self.diameter_squared().to_f64())
    }

    pub fn contains(&self, alpha: &EPSeq, beta: &EPSeq) -> bool {
        let mut x = alpha.prepend(&Word::from_vec(vec![0]));
        let mut y = beta.prepend(&Word::from_vec(vec![1]));
        for &r in self.ratios.iter().rev() {
            let sub = Substitution::sturmian(r);
            match (sub.decode(&x), sub.decode(&y)) {
                (Ok(a), Ok(b)) => {
                    x = a;
                    y = b;
                }
                _ => return false,
            }
        }
        let (o, n) = (&self.base.omega, &self.base.nu);
        periodic(o) <= x && x <= periodic(n).prepend(o) && periodic(o).prepend(n) <= y && y <= periodic(n)
    }
}

pub fn box_contains(b: &RenormBox, alpha: &EPSeq, beta: &EPSeq) -> bool {
    b.contains(alpha, beta)
}

pub fn box_diameter(b: &RenormBox) -> f64 {
    b.diameter()
}

/// Interval-intersection test on both coordinates of the box hulls.
pub fn boxes_disjoint(b1: &RenormBox, b2: &RenormBox) -> Result<bool> {
    if b1.level() != b2.level() {
        return Err(Error::StrataMismatch);
    }
    let ((x1, y1), (x2, y2)) = (b1.corners(), b2.corners());
    let apart = |a: &(EPSeq, EPSeq), b: &(EPSeq, EPSeq)| a.1 < b.0 || b.1 < a.0;
    Ok(apart(&x1, &x2) || apart(&y1, &y2))
}

/// Result of peeling Sturmian renormalisations off a pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derenormalisation {
    pub base_alpha: EPSeq,
    pub base_beta: EPSeq,
    /// `r_1, …, r_n` with the input equal to `ρ_{r_n} ∘ … ∘ ρ_{r_1}` of the base.
    pub ratios: Vec<Ratio>,
}

impl Derenormalisation {
    pub fn level(&self) -> usize {
        self.ratios.len()
    }

    pub fn q_product(&self) -> u64 {
        self.ratios.iter().map(|r| r.q() as u64).product()
    }

    /// Applies the ratios to the base pair.
    pub fn rebuild(&self) -> (EPSeq, EPSeq) {
        renormalise(&self.base_alpha, &self.base_beta, &self.ratios)
    }
}

/// `(α', β')` with `0α' = ρ(0α)`, `1β' = ρ(1β)` for `ρ = ρ_{r_n} ∘ … ∘ ρ_{r_1}`.
pub fn renormalise(alpha: &EPSeq, beta: &EPSeq, ratios: &[Ratio]) -> (EPSeq, EPSeq) {
    let mut x = alpha.prepend(&Word::from_vec(vec![0]));
    let mut y = beta.prepend(&Word::from_vec(vec![1]));
    for &r in ratios {
        let sub = Substitution::sturmian(r);
        x = sub.apply(&x);
        y = sub.apply(&y);
    }
    (x.shift(1), y.shift(1))
}

fn sturmian_step(x: &EPSeq, y: &EPSeq) -> Option<(Ratio, EPSeq, EPSeq)> {
    let max_q = x.per().len().max(2) as u32;
    for r in Ratio::all_up_to(max_q) {
        let pair = AssocPair::sturmian(r);
        let b = RenormBox::new(pair.clone(), Vec::new());
        let ((lx, hx), (ly, hy)) = b.corners();
        if !(&lx <= x && x <= &hx && &ly <= y && y <= &hy) {
            continue;
        }
        let sub = pair.substitution();
        let (Ok(dx), Ok(dy)) = (sub.decode(x), sub.decode(y)) else {
            continue;
        };
        if dx.at(1) == 1 && dy.at(1) == 0 && admissible(&dx.shift(1), &dy.shift(1)).is_admissible() {
            return Some((r, dx, dy));
        }
    }
    None
}

/// Descends the Sturmian tower using a known positive entropy `h` of the input.
pub fn derenormalise_with_entropy(alpha: &EPSeq, beta: &EPSeq, h: f64) -> Result<Derenormalisation> {
    require_admissible(alpha, beta)?;
    if h <= 0.0 {
        return Err(Error::NotApplicable("pair has zero entropy"));
    }
    let mut x = alpha.prepend(&Word::from_vec(vec![0]));
    let mut y = beta.prepend(&Word::from_vec(vec![1]));
    let mut ratios = Vec::new();
    let mut q_product = 1.0;
    while let Some((r, dx, dy)) = sturmian_step(&x, &y) {
        q_product *= r.q() as f64;
        // The base entropy is at most 1 and equals h times the q-product.
        if q_product * h > 1.0 + 1e-9 {
            return Err(Error::InfiniteRenormalisationSuspected);
        }
        ratios.push(r);
        x = dx;
        y = dy;
    }
    ratios.reverse();
    Ok(Derenormalisation {
        base_alpha: x.shift(1),
        base_beta: y.shift(1),
        ratios,
    })
}

pub fn derenormalise(alpha: &EPSeq, beta: &EPSeq) -> Result<Derenormalisation> {
    require_admissible(alpha, beta)?;
    let h = entropy_of_series(&KneadingSeries::from_pair(alpha, beta)).h_bits;
    derenormalise_with_entropy(alpha, beta, h)
}

/// `ν_k = 100(10)^k`.
pub fn hofbauer_nu(k: usize) -> Word {
    Word::from_vec([1, 0, 0].into_iter().chain([1, 0].repeat(k)).collect())
}

/// Family pair at level 0: `0α = ω ν_k^∞`, `1β = ν_k ω^∞` with `ω = 01`, or the
/// mirrored shape `0α = ν̄_k ω̄^∞`, `1β = ω̄ ν̄_k^∞`.
pub fn hofbauer_pair(k: usize, mirrored: bool) -> (EPSeq, EPSeq) {
    let omega = Word::from_vec(vec![0, 1]);
    let nu = hofbauer_nu(k);
    let (x, y) = if mirrored {
        (periodic(&omega.mirror()).prepend(&nu.mirror()), periodic(&nu.mirror()).prepend(&omega.mirror()))
    } else {
        (periodic(&nu).prepend(&omega), periodic(&omega).prepend(&nu))
    };
    (x.shift(1), y.shift(1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HofbauerWitness {
    pub k: usize,
    pub mirrored: bool,
    pub level: usize,
    pub ratios: Vec<Ratio>,
}

fn match_family(alpha: &EPSeq, beta: &EPSeq) -> Option<(usize, bool)> {
    let bound = alpha.orbit_len() + beta.orbit_len();
    (0..=bound).find_map(|k| {
        [false, true].into_iter().find_map(|mirrored| {
            let (a, b) = hofbauer_pair(k, mirrored);
            (&a == alpha && &b == beta).then_some((k, mirrored))
        })
    })
}

/// Matches the de-renormalised base against the family shapes.
pub fn hofbauer_check(alpha: &EPSeq, beta: &EPSeq) -> Option<HofbauerWitness> {
    let d = derenormalise(alpha, beta).ok()?;
    let (k, mirrored) = match_family(&d.base_alpha, &d.base_beta)?;
    Some(HofbauerWitness {
        k,
        mirrored,
        level: d.level(),
        ratios: d.ratios,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HoleKind {
    Centred,
    Right,
    Left,
    HalfLeft,
    Other,
}

impl HoleKind {
    pub fn name(self) -> &'static str {
        match self {
            HoleKind::Centred => "Centred",
            HoleKind::Right => "Right",
            HoleKind::Left => "Left",
            HoleKind::HalfLeft => "HalfLeft",
            HoleKind::Other => "Other",
        }
    }
}

/// An open interval `(a, b)` removed from the circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hole {
    a: Rat,
    b: Rat,
    kind: HoleKind,
}

impl Hole {
    pub fn new(a: Rat, b: Rat) -> Result<Self> {
        if a >= b {
            return Err(Error::EndpointOrder);
        }
        let q = |n: i64, d: i64| Rat::new(n, d).expect("constant in range");
        let (zero, quarter, half, three_q, one) = (Rat::zero(), q(1, 4), q(1, 2), q(3, 4), Rat::one());
        let kind = if b == one && a > half {
            HoleKind::Right
        } else if a == zero && b < half && b > zero {
            HoleKind::Left
        } else if b == half && a > quarter {
            HoleKind::HalfLeft
        } else if a > quarter && a < half && b > half && b < three_q {
            HoleKind::Centred
        } else {
            HoleKind::Other
        };
        Ok(Hole { a, b, kind })
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn kind(&self) -> HoleKind {
        self.kind
    }
}

/// The β-shift a one-sided hole reduces to.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaShift {
    /// Parry sequence bounding the shift from above.
    pub parry: EPSeq,
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HolePair {
    pub alpha: EPSeq,
    pub beta: EPSeq,
    pub kind: HoleKind,
    pub reduction: Option<BetaShift>,
}

fn regularised(x: EPSeq) -> EPSeq {
    if is_parry(&x) {
        x
    } else {
        varsigma(&x).expect("starts with 1 and is not Parry")
    }
}

pub fn hole_to_pair(h: &Hole) -> Result<HolePair> {
    let beta_shift = |upper: EPSeq| -> Result<(EPSeq, BetaShift)> {
        let parry = regularised(upper);
        let beta = beta_of(&parry)?;
        Ok((parry.clone(), BetaShift { parry, beta }))
    };
    match h.kind {
        HoleKind::Centred => Ok(HolePair {
            alpha: expand(&h.a).shift(1),
            beta: expand(&h.b).shift(1),
            kind: h.kind,
            reduction: None,
        }),
        HoleKind::Right => {
            let (alpha, red) = beta_shift(expand(&h.a))?;
            Ok(HolePair {
                alpha,
                beta: EPSeq::constant(0),
                kind: h.kind,
                reduction: Some(red),
            })
        }
        HoleKind::Left => {
            let (upper, red) = beta_shift(expand(&h.b).mirror())?;
            Ok(HolePair {
                alpha: EPSeq::constant(1),
                beta: upper.mirror(),
                kind: h.kind,
                reduction: Some(red),
            })
        }
        HoleKind::HalfLeft => {
            let two_a = Rat::from_big(h.a.value() * BigRational::from_integer(BigInt::from(2)))?;
            let (alpha, red) = beta_shift(expand(&two_a))?;
            Ok(HolePair {
                alpha,
                beta: EPSeq::constant(0),
                kind: h.kind,
                reduction: Some(red),
            })
        }
        HoleKind::Other => Err(Error::UnsupportedHole),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tag {
    FullShift,
    ZeroEntropy,
    Extremal(Extremal),
    Essential,
    RenormalisableSFT,
    RenormalisableNonSFT,
    CodedLimit,
    HofbauerNonIE { k: usize, mirrored: bool, level: usize },
}

impl Tag {
    pub fn name(&self) -> &'static str {
        match self {
            Tag::FullShift => "FullShift",
            Tag::ZeroEntropy => "ZeroEntropy",
            Tag::Extremal(_) => "Extremal",
            Tag::Essential => "Essential",
            Tag::RenormalisableSFT => "RenormalisableSFT",
            Tag::RenormalisableNonSFT => "RenormalisableNonSFT",
            Tag::CodedLimit => "CodedLimit",
            Tag::HofbauerNonIE { .. } => "HofbauerNonIE",
        }
    }

    /// Every tag name, in a fixed order.
    pub const NAMES: [&'static str; 8] = [
        "FullShift",
        "ZeroEntropy",
        "Extremal",
        "Essential",
        "RenormalisableSFT",
        "RenormalisableNonSFT",
        "CodedLimit",
        "HofbauerNonIE",
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ie {
    IntrinsicallyErgodic,
    NotIntrinsicallyErgodic,
    ZeroEntropy,
    TieWithinTolerance,
    NotApplicable,
}

impl Ie {
    pub fn name(self) -> &'static str {
        match self {
            Ie::IntrinsicallyErgodic => "IntrinsicallyErgodic",
            Ie::NotIntrinsicallyErgodic => "NotIntrinsicallyErgodic",
            Ie::ZeroEntropy => "ZeroEntropy",
            Ie::TieWithinTolerance => "TieWithinTolerance",
            Ie::NotApplicable => "NotApplicable",
        }
    }

    fn of(v: &IeVerdict) -> Ie {
        match v {
            IeVerdict::IntrinsicallyErgodic { .. } => Ie::IntrinsicallyErgodic,
            IeVerdict::NotIntrinsicallyErgodic { .. } => Ie::NotIntrinsicallyErgodic,
            IeVerdict::ZeroEntropy => Ie::ZeroEntropy,
            IeVerdict::TieWithinTolerance { .. } => Ie::TieWithinTolerance,
        }
    }
}

/// Where an ergodicity verdict comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Confirmed by the automaton's component analysis.
    OracleVerified,
    /// Taken from the classification tag; the automaton did not confirm it.
    TheoremBased,
    NotApplicable,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::OracleVerified => "oracle-verified",
            Provenance::TheoremBased => "theorem-based",
            Provenance::NotApplicable => "not-applicable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassifyInput {
    Pair(EPSeq, EPSeq),
    Hole(Hole),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub alpha: EPSeq,
    pub beta: EPSeq,
    pub tag: Tag,
    pub level: usize,
    pub ratios: Vec<Ratio>,
    pub base_alpha: Option<EPSeq>,
    pub base_beta: Option<EPSeq>,
    /// Renormalisation found at the base, if any.
    pub renorm: Option<Renormalisation>,
    pub entropy: EntropyResult,
    pub base_entropy: Option<EntropyResult>,
    pub ie: Ie,
    pub ie_provenance: Provenance,
    /// The automaton's own verdict, when it was run.
    pub oracle: Option<Ie>,
    pub hole: Option<HoleKind>,
    pub beta_shift: Option<BetaShift>,
}

impl Classification {
    /// `|h − h_base / (q₁⋯q_n)|`.
    pub fn scaling_defect(&self) -> Option<f64> {
        let base = self.base_entropy.as_ref()?;
        let q: f64 = self.ratios.iter().map(|r| r.q() as f64).product();
        Some((self.entropy.h_bits - base.h_bits / q).abs())
    }

    pub fn trivial(&self) -> bool {
        self.renorm.as_ref().is_some_and(|r| r.trivial)
    }
}

pub fn classify(input: &ClassifyInput) -> Result<Classification> {
    let (alpha, beta, hole, beta_shift) = match input {
        ClassifyInput::Pair(a, b) => (a.clone(), b.clone(), None, None),
        ClassifyInput::Hole(h) => {
            let p = hole_to_pair(h)?;
            (p.alpha, p.beta, Some(p.kind), p.reduction)
        }
    };
    let mut c = Classification {
        alpha: alpha.clone(),
        beta: beta.clone(),
        tag: Tag::ZeroEntropy,
        level: 0,
        ratios: Vec::new(),
        base_alpha: None,
        base_beta: None,
        renorm: None,
        entropy: EntropyResult::zero(),
        base_entropy: None,
        ie: Ie::NotApplicable,
        ie_provenance: Provenance::NotApplicable,
        oracle: None,
        hole,
        beta_shift,
    };
    if let Admissibility::Extremal(e) = admissible(&alpha, &beta) {
        c.tag = Tag::Extremal(e);
        return Ok(c);
    }
    c.entropy = entropy_of_series(&KneadingSeries::from_pair(&alpha, &beta));
    let oracle = Ie::of(&ie_verdict(&alpha, &beta)?);
    c.oracle = Some(oracle);
    let full = alpha == EPSeq::constant(1) && beta == EPSeq::constant(0);
    let expected = if full {
        c.tag = Tag::FullShift;
        c.base_alpha = Some(alpha.clone());
        c.base_beta = Some(beta.clone());
        c.base_entropy = Some(c.entropy.clone());
        Ie::IntrinsicallyErgodic
    } else if c.entropy.h_bits <= 0.0 {
        c.tag = Tag::ZeroEntropy;
        Ie::ZeroEntropy
    } else {
        let d = derenormalise_with_entropy(&alpha, &beta, c.entropy.h_bits)?;
        let (a0, b0) = (d.base_alpha.clone(), d.base_beta.clone());
        c.level = d.level();
        c.ratios = d.ratios.clone();
        c.base_entropy = Some(entropy_of_series(&KneadingSeries::from_pair(&a0, &b0)));
        let both_periodic = a0.is_periodic() && b0.is_periodic();
        if let Some((k, mirrored)) = match_family(&a0, &b0) {
            c.tag = Tag::HofbauerNonIE {
                k,
                mirrored,
                level: c.level,
            };
        } else if let Some(r) = detect_renorm(&a0, &b0)? {
            c.tag = if both_periodic {
                Tag::RenormalisableSFT
            } else {
                Tag::RenormalisableNonSFT
            };
            c.renorm = Some(r);
        } else if both_periodic {
            c.tag = Tag::Essential;
        } else {
            c.tag = Tag::CodedLimit;
        }
        c.base_alpha = Some(a0);
        c.base_beta = Some(b0);
        if matches!(c.tag, Tag::HofbauerNonIE { .. }) {
            Ie::NotIntrinsicallyErgodic
        } else {
            Ie::IntrinsicallyErgodic
        }
    };
    c.ie = expected;
    c.ie_provenance = if oracle == expected {
        Provenance::OracleVerified
    } else {
        Provenance::TheoremBased
    };
    Ok(c)
}
