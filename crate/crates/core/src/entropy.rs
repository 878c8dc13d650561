//! Kneading series, entropy, renewal systems, β-expansions and Lorenz maps.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{smallest_root_unit, Poly, Root};
use crate::seq::{require_admissible, EPSeq, Rat, Word};

const GRID: u32 = 1000;
const ROOT_TOL: f64 = 1e-12;

/// `K(t) = head(t) + tail(t)·t^u / (1 − t^v)` with coefficients `b_i − a_i`
/// (and `b_0 − a_0 = 1`). `head` holds indices `0..=u`, `tail[j-1]` index `u + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KneadingSeries {
    head: Vec<i64>,
    tail: Vec<i64>,
    u: usize,
    v: usize,
}

impl KneadingSeries {
    /// Builds the series without checking admissibility.
    pub fn from_pair(alpha: &EPSeq, beta: &EPSeq) -> Self {
        let u = alpha.pre().len().max(beta.pre().len());
        let v = alpha.per().len().lcm(&beta.per().len());
        let coef = |i: usize| -> i64 {
            if i == 0 {
                1
            } else {
                beta.at(i - 1) as i64 - alpha.at(i - 1) as i64
            }
        };
        KneadingSeries {
            head: (0..=u).map(coef).collect(),
            tail: (u + 1..=u + v).map(coef).collect(),
            u,
            v,
        }
    }

    pub fn preperiod(&self) -> usize {
        self.u
    }

    pub fn period(&self) -> usize {
        self.v
    }

    /// Coefficient of `t^i`.
    pub fn coefficient(&self, i: usize) -> i64 {
        if i <= self.u {
            self.head[i]
        } else {
            self.tail[(i - self.u - 1) % self.v]
        }
    }

    pub fn head(&self) -> Poly {
        Poly::from_i64(&self.head)
    }

    /// `tail(t)` with `tail[j-1]` as the coefficient of `t^j`.
    pub fn tail(&self) -> Poly {
        let mut c = vec![0];
        c.extend_from_slice(&self.tail);
        Poly::from_i64(&c)
    }

    /// `1 − t^v`.
    pub fn denominator(&self) -> Poly {
        &Poly::one() - &Poly::monomial(1, self.v)
    }

    /// `N(t) = K(t)·(1 − t^v)`.
    pub fn numerator(&self) -> Poly {
        &(&self.head() * &self.denominator()) + &self.tail().shift_up(self.u)
    }

    /// Exact value for rational `t` in `[0, 1)`.
    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.numerator().eval(t) / self.denominator().eval(t)
    }

    /// `Σ_{i<n} c_i t^i`.
    pub fn partial_sum(&self, t: &BigRational, n: usize) -> BigRational {
        let mut acc = BigRational::zero();
        let mut pow = BigRational::one();
        for i in 0..n {
            acc += &pow * BigRational::from_integer(BigInt::from(self.coefficient(i)));
            pow *= t;
        }
        acc
    }
}

/// Root of the kneading series and the derived entropy, in bits.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyResult {
    pub kappa: Option<f64>,
    pub h_bits: f64,
    pub dim: f64,
    /// Exact bracket around `kappa`.
    pub bracket: Option<(f64, f64)>,
}

impl EntropyResult {
    pub fn zero() -> Self {
        EntropyResult {
            kappa: None,
            h_bits: 0.0,
            dim: 0.0,
            bracket: None,
        }
    }

    fn from_root(root: Root) -> Self {
        let kappa = root.midpoint();
        let h = libm::log2(1.0 / kappa).max(0.0);
        EntropyResult {
            kappa: Some(kappa),
            h_bits: h,
            dim: h,
            bracket: Some((
                num_traits::ToPrimitive::to_f64(&root.lo).unwrap_or(kappa),
                num_traits::ToPrimitive::to_f64(&root.hi).unwrap_or(kappa),
            )),
        }
    }

    pub fn no_root(&self) -> bool {
        self.kappa.is_none()
    }
}

pub fn kneading_series(alpha: &EPSeq, beta: &EPSeq) -> Result<KneadingSeries> {
    require_admissible(alpha, beta)?;
    Ok(KneadingSeries::from_pair(alpha, beta))
}

/// Smallest root of `N/(1 − t^v)` in `(0, 1]` for a numerator `N` with
/// `N(0) ≠ 0`. The denominator is positive on `(0, 1)` and has a simple
/// zero at 1, so `t = 1` is a root only when `(t − 1)²` divides `N`.
fn smallest_root_of_quotient(num: &Poly) -> Option<Root> {
    let (rest, mult) = num.strip_unit_root();
    smallest_root_unit(&rest.square_free(), GRID, ROOT_TOL).or_else(|| {
        (mult >= 2).then(|| Root {
            lo: BigRational::one(),
            hi: BigRational::one(),
        })
    })
}

/// Entropy of a kneading series (no admissibility check).
pub fn entropy_of_series(k: &KneadingSeries) -> EntropyResult {
    match smallest_root_of_quotient(&k.numerator()) {
        Some(root) => EntropyResult::from_root(root),
        None => EntropyResult::zero(),
    }
}

pub fn entropy_of(alpha: &EPSeq, beta: &EPSeq) -> Result<EntropyResult> {
    Ok(entropy_of_series(&kneading_series(alpha, beta)?))
}

/// Entropy of the renewal system generated by two words of the given lengths.
pub fn renewal_entropy(l_omega: usize, l_nu: usize) -> EntropyResult {
    assert!(l_omega >= 1 && l_nu >= 1, "word lengths must be positive");
    let p = &(&Poly::one() - &Poly::monomial(1, l_omega)) - &Poly::monomial(1, l_nu);
    match smallest_root_unit(&p, GRID, ROOT_TOL) {
        Some(root) => EntropyResult::from_root(root),
        None => EntropyResult::zero(),
    }
}

/// The `β ∈ (1, 2]` with `Σ a_i β^{-i} = 1`.
pub fn beta_of(alpha: &EPSeq) -> Result<f64> {
    if alpha.first() != 1 {
        return Err(Error::BadLeadingSymbol);
    }
    // With x = 1/β: (Σ_{i≤p} a_i x^i − 1)(1 − x^l) + x^p Σ_{j≤l} a_{p+j} x^j.
    let p = alpha.pre().len();
    let l = alpha.per().len();
    let mut head = vec![-1i64];
    head.extend(alpha.pre().bits().iter().map(|&b| b as i64));
    let mut per = vec![0i64];
    per.extend(alpha.per().bits().iter().map(|&b| b as i64));
    let den = &Poly::one() - &Poly::monomial(1, l);
    let g = &(&Poly::from_i64(&head) * &den) + &Poly::from_i64(&per).shift_up(p);
    let (rest, _) = g.strip_unit_root();
    let root = smallest_root_unit(&rest.square_free(), GRID, 1e-14)
        .expect("the series increases from -1 to a value at least 0 on (0, 1]");
    Ok(1.0 / root.midpoint())
}

fn snap(y: f64) -> f64 {
    let r = libm::round(y);
    if (y - r).abs() <= 1e-9 * y.abs().max(1.0) {
        r
    } else {
        y
    }
}

/// First `n` digits of the greedy `β`-expansion of `x`, with digits capped at 1.
pub fn greedy_expansion(x: &Rat, beta: f64, n: usize) -> Word {
    let mut tau = x.to_f64();
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let y = snap(beta * tau);
        let d = libm::floor(y).clamp(0.0, 1.0);
        digits.push(d as u8);
        tau = (y - d).max(0.0);
    }
    Word::new(digits).expect("digits are bits")
}

/// Quasi-greedy expansion of 1: exactly periodic when detected, otherwise a
/// finite prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuasiGreedy {
    Periodic(EPSeq),
    Truncated(Word),
}

const QUASI_GREEDY_LIMIT: usize = 256;

/// The largest expansion of 1 in base `beta` that does not end in `0^∞`.
pub fn quasi_greedy_one(beta: f64) -> Result<QuasiGreedy> {
    if !(beta > 1.0 && beta <= 2.0) {
        return Err(Error::DomainError("beta must lie in (1, 2]"));
    }
    let mut tau = 1.0f64;
    let mut digits: Vec<u8> = Vec::new();
    let mut orbit: Vec<f64> = vec![tau];
    for _ in 0..QUASI_GREEDY_LIMIT {
        let y = snap(beta * tau);
        let d = libm::floor(y).clamp(0.0, 1.0);
        digits.push(d as u8);
        tau = y - d;
        if tau == 0.0 {
            // Finite greedy expansion d_1…d_k with d_k = 1.
            let last = digits.len() - 1;
            digits[last] = 0;
            return Ok(QuasiGreedy::Periodic(EPSeq::canonical(Vec::new(), digits)));
        }
        let close = |o: &f64| (o - tau).abs() <= 1e-9;
        if let Some(start) = orbit.iter().position(close) {
            let per = digits.split_off(start);
            return Ok(QuasiGreedy::Periodic(EPSeq::canonical(digits, per)));
        }
        orbit.push(tau);
    }
    Ok(QuasiGreedy::Truncated(Word::new(digits).expect("digits are bits")))
}

/// Quasi-greedy expansion of 1 for the base `beta_of(alpha)`, computed
/// symbolically: `α` itself, unless `α` ends in `0^∞`.
pub fn quasi_greedy_one_seq(alpha: &EPSeq) -> Result<EPSeq> {
    if alpha.first() != 1 {
        return Err(Error::BadLeadingSymbol);
    }
    if alpha.per().bits() != [0] {
        return Ok(alpha.clone());
    }
    let mut bits = alpha.pre().bits().to_vec();
    let last = bits.len() - 1;
    bits[last] = 0;
    Ok(EPSeq::canonical(Vec::new(), bits))
}

fn check_lorenz(beta_t: f64, alpha_t: f64) -> Result<()> {
    if !(beta_t > 1.0 && beta_t < 2.0) {
        return Err(Error::DomainError("slope must lie in (1, 2)"));
    }
    if !(alpha_t > 0.0 && alpha_t < 2.0 - beta_t) {
        return Err(Error::DomainError("offset must lie in (0, 2 - slope)"));
    }
    Ok(())
}

/// Expanding Lorenz map `x ↦ βx + α (mod 1)`. At the critical point the upper
/// branch is used, so `g(c) = 0`.
pub fn mod1_eval(beta_t: f64, alpha_t: f64, x: f64) -> Result<f64> {
    check_lorenz(beta_t, alpha_t)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError("x must lie in [0, 1]"));
    }
    let c = (1.0 - alpha_t) / beta_t;
    let y = beta_t * x + alpha_t;
    Ok(if x < c { y } else { y - 1.0 })
}

/// `α/(β − 1) + Σ x_n β^{-n}`.
pub fn lorenz_project(beta_t: f64, alpha_t: f64, x: &EPSeq) -> Result<f64> {
    check_lorenz(beta_t, alpha_t)?;
    let inv = 1.0 / beta_t;
    let sum_word = |w: &Word| {
        let mut s = 0.0;
        let mut p = 1.0;
        for &b in w.bits() {
            p *= inv;
            s += b as f64 * p;
        }
        (s, p)
    };
    let (head, scale) = sum_word(x.pre());
    let (cycle, cycle_scale) = sum_word(x.per());
    Ok(alpha_t / (beta_t - 1.0) + head + scale * cycle / (1.0 - cycle_scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn s(t: &str) -> EPSeq {
        t.parse().unwrap()
    }

    const PHI: f64 = 1.618_033_988_749_895;

    #[test]
    fn series_examples() {
        let full = kneading_series(&s("(1)"), &s("(0)")).unwrap();
        assert_eq!(full.numerator(), Poly::from_i64(&[1, -2]));
        let two = kneading_series(&s("(10)"), &s("(01)")).unwrap();
        // 1/(1+t) written over 1 - t^2.
        assert_eq!(two.numerator(), Poly::from_i64(&[1, -1]));
        assert_eq!(two.denominator(), Poly::from_i64(&[1, 0, -1]));
        let gold = kneading_series(&s("(110)"), &s("(001)")).unwrap();
        assert_eq!(gold.numerator(), Poly::from_i64(&[1, -1, -1]));
        assert_eq!(gold.denominator(), Poly::from_i64(&[1, 0, 0, -1]));
        assert!(matches!(
            kneading_series(&s("(101)"), &s("(001)")),
            Err(Error::NotAdmissible(_))
        ));
    }

    #[test]
    fn series_matches_partial_sums() {
        let k = kneading_series(&s("(11010)"), &s("0(01)")).unwrap();
        let t = BigRational::new(BigInt::from(1), BigInt::from(3));
        let exact = k.eval(&t);
        let approx = k.partial_sum(&t, 80);
        let diff: f64 = num_traits::ToPrimitive::to_f64(&(exact - approx)).unwrap();
        assert!(diff.abs() < 1e-30);
    }

    #[test]
    fn entropy_examples() {
        let full = entropy_of(&s("(1)"), &s("(0)")).unwrap();
        assert_eq!(full.kappa, Some(0.5));
        assert_eq!(full.h_bits, 1.0);
        assert_eq!(full.dim, 1.0);
        let gold = entropy_of(&s("(110)"), &s("(001)")).unwrap();
        assert!((gold.kappa.unwrap() - (PHI - 1.0)).abs() < 1e-12);
        assert!((gold.h_bits - 0.694_241_913_630_617_3).abs() < 1e-11);
        let zero = entropy_of(&s("(10)"), &s("(01)")).unwrap();
        assert!(zero.no_root());
        assert_eq!(zero.h_bits, 0.0);
    }

    #[test]
    fn renewal_examples() {
        assert_eq!(renewal_entropy(1, 1).h_bits, 1.0);
        let r = renewal_entropy(2, 3);
        assert!((r.kappa.unwrap() - 0.754_877_666_246_692_7).abs() < 1e-12);
        assert!((r.h_bits - 0.405_685_231_375_825).abs() < 1e-9);
        let r = renewal_entropy(2, 5);
        assert!((r.kappa.unwrap() - 0.808_730_600_479_392).abs() < 1e-12);
    }

    #[test]
    fn beta_examples() {
        let b = beta_of(&s("(10)")).unwrap();
        assert!((b * b - b - 1.0).abs() < 1e-12);
        assert_eq!(beta_of(&s("(1)")).unwrap(), 2.0);
        let b = beta_of(&s("(100)")).unwrap();
        assert!((b * b * b - b * b - 1.0).abs() < 1e-11);
        assert!((b - 1.465_571_231_876_768).abs() < 1e-11);
        assert_eq!(beta_of(&s("(01)")), Err(Error::BadLeadingSymbol));
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_expansion(&Rat::one(), PHI, 4).to_string(), "1100");
        let half = Rat::new(1, 2).unwrap();
        assert_eq!(greedy_expansion(&half, 2.0, 3).to_string(), "100");
        let third = Rat::new(1, 3).unwrap();
        assert_eq!(greedy_expansion(&third, 2.0, 4).to_string(), "0101");
    }

    #[test]
    fn quasi_greedy_examples() {
        assert_eq!(quasi_greedy_one(PHI).unwrap(), QuasiGreedy::Periodic(s("(10)")));
        assert_eq!(quasi_greedy_one(2.0).unwrap(), QuasiGreedy::Periodic(s("(1)")));
        let b = beta_of(&s("(100)")).unwrap();
        assert_eq!(quasi_greedy_one(b).unwrap(), QuasiGreedy::Periodic(s("(100)")));
        assert_eq!(quasi_greedy_one_seq(&s("11(0)")).unwrap(), s("(10)"));
        assert_eq!(quasi_greedy_one_seq(&s("(110)")).unwrap(), s("(110)"));
        assert!(quasi_greedy_one(2.5).is_err());
    }

    #[test]
    fn lorenz_map() {
        let (b, a) = (1.5, 0.3);
        assert_eq!(mod1_eval(b, a, 0.0).unwrap(), a);
        let c = (1.0 - a) / b;
        assert!((mod1_eval(b, a, c - 1e-13).unwrap() - 1.0).abs() < 1e-12);
        assert!(mod1_eval(b, a, c + 1e-13).unwrap().abs() < 1e-12);
        assert!((mod1_eval(b, a, 1.0).unwrap() - (b + a - 1.0)).abs() < 1e-15);
        assert!(mod1_eval(2.5, a, 0.0).is_err());
        assert!(mod1_eval(b, 0.6, 0.0).is_err());
        assert_eq!(lorenz_project(b, a, &s("(0)")).unwrap(), a / (b - 1.0));
        let top = lorenz_project(b, a, &s("(1)")).unwrap();
        assert!((top - (a / (b - 1.0) + 1.0 / (b - 1.0))).abs() < 1e-12);
    }
}
