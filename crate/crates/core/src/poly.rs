//! Integer polynomials and a certified search for their smallest root in `(0, 1]`.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Polynomial with integer coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `coef · t^k`.
    pub fn monomial(coef: i64, k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::from(coef);
        Self::new(c)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_default()
    }

    fn lead(&self) -> &BigInt {
        self.c.last().expect("non-zero polynomial")
    }

    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.c.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        Poly::new(self.c.iter().map(|x| x / &g).collect())
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.c
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, x| acc * t + BigRational::from_integer(x.clone()))
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.c
            .iter()
            .rev()
            .fold(0.0, |acc, x| acc * t + x.to_f64().unwrap_or(f64::NAN))
    }

    /// Exact sign of the value at `num/den` with `den > 0`.
    pub fn sign_at(&self, num: &BigInt, den: &BigInt) -> Ordering {
        let Some(d) = self.degree() else {
            return Ordering::Equal;
        };
        // den^d · p(num/den), accumulated by Horner from the top.
        let mut acc = self.c[d].clone();
        let mut den_pow = BigInt::one();
        for i in (0..d).rev() {
            den_pow *= den;
            acc = acc * num + &self.c[i] * &den_pow;
        }
        acc.sign_cmp()
    }

    /// Sign at `num/den`, trusting a floating evaluation when its error bound
    /// clears zero and falling back to exact arithmetic otherwise.
    pub fn sign_at_fast(&self, num: &BigInt, den: &BigInt, abs: &[f64]) -> Ordering {
        let t = match (num.to_f64(), den.to_f64()) {
            (Some(n), Some(d)) if d > 0.0 => n / d,
            _ => return self.sign_at(num, den),
        };
        let mut v = 0.0;
        let mut m = 0.0;
        for (x, a) in self.c.iter().zip(abs).rev() {
            v = v * t + x.to_f64().unwrap_or(f64::NAN);
            m = m * t.abs() + a;
        }
        let bound = 4.0 * (self.c.len() as f64 + 2.0) * f64::EPSILON * m;
        if v.is_finite() && v.abs() > bound {
            if v > 0.0 {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        } else {
            self.sign_at(num, den)
        }
    }

    /// Remainder of `lc(b)^k · self` divided by `b`.
    pub fn pseudo_rem(&self, b: &Poly) -> Poly {
        let db = b.degree().expect("division by zero polynomial");
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.lead().clone();
            let lb = b.lead();
            let mut c: Vec<BigInt> = r.c.iter().map(|x| x * lb).collect();
            for (i, y) in b.c.iter().enumerate() {
                c[i + dr - db] -= &lr * y;
            }
            r = Poly::new(c);
        }
        r
    }

    /// Exact quotient over the integers, if it exists.
    pub fn div_exact(&self, b: &Poly) -> Option<Poly> {
        let db = b.degree()?;
        let mut r = self.c.clone();
        let Some(dr) = self.degree() else {
            return Some(Poly::zero());
        };
        if dr < db {
            return None;
        }
        let lb = b.lead();
        let mut q = vec![BigInt::zero(); dr - db + 1];
        for k in (0..=dr - db).rev() {
            let (quo, rem) = r[k + db].div_rem(lb);
            if !rem.is_zero() {
                return None;
            }
            for (i, y) in b.c.iter().enumerate() {
                r[k + i] -= &quo * y;
            }
            q[k] = quo;
        }
        r.iter().all(Zero::is_zero).then(|| Poly::new(q))
    }

    /// Greatest common divisor up to a unit, primitive with positive lead.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            core::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    /// Same roots, each simple.
    pub fn square_free(&self) -> Poly {
        if self.degree().unwrap_or(0) < 2 || self.coprime_to_derivative_mod_p() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        // g is primitive, so by Gauss's lemma the quotient is integral.
        self.div_exact(&g).expect("gcd divides").primitive_part()
    }

    /// Cheap sufficient test for square-freeness: coprimality with the
    /// derivative modulo a large prime.
    fn coprime_to_derivative_mod_p(&self) -> bool {
        const P: u64 = (1 << 61) - 1;
        let reduce = |x: &BigInt| -> u64 { x.mod_floor(&BigInt::from(P)).to_u64().unwrap_or(0) };
        let a: Vec<u64> = self.c.iter().map(reduce).collect();
        let b: Vec<u64> = self.derivative().c.iter().map(reduce).collect();
        let (da, db) = (trim_mod(&a), trim_mod(&b));
        if da + 1 != a.len() || db + 1 != b.len() {
            // Leading coefficient vanishes modulo P; the test is inconclusive.
            return false;
        }
        mod_gcd_degree(a, b, P) == 0
    }

    /// Divides out `(t - 1)` as often as possible and returns the multiplicity.
    pub fn strip_unit_root(&self) -> (Poly, usize) {
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() && p.c.iter().fold(BigInt::zero(), |s, x| s + x).is_zero() {
            // Synthetic division by (t - 1).
            let d = p.c.len() - 1;
            let mut q = vec![BigInt::zero(); d];
            let mut acc = BigInt::zero();
            for i in (0..d).rev() {
                acc += &p.c[i + 1];
                q[i] = acc.clone();
            }
            p = Poly::new(q);
            m += 1;
        }
        (p, m)
    }

    /// Divides out powers of `t`.
    pub fn strip_zero_root(&self) -> Poly {
        let k = self.c.iter().take_while(|x| x.is_zero()).count();
        Poly::new(self.c[k..].to_vec())
    }
}

fn trim_mod(v: &[u64]) -> usize {
    v.iter().rposition(|&x| x != 0).unwrap_or(0)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn mod_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> usize {
    let norm = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    norm(&mut a);
    norm(&mut b);
    while !b.is_empty() {
        // a <- a mod b
        let inv = pow_mod(*b.last().unwrap(), p - 2, p);
        while a.len() >= b.len() {
            let f = mul_mod(*a.last().unwrap(), inv, p);
            let off = a.len() - b.len();
            for (i, &y) in b.iter().enumerate() {
                a[off + i] = (a[off + i] + p - mul_mod(f, y, p)) % p;
            }
            norm(&mut a);
            if a.is_empty() {
                break;
            }
        }
        core::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly::new(self.c.iter().map(|x| -x).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.c.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        Poly::new(c)
    }
}

/// A root location: an exact rational bracket and its midpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Root {
    pub fn midpoint(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn width(&self) -> f64 {
        (&self.hi - &self.lo).to_f64().unwrap_or(f64::NAN)
    }
}

/// Smallest root of `p` in `(0, 1]`: sign scan on the grid `k/grid`, then
/// bisection until the bracket is narrower than `tol`. Assumes `p(0) ≠ 0`.
/// Roots of even multiplicity are invisible to the scan, so callers pass a
/// square-free polynomial.
pub fn smallest_root_unit(p: &Poly, grid: u32, tol: f64) -> Option<Root> {
    p.degree()?;
    let abs: Vec<f64> = p.c.iter().map(|x| x.abs().to_f64().unwrap_or(f64::MAX)).collect();
    let den = BigInt::from(grid);
    let sign0 = p.c[0].sign_cmp();
    let mut prev = sign0;
    for k in 1..=grid {
        let num = BigInt::from(k);
        let s = p.sign_at_fast(&num, &den, &abs);
        if s == Ordering::Equal {
            let t = BigRational::new(num, den.clone());
            return Some(Root { lo: t.clone(), hi: t });
        }
        if s != prev && prev != Ordering::Equal {
            return Some(bisect(p, &abs, BigInt::from(k - 1), num, den, prev, tol));
        }
        prev = s;
    }
    None
}

fn bisect(
    p: &Poly,
    abs: &[f64],
    mut lo: BigInt,
    mut hi: BigInt,
    mut den: BigInt,
    sign_lo: Ordering,
    tol: f64,
) -> Root {
    let mut width = 1.0 / den.to_f64().unwrap_or(f64::MAX);
    while width >= tol {
        lo <<= 1;
        hi <<= 1;
        den <<= 1;
        let mid = &lo + 1;
        match p.sign_at_fast(&mid, &den, abs) {
            Ordering::Equal => {
                let t = BigRational::new(mid, den);
                return Root { lo: t.clone(), hi: t };
            }
            s if s == sign_lo => lo = mid,
            _ => hi = mid,
        }
        width /= 2.0;
    }
    Root {
        lo: BigRational::new(lo, den.clone()),
        hi: BigRational::new(hi, den),
    }
}
