//! Gaussian integers and the residue symbols over Z[i].
//!
//! An element is *primary* when it is congruent to 1 modulo 2+2i; every
//! element coprime to 1+i has exactly one primary associate, and primary
//! elements factor uniquely into primary primes. The quadratic and quartic
//! symbols are computed by modular exponentiation and extended
//! multiplicatively over that factorization.

use super::{factor_u64, is_prime_u64, jacobi};
use crate::error::{contract, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaussInt {
    pub re: i128,
    pub im: i128,
}

pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };
pub const I: GaussInt = GaussInt { re: 0, im: 1 };

impl GaussInt {
    pub const fn new(re: i128, im: i128) -> Self {
        GaussInt { re, im }
    }

    pub fn norm(self) -> i128 {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(self) -> Self {
        GaussInt::new(self.re, -self.im)
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    /// Rounded division: q minimizing |self - q*m|; remainder norm <= N(m)/2.
    pub fn div_rem(self, m: Self) -> (Self, Self) {
        assert!(!m.is_zero());
        let n = m.norm();
        let num = self * m.conj();
        let round_div = |a: i128, b: i128| -> i128 {
            // nearest integer to a/b, b > 0
            if a >= 0 {
                (2 * a + b) / (2 * b)
            } else {
                -((-2 * a + b) / (2 * b))
            }
        };
        let q = GaussInt::new(round_div(num.re, n), round_div(num.im, n));
        let r = self - q * m;
        debug_assert!(r.norm() <= n);
        (q, r)
    }

    pub fn divides(self, other: Self) -> bool {
        (other % self).is_zero()
    }

    /// self / divisor; panics when the division is not exact.
    pub fn div_exact(self, divisor: Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "div_exact: not divisible");
        q
    }

    pub fn gcd(self, other: Self) -> Self {
        let (mut a, mut b) = (self, other);
        while !b.is_zero() {
            let r = a % b;
            a = b;
            b = r;
        }
        a
    }

    /// theta === 1 (mod 2+2i)?
    pub fn is_primary(self) -> bool {
        GaussInt::new(2, 2).divides(self - ONE)
    }

    /// The unique primary associate u * self, together with the unit u.
    /// None when self is divisible by 1+i (no primary associate exists).
    pub fn primary_associate(self) -> Option<(GaussInt, GaussInt)> {
        if self.is_zero() || GaussInt::new(1, 1).divides(self) {
            return None;
        }
        let units = [ONE, I, GaussInt::new(-1, 0), GaussInt::new(0, -1)];
        let mut found = None;
        for u in units {
            let cand = u * self;
            if cand.is_primary() {
                debug_assert!(found.is_none(), "two primary associates of {self:?}");
                found = Some((u, cand));
            }
        }
        debug_assert!(found.is_some(), "no primary associate of {self:?}");
        found
    }

    /// self^e mod m (m nonzero), with reduction after every multiplication.
    pub fn modpow(self, e: u64, m: Self) -> Self {
        let mut base = self % m;
        let mut acc = ONE % m;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = (acc * base) % m;
            }
            base = (base * base) % m;
            e >>= 1;
        }
        acc
    }
}

impl std::ops::Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, other: Self) -> Self {
        GaussInt::new(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )
    }
}

impl std::ops::Add for GaussInt {
    type Output = GaussInt;
    fn add(self, other: Self) -> Self {
        GaussInt::new(self.re + other.re, self.im + other.im)
    }
}

impl std::ops::Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, other: Self) -> Self {
        GaussInt::new(self.re - other.re, self.im - other.im)
    }
}

impl std::ops::Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> Self {
        GaussInt::new(-self.re, -self.im)
    }
}

impl std::ops::Rem for GaussInt {
    type Output = GaussInt;
    fn rem(self, m: Self) -> Self {
        self.div_rem(m).1
    }
}

impl std::fmt::Display for GaussInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im == 0 {
            write!(f, "{}", self.re)
        } else if self.im > 0 {
            write!(f, "{}+{}i", self.re, self.im)
        } else {
            write!(f, "{}{}i", self.re, self.im)
        }
    }
}

/// Value of a quartic residue symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuarticValue {
    Zero,
    One,
    MinusOne,
    I,
    MinusI,
}

impl QuarticValue {
    pub fn from_unit(g: GaussInt) -> Option<QuarticValue> {
        use QuarticValue::*;
        match (g.re, g.im) {
            (1, 0) => Some(One),
            (-1, 0) => Some(MinusOne),
            (0, 1) => Some(I),
            (0, -1) => Some(MinusI),
            _ => None,
        }
    }

    pub fn pow(self, e: u32) -> QuarticValue {
        (0..e).fold(QuarticValue::One, |acc, _| acc * self)
    }

    pub fn square(self) -> i32 {
        match self {
            QuarticValue::Zero => 0,
            QuarticValue::One | QuarticValue::MinusOne => 1,
            QuarticValue::I | QuarticValue::MinusI => -1,
        }
    }

    pub fn is_real(self) -> bool {
        matches!(
            self,
            QuarticValue::Zero | QuarticValue::One | QuarticValue::MinusOne
        )
    }

    /// +1 or -1 for the real nonzero values.
    pub fn as_sign(self) -> Option<i32> {
        match self {
            QuarticValue::One => Some(1),
            QuarticValue::MinusOne => Some(-1),
            _ => None,
        }
    }
}

impl std::ops::Mul for QuarticValue {
    type Output = QuarticValue;
    fn mul(self, other: QuarticValue) -> QuarticValue {
        use QuarticValue::*;
        if self == Zero || other == Zero {
            return Zero;
        }
        let to_g = |v: QuarticValue| match v {
            One => ONE,
            MinusOne => GaussInt::new(-1, 0),
            I => GaussInt::new(0, 1),
            MinusI => GaussInt::new(0, -1),
            Zero => unreachable!(),
        };
        QuarticValue::from_unit(to_g(self) * to_g(other)).unwrap()
    }
}

impl std::fmt::Display for QuarticValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            QuarticValue::Zero => "0",
            QuarticValue::One => "1",
            QuarticValue::MinusOne => "-1",
            QuarticValue::I => "i",
            QuarticValue::MinusI => "-i",
        };
        write!(f, "{s}")
    }
}

/// Finds a Gaussian prime above the rational prime p = 1 mod 4, primary form.
/// With `positive_im` the one with positive imaginary part is returned (there
/// are exactly two primary primes above p, conjugate to each other).
pub fn primary_prime_above(p: u64, positive_im: bool) -> Result<GaussInt> {
    if p % 4 != 1 || !is_prime_u64(p) {
        return Err(contract(format!("{p} is not a prime = 1 mod 4")));
    }
    // square root of -1 mod p via a quadratic non-residue
    let g = (2..p)
        .find(|&g| jacobi(g as i128, p as i128).unwrap() == -1)
        .expect("non-residue exists");
    let mut s = 1u128;
    let mut base = g as u128;
    let mut e = (p - 1) / 4;
    while e > 0 {
        if e & 1 == 1 {
            s = s * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    debug_assert_eq!(s * s % p as u128, (p - 1) as u128);
    let lambda = GaussInt::new(p as i128, 0).gcd(GaussInt::new(s as i128, 1));
    debug_assert_eq!(lambda.norm(), p as i128);
    let (_, primary) = lambda.primary_associate().expect("split prime is odd");
    // primary and its conjugate are the two primary primes above p
    debug_assert!(primary.conj().is_primary());
    let want_pos = positive_im;
    if (primary.im > 0) == want_pos {
        Ok(primary)
    } else {
        Ok(primary.conj())
    }
}

/// Factors theta (coprime to 1+i) as unit * product of primary primes.
/// Primes are repeated with multiplicity and sorted by (norm, re, im).
pub fn primary_factorization(theta: GaussInt) -> Result<(GaussInt, Vec<GaussInt>)> {
    if theta.is_zero() {
        return Err(contract("primary factorization of zero"));
    }
    if GaussInt::new(1, 1).divides(theta) {
        return Err(contract("primary factorization: argument divisible by 1+i"));
    }
    let n = theta.norm();
    if n > u64::MAX as i128 {
        return Err(Error::ResourceExhausted(
            "primary_factorization: norm exceeds trial-division range".into(),
        ));
    }
    let mut rem = theta;
    let mut factors = Vec::new();
    for (p, e) in factor_u64(n as u64) {
        debug_assert!(p % 2 == 1);
        if p % 4 == 1 {
            let lambda = primary_prime_above(p, true)?;
            for cand in [lambda, lambda.conj()] {
                let mut k = 0;
                while cand.divides(rem) {
                    rem = rem.div_exact(cand);
                    factors.push(cand);
                    k += 1;
                }
                debug_assert!(k <= e);
            }
        } else {
            // inert prime; its primary associate is -p
            debug_assert_eq!(e % 2, 0, "inert prime with odd norm valuation");
            let prim = GaussInt::new(-(p as i128), 0);
            debug_assert!(prim.is_primary());
            for _ in 0..e / 2 {
                rem = rem.div_exact(GaussInt::new(p as i128, 0));
                factors.push(prim);
            }
        }
    }
    if !rem.is_unit() {
        return Err(Error::ResourceExhausted(
            "primary_factorization: incomplete factorization".into(),
        ));
    }
    factors.sort_by_key(|g| (g.norm(), g.re, g.im));
    // theta = unit * prod(factors); the .div_exact by primary associates above
    // accumulated the unit into rem only partially, so recompute it exactly.
    let mut prod = ONE;
    for f in &factors {
        prod = prod * *f;
    }
    let unit = theta.div_exact(prod);
    debug_assert!(unit.is_unit());
    debug_assert!(prod * unit == theta);
    Ok((unit, factors))
}

/// General Legendre symbol (alpha / lambda) over Z[i], extended
/// multiplicatively over the primary factorization of lambda.
pub fn legendre_gauss(alpha: GaussInt, lambda: GaussInt) -> Result<i32> {
    let (_, factors) = primary_factorization(lambda)?;
    let mut acc = 1i32;
    for l in factors {
        let s = legendre_gauss_prime(alpha, l);
        if s == 0 {
            return Ok(0);
        }
        acc *= s;
    }
    Ok(acc)
}

fn legendre_gauss_prime(alpha: GaussInt, lambda: GaussInt) -> i32 {
    let n = lambda.norm();
    debug_assert!(n % 2 == 1);
    if lambda.divides(alpha) {
        return 0;
    }
    let r = alpha.modpow(((n - 1) / 2) as u64, lambda);
    if lambda.divides(r - ONE) {
        1
    } else {
        debug_assert!(lambda.divides(r + ONE));
        -1
    }
}

/// Quartic residue symbol (alpha / lambda)_4, multiplicative over the primary
/// factorization of lambda.
pub fn quartic_symbol(alpha: GaussInt, lambda: GaussInt) -> Result<QuarticValue> {
    let (_, factors) = primary_factorization(lambda)?;
    let mut acc = QuarticValue::One;
    for l in factors {
        let s = quartic_symbol_prime(alpha, l);
        if s == QuarticValue::Zero {
            return Ok(QuarticValue::Zero);
        }
        acc = acc * s;
    }
    Ok(acc)
}

fn quartic_symbol_prime(alpha: GaussInt, lambda: GaussInt) -> QuarticValue {
    let n = lambda.norm();
    debug_assert_eq!((n - 1).rem_euclid(4), 0);
    if lambda.divides(alpha) {
        return QuarticValue::Zero;
    }
    let r = alpha.modpow(((n - 1) / 4) as u64, lambda);
    for (cand, val) in [
        (ONE, QuarticValue::One),
        (GaussInt::new(-1, 0), QuarticValue::MinusOne),
        (GaussInt::new(0, 1), QuarticValue::I),
        (GaussInt::new(0, -1), QuarticValue::MinusI),
    ] {
        if lambda.divides(r - cand) {
            return val;
        }
    }
    unreachable!("alpha^((N-1)/4) is a fourth root of unity mod lambda")
}

/// Product of (q / lambda_p)_4 over p | d with multiplicity, computed through
/// the primary prime above p with positive imaginary part. No condition on
/// the quadratic residues is imposed, so the value may be imaginary.
pub fn quartic_symbol_rational(q: i128, d: u64) -> Result<QuarticValue> {
    let mut acc = QuarticValue::One;
    for (p, e) in factor_u64(d) {
        if p % 4 != 1 {
            return Err(contract(format!(
                "quartic symbol: prime factor {p} of {d} is not 1 mod 4"
            )));
        }
        let lambda = primary_prime_above(p, true)?;
        let s = quartic_symbol_prime(GaussInt::new(q, 0), lambda);
        acc = acc * s.pow(e);
    }
    Ok(acc)
}

/// Rational quartic residue symbol (q / d)_4 in {-1, +1}: requires every
/// prime p | d to satisfy p = 1 mod 4 and (q/p) = 1, which makes the value
/// independent of the choice of prime above p.
pub fn rational_quartic(q: i128, d: u64) -> Result<i32> {
    if d == 0 {
        return Err(contract("rational quartic symbol: d must be positive"));
    }
    for (p, _) in factor_u64(d) {
        if p % 4 != 1 {
            return Err(contract(format!(
                "rational quartic symbol: prime factor {p} of {d} is not 1 mod 4"
            )));
        }
        if jacobi(q, p as i128)? != 1 {
            return Err(contract(format!(
                "rational quartic symbol: ({q}/{p}) != 1, symbol undefined"
            )));
        }
    }
    let v = quartic_symbol_rational(q, d)?;
    v.as_sign().ok_or_else(|| {
        contract(format!(
            "rational quartic symbol ({q}/{d}) evaluated to non-real {v}"
        ))
    })
}
