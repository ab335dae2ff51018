//! Exact integer arithmetic and residue symbols.
//!
//! Everything here is deliberately elementary: trial-division factoring at
//! desk scale, the Jacobi symbol by reciprocity, the Hilbert symbol by the
//! closed valuation formulas, and the Gaussian-integer symbols in [`gauss`].

mod gauss;

pub use gauss::{
    legendre_gauss, primary_factorization, primary_prime_above, quartic_symbol,
    quartic_symbol_rational, rational_quartic, GaussInt, QuarticValue,
};

use crate::error::{contract, Result};

/// A place of Q: a finite prime or the real place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(u64),
    Infinity,
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn isqrt_i128(n: i128) -> i128 {
    assert!(n >= 0);
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i128 + 2;
    while x * x > n {
        x -= 1;
    }
    x
}

pub fn is_square_i128(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt_i128(n);
    r * r == n
}

/// 2-adic valuation; v(0) is not defined and panics.
pub fn v2_i128(n: i128) -> u32 {
    assert!(n != 0);
    n.trailing_zeros()
}

pub fn vp_i128(mut n: i128, p: i128) -> u32 {
    assert!(n != 0 && p >= 2);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Trial-division factorization, smallest prime first.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0);
    let mut out = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            out.push((p, e));
        }
    };
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        push(p, e);
    }
    // wheel mod 30
    let inc = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut p = 7u64;
    let mut i = 0;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        push(p, e);
        p += inc[i];
        i = (i + 1) % 8;
    }
    if n > 1 {
        push(n, 1);
    }
    out
}

pub fn is_prime_u64(n: u64) -> bool {
    n > 1 && matches!(factor_u64(n).as_slice(), [(_, 1)])
}

/// Square-free part of a nonzero integer (same sign).
pub fn squarefree_part(n: i128) -> i128 {
    assert!(n != 0);
    let sign = n.signum();
    let mut out: i128 = 1;
    for (p, e) in factor_u64(n.unsigned_abs() as u64) {
        if e % 2 == 1 {
            out *= p as i128;
        }
    }
    sign * out
}

/// A positive square-free integer together with its sorted prime factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredSquarefree {
    value: u64,
    primes: Vec<u64>,
}

impl FactoredSquarefree {
    pub fn new(value: u64) -> Result<Self> {
        if value == 0 {
            return Err(contract("square-free integer must be positive"));
        }
        let f = factor_u64(value);
        if f.iter().any(|&(_, e)| e > 1) {
            return Err(contract(format!("{value} is not square-free")));
        }
        Ok(FactoredSquarefree {
            value,
            primes: f.into_iter().map(|(p, _)| p).collect(),
        })
    }

    /// Build from known factors (checked).
    pub fn from_primes(primes: &[u64]) -> Result<Self> {
        let mut sorted = primes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != primes.len() {
            return Err(contract("prime factors must be distinct"));
        }
        if let Some(&p) = sorted.iter().find(|&&p| !is_prime_u64(p)) {
            return Err(contract(format!("{p} is not prime")));
        }
        let value = sorted.iter().try_fold(1u64, |acc, &p| acc.checked_mul(p));
        match value {
            Some(v) => Ok(FactoredSquarefree {
                value: v,
                primes: sorted,
            }),
            None => Err(crate::error::Error::Overflow(
                "FactoredSquarefree::from_primes",
            )),
        }
    }

    /// Trusted constructor for callers that already hold a verified
    /// factorization (the sieve).
    pub(crate) fn from_sieve(value: u64, primes: Vec<u64>) -> Self {
        debug_assert_eq!(primes.iter().product::<u64>(), value);
        FactoredSquarefree { value, primes }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn num_primes(&self) -> usize {
        self.primes.len()
    }

    pub fn is_odd(&self) -> bool {
        self.value % 2 == 1
    }
}

fn jacobi_unchecked(mut m: i128, mut d: i128) -> i32 {
    debug_assert!(d > 0 && d % 2 == 1);
    m = m.rem_euclid(d);
    let mut sign = 1i32;
    while m != 0 {
        while m % 2 == 0 {
            m /= 2;
            if d % 8 == 3 || d % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut m, &mut d);
        if m % 4 == 3 && d % 4 == 3 {
            sign = -sign;
        }
        m %= d;
    }
    if d == 1 {
        sign
    } else {
        0
    }
}

/// Jacobi symbol (m/d) for positive odd d.
pub fn jacobi(m: i128, d: i128) -> Result<i32> {
    if d <= 0 || d % 2 == 0 {
        return Err(contract(format!(
            "jacobi: modulus {d} must be positive odd"
        )));
    }
    Ok(jacobi_unchecked(m, d))
}

/// Additive Jacobi symbol [m/d]: 1 when (m/d) = -1, 0 when (m/d) = 1.
pub fn additive_jacobi(m: i128, d: i128) -> Result<u8> {
    match jacobi(m, d)? {
        1 => Ok(0),
        -1 => Ok(1),
        _ => Err(contract(format!(
            "additive jacobi undefined: gcd({m}, {d}) > 1"
        ))),
    }
}

/// Internal shorthand used where coprimality is already established.
pub(crate) fn aj(m: i128, d: i128) -> u8 {
    let j = jacobi_unchecked(m, d);
    debug_assert!(j != 0, "additive symbol of non-unit: ({m}/{d})");
    u8::from(j == -1)
}

/// Splits n = 2^e * u with u odd.
fn split_two(n: i128) -> (u32, i128) {
    let e = v2_i128(n);
    (e, n >> e)
}

/// Hilbert symbol (a, b)_place over the completion of Q.
pub fn hilbert(a: i128, b: i128, place: Place) -> Result<i32> {
    if a == 0 || b == 0 {
        return Err(contract("hilbert: arguments must be nonzero"));
    }
    Ok(match place {
        Place::Infinity => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
        Place::Finite(2) => {
            let (alpha, u) = split_two(a);
            let (beta, v) = split_two(b);
            // (-1)^{eps(u)eps(v) + alpha*omega(v) + beta*omega(u)}
            let eps = |x: i128| ((x - 1) / 2).rem_euclid(2) as u32;
            let omega = |x: i128| ((x * x - 1) / 8).rem_euclid(2) as u32;
            let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Finite(p) => {
            if p % 2 == 0 || !is_prime_u64(p) {
                return Err(contract(format!("hilbert: {p} is not an odd prime")));
            }
            let p = p as i128;
            let alpha = vp_i128(a, p);
            let beta = vp_i128(b, p);
            let u = a / p.pow(alpha);
            let v = b / p.pow(beta);
            let mut r = 1i32;
            if beta % 2 == 1 {
                r *= jacobi_unchecked(u, p);
            }
            if alpha % 2 == 1 {
                r *= jacobi_unchecked(v, p);
            }
            if alpha % 2 == 1 && beta % 2 == 1 && (p - 1) / 2 % 2 == 1 {
                r = -r;
            }
            r
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(1, 15).unwrap(), 1);
        // Euler criterion oracle: 2^3 = 8 = 1 mod 7
        assert_eq!(jacobi(2, 7).unwrap(), 1);
        // squares mod 5 are {1, 4}
        assert_eq!(jacobi(3, 5).unwrap(), -1);
        assert_eq!(jacobi(15, 9).unwrap(), 0);
        assert!(jacobi(3, 4).is_err());
        assert!(jacobi(3, -5).is_err());
    }

    #[test]
    fn additive_jacobi_examples() {
        assert_eq!(additive_jacobi(2, 7).unwrap(), 0);
        assert_eq!(additive_jacobi(3, 5).unwrap(), 1);
        for d in (1i128..50).step_by(2) {
            assert_eq!(additive_jacobi(1, d).unwrap(), 0);
        }
        assert!(additive_jacobi(15, 5).is_err());
    }

    #[test]
    fn jacobi_euler_criterion_oracle() {
        // Independent check against a^((p-1)/2) mod p for odd primes p < 200.
        for p in (3u64..200).filter(|&p| is_prime_u64(p)) {
            for a in 1..p {
                let mut pow = 1u64;
                for _ in 0..(p - 1) / 2 {
                    pow = pow * a % p;
                }
                let expected = if pow == 1 { 1 } else { -1 };
                assert_eq!(jacobi(a as i128, p as i128).unwrap(), expected, "({a}/{p})");
            }
        }
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert(-1, -1, Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert(-1, -1, Place::Finite(2)).unwrap(), -1);
        for (a, p) in [(3, 3), (-7, 5), (10, 7)] {
            assert_eq!(hilbert(a, 1, Place::Finite(p)).unwrap(), 1);
            assert_eq!(hilbert(a, 4, Place::Finite(p)).unwrap(), 1);
        }
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor_u64(1), vec![]);
        assert_eq!(factor_u64(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factor_u64(1241), vec![(17, 1), (73, 1)]);
        assert!(FactoredSquarefree::new(12).is_err());
        let f = FactoredSquarefree::new(1241).unwrap();
        assert_eq!(f.primes(), &[17, 73]);
    }

    proptest! {
        #[test]
        fn jacobi_reciprocity(m in 1i128..500, d in 1i128..500) {
            let (m, d) = (2 * m + 1, 2 * d + 1);
            prop_assume!(gcd_i128(m, d) == 1);
            let lhs = jacobi(m, d).unwrap() * jacobi(d, m).unwrap();
            let rhs = if (m - 1) / 2 % 2 == 1 && (d - 1) / 2 % 2 == 1 { -1 } else { 1 };
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn hilbert_bilinearity(a in prop::sample::select(vec![-30i128, -11, -5, -2, -1, 1, 2, 3, 7, 15, 22]),
                               b1 in prop::sample::select(vec![-21i128, -10, -3, -1, 2, 5, 6, 13]),
                               b2 in prop::sample::select(vec![-14i128, -6, -2, 1, 3, 10, 11, 30])) {
            for place in [Place::Finite(2), Place::Finite(3), Place::Finite(5), Place::Finite(7), Place::Infinity] {
                let lhs = hilbert(a, b1 * b2, place).unwrap();
                let rhs = hilbert(a, b1, place).unwrap() * hilbert(a, b2, place).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn hilbert_product_formula(a in -200i128..200, b in -200i128..200) {
            prop_assume!(a != 0 && b != 0);
            let mut places = vec![Place::Finite(2), Place::Infinity];
            for (p, _) in factor_u64((a * b).unsigned_abs() as u64) {
                if p != 2 {
                    places.push(Place::Finite(p));
                }
            }
            let prod: i32 = places.iter().map(|&pl| hilbert(a, b, pl).unwrap()).product();
            prop_assert_eq!(prod, 1);
        }
    }
}
