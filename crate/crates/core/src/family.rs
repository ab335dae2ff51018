//! The twist family parameters: triples (a, b, c) with a^2 + b^2 = 2c^2 and
//! the admissibility predicates that the twist parameter n must satisfy.

use crate::arith::{factor_u64, gcd_i128, is_prime_u64, jacobi, FactoredSquarefree};
use crate::error::{contract, Result};
use crate::selmer;

/// A positive primitive solution of a^2 + b^2 = 2c^2.
///
/// All such triples are (|4k^2-4k-1|, |4k^2+4k-1|, |4k^2+1|) for an integer k.
/// The base curve attached to the triple is y^2 = x(x - a^2)(x + b^2); its
/// parameters (a^2, b^2, c^2) are the odd squares handed to the descent layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistTriple {
    a: u64,
    b: u64,
    c: u64,
    qprimes: Vec<u64>,
}

impl TwistTriple {
    pub fn new(a: u64, b: u64, c: u64) -> Result<Self> {
        if a == 0 || b == 0 || c == 0 {
            return Err(contract("triple entries must be positive"));
        }
        let (a2, b2, c2) = (
            (a as i128) * (a as i128),
            (b as i128) * (b as i128),
            (c as i128) * (c as i128),
        );
        if a2 + b2 != 2 * c2 {
            return Err(contract(format!("{a}^2 + {b}^2 != 2*{c}^2")));
        }
        if gcd_i128(a as i128, b as i128) != 1 {
            return Err(contract("triple must be primitive: gcd(a, b) = 1"));
        }
        debug_assert!(a % 2 == 1 && b % 2 == 1 && c % 2 == 1);
        let mut qprimes: Vec<u64> = Vec::new();
        for v in [a, b, c] {
            qprimes.extend(factor_u64(v).into_iter().map(|(p, _)| p));
        }
        qprimes.sort_unstable();
        qprimes.dedup();
        Ok(TwistTriple { a, b, c, qprimes })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    /// The distinct primes of a*b*c, ascending.
    pub fn qprimes(&self) -> &[u64] {
        &self.qprimes
    }

    /// k' = number of distinct prime factors of abc.
    pub fn kprime(&self) -> usize {
        self.qprimes.len()
    }

    pub fn abc(&self) -> i128 {
        self.a as i128 * self.b as i128 * self.c as i128
    }
}

impl std::fmt::Display for TwistTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.c)
    }
}

/// The triple (|4k^2-4k-1|, |4k^2+4k-1|, |4k^2+1|).
///
/// ```
/// use quadtwist::family::triple_from_k;
/// assert_eq!(triple_from_k(2).to_string(), "7,23,17");
/// assert_eq!(triple_from_k(0).to_string(), "1,1,1");
/// ```
pub fn triple_from_k(k: i64) -> TwistTriple {
    let k = k as i128;
    let a = (4 * k * k - 4 * k - 1).unsigned_abs() as u64;
    let b = (4 * k * k + 4 * k - 1).unsigned_abs() as u64;
    let c = (4 * k * k + 1).unsigned_abs() as u64;
    TwistTriple::new(a, b, c).expect("parametrized triples are primitive solutions")
}

/// Full 2-Selmer dimension of the base curve y^2 = x(x - a^2)(x + b^2):
/// 2 (torsion) plus the kernel dimension of the descent matrix.
pub fn base_selmer_dim(t: &TwistTriple) -> usize {
    let m1 = selmer::build_m1(&selmer::CurveParams::from_triple(t));
    2 + m1.kernel_basis().len()
}

/// Per-prime admissibility: p = +-1 mod 8 and p a quadratic residue
/// modulo every prime divisor of abc.
pub fn admissible_t1(p: u64, t: &TwistTriple) -> Result<bool> {
    check_prime_input(p, t)?;
    if p % 8 != 1 && p % 8 != 7 {
        return Ok(false);
    }
    Ok(t.qprimes()
        .iter()
        .all(|&q| jacobi(p as i128, q as i128).unwrap() == 1))
}

/// Per-prime admissibility: p a quadratic residue modulo 4q for every prime
/// q | abc, i.e. p = 1 mod 4 and (p/q) = 1 for all q.
pub fn admissible_t2(p: u64, t: &TwistTriple) -> Result<bool> {
    check_prime_input(p, t)?;
    if p % 4 != 1 {
        return Ok(false);
    }
    Ok(t.qprimes()
        .iter()
        .all(|&q| jacobi(p as i128, q as i128).unwrap() == 1))
}

fn check_prime_input(p: u64, t: &TwistTriple) -> Result<()> {
    if !is_prime_u64(p) || p == 2 {
        return Err(contract(format!("{p} is not an odd prime")));
    }
    if t.abc() % p as i128 == 0 {
        return Err(contract(format!("prime {p} divides abc")));
    }
    Ok(())
}

/// Which theorem-style admissibility to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    T1,
    T2,
}

impl Criterion {
    pub fn from_index(i: u8) -> Result<Criterion> {
        match i {
            1 => Ok(Criterion::T1),
            2 => Ok(Criterion::T2),
            _ => Err(contract(format!(
                "theorem selector must be 1 or 2, got {i}"
            ))),
        }
    }
}

/// n is admissible when n = 1 mod 8, gcd(n, 2abc) = 1 and every prime factor
/// passes the per-prime predicate for the chosen criterion.
pub fn admissible_n(n: &FactoredSquarefree, t: &TwistTriple, criterion: Criterion) -> bool {
    if n.value() % 8 != 1 {
        return false;
    }
    if n.primes().iter().any(|&p| t.abc() % p as i128 == 0) {
        return false;
    }
    n.primes().iter().all(|&p| match criterion {
        Criterion::T1 => admissible_t1(p, t).unwrap(),
        Criterion::T2 => admissible_t2(p, t).unwrap(),
    })
}
