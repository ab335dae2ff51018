//! Counting: the u_k constants, exact counts of symmetric GF(2) matrices by
//! rank, predicted densities for the twist family, and empirical sweeps that
//! put the predictions next to actual counts at finite x.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::arith::{aj, jacobi, rational_quartic, FactoredSquarefree};
use crate::cassels::sha_predicate;
use crate::error::{contract, Result};
use crate::f2linalg::{BitMatrix, BitVec};
use crate::family::{admissible_n, base_selmer_dim, Criterion, TwistTriple};

fn pow2_rational(e: i64) -> BigRational {
    let two = BigInt::from(2);
    if e >= 0 {
        BigRational::from_integer(two.pow(e as u32))
    } else {
        BigRational::new(BigInt::one(), two.pow((-e) as u32))
    }
}

/// u_k = prod_{i=1}^{floor(k/2)} (1 - 2^(1-2i)); u_0 = 1 by convention.
pub fn u_k(k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for i in 1..=(k / 2) as i64 {
        acc *= BigRational::one() - pow2_rational(1 - 2 * i);
    }
    acc
}

/// Number of k x k symmetric matrices over GF(2) of rank r:
/// u_{r+1} 2^C(r+1,2) prod_{l=0}^{k-r-1} (2^k - 2^l)/(2^(k-r) - 2^l).
pub fn count_symmetric_rank(k: u32, r: u32) -> Result<BigUint> {
    if r > k {
        return Err(contract(format!("rank {r} exceeds size {k}")));
    }
    let mut acc = u_k(r + 1) * pow2_rational((r as i64 + 1) * r as i64 / 2);
    for l in 0..(k - r) as i64 {
        let num = pow2_rational(k as i64) - pow2_rational(l);
        let den = pow2_rational((k - r) as i64) - pow2_rational(l);
        acc *= num / den;
    }
    if !acc.is_integer() || acc.is_negative() {
        return Err(contract(format!(
            "matrix count formula gave non-integer {acc} at (k, r) = ({k}, {r})"
        )));
    }
    Ok(acc.to_integer().to_biguint().unwrap())
}

/// Exhaustive count over all 2^(k(k+1)/2) symmetric matrices, k <= 5.
pub fn count_symmetric_rank_bruteforce(k: u32, r: u32) -> Result<u64> {
    if k > 5 {
        return Err(contract("brute-force matrix count supports k <= 5"));
    }
    if r > k {
        return Err(contract(format!("rank {r} exceeds size {k}")));
    }
    let k = k as usize;
    let bits = k * (k + 1) / 2;
    let mut count = 0u64;
    for mask in 0u64..1 << bits {
        let mut m = BitMatrix::zeros(k, k);
        let mut idx = 0;
        for i in 0..k {
            for j in i..k {
                let bit = mask >> idx & 1 == 1;
                m.set(i, j, bit);
                m.set(j, i, bit);
                idx += 1;
            }
        }
        if m.rank() == r as usize {
            count += 1;
        }
    }
    Ok(count)
}

/// Predicted density of twists with rank 0 and Sha[2^inf] = (Z/2)^2 among all
/// square-free n <= x with k prime factors:
/// 2^(-k k' - k - 2) (u_k + (1/2 - 2^-k) u_{k-1}).
pub fn predicted_density(k: u32, kprime: u32) -> BigRational {
    debug_assert!(k >= 1);
    let factor = pow2_rational(-((k * kprime + k + 2) as i64));
    let inner = u_k(k) + (pow2_rational(-1) - pow2_rational(-(k as i64))) * u_k(k - 1);
    factor * inner
}

/// Smallest-prime-factor sieve with square-free factorization lookups.
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u64) -> Self {
        let limit = limit as usize;
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                for j in (i..=limit).step_by(i) {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                }
            }
        }
        SpfSieve { spf }
    }

    /// Prime factors of a square-free n, or None when n is not square-free.
    pub fn squarefree_factors(&self, n: u64) -> Option<Vec<u64>> {
        let mut n = n as usize;
        let mut out = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            n /= p;
            if n.is_multiple_of(p) {
                return None;
            }
            out.push(p as u64);
        }
        out.sort_unstable();
        Some(out)
    }

    pub fn factored_squarefree(&self, n: u64) -> Option<FactoredSquarefree> {
        self.squarefree_factors(n)
            .map(|ps| FactoredSquarefree::from_sieve(n, ps))
    }
}

/// Result of a density sweep at finite x.
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub x: u64,
    pub k: usize,
    pub kprime: usize,
    pub criterion: Criterion,
    /// all square-free n <= x with k prime factors
    pub c_count: u64,
    /// admissible subset
    pub q_count: u64,
    /// admissible subset with rank 0 and Sha[2^inf] = (Z/2)^2
    pub p_count: u64,
    pub ratio: f64,
    pub predicted: BigRational,
}

impl SweepReport {
    pub fn predicted_f64(&self) -> f64 {
        self.predicted.to_f64().unwrap_or(f64::NAN)
    }
}

/// Sweep all square-free n <= x with exactly k prime factors, counting the
/// admissible ones and those satisfying the rank-zero/Sha predicate, next to
/// the predicted asymptotic density. Convergence is log log x slow, so the
/// ratio is reported, not enforced.
pub fn sweep(t: &TwistTriple, x: u64, k: usize, criterion: Criterion) -> Result<SweepReport> {
    if base_selmer_dim(t) != 2 {
        return Err(contract(format!(
            "sweep requires a base curve with 2-Selmer dimension 2, got {}",
            base_selmer_dim(t)
        )));
    }
    if k == 0 {
        return Err(contract("sweep requires k >= 1"));
    }
    let sieve = SpfSieve::new(x);
    let mut c_count = 0u64;
    let mut admissible: Vec<FactoredSquarefree> = Vec::new();
    for n in 2..=x {
        if let Some(f) = sieve.factored_squarefree(n) {
            if f.num_primes() == k {
                c_count += 1;
                if admissible_n(&f, t, criterion) {
                    admissible.push(f);
                }
            }
        }
    }
    let q_count = admissible.len() as u64;
    let verdicts: Result<Vec<bool>> = admissible
        .par_iter()
        .map(|f| sha_predicate(t, f, criterion))
        .collect();
    let p_count = verdicts?.into_iter().filter(|&b| b).count() as u64;
    Ok(SweepReport {
        x,
        k,
        kprime: t.kprime(),
        criterion,
        c_count,
        q_count,
        p_count,
        ratio: p_count as f64 / c_count as f64,
        predicted: predicted_density(k as u32, t.kprime() as u32),
    })
}

/// Result of a residue-constrained count at finite x, with the two candidate
/// closed-form constants reported side by side.
#[derive(Debug, Clone)]
pub struct CkReport {
    pub x: u64,
    pub k: usize,
    pub kprime: usize,
    pub count: u64,
    pub c_count: u64,
    pub ratio: f64,
    /// 2^-(3k + k' + 1 + C(k,2))
    pub predicted_statement: BigRational,
    /// 2^-(k'k + 3k + 1 + C(k,2))
    pub predicted_proof: BigRational,
}

/// Count n = p_1 ... p_k <= x with p_1 < ... < p_k such that p_l = alpha_l
/// mod 16, the symbol matrix of n matches B off the diagonal, every p_l is a
/// residue modulo the primes of abc, and the quartic symbols of the kernel
/// divisor pair multiply to -1.
pub fn enumerate_ck_alpha_b(
    t: &TwistTriple,
    x: u64,
    alpha: &[u64],
    b: &BitMatrix,
) -> Result<CkReport> {
    let k = alpha.len();
    if k < 2 {
        return Err(contract("alpha must have length k >= 2"));
    }
    if b.rows() != k || b.cols() != k || !b.is_symmetric() {
        return Err(contract("B must be a symmetric k x k matrix"));
    }
    if alpha.iter().any(|&a| ![1, 5, 9, 13].contains(&a)) {
        return Err(contract("alpha entries must lie in {1, 5, 9, 13}"));
    }
    if alpha.iter().product::<u64>() % 8 != 1 {
        return Err(contract("product of alpha entries must be 1 mod 8"));
    }
    if b.rank() != k - 2 {
        return Err(contract("B must have rank k - 2"));
    }
    let z0 = BitVec::ones(k);
    if !b.mul_vec(&z0).is_zero() {
        return Err(contract("B must annihilate the all-ones vector"));
    }
    let z = b
        .kernel_elements()
        .into_iter()
        .find(|v| !v.is_zero() && v.count_ones() != k && v.get(0))
        .ok_or_else(|| contract("no normalized kernel vector"))?;

    let sieve = SpfSieve::new(x);
    let mut c_count = 0u64;
    let mut count = 0u64;
    'next: for n in 2..=x {
        let Some(ps) = sieve.squarefree_factors(n) else {
            continue;
        };
        if ps.len() != k {
            continue;
        }
        c_count += 1;
        for (l, &p) in ps.iter().enumerate() {
            if p % 16 != alpha[l] {
                continue 'next;
            }
        }
        for l in 0..k {
            for j in l + 1..k {
                if (aj(ps[j] as i128, ps[l] as i128) == 1) != b.get(l, j) {
                    continue 'next;
                }
            }
        }
        for &p in &ps {
            for &q in t.qprimes() {
                if jacobi(p as i128, q as i128)? != 1 {
                    continue 'next;
                }
            }
        }
        let mut d = 1u64;
        let mut dp = 1u64;
        for (l, &p) in ps.iter().enumerate() {
            if z.get(l) {
                d *= p;
            } else {
                dp *= p;
            }
        }
        if rational_quartic(dp as i128, d)? * rational_quartic(d as i128, dp)? == -1 {
            count += 1;
        }
    }
    let c2 = (k as i64) * (k as i64 - 1) / 2;
    let kp = t.kprime() as i64;
    Ok(CkReport {
        x,
        k,
        kprime: t.kprime(),
        count,
        c_count,
        ratio: count as f64 / c_count as f64,
        predicted_statement: pow2_rational(-(3 * k as i64 + kp + 1 + c2)),
        predicted_proof: pow2_rational(-(kp * k as i64 + 3 * k as i64 + 1 + c2)),
    })
}
