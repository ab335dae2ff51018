//! Closed-form Cassels pairing values on the pure 2-Selmer group and the
//! rank-zero / Sha = (Z/2)^2 predicate.
//!
//! When the pure 2-Selmer group has dimension two it is generated by two
//! explicit classes, and the pairing of the generators collapses to residue
//! symbols of a norm-equation witness. Non-degeneracy of the pairing (value
//! -1) pins the group down to the image of torsion, which combined with the
//! torsion computation forces rank 0 and Sha[2^inf] = (Z/2)^2.

use crate::arith::{aj, jacobi, FactoredSquarefree};
use crate::error::{contract, Result};
use crate::f2linalg::BitVec;
use crate::family::{admissible_n, base_selmer_dim, Criterion, TwistTriple};
use crate::genus::{
    distinguished_odd_part, h4, solve_norm_equation, solve_norm_equation_skipping, NormSolution,
};
use crate::selmer::{build_a_matrix, SelmerElement};

/// Which closed-form branch produced a pairing value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    T1DOne,
    T1DMinusOne,
    T2RankKMinus2,
    T2RankKMinus1,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Branch::T1DOne => "t1, d = 1 mod 8",
            Branch::T1DMinusOne => "t1, d = -1 mod 8",
            Branch::T2RankKMinus2 => "t2, rank k-2",
            Branch::T2RankKMinus1 => "t2, rank k-1",
        };
        write!(f, "{s}")
    }
}

/// Pairing of the two generators: the single off-diagonal entry of the 2x2
/// pairing matrix, so the pairing is non-degenerate exactly when value = -1.
#[derive(Debug, Clone)]
pub struct PairingOutcome {
    pub value: i32,
    pub branch: Branch,
    pub witness: NormSolution,
}

fn check_common(t: &TwistTriple, n: &FactoredSquarefree, criterion: Criterion) -> Result<()> {
    if base_selmer_dim(t) != 2 {
        return Err(contract(format!(
            "base curve of ({t}) has 2-Selmer dimension {} != 2",
            base_selmer_dim(t)
        )));
    }
    if !admissible_n(n, t, criterion) {
        return Err(contract(format!(
            "n = {} is not admissible for the selected criterion",
            n.value()
        )));
    }
    Ok(())
}

fn kernel_divisor(n: &FactoredSquarefree, v: &BitVec) -> u64 {
    n.primes()
        .iter()
        .enumerate()
        .filter(|&(i, _)| v.get(i))
        .map(|(_, &p)| p)
        .product()
}

/// Generators of the pure 2-Selmer group under the first criterion:
/// (2, 2, 1) and (d, 1, d) with d cut out of the kernel of A + D_{-1}.
pub fn generators_t1(
    t: &TwistTriple,
    n: &FactoredSquarefree,
) -> Result<(SelmerElement, SelmerElement, u64)> {
    check_common(t, n, Criterion::T1)?;
    if h4(n)? != 1 {
        return Err(contract(format!("h4({}) != 1", n.value())));
    }
    let mut m = build_a_matrix(n);
    for (i, &p) in n.primes().iter().enumerate() {
        if aj(-1, p as i128) == 1 {
            let cur = m.get(i, i);
            m.set(i, i, !cur);
        }
    }
    let kernel = m.kernel_basis();
    if kernel.len() != 1 {
        return Err(contract(format!(
            "kernel of A + D_-1 has dimension {} != 1",
            kernel.len()
        )));
    }
    let d = kernel_divisor(n, &kernel[0]);
    debug_assert!(d > 1);
    let lam = SelmerElement::new(2, 2, 1).unwrap();
    let lam2 = SelmerElement::new(d as i128, 1, d as i128).unwrap();
    Ok((lam, lam2, d))
}

fn pairing_t1_with_witness(d: u64, sol: &NormSolution) -> i32 {
    let gamma = sol.gamma;
    match d % 8 {
        1 => jacobi(gamma, d as i128).unwrap(),
        7 => jacobi(gamma, d as i128).unwrap() * jacobi(-1, gamma).unwrap(),
        _ => unreachable!("d = +-1 mod 8 under the t1 conditions"),
    }
}

/// Cassels pairing of the t1 generators: solve alpha^2 + n beta^2 = 2 gamma^2
/// and read the value off gamma.
pub fn pairing_t1(t: &TwistTriple, n: &FactoredSquarefree) -> Result<PairingOutcome> {
    let (_, _, d) = generators_t1(t, n)?;
    let sol = solve_norm_equation(1, n.value(), 1)?;
    let branch = if d % 8 == 1 {
        Branch::T1DOne
    } else {
        Branch::T1DMinusOne
    };
    Ok(PairingOutcome {
        value: pairing_t1_with_witness(d, &sol),
        branch,
        witness: sol,
    })
}

/// Generator data for the second criterion.
#[derive(Debug, Clone)]
pub struct GeneratorsT2 {
    pub lambda: SelmerElement,
    pub lambda_prime: SelmerElement,
    pub d: u64,
    pub branch: Branch,
}

/// Generators under the second criterion, split by the rank of A:
/// rank k-2 gives (d, d, 1) and (-1, 1, -1); rank k-1 gives (2d, 2d, 1)
/// and (-1, 1, -1).
pub fn generators_t2(t: &TwistTriple, n: &FactoredSquarefree) -> Result<GeneratorsT2> {
    check_common(t, n, Criterion::T2)?;
    if h4(n)? != 1 {
        return Err(contract(format!("h4({}) != 1", n.value())));
    }
    let k = n.num_primes();
    let a = build_a_matrix(n);
    let rank = a.rank();
    let lam_prime = SelmerElement::new(-1, 1, -1).unwrap();
    if rank + 2 == k {
        let z = a
            .kernel_elements()
            .into_iter()
            .find(|v| !v.is_zero() && v.count_ones() != k && v.get(0))
            .ok_or_else(|| contract("no normalized kernel vector"))?;
        let d = kernel_divisor(n, &z);
        if d % 8 != 5 {
            return Err(contract(format!("rank k-2 divisor d = {d} is not 5 mod 8")));
        }
        cross_check_d(n, d)?;
        Ok(GeneratorsT2 {
            lambda: SelmerElement::new(d as i128, d as i128, 1).unwrap(),
            lambda_prime: lam_prime,
            d,
            branch: Branch::T2RankKMinus2,
        })
    } else if rank + 1 == k {
        let b = BitVec::from_bits(
            &n.primes()
                .iter()
                .map(|&p| aj(2, p as i128))
                .collect::<Vec<u8>>(),
        );
        let z = a
            .solve(&b)
            .ok_or_else(|| contract("A z = b must be solvable when h4 = 1"))?;
        let d = kernel_divisor(n, &z);
        cross_check_d(n, d)?;
        Ok(GeneratorsT2 {
            lambda: SelmerElement::new(2 * d as i128, 2 * d as i128, 1).unwrap(),
            lambda_prime: lam_prime,
            d,
            branch: Branch::T2RankKMinus1,
        })
    } else {
        Err(contract(format!(
            "rank A = {rank} is incompatible with h4 = 1"
        )))
    }
}

/// The kernel-vector divisor and the distinguished divisor describe the same
/// class: the odd part of d0 must be d or n/d.
fn cross_check_d(n: &FactoredSquarefree, d: u64) -> Result<()> {
    let odd = distinguished_odd_part(n)?;
    if odd != d && odd != n.value() / d {
        return Err(contract(format!(
            "kernel divisor {d} does not match distinguished odd part {odd}"
        )));
    }
    Ok(())
}

/// Transform a solution of d a^2 + d' b^2 = g^2 with odd alpha into one with
/// even alpha (both exist; the value is read off the even-alpha one).
fn make_alpha_even(sol: &NormSolution) -> NormSolution {
    if sol.alpha % 2 == 0 {
        return sol.clone();
    }
    let (d, dp) = (sol.d as i128, sol.dprime as i128);
    let (a, b, g) = (sol.alpha, sol.beta, sol.gamma);
    let na = (dp - d) * a - 2 * dp * b;
    let nb = (d - dp) * b - 2 * d * a;
    let ng = (d + dp) * g;
    let (mut na, mut nb, mut ng) = (na.abs(), nb.abs(), ng.abs());
    let g0 = crate::arith::gcd_i128(crate::arith::gcd_i128(na, nb), ng);
    na /= g0;
    nb /= g0;
    ng /= g0;
    let out = NormSolution {
        d: sol.d,
        dprime: sol.dprime,
        r: sol.r,
        alpha: na,
        beta: nb,
        gamma: ng,
    };
    debug_assert!(out.verify() && out.alpha % 2 == 0);
    out
}

fn pairing_t2_value(branch: Branch, d: u64, sol: &NormSolution) -> i32 {
    match branch {
        Branch::T2RankKMinus2 => -jacobi(-1, sol.gamma).unwrap(),
        Branch::T2RankKMinus1 => jacobi(-1, sol.gamma).unwrap() * jacobi(2, d as i128).unwrap(),
        _ => unreachable!(),
    }
}

/// Cassels pairing of the t2 generators. The rank k-2 branch solves
/// d alpha^2 + d' beta^2 = gamma^2 (alpha made even first); the rank k-1
/// branch solves d alpha^2 + d' beta^2 = 2 gamma^2.
pub fn pairing_t2(t: &TwistTriple, n: &FactoredSquarefree) -> Result<PairingOutcome> {
    pairing_t2_skipping(t, n, 0)
}

/// Same pairing computed from a later primitive solution of the norm
/// equation; the value must not depend on the witness.
pub fn pairing_t2_skipping(
    t: &TwistTriple,
    n: &FactoredSquarefree,
    skip: usize,
) -> Result<PairingOutcome> {
    let gens = generators_t2(t, n)?;
    let dp = n.value() / gens.d;
    let sol = match gens.branch {
        Branch::T2RankKMinus2 => {
            let sol = solve_norm_equation_skipping(gens.d, dp, 0, skip)?;
            make_alpha_even(&sol)
        }
        Branch::T2RankKMinus1 => solve_norm_equation_skipping(gens.d, dp, 1, skip)?,
        _ => unreachable!(),
    };
    Ok(PairingOutcome {
        value: pairing_t2_value(gens.branch, gens.d, &sol),
        branch: gens.branch,
        witness: sol,
    })
}

/// Same t1 pairing from a later witness.
pub fn pairing_t1_skipping(
    t: &TwistTriple,
    n: &FactoredSquarefree,
    skip: usize,
) -> Result<PairingOutcome> {
    let (_, _, d) = generators_t1(t, n)?;
    let sol = solve_norm_equation_skipping(1, n.value(), 1, skip)?;
    let branch = if d % 8 == 1 {
        Branch::T1DOne
    } else {
        Branch::T1DMinusOne
    };
    Ok(PairingOutcome {
        value: pairing_t1_with_witness(d, &sol),
        branch,
        witness: sol,
    })
}

/// The rank-zero / Sha[2^inf] = (Z/2)^2 predicate, evaluated through genus
/// theory: h4(n) = 1 together with the matching 8-rank condition.
pub fn sha_predicate(
    t: &TwistTriple,
    n: &FactoredSquarefree,
    criterion: Criterion,
) -> Result<bool> {
    check_common(t, n, criterion)?;
    if h4(n)? != 1 {
        return Ok(false);
    }
    let h8 = crate::genus::h8_indicator(n)?;
    match criterion {
        Criterion::T1 => Ok(h8 == 0),
        Criterion::T2 => {
            let d = distinguished_odd_part(n)?;
            if d % 4 != 1 {
                return Err(contract(format!("odd part {d} of d0 is not 1 mod 4")));
            }
            Ok(u64::from(h8) % 2 == ((d - 1) / 4) % 2)
        }
    }
}
