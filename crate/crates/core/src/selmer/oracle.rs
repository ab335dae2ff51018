//! Brute-force local solvability of the torsor and the full 2-descent by
//! divisor enumeration. Everything here is independent of the residue-symbol
//! tables; it decides solvability by exhaustive search over residues at a
//! depth where a primitive solution of the quadric system is liftable.
//!
//! At p = 2 the search enumerates (t, u1) modulo 2^m directly, resolving the
//! two remaining coordinates through precomputed square tables. At odd p the
//! torsor is covered by the two charts t = 1 and u1 = 1 (a primitive solution
//! always has t or u1 a unit), each reducing to: find s in Z_p with
//! alpha_i + delta_i s^2 in tau_i * squares, for two conditions at once.
//! That is decided exactly by refining residue balls, with p-adic roots of
//! alpha + delta s^2 handled symbolically.

use num_bigint::BigUint;
use num_traits::Zero;

use super::{CurveParams, SelmerElement};
use crate::arith::{gcd_i128, vp_i128, FactoredSquarefree, Place};
use crate::family::TwistTriple;

/// Decide solvability of the torsor over the completion at `place` by search.
///
/// `precision` adds margin to the search depth m = 2 v_p(content) + precision
/// (at p = 2 the depth is at least 8 bits). A solution found at that depth is
/// liftable by the quadratic Hensel bound; exhaustive failure is reported as
/// unsolvable.
pub fn local_solvable_bruteforce(
    lam: &SelmerElement,
    t: &TwistTriple,
    n: &FactoredSquarefree,
    place: Place,
    precision: u32,
) -> bool {
    let params = CurveParams::from_triple(t);
    local_solvable_bruteforce_params(lam, &params, n.value() as i128, place, precision)
}

pub(crate) fn local_solvable_bruteforce_params(
    lam: &SelmerElement,
    params: &CurveParams,
    n: i128,
    place: Place,
    precision: u32,
) -> bool {
    match place {
        Place::Infinity => solvable_at_infinity(lam, params, n),
        Place::Finite(2) => solvable_at_two(lam, params, n, precision),
        Place::Finite(p) => {
            assert!(p % 2 == 1, "finite place must be 2 or an odd prime");
            solvable_at_odd(lam, params, n, p, precision)
        }
    }
}

/// Real solvability. Writing T = t^2 etc., the quadrics become a linear
/// system on the closed positive orthant; it has a nonzero solution exactly
/// when one of the extreme rays of the feasible cone in the (T, U1)-plane
/// satisfies both sign conditions.
fn solvable_at_infinity(lam: &SelmerElement, params: &CurveParams, n: i128) -> bool {
    let an = params.a() * n;
    let cn2 = 2 * params.c() * n;
    let (d1, d2, d3) = (lam.d1, lam.d2, lam.d3);
    let ok = |t: i128, u1: i128| -> bool {
        let u3_num = an * t + d1 * u1;
        let u2_num = cn2 * t + d1 * u1;
        d3 * u3_num >= 0 && d2 * u2_num >= 0
    };
    let mut rays = vec![(1, 0), (0, 1), (1, 1)];
    if d1 < 0 {
        rays.push((-d1, an));
        rays.push((-d1, cn2));
    }
    rays.into_iter().any(|(t, u1)| ok(t, u1))
}

/// 2-adic solvability by enumeration of (t, u1) mod 2^m with square-table
/// lookups for u2 and u3, including the primitivity constraint.
fn solvable_at_two(lam: &SelmerElement, params: &CurveParams, n: i128, precision: u32) -> bool {
    use crate::arith::v2_i128;
    // valuation of 2 * n * abc * d1 * d2 * d3, computed without the product
    let content_v2 = 1
        + v2_i128(n)
        + v2_i128(params.abc())
        + v2_i128(lam.d1)
        + v2_i128(lam.d2)
        + v2_i128(lam.d3);
    let m = (2 * content_v2 + precision).clamp(8, 13);
    let modulus: u64 = 1 << m;
    let reduce = |v: i128| v.rem_euclid(modulus as i128) as u64;

    let an = reduce(params.a() * n);
    let cn2 = reduce(2 * params.c() * n);
    let d1 = reduce(lam.d1);

    // square tables: can v be d * x^2 mod 2^m (any x / odd x)?
    let table = |d: i128| -> (Vec<bool>, Vec<bool>) {
        let dm = reduce(d);
        let mut all = vec![false; modulus as usize];
        let mut odd = vec![false; modulus as usize];
        for x in 0..modulus {
            let v = (dm * ((x * x) % modulus)) % modulus;
            all[v as usize] = true;
            if x % 2 == 1 {
                odd[v as usize] = true;
            }
        }
        (all, odd)
    };
    let (s3_all, s3_odd) = table(lam.d3);
    let (s2_all, s2_odd) = table(lam.d2);

    let sq: Vec<u64> = (0..modulus).map(|x| (x * x) % modulus).collect();
    for t in 0..modulus {
        let at = (an * sq[t as usize]) % modulus;
        let bt = (cn2 * sq[t as usize]) % modulus;
        for u1 in 0..modulus {
            let a_val = ((at + d1 * sq[u1 as usize]) % modulus) as usize;
            let b_val = ((bt + d1 * sq[u1 as usize]) % modulus) as usize;
            let found = if t % 2 == 1 || u1 % 2 == 1 {
                s3_all[a_val] && s2_all[b_val]
            } else {
                (s3_odd[a_val] && s2_all[b_val]) || (s3_all[a_val] && s2_odd[b_val])
            };
            if found {
                return true;
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// odd p: exact decision for two conditions alpha + delta s^2 in tau * squares
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CondStat {
    AllSat,
    NoneSat,
    MixedRoot,
    Mixed,
}

struct Cond {
    alpha: i128,
    delta: i128,
    tau_v: u32,
    /// tau unit part reduced mod p
    tau_u: u64,
    delta_v: u32,
    /// reduced fraction -alpha/delta (den > 0); key for common-root tests
    root_key: (i128, i128),
    /// root of alpha + delta s^2 in Z_p, as (valuation, unit sqrt mod p^cap)
    root: Option<(u32, BigUint)>,
}

struct OddCtx {
    p: u64,
    cap: u32,
    /// p^(cap)
    big_mod: BigUint,
    qr: Vec<bool>,
}

fn vp_biguint(w: &BigUint, p: u64) -> u32 {
    let p = BigUint::from(p);
    let mut v = 0;
    let mut w = w.clone();
    while (&w % &p).is_zero() {
        w /= &p;
        v += 1;
    }
    v
}

fn inv_mod(a: &BigUint, m: &BigUint) -> BigUint {
    // extended euclid over signed big integers
    use num_bigint::BigInt;
    let (mut r0, mut r1) = (BigInt::from(m.clone()), BigInt::from(a.clone()));
    let (mut s0, mut s1) = (BigInt::from(0), BigInt::from(1));
    while r1 != BigInt::from(0) {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
    }
    assert!(r0 == BigInt::from(1), "inverse of non-unit");
    let m_int = BigInt::from(m.clone());
    let red = ((s0 % &m_int) + &m_int) % m_int;
    red.to_biguint().unwrap()
}

/// sqrt of a unit u mod p^cap given a square root mod p, by Newton lifting.
fn lift_sqrt(u: &BigUint, s0: u64, p: u64, cap: u32) -> BigUint {
    let mut k = 1u32;
    let mut s = BigUint::from(s0);
    while k < cap {
        k = (2 * k).min(cap);
        let pk = BigUint::from(p).pow(k);
        let inv2s = inv_mod(&((BigUint::from(2u32) * &s) % &pk), &pk);
        // s <- s - (s^2 - u) / (2s)
        let s2 = (&s * &s) % &pk;
        let diff = (&s2 + &pk - (u % &pk)) % &pk;
        s = (&s + &pk - (diff * inv2s) % &pk) % &pk;
    }
    debug_assert!({
        let pk = BigUint::from(p).pow(cap);
        (&s * &s) % &pk == u % &pk
    });
    s
}

impl Cond {
    fn new(alpha: i128, delta: i128, tau: i128, ctx: &OddCtx) -> Cond {
        let p = ctx.p as i128;
        let tau_v = vp_i128(tau, p);
        let tau_u = (tau / p.pow(tau_v)).rem_euclid(p) as u64;
        let delta_v = vp_i128(delta, p);
        // reduced -alpha/delta
        let g = gcd_i128(alpha, delta);
        let (mut num, mut den) = (-alpha / g, delta / g);
        if den < 0 {
            num = -num;
            den = -den;
        }
        let root = {
            if den % p == 0 {
                None // negative valuation, no root in Z_p
            } else {
                let v = vp_i128(if num == 0 { 1 } else { num }, p);
                if num == 0 {
                    // alpha = 0: root s = 0 (callers never pass alpha = 0)
                    Some((0, BigUint::ZERO))
                } else if v % 2 == 1 {
                    None
                } else {
                    let unit_num = (num / p.pow(v)).rem_euclid(p);
                    let unit_den = den.rem_euclid(p);
                    let u_mod_p = (unit_num as u64 as u128
                        * inv_mod_u64(unit_den as u64, ctx.p) as u128
                        % ctx.p as u128) as u64;
                    if u_mod_p == 0 || !ctx.qr[u_mod_p as usize] {
                        None
                    } else {
                        // full unit (-alpha/delta) / p^v modulo p^cap
                        use num_bigint::BigInt;
                        let pk = &ctx.big_mod;
                        let to_big = |x: i128| -> BigUint {
                            let m = BigInt::from(pk.clone());
                            let r = (BigInt::from(x) % &m + &m) % m;
                            r.to_biguint().unwrap()
                        };
                        let u_full = (to_big(num / p.pow(v)) * inv_mod(&to_big(den), pk)) % pk;
                        let s0 = (1..ctx.p)
                            .find(|&s| s as u128 * s as u128 % ctx.p as u128 == u_mod_p as u128)
                            .expect("square root exists mod p");
                        let s = lift_sqrt(&u_full, s0, ctx.p, ctx.cap);
                        Some((v / 2, s))
                    }
                }
            }
        };
        Cond {
            alpha,
            delta,
            tau_v,
            tau_u,
            delta_v,
            root_key: (num, den),
            root,
        }
    }

    /// Root residue(s) mod p^j, when a root exists.
    fn root_in_ball(&self, r: &BigUint, j: u32, p: u64) -> bool {
        let Some((vh, s)) = &self.root else {
            return false;
        };
        let pj = BigUint::from(p).pow(j);
        let rho = (BigUint::from(p).pow(*vh) * s) % &pj;
        let neg = (&pj - &rho) % &pj;
        *r == rho || *r == neg
    }

    /// Does the square class p^v0 * u0 lie in tau * squares?
    fn class_sat(&self, v0: u32, u0: u64, ctx: &OddCtx) -> bool {
        v0 >= self.tau_v
            && (v0 - self.tau_v).is_multiple_of(2)
            && ctx.qr[(u0 as u128 * self.tau_u as u128 % ctx.p as u128) as usize]
    }

    /// Status of the condition over the ball r + p^j Z_p.
    fn eval_ball(&self, r: &BigUint, j: u32, ctx: &OddCtx) -> CondStat {
        if self.root_in_ball(r, j, ctx.p) {
            return CondStat::MixedRoot;
        }
        let w = eval_quadratic(self.alpha, self.delta, r, &ctx.big_mod);
        if w.is_zero() {
            // no root in the ball, so the valuation is bounded below cap
            debug_assert!(false, "valuation overflow without root");
            return CondStat::Mixed;
        }
        let v0 = vp_biguint(&w, ctx.p);
        let vr = if r.is_zero() {
            None
        } else {
            Some(vp_biguint(r, ctx.p))
        };
        let mut v_wiggle = 2 * j + self.delta_v;
        if let Some(vr) = vr {
            v_wiggle = v_wiggle.min(j + self.delta_v + vr);
        }
        if v0 < v_wiggle {
            let u0 = unit_mod_p(&w, v0, ctx);
            if self.class_sat(v0, u0, ctx) {
                CondStat::AllSat
            } else {
                CondStat::NoneSat
            }
        } else {
            CondStat::Mixed
        }
    }
}

fn inv_mod_u64(a: u64, p: u64) -> u64 {
    // Fermat inverse, p prime
    let mut acc = 1u128;
    let mut base = a as u128 % p as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    acc as u64
}

fn eval_quadratic(alpha: i128, delta: i128, r: &BigUint, big_mod: &BigUint) -> BigUint {
    use num_bigint::BigInt;
    let val = BigInt::from(alpha)
        + BigInt::from(delta) * BigInt::from(r.clone()) * BigInt::from(r.clone());
    let m = BigInt::from(big_mod.clone());
    let red = ((val % &m) + &m) % m;
    red.to_biguint().unwrap()
}

fn unit_mod_p(w: &BigUint, v0: u32, ctx: &OddCtx) -> u64 {
    let p = BigUint::from(ctx.p);
    let unit = w / p.pow(v0);
    let r = unit % BigUint::from(ctx.p);
    r.iter_u64_digits().next().unwrap_or(0)
}

/// cap for the refinement depth: beyond the content valuations plus the
/// separation valuation of the two root keys, every ball resolves.
fn depth_cap(conds: &[(i128, i128, i128); 2], p: u64, precision: u32) -> u32 {
    use num_bigint::BigInt;
    let pi = p as i128;
    let mut cap = precision + 4;
    for &(alpha, delta, tau) in conds {
        cap += vp_i128(alpha, pi) + vp_i128(delta, pi) + vp_i128(tau, pi);
    }
    let (a0, d0, _) = conds[0];
    let (a1, d1, _) = conds[1];
    let cross = BigInt::from(a0) * BigInt::from(d1) - BigInt::from(a1) * BigInt::from(d0);
    if !cross.is_zero() {
        cap += vp_biguint(&cross.magnitude().clone(), p);
    }
    cap
}

fn solvable_at_odd(
    lam: &SelmerElement,
    params: &CurveParams,
    n: i128,
    p: u64,
    precision: u32,
) -> bool {
    let an = params.a() * n;
    let cn2 = 2 * params.c() * n;
    let charts: [[(i128, i128, i128); 2]; 2] = [
        // t = 1, free variable u1
        [(an, lam.d1, lam.d3), (cn2, lam.d1, lam.d2)],
        // u1 = 1, free variable t
        [(lam.d1, an, lam.d3), (lam.d1, cn2, lam.d2)],
    ];
    let qr = qr_table(p);
    charts
        .iter()
        .any(|conds| decide_chart(conds, p, precision, &qr))
}

fn qr_table(p: u64) -> Vec<bool> {
    let mut qr = vec![false; p as usize];
    for x in 1..p {
        qr[(x as u128 * x as u128 % p as u128) as usize] = true;
    }
    qr
}

fn decide_chart(conds: &[(i128, i128, i128); 2], p: u64, precision: u32, qr: &[bool]) -> bool {
    let cap = depth_cap(conds, p, precision);
    let ctx = OddCtx {
        p,
        cap,
        big_mod: BigUint::from(p).pow(cap),
        qr: qr.to_vec(),
    };
    let cond_a = Cond::new(conds[0].0, conds[0].1, conds[0].2, &ctx);
    let cond_b = Cond::new(conds[1].0, conds[1].1, conds[1].2, &ctx);

    // level-1 scan over s mod p with instant decisions for unit values
    let pi = p as i128;
    let (aa, da) = (
        cond_a.alpha.rem_euclid(pi) as u64,
        cond_a.delta.rem_euclid(pi) as u64,
    );
    let (ab, db) = (
        cond_b.alpha.rem_euclid(pi) as u64,
        cond_b.delta.rem_euclid(pi) as u64,
    );
    let mut defers: Vec<u64> = Vec::new();
    for s in 0..p {
        let s2 = s as u128 * s as u128 % p as u128;
        let wa = ((aa as u128 + da as u128 * s2) % p as u128) as u64;
        let wb = ((ab as u128 + db as u128 * s2) % p as u128) as u64;
        if wa != 0 && wb != 0 {
            if cond_a.class_sat(0, wa, &ctx) && cond_b.class_sat(0, wb, &ctx) {
                return true;
            }
        } else {
            defers.push(s);
        }
    }

    let mut stack: Vec<(BigUint, u32)> = defers
        .into_iter()
        .map(|s| (BigUint::from(s), 1u32))
        .collect();
    while let Some((r, j)) = stack.pop() {
        let sa = cond_a.eval_ball(&r, j, &ctx);
        let sb = cond_b.eval_ball(&r, j, &ctx);
        use CondStat::*;
        match (sa, sb) {
            (NoneSat, _) | (_, NoneSat) => continue,
            (AllSat, AllSat) => return true,
            (AllSat, MixedRoot) | (MixedRoot, AllSat) => return true,
            (MixedRoot, MixedRoot) if cond_a.root_key == cond_b.root_key => return true,
            _ => {}
        }
        if j >= ctx.cap {
            // exhausted: report unsolvable for this ball
            continue;
        }
        // refine: scan children, deciding the easy ones inline
        let pj = BigUint::from(p).pow(j);
        let step = &pj;
        let mut child = r.clone();
        for _ in 0..p {
            // quick unit test mod p happens inside eval via v0; only push
            // children that stay ambiguous
            let sa = cond_a.eval_ball(&child, j + 1, &ctx);
            let sb = cond_b.eval_ball(&child, j + 1, &ctx);
            use CondStat::*;
            match (sa, sb) {
                (NoneSat, _) | (_, NoneSat) => {}
                (AllSat, AllSat) => return true,
                (AllSat, MixedRoot) | (MixedRoot, AllSat) => return true,
                (MixedRoot, MixedRoot) if cond_a.root_key == cond_b.root_key => return true,
                _ => stack.push((child.clone(), j + 1)),
            }
            child += step;
        }
    }
    false
}

/// Full 2-descent by enumeration: every canonical (d1, d2) divisor pair is
/// tested for local solvability at infinity, 2, and the odd primes of n*abc.
pub fn selmer_bruteforce(t: &TwistTriple, n: &FactoredSquarefree) -> Vec<SelmerElement> {
    let params = CurveParams::from_triple(t);
    params
        .check_n(n)
        .expect("twist parameter must be odd and coprime to abc");
    let nv = n.value() as i128;

    let mut d1_primes: Vec<u64> = n.primes().to_vec();
    d1_primes.extend(params.a_primes());
    d1_primes.extend(params.c_primes());
    let mut d2_primes: Vec<u64> = n.primes().to_vec();
    d2_primes.extend(params.b_primes());
    d2_primes.extend(params.c_primes());

    let mut places = vec![Place::Infinity];
    let mut odd: Vec<u64> = n.primes().to_vec();
    odd.extend(params.qprimes());
    odd.sort_unstable();
    odd.dedup();
    places.extend(odd.into_iter().map(Place::Finite));
    places.push(Place::Finite(2));

    let subset = |primes: &[u64], mask: usize| -> i128 {
        primes
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p as i128)
            .product()
    };

    let mut out = Vec::new();
    for mask1 in 0..1usize << d1_primes.len() {
        let d1 = subset(&d1_primes, mask1);
        for mask2 in 0..1usize << d2_primes.len() {
            let d2 = subset(&d2_primes, mask2);
            let lam = SelmerElement::from_pair(d1, d2).expect("square-free by construction");
            if places
                .iter()
                .all(|&pl| local_solvable_bruteforce_params(&lam, &params, nv, pl, 3))
            {
                out.push(lam);
            }
        }
    }
    out.sort();
    out
}
