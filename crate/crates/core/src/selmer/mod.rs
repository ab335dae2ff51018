//! 2-Selmer groups of y^2 = x(x - an)(x + bn) via descent matrices over GF(2),
//! with an independent brute-force local-solvability oracle.
//!
//! The curve parameters here are the normalized ones with a + b = 2c (for the
//! twist family they are the odd squares a^2, b^2, c^2 of a triple). An
//! element of the pure 2-Selmer group is a class (d1, d2, d3) of square-free
//! integers with square product; its canonical representative has d1, d2
//! positive with d1 | n*rad(ac) and d2 | n*rad(bc).

mod local;
mod oracle;

pub use local::local_solvable_lemma;
pub use oracle::{local_solvable_bruteforce, selmer_bruteforce};

use crate::arith::{aj, factor_u64, gcd_i128, jacobi, FactoredSquarefree};
use crate::error::{contract, Result};
use crate::f2linalg::{BitMatrix, BitVec};
use crate::family::TwistTriple;

/// Normalized curve parameters: positive odd pairwise-coprime a, b, c with
/// a + b = 2c, each carried with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveParams {
    a: i128,
    b: i128,
    c: i128,
    a_factors: Vec<(u64, u32)>,
    b_factors: Vec<(u64, u32)>,
    c_factors: Vec<(u64, u32)>,
}

impl CurveParams {
    pub fn new(a: i128, b: i128, c: i128) -> Result<Self> {
        if a <= 0 || b <= 0 || c <= 0 {
            return Err(contract("curve parameters must be positive"));
        }
        if a % 2 == 0 || b % 2 == 0 || c % 2 == 0 {
            return Err(contract("curve parameters must be odd"));
        }
        if a + b != 2 * c {
            return Err(contract(format!("{a} + {b} != 2*{c}")));
        }
        if gcd_i128(a, b) != 1 || gcd_i128(a, c) != 1 || gcd_i128(b, c) != 1 {
            return Err(contract("curve parameters must be pairwise coprime"));
        }
        let factor = |v: i128| factor_u64(v as u64);
        Ok(CurveParams {
            a,
            b,
            c,
            a_factors: factor(a),
            b_factors: factor(b),
            c_factors: factor(c),
        })
    }

    /// Squared parameters (a^2, b^2, c^2) of a twist triple.
    pub fn from_triple(t: &TwistTriple) -> Self {
        let sq = |v: u64| (v as i128) * (v as i128);
        CurveParams::new(sq(t.a()), sq(t.b()), sq(t.c())).expect("squares of a triple")
    }

    pub fn a(&self) -> i128 {
        self.a
    }

    pub fn b(&self) -> i128 {
        self.b
    }

    pub fn c(&self) -> i128 {
        self.c
    }

    pub fn abc(&self) -> i128 {
        self.a * self.b * self.c
    }

    pub fn a_primes(&self) -> Vec<u64> {
        self.a_factors.iter().map(|&(p, _)| p).collect()
    }

    pub fn b_primes(&self) -> Vec<u64> {
        self.b_factors.iter().map(|&(p, _)| p).collect()
    }

    pub fn c_primes(&self) -> Vec<u64> {
        self.c_factors.iter().map(|&(p, _)| p).collect()
    }

    /// All primes of abc in the fixed ordering: a-primes, b-primes, c-primes.
    pub fn qprimes(&self) -> Vec<u64> {
        let mut q = self.a_primes();
        q.extend(self.b_primes());
        q.extend(self.c_primes());
        q
    }

    /// Valuation of p in whichever of a, b, c it divides (0 otherwise).
    pub(crate) fn q_valuation(&self, p: u64) -> u32 {
        for list in [&self.a_factors, &self.b_factors, &self.c_factors] {
            if let Some(&(_, e)) = list.iter().find(|&&(q, _)| q == p) {
                return e;
            }
        }
        0
    }

    pub(crate) fn check_n(&self, n: &FactoredSquarefree) -> Result<()> {
        if !n.is_odd() {
            return Err(contract("twist parameter n must be odd"));
        }
        if n.primes().iter().any(|&p| self.abc() % p as i128 == 0) {
            return Err(contract("twist parameter n must be coprime to abc"));
        }
        Ok(())
    }
}

/// A class (d1, d2, d3) of square-free integers with d1*d2*d3 a square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SelmerElement {
    pub d1: i128,
    pub d2: i128,
    pub d3: i128,
}

impl SelmerElement {
    pub fn new(d1: i128, d2: i128, d3: i128) -> Result<Self> {
        for d in [d1, d2, d3] {
            if d == 0 {
                return Err(contract("selmer element coordinates must be nonzero"));
            }
            if crate::arith::squarefree_part(d) != d {
                return Err(contract(format!("{d} is not square-free")));
            }
        }
        if !crate::arith::is_square_i128(d1 * d2 * d3) {
            return Err(contract("d1*d2*d3 must be a perfect square"));
        }
        Ok(SelmerElement { d1, d2, d3 })
    }

    /// Canonical element from positive square-free d1, d2 (d3 is determined).
    pub fn from_pair(d1: i128, d2: i128) -> Result<Self> {
        if d1 <= 0 || d2 <= 0 {
            return Err(contract("canonical coordinates must be positive"));
        }
        let g = gcd_i128(d1, d2);
        let d3 = (d1 / g) * (d2 / g);
        SelmerElement::new(d1, d2, d3)
    }

    pub const fn trivial() -> Self {
        SelmerElement {
            d1: 1,
            d2: 1,
            d3: 1,
        }
    }
}

impl std::fmt::Display for SelmerElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.d1, self.d2, self.d3)
    }
}

/// The genus one curve attached to an element: three quadrics in
/// (t, u1, u2, u3) whose simultaneous vanishing defines the torsor.
/// Rows hold the coefficients of (t^2, u1^2, u2^2, u3^2).
#[derive(Debug, Clone)]
pub struct Torsor {
    pub quadrics: [[i128; 4]; 3],
}

impl Torsor {
    pub fn new(params: &CurveParams, n: i128, lam: &SelmerElement) -> Self {
        let (a, b, c) = (params.a(), params.b(), params.c());
        debug_assert_eq!(a + b, 2 * c);
        Torsor {
            quadrics: [
                [-b * n, 0, lam.d2, -lam.d3],
                [-a * n, -lam.d1, 0, lam.d3],
                [2 * c * n, lam.d1, -lam.d2, 0],
            ],
        }
    }

    pub fn eval(&self, h: usize, point: [i128; 4]) -> i128 {
        self.quadrics[h]
            .iter()
            .zip(point)
            .map(|(&coef, x)| coef * x * x)
            .sum()
    }
}

/// Descent matrix of the base curve, built from the residue symbols of the
/// prime divisors of a, b, c. Its kernel is isomorphic to the pure 2-Selmer
/// group of y^2 = x(x-a)(x+b).
///
/// Row blocks: conditions at q | a, q | b, q | c, then the diagonal
/// (-1/q)-block for q | b and the z=w identification for q | c.
/// Column blocks: z over (a-primes, c-primes), w over (b-primes, c-primes).
///
/// The q | b row is emitted only for q = 1 mod 4. For q = 3 mod 4 (with the
/// square parameters used here) the condition (d1/q) = 1 is not necessary:
/// a solution with u2 = u3 = 0 mod q exists whenever (-d1/q) = 1 instead,
/// so the two branches together impose nothing on d1. See the local
/// solvability tables; the brute-force descent pins this down.
pub fn build_m1(params: &CurveParams) -> BitMatrix {
    let qa = params.a_primes();
    let qb = params.b_primes();
    let qc = params.c_primes();
    let (k1, kb, kc) = (qa.len(), qb.len(), qc.len());
    let rows = k1 + 2 * kb + 2 * kc;
    let cols = k1 + kc + kb + kc;
    let mut m = BitMatrix::zeros(rows, cols);

    let col_z_a = 0;
    let col_z_c = k1;
    let col_w_b = k1 + kc;
    let col_w_c = k1 + kc + kb;

    let sym = |q_num: u64, q_den: u64| aj(q_num as i128, q_den as i128);

    let mut r = 0;
    for &qi in &qa {
        for (j, &qj) in qb.iter().enumerate() {
            m.set(r, col_w_b + j, sym(qj, qi) == 1);
        }
        for (j, &qj) in qc.iter().enumerate() {
            m.set(r, col_w_c + j, sym(qj, qi) == 1);
        }
        r += 1;
    }
    for &qi in &qb {
        if qi % 4 == 1 {
            for (j, &qj) in qa.iter().enumerate() {
                m.set(r, col_z_a + j, sym(qj, qi) == 1);
            }
            for (j, &qj) in qc.iter().enumerate() {
                m.set(r, col_z_c + j, sym(qj, qi) == 1);
            }
        }
        r += 1;
    }
    for &qi in &qc {
        for (j, &qj) in qa.iter().enumerate() {
            m.set(r, col_z_a + j, sym(qj, qi) == 1);
        }
        for (j, &qj) in qb.iter().enumerate() {
            m.set(r, col_w_b + j, sym(qj, qi) == 1);
        }
        r += 1;
    }
    for (i, &qi) in qb.iter().enumerate() {
        m.set(r, col_w_b + i, aj(-1, qi as i128) == 1);
        r += 1;
    }
    for i in 0..kc {
        m.set(r, col_z_c + i, true);
        m.set(r, col_w_c + i, true);
        r += 1;
    }
    debug_assert_eq!(r, rows);
    m
}

/// The A-matrix of the twist parameter: a_ij = [p_j/p_i] off the diagonal and
/// a_ii = sum of the off-diagonal entries of row i.
pub fn build_a_matrix(n: &FactoredSquarefree) -> BitMatrix {
    let ps = n.primes();
    let k = ps.len();
    let mut a = BitMatrix::zeros(k, k);
    for i in 0..k {
        let mut diag = false;
        for j in 0..k {
            if i == j {
                continue;
            }
            let bit = aj(ps[j] as i128, ps[i] as i128) == 1;
            a.set(i, j, bit);
            diag ^= bit;
        }
        a.set(i, i, diag);
    }
    debug_assert!(a.is_symmetric() || !all_one_mod_4(n));
    a
}

fn all_one_mod_4(n: &FactoredSquarefree) -> bool {
    n.primes().iter().all(|&p| p % 4 == 1)
}

/// XOR diag([u/p_1], ..., [u/p_k]) into `m` at (r0, c0).
fn xor_diag_symbol(m: &mut BitMatrix, r0: usize, c0: usize, u: i128, ps: &[u64]) {
    for (i, &p) in ps.iter().enumerate() {
        if aj(u, p as i128) == 1 {
            let cur = m.get(r0 + i, c0 + i);
            m.set(r0 + i, c0 + i, !cur);
        }
    }
}

/// The descent matrix of the twist by n, defined whenever every p | n is a
/// quadratic residue modulo every q | abc. Its kernel is isomorphic to the
/// pure 2-Selmer group of the twist.
pub fn build_mn(params: &CurveParams, n: &FactoredSquarefree) -> Result<BitMatrix> {
    params.check_n(n)?;
    for &p in n.primes() {
        for &q in &params.qprimes() {
            if jacobi(p as i128, q as i128)? != 1 {
                return Err(contract(format!(
                    "twist {} is not admissible: ({p}/{q}) != 1",
                    n.value()
                )));
            }
        }
    }
    let ps = n.primes();
    let k = ps.len();
    let qa = params.a_primes();
    let qb = params.b_primes();
    let qc = params.c_primes();
    let (k1, kb, kc) = (qa.len(), qb.len(), qc.len());

    let m1 = build_m1(params);
    let rows = 2 * k + m1.rows();
    let cols = 2 * k + m1.cols();
    let mut m = BitMatrix::zeros(rows, cols);

    let a = build_a_matrix(n);
    // block [[A + D_{-2}, D_2], [D_2, A + D_2]]
    m.paste(0, 0, &a);
    xor_diag_symbol(&mut m, 0, 0, -2, ps);
    xor_diag_symbol(&mut m, 0, k, 2, ps);
    m.paste(k, k, &a);
    xor_diag_symbol(&mut m, k, k, 2, ps);
    xor_diag_symbol(&mut m, k, 0, 2, ps);

    // G blocks: g_ij = [q_j/p_i]; x-rows see the a- and c-parts of d1,
    // y-rows see the b- and c-parts of d2.
    let col_z_a = 2 * k;
    let col_z_c = 2 * k + k1;
    let col_w_b = 2 * k + k1 + kc;
    let col_w_c = 2 * k + k1 + kc + kb;
    for (i, &p) in ps.iter().enumerate() {
        for (j, &q) in qa.iter().enumerate() {
            m.set(i, col_z_a + j, aj(q as i128, p as i128) == 1);
        }
        for (j, &q) in qc.iter().enumerate() {
            m.set(i, col_z_c + j, aj(q as i128, p as i128) == 1);
        }
        for (j, &q) in qb.iter().enumerate() {
            m.set(k + i, col_w_b + j, aj(q as i128, p as i128) == 1);
        }
        for (j, &q) in qc.iter().enumerate() {
            m.set(k + i, col_w_c + j, aj(q as i128, p as i128) == 1);
        }
    }

    m.paste(2 * k, 2 * k, &m1);
    Ok(m)
}

/// Pure 2-Selmer rank s2(n) = dim ker M_n.
pub fn s2(t: &TwistTriple, n: &FactoredSquarefree) -> Result<usize> {
    let params = CurveParams::from_triple(t);
    let m = build_mn(&params, n)?;
    Ok(m.cols() - m.rank())
}

fn decode_kernel_vector(v: &BitVec, params: &CurveParams, n: &FactoredSquarefree) -> SelmerElement {
    let ps = n.primes();
    let k = ps.len();
    let qa = params.a_primes();
    let qb = params.b_primes();
    let qc = params.c_primes();
    let (k1, kb, kc) = (qa.len(), qb.len(), qc.len());
    let mut d1: i128 = 1;
    let mut d2: i128 = 1;
    for (i, &p) in ps.iter().enumerate() {
        if v.get(i) {
            d1 *= p as i128;
        }
        if v.get(k + i) {
            d2 *= p as i128;
        }
    }
    let z0 = 2 * k;
    for (j, &q) in qa.iter().enumerate() {
        if v.get(z0 + j) {
            d1 *= q as i128;
        }
    }
    for (j, &q) in qc.iter().enumerate() {
        if v.get(z0 + k1 + j) {
            d1 *= q as i128;
        }
    }
    let w0 = 2 * k + k1 + kc;
    for (j, &q) in qb.iter().enumerate() {
        if v.get(w0 + j) {
            d2 *= q as i128;
        }
    }
    for (j, &q) in qc.iter().enumerate() {
        if v.get(w0 + kb + j) {
            d2 *= q as i128;
        }
    }
    SelmerElement::from_pair(d1, d2).expect("kernel decode is canonical")
}

/// All elements of the pure 2-Selmer group in canonical coordinates,
/// decoded from the kernel of the descent matrix. Sorted ascending.
pub fn selmer_group(t: &TwistTriple, n: &FactoredSquarefree) -> Result<Vec<SelmerElement>> {
    let params = CurveParams::from_triple(t);
    let m = build_mn(&params, n)?;
    let mut out: Vec<SelmerElement> = m
        .kernel_elements()
        .iter()
        .map(|v| decode_kernel_vector(v, &params, n))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}
