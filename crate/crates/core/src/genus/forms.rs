//! Class group of discriminant -4n by reduced binary quadratic forms.
//!
//! This is the independent oracle for the 2-part of the class group: it
//! enumerates the reduced primitive positive definite forms, composes them by
//! Gauss composition (via united forms), and reads off the dimensions of
//! A[2], 2A n A[2] and 4A n A[2] directly from the squaring map.

use std::collections::HashMap;

use crate::arith::{gcd_i128, isqrt_i128, FactoredSquarefree};
use crate::error::{contract, Error, Result};

type Form = (i128, i128, i128);

fn c_from(a: i128, b: i128, disc: i128) -> i128 {
    let num = b * b - disc;
    debug_assert_eq!(num % (4 * a), 0);
    num / (4 * a)
}

fn reduce(mut a: i128, mut b: i128, disc: i128) -> Form {
    let mut c = c_from(a, b, disc);
    loop {
        if b <= -a || b > a {
            let mut r = b.rem_euclid(2 * a);
            if r > a {
                r -= 2 * a;
            }
            b = r;
            c = c_from(a, b, disc);
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if (a == c || a == b.abs()) && b < 0 {
            b = -b;
        }
        break;
    }
    debug_assert_eq!(b * b - 4 * a * c, disc);
    (a, b, c)
}

fn eval_form(f: Form, x: i128, y: i128) -> i128 {
    f.0 * x * x + f.1 * x * y + f.2 * y * y
}

/// Transform f by the unimodular matrix [[x0, u], [y0, v]].
fn transform(f: Form, x0: i128, y0: i128, u: i128, v: i128) -> Form {
    debug_assert_eq!(x0 * v - y0 * u, 1);
    let a = eval_form(f, x0, y0);
    let c = eval_form(f, u, v);
    let b = 2 * (f.0 * x0 * u + f.2 * y0 * v) + f.1 * (x0 * v + y0 * u);
    (a, b, c)
}

/// A form equivalent to f whose leading coefficient is coprime to m.
fn make_leading_coprime(f: Form, m: i128) -> Form {
    if gcd_i128(f.0, m) == 1 {
        return f;
    }
    let mut bound = 2;
    loop {
        for x in -bound..=bound {
            for y in -bound..=bound {
                if gcd_i128(x, y) != 1 {
                    continue;
                }
                let val = eval_form(f, x, y);
                if val != 0 && gcd_i128(val, m) == 1 {
                    // complete (x, y) to a unimodular matrix
                    let (mut u, mut v) = (0i128, 0i128);
                    'ext: for uu in -bound - 1..=bound + 1 {
                        for vv in -bound - 1..=bound + 1 {
                            if x * vv - y * uu == 1 {
                                u = uu;
                                v = vv;
                                break 'ext;
                            }
                        }
                    }
                    if x * v - y * u == 1 {
                        return transform(f, x, y, u, v);
                    }
                }
            }
        }
        bound *= 2;
        assert!(bound < 1 << 20, "no coprime representation found");
    }
}

fn inv_mod(a: i128, m: i128) -> i128 {
    let (mut r0, mut r1) = (m, a.rem_euclid(m));
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "inverse of non-unit");
    s0.rem_euclid(m)
}

/// Gauss composition of primitive forms of the same discriminant.
fn compose(f1: Form, f2: Form, disc: i128) -> Form {
    let f2 = make_leading_coprime(f2, f1.0);
    let (a1, b1, _) = f1;
    let (a2, b2, _) = f2;
    debug_assert_eq!(gcd_i128(a1, a2), 1);
    // B = b1 mod 2a1, B = b2 mod 2a2 (b1, b2 share parity with disc)
    let t = ((b2 - b1) / 2).rem_euclid(a2) * inv_mod(a1.rem_euclid(a2), a2) % a2;
    let big_b = b1 + 2 * a1 * t.rem_euclid(a2);
    let a3 = a1 * a2;
    debug_assert_eq!((big_b - b1).rem_euclid(2 * a1), 0);
    debug_assert_eq!((big_b - b2).rem_euclid(2 * a2), 0);
    debug_assert_eq!((big_b * big_b - disc).rem_euclid(4 * a3), 0);
    reduce(a3, big_b.rem_euclid(2 * a3), disc)
}

/// All reduced primitive forms of discriminant -4n.
fn reduced_forms(n: u64) -> Vec<Form> {
    let disc = -4 * n as i128;
    let mut forms = Vec::new();
    let a_max = isqrt_i128(-disc / 3);
    for a in 1..=a_max {
        // b even since disc = 0 mod 4
        let mut b = -a + 1;
        if b.rem_euclid(2) != 0 {
            b += 1;
        }
        while b <= a {
            if (b * b - disc) % (4 * a) == 0 {
                let c = (b * b - disc) / (4 * a);
                if c >= a
                    && gcd_i128(gcd_i128(a, b), c) == 1
                    && !((a == c || a == b.abs()) && b < 0)
                {
                    forms.push((a, b, c));
                }
            }
            b += 2;
        }
    }
    forms
}

/// Dimensions (h2, h4, h8) of A[2], 2A n A[2], 4A n A[2] for the class group
/// of discriminant -4n, computed from the composition table.
pub fn classgroup_oracle(n: &FactoredSquarefree) -> Result<(u32, u32, u32)> {
    if !n.is_odd() {
        return Err(contract("class group oracle expects odd square-free n"));
    }
    if n.value() > 10_000_000 {
        return Err(Error::ResourceExhausted(
            "class group oracle bound is n <= 10^7".into(),
        ));
    }
    let disc = -4 * n.value() as i128;
    let forms = reduced_forms(n.value());
    let index: HashMap<Form, usize> = forms.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let identity = reduce(1, 0, disc);
    let id_idx = index[&identity];

    let square = |i: usize| -> usize {
        let f = forms[i];
        index[&compose(f, f, disc)]
    };
    let squares: Vec<usize> = (0..forms.len()).map(square).collect();

    let two_torsion: Vec<usize> = (0..forms.len()).filter(|&i| squares[i] == id_idx).collect();
    let sq_image: std::collections::HashSet<usize> = squares.iter().copied().collect();
    let fourth_image: std::collections::HashSet<usize> =
        squares.iter().map(|&i| squares[i]).collect();

    let dim_of = |count: usize| -> Result<u32> {
        if !count.is_power_of_two() {
            return Err(contract(format!(
                "subgroup size {count} is not a power of two"
            )));
        }
        Ok(count.trailing_zeros())
    };
    let h2 = dim_of(two_torsion.len())?;
    let h4 = dim_of(two_torsion.iter().filter(|i| sq_image.contains(i)).count())?;
    let h8 = dim_of(
        two_torsion
            .iter()
            .filter(|i| fourth_image.contains(i))
            .count(),
    )?;
    Ok((h2, h4, h8))
}
