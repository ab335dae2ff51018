//! Torsion of y^2 = x(x - a)(x + b): Ono's square-pair and parametrization
//! criteria for points of order 4, 8 and 3, plus an independent
//! division-polynomial oracle confirming that the twists keep exactly the
//! full rational 2-torsion.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{factor_u64, gcd_i128, is_square_i128};

/// Torsion shape Z/2 x Z/2m, m in 1..=4 (full 2-torsion is assumed).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorsionShape {
    pub m: u8,
}

impl std::fmt::Display for TorsionShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.m == 1 {
            write!(f, "(Z/2Z)^2")
        } else {
            write!(f, "Z/2Z x Z/{}Z", 2 * self.m)
        }
    }
}

/// Order-4 criterion: one of the pairs [-a, b], [a, a+b], [-b, -a-b]
/// consists of integer squares.
pub fn ono_order4(a: i128, b: i128) -> bool {
    let pairs = [(-a, b), (a, a + b), (-b, -a - b)];
    pairs
        .iter()
        .any(|&(x, y)| is_square_i128(x) && is_square_i128(y))
}

/// Order-8 criterion: the order-4 pair comes from a Pythagorean pair
/// [d^2 u^4, d^2 v^4] with u^2 + v^2 = w^2, u, v, w pairwise coprime.
pub fn ono_order8(a: i128, b: i128) -> bool {
    let pairs = [(-a, b), (a, a + b), (-b, -a - b)];
    for (x, y) in pairs {
        if x <= 0 || y <= 0 {
            continue;
        }
        // x = d^2 u^4, y = d^2 v^4 for some d and coprime u, v
        let bound = |v: i128| {
            let mut u = 1i128;
            while u * u * u * u < v {
                u += 1;
            }
            u + 1
        };
        for d in 1.. {
            let d2 = d * d;
            if d2 > x || d2 > y {
                break;
            }
            if x % d2 != 0 || y % d2 != 0 {
                continue;
            }
            let (x0, y0) = (x / d2, y / d2);
            for u in 1..=bound(x0) {
                if u * u * u * u != x0 {
                    continue;
                }
                for v in 1..=bound(y0) {
                    if v * v * v * v != y0 {
                        continue;
                    }
                    let w2 = u * u + v * v;
                    if is_square_i128(w2) && gcd_i128(u, v) == 1 {
                        let w = crate::arith::isqrt_i128(w2);
                        if gcd_i128(u, w) == 1 && gcd_i128(v, w) == 1 {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

/// Order-3 criterion: a = -(u^4 + 2u^3 v) d^2 and b = (v^4 + 2v^3 u) d^2
/// with u, v coprime and u/v outside {-2, -1/2, -1, 1, 0}.
pub fn ono_order3(a: i128, b: i128) -> bool {
    if a == 0 || b == 0 {
        return false;
    }
    let max = a.unsigned_abs().max(b.unsigned_abs()) as i128;
    let mut d = 1i128;
    while d * d <= max {
        if a % (d * d) == 0 && b % (d * d) == 0 {
            let (a0, b0) = (a / (d * d), b / (d * d));
            let mut bound = 1i128;
            while bound * bound * bound * bound <= a0.abs().max(b0.abs()) {
                bound += 1;
            }
            for u in -bound..=bound {
                for v in -bound..=bound {
                    if gcd_i128(u, v) != 1 {
                        continue;
                    }
                    // excluded ratios u/v in {0, 1, -1, -2, -1/2}
                    if u == 0 || v == 0 || u == v || u == -v || u == -2 * v || v == -2 * u {
                        continue;
                    }
                    if -(u * u * u * (u + 2 * v)) == a0 && v * v * v * (v + 2 * u) == b0 {
                        return true;
                    }
                }
            }
        }
        d += 1;
    }
    false
}

fn is_square_big(v: &BigInt) -> bool {
    if v.is_negative() {
        return false;
    }
    let r = v.sqrt();
    &r * &r == *v
}

/// All divisors of |v|^4, built from the prime factorization of |v|.
fn divisors_of_fourth_power(vals: &[i128]) -> Vec<BigInt> {
    let mut exps: std::collections::HashMap<u64, u32> = std::collections::HashMap::new();
    for &v in vals {
        for (p, e) in factor_u64(v.unsigned_abs() as u64) {
            *exps.entry(p).or_insert(0) += 4 * e;
        }
    }
    let mut divs = vec![BigInt::from(1)];
    for (p, e) in exps {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        let mut pk = BigInt::from(1);
        for _ in 0..=e {
            for d in &divs {
                next.push(d * &pk);
            }
            pk *= p;
        }
        divs = next;
    }
    divs
}

/// Torsion of y^2 = x(x - a^2 n)(x + b^2 n) by division polynomials: rational
/// roots of the order-3 and order-4 conditions are searched over the divisors
/// of the constant terms; a root only counts when it lifts to a rational
/// point. Order 8 is checked by halving a found order-4 point.
pub fn torsion_oracle(a: i128, b: i128, n: i128) -> TorsionShape {
    let s = BigInt::from(a * a * n); // x - s factor
    let r = BigInt::from(b * b * n); // x + r factor
    let big_a = &r - &s;
    let big_b = -(&r * &s);

    let curve_value = |x_num: &BigInt, x_den: &BigInt| -> BigInt {
        // f(x) * den^4 for x = num/den: num (num - s den) (num + r den) den
        x_num * (x_num - &s * x_den) * (x_num + &r * x_den) * x_den
    };

    let divisors = divisors_of_fourth_power(&[a, b, n]);

    // order 3: 3x^4 + 4A x^3 + 6B x^2 - B^2 = 0
    let mut has_order3 = false;
    'order3: for den in [BigInt::from(1), BigInt::from(3)] {
        for d in &divisors {
            for sign in [1, -1] {
                let num: BigInt = d * sign;
                let psi3 = BigInt::from(3) * num.pow(4)
                    + BigInt::from(4) * &big_a * num.pow(3) * &den
                    + BigInt::from(6) * &big_b * num.pow(2) * den.pow(2)
                    - &big_b * &big_b * den.pow(4);
                if psi3.is_zero() && is_square_big(&curve_value(&num, &den)) {
                    has_order3 = true;
                    break 'order3;
                }
            }
        }
    }

    // order 4: a point P with 2P = (e, 0): (x^2 - B)^2 = 4 e x (x^2 + A x + B)
    let mut order4_x: Option<BigInt> = None;
    'order4: for e in [BigInt::zero(), s.clone(), -&r] {
        for d in &divisors {
            for sign in [1, -1] {
                let x: BigInt = d * sign;
                let lhs = (&x * &x - &big_b).pow(2);
                let rhs = BigInt::from(4) * &e * &x * (&x * &x + &big_a * &x + &big_b);
                if lhs == rhs && is_square_big(&curve_value(&x, &BigInt::from(1))) {
                    order4_x = Some(x);
                    break 'order4;
                }
            }
        }
    }

    let has_order8 = order4_x.as_ref().is_some_and(|x| {
        // halvable iff x, x - s, x + r are all rational squares
        is_square_big(x) && is_square_big(&(x - &s)) && is_square_big(&(x + &r))
    });

    let m = if has_order8 {
        4
    } else if has_order3 {
        assert!(order4_x.is_none(), "order 12 torsion is impossible");
        3
    } else if order4_x.is_some() {
        2
    } else {
        1
    };
    TorsionShape { m }
}
