//! Hilbert symbols `(alpha, beta)_v` over the rationals and the division
//! test for `(alpha, beta / Q)`.
//!
//! At an odd prime the symbol comes from valuations and Legendre symbols, at
//! infinity from signs. At 2 it is decided by searching for a primitive
//! solution of `z^2 = A x^2 + B y^2` modulo 64 for representatives `A`, `B`
//! of the square classes of `Q_2^*`; for coefficients of valuation at most
//! one, such a solution lifts to `Z_2` by Hensel's lemma.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::mod_pow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// `x` times the square of its denominator: an integer in the same square
/// class.
fn integral(x: &BigRational) -> Result<BigInt> {
    if x.is_zero() {
        return Err(Error::InvalidAlgebra("Hilbert symbol arguments must be nonzero".into()));
    }
    Ok(x.numer() * x.denom())
}

/// `(v, u)` with `n = p^v u`, `p` not dividing `u`.
fn split_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut u = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = u.div_rem(&p);
        if !r.is_zero() {
            return (v, u);
        }
        u = q;
        v += 1;
    }
}

fn residue(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

fn legendre(u: &BigInt, p: u64) -> i32 {
    if mod_pow(residue(u, p), (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// `table[e1][e2][u][v]` for `A = 2^e1 (2u + 1)`, `B = 2^e2 (2v + 1)`.
type TwoAdicTable = [[[[i32; 4]; 4]; 2]; 2];

fn two_adic_table() -> &'static TwoAdicTable {
    static TABLE: OnceLock<TwoAdicTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        const M: i64 = 64;
        let mut table = [[[[0; 4]; 4]; 2]; 2];
        for (e1, by_e2) in table.iter_mut().enumerate() {
            for (e2, by_u) in by_e2.iter_mut().enumerate() {
                for (u, by_v) in by_u.iter_mut().enumerate() {
                    for (v, entry) in by_v.iter_mut().enumerate() {
                        let a = (1 << e1) * (2 * u as i64 + 1);
                        let b = (1 << e2) * (2 * v as i64 + 1);
                        *entry = if has_primitive_solution(a, b, M) { 1 } else { -1 };
                    }
                }
            }
        }
        table
    })
}

fn has_primitive_solution(a: i64, b: i64, m: i64) -> bool {
    for x in 0..m {
        for y in 0..m {
            let rhs = (a * x * x + b * y * y).rem_euclid(m);
            for z in 0..m {
                if (x | y | z) & 1 == 1 && (z * z).rem_euclid(m) == rhs {
                    return true;
                }
            }
        }
    }
    false
}

/// `(alpha, beta)_v`, `+1` if `z^2 = alpha x^2 + beta y^2` has a nontrivial
/// solution over the completion at `v` and `-1` otherwise.
pub fn hilbert_symbol(alpha: &BigRational, beta: &BigRational, place: Place) -> Result<i32> {
    let a = integral(alpha)?;
    let b = integral(beta)?;
    Ok(match place {
        Place::Infinity => {
            if a.sign() == BigSign::Minus && b.sign() == BigSign::Minus {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (s, u) = split_valuation(&a, 2);
            let (t, v) = split_valuation(&b, 2);
            let u8 = (residue(&u, 8) / 2) as usize;
            let v8 = (residue(&v, 8) / 2) as usize;
            two_adic_table()[(s % 2) as usize][(t % 2) as usize][u8][v8]
        }
        Place::Prime(p) => {
            if p < 3 || !crate::field::is_prime(p) {
                return Err(Error::InvalidField(format!("{p} is not a prime")));
            }
            let (s, u) = split_valuation(&a, p);
            let (t, v) = split_valuation(&b, p);
            let mut sym = 1;
            if s % 2 == 1 && t % 2 == 1 && (p - 1) / 2 % 2 == 1 {
                sym = -sym;
            }
            if t % 2 == 1 {
                sym *= legendre(&u, p);
            }
            if s % 2 == 1 {
                sym *= legendre(&v, p);
            }
            sym
        }
    })
}

fn odd_prime_divisors(n: &BigInt, out: &mut Vec<u64>) {
    let mut m: BigUint = n.magnitude().clone();
    while m.is_even() && !m.is_zero() {
        m >>= 1;
    }
    let mut d = 3u64;
    while !m.is_one() {
        let dd = BigUint::from(d);
        if &dd * &dd > m {
            out.push(m.to_u64().expect("prime factor beyond u64 range"));
            break;
        }
        if (&m % &dd).is_zero() {
            out.push(d);
            while (&m % &dd).is_zero() {
                m /= &dd;
            }
        }
        d += 2;
    }
}

/// Symbols at infinity, 2, and every odd prime dividing a numerator or
/// denominator; all other places give `+1`. The product formula is
/// asserted.
pub fn local_symbols(alpha: &BigRational, beta: &BigRational) -> Result<Vec<(Place, i32)>> {
    let a = integral(alpha)?;
    let b = integral(beta)?;
    let mut primes = Vec::new();
    odd_prime_divisors(&a, &mut primes);
    odd_prime_divisors(&b, &mut primes);
    primes.sort_unstable();
    primes.dedup();
    let mut places = vec![Place::Infinity, Place::Prime(2)];
    places.extend(primes.into_iter().map(Place::Prime));
    let symbols = places
        .into_iter()
        .map(|v| Ok((v, hilbert_symbol(alpha, beta, v)?)))
        .collect::<Result<Vec<_>>>()?;
    let product: i32 = symbols.iter().map(|(_, s)| s).product();
    if product != 1 {
        return Err(Error::InternalAssertion(format!(
            "product formula fails for ({alpha}, {beta})"
        )));
    }
    Ok(symbols)
}

/// Whether `(alpha, beta / Q)` is a division algebra, i.e. ramifies at some
/// place.
pub fn is_division(alpha: &BigRational, beta: &BigRational) -> Result<bool> {
    Ok(local_symbols(alpha, beta)?.iter().any(|&(_, s)| s == -1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn rq(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// `(-1)^(e(u)e(v) + a w(v) + b w(u))` for `2^a u`, `2^b v`.
    fn closed_form_at_2(x: i64, y: i64) -> i32 {
        let (a, u) = (x.trailing_zeros() as i64, x >> x.trailing_zeros());
        let (b, v) = (y.trailing_zeros() as i64, y >> y.trailing_zeros());
        let eps = |t: i64| ((t - 1) / 2).rem_euclid(2);
        let omega = |t: i64| ((t * t - 1) / 8).rem_euclid(2);
        if (eps(u) * eps(v) + a * omega(v) + b * omega(u)) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn spec_examples() {
        for v in [Place::Infinity, Place::Prime(2), Place::Prime(3), Place::Prime(7)] {
            assert_eq!(hilbert_symbol(&r(1), &r(5), v).unwrap(), 1);
        }
        assert_eq!(hilbert_symbol(&r(-1), &r(-1), Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(&r(-1), &r(-1), Place::Prime(2)).unwrap(), -1);
        assert!(is_division(&r(-1), &r(-1)).unwrap());
        assert!(!is_division(&r(1), &r(-1)).unwrap());
        assert!(!is_division(&r(2), &r(-1)).unwrap());
    }

    #[test]
    fn two_adic_against_closed_form() {
        for x in -40..=40i64 {
            for y in -40..=40i64 {
                if x == 0 || y == 0 {
                    continue;
                }
                assert_eq!(
                    hilbert_symbol(&r(x), &r(y), Place::Prime(2)).unwrap(),
                    closed_form_at_2(x, y),
                    "({x}, {y})_2"
                );
            }
        }
    }

    #[test]
    fn known_division_algebras() {
        // (-1, 3) ramifies at 3 and 2; (2, 5) ramifies at 5 and 2
        assert!(is_division(&r(-1), &r(3)).unwrap());
        assert!(is_division(&r(2), &r(5)).unwrap());
        assert_eq!(hilbert_symbol(&r(2), &r(5), Place::Prime(5)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&rq(-1, 4), &rq(-9, 25), Place::Infinity).unwrap(), -1);
        assert!(is_division(&rq(-1, 4), &rq(-9, 25)).unwrap());
    }

    #[test]
    fn zero_rejected() {
        assert!(hilbert_symbol(&r(0), &r(1), Place::Infinity).is_err());
    }
}
