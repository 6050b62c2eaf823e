//! Small integer utilities shared across the crate.
//!
//! Nothing here is clever: trial-division primality (the primes of interest
//! are below 300), divisor enumeration, p-adic valuations of big integers,
//! modular inverses, and a Barrett-style reducer for the one loop in the
//! crate that is genuinely hot (point counting over `GF(p^2)`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Trial-division primality test. Intended for small `n`; every caller in
/// this crate stays below a few hundred.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// All positive divisors of `n`, ascending. Panics if `n == 0`.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n > 0, "divisors of zero are not a finite set");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Euler's totient, by trial factorization.
pub fn euler_phi(mut n: u64) -> u64 {
    assert!(n > 0);
    let mut phi = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut pk = 1;
            while n % p == 0 {
                n /= p;
                pk *= p;
            }
            phi *= pk - pk / p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        phi *= n - 1;
    }
    phi
}

/// Writes `n = p^v` with `p` prime and `v >= 1`, if possible.
pub fn split_prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            let mut v = 0;
            while m % p == 0 {
                m /= p;
                v += 1;
            }
            return if m == 1 { Some((p, v)) } else { None };
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Some((n, 1))
}

/// The exact power of the prime `p` dividing `x`, or `None` when `x == 0`
/// (the valuation of zero is +infinity, which `u64` cannot carry).
pub fn vp_bigint(p: u64, x: &BigInt) -> Option<u64> {
    assert!(p >= 2, "valuation needs a prime base");
    if x.is_zero() {
        return None;
    }
    let bp = BigInt::from(p);
    let mut cur = x.abs();
    let mut v = 0;
    loop {
        let (quo, rem) = cur.div_rem(&bp);
        if !rem.is_zero() {
            return Some(v);
        }
        v += 1;
        cur = quo;
    }
}

/// Extended Euclid over the integers: returns `(g, x, y)` with
/// `a*x + b*y == g` and `g == gcd(a, b) >= 0`.
pub fn egcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if b.is_zero() {
        let sign = if a.is_negative() { -1 } else { 1 };
        return (a.abs(), BigInt::from(sign), BigInt::zero());
    }
    let (q, r) = a.div_rem(b);
    let (g, x, y) = egcd(b, &r);
    let yy = x - &q * &y;
    (g, y, yy)
}

/// Inverse of `a` modulo `m > 1`, reduced to `[0, m)`, if `gcd(a, m) == 1`.
pub fn modinv_bigint(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    assert!(*m > BigInt::from(1));
    let (g, x, _) = egcd(a, m);
    if g != BigInt::from(1) {
        return None;
    }
    Some(x.mod_floor(m))
}

/// Inverse of `a` modulo the prime `p`, for `a` not divisible by `p`.
pub fn modinv_u64(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "no inverse of 0 mod {p}");
    // Fermat: a^(p-2) mod p. p is small, so square-and-multiply in u128.
    let mut base = (a % p) as u128;
    let mut e = p - 2;
    let m = p as u128;
    let mut acc: u128 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

/// Barrett-style reducer: precomputes `floor(2^64 / p)` so that `x mod p`
/// costs two multiplications instead of a hardware divide. Valid for all
/// `x < 2^63` with `p < 2^31`, which covers every use in this crate.
#[derive(Clone, Copy, Debug)]
pub struct Modulus {
    pub p: u64,
    magic: u64,
}

impl Modulus {
    pub fn new(p: u64) -> Self {
        assert!((2..1 << 31).contains(&p));
        let magic = (u128::from(u64::MAX) + 1) / u128::from(p);
        Modulus {
            p,
            magic: magic as u64,
        }
    }

    #[inline(always)]
    pub fn reduce(self, x: u64) -> u64 {
        let q = ((u128::from(x) * u128::from(self.magic)) >> 64) as u64;
        let mut r = x - q * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline(always)]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_range() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(271));
        assert!(!is_prime(221)); // 13 * 17
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
        assert_eq!(divisors(97), vec![1, 97]);
    }

    #[test]
    fn totient_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(2), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(25), 20);
        assert_eq!(euler_phi(71), 70);
    }

    #[test]
    fn prime_power_splitting() {
        assert_eq!(split_prime_power(8), Some((2, 3)));
        assert_eq!(split_prime_power(49), Some((7, 2)));
        assert_eq!(split_prime_power(13), Some((13, 1)));
        assert_eq!(split_prime_power(12), None);
        assert_eq!(split_prime_power(1), None);
    }

    #[test]
    fn bigint_valuations() {
        assert_eq!(vp_bigint(2, &BigInt::from(48)), Some(4));
        assert_eq!(vp_bigint(3, &BigInt::from(48)), Some(1));
        assert_eq!(vp_bigint(5, &BigInt::from(48)), Some(0));
        assert_eq!(vp_bigint(7, &BigInt::from(-343)), Some(3));
        assert_eq!(vp_bigint(2, &BigInt::zero()), None);
        let big = BigInt::from(2).pow(200) * BigInt::from(3);
        assert_eq!(vp_bigint(2, &big), Some(200));
    }

    #[test]
    fn egcd_bezout() {
        let a = BigInt::from(240);
        let b = BigInt::from(46);
        let (g, x, y) = egcd(&a, &b);
        assert_eq!(g, BigInt::from(2));
        assert_eq!(&a * &x + &b * &y, g);
    }

    #[test]
    fn modular_inverses() {
        let m = BigInt::from(5 * 5 * 5);
        let a = BigInt::from(12);
        let inv = modinv_bigint(&a, &m).unwrap();
        assert_eq!((a * inv).mod_floor(&m), BigInt::from(1));
        assert_eq!(modinv_bigint(&BigInt::from(10), &m), None);

        for a in 1..71 {
            let inv = modinv_u64(a, 71);
            assert_eq!(a * inv % 71, 1);
        }
    }

    #[test]
    fn barrett_matches_hardware_mod() {
        for &p in &[2u64, 3, 5, 71, 199, 271, 65537] {
            let m = Modulus::new(p);
            for x in 0..1000u64 {
                assert_eq!(m.reduce(x), x % p);
            }
            let big = p * p * 65521 + p / 2;
            assert_eq!(m.reduce(big), big % p);
        }
    }
}
