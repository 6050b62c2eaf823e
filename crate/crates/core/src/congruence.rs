//! Cusps of `Γ₀(N)`, the genus of `Γ₀(p^v)` for `v ≤ 2`, genus-zero
//! predicates, and the vanishing orders of `t_N` at the cusps.
//!
//! Cusps are orbits of `Γ₀(N)` on ℚ∪{∞}: a fraction `a/b` in lowest terms
//! with `b | N`, where `a/b` and `a'/b'` agree exactly when `b = b'` and
//! `a ≡ a' mod gcd(b, N/b)`. The cusp count is therefore
//! `Σ_{b|N} φ(gcd(b, N/b))`.

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::etaforms::eta_quotient_params;
use crate::monster::MONSTER_PRIMES;
use crate::supersingular::ss_j_set_fast;
use num_integer::Integer;
use num_rational::Rational64;

/// A cusp representative `a/b` of `Γ₀(N)`: `b` divides `N`, `gcd(a,b) = 1`,
/// and `a` is the least positive integer in its class mod `gcd(b, N/b)`
/// that is coprime to `b`. (A representative below `gcd(b, N/b)` does not
/// always exist — N = 18, b = 6 forces a = 5 in the class of 2 mod 3 — so
/// canonicalisation minimises over the class instead.)
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cusp {
    pub a: u64,
    pub b: u64,
}

/// One canonical representative per cusp of `Γ₀(N)`, ordered by `b` and
/// then by residue class.
pub fn cusp_reps(n: u64) -> Vec<Cusp> {
    assert!(n >= 1, "level must be positive");
    let mut out = Vec::new();
    for b in crate::arith::divisors(n) {
        let g = b.gcd(&(n / b));
        // Classes mod g that admit a representative coprime to b are
        // exactly the units mod g.
        for r in 1..=g {
            if r.gcd(&g) != 1 {
                continue;
            }
            let mut a = r;
            while a.gcd(&b) != 1 {
                a += g;
            }
            out.push(Cusp { a, b });
        }
    }
    out
}

/// The genus of `Γ₀(p^v)` for `v ∈ {1, 2}`:
/// zero for `p ∈ {2,3}`; otherwise `(p−a)/12` for `v = 1` and
/// `(p−a)/12 + (p−5)(p−1)/12` for `v = 2`, where `a ∈ {−1,5,7,13}` with
/// `a ≡ p mod 12`.
pub fn genus_p_power(p: u64, v: u32) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if v == 0 || v > 2 {
        return Err(Error::invalid(format!(
            "genus formula covers exponents 1 and 2, got {v}"
        )));
    }
    if p == 2 || p == 3 {
        return Ok(0);
    }
    let a: i64 = match p % 12 {
        11 => -1,
        5 => 5,
        7 => 7,
        1 => 13,
        _ => unreachable!("p > 3 is prime"),
    };
    let p = p as i64;
    let g1 = (p - a) / 12;
    let g = if v == 1 {
        g1
    } else {
        g1 + (p - 5) * (p - 1) / 12
    };
    Ok(g as u64)
}

/// Does `Γ₀(p)+` have genus zero? True by fiat for `p ∈ {2,3}`; for
/// larger primes this is Ogg's criterion — every supersingular
/// j-invariant lies in GF(p) — computed from the locus and cross-checked
/// against the fixed list of primes dividing the monster order.
pub fn is_genus0_plus(p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if p == 2 || p == 3 {
        return Ok(true);
    }
    let computed = ss_j_set_fast(p)?.s2.is_empty();
    let listed = MONSTER_PRIMES.contains(&p);
    if computed != listed {
        return Err(Error::internal(format!(
            "genus-zero-plus criterion disagrees with the monster prime list at p = {p}"
        )));
    }
    Ok(computed)
}

/// The vanishing order of `t_N` at the cusp `a/b`:
/// `d_N (N/b − b) / (24 gcd(b, N/b))`. Negative means a pole.
pub fn tn_cusp_vanishing_order(n: u64, cusp: &Cusp) -> Result<Rational64> {
    if n % cusp.b != 0 {
        return Err(Error::invalid(format!(
            "cusp denominator {} does not divide the level {n}",
            cusp.b
        )));
    }
    let params = eta_quotient_params(n)?;
    let g = cusp.b.gcd(&(n / cusp.b));
    Ok(Rational64::new(
        params.d as i64 * (n as i64 / cusp.b as i64 - cusp.b as i64),
        24 * g as i64,
    ))
}

/// Is `t_N` bounded away from the infinite cusp — that is, does it vanish
/// to non-negative order at every cusp with `b ≠ N`?
pub fn tn_bounded_away_from_infinity(n: u64) -> Result<bool> {
    for cusp in cusp_reps(n) {
        if cusp.b == n {
            continue;
        }
        if tn_cusp_vanishing_order(n, &cusp)? < Rational64::new(0, 1) {
            return Ok(false);
        }
    }
    Ok(true)
}
