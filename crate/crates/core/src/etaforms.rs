//! The named q-series: the eta product, E4, Delta, J_1, the eta-quotient
//! hauptmoduln t_N, the normalised forms J_N, s_N, J_{N+}, and Faber
//! polynomials.
//!
//! Everything is exact. `J_1 = E4^3/Delta − 744` is computed by unit-lead
//! series division, and the construction cross-checks itself by multiplying
//! back: `Delta · (J_1 + 744) = E4^3` coefficient for coefficient, so a
//! convolution bug cannot slip through silently. The eta quotients are
//! `t_N = q^{-n} η(τ)^d / η(Nτ)^d` with `(d, n)` the canonical parameters
//! for level `N`; for the genus-zero levels these give the normalised
//! hauptmoduln after the constant term is dropped.

use crate::error::{Error, Result};
use crate::heckeops;
use crate::qseries::{IntPoly, QSeries};
use num_bigint::BigInt;
use num_traits::Zero;
use std::sync::{Arc, Mutex};

/// The eta-quotient parameters `(d, n)` for a level `N >= 2`: `d` is the
/// least positive integer with `d(N−1) ≡ 0 mod 24` and `N^d` a perfect
/// square, and `n = d(N−1)/24`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EtaParams {
    pub level: u64,
    pub d: u64,
    pub n: u64,
}

fn is_perfect_square(n: u64) -> bool {
    let r = num_integer::Roots::sqrt(&n);
    r * r == n
}

pub fn eta_quotient_params(level: u64) -> Result<EtaParams> {
    if level < 2 {
        return Err(Error::invalid(format!(
            "eta quotient needs level >= 2, got {level}"
        )));
    }
    let d0 = 24 / num_integer::gcd(24, level - 1);
    let d = if is_perfect_square(level) || d0 % 2 == 0 {
        d0
    } else {
        2 * d0
    };
    debug_assert_eq!(d * (level - 1) % 24, 0);
    let n = d * (level - 1) / 24;
    Ok(EtaParams { level, d, n })
}

/// The q^{1/24}-free part of the Dedekind eta function: `∏_{k>0} (1 − q^k)`,
/// via the pentagonal-number expansion `Σ (−1)^k q^{k(3k−1)/2}`.
pub fn eta_unit_series(prec: i64) -> Result<QSeries> {
    if prec < 1 {
        return Err(Error::invalid(format!(
            "eta product needs prec >= 1, got {prec}"
        )));
    }
    let mut coeffs = vec![BigInt::zero(); prec as usize];
    let mut k: i64 = 0;
    loop {
        let mut hit = false;
        for kk in [k, -k] {
            let e = kk * (3 * kk - 1) / 2;
            if e < prec {
                hit = true;
                coeffs[e as usize] = if kk.rem_euclid(2) == 0 {
                    BigInt::from(1)
                } else {
                    BigInt::from(-1)
                };
            }
            if kk == 0 {
                break;
            }
        }
        if !hit {
            break;
        }
        k += 1;
    }
    Ok(QSeries::from_coeffs(0, coeffs))
}

/// The weight-4 Eisenstein series `E4 = 1 + 240 Σ σ3(k) q^k`.
pub fn e4_series(prec: i64) -> Result<QSeries> {
    if prec < 1 {
        return Err(Error::invalid(format!("E4 needs prec >= 1, got {prec}")));
    }
    // Sieve σ3 as u64: for prec ≈ 10^4 the values stay far below 2^63.
    let len = prec as usize;
    let mut sigma3 = vec![0u64; len];
    for d in 1..len {
        let cube = (d as u64) * (d as u64) * (d as u64);
        let mut m = d;
        while m < len {
            sigma3[m] += cube;
            m += d;
        }
    }
    let mut coeffs: Vec<BigInt> = sigma3
        .into_iter()
        .map(|s| BigInt::from(240) * BigInt::from(s))
        .collect();
    coeffs[0] = BigInt::from(1);
    Ok(QSeries::from_coeffs(0, coeffs))
}

/// The discriminant form `Δ = q ∏ (1 − q^k)^24`.
pub fn delta_series(prec: i64) -> Result<QSeries> {
    let unit_prec = (prec - 1).max(1);
    Ok(eta_unit_series(unit_prec)?.pow(24)?.shift(1))
}

/// The normalised hauptmodul of the full modular group:
/// `J_1 = j − 744 = q^{-1} + 0 + 196884q + …`, built as `E4^3/Δ − 744`.
/// The division is exact (Δ has unit leading coefficient) and the result
/// is verified by multiplying back against `E4^3`.
pub fn j1_series(prec: i64) -> Result<QSeries> {
    if prec < 1 {
        return Err(Error::invalid(format!("J_1 needs prec >= 1, got {prec}")));
    }
    let e4_cubed = e4_series(prec + 1)?.pow(3)?;
    let delta = delta_series(prec + 2)?;
    let j = e4_cubed.div(&delta)?;
    debug_assert_eq!(j.prec(), prec);
    // Self-check: Δ·j must reproduce E4^3 on the common window. This pins
    // the division against an independent convolution of the same data.
    let back = delta.mul(&j);
    let w = back.prec().min(e4_cubed.prec());
    if back.truncate(w) != e4_cubed.truncate(w) {
        return Err(Error::internal(
            "Δ·(E4^3/Δ) failed to reproduce E4^3; series arithmetic is inconsistent",
        ));
    }
    Ok(j.add_scalar(-744))
}

static J1_CACHE: Mutex<Option<Arc<QSeries>>> = Mutex::new(None);

/// `J_1` from a process-wide cache: computed once at the largest precision
/// ever requested and truncated on the way out, so repeated callers share
/// the expensive construction. Results are identical to calling
/// [`j1_series`] directly at the same precision.
pub fn j1_cached(prec: i64) -> Result<Arc<QSeries>> {
    let mut guard = J1_CACHE.lock().expect("J_1 cache poisoned");
    if let Some(cur) = guard.as_ref() {
        if cur.prec() >= prec {
            return Ok(if cur.prec() == prec {
                Arc::clone(cur)
            } else {
                Arc::new(cur.truncate(prec))
            });
        }
    }
    let fresh = Arc::new(j1_series(prec)?);
    *guard = Some(Arc::clone(&fresh));
    Ok(fresh)
}

/// The eta quotient `t_N = q^{-n} (η(τ)/η(Nτ))^d` as an exact series with
/// leading term `q^{-n}`; its expansion begins
/// `q^{-n}(1 − dq + d(d−3)/2 q² + …)`.
pub fn tn_series(level: u64, prec: i64) -> Result<QSeries> {
    let params = eta_quotient_params(level)?;
    let (d, n) = (params.d, params.n as i64);
    let inner_prec = (prec + n).max(1);
    let num = eta_unit_series(inner_prec)?.pow(d)?;
    let nl = level as i64;
    let sub_prec = (inner_prec + nl - 1).div_euclid(nl).max(1);
    let den = heckeops::v_operator(&eta_unit_series(sub_prec)?, level)?.pow(d)?;
    Ok(num.div(&den)?.truncate(inner_prec).shift(-n))
}

/// Whether `Γ₀(N)` has genus zero for `N` a prime or prime square: exactly
/// when `N − 1` divides 24.
fn genus_zero_level(level: u64) -> bool {
    24 % (level - 1) == 0
}

/// The normalised hauptmodul `J_N = t_N − c_0(t_N)` for `N` a prime or
/// prime square with `Γ₀(N)` of genus zero, and the zero series otherwise
/// (the `J_N := 0` convention). Errors when `N` is not `p` or `p²`.
pub fn hauptmodul_jn(level: u64, prec: i64) -> Result<QSeries> {
    match crate::arith::split_prime_power(level) {
        Some((_, v)) if v <= 2 => {}
        _ => {
            return Err(Error::invalid(format!(
                "J_N is defined here only for N a prime or a prime square, got {level}"
            )))
        }
    }
    if !genus_zero_level(level) {
        return Ok(QSeries::zero(prec));
    }
    let d = eta_quotient_params(level)?.d;
    if d != 24 / (level - 1) {
        return Err(Error::internal(format!(
            "genus-zero level {level}: expected d = 24/(N−1), got {d}"
        )));
    }
    // Here n_N = 1 and t_N = q^{-1} − d + O(q), so J_N = t_N + d.
    Ok(tn_series(level, prec)?.add_scalar(d))
}

/// The Fricke transform `s_N = N^{d/2} t_N^{-1}`, with leading term
/// `N^{d/2} q^{n}` (the square root is exact by the choice of `d`).
pub fn sn_series(level: u64, prec: i64) -> Result<QSeries> {
    let params = eta_quotient_params(level)?;
    let n = params.n as i64;
    let scale = BigInt::from(params.level).pow(params.d as u32).sqrt();
    if &scale * &scale != BigInt::from(params.level).pow(params.d as u32) {
        return Err(Error::internal(format!(
            "N^d is not a perfect square at level {level}: d misconstructed"
        )));
    }
    let t = tn_series(level, (prec - 2 * n).max(1 - n))?;
    Ok(t.inv()?.scale(scale).truncate(prec))
}

/// The genus-zero-plus hauptmodul `J_{N+} = J_N + s_N` for the levels with
/// `N − 1 | 24` (equivalently `n_N = 1`, so the combination is normalised:
/// `q^{-1} + 0 + O(q)`).
pub fn jn_plus_series(level: u64, prec: i64) -> Result<QSeries> {
    if level < 2 || !genus_zero_level(level) {
        return Err(Error::invalid(format!(
            "level {level}: J_{{N+}} construction is a Hauptmodul only when N−1 divides 24"
        )));
    }
    let jn = hauptmodul_jn(level, prec)?;
    let sn = sn_series(level, prec)?;
    Ok(jn.add(&sn))
}

/// The Faber polynomial `Φ_m`: the unique monic, degree-`m`, integer
/// polynomial with `Φ_m(J_1) = q^{-m} + O(q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaberPoly {
    m: usize,
    poly: IntPoly,
}

impl FaberPoly {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }
}

impl std::fmt::Display for FaberPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Construct `Φ_m` by triangular elimination against the powers of `J_1`:
/// `J_1^k = q^{-k} + O(q^{-k+1})`, so clearing the coefficients of
/// `q^{-m+1}, …, q^0` from `J_1^m` downward uses only unit pivots and stays
/// in the integers. Requires `prec >= m + 2` to leave room to verify.
pub fn faber_poly(m: usize, prec: i64) -> Result<FaberPoly> {
    if m < 1 {
        return Err(Error::invalid("Faber polynomials are indexed from m = 1"));
    }
    if prec < m as i64 + 2 {
        return Err(Error::invalid(format!(
            "faber_poly(m = {m}) needs prec >= {}, got {prec}",
            m + 2
        )));
    }
    let j1 = j1_cached(prec)?;
    let mut powers: Vec<QSeries> = Vec::with_capacity(m);
    powers.push((*j1).clone());
    for _ in 2..=m {
        let next = powers.last().expect("nonempty").mul(&j1);
        powers.push(next);
    }
    let mut coeffs = vec![BigInt::zero(); m + 1];
    coeffs[m] = BigInt::from(1);
    let mut s = powers[m - 1].clone();
    for k in (1..m).rev() {
        let a = s.coeff(-(k as i64))?;
        if !a.is_zero() {
            coeffs[k] = -a.clone();
            s = s.sub(&powers[k - 1].scale(a));
        }
    }
    let a0 = s.coeff(0)?;
    coeffs[0] = -a0.clone();
    s = s.add_scalar(-a0);
    for e in (1 - m as i64)..=0 {
        if !s.coeff(e)?.is_zero() {
            return Err(Error::internal(format!(
                "Faber elimination left a nonzero coefficient at q^{e} for m = {m}"
            )));
        }
    }
    Ok(FaberPoly {
        m,
        poly: IntPoly::new(coeffs),
    })
}
