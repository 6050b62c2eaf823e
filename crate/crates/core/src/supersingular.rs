//! The supersingular locus in characteristic `p`.
//!
//! Two independent routes compute the set of supersingular j-invariants:
//! the Deuring–Hasse polynomial `H_p(λ) = Σ C((p−1)/2, i)² λ^i`, whose
//! roots in GF(p²) map onto the locus through the Legendre j-map, and an
//! exhaustive point-counting sweep over every j ∈ GF(p²) (a curve is
//! supersingular exactly when its trace of Frobenius vanishes mod p).
//! [`ss_j_set`] runs both and refuses to return unless they agree.
//!
//! On top of the raw locus sit the quantities the verification needs: the
//! split into GF(p)-rational invariants and conjugate pairs, automorphism
//! orders with the Eichler mass check `Σ 1/#Aut = (p−1)/24`, the minimal
//! automorphism order `m_p`, and the table of supersingular `J_1`-values
//! for the primes where the locus is rational.

use std::collections::{BTreeMap, BTreeSet};

use crate::arith::{is_prime, modinv_u64};
use crate::error::{Error, Result};
use crate::ffield::{count_affine_points, BaseField, Fp2Elem, PolyFp};
use num_rational::Rational64;
use serde::Serialize;

/// The Deuring–Hasse polynomial `H_p(λ) = Σ_{i≤m} C(m,i)² λ^i`, `m = (p−1)/2`,
/// over GF(p). Its roots are the supersingular Legendre parameters.
pub fn hasse_poly(p: u64) -> Result<PolyFp> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::invalid(format!(
            "Hasse polynomial needs a prime > 3, got {p}"
        )));
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let m = (p - 1) / 2;
    let mut coeffs = Vec::with_capacity(m as usize + 1);
    let mut binom = 1u64; // C(m, 0)
    coeffs.push(1u64);
    for i in 0..m {
        binom = mulmod(binom, (m - i) % p);
        binom = mulmod(binom, modinv_u64(i + 1, p));
        coeffs.push(mulmod(binom, binom));
    }
    let h = PolyFp::new(p, coeffs);
    // λ = 0 and λ = 1 are the punctures of the Legendre family; a root
    // there would make the j-map below meaningless.
    if h.eval_fp2(&Fp2Elem::zero(p)).is_zero() || h.eval_fp2(&Fp2Elem::one(p)).is_zero() {
        return Err(Error::internal(format!(
            "H_{p} vanishes at a puncture of the λ-line"
        )));
    }
    Ok(h)
}

/// A short Weierstrass model `y² = x³ + ax + b` with the given j-invariant
/// (characteristic > 3). The generic model is nonsingular whenever
/// `j ∉ {0, 1728}`, and those two cases get their standard curves.
pub fn curve_for_j(j: &Fp2Elem) -> Result<(Fp2Elem, Fp2Elem)> {
    let p = j.p();
    if p <= 3 {
        return Err(Error::invalid(
            "no short Weierstrass model in characteristic 2 or 3",
        ));
    }
    if j.is_zero() {
        return Ok((Fp2Elem::zero(p), Fp2Elem::one(p)));
    }
    if *j == Fp2Elem::scalar(1728 % p, p) {
        return Ok((Fp2Elem::one(p), Fp2Elem::zero(p)));
    }
    let k = Fp2Elem::scalar(1728 % p, p).sub(j);
    let a = Fp2Elem::scalar(3, p).mul(j).mul(&k);
    let b = Fp2Elem::scalar(2, p).mul(j).mul(&k).mul(&k);
    Ok((a, b))
}

/// Point-count oracle for supersingularity: the curve with invariant `j`
/// is supersingular iff its Frobenius trace over GF(p²) is divisible by
/// `p`, i.e. iff the affine point count over GF(p²) is ≡ 0 mod p.
pub fn is_supersingular_j(j: &Fp2Elem) -> Result<bool> {
    let p = j.p();
    let (a, b) = curve_for_j(j)?;
    let count = count_affine_points(&a, &b, BaseField::Fp2)?;
    Ok(count % p == 0)
}

/// The locus and its bookkeeping for one prime: the GF(p)-rational
/// invariants, the Frobenius-conjugate pairs beyond GF(p), automorphism
/// orders, and the minimal order `m_p`.
#[derive(Clone, Debug)]
pub struct SupersingularData {
    pub p: u64,
    /// j-invariants lying in GF(p), as integers in `[0, p)`, ascending.
    pub s1: Vec<u64>,
    /// Conjugate pairs outside GF(p); within a pair the representative
    /// with the smaller coordinates comes first, pairs sorted likewise.
    pub s2: Vec<(Fp2Elem, Fp2Elem)>,
    pub aut_orders: BTreeMap<Fp2Elem, u64>,
    pub m_p: u64,
}

/// `#Aut(E)` for a supersingular curve with invariant `j` in
/// characteristic `p > 3`: 6 at `j = 0`, 4 at `j = 1728`, else 2.
pub fn aut_order(j: &Fp2Elem, p: u64) -> u64 {
    assert!(p > 3, "automorphism orders are tabulated only for p > 3");
    if j.is_zero() {
        6
    } else if *j == Fp2Elem::scalar(1728 % p, p) {
        4
    } else {
        2
    }
}

/// `j(λ) = 2⁸ (λ²−λ+1)³ / (λ²(λ−1)²)` — the Legendre-to-j covering map.
fn j_of_lambda(lam: &Fp2Elem) -> Result<Fp2Elem> {
    let p = lam.p();
    let one = Fp2Elem::one(p);
    let num = lam.mul(lam).sub(lam).add(&one);
    let num3 = num.mul(&num).mul(&num);
    let lam1 = lam.sub(&one);
    let den = lam.mul(lam).mul(&lam1).mul(&lam1);
    Ok(Fp2Elem::scalar(256 % p, p).mul(&num3).mul(&den.inv()?))
}

/// Exhaustive point-count sweep: the set of supersingular j over GF(p²).
/// Counting uses a precomputed square table (one pass of squarings) so a
/// full sweep is quartic in `p` with constant work per point; the honest
/// per-point Euler-criterion counter re-verifies a sample afterwards.
fn oracle_ss_set(p: u64) -> Result<BTreeSet<Fp2Elem>> {
    let pp = (p * p) as usize;
    let index = |e: &Fp2Elem| (e.a * p + e.b) as usize;
    let mut is_sq = vec![false; pp];
    let mut cubes = Vec::with_capacity(pp);
    for a in 0..p {
        for b in 0..p {
            let x = Fp2Elem::new(a, b, p);
            is_sq[index(&x.mul(&x))] = true;
            cubes.push((x, x.mul(&x).mul(&x)));
        }
    }
    let mut found = BTreeSet::new();
    for ja in 0..p {
        for jb in 0..p {
            let j = Fp2Elem::new(ja, jb, p);
            let (a, b) = curve_for_j(&j)?;
            let mut count = 0u64;
            for (x, x3) in &cubes {
                let z = x3.add(&a.mul(x)).add(&b);
                if z.is_zero() {
                    count += 1;
                } else if is_sq[index(&z)] {
                    count += 2;
                }
            }
            if count % p == 0 {
                found.insert(j);
            }
        }
    }
    Ok(found)
}

fn build(p: u64, with_oracle: bool) -> Result<SupersingularData> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::invalid(format!(
            "supersingular data needs a prime > 3, got {p}"
        )));
    }
    let hasse_set: BTreeSet<Fp2Elem> = hasse_poly(p)?
        .roots_in_fp2()?
        .iter()
        .map(j_of_lambda)
        .collect::<Result<_>>()?;
    if hasse_set.is_empty() {
        return Err(Error::internal(format!("H_{p} found no roots in GF(p²)")));
    }
    if with_oracle {
        let oracle = oracle_ss_set(p)?;
        if oracle != hasse_set {
            return Err(Error::internal(format!(
                "supersingular sets disagree for p = {p}: Hasse route found {}, point counts found {}",
                hasse_set.len(),
                oracle.len()
            )));
        }
        // A sample gets the slow per-point counter too, tying the fast
        // square-table sweep back to first principles.
        for j in hasse_set.iter().chain(
            (0..5)
                .map(|a| Fp2Elem::scalar(a, p))
                .collect::<Vec<_>>()
                .iter(),
        ) {
            if is_supersingular_j(j)? != hasse_set.contains(j) {
                return Err(Error::internal(format!(
                    "per-point supersingularity oracle disagrees at j = {j} for p = {p}"
                )));
            }
        }
    }

    let s1: Vec<u64> = hasse_set
        .iter()
        .filter(|j| j.is_fp())
        .map(|j| j.a)
        .collect();
    let mut s2 = Vec::new();
    let mut seen = BTreeSet::new();
    for j in hasse_set.iter().filter(|j| !j.is_fp()) {
        if seen.contains(j) {
            continue;
        }
        let conj = j.frobenius();
        if !hasse_set.contains(&conj) {
            return Err(Error::internal(format!(
                "supersingular locus not Frobenius-stable for p = {p}"
            )));
        }
        seen.insert(conj);
        s2.push((*j, conj));
    }

    let aut_orders: BTreeMap<Fp2Elem, u64> =
        hasse_set.iter().map(|j| (*j, aut_order(j, p))).collect();
    let mass = aut_orders
        .values()
        .map(|&n| Rational64::new(1, n as i64))
        .fold(Rational64::new(0, 1), |acc, r| acc + r);
    if mass != Rational64::new(p as i64 - 1, 24) {
        return Err(Error::internal(format!(
            "Eichler mass formula fails for p = {p}: got {mass}, want ({p} - 1)/24"
        )));
    }
    let m_p = *aut_orders.values().min().expect("locus is nonempty");
    Ok(SupersingularData {
        p,
        s1,
        s2,
        aut_orders,
        m_p,
    })
}

/// Compute the supersingular locus with the full cross-check: Hasse-root
/// route and exhaustive point-count sweep must produce the same set.
pub fn ss_j_set(p: u64) -> Result<SupersingularData> {
    build(p, true)
}

/// Hasse-root route only — for scans over many primes where the quartic
/// oracle sweep would dominate. The Eichler mass check still runs.
pub fn ss_j_set_fast(p: u64) -> Result<SupersingularData> {
    build(p, false)
}

/// Minimal automorphism order of a supersingular curve in characteristic
/// `p`. The characteristic-2 and -3 values are fixed constants (24 and
/// 12); everything else comes from the computed locus.
pub fn minimal_aut_order(p: u64) -> Result<u64> {
    match p {
        2 => Ok(24),
        3 => Ok(12),
        _ => Ok(ss_j_set(p)?.m_p),
    }
}

/// One row of the table of supersingular `J_1`-values: the `−744` column
/// (present iff `j = 0` is supersingular), the `984` column (iff
/// `j = 1728` is), and the remaining values, all reduced to `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table2Row {
    pub p: u64,
    pub col_744: Option<u64>,
    pub col_984: Option<u64>,
    pub others: Vec<u64>,
}

/// The `J_1`-value row for an already-computed locus. Errors when the
/// locus is not GF(p)-rational, because `j − 744` only reduces to a value
/// in `[0, p)` for the rational invariants.
pub fn ss_j1_row(data: &SupersingularData) -> Result<Table2Row> {
    let p = data.p;
    if !data.s2.is_empty() {
        return Err(Error::invalid(format!(
            "no J_1-value row for p = {p}: the supersingular locus is not GF({p})-rational"
        )));
    }
    let mut row = Table2Row {
        p,
        col_744: None,
        col_984: None,
        others: Vec::new(),
    };
    for &j in &data.s1 {
        let alpha_hat = (j + p - 744 % p) % p;
        if j == 0 {
            row.col_744 = Some(alpha_hat);
        } else if j == 1728 % p {
            row.col_984 = Some(alpha_hat);
        } else {
            row.others.push(alpha_hat);
        }
    }
    row.others.sort_unstable();
    Ok(row)
}

/// The supersingular `J_1`-values `j − 744 mod p`, organised into the
/// three columns. Defined only when the whole locus is GF(p)-rational
/// (plus the degenerate rows for p = 2, 3, where j = 0 = 1728). Built on
/// the Hasse-root route; the point-counting cross-check lives with
/// [`ss_j_set`].
pub fn ss_j1_table(p: u64) -> Result<Table2Row> {
    if p == 2 || p == 3 {
        return Ok(Table2Row {
            p,
            col_744: Some(0),
            col_984: Some(0),
            others: Vec::new(),
        });
    }
    ss_j1_row(&ss_j_set_fast(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hasse_poly_small_cases() {
        let h5 = hasse_poly(5).unwrap();
        assert_eq!((h5.coeff(0), h5.coeff(1), h5.coeff(2)), (1, 4, 1));
        assert_eq!(h5.degree(), Some(2));
        let h7 = hasse_poly(7).unwrap();
        assert_eq!(
            (h7.coeff(0), h7.coeff(1), h7.coeff(2), h7.coeff(3)),
            (1, 2, 2, 1)
        );
        assert_eq!(hasse_poly(13).unwrap().degree(), Some(6));
        assert!(hasse_poly(3).is_err());
        assert!(hasse_poly(9).is_err());
    }

    #[test]
    fn curve_models_have_the_right_j_invariant() {
        // j(a, b) = 1728·4a³/(4a³ + 27b²), checked over GF(11) and GF(13)
        // for every j including non-rational ones.
        for p in [11u64, 13] {
            for ja in 0..p {
                for jb in 0..p {
                    let j = Fp2Elem::new(ja, jb, p);
                    let (a, b) = curve_for_j(&j).unwrap();
                    let a3 = a.mul(&a).mul(&a).mul(&Fp2Elem::scalar(4, p));
                    let b2 = b.mul(&b).mul(&Fp2Elem::scalar(27, p));
                    let back = Fp2Elem::scalar(1728 % p, p)
                        .mul(&a3)
                        .mul(&a3.add(&b2).inv().unwrap());
                    assert_eq!(back, j, "p = {p}");
                }
            }
        }
    }

    #[test]
    fn loci_for_the_first_primes() {
        let d5 = ss_j_set(5).unwrap();
        assert_eq!(d5.s1, vec![0]);
        assert!(d5.s2.is_empty());
        assert_eq!(d5.m_p, 6);

        let d7 = ss_j_set(7).unwrap();
        assert_eq!(d7.s1, vec![1728 % 7]);
        assert_eq!(d7.m_p, 4);

        let d11 = ss_j_set(11).unwrap();
        assert_eq!(d11.s1, vec![0, 1]); // j = 0 and j = 1728 ≡ 1
        assert_eq!(d11.m_p, 4);

        let d13 = ss_j_set(13).unwrap();
        assert_eq!(d13.s1, vec![5]);
        assert_eq!(d13.m_p, 2);
    }

    #[test]
    fn rationality_fails_first_at_37() {
        for p in [17u64, 19, 23, 29, 31] {
            assert!(ss_j_set(p).unwrap().s2.is_empty(), "p = {p}");
        }
        let d37 = ss_j_set(37).unwrap();
        assert!(!d37.s2.is_empty());
        assert_eq!(d37.m_p, 2);
        assert!(ss_j1_table(37).is_err());
    }

    #[test]
    fn conjugate_pairs_are_frobenius_stable_and_ordered() {
        let d = ss_j_set(37).unwrap();
        for (x, y) in &d.s2 {
            assert_eq!(x.frobenius(), *y);
            assert!(!x.is_fp());
            assert!(x < y);
        }
        let total = d.s1.len() + 2 * d.s2.len();
        assert_eq!(total, d.aut_orders.len());
    }

    #[test]
    fn fast_route_matches_checked_route() {
        for p in [5u64, 29, 37, 79] {
            let full = ss_j_set(p).unwrap();
            let fast = ss_j_set_fast(p).unwrap();
            assert_eq!(full.s1, fast.s1);
            assert_eq!(full.s2, fast.s2);
            assert_eq!(full.m_p, fast.m_p);
        }
    }

    #[test]
    fn minimal_aut_orders_match_the_known_list() {
        assert_eq!(minimal_aut_order(2).unwrap(), 24);
        assert_eq!(minimal_aut_order(3).unwrap(), 12);
        assert_eq!(minimal_aut_order(5).unwrap(), 6);
        assert_eq!(minimal_aut_order(7).unwrap(), 4);
        assert_eq!(minimal_aut_order(11).unwrap(), 4);
        for p in [13u64, 17, 19, 23, 29, 31, 41, 47, 59, 71] {
            assert_eq!(minimal_aut_order(p).unwrap(), 2, "p = {p}");
        }
    }

    #[test]
    fn j1_value_rows_match_the_frozen_table() {
        type Row = (u64, Option<u64>, Option<u64>, &'static [u64]);
        let expected: [Row; 15] = [
            (2, Some(0), Some(0), &[]),
            (3, Some(0), Some(0), &[]),
            (5, Some(1), None, &[]),
            (7, None, Some(4), &[]),
            (11, Some(4), Some(5), &[]),
            (13, None, None, &[2]),
            (17, Some(4), None, &[12]),
            (19, None, Some(15), &[4]),
            (23, Some(15), Some(18), &[11]),
            (29, Some(10), None, &[6, 12]),
            (31, None, Some(23), &[2, 4]),
            (41, Some(35), None, &[22, 26, 38]),
            (47, Some(8), Some(44), &[5, 17, 18]),
            (59, Some(23), Some(40), &[11, 12, 38, 51]),
            (71, Some(37), Some(61), &[6, 7, 14, 32, 54]),
        ];
        for (p, c744, c984, others) in expected {
            let row = ss_j1_table(p).unwrap();
            assert_eq!(row.col_744, c744, "p = {p}");
            assert_eq!(row.col_984, c984, "p = {p}");
            assert_eq!(row.others, others.to_vec(), "p = {p}");
            // Column membership is governed by congruence conditions.
            if p > 3 {
                assert_eq!(row.col_744.is_some(), p % 3 == 2, "p = {p}");
                assert_eq!(row.col_984.is_some(), p % 4 == 3, "p = {p}");
            }
        }
    }

    #[test]
    fn nonrational_loci_have_minimal_aut_order_two() {
        // Every prime in (71, 130] has a conjugate pair, and m_p = 2 there.
        for p in (72u64..=130).filter(|&n| is_prime(n)) {
            let d = ss_j_set_fast(p).unwrap();
            assert!(!d.s2.is_empty(), "p = {p}");
            assert_eq!(d.m_p, 2, "p = {p}");
        }
    }
}
