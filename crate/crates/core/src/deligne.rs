//! The p-adic structure of `pJ_1|U_p`: exact computation, valuation, and
//! the partial-fraction expansion over the supersingular locus.
//!
//! For the primes where `Γ₀(p)+` has genus zero there is an expansion
//!
//! ```text
//! pJ_1|U_p = −Σ_{α̂} Σ_{n≥1} A_n(α̂) (J_1 − α̂)^{−n},
//! ```
//!
//! with one pole per supersingular `J_1`-value `α̂` and integer
//! coefficients whose p-adic valuations are forced upward:
//! `v_p(A_n) ≥ (3np+1)/(p+1)` when `α̂ ≡ −744`, `≥ (2np+1)/(p+1)` when
//! `α̂ ≡ 984`, `≥ (np+1)/(p+1)` otherwise — sharp at `n = 1` for `p > 3`.
//! [`fit_partial_fractions`] recovers the `A_n` mod `p^K` from an
//! overdetermined linear system on q-expansion coefficients and refuses
//! to hand back a fit whose extra equations do not vanish. The truncated
//! congruences that drive the valuation arguments
//! (`pJ_1|U_p + Σ A_1(α̂_i)(J_1−α̂_i)^{−1} ≡ 0 mod p²` over the plain
//! classes, and its mod-p³ refinement) are checked by
//! [`congruence_mod_p2`] and [`congruence_mod_p3`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::arith::{modinv_bigint, vp_bigint};
use crate::congruence::is_genus0_plus;
use crate::error::{Error, Result};
use crate::etaforms::{faber_poly, j1_cached};
use crate::heckeops::{u_operator, v_operator};
use crate::qseries::{poly_eval, vp_min, QSeries, Valuation};
use crate::supersingular::ss_j1_table;

/// `p·(J_1|U_p)` to the given precision, computed twice: directly from
/// the coefficient extraction, and as `Φ_p(J_1) − J_1|V_p` via the Faber
/// polynomial. The two must agree on their common window.
pub fn p_j1_up(p: u64, prec: i64) -> Result<QSeries> {
    if prec < 2 {
        return Err(Error::invalid(format!(
            "pJ_1|U_p needs at least two coefficients, got precision {prec}"
        )));
    }
    let pi = p as i64;
    let j1_fine = j1_cached(pi * prec)?;
    let direct = u_operator(&j1_fine, p)?.scale(p);

    let phi = faber_poly(p as usize, pi + 2)?;
    let j1_mid = j1_cached(prec + pi - 1)?;
    let evaluated = poly_eval(phi.poly(), &j1_mid);
    let j1_coarse = j1_cached((prec + pi - 1).div_euclid(pi) + 1)?;
    let alternative = evaluated.sub(&v_operator(&j1_coarse, p)?);

    let overlap = direct.sub(&alternative);
    if !overlap.is_zero_on_window() {
        return Err(Error::internal(format!(
            "the two computations of {p}·J_1|U_{p} disagree: {overlap}"
        )));
    }
    Ok(direct)
}

/// `v_p(pJ_1|U_p)` over the first `window` positive coefficients, with a
/// stabilisation check: the minimum must not move when the window
/// doubles, otherwise the window was too small to trust.
pub fn vp_p_j1_up(p: u64, window: i64) -> Result<Valuation> {
    if !is_genus0_plus(p)? {
        return Err(Error::invalid(format!(
            "v_p(pJ_1|U_p) is examined only for genus-zero-plus primes, not {p}"
        )));
    }
    if window < 1 {
        return Err(Error::invalid("window must be positive"));
    }
    let f = p_j1_up(p, 2 * window + 2)?;
    let narrow = vp_min(&f, p, 1..=window)?;
    let wide = vp_min(&f, p, 1..=2 * window)?;
    if narrow.expect_finite()? != wide.expect_finite()? {
        return Err(Error::insufficient(format!(
            "v_{p}(pJ_1|U_{p}) has not stabilised: {narrow} on [1,{window}] vs {wide} on [1,{}]",
            2 * window
        )));
    }
    Ok(narrow)
}

/// The fitted partial-fraction data for one prime: coefficients
/// `A_n(α̂)` as residues mod `p^K`, for `1 ≤ n ≤ nmax` and `α̂` running
/// over the supersingular `J_1`-values lifted to `[0, p)`.
#[derive(Clone, Debug)]
pub struct DeligneFit {
    pub p: u64,
    pub k: u32,
    pub nmax: u32,
    /// Supersingular `J_1`-values, canonically lifted, ascending.
    pub alpha_hats: Vec<u64>,
    /// `(α̂, n) → A_n(α̂) mod p^K`, residues in `[0, p^K)`.
    pub a: BTreeMap<(u64, u32), BigInt>,
    /// Minimum `v_p` over the extra (unused) equations, capped at `K`.
    pub residual_valuation: u64,
    /// Do all fitted coefficients respect the class-wise lower bounds?
    pub bounds_ok: bool,
}

/// The class of a supersingular `J_1`-value: the exceptional values
/// `−744` (j = 0) and `984` (j = 1728) carry stronger bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaClass {
    Minus744,
    Plus984,
    Other,
}

pub fn alpha_class(alpha_hat: u64, p: u64) -> AlphaClass {
    if alpha_hat == (p - 744 % p) % p {
        AlphaClass::Minus744
    } else if alpha_hat == 984 % p {
        AlphaClass::Plus984
    } else {
        AlphaClass::Other
    }
}

/// The lower bound on `v_p(A_n(α̂))`: `⌈(cnp+1)/(p+1)⌉` with `c = 3, 2, 1`
/// by class.
pub fn a_n_lower_bound(class: AlphaClass, n: u32, p: u64) -> u64 {
    let c = match class {
        AlphaClass::Minus744 => 3,
        AlphaClass::Plus984 => 2,
        AlphaClass::Other => 1,
    };
    (c * n as u64 * p + 1).div_ceil(p + 1)
}

impl DeligneFit {
    /// `v_p(A_n(α̂))` as seen through the residue: `None` means the
    /// residue is zero, i.e. the valuation is at least `K`.
    pub fn a_valuation(&self, alpha_hat: u64, n: u32) -> Option<u64> {
        let residue = self.a.get(&(alpha_hat, n))?;
        vp_bigint(self.p, residue)
    }
}

fn alpha_hats_for(p: u64) -> Result<Vec<u64>> {
    let row = ss_j1_table(p)?;
    let mut alphas: Vec<u64> = row
        .col_744
        .into_iter()
        .chain(row.col_984)
        .chain(row.others)
        .collect();
    alphas.sort_unstable();
    Ok(alphas)
}

/// The basis series `(J_1 − α̂)^{−n}` for `n = 1..=nmax`, each with
/// precision at least `prec`. Integer q-series with leading term `q^n`.
fn pole_basis(alpha_hat: u64, nmax: u32, prec: i64) -> Result<Vec<QSeries>> {
    let j1 = j1_cached(prec)?;
    let shifted = j1.add_scalar(-BigInt::from(alpha_hat));
    let inverse = shifted.inv()?; // precision prec + 2, leading q^1
    let mut out = Vec::with_capacity(nmax as usize);
    out.push(inverse.clone());
    for _ in 1..nmax {
        let next = out.last().expect("nonempty").mul(&inverse);
        out.push(next);
    }
    Ok(out)
}

/// Gauss–Jordan over ℤ/p^K with unit pivots. `mat` is rows of
/// `ncols + 1` entries (coefficients then right-hand side), already
/// reduced mod `p^K`. Returns the unique solution and the minimum
/// valuation over the leftover equations (capped at `K`), which must
/// reach `K` for the system to count as solved.
fn solve_mod_pk(
    mut mat: Vec<Vec<BigInt>>,
    ncols: usize,
    p: u64,
    k: u32,
) -> Result<(Vec<BigInt>, u64)> {
    let modulus = BigInt::from(p).pow(k);
    let rows = mat.len();
    assert!(rows > ncols, "the system must be overdetermined");
    for col in 0..ncols {
        let pivot_row = (col..rows)
            .find(|&r| vp_bigint(p, &mat[r][col]) == Some(0))
            .ok_or_else(|| {
                Error::invalid(format!(
                    "no unit pivot for unknown {col} while fitting mod {p}^{k}"
                ))
            })?;
        mat.swap(col, pivot_row);
        let inv =
            modinv_bigint(&mat[col][col], &modulus).expect("pivot is a unit mod p, hence mod p^K");
        for entry in &mut mat[col][col..=ncols] {
            *entry = (&*entry * &inv).mod_floor(&modulus);
        }
        let pivot_vals: Vec<BigInt> = mat[col][col..=ncols].to_vec();
        for (r, row) in mat.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (entry, pivot) in row[col..=ncols].iter_mut().zip(&pivot_vals) {
                let delta = (&factor * pivot).mod_floor(&modulus);
                *entry = (&*entry - delta).mod_floor(&modulus);
            }
        }
    }
    let mut residual = k as u64;
    for row in mat.iter().take(rows).skip(ncols) {
        let r = &row[ncols];
        if !r.is_zero() {
            residual = residual.min(vp_bigint(p, r).expect("nonzero residue"));
        }
    }
    if residual < k as u64 {
        return Err(Error::invalid(format!(
            "partial-fraction system for p = {p} is inconsistent mod {p}^{k}: \
             residual valuation {residual}"
        )));
    }
    let solution = (0..ncols).map(|c| mat[c][ncols].clone()).collect();
    Ok((solution, residual))
}

/// Fit the `A_n(α̂)` mod `p^K` from the q-expansion of `−pJ_1|U_p`,
/// using twelve more equations than unknowns; the extras must vanish.
pub fn fit_partial_fractions(p: u64, k: u32, nmax: u32) -> Result<DeligneFit> {
    if p <= 3 || !is_genus0_plus(p)? {
        return Err(Error::invalid(format!(
            "the partial-fraction expansion is fitted only for genus-zero-plus p > 3, not {p}"
        )));
    }
    if k < 2 {
        return Err(Error::invalid(
            "p-adic working precision must be at least 2",
        ));
    }
    if nmax < k + 2 {
        return Err(Error::invalid(format!(
            "nmax = {nmax} is too small for K = {k}: truncation needs nmax ≥ K + 2"
        )));
    }
    let alphas = alpha_hats_for(p)?;
    let unknowns = alphas.len() * nmax as usize;
    let m = unknowns as i64 + 12;
    let modulus = BigInt::from(p).pow(k);

    let rhs = p_j1_up(p, m + 1)?.neg();
    let mut columns: Vec<((u64, u32), QSeries)> = Vec::with_capacity(unknowns);
    for &alpha in &alphas {
        for (i, series) in pole_basis(alpha, nmax, m + 1)?.into_iter().enumerate() {
            columns.push(((alpha, i as u32 + 1), series));
        }
    }
    let mut mat = Vec::with_capacity(m as usize);
    for e in 1..=m {
        let mut row: Vec<BigInt> = columns
            .iter()
            .map(|(_, s)| {
                s.coeff(e)
                    .expect("basis has precision > m")
                    .mod_floor(&modulus)
            })
            .collect();
        row.push(rhs.coeff(e)?.mod_floor(&modulus));
        mat.push(row);
    }
    let (solution, residual_valuation) = solve_mod_pk(mat, unknowns, p, k)?;

    let mut a = BTreeMap::new();
    let mut bounds_ok = true;
    for (key, value) in columns.iter().map(|(key, _)| *key).zip(solution) {
        let bound = a_n_lower_bound(alpha_class(key.0, p), key.1, p);
        if bound < k as u64 {
            let v = vp_bigint(p, &value).unwrap_or(k as u64);
            if v < bound {
                bounds_ok = false;
            }
        }
        a.insert(key, value);
    }
    Ok(DeligneFit {
        p,
        k,
        nmax,
        alpha_hats: alphas,
        a,
        residual_valuation,
        bounds_ok,
    })
}

/// Try the fit at `k_target` and fall back one level at a time (never
/// below 2). The returned fit's `k` records what was achieved.
pub fn fit_with_fallback(p: u64, k_target: u32, nmax: u32) -> Result<DeligneFit> {
    let mut last_err = None;
    for k in (2..=k_target.max(2)).rev() {
        match fit_partial_fractions(p, k, nmax.max(k + 2)) {
            Ok(fit) => return Ok(fit),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt was made"))
}

/// The `n = 1` sharpness report: fitted `v_p(A_1(α̂))` for each class,
/// against the expected exact values 3 / 2 / 1.
#[derive(Clone, Debug)]
pub struct A1Valuations {
    pub p: u64,
    pub k: u32,
    /// `(α̂, fitted valuation, expected valuation)`, ascending in `α̂`.
    pub entries: Vec<(u64, u64, u64)>,
    pub all_sharp: bool,
}

pub fn check_a1_valuations(p: u64) -> Result<A1Valuations> {
    let fit = fit_partial_fractions(p, 4, 6)?;
    let mut entries = Vec::new();
    let mut all_sharp = true;
    for &alpha in &fit.alpha_hats {
        let expected = match alpha_class(alpha, p) {
            AlphaClass::Minus744 => 3,
            AlphaClass::Plus984 => 2,
            AlphaClass::Other => 1,
        };
        let got = fit.a_valuation(alpha, 1).unwrap_or(fit.k as u64);
        if got != expected {
            all_sharp = false;
        }
        entries.push((alpha, got, expected));
    }
    Ok(A1Valuations {
        p,
        k: fit.k,
        entries,
        all_sharp,
    })
}

/// Assemble `pJ_1|U_p + Σ A_n(α̂)(J_1 − α̂)^{−n}` over the given
/// `(class-filter, max n)` selection and return its valuation over
/// `1..=window`.
fn truncated_congruence_valuation(
    p: u64,
    fit: &DeligneFit,
    keep: impl Fn(AlphaClass, u32) -> bool,
    window: i64,
) -> Result<Valuation> {
    let mut acc = p_j1_up(p, window + 1)?;
    for &alpha in &fit.alpha_hats {
        let class = alpha_class(alpha, p);
        for (i, series) in pole_basis(alpha, fit.nmax, window + 1)?
            .into_iter()
            .enumerate()
        {
            let n = i as u32 + 1;
            if !keep(class, n) {
                continue;
            }
            let coefficient = fit.a[&(alpha, n)].clone();
            acc = acc.add(&series.scale(coefficient));
        }
    }
    vp_min(&acc, p, 1..=window)
}

/// The mod-p² congruence: `pJ_1|U_p + Σ_i A_1(α̂_i)(J_1 − α̂_i)^{−1} ≡ 0`
/// over the plain classes alone. Returns the observed valuation, which
/// must be ≥ 2.
pub fn congruence_mod_p2(p: u64, fit: &DeligneFit, window: i64) -> Result<Valuation> {
    truncated_congruence_valuation(
        p,
        fit,
        |class, n| class == AlphaClass::Other && n == 1,
        window,
    )
}

/// The mod-p³ refinement: also keep the `984`-class `n = 1` term and the
/// plain-class `n = 2` terms. The result must be ≥ 3.
pub fn congruence_mod_p3(p: u64, fit: &DeligneFit, window: i64) -> Result<Valuation> {
    truncated_congruence_valuation(
        p,
        fit,
        |class, n| match class {
            AlphaClass::Other => n <= 2,
            AlphaClass::Plus984 => n == 1,
            AlphaClass::Minus744 => false,
        },
        window,
    )
}

/// Are the fitted `A_1` residues stable mod p² when `nmax` grows by two?
pub fn fit_is_stable(p: u64, k: u32, nmax: u32) -> Result<bool> {
    let base = fit_partial_fractions(p, k, nmax)?;
    let wider = fit_partial_fractions(p, k, nmax + 2)?;
    let p2 = BigInt::from(p).pow(2);
    for &alpha in &base.alpha_hats {
        let lhs = base.a[&(alpha, 1)].mod_floor(&p2);
        let rhs = wider.a[&(alpha, 1)].mod_floor(&p2);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Signed};

    #[test]
    fn p_j1_up_openings() {
        let f2 = p_j1_up(2, 12).unwrap();
        assert_eq!(f2.coeff(0).unwrap(), BigInt::zero());
        assert_eq!(
            f2.coeff(1).unwrap(),
            BigInt::from(2) * BigInt::from(21493760)
        );
        let f11 = p_j1_up(11, 8).unwrap();
        let m = BigInt::from(121);
        for e in 1..8 {
            assert!(f11.coeff(e).unwrap().mod_floor(&m).is_zero(), "q^{e}");
        }
    }

    #[test]
    fn vp_values_match_the_propositions() {
        assert_eq!(vp_p_j1_up(11, 30).unwrap().expect_finite().unwrap(), 2);
        assert_eq!(vp_p_j1_up(13, 30).unwrap().expect_finite().unwrap(), 1);
        assert_eq!(vp_p_j1_up(2, 30).unwrap().expect_finite().unwrap(), 12);
        assert_eq!(vp_p_j1_up(5, 30).unwrap().expect_finite().unwrap(), 3);
        assert!(vp_p_j1_up(37, 30).is_err());
    }

    #[test]
    fn class_bounds() {
        // p = 11: −744 ≡ 4, 984 ≡ 5.
        assert_eq!(alpha_class(4, 11), AlphaClass::Minus744);
        assert_eq!(alpha_class(5, 11), AlphaClass::Plus984);
        assert_eq!(alpha_class(2, 13), AlphaClass::Other);
        // ⌈(3·1·11 + 1)/12⌉ = 3, ⌈(2·11+1)/12⌉ = 2, ⌈(11+1)/12⌉ = 1.
        assert_eq!(a_n_lower_bound(AlphaClass::Minus744, 1, 11), 3);
        assert_eq!(a_n_lower_bound(AlphaClass::Plus984, 1, 11), 2);
        assert_eq!(a_n_lower_bound(AlphaClass::Other, 1, 11), 1);
        assert_eq!(a_n_lower_bound(AlphaClass::Other, 3, 5), 3);
    }

    #[test]
    fn pole_basis_is_triangular_with_unit_lead() {
        let basis = pole_basis(7, 3, 12).unwrap();
        for (i, series) in basis.iter().enumerate() {
            let n = i as i64 + 1;
            assert_eq!(series.lo(), n);
            assert_eq!(series.coeff(n).unwrap(), BigInt::one());
        }
        // (J_1 − 7)^{-1} = q + 7q² + … : the next coefficient is α̂ itself.
        assert_eq!(basis[0].coeff(2).unwrap(), BigInt::from(7));
    }

    #[test]
    fn fit_for_eleven_recovers_the_sharp_valuations() {
        let fit = fit_partial_fractions(11, 4, 6).unwrap();
        assert_eq!(fit.alpha_hats, vec![4, 5]);
        assert_eq!(fit.residual_valuation, 4);
        assert!(fit.bounds_ok);
        assert_eq!(fit.a_valuation(4, 1).unwrap(), 3);
        assert_eq!(fit.a_valuation(5, 1).unwrap(), 2);
    }

    #[test]
    fn fit_for_thirteen_has_a_single_plain_pole() {
        let fit = fit_partial_fractions(13, 3, 6).unwrap();
        assert_eq!(fit.alpha_hats, vec![2]);
        assert_eq!(fit.a_valuation(2, 1).unwrap(), 1);
        assert!(fit.bounds_ok);
    }

    #[test]
    fn a1_reports_for_small_primes() {
        let r5 = check_a1_valuations(5).unwrap();
        assert_eq!(r5.entries, vec![(1, 3, 3)]);
        assert!(r5.all_sharp);
        let r7 = check_a1_valuations(7).unwrap();
        assert_eq!(r7.entries, vec![(4, 2, 2)]);
        assert!(r7.all_sharp);
        let r47 = check_a1_valuations(47).unwrap();
        let expected: Vec<(u64, u64, u64)> =
            vec![(5, 1, 1), (8, 3, 3), (17, 1, 1), (18, 1, 1), (44, 2, 2)];
        assert_eq!(r47.entries, expected);
        assert!(r47.all_sharp);
    }

    #[test]
    fn congruences_hold_for_twenty_three() {
        let fit = fit_partial_fractions(23, 4, 6).unwrap();
        let v2 = congruence_mod_p2(23, &fit, 25).unwrap();
        assert!(v2.expect_finite().unwrap() >= 2, "mod p²: {v2}");
        let v3 = congruence_mod_p3(23, &fit, 25).unwrap();
        assert!(v3.expect_finite().unwrap() >= 3, "mod p³: {v3}");
    }

    #[test]
    fn fits_are_stable_under_nmax_growth() {
        assert!(fit_is_stable(11, 4, 6).unwrap());
        assert!(fit_is_stable(13, 4, 6).unwrap());
    }

    #[test]
    fn fit_rejects_bad_arguments() {
        assert!(fit_partial_fractions(37, 4, 6).is_err());
        assert!(fit_partial_fractions(11, 1, 6).is_err());
        assert!(fit_partial_fractions(11, 4, 4).is_err());
    }

    #[test]
    fn residues_are_reduced() {
        let fit = fit_partial_fractions(7, 4, 6).unwrap();
        let modulus = BigInt::from(7).pow(4);
        for value in fit.a.values() {
            assert!(!value.is_negative() && *value < modulus);
        }
    }
}
