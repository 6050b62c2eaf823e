//! Truncated Laurent series in `q` with exact integer coefficients.
//!
//! A [`QSeries`] stores the coefficients of `q^lo, q^(lo+1), …, q^(prec-1)`
//! densely, together with the exclusive truncation order `prec`. Exponents
//! at or above `prec` are *unknown*, never implicitly zero; exponents below
//! `lo` are genuine zeros (the canonical form trims only true zeros from the
//! front). Every operation propagates the tightest precision derivable from
//! its operands, so a coefficient can be read back exactly when the inputs
//! determined it and is an error otherwise. This discipline is what makes
//! the p-adic valuation statements downstream trustworthy: a fabricated
//! zero would silently inflate a valuation.

use crate::arith;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::RangeInclusive;

#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    lo: i64,
    coeffs: Vec<BigInt>,
    prec: i64,
}

impl QSeries {
    /// Canonicalise a dense window `[lo, prec)` of coefficients: strip the
    /// leading true zeros, or collapse to the zero-on-window marker
    /// (`coeffs` empty, `lo == prec`).
    fn build(mut lo: i64, mut coeffs: Vec<BigInt>, prec: i64) -> QSeries {
        debug_assert_eq!(coeffs.len() as i64, prec - lo);
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => QSeries {
                lo: prec,
                coeffs: Vec::new(),
                prec,
            },
            Some(k) => {
                if k > 0 {
                    coeffs.drain(..k);
                    lo += k as i64;
                }
                QSeries { lo, coeffs, prec }
            }
        }
    }

    /// The series that is zero on its whole window: `0 + O(q^prec)`.
    pub fn zero(prec: i64) -> QSeries {
        QSeries {
            lo: prec,
            coeffs: Vec::new(),
            prec,
        }
    }

    /// Series from a dense coefficient list starting at exponent `lo`;
    /// the precision is `lo + coeffs.len()`.
    pub fn from_coeffs(lo: i64, coeffs: Vec<impl Into<BigInt>>) -> QSeries {
        let coeffs: Vec<BigInt> = coeffs.into_iter().map(Into::into).collect();
        let prec = lo + coeffs.len() as i64;
        QSeries::build(lo, coeffs, prec)
    }

    /// The constant series `c + O(q^prec)`; requires `prec >= 1` so that the
    /// exponent-zero coefficient actually lies inside the window.
    pub fn constant(c: impl Into<BigInt>, prec: i64) -> Result<QSeries> {
        if prec < 1 {
            return Err(Error::invalid(format!(
                "constant term needs prec >= 1, got {prec}"
            )));
        }
        let mut coeffs = vec![BigInt::zero(); prec as usize];
        coeffs[0] = c.into();
        Ok(QSeries::build(0, coeffs, prec))
    }

    pub fn one(prec: i64) -> Result<QSeries> {
        QSeries::constant(1, prec)
    }

    /// The monomial `c·q^k + O(q^prec)` with `c != 0` and `k < prec`.
    pub fn monomial(c: impl Into<BigInt>, k: i64, prec: i64) -> Result<QSeries> {
        let c = c.into();
        if c.is_zero() {
            return Err(Error::invalid("monomial coefficient must be nonzero"));
        }
        if k >= prec {
            return Err(Error::invalid(format!(
                "monomial exponent {k} must lie below prec {prec}"
            )));
        }
        let mut coeffs = vec![BigInt::zero(); (prec - k) as usize];
        coeffs[0] = c;
        Ok(QSeries {
            lo: k,
            coeffs,
            prec,
        })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// True when every coefficient in the window is zero (`O(q^prec)`).
    pub fn is_zero_on_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The coefficient of `q^n`: zero below the canonical window (those are
    /// genuine zeros), an error at or beyond the truncation order.
    pub fn coeff(&self, n: i64) -> Result<BigInt> {
        if n >= self.prec {
            return Err(Error::insufficient(format!(
                "coefficient of q^{n} requested, series known only below q^{}",
                self.prec
            )));
        }
        if n < self.lo {
            return Ok(BigInt::zero());
        }
        Ok(self.coeffs[(n - self.lo) as usize].clone())
    }

    /// Borrowed view of the coefficient of `q^n` for `lo <= n < prec`;
    /// `None` when the exponent is below `lo` (a genuine zero).
    fn coeff_in_window(&self, n: i64) -> Option<&BigInt> {
        if n < self.lo || n >= self.prec {
            return None;
        }
        Some(&self.coeffs[(n - self.lo) as usize])
    }

    /// Restrict to a smaller truncation order. `new_prec` must not exceed
    /// the current precision — a series cannot learn coefficients by fiat.
    pub fn truncate(&self, new_prec: i64) -> QSeries {
        assert!(
            new_prec <= self.prec,
            "truncate({new_prec}) would extend a series known to O(q^{})",
            self.prec
        );
        if new_prec <= self.lo {
            return QSeries::zero(new_prec);
        }
        let len = (new_prec - self.lo) as usize;
        QSeries {
            lo: self.lo,
            coeffs: self.coeffs[..len].to_vec(),
            prec: new_prec,
        }
    }

    /// Multiply by `q^k` (exact: shifts the window).
    pub fn shift(&self, k: i64) -> QSeries {
        QSeries {
            lo: self.lo + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec + k,
        }
    }

    /// Multiply every coefficient by the integer `c`.
    pub fn scale(&self, c: impl Into<BigInt>) -> QSeries {
        let c = c.into();
        if c.is_zero() {
            return QSeries::zero(self.prec);
        }
        QSeries {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|a| a * &c).collect(),
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> QSeries {
        self.scale(-1)
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let prec = self.prec.min(other.prec);
        let lo = self.lo.min(other.lo).min(prec);
        let len = (prec - lo) as usize;
        let mut out = vec![BigInt::zero(); len];
        for src in [self, other] {
            let from = src.lo.max(lo);
            let to = src.prec.min(prec);
            for n in from..to {
                out[(n - lo) as usize] += &src.coeffs[(n - src.lo) as usize];
            }
        }
        QSeries::build(lo, out, prec)
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.neg())
    }

    /// Add the integer `c` to the constant term. When the window does not
    /// reach exponent zero (`prec <= 0`) the constant is invisible and the
    /// series is returned unchanged.
    pub fn add_scalar(&self, c: impl Into<BigInt>) -> QSeries {
        let c = c.into();
        if c.is_zero() || self.prec < 1 {
            return self.clone();
        }
        self.add(&QSeries::constant(c, self.prec).expect("prec >= 1 checked"))
    }

    /// Convolution product. The result carries the tightest honest
    /// precision `min(f.prec + g.lo, g.prec + f.lo)`: the unknown tail of
    /// one factor first contaminates the product at that exponent.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let prec = (self.prec + other.lo).min(other.prec + self.lo);
        if self.is_zero_on_window() || other.is_zero_on_window() {
            return QSeries::zero(prec);
        }
        let lo = self.lo + other.lo;
        let len = (prec - lo).max(0) as usize;
        if len == 0 {
            return QSeries::zero(prec);
        }
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            let top = (len - i).min(other.coeffs.len());
            for (j, b) in other.coeffs.iter().enumerate().take(top) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries::build(lo, out, prec)
    }

    /// Exact quotient `self / g` for `g` with leading coefficient ±1,
    /// by the triangular recurrence `h_n = ±(f_{n+g.lo} − Σ g_i h_{n-i})`.
    /// Result precision: `min(f.prec, g.prec + h.lo) − g.lo`.
    pub fn div(&self, g: &QSeries) -> Result<QSeries> {
        if g.is_zero_on_window() {
            return Err(Error::NotInvertible(
                "division by a series that is zero on its window".into(),
            ));
        }
        let lead = &g.coeffs[0];
        if !lead.magnitude().is_one() {
            return Err(Error::NotInvertible(format!(
                "leading coefficient {lead} is not a unit over the integers"
            )));
        }
        let h_lo = self.lo - g.lo;
        let prec = (self.prec.min(g.prec + h_lo)) - g.lo;
        if prec <= h_lo {
            return Ok(QSeries::zero(prec.min(h_lo)));
        }
        let len = (prec - h_lo) as usize;
        let negate = lead.is_negative();
        let mut h = vec![BigInt::zero(); len];
        for k in 0..len {
            // Coefficient equation at exponent h_lo + k + g.lo.
            let mut acc = self
                .coeff_in_window(h_lo + k as i64 + g.lo)
                .cloned()
                .unwrap_or_else(BigInt::zero);
            let top = (k + 1).min(g.coeffs.len());
            for i in 1..top {
                if !g.coeffs[i].is_zero() && !h[k - i].is_zero() {
                    acc -= &g.coeffs[i] * &h[k - i];
                }
            }
            h[k] = if negate { -acc } else { acc };
        }
        Ok(QSeries::build(h_lo, h, prec))
    }

    /// Multiplicative inverse; requires leading coefficient ±1. The result
    /// has `lo = −self.lo` and precision `self.prec − 2·self.lo`.
    pub fn inv(&self) -> Result<QSeries> {
        if self.is_zero_on_window() {
            return Err(Error::NotInvertible(
                "the zero-on-window series has no inverse".into(),
            ));
        }
        let one_prec = self.prec - self.lo;
        self.div_one(one_prec)
    }

    fn div_one(&self, one_prec: i64) -> Result<QSeries> {
        debug_assert!(one_prec >= 1);
        QSeries::one(one_prec)?.div(self)
    }

    /// Integer power by repeated squaring. `pow(0)` is the constant 1 at
    /// the precision a length-zero product would carry.
    pub fn pow(&self, k: u64) -> Result<QSeries> {
        if k == 0 {
            if self.is_zero_on_window() {
                return Err(Error::invalid(
                    "0^0 for a zero-on-window series is undefined",
                ));
            }
            return QSeries::one(self.prec - self.lo);
        }
        let mut result: Option<QSeries> = None;
        let mut base = self.clone();
        let mut e = k;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        Ok(result.expect("k >= 1"))
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero_on_window() {
            return write!(f, "O(q^{})", self.prec);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let n = self.lo + i as i64;
            let mag = c.magnitude();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_mag = mag.is_one();
            if n == 0 || !unit_mag {
                write!(f, "{mag}")?;
            }
            if n != 0 {
                if !unit_mag {
                    write!(f, "*")?;
                }
                if n == 1 {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{n}")?;
                }
            }
        }
        write!(f, " + O(q^{})", self.prec)
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries[{}, {}): {}", self.lo, self.prec, self)
    }
}

/// The minimum p-adic valuation over a coefficient window, with the first
/// exponent attaining it; [`Valuation::Infinite`] when every inspected
/// coefficient is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite { value: u64, attained_at: i64 },
    Infinite,
}

impl Valuation {
    pub fn value(&self) -> Option<u64> {
        match self {
            Valuation::Finite { value, .. } => Some(*value),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// The finite value, treating an infinite valuation as an internal error
    /// (used where the mathematics guarantees a nonzero coefficient).
    pub fn expect_finite(&self) -> Result<u64> {
        self.value()
            .ok_or_else(|| Error::internal("valuation unexpectedly infinite (window all zero)"))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite { value, attained_at } => {
                write!(f, "{value} (at q^{attained_at})")
            }
            Valuation::Infinite => write!(f, "infinite"),
        }
    }
}

/// Minimum of `v_p(c_n(f))` over `n` in the inclusive `window`. Exponents
/// below the canonical window are genuine zeros and contribute nothing; an
/// exponent at or beyond `f.prec` is an error, because the coefficient there
/// is unknown rather than zero.
pub fn vp_min(f: &QSeries, p: u64, window: RangeInclusive<i64>) -> Result<Valuation> {
    let (a, b) = (*window.start(), *window.end());
    if a > b {
        return Err(Error::invalid(format!("empty valuation window [{a}, {b}]")));
    }
    if !arith::is_prime(p) {
        return Err(Error::invalid(format!("valuation base {p} is not prime")));
    }
    if b >= f.prec {
        return Err(Error::insufficient(format!(
            "valuation window reaches q^{b} but series is known only below q^{}",
            f.prec
        )));
    }
    let mut best: Option<(u64, i64)> = None;
    for n in a.max(f.lo)..=b {
        let c = &f.coeffs[(n - f.lo) as usize];
        if c.is_zero() {
            continue;
        }
        let v = arith::vp_bigint(p, c).expect("nonzero coefficient");
        if best.map_or(true, |(bv, _)| v < bv) {
            best = Some((v, n));
            if v == 0 {
                break;
            }
        }
    }
    Ok(match best {
        Some((value, attained_at)) => Valuation::Finite { value, attained_at },
        None => Valuation::Infinite,
    })
}

/// A polynomial with exact integer coefficients, low degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Build from low-first coefficients; trailing zeros are trimmed.
    pub fn new(coeffs: Vec<impl Into<BigInt>>) -> IntPoly {
        let mut coeffs: Vec<BigInt> = coeffs.into_iter().map(Into::into).collect();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> IntPoly {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn x() -> IntPoly {
        IntPoly::new(vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Evaluation at a series, exact throughout, as the sum of
    /// `c_k · f^k` over the nonzero coefficients. The precision of the
    /// result is limited only by the powers that actually occur: constant
    /// terms are exact and never shrink the window.
    pub fn eval(&self, f: &QSeries) -> QSeries {
        let exact_prec = (f.prec() - f.lo()).max(1);
        if self.coeffs.is_empty() {
            return QSeries::zero(exact_prec);
        }
        // Sentinel precision: the empty sum is exactly zero, so it must not
        // cap the precision of the terms added to it.
        let mut acc = QSeries::zero(i64::MAX);
        let mut power: Option<QSeries> = None;
        for c in self.coeffs.iter().skip(1) {
            power = Some(match power.take() {
                None => f.clone(),
                Some(prev) => prev.mul(f),
            });
            if !c.is_zero() {
                acc = acc.add(&power.as_ref().expect("power set above").scale(c.clone()));
            }
        }
        let c0 = self.coeffs[0].clone();
        if acc.prec() == i64::MAX {
            // Constant polynomial (all higher coefficients were zero).
            return QSeries::constant(c0, exact_prec).expect("exact_prec >= 1");
        }
        acc.add_scalar(c0)
    }

    /// Horner evaluation at an integer.
    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_mag = mag.is_one();
            if k == 0 || !unit_mag {
                write!(f, "{mag}")?;
            }
            if k >= 1 {
                if !unit_mag {
                    write!(f, "*")?;
                }
                if k == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

/// Horner evaluation of an integer polynomial at a series.
pub fn poly_eval(p: &IntPoly, f: &QSeries) -> QSeries {
    p.eval(f)
}
