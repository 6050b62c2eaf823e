//! Arithmetic in GF(p) and GF(p^2), polynomial roots by exhaustion, and
//! brute-force elliptic-curve point counting.
//!
//! GF(p^2) is realised as GF(p)[t]/(t^2 − s) with `s` the smallest positive
//! quadratic non-residue mod p — a deterministic choice, so element
//! coordinates are reproducible across runs. Everything is sized for small
//! primes (p ≤ 1000): root finding scans all p^2 elements and point counts
//! sum the quadratic character over the base field. Deliberately simple —
//! these routines are the independent oracle that the faster supersingular
//! scan is checked against, so they must be easy to believe.

use crate::arith;
use crate::error::{Error, Result};

fn pow_mod(base: u64, mut e: u64, p: u64) -> u64 {
    let m = p as u128;
    let mut acc: u128 = 1;
    let mut b = (base % p) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

/// Legendre symbol of `a` mod an odd prime `p`, as 0, 1, or p − 1.
fn legendre(a: u64, p: u64) -> u64 {
    pow_mod(a % p, (p - 1) / 2, p)
}

/// The smallest positive quadratic non-residue mod an odd prime.
pub fn smallest_nonresidue(p: u64) -> u64 {
    assert!(p >= 3 && arith::is_prime(p), "need an odd prime, got {p}");
    (2..p)
        .find(|&s| legendre(s, p) == p - 1)
        .expect("an odd prime field has a non-residue")
}

/// An element `a + b·t` of GF(p^2) with `t^2 = s`, `s` the canonical
/// non-residue. Elements of GF(p) are exactly those with `b = 0`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Fp2Elem {
    pub a: u64,
    pub b: u64,
    p: u64,
    s: u64,
}

impl Fp2Elem {
    pub fn new(a: u64, b: u64, p: u64) -> Fp2Elem {
        assert!(p < (1 << 16), "component products are done in u64");
        let s = smallest_nonresidue(p);
        Fp2Elem {
            a: a % p,
            b: b % p,
            p,
            s,
        }
    }

    pub fn scalar(a: u64, p: u64) -> Fp2Elem {
        Fp2Elem::new(a, 0, p)
    }

    pub fn zero(p: u64) -> Fp2Elem {
        Fp2Elem::scalar(0, p)
    }

    pub fn one(p: u64) -> Fp2Elem {
        Fp2Elem::scalar(1, p)
    }

    /// The generator `t` itself (a square root of the non-residue).
    pub fn t(p: u64) -> Fp2Elem {
        Fp2Elem::new(0, 1, p)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_fp(&self) -> bool {
        self.b == 0
    }

    fn assert_same_field(&self, other: &Fp2Elem) {
        assert_eq!(self.p, other.p, "mixed characteristic");
    }

    pub fn add(&self, other: &Fp2Elem) -> Fp2Elem {
        self.assert_same_field(other);
        Fp2Elem {
            a: (self.a + other.a) % self.p,
            b: (self.b + other.b) % self.p,
            p: self.p,
            s: self.s,
        }
    }

    pub fn sub(&self, other: &Fp2Elem) -> Fp2Elem {
        self.assert_same_field(other);
        Fp2Elem {
            a: (self.a + self.p - other.a) % self.p,
            b: (self.b + self.p - other.b) % self.p,
            p: self.p,
            s: self.s,
        }
    }

    pub fn neg(&self) -> Fp2Elem {
        Fp2Elem {
            a: (self.p - self.a) % self.p,
            b: (self.p - self.b) % self.p,
            p: self.p,
            s: self.s,
        }
    }

    pub fn mul(&self, other: &Fp2Elem) -> Fp2Elem {
        self.assert_same_field(other);
        let p = self.p;
        // (a + bt)(c + dt) = (ac + s·bd) + (ad + bc)t, with t^2 = s.
        let ac = self.a * other.a % p;
        let bd = self.b * other.b % p;
        let ad = self.a * other.b % p;
        let bc = self.b * other.a % p;
        Fp2Elem {
            a: (ac + self.s * bd) % p,
            b: (ad + bc) % p,
            p,
            s: self.s,
        }
    }

    pub fn pow(&self, mut e: u64) -> Fp2Elem {
        let mut acc = Fp2Elem::one(self.p);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Frobenius x ↦ x^p, which on GF(p^2) is conjugation a + bt ↦ a − bt.
    pub fn frobenius(&self) -> Fp2Elem {
        Fp2Elem {
            a: self.a,
            b: (self.p - self.b) % self.p,
            p: self.p,
            s: self.s,
        }
    }

    pub fn inv(&self) -> Result<Fp2Elem> {
        if self.is_zero() {
            return Err(Error::invalid("inverse of zero in GF(p^2)"));
        }
        Ok(self.pow(self.p * self.p - 2))
    }

    /// Whether the element is a square in GF(p^2) (zero counts as one).
    pub fn is_square(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        self.pow((self.p * self.p - 1) / 2) == Fp2Elem::one(self.p)
    }
}

impl std::fmt::Display for Fp2Elem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.b == 0 {
            write!(f, "{}", self.a)
        } else if self.a == 0 {
            write!(f, "{}t", self.b)
        } else {
            write!(f, "{} + {}t", self.a, self.b)
        }
    }
}

/// A polynomial over GF(p), low degree first, leading coefficient nonzero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyFp {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyFp {
    pub fn new(p: u64, coeffs: Vec<u64>) -> PolyFp {
        assert!(arith::is_prime(p));
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyFp { p, coeffs }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `λ^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn eval_fp2(&self, x: &Fp2Elem) -> Fp2Elem {
        assert_eq!(x.p(), self.p);
        let mut acc = Fp2Elem::zero(self.p);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&Fp2Elem::scalar(c, self.p));
        }
        acc
    }

    /// All roots in GF(p^2) by exhaustive evaluation, each root once,
    /// sorted with GF(p) elements first (ascending b, then a). Sized for
    /// p ≤ 1000.
    pub fn roots_in_fp2(&self) -> Result<Vec<Fp2Elem>> {
        if self.is_zero() {
            return Err(Error::invalid(
                "zero polynomial has every element as a root",
            ));
        }
        if self.p > 1000 {
            return Err(Error::invalid(format!(
                "exhaustive root search sized for p <= 1000, got {}",
                self.p
            )));
        }
        let mut roots = Vec::new();
        for b in 0..self.p {
            for a in 0..self.p {
                let x = Fp2Elem::new(a, b, self.p);
                if self.eval_fp2(&x).is_zero() {
                    roots.push(x);
                }
            }
        }
        Ok(roots)
    }
}

/// Which field a point count runs over.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BaseField {
    Fp,
    Fp2,
}

/// Number of affine points on `y^2 = x^3 + ax + b` over the stated field,
/// for p > 3, by summing solution counts of `y^2 = f(x)` over all x. The
/// full point count is this plus one (the point at infinity); a Hasse-bound
/// sanity check guards the loop.
pub fn count_affine_points(a: &Fp2Elem, b: &Fp2Elem, field: BaseField) -> Result<u64> {
    let p = a.p();
    assert_eq!(p, b.p(), "mixed characteristic");
    if p <= 3 {
        return Err(Error::invalid("point counting requires p > 3"));
    }
    // 4a^3 + 27b^2 must not vanish (smooth Weierstrass model).
    let disc = a
        .pow(3)
        .mul(&Fp2Elem::scalar(4, p))
        .add(&b.mul(b).mul(&Fp2Elem::scalar(27, p)));
    if disc.is_zero() {
        return Err(Error::SingularCurve(format!(
            "4a^3 + 27b^2 = 0 for a = {a}, b = {b} over GF({p}^2)"
        )));
    }
    if field == BaseField::Fp && !(a.is_fp() && b.is_fp()) {
        return Err(Error::invalid(
            "curve coefficients must lie in GF(p) to count over GF(p)",
        ));
    }
    let q = match field {
        BaseField::Fp => p,
        BaseField::Fp2 => p * p,
    };
    let mut count = 0u64;
    let xs: Box<dyn Iterator<Item = Fp2Elem>> = match field {
        BaseField::Fp => Box::new((0..p).map(move |x| Fp2Elem::scalar(x, p))),
        BaseField::Fp2 => {
            Box::new((0..p).flat_map(move |bb| (0..p).map(move |aa| Fp2Elem::new(aa, bb, p))))
        }
    };
    for x in xs {
        let z = x.pow(3).add(&a.mul(&x)).add(b);
        if z.is_zero() {
            count += 1;
        } else {
            let square = match field {
                BaseField::Fp => legendre(z.a, p) == 1,
                BaseField::Fp2 => z.is_square(),
            };
            if square {
                count += 2;
            }
        }
    }
    let trace = q as i128 + 1 - (count as i128 + 1);
    if trace * trace > 4 * q as i128 {
        return Err(Error::internal(format!(
            "Hasse bound violated for a = {a}, b = {b}: trace {trace} over GF({q})"
        )));
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_nonresidues() {
        assert_eq!(smallest_nonresidue(3), 2);
        assert_eq!(smallest_nonresidue(5), 2);
        assert_eq!(smallest_nonresidue(7), 3);
        assert_eq!(smallest_nonresidue(11), 2);
        assert_eq!(smallest_nonresidue(13), 2);
        assert_eq!(smallest_nonresidue(17), 3);
        assert_eq!(smallest_nonresidue(71), 7);
    }

    #[test]
    fn generator_squares_to_nonresidue() {
        for p in [5u64, 7, 13, 71] {
            let t = Fp2Elem::t(p);
            assert_eq!(t.mul(&t), Fp2Elem::scalar(smallest_nonresidue(p), p));
        }
    }

    #[test]
    fn pow_edge_cases() {
        let x = Fp2Elem::new(3, 4, 13);
        assert_eq!(x.pow(0), Fp2Elem::one(13));
        assert_eq!(x.pow(1), x);
        // The multiplicative group of GF(13^2) has order 168.
        assert_eq!(x.pow(13 * 13 - 1), Fp2Elem::one(13));
        // x^p is the Frobenius conjugate.
        assert_eq!(x.pow(13), x.frobenius());
    }

    #[test]
    fn frobenius_fixes_exactly_fp() {
        for p in [5u64, 7, 11, 13, 17, 19, 23] {
            for b in 0..p {
                for a in 0..p {
                    let x = Fp2Elem::new(a, b, p);
                    let fx = x.frobenius();
                    assert_eq!(fx.frobenius(), x, "involution at p = {p}");
                    assert_eq!(fx == x, x.is_fp(), "fixed points at p = {p}");
                    assert_eq!(x.pow(p), fx);
                }
            }
        }
    }

    #[test]
    fn field_inverses() {
        for p in [5u64, 13] {
            for b in 0..p {
                for a in 0..p {
                    let x = Fp2Elem::new(a, b, p);
                    if x.is_zero() {
                        assert!(x.inv().is_err());
                    } else {
                        assert_eq!(x.mul(&x.inv().unwrap()), Fp2Elem::one(p));
                    }
                }
            }
        }
    }

    #[test]
    fn quadratic_roots_split_in_extension() {
        // λ^2 + 4λ + 1 over GF(5): discriminant 12 ≡ 2 is a non-residue,
        // so the roots are a conjugate pair outside GF(5).
        let h = PolyFp::new(5, vec![1, 4, 1]);
        let roots = h.roots_in_fp2().unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!(!r.is_fp());
        }
        assert_eq!(roots[0].frobenius(), roots[1]);
    }

    #[test]
    fn rational_roots_stay_rational() {
        let h = PolyFp::new(7, vec![7 - 1, 0, 1]); // λ^2 − 1
        let roots = h.roots_in_fp2().unwrap();
        assert_eq!(roots, vec![Fp2Elem::scalar(1, 7), Fp2Elem::scalar(6, 7)]);
        let x = PolyFp::new(11, vec![0, 1]);
        assert_eq!(x.roots_in_fp2().unwrap(), vec![Fp2Elem::zero(11)]);
        assert!(PolyFp::new(5, vec![0]).roots_in_fp2().is_err());
    }

    #[test]
    fn point_counts_over_fp() {
        // y^2 = x^3 + x over GF(5) (j = 1728): 3 affine points, trace 2.
        let a = Fp2Elem::one(5);
        let b = Fp2Elem::zero(5);
        assert_eq!(count_affine_points(&a, &b, BaseField::Fp).unwrap(), 3);

        // y^2 = x^3 + 1 over GF(5) (j = 0): 5 affine points, so #E = p + 1,
        // trace 0: supersingular.
        let a = Fp2Elem::zero(5);
        let b = Fp2Elem::one(5);
        assert_eq!(count_affine_points(&a, &b, BaseField::Fp).unwrap(), 5);

        // y^2 = x^3 + 1 over GF(7): 7 ≡ 1 mod 3 makes j = 0 ordinary.
        let a = Fp2Elem::zero(7);
        let b = Fp2Elem::one(7);
        let n = count_affine_points(&a, &b, BaseField::Fp).unwrap();
        let trace = 7 + 1 - (n as i64 + 1);
        assert_ne!(trace % 7, 0);
    }

    #[test]
    fn point_count_over_fp2_consistent_with_weil() {
        // For E/GF(p) with trace t over GF(p), the GF(p^2) count is
        // p^2 + 1 − (t^2 − 2p).
        for (a0, b0, p) in [(1u64, 0u64, 5u64), (0, 1, 5), (0, 1, 7), (1, 6, 11)] {
            let a = Fp2Elem::scalar(a0, p);
            let b = Fp2Elem::scalar(b0, p);
            let n1 = count_affine_points(&a, &b, BaseField::Fp).unwrap() as i64 + 1;
            let n2 = count_affine_points(&a, &b, BaseField::Fp2).unwrap() as i64 + 1;
            let t = p as i64 + 1 - n1;
            assert_eq!(n2, (p * p) as i64 + 1 - (t * t - 2 * p as i64));
        }
    }

    #[test]
    fn singular_models_are_rejected() {
        // 4a^3 + 27b^2 = 0: a = -3, b = 2 gives 4·(-27) + 27·4 = 0.
        let a = Fp2Elem::scalar(11 - 3, 11);
        let b = Fp2Elem::scalar(2, 11);
        assert!(matches!(
            count_affine_points(&a, &b, BaseField::Fp),
            Err(Error::SingularCurve(_))
        ));
    }
}
