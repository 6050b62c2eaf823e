//! Python bindings: the series type with its operators, the supersingular
//! locus, and the per-prime verification, exposed as the `moonshine_py`
//! extension module. Coefficients cross the boundary as arbitrary-size
//! Python integers, so nothing is ever rounded.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use moonshine_core::arith::is_prime;
use moonshine_core::deligne;
use moonshine_core::error::Error as CoreError;
use moonshine_core::etaforms::{
    eta_quotient_params, faber_poly, hauptmodul_jn, j1_series, jn_plus_series, sn_series, tn_series,
};
use moonshine_core::heckeops::{u_operator, v_operator};
use moonshine_core::monster::{self, VerifyConfig};
use moonshine_core::qseries::QSeries;
use moonshine_core::supersingular::{minimal_aut_order, ss_j1_table, ss_j_set, ss_j_set_fast};

fn py_err(err: CoreError) -> PyErr {
    match err {
        CoreError::InvalidArgument(_) => PyValueError::new_err(err.to_string()),
        _ => PyRuntimeError::new_err(err.to_string()),
    }
}

/// A truncated integer Laurent series in the nome q.
#[pyclass(name = "Series", module = "moonshine_py", skip_from_py_object)]
#[derive(Clone)]
struct PySeries {
    inner: QSeries,
}

#[pymethods]
impl PySeries {
    /// Leading exponent.
    #[getter]
    fn lo(&self) -> i64 {
        self.inner.lo()
    }

    /// Exclusive truncation order.
    #[getter]
    fn prec(&self) -> i64 {
        self.inner.prec()
    }

    /// The coefficient of q^n; exponents at or beyond `prec` raise.
    fn coeff(&self, n: i64) -> PyResult<BigInt> {
        self.inner.coeff(n).map_err(py_err)
    }

    /// All known `(exponent, coefficient)` pairs, ascending.
    fn coeffs(&self) -> PyResult<Vec<(i64, BigInt)>> {
        (self.inner.lo()..self.inner.prec())
            .map(|n| Ok((n, self.inner.coeff(n).map_err(py_err)?)))
            .collect()
    }

    fn truncate(&self, prec: i64) -> PySeries {
        PySeries {
            inner: self.inner.truncate(prec),
        }
    }

    fn pow(&self, k: u64) -> PyResult<PySeries> {
        Ok(PySeries {
            inner: self.inner.pow(k).map_err(py_err)?,
        })
    }

    fn inv(&self) -> PyResult<PySeries> {
        Ok(PySeries {
            inner: self.inner.inv().map_err(py_err)?,
        })
    }

    /// Applies U_n: picks every n-th coefficient.
    fn u(&self, n: u64) -> PyResult<PySeries> {
        Ok(PySeries {
            inner: u_operator(&self.inner, n).map_err(py_err)?,
        })
    }

    /// Applies V_n: substitutes q -> q^n.
    fn v(&self, n: u64) -> PyResult<PySeries> {
        Ok(PySeries {
            inner: v_operator(&self.inner, n).map_err(py_err)?,
        })
    }

    fn scale(&self, c: BigInt) -> PySeries {
        PySeries {
            inner: self.inner.scale(c),
        }
    }

    fn add_scalar(&self, c: BigInt) -> PySeries {
        PySeries {
            inner: self.inner.add_scalar(c),
        }
    }

    /// True when every known coefficient vanishes.
    fn is_zero(&self) -> bool {
        self.inner.is_zero_on_window()
    }

    fn __add__(&self, other: &PySeries) -> PySeries {
        PySeries {
            inner: self.inner.add(&other.inner),
        }
    }

    fn __sub__(&self, other: &PySeries) -> PySeries {
        PySeries {
            inner: self.inner.sub(&other.inner),
        }
    }

    fn __mul__(&self, other: &PySeries) -> PySeries {
        PySeries {
            inner: self.inner.mul(&other.inner),
        }
    }

    fn __neg__(&self) -> PySeries {
        PySeries {
            inner: self.inner.neg(),
        }
    }

    fn __pow__(&self, exp: u64, _modulo: Option<Bound<'_, PyAny>>) -> PyResult<PySeries> {
        self.pow(exp)
    }

    fn __repr__(&self) -> String {
        format!("{}", self.inner)
    }
}

/// The level-one function, constant term zero: q^-1 + 196884 q + ...
#[pyfunction]
fn j1(prec: i64) -> PyResult<PySeries> {
    Ok(PySeries {
        inner: j1_series(prec).map_err(py_err)?,
    })
}

/// The eta-quotient hauptmodul t_N.
#[pyfunction]
fn t(level: u64, prec: i64) -> PyResult<PySeries> {
    Ok(PySeries {
        inner: tn_series(level, prec).map_err(py_err)?,
    })
}

/// The correction series s_N.
#[pyfunction]
fn s(level: u64, prec: i64) -> PyResult<PySeries> {
    Ok(PySeries {
        inner: sn_series(level, prec).map_err(py_err)?,
    })
}

/// The normalised hauptmodul J_N = t_N + d.
#[pyfunction]
fn jn(level: u64, prec: i64) -> PyResult<PySeries> {
    Ok(PySeries {
        inner: hauptmodul_jn(level, prec).map_err(py_err)?,
    })
}

/// The Fricke-symmetrised combination J_N + s_N.
#[pyfunction]
fn jplus(level: u64, prec: i64) -> PyResult<PySeries> {
    Ok(PySeries {
        inner: jn_plus_series(level, prec).map_err(py_err)?,
    })
}

/// Coefficients of the degree-m Faber polynomial, ascending.
#[pyfunction]
fn faber_coeffs(m: usize, prec: i64) -> PyResult<Vec<BigInt>> {
    let poly = faber_poly(m, prec).map_err(py_err)?;
    Ok(poly.poly().coeffs().to_vec())
}

/// The eta-quotient parameters `(d, n)` for a supported level.
#[pyfunction]
fn eta_params(level: u64) -> PyResult<(u64, u64)> {
    let params = eta_quotient_params(level).map_err(py_err)?;
    Ok((params.d, params.n))
}

/// The exponent of p in the order of the monster (0 for non-divisors).
#[pyfunction]
fn vp_monster_order(p: u64) -> u64 {
    monster::vp_monster_order(p)
}

/// The three summands and their total: `(plus, p, p2, total)`.
#[pyfunction]
#[pyo3(signature = (p, window = 60))]
fn hauptmodul_side(p: u64, window: i64) -> PyResult<(u64, u64, u64, u64)> {
    let side = monster::hauptmodul_side(p, window).map_err(py_err)?;
    Ok((side.term_plus, side.term_p, side.term_p2, side.total))
}

/// The locus-side count of the same total.
#[pyfunction]
fn supersingular_side(p: u64) -> PyResult<u64> {
    monster::supersingular_side(p).map_err(py_err)
}

/// v_p(pJ_1|U_p) over the given window, doubled internally before it is
/// trusted.
#[pyfunction]
#[pyo3(signature = (p, window = 60))]
fn vp_p_j1_up(p: u64, window: i64) -> PyResult<u64> {
    deligne::vp_p_j1_up(p, window)
        .and_then(|v| v.expect_finite())
        .map_err(py_err)
}

/// The supersingular locus as a dict: rational invariants, conjugate
/// pairs (coordinates in the 1, t basis), and the minimal automorphism
/// order.
#[pyfunction]
#[pyo3(signature = (p, fast = false))]
fn ss_locus(py: Python<'_>, p: u64, fast: bool) -> PyResult<Bound<'_, PyDict>> {
    if !is_prime(p) {
        return Err(PyValueError::new_err(format!("{p} is not prime")));
    }
    let (s1, s2_pairs, m_p) = if p <= 3 {
        (vec![0], Vec::new(), minimal_aut_order(p).map_err(py_err)?)
    } else {
        let data = if fast { ss_j_set_fast(p) } else { ss_j_set(p) }.map_err(py_err)?;
        let pairs = data
            .s2
            .iter()
            .map(|(x, y)| ((x.a, x.b), (y.a, y.b)))
            .collect();
        (data.s1.clone(), pairs, data.m_p)
    };
    let dict = PyDict::new(py);
    dict.set_item("p", p)?;
    dict.set_item("s1", s1)?;
    dict.set_item("s2_pairs", s2_pairs)?;
    dict.set_item("m_p", m_p)?;
    Ok(dict)
}

/// The J_1-value row `(col_744, col_984, others)`; raises when the locus
/// is not rational over GF(p).
#[pyfunction]
fn ss_row(p: u64) -> PyResult<(Option<u64>, Option<u64>, Vec<u64>)> {
    let row = ss_j1_table(p).map_err(py_err)?;
    Ok((row.col_744, row.col_984, row.others))
}

/// Runs the full per-prime verification and returns the report as a JSON
/// string with the same schema the command-line tool emits.
#[pyfunction]
#[pyo3(signature = (p, window = 60, k = 4, nmax = 6))]
fn verify_json(p: u64, window: i64, k: u32, nmax: u32) -> PyResult<String> {
    let config = VerifyConfig { window, k, nmax };
    let report = monster::verify_prime(p, &config).map_err(py_err)?;
    serde_json::to_string_pretty(&report)
        .map_err(|err| PyRuntimeError::new_err(format!("serialisation failed: {err}")))
}

#[pymodule]
fn moonshine_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeries>()?;
    m.add_function(wrap_pyfunction!(j1, m)?)?;
    m.add_function(wrap_pyfunction!(t, m)?)?;
    m.add_function(wrap_pyfunction!(s, m)?)?;
    m.add_function(wrap_pyfunction!(jn, m)?)?;
    m.add_function(wrap_pyfunction!(jplus, m)?)?;
    m.add_function(wrap_pyfunction!(faber_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(eta_params, m)?)?;
    m.add_function(wrap_pyfunction!(vp_monster_order, m)?)?;
    m.add_function(wrap_pyfunction!(hauptmodul_side, m)?)?;
    m.add_function(wrap_pyfunction!(supersingular_side, m)?)?;
    m.add_function(wrap_pyfunction!(vp_p_j1_up, m)?)?;
    m.add_function(wrap_pyfunction!(ss_locus, m)?)?;
    m.add_function(wrap_pyfunction!(ss_row, m)?)?;
    m.add_function(wrap_pyfunction!(verify_json, m)?)?;
    Ok(())
}
