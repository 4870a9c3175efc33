//! Python bindings for `cmeta_core`.

use cmeta_core::atkin;
use cmeta_core::classpoly::{self, PrecisionPolicy};
use cmeta_core::cm::{self, CmOptions};
use cmeta_core::ffield::{self, FpElement, FpPolynomial};
use cmeta_core::modpoly;
use cmeta_core::precision::{self, UpperHalfPoint};
use cmeta_core::qforms::{self, Discriminant};
use cmeta_core::Error;
use num_bigint::BigInt;
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::PrecisionExhausted { .. } | Error::InterpolationSingular => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn policy(precision: Option<u32>, max_precision: Option<u32>) -> PrecisionPolicy {
    let mut p = PrecisionPolicy::default();
    if let Some(start) = precision {
        p.start = start;
    }
    if let Some(max) = max_precision {
        p.max = max;
    }
    p
}

/// `H_B` for the double eta-quotient of level `p1 p2`.
#[pyclass(name = "ClassPolynomial", frozen, module = "cmeta")]
struct PyClassPolynomial {
    inner: classpoly::ClassPolynomial,
}

#[pymethods]
impl PyClassPolynomial {
    #[getter]
    fn d(&self) -> i64 {
        self.inner.d.value()
    }

    #[getter]
    fn p1(&self) -> i64 {
        self.inner.p1
    }

    #[getter]
    fn p2(&self) -> i64 {
        self.inner.p2
    }

    #[getter]
    fn s(&self) -> u32 {
        self.inner.s
    }

    #[getter]
    fn b(&self) -> i64 {
        self.inner.b
    }

    /// Lowest degree first.
    #[getter]
    fn coeffs(&self) -> Vec<BigInt> {
        self.inner.coeffs.clone()
    }

    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn involution_transform(&self) -> PyResult<Self> {
        classpoly::involution_transform(&self.inner)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    /// Roots modulo the prime `q`.
    fn roots_mod(&self, q: u64) -> Vec<u64> {
        let hq = FpPolynomial::from_bigints(&self.inner.coeffs, q);
        ffield::roots_mod_l_default(&hq).iter().map(|r| r.value()).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.coeffs.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_line()
    }

    fn __repr__(&self) -> String {
        format!(
            "ClassPolynomial(d={}, p1={}, p2={}, b={}, coeffs=[{}])",
            self.inner.d.value(),
            self.inner.p1,
            self.inner.p2,
            self.inner.b,
            self.inner.to_line()
        )
    }
}

/// `Phi(X, J)` with `coeffs[kx][kj]` the coefficient of `X^kx J^kj`.
#[pyclass(name = "ModularPolynomial", frozen, module = "cmeta")]
struct PyModularPolynomial {
    inner: modpoly::ModularPolynomial,
}

#[pymethods]
impl PyModularPolynomial {
    #[getter]
    fn p1(&self) -> i64 {
        self.inner.p1
    }

    #[getter]
    fn p2(&self) -> i64 {
        self.inner.p2
    }

    #[getter]
    fn s(&self) -> u32 {
        self.inner.s
    }

    #[getter]
    fn deg_x(&self) -> usize {
        self.inner.deg_x
    }

    #[getter]
    fn deg_j(&self) -> usize {
        self.inner.deg_j
    }

    #[getter]
    fn coeffs(&self) -> Vec<Vec<BigInt>> {
        self.inner.coeffs.clone()
    }

    fn coeff(&self, kx: usize, kj: usize) -> PyResult<BigInt> {
        if kx > self.inner.deg_x || kj > self.inner.deg_j {
            return Err(PyValueError::new_err("index out of range"));
        }
        Ok(self.inner.coeff(kx, kj).clone())
    }

    /// `Phi(wbar, J)` over `F_q`, lowest degree first.
    fn evaluate_in_j_mod(&self, wbar: i64, q: u64) -> PyResult<Vec<u64>> {
        let w = FpElement::new(wbar, q).map_err(to_py)?;
        Ok(modpoly::evaluate_in_j_mod_l(&self.inner, w).coeffs().to_vec())
    }

    fn serialize(&self) -> String {
        self.inner.serialize()
    }

    #[staticmethod]
    fn deserialize(text: &str) -> PyResult<Self> {
        modpoly::ModularPolynomial::deserialize(text)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "ModularPolynomial(p1={}, p2={}, s={}, deg_x={}, deg_j={})",
            self.inner.p1, self.inner.p2, self.inner.s, self.inner.deg_x, self.inner.deg_j
        )
    }
}

/// A curve `y^2 = x^3 + a4 x + a6` over `F_q` with certified order.
#[pyclass(name = "CmCurve", frozen, get_all, module = "cmeta")]
struct PyCmCurve {
    q: u64,
    a4: u64,
    a6: u64,
    order: u64,
    trace: i64,
    used_shortcut: bool,
    b: i64,
    wbar: u64,
    jbar: u64,
}

#[pymethods]
impl PyCmCurve {
    fn __str__(&self) -> String {
        format!(
            "{} {} {} {} {} shortcut={}",
            self.q,
            self.a4,
            self.a6,
            self.order,
            self.trace,
            if self.used_shortcut { "yes" } else { "no" }
        )
    }

    fn __repr__(&self) -> String {
        format!(
            "CmCurve(q={}, a4={}, a6={}, order={}, trace={}, used_shortcut={})",
            self.q,
            self.a4,
            self.a6,
            self.order,
            self.trace,
            if self.used_shortcut { "True" } else { "False" }
        )
    }
}

fn disc(d: i64) -> PyResult<Discriminant> {
    Discriminant::new(d).map_err(to_py)
}

#[pyfunction]
fn class_number(d: i64) -> PyResult<usize> {
    Ok(qforms::class_number(&disc(d)?))
}

/// Reduced primitive forms as `(a, b, c)` triples.
#[pyfunction]
fn reduced_forms(d: i64) -> PyResult<Vec<(i64, i64, i64)>> {
    Ok(qforms::enumerate_reduced_forms(&disc(d)?)
        .iter()
        .map(|f| (f.a(), f.b(), f.c()))
        .collect())
}

#[pyfunction]
fn b_candidates(d: i64, n: i64) -> PyResult<Vec<i64>> {
    qforms::b_candidates(&disc(d)?, n).map_err(to_py)
}

#[pyfunction]
fn nsystem(d: i64, n: i64, b: i64) -> PyResult<Vec<(i64, i64, i64)>> {
    let sys = qforms::build_nsystem(&disc(d)?, n, b).map_err(to_py)?;
    Ok(sys.forms.iter().map(|f| (f.a(), f.b(), f.c())).collect())
}

#[pyfunction]
fn check_integrality_conditions(d: i64, p1: i64, p2: i64) -> bool {
    classpoly::check_integrality_conditions(d, p1, p2)
}

#[pyfunction]
#[pyo3(signature = (d, p1, p2, b, precision=None, max_precision=None))]
fn class_polynomial(
    py: Python<'_>,
    d: i64,
    p1: i64,
    p2: i64,
    b: i64,
    precision: Option<u32>,
    max_precision: Option<u32>,
) -> PyResult<PyClassPolynomial> {
    let pol = policy(precision, max_precision);
    py.detach(|| classpoly::compute_class_polynomial_with(d, p1, p2, b, &pol))
        .map(|inner| PyClassPolynomial { inner })
        .map_err(to_py)
}

#[pyfunction]
fn count_distinct_class_polynomials(py: Python<'_>, d: i64, p1: i64, p2: i64) -> PyResult<usize> {
    py.detach(|| classpoly::count_distinct_class_polynomials(d, p1, p2))
        .map_err(to_py)
}

/// Recomputes `Phi` numerically; `embedded=True` returns the stored copy when there is one.
#[pyfunction]
#[pyo3(signature = (p1, p2, embedded=false))]
fn modular_polynomial(py: Python<'_>, p1: i64, p2: i64, embedded: bool) -> PyResult<PyModularPolynomial> {
    if embedded {
        if let Some(inner) = modpoly::embedded(p1, p2) {
            return Ok(PyModularPolynomial { inner });
        }
    }
    py.detach(|| modpoly::compute_modular_polynomial(p1, p2))
        .map(|inner| PyModularPolynomial { inner })
        .map_err(to_py)
}

/// `(u, v)` with `u^2 - D v^2 = 4N` and `u = B v mod 2N`, or `None`.
#[pyfunction]
fn multiple_root_condition(d: i64, n: i64, b: i64) -> PyResult<Option<(i64, i64)>> {
    Ok(atkin::multiple_root_condition(d, n, b)
        .map_err(to_py)?
        .map(|s| (s.u, s.v)))
}

/// Distinct roots in `F_q` with multiplicities; coefficients lowest degree first.
#[pyfunction]
#[pyo3(signature = (coeffs, q, seed=0))]
fn roots_mod(coeffs: Vec<BigInt>, q: u64, seed: u64) -> PyResult<Vec<(u64, usize)>> {
    if q < 2 || !cmeta_core::arith::is_prime(q) {
        return Err(to_py(Error::NotPrime(q)));
    }
    let f = FpPolynomial::from_bigints(&coeffs, q);
    Ok(ffield::roots_with_multiplicity(&f, &mut ChaCha8Rng::seed_from_u64(seed))
        .iter()
        .map(|r| (r.value.value(), r.multiplicity))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (d, p1, p2, q, b=None, seed=0))]
fn cm_curve(py: Python<'_>, d: i64, p1: i64, p2: i64, q: u64, b: Option<i64>, seed: u64) -> PyResult<PyCmCurve> {
    let opts = CmOptions {
        b,
        seed,
        ..CmOptions::default()
    };
    let out = py
        .detach(|| cm::construct_cm_curve(d, p1, p2, q, &opts))
        .map_err(to_py)?;
    Ok(PyCmCurve {
        q: out.curve.q,
        a4: out.curve.a4.value(),
        a6: out.curve.a6.value(),
        order: out.certificate.order,
        trace: out.certificate.trace,
        used_shortcut: out.used_shortcut,
        b: out.b,
        wbar: out.wbar.value(),
        jbar: out.jbar.value(),
    })
}

fn point(z: Complex64, prec: u32) -> PyResult<UpperHalfPoint> {
    UpperHalfPoint::from_f64(z.re, z.im, prec).map_err(to_py)
}

fn to_complex(z: &precision::ApComplex) -> Complex64 {
    let (re, im) = z.to_f64();
    Complex64::new(re, im)
}

/// Dedekind eta at `z`, rounded to a Python complex.
#[pyfunction]
#[pyo3(signature = (z, prec=128))]
fn eta(z: Complex64, prec: u32) -> PyResult<Complex64> {
    precision::eta(&point(z, prec)?, prec)
        .map(|v| to_complex(&v))
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (z, prec=128))]
fn j_invariant(z: Complex64, prec: u32) -> PyResult<Complex64> {
    precision::j_invariant(&point(z, prec)?, prec)
        .map(|v| to_complex(&v))
        .map_err(to_py)
}

/// `w(z)^s` for the double eta-quotient of level `p1 p2`.
#[pyfunction]
#[pyo3(signature = (z, p1, p2, prec=128))]
fn w_pow_s(z: Complex64, p1: i64, p2: i64, prec: u32) -> PyResult<Complex64> {
    precision::w_pow_s(&point(z, prec)?, p1, p2, prec)
        .map(|v| to_complex(&v))
        .map_err(to_py)
}

#[pymodule]
fn cmeta(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyClassPolynomial>()?;
    m.add_class::<PyModularPolynomial>()?;
    m.add_class::<PyCmCurve>()?;
    m.add_function(wrap_pyfunction!(class_number, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_forms, m)?)?;
    m.add_function(wrap_pyfunction!(b_candidates, m)?)?;
    m.add_function(wrap_pyfunction!(nsystem, m)?)?;
    m.add_function(wrap_pyfunction!(check_integrality_conditions, m)?)?;
    m.add_function(wrap_pyfunction!(class_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(count_distinct_class_polynomials, m)?)?;
    m.add_function(wrap_pyfunction!(modular_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(multiple_root_condition, m)?)?;
    m.add_function(wrap_pyfunction!(roots_mod, m)?)?;
    m.add_function(wrap_pyfunction!(cm_curve, m)?)?;
    m.add_function(wrap_pyfunction!(eta, m)?)?;
    m.add_function(wrap_pyfunction!(j_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(w_pow_s, m)?)?;
    Ok(())
}
