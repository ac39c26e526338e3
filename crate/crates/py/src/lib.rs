//! Python bindings: exact coefficients, volume evaluation and the
//! intensity integral.

use num_bigint::BigInt;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use wpvol_core::asymptotics::{eval_volume, eval_volume_exact, f0, lambda_intensity};
use wpvol_core::qpi::{compare, Interval};
use wpvol_core::recursion::{coeff, fill, fill_signatures, volume_poly};
use wpvol_core::{store, CoeffTable, Convention, Error, Signature};

fn err(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn bounds(i: &Interval) -> (f64, f64) {
    (i.lo().to_f64(), i.hi().to_f64())
}

/// An element `Σ r_d π^{2d}` of ℚ[π²].
#[pyclass(name = "PiPoly", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPiPoly(wpvol_core::PiPoly);

#[pymethods]
impl PyPiPoly {
    /// `(d, numerator, denominator)` for each nonzero term, by increasing `d`.
    fn terms(&self) -> Vec<(u32, BigInt, BigInt)> {
        self.0
            .terms()
            .map(|(d, r)| (d, r.numer().clone(), r.denom().clone()))
            .collect()
    }

    fn degree(&self) -> Option<u32> {
        self.0.degree()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Rigorous enclosure `(lo, hi)` at `precision` bits.
    #[pyo3(signature = (precision = 128))]
    fn enclose(&self, precision: u32) -> (f64, f64) {
        bounds(&self.0.enclose(precision))
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PiPoly({})", self.0)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __add__(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    fn __neg__(&self) -> Self {
        Self(-&self.0)
    }

    /// Exact sign of `self − other` as -1, 0 or 1.
    fn compare(&self, other: &Self) -> PyResult<i32> {
        compare(&self.0, &other.0).map(|o| o as i32).map_err(err)
    }
}

/// A coefficient table together with its convention.
#[pyclass(name = "Engine")]
struct PyEngine {
    table: CoeffTable,
}

impl PyEngine {
    fn ready(&mut self, g: u32, n: u32) -> PyResult<Signature> {
        let sig = Signature::new(g, n).map_err(err)?;
        if !self.table.is_complete(sig) {
            fill_signatures(&mut self.table, &[sig]);
        }
        Ok(sig)
    }
}

#[pymethods]
impl PyEngine {
    #[new]
    #[pyo3(signature = (convention = "paper"))]
    fn new(convention: &str) -> PyResult<Self> {
        let convention: Convention = convention.parse().map_err(err)?;
        Ok(Self {
            table: CoeffTable::new(convention),
        })
    }

    /// Loads a cache file written by [`save`](Self::save) or the CLI.
    #[staticmethod]
    #[pyo3(signature = (path, convention = "paper"))]
    fn load(path: &str, convention: &str) -> PyResult<Self> {
        let convention: Convention = convention.parse().map_err(err)?;
        let table = store::load(path.as_ref(), convention).map_err(err)?;
        Ok(Self { table })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        store::save(&self.table, path.as_ref()).map_err(err)
    }

    #[getter]
    fn convention(&self) -> &'static str {
        self.table.convention().tag()
    }

    fn __len__(&self) -> usize {
        self.table.len()
    }

    /// Fills every signature with `|χ| ≤ chi_max` and `n ≤ n_max`;
    /// returns the number of coefficients computed.
    #[pyo3(signature = (chi_max, n_max = 5))]
    fn fill(&mut self, py: Python<'_>, chi_max: u32, n_max: u32) -> usize {
        let table = &mut self.table;
        py.detach(|| fill(table, chi_max, n_max).computed)
    }

    fn coeff(&mut self, g: u32, n: u32, alpha: Vec<u32>) -> PyResult<PyPiPoly> {
        let sig = Signature::new(g, n).map_err(err)?;
        coeff(sig, &alpha, &mut self.table)
            .map(PyPiPoly)
            .map_err(err)
    }

    /// All coefficients of `V_{g,n}` keyed by sorted multi-index.
    fn volume(&mut self, g: u32, n: u32) -> PyResult<Vec<(Vec<u32>, PyPiPoly)>> {
        let sig = Signature::new(g, n).map_err(err)?;
        let v = volume_poly(sig, &mut self.table);
        Ok(v.coeffs
            .into_iter()
            .map(|(k, c)| (k, PyPiPoly(c)))
            .collect())
    }

    /// `V_{g,n}(x)` exactly; each length is given as `(numerator, denominator)`.
    fn eval_exact(&mut self, g: u32, n: u32, x: Vec<(BigInt, BigInt)>) -> PyResult<PyPiPoly> {
        let sig = self.ready(g, n)?;
        let mut xs = Vec::with_capacity(x.len());
        for (p, q) in x {
            if q == BigInt::from(0) {
                return Err(PyValueError::new_err("zero denominator"));
            }
            xs.push(wpvol_core::Rational::new(p, q));
        }
        eval_volume_exact(sig, &xs, &self.table)
            .map(PyPiPoly)
            .map_err(err)
    }

    /// Enclosure `(lo, hi)` of `V_{g,n}(x)`.
    #[pyo3(signature = (g, n, x, precision = 128))]
    fn eval(&mut self, g: u32, n: u32, x: Vec<f64>, precision: u32) -> PyResult<(f64, f64)> {
        let sig = self.ready(g, n)?;
        let xs: Vec<Interval> = x.iter().map(|&v| Interval::from_f64(v)).collect();
        eval_volume(sig, &xs, &self.table, precision)
            .map(|i| bounds(&i))
            .map_err(err)
    }
}

/// Leading-order approximant `Π sinh(x_i/2)/(x_i/2)` as `(lo, hi)`.
#[pyfunction]
#[pyo3(signature = (x, precision = 128))]
fn leading_order(x: Vec<f64>, precision: u32) -> (f64, f64) {
    let xs: Vec<Interval> = x.iter().map(|&v| Interval::from_f64(v)).collect();
    bounds(&f0(&xs, precision))
}

/// `λ_{a,b}` as `(value, error_bound)`.
#[pyfunction]
#[pyo3(signature = (a, b, precision = 128))]
fn lambda_ab(a: f64, b: f64, precision: u32) -> PyResult<(f64, f64)> {
    let i = lambda_intensity(a, b, precision).map_err(err)?;
    Ok((i.mid_f64(), i.width().to_f64()))
}

#[pymodule]
fn wpvol(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPiPoly>()?;
    m.add_class::<PyEngine>()?;
    m.add_function(wrap_pyfunction!(leading_order, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_ab, m)?)?;
    Ok(())
}
