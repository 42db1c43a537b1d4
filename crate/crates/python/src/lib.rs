use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyNotImplementedError, PyValueError};
use pyo3::prelude::*;

use padic_riesz::quadform::{self, SquareClass};
use padic_riesz::report::{self, Suite, SuiteConfig};
use padic_riesz::riesz::{default_grid, RieszKernel};
use padic_riesz::scalars::{parse_rational, Rational};
use padic_riesz::schwartz::{self, Lizorkin};
use padic_riesz::zeta::{self, Convention, ZetaRequest};
use padic_riesz::{Error, ExtScalar, QuadraticForm, RationalFunctionT, TestFunction};

type Tf = TestFunction<ExtScalar>;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Unsupported(_) | Error::DepthExceeded(_) | Error::RhoSignUnresolved(_) => {
            PyNotImplementedError::new_err(e.to_string())
        }
        Error::DivisionByZero | Error::Pole => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for padic_riesz::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// Accepts Python ints and strings such as `"-3/5"`.
fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(n) = obj.extract::<i64>() {
        return Ok(Rational::from_integer(n.into()));
    }
    let s: String = obj.extract()?;
    parse_rational(&s).py()
}

fn square_class(beta: &str, p: u64) -> PyResult<SquareClass> {
    SquareClass::parse(beta, p).py()
}

fn convention(name: &str) -> PyResult<Convention> {
    Convention::parse(name).py()
}

/// Rational function of `t = p^{-s}`.
#[pyclass(name = "RationalFunction", frozen)]
struct PyRationalFunction(RationalFunctionT);

#[pymethods]
impl PyRationalFunction {
    /// Value at a complex `t`.
    fn __call__(&self, t: Complex64) -> PyResult<Complex64> {
        self.0.eval_complex(t).py()
    }

    /// Value at `t = p^{-s}` for real `s`.
    fn at_s(&self, s: f64) -> PyResult<Complex64> {
        let t = (self.0.prime() as f64).powf(-s);
        self.0.eval_complex(Complex64::new(t, 0.0)).py()
    }

    /// `(power, coefficient)` pairs of numerator and denominator.
    fn parts(&self) -> (Vec<(i64, String)>, Vec<(i64, String)>) {
        let enc = |v: Vec<(i64, ExtScalar)>| v.into_iter().map(|(k, c)| (k, c.to_string())).collect();
        (enc(self.0.numerator_terms()), enc(self.0.denominator_terms()))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("RationalFunction({})", self.0)
    }
}

#[pyclass(name = "QuadraticForm", frozen)]
struct PyQuadraticForm(QuadraticForm);

#[pymethods]
impl PyQuadraticForm {
    #[new]
    fn new(prime: u64, coeffs: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let cs = coeffs.iter().map(rational).collect::<PyResult<Vec<_>>>()?;
        Ok(Self(QuadraticForm::new(prime, cs).py()?))
    }

    /// `x₁² − εx₂² − px₃² + εpx₄²`.
    #[staticmethod]
    fn four_dim(prime: u64) -> PyResult<Self> {
        quadform::check_odd_prime(prime).py()?;
        Ok(Self(QuadraticForm::four_dim(prime, quadform::epsilon(prime) as i64).py()?))
    }

    /// `x₁² − ηx₂²`.
    #[staticmethod]
    fn binary(prime: u64, eta: i64) -> PyResult<Self> {
        Ok(Self(QuadraticForm::binary(prime, eta).py()?))
    }

    #[getter]
    fn prime(&self) -> u64 {
        self.0.prime()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn coeffs(&self) -> Vec<String> {
        self.0.label().split(',').map(str::to_string).collect()
    }

    fn __call__(&self, x: Vec<Bound<'_, PyAny>>) -> PyResult<String> {
        let xs = x.iter().map(rational).collect::<PyResult<Vec<_>>>()?;
        if xs.len() != self.0.dim() {
            return Err(py_err(Error::DimensionMismatch(xs.len(), self.0.dim())));
        }
        Ok(self.0.eval(&xs).to_string())
    }

    fn __repr__(&self) -> String {
        format!("QuadraticForm(p={}, [{}])", self.0.prime(), self.0.label())
    }
}

#[pyclass(name = "TestFunction", frozen)]
struct PyTestFunction(Tf);

#[pymethods]
impl PyTestFunction {
    /// One of `unit_ball`, `lizorkin0`, `shifted_box`.
    #[staticmethod]
    fn builtin(name: &str, prime: u64, dim: usize) -> PyResult<Self> {
        quadform::check_odd_prime(prime).py()?;
        Ok(Self(schwartz::builtin(name, prime, dim).py()?))
    }

    #[staticmethod]
    fn random_phi(prime: u64, dim: usize, seed: u64) -> PyResult<Self> {
        quadform::check_odd_prime(prime).py()?;
        Ok(Self(schwartz::random_phi(prime, dim, seed)))
    }

    #[staticmethod]
    fn random_psi(prime: u64, dim: usize, seed: u64) -> PyResult<Self> {
        quadform::check_odd_prime(prime).py()?;
        Ok(Self(schwartz::random_psi(prime, dim, seed)))
    }

    #[staticmethod]
    #[pyo3(signature = (text, depth_bound = padic_riesz::DEFAULT_DEPTH_BOUND))]
    fn from_json(text: &str, depth_bound: u32) -> PyResult<Self> {
        Ok(Self(Tf::from_json_str(text, depth_bound).py()?))
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    #[getter]
    fn prime(&self) -> u64 {
        self.0.prime()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn fourier(&self) -> Self {
        Self(self.0.fourier())
    }

    fn inverse_fourier(&self) -> Self {
        Self(self.0.inverse_fourier())
    }

    fn integral(&self) -> String {
        self.0.integral().to_string()
    }

    fn value_at_origin(&self) -> String {
        self.0.value_at_origin().to_string()
    }

    /// Value at a point with rational coordinates, as a complex number.
    fn __call__(&self, x: Vec<Bound<'_, PyAny>>) -> PyResult<Complex64> {
        let xs = x.iter().map(rational).collect::<PyResult<Vec<_>>>()?;
        let v = padic_riesz::PVector::new(self.0.prime(), xs).py()?;
        Ok(self.0.eval(&v).py()?.to_complex())
    }

    fn in_phi(&self) -> bool {
        self.0.lizorkin_check(Lizorkin::Phi)
    }

    fn in_psi(&self) -> bool {
        self.0.lizorkin_check(Lizorkin::Psi)
    }

    fn convolve(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.convolve(&other.0).py()?))
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.checked_add(&other.0).py()?))
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.checked_sub(&other.0).py()?))
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.checked_mul(&other.0).py()?))
    }

    fn __neg__(&self) -> Self {
        Self(self.0.neg())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("TestFunction(p={}, n={}, {})", self.0.prime(), self.0.dim(), self.0)
    }
}

#[pyclass(name = "RieszKernel", frozen)]
struct PyRieszKernel(RieszKernel);

#[pymethods]
impl PyRieszKernel {
    #[new]
    fn new(form: &PyQuadraticForm) -> PyResult<Self> {
        Ok(Self(RieszKernel::new(&form.0).py()?))
    }

    /// `⟨K_α, φ⟩` in `t = p^{-α}`.
    fn pair(&self, phi: &PyTestFunction) -> PyResult<PyRationalFunction> {
        Ok(PyRationalFunction(self.0.pair(&phi.0).py()?))
    }

    /// `⟨K_{-α}, φ⟩` in `t = p^{-α}`.
    fn pair_negative(&self, phi: &PyTestFunction) -> PyResult<PyRationalFunction> {
        Ok(PyRationalFunction(self.0.pair_negative(&phi.0).py()?))
    }

    fn delta_limit(&self, phi: &PyTestFunction) -> PyResult<String> {
        Ok(self.0.delta_limit(&phi.0).py()?.to_string())
    }

    /// `(positive, negative)` outcomes of the Fourier relation on `ψ ∈ Ψ`.
    fn fourier_check(&self, psi: &PyTestFunction) -> PyResult<(bool, bool)> {
        self.0.fourier_check(&psi.0).py()
    }

    /// `[(a, b, holds)]` for `K_a ∗ K_b ∗ φ = K_{a+b} ∗ φ`.
    #[pyo3(signature = (phi, grid = None))]
    fn group_law(&self, py: Python<'_>, phi: &PyTestFunction, grid: Option<Vec<(i64, i64)>>) -> PyResult<Vec<(i64, i64, bool)>> {
        let grid = grid.unwrap_or_else(default_grid);
        let cases = py.detach(|| self.0.group_law(&phi.0, &grid)).py()?;
        Ok(cases.into_iter().map(|c| (c.a, c.b, c.holds)).collect())
    }

    fn __repr__(&self) -> String {
        format!("RieszKernel({:?})", self.0.form())
    }
}

#[pyfunction]
#[pyo3(signature = (form, phi, beta = "1", convention = "shifted", depth_bound = padic_riesz::DEFAULT_DEPTH_BOUND))]
fn zeta_function(
    py: Python<'_>,
    form: &PyQuadraticForm,
    phi: &PyTestFunction,
    beta: &str,
    convention: &str,
    depth_bound: u32,
) -> PyResult<PyRationalFunction> {
    let beta = square_class(beta, form.0.prime())?;
    let conv = self::convention(convention)?;
    let value = py.detach(|| {
        let req = ZetaRequest::new(&form.0, &phi.0)
            .beta(beta)
            .convention(conv)
            .depth_bound(depth_bound);
        zeta::zeta(&req).map(|r| r.value)
    });
    Ok(PyRationalFunction(value.py()?))
}

#[pyfunction]
#[pyo3(signature = (form, phi, s, depth = 6, beta = "1", convention = "shifted"))]
fn zeta_oracle(
    py: Python<'_>,
    form: &PyQuadraticForm,
    phi: &PyTestFunction,
    s: f64,
    depth: u32,
    beta: &str,
    convention: &str,
) -> PyResult<Complex64> {
    let beta = square_class(beta, form.0.prime())?;
    let conv = self::convention(convention)?;
    py.detach(|| {
        let req = ZetaRequest::new(&form.0, &phi.0).beta(beta).convention(conv);
        zeta::zeta_oracle_float(&req, Complex64::new(s, 0.0), depth)
    })
    .py()
}

#[pyfunction]
fn hilbert(a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>, prime: u64) -> PyResult<i8> {
    quadform::hilbert(&rational(a)?, &rational(b)?, prime).py()
}

/// Weil constant `γ(a·x²)` as `(exact, complex)`.
#[pyfunction]
fn weil_gamma(a: &Bound<'_, PyAny>, prime: u64) -> PyResult<(String, Complex64)> {
    let g = quadform::weil_gamma(&rational(a)?, prime).py()?;
    Ok((g.to_string(), g.to_complex()))
}

#[pyfunction]
fn rho_factor(beta: &str, prime: u64) -> PyResult<PyRationalFunction> {
    let class = square_class(beta, prime)?;
    Ok(PyRationalFunction(quadform::rho_factor(class, prime).py()?))
}

/// Runs a verification suite (or `"all"`); one `(id, form, witness, equal)` per claim.
#[pyfunction]
#[pyo3(signature = (suite, prime, random = 1))]
fn verify(py: Python<'_>, suite: &str, prime: u64, random: u64) -> PyResult<Vec<(String, String, String, bool)>> {
    let mut cfg = SuiteConfig::new(prime);
    cfg.random = random;
    let claims = py
        .detach(|| -> padic_riesz::Result<_> {
            if suite == "all" {
                report::run_all(&cfg)
            } else {
                report::run_suite(Suite::parse(suite)?, &cfg)
            }
        })
        .py()?;
    Ok(claims.into_iter().map(|c| (c.id, c.form, c.witness, c.equal)).collect())
}

#[pymodule]
#[pyo3(name = "padic_riesz")]
fn padic_riesz_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRationalFunction>()?;
    m.add_class::<PyQuadraticForm>()?;
    m.add_class::<PyTestFunction>()?;
    m.add_class::<PyRieszKernel>()?;
    m.add_function(wrap_pyfunction!(zeta_function, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert, m)?)?;
    m.add_function(wrap_pyfunction!(weil_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(rho_factor, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
