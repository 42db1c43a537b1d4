"""Smoke test for the padic_riesz extension module.

Uses an installed module if present (e.g. after `maturin develop`), otherwise
loads the shared library from the cargo target directory.
"""

import importlib.machinery
import importlib.util
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import padic_riesz

        return padic_riesz
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libpadic_riesz_py.so"
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("padic_riesz", str(lib))
            spec = importlib.util.spec_from_file_location("padic_riesz", lib, loader=loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("build first: cargo build --release -p padic-riesz-py")


def main():
    pr = load()

    f = pr.QuadraticForm(5, [1, -2, -5, 10])
    assert f.dim == 4 and f.coeffs == ["1", "-2", "-5", "10"]
    assert f([1, 1, 0, 0]) == "-1"

    ball = pr.TestFunction.builtin("unit_ball", 5, 4)
    z = pr.zeta_function(f, ball)
    assert str(z) == "(24/25)/(1 + (-1)*t)", str(z)
    s = 3.0
    expected = (1 - 5**-2) / (1 - 5**-s)
    assert abs(z.at_s(s) - expected) < 1e-12
    assert abs(pr.zeta_oracle(f, ball, s, depth=5) - expected) < 1e-5

    assert pr.hilbert(3, 7, 7) == -1
    assert pr.hilbert("2", "-3/5", 5) == -1
    exact, value = pr.weil_gamma(3, 3)
    assert abs(abs(value) - 1) < 1e-12

    phi0 = pr.TestFunction.builtin("lizorkin0", 3, 4)
    assert phi0.in_phi() and not phi0.in_psi()
    assert phi0.fourier().in_psi()
    assert pr.TestFunction.from_json(phi0.to_json()) == phi0
    assert phi0.fourier().inverse_fourier() == phi0

    k = pr.RieszKernel(pr.QuadraticForm.four_dim(3))
    assert k.delta_limit(phi0) == phi0.value_at_origin()
    psi = pr.TestFunction.random_psi(3, 4, 1)
    assert k.fourier_check(psi) == (True, True)
    assert all(holds for _, _, holds in k.group_law(phi0, [(1, 2), (-1, 2)]))

    claims = pr.verify("delta", 3, random=1)
    assert claims and all(ok for _, _, _, ok in claims)

    try:
        pr.hilbert(3, 7, 2)
    except NotImplementedError:
        pass
    else:
        raise AssertionError("p = 2 must be rejected")
    try:
        pr.QuadraticForm(5, [1, 0])
    except ValueError:
        pass
    else:
        raise AssertionError("zero coefficient must be rejected")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
