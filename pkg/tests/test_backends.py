import os
import subprocess
import sys

import numpy as np
import pytest

from toafall import available_backends, get_backend, xi_stream

from conftest import hydrogen_params

needs_cython = pytest.mark.skipif("cython" not in available_backends(),
                                  reason="compiled kernels not built")


@needs_cython
class TestBackendEquivalence:
    def setup_method(self):
        self.py = get_backend("python")
        self.cy = get_backend("cython")
        self.params = hydrogen_params()

    def test_pdf_agrees(self):
        p = self.params
        ts = np.linspace(-0.5, 2.0, 40001)
        a = self.cy.pdf_batch(p.mass, p.sigma0, p.v0, p.g, p.hbar, 0.1, ts)
        b = self.py.pdf_batch(p.mass, p.sigma0, p.v0, p.g, p.hbar, 0.1, ts)
        np.testing.assert_allclose(a, b, rtol=1e-13, atol=0.0)

    def test_crossing_roots_bit_identical(self):
        p = self.params
        xi = xi_stream(1001, 4096)
        tol = 0.142784 * 1e-12
        a_roots, a_status = self.cy.crossing_roots(p.mass, p.sigma0, p.v0, p.g,
                                                   p.hbar, 0.1, xi, tol, 64)
        b_roots, b_status = self.py.crossing_roots(p.mass, p.sigma0, p.v0, p.g,
                                                   p.hbar, 0.1, xi, tol, 64)
        np.testing.assert_array_equal(a_roots, b_roots)
        np.testing.assert_array_equal(a_status, b_status)

    def test_status_codes_agree_on_failures(self):
        # detector two widths out: some quantiles start beyond it
        xi = np.array([-1.0, 0.0, 1.9999, 2.0, 2.5])
        for backend in (self.py, self.cy):
            roots, status = backend.crossing_roots(1.0, 1.0, 0.0, 1.0, 1.0,
                                                   2.0, xi, 1e-14, 64)
            assert list(status) == [0, 0, 0, 1, 1]
            assert np.all(np.isnan(roots[status == 1]))

    def test_shape_preservation(self):
        p = self.params
        for backend in (self.py, self.cy):
            out = backend.pdf_batch(p.mass, p.sigma0, p.v0, p.g, p.hbar, 0.1, 0.1)
            assert np.ndim(out) == 0
            out2 = backend.pdf_batch(p.mass, p.sigma0, p.v0, p.g, p.hbar, 0.1,
                                     np.zeros((3, 5)))
            assert out2.shape == (3, 5)


class TestSelection:
    def test_active_backend_reported(self):
        import toafall
        assert toafall.active_backend() in ("cython", "python")

    def test_env_var_forces_python(self):
        env = dict(os.environ, TOAFALL_BACKEND="python")
        out = subprocess.run(
            [sys.executable, "-c",
             "import toafall; print(toafall.active_backend())"],
            env=env, capture_output=True, text=True, check=True)
        assert out.stdout.strip() == "python"

    def test_unknown_backend_rejected(self):
        with pytest.raises(ValueError):
            get_backend("fortran")
