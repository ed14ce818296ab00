import cmath
import math

import numpy as np
import pytest

import eclbm

D2Q13 = """
[scheme]
name = D2Q13
sigma5 = 0.015
alpha2 = -116
beta2 = -9.136334
s11 = 1.4
s12 = 1.3
"""


def test_scheme_matrices():
    sc = eclbm.build_scheme("D2Q9")
    assert sc.q == 9
    assert sc.M[3, 0] == -4.0
    assert sc.M[3, 5] == 2.0
    np.testing.assert_allclose(sc.M @ sc.Minv, np.eye(9), atol=1e-13)
    assert eclbm.build_scheme("D2Q17").M[3, 13] == 76.0


def test_derived_parameters():
    p = eclbm.derive(D2Q13)
    d = p.as_dict()
    assert d["c0"] == pytest.approx(2 / math.sqrt(5), rel=1e-15)
    assert d["c1"] == pytest.approx(-1.4, rel=1e-14)
    assert p.sigma(6) == pytest.approx(1 / (12 * 0.015), rel=1e-13)
    sc = eclbm.build_scheme("D2Q13")
    t = eclbm.predicted_transport(p, sc)
    assert t["nu"] == pytest.approx(0.006, rel=1e-12)
    assert t["prandtl"] == pytest.approx(0.728, abs=0.01)
    assert all(ok for _, _, ok in eclbm.validate(p, sc))


def test_config_errors():
    with pytest.raises(ValueError, match="rate outside"):
        eclbm.derive("[scheme]\nname = D2Q9\ns5 = 2.5\n")


def test_zero_k_spectrum():
    p = eclbm.derive(D2Q13)
    sc = eclbm.build_scheme("D2Q13")
    ev = np.sort_complex(eclbm.eigenvalues(eclbm.amplification_matrix(sc, p, 0.0, 0.0)))
    want = np.sort_complex(np.array([1.0] * 4 + [1 - s for s in p.s[4:]], dtype=complex))
    np.testing.assert_allclose(ev, want, atol=1e-10)


def test_shear_decay_matches_spectrum():
    p = eclbm.derive(D2Q13)
    sc = eclbm.build_scheme("D2Q13")
    amps = eclbm.relax_shear_wave(sc, p, 32, 24, 1, 1, 400)
    assert abs(amps[0]) == pytest.approx(1e-4, rel=1e-12)
    k = 2 * math.pi * math.hypot(1 / 32, 1 / 24)
    theta = math.atan2(1 / 24, 1 / 32)
    nu = eclbm.small_k_damping(sc, p, theta)[0]
    assert nu == pytest.approx(0.006, rel=1e-5)
    # late-time decay per step, transients gone
    ratio = (abs(amps[400]) / abs(amps[200])) ** (1 / 200)
    assert ratio == pytest.approx(math.exp(-nu * k * k), rel=1e-5)


def test_run_command():
    rc, out, err = eclbm.run_command("constraints", D2Q13)
    assert rc == 0, err
    assert out.startswith("#")
    assert "0.89442719099991" in out
    rc, out, err = eclbm.run_command("constraints", "[scheme]\nname = D2Q9\nbogus = 1\n")
    assert rc == 2
    assert "line 3" in err
