import os
import subprocess

import pytest

LBM = os.environ.get("ECLBM_LBM")
pytestmark = pytest.mark.skipif(not LBM, reason="ECLBM_LBM not set")


def run(args, tmp_path, text):
    cfg = tmp_path / "run.conf"
    cfg.write_text(text)
    return subprocess.run([LBM, *args, "--config", str(cfg)], capture_output=True, text=True)


def test_constraints_exit_codes(tmp_path):
    ok = run(["constraints"], tmp_path, "[scheme]\nname = D2Q13\nsigma5 = 0.015\nalpha2 = -116\nbeta2 = -9.136334\n")
    assert ok.returncode == 0
    assert "kind,name,value,pass" in ok.stdout
    bad = run(["constraints"], tmp_path, "[scheme]\nname = D2Q13\nsigma5 = 0.015\nalpha2 = 0\nbeta2 = -9.136334\n")
    assert bad.returncode == 4
    cfg = run(["constraints"], tmp_path, "[scheme]\nname = D2Q9\nwhat = 1\n")
    assert cfg.returncode == 2
    assert "line 3" in cfg.stderr


def test_out_file(tmp_path):
    out = tmp_path / "zp.csv"
    r = run(["zero-point", "--out", str(out)], tmp_path,
            "[scheme]\nname = D2Q9\n[zero_point]\nk_min = 0.1\nk_max = 0.5\nn_k = 3\n")
    assert r.returncode == 0
    lines = out.read_text().splitlines()
    header = [l for l in lines if not l.startswith("#")][0]
    assert header == "theta_deg,k,mode_label,re,im,modulus,arg,nu_eff_or_kappa_eff,vsound_ratio"
