import json

import pytest

from padic_heights.cli import (
    canonical_bytes,
    cmd_construct,
    cmd_search,
    cmd_verify,
    main,
    parse_config,
)

CONFIG_Q2 = """
# dyadic example
min_poly = -1, 1
rho = 24
epsilon = 0.5
seed = 1
prime.1.p = 2
"""

CONFIG_GAUSS = """
min_poly = 1, 0, 1
rho = 15
seed = 1
prime.1.p = 5
prime.1.choice = 0
"""


def test_parse_config():
    cfg = parse_config(CONFIG_Q2)
    assert cfg.min_poly == [-1, 1]
    assert cfg.rho == 24 and cfg.seed == 1
    assert len(cfg.primes) == 1 and cfg.primes[0].p == 2


def test_parse_config_rejects_garbage():
    with pytest.raises(ValueError):
        parse_config("rho = 24\n")  # no min_poly
    with pytest.raises(ValueError):
        parse_config("min_poly = -1, 1\nrho = 24\nbogus_key = 3\n")
    with pytest.raises(ValueError):
        parse_config(CONFIG_Q2 + "\nnot a key value line\n")


def test_construct_report_roundtrip(tmp_path):
    cfg = parse_config(CONFIG_Q2)
    out = tmp_path / "report.json"
    code, report = cmd_construct(cfg, out_path=str(out))
    assert code == 0
    assert out.exists()
    assert cmd_verify(str(out)) == 0
    with open(out) as fh:
        loaded = json.load(fh)
    assert loaded["schema"] == 1
    assert loaded["g"]["degree"] == 32
    assert loaded["plan"]["k"] == [5]


def test_reports_byte_identical_modulo_timings(tmp_path):
    cfg = parse_config(CONFIG_Q2)
    _, rep1 = cmd_construct(cfg)
    _, rep2 = cmd_construct(parse_config(CONFIG_Q2))
    assert canonical_bytes(rep1) == canonical_bytes(rep2)
    assert rep1["determinism_sha256"] == rep2["determinism_sha256"]


def test_rho_below_threshold_rejected():
    cfg = parse_config(CONFIG_Q2.replace("rho = 24", "rho = 2"))
    code, report = cmd_construct(cfg)
    assert code == 3 and report is None


def test_seed_override_changes_anchor():
    cfg = parse_config(CONFIG_Q2)
    _, rep1 = cmd_construct(cfg, seed=1)
    _, rep2 = cmd_construct(parse_config(CONFIG_Q2), seed=2)
    assert rep1["anchor"]["g0_sha256"] != rep2["anchor"]["g0_sha256"]


def test_verify_detects_tamper(tmp_path):
    cfg = parse_config(CONFIG_Q2)
    out = tmp_path / "report.json"
    cmd_construct(cfg, out_path=str(out))
    with open(out) as fh:
        report = json.load(fh)
    report["g"]["coeffs_coords"][2][0] = str(int(report["g"]["coeffs_coords"][2][0]) + 1)
    bad = tmp_path / "tampered.json"
    with open(bad, "w") as fh:
        json.dump(report, fh)
    assert cmd_verify(str(bad)) == 2


def test_verify_structural_failure(tmp_path):
    cfg = parse_config(CONFIG_Q2)
    out = tmp_path / "report.json"
    cmd_construct(cfg, out_path=str(out))
    with open(out) as fh:
        report = json.load(fh)
    report["g"]["degree"] = 31
    bad = tmp_path / "degree.json"
    with open(bad, "w") as fh:
        json.dump(report, fh)
    assert cmd_verify(str(bad)) == 2


def test_verify_malformed_is_rejected(tmp_path):
    bad = tmp_path / "broken.json"
    bad.write_text("{oops")
    assert cmd_verify(str(bad)) == 3


def test_gaussian_config(tmp_path):
    cfg = parse_config(CONFIG_GAUSS)
    out = tmp_path / "gauss.json"
    code, report = cmd_construct(cfg, out_path=str(out))
    assert code == 0
    assert cmd_verify(str(out)) == 0
    assert report["height"]["lower"] is None  # number field: no floor formula


def test_search_cli(tmp_path):
    out = tmp_path / "search.json"
    assert cmd_search([2], 2, 3, out_path=str(out)) == 0
    with open(out) as fh:
        rec = json.load(fh)
    assert rec["min_height"] == 0.0
    assert rec["min_nonzero_height"] > 0.11


def test_search_empty_primes_degenerate(tmp_path):
    assert cmd_search([], 1, 1, out_path=str(tmp_path / "s.json")) == 0
    with open(tmp_path / "s.json") as fh:
        rec = json.load(fh)
    # every polynomial survives; roots of unity give zero height
    assert rec["min_height"] == 0.0
    assert rec["searched"] == 3


def test_extension_configs_roundtrip(tmp_path):
    ramified = "min_poly = -1, 1\nrho = 9\nseed = 1\nprime.1.p = 3\nprime.1.e = 2\n"
    out = tmp_path / "ram.json"
    code, report = cmd_construct(parse_config(ramified), out_path=str(out))
    assert code == 0 and cmd_verify(str(out)) == 0
    assert report["primes"][0]["rel_e"] == 2
    unram = "min_poly = -1, 1\nrho = 12\nseed = 1\nprime.1.p = 2\nprime.1.f = 2\n"
    out2 = tmp_path / "unram.json"
    code, report = cmd_construct(parse_config(unram), out_path=str(out2))
    assert code == 0 and cmd_verify(str(out2)) == 0
    assert report["primes"][0]["rel_f"] == 2


def test_main_entrypoint(tmp_path):
    cfg_path = tmp_path / "job.cfg"
    cfg_path.write_text(CONFIG_Q2)
    out = tmp_path / "r.json"
    assert main(["construct", "--config", str(cfg_path), "--seed", "1", "--out", str(out)]) == 0
    assert main(["verify", "--report", str(out)]) == 0
    assert main(["search", "--primes", "2", "--deg-max", "1", "--coeff-bound", "2"]) == 0


def test_env_var_precision_override(tmp_path, monkeypatch):
    monkeypatch.setenv("PADIC_HEIGHTS_PRECISION_SLACK", "14")
    cfg = parse_config(CONFIG_Q2)
    _, report = cmd_construct(cfg)
    assert report["primes"][0]["precision"] == 68 + 14
