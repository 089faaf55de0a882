"""Exit criteria.  Run ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line per criterion."""

import pytest

from mirror_born import acceptance
from mirror_born.cli import main

CRITERIA = [
    acceptance.criterion_1,
    acceptance.criterion_2,
    acceptance.criterion_3,
    acceptance.criterion_4,
    acceptance.criterion_5,
    acceptance.criterion_6,
    acceptance.criterion_7,
    acceptance.criterion_8,
    acceptance.criterion_9,
    acceptance.criterion_10,
]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_criterion(criterion):
    result = criterion()
    print(result.line())
    assert result.passed, result.line()


def test_criterion_thresholds():
    m = acceptance.criterion_1().metrics
    assert m["parseval_defect"] <= 1e-12 and m["roundtrip_defect"] <= 1e-12
    m = acceptance.criterion_2().metrics
    assert max(m.values()) <= 1e-10
    m = acceptance.criterion_3().metrics
    assert m["dev_reflect_conj"] >= 0.1
    assert m["dev_reflect_conj"] == pytest.approx(acceptance.BOOSTED_DEV_ORACLE, abs=1e-10)
    m = acceptance.criterion_6().metrics
    assert m["path_defect"] <= 1e-10 and m["reconstruction_defect"] <= 1e-9 and m["gram_defect"] <= 1e-10
    m = acceptance.criterion_7().metrics
    assert m["defect"] <= 1e-9
    m = acceptance.criterion_8().metrics
    assert m["freq_defect"] <= 0.002 and m["chi2_passes"] >= 95
    m = acceptance.criterion_9().metrics
    assert m["rate_z"] <= 4 and m["tv_distance"] <= 0.01 and m["degenerate_rate"] == 1.0


def test_suite_command_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["suite", "--out", str(a)]) == 0
    assert main(["suite", "--out", str(b)]) == 0
    csvs = sorted(p.name for p in a.glob("*.csv"))
    assert csvs == sorted(p.name for p in b.glob("*.csv"))
    assert "acceptance.csv" in csvs
    for name in csvs:
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_suite_exit_status_tracks_failures(monkeypatch, tmp_path):
    def broken(seed=1):
        return acceptance.Criterion(5, "forced failure", False)

    monkeypatch.setattr(acceptance, "criterion_5", broken)
    assert main(["suite", "--out", str(tmp_path)]) == 1
