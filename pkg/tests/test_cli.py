import json
from importlib import resources
from pathlib import Path

import numpy as np
import pytest

from appendix_a_reference import clebsch, polynomial
from hurwitz_fuchs import cli

ANCHORS = json.loads((Path(__file__).parents[1] / "docs" / "anchors.json").read_text())["anchors"]


def _write(tmp_path, cfg):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    return str(p)


def _base(**kw):
    cfg = {"schema": cli.CONFIG_SCHEMA, "name": "t", "covering": {"kind": "clebsch", "g": 0, "d": 3},
           "basis": "appendixA", "tasks": [{"name": "monodromy"}]}
    cfg.update(kw)
    return cfg


def test_exact_config_passes_and_report_is_complete(tmp_path):
    out = tmp_path / "r.json"
    assert cli.run(_write(tmp_path, _base()), str(out)) == 0
    rep = json.loads(out.read_text())
    assert rep["schema"] == cli.REPORT_SCHEMA and rep["status"] == "pass"
    task = rep["tasks"][0]
    assert task["data"]["matrices"]["M_1"] == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 1], [0, 0, 0, 1]]
    assert all(c["anchor"] in ANCHORS for c in task["claims"])


@pytest.mark.parametrize("cfg", [
    {"schema": "other"},
    _base(covering={"kind": "hyperelliptic", "branch_values": [1, 1]}),
    _base(covering={"kind": "hyperelliptic", "branch_values": [[1, 2, 3]]}),
    _base(covering={"kind": "bogus"}),
    _base(tasks=[{"name": "nope"}]),
    _base(tasks=[{"name": "det"}]),
    _base(basis="weird"),
])
def test_config_errors_exit_2(tmp_path, cfg):
    assert cli.run(_write(tmp_path, cfg), str(tmp_path / "r.json")) == 2


def test_missing_file_exit_2(tmp_path):
    assert cli.main(["--config", str(tmp_path / "absent.json")]) == 2


def test_task_failure_exit_1_with_partial_report(tmp_path):
    cfg = _base(covering={"kind": "none"},
                tasks=[{"name": "hurwitz", "g": 0, "d": 3, "expected": 5},
                       {"name": "hurwitz", "g": 0, "d": 2, "expected": 1}])
    out = tmp_path / "r.json"
    assert cli.run(_write(tmp_path, cfg), str(out)) == 1
    rep = json.loads(out.read_text())
    assert [t["status"] for t in rep["tasks"]] == ["fail", "pass"]
    assert rep["tasks"][0]["failures"] == ["hurwitz_number:count"]


def test_task_flag_overrides_list(tmp_path):
    cfg = _base(covering={"kind": "none"}, tasks=[{"name": "hurwitz", "g": 0, "d": 3, "expected": 5}])
    out = tmp_path / "r.json"
    assert cli.main(["--config", _write(tmp_path, cfg), "--out", str(out), "--task", "braid_genus1"]) == 0
    assert [t["name"] for t in json.loads(out.read_text())["tasks"]] == ["braid_genus1"]


def test_complex_pairs_parsed():
    assert cli._cplx([1, -2]) == 1 - 2j
    assert cli._cplx(3) == 3
    with pytest.raises(cli.ConfigError):
        cli._cplx("x")


def test_goldens_byte_stable_and_match_shipped(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    pa = cli.emit_goldens(a)
    cli.emit_goldens(b)
    shipped = resources.files("hurwitz_fuchs") / "goldens"
    for p in pa:
        rel = p.relative_to(a)
        assert p.read_bytes() == (b / rel).read_bytes()
        assert p.read_bytes() == (shipped / str(rel)).read_bytes()


@pytest.mark.parametrize("g,d", cli.GOLDEN_GRID)
def test_goldens_equal_closed_forms(g, d):
    folder = resources.files("hurwitz_fuchs") / "goldens" / cli.golden_key(g, d, (1,) * d)
    mats, minf = clebsch(g, d)
    for k, m in enumerate(mats, 1):
        assert json.loads((folder / f"M_{k}.json").read_text())["matrix"] == m.tolist()
    assert json.loads((folder / "M_inf.json").read_text())["matrix"] == minf.tolist()


@pytest.mark.parametrize("d", cli.GOLDEN_POLY)
def test_polynomial_goldens_equal_closed_forms(d):
    folder = resources.files("hurwitz_fuchs") / "goldens" / cli.golden_key(0, d, (d,))
    mats, minf = polynomial(d)
    assert json.loads((folder / "M_inf.json").read_text())["matrix"] == minf.tolist()
    assert all(json.loads((folder / f"M_{k}.json").read_text())["matrix"] == m.tolist()
               for k, m in enumerate(mats, 1))


def test_named_golden_examples():
    root = resources.files("hurwitz_fuchs") / "goldens"
    assert json.loads((root / "0_3_1-1-1" / "M_1.json").read_text())["Sigma"] == [[-1, 1], [0, 1]]
    assert json.loads((root / "0_3_3" / "M_inf.json").read_text())["matrix"] == [[0, -1], [1, -1]]


def test_anchor_table_covers_handlers():
    src = Path(cli.__file__).read_text()
    import re
    used = set(re.findall(r'_claim\(claims, "([a-z0-9_]+)"', src))
    used |= {f"degeneration_{k}" for k in ("limWPP1", "asaWPP", "aswg", "asbWPP")}
    used |= {"degree_two_det_value", "det_value"}
    assert used <= set(ANCHORS)


def test_report_claims_carry_anchors_for_bundled_exact_config(tmp_path):
    out = tmp_path / "r.json"
    assert cli.run("exact_clebsch_g1_d3.cfg", str(out)) == 0
    rep = json.loads(out.read_text())
    assert all(c["anchor"] in ANCHORS for t in rep["tasks"] for c in t["claims"])
