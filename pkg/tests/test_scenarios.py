import json
import subprocess
import sys

import pytest

from conftest import GRID, dataset, disk_piece_run
from lfkirby import arrangement as am
from lfkirby.cli import main
from lfkirby.fibration import ContractViolation
from lfkirby.kirby import MoveCertificate
from lfkirby.scenarios import (
    BUDGET_ENV,
    RATIONAL_NOTE,
    assemble_theorem,
    disk_piece_waves,
    run_disk_piece,
    verify_conjugation_identities,
)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_closed_handle_vector(n):
    h = 2
    cert, _, _ = disk_piece_run(h, n)
    rep = assemble_theorem(h, n, cert, dataset(h, n))
    assert rep.handles == (1, 0, 12 * n - 2, 0, 1)
    assert rep.chi == rep.chi_from_fibration == 12 * n
    assert rep.b2 == 12 * n - 2
    assert (rep.note == RATIONAL_NOTE) == (n == 1)


def test_worked_example_counts():
    cert, _, _ = disk_piece_run(3, 2)
    rep = assemble_theorem(3, 2, cert, dataset(3, 2))
    assert rep.handles == (1, 0, 22, 0, 1) and rep.chi == 24


def test_failed_certificate_is_not_assembled():
    bad = MoveCertificate({}, success=False)
    with pytest.raises(ContractViolation):
        assemble_theorem(1, 1, bad, dataset(1, 1))


@pytest.mark.parametrize("h,n", GRID)
def test_conjugation_identities(h, n):
    v = verify_conjugation_identities(h, n, dataset(h, n))
    assert v.ok, v.failures


def test_waves_in_hinted_order():
    cert, _, _ = disk_piece_run(3, 3)
    cancels = [m for m in cert.moves if m["kind"] == "cancel"]
    assert all(m["in_order"] for m in cancels)
    assert [m["wave"] for m in cancels][0] == "middle"
    assert len(cancels) == sum(len(w.hints) for w in disk_piece_waves(3, 3))


def test_broken_dataset_is_refused():
    arr = dataset(1, 1)
    broken = arr.with_curves({"c1": arr.word("a1")})
    with pytest.raises(ContractViolation):
        run_disk_piece(1, 1, broken)


def test_budget_stalls_the_run(monkeypatch):
    monkeypatch.setenv(BUDGET_ENV, "3")
    cert, _, _ = run_disk_piece(1, 1, dataset(1, 1), check=False)
    assert not cert.success and cert.stalled


# ---------------------------------------------------------------------------
# command line


def test_cli_verify_text(capsys):
    assert main(["verify", "--h", "3", "--n", "2"]) == 0
    out = capsys.readouterr().out
    assert "(1, 0, 22, 0, 1)" in out and "chi = 24" in out
    assert "tietze oracle agrees: yes" in out


def test_cli_verify_json_and_report(tmp_path, capsys):
    rep = tmp_path / "c.json"
    assert main(["verify", "--h", "1", "--n", "1", "--format", "json", "--report", str(rep)]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["handles"] == [1, 0, 10, 0, 1] and d["certified"]
    first = rep.read_bytes()
    assert main(["verify", "--h", "1", "--n", "1", "--report", str(rep)]) == 0
    assert rep.read_bytes() == first
    assert MoveCertificate.from_json(first.decode()).success


@pytest.mark.parametrize("check", ["gurtas", "conjugation", "alexander"])
def test_cli_relations(check, capsys):
    assert main(["relations", "--h", "2", "--n", "1", "--check", check]) == 0
    assert capsys.readouterr().out


def test_cli_invariants(capsys):
    assert main(["invariants", "--h", "1", "--n", "2"]) == 0
    out = capsys.readouterr().out
    assert "chi 24" in out and "chi 12" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--h", "0", "--n", "1"],
        ["verify", "--h", "1"],
        ["relations", "--h", "1", "--n", "1", "--check", "nope"],
        ["verify", "--h", "1", "--n", "1", "--dataset", "/nonexistent.txt"],
        ["frobnicate"],
    ],
)
def test_cli_invalid_input(argv, capsys):
    assert main(argv) == 2


def test_cli_reports_a_failed_contract(tmp_path, capsys):
    arr = dataset(1, 1)
    path = tmp_path / "bad.txt"
    path.write_text(am.dumps(arr.with_curves({"c1": arr.word("a1")})))
    assert main(["verify", "--h", "1", "--n", "1", "--dataset", str(path)]) == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "lfkirby", "invariants", "--h", "1", "--n", "1"],
                       capture_output=True, text=True, timeout=60)
    assert r.returncode == 0 and "chi 12" in r.stdout
