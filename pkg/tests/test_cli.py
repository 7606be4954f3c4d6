import json
import subprocess
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
CLI = ROOT / "backend" / "cli.py"
FIXTURES = ROOT / "backend" / "fixtures"

LOTKA_VOLTERRA = FIXTURES / "models" / "lotka_volterra.json"
TP1 = FIXTURES / "corpus" / "tp1_activator_inhibitor.json"
PI4 = FIXTURES / "corpus" / "pi4_annihilation.json"
ORDERED = FIXTURES / "models" / "ordered_sequential.json"
RANDOM = FIXTURES / "models" / "random_sequential.json"
PING_PONG = FIXTURES / "models" / "ping_pong.json"


def run(*args):
    return subprocess.run(
        [sys.executable, str(CLI), *[str(a) for a in args]],
        capture_output=True,
        text=True,
        cwd=ROOT,
    )


@pytest.fixture
def triangle_model(tmp_path):
    path = tmp_path / "triangle.json"
    path.write_text(json.dumps({
        "name": "triangle",
        "universe": {"labels": ["a", "b", "c"]},
        "mode": "explicit",
        "max_dim": 2,
        "simplices": [["a", "b"], ["a", "c"], ["b", "c"], ["a"], ["b"], ["c"]],
    }))
    return path


def test_build_lotka_volterra():
    result = run("build", LOTKA_VOLTERRA)
    assert result.returncode == 0
    assert result.stdout == "0:7 1:14 2:11 3:3 4:0\n"


def test_build_reports_open_list(tmp_path):
    path = tmp_path / "abierto.json"
    path.write_text(json.dumps({
        "name": "abierto",
        "universe": {"labels": ["a", "b"]},
        "mode": "explicit",
        "max_dim": 1,
        "simplices": [["a", "b"]],
    }))
    assert run("build", path).returncode == 2
    closed = run("build", path, "--auto-close")
    assert closed.returncode == 0
    assert closed.stdout == "0:2 1:1\n"
    assert "aviso" in closed.stderr


def test_distance_modes_agree():
    simplicial = run("distance", TP1, PI4)
    persistence = run("distance", TP1, PI4, "--mode", "persistence")
    assert simplicial.returncode == persistence.returncode == 0
    assert simplicial.stdout == persistence.stdout == "268\n"


def test_distance_universe_mismatch():
    result = run("distance", LOTKA_VOLTERRA, TP1)
    assert result.returncode == 1
    assert "error" in result.stderr


def test_barcode_text(triangle_model):
    result = run("barcode", triangle_model, "--format", "text")
    assert result.returncode == 0
    assert result.stdout == "H0 [1, inf)\nH0 [2, 4)\nH0 [3, 5)\nH1 [6, inf)\n"


def test_barcode_json_to_file(triangle_model, tmp_path):
    output = tmp_path / "barcode.json"
    result = run("barcode", triangle_model, "-o", output)
    assert result.returncode == 0
    document = json.loads(output.read_text())
    assert document["intervals"]["H1"] == [[6, None]]
    assert document["model"] == "triangle"


def test_seeded_barcode_is_deterministic(triangle_model):
    first = run("barcode", triangle_model, "--seed", "7", "--format", "svg")
    second = run("barcode", triangle_model, "--seed", "7", "--format", "svg")
    assert first.returncode == 0
    assert first.stdout == second.stdout


def test_matrix(tmp_path):
    for path in (ORDERED, RANDOM, PING_PONG):
        (tmp_path / path.name).write_bytes(path.read_bytes())
    result = run("matrix", tmp_path)
    assert result.returncode == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "model,ordered_sequential,ping_pong,random_sequential"
    assert [row.split(",")[0] for row in lines[1:]] == ["ordered_sequential", "ping_pong", "random_sequential"]
    assert run("matrix", tmp_path, "--mode", "persistence").stdout == result.stdout


def test_matrix_empty_directory(tmp_path):
    assert run("matrix", tmp_path).returncode == 2


def test_rank_and_inverse():
    universe = FIXTURES / "universes" / "lotka_volterra_components.json"
    assert run("rank", "Prey", "--universe", universe, "--max-dim", "2").stdout == "1\n"
    pair = run("rank", "Prey", "Prey growth", "--universe", universe, "--max-dim", "2")
    assert pair.stdout == "8\n"
    inverse = run("rank", "8", "--universe", universe, "--max-dim", "2", "--inverse")
    assert json.loads(inverse.stdout) == ["Prey", "Prey growth"]


def test_rank_above_max_dim():
    universe = FIXTURES / "universes" / "lotka_volterra_components.json"
    result = run("rank", "Prey", "Predator", "--universe", universe, "--max-dim", "0")
    assert result.returncode == 2


def test_equiv_verify_accepts():
    script = FIXTURES / "scripts" / "tp1_to_pi4.json"
    decl = FIXTURES / "declarations" / "pattern_formation_concepts.json"
    result = run("equiv", "verify", TP1, PI4, script, "--decl", decl)
    assert result.returncode == 0
    lines = result.stdout.splitlines()
    assert len(lines) == 6
    assert lines[-1] == "accepted"


def test_equiv_verify_rejects_in_strict_mode():
    script = FIXTURES / "scripts" / "ordered_to_random.json"
    decl = FIXTURES / "declarations" / "bisubstrate_concepts.json"
    strict = run("equiv", "verify", ORDERED, RANDOM, script, "--decl", decl)
    assert strict.returncode == 1
    assert strict.stdout.splitlines()[-1].startswith("rejected: ")
    quotient = run("equiv", "verify", ORDERED, RANDOM, script, "--decl", decl, "--mode", "quotient")
    assert quotient.returncode == 0


def test_equiv_search_not_found():
    decl = FIXTURES / "declarations" / "bisubstrate_concepts.json"
    result = run("equiv", "search", ORDERED, PING_PONG, "--decl", decl, "--max-ops", "6")
    assert result.returncode == 0
    assert result.stdout == "not found within 6 operations\n"


def test_equiv_search_writes_script(tmp_path):
    decl = FIXTURES / "declarations" / "pattern_formation_concepts.json"
    output = tmp_path / "script.json"
    result = run("equiv", "search", TP1, PI4, "--decl", decl, "-o", output)
    assert result.returncode == 0
    steps = json.loads(output.read_text())
    assert len(steps) == 4
    assert run("equiv", "verify", TP1, PI4, output, "--decl", decl).returncode == 0


def test_missing_file():
    result = run("build", "no_existe.json")
    assert result.returncode == 2
    assert "no_existe.json" in result.stderr


def test_invalid_json(tmp_path):
    path = tmp_path / "roto.json"
    path.write_text("{")
    result = run("build", path)
    assert result.returncode == 2
    assert "roto.json:1:2" in result.stderr


def test_usage_error():
    assert run("distance", LOTKA_VOLTERRA).returncode == 2
