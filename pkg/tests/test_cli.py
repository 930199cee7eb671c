import json

import pytest

from simplets import io
from simplets.cli import derive_seed, main
from simplets.exact import count_exact
from simplets.simpletgen import get_catalog, load_catalog
from simplets.synthetic import FAMILIES, random_complex


@pytest.fixture
def dataset(tmp_path):
    path = tmp_path / "k.txt"
    io.save_plain(random_complex(30, 45, rng_seed=2, min_size=2), path)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_gen(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--k", 4, "--out", tmp_path / "c.txt")
    assert code == 0 and "simplets=14" in out
    assert len(load_catalog(tmp_path / "c.txt")) == 14


def test_exact_matches_library(capsys, dataset, tmp_path):
    code, out, _ = run(capsys, "exact", "--input", dataset, "--k", 4, "--threads", 2)
    assert code == 0
    rep = io.loads_report(out)
    assert rep.counts == count_exact(io.load_plain(dataset), get_catalog(4)).counts


def test_exact_with_catalog_file(capsys, dataset, tmp_path):
    run(capsys, "gen", "--k", 3, "--out", tmp_path / "c3.txt")
    code, out, _ = run(capsys, "exact", "--input", dataset, "--k", 3, "--catalog", tmp_path / "c3.txt")
    assert code == 0 and io.loads_report(out).k == 3
    code, _, err = run(capsys, "exact", "--input", dataset, "--k", 4, "--catalog", tmp_path / "c3.txt")
    assert code == 1 and "catalog" in err


def test_count_error_round_trip(capsys, dataset, tmp_path):
    assert run(capsys, "exact", "--input", dataset, "--k", 4, "--out", tmp_path / "e.json")[0] == 0
    assert run(capsys, "count", "--input", dataset, "--k", 4, "--samples", 20000, "--seed", 1,
               "--out", tmp_path / "s.json", "--timing")[0] == 0
    assert "elapsed_seconds" in (tmp_path / "s.json").read_text()
    code, out, _ = run(capsys, "error", "--exact", tmp_path / "e.json", "--estimate", tmp_path / "s.json")
    assert code == 0 and 0 <= float(out) < 0.2
    code, out, _ = run(capsys, "error", "--exact", tmp_path / "e.json", "--estimate", tmp_path / "e.json")
    assert out.strip() == "0.0"


@pytest.mark.parametrize("argv", [
    ["count", "--input", "x.txt", "--k", "4", "--samples", "0"],
    ["count", "--input", "x.txt", "--k", "4"],
    ["exact", "--input", "x.txt", "--k", "4", "--bogus"],
    ["frobnicate"],
    [],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and err and not out


def test_invalid_k(capsys, dataset):
    assert run(capsys, "exact", "--input", dataset, "--k", 7)[0] == 1
    assert run(capsys, "exact", "--input", dataset, "--k", 6)[0] == 1
    assert run(capsys, "gen", "--k", 0)[0] == 1


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "exact", "--input", tmp_path / "missing.txt", "--k", 3)
    assert code == 2 and "missing.txt" in err


def test_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 0\n")
    assert run(capsys, "exact", "--input", bad, "--k", 3)[0] == 2


def test_computation_error(capsys, dataset):
    code, _, err = run(capsys, "exact", "--input", dataset, "--k", 4, "--max-subsets", 5)
    assert code == 3 and "budget" in err


def test_profile_and_cluster(capsys, tmp_path):
    for name, make in FAMILIES.items():
        for i in range(2):
            path = tmp_path / f"{name}{i}.txt"
            io.save_plain(make(40, rng_seed=[7, i]), path)
            code, _, _ = run(capsys, "profile", "--input", path, "--k", 4, "--method", "exact",
                             "--shuffles", 50, "--null-replicas", 2, "--seed", i,
                             "--out", tmp_path / f"{name}{i}.profile.json")
            assert code == 0
    doc = json.loads((tmp_path / "star0.profile.json").read_text())
    assert doc["dataset"] == "star0" and len(doc["seeds"]["null_model"]) == 2
    code, _, _ = run(capsys, "cluster", "--profiles", tmp_path / "*.profile.json", "--clusters", 3,
                     "--trials", 4, "--seed", 0, "--out-prefix", tmp_path / "res")
    assert code == 0
    rows = (tmp_path / "res-assignments.csv").read_text().splitlines()
    assert len(rows) == 5 and rows[0].split(",")[1] == "filled0"
    sim = (tmp_path / "res-similarity.csv").read_text().splitlines()
    assert len(sim) == 7


def test_cluster_without_matches(capsys, tmp_path):
    assert run(capsys, "cluster", "--profiles", tmp_path / "*.json", "--clusters", 2)[0] == 2


def test_convergence(capsys, dataset):
    code, out, _ = run(capsys, "convergence", "--input", dataset, "--k", 3, "--samples", "100,1000",
                       "--trials", 3, "--seed", 4)
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("samples,index,code,mean,std")
    assert len(lines) == 1 + 2 * 3
    code, out, _ = run(capsys, "convergence", "--input", dataset, "--k", 3, "--samples", "100",
                       "--trials", 2, "--fixed-coloring", "--timing")
    assert code == 0 and out.splitlines()[0].endswith(",seconds")


@pytest.mark.parametrize("sub", ["count", "profile", "convergence"])
def test_reports_do_not_depend_on_threads(capsys, dataset, sub):
    extra = {"count": ["--samples", 9000],
             "profile": ["--samples", 5000, "--shuffles", 20],
             "convergence": ["--samples", "500,5000", "--trials", 2]}[sub]
    outs = []
    for threads in (1, 3):
        code, out, _ = run(capsys, sub, "--input", dataset, "--k", 4, "--seed", 5,
                           "--threads", threads, *extra)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_derive_seed():
    assert derive_seed(1, 2) == derive_seed(1, 2)
    assert derive_seed(1, 2) != derive_seed(1, 3)
    assert 0 <= derive_seed(0) < 2**63
