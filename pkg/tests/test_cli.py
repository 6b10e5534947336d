from fractions import Fraction

import pytest

from locis import EdgeSet, Graph, FreeSystem, Instance
from locis.cli import BENCH_COLUMNS, main
from locis.fileio import (
    load_instance,
    load_result,
    save_instance,
    save_result,
)
from locis.reductions import parse_dimacs

from test_algorithms import condition_breaker


def run(capsys, *argv):
    rc = main(list(argv))
    cap = capsys.readouterr()
    return rc, cap.out, cap.err


def gen_instance(capsys, tmp_path, *argv):
    path = tmp_path / "inst.txt"
    rc, _, _ = run(capsys, "gen", *argv, "--out", str(path))
    assert rc == 0
    return path


# ---------------------------------------------------------------- gen


def test_gen_families_produce_loadable_instances(capsys, tmp_path):
    specs = [
        ("gnp", ["--n", "6", "--p", "0.5"]),
        ("kdeg", ["--n", "6", "--k", "2"]),
        ("tree", ["--n", "7"]),
        ("hyper", ["--n", "6", "--d", "3", "--m", "5"]),
        ("bipartite", ["--n1", "3", "--n2", "3"]),
    ]
    for fam, flags in specs:
        path = gen_instance(capsys, tmp_path, fam, *flags, "--seed", "3")
        inst = load_instance(path.read_text())
        assert inst.n > 0
        if fam == "bipartite":
            assert inst.bipartition is not None
        if fam == "hyper":
            assert not inst.is_graph


def test_gen_to_stdout(capsys):
    rc, out, _ = run(capsys, "gen", "tree", "--n", "4")
    assert rc == 0
    assert out.startswith("locis instance v1\n")


def test_gen_cnf_and_maxsat(capsys, tmp_path):
    cnf_path = tmp_path / "f.cnf"
    rc, _, _ = run(capsys, "gen", "cnf", "--nvars", "4", "--clauses", "5",
                   "--width", "2", "--out", str(cnf_path))
    assert rc == 0
    cnf = parse_dimacs(cnf_path.read_text())
    assert cnf.nvars == 4 and len(cnf.clauses) == 5
    inst_path = tmp_path / "maxsat.txt"
    rc, _, _ = run(capsys, "gen", "maxsat", "--cnf", str(cnf_path),
                   "--out", str(inst_path))
    assert rc == 0
    inst = load_instance(inst_path.read_text())
    assert inst.bipartition is not None and inst.declared_k == 1


def test_gen_timed(capsys, tmp_path):
    tpath, ipath = tmp_path / "t.txt", tmp_path / "ti.txt"
    rc, _, _ = run(capsys, "gen", "timed", "--n", "5", "--p", "0.6",
                   "--out", str(tpath), "--instance-out", str(ipath))
    assert rc == 0
    assert tpath.read_text().startswith("locis timed v1\n")
    inst = load_instance(ipath.read_text())
    assert all(s.kind == "timed" for s in inst.systems)


def test_gen_fixture(capsys, tmp_path):
    path = tmp_path / "star.txt"
    rc, _, err = run(capsys, "gen", "fixture", "star_fixedorder",
                     "--alpha", "1", "--n", "6", "--out", str(path))
    assert rc == 0
    assert "fixture star_fixedorder: solve with fixed-order, expected ratio 5" in err
    assert (tmp_path / "star.txt.oracles").exists()
    inst = load_instance(path.read_text())
    assert inst.n == 6 and inst.m == 5


def test_gen_usage_errors(capsys, tmp_path):
    assert run(capsys, "gen", "gnp")[0] == 2  # missing --n
    assert run(capsys, "gen", "fixture")[0] == 2  # missing name
    rc, _, err = run(capsys, "gen", "fixture", "nope", "--n", "8")
    assert rc == 2 and "error" in err
    # fixture rejects out-of-domain parameters
    assert run(capsys, "gen", "fixture", "uw_greedy",
               "--alpha", "2", "--n", "5")[0] == 2


# ---------------------------------------------------------------- solve/verify


def test_solve_then_verify_pass(capsys, tmp_path):
    inst_path = gen_instance(capsys, tmp_path, "gnp", "--n", "7", "--p", "0.4",
                             "--seed", "11")
    res_path = tmp_path / "res.txt"
    rc, _, err = run(capsys, "solve", "--instance", str(inst_path),
                     "--alg", "ordered-approx", "--out", str(res_path))
    assert rc == 0
    assert "|I| = " in err and "bound = " in err
    rc, out, _ = run(capsys, "verify", "--instance", str(inst_path),
                     "--result", str(res_path))
    assert rc == 0
    assert out.startswith("PASS ordered-approx: |I| = ")
    assert "|OPT| = " in out and "certified = " in out


def test_solve_order_flags(capsys, tmp_path):
    inst_path = gen_instance(capsys, tmp_path, "gnp", "--n", "6", "--p", "0.5",
                             "--seed", "2")
    for spec in ("peel", "identity"):
        rc, out, _ = run(capsys, "solve", "--instance", str(inst_path),
                         "--alg", "decom-approx", "--order", spec)
        assert rc == 0
        assert "locis result v1" in out
    ofile = tmp_path / "order.txt"
    inst = load_instance(inst_path.read_text())
    ofile.write_text(" ".join(str(v) for v in reversed(range(inst.n))))
    rc, out, _ = run(capsys, "solve", "--instance", str(inst_path),
                     "--alg", "ordered-approx", "--order", str(ofile))
    assert rc == 0
    assert f"order {inst.n - 1} " in out


def test_solve_oracle_flags(capsys, tmp_path):
    inst_path = gen_instance(capsys, tmp_path, "tree", "--n", "6", "--seed", "4")
    rc, out, _ = run(capsys, "solve", "--instance", str(inst_path),
                     "--alg", "greedy", "--oracles", "greedy")
    assert rc == 0 and "locis result v1" in out
    star = tmp_path / "star.txt"
    run(capsys, "gen", "fixture", "star_fixedorder", "--alpha", "1",
        "--n", "6", "--out", str(star))
    res = tmp_path / "star_res.txt"
    rc, _, err = run(capsys, "solve", "--instance", str(star),
                     "--alg", "fixed-order", "--order", "identity",
                     "--oracles", str(star) + ".oracles", "--out", str(res))
    assert rc == 0
    assert "|I| = 1" in err
    rc, out, _ = run(capsys, "verify", "--instance", str(star),
                     "--result", str(res))
    assert rc == 0
    assert "ratio = 5" in out


def test_solve_usage_errors(capsys, tmp_path):
    inst_path = gen_instance(capsys, tmp_path, "tree", "--n", "5")
    hyper_path = gen_instance(capsys, tmp_path, "hyper", "--n", "6", "--d", "3",
                              "--m", "4")
    assert run(capsys, "solve", "--instance", str(inst_path),
               "--alg", "magic")[0] == 2
    assert run(capsys, "solve", "--instance", str(inst_path),
               "--alg", "greedy", "--order", "identity")[0] == 2
    assert run(capsys, "solve", "--instance", str(hyper_path),
               "--alg", "ordered-approx")[0] == 2
    assert run(capsys, "solve", "--instance", str(inst_path),
               "--alg", "bipartite")[0] == 2  # no bipartition
    assert run(capsys, "solve", "--instance",
               str(tmp_path / "missing.txt"), "--alg", "greedy")[0] == 2
    bad_order = tmp_path / "bad_order.txt"
    bad_order.write_text("zero one")
    assert run(capsys, "solve", "--instance", str(inst_path),
               "--alg", "ordered-approx", "--order", str(bad_order))[0] == 2


def test_solve_format_error(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("locis instance v1\nkind graph\nn x\nend\n")
    rc, _, err = run(capsys, "solve", "--instance", str(bad), "--alg", "greedy")
    assert rc == 2
    assert "format error" in err


def test_solve_hyper_condition_diagnostic(capsys, tmp_path):
    inst = condition_breaker()
    path = tmp_path / "breaker.txt"
    path.write_text(save_instance(inst))
    rc, _, err = run(capsys, "solve", "--instance", str(path),
                     "--alg", "ordered-approx-hyper", "--order", "peel")
    assert rc == 1
    assert "failure" in err and "not independent" in err
    # the decomposition solver handles the same instance
    rc, out, _ = run(capsys, "solve", "--instance", str(path),
                     "--alg", "decom-approx-hyper", "--order", "peel")
    assert rc == 0


def test_verify_fail_on_bad_claim(capsys, tmp_path):
    G = Graph(4, [(0, 1), (1, 2), (2, 3)])
    inst = Instance(G, [FreeSystem(G.incident(v)) for v in range(4)])
    inst_path = tmp_path / "path.txt"
    inst_path.write_text(save_instance(inst))
    res_path = tmp_path / "res.txt"
    res_path.write_text(
        "locis result v1\nalgorithm handmade\nalpha 1\nsize 1\n"
        "independent {0}\nbound none\npart 0 {0}\nresidual {}\nend\n"
    )
    rc, out, _ = run(capsys, "verify", "--instance", str(inst_path),
                     "--result", str(res_path))
    assert rc == 1
    assert out.startswith("FAIL handmade: |I| = 1  |OPT| = 3")
    assert "certified = 1" in out


def test_verify_rejects_tampered_result(capsys, tmp_path):
    inst_path = gen_instance(capsys, tmp_path, "tree", "--n", "5", "--seed", "6")
    res_path = tmp_path / "res.txt"
    assert run(capsys, "solve", "--instance", str(inst_path), "--alg",
               "ordered-approx", "--out", str(res_path))[0] == 0
    text = res_path.read_text()
    res_path.write_text(text.replace("size ", "size 9", 1))
    rc, _, err = run(capsys, "verify", "--instance", str(inst_path),
                     "--result", str(res_path))
    assert rc == 2 and "format error" in err


# ---------------------------------------------------------------- bench


def test_bench_deterministic_csv(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["bench", "--family", "tree", "--alg", "ordered-approx,greedy",
            "--n", "6,7", "--seeds", "2"]
    assert run(capsys, *argv, "--out", str(a))[0] == 0
    assert run(capsys, *argv, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == ",".join(BENCH_COLUMNS)
    assert len(lines) == 1 + 2 * 2 * 2  # sizes x seeds x algorithms
    assert all("tree-n" in l for l in lines[1:])


def test_bench_greedy_ratio_stays_under_half_n(capsys, tmp_path):
    # 50 seeded gnp rounds at n = 8: every observed ratio is at most
    # n/2 = 4, the worst the greedy guarantee allows with exact oracles
    out = tmp_path / "g.csv"
    rc, _, _ = run(capsys, "bench", "--family", "gnp", "--n", "8",
                   "--p", "0.4", "--seeds", "50", "--alg", "greedy",
                   "--out", str(out))
    assert rc == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 50
    ratios = [Fraction(r["ratio"]) for r in rows if r["ratio"]]
    assert ratios and max(ratios) == Fraction(12, 5)  # frozen seeded maximum
    assert all(r <= 4 for r in ratios)


def test_bench_timings_column(capsys, tmp_path):
    out = tmp_path / "t.csv"
    rc, _, _ = run(capsys, "bench", "--family", "gnp", "--alg", "greedy",
                   "--n", "5", "--seeds", "1", "--timings", "--out", str(out))
    assert rc == 0
    assert out.read_text().splitlines()[0].endswith(",runtime_s")


def test_bench_hyper_skips_condition_violators(capsys, tmp_path):
    out = tmp_path / "h.csv"
    rc, _, err = run(capsys, "bench", "--family", "hyper",
                     "--alg", "ordered-approx-hyper,decom-approx-hyper",
                     "--n", "6,7", "--d", "3", "--seeds", "6",
                     "--out", str(out))
    assert rc == 0, err
    lines = out.read_text().splitlines()
    ordered = sum(",ordered-approx-hyper," in l for l in lines)
    decom = sum(",decom-approx-hyper," in l for l in lines)
    assert decom == 12
    assert 0 < ordered <= decom


def test_bench_usage_errors(capsys):
    assert run(capsys, "bench", "--family", "tree", "--alg", "magic")[0] == 2
    assert run(capsys, "bench", "--family", "hyper", "--alg", "greedy")[0] == 2
    assert run(capsys, "bench", "--family", "tree", "--alg", "bipartite")[0] == 2
    assert run(capsys, "bench", "--family", "tree", "--alg", "greedy",
               "--n", "x")[0] == 2


def test_argparse_exit_codes(capsys):
    assert main([]) == 2
    assert main(["--help"]) == 0
    assert main(["gen", "unknown-family"]) == 2
