import subprocess
import sys

import pytest

from pluckertree.cli import main
from pluckertree.generators import certificate_text, data_dir


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_check_reports_class_and_f_vector(capsys):
    code, out = run(capsys, "check", "intro-example")
    assert code == 0 and "closed orientable, f=(8,27,38,19)" in out
    code, out = run(capsys, "check", "zheng-Z")
    assert code == 0 and "f=(16,96,160,80)" in out


def test_check_rejects_a_book(tmp_path, capsys):
    book = tmp_path / "book.facets"
    book.write_text("0 1 2\n0 1 3\n0 1 4\n")
    code, out = run(capsys, "check", str(book))
    assert code != 0 and "in 3 facets" in out


def test_check_bounded(capsys):
    code, out = run(capsys, "check", "prismatoid-1039")
    assert code == 0 and "bounded (2 boundary components) orientable" in out


def test_missing_input():
    with pytest.raises(SystemExit):
        main(["check", "/nonexistent/file.facets"])


def test_orient_writes_signed_facets(tmp_path, capsys):
    out = tmp_path / "o.facets"
    code, _ = run(capsys, "orient", "jockusch-d3-5", "-o", str(out))
    lines = out.read_text().splitlines()
    assert code == 0 and len(lines) == 30 and all(l[0] in "+-" for l in lines)


def test_relations_counts_and_samples(capsys, tmp_path):
    code, out = run(capsys, "relations", "intro-example", "--sample", "3", "--dump-edges", str(tmp_path / "e"))
    assert code == 0 and "250 admissible relations" in out
    assert out.count("Γ(") == 3


def test_search_writes_a_verified_certificate(tmp_path, capsys):
    path = tmp_path / "c.json"
    code, out = run(capsys, "search", "intro-example", "-o", str(path))
    assert code == 0
    assert "status: optimal; tree size 1" in out and "verification: all checks passed" in out
    code, out = run(capsys, "verify", "intro-example", str(path))
    assert code == 0 and out.rstrip().endswith("PASS")


def test_search_output_is_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "search", "prismatoid-1963", "--max-size", "4", "-o", str(a))
    run(capsys, "search", "prismatoid-1963", "--max-size", "4", "-o", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_search_with_forbidden_avoids_the_ball(tmp_path, capsys):
    path = tmp_path / "f.json"
    code, out = run(capsys, "search", "jockusch-d3-6", "--forbidden", "forbidden-B3-6", "--max-size", "9",
                    "-o", str(path))
    assert code == 0
    code, out = run(capsys, "verify", "jockusch-d3-6", str(path), "--forbidden", "forbidden-B3-6")
    assert code == 0 and "(f) no solid determined only by a forbidden facet: ok" in out


def test_search_on_a_realizable_control_finds_nothing(tmp_path, capsys):
    path = tmp_path / "none.json"
    code, out = run(capsys, "search", "control-P", "--max-size", "4", "-o", str(path))
    assert code == 3 and "infeasible" in out and not path.exists()


def test_verify_shipped_and_mismatched(tmp_path, capsys):
    cert = data_dir() / "certificates" / "prismatoid-2669.json"
    code, out = run(capsys, "verify", "prismatoid-2669", str(cert))
    assert code == 0 and "PASS" in out
    wrong = data_dir() / "certificates" / "prismatoid-3513.json"
    code, out = run(capsys, "verify", "prismatoid-2669", str(wrong))
    assert code == 1 and "tree validity: FAIL" in out


def test_verify_with_forbidden_names_check_f(capsys):
    cert = data_dir() / "certificates" / "jockusch-d3-6.json"
    code, out = run(capsys, "verify", "jockusch-d3-6", str(cert), "--forbidden", "forbidden-B3-6")
    assert code == 1 and "FAIL: (f)" in out


def test_verify_renders_brackets(capsys):
    cert = data_dir() / "certificates" / "zheng-Z.json"
    code, out = run(capsys, "verify", "zheng-Z", str(cert))
    assert code == 0 and out.count("|") >= 8 * 7


def test_eval_prints_zeros(tmp_path, capsys):
    cert = tmp_path / "z.json"
    cert.write_text(certificate_text("prismatoid-1039"))
    code, out = run(capsys, "eval", "prismatoid-1039", str(cert), "--configs", "2")
    assert code == 0 and out.splitlines() == ["config 0: 0", "config 1: 0"]


def test_generate(tmp_path, capsys):
    code, out = run(capsys, "generate", "--list")
    assert "novik-zheng-d4-7" in out.split()
    code, out = run(capsys, "generate", "novik-zheng-d4-6", "cyclic-4-8", "-o", str(tmp_path))
    assert code == 0 and (tmp_path / "cyclic-4-8.facets").is_file()
    assert main(["generate", "nope", "-o", str(tmp_path)]) == 2


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "pluckertree.cli", "check", "jockusch-d3-6"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "f=(12,60,96,48)" in res.stdout
