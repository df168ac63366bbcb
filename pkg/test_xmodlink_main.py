"""
Tests for the command-line front end.

What it checks
--------------
1. Verb parsing and usage errors (exit code 2)
2. check-pair and moves: exit code 1 on a failed check, 0 otherwise
3. invariant, rack-count and tables output
4. Output bytes do not depend on --workers
"""

import os
import sys

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import pytest

from xmodlink_algebra import ga_from_counts, symmetric_group
from xmodlink_errors import UnknownVerb
from xmodlink_main import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, main, parse_args, run
from xmodlink_tables import TrefoilTable

EISERMANN_S3 = "eisermann:S3:x=(12)"


# ------------------------------------------------------------------
# 1.  Parsing

def test_unknown_verb():
    with pytest.raises(UnknownVerb):
        parse_args(["frobnicate"])


def test_unknown_verb_exit_code(capsys):
    assert main(["frobnicate"]) == EXIT_USAGE
    assert "unknown command 'frobnicate'" in capsys.readouterr().err


def test_missing_verb_is_an_argparse_error():
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2


def test_common_options_are_parsed():
    command = parse_args(["moves", "--builtin", "rack-pair:dihedral:3", "--workers", "2", "--seed", "7"])
    assert command.verb == "moves"
    assert command.options.workers == 2
    assert command.options.seed == 7
    assert not command.options.framed


def test_builtins_listing(capsys):
    assert main(["builtins"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Pairs:" in out
    assert "  closed:trefoil+" in out


# ------------------------------------------------------------------
# 2.  Checks

def test_check_pair_failure(capsys):
    assert main(["check-pair", "--builtin", "rack-pair:cyclic:3"]) == EXIT_CHECK_FAILED
    assert "❌ R1 FAILED" in capsys.readouterr().out


def test_check_pair_framed_prints_f(capsys):
    assert main(["check-pair", "--builtin", "rack-pair:cyclic:3", "--framed"]) == EXIT_OK
    assert "f: 0->1, 1->2, 2->0" in capsys.readouterr().out


def test_check_pair_needs_a_pair(capsys):
    assert main(["check-pair"]) == EXIT_USAGE
    assert "needs --pair <path> or --builtin <key>" in capsys.readouterr().err


def test_check_pair_rejects_a_rack_key(capsys):
    assert main(["check-pair", "--builtin", "rack:dihedral:3"]) == EXIT_USAGE
    assert "is not a Reidemeister pair" in capsys.readouterr().err


def test_check_group_file(tmp_path, capsys):
    path = tmp_path / "z2.grp"
    path.write_text("group Z2 2\nelements e a\ne a\na e\n", encoding="utf-8")
    assert main(["check-pair", "--group", str(path)]) == EXIT_OK
    assert "✅ Z2 is a group of order 2" in capsys.readouterr().out


def test_missing_file_is_a_usage_error(tmp_path, capsys):
    assert main(["check-pair", "--pair", str(tmp_path / "absent.pair")]) == EXIT_USAGE
    assert "no such file" in capsys.readouterr().err


def test_moves(capsys):
    assert main(["moves", "--builtin", "rack-pair:dihedral:3"]) == EXIT_OK
    assert "12/12 relations hold (unframed set)" in capsys.readouterr().out


def test_moves_failure():
    result = run(parse_args(["moves", "--builtin", "rack-pair:cyclic:3"]))
    assert result.exit_code == EXIT_CHECK_FAILED
    assert "11/12 relations hold" in result.output


# ------------------------------------------------------------------
# 3.  Invariants and tables

def test_invariant_of_unknot(capsys):
    code = main(["invariant", "--builtin", EISERMANN_S3, "--diagram", "diagram:unknot-string", "--top", "(123)"])
    assert code == EXIT_OK
    assert capsys.readouterr().out == "source: (123)\ntarget: (123)\n1\tid\n\n"


def test_invariant_needs_top(capsys):
    assert main(["invariant", "--builtin", EISERMANN_S3, "--diagram", "diagram:unknot-string"]) == EXIT_USAGE


def test_invariant_output_file(tmp_path):
    target = tmp_path / "unknot.tsv"
    result = run(parse_args(["invariant", "--builtin", EISERMANN_S3, "--diagram", "diagram:unknot-string",
                             "--top", "(12)", "--bottom", "(12)", "--output", str(target)]))
    assert result.exit_code == EXIT_OK
    assert result.output == f"✅ Wrote 1 result(s) to {target}"
    assert target.read_text(encoding="utf-8") == "source: (12)\ntarget: (12)\n1\tid\n"


def test_invariant_from_diagram_file(tmp_path):
    path = tmp_path / "strand.tng"
    path.write_text("top: v\nid+\nid+\n", encoding="utf-8")
    result = run(parse_args(["invariant", "--builtin", EISERMANN_S3, "--diagram", str(path), "--top", "id"]))
    assert result.exit_code == EXIT_OK
    assert result.output.startswith("source: id\ntarget: id\n")


def test_rack_count(capsys):
    assert main(["rack-count", "--builtin", "rack:dihedral:3", "--diagram", "closed:trefoil+"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "9"
    assert main(["rack-count", "--builtin", "rack:dihedral:3", "--diagram", "diagram:trefoil+string",
                 "--top", "0"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "3"


def test_tables_verb(mocker, capsys):
    """The tables verb renders whatever the registry returns."""
    G = symmetric_group(3)
    table = TrefoilTable("stub", ["id"], {"K+": [ga_from_counts(G, {"id": 2})]})
    factory = mocker.Mock(return_value=table)
    mocker.patch.dict("xmodlink_main.TABLES", {"eisermann-s5": factory})
    assert main(["tables", "--which", "eisermann-s5", "--seed", "3"]) == EXIT_OK
    assert capsys.readouterr().out == "stub\nx\tid\nK+\t2*id\n"
    config = factory.call_args[0][0]
    assert config.random_seed == 3


# ------------------------------------------------------------------
# 4.  Workers

def test_invariant_tsv_is_independent_of_workers(tmp_path):
    written = []
    for workers in ("1", "8"):
        target = tmp_path / f"trefoil-{workers}.tsv"
        result = run(parse_args(["invariant", "--builtin", "eisermann:S4:x=(1234)", "--diagram",
                                 "diagram:trefoil+string", "--top", "id", "--workers", workers,
                                 "--output", str(target)]))
        assert result.exit_code == EXIT_OK
        written.append(target.read_bytes())
    assert written[0]
    assert written[0] == written[1]


@pytest.mark.slow
def test_tables_output_is_independent_of_workers(capsys):
    """The S5 table prints the same bytes with one worker and with eight."""
    printed = []
    for workers in ("1", "8"):
        assert main(["tables", "--which", "eisermann-s5", "--workers", workers]) == EXIT_OK
        printed.append(capsys.readouterr().out.encode("utf-8"))
    assert printed[0].startswith(b"Eisermann invariant of the trefoils, G = S5\n")
    assert printed[0] == printed[1]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
