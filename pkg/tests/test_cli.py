import csv
import subprocess
import sys

import pytest

from laxord.automata import load_dfa
from laxord.cli import main
from laxord.oracle import verify_stream

from conftest import data_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_partition_writes_parts(capsys, tmp_path):
    code, out, _ = run(capsys, "partition", "--dfa", data_path("a5.dfa"), "--out", str(tmp_path))
    assert code == 0
    assert out.splitlines()[:4] == ["t=2", "class 0: 1", "class 1: 2", "nonloopable: ε"]
    parts = sorted(p.name for p in tmp_path.iterdir())
    assert parts == ["a5.part0.dfa", "a5.part1.dfa"]
    assert load_dfa(str(tmp_path / "a5.part1.dfa")).size == 2


def test_partition_without_writing(capsys, tmp_path):
    code, out, _ = run(capsys, "partition", "--regex", "(a+b)*", "--no-write", "--out", str(tmp_path))
    assert code == 0 and out.startswith("t=1\n")
    assert not list(tmp_path.iterdir())


def test_enumerate_five_words(capsys):
    code, out, _ = run(capsys, "enumerate", "--dfa", data_path("a1.dfa"), "--max-words", "5")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 5
    rep = verify_stream(lines, load_dfa(data_path("a1.dfa")), 6)
    assert rep.ok and len(set(rep.words)) == 5


def test_enumerate_several_streams_prefixes_lines(capsys):
    code, out, _ = run(capsys, "enumerate", "--dfa", data_path("a5.dfa"), "--max-words", "6", "--verify")
    assert code == 0
    assert out.splitlines() == ["0\t", "1\t+r:b", "0\t+l:a", "1\t+l:b", "0\t+l:a", "1\t+l:b"]


def test_enumerate_stats_on_stderr(capsys):
    code, out, err = run(capsys, "enumerate", "--regex", "a*b*", "--max-words", "20", "--stats")
    assert code == 0 and len(out.splitlines()) == 20
    assert err.startswith("stream,index,work,gap\n")
    assert "stream,stratum,words,finished_at" in err


def test_enumerate_is_byte_identical_across_runs():
    cmd = [sys.executable, "-m", "laxord.cli", "enumerate", "--dfa", data_path("a2.dfa"), "--max-words", "300"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first.count(b"\n") == 300


def test_slender_commands(capsys):
    assert run(capsys, "slender", "--dfa", data_path("a2.dfa"))[1] == "slender=false\n"
    code, out, _ = run(capsys, "slender", "--regex", "a*+b*", "--threads", "--enumerate", "1", "--max-words", "3")
    assert code == 0
    assert out.splitlines() == [
        "slender=true",
        "t=2",
        "finite: ε",
        "thread 0: r=a s=a tails=ε",
        "thread 1: r=b s=b tails=ε",
        "+r:b",
        "+r:b",
        "+r:b",
    ]
    code, _, err = run(capsys, "slender", "--regex", "a*b*", "--threads")
    assert code == 1 and "not slender" in err


def test_check_accepts_and_rejects(capsys, tmp_path):
    good = tmp_path / "good.txt"
    good.write_text("\n+r:a\n+r:a\n")
    code, out, _ = run(capsys, "check", "--regex", "a*", "--scripts", str(good), "--bound", "1")
    assert code == 0 and out == "ok outputs=3 max_script=1\n"
    bad = tmp_path / "bad.txt"
    bad.write_text("\n+r:a\n-r\n")
    code, out, _ = run(capsys, "check", "--regex", "a*", "--scripts", str(bad), "--bound", "1")
    assert code == 1 and out.startswith("violation output=2 kind=repeat")
    garbled = tmp_path / "garbled.txt"
    garbled.write_text("+q:a\n")
    code, _, err = run(capsys, "check", "--regex", "a*", "--scripts", str(garbled), "--bound", "1")
    assert code == 1 and "garbled.txt:1" in err


def test_check_order(capsys, tmp_path):
    words = tmp_path / "w.txt"
    words.write_text("\n".join(["a" * n for n in range(4, 10)] + ["b" * n for n in range(4, 10)]) + "\n")
    assert run(capsys, "check-order", "--words", str(words), "--t", "1", "--d", "3")[1] == "orderable=false\n"
    assert run(capsys, "check-order", "--words", str(words), "--t", "2", "--d", "1")[1] == "orderable=true\n"


def test_bench_writes_csv_and_plot(capsys, tmp_path):
    table, figure = tmp_path / "b.csv", tmp_path / "b.png"
    code, out, _ = run(capsys, "bench", "--regex", "(a+b)*", "--outputs", "300",
                       "--csv", str(table), "--plot", str(figure))
    assert code == 0 and "underruns=0" in out
    with open(table, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 300 and list(rows[0]) == ["index", "work", "gap", "slack"]
    assert figure.read_bytes().startswith(b"\x89PNG")


def test_bench_plot_is_reproducible(capsys, tmp_path):
    paths = [tmp_path / "one.png", tmp_path / "two.png"]
    for p in paths:
        run(capsys, "bench", "--regex", "a*b*", "--outputs", "100", "--csv", str(tmp_path / "x.csv"), "--plot", str(p))
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_bench_csv_to_stdout(capsys):
    code, out, err = run(capsys, "bench", "--regex", "a*", "--outputs", "10")
    assert code == 0 and out.startswith("index,work,gap,slack\n")
    assert err.startswith("outputs=10 ")


@pytest.mark.parametrize(
    "argv",
    [
        ["enumerate"],
        ["nosuch"],
        ["enumerate", "--regex", "a*", "--mode", "bogus"],
        ["check-order", "--words", "w.txt"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["enumerate", "--dfa", "missing.dfa"],
        ["enumerate", "--regex", "(a"],
        ["enumerate", "--regex", "(a+b)*", "--ell", "1"],
        ["enumerate", "--regex", "a*+b*", "--part", "5"],
        ["slender", "--regex", "a*+b*", "--enumerate", "4"],
    ],
)
def test_domain_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and err.startswith("laxord: error: ")


def test_console_script_entry_point():
    proc = subprocess.run(["laxord", "partition", "--regex", "a*+b*", "--no-write"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("t=2")
