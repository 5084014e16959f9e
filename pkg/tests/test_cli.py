import json
import subprocess
import sys

import pytest

from aflkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err


def test_orb_rank1(capsys):
    code, out, _ = run(capsys, "orb", "--q", "3", "--rank1-split", "--M", "2")
    assert code == 0
    assert out == '{"poly":{"0":"1","-1":"-1","-2":"1"},"value0":"1"}'


def test_dorb_rank1(capsys):
    code, out, _ = run(capsys, "dorb", "--q", "3", "--rank1-split", "--M", "3")
    assert code == 0
    assert out == '{"deriv0":{"real":0,"logs":{"3":"-2"}}}'


def test_brute_matches_split(capsys):
    _, a, _ = run(capsys, "orb", "--q", "5", "--rank1-brute", "--vu1", "2", "--vu2", "3", "--vc", "1")
    _, b, _ = run(capsys, "orb", "--q", "5", "--rank1-split", "--M", "4")
    assert a == b


def test_deterministic(capsys):
    outs = {run(capsys, "orb", "--q", "3", "--n", "2", "--seed", "4")[1] for _ in range(2)}
    assert len(outs) == 1
    doc = json.loads(outs.pop())
    assert doc["side"] in (1, -1)


def test_datum_on_command_line(capsys):
    datum = json.dumps({"gamma": [["1"]], "u1": ["3"], "u2": ["9"]})
    code, out, _ = run(capsys, "orb", "--q", "3", "--datum", datum)
    assert code == 0
    assert json.loads(out)["value0"] == "0"
    code, out, _ = run(capsys, "match", "--q", "3", "--datum", datum)
    assert json.loads(out)["side"] == -1


def test_weil_check(capsys):
    code, out, _ = run(capsys, "weil-check", "--q", "3", "--d", "1", "--e", "1")
    assert json.loads(out)["invariant"] is True
    code, out, _ = run(capsys, "weil-check", "--q", "3", "--phi", "0,1")
    assert json.loads(out)["invariant"] is False


def test_green_csv(capsys):
    code, out, _ = run(capsys, "green", "--kind", "ei", "--x=-1,-2", "--csv")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3
    assert lines[1].split(",")[1].startswith("-0.21938393")


def test_diff_and_cm(capsys):
    _, out, _ = run(capsys, "diff", "--random", "200", "--seed", "1")
    assert json.loads(out)["all_odd"] is True
    _, out, _ = run(capsys, "cm-check")
    assert json.loads(out)["all_ok"] is True


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    doc = json.loads(out)
    assert code == 0 and doc["failed"] == 0


def test_report_wrapper(capsys):
    _, out, _ = run(capsys, "--report", "cm-check", "--q", "3", "--v", "1")
    doc = json.loads(out)
    assert doc["status"] == "ok" and doc["outputs"]["all_ok"] is True


@pytest.mark.parametrize(
    "argv,code",
    [
        (["cm-check", "--v", "2"], 2),
        (["orb-arch", "--zeta", "0"], 2),
        (["orb", "--q", "6", "--rank1-split"], 2),
        (["orb", "--q", "3", "--method", "box", "--box", "0", "--datum", '{"gamma": [["1"]], "u1": ["1"], "u2": ["27"]}'], 3),
        (["nosuch"], 2),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "aflkit.cli", "cm-check", "--q", "9", "--v", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["rows"][0]["factor"] == "1"
