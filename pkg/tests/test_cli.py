import json
import subprocess
import sys

import pytest

from sidonkit import parse_set
from sidonkit.cli import main
from sidonkit.constructions import first_primes


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, values):
    path = tmp_path / name
    path.write_text("".join(f"{v}\n" for v in values))
    return str(path)


def payload(text):
    data = json.loads(text)
    data.pop("timing_s")
    data.pop("command")
    return data


def test_energy(tmp_path, capsys):
    f = write(tmp_path, "a.txt", [1, 2, 3, 4])
    code, out, _ = run(capsys, "energy", "--set", f, "--s", "2", "--k", "2", "--mode", "add")
    assert code == 0
    data = json.loads(out)
    assert data["value"] == "44" and data["op"] == "energy"
    code, out, _ = run(capsys, "energy", "--set", f, "--s", "3", "--k", "1")
    assert json.loads(out)["value"] == str(4**3)
    code, out, _ = run(capsys, "energy", "--set", f, "--s", "2", "--k", "2", "--mode", "mul", "--csv")
    header, row = out.strip().splitlines()
    assert header.split(",")[0] == "op" and "32" in row.split(",")


def test_numbers_are_strings(tmp_path, capsys):
    f = write(tmp_path, "a.txt", [1, 2, 3, 4, 5])
    _, out, _ = run(capsys, "verify", "--set", f, "--h", "2")
    data = json.loads(out)

    def walk(v, key=""):
        if isinstance(v, dict):
            for k, x in v.items():
                walk(x, k)
        elif isinstance(v, list):
            for x in v:
                walk(x, key)
        else:
            assert not isinstance(v, (int, float)) or isinstance(v, bool), key

    walk(data)


def test_input_errors(tmp_path, capsys):
    code, _, err = run(capsys, "energy", "--set", str(tmp_path / "missing.txt"), "--s", "2", "--k", "2")
    assert code == 2 and err
    bad = tmp_path / "bad.txt"
    bad.write_text("1\nx\n")
    code, _, err = run(capsys, "energy", "--set", str(bad), "--s", "2", "--k", "2")
    assert code == 2 and "line 2" in err
    z = write(tmp_path, "z.txt", [0, 1])
    code, _, _ = run(capsys, "energy", "--set", z, "--s", "2", "--k", "2", "--mode", "mul")
    assert code == 2


def test_verify(tmp_path, capsys):
    primes = write(tmp_path, "p.txt", first_primes(15))
    code, out, _ = run(capsys, "verify", "--set", primes, "--h", "2", "--g", "1", "--mode", "mul")
    assert code == 0 and json.loads(out)["verdict"] is True
    interval = write(tmp_path, "i.txt", [1, 2, 3, 4, 5])
    _, out, _ = run(capsys, "verify", "--set", interval, "--h", "2", "--g", "1")
    data = json.loads(out)
    assert data["verdict"] is False
    assert data["witness"] == "6" and data["g_measured"] == "3"
    empty = write(tmp_path, "e.txt", [])
    _, out, _ = run(capsys, "verify", "--set", empty, "--h", "2")
    assert json.loads(out)["verdict"] is True


def test_extract(tmp_path, capsys):
    sidon = write(tmp_path, "s.txt", [1, 2, 4, 8, 16])
    code, out, _ = run(capsys, "extract", "--set", sidon, "--h", "2", "--p", "1")
    assert code == 0
    assert json.loads(out)["subset"] == ["1", "2", "4", "8", "16"]

    import random
    rng = random.Random(3)
    big = write(tmp_path, "b.txt", rng.sample(range(1, 10**6), 50))
    outs, files = [], []
    for i in range(2):
        dest = tmp_path / f"out{i}.txt"
        code, out, _ = run(capsys, "extract", "--set", big, "--h", "2", "--seed", "17", "--out", str(dest))
        assert code == 0
        outs.append(payload(out))
        files.append(dest.read_bytes())
    assert outs[0] == outs[1]
    assert files[0] == files[1]
    data = outs[0]
    assert int(data["g_measured"]) <= 1 and data["seed_schedule"] == ["17"]

    code, _, _ = run(capsys, "extract", "--set", big, "--h", "2", "--p", "3/2")
    assert code == 4
    code, _, _ = run(capsys, "extract", "--set", big, "--h", "2", "--seed", "-1")
    assert code == 4


def test_pipeline(tmp_path, capsys):
    primes = write(tmp_path, "p.txt", first_primes(30))
    code, out, _ = run(capsys, "pipeline", "--set", primes, "--h", "2")
    data = json.loads(out)
    assert code == 0
    assert data["side"] == "multiplicative" and data["size"] == "30" and data["exponent"] == 1.0
    powers = write(tmp_path, "q.txt", [1 << j for j in range(1, 21)])
    _, out, _ = run(capsys, "pipeline", "--set", powers, "--h", "2")
    data = json.loads(out)
    assert data["side"] == "additive" and data["size"] == "20"
    one = write(tmp_path, "o.txt", [7])
    _, out, _ = run(capsys, "pipeline", "--set", one, "--h", "2")
    data = json.loads(out)
    assert data["size"] == "1" and data["exponent"] == 0.0
    _, again, _ = run(capsys, "pipeline", "--set", primes, "--h", "2", "--seed", "4")
    _, again2, _ = run(capsys, "pipeline", "--set", primes, "--h", "2", "--seed", "4")
    assert payload(again) == payload(again2)


def test_construct(tmp_path, capsys):
    prefix = str(tmp_path / "bw")
    code, out, err = run(capsys, "construct", "--family", "balog_wooley", "--out", prefix, "M=2", "N=2")
    assert code == 0
    text = (tmp_path / "bw_A.txt").read_text()
    assert parse_set(text)[0].elements == (6, 10, 12, 20)
    assert text.endswith("6\n10\n12\n20\n")
    code, out, err = run(capsys, "construct", "--family", "prime_product", "2", "3")
    assert code == 0 and "|A| = 6" in err
    assert "A=6" in json.loads(out)["sizes"]
    code, _, _ = run(capsys, "construct", "--family", "incidence_lb_one", "N=3", "M=5")
    assert code == 4
    code, _, _ = run(capsys, "construct", "--family", "power_sumset", "1")
    assert code == 4
    code, out, _ = run(capsys, "construct", "--family", "incidence_lb_two", "--out", prefix, "3", "2")
    assert code == 0 and json.loads(out)["lambda"] == "4"


def test_incidence(tmp_path, capsys):
    x = write(tmp_path, "x.txt", [0, 1])
    code, out, _ = run(capsys, "incidence", "--x", x, "--y", x, "--lambda", "1")
    data = json.loads(out)
    assert code == 0 and data["H"] == "2" and data["in_regime"] is False
    xs = write(tmp_path, "xr.txt", ["1/2", "3", "-2/3", "5/4", "7"])
    ys = write(tmp_path, "yr.txt", ["1", "-1/2", "2"])
    code, out, _ = run(capsys, "incidence", "--x", xs, "--y", ys, "--lambda", "1/2", "--brute")
    data = json.loads(out)
    assert code == 0 and data["match"] == "match" and data["H"] == data["H_brute"]
    code, _, _ = run(capsys, "incidence", "--x", x, "--y", x, "--lambda", "0")
    assert code == 4


def test_capacity_exit(tmp_path, capsys, monkeypatch):
    f = write(tmp_path, "a.txt", range(1, 40))
    monkeypatch.setenv("SIDON_BUDGET", "100")
    code, _, err = run(capsys, "verify", "--set", f, "--h", "3")
    assert code == 3 and "capacity" in err


def test_module_entry_point(tmp_path):
    f = write(tmp_path, "a.txt", [1, 2, 3, 4])
    proc = subprocess.run(
        [sys.executable, "-m", "sidonkit", "energy", "--set", f, "--s", "2", "--k", "2"],
        capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["value"] == "44"
