import json

import pytest

from structrsa.cli import main
from structrsa.keygen import key_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_attack_pq_desk(capsys):
    code, out, _ = run(capsys, "attack", "--shape", "pq", "--n", "551", "--rp", "3", "--rq", "4")
    assert code == 0
    assert "p = 19" in out and "q = 29" in out


def test_attack_binary_hints(capsys):
    code, out, _ = run(capsys, "attack", "--shape", "pq", "--n", "551",
                       "--rp", "0b11", "--rq", "0b100", "--json")
    assert code == 0
    assert json.loads(out)["p"] == "19"


def test_attack_exhausted_exit_code(capsys):
    code, _, _ = run(capsys, "attack", "--shape", "pq", "--n", "551", "--rp", "1", "--rq", "1")
    assert code == 3


def test_attack_budget_exit_code(capsys):
    code, out, _ = run(capsys, "attack", "--shape", "pq", "--n", "551", "--rp", "3",
                       "--rq", "4", "--budget", "2", "--json")
    assert code == 2
    assert json.loads(out)["status"] == "precondition_violated"


def test_attack_s_sweep(capsys):
    code, out, _ = run(capsys, "attack", "--shape", "psq", "--n", "2075", "--rp", "1",
                       "--rq", "2", "--s-sweep", "2..6", "--json")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 1
    rec = json.loads(lines[0])
    assert rec["s"] == 2 and (rec["p"], rec["q"]) == ("5", "83")


def test_attack_s_sweep_finds_larger_s(capsys, tmp_path):
    path = tmp_path / "k.json"
    assert main(["keygen", "--shape", "psq", "--s", "4", "--prime-bits", "48",
                 "--r-bits", "4", "--seed", "3", "--out", str(path)]) == 0
    key = key_from_json(path.read_text())
    capsys.readouterr()
    code, out, _ = run(capsys, "attack", "--shape", "psq", "--n", str(key.n),
                       "--rp", str(key.prime_p.r), "--rq", str(key.prime_q.r),
                       "--s-sweep", "1..8", "--json")
    rec = json.loads(out)
    assert code == 0 and rec["s"] == 4 and rec["p"] == str(key.p)


def test_attack_json_record_fields(capsys):
    code, out, _ = run(capsys, "attack", "--shape", "pslqs", "--s", "3", "--l", "1",
                       "--n", "395307", "--rp", "3", "--rq", "1", "--json")
    rec = json.loads(out)
    assert code == 0
    for field in ("status", "p", "q", "k_hit", "iterations", "window_lo", "window_hi",
                  "elapsed_ns"):
        assert field in rec
    assert (rec["p"], rec["q"], rec["window_lo"], rec["window_hi"]) == ("11", "3", "195", "235")


@pytest.mark.parametrize("argv", [
    ["attack", "--shape", "pq", "--n", "55x", "--rp", "1", "--rq", "1"],
    ["attack", "--shape", "pq", "--n", "551", "--rp", "0", "--rq", "1"],
    ["attack", "--shape", "pq", "--n", "551"],
    ["attack", "--shape", "psq", "--n", "2075", "--rp", "1", "--rq", "2"],
    ["attack", "--shape", "pq", "--n", "551", "--rp", "3", "--rq", "4", "--budget", "0"],
    ["keygen", "--shape", "pslqs", "--s", "3", "--l", "2", "--prime-bits", "64", "--out", "x"],
    ["keygen", "--shape", "pq", "--prime-bits", "8", "--out", "x"],
    ["oracle", "fermat", "--n", "550"],
    ["nosuch"],
])
def test_usage_errors_exit_4(capsys, argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(main(argv))
    assert exc.value.code == 4


def test_keygen_round_trip(capsys, tmp_path):
    path = tmp_path / "k.json"
    code, out, _ = run(capsys, "keygen", "--shape", "pq", "--prime-bits", "256",
                       "--r-bits", "12", "--seed", "7", "--out", str(path))
    assert code == 0
    key = key_from_json(path.read_text())
    assert f"n  = {key.n}" in out
    assert key.e == 65537 and key.e * key.d % key.phi() == 1
    code, out, _ = run(capsys, "attack", "--key", str(path), "--json")
    rec = json.loads(out)
    assert code == 0 and (rec["p"], rec["q"]) == (str(key.p), str(key.q))


def test_keygen_seed_repeat_is_byte_identical(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        assert main(["keygen", "--shape", "pslqs", "--s", "5", "--l", "2",
                     "--prime-bits", "120", "--r-bits", "5", "--seed", "9",
                     "--out", str(path)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_keygen_infeasible_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "keygen", "--shape", "pq", "--prime-bits", "16",
                       "--m2", "18", "--out", str(tmp_path / "k.json"))
    assert code == 2 and "infeasible" in err


def test_keygen_fixed_binary_residues(tmp_path):
    path = tmp_path / "k.json"
    assert main(["keygen", "--shape", "pq", "--prime-bits", "128", "--rp", "0b11100",
                 "--rq", "0b1000010100", "--out", str(path), "--no-exponents"]) == 0
    obj = json.loads(path.read_text())
    assert (obj["rp"], obj["rq"]) == ("28", "532") and "e" not in obj


@pytest.mark.parametrize("argv, code, text", [
    (["oracle", "trial", "--n", "395307", "--bound", "1000"], 0, "3^3 * 11^4"),
    (["oracle", "fermat", "--n", "551"], 0, "19 * 29"),
    (["oracle", "trial", "--n", "4", "--bound", "1"], 3, "incomplete"),
    (["oracle", "fermat", "--n", "3000009", "--steps", "3"], 3, "incomplete"),
])
def test_oracle_commands(capsys, argv, code, text):
    got, out, _ = run(capsys, *argv)
    assert got == code
    assert out.strip().startswith(text)


def test_bench_command_writes_csv(capsys, tmp_path):
    path = tmp_path / "b.csv"
    code, out, _ = run(capsys, "bench", "--shape", "pq", "--prime-bits", "64",
                       "--r-bits", "4..6", "--trials", "3", "--csv", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == ("shape,prime_bits,r_p_bits,r_q_bits,s,l,window_width,"
                        "iterations,elapsed_ns,success,seed")
    assert len(lines) == 1 + 9


def test_bench_l_range_without_l(capsys, tmp_path):
    path = tmp_path / "l.csv"
    code, out, _ = run(capsys, "bench", "--shape", "pslqs", "--s", "7", "--l-range", "1..3",
                       "--rp", "17", "--prime-bits", "160", "--r-bits", "4..4",
                       "--trials", "1", "--csv", str(path))
    assert code == 0
    assert [line.split(",")[5] for line in path.read_text().splitlines()[1:]] == ["1", "2", "3"]
