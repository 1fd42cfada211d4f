import io
import json
import subprocess
import sys

import pytest

from epoche.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, EXIT_PARSE, parse_q, run, ConfigError


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_norm_text():
    code, out, _ = call("norm", "h[1] h[2]")
    assert code == EXIT_OK
    assert out.strip() == "q[1,2]^-1 * h[2] h[1] + h[1,2]"


def test_norm_vanishing_term_warns():
    code, out, err = call("norm", "h[1,1]")
    assert code == EXIT_OK and out.strip() == "0"
    assert "warning" in err


def test_star_json_shape():
    code, out, _ = call("star", "h[1]", "h[2]", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["header"] == {"command": "star", "d": 1, "N": 3, "q": "symbolic"}
    assert data["result"]["algebra"] == "shadow"
    assert data["result"]["text"] == "q[1,2]^-1 * h[2] h[1] + (q[1,2]^2)/(1 + q[1,2]^2) * h[1,2]"


def test_specialized_bracket():
    code, out, _ = call("bracket", "h[1]", "h[2]", "--q", "q[1,2]=2")
    assert (code, out.strip()) == (EXIT_OK, "4/5 * h[1,2]")
    code, out, _ = call("bracket", "h[1]", "h[2]", "--q", "all-ones")
    assert out.strip() == "1/2 * h[1,2]"


def test_quantize_dequantize_roundtrip():
    _, out, _ = call("quantize", "h[1,2] h[2]")
    assert out.strip() == "h[1,2] h[2] + (q[1,2])/(1 + q[1,2]^2) * h[2,[1,2]]"
    _, back, _ = call("dequantize", out.strip())
    assert back.strip() == "h[1,2] h[2]"


def test_tree_commands():
    assert call("rank", "[1,2]")[1].split() == ["4", "[1,2]"]
    assert call("unrank", "4")[1].split() == ["4", "[1,2]"]
    _, out, _ = call("enum-trees", "--N", "3")
    assert [line.split("\t")[1] for line in out.strip().splitlines()] == \
        ["1", "2", "[1,2]", "[1,[1,2]]", "[2,[1,2]]"]
    _, out, _ = call("enum-trees", "--leaves", "4", "--shapes")
    assert len(out.split()) == 5
    assert "digraph" in call("rank", "[1,2]", "--dot")[1]


def test_coeff_command_all_ones():
    _, out, _ = call("coeff", "2", "1", "--q", "all-ones")
    assert out.strip().splitlines() == ["C(1 2) = 1/2", "C(2 1) = 1/2"]


@pytest.mark.parametrize("argv", [("norm", "h[1 h[2]"), ("norm", "h[5]"), ("rank", "[1,"), ("norm",)])
def test_parse_errors_exit_2(argv):
    assert call(*argv)[0] == EXIT_PARSE


@pytest.mark.parametrize("argv", [("norm", "h[1]", "--d", "0"), ("norm", "h[1]", "--q", "q[1,2]=0"),
                                  ("norm", "h[1]", "--q", "q[1,3]=2"), ("norm", "h[1]", "--format", "xml"),
                                  ("verify", "nope"), ("norm", "h[1]", "--config", "/nonexistent.json")])
def test_config_errors_exit_3(argv):
    assert call(*argv)[0] == EXIT_CONFIG


def test_parse_q_needs_every_pair():
    assert parse_q("symbolic", 2) is None
    spec = parse_q("q[1,2]=2, q[1,3]=1/2,q[1,4]=3,q[2,3]=5,q[2,4]=2,q[3,4]=7", 2)
    assert spec.value(3, 4) == 7
    with pytest.raises(ConfigError):
        parse_q("q[1,2]=2", 2)


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"d": 2, "N": 2, "format": "json"}))
    _, out, _ = call("norm", "h[1] h[3]", "--config", str(cfg), "--N", "1")
    header = json.loads(out)["header"]
    assert (header["d"], header["N"]) == (2, 1)
    cfg.write_text(json.dumps({"bogus": 1}))
    assert call("norm", "h[1]", "--config", str(cfg))[0] == EXIT_CONFIG


def test_verify_pass_and_reproducible():
    a = call("verify", "q-poisson", "--d", "1", "--N", "3", "--trials", "30", "--seed", "7", "--format", "json")
    b = call("verify", "q-poisson", "--d", "1", "--N", "3", "--trials", "30", "--seed", "7", "--format", "json")
    assert a[0] == EXIT_OK
    assert a[1] == b[1]
    rep = json.loads(a[1])
    assert rep["header"]["seed"] == 7 and rep["pass"] is True
    assert {"property", "n", "instance", "mode", "pass"} <= set(rep["properties"][0])


def test_verify_failure_exit_1():
    code, out, _ = call("verify", "star-oracle", "--d", "1", "--N", "2", "--trials", "10")
    assert code == EXIT_FAIL
    assert "counterexample" in out


def test_verify_weyl_all_ones_has_symmetrization_check():
    code, out, _ = call("verify", "weyl", "--q", "all-ones", "--trials", "20")
    assert code == EXIT_OK
    assert "1/n!" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "epoche", "norm", "h[2] h[1]"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "h[2] h[1]"
