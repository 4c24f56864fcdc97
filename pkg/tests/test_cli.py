from __future__ import annotations

import json

import pytest

from partialtheta.asymptotics import expansion_from_json
from partialtheta.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval(capsys):
    assert run(capsys, "eval", "--fn", "F", "--d", "1", "--ell", "2", "--z", "0", "--tau", "1")[1] == "0.0018674427317079893 0\n"
    code, out, _ = run(capsys, "eval", "--fn", "theta", "--z", "0", "--tau", "1", "--json")
    assert code == 0 and json.loads(out) == pytest.approx({"re": 0.9962651145609072, "im": 0.0})
    code, out, _ = run(capsys, "eval", "--fn", "G", "--d", "1", "--ell", "2", "--z", "0", "--tau", "1")
    assert out.split()[0].startswith("-0.00186744273170798")


def test_eval_eta_and_characters(capsys):
    code, out, _ = run(capsys, "eval", "--fn", "eta", "--tau", "1")
    assert float(out.split()[0]) == pytest.approx(0.768225422326056659, abs=1e-15)
    code, out, _ = run(
        capsys, "eval", "--fn", "charM", "--p", "3", "--module", "M:2,1", "--eps", "0.05", "--tau", "0.2"
    )
    assert float(out.split()[0]) == pytest.approx(-0.178174245152767807, abs=1e-12)
    code, _, err = run(capsys, "eval", "--fn", "charF", "--p", "3", "--module", "M:2,1", "--eps", "0.05", "--tau", "0.2")
    assert code == 3 and "charF" in err


def test_classify(capsys):
    assert run(capsys, "classify", "--ell", "1", "--z-exact", "1/10,-2/5")[1] == "LOWER_IN j=0 x0=1/10 y0=-2/5\n"
    assert run(capsys, "classify", "--ell", "1", "--z", "0.1-0.4i")[1] == "LOWER_IN j=0 x0=0.1 y0=-0.4\n"
    out = run(capsys, "classify", "--ell", "2", "--d", "1", "--z-exact", "1/2,0")[1]
    assert out.startswith("REAL_LATTICE ") and "j=1" in out


def test_expand_json(capsys):
    code, out, _ = run(capsys, "expand", "--fn", "G", "--d", "0", "--ell", "1", "--z-exact", "1/10,0", "--N", "1")
    data = json.loads(out)
    assert code == 0 and data["terms"] == [] and data["region"] == "REAL_NONLATTICE"
    code, out, _ = run(capsys, "expand", "--fn", "F", "--d", "1", "--ell", "2", "--z-exact", "0,0", "--N", "1")
    data = json.loads(out)
    assert data["terms"][0]["t_pow"] == "-1/2"
    assert data["terms"][0]["coeff_re"] == pytest.approx(2**-2.5)
    back = expansion_from_json(data)
    assert back.order == 1 and len(back.terms) == len(data["terms"])


def test_qdim(capsys):
    assert run(capsys, "qdim", "--p", "2", "--module", "M:1,1", "--eps-exact", "4,0,0")[1] == "1 (case vi-b)\n"
    code, out, _ = run(capsys, "qdim", "--p", "3", "--module", "M:2,2", "--eps-exact", "1,1/2,0", "--numeric")
    first, second = out.splitlines()
    assert first.endswith("(case ii)") and float(first.split()[0]) == pytest.approx(-1)
    assert second.startswith("numeric ") and float(second.split()[-1]) < 1e-6
    out = run(capsys, "qdim", "--p", "3", "--module", "M:1,1", "--eps-exact", "0,3/5,1/2")[1]
    assert out.endswith("(case iv)\n") and float(out.split()[0]) == pytest.approx(1)


def test_map_left_half_plane(capsys):
    code, out, _ = run(capsys, "map", "--p", "3", "--module", "M:2,1", "--grid", "-0.5", "-0.1", "-0.5", "0.5", "2", "2")
    rows = out.splitlines()
    assert rows[0] == "re,im,region,qdim_re,qdim_im,exists"
    assert len(rows) == 5 and all(r.split(",")[2] == "i" for r in rows[1:])


def test_map_straddles_a_boundary(capsys):
    code, out, _ = run(capsys, "map", "--p", "3", "--module", "M:2,1", "--grid", "-0.5", "0.5", "0.1", "0.1", "5", "1")
    labels = {r.split(",")[2] for r in out.splitlines()[1:]}
    assert len(labels - {"boundary"}) >= 2


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "singlet", "--seed", "1")
    assert code == 0 and all(json.loads(line)["pass"] for line in out.splitlines())
    code, out, _ = run(capsys, "verify", "--suite", "theta", "--perturb")
    assert code == 1


def test_exit_codes(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--fn", "F", "--ell", "1", "--d", "x", "--z", "0", "--tau", "1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--fn", "F", "--ell", "1", "--d", "0", "--z", "0", "--tau", "-1"])
    assert exc.value.code == 2
    assert run(capsys, "eval", "--fn", "F", "--ell", "0", "--d", "0", "--z", "0", "--tau", "1")[0] == 3
    assert run(capsys, "eval", "--fn", "F", "--ell", "1", "--d", "0", "--z", "0")[0] == 3
    assert run(capsys, "classify", "--ell", "1", "--z", "0.1+0.0000000000001i")[0] == 4
    assert run(capsys, "qdim", "--p", "3", "--module", "M:1,1", "--eps", "0+0.1i")[0] == 5
