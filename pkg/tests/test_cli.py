import io
import subprocess
import sys

import pytest

from solace import solos
from solace.cli import main
from solace.din.fmt import parse_net
from solace.syntax import parse_solos

GOLDEN = "new x y z w.(u!<u x y> | u?<z w w> | v!<z u y>)"
PI_EXAMPLE = "(new x.(u!x.0 | x?y.0)) | u?z.(z!t.0)"
CYCLIC = "new u x y z y' z' a b c a' b' c'.(u!<x y z> | u?<x y' z'> | x!<a b c> | x?<a' b' c'>)"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = main(list(argv), out, err)
    return status, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    def make(name, text):
        p = tmp_path / name
        p.write_text(text + "\n")
        return str(p)
    return make


def test_reduce_golden(files):
    status, out, _ = run("reduce", "solos", files("g.solos", GOLDEN))
    assert status == 0
    (line,) = out.splitlines()
    assert solos.congruent(parse_solos(line), parse_solos("new y. v!<u u y>"))


def test_translate_then_acyclic(files):
    status, out, _ = run("translate", "pi-to-solos", files("ex.pi", PI_EXAMPLE))
    assert status == 0
    status, out, _ = run("acyclic", files("ex.solos", out))
    assert status == 0 and out.strip() == "acyclic"


def test_acyclic_failure(files):
    status, out, _ = run("acyclic", files("bad.solos", "new y:W v:V. x!<y y v>"), "--context", "x:V")
    assert status == 1 and "AC4" in out


def test_ac_member(files):
    status, out, _ = run("ac-member", files("r.solos", CYCLIC))
    assert status == 1 and "witness path: (e1,e0)" in out
    status, out, _ = run("ac-member", files("g.solos", GOLDEN))
    assert status == 0
    status, _, _ = run("ac-member", files("g2.solos", GOLDEN), "--budget", "0")
    assert status == 3


def test_parse_and_errors(files):
    status, out, _ = run("parse", "pi", files("p.pi", PI_EXAMPLE))
    assert status == 0 and "u?z." in out
    status, _, err = run("parse", "solos", files("bad.solos", "u!<a b"))
    assert status == 2 and "parse error" in err
    status, _, err = run("parse", "solos", "/nonexistent/file")
    assert status == 2
    assert run("frobnicate")[0] == 2
    assert run("--help")[0] == 0


def test_typecheck(files):
    f = files("g.solos", GOLDEN)
    status, out, _ = run("typecheck", f, "--infer", "--decorate")
    assert status == 0 and "context:" in out and "^R" in out
    status, out, err = run("typecheck", f)
    assert status == 1 and "typing error" in err
    status, out, _ = run("typecheck", files("c.solos", "new z:W. v?<z z v>"), "--context", "v:V")
    assert status == 0


def test_reduce_modes(files):
    f = files("ex.pi", PI_EXAMPLE)
    status, out, _ = run("reduce", "pi", f, "--all")
    assert status == 0 and out.splitlines()[-1] == "0"
    status, out, _ = run("reduce", "pi", f, "--trace")
    assert status == 0 and out.splitlines()[-1] == "-> 0"
    status, out, _ = run("reduce", "pi", f, "--all", "--budget", "1")
    assert status == 3
    status, out, _ = run("reduce", "diagram", files("g.solos", GOLDEN))
    assert status == 0 and "v!<u u" in out


def test_nets(files):
    status, net_text, _ = run("to-net", files("g.solos", GOLDEN))
    assert status == 0
    net = parse_net(net_text)
    assert net.validate() == []
    f = files("g.net", net_text.rstrip("\n"))
    status, out, _ = run("reduce", "net", f)
    assert status == 0 and "# reduct 0" in out
    status, out, _ = run("reduce", "net", f, "--trace", "--budget", "500")
    assert status == 0
    status, out, _ = run("dot", "net", f)
    assert status == 0 and out.startswith("graph")
    status, out, _ = run("dot", "diagram", files("g2.solos", GOLDEN))
    assert status == 0 and "fillcolor" in out
    status, out, _ = run("to-diagram", files("g3.solos", GOLDEN))
    assert status == 0 and out.count("edge") == 3


def test_bad_net(files):
    status, _, err = run("reduce", "net", files("bad.net", "cell 0 weak"))
    assert status == 2


def test_bisim(files):
    status, out, _ = run("bisim", files("ex.pi", PI_EXAMPLE), "--lang", "pi")
    assert status == 0 and "0 mismatches, 0 exhaustions" in out
    status, out, _ = run("bisim", files("r.solos", CYCLIC))
    assert status == 1 and "mismatch" in out


def test_toolbox():
    assert run("toolbox", "aggregate", "1", "1")[0] == 0
    status, out, _ = run("toolbox", "prefix", "2", "3")
    assert status == 0 and "ok" in out
    status, out, _ = run("toolbox", "forward", "-1")
    assert status == 0 and "2 summands" in out
    assert run("toolbox", "aggregate", "1")[0] == 2


def test_sample_is_seeded():
    a = run("--seed", "7", "sample", "pi", "--count", "3")[1]
    b = run("--seed", "7", "sample", "pi", "--count", "3")[1]
    c = run("--seed", "8", "sample", "pi", "--count", "3")[1]
    assert a == b and a != c
    status, out, _ = run("--seed", "3", "sample", "net")
    assert status == 0 and parse_net(out).validate() == []


def test_console_entry_point(files):
    f = files("g.solos", GOLDEN)
    proc = subprocess.run([sys.executable, "-m", "solace.cli", "reduce", "solos", f], capture_output=True, text=True)
    assert proc.returncode == 0 and "v!<u u" in proc.stdout
