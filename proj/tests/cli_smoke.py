"""Smoke tests for the hypb command line: exit codes, report shapes, determinism."""

import json
import os
import subprocess
import sys
import tempfile

HYPB, DATA = sys.argv[1], sys.argv[2]
failures = []


def run(*args, env=None):
    p = subprocess.run([HYPB, *args], capture_output=True, text=True, env=env)
    return p.returncode, p.stdout


def data(name):
    return os.path.join(DATA, name)


def check(name, cond):
    print(("ok   " if cond else "FAIL ") + name)
    if not cond:
        failures.append(name)


code, out = run("classify", "--polygon", data("triangle_2_3_7.json"))
check("classify triangle", code == 0 and json.loads(out) == {"verdict": "rigid", "reason": "triangle_tile"})

code, out = run("classify", "--polygon", data("pentagon_right_a.json"))
v = json.loads(out)
check("classify right pentagon", code == 0 and v["verdict"] == "flexible" and v["deformation_dim"] == 2)

code, out = run("realize", "--polygon", data("pentagon_right_a.json"), "--word", "1,1")
check("realize immediate repeat", code == 0 and json.loads(out) == {"result": "no", "reason": "immediate_repeat"})

code, out = run("realize", "--polygon", data("pentagon_right_a.json"), "--word", "1,3,1,3")
check("realize yes", code == 0 and json.loads(out)["result"] == "yes")

cmp_args = ["compare", "--p1", data("pentagon_third_a.json"), "--p2", data("pentagon_third_b.json"),
            "--samples", "20", "--len", "20", "--seed", "7"]
a, b = run(*cmp_args), run(*cmp_args)
check("compare deterministic", a[0] == 0 and a[1] == b[1])
env = dict(os.environ, HYPB_SEED="7")
c = run(*cmp_args[:-2], env=env)
check("seed from environment", c[1] == a[1])

code, out = run("polygon", "validate", "--polygon", "/nonexistent.json")
check("missing file", code == 1 and json.loads(out)["error"]["kind"] == "input")

with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
    f.write("{not json")
code, out = run("polygon", "area", "--polygon", f.name)
check("malformed json", code == 1 and "error" in json.loads(out))
os.unlink(f.name)

code, out = run("realize", "--polygon", data("pentagon_right_a.json"), "--word", "1,x")
check("bad word", code == 1)

code, out = run("cone", "bound", "--data", data("cover_octagon.json"))
bnd = json.loads(out)
check("cone bound", code == 0 and bnd["k"] == 1 and bnd["holds"] and abs(bnd["rhs"] - 32 / 3) < 1e-10)

code, out = run("cone", "orbifold-area", "--genus", "0", "--orders", "2,3,7")
check("orbifold area", code == 0 and json.loads(out)["area_over_pi"] == "1/21")

code, out = run("tile", "--polygon", data("pentagon_right_a.json"))
check("tile discrete", code == 0 and json.loads(out)["status"] == "discrete")

code, out = run("diagonals", "--polygon", data("pentagon_regular_right.json"), "--max-len", "2")
check("diagonals", code == 0 and len(json.loads(out)["words"]) > 0)

with tempfile.TemporaryDirectory() as d:
    svg = os.path.join(d, "t.svg")
    base = ["simulate", "--polygon", data("pentagon_right_a.json"), "--start", "0,0", "--dir", "0.4", "--bounces", "12"]
    plain = run(*base)
    drawn = run(*base, "--svg", svg)
    check("svg does not change json", plain == drawn and os.path.getsize(svg) > 0)
    with open(svg) as f:
        check("svg is svg", "<svg" in f.read())

sys.exit(1 if failures else 0)
