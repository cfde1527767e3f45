#!/usr/bin/env python3
"""Smoke test for the stablegen_py extension module.

Builds the cdylib with cargo, loads it, and exercises the bindings on a
handful of tiny instances. Run from anywhere:

    python3 python/smoke_test.py
"""

import shutil
import subprocess
import sys
import sysconfig
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_module(tmp: Path) -> None:
    subprocess.run(
        ["cargo", "build", "-p", "stablegen-py"], cwd=ROOT, check=True
    )
    built = ROOT / "target" / "debug" / "libstablegen_py.so"
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    shutil.copy(built, tmp / f"stablegen_py{suffix}")


def main() -> None:
    with tempfile.TemporaryDirectory() as tmpdir:
        tmp = Path(tmpdir)
        build_module(tmp)
        sys.path.insert(0, str(tmp))
        import stablegen_py as sg

        # the 2x2 instance with no stable matching
        inst = sg.SmgInstance.counterexample_2x2()
        assert inst.n() == 2
        assert inst.is_asymmetric()
        verdict, matching, rounds, proposals = inst.solve_da()
        assert verdict == "no-stable-matching", verdict
        assert matching is None
        assert proposals <= inst.n() ** 2
        assert inst.solve_lp() is None
        assert inst.enumerate() == []
        stable, blocking = inst.is_stable([0, 1])
        assert not stable and blocking == [(1, 0)], blocking

        # round trip through the text format
        again = sg.SmgInstance.from_text(inst.to_text())
        assert again.solve_da()[0] == "no-stable-matching"

        # a solvable instance: second man prefers the second woman
        ok = sg.SmgInstance([[0, 1], [1, 0]], [[], []])
        verdict, matching, _, _ = ok.solve_da()
        assert verdict == "stable-matching-found"
        assert matching == [0, 1]
        assert ok.solve_lp() == [0, 1]
        assert ok.enumerate() == [[0, 1]]

        # dualizing twice is the identity on the decision
        assert inst.dualize().dualize().enumerate() == inst.enumerate()

        # smti: one tie, reduction preserves the answer
        smti = sg.SmtiInstance(
            [[[0], [1]], [[1], [0]]],
            [[[0, 1]], [[0], [1]]],
        )
        direct = smti.enumerate()
        reduced = smti.reduce()
        assert reduced.n() == 3
        assert (len(direct) > 0) == (len(reduced.enumerate()) > 0)
        stable, _ = smti.is_weakly_stable([(0, 0), (1, 1)])
        assert stable

        # seeded generators are deterministic and agree across solvers
        for seed in range(20):
            g = sg.gen_smg(4, seed, asymmetric=True)
            by_oracle = g.enumerate()
            verdict, matching, _, _ = g.solve_da()
            assert (verdict == "stable-matching-found") == (len(by_oracle) > 0)
            if matching is not None:
                assert g.is_stable(matching)[0]
            via_lp = g.solve_lp()
            assert (via_lp is not None) == (len(by_oracle) > 0)
        assert sg.gen_smti(3, 1).to_text() == sg.gen_smti(3, 1).to_text()

    print("smoke test passed")


if __name__ == "__main__":
    main()
