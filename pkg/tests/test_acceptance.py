"""Acceptance criteria, one test each, with a pass/fail line and timing.

Run with ``pytest -v tests/test_acceptance.py``; the summary lines are printed
in an "acceptance criteria" section at the end of the session.
"""
import json
import random
import shutil
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import pytest

from conftest import ACCEPTANCE_LINES
from hopfgraph.canon import canonical_key
from hopfgraph.checks import (
    contraction_duality,
    four_point_defects,
    insertion_count_laws,
    regular_cograph_closure,
    regular_gluing_exists,
)
from hopfgraph.dsl import load_graphs, parse_graph_source, to_dsl
from hopfgraph.fixtures import BUBBLE, CHAIN, FIXTURES, SUNSET_N, TADPOLE_P, TADPOLE_X
from hopfgraph.hopf import HopfAlgebra
from hopfgraph.renorm import LaurentSeries, Renormalizer, forest_formula, ms_project, rota_baxter_defect
from hopfgraph.ribbon import is_planar_regular, topology

GRAPHS = Path(__file__).resolve().parents[1] / "graphs"


@contextmanager
def criterion(number, budget, detail):
    """Time the block; record PASS only if it finished without error inside ``budget`` seconds."""
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield detail
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        if status == "PASS" and elapsed > budget:
            status = "FAIL"
        text = "; ".join(f"{k}={v}" for k, v in detail.items())
        line = f"criterion {number}: {status} ({text}; {elapsed:.2f}s of {budget}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert elapsed <= budget, line


def test_criterion_1_fixture_topology():
    with criterion(1, 1, {}) as d:
        got = {name: topology(g) for name, g in
               [("tadpole_p", TADPOLE_P), ("sunset_n", SUNSET_N), ("tadpole_x", TADPOLE_X)]}
        d.update({k: f"g{t.g}/B{t.B}" for k, t in got.items()})
        assert (got["tadpole_p"].g, got["tadpole_p"].B) == (0, 1)
        assert got["sunset_n"].g == 1
        assert (got["tadpole_x"].g, got["tadpole_x"].B) == (0, 2)


def test_criterion_2_counting(ribbon_corpus):
    with criterion(2, 1, {}) as d:
        off = [g.name for g in ribbon_corpus if 4 * g.V != 2 * g.I + g.E]
        stats = {}
        bad = insertion_count_laws(list(FIXTURES.values()), stats=stats)
        d.update(corpus=len(ribbon_corpus), insertions=stats["insertions"], failures=len(off) + len(bad))
        assert not off and not bad, (off, bad[:5])


def test_criterion_3_hopf_axioms(ribbon_corpus):
    with criterion(3, 60, {}) as d:
        for theory in ("phi4", "gw", "core"):
            A = HopfAlgebra(theory)
            keys = {}
            for g in ribbon_corpus:
                keys.setdefault(A.key(g), g)
            failures = []
            for g in keys.values():
                if not (A.check_coassociativity(g)[0] and A.check_counit(g) and A.check_antipode_axiom(g)
                        and A.check_antipode_sides(g) and A.check_grading(g)):
                    failures.append(g.name)
            d[theory] = f"{len(keys)} generators/{len(failures)} failures"
            assert not failures, (theory, failures)


def test_criterion_4_regular_closure(ribbon_corpus):
    with criterion(4, 60, {}) as d:
        s1, s2, s3 = {}, {}, {}
        closure = regular_cograph_closure(ribbon_corpus, stats=s1)
        exists = regular_gluing_exists(list(FIXTURES.values()), stats=s2)
        defects = four_point_defects(ribbon_corpus, ribbon_corpus, stats=s3)
        # the same law restricted two ways, to locate where it breaks
        regular_hosts = [g for g in ribbon_corpus if is_planar_regular(g)]
        on_regular = four_point_defects(regular_hosts, ribbon_corpus)
        respecting = four_point_defects(ribbon_corpus, ribbon_corpus, order_respecting_only=True)
        d.update(
            closure=f"{s1['cographs']} cographs/{len(closure)} failures",
            gluing_exists=f"{s2['pairs']} pairs/{len(exists)} failures",
            four_point=f"{s3['gluings']} gluings/{len(defects)} failures",
            regular_hosts_only=f"{len(on_regular)} failures",
            order_respecting_only=f"{len(respecting)} failures",
        )
        if defects:
            d["first"] = defects[0]
        assert not closure and not exists
        assert not on_regular and not respecting
        assert not defects, f"{len(defects)} gluings break B0 >= B1, e.g. {defects[0]}"


def test_criterion_5_renormalization(ribbon_corpus):
    with criterion(5, 60, {}) as d:
        R = Renormalizer()
        assert R.renormalize(BUBBLE) == 1 and R.renormalize(CHAIN) == 1
        for theory in ("phi4", "gw", "core"):
            Rt = Renormalizer(theory=theory)
            keys = {}
            for g in ribbon_corpus:
                keys.setdefault(Rt.key(g), g)
            bad = [g.name for g in keys.values()
                   if (p := Rt.renormalize(g)).has_poles() or ms_project(p) or p != forest_formula(g, theory=theory)]
            d[theory] = f"{len(keys)} graphs/{len(bad)} failures"
            assert not bad, (theory, bad)
        rng = random.Random(2024)
        keys = sorted({R.key(g) for g in ribbon_corpus})
        bad = 0
        for _ in range(100):
            a, b = rng.choice(keys), rng.choice(keys)
            if R.minus_direct(tuple(sorted((a, b)))) != R.twisted_antipode(a) * R.twisted_antipode(b):
                bad += 1
        d["multiplicativity"] = f"100 pairs/{bad} failures"
        assert not bad


def _random_series(rng):
    return LaurentSeries({e: Fraction(rng.randint(-9, 9), rng.randint(1, 9))
                          for e in rng.sample(range(-4, 5), rng.randint(0, 6))})


def test_criterion_6_rota_baxter():
    with criterion(6, 5, {}) as d:
        rng = random.Random(6)
        bad = 0
        for _ in range(1000):
            a, b = _random_series(rng), _random_series(rng)
            if rota_baxter_defect(ms_project, a, b) or ms_project(ms_project(a)) != ms_project(a):
                bad += 1
        d.update(pairs=1000, failures=bad)
        assert not bad


def test_criterion_7_duality(plain_corpus8, ribbon_corpus):
    with criterion(7, 120, {}) as d:
        s1, s2 = {}, {}
        plain = contraction_duality(plain_corpus8, stats=s1)
        ribbon = contraction_duality(ribbon_corpus, ribbon=True, max_edges=6, stats=s2)
        d.update(plain=f"{len(plain_corpus8)} graphs, {s1['forward']}+{s1['backward']} cases/{len(plain)} failures",
                 ribbon=f"{len(ribbon_corpus)} graphs, {s2['forward']}+{s2['backward']} cases/{len(ribbon)} failures")
        assert not plain and not ribbon, (plain[:3], ribbon[:3])


def _cli(*args):
    exe = shutil.which("hopfgraph")
    cmd = [exe] if exe else [sys.executable, "-m", "hopfgraph.cli"]
    proc = subprocess.run(cmd + [str(a) for a in args], capture_output=True, text=True)
    return proc.returncode, proc.stdout


def test_criterion_8_cli():
    with criterion(8, 60, {}) as d:
        corpus = load_graphs(GRAPHS / "corpus.g")
        unstable = [g.name for g in corpus
                    if canonical_key(parse_graph_source(to_dsl(g, canonical=True))[0]) != canonical_key(g)]
        assert not unstable
        goldens = [
            (("classify", GRAPHS / "tadpole_p.g"), {"V": 1, "I": 1, "E": 2, "F": 2, "B": 1, "g": 0}),
            (("renormalize", GRAPHS / "chain.g"), {"0": "1"}),
        ]
        for args, want in goldens:
            first, second = _cli(*args), _cli(*args)
            assert first == second and first[0] == 0
            assert json.loads(first[1]) == want
        code, out = _cli("check", GRAPHS / "corpus.g", "--axioms")
        assert code == 0 and (code, out) == _cli("check", GRAPHS / "corpus.g", "--axioms")
        d.update(round_trip=f"{len(corpus)} graphs", goldens=3, deterministic=True)
