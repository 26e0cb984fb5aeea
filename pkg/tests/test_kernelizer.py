import random

import pytest

from mwckernel.checks import mwc_corpus, run_kernel_check
from mwckernel.graph import Graph, MwcInstance, generate_lowerbound, generate_random
from mwckernel.kernelizer import (
    UNKNOWN,
    ExactProvider,
    GreedyProvider,
    PipelineError,
    greedy_mwc,
    kernelize,
    min_isolating_cut,
    solve_exact,
    squeeze_terminals,
)
from mwckernel.oracle import (
    OracleBudget,
    bruteforce_opt_within,
    enum_mwc_cuts,
    is_multiway_cut,
)


def path3(k=1):
    return MwcInstance(Graph(3, [(0, 1), (1, 2)]), frozenset({0, 2}), k)


def star(k, leaves=4):
    edges = [(0, i) for i in range(1, leaves + 1)]
    return MwcInstance(Graph(leaves + 1, edges), frozenset(range(1, leaves + 1)), k)


def test_min_isolating_cut_path():
    sep = min_isolating_cut(path3(), 0)
    assert sep.vertices == {1}


def test_min_isolating_cut_star():
    inst = MwcInstance(Graph(4, [(0, 1), (0, 2), (0, 3)]), frozenset({1, 2, 3}), 1)
    for t in inst.terminals:
        assert min_isolating_cut(inst, t).vertices == {0}


@pytest.mark.parametrize("r,x", [(1, 1), (2, 1), (3, 2)])
def test_min_isolating_cut_tree_gadget(r, x):
    si = generate_lowerbound(r, x)
    inst = MwcInstance(si.graph, si.sources | si.sinks, 0)
    for t in inst.terminals:
        assert len(min_isolating_cut(inst, t).vertices) == r


def test_min_isolating_cut_validates_terminal():
    with pytest.raises(ValueError):
        min_isolating_cut(path3(), 1)


def test_solve_exact_path():
    assert solve_exact(path3(), 1) == {1}
    assert solve_exact(path3(), 0) is None


def test_solve_exact_infeasible():
    inst = MwcInstance(Graph(2, [(0, 1)]), frozenset({0, 1}), 5)
    assert solve_exact(inst, 5) is None


def test_solve_exact_single_terminal_is_trivial():
    inst = MwcInstance(Graph(3, [(0, 1), (1, 2)]), frozenset({0}), 0)
    assert solve_exact(inst, 0) == frozenset()


def test_greedy_examples():
    assert greedy_mwc(path3()) == {1}
    inst = MwcInstance(Graph(4, [(0, 1), (0, 2), (0, 3)]), frozenset({1, 2, 3}), 1)
    assert greedy_mwc(inst) == {0}


def test_greedy_on_two_tree_gadget():
    si = generate_lowerbound(2, 1)
    inst = MwcInstance(si.graph, si.sources | si.sinks, 0)
    cut = greedy_mwc(inst)
    assert is_multiway_cut(inst.graph, inst.terminals, cut)
    assert len(cut) <= 4


def test_greedy_rejects_infeasible():
    inst = MwcInstance(Graph(2, [(0, 1)]), frozenset({0, 1}), 1)
    with pytest.raises(ValueError):
        greedy_mwc(inst)


def test_squeeze_leaves_small_terminal_sets_alone():
    result = squeeze_terminals(path3(), ExactProvider())
    assert result.verdict == "reduced"
    assert result.forced == frozenset()
    assert result.instance.graph.n == 3


def test_squeeze_forces_star_center():
    result = squeeze_terminals(star(k=1), ExactProvider())
    assert result.verdict == "yes"
    assert result.cut == {0}
    assert result.forced == {0}


def test_squeeze_star_without_budget_is_no():
    assert squeeze_terminals(star(k=0), ExactProvider()).verdict == "no"


def test_squeeze_unknown_provider_paths():
    # small terminal count: unknown is tolerated, instance passes through
    res = squeeze_terminals(path3(), lambda inst: UNKNOWN)
    assert res.verdict == "reduced"
    # big terminal count above the guaranteed threshold: pipeline error
    with pytest.raises(PipelineError):
        squeeze_terminals(star(k=1, leaves=7), lambda inst: UNKNOWN)


def test_squeeze_terminal_bound_holds_on_corpus():
    for inst in mwc_corpus(120, 16, seed=31338):
        res = squeeze_terminals(inst, ExactProvider())
        if res.verdict == "reduced":
            k2 = res.instance.k
            assert len(res.instance.terminals) <= 2 * k2 * (k2 + 1)
            assert k2 == inst.k - len(res.forced)


def test_kernelize_path_is_fixed_point():
    outcome = kernelize(path3())
    assert outcome.verdict == "reduced"
    res = outcome.result
    assert res.reduced.graph.n == 3
    assert res.k_reduced == 1
    assert res.forced == frozenset()
    assert res.per_terminal_r == {0: 1, 2: 1}


def test_kernelize_star_yes_with_certificate():
    outcome = kernelize(star(k=1))
    assert outcome.verdict == "yes"
    assert outcome.cut == {0}


def test_kernelize_star_no():
    assert kernelize(star(k=0)).verdict == "no"


def test_kernelize_adjacent_terminals_is_no():
    inst = MwcInstance(Graph(2, [(0, 1)]), frozenset({0, 1}), 3)
    assert kernelize(inst).verdict == "no"


def test_kernelize_parallel_matches_serial():
    si = generate_lowerbound(2, 2)
    inst = MwcInstance(si.graph, si.sources | si.sinks, 4)
    serial = kernelize(inst, jobs=1)
    parallel = kernelize(inst, jobs=2)
    assert serial.result.reduced.graph == parallel.result.reduced.graph
    assert serial.result.per_terminal_r == parallel.result.per_terminal_r
    assert serial.result.old_ids == parallel.result.old_ids


def test_kernelize_tree_gadget_size():
    si = generate_lowerbound(1, 2)
    inst = MwcInstance(si.graph, si.sources | si.sinks, 3)
    outcome = kernelize(inst)
    assert outcome.verdict == "reduced"
    res = outcome.result
    assert res.n_reduced == 9  # the whole gadget survives
    assert res.n_reduced <= res.size_bound
    assert res.r_min == 1


def test_kernelize_high_isolating_minimum_is_no():
    si = generate_lowerbound(3, 1)
    inst = MwcInstance(si.graph, si.sources | si.sinks, 2)  # r=3 > k=2
    assert kernelize(inst).verdict == "no"


def test_kernel_answers_match_solver_on_corpus():
    budget = OracleBudget(max_n=16)
    for inst in mwc_corpus(120, 16, seed=91001):
        chk = run_kernel_check(inst, budget)
        assert chk.passed, (inst.graph.n, inst.k, chk.details)


def test_kernelize_greedy_provider_agrees_on_answers():
    rng = random.Random(5150)
    for _ in range(60):
        n = rng.randint(5, 12)
        inst = generate_random(
            n, rng.choice([0.2, 0.35]), rng.randint(2, min(3, n)), rng.randrange(2**30), k=rng.randint(1, 3)
        )
        exact_out = kernelize(inst, ExactProvider())
        greedy_out = kernelize(inst, GreedyProvider())
        if not inst.feasible:
            assert greedy_out.verdict == "no"
            continue
        answer = solve_exact(inst, inst.k) is not None
        for out in (exact_out, greedy_out):
            if out.verdict == "yes":
                assert answer
            elif out.verdict == "no":
                assert not answer
            else:
                got = solve_exact(out.result.reduced, out.result.k_reduced)
                assert (got is not None) == answer


def _hub_instance(rng):
    # few hubs, many terminal leaves: the shape that triggers forcing
    hubs = rng.randint(1, 2)
    leaves = rng.randint(5, 8)
    extras = rng.randint(0, 2)
    edges = set()
    for i in range(leaves):
        edges.add((rng.randrange(hubs), hubs + i))
    for h in range(1, hubs):
        edges.add((0, h))
    for e in range(extras):
        x = hubs + leaves + e
        edges.add((rng.randrange(hubs), x))
        edges.add((hubs + rng.randrange(leaves), x))
    n = hubs + leaves + extras
    terminals = frozenset(range(hubs, hubs + leaves))
    return MwcInstance(Graph(n, edges), terminals, rng.randint(1, 2))


def test_forced_vertices_lie_in_every_small_cut():
    budget = OracleBudget(max_n=14)
    rng = random.Random(246810)
    count = 0
    for _ in range(60):
        inst = _hub_instance(rng)
        res = squeeze_terminals(inst, ExactProvider())
        forced = res.forced if res.verdict != "no" else frozenset()
        if not forced:
            continue
        count += 1
        for cut in enum_mwc_cuts(inst, inst.k, budget):
            assert forced <= cut
    assert count >= 10


def test_some_optimal_cut_lies_in_isolating_unions():
    # the vertex pool kept by the kernel (union over terminals of important
    # isolating cuts within budget) always contains at least one optimal cut
    from itertools import combinations

    from mwckernel.oracle import enum_important
    from mwckernel.graph import SeparatorInstance

    budget = OracleBudget(max_n=13)
    rng = random.Random(864213)
    exercised = 0
    for _ in range(120):
        n = rng.randint(5, 12)
        inst = generate_random(
            n, rng.choice([0.2, 0.3]), rng.randint(2, 3), rng.randrange(2**30), k=3
        )
        if not inst.feasible:
            continue
        opt = bruteforce_opt_within(inst, 3, budget)
        if opt is None or opt == 0:
            continue
        pool: set[int] = set(inst.terminals)
        degenerate = False
        for t in inst.terminals:
            si = SeparatorInstance(inst.graph, frozenset({t}), inst.terminals - {t})
            r_t = min_isolating_cut(inst, t).size
            if r_t == 0:
                degenerate = True
                break
            fam = enum_important(si, inst.k, budget)
            pool |= fam.union_up_to(inst.k - r_t)
        if degenerate:
            continue
        free = sorted(set(inst.graph.vertices) - inst.terminals)
        optimal_cuts = [
            frozenset(c)
            for c in combinations(free, opt)
            if is_multiway_cut(inst.graph, inst.terminals, frozenset(c))
        ]
        assert any(cut <= pool for cut in optimal_cuts), (
            f"no optimal cut inside the isolating-cut pool (n={n})"
        )
        exercised += 1
    assert exercised >= 20


def test_optimum_preserved_through_kernel():
    budget = OracleBudget(max_n=14)
    for inst in mwc_corpus(100, 13, seed=13579):
        opt = bruteforce_opt_within(inst, inst.k, budget)
        outcome = kernelize(inst)
        if outcome.verdict == "yes":
            assert opt is not None
        elif outcome.verdict == "no":
            assert opt is None or opt > inst.k
        else:
            res = outcome.result
            if opt is not None:
                kernel_opt = bruteforce_opt_within(res.reduced, res.k_reduced, budget)
                assert kernel_opt is not None
                assert kernel_opt + len(res.forced) == opt
