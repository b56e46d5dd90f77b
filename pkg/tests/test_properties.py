"""Cross-cutting invariants exercised on seeded random module samples."""

import numpy as np
import pytest

from redhom.algebra import RingSpec, build_monomial_quotient
from redhom.catalog import catalog_ring, sample_modules
from redhom.complexes import minimal_free_resolution, resolution_of
from redhom.modules import (
    ModuleRep,
    direct_sum,
    free_module,
    is_isomorphic,
    projective_cover_and_syzygy,
    simple_module,
    split_free_summands,
    transpose_module,
)
from redhom.reducing import ext1_elements, middle_term, pd_is_finite


@pytest.fixture(scope="module")
def R1():
    return catalog_ring("R1", 5)


@pytest.fixture(scope="module")
def R1q2():
    return catalog_ring("R1", 2)


@pytest.fixture(scope="module")
def R3():
    return catalog_ring("R3", 5)


def test_syzygy_additive_on_random_samples(R1, R3):
    for alg in (R1, R3):
        mods = [m for _, m in sample_modules(alg, count=4, max_dim=6, seed=42)]
        for a in mods[:2]:
            for b in mods[2:]:
                both = projective_cover_and_syzygy(direct_sum([a, b])).syzygy
                separate = direct_sum([projective_cover_and_syzygy(a).syzygy,
                                       projective_cover_and_syzygy(b).syzygy])
                verdict = is_isomorphic(both, separate, samples=256)
                assert verdict.kind == "yes", (a.dim, b.dim, verdict.certificate)


def test_betti_invariant_under_basis_change(R1, R3):
    rng = np.random.default_rng(5)
    for alg in (R1, R3):
        for _, mod in sample_modules(alg, count=3, max_dim=6, seed=7):
            d = mod.dim
            # conjugate the actions by a random invertible matrix
            while True:
                g = rng.integers(0, alg.p, size=(d, d), dtype=np.int64)
                from redhom.gf import rank, solve
                if rank(g, alg.p) == d:
                    break
            ginv = solve(g, np.eye(d, dtype=np.int64), alg.p)
            acts = [(g @ mod.action_arr(j) @ ginv) % alg.p
                    for j in range(alg.num_gens)]
            twisted = ModuleRep(alg, acts)
            _, b1 = minimal_free_resolution(mod, 4)
            _, b2 = minimal_free_resolution(twisted, 4)
            assert b1 == b2


def test_stable_double_transpose_on_samples(R1, R3):
    for alg in (R1, R3):
        for name, mod in sample_modules(alg, count=5, max_dim=6, seed=3):
            core = split_free_summands(mod).core
            tt = split_free_summands(transpose_module(transpose_module(mod))).core
            verdict = is_isomorphic(tt, core, samples=256)
            assert verdict.kind == "yes", (name, verdict.certificate)


def test_dimension_filter_soundness_gf2(R1q2):
    # branches pruned by the divisibility filter can never contain a free
    # middle: verified here by exhausting those branches on GF(2)-R1
    k = simple_module(R1q2)
    res = resolution_of(k)
    for n in (0, 2):  # middle dims 2 and 5, neither divisible by dim 3
        syz = k if n == 0 else res.syzygy_module(n)
        assert (k.dim + syz.dim) % R1q2.dim != 0
        space = ext1_elements(syz, k, cap=300_000)
        assert space.exhaustive
        for element in space.elements():
            middle, _ = middle_term(element)
            assert not pd_is_finite(middle)


def test_scalar_orbit_middles_isomorphic(R1):
    k = simple_module(R1)
    space = ext1_elements(k, k)
    rng = np.random.default_rng(0)
    for _ in range(4):
        coeffs = tuple(int(c) for c in rng.integers(0, 5, size=space.dim))
        if not any(coeffs):
            continue
        base, _ = middle_term(space.element(coeffs))
        for unit in (2, 3, 4):
            scaled, _ = middle_term(space.element(
                tuple((unit * c) % 5 for c in coeffs)))
            assert is_isomorphic(base, scaled).kind == "yes"


def test_split_element_gives_direct_sum_on_samples(R1, R3):
    for alg in (R1, R3):
        mods = [m for _, m in sample_modules(alg, count=3, max_dim=4, seed=99)]
        for a in mods:
            for c in mods:
                space = ext1_elements(c, a, cap=10_000)
                zero = space.element((0,) * space.dim)
                middle, _ = middle_term(zero)
                verdict = is_isomorphic(middle, direct_sum([a, c]), samples=256)
                assert verdict.kind == "yes"


def test_ext1_dimension_against_resolution_path(R1, R3):
    # the hom-space quotient defining the extension enumeration must agree
    # with the delta-rank computation of Ext^1 on the resolution side
    from redhom.complexes import ext_dims
    for alg in (R1, R3):
        mods = [m for _, m in sample_modules(alg, count=4, max_dim=5, seed=17)]
        for c in mods:
            for a in mods:
                space = ext1_elements(c, a, cap=10)
                table = ext_dims(c, a, 1)
                assert space.dim == table.dims[1], (c.dim, a.dim)


def test_window_verify_free_and_module_paths_agree(R3):
    from redhom.torsionfree import build_window_sequence, verify_window_sequence
    k = simple_module(R3)
    for m, n in ((0, 1), (1, 1), (2, 0)):
        build = build_window_sequence(k, m, n)
        free_verdict = verify_window_sequence(build.complex, m, n, "(4)")
        module_verdict = verify_window_sequence(
            build.complex.to_module_complex(), m, n, "(4)")
        assert free_verdict.ok == module_verdict.ok == True
        assert free_verdict.primal_defects == module_verdict.primal_defects


def test_matrix_rejects_composite_modulus():
    from redhom.gf import Matrix
    with pytest.raises(ValueError):
        Matrix(6, [[1]])


def test_transpose_of_free_is_zero_on_catalog(R1, R3):
    for alg in (R1, R3):
        for r in (0, 1, 2):
            assert transpose_module(free_module(alg, r)).dim == 0


def test_gorenstein_line_family():
    # is_gorenstein holds along k[x]/(x^e) and the engine's Ext agrees
    for e in range(2, 7):
        alg = build_monomial_quotient(RingSpec(
            "monomial_quotient", 5, variables=["x"], ideal=[f"x^{e}"]))
        assert alg.is_gorenstein
        from redhom.complexes import ext_dims, ring_module
        dims = ext_dims(simple_module(alg), ring_module(alg), 4).dims
        assert dims == (1, 0, 0, 0, 0)
