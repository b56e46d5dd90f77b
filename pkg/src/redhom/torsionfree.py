"""Torsionfree classification and bi-exact window sequences.

A module M is n-torsionfree when Ext^j(tr M, Lambda) = 0 for 1 <= j <= n,
and (m, n)-torsionfree when additionally Ext^i(M, Lambda) = 0 for
i <= m.  The central equivalence implemented here: M is
(m, n)-torsionfree exactly when it is the image of the middle map in an
exact sequence of projectives

    P_{m+1} -> ... -> P_0 -> P_{-1} -> ... -> P_{-n}

whose dual is also exact.  The builder splices a minimal resolution
with the classical pushforward (the dual of a resolution of the
transpose); the verifier checks any candidate sequence and classifies
the image independently.

Infinite vanishing is never claimed: every verdict carries the bound it
was certified to.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf
from .complexes import (
    FreeComplex,
    MinimalResolution,
    ModuleComplex,
    apply_dual,
    ext_dims,
    ext_ring_dim,
    resolution_of,
    ring_module,
)
from .modules import (
    ModuleError,
    ModuleMap,
    ModuleRep,
    cover_matrix,
    free_module,
    hom_space,
    is_isomorphic,
    lambda_from_linear,
    minimal_presentation,
    quotient_module,
    split_free_summands,
    submodule_from_rows,
    transpose_module,
)


class TorsionfreeError(ValueError):
    """Precondition failure; carries the first failing Ext index and side."""

    def __init__(self, message, side=None, index=None):
        super().__init__(message)
        self.side = side
        self.index = index


@dataclass
class TorsionfreeVerdict:
    m_max: int
    n_max: int
    bound: int
    totally_reflexive_up_to_bound: bool
    ext_self: tuple[int, ...]
    ext_transpose: tuple[int, ...]

    def member(self, m: int, n: int) -> bool:
        return m <= self.m_max and n <= self.n_max

    def to_jsonable(self) -> dict:
        return {"m_max": self.m_max, "n_max": self.n_max, "bound": self.bound,
                "totally_reflexive_up_to_bound": self.totally_reflexive_up_to_bound,
                "ext_self": list(self.ext_self),
                "ext_transpose": list(self.ext_transpose)}


def _leading_zeros(dims: tuple[int, ...]) -> int:
    """Largest m with dims[1..m] all zero."""
    m = 0
    for i in range(1, len(dims)):
        if dims[i]:
            break
        m = i
    return m


def torsionfree_classify(mod: ModuleRep, bound: int) -> TorsionfreeVerdict:
    """Largest certified m and n with Ext vanishing up to the bound."""
    if bound < 1:
        raise ModuleError("classification bound must be at least 1")
    ring = ring_module(mod.algebra)
    ext_self = ext_dims(mod, ring, bound).dims
    tr = transpose_module(mod)
    ext_tr = ext_dims(tr, ring, bound).dims
    m_max = _leading_zeros(ext_self)
    n_max = _leading_zeros(ext_tr)
    return TorsionfreeVerdict(m_max, n_max, bound,
                              m_max == bound and n_max == bound,
                              ext_self, ext_tr)


def is_totally_reflexive_up_to(mod: ModuleRep, bound: int) -> bool:
    """Early-exit total reflexivity test (both Ext sides vanish to the bound)."""
    for i in range(1, bound + 1):
        if ext_ring_dim(mod, i):
            return False
    tr = transpose_module(mod)
    for j in range(1, bound + 1):
        if ext_ring_dim(tr, j):
            return False
    return True


# -- pushforward -------------------------------------------------------------

@dataclass
class PushforwardResult:
    complex: ModuleComplex               # 0 -> M -> F_{-1} -> ... -> F_{-n}
    n: int
    ext_transpose: tuple[int, ...]       # Ext^j(tr core, Lambda) for j = 1..n
    primal_defects: dict[int, int]
    exact_while: int                     # largest j with positions 0..-(j-1) exact
    dual_defects: dict[int, int] | None
    core_rank: int                       # split-off free rank of M
    identification: str                  # how coker(dual map) was matched with M

    def to_jsonable(self) -> dict:
        out = {"n": self.n,
               "ext_transpose": list(self.ext_transpose),
               "primal_defects": {str(k): v for k, v in self.primal_defects.items()},
               "exact_while": self.exact_while,
               "core_free_rank": self.core_rank,
               "identification": self.identification}
        if self.dual_defects is not None:
            out["dual_defects"] = {str(k): v for k, v in self.dual_defects.items()}
        return out


def _transpose_resolution(core: ModuleRep) -> tuple[MinimalResolution, np.ndarray, str]:
    """Seeded resolution of tr(core) plus the map core -> coker(dual d1).

    The presentation P1 -> P0 of the core dualizes to a minimal
    presentation of the transpose, and dualizing back identifies the
    cokernel with the core itself: both are quotients of P0 by the same
    subspace, so the comparison is a concrete invertible matrix.
    """
    A = core.algebra
    pres = minimal_presentation(core)
    res_t = MinimalResolution.from_presentation(A, pres.relations.transpose())
    lin = pres.relations.to_linear()
    rows, piv = gf.row_basis(lin.T, A.p)
    free0 = free_module(A, pres.p0_rank)
    quot, _, embed = quotient_module(free0, rows, piv)
    q_to_core = gf.mat_mul(pres.cover.mat.a, embed, A.p)
    if quot.dim == core.dim and gf.rank(q_to_core, A.p) == core.dim:
        core_to_q = gf.solve(q_to_core, np.eye(core.dim, dtype=np.int64), A.p)
        ident = "canonical quotient comparison"
    else:
        verdict = is_isomorphic(quot, core)
        if verdict.kind != "yes":
            raise ModuleError("cannot identify the double dual cokernel with the module")
        core_to_q = gf.solve(verdict.witness.mat.a, np.eye(core.dim, dtype=np.int64), A.p)
        ident = "isomorphism search fallback"
    coker_map = gf.mat_mul(embed, core_to_q, A.p)   # core -> P0 lift of the iso
    return res_t, coker_map, ident


def pushforward(mod: ModuleRep, n: int, *, dual_check: bool = True) -> PushforwardResult:
    """Embed M into a length-n window of frees, exact while Ext^j(tr M) vanishes.

    The sequence is the dual of a minimal resolution of the transpose of
    the free-summand-free core, padded with an identity splice on the
    free part.  Position -(j-1) is exact iff Ext^j(tr M, Lambda) = 0;
    the dual sequence is exact unconditionally (and is checked when
    dual_check is set).
    """
    if n < 1:
        raise ModuleError("pushforward length must be at least 1")
    A = mod.algebra
    p = A.p
    split = split_free_summands(mod)
    core, r = split.core, split.free_rank
    core_part = split.iso.mat.a[:core.dim, :]
    free_part = split.iso.mat.a[core.dim:, :]

    if core.dim == 0:
        g = [0] * (n + 2)
        res_t = None
        ident = "no core (free module)"
        ext_tr = tuple([0] * n)
    else:
        res_t, core_lift, ident = _transpose_resolution(core)
        res_t.extend(n + 1)
        g = res_t.betti[:n + 2]
        D = A.dim
        ext_tr = tuple(res_t.betti[j] * D - res_t.dual_rank(j + 1) - res_t.dual_rank(j)
                       for j in range(1, n + 1))

    modules = {0: mod}
    maps = {}
    ranks = []
    for j in range(1, n + 1):
        gj = g[j + 1] if res_t is not None else 0
        rank_j = gj + (r if j == 1 else 0)
        ranks.append(rank_j)
        modules[-j] = free_module(A, rank_j)
    # M -> F_{-1}: through the transpose-resolution dual on the core,
    # identity on the split-off free part
    D = A.dim
    f1 = modules[-1]
    top = np.zeros((f1.dim, mod.dim), dtype=np.int64)
    if core.dim:
        delta2_dual = res_t.diff(2).transpose().to_linear()
        core_map = gf.mat_mul(delta2_dual, gf.mat_mul(core_lift, core_part, p), p)
        top[:core_map.shape[0], :] = core_map
    if r:
        top[f1.dim - r * D:, :] = free_part
    maps[0] = ModuleMap(mod, f1, top)
    for j in range(1, n):
        src, tgt = modules[-j], modules[-(j + 1)]
        mat = np.zeros((tgt.dim, src.dim), dtype=np.int64)
        if res_t is not None and g[j + 2] and g[j + 1]:
            dual_lin = res_t.diff(j + 2).transpose().to_linear()
            mat[:, :dual_lin.shape[1]] = dual_lin
        maps[-j] = ModuleMap(src, tgt, mat)
    comp = ModuleComplex(modules, maps, check=True)

    check_positions = [-(j - 1) for j in range(1, n + 1)]
    primal = comp.exactness_defects(check_positions)
    # defect at -(j-1) equals dim Ext^j(tr core, Lambda), down to the last term
    for j in range(1, n + 1):
        assert primal[-(j - 1)] == ext_tr[j - 1], \
            "pushforward defect disagrees with Ext of the transpose"
    exact_while = 0
    for j in range(1, n + 1):
        pos = -(j - 1)
        if pos in primal and primal[pos] == 0:
            exact_while = j
        else:
            break
    dual_defects = None
    if dual_check:
        dual = apply_dual(comp)
        dual_defects = dual.exactness_defects(list(range(0, n)))
        assert all(v == 0 for v in dual_defects.values()), \
            "the dual of a pushforward must be exact"
    return PushforwardResult(comp, n, ext_tr, primal, exact_while,
                             dual_defects, r, ident)


# -- window sequences --------------------------------------------------------

@dataclass
class WindowBuild:
    complex: FreeComplex
    m: int
    n: int
    image_module: ModuleRep
    image_witness: ModuleMap | None      # M -> image of the middle map
    primal_defects: dict[int, int]
    dual_defects: dict[int, int]
    classification: TorsionfreeVerdict

    def to_jsonable(self) -> dict:
        return {"m": self.m, "n": self.n,
                "complex": self.complex.to_jsonable(),
                "image_dim": self.image_module.dim,
                "primal_defects": {str(k): v for k, v in self.primal_defects.items()},
                "dual_defects": {str(k): v for k, v in self.dual_defects.items()},
                "classification": self.classification.to_jsonable()}


def build_window_sequence(mod: ModuleRep, m: int, n: int) -> WindowBuild:
    """Construct the bi-exact window certifying (m, n)-torsionfreeness.

    Refused (with the failing Ext index) when the classification bound
    does not certify membership.  For n = 0 the right tail is empty and
    the image convention is the cokernel of the last left differential.
    """
    if m < 0 or n < 0:
        raise ModuleError("window degrees must be nonnegative")
    A = mod.algebra
    bound = max(m, n, 1)
    cls = torsionfree_classify(mod, bound)
    if cls.m_max < m:
        raise TorsionfreeError(
            f"module is not ({m},{n})-torsionfree: Ext^{cls.m_max + 1}(M, ring) != 0",
            side="self", index=cls.m_max + 1)
    if cls.n_max < n:
        raise TorsionfreeError(
            f"module is not ({m},{n})-torsionfree: "
            f"Ext^{cls.n_max + 1}(tr M, ring) != 0",
            side="transpose", index=cls.n_max + 1)
    res = resolution_of(mod)
    res.extend(m + 1)
    ranks = {i: res.betti[i] for i in range(m + 2)}
    diffs = {i: res.diff(i) for i in range(1, m + 2)}
    phi = cover_matrix(mod)
    if n == 0:
        comp = FreeComplex(A, ranks, diffs, check=True)
        lin1 = res.diff(1).to_linear()
        rows, piv = gf.row_basis(lin1.T, A.p)
        free0 = free_module(A, res.betti[0])
        quot, _, embed = quotient_module(free0, rows, piv)
        image_module = quot
        # canonical comparison: both are quotients of P_0 by the same kernel
        q_to_m = gf.mat_mul(phi, embed, A.p)
        m_to_q = gf.solve(q_to_m, np.eye(mod.dim, dtype=np.int64), A.p)
        assert m_to_q is not None and quot.dim == mod.dim
        image_witness = ModuleMap(mod, quot, m_to_q)
    else:
        pf = pushforward(mod, n, dual_check=False)
        for j in range(1, n + 1):
            ranks[-j] = pf.complex.modules[-j].free_rank
        partial = gf.mat_mul(pf.complex.maps[0].mat.a, phi, A.p)
        diffs[0] = lambda_from_linear(A, partial, ranks[-1], ranks[0])
        for j in range(1, n):
            diffs[-j] = lambda_from_linear(A, pf.complex.maps[-j].mat.a,
                                           ranks[-(j + 1)], ranks[-j])
        comp = FreeComplex(A, ranks, diffs, check=True)
        img_rows, img_piv = gf.row_basis(pf.complex.maps[0].mat.a.T, A.p)
        image_module, _ = submodule_from_rows(pf.complex.modules[-1], img_rows, img_piv)
        wit = pf.complex.maps[0].mat.a[list(img_piv), :]
        assert gf.rank(wit, A.p) == mod.dim, \
            "middle image must be isomorphic to the module"
        image_witness = ModuleMap(mod, image_module, wit)
    primal = comp.exactness_defects(list(range(comp.hi - 1, comp.lo, -1)))
    assert all(v == 0 for v in primal.values()), "window must be exact"
    dual = comp.dual()
    dual_positions = list(range(dual.hi - 1, dual.lo, -1))
    dual_defects = dual.exactness_defects(dual_positions)
    if n == 0:
        # exactness of the dual at P_0* needs the augmentation by the image
        hom_dim = hom_space(image_module, ring_module(A)).dim
        ker_dim = ranks[0] * A.dim - res.dual_rank(1)
        assert ker_dim == hom_dim, "dual of augmented window must be exact at P_0*"
    assert all(v == 0 for v in dual_defects.values()), "dual of window must be exact"
    return WindowBuild(comp, m, n, image_module, image_witness,
                       primal, dual_defects, cls)


@dataclass
class WindowVerdict:
    ok: bool
    m: int
    n: int
    mode: str
    primal_defects: dict[int, int]
    dual_defects: dict[int, int]
    membership_failures: list
    image_dim: int
    image_classification: TorsionfreeVerdict | None
    reasons: list = field(default_factory=list)

    def to_jsonable(self) -> dict:
        return {"ok": self.ok, "m": self.m, "n": self.n, "mode": self.mode,
                "primal_defects": {str(k): v for k, v in self.primal_defects.items()},
                "dual_defects": {str(k): v for k, v in self.dual_defects.items()},
                "membership_failures": self.membership_failures,
                "image_dim": self.image_dim,
                "image_classification":
                    self.image_classification.to_jsonable()
                    if self.image_classification else None,
                "reasons": self.reasons}


def _image_of_middle(comp: ModuleComplex, n: int):
    """Image of the middle map (or for n = 0 the cokernel convention)."""
    A = comp.algebra
    if n == 0:
        f = comp.maps.get(1)
        base = comp.modules[0]
        if f is None:
            rows = np.zeros((0, base.dim), dtype=np.int64)
            piv = ()
        else:
            rows, piv = gf.row_basis(f.mat.a.T, A.p)
        quot, _, _ = quotient_module(base, rows, piv)
        return quot
    f = comp.maps[0]
    rows, piv = gf.row_basis(f.mat.a.T, A.p)
    return submodule_from_rows(comp.modules[-1], rows, piv)[0]


def verify_window_sequence(comp: ModuleComplex | FreeComplex, m: int, n: int,
                           mode: str = "(4)") -> WindowVerdict:
    """Check a candidate window: exactness, dual exactness, memberships.

    mode "(3)" asks every term to be (m, n)-torsionfree; mode "(4)" asks
    the left terms (positions 0..m+1) for the Ext-vanishing side and the
    right terms (positions -n..-1) for the torsionfree side.  Free terms
    satisfy every membership and are skipped.  On success the image of
    the middle map is classified directly as a cross-check.
    """
    if mode not in ("(3)", "(4)"):
        raise ModuleError(f"unknown verification mode {mode!r}")
    lo_expect, hi_expect = -n, m + 1
    if comp.lo != lo_expect or comp.hi != hi_expect:
        raise ModuleError(
            f"sequence spans [{comp.lo}, {comp.hi}], expected [{lo_expect}, {hi_expect}]")
    carrier = comp.diffs if isinstance(comp, FreeComplex) else comp.maps
    missing = [i for i in range(comp.lo + 1, comp.hi + 1) if i not in carrier]
    if missing:
        raise ModuleError(f"sequence is missing differentials at positions {missing}")
    reasons = []
    is_free = isinstance(comp, FreeComplex)
    bound = max(m, n, 1)

    if is_free:
        primal = comp.exactness_defects(list(range(comp.hi - 1, comp.lo, -1)))
        dual = comp.dual()
        dual_defects = dual.exactness_defects(list(range(dual.hi - 1, dual.lo, -1)))
        mc = comp.to_module_complex()
    else:
        mc = comp
        primal = mc.exactness_defects(list(range(mc.hi - 1, mc.lo, -1)))
        dualized = apply_dual(mc)
        dual_defects = dualized.exactness_defects(
            list(range(dualized.hi - 1, dualized.lo, -1)))

    image = _image_of_middle(mc, n)
    if n == 0:
        # augmented dual exactness at P_0*
        hom_dim = hom_space(image, ring_module(mc.algebra)).dim
        f1 = mc.maps.get(1)
        out_rank = f1.mat.rank() if f1 is not None else 0
        ker_dim = mc.modules[0].dim - out_rank
        if is_free:
            dual_lin_rank = comp.diffs[1].transpose().linear_rank() if 1 in comp.diffs else 0
            ker_dual = mc.modules[0].dim - dual_lin_rank
        else:
            d = apply_dual(ModuleComplex({1: mc.modules[1], 0: mc.modules[0]},
                                         {1: mc.maps[1]} if 1 in mc.maps else {},
                                         check=False))
            ker_dual = d.modules[0].dim - (d.maps[0].mat.rank() if 0 in d.maps else 0)
        if ker_dual != hom_dim:
            dual_defects = dict(dual_defects)
            dual_defects[0] = ker_dual - hom_dim

    membership_failures = []
    if mode == "(3)":
        requirements = {i: (m, n) for i in range(comp.lo, comp.hi + 1)}
    else:
        requirements = {i: (m, 0) for i in range(0, comp.hi + 1)}
        requirements.update({i: (0, n) for i in range(comp.lo, 0)})
    for i, (need_m, need_n) in sorted(requirements.items(), reverse=True):
        term = mc.modules[i]
        if term.free_rank is not None or (need_m == 0 and need_n == 0):
            continue
        cls = torsionfree_classify(term, bound)
        if cls.m_max < need_m or cls.n_max < need_n:
            membership_failures.append(
                {"position": i, "required": [need_m, need_n],
                 "certified": [cls.m_max, cls.n_max]})

    ok = (all(v == 0 for v in primal.values())
          and all(v == 0 for v in dual_defects.values())
          and not membership_failures)
    if any(primal.values()):
        reasons.append("sequence is not exact")
    if any(dual_defects.values()):
        reasons.append("dual sequence is not exact")
    if membership_failures:
        reasons.append("a term fails its torsionfree membership")

    image_cls = None
    if ok:
        image_cls = torsionfree_classify(image, bound)
        assert image_cls.member(m, n), \
            "verified window must classify its image as (m, n)-torsionfree"
    return WindowVerdict(ok, m, n, mode, primal, dual_defects,
                         membership_failures, image.dim, image_cls, reasons)


# -- G-dimension -------------------------------------------------------------

@dataclass
class GdimReport:
    bound: int
    ext_self: tuple[int, ...]
    sup_including_hom: int
    sup_positive: int
    tail_zero: bool
    totally_reflexive: bool
    verdict: str

    def to_jsonable(self) -> dict:
        return {"bound": self.bound, "ext_self": list(self.ext_self),
                "sup_including_hom": self.sup_including_hom,
                "sup_positive": self.sup_positive,
                "tail_zero": self.tail_zero,
                "totally_reflexive": self.totally_reflexive,
                "verdict": self.verdict}


def gdim_report(mod: ModuleRep, bound: int) -> GdimReport:
    """G-dimension verdict over an artinian algebra, always bound-qualified.

    Finite G-dimension forces G-dimension zero here (depth is zero
    everywhere), so the verdict is either certified zero, a conditional
    value read off the last nonvanishing Ext, or infinite-up-to-bound.
    Both readings of sup{i : Ext^i != 0} (with and without i = 0) are
    reported.
    """
    if bound < 2:
        raise ModuleError("gdim bound must be at least 2")
    cls = torsionfree_classify(mod, bound)
    dims = cls.ext_self
    nonzero = [i for i, d in enumerate(dims) if d]
    sup_all = max(nonzero) if nonzero else 0
    positive = [i for i in nonzero if i >= 1]
    sup_pos = max(positive) if positive else 0
    # a vanishing tail is only certified when it is nonempty
    tail_zero = sup_pos < bound and all(d == 0 for d in dims[sup_pos + 1:])
    if cls.totally_reflexive_up_to_bound:
        verdict = "gdim = 0 (totally reflexive certified to bound)"
    elif positive and tail_zero:
        verdict = (f"gdim = {sup_pos} conditional on finite reducing "
                   f"Gorenstein dimension, up to bound")
    else:
        verdict = "infinite-up-to-bound"
    return GdimReport(bound, dims, sup_all, sup_pos, tail_zero,
                      cls.totally_reflexive_up_to_bound, verdict)
