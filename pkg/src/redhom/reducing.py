"""Extension enumeration and bounded searches for reducing dimensions.

The reducing projective (resp. Gorenstein) dimension of M is the least
number s of short exact sequences

    0 -> M_{i-1}^{a_i} -> M_i -> syz^{n_i} M_{i-1}^{b_i} -> 0

starting at M_0 = M and ending at a module of finite projective (resp.
G-) dimension; the upper variant forces a_i = b_i = 1.  Over an
artinian local algebra "finite projective dimension" means free and
"finite G-dimension" means totally reflexive, so both terminal tests
are decidable, and each candidate sequence is classified by an element
of Ext^1, realized here as a pushout of the cover sequence of its
right-hand term.

Searches are breadth-first in the step count with a fixed candidate
order, so witnesses are minimal within the configured limits and
reproducible from the seed.  Nothing here ever asserts an infinite
reducing dimension: a failed search reports its limits and whether the
enumeration was exhaustive inside them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import gf
from .complexes import (
    ModuleComplex,
    bass_numbers,
    ext_dims,
    ext_ring_dim,
    resolution_of,
    ring_module,
)
from .modules import (
    ModuleMap,
    ModuleRep,
    direct_sum,
    direct_sum_with_maps,
    hom_space,
    is_isomorphic,
    projective_cover_and_syzygy,
    quotient_module,
    simple_module,
)
from .torsionfree import is_totally_reflexive_up_to


@dataclass
class SearchLimits:
    max_steps: int = 1
    n_max: int = 1
    ab_max: int = 1
    cap: int = 200_000
    seed: int = 0
    tr_bound: int = 3
    samples: int = 64
    threads: int = 1

    def to_jsonable(self) -> dict:
        return {"max_steps": self.max_steps, "n_max": self.n_max,
                "ab_max": self.ab_max, "cap": self.cap, "seed": self.seed,
                "tr_bound": self.tr_bound, "samples": self.samples,
                "threads": self.threads}


# -- Ext^1 enumeration -------------------------------------------------------

@dataclass
class ExtElement:
    space: "Ext1Space"
    coeffs: tuple[int, ...]
    rep: ModuleMap                  # syzygy(C) -> A, coset representative

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)


class Ext1Space:
    """Ext^1(C, A) = Hom(syz C, A) / restrictions of Hom(P_0, A).

    Keeps the cover of C fixed (it is cached on C), so elements rebuild
    deterministically from their coefficient tuples.
    """

    def __init__(self, source: ModuleRep, target: ModuleRep, cap: int):
        self.C = source
        self.A = target
        A = source.algebra
        self.cover = projective_cover_and_syzygy(source)
        self.hom_syz = hom_space(self.cover.syzygy, target)
        hom_free = hom_space(self.cover.free, target)
        incl = self.cover.inclusion.mat.a
        cols = [self.hom_syz.coords(gf.mat_mul(f.mat.a, incl, A.p))
                for f in hom_free.basis]
        restriction = np.array(cols, dtype=np.int64).T if cols else \
            np.zeros((self.hom_syz.dim, 0), dtype=np.int64)
        rows, piv = gf.row_basis(restriction.T, A.p)
        self._image_rows = rows
        self._image_pivots = piv
        self.coset_indices = tuple(c for c in range(self.hom_syz.dim)
                                   if c not in set(piv))
        self.dim = len(self.coset_indices)
        self.exhaustive = self._power_fits(A.p, self.dim, cap)
        self.count = A.p ** self.dim if self.exhaustive else None

    @staticmethod
    def _power_fits(p: int, e: int, cap: int) -> bool:
        size = 1
        for _ in range(e):
            size *= p
            if size > cap:
                return False
        return True

    def element(self, coeffs) -> ExtElement:
        coeffs = tuple(int(c) % self.C.algebra.p for c in coeffs)
        if len(coeffs) != self.dim:
            raise ValueError(f"expected {self.dim} coefficients, got {len(coeffs)}")
        total = np.zeros(self.hom_syz.dim, dtype=np.int64)
        for c, idx in zip(coeffs, self.coset_indices):
            total[idx] = c
        rep = self.hom_syz.from_coords(total)
        return ExtElement(self, coeffs, rep)

    def elements(self, *, scalar_orbits: bool = False, samples: int = 64,
                 seed: int = 0):
        """Deterministic enumeration: exhaustive when the space is small.

        With scalar_orbits the first nonzero coefficient is normalized
        to 1 (the middle terms of e and lambda*e are isomorphic).  The
        non-exhaustive fallback yields zero, the basis, pairwise basis
        sums and seeded random tuples.
        """
        p = self.C.algebra.p
        if self.exhaustive:
            for coeffs in itertools.product(range(p), repeat=self.dim):
                if scalar_orbits and p > 2:
                    first = next((c for c in coeffs if c), None)
                    if first is not None and first != 1:
                        continue
                yield self.element(coeffs)
            return
        yield self.element((0,) * self.dim)
        eye = np.eye(self.dim, dtype=np.int64)
        for i in range(self.dim):
            yield self.element(tuple(eye[i]))
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                yield self.element(tuple((eye[i] + eye[j]) % p))
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            yield self.element(tuple(rng.integers(0, p, size=self.dim, dtype=np.int64)))


def ext1_elements(source: ModuleRep, target: ModuleRep, cap: int = 200_000) -> Ext1Space:
    return Ext1Space(source, target, cap)


def middle_term(element: ExtElement):
    """Pushout middle module: 0 -> A -> N -> C -> 0 for the given class.

    N = (A + P_0) / graph(rep, -incl); the zero class gives the split
    extension.  The returned short complex is verified exact.
    """
    space = element.space
    A_mod, C = space.A, space.C
    alg = A_mod.algebra
    p = alg.p
    cov = space.cover
    ambient, injs, _ = direct_sum_with_maps([A_mod, cov.free])
    syz_dim = cov.syzygy.dim
    graph = np.vstack([element.rep.mat.a,
                       (-cov.inclusion.mat.a) % p])    # columns = graph vectors
    rows, piv = gf.row_basis(graph.T, p)
    assert rows.shape[0] == syz_dim, "graph of the extension class must be embedded"
    middle, proj, embed = quotient_module(ambient, rows, piv)
    left = ModuleMap(A_mod, middle,
                     gf.mat_mul(proj.mat.a, injs[0].mat.a, p))
    right = ModuleMap(middle, C,
                      gf.mat_mul(cov.cover.mat.a, embed[A_mod.dim:, :], p))
    seq = ModuleComplex({2: A_mod, 1: middle, 0: C}, {2: left, 1: right})
    defects = seq.exactness_defects([2, 1, 0])
    assert set(defects.values()) == {0}, "pushout must produce a short exact sequence"
    return middle, seq


# -- terminal tests ----------------------------------------------------------

def pd_is_finite(mod: ModuleRep) -> bool:
    """Over an artinian local algebra, finite projective dimension = free."""
    rows, _ = mod.radical_rows()
    gens = mod.dim - rows.shape[0]
    return gens * mod.algebra.dim == mod.dim


def gdim_is_finite(mod: ModuleRep, tr_bound: int) -> bool:
    """Finite G-dimension = totally reflexive, certified up to the bound."""
    return is_totally_reflexive_up_to(mod, tr_bound)


def _middle_dim_can_be_free(dim_a: int, dim_c: int, ring_dim: int) -> bool:
    return (dim_a + dim_c) % ring_dim == 0


def _quick_free_test(space: Ext1Space, element: ExtElement,
                     radical_rows: np.ndarray) -> bool:
    """Exact freeness test of the middle without building it.

    dim m*N = dim(m*(A + P_0) + graph) - dim graph, since the radical of
    a quotient is the image of the radical.
    """
    p = space.C.algebra.p
    graph_rows = np.hstack([element.rep.mat.a.T,
                            (-space.cover.inclusion.mat.a.T) % p])
    amb_dim = space.A.dim + space.cover.free.dim
    syz_dim = space.cover.syzygy.dim
    joint = gf.rank(np.vstack([radical_rows, graph_rows]), p)
    dim_n = amb_dim - syz_dim
    dim_mn = joint - syz_dim
    gens = dim_n - dim_mn
    return gens * space.C.algebra.dim == dim_n


# -- witnesses and search ----------------------------------------------------

@dataclass
class ReductionStep:
    n: int
    a: int
    b: int
    coeffs: tuple[int, ...]
    middle: ModuleRep

    def to_jsonable(self) -> dict:
        return {"n": self.n, "a": self.a, "b": self.b,
                "coeffs": list(self.coeffs),
                "middle": self.middle.to_jsonable()}


@dataclass
class ReductionWitness:
    mode: str                  # "red" or "ured"
    target: str                # "pd" or "gdim"
    steps: list[ReductionStep]
    terminal: ModuleRep
    terminal_verdict: str

    @property
    def depth(self) -> int:
        return len(self.steps)

    def to_jsonable(self) -> dict:
        return {"mode": self.mode, "target": self.target,
                "depth": self.depth,
                "steps": [s.to_jsonable() for s in self.steps],
                "terminal_dim": self.terminal.dim,
                "terminal_verdict": self.terminal_verdict}


@dataclass
class SearchResult:
    found: bool
    witness: ReductionWitness | None
    exhaustive: bool
    tested: int
    limits: SearchLimits
    mode: str
    target: str
    note: str = ""

    def to_jsonable(self) -> dict:
        return {"found": self.found,
                "witness": self.witness.to_jsonable() if self.witness else None,
                "exhaustive": self.exhaustive,
                "tested": self.tested,
                "limits": self.limits.to_jsonable(),
                "mode": self.mode, "target": self.target,
                "note": self.note or
                ("" if self.found else
                 f"no witness within {self.limits.max_steps} steps; limits are "
                 "search policy, not a mathematical bound")}


def _syzygy(mod: ModuleRep, n: int) -> ModuleRep:
    if n == 0:
        return mod
    return resolution_of(mod).syzygy_module(n)


def _fingerprint(mod: ModuleRep) -> tuple:
    """Isomorphism-invariant key: dims, radical series, Betti and Ext prefix."""
    if "fingerprint" not in mod._cache:
        betti = tuple(resolution_of(mod).betti_numbers(2))
        mod._cache["fingerprint"] = (mod.dim, tuple(mod.radical_series_dims()),
                                     betti, ext_ring_dim(mod, 1))
    return mod._cache["fingerprint"]


def _candidate_triples(mode: str, limits: SearchLimits):
    if mode == "ured":
        return [(n, 1, 1) for n in range(limits.n_max + 1)]
    return [(n, a, b)
            for n in range(limits.n_max + 1)
            for a in range(1, limits.ab_max + 1)
            for b in range(1, limits.ab_max + 1)]


def search_reducing(mod: ModuleRep, mode: str, target: str,
                    limits: SearchLimits | None = None) -> SearchResult:
    """Breadth-first bounded search for a reducing-dimension witness.

    Candidates at each level are ordered lexicographically in
    (n, a, b, extension coefficients); the first terminal middle found
    is returned, so the witness depth is minimal within the limits.
    Middles whose dimension rules out a free module are pruned for the
    pd target at the last level (an exact criterion, not a heuristic).
    """
    if mode not in ("red", "ured"):
        raise ValueError(f"unknown mode {mode!r}")
    if target not in ("pd", "gdim"):
        raise ValueError(f"unknown target {target!r}")
    limits = limits or SearchLimits()
    alg = mod.algebra

    def terminal(x: ModuleRep) -> bool:
        if target == "pd":
            return pd_is_finite(x)
        return gdim_is_finite(x, limits.tr_bound)

    def verdict_text(x: ModuleRep) -> str:
        if target == "pd":
            return f"free of rank {x.dim // alg.dim}"
        return f"totally reflexive up to bound {limits.tr_bound}"

    if terminal(mod):
        witness = ReductionWitness(mode, target, [], mod, verdict_text(mod))
        return SearchResult(True, witness, True, 0, limits, mode, target,
                            note="module already has finite dimension; depth 0")

    tested = 0
    all_exhaustive = True
    coverage_complete = True
    frontier: list[tuple[ModuleRep, list[ReductionStep]]] = [(mod, [])]
    expanded: list[tuple[tuple, ModuleRep]] = []

    for level in range(1, limits.max_steps + 1):
        next_frontier: list[tuple[ModuleRep, list[ReductionStep]]] = []
        for current, chain in frontier:
            fp = _fingerprint(current)
            skip = False
            for fp_seen, seen in expanded:
                if fp == fp_seen:
                    verdict = is_isomorphic(current, seen, exhaust_cap=4096,
                                            samples=32, seed=limits.seed)
                    if verdict.kind != "yes":
                        coverage_complete = False
                    skip = True
                    break
            if skip:
                continue
            expanded.append((fp, current))
            for n, a, b in _candidate_triples(mode, limits):
                syz = _syzygy(current, n)
                right = direct_sum([syz] * b, alg)
                left = direct_sum([current] * a, alg)
                if target == "pd" and level == limits.max_steps and \
                        not _middle_dim_can_be_free(left.dim, right.dim, alg.dim):
                    continue
                space = ext1_elements(right, left, cap=limits.cap)
                if not space.exhaustive:
                    all_exhaustive = False
                elems = space.elements(scalar_orbits=space.exhaustive,
                                       samples=limits.samples, seed=limits.seed)
                quick_free = target == "pd" and level == limits.max_steps
                if quick_free:
                    # last-level pd search: test freeness of each middle by a
                    # single rank computation, without building the quotient
                    amb_rows = _ambient_radical_rows(left, space.cover.free)
                    hit, batch = _scan_for_free_middle(space, elems, amb_rows,
                                                       limits.threads)
                    tested += batch
                    if hit is not None:
                        middle, _ = middle_term(hit)
                        assert terminal(middle)
                        step = ReductionStep(n, a, b, hit.coeffs, middle)
                        witness = ReductionWitness(mode, target, chain + [step],
                                                   middle, verdict_text(middle))
                        return SearchResult(True, witness,
                                            all_exhaustive and coverage_complete,
                                            tested, limits, mode, target)
                    continue
                for element in elems:
                    tested += 1
                    middle, _ = middle_term(element)
                    if not terminal(middle):
                        if level < limits.max_steps:
                            next_frontier.append(
                                (middle,
                                 chain + [ReductionStep(n, a, b,
                                                        element.coeffs, middle)]))
                        continue
                    step = ReductionStep(n, a, b, element.coeffs, middle)
                    witness = ReductionWitness(mode, target, chain + [step],
                                               middle, verdict_text(middle))
                    return SearchResult(True, witness,
                                        all_exhaustive and coverage_complete,
                                        tested, limits, mode, target)
        frontier = next_frontier
    return SearchResult(False, None, all_exhaustive and coverage_complete,
                        tested, limits, mode, target)


def _scan_for_free_middle(space: Ext1Space, elements, radical_rows: np.ndarray,
                          threads: int):
    """First element (in order) with a free middle, plus the count scanned.

    With threads > 1 the rank tests run in an order-preserving pool;
    results are consumed in enumeration order, so the hit is identical
    to the sequential scan.
    """
    if threads <= 1:
        count = 0
        for element in elements:
            count += 1
            if _quick_free_test(space, element, radical_rows):
                return element, count
        return None, count
    from concurrent.futures import ThreadPoolExecutor
    count = 0
    with ThreadPoolExecutor(max_workers=threads) as pool:
        while True:
            chunk = list(itertools.islice(elements, 256))
            if not chunk:
                return None, count
            results = list(pool.map(
                lambda e: _quick_free_test(space, e, radical_rows), chunk))
            for element, ok in zip(chunk, results):
                count += 1
                if ok:
                    return element, count


def _ambient_radical_rows(left: ModuleRep, free: ModuleRep) -> np.ndarray:
    rows_a, _ = left.radical_rows()
    rows_f, _ = free.radical_rows()
    amb = left.dim + free.dim
    out = np.zeros((rows_a.shape[0] + rows_f.shape[0], amb), dtype=np.int64)
    out[:rows_a.shape[0], :left.dim] = rows_a
    out[rows_a.shape[0]:, left.dim:] = rows_f
    return out


def verify_witness(mod: ModuleRep, result: SearchResult) -> bool:
    """Re-derive every step of a witness from scratch and re-check the terminal.

    Each extension class is rebuilt from its stored coefficients against
    the deterministic cover and coset bases, so the middles must match
    the stored ones entry for entry.
    """
    if not result.found:
        return False
    limits = result.limits
    current = mod
    for step in result.witness.steps:
        if result.mode == "ured" and (step.a != 1 or step.b != 1):
            return False
        syz = _syzygy(current, step.n)
        right = direct_sum([syz] * step.b, mod.algebra)
        left = direct_sum([current] * step.a, mod.algebra)
        space = ext1_elements(right, left, cap=limits.cap)
        element = space.element(step.coeffs)
        middle, seq = middle_term(element)
        if middle.dim != step.middle.dim:
            return False
        for j in range(mod.algebra.num_gens):
            if not (middle.action_arr(j) == step.middle.action_arr(j)).all():
                return False
        current = middle
    if result.target == "pd":
        return pd_is_finite(current)
    return gdim_is_finite(current, limits.tr_bound)


# -- growth estimation -------------------------------------------------------

@dataclass
class GrowthEstimate:
    kind: str
    values: tuple[int, ...]
    start_index: int
    window: int
    ratio_eps: float
    exponential_flag: bool
    fitted_degree: int | None
    verdict: str
    note: str = ("window estimate of an asymptotic infimum; "
                 "never asserted as the true value")

    @property
    def is_zero(self) -> bool:
        return self.verdict == "poly(0)"

    @property
    def is_finite(self) -> bool:
        return self.verdict.startswith("poly")

    def degree_less_than(self, other: "GrowthEstimate") -> bool:
        """Strictly smaller growth class (heuristic comparison)."""
        if not self.is_finite:
            return False
        if not other.is_finite:
            return True
        return self.fitted_degree < other.fitted_degree

    def to_jsonable(self) -> dict:
        return {"kind": self.kind, "values": list(self.values),
                "start_index": self.start_index, "window": self.window,
                "ratio_eps": self.ratio_eps,
                "exponential_flag": self.exponential_flag,
                "fitted_degree": self.fitted_degree,
                "verdict": self.verdict, "note": self.note}


def growth_estimate(values, kind: str = "betti", *, window: int = 6,
                    ratio_eps: float = 0.15, start_index: int = 0) -> GrowthEstimate:
    """Classify a value sequence as poly(d), exponential or inconclusive.

    Exponential means every consecutive ratio in the tail window is at
    least 1 + ratio_eps; otherwise the degree is round(1 + slope) from a
    log-log fit over the window.  Short or mixed-zero tails are
    inconclusive.
    """
    vals = [int(v) for v in values]
    base = GrowthEstimate(kind, tuple(vals), start_index, window, ratio_eps,
                          False, None, "inconclusive")
    if len(vals) < window:
        base.verdict = "inconclusive"
        base.note = f"need at least {window} values, got {len(vals)}"
        return base
    tail = vals[-window:]
    first_index = start_index + len(vals) - window
    if all(v == 0 for v in tail):
        base.fitted_degree = 0
        base.verdict = "poly(0)"
        return base
    if any(v == 0 for v in tail):
        base.verdict = "inconclusive"
        base.note = "tail mixes zero and nonzero values"
        return base
    if all(tail[i + 1] >= (1.0 + ratio_eps) * tail[i] for i in range(len(tail) - 1)):
        base.exponential_flag = True
        base.verdict = "exponential"
        return base
    xs = np.log(np.arange(first_index, first_index + window, dtype=np.float64)
                .clip(min=1.0))
    ys = np.log(np.array(tail, dtype=np.float64))
    slope = float(np.polyfit(xs, ys, 1)[0])
    degree = max(0, round(1.0 + slope))
    base.fitted_degree = degree
    base.verdict = f"poly({degree})"
    return base


def betti_growth(mod: ModuleRep, bound: int = 12, **kw) -> GrowthEstimate:
    betti = resolution_of(mod).betti_numbers(bound)
    return growth_estimate(betti, "betti", **kw)


def bass_growth(mod: ModuleRep, bound: int = 8, **kw) -> GrowthEstimate:
    return growth_estimate(bass_numbers(mod, bound), "bass", **kw)


def ext_length_growth(mod: ModuleRep, bound: int = 12, **kw) -> GrowthEstimate:
    dims = ext_dims(mod, ring_module(mod.algebra), bound).dims
    return growth_estimate(dims, "ext_lengths", **kw)


# -- reducible complexity ----------------------------------------------------

@dataclass
class ComplexityStep:
    n: int
    coeffs: tuple[int, ...]
    middle: ModuleRep
    estimate: GrowthEstimate

    def to_jsonable(self) -> dict:
        return {"n": self.n, "coeffs": list(self.coeffs),
                "middle_dim": self.middle.dim,
                "estimate": self.estimate.to_jsonable()}


@dataclass
class ComplexityChain:
    found: bool
    steps: list[ComplexityStep]
    start_estimate: GrowthEstimate
    note: str

    def to_jsonable(self) -> dict:
        return {"found": self.found,
                "steps": [s.to_jsonable() for s in self.steps],
                "start_estimate": self.start_estimate.to_jsonable(),
                "note": self.note}


def reducible_complexity_search(mod: ModuleRep, limits: SearchLimits | None = None,
                                *, bound: int = 12) -> ComplexityChain:
    """Chain of self-extensions 0 -> X -> N -> syz^n X -> 0 lowering complexity.

    Complexity is judged by the Betti growth estimator, so the chain is
    heuristic evidence for reducible complexity, labeled as such; each
    accepted step is a verified short exact sequence.
    """
    limits = limits or SearchLimits()
    start = betti_growth(mod, bound)
    steps: list[ComplexityStep] = []
    current, estimate = mod, start
    note = "estimates from finite Betti windows; heuristic"
    while not estimate.is_zero:
        if not estimate.is_finite:
            return ComplexityChain(False, steps, start,
                                   "complexity estimate is not finite: " + estimate.verdict)
        found = None
        for n in range(limits.n_max + 1):
            syz = _syzygy(current, n)
            space = ext1_elements(syz, current, cap=limits.cap)
            for element in space.elements(scalar_orbits=space.exhaustive,
                                          samples=limits.samples, seed=limits.seed):
                middle, _ = middle_term(element)
                cand = betti_growth(middle, bound)
                if cand.degree_less_than(estimate):
                    found = ComplexityStep(n, element.coeffs, middle, cand)
                    break
            if found:
                break
        if not found:
            return ComplexityChain(False, steps, start,
                                   "no complexity-lowering extension within limits")
        steps.append(found)
        current, estimate = found.middle, found.estimate
        if len(steps) > bound:
            return ComplexityChain(False, steps, start, "chain exceeded depth guard")
    return ComplexityChain(True, steps, start, note)


# -- bundled cross-checks ----------------------------------------------------

def syzygy_betti_inequality(source: ModuleRep, middle: ModuleRep, n: int,
                            imax: int) -> dict:
    """beta_{i+n}(X) <= beta_i(N) + beta_{i-1}(X) for 0 <= i <= imax.

    This is the Betti comparison induced by 0 -> X -> N -> syz^n X -> 0.
    """
    bx = resolution_of(source).betti_numbers(imax + n)
    bn = resolution_of(middle).betti_numbers(imax)
    checks = []
    ok = True
    for i in range(imax + 1):
        lhs = bx[i + n]
        rhs = bn[i] + (bx[i - 1] if i >= 1 else 0)
        checks.append({"i": i, "lhs": lhs, "rhs": rhs, "ok": lhs <= rhs})
        ok = ok and lhs <= rhs
    return {"ok": ok, "imax": imax, "checks": checks}


def upper_reduction_vs_complexity(mod: ModuleRep, limits: SearchLimits | None = None,
                                  *, bound: int = 12, imax: int = 10) -> dict:
    """Compare the complexity estimate with an upper-reduction search (pd).

    When a witness of depth s exists the complexity estimate must be at
    most s; each witness step is additionally checked against the
    syzygy Betti inequality.
    """
    limits = limits or SearchLimits()
    cx = betti_growth(mod, bound)
    search = search_reducing(mod, "ured", "pd", limits)
    report = {"cx_estimate": cx.to_jsonable(),
              "search": search.to_jsonable(),
              "betti_inequalities": [],
              "consistent": True}
    if search.found:
        depth = search.witness.depth
        if cx.is_finite:
            report["consistent"] = cx.fitted_degree <= depth
        current = mod
        for step in search.witness.steps:
            if step.a == 1 and step.b == 1:
                ineq = syzygy_betti_inequality(current, step.middle, step.n, imax)
                report["betti_inequalities"].append(ineq)
                report["consistent"] = report["consistent"] and ineq["ok"]
            current = step.middle
    else:
        note = "no witness found; consistent with any complexity value"
        if search.exhaustive and cx.is_finite and cx.fitted_degree <= limits.max_steps:
            note = ("exhaustive search below the complexity estimate found no "
                    "witness; limits may be too tight or the estimate high")
        report["note"] = note
    return report


def upper_reduction_vs_gorenstein_complexity(mod: ModuleRep,
                                             limits: SearchLimits | None = None,
                                             *, bound: int = 8,
                                             bass_bound: int = 8) -> dict:
    """Gorenstein-side comparison: gcx estimate vs upper-reduction (gdim) search.

    Also reports the plexity estimate of the ring (Bass number growth)
    and the residue-field instance tying finite upper reducing
    G-dimension of k to finite plexity.
    """
    limits = limits or SearchLimits()
    alg = mod.algebra
    gcx = ext_length_growth(mod, bound)
    search = search_reducing(mod, "ured", "gdim", limits)
    px_ring = bass_growth(ring_module(alg), bass_bound)
    k = simple_module(alg)
    k_search = search if mod is k else search_reducing(k, "ured", "gdim", limits)
    consistent = True
    if search.found and gcx.is_finite:
        consistent = gcx.fitted_degree <= search.witness.depth
    plexity_instance = {
        "k_ured_gdim": k_search.to_jsonable(),
        "ring_plexity_estimate": px_ring.to_jsonable(),
        "implication": ("finite upper reducing G-dimension of k implies finite "
                        "ring plexity"),
        "instance_consistent": (not k_search.found) or px_ring.is_finite,
    }
    return {"gcx_estimate": gcx.to_jsonable(),
            "search": search.to_jsonable(),
            "ring_plexity": px_ring.to_jsonable(),
            "plexity_instance": plexity_instance,
            "consistent": consistent and plexity_instance["instance_consistent"]}
