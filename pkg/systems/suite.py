"""
verify-paper 检查套件：按 config/checks.yaml 的声明顺序运行全部检查并汇总为报告。
"""
import asyncio
import json
import logging
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional

import numpy as np
import yaml

from cells.algebra import DEFAULT_MAX_SIZE, FiniteAlgebra, multiplicative_reduct, verify, verify_inverse
from cells.algebra_io import dumps_algebra, loads_algebra
from cells.errors import ConfigError, WorkbenchError
from cells.pinj import PartialInjection, compose, invert
from cells.terms import evaluate, parse_identity, parse_term, rewrite_plus_to_inv, vn_pair, word_term
from cells.union_find import UnionFind
from organs.green import aperiodicity_index, green, nat_addition
from organs.identities import DEFAULT_BUDGET, DEFAULT_CHUNK, a21_satisfies, all_words, check_identity, evaluate_all, word_identity
from systems import catalog
from systems.snfam import (
    SnSemigroup,
    build_sn,
    dclass_shape_check,
    phi_n,
    sn_generators,
    sn_size,
    verify_formulas,
    verify_prop_5_1,
    verify_prop_5_3,
)

logger = logging.getLogger(__name__)

CHECKS_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "config", "checks.yaml")

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


class CheckFailure(WorkbenchError):
    pass


@dataclass
class CheckResult:
    name: str
    ref: str
    status: str
    elapsed: float = 0.0
    detail: str = ""

    def to_document(self, timing: bool = False) -> Dict[str, Any]:
        doc = {"name": self.name, "status": self.status, "ref": self.ref, "detail": self.detail}
        if timing:
            doc["elapsed"] = round(self.elapsed, 3)
        return doc


@dataclass
class VerificationReport:
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    @property
    def verdict(self) -> str:
        return PASS if self.passed else FAIL

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def counts(self) -> Dict[str, int]:
        return {status: sum(c.status == status for c in self.checks) for status in (PASS, FAIL, SKIPPED)}

    def to_document(self, timing: bool = False) -> Dict[str, Any]:
        return {"verdict": self.verdict, "counts": self.counts(),
                "checks": [c.to_document(timing) for c in self.checks]}

    def dumps(self, timing: bool = False) -> str:
        return json.dumps(self.to_document(timing), ensure_ascii=False, indent=2)

    def render_text(self, timing: bool = True) -> str:
        counts = self.counts()
        lines = [f"verify-paper: {self.verdict.upper()} "
                 f"({counts[PASS]} passed, {counts[FAIL]} failed, {counts[SKIPPED]} skipped)"]
        for c in self.checks:
            suffix = f"  {c.elapsed:.2f}s" if timing and c.status != SKIPPED else ""
            lines.append(f"[{c.status.upper():7}] {c.name}{suffix}")
            lines.append(f"          {c.ref}")
            if c.detail:
                lines.append(f"          {c.detail}")
        return "\n".join(lines)


def load_check_catalog(path: str = CHECKS_FILE) -> List[Dict[str, Any]]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        logger.error(f"检查目录加载失败: {e}", exc_info=True)
        raise ConfigError(f"cannot read check catalog {path}: {e}") from e
    checks = data.get("checks", []) if isinstance(data, dict) else []
    names = [c.get("name") for c in checks]
    unknown = [name for name in names if name not in CHECKS]
    if unknown:
        raise ConfigError(f"check catalog names unknown checks: {', '.join(map(str, unknown))}")
    return checks


class SuiteContext:
    """套件运行期的共享状态：配置、目录覆盖项、S_n 缓存"""

    def __init__(self, config: Optional[Dict[str, Any]] = None,
                 overrides: Optional[Dict[str, FiniteAlgebra]] = None):
        config = config or {}
        self.n_max = int(config.get("n_max", 3))
        self.budget = int(config.get("budget", DEFAULT_BUDGET))
        self.chunk_size = int(config.get("chunk_size", DEFAULT_CHUNK))
        self.max_size = int(config.get("max_size", DEFAULT_MAX_SIZE))
        self.rho_reading = config.get("rho_reading", "prose")
        self.property_cases = int(config.get("property_cases", 10000))
        self.seed = int(config.get("seed", 20240101))
        self.word_length = int(config.get("word_length", 5))
        self.overrides = dict(overrides or {})
        if self.n_max < 2:
            raise ConfigError(f"n_max must be at least 2, got {self.n_max}")
        self._sn: Dict[int, SnSemigroup] = {}
        self._lock = threading.Lock()

    @property
    def ns(self) -> range:
        return range(2, self.n_max + 1)

    def algebra(self, name: str) -> FiniteAlgebra:
        if name in self.overrides:
            return self.overrides[name]
        return catalog.resolve(name, self.max_size)

    def sn(self, n: int) -> SnSemigroup:
        with self._lock:
            if n not in self._sn:
                self._sn[n] = build_sn(n, self.max_size)
            return self._sn[n]

    def check(self, A: FiniteAlgebra, text: str):
        return check_identity(A, parse_identity(text, macros=True), self.budget, self.chunk_size)


def _require(condition: bool, message: str):
    if not condition:
        raise CheckFailure(message)


def _require_verdict(verdict, A: Optional[FiniteAlgebra] = None, prefix: str = ""):
    if not verdict:
        raise CheckFailure(f"{prefix}{verdict.describe(A)}")


# ---------------------------------------------------------------- 检查

def check_catalog_sizes(ctx: SuiteContext) -> str:
    sizes = [ctx.algebra(f"end-chain:{m}").size for m in range(1, 5)]
    _require(sizes == [catalog.end_chain_size(m) for m in range(1, 5)] == [1, 3, 10, 35],
             f"End(C_m) sizes {sizes}")
    R = ctx.algebra("end-chain:3")
    dsizes = sorted(len(members) for members in green(multiplicative_reduct(R)).dclasses)
    _require(dsizes == [1, 3, 6], f"End(C_3) D-class sizes {dsizes}")
    for name, expected in (("end0-chain:3", 6), ("a21", 6), ("brandt", 6), ("b21", 6)):
        size = ctx.algebra(name).size
        _require(size == expected, f"|{name}| = {size}, expected {expected}")
    return f"End(C_m) sizes {sizes}; End(C_3) D-classes {dsizes}"


def check_axioms(ctx: SuiteContext) -> str:
    names = [f"end-chain:{m}" for m in range(1, 5)] + ["end0-chain:3", "a21", "b21", "brandt"]
    for name in names:
        A = ctx.algebra(name)
        _require_verdict(verify(A), A, f"{name}: ")
    for n in ctx.ns:
        S = ctx.sn(n).semigroup
        _require_verdict(verify_inverse(S), S, f"S_{n}: ")
        R = nat_addition(S)
        _require_verdict(verify(R), R, f"(S_{n}, +nat, ·): ")
        names.append(f"nat(S_{n})")
    return f"{len(names)} algebras"


CONTRASTS = (
    ("a21", "x + x*x = x*x", True),
    ("end0-chain:3", "x + x*x = x*x", False),
    ("end0-chain:3", "x + x*x = x", True),
    ("a21", "x + x*x = x", False),
)


def check_identity_contrasts(ctx: SuiteContext) -> str:
    found = []
    for name, text, expected in CONTRASTS:
        A = ctx.algebra(name)
        verdict = ctx.check(A, text)
        _require(verdict.holds == expected, f"{name} ⊨ {text}: {verdict.describe(A)}")
        found.append(f"{name} ⊨ {text}: {verdict.describe(A)}")
    return "; ".join(found)


def check_division(ctx: SuiteContext) -> str:
    verdict = catalog.verify_division_pipeline()
    _require_verdict(verdict)
    return verdict.detail


def _word_classes(A: FiniteAlgebra, words, letters) -> Dict[bytes, List]:
    classes: Dict[bytes, List] = {}
    for w in words:
        classes.setdefault(evaluate_all(A, word_term(w), letters).tobytes(), []).append(w)
    return classes


def check_word_transfer(ctx: SuiteContext) -> str:
    letters = ("x", "y")
    words = all_words(letters, ctx.word_length)
    A, B = multiplicative_reduct(ctx.algebra("a21")), multiplicative_reduct(ctx.algebra("b21"))
    classes = _word_classes(A, words, letters)
    for members in classes.values():
        values = {evaluate_all(B, word_term(w), letters).tobytes() for w in members}
        _require(len(values) == 1, f"{''.join(members[0])} = {''.join(members[1])} holds in A21 only")
    verdict = ctx.check(ctx.algebra("b21"), "x + x*x = x*x")
    _require(verdict.holds, f"B21 ⊨ x + x*x = x*x: {verdict.describe(ctx.algebra('b21'))}")
    return f"{len(words)} words in {len(classes)} A21-classes"


def _naive_closure_size(gens: List[PartialInjection]) -> int:
    letters = list(gens) + [invert(g) for g in gens]
    seen = set(letters)
    frontier = list(seen)
    while frontier:
        fresh = []
        for f in frontier:
            for g in letters:
                h = compose(f, g)
                if h not in seen:
                    seen.add(h)
                    fresh.append(h)
        frontier = fresh
    return len(seen)


def check_sn_construction(ctx: SuiteContext) -> str:
    sizes = []
    for n in ctx.ns:
        sn = ctx.sn(n)
        size = sn.semigroup.size
        _require(size == sn_size(n) == _naive_closure_size(sn_generators(n)), f"|S_{n}| = {size}")
        _require_verdict(verify_formulas(n, sn), sn.semigroup, f"S_{n} formulas: ")
        _require_verdict(dclass_shape_check(n, sn), sn.semigroup, f"S_{n} D-classes: ")
        sizes.append(size)
    return f"|S_n| = {sizes}"


def check_aperiodic(ctx: SuiteContext) -> str:
    for n in ctx.ns:
        S = ctx.sn(n).semigroup
        verdict = ctx.check(S, "x^2 = x^3")
        _require(verdict.holds, f"S_{n}: {verdict.describe(S)}")
    return f"x^2 = x^3 in S_n for n ≤ {ctx.n_max}"


def check_vn_separation(ctx: SuiteContext) -> str:
    details = []
    for n in ctx.ns:
        verdict = verify_prop_5_3(n, ctx.sn(n))
        _require_verdict(verdict, prefix=f"n={n}: ")
        details.append(verdict.detail)
    return "; ".join(details)


def check_brandt_membership(ctx: SuiteContext) -> str:
    details = []
    for n in ctx.ns:
        verdict = verify_prop_5_1(n, ctx.sn(n), ctx.rho_reading)
        _require_verdict(verdict, prefix=f"n={n}: ")
        details.append(verdict.detail)
    return "; ".join(details)


def check_jump_criterion(ctx: SuiteContext) -> str:
    for n in range(2, ctx.n_max + 2):
        lhs, rhs = vn_pair(n)
        _require(a21_satisfies(lhs, rhs), f"jumps of v_{n} and v_{n}' differ")
    letters = ("x", "y")
    words = all_words(letters, ctx.word_length)
    A = multiplicative_reduct(ctx.algebra("a21"))
    values = {w: evaluate_all(A, word_term(w), letters).tobytes() for w in words}
    pairs = 0
    for w in words:
        for w2 in words:
            exhaustive = values[w] == values[w2]
            _require(a21_satisfies(w, w2) == exhaustive,
                     f"{''.join(w)} = {''.join(w2)}: jumps say {not exhaustive}")
            pairs += 1
    return f"v_n = v_n' for n ≤ {ctx.n_max + 1}; {pairs} word pairs agree"


def check_end_chain_structure(ctx: SuiteContext) -> str:
    for m in range(1, 5):
        _require_verdict(catalog.end_chain_structure(m), prefix=f"m={m}: ")
    return "m = 1..4"


def check_meet_addition(ctx: SuiteContext) -> str:
    for m in (1, 2, 3):
        _require_verdict(catalog.combined_lattice_check(m), prefix=f"m={m}: ")
    return "m = 1..3"


def check_theorem_premises(ctx: SuiteContext) -> str:
    A, R = ctx.algebra("a21"), ctx.algebra("end-chain:3")
    inside = {tuple(f.values) for f in catalog.fixing_top(3).carriers}
    _require({tuple(f.values) for f in A.carriers} == inside, "A21 is the subsemiring of End(C_3) fixing 2")
    mul = multiplicative_reduct(R)
    for n in (2, 3):
        lhs, rhs = vn_pair(n)
        verdict = check_identity(mul, word_identity(lhs, rhs), ctx.budget, ctx.chunk_size)
        _require(verdict.holds, f"End(C_3) ⊨ v_{n} = v_{n}': {verdict.describe(mul)}")

    plus = parse_term("x + y")
    term = rewrite_plus_to_inv(plus, p=2)
    for name, S in (("brandt", ctx.algebra("brandt")), ("S_2", ctx.sn(2).semigroup)):
        _require(aperiodicity_index(S) <= 2, f"{name} is not aperiodic of index 2")
        grid = np.indices((S.size, S.size)).reshape(2, -1)
        values = np.broadcast_to(evaluate(term, {"x": grid[0], "y": grid[1]}, S), (grid.shape[1],))
        _require((nat_addition(S, p=2).add.ravel() == values).all(),
                 f"nat-addition of {name} differs from (x y^-1)^2 x")

    sn = ctx.sn(2)
    R2 = nat_addition(sn.semigroup)
    assignment = phi_n(2, sn)
    lhs, rhs = vn_pair(2)
    left, right = (int(evaluate(word_term(w), assignment, R2)) for w in (lhs, rhs))
    _require(left != right, "φ_2 does not separate v_2 and v_2' in (S_2, +nat, ·)")
    return "A21 ⊆ End(C_3); End(C_3) ⊨ v_2 = v_2', v_3 = v_3'; nat-addition is a term"


def _random_map(rng: np.random.Generator, degree: int) -> PartialInjection:
    targets = rng.permutation(degree)
    targets[rng.random(degree) < 0.3] = -1
    return PartialInjection(degree, tuple(int(t) for t in targets))


def check_property_laws(ctx: SuiteContext) -> str:
    rng = np.random.default_rng(ctx.seed)
    for case in range(ctx.property_cases):
        degree = int(rng.integers(1, 9))
        f, g, h = (_random_map(rng, degree) for _ in range(3))
        _require(compose(compose(f, g), h) == compose(f, compose(g, h)), f"associativity at case {case}")
        _require(compose(compose(f, invert(f)), f) == f, f"f f⁻¹ f = f at case {case}")
        _require(invert(invert(f)) == f, f"(f⁻¹)⁻¹ = f at case {case}")
        _require(invert(compose(f, g)) == compose(invert(g), invert(f)), f"(fg)⁻¹ = g⁻¹f⁻¹ at case {case}")

    items = list(range(64))
    uf = UnionFind(items)
    pairs = rng.integers(0, 64, size=(48, 2))
    for a, b in pairs:
        uf.union(int(a), int(b))
    # 标签传播求连通分量作为对照
    labels = np.arange(64)
    while True:
        low = np.minimum(labels[pairs[:, 0]], labels[pairs[:, 1]])
        before = labels.copy()
        np.minimum.at(labels, pairs[:, 0], low)
        np.minimum.at(labels, pairs[:, 1], low)
        if (labels == before).all():
            break
    components: Dict[int, List[int]] = {}
    for x in items:
        components.setdefault(int(labels[x]), []).append(x)
    _require(uf.classes() == sorted(tuple(c) for c in components.values()),
             "union-find classes differ from connected components")

    for name in ("end-chain:3", "a21", "b21", "brandt"):
        A = ctx.algebra(name)
        B = loads_algebra(dumps_algebra(A))
        same = (A.kind == B.kind and A.labels == B.labels and (A.mul == B.mul).all()
                and (A.add is None or (A.add == B.add).all())
                and (A.inv is None or (A.inv == B.inv).all()))
        _require(same, f"{name} changes under serialization")
    return f"{ctx.property_cases} random partial-injection cases"


CHECKS: Dict[str, Callable[[SuiteContext], str]] = {
    "catalog-sizes": check_catalog_sizes,
    "axioms": check_axioms,
    "identity-contrasts": check_identity_contrasts,
    "prop-3.2": check_division,
    "cor-3.3": check_word_transfer,
    "sn-construction": check_sn_construction,
    "cor-5.2": check_aperiodic,
    "prop-5.3": check_vn_separation,
    "prop-5.1": check_brandt_membership,
    "jump-criterion": check_jump_criterion,
    "end-chain-structure": check_end_chain_structure,
    "meet-addition": check_meet_addition,
    "theorem-premises": check_theorem_premises,
    "property-laws": check_property_laws,
}


def _run_check(ctx: SuiteContext, name: str, ref: str) -> CheckResult:
    start = time.perf_counter()
    try:
        detail = CHECKS[name](ctx)
        status = PASS
    except CheckFailure as e:
        status, detail = FAIL, str(e)
        logger.warning(f"检查 {name} 未通过: {e}")
    except Exception as e:
        status, detail = FAIL, f"{type(e).__name__}: {e}"
        logger.error(f"检查 {name} 出错: {e}", exc_info=True)
    return CheckResult(name, ref, status, time.perf_counter() - start, detail)


async def run_suite(ctx: SuiteContext, only: Optional[Iterable[str]] = None, jobs: int = 1,
                    catalog_path: str = CHECKS_FILE) -> VerificationReport:
    """
    并行运行选中的检查；报告顺序始终是声明顺序
    :param only: 只运行这些检查，其余记为 skipped
    """
    declared = load_check_catalog(catalog_path)
    selected = set(only) if only else None
    if selected is not None:
        unknown = selected - {c["name"] for c in declared}
        if unknown:
            raise ConfigError(f"unknown checks: {', '.join(sorted(unknown))}")
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max(1, jobs)) as pool:
        futures = []
        for entry in declared:
            name, ref = entry["name"], entry.get("ref", "")
            if selected is not None and name not in selected:
                futures.append(None)
                continue
            futures.append(loop.run_in_executor(pool, _run_check, ctx, name, ref))
        results = []
        for entry, future in zip(declared, futures):
            if future is None:
                results.append(CheckResult(entry["name"], entry.get("ref", ""), SKIPPED))
            else:
                results.append(await future)
    report = VerificationReport(results)
    logger.info(f"检查套件完成: {report.counts()}")
    return report
