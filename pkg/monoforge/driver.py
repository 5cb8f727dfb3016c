"""Chart forests over a blown up base and the coordinator that drives them.

A forest holds one germ per chart point of X. Every leaf carries tags for
the exceptional divisors through it and the tag of the base point it maps
to. The coordinator performs the three kinds of moves:

* base_blowup: blow up a point q of the base, replacing (u, v) by the
  chart pair of every leaf over q;
* principalize: blow up coordinate curves upstairs until (u, v) is
  principal at every leaf over q;
* monomialize / toroidalize: the outer loops built from the two.
"""
from __future__ import annotations

import asyncio
import logging
from concurrent.futures import Executor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Sequence

from . import series as ps
from .const import DEFAULT_IMAGE_TAG, DEFAULT_MAX_DEPTH, DIVISOR_TAG_PREFIX, GENERIC_TRANSLATION
from .exceptions import (
    DepthExceeded,
    DescentViolation,
    MalformedGerm,
    MonoforgeError,
    NotInvertible,
    UnsupportedCenter,
    WrongForm,
)
from .germ import BaseType, MapGerm
from .prepared import (
    CurveCandidate,
    CurveInvariantKind,
    PreparedClass,
    PreparedTag,
    classify_prepared,
    curve_candidates,
    divisor_invariants,
    good_form,
    i_value,
    invertibility_of,
    toroidal_form,
)
from .transform3d import CurveCenter, monoidal_charts

_LOGGER = logging.getLogger(__name__)

PHASES: tuple[CurveInvariantKind, ...] = (
    CurveInvariantKind.SIGMA,
    CurveInvariantKind.OMEGA,
    CurveInvariantKind.LITTLE_OMEGA,
)


class StepKind(str, Enum):
    BASE_BLOWUP = "BaseBlowup"
    CURVE_BLOWUP = "CurveBlowup"


@dataclass(frozen=True)
class BasePoint:
    tag: str
    base_type: BaseType
    parent: str | None = None
    chart: str | None = None


@dataclass
class ChartNode:
    id: int
    germ: MapGerm
    divisors: dict[str, str]
    image: str
    parent: int | None = None
    label: str = "root"
    children: list[int] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class ChartForest:
    nodes: dict[int, ChartNode] = field(default_factory=dict)
    base_points: dict[str, BasePoint] = field(default_factory=dict)
    _next_id: int = 0
    _next_divisor: int = 1

    @classmethod
    def from_germs(cls, entries: Iterable[tuple[MapGerm, dict[str, str] | None, str | None]]) -> ChartForest:
        forest = cls()
        for germ, divisors, image in entries:
            forest.add_root(germ, divisors, image)
        if not forest.nodes:
            raise MalformedGerm("a forest needs at least one leaf")
        return forest

    def add_root(self, germ: MapGerm, divisors: dict[str, str] | None = None,
                 image: str | None = None) -> ChartNode:
        image = image or DEFAULT_IMAGE_TAG
        tags = {n: f"{DIVISOR_TAG_PREFIX}{n}" for n in germ.exceptional_vars}
        tags.update(divisors or {})
        unknown = set(tags) - set(germ.exceptional_vars)
        if unknown:
            raise MalformedGerm(f"divisor tags for non exceptional variables {sorted(unknown)}")
        self._register_base(BasePoint(image, germ.base_type))
        return self._add(germ, tags, image, None, "root")

    def _register_base(self, point: BasePoint) -> None:
        known = self.base_points.get(point.tag)
        if known is None:
            self.base_points[point.tag] = point
        elif known.base_type != point.base_type:
            raise MalformedGerm(f"base point {point.tag} is both a {int(known.base_type)} point and "
                                f"a {int(point.base_type)} point")

    def _add(self, germ: MapGerm, divisors: dict[str, str], image: str, parent: int | None,
             label: str) -> ChartNode:
        node = ChartNode(self._next_id, germ, divisors, image, parent, label)
        self.nodes[node.id] = node
        self._next_id += 1
        if parent is not None:
            self.nodes[parent].children.append(node.id)
        return node

    def new_divisor(self) -> str:
        tag = f"{DIVISOR_TAG_PREFIX}{self._next_divisor}"
        self._next_divisor += 1
        return tag

    def leaves(self) -> list[ChartNode]:
        return [n for n in sorted(self.nodes.values(), key=lambda n: n.id) if n.is_leaf]

    def leaves_over(self, image: str) -> list[ChartNode]:
        return [n for n in self.leaves() if n.image == image]


@dataclass(frozen=True)
class GlobalInvariants:
    A: int
    C: tuple[int, int] | None
    I: int | None

    def __str__(self) -> str:
        return f"A={self.A} C={self.C} I={self.I}"


@dataclass(frozen=True)
class TraceStep:
    kind: StepKind
    target: str
    center: str | None
    invariant: str | None
    leaves: tuple[int, ...]
    before: GlobalInvariants
    after: GlobalInvariants


@dataclass
class RunTrace:
    steps: list[TraceStep] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)


# --- per leaf transforms ------------------------------------------------------------

@dataclass(frozen=True)
class BaseChart:
    """The leaf germ in the chart of the blown up base point it lands in."""
    germ: MapGerm
    chart: str
    alpha: Fraction


def base_chart(g: MapGerm) -> BaseChart:
    """(u, v) = (u1, u1 v1) when u | v, (u1 v1, v1) when v | u."""
    split_u = ps.monomial_and_unit(g.u)
    if split_u is None:
        raise WrongForm("u is not a monomial times a unit", {"u": ps.format_series(g.u)})
    u_mono, u_unit = split_u
    if ps.divides(g.u, g.v):
        w = ps.mul(ps.divide_monomial(g.v, u_mono), ps.invert_unit(u_unit, g.precision))
        alpha = ps.constant_term(w)
        v1 = ps.sub(w, ps.constant(alpha, g.vars))
        if g.base_type == BaseType.TWO_POINT and not alpha:
            base, exceptional = BaseType.TWO_POINT, g.exceptional_vars
        else:
            base = BaseType.ONE_POINT
            exceptional = tuple(n for n, e in zip(g.vars, u_mono) if e)
        return BaseChart(MapGerm(g.u, v1, exceptional, base, g.precision), "u", alpha)
    split_v = ps.monomial_and_unit(g.v)
    if split_v is not None and ps.divides(g.v, g.u):
        v_mono, v_unit = split_v
        u1 = ps.mul(ps.divide_monomial(g.u, v_mono), ps.invert_unit(v_unit, g.precision))
        return BaseChart(MapGerm(u1, g.v, g.exceptional_vars, BaseType.TWO_POINT, g.precision), "v", Fraction(0))
    raise NotInvertible("(u, v) is not principal at the leaf", {"u": ps.format_series(g.u),
                                                                 "v": ps.format_series(g.v)})


def chart_tag(q: str, chart: BaseChart) -> str:
    if chart.alpha:
        sign = "+" if chart.alpha > 0 else "-"
        return f"{q}.{chart.chart}{sign}{abs(chart.alpha)}"
    return f"{q}.{chart.chart}"


@dataclass(frozen=True)
class CurveChild:
    germ: MapGerm
    lead: str
    label: str


def curve_children(pc: PreparedClass, candidate: CurveCandidate) -> list[CurveChild]:
    """Both origin charts of the blowup of the candidate curve plus one generic point on the new divisor."""
    center = CurveCenter(candidate.first, candidate.second)
    edges = monoidal_charts(pc.germ, center, (GENERIC_TRANSLATION,))
    leads = (candidate.first, candidate.second, candidate.first)
    children = []
    for edge, lead in zip(edges, leads):
        if edge.error is not None:
            raise edge.error
        germ = edge.germ
        if pc.swapped:
            germ = MapGerm(germ.v, germ.u, germ.exceptional_vars, germ.base_type, germ.precision)
        children.append(CurveChild(germ, lead, edge.chart.label))
    return children


def _max_A(pc: PreparedClass) -> tuple[int, tuple[int, int] | None]:
    entries = divisor_invariants(pc)
    A = max(d.A for d in entries)
    C = max((d.C for d in entries if d.C is not None), default=None)
    return A, C


def _optional_i(pc: PreparedClass) -> int | None:
    try:
        return i_value(pc)
    except WrongForm:
        return None


class ForestCoordinator:
    """Drives a chart forest; one orchestration step at a time."""

    def __init__(self, forest: ChartForest, max_depth: int = DEFAULT_MAX_DEPTH,
                 executor: Executor | None = None) -> None:
        self.forest = forest
        self.max_depth = max(max_depth, 1)
        self.trace = RunTrace()
        self._executor = executor
        self._classes: dict[int, PreparedClass] = {}

    # --- classification cache ----------------------------------------------------

    @property
    def classified(self) -> set[int]:
        return set(self._classes)

    def classify(self, node: ChartNode) -> PreparedClass:
        pc = self._classes.get(node.id)
        if pc is None:
            pc = classify_prepared(node.germ)
            self._classes[node.id] = pc
        return pc

    def prepared(self, node: ChartNode) -> PreparedClass:
        pc = self.classify(node)
        if not pc.prepared:
            raise WrongForm(f"leaf {node.id} is not strongly prepared", {"leaf": node.id, "label": node.label})
        return pc

    async def _gather(self, func: Callable[[Any], Any], items: Sequence[Any]) -> list[Any]:
        loop = asyncio.get_running_loop()
        return list(await asyncio.gather(*(loop.run_in_executor(self._executor, func, item) for item in items)))

    async def _classify_all(self, nodes: Sequence[ChartNode]) -> list[PreparedClass]:
        missing = [n for n in nodes if n.id not in self._classes]
        for node, pc in zip(missing, await self._gather(lambda n: classify_prepared(n.germ), missing)):
            self._classes[node.id] = pc
        return [self.prepared(n) for n in nodes]

    # --- global invariants --------------------------------------------------------

    def divisor_table(self) -> dict[tuple[str, str], tuple[int, tuple[int, int] | None]]:
        """(divisor tag, image) -> (A, C) over the leaves."""
        table: dict[tuple[str, str], tuple[int, tuple[int, int] | None]] = {}
        for node in self.forest.leaves():
            for entry in divisor_invariants(self.prepared(node)):
                key = (node.divisors.get(entry.name, entry.name), node.image)
                A, C = table.get(key, (0, None))
                C = entry.C if C is None else (C if entry.C is None else max(C, entry.C))
                table[key] = (max(A, entry.A), C)
        return table

    def global_A(self) -> int:
        return max((A for A, _ in self.divisor_table().values()), default=0)

    def global_C(self) -> tuple[int, int] | None:
        return max((C for _, C in self.divisor_table().values() if C is not None), default=None)

    def global_I(self) -> int | None:
        values = [i for i in (_optional_i(self.prepared(n)) for n in self.forest.leaves()) if i is not None]
        return max(values, default=None)

    def snapshot(self) -> GlobalInvariants:
        return GlobalInvariants(self.global_A(), self.global_C(), self.global_I())

    def _record(self, kind: StepKind, target: str, before: GlobalInvariants, leaves: Iterable[int],
                center: str | None = None, invariant: str | None = None) -> TraceStep:
        step = TraceStep(kind, target, center, invariant, tuple(leaves), before, self.snapshot())
        self.trace.steps.append(step)
        _LOGGER.debug(f"_record(): {kind.value} {target} {center or ''} {before} -> {step.after}")
        return step

    # --- base blowup ----------------------------------------------------------------

    async def base_blowup(self, q: str) -> TraceStep:
        """Blow up the base point q; every leaf over q must have (u, v) principal."""
        leaves = self.forest.leaves_over(q)
        if not leaves:
            raise WrongForm(f"no leaf maps to {q}", {"image": q})
        classes = await self._classify_all(leaves)
        offending = [n.id for n, pc in zip(leaves, classes) if invertibility_of(pc) is not None]
        if offending:
            raise NotInvertible(f"(u, v) is not principal at leaves {offending} over {q}",
                                {"leaves": offending, "image": q})
        before = self.snapshot()
        charts = await self._gather(lambda pc: base_chart(pc.base_germ), classes)
        new_ids = []
        for node, pc, chart in zip(leaves, classes, charts):
            tag = chart_tag(q, chart)
            self.forest._register_base(BasePoint(tag, chart.germ.base_type, q, chart.chart))
            divisors = {n: node.divisors[n] for n in chart.germ.exceptional_vars if n in node.divisors}
            child = self.forest._add(chart.germ, divisors, tag, node.id, f"base {tag}")
            new_ids.append(child.id)
            self._check_base_descent(node, pc, child)
        _LOGGER.info(f"base_blowup(): {q} blown up, {len(new_ids)} leaves moved")
        return self._record(StepKind.BASE_BLOWUP, q, before, new_ids)

    def _check_base_descent(self, node: ChartNode, pc: PreparedClass, child: ChartNode) -> None:
        child_pc = self.classify(child)
        if not child_pc.prepared:
            raise DescentViolation(f"leaf {child.id} is not strongly prepared after the base blowup",
                                   {"leaf": child.id, "parent": node.id})
        if pc.tag != PreparedTag.ONE_POINT or not pc.form.one_point_base:
            return
        if child_pc.split or child_pc.form.names != pc.form.names:
            return
        A, C = _max_A(pc)
        A1, C1 = _max_A(child_pc)
        if A1 > A or (A1 == A > 0 and not C1 < C):
            _LOGGER.error(f"_check_base_descent(): leaf {node.id} A,C {A},{C} -> {A1},{C1}")
            raise DescentViolation("A did not drop, or stayed positive without C dropping, over a base blowup",
                                   {"leaf": node.id, "A": [A, A1], "C": [C, C1]})

    # --- principalization ---------------------------------------------------------------

    async def principalize(self, q: str) -> list[TraceStep]:
        """Blow up coordinate curves over q until (u, v) is principal at every leaf over q."""
        steps = []
        for depth in range(self.max_depth + 1):
            leaves = self.forest.leaves_over(q)
            classes = await self._classify_all(leaves)
            pending = [(n, pc) for n, pc in zip(leaves, classes) if invertibility_of(pc) is not None]
            if not pending:
                if steps:
                    _LOGGER.info(f"principalize(): {q} principal after {len(steps)} curve blowups")
                return steps
            if depth == self.max_depth:
                raise DepthExceeded(f"principalize(): {q} still not principal after {depth} curve blowups",
                                    {"image": q, "leaves": [n.id for n, _ in pending]})
            pool = []
            for node, pc in pending:
                found = [c for c in curve_candidates(pc) if c.invariant.defined]
                if not found:
                    raise UnsupportedCenter(f"leaf {node.id} is not principal along any coordinate curve",
                                            {"leaf": node.id, "exponents": pc.exponents})
                pool.extend((node, pc, c) for c in found)
            phase = next(k for k in PHASES if any(c.invariant.kind == k for _, _, c in pool))
            node, pc, best = max((entry for entry in pool if entry[2].invariant.kind == phase),
                                 key=lambda entry: entry[2].invariant.value)
            steps.append(await self._blow_up_curve(node, pc, best))
        return steps

    async def _blow_up_curve(self, node: ChartNode, pc: PreparedClass, candidate: CurveCandidate) -> TraceStep:
        before = self.snapshot()
        children = (await self._gather(lambda item: curve_children(*item), [(pc, candidate)]))[0]
        tag = self.forest.new_divisor()
        new_nodes = []
        for child in children:
            divisors = {n: (tag if n == child.lead else node.divisors.get(n, f"{DIVISOR_TAG_PREFIX}{n}"))
                        for n in child.germ.exceptional_vars}
            new_nodes.append(self.forest._add(child.germ, divisors, node.image, node.id, child.label))
        await self._classify_all(new_nodes)
        for child in new_nodes:
            self._check_curve_descent(child, tag, candidate)
        center = f"({candidate.first},{candidate.second})"
        _LOGGER.debug(f"_blow_up_curve(): leaf {node.id} center {center} {candidate.invariant}")
        return self._record(StepKind.CURVE_BLOWUP, str(node.id), before, [n.id for n in new_nodes],
                            center, str(candidate.invariant))

    def _check_curve_descent(self, child: ChartNode, tag: str, candidate: CurveCandidate) -> None:
        kind = candidate.invariant.kind
        for c in curve_candidates(self.prepared(child)):
            on_new = tag in (child.divisors.get(c.first), child.divisors.get(c.second))
            if on_new and c.invariant.kind == kind and not c.invariant.value < candidate.invariant.value:
                _LOGGER.error(f"_check_curve_descent(): {c} above {candidate} at leaf {child.id}")
                raise DescentViolation(f"{kind.value} did not drop over the blown up curve",
                                       {"leaf": child.id, "before": str(candidate.invariant),
                                        "after": str(c.invariant)})

    # --- outer loops ---------------------------------------------------------------

    async def _process(self, q: str) -> None:
        await self.principalize(q)
        await self.base_blowup(q)

    async def monomialize(self, depth: int | None = None) -> RunTrace:
        """Base blowups, each preceded by principalization, until every leaf is good."""
        depth = self.max_depth if depth is None else depth
        for _ in range(depth):
            table = self.divisor_table()
            A = max((a for a, _ in table.values()), default=0)
            if A == 0:
                break
            top = max(c for _, c in table.values() if c is not None)
            attaining = sorted(key for key, (_, c) in table.items() if c == top)
            tag, q = attaining[0]
            _LOGGER.info(f"monomialize(): A={A} C={top}, processing {tag} over {q}")
            await self._process(q)
            table = self.divisor_table()
            after = max((c for _, c in table.values() if c is not None), default=None)
            count = sum(1 for _, c in table.values() if c == top)
            if after is not None and (after > top or (after == top and count >= len(attaining))):
                raise DescentViolation("C(Phi) and the number of divisors attaining it did not drop",
                                       {"C": [top, after], "count": [len(attaining), count]})
        else:
            if self.global_A() > 0:
                raise DepthExceeded(f"monomialize(): A={self.global_A()} after {depth} rounds, "
                                    f"descent verified, budget exhausted", {"A": self.global_A()})
        bad = [n.id for n in self.forest.leaves() if not good_form(self.prepared(n)).good]
        if bad:
            raise DescentViolation(f"leaves {bad} are bad with A(Phi) = 0", {"leaves": bad})
        return self.trace

    def _positive_i(self) -> list[tuple[int, ChartNode]]:
        values = [(_optional_i(self.prepared(n)), n) for n in self.forest.leaves()]
        return [(i, n) for i, n in values if i is not None and i > 0]

    def _ancestor_in(self, node: ChartNode, ids: Mapping[int, Any]) -> int | None:
        current: int | None = node.id
        while current is not None and current not in ids:
            current = self.forest.nodes[current].parent
        return current

    async def toroidalize(self, depth: int | None = None) -> RunTrace:
        """Drive I(Phi) to at most 0, then blow up images of non toroidal leaves."""
        depth = self.max_depth if depth is None else depth
        bad = [n.id for n in self.forest.leaves() if not good_form(self.prepared(n)).good]
        if bad:
            raise WrongForm(f"toroidalize needs good leaves, {bad} are bad", {"leaves": bad})

        for rounds in range(depth + 1):
            positive = self._positive_i()
            if not positive:
                break
            if rounds == depth:
                raise DepthExceeded(f"toroidalize(): I={self.global_I()} after {depth} rounds, "
                                    f"descent verified, budget exhausted", {"I": self.global_I()})
            top, node = max(positive, key=lambda entry: (entry[0], -entry[1].id))
            _LOGGER.info(f"toroidalize(): I={top}, processing {node.image}")
            over = {n.id: i for i, n in positive if n.image == node.image}
            await self._process(node.image)
            for leaf in self.forest.leaves():
                origin = self._ancestor_in(leaf, over)
                if origin is None or origin == leaf.id:
                    continue
                i = _optional_i(self.prepared(leaf))
                if i is not None and i >= over[origin]:
                    raise DescentViolation("I did not drop over a base blowup",
                                           {"leaf": leaf.id, "I": [over[origin], i]})

        for _ in range(depth):
            pending = [n for n in self.forest.leaves() if toroidal_form(self.prepared(n)) is None]
            if not pending:
                _LOGGER.info(f"toroidalize(): every leaf toroidal after {len(self.trace)} steps")
                return self.trace
            _LOGGER.info(f"toroidalize(): leaf {pending[0].id} not toroidal, processing {pending[0].image}")
            await self._process(pending[0].image)
        raise DepthExceeded(f"toroidalize(): non toroidal leaves left after {depth} rounds",
                            {"leaves": [n.id for n in self.forest.leaves() if toroidal_form(self.prepared(n)) is None]})


async def run_forest(forest: ChartForest, operation: str, max_depth: int = DEFAULT_MAX_DEPTH,
                     target: str | None = None) -> ForestCoordinator:
    """Run one coordinator operation and return the coordinator holding the result."""
    coordinator = ForestCoordinator(forest, max_depth)
    try:
        if operation == "principalize":
            await coordinator.principalize(target or forest.leaves()[0].image)
        elif operation == "monomialize":
            await coordinator.monomialize()
        elif operation == "toroidalize":
            await coordinator.toroidalize()
        elif operation == "base_blowup":
            await coordinator.base_blowup(target or forest.leaves()[0].image)
        else:
            raise ValueError(f"unknown forest operation {operation}")
    except MonoforgeError as err:
        _LOGGER.warning(f"run_forest(): {operation} stopped: {type(err).__name__} {err.message}")
        raise
    return coordinator
