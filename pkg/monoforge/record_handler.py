"""JSON records for germs, charts, forests and traces."""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Any

from . import series as ps
from .const import (
    EXACT,
    KEY_A,
    KEY_AFTER,
    KEY_ALPHA,
    KEY_BASE,
    KEY_BASE_POINTS,
    KEY_BEFORE,
    KEY_C,
    KEY_CASE,
    KEY_CENTER,
    KEY_CHECKS,
    KEY_CONTEXT,
    KEY_DEGENERATE,
    KEY_DIVISORS,
    KEY_EDGES,
    KEY_ERROR,
    KEY_EXCEPTIONAL,
    KEY_EXPONENTS,
    KEY_F,
    KEY_FACTOR,
    KEY_GAMMA,
    KEY_GOOD,
    KEY_I,
    KEY_ID,
    KEY_IMAGE,
    KEY_INVARIANT,
    KEY_INVERTIBLE,
    KEY_KIND,
    KEY_LABEL,
    KEY_LEADING_FORM,
    KEY_LEAVES,
    KEY_M,
    KEY_MESSAGE,
    KEY_MONOMIAL,
    KEY_NODES,
    KEY_NU,
    KEY_P,
    KEY_PARENT,
    KEY_POINT_TYPE,
    KEY_PRECISION,
    KEY_STATUS,
    KEY_STEPS,
    KEY_SWAPPED,
    KEY_TAG,
    KEY_TARGET,
    KEY_TAU,
    KEY_TOROIDAL,
    KEY_U,
    KEY_U_SCALE,
    KEY_V,
    KEY_VARS,
    MARKER_INFINITY,
    MARKER_NOT_APPLICABLE,
)
from .driver import ChartForest, ChartNode, ForestCoordinator, GlobalInvariants, RunTrace, TraceStep
from .exceptions import MonoforgeError
from .germ import InvariantVector, MapGerm, NormalizedForm, NotApplicable
from .prepared import DivisorInvariant, GoodForm, Invertibility, MinusInfinity, PreparedClass, ToroidalForm
from .resolve2d import ChartTree2D, Inv2D
from .series import TruncatedSeries, UnknownOrder
from .transform3d import ChartEdge, CorpusReport, TheoremReport

_LOGGER = logging.getLogger(__name__)


def value_record(value: Any) -> Any:
    """Numbers and markers as they appear in JSON."""
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else ps.format_coefficient(value)
    if value == EXACT:
        return MARKER_INFINITY
    if isinstance(value, (UnknownOrder, NotApplicable, MinusInfinity)):
        return str(value)
    if isinstance(value, TruncatedSeries):
        return ps.format_series(value)
    if isinstance(value, (tuple, list)):
        return [value_record(v) for v in value]
    if isinstance(value, dict):
        return {str(k): value_record(v) for k, v in value.items()}
    return value


def germ_record(g: MapGerm) -> dict[str, Any]:
    return {
        KEY_VARS: list(g.vars),
        KEY_EXCEPTIONAL: list(g.exceptional_vars),
        KEY_BASE: int(g.base_type),
        KEY_PRECISION: g.precision,
        KEY_U: ps.format_series(g.u),
        KEY_V: ps.format_series(g.v),
    }


def normal_form_record(nf: NormalizedForm) -> dict[str, Any]:
    return {
        KEY_POINT_TYPE: nf.point_type,
        KEY_MONOMIAL: dict(zip(nf.monomial_vars, nf.a)),
        KEY_M: nf.m,
        KEY_FACTOR: dict(zip(nf.monomial_vars, nf.factor)),
        KEY_P: ps.format_series(nf.P),
        KEY_F: ps.format_series(nf.F),
        KEY_U_SCALE: value_record(nf.u_scale),
        KEY_DEGENERATE: nf.degenerate,
    }


def invariants_record(inv: InvariantVector) -> dict[str, Any]:
    return {
        KEY_NU: value_record(inv.nu),
        KEY_GAMMA: value_record(inv.gamma),
        KEY_TAU: value_record(inv.tau),
        KEY_LEADING_FORM: None if inv.leading_form is None else ps.format_series(inv.leading_form, False),
    }


def edge_record(edge: ChartEdge) -> dict[str, Any]:
    record: dict[str, Any] = {KEY_LABEL: edge.chart.label, KEY_KIND: edge.chart.kind}
    if edge.error is not None:
        record[KEY_ERROR] = type(edge.error).__name__
        record[KEY_MESSAGE] = edge.error.message
        return record
    record[KEY_U] = ps.format_series(edge.germ.u)
    record[KEY_V] = ps.format_series(edge.germ.v)
    record[KEY_EXCEPTIONAL] = list(edge.germ.exceptional_vars)
    record.update(normal_form_record(edge.nf))
    return record


def theorem_record(report: TheoremReport) -> dict[str, Any]:
    return {
        KEY_CENTER: report.center,
        KEY_STATUS: "ok" if report.ok else "failed",
        KEY_CHECKS: [
            {"statement": c.statement, "passed": c.passed, "certified": c.certified, "detail": c.detail}
            for c in report.checks
        ],
        "uncertified": len(report.uncertified),
        "untested": list(report.untested),
    }


def corpus_record(report: CorpusReport) -> dict[str, Any]:
    return {
        KEY_STATUS: "ok" if report.ok else "failed",
        "cells": {f"{p}->{q}": n for (p, q), n in sorted(report.cases.items())},
        KEY_CHECKS: report.checks,
        "uncertified": report.uncertified,
        "target": report.target,
        "underfilled": [f"{p}->{q}" for p, q in report.underfilled],
        "failures": [{"parent": parent, "statement": c.statement, "detail": c.detail}
                     for parent, c in report.failures],
    }


def inv2d_record(inv: Inv2D) -> dict[str, Any]:
    return {"nu_bar": inv.nu_bar, "sigma": value_record(inv.sigma), "delta": value_record(inv.delta)}


def tree2d_record(tree: ChartTree2D) -> dict[str, Any]:
    nodes = []
    for node in tree.nodes:
        nodes.append({
            KEY_ID: node.id,
            KEY_PARENT: node.parent,
            "chart": None if node.chart is None else str(node.chart),
            KEY_POINT_TYPE: node.germ.point_type,
            KEY_F: ps.format_series(node.germ.F),
            "inv": inv2d_record(node.inv),
            "resolved": node.resolved,
            "pending": node.pending,
        })
    return {KEY_NODES: nodes, KEY_LEAVES: [n.id for n in tree.leaves()]}


# --- prepared forms --------------------------------------------------------------

def prepared_record(pc: PreparedClass) -> dict[str, Any]:
    record: dict[str, Any] = {KEY_TAG: pc.tag.value, KEY_EXPONENTS: dict(pc.exponents)}
    if pc.prepared and not pc.split:
        record[KEY_P] = {str(j): value_record(c) for j, c in sorted(pc.form.p.items())}
    if pc.swapped:
        record[KEY_SWAPPED] = True
    return record


def good_record(good: GoodForm) -> dict[str, Any]:
    record: dict[str, Any] = {KEY_GOOD: good.good, KEY_TAG: good.tag.value}
    if good.alpha is not None:
        record[KEY_ALPHA] = value_record(good.alpha)
    if good.witness:
        record["witness"] = {k: value_record(v) for k, v in good.witness.items()}
    return record


def invertibility_record(result: Invertibility) -> dict[str, Any]:
    return {KEY_INVERTIBLE: result.invertible, KEY_CASE: None if result.case is None else result.case.value}


def divisor_record(entry: DivisorInvariant) -> dict[str, Any]:
    return {KEY_A: entry.A, KEY_C: None if entry.C is None else list(entry.C), KEY_NU: entry.nu}


def aci_record(entries: dict[str, DivisorInvariant], i_value: int | None) -> dict[str, Any]:
    return {
        KEY_DIVISORS: {name: divisor_record(d) for name, d in entries.items()},
        KEY_I: MARKER_NOT_APPLICABLE if i_value is None else i_value,
    }


def toroidal_record(form: ToroidalForm | None) -> dict[str, Any]:
    return {KEY_TOROIDAL: form is not None, KEY_TAG: None if form is None else form.value}


# --- forests and traces ------------------------------------------------------------

def global_record(values: GlobalInvariants) -> dict[str, Any]:
    return {KEY_A: values.A, KEY_C: None if values.C is None else list(values.C), KEY_I: values.I}


def step_record(step: TraceStep) -> dict[str, Any]:
    return {
        KEY_KIND: step.kind.value,
        KEY_TARGET: step.target,
        KEY_CENTER: step.center,
        KEY_INVARIANT: step.invariant,
        KEY_LEAVES: list(step.leaves),
        KEY_BEFORE: global_record(step.before),
        KEY_AFTER: global_record(step.after),
    }


def trace_record(trace: RunTrace) -> dict[str, Any]:
    return {KEY_STEPS: [step_record(step) for step in trace.steps]}


def leaf_record(node: ChartNode, coordinator: ForestCoordinator | None = None) -> dict[str, Any]:
    record: dict[str, Any] = {
        KEY_ID: node.id,
        KEY_PARENT: node.parent,
        KEY_LABEL: node.label,
        KEY_IMAGE: node.image,
        KEY_DIVISORS: dict(node.divisors),
        **germ_record(node.germ),
    }
    if coordinator is not None:
        pc = coordinator.classify(node)
        record[KEY_TAG] = pc.tag.value
    return record


def forest_record(forest: ChartForest, coordinator: ForestCoordinator | None = None) -> dict[str, Any]:
    return {
        KEY_BASE_POINTS: {tag: {KEY_BASE: int(p.base_type), KEY_PARENT: p.parent}
                          for tag, p in sorted(forest.base_points.items())},
        KEY_LEAVES: [leaf_record(node, coordinator) for node in forest.leaves()],
        KEY_EDGES: [[node.parent, node.id] for node in sorted(forest.nodes.values(), key=lambda n: n.id)
                    if node.parent is not None],
    }


def run_record(coordinator: ForestCoordinator) -> dict[str, Any]:
    return {
        **trace_record(coordinator.trace),
        "forest": forest_record(coordinator.forest, coordinator),
        "final": global_record(coordinator.snapshot()),
    }


def error_record(err: MonoforgeError) -> dict[str, Any]:
    _LOGGER.debug(f"error_record(): {type(err).__name__} {err.message}")
    return {
        KEY_ERROR: type(err).__name__,
        KEY_MESSAGE: err.message,
        KEY_CONTEXT: {k: value_record(v) for k, v in err.context.items()},
    }
