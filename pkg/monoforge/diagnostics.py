"""Diagnostics dump of a coordinator run, for bug reports."""
from __future__ import annotations

from typing import Any

from .const import DOMAIN, KEY_CONTEXT
from .driver import ForestCoordinator
from .exceptions import MonoforgeError
from .record_handler import error_record, forest_record, global_record, trace_record

REDACTED = "**REDACTED**"

# local file system paths never go into a dump attached to a public report
TO_REDACT = {
    "path",
    "source",
    "germ_file",
    "forest_file",
    "json_out",
}


def redact_data(data: Any, to_redact: set[str]) -> Any:
    if isinstance(data, dict):
        return {k: REDACTED if k in to_redact else redact_data(v, to_redact) for k, v in data.items()}
    if isinstance(data, list):
        return [redact_data(v, to_redact) for v in data]
    return data


def get_run_diagnostics(coordinator: ForestCoordinator, options: dict[str, Any] | None = None,
                        error: MonoforgeError | None = None) -> dict[str, Any]:
    """Return diagnostics for a (possibly failed) coordinator run."""
    leaves = coordinator.forest.leaves()
    try:
        invariants: dict[str, Any] | None = global_record(coordinator.snapshot())
    except MonoforgeError as err:
        invariants = {"unavailable": err.message}

    failure = None
    if error is not None:
        failure = error_record(error)
        failure[KEY_CONTEXT] = redact_data(failure[KEY_CONTEXT], TO_REDACT)

    return {
        DOMAIN: {
            "options": redact_data(dict(options or {}), TO_REDACT),
        },
        "coordinator": {
            "max_depth": coordinator.max_depth,
            "nodes": len(coordinator.forest.nodes),
            "leaves": len(leaves),
            "classified": len(coordinator.classified & {n.id for n in leaves}),
            "invariants": invariants,
            "trace": trace_record(coordinator.trace),
            "forest": forest_record(coordinator.forest),
        },
        "error": failure,
    }
