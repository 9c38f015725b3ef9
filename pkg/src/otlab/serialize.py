"""JSON wire formats.

Instance schema::

    {
      "X": {"labels": [...], "metric": [[...]]?},
      "Y": {"labels": [...], "metric": [[...]]?},
      "cost": [[...]],            // "inf" string for +infinity
      "mu": [...], "nu": [...],
      "mode": "rational" | "float",
      "meta": {...}?              // optional provenance (fixture, seed)
    }

Rational scalars travel as "p/q" strings (integers as "p/1"); float-mode
scalars as JSON numbers. Certificates serialize with the layout
``{"gap", "marginals", "slackness", "cyclic", "tolerances", "verdict"}``.
Key order is fixed so identical inputs produce byte-identical output.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .certify import DualityCertificate
from .core import (
    FLOAT,
    RATIONAL,
    CostMatrix,
    DualPotentials,
    FiniteSpace,
    Instance,
    Marginal,
    as_matrix,
    as_vector,
    is_inf,
    validate_instance,
)
from .envelope import EnvelopeSchedule
from .errors import OTLabError
from .primal import OptimalPlanResult


def format_scalar(value, mode: str):
    """Mode-aware JSON scalar: "p/q" strings in rational mode, numbers in
    float mode, "inf" for the infinity marker."""
    if is_inf(value):
        return "inf"
    if mode == RATIONAL:
        f = Fraction(value)
        return f"{f.numerator}/{f.denominator}"
    return float(value)


def format_vector(values, mode: str):
    return [format_scalar(v, mode) for v in values]


def format_matrix(rows, mode: str):
    return [[format_scalar(v, mode) for v in row] for row in rows]


def instance_to_dict(instance: Instance) -> dict:
    mode = instance.mode

    def space_dict(space: FiniteSpace):
        d = {"labels": list(space.labels)}
        if space.metric is not None:
            d["metric"] = format_matrix(space.metric, mode)
        return d

    return {
        "X": space_dict(instance.space_x),
        "Y": space_dict(instance.space_y),
        "cost": format_matrix(instance.cost.entries, mode),
        "mu": format_vector(instance.mu.weights, mode),
        "nu": format_vector(instance.nu.weights, mode),
        "mode": mode,
    }


def instance_from_dict(data: dict) -> Instance:
    try:
        mode = data.get("mode", RATIONAL)
        if mode not in (RATIONAL, FLOAT):
            raise OTLabError(f"unknown mode {mode!r}")
        x = data["X"]
        y = data["Y"]
        space_x = FiniteSpace(
            labels=tuple(x["labels"]),
            metric=as_matrix(x["metric"], mode) if x.get("metric") is not None else None,
        )
        space_y = FiniteSpace(
            labels=tuple(y["labels"]),
            metric=as_matrix(y["metric"], mode) if y.get("metric") is not None else None,
        )
        instance = Instance(
            space_x=space_x,
            space_y=space_y,
            cost=CostMatrix(as_matrix(data["cost"], mode)),
            mu=Marginal(as_vector(data["mu"], mode)),
            nu=Marginal(as_vector(data["nu"], mode)),
            mode=mode,
        )
    except KeyError as exc:
        raise OTLabError(f"instance JSON is missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, OTLabError):
            raise
        raise OTLabError(f"malformed instance JSON: {exc}") from exc
    return validate_instance(instance)


def load_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise OTLabError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise OTLabError(f"{path} must contain a JSON object")
    return instance_from_dict(data)


def dump_json(data: dict) -> str:
    return json.dumps(data, indent=2) + "\n"


def result_to_dict(
    result: OptimalPlanResult,
    mode: str,
    pot: Optional[DualPotentials] = None,
    dual_val=None,
) -> dict:
    out = {
        "mode": mode,
        "value": format_scalar(result.value, mode),
        "plan": format_matrix(result.plan.entries, mode),
        "basis": [list(cell) for cell in result.basis],
    }
    if pot is not None:
        out["phi"] = format_vector(pot.phi, mode)
        out["psi"] = format_vector(pot.psi, mode)
        out["dual_value"] = format_scalar(dual_val, mode)
    return out


def certificate_to_dict(cert: DualityCertificate, mode: str) -> dict:
    cyclic = {}
    for k in sorted(cert.cyclic):
        violation = cert.cyclic[k]
        if violation is None:
            cyclic[f"k{k}"] = "pass"
        else:
            cyclic[f"k{k}"] = {
                "cells": [list(c) for c in violation.cells],
                "baseline": format_scalar(violation.baseline, mode),
                "permuted": format_scalar(violation.permuted, mode),
            }
    return {
        "gap": format_scalar(cert.gap, mode),
        "marginals": {
            "max_row_deviation": format_scalar(cert.marginals.max_row_deviation, mode),
            "max_col_deviation": format_scalar(cert.marginals.max_col_deviation, mode),
            "verdict": "pass" if cert.marginals.passed else "fail",
        },
        "slackness": [
            {
                "cell": list(v.cell),
                "mass": format_scalar(v.mass, mode),
                "slack": format_scalar(v.slack, mode),
            }
            for v in cert.slackness
        ],
        "cyclic": cyclic,
        "tolerances": {
            "gap": format_scalar(cert.tol, mode),
            "marginals": format_scalar(cert.marginals.tol, mode),
        },
        "verdict": "pass" if cert.verdict else "fail",
    }


def schedule_to_dict(schedule: EnvelopeSchedule, mode: str) -> dict:
    return {
        "mode": mode,
        "levels": [
            {"n": format_scalar(lv.n, mode), "value": format_scalar(lv.value, mode)}
            for lv in schedule.levels
        ],
        "limit": format_scalar(schedule.limit_value, mode),
        "saturation_level": (
            None
            if schedule.saturation_level is None
            else format_scalar(schedule.saturation_level, mode)
        ),
    }
