"""JSON serialization of lifts.

Rationals travel as strings ("1485/2") so no value ever passes through a
double; observables carry both their stage-level definition and their
x-expansion as canonical polynomial strings. The document round-trips
exactly: parse(render(doc)) == doc.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import ParseError, SchemaError
from .lift import Observable, SuperLinearization
from .poly import VariableSpace, embed_into
from .sysparse import parse_polynomial

SCHEMA = "slin-lift/1"


def lift_to_document(sl: SuperLinearization) -> dict:
    lifted = sl.lifted_space
    return {
        "schema": SCHEMA,
        "vars": list(sl.var_names[: sl.n]),
        "m": sl.m,
        "lifted_vars": list(sl.var_names),
        "A": [[str(entry) for entry in row] for row in sl.A],
        "D": [str(entry) for entry in sl.D],
        "observables": [
            {
                "name": obs.name,
                # definitions are re-homed into the full lifted space so the
                # rendered factor order is reproducible from the document alone
                "definition": embed_into(obs.definition, lifted).render(),
                "expansion": obs.expansion.render(),
            }
            for obs in sl.observables
        ],
    }


def document_to_lift(doc: dict) -> SuperLinearization:
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise SchemaError(f"expected a {SCHEMA!r} document")
    try:
        var_names = [str(v) for v in doc["vars"]]
        lifted_names = [str(v) for v in doc["lifted_vars"]]
        m = int(doc["m"])
        rows = doc["A"]
        offsets = doc["D"]
        observables = doc["observables"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed lift document: {exc}") from exc

    n = len(var_names)
    dim = n + m
    if len(lifted_names) != dim or lifted_names[:n] != var_names:
        raise SchemaError("lifted_vars must be the original vars plus m observables")
    if len(observables) != m:
        raise SchemaError(f"expected {m} observables, found {len(observables)}")
    if len(rows) != dim or any(len(row) != dim for row in rows) or len(offsets) != dim:
        raise SchemaError(f"A must be {dim}x{dim} and D of length {dim}")

    try:
        A = tuple(tuple(Fraction(entry) for entry in row) for row in rows)
        D = tuple(Fraction(entry) for entry in offsets)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational literal in A or D: {exc}") from exc

    try:
        x_space = VariableSpace(tuple(var_names))
        lifted_space = VariableSpace(tuple(lifted_names))
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc

    parsed = []
    for k, entry in enumerate(observables):
        try:
            name = entry["name"]
            definition = parse_polynomial(entry["definition"], lifted_space)
            expansion = parse_polynomial(entry["expansion"], x_space)
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed observable #{k + 1}: {exc}") from exc
        except ParseError as exc:
            raise SchemaError(f"bad polynomial in observable #{k + 1}: {exc}") from exc
        if name != lifted_names[n + k]:
            raise SchemaError(
                f"observable #{k + 1} is named {name!r} but coordinate "
                f"{n + k + 1} is {lifted_names[n + k]!r}"
            )
        parsed.append(
            Observable(
                index=k + 1,
                name=name,
                definition=definition,
                expansion=expansion,
                stage=0,
                seed=0,
            )
        )

    return SuperLinearization(
        n=n,
        m=m,
        A=A,
        D=D,
        observables=tuple(parsed),
        var_names=tuple(lifted_names),
    )


def save_lift(sl: SuperLinearization, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(lift_to_document(sl), fh, indent=2)
        fh.write("\n")


def load_lift(path) -> SuperLinearization:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    return document_to_lift(doc)
