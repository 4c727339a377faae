"""Text file formats: code spec files, code files, words, messages, reports.

Code spec files are strict JSON (unknown keys rejected, lossless round-trip).
Code files, words, and messages are line-oriented plain text; every field
element appears as its integer index.  Reports are canonical JSON (sorted
keys, two-space indent, trailing newline) so byte-identical output is a
meaningful determinism check.

Code file layout (whitespace-separated tokens):

    hlrc-code 1
    spec <code spec as one JSON line>
    field <p> <h> <modulus coefficients, low degree first>
    size <n> <k>
    point <coordinates>          (n lines; fiber points are base then fibers)
    basis <exponent vector>      (one line per basis function)
    row <n generator entries>    (one line per basis function)
    end

Word files:

    hlrc-word 1
    size <n>
    word <n tokens, each an index or ? for an erasure>

Message files:

    hlrc-message 1
    size <k>
    message <k indices>
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import fiber as fiber_mod
from . import rm as rm_mod
from .codes import EvaluationCode
from .errors import FormatError
from .fiber import CurvePoint, FactorCurve, FiberSpec, artin_schreier_spec, hermitian_spec
from .gf import FieldSpec, build_field
from .recovery import ErasureWord, HierarchyStructure, build_fiber_hierarchy, build_rm_hierarchy
from .rm import RMSpec

FAMILIES = ("rm", "hermitian", "artin-schreier", "fiber-custom")


# -- code spec files -----------------------------------------------------------


@dataclass(frozen=True)
class CodeSpecFile:
    """Declarative description of a code plus an optional hierarchy directive."""

    family: str
    params: dict
    hierarchy: dict | None = None

    def to_json(self) -> str:
        doc = {"family": self.family, **self.params}
        if self.hierarchy is not None:
            doc["hierarchy"] = self.hierarchy
        return json.dumps(doc, sort_keys=True)


def _require_keys(doc: dict, required: set[str], optional: set[str], where: str) -> None:
    keys = set(doc)
    missing = required - keys
    unknown = keys - required - optional
    if missing:
        raise FormatError(f"{where}: missing keys {sorted(missing)}")
    if unknown:
        raise FormatError(f"{where}: unknown keys {sorted(unknown)}")


def parse_spec(doc) -> CodeSpecFile:
    if isinstance(doc, (str, Path)):
        text = Path(doc).read_text() if isinstance(doc, Path) else doc
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise FormatError(f"spec file is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise FormatError("spec file must hold a JSON object")
    family = doc.get("family")
    if family not in FAMILIES:
        raise FormatError(f"family must be one of {FAMILIES}, got {family!r}")
    hierarchy = doc.get("hierarchy")
    if hierarchy is not None and not isinstance(hierarchy, dict):
        raise FormatError("hierarchy directive must be an object")
    if family == "rm":
        _require_keys(doc, {"family", "q", "v", "m"}, {"hierarchy"}, "rm spec")
        params = {"q": int(doc["q"]), "v": int(doc["v"]), "m": int(doc["m"])}
        if hierarchy is not None:
            _require_keys(hierarchy, set(), {"dims", "policy", "seed"}, "rm hierarchy")
    elif family == "hermitian":
        _require_keys(doc, {"family", "q"}, {"hierarchy"}, "hermitian spec")
        params = {"q": int(doc["q"])}
        if hierarchy is not None:
            _require_keys(hierarchy, set(), {"order"}, "hermitian hierarchy")
    elif family == "artin-schreier":
        _require_keys(doc, {"family", "p", "h", "t", "l"}, {"hierarchy"}, "artin-schreier spec")
        params = {k: int(doc[k]) for k in ("p", "h", "t", "l")}
        if hierarchy is not None:
            _require_keys(hierarchy, set(), {"order"}, "artin-schreier hierarchy")
    else:
        _require_keys(doc, {"family", "field", "l", "rho", "factors"}, {"hierarchy"}, "fiber-custom spec")
        _require_keys(doc["field"], {"p", "h"}, set(), "fiber-custom field")
        factors = []
        for i, fac in enumerate(doc["factors"]):
            _require_keys(
                fac, {"kind", "f"}, {"e", "L", "exclude_zero"}, f"factor {i}"
            )
            factors.append(
                {
                    "kind": str(fac["kind"]),
                    "f": [int(x) for x in fac["f"]],
                    **({"e": int(fac["e"])} if "e" in fac else {}),
                    **({"L": [int(x) for x in fac["L"]]} if "L" in fac else {}),
                    **({"exclude_zero": bool(fac["exclude_zero"])} if "exclude_zero" in fac else {}),
                }
            )
        params = {
            "field": {"p": int(doc["field"]["p"]), "h": int(doc["field"]["h"])},
            "l": int(doc["l"]),
            "rho": [int(x) for x in doc["rho"]],
            "factors": factors,
        }
        if hierarchy is not None:
            _require_keys(hierarchy, set(), {"order"}, "fiber-custom hierarchy")
    return CodeSpecFile(family=family, params=params, hierarchy=hierarchy)


def spec_to_object(sf: CodeSpecFile):
    """Materialize the RMSpec / FiberSpec described by a spec file."""
    if sf.family == "rm":
        p, h = fiber_mod.prime_power(sf.params["q"])
        return RMSpec(build_field(p, h), sf.params["v"], sf.params["m"])
    if sf.family == "hermitian":
        return hermitian_spec(sf.params["q"])
    if sf.family == "artin-schreier":
        ps = sf.params
        return artin_schreier_spec(ps["p"], ps["h"], ps["t"], ps["l"])
    ps = sf.params
    field = build_field(ps["field"]["p"], ps["field"]["h"])
    factors = tuple(
        FactorCurve(
            kind=f["kind"],
            f=tuple(f["f"]),
            e=f.get("e"),
            L=tuple(f["L"]) if "L" in f else None,
            exclude_zero=f.get("exclude_zero", False),
        )
        for f in ps["factors"]
    )
    return FiberSpec(field, factors, tuple(ps["rho"]), ps["l"])


def build_from_spec(sf: CodeSpecFile) -> EvaluationCode:
    obj = spec_to_object(sf)
    if sf.family == "rm":
        return rm_mod.rm_build(obj)
    return fiber_mod.build_fiber_code(obj)


def structure_from_spec(sf: CodeSpecFile, code: EvaluationCode) -> HierarchyStructure:
    h = sf.hierarchy or {}
    if sf.family == "rm":
        return build_rm_hierarchy(
            code,
            dims=h.get("dims"),
            policy=h.get("policy", "deterministic"),
            seed=int(h.get("seed", 0)),
        )
    return build_fiber_hierarchy(code, order=h.get("order"))


# -- code files ------------------------------------------------------------------


def write_code(code: EvaluationCode, sf: CodeSpecFile, path) -> None:
    lines = ["hlrc-code 1", f"spec {sf.to_json()}"]
    p, h, modulus = code.field.serialize()
    lines.append("field " + " ".join(str(x) for x in (p, h, *modulus)))
    lines.append(f"size {code.n} {code.k}")
    for pt in code.points:
        coords = pt.coords() if isinstance(pt, CurvePoint) else pt
        lines.append("point " + " ".join(str(c) for c in coords))
    for exps in code.basis:
        lines.append("basis " + " ".join(str(e) for e in exps))
    for row in code.generator:
        lines.append("row " + " ".join(str(int(x)) for x in row))
    lines.append("end")
    Path(path).write_text("\n".join(lines) + "\n")


def read_code(path) -> tuple[EvaluationCode, CodeSpecFile]:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].split() != ["hlrc-code", "1"]:
        raise FormatError("not an hlrc-code version 1 file")
    sf: CodeSpecFile | None = None
    field: FieldSpec | None = None
    n = k = None
    points: list = []
    basis: list[tuple[int, ...]] = []
    rows: list[list[int]] = []
    for line in lines[1:]:
        if not line.strip():
            continue
        tag, _, rest = line.partition(" ")
        if tag == "spec":
            sf = parse_spec(rest)
        elif tag == "field":
            vals = [int(x) for x in rest.split()]
            field = FieldSpec(vals[0], vals[1], tuple(vals[2:]))
        elif tag == "size":
            n, k = (int(x) for x in rest.split())
        elif tag == "point":
            points.append(tuple(int(x) for x in rest.split()))
        elif tag == "basis":
            basis.append(tuple(int(x) for x in rest.split()))
        elif tag == "row":
            rows.append([int(x) for x in rest.split()])
        elif tag == "end":
            break
        else:
            raise FormatError(f"unknown code-file line tag {tag!r}")
    if sf is None or field is None or n is None:
        raise FormatError("code file missing spec/field/size lines")
    if len(points) != n or any(len(r) != n for r in rows) or len(rows) != len(basis):
        raise FormatError("code file payload sizes are inconsistent")
    spec_obj = spec_to_object(sf)
    spec_field = spec_obj.field
    if spec_field.serialize() != field.serialize():
        raise FormatError("field line contradicts the embedded spec")
    if sf.family == "rm":
        pts: tuple = tuple(points)
    else:
        pts = tuple(CurvePoint(c[0], c[1:]) for c in points)
    gen = np.array(rows, dtype=np.int32)
    code = EvaluationCode(
        field=spec_field,
        family="rm" if sf.family == "rm" else "fiber",
        spec=spec_obj,
        generator=gen,
        points=pts,
        basis=tuple(basis),
        k=k,
        dimension_formula=(
            rm_mod.rm_params(spec_obj)[1]
            if sf.family == "rm"
            else fiber_mod.fiber_params(spec_obj).k
        ),
    )
    return code, sf


# -- words and messages ------------------------------------------------------------


def write_word(word: ErasureWord, path) -> None:
    tokens = [
        "?" if word.mask[i] else str(int(word.values[i])) for i in range(len(word.values))
    ]
    Path(path).write_text(
        f"hlrc-word 1\nsize {len(tokens)}\nword " + " ".join(tokens) + "\n"
    )


def read_word(path) -> ErasureWord:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].split() != ["hlrc-word", "1"]:
        raise FormatError("not an hlrc-word version 1 file")
    size = None
    tokens: list[str] | None = None
    for line in lines[1:]:
        tag, _, rest = line.partition(" ")
        if tag == "size":
            size = int(rest)
        elif tag == "word":
            tokens = rest.split()
    if size is None or tokens is None or len(tokens) != size:
        raise FormatError("word file payload sizes are inconsistent")
    values = np.array([0 if t == "?" else int(t) for t in tokens], dtype=np.int32)
    mask = np.array([t == "?" for t in tokens], dtype=bool)
    return ErasureWord(values, mask)


def write_message(message, path) -> None:
    msg = [int(x) for x in message]
    Path(path).write_text(
        f"hlrc-message 1\nsize {len(msg)}\nmessage " + " ".join(str(x) for x in msg) + "\n"
    )


def read_message(path) -> list[int]:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].split() != ["hlrc-message", "1"]:
        raise FormatError("not an hlrc-message version 1 file")
    size = None
    msg: list[int] | None = None
    for line in lines[1:]:
        tag, _, rest = line.partition(" ")
        if tag == "size":
            size = int(rest)
        elif tag == "message":
            msg = [int(x) for x in rest.split()]
    if size is None or msg is None or len(msg) != size:
        raise FormatError("message file payload sizes are inconsistent")
    return msg


# -- reports --------------------------------------------------------------------


def report_text(doc: dict) -> str:
    """Canonical JSON: sorted keys, fixed indent, newline-terminated."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write_report(doc: dict, path) -> None:
    Path(path).write_text(report_text(doc))
