"""Problem-file format: exact JSON for point data plus an optional symbolic block.

Rationals are JSON integers or canonical strings "p" / "p/q" (lowest terms,
q > 1).  Serialisation always writes strings, so a parse/serialise/parse
round trip is the identity.
"""
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from ..errors import InputError
from ..model import FunctionData, MpecPoint

SCHEMA_VERSION = 1
_RAT = re.compile(r"^-?(0|[1-9][0-9]*)(/[1-9][0-9]*)?$")


def parse_rational(x, where="value"):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise InputError(f"{where}: expected an integer or a 'p/q' string, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if not _RAT.match(x) or x == "-0":
        raise InputError(f"{where}: non-canonical rational {x!r}")
    if "/" in x:
        p, q = x.split("/")
        if int(q) == 1 or gcd(abs(int(p)), int(q)) != 1:
            raise InputError(f"{where}: non-canonical rational {x!r}")
    return Fraction(x)


def format_rational(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _vector(xs, n, where):
    if not isinstance(xs, list):
        raise InputError(f"{where}: expected a list")
    if n is not None and len(xs) != n:
        raise InputError(f"{where}: expected {n} entries, got {len(xs)}")
    return tuple(parse_rational(x, where) for x in xs)


def _matrix(rows, n, where):
    if not isinstance(rows, list) or len(rows) != n:
        raise InputError(f"{where}: expected an {n}x{n} matrix")
    return tuple(_vector(r, n, where) for r in rows)


@dataclass(frozen=True)
class Term:
    """``coef * prod x_i^powers_i`` or ``coef * |x_var|^(3/2)``."""

    coef: Fraction
    powers: tuple = None
    abspow_var: int = None


@dataclass(frozen=True)
class Symbolic:
    f: tuple
    g: tuple = ()
    h: tuple = ()
    G: tuple = ()
    H: tuple = ()


@dataclass(frozen=True)
class Problem:
    point: MpecPoint
    name: str = ""
    description: str = ""
    x: tuple = None
    symbolic: Symbolic = None
    working_set: dict = None
    b: dict = None
    labels: dict = field(default_factory=dict)


def _terms(raw, n, where):
    if not isinstance(raw, list):
        raise InputError(f"{where}: expected a list of terms")
    out = []
    for t in raw:
        if not isinstance(t, dict) or "coef" not in t:
            raise InputError(f"{where}: each term needs a 'coef'")
        coef = parse_rational(t["coef"], where)
        if "abspow" in t:
            var, expo = t["abspow"]
            if expo != "3/2":
                raise InputError(f"{where}: only the exponent 3/2 is supported for abspow")
            if not isinstance(var, int) or not 1 <= var <= n:
                raise InputError(f"{where}: abspow variable out of range")
            out.append(Term(coef, abspow_var=var - 1))
        else:
            powers = t.get("powers", [0] * n)
            if not isinstance(powers, list) or len(powers) != n or any(
                isinstance(k, bool) or not isinstance(k, int) or k < 0 for k in powers
            ):
                raise InputError(f"{where}: powers must be {n} nonnegative integers")
            out.append(Term(coef, tuple(powers)))
    if sum(1 for t in out if t.abspow_var is not None) > 1:
        raise InputError(f"{where}: at most one abspow term per function")
    return tuple(out)


def _function(raw, n, where, need_value=True):
    if not isinstance(raw, dict):
        raise InputError(f"{where}: expected an object")
    if "gradient" not in raw:
        raise InputError(f"{where}: missing 'gradient'")
    value = parse_rational(raw.get("value", 0), where) if need_value or "value" in raw else Fraction(0)
    if need_value and "value" not in raw:
        raise InputError(f"{where}: missing 'value'")
    grad = _vector(raw["gradient"], n, where + ".gradient")
    hess = _matrix(raw["hessian"], n, where + ".hessian") if raw.get("hessian") is not None else None
    affine = raw.get("affine", False)
    if not isinstance(affine, bool):
        raise InputError(f"{where}: 'affine' must be a boolean")
    return FunctionData(value, grad, hess, affine)


def problem_from_dict(data):
    if not isinstance(data, dict):
        raise InputError("problem file must be a JSON object")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise InputError(f"unsupported schema_version {data.get('schema_version')!r}")
    n = data.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError("'n' must be a positive integer")
    if "objective" not in data:
        raise InputError("missing 'objective'")
    f = _function(data["objective"], n, "objective", need_value=False)
    blocks = {}
    for name in ("g", "h", "G", "H"):
        raw = data.get(name, [])
        if not isinstance(raw, list):
            raise InputError(f"'{name}' must be a list")
        blocks[name] = tuple(_function(r, n, f"{name}{i + 1}") for i, r in enumerate(raw))
    point = MpecPoint(n, f, blocks["g"], blocks["h"], blocks["G"], blocks["H"])
    x = _vector(data["x"], n, "x") if "x" in data else None
    sym = None
    if "symbolic" in data:
        raw = data["symbolic"]
        if not isinstance(raw, dict) or "f" not in raw:
            raise InputError("symbolic block needs at least 'f'")
        parts = {"f": _terms(raw["f"], n, "symbolic.f")}
        for name in ("g", "h", "G", "H"):
            fs = raw.get(name, [])
            if len(fs) != len(blocks[name]):
                raise InputError(f"symbolic.{name}: expected {len(blocks[name])} functions")
            parts[name] = tuple(_terms(t, n, f"symbolic.{name}{i + 1}") for i, t in enumerate(fs))
        sym = Symbolic(**parts)
    ws = b = None
    if "pivot" in data:
        pv = data["pivot"]
        if "working_set" in pv:
            ws = {k: tuple(int(i) for i in pv["working_set"].get(k, [])) for k in ("g", "G", "H")}
        if "b" in pv:
            b = {}
            for k, size in (("g", point.l), ("G", point.q), ("H", point.q)):
                b[k] = _vector(pv["b"].get(k, [0] * size), size, f"pivot.b.{k}")
    labels = data.get("labels", {})
    if not isinstance(labels, dict) or not all(isinstance(v, str) for v in labels.values()):
        raise InputError("'labels' must map names to strings")
    return Problem(point, data.get("name", ""), data.get("description", ""), x, sym, ws, b, dict(labels))


def parse_problem(raw):
    """Parse bytes or text of a problem file."""
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise InputError(f"problem file is not UTF-8: {e}") from None
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON: {e}") from None
    return problem_from_dict(data)


def load_problem(path):
    with open(path, "rb") as fh:
        return parse_problem(fh.read())


def _fn_dict(fd, with_value=True):
    out = {"gradient": [format_rational(x) for x in fd.gradient], "affine": fd.affine}
    if with_value:
        out["value"] = format_rational(fd.value)
    if fd.hessian is not None:
        out["hessian"] = [[format_rational(x) for x in r] for r in fd.hessian]
    return out


def _terms_out(terms):
    out = []
    for t in terms:
        if t.abspow_var is not None:
            out.append({"coef": format_rational(t.coef), "abspow": [t.abspow_var + 1, "3/2"]})
        else:
            out.append({"coef": format_rational(t.coef), "powers": list(t.powers)})
    return out


def problem_to_dict(problem):
    p = problem.point
    data = {
        "schema_version": SCHEMA_VERSION,
        "n": p.n,
        "objective": _fn_dict(p.f, with_value=False),
        "g": [_fn_dict(fd) for fd in p.g],
        "h": [_fn_dict(fd) for fd in p.h],
        "G": [_fn_dict(fd) for fd in p.G],
        "H": [_fn_dict(fd) for fd in p.H],
    }
    if problem.name:
        data["name"] = problem.name
    if problem.description:
        data["description"] = problem.description
    if problem.x is not None:
        data["x"] = [format_rational(v) for v in problem.x]
    if problem.symbolic is not None:
        s = problem.symbolic
        data["symbolic"] = {
            "f": _terms_out(s.f),
            "g": [_terms_out(t) for t in s.g],
            "h": [_terms_out(t) for t in s.h],
            "G": [_terms_out(t) for t in s.G],
            "H": [_terms_out(t) for t in s.H],
        }
    if problem.working_set is not None or problem.b is not None:
        pv = {}
        if problem.working_set is not None:
            pv["working_set"] = {k: list(v) for k, v in problem.working_set.items()}
        if problem.b is not None:
            pv["b"] = {k: [format_rational(x) for x in v] for k, v in problem.b.items()}
        data["pivot"] = pv
    if problem.labels:
        data["labels"] = dict(problem.labels)
    return data


def serialize_problem(problem):
    return json.dumps(problem_to_dict(problem), sort_keys=True, indent=2) + "\n"
