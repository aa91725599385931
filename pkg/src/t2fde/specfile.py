"""Problem files: a small TOML document describing one initial value problem.

Example::

    [equation]
    a = { mode = "plus", k = 3 }
    b = { mode = "plus", k = 0 }

    [init]
    y0  = [3.5, 4, 4.5, 5, 5.5, 6, 6.5]
    dy0 = [-0.5, 0, 0.5, 1, 1.5, 2, 2.5]

    [grid]
    alpha_count = 31
    beta_count = 21

    [solve]
    x_end = 1.0
    dx = 1e-3
    samples = 21
    form = "auto"
    backend = "rk4"

Every problem with the file, syntactic or semantic, raises SpecParseError
carrying the line (and, when known, column) of the offending entry.
"""
from __future__ import annotations

import re
import sys
from importlib import resources
from pathlib import Path

from .errors import SpecParseError
from .ivp import ProblemSpec, TermMode, parse_form
from .t1 import AlphaGrid
from .t2 import BetaGrid, TriangularQT2

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

KNOWN = {
    "equation": {"a", "b"},
    "init": {"y0", "dy0"},
    "grid": {"alpha_count", "beta_count"},
    "solve": {"x_end", "dx", "samples", "form", "backend"},
}
BACKENDS = {"rk4": "rk4", "closed": "closed_form", "closed_form": "closed_form"}


def _locate(text: str, table: str, key: str = None):
    """Line and column of ``key`` inside ``[table]`` (1-based), or of the header."""
    lines = text.splitlines()
    current = None
    header_line = None
    for n, line in enumerate(lines, 1):
        stripped = line.strip()
        m = re.match(r"\[\s*([A-Za-z0-9_.-]+)\s*\]", stripped)
        if m:
            current = m.group(1)
            if current == table:
                header_line = n
            continue
        if current == table and key is not None:
            m = re.match(r"(\s*)" + re.escape(key) + r"\s*=", line)
            if m:
                return n, len(m.group(1)) + 1
    if header_line is not None:
        return header_line, 1
    return None, None


def _fail(text, msg, table, key=None):
    line, col = _locate(text, table, key)
    raise SpecParseError(msg, line, col)


def _number(text, table, key, value, *, integer=False):
    ok = isinstance(value, int) if integer else isinstance(value, (int, float))
    if isinstance(value, bool) or not ok:
        kind = "an integer" if integer else "a number"
        _fail(text, f"{table}.{key} must be {kind}, got {value!r}", table, key)
    return value


def _term(text, key, raw) -> TermMode:
    if not isinstance(raw, dict) or set(raw) != {"mode", "k"}:
        _fail(text, f"equation.{key} must be a table with keys mode and k", "equation", key)
    k = _number(text, "equation", key, raw["k"])
    try:
        return TermMode(raw["mode"], float(k))
    except ValueError as exc:
        _fail(text, f"equation.{key}: {exc}", "equation", key)


def _shape(text, key, raw) -> TriangularQT2:
    if not isinstance(raw, list) or len(raw) != 7:
        _fail(text, f"init.{key} must be an array of 7 numbers", "init", key)
    for v in raw:
        _number(text, "init", key, v)
    try:
        return TriangularQT2(*(float(v) for v in raw))
    except ValueError as exc:
        _fail(text, f"init.{key}: {exc}", "init", key)


def parse_spec(text: str) -> ProblemSpec:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise SpecParseError(getattr(exc, "msg", str(exc)), getattr(exc, "lineno", None), getattr(exc, "colno", None)) from None

    for table, body in doc.items():
        if table not in KNOWN or not isinstance(body, dict):
            _fail(text, f"unknown top-level entry {table!r}", table)
        for key in body:
            if key not in KNOWN[table]:
                _fail(text, f"unknown key {table}.{key}", table, key)
    for table, required in (("equation", ("a", "b")), ("init", ("y0", "dy0"))):
        for key in required:
            if key not in doc.get(table, {}):
                raise SpecParseError(f"missing required key {table}.{key}", *_locate(text, table))

    eq, init = doc["equation"], doc["init"]
    grid, sol = doc.get("grid", {}), doc.get("solve", {})
    kw = {}
    for key, cls in (("alpha_count", AlphaGrid), ("beta_count", BetaGrid)):
        if key in grid:
            n = _number(text, "grid", key, grid[key], integer=True)
            try:
                kw["agrid" if cls is AlphaGrid else "bgrid"] = cls(n)
            except ValueError as exc:
                _fail(text, f"grid.{key}: {exc}", "grid", key)
    for key in ("x_end", "dx"):
        if key in sol:
            kw[key] = float(_number(text, "solve", key, sol[key]))
    if "samples" in sol:
        kw["samples"] = _number(text, "solve", "samples", sol["samples"], integer=True)
    if "form" in sol:
        try:
            kw["form"] = parse_form(str(sol["form"]))
        except ValueError as exc:
            _fail(text, f"solve.form: {exc}", "solve", "form")
    if "backend" in sol:
        if sol["backend"] not in BACKENDS:
            _fail(text, f"solve.backend must be rk4 or closed, got {sol['backend']!r}", "solve", "backend")
        kw["backend"] = BACKENDS[sol["backend"]]

    a, b = _term(text, "a", eq["a"]), _term(text, "b", eq["b"])
    U, V = _shape(text, "y0", init["y0"]), _shape(text, "dy0", init["dy0"])
    try:
        return ProblemSpec(a, b, U, V, **kw)
    except ValueError as exc:
        raise SpecParseError(str(exc), *_locate(text, "solve")) from None


def load_spec(path) -> ProblemSpec:
    """Parse a problem file; ``bundled:NAME`` reads one of the shipped problems."""
    path = str(path)
    if path.startswith("bundled:"):
        return parse_spec(bundled_text(path.split(":", 1)[1]))
    return parse_spec(Path(path).read_text(encoding="utf-8"))


def bundled_text(name: str) -> str:
    if not name.endswith(".toml"):
        name += ".toml"
    return resources.files("t2fde").joinpath("problems", name).read_text(encoding="utf-8")
