"""JSON formats for spaces, scales, metric groups, amalgam setups, words and HNN data.

Rationals are always strings ``"p/q"`` (or integers); floats are rejected.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .amalgam import AmalgamSetup, build_multi_setup, subgroup_as_group
from .groups import FiniteGroup
from .metrics import InvariantUltrametric, NormalChain, metric_from_chain
from .rationals import format_rational, parse_rational
from .scaled import ScaledSpace, plain
from .scales import linear_scale, step_scale
from .spaces import ULTRAMETRIC, FiniteSpace, add_formal_inverses, inverse_name


class FormatError(ValueError):
    """An input file does not follow its schema."""


def load_json(path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: {exc}") from exc


def dump(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True)


def to_jsonable(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def _need(data: dict, key: str, where: str):
    if not isinstance(data, dict) or key not in data:
        raise FormatError(f"{where}: missing {key!r}")
    return data[key]


# -- spaces --------------------------------------------------------------------

def read_raw_space(data: dict) -> FiniteSpace:
    """The space exactly as listed, without formal inverses."""
    points = _need(data, "points", "space")
    table = _need(data, "distances", "space")
    try:
        return FiniteSpace.from_table(points, table, data.get("mode", ULTRAMETRIC), data.get("basepoint", "e"),
                                      data.get("inverses"))
    except (ValueError, KeyError, TypeError) as exc:
        raise FormatError(f"space: {exc}") from exc


def read_space(data: dict) -> FiniteSpace:
    """``{"points": [...], "distances": [[...]], "mode": ..., "basepoint": "e", "symmetric": bool}``.

    Without ``"symmetric": true`` the space gets formal inverses ``x^-1``.
    """
    space = read_raw_space(data)
    if data.get("symmetric"):
        if space.inv is None:
            raise FormatError("space: symmetric spaces need an 'inverses' list")
        return space
    return add_formal_inverses(space)


def read_scaled(data: dict) -> ScaledSpace:
    """A space plus an optional ``"scale"``: ``{"linear": {point: factor}}`` or ``{"step": {...}}``."""
    space = read_space(data)
    sc = data.get("scale")
    if sc is None:
        return plain(space)
    try:
        if "linear" in sc:
            return ScaledSpace(space, linear_scale([_lookup(sc["linear"], p, 1) for p in space.points]))
        if "step" in sc:
            st = sc["step"]
            zero = ["0"] * len(st["thresholds"])
            rows = [_lookup(st["values"], p, zero) for p in space.points]
            return ScaledSpace(space, step_scale(st["thresholds"], rows))
    except (ValueError, KeyError, TypeError) as exc:
        raise FormatError(f"scale: {exc}") from exc
    raise FormatError("scale: expected 'linear' or 'step'")


def _lookup(table: dict, point: str, default):
    # x^-1 shares the scale of x unless listed itself
    return table.get(point, table.get(inverse_name(point), default))


def read_free_word(data, space: FiniteSpace) -> tuple:
    if isinstance(data, dict):
        data = _need(data, "word", "word")
    try:
        return tuple(space.index(t) for t in data)
    except (KeyError, ValueError) as exc:
        raise FormatError(f"word: {exc}") from exc


# -- groups and metrics --------------------------------------------------------

def read_group(data: dict) -> FiniteGroup:
    """``{"degree": n, "generators": ["(12)", ...]}`` or ``{"table": [[...]], "labels": [...]}``."""
    try:
        if "generators" in data:
            return FiniteGroup.from_permutations(data["generators"], int(data["degree"]))
        if "table" in data:
            return FiniteGroup.from_table(data["table"], data.get("labels"))
    except (ValueError, KeyError, TypeError) as exc:
        raise FormatError(f"group: {exc}") from exc
    raise FormatError("group: expected 'generators' or 'table'")


def read_metric(data: dict) -> InvariantUltrametric:
    """``{"group": {...}, "chain": {"subgroups": [[gens]...], "values": [...]}}`` or ``"norm"`` / ``"table"``."""
    g = read_group(_need(data, "group", "metric"))
    try:
        if "chain" in data:
            ch = data["chain"]
            subs = [g.generated([g.element(x) for x in gens]) for gens in ch["subgroups"]]
            return metric_from_chain(g, NormalChain(subs, [parse_rational(v) for v in ch["values"]]),
                                     check_normal=False)
        if "norm" in data:
            norm = [Fraction(0)] * g.order
            for lab, v in data["norm"].items():
                norm[g.element(lab)] = parse_rational(v)
            return InvariantUltrametric.from_norm(g, norm)
        if "table" in data:
            return InvariantUltrametric.from_table(g, data["table"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"metric: {exc}") from exc
    raise FormatError("metric: expected 'chain', 'norm' or 'table'")


def read_setup(data: dict) -> AmalgamSetup:
    """``{"factors": {"G": metric, "H": metric}, "A": {"G": [...], "H": [...]}}``.

    The ``A`` lists give the common subgroup elementwise: the ``k``-th entries
    of all lists are identified.
    """
    factors = _need(data, "factors", "setup")
    a_block = _need(data, "A", "setup")
    names = list(factors)
    metrics = [read_metric(factors[n]) for n in names]
    try:
        first = [metrics[0].group.element(x) for x in a_block[names[0]]]
        a_group, incl = subgroup_as_group(metrics[0].group, first)
        order = {x: i for i, x in enumerate(first)}
        embeddings = []
        for n, m in zip(names, metrics):
            listed = [m.group.element(x) for x in a_block[n]]
            embeddings.append([listed[order[x]] for x in incl])
    except (KeyError, TypeError, IndexError) as exc:
        raise FormatError(f"setup A block: {exc}") from exc
    return build_multi_setup(metrics, a_group, embeddings, names)


def read_pword(data, setup: AmalgamSetup) -> list:
    """``[{"side": "G", "elem": "(12)"}, ...]`` or ``["G:(12)", ...]``."""
    if isinstance(data, dict):
        data = _need(data, "word", "word")
    out = []
    try:
        for item in data:
            if isinstance(item, str):
                side_name, _, elem = item.partition(":")
                item = {"side": side_name, "elem": elem}
            side = setup.names.index(item["side"])
            out.append(setup.letter(side, setup.factors[side].parse(item["elem"])))
    except (KeyError, ValueError, TypeError) as exc:
        raise FormatError(f"word: {exc}") from exc
    return out


def word_source(arg: str):
    """A word argument is a JSON file path, or else whitespace-separated tokens."""
    path = Path(arg)
    if path.suffix == ".json" or path.is_file():
        return load_json(path)
    return arg.split()


def write_pword(word, setup: AmalgamSetup) -> list:
    return [{"side": setup.names[s], "elem": setup.factors[s].label(x)} for s, x in word]


def read_hnn(data: dict):
    """``{"metric": {...}, "A": [...], "B": [...], "phi": [[a, b], ...], "K": "1"}``."""
    from .hnn import build_hnn
    m = read_metric(_need(data, "metric", "hnn"))
    g = m.group
    try:
        a = g.generated([g.element(x) for x in data.get("A", [])]) if data.get("A") else (g.identity,)
        b = g.generated([g.element(x) for x in data.get("B", [])]) if data.get("B") else (g.identity,)
        phi = {g.element(x): g.element(y) for x, y in data.get("phi", [])}
        phi.setdefault(g.identity, g.identity)
        k = parse_rational(_need(data, "K", "hnn"))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"hnn: {exc}") from exc
    return build_hnn(m, a, b, _close_phi(g, phi), k)


def _close_phi(g: FiniteGroup, phi: dict) -> dict:
    """Extend a map given on generators to the generated subgroup (multiplicatively)."""
    out = dict(phi)
    frontier = list(out)
    while frontier:
        x = frontier.pop()
        for y in list(out):
            z = g.mul(x, y)
            if z not in out:
                out[z] = g.mul(out[x], out[y])
                frontier.append(z)
    return out
