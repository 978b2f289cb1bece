"""Command-line front end.

Flag indices (mutation words, targets, arc endpoints) are 1-based; JSON files
use the 0-based library serializations. Exit codes: 0 success, 1 bad input
(usage, malformed JSON, domain errors), 2 a violated identity or a failing
verification suite.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cluster import f_polynomial
from .errors import DomainError
from .polygon import (
    DiskLamination,
    MarkedArcSet,
    Triangulation,
    all_triangulations,
    chord,
    deform_endpoints,
    exchange_from_triangulation,
    is_side,
    msw_g_vector,
    normalize_doubled,
    perfect_matchings,
    snake_graph,
)
from .quantum import arc_data, ia_classical, ia_q, id_classical, id_q, psi_truncated, quantum_arc_data
from .seed import CompatiblePair, Seed, mutate_integer_matrix, mutate_pair, mutate_word
from .tropical import TropPoint, trop_mutate
from .verify import LEVELS, SUITES, run_all, run_suite


class UsageError(Exception):
    pass


class MalformedInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: {exc}") from exc


def _indices(text: str, name: str) -> list[int]:
    """'1,2,1' -> [0, 1, 0]."""
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise UsageError(f"--{name} expects comma-separated integers") from exc
    if any(v < 1 for v in values):
        raise UsageError(f"--{name} indices are 1-based")
    return [v - 1 for v in values]


def _parse(fn, data, what: str):
    try:
        return fn(data)
    except DomainError:
        raise
    except (KeyError, TypeError, ValueError, IndexError, ZeroDivisionError) as exc:
        raise MalformedInput(f"{what}: {exc}") from exc


def _triangulation(args) -> Triangulation:
    if args.tri is None:
        return Triangulation.fan(args.n)
    T = _parse(Triangulation.from_json, _read_json(args.tri), "triangulation")
    if args.n is not None and T.n != args.n:
        raise UsageError(f"--n {args.n} does not match the triangulation on {T.n} points")
    return T


def _lamination(path: str, n: int) -> MarkedArcSet:
    """Arc systems are read directly; curve laminations are deformed onto arcs."""
    data = _read_json(path)
    if isinstance(data, dict) and "curves" in data:
        lam = _parse(lambda d: DiskLamination.from_json(d, n), data, "lamination")
        if not lam.has_integral_parity():
            raise DomainError("a0_parity", "a boundary segment has odd total endpoint weight")
        if not lam.satisfies_a0():
            raise DomainError("a0_condition", "boundary segment sums do not vanish")
        return deform_endpoints(lam)
    arcs = _parse(MarkedArcSet.from_json, data, "arc system")
    if arcs.n != n:
        raise UsageError(f"lamination lives on {arcs.n} points, not {n}")
    return arcs


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


# subcommands

def cmd_seed_mutate(args) -> int:
    data = _read_json(args.input)
    word = _indices(args.word, "word")
    if isinstance(data, dict) and "lambda" in data:
        pair = _parse(CompatiblePair.from_json, data, "compatible pair")
        for k in word:
            pair = mutate_pair(pair, k)
        _emit(pair.to_json())
        return 0
    seed = _parse(Seed.from_json, data, "seed")
    _emit(mutate_word(seed, word).to_json())
    return 0


def cmd_cluster_fpoly(args) -> int:
    seed = _parse(Seed.from_json, _read_json(args.seed), "seed")
    word = _indices(args.word, "word")
    (target,) = _indices(str(args.target), "target")
    if target >= seed.m:
        raise UsageError(f"--target {args.target} exceeds the rank {seed.m}")
    F, g = f_polynomial(seed, word, target)
    _emit({"F": F.to_json(), "g": list(g)})
    return 0


def _eps_for_point(args, data) -> list[list[int]]:
    if args.seed is not None:
        return [list(r) for r in _parse(Seed.from_json, _read_json(args.seed), "seed").eps]
    if args.tri is not None:
        T = _parse(Triangulation.from_json, _read_json(args.tri), "triangulation")
        return [list(r) for r in exchange_from_triangulation(T).eps]
    if isinstance(data, dict) and "eps" in data:
        return data["eps"]
    raise UsageError("give --seed or --tri, or an 'eps' entry in the point file")


def cmd_tropical_mutate(args) -> int:
    data = _read_json(args.point)
    if isinstance(data, dict) and "type" not in data:
        data = dict(data, type=args.type)
    pt = _parse(TropPoint.from_json, data, "tropical point")
    if pt.kind != args.type:
        raise UsageError(f"point has type {pt.kind}, --type says {args.type}")
    eps = _eps_for_point(args, data)
    size = len(pt.coords) // 2 if pt.kind == "d" else len(pt.coords)
    if size > len(eps):
        raise UsageError("point has more coordinates than the exchange matrix")
    eps = [list(r[:size]) for r in eps[:size]]
    for k in _indices(args.word, "word"):
        if k >= size:
            raise UsageError(f"mutation index {k + 1} out of range")
        pt = trop_mutate(pt, k, eps)
        eps = [list(r) for r in mutate_integer_matrix(eps, k)]
    _emit(pt.to_json())
    return 0


def _arc(args, n: int):
    u, v = _indices(args.arc, "arc")
    if not (u < n and v < n) or u == v or is_side(chord(u, v), n):
        raise UsageError(f"--arc {args.arc} is not a diagonal of the {n}-gon")
    return chord(u, v)


def cmd_polygon_snake(args) -> int:
    T = _triangulation(args)
    c = _arc(args, T.n)
    if T.has_edge(c):
        _emit({"arc": list(c), "tiles": [], "matchings": 1, "g": list(arc_data(T, c)[1]), "F": arc_data(T, c)[0].to_json()})
        return 0
    G = snake_graph(T, c)
    F, g = arc_data(T, c)
    _emit({
        "arc": list(c),
        "tiles": [list(tile.diagonal) for tile in G.tiles],
        "matchings": len(perfect_matchings(G)),
        "g": list(msw_g_vector(T, c)),
        "F": F.to_json(),
    })
    return 0


def cmd_polygon_count(args) -> int:
    _emit({"n": args.n, "triangulations": len(all_triangulations(args.n))})
    return 0


def cmd_duality_ia(args) -> int:
    T = _triangulation(args)
    lam = _lamination(args.lam, T.n)
    if args.quantum:
        x = ia_q(lam, T)
        _emit({"coeff_ring": "Z[q,q^-1]", "q": "w^4", "terms": x.to_json()})
        return 0
    r = ia_classical(lam, T)
    _emit({"coeff_ring": "Z", "terms": r.as_laurent().to_json()})
    return 0


def cmd_duality_id(args) -> int:
    T = _triangulation(args)
    C, C_mirror = normalize_doubled(_lamination(args.lam, T.n), _lamination(args.mirror, T.n))
    form = id_q(C, C_mirror, T) if args.quantum else id_classical(C, C_mirror, T)
    _emit(form.to_json())
    return 0


def cmd_quantum_psi(args) -> int:
    if not 1 <= args.order <= 16:
        raise UsageError("--order must lie in 1..16")
    s = psi_truncated(args.order, args.inverse)
    _emit({"order": args.order, "inverse": args.inverse, "den": s.den.to_json(), "num": s.num.to_json()})
    return 0


def cmd_quantum_fpoly(args) -> int:
    T = _triangulation(args)
    c = _arc(args, T.n)
    F, g = quantum_arc_data(T, c)
    _emit({"F": F.to_json(), "g": list(g), "at_one": F.at_one().to_json()})
    return 0


def cmd_verify(args) -> int:
    if args.suite == "all":
        results = run_all(args.level, args.seed, args.trials)
    else:
        if args.suite not in SUITES:
            raise UsageError(f"unknown suite {args.suite!r}; choose from all, {', '.join(sorted(SUITES))}")
        results = [run_suite(args.suite, args.level, args.seed, args.trials)]
    for r in results:
        print(json.dumps(r.to_json(), sort_keys=True) if args.json else r.line())
    return 0 if all(r.passed for r in results) else 2


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="clusterdual", description="Cluster mutation, tropical points and duality maps.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    seed = sub.add_parser("seed").add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = seed.add_parser("mutate", help="mutate a seed or compatible pair along a word")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--word", required=True)
    s.set_defaults(func=cmd_seed_mutate)

    cluster = sub.add_parser("cluster").add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = cluster.add_parser("fpoly", help="F-polynomial and g-vector of a cluster variable")
    s.add_argument("--seed", required=True)
    s.add_argument("--word", required=True)
    s.add_argument("--target", required=True, type=int)
    s.set_defaults(func=cmd_cluster_fpoly)

    tropical = sub.add_parser("tropical").add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = tropical.add_parser("mutate", help="tropical mutation of an a, x or d point")
    s.add_argument("--type", required=True, choices=("a", "x", "d"))
    s.add_argument("--point", required=True)
    s.add_argument("--word", required=True)
    s.add_argument("--seed")
    s.add_argument("--tri")
    s.set_defaults(func=cmd_tropical_mutate)

    polygon = sub.add_parser("polygon").add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = polygon.add_parser("snake", help="snake graph of an arc")
    s.add_argument("--n", type=int)
    s.add_argument("--tri")
    s.add_argument("--arc", required=True)
    s.set_defaults(func=cmd_polygon_snake)
    s = polygon.add_parser("count", help="number of triangulations")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_polygon_count)

    duality = sub.add_parser("duality").add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = duality.add_parser("ia", help="duality function of an arc system or lamination")
    s.add_argument("--n", type=int)
    s.add_argument("--tri")
    s.add_argument("--lam", required=True)
    s.add_argument("--quantum", action="store_true")
    s.add_argument("--order", type=int, help="accepted for compatibility; expansions are exact")
    s.set_defaults(func=cmd_duality_ia)
    s = duality.add_parser("id", help="canonical form of a doubled lamination")
    s.add_argument("--n", type=int)
    s.add_argument("--tri")
    s.add_argument("--lam", required=True)
    s.add_argument("--mirror", required=True)
    s.add_argument("--quantum", action="store_true")
    s.set_defaults(func=cmd_duality_id)

    quantum = sub.add_parser("quantum").add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = quantum.add_parser("psi", help="truncated quantum dilogarithm")
    s.add_argument("--order", type=int, default=8)
    s.add_argument("--inverse", action="store_true")
    s.set_defaults(func=cmd_quantum_psi)
    s = quantum.add_parser("fpoly", help="quantum F-polynomial of an arc")
    s.add_argument("--n", type=int)
    s.add_argument("--tri")
    s.add_argument("--arc", required=True)
    s.set_defaults(func=cmd_quantum_fpoly)

    s = sub.add_parser("verify", help="run verification suites")
    s.add_argument("suite", help="a suite name or 'all'")
    s.add_argument("--level", default="desk", choices=LEVELS)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_verify)
    return p


def _fail(code: str, detail: str, status: int) -> int:
    print(json.dumps({"error": code, "detail": detail}), file=sys.stderr)
    return status


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "n", None) is None and getattr(args, "tri", None) is None and \
                args.command in ("polygon", "duality", "quantum") and args.action != "psi":
            raise UsageError("give --n or --tri")
        return args.func(args)
    except UsageError as exc:
        return _fail("usage", str(exc), 1)
    except MalformedInput as exc:
        return _fail("malformed_json", str(exc), 1)
    except DomainError as exc:
        return _fail(exc.code, exc.detail, 1)
    except AssertionError as exc:
        return _fail("identity_violation", f"{type(exc).__name__}: {exc}", 2)
    except (ValueError, IndexError) as exc:
        return _fail("invalid_input", str(exc), 1)


if __name__ == "__main__":
    sys.exit(main())
