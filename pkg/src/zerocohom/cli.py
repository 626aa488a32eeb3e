"""Command line interface and the JSON input formats.

Monoid documents::

    {"elements": ["1", "g", "0"], "identity": "1", "zero": "0",
     "table": [["1", "g", "0"], ["g", "1", "0"], ["0", "0", "0"]]}

Coefficient documents have a ``kind``:

* ``{"kind": "trivial-Z"}``
* ``{"kind": "bar", "degree": 1}``
* ``{"kind": "zero-module", "group": [2], "action": {"u": [[1]], ...}}``;
  ``group`` lists invariant factors (``0`` is a copy of Z) and elements
  missing from ``action`` act as the identity only if they are the identity.
* ``{"kind": "natural-system", "objects": {"u": {"rank": 1, "relations": [[2]]}},
  "left": [{"alpha": "u", "object": "1", "matrix": [[1]]}, ...],
  "right": [{"object": "1", "beta": "u", "matrix": [[1]]}, ...]}``;
  relations are given row-major with one column per relator.

Matrix entries are integers, or decimal strings for values beyond 64 bits.
Exit status is 0 on success, 1 when a mathematical check fails and 2 for
bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Any, Sequence

from . import monoid as mon
from .cohomology import (GuardrailExceeded, NotFunctorial, cd_probe, check_dd_zero,
                         check_guardrail, cohomology_groups)
from .exactalg import GroupHom, IntMatrix, PresentedAbelianGroup
from .facnerve import nerve
from .natsys import (BadAction, MissingMap, NaturalSystem, TooLarge, ZeroModule, bar_system,
                     check_functoriality, default_battery, describe_action,
                     enumerate_zero_modules, from_zero_module, group_token, required_pairs,
                     trivial_Z, zero_module_label)
from .resolution import check_resolution_exact, psi_check, random_lift_trials

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2
DEFAULT_SEED = 20240101

COEFF_KINDS = ("trivial-Z", "bar:<n>", "zero-module:<group>:identity",
               "zero-module:<group>:zero", "zero-module:<group>:enum:<i>")


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing


def _load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _int(x: Any, where: str) -> int:
    if isinstance(x, bool):
        raise InputError(f"{where}: expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise InputError(f"{where}: expected an integer, got {x!r}")


def _matrix(data: Any, rows: int, cols: int, where: str) -> IntMatrix:
    if not isinstance(data, list) or len(data) != rows:
        raise InputError(f"{where}: expected {rows} rows")
    out = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise InputError(f"{where}: row {i} must have {cols} entries")
        out.append([_int(x, f"{where}[{i}]") for x in row])
    return IntMatrix(out, rows, cols)


def parse_monoid_document(doc: Any, where: str = "monoid") -> mon.MonoidWithZero:
    """Parse a monoid document; structural problems raise :class:`InputError`.

    Law violations (associativity, identity, zero) propagate as
    :class:`~zerocohom.monoid.MonoidError`.
    """
    if not isinstance(doc, dict):
        raise InputError(f"{where}: expected a JSON object")
    for key in ("elements", "identity", "zero", "table"):
        if key not in doc:
            raise InputError(f"{where}: missing field {key!r}")
    elements = doc["elements"]
    if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
        raise InputError(f"{where}: 'elements' must be a list of names")
    table = doc["table"]
    if not isinstance(table, list):
        raise InputError(f"{where}: 'table' must be a list of rows")
    if len(table) != len(elements):
        raise InputError(f"{where}: table has {len(table)} rows, expected {len(elements)} "
                         f"(missing row for {elements[len(table)]!r})"
                         if len(table) < len(elements) else
                         f"{where}: table has {len(table)} rows, expected {len(elements)}")
    for i, row in enumerate(table):
        if not isinstance(row, list) or len(row) != len(elements):
            raise InputError(f"{where}: table row {i} ({elements[i]!r}) must have "
                             f"{len(elements)} entries")
        for j, x in enumerate(row):
            if x not in elements:
                raise InputError(f"{where}: table[{i}][{j}] = {x!r} is not an element")
    for key in ("identity", "zero"):
        if doc[key] not in elements:
            raise InputError(f"{where}: {key} {doc[key]!r} is not an element")
    try:
        return mon.from_named_table(elements, doc["identity"], doc["zero"], table)
    except mon.TableError as exc:
        raise InputError(f"{where}: {exc}") from None


def load_monoid(spec: str) -> tuple[str, mon.MonoidWithZero]:
    if spec in mon.BUILTIN_MONOIDS:
        return spec, mon.builtin(spec)
    if not os.path.exists(spec):
        raise InputError(f"{spec!r} is neither a builtin monoid nor a file")
    return os.path.basename(spec), parse_monoid_document(_load_json(spec), spec)


def _parse_group_token(tok: str) -> list[int]:
    factors = []
    for part in tok.split("x"):
        if part == "z":
            factors.append(0)
        elif part.startswith("z") and part[1:].isdigit() and int(part[1:]) >= 2:
            factors.append(int(part[1:]))
        else:
            raise InputError(f"bad group token {tok!r}; use e.g. z, z2, z2xz4")
    return factors


def _builtin_coefficients(M: mon.MonoidWithZero, spec: str) -> NaturalSystem:
    if spec == "trivial-Z":
        return trivial_Z(M)
    if spec.startswith("bar:"):
        n = spec[4:]
        if not n.isdigit():
            raise InputError(f"bad bar degree in {spec!r}")
        return bar_system(M, int(n))
    if spec.startswith("zero-module:"):
        parts = spec.split(":")
        if len(parts) < 3:
            raise InputError(f"bad zero-module spec {spec!r}")
        factors = _parse_group_token(parts[1])
        mods = enumerate_zero_modules(M, factors, bound=1)
        kind = parts[2:]
        for i, Z in enumerate(mods):
            if kind == ["enum", str(i)] or (len(kind) == 1 and describe_action(Z) == kind[0]):
                return from_zero_module(Z, label=zero_module_label(Z, i))
        raise InputError(f"no zero-module {spec!r} on this monoid "
                         f"({len(mods)} modules on {parts[1]})")
    raise InputError(f"unknown coefficient spec {spec!r}; kinds: {', '.join(COEFF_KINDS)}")


def parse_coefficient_document(M: mon.MonoidWithZero, doc: Any,
                               where: str = "coefficients") -> NaturalSystem:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InputError(f"{where}: expected an object with a 'kind' field")
    kind = doc["kind"]
    idx = {name: i for i, name in enumerate(M.elements)}

    def element(name: Any, field: str) -> int:
        if name not in idx or idx[name] == M.zero:
            raise InputError(f"{where}: {field} {name!r} is not a nonzero element")
        return idx[name]

    if kind == "trivial-Z":
        return trivial_Z(M)
    if kind == "bar":
        return bar_system(M, _int(doc.get("degree"), f"{where}.degree"))
    if kind == "zero-module":
        factors = [_int(d, f"{where}.group") for d in doc.get("group", [])]
        if any(d < 0 or d == 1 for d in factors):
            raise InputError(f"{where}: invariant factors must be 0 or >= 2")
        A = PresentedAbelianGroup.from_invariants(factors)
        action = {}
        raw = doc.get("action", {})
        if not isinstance(raw, dict):
            raise InputError(f"{where}: 'action' must map element names to matrices")
        for name, mat in raw.items():
            action[element(name, "action key")] = _matrix(mat, A.rank, A.rank,
                                                          f"{where}.action[{name}]")
        action.setdefault(M.identity, IntMatrix.identity(A.rank))
        for s in M.nonzero:
            if s not in action:
                raise InputError(f"{where}: no action given for {M.name(s)!r}")
        label = doc.get("label") or f"zero-module:{group_token(A)}:file"
        return from_zero_module(ZeroModule(M, A, action), label=label)
    if kind == "natural-system":
        objects = doc.get("objects", {})
        value = {}
        for a in M.nonzero:
            name = M.name(a)
            if name not in objects:
                raise InputError(f"{where}: no group for object {name!r}")
            ob = objects[name]
            r = _int(ob.get("rank"), f"{where}.objects[{name}].rank")
            rel = ob.get("relations", [[] for _ in range(r)])
            ncols = len(rel[0]) if rel else 0
            value[a] = PresentedAbelianGroup(r, _matrix(rel, r, ncols,
                                                        f"{where}.objects[{name}].relations"))
        left, right = {}, {}
        for side, store in (("left", left), ("right", right)):
            for k, entry in enumerate(doc.get(side, [])):
                loc = f"{where}.{side}[{k}]"
                if side == "left":
                    al, a = element(entry.get("alpha"), "alpha"), element(entry.get("object"),
                                                                          "object")
                    src, dst = a, M.mul(al, a)
                    key = (al, a)
                else:
                    a, be = element(entry.get("object"), "object"), element(entry.get("beta"),
                                                                            "beta")
                    src, dst = a, M.mul(a, be)
                    key = (a, be)
                if dst == M.zero:
                    raise InputError(f"{loc}: product is zero")
                store[key] = GroupHom(value[src], value[dst],
                                      _matrix(entry.get("matrix"), value[dst].rank,
                                              value[src].rank, f"{loc}.matrix"))
        lefts, rights = required_pairs(M)
        for al, a in lefts:
            if (al, a) not in left and al == M.identity:
                left[al, a] = GroupHom.identity(value[a])
        for a, be in rights:
            if (a, be) not in right and be == M.identity:
                right[a, be] = GroupHom.identity(value[a])
        D = NaturalSystem(M, value, left, right, label=doc.get("label", "natural-system"))
        try:
            bad = check_functoriality(D)
        except MissingMap as exc:
            raise InputError(f"{where}: {exc.args[0]}") from None
        if bad:
            raise InputError(f"{where}: not a natural system: " + "; ".join(map(str, bad[:5])))
        return D
    raise InputError(f"{where}: unknown kind {kind!r}")


def load_coefficients(M: mon.MonoidWithZero, spec: str) -> NaturalSystem:
    if os.path.exists(spec) and spec.endswith(".json"):
        return parse_coefficient_document(M, _load_json(spec), spec)
    return _builtin_coefficients(M, spec)


# ---------------------------------------------------------------------------
# output


def _emit(args, text_lines: list[str], payload: dict) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(text_lines))


def _timing(args, start: float) -> None:
    # timing goes to stderr so that stdout stays byte-identical across runs
    print(f"time: {time.perf_counter() - start:.3f}s", file=sys.stderr)


def _tuple_names(M, tup) -> str:
    return "(" + ", ".join(M.name(a) for a in tup) + ")"


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    try:
        name, M = load_monoid(args.monoid)
    except mon.MonoidError as exc:
        kind = type(exc).__name__
        _emit(args, [f"invalid: {kind}: {exc}"],
              {"valid": False, "error": kind, "message": str(exc),
               "witness": list(getattr(exc, "witness", ()) or ())
               if not isinstance(getattr(exc, "witness", None), str)
               else [exc.witness]})
        return EXIT_FAILED
    _emit(args, [f"valid: {name} ({M.size} elements, commutative: "
                 f"{'yes' if M.is_commutative() else 'no'})"],
          {"valid": True, "monoid": name, "size": M.size, "commutative": M.is_commutative()})
    return EXIT_OK


def cmd_nerve(args) -> int:
    name, M = load_monoid(args.monoid)
    check_guardrail(M, args.max_degree, args.force)
    sizes = [len(nerve(M, n)) for n in range(args.max_degree + 1)]
    lines = [f"monoid: {name}"] + [f"|Ner_{n}| = {s}" for n, s in enumerate(sizes)]
    payload: dict = {"monoid": name, "sizes": sizes}
    if args.list:
        payload["tuples"] = {}
        for n in range(args.max_degree + 1):
            tups = [_tuple_names(M, t) for t in nerve(M, n)]
            lines.append(f"Ner_{n}: " + " ".join(tups))
            payload["tuples"][str(n)] = tups
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_cohomology(args) -> int:
    start = time.perf_counter()
    name, M = load_monoid(args.monoid)
    check_guardrail(M, args.max_degree, args.force)
    D = load_coefficients(M, args.coeff)
    groups = cohomology_groups(M, D, args.max_degree)
    sizes = [len(nerve(M, n)) for n in range(args.max_degree + 1)]
    lines = [f"monoid: {name} ({M.size} elements)", f"coefficients: {D.label}",
             "|Ner_n|: " + " ".join(map(str, sizes))]
    lines += [f"H^{n} = {h}" for n, h in enumerate(groups)]
    _emit(args, lines, {"monoid": name, "coefficients": D.label, "nerve_sizes": sizes,
                        "cohomology": [h.to_json() for h in groups],
                        "cohomology_text": [str(h) for h in groups]})
    _timing(args, start)
    return EXIT_OK


def cmd_cd_probe(args) -> int:
    start = time.perf_counter()
    name, M = load_monoid(args.monoid)
    check_guardrail(M, args.max_degree, args.force)
    if args.battery != "default":
        raise InputError(f"unknown battery {args.battery!r}")
    battery = default_battery(M)
    report = cd_probe(M, battery, args.max_degree, name)
    lines = [f"monoid: {name}", f"battery: {len(battery)} coefficient systems "
             f"(default: trivial-Z, zero-modules on Z/2 and Z/3, bar:0, bar:1)"]
    for coeff, n, h in report.table:
        lines.append(f"H^{n}({coeff}) = {h}")
    lines.append(report.verdict())
    _emit(args, lines, {
        "monoid": name, "max_degree": args.max_degree, "evidence_only": True,
        "table": [{"coefficients": c, "degree": n, "group": h.to_json(), "text": str(h)}
                  for c, n, h in report.table],
        "top_nonvanishing_degree": report.top_degree,
        "verdict": report.verdict(),
    })
    _timing(args, start)
    return EXIT_OK


def cmd_resolution_check(args) -> int:
    start = time.perf_counter()
    name, M = load_monoid(args.monoid)
    check_guardrail(M, args.max_degree, args.force)
    failure = check_resolution_exact(M, args.max_degree)
    trials = random_lift_trials(M, args.lift_trials, args.seed) if args.lift_trials else []
    lifts_ok = all(t.factors and t.natural for t in trials)
    lines = [f"monoid: {name}",
             f"augmented bar complex exact at positions 0..{args.max_degree - 1}: "
             + ("yes" if failure is None else f"NO - {failure}")]
    if trials:
        lines.append(f"lifting through random epis: {sum(t.factors and t.natural for t in trials)}"
                     f"/{len(trials)} ok (seed {args.seed})")
    ok = failure is None and lifts_ok
    _emit(args, lines, {"monoid": name, "exact": failure is None,
                        "failure": None if failure is None else str(failure),
                        "lift_trials": len(trials), "lifts_ok": lifts_ok, "seed": args.seed,
                        "ok": ok})
    _timing(args, start)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_psi_check(args) -> int:
    start = time.perf_counter()
    name, M = load_monoid(args.monoid)
    check_guardrail(M, args.max_degree, args.force)
    D = load_coefficients(M, args.coeff)
    reports = psi_check(M, D, args.max_degree)
    lines = [f"monoid: {name}", f"coefficients: {D.label}"]
    rows = []
    for r in reports:
        lines.append(
            f"degree {r.degree}: Hom = {r.hom_invariants}, C = {r.cochain_invariants}, "
            f"iso {'yes' if r.left_inverse and r.right_inverse else 'NO'}, "
            f"chain map {'yes' if r.chain_map else 'NO'}, "
            f"H(Hom) = {r.hom_cohomology}, H(C) = {r.cochain_cohomology}")
        rows.append({"degree": r.degree, "hom": r.hom_invariants.to_json(),
                     "cochains": r.cochain_invariants.to_json(),
                     "injective": r.left_inverse, "surjective": r.right_inverse,
                     "chain_map": r.chain_map, "well_defined": r.well_defined,
                     "hom_cohomology": r.hom_cohomology.to_json(),
                     "cochain_cohomology": r.cochain_cohomology.to_json(), "ok": r.ok})
    ok = all(r.ok for r in reports)
    lines.append("all checks passed" if ok else "CHECK FAILED")
    _emit(args, lines, {"monoid": name, "coefficients": D.label, "degrees": rows, "ok": ok})
    _timing(args, start)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_zero_cancellative(args) -> int:
    name, M = load_monoid(args.monoid)
    ok, w = mon.is_zero_cancellative(M)
    if ok:
        _emit(args, [f"{name}: 0-cancellative"], {"monoid": name, "zero_cancellative": True})
    else:
        _emit(args, [f"{name}: not 0-cancellative: {w.describe(M)}"],
              {"monoid": name, "zero_cancellative": False,
               "witness": {"a": M.name(w.a), "b": M.name(w.b), "x": M.name(w.x),
                           "side": w.side}})
    return EXIT_OK


def cmd_dd_check(args) -> int:
    name, M = load_monoid(args.monoid)
    check_guardrail(M, args.max_degree, args.force)
    D = load_coefficients(M, args.coeff)
    bad = check_dd_zero(M, D, args.max_degree)
    if bad is None:
        _emit(args, [f"delta delta = 0 up to degree {args.max_degree}"], {"ok": True})
        return EXIT_OK
    _emit(args, [f"delta^{bad.degree} delta^{bad.degree - 1} != 0 at row "
                 f"{_tuple_names(M, bad.row_tuple)}, column {_tuple_names(M, bad.column_tuple)}"],
          {"ok": False, "degree": bad.degree})
    return EXIT_FAILED


def list_builtins() -> str:
    lines = ["monoids:"]
    for name, f in mon.BUILTIN_MONOIDS.items():
        M = f()
        lines.append(f"  {name}: {{{', '.join(M.elements)}}}")
    lines.append("coefficients:")
    lines.extend(f"  {k}" for k in COEFF_KINDS)
    return "\n".join(lines)


COMMANDS = {
    "validate": cmd_validate,
    "nerve": cmd_nerve,
    "cohomology": cmd_cohomology,
    "cd-probe": cmd_cd_probe,
    "resolution-check": cmd_resolution_check,
    "psi-check": cmd_psi_check,
    "zero-cancellative": cmd_zero_cancellative,
    "dd-check": cmd_dd_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zerocohom",
        description="Cohomology of finite monoids with zero with natural-system coefficients.")
    parser.add_argument("--list-builtins", action="store_true",
                        help="list builtin monoids and coefficient names")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--monoid", required=True, help="builtin name or JSON file")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--force", action="store_true", help="skip size guardrails")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub = parser.add_subparsers(dest="command")

    def add(name, help_, coeff=False, degree=None):
        p = sub.add_parser(name, parents=[common], help=help_)
        if coeff:
            p.add_argument("--coeff", default="trivial-Z", help="builtin name or JSON file")
        if degree is not None:
            p.add_argument("--max-degree", type=int, default=degree)
        return p

    add("validate", "check the monoid laws")
    add("nerve", "nerve sizes", degree=3).add_argument("--list", action="store_true")
    add("cohomology", "H^0 .. H^N", coeff=True, degree=2)
    add("cd-probe", "cohomological dimension evidence", degree=3).add_argument(
        "--battery", default="default")
    add("resolution-check", "exactness of the bar resolution", degree=3).add_argument(
        "--lift-trials", type=int, default=0,
        help="also lift this many random maps through random epis")
    add("psi-check", "compare the Hom complex with the cochain complex", coeff=True, degree=2)
    add("zero-cancellative", "0-cancellativity with a witness")
    add("dd-check", "verify delta delta = 0", coeff=True, degree=3)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list_builtins:
        print(list_builtins())
        return EXIT_OK
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_INPUT
    if getattr(args, "max_degree", 0) < 0:
        print("error: --max-degree must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args)
    except (InputError, GuardrailExceeded, NotFunctorial, BadAction, TooLarge,
            mon.MonoidError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
