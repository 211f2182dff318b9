"""Command-line front end: JSON workspaces in, deterministic JSON reports out.

Usage::

    opcal WORKSPACE.json                      # run the workspace's command list
    opcal WORKSPACE.json check operad Com --bound 4
"""

import argparse
import json
import os
import shlex
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import base_cat as bc
from .algebras import (
    AlgebraStructure,
    adjunction_bijection,
    check_algebra,
    free_algebra,
    monoid_algebra,
    nullary_algebra,
    terminal_algebra,
    word_algebra,
)
from .collection import Collection, ColorFamily, ColorMap, pullback, pushforward_sum
from .composition import (
    compose,
    lax_pullback_comparison,
    pushforward_monoidal_comparison,
)
from .endomorphism import (
    algebra_map_correspondence,
    cartesian_operad,
    compare_cartesian,
    endomorphism_operad,
)
from .groupoids import CompositionIndex, Corolla, all_corollas, sort_corolla, transposition
from .operads import (
    Operad,
    associative_operad,
    check_descent,
    check_operad,
    commutative_operad,
    enumerate_operad_maps,
    free_operad,
    generator_collection,
    pullback_operad,
    pushforward_operad,
)


class ParseError(ValueError):
    pass


class ValidationError(ValueError):
    pass


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# JSON helpers


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def dumps(report):
    return json.dumps(_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False)


def _rational(s):
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise ValidationError(f"bad rational {s!r}") from e


def _corolla(entry, colors):
    try:
        c = Corolla(tuple(entry["inputs"]), entry["output"])
    except (KeyError, TypeError) as e:
        raise ValidationError(f"corolla needs inputs and output: {entry!r}") from e
    for x in c.inputs + (c.output,):
        if x not in colors:
            raise ValidationError(f"unknown color {x!r} in {c}")
    return c


# ---------------------------------------------------------------------------
# workspace


class Workspace:
    """Parsed and validated definitions.

    Every named object is built eagerly so reference and law errors show
    up at load time.
    """

    def __init__(self, data):
        if not isinstance(data, dict):
            raise ValidationError("workspace must be a JSON object")
        self.base = data.get("base", bc.FINSET)
        if self.base not in (bc.FINSET, bc.VECTQ):
            raise ValidationError(f"unknown base {self.base!r}")
        self.colors = tuple(data.get("colors", ["a"]))
        self.families = {}
        self.set_families = {}
        self.collections = {}
        self.operads = {}
        self.algebras = {}
        self.color_maps = {}
        for name, spec in data.get("color_maps", {}).items():
            try:
                self.color_maps[name] = ColorMap(spec["source"], spec["target"], spec["map"])
            except (KeyError, ValueError) as e:
                raise ValidationError(f"color map {name}: {e}") from e
        for name, spec in data.get("families", {}).items():
            self.families[name] = self._family(name, spec)
        for name, spec in data.get("set_families", {}).items():
            if not isinstance(spec, list):
                raise ValidationError(f"set family {name} must be a list of lists")
            self.set_families[name] = spec
        for name, spec in data.get("collections", {}).items():
            self.collections[name] = self._collection(name, spec)
        for name, spec in data.get("operads", {}).items():
            self.operads[name] = self._operad(name, spec)
        for name, spec in data.get("algebras", {}).items():
            self.algebras[name] = self._algebra(name, spec)
        self.commands = list(data.get("commands", []))

    # lookups
    def _get(self, table, kind, name):
        if name not in table:
            raise ValidationError(f"undefined {kind} {name!r}")
        return table[name]

    def operad(self, name):
        return self._get(self.operads, "operad", name)

    def family(self, name):
        return self._get(self.families, "family", name)

    def algebra(self, name):
        return self._get(self.algebras, "algebra", name)

    def color_map(self, name):
        return self._get(self.color_maps, "color map", name)

    def collection(self, name):
        """A collection, or the carrier of an operad of that name."""
        if name in self.collections:
            return self.collections[name]
        if name in self.operads:
            return self.operads[name].carrier
        raise ValidationError(f"undefined collection {name!r}")

    # builders
    def _family(self, name, spec):
        colors = tuple(spec.get("colors", self.colors)) if "values" in spec else self.colors
        values = spec.get("values", spec)
        missing = [x for x in colors if x not in values]
        if missing:
            raise ValidationError(f"family {name} has no value at {missing}")
        return ColorFamily(colors, {x: bc.BaseObject(self.base, [str(v) for v in values[x]])
                                    for x in colors}, self.base)

    def _collection(self, name, spec):
        colors = tuple(spec.get("colors", self.colors))
        cidx = {x: i for i, x in enumerate(colors)}
        bound = spec.get("arity_bound")
        if bound is None:
            raise ValidationError(f"collection {name} needs an arity_bound")
        values = {}
        for entry in spec.get("entries", []):
            c = _corolla(entry, colors)
            if c.arity > bound:
                raise ValidationError(f"collection {name}: {c} beyond arity_bound")
            values[c] = [str(v) for v in entry["value"]]
        # corollas without an entry reuse the labels of a listed permutation
        reps = {}
        for c, labels in values.items():
            rep, _ = sort_corolla(c, cidx)
            reps.setdefault(rep, labels)
        gens = {}
        for entry in spec.get("actions", []):
            c = _corolla(entry, colors)
            gens[(c, entry["transposition"])] = entry["table"]
        base = self.base

        def value(c):
            if c in values:
                return bc.BaseObject(base, values[c])
            rep, _ = sort_corolla(c, cidx)
            return bc.BaseObject(base, reps.get(rep, []))

        act_gen = None
        if gens:
            def act_gen(i, c):
                src, tgt = value(c), value(c.permuted(transposition(c.arity, i)))
                table = gens.get((c, i))
                if table is None:
                    return bc.from_label_map(src, tgt, {lab: lab for lab in src.labels})
                if base == bc.FINSET:
                    return bc.from_label_map(src, tgt, table)
                return bc.BaseMorphism(src, tgt, table=[
                    {tgt.index(k): _rational(v) for k, v in table[lab].items()}
                    for lab in src.labels])

        support = {c.arity for c, labels in values.items() if labels}
        coll = Collection(colors, base, value, act_gen=act_gen, arity_bound=bound,
                          support=support, name=name)
        fails = coll.check_functorial(bound)
        if fails:
            raise ValidationError(f"collection {name} is not functorial: {fails[0]}")
        return coll

    def _operad(self, name, spec):
        builder = spec.get("builder")
        colors = tuple(spec.get("colors", self.colors))
        bound = spec.get("arity_bound", 4)
        if builder == "commutative":
            return commutative_operad(colors, self.base, bound)
        if builder == "associative":
            if len(colors) != 1:
                raise ValidationError("associative operad has one color")
            return associative_operad(self.base, bound, colors[0])
        if builder == "endomorphism":
            return endomorphism_operad(self.family(spec["family"]), bound)
        if builder == "free":
            if self.base != bc.FINSET:
                raise ValidationError("free operads are built over finset")
            gens = {}
            for entry in spec.get("generators", []):
                c = _corolla(entry, colors)
                gens[sort_corolla(c, {x: i for i, x in enumerate(colors)})[0]] = entry["names"]
            G = generator_collection(colors, gens)
            return free_operad(G, bound, spec.get("size_bound"))
        if builder == "pushforward":
            return pushforward_operad(self.color_map(spec["map"]), self.operad(spec["operad"]))
        if builder == "pullback":
            return pullback_operad(self.color_map(spec["map"]), self.operad(spec["operad"]))
        if builder is not None:
            raise ValidationError(f"unknown operad builder {builder!r}")
        return self._explicit_operad(name, spec)

    def _explicit_operad(self, name, spec):
        coll = self.collection(spec["collection"])
        base = self.base
        units = {}
        for x, lab in spec.get("units", {}).items():
            c = Corolla((x,), x)
            units[x] = self._element(coll.value(c), lab)
        tables = {}
        for entry in spec.get("gamma", []):
            c = _corolla(entry["corolla"], coll.colors)
            idx = CompositionIndex(entry["m"], tuple(entry["f"]), tuple(entry["mids"]))
            tables[(c, idx)] = entry["table"]

        def gamma(c, idx, blocks, outer):
            table = tables.get((c, idx))
            if table is None:
                raise ValidationError(f"operad {name}: no composition entry at {c}, {idx}")
            dom = _domain(coll, c, idx)
            parts = list(blocks) + [outer]
            labels = [v.labels[p] for v, p in zip(dom, parts)]
            key = ",".join(labels[:-1]) + "|" + labels[-1]
            if key not in table:
                raise ValidationError(f"operad {name}: no entry {key!r} at {c}, {idx}")
            return self._element(coll.value(c), table[key])

        op = Operad(coll, units, gamma, name=name)
        try:
            check_descent(op, raise_on_error=True)
        except ValidationError:
            raise
        return op

    def _element(self, obj, spec):
        if self.base == bc.FINSET:
            if spec not in obj.labels:
                raise ValidationError(f"unknown element {spec!r}")
            return obj.index(spec)
        if isinstance(spec, str):
            return {obj.index(spec): Fraction(1)}
        return {obj.index(k): _rational(v) for k, v in spec.items() if _rational(v)}

    def _algebra(self, name, spec):
        O = self.operad(spec["operad"])
        builder = spec.get("builder")
        if builder == "terminal":
            return terminal_algebra(O)
        if builder == "nullary":
            return nullary_algebra(O)
        if builder == "monoid":
            elems = [str(e) for e in spec["elements"]]
            pos = {e: i for i, e in enumerate(elems)}
            table = spec["table"]

            def mul(a, b):
                return pos[str(table[f"{elems[a]},{elems[b]}"])]

            return monoid_algebra(O, elems, mul, pos[str(spec["unit"])],
                                  commutative=spec.get("commutative", False))
        if builder == "words":
            return word_algebra(O, spec["alphabet"], spec["max_length"])
        if builder is not None:
            raise ValidationError(f"unknown algebra builder {builder!r}")
        M = self.family(spec["family"])
        tables = {}
        for entry in spec.get("action", []):
            c = _corolla(entry["corolla"], O.colors)
            tables[c] = entry["table"]

        def action(c, elems, o):
            table = tables.get(c)
            if table is None:
                raise ValidationError(f"algebra {name}: no action entry at {c}")
            labels = [M[y].labels[e] for y, e in zip(c.inputs, elems)]
            key = ",".join(labels) + "|" + O.value(c).labels[o]
            if key not in table:
                raise ValidationError(f"algebra {name}: no entry {key!r} at {c}")
            return self._element(M[c.output], table[key])

        return AlgebraStructure(O, M, action, name=name)


def _domain(coll, c, idx):
    from .composition import block_corollas, outer_corolla

    return [coll.value(b) for b in block_corollas(c, idx)] + [coll.value(outer_corolla(c, idx))]


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f"{path}: {e.strerror}") from e
    return parse_text(text, path)


def parse_text(text, path="<input>"):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from e
    return Workspace(data)


parse_spec = load


# ---------------------------------------------------------------------------
# commands


def _command_parser():
    p = argparse.ArgumentParser(prog="opcal", add_help=False, exit_on_error=False)
    p.add_argument("words", nargs="+")
    p.add_argument("--bound", type=int)
    p.add_argument("--m-bound", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--arity", type=int)
    p.add_argument("--mode", choices=["pull", "push"], default="pull")
    p.add_argument("--max-elements", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    return p


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def _sorted_corollas(colors, n):
    cidx = {x: i for i, x in enumerate(colors)}
    return [c for c in all_corollas(colors, n) if sort_corolla(c, cidx)[0] == c]


def run_command(ws, command):
    """Execute one command; returns ``(passed, report)``."""
    words = shlex.split(command) if isinstance(command, str) else list(command)
    try:
        args = _command_parser().parse_args(words)
    except (argparse.ArgumentError, SystemExit) as e:
        raise UsageError(f"cannot parse command {command!r}") from e
    w = args.words
    head = w[0]
    if head == "compose" and len(w) == 3:
        return _cmd_compose(ws, w[1], w[2], args)
    if head == "check" and len(w) == 3 and w[1] == "operad":
        r = check_operad(ws.operad(w[2]), _need(args.bound, "--bound"), args.max_elements, args.seed)
        return r.passed, r.to_json()
    if head == "check" and len(w) == 3 and w[1] == "algebra":
        r = check_algebra(ws.algebra(w[2]), _need(args.bound, "--bound"), args.max_elements,
                          args.seed)
        return r.passed, r.to_json()
    if head == "free-algebra" and len(w) == 3:
        return _cmd_free(ws, w[1], w[2], args)
    if head == "endo" and len(w) == 2:
        return _cmd_endo(ws, w[1], args)
    if head == "maps" and len(w) == 3:
        bound = _need(args.bound, "--bound")
        maps = enumerate_operad_maps(ws.operad(w[1]), ws.operad(w[2]), bound)
        return True, {"count": len(maps)}
    if head == "universal-property" and len(w) == 3:
        cor = algebra_map_correspondence(ws.operad(w[1]), ws.family(w[2]),
                                         _need(args.bound, "--bound"))
        return cor.bijective, cor.to_json()
    if head == "adjunction" and len(w) == 4:
        wit = adjunction_bijection(ws.operad(w[1]), ws.family(w[2]), ws.algebra(w[3]),
                                   _need(args.bound, "--bound"))
        return wit.bijective, wit.to_json()
    if head == "change-colors" and len(w) in (3, 4):
        return _cmd_change_colors(ws, w[1], w[2:], args)
    if head == "cartesian" and len(w) == 2:
        return _cmd_cartesian(ws, w[1], args)
    raise UsageError(f"unknown command {command!r}")


def _size_table(ws_colors, bound, sizes_of):
    out = {}
    for n in range(bound + 1):
        for c in _sorted_corollas(ws_colors, n):
            out[str(c)] = sizes_of(c)
    return out


def _cmd_compose(ws, left, right, args):
    L, R = ws.collection(left), ws.collection(right)
    prod = compose(L, R, args.m_bound)
    bound = args.arity if args.arity is not None else prod.arity_bound
    bound = _need(bound, "--arity")
    table = {}
    for n in range(bound + 1):
        for c in _sorted_corollas(L.colors, n):
            table[str(c)] = {"grades": [len(prod.grade(c, m)) for m in prod.grade_range(c)],
                             "exact": prod.exact(c)}
    return True, {"sizes": table, "m_bound": args.m_bound}


def _cmd_free(ws, opname, famname, args):
    F = free_algebra(ws.operad(opname), ws.family(famname), _need(args.degree, "--degree"))
    report = {str(z): F.grade_sizes(z) for z in F.colors}
    r = check_algebra(F, args.degree, args.max_elements, args.seed)
    bad = F.check_grading(args.degree)
    return r.passed and not bad, {"grade_sizes": report, "laws": r.to_json(),
                                  "grading_violations": len(bad)}


def _cmd_endo(ws, famname, args):
    bound = _need(args.bound, "--bound")
    E = endomorphism_operad(ws.family(famname), bound)
    sizes = _size_table(E.colors, bound, lambda c: len(E.value(c)))
    r = check_operad(E, bound, args.max_elements, args.seed)
    return r.passed, {"sizes": sizes, "laws": r.to_json()}


def _cmd_change_colors(ws, mapname, names, args):
    f = ws.color_map(mapname)
    bound = _need(args.bound, "--bound")
    if len(names) == 1:
        coll = ws.collection(names[0])
        out = pullback(f, coll) if args.mode == "pull" else pushforward_sum(f, coll)
        sizes = _size_table(out.colors, bound, lambda c: len(out.value(c)))
        return True, {"mode": args.mode, "sizes": sizes}
    phi, psi = (ws.collection(n) for n in names)
    if args.mode == "pull":
        cmp = lax_pullback_comparison(f, phi, psi, args.m_bound)
        colors = f.source
    else:
        cmp = pushforward_monoidal_comparison(f, phi, psi, args.m_bound)
        colors = f.target
    verdict, sizes = {}, {}
    for n in range(bound + 1):
        for c in _sorted_corollas(colors, n):
            verdict[str(c)] = cmp.invertible(c)
            sizes[str(c)] = {str(m): list(v) for m, v in cmp.sizes(c).items()}
    ok = all(verdict.values())
    return ok, {"mode": args.mode, "invertible": verdict, "sizes": sizes}


def _cmd_cartesian(ws, famname, args):
    bound = _need(args.bound, "--bound")
    fam = ws._get(ws.set_families, "set family", famname)
    bad, exhaustive = compare_cartesian(fam, bound, min(args.max_elements, 200), args.seed)
    C = cartesian_operad(fam, bound)
    Z = nullary_algebra(C)
    zs = [len(Z.carrier[x]) for x in C.colors]
    ok = not bad and zs == [len(s) for s in fam]
    return ok, {"mismatches": [list(map(str, b)) for b in bad], "exhaustive": exhaustive,
                "nullary_sizes": zs}


def _threads():
    raw = os.environ.get("OPCAL_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as e:
        raise UsageError("OPCAL_THREADS must be a positive integer") from e
    if n < 1:
        raise UsageError("OPCAL_THREADS must be a positive integer")
    return n


def run_all(ws, commands):
    """Run commands (concurrently up to ``OPCAL_THREADS``), reports in order."""

    def one(cmd):
        try:
            ok, rep = run_command(ws, cmd)
            return {"command": cmd, "status": "pass" if ok else "fail", "result": rep}
        except UsageError:
            raise
        except (ValidationError, ValueError, bc.DescentError) as e:
            return {"command": cmd, "status": "error", "error": f"{type(e).__name__}: {e}"}

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        return list(pool.map(one, commands))


def format_table(reports):
    lines = []
    for r in reports:
        lines.append(f"{r['status'].upper():5}  {r['command']}")
        res = r.get("result", {})
        for key in ("sizes", "grade_sizes", "count", "invertible", "nullary_sizes"):
            if key in res:
                val = res[key]
                if isinstance(val, dict):
                    for k, v in val.items():
                        lines.append(f"       {k}: {v}")
                else:
                    lines.append(f"       {key}: {val}")
        if "error" in r:
            lines.append(f"       {r['error']}")
    return "\n".join(lines)


def main(argv=None):
    p = argparse.ArgumentParser(prog="opcal", description=__doc__.splitlines()[0])
    p.add_argument("workspace")
    p.add_argument("command", nargs=argparse.REMAINDER,
                   help="a single command; default: the workspace's command list")
    p.add_argument("--table", action="store_true", help="also print a text table to stderr")
    args = p.parse_args(argv)
    try:
        ws = load(args.workspace)
        commands = [shlex.join(args.command)] if args.command else ws.commands
        if not commands:
            raise UsageError("no commands given")
        reports = run_all(ws, commands)
    except (ParseError, ValidationError, UsageError, bc.DescentError) as e:
        print(f"opcal: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    print(dumps({"reports": reports}))
    if args.table:
        print(format_table(reports), file=sys.stderr)
    if any(r["status"] == "error" for r in reports):
        return 2
    return 0 if all(r["status"] == "pass" for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
