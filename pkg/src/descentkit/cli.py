"""Command line front end: generate instances, run suites, query homology, pages and resolutions."""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import codec
from .complexes import COCHAIN, Complex, ComplexError, SchemaError, homology_dims
from .descent import (SUITES, SuiteError, counterexample, dumps, instance_rng, recheck,
                      resolve_config, run_suite)
from .filtered import FilteredComplex, FiltrationError, SpectralPage, page_consistency
from .generate import MAX_TRUNCATION, ProfileError
from .linalg import DimensionError, rank
from .monads import (DERIVED, TensorTriple, TripleError, derived_value, fibrant_replacement,
                     filtered_derived_value, tensor_triple, MONOIDS)
from .simple import simple, total_of
from .simplicial import (FiniteSimplicialSet, SimplicialIdentityError, Truncated, TruncationError,
                         audit, linearize)

EXIT_OK, EXIT_CHECK, EXIT_SCHEMA, EXIT_INPUT = 0, 1, 2, 3


class InputInvariantError(ValueError):
    pass


# input files


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("descentkit") / "data" / name))


def _resolve_path(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    q = fixture_path(path if path.endswith(".json") else path + ".json")
    if q.exists():
        return q
    raise FileNotFoundError(path)


def load(path: str):
    """Read a JSON file (or a shipped fixture name) and decode it."""
    try:
        obj = json.loads(_resolve_path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not JSON ({exc})") from exc
    return decode_any(obj)


def decode_any(obj):
    if isinstance(obj, dict) and "type" in obj:
        return codec.decode(obj)
    if isinstance(obj, dict):
        # untagged documents are recognised by their keys
        if "filtration" in obj:
            return FilteredComplex.from_json(obj)
        if "direction" in obj and "dims" in obj:
            return Complex.from_json(obj)
        if "cells" in obj:
            return FiniteSimplicialSet.from_json(obj)
        if "objects" in obj and "kind" in obj:
            return Truncated.from_json(obj)
        if "mult" in obj and "unit" in obj:
            return TensorTriple.from_json(obj)
    raise SchemaError("unrecognised document")


def _complex_of(obj, N: int, Q: int) -> Complex:
    if isinstance(obj, Complex):
        return obj
    if isinstance(obj, FilteredComplex):
        return obj.complex
    if isinstance(obj, FiniteSimplicialSet):
        obj = linearize(obj, N)
    if isinstance(obj, Truncated):
        bad = audit(obj)
        if bad:
            raise InputInvariantError(bad[0])
        return simple(obj, Q) if obj.kind == "simplicial" else total_of(obj, Q + 1).complex
    raise SchemaError(f"expected a complex-like document, got {type(obj).__name__}")


def _triple(spec: str) -> TensorTriple:
    if spec in MONOIDS:
        return tensor_triple(spec)
    obj = load(spec)
    if not isinstance(obj, TensorTriple):
        raise SchemaError(f"{spec} does not describe a monoid")
    bad = obj.A.audit()
    if bad:
        raise InputInvariantError(f"monoid fails: {bad[0]}")
    return obj


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit(data, fmt: str, out: str | None, text_lines) -> None:
    if fmt == "json":
        _write(json.dumps(data, sort_keys=True, indent=1) + "\n", out)
    else:
        _write("".join(line + "\n" for line in text_lines), out)


# commands


def cmd_gen(a) -> int:
    names = _suites(a.suite)
    out = Path(a.out or "instances")
    out.mkdir(parents=True, exist_ok=True)
    written = 0
    for name in names:
        s = SUITES[name]
        N, Q = resolve_config(s, a.truncation, a.max_degree)
        count = s.instances if a.instances is None else a.instances
        for i in range(count):
            inst = s.build(instance_rng(name, a.seed, i), N, i)
            doc = {"suite": name, "seed": a.seed, "index": i, "truncation": N, "max_degree": Q,
                   "instance": codec.encode(inst)}
            (out / f"{name}-{a.seed}-{i:03d}.json").write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
            written += 1
    print(f"wrote {written} instance files to {out}", file=sys.stderr)
    return EXIT_OK


def _suites(sel: str) -> list[str]:
    if sel == "all":
        return list(SUITES)
    names = [s.strip().lower() for s in sel.split(",")]
    for n in names:
        if n not in SUITES:
            raise SuiteError(f"unknown suite {n!r}; known: {', '.join(SUITES)}")
    return names


def cmd_suite(a) -> int:
    names = _suites(a.suite)
    reports = {n: run_suite(n, a.seed, a.instances, a.truncation, a.max_degree) for n in names}
    ok = all(r["ok"] for r in reports.values())
    data = reports[names[0]] if len(names) == 1 else {"ok": ok, "suites": reports}
    if a.format == "json":
        _write(dumps(data), a.out)
    else:
        lines = []
        for n, r in reports.items():
            status = "PASS" if r["ok"] else "FAIL"
            lines.append(f"{status} {n} ({r['axiom']}, {r['proxy']}): {r['passed']}/{r['instances']}"
                         f" N={r['truncation']} Q={r['max_degree']} seed={r['seed']}")
            for f in r["failures"]:
                lines.append(f"  instance {f['index']}: {f['detail']}")
        _emit(None, "text", a.out, lines)
    if not ok:
        base = Path(a.out).parent if a.out else Path(".")
        for n, r in reports.items():
            for f in r["failures"]:
                p = base / f"counterexample-{n}-{r['seed']}-{f['index']:03d}.json"
                p.write_text(json.dumps(counterexample(r, f), sort_keys=True, indent=1) + "\n")
                print(f"counterexample written to {p}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def cmd_recheck(a) -> int:
    try:
        ce = json.loads(Path(a.file).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{a.file}: not JSON ({exc})") from exc
    ok, detail = recheck(ce)
    _emit({"suite": ce.get("suite"), "index": ce.get("index"), "ok": ok, "detail": detail},
          a.format, a.out, [f"{'PASS' if ok else 'FAIL'} {ce.get('suite')}[{ce.get('index')}]: {detail}"])
    return EXIT_OK if ok else EXIT_CHECK


def cmd_homology(a) -> int:
    N = a.truncation if a.truncation is not None else 3
    Q = a.max_degree if a.max_degree is not None else N - 1
    if not 1 <= N <= MAX_TRUNCATION or not 0 <= Q <= N - 1:
        raise ProfileError(f"need 1 <= N <= {MAX_TRUNCATION} and 0 <= Q <= N-1")
    C = _complex_of(load(a.file), N, Q)
    h = homology_dims(C, range(Q + 1))
    _emit({"homology": {str(q): d for q, d in h.items()}}, a.format, a.out,
          [f"H_{q} = {d}" if C.direction != COCHAIN else f"H^{q} = {d}" for q, d in h.items()])
    return EXIT_OK


def cmd_ss(a) -> int:
    X = load(a.file)
    if not isinstance(X, FilteredComplex):
        raise SchemaError("ss expects a filtered complex")
    bad = page_consistency(X, max(a.page, 0))
    E = SpectralPage(X, a.page)
    data = E.to_json()
    data["consistent"] = not bad
    lines = [f"E_{a.page}^{{{p},{q}}} = {d}" for (p, q), d in E.dims().items()]
    lines += [f"d_{a.page} from ({p},{q}): rank {rank(m)}" for (p, q), m in sorted(E.d.items())]
    if bad:
        lines.append(f"page inconsistency: {bad[0]}")
    _emit(data, a.format, a.out, lines)
    return EXIT_OK if not bad else EXIT_CHECK


def cmd_resolve(a) -> int:
    N = a.truncation if a.truncation is not None else 3
    _bounds(N)
    T = _triple(a.triple)
    X = _complex_of(load(a.file), N, N - 1)
    R = fibrant_replacement(T, X, N)
    data = {"triple": T.name, "truncation": N, "replacement": R.complex.to_json(),
            "epsilon": R.epsilon.to_json(),
            "homology": {str(q): d for q, d in homology_dims(R.complex, R.trusted).items()}}
    lines = [f"F X over {T.name}, N={N}: dims " +
             " ".join(f"{q}:{d}" for q, d in sorted(R.complex.dims.items()))]
    lines += [f"H^{q}(F X) = {d}" for q, d in homology_dims(R.complex, R.trusted).items()]
    _emit(data, a.format, a.out, lines)
    return EXIT_OK


def cmd_derive(a) -> int:
    N = a.truncation if a.truncation is not None else 3
    _bounds(N)
    T = _triple(a.triple)
    obj = load(a.file)
    if a.functor == "graded-homology":
        if not isinstance(obj, FilteredComplex):
            raise SchemaError("graded-homology needs a filtered complex")
        val = filtered_derived_value(T, obj, N)
        data = {str(k): {str(q): d for q, d in h.items()} for k, h in val.items()}
        lines = [f"Gr_{k}: " + " ".join(f"H^{q}={d}" for q, d in h.items()) for k, h in val.items()]
    else:
        X = _complex_of(obj, N, N - 1)
        val = derived_value(a.functor, T, X, N)
        data = {str(q): d for q, d in val.items()} if isinstance(val, dict) else val
        lines = [f"R{a.functor}^{q} = {d}" for q, d in val.items()] if isinstance(val, dict) else [str(val)]
    _emit({"triple": T.name, "functor": a.functor, "truncation": N, "value": data},
          a.format, a.out, lines)
    return EXIT_OK


def _bounds(N: int) -> None:
    if not 1 <= N <= MAX_TRUNCATION:
        raise ProfileError(f"truncation must be in 1..{MAX_TRUNCATION}")


def _file_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("file", nargs="?", help="JSON file or shipped fixture name")
    p.add_argument("--input", dest="input", default=None, help="same as the positional file")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="descentkit", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--truncation", "-N", type=int, default=None,
                        help=f"truncation N (<= {MAX_TRUNCATION}); suite default when omitted")
    common.add_argument("--max-degree", "-Q", type=int, default=None,
                        help="top checked degree (<= N-1, or <= N for cosimplicial suites)")
    common.add_argument("--out", default=None, help="output path (stdout when omitted)")
    common.add_argument("--format", choices=["json", "text"], default="json")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="write seeded instances as JSON files")
    g.add_argument("--suite", default="all")
    g.add_argument("--instances", type=int, default=None)
    g.set_defaults(fn=cmd_gen)

    s = sub.add_parser("suite", parents=[common], help="run verification suites")
    s.add_argument("--suite", default="all", help="suite name, comma list, or all")
    s.add_argument("--instances", type=int, default=None)
    s.set_defaults(fn=cmd_suite)

    r = sub.add_parser("recheck", parents=[common], help="re-run the check stored in a counterexample")
    _file_arg(r)
    r.set_defaults(fn=cmd_recheck)

    h = sub.add_parser("homology", parents=[common], help="homology dimensions of a complex-like file")
    _file_arg(h)
    h.set_defaults(fn=cmd_homology)

    e = sub.add_parser("ss", parents=[common], help="spectral page of a filtered complex")
    _file_arg(e)
    e.add_argument("--page", "-r", type=int, default=2)
    e.set_defaults(fn=cmd_ss)

    v = sub.add_parser("resolve", parents=[common], help="fibrant replacement s(T̄X)")
    _file_arg(v)
    v.add_argument("--triple", default="QxQ", help="monoid name or JSON file")
    v.set_defaults(fn=cmd_resolve)

    d = sub.add_parser("derive", parents=[common], help="derived value G(s T̄X)")
    _file_arg(d)
    d.add_argument("--triple", default="QxQ", help="monoid name or JSON file")
    d.add_argument("--functor", default="homology",
                   help=f"one of {', '.join(sorted(DERIVED))}, graded-homology")
    d.set_defaults(fn=cmd_derive)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "input"):
        if (args.file is None) == (args.input is None):
            parser.error("give the input file either positionally or with --input")
        args.file = args.file or args.input
    try:
        return args.fn(args)
    except (SchemaError, SuiteError, ProfileError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (InputInvariantError, ComplexError, DimensionError, FiltrationError, TripleError,
            TruncationError, SimplicialIdentityError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
