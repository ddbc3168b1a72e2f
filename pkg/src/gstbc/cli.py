"""Command-line entry point.

Subcommands map one-to-one onto the library layers:

* ``generate-basis``    -- the anti-hermitian matrix basis for 2**a antennas
* ``enumerate-lambdas`` -- the admissible cross-term matrices
* ``search``            -- seed search / maximum-rate search, emitting codes
* ``verify``            -- structural verification of a stored code
* ``complexity``        -- decoding-complexity orders
* ``repro``             -- one-shot reproduction of the published tables,
                           diffed against recorded digests

Every command that writes an artifact also writes ``<out>.manifest.json``
with the tool version, command line, a config hash and result digests; runs
with equal config hashes produce byte-identical artifacts regardless of
worker count.  There is no randomness anywhere, hence no seed flag.

Failures exit nonzero with a machine-readable JSON error object on stderr:
2 usage, 3 malformed input, 4 budget/limit, 5 verification/reproduction
failure, 1 unexpected.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__, clifford
from .admissible import enumerate_candidates
from .codecheck import (BudgetError, ConstellationSpec, decoding_complexity,
                        reference_summary, verify_report)
from .exact import ExactMatrix, matrix_from_strings, matrix_to_strings
from .search import (GroupSignature, VerificationError, find_seeds,
                     max_rate_search, reconstruct_weights)
from .serialize import FIXTURE_CODES, code_from_dict, code_to_dict, load_fixture

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_BUDGET = 4
EXIT_VERIFY = 5
EXIT_UNEXPECTED = 1


def canonical_json(payload) -> str:
    return json.dumps(payload, indent=1, sort_keys=True) + "\n"


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _emit(payload, out: str | None, command: str, args_for_hash: dict,
          started: float) -> None:
    """Print or write the artifact; alongside a file, write its manifest."""
    text = canonical_json(payload)
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.write_text(text, encoding="utf-8")
    config = {"command": command, "args": args_for_hash}
    manifest = {
        "tool": "gstbc",
        "version": __version__,
        "command_line": [command] + [f"{k}={v}" for k, v in sorted(args_for_hash.items())],
        "config_hash": _sha256(canonical_json(config)),
        "elapsed_seconds": round(time.time() - started, 3),
        "artifacts": {str(path): _sha256(text)},
    }
    Path(str(path) + ".manifest.json").write_text(canonical_json(manifest), encoding="utf-8")
    print(f"wrote {path}")


def _error(code: int, kind: str, message: str) -> int:
    sys.stderr.write(canonical_json({"error": {"kind": kind, "message": message}}))
    return code


# -- subcommand payload builders -------------------------------------------

def basis_payload(a: int, sign_gamma1: int) -> dict:
    elements = clifford.basis(a, sign_gamma1).elements
    return {
        "a": a,
        "sign_gamma1": sign_gamma1,
        "count": len(elements),
        "elements": [
            {
                "index": el.index,
                "gen_subset": list(el.gen_subset),
                "phase_power": el.phase_power,
                "matrix": matrix_to_strings(el.matrix),
            }
            for el in elements
        ],
    }


def basis_table(payload: dict) -> str:
    lines = []
    for el in payload["elements"]:
        subset = el["gen_subset"]
        if not subset:
            name = "j*I"
        else:
            prod = "*".join(f"R{k}" for k in subset)
            phase = {0: "", 1: "j*", 2: "-", 3: "-j*"}[el["phase_power"]]
            name = phase + prod
        lines.append(f"alpha_{el['index']:<3} = {name}")
        for row in el["matrix"]:
            lines.append("    [" + ", ".join(f"{e:>6}" for e in row) + "]")
    return "\n".join(lines) + "\n"


def lambdas_payload(a: int, method: str, allow_large: bool, emit: str) -> dict:
    cands = enumerate_candidates(a, method=method, allow_large=allow_large)
    payload = {"a": a, "count": len(cands)}
    if emit == "json":
        payload["candidates"] = [
            {
                "index": i + 1,
                "support": list(c.support),
                "coeffs": [str(v) for v in c.coeff_values],
                "thread_index": c.thread_index,
                "threads": list(c.threads),
                "matrix": matrix_to_strings(c.matrix),
            }
            for i, c in enumerate(cands)
        ]
    return payload


def _parse_sizes(text: str) -> tuple:
    try:
        sizes = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"--sizes expects comma-separated integers, got {text!r}")
    if not sizes:
        raise ValueError("--sizes must name at least one group")
    return sizes


def _load_a1(spec: str, n: int) -> ExactMatrix:
    if spec == "identity":
        return ExactMatrix.identity(n)
    with open(spec, encoding="utf-8") as fh:
        rows = json.load(fh)
    return matrix_from_strings(rows)


def _load_constellation(spec: str) -> ConstellationSpec:
    if spec.startswith("square:"):
        return ConstellationSpec.square(int(spec.split(":", 1)[1]))
    if spec.startswith("custom:"):
        with open(spec.split(":", 1)[1], encoding="utf-8") as fh:
            data = json.load(fh)
        return ConstellationSpec.custom(int(data["M"]),
                                        [Fraction(v) for v in data["real_axis_values"]])
    raise ValueError("--constellation expects square:<M> or custom:<file>")


def _load_codes(spec: str) -> list:
    """One or more codes: a single-code document, a search output document
    (its ``codes`` list), or ``fixture:<name>`` for a bundled code."""
    if spec.startswith("fixture:"):
        return [load_fixture(spec.split(":", 1)[1])]
    with open(spec, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "codes" in data:
        return [code_from_dict(d) for d in data["codes"]]
    if isinstance(data, dict) and "witnesses" in data:
        return [code_from_dict(d) for d in data["witnesses"]]
    return [code_from_dict(data)]


def run_search(args) -> dict:
    if args.max_rate:
        result = max_rate_search(args.a, args.groups, args.symmetric,
                                 min_group_size=args.min_group_size,
                                 workers=args.workers)
        return {
            "a": args.a,
            "groups": args.groups,
            "symmetric": args.symmetric,
            "min_group_size": args.min_group_size,
            "max_rate": str(result.max_rate),
            "best_signatures": [list(s.sizes) for s in result.best_signatures],
            "empty_level": [list(s.sizes) for s in result.empty_level],
            "witnesses": [code_to_dict(result.witnesses[s]) for s in result.best_signatures],
        }
    if args.sizes is None:
        raise ValueError("search needs --sizes n1,n2,... unless --max-rate is given")
    sizes = _parse_sizes(args.sizes)
    if len(sizes) != args.groups:
        raise ValueError(f"--groups {args.groups} disagrees with --sizes {args.sizes}")
    if args.symmetric and len(set(sizes)) != 1:
        raise ValueError("--symmetric requires equal sizes")
    signature = GroupSignature(sizes)
    seeds = find_seeds(args.a, signature, limit=args.limit, workers=args.workers)
    a1 = _load_a1(args.a1, 2 ** args.a)
    codes = [reconstruct_weights(seed, a1) for seed in seeds]
    return {
        "a": args.a,
        "signature": list(sizes),
        "rate": str(signature.rate(args.a)),
        "count": len(codes),
        "limited": args.limit is not None,
        "codes": [code_to_dict(c) for c in codes],
    }


def run_repro(args) -> tuple:
    """Reproduce the published tables end to end; compare against the
    recorded digests.  Returns (payload, ok)."""
    from importlib import resources
    expected = json.loads(
        resources.files("gstbc.fixtures").joinpath("repro_expected.json").read_text())
    steps = {}

    basis = basis_payload(2, 1)
    steps["basis_a2"] = {
        "count": basis["count"],
        "digest": _sha256(canonical_json(basis)),
    }

    lam = lambdas_payload(2, "auto", False, "json")
    steps["lambdas_a2"] = {
        "count": lam["count"],
        "digest": _sha256(canonical_json(lam)),
    }

    for name in sorted(FIXTURE_CODES):
        code = load_fixture(name)
        report = verify_report(code, ConstellationSpec.square(4), include_coding_gain=True)
        steps[f"verify_{name}"] = {
            "all_passed": report["all_passed"],
            "rate": report["rate"],
            "coding_gain": report["coding_gain"]["overall"],
            "digest": _sha256(canonical_json(report)),
        }

    two = max_rate_search(2, 2, symmetric=True, workers=args.workers)
    steps["max_rate_2group_symmetric"] = {
        "max_rate": str(two.max_rate),
        "best_signatures": [list(s.sizes) for s in two.best_signatures],
        "empty_level": [list(s.sizes) for s in two.empty_level],
    }
    three = max_rate_search(2, 3, symmetric=False, workers=args.workers)
    steps["max_rate_3group_nonsymmetric"] = {
        "max_rate": str(three.max_rate),
        "best_signatures": [list(s.sizes) for s in three.best_signatures],
        "empty_level": [list(s.sizes) for s in three.empty_level],
    }

    steps["complexity_table"] = {"rows": reference_summary()}

    diffs = []
    for key, want in expected.items():
        got = steps.get(key)
        if got != want:
            diffs.append({"step": key, "expected": want, "actual": got})
    payload = {"steps": steps, "diffs": diffs, "ok": not diffs}
    return payload, not diffs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gstbc",
        description="exact construction, search and verification of "
                    "multi-group decodable space-time block codes")
    parser.add_argument("--version", action="version", version=f"gstbc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate-basis", help="emit the anti-hermitian matrix basis")
    p.add_argument("--a", type=int, required=True, help="antenna exponent, n = 2^a")
    p.add_argument("--sign-gamma1", type=int, choices=(1, -1), default=1)
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--out")

    p = sub.add_parser("enumerate-lambdas", help="emit the admissible cross-term matrices")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--emit", choices=("json", "count"), default="json")
    p.add_argument("--method", choices=("auto", "coeff", "structure"), default="auto")
    p.add_argument("--allow-large", action="store_true",
                   help="opt in to the costly a=3 enumeration")
    p.add_argument("--out")

    p = sub.add_parser("search", help="search for codes or maximum rates")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--groups", type=int, required=True)
    p.add_argument("--sizes", help="comma-separated group sizes n1,n2,...")
    p.add_argument("--symmetric", action="store_true")
    p.add_argument("--max-rate", action="store_true")
    p.add_argument("--limit", type=int)
    p.add_argument("--a1", default="identity",
                   help="first weight matrix: 'identity' or a JSON matrix file")
    p.add_argument("--min-group-size", type=int, default=2,
                   help="smallest admissible group size for --max-rate (default 2: "
                        "one complex symbol per group)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("verify", help="verify a stored code")
    p.add_argument("--code", required=True,
                   help="code JSON file, or fixture:<name> for a bundled code")
    p.add_argument("--constellation", help="square:<M> or custom:<file>")
    p.add_argument("--coding-gain", action="store_true")
    p.add_argument("--budget", type=int, default=2 ** 20)
    p.add_argument("--report", help="write the JSON report here")

    p = sub.add_parser("complexity", help="decoding-complexity orders")
    p.add_argument("--sizes", help="comma-separated group sizes")
    p.add_argument("--M", type=int, default=4)
    p.add_argument("--kind", choices=("square", "nonrect"), default="square")
    p.add_argument("--summary", action="store_true",
                   help="print the published results table instead")
    p.add_argument("--out")

    p = sub.add_parser("repro", help="reproduce the published tables and diff digests")
    p.add_argument("--paper-tables", action="store_true",
                   help="run the full table-reproduction suite (the default and "
                        "only suite)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.time()
    try:
        if args.command == "generate-basis":
            payload = basis_payload(args.a, args.sign_gamma1)
            if args.format == "table":
                text = basis_table(payload)
                if args.out:
                    Path(args.out).write_text(text, encoding="utf-8")
                    print(f"wrote {args.out}")
                else:
                    sys.stdout.write(text)
            else:
                _emit(payload, args.out, "generate-basis",
                      {"a": args.a, "sign_gamma1": args.sign_gamma1}, started)
            return EXIT_OK

        if args.command == "enumerate-lambdas":
            payload = lambdas_payload(args.a, args.method, args.allow_large, args.emit)
            _emit(payload, args.out, "enumerate-lambdas",
                  {"a": args.a, "emit": args.emit, "method": args.method}, started)
            return EXIT_OK

        if args.command == "search":
            payload = run_search(args)
            _emit(payload, args.out, "search",
                  {"a": args.a, "groups": args.groups, "sizes": args.sizes,
                   "symmetric": args.symmetric, "max_rate": args.max_rate,
                   "limit": args.limit, "a1": args.a1,
                   "min_group_size": args.min_group_size}, started)
            return EXIT_OK

        if args.command == "verify":
            codes = _load_codes(args.code)
            constellation = (_load_constellation(args.constellation)
                             if args.constellation else None)
            reports = [verify_report(c, constellation,
                                     include_coding_gain=args.coding_gain,
                                     budget=args.budget) for c in codes]
            all_passed = all(r["all_passed"] for r in reports)
            payload = reports[0] if len(reports) == 1 else {
                "count": len(reports), "all_passed": all_passed, "reports": reports}
            _emit(payload, args.report, "verify",
                  {"code": args.code, "constellation": args.constellation,
                   "coding_gain": args.coding_gain}, started)
            if not all_passed:
                return _error(EXIT_VERIFY, "verification",
                              "one or more structural checks failed")
            return EXIT_OK

        if args.command == "complexity":
            if args.summary:
                payload = {"rows": reference_summary()}
            else:
                if args.sizes is None:
                    raise ValueError("complexity needs --sizes or --summary")
                sizes = _parse_sizes(args.sizes)
                order = decoding_complexity(sizes, args.M, args.kind)
                payload = {
                    "sizes": list(sizes),
                    "M": args.M,
                    "kind": args.kind,
                    "expression": order.expression(),
                    "order": order.evaluate(args.M),
                }
            _emit(payload, args.out, "complexity",
                  {"sizes": args.sizes, "M": args.M, "kind": args.kind,
                   "summary": args.summary}, started)
            return EXIT_OK

        if args.command == "repro":
            payload, ok = run_repro(args)
            _emit(payload, args.out, "repro", {"paper_tables": True}, started)
            if not ok:
                return _error(EXIT_VERIFY, "reproduction",
                              f"{len(payload['diffs'])} step(s) diverged from the "
                              "recorded results")
            return EXIT_OK

        raise AssertionError(f"unhandled command {args.command}")
    except BudgetError as exc:
        return _error(EXIT_BUDGET, "budget", str(exc))
    except VerificationError as exc:
        return _error(EXIT_VERIFY, "verification", str(exc))
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        return _error(EXIT_INPUT, "input", str(exc))


if __name__ == "__main__":
    raise SystemExit(main())
