"""Command-line frontend: ``biproj <subcommand> ...``.

Exit codes: 0 success (or a question answered), 1 a checked property
failed, 2 usage error (bad flags, malformed literal, resource cap).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from . import bluher as bl
from . import classify as cl
from .biprojective import (
    butterfly,
    gleq_equivalent,
    gold,
    is_apn_naive,
    is_apn_projective,
    kappa,
)
from .gf2l import FieldSpec, SubfieldParams, field as make_field, gcd_exponent_facts, load_field_config
from .literals import LiteralError, parse_function, parse_poly
from .projective import (
    QProjectivePoly,
    canonicalize,
    fractional_map_values,
    fractional_permutation_parameters,
    zero_count_class,
)

FORMATS = ("table", "json", "csv")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    fmt: str = "table"
    l: int | None = None
    k: int | None = None
    modulus: int | None = None
    field_config: str | None = None
    threads: int | None = None
    checkpoint: str | None = None

    def __post_init__(self):
        if self.fmt not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}")
        if self.l is not None and self.k is not None and not 0 < self.k < self.l:
            raise UsageError(f"need 0 < k < l, got k={self.k}, l={self.l}")

    def field(self, l: int | None = None) -> FieldSpec:
        l = self.l if l is None else l
        if self.field_config:
            spec = load_field_config(self.field_config)
            if l is not None and spec.l != l:
                raise UsageError(f"field config is GF(2^{spec.l}) but l={l} was requested")
            return spec
        if l is None:
            raise UsageError("--l is required")
        try:
            return make_field(l, self.modulus)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    def params(self) -> SubfieldParams:
        if self.k is None:
            raise UsageError("--k is required")
        return SubfieldParams(self.k, self.field().l)

    def literal_field(self) -> FieldSpec | None:
        """Field override for literals (only when a modulus or config was given)."""
        if self.field_config:
            return load_field_config(self.field_config)
        if self.modulus is not None:
            if self.l is None:
                raise UsageError("--modulus needs --l")
            return make_field(self.l, self.modulus)
        return None


# ---------- output

def _emit(cfg: RunConfig, payload: dict, text: str, rows: list[list] | None = None, out=None):
    out = out or sys.stdout
    if cfg.fmt == "json":
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    elif cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if rows is None:
            rows = [["key", "value"]] + [[k, json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v]
                                         for k, v in sorted(payload.items())]
        w.writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write(text.rstrip("\n") + "\n")


def _hex(x: int) -> str:
    return f"{x:x}"


def _read_literal(arg: str | None) -> str:
    text = sys.stdin.read() if arg in (None, "-") else arg
    text = text.strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"stdin is not valid JSON: {exc}") from None
        if "function" not in obj:
            raise UsageError("JSON input needs a 'function' key")
        text = obj["function"]
    if not text:
        raise UsageError("no literal given (argument or stdin)")
    return text


def _hex_arg(s: str) -> int:
    try:
        return int(s, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hex number: {s!r}") from None


# ---------- subcommands

def cmd_apn_check(cfg: RunConfig, args) -> int:
    F = parse_function(_read_literal(args.function), cfg.literal_field())
    if args.method == "naive":
        verdict = is_apn_naive(F)
    elif args.method == "both":
        verdict = is_apn_projective(F)
        if is_apn_naive(F) != verdict:
            raise AssertionError("APN tests disagree")
    else:
        verdict = is_apn_projective(F)
    payload = {"function": F.literal(), "apn": verdict, "method": args.method}
    _emit(cfg, payload, f"APN: {str(verdict).lower()}")
    return 0


def cmd_canonical(cfg: RunConfig, args) -> int:
    f = parse_poly(_read_literal(args.poly), cfg.literal_field())
    stratum = zero_count_class(f).label(f.params)
    if f.params.delta != 1:
        raise UsageError("canonical forms need gcd(k, l) = 1")
    rep, w = canonicalize(f)
    payload = {"input": f.literal(), "canonical": rep.literal(), "stratum": stratum, "witness": w.to_json()}
    text = f"{rep.literal()}  [{stratum}]  alpha={w.alpha:x} M={w.matrix.to_list()}"
    _emit(cfg, payload, text)
    return 0


def cmd_equiv(cfg: RunConfig, args) -> int:
    spec = cfg.literal_field()
    F = parse_function(args.first, spec)
    G = parse_function(args.second, spec)
    if (F.field, F.params) != (G.field, G.params):
        raise UsageError("the two functions live over different (field, q)")
    w = gleq_equivalent(F, G)
    payload = {"first": F.literal(), "second": G.literal(), "equivalent": w is not None,
               "witness": w.to_json() if w else None}
    if w:
        text = f"equivalent: left={w.left.to_list()} right={w.right.to_list()}"
    else:
        text = "not equivalent"
    _emit(cfg, payload, text)
    return 0


def cmd_bluher(cfg: RunConfig, args) -> int:
    spec, params = cfg.field(), cfg.params()
    part = bl.bluher_partition(spec, params)
    rep = bl.multiset_intersection_lemma_check(spec, params)
    payload = {
        "l": spec.l,
        "k": params.k,
        "I_sizes": part.sizes,
        "I": {f"I{j}": [_hex(b) for b in sorted(s)] for j, s in enumerate(part.sets)},
        "difference_set_params": list(rep.difference_set_params) if rep.difference_set_params else None,
        "lemma_holds": rep.lemma_holds,
        "counterexamples": [_hex(d) for d in rep.counterexamples],
    }
    rows = [["b", "stratum"]] + [[_hex(b), s] for b, s in part.rows()]
    lines = [f"l={spec.l} k={params.k}  |I0|,|I1|,|I2|,|I3| = {part.sizes}"]
    for j, s in enumerate(part.sets):
        lines.append(f"I{j} = {{{', '.join(_hex(b) for b in sorted(s))}}}")
    lines.append(f"difference set params of I1: {payload['difference_set_params']}")
    _emit(cfg, payload, "\n".join(lines), rows)
    return 0


def cmd_diffset(cfg: RunConfig, args) -> int:
    spec, params = cfg.field(), cfg.params()
    part = bl.bluher_partition(spec, params)
    got = bl.field_difference_set(part.I1, spec)
    want = bl.difference_set_closed_form(spec.l)
    payload = {"l": spec.l, "k": params.k, "difference_set_params": list(got) if got else None,
               "expected": list(want), "ok": got == want}
    text = f"I1 is a ({got[0]},{got[1]},{got[2]}) difference set" if got else "I1 is not a difference set"
    _emit(cfg, payload, text)
    return 0 if got == want else 1


def cmd_fracperm(cfg: RunConfig, args) -> int:
    spec, params = cfg.field(), cfg.params()
    if args.all:
        found = fractional_permutation_parameters(spec, params)
        predicted = {(0, 1), (1, 1)}
        ok = found == predicted
        payload = {"l": spec.l, "k": params.k, "permuting": [[_hex(c), _hex(d)] for c, d in sorted(found)],
                   "criterion_holds": ok}
        rows = [["c", "d"]] + [[_hex(c), _hex(d)] for c, d in sorted(found)]
        text = (f"permuting (c,d): {sorted((_hex(c), _hex(d)) for c, d in found)}; "
                f"criterion c in {{0,1}}, d = 1: {'holds' if ok else 'FAILS'}")
        _emit(cfg, payload, text, rows)
        return 0 if ok else 1
    if args.c is None or args.d is None:
        raise UsageError("fracperm needs --c and --d (or --all)")
    if args.c >= spec.order or args.d >= spec.order:
        raise UsageError("--c/--d outside the field")
    f = QProjectivePoly(1, 0, 0, args.c, spec, params)
    g = QProjectivePoly(0, 1, 1, args.d, spec, params)
    try:
        vals = fractional_map_values(f, g)
        perm = len(set(vals)) == len(vals)
        note = None
    except ValueError as exc:
        perm, note = False, str(exc)
    payload = {"l": spec.l, "k": params.k, "c": _hex(args.c), "d": _hex(args.d), "permutes": perm, "note": note}
    text = f"(x^{params.q + 1} + {args.c:x})/(x^{params.q} + x + {args.d:x}) permutes P^1: {str(perm).lower()}"
    if note:
        text += f" ({note})"
    _emit(cfg, payload, text)
    return 0


def _emit_function(cfg: RunConfig, F, extra: dict | None = None):
    payload = {"function": F.literal()}
    payload.update(extra or {})
    _emit(cfg, payload, F.literal())


def cmd_gold(cfg: RunConfig, args) -> int:
    spec, params = cfg.field(), cfg.params()
    F = gold(spec, params, args.cls)
    _emit_function(cfg, F, {"class": args.cls})
    return 0


def cmd_kappa(cfg: RunConfig, args) -> int:
    spec = cfg.field(3)
    k = cfg.k or 1
    F = kappa(spec, SubfieldParams(k, 3), args.b1, args.d1)
    _emit_function(cfg, F)
    return 0


def cmd_butterfly(cfg: RunConfig, args) -> int:
    spec, params = cfg.field(), cfg.params()
    if args.a == 0 or args.b == 0:
        raise UsageError("butterfly needs a, b nonzero")
    if max(args.a, args.b) >= spec.order:
        raise UsageError("--a/--b outside the field")
    if spec.l % 2 == 0:
        raise UsageError("butterflies are defined for odd l")
    _emit_function(cfg, butterfly(spec, params, args.a, args.b))
    return 0


def cmd_classify(cfg: RunConfig, args) -> int:
    spec, params = cfg.field(), cfg.params()
    cl.set_threads(cfg.threads)
    progress = cl.log_progress if args.progress else None
    rep = cl.classify(spec, params, full=args.full, allow_l6=args.allow_l6,
                      checkpoint=cfg.checkpoint, witness_all=not args.bucket, progress=progress)
    print(f"runtime: {rep.runtime_seconds:.2f} s", file=sys.stderr)
    rows = [["class", "orbit", "members", "sample"]]
    for c in rep.classes:
        for o in c.orbits:
            rows.append([c.anchor, o["name"], o["member_count"], o["sample"]])
    _emit(cfg, rep.to_json(), rep.table(), rows)
    return 0 if rep.agrees else 1


def _lemma_checks(spec: FieldSpec, params: SubfieldParams) -> dict:
    checks: dict[str, object] = {}
    facts = gcd_exponent_facts(params.k, spec.l)
    checks["gcd_closed_forms"] = (
        facts.gcd_minus == math.gcd(params.q - 1, spec.order - 1)
        and facts.gcd_plus == math.gcd(params.q + 1, spec.order - 1))
    if params.delta != 1:
        checks["gcd_obstruction"] = cl.classify(spec, params).apn_pairs_found == 0 if spec.l <= cl.DEFAULT_MAX_L else None
        return checks
    suite = bl.bluher_suite(spec, params)
    checks.update({f"bluher.{k}": v for k, v in suite.checks.items()})
    lem = bl.multiset_intersection_lemma_check(spec, params)
    checks["mult_J_closed_form_exact"] = lem.mult_j_matches
    if spec.l > 3:
        checks["key_lemma"] = lem.lemma_holds
        if spec.l % 2 == 0:
            checks["key_lemma_q+1_powers"] = lem.cube_case_holds
        if spec.l <= cl.HARD_MAX_L:
            checks["s_cases"] = cl.verify_s_cases(spec, params).ok
            checks["parity_cases"] = cl.verify_parity_cases(spec, params).ok
    else:
        roots = sorted(w for w in spec.elements() if spec.pow(w, 3) ^ w ^ 1 == 0)
        checks["key_lemma_l3_exceptions"] = lem.exceptions == roots
    return checks


def cmd_verify_lemmas(cfg: RunConfig, args) -> int:
    spec, params = cfg.field(), cfg.params()
    cl.set_threads(cfg.threads)
    checks = _lemma_checks(spec, params)
    ok = all(v is not False for v in checks.values())
    payload = {"l": spec.l, "k": params.k, "checks": checks, "ok": ok}
    lines = [f"{'PASS' if v else ('SKIP' if v is None else 'FAIL')}  {k}" for k, v in sorted(checks.items())]
    lines.append(f"all lemmas {'verified' if ok else 'NOT verified'} for l={spec.l}, k={params.k}")
    rows = [["check", "result"]] + [[k, v] for k, v in sorted(checks.items())]
    _emit(cfg, payload, "\n".join(lines), rows)
    return 0 if ok else 1


# ---------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=FORMATS, default="table", help="output format")
    common.add_argument("--modulus", type=_hex_arg, help="defining polynomial in hex (default: smallest irreducible)")
    common.add_argument("--field-config", help="file with 'l=' and 'modulus=' lines")
    common.add_argument("--threads", type=int, help=f"thread count (default ${cl.THREADS_ENV} or all cores)")

    lk = argparse.ArgumentParser(add_help=False)
    lk.add_argument("--l", type=int, required=True, help="L = GF(2^l)")
    lk.add_argument("--k", type=int, required=True, help="q = 2^k")

    p = argparse.ArgumentParser(prog="biproj", description="(q,q)-biprojective APN toolkit over GF(2^l)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("apn-check", parents=[common], help="APN test for a function literal")
    s.add_argument("function", nargs="?", help="literal ((a0,b0,c0,d0),(a1,b1,c1,d1))_q@l; '-' or omitted reads stdin")
    s.add_argument("--l", type=int, help=argparse.SUPPRESS)
    s.add_argument("--method", choices=("projective", "naive", "both"), default="projective")
    s.set_defaults(func=cmd_apn_check)

    s = sub.add_parser("canonical", parents=[common], help="canonical representative of a polynomial literal")
    s.add_argument("poly", nargs="?", help="literal (a,b,c,d)_q@l")
    s.add_argument("--l", type=int, help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_canonical)

    s = sub.add_parser("equiv", parents=[common], help="GL(2,L) x GL(2,L) equivalence of two functions")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--l", type=int, help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_equiv)

    for name, func, hlp in (("bluher", cmd_bluher, "Bluher sets I0..I3"),
                            ("diffset", cmd_diffset, "difference-set parameters of I1"),
                            ("verify-lemmas", cmd_verify_lemmas, "run the whole lemma suite")):
        s = sub.add_parser(name, parents=[common, lk], help=hlp)
        s.set_defaults(func=func)

    s = sub.add_parser("fracperm", parents=[common, lk], help="is (x^(q+1)+c)/(x^q+x+d) a permutation of P^1?")
    s.add_argument("--c", type=_hex_arg)
    s.add_argument("--d", type=_hex_arg)
    s.add_argument("--all", action="store_true", help="check the criterion for every (c, d)")
    s.set_defaults(func=cmd_fracperm)

    s = sub.add_parser("gold", parents=[common, lk], help="Gold map literal")
    s.add_argument("--class", dest="cls", choices=("q_plus_1", "q_plus_r"), default="q_plus_1")
    s.set_defaults(func=cmd_gold)

    s = sub.add_parser("kappa", parents=[common], help="kappa over GF(8)")
    s.add_argument("--k", type=int, default=1, choices=(1, 2))
    s.add_argument("--b1", type=_hex_arg, default=1)
    s.add_argument("--d1", type=_hex_arg)
    s.set_defaults(func=cmd_kappa)

    s = sub.add_parser("butterfly", parents=[common, lk], help="butterfly literal (odd l)")
    s.add_argument("--a", type=_hex_arg, required=True)
    s.add_argument("--b", type=_hex_arg, required=True)
    s.set_defaults(func=cmd_butterfly)

    s = sub.add_parser("classify", parents=[common, lk], help="exhaustive classification")
    s.add_argument("--full", action="store_true", help="scan V x V (l = 3 only)")
    s.add_argument("--allow-l6", action="store_true", help="lift the l <= 5 cap to l = 6")
    s.add_argument("--checkpoint", help="resumable state file")
    s.add_argument("--bucket", action="store_true", help="witness one member per signature bucket only")
    s.add_argument("--progress", action="store_true", help="progress lines on stderr")
    s.set_defaults(func=cmd_classify)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            fmt=args.fmt,
            l=getattr(args, "l", None),
            k=getattr(args, "k", None),
            modulus=args.modulus,
            field_config=args.field_config,
            threads=args.threads,
            checkpoint=getattr(args, "checkpoint", None),
        )
        return args.func(cfg, args)
    except (UsageError, LiteralError, cl.ResourceLimitError) as exc:
        print(f"biproj {args.command}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"biproj {args.command}: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
