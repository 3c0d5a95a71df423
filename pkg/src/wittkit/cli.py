"""``wittkit`` command line: one JSON document in, one deterministic report out.

Exit codes: 0 when every check passes (declarations count as passing), 1 on
a failed or inconclusive check or an arithmetic error, 2 on usage and
document errors.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys

from wittkit.cdvr import (
    CDVRQuotient,
    TruncatedQuotient,
    cdvr_valuation,
    cdvr_valuation_formula,
    koszul_homology,
    long_division,
    regular_local_kernel_generator,
    weierstrass_precision,
    weierstrass_reduce,
)
from wittkit.delta import (
    DeltaRingCarrier,
    OrientedPrismPresentation,
    distinguished_divide,
    is_distinguished,
    prism_report,
)
from wittkit.documents import (
    DocumentError,
    encode_digit,
    encode_witt,
    load_document,
    parse_base,
    parse_eisenstein,
    parse_family,
    parse_field_element,
    parse_galois,
    parse_series,
    parse_witt,
    plain,
)
from wittkit.errors import ResourceLimit, WittkitError
from wittkit.galois import GaloisRing
from wittkit.hochschild import MAX_DEGREE, periodicity_table
from wittkit.lifting import TruncatedNilAlg, unique_lift
from wittkit.padic import PAdicContext
from wittkit.perfect import FiniteFieldAlg, PerfectMonomialAlg, special_fiber
from wittkit.report import Report
from wittkit.series import TruncatedPowerSeries, series_invert
from wittkit.tilt import (
    fontaine_theta,
    image_of_xi_in_special_fiber,
    perfectoid_report,
    sharp,
    theta_kernel_witness,
    tilt_kernel_radical_test,
)
from wittkit.witt import (
    WittVector,
    padic_to_witt,
    teichmuller,
    witt_delta,
    witt_frobenius,
    witt_to_padic,
    witt_verschiebung,
)

TABLE_LIMIT = 256  # largest p^N for `witt table`
HOM_CHECK_LIMIT = 64  # largest field order for the exhaustive lift check


class UsageError(ValueError):
    pass


def _need(doc, *keys):
    for key in keys:
        if key not in doc:
            raise UsageError(f"document needs the field {key!r}")
    return [doc[key] for key in keys]


def _expect_kind(doc, *kinds):
    if doc["kind"] not in kinds:
        raise UsageError(f"expected a document of kind {' or '.join(kinds)}, got {doc['kind']!r}")


def _rng(args) -> random.Random:
    if args.seed is None:
        raise UsageError("this command is randomized and needs --seed")
    return random.Random(args.seed)


def _result(title, **payload) -> Report:
    return Report(title, payload=payload)


# --- witt ----------------------------------------------------------------------


def _witt_setup(doc):
    _expect_kind(doc, "witt")
    return parse_base(doc["base"]), int(doc["N"])


def _witt_operand(doc, k, N, key="x"):
    (digits,) = _need(doc, key)
    return parse_witt(k, N, digits)


def witt_binary(op):
    def run(doc, args):
        k, N = _witt_setup(doc)
        x, y = _witt_operand(doc, k, N, "x"), _witt_operand(doc, k, N, "y")
        z = x + y if op == "add" else x * y
        return _result(f"witt {op}", result=encode_witt(z))

    return run


def witt_unary(op):
    maps = {"frob": witt_frobenius, "ver": witt_verschiebung, "delta": witt_delta}

    def run(doc, args):
        k, N = _witt_setup(doc)
        z = maps[op](_witt_operand(doc, k, N))
        return _result(f"witt {op}", result=encode_witt(z))

    return run


def witt_teich(doc, args):
    k, N = _witt_setup(doc)
    (a,) = _need(doc, "a")
    return _result("witt teich", result=encode_witt(teichmuller(parse_field_element(k, a), k, N)))


def witt_to_padic_cmd(doc, args):
    k, N = _witt_setup(doc)
    x = _witt_operand(doc, k, N)
    try:
        a = witt_to_padic(x)
    except TypeError as exc:
        raise UsageError(str(exc)) from exc
    return _result("witt to-padic", p=a.ctx.p, N=a.ctx.N, value=a.residue)


def witt_from_padic(doc, args):
    _expect_kind(doc, "padic")
    ctx = PAdicContext(int(doc["p"]), int(doc["N"]))
    return _result("witt from-padic", result=encode_witt(padic_to_witt(ctx(int(doc["value"])))))


def witt_table(doc, args):
    """Transport the full addition and multiplication tables of W_N(F_p) to Z/p^N."""
    k, N = _witt_setup(doc)
    if not (isinstance(k, FiniteFieldAlg) and k.degree == 1):
        raise UsageError("witt table needs a prime-field base")
    p = k.p
    if p**N > TABLE_LIMIT:
        raise ResourceLimit(f"p^N = {p**N} exceeds the table limit {TABLE_LIMIT}")
    elems = [WittVector(k, list(d)) for d in itertools.product(list(k.elements()), repeat=N)]
    value = {x: witt_to_padic(x).residue for x in elems}
    bijective = sorted(value.values()) == list(range(p**N))
    bad = sum(
        value[x + y] != (value[x] + value[y]) % p**N or value[x * y] != value[x] * value[y] % p**N
        for x in elems
        for y in elems
    )
    report = Report("witt table", payload={"p": p, "N": N, "order": p**N})
    report.add(
        "W_N(F_p) is isomorphic to Z/p^N",
        "Pass" if bijective and not bad else "Fail",
        "external-standard",
        f"{len(elems) ** 2} sums and products compared, {bad} mismatches",
    )
    return report


# --- theta / tilt ------------------------------------------------------------


def _family(doc):
    _expect_kind(doc, "tilt-family")
    return parse_family(doc)


def _tilt_input(doc, R):
    (element,) = _need(doc, "element")
    return parse_field_element(R.carrier, element)


def _theta_input(doc, R):
    raw = doc.get("witt", "xi")
    if raw == "xi":
        return R.xi()
    return parse_witt(R.carrier, R.N, raw)


def theta_sharp(doc, args):
    R = _family(doc)
    rng = _rng(args)
    x = _tilt_input(doc, R)
    depth = min(int(doc.get("L", R.N)), R.N)
    a = R.tilt_element(x, depth)
    samples = int(doc.get("samples", "10"))
    values = [sharp(a, rng) for _ in range(samples)]
    report = Report("theta sharp", payload={"family": R.descriptor(), "value": list(values[0])})
    report.add(
        "sharp is lift-independent",
        "Pass" if len(set(values)) == 1 else "Fail",
        "paper",
        f"{samples} random lifts of the component at index N-1",
    )
    return report


def theta_eval(doc, args):
    R = _family(doc)
    rng = _rng(args)
    x = _theta_input(doc, R)
    samples = int(doc.get("samples", "3"))
    values = [fontaine_theta(x, R, rng) for _ in range(samples)]
    report = Report(
        "theta eval",
        payload={"family": R.descriptor(), "value": list(values[0]), "is_zero": R.is_zero(values[0])},
    )
    report.add(
        "theta is lift-independent",
        "Pass" if len(set(values)) == 1 else "Fail",
        "paper",
        f"{samples} evaluations with independent random lifts",
    )
    return report


def theta_report(doc, args):
    return perfectoid_report(_family(doc))


def theta_image_xi(doc, args):
    R = _family(doc)
    w = theta_kernel_witness(R)
    u = image_of_xi_in_special_fiber(w)
    one = WittVector(u.base, [u.base.one] + [u.base.zero] * (u.length - 1))
    report = Report("theta image-xi", payload={"family": R.descriptor(), "u": encode_witt(u), "u_is_one": u == one})
    report.add("image of xi is p times a unit", "Pass", "paper", f"u has unit digit 0 in W_{u.length}")
    return report


def theta_check(doc, args):
    """Sampled homomorphism and kernel checks for theta."""
    R = _family(doc)
    rng = _rng(args)
    samples = int(doc.get("samples", "20"))
    C, N = R.carrier, R.N

    def rand_witt():
        return WittVector(C, [C.random(rng) for _ in range(N)])

    bad = 0
    for _ in range(samples):
        x, y = rand_witt(), rand_witt()
        tx, ty = fontaine_theta(x, R, rng), fontaine_theta(y, R, rng)
        bad += fontaine_theta(x + y, R, rng) != R.add(tx, ty)
        bad += fontaine_theta(x * y, R, rng) != R.mul(tx, ty)
    report = Report("theta check", payload={"family": R.descriptor(), "samples": samples})
    report.add("theta is a ring homomorphism", "Pass" if not bad else "Fail", "paper", f"{bad} mismatches")
    vanishes = R.is_zero(fontaine_theta(R.xi(), R, rng))
    report.add("theta(xi) = 0", "Pass" if vanishes else "Fail", "paper", f"modulo p^{N}")
    return report


def tilt_fiber(doc, args):
    R = _family(doc)
    kappa, q = special_fiber(R)
    payload = {"family": R.descriptor(), "special_fiber": repr(kappa)}
    if "element" in doc:
        payload["image"] = encode_digit(kappa, q(_tilt_input(doc, R)))
    return _result("tilt fiber", **payload)


def tilt_radical(doc, args):
    R = _family(doc)
    x = _tilt_input(doc, R)
    dies = tilt_kernel_radical_test(x, theta_kernel_witness(R))
    return _result("tilt radical", family=R.descriptor(), in_radical=dies)


# --- prism -------------------------------------------------------------------


def _prism_setup(doc):
    _expect_kind(doc, "prism")
    carrier = doc["carrier"]
    k, N = parse_base(carrier["base"]), int(carrier["N"])
    if carrier["type"] == "witt":
        return DeltaRingCarrier.witt(k, N)
    (D,) = _need(carrier, "D")
    return DeltaRingCarrier.series(GaloisRing(k, N), int(carrier.get("nvars", "1")), int(D))


def _prism_element(C, raw):
    if raw == "p":
        return C.from_int(C.p)
    try:
        if C.kind == "witt":
            return parse_witt(C.k, C.N, raw)
        return parse_series(C.ring, C.nvars, C.D, raw)
    except (TypeError, ValueError, AttributeError) as exc:
        raise DocumentError(f"element does not match the {C.kind} carrier: {exc}") from exc


def _encode_carrier_element(C, x):
    return encode_witt(x) if C.kind == "witt" else x.to_json()


def prism_check(doc, args):
    C = _prism_setup(doc)
    d = _prism_element(C, doc["d"])
    return prism_report(OrientedPrismPresentation(C, d))


def prism_delta(doc, args):
    C = _prism_setup(doc)
    d = _prism_element(C, doc["d"])
    return _result(
        "prism delta",
        delta=_encode_carrier_element(C, C.delta(d)),
        distinguished=is_distinguished(C, d),
    )


def prism_divide(doc, args):
    C = _prism_setup(doc)
    d = _prism_element(C, doc["d"])
    (raw,) = _need(doc, "x")
    x = _prism_element(C, raw)
    q = distinguished_divide(C, x, d)
    if C.kind == "witt":
        n = q.length
        ok = d.truncate(n) * q == x.truncate(n)
    else:
        n = q.ring.N
        prod = TruncatedPowerSeries(q.ring, C.nvars, C.D, q.coeffs) * d.lower_precision(n)
        ok = prod == x.lower_precision(n)
    report = Report("prism divide", payload={"quotient": _encode_carrier_element(C, q), "precision": n})
    report.add("d q = x", "Pass" if ok else "Fail", "external-standard", f"checked at precision {n}")
    return report


# --- cdvr ----------------------------------------------------------------------


def cdvr_val(doc, args):
    _expect_kind(doc, "eisenstein")
    E = parse_eisenstein(doc)
    A = CDVRQuotient(E)
    (raw,) = _need(doc, "x")
    x = A.reduce_poly([parse_galois(E.ring, c) for c in raw])
    v = cdvr_valuation(A, x)
    oracle = cdvr_valuation_formula(A, x)
    report = Report("cdvr val", payload={"valuation": v, "e": E.degree})
    report.add("valuation matches the coefficient formula", "Pass" if v == oracle else "Fail", "external-standard", f"oracle {oracle}")
    return report


def cdvr_reduce(doc, args):
    _expect_kind(doc, "eisenstein")
    E = parse_eisenstein(doc)
    R = E.ring
    (raw,) = _need(doc, "series")
    coeffs = [parse_galois(R, c) for c in raw]
    D = int(doc.get("D", str(max(len(coeffs), E.degree))))
    if len(coeffs) > D:
        raise UsageError(f"{len(coeffs)} coefficients exceed the degree bound D = {D}")
    r = weierstrass_reduce(TruncatedPowerSeries.univariate(R, D, coeffs), E)
    _, oracle = long_division(coeffs, E)
    report = Report(
        "cdvr reduce",
        payload={"remainder": [list(c) for c in r], "determined_digits": weierstrass_precision(D, E.degree, R.N)},
    )
    report.add("agrees with long division", "Pass" if r == oracle else "Fail", "external-standard")
    return report


def cdvr_invert(doc, args):
    _expect_kind(doc, "eisenstein")
    E = parse_eisenstein(doc)
    D = int(doc.get("D", "12"))
    f = TruncatedPowerSeries.one(E.ring, 1, D) - E.as_series(D)
    g = series_invert(f)
    report = Report("cdvr invert", payload={"inverse": g.to_json(), "D": D})
    ok = f * g == TruncatedPowerSeries.one(E.ring, 1, D)
    report.add("(1 - E) g = 1", "Pass" if ok else "Fail", "paper", f"modulo (p^{E.ring.N}, u^{D})")
    return report


def cdvr_kernel(doc, args):
    _expect_kind(doc, "eisenstein", "series")
    _rng(args)
    if doc["kind"] == "eisenstein":
        E = parse_eisenstein(doc)
        phi = E.as_series(int(doc.get("D", "8")))
    else:
        R = GaloisRing(parse_base(doc["base"]), int(doc["N"]))
        phi = parse_series(R, int(doc["nvars"]), int(doc["D"]), doc["coeffs"])
    samples = int(doc.get("samples", "5"))
    report = regular_local_kernel_generator(phi, seed=args.seed, samples=samples)
    report.payload["phi"] = phi.to_json()
    return report


def cdvr_koszul(doc, args):
    _expect_kind(doc, "series")
    R = GaloisRing(parse_base(doc["base"]), int(doc["N"]))
    n, D = int(doc["nvars"]), int(doc["D"])
    (seq,) = _need(doc, "sequence")
    f = parse_series(R, n, D, doc["coeffs"])
    Q = TruncatedQuotient(R, n, D, () if f.is_zero() else (f,))
    res = koszul_homology([parse_series(R, n, D, s) for s in seq], Q)
    report = Report(
        "cdvr koszul",
        payload={
            "h0_exponents": res.h0_exponents,
            "inspected_N": res.inspected_N,
            "inspected_D": res.inspected_D,
            "cycles_checked": res.cycles_checked,
        },
    )
    report.add(
        "Koszul H_1 vanishes",
        "Pass" if res.h1_vanishes else "Fail",
        "external-standard",
        f"inspected range N'={res.inspected_N}, D'={res.inspected_D}",
    )
    return report


# --- hh / lift -----------------------------------------------------------------


def hh_table(doc, args):
    _expect_kind(doc, "hh-instance")
    n_max = args.nmax if args.nmax is not None else int(doc.get("n_max", str(MAX_DEGREE)))
    table = periodicity_table(int(doc["p"]), [int(c) for c in doc["xi"]], n_max)
    report = table.report
    payload = table.to_json()
    del payload["checks"]
    payload["periodicity"] = payload.pop("verdict")
    payload["summary"] = ",".join(g.describe(table.xi, table.p) for g in table.groups)
    report.payload.update(payload)
    return report


def lift_cmd(doc, args):
    _expect_kind(doc, "lift")
    rng = _rng(args)
    A = parse_base(doc["base"])
    if not isinstance(A, FiniteFieldAlg):
        raise UsageError("lift needs a finite-field source")
    r = int(doc["r"])
    Dbar = TruncatedNilAlg(A, r)
    sigma = A.frobenius if doc.get("sigma", "identity") == "frobenius" else (lambda a: a)
    lifted = unique_lift(A, sigma, Dbar, rng=rng)
    report = Report(
        "lift",
        payload={
            "n_star": lifted.n_star,
            "generator_images": [[encode_digit(A, c) for c in img] for img in lifted.generator_images],
        },
    )
    report.add("iterates stabilize", "Pass", "paper", f"values at n = {lifted.n_star} and {lifted.n_star + 1} agree")
    if A.order <= HOM_CHECK_LIMIT:
        elems = list(A.elements())
        ok = all(
            lifted(A.add(a, b)) == Dbar.add(lifted(a), lifted(b)) and lifted(A.mul(a, b)) == Dbar.mul(lifted(a), lifted(b))
            for a in elems
            for b in elems
        )
        report.add("lift is a ring map", "Pass" if ok else "Fail", "external-standard", f"all {len(elems) ** 2} pairs")
    else:
        report.add("lift is a ring map", "Inconclusive", "external-standard", f"field of order {A.order} too large to enumerate")
    return report


# --- plumbing ------------------------------------------------------------------

COMMANDS = {
    "witt": {
        "add": witt_binary("add"),
        "mul": witt_binary("mul"),
        "teich": witt_teich,
        "frob": witt_unary("frob"),
        "ver": witt_unary("ver"),
        "delta": witt_unary("delta"),
        "to-padic": witt_to_padic_cmd,
        "from-padic": witt_from_padic,
        "table": witt_table,
    },
    "theta": {
        "sharp": theta_sharp,
        "eval": theta_eval,
        "report": theta_report,
        "image-xi": theta_image_xi,
        "check": theta_check,
    },
    "tilt": {"fiber": tilt_fiber, "radical": tilt_radical},
    "prism": {"check": prism_check, "delta": prism_delta, "divide": prism_divide},
    "cdvr": {
        "val": cdvr_val,
        "reduce": cdvr_reduce,
        "invert": cdvr_invert,
        "kernel": cdvr_kernel,
        "koszul": cdvr_koszul,
    },
    "hh": {"table": hh_table},
}


def _add_common(parser, suppress: bool):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--input", metavar="FILE", default=default, help="document path (default: stdin)")
    parser.add_argument("--seed", type=int, default=default, help="seed for randomized commands")
    parser.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS if suppress else "json")
    parser.add_argument("--precision", type=int, metavar="N", default=default, help="override the document's N")
    parser.add_argument("--nmax", type=int, default=default, help="top degree for hh table")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wittkit", description=__doc__.splitlines()[0])
    _add_common(parser, suppress=False)
    groups = parser.add_subparsers(dest="group", required=True)
    for group, ops in COMMANDS.items():
        gp = groups.add_parser(group)
        sub = gp.add_subparsers(dest="op", required=True)
        for op, handler in ops.items():
            leaf = sub.add_parser(op)
            _add_common(leaf, suppress=True)
            leaf.set_defaults(handler=handler)
    lift = groups.add_parser("lift")
    _add_common(lift, suppress=True)
    lift.set_defaults(handler=lift_cmd, op=None)
    return parser


def _override_precision(doc, N: int):
    if N < 1:
        raise UsageError("--precision must be positive")
    if doc["kind"] == "prism":
        doc["carrier"]["N"] = str(N)
    elif "N" in doc or doc["kind"] in ("padic", "witt", "tilt-family", "series", "eisenstein"):
        doc["N"] = str(N)
    else:
        raise UsageError(f"documents of kind {doc['kind']!r} have no precision to override")


def run(args) -> tuple[dict, int]:
    """The output document and exit code for parsed arguments."""
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    doc = load_document(text)
    if args.precision is not None:
        _override_precision(doc, args.precision)
    command = " ".join(x for x in (args.group, args.op) if x)
    head = {"command": command, "seed": args.seed, "input": doc}
    try:
        report = args.handler(doc, args)
    except WittkitError as exc:
        out = {**head, "verdict": "Fail", "error": {"type": type(exc).__name__, "message": str(exc)}}
        return plain(out), 1
    out = {**head, **report.to_json()}
    code = 0 if report.verdict.value == "Pass" else 1
    return plain(out), code


def render_text(out: dict) -> str:
    rows = [("command", out["command"]), ("verdict", out["verdict"])]
    if out.get("seed") is not None:
        rows.append(("seed", out["seed"]))
    if "error" in out:
        rows.append(("error", f"{out['error']['type']}: {out['error']['message']}"))
    for c in out.get("checks", []):
        rows.append((f"[{c['verdict']}]", f"{c['name']} ({c['provenance']}) {c['detail']}".rstrip()))
    for key, value in sorted(out.get("payload", {}).items()):
        rows.append((key, value if isinstance(value, str) else json.dumps(value, sort_keys=True)))
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out, code = run(args)
    except (DocumentError, UsageError, OSError) as exc:
        print(f"wittkit: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"wittkit: error: invalid presentation: {exc}", file=sys.stderr)
        return 2
    if args.format == "text":
        print(render_text(out))
    else:
        print(json.dumps(out, sort_keys=True, indent=2))
    if "error" in out:
        print(f"wittkit: {out['error']['type']}: {out['error']['message']}", file=sys.stderr)
    return code
