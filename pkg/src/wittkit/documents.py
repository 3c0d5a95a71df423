"""JSON presentation documents: validation, decoding into library objects, encoding results."""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import jsonschema

from wittkit.cdvr import EisensteinPoly
from wittkit.galois import GaloisRing
from wittkit.padic import AtLeast
from wittkit.perfect import FiniteFieldAlg, PerfectMonomialAlg, PrimeField
from wittkit.series import TruncatedPowerSeries
from wittkit.tilt import CharPPerfect, Cyclotomic, SelfRamified, ZpDegenerate
from wittkit.witt import WittVector

SCHEMA_VERSION = "1"


class DocumentError(ValueError):
    """The document is not valid JSON or does not match the schema."""


@lru_cache(maxsize=None)
def schema() -> dict:
    text = resources.files("wittkit").joinpath("schema/v1.json").read_text()
    return json.loads(text)


def load_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        # the deepest error is the most specific one
        err = max(errors, key=lambda e: len(e.absolute_path))
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise DocumentError(f"schema violation at {where}: {err.message}")
    return doc


# --- decoding ----------------------------------------------------------------


def parse_base(obj: dict):
    p = int(obj["p"])
    kind = obj["type"]
    try:
        if kind == "prime-field":
            return PrimeField(p)
        if kind == "finite-field":
            return FiniteFieldAlg(p, tuple(int(c) for c in obj["modulus"]))
        return PerfectMonomialAlg(p, int(obj["M"]))
    except ValueError as exc:
        raise DocumentError(f"bad base ring: {exc}") from exc


def parse_field_element(k, value):
    """An int string, a coefficient list, or ``[[exponent, coeff], ...]`` monomials."""
    if isinstance(value, str):
        return k.from_int(int(value))
    if isinstance(k, PerfectMonomialAlg):
        if any(not isinstance(t, list) for t in value):
            raise DocumentError("monomial algebra elements are lists of [exponent, coefficient]")
        return k.from_monomials((Fraction(e), int(c)) for e, c in value)
    if any(isinstance(t, list) for t in value):
        raise DocumentError(f"{k!r} elements are coefficient lists")
    if isinstance(k, FiniteFieldAlg):
        return k.element([int(c) for c in value])
    return tuple(int(c) for c in value)


def parse_witt(k, N: int, digits) -> WittVector:
    if len(digits) > N:
        raise DocumentError(f"{len(digits)} digits given for length {N}")
    parsed = [parse_field_element(k, d) for d in digits]
    return WittVector(k, parsed + [k.zero] * (N - len(parsed)))


def parse_galois(R: GaloisRing, value):
    if isinstance(value, str):
        return R.from_int(int(value))
    return R.element([int(c) for c in value])


def parse_series(R: GaloisRing, nvars: int, D: int, terms) -> TruncatedPowerSeries:
    coeffs = {}
    for exps, c in terms:
        if len(exps) != nvars:
            raise DocumentError(f"exponent {exps} does not have {nvars} entries")
        mono = tuple(int(e) for e in exps)
        coeffs[mono] = R.add(coeffs.get(mono, R.zero), parse_galois(R, c))
    return TruncatedPowerSeries(R, nvars, D, coeffs)


def parse_family(doc: dict):
    family, N = doc["family"], int(doc["N"])
    if family == "char-p":
        if "base" not in doc:
            raise DocumentError("the char-p family needs a base")
        return CharPPerfect(parse_base(doc["base"]), N)
    if "p" not in doc:
        raise DocumentError(f"the {family} family needs p")
    p = int(doc["p"])
    if family == "zp":
        return ZpDegenerate(p, N)
    if "M" not in doc:
        raise DocumentError(f"the {family} family needs M")
    cls = SelfRamified if family == "self-ramified" else Cyclotomic
    return cls(p, int(doc["M"]), N)


def parse_eisenstein(doc: dict) -> EisensteinPoly:
    k = parse_base(doc["base"])
    R = GaloisRing(k, int(doc["N"]))
    try:
        return EisensteinPoly(R, tuple(parse_galois(R, c) for c in doc["coeffs"]))
    except ValueError as exc:
        raise DocumentError(f"not Eisenstein: {exc}") from exc


# --- encoding ----------------------------------------------------------------


def encode_digit(k, d):
    if isinstance(k, PerfectMonomialAlg):
        return [[str(e), str(c)] for e, c in k.monomials(d)]
    return [str(c) for c in d]


def encode_witt(x: WittVector):
    return [encode_digit(x.base, d) for d in x.digits]


def plain(value):
    """Recursively turn numbers into decimal strings; keeps bools and None."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, Fraction, AtLeast)):
        return str(value)
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if hasattr(value, "value") and isinstance(value.value, str):  # enums
        return value.value
    return value
