"""One document per CLI subcommand, with the seed it needs (or None)."""

F2 = {"type": "prime-field", "p": "2"}
F3 = {"type": "prime-field", "p": "3"}
F4 = {"type": "finite-field", "p": "2", "modulus": ["1", "1", "1"]}


def doc(kind, **fields):
    return {"version": "1", "kind": kind, **fields}


WITT_F2 = doc("witt", base=F2, N="3", x=["1"], y=["1"])
WITT_F4 = doc("witt", base=F4, N="3", x=[["0", "1"], "1"], y=["1", ["1", "1"]], a=["0", "1"])
SELF_RAMIFIED = doc("tilt-family", family="self-ramified", p="2", M="6", N="4", element=[["1/2", "1"]])
CYCLOTOMIC = doc("tilt-family", family="cyclotomic", p="3", M="4", N="3", element=[["1/3", "1"]], samples="5")
ZP = doc("tilt-family", family="zp", p="2", N="4")
CHAR_P = doc("tilt-family", family="char-p", base=F4, N="3", element=["0", "1"])
PRISM_WITT = doc("prism", carrier={"type": "witt", "base": F2, "N": "4"}, d="p", x=["0", "1", "1"])
PRISM_BK = doc(
    "prism",
    carrier={"type": "series", "base": F2, "N": "4", "D": "10"},
    d=[[["0"], "-2"], [["1"], "1"]],
    x=[[["0"], "-2"], [["1"], "-1"], [["2"], "1"]],
)
EISENSTEIN = doc("eisenstein", base=F3, N="4", coeffs=["3", "0"], D="8", x=["3"], series=["1", "2", "0", "5", "7"])
U_MINUS_P = doc("eisenstein", base=F2, N="4", coeffs=["-2"], D="8")
KOSZUL = doc(
    "series",
    base=F2,
    N="3",
    nvars="2",
    D="5",
    coeffs=[],
    sequence=[[[["1", "0"], "1"]], [[["0", "1"], "1"]]],
)
HH = doc("hh-instance", p="2", xi=["0", "1"])
LIFT = doc("lift", base=F4, r="2")

# (argv prefix, document, seed)
COMMANDS = [
    (["witt", "add"], WITT_F4, None),
    (["witt", "mul"], WITT_F2, None),
    (["witt", "teich"], WITT_F4, None),
    (["witt", "frob"], WITT_F4, None),
    (["witt", "ver"], WITT_F4, None),
    (["witt", "delta"], WITT_F4, None),
    (["witt", "to-padic"], doc("witt", base=F2, N="3", x=["1", "1", "1"]), None),
    (["witt", "from-padic"], doc("padic", p="3", N="3", value="10"), None),
    (["witt", "table"], doc("witt", base=F2, N="3"), None),
    (["theta", "sharp"], SELF_RAMIFIED, 1),
    (["theta", "eval"], SELF_RAMIFIED, 1),
    (["theta", "report"], CYCLOTOMIC, None),
    (["theta", "image-xi"], CHAR_P, None),
    (["theta", "check"], CYCLOTOMIC, 2),
    (["tilt", "fiber"], SELF_RAMIFIED, None),
    (["tilt", "radical"], CYCLOTOMIC, None),
    (["prism", "check"], PRISM_BK, None),
    (["prism", "delta"], PRISM_BK, None),
    (["prism", "divide"], PRISM_BK, None),
    (["cdvr", "val"], EISENSTEIN, None),
    (["cdvr", "reduce"], EISENSTEIN, None),
    (["cdvr", "invert"], EISENSTEIN, None),
    (["cdvr", "kernel"], U_MINUS_P, 5),
    (["cdvr", "koszul"], KOSZUL, None),
    (["hh", "table"], HH, None),
    (["lift"], LIFT, 3),
]
