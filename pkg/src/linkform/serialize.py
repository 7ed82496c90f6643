"""JSON and CSV encodings of field elements, polynomials, matrices, forms and invariants."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from fractions import Fraction
from typing import Any, Iterable

from flint import fmpz_poly

from .errors import InvalidInput
from .exactnum import FieldContext, FieldElement, RootOfUnity, conductor_for, field, totient
from .forms import (
    CyclicPairing,
    Decomposition,
    EForm,
    FForm,
    LinkingForm,
    reference_pairing,
)
from .laurent import LaurentPoly, Mode, gcd
from .plinalg import LaurentMatrix, determinant
from .signatures import JumpTable, WittClass, averaged_signature, jumps, signature_function

# ---------------------------------------------------------------------------
# scalars


def element_to_json(x: FieldElement) -> dict:
    coeffs = x.coefficients()
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return {"N": x.ctx.N, "coeffs": [str(c) for c in coeffs]}


def _element_conductor(obj) -> int:
    if isinstance(obj, dict):
        if "N" not in obj or "coeffs" not in obj:
            raise InvalidInput("field elements need keys N and coeffs")
        return int(obj["N"])
    return 4


def element_from_json(obj, ctx: FieldContext) -> FieldElement:
    """Accepts {"N", "coeffs"}, an integer, or a rational string "p/q"."""
    try:
        if isinstance(obj, dict):
            own = field(int(obj["N"]))
            return own.from_coeffs([Fraction(c) for c in obj["coeffs"]]).lift(ctx)
        if isinstance(obj, bool) or not isinstance(obj, (int, str)):
            raise InvalidInput(f"cannot read a field element from {obj!r}")
        return ctx(Fraction(obj))
    except (ValueError, ZeroDivisionError, TypeError, KeyError) as exc:
        raise InvalidInput(f"malformed field element {obj!r}") from exc


def root_to_json(r: RootOfUnity) -> dict:
    return {"num": r.num, "den": r.den}


def root_from_json(obj) -> RootOfUnity:
    try:
        return RootOfUnity(int(obj["num"]), int(obj["den"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed root of unity {obj!r}") from exc


def parse_root(text: str) -> RootOfUnity:
    """NUM/DEN on the command line."""
    try:
        num, den = text.split("/")
        return RootOfUnity(int(num), int(den))
    except ValueError as exc:
        raise InvalidInput(f"expected NUM/DEN, got {text!r}") from exc


# ---------------------------------------------------------------------------
# polynomials and matrices


def poly_to_json(p: LaurentPoly) -> dict:
    return {"terms": {str(e): element_to_json(c) for e, c in sorted(p.terms.items())}}


def _poly_conductors(obj) -> Iterable[int]:
    if not isinstance(obj, dict) or "terms" not in obj or not isinstance(obj["terms"], dict):
        raise InvalidInput("polynomials are objects with a terms mapping")
    return (_element_conductor(v) for v in obj["terms"].values())


def poly_from_json(obj, ctx: FieldContext) -> LaurentPoly:
    list(_poly_conductors(obj))
    terms = {}
    for key, value in obj["terms"].items():
        try:
            e = int(key)
        except ValueError as exc:
            raise InvalidInput(f"exponent keys are decimal integers, got {key!r}") from exc
        terms[e] = element_from_json(value, ctx)
    return LaurentPoly(ctx, terms)


def matrix_to_json(A: LaurentMatrix) -> dict:
    return {"N": A.ctx.N, "rows": A.rows, "cols": A.cols, "entries": [[poly_to_json(e) for e in row] for row in A.entries]}


def matrix_from_json(obj) -> LaurentMatrix:
    try:
        rows, cols, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput("matrices need rows, cols and entries") from exc
    if len(entries) != rows or any(len(r) != cols for r in entries):
        raise InvalidInput("matrix entries do not match the declared shape")
    declared = obj.get("N")
    N = conductor_for(int(declared or 4), *(n for row in entries for e in row for n in _poly_conductors(e)))
    ctx = field(N)
    A = LaurentMatrix(ctx, [[poly_from_json(e, ctx) for e in row] for row in entries], cols)
    if declared or rows != cols or rows == 0:
        return A
    wider = field(conductor_for(N, *circle_root_orders([determinant(A)])))
    return A if wider == ctx else A.lift(wider)


# ---------------------------------------------------------------------------
# forms and decompositions


def form_to_json(F: LinkingForm) -> dict:
    out = {
        "mode": F.mode.value,
        "N": F.ctx.N,
        "summands": [{"f": poly_to_json(c.f), "h": poly_to_json(c.h)} for c in F.summands],
    }
    if F.off_circle_roots:
        out["roots"] = [element_to_json(x) for x in F.off_circle_roots]
    return out


def _mode(text) -> Mode:
    try:
        return Mode(text)
    except ValueError as exc:
        raise InvalidInput(f"mode must be 'real' or 'complex', got {text!r}") from exc


def form_from_json(obj) -> LinkingForm:
    """Reads a form; a decomposition object is realized by its model pairings."""
    if not isinstance(obj, dict):
        raise InvalidInput("a form is a JSON object")
    if "forms" in obj:
        return realize(decomposition_from_json(obj))
    if "summands" not in obj:
        raise InvalidInput("a form needs a summands list")
    mode = _mode(obj.get("mode"))
    declared = obj.get("N")
    conductors = [4] + [n for s in obj["summands"] for key in ("f", "h") for n in _poly_conductors(s[key])]
    conductors += [_element_conductor(x) for x in obj.get("roots", [])]
    base = conductor_for(*conductors, *( [int(declared)] if declared else []))
    ctx = field(base)
    summands = [(poly_from_json(s["f"], ctx), poly_from_json(s["h"], ctx)) for s in obj["summands"]]
    if not declared:
        ctx = field(conductor_for(base, *circle_root_orders([f for f, _ in summands])))
        summands = [(f.lift(ctx), h.lift(ctx)) for f, h in summands]
    roots = tuple(element_from_json(x, ctx) for x in obj.get("roots", []))
    return LinkingForm(ctx, mode, [CyclicPairing(f, h, mode) for f, h in summands], roots)


def circle_root_orders(polys: Iterable[LaurentPoly], search_limit: int = 2000) -> list[int]:
    """Orders m of roots of unity that are roots of some polynomial, found by gcd with Phi_m.

    A root of unity of order m that is a root of a degree-d polynomial over
    Q(zeta_N) has phi(m) <= d * phi(N); orders above ``search_limit`` are not
    searched, and a form needing them must declare its field with "N".
    """
    found = set()
    for p in polys:
        if p.is_zero() or p.width() == 0:
            continue
        ctx = p.ctx
        bound = p.width() * ctx.degree
        for m in range(1, search_limit + 1):
            if totient(m) > bound:
                continue
            cyclo = LaurentPoly.from_list(ctx, [ctx(int(c)) for c in fmpz_poly.cyclotomic(m).coeffs()])
            if gcd(p, cyclo).width() > 0:
                found.add(m)
    return sorted(found)


def basic_form_to_json(f) -> dict:
    if isinstance(f, EForm):
        return {"type": "E", "n": f.n, "k": f.k, "eps": f.eps, "xi": root_to_json(f.xi)}
    return {"type": "F", "a": f.a, "b": f.b, "k": f.k, "xi": element_to_json(f.xi)}


def decomposition_to_json(d: Decomposition) -> dict:
    return {"mode": d.mode.value, "forms": [basic_form_to_json(f) for f in d]}


def decomposition_from_json(obj) -> Decomposition:
    mode = _mode(obj.get("mode"))
    forms = []
    for item in obj.get("forms", []):
        kind = item.get("type")
        try:
            if kind == "E":
                eps = int(item["eps"])
                if eps not in (1, -1):
                    raise InvalidInput("eps must be +1 or -1")
                forms.append(EForm(int(item["n"]), int(item["k"]), eps, root_from_json(item["xi"])))
            elif kind == "F":
                ctx = field(_element_conductor(item["xi"]))
                forms.append(FForm(int(item["a"]), int(item["b"]), int(item["k"]), element_from_json(item["xi"], ctx)))
            else:
                raise InvalidInput(f"unknown basic form type {kind!r}")
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed basic form {item!r}") from exc
    return Decomposition(mode, forms)


def realize(d: Decomposition) -> LinkingForm:
    """A form with the given decomposition, built from the model pairings."""
    if any(isinstance(f, FForm) for f in d):
        raise InvalidInput("off-circle basic forms cannot be realized from a decomposition")
    ctx = field(conductor_for(*(f.xi.den for f in d)))
    return LinkingForm(ctx, d.mode, [reference_pairing(ctx, d.mode, f) for f in d])


# ---------------------------------------------------------------------------
# invariants


def jumps_to_json(table: JumpTable) -> dict:
    return {
        "mode": table.mode.value,
        "jumps": [{"root": root_to_json(r), "value": table.jumps[r]} for r in sorted(table.jumps)],
        "local": [{"root": root_to_json(r), "value": table.loc[r]} for r in sorted(table.loc)],
    }


def witt_to_json(w: WittClass) -> dict:
    return {"mode": w.mode.value, "classes": [{"root": root_to_json(r), "count": v} for r, v in w.counts]}


def _fraction_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def signature_csv(d: Decomposition, samples: Iterable[RootOfUnity], grid: int | None = None) -> str:
    """Rows num, den, sigma, sigma_avg; with ``grid`` the num/den columns use that common denominator."""
    table = jumps(d)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["num", "den", "sigma", "sigma_avg"])
    for r in samples:
        num, den = (r.num * (grid // r.den), grid) if grid else (r.num, r.den)
        writer.writerow([num, den, signature_function(d, r, table), _fraction_text(averaged_signature(d, r, table))])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# files


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from exc


def _current_umask() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return mask


def write_atomic(path: str, text: str) -> None:
    """Write through a temporary file in the same directory and rename it into place."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".linkform-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o666 & ~_current_umask())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
        raise
