"""The .wha.json interchange format.

Tensors are stored as sorted sparse entry lists [i, j, ..., "coeff"]; coefficients use
the exactmath scalar grammar (z is the primitive root of unity of order field_order).
"""
import hashlib
import json
import re
from dataclasses import dataclass, field
from typing import Optional

from .core import QuantumGroupoid, StructureError, verify_axioms
from .exactmath import SparseTensor, format_scalar, parse_scalar

FORMAT_VERSION = 1
REQUIRED = ("format_version", "name", "field_order", "dim", "basis_labels",
            "unit", "counit", "mult", "comult", "antipode")


class ParseError(ValueError):
    pass


def entries(T):
    return [list(ix) + [format_scalar(v)] for ix, v in sorted(T.items())]


def vec_json(v):
    return [format_scalar(v[(i,)]) for i in range(v.dims[0])]


def mat_json(M):
    if M is None:
        return None
    r, c = M.dims
    return [[format_scalar(M[i, j]) for j in range(c)] for i in range(r)]


def _tensor(doc, key, dims, order):
    raw = doc.get(key)
    if raw is None:
        raise ParseError(f"missing section {key!r}")
    if not isinstance(raw, list):
        raise ParseError(f"section {key!r} must be a list of entries")
    d = {}
    for n, e in enumerate(raw):
        if not isinstance(e, list) or len(e) != len(dims) + 1:
            raise ParseError(f"{key}[{n}]: expected {len(dims)} indices and a coefficient")
        ix = tuple(e[:-1])
        if not all(isinstance(i, int) and 0 <= i < m for i, m in zip(ix, dims)):
            raise ParseError(f"{key}[{n}]: index {list(ix)} outside {list(dims)}")
        try:
            c = parse_scalar(e[-1], order)
        except (ValueError, TypeError) as exc:
            raise ParseError(f"{key}[{n}]: {exc}") from None
        if ix in d:
            raise ParseError(f"{key}[{n}]: repeated index {list(ix)}")
        d[ix] = c
    return SparseTensor.from_dict(d, dims, order)


# ---------------------------------------------------------------- documents

def to_doc(H, qt=None, twist=None, recipe=None, parent=None):
    doc = {
        "format_version": FORMAT_VERSION, "name": H.name, "field_order": H.order, "dim": H.dim,
        "basis_labels": list(H.labels), "unit": entries(H.unit), "counit": entries(H.counit),
        "mult": entries(H.mult), "comult": entries(H.comult), "antipode": entries(H.antipode),
        "star": entries(H.star) if H.star is not None else None,
    }
    if H.generators is not None:
        doc["generators"] = list(H.generators)
    if qt is not None:
        doc["r_matrix"] = {"R": entries(qt.R), "Rbar": entries(qt.Rbar) if qt.Rbar is not None else None}
    if twist is not None:
        doc["twist"] = twist_doc(twist)
    if recipe is not None or parent is not None:
        doc["provenance"] = {"recipe": recipe, "parent": parent}
    return doc


def twist_doc(t):
    out = {"theta": entries(t.theta), "theta_bar": entries(t.theta_bar)}
    if t.u is not None:
        out["u"] = entries(t.u)
    if t.w is not None:
        out["w"] = entries(t.w)
    return out


def content_hash(doc):
    body = {k: v for k, v in doc.items() if k != "provenance"}
    return hashlib.sha256(json.dumps(body, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def dumps(doc):
    """Canonical text: sorted keys, one sparse entry per line."""
    def value(v, pad):
        if isinstance(v, list) and v and all(isinstance(e, list) for e in v):
            inner = (",\n" + pad + "  ").join(json.dumps(e, separators=(",", ":")) for e in v)
            return "[\n" + pad + "  " + inner + "\n" + pad + "]"
        if isinstance(v, dict):
            if not v:
                return "{}"
            items = [f'{pad}  {json.dumps(k)}: {value(v[k], pad + "  ")}' for k in sorted(v)]
            return "{\n" + ",\n".join(items) + "\n" + pad + "}"
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return value(doc, "") + "\n"


def save(path, H, qt=None, twist=None, recipe=None, parent=None):
    doc = to_doc(H, qt, twist, recipe, parent)
    text = dumps(doc)
    with open(path, "w") as fh:
        fh.write(text)
    return content_hash(doc)


@dataclass
class Loaded:
    H: QuantumGroupoid
    qt: object = None
    twist: object = None
    report: object = None
    warnings: list = field(default_factory=list)
    doc: dict = field(default_factory=dict)

    @property
    def verified(self):
        return self.report is not None and self.report.passed


def parse_doc(doc):
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    for k in REQUIRED:
        if k not in doc:
            raise ParseError(f"missing section {k!r}")
    if doc["format_version"] != FORMAT_VERSION:
        raise ParseError(f"format_version {doc['format_version']!r} is not supported (expected {FORMAT_VERSION})")
    n, N = doc["dim"], doc["field_order"]
    if not isinstance(n, int) or n < 1:
        raise ParseError("dim must be a positive integer")
    if not isinstance(N, int) or N < 1:
        raise ParseError("field_order must be a positive integer")
    if len(doc["basis_labels"]) != n:
        raise ParseError(f"basis_labels has {len(doc['basis_labels'])} entries, dim is {n}")
    t = lambda key, dims: _tensor(doc, key, dims, N)
    star = t("star", (n, n)) if doc.get("star") is not None else None
    H = QuantumGroupoid(t("mult", (n, n, n)), t("unit", (n,)), t("comult", (n, n, n)),
                        t("counit", (n,)), t("antipode", (n, n)), star=star, order=N,
                        labels=doc["basis_labels"], name=doc["name"], generators=doc.get("generators"))
    qt = tw = None
    if doc.get("r_matrix") is not None:
        from .qtriang import QTStructure
        r = doc["r_matrix"]
        rb = _tensor(r, "Rbar", (n, n), N) if r.get("Rbar") is not None else None
        qt = QTStructure(_tensor(r, "R", (n, n), N), rb)
    if doc.get("twist") is not None:
        tw = parse_twist(doc["twist"], n, N)
    return H, qt, tw


def parse_twist(d, n, N):
    from .twisting import Twist
    opt = lambda k: _tensor(d, k, (n,), N) if d.get(k) is not None else None
    return Twist(_tensor(d, "theta", (n, n), N), _tensor(d, "theta_bar", (n, n), N), opt("u"), opt("w"))


def _decode_error(text, exc):
    seen = re.findall(r'^  "(\w+)":', text[:exc.pos], re.M)
    msg = f"line {exc.lineno}: {exc.msg}"
    if seen:
        msg += f"; section {seen[-1]!r} is incomplete"
    missing = [k for k in REQUIRED if k not in seen[:-1]]
    if missing:
        msg += "; missing sections: " + ", ".join(missing)
    return ParseError(msg)


def loads(text, skip_verify=False, quiet=True):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _decode_error(text, exc) from None
    H, qt, tw = parse_doc(doc)
    out = Loaded(H, qt, tw, doc=doc)
    if skip_verify:
        out.warnings.append("axioms not verified")
        return out
    out.report = verify_axioms(H, quiet=quiet)
    if not out.report.passed:
        raise VerificationError(out.report)
    return out


class VerificationError(StructureError):
    def __init__(self, report):
        self.report = report
        super().__init__("axiom failure: " + ", ".join(c.name for c in report.failed))


def load(path, skip_verify=False, quiet=True):
    with open(path) as fh:
        return loads(fh.read(), skip_verify, quiet)


def load_twist(path, H):
    """A twist section from either a full document or a bare {"twist": ...} file."""
    with open(path) as fh:
        try:
            doc = json.loads(fh.read())
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {exc.lineno}: {exc.msg}") from None
    sec = doc.get("twist", doc)
    N = doc.get("field_order", H.order)
    if N != H.order:
        raise ParseError(f"twist field_order {N} differs from the algebra's {H.order}")
    return parse_twist(sec, H.dim, N)
