"""Complex-description files: parsing, validation and canonical serialization.

Files are JSON.  Rationals are written as "num/den" strings (integers as
"n"); the canonical form uses sorted keys, two-space indentation, LF line
endings and a trailing newline, so serialize(parse(serialize(x))) is a fixed
point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from . import exact as ex
from .complexes import (
    CupStructure,
    FluxCochain,
    GaugeCochain,
    GradedComplex,
    TwistedComplex,
    assemble_twisted,
    check_flux,
    explicit_cup,
    fold_to_super,
)
from .errors import ParseError, TwistedTorsionError, ValidationError
from .linalg import InnerProductData
from .simplicial import (
    GroupRingBoundary,
    Representation,
    SimplicialComplexData,
    aw_cup,
    coboundary_matrices,
    evaluate_local_system,
    lens_space,
    reduce_word,
)
from .tduality import PairFormModel, model_from_entries
from .torsion import ReferenceBases

SCHEMA_VERSION = 1
KINDS = ("graded", "simplicial", "group-ring", "lens", "pair-model")


# -- scalar helpers -------------------------------------------------------------

def _rat(x, where: str) -> Fraction:
    if isinstance(x, bool):
        raise ParseError(f"{where}: expected a rational, got a boolean")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as err:
            raise ParseError(f"{where}: cannot read {x!r} as a rational") from err
    if isinstance(x, float):
        raise ParseError(f"{where}: floating literal {x!r}; write rationals as \"num/den\" strings")
    raise ParseError(f"{where}: expected a rational, got {type(x).__name__}")


def _rstr(x: Fraction) -> str:
    return str(Fraction(x))


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{where}: expected an integer")
    return x


def _matrix(rows, shape: tuple[int, int], where: str) -> np.ndarray:
    r, c = shape
    if not isinstance(rows, list) or len(rows) != r:
        raise ValidationError(f"{where}: expected {r} rows")
    out = ex.zeros(r, c)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != c:
            raise ValidationError(f"{where}: row {i} should have {c} entries")
        for j, v in enumerate(row):
            out[i, j] = _rat(v, f"{where}[{i}][{j}]")
    return out


def _square(rows, where: str) -> np.ndarray:
    if not isinstance(rows, list):
        raise ParseError(f"{where}: expected a matrix")
    n = len(rows)
    return _matrix(rows, (n, n), where)


def _vector(vals, n: int | None, where: str) -> np.ndarray:
    if not isinstance(vals, list) or (n is not None and len(vals) != n):
        raise ValidationError(f"{where}: expected a vector of length {n}")
    return ex.qvec([_rat(v, f"{where}[{i}]") for i, v in enumerate(vals)])


def _mat_out(M: np.ndarray) -> list:
    return [[_rstr(v) for v in row] for row in M]


def _vec_out(v) -> list:
    return [_rstr(x) for x in v]


def _require(data: dict, key: str, kind: str):
    if key not in data:
        raise ParseError(f"{kind} file is missing the {key!r} field")
    return data[key]


# -- in-memory result ----------------------------------------------------------------

@dataclass
class ComplexFile:
    kind: str
    data: dict
    name: str = ""
    gc: GradedComplex | None = None
    cup: CupStructure | None = None
    flux: FluxCochain = field(default_factory=lambda: FluxCochain({}))
    gauge: GaugeCochain | None = None
    gram: InnerProductData | None = None
    refs: ReferenceBases | None = None
    model: PairFormModel | None = None
    representation: Representation | None = None

    def twisted(self, flux: FluxCochain | None = None) -> TwistedComplex:
        if self.gc is None:
            raise ValidationError(f"a {self.kind} file does not describe a cochain complex")
        h = self.flux if flux is None else flux
        if h.is_zero():
            return fold_to_super(self.gc)
        if self.cup is None:
            raise ValidationError("flux present but no cup structure supplied")
        return assemble_twisted(self.gc, self.cup, h)

    @property
    def phase_ambiguous(self) -> bool:
        if self.representation is None:
            return False
        for M in self.representation.generators.values():
            Mf = ex.to_float(M)
            if not np.allclose(Mf.T @ Mf, np.eye(len(Mf)), atol=1e-12):
                return True
        return False


# -- section parsers --------------------------------------------------------------------

def _parse_graded(d: dict) -> tuple[dict, GradedComplex]:
    dims = [_int(x, "dims") for x in _require(d, "dims", "graded")]
    cobs_in = d.get("coboundaries", [])
    if len(cobs_in) != max(len(dims) - 1, 0):
        raise ValidationError(f"expected {max(len(dims) - 1, 0)} coboundary matrices, got {len(cobs_in)}")
    cobs = [_matrix(M, (dims[i + 1], dims[i]), f"coboundaries[{i}]") for i, M in enumerate(cobs_in)]
    gc = GradedComplex(tuple(dims), tuple(cobs), name=d.get("name", ""))
    return {"dims": dims, "coboundaries": [_mat_out(M) for M in cobs]}, gc


def _parse_simplicial(d: dict) -> tuple[dict, SimplicialComplexData]:
    nv = _int(_require(d, "vertex_count", "simplicial"), "vertex_count")
    levels = _require(d, "simplices", "simplicial")
    if not isinstance(levels, list):
        raise ParseError("simplices must be a list of per-dimension lists")
    simp = tuple(tuple(tuple(_int(v, "simplex vertex") for v in s) for s in level) for level in levels)
    sc = SimplicialComplexData(nv, simp, name=d.get("name", ""))
    return {"vertex_count": nv, "simplices": [[list(s) for s in level] for level in sc.simplices]}, sc


def _word(w, where: str):
    if not isinstance(w, list):
        raise ParseError(f"{where}: a word is a list of [generator, exponent] pairs")
    out = []
    for item in w:
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], str)):
            raise ParseError(f"{where}: a word is a list of [generator, exponent] pairs")
        out.append((item[0], _int(item[1], where)))
    return reduce_word(out)


def _parse_group_ring(d: dict) -> tuple[dict, GroupRingBoundary, Representation]:
    cells = [_int(x, "cells") for x in _require(d, "cells", "group-ring")]
    bnd_in = _require(d, "boundaries", "group-ring")
    bnds, bnd_out = [], []
    for i, B in enumerate(bnd_in, start=1):
        rows, rows_out = [], []
        for s, row in enumerate(B):
            entries, entries_out = [], []
            for t, entry in enumerate(row):
                terms: dict = {}
                for term in entry:
                    w = _word(term.get("word", []), f"boundaries[{i - 1}][{s}][{t}]")
                    terms[w] = terms.get(w, ex.ZERO) + _rat(term.get("coeff", 1), "coeff")
                terms = {w: c for w, c in terms.items() if c}
                entries.append(terms)
                entries_out.append([{"coeff": _rstr(c), "word": [[g, e] for g, e in w]}
                                    for w, c in sorted(terms.items())])
            rows.append(tuple(entries))
            rows_out.append(entries_out)
        bnds.append(tuple(rows))
        bnd_out.append(rows_out)
    grb = GroupRingBoundary(tuple(cells), tuple(bnds), name=d.get("name", ""))
    rep_in = _require(d, "representation", "group-ring")
    rank = _int(rep_in.get("rank", 1), "rank")
    gens, gens_out = {}, {}
    for g, M in sorted(rep_in.get("generators", {}).items()):
        if any(isinstance(v, float) for row in M for v in row):
            A = np.array(M, dtype=float)
            if A.shape != (rank, rank):
                raise ValidationError(f"generator {g} has shape {A.shape}, rank is {rank}")
            gens[g] = A
            gens_out[g] = [[float(v) for v in row] for row in A]
        else:
            gens[g] = _matrix(M, (rank, rank), f"generator {g}")
            gens_out[g] = _mat_out(gens[g])
    rels = tuple(_word(w, "relation") for w in rep_in.get("relations", []))
    rep = Representation(gens, rels, rank)
    out = {"cells": cells, "boundaries": bnd_out,
           "representation": {"rank": rank, "generators": gens_out,
                              "relations": [[[g, e] for g, e in w] for w in rels]}}
    return out, grb, rep


def _parse_cup(d, dims) -> tuple[dict, CupStructure]:
    entries = []
    for e in d.get("entries", []):
        if not (isinstance(e, list) and len(e) == 6):
            raise ParseError("cup entries are [p, i, q, j, k, coeff]")
        p, i, q, j, k = (_int(x, "cup index") for x in e[:5])
        if p + q >= len(dims) or i >= dims[p] or j >= dims[q] or k >= dims[p + q]:
            raise ValidationError(f"cup entry {e[:5]} is out of range")
        entries.append((p, i, q, j, k, _rat(e[5], "cup coefficient")))
    unit = d.get("unit")
    unit_v = None if unit is None else _vector(unit, dims[0], "cup unit")
    cup = explicit_cup(dims, entries, None if unit_v is None else list(unit_v))
    merged: dict = {}
    for p, i, q, j, k, c in entries:
        merged[(p, i, q, j, k)] = merged.get((p, i, q, j, k), ex.ZERO) + c
    out = {"entries": [[*key, _rstr(c)] for key, c in sorted(merged.items()) if c]}
    if unit_v is not None:
        out["unit"] = _vec_out(unit_v)
    return out, cup


def _parse_cochains(d, dims, where: str) -> tuple[dict, dict[int, np.ndarray]]:
    if not isinstance(d, dict):
        raise ParseError(f"{where} must map degrees to vectors")
    comps, out = {}, {}
    for key, v in d.items():
        try:
            deg = int(key)
        except ValueError as err:
            raise ParseError(f"{where}: degree key {key!r} is not an integer") from err
        if where == "flux" and deg == 1:
            raise ParseError("degree-1 flux is not accepted: absorb it into the flat connection instead")
        if not 0 <= deg < len(dims):
            raise ValidationError(f"{where}: degree {deg} outside 0..{len(dims) - 1}")
        comps[deg] = _vector(v, dims[deg], f"{where}[{deg}]")
        out[str(deg)] = _vec_out(comps[deg])
    return out, comps


def _parse_gram(d, dims) -> tuple[dict, InnerProductData]:
    if "degrees" in d:
        mats = d["degrees"]
        if len(mats) != len(dims):
            raise ValidationError(f"gram: {len(mats)} degree blocks for {len(dims)} degrees")
        grams = [_matrix(M, (dims[i], dims[i]), f"gram degree {i}") for i, M in enumerate(mats)]
        return {"degrees": [_mat_out(G) for G in grams]}, InnerProductData.from_degrees(dims, grams)
    ev, od = _square(_require(d, "even", "gram"), "gram even"), _square(_require(d, "odd", "gram"), "gram odd")
    return {"even": _mat_out(ev), "odd": _mat_out(od)}, InnerProductData(ev, od)


def _parse_refs(d, dims) -> tuple[dict, ReferenceBases]:
    if "degrees" in d:
        per = d["degrees"]
        if len(per) != len(dims):
            raise ValidationError(f"refs: {len(per)} degree lists for {len(dims)} degrees")
        vecs = [[_vector(v, dims[i], f"refs degree {i}") for v in vs] for i, vs in enumerate(per)]
        return ({"degrees": [[_vec_out(v) for v in vs] for vs in vecs]},
                ReferenceBases.from_degrees(dims, vecs, label="file"))
    even = [_vector(v, None, "refs even") for v in d.get("even", [])]
    odd = [_vector(v, None, "refs odd") for v in d.get("odd", [])]
    return ({"even": [_vec_out(v) for v in even], "odd": [_vec_out(v) for v in odd]},
            ReferenceBases.from_parity(even, odd, label="file"))


def _parse_model(d) -> tuple[dict, PairFormModel]:
    names = [str(x) for x in _require(d, "names", "pair-model")]
    degrees = [_int(x, "degrees") for x in _require(d, "degrees", "pair-model")]
    prods = [(_int(e[0], "i"), _int(e[1], "j"), _int(e[2], "k"), _rat(e[3], "coeff")) for e in d.get("products", [])]
    diff = [(_int(e[0], "i"), _int(e[1], "k"), _rat(e[2], "coeff")) for e in d.get("differential", [])]
    F = _vector(_require(d, "F", "pair-model"), len(names), "F")
    Fh = _vector(_require(d, "Fhat", "pair-model"), len(names), "Fhat")
    Om = _vector(_require(d, "Omega", "pair-model"), len(names), "Omega")
    pairing = d.get("pairing")
    P = None if pairing is None else _matrix(pairing, (len(names), len(names)), "pairing")
    m = model_from_entries(names, degrees, prods, diff, F, Fh, Om, None if P is None else P.tolist(),
                           name=d.get("name", ""))
    out = {"names": names, "degrees": degrees,
           "products": [[i, j, k, _rstr(c)] for i, j, k, c in sorted(prods)],
           "differential": [[i, k, _rstr(c)] for i, k, c in sorted(diff)],
           "F": _vec_out(F), "Fhat": _vec_out(Fh), "Omega": _vec_out(Om)}
    if P is not None:
        out["pairing"] = _mat_out(P)
    return out, m


# -- entry points ------------------------------------------------------------------------

def _load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, err.lineno, err.colno) from err


def parse_data(d: dict) -> ComplexFile:
    if not isinstance(d, dict):
        raise ParseError("top level must be an object")
    kind = d.get("kind")
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    schema = d.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema version {schema!r}")
    name = d.get("name", "")
    out: dict = {"kind": kind, "schema": SCHEMA_VERSION}
    if name:
        out["name"] = name
    cf = ComplexFile(kind, out, name)
    try:
        if kind == "pair-model":
            body, cf.model = _parse_model(d)
            out.update(body)
            return cf
        cup_from_file = "cup" in d
        if kind == "graded":
            body, cf.gc = _parse_graded(d)
        elif kind == "simplicial":
            body, sc = _parse_simplicial(d)
            cf.gc = coboundary_matrices(sc)
            if not cup_from_file:
                cf.cup = aw_cup(sc)
        elif kind == "group-ring":
            body, grb, rep = _parse_group_ring(d)
            cf.representation = rep
            cf.gc = evaluate_local_system(grb, rep)
        else:
            p = _int(_require(d, "p", "lens"), "p")
            body = {"p": p}
            cf.gc, cup, _ = lens_space(p)
            if not cup_from_file:
                cf.cup = cup
        out.update(body)
        dims = cf.gc.dims
        if cup_from_file:
            out["cup"], cf.cup = _parse_cup(d["cup"], dims)
        if "flux" in d:
            out["flux"], comps = _parse_cochains(d["flux"], dims, "flux")
            cf.flux = FluxCochain(comps)
            if not cf.flux.is_zero():
                if cf.cup is None:
                    raise ValidationError("flux present but no cup structure supplied")
                check_flux(cf.gc, cf.cup, cf.flux)
        if "gauge" in d:
            out["gauge"], comps = _parse_cochains(d["gauge"], dims, "gauge")
            cf.gauge = GaugeCochain(comps)
        if "gram" in d:
            out["gram"], cf.gram = _parse_gram(d["gram"], dims)
        if "refs" in d:
            out["refs"], cf.refs = _parse_refs(d["refs"], dims)
    except (ParseError, ValidationError):
        raise
    except TwistedTorsionError as err:
        raise ValidationError(str(err)) from err
    return cf


def parse_complex(source) -> ComplexFile:
    """Parse a path, a file object or a JSON string."""
    if hasattr(source, "read"):
        text = source.read()
    elif isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        text = Path(source).read_text()
    else:
        text = source
    return parse_data(_load_json(text))


def serialize(cf: ComplexFile | dict) -> str:
    data = cf.data if isinstance(cf, ComplexFile) else cf
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def parse_section(source, key: str, dims) -> dict:
    """Read a stand-alone gram or refs file (either bare or wrapped in {key: ...})."""
    d = _load_json(Path(source).read_text() if not hasattr(source, "read") else source.read())
    return d.get(key, d) if isinstance(d, dict) else d


def load_gram(source, dims) -> InnerProductData:
    try:
        return _parse_gram(parse_section(source, "gram", dims), dims)[1]
    except (ParseError, ValidationError):
        raise
    except TwistedTorsionError as err:
        raise ValidationError(str(err)) from err


def load_refs(source, dims) -> ReferenceBases:
    return _parse_refs(parse_section(source, "refs", dims), dims)[1]


def bundled(name: str) -> Path:
    """Path of a data file shipped with the package."""
    return Path(__file__).parent / "data" / name
