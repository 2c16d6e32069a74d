"""File formats: lattice files, PGM images, model files, bundle manifests.

Lattice file: text header `LVLM-LATTICE <d> <len_1> ... <len_d> <dtype>`
with dtype u8 (symbol/state indices) or f64x<M> (real vectors), followed by
whitespace-separated row-major values. 2D u8 lattices can also be read and
written as PGM (P2 or P5). Model files are key=value text with matrices
row-major; floats carry 17 significant digits so round trips are
bit-faithful. All writes go through a temp file plus rename.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np

from .classify import ClassEntry, ClassifierBundle
from .discrete import DiscreteModel
from .errors import InputError
from .lattice import StateLattice, SymbolLattice
from .real import RealModel
from .vq import Codebook

LATTICE_MAGIC = "LVLM-LATTICE"


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _fmt_vec(a) -> str:
    return " ".join(_fmt(x) for x in np.asarray(a, dtype=np.float64).ravel())


def write_atomic(path, data: bytes):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- lattice files -----------------------------------------------------------

def write_lattice(path, lat: SymbolLattice | StateLattice):
    if isinstance(lat, StateLattice):
        lat = SymbolLattice.discrete(lat.states, M=lat.N)
    lengths = lat.shape.lengths
    if lat.kind == "discrete":
        if lat.values.size and lat.values.max() > 255:
            raise InputError("u8 lattice values must fit in [0, 255]")
        header = f"{LATTICE_MAGIC} {lat.shape.d} {' '.join(map(str, lengths))} u8\n"
        body = "\n".join(" ".join(map(str, row)) for row in lat.values.reshape(-1, lengths[-1]))
    else:
        header = f"{LATTICE_MAGIC} {lat.shape.d} {' '.join(map(str, lengths))} f64x{lat.M}\n"
        body = "\n".join(_fmt_vec(node) for node in lat.values.reshape(-1, lat.M))
    write_atomic(path, (header + body + "\n").encode())


def read_lattice(path, M: int | None = None) -> SymbolLattice:
    text = Path(path).read_text().split()
    if not text or text[0] != LATTICE_MAGIC:
        raise InputError(f"{path}: not a lattice file")
    try:
        d = int(text[1])
        lengths = tuple(int(x) for x in text[2:2 + d])
        dtype = text[2 + d]
        vals = text[3 + d:]
    except (IndexError, ValueError) as e:
        raise InputError(f"{path}: malformed lattice header") from e
    count = int(np.prod(lengths))
    if dtype == "u8":
        if len(vals) != count:
            raise InputError(f"{path}: expected {count} values, got {len(vals)}")
        arr = np.array([int(v) for v in vals], dtype=np.int64).reshape(lengths)
        return SymbolLattice.discrete(arr, M=M)
    if dtype.startswith("f64x"):
        m = int(dtype[4:])
        if len(vals) != count * m:
            raise InputError(f"{path}: expected {count * m} values, got {len(vals)}")
        arr = np.array([float(v) for v in vals]).reshape(lengths + (m,))
        return SymbolLattice.real(arr)
    raise InputError(f"{path}: unknown dtype {dtype!r}")


# -- PGM ---------------------------------------------------------------------

def read_pgm(path, M: int | None = None) -> SymbolLattice:
    data = Path(path).read_bytes()
    tokens = []
    pos = 0
    # header: magic, width, height, maxval; '#' starts a comment to end of line
    while len(tokens) < 4 and pos < len(data):
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        tokens.append(data[start:pos])
    if len(tokens) < 4 or tokens[0] not in (b"P2", b"P5"):
        raise InputError(f"{path}: not a P2/P5 PGM file")
    width, height, maxval = (int(t) for t in tokens[1:4])
    if maxval > 255:
        raise InputError(f"{path}: maxval {maxval} > 255 unsupported")
    if tokens[0] == b"P5":
        pos += 1  # single whitespace byte after maxval
        raster = np.frombuffer(data, dtype=np.uint8, count=width * height, offset=pos)
    else:
        raster = np.array([int(v) for v in data[pos:].split()], dtype=np.int64)
        if raster.size != width * height:
            raise InputError(f"{path}: expected {width * height} samples")
    arr = raster.astype(np.int64).reshape(height, width)
    return SymbolLattice.discrete(arr, M=M if M is not None else maxval + 1)


def write_pgm(path, lat: SymbolLattice | StateLattice, *, binary=True, maxval=None):
    if isinstance(lat, StateLattice):
        lat = SymbolLattice.discrete(lat.states, M=lat.N)
    if lat.kind != "discrete" or lat.shape.d != 2:
        raise InputError("PGM output needs a 2-d discrete lattice")
    if maxval is None:
        maxval = max(1, lat.M - 1)
    if maxval > 255 or (lat.values.size and lat.values.max() > maxval):
        raise InputError("values exceed PGM maxval")
    h, w = lat.shape.lengths
    if binary:
        header = f"P5\n{w} {h}\n{maxval}\n".encode()
        write_atomic(path, header + lat.values.astype(np.uint8).tobytes())
    else:
        header = f"P2\n{w} {h}\n{maxval}\n"
        body = "\n".join(" ".join(map(str, row)) for row in lat.values)
        write_atomic(path, (header + body + "\n").encode())


def states_to_pgm(path, states: StateLattice):
    """Visualization: states mapped to evenly spaced gray levels in [0, 255]."""
    if states.shape.d != 2:
        raise InputError("PGM visualization needs a 2-d state lattice")
    if states.N > 1:
        gray = (states.states * 255) // (states.N - 1)
    else:
        gray = np.zeros_like(states.states)
    write_pgm(path, SymbolLattice.discrete(gray, M=256), maxval=255)


def read_lattice_auto(path, M: int | None = None) -> SymbolLattice:
    """Dispatch on content: PGM magic or lattice magic."""
    head = Path(path).open("rb").read(2)
    if head in (b"P2", b"P5"):
        return read_pgm(path, M=M)
    return read_lattice(path, M=M)


# -- model files ---------------------------------------------------------------

def _kv_lines(pairs):
    return "".join(f"{k}={v}\n" for k, v in pairs)


def write_model(path, model: DiscreteModel | RealModel):
    common = [
        ("N", model.N), ("M", model.M), ("d", model.d),
        ("w", model.w), ("w_e", model.w_e), ("w_l", model.w_l),
        ("alpha", _fmt(model.alpha)), ("A", _fmt_vec(model.A)),
    ]
    if isinstance(model, DiscreteModel):
        pairs = [("variant", "discrete")] + common + [("B", _fmt_vec(model.B))]
    else:
        pairs = [("variant", "real")] + common + [
            ("mu", _fmt_vec(model.mu)), ("sigma", _fmt_vec(model.sigma)),
        ]
    write_atomic(path, _kv_lines(pairs).encode())


def _parse_kv(path) -> dict:
    fields = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InputError(f"{path}: malformed line {line!r}")
        k, v = line.split("=", 1)
        fields[k.strip()] = v.strip()
    return fields


def read_model(path) -> DiscreteModel | RealModel:
    f = _parse_kv(path)
    try:
        variant = f["variant"]
        N, M, d = int(f["N"]), int(f["M"]), int(f["d"])
        w, w_e, w_l = int(f["w"]), int(f["w_e"]), int(f["w_l"])
        alpha = float(f["alpha"])
        A = np.fromstring(f["A"], sep=" ").reshape(N, N)
        if variant == "discrete":
            B = np.fromstring(f["B"], sep=" ").reshape(N, M)
            return DiscreteModel(N=N, M=M, d=d, A=A, B=B, w=w, w_e=w_e, w_l=w_l, alpha=alpha)
        if variant == "real":
            mu = np.fromstring(f["mu"], sep=" ").reshape(N, M)
            sigma = np.fromstring(f["sigma"], sep=" ").reshape(N, M, M)
            return RealModel(N=N, M=M, d=d, A=A, mu=mu, sigma=sigma, w=w, w_e=w_e, w_l=w_l, alpha=alpha)
    except (KeyError, ValueError) as e:
        raise InputError(f"{path}: malformed model file ({e})") from e
    raise InputError(f"{path}: unknown variant {variant!r}")


def write_codebook(path, codebook: Codebook):
    pairs = [
        ("variant", "codebook"), ("N", codebook.N), ("M", codebook.M),
        ("centroids", _fmt_vec(codebook.centroids)),
        ("sizes", " ".join(str(int(s)) for s in codebook.sizes)),
    ]
    write_atomic(path, _kv_lines(pairs).encode())


def read_codebook(path) -> Codebook:
    f = _parse_kv(path)
    try:
        N, M = int(f["N"]), int(f["M"])
        centroids = np.fromstring(f["centroids"], sep=" ").reshape(N, M)
        sizes = np.fromstring(f["sizes"], sep=" ")
        return Codebook(centroids, sizes)
    except (KeyError, ValueError) as e:
        raise InputError(f"{path}: malformed codebook file ({e})") from e


# -- classifier bundles --------------------------------------------------------

BUNDLE_MAGIC = "LVLM-BUNDLE"


def write_bundle(path, entries):
    """entries: iterable of (label, prior, model_path); paths stored as given."""
    lines = [BUNDLE_MAGIC]
    for label, prior, model_path in entries:
        if any(ch.isspace() for ch in label):
            raise InputError(f"class label {label!r} must not contain whitespace")
        lines.append(f"{label} {_fmt(prior)} {model_path}")
    write_atomic(path, ("\n".join(lines) + "\n").encode())


def read_bundle(path) -> ClassifierBundle:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or lines[0].strip() != BUNDLE_MAGIC:
        raise InputError(f"{path}: not a bundle manifest")
    base = Path(path).parent
    entries = []
    for ln in lines[1:]:
        parts = ln.split(maxsplit=2)
        if len(parts) != 3:
            raise InputError(f"{path}: malformed bundle line {ln!r}")
        label, prior, model_path = parts[0], float(parts[1]), parts[2]
        mp = Path(model_path)
        if not mp.is_absolute():
            mp = base / mp
        entries.append(ClassEntry(label, read_model(mp), float(np.log(prior))))
    return ClassifierBundle(tuple(entries))
