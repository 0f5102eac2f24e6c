"""Deterministic JSON output and state-file parsing.

Reports are written with the key order given by the caller and every float
formatted with 17 significant digits, so identical runs give identical
bytes.  Writes go to a temporary file in the target directory that is then
renamed over the destination.
"""

from __future__ import annotations

import json
import math
import os
import tempfile

import numpy as np

from .models import Electron, Family, HO, NLevelHO, Site, Spin, SpinHO, SystemModel, canonical_index

__all__ = ["dumps", "write_atomic", "load_json", "parse_label", "load_state", "state_to_dict"]


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite float in report")
    s = format(x, ".17g")
    if not any(c in s for c in ".eE"):
        s += ".0"
    return s


def _dump(obj, indent: int, level: int, out: list) -> None:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        out.append(json.dumps(None if obj is None else bool(obj)))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for k, (key, val) in enumerate(obj.items()):
            out.append(("," if k else "") + pad + json.dumps(str(key), ensure_ascii=False) + ": ")
            _dump(val, indent, level + 1, out)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in items):
            out.append("[")
            for k, v in enumerate(items):
                out.append(", " if k else "")
                _dump(v, indent, level + 1, out)
            out.append("]")
            return
        out.append("[")
        for k, v in enumerate(items):
            out.append(("," if k else "") + pad)
            _dump(v, indent, level + 1, out)
        out.append(end + "]")
    elif isinstance(obj, (complex, np.complexfloating)):
        _dump([obj.real, obj.imag], indent, level, out)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    out: list[str] = []
    _dump(obj, indent, 0, out)
    return "".join(out) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _spin(word: str) -> Spin:
    w = word.strip().lower()
    if w in ("up", "u", "↑"):
        return Spin.UP
    if w in ("down", "d", "↓"):
        return Spin.DOWN
    raise ValueError(f"bad spin {word!r}")


def parse_label(model: SystemModel, label) -> int:
    """Canonical index of a state-file label.

    Accepted forms: an integer index; ``"n"`` for the oscillator and the
    block chain; ``"up,n"`` / ``"down,n"``; ``"k,n"`` for the N-level ion;
    ``"n,l,up"`` for the trapped electron.
    """
    if isinstance(label, bool):
        raise ValueError("bad label")
    if isinstance(label, int):
        if not 0 <= label < model.dim:
            raise ValueError(f"index {label} outside 0..{model.dim - 1}")
        return label
    parts = [p.strip() for p in str(label).split(",")]
    fam = model.family
    try:
        if fam is Family.HARMONIC_OSCILLATOR:
            (n,) = parts
            s = HO(int(n))
        elif fam is Family.BLOCK_EXAMPLE:
            (i,) = parts
            s = Site(int(i))
        elif fam is Family.SPIN_OSCILLATOR:
            sp, n = parts
            s = SpinHO(_spin(sp), int(n))
        elif fam is Family.NLEVEL_OSCILLATOR:
            k, n = parts
            s = NLevelHO(int(k), int(n))
        else:
            n, l, sp = parts
            s = Electron(int(n), int(l), _spin(sp))
        return canonical_index(model, s)
    except (ValueError, IndexError, TypeError) as exc:
        raise ValueError(f"bad label {label!r} for {fam.value}: {exc}") from None


def load_state(model: SystemModel, doc: dict, normalize: bool = False) -> np.ndarray:
    """State vector from ``{"normalize": bool, "amplitudes": [[label, re, im], ...]}``.

    Without normalization (from the file or the ``normalize`` argument) the
    norm must already be 1 within 1e-9.
    """
    if not isinstance(doc, dict) or "amplitudes" not in doc:
        raise ValueError("state file needs an 'amplitudes' list")
    normalize = normalize or bool(doc.get("normalize", False))
    x = np.zeros(model.dim, dtype=complex)
    for entry in doc["amplitudes"]:
        if len(entry) != 3:
            raise ValueError(f"amplitude entry {entry!r} is not [label, re, im]")
        label, re, im = entry
        z = complex(float(re), float(im))
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError("amplitudes must be finite")
        x[parse_label(model, label)] += z
    nrm = float(np.linalg.norm(x))
    if nrm == 0:
        raise ValueError("state has zero norm")
    if normalize:
        return x / nrm
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError(f"state norm {nrm:.12g} is not 1; pass normalize")
    return x


def state_to_dict(x: np.ndarray, tol: float = 0.0) -> dict:
    """Sparse ``amplitudes`` form with integer labels."""
    return {
        "normalize": False,
        "amplitudes": [[int(i), float(x[i].real), float(x[i].imag)] for i in np.flatnonzero(np.abs(x) > tol)],
    }
