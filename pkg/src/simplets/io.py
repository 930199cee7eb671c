"""Dataset loaders and the report / profile file formats."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .analysis import CharacteristicProfile
from .core import SimplicialComplex
from .exact import CountReport

REPORT_FORMAT = "simplet-count-report"
PROFILE_FORMAT = "simplet-profile"
SCHEMA_VERSION = 1
FORMATS = ("plain", "benson")


class DatasetError(ValueError):
    """Malformed input data."""


@dataclass(frozen=True)
class DatasetDescriptor:
    name: str
    format: str
    paths: tuple[str, ...]
    original_ids: tuple[int, ...] = field(repr=False)

    @property
    def dense_id(self) -> dict[int, int]:
        return {u: i for i, u in enumerate(self.original_ids)}


def _remap(simplices):
    ids = sorted({u for s in simplices for u in s})
    dense = {u: i for i, u in enumerate(ids)}
    rows = [[dense[u] for u in s] for s in simplices]
    return SimplicialComplex.from_simplices(rows, len(ids)), tuple(ids)


def _int_token(tok: str, where: str) -> int:
    try:
        value = int(tok)
    except ValueError:
        raise DatasetError(f"{where}: not an integer: {tok!r}") from None
    if value < 0:
        raise DatasetError(f"{where}: negative node id {value}")
    return value


def read_benson(prefix) -> tuple[SimplicialComplex, DatasetDescriptor]:
    """Read ``{prefix}-nverts.txt`` / ``{prefix}-simplices.txt``; times are ignored."""
    prefix = str(prefix)
    nverts_path, simp_path = f"{prefix}-nverts.txt", f"{prefix}-simplices.txt"
    sizes = []
    for lineno, line in enumerate(Path(nverts_path).read_text().splitlines(), start=1):
        if line.strip():
            n = _int_token(line.strip(), f"{nverts_path}:{lineno}")
            if n < 1:
                raise DatasetError(f"{nverts_path}:{lineno}: simplex size must be positive")
            sizes.append(n)
    ids = []
    for lineno, line in enumerate(Path(simp_path).read_text().splitlines(), start=1):
        if line.strip():
            ids.append((_int_token(line.strip(), f"{simp_path}:{lineno}"), lineno))
    if sum(sizes) != len(ids):
        last = ids[-1][1] if ids else 0
        raise DatasetError(
            f"{simp_path}:{last}: expected {sum(sizes)} node ids from {nverts_path}, found {len(ids)}"
        )
    simplices, pos = [], 0
    for n in sizes:
        simplices.append(sorted({u for u, _ in ids[pos:pos + n]}))
        pos += n
    complex, original = _remap(simplices)
    return complex, DatasetDescriptor(Path(prefix).name, "benson", (nverts_path, simp_path), original)


def read_plain(path) -> tuple[SimplicialComplex, DatasetDescriptor]:
    """One simplex per line, whitespace-separated ids; ``#`` starts a comment line."""
    simplices = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        where = f"{path}:{lineno}"
        nodes = [_int_token(tok, where) for tok in line.split()]
        if len(set(nodes)) != len(nodes):
            raise DatasetError(f"{where}: duplicate node in simplex")
        simplices.append(nodes)
    complex, original = _remap(simplices)
    return complex, DatasetDescriptor(Path(path).stem, "plain", (str(path),), original)


def load_benson(prefix) -> SimplicialComplex:
    return read_benson(prefix)[0]


def load_plain(path) -> SimplicialComplex:
    return read_plain(path)[0]


def load_dataset(path, fmt: str = "plain") -> tuple[SimplicialComplex, DatasetDescriptor]:
    if fmt == "plain":
        return read_plain(path)
    if fmt == "benson":
        return read_benson(path)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def save_plain(complex: SimplicialComplex, path) -> None:
    Path(path).write_text("".join(" ".join(map(str, s)) + "\n" for s in complex.maximal_simplices))


# ------------------------------------------------------------------ reports


def dumps_report(report: CountReport, include_timing: bool = False) -> str:
    doc = {
        "format": REPORT_FORMAT,
        "version": SCHEMA_VERSION,
        "k": report.k,
        "method": report.method,
        "samples": report.samples,
        "seed": report.seed,
        "total": report.total,
        "codes": list(report.codes),
        "counts": list(report.counts),
    }
    if include_timing:
        doc["elapsed_seconds"] = report.elapsed
    return json.dumps(doc, indent=1) + "\n"


def loads_report(text: str) -> CountReport:
    doc = _check_header(json.loads(text), REPORT_FORMAT)
    counts = tuple(doc["counts"])
    return CountReport(doc["k"], counts, tuple(doc["codes"]), doc["method"], doc["samples"],
                       doc["seed"], doc.get("elapsed_seconds", 0.0))


def save_report(report: CountReport, path, include_timing: bool = False) -> None:
    Path(path).write_text(dumps_report(report, include_timing))


def load_report(path) -> CountReport:
    return loads_report(Path(path).read_text())


def dumps_profile(profile: CharacteristicProfile) -> str:
    doc = {"format": PROFILE_FORMAT, "version": SCHEMA_VERSION, "k": profile.k}
    doc.update(profile.provenance)
    doc["codes"] = list(profile.codes)
    doc["values"] = list(profile.values)
    return json.dumps(doc, indent=1) + "\n"


def loads_profile(text: str) -> CharacteristicProfile:
    doc = _check_header(json.loads(text), PROFILE_FORMAT)
    prov = {key: v for key, v in doc.items() if key not in ("format", "version", "k", "codes", "values")}
    return CharacteristicProfile(doc["k"], tuple(float(v) for v in doc["values"]),
                                 tuple(doc["codes"]), prov)


def save_profile(profile: CharacteristicProfile, path) -> None:
    Path(path).write_text(dumps_profile(profile))


def load_profile(path) -> CharacteristicProfile:
    return loads_profile(Path(path).read_text())


def _check_header(doc, fmt):
    if not isinstance(doc, dict) or doc.get("format") != fmt:
        raise DatasetError(f"not a {fmt} document")
    if doc.get("version") != SCHEMA_VERSION:
        raise DatasetError(f"unsupported {fmt} version {doc.get('version')!r}")
    return doc
