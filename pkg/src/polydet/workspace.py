"""On-disk checkpoint state: an append-only manifest plus unit artifacts.

Artifacts are written atomically (temp file, fsync, rename) and only
then recorded in the manifest with their checksum, so a run killed at
any instant leaves either a complete, verifiable unit or no record of
it. Residue artifacts are binary: an 8-byte magic, a version word, a
shape header, then little-endian 64-bit values in row-major order.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
from pathlib import Path

import numpy as np

from .errors import CorruptWorkspaceError, StaleWorkspaceError

ARTIFACT_MAGIC = b"POLYDET\x00"
ARTIFACT_VERSION = 1
MANIFEST_NAME = "manifest"


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def stable_json(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()


def digest_of(obj) -> str:
    """Checksum of a JSON-serializable structure, stable across runs."""
    return _sha256(stable_json(obj))


def encode_array(values: np.ndarray, shape) -> bytes:
    data = np.ascontiguousarray(np.asarray(values, dtype=np.uint64).reshape(-1))
    header = ARTIFACT_MAGIC + struct.pack("<II", ARTIFACT_VERSION, len(shape))
    header += struct.pack(f"<{len(shape)}Q", *shape) if shape else b""
    return header + data.astype("<u8").tobytes()


def decode_array(blob: bytes) -> tuple[np.ndarray, tuple[int, ...]]:
    if len(blob) < 16 or blob[:8] != ARTIFACT_MAGIC:
        raise CorruptWorkspaceError("checkpoint invalid: bad artifact magic")
    version, ndim = struct.unpack_from("<II", blob, 8)
    if version != ARTIFACT_VERSION:
        raise CorruptWorkspaceError(f"checkpoint invalid: artifact version {version}")
    off = 16
    shape = struct.unpack_from(f"<{ndim}Q", blob, off) if ndim else ()
    off += 8 * ndim
    count = 1
    for n in shape:
        count *= n
    payload = blob[off:]
    if len(payload) != 8 * count:
        raise CorruptWorkspaceError("checkpoint invalid: truncated artifact payload")
    values = np.frombuffer(payload, dtype="<u8").astype(np.uint64)
    return values, tuple(int(n) for n in shape)


def _fsync_dir(path: Path):
    fd = os.open(path, os.O_RDONLY)
    try:
        os.fsync(fd)
    finally:
        os.close(fd)


class Workspace:
    """A checkpoint directory: manifest, unit artifacts, and named files."""

    def __init__(self, root):
        self.root = Path(root)
        self._completed: dict[str, dict] = {}
        self._header: dict | None = None

    # -- lifecycle ---------------------------------------------------------

    @property
    def manifest_path(self) -> Path:
        return self.root / MANIFEST_NAME

    def exists(self) -> bool:
        return self.manifest_path.is_file()

    def create(self, header: dict):
        self.root.mkdir(parents=True, exist_ok=True)
        self._header = dict(header)
        line = stable_json({"kind": "header", **header}) + b"\n"
        self._append_manifest(line)

    def open(self) -> dict:
        """Load the manifest; returns the header record."""
        if not self.exists():
            raise StaleWorkspaceError(f"stale workspace: no manifest in {self.root}")
        self._completed.clear()
        lines = self.manifest_path.read_bytes().split(b"\n")
        records = []
        for idx, raw in enumerate(lines):
            if not raw.strip():
                continue
            try:
                records.append(json.loads(raw))
            except json.JSONDecodeError:
                # a torn final append is not damage; anything earlier is
                if idx == len(lines) - 1 or all(not t.strip() for t in lines[idx + 1 :]):
                    break
                raise CorruptWorkspaceError("checkpoint invalid: unreadable manifest line")
        if not records or records[0].get("kind") != "header":
            raise CorruptWorkspaceError("checkpoint invalid: manifest has no header")
        self._header = {k: v for k, v in records[0].items() if k != "kind"}
        for rec in records[1:]:
            if rec.get("kind") == "done":
                self._completed[rec["unit"]] = rec
        return dict(self._header)

    def verify(self):
        """Audit every completed unit: artifact present, checksum intact."""
        for unit in self._completed:
            self._load_blob(unit)

    # -- units -------------------------------------------------------------

    def has(self, unit: str) -> bool:
        return unit in self._completed

    def store_array(self, unit: str, values, shape):
        blob = encode_array(values, shape)
        self._store_blob(unit, f"{self._slug(unit)}.bin", blob)

    def load_array(self, unit: str) -> tuple[np.ndarray, tuple[int, ...]]:
        return decode_array(self._load_blob(unit))

    def store_json(self, unit: str, obj):
        self._store_blob(unit, f"{self._slug(unit)}.json", stable_json(obj))

    def load_json(self, unit: str):
        return json.loads(self._load_blob(unit))

    # -- named metadata files (not units) -----------------------------------

    def write_named(self, name: str, obj):
        path = self.root / name
        self._atomic_write(path, stable_json(obj))

    def read_named(self, name: str):
        path = self.root / name
        if not path.is_file():
            raise StaleWorkspaceError(f"stale workspace: missing {name}")
        return json.loads(path.read_bytes())

    # -- internals -----------------------------------------------------------

    @staticmethod
    def _slug(unit: str) -> str:
        return unit.replace("/", "_")

    def _store_blob(self, unit: str, filename: str, blob: bytes):
        path = self.root / filename
        self._atomic_write(path, blob)
        record = {"kind": "done", "unit": unit, "artifact": filename, "sha256": _sha256(blob)}
        self._append_manifest(stable_json(record) + b"\n")
        self._completed[unit] = record

    def _load_blob(self, unit: str) -> bytes:
        record = self._completed.get(unit)
        if record is None:
            raise KeyError(f"unit {unit} is not recorded complete")
        path = self.root / record["artifact"]
        if not path.is_file():
            raise CorruptWorkspaceError(f"checkpoint invalid: missing artifact {path.name}")
        blob = path.read_bytes()
        if _sha256(blob) != record["sha256"]:
            raise CorruptWorkspaceError(f"checkpoint invalid: checksum mismatch in {path.name}")
        return blob

    def _atomic_write(self, path: Path, blob: bytes):
        self.root.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        with open(tmp, "wb") as fh:
            fh.write(blob)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
        _fsync_dir(self.root)

    def _append_manifest(self, line: bytes):
        with open(self.manifest_path, "ab") as fh:
            fh.write(line)
            fh.flush()
            os.fsync(fh.fileno())
