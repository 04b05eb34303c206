"""Run configuration (a JSON document) and the manifest written next to a dataset.

Example::

    {
      "field": {"kind": "Fp", "p": 32003},
      "n": 2, "m": 4, "count": 1000, "seed": 7,
      "shape": {"d_min": 1, "d_max": 3},
      "gen": {"backend": "elementary", "s_max": 10,
              "op_mix": {"addrow": 0.6, "permute": 0.3, "scale": 0.1}},
      "verify": true, "emit_tokens": false, "out": "train.jsonl"
    }

Every key is optional. Unknown keys are rejected.
"""

import hashlib
import json
from dataclasses import dataclass

import jsonschema

from . import __version__
from .field import QQ, FieldConfig
from .forge import GenConfig
from .shape import CoeffDistribution, ShapeConfig


class ConfigError(ValueError):
    """Invalid configuration; ``path`` names the offending field."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path or '<root>'}: {message}")


_INT = {"type": "integer"}
_POS = {"type": "integer", "minimum": 1}
_NONNEG = {"type": "integer", "minimum": 0}
_PROB = {"type": "number", "minimum": 0, "maximum": 1}

COEFFS_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "kind": {"enum": ["int", "rational", "field"]},
        "lo": _INT,
        "hi": _INT,
        "den_hi": _POS,
        "zero_weight": {"anyOf": [_PROB, {"type": "null"}]},
    },
}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "field": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {"kind": {"enum": ["Q", "Fp"]}, "p": {"type": "integer", "minimum": 2}},
        },
        "n": _POS,
        "m": _POS,
        "count": _POS,
        "seed": _INT,
        "verify": {"type": "boolean"},
        "emit_tokens": {"type": "boolean"},
        "jobs": _POS,
        "out": {"type": "string"},
        "shape": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"d_min": _POS, "d_max": _POS, "coeffs": COEFFS_SCHEMA},
        },
        "gen": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "backend": {"enum": ["elementary", "bruhat"]},
                "s_min": _POS,
                "s_max": _POS,
                "op_mix": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {"addrow": _PROB, "permute": _PROB, "scale": _PROB},
                },
                "addrow_degree_max": _NONNEG,
                "degree_cap": {"anyOf": [_NONNEG, {"type": "null"}]},
                "coeffs": COEFFS_SCHEMA,
                "forbid_zero_rows": {"type": "boolean"},
                "order": {"enum": ["lex", "degrevlex"]},
                "max_retries": _NONNEG,
                "max_record_attempts": _POS,
                "max_pairs": _POS,
            },
        },
    },
}

DEFAULTS = {"field": {"kind": "Q"}, "n": 2, "m": 3, "count": 100, "seed": 0, "verify": True,
            "emit_tokens": False, "jobs": 1, "out": "dataset.jsonl"}


@dataclass(frozen=True)
class RunConfig:
    raw: dict  # validated document with defaults filled in
    field: FieldConfig
    shape: ShapeConfig
    gen: GenConfig
    count: int
    seed: int
    emit_tokens: bool
    jobs: int
    out: str

    def hash(self):
        return config_hash(self.raw)


def _path(err):
    return ".".join(str(p) for p in err.absolute_path)


def _build(path, factory, **kwargs):
    try:
        return factory(**kwargs)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from None


def validate(doc):
    """Check ``doc`` against the schema and build a :class:`RunConfig`."""
    validator = jsonschema.Draft7Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ConfigError(_path(err), err.message)
    raw = {**DEFAULTS, **doc}
    raw.pop("jobs", None)  # never affects the output, so kept out of the hash
    n, m = raw["n"], raw["m"]
    if m < n:
        raise ConfigError("m", f"m >= n required, got n={n}, m={m}")

    fdoc = raw["field"]
    if fdoc["kind"] == "Fp" and "p" not in fdoc:
        raise ConfigError("field.p", "a prime p is required for Fp")
    field = _build("field", FieldConfig.from_json, obj=fdoc) if fdoc["kind"] == "Fp" else QQ

    sdoc = dict(raw.get("shape", {}))
    if "coeffs" in sdoc:
        sdoc["coeffs"] = _build("shape.coeffs", CoeffDistribution, **sdoc["coeffs"])
    shape = _build("shape", ShapeConfig, **sdoc)

    gdoc = dict(raw.get("gen", {}))
    if "op_mix" in gdoc:
        gdoc["op_mix"] = tuple(sorted(gdoc["op_mix"].items()))
    if "coeffs" in gdoc:
        gdoc["coeffs"] = _build("gen.coeffs", CoeffDistribution, **gdoc["coeffs"])
    gen = _build("gen", GenConfig, n=n, m=m, verify=raw["verify"], **gdoc)
    for path, dist in (("shape.coeffs", shape.distribution(field)), ("gen.coeffs", gen.distribution(field))):
        if dist.kind == "field" and not field.is_prime_field:
            raise ConfigError(path, "uniform field elements need field Fp")
    return RunConfig(raw, field, shape, gen, raw["count"], raw["seed"], raw["emit_tokens"],
                     doc.get("jobs", 1), raw["out"])


def load(path):
    """Read a config file. A manifest is accepted too: its embedded config is used."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if isinstance(doc, dict) and "output_sha256" in doc and "config" in doc:
        doc = doc["config"]
    if not isinstance(doc, dict):
        raise ConfigError("", "config must be a JSON object")
    return doc


def config_hash(raw):
    canon = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def file_sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def manifest(cfg, summary, out_path):
    return {
        "tool": "idealgen",
        "version": __version__,
        "config": cfg.raw,
        "config_sha256": cfg.hash(),
        "seed": cfg.seed,
        "summary": summary,
        "output": str(out_path),
        "output_sha256": file_sha256(out_path),
    }
