"""End-to-end verification runs and JSON reporting.

A run executes, for every configured (n, ring, delta) tuple: the cover
build with its certificates, the Mayer-Vietoris complex with the d^2
check, acyclicity in every degree, Tor and Ext through both functors,
bar-resolution cross-checks where the size guard allows, and the
classical-versus-dilute contrast.  Each check appends one record; the
process exit status of the CLI is nonzero exactly when some record
fails.

Reports are deterministic: records are sorted by key before writing and
wall times live in a designated field so payload diffs stay clean.
Config precedence is flags over config file over defaults, with the
environment variable DILUTETL_OUT_DIR overriding the default output
directory.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import asdict, dataclass, field

from . import __version__
from .classical import tl_bar_tor
from .homalg import SizeGuardExceeded, bar_tor
from .mv import (
    build_cover,
    build_mv_complex,
    ext_via_resolution,
    tor_via_resolution,
    verify_acyclic,
)
from .rings import Ring, RingError, parse_ring

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    n_values: tuple[int, ...] = (1, 2, 3, 4)
    rings: tuple[str, ...] = ("Z", "Fp:2")
    deltas: tuple[int, ...] = (0, 1)
    max_bar_degree: int = 3
    out_dir: str = "."
    emit_matrices: bool = False
    seed: int = 0

    def validate(self) -> "RunConfig":
        if not self.n_values or any(n < 1 for n in self.n_values):
            raise ConfigError("n values must be positive")
        for r in self.rings:
            parse_ring(r, 0)  # raises on an unrecognized descriptor
        if self.max_bar_degree < 0:
            raise ConfigError("max bar degree must be nonnegative")
        return self

    @staticmethod
    def load(config_path: str | None = None, **overrides) -> "RunConfig":
        values: dict = {}
        env_out = os.environ.get("DILUTETL_OUT_DIR")
        if env_out:
            values["out_dir"] = env_out
        if config_path:
            with open(config_path) as fh:
                raw = json.load(fh)
            for key in ("n_values", "rings", "deltas"):
                if key in raw:
                    values[key] = tuple(raw.pop(key))
            values.update(raw)
        for key, val in overrides.items():
            if val is not None:
                values[key] = tuple(val) if isinstance(val, list) else val
        return RunConfig(**values).validate()


@dataclass
class Report:
    schema_version: int
    tool_version: str
    config: dict
    records: list[dict] = field(default_factory=list)

    def add(self, name: str, params: dict, ok: bool, payload=None,
            seconds: float = 0.0) -> bool:
        self.records.append({
            "name": name,
            "params": params,
            "verdict": "pass" if ok else "fail",
            "payload": payload,
            "wall_time_s": round(seconds, 3),
        })
        return ok

    @property
    def all_pass(self) -> bool:
        return all(r["verdict"] == "pass" for r in self.records)

    def to_json_obj(self) -> dict:
        records = sorted(
            self.records,
            key=lambda r: (r["name"], json.dumps(r["params"], sort_keys=True)))
        return {
            "schema_version": self.schema_version,
            "tool_version": self.tool_version,
            "config": self.config,
            "all_pass": self.all_pass,
            "records": records,
        }

    def write(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_obj(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _rings_for(config: RunConfig):
    for desc in config.rings:
        if desc == "Z[delta]":
            yield Ring.delta_polynomials()
            continue
        for d in config.deltas:
            yield parse_ring(desc, d)


def run_verify_theorem(config: RunConfig) -> Report:
    """Execute the full verification run described by the config."""
    config.validate()
    config_echo = json.loads(json.dumps(asdict(config)))
    report = Report(SCHEMA_VERSION, __version__, config_echo)

    for n in config.n_values:
        t0 = time.time()
        try:
            cover = build_cover(n)
            certs_ok = all(
                getattr(c, "ok", False) for c in cover.certificates.values())
            report.add("cover_certificates", {"n": n}, certs_ok,
                       {"width": cover.width,
                        "nonzero_intersections": len(cover.nonzero)},
                       time.time() - t0)
        except Exception as exc:  # a failed certificate aborts the n
            report.add("cover_certificates", {"n": n}, False,
                       {"error": str(exc)}, time.time() - t0)
            continue

        t0 = time.time()
        mv = build_mv_complex(cover, Ring.delta_polynomials())
        try:
            mv.chain.check_d_squared()
            d2_ok = True
        except Exception:
            d2_ok = False
        report.add("mv_d_squared_zero", {"n": n, "ring": "Z[delta]"}, d2_ok,
                   {"ranks": {str(p): mv.chain.rank(p)
                              for p in sorted(mv.chain.degrees)},
                    "euler_characteristic": mv.chain.euler_characteristic(),
                    "shape_notes": mv.shape_notes},
                   time.time() - t0)
        if n % 2 == 1 and n >= 5:
            report.add("odd_shape_note", {"n": n}, bool(mv.shape_notes),
                       {"notes": mv.shape_notes})

        for ring in _rings_for(config):
            if ring.kind == "Zdelta":
                continue
            params = {"n": n, "ring": ring.descriptor(),
                      "delta": ring.delta_descriptor()}
            mvr = build_mv_complex(cover, ring)

            t0 = time.time()
            hom = verify_acyclic(mvr)
            report.add("mv_acyclic", params, hom.is_trivial(),
                       hom.to_json_obj(), time.time() - t0)

            t0 = time.time()
            tor = tor_via_resolution(mvr)
            tor_ok = (tor.groups[0].betti == 1 and not tor.groups[0].torsion
                      and all(g.is_zero for p, g in tor.groups.items() if p > 0))
            report.add("tor_concentrated_degree_zero", params, tor_ok,
                       tor.to_json_obj(), time.time() - t0)

            t0 = time.time()
            ext = ext_via_resolution(mvr)
            ext_ok = (ext.groups[0].betti == 1 and not ext.groups[0].torsion
                      and all(g.is_zero for p, g in ext.groups.items() if p > 0))
            report.add("ext_concentrated_degree_zero", params, ext_ok,
                       ext.to_json_obj(), time.time() - t0)

            if ring.kind != "Z":
                t0 = time.time()
                bar = None
                degree = config.max_bar_degree
                while degree >= 1:
                    try:
                        bar = bar_tor(n, ring, degree)
                        break
                    except SizeGuardExceeded:
                        degree -= 1
                if bar is None:
                    report.add("bar_cross_check", params, True,
                               {"skipped": "size guard"}, time.time() - t0)
                else:
                    mv_dims = [
                        tor.groups[p].betti if p in tor.groups else 0
                        for p in range(degree + 1)]
                    bar_dims = [g.betti for g in bar]
                    report.add("bar_cross_check", params,
                               bar_dims == mv_dims,
                               {"degrees_compared": degree,
                                "bar": bar_dims, "resolution": mv_dims},
                               time.time() - t0)

    t0 = time.time()
    contrast_ring = Ring.prime_field(2, 0)
    classical = [g.betti for g in tl_bar_tor(2, contrast_ring, 4)]
    dilute = [g.betti for g in bar_tor(2, contrast_ring, 4)]
    report.add("classical_contrast",
               {"n": 2, "ring": "Fp:2", "delta": "0"},
               classical == [1, 1, 1, 1, 1] and dilute == [1, 0, 0, 0, 0],
               {"classical": classical, "dilute": dilute},
               time.time() - t0)

    os.makedirs(config.out_dir, exist_ok=True)
    report.write(os.path.join(config.out_dir, "report.json"))
    return report
