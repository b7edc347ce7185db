"""Command-line front end: ``torusrot {lambda,markov,orbit,rotset,denjoy,brown}``.

Exit codes: 0 success, 2 invalid input, 3 an internal consistency check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from . import brown as br
from . import geometry as geo
from . import rotset as rs
from . import skeleton as sk
from .circlemap import DEFAULT_GAPS, build_denjoy, wandering_check
from .errors import ConsistencyError, ThinningError, TorusRotError
from .numeric import admissible_indices, build_param, golden, rho_vec, silver

EXIT_OK, EXIT_USAGE, EXIT_CONSISTENCY = 0, 2, 3
COMMANDS = ("lambda", "markov", "orbit", "rotset", "denjoy", "brown")
DEFAULT_FORMAT = {"lambda": "csv", "markov": "csv", "orbit": "json", "rotset": "json",
                  "denjoy": "json", "brown": "csv"}


@dataclass
class RunConfig:
    cf: str = "golden"                 # golden | silver | comma-separated coefficients
    depth: Optional[int] = None
    trunc: int = 8
    gaps: int = DEFAULT_GAPS
    mass: str = "1/2"
    horizon: int = 5000
    seed: int = 0
    samples: int = 200
    stages: int = 8
    members: int = 200
    grid_bits: int = 12
    axis: str = "h"
    coord: str = "1/3"
    corrupt_ledger: bool = False
    format: Optional[str] = None
    out: Optional[str] = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)

    def param(self):
        name = self.cf.strip().lower()
        if name == "golden":
            return golden(self.depth) if self.depth is not None else golden()
        if name == "silver":
            return silver(self.depth) if self.depth is not None else silver()
        try:
            coeffs = [int(t) for t in name.split(",") if t.strip()]
        except ValueError:
            raise ValueError(f"--cf must be golden, silver or a comma-separated list, got {self.cf!r}")
        if not coeffs or any(c < 1 for c in coeffs):
            raise ValueError("continued-fraction coefficients must be positive integers")
        return build_param(coeffs, self.depth if self.depth is not None else len(coeffs) - 1)

    def validate(self) -> None:
        if self.trunc < 0:
            raise ValueError("--trunc must be nonnegative")
        if self.horizon < 1:
            raise ValueError("--horizon must be positive")
        if self.samples < 0 or self.stages < 1 or self.members < 2 or self.grid_bits < 1:
            raise ValueError("sample, stage, member and grid counts must be positive")
        if self.axis not in ("h", "v"):
            raise ValueError("--axis must be h or v")
        Fraction(self.mass)
        Fraction(self.coord)


@lru_cache(maxsize=4)
def _model(cf: str, depth: Optional[int], gaps: int, mass: str):
    cfg = RunConfig(cf=cf, depth=depth)
    return build_denjoy(cfg.param(), K=gaps, gap_mass=Fraction(mass))


def model_for(cfg: RunConfig):
    return _model(cfg.cf, cfg.depth, cfg.gaps, cfg.mass)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- commands ----------------------------------------------------------------

def cmd_lambda(cfg: RunConfig, fmt: str) -> tuple[str, int]:
    param = cfg.param()
    hull = geo.lambda_set(param, cfg.trunc)
    if fmt == "svg":
        gens = sorted(geo._generators(param, cfg.trunc))
        r = param.rho
        marks = [geo.PlanarRational(Fraction(0), r), geo.PlanarRational(r, Fraction(0))]
        return geo.hull_svg(hull, gens, marks), EXIT_OK
    if fmt == "json":
        return _json({"rho": _frac(param.rho), "trunc": cfg.trunc,
                      "vertices": [{"x": _frac(v.x), "y": _frac(v.y), "generator": list(t) if t else None}
                                   for v, t in zip(hull.vertices, hull.generator_tags)]}), EXIT_OK
    return _csv(geo.HULL_CSV_HEADER, geo.hull_rows(hull)), EXIT_OK


def cmd_markov(cfg: RunConfig, fmt: str) -> tuple[str, int]:
    model = model_for(cfg)
    rows, records = [], []
    for m in range(1, cfg.trunc + 1):
        for n in range(1, cfg.trunc + 1):
            arcs = sk.markov_arcs(model, m, n)
            if not arcs:
                continue
            v = sk.rotation_vector_exact(model, m, n)
            for row in sk.markov_rows(arcs):
                rows.append(row + [v.x.numerator, v.x.denominator, v.y.numerator, v.y.denominator])
            records.append({"m": m, "n": n, "rho": [_frac(v.x), _frac(v.y)],
                            "arcs": [[r[3], r[4]] for r in sk.markov_rows(arcs)]})
    if fmt == "json":
        return _json({"rho": _frac(model.rho), "trunc": cfg.trunc, "pairs": records}), EXIT_OK
    header = sk.MARKOV_CSV_HEADER + ["rho_x_num", "rho_x_den", "rho_y_num", "rho_y_den"]
    return _csv(header, rows), EXIT_OK


def cmd_orbit(cfg: RunConfig, fmt: str) -> tuple[str, int]:
    model = model_for(cfg)
    c = Fraction(cfg.coord)
    if not 0 <= c < 1:
        raise ValueError("--coord must lie in [0, 1)")
    start = sk.LiftedSkeletonPoint(sk.SkeletonPoint(cfg.axis, float(c)))
    cls = sk.classify_orbit(model, start, cfg.horizon)
    recs = sk.orbit_records(model, start, cfg.horizon)
    if fmt == "csv":
        rows = [[r["step2"], r["axis"], r["coord"], r["translate"][0], r["translate"][1]] for r in recs]
        return _csv(["step2", "axis", "coord", "i", "j"], rows), EXIT_OK
    head = {"kind": cls.kind, "segments": [list(s) for s in cls.segments], "horizon": cfg.horizon}
    lines = [json.dumps(head, sort_keys=True)] + [json.dumps(r, sort_keys=True) for r in recs]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_rotset(cfg: RunConfig, fmt: str) -> tuple[str, int]:
    model = model_for(cfg)
    cert = rs.certified_cloud(model, cfg.trunc)
    spec = rs.SampleSpec(cfg.samples, cfg.seed, cfg.trunc if cfg.samples else 0)
    samples = rs.empirical_cloud(model, spec, cfg.horizon) if cfg.samples else []
    cmp = rs.compare_to_analytic(model, cfg.trunc, samples, cfg.horizon, certified=cert)
    cores = [rs.core_decomposition(model, samples[i], cfg.trunc) for i, _, _ in cmp.containment_violations]
    code = EXIT_OK if all(c.ok for c in cores) else EXIT_CONSISTENCY
    if fmt == "csv":
        return _csv(rs.CLOUD_CSV_HEADER, rs.cloud_rows(samples, cert)), code
    if fmt == "svg":
        hull = geo.omega_set(model.param, cfg.trunc, closure=True)
        return geo.hull_svg(hull, [s.avg_displacement for s in samples], cert), code
    report = cmp.to_json()
    report.update({
        "rho": _frac(model.rho), "trunc": cfg.trunc, "horizon": cfg.horizon, "samples": len(samples),
        "certified": [[_frac(p.x), _frac(p.y)] for p in cert],
        "violations_explained": [{"core_steps": c.steps, "core_distance": float(c.distance),
                                  "core_slack": float(c.slack), "ok": c.ok} for c in cores],
    })
    return _json(report), code


def cmd_denjoy(cfg: RunConfig, fmt: str) -> tuple[str, int]:
    model = model_for(cfg)
    wander = wandering_check(model, model.K - 1)
    if fmt == "csv":
        rows = []
        for n in range(-model.K, model.K + 1):
            a, b = model.gap(n)
            rows.append([n, _frac(a), _frac(b), f"{float(a):.15f}", f"{float(b):.15f}"])
        return _csv(["n", "left", "right", "left_f", "right_f"], rows), EXIT_OK
    data = model.to_json()
    data["transport_bound"] = _frac(model.transport_bound)
    data["wandering_to_K_minus_1"] = wander
    return _json(data), EXIT_OK if wander else EXIT_CONSISTENCY


def cmd_brown(cfg: RunConfig, fmt: str) -> tuple[str, int]:
    model = model_for(cfg)
    seq = br.build_collapse_family(model, cfg.members)
    idx = br.thin_subsequence(seq, stages=cfg.stages)
    sub = seq.subsequence(idx)
    ledger = br.build_ledger(sub, cfg.stages)
    if cfg.corrupt_ledger:
        # the estimates use well under 1/8 of eps here, so halving would not be caught
        ledger = ledger.scaled(Fraction(1, 64))
    grid = br.CompactModel(cfg.grid_bits)
    ident = br.identity_check(sub, cfg.stages, grid)
    rep = br.cauchy_verify(seq, idx, grid, ledger, strict=False)
    code = EXIT_OK if (rep.ok and ident.ok) else EXIT_CONSISTENCY
    if fmt == "json":
        return _json({"indices": idx, "ledger": [dict(zip(br.LEDGER_CSV_HEADER, r)) for r in ledger.rows()],
                      "epsilon_sum": float(ledger.prefix_sums[-1]),
                      "identities_ok": ident.ok, "cauchy": rep.to_json(),
                      "corrupted": cfg.corrupt_ledger}), code
    return _csv(br.LEDGER_CSV_HEADER, ledger.rows()), code


HANDLERS = {"lambda": cmd_lambda, "markov": cmd_markov, "orbit": cmd_orbit,
            "rotset": cmd_rotset, "denjoy": cmd_denjoy, "brown": cmd_brown}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="torusrot", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON RunConfig; flags given on the command line override it")
    ap.add_argument("--cf", help="golden, silver, or comma-separated coefficients a1,a2,...")
    ap.add_argument("--depth", type=int)
    ap.add_argument("--trunc", type=int, help="truncation N of the generator set")
    ap.add_argument("--gaps", type=int, help="gap window K")
    ap.add_argument("--mass", help="total gap mass L, e.g. 1/2")
    ap.add_argument("--horizon", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--samples", type=int)
    ap.add_argument("--stages", type=int)
    ap.add_argument("--members", type=int)
    ap.add_argument("--grid-bits", type=int, dest="grid_bits")
    ap.add_argument("--axis", choices=("h", "v"))
    ap.add_argument("--coord")
    ap.add_argument("--corrupt-ledger", action="store_true", default=None, dest="corrupt_ledger")
    ap.add_argument("--format", choices=("csv", "json", "svg"))
    ap.add_argument("--out", help="output file (default: stdout)")
    ap.add_argument("--dump-config", action="store_true", help="print the effective config and exit")
    return ap


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        with open(args.config) as fh:
            cfg = RunConfig.from_json(fh.read())
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            setattr(cfg, f.name, v)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.dump_config:
            sys.stdout.write(cfg.to_json())
            return EXIT_OK
        fmt = cfg.format or DEFAULT_FORMAT[args.command]
        if fmt == "svg" and args.command not in ("lambda", "rotset"):
            raise ValueError(f"svg output is not available for {args.command}")
        text, code = HANDLERS[args.command](cfg, fmt)
    except (ConsistencyError, ThinningError) as e:
        print(f"consistency failure: {e}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (TorusRotError, ValueError, IndexError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_CONSISTENCY:
        print("consistency failure: see report", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
