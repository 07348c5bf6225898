"""Command-line runner: ``idblock <subcommand> [flags]``.

Writes a CSV to ``--out`` (stdout when omitted) and, next to it, a
``<out>.manifest`` file with the full configuration as ``key=value`` lines.
Settings can also come from ``--config FILE`` (same ``key=value`` format);
flags win over the file.
"""

import argparse
import csv
import dataclasses
import sys

from . import __version__
from .data import read_manifest, write_csv, write_manifest
from .experiments import KINDS, RUNNERS, ExperimentConfig

LIST_FIELDS = {"qubits", "inits", "inputs"}
INT_FIELDS = {"depth", "blocks", "block_depth", "trials", "iterations", "seed", "threads",
              "examples", "samples", "entangler_depth", "snapshot_every"}
FLOAT_FIELDS = {"learning_rate", "tol"}
INIT_ALIASES = {"identity-block": "identity"}


def parse_qubits(text):
    """``"2,4,6"`` or ``"2-10"`` or ``"2-10:2"``."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if "-" in part:
            span, _, step = part.partition(":")
            lo, hi = (int(x) for x in span.split("-"))
            out += list(range(lo, hi + 1, int(step) if step else 1))
        elif part:
            out.append(int(part))
    return out


def _coerce(key, value):
    if key == "qubits":
        return parse_qubits(value)
    if key in ("inits", "inputs"):
        items = [v.strip() for v in str(value).split(",") if v.strip()]
        return [INIT_ALIASES.get(v, v) for v in items]
    if key in INT_FIELDS:
        return int(value)
    if key in FLOAT_FIELDS:
        return float(value)
    if key == "wrong_formula":
        return str(value).lower() in ("1", "true", "yes")
    return value


def build_parser():
    p = argparse.ArgumentParser(prog="idblock", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        s = sub.add_parser(kind)
        s.add_argument("--config", help="key=value settings file")
        s.add_argument("--qubits", help="qubit counts, e.g. 2,4,6 or 2-10:2")
        s.add_argument("--depth", type=int, help="layers of the random ansatz")
        s.add_argument("--blocks", type=int, help="identity blocks M")
        s.add_argument("--block-depth", type=int, help="half-depth L of each block")
        s.add_argument("--trials", type=int)
        s.add_argument("--iterations", type=int)
        s.add_argument("--seed", type=int)
        s.add_argument("--init", dest="inits", help="comma list of random|identity|zero")
        s.add_argument("--input", dest="inputs", help="comma list of zero|sqrt-h|mnist|synthetic")
        s.add_argument("--mnist-images")
        s.add_argument("--mnist-labels")
        s.add_argument("--examples", type=int, help="dataset size for qnn")
        s.add_argument("--samples", type=int, help="Monte Carlo samples (verify-appendix)")
        s.add_argument("--learning-rate", type=float)
        s.add_argument("--out", help="CSV output path")
        s.add_argument("--threads", type=int)
        s.add_argument("--wrong-formula", action="store_true", default=None,
                       help=argparse.SUPPRESS)
    return p


def config_from_args(args):
    values = {}
    known = {f.name for f in dataclasses.fields(ExperimentConfig)} - {"kind"}
    if args.config:
        # manifests are valid config files; their extra keys are ignored
        for k, v in read_manifest(args.config).items():
            k = k.replace("-", "_")
            if k in known and v != "":
                values[k] = _coerce(k, v)
    for f in dataclasses.fields(ExperimentConfig):
        v = getattr(args, f.name, None)
        if v is not None and f.name != "kind":
            values[f.name] = _coerce(f.name, v)
    return ExperimentConfig.for_kind(args.kind, **values)


def manifest_items(cfg):
    items = {"artifact": "idblock", "version": __version__}
    for f in dataclasses.fields(cfg):
        v = getattr(cfg, f.name)
        if isinstance(v, list):
            v = ",".join(map(str, v))
        items[f.name] = "" if v is None else v
    return items


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        print(f"idblock: {exc}", file=sys.stderr)
        return 2
    table = RUNNERS[cfg.kind](cfg)
    if cfg.out:
        write_csv(cfg.out, table.header, table.rows)
        write_manifest(cfg.out + ".manifest", manifest_items(cfg))
    else:
        w = csv.writer(sys.stdout)
        w.writerow(table.header)
        w.writerows(table.rows)
    if not table.passed:
        print("idblock: one or more checks failed", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
