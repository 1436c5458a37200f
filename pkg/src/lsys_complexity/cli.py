"""Command-line entry point: ``lsys-complexity <subcommand>``.

Data goes to stdout (or ``-o``); every diagnostic goes to stderr.  Numeric
defaults can be overridden through ``LSYS_*`` environment variables;
explicit flags always win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .analysis import MEASURES, MeasureConfig, WindowPlan, WindowSeries, analyze, flag_anomalies
from .baselines import distinct_counts, linguistic_complexity, te_length, topological_entropy
from .complexity import K_MODES, WEIGHTINGS, ConvergenceParams, radius, system_from_grammar
from .encoding import (
    ALPHABET,
    BitString,
    code_width,
    encode_bin,
    encode_lzw,
    indices_to_bits,
    preprocess_text,
)
from .errors import ComplexityError
from .grammar import build_tree, classify, format_grammar, grammar_to_dict

log = logging.getLogger("lsys_complexity")

CSV_COLUMNS = ("window_index", "start_bit", "k0", "te", "lc", "anomaly")


def _env(name: str, default, cast=str):
    raw = os.environ.get(f"LSYS_{name}")
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise SystemExit(f"error: bad value for LSYS_{name}: {raw!r}")


# ---------------------------------------------------------------- bit files

def write_bitfile(fh, bits: BitString, header: dict, ascii_bits: bool = False) -> None:
    """One JSON header line, then packed bytes (or a '0'/'1' line)."""
    header = {"bits": len(bits), **header, "format": "ascii" if ascii_bits else "packed"}
    fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
    if ascii_bits:
        fh.write(bits.to01().encode() + b"\n")
    else:
        fh.write(bits.pack())


def read_bitfile(data: bytes) -> tuple[BitString, dict]:
    """Accept a header+payload file from ``encode`` or bare ASCII 0/1 text."""
    if data.startswith(b"{"):
        head, _, payload = data.partition(b"\n")
        header = json.loads(head)
        if header.get("format") == "ascii":
            bits = BitString.from01(payload.decode("ascii"))
            if len(bits) != header["bits"]:
                raise ValueError("bit count does not match header")
            return bits, header
        return BitString.unpack(payload, header["bits"]), header
    return BitString.from01(data.decode("ascii")), {}


def _read_window(args) -> BitString:
    if args.bits is not None:
        return BitString.from01(args.bits)
    if args.hex is not None:
        return BitString.from_hex(args.hex)
    if args.input is not None:
        return read_bitfile(Path(args.input).read_bytes())[0]
    raise SystemExit("error: give a window with --bits, --hex or an input file")


def _encode_text(text: str, encoding: str, alphabet: str) -> tuple[BitString, dict]:
    normalized = preprocess_text(text)
    if encoding == "bin":
        return encode_bin(normalized), {"encoding": "bin", "width": 5}
    indices, _ = encode_lzw(normalized, alphabet)
    width = code_width(indices)
    return indices_to_bits(indices), {"encoding": "lzw", "width": width, "codes": len(indices)}


# ---------------------------------------------------------------- commands

def cmd_encode(args) -> int:
    text = Path(args.input).read_text(encoding="utf-8")
    bits, header = _encode_text(text, args.encoding, args.alphabet)
    out = open(args.output, "wb") if args.output else sys.stdout.buffer
    try:
        write_bitfile(out, bits, header, ascii_bits=args.ascii)
    finally:
        if args.output:
            out.close()
    log.info("encoded %d bits", len(bits))
    return 0


def cmd_grammar(args) -> int:
    grammar = classify(build_tree(_read_window(args)), args.iso_depth)
    if args.format == "json":
        print(json.dumps(grammar_to_dict(grammar), indent=2))
    else:
        print(format_grammar(grammar))
    return 0


def _params(args) -> ConvergenceParams:
    return ConvergenceParams(
        m_max=args.m_max, eps=args.eps, value_cap=args.value_cap, bisect_iters=args.bisect_iters
    )


def cmd_complexity(args) -> int:
    window = _read_window(args)
    grammar = classify(build_tree(window), args.iso_depth)
    system = system_from_grammar(grammar, args.k_mode, args.weighting)
    result = radius(system, _params(args))
    print(f"bits={len(window)} classes={grammar.total_classes} R={result.R!r} K0={result.K0!r}")
    if args.trace:
        for line in system.describe():
            print(f"  {line}")
        for z, ok, m in result.trace:
            print(f"  z={z!r} {'converged' if ok else 'diverged'} after {m} iterations")
    return 0


def cmd_baselines(args) -> int:
    s = args.sequence
    k = args.k
    idx = distinct_counts(s)
    lc = linguistic_complexity(s, k)
    print(f"length={len(s)} k={k}")
    print(f"A={lc.A} M={lc.M} LC={lc.lc!r}")
    if len(s) >= k:
        print(f"TE l={te_length(len(s), k)} H={topological_entropy(s, k)!r}")
    else:
        log.warning("sequence too short for topological entropy")
    if args.verbose:
        print("A_l=" + ",".join(map(str, idx.counts)))
    return 0


def _num(v) -> str:
    return "" if v is None else repr(v)


def series_to_csv(series: WindowSeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in series.records:
        w.writerow([r.index, r.start_bit, _num(r.k0), _num(r.te), _num(r.lc), "true" if r.anomaly else "false"])
    return buf.getvalue()


def series_to_json(series: WindowSeries) -> str:
    doc = {
        "encoding": series.encoding_tag,
        "measures": list(series.measures),
        "window_bits": series.plan.window_bits,
        "stride_bits": series.plan.stride_bits,
        "dropped_tail_bits": series.plan.dropped_tail_bits,
        "records": [
            {"index": r.index, "start_bit": r.start_bit, "k0": r.k0, "te": r.te, "lc": r.lc, "anomaly": r.anomaly}
            for r in series.records
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def cmd_analyze(args) -> int:
    raw = Path(args.input).read_bytes()
    if args.encoding == "raw-bits":
        bits, _ = read_bitfile(raw)
    else:
        bits, _ = _encode_text(raw.decode("utf-8"), args.encoding, args.alphabet)
    measures = tuple(m.strip() for m in args.measures.split(",") if m.strip())
    bad = set(measures) - set(MEASURES)
    if bad or not measures:
        raise SystemExit(f"error: --measures must be a non-empty subset of {','.join(MEASURES)}")
    config = MeasureConfig(args.iso_depth, args.k_mode, args.weighting, _params(args))
    plan = WindowPlan(args.window, args.stride)
    series = analyze(bits, plan, measures, config, args.encoding, workers=args.workers)
    if not series.records:
        log.warning("input has %d bits, shorter than one %d-bit window", len(bits), args.window)
    else:
        target = args.anomaly_measure or ("k0" if "k0" in series.measures else series.measures[0])
        if target not in series.measures:
            raise SystemExit(f"error: anomaly measure {target!r} was not computed")
        series = flag_anomalies(series, args.tau, target)
    text = series_to_csv(series) if args.format == "csv" else series_to_json(series)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------- parser

def _add_window_source(p) -> None:
    p.add_argument("input", nargs="?", help="bit file (encode output or ASCII 0/1)")
    p.add_argument("--bits", help="window as a literal 0/1 string")
    p.add_argument("--hex", help="window as hex digits (8 bits per byte, MSB first)")


def _add_solver(p) -> None:
    p.add_argument("--iso-depth", type=int, default=_env("ISO_DEPTH", 2, int),
                   help="isomorphism depth X for rule classes (default 2, as in the worked table)")
    p.add_argument("--k-mode", choices=K_MODES, default=_env("K_MODE", "unit"),
                   help="exponent k: unit is k=1 (default), inverse is k=1/n_ip")
    p.add_argument("--weighting", choices=WEIGHTINGS, default=_env("WEIGHTING", "normalized"),
                   help="normalized: multiplicity-weighted average (default; gives K0=0 for every "
                        "window because z=1 is always a fixed point). count: one term per distinct rule")
    p.add_argument("--m-max", type=int, default=_env("M_MAX", 200, int),
                   help="iteration budget per z (default 200)")
    p.add_argument("--eps", type=float, default=_env("EPS", 1e-9, float),
                   help="absolute convergence tolerance (artifact choice, default 1e-9)")
    p.add_argument("--value-cap", type=float, default=_env("VALUE_CAP", 1e100, float),
                   help="values above this count as divergence (artifact choice, default 1e100)")
    p.add_argument("--bisect-iters", type=int, default=_env("BISECT_ITERS", 40, int),
                   help="bisection steps on [0,1] (artifact choice, default 40)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lsys-complexity",
        description="L-system structural complexity K0, topological entropy and "
                    "linguistic complexity of encoded text.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    text_help = ("text is lowercased, whitespace runs collapse to one space and every "
                 "character outside a-z and space is dropped before encoding")

    p = sub.add_parser("encode", help="encode a UTF-8 text file to bits", description=text_help)
    p.add_argument("input")
    p.add_argument("--encoding", choices=("bin", "lzw"), default=_env("ENCODING", "lzw"))
    p.add_argument("--alphabet", default=ALPHABET,
                   help="LZW seed alphabet in index order (default a-z then space)")
    p.add_argument("--ascii", action="store_true", help="write '0'/'1' characters instead of packed bytes")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("grammar", help="classification table of one window")
    _add_window_source(p)
    p.add_argument("--iso-depth", type=int, default=_env("ISO_DEPTH", 2, int))
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_grammar)

    p = sub.add_parser("complexity", help="radius R and K0 of one window")
    _add_window_source(p)
    _add_solver(p)
    p.add_argument("--trace", action="store_true", help="print equations and the bisection trace")
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("baselines", help="topological entropy and linguistic complexity of a string")
    p.add_argument("sequence")
    p.add_argument("-k", type=int, default=2, help="alphabet size (default 2)")
    p.set_defaults(func=cmd_baselines)

    p = sub.add_parser("analyze", help="per-window K0/TE/LC series as CSV or JSON",
                       description=text_help + ". Windows do not overlap unless --stride is set; "
                                               "a trailing partial window is dropped.")
    p.add_argument("input")
    p.add_argument("--encoding", choices=("bin", "lzw", "raw-bits"), default=_env("ENCODING", "lzw"))
    p.add_argument("--alphabet", default=ALPHABET)
    p.add_argument("--window", type=int, default=_env("WINDOW_BITS", 512, int),
                   help="window size in bits, a power of two (default 512)")
    p.add_argument("--stride", type=int, default=_env("STRIDE_BITS", None, int),
                   help="bits between window starts (default: window size)")
    _add_solver(p)
    p.add_argument("--measures", default=_env("MEASURES", "k0,te,lc"), help="comma list from k0,te,lc")
    p.add_argument("--tau", type=float, default=_env("TAU", 3.5, float),
                   help="robust z-score threshold for anomaly flags (artifact choice, default 3.5)")
    p.add_argument("--anomaly-measure", choices=MEASURES, default=None,
                   help="measure the anomaly flags are computed on (default k0)")
    p.add_argument("--format", choices=("csv", "json"), default=_env("FORMAT", "csv"))
    p.add_argument("--workers", type=int, default=_env("WORKERS", 1, int))
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.handlers[:] = [handler]
    log.propagate = False
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ComplexityError, ValueError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
