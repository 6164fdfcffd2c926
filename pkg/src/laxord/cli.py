"""The ``laxord`` command line.

Exit status: 0 on success, 1 on a domain error (message on stderr), 2 on a
usage error.  Output is deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

from .automata import DfaError, from_regex, load_dfa, RegexError, serialize_dfa
from .editops import decode_script, encode_script, metric_name
from .enumerator import StreamConfig, UnderrunError, enumerate_language
from .interchange import build_partition, nonloopable_words
from .oracle import OracleCapError, check_td_orderable, member, verify_stream
from .slender import NotSlenderError, enumerate_slender, is_slender, slender_threads
from .strata import StratumError


class CliError(Exception):
    pass


def _add_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--dfa", help="automaton file")
    src.add_argument("--regex", help="regular expression instead of a file (| or + for union, * for star)")


def _load(args) -> object:
    if args.dfa is not None:
        return load_dfa(args.dfa)
    return from_regex(args.regex)


def _add_stream_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--part", type=int, default=None, help="enumerate only this part")
    p.add_argument("--mode", choices=("proven", "tightened"), default="tightened")
    p.add_argument("--ell", type=int, default=None, help="stratum width (tightened mode)")
    p.add_argument("--dist", type=int, default=None, help="distance bound d (tightened mode)")
    p.add_argument("--below-floor", action="store_true",
                   help="accept --ell/--dist under the 2k/3k floor if the ladder still fits")
    p.add_argument("--cadence", type=int, default=None, help="work units per output (default: calibrated)")


def _config(args, max_outputs: int | None) -> StreamConfig:
    return StreamConfig(
        mode=args.mode,
        ell=args.ell,
        d=args.dist,
        part_index=args.part,
        max_outputs=max_outputs,
        cadence=args.cadence,
        allow_below_floor=args.below_floor,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="laxord", description="Ordered enumeration of regular languages by edit scripts")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="split the language into interchangeable parts")
    _add_source(p)
    p.add_argument("--out", default=".", help="directory for the part files")
    p.add_argument("--no-write", action="store_true", help="only print the summary")

    p = sub.add_parser("enumerate", help="print edit scripts, one per line")
    _add_source(p)
    _add_stream_options(p)
    p.add_argument("--max-words", type=int, default=None)
    p.add_argument("--verify", action="store_true", help="replay every script and check membership")
    p.add_argument("--stats", action="store_true", help="per-output work as CSV on stderr")

    p = sub.add_parser("slender", help="slenderness test and right-end enumeration")
    _add_source(p)
    p.add_argument("--threads", action="store_true", help="print the thread decomposition")
    p.add_argument("--enumerate", type=int, default=None, metavar="I", help="print scripts of thread I")
    p.add_argument("--max-words", type=int, default=20)

    p = sub.add_parser("check", help="verify a script file against a language")
    _add_source(p)
    p.add_argument("--scripts", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--metric", default="pp", choices=("pp", "ppr", "lev"))
    p.add_argument("--ell", type=int, default=None, help="also check stratum completeness for this width")

    p = sub.add_parser("check-order", help="decide (t,d)-orderability of a small word list")
    p.add_argument("--words", required=True, help="one word per line; an empty line is the empty word")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--metric", default="lev", choices=("pp", "ppr", "lev"))

    p = sub.add_parser("bench", help="work between outputs as CSV, optionally plotted")
    _add_source(p)
    _add_stream_options(p)
    p.add_argument("--outputs", type=int, default=10_000)
    p.add_argument("--csv", default=None, help="write the CSV here instead of stdout")
    p.add_argument("--plot", default=None, help="render a PNG of gaps and slack")
    return parser


# -- subcommands -----------------------------------------------------------------

def cmd_partition(args, out) -> int:
    dfa = _load(args)
    part = build_partition(dfa)
    print(f"t={part.t}", file=out)
    if part.finite:
        print("finite=true", file=out)
    else:
        for i, cls in enumerate(part.classes.classes):
            print(f"class {i}: " + " ".join(str(q) for q in sorted(cls)), file=out)
        nl = nonloopable_words(dfa)
        print("nonloopable: " + " ".join(w if w else "ε" for w in nl), file=out)
    if not args.no_write:
        stem = os.path.splitext(os.path.basename(args.dfa))[0] if args.dfa else "regex"
        os.makedirs(args.out, exist_ok=True)
        for i, p in enumerate(part.parts):
            path = os.path.join(args.out, f"{stem}.part{i}.dfa")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(serialize_dfa(p))
            print(f"wrote {path}", file=out)
    return 0


def _round_robin(streams, limit):
    live = list(enumerate(streams))
    produced = 0
    while live and (limit is None or produced < limit):
        nxt = []
        for i, s in live:
            if limit is not None and produced >= limit:
                break
            try:
                script = next(s)
            except StopIteration:
                continue
            produced += 1
            yield i, s, script
            nxt.append((i, s))
        live = nxt


def cmd_enumerate(args, out) -> int:
    dfa = _load(args)
    streams = enumerate_language(dfa, _config(args, None))
    parts = build_partition(dfa).parts if args.verify else None
    words: dict[int, str] = {}
    seen: dict[int, set[str]] = {}
    if args.stats:
        print("stream,index,work,gap", file=sys.stderr)
    for i, s, script in _round_robin(streams, args.max_words):
        line = encode_script(script)
        # with several streams each line names its stream: "<part>\t<script>"
        out.write(f"{i}\t{line}\n" if len(streams) > 1 else line + "\n")
        if args.verify:
            from .oracle import replay_tokens

            part_index = i if args.part is None else args.part
            w = replay_tokens(words.get(i, ""), line.split())
            if not member(parts[part_index], w) or w in seen.setdefault(i, set()):
                raise CliError(f"verification failed at output {s.outputs - 1} of stream {i}: {w!r}")
            seen[i].add(w)
            words[i] = w
        if args.stats:
            print(f"{i},{s.outputs - 1},{s.work},{s.gaps[-1]}", file=sys.stderr)
    if args.stats:
        print("stream,stratum,words,finished_at", file=sys.stderr)
        for i, s in enumerate(streams):
            if s.pipeline is not None:
                for st in s.pipeline.strata:
                    print(f"{i},{st.index},{st.words},{st.finished_at}", file=sys.stderr)
    return 0


def cmd_slender(args, out) -> int:
    dfa = _load(args)
    slender = is_slender(dfa)
    print(f"slender={'true' if slender else 'false'}", file=out)
    if not slender:
        if args.threads or args.enumerate is not None:
            raise CliError("the language is not slender")
        return 0
    dec = slender_threads(dfa)
    if args.threads:
        print(f"t={dec.t}", file=out)
        print("finite: " + " ".join(w if w else "ε" for w in dec.finite_part), file=out)
        for i, th in enumerate(dec.threads):
            tails = " ".join(u if u else "ε" for u in th.tails)
            print(f"thread {i}: r={th.prefix or 'ε'} s={th.loop} tails={tails}", file=out)
    if args.enumerate is not None:
        streams = enumerate_slender(dfa, args.max_words)
        if not 0 <= args.enumerate < len(streams):
            raise CliError(f"thread {args.enumerate} does not exist; there are {len(streams)}")
        for script in streams[args.enumerate]:
            out.write(encode_script(script) + "\n")
    return 0


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return fh.read().splitlines()


def cmd_check(args, out) -> int:
    dfa = _load(args)
    scripts = _read_lines(args.scripts)
    for n, line in enumerate(scripts, start=1):
        try:
            decode_script(line)
        except ValueError as exc:
            raise CliError(f"{args.scripts}:{n}: {exc}") from None
    rep = verify_stream(scripts, dfa, args.bound, metric_name(args.metric), ell=args.ell)
    if rep.ok:
        print(f"ok outputs={rep.outputs} max_script={rep.max_script}", file=out)
        return 0
    v = rep.first_violation
    print(f"violation output={v.index} kind={v.kind}: {v.message}", file=out)
    return 1


def cmd_check_order(args, out) -> int:
    words = _read_lines(args.words)
    ok = check_td_orderable(words, args.t, args.d, metric_name(args.metric))
    print(f"orderable={'true' if ok else 'false'}", file=out)
    return 0


def cmd_bench(args, out) -> int:
    dfa = _load(args)
    cfg = _config(args, args.outputs)
    cfg.strict = False
    streams = enumerate_language(dfa, cfg)
    stream = streams[0]
    for _ in stream:
        pass
    rows = [(j, 0, g, sl) for j, (g, sl) in enumerate(zip(stream.gaps, stream.slack))]
    total = 0
    for j, row in enumerate(rows):
        total += row[2]
        rows[j] = (row[0], total, row[2], row[3])
    fh = open(args.csv, "w", newline="", encoding="utf-8") if args.csv else out
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "work", "gap", "slack"])
        writer.writerows(rows)
    finally:
        if args.csv:
            fh.close()
    if args.plot:
        from .plotting import plot_gaps

        plot_gaps([r[0] for r in rows][1:], [r[2] for r in rows][1:], [r[3] for r in rows][1:], args.plot,
                  title=f"cadence {stream.cadence}, {stream.underruns} underruns")
    summary = sys.stderr if not args.csv else out
    gaps = sorted(stream.gaps[1:]) or [0]
    median = gaps[len(gaps) // 2]
    print(f"outputs={stream.outputs} cadence={stream.cadence} max_gap={stream.max_gap} "
          f"median_gap={median} underruns={stream.underruns}", file=summary)
    return 0


COMMANDS = {
    "partition": cmd_partition,
    "enumerate": cmd_enumerate,
    "slender": cmd_slender,
    "check": cmd_check,
    "check-order": cmd_check_order,
    "bench": cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    try:
        return COMMANDS[args.command](args, out)
    except BrokenPipeError:
        return 0
    except (CliError, DfaError, RegexError, StratumError, NotSlenderError, OracleCapError,
            UnderrunError, ValueError, OSError) as exc:
        print(f"laxord: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
