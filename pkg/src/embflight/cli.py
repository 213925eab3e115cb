"""Command line front end: serve, pilot-run, link-bench, replay, course-gen."""

from __future__ import annotations

import argparse
import json
import sys

from .course import generate_course, write_score_csv
from .linksim import PROFILES, measure_roundtrip, write_latency_csv
from .pilot import EpisodeConfig, run_episode
from .session import RunConfig, ReplayMismatch, load_config, replay_session
from . import server as server_mod


def _parse_sweep(text: str) -> list[float]:
    """Frequency sweep 'start:stop[:step]' in Hz, inclusive."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError("sweep must be start:stop[:step]")
    start, stop = float(parts[0]), float(parts[1])
    step = float(parts[2]) if len(parts) == 3 else 1.0
    if start <= 0 or stop < start or step <= 0:
        raise argparse.ArgumentTypeError("sweep bounds must be positive and ordered")
    freqs = []
    f = start
    while f <= stop + 1e-9:
        freqs.append(round(f, 9))
        f += step
    return freqs


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="embflight", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("serve", help="run the cockpit session service")
    sp.add_argument("--config", help="RunConfig JSON file (defaults apply if omitted)")
    sp.add_argument("--listen", default="127.0.0.1:8765", metavar="ADDR:PORT")

    pp = sub.add_parser("pilot-run", help="fly the synthetic pilot through a course")
    pp.add_argument("--strategy", choices=["attitude", "rate"], default="attitude")
    pp.add_argument("--seed", type=int, default=0, help="course seed")
    pp.add_argument("--link", choices=sorted(PROFILES), default=None, help="inject link delays")
    pp.add_argument("--count", type=int, default=84)
    pp.add_argument("--spacing", type=float, default=40.0)
    pp.add_argument("--out", default=None, help="write the episode report JSON here")
    pp.add_argument("--csv", default=None, help="write the per-waypoint CSV here")

    lp = sub.add_parser("link-bench", help="round-trip latency/loss sweep for a device profile")
    lp.add_argument("--profile", choices=sorted(PROFILES), required=True)
    lp.add_argument("--freq-sweep", type=_parse_sweep, default=_parse_sweep("1:100"))
    lp.add_argument("--packets", type=int, default=2000, help="command packets per frequency")
    lp.add_argument("--seed", type=int, default=0)
    lp.add_argument("--out", default=None, help="write the sweep CSV here")

    rp = sub.add_parser("replay", help="re-drive a recorded session log")
    rp.add_argument("log")
    rp.add_argument("--verify", action="store_true", help="assert state equality per tick")

    cp = sub.add_parser("course-gen", help="generate a waypoint course")
    cp.add_argument("--seed", type=int, default=0)
    cp.add_argument("--count", type=int, default=84)
    cp.add_argument("--spacing", type=float, default=40.0)
    cp.add_argument("--out", default=None, help="write the course JSON here")
    return p


def _cmd_serve(args) -> int:
    config = load_config(args.config) if args.config else RunConfig()
    host, _, port = args.listen.rpartition(":")
    server_mod.serve(config, host=host or "127.0.0.1", port=int(port))
    return 0


def _cmd_pilot_run(args) -> int:
    course = generate_course(args.seed, args.count, args.spacing)
    link = PROFILES[args.link] if args.link else None
    report = run_episode(args.strategy, course, link, EpisodeConfig(seed=args.seed))
    text = json.dumps(report.to_dict(), sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)
    if args.csv:
        write_score_csv(args.csv, report.records)
    print(
        f"mean score {report.mean_score:.2f}% over {len(report.records)} waypoints, "
        f"{report.crashes} crashes, {report.duration:.1f} s",
        file=sys.stderr,
    )
    return 0


def _cmd_link_bench(args) -> int:
    profile = PROFILES[args.profile]
    stats = [
        measure_roundtrip(profile, freq, n_packets=args.packets, seed=args.seed)
        for freq in args.freq_sweep
    ]
    if args.out:
        write_latency_csv(args.out, stats)
    else:
        print("freq_hz,mean_rtt_ms,p95_rtt_ms,loss_pct")
        for s in stats:
            print(f"{s.freq},{s.mean_rtt},{s.p95_rtt},{s.loss_pct}")
    for s in stats[:: max(1, len(stats) // 10)]:
        print(
            f"{s.freq:7.1f} Hz  mean {s.mean_rtt:7.2f} ms  p95 {s.p95_rtt:7.2f} ms  "
            f"loss {100 * s.loss_pct:.2f}%",
            file=sys.stderr,
        )
    return 0


def _cmd_replay(args) -> int:
    try:
        ticks = replay_session(args.log, verify=args.verify)
    except ReplayMismatch as e:
        print(str(e), file=sys.stderr)
        return 1
    print(f"replayed {ticks} ticks" + (" (verified)" if args.verify else ""))
    return 0


def _cmd_course_gen(args) -> int:
    course = generate_course(args.seed, args.count, args.spacing)
    text = json.dumps(course.to_dict(), sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "serve": _cmd_serve,
        "pilot-run": _cmd_pilot_run,
        "link-bench": _cmd_link_bench,
        "replay": _cmd_replay,
        "course-gen": _cmd_course_gen,
    }
    try:
        return handlers[args.command](args)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
