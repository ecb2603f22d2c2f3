"""Command-line interface.

Exit codes: 0 success / equivalent, 1 counterexample found, 2 error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import conformance, learners, minimization
from .dfa import parse_dfa, random_dfa, serialize_dfa
from .errors import AutomataError
from .oracle import DEFAULT_TIMEOUT, DfaOracle, WfaOracle, open_endpoint, serve, serve_tcp
from .words import format_word, read_word_list, write_word_list
from .weighted import learning as wlearning
from .weighted.wfa import Wfa, parse_wfa, random_wfa, serialize_wfa

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_ERROR = 0, 1, 2
DEFAULT_SEED = 20260101


class UsageError(AutomataError):
    pass


@dataclass
class RunReport:
    outputs: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    rounds: int = 0
    wall_time: float = 0.0

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))

    def render(self) -> str:
        s = self.stats
        lines = [f"wrote {p}" for p in self.outputs]
        lines.append(
            f"membership queries: {s.get('membership', 0)} "
            f"(cache hits {s.get('cache_hits', 0)}), equivalence rounds: {self.rounds}"
        )
        for phase, n in sorted(s.get("phases", {}).items()):
            lines.append(f"  {phase}: {n}")
        lines.append(f"wall time: {self.wall_time:.3f}s")
        return "\n".join(lines)


def load_machine(path):
    text = Path(path).read_text(encoding="utf-8")
    head = next((line.split("#", 1)[0].strip() for line in text.splitlines()
                 if line.split("#", 1)[0].strip()), "")
    if head == "wfa":
        return parse_wfa(text)
    return parse_dfa(text)


def dump_machine(machine) -> str:
    return serialize_wfa(machine) if isinstance(machine, Wfa) else serialize_dfa(machine)


def write_output(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _open_target(args):
    endpoint = args.target
    if endpoint.startswith("file:"):
        machine = load_machine(endpoint[5:])
        want = "wfa" if isinstance(machine, Wfa) else "dfa"
        if want != args.mode:
            raise UsageError(f"target file holds a {want.upper()} but --mode is {args.mode}")
        oracle = WfaOracle(machine) if want == "wfa" else DfaOracle(machine)
        return oracle, machine
    alphabet = args.alphabet.split() if args.alphabet else None
    mode = "rational" if args.mode == "wfa" else "bit"
    return open_endpoint(endpoint, alphabet, mode, args.timeout), None


def cmd_learn(args) -> int:
    algo = args.algo
    needs_words = algo in ("id", "dual-id")
    if needs_words and not args.given_words:
        raise UsageError(f"--algo {algo} requires --given-words")
    if algo == "az" and args.bound is None:
        raise UsageError("--algo az requires --bound")
    if args.mode == "wfa" and algo not in ("lstar", "id"):
        raise UsageError("--mode wfa supports --algo lstar and id only")
    if not args.target.startswith("file:") and algo in ("lstar", "kv") and args.bound is None:
        raise UsageError("a black-box target needs --bound for equivalence testing")

    start = time.perf_counter()
    mq, machine = _open_target(args)
    with mq:
        given = read_word_list(Path(args.given_words).read_text(encoding="utf-8"), mq.alphabet) if needs_words else None
        if args.mode == "wfa":
            if algo == "id":
                result = wlearning.run_wfa_id(mq, given, trace=args.trace)
            else:
                if machine is not None:
                    eq = wlearning.exact_wfa_equivalence(machine)
                else:
                    eq = wlearning.wfa_testing_eq_oracle(args.bound, mq)
                result = wlearning.run_wfa_lstar(mq, eq, args.max_rounds, trace=args.trace)
            learned = result.hypothesis
        else:
            config = learners.LearnerConfig(
                algo,
                bound=args.bound,
                given_S=given if algo == "id" else None,
                given_E=given if algo == "dual-id" else None,
                max_equivalence_rounds=args.max_rounds,
            )
            if machine is not None:
                eq = learners.exact_equivalence(machine)
            elif args.bound is not None:
                eq = conformance.testing_eq_oracle(args.bound, mq)
            else:
                eq = None
            result = learners.learn(config, mq, eq, trace=args.trace)
            learned = result.hypothesis.dfa
    if args.trace:
        for entry in result.trace:
            print(entry.rstrip("\n"), file=sys.stderr)

    write_output(args.out, dump_machine(learned))
    report = RunReport(
        outputs=[args.out or "-"],
        stats=mq.log.as_dict(),
        rounds=result.rounds,
        wall_time=time.perf_counter() - start,
    )
    if args.report:
        Path(args.report).write_text(report.to_json() + "\n", encoding="utf-8")
    if args.stats == "json":
        print(json.dumps(mq.log.as_dict(), sort_keys=True), file=sys.stderr if args.out in (None, "-") else sys.stdout)
    else:
        print(report.render(), file=sys.stderr)
    return EXIT_OK


def cmd_minimize(args) -> int:
    machine = load_machine(args.infile)
    if args.mode == "wfa" or isinstance(machine, Wfa):
        if not isinstance(machine, Wfa):
            raise UsageError("--mode wfa given but input is a DFA")
        m, S, E = wlearning.wfa_access_and_separators(machine)
        result = m
    else:
        if args.mode == "dfa" and isinstance(machine, Wfa):
            raise UsageError("--mode dfa given but input is a WFA")
        reach, access = minimization.reachable_part(machine)
        result, separators = minimization.moore_merge(reach)
        # access words of the quotient: first word reaching each block
        _, quotient_access = minimization.reachable_part(result)
        S, E = quotient_access.words, separators.words
    write_output(args.out, dump_machine(result))
    if args.emit_sets:
        outdir = Path(args.emit_sets)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "S.words").write_text(write_word_list(S), encoding="utf-8")
        (outdir / "E.words").write_text(write_word_list(E), encoding="utf-8")
    return EXIT_OK


def _suite_for(machine, bound, method):
    if isinstance(machine, Wfa):
        if method != "w":
            raise UsageError("only the W-method is available for weighted automata")
        return wlearning.wfa_w_method(machine, bound)
    build = conformance.w_method_suite if method == "w" else conformance.hsi_suite
    return build(machine, bound)


def cmd_gentests(args) -> int:
    machine = load_machine(args.infile)
    suite = _suite_for(machine, args.bound, args.method)
    write_output(args.out, write_word_list(suite))
    return EXIT_OK


def cmd_equiv(args) -> int:
    known = load_machine(args.known)
    if args.suite:
        suite = read_word_list(Path(args.suite).read_text(encoding="utf-8"), known.alphabet)
    elif args.bound is None:
        raise UsageError("equiv needs --bound or --suite")
    else:
        suite = _suite_for(known, args.bound, args.method)
    mode = "rational" if isinstance(known, Wfa) else "bit"
    with open_endpoint(args.black, known.alphabet, mode, args.timeout) as black:
        verdict = conformance.run_suite(suite, known, black)
    if verdict.passed:
        print(f"pass ({verdict.queries} test words)")
        return EXIT_OK
    print(f"counterexample: {format_word(verdict.counterexample)}")
    return EXIT_COUNTEREXAMPLE


def cmd_serve(args) -> int:
    machine = load_machine(args.machine)
    if args.tcp is not None:
        def ready(port):
            print(f"listening on {args.host}:{port}", file=sys.stderr, flush=True)

        serve_tcp(machine, args.host, args.tcp, ready=ready, once=not args.forever)
        return EXIT_OK
    served = serve(machine, sys.stdin, sys.stdout)
    print(f"served {served} queries", file=sys.stderr, flush=True)
    return EXIT_OK


def cmd_random(args) -> int:
    alphabet = args.alphabet.split()
    if args.mode == "wfa":
        machine = random_wfa(args.seed, args.states, alphabet)
    else:
        machine = random_dfa(args.seed, args.states, alphabet)
    write_output(args.out, dump_machine(machine))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alfa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="learn an automaton from a membership oracle")
    p.add_argument("--algo", choices=learners.ALGORITHMS, default="lstar")
    p.add_argument("--mode", choices=("dfa", "wfa"), default="dfa")
    p.add_argument("--target", required=True, help="file:PATH | exec:CMD | tcp:HOST:PORT")
    p.add_argument("--bound", type=int, help="state (or dimension) bound of the target")
    p.add_argument("--given-words", help="word list for id (S) or dual-id (E)")
    p.add_argument("--alphabet", help="expected alphabet, space separated (black boxes)")
    p.add_argument("--out", help="output automaton file (default stdout)")
    p.add_argument("--report", help="write the run report as JSON to this path")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--stats", choices=("text", "json"), default="text")
    p.add_argument("--max-rounds", type=int, default=learners.DEFAULT_MAX_ROUNDS)
    p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("minimize", help="minimize a DFA or WFA file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.add_argument("--emit-sets", metavar="DIR", help="write S.words and E.words into DIR")
    p.add_argument("--mode", choices=("dfa", "wfa"))
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("gentests", help="generate a conformance test suite")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--method", choices=("w", "hsi"), default="w")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gentests)

    p = sub.add_parser("equiv", help="test a black box against a known machine")
    p.add_argument("--known", required=True)
    p.add_argument("--black", required=True, help="exec:CMD | tcp:HOST:PORT")
    p.add_argument("--bound", type=int)
    p.add_argument("--suite", help="use this word list instead of generating one")
    p.add_argument("--method", choices=("w", "hsi"), default="w")
    p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("serve", help="answer membership queries for a machine file")
    p.add_argument("--machine", required=True)
    p.add_argument("--tcp", type=int, metavar="PORT", help="listen on TCP instead of stdio (0 = any port)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--forever", action="store_true", help="keep accepting TCP sessions")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("random", help="generate a random DFA or WFA")
    p.add_argument("--mode", choices=("dfa", "wfa"), default="dfa")
    p.add_argument("--states", type=int, required=True, help="state count (or dimension)")
    p.add_argument("--alphabet", default="a b")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out")
    p.set_defaults(func=cmd_random)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (AutomataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
