"""Membership oracles: white-box simulators and line-protocol black boxes.

Every oracle caches answers by word and keeps a :class:`QueryLog`.  Wire
protocol (newline-delimited UTF-8)::

    oracle -> learner   calf-oracle 1 <bit|rational>
    oracle -> learner   alphabet: a b ...
    learner -> oracle   Q <word>          (``Q eps`` for the empty word)
    oracle -> learner   1 | 0             (bit mode)
                        p | p/q           (rational mode)
    learner -> oracle   BYE
"""

from __future__ import annotations

import contextlib
import queue
import re
import shlex
import socket
import subprocess
import sys
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import SetupError, TransportError
from .words import Word, check_alphabet, format_word, parse_word

BANNER = "calf-oracle"
PROTOCOL_VERSION = "1"
MODES = ("bit", "rational")
DEFAULT_TIMEOUT = 10.0

_RATIONAL = re.compile(r"-?\d+(/\d+)?")


@dataclass
class QueryLog:
    membership: int = 0
    cache_hits: int = 0
    equivalence_rounds: int = 0
    phases: dict = field(default_factory=dict)
    transcript: list | None = None

    @property
    def wire_queries(self) -> int:
        return self.membership - self.cache_hits

    def as_dict(self) -> dict:
        return {
            "membership": self.membership,
            "cache_hits": self.cache_hits,
            "equivalence_rounds": self.equivalence_rounds,
            "phases": dict(self.phases),
        }


class MembershipOracle:
    """Caching front for a membership function.

    Subclasses implement :meth:`_ask`.  ``phase`` tags each query for the
    per-phase breakdown in the log.
    """

    mode = "bit"

    def __init__(self, alphabet: Sequence[str], record: bool = False):
        self.alphabet = check_alphabet(alphabet)
        self.cache: dict[Word, object] = {}
        self.log = QueryLog(transcript=[] if record else None)
        self.phase = "fill"

    def _ask(self, word: Word):
        raise NotImplementedError

    def query(self, word: Sequence[str]):
        word = tuple(word)
        log = self.log
        log.membership += 1
        log.phases[self.phase] = log.phases.get(self.phase, 0) + 1
        try:
            answer = self.cache[word]
        except KeyError:
            pass
        else:
            log.cache_hits += 1
            return answer
        answer = self._ask(word)
        self.cache[word] = answer
        if log.transcript is not None:
            log.transcript.append((word, answer))
        return answer

    __call__ = query

    @contextlib.contextmanager
    def in_phase(self, phase: str):
        previous, self.phase = self.phase, phase
        try:
            yield self
        finally:
            self.phase = previous

    def close(self) -> None:
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class FunctionOracle(MembershipOracle):
    def __init__(self, fn: Callable[[Word], object], alphabet, mode="bit", record=False):
        super().__init__(alphabet, record)
        self.fn = fn
        self.mode = mode

    def _ask(self, word):
        return self.fn(word)


class DfaOracle(MembershipOracle):
    """White-box oracle simulating a DFA."""

    def __init__(self, dfa, record=False):
        super().__init__(dfa.alphabet, record)
        self.dfa = dfa

    def _ask(self, word):
        return self.dfa(word)


class WfaOracle(MembershipOracle):
    """White-box oracle simulating a weighted automaton."""

    mode = "rational"

    def __init__(self, wfa, record=False):
        super().__init__(wfa.alphabet, record)
        self.wfa = wfa

    def _ask(self, word):
        return self.wfa(word)


def parse_answer(line: str, mode: str):
    line = line.strip()
    if mode == "bit":
        if line not in ("0", "1"):
            raise TransportError("expected 0 or 1", line)
        return int(line)
    if not _RATIONAL.fullmatch(line):
        raise TransportError("expected a rational p or p/q", line)
    try:
        return Fraction(line)
    except ZeroDivisionError:
        raise TransportError("zero denominator", line) from None


def format_answer(value, mode: str) -> str:
    if mode == "bit":
        return "1" if value else "0"
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


class _LineOracle(MembershipOracle):
    """Shared protocol logic; subclasses provide ``_send`` / ``_recv``."""

    def __init__(self, alphabet=None, mode="bit", timeout=DEFAULT_TIMEOUT, record=False):
        self.timeout = timeout
        self.mode = mode
        self._closed = False
        announced_mode, announced = self._handshake()
        if mode != announced_mode:
            raise SetupError(f"oracle speaks {announced_mode!r} mode, expected {mode!r}")
        if alphabet is not None and tuple(alphabet) != tuple(announced):
            raise SetupError(
                f"alphabet mismatch: oracle announced {' '.join(announced)}, "
                f"configured {' '.join(alphabet)}"
            )
        super().__init__(announced, record)

    def _handshake(self):
        banner = self._recv()
        parts = banner.split()
        if len(parts) != 3 or parts[0] != BANNER or parts[1] != PROTOCOL_VERSION or parts[2] not in MODES:
            raise SetupError(f"bad banner {banner!r}")
        line = self._recv()
        if not line.startswith("alphabet:"):
            raise SetupError(f"expected alphabet announcement, got {line!r}")
        try:
            alphabet = check_alphabet(line[len("alphabet:"):].split())
        except ValueError as exc:
            raise SetupError(f"bad alphabet announcement: {exc}") from None
        return parts[2], alphabet

    def _ask(self, word):
        self._send("Q " + format_word(word))
        return parse_answer(self._recv(), self.mode)

    def close(self):
        if self._closed:
            return
        self._closed = True
        with contextlib.suppress(OSError, TransportError, ValueError):
            self._send("BYE")
        self._shutdown()


class ProcessOracle(_LineOracle):
    """Black box spoken to over the stdin/stdout pipes of a child process."""

    def __init__(self, command, alphabet=None, mode="bit", timeout=DEFAULT_TIMEOUT, record=False):
        if isinstance(command, str):
            command = shlex.split(command)
        self.command = list(command)
        try:
            self.proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as exc:
            raise SetupError(f"cannot start oracle {self.command}: {exc}") from None
        self._lines: queue.Queue = queue.Queue()
        reader = threading.Thread(target=self._pump, daemon=True)
        reader.start()
        try:
            super().__init__(alphabet, mode, timeout, record)
        except Exception:
            self._shutdown()
            raise

    def _pump(self):
        for line in self.proc.stdout:
            self._lines.put(line)
        self._lines.put(None)

    def _send(self, line):
        try:
            self.proc.stdin.write(line + "\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError, ValueError):
            raise TransportError("oracle process closed its input", line) from None

    def _recv(self):
        try:
            line = self._lines.get(timeout=self.timeout)
        except queue.Empty:
            raise TransportError(f"no reply within {self.timeout}s") from None
        if line is None:
            status = self.proc.wait()
            if getattr(self, "log", None) is None:
                raise SetupError(f"oracle process exited with status {status} before handshake")
            raise TransportError(f"oracle process exited with status {status}")
        return line.rstrip("\n")

    def _shutdown(self):
        with contextlib.suppress(OSError, ValueError):
            self.proc.stdin.close()
        try:
            self.proc.wait(timeout=self.timeout)
        except subprocess.TimeoutExpired:
            self.proc.kill()
            self.proc.wait()


class TcpOracle(_LineOracle):
    def __init__(self, host, port, alphabet=None, mode="bit", timeout=DEFAULT_TIMEOUT, record=False):
        try:
            self.sock = socket.create_connection((host, int(port)), timeout=timeout)
        except OSError as exc:
            raise SetupError(f"cannot connect to {host}:{port}: {exc}") from None
        self.sock.settimeout(timeout)
        self.rfile = self.sock.makefile("r", encoding="utf-8", newline="\n")
        self.wfile = self.sock.makefile("w", encoding="utf-8", newline="\n")
        try:
            super().__init__(alphabet, mode, timeout, record)
        except Exception:
            self._shutdown()
            raise

    def _send(self, line):
        try:
            self.wfile.write(line + "\n")
            self.wfile.flush()
        except OSError as exc:
            raise TransportError(f"send failed ({exc})", line) from None

    def _recv(self):
        try:
            line = self.rfile.readline()
        except socket.timeout:
            raise TransportError(f"no reply within {self.timeout}s") from None
        except OSError as exc:
            raise TransportError(f"receive failed ({exc})") from None
        if not line:
            if getattr(self, "log", None) is None:
                raise SetupError("connection closed before handshake")
            raise TransportError("connection closed by oracle")
        return line.rstrip("\r\n")

    def _shutdown(self):
        for f in (getattr(self, "wfile", None), getattr(self, "rfile", None)):
            with contextlib.suppress(OSError):
                if f is not None:
                    f.close()
        with contextlib.suppress(OSError):
            self.sock.close()


def open_endpoint(endpoint: str, alphabet=None, mode="bit", timeout=DEFAULT_TIMEOUT, record=False):
    """Open ``exec:CMD`` or ``tcp:HOST:PORT`` as a membership oracle."""
    kind, _, rest = endpoint.partition(":")
    if kind == "exec" and rest:
        return ProcessOracle(rest, alphabet, mode, timeout, record)
    if kind == "tcp" and rest:
        host, _, port = rest.rpartition(":")
        if not host or not port.isdigit():
            raise SetupError(f"bad tcp endpoint {endpoint!r}; expected tcp:HOST:PORT")
        return TcpOracle(host, port, alphabet, mode, timeout, record)
    raise SetupError(f"unknown endpoint {endpoint!r}; expected exec:CMD or tcp:HOST:PORT")


def serve(machine, rfile, wfile, mode=None) -> int:
    """Answer protocol queries for ``machine`` until BYE or EOF.

    Returns the number of ``Q`` requests answered.
    """
    if mode is None:
        mode = "rational" if hasattr(machine, "dim") else "bit"
    wfile.write(f"{BANNER} {PROTOCOL_VERSION} {mode}\n")
    wfile.write("alphabet: " + " ".join(machine.alphabet) + "\n")
    wfile.flush()
    served = 0
    for line in rfile:
        line = line.strip()
        if line == "BYE":
            break
        if not line.startswith("Q "):
            wfile.write("ERR expected 'Q <word>' or 'BYE'\n")
            wfile.flush()
            continue
        try:
            word = parse_word(line[2:], machine.alphabet)
        except ValueError as exc:
            wfile.write(f"ERR {exc}\n")
            wfile.flush()
            continue
        wfile.write(format_answer(machine(word), mode) + "\n")
        wfile.flush()
        served += 1
    return served


def serve_tcp(machine, host="127.0.0.1", port=0, ready=None, once=True):
    """Serve ``machine`` on a TCP socket.  ``ready(port)`` is called once
    listening; with ``once`` the server exits after the first session."""
    with socket.create_server((host, port)) as srv:
        if ready is not None:
            ready(srv.getsockname()[1])
        while True:
            conn, _ = srv.accept()
            with conn, conn.makefile("r", encoding="utf-8") as rf, conn.makefile("w", encoding="utf-8") as wf:
                served = serve(machine, rf, wf)
            print(f"served {served} queries", file=sys.stderr, flush=True)
            if once:
                return served
