"""Devices: the machine's boundary to its environment.

A device is mounted at a reserved path (``dev.clock``, ``dev.stdin``,
``dev.stdout``).  Reads and writes addressed to a mount are intercepted
before the tree is touched: an input device produces a fresh value on
every access (never memoized), an output device turns the written value
into an effect.  The table is injected at machine construction, so tests
run against scripted fakes and stay deterministic.
"""

from __future__ import annotations

import sys
import time
from typing import Callable, Iterable, Iterator, Optional, TextIO, Union

from .errors import EndOfInput, NotEncodable, UnboundDevice
from .textio import decode_text, encode_text
from .tree import LEAF, SET, Node, Path

IN = "in"
OUT = "out"

CLOCK_PATH = "dev.clock"
STDIN_PATH = "dev.stdin"
STDOUT_PATH = "dev.stdout"


class Device:
    """One mount point; subclasses provide read() or write()."""

    direction: str = IN

    def read(self) -> Node:
        raise UnboundDevice("device is not readable")

    def write(self, value: Node) -> None:
        raise UnboundDevice("device is not writable")


class ClockDevice(Device):
    """Milliseconds since epoch; re-read on every access."""

    direction = IN

    def __init__(self, source: Optional[Callable[[], int]] = None):
        self.source = source if source is not None else _wall_clock_ms

    def read(self) -> Node:
        return Node.leaf(self.source())


def _wall_clock_ms() -> int:
    return time.time_ns() // 1_000_000


def scripted_clock(start: int, step: int = 1) -> Callable[[], int]:
    """A deterministic clock source: start, start+step, start+2*step, ..."""
    state = {"now": start}

    def tick() -> int:
        now = state["now"]
        state["now"] = now + step
        return now

    return tick


class LineInputDevice(Device):
    """One line of text per read, without the terminator, as string sugar."""

    direction = IN

    def __init__(self, source: Union[TextIO, Iterable[str]]):
        if hasattr(source, "readline"):
            self._next = lambda: source.readline()  # '' at EOF
        else:
            it: Iterator[str] = iter(source)
            self._next = lambda: next(it, "")

    def read(self) -> Node:
        line = self._next()
        if line == "":
            raise EndOfInput("input stream is exhausted")
        return encode_text(line.rstrip("\n"))


class TextOutputDevice(Device):
    """Writes a decoded line per value: leaves in decimal, sets as text."""

    direction = OUT

    def __init__(self, sink: Union[TextIO, Callable[[str], None]]):
        self._emit = sink if callable(sink) else sink.write

    def write(self, value: Node) -> None:
        if value.kind == LEAF:
            text = str(value.value)
        elif value.kind == SET:
            decoded = decode_text(value)
            if decoded is None:
                raise NotEncodable(f"cannot encode {value!r} as text")
            text = decoded
        else:
            raise NotEncodable(f"cannot encode {value!r} as text")
        self._emit(text + "\n")


class DeviceTable:
    """Immutable-after-construction map from mount path to device."""

    def __init__(self):
        self._mounts: dict[str, Device] = {}

    def mount(self, path: Union[Path, str], device: Device) -> "DeviceTable":
        key = str(path) if isinstance(path, Path) else path
        if any(k == key or k.startswith(key + ".") or key.startswith(k + ".") for k in self._mounts):
            raise UnboundDevice(f"overlapping mount {key}")
        self._mounts[key] = device
        return self

    def lookup(self, path: Union[Path, str]) -> Optional[Device]:
        key = str(path) if isinstance(path, Path) else path
        return self._mounts.get(key)

    @classmethod
    def standard(
        cls,
        clock: Optional[Callable[[], int]] = None,
        stdin: Union[TextIO, Iterable[str], None] = None,
        stdout: Union[TextIO, Callable[[str], None], None] = None,
    ) -> "DeviceTable":
        """The console machine: dev.clock, dev.stdin, dev.stdout."""
        table = cls()
        table.mount(CLOCK_PATH, ClockDevice(clock))
        table.mount(STDIN_PATH, LineInputDevice(stdin if stdin is not None else sys.stdin))
        table.mount(STDOUT_PATH, TextOutputDevice(stdout if stdout is not None else sys.stdout))
        return table


class CollectingOutput:
    """A stdout fake: call it like a sink, read .lines afterwards."""

    def __init__(self):
        self.chunks: list[str] = []

    def __call__(self, text: str) -> None:
        self.chunks.append(text)

    @property
    def lines(self) -> list[str]:
        return "".join(self.chunks).splitlines()


def read_device(table: DeviceTable, mount: Union[Path, str]) -> Node:
    device = table.lookup(mount)
    if device is None or device.direction != IN:
        raise UnboundDevice(f"no input device at {mount}")
    return device.read()


def write_device(table: DeviceTable, mount: Union[Path, str], value: Node) -> None:
    device = table.lookup(mount)
    if device is None or device.direction != OUT:
        raise UnboundDevice(f"no output device at {mount}")
    device.write(value)
