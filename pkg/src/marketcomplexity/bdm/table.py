"""Complexity table built from halting-output frequencies.

The coding-theorem estimate K(x) = -log2 m(x) is tabulated for every binary
string up to a chosen maximum length. Strings the enumeration never
produced get a fallback value one bit above the largest exact value at
their length, so lookups stay total and order-preserving.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log2
from pathlib import Path

from ..errors import TableFormatError
from .machines import OutputDistribution


@dataclass(frozen=True)
class CtmMeta:
    states: int
    colors: int
    step_bound: int
    machines: int
    mode: str  # "exhaustive" or "sampled"

    def header_line(self) -> str:
        return (
            f"# states={self.states} colors={self.colors} "
            f"step_bound={self.step_bound} machines={self.machines} "
            f"mode={self.mode}"
        )


@dataclass(frozen=True)
class CtmTable:
    values: dict[str, float]
    fallback: frozenset[str]
    meta: CtmMeta

    @property
    def d_max(self) -> int:
        return max(len(s) for s in self.values)

    def k(self, s: str) -> float:
        try:
            return self.values[s]
        except KeyError:
            raise KeyError(
                f"string of length {len(s)} not covered by table (d_max={self.d_max})"
            ) from None

    def is_fallback(self, s: str) -> bool:
        return s in self.fallback

    def max_k(self, length: int) -> float:
        vals = [v for s, v in self.values.items() if len(s) == length]
        if not vals:
            raise KeyError(f"table has no entries of length {length}")
        return max(vals)

    def save(self, path: str | Path) -> None:
        path = Path(path)
        lines = [self.meta.header_line()]
        for s in sorted(self.values, key=lambda x: (len(x), x)):
            tag = "fallback" if s in self.fallback else "exact"
            lines.append(f"{s}\t{self.values[s]:.9f}\t{tag}")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "CtmTable":
        text = Path(path).read_text(encoding="utf-8")
        lines = text.splitlines()
        if not lines or not lines[0].startswith("# "):
            raise TableFormatError(f"{path}: missing header line")
        meta = _parse_header(lines[0], path)
        values: dict[str, float] = {}
        fallback = set()
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise TableFormatError(f"{path}:{lineno}: expected 3 tab fields")
            s, kval, tag = parts
            if not s or set(s) - {"0", "1"}:
                raise TableFormatError(f"{path}:{lineno}: invalid bitstring {s!r}")
            if tag not in ("exact", "fallback"):
                raise TableFormatError(f"{path}:{lineno}: invalid tag {tag!r}")
            try:
                k = float(kval)
            except ValueError:
                raise TableFormatError(f"{path}:{lineno}: invalid K value {kval!r}")
            if not k > 0:
                raise TableFormatError(f"{path}:{lineno}: K must be positive")
            values[s] = k
            if tag == "fallback":
                fallback.add(s)
        if not values:
            raise TableFormatError(f"{path}: table has no entries")
        return cls(values=values, fallback=frozenset(fallback), meta=meta)


def _parse_header(line: str, path) -> CtmMeta:
    fields = {}
    for token in line[2:].split():
        if "=" not in token:
            raise TableFormatError(f"{path}: malformed header token {token!r}")
        key, val = token.split("=", 1)
        fields[key] = val
    try:
        meta = CtmMeta(
            states=int(fields["states"]),
            colors=int(fields["colors"]),
            step_bound=int(fields["step_bound"]),
            machines=int(fields["machines"]),
            mode=fields["mode"],
        )
    except (KeyError, ValueError) as exc:
        raise TableFormatError(f"{path}: incomplete header: {exc}")
    if meta.colors != 2:
        raise TableFormatError(f"{path}: only 2-colour tables are supported")
    if meta.mode not in ("exhaustive", "sampled"):
        raise TableFormatError(f"{path}: invalid mode {meta.mode!r}")
    return meta


def ctm_from_frequency(dist: OutputDistribution, d_max: int | None = None) -> CtmTable:
    """Tabulate K(x) = -log2 m(x) for every binary string of length
    1..d_max, with fallback values for strings never produced."""
    if not dist.counts:
        raise ValueError("distribution is empty")
    max_produced = max(len(s) for s in dist.counts)
    if d_max is None:
        d_max = min(12, max_produced)
    values: dict[str, float] = {}
    fallback = set()
    global_max = 0.0
    for length in range(1, d_max + 1):
        exact = {}
        for val in range(1 << length):
            s = format(val, f"0{length}b")
            c = dist.counts.get(s, 0)
            if c > 0:
                exact[s] = -log2(c / dist.halting)
        if exact:
            base = max(exact.values())
        else:
            # nothing of this length was ever produced; fall back from the
            # hardest string seen so far
            base = global_max
        global_max = max(global_max, base)
        for val in range(1 << length):
            s = format(val, f"0{length}b")
            if s in exact:
                values[s] = exact[s]
            else:
                values[s] = base + 1.0
                fallback.add(s)
    meta = CtmMeta(
        states=dist.states,
        colors=2,
        step_bound=dist.step_bound,
        machines=dist.machines,
        mode="exhaustive" if dist.exhaustive else "sampled",
    )
    return CtmTable(values=values, fallback=frozenset(fallback), meta=meta)
