"""Example zoo and the growth-vs-calculus consistency check."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .analysis import DEFAULT_MAX_DEGREE, DEFAULT_WINDOW, GKEstimate, estimate_gkdim
from .calculus import DimBound, eval_construction, parse_expr
from .coeff import ParamPoly
from .growth import (
    GrowthSequence,
    MonomialModule,
    growth_sequence,
    make_frame,
    module_growth_sequence,
    row_cap_from_env,
)
from .presentation import (
    NCPoly,
    Presentation,
    PresentationSyntaxError,
    Word,
    confluence_check,
    parse_poly,
    parse_presentation,
)

__all__ = [
    "ZooEntry",
    "RunConfig",
    "ConsistencyReport",
    "builtin_zoo_dir",
    "load_zoo",
    "parse_list",
    "parse_monomials",
    "verify_consistency",
]


def builtin_zoo_dir() -> Path:
    return Path(__file__).resolve().parent / "zoo"


@dataclass(frozen=True)
class ZooEntry:
    name: str
    source: str
    frame: str
    expect: str
    notes: str = ""
    annihilators: Optional[str] = None
    module_gens: Optional[str] = None

    @property
    def is_module(self) -> bool:
        return self.annihilators is not None

    def presentation(self) -> Presentation:
        return parse_presentation(self.source, name=self.name)


@dataclass(frozen=True)
class RunConfig:
    n_max: int = 10
    window: int = DEFAULT_WINDOW
    max_degree: int = DEFAULT_MAX_DEGREE
    row_cap: Optional[int] = None
    fmt: str = "csv"
    seed: int = 0
    require_exact: bool = True

    def __post_init__(self):
        if self.n_max < self.window + self.max_degree + 1:
            raise ValueError(
                f"n_max={self.n_max} is below window + max_degree + 1 = "
                f"{self.window + self.max_degree + 1}"
            )
        if self.fmt not in ("csv", "json"):
            raise ValueError("format must be csv or json")

    @property
    def cap(self) -> int:
        return self.row_cap if self.row_cap is not None else row_cap_from_env()


def parse_list(text: str, pres: Presentation) -> List[NCPoly]:
    out = []
    col = 1
    for piece in text.split(","):
        if piece.strip():
            out.append(parse_poly(piece, pres, None, col))
        col += len(piece) + 1
    return out


def parse_monomials(text: str, pres: Presentation) -> Tuple[Word, ...]:
    words = []
    for p in parse_list(text, pres):
        if not p.is_monomial() or next(iter(p.terms.values())) != 1:
            raise PresentationSyntaxError(f"expected a monomial with coefficient 1, got {text!r}")
        (w,) = p.words()
        words.append(w)
    return tuple(words)


def _entry_from_json(obj: dict, base: Path) -> ZooEntry:
    try:
        name = obj["name"]
        if "source" in obj:
            source = obj["source"]
        else:
            source = (base / obj["presentation"]).read_text(encoding="utf-8")
        module = obj.get("module") or {}
        return ZooEntry(
            name=name,
            source=source,
            frame=obj["frame"],
            expect=obj["expect"],
            notes=obj.get("notes", ""),
            annihilators=module.get("annihilators"),
            module_gens=module.get("gens", "1") if module else None,
        )
    except KeyError as e:
        raise ValueError(f"zoo entry is missing the {e.args[0]!r} field") from None


def load_zoo(directory=None) -> List[ZooEntry]:
    """Entries from every ``*.json`` file in ``directory`` (an object or a list each)."""
    root = Path(directory) if directory is not None else builtin_zoo_dir()
    if not root.is_dir():
        raise FileNotFoundError(f"zoo directory not found: {root}")
    entries: List[ZooEntry] = []
    for path in sorted(root.glob("*.json")):
        data = json.loads(path.read_text(encoding="utf-8"))
        for obj in data if isinstance(data, list) else [data]:
            entries.append(_entry_from_json(obj, path.parent))
    return sorted(entries, key=lambda e: e.name)


@dataclass
class ConsistencyReport:
    name: str
    passed: bool
    message: str
    sequence: Optional[GrowthSequence] = None
    estimate: Optional[GKEstimate] = None
    bound: Optional[DimBound] = None
    rescale_ok: Optional[bool] = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.message}"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "message": self.message,
            "ranks": list(self.sequence.values) if self.sequence else None,
            "estimate": self.estimate.to_json() if self.estimate else None,
            "bound": self.bound.to_json() if self.bound else None,
            "rescale_ok": self.rescale_ok,
        }


def _sequence(entry: ZooEntry, pres: Presentation, frame, config: RunConfig) -> GrowthSequence:
    if entry.is_module:
        module = MonomialModule(
            parse_monomials(entry.annihilators, pres),
            parse_monomials(entry.module_gens or "1", pres),
        )
        return module_growth_sequence(pres, module, frame, config.n_max)
    return growth_sequence(pres, frame, config.n_max, config.cap)


def _rescaled_frame(pres: Presentation, frame, rng: random.Random):
    scalars = [2, -3]
    if pres.domain.has_parameter:
        scalars.append(ParamPoly.gen())
    elems = list(frame.elements)
    i = rng.randrange(len(elems))
    elems[i] = elems[i].scale(rng.choice(scalars))
    return type(frame)(tuple(elems))


def verify_consistency(entry: ZooEntry, config: RunConfig = RunConfig()) -> ConsistencyReport:
    """Estimate GKdim from growth and check it lies in the calculus bound."""
    pres = entry.presentation()
    if config.require_exact:
        bad = [a for a in confluence_check(pres, max(2 * pres.max_lhs_length, 2)) if not a.resolved]
        if bad:
            return ConsistencyReport(
                entry.name, False,
                f"presentation is not confluent ({len(bad)} unresolved ambiguities); "
                "ranks would only be upper bounds",
            )
    frame = make_frame(pres, parse_list(entry.frame, pres))
    seq = _sequence(entry, pres, frame, config)
    est = estimate_gkdim(seq, config.window, config.max_degree)
    bound, _ = eval_construction(parse_expr(entry.expect))
    ok = bound.contains(est.dim)
    rescale_ok = None
    if not entry.is_module:
        rng = random.Random(f"{config.seed}:{entry.name}")
        again = _sequence(entry, pres, _rescaled_frame(pres, frame, rng), config)
        rescale_ok = again.values == seq.values
    passed = ok and rescale_ok is not False
    msg = f"estimate {est.dim} ({est.growth_class}) {'in' if ok else 'not in'} calculus bound {bound}"
    if rescale_ok is False:
        msg += "; rescaled frame changed the ranks"
    return ConsistencyReport(entry.name, passed, msg, seq, est, bound, rescale_ok)
