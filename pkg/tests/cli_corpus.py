"""Twenty CLI configurations with the exit code each one must produce.

Expected codes come from the mathematics of each case (convex quadratic
chains hold, a forced concave case is violated, malformed input is a
configuration error), not from running the CLI.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

X2 = {"kind": "monomial_series", "terms": [[2, 1.0]]}
NEG_X2 = {"kind": "monomial_series", "terms": [[2, -1.0]]}
LINEAR = {"kind": "monomial_series", "terms": [[1, 1.0]]}
PARABOLA_W01 = {"kind": "monomial_series", "terms": [[1, 1.0], [2, -1.0]]}


def _base(**kw) -> dict:
    cfg = {"alpha": 1.0, "m": 1.0, "h": {"kind": "power_alpha"}, "G": X2, "interval": [0.0, 2.0],
           "seed": 7, "theorem": "hh_hm"}
    cfg.update(kw)
    return cfg


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    command: str
    expected: int
    config: Optional[dict] = None
    raw: Optional[str] = None
    suffix: str = ".json"
    args: tuple = field(default_factory=tuple)

    def write(self, directory: Path) -> Path:
        path = directory / f"{self.name}{self.suffix}"
        if self.raw is not None:
            path.write_text(self.raw, encoding="utf-8")
        else:
            path.write_text(json.dumps(self.config), encoding="utf-8")
        return path


CORPUS: list[CorpusEntry] = [
    CorpusEntry("hh_hm_classical", "verify", 0, _base()),
    CorpusEntry("hh_hm_fractal", "verify", 0, _base(alpha=0.5, m=0.8)),
    CorpusEntry("hh_pair_classical", "verify", 0, _base(theorem="hh_pair", interval=[0.0, 1.0])),
    CorpusEntry("fejer_parabola_weight", "verify", 0,
                _base(theorem="fejer_hm", interval=[0.0, 1.0], weight=PARABOLA_W01)),
    CorpusEntry("fejer_deriv_classical", "verify", 0, _base(theorem="fejer_deriv", interval=[0.0, 1.0])),
    CorpusEntry("lemma_classical", "verify", 0, _base(theorem="lemma_identity", interval=[0.0, 1.0])),
    CorpusEntry("jensen_classical", "verify", 0, _base(theorem="jensen")),
    CorpusEntry("concave_precondition", "verify", 1, _base(G=NEG_X2)),
    CorpusEntry("concave_forced", "verify", 2, _base(G=NEG_X2, force=True)),
    CorpusEntry("alpha_out_of_range", "verify", 1, _base(alpha=1.5)),
    CorpusEntry("missing_G", "verify", 1, {k: v for k, v in _base().items() if k != "G"}),
    CorpusEntry("reversed_interval", "verify", 1, _base(interval=[2.0, 0.0])),
    CorpusEntry("toml_syntax_error", "verify", 1, raw='alpha = 1.0\nm = [1.0\n', suffix=".toml"),
    CorpusEntry("unknown_key", "verify", 1, _base(colour="blue")),
    CorpusEntry("classical_scheme_fractal_alpha", "verify", 1,
                _base(alpha=0.5, scheme={"kind": "classical"})),
    CorpusEntry("sweep_convex", "sweep", 0, _base(), args=("--axis", "alpha=0.5,1.0", "--axis", "m=0.5,1.0")),
    CorpusEntry("sweep_concave_forced", "sweep", 2, _base(G=NEG_X2, force=True),
                args=("--axis", "alpha=0.5,1.0")),
    CorpusEntry("quadrature_adaptive", "quadrature", 0,
                _base(interval=[0.0, 1.0], quadrature={"target": 1e-3, "max_cells": 1024})),
    CorpusEntry("quadrature_unreachable", "quadrature", 4,
                _base(interval=[0.0, 1.0], quadrature={"target": 1e-300, "max_cells": 8})),
    CorpusEntry("quadrature_linear_one_cell", "quadrature", 0,
                _base(G=LINEAR, interval=[0.0, 1.0], quadrature={"partition": [0.0, 1.0]})),
]


def argv_for(entry: CorpusEntry, path: Path, out: Path) -> list[str]:
    return [entry.command, str(path), "--out", str(out), *entry.args]
