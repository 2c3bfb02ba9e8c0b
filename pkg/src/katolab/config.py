"""Flat dotted key-value run configuration.

Format: one `section.key = value` per line, `#` comments, blank lines
ignored.  Example:

    kernel.family = gaussian
    kernel.dim = 3
    measure.kind = lebesgue
    measure.dim = 3
    sweep.p = 1, 2, 3, 3.5
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .classification import ClassifyConfig
from .errors import ConfigError
from .functionals import CenterStrategy
from .kernels import HeatKernelModel, make_kernel_model
from .measures import MeasureRep, make_measure
from .profiles import parse_profile


def parse_config_text(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got "
                              f"{raw.strip()!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        if not key or "." not in key:
            raise ConfigError(f"line {lineno}: keys must be dotted "
                              f"(section.name), got {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = val
    return out


def _floats(text: str) -> list[float]:
    return [float(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]


@dataclass
class RunConfig:
    model: HeatKernelModel
    measure: MeasureRep
    p_list: list[float]
    classify: ClassifyConfig
    seed: int = 7
    raw: dict = field(default_factory=dict)

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        with open(path) as fh:
            return cls.from_dict(parse_config_text(fh.read()))

    @classmethod
    def from_dict(cls, kv: dict[str, str]) -> "RunConfig":
        sections: dict[str, dict[str, str]] = {}
        for key, val in kv.items():
            sect, name = key.split(".", 1)
            sections.setdefault(sect, {})[name] = val

        kernel = dict(sections.get("kernel", {}))
        family = kernel.pop("family", "gaussian")
        for k in ("profile", "phi_lower", "phi_upper"):
            if k in kernel:
                kernel[k] = parse_profile(kernel[k])
        for k in list(sections.get("space", {})):
            kernel.setdefault(k, sections["space"][k])
        try:
            model = make_kernel_model(family, **kernel)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad kernel block: {exc}") from exc

        meas = dict(sections.get("measure", {}))
        kind = meas.pop("kind", "lebesgue")
        if "profile" in meas:
            meas["profile"] = parse_profile(meas["profile"])
        if "atoms" in meas:
            meas["atoms"] = _parse_atoms(meas["atoms"])
        if "origin" in meas:
            meas["origin"] = _floats(meas["origin"])
        if "center" in meas:
            meas["center"] = _floats(meas["center"])
        meas.setdefault("dim", str(model.space.ambient_dim))
        try:
            measure = make_measure(kind, **meas)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad measure block: {exc}") from exc

        sweep = sections.get("sweep", {})
        p_list = _floats(sweep.get("p", "1"))
        if any(p < 1 for p in p_list):
            raise ConfigError("sweep.p entries must be >= 1")
        seed = int(sweep.get("seed", "7"))
        depth = int(sweep.get("grid_depth", "11"))
        centers = CenterStrategy(
            explicit=[_floats(tok) for tok in
                      sweep.get("centers_explicit", "").split(";") if tok.strip()],
            n_support=int(sweep.get("centers_support", "4")),
            n_random=int(sweep.get("centers_random", "4")),
            window=float(sweep.get("center_window", "2.0")),
            seed=seed)
        classify = ClassifyConfig(
            r_grid=2.0 ** -np.arange(2, depth + 1, dtype=float),
            centers=centers,
            seed=seed,
            fit_delta=sweep.get("fit_delta", "false").lower() == "true")
        return cls(model=model, measure=measure, p_list=p_list,
                   classify=classify, seed=seed, raw=kv)


def _parse_atoms(text: str) -> list[tuple]:
    atoms = []
    for tok in text.split(";"):
        tok = tok.strip()
        if not tok:
            continue
        if ":" not in tok:
            raise ConfigError(f"atom {tok!r} must be 'x,y,...:weight'")
        pt, w = tok.rsplit(":", 1)
        atoms.append((_floats(pt), float(w)))
    return atoms
