"""Scenario runner: ``infotherm {demon,peres,distinguish,entropy}``.

Configuration comes from an optional YAML/JSON file (``--config``) and is
overridden by command-line flags.  Parsing is strict: every key must be a
common key or a parameter of the chosen scenario.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import platform
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from . import __version__
from . import rng as rngmod
from .algoinfo import (
    CompressorSpec,
    bennett_entropy,
    borel_deviation,
    estimate_I,
    plateau_detect,
    prefix_estimates,
)
from .demon import DemonConfig, run as run_demon
from .discrimination import (
    best_cloner,
    brute_force_discrimination,
    check_cloner,
    indistinguishability_bound,
    optimal_discrimination,
    power_distinguishability,
)
from .engine import (
    clausius_audit,
    empirical_memory_entropy,
    membrane_tape_monte_carlo,
    run_cycle,
)
from .errors import ConfigError, InfoThermError
from .qstate import NAMED_STATES, shannon_entropy
from .tapeio import atomic_write, encode_bits, read_bits

FORMATS = ("json", "csv", "bits")
COMMON_KEYS = ("scenario", "seed", "output_dir", "formats", "strict_audit")


@dataclass
class PeresParams:
    n: float = 1.0
    T: float = 1.0
    memory_booking: str = "merge"
    # membrane tape size for the empirical memory check (needs a seed)
    tape_molecules: int = 4096


@dataclass
class DemonParams:
    molecules: int = 1000
    alpha: float = 0.5
    v_L: float = 1.0
    v_H: float = 3.0
    v_T: float = 2.0
    steps: int = 100_000
    tail_steps: Optional[int] = 2048
    keep_garbage: bool = False
    record_every: int = 256
    context_order: int = 2


@dataclass
class DistinguishParams:
    pair: str = "0,plus"
    n_max: int = 8
    prior1: float = 0.5
    grid_steps: int = 3600
    explicit_max: int = 4


@dataclass
class EntropyParams:
    input: Optional[str] = None
    q: float = 0.5
    length: int = 4096
    context_order: int = 2
    window: int = 256


PARAMS = {
    "peres": PeresParams,
    "demon": DemonParams,
    "distinguish": DistinguishParams,
    "entropy": EntropyParams,
}


@dataclass
class ScenarioConfig:
    scenario: str
    params: object
    seed: Optional[int] = None
    output_dir: str = "out"
    formats: tuple = FORMATS
    strict_audit: bool = False

    def resolved(self) -> dict:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "output_dir": self.output_dir,
            "formats": list(self.formats),
            "strict_audit": self.strict_audit,
            "params": dataclasses.asdict(self.params),
        }


def _coerce(value, ftype: str, path: str):
    optional = ftype.startswith("Optional[")
    base = ftype[len("Optional["):-1] if optional else ftype
    if optional and isinstance(value, str) and value.lower() in ("none", "null"):
        value = None
    if value is None:
        if optional:
            return None
        raise ConfigError("value must not be null", path)
    if base == "bool":
        if isinstance(value, bool):
            return value
        if isinstance(value, str) and value.lower() in ("true", "false"):
            return value.lower() == "true"
        raise ConfigError(f"expected a boolean, got {value!r}", path)
    if base == "int":
        if isinstance(value, bool):
            raise ConfigError(f"expected an integer, got {value!r}", path)
        try:
            out = int(value)
        except (TypeError, ValueError):
            raise ConfigError(f"expected an integer, got {value!r}", path) from None
        if isinstance(value, float) and out != value:
            raise ConfigError(f"expected an integer, got {value!r}", path)
        return out
    if base == "float":
        if isinstance(value, bool):
            raise ConfigError(f"expected a number, got {value!r}", path)
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"expected a number, got {value!r}", path) from None
    return str(value)


def _validate_params(scenario: str, p) -> None:
    if scenario == "demon":
        if not p.v_L < p.v_T < p.v_H:
            raise ConfigError(f"ordering constraint v_L < v_T < v_H violated "
                              f"({p.v_L}, {p.v_T}, {p.v_H})", "v_T")
        if not 0 <= p.alpha <= 1:
            raise ConfigError("alpha must lie in [0, 1]", "alpha")
        if p.molecules < 2 or p.molecules % 2:
            raise ConfigError("must be even and at least 2", "molecules")
        if p.steps < 1:
            raise ConfigError("must be at least 1", "steps")
    elif scenario == "peres":
        if p.n < 1:
            raise ConfigError("must be at least 1", "n")
        if p.T <= 0:
            raise ConfigError("must be positive", "T")
        if p.memory_booking not in ("merge", "erase"):
            raise ConfigError("must be 'merge' or 'erase'", "memory_booking")
    elif scenario == "distinguish":
        names = p.pair.split(",")
        if len(names) != 2 or any(n not in NAMED_STATES for n in names):
            raise ConfigError(f"expected two of {sorted(NAMED_STATES)}", "pair")
        if p.n_max < 1:
            raise ConfigError("must be at least 1", "n_max")
        if not 0 <= p.prior1 <= 1:
            raise ConfigError("must lie in [0, 1]", "prior1")
    elif scenario == "entropy":
        if not 0 <= p.q <= 1:
            raise ConfigError("must lie in [0, 1]", "q")
        if p.length < 1:
            raise ConfigError("must be positive", "length")


def config_from_mapping(doc: dict, scenario: Optional[str] = None) -> ScenarioConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping")
    doc = dict(doc)
    name = doc.pop("scenario", None) or scenario
    if scenario and name != scenario:
        raise ConfigError(f"config is for {name!r}, command is {scenario!r}", "scenario")
    if name is None:
        raise ConfigError("missing required key", "scenario")
    if name not in PARAMS:
        raise ConfigError(f"unknown scenario {name!r}", "scenario")
    cls = PARAMS[name]
    fields = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in doc.items():
        if key in COMMON_KEYS:
            continue
        if key not in fields:
            raise ConfigError("unknown key", f"{name}.{key}")
        kwargs[key] = _coerce(value, str(fields[key].type), f"{name}.{key}")
    params = cls(**kwargs)
    _validate_params(name, params)

    seed = doc.get("seed")
    if seed is not None:
        seed = _coerce(seed, "int", "seed")
        if not 0 <= seed < 2**64:
            raise ConfigError("must be a 64-bit unsigned integer", "seed")
    stochastic = name == "demon" or (name == "entropy" and params.input is None)
    if stochastic and seed is None:
        raise ConfigError(f"scenario {name!r} is stochastic; a seed is required", "seed")

    formats = doc.get("formats", FORMATS)
    if isinstance(formats, str):
        formats = [f for f in formats.split(",") if f]
    bad = [f for f in formats if f not in FORMATS]
    if bad:
        raise ConfigError(f"unknown format(s) {bad}", "formats")
    return ScenarioConfig(
        scenario=name,
        params=params,
        seed=seed,
        output_dir=str(doc.get("output_dir", "out")),
        formats=tuple(f for f in FORMATS if f in formats),
        strict_audit=_coerce(doc.get("strict_audit", False), "bool", "strict_audit"),
    )


def parse_config(text: str, scenario: Optional[str] = None) -> ScenarioConfig:
    """Parse a YAML or JSON document into a validated :class:`ScenarioConfig`."""
    try:
        doc = yaml.safe_load(text) if text.strip() else {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    return config_from_mapping(doc or {}, scenario)


# ---------------------------------------------------------------- scenarios

def _csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join("" if v is None else (repr(v) if isinstance(v, float) else str(v))
                              for v in row))
    return "\n".join(lines) + "\n"


def _entropy_series(bits: np.ndarray, window: int, spec: CompressorSpec):
    cps = list(range(window, bits.size + 1, window))
    if not cps or cps[-1] != bits.size:
        cps.append(bits.size)
    est = prefix_estimates(bits, cps, spec)
    rows = []
    for c, i in zip(cps, est):
        dev = borel_deviation(bits[:c], 1) if c >= 16 else None
        rows.append((c, float(i), dev))
    return rows


def _run_peres(cfg: ScenarioConfig):
    p = cfg.params
    report = run_cycle(p.n, p.T, p.memory_booking)
    doc = report.to_json()
    artifacts = {}
    if cfg.seed is not None:
        tape = membrane_tape_monte_carlo(p.tape_molecules, cfg.seed)
        doc["membrane_tape"] = {
            "molecules": p.tape_molecules,
            "estimate_bits": estimate_I(tape.as_array()),
            "empirical_memory_nats": empirical_memory_entropy(tape),
            "analytic_memory_nats": p.tape_molecules * float(np.log(2.0)),
        }
        artifacts["peres_membrane.bits"] = encode_bits(tape.as_array())
    artifacts["peres_report.json"] = doc
    artifacts["peres_ledger.csv"] = report.to_csv()
    summary = (f"peres: net_work={report.net_work:.9f} "
               f"uncorrected_dS={report.uncorrected_dS_universe:.9f} "
               f"corrected_dS={report.corrected_dS_universe:.9f} "
               f"paradox_exhibited={report.paradox_exhibited} "
               f"second_law_restored={report.second_law_restored}")
    audit_failed = report.corrected_dS_universe < 0 or not clausius_audit(report, True)[1]
    return artifacts, summary, audit_failed


def _run_demon(cfg: ScenarioConfig):
    p = cfg.params
    dc = DemonConfig(seed=cfg.seed, **dataclasses.asdict(p))
    result = run_demon(dc)
    bits = result.tape.as_array()
    spec = CompressorSpec(context_order=p.context_order)
    series = _entropy_series(bits, p.record_every, spec)
    plateau = plateau_detect([(s, i) for s, i, _ in series]) if len(series) >= 16 else None
    final = result.stats.rows[-1]
    doc = {
        "n_ord": result.n_ord,
        "sorted": result.sorted,
        "steps_taken": result.steps_taken,
        "tape_length": int(bits.size),
        "ones": int(bits.sum()),
        "plateau_step": plateau,
        "final_left_T": final[5],
        "final_right_T": final[6],
        "final_I_estimate_bits": series[-1][1],
    }
    artifacts = {
        "demon_report.json": doc,
        "demon_trajectory.csv": result.stats.to_csv(),
        "demon_entropy.csv": _csv(("step", "I_estimate_bits", "borel_deviation"), series),
        "demon_tape.bits": encode_bits(bits),
    }
    summary = (f"demon: sorted={result.sorted} n_ord={result.n_ord} "
               f"steps={result.steps_taken} plateau={plateau} I_final={series[-1][1]:.3f}")
    return artifacts, summary, False


def _run_distinguish(cfg: ScenarioConfig):
    p = cfg.params
    n1, n2 = p.pair.split(",")
    a, b = NAMED_STATES[n1], NAMED_STATES[n2]
    blank = NAMED_STATES["0"]
    clone = check_cloner(best_cloner(blank, a, b), blank, a, b)
    rows = []
    for n in range(1, p.n_max + 1):
        explicit = power_distinguishability(a, b, n, explicit=True) if n <= p.explicit_max else None
        rows.append((n, power_distinguishability(a, b, n), explicit))
    doc = {
        "pair": [n1, n2],
        "clone_check": clone.to_json(),
        "indistinguishability": indistinguishability_bound(a, b).to_json(),
        "optimal_success": optimal_discrimination(a, b, p.prior1),
        "brute_force_success": brute_force_discrimination(a, b, p.grid_steps, p.prior1),
        "power_distinguishability": [
            {"n": n, "closed_form": c, "explicit": e} for n, c, e in rows],
    }
    artifacts = {
        "distinguish_report.json": doc,
        "distinguish.csv": _csv(("n", "closed_form", "explicit"), rows),
    }
    summary = (f"distinguish: pair={n1},{n2} cloner_possible={clone.cloner_possible} "
               f"optimal={doc['optimal_success']:.6f} n={p.n_max}:{rows[-1][1]:.6f}")
    return artifacts, summary, False


def _run_entropy(cfg: ScenarioConfig):
    p = cfg.params
    if p.input is not None:
        bits = read_bits(p.input)
        source = {"input": p.input}
    else:
        g = rngmod.stream(cfg.seed, "entropy.bernoulli")
        bits = (g.random(p.length) < p.q).astype(np.uint8)
        source = {"bernoulli_q": p.q, "length": p.length}
    spec = CompressorSpec(context_order=p.context_order)
    series = _entropy_series(bits, p.window, spec)
    q_hat = float(bits.mean())
    h_prob = bits.size * shannon_entropy([1 - q_hat, q_hat])
    ledger = bennett_entropy(h_prob, estimate_I(bits, spec))
    doc = {"source": source, "length": int(bits.size), "one_frequency": q_hat,
           "ledger_bits": dataclasses.asdict(ledger)}
    artifacts = {
        "entropy_report.json": doc,
        "entropy_series.csv": _csv(("step", "I_estimate_bits", "borel_deviation"), series),
        "entropy_tape.bits": encode_bits(bits),
    }
    summary = (f"entropy: n={bits.size} H_prob={ledger.H_prob:.3f} "
               f"I_alg={ledger.I_alg_estimate:.3f} bennett={ledger.bennett:.3f}")
    return artifacts, summary, False


RUNNERS = {
    "peres": _run_peres,
    "demon": _run_demon,
    "distinguish": _run_distinguish,
    "entropy": _run_entropy,
}


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _format_of(name: str) -> str:
    return name.rsplit(".", 1)[-1]


def run_scenario(cfg: ScenarioConfig, stdout=None) -> int:
    """Execute ``cfg``, write its artifacts and manifest, return the exit code."""
    stdout = stdout or sys.stdout
    started = datetime.now(timezone.utc).isoformat()
    t0 = time.perf_counter()
    try:
        artifacts, summary, audit_failed = RUNNERS[cfg.scenario](cfg)
    except InfoThermError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = Path(cfg.output_dir)
    written = []
    try:
        for name, payload in artifacts.items():
            fmt = _format_of(name)
            if fmt not in cfg.formats:
                continue
            if fmt == "json":
                payload = json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n"
            atomic_write(out / name, payload)
            written.append(name)
        manifest = {
            "config": cfg.resolved(),
            "seed": cfg.seed,
            "versions": {
                "infotherm": __version__,
                "numpy": np.__version__,
                "python": platform.python_version(),
            },
            "started_at": started,
            "wall_time_s": time.perf_counter() - t0,
            "artifacts": written,
            "summary": summary,
        }
        atomic_write(out / f"{cfg.scenario}_manifest.json", json.dumps(manifest, indent=2, sort_keys=True, default=_json_default) + "\n")
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return 1
    print(summary, file=stdout)
    if cfg.strict_audit and audit_failed:
        return 2
    return 0


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infotherm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="scenario", required=True)
    for name, cls in PARAMS.items():
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="YAML or JSON config file")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", dest="output_dir", default=None)
        sp.add_argument("--format", dest="formats", default=None,
                        help="comma-separated subset of json,csv,bits")
        sp.add_argument("--strict-audit", dest="strict_audit", action="store_true", default=None)
        for f in dataclasses.fields(cls):
            flags = [_flag(f.name)]
            if "_" in f.name:
                flags.append("--" + f.name)
            sp.add_argument(*flags, dest=f.name, default=None, metavar=f.name.upper())
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    opts = vars(args)
    scenario = opts.pop("scenario")
    doc = {}
    config_path = opts.pop("config")
    try:
        if config_path:
            try:
                text = Path(config_path).read_text()
            except OSError as exc:
                print(f"error: cannot read config: {exc}", file=sys.stderr)
                return 1
            doc = yaml.safe_load(text) or {}
            if not isinstance(doc, dict):
                raise ConfigError("config document must be a mapping")
        for key, value in opts.items():
            if value is not None:
                doc[key] = value
        cfg = config_from_mapping(doc, scenario)
    except (ConfigError, yaml.YAMLError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    return run_scenario(cfg)


if __name__ == "__main__":
    sys.exit(main())
