"""Scenario files (TOML) and the bundled presets.

A scenario file looks like::

    name = "mixed-attack"
    seed = 7
    n_devices = 50
    service_request_interval_s = 4
    slot_duration_s = 20
    domain_trust_interval_s = 100
    sim_duration_s = 5000
    max_rating = 20
    min_rating = 5
    beta = 7.0
    r = 1.5
    e = 0.25

    [[service_providers]]
    behavior = "honest"

    [[service_providers]]
    on_off = "30on-70off"        # or "70off-30on", "50%-50%"

    [[raters]]
    behavior = "bad_mouthing"
    count = 5

Rater groups are laid out in file order; devices not covered by any group
are honest.  An optional ``[sweep]`` table (``attack``, ``fractions``,
``block_s``) turns the file into a malicious-fraction sweep.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .attacks import OnOffSchedule, RaterBehavior, RaterKind, SpBehavior, SpKind, parse_on_off
from .direct_trust import TrustParams
from .sim import ScenarioConfig
from .window import WindowConfig

PRESETS = {
    "honest": "honest.toml",
    "malicious": "malicious.toml",
    "badmouth-sweep": "badmouth_sweep.toml",
    "ballot-sweep": "ballot_sweep.toml",
    "mixed": "mixed.toml",
    "mixed-onoff": "mixed_onoff.toml",
    "A1": "A1.toml", "A1'": "A1p.toml",
    "A2": "A2.toml", "A2'": "A2p.toml",
    "A3": "A3.toml", "A3'": "A3p.toml",
    "A4": "A4.toml", "A4'": "A4p.toml",
    "A5": "A5.toml", "A5'": "A5p.toml",
    "B1": "B1.toml", "B2": "B2.toml",
}

SWEEP_ATTACKS = {
    "badmouth": RaterKind.BAD_MOUTHING,
    "bad_mouthing": RaterKind.BAD_MOUTHING,
    "ballot": RaterKind.BALLOT_STUFFING,
    "ballot_stuffing": RaterKind.BALLOT_STUFFING,
}


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    attack: RaterKind
    fractions: tuple[float, ...]
    block_seconds: float = 800.0


@dataclass(frozen=True)
class Scenario:
    config: ScenarioConfig
    sweep: SweepSpec | None = None


def _sp(entry: dict) -> SpBehavior:
    if "on_off" in entry:
        sp = parse_on_off(entry["on_off"])
        bad = entry.get("on_bad_fraction")
        if bad is not None:
            if sp.kind != SpKind.ONOFF_SCHEDULE:
                raise ScenarioError("on_bad_fraction only applies to scheduled on_off")
            sp = SpBehavior(SpKind.ONOFF_SCHEDULE, sp.schedule, float(bad))
        return sp
    kind = SpKind(entry.get("behavior", "honest"))
    if kind == SpKind.ONOFF_SCHEDULE:
        sched = OnOffSchedule(
            float(entry["on_s"]), float(entry["off_s"]), bool(entry.get("starts_on", True))
        )
        return SpBehavior(kind, sched, entry.get("on_bad_fraction"))
    if kind == SpKind.ONOFF_RANDOM:
        return SpBehavior(kind, random_bad_fraction=float(entry["random_bad_fraction"]))
    return SpBehavior(kind)


def _raters(groups: list[dict], n: int) -> tuple[RaterBehavior, ...]:
    out: list[RaterBehavior] = []
    for g in groups:
        kind = RaterKind(g.get("behavior", "honest"))
        cycle = g.get("onoff_cycle_s")
        behavior = RaterBehavior(kind, tuple(float(c) for c in cycle) if cycle else None)
        out.extend([behavior] * int(g.get("count", 1)))
    if len(out) > n:
        raise ScenarioError(f"rater groups cover {len(out)} devices but n_devices = {n}")
    out.extend([RaterBehavior()] * (n - len(out)))
    return tuple(out)


def scenario_from_dict(data: dict) -> Scenario:
    try:
        n = int(data["n_devices"])
        sps = tuple(_sp(e) for e in data.get("service_providers", [{"behavior": "honest"}]))
        config = ScenarioConfig(
            n_devices=n,
            sp_behaviors=sps,
            rater_behaviors=_raters(data.get("raters", []), n),
            service_request_interval=float(data.get("service_request_interval_s", 4.0)),
            domain_trust_interval=float(data.get("domain_trust_interval_s", 100.0)),
            sim_duration=float(data.get("sim_duration_s", 5000.0)),
            window_config=WindowConfig(
                float(data.get("slot_duration_s", 20.0)),
                int(data.get("max_rating", 20)),
                int(data.get("min_rating", 5)),
            ),
            trust_params=TrustParams(
                float(data.get("beta", 7.0)),
                float(data.get("r", 1.5)),
                float(data.get("e", 0.25)),
            ),
            seed=int(data.get("seed", 0)),
            filtering=bool(data.get("filtering", True)),
            name=str(data.get("name", "scenario")),
        )
        config.validate()
        sweep = None
        if "sweep" in data:
            s = data["sweep"]
            sweep = SweepSpec(
                SWEEP_ATTACKS[s.get("attack", "badmouth")],
                tuple(float(f) for f in s["fractions"]),
                float(s.get("block_s", 800.0)),
            )
    except (KeyError, TypeError) as exc:
        raise ScenarioError(f"malformed scenario: {exc!r}") from exc
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc
    return Scenario(config, sweep)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        with path.open("rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc.strerror}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc
    return scenario_from_dict(data)


def preset_path(name: str) -> Path:
    key = name.replace("p", "'") if name[:1] in "AB" and name.endswith("p") else name
    if key not in PRESETS:
        raise ScenarioError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return Path(str(resources.files("iottrust") / "presets" / PRESETS[key]))


def load_preset(name: str) -> Scenario:
    return load_scenario(preset_path(name))
