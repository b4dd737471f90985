"""On-disk cache of full training runs shared by the acceptance tests.

Training a (config, seed) pair at the default scale takes a couple of
minutes on one core; the trend and ordering checks need a few dozen of
them. Summaries are cached under .acceptance_cache keyed by the scenario
hash so repeated pytest invocations reuse earlier runs. Run this module
directly to prepopulate the cache.
"""
import json
import time
from dataclasses import replace
from pathlib import Path

from star_isac.experiments import ScenarioConfig, run_seed, seed_summary

CACHE_DIR = Path(__file__).resolve().parent.parent / ".acceptance_cache"

SWEEP_N = (8, 24)
SWEEP_P0 = (30.0, 33.0)
SWEEP_KAPPA = (4.0, 8.0, 12.0)


def default_ddpg() -> ScenarioConfig:
    return ScenarioConfig(algorithm="ddpg")


def default_sac() -> ScenarioConfig:
    return ScenarioConfig(algorithm="sac")


def cached_summary(cfg: ScenarioConfig, seed: int) -> dict:
    CACHE_DIR.mkdir(exist_ok=True)
    key = CACHE_DIR / f"{cfg.scenario_id()}_s{seed}.json"
    if key.exists():
        return json.loads(key.read_text())
    rows, _ = run_seed(cfg, seed)
    summary = seed_summary(rows)
    key.write_text(json.dumps(summary))
    return summary


def cached_summaries(cfg: ScenarioConfig) -> list:
    return [cached_summary(cfg, seed) for seed in cfg.seeds]


def acceptance_configs() -> list:
    ddpg, sac = default_ddpg(), default_sac()
    cfgs = [
        ddpg, sac,
        replace(sac, baseline="spliced"),
        replace(sac, baseline="conventional"),
    ]
    # sweeps run with SAC: its across-seed spread of trained secrecy is
    # several times tighter than DDPG's, which the trend checks need
    cfgs += [replace(sac, N=n) for n in SWEEP_N]
    cfgs += [replace(sac, p0_dbm=p) for p in SWEEP_P0]
    cfgs += [replace(sac, kappa_db=k) for k in SWEEP_KAPPA]
    return cfgs


def main() -> None:
    configs = acceptance_configs()
    total = sum(len(c.seeds) for c in configs)
    done = 0
    for cfg in configs:
        label = (f"{cfg.algorithm}/{cfg.baseline} N={cfg.N} "
                 f"P0={cfg.p0_dbm} kappa={cfg.kappa_db}")
        for seed in cfg.seeds:
            t0 = time.time()
            s = cached_summary(cfg, seed)
            done += 1
            print(f"[{done}/{total}] {label} seed={seed} "
                  f"final={s['final_return']:.2f} first={s['first_return']:.2f} "
                  f"secrecy={s['final_secrecy']:.3f} ({time.time() - t0:.0f}s)",
                  flush=True)


if __name__ == "__main__":
    main()
