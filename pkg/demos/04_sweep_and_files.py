"""Drive a tiny sweep through the experiments API and show the files it
writes (the same layout the ``star-isac`` command line produces).
"""
import tempfile
from pathlib import Path

from star_isac.experiments import ScenarioConfig, sweep

cfg = ScenarioConfig(L=3, N=4, n_x=2, T=5, episodes=4, seeds=(0,),
                     batch_size=8, hidden_units=16)

with tempfile.TemporaryDirectory() as tmp:
    results = sweep(cfg, "algorithm", ["ddpg", "sac"], tmp)
    print("files written:")
    for p in sorted(Path(tmp).rglob("*")):
        if p.is_file():
            print(f"  {p.relative_to(tmp)}")
    print("\nsweep.csv contents:")
    print((Path(tmp) / "sweep.csv").read_text())
