"""
Collaborative boosting against non-collaborative baselines
==========================================================

Three random view partitions of the breast-cancer data, one shared
train/test split, ten rounds each.
"""

import numpy as np

from samaboost import BoostConfig, SplitSpec, fit_baseline, fit_ma, fit_sama, stratified_split
from samaboost.experiment_io import load_fixture

cfg = BoostConfig(rounds=10)
print("view seed  sama_v2  sama_v1  ma     boost_early  boost_late")
for vs in range(3):
    data = load_fixture("breast_cancer", view_count=2, view_seed=vs)
    train, _, test = stratified_split(data, SplitSpec(seed=0))
    sama = fit_sama(train, cfg)
    models = [sama, None, fit_ma(train, cfg),
              fit_baseline(train, cfg, "boost_early"), fit_baseline(train, cfg, "boost_late")]
    acc = [np.mean(sama.predict(test.X, "V1") == test.labels) if m is None
           else np.mean(m.predict(test.X) == test.labels) for m in models]
    print(f"{vs:9d}  " + "  ".join(f"{a:.3f}" for a in acc))
