"""
Kappa-error clouds under label noise
====================================

Fifteen rounds give fifteen round-level members and 105 member pairs. Each
pair contributes its agreement (kappa) and its mean test error. Corrupting a
fifth of the training labels moves the cloud left and up.
"""

from samaboost import BoostConfig, SplitSpec, fit_sama, inject_label_noise, stratified_split
from samaboost.diagnostics import kappa_error_cloud
from samaboost.experiment_io import load_fixture

data = load_fixture("breast_cancer", view_count=2, view_seed=0)
train, _, test = stratified_split(data, SplitSpec(seed=0))
cfg = BoostConfig(rounds=15)

for label, part in (("clean", train), ("20% noise", inject_label_noise(train, 0.2, seed=0))):
    cloud = kappa_error_cloud(fit_sama(part, cfg), test)
    k, e = cloud.centroid
    print(f"{label:10s} pairs={len(cloud.points)}  centroid kappa={k:.3f}  error={e:.3f}")
