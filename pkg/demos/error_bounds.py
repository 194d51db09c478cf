"""
Training-error bounds
=====================

For a binary run, print after every round the empirical sign-vote training
error next to two candidate upper bounds: the normalizer product divided by
exp(sum beta), and the normalizer product alone.
"""

from samaboost import BoostConfig, SplitSpec, fit_sama, stratified_split
from samaboost.diagnostics import bound_trace
from samaboost.experiment_io import load_fixture

data = load_fixture("binary", view_count=2, view_seed=1)
train, _, _ = stratified_split(data, SplitSpec(seed=1))
ens = fit_sama(train, BoostConfig(rounds=20, seed=1))

print(" t   error    prodZ/exp(sum beta)   prodZ")
for rec in bound_trace(ens, train):
    flag = "" if rec.bound >= rec.training_error else "  <- below the error"
    print(f"{rec.t:2d}  {rec.training_error:.4f}   {rec.bound:.6f}"
          f"             {rec.normalizer_product:.4f}{flag}")
