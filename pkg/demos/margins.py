"""
Margin distributions
====================

Margins on the breast-cancer training split after 5 and after 20 rounds,
summarized as a cumulative distribution. The closing lines compare the
fraction at a few thresholds with exp(theta * sum beta) * prod Z, which caps
it for binary labels.
"""

import numpy as np

from samaboost import BoostConfig, SplitSpec, fit_sama, stratified_split
from samaboost.diagnostics import exponential_margin_bound, margin_cdf, margin_report
from samaboost.experiment_io import load_fixture

data = load_fixture("breast_cancer", view_count=2, view_seed=0)
train, _, _ = stratified_split(data, SplitSpec(seed=0))
ens = fit_sama(train, BoostConfig(rounds=20))
short = ens.truncate(5)

grid = np.linspace(-1, 1, 9)
early = margin_report(short, train, grid=grid)
late = margin_report(ens, train, grid=grid)
print("  psi    T=5    T=20")
for psi, a, b in zip(grid, early.cdf, late.cdf):
    print(f"{psi:5.2f}  {a:.3f}  {b:.3f}")

for theta in (0.0, 0.25, 0.5):
    frac = margin_cdf(late.margins, [theta])[0]
    print(f"theta={theta}: fraction {frac:.3f}, bound "
          f"{exponential_margin_bound(theta, ens.normalizers, ens.betas):.3f}")
