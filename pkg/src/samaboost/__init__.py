"""Collaborative multiview boosting."""

from .baselines import fit_baseline, samme_alpha
from .boosting import (
    BoostConfig,
    SamaEnsemble,
    fit_ma,
    fit_sama,
    learner_fitness,
    predict_ensemble,
)
from .data import (
    MultiviewDataset,
    SplitSpec,
    encode_label,
    inject_label_noise,
    partition_views,
    stratified_split,
)
from .learners import LearnerConfig, predict_confidence, train_shallow_net, train_stump
from .objective import (
    difficulty,
    evaluate_objective,
    exp_loss,
    ma_beta,
    optimize_beta,
    transform_hypothesis,
    update_weights,
)

__version__ = "0.1.0"
