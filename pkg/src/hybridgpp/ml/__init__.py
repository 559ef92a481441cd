"""Regressors trained on the synthetic corpus."""
from .features import LAYOUTS, feature_names, n_features, raw_features, targets
from .forest import ForestModel, forest_predict, forest_train, low_gpp_weights
from .io import FORMAT_VERSION, load_model, model_targets, predict, save_model
from .mlp import (TABLE2_ARCHITECTURES, MlpModel, TrainReport, loss_and_grad, mlp_gradient_check,
                  mlp_predict, mlp_train, r2_score)
from .split import split_dataset
