"""Warped and elastic products, max-linear models and the classifiers built on them."""
from .classifiers import (
    Classifier,
    decide,
    decision_values,
    load_model,
    nn_dtw_predict,
    predict,
    save_model,
)
from .data import Dataset, concat, holdout_split, kfold_split, load_ucr, save_ucr, synth_generate
from .evaluation import (
    ELASTICITY_GRID,
    accuracy,
    cross_validate,
    elasticity_grid,
    label_dependency,
    mean_percentage_difference,
    nn_dtw_accuracy,
    rank_table,
    tie_percentage,
    winning_percentage,
)
from .learning import TrainConfig, regularized_risk, select_initial_lr, subgradient_step, train
from .maxlinear import (
    MaxLinearModel,
    active_set,
    ep_to_maxlinear,
    evaluate,
    maxlinear_to_ep,
    maxlinear_to_wp_padded,
    pad_input,
    wp_to_maxlinear,
)
from .products import (
    dtw_distance,
    elastic_product,
    p_matrix,
    p_projection,
    path_score_elastic,
    path_score_warped,
    warped_product,
)
from .separability import in_convex_hull, max_lin_separable, region_membership, square_construction
from .warping import (
    PathConstraint,
    WarpingPath,
    band_constraint,
    count_paths,
    embedding_matrices,
    enumerate_paths,
    validate_path,
    warping_matrix,
)

__version__ = "0.1.0"
