"""Published reference values used as fixed oracles."""

# Premium table: rows follow premium.DEFAULT_RISKS, columns P_0.4, P_0.75, P_1
# then the GLL cells in premium.DEFAULT_GLL order.
PREMIUM_TABLE = [
    [5.000, 2.667, 2.000, 19.535, 18.776, 8.146, 7.588, 26.349, 25.797, 11.130, 10.688],
    [1.250, 0.667, 0.500, 4.884, 4.694, 2.036, 1.897, 6.587, 6.449, 2.783, 2.672],
    [12.500, 3.556, 2.000, 128.682, 121.088, 22.666, 20.274, 217.989, 210.628, 39.111, 36.584],
    [0.831, 0.547, 0.451, 2.199, 2.135, 1.225, 1.163, 2.712, 2.671, 1.526, 1.482],
    [2.494, 1.640, 1.354, 6.598, 6.406, 3.675, 3.488, 8.136, 8.012, 4.576, 4.445],
    [1.052, 0.619, 0.500, 3.985, 3.827, 1.626, 1.521, 5.415, 5.299, 2.208, 2.121],
    [15.094, 4.423, 2.500, 124.012, 117.479, 27.996, 25.060, 187.971, 182.757, 47.370, 44.409],
    [5.488, 2.690, 2.000, 26.795, 25.607, 9.132, 8.423, 37.814, 36.919, 13.255, 12.636],
]

# cells whose tolerance is widened to 0.002 (row, column)
WIDE_CELLS = {(2, 7), (2, 8)}

# maximum-likelihood point used for the recovery study
RECOVERY_TRUTH = (1.2694, 0.3824, 1.7819)

# fitted log-likelihoods on the proportions dataset: (model, complement) -> value
REGRESSION_LOGLIK = {
    ("theta", False): 98.2977, ("theta", True): 96.7624,
    ("theta_ll", False): 83.6526, ("theta_ll", True): 96.7054,
    ("mean", False): 91.9525, ("mean", True): 96.8252,
    ("mean_ll", False): 83.7575, ("mean_ll", True): 96.7689,
}
