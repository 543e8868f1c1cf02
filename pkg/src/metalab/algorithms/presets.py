"""Tuned parameter presets for 10, 30 and 50 dimensions."""

TUNED = {
    "ao": {
        10: {"pop_size": 34, "alpha": 0.9161, "delta": 0.3806},
        30: {"pop_size": 10, "alpha": 0.4207, "delta": 0.9379},
        50: {"pop_size": 69, "alpha": 0.186, "delta": 0.6773},
    },
    "sdcs": {
        10: {"pop_size": 10, "omega": 0.3413, "J": 0.8281, "a0": 0.9491},
        30: {"pop_size": 24, "omega": 0.1854, "J": 0.9618, "a0": 0.5973},
        50: {"pop_size": 10, "omega": 0.9137, "J": 0.9316, "a0": 0.5201},
    },
    "igoa": {
        10: {"pop_size": 34},
        30: {"pop_size": 35},
        50: {"pop_size": 25},
    },
    "hgsa": {
        10: {"pop_size": 37, "G0": 89},
        30: {"pop_size": 23, "G0": 118},
        50: {"pop_size": 24, "G0": 116},
    },
    "mfla": {
        10: {"m": 5, "n": 5, "beta": 0.7563},
        30: {"m": 4, "n": 6, "beta": 0.5867},
        50: {"m": 4, "n": 5, "beta": 1.4742},
    },
    "imfo": {
        10: {"pop_size": 119, "b": 4, "P": 0.0199},
        30: {"pop_size": 118, "b": 4, "P": 0.2963},
        50: {"pop_size": 93, "b": 3, "P": 0.3593},
    },
    "msca": {
        10: {"pop_size": 27, "Pc": 0.0659, "a": 1, "mu": 3},
        30: {"pop_size": 31, "Pc": 0.0319, "a": 1, "mu": 4},
        50: {"pop_size": 31, "Pc": 0.0116, "a": 1, "mu": 4},
    },
    "gsk": {
        10: {"pop_size": 101, "P": 0.1353, "k_f": 0.4822, "k_r": 0.9797, "K": 12},
        30: {"pop_size": 93, "P": 0.052, "k_f": 0.485, "k_r": 0.991, "K": 10},
        50: {"pop_size": 100, "P": 0.0521, "k_f": 0.4581, "k_r": 0.9309, "K": 9},
    },
    "mpa": {
        10: {"pop_size": 21, "FADs": 0.8297, "P": 0.6737},
        30: {"pop_size": 31, "FADs": 0.1014, "P": 0.1949},
        50: {"pop_size": 25, "FADs": 0.3425, "P": 0.5076},
    },
    "eo": {
        10: {"pop_size": 33, "a1": 1.8876, "a2": 0.9305, "GP": 0.2999},
        30: {"pop_size": 31, "a1": 1.9447, "a2": 0.95021, "GP": 0.5871},
        50: {"pop_size": 20, "a1": 1.8587, "a2": 1.1681, "GP": 0.7087},
    },
    "ebcm": {
        10: {"prob_ls": 0.9209, "sigma": 0.2997, "arch_rate": 2.3947, "H": 5},
        30: {"prob_ls": 0.4149, "sigma": 0.9267, "arch_rate": 3.2152, "H": 8},
        50: {"prob_ls": 0.818, "sigma": 0.019, "arch_rate": 3.0527, "H": 4},
    },
}
