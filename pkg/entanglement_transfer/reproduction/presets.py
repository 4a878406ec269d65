"""Sweep presets, one per data figure.

The schematic of the squeezed inputs meeting at a beam splitter and the
schematic of the eight-port fiber device carry no data and have no preset.
Grids are given in the command-line syntax so that a preset reads like the
invocation it replaces.
"""

import math

PRESETS = {
    # lossless 50/50 splitter, phase condition pi: maximal entanglement
    "fig2": {
        "quantity": "bs-entangle",
        "grid": ["q1_abs=0:0.9:19", "q2_abs=0:0.9:19"],
        "fixed": {"phase": math.pi, "transmittance": 0.5},
        "cutoff": 60,
    },
    # phase condition 0: separable along |q1| = |q2|
    "fig3": {
        "quantity": "bs-entangle",
        "grid": ["q1_abs=0:0.9:19", "q2_abs=0:0.9:19"],
        "fixed": {"phase": 0.0, "transmittance": 0.5},
        "cutoff": 60,
    },
    "fig4": {
        "quantity": "bs-lossy-bound",
        "grid": ["thickness=0:6:61"],
        "fixed": {
            "n_real": 1.41,
            "n_imag": 0.1,
            "q1_abs": 0.5,
            "q2_abs": 0.5,
            "phase": 0.0,
            "budget": 1e-4,
        },
        "cutoff": 20,
    },
    "fig6": {
        "quantity": "fiber-estimate",
        "grid": ["q_sq=0:0.95:20", "l_over_lA=0:1:21"],
        "fixed": {},
        "cutoff": 30,
    },
    "fig7": {
        "quantity": "fiber-bound",
        "grid": ["q_abs=0:0.9:10", "l_over_lA=0:1:11"],
        "fixed": {"budget": 0.05},
        "cutoff": 30,
    },
    # cutoff follows |q|^n <= 0.02 per point
    "fig8": {
        "quantity": "fiber-bound",
        "grid": ["q_abs=0.1,0.9", "l_over_lA=0:1:21"],
        "fixed": {"budget": 0.05, "amplitude_floor": 0.02},
        "cutoff": 30,
    },
    "fig9": {
        "quantity": "fiber-distance",
        "grid": ["nbar=1,10,100,1000", "l_over_lA=0:0.1:11"],
        "fixed": {"n_th": 0.0},
        "cutoff": 30,
    },
    "fig10": {
        "quantity": "available-entanglement",
        "grid": ["l_over_lA=0,0.01,0.1", "xi=0.1:4:40"],
        "fixed": {"n_th": 0.0},
        "cutoff": 30,
    },
    "fig11": {
        "quantity": "compare",
        "grid": ["l_over_lA=0.01:0.1:10"],
        "fixed": {"nbar": 1.0},
        "cutoff": 30,
    },
}
