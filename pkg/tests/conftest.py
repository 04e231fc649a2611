import numpy as np
import pytest

from ommsim import model
from ommsim.gaussian import is_stable
from ommsim.model import TWO_PI

W_B = TWO_PI * 1e7
KAPPA_B = TWO_PI * 100.0


def sample_config(rng, stable_only=False, max_tries=50):
    """Random configuration in a neighborhood of the default point."""
    for _ in range(max_tries):
        cfg = model.default_config()
        scale = lambda lo, hi: float(rng.uniform(lo, hi))
        cfg = model.replace_params(
            cfg,
            kappa_a=cfg.modes["a"].decay * scale(0.7, 1.4),
            kappa_A1=cfg.modes["A1"].decay * scale(0.7, 1.4),
            kappa_A2=cfg.modes["A2"].decay * scale(0.7, 1.4),
            kappa_m1=cfg.modes["m1"].decay * scale(0.7, 1.4),
            kappa_m2=cfg.modes["m2"].decay * scale(0.7, 1.4),
            rabi_a=cfg.optical_drive.rabi * scale(0.5, 1.5),
            rabi_m1=cfg.mw_drive_1.rabi * scale(0.5, 1.5),
            rabi_m2=cfg.mw_drive_2.rabi * scale(0.5, 1.5),
            g_ab=cfg.couplings.g_ab * scale(0.5, 1.1),
            g_A1b=cfg.couplings.g_A1b * scale(0.5, 2.0),
            g_A2b=cfg.couplings.g_A2b * scale(0.5, 2.0),
            g_1=cfg.couplings.g_1 * scale(0.7, 1.4),
            g_2=cfg.couplings.g_2 * scale(0.7, 1.4),
            det_a=W_B * scale(0.6, 1.8),
            det_A1=W_B * scale(-0.5, 0.5),
            det_A2=W_B * scale(-0.5, 0.5),
            det_m1=W_B * scale(-0.5, 0.5),
            det_m2=W_B * scale(-0.5, 0.5),
        )
        if not stable_only:
            return cfg
        ss = model.solve_steady_state(cfg)
        if is_stable(model.build_drift(cfg, ss)):
            return cfg
    raise RuntimeError("could not sample a stable configuration")


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
