"""scikit-learn style front end for per-curve security estimation."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import as_instance, as_instances, check_choice, check_positive_int, check_seed
from .cost_model import LINALG_FORMS, MODELS, GridConfig, ModelParams
from .norm_mc import AVERAGINGS, DEFAULT_SAMPLES, METHODS
from .security import profile
from .tnfs_setup import H_POLICIES, build_setup


class SecurityEstimator(BaseEstimator):
    """Estimate field-side and curve-side security of pairing-friendly curves.

    ``fit`` takes one curve (instance or registered name) and stores the
    optimum in trailing-underscore attributes.  ``transform`` and ``predict``
    take a sequence of curves and return one row per curve.
    """

    def __init__(
        self,
        model="BD",
        linalg_form="algorithm",
        samples=DEFAULT_SAMPLES,
        seed=0,
        search_method="float",
        final_method="exact",
        averaging="geometric",
        log2B_max=128.0,
        h_policy="recipe",
    ):
        self.model = model
        self.linalg_form = linalg_form
        self.samples = samples
        self.seed = seed
        self.search_method = search_method
        self.final_method = final_method
        self.averaging = averaging
        self.log2B_max = log2B_max
        self.h_policy = h_policy

    def _check_params(self):
        check_choice("model", self.model, MODELS)
        check_choice("linalg_form", self.linalg_form, LINALG_FORMS)
        check_choice("search_method", self.search_method, METHODS)
        check_choice("final_method", self.final_method, METHODS)
        check_choice("averaging", self.averaging, AVERAGINGS)
        check_choice("h_policy", self.h_policy, H_POLICIES)
        check_positive_int("samples", self.samples)
        check_seed(self.seed)
        if not 1.0 < float(self.log2B_max) <= 200.0:
            raise ValueError("log2B_max must lie in (1, 200]")

    def _config(self) -> tuple[ModelParams, GridConfig]:
        params = ModelParams(model=self.model, linalg_form=self.linalg_form)
        grid = GridConfig(
            log2B_max=float(self.log2B_max),
            samples=int(self.samples),
            search_method=self.search_method,
            final_method=self.final_method,
            averaging=self.averaging,
        )
        return params, grid

    def _profile(self, instance):
        params, grid = self._config()
        return profile(instance, params, int(self.seed), grid, h_policy=self.h_policy)

    def fit(self, X, y=None):
        self._check_params()
        inst = as_instance(X)
        prof = self._profile(inst)
        self.instance_ = inst
        self.setup_ = build_setup(inst, h_policy=self.h_policy)
        self.profile_ = prof
        self.result_ = prof.field_result
        self.A_ = prof.field_result.best.A
        self.log2_B_ = prof.field_result.best.log2_B
        self.log2_norms_ = (prof.field_result.norm.log2_N1, prof.field_result.norm.log2_N2)
        self.security_bits_ = prof.combined_bits
        self.field_side_bits_ = prof.field_side_bits
        self.curve_side_bits_ = prof.curve_side_bits
        return self

    def transform(self, X) -> np.ndarray:
        """Rows of (curve_side_bits, field_side_bits, combined_bits)."""
        self._check_params()
        rows = []
        for inst in as_instances(X):
            if getattr(self, "instance_", None) == inst:
                prof = self.profile_
            else:
                prof = self._profile(inst)
            rows.append((prof.curve_side_bits, prof.field_side_bits, prof.combined_bits))
        return np.asarray(rows, dtype=float)

    def predict(self, X) -> np.ndarray:
        return self.transform(X)[:, 2]
