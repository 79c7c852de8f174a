"""
src/runner/tasks.py - Tier Dispatcher
Routes a configuration to the solver tier that should run it
"""

import logging
from typing import Callable, Dict, Optional

from src.model.errors import ConfigValidationError
from src.model.simulation_config import SimulationConfig, SolverTier
from src.model.snapshots import SnapshotSeries
from src.solvers.analytic_solution import run_analytic_tier
from src.solvers.field_propagation import run_full_tier, run_reduced_tier

logger = logging.getLogger(__name__)


class TierDispatcher:
    """
    Dispatch runs to the solver of the requested tier.
    New tiers register a handler here.
    """

    def __init__(self):
        self.tier_handlers: Dict[str, Callable[[SimulationConfig], SnapshotSeries]] = {
            SolverTier.FULL.value: run_full_tier,
            SolverTier.REDUCED.value: run_reduced_tier,
            SolverTier.ANALYTIC.value: run_analytic_tier,
        }
        logger.debug(f"TierDispatcher initialized with {len(self.tier_handlers)} handlers")

    def resolve(self, config: SimulationConfig, tier: Optional[str] = None) -> SimulationConfig:
        """The config re-validated for `tier` (or as configured)"""
        if tier is None or tier == config.solver_tier.value:
            return config
        if tier not in self.tier_handlers:
            raise ConfigValidationError(f"unknown tier {tier!r}; expected one of {list(self.tier_handlers)}",
                                        key="run.tier")
        return config.with_updates(solver_tier=SolverTier(tier))

    def dispatch(self, config: SimulationConfig, tier: Optional[str] = None) -> SnapshotSeries:
        """
        Run config on a tier.

        Args:
            config: Validated configuration
            tier: Override of config.solver_tier

        Returns:
            Snapshot series of the run
        """
        config = self.resolve(config, tier)
        handler = self.tier_handlers[config.solver_tier.value]
        logger.info(f"[CLI] Dispatching {config.solver_tier.value} run ({config.n_steps} steps)")
        return handler(config)
