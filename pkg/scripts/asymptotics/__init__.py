"""
Asymptotics module with one provider per theorem.
Provides a factory pattern to select the theorem covering a model's symmetry class and drift.
"""

import logging
from typing import Any, Dict, Optional, Type

from scripts.asymptotics.base_theorem import AsymptoticPrediction, BaseTheorem
from scripts.asymptotics.saddle import second_order_main
from scripts.asymptotics.theorems.highly_symmetric import HighlySymmetricTheorem
from scripts.asymptotics.theorems.negative_drift import NegativeDriftTheorem
from scripts.asymptotics.theorems.positive_drift import PositiveDriftTheorem
from scripts.asymptotics.theorems.zero_drift import ZeroDriftTheorem
from scripts.errors import UnsupportedClass
from scripts.walk_model import AxisDecomposition, WalkModel, decompose


class TheoremFactory:
    """
    Factory for creating theorem provider instances.

    Supported theorems:
    - 'Thm1': highly symmetric models
    - 'Thm2': mostly symmetric models with positive drift
    - 'Thm3': mostly symmetric models with negative drift
    - 'Thm4': mostly symmetric models with zero drift
    """

    PROVIDERS: Dict[str, Type[BaseTheorem]] = {
        "Thm1": HighlySymmetricTheorem,
        "Thm2": PositiveDriftTheorem,
        "Thm3": NegativeDriftTheorem,
        "Thm4": ZeroDriftTheorem,
    }

    @staticmethod
    def create_provider(tag: str, config: Optional[Dict[str, Any]] = None) -> BaseTheorem:
        """
        Create a theorem provider instance.

        Args:
            tag: Theorem tag ('Thm1' .. 'Thm4', case-insensitive)
            config: Optional provider configuration

        Returns:
            BaseTheorem instance

        Raises:
            ValueError: If the tag is unknown
        """
        normalized = tag[:1].upper() + tag[1:].lower()
        if normalized not in TheoremFactory.PROVIDERS:
            raise ValueError(f"Unknown theorem: '{tag}'. Available theorems: {', '.join(TheoremFactory.PROVIDERS)}")
        return TheoremFactory.PROVIDERS[normalized](config)

    @staticmethod
    def provider_for(decomposition: AxisDecomposition, config: Optional[Dict[str, Any]] = None) -> BaseTheorem:
        """
        Select the theorem whose hypotheses the model satisfies.

        Raises:
            UnsupportedClass: If no theorem applies
        """
        logger = logging.getLogger(__name__)
        for tag, provider_class in TheoremFactory.PROVIDERS.items():
            provider = provider_class(config)
            if provider.applies_to(decomposition):
                logger.debug(f"Selected {tag} for class {decomposition.model_class.kind}")
                return provider
        raise UnsupportedClass(f"No theorem covers class {decomposition.model_class.kind}")

    @staticmethod
    def list_available() -> Dict[str, str]:
        """
        List all theorems with the family each covers.

        Returns:
            Dictionary mapping theorem tag to description
        """
        return {tag: provider.description for tag, provider in TheoremFactory.PROVIDERS.items()}


def predict(model: WalkModel, second_order: bool = False) -> AsymptoticPrediction:
    """
    Leading asymptotics of a highly or mostly symmetric model.

    Args:
        model: The walk model, in any axis order
        second_order: Attach the second-order coefficient (zero drift and highly symmetric models)

    Returns:
        AsymptoticPrediction from the applicable theorem

    Raises:
        UnsupportedClass: If the model is neither highly nor mostly symmetric
        NonZeroDrift: If ``second_order`` is requested for a drifting model
    """
    decomposition = decompose(model)
    prediction = TheoremFactory.provider_for(decomposition).predict(decomposition)
    if second_order:
        prediction = prediction.with_second_order(second_order_main(model))
    return prediction


__all__ = ["AsymptoticPrediction", "BaseTheorem", "TheoremFactory", "predict"]
