"""Cotas superiores por ascenso: estado producto más cercano y refinamiento de ensambles."""

try:
    from .ensemble import Ensemble
    from .mixed import ub_mixed
    from .product import ProductSearch, closest_product_state, product_ascent, ub_pure
except ImportError:
    from entbound.ascent.ensemble import Ensemble
    from entbound.ascent.mixed import ub_mixed
    from entbound.ascent.product import ProductSearch, closest_product_state, product_ascent, ub_pure

__all__ = ["Ensemble", "ub_mixed", "ub_pure", "closest_product_state", "product_ascent", "ProductSearch"]
