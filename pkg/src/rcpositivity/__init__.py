"""Numerical checks of curvature positivity notions for Hermitian vector bundles.

Submodules: ``tensor`` (curvature tensors and symmetries), ``zoo`` (model
tensors), ``functionals`` (H, Ric_k, S_k and friends), ``spherical`` (sphere
moments), ``grassmann`` (Grassmannian optimization and certificates),
``vanishing`` (vanishing constants and region), ``extremal`` (S_k-extremal
planes) and ``cli``.
"""

__version__ = "0.1.0"
