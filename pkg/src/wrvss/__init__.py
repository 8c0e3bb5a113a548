"""Weighted ramp verifiable secret sharing with logarithmic-size proofs."""
from .wvss import WvssParams, derive_params, reconstruct, share, verify_deal

__all__ = ["WvssParams", "derive_params", "reconstruct", "share", "verify_deal"]
