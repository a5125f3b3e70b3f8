"""Chaotic keyed hashing by asynchronous iterations of the negation map."""
from .bitcore import BitString, Configuration, encode_ascii7, from_hex, to_hex
from .hashing import (
    ChaosHashParams,
    InnerHash,
    PostTreatKey,
    chaos_digest,
    chaos_hash,
    invert_post_treat,
    post_treat,
)
from .pretreatment import normalize

__all__ = [
    "BitString",
    "Configuration",
    "ChaosHashParams",
    "InnerHash",
    "PostTreatKey",
    "chaos_digest",
    "chaos_hash",
    "encode_ascii7",
    "from_hex",
    "invert_post_treat",
    "normalize",
    "post_treat",
    "to_hex",
]
__version__ = "0.1.0"
