"""Lossless token sequence compression with meta-tokens."""

from ._core import (
    CompressedSequence,
    CorpusExhausted,
    IdOutOfRange,
    InsufficientTree,
    LtscError,
    MalformedDictionary,
    ParseError,
    Tokenizer,
    UnknownMetaToken,
    VocabSpec,
    attention_savings,
    compress,
    decompress,
    find_candidates,
    from_json,
    parse_flat,
    swap_is_profitable,
    tree,
)

__all__ = [
    "CompressedSequence",
    "CorpusExhausted",
    "IdOutOfRange",
    "InsufficientTree",
    "LtscError",
    "MalformedDictionary",
    "ParseError",
    "Tokenizer",
    "UnknownMetaToken",
    "VocabSpec",
    "attention_savings",
    "compress",
    "decompress",
    "find_candidates",
    "from_json",
    "parse_flat",
    "swap_is_profitable",
    "tree",
]
