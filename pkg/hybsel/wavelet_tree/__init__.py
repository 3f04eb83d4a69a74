from .tree import (
    Backend,
    WaveletNode,
    WaveletShape,
    WaveletTree,
    backend_factory,
    balanced_codes,
    huffman_codes,
)

__all__ = [
    'Backend',
    'WaveletNode',
    'WaveletShape',
    'WaveletTree',
    'backend_factory',
    'balanced_codes',
    'huffman_codes',
]
