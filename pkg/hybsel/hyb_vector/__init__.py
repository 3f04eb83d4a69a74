from .block_codec import (
    EncodedBlock,
    block_access,
    block_rank,
    choose_block_encoding,
    classify,
    decode_block,
    minority_select,
    recover_last_run_ending,
    runlength_select,
)
from .params import BlockHeader, EncodingKind, HybParams, HyperblockHeader, SuperblockHeader
from .select_index import SelectIndex, build_select_index
from .vector import BlockScan, HybVector, SuperblockLocation

__all__ = [
    'BlockHeader',
    'BlockScan',
    'EncodedBlock',
    'EncodingKind',
    'HybParams',
    'HybVector',
    'HyperblockHeader',
    'SelectIndex',
    'SuperblockHeader',
    'SuperblockLocation',
    'block_access',
    'block_rank',
    'build_select_index',
    'choose_block_encoding',
    'classify',
    'decode_block',
    'minority_select',
    'recover_last_run_ending',
    'runlength_select',
]
