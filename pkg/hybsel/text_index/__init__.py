from .plcp import PlcpBitvector, plcp_array, plcp_bitvector, plcp_query, plcp_values
from .suffix_array import (
    SENTINEL,
    SaLcpBundle,
    build_text_index,
    bwt,
    bwt_runs,
    inverse_suffix_array,
    lcp_array,
    prepare_text,
    suffix_array,
)

__all__ = [
    'SENTINEL',
    'PlcpBitvector',
    'SaLcpBundle',
    'build_text_index',
    'bwt',
    'bwt_runs',
    'inverse_suffix_array',
    'lcp_array',
    'plcp_array',
    'plcp_bitvector',
    'plcp_query',
    'plcp_values',
    'prepare_text',
    'suffix_array',
]
