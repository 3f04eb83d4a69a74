from .broadword import popcount_word, popcount_words, select_in_word
from .packed_bits import PackedBits
from .plain_vector import PlainBitVector
from .protocol import RankSelectSupport

__all__ = [
    'PackedBits',
    'PlainBitVector',
    'RankSelectSupport',
    'popcount_word',
    'popcount_words',
    'select_in_word',
]
