"""
Generating words, gaps and blocks for the Chacon subshift
==========================================================

Words, gap sequences and the set of achievable 0-block lengths,
computed twice: from the gaps and from the expanded string.
"""

from rankone import family_spec
from rankone.blocks import block_lengths, witness_difference
from rankone.oracle import string_block_lengths
from rankone.parser import is_n_block
from rankone.words import build_word, gap_sequence

ch = family_spec("chacon")
for n in range(4):
    print(n, build_word(ch, n))

# gaps between consecutive copies of v_0 inside v_2, run-length encoded
gs = gap_sequence(ch, 0, 2)
print(gs.to_dict())

ls = block_lengths(ch, 0, 12, 2)
print("0-block lengths up to 12:", list(ls.lengths))
print("same from the string:", sorted(string_block_lengths(ch, 0, 2)))

# two 1-blocks whose lengths differ by exactly 3
pair = witness_difference(ch, 1, 3)
a, b = (blk.render(ch) for blk in pair)
print(len(a), len(b), is_n_block(a, ch, 1, pair.context), is_n_block(b, ch, 1, pair.context))
