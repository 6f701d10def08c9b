"""Global size limits. Mutate DEFAULT or pass a Budget where accepted."""
import os
from dataclasses import dataclass


@dataclass
class Budget:
    max_order: int = 240          # largest cyclotomic order reached by promotion
    max_degree: int = 64          # factorization degree bound
    max_dim: int = 4096           # refuse to build objects larger than this
    chunk_pairs: int = 4_000_000  # join size per contraction chunk
    tl_max_n: int = 2             # Temperley-Lieb sizes beyond this are refused


DEFAULT = Budget()


def threads(flag=None):
    if flag:
        return int(flag)
    return int(os.environ.get("WHAKIT_THREADS", "1"))
