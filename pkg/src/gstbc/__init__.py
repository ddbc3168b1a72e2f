"""gstbc: exact-arithmetic construction, exhaustive search and verification
of multi-group decodable space-time block codes on 2**a transmit antennas."""

__version__ = "0.1.0"

from .exact import ExactMatrix, GaussianRational, rank_over_reals  # noqa: F401
from .clifford import basis, generators, thread_permutations  # noqa: F401
from .admissible import enumerate_candidates, single_thread_profile  # noqa: F401
from .search import (GroupSignature, Seed, StbcCode, find_seeds,  # noqa: F401
                     max_rate_search, reconstruct_weights, remove_columns)
from .codecheck import (ConstellationSpec, check_cross_group,  # noqa: F401
                        check_independence, check_unit_single_thread,
                        coding_gain, decoding_complexity, verify_report)
from .serialize import load_code, load_fixture  # noqa: F401
