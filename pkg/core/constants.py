# core/constants.py
DEFAULT_WORK_LIMIT = 10**9      # subset checks per solve
DEFAULT_BATCH_SIZE = 4096       # subsets evaluated per vectorised batch
DEFAULT_COPIES = 1              # replication N of the matching gadget

# CLI exit codes
EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_WORK_LIMIT = 3

WORK_LIMIT_ENV = "DRS_WORK_LIMIT"
THREADS_ENV = "DRS_THREADS"

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1
