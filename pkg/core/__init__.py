# core/__init__.py
from . import constants, errors, graph_core, resolving, solvers, tree_line, families, reduction, io, report
from .help import how_it_works_md, usage_epilog
