"""ramsq: 2-edge-coloured graph machinery around squares of paths and cycles.

Library layout:

- :mod:`ramsq.core`          coloured graphs, r-red/r-blue pairs, cgr format
- :mod:`ramsq.powers`        graph powers, P_n^2 / C_n^2, exact chi/sigma/alpha
- :mod:`ramsq.triangles`     triangle components and triangle factors
- :mod:`ramsq.construction`  extremal colouring and its non-containment certificate
- :mod:`ramsq.finders`       matchings, clique partitions, tripartite factors
- :mod:`ramsq.stability`     6-class extremal partition recovery and validators
- :mod:`ramsq.search`        exact containment and small Ramsey searches
- :mod:`ramsq.embedding`     bandwidth-host homomorphisms into reduced graphs
- :mod:`ramsq.cli`           the ``ramsq`` command line tool
"""

from .core import (
    BLUE,
    RED,
    Colour,
    ColouredGraph,
    EdgeState,
    from_cgr,
    is_r_blue_pair,
    is_r_red_pair,
    read_cgr,
    to_cgr,
    write_cgr,
)
from .powers import (
    BurrParameters,
    SimpleGraph,
    burr_lower_bound,
    exact_colouring_stats,
    graph_power,
    independence_number,
    square_cycle,
    square_path,
)
from .triangles import (
    TriangleComponentLabelling,
    TriangleFactor,
    are_triangle_connected,
    cliques_triangle_connected,
    greedy_tctf,
    max_triangle_factor_exact,
    triangle_components,
)

__all__ = [
    "BLUE",
    "RED",
    "Colour",
    "ColouredGraph",
    "EdgeState",
    "SimpleGraph",
    "BurrParameters",
    "burr_lower_bound",
    "exact_colouring_stats",
    "graph_power",
    "independence_number",
    "square_cycle",
    "square_path",
    "TriangleComponentLabelling",
    "TriangleFactor",
    "are_triangle_connected",
    "cliques_triangle_connected",
    "greedy_tctf",
    "max_triangle_factor_exact",
    "triangle_components",
    "from_cgr",
    "to_cgr",
    "read_cgr",
    "write_cgr",
    "is_r_blue_pair",
    "is_r_red_pair",
]

__version__ = "0.1.0"
