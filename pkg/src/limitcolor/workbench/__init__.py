from .dnum import bfs_candidate_coloring, distinguishing_index, distinguishing_number, line_graph
from .generators import generate
