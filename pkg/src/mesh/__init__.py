from .triangle_mesh import (
    TriangleMesh, build_rectangle_mesh, carve, dump_mesh, mesh_size,
    refine_uniform,
)
from .tagging import on_line_x, on_line_y, outside_x, tag_boundaries
from .trace_mesh import (
    TraceMesh, extract_trace_mesh, merge_trace_partitions, trace_mesh_size,
)
