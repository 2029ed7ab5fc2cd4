"""
sales_size_normalizer/debug.py

Debug and diagnostic views of the pipeline stages.
Prints distance matrices, silhouette tables, size types, blocks and
solver summaries.
"""

import sys

import numpy as np


def show_clustering(traces, max_sizes=12, out=sys.stdout):
    """
    Show what clustering saw for every pattern group.
    
    Args:
        traces (list): ClusteringTrace objects
        max_sizes (int): Largest distance matrix to print in full
        out: Output stream
    """
    print("=== SIZE TYPE CLUSTERING DEBUG ===", file=out)
    for trace in traces:
        print(f"\n{trace.brand} [{trace.pattern}] {len(trace.raws)} sizes -> "
              f"{trace.chosen_k} size types ({trace.rule})", file=out)
        print(f"  off-diagonal std: {trace.off_diagonal_std:.4f}", file=out)
        
        if trace.silhouette_by_k:
            for k, score in sorted(trace.silhouette_by_k.items()):
                marker = " <- chosen" if k == trace.chosen_k else ""
                print(f"  k={k:2}: silhouette {score:.4f}{marker}", file=out)
        
        if 1 < len(trace.raws) <= max_sizes:
            show_distance_matrix(trace.raws, trace.distances, out=out)


def show_distance_matrix(raws, distances, out=sys.stdout):
    """
    Show a distance matrix with size labels.
    
    Args:
        raws (list): Row/column labels
        distances (np.ndarray): Square matrix
        out: Output stream
    """
    width = max(6, max(len(raw) for raw in raws))
    print("  " + " " * width + "".join(f"{raw:>{width + 1}}" for raw in raws), file=out)
    for raw, row in zip(raws, np.asarray(distances)):
        cells = "".join(f"{value:>{width + 1}.3f}" for value in row)
        print(f"  {raw:>{width}}{cells}", file=out)


def show_size_types(size_type_map, max_types=20, out=sys.stdout):
    """
    Show inferred size types grouped by brand.
    
    Args:
        size_type_map (SizeTypeMap): Inferred size types
        max_types (int): Maximum size types to show
        out: Output stream
    """
    size_types = size_type_map.ordered()
    print(f"Inferred {len(size_types)} size types for {len(size_type_map.brands())} brands:", file=out)
    for size_type in size_types[:max_types]:
        print(f"  {size_type.id:20} {' < '.join(size_type.sizes)}", file=out)
    if len(size_types) > max_types:
        print(f"  ... and {len(size_types) - max_types} more size types", file=out)


def show_block(matrix, size_type_a, size_type_b, out=sys.stdout):
    """
    Show the co-purchase block between two size types.
    
    Raises:
        UnknownSizeType: If either size type is not in the matrix
    """
    block = matrix.block(size_type_a, size_type_b)
    rows = [raw_size for type_id, raw_size in matrix.keys if type_id == size_type_a]
    cols = [raw_size for type_id, raw_size in matrix.keys if type_id == size_type_b]
    
    print(f"Block {size_type_a} x {size_type_b} (mass {block.sum():.3f}):", file=out)
    width = max([8] + [len(raw) for raw in rows + cols])
    print(" " * width + "".join(f"{col:>{width + 1}}" for col in cols), file=out)
    for raw, row in zip(rows, block):
        print(f"{raw:>{width}}" + "".join(f"{value:>{width + 1}.3f}" for value in row), file=out)


def show_solve_summary(info, out=sys.stdout):
    """
    Show the diagnostics of one solve.
    
    Args:
        info (SolveInfo): Solver diagnostics
        out: Output stream
    """
    print(f"{info.backend}: {info.status}, {info.iterations} iterations, "
          f"residual {info.residual:.3e}, loss {info.loss:.6g}, {info.wall_time:.2f}s", file=out)
    for index, component in enumerate(info.components[:10]):
        print(f"  component {index}: {component['variables']} variables, "
              f"{component['iterations']} iterations, {component['status']}", file=out)
    if len(info.components) > 10:
        print(f"  ... and {len(info.components) - 10} more components", file=out)
    if info.max_gap_repair:
        print(f"  largest gap repair: {info.max_gap_repair:.3e}", file=out)

# End of file #
