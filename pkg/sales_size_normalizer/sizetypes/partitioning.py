"""
sales_size_normalizer/sizetypes/partitioning.py

Weighted token-position distance between size strings and the clustering
that splits a pattern group into (unordered) size types.
"""

import sys

from dataclasses import dataclass, field

import numpy as np

from scipy.special import softmax
from sklearn.cluster import AgglomerativeClustering
from sklearn.metrics import silhouette_score

from sales_size_normalizer.parsing.tokenizer import pattern_key


DEFAULT_BETA_SOFTMAX = 15.0
DEFAULT_EPSILON_STD = 0.005
DEFAULT_MAX_CLUSTERS = 12

# Distance between sizes whose token patterns differ
INFINITE_DISTANCE = float('inf')

# Two-member groups: silhouette is undefined, the pair stays together below this
PAIR_DISTANCE_THRESHOLD = 0.5


@dataclass
class PatternGroup:
    """Sizes of one brand sharing a token-type pattern."""
    
    brand: str
    pattern: str
    members: list = field(default_factory=list)
    
    def __post_init__(self):
        seen = set()
        unique = []
        for member in self.members:
            if pattern_key(member) != self.pattern:
                raise ValueError(
                    f"Size {member.raw!r} has pattern {pattern_key(member)}, "
                    f"expected {self.pattern}"
                )
            if member.raw not in seen:
                seen.add(member.raw)
                unique.append(member)
        self.members = unique
    
    @property
    def width(self):
        """Number of token positions in the pattern."""
        return len(self.members[0].tokens) if self.members else 0


@dataclass
class PositionWeights:
    """Per-position weights used by the size distance."""
    
    q_hat: np.ndarray
    q: np.ndarray
    beta_softmax: float = DEFAULT_BETA_SOFTMAX
    epsilon_std: float = DEFAULT_EPSILON_STD


@dataclass
class ClusteringTrace:
    """What cluster_group() saw and decided, for diagnostics."""
    
    brand: str
    pattern: str
    raws: list
    distances: np.ndarray
    off_diagonal_std: float
    silhouette_by_k: dict
    chosen_k: int
    rule: str


def position_weights(group, beta_softmax=DEFAULT_BETA_SOFTMAX, epsilon_std=DEFAULT_EPSILON_STD):
    """
    Compute position weights for a pattern group.
    
    q_hat[i] = 1 - (unique tokens at position i) / (unique tokens over all
    positions), and q = softmax(beta_softmax * q_hat).
    
    Args:
        group (PatternGroup): Group with at least one member
        beta_softmax (float): Softmax temperature
        epsilon_std (float): Single-cluster threshold carried along for clustering
        
    Returns:
        PositionWeights: Raw and normalized weights
    """
    if not group.members:
        raise ValueError(f"Pattern group {group.pattern} of brand {group.brand} is empty")
    
    unique_counts = np.array([
        len({member.tokens[position].text for member in group.members})
        for position in range(group.width)
    ], dtype=float)
    
    q_hat = 1.0 - unique_counts / unique_counts.sum()
    q = softmax(beta_softmax * q_hat)
    
    return PositionWeights(q_hat=q_hat, q=q, beta_softmax=beta_softmax, epsilon_std=epsilon_std)


def distance(a, b, weights):
    """
    Weighted token-position distance between two tokenized sizes.
    
    dist = 1 - sum_i 1[a_i == b_i] * q_i; sizes with different patterns are
    infinitely far apart.
    
    Args:
        a (TokenizedSize): First size
        b (TokenizedSize): Second size
        weights (PositionWeights): Weights of the shared pattern
        
    Returns:
        float: Distance in [0, 1], or INFINITE_DISTANCE
    """
    if a.pattern != b.pattern:
        return INFINITE_DISTANCE
    
    if len(weights.q) != len(a.tokens):
        raise ValueError(f"Weights have {len(weights.q)} positions, size {a.raw!r} has {len(a.tokens)}")
    
    similarity = sum(
        q_i for token_a, token_b, q_i in zip(a.tokens, b.tokens, weights.q)
        if token_a.text == token_b.text
    )
    return min(1.0, max(0.0, 1.0 - float(similarity)))


def distance_matrix(members, weights):
    """
    Pairwise distance matrix for members of one pattern group.
    
    Args:
        members (list): TokenizedSize objects sharing a pattern
        weights (PositionWeights): Weights of that pattern
        
    Returns:
        np.ndarray: Symmetric (n, n) matrix with a zero diagonal
    """
    n = len(members)
    matrix = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            matrix[i, j] = matrix[j, i] = distance(members[i], members[j], weights)
    return matrix


def _off_diagonal_std(matrix):
    """Standard deviation of the off-diagonal entries."""
    n = matrix.shape[0]
    if n < 2:
        return 0.0
    return float(np.std(matrix[~np.eye(n, dtype=bool)]))


def _labels_to_clusters(members, labels):
    """Group members by label, clusters ordered by first appearance."""
    clusters = {}
    for member, label in zip(members, labels):
        clusters.setdefault(label, []).append(member)
    return list(clusters.values())


def cluster_group(group, weights, max_clusters=DEFAULT_MAX_CLUSTERS, debug=False):
    """
    Split a pattern group into clusters (unordered size types).
    
    One cluster when the off-diagonal distances have a standard deviation
    below epsilon_std; otherwise complete-linkage agglomerative clustering
    with the cluster count in [2, min(n - 1, max_clusters)] that maximizes the
    silhouette score (ties go to the smaller count).
    
    Args:
        group (PatternGroup): Group to split
        weights (PositionWeights): Weights for the group's pattern
        max_clusters (int): Upper bound on candidate cluster counts
        debug (bool): Print the decision to stderr
        
    Returns:
        tuple: (clusters, trace) where clusters is a list of member lists
    """
    members = group.members
    raws = [member.raw for member in members]
    matrix = distance_matrix(members, weights)
    spread = _off_diagonal_std(matrix)
    silhouettes = {}
    
    if len(members) == 1:
        clusters, rule = [list(members)], 'single_member'
    
    elif len(members) == 2:
        # Off-diagonal std of a 2x2 matrix is always 0, so the pair rule decides
        if group.width == 1 or matrix[0, 1] < PAIR_DISTANCE_THRESHOLD:
            clusters, rule = [list(members)], 'pair_together'
        else:
            clusters, rule = [[members[0]], [members[1]]], 'pair_split'
    
    elif spread < weights.epsilon_std:
        clusters, rule = [list(members)], 'epsilon'
    
    else:
        best_k, best_score, best_labels = None, -np.inf, None
        for k in range(2, min(len(members) - 1, max_clusters) + 1):
            labels = AgglomerativeClustering(
                n_clusters=k, metric='precomputed', linkage='complete'
            ).fit_predict(matrix)
            score = float(silhouette_score(matrix, labels, metric='precomputed'))
            silhouettes[k] = score
            if score > best_score + 1e-12:
                best_k, best_score, best_labels = k, score, labels
        clusters, rule = _labels_to_clusters(members, best_labels), 'silhouette'
    
    trace = ClusteringTrace(
        brand=group.brand,
        pattern=group.pattern,
        raws=raws,
        distances=matrix,
        off_diagonal_std=spread,
        silhouette_by_k=silhouettes,
        chosen_k=len(clusters),
        rule=rule,
    )
    
    if debug:
        print(f"DEBUG: Brand '{group.brand}' pattern {group.pattern}: {len(members)} sizes -> "
              f"{len(clusters)} clusters ({rule}, std={spread:.4f})", file=sys.stderr)
    
    return clusters, trace

# End of file #
