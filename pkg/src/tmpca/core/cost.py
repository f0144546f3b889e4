"""Operation-count models for tree PCA, full PCA and SVM training.

Counts are returned as floats: they are compared against measured seconds
on a log scale and never need integer exactness beyond 2**53.
"""

from __future__ import annotations

from tmpca.core.validation import tree_depth, validate_positive_int


def tmpca_cost(n: int, d: int, m: int, p: int) -> float:
    """Exact level sum of the tree fit cost.

    Σ_{s=1..log_p n} [ (p·d)³ + m·(n/pˢ)·(p·d)² ]: one eigendecomposition
    of a (p·d)² covariance per level plus the covariance accumulation over
    the m·n/pˢ rows of that level.

    Raises:
        InvalidArgumentError: If an argument is not positive.
        InvalidShapeError: If n is not a power of p.

    Examples:
        >>> tmpca_cost(4, 2, 8, 2)
        512.0
        >>> tmpca_cost(1, 5, 5, 2)
        0.0
    """
    d = validate_positive_int(d, "d")
    m = validate_positive_int(m, "m")
    depth = tree_depth(n, p)
    width = float(p * d)
    total = 0.0
    for level in range(1, depth + 1):
        rows = m * (n // p**level)
        total += width**3 + rows * width**2
    return total


def pca_cost(n: int, d: int, m: int) -> float:
    """Full-sentence PCA cost: n³·d³ + m·n²·d².

    Examples:
        >>> pca_cost(4, 2, 8)
        1024.0
    """
    n = validate_positive_int(n, "n")
    d = validate_positive_int(d, "d")
    m = validate_positive_int(m, "m")
    return float(n * d) ** 3 + m * float(n * d) ** 2


def tmpca_cost_asymptotic(n: int, d: int, m: int, p: int) -> float:
    """Simplified P-way bound: p³·log_p(n)·d³ + m·p·n·d².

    Reporting only; it drops the constant factors the exact sum keeps.

    Examples:
        >>> tmpca_cost_asymptotic(4, 2, 8, 2)
        384.0
    """
    d = validate_positive_int(d, "d")
    m = validate_positive_int(m, "m")
    depth = tree_depth(n, p)
    return float(p**3 * depth) * d**3 + float(m * p * n) * d**2


def svm_cost(m: int, dim: int, epochs: int) -> float:
    """Sub-gradient SVM training cost: epochs·m·dim multiply-adds.

    Examples:
        >>> svm_cost(100, 64, 50)
        320000.0
    """
    m = validate_positive_int(m, "m")
    dim = validate_positive_int(dim, "dim")
    epochs = validate_positive_int(epochs, "epochs")
    return float(epochs) * m * dim
