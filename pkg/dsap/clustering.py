"""
Dataset clustering over pairwise demographic similarity.

Distances are 1 - DS. Complete linkage merges the two closest clusters, the
distance between clusters being the largest distance between their members;
equal distances are resolved by merging the pair with the smallest
(min node id, max node id). Leaves are nodes 0..n-1 and the i-th merge
creates node n + i.
"""

import string

from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from scipy.cluster.hierarchy import cophenet, fcluster, leaves_list
from scipy.spatial.distance import squareform

from .errors import InputError
from .log import get_logger
from .similarity import ds_value

logger = get_logger('clustering')

DEFAULT_THRESHOLD = 0.6
MATRIX_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class SimilarityMatrix(object):
    axis_id: str
    dataset_ids: tuple
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        n = len(self.dataset_ids)
        if values.shape != (n, n):
            raise InputError('similarity matrix must be %dx%d' % (n, n))
        if not np.allclose(values, values.T, rtol=0,
                           atol=MATRIX_TOLERANCE):
            raise InputError('similarity matrix is not symmetric')
        if (values < 0).any() or (values > 1).any():
            raise InputError('similarities must lie in [0, 1]')
        if not np.allclose(np.diag(values), 1.0, rtol=0,
                           atol=MATRIX_TOLERANCE):
            raise InputError('similarity matrix must have a unit diagonal')
        np.fill_diagonal(values, 1.0)
        values.setflags(write=False)
        object.__setattr__(self, 'dataset_ids', tuple(self.dataset_ids))
        object.__setattr__(self, 'values', values)

    def distances(self):
        return 1.0 - self.values


@dataclass(frozen=True)
class Merge(object):
    left: int
    right: int
    height: float
    size: int


@dataclass(frozen=True)
class Dendrogram(object):
    dataset_ids: tuple
    merges: tuple

    def to_linkage(self):
        """
        The merges as a scipy linkage matrix, one (left, right, height,
        size) row per merge

        :return: numpy.ndarray
        """
        return np.array([[m.left, m.right, m.height, m.size]
                         for m in self.merges], dtype=np.float64)


@dataclass(frozen=True)
class ClusterAssignment(object):
    threshold: float
    labels: OrderedDict

    def clusters(self):
        """
        :return: OrderedDict[str,list[str]] label to dataset ids
        """
        clusters = OrderedDict()
        for dataset_id, label in self.labels.items():
            clusters.setdefault(label, []).append(dataset_id)
        return OrderedDict(sorted(clusters.items(),
                                  key=lambda item: _label_key(item[0])))


def _label_key(label):
    return (len(label), label)


def cluster_label(index):
    """
    A, B, ..., Z, AA, AB, ...

    :param index: int
    :return: str
    """
    label = ''
    index += 1
    while index:
        index, rest = divmod(index - 1, 26)
        label = string.ascii_uppercase[rest] + label
    return label


def pairwise_matrix(profiles, axis_id):
    """
    DS of every pair of datasets on one axis

    :param profiles: list[DatasetProfile]
    :param axis_id: str
    :return: SimilarityMatrix
    """
    if len(profiles) < 2:
        raise InputError('need at least 2 datasets to compare, got %d' %
                         len(profiles))
    axis_profiles = [profile.axis(axis_id) for profile in profiles]
    n = len(profiles)
    values = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            values[i, j] = values[j, i] = ds_value(axis_profiles[i],
                                                   axis_profiles[j])
    return SimilarityMatrix(axis_id, tuple(p.dataset_id for p in profiles),
                            values)


def complete_linkage(matrix):
    """
    :param matrix: SimilarityMatrix
    :return: Dendrogram
    """
    n = len(matrix.dataset_ids)
    if n < 2:
        raise InputError('need at least 2 datasets to cluster')

    dist = matrix.distances()
    sizes = dict((i, 1) for i in range(n))
    pairs = dict(((i, j), float(dist[i, j]))
                 for i in range(n) for j in range(i + 1, n))

    merges = []
    next_id = n
    while len(sizes) > 1:
        (left, right), height = min(pairs.items(),
                                    key=lambda item: (item[1], item[0]))
        size = sizes.pop(left) + sizes.pop(right)
        merges.append(Merge(left, right, height, size))
        logger.debug('merge %d + %d at %.6f', left, right, height)

        for other in sizes:
            pairs[(other, next_id)] = max(
                pairs[tuple(sorted((other, left)))],
                pairs[tuple(sorted((other, right)))])
        pairs = dict((key, value) for key, value in pairs.items()
                     if left not in key and right not in key)
        sizes[next_id] = size
        next_id += 1

    return Dendrogram(matrix.dataset_ids, tuple(merges))


def cophenetic_matrix(dendro):
    """
    Height at which each pair of leaves first joins

    :param dendro: Dendrogram
    :return: numpy.ndarray
    """
    return squareform(cophenet(dendro.to_linkage()))


def leaf_order(dendro):
    """
    Display order of the leaves, walking the tree from the last merge and
    visiting the left child first

    :param dendro: Dendrogram
    :return: list[int]
    """
    if not dendro.merges:
        return list(range(len(dendro.dataset_ids)))
    return [int(leaf) for leaf in leaves_list(dendro.to_linkage())]


def cut_dendrogram(dendro, threshold=DEFAULT_THRESHOLD):
    """
    Flat clusters keeping every merge at or below the threshold, labeled
    A, B, ... in the order their first dataset appears

    :param dendro: Dendrogram
    :param threshold: float
    :return: ClusterAssignment
    """
    if threshold < 0:
        raise InputError('threshold must be >= 0, got %r' % threshold)

    if dendro.merges:
        flat = fcluster(dendro.to_linkage(), float(threshold),
                        criterion='distance')
    else:
        flat = range(len(dendro.dataset_ids))

    labels = OrderedDict()
    names = {}
    for dataset_id, cluster in zip(dendro.dataset_ids, flat):
        if cluster not in names:
            names[cluster] = cluster_label(len(names))
        labels[dataset_id] = names[cluster]
    return ClusterAssignment(float(threshold), labels)
