"""
Similarity between two axis profiles.

DS (demographic similarity) is one minus half the L1 distance between two
profiles, which on normalized profiles is the Renkonen index. The Jaccard
(Ruzicka) family orders pairs the same way and converts with J = R / (2 - R).
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InputError
from .profile import AxisMismatch


class InvalidScore(InputError):
    pass


class Family(Enum):
    RENKONEN = 'Renkonen'
    JACCARD = 'Jaccard'


@dataclass(frozen=True)
class SimilarityScore(object):
    value: float
    family: Family
    axis_id: str

    def __float__(self):
        return self.value


def _clip(value):
    return min(1.0, max(0.0, float(value)))


def align(p, q):
    """
    Proportion vectors of two profiles over a shared group list. Profiles of
    the same axis built with different group lists are compared over the
    union of their groups, a missing group counting as zero.

    :param p: AxisProfile
    :param q: AxisProfile
    :return: (numpy.ndarray, numpy.ndarray)
    """
    if p.axis.id != q.axis.id:
        raise AxisMismatch('cannot compare axis "%s" with axis "%s"' %
                           (p.axis.id, q.axis.id))
    if p.axis.groups == q.axis.groups:
        return p.proportions, q.proportions

    groups = list(p.axis.groups) + [g for g in q.axis.groups
                                    if g not in p.axis]
    a = np.zeros(len(groups))
    b = np.zeros(len(groups))
    for i, group in enumerate(groups):
        if group in p.axis:
            a[i] = p.proportions[p.axis.index(group)]
        if group in q.axis:
            b[i] = q.proportions[q.axis.index(group)]
    return a, b


def renkonen(p, q):
    """
    Sum of the group-wise minimum of both profiles

    :param p: AxisProfile
    :param q: AxisProfile
    :return: SimilarityScore
    """
    a, b = align(p, q)
    return SimilarityScore(_clip(np.minimum(a, b).sum()), Family.RENKONEN,
                           p.axis.id)


def ds(p, q):
    """
    Demographic similarity, 1 - 0.5 * sum(|p_g - q_g|)

    :param p: AxisProfile
    :param q: AxisProfile
    :return: SimilarityScore
    """
    a, b = align(p, q)
    return SimilarityScore(_clip(1.0 - 0.5 * np.abs(a - b).sum()),
                           Family.RENKONEN, p.axis.id)


def ds_value(p, q):
    return ds(p, q).value


def jaccard(p, q):
    """
    Quantitative Jaccard (Ruzicka) index on the proportions

    :param p: AxisProfile
    :param q: AxisProfile
    :return: SimilarityScore
    """
    a, b = align(p, q)
    low = np.minimum(a, b).sum()
    high = np.maximum(a, b).sum()
    return SimilarityScore(_clip(low / high), Family.JACCARD, p.axis.id)


def renkonen_to_jaccard(score):
    """
    :param score: SimilarityScore of the Renkonen family
    :return: SimilarityScore of the Jaccard family
    """
    if score.family is not Family.RENKONEN:
        raise InvalidScore('expected a Renkonen score, got %s' %
                           score.family.value)
    r = score.value
    if not 0.0 <= r <= 1.0:
        raise InvalidScore('score %r is outside [0, 1]' % r)
    return SimilarityScore(r / (2.0 - r), Family.JACCARD, score.axis_id)
