"""
Dataset bias measures.

The DS based measures compare a profile with an ideal one: the uniform
profile (representational bias, DS_R), the uniform profile over the groups
actually present (evenness, DS_E), or the rest of the dataset for each class
(stereotypical bias, DS_S). Richness, ENS, SEI and Cramér's V are computed
alongside as the classical baselines.
"""

import math

from collections import OrderedDict
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce

import numpy as np
from scipy import stats

from .errors import InputError, UndefinedError
from .log import get_logger
from .profile import AxisProfile, InvalidProportions, UnknownGroup
from .similarity import ds_value

logger = get_logger('bias')

MEASURES = ('ds_r', 'ds_e', 'ds_s', 'ens', 'sei', 'richness', 'cramers_v')

# (DSAP measure, classical counterpart)
BASELINE_PAIRS = (('ds_r', 'ens'), ('ds_e', 'sei'), ('ds_s', 'cramers_v'))


class InvalidTarget(InputError):
    pass


class DegenerateTable(UndefinedError):
    pass


class NoClasses(UndefinedError):
    pass


class TargetKind(Enum):
    UNIFORM_AUTO = 'uniform'
    CUSTOM = 'custom'


@dataclass(frozen=True)
class TargetDistribution(object):
    """
    Ideal profile used in place of the uniform one. Groups of the axis
    missing from `proportions` get a zero share.
    """
    axis_id: str
    proportions: dict
    kind: TargetKind = TargetKind.CUSTOM

    @classmethod
    def uniform(cls, axis):
        share = 1.0 / len(axis)
        return cls(axis.id, OrderedDict((g, share) for g in axis.groups),
                   TargetKind.UNIFORM_AUTO)

    def vector(self, axis):
        """
        The target aligned on an axis, validated

        :param axis: DemographicAxis
        :return: numpy.ndarray
        """
        return self.profile(axis).proportions

    def profile(self, axis):
        if self.axis_id != axis.id:
            raise InvalidTarget('target for axis "%s" used on axis "%s"' %
                                (self.axis_id, axis.id))
        try:
            return AxisProfile.from_proportions(axis, dict(self.proportions))
        except UnknownGroup as e:
            raise InvalidTarget('target: %s' % e)
        except InvalidProportions as e:
            raise InvalidTarget('target: %s' % e)


@dataclass
class BiasReport(object):
    """
    Every bias measure of one dataset on one axis. None means undefined.
    `labeled` is False when the dataset has no class labels, ds_s and
    cramers_v are then not reported at all.
    """
    dataset_id: str
    axis_id: str
    ds_r: float
    ds_e: float
    ds_s: float
    ens: float
    sei: float
    richness: int
    cramers_v: float
    target_kind: TargetKind = TargetKind.UNIFORM_AUTO
    even_target_kind: TargetKind = TargetKind.UNIFORM_AUTO
    labeled: bool = False
    ds_s_per_class: dict = field(default_factory=OrderedDict)
    ds_s_skipped: list = field(default_factory=list)
    ds_r_uniform: float = None
    ds_e_uniform: float = None
    even_target_fallback: str = None

    def value(self, measure):
        return getattr(self, measure)

    def as_dict(self):
        data = OrderedDict([
            ('dataset_id', self.dataset_id),
            ('axis_id', self.axis_id),
            ('ds_r', self.ds_r),
            ('ds_e', self.ds_e),
            ('ens', self.ens),
            ('sei', self.sei),
            ('richness', self.richness),
            ('target_kind', self.target_kind.value),
            ('even_target_kind', self.even_target_kind.value),
        ])
        if self.labeled:
            data['ds_s'] = self.ds_s
            data['cramers_v'] = self.cramers_v
            data['ds_s_per_class'] = self.ds_s_per_class
            data['ds_s_skipped'] = self.ds_s_skipped
        if self.ds_r_uniform is not None:
            data['ds_r_uniform'] = self.ds_r_uniform
            data['ds_r_delta'] = self.ds_r - self.ds_r_uniform
        if self.ds_e_uniform is not None:
            data['ds_e_uniform'] = self.ds_e_uniform
            data['ds_e_delta'] = self.ds_e - self.ds_e_uniform
        if self.even_target_fallback is not None:
            data['even_target_fallback'] = self.even_target_fallback
        return data


def richness(p):
    """
    Number of represented groups

    :param p: AxisProfile
    :return: int
    """
    return int(np.count_nonzero(p.proportions > 0))


def ens(p):
    """
    Effective number of species, exp of the Shannon entropy

    :param p: AxisProfile
    :return: float in [1, richness]
    """
    value = math.exp(stats.entropy(p.proportions))
    return min(max(value, 1.0), float(richness(p)))


def sei(p):
    """
    Shannon evenness index, None for a single represented group

    :param p: AxisProfile
    :return: float|None
    """
    r = richness(p)
    if r < 2:
        return None
    value = stats.entropy(p.proportions) / math.log(r)
    return min(max(value, 0.0), 1.0)


def _table(joint):
    """
    Contingency table (class rows, group columns) with empty rows and
    columns dropped
    """
    classes = sorted(set(label for label, _ in joint))
    groups = list(OrderedDict.fromkeys(group for _, group in joint))
    table = np.zeros((len(classes), len(groups)), dtype=np.float64)
    for (label, group), n in joint.items():
        if n < 0:
            raise InputError('negative count for (%s, %s)' % (label, group))
        table[classes.index(label), groups.index(group)] += n
    table = table[table.sum(axis=1) > 0]
    table = table[:, table.sum(axis=0) > 0]
    if table.shape[0] < 2 or table.shape[1] < 2:
        raise DegenerateTable('contingency table is %dx%d after dropping '
                              'empty rows and columns' % table.shape)
    return table


def chi_square(joint):
    """
    Pearson's chi-square statistic of a (class, group) count table

    :param joint: dict[(str,str),int]
    :return: float
    """
    table = _table(joint)
    return float(stats.chi2_contingency(table, correction=False)[0])


def cramers_v(joint):
    """
    Cramér's V of a (class, group) count table, None when the table
    collapses to a single class or group

    :param joint: dict[(str,str),int]
    :return: float|None
    """
    try:
        table = _table(joint)
    except DegenerateTable:
        return None
    chi2 = float(stats.chi2_contingency(table, correction=False)[0])
    k = min(table.shape[0] - 1, table.shape[1] - 1)
    value = math.sqrt(chi2 / table.sum() / k)
    return min(max(value, 0.0), 1.0)


def ds_r(p, target=None):
    """
    Representational bias: similarity with the uniform profile, or with a
    custom target

    :param p: AxisProfile
    :param target: TargetDistribution|None
    :return: float
    """
    if target is None:
        target = TargetDistribution.uniform(p.axis)
    return ds_value(p, target.profile(p.axis))


def ds_e(p, target=None):
    """
    Evenness: similarity with the uniform profile over the represented
    groups. A custom target must give zero exactly to the groups missing
    from the profile and a positive share to all the others.

    :param p: AxisProfile
    :param target: TargetDistribution|None
    :return: float
    """
    support = p.support()
    if target is None:
        ideal = support / float(support.sum())
        return ds_value(p, AxisProfile(p.axis, ideal))

    ideal = target.vector(p.axis)
    if (ideal[~support] != 0).any() or (ideal[support] <= 0).any():
        raise InvalidTarget('evenness target for axis "%s" must be positive '
                            'exactly on the represented groups' % p.axis.id)
    return ds_value(p, AxisProfile(p.axis, ideal))


def ds_s_detail(dataset, axis_id):
    """
    Similarity of each admissible class with the rest of the dataset

    :param dataset: DatasetProfile
    :param axis_id: str
    :return: OrderedDict[str,float]
    """
    classes = dataset.classes(axis_id)
    if not classes:
        raise NoClasses('dataset "%s" has no class with both X_y and its '
                        'complement non-empty on axis "%s"' %
                        (dataset.dataset_id, axis_id))
    return OrderedDict((label, ds_value(*dataset.class_pair(label, axis_id)))
                       for label in classes)


def ds_s(dataset, axis_id):
    """
    Stereotypical bias, mean per-class similarity

    :param dataset: DatasetProfile
    :param axis_id: str
    :return: float
    """
    values = list(ds_s_detail(dataset, axis_id).values())
    return sum(values) / len(values)


def restrict_target(target, p):
    """
    Evenness target derived from a representational one: the shares of the
    represented groups, renormalized

    :param target: TargetDistribution
    :param p: AxisProfile
    :return: TargetDistribution
    """
    ideal = np.array(target.vector(p.axis))
    support = p.support()
    if (ideal[support] <= 0).any():
        missing = [g for g, s, v in zip(p.axis.groups, support, ideal)
                   if s and v <= 0]
        raise InvalidTarget('target for axis "%s" gives no share to '
                            'represented groups: %s' %
                            (p.axis.id, ', '.join(missing)))
    ideal[~support] = 0.0
    ideal = ideal / ideal.sum()
    return TargetDistribution(p.axis.id,
                              OrderedDict(zip(p.axis.groups, ideal)),
                              TargetKind.CUSTOM)


def evenness_target(target, p):
    """
    Evenness target for a representational one. A target leaving out a
    represented group cannot be restricted to the support of the profile,
    the uniform evenness target is used instead and the reason returned.

    :param target: TargetDistribution
    :param p: AxisProfile
    :return: (TargetDistribution|None, str|None)
    """
    try:
        return restrict_target(target, p), None
    except InvalidTarget as e:
        logger.warning('%s, using the uniform evenness target', e)
        return None, str(e)


def combination_target(combo, component_axes, targets):
    """
    Ideal profile of a combination axis as the product of the ideals of its
    components, uniform where no target is given

    :param combo: DemographicAxis
    :param component_axes: list[DemographicAxis] in combination order
    :param targets: dict[str,TargetDistribution]
    :return: TargetDistribution
    """
    vectors = []
    for axis in component_axes:
        target = targets.get(axis.id) or TargetDistribution.uniform(axis)
        vectors.append(target.vector(axis))
    product = reduce(np.multiply.outer, vectors).ravel()
    kind = TargetKind.UNIFORM_AUTO
    if any(axis.id in targets for axis in component_axes):
        kind = TargetKind.CUSTOM
    return TargetDistribution(combo.id, OrderedDict(zip(combo.groups,
                                                        product)), kind)


def bias_report(dataset, axis_id, targets=None, even_target_fallback=None):
    """
    Compute every measure once for a dataset and an axis

    :param dataset: DatasetProfile
    :param axis_id: str
    :param targets: (TargetDistribution|None, TargetDistribution|None)
                    representational and evenness targets
    :param even_target_fallback: str, why no evenness target was derived
                                 from the representational one
    :return: BiasReport
    """
    rep_target, even_target = targets or (None, None)
    p = dataset.axis(axis_id)

    report = BiasReport(dataset_id=dataset.dataset_id,
                        axis_id=axis_id,
                        ds_r=ds_r(p, rep_target),
                        ds_e=ds_e(p, even_target),
                        ds_s=None,
                        ens=ens(p),
                        sei=sei(p),
                        richness=richness(p),
                        cramers_v=None,
                        even_target_fallback=even_target_fallback)

    if rep_target is not None:
        report.target_kind = rep_target.kind
        if rep_target.kind is TargetKind.CUSTOM:
            report.ds_r_uniform = ds_r(p)
    if even_target is not None:
        report.even_target_kind = even_target.kind
        if even_target.kind is TargetKind.CUSTOM:
            report.ds_e_uniform = ds_e(p)

    if dataset.labeled():
        report.labeled = True
        report.ds_s_skipped = list(dataset.skipped_classes.get(axis_id, []))
        try:
            report.ds_s_per_class = ds_s_detail(dataset, axis_id)
            values = list(report.ds_s_per_class.values())
            report.ds_s = sum(values) / len(values)
        except NoClasses as e:
            logger.warning('%s', e)
        report.cramers_v = cramers_v(dataset.joint(axis_id))

    return report


def baseline_agreement(reports, axis_id):
    """
    Agreement across datasets between each DS measure and its classical
    counterpart: R^2 of the least squares line and Spearman correlation.
    Only reports where both values are defined count, pairs with fewer than
    3 points are left out.

    :param reports: list[BiasReport]
    :param axis_id: str
    :return: OrderedDict[str,dict]
    """
    agreement = OrderedDict()
    reports = [r for r in reports if r.axis_id == axis_id]
    for measure, baseline in BASELINE_PAIRS:
        points = [(r.value(measure), r.value(baseline)) for r in reports
                  if r.value(measure) is not None and
                  r.value(baseline) is not None]
        if len(points) < 3:
            continue
        x = np.array([pt[0] for pt in points])
        y = np.array([pt[1] for pt in points])
        entry = OrderedDict([('n', len(points)), ('r2', None),
                             ('spearman', None)])
        if np.ptp(x) > 0 and np.ptp(y) > 0:
            entry['r2'] = float(stats.linregress(x, y).rvalue ** 2)
            entry['spearman'] = float(stats.spearmanr(x, y)[0])
        agreement['%s~%s' % (measure, baseline)] = entry
    return agreement
